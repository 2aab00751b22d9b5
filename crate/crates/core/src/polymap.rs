//! Polynomial maps between free modules.
//!
//! [`Poly`] is a sparse multivariate polynomial over an arbitrary coefficient
//! ring; [`PolyMap`] bundles several components over one shared variable list
//! and is the representation of maps `f: K^m -> K^n` used everywhere else.
//! The two exact-division primitives ([`Poly::exact_divide`] by a variable and
//! [`Poly::exact_divide_diff`] by a difference of variables) are what make the
//! singular extension of difference quotients purely algebraic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::rings::{
    p_add, p_is_zero, p_mul, p_neg, p_one, p_zero, Payload, PolyTerms, Ring, RingElement, RingSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("not a polynomial ring")]
    NotPolynomialRing,
    #[error("coefficient ring mismatch")]
    CoeffRingMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("components belong to different polynomial rings")]
    MixedComponents,
    #[error("ring error: {0}")]
    Ring(#[from] crate::rings::RingError),
}

/// Sparse polynomial, canonical at all times: no zero coefficients, exponent
/// vectors of the owning ring's arity.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    data: PolyTerms,
}

impl Poly {
    /// Wraps an element of a polynomial ring.
    pub fn from_element(e: RingElement) -> Result<Poly, PolyError> {
        let ring = e.ring().clone();
        match (ring.spec(), e.payload()) {
            (RingSpec::PolynomialRing { vars, .. }, Payload::Poly(t)) => {
                let n = vars.len();
                let data = PolyTerms {
                    terms: t
                        .terms
                        .iter()
                        .map(|(k, c)| (fix_key(k, n), c.clone()))
                        .collect(),
                };
                Ok(Poly { ring, data })
            }
            _ => Err(PolyError::NotPolynomialRing),
        }
    }

    pub fn as_element(&self) -> RingElement {
        self.ring.element(Payload::Poly(self.data.clone()))
    }

    pub fn zero(ring: &Ring) -> Result<Poly, PolyError> {
        check_poly_ring(ring)?;
        Ok(Poly { ring: ring.clone(), data: PolyTerms::default() })
    }

    pub fn one(ring: &Ring) -> Result<Poly, PolyError> {
        Poly::from_element(ring.one())
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Poly, PolyError> {
        let e = ring
            .var(name)
            .map_err(|_| PolyError::UnknownVariable(name.to_string()))?;
        Poly::from_element(e)
    }

    /// Constant polynomial with the given base-ring coefficient.
    pub fn constant(ring: &Ring, c: &RingElement) -> Result<Poly, PolyError> {
        let e = ring.embed(c).map_err(|_| PolyError::CoeffRingMismatch)?;
        Poly::from_element(e)
    }

    pub fn from_i64(ring: &Ring, n: i64) -> Result<Poly, PolyError> {
        check_poly_ring(ring)?;
        Poly::from_element(ring.from_i64(n))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeff_ring(&self) -> Ring {
        self.ring.base().expect("polynomial ring has a base")
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars().expect("polynomial ring has variables")
    }

    pub fn is_zero(&self) -> bool {
        self.data.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.data.terms.len()
    }

    /// Materializes the terms as (exponent vector, coefficient) pairs in
    /// canonical order.
    pub fn terms(&self) -> Vec<(Vec<u32>, RingElement)> {
        let base = self.coeff_ring();
        self.data
            .terms
            .iter()
            .map(|(k, c)| (fix_key(k, self.vars().len()), base.element(c.clone())))
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.data
            .terms
            .keys()
            .map(|k| k.iter().sum::<u32>())
            .max()
    }

    pub fn var_degree(&self, name: &str) -> Result<u32, PolyError> {
        let idx = self.var_index(name)?;
        Ok(self
            .data
            .terms
            .keys()
            .map(|k| k[idx])
            .max()
            .unwrap_or(0))
    }

    fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    fn base_spec(&self) -> &RingSpec {
        match self.ring.spec() {
            RingSpec::PolynomialRing { base, .. } => base,
            _ => unreachable!("Poly owner is always a polynomial ring"),
        }
    }

    fn from_terms(ring: &Ring, terms: BTreeMap<Vec<u32>, Payload>) -> Poly {
        Poly { ring: ring.clone(), data: PolyTerms { terms } }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring, "polynomials from different rings");
        let p = p_add(
            self.ring.spec(),
            &Payload::Poly(self.data.clone()),
            &Payload::Poly(other.data.clone()),
        );
        payload_into_poly(&self.ring, p)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let p = p_neg(self.ring.spec(), &Payload::Poly(self.data.clone()));
        payload_into_poly(&self.ring, p)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring, "polynomials from different rings");
        let p = p_mul(
            self.ring.spec(),
            &Payload::Poly(self.data.clone()),
            &Payload::Poly(other.data.clone()),
        );
        payload_into_poly(&self.ring, p)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.ring).expect("valid ring");
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplies by a coefficient from the base ring.
    pub fn scale(&self, c: &RingElement) -> Poly {
        let k = Poly::constant(&self.ring, c).expect("coefficient from base ring");
        self.mul(&k)
    }

    /// Evaluates at a point of the coefficient ring.
    pub fn evaluate(&self, point: &[RingElement]) -> Result<RingElement, PolyError> {
        let vars = self.vars();
        if point.len() != vars.len() {
            return Err(PolyError::ArityMismatch { expected: vars.len(), got: point.len() });
        }
        let base = self.coeff_ring();
        for p in point {
            if p.ring() != &base {
                return Err(PolyError::CoeffRingMismatch);
            }
        }
        let spec = self.base_spec();
        let mut acc = p_zero(spec);
        for (key, coeff) in &self.data.terms {
            let mut term = coeff.clone();
            for (i, e) in key.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let mut pw = point[i].payload().clone();
                let mut result = p_one(spec);
                let mut exp = *e;
                while exp > 0 {
                    if exp & 1 == 1 {
                        result = p_mul(spec, &result, &pw);
                    }
                    pw = p_mul(spec, &pw, &pw);
                    exp >>= 1;
                }
                term = p_mul(spec, &term, &result);
            }
            acc = p_add(spec, &acc, &term);
        }
        Ok(base.element(acc))
    }

    /// Simultaneous substitution into a target polynomial ring over the same
    /// coefficient ring. Every variable must either have a binding or exist
    /// under the same name in the target ring.
    pub fn substitute_into(
        &self,
        target: &Ring,
        bindings: &BTreeMap<String, Poly>,
    ) -> Result<Poly, PolyError> {
        check_poly_ring(target)?;
        let target_base = target.base().expect("polynomial ring has a base");
        if target_base != self.coeff_ring() {
            return Err(PolyError::CoeffRingMismatch);
        }
        for (name, img) in bindings {
            if img.ring != *target {
                return Err(PolyError::MixedComponents);
            }
            if !self.vars().contains(name) {
                return Err(PolyError::UnknownVariable(name.clone()));
            }
        }
        // Image of each source variable that actually occurs; unused
        // variables need no counterpart in the target ring.
        let mut used = vec![false; self.vars().len()];
        for key in self.data.terms.keys() {
            for (i, e) in key.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        let mut images = Vec::with_capacity(self.vars().len());
        for (i, v) in self.vars().iter().enumerate() {
            if !used[i] {
                images.push(None);
                continue;
            }
            match bindings.get(v) {
                Some(img) => images.push(Some(img.clone())),
                None => images.push(Some(Poly::var(target, v)?)),
            }
        }
        // Power cache per variable.
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|img| match img {
                Some(p) => vec![Poly::one(target).expect("valid"), p.clone()],
                None => Vec::new(),
            })
            .collect();
        let mut acc = Poly::zero(target)?;
        for (key, coeff) in &self.data.terms {
            let mut term = Poly::constant(target, &self.coeff_ring().element(coeff.clone()))?;
            for (i, e) in key.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let image = images[i].as_ref().expect("used variable has an image");
                let cache = &mut powers[i];
                while cache.len() <= *e as usize {
                    let next = cache.last().unwrap().mul(image);
                    cache.push(next);
                }
                term = term.mul(&cache[*e as usize]);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitution within the same ring; unbound variables stay themselves.
    pub fn substitute(&self, bindings: &BTreeMap<String, Poly>) -> Result<Poly, PolyError> {
        self.substitute_into(&self.ring.clone(), bindings)
    }

    /// Exact division by a variable: succeeds iff every term contains it.
    pub fn exact_divide(&self, name: &str) -> Option<Poly> {
        let idx = self.var_index(name).ok()?;
        let mut terms = BTreeMap::new();
        for (key, coeff) in &self.data.terms {
            if key[idx] == 0 {
                return None;
            }
            let mut k = key.clone();
            k[idx] -= 1;
            terms.insert(k, coeff.clone());
        }
        Some(Poly::from_terms(&self.ring, terms))
    }

    /// Exact division by `u - w`: succeeds iff the polynomial vanishes on the
    /// diagonal `u = w`; the quotient `q` satisfies `q * (u - w) = self`.
    pub fn exact_divide_diff(&self, u: &str, w: &str) -> Option<Poly> {
        let ui = self.var_index(u).ok()?;
        let wi = self.var_index(w).ok()?;
        if ui == wi {
            return None;
        }
        let mut on_diagonal = BTreeMap::new();
        on_diagonal.insert(u.to_string(), Poly::var(&self.ring, w).ok()?);
        let restricted = self.substitute(&on_diagonal).ok()?;
        if !restricted.is_zero() {
            return None;
        }
        // self = sum_d c_d (u^d - w^d) once the diagonal part cancels, so the
        // quotient is sum_d c_d sum_{i+j=d-1} u^i w^j.
        let spec = self.base_spec();
        let mut terms: BTreeMap<Vec<u32>, Payload> = BTreeMap::new();
        for (key, coeff) in &self.data.terms {
            let d = key[ui];
            if d == 0 {
                continue;
            }
            for i in 0..d {
                let mut k = key.clone();
                k[ui] = i;
                k[wi] += d - 1 - i;
                match terms.remove(&k) {
                    None => {
                        terms.insert(k, coeff.clone());
                    }
                    Some(prev) => {
                        let s = p_add(spec, &prev, coeff);
                        if !p_is_zero(&s) {
                            terms.insert(k, s);
                        }
                    }
                }
            }
        }
        Some(Poly::from_terms(&self.ring, terms))
    }

    /// Collects the polynomial by powers of one variable: returns the nonzero
    /// `(power, coefficient)` pairs, with the variable removed from each
    /// coefficient polynomial (which stays in the same ring).
    pub fn coefficients_in_var(&self, name: &str) -> Result<Vec<(u32, Poly)>, PolyError> {
        let idx = self.var_index(name)?;
        let mut buckets: BTreeMap<u32, BTreeMap<Vec<u32>, Payload>> = BTreeMap::new();
        for (key, coeff) in &self.data.terms {
            let d = key[idx];
            let mut k = key.clone();
            k[idx] = 0;
            buckets.entry(d).or_default().insert(k, coeff.clone());
        }
        Ok(buckets
            .into_iter()
            .map(|(d, terms)| (d, Poly::from_terms(&self.ring, terms)))
            .collect())
    }

    /// Moves a polynomial whose coefficient ring is itself a polynomial ring
    /// `K[a1..]` down to a polynomial over `K` in the combined variable list
    /// `[a1.., own vars..]`.
    pub fn flatten(&self) -> Result<Poly, PolyError> {
        let inner_ring = self.coeff_ring();
        let inner_vars: Vec<String> = inner_ring
            .vars()
            .ok_or(PolyError::NotPolynomialRing)?
            .to_vec();
        let ground = inner_ring.base().expect("polynomial ring has a base");
        let mut all_vars: Vec<String> = inner_vars.clone();
        for v in self.vars() {
            if all_vars.contains(v) {
                return Err(PolyError::UnknownVariable(format!(
                    "variable {v} appears at two levels"
                )));
            }
            all_vars.push(v.clone());
        }
        let flat_ring = Ring::polynomial_named(&ground, all_vars)?;
        let n_inner = inner_vars.len();
        let n_outer = self.vars().len();
        let mut terms: BTreeMap<Vec<u32>, Payload> = BTreeMap::new();
        for (key, coeff) in &self.data.terms {
            let key = fix_key(key, n_outer);
            let inner = match coeff {
                Payload::Poly(t) => t,
                _ => unreachable!("coefficient of polynomial-over-polynomial is a polynomial"),
            };
            for (ikey, icoeff) in &inner.terms {
                let ikey = fix_key(ikey, n_inner);
                let mut k = Vec::with_capacity(n_inner + n_outer);
                k.extend_from_slice(&ikey);
                k.extend_from_slice(&key);
                debug_assert!(!terms.contains_key(&k));
                terms.insert(k, icoeff.clone());
            }
        }
        Ok(Poly::from_terms(&flat_ring, terms))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_element())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

fn payload_into_poly(ring: &Ring, p: Payload) -> Poly {
    match p {
        Payload::Poly(t) => {
            let n = ring.vars().expect("polynomial ring").len();
            let data = PolyTerms {
                terms: t.terms.into_iter().map(|(k, c)| (fix_key(&k, n), c)).collect(),
            };
            Poly { ring: ring.clone(), data }
        }
        _ => unreachable!("polynomial ring arithmetic returns polynomials"),
    }
}

fn fix_key(key: &[u32], n: usize) -> Vec<u32> {
    if key.len() == n {
        key.to_vec()
    } else {
        vec![0; n]
    }
}

fn check_poly_ring(ring: &Ring) -> Result<(), PolyError> {
    match ring.spec() {
        RingSpec::PolynomialRing { .. } => Ok(()),
        _ => Err(PolyError::NotPolynomialRing),
    }
}

/// A polynomial map `K^m -> K^n`: `n` component polynomials over one shared
/// polynomial ring whose variables are the `m` domain coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMap {
    ring: Ring,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(ring: &Ring, components: Vec<Poly>) -> Result<PolyMap, PolyError> {
        check_poly_ring(ring)?;
        if components.is_empty() {
            return Err(PolyError::RankMismatch { expected: 1, got: 0 });
        }
        if components.iter().any(|c| c.ring() != ring) {
            return Err(PolyError::MixedComponents);
        }
        Ok(PolyMap { ring: ring.clone(), components })
    }

    /// The identity map on the ring's variable tuple.
    pub fn identity(ring: &Ring) -> Result<PolyMap, PolyError> {
        check_poly_ring(ring)?;
        let vars: Vec<String> = ring.vars().expect("polynomial ring").to_vec();
        let components = vars
            .iter()
            .map(|v| Poly::var(ring, v))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(ring, components)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeff_ring(&self) -> Ring {
        self.ring.base().expect("polynomial ring has a base")
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars().expect("polynomial ring")
    }

    pub fn domain_rank(&self) -> usize {
        self.vars().len()
    }

    pub fn codomain_rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn evaluate(&self, point: &[RingElement]) -> Result<Vec<RingElement>, PolyError> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    /// `g.compose(f)` is `g ∘ f`; requires `f`'s codomain rank to match `g`'s
    /// domain rank. The result lives over `f`'s variables.
    pub fn compose(&self, f: &PolyMap) -> Result<PolyMap, PolyError> {
        if f.codomain_rank() != self.domain_rank() {
            return Err(PolyError::RankMismatch {
                expected: self.domain_rank(),
                got: f.codomain_rank(),
            });
        }
        if f.coeff_ring() != self.coeff_ring() {
            return Err(PolyError::CoeffRingMismatch);
        }
        let bindings: BTreeMap<String, Poly> = self
            .vars()
            .iter()
            .cloned()
            .zip(f.components.iter().cloned())
            .collect();
        let components = self
            .components
            .iter()
            .map(|c| c.substitute_into(&f.ring, &bindings))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(&f.ring, components)
    }

    /// Applies one substitution to every component.
    pub fn substitute_into(
        &self,
        target: &Ring,
        bindings: &BTreeMap<String, Poly>,
    ) -> Result<PolyMap, PolyError> {
        let components = self
            .components
            .iter()
            .map(|c| c.substitute_into(target, bindings))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(target, components)
    }

    /// Direct product `f × g`: block-diagonal map on the concatenated
    /// variables. Variables of the two factors are prefixed to stay distinct.
    pub fn direct_product(&self, other: &PolyMap) -> Result<PolyMap, PolyError> {
        if self.coeff_ring() != other.coeff_ring() {
            return Err(PolyError::CoeffRingMismatch);
        }
        let mut vars: Vec<String> = Vec::new();
        for v in self.vars() {
            vars.push(format!("l.{v}"));
        }
        for v in other.vars() {
            vars.push(format!("r.{v}"));
        }
        let ring = Ring::polynomial_named(&self.coeff_ring(), vars)?;
        let mut components = Vec::new();
        for (map, prefix) in [(self, "l."), (other, "r.")] {
            let bindings: BTreeMap<String, Poly> = map
                .vars()
                .iter()
                .map(|v| Ok((v.clone(), Poly::var(&ring, &format!("{prefix}{v}"))?)))
                .collect::<Result<_, PolyError>>()?;
            for c in &map.components {
                components.push(c.substitute_into(&ring, &bindings)?);
            }
        }
        PolyMap::new(&ring, components)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap({})", self)
    }
}

/// A map that can be evaluated pointwise; polynomial maps implement it, and
/// tests use closures for genuine black-box maps.
pub trait EvalMap {
    fn eval_ring(&self) -> Ring;
    fn eval_domain_rank(&self) -> usize;
    fn eval_codomain_rank(&self) -> usize;
    fn eval(&self, point: &[RingElement]) -> Result<Vec<RingElement>, PolyError>;
}

impl EvalMap for PolyMap {
    fn eval_ring(&self) -> Ring {
        self.coeff_ring()
    }

    fn eval_domain_rank(&self) -> usize {
        self.domain_rank()
    }

    fn eval_codomain_rank(&self) -> usize {
        self.codomain_rank()
    }

    fn eval(&self, point: &[RingElement]) -> Result<Vec<RingElement>, PolyError> {
        self.evaluate(point)
    }
}

/// Black-box map defined by a closure; used by tests and the nested
/// difference-quotient evaluator.
pub struct FnMap<F> {
    pub ring: Ring,
    pub domain_rank: usize,
    pub codomain_rank: usize,
    pub f: F,
}

impl<F> EvalMap for FnMap<F>
where
    F: Fn(&[RingElement]) -> Result<Vec<RingElement>, PolyError>,
{
    fn eval_ring(&self) -> Ring {
        self.ring.clone()
    }

    fn eval_domain_rank(&self) -> usize {
        self.domain_rank
    }

    fn eval_codomain_rank(&self) -> usize {
        self.codomain_rank
    }

    fn eval(&self, point: &[RingElement]) -> Result<Vec<RingElement>, PolyError> {
        (self.f)(point)
    }
}
