//! Commutative unital rings with exact arithmetic.
//!
//! A ring is described by a [`RingSpec`] and used through the cheap-to-clone
//! [`Ring`] handle. Elements always carry their owning ring and are kept in
//! canonical form, so structural equality coincides with equality in the ring:
//! fractions are reduced with positive denominator, residues lie in `[0, n)`,
//! polynomials store no zero coefficients, algebra elements are coordinate
//! vectors over a fixed basis whose first element is the unit.
//!
//! Everything is arbitrary precision; there is no floating point here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Exponent vector of a monomial; length equals the ring's variable count.
pub(crate) type Monomial = Vec<u32>;

/// Sparse polynomial payload: exponent vector -> nonzero coefficient payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyTerms {
    pub(crate) terms: BTreeMap<Monomial, Payload>,
}

/// Canonical element data, without the owner pointer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    /// Reduced fraction, positive denominator.
    Rational(BigRational),
    /// Residue in `[0, n)`.
    Residue(BigUint),
    /// Sparse polynomial over the base ring, no zero coefficients.
    Poly(PolyTerms),
    /// Coordinate vector over the base ring, fixed length = rank.
    Vector(Vec<Payload>),
}

/// Description of a commutative unital ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// The field of rational numbers.
    Rationals,
    /// Integers modulo `n`, `n >= 2`. Composite moduli are allowed.
    IntegersMod(BigUint),
    /// Polynomial ring over `base` in the named variables.
    PolynomialRing { base: Box<RingSpec>, vars: Vec<String> },
    /// Free module of the given rank over `base` with multiplication given by
    /// structure constants: `e_i * e_j = sum_g constants[i][j][g] e_g`.
    /// Basis element 0 must act as the unit.
    StructureConstantAlgebra {
        base: Box<RingSpec>,
        rank: usize,
        constants: Vec<Vec<Vec<Payload>>>,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("element does not belong to this ring")]
    WrongRing,
    #[error("cannot embed integers: {0}")]
    Embed(String),
}

/// Handle to a validated ring. Clones share the spec.
#[derive(Clone, Debug)]
pub struct Ring {
    spec: Arc<RingSpec>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec
    }
}

impl Eq for Ring {}

/// An element of a [`Ring`]. Carries its owner so mixed-ring operations fail
/// fast instead of silently coercing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    payload: Payload,
}

impl Ring {
    /// Validates the spec and returns a ring handle.
    pub fn new(spec: RingSpec) -> Result<Ring, RingError> {
        validate_spec(&spec)?;
        Ok(Ring { spec: Arc::new(spec) })
    }

    pub fn rationals() -> Ring {
        Ring { spec: Arc::new(RingSpec::Rationals) }
    }

    pub fn integers_mod(n: u64) -> Result<Ring, RingError> {
        Ring::new(RingSpec::IntegersMod(BigUint::from(n)))
    }

    pub fn polynomial(base: &Ring, vars: &[&str]) -> Result<Ring, RingError> {
        Ring::new(RingSpec::PolynomialRing {
            base: Box::new(base.spec.as_ref().clone()),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn polynomial_named(base: &Ring, vars: Vec<String>) -> Result<Ring, RingError> {
        Ring::new(RingSpec::PolynomialRing { base: Box::new(base.spec.as_ref().clone()), vars })
    }

    /// Builds a structure-constant algebra from element-level constants.
    /// `constants[i][j]` is the coordinate vector of `e_i * e_j` over `base`.
    pub fn structure_constant_algebra(
        base: &Ring,
        constants: Vec<Vec<Vec<RingElement>>>,
    ) -> Result<Ring, RingError> {
        let rank = constants.len();
        let mut table = Vec::with_capacity(rank);
        for row in constants {
            let mut out_row = Vec::with_capacity(rank);
            for entry in row {
                let mut coords = Vec::with_capacity(rank);
                for c in entry {
                    if c.ring != *base {
                        return Err(RingError::WrongRing);
                    }
                    coords.push(c.payload);
                }
                out_row.push(coords);
            }
            table.push(out_row);
        }
        Ring::new(RingSpec::StructureConstantAlgebra {
            base: Box::new(base.spec.as_ref().clone()),
            rank,
            constants: table,
        })
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// Base ring of a polynomial ring or algebra; `None` for ground rings.
    pub fn base(&self) -> Option<Ring> {
        match self.spec.as_ref() {
            RingSpec::PolynomialRing { base, .. }
            | RingSpec::StructureConstantAlgebra { base, .. } => {
                Some(Ring { spec: Arc::new(base.as_ref().clone()) })
            }
            _ => None,
        }
    }

    /// Variable names of a polynomial ring.
    pub fn vars(&self) -> Option<&[String]> {
        match self.spec.as_ref() {
            RingSpec::PolynomialRing { vars, .. } => Some(vars),
            _ => None,
        }
    }

    /// Rank of a structure-constant algebra.
    pub fn rank(&self) -> Option<usize> {
        match self.spec.as_ref() {
            RingSpec::StructureConstantAlgebra { rank, .. } => Some(*rank),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.element(p_zero(&self.spec))
    }

    pub fn one(&self) -> RingElement {
        self.element(p_one(&self.spec))
    }

    /// The image of an integer under the unique map `Z -> R`.
    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        self.element(p_from_bigint(&self.spec, n))
    }

    pub fn from_i64(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.check_owner(a);
        self.check_owner(b);
        self.element(p_add(&self.spec, &a.payload, &b.payload))
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.check_owner(a);
        self.element(p_neg(&self.spec, &a.payload))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.check_owner(a);
        self.check_owner(b);
        self.element(p_mul(&self.spec, &a.payload, &b.payload))
    }

    /// Multiplicative inverse, or `None` when the element is not a unit.
    pub fn invert(&self, a: &RingElement) -> Option<RingElement> {
        self.check_owner(a);
        p_invert(&self.spec, &a.payload).map(|p| self.element(p))
    }

    pub fn is_invertible(&self, a: &RingElement) -> bool {
        self.invert(a).is_some()
    }

    /// Embeds an element of the base ring into this polynomial ring or
    /// algebra (constant polynomial / multiple of the unit basis vector).
    pub fn embed(&self, a: &RingElement) -> Result<RingElement, RingError> {
        match self.spec.as_ref() {
            RingSpec::PolynomialRing { base, vars } => {
                if a.ring.spec.as_ref() != base.as_ref() {
                    return Err(RingError::WrongRing);
                }
                Ok(self.element(p_poly_const(vars.len(), a.payload.clone())))
            }
            RingSpec::StructureConstantAlgebra { base, rank, .. } => {
                if a.ring.spec.as_ref() != base.as_ref() {
                    return Err(RingError::WrongRing);
                }
                let mut coords = vec![p_zero(base); *rank];
                coords[0] = a.payload.clone();
                Ok(self.element(Payload::Vector(coords)))
            }
            _ => Err(RingError::Embed("not a polynomial ring or algebra".into())),
        }
    }

    /// Generator `name` of a polynomial ring.
    pub fn var(&self, name: &str) -> Result<RingElement, RingError> {
        match self.spec.as_ref() {
            RingSpec::PolynomialRing { base, vars } => {
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| RingError::InvalidSpec(format!("unknown variable {name}")))?;
                let mut exp = vec![0u32; vars.len()];
                exp[idx] = 1;
                let mut terms = BTreeMap::new();
                terms.insert(exp, p_one(base));
                Ok(self.element(Payload::Poly(PolyTerms { terms })))
            }
            _ => Err(RingError::InvalidSpec("not a polynomial ring".into())),
        }
    }

    /// Basis vector `e_i` of a structure-constant algebra.
    pub fn basis_vector(&self, i: usize) -> Result<RingElement, RingError> {
        match self.spec.as_ref() {
            RingSpec::StructureConstantAlgebra { base, rank, .. } => {
                if i >= *rank {
                    return Err(RingError::InvalidSpec(format!("basis index {i} out of range")));
                }
                let mut coords = vec![p_zero(base); *rank];
                coords[i] = p_one(base);
                Ok(self.element(Payload::Vector(coords)))
            }
            _ => Err(RingError::InvalidSpec("not an algebra".into())),
        }
    }

    /// Builds an algebra element from coordinates over the base ring.
    pub fn from_coords(&self, coords: &[RingElement]) -> Result<RingElement, RingError> {
        match self.spec.as_ref() {
            RingSpec::StructureConstantAlgebra { base, rank, .. } => {
                if coords.len() != *rank {
                    return Err(RingError::InvalidSpec("coordinate count != rank".into()));
                }
                let mut out = Vec::with_capacity(*rank);
                for c in coords {
                    if c.ring.spec.as_ref() != base.as_ref() {
                        return Err(RingError::WrongRing);
                    }
                    out.push(c.payload.clone());
                }
                Ok(self.element(Payload::Vector(out)))
            }
            _ => Err(RingError::InvalidSpec("not an algebra".into())),
        }
    }

    /// Coordinates of an algebra element over the base ring.
    pub fn coords(&self, a: &RingElement) -> Result<Vec<RingElement>, RingError> {
        self.check_owner(a);
        match (self.spec.as_ref(), &a.payload) {
            (RingSpec::StructureConstantAlgebra { base, .. }, Payload::Vector(v)) => {
                let base_ring = Ring { spec: Arc::new(base.as_ref().clone()) };
                Ok(v.iter().map(|p| base_ring.element(p.clone())).collect())
            }
            _ => Err(RingError::InvalidSpec("not an algebra element".into())),
        }
    }

    /// Iterates over all elements of a finite ring; `None` when infinite.
    pub fn enumerate(&self) -> Option<Vec<RingElement>> {
        let payloads = p_enumerate(&self.spec)?;
        Some(payloads.into_iter().map(|p| self.element(p)).collect())
    }

    /// Number of elements when finite.
    pub fn size(&self) -> Option<BigUint> {
        p_count(&self.spec)
    }

    pub(crate) fn element(&self, payload: Payload) -> RingElement {
        RingElement { ring: self.clone(), payload }
    }

    pub(crate) fn check_owner(&self, a: &RingElement) {
        assert!(
            a.ring == *self,
            "ring element used with a ring it does not belong to"
        );
    }
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        p_is_zero(&self.payload)
    }

    pub fn is_one(&self) -> bool {
        self.payload == p_one(&self.ring.spec)
    }

    pub fn invert(&self) -> Option<RingElement> {
        self.ring.clone().invert(self)
    }

    pub fn pow(&self, n: u32) -> RingElement {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub(crate) fn payload(&self) -> &Payload {
        &self.payload
    }

    /// The rational value of a `Rationals` element.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.payload {
            Payload::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// The residue value of an `IntegersMod` element.
    pub fn as_residue(&self) -> Option<&BigUint> {
        match &self.payload {
            Payload::Residue(r) => Some(r),
            _ => None,
        }
    }

    /// Compact rendering: residues print without the `mod n` suffix, for use
    /// inside tables and matrices.
    pub fn display_short(&self) -> String {
        payload_to_string(&self.ring.spec, &self.payload, true)
    }
}

macro_rules! element_binop {
    ($trait:ident, $method:ident, $ring_method:ident) => {
        impl std::ops::$trait for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.ring().clone().$ring_method(self, rhs)
            }
        }
        impl std::ops::$trait for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
    };
}

element_binop!(Add, add, add);
element_binop!(Sub, sub, sub);
element_binop!(Mul, mul, mul);

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.ring().clone().neg(self)
    }
}

impl std::ops::Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

#[allow(clippy::needless_range_loop)]
fn validate_spec(spec: &RingSpec) -> Result<(), RingError> {
    match spec {
        RingSpec::Rationals => Ok(()),
        RingSpec::IntegersMod(n) => {
            if *n < BigUint::from(2u32) {
                Err(RingError::InvalidSpec("modulus must be >= 2".into()))
            } else {
                Ok(())
            }
        }
        RingSpec::PolynomialRing { base, vars } => {
            if vars.is_empty() {
                return Err(RingError::InvalidSpec("no variables".into()));
            }
            for (i, v) in vars.iter().enumerate() {
                if v.is_empty() {
                    return Err(RingError::InvalidSpec("empty variable name".into()));
                }
                if vars[..i].contains(v) {
                    return Err(RingError::InvalidSpec(format!("duplicate variable {v}")));
                }
            }
            validate_spec(base)
        }
        RingSpec::StructureConstantAlgebra { base, rank, constants } => {
            validate_spec(base)?;
            if *rank == 0 {
                return Err(RingError::InvalidSpec("algebra rank must be positive".into()));
            }
            if constants.len() != *rank
                || constants.iter().any(|row| row.len() != *rank)
                || constants
                    .iter()
                    .any(|row| row.iter().any(|entry| entry.len() != *rank))
            {
                return Err(RingError::InvalidSpec("constants table shape mismatch".into()));
            }
            // Unit convention: e_0 * e_j = e_j, and commutativity of the table.
            for j in 0..*rank {
                for g in 0..*rank {
                    let expected = if j == g { p_one(base) } else { p_zero(base) };
                    if constants[0][j][g] != expected || constants[j][0][g] != expected {
                        return Err(RingError::InvalidSpec(
                            "basis element 0 does not act as the unit".into(),
                        ));
                    }
                }
            }
            for i in 0..*rank {
                for j in (i + 1)..*rank {
                    if constants[i][j] != constants[j][i] {
                        return Err(RingError::InvalidSpec(
                            "structure constants are not commutative".into(),
                        ));
                    }
                }
            }
            Ok(())
        }
    }
}

pub(crate) fn p_zero(spec: &RingSpec) -> Payload {
    match spec {
        RingSpec::Rationals => Payload::Rational(BigRational::zero()),
        RingSpec::IntegersMod(_) => Payload::Residue(BigUint::zero()),
        RingSpec::PolynomialRing { .. } => Payload::Poly(PolyTerms::default()),
        RingSpec::StructureConstantAlgebra { base, rank, .. } => {
            Payload::Vector(vec![p_zero(base); *rank])
        }
    }
}

pub(crate) fn p_one(spec: &RingSpec) -> Payload {
    match spec {
        RingSpec::Rationals => Payload::Rational(BigRational::one()),
        RingSpec::IntegersMod(_) => Payload::Residue(BigUint::one()),
        RingSpec::PolynomialRing { base, vars } => {
            let mut terms = BTreeMap::new();
            terms.insert(vec![0u32; vars.len()], p_one(base));
            Payload::Poly(PolyTerms { terms })
        }
        RingSpec::StructureConstantAlgebra { base, rank, .. } => {
            let mut coords = vec![p_zero(base); *rank];
            coords[0] = p_one(base);
            Payload::Vector(coords)
        }
    }
}

pub(crate) fn p_is_zero(p: &Payload) -> bool {
    match p {
        Payload::Rational(r) => r.is_zero(),
        Payload::Residue(r) => r.is_zero(),
        Payload::Poly(t) => t.terms.is_empty(),
        Payload::Vector(v) => v.iter().all(p_is_zero),
    }
}

fn p_poly_const(arity: usize, c: Payload) -> Payload {
    if p_is_zero(&c) {
        return Payload::Poly(PolyTerms::default());
    }
    let mut terms = BTreeMap::new();
    terms.insert(vec![0u32; arity], c);
    Payload::Poly(PolyTerms { terms })
}

/// Normalizes a constant monomial key to the ring's arity.
fn fix_key(key: &[u32], n: usize) -> Monomial {
    if key.len() == n {
        key.to_vec()
    } else {
        debug_assert!(key.iter().all(|e| *e == 0));
        vec![0; n]
    }
}

pub(crate) fn p_add(spec: &RingSpec, a: &Payload, b: &Payload) -> Payload {
    match (spec, a, b) {
        (RingSpec::Rationals, Payload::Rational(x), Payload::Rational(y)) => {
            Payload::Rational(x + y)
        }
        (RingSpec::IntegersMod(n), Payload::Residue(x), Payload::Residue(y)) => {
            Payload::Residue((x + y) % n)
        }
        (RingSpec::PolynomialRing { base, vars }, Payload::Poly(x), Payload::Poly(y)) => {
            let n = vars.len();
            let mut terms: BTreeMap<Monomial, Payload> = BTreeMap::new();
            for (k, c) in x.terms.iter().chain(y.terms.iter()) {
                let key = fix_key(k, n);
                match terms.remove(&key) {
                    None => {
                        terms.insert(key, c.clone());
                    }
                    Some(prev) => {
                        let s = p_add(base, &prev, c);
                        if !p_is_zero(&s) {
                            terms.insert(key, s);
                        }
                    }
                }
            }
            Payload::Poly(PolyTerms { terms })
        }
        (RingSpec::StructureConstantAlgebra { base, .. }, Payload::Vector(x), Payload::Vector(y)) => {
            Payload::Vector(x.iter().zip(y).map(|(p, q)| p_add(base, p, q)).collect())
        }
        _ => panic!("payload does not match ring spec"),
    }
}

pub(crate) fn p_neg(spec: &RingSpec, a: &Payload) -> Payload {
    match (spec, a) {
        (RingSpec::Rationals, Payload::Rational(x)) => Payload::Rational(-x),
        (RingSpec::IntegersMod(n), Payload::Residue(x)) => {
            if x.is_zero() {
                Payload::Residue(BigUint::zero())
            } else {
                Payload::Residue(n - x)
            }
        }
        (RingSpec::PolynomialRing { base, vars }, Payload::Poly(x)) => {
            let n = vars.len();
            Payload::Poly(PolyTerms {
                terms: x
                    .terms
                    .iter()
                    .map(|(k, c)| (fix_key(k, n), p_neg(base, c)))
                    .collect(),
            })
        }
        (RingSpec::StructureConstantAlgebra { base, .. }, Payload::Vector(x)) => {
            Payload::Vector(x.iter().map(|p| p_neg(base, p)).collect())
        }
        _ => panic!("payload does not match ring spec"),
    }
}

pub(crate) fn p_mul(spec: &RingSpec, a: &Payload, b: &Payload) -> Payload {
    match (spec, a, b) {
        (RingSpec::Rationals, Payload::Rational(x), Payload::Rational(y)) => {
            Payload::Rational(x * y)
        }
        (RingSpec::IntegersMod(n), Payload::Residue(x), Payload::Residue(y)) => {
            Payload::Residue((x * y) % n)
        }
        (RingSpec::PolynomialRing { base, vars }, Payload::Poly(x), Payload::Poly(y)) => {
            let n = vars.len();
            let mut terms: BTreeMap<Monomial, Payload> = BTreeMap::new();
            for (ka, ca) in &x.terms {
                let ka = fix_key(ka, n);
                for (kb, cb) in &y.terms {
                    let kb = fix_key(kb, n);
                    let prod = p_mul(base, ca, cb);
                    if p_is_zero(&prod) {
                        continue;
                    }
                    let key: Monomial = ka
                        .iter()
                        .zip(&kb)
                        .map(|(e, f)| e.checked_add(*f).expect("exponent overflow"))
                        .collect();
                    match terms.remove(&key) {
                        None => {
                            terms.insert(key, prod);
                        }
                        Some(prev) => {
                            let s = p_add(base, &prev, &prod);
                            if !p_is_zero(&s) {
                                terms.insert(key, s);
                            }
                        }
                    }
                }
            }
            Payload::Poly(PolyTerms { terms })
        }
        (
            RingSpec::StructureConstantAlgebra { base, rank, constants },
            Payload::Vector(x),
            Payload::Vector(y),
        ) => {
            let mut out = vec![p_zero(base); *rank];
            for (i, xi) in x.iter().enumerate() {
                if p_is_zero(xi) {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if p_is_zero(yj) {
                        continue;
                    }
                    let coeff = p_mul(base, xi, yj);
                    if p_is_zero(&coeff) {
                        continue;
                    }
                    for (g, c) in constants[i][j].iter().enumerate() {
                        if p_is_zero(c) {
                            continue;
                        }
                        let add = p_mul(base, &coeff, c);
                        out[g] = p_add(base, &out[g], &add);
                    }
                }
            }
            Payload::Vector(out)
        }
        _ => panic!("payload does not match ring spec"),
    }
}

pub(crate) fn p_from_bigint(spec: &RingSpec, n: &BigInt) -> Payload {
    match spec {
        RingSpec::Rationals => Payload::Rational(BigRational::from_integer(n.clone())),
        RingSpec::IntegersMod(m) => {
            let m_int = BigInt::from(m.clone());
            let r = n.mod_floor(&m_int);
            Payload::Residue(r.to_biguint().expect("mod_floor is non-negative"))
        }
        RingSpec::PolynomialRing { base, vars } => {
            p_poly_const_checked(vars.len(), p_from_bigint(base, n))
        }
        RingSpec::StructureConstantAlgebra { base, rank, .. } => {
            let mut coords = vec![p_zero(base); *rank];
            coords[0] = p_from_bigint(base, n);
            Payload::Vector(coords)
        }
    }
}

fn p_poly_const_checked(arity: usize, c: Payload) -> Payload {
    if p_is_zero(&c) {
        Payload::Poly(PolyTerms::default())
    } else {
        p_poly_const(arity, c)
    }
}

/// Nilpotency test. Exact for rationals, residues and polynomials over them;
/// for algebra payloads it squares up to a fixed depth, which covers every
/// ring this crate constructs (nilpotency index well below 2^16).
pub(crate) fn p_nilpotent(spec: &RingSpec, a: &Payload) -> bool {
    match (spec, a) {
        (RingSpec::Rationals, p) => p_is_zero(p),
        (RingSpec::IntegersMod(n), Payload::Residue(_)) => {
            let mut x = a.clone();
            let steps = n.bits().max(1);
            for _ in 0..steps {
                if p_is_zero(&x) {
                    return true;
                }
                x = p_mul(spec, &x, &x);
            }
            p_is_zero(&x)
        }
        (RingSpec::PolynomialRing { base, .. }, Payload::Poly(t)) => {
            t.terms.values().all(|c| p_nilpotent(base, c))
        }
        (RingSpec::StructureConstantAlgebra { .. }, _) => {
            let mut x = a.clone();
            for _ in 0..16 {
                if p_is_zero(&x) {
                    return true;
                }
                x = p_mul(spec, &x, &x);
            }
            p_is_zero(&x)
        }
        _ => panic!("payload does not match ring spec"),
    }
}

pub(crate) fn p_invert(spec: &RingSpec, a: &Payload) -> Option<Payload> {
    match (spec, a) {
        (RingSpec::Rationals, Payload::Rational(x)) => {
            if x.is_zero() {
                None
            } else {
                Some(Payload::Rational(x.recip()))
            }
        }
        (RingSpec::IntegersMod(n), Payload::Residue(x)) => {
            let n_int = BigInt::from(n.clone());
            let x_int = BigInt::from(x.clone());
            let ext = x_int.extended_gcd(&n_int);
            if ext.gcd.is_one() {
                let inv = ext.x.mod_floor(&n_int);
                Some(Payload::Residue(inv.to_biguint().expect("non-negative")))
            } else {
                None
            }
        }
        (RingSpec::PolynomialRing { base, vars }, Payload::Poly(t)) => {
            // A polynomial is a unit iff its constant term is a unit and all
            // other coefficients are nilpotent.
            let n = vars.len();
            let const_key = vec![0u32; n];
            let c0 = t.terms.iter().find_map(|(k, c)| {
                if fix_key(k, n) == const_key {
                    Some(c.clone())
                } else {
                    None
                }
            })?;
            let c0_inv = p_invert(base, &c0)?;
            for (k, c) in &t.terms {
                if fix_key(k, n) != const_key && !p_nilpotent(base, c) {
                    return None;
                }
            }
            // p = c0 (1 - m) with m nilpotent, so p^-1 = c0^-1 sum m^j.
            let c0_inv_poly = p_poly_const(n, c0_inv);
            let scaled = p_mul(spec, &c0_inv_poly, a);
            let m = p_add(spec, &p_one(spec), &p_neg(spec, &scaled));
            let mut sum = p_one(spec);
            let mut power = m.clone();
            let mut guard = 0;
            while !p_is_zero(&power) {
                sum = p_add(spec, &sum, &power);
                power = p_mul(spec, &power, &m);
                guard += 1;
                if guard > 256 {
                    return None;
                }
            }
            Some(p_mul(spec, &c0_inv_poly, &sum))
        }
        (RingSpec::StructureConstantAlgebra { base, rank, .. }, Payload::Vector(_)) => {
            // Solve (mult-by-a) x = 1 over the base; fall back to exhaustive
            // search in small finite algebras when elimination stalls.
            let cols: Vec<Vec<Payload>> = (0..*rank)
                .map(|j| {
                    let mut e = vec![p_zero(base); *rank];
                    e[j] = p_one(base);
                    match p_mul(spec, a, &Payload::Vector(e)) {
                        Payload::Vector(v) => v,
                        _ => unreachable!(),
                    }
                })
                .collect();
            let mut rhs = vec![p_zero(base); *rank];
            rhs[0] = p_one(base);
            if let Some(sol) = solve_unit_pivot(base, &cols, &rhs, *rank) {
                let candidate = Payload::Vector(sol);
                if p_mul(spec, a, &candidate) == p_one(spec) {
                    return Some(candidate);
                }
                return None;
            }
            if let Some(all) = p_enumerate(spec) {
                let one = p_one(spec);
                return all.into_iter().find(|x| p_mul(spec, a, x) == one);
            }
            None
        }
        _ => panic!("payload does not match ring spec"),
    }
}

/// Gaussian elimination on `cols` (column-major) pivoting only on invertible
/// entries. Returns a solution of `M x = rhs` when it completes.
#[allow(clippy::needless_range_loop)]
fn solve_unit_pivot(
    base: &RingSpec,
    cols: &[Vec<Payload>],
    rhs: &[Payload],
    rank: usize,
) -> Option<Vec<Payload>> {
    // Row-major augmented matrix.
    let mut m: Vec<Vec<Payload>> = (0..rank)
        .map(|r| {
            let mut row: Vec<Payload> = (0..rank).map(|c| cols[c][r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; rank];
    let mut used_rows = vec![false; rank];
    for col in 0..rank {
        let mut found = None;
        for (r, row) in m.iter().enumerate() {
            if used_rows[r] {
                continue;
            }
            if let Some(inv) = p_invert(base, &row[col]) {
                found = Some((r, inv));
                break;
            }
        }
        let (r, inv) = found?;
        used_rows[r] = true;
        pivot_of_col[col] = Some(r);
        for c in 0..=rank {
            m[r][c] = p_mul(base, &m[r][c], &inv);
        }
        let pivot_row = m[r].clone();
        for (rr, row) in m.iter_mut().enumerate() {
            if rr == r || p_is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for c in 0..=rank {
                let delta = p_mul(base, &factor, &pivot_row[c]);
                row[c] = p_add(base, &row[c], &p_neg(base, &delta));
            }
        }
    }
    let mut sol = vec![p_zero(base); rank];
    for col in 0..rank {
        let r = pivot_of_col[col]?;
        sol[col] = m[r][rank].clone();
    }
    Some(sol)
}

fn p_count(spec: &RingSpec) -> Option<BigUint> {
    match spec {
        RingSpec::Rationals | RingSpec::PolynomialRing { .. } => None,
        RingSpec::IntegersMod(n) => Some(n.clone()),
        RingSpec::StructureConstantAlgebra { base, rank, .. } => {
            let b = p_count(base)?;
            let mut out = BigUint::one();
            for _ in 0..*rank {
                out *= &b;
            }
            Some(out)
        }
    }
}

fn p_enumerate(spec: &RingSpec) -> Option<Vec<Payload>> {
    const ENUM_LIMIT: u64 = 1 << 21;
    let count = p_count(spec)?;
    if count > BigUint::from(ENUM_LIMIT) {
        return None;
    }
    match spec {
        RingSpec::IntegersMod(n) => {
            let n = n.to_u64().expect("small modulus");
            Some((0..n).map(|i| Payload::Residue(BigUint::from(i))).collect())
        }
        RingSpec::StructureConstantAlgebra { base, rank, .. } => {
            let base_elems = p_enumerate(base)?;
            let mut out = vec![Vec::new()];
            for _ in 0..*rank {
                let mut next = Vec::with_capacity(out.len() * base_elems.len());
                for prefix in &out {
                    for b in &base_elems {
                        let mut v = prefix.clone();
                        v.push(b.clone());
                        next.push(v);
                    }
                }
                out = next;
            }
            Some(out.into_iter().map(Payload::Vector).collect())
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = payload_to_string(&self.ring.spec, &self.payload, false);
        write!(f, "{s}")
    }
}

/// Renders a payload. With `nested` set, residues print without the
/// `mod n` suffix and composite values are parenthesized, which keeps
/// polynomial coefficients round-trippable.
pub(crate) fn payload_to_string(spec: &RingSpec, p: &Payload, nested: bool) -> String {
    match (spec, p) {
        (RingSpec::Rationals, Payload::Rational(r)) => {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        (RingSpec::IntegersMod(n), Payload::Residue(r)) => {
            if nested {
                r.to_string()
            } else {
                format!("{r} mod {n}")
            }
        }
        (RingSpec::PolynomialRing { base, vars }, Payload::Poly(t)) => {
            if t.terms.is_empty() {
                return "0".to_string();
            }
            let n = vars.len();
            let mut rendered = Vec::new();
            for (key, coeff) in t.terms.iter().rev() {
                let key = fix_key(key, n);
                let mut factors = Vec::new();
                for (i, e) in key.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(vars[i].clone()),
                        _ => factors.push(format!("{}^{}", vars[i], e)),
                    }
                }
                let coeff_str = coeff_to_string(base, coeff);
                let term = if factors.is_empty() {
                    coeff_str
                } else if coeff_str == "1" {
                    factors.join("*")
                } else if coeff_str == "-1" {
                    format!("-{}", factors.join("*"))
                } else {
                    format!("{}*{}", coeff_str, factors.join("*"))
                };
                rendered.push(term);
            }
            let mut out = String::new();
            for (i, term) in rendered.iter().enumerate() {
                if i == 0 {
                    out.push_str(term);
                } else if let Some(stripped) = term.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(stripped);
                } else {
                    out.push_str(" + ");
                    out.push_str(term);
                }
            }
            if nested && rendered.len() > 1 {
                format!("({out})")
            } else {
                out
            }
        }
        (RingSpec::StructureConstantAlgebra { base, .. }, Payload::Vector(v)) => {
            let inner: Vec<String> =
                v.iter().map(|c| payload_to_string(base, c, true)).collect();
            format!("[{}]", inner.join(", "))
        }
        _ => panic!("payload does not match ring spec"),
    }
}

/// Coefficient rendering inside a polynomial term.
fn coeff_to_string(base: &RingSpec, c: &Payload) -> String {
    let s = payload_to_string(base, c, true);
    match base {
        RingSpec::Rationals | RingSpec::IntegersMod(_) => s,
        _ => {
            if s.starts_with('(') || s.starts_with('[') || !s.contains(['+', '-', ' ']) {
                s
            } else {
                format!("({s})")
            }
        }
    }
}
