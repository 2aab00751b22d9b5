//! Scalar-extension rings attached to fixed multi-time parameters.
//!
//! Fixing the times in the order-`k` extended difference quotient of the ring
//! multiplication `K x K -> K` and pairing the components of the two factors
//! turns the space part into a product on `K^(2^k)`. This module builds that
//! ring operationally — rank `2^k` over `K` (or over `K[t..]` when times stay
//! symbolic), with basis `omega_a` indexed by bit strings and structure
//! constants read off from the quotient — and provides:
//!
//! * the rank-4 case as a two-step quotient-ring adjunction, used as an
//!   independent oracle for every structure constant;
//! * application of a polynomial map over `K` to arguments in the extension,
//!   which must coincide with the space part of the extended quotient;
//! * brute-force enumeration of the base-linear ring automorphisms fixing the
//!   unit, for finite bases.
//!
//! Symbolic time variables are named `t` at order 1 and `t01`, `t10`, ... at
//! higher orders.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::diffquot::{
    extendedk_sym, space_var_name, time_var_name, DeltaMap, DiffArgs, DiffError, MultiIndex,
};
use crate::polymap::{Poly, PolyError, PolyMap};
use crate::rings::{Ring, RingElement, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarExtError {
    #[error("time assignment must cover every nonzero index of order {0}")]
    IncompleteTime(usize),
    #[error("time values must lie in the base ring")]
    TimeValueRing,
    #[error("operation needs a fully numeric time assignment")]
    SymbolicTime,
    #[error("base ring is not finite")]
    NotFinite,
    #[error("search space of {candidates} candidates exceeds the bound {bound}")]
    SearchTooLarge { candidates: BigUint, bound: u64 },
    #[error("adjunction comparison is defined for order 2, got {0}")]
    NotOrderTwo(usize),
    #[error("argument does not belong to the extension ring")]
    WrongRing,
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// One time slot: left symbolic or pinned to a base-ring value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TimeValue {
    Symbolic,
    Value(RingElement),
}

/// Assignment of every `t_a`, `a` nonzero, for a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeAssignment {
    order: usize,
    entries: BTreeMap<MultiIndex, TimeValue>,
}

impl TimeAssignment {
    pub fn all_symbolic(order: usize) -> TimeAssignment {
        let entries = MultiIndex::all_nonzero(order)
            .into_iter()
            .map(|a| (a, TimeValue::Symbolic))
            .collect();
        TimeAssignment { order, entries }
    }

    /// Numeric assignment, values in canonical index order.
    pub fn numeric(order: usize, values: &[RingElement]) -> Result<TimeAssignment, ScalarExtError> {
        let indices = MultiIndex::all_nonzero(order);
        if values.len() != indices.len() {
            return Err(ScalarExtError::IncompleteTime(order));
        }
        let entries = indices
            .into_iter()
            .zip(values.iter().cloned().map(TimeValue::Value))
            .collect();
        Ok(TimeAssignment { order, entries })
    }

    /// Every time pinned to the same value; `t = 0` gives iterated dual
    /// numbers (the tangent ring).
    pub fn constant(order: usize, value: &RingElement) -> TimeAssignment {
        let entries = MultiIndex::all_nonzero(order)
            .into_iter()
            .map(|a| (a, TimeValue::Value(value.clone())))
            .collect();
        TimeAssignment { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, a: &MultiIndex) -> Option<&TimeValue> {
        self.entries.get(a)
    }

    pub fn is_fully_numeric(&self) -> bool {
        self.entries.values().all(|v| matches!(v, TimeValue::Value(_)))
    }

    fn symbolic_indices(&self) -> Vec<MultiIndex> {
        self.entries
            .iter()
            .filter(|(_, v)| matches!(v, TimeValue::Symbolic))
            .map(|(a, _)| a.clone())
            .collect()
    }

    fn validate(&self, base: &Ring) -> Result<(), ScalarExtError> {
        let expected = MultiIndex::all_nonzero(self.order);
        if self.entries.len() != expected.len()
            || expected.iter().any(|a| !self.entries.contains_key(a))
        {
            return Err(ScalarExtError::IncompleteTime(self.order));
        }
        for v in self.entries.values() {
            if let TimeValue::Value(e) = v {
                if e.ring() != base {
                    return Err(ScalarExtError::TimeValueRing);
                }
            }
        }
        Ok(())
    }
}

/// Name of the symbolic time variable for index `a` in an order-`k` ring.
pub fn time_symbol(a: &MultiIndex, order: usize) -> String {
    if order == 1 {
        "t".to_string()
    } else {
        format!("t{a}")
    }
}

/// The extension ring of order `k` over a base ring: a free module with one
/// basis element per multi-index, multiplication given by structure
/// constants over the coefficient ring (the base itself, or the base with the
/// symbolic times adjoined).
#[derive(Clone, Debug)]
pub struct ExtensionRing {
    base: Ring,
    order: usize,
    time: TimeAssignment,
    coeff: Ring,
    algebra: Ring,
    basis: Vec<MultiIndex>,
}

impl ExtensionRing {
    /// Operational construction: the structure constants are read off from
    /// the extended difference quotient of the multiplication map.
    pub fn build(base: &Ring, order: usize, time: TimeAssignment) -> Result<ExtensionRing, ScalarExtError> {
        if time.order() != order {
            return Err(ScalarExtError::IncompleteTime(order));
        }
        time.validate(base)?;
        let mul_ring = Ring::polynomial(base, &["a", "b"])?;
        let mul_map = PolyMap::new(
            &mul_ring,
            vec![Poly::var(&mul_ring, "a")?.mul(&Poly::var(&mul_ring, "b")?)],
        )?;
        let delta = extendedk_sym(&mul_map, order)?;
        let basis = MultiIndex::all(order);
        let symbolic = time.symbolic_indices();
        let coeff = if symbolic.is_empty() {
            base.clone()
        } else {
            let names: Vec<String> = symbolic.iter().map(|a| time_symbol(a, order)).collect();
            Ring::polynomial_named(base, names)?
        };
        let rank = basis.len();
        let mut constants: Vec<Vec<Vec<RingElement>>> = Vec::with_capacity(rank);
        for alpha in &basis {
            let mut row = Vec::with_capacity(rank);
            for beta in &basis {
                row.push(product_of_basis(&delta, base, &coeff, &time, alpha, beta)?);
            }
            constants.push(row);
        }
        let algebra = Ring::structure_constant_algebra(&coeff, constants)?;
        Ok(ExtensionRing {
            base: base.clone(),
            order,
            time,
            coeff,
            algebra,
            basis,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn base_ring(&self) -> &Ring {
        &self.base
    }

    pub fn coeff_ring(&self) -> &Ring {
        &self.coeff
    }

    /// The underlying structure-constant algebra; its elements are the
    /// extension-ring elements.
    pub fn algebra(&self) -> &Ring {
        &self.algebra
    }

    pub fn time(&self) -> &TimeAssignment {
        &self.time
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn omega(&self, a: &MultiIndex) -> Result<RingElement, ScalarExtError> {
        let pos = self
            .basis
            .iter()
            .position(|b| b == a)
            .ok_or(ScalarExtError::WrongRing)?;
        Ok(self.algebra.basis_vector(pos)?)
    }

    /// Structure constant `c_{a,b}^g` in the coefficient ring.
    pub fn constant(
        &self,
        a: &MultiIndex,
        b: &MultiIndex,
        g: &MultiIndex,
    ) -> Result<RingElement, ScalarExtError> {
        let coords = self.product_coords(a, b)?;
        let pos = self
            .basis
            .iter()
            .position(|x| x == g)
            .ok_or(ScalarExtError::WrongRing)?;
        Ok(coords[pos].clone())
    }

    /// Coordinates of `omega_a * omega_b` over the coefficient ring.
    pub fn product_coords(
        &self,
        a: &MultiIndex,
        b: &MultiIndex,
    ) -> Result<Vec<RingElement>, ScalarExtError> {
        let prod = &self.omega(a)? * &self.omega(b)?;
        Ok(self.algebra.coords(&prod)?)
    }

    pub fn from_coords(&self, coords: &[RingElement]) -> Result<RingElement, ScalarExtError> {
        Ok(self.algebra.from_coords(coords)?)
    }

    pub fn coords(&self, x: &RingElement) -> Result<Vec<RingElement>, ScalarExtError> {
        Ok(self.algebra.coords(x)?)
    }

    /// Bilinear product through the structure constants (plain ring
    /// multiplication of the algebra).
    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        x * y
    }

    /// Embeds a base-ring element as a multiple of the unit.
    pub fn embed_base(&self, c: &RingElement) -> Result<RingElement, ScalarExtError> {
        let in_coeff = if self.coeff == self.base {
            c.clone()
        } else {
            self.coeff.embed(c)?
        };
        Ok(self.algebra.embed(&in_coeff)?)
    }

    /// Ring-axiom check: unitality and commutativity are enforced at
    /// construction; associativity is verified here on all basis triples.
    pub fn verify_associativity(&self) -> Result<(), String> {
        for a in &self.basis {
            let ea = self.omega(a).expect("basis");
            for b in &self.basis {
                let eb = self.omega(b).expect("basis");
                for c in &self.basis {
                    let ec = self.omega(c).expect("basis");
                    let left = &(&ea * &eb) * &ec;
                    let right = &ea * &(&eb * &ec);
                    if left != right {
                        return Err(format!(
                            "associativity fails on basis triple ({a}, {b}, {c})"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that addition in the extension is plain componentwise addition
    /// by extending the addition map instead of the multiplication map.
    pub fn addition_is_componentwise(&self) -> Result<bool, ScalarExtError> {
        let add_ring = Ring::polynomial(&self.base, &["a", "b"])?;
        let add_map = PolyMap::new(
            &add_ring,
            vec![Poly::var(&add_ring, "a")?.add(&Poly::var(&add_ring, "b")?)],
        )?;
        let delta = extendedk_sym(&add_map, self.order)?;
        let ring = delta.map.ring();
        for g in &self.basis {
            let got = &delta.space_component(g)?[0];
            let expected = Poly::var(ring, &space_var_name(g, 0, 2))?
                .add(&Poly::var(ring, &space_var_name(g, 1, 2))?);
            if *got != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Probes the triangularity conjecture: `c_{a,b}^g = 0` unless both `a`
    /// and `b` are subsets of `g`. Returns the violations found.
    pub fn triangularity_violations(&self) -> Result<Vec<String>, ScalarExtError> {
        let mut out = Vec::new();
        for a in &self.basis {
            for b in &self.basis {
                let coords = self.product_coords(a, b)?;
                for (g, c) in self.basis.iter().zip(&coords) {
                    if !(a.is_subset_of(g) && b.is_subset_of(g)) && !c.is_zero() {
                        out.push(format!("c({a},{b})^{g} = {c}"));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Computes the coordinates of `omega_a * omega_b` by pinning the basis
/// vectors in the extended multiplication quotient.
fn product_of_basis(
    delta: &DeltaMap,
    base: &Ring,
    coeff: &Ring,
    time: &TimeAssignment,
    alpha: &MultiIndex,
    beta: &MultiIndex,
) -> Result<Vec<RingElement>, ScalarExtError> {
    let order = time.order();
    let basis = MultiIndex::all(order);
    if time.is_fully_numeric() {
        // Plain evaluation over the base ring.
        let mut args: DiffArgs<RingElement> = DiffArgs::new(order, 2);
        for d in &basis {
            let left = if d == alpha { base.one() } else { base.zero() };
            let right = if d == beta { base.one() } else { base.zero() };
            args.set_space(d, vec![left, right]);
        }
        for a in MultiIndex::all_nonzero(order) {
            match time.get(&a) {
                Some(TimeValue::Value(v)) => {
                    args.set_time(&a, v.clone());
                }
                _ => unreachable!("fully numeric assignment"),
            }
        }
        let out = delta.eval(&args)?;
        Ok(out[..basis.len()].to_vec())
    } else {
        // Substitute into the coefficient ring, keeping symbolic times as
        // variables.
        let mut bindings = BTreeMap::new();
        for d in &basis {
            let left = if d == alpha { 1 } else { 0 };
            let right = if d == beta { 1 } else { 0 };
            bindings.insert(space_var_name(d, 0, 2), Poly::from_i64(coeff, left)?);
            bindings.insert(space_var_name(d, 1, 2), Poly::from_i64(coeff, right)?);
        }
        for a in MultiIndex::all_nonzero(order) {
            let image = match time.get(&a) {
                Some(TimeValue::Symbolic) => Poly::var(coeff, &time_symbol(&a, order))?,
                Some(TimeValue::Value(v)) => Poly::constant(coeff, v)?,
                None => return Err(ScalarExtError::IncompleteTime(order)),
            };
            bindings.insert(time_var_name(&a), image);
        }
        let mut coords = Vec::with_capacity(basis.len());
        for g in &basis {
            let poly = delta.space_component(g)?[0].substitute_into(coeff, &bindings)?;
            coords.push(poly.as_element());
        }
        Ok(coords)
    }
}

/// Applies a polynomial map over the base ring to arguments in the extension
/// ring (algebraic scalar extension: coefficients act through the unit).
pub fn scalar_extension_apply(
    f: &PolyMap,
    ext: &ExtensionRing,
    args: &[RingElement],
) -> Result<Vec<RingElement>, ScalarExtError> {
    if args.len() != f.domain_rank() {
        return Err(ScalarExtError::WrongRing);
    }
    for a in args {
        if a.ring() != ext.algebra() {
            return Err(ScalarExtError::WrongRing);
        }
    }
    if f.coeff_ring() != *ext.base_ring() {
        return Err(ScalarExtError::WrongRing);
    }
    let mut out = Vec::with_capacity(f.codomain_rank());
    for component in f.components() {
        let mut acc = ext.algebra().zero();
        for (key, coeff) in component.terms() {
            let mut term = ext.embed_base(&coeff)?;
            for (i, e) in key.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                term = &term * &args[i].pow(*e);
            }
            acc = &acc + &term;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Outcome of comparing the operational order-2 ring against the two-step
/// adjunction `K[X1]/(X1^2 - t10 X1)` followed by
/// `R[X2]/(X2^2 - (t01 + t11 X1) X2)`, with basis map
/// `{1, X1, X2, X1X2} -> {omega_00, omega_10, omega_01, omega_11}`.
#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    pub all_match: bool,
    pub mismatches: Vec<String>,
    /// omega_11^2 from the operational construction, as coordinates.
    pub omega11_sq_operational: Vec<RingElement>,
    /// omega_11^2 from the adjunction oracle.
    pub omega11_sq_adjunction: Vec<RingElement>,
    /// The transposed closed form `t01 (t10 + t01 t11)` on the omega_11
    /// coordinate, which circulates as an alternative; flagged when it
    /// disagrees with the computed coefficient.
    pub omega11_sq_alternate: RingElement,
    pub alternate_matches: bool,
}

/// Builds the order-2 extension both ways and compares all 16 basis
/// products.
pub fn verify_iterated_adjunction(
    base: &Ring,
    time: &TimeAssignment,
) -> Result<AdjunctionReport, ScalarExtError> {
    if time.order() != 2 {
        return Err(ScalarExtError::NotOrderTwo(time.order()));
    }
    let operational = ExtensionRing::build(base, 2, time.clone())?;
    let coeff = operational.coeff_ring().clone();
    let quotient_ring = Ring::polynomial(&coeff, &["X1", "X2"])?;

    let time_elem = |bits: &str| -> Result<Poly, ScalarExtError> {
        let a = MultiIndex::from_str_bits(bits).expect("valid bits");
        match time.get(&a) {
            Some(TimeValue::Symbolic) => {
                let name = time_symbol(&a, 2);
                let in_coeff = coeff.var(&name)?;
                Ok(Poly::constant(&quotient_ring, &in_coeff)?)
            }
            Some(TimeValue::Value(v)) => {
                let in_coeff = if coeff == *base { v.clone() } else { coeff.embed(v)? };
                Ok(Poly::constant(&quotient_ring, &in_coeff)?)
            }
            None => Err(ScalarExtError::IncompleteTime(2)),
        }
    };
    let t01 = time_elem("01")?;
    let t10 = time_elem("10")?;
    let t11 = time_elem("11")?;
    let x1 = Poly::var(&quotient_ring, "X1")?;

    // Normal form in the iterated quotient: X1^2 -> t10 X1 and
    // X2^2 -> (t01 + t11 X1) X2. The X2 rule can raise the X1 degree, so the
    // loop reduces X2 first.
    let x1_rule = t10.mul(&x1);
    let x2_rule = t01.add(&t11.mul(&x1));
    let normal_form = |p: &Poly| -> Poly {
        let mut current = p.clone();
        loop {
            let mut changed = false;
            let mut next = Poly::zero(&quotient_ring).expect("ring ok");
            for (key, coeff_el) in current.terms() {
                let (e1, e2) = (key[0], key[1]);
                let monomial = |a: u32, b: u32| -> Poly {
                    Poly::var(&quotient_ring, "X1")
                        .expect("ring ok")
                        .pow(a)
                        .mul(&Poly::var(&quotient_ring, "X2").expect("ring ok").pow(b))
                };
                let rewritten = if e2 >= 2 {
                    changed = true;
                    monomial(e1, e2 - 2).mul(&x2_rule).mul(&monomial(0, 1))
                } else if e1 >= 2 {
                    changed = true;
                    monomial(e1 - 2, e2).mul(&x1_rule)
                } else {
                    monomial(e1, e2)
                };
                next = next.add(
                    &rewritten.mul(&Poly::constant(&quotient_ring, &coeff_el).expect("coeff ok")),
                );
            }
            current = next;
            if !changed {
                return current;
            }
        }
    };

    // Adjunction basis in the omega order 00, 01, 10, 11.
    let exponents_of = |a: &MultiIndex| -> (u32, u32) {
        // omega_10 <-> X1, omega_01 <-> X2.
        let bits = a.bits();
        let e1 = if bits[0] { 1 } else { 0 };
        let e2 = if bits[1] { 1 } else { 0 };
        (e1, e2)
    };
    let coords_of = |p: &Poly| -> Vec<RingElement> {
        MultiIndex::all(2)
            .iter()
            .map(|g| {
                let (e1, e2) = exponents_of(g);
                p.terms()
                    .into_iter()
                    .find(|(key, _)| key[0] == e1 && key[1] == e2)
                    .map(|(_, c)| c)
                    .unwrap_or(coeff.zero())
            })
            .collect()
    };

    let mut mismatches = Vec::new();
    let basis = MultiIndex::all(2);
    let mut omega11_sq_adjunction = Vec::new();
    for a in &basis {
        for b in &basis {
            let (a1, a2) = exponents_of(a);
            let (b1, b2) = exponents_of(b);
            let x1p = Poly::var(&quotient_ring, "X1")?;
            let x2p = Poly::var(&quotient_ring, "X2")?;
            let prod = x1p.pow(a1 + b1).mul(&x2p.pow(a2 + b2));
            let reduced = normal_form(&prod);
            let adjunction_coords = coords_of(&reduced);
            let operational_coords = operational.product_coords(a, b)?;
            if a.depth() == 2 && b.depth() == 2 {
                omega11_sq_adjunction = adjunction_coords.clone();
            }
            if adjunction_coords != operational_coords {
                mismatches.push(format!(
                    "omega_{a} * omega_{b}: adjunction [{}] vs operational [{}]",
                    render(&adjunction_coords),
                    render(&operational_coords)
                ));
            }
        }
    }

    let eleven = MultiIndex::from_str_bits("11").unwrap();
    let omega11_sq_operational = operational.product_coords(&eleven, &eleven)?;
    // The transposed closed form t01 (t10 + t01 t11).
    let lift = |p: &Poly| -> RingElement {
        // Constant polynomials in the X-ring are coefficient elements.
        p.terms()
            .into_iter()
            .next()
            .map(|(_, c)| c)
            .unwrap_or(coeff.zero())
    };
    let alt = lift(&t01.mul(&t10.add(&t01.mul(&t11))));
    let mut alternate_coords = vec![coeff.zero(); 4];
    alternate_coords[3] = alt.clone();
    let alternate_matches = alternate_coords == omega11_sq_operational;

    Ok(AdjunctionReport {
        all_match: mismatches.is_empty(),
        mismatches,
        omega11_sq_operational,
        omega11_sq_adjunction,
        omega11_sq_alternate: alt,
        alternate_matches,
    })
}

fn render(coords: &[RingElement]) -> String {
    coords
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Result of the automorphism enumeration: matrices are row-major over the
/// base ring, columns holding the images of the basis vectors.
#[derive(Clone, Debug)]
pub struct AutomorphismSearch {
    pub matrices: Vec<Vec<Vec<RingElement>>>,
    pub group_order: usize,
    pub candidates_tried: u64,
}

pub const DEFAULT_SEARCH_BOUND: u64 = 2_000_000;

/// Enumerates all base-linear unital ring automorphisms of the extension:
/// every map fixing `omega_0` and sending each remaining basis vector to an
/// arbitrary element, kept when it is multiplicative on basis pairs and
/// bijective.
pub fn automorphism_search(
    ext: &ExtensionRing,
    bound: u64,
) -> Result<AutomorphismSearch, ScalarExtError> {
    if !ext.time().is_fully_numeric() {
        return Err(ScalarExtError::SymbolicTime);
    }
    let elements = ext
        .algebra()
        .enumerate()
        .ok_or(ScalarExtError::NotFinite)?;
    let rank = ext.rank();
    let free_slots = rank - 1;
    let candidates = {
        let mut n = BigUint::from(1u32);
        for _ in 0..free_slots {
            n *= BigUint::from(elements.len());
        }
        n
    };
    if candidates > BigUint::from(bound) {
        return Err(ScalarExtError::SearchTooLarge { candidates, bound });
    }
    let total = candidates.to_u64().expect("bounded");

    // Precompute basis products as algebra elements for the multiplicativity
    // check.
    let basis_elems: Vec<RingElement> = (0..rank)
        .map(|i| ext.algebra().basis_vector(i).expect("basis"))
        .collect();
    let products: Vec<Vec<RingElement>> = (0..rank)
        .map(|i| (0..rank).map(|j| &basis_elems[i] * &basis_elems[j]).collect())
        .collect();

    let coeff = ext.coeff_ring().clone();
    let mut matrices = Vec::new();
    let mut indices = vec![0usize; free_slots];
    let mut tried = 0u64;
    loop {
        tried += 1;
        let images: Vec<&RingElement> = indices.iter().map(|i| &elements[*i]).collect();
        if candidate_is_automorphism(ext, &basis_elems, &products, &images)? {
            // Build the matrix: column 0 is omega_0 -> omega_0.
            let mut matrix = vec![vec![coeff.zero(); rank]; rank];
            matrix[0][0] = coeff.one();
            for (slot, img) in images.iter().enumerate() {
                let coords = ext.coords(img)?;
                for (r, c) in coords.into_iter().enumerate() {
                    matrix[r][slot + 1] = c;
                }
            }
            matrices.push(matrix);
        }
        // Odometer step.
        let mut pos = free_slots;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < elements.len() {
                break;
            }
            indices[pos] = 0;
            if pos == 0 {
                break;
            }
        }
        if indices.iter().all(|i| *i == 0) {
            break;
        }
    }
    debug_assert_eq!(tried, total);
    let group_order = matrices.len();
    Ok(AutomorphismSearch { matrices, group_order, candidates_tried: tried })
}

fn candidate_is_automorphism(
    ext: &ExtensionRing,
    basis_elems: &[RingElement],
    products: &[Vec<RingElement>],
    images: &[&RingElement],
) -> Result<bool, ScalarExtError> {
    let rank = ext.rank();
    let phi = |x: &RingElement| -> Result<RingElement, ScalarExtError> {
        let coords = ext.coords(x)?;
        let mut acc = ext.embed_from_coeff(&coords[0])?;
        for (i, c) in coords.iter().enumerate().skip(1) {
            let scaled = &ext.embed_from_coeff(c)? * images[i - 1];
            acc = &acc + &scaled;
        }
        Ok(acc)
    };
    // Multiplicativity on basis pairs (the unit column is fixed).
    for i in 1..rank {
        for j in i..rank {
            let lhs = &phi(&basis_elems[i])? * &phi(&basis_elems[j])?;
            let rhs = phi(&products[i][j])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    // Bijectivity: determinant of the matrix must be a unit.
    let coeff = ext.coeff_ring().clone();
    let mut columns: Vec<Vec<RingElement>> = Vec::with_capacity(rank);
    {
        let mut e0 = vec![coeff.zero(); rank];
        e0[0] = coeff.one();
        columns.push(e0);
    }
    for img in images {
        columns.push(ext.coords(img)?);
    }
    let det = determinant(&coeff, &columns);
    Ok(det.invert().is_some())
}

impl ExtensionRing {
    fn embed_from_coeff(&self, c: &RingElement) -> Result<RingElement, ScalarExtError> {
        Ok(self.algebra.embed(c)?)
    }
}

/// Determinant by cofactor expansion; ranks here are at most 2^k for small k.
fn determinant(ring: &Ring, columns: &[Vec<RingElement>]) -> RingElement {
    let n = columns.len();
    if n == 1 {
        return columns[0][0].clone();
    }
    let mut acc = ring.zero();
    for (j, col) in columns.iter().enumerate() {
        if col[0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RingElement>> = columns
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, c)| c[1..].to_vec())
            .collect();
        let cofactor = determinant(ring, &minor);
        let signed = if j % 2 == 0 {
            &col[0] * &cofactor
        } else {
            -&(&col[0] * &cofactor)
        };
        acc = &acc + &signed;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn idx(s: &str) -> MultiIndex {
        MultiIndex::from_str_bits(s).unwrap()
    }

    #[test]
    fn order_one_symbolic_multiplication_law() {
        let ext = ExtensionRing::build(&q(), 1, TimeAssignment::all_symbolic(1)).unwrap();
        let coeff = ext.coeff_ring().clone();
        let t = coeff.var("t").unwrap();
        // omega_0 is the unit.
        assert_eq!(
            ext.product_coords(&idx("0"), &idx("1")).unwrap(),
            vec![coeff.zero(), coeff.one()]
        );
        // omega^2 = t omega.
        assert_eq!(
            ext.product_coords(&idx("1"), &idx("1")).unwrap(),
            vec![coeff.zero(), t]
        );
    }

    #[test]
    fn order_one_zero_time_is_dual_numbers() {
        let time = TimeAssignment::constant(1, &q().zero());
        let ext = ExtensionRing::build(&q(), 1, time).unwrap();
        let eps = ext.omega(&idx("1")).unwrap();
        assert!((&eps * &eps).is_zero());
    }

    #[test]
    fn order_one_numeric_product() {
        let time = TimeAssignment::constant(1, &q().from_i64(2));
        let ext = ExtensionRing::build(&q(), 1, time).unwrap();
        let x = ext.from_coords(&[q().one(), q().one()]).unwrap();
        let prod = ext.mul(&x, &x);
        assert_eq!(
            ext.coords(&prod).unwrap(),
            vec![q().one(), q().from_i64(4)]
        );
    }

    #[test]
    fn order_two_symbolic_relations() {
        let ext = ExtensionRing::build(&q(), 2, TimeAssignment::all_symbolic(2)).unwrap();
        let coeff = ext.coeff_ring().clone();
        let t01 = coeff.var("t01").unwrap();
        let t10 = coeff.var("t10").unwrap();
        let t11 = coeff.var("t11").unwrap();
        let zero = coeff.zero();

        // omega_10^2 = t10 omega_10
        assert_eq!(
            ext.product_coords(&idx("10"), &idx("10")).unwrap(),
            vec![zero.clone(), zero.clone(), t10.clone(), zero.clone()]
        );
        // omega_01 omega_10 = omega_11
        assert_eq!(
            ext.product_coords(&idx("01"), &idx("10")).unwrap(),
            vec![zero.clone(), zero.clone(), zero.clone(), coeff.one()]
        );
        // omega_01^2 = t01 omega_01 + t11 omega_11
        assert_eq!(
            ext.product_coords(&idx("01"), &idx("01")).unwrap(),
            vec![zero.clone(), t01.clone(), zero.clone(), t11.clone()]
        );
        // omega_10 omega_11 = t10 omega_11
        assert_eq!(
            ext.product_coords(&idx("10"), &idx("11")).unwrap(),
            vec![zero.clone(), zero.clone(), zero.clone(), t10.clone()]
        );
        // omega_01 omega_11 = (t01 + t10 t11) omega_11
        assert_eq!(
            ext.product_coords(&idx("01"), &idx("11")).unwrap(),
            vec![
                zero.clone(),
                zero.clone(),
                zero.clone(),
                &t01 + &(&t10 * &t11)
            ]
        );
        // omega_11^2 = t10 (t01 + t10 t11) omega_11, from the relation chain.
        assert_eq!(
            ext.product_coords(&idx("11"), &idx("11")).unwrap(),
            vec![
                zero.clone(),
                zero.clone(),
                zero.clone(),
                &t10 * &(&t01 + &(&t10 * &t11))
            ]
        );
    }

    #[test]
    fn order_two_axioms_hold_symbolically() {
        let ext = ExtensionRing::build(&q(), 2, TimeAssignment::all_symbolic(2)).unwrap();
        ext.verify_associativity().unwrap();
        assert!(ext.addition_is_componentwise().unwrap());
        assert!(ext.triangularity_violations().unwrap().is_empty());
    }

    #[test]
    fn adjunction_matches_operational_symbolically() {
        let report = verify_iterated_adjunction(&q(), &TimeAssignment::all_symbolic(2)).unwrap();
        assert!(report.all_match, "mismatches: {:?}", report.mismatches);
        assert_eq!(report.omega11_sq_operational, report.omega11_sq_adjunction);
        // The transposed closed form differs from the computed coefficient.
        assert!(!report.alternate_matches);
    }

    #[test]
    fn adjunction_matches_at_zero_times() {
        let time = TimeAssignment::constant(2, &q().zero());
        let report = verify_iterated_adjunction(&q(), &time).unwrap();
        assert!(report.all_match);
        // All products of the omegas vanish at zero times except through the
        // omega_01 omega_10 = omega_11 relation.
    }

    #[test]
    fn adjunction_matches_numeric_mod_three() {
        let z3 = Ring::integers_mod(3).unwrap();
        let time = TimeAssignment::numeric(
            2,
            &[z3.from_i64(1), z3.from_i64(2), z3.from_i64(1)],
        )
        .unwrap();
        let report = verify_iterated_adjunction(&z3, &time).unwrap();
        assert!(report.all_match, "mismatches: {:?}", report.mismatches);
    }

    #[test]
    fn scalar_extension_apply_identity() {
        let time = TimeAssignment::constant(1, &q().from_i64(3));
        let ext = ExtensionRing::build(&q(), 1, time).unwrap();
        let r = Ring::polynomial(&q(), &["x0", "x1"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let a = ext.from_coords(&[q().from_i64(2), q().from_i64(5)]).unwrap();
        let b = ext.from_coords(&[q().from_i64(-1), q().from_i64(7)]).unwrap();
        let out = scalar_extension_apply(&id, &ext, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(out, vec![a, b]);
    }

    #[test]
    fn dual_numbers_compute_forward_derivative() {
        // f(x) = x^2 on x + v eps gives (x^2, 2 x v).
        let time = TimeAssignment::constant(1, &q().zero());
        let ext = ExtensionRing::build(&q(), 1, time).unwrap();
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(2)]).unwrap();
        let xi = ext.from_coords(&[q().from_i64(3), q().from_i64(5)]).unwrap();
        let out = scalar_extension_apply(&f, &ext, &[xi]).unwrap();
        assert_eq!(
            ext.coords(&out[0]).unwrap(),
            vec![q().from_i64(9), q().from_i64(30)]
        );
    }

    #[test]
    fn symbolic_time_second_component_is_quotient() {
        // Base Q[x, v]; the second component of f(u) = u^2 applied to
        // x + v omega must be 2 x v + t v^2.
        let base = Ring::polynomial(&q(), &["x", "v"]).unwrap();
        let ext = ExtensionRing::build(&base, 1, TimeAssignment::all_symbolic(1)).unwrap();
        let coeff = ext.coeff_ring().clone();
        let r = Ring::polynomial(&base, &["u"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "u").unwrap().pow(2)]).unwrap();
        let x = coeff.embed(&base.var("x").unwrap()).unwrap();
        let v = coeff.embed(&base.var("v").unwrap()).unwrap();
        let xi = ext.from_coords(&[x.clone(), v.clone()]).unwrap();
        let out = scalar_extension_apply(&f, &ext, &[xi]).unwrap();
        let coords = ext.coords(&out[0]).unwrap();
        let t = coeff.var("t").unwrap();
        assert_eq!(coords[0], &x * &x);
        assert_eq!(coords[1], &(&(&x * &v) + &(&x * &v)) + &(&t * &(&v * &v)));
    }

    #[test]
    fn automorphisms_of_dual_numbers_mod_two() {
        let z2 = Ring::integers_mod(2).unwrap();
        let time = TimeAssignment::constant(1, &z2.zero());
        let ext = ExtensionRing::build(&z2, 1, time).unwrap();
        let found = automorphism_search(&ext, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(found.group_order, 1);
        assert_eq!(found.candidates_tried, 4);
    }

    #[test]
    fn automorphisms_of_dual_numbers_mod_three() {
        let z3 = Ring::integers_mod(3).unwrap();
        let time = TimeAssignment::constant(1, &z3.zero());
        let ext = ExtensionRing::build(&z3, 1, time).unwrap();
        let found = automorphism_search(&ext, DEFAULT_SEARCH_BOUND).unwrap();
        // X -> X and X -> -X.
        assert_eq!(found.group_order, 2);
    }

    #[test]
    fn automorphisms_of_split_extension_mod_three() {
        let z3 = Ring::integers_mod(3).unwrap();
        let time = TimeAssignment::constant(1, &z3.one());
        let ext = ExtensionRing::build(&z3, 1, time).unwrap();
        let found = automorphism_search(&ext, DEFAULT_SEARCH_BOUND).unwrap();
        // The ring splits as F3 x F3; the idempotent swap is the only
        // non-trivial automorphism. Cross-check: idempotents e with e^2 = e.
        assert_eq!(found.group_order, 2);
        let idempotents: Vec<_> = ext
            .algebra()
            .enumerate()
            .unwrap()
            .into_iter()
            .filter(|e| &(e * e) == e)
            .collect();
        assert_eq!(idempotents.len(), 4);
    }

    #[test]
    fn search_bound_is_enforced() {
        let z5 = Ring::integers_mod(5).unwrap();
        let time = TimeAssignment::constant(2, &z5.zero());
        let ext = ExtensionRing::build(&z5, 2, time).unwrap();
        let err = automorphism_search(&ext, 1000).unwrap_err();
        assert!(matches!(err, ScalarExtError::SearchTooLarge { .. }));
    }
}
