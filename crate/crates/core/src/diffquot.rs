//! Difference quotient maps and their singular extensions.
//!
//! For a map `f: K^m -> K^n` the first-order difference quotient is
//! `f / (x, v, t) = (f(x + t v) - f(x)) / t`, defined for invertible `t`.
//! For polynomial `f` the numerator is exactly divisible by `t`, so the
//! quotient extends to `t = 0` as a polynomial map: that extension, its
//! iterates, the extended maps `(f(x), quotient, t)`, the per-index component
//! formula, a depth-graded one-parameter deformation, and the barycentric
//! first-order quotient all live here.
//!
//! Variable bookkeeping follows one convention throughout the crate: the
//! `k`-th order quotient has `2^k` space arguments `x_a` and `2^k - 1` time
//! arguments `t_a`, addressed by bit strings `a` of length `k`. Iterating
//! from order `k-1` to `k` prefixes `0` to the indices of the base-point
//! block, `1` to the perturbation block, and names the fresh time
//! `1` followed by `k-1` zeros. For one-dimensional domains the variables
//! print as `x_01`, `t_10`; higher-rank domains append a coordinate suffix.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::polymap::{EvalMap, Poly, PolyError, PolyMap};
use crate::rings::{Ring, RingElement};

/// Default cap on the quotient order; the argument count grows like
/// `2^(k+1) - 1` per scalar dimension, so large `k` explodes.
pub const DEFAULT_MAX_ORDER: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error("time parameter is not invertible")]
    NonInvertibleTime,
    #[error("order {0} exceeds the configured bound {1}")]
    OrderTooLarge(usize, usize),
    #[error("order must be at least 1")]
    OrderZero,
    #[error("argument count mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("an exact division that the construction requires failed: {0}")]
    ExactDivisionFailed(String),
    #[error("multi-index has wrong length: expected {expected}, got {got}")]
    IndexLength { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] crate::rings::RingError),
}

/// Element of `{0,1}^k`, ordered as binary numbers with the leading bit most
/// significant: `00 < 01 < 10 < 11`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    bits: Vec<bool>,
}

impl MultiIndex {
    pub fn new(bits: Vec<bool>) -> MultiIndex {
        MultiIndex { bits }
    }

    pub fn zero(k: usize) -> MultiIndex {
        MultiIndex { bits: vec![false; k] }
    }

    pub fn from_str_bits(s: &str) -> Option<MultiIndex> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(MultiIndex { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The depth `|a|`: number of set bits.
    pub fn depth(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.depth() == 0
    }

    /// Subset order: `self <= other` bitwise.
    pub fn is_subset_of(&self, other: &MultiIndex) -> bool {
        self.bits.len() == other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    /// Prefixes one bit (the convention for iterating quotients).
    pub fn prefixed(&self, bit: bool) -> MultiIndex {
        let mut bits = Vec::with_capacity(self.bits.len() + 1);
        bits.push(bit);
        bits.extend_from_slice(&self.bits);
        MultiIndex { bits }
    }

    /// All indices of `{0,1}^k` in canonical order.
    pub fn all(k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(1 << k);
        for code in 0..(1u64 << k) {
            let bits = (0..k).map(|i| (code >> (k - 1 - i)) & 1 == 1).collect();
            out.push(MultiIndex { bits });
        }
        out
    }

    /// All nonzero indices in canonical order.
    pub fn all_nonzero(k: usize) -> Vec<MultiIndex> {
        MultiIndex::all(k).into_iter().filter(|a| !a.is_zero()).collect()
    }

    /// Compresses a subset `b ⊆ self` of length `k` to an index of length
    /// `depth(self)` by reading off the bits of `b` at the set positions.
    pub fn compress(&self, b: &MultiIndex) -> MultiIndex {
        debug_assert!(b.is_subset_of(self));
        let bits = self
            .bits
            .iter()
            .zip(&b.bits)
            .filter(|(sel, _)| **sel)
            .map(|(_, bit)| *bit)
            .collect();
        MultiIndex { bits }
    }

    /// Inverse of [`MultiIndex::compress`]: scatters `short`'s bits into the
    /// set positions of `self`.
    pub fn scatter(&self, short: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(short.len(), self.depth());
        let mut it = short.bits.iter();
        let bits = self
            .bits
            .iter()
            .map(|sel| if *sel { *it.next().unwrap() } else { false })
            .collect();
        MultiIndex { bits }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex({})", self)
    }
}

/// Canonical variable name of the coordinate `coord` of the space argument
/// `x_a` for scalar rank `m`.
pub fn space_var_name(a: &MultiIndex, coord: usize, m: usize) -> String {
    if m == 1 {
        format!("x_{a}")
    } else {
        format!("x_{a}_{coord}")
    }
}

/// Canonical variable name of the time argument `t_a`.
pub fn time_var_name(a: &MultiIndex) -> String {
    format!("t_{a}")
}

/// The canonical variable list of the order-`k` quotient of a rank-`m` map:
/// all space coordinates in index order, then all times in index order.
pub fn quotient_vars(k: usize, m: usize) -> Vec<String> {
    let mut vars = Vec::new();
    for a in MultiIndex::all(k) {
        for coord in 0..m {
            vars.push(space_var_name(&a, coord, m));
        }
    }
    for a in MultiIndex::all_nonzero(k) {
        vars.push(time_var_name(&a));
    }
    vars
}

/// Full argument tuple of an order-`k` quotient: one value of type `T` per
/// space coordinate slot and per time slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffArgs<T> {
    pub order: usize,
    pub scalar_rank: usize,
    pub space: BTreeMap<MultiIndex, Vec<T>>,
    pub time: BTreeMap<MultiIndex, T>,
}

impl<T: Clone> DiffArgs<T> {
    pub fn new(order: usize, scalar_rank: usize) -> DiffArgs<T> {
        DiffArgs { order, scalar_rank, space: BTreeMap::new(), time: BTreeMap::new() }
    }

    pub fn set_space(&mut self, a: &MultiIndex, value: Vec<T>) -> &mut Self {
        assert_eq!(a.len(), self.order, "index length must equal the order");
        assert_eq!(value.len(), self.scalar_rank);
        self.space.insert(a.clone(), value);
        self
    }

    pub fn set_time(&mut self, a: &MultiIndex, value: T) -> &mut Self {
        assert_eq!(a.len(), self.order);
        assert!(!a.is_zero(), "time indices are nonzero");
        self.time.insert(a.clone(), value);
        self
    }

    /// Flattens into the canonical argument order; fails when a slot is
    /// missing.
    pub fn flatten(&self) -> Result<Vec<T>, DiffError> {
        let expected_space = 1usize << self.order;
        if self.space.len() != expected_space || self.time.len() != expected_space - 1 {
            return Err(DiffError::ArityMismatch {
                expected: expected_space * self.scalar_rank + expected_space - 1,
                got: self.space.len() * self.scalar_rank + self.time.len(),
            });
        }
        let mut out = Vec::new();
        for a in MultiIndex::all(self.order) {
            let block = self.space.get(&a).ok_or(DiffError::IndexLength {
                expected: self.order,
                got: a.len(),
            })?;
            out.extend(block.iter().cloned());
        }
        for a in MultiIndex::all_nonzero(self.order) {
            let t = self.time.get(&a).ok_or(DiffError::IndexLength {
                expected: self.order,
                got: a.len(),
            })?;
            out.push(t.clone());
        }
        Ok(out)
    }
}

/// First-order difference quotient of a black-box map at an invertible time:
/// `(f(x + t v) - f(x)) * t^{-1}`, componentwise.
pub fn diff1_eval(
    f: &dyn EvalMap,
    x: &[RingElement],
    v: &[RingElement],
    t: &RingElement,
) -> Result<Vec<RingElement>, DiffError> {
    let m = f.eval_domain_rank();
    if x.len() != m || v.len() != m {
        return Err(DiffError::ArityMismatch { expected: m, got: x.len().max(v.len()) });
    }
    let t_inv = t.invert().ok_or(DiffError::NonInvertibleTime)?;
    let shifted: Vec<RingElement> = x
        .iter()
        .zip(v)
        .map(|(xi, vi)| xi + &(t * vi))
        .collect();
    let fx = f.eval(x)?;
    let fs = f.eval(&shifted)?;
    Ok(fs
        .iter()
        .zip(&fx)
        .map(|(a, b)| &(a - b) * &t_inv)
        .collect())
}

/// Symbolic difference quotient map of order `k`, with canonically named
/// variables; the polynomial extension is defined on all of the domain,
/// including singular times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    pub order: usize,
    pub scalar_rank: usize,
    pub map: PolyMap,
}

impl QuotientMap {
    /// Evaluates at a full argument tuple.
    pub fn eval(&self, args: &DiffArgs<RingElement>) -> Result<Vec<RingElement>, DiffError> {
        let flat = args.flatten()?;
        Ok(self.map.evaluate(&flat)?)
    }

    /// Substitutes polynomial values for every slot; the values live in
    /// `target` (a polynomial ring over the same coefficient ring).
    pub fn substitute(
        &self,
        target: &Ring,
        args: &DiffArgs<Poly>,
    ) -> Result<PolyMap, DiffError> {
        let mut bindings = BTreeMap::new();
        for (a, block) in &args.space {
            for (coord, val) in block.iter().enumerate() {
                bindings.insert(space_var_name(a, coord, self.scalar_rank), val.clone());
            }
        }
        for (a, val) in &args.time {
            bindings.insert(time_var_name(a), val.clone());
        }
        Ok(self.map.substitute_into(target, &bindings)?)
    }
}

/// Extended difference quotient map of order `k`. Outputs are the space
/// components `w_a` (each of codomain rank `n`) in index order followed by
/// the pass-through times `t_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap {
    pub order: usize,
    pub scalar_rank: usize,
    pub codomain_rank: usize,
    pub map: PolyMap,
}

impl DeltaMap {
    /// The space component labelled `a` as a slice of `n` polynomials.
    pub fn space_component(&self, a: &MultiIndex) -> Result<&[Poly], DiffError> {
        if a.len() != self.order {
            return Err(DiffError::IndexLength { expected: self.order, got: a.len() });
        }
        let position = MultiIndex::all(self.order)
            .into_iter()
            .position(|b| b == *a)
            .expect("index enumeration is exhaustive");
        let n = self.codomain_rank;
        Ok(&self.map.components()[position * n..(position + 1) * n])
    }

    /// The time output labelled `a`.
    pub fn time_component(&self, a: &MultiIndex) -> Result<&Poly, DiffError> {
        if a.len() != self.order || a.is_zero() {
            return Err(DiffError::IndexLength { expected: self.order, got: a.len() });
        }
        let position = MultiIndex::all_nonzero(self.order)
            .into_iter()
            .position(|b| b == *a)
            .expect("index enumeration is exhaustive");
        let space = (1usize << self.order) * self.codomain_rank;
        Ok(&self.map.components()[space + position])
    }

    pub fn eval(&self, args: &DiffArgs<RingElement>) -> Result<Vec<RingElement>, DiffError> {
        let flat = args.flatten()?;
        Ok(self.map.evaluate(&flat)?)
    }
}

/// Builds the target polynomial ring for order `k` over the coefficient ring
/// of `f`.
fn quotient_ring(f: &PolyMap, k: usize) -> Result<Ring, DiffError> {
    let vars = quotient_vars(k, f.domain_rank());
    Ok(Ring::polynomial_named(&f.coeff_ring(), vars)?)
}

/// One iteration step: treats `g` (a map whose variables are the canonical
/// order-`j` variables) as a plain map and forms its first-order quotient
/// with the canonical order-`j+1` labelling. Returns the new components only.
fn step_quotient(
    g: &PolyMap,
    j: usize,
    m: usize,
    target: &Ring,
) -> Result<Vec<Poly>, DiffError> {
    let new_time = {
        let mut bits = vec![false; j + 1];
        bits[0] = true;
        MultiIndex::new(bits)
    };
    let t_new = Poly::var(target, &time_var_name(&new_time))?;
    // x + t v bindings and plain x bindings for every order-j slot.
    let mut shifted = BTreeMap::new();
    let mut base_point = BTreeMap::new();
    for a in MultiIndex::all(j) {
        for coord in 0..m {
            let name = space_var_name(&a, coord, m);
            let x_var = Poly::var(target, &space_var_name(&a.prefixed(false), coord, m))?;
            let v_var = Poly::var(target, &space_var_name(&a.prefixed(true), coord, m))?;
            shifted.insert(name.clone(), x_var.add(&t_new.mul(&v_var)));
            base_point.insert(name, x_var);
        }
    }
    for a in MultiIndex::all_nonzero(j) {
        let name = time_var_name(&a);
        let x_var = Poly::var(target, &time_var_name(&a.prefixed(false)))?;
        let v_var = Poly::var(target, &time_var_name(&a.prefixed(true)))?;
        shifted.insert(name.clone(), x_var.add(&t_new.mul(&v_var)));
        base_point.insert(name, x_var);
    }
    let time_name = time_var_name(&new_time);
    g.components()
        .iter()
        .map(|c| {
            let num = c
                .substitute_into(target, &shifted)?
                .sub(&c.substitute_into(target, &base_point)?);
            num.exact_divide(&time_name).ok_or_else(|| {
                DiffError::ExactDivisionFailed(format!(
                    "difference not divisible by {time_name}"
                ))
            })
        })
        .collect()
}

/// Renames a map over order-`j` canonical variables into the order-`j+1`
/// ring by prefixing `bit` to every index.
fn prefix_into(
    g: &PolyMap,
    j: usize,
    m: usize,
    bit: bool,
    target: &Ring,
) -> Result<Vec<Poly>, DiffError> {
    let mut bindings = BTreeMap::new();
    for a in MultiIndex::all(j) {
        for coord in 0..m {
            bindings.insert(
                space_var_name(&a, coord, m),
                Poly::var(target, &space_var_name(&a.prefixed(bit), coord, m))?,
            );
        }
    }
    for a in MultiIndex::all_nonzero(j) {
        bindings.insert(
            time_var_name(&a),
            Poly::var(target, &time_var_name(&a.prefixed(bit)))?,
        );
    }
    Ok(g.substitute_into(target, &bindings)?.components().to_vec())
}

/// Embeds a user map into the order-0 canonical labelling (`x_` with the
/// empty bit string is spelled without an index part).
fn order_zero(f: &PolyMap) -> Result<PolyMap, DiffError> {
    let m = f.domain_rank();
    let empty = MultiIndex::zero(0);
    let vars: Vec<String> = (0..m).map(|c| space_var_name(&empty, c, m)).collect();
    let ring = Ring::polynomial_named(&f.coeff_ring(), vars.clone())?;
    let bindings: BTreeMap<String, Poly> = f
        .vars()
        .iter()
        .enumerate()
        .map(|(i, v)| Ok((v.clone(), Poly::var(&ring, &vars[i])?)))
        .collect::<Result<_, DiffError>>()?;
    Ok(f.substitute_into(&ring, &bindings)?)
}

fn check_order(k: usize, max_order: usize) -> Result<(), DiffError> {
    if k == 0 {
        return Err(DiffError::OrderZero);
    }
    if k > max_order {
        return Err(DiffError::OrderTooLarge(k, max_order));
    }
    Ok(())
}

/// The symbolic order-`k` difference quotient `f^(k)` of a polynomial map,
/// obtained by iterating the first-order construction. Never fails on
/// polynomial input: `f(x + t v) - f(x)` always vanishes at `t = 0`.
pub fn diffk_sym(f: &PolyMap, k: usize) -> Result<QuotientMap, DiffError> {
    diffk_sym_bounded(f, k, DEFAULT_MAX_ORDER)
}

pub fn diffk_sym_bounded(f: &PolyMap, k: usize, max_order: usize) -> Result<QuotientMap, DiffError> {
    check_order(k, max_order)?;
    let m = f.domain_rank();
    let mut g = order_zero(f)?;
    for j in 0..k {
        let target = quotient_ring(f, j + 1)?;
        let comps = step_quotient(&g, j, m, &target)?;
        g = PolyMap::new(&target, comps)?;
    }
    Ok(QuotientMap { order: k, scalar_rank: m, map: g })
}

/// First-order symbolic quotient; variables `(x_0, x_1, t_1)`.
pub fn diff1_sym(f: &PolyMap) -> Result<QuotientMap, DiffError> {
    diffk_sym(f, 1)
}

/// The symbolic extended quotient map of order `k`.
pub fn extendedk_sym(f: &PolyMap, k: usize) -> Result<DeltaMap, DiffError> {
    extendedk_sym_bounded(f, k, DEFAULT_MAX_ORDER)
}

pub fn extendedk_sym_bounded(
    f: &PolyMap,
    k: usize,
    max_order: usize,
) -> Result<DeltaMap, DiffError> {
    check_order(k, max_order)?;
    let m = f.domain_rank();
    let n = f.codomain_rank();
    let mut g = order_zero(f)?;
    for j in 0..k {
        let target = quotient_ring(f, j + 1)?;
        // Space outputs: value block (prefix 0) and quotient block (prefix 1),
        // interleaved back into canonical index order.
        let value_block = prefix_into(&g, j, m, false, &target)?;
        let quot_block = step_quotient(&g, j, m, &target)?;
        let space_out = 1usize << j;
        let mut space_components: Vec<Vec<Poly>> = Vec::with_capacity(space_out * 2);
        for idx in &MultiIndex::all(j + 1) {
            // Position of the order-j label obtained by stripping the prefix.
            let inner = MultiIndex::new(idx.bits()[1..].to_vec());
            let pos = MultiIndex::all(j).into_iter().position(|b| b == inner).unwrap();
            let block = if idx.bits()[0] { &quot_block } else { &value_block };
            let lo = pos * n;
            space_components.push(block[lo..lo + n].to_vec());
        }
        // Old time outputs sit at the tail of g's component list.
        let old_times: Vec<Poly> = g.components()[space_out * n..].to_vec();
        let mut time_components: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
        for (pos, a) in MultiIndex::all_nonzero(j).iter().enumerate() {
            // Value of the time output is a pass-through; its quotient against
            // the new time collapses to the 1-prefixed time variable. Both are
            // computed, not assumed: the blocks above already contain them.
            let value = {
                let mut bindings = BTreeMap::new();
                for b in MultiIndex::all(j) {
                    for coord in 0..m {
                        bindings.insert(
                            space_var_name(&b, coord, m),
                            Poly::var(&target, &space_var_name(&b.prefixed(false), coord, m))?,
                        );
                    }
                }
                for b in MultiIndex::all_nonzero(j) {
                    bindings.insert(
                        time_var_name(&b),
                        Poly::var(&target, &time_var_name(&b.prefixed(false)))?,
                    );
                }
                old_times[pos].substitute_into(&target, &bindings)?
            };
            time_components.insert(a.prefixed(false), value);
            let quotient = {
                let as_map = PolyMap::new(g.ring(), vec![old_times[pos].clone()])?;
                step_quotient(&as_map, j, m, &target)?.remove(0)
            };
            time_components.insert(a.prefixed(true), quotient);
        }
        let new_time = {
            let mut bits = vec![false; j + 1];
            bits[0] = true;
            MultiIndex::new(bits)
        };
        time_components.insert(
            new_time.clone(),
            Poly::var(&target, &time_var_name(&new_time))?,
        );
        let mut components: Vec<Poly> = space_components.into_iter().flatten().collect();
        for a in MultiIndex::all_nonzero(j + 1) {
            components.push(time_components.remove(&a).expect("every time index present"));
        }
        g = PolyMap::new(&target, components)?;
    }
    Ok(DeltaMap { order: k, scalar_rank: m, codomain_rank: n, map: g })
}

/// First-order extended map `(f(x), quotient, t)`.
pub fn extended1(f: &PolyMap) -> Result<DeltaMap, DiffError> {
    extendedk_sym(f, 1)
}

/// The differential `df(x)v`: the first-order quotient at `t = 0`, a map in
/// the variables `(x, v)`.
pub fn differential(f: &PolyMap) -> Result<PolyMap, DiffError> {
    let q = diff1_sym(f)?;
    at_zero_time(&q)
}

fn at_zero_time(q: &QuotientMap) -> Result<PolyMap, DiffError> {
    debug_assert_eq!(q.order, 1);
    let m = q.scalar_rank;
    let coeff = q.map.coeff_ring();
    let mut vars = Vec::new();
    let zero = MultiIndex::from_str_bits("0").unwrap();
    let one = MultiIndex::from_str_bits("1").unwrap();
    for c in 0..m {
        vars.push(space_var_name(&zero, c, m));
    }
    for c in 0..m {
        vars.push(space_var_name(&one, c, m));
    }
    let target = Ring::polynomial_named(&coeff, vars)?;
    let mut bindings = BTreeMap::new();
    bindings.insert(time_var_name(&one), Poly::zero(&target)?);
    Ok(q.map.substitute_into(&target, &bindings)?)
}

/// The tangent map `Tf(x, v) = (f(x), df(x)v)`, a map of rank `2m -> 2n`.
pub fn tangent(f: &PolyMap) -> Result<PolyMap, DiffError> {
    let df = differential(f)?;
    let target = df.ring().clone();
    let m = f.domain_rank();
    let zero = MultiIndex::from_str_bits("0").unwrap();
    let bindings: BTreeMap<String, Poly> = f
        .vars()
        .iter()
        .enumerate()
        .map(|(i, v)| Ok((v.clone(), Poly::var(&target, &space_var_name(&zero, i, m))?)))
        .collect::<Result<_, DiffError>>()?;
    let value = f.substitute_into(&target, &bindings)?;
    let mut components = value.components().to_vec();
    components.extend(df.components().iter().cloned());
    Ok(PolyMap::new(&target, components)?)
}

/// Builds the order-`k` component claimed for index `a` directly: the
/// order-`|a|` quotient applied to the sub-arguments `(x_b)_{b ⊆ a}`,
/// `(t_b)_{b ⊆ a, b != 0}` in canonical sub-order.
pub fn component_of_delta(f: &PolyMap, k: usize, a: &MultiIndex) -> Result<PolyMap, DiffError> {
    if a.len() != k {
        return Err(DiffError::IndexLength { expected: k, got: a.len() });
    }
    let m = f.domain_rank();
    let target = quotient_ring(f, k)?;
    let depth = a.depth();
    if depth == 0 {
        // Depth-0 component: f evaluated at the base point x_0.
        let zero = MultiIndex::zero(k);
        let bindings: BTreeMap<String, Poly> = f
            .vars()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                Ok((v.clone(), Poly::var(&target, &space_var_name(&zero, i, m))?))
            })
            .collect::<Result<_, DiffError>>()?;
        return Ok(f.substitute_into(&target, &bindings)?);
    }
    let q = diffk_sym(f, depth)?;
    let mut args: DiffArgs<Poly> = DiffArgs::new(depth, m);
    for b in MultiIndex::all(k) {
        if !b.is_subset_of(a) {
            continue;
        }
        let short = a.compress(&b);
        let block: Vec<Poly> = (0..m)
            .map(|c| Poly::var(&target, &space_var_name(&b, c, m)))
            .collect::<Result<_, _>>()?;
        args.set_space(&short, block);
        if !b.is_zero() {
            args.set_time(&short, Poly::var(&target, &time_var_name(&b))?);
        }
    }
    q.substitute(&target, &args)
}

/// Depth-graded deformation of the order-`k` quotient: a fresh depth-0
/// variable `t_0` scales every slot by `t_0^depth`, and the result is divided
/// back by `t_0^k`. Setting `t_0 = 1` recovers the undeformed quotient.
pub fn q_deform(f: &PolyMap, k: usize) -> Result<QuotientMap, DiffError> {
    q_deform_bounded(f, k, DEFAULT_MAX_ORDER)
}

pub fn q_deform_bounded(
    f: &PolyMap,
    k: usize,
    max_order: usize,
) -> Result<QuotientMap, DiffError> {
    let q = diffk_sym_bounded(f, k, max_order)?;
    let m = q.scalar_rank;
    let mut vars = vec!["t_0".to_string()];
    vars.extend(quotient_vars(k, m));
    let target = Ring::polynomial_named(&f.coeff_ring(), vars)?;
    let t0 = Poly::var(&target, "t_0")?;
    let mut bindings = BTreeMap::new();
    for a in MultiIndex::all(k) {
        let scale = t0.pow(a.depth() as u32);
        for c in 0..m {
            let name = space_var_name(&a, c, m);
            bindings.insert(name.clone(), scale.mul(&Poly::var(&target, &name)?));
        }
    }
    for a in MultiIndex::all_nonzero(k) {
        let scale = t0.pow(a.depth() as u32);
        let name = time_var_name(&a);
        bindings.insert(name.clone(), scale.mul(&Poly::var(&target, &name)?));
    }
    let mut components = Vec::new();
    for c in q.map.components() {
        let mut deformed = c.substitute_into(&target, &bindings)?;
        for _ in 0..k {
            deformed = deformed.exact_divide("t_0").ok_or_else(|| {
                DiffError::ExactDivisionFailed(format!(
                    "component {deformed} not divisible by t_0"
                ))
            })?;
        }
        components.push(deformed);
    }
    Ok(QuotientMap { order: k, scalar_rank: m, map: PolyMap::new(&target, components)? })
}

/// Deformation of the extended map: each output of depth `j` is divided back
/// by `t_0^j` (time outputs return to themselves).
pub fn q_deform_extended(f: &PolyMap, k: usize) -> Result<DeltaMap, DiffError> {
    q_deform_extended_bounded(f, k, DEFAULT_MAX_ORDER)
}

pub fn q_deform_extended_bounded(
    f: &PolyMap,
    k: usize,
    max_order: usize,
) -> Result<DeltaMap, DiffError> {
    let d = extendedk_sym_bounded(f, k, max_order)?;
    let m = d.scalar_rank;
    let n = d.codomain_rank;
    let mut vars = vec!["t_0".to_string()];
    vars.extend(quotient_vars(k, m));
    let target = Ring::polynomial_named(&f.coeff_ring(), vars)?;
    let t0 = Poly::var(&target, "t_0")?;
    let mut bindings = BTreeMap::new();
    for a in MultiIndex::all(k) {
        let scale = t0.pow(a.depth() as u32);
        for c in 0..m {
            let name = space_var_name(&a, c, m);
            bindings.insert(name.clone(), scale.mul(&Poly::var(&target, &name)?));
        }
    }
    for a in MultiIndex::all_nonzero(k) {
        let scale = t0.pow(a.depth() as u32);
        let name = time_var_name(&a);
        bindings.insert(name.clone(), scale.mul(&Poly::var(&target, &name)?));
    }
    let mut components = Vec::new();
    let mut depths = Vec::new();
    for a in MultiIndex::all(k) {
        for _ in 0..n {
            depths.push(a.depth());
        }
    }
    for a in MultiIndex::all_nonzero(k) {
        depths.push(a.depth());
    }
    for (c, depth) in d.map.components().iter().zip(depths) {
        let mut deformed = c.substitute_into(&target, &bindings)?;
        for _ in 0..depth {
            deformed = deformed.exact_divide("t_0").ok_or_else(|| {
                DiffError::ExactDivisionFailed(format!(
                    "component {deformed} not divisible by t_0"
                ))
            })?;
        }
        components.push(deformed);
    }
    Ok(DeltaMap {
        order: k,
        scalar_rank: m,
        codomain_rank: n,
        map: PolyMap::new(&target, components)?,
    })
}

/// Barycentric first-order quotient of a black-box map:
/// `(f(s x + (1-s) y) - f(t x + (1-t) y)) * (s - t)^{-1}`.
pub fn bary_diff1_eval(
    f: &dyn EvalMap,
    x: &[RingElement],
    y: &[RingElement],
    s: &RingElement,
    t: &RingElement,
) -> Result<Vec<RingElement>, DiffError> {
    let m = f.eval_domain_rank();
    if x.len() != m || y.len() != m {
        return Err(DiffError::ArityMismatch { expected: m, got: x.len().max(y.len()) });
    }
    let denom = (s - t).invert().ok_or(DiffError::NonInvertibleTime)?;
    let at = |w: &RingElement| -> Result<Vec<RingElement>, DiffError> {
        let point: Vec<RingElement> = x
            .iter()
            .zip(y)
            .map(|(xi, yi)| &(w * xi) + &(yi - &(w * yi)))
            .collect();
        Ok(f.eval(&point)?)
    };
    let fs = at(s)?;
    let ft = at(t)?;
    Ok(fs.iter().zip(&ft).map(|(a, b)| &(a - b) * &denom).collect())
}

/// Symbolic barycentric quotient of a polynomial map, defined on the diagonal
/// as well: variables `(x, y, s, t)` of rank `2m + 2`.
pub fn bary_diff1_sym(f: &PolyMap) -> Result<PolyMap, DiffError> {
    let m = f.domain_rank();
    let mut vars = Vec::new();
    for c in 0..m {
        vars.push(if m == 1 { "x".to_string() } else { format!("x_{c}") });
    }
    for c in 0..m {
        vars.push(if m == 1 { "y".to_string() } else { format!("y_{c}") });
    }
    vars.push("s".to_string());
    vars.push("t".to_string());
    let target = Ring::polynomial_named(&f.coeff_ring(), vars.clone())?;
    let at = |w: &Poly| -> Result<BTreeMap<String, Poly>, DiffError> {
        let mut bindings = BTreeMap::new();
        for (i, v) in f.vars().iter().enumerate() {
            let x = Poly::var(&target, &vars[i])?;
            let y = Poly::var(&target, &vars[m + i])?;
            // w x + (1 - w) y
            bindings.insert(v.clone(), w.mul(&x).add(&y).sub(&w.mul(&y)));
        }
        Ok(bindings)
    };
    let s = Poly::var(&target, "s")?;
    let t = Poly::var(&target, "t")?;
    let upper = at(&s)?;
    let lower = at(&t)?;
    let components = f
        .components()
        .iter()
        .map(|c| {
            let num = c
                .substitute_into(&target, &upper)?
                .sub(&c.substitute_into(&target, &lower)?);
            num.exact_divide_diff("s", "t").ok_or_else(|| {
                DiffError::ExactDivisionFailed("barycentric numerator not divisible".into())
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMap::new(&target, components)?)
}

/// Nested black-box evaluation of the order-`k` quotient on the regular set
/// (all times invertible).
pub fn diffk_eval(
    f: &dyn EvalMap,
    args: &DiffArgs<RingElement>,
) -> Result<Vec<RingElement>, DiffError> {
    let k = args.order;
    if k == 0 {
        let zero = MultiIndex::zero(0);
        let x = args.space.get(&zero).ok_or(DiffError::IndexLength { expected: 0, got: 0 })?;
        return Ok(f.eval(x)?);
    }
    // Split into the prefix-0 block (base point), prefix-1 block
    // (perturbation) and the fresh time, then take one plain quotient.
    let strip = |with_bit: bool| -> DiffArgs<RingElement> {
        let mut inner = DiffArgs::new(k - 1, args.scalar_rank);
        for (a, v) in &args.space {
            if a.bits()[0] == with_bit {
                inner.space.insert(MultiIndex::new(a.bits()[1..].to_vec()), v.clone());
            }
        }
        for (a, v) in &args.time {
            let rest = MultiIndex::new(a.bits()[1..].to_vec());
            if a.bits()[0] == with_bit && !(with_bit && rest.is_zero()) {
                inner.time.insert(rest, v.clone());
            }
        }
        inner
    };
    let base = strip(false);
    let pert = strip(true);
    let new_time = {
        let mut bits = vec![false; k];
        bits[0] = true;
        MultiIndex::new(bits)
    };
    let t = args.time.get(&new_time).ok_or(DiffError::IndexLength { expected: k, got: 0 })?;
    let t_inv = t.invert().ok_or(DiffError::NonInvertibleTime)?;
    // g(base + t * pert)
    let mut shifted = DiffArgs::new(k - 1, args.scalar_rank);
    for (a, v) in &base.space {
        let p = pert.space.get(a).expect("blocks share index sets");
        shifted.space.insert(
            a.clone(),
            v.iter().zip(p).map(|(b, q)| b + &(t * q)).collect(),
        );
    }
    for (a, v) in &base.time {
        let p = pert.time.get(a).expect("blocks share index sets");
        shifted.time.insert(a.clone(), v + &(t * p));
    }
    let upper = diffk_eval(f, &shifted)?;
    let lower = diffk_eval(f, &base)?;
    Ok(upper.iter().zip(&lower).map(|(a, b)| &(a - b) * &t_inv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::PolyMap;
    use crate::rings::Ring;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn square_map(ring: &Ring) -> PolyMap {
        let r = Ring::polynomial(ring, &["x0"]).unwrap();
        PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(2)]).unwrap()
    }

    fn cube_map(ring: &Ring) -> PolyMap {
        let r = Ring::polynomial(ring, &["x0"]).unwrap();
        PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(3)]).unwrap()
    }

    fn idx(s: &str) -> MultiIndex {
        MultiIndex::from_str_bits(s).unwrap()
    }

    #[test]
    fn multi_index_order_and_depth() {
        let all = MultiIndex::all(2);
        let rendered: Vec<String> = all.iter().map(|a| a.to_string()).collect();
        assert_eq!(rendered, vec!["00", "01", "10", "11"]);
        assert_eq!(idx("1011").depth(), 3);
        assert!(idx("01").is_subset_of(&idx("11")));
        assert!(!idx("10").is_subset_of(&idx("01")));
        assert_eq!(idx("011").compress(&idx("001")).to_string(), "01");
        assert_eq!(idx("011").scatter(&idx("01")).to_string(), "001");
    }

    #[test]
    fn diff1_eval_identity_and_constant() {
        let r = Ring::polynomial(&q(), &["x0", "x1"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let x = vec![q().from_i64(4), q().from_i64(-1)];
        let v = vec![q().from_i64(2), q().from_i64(3)];
        let out = diff1_eval(&id, &x, &v, &q().from_i64(7)).unwrap();
        assert_eq!(out, v);
        let constant =
            PolyMap::new(&r, vec![Poly::from_i64(&r, 11).unwrap()]).unwrap();
        let out = diff1_eval(&constant, &x, &v, &q().from_i64(3)).unwrap();
        assert!(out[0].is_zero());
    }

    #[test]
    fn diff1_eval_square_at_ones() {
        let f = square_map(&q());
        let out = diff1_eval(
            &f,
            &[q().one()],
            &[q().one()],
            &q().one(),
        )
        .unwrap();
        assert_eq!(out, vec![q().from_i64(3)]);
        let err = diff1_eval(&f, &[q().one()], &[q().one()], &q().zero());
        assert_eq!(err.unwrap_err(), DiffError::NonInvertibleTime);
    }

    #[test]
    fn diff1_sym_of_square() {
        let f = square_map(&q());
        let quot = diff1_sym(&f).unwrap();
        let ring = quot.map.ring();
        let x = Poly::var(ring, "x_0").unwrap();
        let v = Poly::var(ring, "x_1").unwrap();
        let t = Poly::var(ring, "t_1").unwrap();
        let expected = x.mul(&v).scale(&q().from_i64(2)).add(&t.mul(&v.pow(2)));
        assert_eq!(quot.map.components()[0], expected);
        // Multiply-back oracle: quot * t = f(x + t v) - f(x).
        let recovered = quot.map.components()[0].mul(&t);
        let shifted = x.add(&t.mul(&v)).pow(2).sub(&x.pow(2));
        assert_eq!(recovered, shifted);
    }

    #[test]
    fn diff1_sym_identity_is_projection() {
        let r = Ring::polynomial(&q(), &["x0", "x1"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let quot = diff1_sym(&id).unwrap();
        let ring = quot.map.ring();
        for (i, c) in quot.map.components().iter().enumerate() {
            assert_eq!(*c, Poly::var(ring, &format!("x_1_{i}")).unwrap());
        }
    }

    #[test]
    fn diff1_sym_char_two_drops_linear_term() {
        let z2 = Ring::integers_mod(2).unwrap();
        let f = square_map(&z2);
        let quot = diff1_sym(&f).unwrap();
        let ring = quot.map.ring();
        let v = Poly::var(ring, "x_1").unwrap();
        let t = Poly::var(ring, "t_1").unwrap();
        assert_eq!(quot.map.components()[0], t.mul(&v.pow(2)));
    }

    #[test]
    fn differential_and_tangent() {
        let f = square_map(&q());
        let df = differential(&f).unwrap();
        let ring = df.ring();
        let x = Poly::var(ring, "x_0").unwrap();
        let v = Poly::var(ring, "x_1").unwrap();
        assert_eq!(df.components()[0], x.mul(&v).scale(&q().from_i64(2)));

        let r = Ring::polynomial(&q(), &["x0", "x1"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let tid = tangent(&id).unwrap();
        assert_eq!(tid, PolyMap::identity(tid.ring()).unwrap());

        let z2 = Ring::integers_mod(2).unwrap();
        let df2 = differential(&square_map(&z2)).unwrap();
        assert!(df2.components()[0].is_zero());
    }

    #[test]
    fn extended1_shapes() {
        let f = square_map(&q());
        let d = extended1(&f).unwrap();
        let ring = d.map.ring();
        let x = Poly::var(ring, "x_0").unwrap();
        let v = Poly::var(ring, "x_1").unwrap();
        let t = Poly::var(ring, "t_1").unwrap();
        assert_eq!(d.map.components().len(), 3);
        assert_eq!(d.map.components()[0], x.pow(2));
        assert_eq!(
            d.map.components()[1],
            x.mul(&v).scale(&q().from_i64(2)).add(&t.mul(&v.pow(2)))
        );
        assert_eq!(d.map.components()[2], t);

        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let did = extended1(&id).unwrap();
        assert_eq!(did.map, PolyMap::identity(did.map.ring()).unwrap());

        let constant = PolyMap::new(&r, vec![Poly::from_i64(&r, 5).unwrap()]).unwrap();
        let dc = extended1(&constant).unwrap();
        assert_eq!(dc.map.components()[0], Poly::from_i64(dc.map.ring(), 5).unwrap());
        assert!(dc.map.components()[1].is_zero());
    }

    #[test]
    fn extendedk_identity_is_identity_up_to_order_three() {
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        for k in 1..=3 {
            let d = extendedk_sym(&id, k).unwrap();
            assert_eq!(d.map, PolyMap::identity(d.map.ring()).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn seven_components_of_second_extended_map() {
        let f = cube_map(&q());
        let d = extendedk_sym(&f, 2).unwrap();
        let ring = d.map.ring();
        // Depth-0 component is f at the base point.
        let x00 = Poly::var(ring, "x_00").unwrap();
        assert_eq!(d.space_component(&idx("00")).unwrap()[0], x00.pow(3));
        // Depth-1 components are first-order quotients in the sub-arguments.
        let quot = diff1_sym(&f).unwrap();
        for (a, xa, ta) in [("01", "x_01", "t_01"), ("10", "x_10", "t_10")] {
            let mut bindings = BTreeMap::new();
            bindings.insert("x_0".to_string(), x00.clone());
            bindings.insert("x_1".to_string(), Poly::var(ring, xa).unwrap());
            bindings.insert("t_1".to_string(), Poly::var(ring, ta).unwrap());
            let expected = quot.map.components()[0]
                .substitute_into(ring, &bindings)
                .unwrap();
            assert_eq!(d.space_component(&idx(a)).unwrap()[0], expected, "a = {a}");
        }
        // Maximal depth equals the plain second-order quotient.
        let f2 = diffk_sym(&f, 2).unwrap();
        assert_eq!(d.space_component(&idx("11")).unwrap()[0], f2.map.components()[0]);
        // Times pass through.
        for a in ["01", "10", "11"] {
            assert_eq!(
                *d.time_component(&idx(a)).unwrap(),
                Poly::var(ring, &format!("t_{a}")).unwrap()
            );
        }
    }

    /// The displayed closed form of the second-order quotient, evaluated
    /// directly with ring arithmetic.
    fn closed_form_f2(
        f: &PolyMap,
        x00: &RingElement,
        x01: &RingElement,
        x10: &RingElement,
        x11: &RingElement,
        t01: &RingElement,
        t10: &RingElement,
        t11: &RingElement,
    ) -> RingElement {
        let ring = f.coeff_ring();
        let inner_time = t01 + &(t11 * t10);
        let shift = x01 + &(t10 * x11);
        let arg1 = &(x00 + &(t10 * x10)) + &(&inner_time * &shift);
        let arg2 = x00 + &(t10 * x10);
        let arg3 = x00 + &(t01 * x01);
        let f1 = f.evaluate(&[arg1]).unwrap().remove(0);
        let f2 = f.evaluate(&[arg2]).unwrap().remove(0);
        let f3 = f.evaluate(&[arg3]).unwrap().remove(0);
        let f4 = f.evaluate(&[x00.clone()]).unwrap().remove(0);
        let d1 = (&(t10 * &inner_time)).invert().unwrap();
        let d2 = (&(t01 * t10)).invert().unwrap();
        let _ = ring;
        &(&(&f1 - &f2) * &d1) - &(&(&f3 - &f4) * &d2)
    }

    #[test]
    fn second_order_quotient_matches_closed_form() {
        let f = cube_map(&q());
        let quot = diffk_sym(&f, 2).unwrap();
        let vals = [
            (1i64, 2, 3, 5, 1, 2, 7),
            (-2, 1, 4, 0, 3, 1, 2),
            (0, 1, 1, 1, 2, 5, -1),
        ];
        for (x00, x01, x10, x11, t01, t10, t11) in vals {
            let e = |n: i64| q().from_i64(n);
            let mut args = DiffArgs::new(2, 1);
            args.set_space(&idx("00"), vec![e(x00)]);
            args.set_space(&idx("01"), vec![e(x01)]);
            args.set_space(&idx("10"), vec![e(x10)]);
            args.set_space(&idx("11"), vec![e(x11)]);
            args.set_time(&idx("01"), e(t01));
            args.set_time(&idx("10"), e(t10));
            args.set_time(&idx("11"), e(t11));
            let by_iteration = quot.eval(&args).unwrap().remove(0);
            let by_formula = closed_form_f2(
                &f,
                &e(x00),
                &e(x01),
                &e(x10),
                &e(x11),
                &e(t01),
                &e(t10),
                &e(t11),
            );
            assert_eq!(by_iteration, by_formula);
        }
    }

    #[test]
    fn component_formula_examples() {
        let f = cube_map(&q());
        // Depth 0: the base value.
        let c0 = component_of_delta(&f, 2, &idx("00")).unwrap();
        let x00 = Poly::var(c0.ring(), "x_00").unwrap();
        assert_eq!(c0.components()[0], x00.pow(3));
        // Maximal depth: the order-k quotient itself.
        let cmax = component_of_delta(&f, 2, &idx("11")).unwrap();
        assert_eq!(cmax.components()[0], diffk_sym(&f, 2).unwrap().map.components()[0]);
        // Every component matches the extended map, k <= 3.
        for k in 1..=3 {
            let d = extendedk_sym(&f, k).unwrap();
            for a in MultiIndex::all(k) {
                let direct = component_of_delta(&f, k, &a).unwrap();
                assert_eq!(
                    direct.components()[0],
                    d.space_component(&a).unwrap()[0],
                    "k = {k}, a = {a}"
                );
            }
        }
    }

    #[test]
    fn surprising_relation_for_cube() {
        // f^(2)((x,v,0),(v,0,0),0) = 2 f^(2)((x,v,0),(0,0,1),0).
        let f = cube_map(&q());
        let quot = diffk_sym(&f, 2).unwrap();
        let target = Ring::polynomial(&q(), &["x", "v"]).unwrap();
        let x = Poly::var(&target, "x").unwrap();
        let v = Poly::var(&target, "v").unwrap();
        let zero = Poly::zero(&target).unwrap();
        let one = Poly::one(&target).unwrap();

        let mut lhs_args = DiffArgs::new(2, 1);
        lhs_args.set_space(&idx("00"), vec![x.clone()]);
        lhs_args.set_space(&idx("01"), vec![v.clone()]);
        lhs_args.set_space(&idx("10"), vec![v.clone()]);
        lhs_args.set_space(&idx("11"), vec![zero.clone()]);
        lhs_args.set_time(&idx("01"), zero.clone());
        lhs_args.set_time(&idx("10"), zero.clone());
        lhs_args.set_time(&idx("11"), zero.clone());
        let lhs = quot.substitute(&target, &lhs_args).unwrap();

        let mut rhs_args = DiffArgs::new(2, 1);
        rhs_args.set_space(&idx("00"), vec![x.clone()]);
        rhs_args.set_space(&idx("01"), vec![v.clone()]);
        rhs_args.set_space(&idx("10"), vec![zero.clone()]);
        rhs_args.set_space(&idx("11"), vec![zero.clone()]);
        rhs_args.set_time(&idx("01"), zero.clone());
        rhs_args.set_time(&idx("10"), zero.clone());
        rhs_args.set_time(&idx("11"), one);
        let rhs = quot.substitute(&target, &rhs_args).unwrap();

        let doubled = rhs.components()[0].scale(&q().from_i64(2));
        assert_eq!(lhs.components()[0], doubled);
        // For the cube the sides are 6 x v^2 and 3 x v^2.
        assert_eq!(
            lhs.components()[0],
            x.mul(&v.pow(2)).scale(&q().from_i64(6))
        );
        assert_eq!(
            rhs.components()[0],
            x.mul(&v.pow(2)).scale(&q().from_i64(3))
        );
    }

    #[test]
    fn qdeform_examples() {
        let f = square_map(&q());
        let deformed = q_deform(&f, 1).unwrap();
        let ring = deformed.map.ring();
        let x = Poly::var(ring, "x_0").unwrap();
        let v = Poly::var(ring, "x_1").unwrap();
        let t = Poly::var(ring, "t_1").unwrap();
        let t0 = Poly::var(ring, "t_0").unwrap();
        // 2 x v + t_0^2 t v^2
        let expected = x
            .mul(&v)
            .scale(&q().from_i64(2))
            .add(&t0.pow(2).mul(&t).mul(&v.pow(2)));
        assert_eq!(deformed.map.components()[0], expected);

        // t_0 = 1 recovers the plain quotient.
        let plain = diffk_sym(&f, 1).unwrap();
        let mut bind = BTreeMap::new();
        bind.insert("t_0".to_string(), Poly::one(plain.map.ring()).unwrap());
        let collapsed = deformed.map.components()[0]
            .substitute_into(plain.map.ring(), &bind)
            .unwrap();
        assert_eq!(collapsed, plain.map.components()[0]);

        // The identity deforms to itself.
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let did = q_deform(&id, 2).unwrap();
        let expected_var = Poly::var(did.map.ring(), "x_11").unwrap();
        assert_eq!(did.map.components()[0], expected_var);
    }

    #[test]
    fn barycentric_quotient() {
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let b = bary_diff1_sym(&id).unwrap();
        let ring = b.ring();
        let expected = Poly::var(ring, "x")
            .unwrap()
            .sub(&Poly::var(ring, "y").unwrap());
        assert_eq!(b.components()[0], expected);

        let constant = PolyMap::new(&r, vec![Poly::from_i64(&r, 9).unwrap()]).unwrap();
        assert!(bary_diff1_sym(&constant).unwrap().components()[0].is_zero());

        // f(u) = u^2 at x = 1, y = 0 gives s + t, the divided difference of
        // the square curve.
        let f = square_map(&q());
        let b = bary_diff1_sym(&f).unwrap();
        let ring = b.ring();
        let mut bindings = BTreeMap::new();
        bindings.insert("x".to_string(), Poly::one(ring).unwrap());
        bindings.insert("y".to_string(), Poly::zero(ring).unwrap());
        let restricted = b.components()[0].substitute(&bindings).unwrap();
        let s = Poly::var(ring, "s").unwrap();
        let t = Poly::var(ring, "t").unwrap();
        assert_eq!(restricted, s.add(&t));

        // Evaluation agrees wherever s - t is invertible.
        let vals = bary_diff1_eval(
            &f,
            &[q().from_i64(1)],
            &[q().from_i64(0)],
            &q().from_i64(3),
            &q().from_i64(5),
        )
        .unwrap();
        assert_eq!(vals, vec![q().from_i64(8)]);
    }

    #[test]
    fn nested_blackbox_agrees_with_symbolic_on_regular_set() {
        let f = cube_map(&q());
        let quot = diffk_sym(&f, 2).unwrap();
        let e = |n: i64| q().from_i64(n);
        let mut args = DiffArgs::new(2, 1);
        args.set_space(&idx("00"), vec![e(2)]);
        args.set_space(&idx("01"), vec![e(-1)]);
        args.set_space(&idx("10"), vec![e(3)]);
        args.set_space(&idx("11"), vec![e(1)]);
        args.set_time(&idx("01"), e(2));
        args.set_time(&idx("10"), e(3));
        args.set_time(&idx("11"), e(5));
        let symbolic = quot.eval(&args).unwrap();
        let nested = diffk_eval(&f, &args).unwrap();
        assert_eq!(symbolic, nested);
    }

    #[test]
    fn order_guard() {
        let f = square_map(&q());
        assert!(matches!(diffk_sym(&f, 0), Err(DiffError::OrderZero)));
        assert!(matches!(
            diffk_sym(&f, DEFAULT_MAX_ORDER + 1),
            Err(DiffError::OrderTooLarge(_, _))
        ));
    }
}
