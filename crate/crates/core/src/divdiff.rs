//! Divided differences of curves and the Taylor machinery built on them.
//!
//! For a curve `f: K -> K^n` the divided differences are defined by the
//! recursion anchored at `(f(r) - f(s)) / (r - s)`; the explicit symmetric
//! formula and the polynomial extension to coinciding points are provided as
//! independent routes. Taylor coefficients of `f(x + t h)` are computed both
//! directly (binomial expansion) and through difference-quotient slopes, which
//! is what keeps the expansion exact in positive characteristic.
//!
//! One normalization note, resolved by computation and pinned by tests: on the
//! full diagonal the divided difference satisfies
//! `k! * f^<k>(t, ..., t) = f^(k)(t)`, i.e. the diagonal value is the `k`-th
//! derivative divided by `k!`. The same normalization makes the curve Taylor
//! coefficient `a_k(x, h)` equal to `f^<k>(x, ..., x) h^k` on the nose.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diffquot::{diffk_sym, differential, space_var_name, time_var_name, DiffError, MultiIndex};
use crate::polymap::{EvalMap, Poly, PolyError, PolyMap};
use crate::rings::{Ring, RingElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivDiffError {
    #[error("denominator {0} - {1} is not invertible")]
    NonInvertibleDenominator(String, String),
    #[error("a curve must have domain rank 1, got {0}")]
    NotACurve(usize),
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("order must be at least 1")]
    OrderZero,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Ring(#[from] crate::rings::RingError),
}

fn check_curve(f: &dyn EvalMap) -> Result<(), DivDiffError> {
    if f.eval_domain_rank() != 1 {
        return Err(DivDiffError::NotACurve(f.eval_domain_rank()));
    }
    Ok(())
}

/// Divided difference by the two-sided recursion. The order is
/// `points.len() - 1`; only the denominators the recursion actually uses
/// (first minus last at every level) need to be invertible.
pub fn divdiff_rec(
    f: &dyn EvalMap,
    points: &[RingElement],
) -> Result<Vec<RingElement>, DivDiffError> {
    check_curve(f)?;
    if points.is_empty() {
        return Err(DivDiffError::TooFewPoints(0));
    }
    if points.len() == 1 {
        return Ok(f.eval(&[points[0].clone()])?);
    }
    let left = divdiff_rec(f, &points[..points.len() - 1])?;
    let right = divdiff_rec(f, &points[1..])?;
    let first = &points[0];
    let last = &points[points.len() - 1];
    let denom = (first - last).invert().ok_or_else(|| {
        DivDiffError::NonInvertibleDenominator(first.to_string(), last.to_string())
    })?;
    Ok(left
        .iter()
        .zip(&right)
        .map(|(a, b)| &(a - b) * &denom)
        .collect())
}

/// Divided difference by the explicit symmetric formula
/// `sum_j f(t_j) prod_{i != j} (t_j - t_i)^{-1}`; needs all pairwise
/// differences invertible.
pub fn divdiff_explicit(
    f: &dyn EvalMap,
    points: &[RingElement],
) -> Result<Vec<RingElement>, DivDiffError> {
    check_curve(f)?;
    if points.len() < 2 {
        return Err(DivDiffError::TooFewPoints(points.len()));
    }
    let ring = f.eval_ring();
    let n = f.eval_codomain_rank();
    let mut acc = vec![ring.zero(); n];
    for (j, tj) in points.iter().enumerate() {
        let mut weight = ring.one();
        for (i, ti) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let inv = (tj - ti).invert().ok_or_else(|| {
                DivDiffError::NonInvertibleDenominator(tj.to_string(), ti.to_string())
            })?;
            weight = &weight * &inv;
        }
        let val = f.eval(std::slice::from_ref(tj))?;
        for (a, b) in acc.iter_mut().zip(&val) {
            *a = &*a + &(b * &weight);
        }
    }
    Ok(acc)
}

/// The variable names of the order-`k` symbolic divided difference.
pub fn divdiff_vars(k: usize) -> Vec<String> {
    (0..=k).map(|i| format!("x{i}")).collect()
}

/// The polynomial extension of the order-`k` divided difference of a
/// polynomial curve: a map in the `k + 1` variables `x0 .. xk`, defined on
/// all diagonals. Agrees with [`divdiff_rec`] wherever the latter is defined.
pub fn divdiff_sym(f: &PolyMap, k: usize) -> Result<PolyMap, DivDiffError> {
    check_curve(f)?;
    if k == 0 {
        return Err(DivDiffError::OrderZero);
    }
    let target = Ring::polynomial_named(
        &f.coeff_ring(),
        divdiff_vars(k),
    )?;
    // D_0 = f(x0).
    let mut bindings = BTreeMap::new();
    bindings.insert(f.vars()[0].clone(), Poly::var(&target, "x0")?);
    let mut current: Vec<Poly> = f
        .components()
        .iter()
        .map(|c| c.substitute_into(&target, &bindings))
        .collect::<Result<_, _>>()?;
    for j in 1..=k {
        // Shift x_i -> x_{i+1} to reuse the previous level on the tail points.
        let mut shift = BTreeMap::new();
        for i in 0..j {
            shift.insert(format!("x{i}"), Poly::var(&target, &format!("x{}", i + 1))?);
        }
        let last = format!("x{j}");
        current = current
            .into_iter()
            .map(|d| {
                let shifted = d.substitute(&shift)?;
                let num = d.sub(&shifted);
                num.exact_divide_diff("x0", &last).ok_or_else(|| {
                    DivDiffError::NonInvertibleDenominator("x0".into(), last.clone())
                })
            })
            .collect::<Result<_, _>>()?;
    }
    Ok(PolyMap::new(&target, current)?)
}

/// Restricts a symbolic divided difference to the full diagonal
/// `x0 = ... = xk = t`, returning a curve in `t`.
pub fn diagonal(dd: &PolyMap) -> Result<PolyMap, DivDiffError> {
    let target = Ring::polynomial(&dd.coeff_ring(), &["t"])?;
    let t = Poly::var(&target, "t")?;
    let bindings: BTreeMap<String, Poly> = dd
        .vars()
        .iter()
        .map(|v| (v.clone(), t.clone()))
        .collect();
    Ok(dd.substitute_into(&target, &bindings)?)
}

/// `k`-fold formal derivative of a polynomial curve, in its own variable.
pub fn formal_derivative(f: &PolyMap, k: usize) -> Result<PolyMap, DivDiffError> {
    check_curve(f)?;
    let ring = f.ring().clone();
    let var = f.vars()[0].clone();
    let coeff = f.coeff_ring();
    let mut components = f.components().to_vec();
    for _ in 0..k {
        components = components
            .iter()
            .map(|c| {
                let mut out = Poly::zero(&ring)?;
                for (e, part) in c.coefficients_in_var(&var)? {
                    if e == 0 {
                        continue;
                    }
                    let scaled = part.scale(&coeff.from_i64(e as i64));
                    let monomial = Poly::var(&ring, &var)?.pow(e - 1);
                    out = out.add(&scaled.mul(&monomial));
                }
                Ok::<Poly, DivDiffError>(out)
            })
            .collect::<Result<_, _>>()?;
    }
    Ok(PolyMap::new(&ring, components)?)
}

/// Checks the diagonal identity `k! * f^<k>(t, ..., t) = f^(k)(t)` for one
/// curve, returning both sides.
pub fn diagonal_identity_sides(
    f: &PolyMap,
    k: usize,
) -> Result<(PolyMap, PolyMap), DivDiffError> {
    let dd = divdiff_sym(f, k)?;
    let diag = diagonal(&dd)?;
    let coeff = f.coeff_ring();
    let mut factorial = coeff.one();
    for i in 1..=k {
        factorial = &factorial * &coeff.from_i64(i as i64);
    }
    let lhs_components: Vec<Poly> =
        diag.components().iter().map(|c| c.scale(&factorial)).collect();
    let lhs = PolyMap::new(diag.ring(), lhs_components)?;
    let derivative = formal_derivative(f, k)?;
    // Rename the curve variable to the diagonal's `t`.
    let mut bindings = BTreeMap::new();
    bindings.insert(f.vars()[0].clone(), Poly::var(lhs.ring(), "t")?);
    let rhs = derivative.substitute_into(lhs.ring(), &bindings)?;
    Ok((lhs, rhs))
}

/// Coefficient maps `a_1 .. a_k` of the expansion of `f(x + t h)` in powers
/// of `t`, exact in any characteristic. Each map has rank `2m -> n` in the
/// canonical `(x, h)` variables shared with [`differential`].
pub fn taylor_direct(f: &PolyMap, k: usize) -> Result<Vec<PolyMap>, DivDiffError> {
    let m = f.domain_rank();
    let coeff = f.coeff_ring();
    let x_idx = MultiIndex::from_str_bits("0").unwrap();
    let h_idx = MultiIndex::from_str_bits("1").unwrap();
    let mut big_vars = Vec::new();
    for c in 0..m {
        big_vars.push(space_var_name(&x_idx, c, m));
    }
    for c in 0..m {
        big_vars.push(space_var_name(&h_idx, c, m));
    }
    let small_ring = Ring::polynomial_named(&coeff, big_vars.clone())?;
    big_vars.push("t".to_string());
    let big_ring = Ring::polynomial_named(&coeff, big_vars)?;
    let t = Poly::var(&big_ring, "t")?;
    let mut bindings = BTreeMap::new();
    for (i, v) in f.vars().iter().enumerate() {
        let x = Poly::var(&big_ring, &space_var_name(&x_idx, i, m))?;
        let h = Poly::var(&big_ring, &space_var_name(&h_idx, i, m))?;
        bindings.insert(v.clone(), x.add(&t.mul(&h)));
    }
    let expanded = f.substitute_into(&big_ring, &bindings)?;
    let mut out = Vec::with_capacity(k);
    for j in 1..=k {
        let components: Vec<Poly> = expanded
            .components()
            .iter()
            .map(|c| {
                let coeff_poly = c
                    .coefficients_in_var("t")?
                    .into_iter()
                    .find(|(e, _)| *e == j as u32)
                    .map(|(_, p)| p)
                    .unwrap_or(Poly::zero(&big_ring)?);
                Ok::<Poly, DivDiffError>(
                    coeff_poly.substitute_into(&small_ring, &BTreeMap::new())?,
                )
            })
            .collect::<Result<_, _>>()?;
        out.push(PolyMap::new(&small_ring, components)?);
    }
    Ok(out)
}

/// First and second Taylor coefficients computed from difference-quotient
/// slopes: `a_1 = f^[1](x, h, 0)` and `a_2 = f^[2]((x, h, 0), (0, 0, 1), 0)`.
/// Must coincide with [`taylor_direct`].
pub fn slope_coefficients(f: &PolyMap) -> Result<(PolyMap, PolyMap), DivDiffError> {
    let a1 = differential(f)?;
    let target = a1.ring().clone();
    let m = f.domain_rank();
    let q2 = diffk_sym(f, 2)?;
    let mut bindings = BTreeMap::new();
    let x_idx = MultiIndex::from_str_bits("0").unwrap();
    let h_idx = MultiIndex::from_str_bits("1").unwrap();
    for c in 0..m {
        bindings.insert(
            space_var_name(&MultiIndex::from_str_bits("00").unwrap(), c, m),
            Poly::var(&target, &space_var_name(&x_idx, c, m))?,
        );
        bindings.insert(
            space_var_name(&MultiIndex::from_str_bits("01").unwrap(), c, m),
            Poly::var(&target, &space_var_name(&h_idx, c, m))?,
        );
        bindings.insert(
            space_var_name(&MultiIndex::from_str_bits("10").unwrap(), c, m),
            Poly::zero(&target)?,
        );
        bindings.insert(
            space_var_name(&MultiIndex::from_str_bits("11").unwrap(), c, m),
            Poly::zero(&target)?,
        );
    }
    bindings.insert(
        time_var_name(&MultiIndex::from_str_bits("01").unwrap()),
        Poly::zero(&target)?,
    );
    bindings.insert(
        time_var_name(&MultiIndex::from_str_bits("10").unwrap()),
        Poly::zero(&target)?,
    );
    bindings.insert(
        time_var_name(&MultiIndex::from_str_bits("11").unwrap()),
        Poly::one(&target)?,
    );
    let a2 = q2.map.substitute_into(&target, &bindings)?;
    Ok((a1, a2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn monomial_curve(ring: &Ring, d: u32) -> PolyMap {
        let r = Ring::polynomial(ring, &["u"]).unwrap();
        PolyMap::new(&r, vec![Poly::var(&r, "u").unwrap().pow(d)]).unwrap()
    }

    #[test]
    fn first_divided_difference_of_square_is_sum() {
        let f = monomial_curve(&q(), 2);
        let out = divdiff_rec(&f, &[q().from_i64(3), q().from_i64(5)]).unwrap();
        assert_eq!(out, vec![q().from_i64(8)]);
    }

    #[test]
    fn second_divided_difference_of_cube_is_sum_of_points() {
        let f = monomial_curve(&q(), 3);
        let pts = [q().from_i64(2), q().from_i64(-1), q().from_i64(4)];
        let out = divdiff_rec(&f, &pts).unwrap();
        assert_eq!(out, vec![q().from_i64(5)]);
        let explicit = divdiff_explicit(&f, &pts).unwrap();
        assert_eq!(explicit, out);
    }

    #[test]
    fn affine_curve_has_vanishing_second_difference() {
        let r = Ring::polynomial(&q(), &["u"]).unwrap();
        let f = PolyMap::new(
            &r,
            vec![Poly::var(&r, "u")
                .unwrap()
                .scale(&q().from_i64(7))
                .add(&Poly::from_i64(&r, 3).unwrap())],
        )
        .unwrap();
        let pts = [q().from_i64(0), q().from_i64(2), q().from_i64(5)];
        let out = divdiff_rec(&f, &pts).unwrap();
        assert!(out[0].is_zero());
    }

    #[test]
    fn leading_divided_difference_of_monomial_is_one() {
        for k in 1..=5u32 {
            let f = monomial_curve(&q(), k);
            let pts: Vec<_> = (0..=k as i64).map(|i| q().from_i64(i * 2 + 1)).collect();
            let rec = divdiff_rec(&f, &pts).unwrap();
            let exp = divdiff_explicit(&f, &pts).unwrap();
            assert_eq!(rec, vec![q().one()], "k = {k}");
            assert_eq!(exp, vec![q().one()], "k = {k}");
        }
    }

    #[test]
    fn explicit_formula_is_permutation_invariant() {
        let f = monomial_curve(&q(), 4);
        let pts = [
            q().from_i64(1),
            q().from_i64(3),
            q().from_i64(-2),
            q().from_i64(7),
        ];
        let base = divdiff_explicit(&f, &pts).unwrap();
        let permuted = [
            pts[2].clone(),
            pts[0].clone(),
            pts[3].clone(),
            pts[1].clone(),
        ];
        assert_eq!(divdiff_explicit(&f, &permuted).unwrap(), base);
    }

    #[test]
    fn non_invertible_denominator_reported() {
        let z6 = Ring::integers_mod(6).unwrap();
        let f = monomial_curve(&z6, 2);
        // 4 - 1 = 3 is not invertible mod 6.
        let err = divdiff_rec(&f, &[z6.from_i64(4), z6.from_i64(1)]).unwrap_err();
        assert!(matches!(err, DivDiffError::NonInvertibleDenominator(_, _)));
    }

    #[test]
    fn symbolic_divided_difference_of_cube() {
        let f = monomial_curve(&q(), 3);
        let dd = divdiff_sym(&f, 2).unwrap();
        let ring = dd.ring();
        let expected = Poly::var(ring, "x0")
            .unwrap()
            .add(&Poly::var(ring, "x1").unwrap())
            .add(&Poly::var(ring, "x2").unwrap());
        assert_eq!(dd.components()[0], expected);
    }

    #[test]
    fn symbolic_divided_difference_char_two_square() {
        let z2 = Ring::integers_mod(2).unwrap();
        let f = monomial_curve(&z2, 2);
        let d1 = divdiff_sym(&f, 1).unwrap();
        let ring = d1.ring();
        // f^<1>(x0, x1) = x0 + x1.
        let expected = Poly::var(ring, "x0").unwrap().add(&Poly::var(ring, "x1").unwrap());
        assert_eq!(d1.components()[0], expected);
        // f^<2> is identically 1.
        let d2 = divdiff_sym(&f, 2).unwrap();
        assert_eq!(d2.components()[0], Poly::one(d2.ring()).unwrap());
    }

    #[test]
    fn low_degree_curves_vanish() {
        let f = monomial_curve(&q(), 2);
        let dd = divdiff_sym(&f, 3).unwrap();
        assert!(dd.components()[0].is_zero());
    }

    #[test]
    fn symbolic_agrees_with_recursion_at_points() {
        let f = monomial_curve(&q(), 5);
        let dd = divdiff_sym(&f, 3).unwrap();
        let pts = [
            q().from_i64(1),
            q().from_i64(2),
            q().from_i64(-3),
            q().from_i64(5),
        ];
        let symbolic = dd.evaluate(&pts).unwrap();
        let recursive = divdiff_rec(&f, &pts).unwrap();
        assert_eq!(symbolic, recursive);
    }

    #[test]
    fn diagonal_identity_normalization() {
        // k! * f^<k>(t,...,t) = f^(k)(t), checked for monomials.
        for d in 1..=6u32 {
            for k in 1..=d.min(4) as usize {
                let f = monomial_curve(&q(), d);
                let (lhs, rhs) = diagonal_identity_sides(&f, k).unwrap();
                assert_eq!(lhs, rhs, "d = {d}, k = {k}");
            }
        }
        // The stronger-looking variant k! f^(k) = f^<k>(diag) fails already
        // for the cube: 2! * 6t = 12t but the diagonal value is 3t.
        let f = monomial_curve(&q(), 3);
        let dd = divdiff_sym(&f, 2).unwrap();
        let diag = diagonal(&dd).unwrap();
        let t = Poly::var(diag.ring(), "t").unwrap();
        assert_eq!(diag.components()[0], t.scale(&q().from_i64(3)));
    }

    #[test]
    fn taylor_direct_of_cube() {
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(3)]).unwrap();
        let coeffs = taylor_direct(&f, 3).unwrap();
        let ring = coeffs[0].ring();
        let x = Poly::var(ring, "x_0").unwrap();
        let h = Poly::var(ring, "x_1").unwrap();
        assert_eq!(coeffs[0].components()[0], x.pow(2).mul(&h).scale(&q().from_i64(3)));
        assert_eq!(coeffs[1].components()[0], x.mul(&h.pow(2)).scale(&q().from_i64(3)));
        assert_eq!(coeffs[2].components()[0], h.pow(3));
    }

    #[test]
    fn taylor_direct_char_two_square() {
        let z2 = Ring::integers_mod(2).unwrap();
        let r = Ring::polynomial(&z2, &["x0"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(2)]).unwrap();
        let coeffs = taylor_direct(&f, 2).unwrap();
        assert!(coeffs[0].components()[0].is_zero());
        let h = Poly::var(coeffs[1].ring(), "x_1").unwrap();
        assert_eq!(coeffs[1].components()[0], h.pow(2));
    }

    #[test]
    fn taylor_direct_linear_map() {
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let f = PolyMap::new(
            &r,
            vec![Poly::var(&r, "x0")
                .unwrap()
                .scale(&q().from_i64(3))
                .add(&Poly::from_i64(&r, 5).unwrap())],
        )
        .unwrap();
        let coeffs = taylor_direct(&f, 2).unwrap();
        let h = Poly::var(coeffs[0].ring(), "x_1").unwrap();
        assert_eq!(coeffs[0].components()[0], h.scale(&q().from_i64(3)));
        assert!(coeffs[1].components()[0].is_zero());
    }

    #[test]
    fn slopes_match_taylor() {
        for ring in [q(), Ring::integers_mod(2).unwrap(), Ring::integers_mod(3).unwrap()] {
            let r = Ring::polynomial(&ring, &["x0"]).unwrap();
            let x = Poly::var(&r, "x0").unwrap();
            let f = PolyMap::new(
                &r,
                vec![x.pow(3).add(&x.pow(2).scale(&ring.from_i64(2))).add(&x)],
            )
            .unwrap();
            let (a1, a2) = slope_coefficients(&f).unwrap();
            let direct = taylor_direct(&f, 2).unwrap();
            assert_eq!(a1, direct[0]);
            assert_eq!(a2, direct[1]);
        }
    }

    #[test]
    fn identity_curve_slopes() {
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let (a1, a2) = slope_coefficients(&id).unwrap();
        let h = Poly::var(a1.ring(), "x_1").unwrap();
        assert_eq!(a1.components()[0], h);
        assert!(a2.components()[0].is_zero());
    }
}
