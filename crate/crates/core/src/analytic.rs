//! Exact integral verifications over the rationals.
//!
//! Polynomial integrands integrate exactly in rational arithmetic, so the
//! integral representations of difference quotients and divided differences
//! can be checked as polynomial identities: the first-order quotient as an
//! integral of the differential along the segment, and the divided difference
//! as an integral of the `k`-th derivative over the standard simplex. The
//! diagonal normalization pinned in the divided-difference module (the
//! diagonal value is `f^(k)/k!`) is what makes the simplex formula hold with
//! no extra factor.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diffquot::{diff1_sym, differential, space_var_name, DiffError};
use crate::divdiff::{divdiff_sym, divdiff_vars, formal_derivative, DivDiffError};
use crate::polymap::{Poly, PolyError, PolyMap};
use crate::rings::{Ring, RingElement, RingError, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticError {
    #[error("exact integration needs rational coefficients")]
    NonRationalBase,
    #[error("simplex dimension must be at least 1")]
    DimensionZero,
    #[error("a curve must have domain rank 1, got {0}")]
    NotACurve(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Checks that the innermost coefficient ring is the rationals.
fn check_rational_base(ring: &Ring) -> Result<(), AnalyticError> {
    let mut spec = ring.spec().clone();
    loop {
        match spec {
            RingSpec::Rationals => return Ok(()),
            RingSpec::PolynomialRing { base, .. } => spec = *base,
            _ => return Err(AnalyticError::NonRationalBase),
        }
    }
}

/// Divides by a positive integer inside a rationals-based ring.
fn divide_by_int(e: &RingElement, n: u32) -> Result<RingElement, AnalyticError> {
    let ring = e.ring().clone();
    let inv = ring
        .from_i64(n as i64)
        .invert()
        .ok_or(AnalyticError::NonRationalBase)?;
    Ok(e * &inv)
}

/// Coefficientwise antiderivative in one variable: `c s^e -> c s^(e+1)/(e+1)`.
fn antiderivative(p: &Poly, var: &str) -> Result<Poly, AnalyticError> {
    check_rational_base(&p.coeff_ring())?;
    let ring = p.ring().clone();
    let s = Poly::var(&ring, var)?;
    let mut out = Poly::zero(&ring)?;
    for (e, part) in p.coefficients_in_var(var)? {
        let scaled = part.scale(&divide_by_int(&p.coeff_ring().one(), e + 1)?);
        out = out.add(&scaled.mul(&s.pow(e + 1)));
    }
    Ok(out)
}

/// Exact integral over the unit segment in the named variable; remaining
/// variables stay symbolic.
pub fn segment_integral(p: &Poly, var: &str) -> Result<Poly, AnalyticError> {
    let anti = antiderivative(p, var)?;
    let ring = p.ring().clone();
    let mut at_one = BTreeMap::new();
    at_one.insert(var.to_string(), Poly::one(&ring)?);
    let mut at_zero = BTreeMap::new();
    at_zero.insert(var.to_string(), Poly::zero(&ring)?);
    Ok(anti.substitute(&at_one)?.sub(&anti.substitute(&at_zero)?))
}

/// Exact integral over the standard simplex in the named variables
/// (`l_i >= 0`, `sum l_i <= 1`), innermost variable first eliminated.
pub fn simplex_integral(p: &Poly, lambda: &[String]) -> Result<Poly, AnalyticError> {
    if lambda.is_empty() {
        return Err(AnalyticError::DimensionZero);
    }
    let ring = p.ring().clone();
    let mut current = p.clone();
    // Integrate l_k from 0 to 1 - l_1 - ... - l_{k-1}, then recurse.
    for (i, var) in lambda.iter().enumerate().rev() {
        let anti = antiderivative(&current, var)?;
        let mut upper_poly = Poly::one(&ring)?;
        for prev in &lambda[..i] {
            upper_poly = upper_poly.sub(&Poly::var(&ring, prev)?);
        }
        let mut at_upper = BTreeMap::new();
        at_upper.insert(var.clone(), upper_poly);
        let mut at_zero = BTreeMap::new();
        at_zero.insert(var.clone(), Poly::zero(&ring)?);
        current = anti.substitute(&at_upper)?.sub(&anti.substitute(&at_zero)?);
    }
    Ok(current)
}

/// Volume of the standard `k`-simplex computed by exact integration of 1.
pub fn simplex_volume(k: usize) -> Result<RingElement, AnalyticError> {
    let q = Ring::rationals();
    let lambda: Vec<String> = (1..=k).map(|i| format!("l{i}")).collect();
    let ring = Ring::polynomial_named(&q, lambda.clone())?;
    let vol = simplex_integral(&Poly::one(&ring)?, &lambda)?;
    Ok(vol.evaluate(&vec![q.zero(); k])?)
}

/// Report of one polynomial-identity verification; `witness` holds both
/// sides when they differ.
#[derive(Clone, Debug)]
pub struct IntegralReport {
    pub holds: bool,
    pub witness: Option<String>,
}

impl IntegralReport {
    fn compare(lhs: &PolyMap, rhs: &PolyMap, context: &str) -> IntegralReport {
        if lhs == rhs {
            IntegralReport { holds: true, witness: None }
        } else {
            IntegralReport {
                holds: false,
                witness: Some(format!("{context}: lhs = {lhs}, rhs = {rhs}")),
            }
        }
    }
}

/// Verifies `f^[1](x, v, t) = ∫_0^1 df(x + s t v) v ds` as an exact
/// polynomial identity over the rationals.
pub fn check_integral_diff1(f: &PolyMap) -> Result<IntegralReport, AnalyticError> {
    check_rational_base(&f.coeff_ring())?;
    let m = f.domain_rank();
    let quotient = diff1_sym(f)?;
    let target = quotient.map.ring().clone();
    // Integration ring: the quotient variables plus the segment parameter.
    let mut vars: Vec<String> = target.vars().expect("polynomial ring").to_vec();
    vars.push("s".to_string());
    let big = Ring::polynomial_named(&f.coeff_ring(), vars)?;
    let s = Poly::var(&big, "s")?;
    let t = Poly::var(&big, "t_1")?;

    let df = differential(f)?;
    // df's variables are (x, v); bind x -> x + s t v, v -> v.
    let zero_idx = crate::diffquot::MultiIndex::from_str_bits("0").unwrap();
    let one_idx = crate::diffquot::MultiIndex::from_str_bits("1").unwrap();
    let mut bindings = BTreeMap::new();
    for c in 0..m {
        let x = Poly::var(&big, &space_var_name(&zero_idx, c, m))?;
        let v = Poly::var(&big, &space_var_name(&one_idx, c, m))?;
        bindings.insert(
            space_var_name(&zero_idx, c, m),
            x.add(&s.mul(&t).mul(&v)),
        );
    }
    let integrand = df.substitute_into(&big, &bindings)?;
    let integrated: Vec<Poly> = integrand
        .components()
        .iter()
        .map(|c| segment_integral(c, "s"))
        .collect::<Result<_, _>>()?;
    // Drop the spent segment variable.
    let back: Vec<Poly> = integrated
        .iter()
        .map(|c| c.substitute_into(&target, &BTreeMap::new()))
        .collect::<Result<_, _>>()?;
    let rhs = PolyMap::new(&target, back)?;
    Ok(IntegralReport::compare(&quotient.map, &rhs, "segment integral of the differential"))
}

/// Verifies `f^<k>(x0, ..., xk) = ∫_{simplex} f^(k)(x0 + Σ l_i (x_i - x0))`
/// symbolically for a polynomial curve, with the diagonal normalization of
/// the divided-difference module.
pub fn check_simplex_divdiff(f: &PolyMap, k: usize) -> Result<IntegralReport, AnalyticError> {
    if f.domain_rank() != 1 {
        return Err(AnalyticError::NotACurve(f.domain_rank()));
    }
    check_rational_base(&f.coeff_ring())?;
    let dd = divdiff_sym(f, k)?;
    let target = dd.ring().clone();
    let points = divdiff_vars(k);
    let lambda: Vec<String> = (1..=k).map(|i| format!("l{i}")).collect();
    let mut vars = points.clone();
    vars.extend(lambda.iter().cloned());
    let big = Ring::polynomial_named(&f.coeff_ring(), vars)?;

    let derivative = formal_derivative(f, k)?;
    let mut argument = Poly::var(&big, &points[0])?;
    for i in 1..=k {
        let li = Poly::var(&big, &lambda[i - 1])?;
        let xi = Poly::var(&big, &points[i])?;
        let x0 = Poly::var(&big, &points[0])?;
        argument = argument.add(&li.mul(&xi.sub(&x0)));
    }
    let mut bindings = BTreeMap::new();
    bindings.insert(f.vars()[0].clone(), argument);
    let integrand = derivative.substitute_into(&big, &bindings)?;
    let integrated: Vec<Poly> = integrand
        .components()
        .iter()
        .map(|c| simplex_integral(c, &lambda))
        .collect::<Result<_, _>>()?;
    let back: Vec<Poly> = integrated
        .iter()
        .map(|c| c.substitute_into(&target, &BTreeMap::new()))
        .collect::<Result<_, _>>()?;
    let rhs = PolyMap::new(&target, back)?;
    Ok(IntegralReport::compare(&dd, &rhs, "simplex integral of the k-th derivative"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn rat(n: i64, d: i64) -> RingElement {
        &q().from_i64(n) * &q().from_i64(d).invert().unwrap()
    }

    #[test]
    fn segment_integrals() {
        let r = Ring::polynomial(&q(), &["s"]).unwrap();
        let one = Poly::one(&r).unwrap();
        assert_eq!(
            segment_integral(&one, "s").unwrap().evaluate(&[q().zero()]).unwrap(),
            q().one()
        );
        let s2 = Poly::var(&r, "s").unwrap().pow(2);
        assert_eq!(
            segment_integral(&s2, "s").unwrap().evaluate(&[q().zero()]).unwrap(),
            rat(1, 3)
        );
    }

    #[test]
    fn segment_integral_with_parameters() {
        // ∫_0^1 (2x + 2stv) v ds = 2xv + t v^2.
        let r = Ring::polynomial(&q(), &["x", "v", "t", "s"]).unwrap();
        let x = Poly::var(&r, "x").unwrap();
        let v = Poly::var(&r, "v").unwrap();
        let t = Poly::var(&r, "t").unwrap();
        let s = Poly::var(&r, "s").unwrap();
        let integrand = x
            .scale(&q().from_i64(2))
            .add(&s.mul(&t).mul(&v).scale(&q().from_i64(2)))
            .mul(&v);
        let out = segment_integral(&integrand, "s").unwrap();
        let expected = x.mul(&v).scale(&q().from_i64(2)).add(&t.mul(&v.pow(2)));
        assert_eq!(out, expected);
    }

    #[test]
    fn non_rational_base_rejected() {
        let z5 = Ring::integers_mod(5).unwrap();
        let r = Ring::polynomial(&z5, &["s"]).unwrap();
        let err = segment_integral(&Poly::one(&r).unwrap(), "s").unwrap_err();
        assert_eq!(err, AnalyticError::NonRationalBase);
    }

    #[test]
    fn simplex_volumes_are_inverse_factorials() {
        let mut factorial = 1i64;
        for k in 1..=5usize {
            factorial *= k as i64;
            assert_eq!(simplex_volume(k).unwrap(), rat(1, factorial), "k = {k}");
        }
    }

    #[test]
    fn simplex_integral_of_coordinate() {
        // ∫_{Δ2} l1 = 1/6 and ∫_{Δ1} l1 = 1/2.
        let r2 = Ring::polynomial(&q(), &["l1", "l2"]).unwrap();
        let l1 = Poly::var(&r2, "l1").unwrap();
        let out = simplex_integral(&l1, &["l1".into(), "l2".into()]).unwrap();
        assert_eq!(out.evaluate(&[q().zero(), q().zero()]).unwrap(), rat(1, 6));
        let r1 = Ring::polynomial(&q(), &["l1"]).unwrap();
        let l1 = Poly::var(&r1, "l1").unwrap();
        let out = simplex_integral(&l1, &["l1".into()]).unwrap();
        assert_eq!(out.evaluate(&[q().zero()]).unwrap(), rat(1, 2));
    }

    #[test]
    fn integral_form_of_first_quotient() {
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(2)]).unwrap();
        let report = check_integral_diff1(&f).unwrap();
        assert!(report.holds, "{:?}", report.witness);

        // Linear maps: both sides constant in t.
        let lin = PolyMap::new(
            &r,
            vec![Poly::var(&r, "x0")
                .unwrap()
                .scale(&q().from_i64(4))
                .add(&Poly::from_i64(&r, 1).unwrap())],
        )
        .unwrap();
        assert!(check_integral_diff1(&lin).unwrap().holds);

        // A rank-2 map.
        let r2 = Ring::polynomial(&q(), &["x0", "x1"]).unwrap();
        let g = PolyMap::new(
            &r2,
            vec![
                Poly::var(&r2, "x0").unwrap().pow(3).mul(&Poly::var(&r2, "x1").unwrap()),
                Poly::var(&r2, "x1").unwrap().pow(2),
            ],
        )
        .unwrap();
        assert!(check_integral_diff1(&g).unwrap().holds);
    }

    #[test]
    fn simplex_form_of_divided_difference() {
        // Monomials t^d for d <= 6, orders k <= min(d, 4).
        for d in 1..=6u32 {
            for k in 1..=(d.min(4) as usize) {
                let r = Ring::polynomial(&q(), &["u"]).unwrap();
                let f = PolyMap::new(&r, vec![Poly::var(&r, "u").unwrap().pow(d)]).unwrap();
                let report = check_simplex_divdiff(&f, k).unwrap();
                assert!(report.holds, "d = {d}, k = {k}: {:?}", report.witness);
            }
        }
    }

    #[test]
    fn simplex_form_degenerate_cases() {
        let r = Ring::polynomial(&q(), &["u"]).unwrap();
        // Degree below the order: both sides vanish.
        let f = PolyMap::new(&r, vec![Poly::var(&r, "u").unwrap().pow(2)]).unwrap();
        let report = check_simplex_divdiff(&f, 3).unwrap();
        assert!(report.holds);
        // The cube at order 2 gives x0 + x1 + x2 on both sides.
        let f = PolyMap::new(&r, vec![Poly::var(&r, "u").unwrap().pow(3)]).unwrap();
        let dd = divdiff_sym(&f, 2).unwrap();
        let expected = Poly::var(dd.ring(), "x0")
            .unwrap()
            .add(&Poly::var(dd.ring(), "x1").unwrap())
            .add(&Poly::var(dd.ring(), "x2").unwrap());
        assert_eq!(dd.components()[0], expected);
        assert!(check_simplex_divdiff(&f, 2).unwrap().holds);
    }
}
