//! Carnot groups over exact rings.
//!
//! A graded nilpotent Lie algebra `g = g_1 ⊕ ... ⊕ g_c` carries a polynomial
//! group law through the Campbell-Hausdorff series, truncated at the
//! nilpotency class (hard-coded through class 4), and the one-parameter
//! dilations that scale the grade-`i` block by `t^i`. The group-level
//! first-order difference quotient `δ_t^{-1}(f(x)^{-1} * f(x * δ_t v))` is
//! the Carnot analogue of the linear quotient and reduces to it when both
//! algebras are abelian.

use thiserror::Error;

use crate::polymap::{EvalMap, PolyError};
use crate::rings::{Ring, RingElement, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CarnotError {
    #[error("nilpotency class {0} unsupported (maximum 4)")]
    UnsupportedClass(usize),
    #[error("grading must have at least one component")]
    EmptyGrading,
    #[error("bracket table shape mismatch")]
    BracketShape,
    #[error("bracket is not antisymmetric on basis pair ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("bracket of grades {0} and {1} leaves grade {2}")]
    GradingViolated(usize, usize, usize),
    #[error("denominator {0} required by the group law is not invertible")]
    NonInvertibleDenominator(i64),
    #[error("time parameter is not invertible")]
    NonInvertibleTime,
    #[error("vector has wrong dimension: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("element does not belong to the algebra's base ring")]
    WrongRing,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A graded nilpotent Lie algebra with bracket structure constants on the
/// total module; the grading length is the nilpotency class.
#[derive(Clone, Debug)]
pub struct CarnotAlgebra {
    base: Ring,
    grading: Vec<usize>,
    /// `bracket[i][j]` = coordinates of `[e_i, e_j]`.
    bracket: Vec<Vec<Vec<RingElement>>>,
    /// Grade (1-based) of each basis vector.
    grade_of: Vec<usize>,
}

impl CarnotAlgebra {
    /// Validates antisymmetry, the Jacobi identity, and the grading
    /// condition `[g_i, g_j] ⊆ g_{i+j}` on all basis pairs/triples, and the
    /// invertibility of the denominators the group law needs at this class.
    pub fn new(
        base: &Ring,
        grading: Vec<usize>,
        bracket: Vec<Vec<Vec<RingElement>>>,
    ) -> Result<CarnotAlgebra, CarnotError> {
        if grading.is_empty() || grading.contains(&0) {
            return Err(CarnotError::EmptyGrading);
        }
        let class = grading.len();
        if class > 4 {
            return Err(CarnotError::UnsupportedClass(class));
        }
        let dim: usize = grading.iter().sum();
        if bracket.len() != dim
            || bracket.iter().any(|row| row.len() != dim)
            || bracket
                .iter()
                .any(|row| row.iter().any(|v| v.len() != dim))
        {
            return Err(CarnotError::BracketShape);
        }
        for row in &bracket {
            for v in row {
                for c in v {
                    if c.ring() != base {
                        return Err(CarnotError::WrongRing);
                    }
                }
            }
        }
        let mut grade_of = Vec::with_capacity(dim);
        for (g, r) in grading.iter().enumerate() {
            for _ in 0..*r {
                grade_of.push(g + 1);
            }
        }
        let algebra = CarnotAlgebra { base: base.clone(), grading, bracket, grade_of };
        algebra.validate()?;
        Ok(algebra)
    }

    fn validate(&self) -> Result<(), CarnotError> {
        let dim = self.dim();
        // Antisymmetry (including [e_i, e_i] = 0).
        for i in 0..dim {
            for j in i..dim {
                let ij = &self.bracket[i][j];
                let ji = &self.bracket[j][i];
                for (a, b) in ij.iter().zip(ji) {
                    if !(a + b).is_zero() {
                        return Err(CarnotError::NotAntisymmetric(i, j));
                    }
                }
            }
        }
        // Grading: [g_a, g_b] ⊆ g_{a+b} (zero beyond the top grade).
        for i in 0..dim {
            for j in 0..dim {
                let target = self.grade_of[i] + self.grade_of[j];
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() && (target > self.grading.len() || self.grade_of[k] != target)
                    {
                        return Err(CarnotError::GradingViolated(
                            self.grade_of[i],
                            self.grade_of[j],
                            self.grade_of[k],
                        ));
                    }
                }
            }
        }
        // Jacobi on basis triples.
        for i in 0..dim {
            let ei = self.basis(i);
            for j in 0..dim {
                let ej = self.basis(j);
                for k in 0..dim {
                    let ek = self.basis(k);
                    let terms = [
                        self.bracket_vec(&ei, &self.bracket_vec(&ej, &ek)?)?,
                        self.bracket_vec(&ej, &self.bracket_vec(&ek, &ei)?)?,
                        self.bracket_vec(&ek, &self.bracket_vec(&ei, &ej)?)?,
                    ];
                    let total = terms.iter().fold(self.zero_vector(), |acc, t| add(&acc, t));
                    if total.iter().any(|c| !c.is_zero()) {
                        return Err(CarnotError::Jacobi(i, j, k));
                    }
                }
            }
        }
        // Denominators for the truncated group-law series.
        let needed: &[i64] = match self.grading.len() {
            1 => &[],
            2 => &[2],
            3 => &[2, 12],
            _ => &[2, 12, 24],
        };
        for d in needed {
            if self.base.from_i64(*d).invert().is_none() {
                return Err(CarnotError::NonInvertibleDenominator(*d));
            }
        }
        Ok(())
    }

    pub fn base_ring(&self) -> &Ring {
        &self.base
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    pub fn class(&self) -> usize {
        self.grading.len()
    }

    pub fn dim(&self) -> usize {
        self.grade_of.len()
    }

    pub fn zero_vector(&self) -> Vec<RingElement> {
        vec![self.base.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vec<RingElement> {
        let mut v = self.zero_vector();
        v[i] = self.base.one();
        v
    }

    fn check_vec(&self, v: &[RingElement]) -> Result<(), CarnotError> {
        if v.len() != self.dim() {
            return Err(CarnotError::Dimension { expected: self.dim(), got: v.len() });
        }
        for c in v {
            if c.ring() != &self.base {
                return Err(CarnotError::WrongRing);
            }
        }
        Ok(())
    }

    /// The bilinear bracket on coordinate vectors.
    pub fn bracket_vec(
        &self,
        u: &[RingElement],
        w: &[RingElement],
    ) -> Result<Vec<RingElement>, CarnotError> {
        self.check_vec(u)?;
        self.check_vec(w)?;
        let mut out = self.zero_vector();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if wj.is_zero() {
                    continue;
                }
                let scale = ui * wj;
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    out[k] = &out[k] + &(&scale * c);
                }
            }
        }
        Ok(out)
    }

    /// The truncated Campbell-Hausdorff product
    /// `v + w + [v,w]/2 + ([v,[v,w]] + [w,[w,v]])/12 - [w,[v,[v,w]]]/24`;
    /// exact at every class up to 4 because higher terms vanish.
    pub fn bch_product(
        &self,
        v: &[RingElement],
        w: &[RingElement],
    ) -> Result<Vec<RingElement>, CarnotError> {
        self.check_vec(v)?;
        self.check_vec(w)?;
        let mut out = add(v, w);
        if self.class() >= 2 {
            let vw = self.bracket_vec(v, w)?;
            let half = self
                .base
                .from_i64(2)
                .invert()
                .ok_or(CarnotError::NonInvertibleDenominator(2))?;
            out = add(&out, &scale(&vw, &half));
            if self.class() >= 3 {
                let vvw = self.bracket_vec(v, &vw)?;
                let wv = self.bracket_vec(w, v)?;
                let wwv = self.bracket_vec(w, &wv)?;
                let twelfth = self
                    .base
                    .from_i64(12)
                    .invert()
                    .ok_or(CarnotError::NonInvertibleDenominator(12))?;
                out = add(&out, &scale(&add(&vvw, &wwv), &twelfth));
                if self.class() >= 4 {
                    let wvvw = self.bracket_vec(w, &vvw)?;
                    let neg_twenty_fourth = (-self.base.from_i64(24))
                        .invert()
                        .ok_or(CarnotError::NonInvertibleDenominator(24))?;
                    out = add(&out, &scale(&wvvw, &neg_twenty_fourth));
                }
            }
        }
        Ok(out)
    }

    /// Group inverse: `-v` (all bracket terms of `v` with itself vanish).
    pub fn group_inverse(&self, v: &[RingElement]) -> Result<Vec<RingElement>, CarnotError> {
        self.check_vec(v)?;
        Ok(v.iter().map(|c| -c).collect())
    }

    /// The dilation `δ_t`: grade-`i` coordinates scale by `t^i`. The scalar
    /// need not be invertible.
    pub fn dilation(&self, t: &RingElement, v: &[RingElement]) -> Result<Vec<RingElement>, CarnotError> {
        self.check_vec(v)?;
        if t.ring() != &self.base {
            return Err(CarnotError::WrongRing);
        }
        Ok(v.iter()
            .enumerate()
            .map(|(i, c)| c * &t.pow(self.grade_of[i] as u32))
            .collect())
    }

    /// Lifts the algebra to an extension of the base ring (same structure
    /// constants, embedded coefficients). Used for symbolic checks.
    pub fn extend_base(&self, bigger: &Ring) -> Result<CarnotAlgebra, CarnotError> {
        let embed = |c: &RingElement| bigger.embed(c);
        let bracket = self
            .bracket
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(embed).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CarnotAlgebra {
            base: bigger.clone(),
            grading: self.grading.clone(),
            bracket,
            grade_of: self.grade_of.clone(),
        })
    }
}

fn add(a: &[RingElement], b: &[RingElement]) -> Vec<RingElement> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(v: &[RingElement], c: &RingElement) -> Vec<RingElement> {
    v.iter().map(|x| x * c).collect()
}

/// The Heisenberg algebra over a base ring: grading (2, 1) with
/// `[e_0, e_1] = e_2`.
pub fn heisenberg(base: &Ring) -> Result<CarnotAlgebra, CarnotError> {
    let zero = base.zero();
    let one = base.one();
    let z3 = || vec![zero.clone(), zero.clone(), zero.clone()];
    let mut bracket = vec![vec![z3(); 3]; 3];
    bracket[0][1] = vec![zero.clone(), zero.clone(), one.clone()];
    bracket[1][0] = vec![zero.clone(), zero.clone(), -&one];
    CarnotAlgebra::new(base, vec![2, 1], bracket)
}

/// The abelian algebra of the given dimension (class 1).
pub fn abelian(base: &Ring, dim: usize) -> Result<CarnotAlgebra, CarnotError> {
    let zero_vec = vec![base.zero(); dim];
    let bracket = vec![vec![zero_vec; dim]; dim];
    CarnotAlgebra::new(base, vec![dim], bracket)
}

/// The group-level first-order difference quotient
/// `δ_t^{-1}( f(x)^{-1} * f(x * δ_t v) )` for a map between the groups of
/// `source` and `target`; `t` must be invertible.
pub fn pansu_diff1(
    source: &CarnotAlgebra,
    target: &CarnotAlgebra,
    f: &dyn EvalMap,
    x: &[RingElement],
    v: &[RingElement],
    t: &RingElement,
) -> Result<Vec<RingElement>, CarnotError> {
    source.check_vec(x)?;
    source.check_vec(v)?;
    let t_inv = t.invert().ok_or(CarnotError::NonInvertibleTime)?;
    let moved = source.bch_product(x, &source.dilation(t, v)?)?;
    let fx = f.eval(x)?;
    let fmoved = f.eval(&moved)?;
    let diff = target.bch_product(&target.group_inverse(&fx)?, &fmoved)?;
    target.dilation(&t_inv, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::{Poly, PolyMap};

    fn q() -> Ring {
        Ring::rationals()
    }

    fn rat(n: i64, d: i64) -> RingElement {
        &q().from_i64(n) * &q().from_i64(d).invert().unwrap()
    }

    #[test]
    fn abelian_group_law_is_addition() {
        let a = abelian(&q(), 3).unwrap();
        let v = vec![q().from_i64(1), q().from_i64(2), q().from_i64(3)];
        let w = vec![q().from_i64(4), q().from_i64(-1), q().from_i64(0)];
        assert_eq!(a.bch_product(&v, &w).unwrap(), add(&v, &w));
    }

    #[test]
    fn heisenberg_product_of_generators() {
        let h = heisenberg(&q()).unwrap();
        let prod = h.bch_product(&h.basis(0), &h.basis(1)).unwrap();
        assert_eq!(prod, vec![q().one(), q().one(), rat(1, 2)]);
    }

    #[test]
    fn group_inverse_cancels() {
        let h = heisenberg(&q()).unwrap();
        let v = vec![q().from_i64(3), q().from_i64(-2), q().from_i64(5)];
        let inv = h.group_inverse(&v).unwrap();
        let prod = h.bch_product(&v, &inv).unwrap();
        assert!(prod.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn heisenberg_dilation_grades() {
        let h = heisenberg(&q()).unwrap();
        let t = q().from_i64(3);
        let v = vec![q().from_i64(1), q().from_i64(1), q().from_i64(1)];
        assert_eq!(
            h.dilation(&t, &v).unwrap(),
            vec![q().from_i64(3), q().from_i64(3), q().from_i64(9)]
        );
        let id = h.dilation(&q().one(), &v).unwrap();
        assert_eq!(id, v);
    }

    #[test]
    fn dilation_composition_is_multiplicative() {
        let h = heisenberg(&q()).unwrap();
        let s = q().from_i64(2);
        let t = q().from_i64(-3);
        let v = vec![q().from_i64(5), q().from_i64(1), q().from_i64(7)];
        let left = h.dilation(&s, &h.dilation(&t, &v).unwrap()).unwrap();
        let right = h.dilation(&(&s * &t), &v).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn dilation_is_bracket_endomorphism_symbolically() {
        let h = heisenberg(&q()).unwrap();
        let big = Ring::polynomial(&q(), &["t", "u0", "u1", "u2", "w0", "w1", "w2"]).unwrap();
        let lifted = h.extend_base(&big).unwrap();
        let t = big.var("t").unwrap();
        let u: Vec<_> = (0..3).map(|i| big.var(&format!("u{i}")).unwrap()).collect();
        let w: Vec<_> = (0..3).map(|i| big.var(&format!("w{i}")).unwrap()).collect();
        let lhs = lifted
            .bracket_vec(
                &lifted.dilation(&t, &u).unwrap(),
                &lifted.dilation(&t, &w).unwrap(),
            )
            .unwrap();
        let rhs = lifted
            .dilation(&t, &lifted.bracket_vec(&u, &w).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bch_is_associative_symbolically_on_heisenberg() {
        let h = heisenberg(&q()).unwrap();
        let names: Vec<String> = ["a", "b", "c"]
            .iter()
            .flat_map(|p| (0..3).map(move |i| format!("{p}{i}")))
            .collect();
        let big = Ring::polynomial_named(&q(), names.clone()).unwrap();
        let lifted = h.extend_base(&big).unwrap();
        let vec_of = |p: char| -> Vec<RingElement> {
            (0..3).map(|i| big.var(&format!("{p}{i}")).unwrap()).collect()
        };
        let (a, b, c) = (vec_of('a'), vec_of('b'), vec_of('c'));
        let left = lifted
            .bch_product(&lifted.bch_product(&a, &b).unwrap(), &c)
            .unwrap();
        let right = lifted
            .bch_product(&a, &lifted.bch_product(&b, &c).unwrap())
            .unwrap();
        assert_eq!(left, right);
    }

    /// Filiform algebra of the given dimension: `[e_0, e_i] = e_(i+1)` for
    /// `1 <= i < dim - 1`, grading (2, 1, 1, ...).
    fn filiform(base: &Ring, dim: usize) -> CarnotAlgebra {
        let zero = base.zero();
        let one = base.one();
        let zvec = || vec![zero.clone(); dim];
        let mut bracket = vec![vec![zvec(); dim]; dim];
        for i in 1..dim - 1 {
            let mut v = zvec();
            v[i + 1] = one.clone();
            bracket[0][i] = v.clone();
            bracket[i][0] = v.iter().map(|c| -c).collect();
        }
        let mut grading = vec![2];
        grading.extend(std::iter::repeat(1).take(dim - 2));
        CarnotAlgebra::new(base, grading, bracket).unwrap()
    }

    #[test]
    fn class_three_group_law_is_associative_symbolically() {
        let g = filiform(&q(), 4);
        assert_eq!(g.class(), 3);
        let names: Vec<String> = ["a", "b", "c"]
            .iter()
            .flat_map(|p| (0..4).map(move |i| format!("{p}{i}")))
            .collect();
        let big = Ring::polynomial_named(&q(), names).unwrap();
        let lifted = g.extend_base(&big).unwrap();
        let vec_of = |p: char| -> Vec<RingElement> {
            (0..4).map(|i| big.var(&format!("{p}{i}")).unwrap()).collect()
        };
        let (a, b, c) = (vec_of('a'), vec_of('b'), vec_of('c'));
        let left = lifted
            .bch_product(&lifted.bch_product(&a, &b).unwrap(), &c)
            .unwrap();
        let right = lifted
            .bch_product(&a, &lifted.bch_product(&b, &c).unwrap())
            .unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn class_four_group_law_is_associative_numerically() {
        let g = filiform(&q(), 5);
        assert_eq!(g.class(), 4);
        let mut rng = crate::sampling::Rng::new(99);
        for _ in 0..10 {
            let draw = |rng: &mut crate::sampling::Rng| -> Vec<RingElement> {
                (0..5)
                    .map(|_| crate::sampling::random_element(rng, &q(), 6))
                    .collect()
            };
            let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let left = g.bch_product(&g.bch_product(&a, &b).unwrap(), &c).unwrap();
            let right = g.bch_product(&a, &g.bch_product(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
            // The degree-4 term genuinely participates at this class.
            let inv = g.bch_product(&a, &g.group_inverse(&a).unwrap()).unwrap();
            assert!(inv.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn pansu_between_different_groups_extracts_the_area_form() {
        // f: Heisenberg -> R picking the central coordinate. The group-level
        // quotient is t v2 + (x0 v1 - x1 v0)/2, whose t -> 0 limit is the
        // symplectic pairing of the horizontal parts.
        let h = heisenberg(&q()).unwrap();
        let line = abelian(&q(), 1).unwrap();
        let r = Ring::polynomial(&q(), &["x0", "x1", "x2"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "x2").unwrap()]).unwrap();
        let x = vec![q().from_i64(2), q().from_i64(3), q().from_i64(-1)];
        let v = vec![q().from_i64(5), q().from_i64(1), q().from_i64(4)];
        for t in [1i64, 2, -5] {
            let out = pansu_diff1(&h, &line, &f, &x, &v, &q().from_i64(t)).unwrap();
            // t v2 + (x0 v1 - x1 v0)/2 with x0 v1 - x1 v0 = 2 - 15 = -13.
            let expected = &q().from_i64(t * 4) + &rat(-13, 2);
            assert_eq!(out, vec![expected], "t = {t}");
        }
    }

    #[test]
    fn class_five_is_rejected() {
        let err = CarnotAlgebra::new(
            &q(),
            vec![1, 1, 1, 1, 1],
            vec![vec![vec![q().zero(); 5]; 5]; 5],
        )
        .unwrap_err();
        assert!(matches!(err, CarnotError::UnsupportedClass(5)));
    }

    #[test]
    fn invalid_brackets_rejected() {
        // A bracket landing in the wrong grade.
        let zero = q().zero();
        let one = q().one();
        let z3 = || vec![zero.clone(), zero.clone(), zero.clone()];
        let mut bracket = vec![vec![z3(); 3]; 3];
        bracket[0][1] = vec![one.clone(), zero.clone(), zero.clone()];
        bracket[1][0] = vec![-&one, zero.clone(), zero.clone()];
        let err = CarnotAlgebra::new(&q(), vec![2, 1], bracket).unwrap_err();
        assert!(matches!(err, CarnotError::GradingViolated(_, _, _)));
        // Heisenberg over Z/2 lacks the 1/2 denominator.
        let z2 = Ring::integers_mod(2).unwrap();
        let err = heisenberg(&z2).unwrap_err();
        assert!(matches!(err, CarnotError::NonInvertibleDenominator(2)));
    }

    #[test]
    fn pansu_quotient_of_identity_is_v() {
        let h = heisenberg(&q()).unwrap();
        let r = Ring::polynomial(&q(), &["x0", "x1", "x2"]).unwrap();
        let id = PolyMap::identity(&r).unwrap();
        let x = vec![q().from_i64(1), q().from_i64(2), q().from_i64(3)];
        let v = vec![q().from_i64(-1), q().from_i64(4), q().from_i64(2)];
        for t in [1i64, 2, -3, 7] {
            let out = pansu_diff1(&h, &h, &id, &x, &v, &q().from_i64(t)).unwrap();
            assert_eq!(out, v, "t = {t}");
        }
    }

    #[test]
    fn pansu_reduces_to_linear_quotient_in_abelian_case() {
        let a = abelian(&q(), 1).unwrap();
        let r = Ring::polynomial(&q(), &["x0"]).unwrap();
        let f = PolyMap::new(&r, vec![Poly::var(&r, "x0").unwrap().pow(2)]).unwrap();
        let x = vec![q().from_i64(1)];
        let v = vec![q().from_i64(1)];
        let t = q().one();
        let pansu = pansu_diff1(&a, &a, &f, &x, &v, &t).unwrap();
        let plain = crate::diffquot::diff1_eval(&f, &x, &v, &t).unwrap();
        assert_eq!(pansu, plain);
        assert_eq!(pansu, vec![q().from_i64(3)]);
    }

    #[test]
    fn graded_homomorphism_has_constant_pansu_quotient() {
        // e0 -> e0, e1 -> e0 + e1, e2 -> e2 preserves brackets and grading,
        // so the group-level quotient is f(v) for every base point and time.
        let h = heisenberg(&q()).unwrap();
        let r = Ring::polynomial(&q(), &["x0", "x1", "x2"]).unwrap();
        let x0 = Poly::var(&r, "x0").unwrap();
        let x1 = Poly::var(&r, "x1").unwrap();
        let x2 = Poly::var(&r, "x2").unwrap();
        let f = PolyMap::new(&r, vec![x0.add(&x1), x1.clone(), x2.clone()]).unwrap();
        let x = vec![q().from_i64(2), q().from_i64(-1), q().from_i64(5)];
        let v = vec![q().from_i64(1), q().from_i64(3), q().from_i64(-2)];
        let expected = f.evaluate(&v).unwrap();
        for t in [1i64, 4, -2] {
            let out = pansu_diff1(&h, &h, &f, &x, &v, &q().from_i64(t)).unwrap();
            assert_eq!(out, expected, "t = {t}");
        }
        let err = pansu_diff1(&h, &h, &f, &x, &v, &q().zero()).unwrap_err();
        assert_eq!(err, CarnotError::NonInvertibleTime);
    }
}
