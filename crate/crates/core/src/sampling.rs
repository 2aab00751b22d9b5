//! Deterministic sampling for the verification batteries.
//!
//! A small hand-rolled SplitMix64 generator keeps the randomized suites
//! reproducible from a single seed across platforms and dependency bumps:
//! identical seeds give identical batteries forever.

use crate::polymap::{Poly, PolyMap};
use crate::rings::{Ring, RingElement, RingSpec};

/// SplitMix64.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform in `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// A random element with small coordinates; rationals get small numerators
/// and denominators, residues are uniform, composite rings recurse.
pub fn random_element(rng: &mut Rng, ring: &Ring, magnitude: i64) -> RingElement {
    match ring.spec() {
        RingSpec::Rationals => {
            let num = rng.int_in(-magnitude, magnitude);
            let den = rng.int_in(1, magnitude.max(1));
            &ring.from_i64(num) * &ring.from_i64(den).invert().expect("positive denominator")
        }
        RingSpec::IntegersMod(n) => {
            let n: u64 = n.try_into().unwrap_or(u64::MAX);
            ring.from_i64(rng.below(n) as i64)
        }
        RingSpec::PolynomialRing { .. } => {
            let base = ring.base().expect("polynomial ring");
            let vars: Vec<String> = ring.vars().expect("polynomial ring").to_vec();
            let mut acc = ring.zero();
            for _ in 0..rng.int_in(1, 2) {
                let coeff = random_element(rng, &base, magnitude);
                let mut term = ring.embed(&coeff).expect("same base");
                for v in &vars {
                    if rng.chance(1, 2) {
                        let var = ring.var(v).expect("listed variable");
                        term = &term * &var.pow(rng.int_in(1, 2) as u32);
                    }
                }
                acc = &acc + &term;
            }
            acc
        }
        RingSpec::StructureConstantAlgebra { rank, .. } => {
            let base = ring.base().expect("algebra");
            let coords: Vec<RingElement> =
                (0..*rank).map(|_| random_element(rng, &base, magnitude)).collect();
            ring.from_coords(&coords).expect("rank matches")
        }
    }
}

/// A random unit, by rejection; falls back to 1 after a bounded number of
/// draws (relevant only in rings crowded with zero divisors).
pub fn random_invertible(rng: &mut Rng, ring: &Ring, magnitude: i64) -> RingElement {
    for _ in 0..64 {
        let candidate = random_element(rng, ring, magnitude);
        if candidate.invert().is_some() {
            return candidate;
        }
    }
    ring.one()
}

pub fn random_point(rng: &mut Rng, ring: &Ring, len: usize, magnitude: i64) -> Vec<RingElement> {
    (0..len).map(|_| random_element(rng, ring, magnitude)).collect()
}

/// A random nonzero polynomial in the given ring with bounded degree and
/// term count.
pub fn random_poly(rng: &mut Rng, ring: &Ring, max_degree: u32, max_terms: usize) -> Poly {
    let base = ring.base().expect("polynomial ring");
    let vars: Vec<String> = ring.vars().expect("polynomial ring").to_vec();
    for _ in 0..32 {
        let mut acc = Poly::zero(ring).expect("polynomial ring");
        let terms = rng.int_in(1, max_terms.max(1) as i64);
        for _ in 0..terms {
            let coeff = random_element(rng, &base, 5);
            let mut term = Poly::constant(ring, &coeff).expect("same base");
            let mut budget = max_degree;
            for v in &vars {
                if budget == 0 {
                    break;
                }
                let e = rng.int_in(0, budget.min(max_degree) as i64) as u32;
                if e > 0 {
                    term = term.mul(&Poly::var(ring, v).expect("listed").pow(e));
                    budget -= e;
                }
            }
            acc = acc.add(&term);
        }
        if !acc.is_zero() {
            return acc;
        }
    }
    Poly::one(ring).expect("polynomial ring")
}

/// A random polynomial map `K^m -> K^n` in variables `x0 .. x(m-1)`.
pub fn random_poly_map(
    rng: &mut Rng,
    coeff: &Ring,
    domain_rank: usize,
    codomain_rank: usize,
    max_degree: u32,
    max_terms: usize,
) -> PolyMap {
    let vars: Vec<String> = (0..domain_rank).map(|i| format!("x{i}")).collect();
    let ring = Ring::polynomial_named(coeff, vars).expect("fresh variables");
    let components = (0..codomain_rank)
        .map(|_| random_poly(rng, &ring, max_degree, max_terms))
        .collect();
    PolyMap::new(&ring, components).expect("same ring")
}
