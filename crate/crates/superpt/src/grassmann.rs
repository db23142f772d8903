//! Arithmetic in the real Grassmann algebra Λ_N.
//!
//! Λ_N is the exterior algebra on `N` anticommuting generators
//! `η_0, ..., η_{N-1}` with `η_i η_j = -η_j η_i`. Its elements serve as the
//! scalar ring for everything else in the crate: odd path components, θ-like
//! nilpotents, and the entries of graded matrices all live here.
//!
//! Elements are stored sparsely as a map from canonical monomials (strictly
//! increasing index sets, encoded as bitmasks) to real coefficients. Terms
//! with coefficient exactly zero are never stored, so structural identities
//! like nilpotency of soul elements hold exactly, not just up to roundoff.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Largest supported number of generators; monomials are u64 bitmasks.
pub const MAX_GENERATORS: usize = 64;

/// Z/2 parity of an algebra element or operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    /// The opposite homogeneous parity; `Mixed` stays `Mixed`.
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::Mixed => Parity::Mixed,
        }
    }

    pub fn from_is_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
            Parity::Mixed => write!(f, "mixed"),
        }
    }
}

/// An element of Λ_N with sparse canonical storage.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannElement {
    n_gen: usize,
    /// Canonical monomial bitmask -> coefficient; zero coefficients absent.
    terms: BTreeMap<u64, f64>,
}

/// Sign incurred when merging two disjoint canonical monomials `a · b`:
/// the number of pairs `(i in a, j in b)` with `i > j` determines it.
fn merge_sign(a: u64, b: u64) -> f64 {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Canonicalize an arbitrary index tuple: returns the bitmask and the sign of
/// the sorting permutation, or `None` when an index repeats (the monomial
/// vanishes by antisymmetry).
fn canonical_mask(indices: &[usize], n_gen: usize) -> Result<Option<(u64, f64)>> {
    let mut mask = 0u64;
    let mut sign = 1.0;
    for (pos, &idx) in indices.iter().enumerate() {
        if idx >= n_gen {
            return Err(Error::GeneratorOutOfRange { index: idx, n_gen });
        }
        let bit = 1u64 << idx;
        if mask & bit != 0 {
            return Ok(None);
        }
        // Count how many already-inserted indices are larger: each is a swap.
        let larger = (mask >> (idx + 1)).count_ones() as usize;
        let _ = pos;
        if larger % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Ok(Some((mask, sign)))
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..MAX_GENERATORS).filter(|i| mask & (1 << i) != 0).collect()
}

impl GrassmannElement {
    /// The zero element of Λ_N.
    pub fn zero(n_gen: usize) -> Self {
        assert!(n_gen <= MAX_GENERATORS, "too many generators");
        Self {
            n_gen,
            terms: BTreeMap::new(),
        }
    }

    /// A real scalar, i.e. a multiple of the empty monomial.
    pub fn scalar(n_gen: usize, value: f64) -> Self {
        let mut el = Self::zero(n_gen);
        if value != 0.0 {
            el.terms.insert(0, value);
        }
        el
    }

    pub fn one(n_gen: usize) -> Self {
        Self::scalar(n_gen, 1.0)
    }

    /// The generator `η_index`.
    pub fn generator(n_gen: usize, index: usize) -> Result<Self> {
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(n_gen));
        }
        if index >= n_gen {
            return Err(Error::GeneratorOutOfRange { index, n_gen });
        }
        let mut el = Self::zero(n_gen);
        el.terms.insert(1u64 << index, 1.0);
        Ok(el)
    }

    /// A single monomial `coeff · η_{i1}···η_{ik}`. The index tuple need not
    /// be sorted; antisymmetry is applied on insertion and repeated indices
    /// annihilate the term.
    pub fn monomial(n_gen: usize, indices: &[usize], coeff: f64) -> Result<Self> {
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(n_gen));
        }
        let mut el = Self::zero(n_gen);
        if let Some((mask, sign)) = canonical_mask(indices, n_gen)? {
            let value = sign * coeff;
            if value != 0.0 {
                el.terms.insert(mask, value);
            }
        }
        Ok(el)
    }

    /// Build an element from a list of (index tuple, coefficient) terms,
    /// normalizing each tuple and summing duplicates.
    pub fn from_terms(n_gen: usize, terms: &[(&[usize], f64)]) -> Result<Self> {
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(n_gen));
        }
        let mut el = Self::zero(n_gen);
        for (indices, coeff) in terms {
            if let Some((mask, sign)) = canonical_mask(indices, n_gen)? {
                let entry = el.terms.entry(mask).or_insert(0.0);
                *entry += sign * coeff;
                if *entry == 0.0 {
                    el.terms.remove(&mask);
                }
            }
        }
        Ok(el)
    }

    pub fn num_generators(&self) -> usize {
        self.n_gen
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> f64 {
        self.terms.get(&0).copied().unwrap_or(0.0)
    }

    /// The nilpotent remainder: everything but the body.
    pub fn soul(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&0);
        out
    }

    /// Coefficient of a canonical monomial; zero when absent. The tuple must
    /// be strictly increasing with indices below `N`.
    pub fn coefficient(&self, monomial: &[usize]) -> Result<f64> {
        let mut mask = 0u64;
        let mut prev: Option<usize> = None;
        for &idx in monomial {
            if idx >= self.n_gen {
                return Err(Error::GeneratorOutOfRange {
                    index: idx,
                    n_gen: self.n_gen,
                });
            }
            if prev.map_or(false, |p| p >= idx) {
                return Err(Error::NonCanonicalMonomial);
            }
            prev = Some(idx);
            mask |= 1 << idx;
        }
        Ok(self.terms.get(&mask).copied().unwrap_or(0.0))
    }

    /// Iterate over stored terms as (index tuple, coefficient) pairs in
    /// canonical (bitmask) order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.terms.iter().map(|(&mask, &c)| (mask_to_indices(mask), c))
    }

    /// Parity classification: even/odd when all monomials have even/odd
    /// length, mixed otherwise. The zero element counts as even.
    pub fn parity(&self) -> Parity {
        let mut even_ok = true;
        let mut odd_ok = true;
        for &mask in self.terms.keys() {
            if mask.count_ones() % 2 == 0 {
                odd_ok = false;
            } else {
                even_ok = false;
            }
        }
        if even_ok {
            Parity::Even
        } else if odd_ok {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    /// True for homogeneous even elements and zero.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    /// True for homogeneous odd elements and zero.
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n_gen != other.n_gen {
            return Err(Error::GeneratorMismatch(self.n_gen, other.n_gen));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&mask, &c) in &other.terms {
            let entry = out.terms.entry(mask).or_insert(0.0);
            *entry += c;
            if *entry == 0.0 {
                out.terms.remove(&mask);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.negated())
    }

    /// The exterior product. Errors when the operands live in algebras with
    /// different generator counts.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n_gen);
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let value = merge_sign(ma, mb) * ca * cb;
                let entry = out.terms.entry(ma | mb).or_insert(0.0);
                *entry += value;
                if *entry == 0.0 {
                    out.terms.remove(&(ma | mb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = Self::zero(self.n_gen);
        if factor != 0.0 {
            for (&mask, &c) in &self.terms {
                let v = c * factor;
                if v != 0.0 {
                    out.terms.insert(mask, v);
                }
            }
        }
        out
    }

    pub fn negated(&self) -> Self {
        self.scale(-1.0)
    }

    /// The grade involution `α`: negates every odd monomial. It satisfies
    /// `λ·θ = θ·α(λ)` for any odd scalar θ, exactly, also on mixed elements.
    pub fn parity_involution(&self) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.terms.iter_mut() {
            if mask.count_ones() % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Largest absolute coefficient; zero for the zero element.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.terms.values().all(|c| c.is_finite())
    }

    /// Reinterpret in a larger algebra Λ_M, M ≥ N (the canonical inclusion).
    pub fn promote(&self, n_gen: usize) -> Result<Self> {
        if n_gen < self.n_gen {
            return Err(Error::GeneratorMismatch(self.n_gen, n_gen));
        }
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(n_gen));
        }
        Ok(Self {
            n_gen,
            terms: self.terms.clone(),
        })
    }

    /// Exact equality of stored terms (bitwise on coefficients).
    pub fn eq_exact(&self, other: &Self) -> bool {
        self.n_gen == other.n_gen && self.terms == other.terms
    }

    /// Largest absolute coefficient of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for (&mask, &c) in &self.terms {
            let d = other.terms.get(&mask).copied().unwrap_or(0.0);
            max = max.max((c - d).abs());
        }
        for (&mask, &c) in &other.terms {
            if !self.terms.contains_key(&mask) {
                max = max.max(c.abs());
            }
        }
        max
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for i in mask_to_indices(mask) {
                write!(f, "·e{}", i)?;
            }
        }
        Ok(())
    }
}

impl Add for &GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_add(rhs).expect("generator count mismatch")
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_sub(rhs).expect("generator count mismatch")
    }
}

impl Mul for &GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_mul(rhs).expect("generator count mismatch")
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.negated()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gen(i: usize) -> GrassmannElement {
        GrassmannElement::generator(8, i).unwrap()
    }

    #[test]
    fn generator_squares_to_zero() {
        let e1 = gen(1);
        assert!((&e1 * &e1).is_zero());
    }

    #[test]
    fn generators_anticommute() {
        let e1 = gen(1);
        let e2 = gen(2);
        let ab = &e1 * &e2;
        let ba = &e2 * &e1;
        assert!(ba.eq_exact(&ab.negated()));
        assert_eq!(ba.coefficient(&[1, 2]).unwrap(), -1.0);
    }

    #[test]
    fn product_distributes() {
        let one = GrassmannElement::one(8);
        let a = &one + &gen(1);
        let b = &one + &gen(2);
        let prod = &a * &b;
        assert_eq!(prod.coefficient(&[]).unwrap(), 1.0);
        assert_eq!(prod.coefficient(&[1]).unwrap(), 1.0);
        assert_eq!(prod.coefficient(&[2]).unwrap(), 1.0);
        assert_eq!(prod.coefficient(&[1, 2]).unwrap(), 1.0);
        assert_eq!(prod.terms().count(), 4);
    }

    #[test]
    fn parity_classification() {
        assert_eq!(GrassmannElement::scalar(4, 3.5).parity(), Parity::Even);
        let e123 = GrassmannElement::monomial(4, &[1, 2, 3], 1.0).unwrap();
        assert_eq!(e123.parity(), Parity::Odd);
        let mixed = &GrassmannElement::one(4) + &GrassmannElement::generator(4, 1).unwrap();
        assert_eq!(mixed.parity(), Parity::Mixed);
    }

    #[test]
    fn coefficient_extraction() {
        let el = GrassmannElement::from_terms(8, &[(&[], 2.0), (&[1, 2], 5.0)]).unwrap();
        assert_eq!(el.coefficient(&[1, 2]).unwrap(), 5.0);
        assert_eq!(el.coefficient(&[]).unwrap(), 2.0);
        assert_eq!(gen(1).coefficient(&[2]).unwrap(), 0.0);
        assert!(matches!(
            el.coefficient(&[2, 1]),
            Err(Error::NonCanonicalMonomial)
        ));
        assert!(el.coefficient(&[9]).is_err());
    }

    #[test]
    fn insertion_normalizes_sign() {
        let el = GrassmannElement::monomial(4, &[2, 1], 3.0).unwrap();
        assert_eq!(el.coefficient(&[1, 2]).unwrap(), -3.0);
        let dead = GrassmannElement::monomial(4, &[1, 1], 3.0).unwrap();
        assert!(dead.is_zero());
    }

    #[test]
    fn mismatched_generator_count_errors() {
        let a = GrassmannElement::one(4);
        let b = GrassmannElement::one(5);
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::GeneratorMismatch(4, 5))
        ));
    }

    #[test]
    fn soul_is_nilpotent() {
        // Any element with zero body has vanishing (N+1)-th power, exactly.
        for n in 2..=5usize {
            let mut el = GrassmannElement::zero(n);
            for i in 0..n {
                el = &el + &GrassmannElement::generator(n, i).unwrap().scale(1.0 + i as f64);
            }
            if n >= 2 {
                el = &el + &GrassmannElement::monomial(n, &[0, 1], -0.75).unwrap();
            }
            let mut power = GrassmannElement::one(n);
            for _ in 0..=n {
                power = &power * &el;
            }
            assert!(power.is_zero(), "soul^{} != 0 for N={}", n + 1, n);
        }
    }

    #[test]
    fn involution_negates_odd_part() {
        let el = GrassmannElement::from_terms(4, &[(&[], 2.0), (&[0], 3.0), (&[0, 1], 4.0)])
            .unwrap();
        let inv = el.parity_involution();
        assert_eq!(inv.coefficient(&[]).unwrap(), 2.0);
        assert_eq!(inv.coefficient(&[0]).unwrap(), -3.0);
        assert_eq!(inv.coefficient(&[0, 1]).unwrap(), 4.0);
    }

    fn arb_element(n_gen: usize) -> impl Strategy<Value = GrassmannElement> {
        prop::collection::vec((0u64..(1 << n_gen), -4i32..=4), 0..6).prop_map(move |raw| {
            let mut el = GrassmannElement::zero(n_gen);
            for (mask, c) in raw {
                if c != 0 {
                    let m = GrassmannElement {
                        n_gen,
                        terms: [(mask, c as f64)].into_iter().collect(),
                    };
                    el = &el + &m;
                }
            }
            el
        })
    }

    fn arb_homogeneous(n_gen: usize, odd: bool) -> impl Strategy<Value = GrassmannElement> {
        arb_element(n_gen).prop_map(move |el| {
            let mut out = GrassmannElement::zero(n_gen);
            for (idx, c) in el.terms() {
                if idx.len() % 2 == usize::from(odd) {
                    out = &out + &GrassmannElement::monomial(n_gen, &idx, c).unwrap();
                }
            }
            out
        })
    }

    proptest! {
        #[test]
        fn prop_associative(a in arb_element(5), b in arb_element(5), c in arb_element(5)) {
            let left = &(&a * &b) * &c;
            let right = &a * &(&b * &c);
            let scale = left.max_abs_coeff().max(right.max_abs_coeff()).max(1.0);
            prop_assert!(left.max_abs_diff(&right) <= 1e-12 * scale);
        }

        #[test]
        fn prop_graded_commutative(
            odd_a in any::<bool>(), odd_b in any::<bool>(),
            a_seed in arb_element(5), b_seed in arb_element(5),
        ) {
            // Restrict to homogeneous parts of the requested parities.
            let project = |el: &GrassmannElement, odd: bool| {
                let mut out = GrassmannElement::zero(5);
                for (idx, c) in el.terms() {
                    if idx.len() % 2 == usize::from(odd) {
                        out = &out + &GrassmannElement::monomial(5, &idx, c).unwrap();
                    }
                }
                out
            };
            let a = project(&a_seed, odd_a);
            let b = project(&b_seed, odd_b);
            let ab = &a * &b;
            let ba = &b * &a;
            let expected = if odd_a && odd_b { ba.negated() } else { ba };
            prop_assert!(ab.eq_exact(&expected));
        }

        #[test]
        fn prop_parity_additive(
            odd_a in any::<bool>(), odd_b in any::<bool>(),
            a in arb_element(5), b in arb_element(5),
        ) {
            let project = |el: &GrassmannElement, odd: bool| {
                let mut out = GrassmannElement::zero(5);
                for (idx, c) in el.terms() {
                    if idx.len() % 2 == usize::from(odd) {
                        out = &out + &GrassmannElement::monomial(5, &idx, c).unwrap();
                    }
                }
                out
            };
            let a = project(&a, odd_a);
            let b = project(&b, odd_b);
            let prod = &a * &b;
            if !prod.is_zero() {
                let expect = Parity::from_is_odd(odd_a ^ odd_b);
                prop_assert_eq!(prod.parity(), expect);
            }
        }

        #[test]
        fn prop_homogeneous_classification(el in arb_homogeneous(5, true)) {
            prop_assert!(el.is_odd());
        }
    }
}
