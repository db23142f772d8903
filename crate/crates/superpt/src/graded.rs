//! Z/2-graded matrices and vectors over Λ_N.
//!
//! The fiber is ℝ^{p|q}: the first `p` slots are even, the remaining `q` odd.
//! The total parity of a matrix entry combines the Grassmann parity of its
//! coefficients with the block position, so an even matrix has even scalars
//! on the diagonal blocks and odd scalars off-diagonal, and vice versa for an
//! odd matrix. Matrix products need no extra signs: all Koszul bookkeeping
//! happens inside the scalar ring.

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Parity};

/// Graded fiber dimensions (p | q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ranks {
    pub even: usize,
    pub odd: usize,
}

impl Ranks {
    pub fn new(even: usize, odd: usize) -> Self {
        Self { even, odd }
    }

    pub fn dim(&self) -> usize {
        self.even + self.odd
    }

    /// 0 for even slots, 1 for odd slots.
    pub fn slot_parity(&self, index: usize) -> u32 {
        u32::from(index >= self.even)
    }
}

/// A square matrix over Λ_N acting on a rank-(p|q) graded fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMatrix {
    ranks: Ranks,
    n_gen: usize,
    parity: Parity,
    /// Row-major, length dim².
    entries: Vec<GrassmannElement>,
}

impl GradedMatrix {
    pub fn zero(ranks: Ranks, n_gen: usize) -> Self {
        let dim = ranks.dim();
        Self {
            ranks,
            n_gen,
            parity: Parity::Even,
            entries: vec![GrassmannElement::zero(n_gen); dim * dim],
        }
    }

    pub fn identity(ranks: Ranks, n_gen: usize) -> Self {
        let mut m = Self::zero(ranks, n_gen);
        for i in 0..ranks.dim() {
            m.entries[i * ranks.dim() + i] = GrassmannElement::one(n_gen);
        }
        m
    }

    /// Build from row-major entries; the parity is classified from the data.
    pub fn from_entries(ranks: Ranks, n_gen: usize, entries: Vec<GrassmannElement>) -> Result<Self> {
        let dim = ranks.dim();
        if entries.len() != dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for e in &entries {
            if e.num_generators() != n_gen {
                return Err(Error::GeneratorMismatch(n_gen, e.num_generators()));
            }
        }
        let mut m = Self {
            ranks,
            n_gen,
            parity: Parity::Even,
            entries,
        };
        m.parity = m.classify();
        Ok(m)
    }

    /// Build from row-major entries and validate the declared total parity:
    /// every monomial of entry (i,j) must satisfy |m| + |i| + |j| ≡ ε (mod 2).
    pub fn with_parity(
        ranks: Ranks,
        n_gen: usize,
        entries: Vec<GrassmannElement>,
        parity: Parity,
    ) -> Result<Self> {
        let m = Self::from_entries(ranks, n_gen, entries)?;
        m.check_parity(parity)?;
        Ok(Self { parity, ..m })
    }

    /// Build from real (body-only) row-major entries.
    pub fn from_real(ranks: Ranks, n_gen: usize, entries: &[f64]) -> Result<Self> {
        let grs = entries
            .iter()
            .map(|&v| GrassmannElement::scalar(n_gen, v))
            .collect();
        Self::from_entries(ranks, n_gen, grs)
    }

    pub fn ranks(&self) -> Ranks {
        self.ranks
    }

    pub fn dim(&self) -> usize {
        self.ranks.dim()
    }

    pub fn num_generators(&self) -> usize {
        self.n_gen
    }

    /// Classified total parity: `Even`/`Odd` when consistent with the block
    /// structure (the zero matrix counts as even), `Mixed` otherwise.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn entry(&self, row: usize, col: usize) -> &GrassmannElement {
        &self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[GrassmannElement] {
        &self.entries
    }

    fn classify(&self) -> Parity {
        let dim = self.dim();
        let mut even_ok = true;
        let mut odd_ok = true;
        for i in 0..dim {
            for j in 0..dim {
                let slot = self.ranks.slot_parity(i) + self.ranks.slot_parity(j);
                for (idx, _) in self.entries[i * dim + j].terms() {
                    if (idx.len() as u32 + slot) % 2 == 0 {
                        odd_ok = false;
                    } else {
                        even_ok = false;
                    }
                }
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

    /// Error unless every stored monomial is consistent with `expected`
    /// total parity. Zero matrices pass either check.
    pub fn check_parity(&self, expected: Parity) -> Result<()> {
        if expected == Parity::Mixed {
            return Ok(());
        }
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let slot = self.ranks.slot_parity(i) + self.ranks.slot_parity(j);
                for (idx, _) in self.entries[i * dim + j].terms() {
                    let actual = Parity::from_is_odd((idx.len() as u32 + slot) % 2 == 1);
                    if actual != expected {
                        return Err(Error::ParityViolation(format!(
                            "entry ({}, {}) monomial {:?} has total parity {}, expected {}",
                            i, j, idx, actual, expected
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ranks != other.ranks {
            return Err(Error::ShapeMismatch(format!(
                "ranks ({}|{}) vs ({}|{})",
                self.ranks.even, self.ranks.odd, other.ranks.even, other.ranks.odd
            )));
        }
        if self.n_gen != other.n_gen {
            return Err(Error::GeneratorMismatch(self.n_gen, other.n_gen));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("incompatible matrices");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.scale_real(-1.0)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        let entries = self.entries.iter().map(|e| e.scale(factor)).collect();
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    /// Entrywise left multiplication by a scalar: (λM)_{ij} = λ·M_{ij}.
    pub fn scale_gr_left(&self, factor: &GrassmannElement) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| factor.checked_mul(e))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.ranks, self.n_gen, entries)
    }

    /// Entrywise right multiplication by a scalar: (Mλ)_{ij} = M_{ij}·λ.
    pub fn scale_gr_right(&self, factor: &GrassmannElement) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.checked_mul(factor))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.ranks, self.n_gen, entries)
    }

    /// Matrix product over Λ_N.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("incompatible matrices");
        let dim = self.dim();
        let mut entries = vec![GrassmannElement::zero(self.n_gen); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = &self.entries[i * dim + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = &other.entries[k * dim + j];
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * dim + j] = &entries[i * dim + j] + &(a * b);
                }
            }
        }
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    pub fn matvec(&self, v: &GradedVector) -> Result<GradedVector> {
        if self.ranks != v.ranks {
            return Err(Error::ShapeMismatch("matrix/vector ranks differ".into()));
        }
        if self.n_gen != v.n_gen {
            return Err(Error::GeneratorMismatch(self.n_gen, v.n_gen));
        }
        let dim = self.dim();
        let mut entries = vec![GrassmannElement::zero(self.n_gen); dim];
        for i in 0..dim {
            for j in 0..dim {
                let a = &self.entries[i * dim + j];
                if a.is_zero() || v.entries[j].is_zero() {
                    continue;
                }
                entries[i] = &entries[i] + &(a * &v.entries[j]);
            }
        }
        GradedVector::from_entries(self.ranks, self.n_gen, entries)
    }

    /// Total-parity involution: negates every monomial of total-odd parity
    /// (Grassmann length plus block position). For a homogeneous matrix this
    /// is ±identity; it implements the Koszul sign of moving θ across the
    /// matrix, `M·θ = θ·involution(M)` at the superfield level.
    pub fn parity_involution(&self) -> Self {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let slot = self.ranks.slot_parity(i) + self.ranks.slot_parity(j);
                let e = &self.entries[i * dim + j];
                let flipped = if slot % 2 == 0 {
                    e.parity_involution()
                } else {
                    e.parity_involution().negated()
                };
                entries.push(flipped);
            }
        }
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    /// The real matrix of body coefficients, row-major.
    pub fn body_matrix(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.body()).collect()
    }

    /// True when every entry is a pure body (no generator content).
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.soul().is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries
            .iter()
            .fold(0.0, |acc, e| acc.max(e.max_abs_coeff()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.check_compatible(other).expect("incompatible matrices");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max(a.max_abs_diff(b)))
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.ranks == other.ranks
            && self.n_gen == other.n_gen
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.eq_exact(b))
    }

    /// Largest coefficient magnitude found in the grading-preserving
    /// (diagonal) blocks; odd matrices must have zero here.
    pub fn diagonal_block_max(&self) -> f64 {
        let dim = self.dim();
        let mut max = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                if self.ranks.slot_parity(i) == self.ranks.slot_parity(j) {
                    max = max.max(self.entries[i * dim + j].max_abs_coeff());
                }
            }
        }
        max
    }

    /// Largest coefficient magnitude in the grading-reversing blocks.
    pub fn off_diagonal_block_max(&self) -> f64 {
        let dim = self.dim();
        let mut max = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                if self.ranks.slot_parity(i) != self.ranks.slot_parity(j) {
                    max = max.max(self.entries[i * dim + j].max_abs_coeff());
                }
            }
        }
        max
    }

    /// Inverse over Λ_N. The body must be invertible; the nilpotent part is
    /// handled by a terminating Neumann series:
    /// (B + S)⁻¹ = Σ_k (-B⁻¹S)^k B⁻¹.
    pub fn inverse(&self) -> Result<Self> {
        let dim = self.dim();
        let body_inv = invert_real(&self.body_matrix(), dim)?;
        let b_inv = Self::from_real(self.ranks, self.n_gen, &body_inv)?;
        let body = Self::from_real(self.ranks, self.n_gen, &self.body_matrix())?;
        let soul = self.sub(&body);
        if soul.is_zero() {
            return Ok(b_inv);
        }
        let step = b_inv.mul(&soul).negated();
        let mut acc = Self::identity(self.ranks, self.n_gen);
        let mut power = Self::identity(self.ranks, self.n_gen);
        for _ in 0..=self.n_gen {
            power = step.mul(&power);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.mul(&b_inv))
    }
}

/// Gauss-Jordan with partial pivoting on a row-major real matrix.
fn invert_real(matrix: &[f64], dim: usize) -> Result<Vec<f64>> {
    let mut a = matrix.to_vec();
    let mut inv = vec![0.0; dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = 1.0;
    }
    for col in 0..dim {
        let mut pivot = col;
        for row in (col + 1)..dim {
            if a[row * dim + col].abs() > a[pivot * dim + col].abs() {
                pivot = row;
            }
        }
        let p = a[pivot * dim + col];
        if p.abs() < 1e-300 || !p.is_finite() {
            return Err(Error::SingularBody);
        }
        if pivot != col {
            for j in 0..dim {
                a.swap(col * dim + j, pivot * dim + j);
                inv.swap(col * dim + j, pivot * dim + j);
            }
        }
        let scale = 1.0 / a[col * dim + col];
        for j in 0..dim {
            a[col * dim + j] *= scale;
            inv[col * dim + j] *= scale;
        }
        for row in 0..dim {
            if row == col {
                continue;
            }
            let factor = a[row * dim + col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..dim {
                a[row * dim + j] -= factor * a[col * dim + j];
                inv[row * dim + j] -= factor * inv[col * dim + j];
            }
        }
    }
    Ok(inv)
}

/// A column vector over Λ_N with graded slots.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    ranks: Ranks,
    n_gen: usize,
    entries: Vec<GrassmannElement>,
}

impl GradedVector {
    pub fn zero(ranks: Ranks, n_gen: usize) -> Self {
        Self {
            ranks,
            n_gen,
            entries: vec![GrassmannElement::zero(n_gen); ranks.dim()],
        }
    }

    pub fn from_entries(ranks: Ranks, n_gen: usize, entries: Vec<GrassmannElement>) -> Result<Self> {
        if entries.len() != ranks.dim() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                ranks.dim(),
                entries.len()
            )));
        }
        for e in &entries {
            if e.num_generators() != n_gen {
                return Err(Error::GeneratorMismatch(n_gen, e.num_generators()));
            }
        }
        Ok(Self {
            ranks,
            n_gen,
            entries,
        })
    }

    pub fn ranks(&self) -> Ranks {
        self.ranks
    }

    pub fn num_generators(&self) -> usize {
        self.n_gen
    }

    pub fn entries(&self) -> &[GrassmannElement] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ranks, other.ranks);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        let entries = self.entries.iter().map(|e| e.scale(factor)).collect();
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    /// Slot-aware parity involution, mirroring [`GradedMatrix::parity_involution`].
    pub fn parity_involution(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if self.ranks.slot_parity(i) % 2 == 0 {
                    e.parity_involution()
                } else {
                    e.parity_involution().negated()
                }
            })
            .collect();
        Self::from_entries(self.ranks, self.n_gen, entries).unwrap()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max(a.max_abs_diff(b)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offdiag(n_gen: usize, upper: f64, lower: f64) -> GradedMatrix {
        GradedMatrix::from_real(Ranks::new(1, 1), n_gen, &[0.0, upper, lower, 0.0]).unwrap()
    }

    #[test]
    fn classification_matches_blocks() {
        let odd = offdiag(0, 1.0, 2.0);
        assert_eq!(odd.parity(), Parity::Odd);
        let even = GradedMatrix::from_real(Ranks::new(1, 1), 0, &[1.0, 0.0, 0.0, -3.0]).unwrap();
        assert_eq!(even.parity(), Parity::Even);
        let id = GradedMatrix::identity(Ranks::new(2, 1), 4);
        assert_eq!(id.parity(), Parity::Even);
    }

    #[test]
    fn declared_parity_validated() {
        let entries = vec![
            GrassmannElement::one(2),
            GrassmannElement::zero(2),
            GrassmannElement::zero(2),
            GrassmannElement::one(2),
        ];
        assert!(GradedMatrix::with_parity(Ranks::new(1, 1), 2, entries.clone(), Parity::Odd).is_err());
        assert!(GradedMatrix::with_parity(Ranks::new(1, 1), 2, entries, Parity::Even).is_ok());
    }

    #[test]
    fn product_of_odd_matrices_is_even() {
        let a = offdiag(0, 1.0, 2.0);
        let b = offdiag(0, -0.5, 3.0);
        let ab = a.mul(&b);
        assert_eq!(ab.parity(), Parity::Even);
        // [[0,1],[2,0]]·[[0,-0.5],[3,0]] = [[3,0],[0,-1]]
        assert_eq!(ab.entry(0, 0).body(), 3.0);
        assert_eq!(ab.entry(1, 1).body(), -1.0);
    }

    #[test]
    fn involution_flips_odd_matrices() {
        let a = offdiag(0, 1.0, 2.0);
        assert!(a.parity_involution().eq_exact(&a.negated()));
        let e = GradedMatrix::identity(Ranks::new(1, 1), 2);
        assert!(e.parity_involution().eq_exact(&e));
    }

    #[test]
    fn inverse_with_nilpotent_part() {
        let ranks = Ranks::new(1, 1);
        let e01 = GrassmannElement::monomial(2, &[0, 1], 0.5).unwrap();
        let entries = vec![
            &GrassmannElement::scalar(2, 2.0) + &e01,
            GrassmannElement::zero(2),
            GrassmannElement::monomial(2, &[0, 1], -1.0).unwrap(),
            GrassmannElement::scalar(2, -1.0),
        ];
        let m = GradedMatrix::from_entries(ranks, 2, entries).unwrap();
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv);
        let id = GradedMatrix::identity(ranks, 2);
        assert!(prod.max_abs_diff(&id) < 1e-14);
        let prod2 = inv.mul(&m);
        assert!(prod2.max_abs_diff(&id) < 1e-14);
    }

    #[test]
    fn singular_body_detected() {
        let m = GradedMatrix::from_real(Ranks::new(1, 1), 0, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::SingularBody)));
    }
}
