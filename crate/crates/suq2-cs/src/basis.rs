//! Basis labels for the truncated Hilbert space.
//!
//! The full space has orthonormal basis `e^(n)_{ij}` with `n` a half-integer
//! spin and `i, j ∈ {-n, ..., n}`. All half-integers are stored doubled, so a
//! basis vector is a triple `(m, i2, j2)` with `m = 2n`, `i2 = 2i`, `j2 = 2j`.
//! Shell `m` holds `(m + 1)^2` vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A basis label `(m, i2, j2)` with `|i2| <= m`, `|j2| <= m` and
/// `i2 ≡ j2 ≡ m (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub m: u32,
    pub i2: i32,
    pub j2: i32,
}

impl BasisIndex {
    pub fn new(m: u32, i2: i32, j2: i32) -> Result<Self> {
        let idx = Self { m, i2, j2 };
        if idx.is_valid() {
            Ok(idx)
        } else {
            Err(Error::InvalidBasisIndex { m, i2, j2 })
        }
    }

    pub fn is_valid(&self) -> bool {
        let m = self.m as i32;
        self.i2.abs() <= m
            && self.j2.abs() <= m
            && (self.i2 - m).rem_euclid(2) == 0
            && (self.j2 - m).rem_euclid(2) == 0
    }

    /// True when `i = n`, the positive-eigenvalue half of the Dirac operator.
    pub fn is_upper(&self) -> bool {
        self.i2 == self.m as i32
    }
}

/// Finite compression parameters: shells `m <= m_max` are kept, and the
/// outermost `guard` shells are treated as boundary (their columns may have
/// lost amplitude to truncation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub m_max: u32,
    pub guard: u32,
}

impl Truncation {
    pub fn new(m_max: u32, guard: u32) -> Result<Self> {
        if guard > m_max {
            return Err(Error::Config(format!(
                "guard {guard} exceeds m_max {m_max}"
            )));
        }
        Ok(Self { m_max, guard })
    }

    /// Largest shell considered interior for reporting purposes.
    pub fn interior_max(&self) -> u32 {
        self.m_max - self.guard
    }

    /// Number of retained basis vectors, `sum_{m<=m_max} (m+1)^2`.
    pub fn dim(&self) -> usize {
        shell_offset(self.m_max + 1)
    }

    /// Linear index of a basis label, shells ordered by `m`, then row-major
    /// in `(i2, j2)`.
    pub fn linear(&self, idx: BasisIndex) -> usize {
        debug_assert!(idx.m <= self.m_max);
        let side = (idx.m + 1) as usize;
        let row = ((idx.i2 + idx.m as i32) / 2) as usize;
        let col = ((idx.j2 + idx.m as i32) / 2) as usize;
        shell_offset(idx.m) + row * side + col
    }

    pub fn unlinear(&self, lin: usize) -> BasisIndex {
        let mut m = 0u32;
        while shell_offset(m + 1) <= lin {
            m += 1;
        }
        let rem = lin - shell_offset(m);
        let side = (m + 1) as usize;
        let row = (rem / side) as i32;
        let col = (rem % side) as i32;
        BasisIndex {
            m,
            i2: 2 * row - m as i32,
            j2: 2 * col - m as i32,
        }
    }

    /// All labels of one shell.
    pub fn shell_iter(&self, m: u32) -> impl Iterator<Item = BasisIndex> {
        let mi = m as i32;
        (-mi..=mi).step_by(2).flat_map(move |i2| {
            (-mi..=mi)
                .step_by(2)
                .map(move |j2| BasisIndex { m, i2, j2 })
        })
    }
}

/// `sum_{m' < m} (m'+1)^2 = m(m+1)(2m+1)/6` via the square-pyramidal count.
pub fn shell_offset(m: u32) -> usize {
    let m = m as usize;
    m * (m + 1) * (2 * m + 1) / 6
}
