//! Dense max-plus matrices over exact rationals.

use crate::error::{Result, TropError};
use crate::scalar::TropScalar;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

/// A dense `rows x cols` grid of [`TropScalar`] in row-major order.
///
/// All operations are pure; values are immutable once built, so matrices can
/// be shared freely across threads.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropScalar>,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(TropError::Dimension(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(TropMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TropScalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        TropMatrix { rows, cols, entries }
    }

    /// Identity: 0 on the diagonal, `-inf` elsewhere.
    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, d, |i, j| {
            if i == j {
                TropScalar::one()
            } else {
                TropScalar::NegInf
            }
        })
    }

    pub fn all_neg_inf(rows: usize, cols: usize) -> Self {
        TropMatrix {
            rows,
            cols,
            entries: vec![TropScalar::NegInf; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(TropError::Dimension(format!(
                "square matrix required, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: TropScalar) {
        self.entries[i * self.cols + j] = v;
    }

    /// Iterator over the finite entries as weighted arcs `(i, j, weight)`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (0..self.cols).filter_map(move |j| {
                self.get(i, j).as_rational().map(|w| (i, j, w))
            })
        })
    }

    pub fn has_arcs(&self) -> bool {
        self.entries.iter().any(|e| e.is_finite())
    }

    /// Entrywise maximum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(TropError::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TropMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Max-plus product: `(A o B)_ij = max_k (a_ik + b_kj)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(TropError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = TropMatrix::all_neg_inf(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                let TropScalar::Finite(aik) = aik else { continue };
                for j in 0..other.cols {
                    if let TropScalar::Finite(bkj) = other.get(k, j) {
                        let cand = aik + bkj;
                        let cur = out.get(i, j);
                        match cur {
                            TropScalar::Finite(c) if *c >= cand => {}
                            _ => out.set(i, j, TropScalar::Finite(cand)),
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A^t` by repeated multiplication; `A^0` is the identity.
    pub fn pow(&self, t: u64) -> Result<Self> {
        let d = self.require_square()?;
        let mut acc = TropMatrix::identity(d);
        for _ in 0..t {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Adds a finite scalar to every finite entry.
    pub fn scalar_mul(c: &TropScalar, a: &Self) -> Result<Self> {
        let c = match c {
            TropScalar::NegInf => return Err(TropError::InvalidScalar),
            TropScalar::Finite(r) => r,
        };
        let entries = a
            .entries
            .iter()
            .map(|e| match e {
                TropScalar::NegInf => TropScalar::NegInf,
                TropScalar::Finite(r) => TropScalar::Finite(r + c),
            })
            .collect();
        Ok(TropMatrix {
            rows: a.rows,
            cols: a.cols,
            entries,
        })
    }

    /// Kleene star `I + A + A^2 + ... + A^(d-1)`, defined when no cycle has
    /// positive weight. Computed by Floyd-Warshall relaxation; a positive
    /// diagonal after closure signals divergence.
    pub fn kleene_star(&self) -> Result<Self> {
        let d = self.require_square()?;
        let mut dist = self.clone();
        for k in 0..d {
            for i in 0..d {
                let TropScalar::Finite(dik) = dist.get(i, k).clone() else {
                    continue;
                };
                for j in 0..d {
                    if let TropScalar::Finite(dkj) = dist.get(k, j) {
                        let cand = &dik + dkj;
                        match dist.get(i, j) {
                            TropScalar::Finite(c) if *c >= cand => {}
                            _ => dist.set(i, j, TropScalar::Finite(cand)),
                        }
                    }
                }
            }
        }
        for i in 0..d {
            if let TropScalar::Finite(dii) = dist.get(i, i) {
                if dii > &BigRational::zero() {
                    return Err(TropError::PositiveCycle);
                }
            }
        }
        let mut star = dist;
        for i in 0..d {
            if star.get(i, i) < &TropScalar::one() {
                star.set(i, i, TropScalar::one());
            }
        }
        Ok(star)
    }

    /// Entrywise `<=`.
    pub fn le(&self, other: &Self) -> bool {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a <= b)
    }

    pub fn ge(&self, other: &Self) -> bool {
        other.le(self)
    }

    pub fn min_finite_entry(&self) -> Option<&BigRational> {
        self.entries
            .iter()
            .filter_map(|e| e.as_rational())
            .min()
    }

    pub fn max_finite_entry(&self) -> Option<&BigRational> {
        self.entries
            .iter()
            .filter_map(|e| e.as_rational())
            .max()
    }

    /// Extracts the submatrix with the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Permutation similarity: entry `(i, j)` of the result is
    /// `a[perm[i]][perm[j]]`, i.e. `perm` lists the old index of each new row.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let d = self.require_square()?;
        if perm.len() != d {
            return Err(TropError::Dimension(format!(
                "permutation of length {} for {}x{} matrix",
                perm.len(),
                d,
                d
            )));
        }
        Ok(Self::from_fn(d, d, |i, j| self.get(perm[i], perm[j]).clone()))
    }

    /// Boolean support: `true` where the entry is finite.
    pub fn support(&self) -> Vec<Vec<bool>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).is_finite()).collect())
            .collect()
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl FromStr for TropMatrix {
    type Err = TropError;

    /// Compact literal form: rows separated by `;`, entries by whitespace,
    /// each entry an integer, `p/q`, or `-inf`. Example: `"0 1; -inf 0"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<TropScalar>> = s
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|tok| tok.parse::<TropScalar>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() || rows[0].is_empty() {
            return Err(TropError::Parse("empty matrix literal".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(TropError::Parse("ragged matrix literal".into()));
        }
        TropMatrix::new(rows.len(), cols, rows.into_iter().flatten().collect())
    }
}
