//! Sparse square matrices over [`Scalar`] with the tensor-algebra operations
//! the R-matrix pipeline needs: Kronecker products, embeddings of two-leg
//! operators into three tensor legs, the 21-flip, and the permutation matrix.
//!
//! Indices are 1-based, matching matrix-unit notation e_ij. A matrix on
//! M_n (x) M_n uses row (i-1)*n + k for the pair (i,k); the same lexicographic
//! convention extends to three legs. Entries are kept canonical: zeros are
//! never stored, so `==` is mathematical equality.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactring::{Rat, Scalar};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    dim: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// Which pair of tensor legs a two-leg operator occupies inside M_n^(x)3.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Legs {
    L12,
    L13,
    L23,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SparseMatrix::zero(dim);
        for i in 1..=dim {
            m.entries.insert((i, i), Scalar::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Entries in (row, col) order; all values nonzero.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert!(
            row >= 1 && row <= self.dim && col >= 1 && col <= self.dim,
            "index ({row},{col}) out of range for dim {}",
            self.dim
        );
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &Scalar) {
        let sum = &self.get(row, col) + value;
        self.set(row, col, sum);
    }

    pub fn madd(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, rhs.dim, "madd dimension mismatch");
        let mut out = self.clone();
        for ((r, c), v) in &rhs.entries {
            out.add_to(*r, *c, v);
        }
        out
    }

    pub fn mneg(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.dim);
        for ((r, c), v) in &self.entries {
            out.entries.insert((*r, *c), -v);
        }
        out
    }

    pub fn msub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.madd(&rhs.mneg())
    }

    pub fn mscale(&self, s: &Scalar) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.dim);
        if s.is_zero() {
            return out;
        }
        for ((r, c), v) in &self.entries {
            let sv = v * s;
            if !sv.is_zero() {
                out.entries.insert((*r, *c), sv);
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        // index rhs rows once; the row sets touched per output row stay tiny
        let mut rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((r, c), v) in &rhs.entries {
            rows.entry(*r).or_default().push((*c, v));
        }
        let mut out = SparseMatrix::zero(self.dim);
        for ((r, k), va) in &self.entries {
            if let Some(row) = rows.get(k) {
                for (c, vb) in row {
                    out.add_to(*r, *c, &(va * *vb));
                }
            }
        }
        out
    }

    /// Entrywise map; drops entries that map to zero.
    pub fn map_entries<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.dim);
        for ((r, c), v) in &self.entries {
            let fv = f(v);
            if !fv.is_zero() {
                out.entries.insert((*r, *c), fv);
            }
        }
        out
    }

    pub fn kron(&self, rhs: &SparseMatrix) -> SparseMatrix {
        let (da, db) = (self.dim, rhs.dim);
        let mut out = SparseMatrix::zero(da * db);
        for ((i, j), va) in &self.entries {
            for ((k, l), vb) in &rhs.entries {
                let v = va * vb;
                if !v.is_zero() {
                    out.entries.insert(((i - 1) * db + k, (j - 1) * db + l), v);
                }
            }
        }
        out
    }

    /// Side length n of the tensor square, requiring dim = n^2.
    pub fn leg_size(&self) -> usize {
        let n = (1..).find(|n| n * n >= self.dim).unwrap();
        assert_eq!(n * n, self.dim, "dim {} is not a perfect square", self.dim);
        n
    }

    /// Embed a two-leg operator into M_n^(x)3 on the given pair of legs.
    pub fn embed(&self, legs: Legs, n: usize) -> SparseMatrix {
        assert_eq!(self.dim, n * n, "embed expects an operator on M_{n}^(x)2");
        let mut out = SparseMatrix::zero(n * n * n);
        for ((r, c), v) in &self.entries {
            let (i, k) = ((r - 1) / n + 1, (r - 1) % n + 1);
            let (j, l) = ((c - 1) / n + 1, (c - 1) % n + 1);
            for m in 1..=n {
                let (row, col) = match legs {
                    Legs::L12 => (
                        (i - 1) * n * n + (k - 1) * n + m,
                        (j - 1) * n * n + (l - 1) * n + m,
                    ),
                    Legs::L23 => (
                        (m - 1) * n * n + (i - 1) * n + k,
                        (m - 1) * n * n + (j - 1) * n + l,
                    ),
                    Legs::L13 => (
                        (i - 1) * n * n + (m - 1) * n + k,
                        (j - 1) * n * n + (m - 1) * n + l,
                    ),
                };
                out.entries.insert((row, col), v.clone());
            }
        }
        out
    }

    /// Flip both tensor legs: entry ((i,k),(j,l)) moves to ((k,i),(l,j)).
    pub fn flip21(&self) -> SparseMatrix {
        let n = self.leg_size();
        let mut out = SparseMatrix::zero(self.dim);
        for ((r, c), v) in &self.entries {
            let (i, k) = ((r - 1) / n + 1, (r - 1) % n + 1);
            let (j, l) = ((c - 1) / n + 1, (c - 1) % n + 1);
            out.entries
                .insert(((k - 1) * n + i, (l - 1) * n + j), v.clone());
        }
        out
    }

    /// Entrywise q -> q⁻¹.
    pub fn invert_q(&self) -> SparseMatrix {
        self.map_entries(|s| s.invert_q())
    }

    /// Entrywise evaluation at q = 1 (still a Scalar matrix, constants only).
    pub fn eval_at_one(&self) -> SparseMatrix {
        self.map_entries(|s| Scalar::from_rat(s.eval_at_one()))
    }

    /// Entrywise d/dh at 0 under q = e^h.
    pub fn d_dh_at_zero(&self) -> SparseMatrix {
        self.map_entries(|s| Scalar::from_rat(s.d_dh_at_zero()))
    }

    /// True if every entry is a constant (exponent-zero) Scalar.
    pub fn is_rational(&self) -> bool {
        self.entries.values().all(|v| v.as_rat().is_some())
    }
}

/// The flip P on M_n (x) M_n: P (x (x) y) P = y (x) x.
pub fn permutation(n: usize) -> SparseMatrix {
    let mut p = SparseMatrix::zero(n * n);
    for i in 1..=n {
        for k in 1..=n {
            p.set((i - 1) * n + k, (k - 1) * n + i, Scalar::one());
        }
    }
    p
}

impl Mul for &SparseMatrix {
    type Output = SparseMatrix;
    fn mul(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.matmul(rhs)
    }
}

impl Add for &SparseMatrix {
    type Output = SparseMatrix;
    fn add(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.madd(rhs)
    }
}

impl Neg for &SparseMatrix {
    type Output = SparseMatrix;
    fn neg(self) -> SparseMatrix {
        self.mneg()
    }
}

/// Scale by a rational constant.
pub fn rscale(m: &SparseMatrix, r: Rat) -> SparseMatrix {
    m.mscale(&Scalar::from_rat(r))
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    row: usize,
    col: usize,
    value: Scalar,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<EntryJson>,
}

/// JSON form: {"dim": d, "entries": [{row, col, value}, ...]} sorted by (row, col).
impl Serialize for SparseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|((r, c), v)| EntryJson {
                row: *r,
                col: *c,
                value: v.clone(),
            })
            .collect();
        MatrixJson {
            dim: self.dim,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let mut out = SparseMatrix::zero(raw.dim);
        for e in raw.entries {
            if e.row < 1 || e.row > raw.dim || e.col < 1 || e.col > raw.dim {
                return Err(D::Error::custom(format!(
                    "entry ({},{}) out of range for dim {}",
                    e.row, e.col, raw.dim
                )));
            }
            out.add_to(e.row, e.col, &e.value);
        }
        Ok(out)
    }
}

impl std::fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "SparseMatrix(dim={}, nnz={})", self.dim, self.nnz())?;
        for ((r, c), v) in &self.entries {
            writeln!(f, "  ({r},{c}) = {v}")?;
        }
        Ok(())
    }
}
