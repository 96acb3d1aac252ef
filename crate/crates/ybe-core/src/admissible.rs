//! Admissible Cartan parts for a triple.
//!
//! The Cartan component of a solution is a skew combination of the coroots;
//! we work in the wedge basis h_k ^ h_l (k < l simple indices) with the
//! half-normalisation h ^ h' = (h (x) h' - h' (x) h)/2.  For a triple the
//! admissibility constraints are, for every b in Gamma1 with a = tau(b) and
//! every diagonal slot j:
//!
//! ```text
//! (m_{a,j} - m_{a+1,j}) + (m_{j,b} - m_{j,b+1}) = 0,
//! ```
//!
//! where m is the full diagonal coefficient matrix of r0 = wedge part plus
//! half the Cartan Casimir.  Solving the affine system yields a particular
//! point and a free-direction basis; the dimension is C(d, 2) where d counts
//! simple roots outside Gamma1.

use num::Zero;

use crate::bdtriples::BDTriple;
use crate::exactring::{rat, Rat, Scalar};
use crate::tensorops::SparseMatrix;

/// Ordered wedge-basis index pairs (k, l), k < l, of simple-root indices.
pub fn wedge_basis(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..n {
        for l in (k + 1)..n {
            out.push((k, l));
        }
    }
    out
}

/// Diagonal coefficient matrix: the element sum m_ab e_aa (x) e_bb, stored
/// densely with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanPart {
    n: usize,
    m: Vec<Vec<Rat>>,
}

impl CartanPart {
    pub fn zero(n: usize) -> Self {
        CartanPart {
            n,
            m: vec![vec![Rat::zero(); n + 1]; n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &Rat {
        &self.m[a][b]
    }

    pub fn add(&mut self, a: usize, b: usize, v: &Rat) {
        self.m[a][b] = &self.m[a][b] + v;
    }

    /// Half-normalised coroot wedge h_k ^ h_l.
    pub fn coroot_wedge(n: usize, k: usize, l: usize) -> Self {
        assert!(k < l && l < n);
        let mut w = CartanPart::zero(n);
        let h = |i: usize| [(i, rat(1, 1)), (i + 1, rat(-1, 1))];
        for (a, ca) in h(k) {
            for (b, cb) in h(l) {
                let v = &ca * &cb * rat(1, 2);
                w.add(a, b, &v);
                w.add(b, a, &-&v);
            }
        }
        w
    }

    /// Half-normalised wedge of two diagonal matrix units e_aa ^ e_bb.
    pub fn diag_wedge(n: usize, a: usize, b: usize) -> Self {
        let mut w = CartanPart::zero(n);
        w.add(a, b, &rat(1, 2));
        w.add(b, a, &rat(-1, 2));
        w
    }

    /// Combination sum_i coeffs[i] * (h_k ^ h_l) over the wedge basis.
    pub fn from_wedge_coeffs(n: usize, coeffs: &[Rat]) -> Self {
        let basis = wedge_basis(n);
        assert_eq!(coeffs.len(), basis.len());
        let mut out = CartanPart::zero(n);
        for ((k, l), c) in basis.into_iter().zip(coeffs) {
            let w = CartanPart::coroot_wedge(n, k, l);
            for a in 1..=n {
                for b in 1..=n {
                    out.add(a, b, &(c * w.get(a, b)));
                }
            }
        }
        out
    }

    /// Diagonal coefficients of half the Cartan Casimir: ((a = b) - 1/n)/2.
    pub fn half_casimir_cartan(n: usize) -> Self {
        let mut out = CartanPart::zero(n);
        for a in 1..=n {
            for b in 1..=n {
                let v = if a == b {
                    rat(1, 2) - rat(1, 2 * n as i64)
                } else {
                    -rat(1, 2 * n as i64)
                };
                out.add(a, b, &v);
            }
        }
        out
    }

    /// The element itself as a rational diagonal matrix on the tensor square.
    pub fn to_diagonal_matrix(&self) -> SparseMatrix {
        let n = self.n;
        let mut m = SparseMatrix::zero(n * n);
        for a in 1..=n {
            for b in 1..=n {
                let v = self.get(a, b);
                if !v.is_zero() {
                    let idx = (a - 1) * n + b;
                    m.set(idx, idx, Scalar::from_rat(v.clone()));
                }
            }
        }
        m
    }

    pub fn is_antisymmetric(&self) -> bool {
        (1..=self.n).all(|a| (1..=self.n).all(|b| self.get(a, b) == &-self.get(b, a)))
    }
}

/// The affine constraint system of a triple over the wedge basis.
pub struct AdmissibleSystem {
    pub basis: Vec<(usize, usize)>,
    pub rows: Vec<Vec<Rat>>,
    pub rhs: Vec<Rat>,
}

/// Build the admissibility equations for a triple.
pub fn admissibility_system(t: &BDTriple) -> AdmissibleSystem {
    let n = t.n();
    let basis = wedge_basis(n);
    let wedges: Vec<CartanPart> = basis
        .iter()
        .map(|&(k, l)| CartanPart::coroot_wedge(n, k, l))
        .collect();
    let t0 = CartanPart::half_casimir_cartan(n);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let comb = |m: &CartanPart, a: usize, b: usize, j: usize| {
        m.get(a, j) - m.get(a + 1, j) + m.get(j, b) - m.get(j, b + 1)
    };
    for (&b, &a) in t.tau() {
        for j in 1..=n {
            rows.push(wedges.iter().map(|w| comb(w, a, b, j)).collect());
            rhs.push(-comb(&t0, a, b, j));
        }
    }
    AdmissibleSystem { basis, rows, rhs }
}

/// Residual of the equations at a wedge-coefficient vector (all zero iff the
/// point is admissible).
pub fn admissibility_residual(t: &BDTriple, coeffs: &[Rat]) -> Vec<Rat> {
    let sys = admissibility_system(t);
    assert_eq!(coeffs.len(), sys.basis.len());
    sys.rows
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            row.iter()
                .zip(coeffs)
                .fold(-b, |acc, (r, c)| acc + r * c)
        })
        .collect()
}

/// Exact reduced row echelon form; returns pivot columns.
fn rref(a: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..a[i].len() {
                    let delta = &f * &a[r][k];
                    a[i][k] = &a[i][k] - &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of an exact rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    rref(&mut a, ncols).len()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AdmissibleError {
    #[error("the admissibility system is inconsistent")]
    Inconsistent,
    #[error("expected {expected} parameter values, got {got}")]
    Arity { expected: usize, got: usize },
}

/// The solution set of the admissibility system: an affine family
/// particular + span(directions) in wedge coordinates.
#[derive(Debug, Clone)]
pub struct AdmissibleFamily {
    triple: BDTriple,
    basis: Vec<(usize, usize)>,
    particular: Vec<Rat>,
    directions: Vec<Vec<Rat>>,
    free_pairs: Vec<(usize, usize)>,
}

impl AdmissibleFamily {
    pub fn triple(&self) -> &BDTriple {
        &self.triple
    }

    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn particular(&self) -> &[Rat] {
        &self.particular
    }

    pub fn directions(&self) -> &[Vec<Rat>] {
        &self.directions
    }

    /// Wedge pairs indexing the free directions, in order.
    pub fn free_pairs(&self) -> &[(usize, usize)] {
        &self.free_pairs
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// particular + sum values[i] * directions[i].
    pub fn instantiate(&self, values: &[Rat]) -> Result<Vec<Rat>, AdmissibleError> {
        if values.len() != self.dim() {
            return Err(AdmissibleError::Arity {
                expected: self.dim(),
                got: values.len(),
            });
        }
        let mut out = self.particular.clone();
        for (v, dir) in values.iter().zip(&self.directions) {
            for (o, d) in out.iter_mut().zip(dir) {
                *o = &*o + &(v * d);
            }
        }
        Ok(out)
    }

    /// The Cartan part at given parameter values.
    pub fn cartan_part(&self, values: &[Rat]) -> Result<CartanPart, AdmissibleError> {
        Ok(CartanPart::from_wedge_coeffs(
            self.triple.n(),
            &self.instantiate(values)?,
        ))
    }

    /// Does a wedge-coefficient vector solve the equations?
    pub fn contains(&self, coeffs: &[Rat]) -> bool {
        admissibility_residual(&self.triple, coeffs)
            .iter()
            .all(Rat::is_zero)
    }

    /// Is a direction vector tangent to the family (in the homogeneous
    /// solution space)?
    pub fn contains_direction(&self, dir: &[Rat]) -> bool {
        let sys = admissibility_system(&self.triple);
        assert_eq!(dir.len(), sys.basis.len());
        sys.rows
            .iter()
            .all(|row| row.iter().zip(dir).fold(Rat::zero(), |a, (r, d)| a + r * d).is_zero())
    }
}

/// Solve the admissibility system of a triple exactly.
pub fn solve_family(t: &BDTriple) -> Result<AdmissibleFamily, AdmissibleError> {
    let sys = admissibility_system(t);
    let nvar = sys.basis.len();
    let mut aug: Vec<Vec<Rat>> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, nvar);
    for row in aug.iter().skip(pivots.len()) {
        if !row[nvar].is_zero() {
            return Err(AdmissibleError::Inconsistent);
        }
    }
    let mut particular = vec![Rat::zero(); nvar];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = aug[i][nvar].clone();
    }
    let free: Vec<usize> = (0..nvar).filter(|c| !pivots.contains(c)).collect();
    let mut directions = Vec::new();
    for &fc in &free {
        let mut v = vec![Rat::zero(); nvar];
        v[fc] = rat(1, 1);
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -&aug[i][fc];
        }
        directions.push(v);
    }
    Ok(AdmissibleFamily {
        triple: t.clone(),
        free_pairs: free.iter().map(|&c| sys.basis[c]).collect(),
        basis: sys.basis,
        particular,
        directions,
    })
}

/// Expected family dimension: C(d, 2) with d the simple roots outside Gamma1.
pub fn expected_dim(t: &BDTriple) -> usize {
    let d = (t.n() - 1) - t.size();
    d * d.saturating_sub(1) / 2
}
