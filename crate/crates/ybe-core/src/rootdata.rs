//! Root-system data for sl(n).
//!
//! Positive roots of A_{n-1} are encoded as intervals `(i, j)` of simple-root
//! indices, `1 <= i <= j <= n-1`; the interval `(i, j)` is the root
//! `alpha_i + ... + alpha_j`, whose raising vector is the matrix unit
//! `e_{i, j+1}`.  All matrices live on the tensor square (dimension n^2)
//! unless stated otherwise.

use crate::exactring::{rat, Scalar};
use crate::tensorops::SparseMatrix;

/// A positive root, stored as a closed interval of simple-root indices.
pub type Root = (usize, usize);

/// All positive roots of sl(n) in lexicographic order.
pub fn positive_roots(n: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

/// The n-by-n matrix unit e_{ij}.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n);
    m.set(i, j, Scalar::one());
    m
}

/// Raising vector e_alpha = e_{i, j+1} for the interval root (i, j).
pub fn raising(n: usize, root: Root) -> SparseMatrix {
    matrix_unit(n, root.0, root.1 + 1)
}

/// Lowering vector e_{-alpha} = e_{j+1, i} for the interval root (i, j).
pub fn lowering(n: usize, root: Root) -> SparseMatrix {
    matrix_unit(n, root.1 + 1, root.0)
}

/// Coroot h_i = e_ii - e_{i+1,i+1} for a simple root index.
pub fn cartan_h(n: usize, i: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n);
    m.set(i, i, Scalar::one());
    m.set(i + 1, i + 1, -&Scalar::one());
    m
}

/// Inner product of two simple roots of A_{n-1} (the Cartan matrix entry).
pub fn gram(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// Inner product of two interval roots, via alpha_(a,b) = eps_a - eps_{b+1}.
pub fn root_gram(a: Root, b: Root) -> i64 {
    let d = |x: usize, y: usize| i64::from(x == y);
    d(a.0, b.0) - d(a.0, b.1 + 1) - d(a.1 + 1, b.0) + d(a.1 + 1, b.1 + 1)
}

/// Trace of a square matrix.
pub fn trace(m: &SparseMatrix) -> Scalar {
    let mut s = Scalar::zero();
    for (&(r, c), v) in m.entries() {
        if r == c {
            s = &s + v;
        }
    }
    s
}

/// The Casimir element t = sum_{ij} e_ij (x) e_ji - (1/n) I (x) I.
pub fn casimir(n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n * n);
    for i in 1..=n {
        for j in 1..=n {
            m.add_to((i - 1) * n + j, (j - 1) * n + i, &Scalar::one());
        }
    }
    &m + &SparseMatrix::identity(n * n).mscale(&Scalar::from_rat(rat(-1, n as i64)))
}

/// Cartan part t0 = sum_i e_ii (x) e_ii - (1/n) I (x) I of the Casimir.
pub fn casimir_cartan(n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n * n);
    for i in 1..=n {
        m.add_to((i - 1) * n + i, (i - 1) * n + i, &Scalar::one());
    }
    &m + &SparseMatrix::identity(n * n).mscale(&Scalar::from_rat(rat(-1, n as i64)))
}

/// c_plus = sum_{alpha > 0} e_{-alpha} (x) e_alpha, the strictly triangular
/// half of the Casimir with lowering vectors on the first leg.
pub fn c_plus(n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n * n);
    for root in positive_roots(n) {
        m = &m + &lowering(n, root).kron(&raising(n, root));
    }
    m
}

/// Antisymmetrised triangular part c_plus - flip(c_plus); with the factor 1/2
/// this is the skew half of t - t0.
pub fn c_wedge(n: usize) -> SparseMatrix {
    let cp = c_plus(n);
    &cp + &-&cp.flip21()
}
