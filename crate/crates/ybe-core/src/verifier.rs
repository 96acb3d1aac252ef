//! Exact verification of the quantum and classical identities.
//!
//! Everything is checked with zero tolerance: a residual matrix is computed
//! in exact arithmetic and compared against zero.  The triple products on
//! the tensor cube dominate the cost, so those products are evaluated in row
//! blocks across threads; `YBE_THREADS` caps the thread count and the result
//! is independent of it.

use std::collections::BTreeMap;

use crate::exactring::{rat, Rat, Scalar};
use crate::ggsbuild::QuantumBundle;
use crate::rootdata::casimir;
use crate::tensorops::{permutation, Legs, SparseMatrix};

fn thread_count() -> usize {
    std::env::var("YBE_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
}

/// Sparse product computed in row blocks across threads.  Rows of the left
/// factor are partitioned, partial rows are computed independently and the
/// result is reassembled in row order, so the thread count never changes
/// the output.
pub fn par_matmul(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    assert_eq!(a.dim(), b.dim());
    let mut a_rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
    for (&(r, c), v) in a.entries() {
        a_rows.entry(r).or_default().push((c, v));
    }
    let mut b_rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
    for (&(r, c), v) in b.entries() {
        b_rows.entry(r).or_default().push((c, v));
    }
    let rows: Vec<(usize, Vec<(usize, &Scalar)>)> = a_rows.into_iter().collect();
    let nt = thread_count().min(rows.len().max(1));
    let chunk = rows.len().div_ceil(nt.max(1)).max(1);
    let pieces = std::thread::scope(|s| {
        let handles: Vec<_> = rows
            .chunks(chunk)
            .map(|block| {
                let b_rows = &b_rows;
                s.spawn(move || {
                    let mut out: Vec<((usize, usize), Scalar)> = Vec::new();
                    for (r, arow) in block {
                        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                        for (k, av) in arow {
                            if let Some(brow) = b_rows.get(k) {
                                for (c, bv) in brow {
                                    let prod = *av * *bv;
                                    match acc.get_mut(c) {
                                        Some(x) => *x = &*x + &prod,
                                        None => {
                                            acc.insert(*c, prod);
                                        }
                                    }
                                }
                            }
                        }
                        for (c, v) in acc {
                            if v != Scalar::zero() {
                                out.push(((*r, c), v));
                            }
                        }
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut m = SparseMatrix::zero(a.dim());
    for piece in pieces {
        for ((r, c), v) in piece {
            m.set(r, c, v);
        }
    }
    m
}

/// R12 R13 R23 - R23 R13 R12 on the tensor cube.
pub fn qybe_residual(r: &SparseMatrix) -> SparseMatrix {
    let n = r.leg_size();
    let r12 = r.embed(Legs::L12, n);
    let r13 = r.embed(Legs::L13, n);
    let r23 = r.embed(Legs::L23, n);
    let lhs = par_matmul(&par_matmul(&r12, &r13), &r23);
    let rhs = par_matmul(&par_matmul(&r23, &r13), &r12);
    &lhs + &-&rhs
}

pub fn check_qybe(r: &SparseMatrix) -> bool {
    qybe_residual(r).nnz() == 0
}

/// (PR - q)(PR + 1/q) on the tensor square.
pub fn hecke_residual(r: &SparseMatrix) -> SparseMatrix {
    let n = r.leg_size();
    let p = permutation(n);
    let pr = &p * r;
    let id = SparseMatrix::identity(n * n);
    let x = &pr + &id.mscale(&-&Scalar::q());
    let y = &pr + &id.mscale(&Scalar::qpow(rat(-1, 1)));
    &x * &y
}

pub fn check_hecke(r: &SparseMatrix) -> bool {
    hecke_residual(r).nnz() == 0
}

/// [r12, r13] + [r12, r23] + [r13, r23] on the tensor cube.
pub fn cybe_residual(r: &SparseMatrix) -> SparseMatrix {
    let n = r.leg_size();
    let r12 = r.embed(Legs::L12, n);
    let r13 = r.embed(Legs::L13, n);
    let r23 = r.embed(Legs::L23, n);
    let comm = |x: &SparseMatrix, y: &SparseMatrix| &par_matmul(x, y) + &-&par_matmul(y, x);
    &(&comm(&r12, &r13) + &comm(&r12, &r23)) + &comm(&r13, &r23)
}

pub fn check_cybe(r: &SparseMatrix) -> bool {
    cybe_residual(r).nnz() == 0
}

/// r + flip(r) - t: zero exactly when the symmetric part is the Casimir.
pub fn nonunitarity_residual(r: &SparseMatrix) -> SparseMatrix {
    let n = r.leg_size();
    &(r + &r.flip21()) + &-&casimir(n)
}

pub fn check_nonunitarity(r: &SparseMatrix) -> bool {
    nonunitarity_residual(r).nnz() == 0
}

/// Entrywise derivative in h at h = 0 (q = e^h), as a rational matrix.
pub fn semiclassical_limit(r: &SparseMatrix) -> SparseMatrix {
    r.d_dh_at_zero()
}

/// rho + flip(rho) - (2t + (2/n) I) for rho the semiclassical limit.
pub fn semiclassical_residual(r: &SparseMatrix) -> SparseMatrix {
    let n = r.leg_size();
    let rho = semiclassical_limit(r);
    let target = &casimir(n).mscale(&Scalar::from_rat(rat(2, 1)))
        + &SparseMatrix::identity(n * n).mscale(&Scalar::from_rat(rat(2, n as i64)));
    &(&rho + &rho.flip21()) + &-&target
}

pub fn check_semiclassical(r: &SparseMatrix) -> bool {
    semiclassical_residual(r).nnz() == 0
}

fn antisym(m: &SparseMatrix) -> SparseMatrix {
    (m + &-&m.flip21()).mscale(&Scalar::from_rat(rat(1, 2)))
}

/// The constant kappa with antisym(rho) = kappa * antisym(classical), if the
/// two skew parts are exactly proportional.
pub fn semiclassical_ratio(r: &SparseMatrix, classical: &SparseMatrix) -> Option<Rat> {
    let rho = semiclassical_limit(r);
    let ar = antisym(classical);
    let arho = antisym(&rho);
    let (&(r0, c0), v0) = ar.entries().next()?;
    let kappa = arho.get(r0, c0).as_rat()? / v0.as_rat()?;
    if arho == ar.mscale(&Scalar::from_rat(kappa.clone())) {
        Some(kappa)
    } else {
        None
    }
}

/// Joint certificate for a built bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub qybe: bool,
    pub hecke: bool,
    pub cybe: bool,
    pub nonunitarity: bool,
    pub semiclassical: bool,
    pub ratio: Option<Rat>,
}

impl Certificate {
    pub fn all_passed(&self) -> bool {
        self.qybe
            && self.hecke
            && self.cybe
            && self.nonunitarity
            && self.semiclassical
            && self.ratio.is_some()
    }
}

/// Run the full suite on a bundle: quantum checks on R, classical checks on
/// the classical limit candidate, and the bridge between them.
pub fn certify(b: &QuantumBundle) -> Certificate {
    Certificate {
        qybe: check_qybe(&b.r),
        hecke: check_hecke(&b.r),
        cybe: check_cybe(&b.classical_r),
        nonunitarity: check_nonunitarity(&b.classical_r),
        semiclassical: check_semiclassical(&b.r),
        ratio: semiclassical_ratio(&b.r, &b.classical_r),
    }
}
