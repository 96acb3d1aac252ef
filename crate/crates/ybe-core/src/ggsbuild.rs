//! Construction of the quantum R-matrix attached to a triple and an
//! admissible Cartan part.
//!
//! The build is R = D (R_s + qhat * a~) D where D = q^(Cartan part),
//! R_s is the standard R-matrix and a~ is the twist-corrected nilpotent
//! part: each unit entry a of the bracket expansion acquires the factor
//! q^(a * eta) with eta = a c + c a + a^2 and c the halved skew Casimir.
//! On first use the builder reconstructs the stored reference matrix and
//! aborts if any normalisation has drifted.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::admissible::CartanPart;
use crate::bdtriples::{precedence_pairs, BDTriple};
use crate::exactring::{rat, Rat, Scalar};
use crate::rootdata::{c_plus, c_wedge, casimir_cartan, lowering, raising, Root};
use crate::tensorops::SparseMatrix;

/// The standard R-matrix on the tensor square: q at aligned diagonal pairs,
/// 1 on the rest of the diagonal, qhat strictly below.
pub fn standard_r(n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let idx = (i - 1) * n + j;
            m.set(idx, idx, if i == j { Scalar::q() } else { Scalar::one() });
        }
    }
    &m + &c_plus(n).mscale(&Scalar::qhat())
}

/// Diagonal matrix q^C for a diagonal coefficient matrix C.
pub fn diag_q_power(c: &CartanPart) -> SparseMatrix {
    let n = c.n();
    let mut m = SparseMatrix::zero(n * n);
    for i in 1..=n {
        for k in 1..=n {
            let idx = (i - 1) * n + k;
            m.set(idx, idx, Scalar::qpow(c.get(i, k).clone()));
        }
    }
    m
}

/// Unit-normalised nilpotent part: for every precedence pair alpha < beta,
/// sign * (e_-alpha (x) e_beta - e_beta (x) e_-alpha).
pub fn nilpotent_part(t: &BDTriple) -> SparseMatrix {
    let n = t.n();
    let mut a = SparseMatrix::zero(n * n);
    for p in precedence_pairs(t) {
        let em = lowering(n, p.lower);
        let ep = raising(n, p.upper);
        let term = &em.kron(&ep) + &-&ep.kron(&em);
        a = &a + &term.mscale(&Scalar::from_rat(rat(p.sign.into(), 1)));
    }
    a
}

/// Exponent matrix eta = a c + c a + a^2, with c the halved skew Casimir.
pub fn twist_exponents(t: &BDTriple) -> SparseMatrix {
    let a = nilpotent_part(t);
    let ch = c_wedge(t.n()).mscale(&Scalar::from_rat(rat(1, 2)));
    &(&(&a * &ch) + &(&ch * &a)) + &(&a * &a)
}

/// Twist-corrected nilpotent part a~: entrywise a q^(a * eta).
pub fn tilde_part(t: &BDTriple) -> SparseMatrix {
    let a = nilpotent_part(t);
    let eta = twist_exponents(t);
    let mut out = SparseMatrix::zero(a.dim());
    for (&(r, c), v) in a.entries() {
        let av = v.as_rat().expect("nilpotent part entries are rational");
        let ev = eta
            .get(r, c)
            .as_rat()
            .expect("twist exponents are rational");
        out.set(r, c, Scalar::monomial(av.clone(), &av * &ev));
    }
    out
}

/// Classical limit candidate: Cartan part + half the Cartan Casimir +
/// triangular Casimir half + nilpotent part.
pub fn classical_r(t: &BDTriple, c: &CartanPart) -> SparseMatrix {
    let n = t.n();
    let t0half = casimir_cartan(n).mscale(&Scalar::from_rat(rat(1, 2)));
    &(&c.to_diagonal_matrix() + &t0half) + &(&c_plus(n) + &nilpotent_part(t))
}

/// A fully built solution with the pieces needed by verification and export.
#[derive(Debug, Clone)]
pub struct QuantumBundle {
    pub triple: BDTriple,
    pub cartan: CartanPart,
    pub r: SparseMatrix,
    pub conjugated_tilde: SparseMatrix,
    pub classical_r: SparseMatrix,
}

fn build_bundle_unprobed(t: &BDTriple, c: &CartanPart) -> QuantumBundle {
    assert_eq!(t.n(), c.n(), "triple and Cartan part rank mismatch");
    let d = diag_q_power(c);
    let tilde = tilde_part(t);
    let inner = &standard_r(t.n()) + &tilde.mscale(&Scalar::qhat());
    QuantumBundle {
        triple: t.clone(),
        cartan: c.clone(),
        r: &(&d * &inner) * &d,
        conjugated_tilde: &(&d * &tilde) * &d,
        classical_r: classical_r(t, c),
    }
}

static PROBE: OnceLock<String> = OnceLock::new();

/// Rebuild the stored reference matrix once per process and compare
/// entrywise; abort on any drift.  Returns the outcome line for reports.
pub fn convention_probe() -> &'static str {
    PROBE.get_or_init(|| {
        let t = crate::paperdata::golden_triple();
        let c = crate::paperdata::golden_cartan();
        let built = build_bundle_unprobed(&t, &c);
        let stored = crate::paperdata::golden_matrix();
        assert!(
            &built.r == stored,
            "builder conventions drifted from the stored reference matrix"
        );
        format!(
            "convention probe: rebuilt reference matrix matches stored copy ({} entries)",
            stored.nnz()
        )
    })
}

/// Build the R-matrix bundle of a triple at a given Cartan part.
pub fn build_bundle(t: &BDTriple, c: &CartanPart) -> QuantumBundle {
    convention_probe();
    build_bundle_unprobed(t, c)
}

/// Standard multiparameter matrix: the trivial triple twisted by a Cartan
/// part, q^w R_s q^w with no nilpotent correction.
pub fn multiparam_r(c: &CartanPart) -> SparseMatrix {
    build_bundle(&BDTriple::trivial(c.n()), c).r
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("missing entry at {0:?}")]
    Missing((usize, usize)),
    #[error("entry at {0:?} is not a monomial")]
    NotMonomial((usize, usize)),
    #[error("entry pair for roots {0:?} < {1:?} is not a balanced wedge")]
    Unbalanced(Root, Root),
    #[error("entries remain after removing all wedge pairs: {0:?}")]
    Leftover(Vec<(usize, usize)>),
}

/// Decompose the conjugated a~ into wedge terms
/// sign * (q^-c e_-alpha (x) e_beta - q^c e_beta (x) e_-alpha), returning
/// (alpha, beta) -> (c, sign) for every precedence pair.
pub fn wedge_decomposition(
    conj_tilde: &SparseMatrix,
    t: &BDTriple,
) -> Result<BTreeMap<(Root, Root), (Rat, i8)>, DecomposeError> {
    let n = t.n();
    let mut remaining: BTreeMap<(usize, usize), Scalar> = conj_tilde
        .entries()
        .map(|(&k, v)| (k, v.clone()))
        .collect();
    let mut out = BTreeMap::new();
    let monomial = |v: &Scalar, k: (usize, usize)| -> Result<(Rat, Rat), DecomposeError> {
        let mut it = v.terms();
        match (it.next(), it.next()) {
            (Some((e, c)), None) => Ok((e.clone(), c.clone())),
            _ => Err(DecomposeError::NotMonomial(k)),
        }
    };
    for p in precedence_pairs(t) {
        let em = (p.lower.1 + 1, p.lower.0);
        let ep = (p.upper.0, p.upper.1 + 1);
        let k1 = ((em.0 - 1) * n + ep.0, (em.1 - 1) * n + ep.1);
        let k2 = ((ep.0 - 1) * n + em.0, (ep.1 - 1) * n + em.1);
        let v1 = remaining.remove(&k1).ok_or(DecomposeError::Missing(k1))?;
        let v2 = remaining.remove(&k2).ok_or(DecomposeError::Missing(k2))?;
        let (e1, c1) = monomial(&v1, k1)?;
        let (e2, c2) = monomial(&v2, k2)?;
        let s = rat(p.sign.into(), 1);
        if c1 != s || c2 != -&s || e1 != -&e2 {
            return Err(DecomposeError::Unbalanced(p.lower, p.upper));
        }
        out.insert((p.lower, p.upper), (e2, p.sign));
    }
    if !remaining.is_empty() {
        return Err(DecomposeError::Leftover(remaining.into_keys().collect()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::solve_family;

    fn parse(s: &str) -> BDTriple {
        s.parse().unwrap()
    }

    #[test]
    fn standard_r_small() {
        // [PAPER] the n = 2 standard matrix: diag(q, 1, 1, q) + qhat at (3,2)
        let r = standard_r(2);
        assert_eq!(r.get(1, 1), Scalar::q());
        assert_eq!(r.get(2, 2), Scalar::one());
        assert_eq!(r.get(3, 3), Scalar::one());
        assert_eq!(r.get(4, 4), Scalar::q());
        assert_eq!(r.get(3, 2), Scalar::qhat());
        assert_eq!(r.nnz(), 5);
        // [TRIVIAL] nnz pattern for general n: n^2 diagonal + n(n-1)/2 below
        assert_eq!(standard_r(5).nnz(), 25 + 10);
    }

    #[test]
    fn diag_power_example() {
        // [DERIVED] c * e11 ^ e22 at n = 2 exponentiates to
        // diag(1, q^(c/2), q^(-c/2), 1)
        let mut c = CartanPart::zero(2);
        c.add(1, 2, &rat(3, 14));
        c.add(2, 1, &rat(-3, 14));
        let d = diag_q_power(&c);
        assert_eq!(d.get(1, 1), Scalar::one());
        assert_eq!(d.get(2, 2), Scalar::qpow(rat(3, 14)));
        assert_eq!(d.get(3, 3), Scalar::qpow(rat(-3, 14)));
        assert_eq!(d.get(4, 4), Scalar::one());
    }

    #[test]
    fn conjugated_standard_matrix() {
        // [DERIVED] trivial triple at n = 2 with coefficient 3/7:
        // diag(q, q^(3/7), q^(-3/7), q) + qhat at (3,2)
        let t = BDTriple::trivial(2);
        let mut c = CartanPart::zero(2);
        c.add(1, 2, &rat(3, 14));
        c.add(2, 1, &rat(-3, 14));
        let b = build_bundle(&t, &c);
        assert_eq!(b.r.get(1, 1), Scalar::q());
        assert_eq!(b.r.get(2, 2), Scalar::qpow(rat(3, 7)));
        assert_eq!(b.r.get(3, 3), Scalar::qpow(rat(-3, 7)));
        assert_eq!(b.r.get(4, 4), Scalar::q());
        assert_eq!(b.r.get(3, 2), Scalar::qhat());
        assert_eq!(b.r.nnz(), 5);
        assert_eq!(b.conjugated_tilde.nnz(), 0);
        // the trivial-triple shorthand builds the same matrix
        assert_eq!(multiparam_r(&c), b.r);
        assert_eq!(multiparam_r(&CartanPart::zero(2)), standard_r(2));
    }

    #[test]
    fn nilpotent_part_entries() {
        // [DERIVED] descending-shift triple: 20 entries, all +-1, summing to 0
        let t = parse("n=5;g1=2,3,4;g2=1,2,3;tau=2:1,3:2,4:3");
        let a = nilpotent_part(&t);
        assert_eq!(a.nnz(), 20);
        assert_eq!(a.get(11, 7), Scalar::one());
        assert_eq!(a.get(3, 7), -&Scalar::one());
        let mut sum = Scalar::zero();
        for (_, v) in a.entries() {
            assert!(v.as_rat().is_some());
            sum = &sum + v;
        }
        assert_eq!(sum, Scalar::zero());
        // [DERIVED] orientation-reversing pair of the two-string triple
        let t2 = parse("n=5;g1=3,4;g2=1,2;tau=3:2,4:1");
        let a2 = nilpotent_part(&t2);
        assert_eq!(a2.nnz(), 6);
        assert_eq!(a2.get(21, 13), -&Scalar::one());
        assert_eq!(a2.get(5, 13), Scalar::one());
    }

    #[test]
    fn tilde_exponents_are_half_integral() {
        // [DERIVED] raw twist exponents for the descending-shift triple lie in
        // (1/2) Z, spanning -1 ..= 1
        let t = parse("n=5;g1=2,3,4;g2=1,2,3;tau=2:1,3:2,4:3");
        let tilde = tilde_part(&t);
        assert_eq!(tilde.nnz(), 20);
        let mut exps = std::collections::BTreeSet::new();
        for (_, v) in tilde.entries() {
            assert_eq!(v.num_terms(), 1);
            let (e, _) = v.terms().next().unwrap();
            exps.insert(e.clone());
        }
        assert!(exps.contains(&rat(-1, 1)));
        assert!(exps.contains(&rat(1, 2)));
        assert!(exps.iter().all(|e| (e * rat(2, 1)).is_integer()));
    }

    #[test]
    fn wedge_decomposition_signs() {
        // [DERIVED] the two-string triple decomposes into exactly three wedge
        // terms with signs +, -, +
        let t = parse("n=5;g1=3,4;g2=1,2;tau=3:2,4:1");
        let f = solve_family(&t).unwrap();
        let c = f.cartan_part(&[rat(0, 1)]).unwrap();
        let b = build_bundle(&t, &c);
        let w = wedge_decomposition(&b.conjugated_tilde, &t).unwrap();
        let signs: Vec<((Root, Root), i8)> =
            w.iter().map(|(&k, &(_, s))| (k, s)).collect();
        assert_eq!(
            signs,
            vec![
                (((3, 3), (2, 2)), 1),
                (((3, 4), (1, 2)), -1),
                (((4, 4), (1, 1)), 1),
            ]
        );
        // decomposition must consume everything: a corrupted matrix fails
        let mut bad = b.conjugated_tilde.clone();
        bad.set(1, 2, Scalar::one());
        assert!(matches!(
            wedge_decomposition(&bad, &t),
            Err(DecomposeError::Leftover(_))
        ));
    }

    #[test]
    fn probe_is_stable() {
        // [TRIVIAL] the probe is memoised and repeat builds agree
        let line = convention_probe();
        assert!(line.contains("matches"));
        assert_eq!(convention_probe(), line);
    }
}
