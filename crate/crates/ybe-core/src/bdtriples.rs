//! Combinatorial triples (Gamma1, Gamma2, tau) on the A_{n-1} diagram.
//!
//! A triple consists of two subsets of the simple-root indices together with
//! a bijection tau: Gamma1 -> Gamma2 that preserves the gram pairing and is
//! nilpotent: iterating tau out of Gamma1 must terminate for every start
//! point.  Triples are enumerated exhaustively, grouped into orbits under the
//! symmetry group generated by inversion and the diagram flip, and extended
//! to signed maps on all interval roots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::rootdata::{gram, positive_roots, Root};

/// Rejection reasons for triple construction and parsing.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("simple-root index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("tau domain does not equal gamma1")]
    DomainMismatch,
    #[error("tau image does not equal gamma2")]
    ImageMismatch,
    #[error("tau is not injective")]
    NotInjective,
    #[error("tau does not preserve the gram pairing")]
    NotIsometry,
    #[error("tau is not nilpotent (some orbit never leaves gamma1)")]
    NotNilpotent,
    #[error("malformed triple encoding: {0}")]
    Parse(String),
}

/// An admissible diagram triple for sl(n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BDTriple {
    n: usize,
    gamma1: BTreeSet<usize>,
    gamma2: BTreeSet<usize>,
    tau: BTreeMap<usize, usize>,
}

impl BDTriple {
    /// Build and fully validate a triple.
    pub fn new(
        n: usize,
        gamma1: BTreeSet<usize>,
        gamma2: BTreeSet<usize>,
        tau: BTreeMap<usize, usize>,
    ) -> Result<Self, TripleError> {
        assert!(n >= 2, "rank must be at least 1");
        for &i in gamma1.iter().chain(gamma2.iter()) {
            if i == 0 || i >= n {
                return Err(TripleError::IndexOutOfRange(i, n - 1));
            }
        }
        if tau.keys().copied().collect::<BTreeSet<_>>() != gamma1 {
            return Err(TripleError::DomainMismatch);
        }
        let image: BTreeSet<usize> = tau.values().copied().collect();
        if image.len() != tau.len() {
            return Err(TripleError::NotInjective);
        }
        if image != gamma2 {
            return Err(TripleError::ImageMismatch);
        }
        let t = BDTriple { n, gamma1, gamma2, tau };
        if !t.preserves_gram() {
            return Err(TripleError::NotIsometry);
        }
        if !t.is_nilpotent() {
            return Err(TripleError::NotNilpotent);
        }
        Ok(t)
    }

    /// The triple with empty subsets (the multiparameter family).
    pub fn trivial(n: usize) -> Self {
        BDTriple {
            n,
            gamma1: BTreeSet::new(),
            gamma2: BTreeSet::new(),
            tau: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma1(&self) -> &BTreeSet<usize> {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &BTreeSet<usize> {
        &self.gamma2
    }

    pub fn tau(&self) -> &BTreeMap<usize, usize> {
        &self.tau
    }

    pub fn size(&self) -> usize {
        self.gamma1.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.gamma1.is_empty()
    }

    fn preserves_gram(&self) -> bool {
        self.gamma1.iter().all(|&a| {
            self.gamma1
                .iter()
                .all(|&b| gram(self.tau[&a], self.tau[&b]) == gram(a, b))
        })
    }

    fn is_nilpotent(&self) -> bool {
        self.gamma1.iter().all(|&a| {
            let mut x = a;
            for _ in 0..=self.n {
                match self.tau.get(&x) {
                    Some(&y) => x = y,
                    None => return true,
                }
            }
            false
        })
    }

    /// Sort key: by size, then gamma1, gamma2 and the tau graph.
    fn key(&self) -> (usize, Vec<usize>, Vec<usize>, Vec<(usize, usize)>) {
        (
            self.size(),
            self.gamma1.iter().copied().collect(),
            self.gamma2.iter().copied().collect(),
            self.tau.iter().map(|(&a, &b)| (a, b)).collect(),
        )
    }

    /// Swap the two subsets and invert tau.
    pub fn act_inverse(&self) -> BDTriple {
        BDTriple {
            n: self.n,
            gamma1: self.gamma2.clone(),
            gamma2: self.gamma1.clone(),
            tau: self.tau.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }

    /// Conjugate by the diagram flip i -> n - i.
    pub fn act_flip(&self) -> BDTriple {
        let s = |i: usize| self.n - i;
        BDTriple {
            n: self.n,
            gamma1: self.gamma1.iter().map(|&i| s(i)).collect(),
            gamma2: self.gamma2.iter().map(|&i| s(i)).collect(),
            tau: self.tau.iter().map(|(&a, &b)| (s(a), s(b))).collect(),
        }
    }

    /// The symmetry orbit of this triple (at most four members), sorted.
    pub fn orbit(&self) -> Vec<BDTriple> {
        let mut orb = vec![
            self.clone(),
            self.act_inverse(),
            self.act_flip(),
            self.act_inverse().act_flip(),
        ];
        orb.sort_by_key(|t| t.key());
        orb.dedup();
        orb
    }
}

impl PartialOrd for BDTriple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BDTriple {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for BDTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<usize>| {
            s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        let tau = self
            .tau
            .iter()
            .map(|(a, b)| format!("{a}:{b}"))
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            "n={};g1={};g2={};tau={}",
            self.n,
            join(&self.gamma1),
            join(&self.gamma2),
            tau
        )
    }
}

impl FromStr for BDTriple {
    type Err = TripleError;

    /// Parse the `n=5;g1=2,3,4;g2=1,2,3;tau=2:1,3:2,4:3` encoding.
    fn from_str(s: &str) -> Result<Self, TripleError> {
        let bad = |m: &str| TripleError::Parse(format!("{m} in {s:?}"));
        let mut fields = BTreeMap::new();
        for part in s.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad("missing '='"))?;
            if fields.insert(k.trim(), v.trim()).is_some() {
                return Err(bad("duplicate field"));
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad("missing field"));
        let n: usize = get("n")?
            .parse()
            .map_err(|_| bad("bad rank"))?;
        if n < 2 {
            return Err(bad("rank must be at least 2"));
        }
        let parse_set = |v: &str| -> Result<BTreeSet<usize>, TripleError> {
            if v.is_empty() {
                return Ok(BTreeSet::new());
            }
            v.split(',')
                .map(|x| x.trim().parse().map_err(|_| bad("bad index")))
                .collect()
        };
        let g1 = parse_set(get("g1")?)?;
        let g2 = parse_set(get("g2")?)?;
        let tau_str = get("tau")?;
        let mut tau = BTreeMap::new();
        if !tau_str.is_empty() {
            for pair in tau_str.split(',') {
                let (a, b) = pair
                    .split_once(':')
                    .ok_or_else(|| bad("missing ':' in tau"))?;
                let a: usize = a.trim().parse().map_err(|_| bad("bad tau key"))?;
                let b: usize = b.trim().parse().map_err(|_| bad("bad tau value"))?;
                if tau.insert(a, b).is_some() {
                    return Err(bad("duplicate tau key"));
                }
            }
        }
        BDTriple::new(n, g1, g2, tau)
    }
}

/// Exhaustively enumerate all admissible triples for sl(n), sorted.
pub fn enumerate(n: usize) -> Vec<BDTriple> {
    assert!(n >= 2);
    let idx: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << idx.len()) {
        let g1: Vec<usize> = idx
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        for mask2 in 0..(1u32 << idx.len()) {
            let g2: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|(b, _)| mask2 >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            if g1.len() != g2.len() {
                continue;
            }
            for pi in permutations(&g2) {
                let tau: BTreeMap<usize, usize> =
                    g1.iter().copied().zip(pi.iter().copied()).collect();
                if let Ok(t) = BDTriple::new(
                    n,
                    g1.iter().copied().collect(),
                    g2.iter().copied().collect(),
                    tau,
                ) {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// A symmetry orbit: canonical representative plus all members.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: BDTriple,
    pub members: Vec<BDTriple>,
}

/// Group triples into symmetry orbits; representatives are the sort-minimal
/// members and the orbit list is sorted by representative.
pub fn orbits(triples: &[BDTriple]) -> Vec<Orbit> {
    let mut remaining: BTreeSet<BDTriple> = triples.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(t) = remaining.iter().next().cloned() {
        let members = t.orbit();
        for m in &members {
            assert!(
                remaining.remove(m),
                "orbit member {m} missing from the input set"
            );
        }
        out.push(Orbit {
            representative: members[0].clone(),
            members,
        });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    out
}

/// Extension of tau to interval roots, with the sign produced by iterated
/// brackets e_(i,j) = [e_i, e_(i+1,j)].
#[derive(Debug, Clone)]
pub struct SignedRootMap {
    map: BTreeMap<Root, (Root, i8)>,
}

impl SignedRootMap {
    pub fn image(&self, root: Root) -> Option<(Root, i8)> {
        self.map.get(&root).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Root, (Root, i8))> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn tau_interval(root: Root, tau: &BTreeMap<usize, usize>) -> (i8, Root) {
    let (i, j) = root;
    if i == j {
        return (1, (tau[&i], tau[&i]));
    }
    let (s, sub) = tau_interval((i + 1, j), tau);
    // bracket of matrix units: [e_ab, e_cd] = d_bc e_ad - d_da e_cb
    let (a, b) = (tau[&i], tau[&i] + 1);
    let (c, d) = (sub.0, sub.1 + 1);
    if b == c && d != a {
        assert!(a < d);
        (s, (a, d - 1))
    } else if d == a && b != c {
        assert!(c < b);
        (-s, (c, b - 1))
    } else {
        panic!("tau image of interval {root:?} is not a single root");
    }
}

/// Signed extension of tau to every interval root contained in gamma1.
pub fn extended_map(t: &BDTriple) -> SignedRootMap {
    let mut map = BTreeMap::new();
    for (i, j) in positive_roots(t.n()) {
        if (i..=j).all(|x| t.gamma1().contains(&x)) {
            let (s, img) = tau_interval((i, j), t.tau());
            map.insert((i, j), (img, s));
        }
    }
    SignedRootMap { map }
}

/// One precedence relation: `lower` reaches `upper` after `steps` applications
/// of the extended map, with accumulated bracket `sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precedence {
    pub lower: Root,
    pub upper: Root,
    pub steps: usize,
    pub sign: i8,
}

/// All ordered precedence pairs of a triple, in root order.
pub fn precedence_pairs(t: &BDTriple) -> Vec<Precedence> {
    let m = extended_map(t);
    let mut out = Vec::new();
    for root in positive_roots(t.n()) {
        let (mut x, mut s, mut k) = (root, 1i8, 0usize);
        while let Some((img, si)) = m.image(x) {
            x = img;
            s *= si;
            k += 1;
            out.push(Precedence {
                lower: root,
                upper: x,
                steps: k,
                sign: s,
            });
        }
    }
    out
}
