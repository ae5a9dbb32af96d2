//! Positive roots, real/Schur tests, orthogonal roots and the semigroup basis.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{derive_seed, seeded_rng, PrimeField};
use crate::error::{Error, Result};
use crate::quiver::{DimensionVector, Quiver};
use crate::rep::{dwv_matrix, random_rep_fp};

/// Ordered list of dimension vectors.
pub type RootList = Vec<DimensionVector>;

/// Closure of the simple roots under simple reflections
/// `s_i(α) = α − (α C)_i e_i`, keeping positive vectors.
pub fn positive_roots(q: &Quiver) -> Result<RootList> {
    if !q.is_dynkin() {
        return Err(Error::NotDynkin(q.name().to_string()));
    }
    let n = q.num_nodes();
    let c = q.cartan_matrix();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let e = DimensionVector::unit(n, i).entries().to_vec();
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(alpha) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|k| alpha[k] * c[(k, i)]).sum();
            if pairing == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta[i] -= pairing;
            if beta.iter().all(|&x| x >= 0) && beta.iter().any(|&x| x > 0) && seen.insert(beta.clone()) {
                queue.push_back(beta);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| b.cmp(a)));
    Ok(roots.into_iter().map(|r| DimensionVector::new(r).expect("non-negative")).collect())
}

/// The componentwise-maximal positive root of a connected Dynkin quiver.
pub fn highest_root(q: &Quiver) -> Result<DimensionVector> {
    if !q.graph_type().is_dynkin() {
        return Err(Error::NotDynkin(q.name().to_string()));
    }
    let roots = positive_roots(q)?;
    let top = roots.iter().max_by_key(|r| r.total()).unwrap();
    debug_assert!(roots.iter().all(|r| r.le(top)));
    Ok(top.clone())
}

/// Outcome of the real/imaginary root test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootTest {
    pub tits: i64,
    pub real: bool,
    pub imaginary: bool,
    /// False when the test is only heuristic: some proper subquiver of the
    /// support is wild.
    pub applicable: bool,
}

/// Real iff `q(d) = 1`, imaginary iff `q(d) <= 0`.
pub fn is_real_root(q: &Quiver, d: &DimensionVector) -> Result<RootTest> {
    let tits = q.tits_form(d)?;
    let applicable = match q.support_subquiver(d) {
        Ok((sub, _, _)) => proper_subquivers_tame(&sub),
        Err(_) => false,
    };
    Ok(RootTest { tits, real: tits == 1 && !d.is_zero(), imaginary: tits <= 0 && !d.is_zero(), applicable })
}

pub fn is_imaginary_root(q: &Quiver, d: &DimensionVector) -> Result<RootTest> {
    is_real_root(q, d)
}

fn tame_or_finite(q: &Quiver) -> bool {
    q.classify_underlying_graph().iter().all(|c| c.kind.is_finite_or_tame())
}

fn proper_subquivers_tame(q: &Quiver) -> bool {
    let n = q.num_nodes();
    for x in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&y| y != x).collect();
        if !tame_or_finite(&q.full_subquiver(&keep)) {
            return false;
        }
    }
    for k in 0..q.num_arrows() {
        let arrows = q.arrows().iter().enumerate().filter(|&(i, _)| i != k).map(|(_, a)| a.clone()).collect();
        let sub = Quiver::from_parts(q.name(), q.nodes().to_vec(), arrows, true).expect("arrow deletion");
        if !tame_or_finite(&sub) {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BrickVerdict {
    Brick,
    NotBrick,
}

/// Probabilistic endomorphism/extension dimensions of a generic
/// representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurCertificate {
    pub endomorphism_dim: usize,
    pub ext_dim: usize,
    pub prime: u64,
    pub seed: u64,
    pub verdict: BrickVerdict,
}

/// Samples `trials` random `V` and records the minimal `dim End(V)` and
/// `dim Ext¹(V,V)`. A brick verdict certifies a Schur root (one-sided).
pub fn brick_probe(q: &Quiver, d: &DimensionVector, prime: u64, seed: u64, trials: usize) -> Result<SchurCertificate> {
    let field = PrimeField::new(prime)?;
    if prime < (1u64 << 40) {
        return Err(Error::InvalidPrime(prime, "brick probe needs a prime above 2^40"));
    }
    let results: Vec<(usize, usize)> = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(derive_seed(seed, t));
            let v = random_rep_fp(q, d, &field, &mut rng);
            let m = dwv_matrix(q, &v, &v).expect("same quiver");
            let r = m.rank();
            (m.cols() - r, m.rows() - r)
        })
        .collect();
    let endomorphism_dim = results.iter().map(|r| r.0).min().unwrap();
    let ext_dim = results.iter().map(|r| r.1).min().unwrap();
    let verdict = if endomorphism_dim == 1 { BrickVerdict::Brick } else { BrickVerdict::NotBrick };
    Ok(SchurCertificate { endomorphism_dim, ext_dim, prime, seed, verdict })
}

/// Positive roots `e` of the support of `d` with `<e, d> = 0`, expressed on
/// the full node set.
pub fn orthogonal_roots(q: &Quiver, d: &DimensionVector) -> Result<RootList> {
    let (sub, _, keep) = q.support_subquiver(d)?;
    if !sub.is_dynkin() {
        return Err(Error::NotDynkin(format!("support of {d}")));
    }
    let n = q.num_nodes();
    let mut out = Vec::new();
    for r in positive_roots(&sub)? {
        let mut full = vec![0; n];
        for (i, &x) in keep.iter().enumerate() {
            full[x] = r[i];
        }
        let e = DimensionVector::new(full)?;
        if q.euler_form(&e, d)? == 0 {
            out.push(e);
        }
    }
    Ok(out)
}

/// All `e` supported inside the support of `d` with `0 <= e_x <= bound`,
/// `q(e) = 1` and `<e, d> = 0`. Used when the support is not Dynkin and
/// the root list is infinite.
pub fn orthogonal_candidates_in_box(q: &Quiver, d: &DimensionVector, bound: i64) -> Result<RootList> {
    let support = d.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let n = q.num_nodes();
    let mut out = Vec::new();
    let mut e = vec![0i64; n];
    loop {
        // odometer over the support coordinates
        let mut k = 0;
        loop {
            if k == support.len() {
                out.sort_by(|a: &DimensionVector, b| a.total().cmp(&b.total()).then_with(|| b.cmp(a)));
                return Ok(out);
            }
            let x = support[k];
            if e[x] < bound {
                e[x] += 1;
                break;
            }
            e[x] = 0;
            k += 1;
        }
        if q.euler_form_raw(&e, &e) == 1 && q.euler_form_raw(&e, d.entries()) == 0 {
            out.push(DimensionVector::new(e.clone())?);
        }
    }
}

/// Result of [`semigroup_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupBasis {
    pub basis: RootList,
    /// Set when the basis size differs from the expected component count.
    pub warning: Option<String>,
}

/// Elements of `roots` that are not a sum of two nonzero elements of the
/// additive semigroup generated by `roots`.
pub fn semigroup_basis(roots: &[DimensionVector], expected: Option<usize>) -> Result<SemigroupBasis> {
    if roots.is_empty() {
        return Err(Error::Usage("semigroup basis of an empty root list".into()));
    }
    let mut memo: HashMap<Vec<i64>, bool> = HashMap::new();
    let gens: Vec<Vec<i64>> = roots.iter().map(|r| r.entries().to_vec()).collect();
    let basis: RootList = roots
        .iter()
        .filter(|r| !decomposes(r.entries(), &gens, &mut memo))
        .cloned()
        .collect();
    let warning = expected
        .filter(|&k| k != basis.len())
        .map(|k| format!("semigroup basis has {} elements, expected {k}", basis.len()));
    Ok(SemigroupBasis { basis, warning })
}

fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `v = s + u` with `s` a generator, `s != v`, and `u` in the semigroup.
fn decomposes(v: &[i64], gens: &[Vec<i64>], memo: &mut HashMap<Vec<i64>, bool>) -> bool {
    gens.iter().any(|s| {
        if s.as_slice() == v || !le(s, v) {
            return false;
        }
        let rest: Vec<i64> = v.iter().zip(s).map(|(a, b)| a - b).collect();
        in_semigroup(&rest, gens, memo)
    })
}

fn in_semigroup(v: &[i64], gens: &[Vec<i64>], memo: &mut HashMap<Vec<i64>, bool>) -> bool {
    if v.iter().all(|&x| x == 0) {
        return false;
    }
    if let Some(&b) = memo.get(v) {
        return b;
    }
    let ans = gens.iter().any(|s| s.as_slice() == v) || decomposes(v, gens, memo);
    memo.insert(v.to_vec(), ans);
    ans
}

/// Non-negative integer coefficients expressing `v` in `basis`, if any.
pub fn decompose_in_basis(v: &DimensionVector, basis: &[DimensionVector]) -> Option<Vec<i64>> {
    fn go(v: &[i64], basis: &[DimensionVector], k: usize, coeffs: &mut Vec<i64>) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if k == basis.len() {
            return false;
        }
        let b = basis[k].entries();
        let mut rest = v.to_vec();
        let mut c = 0;
        loop {
            coeffs[k] = c;
            if go(&rest, basis, k + 1, coeffs) {
                return true;
            }
            if !le(b, &rest) {
                coeffs[k] = 0;
                return false;
            }
            rest.iter_mut().zip(b).for_each(|(r, x)| *r -= x);
            c += 1;
        }
    }
    let mut coeffs = vec![0; basis.len()];
    go(v.entries(), basis, 0, &mut coeffs).then_some(coeffs)
}
