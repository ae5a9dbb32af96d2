//! End-to-end decision whether the discriminant is a linear free divisor.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{derive_seed, interpolate, poly_gcd, seeded_rng, stage_seed, Field, Fp, Matrix, PrimeField, Rational, DEFAULT_PRIME, DEFAULT_SEED};
use crate::error::{Error, Result, StageExt};
use crate::quiver::{DimensionVector, Quiver, Weight};
use crate::rep::{random_rep_fp, CanonicalEquation, Representation};
use crate::roots::{brick_probe, orthogonal_candidates_in_box, orthogonal_roots, semigroup_basis, BrickVerdict};
use crate::semi_inv::{
    discriminant_weight, restricted_degree, sample_generic_witness, schofield_nonvanishing, weight_of_schofield,
    weight_support_type, SemiInvariantHandle, DEFAULT_RETRIES,
};

/// Tunables of [`certify`].
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub prime: u64,
    pub seed: u64,
    /// Points for ratio-constancy.
    pub trials: usize,
    /// Random lines for the squarefree probe.
    pub lines: usize,
    pub retries: usize,
    /// Entry bound for candidate roots on non-Dynkin supports; defaults to
    /// the largest entry of `d`.
    pub box_bound: Option<i64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { prime: DEFAULT_PRIME, seed: DEFAULT_SEED, trials: 20, lines: 5, retries: DEFAULT_RETRIES, box_bound: None }
    }
}

/// `Σ_φ d(tφ) d(hφ)`, cross-checked against the degree of `t ↦ Δ(tV)`.
pub fn discriminant_degree(q: &Quiver, d: &DimensionVector, field: &PrimeField, seed: u64) -> Result<usize> {
    let n = q.rep_dimension(d) as usize;
    let delta = CanonicalEquation::new(q, d)?;
    let mut rng = seeded_rng(seed);
    let v = random_rep_fp(q, d, field, &mut rng);
    let k = restricted_degree(|t| delta.eval(&v.scaled(t)), field, n)?;
    if k != n {
        return Err(Error::Mismatch(format!("canonical equation has degree {k}, expected {n}")));
    }
    Ok(n)
}

/// The unique rational `a` with `Σ a_i w_i = w(Δ)`, required to be a vector
/// of positive integers.
pub fn multiplicity_vector(q: &Quiver, d: &DimensionVector, weights: &[Weight]) -> Result<Vec<i64>> {
    let target = discriminant_weight(q, d);
    solve_multiplicities(weights, &target)
}

pub(crate) fn solve_multiplicities(weights: &[Weight], target: &Weight) -> Result<Vec<i64>> {
    let n = target.len();
    if weights.is_empty() {
        return Err(Error::DependentWeights);
    }
    let m: Matrix<Rational> = Matrix::from_fn(n, weights.len(), |x, i| Rational::from_integer(weights[i].entries()[x].into()));
    if m.rank() < weights.len() {
        return Err(Error::DependentWeights);
    }
    let b: Vec<Rational> = target.entries().iter().map(|&x| Rational::from_integer(x.into())).collect();
    let sol = m.solve_unique(&b)?.ok_or(Error::WeightNotInSpan)?;
    sol.iter()
        .map(|a| {
            if !a.is_integer() || !a.is_positive() {
                return Err(Error::BadMultiplicity(sol.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
            }
            a.to_integer().to_i64().ok_or_else(|| Error::BadMultiplicity(a.to_string()))
        })
        .collect()
}

/// Statistics of the ratio test `Δ / Π f_i^{a_i}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationCheck {
    pub passed: bool,
    pub points: usize,
    /// Points whose ratio differs from the first.
    pub deviations: usize,
    /// The constant ratio (the unit), as a residue.
    pub unit: Option<u64>,
    /// `(deg Δ + Σ a_i deg_i) / p`.
    pub schwartz_zippel_bound: f64,
}

/// Samples `trials` points where every factor is nonzero and compares
/// `Δ(V) / Π f_i(V)^{a_i}`.
pub fn verify_factorization(
    q: &Quiver,
    d: &DimensionVector,
    handles: &[SemiInvariantHandle<Fp>],
    a: &[i64],
    field: &PrimeField,
    trials: usize,
    seed: u64,
) -> Result<FactorizationCheck> {
    let delta = CanonicalEquation::new(q, d)?;
    let ratios: Vec<Option<Fp>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Option<Fp>> {
            let mut rng = seeded_rng(derive_seed(seed, t));
            for _ in 0..16 {
                let v = random_rep_fp(q, d, field, &mut rng);
                let mut prod = Fp::one();
                let mut degenerate = false;
                for (h, &k) in handles.iter().zip(a) {
                    let f = h.evaluate(q, &v)?;
                    if f.is_zero() {
                        degenerate = true;
                        break;
                    }
                    prod = prod * f.powi(k);
                }
                if !degenerate {
                    return Ok(Some(delta.eval(&v)? / prod));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    if ratios.iter().all(Option::is_none) {
        return Err(Error::Degenerate("every sampled point is a zero of some factor".into()));
    }
    let first = ratios.iter().flatten().next().cloned().unwrap();
    let deviations = ratios.iter().filter(|r| r.as_ref() != Some(&first)).count();
    let total_degree = delta.degree() as f64 + handles.iter().zip(a).map(|(h, &k)| k as f64 * h.degree.unwrap_or(0) as f64).sum::<f64>();
    let passed = deviations == 0 && !first.is_zero();
    Ok(FactorizationCheck {
        passed,
        points: trials,
        deviations,
        unit: passed.then(|| first.residue_in(field.modulus())),
        schwartz_zippel_bound: total_degree / field.modulus() as f64,
    })
}

/// Outcome of [`squarefree_probe`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquarefreeProbe {
    pub squarefree: bool,
    pub votes_for: usize,
    pub lines: usize,
}

/// Restricts `Δ` to random affine lines `V0 + tV1`, interpolates, and
/// tests `gcd(f, f') = 1`; majority verdict.
pub fn squarefree_probe(q: &Quiver, d: &DimensionVector, field: &PrimeField, lines: usize, seed: u64) -> Result<SquarefreeProbe> {
    let delta = CanonicalEquation::new(q, d)?;
    let n = delta.degree();
    if (field.modulus() as u128) <= 2 * n as u128 {
        return Err(Error::InvalidPrime(field.modulus(), "squarefree probe needs p > 2 dim Rep"));
    }
    let votes: Vec<bool> = (0..lines.max(1) as u64)
        .map(|l| -> Result<bool> {
            let mut rng = seeded_rng(derive_seed(seed, l));
            for _ in 0..16 {
                let v0 = random_rep_fp(q, d, field, &mut rng);
                let v1 = random_rep_fp(q, d, field, &mut rng);
                let pts: Vec<(Fp, Fp)> = (0..=n as u64)
                    .into_par_iter()
                    .map(|t| {
                        let x = field.elem(t);
                        delta.eval(&v0.add_scaled(&v1, &x)).map(|y| (x, y))
                    })
                    .collect::<Result<_>>()?;
                let f = interpolate(&pts)?;
                // a full-degree restriction keeps every component visible
                if f.degree() != Some(n) {
                    continue;
                }
                return Ok(poly_gcd(&f, &f.derivative())?.is_one());
            }
            Err(Error::Degenerate("canonical equation degenerate on every sampled line".into()))
        })
        .collect::<Result<_>>()?;
    let votes_for = votes.iter().filter(|&&v| v).count();
    Ok(SquarefreeProbe { squarefree: 2 * votes_for > votes.len(), votes_for, lines: votes.len() })
}

/// One irreducible component candidate of the discriminant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub root: DimensionVector,
    pub weight: Weight,
    pub degree: usize,
    pub multiplicity: i64,
    pub handle_id: String,
    pub root_type: String,
    pub weight_type: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    LinearFreeDivisor,
    NotReduced { multiplicities: Vec<i64> },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::LinearFreeDivisor => "linear-free-divisor",
            Verdict::NotReduced { .. } => "not-reduced",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_definitive(&self) -> bool {
        !matches!(self, Verdict::Inconclusive { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationStats {
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub factorization: Option<FactorizationCheck>,
    pub squarefree: Option<SquarefreeProbe>,
    pub schur_endomorphism_dim: Option<usize>,
    /// Per-point Schwartz–Zippel bound of the ratio test.
    pub schwartz_zippel_bound: Option<f64>,
    pub schwartz_zippel_log2: Option<f64>,
}

/// The certified component table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LfdReport {
    pub quiver: String,
    pub nodes: Vec<String>,
    pub dimension_vector: DimensionVector,
    pub dim_rep: usize,
    pub discriminant_weight: Weight,
    pub dynkin_support: bool,
    pub components: Vec<ComponentReport>,
    /// `Σ deg_i` over distinct components.
    pub reduced_degree: usize,
    pub verdict: Verdict,
    pub stats: VerificationStats,
    pub warnings: Vec<String>,
}

impl LfdReport {
    /// Multiplicity of the component with this weight, if present.
    pub fn multiplicity_of_weight(&self, w: &Weight) -> Option<i64> {
        self.components.iter().find(|c| &c.weight == w).map(|c| c.multiplicity)
    }
}

/// Everything [`certify`] computes, with live handles for follow-up checks.
pub struct Certification {
    pub report: LfdReport,
    /// Support subquiver and restricted `d`, the space all handles live on.
    pub support: Quiver,
    pub support_dims: DimensionVector,
    /// Original index of every support node.
    pub support_nodes: Vec<usize>,
    pub handles: Vec<SemiInvariantHandle<Fp>>,
}

fn embed(v: &[i64], keep: &[usize], n: usize) -> Vec<i64> {
    let mut out = vec![0; n];
    for (i, &x) in keep.iter().enumerate() {
        out[x] = v[i];
    }
    out
}

/// Runs the pipeline and returns only the report.
pub fn certify(q: &Quiver, d: &DimensionVector, opts: &CertifyOptions) -> Result<LfdReport> {
    certify_full(q, d, opts).map(|c| c.report)
}

/// Support restriction, real-root check, orthogonal roots, semigroup basis,
/// witnesses, degrees and weights, multiplicities, factorization check and
/// squarefree probe.
pub fn certify_full(q: &Quiver, d: &DimensionVector, opts: &CertifyOptions) -> Result<Certification> {
    let field = PrimeField::new(opts.prime).stage("setup")?;
    let (sub, ds, keep) = q.support_subquiver(d).stage("support")?;
    if !sub.is_acyclic() {
        return Err(Error::OrientedCycle(q.name().to_string()).at("support"));
    }
    let n = q.num_nodes();
    let tits = sub.tits_form(&ds).stage("real-root")?;
    if tits != 1 {
        return Err(Error::NotRealRoot(tits).at("real-root"));
    }
    let dim_rep = sub.rep_dimension(&ds) as usize;
    let dynkin = sub.is_dynkin();
    let w_delta = discriminant_weight(&sub, &ds);
    let mut warnings = Vec::new();
    let mut stats = VerificationStats {
        prime: opts.prime,
        seed: opts.seed,
        trials: opts.trials,
        factorization: None,
        squarefree: None,
        schur_endomorphism_dim: None,
        schwartz_zippel_bound: None,
        schwartz_zippel_log2: None,
    };
    let mut report = LfdReport {
        quiver: q.name().to_string(),
        nodes: q.nodes().to_vec(),
        dimension_vector: d.clone(),
        dim_rep,
        discriminant_weight: Weight::new(embed(w_delta.entries(), &keep, n)),
        dynkin_support: dynkin,
        components: Vec::new(),
        reduced_degree: 0,
        verdict: Verdict::Inconclusive { reason: String::new() },
        stats: stats.clone(),
        warnings: Vec::new(),
    };
    let finish = |mut report: LfdReport, stats: VerificationStats, warnings: Vec<String>, verdict: Verdict, handles| {
        report.stats = stats;
        report.warnings = warnings;
        report.verdict = verdict;
        Ok(Certification { report, support: sub.clone(), support_dims: ds.clone(), support_nodes: keep.clone(), handles })
    };

    if !dynkin {
        let cert = brick_probe(&sub, &ds, opts.prime, stage_seed(opts.seed, "schur"), 3).stage("schur-probe")?;
        stats.schur_endomorphism_dim = Some(cert.endomorphism_dim);
        if cert.verdict == BrickVerdict::NotBrick {
            let reason = format!("not a Schur root: generic endomorphism dimension {}", cert.endomorphism_dim);
            return finish(report, stats, warnings, Verdict::Inconclusive { reason }, Vec::new());
        }
    }

    discriminant_degree(&sub, &ds, &field, stage_seed(opts.seed, "degree")).stage("discriminant-degree")?;

    let candidates = if dynkin {
        orthogonal_roots(&sub, &ds).stage("orthogonal-roots")?
    } else {
        let bound = opts.box_bound.unwrap_or_else(|| ds.entries().iter().copied().max().unwrap_or(1));
        orthogonal_candidates_in_box(&sub, &ds, bound).stage("orthogonal-roots")?
    };
    let nonvanishing_seed = stage_seed(opts.seed, "nonvanishing");
    let live: Vec<DimensionVector> = candidates
        .par_iter()
        .enumerate()
        .filter(|(i, e)| schofield_nonvanishing(&sub, &ds, e, &field, derive_seed(nonvanishing_seed, *i as u64), 2))
        .map(|(_, e)| e.clone())
        .collect();
    if live.is_empty() {
        let reason = "no orthogonal root gives a nonzero semi-invariant".to_string();
        return finish(report, stats, warnings, Verdict::Inconclusive { reason }, Vec::new());
    }
    let expected = dynkin.then(|| sub.num_nodes() - 1);
    let basis = semigroup_basis(&live, expected).stage("semigroup-basis")?;
    warnings.extend(basis.warning.clone());

    let witness_seed = stage_seed(opts.seed, "witness");
    let handles: Vec<SemiInvariantHandle<Fp>> = basis
        .basis
        .par_iter()
        .enumerate()
        .map(|(i, e)| sample_generic_witness(&sub, &ds, e, &field, derive_seed(witness_seed, i as u64), opts.retries))
        .collect::<Result<_>>()
        .stage("witness")?;
    let weights: Vec<Weight> = basis.basis.iter().map(|e| weight_of_schofield(&sub, e)).collect();

    let mult = solve_multiplicities(&weights, &w_delta);
    report.components = basis
        .basis
        .iter()
        .zip(&handles)
        .zip(&weights)
        .enumerate()
        .map(|(i, ((e, h), w))| {
            let root_type = sub.support_subquiver(e).map(|(s, _, _)| s.graph_type().to_string()).unwrap_or_default();
            ComponentReport {
                root: DimensionVector::new(embed(e.entries(), &keep, n)).expect("non-negative"),
                weight: Weight::new(embed(w.entries(), &keep, n)),
                degree: h.degree.expect("witness carries its degree"),
                multiplicity: mult.as_ref().map(|a| a[i]).unwrap_or(0),
                handle_id: format!("P{}", i + 1),
                root_type,
                weight_type: weight_support_type(&sub, w).to_string(),
            }
        })
        .collect();
    report.reduced_degree = report.components.iter().map(|c| c.degree).sum();

    let a = match mult {
        Ok(a) => a,
        Err(e) => {
            let reason = format!("multiplicity vector: {e}");
            return finish(report, stats, warnings, Verdict::Inconclusive { reason }, handles);
        }
    };
    let weighted: usize = report.components.iter().map(|c| c.degree * c.multiplicity as usize).sum();
    if weighted != dim_rep {
        let reason = format!("Σ a_i deg_i = {weighted} but dim Rep = {dim_rep}");
        return finish(report, stats, warnings, Verdict::Inconclusive { reason }, handles);
    }
    let fac = verify_factorization(&sub, &ds, &handles, &a, &field, opts.trials, stage_seed(opts.seed, "factorization"))
        .stage("factorization")?;
    stats.schwartz_zippel_bound = Some(fac.schwartz_zippel_bound);
    stats.schwartz_zippel_log2 = Some(fac.schwartz_zippel_bound.log2());
    let fac_ok = fac.passed;
    stats.factorization = Some(fac);
    if !fac_ok {
        let reason = "Δ is not a constant multiple of the product of the factors".to_string();
        return finish(report, stats, warnings, Verdict::Inconclusive { reason }, handles);
    }
    let sq = squarefree_probe(&sub, &ds, &field, opts.lines, stage_seed(opts.seed, "squarefree")).stage("squarefree")?;
    let squarefree = sq.squarefree;
    stats.squarefree = Some(sq);
    let reduced = a.iter().all(|&x| x == 1);
    let verdict = match (reduced, squarefree) {
        (true, true) => Verdict::LinearFreeDivisor,
        (false, false) => Verdict::NotReduced { multiplicities: a },
        _ => Verdict::Inconclusive {
            reason: format!("multiplicities say reduced={reduced} but squarefree probe says {squarefree}"),
        },
    };
    finish(report, stats, warnings, verdict, handles)
}

/// Ratio-constancy of one handle against another on `Rep(Q, d)`.
pub fn handles_agree(
    q: &Quiver,
    d: &DimensionVector,
    a: &SemiInvariantHandle<Fp>,
    b: &SemiInvariantHandle<Fp>,
    field: &PrimeField,
    points: usize,
    seed: u64,
) -> Result<bool> {
    crate::semi_inv::ratio_constant(|v: &Representation<Fp>| a.evaluate(q, v), |v| b.evaluate(q, v), q, d, field, seed, points)
        .map(|r| r.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(x: &[i64]) -> DimensionVector {
        DimensionVector::new(x.to_vec()).unwrap()
    }

    fn chain(n: usize) -> Quiver {
        let nodes: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> =
            (1..n).map(|i| (format!("a{i}"), i.to_string(), (i + 1).to_string())).collect();
        Quiver::new("chain", &nodes, &arrows, false).unwrap()
    }

    #[test]
    fn a3_certified() {
        let q = chain(3);
        let r = certify(&q, &dv(&[1, 1, 1]), &CertifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::LinearFreeDivisor);
        assert_eq!(r.components.len(), 2);
        assert!(r.components.iter().all(|c| c.degree == 1 && c.multiplicity == 1));
        assert!(r.stats.squarefree.as_ref().unwrap().squarefree);
    }

    #[test]
    fn multiplicities_order_independent() {
        let w1 = Weight::new(vec![-1, 1, 0]);
        let w2 = Weight::new(vec![0, -1, 1]);
        let t = Weight::new(vec![-1, 0, 1]);
        assert_eq!(solve_multiplicities(&[w1.clone(), w2.clone()], &t).unwrap(), vec![1, 1]);
        assert_eq!(solve_multiplicities(&[w2, w1.clone()], &t).unwrap(), vec![1, 1]);
        assert_eq!(solve_multiplicities(&[w1.clone(), w1.clone()], &t), Err(Error::DependentWeights));
        assert_eq!(solve_multiplicities(&[w1], &t), Err(Error::WeightNotInSpan));
    }

    #[test]
    fn non_real_root_rejected() {
        let q = chain(3);
        let e = certify(&q, &dv(&[1, 2, 1]), &CertifyOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Stage { stage: "real-root", .. }));
    }

    #[test]
    fn degree_crosscheck() {
        let q = chain(4);
        let f = PrimeField::default_field();
        assert_eq!(discriminant_degree(&q, &dv(&[1, 1, 1, 1]), &f, 1).unwrap(), 3);
    }
}
