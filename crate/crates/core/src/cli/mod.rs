//! Command-line front end: fixtures, file format, reports, commands.

pub mod fixtures;
pub mod format;
pub mod report;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::arith::{stage_seed, PrimeField, Rational, DEFAULT_PRIME, DEFAULT_SEED};
use crate::certify::{certify_full, handles_agree, CertifyOptions, Certification, Verdict};
use crate::error::{Error, Result};
use crate::quiver::{DimensionVector, Quiver};
use crate::rep::{CanonicalEquation, RepCoordinates};
use crate::roots::{orthogonal_roots, positive_roots, semigroup_basis};
use crate::semi_inv::{degree_of, discriminant_weight, BlockRecipe, SemiInvariantHandle};

use fixtures::{builtin, Fixture, BUILTIN_HELP};
use format::QuiverFile;
use report::{component_rows, delta_row, render_table, to_json, tuple};

/// Largest action matrix `--exact` will expand symbolically.
pub const EXACT_LIMIT: usize = 12;

const AFTER_HELP: &str = "\
Builtin nodes are numbered left to right along the long arm, with the branch \
node (or the node hanging off the long arm) last. Tuples print that last entry \
after a `;`.

Exit codes: 0 definitive result, 2 inconclusive verdict, 1 error.

The default seed can be overridden with QLFD_SEED.";

#[derive(Parser, Debug)]
#[command(name = "qlfd", version, about = "Discriminants of quiver representation spaces", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Euler,
    Roots,
    Semiinv,
    Discriminant,
    Certify,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Euler, inverse Euler and Cartan matrices, Tits form, degrees.
    Euler(Args),
    /// Positive roots, roots orthogonal to d, semigroup basis.
    Roots(Args),
    /// Generic semi-invariants of the components, plus fixture recipes.
    Semiinv(Args),
    /// Weight and degree of the canonical equation.
    Discriminant(Args),
    /// Full linear free divisor certification.
    Certify(Args),
    /// Component table: polynomial, degree, root, negated weight, type.
    Table(Args),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Args) {
        match self {
            Command::Euler(a) => (CommandKind::Euler, a),
            Command::Roots(a) => (CommandKind::Roots, a),
            Command::Semiinv(a) => (CommandKind::Semiinv, a),
            Command::Discriminant(a) => (CommandKind::Discriminant, a),
            Command::Certify(a) => (CommandKind::Certify, a),
            Command::Table(a) => (CommandKind::Table, a),
        }
    }
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Euler => "euler",
            CommandKind::Roots => "roots",
            CommandKind::Semiinv => "semiinv",
            CommandKind::Discriminant => "discriminant",
            CommandKind::Certify => "certify",
            CommandKind::Table => "table",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Args {
    /// Builtin fixture name.
    #[arg(long, value_name = "NAME", help = format!("Builtin fixture: {BUILTIN_HELP}"))]
    pub builtin: Option<String>,
    /// Quiver file.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Defaults to QLFD_SEED, else a fixed seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Evaluation points for ratio-constancy checks.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Expand the canonical equation over the rationals (small cases only).
    #[arg(long)]
    pub exact: bool,
    /// Accept quiver files with oriented cycles (most commands then refuse).
    #[arg(long)]
    pub allow_cycles: bool,
}

/// What a command printed and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

struct Input {
    name: String,
    quiver: Quiver,
    dims: DimensionVector,
    recipes: Vec<(String, String)>,
}

fn resolve_seed(args: &Args) -> Result<u64> {
    if let Some(s) = args.seed {
        return Ok(s);
    }
    match std::env::var("QLFD_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Usage(format!("QLFD_SEED=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load(args: &Args) -> Result<Input> {
    match (&args.builtin, &args.file) {
        (Some(_), Some(_)) => Err(Error::Usage("--builtin and --file are mutually exclusive".into())),
        (None, None) => Err(Error::Usage("one of --builtin or --file is required".into())),
        (Some(name), None) => {
            let Fixture { name, quiver, dims, recipes } = builtin(name)?;
            Ok(Input { name, quiver, dims, recipes })
        }
        (None, Some(path)) => {
            let f = QuiverFile::read(path, args.allow_cycles)?;
            Ok(Input { name: f.quiver.name().to_string(), quiver: f.quiver, dims: f.dims, recipes: Vec::new() })
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let (kind, args) = cli.command.split();
    match execute(kind, args) {
        Ok(o) => o,
        Err(e) => Outcome { output: format!("error: {e}\n"), code: 1 },
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn run_from<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            Outcome { output: e.to_string(), code }
        }
    }
}

fn execute(kind: CommandKind, args: &Args) -> Result<Outcome> {
    let input = load(args)?;
    if args.exact && kind != CommandKind::Discriminant {
        return Err(Error::Usage("--exact only applies to `discriminant`".into()));
    }
    let seed = resolve_seed(args)?;
    let opts = CertifyOptions { prime: args.prime, seed, trials: args.trials, ..CertifyOptions::default() };
    let json = args.format == OutputFormat::Json;
    let cmd = kind.name();
    match kind {
        CommandKind::Euler => euler(&input, json, cmd),
        CommandKind::Roots => roots(&input, json, cmd),
        CommandKind::Semiinv => semiinv(&input, &opts, json, cmd),
        CommandKind::Discriminant => discriminant(&input, &opts, args.exact, json, cmd),
        CommandKind::Certify | CommandKind::Table => {
            let cert = certify_full(&input.quiver, &input.dims, &opts)?;
            let code = if cert.report.verdict.is_definitive() { 0 } else { 2 };
            let output = if kind == CommandKind::Certify {
                certify_output(&input, &cert, json, cmd)
            } else {
                table_output(&input, &cert, json, cmd)
            };
            Ok(Outcome { output, code })
        }
    }
}

fn ok(output: String) -> Result<Outcome> {
    Ok(Outcome { output, code: 0 })
}

fn matrix_text(m: &crate::quiver::IntMatrix) -> String {
    let rows = m.to_rows();
    let w = rows.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
    rows.iter().map(|r| r.iter().map(|x| format!("{x:>w$}")).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n") + "\n"
}

fn euler(input: &Input, json: bool, cmd: &str) -> Result<Outcome> {
    let q = &input.quiver;
    let d = &input.dims;
    let e = q.euler_matrix();
    let einv = q.euler_inverse()?;
    let c = q.cartan_matrix();
    let tits = q.tits_form(d)?;
    let (indeg, outdeg) = q.in_out_degree(d)?;
    let w = discriminant_weight(q, d);
    if json {
        let body = json!({
            "nodes": q.nodes(),
            "dimension_vector": d,
            "graph_type": q.graph_type().to_string(),
            "euler_matrix": e.to_rows(),
            "euler_inverse": einv.to_rows(),
            "cartan_matrix": c.to_rows(),
            "tits_form": tits,
            "dim_rep": q.rep_dimension(d),
            "indegree": indeg,
            "outdegree": outdeg,
            "discriminant_weight": w,
        });
        return ok(to_json(cmd, &input.name, body));
    }
    let mut s = String::new();
    let _ = writeln!(s, "quiver {} ({}), nodes {}", q.name(), q.graph_type(), q.nodes().join(" "));
    let _ = writeln!(s, "d = {}", tuple(q, d.entries()));
    let _ = write!(s, "\nEuler matrix E = I - A\n{}", matrix_text(&e));
    let _ = write!(s, "\nE^-1\n{}", matrix_text(&einv));
    let _ = write!(s, "\nCartan matrix E + E^T\n{}", matrix_text(&c));
    let _ = writeln!(s, "\nq(d) = {tits}");
    let _ = writeln!(s, "dim Rep = {}", q.rep_dimension(d));
    let _ = writeln!(s, "indeg  = {}", tuple(q, &indeg));
    let _ = writeln!(s, "outdeg = {}", tuple(q, &outdeg));
    let _ = writeln!(s, "-w(Δ)  = {}", tuple(q, w.neg().entries()));
    ok(s)
}

fn roots(input: &Input, json: bool, cmd: &str) -> Result<Outcome> {
    let q = &input.quiver;
    let d = &input.dims;
    let all = positive_roots(q)?;
    let orth = orthogonal_roots(q, d)?;
    let expected = d.support().len().checked_sub(1);
    let basis = semigroup_basis(&orth, expected)?;
    if json {
        let body = json!({
            "graph_type": q.graph_type().to_string(),
            "positive_roots": all,
            "orthogonal_roots": orth,
            "semigroup_basis": basis.basis,
            "warning": basis.warning,
        });
        return ok(to_json(cmd, &input.name, body));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{} positive roots of {} ({})", all.len(), q.name(), q.graph_type());
    for r in &all {
        let _ = writeln!(s, "  {}", tuple(q, r.entries()));
    }
    let _ = writeln!(s, "{} roots orthogonal to d = {}", orth.len(), tuple(q, d.entries()));
    for r in &orth {
        let _ = writeln!(s, "  {}", tuple(q, r.entries()));
    }
    let _ = writeln!(s, "semigroup basis ({} elements)", basis.basis.len());
    for r in &basis.basis {
        let _ = writeln!(s, "  {}", tuple(q, r.entries()));
    }
    if let Some(w) = &basis.warning {
        let _ = writeln!(s, "warning: {w}");
    }
    ok(s)
}

#[derive(serde::Serialize)]
struct RecipeCheck {
    label: String,
    recipe: String,
    size: usize,
    degree: usize,
    weight: crate::quiver::Weight,
    agrees_with: Option<String>,
}

fn recipe_checks(input: &Input, cert: &Certification, opts: &CertifyOptions) -> Result<Vec<RecipeCheck>> {
    let field = PrimeField::new(opts.prime)?;
    let (q, d) = (&cert.support, &cert.support_dims);
    if q.num_nodes() != input.quiver.num_nodes() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (i, (label, text)) in input.recipes.iter().enumerate() {
        let recipe = BlockRecipe::parse(q, text)?;
        let size = recipe.validate(d)?;
        let h = SemiInvariantHandle::block(q, d, label, recipe)?;
        let degree = degree_of(&h, q, d, &field, stage_seed(opts.seed, "recipe-degree"))?;
        let mut agrees_with = None;
        for (j, auto) in cert.handles.iter().enumerate() {
            if auto.weight == h.weight && handles_agree(q, d, &h, auto, &field, 10, crate::arith::derive_seed(opts.seed, (i * 1000 + j) as u64))? {
                agrees_with = Some(auto.id.clone());
                break;
            }
        }
        out.push(RecipeCheck { label: label.clone(), recipe: text.clone(), size, degree, weight: h.weight.clone(), agrees_with });
    }
    Ok(out)
}

fn semiinv(input: &Input, opts: &CertifyOptions, json: bool, cmd: &str) -> Result<Outcome> {
    let cert = certify_full(&input.quiver, &input.dims, opts)?;
    let checks = recipe_checks(input, &cert, opts)?;
    let q = &input.quiver;
    if json {
        let body = json!({ "components": cert.report.components, "recipes": checks });
        return ok(to_json(cmd, &input.name, body));
    }
    let mut s = String::new();
    let _ = writeln!(s, "generic Schofield semi-invariants c^W on {}", tuple(q, input.dims.entries()));
    for c in &cert.report.components {
        let _ = writeln!(s, "  {}  e = {}  deg {}  -w = {}", c.handle_id, tuple(q, c.root.entries()), c.degree, tuple(q, c.weight.neg().entries()));
    }
    if !checks.is_empty() {
        let _ = writeln!(s, "block recipes");
        for c in &checks {
            let agree = c.agrees_with.as_deref().map(|id| format!("agrees with {id}")).unwrap_or_else(|| "no matching component".into());
            let _ = writeln!(s, "  {}  [{}]  size {}  deg {}  -w = {}  {agree}", c.label, c.recipe, c.size, c.degree, tuple(q, c.weight.neg().entries()));
        }
    }
    ok(s)
}

fn discriminant(input: &Input, opts: &CertifyOptions, exact: bool, json: bool, cmd: &str) -> Result<Outcome> {
    let q = &input.quiver;
    let (sub, ds, _) = q.support_subquiver(&input.dims)?;
    let eq = CanonicalEquation::new(&sub, &ds)?;
    let field = PrimeField::new(opts.prime)?;
    let degree = crate::certify::discriminant_degree(&sub, &ds, &field, stage_seed(opts.seed, "degree"))?;
    let w = discriminant_weight(q, &input.dims);
    let symbolic = if exact {
        if eq.degree() > EXACT_LIMIT {
            return Err(Error::Usage(format!("--exact supports action matrices up to {EXACT_LIMIT}, this one is {}", eq.degree())));
        }
        let coords = RepCoordinates::new(&sub, &ds);
        let names: Vec<String> = (0..coords.len()).map(|i| coords.name(&sub, i)).collect();
        let p = eq.symbolic::<Rational>()?;
        // fixed representative of Δ up to scalars: leading coefficient 1
        let p = match p.leading_coefficient() {
            Some(c) => p.scale(&(Rational::from_integer(1.into()) / c.clone())),
            None => p,
        };
        Some((p.display(Some(&names)), p.num_terms()))
    } else {
        None
    };
    if json {
        let body = json!({
            "degree": degree,
            "weight": w,
            "symbolic": symbolic.as_ref().map(|s| &s.0),
            "terms": symbolic.as_ref().map(|s| s.1),
        });
        return ok(to_json(cmd, &input.name, body));
    }
    let mut s = String::new();
    let _ = writeln!(s, "deg Δ = {degree}");
    let _ = writeln!(s, "-w(Δ) = {}", tuple(q, w.neg().entries()));
    if let Some((p, terms)) = symbolic {
        let _ = writeln!(s, "Δ = {p}");
        let _ = writeln!(s, "({terms} terms)");
    }
    ok(s)
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::LinearFreeDivisor => "verdict: linear-free-divisor".into(),
        Verdict::NotReduced { multiplicities } => format!("verdict: not-reduced, multiplicities {multiplicities:?}"),
        Verdict::Inconclusive { reason } => format!("verdict: inconclusive ({reason})"),
    }
}

fn stats_lines(cert: &Certification) -> String {
    let st = &cert.report.stats;
    let mut s = String::new();
    let _ = writeln!(s, "prime {}, seed {}, trials {}", st.prime, st.seed, st.trials);
    if let Some(f) = &st.factorization {
        let _ = writeln!(s, "factorization check: {} at {} points", if f.passed { "passed" } else { "FAILED" }, f.points);
    }
    if let Some(sq) = &st.squarefree {
        let _ = writeln!(s, "squarefree probe: {} ({}/{} lines)", sq.squarefree, sq.votes_for, sq.lines);
    }
    if let Some(e) = st.schur_endomorphism_dim {
        let _ = writeln!(s, "generic dim End = {e}");
    }
    if let (Some(b), Some(l)) = (st.schwartz_zippel_bound, st.schwartz_zippel_log2) {
        let _ = writeln!(s, "Schwartz-Zippel false-accept bound {b:.3e} (2^{l:.1})");
    }
    for w in &cert.report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn certify_output(input: &Input, cert: &Certification, json: bool, cmd: &str) -> String {
    let q = &input.quiver;
    let rows = component_rows(q, &cert.report, &input.recipes);
    if json {
        return to_json(cmd, &input.name, json!({ "report": cert.report, "table": rows }));
    }
    let r = &cert.report;
    let mut s = String::new();
    let _ = writeln!(s, "{} on d = {}: dim Rep {}, {} components, reduced degree {}", r.quiver, tuple(q, r.dimension_vector.entries()), r.dim_rep, r.components.len(), r.reduced_degree);
    let _ = writeln!(s, "{}", verdict_line(&r.verdict));
    if !rows.is_empty() {
        s.push('\n');
        s.push_str(&render_table(q, &rows));
        s.push('\n');
    }
    s.push_str(&stats_lines(cert));
    s
}

fn table_output(input: &Input, cert: &Certification, json: bool, cmd: &str) -> String {
    let q = &input.quiver;
    let mut rows = component_rows(q, &cert.report, &input.recipes);
    rows.push(delta_row(&cert.report));
    if json {
        return to_json(cmd, &input.name, json!({ "table": rows, "verdict": cert.report.verdict, "stats": cert.report.stats }));
    }
    let mut s = render_table(q, &rows);
    let _ = writeln!(s, "{}", verdict_line(&cert.report.verdict));
    s
}
