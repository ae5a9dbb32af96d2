//! Semi-invariants: Schofield determinants `c^W`, block-matrix recipes,
//! weights and degrees.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{derive_seed, interpolate, seeded_rng, stage_seed, Field, Fp, Matrix, PrimeField};
use crate::error::{Error, Result};
use crate::quiver::{Arrow, DimensionVector, GraphType, Quiver, Weight};
use crate::rep::{dwv_matrix, random_rep_fp, Representation};

/// Default number of witness resamples.
pub const DEFAULT_RETRIES: usize = 8;

/// `w(c^W) = −e E`.
pub fn weight_of_schofield(q: &Quiver, e: &DimensionVector) -> Weight {
    let ee = q.euler_matrix().left_mul_vec(e.entries());
    Weight::new(ee.into_iter().map(|x| -x).collect())
}

/// `w(Δ) = indeg_d − outdeg_d = d (Eᵀ − E)`.
pub fn discriminant_weight(q: &Quiver, d: &DimensionVector) -> Weight {
    let (indeg, outdeg) = q.in_out_degree(d).expect("length checked by caller");
    Weight::new(indeg.iter().zip(&outdeg).map(|(a, b)| a - b).collect())
}

/// `e = −w E^{-1}`, the inverse of [`weight_of_schofield`].
pub fn root_from_weight(q: &Quiver, w: &Weight) -> Result<DimensionVector> {
    let inv = q.euler_inverse()?;
    let v = inv.left_mul_vec(w.entries());
    DimensionVector::new(v.into_iter().map(|x| -x).collect())
}

/// One cell of a block recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    Zero,
    Identity { sign: i64 },
    /// `sign · V(a_0) V(a_1) ... V(a_k)`, i.e. the path applying `a_k` first.
    Path { sign: i64, arrows: Vec<usize> },
}

/// A grid of blocks whose determinant is a semi-invariant.
///
/// Text form: rows separated by `;`, cells by `,`. A cell is `0`, `I`, or
/// an optionally signed word of arrow ids written as a composition (`CBA`
/// applies `A` first). Ids longer than one character are joined with `*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecipe {
    pub text: String,
    cells: Vec<Vec<Cell>>,
    row_nodes: Vec<usize>,
    col_nodes: Vec<usize>,
}

impl fmt::Display for BlockRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.text)
    }
}

fn parse_cell(q: &Quiver, raw: &str) -> Result<Cell> {
    let s = raw.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest.trim()),
        None => (1, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    if body.is_empty() {
        return Err(Error::Recipe(format!("empty cell `{raw}`")));
    }
    if body == "0" {
        return Ok(Cell::Zero);
    }
    if body == "I" && q.arrow_index("I").is_none() {
        return Ok(Cell::Identity { sign });
    }
    let ids: Vec<String> = if let Some(k) = q.arrow_index(body) {
        vec![q.arrows()[k].id.clone()]
    } else if body.contains('*') {
        body.split('*').map(|x| x.trim().to_string()).collect()
    } else {
        body.chars().map(|c| c.to_string()).collect()
    };
    let arrows = ids
        .iter()
        .map(|id| q.arrow_index(id).ok_or_else(|| Error::Recipe(format!("unknown arrow `{id}` in `{raw}`"))))
        .collect::<Result<Vec<_>>>()?;
    for w in arrows.windows(2) {
        let (outer, inner) = (&q.arrows()[w[0]], &q.arrows()[w[1]]);
        if inner.head != outer.tail {
            return Err(Error::Recipe(format!("path `{body}` is not composable at `{}{}`", outer.id, inner.id)));
        }
    }
    Ok(Cell::Path { sign, arrows })
}

fn path_ends(q: &Quiver, arrows: &[usize]) -> (usize, usize) {
    let head = q.arrows()[arrows[0]].head;
    let tail = q.arrows()[*arrows.last().unwrap()].tail;
    (tail, head)
}

impl BlockRecipe {
    /// Parses and infers the node of every block row and column.
    pub fn parse(q: &Quiver, text: &str) -> Result<Self> {
        let cells: Vec<Vec<Cell>> = text
            .split(';')
            .map(|row| row.split(',').map(|c| parse_cell(q, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let ncols = cells[0].len();
        if cells.iter().any(|r| r.len() != ncols) {
            return Err(Error::Recipe(format!("ragged rows in `{text}`")));
        }
        let mut rows: Vec<Option<usize>> = vec![None; cells.len()];
        let mut cols: Vec<Option<usize>> = vec![None; ncols];
        let set = |slot: &mut Option<usize>, node: usize, what: &str| -> Result<bool> {
            match *slot {
                Some(n) if n != node => Err(Error::Recipe(format!("inconsistent {what} block in `{text}`"))),
                Some(_) => Ok(false),
                None => {
                    *slot = Some(node);
                    Ok(true)
                }
            }
        };
        let mut changed = true;
        while changed {
            changed = false;
            for (r, row) in cells.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    match cell {
                        Cell::Path { arrows, .. } => {
                            let (t, h) = path_ends(q, arrows);
                            changed |= set(&mut rows[r], h, "row")?;
                            changed |= set(&mut cols[c], t, "column")?;
                        }
                        Cell::Identity { .. } => {
                            if let Some(n) = rows[r] {
                                changed |= set(&mut cols[c], n, "column")?;
                            }
                            if let Some(n) = cols[c] {
                                changed |= set(&mut rows[r], n, "row")?;
                            }
                        }
                        Cell::Zero => {}
                    }
                }
            }
        }
        let row_nodes = rows
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.ok_or_else(|| Error::Recipe(format!("cannot infer block row {} of `{text}`", i + 1))))
            .collect::<Result<_>>()?;
        let col_nodes = cols
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.ok_or_else(|| Error::Recipe(format!("cannot infer block column {} of `{text}`", i + 1))))
            .collect::<Result<_>>()?;
        Ok(BlockRecipe { text: text.to_string(), cells, row_nodes, col_nodes })
    }

    pub fn row_nodes(&self) -> &[usize] {
        &self.row_nodes
    }

    pub fn col_nodes(&self) -> &[usize] {
        &self.col_nodes
    }

    /// Checks that the assembled matrix is square for `d`; returns its size.
    pub fn validate(&self, d: &DimensionVector) -> Result<usize> {
        let rows: i64 = self.row_nodes.iter().map(|&x| d[x]).sum();
        let cols: i64 = self.col_nodes.iter().map(|&x| d[x]).sum();
        if rows != cols {
            return Err(Error::Recipe(format!("`{}` assembles to {rows}x{cols}", self.text)));
        }
        Ok(rows as usize)
    }

    /// `Σ_rows d(ρ) − Σ_cols d(κ)` read as a weight: block rows transform by
    /// `g_ρ`, block columns by `g_κ^{-1}`.
    pub fn weight(&self, n: usize) -> Weight {
        let mut w = vec![0; n];
        for &r in &self.row_nodes {
            w[r] += 1;
        }
        for &c in &self.col_nodes {
            w[c] -= 1;
        }
        Weight::new(w)
    }

    /// Upper bound on the degree: per block column, its width times the
    /// longest path in it.
    pub fn degree_bound(&self, d: &DimensionVector) -> usize {
        (0..self.col_nodes.len())
            .map(|c| {
                let len = self
                    .cells
                    .iter()
                    .map(|row| match &row[c] {
                        Cell::Path { arrows, .. } => arrows.len(),
                        _ => 0,
                    })
                    .max()
                    .unwrap_or(0);
                d[self.col_nodes[c]] as usize * len
            })
            .sum()
    }

    /// The block matrix with `V` substituted.
    pub fn assemble<F: Field>(&self, q: &Quiver, v: &Representation<F>) -> Result<Matrix<F>> {
        let d = v.dims();
        let size = self.validate(d)?;
        let row_off: Vec<usize> = offsets(self.row_nodes.iter().map(|&x| d[x] as usize));
        let col_off: Vec<usize> = offsets(self.col_nodes.iter().map(|&x| d[x] as usize));
        let mut m: Matrix<F> = Matrix::zeros(size, size);
        for (r, row) in self.cells.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                let block: Matrix<F> = match cell {
                    Cell::Zero => continue,
                    Cell::Identity { sign } => {
                        Matrix::identity(d[self.row_nodes[r]] as usize).map(|x: &F| x.clone() * F::from_i64(*sign))
                    }
                    Cell::Path { sign, arrows } => {
                        let mut acc = v.map(arrows[0]).clone();
                        for &a in &arrows[1..] {
                            acc = acc.mul_mat(v.map(a))?;
                        }
                        acc.map(|x| x.clone() * F::from_i64(*sign))
                    }
                };
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        m[(row_off[r] + i, col_off[c] + j)] = block[(i, j)].clone();
                    }
                }
            }
        }
        let _ = q;
        Ok(m)
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

/// How a semi-invariant is evaluated.
#[derive(Clone, Debug)]
pub enum HandleKind<F> {
    /// `c^W(V) = det d^W_V`.
    Schofield { e: DimensionVector, witness: Representation<F> },
    /// Determinant of a hand-written block matrix.
    Block(BlockRecipe),
}

/// An evaluatable semi-invariant on `Rep(Q, d)`.
#[derive(Clone, Debug)]
pub struct SemiInvariantHandle<F> {
    pub id: String,
    pub kind: HandleKind<F>,
    pub degree: Option<usize>,
    pub weight: Weight,
}

impl<F: Field> SemiInvariantHandle<F> {
    pub fn schofield(q: &Quiver, d: &DimensionVector, e: &DimensionVector, witness: Representation<F>) -> Result<Self> {
        let pairing = q.euler_form(e, d)?;
        if pairing != 0 {
            return Err(Error::Mismatch(format!("<{e}, {d}> = {pairing}, not 0")));
        }
        if witness.dims() != e {
            return Err(Error::Mismatch("witness has the wrong dimension vector".into()));
        }
        Ok(SemiInvariantHandle {
            id: format!("c^W{e}"),
            weight: weight_of_schofield(q, e),
            kind: HandleKind::Schofield { e: e.clone(), witness },
            degree: None,
        })
    }

    pub fn block(q: &Quiver, d: &DimensionVector, id: &str, recipe: BlockRecipe) -> Result<Self> {
        recipe.validate(d)?;
        Ok(SemiInvariantHandle { id: id.to_string(), weight: recipe.weight(q.num_nodes()), kind: HandleKind::Block(recipe), degree: None })
    }

    pub fn root(&self) -> Option<&DimensionVector> {
        match &self.kind {
            HandleKind::Schofield { e, .. } => Some(e),
            HandleKind::Block(_) => None,
        }
    }

    /// Value at `V`.
    pub fn evaluate(&self, q: &Quiver, v: &Representation<F>) -> Result<F> {
        match &self.kind {
            HandleKind::Schofield { witness, .. } => dwv_matrix(q, witness, v)?.det(),
            HandleKind::Block(r) => r.assemble(q, v)?.det(),
        }
    }

    /// A priori bound on the degree.
    pub fn degree_bound(&self, q: &Quiver, d: &DimensionVector) -> usize {
        match &self.kind {
            HandleKind::Schofield { e, .. } => crate::rep::ext_row_count(q, e, d),
            HandleKind::Block(r) => r.degree_bound(d),
        }
    }
}

/// `t ↦ f(t V)` sampled at `t = 1..=bound+1` and interpolated; the degree
/// of the (required) monomial result.
pub fn degree_of(
    h: &SemiInvariantHandle<Fp>,
    q: &Quiver,
    d: &DimensionVector,
    field: &PrimeField,
    seed: u64,
) -> Result<usize> {
    let bound = h.degree_bound(q, d);
    if (field.modulus() as u128) <= 2 * (bound as u128 + 1) {
        return Err(Error::InvalidPrime(field.modulus(), "too small for degree interpolation"));
    }
    let mut rng = seeded_rng(seed);
    let v = random_rep_fp(q, d, field, &mut rng);
    restricted_degree(|t| h.evaluate(q, &v.scaled(t)), field, bound)
}

/// Degree of `t ↦ f(t)`, a polynomial of degree at most `bound`, required to
/// be a nonzero monomial.
pub fn restricted_degree(f: impl Fn(&Fp) -> Result<Fp> + Sync, field: &PrimeField, bound: usize) -> Result<usize> {
    let pts: Vec<(Fp, Fp)> = (1..=bound as u64 + 1)
        .into_par_iter()
        .map(|t| {
            let x = field.elem(t);
            f(&x).map(|y| (x, y))
        })
        .collect::<Result<_>>()?;
    let p = interpolate(&pts)?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monomial() {
        return Err(Error::Degenerate("restriction to a scaling line is not a monomial".into()));
    }
    Ok(p.degree().unwrap())
}

/// A witness `W` whose `c^W` is nonzero and whose degree agrees with that of
/// an independent second witness, plus that degree.
pub fn sample_generic_witness(
    q: &Quiver,
    d: &DimensionVector,
    e: &DimensionVector,
    field: &PrimeField,
    seed: u64,
    retries: usize,
) -> Result<SemiInvariantHandle<Fp>> {
    if q.euler_form(e, d)? != 0 {
        return Err(Error::Mismatch(format!("<{e}, {d}> is not 0")));
    }
    for attempt in 0..retries.max(1) as u64 {
        let mut rng = seeded_rng(derive_seed(seed, attempt));
        let w1 = random_rep_fp(q, e, field, &mut rng);
        let w2 = random_rep_fp(q, e, field, &mut rng);
        let h1 = SemiInvariantHandle::schofield(q, d, e, w1)?;
        let h2 = SemiInvariantHandle::schofield(q, d, e, w2)?;
        let s = rand::Rng::gen::<u64>(&mut rng);
        let (Ok(k1), Ok(k2)) = (degree_of(&h1, q, d, field, s), degree_of(&h2, q, d, field, s)) else {
            continue;
        };
        if k1 == k2 {
            let mut h = h1;
            h.degree = Some(k1);
            return Ok(h);
        }
    }
    Err(Error::Degenerate(format!("no generic witness for {e} after {retries} attempts")))
}

/// Cheap test that `c^W` is not identically zero: `d^W_V` is invertible at
/// some of `tries` random pairs.
pub fn schofield_nonvanishing(q: &Quiver, d: &DimensionVector, e: &DimensionVector, field: &PrimeField, seed: u64, tries: usize) -> bool {
    (0..tries as u64).any(|t| {
        let mut rng = seeded_rng(derive_seed(seed, t));
        let w = random_rep_fp(q, e, field, &mut rng);
        let v = random_rep_fp(q, d, field, &mut rng);
        dwv_matrix(q, &w, &v).and_then(|m| m.det()).is_ok_and(|x| !num_traits::Zero::is_zero(&x))
    })
}

/// Checks `f(g·V) = λ^{w(x)} f(V)` for `g_x = diag(λ,1,…,1)` at every node
/// over `trials` random `(V, λ)`.
pub fn verify_weight(
    h: &SemiInvariantHandle<Fp>,
    q: &Quiver,
    d: &DimensionVector,
    declared: &Weight,
    field: &PrimeField,
    seed: u64,
    trials: usize,
) -> Result<bool> {
    if declared.len() != q.num_nodes() {
        return Err(Error::LengthMismatch { expected: q.num_nodes(), got: declared.len() });
    }
    let base = stage_seed(seed, "verify-weight");
    let checks: Vec<Result<bool>> = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(derive_seed(base, t));
            let mut v = random_rep_fp(q, d, field, &mut rng);
            let mut f0 = h.evaluate(q, &v)?;
            let mut guard = 0;
            while num_traits::Zero::is_zero(&f0) {
                guard += 1;
                if guard > 16 {
                    return Err(Error::Degenerate("semi-invariant vanishes at every sample".into()));
                }
                v = random_rep_fp(q, d, field, &mut rng);
                f0 = h.evaluate(q, &v)?;
            }
            for x in 0..q.num_nodes() {
                if d[x] == 0 {
                    continue;
                }
                let lambda = field.random_nonzero(&mut rng);
                let f1 = h.evaluate(q, &v.act_diagonal(q, x, &lambda))?;
                if f1 != f0 * lambda.powi(declared.entries()[x]) {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    for c in checks {
        if !c? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Contracts the nodes where `w` vanishes (one composite arrow per pair of
/// an incoming and an outgoing arrow) and classifies what remains. Loops or
/// parallel arrows in the contraction give `Other`.
pub fn weight_support_type(q: &Quiver, w: &Weight) -> GraphType {
    let n = q.num_nodes();
    let mut alive: Vec<bool> = (0..n).map(|x| w.entries()[x] != 0).collect();
    if !alive.iter().any(|&a| a) {
        return GraphType::Other;
    }
    let mut edges: Vec<(usize, usize)> = q.arrows().iter().map(|a| (a.tail, a.head)).collect();
    for x in 0..n {
        if alive[x] {
            continue;
        }
        let ins: Vec<usize> = edges.iter().filter(|e| e.1 == x && e.0 != x).map(|e| e.0).collect();
        let outs: Vec<usize> = edges.iter().filter(|e| e.0 == x && e.1 != x).map(|e| e.1).collect();
        if edges.iter().any(|e| e.0 == x && e.1 == x) {
            return GraphType::Other;
        }
        edges.retain(|e| e.0 != x && e.1 != x);
        for &i in &ins {
            for &o in &outs {
                edges.push((i, o));
            }
        }
        alive[x] = false;
    }
    let keep: Vec<usize> = (0..n).filter(|&x| alive[x]).collect();
    let mut seen = HashSet::new();
    for &(u, v) in &edges {
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return GraphType::Other;
        }
    }
    let pos = |x: usize| keep.iter().position(|&y| y == x).unwrap();
    let arrows = edges
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| Arrow { id: format!("c{k}"), tail: pos(u), head: pos(v) })
        .collect();
    let nodes = keep.iter().map(|&x| q.nodes()[x].clone()).collect();
    match Quiver::from_parts("contraction", nodes, arrows, true) {
        Ok(c) => c.graph_type(),
        Err(_) => GraphType::Other,
    }
}

/// Whether `a(V) / b(V)` is the same nonzero constant at `points` random
/// `V` where both are nonzero. Returns the constant when it is.
pub fn ratio_constant(
    a: impl Fn(&Representation<Fp>) -> Result<Fp> + Sync,
    b: impl Fn(&Representation<Fp>) -> Result<Fp> + Sync,
    q: &Quiver,
    d: &DimensionVector,
    field: &PrimeField,
    seed: u64,
    points: usize,
) -> Result<Option<Fp>> {
    let ratios: Vec<Option<Fp>> = (0..points as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(derive_seed(seed, t));
            for _ in 0..16 {
                let v = random_rep_fp(q, d, field, &mut rng);
                let (x, y) = (a(&v)?, b(&v)?);
                if !num_traits::Zero::is_zero(&y) {
                    return Ok(Some(x / y));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    let Some(Some(first)) = ratios.first().cloned() else { return Ok(None) };
    let ok = !num_traits::Zero::is_zero(&first) && ratios.iter().all(|r| r.as_ref() == Some(&first));
    Ok(ok.then_some(first))
}
