//! Quivers, dimension vectors, and the Euler/Tits/Cartan forms.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Matrix;
use crate::error::{Error, Result};

/// Square integer matrix indexed by node order.
pub type IntMatrix = Matrix<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite directed multigraph with ordered nodes and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    name: String,
    nodes: Vec<String>,
    arrows: Vec<Arrow>,
    acyclic: bool,
}

/// Node-indexed non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(Vec<i64>);

/// Node-indexed signed integers (characters of the base-change group).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl DimensionVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.iter().any(|&x| x < 0) {
            return Err(Error::NegativeEntry(entries));
        }
        Ok(DimensionVector(entries))
    }

    pub fn zero(n: usize) -> Self {
        DimensionVector(vec![0; n])
    }

    /// The simple root at `node`.
    pub fn unit(n: usize, node: usize) -> Self {
        let mut v = vec![0; n];
        v[node] = 1;
        DimensionVector(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    pub fn is_sincere(&self) -> bool {
        self.0.iter().all(|&x| x != 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn sum_of_squares(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn add(&self, other: &DimensionVector) -> DimensionVector {
        DimensionVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimensionVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl std::ops::Index<usize> for DimensionVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Weight {
    pub fn new(entries: Vec<i64>) -> Self {
        Weight(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    /// Ordinary dot product with a dimension vector.
    pub fn dot(&self, d: &DimensionVector) -> i64 {
        self.0.iter().zip(d.entries()).map(|(a, b)| a * b).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Simply-laced Dynkin family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

/// Classification of one connected component of the underlying graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphType {
    Dynkin(DynkinFamily, usize),
    ExtendedDynkin(DynkinFamily, usize),
    Other,
}

impl GraphType {
    pub fn is_dynkin(&self) -> bool {
        matches!(self, GraphType::Dynkin(..))
    }

    pub fn is_finite_or_tame(&self) -> bool {
        !matches!(self, GraphType::Other)
    }

    /// Number of positive roots for a Dynkin type.
    pub fn positive_root_count(&self) -> Option<usize> {
        match *self {
            GraphType::Dynkin(DynkinFamily::A, n) => Some(n * (n + 1) / 2),
            GraphType::Dynkin(DynkinFamily::D, n) => Some(n * (n - 1)),
            GraphType::Dynkin(DynkinFamily::E, 6) => Some(36),
            GraphType::Dynkin(DynkinFamily::E, 7) => Some(63),
            GraphType::Dynkin(DynkinFamily::E, 8) => Some(120),
            _ => None,
        }
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphType::Dynkin(fam, n) => write!(f, "{fam:?}{n}"),
            GraphType::ExtendedDynkin(fam, n) => write!(f, "~{fam:?}{n}"),
            GraphType::Other => write!(f, "Other"),
        }
    }
}

/// One connected component and its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    pub kind: GraphType,
}

impl Quiver {
    /// Validates and builds a quiver. Arrows are `(id, tail, head)` by node id.
    pub fn new<S: AsRef<str>>(name: &str, nodes: &[S], arrows: &[(S, S, S)], allow_cycles: bool) -> Result<Self> {
        let mut index = HashMap::new();
        let mut node_ids = Vec::with_capacity(nodes.len());
        for n in nodes {
            let n = n.as_ref();
            if index.insert(n.to_string(), node_ids.len()).is_some() {
                return Err(Error::DuplicateId(n.to_string()));
            }
            node_ids.push(n.to_string());
        }
        let mut seen_arrows = HashSet::new();
        let mut arrow_list = Vec::with_capacity(arrows.len());
        for (id, t, h) in arrows {
            let id = id.as_ref();
            if !seen_arrows.insert(id.to_string()) || index.contains_key(id) {
                return Err(Error::DuplicateId(id.to_string()));
            }
            let lookup = |n: &str| {
                index.get(n).copied().ok_or_else(|| Error::DanglingEndpoint { arrow: id.to_string(), node: n.to_string() })
            };
            arrow_list.push(Arrow { id: id.to_string(), tail: lookup(t.as_ref())?, head: lookup(h.as_ref())? });
        }
        Self::from_parts(name, node_ids, arrow_list, allow_cycles)
    }

    /// Builds from already-resolved index arrows.
    pub fn from_parts(name: &str, nodes: Vec<String>, arrows: Vec<Arrow>, allow_cycles: bool) -> Result<Self> {
        let mut q = Quiver { name: name.to_string(), nodes, arrows, acyclic: true };
        if let Some(node) = q.find_cycle_node() {
            if !allow_cycles {
                return Err(Error::OrientedCycle(q.nodes[node].clone()));
            }
            q.acyclic = false;
        }
        Ok(q)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    fn find_cycle_node(&self) -> Option<usize> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut done = vec![false; n];
        while let Some(x) = queue.pop_front() {
            done[x] = true;
            for a in self.arrows.iter().filter(|a| a.tail == x) {
                indeg[a.head] -= 1;
                if indeg[a.head] == 0 {
                    queue.push_back(a.head);
                }
            }
        }
        (0..n).find(|&x| !done[x])
    }

    /// Topological order of nodes; `None` for cyclic quivers.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for a in self.arrows.iter().filter(|a| a.tail == x) {
                indeg[a.head] -= 1;
                if indeg[a.head] == 0 {
                    queue.push_back(a.head);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.nodes.len() {
            return Err(Error::LengthMismatch { expected: self.nodes.len(), got: len });
        }
        Ok(())
    }

    /// Dimension vector from raw entries, checked against the node count.
    pub fn dimension_vector(&self, entries: Vec<i64>) -> Result<DimensionVector> {
        self.check_len(entries.len())?;
        DimensionVector::new(entries)
    }

    /// Arrow-count matrix: `A[x][y] = #{arrows x -> y}`.
    pub fn adjacency(&self) -> IntMatrix {
        let n = self.nodes.len();
        let mut a = IntMatrix::zeros(n, n);
        for arr in &self.arrows {
            a[(arr.tail, arr.head)] += 1;
        }
        a
    }

    /// `E = I - A`.
    pub fn euler_matrix(&self) -> IntMatrix {
        let n = self.nodes.len();
        let a = self.adjacency();
        IntMatrix::from_fn(n, n, |i, j| (i == j) as i64 - a[(i, j)])
    }

    /// `E^{-1} = I + A'` with `A'[x][y]` the number of directed paths `x -> y`.
    pub fn euler_inverse(&self) -> Result<IntMatrix> {
        let order = self.topological_order().ok_or_else(|| {
            Error::OrientedCycle(self.find_cycle_node().map(|i| self.nodes[i].clone()).unwrap_or_default())
        })?;
        let n = self.nodes.len();
        // paths[x][y] counts paths of length >= 0 from x to y
        let mut paths = IntMatrix::zeros(n, n);
        for &x in order.iter().rev() {
            paths[(x, x)] = 1;
            for a in self.arrows.iter().filter(|a| a.tail == x) {
                for y in 0..n {
                    let v = paths[(x, y)] + paths[(a.head, y)];
                    paths[(x, y)] = v;
                }
            }
        }
        Ok(paths)
    }

    /// `<e, d> = sum_x e_x d_x - sum_arrows e_{t} d_{h}`.
    pub fn euler_form(&self, e: &DimensionVector, d: &DimensionVector) -> Result<i64> {
        self.check_len(e.len())?;
        self.check_len(d.len())?;
        Ok(self.euler_form_raw(e.entries(), d.entries()))
    }

    /// Bilinear form on arbitrary integer vectors.
    pub fn euler_form_raw(&self, e: &[i64], d: &[i64]) -> i64 {
        let diag: i64 = e.iter().zip(d).map(|(a, b)| a * b).sum();
        let off: i64 = self.arrows.iter().map(|a| e[a.tail] * d[a.head]).sum();
        diag - off
    }

    /// `q(d) = <d, d>`.
    pub fn tits_form(&self, d: &DimensionVector) -> Result<i64> {
        self.euler_form(d, d)
    }

    /// `C = E + E^T`.
    pub fn cartan_matrix(&self) -> IntMatrix {
        let e = self.euler_matrix();
        e.add_mat(&e.transpose())
    }

    /// (in-degree, out-degree) of `d`.
    pub fn in_out_degree(&self, d: &DimensionVector) -> Result<(Vec<i64>, Vec<i64>)> {
        self.check_len(d.len())?;
        let n = self.nodes.len();
        let mut indeg = vec![0; n];
        let mut outdeg = vec![0; n];
        for a in &self.arrows {
            indeg[a.head] += d[a.tail];
            outdeg[a.tail] += d[a.head];
        }
        Ok((indeg, outdeg))
    }

    /// Total dimension of the representation space.
    pub fn rep_dimension(&self, d: &DimensionVector) -> i64 {
        self.arrows.iter().map(|a| d[a.tail] * d[a.head]).sum()
    }

    /// Connected components of the underlying undirected graph.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(x);
                for a in &self.arrows {
                    for (u, v) in [(a.tail, a.head), (a.head, a.tail)] {
                        if u == x && comp[v] == usize::MAX {
                            comp[v] = id;
                            stack.push(v);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// ADE / extended-ADE recognition, one entry per connected component.
    pub fn classify_underlying_graph(&self) -> Vec<Component> {
        self.connected_components()
            .into_iter()
            .map(|nodes| {
                let kind = classify_component(self, &nodes);
                Component { nodes, kind }
            })
            .collect()
    }

    /// Classification of a connected quiver; `Other` if disconnected.
    pub fn graph_type(&self) -> GraphType {
        let comps = self.classify_underlying_graph();
        match comps.as_slice() {
            [single] => single.kind,
            _ => GraphType::Other,
        }
    }

    /// Every component is Dynkin.
    pub fn is_dynkin(&self) -> bool {
        self.num_nodes() > 0 && self.classify_underlying_graph().iter().all(|c| c.kind.is_dynkin())
    }

    /// Full subquiver on the listed nodes (kept in the given order).
    pub fn full_subquiver(&self, keep: &[usize]) -> Quiver {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let nodes = keep.iter().map(|&x| self.nodes[x].clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .filter_map(|a| {
                Some(Arrow { id: a.id.clone(), tail: *pos.get(&a.tail)?, head: *pos.get(&a.head)? })
            })
            .collect();
        Quiver::from_parts(&self.name, nodes, arrows, true).expect("subquiver of a valid quiver")
    }

    /// Full subquiver on the support of `d`, with `d` restricted, plus the
    /// original index of every kept node.
    pub fn support_subquiver(&self, d: &DimensionVector) -> Result<(Quiver, DimensionVector, Vec<usize>)> {
        self.check_len(d.len())?;
        let keep = d.support();
        if keep.is_empty() {
            return Err(Error::EmptySupport);
        }
        let sub = self.full_subquiver(&keep);
        let dd = DimensionVector(keep.iter().map(|&x| d[x]).collect());
        Ok((sub, dd, keep))
    }

    /// Reverses every arrow.
    pub fn opposite(&self) -> Quiver {
        let mask = vec![true; self.arrows.len()];
        self.reorient(&mask).with_name(&format!("{}-opp", self.name))
    }

    /// Reverses the arrows flagged in `mask`.
    pub fn reorient(&self, mask: &[bool]) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .zip(mask)
            .map(|(a, &flip)| if flip { Arrow { id: a.id.clone(), tail: a.head, head: a.tail } } else { a.clone() })
            .collect();
        Quiver::from_parts(&self.name, self.nodes.clone(), arrows, true).expect("reorientation keeps ids valid")
    }

    /// Renumbers nodes: new node `i` is old node `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Quiver {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let nodes = perm.iter().map(|&p| self.nodes[p].clone()).collect();
        let arrows =
            self.arrows.iter().map(|a| Arrow { id: a.id.clone(), tail: inv[a.tail], head: inv[a.head] }).collect();
        Quiver::from_parts(&self.name, nodes, arrows, true).expect("relabel keeps ids valid")
    }
}

fn classify_component(q: &Quiver, nodes: &[usize]) -> GraphType {
    use DynkinFamily::*;
    let n = nodes.len();
    let members: HashSet<usize> = nodes.iter().copied().collect();
    let edges: Vec<(usize, usize)> = q
        .arrows
        .iter()
        .filter(|a| members.contains(&a.tail))
        .map(|a| (a.tail, a.head))
        .collect();
    if edges.iter().any(|&(u, v)| u == v) {
        return GraphType::Other;
    }
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in &edges {
        *pair_count.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    if pair_count.values().any(|&c| c > 1) {
        return if n == 2 && edges.len() == 2 { GraphType::ExtendedDynkin(A, 1) } else { GraphType::Other };
    }
    let mut adj: HashMap<usize, Vec<usize>> = nodes.iter().map(|&x| (x, Vec::new())).collect();
    for &(u, v) in &edges {
        adj.get_mut(&u).unwrap().push(v);
        adj.get_mut(&v).unwrap().push(u);
    }
    let deg = |x: usize| adj[&x].len();
    let m = edges.len();
    if m == n {
        // unicyclic: only the plain cycle is extended Dynkin
        return if n >= 3 && nodes.iter().all(|&x| deg(x) == 2) {
            GraphType::ExtendedDynkin(A, n - 1)
        } else {
            GraphType::Other
        };
    }
    if m + 1 != n {
        return GraphType::Other;
    }
    let branch: Vec<usize> = nodes.iter().copied().filter(|&x| deg(x) >= 3).collect();
    // length of the arm starting at `start` coming from `from`; None if it
    // reaches another branch node
    let arm = |from: usize, start: usize| -> Option<usize> {
        let (mut prev, mut cur, mut len) = (from, start, 1);
        loop {
            match deg(cur) {
                1 => return Some(len),
                2 => {
                    let next = adj[&cur].iter().copied().find(|&y| y != prev).unwrap();
                    prev = cur;
                    cur = next;
                    len += 1;
                }
                _ => return None,
            }
        }
    };
    match branch.as_slice() {
        [] => GraphType::Dynkin(A, n),
        [b] => {
            let mut arms: Vec<usize> = adj[b].iter().filter_map(|&y| arm(*b, y)).collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, k] => GraphType::Dynkin(D, k + 3),
                [1, 2, 2] => GraphType::Dynkin(E, 6),
                [1, 2, 3] => GraphType::Dynkin(E, 7),
                [1, 2, 4] => GraphType::Dynkin(E, 8),
                [2, 2, 2] => GraphType::ExtendedDynkin(E, 6),
                [1, 3, 3] => GraphType::ExtendedDynkin(E, 7),
                [1, 2, 5] => GraphType::ExtendedDynkin(E, 8),
                [1, 1, 1, 1] => GraphType::ExtendedDynkin(D, 4),
                _ => GraphType::Other,
            }
        }
        [b1, b2] if deg(*b1) == 3 && deg(*b2) == 3 => {
            let leaves = |b: usize| adj[&b].iter().filter(|&&y| deg(y) == 1).count();
            if leaves(*b1) == 2 && leaves(*b2) == 2 {
                GraphType::ExtendedDynkin(D, n - 1)
            } else {
                GraphType::Other
            }
        }
        _ => GraphType::Other,
    }
}
