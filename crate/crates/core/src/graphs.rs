//! Undirected simple graphs, DIMACS ingestion, generators, and exhaustive
//! oracles for stability number, max-cut and clique number.
//!
//! Vertices are 0-based in the API and 1-based in every text format (DIMACS,
//! JSON certificates, CLI output).
//!
//! The oracles enumerate all `2^m` vertex subsets and are capped at
//! [`MAX_ENUMERATION_VERTICES`]. Among optimal subsets they return the one whose
//! sorted vertex list is lexicographically smallest.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::rational::{self, Rational};
use crate::rng::XorShift64Star;

pub const MAX_ENUMERATION_VERTICES: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph on `m` vertices; pairs are canonicalized to `(min, max)`
    /// and duplicates collapse.
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("a graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {}", i + 1)));
            }
            if i >= m || j >= m {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range for {m} vertices",
                    i + 1,
                    j + 1
                )));
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(Self { m, edges: set })
    }

    pub fn empty(m: usize) -> Result<Self> {
        Self::new(m, [])
    }

    pub fn complete(m: usize) -> Result<Self> {
        Self::new(m, (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))))
    }

    pub fn path(m: usize) -> Result<Self> {
        Self::new(m, (1..m).map(|i| (i - 1, i)))
    }

    /// The cycle `C_m`; for `m < 3` this degenerates to the path.
    pub fn cycle(m: usize) -> Result<Self> {
        let closing = (m >= 3).then(|| (0, m - 1));
        Self::new(m, (1..m).map(|i| (i - 1, i)).chain(closing))
    }

    /// Erdős–Rényi graph: pairs `(i, j)`, `i < j`, are visited in lexicographic
    /// order and each is kept with probability exactly `edge_prob`.
    pub fn random(m: usize, seed: u64, edge_prob: Rational) -> Result<Self> {
        if edge_prob < rational::int(0) || edge_prob > rational::int(1) {
            return Err(Error::InvalidArgument(format!(
                "edge probability {} is outside [0, 1]",
                rational::display(&edge_prob)
            )));
        }
        let numer = *edge_prob.numer() as u64;
        let denom = *edge_prob.denom() as u64;
        let mut rng = XorShift64Star::new(seed);
        let mut edges = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if rng.bernoulli(numer, denom) {
                    edges.push((i, j));
                }
            }
        }
        Self::new(m, edges)
    }

    pub fn generate(kind: GraphKind, m: usize, seed: Option<u64>, edge_prob: Option<Rational>) -> Result<Self> {
        match kind {
            GraphKind::Complete => Self::complete(m),
            GraphKind::Path => Self::path(m),
            GraphKind::Cycle => Self::cycle(m),
            GraphKind::Empty => Self::empty(m),
            GraphKind::Random => {
                let (Some(seed), Some(p)) = (seed, edge_prob) else {
                    return Err(Error::InvalidArgument(
                        "random graphs need both a seed and an edge probability".into(),
                    ));
                };
                if m == 0 {
                    return Err(Error::InvalidArgument("a graph needs at least one vertex".into()));
                }
                Self::random(m, seed, p)
            }
        }
    }

    /// Labeled graph on `m` vertices whose edge set is the bit pattern `mask`
    /// over the pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn from_pair_mask(m: usize, mask: u64) -> Result<Self> {
        let pairs = pair_list(m);
        if pairs.len() < 64 && mask >> pairs.len() != 0 {
            return Err(Error::InvalidArgument(format!("edge mask {mask:#x} too wide for {m} vertices")));
        }
        Self::new(
            m,
            pairs
                .into_iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, pair)| pair),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count_undirected(&self) -> usize {
        self.edges.len()
    }

    /// `|E|` under the convention that each undirected edge appears as both
    /// `(i, j)` and `(j, i)`.
    pub fn edge_count_directed(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn complement(&self) -> Self {
        let edges = (0..self.m)
            .flat_map(|i| (i + 1..self.m).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.has_edge(i, j))
            .collect();
        Self { m: self.m, edges }
    }

    /// Whether the graph is two-colourable.
    pub fn is_bipartite(&self) -> bool {
        let mut colour = vec![None; self.m];
        for start in 0..self.m {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let c = colour[v].unwrap();
                for u in 0..self.m {
                    if u != v && self.has_edge(u, v) {
                        match colour[u] {
                            None => {
                                colour[u] = Some(!c);
                                stack.push(u);
                            }
                            Some(cu) if cu == c => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }

    pub fn adjacency_matrix(&self) -> SymmetricMatrix {
        let mut a = SymmetricMatrix::zeros(self.m);
        for &(i, j) in &self.edges {
            a.set(i, j, 1.0);
        }
        a
    }

    /// Neighbourhood bitmasks; requires `m <= 64`.
    fn neighbour_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.m];
        for &(i, j) in &self.edges {
            masks[i] |= 1 << j;
            masks[j] |= 1 << i;
        }
        masks
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.m, self.edges.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("e {} {}\n", i + 1, j + 1));
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut m = None;
        let mut edges = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| Error::Parse { line: line_no, message };
            match fields[0] {
                "p" => {
                    if m.is_some() {
                        return Err(err("duplicate problem line".into()));
                    }
                    if fields.len() != 4 || fields[1] != "edge" {
                        return Err(err(format!("malformed header {line:?}, expected \"p edge <m> <edges>\"")));
                    }
                    let count: usize = fields[2]
                        .parse()
                        .map_err(|_| err(format!("bad vertex count {:?}", fields[2])))?;
                    fields[3]
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad edge count {:?}", fields[3])))?;
                    if count == 0 {
                        return Err(err("vertex count must be positive".into()));
                    }
                    m = Some(count);
                }
                "e" => {
                    let Some(count) = m else {
                        return Err(err("edge line before the problem line".into()));
                    };
                    if fields.len() != 3 {
                        return Err(err(format!("malformed edge line {line:?}")));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, field) in ends.iter_mut().zip(&fields[1..]) {
                        let v: usize = field.parse().map_err(|_| err(format!("bad vertex index {field:?}")))?;
                        if v == 0 || v > count {
                            return Err(err(format!("vertex index {v} out of range 1..={count}")));
                        }
                        *slot = v - 1;
                    }
                    if ends[0] == ends[1] {
                        return Err(err(format!("self-loop at vertex {}", ends[0] + 1)));
                    }
                    edges.push((ends[0], ends[1]));
                }
                other => return Err(err(format!("unknown line type {other:?}"))),
            }
        }
        let Some(m) = m else {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: "missing \"p edge\" header".into(),
            });
        };
        Self::new(m, edges)
    }

    /// Canonical representative of the isomorphism class (minimum pair mask
    /// over all vertex relabelings). Requires `m <= 8`.
    pub fn canonical_mask(&self) -> Result<u64> {
        if self.m > 8 {
            return Err(Error::Capacity {
                what: "isomorphism canonicalization",
                got: self.m,
                limit: 8,
            });
        }
        let index = pair_index(self.m);
        let mut perm: Vec<usize> = (0..self.m).collect();
        let mut best = u64::MAX;
        loop {
            let mask = self.edges.iter().fold(0u64, |acc, &(i, j)| {
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                acc | 1 << index[a][b]
            });
            best = best.min(mask);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(best)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(m={}, E={{", self.m)?;
        for (n, (i, j)) in self.edges.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{}", i + 1, j + 1)?;
        }
        write!(f, "}})")
    }
}

fn pair_list(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

fn pair_index(m: usize) -> Vec<Vec<usize>> {
    let mut index = vec![vec![0; m]; m];
    for (bit, (i, j)) in pair_list(m).into_iter().enumerate() {
        index[i][j] = bit;
    }
    index
}

pub(crate) fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Complete,
    Path,
    Cycle,
    Empty,
    Random,
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complete" => Self::Complete,
            "path" => Self::Path,
            "cycle" => Self::Cycle,
            "empty" => Self::Empty,
            "random" => Self::Random,
            other => return Err(Error::InvalidArgument(format!("unknown graph kind {other:?}"))),
        })
    }
}

/// Parses generator specs such as `complete:5`, `cycle:6` or
/// `random:7:seed=3:p=1/2`.
pub fn parse_generator_spec(spec: &str) -> Result<Graph> {
    let mut parts = spec.split(':');
    let kind: GraphKind = parts.next().unwrap_or_default().parse()?;
    let m: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidArgument(format!("generator spec {spec:?} needs a vertex count")))?;
    let mut seed = None;
    let mut prob = None;
    for option in parts {
        match option.split_once('=') {
            Some(("seed", v)) => {
                seed = Some(v.parse().map_err(|_| Error::InvalidArgument(format!("bad seed {v:?}")))?);
            }
            Some(("p", v)) => {
                prob = Some(rational::parse(v).ok_or_else(|| Error::InvalidArgument(format!("bad probability {v:?}")))?);
            }
            _ => return Err(Error::InvalidArgument(format!("unknown generator option {option:?}"))),
        }
    }
    if kind != GraphKind::Random && (seed.is_some() || prob.is_some()) {
        return Err(Error::InvalidArgument(format!("{spec:?}: only random graphs take options")));
    }
    Graph::generate(kind, m, seed, prob)
}

/// A named list of graphs used by the batch verifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// Every labeled graph on `1..=max_m` vertices.
    AllLabeled { max_m: usize },
    /// One representative per isomorphism class on `1..=max_m` vertices.
    NonIsomorphic { max_m: usize },
    /// `count` random graphs on `m` vertices, graph `i` seeded from `(seed, i)`.
    Seeded { m: usize, count: usize, seed: u64, edge_prob: Rational },
}

impl FromStr for GraphFamily {
    type Err = Error;

    /// `all:M`, `iso:M`, or `random:M:count=C:seed=S[:p=P]` (default `p=1/2`).
    fn from_str(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad family spec {spec:?}"));
        let mut parts = spec.split(':');
        let head = parts.next().ok_or_else(bad)?;
        let m: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let family = match head {
            "all" => Self::AllLabeled { max_m: m },
            "iso" => Self::NonIsomorphic { max_m: m },
            "random" => {
                let (mut count, mut seed, mut edge_prob) = (None, None, rational::frac(1, 2));
                for option in parts.by_ref() {
                    match option.split_once('=') {
                        Some(("count", v)) => count = Some(v.parse().map_err(|_| bad())?),
                        Some(("seed", v)) => seed = Some(v.parse().map_err(|_| bad())?),
                        Some(("p", v)) => edge_prob = rational::parse(v).ok_or_else(bad)?,
                        _ => return Err(bad()),
                    }
                }
                Self::Seeded {
                    m,
                    count: count.ok_or_else(bad)?,
                    seed: seed.ok_or_else(bad)?,
                    edge_prob,
                }
            }
            _ => return Err(bad()),
        };
        if parts.next().is_some() || m == 0 {
            return Err(bad());
        }
        Ok(family)
    }
}

impl GraphFamily {
    /// Materializes the family as `(graph_id, graph)` pairs in a fixed order.
    pub fn graphs(&self) -> Result<Vec<(String, Graph)>> {
        match *self {
            Self::AllLabeled { max_m } => {
                if max_m > 7 {
                    return Err(Error::Capacity {
                        what: "exhaustive labeled family",
                        got: max_m,
                        limit: 7,
                    });
                }
                let mut out = Vec::new();
                for m in 1..=max_m {
                    out.extend(labeled_graphs(m)?.into_iter().enumerate().map(|(mask, g)| (format!("all{m}-{mask:06}"), g)));
                }
                Ok(out)
            }
            Self::NonIsomorphic { max_m } => {
                let mut out = Vec::new();
                for m in 1..=max_m {
                    out.extend(
                        nonisomorphic_graphs(m)?
                            .into_iter()
                            .enumerate()
                            .map(|(n, g)| (format!("iso{m}-{n:04}"), g)),
                    );
                }
                Ok(out)
            }
            Self::Seeded { m, count, seed, edge_prob } => seeded_graphs(m, count, seed, edge_prob).map(|graphs| {
                graphs
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| (format!("random{m}-s{seed}-{i:03}"), g))
                    .collect()
            }),
        }
    }
}

/// All `2^(m(m-1)/2)` labeled graphs on `m` vertices, ordered by pair mask.
pub fn labeled_graphs(m: usize) -> Result<Vec<Graph>> {
    let pairs = m * m.saturating_sub(1) / 2;
    if pairs > 21 {
        return Err(Error::Capacity {
            what: "labeled graph enumeration",
            got: m,
            limit: 7,
        });
    }
    (0..1u64 << pairs).map(|mask| Graph::from_pair_mask(m, mask)).collect()
}

/// One graph per isomorphism class on `m` vertices, ordered by canonical mask.
pub fn nonisomorphic_graphs(m: usize) -> Result<Vec<Graph>> {
    if m > 6 {
        return Err(Error::Capacity {
            what: "isomorphism class enumeration",
            got: m,
            limit: 6,
        });
    }
    let mut classes = BTreeSet::new();
    for g in labeled_graphs(m)? {
        classes.insert(g.canonical_mask()?);
    }
    classes.into_iter().map(|mask| Graph::from_pair_mask(m, mask)).collect()
}

/// `count` random graphs on `m` vertices; graph `i` uses the stream derived
/// from `(seed, i)`.
pub fn seeded_graphs(m: usize, count: usize, seed: u64, edge_prob: Rational) -> Result<Vec<Graph>> {
    (0..count)
        .map(|i| Graph::random(m, XorShift64Star::derived(seed, i as u64).next_u64(), edge_prob))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    StableSet,
    CutPartition,
    Clique,
}

/// A combinatorial witness. For `CutPartition`, `vertices` is the side `S`
/// and `size` the number of crossing edges; otherwise `size = |vertices|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub vertices: Vec<usize>,
    pub size: usize,
}

impl Certificate {
    pub fn new(kind: CertificateKind, vertices: impl IntoIterator<Item = usize>, size: usize) -> Self {
        let mut vertices: Vec<usize> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        Self { kind, vertices, size }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fail = |msg: String| Err(Error::Decode(format!("{:?} certificate invalid: {msg}", self.kind)));
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= g.m()) {
            return fail(format!("vertex {} out of range", v + 1));
        }
        match self.kind {
            CertificateKind::StableSet | CertificateKind::Clique => {
                if self.size != self.vertices.len() {
                    return fail(format!("claims size {} for {} vertices", self.size, self.vertices.len()));
                }
                let want_edge = self.kind == CertificateKind::Clique;
                for (n, &i) in self.vertices.iter().enumerate() {
                    for &j in &self.vertices[n + 1..] {
                        if g.has_edge(i, j) != want_edge {
                            return fail(format!("pair {{{}, {}}}", i + 1, j + 1));
                        }
                    }
                }
            }
            CertificateKind::CutPartition => {
                let crossing = cut_size(g, &self.vertices);
                if crossing != self.size {
                    return fail(format!("claims {} cut edges, partition cuts {crossing}", self.size));
                }
            }
        }
        Ok(())
    }

    /// Vertices as 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v + 1).collect()
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Certificate", 3)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("vertices", &self.labels())?;
        s.serialize_field("size", &self.size)?;
        s.end()
    }
}

/// Number of edges with exactly one endpoint in `side`.
pub fn cut_size(g: &Graph, side: &[usize]) -> usize {
    let inside: BTreeSet<usize> = side.iter().copied().collect();
    g.edges().filter(|(i, j)| inside.contains(i) != inside.contains(j)).count()
}

fn check_capacity(g: &Graph, what: &'static str) -> Result<()> {
    if g.m() > MAX_ENUMERATION_VERTICES {
        return Err(Error::Capacity {
            what,
            got: g.m(),
            limit: MAX_ENUMERATION_VERTICES,
        });
    }
    Ok(())
}

/// Lexicographic order on the sorted vertex lists encoded by two masks.
fn lex_less(mut a: u64, mut b: u64) -> bool {
    loop {
        if a == b {
            return false;
        }
        if a == 0 {
            return true;
        }
        if b == 0 {
            return false;
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la < lb;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

fn mask_vertices(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |v| mask >> v & 1 == 1)
}

/// Maximizes `score` over all subsets; `score` returns `None` for excluded
/// subsets. Ties go to the lexicographically smallest subset.
fn best_subset(m: usize, mut score: impl FnMut(u64) -> Option<usize>) -> (usize, u64) {
    let mut best = (0usize, 0u64);
    let mut found = false;
    for mask in 0..1u64 << m {
        if let Some(s) = score(mask) {
            if !found || s > best.0 || (s == best.0 && lex_less(mask, best.1)) {
                best = (s, mask);
                found = true;
            }
        }
    }
    best
}

/// `alpha(G)` with a maximum stable set.
pub fn stability_number(g: &Graph) -> Result<(usize, Certificate)> {
    check_capacity(g, "stability number enumeration")?;
    let adj = g.neighbour_masks();
    let (alpha, mask) = best_subset(g.m(), |mask| {
        mask_vertices(mask)
            .all(|v| adj[v] & mask == 0)
            .then(|| mask.count_ones() as usize)
    });
    Ok((alpha, Certificate::new(CertificateKind::StableSet, mask_vertices(mask), alpha)))
}

/// `kappa(G)` with a maximum cut side `S`.
pub fn max_cut(g: &Graph) -> Result<(usize, Certificate)> {
    check_capacity(g, "max-cut enumeration")?;
    let adj = g.neighbour_masks();
    let (kappa, mask) = best_subset(g.m(), |mask| {
        Some(mask_vertices(mask).map(|v| (adj[v] & !mask).count_ones() as usize).sum())
    });
    Ok((kappa, Certificate::new(CertificateKind::CutPartition, mask_vertices(mask), kappa)))
}

/// `omega(G)` with a maximum clique.
pub fn clique_number(g: &Graph) -> Result<(usize, Certificate)> {
    check_capacity(g, "clique number enumeration")?;
    let adj = g.neighbour_masks();
    let (omega, mask) = best_subset(g.m(), |mask| {
        mask_vertices(mask)
            .all(|v| (mask & !(1 << v)) & !adj[v] == 0)
            .then(|| mask.count_ones() as usize)
    });
    Ok((omega, Certificate::new(CertificateKind::Clique, mask_vertices(mask), omega)))
}

/// Maximum of the directed-pair edge sum over the unit simplex, `1 - 1/omega`.
pub fn motzkin_straus_value(g: &Graph) -> Result<Rational> {
    let (omega, _) = clique_number(g)?;
    Ok(rational::int(1) - rational::frac(1, omega as i64))
}

/// `sum over (i, j) in E (both orientations) of x_i x_j`, exactly.
pub fn directed_pair_sum(g: &Graph, x: &[Rational]) -> Rational {
    g.edges().map(|(i, j)| rational::int(2) * x[i] * x[j]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn k3() -> Graph {
        Graph::complete(3).unwrap()
    }

    fn c5() -> Graph {
        Graph::cycle(5).unwrap()
    }

    #[test]
    fn dimacs_triangle_and_empty() {
        let g = Graph::parse_dimacs("p edge 3 3\ne 1 2\ne 2 3\ne 1 3").unwrap();
        assert_eq!(g, k3());
        assert_eq!(g.edge_count_undirected(), 3);
        assert_eq!(g.edge_count_directed(), 6);
        let e = Graph::parse_dimacs("p edge 2 0").unwrap();
        assert_eq!(e.m(), 2);
        assert_eq!(e.edge_count_undirected(), 0);
    }

    #[test]
    fn dimacs_collapses_duplicates_and_orientation() {
        let g = Graph::parse_dimacs("c comment\np edge 3 3\ne 2 1\ne 1 2\ne 3 2\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(Graph::parse_dimacs(&g.to_dimacs()).unwrap(), g);
        assert_eq!(g.to_dimacs(), "p edge 3 2\ne 1 2\ne 2 3\n");
    }

    #[test]
    fn dimacs_errors_name_the_line() {
        let cases = [
            ("p edge 3 1\ne 2 2", 2, "self-loop"),
            ("p edge 3 1\ne 1 4", 2, "out of range"),
            ("p graph 3 1", 1, "malformed header"),
            ("c x\ne 1 2", 2, "before the problem line"),
            ("c only a comment", 1, "missing"),
        ];
        for (text, want_line, fragment) in cases {
            match Graph::parse_dimacs(text) {
                Err(Error::Parse { line, message }) => {
                    assert_eq!(line, want_line, "{text:?}");
                    assert!(message.contains(fragment), "{message}");
                }
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn generators() {
        assert_eq!(Graph::complete(3).unwrap().edge_count_undirected(), 3);
        assert_eq!(c5().edge_count_undirected(), 5);
        assert_eq!(Graph::path(3).unwrap().edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(Graph::generate(GraphKind::Empty, 0, None, None).is_err());
        assert!(Graph::generate(GraphKind::Random, 4, Some(1), None).is_err());
        let a = Graph::generate(GraphKind::Random, 6, Some(1), Some(frac(1, 2))).unwrap();
        let b = Graph::generate(GraphKind::Random, 6, Some(1), Some(frac(1, 2))).unwrap();
        assert_eq!(a, b);
        assert_eq!(Graph::random(6, 1, int(1)).unwrap(), Graph::complete(6).unwrap());
        assert_eq!(Graph::random(6, 1, int(0)).unwrap(), Graph::empty(6).unwrap());
    }

    #[test]
    fn generator_specs() {
        assert_eq!(parse_generator_spec("complete:5").unwrap(), Graph::complete(5).unwrap());
        assert_eq!(parse_generator_spec("cycle:6").unwrap(), Graph::cycle(6).unwrap());
        assert_eq!(
            parse_generator_spec("random:7:seed=3:p=1/2").unwrap(),
            Graph::random(7, 3, frac(1, 2)).unwrap()
        );
        assert!(parse_generator_spec("cycle:6:seed=1").is_err());
        assert!(parse_generator_spec("wheel:6").is_err());
    }

    #[test]
    fn family_specs() {
        assert_eq!("all:5".parse::<GraphFamily>().unwrap(), GraphFamily::AllLabeled { max_m: 5 });
        let fam: GraphFamily = "random:7:count=4:seed=9".parse().unwrap();
        assert_eq!(fam.graphs().unwrap().len(), 4);
        assert_eq!(GraphFamily::AllLabeled { max_m: 3 }.graphs().unwrap().len(), 1 + 2 + 8);
        assert!("all:x".parse::<GraphFamily>().is_err());
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|m| nonisomorphic_graphs(m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }

    #[test]
    fn stability_examples() {
        let (alpha, w) = stability_number(&k3()).unwrap();
        assert_eq!((alpha, w.labels()), (1, vec![1]));
        assert_eq!(stability_number(&Graph::empty(4).unwrap()).unwrap().0, 4);
        let (alpha, w) = stability_number(&c5()).unwrap();
        assert_eq!((alpha, w.labels()), (2, vec![1, 3]));
    }

    #[test]
    fn max_cut_examples() {
        assert_eq!(max_cut(&Graph::complete(2).unwrap()).unwrap().0, 1);
        let (kappa, w) = max_cut(&k3()).unwrap();
        assert_eq!((kappa, w.labels()), (2, vec![1]));
        assert_eq!(max_cut(&c5()).unwrap().0, 4);
    }

    #[test]
    fn clique_examples() {
        assert_eq!(clique_number(&k3()).unwrap().0, 3);
        let (omega, w) = clique_number(&c5()).unwrap();
        assert_eq!((omega, w.labels()), (2, vec![1, 2]));
        assert_eq!(clique_number(&Graph::empty(4).unwrap()).unwrap().0, 1);
    }

    #[test]
    fn motzkin_straus_examples() {
        assert_eq!(motzkin_straus_value(&k3()).unwrap(), frac(2, 3));
        assert_eq!(motzkin_straus_value(&Graph::empty(3).unwrap()).unwrap(), int(0));
        assert_eq!(motzkin_straus_value(&c5()).unwrap(), frac(1, 2));
        // Uniform point on K3: 6 * (1/9).
        assert_eq!(directed_pair_sum(&k3(), &[frac(1, 3); 3]), frac(2, 3));
    }

    #[test]
    fn oracles_reject_large_graphs() {
        let g = Graph::empty(26).unwrap();
        assert!(matches!(stability_number(&g), Err(Error::Capacity { .. })));
        assert!(matches!(max_cut(&g), Err(Error::Capacity { .. })));
        assert!(matches!(clique_number(&g), Err(Error::Capacity { .. })));
    }

    #[test]
    fn adjacency_examples() {
        let a = Graph::complete(2).unwrap().adjacency_matrix();
        assert_eq!(a.as_matrix().rows_vec(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(Graph::empty(3).unwrap().adjacency_matrix().as_matrix().data().iter().all(|&x| x == 0.0));
        let p = Graph::path(3).unwrap().adjacency_matrix();
        assert_eq!(
            p.as_matrix().rows_vec(),
            vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]
        );
    }

    #[test]
    fn invalid_certificates_are_rejected() {
        let g = k3();
        assert!(Certificate::new(CertificateKind::StableSet, [0, 1], 2).validate(&g).is_err());
        assert!(Certificate::new(CertificateKind::Clique, [0, 1, 2], 3).validate(&g).is_ok());
        assert!(Certificate::new(CertificateKind::Clique, [0, 1], 3).validate(&g).is_err());
        assert!(Certificate::new(CertificateKind::CutPartition, [0], 1).validate(&g).is_err());
        assert!(Certificate::new(CertificateKind::CutPartition, [0], 2).validate(&g).is_ok());
        assert!(Certificate::new(CertificateKind::StableSet, [5], 1).validate(&g).is_err());
    }

    #[test]
    fn exhaustive_small_graph_properties() {
        for m in 1..=6 {
            for g in labeled_graphs(m).unwrap() {
                let (alpha, sw) = stability_number(&g).unwrap();
                let (omega_bar, _) = clique_number(&g.complement()).unwrap();
                assert_eq!(alpha, omega_bar, "{g}");
                let (kappa, cw) = max_cut(&g).unwrap();
                let e = g.edge_count_undirected();
                assert!(2 * kappa >= e && kappa <= e, "{g}");
                if g.is_bipartite() {
                    assert_eq!(kappa, e, "{g}");
                }
                let (omega, qw) = clique_number(&g).unwrap();
                for w in [&sw, &cw, &qw] {
                    w.validate(&g).unwrap();
                }
                let uniform: Vec<Rational> = (0..m)
                    .map(|v| if qw.vertices.contains(&v) { frac(1, omega as i64) } else { int(0) })
                    .collect();
                assert_eq!(directed_pair_sum(&g, &uniform), motzkin_straus_value(&g).unwrap());
            }
        }
    }
}
