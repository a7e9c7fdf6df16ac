//! DCell construction.
//!
//! A level-`k` DCell built from `n`-port switches has `t_k` servers, with
//! `t_0 = n` and `t_k = t_{k-1} (t_{k-1} + 1)`. Servers are addressed either by
//! their digit tuple `(α_k, …, α_0)` or by `uid_k`, the mixed-radix value of
//! that tuple. All routines here work on `uid_k` integers and convert to
//! labels only for display and serialization.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{DcellError, Result};
use crate::path::Adjacency;

/// Default cap on the number of vertices any explicit construction may create.
pub const DEFAULT_VERTEX_CAP: u64 = 100_000;

/// Switch port count `n` and recursion level `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    n: usize,
    k: usize,
}

impl Params {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(DcellError::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        Ok(Params { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of servers, `t_k`.
    pub fn vertex_count(&self) -> Result<u64> {
        t(self.n, self.k)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DCell(n={}, k={})", self.n, self.k)
    }
}

/// Number of servers in a level-`k` DCell with `n`-port switches.
pub fn t(n: usize, k: usize) -> Result<u64> {
    if n < 2 {
        return Err(DcellError::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    let mut size = n as u64;
    for level in 1..=k {
        size = size
            .checked_add(1)
            .and_then(|s1| size.checked_mul(s1))
            .ok_or_else(|| DcellError::Overflow(format!("t_{level} for n={n}")))?;
    }
    Ok(size)
}

/// Server label `(α_k, …, α_0)`, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub digits: Vec<u64>,
}

impl VertexLabel {
    pub fn new(digits: Vec<u64>) -> Self {
        VertexLabel { digits }
    }

    /// Level of the DCell this label addresses (number of digits minus one).
    pub fn level(&self) -> usize {
        self.digits.len().saturating_sub(1)
    }

    /// Digit `α_j`.
    pub fn digit(&self, j: usize) -> Option<u64> {
        let len = self.digits.len();
        (j < len).then(|| self.digits[len - 1 - j])
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// An undirected edge with its level annotation. Endpoints are stored as
/// `uid_k` with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: u64,
    pub v: u64,
    pub level: usize,
}

impl Edge {
    pub fn new(a: u64, b: u64, level: usize) -> Self {
        Edge { u: a.min(b), v: a.max(b), level }
    }
}

/// Assignment of level-`k` edges between copies of `D_{k-1}`.
///
/// For copies `a < b` out of `copies = t_{k-1} + 1`, returns
/// `(uid_{k-1} in copy a, uid_{k-1} in copy b)`.
pub trait ConnectionRule: Send + Sync {
    fn name(&self) -> &str;
    fn endpoints(&self, level: usize, copies: u64, a: u64, b: u64) -> (u64, u64);
}

/// The standard rule: vertex `b-1` of copy `a` joins vertex `a` of copy `b`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultRule;

impl ConnectionRule for DefaultRule {
    fn name(&self) -> &str {
        "dcell"
    }

    fn endpoints(&self, _level: usize, _copies: u64, a: u64, b: u64) -> (u64, u64) {
        (b - 1, a)
    }
}

#[derive(Clone)]
enum RuleTable {
    Default,
    /// `tables[level - 1][copy * t_{level-1} + inner] = (partner copy, partner inner)`
    Custom {
        name: String,
        tables: Vec<Vec<(u64, u64)>>,
    },
}

/// Arithmetic view of a DCell: sizes, labels and neighbor queries without
/// materializing the graph.
#[derive(Clone)]
pub struct Dcell {
    params: Params,
    sizes: Vec<u64>,
    rule: RuleTable,
}

impl fmt::Debug for Dcell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dcell")
            .field("params", &self.params)
            .field("sizes", &self.sizes)
            .field("rule", &self.rule_name())
            .finish()
    }
}

impl Dcell {
    /// DCell with the standard connection rule.
    pub fn new(params: Params) -> Result<Self> {
        let sizes = (0..=params.k).map(|j| t(params.n, j)).collect::<Result<Vec<_>>>()?;
        Ok(Dcell { params, sizes, rule: RuleTable::Default })
    }

    pub fn from_nk(n: usize, k: usize) -> Result<Self> {
        Dcell::new(Params::new(n, k)?)
    }

    /// DCell with a caller-supplied connection rule. The rule is tabulated and
    /// checked: every vertex must end up with exactly one edge per level and
    /// every copy pair must be joined exactly once.
    pub fn with_rule(params: Params, rule: Arc<dyn ConnectionRule>, vertex_cap: u64) -> Result<Self> {
        let base = Dcell::new(params)?;
        let top = base.size(params.k);
        if top > vertex_cap {
            return Err(DcellError::ResourceLimit(format!("t_{} = {top} exceeds cap {vertex_cap}", params.k)));
        }
        let mut tables = Vec::with_capacity(params.k);
        for level in 1..=params.k {
            let inner = base.size(level - 1);
            let copies = inner + 1;
            let mut table = vec![(u64::MAX, u64::MAX); (copies * inner) as usize];
            for a in 0..copies {
                for b in (a + 1)..copies {
                    let (ia, ib) = rule.endpoints(level, copies, a, b);
                    if ia >= inner || ib >= inner {
                        return Err(DcellError::InvalidRule(format!(
                            "level {level} pair ({a},{b}) maps to uid outside 0..{inner}"
                        )));
                    }
                    for (slot, val) in [((a * inner + ia) as usize, (b, ib)), ((b * inner + ib) as usize, (a, ia))] {
                        if table[slot].0 != u64::MAX {
                            return Err(DcellError::InvalidRule(format!(
                                "level {level}: vertex {slot} receives more than one level edge"
                            )));
                        }
                        table[slot] = val;
                    }
                }
            }
            // copies * (copies - 1) endpoints fill copies * inner slots exactly,
            // so uniqueness implies every vertex got one edge.
            tables.push(table);
        }
        Ok(Dcell { params, sizes: base.sizes, rule: RuleTable::Custom { name: rule.name().to_string(), tables } })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    /// `t_j` for `0 ≤ j ≤ k`.
    pub fn size(&self, j: usize) -> u64 {
        self.sizes[j]
    }

    /// `t_k`.
    pub fn vertex_count(&self) -> u64 {
        self.sizes[self.params.k]
    }

    pub fn is_default_rule(&self) -> bool {
        matches!(self.rule, RuleTable::Default)
    }

    pub fn rule_name(&self) -> &str {
        match &self.rule {
            RuleTable::Default => DefaultRule.name(),
            RuleTable::Custom { name, .. } => name,
        }
    }

    fn check_uid(&self, x: u64) -> Result<()> {
        if x >= self.vertex_count() {
            return Err(DcellError::OutOfRange(format!("uid {x} not in 0..{}", self.vertex_count())));
        }
        Ok(())
    }

    /// `uid_j` of the last `j + 1` digits of `label`.
    pub fn uid(&self, label: &VertexLabel, j: usize) -> Result<u64> {
        if j > self.params.k {
            return Err(DcellError::InvalidLevel { level: j, reason: format!("exceeds k={}", self.params.k) });
        }
        if label.digits.len() < j + 1 {
            return Err(DcellError::InvalidLabel(format!("{label} has fewer than {} digits", j + 1)));
        }
        let mut uid = 0u64;
        for level in 0..=j {
            let digit = label.digit(level).expect("length checked");
            let bound = if level == 0 { self.params.n as u64 } else { self.sizes[level - 1] + 1 };
            if digit >= bound {
                return Err(DcellError::InvalidLabel(format!("digit α_{level} = {digit} not below {bound}")));
            }
            uid += if level == 0 { digit } else { digit * self.sizes[level - 1] };
        }
        Ok(uid)
    }

    /// Inverse of [`Dcell::uid`]: the label whose last `j + 1` digits have
    /// `uid_j = u`, with `prefix` prepended.
    pub fn label_from_uid(&self, prefix: &[u64], u: u64, j: usize) -> Result<VertexLabel> {
        if j > self.params.k {
            return Err(DcellError::InvalidLevel { level: j, reason: format!("exceeds k={}", self.params.k) });
        }
        if u >= self.sizes[j] {
            return Err(DcellError::OutOfRange(format!("uid {u} not in 0..{}", self.sizes[j])));
        }
        let mut suffix = Vec::with_capacity(j + 1);
        let mut rest = u;
        for level in (1..=j).rev() {
            suffix.push(rest / self.sizes[level - 1]);
            rest %= self.sizes[level - 1];
        }
        suffix.push(rest);
        let mut digits = prefix.to_vec();
        digits.extend(suffix);
        Ok(VertexLabel { digits })
    }

    /// Full label of a `uid_k`.
    pub fn label(&self, x: u64) -> Result<VertexLabel> {
        self.label_from_uid(&[], x, self.params.k)
    }

    /// The unique level-`j` neighbor `N(x, j)`.
    pub fn level_neighbor(&self, x: u64, j: usize) -> Result<u64> {
        if j == 0 {
            return Err(DcellError::InvalidLevel {
                level: 0,
                reason: "level-0 neighbors are plural; use level0_neighbors".into(),
            });
        }
        if j > self.params.k {
            return Err(DcellError::InvalidLevel { level: j, reason: format!("exceeds k={}", self.params.k) });
        }
        self.check_uid(x)?;
        Ok(self.neighbor_unchecked(x, j))
    }

    /// `N(x, j)` without range checks; `1 ≤ j ≤ k` and `x < t_k` are required.
    #[inline]
    pub fn neighbor_unchecked(&self, x: u64, j: usize) -> u64 {
        let block = self.sizes[j];
        let inner_size = self.sizes[j - 1];
        let local = x % block;
        let base = x - local;
        let copy = local / inner_size;
        let inner = local % inner_size;
        let (pc, pi) = self.partner(j, copy, inner);
        base + pc * inner_size + pi
    }

    #[inline]
    fn partner(&self, level: usize, copy: u64, inner: u64) -> (u64, u64) {
        match &self.rule {
            RuleTable::Default => {
                if inner >= copy {
                    (inner + 1, copy)
                } else {
                    (inner, copy - 1)
                }
            }
            RuleTable::Custom { tables, .. } => {
                let inner_size = self.sizes[level - 1];
                tables[level - 1][(copy * inner_size + inner) as usize]
            }
        }
    }

    /// The level-`k` edge joining copies `a < b` of `D_{k-1}` inside `D_k`,
    /// with endpoints given as `uid_k`.
    pub fn level_edge(&self, k: usize, a: u64, b: u64) -> Result<Edge> {
        if k == 0 || k > self.params.k {
            return Err(DcellError::InvalidLevel { level: k, reason: "need 1 ≤ level ≤ k".into() });
        }
        let inner = self.sizes[k - 1];
        if a == b || a > inner || b > inner {
            return Err(DcellError::InvalidPair { a, b });
        }
        let (a, b) = (a.min(b), a.max(b));
        let (ia, ib) = match &self.rule {
            RuleTable::Default => DefaultRule.endpoints(k, inner + 1, a, b),
            RuleTable::Custom { .. } => (0..inner)
                .find_map(|ia| {
                    let (pc, pi) = self.partner(k, a, ia);
                    (pc == b).then_some((ia, pi))
                })
                .ok_or(DcellError::InvalidPair { a, b })?,
        };
        Ok(Edge::new(a * inner + ia, b * inner + ib, k))
    }

    /// Copy index of `x` at level `j` (its digit `α_j` inside its `D_j`).
    #[inline]
    pub fn copy_of(&self, x: u64, j: usize) -> u64 {
        (x % self.sizes[j]) / self.sizes[j - 1]
    }

    /// The `n − 1` vertices differing from `x` only in `α_0`.
    pub fn level0_neighbors(&self, x: u64) -> Result<Vec<u64>> {
        self.check_uid(x)?;
        let n = self.params.n as u64;
        let base = x - x % n;
        Ok((base..base + n).filter(|&y| y != x).collect())
    }

    /// All neighbors of `x` with edge levels, level 0 first.
    pub fn neighbors(&self, x: u64) -> Result<Vec<(u64, usize)>> {
        let mut out: Vec<(u64, usize)> = self.level0_neighbors(x)?.into_iter().map(|y| (y, 0)).collect();
        for j in 1..=self.params.k {
            out.push((self.neighbor_unchecked(x, j), j));
        }
        Ok(out)
    }

    /// Level of the edge `(a, b)` if it exists.
    pub fn edge_level(&self, a: u64, b: u64) -> Option<usize> {
        let top = self.vertex_count();
        if a >= top || b >= top || a == b {
            return None;
        }
        let n = self.params.n as u64;
        if a / n == b / n {
            return Some(0);
        }
        // lowest level whose block contains both
        let j = (1..=self.params.k).find(|&j| a / self.sizes[j] == b / self.sizes[j])?;
        (self.neighbor_unchecked(a, j) == b).then_some(j)
    }
}

impl Adjacency for Dcell {
    fn contains(&self, v: u64) -> bool {
        v < self.vertex_count()
    }

    fn adjacent(&self, u: u64, v: u64) -> bool {
        self.edge_level(u, v).is_some()
    }

    fn order(&self) -> u64 {
        self.vertex_count()
    }
}

/// Explicit DCell graph: adjacency lists keyed by `uid_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    params: Params,
    adjacency: Vec<Vec<(u64, usize)>>,
}

/// Materializes `D_k` under `dcell`'s connection rule, refusing graphs above `vertex_cap`.
pub fn build_graph(dcell: &Dcell, vertex_cap: u64) -> Result<Topology> {
    let count = dcell.vertex_count();
    if count > vertex_cap {
        return Err(DcellError::ResourceLimit(format!("{} has {count} vertices, cap is {vertex_cap}", dcell.params())));
    }
    let adjacency = (0..count).map(|x| dcell.neighbors(x)).collect::<Result<Vec<_>>>()?;
    Ok(Topology { params: dcell.params(), adjacency })
}

impl Topology {
    /// Graph from an explicit edge set; used when re-reading exported files.
    pub fn from_edges(params: Params, vertex_count: u64, edges: &[Edge]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count as usize];
        let mut seen = BTreeSet::new();
        for e in edges {
            if e.u >= vertex_count || e.v >= vertex_count || e.u == e.v {
                return Err(DcellError::Parse(format!("edge ({}, {}) out of range", e.u, e.v)));
            }
            if !seen.insert((e.u, e.v)) {
                return Err(DcellError::Parse(format!("duplicate edge ({}, {})", e.u, e.v)));
            }
            adjacency[e.u as usize].push((e.v, e.level));
            adjacency[e.v as usize].push((e.u, e.level));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(y, level)| (level, y));
        }
        Ok(Topology { params, adjacency })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn vertex_count(&self) -> u64 {
        self.adjacency.len() as u64
    }

    pub fn edge_count(&self) -> u64 {
        self.adjacency.iter().map(Vec::len).sum::<usize>() as u64 / 2
    }

    pub fn neighbors(&self, x: u64) -> &[(u64, usize)] {
        &self.adjacency[x as usize]
    }

    pub fn degree(&self, x: u64) -> usize {
        self.adjacency[x as usize].len()
    }

    /// Regular degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == first).then_some(first)
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        (a as usize) < self.adjacency.len() && self.adjacency[a as usize].iter().any(|&(y, _)| y == b)
    }

    /// Every edge once, sorted by `(u, v)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(x, list)| {
                list.iter().filter(move |&&(y, _)| (x as u64) < y).map(move |&(y, level)| Edge::new(x as u64, y, level))
            })
            .collect();
        out.sort();
        out
    }

    /// Number of neighbors of `x` reached over level-`level` edges.
    pub fn level_degree(&self, x: u64, level: usize) -> usize {
        self.adjacency[x as usize].iter().filter(|&&(_, l)| l == level).count()
    }

    /// BFS connectivity check.
    pub fn is_connected(&self) -> bool {
        let count = self.adjacency.len();
        if count == 0 {
            return true;
        }
        let mut seen = vec![false; count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    reached += 1;
                    stack.push(y as usize);
                }
            }
        }
        reached == count
    }
}

impl Adjacency for Topology {
    fn contains(&self, v: u64) -> bool {
        v < self.vertex_count()
    }

    fn adjacent(&self, u: u64, v: u64) -> bool {
        self.has_edge(u, v)
    }

    fn order(&self) -> u64 {
        self.vertex_count()
    }
}

/// Edge-list text: header `# dcell n=<n> k=<k> t=<t_k>`, then `uid_u uid_v level` per line.
pub fn to_edge_list(topology: &Topology) -> String {
    let p = topology.params();
    let mut out = format!("# dcell n={} k={} t={}\n", p.n(), p.k(), topology.vertex_count());
    for e in topology.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.level));
    }
    out
}

/// Parses the edge-list format written by [`to_edge_list`].
pub fn parse_edge_list(text: &str) -> Result<Topology> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| DcellError::Parse("empty edge list".into()))?;
    let mut n = None;
    let mut k = None;
    let mut count = None;
    let rest = header.strip_prefix("# dcell").ok_or_else(|| DcellError::Parse(format!("bad header: {header}")))?;
    for field in rest.split_whitespace() {
        let (key, value) =
            field.split_once('=').ok_or_else(|| DcellError::Parse(format!("bad header field: {field}")))?;
        let value: u64 = value.parse().map_err(|_| DcellError::Parse(format!("bad number: {value}")))?;
        match key {
            "n" => n = Some(value as usize),
            "k" => k = Some(value as usize),
            "t" => count = Some(value),
            _ => return Err(DcellError::Parse(format!("unknown header key: {key}"))),
        }
    }
    let (n, k, count) = match (n, k, count) {
        (Some(n), Some(k), Some(c)) => (n, k, c),
        _ => return Err(DcellError::Parse("header must carry n, k and t".into())),
    };
    let mut edges = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(DcellError::Parse(format!("line {}: expected 3 fields", lineno + 2)));
        }
        let parse =
            |s: &str| s.parse::<u64>().map_err(|_| DcellError::Parse(format!("line {}: bad number {s}", lineno + 2)));
        edges.push(Edge::new(parse(fields[0])?, parse(fields[1])?, parse(fields[2])? as usize));
    }
    Topology::from_edges(Params::new(n, k)?, count, &edges)
}

/// Graphviz export; vertices are named by their dotted digit tuple.
pub fn to_dot(dcell: &Dcell, topology: &Topology) -> Result<String> {
    let p = topology.params();
    let mut out = format!("graph dcell_n{}_k{} {{\n", p.n(), p.k());
    for x in 0..topology.vertex_count() {
        out.push_str(&format!("  \"{}\" [uid={}];\n", dcell.label(x)?, x));
    }
    for e in topology.edges() {
        out.push_str(&format!("  \"{}\" -- \"{}\" [level={}];\n", dcell.label(e.u)?, dcell.label(e.v)?, e.level));
    }
    out.push_str("}\n");
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonVertex {
    pub uid: u64,
    pub label: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonTopology {
    pub n: usize,
    pub k: usize,
    pub t: u64,
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<Edge>,
}

/// JSON document carrying both uids and digit tuples for each vertex.
pub fn to_json(dcell: &Dcell, topology: &Topology) -> Result<JsonTopology> {
    let p = topology.params();
    let vertices = (0..topology.vertex_count())
        .map(|x| Ok(JsonVertex { uid: x, label: dcell.label(x)?.digits }))
        .collect::<Result<Vec<_>>>()?;
    Ok(JsonTopology { n: p.n(), k: p.k(), t: topology.vertex_count(), vertices, edges: topology.edges() })
}

impl JsonTopology {
    pub fn into_topology(self) -> Result<Topology> {
        Topology::from_edges(Params::new(self.n, self.k)?, self.t, &self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(n: usize, k: usize) -> Dcell {
        Dcell::from_nk(n, k).unwrap()
    }

    #[test]
    fn sizes_follow_recursion() {
        assert_eq!(t(2, 0).unwrap(), 2);
        assert_eq!(t(2, 1).unwrap(), 6);
        assert_eq!(t(4, 1).unwrap(), 20);
        assert_eq!(t(2, 2).unwrap(), 42);
        assert_eq!(t(3, 2).unwrap(), 156);
        assert_eq!(t(2, 3).unwrap(), 1806);
    }

    #[test]
    fn size_overflow_is_reported() {
        assert!(matches!(t(10, 6), Err(DcellError::Overflow(_))));
        assert!(matches!(t(1, 0), Err(DcellError::InvalidParams(_))));
    }

    #[test]
    fn uid_examples() {
        let d = dc(3, 0);
        assert_eq!(d.uid(&VertexLabel::new(vec![0]), 0).unwrap(), 0);
        let d = dc(2, 1);
        assert_eq!(d.uid(&VertexLabel::new(vec![1, 0]), 1).unwrap(), 2);
        assert_eq!(d.label_from_uid(&[], 2, 1).unwrap().digits, vec![1, 0]);
        assert_eq!(dc(3, 0).label_from_uid(&[], 0, 0).unwrap().digits, vec![0]);
        assert!(matches!(d.label_from_uid(&[], 6, 1), Err(DcellError::OutOfRange(_))));
        assert!(matches!(d.uid(&VertexLabel::new(vec![0, 2]), 1), Err(DcellError::InvalidLabel(_))));
    }

    #[test]
    fn uid_roundtrip_dcell2() {
        let d = dc(2, 2);
        for u in 0..42 {
            let label = d.label_from_uid(&[], u, 2).unwrap();
            assert_eq!(d.uid(&label, 2).unwrap(), u);
        }
        // suffix uid under a prefix
        let label = d.label_from_uid(&[5], 3, 1).unwrap();
        assert_eq!(label.digits, vec![5, 1, 1]);
        assert_eq!(d.uid(&label, 1).unwrap(), 3);
    }

    #[test]
    fn level_neighbor_examples() {
        let d = dc(2, 1);
        let x = d.uid(&VertexLabel::new(vec![0, 0]), 1).unwrap();
        assert_eq!(d.label(d.level_neighbor(x, 1).unwrap()).unwrap().digits, vec![1, 0]);
        let x = d.uid(&VertexLabel::new(vec![0, 1]), 1).unwrap();
        assert_eq!(d.label(d.level_neighbor(x, 1).unwrap()).unwrap().digits, vec![2, 0]);
        assert!(matches!(d.level_neighbor(0, 0), Err(DcellError::InvalidLevel { .. })));
    }

    #[test]
    fn level_neighbor_is_involution() {
        let d = dc(3, 2);
        for x in 0..d.vertex_count() {
            for j in 1..=2 {
                let y = d.level_neighbor(x, j).unwrap();
                assert_ne!(x, y);
                assert_eq!(d.level_neighbor(y, j).unwrap(), x);
                // the edge crosses exactly the copy boundary at level j
                assert_eq!(x / d.size(j), y / d.size(j));
                assert_ne!(d.copy_of(x, j), d.copy_of(y, j));
                assert_eq!(d.edge_level(x, y), Some(j));
            }
        }
    }

    #[test]
    fn level_edge_examples() {
        let d = dc(2, 1);
        let e = d.level_edge(1, 0, 1).unwrap();
        assert_eq!((d.label(e.u).unwrap().digits, d.label(e.v).unwrap().digits), (vec![0, 0], vec![1, 0]));
        let e = d.level_edge(1, 1, 2).unwrap();
        assert_eq!((d.label(e.u).unwrap().digits, d.label(e.v).unwrap().digits), (vec![1, 1], vec![2, 1]));
        assert!(matches!(d.level_edge(1, 1, 1), Err(DcellError::InvalidPair { .. })));

        let d = dc(2, 2);
        let mut edges = BTreeSet::new();
        for a in 0..7 {
            for b in (a + 1)..7 {
                edges.insert(d.level_edge(2, a, b).unwrap());
            }
        }
        assert_eq!(edges.len(), 21);
    }

    #[test]
    fn small_graphs() {
        let g = build_graph(&dc(2, 1), DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.regular_degree(), Some(2));
        assert!(g.is_connected());

        let g = build_graph(&dc(3, 0), DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.regular_degree(), Some(2));

        let g = build_graph(&dc(3, 1), DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.regular_degree()), (12, 18, Some(3)));
    }

    #[test]
    fn level0_examples() {
        assert_eq!(dc(2, 1).level0_neighbors(0).unwrap(), vec![1]);
        assert_eq!(dc(4, 0).level0_neighbors(2).unwrap(), vec![0, 1, 3]);
        let d = dc(3, 1);
        let mut count = 0;
        for x in 0..d.vertex_count() {
            count += d.level0_neighbors(x).unwrap().len();
        }
        // 4 triangles, each edge seen twice
        assert_eq!(count, 2 * 4 * 3);
    }

    #[test]
    fn build_graph_respects_cap() {
        assert!(matches!(build_graph(&dc(3, 2), 100), Err(DcellError::ResourceLimit(_))));
    }

    #[test]
    fn edge_list_roundtrip() {
        let d = dc(3, 1);
        let g = build_graph(&d, DEFAULT_VERTEX_CAP).unwrap();
        let text = to_edge_list(&g);
        assert!(text.starts_with("# dcell n=3 k=1 t=12\n"));
        assert_eq!(parse_edge_list(&text).unwrap(), g);
        assert!(parse_edge_list("junk").is_err());
    }

    #[test]
    fn dot_names_vertices_by_label() {
        let d = dc(2, 1);
        let g = build_graph(&d, DEFAULT_VERTEX_CAP).unwrap();
        let dot = to_dot(&d, &g).unwrap();
        assert!(dot.contains("\"0.0\" -- \"0.1\" [level=0]"));
        assert!(dot.contains("\"0.0\" -- \"1.0\" [level=1]"));
    }

    /// In copy `c`, the vertex toward copy `p` is `(p - c - 1) mod copies`.
    struct Rotation;
    impl ConnectionRule for Rotation {
        fn name(&self) -> &str {
            "rotation"
        }
        fn endpoints(&self, _level: usize, copies: u64, a: u64, b: u64) -> (u64, u64) {
            (b - a - 1, copies + a - b - 1)
        }
    }

    struct Broken;
    impl ConnectionRule for Broken {
        fn name(&self) -> &str {
            "broken"
        }
        fn endpoints(&self, _level: usize, _copies: u64, _a: u64, _b: u64) -> (u64, u64) {
            (0, 0)
        }
    }

    #[test]
    fn custom_rules_are_validated() {
        let p = Params::new(3, 2).unwrap();
        let err = Dcell::with_rule(p, Arc::new(Broken), DEFAULT_VERTEX_CAP).unwrap_err();
        assert_eq!(err.code(), "invalid_rule");

        let d = Dcell::with_rule(p, Arc::new(DefaultRule), DEFAULT_VERTEX_CAP).unwrap();
        assert!(!d.is_default_rule());
        let reference = dc(3, 2);
        for x in 0..d.vertex_count() {
            assert_eq!(d.neighbors(x).unwrap(), reference.neighbors(x).unwrap());
        }
    }

    #[test]
    fn custom_rule_graph_is_regular() {
        let p = Params::new(3, 2).unwrap();
        let d = Dcell::with_rule(p, Arc::new(Rotation), DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(d.rule_name(), "rotation");
        let g = build_graph(&d, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(g.regular_degree(), Some(4));
        assert_ne!(g, build_graph(&dc(3, 2), DEFAULT_VERTEX_CAP).unwrap());
        for x in 0..d.vertex_count() {
            for j in 1..=2 {
                assert_eq!(g.level_degree(x, j), 1);
                let y = d.level_neighbor(x, j).unwrap();
                assert_eq!(d.level_neighbor(y, j).unwrap(), x);
            }
        }
        for a in 0..13 {
            for b in (a + 1)..13 {
                let e = d.level_edge(2, a, b).unwrap();
                assert_eq!((d.copy_of(e.u, 2), d.copy_of(e.v, 2)), (a, b));
            }
        }
    }
}
