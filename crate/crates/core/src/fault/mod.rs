//! Hamiltonian paths and cycles in DCells with faulty vertices and links.
//!
//! `D_k` with `|F| ≤ n+k−4` faults keeps a Hamiltonian path between any two
//! surviving vertices, and with `|F| ≤ n+k−3` faults keeps a Hamiltonian
//! cycle. The construction recurses over the copies of `D_{k-1}`: copies with
//! few faults are joined by arbitrary paths, a copy with one fault more only
//! through an edge of one of its Hamiltonian cycles, and a route through the
//! copy graph stitches the pieces together.

mod complete;
mod route;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::construct::{exit_toward, Builder};
use crate::error::{DcellError, Result};
use crate::oracle::{find_hc, find_hp, CertKind, SmallGraph, ORACLE_CAP};
use crate::path::{verify_cycle, verify_path, Adjacency, PathCheck};
use crate::topology::{Dcell, Edge, VertexLabel};

use complete::{complete_hc, complete_hp};
use route::{find_route, RouteProblem};

type RouteSolver<'a> = dyn Fn(&[(usize, usize)]) -> Option<Vec<usize>> + 'a;

/// Combinations of special-copy choices tried per route.
const CHOICE_ATTEMPTS: usize = 400;
/// Search steps allowed for one copy-graph route.
const ROUTE_BUDGET: u64 = 60_000;
/// Anchor pairs tried before giving up on a level.
const PAIR_ATTEMPTS: usize = 64;

/// A faulty vertex or a faulty link, by uid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FaultElement {
    Vertex(u64),
    /// Endpoints with the smaller uid first.
    Edge(u64, u64),
}

/// Faulty vertices and links of one DCell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultSet {
    vertices: BTreeSet<u64>,
    edges: BTreeSet<(u64, u64)>,
}

/// JSON form of a fault set: `{"vertices": [uid, ...], "edges": [[uid, uid], ...]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultsFile {
    #[serde(default)]
    pub vertices: Vec<u64>,
    #[serde(default)]
    pub edges: Vec<[u64; 2]>,
}

impl FaultSet {
    pub fn new() -> Self {
        FaultSet::default()
    }

    pub fn from_parts(
        dcell: &Dcell,
        vertices: impl IntoIterator<Item = u64>,
        edges: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self> {
        let mut f = FaultSet::new();
        for x in vertices {
            f.add_vertex(dcell, x)?;
        }
        for (a, b) in edges {
            f.add_edge(dcell, a, b)?;
        }
        Ok(f)
    }

    pub fn add_vertex(&mut self, dcell: &Dcell, x: u64) -> Result<()> {
        if x >= dcell.vertex_count() {
            return Err(DcellError::InvalidArgument(format!("faulty vertex {x} is not in {}", dcell.params())));
        }
        self.vertices.insert(x);
        Ok(())
    }

    pub fn add_edge(&mut self, dcell: &Dcell, a: u64, b: u64) -> Result<()> {
        if dcell.edge_level(a, b).is_none() {
            return Err(DcellError::InvalidArgument(format!(
                "faulty link ({a}, {b}) is not an edge of {}",
                dcell.params()
            )));
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    /// `|F|`, counting vertices and links.
    pub fn len(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn has_vertex(&self, x: u64) -> bool {
        self.vertices.contains(&x)
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = u64> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.edges.iter().copied()
    }

    /// Vertices first, then links, each in ascending order.
    pub fn elements(&self) -> Vec<FaultElement> {
        self.vertices
            .iter()
            .map(|&x| FaultElement::Vertex(x))
            .chain(self.edges.iter().map(|&(a, b)| FaultElement::Edge(a, b)))
            .collect()
    }

    pub fn vertex_labels(&self, dcell: &Dcell) -> Result<Vec<VertexLabel>> {
        self.vertices.iter().map(|&x| dcell.label(x)).collect()
    }

    pub fn faulty_edges(&self, dcell: &Dcell) -> Vec<Edge> {
        self.edges.iter().map(|&(a, b)| Edge::new(a, b, dcell.edge_level(a, b).expect("validated on insert"))).collect()
    }

    pub fn from_file(dcell: &Dcell, file: &FaultsFile) -> Result<Self> {
        FaultSet::from_parts(dcell, file.vertices.iter().copied(), file.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_file(&self) -> FaultsFile {
        FaultsFile { vertices: self.vertices().collect(), edges: self.edges().map(|(a, b)| [a, b]).collect() }
    }

    pub fn from_json(dcell: &Dcell, text: &str) -> Result<Self> {
        let file: FaultsFile = serde_json::from_str(text)?;
        FaultSet::from_file(dcell, &file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }
}

/// `D_k \ F`: adjacency that skips faulty vertices and links.
#[derive(Debug, Clone, Copy)]
pub struct FaultyView<'a> {
    pub dcell: &'a Dcell,
    pub faults: &'a FaultSet,
}

impl<'a> FaultyView<'a> {
    pub fn new(dcell: &'a Dcell, faults: &'a FaultSet) -> Self {
        FaultyView { dcell, faults }
    }
}

impl Adjacency for FaultyView<'_> {
    fn contains(&self, v: u64) -> bool {
        v < self.dcell.vertex_count() && !self.faults.has_vertex(v)
    }
    fn adjacent(&self, u: u64, v: u64) -> bool {
        self.contains(u) && self.contains(v) && self.dcell.edge_level(u, v).is_some() && !self.faults.has_edge(u, v)
    }
    fn order(&self) -> u64 {
        self.dcell.vertex_count() - self.faults.vertices.len() as u64
    }
}

/// Checks a path or cycle against `D_k \ F`. For paths, `endpoints` pins the
/// first and last vertex.
pub fn verify_fault_certificate(
    view: &FaultyView,
    kind: CertKind,
    seq: &[u64],
    endpoints: Option<(u64, u64)>,
) -> PathCheck {
    match kind {
        CertKind::Cycle => verify_cycle(view, seq),
        _ => {
            let (u, v) = endpoints.unwrap_or((seq.first().copied().unwrap_or(0), seq.last().copied().unwrap_or(0)));
            verify_path(view, seq, u, v, true)
        }
    }
}

/// Faults of `D_k` split by the copy of `D_{k-1}` containing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyFaults {
    /// `per_copy[i]` is `F_i`.
    pub per_copy: Vec<Vec<FaultElement>>,
    /// Faulty level-`k` links, which belong to no copy.
    pub cross: Vec<FaultElement>,
    /// Copy with the most faults, smallest index on ties.
    pub lambda: u64,
}

pub fn per_copy_faults(dcell: &Dcell, faults: &FaultSet) -> Result<CopyFaults> {
    let k = dcell.k();
    if k == 0 {
        return Err(DcellError::InvalidLevel { level: 0, reason: "D_0 has no copies".into() });
    }
    let inner = dcell.size(k - 1);
    let mut per_copy = vec![Vec::new(); inner as usize + 1];
    let mut cross = Vec::new();
    for e in faults.elements() {
        match e {
            FaultElement::Vertex(x) => per_copy[(x / inner) as usize].push(e),
            FaultElement::Edge(a, b) if a / inner == b / inner => per_copy[(a / inner) as usize].push(e),
            FaultElement::Edge(..) => cross.push(e),
        }
    }
    let lambda = argmax_len(&per_copy) as u64;
    Ok(CopyFaults { per_copy, cross, lambda })
}

fn argmax_len(per_copy: &[Vec<FaultElement>]) -> usize {
    let mut best = 0;
    for (i, f) in per_copy.iter().enumerate() {
        if f.len() > per_copy[best].len() {
            best = i;
        }
    }
    best
}

fn invariant(msg: impl Into<String>) -> DcellError {
    DcellError::Invariant(msg.into())
}

fn has_vertex(faults: &[FaultElement], x: u64) -> bool {
    faults.contains(&FaultElement::Vertex(x))
}

fn has_edge(faults: &[FaultElement], a: u64, b: u64) -> bool {
    faults.contains(&FaultElement::Edge(a.min(b), a.max(b)))
}

/// Path from `a` to `b` along cycle `c` after removing the cycle edge `(a, b)`.
fn cycle_minus_edge(c: &[u64], a: u64, b: u64) -> Option<Vec<u64>> {
    let len = c.len();
    let ia = c.iter().position(|&x| x == a)?;
    if c[(ia + 1) % len] == b {
        Some((0..len).map(|s| c[(ia + len - s) % len]).collect())
    } else if c[(ia + len - 1) % len] == b {
        Some((0..len).map(|s| c[(ia + s) % len]).collect())
    } else {
        None
    }
}

/// One `D_j` block of the recursion seen as copies of `D_{j-1}`.
struct Level<'f> {
    j: usize,
    base: u64,
    inner: u64,
    faults: &'f [FaultElement],
    per_copy: Vec<Vec<FaultElement>>,
    dead: HashSet<(usize, usize)>,
    /// Faults a copy may hold and still be Hamiltonian-connected.
    h: usize,
}

impl<'f> Level<'f> {
    fn new(dcell: &Dcell, j: usize, base: u64, faults: &'f [FaultElement]) -> Self {
        let inner = dcell.size(j - 1);
        let mut per_copy = vec![Vec::new(); inner as usize + 1];
        let mut dead = HashSet::new();
        let copy = |x: u64| ((x - base) / inner) as usize;
        for &e in faults {
            match e {
                FaultElement::Vertex(x) => {
                    per_copy[copy(x)].push(e);
                    let y = dcell.neighbor_unchecked(x, j);
                    dead.insert(pair(copy(x), copy(y)));
                }
                FaultElement::Edge(a, b) => {
                    if copy(a) == copy(b) {
                        per_copy[copy(a)].push(e);
                    } else {
                        dead.insert(pair(copy(a), copy(b)));
                    }
                }
            }
        }
        Level { j, base, inner, faults, per_copy, dead, h: dcell.n() + j - 5 }
    }

    fn copies(&self) -> usize {
        self.per_copy.len()
    }

    fn copy(&self, x: u64) -> usize {
        ((x - self.base) / self.inner) as usize
    }

    fn copy_base(&self, c: usize) -> u64 {
        self.base + c as u64 * self.inner
    }

    /// Vertex of copy `a` on the link to copy `c`.
    fn endpoint(&self, a: usize, c: usize) -> u64 {
        self.copy_base(a) + exit_toward(a as u64, c as u64)
    }

    fn is_dead(&self, a: usize, c: usize) -> bool {
        self.dead.contains(&pair(a, c))
    }

    fn all_but(&self, skip: usize) -> Vec<bool> {
        (0..self.copies()).map(|c| c != skip).collect()
    }

    fn alive_in(&self, c: usize) -> Vec<u64> {
        let b = self.copy_base(c);
        (b..b + self.inner).filter(|&x| !has_vertex(self.faults, x)).collect()
    }
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Sub-block view used to check the piece built inside one copy.
struct BlockView<'a> {
    dcell: &'a Dcell,
    base: u64,
    size: u64,
    faults: &'a [FaultElement],
}

impl Adjacency for BlockView<'_> {
    fn contains(&self, v: u64) -> bool {
        v >= self.base && v < self.base + self.size && !has_vertex(self.faults, v)
    }
    fn adjacent(&self, u: u64, v: u64) -> bool {
        self.contains(u) && self.contains(v) && self.dcell.edge_level(u, v).is_some() && !has_edge(self.faults, u, v)
    }
    fn order(&self) -> u64 {
        self.size - self.faults.iter().filter(|f| matches!(f, FaultElement::Vertex(_))).count() as u64
    }
}

struct Solver<'a> {
    dcell: &'a Dcell,
    builder: Builder<'a>,
}

/// Whether level `j` is handled by recursion rather than as a base case.
fn recursive_level(n: usize, j: usize) -> bool {
    (n >= 4 && j >= 1) || (n == 3 && j >= 2) || (n == 2 && j >= 3)
}

impl<'a> Solver<'a> {
    fn new(dcell: &'a Dcell) -> Result<Self> {
        Ok(Solver { dcell, builder: Builder::new(dcell)? })
    }

    fn n(&self) -> usize {
        self.dcell.n()
    }

    fn partner(&self, x: u64, j: usize) -> u64 {
        self.dcell.neighbor_unchecked(x, j)
    }

    fn check_piece(
        &self,
        j: usize,
        base: u64,
        faults: &[FaultElement],
        seg: &[u64],
        ends: Option<(u64, u64)>,
    ) -> Result<()> {
        let view = BlockView { dcell: self.dcell, base, size: self.dcell.size(j), faults };
        let check = match ends {
            Some((u, v)) => verify_path(&view, seg, u, v, true),
            None => verify_cycle(&view, seg),
        };
        match check.violation {
            None => Ok(()),
            Some(bad) => Err(invariant(format!("piece in D_{j} at {base} rejected: {bad}"))),
        }
    }

    fn oracle_block(&self, j: usize, base: u64, faults: &[FaultElement]) -> Result<SmallGraph> {
        let size = self.dcell.size(j);
        if size > ORACLE_CAP as u64 {
            return Err(invariant(format!("base block of {size} vertices exceeds the oracle")));
        }
        let mut g = SmallGraph::new(size as usize)?;
        for x in 0..size {
            for (y, _) in self.dcell.neighbors(base + x)? {
                if y >= base && y < base + size && y - base > x {
                    g.add_edge(x as usize, (y - base) as usize)?;
                }
            }
        }
        for f in faults {
            match *f {
                FaultElement::Vertex(x) => g.remove_vertex((x - base) as usize),
                FaultElement::Edge(a, b) => g.remove_edge((a - base) as usize, (b - base) as usize),
            }
        }
        Ok(g)
    }

    fn hp(&self, j: usize, base: u64, u: u64, v: u64, faults: &[FaultElement]) -> Result<Vec<u64>> {
        let n = self.n();
        if faults.is_empty() && !(n == 2 && j == 1) {
            let mut out = vec![0; self.dcell.size(j) as usize];
            self.builder.hp(j, base, u - base, v - base, &mut out)?;
            return Ok(out);
        }
        if j == 0 {
            let alive: Vec<u64> = (base..base + n as u64).filter(|&x| !has_vertex(faults, x)).collect();
            if let Some(p) = complete_hp(&alive, |a, b| has_edge(faults, a, b), u, v) {
                return Ok(p);
            }
        } else if recursive_level(n, j) {
            if faults.len() + 4 > n + j {
                return Err(invariant(format!("{} faults in a D_{j} asked for a path", faults.len())));
            }
            let lv = Level::new(self.dcell, j, base, faults);
            return self.hp_level(&lv, u, v);
        }
        let g = self.oracle_block(j, base, faults)?;
        let cert = find_hp(&g, (u - base) as usize, (v - base) as usize)?;
        if !cert.found() {
            return Err(invariant(format!("no Hamiltonian path between {u} and {v} in faulty D_{j} at {base}")));
        }
        Ok(cert.sequence.into_iter().map(|x| x + base).collect())
    }

    fn hc(&self, j: usize, base: u64, faults: &[FaultElement]) -> Result<Vec<u64>> {
        let n = self.n();
        if faults.is_empty() && j == 0 && n >= 3 {
            return Ok((base..base + n as u64).collect());
        }
        if faults.is_empty() && j > 0 && !(n == 2 && j == 1) {
            // vertices base and base+1 share the first complete graph
            return self.hp(j, base, base, base + 1, faults);
        }
        if j == 0 {
            let alive: Vec<u64> = (base..base + n as u64).filter(|&x| !has_vertex(faults, x)).collect();
            if let Some(c) = complete_hc(&alive, |a, b| has_edge(faults, a, b)) {
                return Ok(c);
            }
        } else if recursive_level(n, j) {
            if faults.len() + 3 > n + j {
                return Err(invariant(format!("{} faults in a D_{j} asked for a cycle", faults.len())));
            }
            let lv = Level::new(self.dcell, j, base, faults);
            return self.hc_level(&lv);
        }
        let g = self.oracle_block(j, base, faults)?;
        let cert = find_hc(&g)?;
        if !cert.found() {
            return Err(invariant(format!("no Hamiltonian cycle in faulty D_{j} at {base}")));
        }
        Ok(cert.sequence.into_iter().map(|x| x + base).collect())
    }

    /// Hamiltonian cycles of the copies that hold one fault more than the
    /// connected bound.
    fn special_cycles(&self, lv: &Level, include: &[bool]) -> Result<HashMap<usize, Vec<u64>>> {
        let mut out = HashMap::new();
        for c in (0..lv.copies()).filter(|&c| include[c]) {
            let f = lv.per_copy[c].len();
            if f > lv.h + 1 {
                return Err(invariant(format!("copy {c} of D_{} holds {f} faults", lv.j)));
            }
            if f == lv.h + 1 {
                let cycle = self.hc(lv.j - 1, lv.copy_base(c), &lv.per_copy[c])?;
                self.check_piece(lv.j - 1, lv.copy_base(c), &lv.per_copy[c], &cycle, None)?;
                out.insert(c, cycle);
            }
        }
        Ok(out)
    }

    /// Copy order covering `include`, entering copy `s0` at `e0` and leaving
    /// copy `s1` at `x1`.
    fn route(
        &self,
        lv: &Level,
        include: &[bool],
        (s0, e0): (usize, u64),
        (s1, x1): (usize, u64),
        cycles: &HashMap<usize, Vec<u64>>,
    ) -> Option<Vec<usize>> {
        let j = lv.j;
        let f0 = lv.copy(self.partner(e0, j));
        let f1 = lv.copy(self.partner(x1, j));
        let banned = |a: usize, c: usize| lv.is_dead(a, c) || pair(a, c) == pair(s0, f0) || pair(a, c) == pair(s1, f1);
        let exits = |x: u64| lv.copy(self.partner(x, j));

        let mut specials: Vec<usize> = cycles.keys().copied().filter(|&c| include[c]).collect();
        specials.sort_unstable();
        let mut options: Vec<Vec<Vec<(usize, usize)>>> = Vec::with_capacity(specials.len());
        let mut locked = vec![false; lv.copies()];
        for &s in &specials {
            let cyc = &cycles[&s];
            let len = cyc.len();
            let mut opts = Vec::new();
            if s == s0 || s == s1 {
                let fixed = if s == s0 { e0 } else { x1 };
                let pos = cyc.iter().position(|&x| x == fixed)?;
                for nb in [cyc[(pos + 1) % len], cyc[(pos + len - 1) % len]] {
                    let w = exits(nb);
                    if include[w] && w != s && !banned(s, w) {
                        opts.push(vec![(s, w)]);
                    }
                }
            } else {
                locked[s] = true;
                for i in 0..len {
                    let (wp, wq) = (exits(cyc[i]), exits(cyc[(i + 1) % len]));
                    if include[wp] && include[wq] && !banned(s, wp) && !banned(s, wq) {
                        opts.push(vec![(s, wp), (s, wq)]);
                    }
                }
            }
            if opts.is_empty() {
                return None;
            }
            options.push(opts);
        }

        let mut attempts = 0;
        let mut chosen = Vec::new();
        self.route_choices(&options, 0, &mut chosen, &mut attempts, &|required: &[(usize, usize)]| {
            let problem = RouteProblem { include, start: s0, end: s1, required, locked: &locked, banned: &banned };
            find_route(&problem, ROUTE_BUDGET)
        })
    }

    fn route_choices(
        &self,
        options: &[Vec<Vec<(usize, usize)>>],
        idx: usize,
        chosen: &mut Vec<(usize, usize)>,
        attempts: &mut usize,
        solve: &RouteSolver,
    ) -> Option<Vec<usize>> {
        if idx == options.len() {
            *attempts += 1;
            return solve(chosen);
        }
        for opt in &options[idx] {
            if *attempts >= CHOICE_ATTEMPTS {
                return None;
            }
            let mark = chosen.len();
            chosen.extend(opt.iter().copied());
            if let Some(r) = self.route_choices(options, idx + 1, chosen, attempts, solve) {
                return Some(r);
            }
            chosen.truncate(mark);
        }
        None
    }

    /// Appends the pieces of every copy on `route` to `out`.
    fn fill_route(
        &self,
        lv: &Level,
        route: &[usize],
        e0: u64,
        x1: u64,
        cycles: &HashMap<usize, Vec<u64>>,
        out: &mut Vec<u64>,
    ) -> Result<()> {
        let last = route.len() - 1;
        for (i, &c) in route.iter().enumerate() {
            let entry = if i == 0 { e0 } else { lv.endpoint(c, route[i - 1]) };
            let exit = if i == last { x1 } else { lv.endpoint(c, route[i + 1]) };
            let base = lv.copy_base(c);
            let seg = match cycles.get(&c) {
                Some(cyc) => cycle_minus_edge(cyc, entry, exit)
                    .ok_or_else(|| invariant(format!("{entry} and {exit} are not consecutive in copy {c}")))?,
                None => self.hp(lv.j - 1, base, entry, exit, &lv.per_copy[c])?,
            };
            self.check_piece(lv.j - 1, base, &lv.per_copy[c], &seg, Some((entry, exit)))?;
            out.extend(seg);
        }
        Ok(())
    }

    fn hp_level(&self, lv: &Level, u: u64, v: u64) -> Result<Vec<u64>> {
        let first = match self.hp_level_direct(lv, u, v) {
            Ok(p) => return Ok(p),
            Err(e) => e,
        };
        // leave through the link at u and/or v first and visit the rest of
        // that copy later, as if the endpoint were faulty
        let j = lv.j;
        let (un, vn) = (self.partner(u, j), self.partner(v, j));
        let usable = |x: u64, y: u64| !has_vertex(lv.faults, y) && !has_edge(lv.faults, x, y);
        for (split_u, split_v) in [(true, false), (false, true), (true, true)] {
            if (split_u && !usable(u, un)) || (split_v && !usable(v, vn)) {
                continue;
            }
            let s = if split_u { un } else { u };
            let t = if split_v { vn } else { v };
            if s == t || (split_u && un == v) || (split_v && vn == u) {
                continue;
            }
            let mut faults = lv.faults.to_vec();
            if split_u {
                faults.push(FaultElement::Vertex(u));
            }
            if split_v {
                faults.push(FaultElement::Vertex(v));
            }
            let sub = Level::new(self.dcell, j, lv.base, &faults);
            if let Ok(mid) = self.hp_level_direct(&sub, s, t) {
                let mut out = Vec::with_capacity(mid.len() + 2);
                if split_u {
                    out.push(u);
                }
                out.extend(mid);
                if split_v {
                    out.push(v);
                }
                return Ok(out);
            }
        }
        Err(first)
    }

    fn hp_level_direct(&self, lv: &Level, u: u64, v: u64) -> Result<Vec<u64>> {
        let j = lv.j;
        let (alpha, beta) = (lv.copy(u), lv.copy(v));
        if let Some(c) = (0..lv.copies()).find(|&c| lv.per_copy[c].len() > lv.h + 1) {
            return Err(invariant(format!("copy {c} of D_{j} holds too many faults for a path")));
        }
        if alpha != beta {
            let include = vec![true; lv.copies()];
            let cycles = self.special_cycles(lv, &include)?;
            let route = self
                .route(lv, &include, (alpha, u), (beta, v), &cycles)
                .ok_or_else(|| invariant(format!("no copy route from {u} to {v} in D_{j}")))?;
            let mut out = Vec::new();
            self.fill_route(lv, &route, u, v, &cycles, &mut out)?;
            return Ok(out);
        }

        let include = lv.all_but(alpha);
        let cycles = self.special_cycles(lv, &include)?;
        let alpha_faults = &lv.per_copy[alpha];
        let alpha_base = lv.copy_base(alpha);
        if alpha_faults.len() <= lv.h {
            let q = self.hp(j - 1, alpha_base, u, v, alpha_faults)?;
            self.check_piece(j - 1, alpha_base, alpha_faults, &q, Some((u, v)))?;
            let mut tried = 0;
            for i in 0..q.len() - 1 {
                let (x, y) = (q[i], q[i + 1]);
                let (xn, yn) = (self.partner(x, j), self.partner(y, j));
                let (cx, cy) = (lv.copy(xn), lv.copy(yn));
                if lv.is_dead(alpha, cx) || lv.is_dead(alpha, cy) {
                    continue;
                }
                tried += 1;
                if let Some(route) = self.route(lv, &include, (cx, xn), (cy, yn), &cycles) {
                    let mut out = q[..=i].to_vec();
                    self.fill_route(lv, &route, xn, yn, &cycles, &mut out)?;
                    out.extend_from_slice(&q[i + 1..]);
                    return Ok(out);
                }
                if tried >= PAIR_ATTEMPTS {
                    break;
                }
            }
            return Err(invariant(format!("no stitching pair for {u}, {v} in D_{j}")));
        }

        if j == 1 {
            if let Some(p) = self.hp_single_copy_k1(lv, u, v, &include, &cycles)? {
                return Ok(p);
            }
        }
        self.hp_via_cycle(lv, u, v, &include, &cycles)
    }

    /// Both endpoints in a complete-graph copy with the most faults: leave the
    /// copy just before `v`.
    fn hp_single_copy_k1(
        &self,
        lv: &Level,
        u: u64,
        v: u64,
        include: &[bool],
        cycles: &HashMap<usize, Vec<u64>>,
    ) -> Result<Option<Vec<u64>>> {
        let alpha = lv.copy(u);
        if (self.n() as i64) - (lv.faults.len() as i64) - 2 < 1 {
            return Err(invariant("too few surviving vertices left beside the endpoints"));
        }
        let alive = lv.alive_in(alpha);
        let rest: Vec<u64> = alive.iter().copied().filter(|&x| x != v).collect();
        let vn = self.partner(v, 1);
        let cv = lv.copy(vn);
        if lv.is_dead(alpha, cv) {
            return Ok(None);
        }
        for &x in alive.iter().filter(|&&x| x != u && x != v) {
            let xn = self.partner(x, 1);
            let cx = lv.copy(xn);
            if has_edge(lv.faults, x, v) || lv.is_dead(alpha, cx) {
                continue;
            }
            let p = match complete_hp(&rest, |a, b| has_edge(lv.faults, a, b), u, x) {
                Some(p) => p,
                None => continue,
            };
            if let Some(route) = self.route(lv, include, (cx, xn), (cv, vn), cycles) {
                let mut out = p;
                self.fill_route(lv, &route, xn, vn, cycles, &mut out)?;
                out.push(v);
                return Ok(Some(out));
            }
        }
        Ok(None)
    }

    /// Both endpoints in the copy with the most faults: split one of its
    /// Hamiltonian cycles.
    fn hp_via_cycle(
        &self,
        lv: &Level,
        u: u64,
        v: u64,
        include: &[bool],
        cycles: &HashMap<usize, Vec<u64>>,
    ) -> Result<Vec<u64>> {
        let j = lv.j;
        let alpha = lv.copy(u);
        let cyc = self.hc(j - 1, lv.copy_base(alpha), &lv.per_copy[alpha])?;
        self.check_piece(j - 1, lv.copy_base(alpha), &lv.per_copy[alpha], &cyc, None)?;
        let len = cyc.len();
        let pu = cyc.iter().position(|&x| x == u).ok_or_else(|| invariant("u missing from its copy's cycle"))?;
        for forward in [true, false] {
            let c: Vec<u64> =
                (0..len).map(|s| if forward { cyc[(pu + s) % len] } else { cyc[(pu + len - s) % len] }).collect();
            let iv = c.iter().position(|&x| x == v).ok_or_else(|| invariant("v missing from its copy's cycle"))?;
            if iv == 1 {
                continue;
            }
            // (head, entry into the other copies, exit from them, tail)
            let (head, from, to, tail): (Vec<u64>, u64, u64, Vec<u64>) = if iv == len - 1 {
                (c[..len - 1].to_vec(), c[len - 2], v, vec![v])
            } else {
                let mut head = vec![c[0]];
                head.extend(c[iv + 1..].iter().rev());
                (head, c[iv + 1], c[1], c[1..=iv].to_vec())
            };
            let (fx, tx) = (self.partner(from, j), self.partner(to, j));
            let (cf, ct) = (lv.copy(fx), lv.copy(tx));
            if lv.is_dead(alpha, cf) || lv.is_dead(alpha, ct) {
                continue;
            }
            if let Some(route) = self.route(lv, include, (cf, fx), (ct, tx), cycles) {
                let mut out = head;
                self.fill_route(lv, &route, fx, tx, cycles, &mut out)?;
                out.extend(tail);
                return Ok(out);
            }
        }
        Err(invariant(format!("no split of the cycle in copy {alpha} joins {u} and {v}")))
    }

    fn hc_level(&self, lv: &Level) -> Result<Vec<u64>> {
        let j = lv.j;
        let lambda = argmax_len(&lv.per_copy);
        let worst = lv.per_copy[lambda].len();
        if worst > lv.h + 2 {
            return Err(invariant(format!("copy {lambda} of D_{j} holds {worst} faults")));
        }
        let include = lv.all_but(lambda);
        let cycles = self.special_cycles(lv, &include)?;
        let base = lv.copy_base(lambda);
        let own = &lv.per_copy[lambda];

        if worst <= lv.h {
            let anchors: Vec<u64> =
                lv.alive_in(lambda).into_iter().filter(|&x| !lv.is_dead(lambda, lv.copy(self.partner(x, j)))).collect();
            let mut tried = 0;
            for (i, &p) in anchors.iter().enumerate() {
                for &q in &anchors[i + 1..] {
                    tried += 1;
                    if tried > PAIR_ATTEMPTS {
                        break;
                    }
                    let (pn, qn) = (self.partner(p, j), self.partner(q, j));
                    if let Some(route) = self.route(lv, &include, (lv.copy(qn), qn), (lv.copy(pn), pn), &cycles) {
                        let mut out = self.hp(j - 1, base, p, q, own)?;
                        self.check_piece(j - 1, base, own, &out, Some((p, q)))?;
                        self.fill_route(lv, &route, qn, pn, &cycles, &mut out)?;
                        return Ok(out);
                    }
                }
            }
            return Err(invariant(format!("no anchor pair closes a cycle in D_{j}")));
        }

        if worst == lv.h + 1 {
            let cyc = self.hc(j - 1, base, own)?;
            self.check_piece(j - 1, base, own, &cyc, None)?;
            return self.hc_from_cycle(lv, lambda, &cyc, &include, &cycles);
        }

        // one fault too many for the copy: drop one fault, take a cycle of the
        // rest and cut it at the dropped element
        for &x in own {
            let reduced: Vec<FaultElement> = own.iter().copied().filter(|&f| f != x).collect();
            let cyc = self.hc(j - 1, base, &reduced)?;
            self.check_piece(j - 1, base, &reduced, &cyc, None)?;
            let piece = match x {
                FaultElement::Vertex(w) => {
                    let pos =
                        cyc.iter().position(|&y| y == w).ok_or_else(|| invariant("dropped vertex off its cycle"))?;
                    let len = cyc.len();
                    (1..len).map(|s| cyc[(pos + s) % len]).collect::<Vec<u64>>()
                }
                FaultElement::Edge(a, b) => match cycle_minus_edge(&cyc, a, b) {
                    Some(p) => p,
                    None => {
                        // the cycle already avoids the dropped link
                        if let Ok(out) = self.hc_from_cycle(lv, lambda, &cyc, &include, &cycles) {
                            return Ok(out);
                        }
                        continue;
                    }
                },
            };
            let (a, b) = (piece[0], piece[piece.len() - 1]);
            self.check_piece(j - 1, base, own, &piece, Some((a, b)))?;
            let (an, bn) = (self.partner(a, j), self.partner(b, j));
            if has_vertex(lv.faults, an)
                || has_vertex(lv.faults, bn)
                || lv.is_dead(lambda, lv.copy(an))
                || lv.is_dead(lambda, lv.copy(bn))
            {
                continue;
            }
            if let Some(route) = self.route(lv, &include, (lv.copy(bn), bn), (lv.copy(an), an), &cycles) {
                let mut out = piece;
                self.fill_route(lv, &route, bn, an, &cycles, &mut out)?;
                return Ok(out);
            }
        }
        Err(invariant(format!("no dropped fault of copy {lambda} leads to a cycle in D_{j}")))
    }

    /// Opens the cycle `cyc` of copy `lambda` at one of its edges and closes
    /// it again through all other copies.
    fn hc_from_cycle(
        &self,
        lv: &Level,
        lambda: usize,
        cyc: &[u64],
        include: &[bool],
        cycles: &HashMap<usize, Vec<u64>>,
    ) -> Result<Vec<u64>> {
        let j = lv.j;
        let len = cyc.len();
        for i in 0..len {
            let (a, b) = (cyc[i], cyc[(i + 1) % len]);
            for (p, q) in [(a, b), (b, a)] {
                let (pn, qn) = (self.partner(p, j), self.partner(q, j));
                let (cp, cq) = (lv.copy(pn), lv.copy(qn));
                if lv.is_dead(lambda, cp) || lv.is_dead(lambda, cq) {
                    continue;
                }
                if let Some(route) = self.route(lv, include, (cq, qn), (cp, pn), cycles) {
                    let mut out = cycle_minus_edge(cyc, p, q).expect("consecutive on the cycle");
                    self.fill_route(lv, &route, qn, pn, cycles, &mut out)?;
                    return Ok(out);
                }
            }
        }
        Err(invariant(format!("no edge of the cycle in copy {lambda} closes a cycle in D_{j}")))
    }
}

fn check_rule(dcell: &Dcell) -> Result<()> {
    if !dcell.is_default_rule() {
        return Err(DcellError::Unsupported(format!(
            "fault-tolerant construction needs the standard connection rule, got '{}'",
            dcell.rule_name()
        )));
    }
    Ok(())
}

/// Largest `|F|` for which a Hamiltonian path is guaranteed: `n + k − 4`.
pub fn hp_fault_bound(dcell: &Dcell) -> i64 {
    dcell.n() as i64 + dcell.k() as i64 - 4
}

/// Largest `|F|` for which a Hamiltonian cycle is guaranteed: `n + k − 3`.
pub fn hc_fault_bound(dcell: &Dcell) -> i64 {
    hp_fault_bound(dcell) + 1
}

/// Hamiltonian `(u, v)`-path of `D_k \ F`.
pub fn ft_hp(dcell: &Dcell, faults: &FaultSet, u: u64, v: u64) -> Result<Vec<u64>> {
    check_rule(dcell)?;
    let top = dcell.vertex_count();
    for x in [u, v] {
        if x >= top {
            return Err(DcellError::OutOfRange(format!("uid {x} not in 0..{top}")));
        }
        if faults.has_vertex(x) {
            return Err(DcellError::InvalidArgument(format!("endpoint {x} is faulty")));
        }
    }
    if u == v {
        return Err(DcellError::InvalidArgument("path endpoints must differ".into()));
    }
    let bound = hp_fault_bound(dcell);
    if faults.len() as i64 > bound {
        return Err(DcellError::BoundExceeded { faults: faults.len(), bound });
    }
    let elements = faults.elements();
    let solver = Solver::new(dcell)?;
    let p = solver.hp(dcell.k(), 0, u, v, &elements)?;
    let check = verify_fault_certificate(&FaultyView::new(dcell, faults), CertKind::Path, &p, Some((u, v)));
    match check.violation {
        None => Ok(p),
        Some(bad) => Err(invariant(format!("constructed path rejected: {bad}"))),
    }
}

/// Hamiltonian cycle of `D_k \ F`.
pub fn ft_hc(dcell: &Dcell, faults: &FaultSet) -> Result<Vec<u64>> {
    check_rule(dcell)?;
    let bound = hc_fault_bound(dcell);
    if faults.len() as i64 > bound {
        return Err(DcellError::BoundExceeded { faults: faults.len(), bound });
    }
    let elements = faults.elements();
    let solver = Solver::new(dcell)?;
    let c = solver.hc(dcell.k(), 0, &elements)?;
    let check = verify_fault_certificate(&FaultyView::new(dcell, faults), CertKind::Cycle, &c, None);
    match check.violation {
        None => Ok(c),
        Some(bad) => Err(invariant(format!("constructed cycle rejected: {bad}"))),
    }
}
