//! Round-synchronous broadcast simulation on DCells with random link faults.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::dcell_hp;
use crate::error::{DcellError, Result};
use crate::oracle::{find_hc, SmallGraph};
use crate::topology::Dcell;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Flood,
    Ham,
    Hier,
}

impl FromStr for Scheme {
    type Err = DcellError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flood" => Ok(Scheme::Flood),
            "ham" => Ok(Scheme::Ham),
            "hier" => Ok(Scheme::Hier),
            other => Err(DcellError::InvalidArgument(format!("unknown scheme {other:?}"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Flood => "flood",
            Scheme::Ham => "ham",
            Scheme::Hier => "hier",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub k: usize,
    /// Source vertex as `uid_k`.
    pub source: u64,
    pub scheme: Scheme,
    /// Independent failure probability of each link.
    pub p: f64,
    pub trials: u32,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(n: usize, k: usize, scheme: Scheme) -> Self {
        SimConfig { n, k, source: 0, scheme, p: 0.0, trials: 1, seed: 0 }
    }

    fn validate(&self, dcell: &Dcell) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(DcellError::InvalidArgument(format!("p = {} not in [0, 1]", self.p)));
        }
        if self.trials == 0 {
            return Err(DcellError::InvalidArgument("trials must be at least 1".into()));
        }
        if self.source >= dcell.vertex_count() {
            return Err(DcellError::OutOfRange(format!("source {} not in 0..{}", self.source, dcell.vertex_count())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub messages: u64,
    /// Round in which the last vertex was reached, if all were.
    pub rounds: Option<u64>,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean_messages: f64,
    /// Mean over fully covered trials.
    pub mean_rounds: Option<f64>,
    pub success_rate: f64,
    pub ci95: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub config: SimConfig,
    pub per_trial: Vec<TrialRecord>,
    pub aggregate: Aggregate,
}

impl SimResult {
    /// Record of the first trial.
    pub fn first(&self) -> &TrialRecord {
        &self.per_trial[0]
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| DcellError::Parse(e.to_string()))
    }
}

/// Normal-approximation 95% interval for a success proportion.
pub fn binomial_ci95(successes: u64, trials: u64) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let p = successes as f64 / trials as f64;
    let half = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    [(p - half).max(0.0), (p + half).min(1.0)]
}

fn edge_key(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

/// Links that failed in one trial.
#[derive(Debug, Clone, Default)]
pub struct LinkFaults {
    dead: HashSet<(u64, u64)>,
}

impl LinkFaults {
    pub fn none() -> Self {
        LinkFaults::default()
    }

    /// Each link of `dcell` fails independently with probability `p`.
    pub fn sample(dcell: &Dcell, p: f64, rng: &mut impl Rng) -> Self {
        let mut dead = HashSet::new();
        if p <= 0.0 {
            return LinkFaults { dead };
        }
        for x in 0..dcell.vertex_count() {
            for (y, _) in dcell.neighbors(x).expect("vertex in range") {
                if x < y && (p >= 1.0 || rng.gen_bool(p)) {
                    dead.insert((x, y));
                }
            }
        }
        LinkFaults { dead }
    }

    pub fn is_dead(&self, a: u64, b: u64) -> bool {
        self.dead.contains(&edge_key(a, b))
    }

    pub fn len(&self) -> usize {
        self.dead.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dead.is_empty()
    }
}

fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn neighbor_list(dcell: &Dcell, x: u64) -> Vec<u64> {
    dcell.neighbors(x).expect("vertex in range").into_iter().map(|(y, _)| y).collect()
}

fn flood_trial(dcell: &Dcell, source: u64, faults: &LinkFaults) -> TrialRecord {
    let total = dcell.vertex_count();
    let mut time: Vec<Option<u64>> = vec![None; total as usize];
    let mut sender: Vec<u64> = vec![u64::MAX; total as usize];
    time[source as usize] = Some(0);
    let mut queue = VecDeque::from([source]);
    let mut messages = 0u64;
    let mut last = 0u64;
    while let Some(x) = queue.pop_front() {
        let tx = time[x as usize].expect("queued vertices are reached");
        last = last.max(tx);
        for y in neighbor_list(dcell, x) {
            if y == sender[x as usize] || faults.is_dead(x, y) {
                continue;
            }
            messages += 1;
            if time[y as usize].is_none() {
                time[y as usize] = Some(tx + 1);
                sender[y as usize] = x;
                queue.push_back(y);
            }
        }
    }
    let covered = time.iter().filter(|t| t.is_some()).count() as u64;
    record(messages, covered, total, last)
}

fn record(messages: u64, covered: u64, total: u64, last: u64) -> TrialRecord {
    TrialRecord { messages, rounds: (covered == total).then_some(last), coverage: covered as f64 / total as f64 }
}

/// A Hamiltonian cycle of `D_k` listed from `start`.
pub fn hamiltonian_cycle(dcell: &Dcell, start: u64) -> Result<Vec<u64>> {
    let total = dcell.vertex_count();
    if start >= total {
        return Err(DcellError::OutOfRange(format!("{start} not in 0..{total}")));
    }
    if dcell.k() == 0 {
        let mut c = vec![start];
        c.extend((0..total).filter(|&x| x != start));
        return Ok(c);
    }
    if dcell.n() == 2 && dcell.k() == 1 {
        let g = SmallGraph::from_dcell(2, 1)?;
        let mut c = find_hc(&g)?.sequence;
        if c.len() as u64 > total {
            c.pop();
        }
        let at = c.iter().position(|&x| x == start).expect("cycle covers every vertex");
        c.rotate_left(at);
        return Ok(c);
    }
    let n = dcell.n() as u64;
    let partner = start - start % n + (start % n + 1) % n;
    dcell_hp(dcell, start, partner)
}

/// Number of vertices a token reaches walking `order` from its first entry.
fn walk(order: &[u64], faults: &LinkFaults) -> usize {
    1 + order.windows(2).take_while(|w| !faults.is_dead(w[0], w[1])).count()
}

fn ham_trial(cycle: &[u64], faults: &LinkFaults) -> TrialRecord {
    let reached = walk(cycle, faults) as u64;
    record(reached - 1, reached, cycle.len() as u64, reached - 1)
}

fn hier_trial(dcell: &Dcell, source: u64, template: &[u64], faults: &LinkFaults) -> TrialRecord {
    let k = dcell.k();
    let total = dcell.vertex_count();
    let inner = dcell.size(k - 1);
    let rotated = |entry: u64| -> Vec<u64> {
        let base = entry - entry % inner;
        let local = entry - base;
        let at = template.iter().position(|&x| x == local).expect("template covers the copy");
        template[at..].iter().chain(&template[..at]).map(|&x| base + x).collect()
    };
    let root = rotated(source);
    let root_reached = walk(&root, faults);
    let mut messages = root_reached as u64 - 1;
    let mut covered = root_reached as u64;
    let mut last = root_reached as u64 - 1;
    for (r, &w) in root.iter().enumerate().take(root_reached) {
        let entry = dcell.neighbor_unchecked(w, k);
        if faults.is_dead(w, entry) {
            continue;
        }
        messages += 1;
        let branch = rotated(entry);
        let reached = walk(&branch, faults) as u64;
        messages += reached - 1;
        covered += reached;
        last = last.max(r as u64 + reached);
    }
    record(messages, covered, total, last)
}

fn aggregate(per_trial: &[TrialRecord]) -> Aggregate {
    let t = per_trial.len() as f64;
    let mean_messages = per_trial.iter().map(|r| r.messages as f64).sum::<f64>() / t;
    let full: Vec<u64> = per_trial.iter().filter_map(|r| r.rounds).collect();
    let mean_rounds = (!full.is_empty()).then(|| full.iter().sum::<u64>() as f64 / full.len() as f64);
    Aggregate {
        mean_messages,
        mean_rounds,
        success_rate: full.len() as f64 / t,
        ci95: binomial_ci95(full.len() as u64, per_trial.len() as u64),
    }
}

fn run<F>(config: &SimConfig, dcell: &Dcell, trial: F) -> SimResult
where
    F: Fn(&LinkFaults) -> TrialRecord + Sync,
{
    let per_trial: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let faults = LinkFaults::sample(dcell, config.p, &mut trial_rng(config.seed, i));
            trial(&faults)
        })
        .collect();
    let aggregate = aggregate(&per_trial);
    SimResult { config: config.clone(), per_trial, aggregate }
}

/// Every vertex forwards on first receipt to all neighbors except its sender.
pub fn simulate_flood(config: &SimConfig) -> Result<SimResult> {
    let dcell = Dcell::from_nk(config.n, config.k)?;
    config.validate(&dcell)?;
    Ok(run(config, &dcell, |f| flood_trial(&dcell, config.source, f)))
}

/// A single token walks a Hamiltonian cycle from the source and stops at the
/// first failed link.
pub fn simulate_ham_cycle(config: &SimConfig) -> Result<SimResult> {
    let dcell = Dcell::from_nk(config.n, config.k)?;
    config.validate(&dcell)?;
    let cycle = hamiltonian_cycle(&dcell, config.source)?;
    Ok(run(config, &dcell, |f| ham_trial(&cycle, f)))
}

/// The source's copy of `D_{k-1}` is covered by a cycle; each of its vertices
/// hands the message over its top-level link and every other copy runs its
/// own cycle from there.
pub fn simulate_hierarchical(config: &SimConfig) -> Result<SimResult> {
    let dcell = Dcell::from_nk(config.n, config.k)?;
    config.validate(&dcell)?;
    if config.k == 0 {
        return Err(DcellError::InvalidParams("the hierarchical scheme needs k ≥ 1".into()));
    }
    let sub = Dcell::from_nk(config.n, config.k - 1)?;
    let template = hamiltonian_cycle(&sub, 0)?;
    Ok(run(config, &dcell, |f| hier_trial(&dcell, config.source, &template, f)))
}

pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    match config.scheme {
        Scheme::Flood => simulate_flood(config),
        Scheme::Ham => simulate_ham_cycle(config),
        Scheme::Hier => simulate_hierarchical(config),
    }
}

/// Chooses the next hop of a token that must return to the source after
/// visiting every vertex once. Returning `None` aborts the trial.
pub trait RerouteStrategy {
    /// `faulty` lists the neighbors of `current` behind failed links.
    fn next_hop(&mut self, current: u64, faulty: &[u64], visited: &[bool]) -> Option<u64>;
}

/// Follows a precomputed cycle and gives up at the first failed link.
#[derive(Debug, Clone)]
pub struct FixedCycle {
    successor: Vec<u64>,
}

impl FixedCycle {
    pub fn new(cycle: &[u64]) -> Self {
        let mut successor = vec![u64::MAX; cycle.len()];
        for (i, &x) in cycle.iter().enumerate() {
            successor[x as usize] = cycle[(i + 1) % cycle.len()];
        }
        FixedCycle { successor }
    }
}

impl RerouteStrategy for FixedCycle {
    fn next_hop(&mut self, current: u64, faulty: &[u64], _visited: &[bool]) -> Option<u64> {
        let next = self.successor[current as usize];
        (!faulty.contains(&next)).then_some(next)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub trials: u32,
    pub successes: u32,
    pub success_rate: f64,
    /// Binomial standard error of the estimate.
    pub std_error: f64,
    pub ci95: [f64; 2],
}

fn tour_succeeds(dcell: &Dcell, source: u64, faults: &LinkFaults, strategy: &mut dyn RerouteStrategy) -> bool {
    let total = dcell.vertex_count();
    let mut visited = vec![false; total as usize];
    visited[source as usize] = true;
    let mut current = source;
    for step in 1..=total {
        let neighbors = neighbor_list(dcell, current);
        let faulty: Vec<u64> = neighbors.iter().copied().filter(|&y| faults.is_dead(current, y)).collect();
        let Some(next) = strategy.next_hop(current, &faulty, &visited) else { return false };
        if !neighbors.contains(&next) || faults.is_dead(current, next) {
            return false;
        }
        if next == source {
            return step == total;
        }
        if visited[next as usize] {
            return false;
        }
        visited[next as usize] = true;
        current = next;
    }
    false
}

/// Monte-Carlo estimate of the probability that `strategy` closes a
/// Hamiltonian cycle under independent link faults.
pub fn fault_success_experiment(config: &SimConfig, strategy: &mut dyn RerouteStrategy) -> Result<ExperimentReport> {
    let dcell = Dcell::from_nk(config.n, config.k)?;
    config.validate(&dcell)?;
    let mut successes = 0u32;
    for i in 0..config.trials {
        let faults = LinkFaults::sample(&dcell, config.p, &mut trial_rng(config.seed, i));
        if tour_succeeds(&dcell, config.source, &faults, strategy) {
            successes += 1;
        }
    }
    let rate = successes as f64 / config.trials as f64;
    Ok(ExperimentReport {
        trials: config.trials,
        successes,
        success_rate: rate,
        std_error: (rate * (1.0 - rate) / config.trials as f64).sqrt(),
        ci95: binomial_ci95(successes as u64, config.trials as u64),
    })
}

/// [`fault_success_experiment`] with the [`FixedCycle`] baseline.
pub fn fixed_cycle_experiment(config: &SimConfig) -> Result<ExperimentReport> {
    let dcell = Dcell::from_nk(config.n, config.k)?;
    config.validate(&dcell)?;
    let mut strategy = FixedCycle::new(&hamiltonian_cycle(&dcell, config.source)?);
    fault_success_experiment(config, &mut strategy)
}
