//! Complete backtracking search over continuous self-maps.
//!
//! Variables are vertices, values are image vertices, and every edge of the
//! image is a binary constraint "images equal or adjacent". Domains are
//! bitsets kept arc consistent after every assignment. On top of that sit the
//! optional rules of [`Pruning`]: forcing vertices on unique shortest paths
//! between fixed vertices, the pulling-lemma filter on `c_u` images, and
//! identity-last value ordering.

use std::ops::ControlFlow;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::{DigitalImage, VertexId, VertexSet};
use crate::maps::bfs_order_from;

/// Toggles for the optional pruning rules. All default to enabled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pruning {
    /// Force every vertex of a unique shortest path between two fixed
    /// vertices to be fixed.
    pub unique_paths: bool,
    /// Try non-identity values before the identity value.
    pub identity_last: bool,
    /// Filter neighbor domains with the pulling lemma (coordinate-backed
    /// `c_u` images only).
    pub pulling: bool,
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning { unique_paths: true, identity_last: true, pulling: true }
    }
}

impl Pruning {
    pub fn none() -> Self {
        Pruning { unique_paths: false, identity_last: false, pulling: false }
    }
}

/// Node and wall-clock ceilings for one query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 100_000_000, max_millis: 120_000 }
    }
}

/// Search counters, reported per query.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruningStats {
    pub nodes_expanded: u64,
    pub propagations: u64,
    pub wipeouts: u64,
    pub unique_path_forced: u64,
    pub pulling_filtered: u64,
    pub bound_pruned: u64,
    pub leaves: u64,
}

/// Shared across the sub-searches of one query.
pub(crate) struct BudgetTracker {
    start: Instant,
    budget: SearchBudget,
    nodes: u64,
    exhausted: bool,
}

impl BudgetTracker {
    pub fn new(budget: SearchBudget) -> Self {
        BudgetTracker { start: Instant::now(), budget, nodes: 0, exhausted: false }
    }

    /// Charges one node; false once either ceiling is crossed.
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes & 1023 == 0 && self.elapsed_millis() > self.budget.max_millis)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub fn elapsed_millis(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }
}

pub(crate) enum Goal {
    /// Leaves must displace some vertex by more than `threshold`.
    Violation { threshold: usize },
    /// Every continuous map is a leaf.
    Enumerate,
}

pub(crate) struct Problem<'a> {
    pub image: &'a DigitalImage,
    /// Per-vertex allowed images; `None` leaves the vertex unrestricted.
    pub restrict: Vec<Option<VertexSet>>,
    pub goal: Goal,
    /// BFS roots for the variable order.
    pub roots: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EngineOutcome {
    Exhausted,
    Stopped,
    OutOfBudget,
}

pub(crate) type LeafFn<'f> = dyn FnMut(&[VertexId]) -> ControlFlow<()> + 'f;

pub(crate) fn run_search(
    problem: &Problem<'_>,
    pruning: Pruning,
    budget: &mut BudgetTracker,
    stats: &mut PruningStats,
    on_leaf: &mut LeafFn<'_>,
) -> Result<EngineOutcome> {
    let n = problem.image.len();
    macro_rules! go {
        ($w:literal) => {
            Engine::<$w>::new(problem, pruning, budget, stats).run(on_leaf)
        };
    }
    Ok(match n {
        0..=64 => go!(1),
        65..=128 => go!(2),
        129..=256 => go!(4),
        257..=512 => go!(8),
        513..=1024 => go!(16),
        1025..=4096 => go!(64),
        _ => return Err(Error::TooLarge(n)),
    })
}

struct Pulling<const W: usize> {
    coords: Vec<Vec<i64>>,
    /// `above[i][u]`: vertices whose `i`-th coordinate exceeds that of `u`.
    above: Vec<Vec<Bits<W>>>,
    below: Vec<Vec<Bits<W>>>,
}

struct Engine<'a, 'b, const W: usize> {
    image: &'a DigitalImage,
    n: usize,
    initial: Vec<Bits<W>>,
    closed: Vec<Bits<W>>,
    far: Option<Vec<Bits<W>>>,
    unique_paths: Option<Vec<Option<Bits<W>>>>,
    pulling: Option<Pulling<W>>,
    layer: Vec<usize>,
    rank: Vec<usize>,
    identity_last: bool,
    budget: &'b mut BudgetTracker,
    stats: &'b mut PruningStats,
}

impl<'a, 'b, const W: usize> Engine<'a, 'b, W> {
    fn new(problem: &Problem<'a>, pruning: Pruning, budget: &'b mut BudgetTracker, stats: &'b mut PruningStats) -> Self {
        let image = problem.image;
        let n = image.len();
        let closed: Vec<Bits<W>> = (0..n)
            .map(|v| {
                let mut b = Bits::singleton(v);
                for &u in image.neighbors(v) {
                    b.insert(u);
                }
                b
            })
            .collect();
        let initial = problem
            .restrict
            .iter()
            .map(|r| match r {
                None => Bits::full(n),
                Some(set) => {
                    let mut b = Bits::empty();
                    for v in set {
                        b.insert(v);
                    }
                    b
                }
            })
            .collect();
        let far = match problem.goal {
            Goal::Enumerate => None,
            Goal::Violation { threshold } => Some(
                (0..n)
                    .map(|x| {
                        let d = image.distances_from(x).expect("vertex in range");
                        let mut b = Bits::empty();
                        for (w, dw) in d.iter().enumerate() {
                            if dw.is_none_or(|dw| dw > threshold) {
                                b.insert(w);
                            }
                        }
                        b
                    })
                    .collect(),
            ),
        };
        let unique_paths = pruning.unique_paths.then(|| unique_path_masks(image));
        let pulling = (pruning.pulling && image.cu_spec().is_some() && image.is_coordinate_backed())
            .then(|| pulling_masks(image));
        let order = bfs_order_from(image, &problem.roots);
        let mut rank = vec![0; n];
        let mut layer = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        for r in &problem.roots {
            layer[r] = 0;
        }
        for &v in &order {
            // roots and the first vertex of each rootless component
            if layer[v] == usize::MAX {
                layer[v] = 0;
            }
            for &u in image.neighbors(v) {
                if layer[u] == usize::MAX {
                    layer[u] = layer[v] + 1;
                }
            }
        }
        Engine {
            image,
            n,
            initial,
            closed,
            far,
            unique_paths,
            pulling,
            layer,
            rank,
            identity_last: pruning.identity_last,
            budget,
            stats,
        }
    }

    fn run(mut self, on_leaf: &mut LeafFn<'_>) -> EngineOutcome {
        let domains = std::mem::take(&mut self.initial);
        let queue: Vec<usize> = (0..self.n).rev().collect();
        self.descend(domains, queue, on_leaf)
    }

    fn descend(&mut self, mut domains: Vec<Bits<W>>, mut queue: Vec<usize>, on_leaf: &mut LeafFn<'_>) -> EngineOutcome {
        if !self.propagate(&mut domains, &mut queue) {
            return EngineOutcome::Exhausted;
        }
        let achieved = match &self.far {
            None => true,
            Some(far) => {
                let mut achieved = false;
                let mut possible = false;
                for (v, d) in domains.iter().enumerate() {
                    if d.intersects(&far[v]) {
                        possible = true;
                        if d.single().is_some() {
                            achieved = true;
                            break;
                        }
                    }
                }
                if !possible {
                    self.stats.bound_pruned += 1;
                    return EngineOutcome::Exhausted;
                }
                achieved
            }
        };
        let Some(var) = self.choose(&domains, achieved) else {
            self.stats.leaves += 1;
            let assignment: Vec<VertexId> = domains.iter().map(|d| d.single().expect("all singleton")).collect();
            return match on_leaf(&assignment) {
                ControlFlow::Break(()) => EngineOutcome::Stopped,
                ControlFlow::Continue(()) => EngineOutcome::Exhausted,
            };
        };
        let dom = domains[var];
        let identity_last = self.identity_last && dom.contains(var);
        let values = dom
            .iter()
            .filter(|&w| !(identity_last && w == var))
            .chain(identity_last.then_some(var));
        for w in values {
            if !self.budget.tick() {
                return EngineOutcome::OutOfBudget;
            }
            self.stats.nodes_expanded += 1;
            let mut child = domains.clone();
            child[var] = Bits::singleton(w);
            match self.descend(child, vec![var], on_leaf) {
                EngineOutcome::Exhausted => {}
                other => return other,
            }
        }
        EngineOutcome::Exhausted
    }

    /// Unassigned vertex to branch on: nearest to the roots first, then the
    /// smallest domain. Once a violation is in hand only a completion is
    /// needed, and the smallest domain goes first.
    fn choose(&self, domains: &[Bits<W>], achieved: bool) -> Option<usize> {
        let mut best: Option<((usize, u32, usize), usize)> = None;
        for (v, d) in domains.iter().enumerate() {
            let c = d.count();
            if c <= 1 {
                continue;
            }
            let key = if achieved && self.far.is_some() {
                (0, c, self.rank[v])
            } else {
                (self.layer[v], c, self.rank[v])
            };
            if best.is_none_or(|(k, _)| key < k) {
                best = Some((key, v));
            }
        }
        best.map(|(_, v)| v)
    }

    fn propagate(&mut self, d: &mut [Bits<W>], queue: &mut Vec<usize>) -> bool {
        let mut queued: Bits<W> = Bits::empty();
        for &v in queue.iter() {
            queued.insert(v);
        }
        while let Some(v) = queue.pop() {
            queued.remove(v);
            self.stats.propagations += 1;
            let dv = d[v];
            let single = dv.single();
            let support = match single {
                Some(w) => self.closed[w],
                None => {
                    let mut s = Bits::empty();
                    for w in dv.iter() {
                        s |= self.closed[w];
                    }
                    s
                }
            };
            for &u in self.image.neighbors(v) {
                let nd = d[u] & support;
                if nd != d[u] {
                    if nd.is_empty() {
                        self.stats.wipeouts += 1;
                        return false;
                    }
                    d[u] = nd;
                    if !queued.contains(u) {
                        queued.insert(u);
                        queue.push(u);
                    }
                }
            }
            let Some(w) = single else { continue };
            if w == v {
                if let Some(paths) = &self.unique_paths {
                    for y in 0..self.n {
                        if y == v || d[y].single() != Some(y) {
                            continue;
                        }
                        let Some(mask) = paths[v * self.n + y] else { continue };
                        for z in mask.iter() {
                            if d[z].single() == Some(z) {
                                continue;
                            }
                            if !d[z].contains(z) {
                                self.stats.wipeouts += 1;
                                return false;
                            }
                            d[z] = Bits::singleton(z);
                            self.stats.unique_path_forced += 1;
                            if !queued.contains(z) {
                                queued.insert(z);
                                queue.push(z);
                            }
                        }
                    }
                }
            }
            if let Some(pull) = &self.pulling {
                let (pv, pw) = (&pull.coords[v], &pull.coords[w]);
                for i in 0..pv.len() {
                    if pw[i] == pv[i] {
                        continue;
                    }
                    for &u in self.image.neighbors(v) {
                        let pu = pull.coords[u][i];
                        let mask = if pw[i] > pv[i] && pu < pv[i] {
                            pull.above[i][u]
                        } else if pw[i] < pv[i] && pu > pv[i] {
                            pull.below[i][u]
                        } else {
                            continue;
                        };
                        let nd = d[u] & mask;
                        if nd != d[u] {
                            self.stats.pulling_filtered += 1;
                            if nd.is_empty() {
                                self.stats.wipeouts += 1;
                                return false;
                            }
                            d[u] = nd;
                            if !queued.contains(u) {
                                queued.insert(u);
                                queue.push(u);
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Interior-and-endpoint masks of unique shortest paths, indexed `x * n + y`.
fn unique_path_masks<const W: usize>(image: &DigitalImage) -> Vec<Option<Bits<W>>> {
    let n = image.len();
    let mut out = vec![None; n * n];
    for x in 0..n {
        let dist = image.distances_from(x).expect("vertex in range");
        let mut order: Vec<usize> = (0..n).filter(|&v| dist[v].is_some()).collect();
        order.sort_by_key(|&v| dist[v]);
        let mut count = vec![0u8; n];
        let mut mask: Vec<Option<Bits<W>>> = vec![None; n];
        count[x] = 1;
        mask[x] = Some(Bits::singleton(x));
        for &v in &order {
            if v == x {
                continue;
            }
            let dv = dist[v].unwrap();
            let mut c = 0u8;
            let mut pred = None;
            for &u in image.neighbors(v) {
                if dist[u] == Some(dv - 1) && count[u] > 0 {
                    c = c.saturating_add(count[u]).min(2);
                    pred = Some(u);
                }
            }
            count[v] = c;
            if c == 1 {
                let mut m = mask[pred.unwrap()].expect("unique predecessor has a path");
                m.insert(v);
                mask[v] = Some(m);
            }
        }
        for y in 0..n {
            out[x * n + y] = mask[y];
        }
    }
    out
}

fn pulling_masks<const W: usize>(image: &DigitalImage) -> Pulling<W> {
    let n = image.len();
    let coords: Vec<Vec<i64>> = (0..n).map(|v| image.coords(v).unwrap().coords().to_vec()).collect();
    let dim = image.dimension().unwrap_or(0);
    let mut above = vec![vec![Bits::empty(); n]; dim];
    let mut below = vec![vec![Bits::empty(); n]; dim];
    for i in 0..dim {
        for u in 0..n {
            for w in 0..n {
                if coords[w][i] > coords[u][i] {
                    above[i][u].insert(w);
                } else if coords[w][i] < coords[u][i] {
                    below[i][u].insert(w);
                }
            }
        }
    }
    Pulling { coords, above, below }
}
