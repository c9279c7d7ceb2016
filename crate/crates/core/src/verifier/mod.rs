//! Decision procedures for freezing, s-cold, (m,n)-limiting, and minimal
//! freezing sets.
//!
//! Every query reduces to one search: look for a continuous self-map whose
//! displacement on the subset is at most `m` (zero means pointwise fixed) and
//! whose displacement somewhere exceeds a threshold. Freezing is `(0, 0)`,
//! s-cold is `(0, s)`, and `(m, n)`-limiting is itself. A found map is the
//! witness; an exhausted search proves the property; a blown budget yields
//! [`Verdict::Unknown`].

mod bits;
mod search;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

pub use search::{Pruning, PruningStats, SearchBudget};
use search::{run_search, BudgetTracker, EngineOutcome, Goal, Problem};

use crate::error::{Error, Result};
use crate::graph::{DigitalImage, VertexId, VertexSet};
use crate::maps::Mapping;

/// Largest image accepted by map enumeration.
pub const ENUMERATION_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Property {
    Freezing,
    SCold { s: usize },
    Limiting { m: usize, n: usize },
    MinimalFreezing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct VerificationQuery<'a> {
    pub property: Property,
    pub image: &'a DigitalImage,
    pub subset: VertexSet,
    pub budget: SearchBudget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: Property,
    pub subset: Vec<VertexId>,
    pub budget: SearchBudget,
    pub verdict: Verdict,
    /// A continuous self-map violating the property. Present whenever the
    /// verdict is `fails`, except for a minimality failure caused by a
    /// removable vertex.
    pub witness: Option<Vec<VertexId>>,
    /// For minimality queries: a member whose removal leaves a freezing set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removable: Option<VertexId>,
    pub nodes_expanded: u64,
    pub elapsed_ms: u64,
    pub pruning_stats: PruningStats,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn witness_map<'a>(&self, image: &'a DigitalImage) -> Option<Result<Mapping<'a>>> {
        self.witness.clone().map(|w| Mapping::self_map(image, w))
    }
}

#[derive(Debug)]
pub enum Counterexample<'a> {
    Found(Mapping<'a>),
    NoneExists,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapCount {
    Exact(u64),
    ExceedsCap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalSearch {
    Found(VertexSet),
    Unknown,
}

enum SearchResult {
    Witness(Vec<VertexId>),
    NoWitness,
    OutOfBudget,
}

/// Runs queries under a budget and a set of pruning rules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Verifier {
    pub budget: SearchBudget,
    pub pruning: Pruning,
}

impl Verifier {
    pub fn new(budget: SearchBudget) -> Self {
        Verifier { budget, pruning: Pruning::default() }
    }

    pub fn with_pruning(mut self, pruning: Pruning) -> Self {
        self.pruning = pruning;
        self
    }

    fn check_query(image: &DigitalImage, subset: &VertexSet) -> Result<()> {
        image.check_set(subset)?;
        if !image.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Looks for a continuous `f` with `d(a, f(a)) <= radius` on `subset`
    /// and `d(x, f(x)) > threshold` for some `x`.
    fn violation(
        &self,
        image: &DigitalImage,
        subset: &VertexSet,
        radius: usize,
        threshold: usize,
        tracker: &mut BudgetTracker,
        stats: &mut PruningStats,
    ) -> Result<SearchResult> {
        let mut restrict = vec![None; image.len()];
        for a in subset {
            let ball: VertexSet = if radius == 0 {
                [a].into_iter().collect()
            } else {
                let d = image.distances_from(a)?;
                (0..image.len()).filter(|&w| d[w].is_some_and(|dw| dw <= radius)).collect()
            };
            restrict[a] = Some(ball);
        }
        let problem = Problem {
            image,
            restrict,
            goal: Goal::Violation { threshold },
            roots: subset.clone(),
        };
        let mut found = None;
        let outcome = run_search(&problem, self.pruning, tracker, stats, &mut |a: &[VertexId]| {
            found = Some(a.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(match (outcome, found) {
            (EngineOutcome::Stopped, Some(w)) => {
                let f = Mapping::self_map(image, w.clone())?;
                assert!(f.is_continuous(), "search produced a discontinuous witness");
                assert!(f.max_displacement(subset)? <= radius, "witness violates the hypothesis");
                assert!(
                    f.max_displacement(&image.vertex_ids())? > threshold,
                    "witness satisfies the conclusion"
                );
                SearchResult::Witness(w)
            }
            (EngineOutcome::OutOfBudget, _) => SearchResult::OutOfBudget,
            _ => SearchResult::NoWitness,
        })
    }

    fn displacement_query(
        &self,
        property: Property,
        image: &DigitalImage,
        subset: &VertexSet,
        radius: usize,
        threshold: usize,
    ) -> Result<VerificationReport> {
        Self::check_query(image, subset)?;
        let mut tracker = BudgetTracker::new(self.budget);
        let mut stats = PruningStats::default();
        let result = self.violation(image, subset, radius, threshold, &mut tracker, &mut stats)?;
        let (verdict, witness) = match result {
            SearchResult::Witness(w) => (Verdict::Fails, Some(w)),
            SearchResult::NoWitness => (Verdict::Holds, None),
            SearchResult::OutOfBudget => (Verdict::Unknown, None),
        };
        Ok(self.report(property, subset, verdict, witness, None, &tracker, stats))
    }

    #[allow(clippy::too_many_arguments)]
    fn report(
        &self,
        property: Property,
        subset: &VertexSet,
        verdict: Verdict,
        witness: Option<Vec<VertexId>>,
        removable: Option<VertexId>,
        tracker: &BudgetTracker,
        stats: PruningStats,
    ) -> VerificationReport {
        VerificationReport {
            property,
            subset: subset.to_vec(),
            budget: self.budget,
            verdict,
            witness,
            removable,
            nodes_expanded: stats.nodes_expanded,
            elapsed_ms: tracker.elapsed_millis(),
            pruning_stats: stats,
        }
    }

    /// A continuous non-identity self-map fixing `subset` pointwise, if any.
    pub fn find_counterexample_freezing<'a>(&self, image: &'a DigitalImage, subset: &VertexSet) -> Result<Counterexample<'a>> {
        Self::check_query(image, subset)?;
        let mut tracker = BudgetTracker::new(self.budget);
        let mut stats = PruningStats::default();
        Ok(match self.violation(image, subset, 0, 0, &mut tracker, &mut stats)? {
            SearchResult::Witness(w) => Counterexample::Found(Mapping::self_map(image, w)?),
            SearchResult::NoWitness => Counterexample::NoneExists,
            SearchResult::OutOfBudget => Counterexample::Unknown,
        })
    }

    pub fn is_freezing(&self, image: &DigitalImage, subset: &VertexSet) -> Result<VerificationReport> {
        self.displacement_query(Property::Freezing, image, subset, 0, 0)
    }

    pub fn is_s_cold(&self, image: &DigitalImage, subset: &VertexSet, s: usize) -> Result<VerificationReport> {
        self.displacement_query(Property::SCold { s }, image, subset, 0, s)
    }

    pub fn is_limiting(&self, image: &DigitalImage, subset: &VertexSet, m: usize, n: usize) -> Result<VerificationReport> {
        self.displacement_query(Property::Limiting { m, n }, image, subset, m, n)
    }

    /// Freezing, and no single member can be dropped. Supersets of freezing
    /// sets are freezing, so single deletions cover every proper subset.
    pub fn is_minimal_freezing(&self, image: &DigitalImage, subset: &VertexSet) -> Result<VerificationReport> {
        Self::check_query(image, subset)?;
        let property = Property::MinimalFreezing;
        let mut tracker = BudgetTracker::new(self.budget);
        let mut stats = PruningStats::default();
        match self.violation(image, subset, 0, 0, &mut tracker, &mut stats)? {
            SearchResult::Witness(w) => {
                return Ok(self.report(property, subset, Verdict::Fails, Some(w), None, &tracker, stats));
            }
            SearchResult::OutOfBudget => {
                return Ok(self.report(property, subset, Verdict::Unknown, None, None, &tracker, stats));
            }
            SearchResult::NoWitness => {}
        }
        let mut unknown = false;
        for a in subset {
            match self.violation(image, &subset.without(a), 0, 0, &mut tracker, &mut stats)? {
                SearchResult::Witness(_) => {}
                SearchResult::NoWitness => {
                    return Ok(self.report(property, subset, Verdict::Fails, None, Some(a), &tracker, stats));
                }
                SearchResult::OutOfBudget => unknown = true,
            }
            if unknown {
                break;
            }
        }
        let verdict = if unknown { Verdict::Unknown } else { Verdict::Holds };
        Ok(self.report(property, subset, verdict, None, None, &tracker, stats))
    }

    /// Runs a query under its own budget.
    pub fn verify(&self, query: &VerificationQuery<'_>) -> Result<VerificationReport> {
        let v = Verifier { budget: query.budget, ..*self };
        match query.property {
            Property::Freezing => v.is_freezing(query.image, &query.subset),
            Property::SCold { s } => v.is_s_cold(query.image, &query.subset, s),
            Property::Limiting { m, n } => v.is_limiting(query.image, &query.subset, m, n),
            Property::MinimalFreezing => v.is_minimal_freezing(query.image, &query.subset),
        }
    }

    /// Greedy deletion from a freezing seed, in ascending vertex order. The
    /// seed defaults to `Bd(X)` for coordinate-backed images and to all of
    /// `X` otherwise. One pass suffices: a vertex that cannot be dropped
    /// stays undroppable as the set shrinks.
    pub fn search_minimal_freezing(&self, image: &DigitalImage, seed: Option<&VertexSet>) -> Result<MinimalSearch> {
        let seed = match seed {
            Some(s) => s.clone(),
            None if image.is_coordinate_backed() && image.dimension().is_some() => image.c1_boundary()?,
            None => image.vertex_ids(),
        };
        Self::check_query(image, &seed)?;
        let mut tracker = BudgetTracker::new(self.budget);
        let mut stats = PruningStats::default();
        match self.violation(image, &seed, 0, 0, &mut tracker, &mut stats)? {
            SearchResult::Witness(_) => return Err(Error::SeedNotFreezing),
            SearchResult::OutOfBudget => return Ok(MinimalSearch::Unknown),
            SearchResult::NoWitness => {}
        }
        let mut current = seed.clone();
        for v in seed.iter() {
            let candidate = current.without(v);
            match self.violation(image, &candidate, 0, 0, &mut tracker, &mut stats)? {
                SearchResult::NoWitness => current = candidate,
                SearchResult::Witness(_) => {}
                SearchResult::OutOfBudget => return Ok(MinimalSearch::Unknown),
            }
        }
        Ok(MinimalSearch::Found(current))
    }

    /// Visits every continuous self-map fixing `fixed` pointwise, stopping
    /// after `cap` maps. Returns the number visited, or `ExceedsCap`.
    pub fn for_each_continuous_self_map(
        &self,
        image: &DigitalImage,
        fixed: &VertexSet,
        cap: u64,
        mut visit: impl FnMut(&[VertexId]),
    ) -> Result<MapCount> {
        if image.len() > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(image.len()));
        }
        image.check_set(fixed)?;
        let mut restrict = vec![None; image.len()];
        for a in fixed {
            restrict[a] = Some([a].into_iter().collect());
        }
        let problem = Problem { image, restrict, goal: Goal::Enumerate, roots: fixed.clone() };
        let mut tracker = BudgetTracker::new(SearchBudget { max_nodes: u64::MAX, max_millis: u64::MAX });
        let mut stats = PruningStats::default();
        let mut count = 0u64;
        let outcome = run_search(&problem, self.pruning, &mut tracker, &mut stats, &mut |a: &[VertexId]| {
            if count == cap {
                return ControlFlow::Break(());
            }
            count += 1;
            visit(a);
            ControlFlow::Continue(())
        })?;
        Ok(match outcome {
            EngineOutcome::Stopped => MapCount::ExceedsCap,
            _ => MapCount::Exact(count),
        })
    }

    /// Exact number of continuous self-maps fixing `fixed`, up to `cap`.
    pub fn count_continuous_self_maps(&self, image: &DigitalImage, fixed: &VertexSet, cap: u64) -> Result<MapCount> {
        self.for_each_continuous_self_map(image, fixed, cap, |_| {})
    }
}

#[cfg(test)]
mod tests;
