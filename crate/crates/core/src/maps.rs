//! Functions between digital images.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DigitalImage, VertexId, VertexSet};

/// A total function `source -> target`, stored as a dense assignment array.
#[derive(Clone, Debug)]
pub struct Mapping<'a> {
    source: &'a DigitalImage,
    target: &'a DigitalImage,
    assignment: Vec<VertexId>,
}

impl PartialEq for Mapping<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.source, other.source)
            && std::ptr::eq(self.target, other.target)
            && self.assignment == other.assignment
    }
}

impl<'a> Mapping<'a> {
    pub fn new(source: &'a DigitalImage, target: &'a DigitalImage, assignment: Vec<VertexId>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::MappingLength { expected: source.len(), found: assignment.len() });
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= target.len()) {
            return Err(Error::UnknownVertex(bad));
        }
        Ok(Mapping { source, target, assignment })
    }

    pub fn self_map(image: &'a DigitalImage, assignment: Vec<VertexId>) -> Result<Self> {
        Mapping::new(image, image, assignment)
    }

    pub fn identity(image: &'a DigitalImage) -> Self {
        Mapping { source: image, target: image, assignment: (0..image.len()).collect() }
    }

    /// Identity except at the listed vertices.
    pub fn identity_except(image: &'a DigitalImage, changes: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut a: Vec<VertexId> = (0..image.len()).collect();
        for &(x, y) in changes {
            image.check_vertex(x)?;
            a[x] = y;
        }
        Mapping::self_map(image, a)
    }

    pub fn from_fn(source: &'a DigitalImage, target: &'a DigitalImage, f: impl Fn(VertexId) -> VertexId) -> Result<Self> {
        Mapping::new(source, target, (0..source.len()).map(f).collect())
    }

    pub fn source(&self) -> &'a DigitalImage {
        self.source
    }

    pub fn target(&self) -> &'a DigitalImage {
        self.target
    }

    pub fn assignment(&self) -> &[VertexId] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<VertexId> {
        self.assignment
    }

    pub fn apply(&self, x: VertexId) -> VertexId {
        self.assignment[x]
    }

    pub fn is_self_map(&self) -> bool {
        std::ptr::eq(self.source, self.target)
    }

    pub fn is_identity(&self) -> bool {
        self.is_self_map() && self.assignment.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// Adjacent points go to adjacent-or-equal points.
    pub fn is_continuous(&self) -> bool {
        self.source
            .edges()
            .all(|(a, b)| self.target.adjacent_or_equal(self.assignment[a], self.assignment[b]))
    }

    pub fn fixed_points(&self) -> Result<VertexSet> {
        if !self.is_self_map() {
            return Err(Error::NotSelfMap);
        }
        Ok(self.assignment.iter().enumerate().filter(|(i, &y)| *i == y).map(|(i, _)| i).collect())
    }

    /// `max_{x in subset} d(x, f(x))`, 0 for the empty subset.
    pub fn max_displacement(&self, subset: &VertexSet) -> Result<usize> {
        if !self.is_self_map() {
            return Err(Error::NotSelfMap);
        }
        self.source.check_set(subset)?;
        if !self.source.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut best = 0;
        for x in subset {
            let d = self.source.distance(x, self.assignment[x])?.ok_or(Error::Disconnected)?;
            best = best.max(d);
        }
        Ok(best)
    }

    /// Continuous bijection with continuous inverse.
    pub fn is_isomorphism(&self) -> bool {
        let n = self.source.len();
        if n != self.target.len() {
            return false;
        }
        let mut inverse = vec![usize::MAX; n];
        for (x, &y) in self.assignment.iter().enumerate() {
            if inverse[y] != usize::MAX {
                return false;
            }
            inverse[y] = x;
        }
        let inv = Mapping { source: self.target, target: self.source, assignment: inverse };
        self.is_continuous() && inv.is_continuous()
    }

    pub fn push_forward(&self, subset: &VertexSet) -> VertexSet {
        subset.iter().map(|a| self.assignment[a]).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Mapping<'a>) -> Result<Mapping<'a>> {
        if !std::ptr::eq(self.target, other.source) {
            return Err(Error::InvalidParameter("mappings are not composable".into()));
        }
        Ok(Mapping {
            source: self.source,
            target: other.target,
            assignment: self.assignment.iter().map(|&y| other.assignment[y]).collect(),
        })
    }

    /// Checks both implications of the pulling lemma on every adjacent pair
    /// and coordinate: if `f` pushes `q` away from a neighbor `q'` along axis
    /// `i`, then `f` moves `q'` in the same direction.
    pub fn check_pulling(&self) -> Result<bool> {
        let img = self.source;
        if !self.is_self_map() || img.cu_spec().is_none() || !img.is_coordinate_backed() {
            return Err(Error::NotCoordinateBacked);
        }
        if !self.is_continuous() {
            return Err(Error::NotContinuous);
        }
        let c = |v: VertexId| img.coords(v).expect("coordinate-backed").coords();
        for (a, b) in img.edges() {
            for (q, q2) in [(a, b), (b, a)] {
                let (pq, pq2) = (c(q), c(q2));
                let (fq, fq2) = (c(self.assignment[q]), c(self.assignment[q2]));
                for i in 0..pq.len() {
                    if fq[i] > pq[i] && pq[i] > pq2[i] && fq2[i] <= pq2[i] {
                        return Ok(false);
                    }
                    if fq[i] < pq[i] && pq[i] < pq2[i] && fq2[i] >= pq2[i] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A continuous self-map of `image` fixing `fixed` pointwise, drawn by a
/// seeded randomized backtracking search. Vertices are assigned in BFS order
/// from `fixed`; each takes a uniformly chosen value among those compatible
/// with its already-assigned neighbors. The identity is always a valid
/// completion, so the search succeeds.
pub fn random_continuous_map<'a>(image: &'a DigitalImage, fixed: &VertexSet, seed: u64) -> Result<Mapping<'a>> {
    image.check_set(fixed)?;
    let n = image.len();
    let order = bfs_order_from(image, fixed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![usize::MAX; n];
    for v in fixed {
        assignment[v] = v;
    }
    let free: Vec<VertexId> = order.into_iter().filter(|&v| !fixed.contains(v)).collect();
    let ok = extend_randomly(image, &free, 0, &mut assignment, &mut rng);
    debug_assert!(ok, "identity extension always exists");
    Mapping::self_map(image, assignment)
}

fn extend_randomly(
    image: &DigitalImage,
    order: &[VertexId],
    depth: usize,
    assignment: &mut [VertexId],
    rng: &mut ChaCha8Rng,
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let mut candidates: Vec<VertexId> = (0..image.len())
        .filter(|&w| {
            image.neighbors(v).iter().all(|&u| {
                let fu = assignment[u];
                fu == usize::MAX || image.adjacent_or_equal(fu, w)
            })
        })
        .collect();
    candidates.shuffle(rng);
    for w in candidates {
        assignment[v] = w;
        if extend_randomly(image, order, depth + 1, assignment, rng) {
            return true;
        }
    }
    assignment[v] = usize::MAX;
    false
}

/// Every vertex, in multi-source BFS order from `sources` (sources first,
/// ascending), then remaining components from their smallest id.
pub(crate) fn bfs_order_from(image: &DigitalImage, sources: &VertexSet) -> Vec<VertexId> {
    let n = image.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for s in sources {
        seen[s] = true;
        queue.push_back(s);
    }
    let mut next_root = 0;
    loop {
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in image.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        while next_root < n && seen[next_root] {
            next_root += 1;
        }
        if next_root == n {
            break;
        }
        seen[next_root] = true;
        queue.push_back(next_root);
    }
    order
}
