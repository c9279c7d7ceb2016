//! The canonical digital-image representation: a finite simple graph whose
//! vertices may carry lattice coordinates and labels.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{self, CuSpec, LatticePoint};

pub type VertexId = usize;

/// A set of vertex ids, kept sorted.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BTreeSet<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    /// `0..n`.
    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        self.0.remove(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn without(&self, v: VertexId) -> VertexSet {
        let mut out = self.clone();
        out.remove(v);
        out
    }

    pub fn with(&self, v: VertexId) -> VertexSet {
        let mut out = self.clone();
        out.insert(v);
        out
    }

    pub fn max(&self) -> Option<VertexId> {
        self.0.last().copied()
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = VertexId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, VertexId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl Extend<VertexId> for VertexSet {
    fn extend<I: IntoIterator<Item = VertexId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vertex {
    pub coords: Option<LatticePoint>,
    pub label: Option<String>,
}

/// How the edge set of an image was specified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    Cu(CuSpec),
    Explicit,
}

/// A digital image `(X, κ)`. Immutable once built; edges are always
/// materialized, also for `c_u` images.
#[derive(Clone, Debug)]
pub struct DigitalImage {
    vertices: Vec<Vertex>,
    adjacency: Adjacency,
    dimension: Option<usize>,
    neighbors: Vec<Vec<VertexId>>,
    point_index: HashMap<LatticePoint, VertexId>,
}

impl DigitalImage {
    /// A coordinate-backed image with `c_u` adjacency. Vertex ids follow the
    /// order of `points`.
    pub fn from_points(points: Vec<LatticePoint>, spec: CuSpec) -> Result<Self> {
        let d = spec.dim();
        let mut point_index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
            }
            p.check_magnitude()?;
            if point_index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        let offsets = lattice::cu_offsets(spec);
        let mut neighbors = vec![Vec::new(); points.len()];
        let mut probe = vec![0i64; d];
        for (i, p) in points.iter().enumerate() {
            for off in &offsets {
                for k in 0..d {
                    probe[k] = p.coords()[k] + off[k];
                }
                if let Some(&j) = point_index.get(&LatticePoint::new(probe.clone())) {
                    neighbors[i].push(j);
                }
            }
            neighbors[i].sort_unstable();
        }
        let vertices = points
            .into_iter()
            .map(|p| Vertex { coords: Some(p), label: None })
            .collect();
        Ok(DigitalImage {
            vertices,
            adjacency: Adjacency::Cu(spec),
            dimension: Some(d),
            neighbors,
            point_index,
        })
    }

    /// An image with an explicit edge set. Edges are symmetrized and
    /// deduplicated; loops are rejected.
    pub fn explicit(
        vertices: Vec<Vertex>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        dimension: Option<usize>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut point_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(p) = &v.coords {
                if let Some(d) = dimension {
                    if p.dim() != d {
                        return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
                    }
                }
                p.check_magnitude()?;
                if point_index.insert(p.clone(), i).is_some() {
                    return Err(Error::DuplicatePoint(p.to_string()));
                }
            }
        }
        let mut sets = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidEdge(a, b));
            }
            sets[a].insert(b);
            sets[b].insert(a);
        }
        let neighbors = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(DigitalImage {
            vertices,
            adjacency: Adjacency::Explicit,
            dimension,
            neighbors,
            point_index,
        })
    }

    pub fn with_label(mut self, v: VertexId, label: impl Into<String>) -> Self {
        self.vertices[v].label = Some(label.into());
        self
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_ids(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    /// The `c_u` spec when the image is coordinate-backed with `c_u` adjacency.
    pub fn cu_spec(&self) -> Option<CuSpec> {
        match self.adjacency {
            Adjacency::Cu(s) => Some(s),
            Adjacency::Explicit => None,
        }
    }

    pub fn coords(&self, v: VertexId) -> Option<&LatticePoint> {
        self.vertices.get(v).and_then(|x| x.coords.as_ref())
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.vertices.get(v).and_then(|x| x.label.as_deref())
    }

    /// Every vertex carries coordinates.
    pub fn is_coordinate_backed(&self) -> bool {
        self.vertices.iter().all(|v| v.coords.is_some())
    }

    pub fn find_point(&self, p: &LatticePoint) -> Option<VertexId> {
        self.point_index.get(p).copied()
    }

    pub fn find_label(&self, label: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.label.as_deref() == Some(label))
    }

    /// A readable name: the label, else the coordinates, else the id.
    pub fn display_name(&self, v: VertexId) -> String {
        match (self.label(v), self.coords(v)) {
            (Some(l), _) => l.to_string(),
            (None, Some(p)) => p.to_string(),
            (None, None) => v.to_string(),
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.max() {
            Some(m) if m >= self.len() => Err(Error::UnknownVertex(m)),
            _ => Ok(()),
        }
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors[v].len()
    }

    pub fn are_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    /// `a == b` or `a` adjacent to `b`.
    pub fn adjacent_or_equal(&self, a: VertexId, b: VertexId) -> bool {
        a == b || self.are_adjacent(a, b)
    }

    /// Each undirected edge once, as `(smaller, larger)`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// `N(X, x, κ)`: `x` together with its neighbors.
    pub fn neighborhood(&self, x: VertexId) -> Result<VertexSet> {
        self.check_vertex(x)?;
        let mut out: VertexSet = self.neighbors[x].iter().copied().collect();
        out.insert(x);
        Ok(out)
    }

    /// BFS distances from `x`; `None` marks unreachable vertices.
    pub fn distances_from(&self, x: VertexId) -> Result<Vec<Option<usize>>> {
        self.check_vertex(x)?;
        let mut dist = vec![None; self.len()];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Shortest-path distance; `None` when no path exists.
    pub fn distance(&self, x: VertexId, y: VertexId) -> Result<Option<usize>> {
        self.check_vertex(y)?;
        Ok(self.distances_from(x)?[y])
    }

    /// The full distance table, `None` for pairs in different components.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.len())
            .map(|x| self.distances_from(x).expect("vertex in range"))
            .collect()
    }

    /// Connected components, each listed in BFS order from its smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.neighbors[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// The empty image counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn diameter(&self) -> Result<usize> {
        if self.is_empty() || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut best = 0;
        for x in 0..self.len() {
            let d = self.distances_from(x)?;
            best = best.max(d.into_iter().flatten().max().unwrap_or(0));
        }
        Ok(best)
    }

    /// Every vertex is in `dominators` or adjacent to a member.
    pub fn is_dominating(&self, dominators: &VertexSet) -> bool {
        (0..self.len()).all(|x| {
            dominators.contains(x) || self.neighbors[x].iter().any(|&y| dominators.contains(y))
        })
    }

    /// The shortest path from `x` to `y` if it is the only one, else `None`.
    pub fn unique_shortest_path(&self, x: VertexId, y: VertexId) -> Result<Option<Vec<VertexId>>> {
        self.check_vertex(y)?;
        let dist = self.distances_from(x)?;
        if dist[y].is_none() {
            return Err(Error::DisconnectedPair(x, y));
        }
        Ok(unique_path_from_layers(self, &dist, x, y))
    }

    /// `Bd(X)` for a coordinate-backed image.
    pub fn c1_boundary(&self) -> Result<VertexSet> {
        let dim = self.dimension.ok_or(Error::NotCoordinateBacked)?;
        if !self.is_coordinate_backed() {
            return Err(Error::NotCoordinateBacked);
        }
        let pts: BTreeSet<LatticePoint> = self.vertices.iter().filter_map(|v| v.coords.clone()).collect();
        let bd = lattice::c1_boundary(&pts, dim)?;
        Ok(bd.iter().map(|p| self.point_index[p]).collect())
    }
}

/// Path counting over the BFS layer DAG with counts capped at 2.
pub(crate) fn unique_path_from_layers(
    image: &DigitalImage,
    dist: &[Option<usize>],
    x: VertexId,
    y: VertexId,
) -> Option<Vec<VertexId>> {
    let target = dist[y]?;
    let mut order: Vec<VertexId> = (0..image.len()).filter(|&v| dist[v].is_some_and(|d| d <= target)).collect();
    order.sort_by_key(|&v| dist[v]);
    let mut count = vec![0u8; image.len()];
    count[x] = 1;
    for &v in &order {
        if v == x {
            continue;
        }
        let dv = dist[v].unwrap();
        let c: u8 = image.neighbors[v]
            .iter()
            .filter(|&&u| dist[u] == Some(dv - 1))
            .map(|&u| count[u])
            .fold(0u8, |acc, c| acc.saturating_add(c).min(2));
        count[v] = c;
    }
    if count[y] != 1 {
        return None;
    }
    let mut path = vec![y];
    let mut cur = y;
    while cur != x {
        let dc = dist[cur].unwrap();
        cur = *image.neighbors[cur]
            .iter()
            .find(|&&u| dist[u] == Some(dc - 1) && count[u] > 0)
            .expect("counted predecessor");
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(m: usize) -> DigitalImage {
        let vs = vec![Vertex::default(); m];
        DigitalImage::explicit(vs, (0..m).map(|i| (i, (i + 1) % m)), None).unwrap()
    }

    fn grid(m: i64, u: usize) -> DigitalImage {
        let mut pts = Vec::new();
        for a in 0..=m {
            for b in 0..=m {
                pts.push(LatticePoint::new(vec![a, b]));
            }
        }
        DigitalImage::from_points(pts, CuSpec::new(u, 2).unwrap()).unwrap()
    }

    fn id_of(img: &DigitalImage, c: [i64; 2]) -> VertexId {
        img.find_point(&LatticePoint::from(c)).unwrap()
    }

    #[test]
    fn neighborhood_examples() {
        let c4 = cycle(4);
        assert_eq!(c4.neighborhood(0).unwrap().len(), 3);
        let one = DigitalImage::explicit(vec![Vertex::default()], [], None).unwrap();
        assert_eq!(one.neighborhood(0).unwrap().to_vec(), vec![0]);
        assert_eq!(one.neighborhood(1), Err(Error::UnknownVertex(1)));
    }

    #[test]
    fn distance_examples() {
        let g1 = grid(2, 1);
        assert_eq!(g1.distance(id_of(&g1, [0, 0]), id_of(&g1, [2, 2])), Ok(Some(4)));
        let g2 = grid(2, 2);
        assert_eq!(g2.distance(id_of(&g2, [0, 0]), id_of(&g2, [2, 2])), Ok(Some(2)));
        assert_eq!(g2.distance(3, 3), Ok(Some(0)));
        let two = DigitalImage::explicit(vec![Vertex::default(); 2], [], None).unwrap();
        assert_eq!(two.distance(0, 1), Ok(None));
        assert!(!two.is_connected());
        assert_eq!(two.diameter(), Err(Error::Disconnected));
    }

    #[test]
    fn connectivity_and_diameter() {
        let empty = DigitalImage::explicit(vec![], [], None).unwrap();
        assert!(empty.is_connected());
        let one = DigitalImage::explicit(vec![Vertex::default()], [], None).unwrap();
        assert!(one.is_connected());
        assert_eq!(one.diameter(), Ok(0));
        assert_eq!(cycle(8).diameter(), Ok(4));
    }

    #[test]
    fn domination() {
        let c8 = cycle(8);
        assert!(!c8.is_dominating(&[0].into_iter().collect()));
        assert!(c8.is_dominating(&c8.vertex_ids()));
        assert!(c8.is_dominating(&[0, 3, 6].into_iter().collect()));
        assert!(!c8.is_dominating(&[0, 4].into_iter().collect()));
    }

    #[test]
    fn unique_paths() {
        let g = grid(1, 1);
        assert_eq!(g.unique_shortest_path(id_of(&g, [0, 0]), id_of(&g, [1, 1])), Ok(None));
        assert_eq!(g.unique_shortest_path(2, 2), Ok(Some(vec![2])));
        let line = grid(2, 1);
        let a = id_of(&line, [0, 0]);
        let b = id_of(&line, [0, 2]);
        assert_eq!(line.unique_shortest_path(a, b), Ok(Some(vec![a, id_of(&line, [0, 1]), b])));
        let two = DigitalImage::explicit(vec![Vertex::default(); 2], [], None).unwrap();
        assert_eq!(two.unique_shortest_path(0, 1), Err(Error::DisconnectedPair(0, 1)));
    }

    #[test]
    fn explicit_validation() {
        assert_eq!(
            DigitalImage::explicit(vec![Vertex::default(); 2], [(0, 0)], None).unwrap_err(),
            Error::InvalidEdge(0, 0)
        );
        assert!(DigitalImage::explicit(vec![Vertex::default(); 2], [(0, 2)], None).is_err());
        let g = DigitalImage::explicit(vec![Vertex::default(); 3], [(0, 1), (1, 0), (2, 1)], None).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn from_points_rejects_bad_points() {
        let s = CuSpec::new(1, 2).unwrap();
        let dup = vec![LatticePoint::from([0, 0]), LatticePoint::from([0, 0])];
        assert!(matches!(DigitalImage::from_points(dup, s), Err(Error::DuplicatePoint(_))));
        let big = vec![LatticePoint::from([1 << 31, 0])];
        assert!(matches!(DigitalImage::from_points(big, s), Err(Error::CoordinateOverflow(_))));
        let bad_dim = vec![LatticePoint::from([0])];
        assert!(matches!(DigitalImage::from_points(bad_dim, s), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn boundary_requires_coordinates() {
        assert_eq!(cycle(4).c1_boundary(), Err(Error::NotCoordinateBacked));
        assert_eq!(grid(2, 1).c1_boundary().unwrap().len(), 8);
    }
}
