//! Builders for intervals, boxes, cycles, cones, suspensions, and the digital
//! pyramid family. Every builder returns a [`NamedComplex`] so callers can
//! refer to apexes, levels, edges, and faces by name.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DigitalImage, Vertex, VertexId, VertexSet};
use crate::lattice::{CuSpec, LatticePoint};

/// An image plus named vertex subsets.
#[derive(Clone, Debug)]
pub struct NamedComplex {
    pub image: DigitalImage,
    pub named_sets: BTreeMap<String, VertexSet>,
}

impl NamedComplex {
    pub fn new(image: DigitalImage) -> Self {
        NamedComplex { image, named_sets: BTreeMap::new() }
    }

    pub fn set(&self, name: &str) -> Option<&VertexSet> {
        self.named_sets.get(name)
    }

    /// Like [`set`](Self::set) but reports a missing name as an error.
    pub fn require(&self, name: &str) -> Result<&VertexSet> {
        self.set(name)
            .ok_or_else(|| Error::InvalidParameter(format!("no named set {name:?}")))
    }

    /// Union of several named sets.
    pub fn union_of(&self, names: &[&str]) -> Result<VertexSet> {
        let mut out = VertexSet::new();
        for n in names {
            out.extend(self.require(n)?.iter());
        }
        Ok(out)
    }

    /// The single member of a one-element named set such as `"U"`.
    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        let s = self.require(name)?;
        match s.len() {
            1 => Ok(s.iter().next().unwrap()),
            _ => Err(Error::InvalidParameter(format!("named set {name:?} is not a single vertex"))),
        }
    }

    fn insert(&mut self, name: impl Into<String>, set: VertexSet) {
        self.named_sets.insert(name.into(), set);
    }

    fn points_where(&self, pred: impl Fn(&[i64]) -> bool) -> VertexSet {
        (0..self.image.len())
            .filter(|&v| self.image.coords(v).is_some_and(|p| pred(p.coords())))
            .collect()
    }
}

fn pts(v: impl IntoIterator<Item = Vec<i64>>) -> Vec<LatticePoint> {
    v.into_iter().map(LatticePoint::new).collect()
}

/// `[a, b]_Z` with `c_1` adjacency.
pub fn interval(a: i64, b: i64) -> Result<NamedComplex> {
    if a > b {
        return Err(Error::InvalidParameter(format!("interval requires a <= b, got [{a}, {b}]")));
    }
    let image = DigitalImage::from_points(pts((a..=b).map(|x| vec![x])), CuSpec::new(1, 1)?)?;
    let mut nc = NamedComplex::new(image);
    let ends: VertexSet = [0, nc.image.len() - 1].into_iter().collect();
    nc.insert("corners", ends.clone());
    nc.insert("Bd", ends);
    Ok(nc)
}

/// `Π [0, m_i]_Z` with `c_u` adjacency, named `corners` and `Bd`.
pub fn box_image(extents: &[i64], u: usize) -> Result<NamedComplex> {
    if extents.is_empty() || extents.iter().any(|&m| m < 1) {
        return Err(Error::InvalidParameter(format!("box extents must be positive, got {extents:?}")));
    }
    let spec = CuSpec::new(u, extents.len())?;
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for &m in extents {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..=m).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    let image = DigitalImage::from_points(pts(points), spec)?;
    let mut nc = NamedComplex::new(image);
    let corners = nc.points_where(|c| c.iter().zip(extents).all(|(&x, &m)| x == 0 || x == m));
    let bd = nc.image.c1_boundary()?;
    nc.insert("corners", corners);
    nc.insert("Bd", bd);
    Ok(nc)
}

/// An abstract simple closed curve on `m >= 4` vertices labeled `x0..`.
pub fn simple_closed_curve(m: usize) -> Result<NamedComplex> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!("simple closed curve needs m >= 4, got {m}")));
    }
    let vertices = (0..m)
        .map(|i| Vertex { coords: None, label: Some(format!("x{i}")) })
        .collect();
    let image = DigitalImage::explicit(vertices, (0..m).map(|i| (i, (i + 1) % m)), None)?;
    Ok(NamedComplex::new(image))
}

fn extend_with_poles(base: &DigitalImage, poles: &[&str]) -> Result<NamedComplex> {
    if base.is_empty() {
        return Err(Error::InvalidParameter("cone/suspension base must be nonempty".into()));
    }
    let n = base.len();
    let mut vertices = base.vertices().to_vec();
    let mut edges: Vec<(VertexId, VertexId)> = base.edges().collect();
    for (k, name) in poles.iter().enumerate() {
        vertices.push(Vertex { coords: None, label: Some(name.to_string()) });
        edges.extend((0..n).map(|x| (x, n + k)));
    }
    let image = DigitalImage::explicit(vertices, edges, base.dimension())?;
    let mut nc = NamedComplex::new(image);
    nc.insert("X_base", VertexSet::full(n));
    for (k, name) in poles.iter().enumerate() {
        nc.insert(*name, [n + k].into_iter().collect());
    }
    Ok(nc)
}

/// The cone `CX`: a new apex `U` adjacent to every vertex of `X`. Base
/// vertices keep their ids; `U` gets id `|X|`.
pub fn cone(base: &DigitalImage) -> Result<NamedComplex> {
    extend_with_poles(base, &["U"])
}

/// The suspension `SX`: poles `U` (id `|X|`) and `L` (id `|X|+1`), each
/// adjacent to all of `X` and not to each other.
pub fn suspension(base: &DigitalImage) -> Result<NamedComplex> {
    extend_with_poles(base, &["U", "L"])
}

fn check_height(n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("pyramid height must be >= 1, got {n}")));
    }
    Ok(())
}

/// Level `i` of the hollow pyramid at height `z`: the square ring of radius `i`.
fn ring(i: i64, z: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in -i..=i {
        for b in -i..=i {
            if a.abs() == i || b.abs() == i {
                out.push(vec![a, b, z]);
            }
        }
    }
    out
}

/// Level `i` of the solid pyramid: the full square of radius `i`.
fn square(i: i64, z: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in -i..=i {
        for b in -i..=i {
            out.push(vec![a, b, z]);
        }
    }
    out
}

/// Names shared by `P_n` and `Q_n`: apex, levels, corners, edges and faces.
fn name_pyramid_parts(nc: &mut NamedComplex, n: i64) {
    let level = |c: &[i64]| n - c[2];
    let radius = |c: &[i64]| c[0].abs().max(c[1].abs());
    let apex = nc.points_where(|c| c == [0, 0, n]);
    nc.insert("U", apex);
    for i in 0..=n {
        let t = nc.points_where(|c| c[2] == n - i && radius(c) == i);
        nc.insert(format!("T_{i}"), t);
        let tp = nc.points_where(|c| c[2] == n - i && c[0].abs() == i && c[1].abs() == i);
        nc.insert(format!("T_{i}_prime"), tp);
    }
    nc.insert("LR", nc.points_where(|c| c[0] == -level(c) && c[1] == -level(c)));
    nc.insert("LF", nc.points_where(|c| c[0] == level(c) && c[1] == -level(c)));
    nc.insert("RF", nc.points_where(|c| c[0] == level(c) && c[1] == level(c)));
    nc.insert("RR", nc.points_where(|c| c[0] == -level(c) && c[1] == level(c)));
    nc.insert("BL", nc.points_where(|c| c[2] == 0 && c[1] == -n));
    nc.insert("BF", nc.points_where(|c| c[2] == 0 && c[0] == n));
    nc.insert("BR", nc.points_where(|c| c[2] == 0 && c[1] == n));
    nc.insert("BB", nc.points_where(|c| c[2] == 0 && c[0] == -n));
    nc.insert("L", nc.points_where(|c| c[1] == -level(c)));
    nc.insert("F", nc.points_where(|c| c[0] == level(c)));
    nc.insert("R", nc.points_where(|c| c[1] == level(c)));
    nc.insert("B", nc.points_where(|c| c[0] == -level(c)));
}

fn c3() -> CuSpec {
    CuSpec::new(3, 3).expect("c_3 in Z^3")
}

/// The hollow digital pyramid `P_n ⊂ Z^3` with `c_3` adjacency. Vertices are
/// ordered by level from the apex down.
pub fn pyramid(n: i64) -> Result<NamedComplex> {
    check_height(n)?;
    let points = (0..=n).flat_map(|i| ring(i, n - i));
    let mut nc = NamedComplex::new(DigitalImage::from_points(pts(points), c3())?);
    name_pyramid_parts(&mut nc, n);
    let bd = nc.image.c1_boundary()?;
    nc.insert("Bd", bd);
    Ok(nc)
}

/// The solid digital pyramid `Q_n = ⋃ W_i` with `c_3` adjacency.
pub fn solid_pyramid(n: i64) -> Result<NamedComplex> {
    check_height(n)?;
    let points = (0..=n).flat_map(|i| square(i, n - i));
    let mut nc = NamedComplex::new(DigitalImage::from_points(pts(points), c3())?);
    name_pyramid_parts(&mut nc, n);
    for i in 0..=n {
        let w = nc.points_where(|c| c[2] == n - i);
        nc.insert(format!("W_{i}"), w);
    }
    let bd = nc.image.c1_boundary()?;
    nc.insert("Bd", bd);
    Ok(nc)
}

fn mirrored(n: i64, level: impl Fn(i64, i64) -> Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let upper = (0..=n).flat_map(|i| level(i, n - i));
    let lower = (0..n).rev().flat_map(|i| level(i, -(n - i)));
    upper.chain(lower).collect()
}

fn name_bipyramid_parts(nc: &mut NamedComplex, n: i64) -> Result<()> {
    nc.insert("U", nc.points_where(|c| c == [0, 0, n]));
    nc.insert("L", nc.points_where(|c| c == [0, 0, -n]));
    nc.insert("upper", nc.points_where(|c| c[2] >= 0));
    nc.insert("lower", nc.points_where(|c| c[2] <= 0));
    let equator = nc.points_where(|c| c[2] == 0 && c[0].abs().max(c[1].abs()) == n);
    nc.insert(format!("T_{n}"), equator);
    let bd = nc.image.c1_boundary()?;
    nc.insert("Bd", bd);
    Ok(())
}

/// `H_n = P_n ∪ P_n'`, two hollow pyramids glued along `T_n`.
pub fn bipyramid(n: i64) -> Result<NamedComplex> {
    check_height(n)?;
    let image = DigitalImage::from_points(pts(mirrored(n, ring)), c3())?;
    let mut nc = NamedComplex::new(image);
    name_bipyramid_parts(&mut nc, n)?;
    Ok(nc)
}

/// `K_n = Q_n ∪ Q_n'`, two solid pyramids glued along `W_n`.
pub fn solid_bipyramid(n: i64) -> Result<NamedComplex> {
    check_height(n)?;
    let image = DigitalImage::from_points(pts(mirrored(n, square)), c3())?;
    let mut nc = NamedComplex::new(image);
    name_bipyramid_parts(&mut nc, n)?;
    let w = nc.points_where(|c| c[2] == 0);
    nc.insert(format!("W_{n}"), w);
    Ok(nc)
}

/// No closed neighborhood covers the whole image.
pub fn satisfies_not_small(image: &DigitalImage) -> bool {
    (0..image.len()).all(|x| image.degree(x) + 1 != image.len())
}
