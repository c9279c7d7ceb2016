//! Lattice points of `Z^d` and the `c_u` adjacency family.
//!
//! Two distinct points are `c_u`-adjacent when every coordinate differs by at
//! most one and at most `u` coordinates differ at all. In `Z^2`, `c_1` is
//! 4-adjacency and `c_2` is 8-adjacency; in `Z^3` the three relations give
//! 6, 18 and 26 neighbors.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest coordinate magnitude accepted by image construction.
pub const MAX_COORDINATE: i64 = 1 << 30;

/// A point of `Z^d`. The dimension is owned by the image, not the point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        LatticePoint(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub(crate) fn check_magnitude(&self) -> Result<()> {
        match self.0.iter().find(|c| c.abs() > MAX_COORDINATE) {
            Some(&c) => Err(Error::CoordinateOverflow(c)),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl<const D: usize> From<[i64; D]> for LatticePoint {
    fn from(v: [i64; D]) -> Self {
        LatticePoint(v.to_vec())
    }
}

/// The `c_u` adjacency on `Z^d`, with `1 <= u <= d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CuSpec {
    u: usize,
    d: usize,
}

impl CuSpec {
    pub fn new(u: usize, d: usize) -> Result<Self> {
        if u == 0 || u > d {
            return Err(Error::InvalidParameter(format!(
                "c_u adjacency requires 1 <= u <= d, got u={u}, d={d}"
            )));
        }
        Ok(CuSpec { u, d })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn check(&self, p: &LatticePoint) -> Result<()> {
        if p.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: p.dim(),
            });
        }
        Ok(())
    }
}

/// Whether `p` and `q` are `c_u`-adjacent.
pub fn cu_adjacent(p: &LatticePoint, q: &LatticePoint, spec: CuSpec) -> Result<bool> {
    spec.check(p)?;
    spec.check(q)?;
    Ok(adjacent_unchecked(p.coords(), q.coords(), spec.u))
}

pub(crate) fn adjacent_unchecked(p: &[i64], q: &[i64], u: usize) -> bool {
    let mut differing = 0;
    for (a, b) in p.iter().zip(q) {
        match (a - b).abs() {
            0 => {}
            1 => differing += 1,
            _ => return false,
        }
    }
    differing >= 1 && differing <= u
}

/// The `i`-th coordinate of `p`, 1-based.
pub fn projection(p: &LatticePoint, i: usize) -> Result<i64> {
    if i == 0 || i > p.dim() {
        return Err(Error::IndexOutOfRange { index: i, dim: p.dim() });
    }
    Ok(p.0[i - 1])
}

/// Points of `points` with a `c_1`-neighbor in `Z^d` outside the set.
pub fn c1_boundary(points: &BTreeSet<LatticePoint>, d: usize) -> Result<BTreeSet<LatticePoint>> {
    let mut out = BTreeSet::new();
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        let mut probe = p.clone();
        let on_boundary = (0..d).any(|i| {
            [-1, 1].iter().any(|&step| {
                probe.0[i] += step;
                let outside = !points.contains(&probe);
                probe.0[i] -= step;
                outside
            })
        });
        if on_boundary {
            out.insert(p.clone());
        }
    }
    Ok(out)
}

/// All displacement vectors in `{-1,0,1}^d` that make a `c_u`-neighbor.
pub fn cu_offsets(spec: CuSpec) -> Vec<Vec<i64>> {
    let d = spec.d;
    let mut out = Vec::new();
    let total = 3usize.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..d)
            .map(|_| {
                let digit = (c % 3) as i64 - 1;
                c /= 3;
                digit
            })
            .collect();
        let nonzero = v.iter().filter(|&&x| x != 0).count();
        if nonzero >= 1 && nonzero <= spec.u {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    #[test]
    fn adjacency_examples() {
        let c1 = CuSpec::new(1, 2).unwrap();
        let c2 = CuSpec::new(2, 2).unwrap();
        assert!(!cu_adjacent(&p(&[0, 0]), &p(&[1, 1]), c1).unwrap());
        assert!(cu_adjacent(&p(&[0, 0]), &p(&[1, 1]), c2).unwrap());
        assert!(!cu_adjacent(&p(&[3]), &p(&[3]), CuSpec::new(1, 1).unwrap()).unwrap());
        assert!(!cu_adjacent(&p(&[0, 0, 0]), &p(&[0, 2, 0]), CuSpec::new(3, 3).unwrap()).unwrap());
    }

    #[test]
    fn adjacency_rejects_bad_input() {
        assert!(CuSpec::new(0, 2).is_err());
        assert!(CuSpec::new(3, 2).is_err());
        let c1 = CuSpec::new(1, 2).unwrap();
        assert_eq!(
            cu_adjacent(&p(&[0]), &p(&[1, 0]), c1),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn projection_examples() {
        assert_eq!(projection(&p(&[5, -2, 7]), 2), Ok(-2));
        assert_eq!(projection(&p(&[0]), 1), Ok(0));
        assert_eq!(projection(&p(&[-2, 2, 0]), 3), Ok(0));
        assert!(projection(&p(&[1, 2]), 0).is_err());
        assert!(projection(&p(&[1, 2]), 3).is_err());
    }

    #[test]
    fn neighbor_counts() {
        let counts: Vec<(usize, usize, usize)> = vec![(1, 1, 2), (1, 2, 4), (2, 2, 8), (1, 3, 6), (2, 3, 18), (3, 3, 26)];
        for (u, d, expect) in counts {
            assert_eq!(cu_offsets(CuSpec::new(u, d).unwrap()).len(), expect, "c_{u} in Z^{d}");
        }
    }

    fn cube(m: i64, d: usize) -> BTreeSet<LatticePoint> {
        let mut pts = vec![vec![]];
        for _ in 0..d {
            pts = pts
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..=m).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        pts.into_iter().map(LatticePoint::new).collect()
    }

    #[test]
    fn boundary_examples() {
        let sq = cube(2, 2);
        let bd = c1_boundary(&sq, 2).unwrap();
        assert_eq!(bd.len(), 8);
        assert!(!bd.contains(&p(&[1, 1])));

        let single: BTreeSet<_> = [p(&[0, 0])].into_iter().collect();
        assert_eq!(c1_boundary(&single, 2).unwrap(), single);

        let c = cube(2, 3);
        let bd3 = c1_boundary(&c, 3).unwrap();
        assert_eq!(bd3.len(), 26);
        assert!(!bd3.contains(&p(&[1, 1, 1])));

        assert!(c1_boundary(&BTreeSet::new(), 2).unwrap().is_empty());
    }

    fn point(d: usize) -> impl Strategy<Value = LatticePoint> {
        proptest::collection::vec(-3i64..=3, d).prop_map(LatticePoint::new)
    }

    proptest! {
        #[test]
        fn adjacency_is_symmetric_and_monotone(
            (a, b) in (1usize..=4).prop_flat_map(|d| (point(d), point(d)))
        ) {
            let d = a.dim();
            for u in 1..=d {
                let s = CuSpec::new(u, d).unwrap();
                let ab = cu_adjacent(&a, &b, s).unwrap();
                prop_assert_eq!(ab, cu_adjacent(&b, &a, s).unwrap());
                if u < d && ab {
                    prop_assert!(cu_adjacent(&a, &b, CuSpec::new(u + 1, d).unwrap()).unwrap());
                }
            }
        }

        #[test]
        fn boundary_is_subset(pts in proptest::collection::btree_set(point(2), 0..12)) {
            let bd = c1_boundary(&pts, 2).unwrap();
            prop_assert!(bd.is_subset(&pts));
        }
    }
}
