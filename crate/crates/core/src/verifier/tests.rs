use super::*;
use crate::constructions::{box_image, cone, interval, pyramid, simple_closed_curve, solid_bipyramid, solid_pyramid, suspension};
use crate::graph::Vertex;
use crate::lattice::LatticePoint;

fn set(v: &[VertexId]) -> VertexSet {
    v.iter().copied().collect()
}

/// Every function `X -> X`, filtered by the continuity check of the maps
/// module. Only for tiny images.
fn naive_continuous_maps(image: &DigitalImage, fixed: &VertexSet) -> Vec<Vec<VertexId>> {
    let n = image.len();
    let total = (n as u64).pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let a: Vec<VertexId> = (0..n)
            .map(|_| {
                let v = (c % n as u64) as usize;
                c /= n as u64;
                v
            })
            .collect();
        if fixed.iter().any(|x| a[x] != x) {
            continue;
        }
        if Mapping::self_map(image, a.clone()).unwrap().is_continuous() {
            out.push(a);
        }
    }
    out
}

fn tiny_images() -> Vec<DigitalImage> {
    vec![
        interval(0, 1).unwrap().image,
        interval(0, 3).unwrap().image,
        simple_closed_curve(4).unwrap().image,
        simple_closed_curve(5).unwrap().image,
        box_image(&[1, 1], 1).unwrap().image,
        box_image(&[1, 2], 2).unwrap().image,
        cone(&interval(0, 2).unwrap().image).unwrap().image,
        suspension(&interval(0, 1).unwrap().image).unwrap().image,
    ]
}

fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

#[test]
fn enumeration_examples() {
    let v = Verifier::default();
    let i01 = interval(0, 1).unwrap().image;
    assert_eq!(v.count_continuous_self_maps(&i01, &VertexSet::new(), 1000), Ok(MapCount::Exact(4)));
    let i02 = interval(0, 2).unwrap().image;
    assert_eq!(v.count_continuous_self_maps(&i02, &VertexSet::new(), 1000), Ok(MapCount::Exact(17)));
    assert_eq!(naive_continuous_maps(&i02, &VertexSet::new()).len(), 17);
    let p2 = pyramid(2).unwrap().image;
    assert_eq!(v.count_continuous_self_maps(&p2, &p2.vertex_ids(), 10), Ok(MapCount::Exact(1)));
    assert_eq!(v.count_continuous_self_maps(&i02, &VertexSet::new(), 16), Ok(MapCount::ExceedsCap));
    assert_eq!(v.count_continuous_self_maps(&i02, &VertexSet::new(), 17), Ok(MapCount::Exact(17)));
    let big = box_image(&[8, 8], 1).unwrap().image;
    assert_eq!(v.count_continuous_self_maps(&big, &VertexSet::new(), 1), Err(Error::TooLarge(81)));
}

#[test]
fn enumeration_matches_naive_oracle() {
    for image in tiny_images() {
        for fixed in all_subsets(image.len()) {
            let mut expected = naive_continuous_maps(&image, &fixed);
            expected.sort();
            for pruning in [Pruning::default(), Pruning::none()] {
                let mut got = Vec::new();
                Verifier::default()
                    .with_pruning(pruning)
                    .for_each_continuous_self_map(&image, &fixed, u64::MAX, |a| got.push(a.to_vec()))
                    .unwrap();
                got.sort();
                assert_eq!(got, expected, "fixed {fixed:?}, pruning {pruning:?}");
            }
        }
    }
}

#[test]
fn verdicts_match_naive_oracle_on_tiny_images() {
    let dist = |img: &DigitalImage| img.distance_matrix();
    for image in tiny_images() {
        let d = dist(&image);
        let all_maps = naive_continuous_maps(&image, &VertexSet::new());
        let disp = |a: &[VertexId], s: &VertexSet| s.iter().map(|x| d[x][a[x]].unwrap()).max().unwrap_or(0);
        let everything = image.vertex_ids();
        for subset in all_subsets(image.len()) {
            for pruning in [Pruning::default(), Pruning::none()] {
                let v = Verifier::default().with_pruning(pruning);
                for (m, n) in [(0, 0), (0, 1), (1, 1), (1, 2), (0, 2)] {
                    let expect_holds = all_maps.iter().all(|a| disp(a, &subset) > m || disp(a, &everything) <= n);
                    let r = v.is_limiting(&image, &subset, m, n).unwrap();
                    assert_eq!(r.holds(), expect_holds, "limiting({m},{n}) on {subset:?}");
                }
                let r = v.is_freezing(&image, &subset).unwrap();
                let expect = all_maps.iter().all(|a| disp(a, &subset) > 0 || disp(a, &everything) == 0);
                assert_eq!(r.holds(), expect);
            }
        }
    }
}

#[test]
fn cone_freezing_examples() {
    let v = Verifier::default();
    let cx = cone(&simple_closed_curve(8).unwrap().image).unwrap();
    let base = cx.set("X_base").unwrap();
    assert!(matches!(v.find_counterexample_freezing(&cx.image, base), Ok(Counterexample::NoneExists)));
    let Counterexample::Found(g) = v.find_counterexample_freezing(&cx.image, &base.without(0)).unwrap() else {
        panic!("expected a witness");
    };
    assert!(g.is_continuous() && !g.is_identity());
    assert!(base.without(0).is_subset(&g.fixed_points().unwrap()));
    let u = cx.vertex("U").unwrap();
    let explicit_map = Mapping::identity_except(&cx.image, &[(0, u)]).unwrap();
    assert!(explicit_map.is_continuous());
}

#[test]
fn box_corners_with_c2_are_not_freezing() {
    let b = box_image(&[2, 2], 2).unwrap();
    let r = Verifier::default().is_freezing(&b.image, b.set("corners").unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    let w = r.witness_map(&b.image).unwrap().unwrap();
    assert!(w.is_continuous() && !w.is_identity());
}

#[test]
fn pyramid_freezing_examples() {
    let v = Verifier::default();
    let p2 = pyramid(2).unwrap();
    assert!(v.is_freezing(&p2.image, p2.set("T_2").unwrap()).unwrap().holds());

    let q2 = solid_pyramid(2).unwrap();
    let a = q2.union_of(&["U", "W_2"]).unwrap();
    assert!(v.is_freezing(&q2.image, &a).unwrap().holds());

    let w2 = q2.set("W_2").unwrap();
    let r = v.is_freezing(&q2.image, w2).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    let g = r.witness_map(&q2.image).unwrap().unwrap();
    assert!(g.is_continuous() && w2.is_subset(&g.fixed_points().unwrap()) && !g.is_identity());
    let u = q2.vertex("U").unwrap();
    let below = q2.image.find_point(&LatticePoint::from([0, 0, 1])).unwrap();
    let explicit_map = Mapping::identity_except(&q2.image, &[(u, below)]).unwrap();
    assert!(explicit_map.is_continuous());
}

#[test]
fn cold_examples() {
    let v = Verifier::default();
    let c8 = simple_closed_curve(8).unwrap().image;
    for s in 0..3 {
        assert!(v.is_s_cold(&c8, &c8.vertex_ids(), s).unwrap().holds());
    }
    let cx = cone(&c8).unwrap();
    assert!(v.is_s_cold(&cx.image, cx.set("X_base").unwrap(), 1).unwrap().holds());

    let sx = suspension(&c8).unwrap();
    let r = v.is_s_cold(&sx.image, sx.set("X_base").unwrap(), 0).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    let (u, l) = (sx.vertex("U").unwrap(), sx.vertex("L").unwrap());
    let swap = Mapping::identity_except(&sx.image, &[(u, l), (l, u)]).unwrap();
    assert!(swap.is_continuous());
    assert_eq!(swap.max_displacement(&sx.image.vertex_ids()), Ok(2));
}

#[test]
fn limiting_examples() {
    let v = Verifier::default();
    let c8 = simple_closed_curve(8).unwrap().image;
    let cx = cone(&c8).unwrap();
    for m in 0..=2 {
        assert!(v.is_limiting(&cx.image, &VertexSet::new(), m, 2).unwrap().holds());
    }
    let sx = suspension(&c8).unwrap();
    let u = sx.vertex("U").unwrap();
    let r = v.is_limiting(&sx.image, &sx.image.vertex_ids().without(u), 1, 1).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    let g = r.witness_map(&sx.image).unwrap().unwrap();
    assert_eq!(g.max_displacement(&sx.image.vertex_ids()), Ok(2));
    for img in [&c8, &cx.image, &sx.image] {
        assert!(v.is_limiting(img, &img.vertex_ids(), 0, 0).unwrap().holds());
    }
}

#[test]
fn minimality_examples() {
    let v = Verifier::default();
    let p2 = pyramid(2).unwrap();
    assert!(v.is_minimal_freezing(&p2.image, p2.set("T_2").unwrap()).unwrap().holds());

    let k1 = solid_bipyramid(1).unwrap();
    let a = k1.union_of(&["U", "L", "T_1"]).unwrap();
    assert!(v.is_minimal_freezing(&k1.image, &a).unwrap().holds());

    let b = box_image(&[2, 2], 1).unwrap();
    let r = v.is_minimal_freezing(&b.image, b.set("Bd").unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    assert!(r.witness.is_none());
    let dropped = r.removable.unwrap();
    assert!(!b.set("corners").unwrap().contains(dropped));
}

#[test]
fn greedy_minimal_search_examples() {
    let v = Verifier::default();
    let p2 = pyramid(2).unwrap();
    let all = p2.image.vertex_ids();
    assert_eq!(v.search_minimal_freezing(&p2.image, Some(&all)), Ok(MinimalSearch::Found(p2.set("T_2").unwrap().clone())));

    let b = box_image(&[2, 2], 1).unwrap();
    assert_eq!(v.search_minimal_freezing(&b.image, None), Ok(MinimalSearch::Found(b.set("corners").unwrap().clone())));

    let edge = interval(0, 1).unwrap().image;
    assert_eq!(v.search_minimal_freezing(&edge, Some(&set(&[0, 1]))), Ok(MinimalSearch::Found(set(&[0, 1]))));
    assert_eq!(v.search_minimal_freezing(&edge, Some(&set(&[0]))), Err(Error::SeedNotFreezing));
}

#[test]
fn disconnected_images_are_rejected() {
    let two = DigitalImage::explicit(vec![Vertex::default(); 2], [], None).unwrap();
    let v = Verifier::default();
    assert_eq!(v.is_freezing(&two, &VertexSet::new()).unwrap_err(), Error::Disconnected);
    assert_eq!(v.is_s_cold(&two, &VertexSet::new(), 1).unwrap_err(), Error::Disconnected);
    assert_eq!(v.is_limiting(&two, &VertexSet::new(), 0, 0).unwrap_err(), Error::Disconnected);
    assert_eq!(v.is_minimal_freezing(&two, &VertexSet::new()).unwrap_err(), Error::Disconnected);
    assert!(v.is_freezing(&interval(0, 1).unwrap().image, &set(&[5])).is_err());
}

#[test]
fn starved_budget_yields_unknown() {
    let p2 = pyramid(2).unwrap();
    let v = Verifier::new(SearchBudget { max_nodes: 1, max_millis: 60_000 });
    let r = v.is_freezing(&p2.image, &VertexSet::new()).unwrap();
    // finding a witness for the empty set takes more than one node
    assert_ne!(r.verdict, Verdict::Holds);
    let r = v.is_freezing(&p2.image, p2.set("T_1").unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Unknown);
    assert!(r.witness.is_none());
}

#[test]
fn reports_are_deterministic() {
    let q2 = solid_pyramid(2).unwrap();
    let v = Verifier::default();
    let a = v.is_freezing(&q2.image, q2.set("W_2").unwrap()).unwrap();
    let b = v.is_freezing(&q2.image, q2.set("W_2").unwrap()).unwrap();
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.pruning_stats, b.pruning_stats);
}
