use dtfreeze::constructions::{
    bipyramid, box_image, cone, interval, pyramid, simple_closed_curve, solid_bipyramid, suspension,
};
use dtfreeze::maps::random_continuous_map;
use dtfreeze::{DigitalImage, LatticePoint, Mapping, Verdict, VertexSet, Verifier};
use proptest::prelude::*;

fn samples() -> Vec<DigitalImage> {
    vec![
        interval(0, 4).unwrap().image,
        simple_closed_curve(6).unwrap().image,
        box_image(&[2, 3], 1).unwrap().image,
        box_image(&[2, 2], 2).unwrap().image,
        cone(&simple_closed_curve(5).unwrap().image).unwrap().image,
        suspension(&interval(0, 3).unwrap().image).unwrap().image,
        pyramid(2).unwrap().image,
    ]
}

#[test]
fn shortest_path_metric_axioms() {
    for img in samples() {
        let d = img.distance_matrix();
        let n = img.len();
        for x in 0..n {
            assert_eq!(d[x][x], Some(0));
            for y in 0..n {
                let dxy = d[x][y].unwrap();
                assert_eq!(d[y][x], Some(dxy));
                assert_eq!(dxy == 1, img.are_adjacent(x, y));
                for (dxz, row_z) in d[x].iter().zip(&d) {
                    assert!(dxy <= dxz.unwrap() + row_z[y].unwrap());
                }
            }
        }
    }
}

#[test]
fn continuous_maps_do_not_stretch_distances() {
    for img in samples() {
        let d = img.distance_matrix();
        for seed in 0..30 {
            let f = random_continuous_map(&img, &VertexSet::new(), seed).unwrap();
            assert!(f.is_continuous());
            for x in 0..img.len() {
                for y in 0..img.len() {
                    assert!(d[f.apply(x)][f.apply(y)] <= d[x][y]);
                }
            }
        }
    }
}

#[test]
fn cone_and_suspension_keep_the_base_as_an_induced_subgraph() {
    for base in samples() {
        let n = base.len();
        let base_edges: Vec<_> = base.edges().collect();
        for nc in [cone(&base).unwrap(), suspension(&base).unwrap()] {
            let inner: Vec<_> = nc.image.edges().filter(|&(a, b)| a < n && b < n).collect();
            assert_eq!(inner, base_edges);
            for pole in ["U", "L"] {
                if let Ok(p) = nc.vertex(pole) {
                    assert_eq!(nc.image.neighbors(p), (0..n).collect::<Vec<_>>().as_slice());
                }
            }
        }
    }
}

// The pole swap U -> L fixes everything else, so no set missing U is 1-cold.
#[test]
fn suspension_poles_belong_to_every_cold_set() {
    let v = Verifier::default();
    for m in 4..=7 {
        let sx = suspension(&simple_closed_curve(m).unwrap().image).unwrap();
        let (u, l) = (sx.vertex("U").unwrap(), sx.vertex("L").unwrap());
        let swap = Mapping::identity_except(&sx.image, &[(u, l)]).unwrap();
        assert!(swap.is_continuous());
        assert_eq!(swap.max_displacement(&sx.image.vertex_ids()).unwrap(), 2);
        let rest = sx.image.vertex_ids().without(u);
        assert_eq!(v.is_s_cold(&sx.image, &rest, 1).unwrap().verdict, Verdict::Fails);
        assert_eq!(v.is_s_cold(&sx.image, &rest, 2).unwrap().verdict, Verdict::Holds);
        // the cone apex is not forced into cold sets
        let cx = cone(&simple_closed_curve(m).unwrap().image).unwrap();
        let xb = cx.require("X_base").unwrap();
        assert_eq!(v.is_s_cold(&cx.image, xb, 0).unwrap().verdict, Verdict::Holds);
    }
}

#[test]
fn bipyramid_mirror_swaps_poles() {
    for nc in [bipyramid(1).unwrap(), bipyramid(2).unwrap(), solid_bipyramid(1).unwrap()] {
        let img = &nc.image;
        let mirror = Mapping::from_fn(img, img, |v| {
            let mut c = img.coords(v).unwrap().coords().to_vec();
            c[2] = -c[2];
            img.find_point(&LatticePoint::new(c)).unwrap()
        })
        .unwrap();
        assert!(mirror.is_isomorphism());
        assert_eq!(mirror.apply(nc.vertex("U").unwrap()), nc.vertex("L").unwrap());
        assert_eq!(&mirror.push_forward(nc.require("upper").unwrap()), nc.require("lower").unwrap());
    }
}

#[test]
fn maps_fixing_a_freezing_set_are_the_identity() {
    let p = pyramid(2).unwrap();
    let t2 = p.require("T_2").unwrap();
    for seed in 0..50 {
        let f = random_continuous_map(&p.image, t2, seed).unwrap();
        assert!(f.is_identity());
    }
}

fn small_images() -> Vec<DigitalImage> {
    vec![
        simple_closed_curve(5).unwrap().image,
        box_image(&[2, 2], 1).unwrap().image,
        cone(&simple_closed_curve(4).unwrap().image).unwrap().image,
        suspension(&interval(0, 2).unwrap().image).unwrap().image,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn properties_are_monotone_in_the_subset(which in 0usize..4, mask in any::<u16>(), extra in any::<u16>()) {
        let img = &small_images()[which];
        let n = img.len();
        let a: VertexSet = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let b: VertexSet = a.union(&(0..n).filter(|&i| extra >> i & 1 == 1).collect());
        let v = Verifier::default();
        for (m, k) in [(0, 0), (0, 1), (1, 1), (1, 2)] {
            let small = v.is_limiting(img, &a, m, k).unwrap();
            let large = v.is_limiting(img, &b, m, k).unwrap();
            prop_assert!(!small.holds() || large.holds());
        }
    }

    #[test]
    fn limiting_implies_cold(which in 0usize..4, mask in any::<u16>()) {
        let img = &small_images()[which];
        let a: VertexSet = (0..img.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let v = Verifier::default();
        for (m, k) in [(1, 1), (1, 2), (2, 2)] {
            if v.is_limiting(img, &a, m, k).unwrap().holds() {
                prop_assert!(v.is_s_cold(img, &a, k).unwrap().holds());
            }
        }
        let freezing = v.is_freezing(img, &a).unwrap().holds();
        prop_assert_eq!(freezing, v.is_s_cold(img, &a, 0).unwrap().holds());
    }
}
