//! Instance checks of the freezing, cold, and limiting theorems for cones,
//! suspensions, boxes, and the pyramid family. Each row is decided exactly by
//! the verifier; witnesses are re-checked through [`Mapping`].

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{
    bipyramid, box_image, cone, interval, pyramid, satisfies_not_small, simple_closed_curve, solid_bipyramid,
    solid_pyramid, suspension, NamedComplex,
};
use crate::error::{Error, Result};
use crate::graph::{DigitalImage, Vertex, VertexId, VertexSet};
use crate::lattice::LatticePoint;
use crate::maps::{random_continuous_map, Mapping};
use crate::verifier::{MapCount, Pruning, Verdict, VerificationReport, Verifier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowOutcome {
    pub id: u8,
    pub title: &'static str,
    pub status: RowStatus,
    pub checks: usize,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_ms: u64,
    pub nodes_expanded: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Largest pyramid height checked (1 or 2).
    pub scale: u8,
    pub verifier: Verifier,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { scale: 2, verifier: Verifier::default(), seed: 0 }
    }
}

pub const ROWS: [(u8, &str); 13] = [
    (1, "cone: base is a minimal freezing set"),
    (2, "suspension: freezing sets transfer with both poles"),
    (3, "suspension: both poles lie in every freezing set"),
    (4, "cone and suspension diameter at most 2"),
    (5, "dominating set bound: displacement <= m + 2"),
    (6, "pyramid P_n: T_n is minimal freezing and necessary"),
    (7, "solid pyramid Q_n: {U} + W_n is minimal freezing"),
    (8, "bipyramid H_n: {U,L} + T_n is freezing"),
    (9, "solid bipyramid K_n: {U,L} + T_n is minimal freezing"),
    (10, "boxes: corners and boundary freeze"),
    (11, "cones and suspensions: cold and (1,1)-limiting sets"),
    (12, "verdicts agree with brute-force enumeration"),
    (13, "freezing verdicts are invariant under symmetries"),
];

/// Accumulates checks for one row.
struct Row {
    checks: usize,
    failures: Vec<String>,
    unknown: Vec<String>,
    nodes: u64,
    notes: Vec<String>,
}

impl Row {
    fn new() -> Self {
        Row { checks: 0, failures: Vec::new(), unknown: Vec::new(), nodes: 0, notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn within(&mut self, started: Instant, limit_ms: u64, what: impl FnOnce() -> String) {
        let ms = started.elapsed().as_millis() as u64;
        self.expect(ms < limit_ms, || format!("{} took {ms} ms (limit {limit_ms} ms)", what()));
    }

    /// Records a report's verdict against the expected one.
    fn verdict(&mut self, report: &VerificationReport, want: Verdict, what: impl FnOnce() -> String) {
        self.nodes += report.nodes_expanded;
        self.checks += 1;
        match report.verdict {
            Verdict::Unknown => self.unknown.push(format!("{} (budget exhausted)", what())),
            v if v == want => {}
            v => self.failures.push(format!("{}: expected {want:?}, got {v:?}", what())),
        }
    }

    /// Two reports that must agree, as for a set and its image under a symmetry.
    fn agree(&mut self, a: &VerificationReport, b: &VerificationReport, what: impl FnOnce() -> String) {
        self.nodes += a.nodes_expanded + b.nodes_expanded;
        self.checks += 1;
        if a.verdict == Verdict::Unknown || b.verdict == Verdict::Unknown {
            self.unknown.push(format!("{} (budget exhausted)", what()));
        } else if a.verdict != b.verdict {
            self.failures.push(format!("{}: {:?} vs {:?}", what(), a.verdict, b.verdict));
        }
    }

    fn error(&mut self, e: Error, what: &str) {
        self.checks += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    fn finish(self, id: u8, started: Instant, limit_ms: u64) -> RowOutcome {
        let elapsed_ms = started.elapsed().as_millis() as u64;
        let title = ROWS[id as usize - 1].1;
        let mut failures = self.failures;
        if elapsed_ms >= limit_ms {
            failures.push(format!("row took {elapsed_ms} ms (limit {limit_ms} ms)"));
        }
        let (status, detail) = if !failures.is_empty() {
            (RowStatus::Fail, summarize(&failures))
        } else if !self.unknown.is_empty() {
            (RowStatus::Unknown, summarize(&self.unknown))
        } else {
            (RowStatus::Pass, self.notes.join("; "))
        };
        RowOutcome { id, title, status, checks: self.checks, detail, elapsed_ms, limit_ms, nodes_expanded: self.nodes }
    }
}

fn summarize(items: &[String]) -> String {
    const SHOWN: usize = 3;
    let mut text = items[..items.len().min(SHOWN)].join("; ");
    if items.len() > SHOWN {
        text.push_str(&format!("; and {} more", items.len() - SHOWN));
    }
    text
}

/// Checks that a failing freezing report carries a continuous, non-identity
/// map fixing `subset`.
fn freezing_witness_ok(image: &DigitalImage, subset: &VertexSet, report: &VerificationReport) -> bool {
    match report.witness_map(image) {
        Some(Ok(g)) => {
            g.is_continuous() && !g.is_identity() && g.fixed_points().is_ok_and(|fix| subset.is_subset(&fix))
        }
        _ => false,
    }
}

fn point(nc: &NamedComplex, c: [i64; 3]) -> Result<VertexId> {
    nc.image
        .find_point(&LatticePoint::from(c))
        .ok_or_else(|| Error::InvalidParameter(format!("no vertex at {c:?}")))
}

fn cycles() -> impl Iterator<Item = (usize, NamedComplex)> {
    (4..=8).map(|m| (m, simple_closed_curve(m).expect("m >= 4")))
}

fn heights(cfg: &SuiteConfig) -> impl Iterator<Item = i64> {
    1..=cfg.scale.max(1) as i64
}

pub fn run_row(id: u8, cfg: &SuiteConfig) -> RowOutcome {
    let started = Instant::now();
    let mut row = Row::new();
    let limit_ms = match id {
        3 | 4 => 1_000,
        2 | 11 => 5_000,
        1 | 5 => 10_000,
        6 | 7 => 120_000,
        8 => 240_000,
        9 => 10_000 + cfg.verifier.budget.max_millis,
        10 => 30_000,
        12 | 13 => 60_000,
        _ => 0,
    };
    let result = match id {
        1 => cone_freezing(cfg, &mut row),
        2 => suspension_transfer(cfg, &mut row),
        3 => poles_necessary(cfg, &mut row),
        4 => diameters(&mut row),
        5 => dominating_bound(cfg, &mut row),
        6 => pyramid_row(cfg, &mut row),
        7 => solid_pyramid_row(cfg, &mut row),
        8 => bipyramid_row(cfg, &mut row),
        9 => solid_bipyramid_row(cfg, &mut row),
        10 => box_row(cfg, &mut row),
        11 => cold_limiting_row(cfg, &mut row),
        12 => oracle_row(cfg, &mut row),
        13 => invariance_row(cfg, &mut row),
        _ => Err(Error::InvalidParameter(format!("no suite row {id}"))),
    };
    if let Err(e) = result {
        row.error(e, "row aborted");
    }
    row.finish(id, started, limit_ms)
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<RowOutcome> {
    ROWS.iter().map(|&(id, _)| run_row(id, cfg)).collect()
}

fn cone_bases() -> Vec<(String, DigitalImage)> {
    let mut bases: Vec<(String, DigitalImage)> = cycles().map(|(m, c)| (format!("C{m}"), c.image)).collect();
    bases.push(("box[2,2] c1".into(), box_image(&[2, 2], 1).expect("valid box").image));
    bases
}

fn cone_freezing(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for (name, base) in cone_bases() {
        let t = Instant::now();
        row.expect(satisfies_not_small(&base), || format!("{name} violates the not-small condition"));
        let cx = cone(&base)?;
        let xb = cx.require("X_base")?;
        let r = v.is_freezing(&cx.image, xb)?;
        row.verdict(&r, Verdict::Holds, || format!("C({name}): X_base freezing"));
        for x in xb {
            let a = xb.without(x);
            let r = v.is_freezing(&cx.image, &a)?;
            row.verdict(&r, Verdict::Fails, || format!("C({name}): X_base - {x} not freezing"));
            if r.fails() {
                row.expect(freezing_witness_ok(&cx.image, &a, &r), || format!("C({name}): bad witness for {x}"));
            }
            let u = cx.vertex("U")?;
            let shown = Mapping::identity_except(&cx.image, &[(x, u)])?;
            row.expect(shown.is_continuous(), || format!("C({name}): x{x} -> U is not continuous"));
        }
        row.within(t, 1_000, || format!("C({name})"));
    }
    row.notes.push("bases C4..C8 and box[2,2] c1".into());
    Ok(())
}

fn suspension_transfer(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    let base = interval(0, 3)?;
    let sx = suspension(&base.image)?;
    let poles = sx.union_of(&["U", "L"])?;
    let ends = base.require("corners")?.clone();
    let r = v.is_minimal_freezing(&base.image, &ends)?;
    row.verdict(&r, Verdict::Holds, || "{0,3} minimal freezing for [0,3]".into());
    let r = v.is_minimal_freezing(&sx.image, &ends.union(&poles))?;
    row.verdict(&r, Verdict::Holds, || "{0,3,U,L} minimal freezing for S[0,3]".into());
    let lone: VertexSet = [0].into_iter().collect();
    let r = v.is_freezing(&base.image, &lone)?;
    row.verdict(&r, Verdict::Fails, || "{0} not freezing for [0,3]".into());
    let b = lone.union(&poles);
    let r = v.is_freezing(&sx.image, &b)?;
    row.verdict(&r, Verdict::Fails, || "{0,U,L} not freezing for S[0,3]".into());
    if r.fails() {
        row.expect(freezing_witness_ok(&sx.image, &b, &r), || "bad witness for {0,U,L}".into());
    }
    Ok(())
}

fn poles_necessary(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for (m, c) in cycles() {
        let sx = suspension(&c.image)?;
        let (u, l) = (sx.vertex("U")?, sx.vertex("L")?);
        for (pole, other) in [(u, l), (l, u)] {
            let rest = sx.image.vertex_ids().without(pole);
            let swap = Mapping::identity_except(&sx.image, &[(pole, other)])?;
            row.expect(swap.is_continuous(), || format!("S(C{m}): pole {pole} -> {other} not continuous"));
            row.expect(
                swap.fixed_points().is_ok_and(|f| f == rest),
                || format!("S(C{m}): pole map fixes the wrong set"),
            );
            let r = v.is_freezing(&sx.image, &rest)?;
            row.verdict(&r, Verdict::Fails, || format!("S(C{m}) minus pole {pole} not freezing"));
        }
    }
    Ok(())
}

fn diameter_bases() -> Result<Vec<(String, DigitalImage)>> {
    let mut out: Vec<(String, DigitalImage)> = Vec::new();
    for m in 4..=12 {
        out.push((format!("C{m}"), simple_closed_curve(m)?.image));
    }
    for b in 0..=11 {
        out.push((format!("[0,{b}]"), interval(0, b)?.image));
    }
    for (ext, u) in [
        (vec![1, 1], 1),
        (vec![1, 1], 2),
        (vec![2, 2], 1),
        (vec![2, 2], 2),
        (vec![1, 5], 1),
        (vec![2, 3], 1),
        (vec![2, 3], 2),
        (vec![1, 1, 1], 1),
        (vec![1, 1, 1], 3),
    ] {
        out.push((format!("box{ext:?} c{u}"), box_image(&ext, u)?.image));
    }
    out.push(("P1".into(), pyramid(1)?.image));
    out.push(("Q1".into(), solid_pyramid(1)?.image));
    out.push(("H1".into(), bipyramid(1)?.image));
    out.push(("K1".into(), solid_bipyramid(1)?.image));
    out.push(("two points".into(), DigitalImage::explicit(vec![Vertex::default(); 2], [], None)?));
    Ok(out)
}

fn diameters(row: &mut Row) -> Result<()> {
    let bases = diameter_bases()?;
    for (name, base) in &bases {
        for (kind, nc) in [("C", cone(base)?), ("S", suspension(base)?)] {
            let d = nc.image.diameter()?;
            row.expect(d <= 2, || format!("diam {kind}({name}) = {d}"));
        }
    }
    row.notes.push(format!("{} bases", bases.len()));
    Ok(())
}

fn dominating_bound(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let images = [
        ("C8", simple_closed_curve(8)?.image),
        ("box[2,2] c1", box_image(&[2, 2], 1)?.image),
        ("C(C6)", cone(&simple_closed_curve(6)?.image)?.image),
    ];
    let mut pairs = 0usize;
    for (name, img) in &images {
        let n = img.len();
        let dist = img.distance_matrix();
        let dominating: Vec<Vec<VertexId>> = (1u32..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|d| img.is_dominating(&d.iter().copied().collect()))
            .collect();
        for k in 0..200u64 {
            let f = random_continuous_map(img, &VertexSet::new(), cfg.seed.wrapping_add(k))?;
            row.expect(f.is_continuous(), || format!("{name}: generated map {k} not continuous"));
            let disp: Vec<usize> = (0..n).map(|x| dist[x][f.apply(x)].expect("connected")).collect();
            let whole = *disp.iter().max().unwrap_or(&0);
            for d in &dominating {
                let on_d = d.iter().map(|&x| disp[x]).max().unwrap_or(0);
                pairs += 1;
                if whole > on_d + 2 {
                    row.expect(false, || format!("{name}: map {k}, D = {d:?}: {whole} > {on_d} + 2"));
                }
            }
        }
    }
    row.checks += pairs;
    row.notes.push(format!("{pairs} (map, dominating set) pairs"));
    Ok(())
}

fn pyramid_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for n in heights(cfg) {
        let t = Instant::now();
        let p = pyramid(n)?;
        let tn = p.require(&format!("T_{n}"))?;
        let r = v.is_minimal_freezing(&p.image, tn)?;
        row.verdict(&r, Verdict::Holds, || format!("P{n}: T_{n} minimal freezing"));
        for x in tn {
            let rest = p.image.vertex_ids().without(x);
            let r = v.is_freezing(&p.image, &rest)?;
            row.verdict(&r, Verdict::Fails, || format!("P{n}: all but {x} not freezing"));
            if r.fails() {
                row.expect(freezing_witness_ok(&p.image, &rest, &r), || format!("P{n}: bad witness at {x}"));
            }
        }
        // the explicit corner and edge maps
        let corner = point(&p, [n, -n, 0])?;
        let inward = point(&p, [n - 1, -n + 1, 1])?;
        let f = Mapping::identity_except(&p.image, &[(corner, inward)])?;
        row.expect(f.is_continuous(), || format!("P{n}: corner map not continuous"));
        for z in (-n + 1)..n {
            let x = point(&p, [n, z, 0])?;
            let y = point(&p, [n - 1, z.clamp(-(n - 1), n - 1), 1])?;
            let f = Mapping::identity_except(&p.image, &[(x, y)])?;
            row.expect(f.is_continuous(), || format!("P{n}: edge map at z={z} not continuous"));
        }
        // vertical projection onto the square with c_2 sends T_n onto Bd
        let sq = box_image(&[2 * n, 2 * n], 2)?;
        let proj = Mapping::from_fn(&p.image, &sq.image, |w| {
            let c = p.image.coords(w).expect("coordinate-backed").coords();
            sq.image.find_point(&LatticePoint::from([c[0] + n, c[1] + n])).expect("inside square")
        })?;
        row.expect(proj.is_isomorphism(), || format!("P{n}: projection is not an isomorphism"));
        row.expect(&proj.push_forward(tn) == sq.require("Bd")?, || format!("P{n}: F(T_n) != Bd"));
        if n == 2 {
            row.within(t, 60_000, || "P2".into());
        }
    }
    Ok(())
}

fn solid_pyramid_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for n in heights(cfg) {
        let t = Instant::now();
        let q = solid_pyramid(n)?;
        let wn = q.require(&format!("W_{n}"))?.clone();
        let u = q.vertex("U")?;
        let a = wn.with(u);
        let r = v.is_minimal_freezing(&q.image, &a)?;
        row.verdict(&r, Verdict::Holds, || format!("Q{n}: {{U}} + W_{n} minimal freezing"));
        for y in a.iter() {
            let rest = q.image.vertex_ids().without(y);
            let r = v.is_freezing(&q.image, &rest)?;
            row.verdict(&r, Verdict::Fails, || format!("Q{n}: all but {y} not freezing"));
            if r.fails() {
                row.expect(freezing_witness_ok(&q.image, &rest, &r), || format!("Q{n}: bad witness at {y}"));
            }
        }
        // explicit single-point moves, one per class
        let below_u = point(&q, [0, 0, n - 1])?;
        let mut moves = vec![("U", u, below_u)];
        let inner = n - 1;
        for a in -inner..=inner {
            for b in -inner..=inner {
                moves.push(("interior", point(&q, [a, b, 0])?, point(&q, [a, b, 1])?));
            }
        }
        for s in -inner..=inner {
            moves.push(("BB", point(&q, [-n, s, 0])?, point(&q, [-inner, s, 1])?));
            moves.push(("BF", point(&q, [n, s, 0])?, point(&q, [inner, s, 1])?));
            moves.push(("BL", point(&q, [s, -n, 0])?, point(&q, [s, -inner, 1])?));
            moves.push(("BR", point(&q, [s, n, 0])?, point(&q, [s, inner, 1])?));
        }
        for (sa, sb) in [(-1, -1), (1, -1), (1, 1), (-1, 1)] {
            moves.push(("corner", point(&q, [sa * n, sb * n, 0])?, point(&q, [sa * inner, sb * inner, 1])?));
        }
        for (class, x, y) in moves {
            let f = Mapping::identity_except(&q.image, &[(x, y)])?;
            row.expect(f.is_continuous(), || format!("Q{n}: {class} move at {x} not continuous"));
        }
        if n == 2 {
            row.within(t, 60_000, || "Q2".into());
        }
    }
    Ok(())
}

fn bipyramid_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for n in heights(cfg) {
        let t = Instant::now();
        let h = bipyramid(n)?;
        let a = h.union_of(&["U", "L", &format!("T_{n}")])?;
        let r = v.is_freezing(&h.image, &a)?;
        row.verdict(&r, Verdict::Holds, || format!("H{n}: {{U,L}} + T_{n} freezing"));
        if n == 2 {
            row.within(t, 120_000, || "H2".into());
        }
    }
    Ok(())
}

fn solid_bipyramid_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for n in heights(cfg) {
        let t = Instant::now();
        let k = solid_bipyramid(n)?;
        let a = k.union_of(&["U", "L", &format!("T_{n}")])?;
        let r = v.is_minimal_freezing(&k.image, &a)?;
        row.verdict(&r, Verdict::Holds, || format!("K{n}: {{U,L}} + T_{n} minimal freezing"));
        row.notes.push(format!("K{n}: {} nodes, {} ms", r.nodes_expanded, r.elapsed_ms));
        if n == 1 {
            row.within(t, 10_000, || "K1".into());
        }
    }
    Ok(())
}

fn box_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for ext in [vec![2, 2], vec![2, 2, 2]] {
        let b = box_image(&ext, 1)?;
        let r = v.is_freezing(&b.image, b.require("corners")?)?;
        row.verdict(&r, Verdict::Holds, || format!("corners freeze box{ext:?} c1"));
    }
    let b = box_image(&[2, 2], 1)?;
    let r = v.is_minimal_freezing(&b.image, b.require("corners")?)?;
    row.verdict(&r, Verdict::Holds, || "corners minimal for box[2,2] c1".into());
    let b2 = box_image(&[2, 2], 2)?;
    let r = v.is_minimal_freezing(&b2.image, b2.require("Bd")?)?;
    row.verdict(&r, Verdict::Holds, || "Bd minimal freezing for box[2,2] c2".into());
    Ok(())
}

fn cold_limiting_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    for (m, c) in cycles() {
        let cx = cone(&c.image)?;
        let u = cx.vertex("U")?;
        let xb = cx.require("X_base")?;
        // every continuous map fixing the base fixes U
        let mut moved = 0u64;
        let count = v.for_each_continuous_self_map(&cx.image, xb, 1_000_000, |a| {
            if a[u] != u {
                moved += 1;
            }
        })?;
        row.expect(count == MapCount::Exact(1) && moved == 0, || format!("C(C{m}): maps fixing X_base: {count:?}, {moved} move U"));
        // cold sets of the base: no continuous map of CX fixing one moves U
        for mask in 1u32..1 << m {
            let y: VertexSet = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let r = v.is_s_cold(&c.image, &y, 1)?;
            if r.verdict != Verdict::Holds {
                continue;
            }
            let mut moved = 0u64;
            v.for_each_continuous_self_map(&cx.image, &y, u64::MAX, |a| {
                if a[u] != u {
                    moved += 1;
                }
            })?;
            row.expect(moved == 0, || format!("C(C{m}): {moved} maps fixing cold set {y:?} move U"));
        }
        // U is never needed in a minimal (1,1)-limiting set of CX
        for mask in 0u32..1 << m {
            let a: VertexSet = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let with_u = v.is_limiting(&cx.image, &a.with(u), 1, 1)?;
            if with_u.holds() {
                let without = v.is_limiting(&cx.image, &a, 1, 1)?;
                row.verdict(&without, Verdict::Holds, || format!("C(C{m}): {a:?} + U limiting but {a:?} not"));
            }
        }
        // SX minus a pole is not (1,1)-limiting; the witness moves the pole by 2
        let sx = suspension(&c.image)?;
        for pole in ["U", "L"] {
            let p = sx.vertex(pole)?;
            let rest = sx.image.vertex_ids().without(p);
            let r = v.is_limiting(&sx.image, &rest, 1, 1)?;
            row.verdict(&r, Verdict::Fails, || format!("S(C{m}) minus {pole} not (1,1)-limiting"));
            if let Some(Ok(g)) = r.witness_map(&sx.image) {
                row.expect(
                    g.is_continuous()
                        && g.max_displacement(&rest).is_ok_and(|d| d <= 1)
                        && g.max_displacement(&sx.image.vertex_ids()).is_ok_and(|d| d == 2),
                    || format!("S(C{m}) minus {pole}: witness displacement is not exactly 2"),
                );
            }
        }
    }
    Ok(())
}

/// A verdict query on a small image, checked against enumeration.
struct OracleCase {
    image: usize,
    label: String,
    subset: VertexSet,
    /// Displacement allowed on the subset and threshold on the whole image.
    radius: usize,
    threshold: usize,
}

fn oracle_images() -> Result<Vec<(String, NamedComplex)>> {
    let mut out = Vec::new();
    for (m, c) in cycles() {
        out.push((format!("C(C{m})"), cone(&c.image)?));
        out.push((format!("S(C{m})"), suspension(&c.image)?));
    }
    out.push(("C(box[2,2])".into(), cone(&box_image(&[2, 2], 1)?.image)?));
    let i03 = interval(0, 3)?;
    out.push(("[0,3]".into(), i03.clone()));
    out.push(("S[0,3]".into(), suspension(&i03.image)?));
    out.push(("P1".into(), pyramid(1)?));
    out.push(("Q1".into(), solid_pyramid(1)?));
    out.push(("H1".into(), bipyramid(1)?));
    out.push(("K1".into(), solid_bipyramid(1)?));
    out.push(("box[2,2] c1".into(), box_image(&[2, 2], 1)?));
    out.push(("box[2,2] c2".into(), box_image(&[2, 2], 2)?));
    Ok(out)
}

fn oracle_cases(images: &[(String, NamedComplex)]) -> Result<Vec<OracleCase>> {
    let mut cases = Vec::new();
    let mut add = |image: usize, label: String, subset: VertexSet, radius: usize, threshold: usize| {
        cases.push(OracleCase { image, label, subset, radius, threshold });
    };
    for (i, (name, nc)) in images.iter().enumerate() {
        let all = nc.image.vertex_ids();
        let freezing_and_drops = |set: &VertexSet, add: &mut dyn FnMut(usize, String, VertexSet, usize, usize)| {
            add(i, format!("{name}: freezing {set:?}"), set.clone(), 0, 0);
            for x in set {
                add(i, format!("{name}: freezing {set:?} - {x}"), set.without(x), 0, 0);
            }
        };
        match name.as_str() {
            n if n.starts_with("C(") => {
                let xb = nc.require("X_base")?.clone();
                let u = nc.vertex("U")?;
                freezing_and_drops(&xb, &mut add);
                add(i, format!("{name}: 1-cold X_base"), xb.clone(), 0, 1);
                add(i, format!("{name}: (0,2)-limiting empty"), VertexSet::new(), 0, 2);
                add(i, format!("{name}: (1,1)-limiting X_base + U"), xb.with(u), 1, 1);
                add(i, format!("{name}: (1,1)-limiting X_base"), xb, 1, 1);
            }
            n if n.starts_with("S(") || n == "S[0,3]" => {
                let (u, l) = (nc.vertex("U")?, nc.vertex("L")?);
                add(i, format!("{name}: freezing all - U"), all.without(u), 0, 0);
                add(i, format!("{name}: freezing all - L"), all.without(l), 0, 0);
                add(i, format!("{name}: (1,1)-limiting all - U"), all.without(u), 1, 1);
                add(i, format!("{name}: 0-cold X_base"), nc.require("X_base")?.clone(), 0, 0);
                if n == "S[0,3]" {
                    let b: VertexSet = [0, 3, u, l].into_iter().collect();
                    freezing_and_drops(&b, &mut add);
                    add(i, format!("{name}: freezing {{0,U,L}}"), [0, u, l].into_iter().collect(), 0, 0);
                }
            }
            "[0,3]" => {
                add(i, format!("{name}: freezing {{0,3}}"), [0, 3].into_iter().collect(), 0, 0);
                add(i, format!("{name}: freezing {{0}}"), [0].into_iter().collect(), 0, 0);
            }
            "P1" => freezing_and_drops(nc.require("T_1")?, &mut add),
            "Q1" => freezing_and_drops(&nc.union_of(&["U", "W_1"])?, &mut add),
            "H1" => freezing_and_drops(&nc.union_of(&["U", "L", "T_1"])?, &mut add),
            "K1" => freezing_and_drops(&nc.union_of(&["U", "L", "T_1"])?, &mut add),
            _ => {
                freezing_and_drops(nc.require("corners")?, &mut add);
                freezing_and_drops(nc.require("Bd")?, &mut add);
            }
        }
    }
    Ok(cases)
}

fn pruning_configs() -> [(&'static str, Pruning); 5] {
    let all = Pruning::default();
    [
        ("all rules", all),
        ("no rules", Pruning::none()),
        ("without unique paths", Pruning { unique_paths: false, ..all }),
        ("without identity-last", Pruning { identity_last: false, ..all }),
        ("without pulling", Pruning { pulling: false, ..all }),
    ]
}

fn oracle_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let images = oracle_images()?;
    let cases = oracle_cases(&images)?;
    let enumerator = Verifier::default().with_pruning(Pruning::none());
    // unrestricted enumeration, shared by every query with a positive radius
    let mut unrestricted: BTreeMap<usize, Vec<Vec<u8>>> = BTreeMap::new();
    let mut holding = 0usize;
    for case in &cases {
        let (_, nc) = &images[case.image];
        let img = &nc.image;
        if img.len() > 12 {
            row.expect(false, || format!("{}: image has {} vertices", case.label, img.len()));
            continue;
        }
        let dist = img.distance_matrix();
        let profile = |a: &[VertexId]| -> Vec<u8> { (0..a.len()).map(|x| dist[x][a[x]].expect("connected") as u8).collect() };
        let violates = |p: &[u8]| {
            case.subset.iter().all(|x| (p[x] as usize) <= case.radius) && p.iter().any(|&d| d as usize > case.threshold)
        };
        let expected_holds = if case.radius == 0 {
            let mut any = false;
            enumerator.for_each_continuous_self_map(img, &case.subset, u64::MAX, |a| any |= violates(&profile(a)))?;
            !any
        } else {
            let maps = match unrestricted.get(&case.image) {
                Some(m) => m,
                None => {
                    let mut all = Vec::new();
                    enumerator.for_each_continuous_self_map(img, &VertexSet::new(), u64::MAX, |a| all.push(profile(a)))?;
                    unrestricted.entry(case.image).or_insert(all)
                }
            };
            !maps.iter().any(|p| violates(p))
        };
        holding += expected_holds as usize;
        for (cfg_name, pruning) in pruning_configs() {
            let v = Verifier { budget: cfg.verifier.budget, pruning };
            let r = v.is_limiting(img, &case.subset, case.radius, case.threshold)?;
            let want = if expected_holds { Verdict::Holds } else { Verdict::Fails };
            row.verdict(&r, want, || format!("{} [{cfg_name}]", case.label));
        }
    }
    row.notes.push(format!(
        "{} queries ({holding} hold, {} fail) x 5 pruning configurations",
        cases.len(),
        cases.len() - holding
    ));
    Ok(())
}

/// The eight symmetries of the square acting on the first two coordinates
/// about `(center, center)`.
fn square_symmetries(nc: &NamedComplex, center: i64) -> Result<Vec<Mapping<'_>>> {
    let img = &nc.image;
    let mut out = Vec::new();
    for swap in [false, true] {
        for (sa, sb) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            let f = Mapping::from_fn(img, img, |v| {
                let mut c = img.coords(v).expect("coordinate-backed").coords().to_vec();
                let (a, b) = (c[0] - center, c[1] - center);
                let (a, b) = if swap { (b, a) } else { (a, b) };
                c[0] = sa * a + center;
                c[1] = sb * b + center;
                img.find_point(&LatticePoint::new(c)).expect("symmetry preserves the image")
            })?;
            out.push(f);
        }
    }
    Ok(out)
}

fn invariance_row(cfg: &SuiteConfig, row: &mut Row) -> Result<()> {
    let v = cfg.verifier;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let complexes = [
        ("box[2,2] c1", box_image(&[2, 2], 1)?, 1, vec!["corners", "Bd"]),
        ("box[2,2] c2", box_image(&[2, 2], 2)?, 1, vec!["corners", "Bd"]),
        ("P2", pyramid(2)?, 0, vec!["T_2", "T_1", "L", "F", "LR"]),
    ];
    for (name, nc, center, named) in &complexes {
        let syms = square_symmetries(nc, *center)?;
        row.expect(syms.len() == 8, || format!("{name}: {} symmetries", syms.len()));
        let mut subsets: Vec<VertexSet> = Vec::new();
        for n in named {
            let s = nc.require(n)?;
            subsets.push(s.clone());
            if let Some(x) = s.iter().choose(&mut rng) {
                subsets.push(s.without(x));
            }
        }
        let size = nc.image.len();
        for _ in 0..12 {
            let k = rng.random_range(1..=size);
            subsets.push((0..size).choose_multiple(&mut rng, k).into_iter().collect());
        }
        for f in &syms {
            row.expect(f.is_isomorphism(), || format!("{name}: symmetry is not an isomorphism"));
            for a in &subsets {
                let fa = f.push_forward(a);
                let before = v.is_freezing(&nc.image, a)?;
                let after = v.is_freezing(&nc.image, &fa)?;
                row.agree(&before, &after, || format!("{name}: freezing {a:?}"));
                let before = v.is_s_cold(&nc.image, a, 1)?;
                let after = v.is_s_cold(&nc.image, &fa, 1)?;
                row.agree(&before, &after, || format!("{name}: 1-cold {a:?}"));
            }
        }
    }
    Ok(())
}
