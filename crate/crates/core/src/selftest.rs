//! Self-test suite. Each criterion checks the library against an
//! independent computation: exhaustive enumeration, explicit lattice
//! identities or stored fixtures.

use std::collections::HashSet;
use std::path::Path as FsPath;
use std::time::{Duration, Instant};

use num::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ghost::{ghost_check, midpoint_report, subalgebra_field, ExtensionContext, GhostReport};
use crate::json::vertex_from_json;
use crate::lattice::{hnf, Vector};
use crate::matrix::Mat2;
use crate::orders::{
    branch_matrix, branch_oracle, classify_bass, intersect_vertices, make_bass,
    order_from_generators, spread_out, tubular_order, vertex_order, BassParams, BranchTarget,
    Order,
};
use crate::padic::{is_padic_square, rat};
use crate::tree::{tube, BranchDescriptor, Stem, Vertex};

pub const DEFAULT_SEED: u64 = 1729;
pub const QUICK_LIMIT: Duration = Duration::from_secs(60);
pub const FULL_LIMIT: Duration = Duration::from_secs(600);

const BUILTIN_GOLDEN: &str = include_str!("../fixtures/golden.json");

#[derive(Clone, Debug, Deserialize)]
pub struct DihedralGolden {
    pub classification: String,
    pub r: u64,
    pub stem_length: usize,
    pub width: u64,
}

/// Stored expected values.
#[derive(Clone, Debug, Deserialize)]
pub struct Golden {
    pub neighbors_p2: Vec<Value>,
    pub dihedral: DihedralGolden,
}

impl Golden {
    pub fn builtin() -> Golden {
        Golden::parse(BUILTIN_GOLDEN).expect("bundled fixtures parse")
    }

    pub fn parse(s: &str) -> Result<Golden> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("fixtures: {e}")))
    }

    pub fn load(path: &FsPath) -> Result<Golden> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Golden::parse(&s)
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub full: bool,
    pub seed: u64,
    pub golden: Golden,
}

impl Config {
    pub fn quick() -> Config {
        Config {
            full: false,
            seed: DEFAULT_SEED,
            golden: Golden::builtin(),
        }
    }

    pub fn full() -> Config {
        Config {
            full: true,
            ..Config::quick()
        }
    }

    fn primes(&self) -> Vec<u64> {
        if self.full {
            vec![2, 3, 5]
        } else {
            vec![2]
        }
    }

    fn primes_23(&self) -> Vec<u64> {
        if self.full {
            vec![2, 3]
        } else {
            vec![2]
        }
    }

    fn radius(&self) -> u64 {
        if self.full {
            3
        } else {
            2
        }
    }

    pub fn time_limit(&self) -> Duration {
        if self.full {
            FULL_LIMIT
        } else {
            QUICK_LIMIT
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "{status} criterion {:>2} {}: {} ({} ms)",
            self.id, self.name, self.detail, self.elapsed_ms
        )
    }
}

pub const NAMES: [&str; 12] = [
    "tree-metrics",
    "branch-diagonal",
    "branch-irreducible",
    "branch-neighborhood",
    "spread-out",
    "bass-lines",
    "gorenstein-closure",
    "ramified-identities",
    "extensions",
    "ghost-pipeline",
    "dihedral",
    "timing",
];

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn base(p: u64) -> Field {
    Field::base(p).expect("prime")
}

fn diag(k: &Field, a: i64, d: i64) -> Vertex {
    Vertex::from_matrix(&Mat2::from_ints(k, [a, 0, 0, d])).expect("invertible")
}

fn set(vs: Vec<Vertex>) -> HashSet<Vertex> {
    vs.into_iter().collect()
}

fn random_vertex(rng: &mut ChaCha8Rng, k: &Field, steps: u64) -> Vertex {
    let mut v = Vertex::standard(k);
    for _ in 0..rng.gen_range(0..=steps) {
        v = v.neighbors().choose(rng).expect("nonempty").clone();
    }
    v
}

/// First unit `ε` with `t² - t + ε` irreducible modulo `p`.
pub fn unramified_eps(p: u64) -> BigRational {
    (1..)
        .map(|e: i64| rat(e))
        .find(|e| {
            let d = rat(1) - rat(4) * e;
            crate::padic::val(e, p) == Some(0)
                && crate::padic::val(&d, p) == Some(0)
                && !is_padic_square(&d, p)
        })
        .expect("some unit works")
}

/// Maximal, J1, J2 and J3 orders.
pub fn bass_fixtures(k: &Field) -> Vec<(String, Order)> {
    let p = k.p();
    let mut out = vec![("M2(O)".to_string(), vertex_order(&Vertex::standard(k)))];
    for n in 1..=3 {
        out.push((
            format!("J1(n={n})"),
            make_bass(&BassParams::J1 { n }, k).unwrap(),
        ));
    }
    for n in 1..=2 {
        let eps = unramified_eps(p);
        out.push((
            format!("J2(n={n})"),
            make_bass(&BassParams::J2 { n, eps }, k).unwrap(),
        ));
    }
    for n in 1..=2 {
        for pbar in 0..=1 {
            let params = BassParams::J3 {
                n,
                pbar,
                alpha1: rat(p as i64),
                alpha2: rat(1),
            };
            out.push((
                format!("J3(n={n},pbar={pbar})"),
                make_bass(&params, k).unwrap(),
            ));
        }
    }
    out
}

/// Fixture family with expected Bass flag and closure exponent.
pub fn fixture_family(k: &Field) -> Vec<(String, Order, bool, u64)> {
    let mut out = Vec::new();
    for (name, b) in bass_fixtures(k) {
        for r in 0..=2 {
            let o = b.scale(r);
            let label = if r == 0 {
                name.clone()
            } else {
                format!("{name}^[{r}]")
            };
            out.push((label, o, r == 0, r));
        }
    }
    let s = Vertex::standard(k);
    let p = k.p() as i64;
    for (far, dist) in [(diag(k, 1, p), 1), (diag(k, 1, p * p), 2)] {
        for w in 1..=2 {
            out.push((
                format!("tube(d={dist},w={w})"),
                tubular_order(&s, &far, w).unwrap(),
                false,
                w,
            ));
        }
    }
    out
}

/// All orders `M ⊇ b` with `[M : b] ≤ p^max_index`, found by adjoining
/// `m/π` for `m ∈ M` one step at a time.
pub fn superorders(b: &Order, max_index: i64) -> Vec<Order> {
    let k = b.field().clone();
    let p = k.p();
    let inv_pi = k.pi_pow(-1);
    let mut seen = HashSet::from([b.lattice().clone()]);
    let mut out = vec![b.clone()];
    let mut i = 0;
    while i < out.len() {
        let m = out[i].clone();
        i += 1;
        let basis = m.basis_matrices();
        for idx in 1..p.pow(4) {
            let mut x = Mat2::zero(&k);
            let mut rest = idx;
            for bm in &basis {
                let c = rest % p;
                rest /= p;
                if c != 0 {
                    x = &x + &bm.scale(&k.int(c as i64));
                }
            }
            let x = x.scale(&inv_pi);
            if m.contains_matrix(&x) {
                continue;
            }
            let mut gens = basis.clone();
            gens.push(x);
            let Ok(n) = order_from_generators(&k, &gens) else {
                continue;
            };
            if n.lattice()
                .index_valuation(b.lattice())
                .map_or(true, |v| v > max_index)
            {
                continue;
            }
            if seen.insert(n.lattice().clone()) {
                out.push(n);
            }
        }
    }
    out
}

fn c1_tree_metrics(cfg: &Config) -> Check {
    let started = Instant::now();
    let mut fields: Vec<Field> = cfg.primes().into_iter().map(base).collect();
    if cfg.full {
        fields.push(Field::quadratic(&base(2), rat(1), rat(1)).unwrap());
    }
    let rmax = cfg.radius();
    let golden: Vec<Vertex> = cfg
        .golden
        .neighbors_p2
        .iter()
        .map(|v| vertex_from_json(&base(2), v))
        .collect::<Result<_>>()
        .map_err(|e| format!("fixture neighbors_p2: {e}"))?;
    let got = Vertex::standard(&base(2)).neighbors();
    ensure(got == golden, || {
        "fixture neighbors_p2 disagrees with computed neighbors".into()
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut triples = 0;
    for k in &fields {
        let q = k.q();
        let s = Vertex::standard(k);
        for r in 0..=rmax {
            let ball = s.ball(r);
            let expect = 1 + (q + 1) * (q.pow(r as u32) - 1) / (q - 1);
            ensure(
                ball.len() as u64 == expect && set(ball.clone()).len() == ball.len(),
                || {
                    format!(
                        "|ball(r={r})| = {} over q={q}, expected {expect}",
                        ball.len()
                    )
                },
            )?;
        }
        for _ in 0..100 {
            let v = random_vertex(&mut rng, k, rmax);
            let ns = v.neighbors();
            ensure(set(ns.clone()).len() as u64 == q + 1, || {
                format!("{} lacks q+1 neighbors", v.label())
            })?;
            for w in &ns {
                ensure(w.neighbors().contains(&v), || {
                    format!("asymmetric edge {} {}", v.label(), w.label())
                })?;
            }
            let (a, b, c) = (
                v,
                random_vertex(&mut rng, k, rmax),
                random_vertex(&mut rng, k, rmax),
            );
            let gab = set(lib(a.geodesic(&b), "geodesic")?.0);
            let gbc = set(lib(b.geodesic(&c), "geodesic")?.0);
            let gac = set(lib(a.geodesic(&c), "geodesic")?.0);
            let med: Vec<_> = gab
                .iter()
                .filter(|x| gbc.contains(x) && gac.contains(x))
                .collect();
            ensure(med.len() == 1, || {
                format!(
                    "median of {}, {}, {} has {} vertices",
                    a.label(),
                    b.label(),
                    c.label(),
                    med.len()
                )
            })?;
            triples += 1;
        }
    }
    let t = started.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "{} fields, balls to radius {rmax}, {triples} triples",
        fields.len()
    ))
}

fn c2_branch_diagonal(cfg: &Config) -> Check {
    let rad = cfg.radius();
    let mut total = 0;
    for p in cfg.primes_23() {
        let k = base(p);
        let s = Vertex::standard(&k);
        let u = Mat2::from_ints(&k, [0, 0, 0, p as i64]);
        let line: Vec<Vertex> = (-(rad as i64) - 1..=rad as i64 + 1)
            .map(|e| {
                Vertex::from_matrix(&Mat2::new(k.one(), k.zero(), k.zero(), k.pi_pow(e))).unwrap()
            })
            .collect();
        let mut window: HashSet<Vertex> = line.iter().cloned().collect();
        for l in &line {
            window.extend(l.neighbors());
        }
        let ball = s.ball(rad);
        window.retain(|v| ball.contains(v));
        let oracle = set(branch_oracle(&BranchTarget::Matrix(&u), &s, rad, 1));
        ensure(oracle == window, || {
            format!("p={p}: oracle {} vs window {}", oracle.len(), window.len())
        })?;
        let d = lib(branch_matrix(&u), "branch_matrix")?;
        ensure(
            matches!(
                d,
                BranchDescriptor::Tube {
                    stem: Stem::Infinite(..),
                    width: 1
                }
            ),
            || format!("p={p}: descriptor {d:?}"),
        )?;
        for v in &ball {
            ensure(d.contains(v) == window.contains(v), || {
                format!("p={p}: membership of {}", v.label())
            })?;
        }
        total += window.len();
    }
    Ok(format!("{total} window vertices, radius {rad}"))
}

fn c3_branch_irreducible(cfg: &Config) -> Check {
    let rad = cfg.radius();
    let k = base(2);
    let s = Vertex::standard(&k);
    let u = Mat2::from_ints(&k, [0, -1, 1, 1]);
    let found = branch_oracle(&BranchTarget::Matrix(&u), &s, rad, 1);
    ensure(found == vec![s.clone()], || {
        format!("t^2-t+1: {} vertices", found.len())
    })?;
    for p in cfg.primes_23() {
        let k = base(p);
        let s = Vertex::standard(&k);
        let u = Mat2::from_ints(&k, [0, 1, p as i64, 0]);
        let found = set(branch_oracle(&BranchTarget::Matrix(&u), &s, rad, 1));
        let edge = set(vec![s.clone(), diag(&k, 1, p as i64)]);
        ensure(found == edge, || {
            format!("p={p}: {} vertices, expected the edge", found.len())
        })?;
        let d = lib(branch_matrix(&u), "branch_matrix")?;
        let stem = d.finite_stem().map(|p| set(p.0.clone()));
        ensure(stem == Some(edge) && d.width() == Some(0), || {
            format!("p={p}: descriptor {d:?}")
        })?;
    }
    Ok(format!("radius {rad}"))
}

fn c4_branch_neighborhood(cfg: &Config) -> Check {
    let rad = cfg.radius();
    let k = base(2);
    let s = Vertex::standard(&k);
    let hs = [
        ("M2(O)", vertex_order(&s)),
        ("E1", make_bass(&BassParams::J1 { n: 1 }, &k).unwrap()),
        (
            "J2(1,1)",
            make_bass(&BassParams::J2 { n: 1, eps: rat(1) }, &k).unwrap(),
        ),
        (
            "J3(1,1)",
            make_bass(
                &BassParams::J3 {
                    n: 1,
                    pbar: 1,
                    alpha1: rat(2),
                    alpha2: rat(1),
                },
                &k,
            )
            .unwrap(),
        ),
    ];
    let ball = s.ball(rad);
    for (name, h) in &hs {
        let bh = branch_oracle(&BranchTarget::Order(h), &s, rad, 1);
        for r in 1..=2 {
            let hr = h.scale(r);
            let got = set(branch_oracle(&BranchTarget::Order(&hr), &s, rad, 1));
            let want: HashSet<Vertex> = ball
                .iter()
                .filter(|v| bh.iter().any(|w| v.distance(w).unwrap() <= r))
                .cloned()
                .collect();
            ensure(got == want, || {
                format!("{name}^[{r}]: {} vs {}", got.len(), want.len())
            })?;
        }
    }
    Ok(format!("4 orders, r in {{1,2}}, radius {rad}"))
}

fn c5_spread_out(cfg: &Config) -> Check {
    for p in cfg.primes_23() {
        let k = base(p);
        for v in [Vertex::standard(&k), diag(&k, 1, p as i64)] {
            for r in 1..=2 {
                let got = lib(intersect_vertices(&spread_out(&v, r)), "intersect")?;
                ensure(got == vertex_order(&v).scale(r), || {
                    format!("p={p} r={r} at {}", v.label())
                })?;
            }
        }
        let s = Vertex::standard(&k);
        let far = diag(&k, 1, (p * p) as i64);
        let t = lib(tubular_order(&s, &far, 1), "tubular_order")?;
        let e = make_bass(&BassParams::J1 { n: 2 }, &k).unwrap().scale(1);
        ensure(t == e, || {
            format!("p={p}: tubular order differs from E^[1]")
        })?;
        let d = t.branch();
        let stem = lib(s.geodesic(&far), "geodesic")?;
        ensure(
            d.width() == Some(1) && d.finite_stem().map(|x| x.len()) == Some(2),
            || format!("p={p}: branch {d:?}"),
        )?;
        let rad = cfg.radius();
        let window: HashSet<Vertex> = tube(&stem, 1)
            .into_iter()
            .filter(|v| s.distance(v).unwrap() <= rad)
            .collect();
        let got = set(branch_oracle(&BranchTarget::Order(&t), &s, rad, 1));
        ensure(got == window, || {
            format!("p={p}: oracle branch of tubular order")
        })?;
    }
    Ok("spread-out intersections and tubular order".into())
}

fn c6_bass_lines(cfg: &Config) -> Check {
    let mut n = 0;
    let mut super_checked = 0;
    for p in cfg.primes() {
        let k = base(p);
        for (name, o, bass, _) in fixture_family(&k) {
            let d = o.branch();
            let line = matches!(
                d,
                BranchDescriptor::Tube {
                    stem: Stem::Finite(_),
                    width: 0
                }
            );
            ensure(line == bass && o.is_bass() == bass, || {
                format!("p={p} {name}: branch {d:?}")
            })?;
            if p == 2 && (cfg.full || o.disc_valuation() <= 3) {
                let sup = superorders(&o, 4);
                let exps: Vec<u64> = sup.iter().map(|m| m.closure().0).collect();
                let all_gorenstein = exps.iter().all(|&e| e == 0);
                ensure(all_gorenstein == bass, || {
                    format!("p=2 {name}: superorder exponents {exps:?}")
                })?;
                super_checked += 1;
            }
            n += 1;
        }
    }
    Ok(format!(
        "{n} fixtures, {super_checked} with superorder enumeration"
    ))
}

fn c7_closure(cfg: &Config) -> Check {
    let mut n = 0;
    for p in cfg.primes() {
        let k = base(p);
        for (name, o, _, exponent) in fixture_family(&k) {
            let (r, c) = o.closure();
            ensure(r == exponent, || {
                format!("p={p} {name}: exponent {r}, expected {exponent}")
            })?;
            ensure(c.scale(r) == o, || {
                format!("p={p} {name}: closure does not rescale to input")
            })?;
            ensure(c.closure().0 == 0, || {
                format!("p={p} {name}: closure is not Gorenstein")
            })?;
            let idx = lib(c.lattice().index_valuation(o.lattice()), "index")?;
            ensure(idx == 3 * r as i64, || format!("p={p} {name}: index {idx}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} fixtures"))
}

fn c8_ramified_identities(cfg: &Config) -> Check {
    for p in cfg.primes_23() {
        let k = base(p);
        let pi = p as i64;
        let e = intersect_vertices(&[Vertex::standard(&k), diag(&k, 1, pi)]).unwrap();
        let pm = Mat2::from_ints(&k, [pi, 1, -pi, 0]);
        let power = |n: u64| (0..n).fold(Mat2::identity(&k), |acc, _| &acc * &pm);
        let left = |m: &Mat2, with_lambda: bool| -> Vec<Vector> {
            let mut gens: Vec<Vector> = e
                .basis_matrices()
                .iter()
                .map(|b| (m * b).to_vec())
                .collect();
            if with_lambda {
                gens.push(Mat2::identity(&k).to_vec());
                gens.push(pm.to_vec());
            }
            gens
        };
        let sq = hnf(&k, 4, &left(&power(2), false)).unwrap();
        let pe = e.lattice().scale(1);
        ensure(sq == pe, || format!("p={p}: π_Λ² E ≠ p E"))?;
        for r in 0..=1u64 {
            let even = hnf(&k, 4, &left(&power(2 * r), true)).unwrap();
            let j = make_bass(
                &BassParams::J3 {
                    n: r,
                    pbar: 1,
                    alpha1: rat(pi),
                    alpha2: rat(1),
                },
                &k,
            )
            .unwrap();
            ensure(&even == j.lattice(), || {
                format!("p={p} r={r}: even power identity")
            })?;
            let odd = hnf(&k, 4, &left(&power(2 * r + 1), true)).unwrap();
            let j = make_bass(
                &BassParams::J3 {
                    n: r + 1,
                    pbar: 0,
                    alpha1: rat(pi),
                    alpha2: rat(1),
                },
                &k,
            )
            .unwrap();
            ensure(&odd == j.lattice(), || {
                format!("p={p} r={r}: odd power identity")
            })?;
        }
    }
    Ok("π_Λ² E = pE and both J3 forms".into())
}

fn c9_extensions(cfg: &Config) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 9);
    for p in cfg.primes_23() {
        let k = base(p);
        let ctx = ExtensionContext::new(&Field::quadratic(&k, rat(-(p as i64)), rat(0)).unwrap());
        for _ in 0..20 {
            let a = random_vertex(&mut rng, &k, 2);
            let b = random_vertex(&mut rng, &k, 2);
            let d = a.distance(&b).unwrap();
            let dl = lib(
                ctx.extend_vertex(&a).distance(&ctx.extend_vertex(&b)),
                "distance",
            )?;
            ensure(dl == 2 * d, || format!("p={p}: {d} became {dl}"))?;
        }
        let eps = unramified_eps(p);
        let u = Mat2::new(k.zero(), k.from_rational(-eps), k.one(), k.one());
        let (_, uctx) = lib(subalgebra_field(&u), "subalgebra_field")?;
        let (z1, z2) = lib(uctx.eigenlines(&u), "eigenlines")?;
        let s = Vertex::standard(&k);
        let on: Vec<Vertex> = s
            .ball(cfg.radius())
            .iter()
            .filter(|v| uctx.extend_vertex(v).distance_to_line(&z1, &z2) == 0)
            .cloned()
            .collect();
        ensure(on == vec![s.clone()], || {
            format!("p={p}: stem meets {} K-vertices", on.len())
        })?;
    }
    for p in cfg.primes() {
        let k = base(p);
        let u = Mat2::from_ints(&k, [0, 1, p as i64, 0]);
        let (lambda, ctx) = lib(subalgebra_field(&u), "subalgebra_field")?;
        let rep = lib(midpoint_report(&ctx, &lambda), "midpoint_report")?;
        let ok = if p == 2 { rep.d_w >= 1 } else { rep.d_w == 0 };
        ensure(ok, || format!("p={p}: d_w = {}", rep.d_w))?;
    }
    Ok("distance doubling, unramified stem, midpoint distances".into())
}

fn c10_ghost_pipeline(cfg: &Config) -> Check {
    let mut n = 0;
    for p in cfg.primes_23() {
        let k = base(p);
        for (name, b) in bass_fixtures(&k) {
            for r in 0..=1 {
                let o = b.scale(r);
                match lib(ghost_check(&o), &format!("p={p} {name}^[{r}]"))? {
                    GhostReport::GhostRealized {
                        exponent,
                        presentation,
                    } => {
                        ensure(
                            exponent == r && presentation.claimed == o && presentation.verify(),
                            || format!("p={p} {name}^[{r}]: presentation does not verify"),
                        )?;
                    }
                    other => return Err(format!("p={p} {name}^[{r}]: {other:?}")),
                }
                n += 1;
            }
        }
        let t = tubular_order(&Vertex::standard(&k), &diag(&k, 1, (p * p) as i64), 1).unwrap();
        let (_, c) = t.closure();
        ensure(c.eichler_level() == Some(2), || {
            format!("p={p}: closure of the tubular order is not Eichler")
        })?;
        match lib(ghost_check(&t), "tubular")? {
            GhostReport::GhostRealized { presentation, .. } if presentation.ctx.is_trivial() => {}
            other => return Err(format!("p={p}: tubular order gave {other:?}")),
        }
        n += 1;
    }
    Ok(format!("{n} presentations verified"))
}

fn c11_dihedral(cfg: &Config) -> Check {
    let k = base(2);
    let gens = [
        Mat2::from_ints(&k, [0, -1, 1, 0]),
        Mat2::from_ints(&k, [1, 0, 0, -1]),
    ];
    let o = lib(order_from_generators(&k, &gens), "order_from_generators")?;
    let g = &cfg.golden.dihedral;
    let class = lib(classify_bass(&o), "classify_bass")?;
    ensure(
        class.tag() == g.classification && class.exponent() == g.r,
        || {
            format!(
                "classified {} r={}, fixture says {} r={}",
                class.tag(),
                class.exponent(),
                g.classification,
                g.r
            )
        },
    )?;
    let d = o.branch();
    let stem = d.finite_stem().ok_or_else(|| format!("branch {d:?}"))?;
    ensure(
        stem.len() == g.stem_length && d.width() == Some(g.width),
        || {
            format!(
                "stem length {} width {:?}, fixture says {} and {}",
                stem.len(),
                d.width(),
                g.stem_length,
                g.width
            )
        },
    )?;
    let found = set(branch_oracle(
        &BranchTarget::Order(&o),
        &Vertex::standard(&k),
        cfg.radius(),
        1,
    ));
    ensure(found == set(stem.0.clone()), || {
        format!("oracle finds {} vertices", found.len())
    })?;
    Ok(format!(
        "{} r={}, edge branch",
        class.tag(),
        class.exponent()
    ))
}

fn run_check(id: u8, cfg: &Config) -> Check {
    let f = match id {
        1 => c1_tree_metrics,
        2 => c2_branch_diagonal,
        3 => c3_branch_irreducible,
        4 => c4_branch_neighborhood,
        5 => c5_spread_out,
        6 => c6_bass_lines,
        7 => c7_closure,
        8 => c8_ramified_identities,
        9 => c9_extensions,
        10 => c10_ghost_pipeline,
        11 => c11_dihedral,
        _ => return Err(format!("no criterion {id}")),
    };
    f(cfg)
}

/// Runs one of criteria 1 to 11.
pub fn run_criterion(id: u8, cfg: &Config) -> CriterionResult {
    let started = Instant::now();
    let outcome =
        std::panic::catch_unwind(|| run_check(id, cfg)).unwrap_or_else(|_| Err("panicked".into()));
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        passed,
        detail,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Criterion 12: the whole run fits in the mode's time budget.
pub fn timing_result(total: Duration, cfg: &Config) -> CriterionResult {
    let limit = cfg.time_limit();
    let mode = if cfg.full { "full" } else { "quick" };
    CriterionResult {
        id: 12,
        name: NAMES[11],
        passed: total < limit,
        detail: format!(
            "{mode} run took {:.1} s, limit {} s",
            total.as_secs_f64(),
            limit.as_secs()
        ),
        elapsed_ms: total.as_millis() as u64,
    }
}

/// Runs criteria 1 to 11, then the timing check, calling `report` after each.
pub fn run_suite(cfg: &Config, mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let started = Instant::now();
    let mut out = Vec::new();
    for id in 1..=11 {
        let r = run_criterion(id, cfg);
        report(&r);
        out.push(r);
    }
    let t = timing_result(started.elapsed(), cfg);
    report(&t);
    out.push(t);
    out
}
