//! Acceptance checks: one PASS/FAIL line per criterion. The process exits
//! with status 1 if any criterion fails.

use std::time::{Duration, Instant};

use prymform::cli::replay_script;
use prymform::deform::{break_up_zero_surface, collapse_surface, rel_move};
use prymform::geodesics::{
    cylinder_decomposition, designated_connections, is_admissible, saddle_connections_len2, twins,
};
use prymform::intmat;
use prymform::prym::{
    build_prototype_surface, classify_components, component_invariant, enumerate_prototypes, find_prym_involutions,
    prototype_polygons, rm_generator, verify_real_multiplication, Kappa, Prototype,
};
use prymform::surface::{lattice_torus, origami};
use prymform::{QuadNum, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration) -> std::result::Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn p(kappa: Kappa, w: i64, h: i64, e: i64) -> Prototype {
    Prototype::new(kappa, w, h, e).expect("valid prototype")
}

fn prototype_law() -> Check {
    let start = Instant::now();
    for d in 8..=500i64 {
        let nonempty = !enumerate_prototypes(d).is_empty();
        let expected = matches!(d.rem_euclid(8), 0 | 1 | 4);
        ensure(nonempty == expected, || format!("D={d}: nonempty={nonempty}"))?;
    }
    let t = start.elapsed();
    within(Duration::from_secs(5), t)?;
    Ok(format!("D in 8..=500 ({t:.2?})"))
}

fn polarization() -> intmat::Mat {
    vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 2], vec![0, 0, -2, 0]]
}

fn verify_one(proto: &Prototype) -> std::result::Result<(), String> {
    let ps = build_prototype_surface(proto, None).map_err(|e| format!("{proto}: {e}"))?;
    ensure(ps.lattice.gram == polarization(), || format!("{proto}: form is {:?}", ps.lattice.gram))?;
    let t = rm_generator(proto);
    let m = &t.matrix;
    let lhs = intmat::mul(m, m);
    let rhs = intmat::add(&intmat::scale(m, proto.e), &intmat::scale(&intmat::identity(4), 2 * proto.w * proto.h));
    ensure(lhs == rhs, || format!("{proto}: T^2 != eT + 2wh Id"))?;
    let report = verify_real_multiplication(&ps, &t, proto.discriminant()).map_err(|e| format!("{proto}: {e}"))?;
    ensure(report.self_adjoint && report.eigenform, || format!("{proto}: {report:?}"))?;
    ensure(ps.tau.compose(&ps.tau).is_identity(), || format!("{proto}: tau is not an involution"))?;
    ensure(intmat::trace(&ps.tau_action) == -2, || format!("{proto}: H1 trace {}", intmat::trace(&ps.tau_action)))?;
    ensure(ps.tau_fixed_points() == 4, || format!("{proto}: {} fixed points", ps.tau_fixed_points()))?;
    Ok(())
}

fn eigenform_suite() -> Check {
    let start = Instant::now();
    let jobs: Vec<Prototype> = (8..=200)
        .flat_map(enumerate_prototypes)
        .flat_map(|(w, h, e)| Kappa::ALL.map(|k| p(k, w, h, e)))
        .collect();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = jobs.len().div_ceil(threads);
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().filter_map(|q| verify_one(q).err()).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
    });
    if let Some(first) = failures.first() {
        return Err(format!("{} failures, first: {first}", failures.len()));
    }
    let t = start.elapsed();
    within(Duration::from_secs(60), t)?;
    Ok(format!("{} prototypes, both strata ({t:.2?})", jobs.len()))
}

fn component_counts() -> Check {
    let mut checked = 0;
    for d in 8..=200i64 {
        if !matches!(d.rem_euclid(8), 0 | 1 | 4) {
            continue;
        }
        for kappa in Kappa::ALL {
            let r = classify_components(d, kappa).map_err(|e| format!("D={d}: {e}"))?;
            let want = if d.rem_euclid(8) == 1 { 2 } else { 1 };
            ensure(r.classes.len() == want, || format!("D={d} ({kappa}): {} classes", r.classes.len()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (D, stratum) pairs"))
}

fn d9_separation() -> Check {
    let a = component_invariant(&p(Kappa::TwoTwo, 1, 1, 1)).parity;
    let b = component_invariant(&p(Kappa::TwoTwo, 1, 1, -1)).parity;
    ensure(a == Some(1) && b == Some(0), || format!("parities {a:?}, {b:?}"))?;
    Ok("parity(1,1,1) = 1, parity(1,1,-1) = 0".into())
}

fn involution_census() -> Check {
    let start = Instant::now();
    let count = |q: Prototype| -> std::result::Result<prymform::prym::InvolutionCensus, String> {
        let (s, _) = prototype_polygons(&q, None).map_err(|e| e.to_string())?;
        Ok(find_prym_involutions(&s))
    };
    let c = count(p(Kappa::TwoTwo, 1, 1, -1))?;
    ensure(c.involutions.len() == 3, || format!("(2,2)(1,1,-1): {}", c.involutions.len()))?;
    ensure(c.composites.len() == 3 && c.composites_are_torus_triple_covers(), || {
        format!("composites {:?}", c.composites)
    })?;
    let c = count(p(Kappa::TwoTwo, 1, 1, 1))?;
    ensure(c.involutions.len() == 1, || format!("(2,2)(1,1,1): {}", c.involutions.len()))?;
    let mut n = 0;
    for d in 8..=200 {
        for (w, h, e) in enumerate_prototypes(d) {
            let c = count(p(Kappa::OneOneTwo, w, h, e))?;
            ensure(c.involutions.len() == 1, || format!("(1,1,2)({w},{h},{e}): {}", c.involutions.len()))?;
            n += 1;
        }
    }
    let t = start.elapsed();
    within(Duration::from_secs(120), t)?;
    Ok(format!("3 / 1 / 1 on {n} (1,1,2) prototypes with D <= 200 ({t:.2?})"))
}

/// Horizontal cylinders as (circumference, height) of the distinguished
/// cylinder `C0` and of one of the two exchanged ones. `C0` is the cylinder
/// whose shape is not repeated (any, if all three agree).
fn horizontal_pair(q: Prototype, slit: Option<&QuadNum>) -> std::result::Result<[(QuadNum, QuadNum); 2], String> {
    let (s, _) = prototype_polygons(&q, slit).map_err(|e| e.to_string())?;
    let cyl = cylinder_decomposition(&s, &Vec2::ints(1, 0)).map_err(|e| format!("{q}: {e}"))?;
    ensure(cyl.len() == 3, || format!("{q}: {} cylinders", cyl.len()))?;
    let shape = |i: usize| (cyl[i].width.clone(), cyl[i].height.clone());
    let odd = (0..3).find(|&i| (0..3).filter(|&j| j != i).all(|j| shape(j) != shape(i)));
    let c0 = odd.unwrap_or(0);
    let c1 = (0..3).find(|&j| j != c0).expect("three cylinders");
    let pair = (0..3).filter(|&j| j != c0).map(shape).collect::<Vec<_>>();
    ensure(pair[0] == pair[1], || format!("{q}: exchanged cylinders differ"))?;
    Ok([shape(c0), shape(c1)])
}

fn cylinder_tables() -> Check {
    let two = QuadNum::from_int(2);
    // (w, h, e), h0 = ratio_h · h1, l0 = ratio_l · l1.
    let table = [((1, 1, -1), 1, 1), ((1, 1, 1), 2, 2), ((1, 2, 0), 1, 2), ((2, 1, 0), 2, 1)];
    let mut n = 0;
    for kappa in Kappa::ALL {
        for &((w, h, e), rh, rl) in &table {
            let q = p(kappa, w, h, e);
            let slits = [None, Some(QuadNum::frac(1, 2)), Some(QuadNum::frac(1, 3))];
            for slit in &slits {
                let [(l0, h0), (l1, h1)] = match horizontal_pair(q, slit.as_ref()) {
                    Ok(x) => x,
                    // Not every slit length is valid for every prototype.
                    Err(e) if slit.is_some() && e.contains("slit") => continue,
                    Err(e) => return Err(e),
                };
                let scale = |x: &QuadNum, r: i64| if r == 2 { &two * x } else { x.clone() };
                ensure(h0 == scale(&h1, rh) && l0 == scale(&l1, rl), || {
                    format!("{q} slit {slit:?}: (l0, h0) = ({l0}, {h0}), (l1, h1) = ({l1}, {h1})")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} decompositions: (1,1,-1) h0=h1,l0=l1; (1,1,1) h0=2h1,l0=2l1; (1,2,0) h0=h1,l0=2l1; (2,1,0) h0=2h1,l0=l1"))
}

fn primitive_lattice_count(u: &Vec2, v: &Vec2, l2: &QuadNum) -> usize {
    let area = u.cross(v).to_f64().abs();
    let longest = u.norm2().to_f64().max(v.norm2().to_f64()).sqrt();
    let bound = (l2.to_f64().sqrt() * longest / area).ceil() as i64 + 1;
    let mut n = 0;
    for a in -bound..=bound {
        for b in -bound..=bound {
            if num_integer::Integer::gcd(&a, &b) != 1 {
                continue;
            }
            let w = &u.scale(&QuadNum::from_int(a)) + &v.scale(&QuadNum::from_int(b));
            if &w.norm2() <= l2 {
                n += 1;
            }
        }
    }
    n
}

fn saddle_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rng_l = ChaCha8Rng::seed_from_u64(8);
    let mut rat = |lo: i64, hi: i64| QuadNum::frac(rng.gen_range(lo..=hi), rng.gen_range(1..=4));
    let mut cases = 0;
    let mut total = 0;
    while cases < 20 {
        let u = Vec2::new(rat(1, 8), rat(-4, 4));
        let v = Vec2::new(rat(-4, 4), rat(1, 8));
        let area = u.cross(&v);
        if area < QuadNum::frac(1, 2) {
            continue;
        }
        let l = QuadNum::from_int(rng_l.gen_range(2..=10));
        let l2 = &l * &l;
        let t = lattice_torus(1, &u, &v).map_err(|e| e.to_string())?;
        let got = saddle_connections_len2(&t, &l2).len();
        let want = primitive_lattice_count(&u, &v, &l2);
        ensure(got == want, || format!("lattice {u:?}, {v:?}, L = {l}: unfolding {got}, brute force {want}"))?;
        total += got;
        cases += 1;
    }
    Ok(format!("20 lattices, {total} connections in total"))
}

fn twin_fixture() -> Check {
    let ps = build_prototype_surface(&p(Kappa::TwoTwo, 1, 1, 1), None).map_err(|e| e.to_string())?;
    let find = |ps: &prymform::prym::PrymSurface, hol: Vec2| {
        designated_connections(ps, &QuadNum::from_int(4)).into_iter().find(|sc| sc.holonomy == hol)
    };
    let sigma0 = find(&ps, Vec2::new(QuadNum::frac(-3, 2), QuadNum::zero())).ok_or("designated connection not found")?;
    let tw = twins(&ps, &sigma0).map_err(|e| e.to_string())?.twins.len();
    let adm = is_admissible(&ps, &sigma0).map_err(|e| e.to_string())?.admissible;
    ensure(tw == 0 && !adm, || format!("before: {tw} twins, admissible {adm}"))?;
    let eps = Vec2::new(QuadNum::zero(), QuadNum::frac(1, 10));
    let moved = rel_move(&ps, &eps).map_err(|e| e.to_string())?;
    let sigma1 = find(&moved, &sigma0.holonomy + &eps).ok_or("moved connection not found")?;
    let tw1 = twins(&moved, &sigma1).map_err(|e| e.to_string())?.twins.len();
    ensure(tw1 == 1, || format!("after rel (0, 1/10): {tw1} twins"))?;
    Ok("0 twins, not admissible; 1 twin after rel (0, 1/10)".into())
}

fn surgery_round_trip() -> Check {
    let s4 = origami(&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]).map_err(|e| e.to_string())?;
    ensure(s4.stratum_orders() == vec![4], || "fixture is not in H(4)".into())?;
    let code = s4.canonical_code(false);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut vs = Vec::new();
    while vs.len() < 10 {
        let (a, b) = (rng.gen_range(-15i64..=15), rng.gen_range(-15i64..=15));
        if a == 0 || b == 0 || a * a + b * b >= 400 {
            continue;
        }
        vs.push(Vec2::new(QuadNum::frac(a, 40), QuadNum::frac(b, 40)));
    }
    for split in Kappa::ALL {
        let (from, to) = match split {
            Kappa::TwoTwo => ("P", "Q"),
            Kappa::OneOneTwo => ("R1", "Q"),
        };
        for v in &vs {
            let s = break_up_zero_surface(&s4, v, split).map_err(|e| format!("({split}) break up {v:?}: {e}"))?;
            ensure(s.stratum_orders() == split.orders(), || format!("({split}) {v:?}: stratum {:?}", s.stratum_orders()))?;
            let sigma0 = saddle_connections_len2(&s, &v.norm2())
                .into_iter()
                .find(|sc| sc.start.as_deref() == Some(from) && sc.end.as_deref() == Some(to) && &sc.holonomy == v)
                .ok_or_else(|| format!("({split}) {v:?}: created connection not found"))?;
            let back = collapse_surface(&s, &sigma0).map_err(|e| format!("({split}) collapse {v:?}: {e}"))?;
            ensure(back.canonical_code(false) == code, || format!("({split}) {v:?}: different surface"))?;
        }
    }
    Ok("H(4) origami, both splits, 10 random v each".into())
}

fn d16_replay() -> Check {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scripts/d16-path.json");
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let script: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let report = replay_script(&script, None).map_err(|e| e.to_string())?;
    ensure(report.asserted, || "script has no endpoint assertion".into())?;
    Ok(format!("{} steps, endpoint isomorphic to g·S(2,2)(1,2,0)", report.steps))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("prototype existence law", prototype_law),
        ("eigenform verification suite", eigenform_suite),
        ("component counts", component_counts),
        ("D=9 separation", d9_separation),
        ("involution census", involution_census),
        ("cylinder tables", cylinder_tables),
        ("saddle-connection oracle", saddle_oracle),
        ("twin fixture on S(2,2)(1,1,1)", twin_fixture),
        ("surgery round trip", surgery_round_trip),
        ("D=16 connectivity replay", d16_replay),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
