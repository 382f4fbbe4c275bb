//! The ten acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion fails.

use quadplane::axiomlab::*;
use quadplane::gf::Field;
use quadplane::projgeom::{PGPoint, QuadricKind, Subspace};
use quadplane::quadalg::{check_algebra, Algebra, Kind};
use quadplane::ringplane::lemmas::{self, mutations, Scope};
use quadplane::ringplane::{build_plane, quadrangle_transitivity_report, PlaneModel};
use quadplane::vsets::*;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

const KINDS: [Kind; 3] = [Kind::Extension, Kind::Dual, Kind::Split];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(p: u32, e: u32) -> Arc<Field> {
    Field::new(p, e, None).unwrap()
}

fn plane(p: u32, e: u32, kind: Kind) -> PlaneModel {
    build_plane(&Algebra::of_kind(field(p, e), kind).unwrap())
}

fn c1_algebra_trichotomy() -> Outcome {
    let mut algebras = 0;
    for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = field(p, e);
        for t in f.elements() {
            for n in f.elements() {
                let roots = f.elements().filter(|&a| f.add(f.sub(f.mul(a, a), f.mul(t, a)), n).is_zero()).count();
                let want = [Kind::Extension, Kind::Dual, Kind::Split][roots];
                let a = Algebra::new(f.clone(), t, n).map_err(|e| e.to_string())?;
                ensure(a.kind() == want, || format!("q={} t={t} n={n}: {} with {roots} roots", f.order(), a.kind()))?;
                ensure(a.product_surjectivity(), || format!("q={} t={t} n={n}: not product-surjective", f.order()))?;
                let r = check_algebra(&a);
                ensure(r.holds, || format!("q={} t={t} n={n}: {}", f.order(), r.summary()))?;
                algebras += 1;
            }
        }
    }
    Ok(format!("{algebras} algebras"))
}

fn c2_plane_counts() -> Outcome {
    for p in [2u32, 3] {
        let q = p as usize;
        for kind in KINDS {
            let want = match kind {
                Kind::Extension => q.pow(4) + q * q + 1,
                Kind::Dual => q * q * (q * q + q + 1),
                Kind::Split => (q * q + q + 1).pow(2),
            };
            let m = plane(p, 1, kind);
            ensure(m.num_points() == want && m.num_lines() == want, || format!("{kind} q={q}: {} points, expected {want}", m.num_points()))?;
        }
    }
    let n = plane(2, 1, Kind::Dual).num_points();
    ensure(n == 28, || format!("dual q=2 has {n} points"))?;
    Ok("dual q=2: 28 points".into())
}

fn c3_span_and_quadrics() -> Outcome {
    for p in [2u32, 3] {
        let q = p as usize;
        for kind in KINDS {
            let pl = plane(p, 1, kind);
            let (want_kind, want_size) = match kind {
                Kind::Extension => (QuadricKind::Elliptic, q * q + 1),
                Kind::Dual => (QuadricKind::Tube, q * (q + 1)),
                Kind::Split => (QuadricKind::Hypo, (q + 1) * (q + 1)),
            };
            for m in [build_vset_matrices(&pl), build_vset_reduction(&pl), build_vset_juxtaposition(&pl)] {
                let m = m.map_err(|e| e.to_string())?;
                let tag = format!("{kind} q={q} {:?}", m.construction);
                ensure(m.span().dim() == 8, || format!("{tag}: span {}", m.span().dim()))?;
                for x in &m.xi {
                    ensure(x.quadric.kind == want_kind && x.points.len() == want_size, || {
                        format!("{tag}: line {} gives {:?} with {} points", x.ring_line, x.quadric.kind, x.points.len())
                    })?;
                }
                ensure(m.violations(&pl).is_empty(), || format!("{tag}: {:?}", m.violations(&pl)))?;
            }
            let par = build_vset_parametrization(&pl, pl.algebra().i()).map_err(|e| e.to_string())?;
            if !pl.algebra().discriminant().is_zero() {
                ensure(par.span.dim() == 8, || format!("{kind} q={q} parametrization spans {}", par.span.dim()))?;
            }
            let m = build_vset_matrices(&pl).map_err(|e| e.to_string())?;
            let rl = reference_line_check(&m, &pl).map_err(|e| e.to_string())?;
            ensure(rl.holds(), || format!("{kind} q={q}: reference line {rl:?}"))?;
        }
    }
    Ok("all constructions span PG(8,q)".into())
}

fn c4_equivalences() -> Outcome {
    let mut fitted = 0;
    for p in [2u32, 3] {
        for kind in KINDS {
            let pl = plane(p, 1, kind);
            let ms = [build_vset_matrices(&pl), build_vset_reduction(&pl), build_vset_juxtaposition(&pl)]
                .into_iter()
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            for i in 0..3 {
                for j in i + 1..3 {
                    let eq = model_equivalence(&ms[i], &ms[j]);
                    ensure(eq.holds(), || format!("{kind} q={p}: {:?} vs {:?} {eq:?}", ms[i].construction, ms[j].construction))?;
                    fitted += 1;
                }
            }
            let alg = pl.algebra();
            let par = build_vset_parametrization(&pl, alg.i()).map_err(|e| e.to_string())?;
            let disc = !alg.discriminant().is_zero();
            ensure(par.projectivity.is_some() == disc, || format!("{kind} q={p}: parametrization projectivity {}", par.projectivity.is_some()))?;
            if kind == Kind::Dual {
                if p == 2 {
                    ensure(par.span.dim() == 2, || format!("dual q=2 parametrization spans {}", par.span.dim()))?;
                } else {
                    let (dim, eq) = quadric_veronese_equivalence(&pl).map_err(|e| e.to_string())?;
                    ensure(dim == 5 && eq.holds(), || format!("dual q={p}: Veronese span {dim}, {eq:?}"))?;
                }
            }
        }
    }
    Ok(format!("{fitted} projectivities verified on all points and lines"))
}

fn c5_mazzocca_melone() -> Outcome {
    for p in [2u32, 3] {
        for kind in KINDS {
            let m = build_vset_matrices(&plane(p, 1, kind)).map_err(|e| e.to_string())?;
            let c = Candidate::from_model(&m);
            for r in check_v_axioms(&c) {
                ensure(r.holds, || format!("{kind} q={p}: {}", r.summary()))?;
            }
            let x = c.index_of(&PGPoint::unit(8, 0)).ok_or("reference point missing")?;
            let span = c.tangent_span(x, &c.members_through()[x]).map_err(|e| e.to_string())?;
            ensure(span == Subspace::coordinate(8, &[1, 2, 5, 6]), || format!("{kind} q={p}: tangent space of dimension {}", span.dim()))?;
        }
    }
    Ok("V1, V2, V3* and the tangent 4-space".into())
}

fn c6_segre() -> Outcome {
    for p in [2u32, 3] {
        let pl = plane(p, 1, Kind::Split);
        let m = build_vset_matrices(&pl).map_err(|e| e.to_string())?;
        let eq = segre_equivalence(&m, &pl).map_err(|e| e.to_string())?;
        ensure(eq.holds(), || format!("q={p}: {eq:?}"))?;
        let f = field(p, 1);
        for n in [2, 3] {
            let c = segre_candidate(n, &f).map_err(|e| e.to_string())?;
            ensure(c.ambient == 2 * n + 1, || format!("S(1,{n}) in PG({})", c.ambient))?;
            for r in check_s_axioms(&c) {
                ensure(r.holds, || format!("S(1,{n}) q={p}: {}", r.summary()))?;
            }
        }
    }
    Ok("S(2,2), S(1,2), S(1,3)".into())
}

fn c7_hjelmslev() -> Outcome {
    for (p, e) in [(2, 1), (3, 1), (2, 2)] {
        let pl = plane(p, e, Kind::Dual);
        let q = pl.algebra().q();
        let m = build_vset_matrices(&pl).map_err(|e| e.to_string())?;
        let r = check_h_axioms(&m, &pl).map_err(|e| e.to_string())?;
        for a in r.reports() {
            ensure(a.holds, || format!("q={q}: {}", a.summary()))?;
        }
        let fibers = r.hj3.statistics.get("fiber_sizes").cloned().unwrap_or_default();
        ensure(fibers == serde_json::json!({ (q * q).to_string(): q * q + q + 1 }), || format!("q={q}: fibers {fibers}"))?;
        ensure(r.scroll_checks.iter().all(|s| s.span_dim == 5 && s.cone_matches), || format!("q={q}: scroll"))?;
        if q >= 3 {
            ensure(r.scroll_checks.iter().all(|s| s.cross_ratio_matches == Some(true)), || format!("q={q}: cross-ratio"))?;
        }
        let v = &r.veronese_sub;
        ensure(v.span_dim == 5 && v.skew_to_pi_y && v.one_per_singular_plane, || format!("q={q}: Veronese {v:?}"))?;
        if q == 2 {
            let c = &r.census;
            let single = |h: &std::collections::BTreeMap<String, usize>| (h.len() == 1).then(|| h.keys().next().unwrap().clone());
            ensure(c.n == 28 && single(&c.g_x).as_deref() == Some("3") && single(&c.n_x).as_deref() == Some("6"), || format!("census {c:?}"))?;
            ensure(c.count_identity, || "|X| != 4 n_x + g_x + 1".into())?;
            ensure(single(&c.x_y).as_deref() == Some("12"), || format!("12-sets {:?}", c.x_y))?;
        }
    }
    Ok("q = 2, 3, 4; census (3, 6, 28)".into())
}

fn c8_sharp_transitivity() -> Outcome {
    let mut lines = vec![];
    let mut failed = false;
    for kind in KINDS {
        let t = quadrangle_transitivity_report(&plane(2, 1, kind)).map_err(|e| e.to_string())?;
        let sharp = t.count_quadrangles == t.group_order && t.stabilizer_order == 1;
        let dual_values = kind != Kind::Dual || (t.count_quadrangles == 86016 && t.group_order == 86016);
        failed |= !(sharp && dual_values && t.transitive);
        lines.push(format!("{kind}: {} quadrangles, {} matrices, stabilizer {}", t.count_quadrangles, t.group_order, t.stabilizer_order));
    }
    if failed {
        Err(lines.join("; "))
    } else {
        Ok(lines.join("; "))
    }
}

fn c9_uniqueness() -> Outcome {
    let mut lines = vec![];
    let mut failed = false;
    for kind in KINDS {
        let m = build_vset_matrices(&plane(2, 1, kind)).map_err(|e| e.to_string())?;
        let r = containment_uniqueness(&Candidate::from_model(&m), kind).map_err(|e| e.to_string())?;
        failed |= !r.holds;
        lines.push(format!("{kind}: {} quadrics outside the family", r.violations));
    }
    if failed {
        Err(lines.join("; "))
    } else {
        Ok(lines.join("; "))
    }
}

fn c10_neighbor_lemmas() -> Outcome {
    for kind in [Kind::Dual, Kind::Split] {
        let m = plane(2, 1, kind);
        for r in lemmas::check_neighbor_lemmas(&m, Scope::Exhaustive) {
            ensure(r.holds, || format!("{kind} q=2: {}", r.summary()))?;
        }
    }
    for kind in KINDS {
        let m = plane(3, 1, kind);
        for r in lemmas::check_neighbor_lemmas(&m, Scope::Random { samples: 1000, seed: 7 }) {
            ensure(r.holds, || format!("{kind} q=3: {}", r.summary()))?;
        }
    }
    let m = plane(2, 1, Kind::Dual);
    let ex = Scope::Exhaustive;
    let flipped = mutations::flip_line_neighbor(&m);
    let dropped = mutations::drop_incidence(&m);
    let pl = mutations::flip_point_line_neighbor(&m);
    let controls = [
        ("N1", lemmas::check_n1(&flipped, ex)),
        ("N2", lemmas::check_n2(&mutations::hide_line_neighbor(&m), ex)),
        ("N3", lemmas::check_n3(&dropped, ex)),
        ("N4", lemmas::check_n4(&mutations::all_points_neighboring(&m), ex)),
        ("N5", lemmas::check_n5(&pl, ex)),
        ("N6", lemmas::check_n6(&flipped, ex)),
        ("triangle", lemmas::check_triangle(&pl, ex)),
        ("N7", lemmas::check_n7(&dropped, ex)),
    ];
    for (id, r) in &controls {
        ensure(!r.holds, || format!("{id} accepts its mutated control"))?;
    }
    Ok("exhaustive at q=2, 1000 samples at q=3, 8 mutated controls rejected".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("algebra trichotomy", c1_algebra_trichotomy, Duration::from_secs(1)),
        ("plane counts", c2_plane_counts, Duration::from_secs(10)),
        ("span 8 and line quadrics", c3_span_and_quadrics, Duration::from_secs(60)),
        ("construction equivalences", c4_equivalences, Duration::from_secs(120)),
        ("Mazzocca-Melone axioms", c5_mazzocca_melone, Duration::from_secs(120)),
        ("Segre identification", c6_segre, Duration::from_secs(120)),
        ("Hjelmslev suite", c7_hjelmslev, Duration::from_secs(180)),
        ("sharp transitivity", c8_sharp_transitivity, Duration::from_secs(300)),
        ("uniqueness of quadrics", c9_uniqueness, Duration::from_secs(300)),
        ("neighbor lemmas", c10_neighbor_lemmas, Duration::from_secs(120)),
    ];
    let mut failed = vec![];
    let mut out = std::io::stdout().lock();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(m) if took > *budget => Err(format!("{m}; took {took:.2?}, budget {budget:?}")),
            o => o,
        };
        let line = match &outcome {
            Ok(m) => format!("criterion {:>2} {name}: PASS ({m}; {took:.2?})\n", i + 1),
            Err(m) => format!("criterion {:>2} {name}: FAIL ({m}; {took:.2?})\n", i + 1),
        };
        out.write_all(line.as_bytes()).unwrap();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
