use quadplane::gf::Field;
use quadplane::quadalg::{Algebra, Kind};
use quadplane::ringplane::{build_plane, PlaneModel};
use quadplane::vsets::*;

fn plane(p: u32, e: u32, kind: Kind) -> PlaneModel {
    build_plane(&Algebra::of_kind(Field::new(p, e, None).unwrap(), kind).unwrap())
}

const KINDS: [Kind; 3] = [Kind::Dual, Kind::Split, Kind::Extension];

#[test]
fn constructions_are_projectively_equivalent() {
    for p in [2, 3] {
        for kind in KINDS {
            let pl = plane(p, 1, kind);
            let mat = build_vset_matrices(&pl).unwrap();
            let red = build_vset_reduction(&pl).unwrap();
            let jux = build_vset_juxtaposition(&pl).unwrap();
            for (a, b) in [(&mat, &red), (&mat, &jux), (&red, &jux)] {
                let e = model_equivalence(a, b);
                assert!(e.holds(), "{kind} q={p}: {e:?}");
                assert_eq!(e.points_checked, pl.num_points());
                assert_eq!(e.subspaces_checked, pl.num_lines());
            }
        }
    }
}

#[test]
fn split_model_is_a_segre_variety() {
    for p in [2, 3] {
        let pl = plane(p, 1, Kind::Split);
        let m = build_vset_matrices(&pl).unwrap();
        assert!(segre_equivalence(&m, &pl).unwrap().holds());
    }
}

#[test]
fn parametrization_depends_on_the_discriminant() {
    for (p, e) in [(2, 1), (3, 1), (2, 2)] {
        for kind in KINDS {
            let pl = plane(p, e, kind);
            let alg = pl.algebra();
            let par = build_vset_parametrization(&pl, alg.i()).unwrap();
            let nondegenerate = !alg.discriminant().is_zero();
            assert_eq!(par.projectivity.is_some(), nondegenerate, "{kind} q={}", alg.q());
            if nondegenerate {
                assert_eq!(par.span.dim(), 8);
            }
        }
    }
}

#[test]
fn dual_parametrization_is_a_quadric_veronese_variety_or_a_plane() {
    let (dim, e) = quadric_veronese_equivalence(&plane(3, 1, Kind::Dual)).unwrap();
    assert_eq!(dim, 5);
    assert!(e.holds());
    for e in [1, 2] {
        let pl = plane(2, e, Kind::Dual);
        let par = build_vset_parametrization(&pl, pl.algebra().i()).unwrap();
        assert_eq!(par.span.dim(), 2);
        assert_eq!(par.distinct, pl.algebra().q().pow(2) + pl.algebra().q() + 1);
    }
}

#[test]
fn reference_line_quadric() {
    for p in [2, 3] {
        for kind in KINDS {
            let pl = plane(p, 1, kind);
            let m = build_vset_matrices(&pl).unwrap();
            let c = reference_line_check(&m, &pl).unwrap();
            assert!(c.holds(), "{kind} q={p}: {c:?}");
        }
    }
}

#[test]
fn quadric_kind_is_constant_per_model() {
    for kind in KINDS {
        let pl = plane(3, 1, kind);
        let m = build_vset_matrices(&pl).unwrap();
        assert!(m.xi.iter().all(|x| x.quadric.kind == expected_quadric(kind)));
        assert!(m.violations(&pl).is_empty());
    }
}

#[test]
fn model_json_shape() {
    let pl = plane(2, 1, Kind::Dual);
    let m = build_vset_matrices(&pl).unwrap();
    let v = serde_json::to_value(&m).unwrap();
    assert_eq!(v["ambient_dim"], 8);
    assert_eq!(v["X"].as_array().unwrap().len(), 28);
    assert_eq!(v["Xi"][0]["kind"], "tube");
    assert!(v["Xi"][0]["vertex"].is_array());
    assert_eq!(v["pt_map"].as_array().unwrap().len(), 28);
}
