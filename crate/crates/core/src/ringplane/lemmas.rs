//! Checkers for the neighbor calculus of G(V): lemmas N1 to N7, the
//! triangle lemma and the determinant criterion for quadrangles.
//!
//! Every checker reads the incidence and neighbor matrices stored in the
//! model and compares them with an independent computation, so a corrupted
//! model makes the corresponding report fail.

use super::{add_triples, cross, dot, is_admissible, scale_triple, PlaneModel, Triple};
use crate::quadalg::AlgElem;
use crate::report::{AxiomReport, Witness};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Exhaustive,
    Random { samples: usize, seed: u64 },
}

/// Runs `check` on every K-tuple of indices below `n`, or on random ones.
fn over_tuples<const K: usize>(
    rep: &mut AxiomReport,
    n: usize,
    scope: Scope,
    check: impl Fn([usize; K]) -> Option<Witness> + Sync,
) {
    let tuples: Box<dyn Fn(u64) -> [usize; K] + Sync> = match scope {
        Scope::Exhaustive => Box::new(move |mut c| {
            let mut t = [0; K];
            for x in t.iter_mut().rev() {
                *x = (c % n as u64) as usize;
                c /= n as u64;
            }
            t
        }),
        Scope::Random { seed, .. } => Box::new(move |c| {
            let mut rng = StdRng::seed_from_u64(seed ^ c.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            [0; K].map(|_| rng.gen_range(0..n))
        }),
    };
    let total = match scope {
        Scope::Exhaustive => (n as u64).pow(K as u32),
        Scope::Random { samples, .. } => samples as u64,
    };
    let failures: Vec<Witness> = (0..total).into_par_iter().filter_map(|c| check(tuples(c))).collect();
    rep.absorb(failures);
    rep.stat("instances", total);
}

/// Joins of points read off the incidence matrix: the unique common line,
/// or `None` when there are several.
struct Joins {
    n: usize,
    table: Vec<Option<usize>>,
}

impl Joins {
    fn new(model: &PlaneModel) -> Self {
        let n = model.num_points();
        let table = (0..n * n)
            .into_par_iter()
            .map(|c| {
                let common = model.common_lines(c / n, c % n);
                (common.len() == 1).then(|| common[0])
            })
            .collect();
        Joins { n, table }
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a * self.n + b]
    }
}

/// Proper ordered triangle by the definition, with joins from incidence.
fn triangle_by_definition(model: &PlaneModel, joins: &Joins, p: [usize; 3]) -> bool {
    let pp = |a, b| model.neighbor_pp.get(a, b);
    if pp(p[0], p[1]) || pp(p[1], p[2]) || pp(p[0], p[2]) {
        return false;
    }
    let (Some(a), Some(b), Some(c)) = (joins.get(p[0], p[1]), joins.get(p[1], p[2]), joins.get(p[0], p[2])) else {
        return false;
    };
    let ll = |x, y| model.neighbor_ll.get(x, y);
    !(ll(a, b) || ll(b, c) || ll(a, c))
}

/// (N1) Lines are non-neighboring iff `V*(A,B,C)` is a point.
pub fn check_n1(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N1", "neighbor lemma N1: non-neighboring lines iff V*(A,B,C) is a point");
    let alg = model.algebra();
    over_tuples(&mut rep, model.num_lines(), scope, |[a, b]| {
        let c = cross(alg, &model.lines[a], &model.lines[b]);
        (model.neighbor_ll.get(a, b) == is_admissible(alg, &c)).then(|| Witness::new("neighboring disagrees with the cross product").lines([a, b]))
    });
    rep
}

/// (N2) For non-neighboring lines, the common solutions of the two line
/// equations are exactly the V-multiples of `(A,B,C)`.
pub fn check_n2(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N2", "neighbor lemma N2: solutions of two line equations are multiples of (A,B,C)");
    let alg = model.algebra();
    let size = alg.size();
    over_tuples(&mut rep, model.num_lines(), scope, |[a, b]| {
        if model.neighbor_ll.get(a, b) {
            return None;
        }
        let (l1, l2) = (&model.lines[a], &model.lines[b]);
        let abc = cross(alg, l1, l2);
        let mut multiples: Vec<Triple> = alg.elements().map(|v| scale_triple(alg, v, &abc)).collect();
        multiples.sort();
        multiples.dedup();
        let mut solutions = vec![];
        for c in 0..size * size * size {
            let t = [alg.from_index(c / (size * size)), alg.from_index(c / size % size), alg.from_index(c % size)];
            if dot(alg, &t, l1).is_zero() && dot(alg, &t, l2).is_zero() {
                solutions.push(t);
            }
        }
        (solutions != multiples).then(|| Witness::new("solution set is not the V-multiples of (A,B,C)").lines([a, b]))
    });
    rep
}

/// (N3) Non-neighboring lines share exactly the point `V*(A,B,C)`, and a
/// point of the first line neighboring the second neighbors that point.
pub fn check_n3(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N3", "neighbor lemma N3: unique intersection of non-neighboring lines");
    let alg = model.algebra();
    over_tuples(&mut rep, model.num_lines(), scope, |[a, b]| {
        if model.neighbor_ll.get(a, b) {
            return None;
        }
        let common = model.common_points(a, b);
        let expected = model.point_index(&cross(alg, &model.lines[a], &model.lines[b]));
        let Some(x) = expected.filter(|&x| common == [x]) else {
            return Some(Witness::new("intersection is not the single point V*(A,B,C)").lines([a, b]).points(common));
        };
        model
            .line_row(a)
            .into_iter()
            .find(|&p| model.neighbor_pl.get(p, b) && !model.neighbor_pp.get(p, x))
            .map(|p| Witness::new("point neighbors the second line but not the intersection").points([p, x]).lines([a, b]))
    });
    rep
}

/// (N4) No point neighbors every point of a line.
pub fn check_n4(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N4", "neighbor lemma N4: no point neighbors all points of a line");
    over_tuples(&mut rep, model.num_points(), scope, |[p, l]| {
        let row = model.line_row(l);
        (row.iter().all(|&x| model.neighbor_pp.get(p, x))).then(|| Witness::new("point neighbors every point of the line").points([p]).lines([l]))
    });
    rep
}

/// (N5) `P ~ L` iff P neighbors a point of L iff L neighbors a line through P.
pub fn check_n5(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N5", "neighbor lemma N5: point-line neighboring via points and lines");
    let alg = model.algebra();
    over_tuples(&mut rep, model.num_points(), scope, |[p, l]| {
        let stored = model.neighbor_pl.get(p, l);
        let algebraic = !alg.is_unit(dot(alg, &model.lines[l], &model.points[p]));
        let via_points = model.line_row(l).into_iter().any(|x| model.neighbor_pp.get(p, x));
        let via_lines = model.point_row(p).into_iter().any(|m| model.neighbor_ll.get(l, m));
        (stored != algebraic || stored != via_points || stored != via_lines)
            .then(|| Witness::new(format!("pl={stored} algebraic={algebraic} points={via_points} lines={via_lines}")).points([p]).lines([l]))
    });
    rep
}

/// (N6) Lines are neighboring iff they share at least two points.
pub fn check_n6(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N6", "neighbor lemma N6: neighboring lines share at least two points");
    over_tuples(&mut rep, model.num_lines(), scope, |[a, b]| {
        let shared = model.common_points(a, b).len();
        (model.neighbor_ll.get(a, b) != (shared >= 2)).then(|| Witness::new(format!("{shared} common points")).lines([a, b]))
    });
    rep
}

/// Triangle lemma: a proper ordered triangle iff, after reordering, two
/// points are non-neighboring and the third does not neighbor their join.
pub fn check_triangle(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("triangle", "triangle lemma: proper ordered triangles via one join");
    let joins = Joins::new(model);
    over_tuples(&mut rep, model.num_points(), scope, |p: [usize; 3]| {
        let by_def = triangle_by_definition(model, &joins, p);
        let weak = [[0, 1, 2], [1, 2, 0], [0, 2, 1]].iter().any(|&[i, j, k]| {
            !model.neighbor_pp.get(p[i], p[j]) && joins.get(p[i], p[j]).is_some_and(|l| !model.neighbor_pl.get(p[k], l))
        });
        (by_def != weak).then(|| Witness::new(format!("definition={by_def} weak condition={weak}")).points(p))
    });
    rep
}

/// (N7) The points of the join of non-neighboring `P1, P2` are the
/// combinations `a1 P1 + a2 P2` with at most one coefficient in K r and at
/// most one in K s, each such combination being admissible.
pub fn check_n7(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("N7", "neighbor lemma N7: points of a line as combinations");
    let alg = model.algebra();
    let joins = Joins::new(model);
    let zlines: Vec<Vec<AlgElem>> = [alg.r(), alg.s()]
        .iter()
        .map(|&z| alg.field().elements().map(|k| alg.scale(k, z)).collect())
        .collect();
    let allowed = |a1: &AlgElem, a2: &AlgElem| !zlines.iter().any(|zl| zl.contains(a1) && zl.contains(a2));
    over_tuples(&mut rep, model.num_points(), scope, |[p1, p2]| {
        if model.neighbor_pp.get(p1, p2) {
            return None;
        }
        let Some(l) = joins.get(p1, p2) else {
            return Some(Witness::new("non-neighboring points without a unique join").points([p1, p2]));
        };
        let mut combos = vec![];
        for a1 in alg.elements() {
            for a2 in alg.elements().filter(|a2| allowed(&a1, a2)) {
                let t = add_triples(alg, &scale_triple(alg, a1, &model.points[p1]), &scale_triple(alg, a2, &model.points[p2]));
                match model.point_index(&t) {
                    Some(x) => combos.push(x),
                    None => return Some(Witness::new("inadmissible combination").points([p1, p2])),
                }
            }
        }
        combos.sort_unstable();
        combos.dedup();
        (combos != model.line_row(l)).then(|| Witness::new("combinations differ from the points of the join").points([p1, p2]).lines([l]))
    });
    rep
}

/// Determinant criterion versus the definition of proper quadrangles.
pub fn check_quadrangle_criterion(model: &PlaneModel, scope: Scope) -> AxiomReport {
    let mut rep = AxiomReport::new("quadrangle_criterion", "determinant criterion for proper ordered quadrangles");
    let joins = Joins::new(model);
    over_tuples(&mut rep, model.num_points(), scope, |p: [usize; 4]| {
        let algebraic = model.is_proper_quadrangle(p);
        let geometric = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
            .iter()
            .all(|t| triangle_by_definition(model, &joins, [p[t[0]], p[t[1]], p[t[2]]]));
        (algebraic != geometric).then(|| Witness::new(format!("determinant={algebraic} definition={geometric}")).points(p))
    });
    rep
}

/// The lemma checkers in order N1, N2, N3, N4, N5, N6, triangle, N7.
pub fn check_neighbor_lemmas(model: &PlaneModel, scope: Scope) -> Vec<AxiomReport> {
    vec![
        check_n1(model, scope),
        check_n2(model, scope),
        check_n3(model, scope),
        check_n4(model, scope),
        check_n5(model, scope),
        check_n6(model, scope),
        check_triangle(model, scope),
        check_n7(model, scope),
    ]
}

/// Corrupted copies of a model, each designed to break specific checkers.
pub mod mutations {
    use super::*;

    /// Flips one off-diagonal line-line neighbor entry (both directions).
    pub fn flip_line_neighbor(model: &PlaneModel) -> PlaneModel {
        let mut m = model.clone();
        let (a, b) = first_pair(model, |a, b| a != b && !model.neighbor_ll.get(a, b));
        m.neighbor_ll.toggle(a, b);
        m.neighbor_ll.toggle(b, a);
        m
    }

    /// Marks one neighboring pair of distinct lines as non-neighboring.
    pub fn hide_line_neighbor(model: &PlaneModel) -> PlaneModel {
        let mut m = model.clone();
        let (a, b) = first_pair(model, |a, b| a != b && model.neighbor_ll.get(a, b));
        m.neighbor_ll.set(a, b, false);
        m.neighbor_ll.set(b, a, false);
        m
    }

    /// Removes one incidence.
    pub fn drop_incidence(model: &PlaneModel) -> PlaneModel {
        let mut m = model.clone();
        let l = model.point_row(0)[0];
        m.incidence.set(0, l, false);
        m
    }

    /// Declares every pair of points neighboring.
    pub fn all_points_neighboring(model: &PlaneModel) -> PlaneModel {
        let mut m = model.clone();
        for a in 0..model.num_points() {
            for b in 0..model.num_points() {
                m.neighbor_pp.set(a, b, true);
            }
        }
        m
    }

    /// Flips every point-line neighbor entry of point 0 except those of
    /// the lines through it.
    pub fn flip_point_line_neighbor(model: &PlaneModel) -> PlaneModel {
        let mut m = model.clone();
        for l in 0..model.num_lines() {
            if !model.incident(0, l) {
                m.neighbor_pl.toggle(0, l);
            }
        }
        m
    }

    fn first_pair(model: &PlaneModel, pred: impl Fn(usize, usize) -> bool) -> (usize, usize) {
        let n = model.num_lines();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| pred(a, b))
            .expect("a suitable pair exists")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::quadalg::{Algebra, Kind};
    use crate::ringplane::build_plane;

    fn plane(p: u32, kind: Kind) -> PlaneModel {
        build_plane(&Algebra::of_kind(Field::prime(p).unwrap(), kind).unwrap())
    }

    #[test]
    fn lemmas_hold_exhaustively_on_dual_f2() {
        let m = plane(2, Kind::Dual);
        for rep in check_neighbor_lemmas(&m, Scope::Exhaustive) {
            assert!(rep.holds, "{}: {:?}", rep.id, rep.witnesses);
        }
    }

    #[test]
    fn quadrangle_criterion_on_extension_sample() {
        let m = plane(2, Kind::Extension);
        let rep = check_quadrangle_criterion(&m, Scope::Random { samples: 5000, seed: 3 });
        assert!(rep.holds, "{:?}", rep.witnesses);
    }

    #[test]
    fn mutations_are_detected() {
        let m = plane(2, Kind::Dual);
        let ex = Scope::Exhaustive;
        let flipped = mutations::flip_line_neighbor(&m);
        assert!(!check_n1(&flipped, ex).holds);
        assert!(!check_n6(&flipped, ex).holds);
        assert!(!check_n2(&mutations::hide_line_neighbor(&m), ex).holds);
        let dropped = mutations::drop_incidence(&m);
        assert!(!check_n3(&dropped, ex).holds);
        assert!(!check_n7(&dropped, ex).holds);
        assert!(!check_n4(&mutations::all_points_neighboring(&m), ex).holds);
        let pl = mutations::flip_point_line_neighbor(&m);
        assert!(!check_n5(&pl, ex).holds);
        assert!(!check_triangle(&pl, ex).holds);
    }
}
