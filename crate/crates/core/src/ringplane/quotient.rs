//! Neighbor classes and the quotient incidence structures they carry.

use super::{neighbor_key, zero_divisor_generators, PlaneModel};
use crate::bits::BitMatrix;
use crate::quadalg::AlgElem;
use serde::Serialize;
use std::collections::BTreeMap;

/// Classes of the relation "z P and z Q are K-proportional" for one
/// zero-divisor generator z, with the induced incidence.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentQuotient {
    pub generator: AlgElem,
    pub point_classes: Vec<Vec<usize>>,
    pub line_classes: Vec<Vec<usize>>,
    /// Class incidence: some point of the class lies on some line of the class.
    pub incidence: BitMatrix,
    /// `Some(q)` when the quotient is a projective plane of order q.
    pub projective_order: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeighborQuotient {
    pub transitive: bool,
    /// Points `(a, b, c)` with `a ~ b`, `b ~ c` and `a !~ c`.
    pub non_transitive_witness: Option<[usize; 3]>,
    /// Classes of the point-point relation when it is an equivalence.
    pub point_classes: Option<Vec<Vec<usize>>>,
    pub line_classes: Option<Vec<Vec<usize>>>,
    pub components: Vec<ComponentQuotient>,
    /// With two components, whether `P -> (class_r(P), class_s(P))` is a
    /// bijection onto the product of the class sets.
    pub product_bijective: Option<bool>,
}

fn classes_by_key(model: &PlaneModel, z: AlgElem, triples: &[super::Triple]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut groups: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for (i, t) in triples.iter().enumerate() {
        groups.entry(neighbor_key(model.algebra(), z, t)).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort();
    let mut of = vec![0; triples.len()];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            of[m] = c;
        }
    }
    (classes, of)
}

/// Whether the incidence structure is a projective plane, returning its order.
pub fn projective_plane_order(inc: &BitMatrix) -> Option<usize> {
    let (np, nl) = (inc.rows(), inc.cols());
    if np != nl || np < 7 {
        return None;
    }
    let k = inc.col_count(0);
    if k < 3 || (k - 1) * (k - 1) + k != np {
        return None;
    }
    let t = inc.transpose();
    let lines_ok = (0..nl).all(|l| t.row_count(l) == k) && (0..nl).all(|a| (a + 1..nl).all(|b| t.row_overlap(a, b) == 1));
    let points_ok = (0..np).all(|p| inc.row_count(p) == k) && (0..np).all(|a| (a + 1..np).all(|b| inc.row_overlap(a, b) == 1));
    (lines_ok && points_ok).then_some(k - 1)
}

fn component(model: &PlaneModel, z: AlgElem) -> ComponentQuotient {
    let (point_classes, pof) = classes_by_key(model, z, &model.points);
    let (line_classes, lof) = classes_by_key(model, z, &model.lines);
    let mut incidence = BitMatrix::new(point_classes.len(), line_classes.len());
    for p in 0..model.num_points() {
        for l in model.point_row(p) {
            incidence.set(pof[p], lof[l], true);
        }
    }
    let projective_order = projective_plane_order(&incidence);
    ComponentQuotient { generator: z, point_classes, line_classes, incidence, projective_order }
}

fn find_non_transitive(m: &BitMatrix) -> Option<[usize; 3]> {
    let n = m.rows();
    for b in 0..n {
        let row = m.row(b);
        for &a in &row {
            for &c in &row {
                if !m.get(a, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

fn classes_of(m: &BitMatrix) -> Vec<Vec<usize>> {
    let mut seen = vec![false; m.rows()];
    let mut out = vec![];
    for a in 0..m.rows() {
        if !seen[a] {
            let class = m.row(a);
            for &b in &class {
                seen[b] = true;
            }
            out.push(class);
        }
    }
    out
}

pub fn neighbor_classes(model: &PlaneModel) -> NeighborQuotient {
    let witness = find_non_transitive(&model.neighbor_pp);
    let transitive = witness.is_none() && find_non_transitive(&model.neighbor_ll).is_none();
    let components: Vec<ComponentQuotient> =
        zero_divisor_generators(model.algebra()).into_iter().map(|z| component(model, z)).collect();
    let product_bijective = (components.len() == 2).then(|| {
        let (a, b) = (&components[0], &components[1]);
        let mut of = vec![[usize::MAX; 2]; model.num_points()];
        for (k, comp) in [a, b].iter().enumerate() {
            for (c, members) in comp.point_classes.iter().enumerate() {
                for &p in members {
                    of[p][k] = c;
                }
            }
        }
        let mut pairs: Vec<[usize; 2]> = of.clone();
        pairs.sort();
        pairs.dedup();
        pairs.len() == model.num_points() && pairs.len() == a.point_classes.len() * b.point_classes.len()
    });
    NeighborQuotient {
        transitive,
        non_transitive_witness: witness,
        point_classes: transitive.then(|| classes_of(&model.neighbor_pp)),
        line_classes: transitive.then(|| classes_of(&model.neighbor_ll)),
        components,
        product_bijective,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::quadalg::{Algebra, Kind};
    use crate::ringplane::build_plane;

    fn plane(p: u32, e: u32, kind: Kind) -> PlaneModel {
        build_plane(&Algebra::of_kind(Field::new(p, e, None).unwrap(), kind).unwrap())
    }

    #[test]
    fn dual_classes() {
        let m = plane(2, 1, Kind::Dual);
        let nq = neighbor_classes(&m);
        assert!(nq.transitive);
        let classes = nq.point_classes.unwrap();
        assert_eq!(classes.len(), 7);
        assert!(classes.iter().all(|c| c.len() == 4));
        assert_eq!(nq.components.len(), 1);
        assert_eq!(nq.components[0].projective_order, Some(2));
        assert_eq!(nq.components[0].point_classes, classes);
    }

    #[test]
    fn extension_singletons() {
        let m = plane(2, 1, Kind::Extension);
        let nq = neighbor_classes(&m);
        assert!(nq.transitive);
        assert_eq!(nq.point_classes.unwrap().len(), 21);
        assert!(nq.components.is_empty());
    }

    #[test]
    fn split_is_product_of_two_planes() {
        let m = plane(2, 1, Kind::Split);
        let nq = neighbor_classes(&m);
        assert!(!nq.transitive);
        let [a, b, c] = nq.non_transitive_witness.unwrap();
        assert!(m.neighbor_pp.get(a, b) && m.neighbor_pp.get(b, c) && !m.neighbor_pp.get(a, c));
        assert_eq!(nq.components.len(), 2);
        for comp in &nq.components {
            assert_eq!(comp.projective_order, Some(2));
            assert!(comp.point_classes.iter().all(|c| c.len() == 7));
        }
        assert_eq!(nq.product_bijective, Some(true));
    }

    #[test]
    fn fano_is_detected() {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        let mut inc = BitMatrix::new(7, 7);
        for (l, pts) in lines.iter().enumerate() {
            for &p in pts {
                inc.set(p, l, true);
            }
        }
        assert_eq!(projective_plane_order(&inc), Some(2));
        inc.toggle(0, 0);
        assert_eq!(projective_plane_order(&inc), None);
    }
}
