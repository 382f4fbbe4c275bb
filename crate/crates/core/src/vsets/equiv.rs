//! Projective equivalences between point sets with a known correspondence.

use super::reference::{quadric_veronese_points, segre_points, veronese_map};
use super::{build_vset_parametrization, VeroneseanModel, VsetError};
use crate::gf::{Fe, Field};
use crate::projgeom::linalg::{self, Matrix};
use crate::projgeom::{apply, PGPoint, Subspace};
use crate::quadalg::{AlgElem, Kind};
use crate::ringplane::PlaneModel;
use serde::Serialize;
use std::collections::HashSet;

/// The span of `pts` and the coordinates of each point relative to the
/// echelon basis of that span.
pub fn recoordinatize(f: &Field, pts: &[PGPoint]) -> (Subspace, Vec<PGPoint>) {
    let ambient = pts.first().map_or(0, |p| p.ambient());
    let span = Subspace::span(f, ambient, pts);
    let coords = pts
        .iter()
        .map(|p| {
            let c = span.coords_of(f, p.coords()).expect("point lies in its span");
            PGPoint::new(f, c).expect("nonzero point has nonzero coordinates")
        })
        .collect();
    (span, coords)
}

/// A projectivity `A` with `A src[i] = dst[i]` for every `i`, if one
/// exists. Both lists must span their ambient spaces.
///
/// With `B` a basis chosen among `src` and `D` the matching targets, any
/// solution has the form `D diag(l) B^-1`. Every other pair imposes linear
/// conditions on `l`, so the candidates form a subspace, searched for a
/// vector without zero entries. The result is verified on every pair.
pub fn fit_equivalence(f: &Field, src: &[PGPoint], dst: &[PGPoint]) -> Option<Matrix> {
    if src.len() != dst.len() || src.is_empty() {
        return None;
    }
    let n = src[0].ambient();
    if dst[0].ambient() != n {
        return None;
    }
    // greedy basis among the sources
    let mut basis: Vec<usize> = vec![];
    let mut rows: Matrix = vec![];
    for (i, p) in src.iter().enumerate() {
        let mut trial = rows.clone();
        trial.push(p.coords().to_vec());
        if linalg::rank(f, trial.clone()) > rows.len() {
            rows = trial;
            basis.push(i);
        }
    }
    if basis.len() != n + 1 {
        return None;
    }
    let b_cols = linalg::transpose(&rows);
    let b_inv = linalg::inverse(f, &b_cols)?;
    let d_vecs: Vec<&[Fe]> = basis.iter().map(|&i| dst[i].coords()).collect();
    if linalg::rank(f, d_vecs.iter().map(|v| v.to_vec()).collect()) != n + 1 {
        return None;
    }
    // conditions on l: sum_k l_k c_k d_k is proportional to dst[j]
    let mut conds: Matrix = vec![];
    for (j, p) in src.iter().enumerate() {
        if basis.contains(&j) {
            continue;
        }
        let c = linalg::mat_vec(f, &b_inv, p.coords());
        let e = dst[j].coords();
        let a0 = e.iter().position(|x| !x.is_zero()).unwrap();
        for b in 0..=n {
            if b == a0 {
                continue;
            }
            // w_b e_a0 - w_a0 e_b = 0 with w = sum_k l_k c_k d_k
            let row: Vec<Fe> = (0..=n)
                .map(|k| {
                    let w = |a: usize| f.mul(c[k], d_vecs[k][a]);
                    f.sub(f.mul(w(b), e[a0]), f.mul(w(a0), e[b]))
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                conds.push(row);
            }
        }
        if conds.len() > 4 * (n + 1) {
            conds = linalg::rref(f, conds);
        }
    }
    let null = linalg::nullspace(f, conds, n + 1);
    let lambda = nowhere_zero(f, &null)?;
    let d_scaled: Matrix = (0..=n).map(|a| (0..=n).map(|k| f.mul(d_vecs[k][a], lambda[k])).collect()).collect();
    let a = linalg::mat_mul(f, &d_scaled, &b_inv);
    src.iter().zip(dst).all(|(s, d)| &apply(f, &a, s) == d).then_some(a)
}

/// A vector of the row span of `basis` with no zero entry, by search over
/// combinations (first coefficient fixed to 1).
fn nowhere_zero(f: &Field, basis: &Matrix) -> Option<Vec<Fe>> {
    let k = basis.len();
    if k == 0 {
        return None;
    }
    let q = f.order();
    let total = q.checked_pow(k as u32 - 1).filter(|&t| t <= 1 << 20)?;
    (0..total).find_map(|code| {
        let mut v = basis[0].clone();
        let mut c = code;
        for row in &basis[1..] {
            let coef = Fe((c % q) as u8);
            c /= q;
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(coef, r));
            }
        }
        v.iter().all(|x| !x.is_zero()).then_some(v)
    })
}

/// Result of comparing two point sets under a fitted projectivity.
#[derive(Clone, Debug, Serialize)]
pub struct ModelEquivalence {
    pub matrix: Option<Matrix>,
    pub points_checked: usize,
    pub points_matched: usize,
    pub subspaces_checked: usize,
    pub subspaces_matched: usize,
}

impl ModelEquivalence {
    pub fn holds(&self) -> bool {
        self.matrix.is_some() && self.points_matched == self.points_checked && self.subspaces_matched == self.subspaces_checked
    }

    fn failed(points: usize, subspaces: usize) -> Self {
        ModelEquivalence { matrix: None, points_checked: points, points_matched: 0, subspaces_checked: subspaces, subspaces_matched: 0 }
    }
}

/// Fits a projectivity from `a` to `b` through the ring point
/// correspondence and checks it on every point and every member of Xi.
pub fn model_equivalence(a: &VeroneseanModel, b: &VeroneseanModel) -> ModelEquivalence {
    let f = a.field();
    let n = a.pt_map.len();
    let src: Vec<PGPoint> = (0..n).map(|p| a.point(p).clone()).collect();
    let dst: Vec<PGPoint> = (0..n).map(|p| b.point(p).clone()).collect();
    let lines = a.xi.len();
    let Some(m) = fit_equivalence(f, &src, &dst) else {
        return ModelEquivalence::failed(n, lines);
    };
    let points_matched = src.iter().zip(&dst).filter(|(s, d)| &&apply(f, &m, s) == d).count();
    let subspaces_matched =
        a.xi.iter().zip(&b.xi).filter(|(x, y)| x.ring_line == y.ring_line && x.subspace.image(f, &m) == y.subspace).count();
    ModelEquivalence { matrix: Some(m), points_checked: n, points_matched, subspaces_checked: lines, subspaces_matched }
}

/// Checks that a model is projectively a Segre variety of type (2,2),
/// using `V = K x K` through the two homomorphisms `x + y i -> x + y a`
/// for the roots `a` of `X^2 - tX + n`. The Xi members must map to spans
/// of products of two lines.
pub fn segre_equivalence(model: &VeroneseanModel, plane: &PlaneModel) -> Result<ModelEquivalence, VsetError> {
    let alg = model.algebra();
    if alg.kind() != Kind::Split {
        return Err(VsetError::Invariant(format!("Segre identification needs a split algebra, got {}", alg.kind())));
    }
    let f = alg.field();
    let roots: Vec<Fe> = f.elements().filter(|&a| alg.norm(alg.sub(alg.scalar(a), alg.i())).is_zero()).collect();
    let [a1, a2] = roots[..] else {
        return Err(VsetError::Invariant("split algebra without two roots".into()));
    };
    let phi = |a: Fe, e: AlgElem| f.add(e.x, f.mul(e.y, a));
    let tensor = |u: &[Fe], w: &[Fe]| -> Vec<Fe> { u.iter().flat_map(|&x| w.iter().map(move |&y| f.mul(x, y))).collect() };
    let image = |t: &crate::ringplane::Triple| -> Result<PGPoint, VsetError> {
        Ok(PGPoint::new(f, tensor(&t.map(|e| phi(a1, e)), &t.map(|e| phi(a2, e))))?)
    };
    let dst: Vec<PGPoint> = plane.points.iter().map(image).collect::<Result<_, _>>()?;
    let reference: HashSet<PGPoint> = segre_points(2, 2, f)?.into_iter().collect();
    let n = dst.len();
    let lines = plane.num_lines();
    let distinct: HashSet<&PGPoint> = dst.iter().collect();
    if distinct.len() != reference.len() || dst.iter().any(|p| !reference.contains(p)) {
        return Ok(ModelEquivalence::failed(n, lines));
    }
    let src: Vec<PGPoint> = (0..n).map(|p| model.point(p).clone()).collect();
    let Some(m) = fit_equivalence(f, &src, &dst) else {
        return Ok(ModelEquivalence::failed(n, lines));
    };
    let points_matched = src.iter().zip(&dst).filter(|(s, d)| &&apply(f, &m, s) == d).count();
    let subspaces_matched = model
        .xi
        .iter()
        .filter(|x| {
            let want = Subspace::span(f, 8, plane.line_row(x.ring_line).iter().map(|&p| &dst[p]));
            want.dim() == 3 && x.subspace.image(f, &m) == want
        })
        .count();
    Ok(ModelEquivalence { matrix: Some(m), points_checked: n, points_matched, subspaces_checked: lines, subspaces_matched })
}

/// For a dual algebra in odd characteristic, the parametrization with
/// zeta = i has span of dimension 5 and is projectively the quadric
/// Veronese variety of the real parts. Returns the span dimension and the
/// equivalence on the recoordinatized image.
pub fn quadric_veronese_equivalence(plane: &PlaneModel) -> Result<(isize, ModelEquivalence), VsetError> {
    let alg = plane.algebra();
    let f = alg.field();
    if alg.kind() != Kind::Dual || f.characteristic() == 2 {
        return Err(VsetError::Invariant("quadric Veronese identification needs a dual algebra in odd characteristic".into()));
    }
    let par = build_vset_parametrization(plane, alg.i())?;
    let dim = par.span.dim();
    let (_, src) = recoordinatize(f, &par.images);
    let dst: Vec<PGPoint> = plane.points.iter().map(|t| veronese_map(f, t.map(|e| e.x))).collect();
    let n = src.len();
    if src[0].ambient() != 5 {
        return Ok((dim, ModelEquivalence::failed(n, 0)));
    }
    let reference: HashSet<PGPoint> = quadric_veronese_points(f).into_iter().collect();
    let image: HashSet<&PGPoint> = dst.iter().collect();
    if image.len() != reference.len() || !image.iter().all(|p| reference.contains(*p)) {
        return Ok((dim, ModelEquivalence::failed(n, 0)));
    }
    let Some(m) = fit_equivalence(f, &src, &dst) else {
        return Ok((dim, ModelEquivalence::failed(n, 0)));
    };
    let points_matched = src.iter().zip(&dst).filter(|(s, d)| &&apply(f, &m, s) == d).count();
    Ok((dim, ModelEquivalence { matrix: Some(m), points_checked: n, points_matched, subspaces_checked: 0, subspaces_matched: 0 }))
}

/// The member of Xi for the ring line `[0,0,1]` in the matrices model.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceLineCheck {
    pub ring_line: usize,
    /// Its 3-space is `X2 = X5 = X6 = X7 = X8 = 0`.
    pub subspace_matches: bool,
    /// Every point of the member satisfies `X0 X1 = X3^2 + t X3 X4 + n X4^2`.
    pub equation_holds: bool,
    /// The zero set of the equation in the 3-space is the member, plus the
    /// vertex for a tube.
    pub zero_set_matches: bool,
}

impl ReferenceLineCheck {
    pub fn holds(&self) -> bool {
        self.subspace_matches && self.equation_holds && self.zero_set_matches
    }
}

pub fn reference_line_check(model: &VeroneseanModel, plane: &PlaneModel) -> Result<ReferenceLineCheck, VsetError> {
    let alg = model.algebra();
    let f = alg.field();
    let line = [AlgElem::ZERO, AlgElem::ZERO, AlgElem::ONE];
    let l = plane.line_index(&line).ok_or(VsetError::Inadmissible)?;
    let member = model.xi.iter().find(|m| m.ring_line == l).ok_or_else(|| VsetError::Invariant("missing Xi member".into()))?;
    let expected = Subspace::coordinate(8, &[2, 5, 6, 7, 8]);
    let (t, n) = (alg.t(), alg.n());
    let eq = |p: &PGPoint| {
        let x = p.coords();
        let lhs = f.mul(x[0], x[1]);
        let rhs = f.add(f.add(f.mul(x[3], x[3]), f.mul(t, f.mul(x[3], x[4]))), f.mul(n, f.mul(x[4], x[4])));
        lhs == rhs
    };
    let pts: HashSet<&PGPoint> = member.points.iter().map(|&i| &model.x[i]).collect();
    let mut zero: HashSet<PGPoint> = member.subspace.points(f).into_iter().filter(eq).collect();
    if let Some(v) = &member.quadric.vertex {
        zero.remove(v);
    }
    Ok(ReferenceLineCheck {
        ring_line: l,
        subspace_matches: member.subspace == expected,
        equation_holds: pts.iter().all(|p| eq(p)),
        zero_set_matches: zero.len() == pts.len() && zero.iter().all(|p| pts.contains(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::enumerate_points;

    #[test]
    fn fit_recovers_a_known_matrix() {
        let f = Field::prime(3).unwrap();
        let a: Matrix = vec![
            vec![Fe(1), Fe(2), Fe(0)],
            vec![Fe(0), Fe(1), Fe(1)],
            vec![Fe(1), Fe(0), Fe(2)],
        ];
        assert!(linalg::inverse(&f, &a).is_some());
        let src = enumerate_points(2, &f);
        let dst: Vec<PGPoint> = src.iter().map(|p| apply(&f, &a, p)).collect();
        let m = fit_equivalence(&f, &src, &dst).unwrap();
        assert!(src.iter().zip(&dst).all(|(s, d)| &apply(&f, &m, s) == d));
        let mut bad = dst.clone();
        bad.swap(3, 7);
        assert!(fit_equivalence(&f, &src, &bad).is_none());
    }

    #[test]
    fn fit_without_a_frame_in_general_position() {
        // the 7 points of PG(2,2) on three coordinate-like lines: no frame
        // needed, the correspondence alone decides
        let f = Field::prime(2).unwrap();
        let src = enumerate_points(2, &f);
        let perm = [1, 0, 2];
        let dst: Vec<PGPoint> = src.iter().map(|p| PGPoint::new(&f, perm.iter().map(|&i| p.coords()[i]).collect()).unwrap()).collect();
        assert!(fit_equivalence(&f, &src, &dst).is_some());
    }

    #[test]
    fn recoordinatize_keeps_incidence() {
        let f = Field::prime(2).unwrap();
        let pts: Vec<PGPoint> = enumerate_points(2, &f)
            .into_iter()
            .map(|p| PGPoint::new(&f, [p.coords(), &[Fe::ZERO; 2]].concat()).unwrap())
            .collect();
        let (span, c) = recoordinatize(&f, &pts);
        assert_eq!(span.dim(), 2);
        assert!(c.iter().all(|p| p.ambient() == 2));
        assert_eq!(c.iter().collect::<HashSet<_>>().len(), 7);
    }
}
