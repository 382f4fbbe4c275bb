//! The action of GL_3(V) on points and lines, and its transitivity on
//! proper ordered quadrangles.

use super::{PlaneModel, RingError, Triple};
use crate::quadalg::{AlgElem, Algebra};
use crate::report::{AxiomReport, Witness};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

pub type Mat3 = [[AlgElem; 3]; 3];

/// A 3x3 matrix over V with unit determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl3Elem {
    m: Mat3,
    inv: Mat3,
}

impl Gl3Elem {
    pub fn new(alg: &Algebra, m: Mat3) -> Result<Self, RingError> {
        let inv = inverse3(alg, &m).ok_or(RingError::NotUnitDeterminant)?;
        Ok(Gl3Elem { m, inv })
    }

    pub fn identity() -> Self {
        let o = AlgElem::ONE;
        let z = AlgElem::ZERO;
        let m = [[o, z, z], [z, o, z], [z, z, o]];
        Gl3Elem { m, inv: m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// `M* = (M^{-1})^T`, the matrix acting on line coordinates.
    pub fn dual(&self) -> Mat3 {
        transpose(&self.inv)
    }
}

pub fn det3(alg: &Algebra, m: &Mat3) -> AlgElem {
    let c = cofactor_row(alg, &m[1], &m[2]);
    (0..3).fold(AlgElem::ZERO, |acc, j| alg.add(acc, alg.mul(m[0][j], c[j])))
}

/// Cofactors of the first row given rows two and three.
fn cofactor_row(alg: &Algebra, b: &[AlgElem; 3], c: &[AlgElem; 3]) -> [AlgElem; 3] {
    let m = |x, y| alg.mul(x, y);
    [
        alg.sub(m(b[1], c[2]), m(b[2], c[1])),
        alg.sub(m(b[2], c[0]), m(b[0], c[2])),
        alg.sub(m(b[0], c[1]), m(b[1], c[0])),
    ]
}

fn transpose(m: &Mat3) -> Mat3 {
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[j][i]))
}

/// Adjugate over the determinant, when the determinant is a unit.
pub(crate) fn inverse3(alg: &Algebra, m: &Mat3) -> Option<Mat3> {
    let d = det3(alg, m);
    let dinv = alg.inverse(d).ok()?;
    // column j of the adjugate is the cofactor row of the other two rows
    let cof = [cofactor_row(alg, &m[1], &m[2]), cofactor_row(alg, &m[2], &m[0]), cofactor_row(alg, &m[0], &m[1])];
    Some([0, 1, 2].map(|i| [0, 1, 2].map(|j| alg.mul(cof[j][i], dinv))))
}

/// Row vector times matrix.
pub fn row_times(alg: &Algebra, v: &Triple, m: &Mat3) -> Triple {
    [0, 1, 2].map(|j| (0..3).fold(AlgElem::ZERO, |acc, k| alg.add(acc, alg.mul(v[k], m[k][j]))))
}

#[cfg(test)]
fn mat_mul(alg: &Algebra, a: &Mat3, b: &Mat3) -> Mat3 {
    [0, 1, 2].map(|i| row_times(alg, &a[i], b))
}

/// `V*(x,y,z) -> V*((x y z) M)`.
pub fn gl3_apply(model: &PlaneModel, g: &Gl3Elem, p: usize) -> usize {
    let t = row_times(model.algebra(), &model.points[p], &g.m);
    model.point_index(&t).expect("unit-determinant matrices preserve admissibility")
}

/// `V*[a,b,c] -> V*([a b c] M*)`.
pub fn gl3_apply_line(model: &PlaneModel, g: &Gl3Elem, l: usize) -> usize {
    let t = row_times(model.algebra(), &model.lines[l], &g.dual());
    model.line_index(&t).expect("unit-determinant matrices preserve admissibility")
}

impl PlaneModel {
    /// A uniformly random element of GL_3(V), by rejection sampling.
    pub fn random_gl3(&self, rng: &mut impl rand::Rng) -> Gl3Elem {
        let alg = self.algebra();
        loop {
            let m: Mat3 = [0, 1, 2].map(|_| [0, 1, 2].map(|_| alg.from_index(rng.gen_range(0..alg.size()))));
            if let Ok(g) = Gl3Elem::new(alg, m) {
                return g;
            }
        }
    }

    /// The matrix with rows `a_i P_i` mapping the standard quadrangle
    /// onto the given proper quadrangle.
    pub fn quadrangle_matrix(&self, p: [usize; 4]) -> Result<Gl3Elem, RingError> {
        let (_, a) = self.quadrangle_coefficients(p).ok_or(RingError::NotUnitDeterminant)?;
        if !a.iter().all(|&x| self.algebra().is_unit(x)) {
            return Err(RingError::NotUnitDeterminant);
        }
        let alg = self.algebra();
        let m = [0, 1, 2].map(|i| super::scale_triple(alg, a[i], &self.points[p[i]]));
        Gl3Elem::new(alg, m)
    }

    /// `(E1, E2, E3, E)` from the standard basis.
    pub fn standard_quadrangle(&self) -> [usize; 4] {
        let (o, z) = (AlgElem::ONE, AlgElem::ZERO);
        [[o, z, z], [z, o, z], [z, z, o], [o, o, o]].map(|t| self.point_index(&t).expect("standard points are admissible"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub count_quadrangles: u64,
    /// Number of 3x3 matrices over V with unit determinant.
    pub group_order: u64,
    /// Matrices fixing each point of the standard quadrangle.
    pub stabilizer_order: u64,
    /// Scalar matrices `uI`, which fix every point.
    pub scalar_matrices: u64,
    /// Every quadrangle is the image of the standard one.
    pub transitive: bool,
    /// `count_quadrangles == group_order` and a trivial stabilizer.
    pub sharp: bool,
    /// `count_quadrangles * stabilizer_order == group_order`.
    pub orbit_stabilizer: bool,
}

/// Largest q for which the group and quadrangles are enumerated.
pub const ENUMERATION_MAX_Q: usize = 3;

/// Counts GL_3(V) by enumerating the last two rows and, for each cofactor
/// triple, the first rows giving a unit determinant.
pub fn count_gl3(alg: &Algebra) -> u64 {
    let size = alg.size();
    let elems: Vec<AlgElem> = alg.elements().collect();
    let rows: Vec<[AlgElem; 3]> = (0..size * size * size)
        .map(|c| [elems[c / (size * size)], elems[c / size % size], elems[c % size]])
        .collect();
    let units_for = |cof: &[AlgElem; 3]| -> u64 {
        rows.iter()
            .filter(|a| alg.is_unit((0..3).fold(AlgElem::ZERO, |acc, j| alg.add(acc, alg.mul(a[j], cof[j])))))
            .count() as u64
    };
    rows.par_iter()
        .map(|b| {
            let mut memo: HashMap<[AlgElem; 3], u64> = HashMap::new();
            let mut total = 0;
            for c in &rows {
                let cof = cofactor_row(alg, b, c);
                total += *memo.entry(cof).or_insert_with(|| units_for(&cof));
            }
            total
        })
        .sum()
}

/// Matrices in GL_3(V) fixing E1, E2, E3 and E. A brute-force scan over
/// all matrices when that is small, else over the diagonal matrices that
/// fixing E1, E2, E3 forces.
pub fn standard_stabilizer(model: &PlaneModel) -> Vec<Mat3> {
    let alg = model.algebra();
    let std = model.standard_quadrangle();
    let size = alg.size();
    let fixes = |m: &Mat3| -> bool {
        let Ok(g) = Gl3Elem::new(alg, *m) else { return false };
        std.iter().all(|&p| gl3_apply(model, &g, p) == p)
    };
    if size.pow(9) <= 1 << 18 {
        (0..size.pow(9) as u64)
            .into_par_iter()
            .filter_map(|mut c| {
                let mut m = [[AlgElem::ZERO; 3]; 3];
                for row in m.iter_mut() {
                    for e in row.iter_mut() {
                        *e = alg.from_index((c % size as u64) as usize);
                        c /= size as u64;
                    }
                }
                fixes(&m).then_some(m)
            })
            .collect()
    } else {
        let z = AlgElem::ZERO;
        let mut out = vec![];
        for a in alg.elements() {
            for b in alg.elements() {
                for c in alg.elements() {
                    let m = [[a, z, z], [z, b, z], [z, z, c]];
                    if fixes(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

/// Proper ordered quadrangles by the determinant criterion, pruning on
/// the first three points.
pub fn proper_quadrangles(model: &PlaneModel) -> Vec<[usize; 4]> {
    let n = model.num_points();
    let alg = model.algebra();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|p1| {
            let mut out = vec![];
            for p2 in 0..n {
                if model.neighbor_pp.get(p1, p2) {
                    continue;
                }
                for p3 in 0..n {
                    let m: Mat3 = [model.points[p1], model.points[p2], model.points[p3]];
                    if !alg.is_unit(det3(alg, &m)) {
                        continue;
                    }
                    for p4 in 0..n {
                        if model.is_proper_quadrangle([p1, p2, p3, p4]) {
                            out.push([p1, p2, p3, p4]);
                        }
                    }
                }
            }
            out
        })
        .collect()
}

pub fn quadrangle_transitivity_report(model: &PlaneModel) -> Result<TransitivityReport, RingError> {
    let alg = model.algebra();
    if alg.q() > ENUMERATION_MAX_Q {
        return Err(RingError::SizeGuard(alg.q()));
    }
    let quads = proper_quadrangles(model);
    let std = model.standard_quadrangle();
    let transitive = quads.par_iter().all(|&quad| match model.quadrangle_matrix(quad) {
        Ok(g) => (0..4).all(|i| gl3_apply(model, &g, std[i]) == quad[i]),
        Err(_) => false,
    });
    let count_quadrangles = quads.len() as u64;
    let group_order = count_gl3(alg);
    let stabilizer_order = standard_stabilizer(model).len() as u64;
    let scalar_matrices = model.units().len() as u64;
    Ok(TransitivityReport {
        count_quadrangles,
        group_order,
        stabilizer_order,
        scalar_matrices,
        transitive,
        sharp: transitive && count_quadrangles == group_order && stabilizer_order == 1,
        orbit_stabilizer: count_quadrangles * stabilizer_order == group_order,
    })
}

/// Extends every flag along the chain point, line, point, line, point to a
/// proper ordered quadrangle.
pub fn flag_chain_report(model: &PlaneModel) -> AxiomReport {
    let mut rep = AxiomReport::new("flag_chain", "flag extension proposition for GL_3(V)");
    let n = model.num_points();
    let mut flags = 0usize;
    let failures: Vec<Witness> = (0..n)
        .into_par_iter()
        .flat_map_iter(|p1| {
            model
                .point_row(p1)
                .into_iter()
                .filter_map(|l1| extend_flag(model, p1, l1).err().map(|stage| Witness::new(stage).points([p1]).lines([l1])))
                .collect::<Vec<_>>()
        })
        .collect();
    for p in 0..n {
        flags += model.point_row(p).len();
    }
    rep.absorb(failures);
    rep.stat("flags", flags);
    rep
}

fn extend_flag(model: &PlaneModel, p1: usize, l1: usize) -> Result<[usize; 4], &'static str> {
    let p2 = model
        .line_row(l1)
        .into_iter()
        .find(|&p| !model.neighbor_pp.get(p1, p))
        .ok_or("no point on the line away from P1")?;
    let l2 = model
        .point_row(p2)
        .into_iter()
        .find(|&l| !model.neighbor_ll.get(l1, l))
        .ok_or("no line through P2 away from L1")?;
    let p3 = model
        .line_row(l2)
        .into_iter()
        .find(|&p| model.is_proper_triangle(p1, p2, p))
        .ok_or("no third point completing a proper triangle")?;
    let p4 = (0..model.num_points())
        .find(|&p| model.is_proper_quadrangle([p1, p2, p3, p]))
        .ok_or("no fourth point completing a proper quadrangle")?;
    Ok([p1, p2, p3, p4])
}

/// Whether `g` preserves incidence and the three neighbor relations.
pub fn preserves_structure(model: &PlaneModel, g: &Gl3Elem) -> bool {
    let n = model.num_points();
    let pimg: Vec<usize> = (0..n).map(|p| gl3_apply(model, g, p)).collect();
    let limg: Vec<usize> = (0..n).map(|l| gl3_apply_line(model, g, l)).collect();
    (0..n).all(|a| {
        (0..n).all(|b| {
            model.incident(a, b) == model.incident(pimg[a], limg[b])
                && model.neighbor_pl.get(a, b) == model.neighbor_pl.get(pimg[a], limg[b])
                && model.neighbor_pp.get(a, b) == model.neighbor_pp.get(pimg[a], pimg[b])
                && model.neighbor_ll.get(a, b) == model.neighbor_ll.get(limg[a], limg[b])
        })
    })
}
