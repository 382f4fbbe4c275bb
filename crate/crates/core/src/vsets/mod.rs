//! The V-sets of G(V) in PG(8,q): the constructions by matrices,
//! reduction, juxtaposition and parametrization, and reference varieties
//! used to identify them.

mod equiv;
mod herm;
mod reference;

pub use equiv::{
    fit_equivalence, model_equivalence, quadric_veronese_equivalence, recoordinatize, reference_line_check, segre_equivalence,
    ModelEquivalence, ReferenceLineCheck,
};
pub use herm::{herm_coords, is_rank1_herm, rank1_roundtrip, HermMat3};
pub use reference::{conic_cross_ratio, quadric_veronese_points, scroll_s12, segre_points, veronese_map, Scroll};

use crate::gf::{Fe, Field};
use crate::projgeom::linalg::Matrix;
use crate::projgeom::{classify_quadric, plucker, GeomError, PGPoint, QuadricKind, QuadricReport, Subspace};
use crate::quadalg::{AlgElem, Algebra, AlgebraDescriptor, Kind};
use crate::ringplane::{PlaneModel, Triple};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VsetError {
    #[error("triple is not admissible")]
    Inadmissible,
    #[error("matrix is not a rank 1 Hermitian matrix")]
    NotRank1,
    #[error("zeta must not be a scalar")]
    ScalarZeta,
    #[error("unsupported Segre type ({0},{1})")]
    UnsupportedSegre(usize, usize),
    #[error("model invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Matrices,
    Reduction,
    Juxtaposition,
    Parametrization,
}

/// The 3-space spanned by the image of a line of G(V).
#[derive(Clone, Debug, Serialize)]
pub struct XiMember {
    pub subspace: Subspace,
    pub quadric: QuadricReport,
    pub ring_line: usize,
    /// Indices into `X` of the points in the subspace.
    pub points: Vec<usize>,
}

pub struct VeroneseanModel {
    algebra: Arc<Algebra>,
    pub construction: Construction,
    pub ambient: usize,
    pub x: Vec<PGPoint>,
    pub xi: Vec<XiMember>,
    /// Ring point index to index in `x`.
    pub pt_map: Vec<usize>,
}

#[derive(Serialize)]
struct XiJson<'a> {
    basis: &'a Matrix,
    kind: QuadricKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<&'a PGPoint>,
    ring_line: usize,
}

#[derive(Serialize)]
struct ModelJson<'a> {
    algebra: AlgebraDescriptor,
    construction: Construction,
    ambient_dim: usize,
    #[serde(rename = "X")]
    x: &'a [PGPoint],
    #[serde(rename = "Xi")]
    xi: Vec<XiJson<'a>>,
    pt_map: &'a [usize],
}

impl Serialize for VeroneseanModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModelJson {
            algebra: self.algebra.descriptor(),
            construction: self.construction,
            ambient_dim: self.ambient,
            x: &self.x,
            xi: self
                .xi
                .iter()
                .map(|m| XiJson { basis: m.subspace.basis(), kind: m.quadric.kind, vertex: m.quadric.vertex.as_ref(), ring_line: m.ring_line })
                .collect(),
            pt_map: &self.pt_map,
        }
        .serialize(s)
    }
}

/// The quadric class of the lines for each algebra kind.
pub fn expected_quadric(kind: Kind) -> QuadricKind {
    match kind {
        Kind::Extension => QuadricKind::Elliptic,
        Kind::Dual => QuadricKind::Tube,
        Kind::Split => QuadricKind::Hypo,
    }
}

/// Number of points on a member of Xi.
pub fn expected_quadric_size(kind: Kind, q: usize) -> usize {
    match kind {
        Kind::Extension => q * q + 1,
        Kind::Dual => q * (q + 1),
        Kind::Split => (q + 1) * (q + 1),
    }
}

impl VeroneseanModel {
    /// Assembles a model from one image point per ring point, computing Xi
    /// and checking the invariants.
    pub fn from_images(plane: &PlaneModel, construction: Construction, images: Vec<PGPoint>) -> Result<Self, VsetError> {
        let alg = plane.algebra().clone();
        let f = alg.field().clone();
        let ambient = images[0].ambient();
        let mut index: HashMap<PGPoint, usize> = HashMap::new();
        let mut x = vec![];
        let pt_map: Vec<usize> = images
            .into_iter()
            .map(|p| {
                *index.entry(p.clone()).or_insert_with(|| {
                    x.push(p);
                    x.len() - 1
                })
            })
            .collect();
        if x.len() != plane.num_points() {
            return Err(VsetError::Invariant(format!("{} distinct images for {} points", x.len(), plane.num_points())));
        }
        let xi: Vec<XiMember> = (0..plane.num_lines())
            .into_par_iter()
            .map(|l| xi_member(&f, ambient, &x, &pt_map, plane, l))
            .collect::<Result<_, _>>()?;
        let model = VeroneseanModel { algebra: alg, construction, ambient, x, xi, pt_map };
        let violations = model.violations(plane);
        if let Some(v) = violations.first() {
            return Err(VsetError::Invariant(v.clone()));
        }
        Ok(model)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> &Arc<Field> {
        self.algebra.field()
    }

    pub fn span(&self) -> Subspace {
        Subspace::span(self.field(), self.ambient, &self.x)
    }

    /// Image of a ring point.
    pub fn point(&self, ring_point: usize) -> &PGPoint {
        &self.x[self.pt_map[ring_point]]
    }

    /// Descriptions of every violated invariant.
    pub fn violations(&self, plane: &PlaneModel) -> Vec<String> {
        let mut out = vec![];
        let span = self.span().dim();
        if span != 8 {
            out.push(format!("X spans dimension {span}, not 8"));
        }
        let kind = self.algebra.kind();
        let q = self.algebra.q();
        for m in &self.xi {
            if m.subspace.dim() != 3 {
                out.push(format!("line {} spans dimension {}", m.ring_line, m.subspace.dim()));
            }
            if m.quadric.kind != expected_quadric(kind) || m.quadric.point_count != expected_quadric_size(kind, q) {
                out.push(format!("line {} gives a {:?} with {} points", m.ring_line, m.quadric.kind, m.quadric.point_count));
            }
            let mut on: Vec<usize> = plane.line_row(m.ring_line).into_iter().map(|p| self.pt_map[p]).collect();
            on.sort_unstable();
            if on != m.points {
                out.push(format!("line {} subspace meets X outside the line", m.ring_line));
            }
        }
        out
    }
}

fn xi_member(f: &Field, ambient: usize, x: &[PGPoint], pt_map: &[usize], plane: &PlaneModel, l: usize) -> Result<XiMember, VsetError> {
    let on: Vec<&PGPoint> = plane.line_row(l).into_iter().map(|p| &x[pt_map[p]]).collect();
    let subspace = Subspace::span(f, ambient, on.iter().copied());
    let eqs = subspace.dual_basis(f);
    let points: Vec<usize> = (0..x.len())
        .filter(|&i| eqs.iter().all(|e| e.iter().zip(x[i].coords()).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))).is_zero()))
        .collect();
    let pts: Vec<PGPoint> = points.iter().map(|&i| x[i].clone()).collect();
    let quadric = if subspace.dim() == 3 {
        classify_quadric(f, &subspace, &pts)?
    } else {
        QuadricReport { kind: QuadricKind::Other, point_count: pts.len(), vertex: None, generators: vec![], rulings: None }
    };
    Ok(XiMember { subspace, quadric, ring_line: l, points })
}

fn image_points(plane: &PlaneModel, map: impl Fn(&Triple) -> Vec<Fe> + Sync) -> Result<Vec<PGPoint>, VsetError> {
    let f = plane.algebra().field().clone();
    plane.points.par_iter().map(|t| Ok(PGPoint::new(&f, map(t))?)).collect()
}

/// The V-set defined by matrices: each point goes to its Hermitian matrix.
pub fn build_vset_matrices(plane: &PlaneModel) -> Result<VeroneseanModel, VsetError> {
    let alg = plane.algebra();
    let images = image_points(plane, |t| herm_coords(alg, t).expect("plane points are admissible").to_vec())?;
    VeroneseanModel::from_images(plane, Construction::Matrices, images)
}

/// Rows of the 2x6 juxtaposition of the matrices representing a triple.
pub fn juxtaposition_rows(alg: &Algebra, t: &Triple) -> [Vec<Fe>; 2] {
    let m = t.map(|e| alg.rep_matrix(e));
    [0, 1].map(|r| m.iter().flat_map(|a| a[r]).collect())
}

/// The K-subspace of K^6 spanned by the V-multiples of a triple.
pub fn reduction_subspace(alg: &Algebra, t: &Triple) -> Subspace {
    let f = alg.field();
    let rows = alg
        .elements()
        .map(|v| crate::ringplane::scale_triple(alg, v, t).iter().flat_map(|e| [e.x, e.y]).collect())
        .collect();
    Subspace::from_vectors(f, 5, rows)
}

/// Plücker images of lines of PG(5,q) in PG(14,q), recoordinatized into
/// their span.
fn grassmann_images(plane: &PlaneModel, line_of: impl Fn(&Triple) -> Subspace + Sync) -> Result<Vec<PGPoint>, VsetError> {
    let f = plane.algebra().field().clone();
    let lines: Vec<Subspace> = plane.points.par_iter().map(&line_of).collect();
    if let Some(l) = lines.iter().find(|l| l.dim() != 1) {
        return Err(VsetError::Invariant(format!("a point gives a subspace of dimension {} in PG(5,q)", l.dim())));
    }
    let pl: Vec<PGPoint> = lines.iter().map(|l| plucker(&f, l)).collect::<Result<_, _>>()?;
    let (span, coords) = recoordinatize(&f, &pl);
    if span.dim() != 8 {
        return Err(VsetError::Invariant(format!("Grassmann image spans dimension {}", span.dim())));
    }
    Ok(coords)
}

/// The V-set defined by juxtaposition.
pub fn build_vset_juxtaposition(plane: &PlaneModel) -> Result<VeroneseanModel, VsetError> {
    let alg = plane.algebra();
    let f = alg.field();
    let images = grassmann_images(plane, |t| Subspace::from_vectors(f, 5, juxtaposition_rows(alg, t).to_vec()))?;
    VeroneseanModel::from_images(plane, Construction::Juxtaposition, images)
}

/// The V-set defined by reduction. Each line of PG(5,q) is checked to
/// coincide with the juxtaposition line of the same point.
pub fn build_vset_reduction(plane: &PlaneModel) -> Result<VeroneseanModel, VsetError> {
    let alg = plane.algebra();
    let f = alg.field();
    for t in &plane.points {
        if reduction_subspace(alg, t) != Subspace::from_vectors(f, 5, juxtaposition_rows(alg, t).to_vec()) {
            return Err(VsetError::Invariant("reduction and juxtaposition lines differ".into()));
        }
    }
    let images = grassmann_images(plane, |t| reduction_subspace(alg, t))?;
    VeroneseanModel::from_images(plane, Construction::Reduction, images)
}

/// Coordinates of the Veronese correspondence, in the order
/// `N x, N y, N z, Tr(x'y), Tr(z x'y), Tr(y'z), Tr(z y'z), Tr(z'x), Tr(z z'x)`
/// where `'` is the adjugate and `z` the parameter zeta.
pub fn parametrization_coords(alg: &Algebra, zeta: AlgElem, t: &Triple) -> [Fe; 9] {
    let [x, y, z] = *t;
    let pair = |a: AlgElem, b: AlgElem| {
        let p = alg.mul(alg.sigma(a), b);
        [alg.trace(p), alg.trace(alg.mul(zeta, p))]
    };
    let [a, b] = pair(x, y);
    let [c, d] = pair(y, z);
    let [e, g] = pair(z, x);
    [alg.norm(x), alg.norm(y), alg.norm(z), a, b, c, d, e, g]
}

/// The V-set defined by parametrization, which may be degenerate.
pub struct Parametrization {
    pub zeta: AlgElem,
    /// One image per ring point.
    pub images: Vec<PGPoint>,
    pub distinct: usize,
    pub span: Subspace,
    /// A projectivity onto the matrices model, when one exists.
    pub projectivity: Option<Matrix>,
}

pub fn build_vset_parametrization(plane: &PlaneModel, zeta: AlgElem) -> Result<Parametrization, VsetError> {
    let alg = plane.algebra();
    if zeta.y.is_zero() {
        return Err(VsetError::ScalarZeta);
    }
    let f = alg.field();
    let images = image_points(plane, |t| parametrization_coords(alg, zeta, t).to_vec())?;
    let mut uniq = images.clone();
    uniq.sort();
    uniq.dedup();
    let span = Subspace::span(f, 8, &images);
    let projectivity = if span.dim() == 8 && uniq.len() == images.len() {
        let matrices = build_vset_matrices(plane)?;
        let target: Vec<PGPoint> = (0..plane.num_points()).map(|p| matrices.point(p).clone()).collect();
        fit_equivalence(f, &images, &target)
    } else {
        None
    };
    Ok(Parametrization { zeta, distinct: uniq.len(), images, span, projectivity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringplane::build_plane;

    fn plane(p: u32, e: u32, kind: Kind) -> PlaneModel {
        build_plane(&Algebra::of_kind(Field::new(p, e, None).unwrap(), kind).unwrap())
    }

    #[test]
    fn matrices_model_counts() {
        for (kind, n, size) in [(Kind::Dual, 28, 6), (Kind::Extension, 21, 5), (Kind::Split, 49, 9)] {
            let m = build_vset_matrices(&plane(2, 1, kind)).unwrap();
            assert_eq!(m.x.len(), n);
            assert_eq!(m.xi.len(), n);
            assert!(m.xi.iter().all(|x| x.points.len() == size && x.subspace.dim() == 3));
        }
    }

    #[test]
    fn reduction_equals_juxtaposition_lines() {
        let pl = plane(2, 1, Kind::Dual);
        let alg = pl.algebra();
        for t in &pl.points {
            let j = Subspace::from_vectors(alg.field(), 5, juxtaposition_rows(alg, t).to_vec());
            assert_eq!(reduction_subspace(alg, t), j);
        }
        let red = build_vset_reduction(&pl).unwrap();
        let jux = build_vset_juxtaposition(&pl).unwrap();
        assert_eq!(red.x, jux.x);
    }

    #[test]
    fn parametrization_dual_f3_pattern() {
        let pl = plane(3, 1, Kind::Dual);
        let alg = pl.algebra();
        let f = alg.field();
        let t = [alg.elem(1, 2).unwrap(), alg.elem(2, 1).unwrap(), alg.elem(1, 0).unwrap()];
        let c = parametrization_coords(alg, alg.i(), &t);
        let (x, y, z) = (Fe::ONE, f.elem(2).unwrap(), Fe::ONE);
        let two = f.elem(2).unwrap();
        let expect = [
            f.mul(x, x),
            f.mul(y, y),
            f.mul(z, z),
            f.mul(two, f.mul(x, y)),
            Fe::ZERO,
            f.mul(two, f.mul(y, z)),
            Fe::ZERO,
            f.mul(two, f.mul(z, x)),
            Fe::ZERO,
        ];
        assert_eq!(c, expect);
        assert_eq!(build_vset_parametrization(&pl, alg.scalar(Fe::ONE)).err(), Some(VsetError::ScalarZeta));
    }

    #[test]
    fn parametrization_is_representative_independent() {
        for kind in [Kind::Dual, Kind::Split, Kind::Extension] {
            let pl = plane(3, 1, kind);
            let alg = pl.algebra();
            let f = alg.field();
            for t in &pl.points {
                let base = PGPoint::new(f, parametrization_coords(alg, alg.i(), t).to_vec()).unwrap();
                for &u in pl.units() {
                    let s = crate::ringplane::scale_triple(alg, u, t);
                    assert_eq!(PGPoint::new(f, parametrization_coords(alg, alg.i(), &s).to_vec()).unwrap(), base);
                }
            }
        }
    }
}
