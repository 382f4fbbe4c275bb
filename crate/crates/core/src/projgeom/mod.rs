//! Projective spaces PG(N,q): points, subspaces, Plücker coordinates,
//! cross-ratios, projectivities and quadric recognition in 3-spaces.

pub mod linalg;
mod quadric;

pub use quadric::{classify_quadric, QuadricKind, QuadricReport};

use crate::gf::{Fe, Field};
use linalg::Matrix;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: isize, got: isize },
    #[error("point set is not contained in the given subspace")]
    NotInSpace,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("points are not pairwise distinct")]
    CoincidentPoints,
    #[error("frame is not in general position")]
    FrameNotGeneral,
    #[error("frame must have {expected} points, got {got}")]
    FrameSize { expected: usize, got: usize },
    #[error("point is not in the given set")]
    PointNotInSet,
}

/// A point of PG(N,q): a nonzero vector whose first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PGPoint(Vec<Fe>);

impl PGPoint {
    pub fn new(f: &Field, v: Vec<Fe>) -> Result<PGPoint, GeomError> {
        normalize(f, v).map(PGPoint).ok_or(GeomError::ZeroVector)
    }

    pub fn coords(&self) -> &[Fe] {
        &self.0
    }

    /// Projective dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.0.len() - 1
    }

    pub fn unit(n: usize, i: usize) -> PGPoint {
        let mut v = vec![Fe::ZERO; n + 1];
        v[i] = Fe::ONE;
        PGPoint(v)
    }
}

impl fmt::Display for PGPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Scales `v` so that its first nonzero entry is 1.
pub fn normalize(f: &Field, mut v: Vec<Fe>) -> Option<Vec<Fe>> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    if lead != Fe::ONE {
        let inv = f.inv_nz(lead);
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    Some(v)
}

/// A subspace of PG(N,q) held as a reduced echelon basis, so equal
/// subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn from_vectors(f: &Field, ambient: usize, vectors: Matrix) -> Subspace {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient + 1));
        let basis = if vectors.is_empty() { Vec::new() } else { linalg::rref(f, vectors) };
        Subspace { ambient, basis }
    }

    pub fn span<'a>(f: &Field, ambient: usize, points: impl IntoIterator<Item = &'a PGPoint>) -> Subspace {
        Subspace::from_vectors(f, ambient, points.into_iter().map(|p| p.0.clone()).collect())
    }

    pub fn empty(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: linalg::identity(ambient + 1) }
    }

    /// The subspace cut out by the vanishing of the given coordinates.
    pub fn coordinate(ambient: usize, zero_coords: &[usize]) -> Subspace {
        let basis = (0..=ambient)
            .filter(|i| !zero_coords.contains(i))
            .map(|i| PGPoint::unit(ambient, i).0)
            .collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains_vec(&self, f: &Field, v: &[Fe]) -> bool {
        self.coords_of(f, v).is_some()
    }

    pub fn contains(&self, f: &Field, p: &PGPoint) -> bool {
        self.contains_vec(f, &p.0)
    }

    pub fn contains_subspace(&self, f: &Field, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vec(f, v))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords_of(&self, f: &Field, v: &[Fe]) -> Option<Vec<Fe>> {
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let pc = row.iter().position(|c| !c.is_zero()).unwrap();
            let c = rest[pc];
            coeffs.push(c);
            if !c.is_zero() {
                for (r, &b) in rest.iter_mut().zip(row) {
                    *r = f.sub(*r, f.mul(c, b));
                }
            }
        }
        rest.iter().all(|c| c.is_zero()).then_some(coeffs)
    }

    pub fn join(&self, f: &Field, other: &Subspace) -> Subspace {
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_vectors(f, self.ambient, rows)
    }

    /// The annihilator in the dual space, as row vectors.
    pub fn dual_basis(&self, f: &Field) -> Matrix {
        if self.basis.is_empty() {
            return linalg::identity(self.ambient + 1);
        }
        linalg::nullspace(f, self.basis.clone(), self.ambient + 1)
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Subspace {
        let eqs: Matrix = self.dual_basis(f).into_iter().chain(other.dual_basis(f)).collect();
        if eqs.is_empty() {
            return Subspace::full(self.ambient);
        }
        Subspace::from_vectors(f, self.ambient, linalg::nullspace(f, eqs, self.ambient + 1))
    }

    /// All points of the subspace, in increasing coefficient order.
    pub fn points(&self, f: &Field) -> Vec<PGPoint> {
        let k = self.basis.len();
        let q = f.order();
        let mut out = Vec::new();
        for lead in 0..k {
            let free = k - lead - 1;
            for code in 0..q.pow(free as u32) {
                let mut v = self.basis[lead].clone();
                let mut c = code;
                for row in &self.basis[lead + 1..] {
                    let coef = Fe((c % q) as u8);
                    c /= q;
                    if !coef.is_zero() {
                        for (x, &b) in v.iter_mut().zip(row) {
                            *x = f.add(*x, f.mul(coef, b));
                        }
                    }
                }
                out.push(PGPoint(v));
            }
        }
        out
    }

    /// Image under `p -> A p`.
    pub fn image(&self, f: &Field, a: &Matrix) -> Subspace {
        let rows = self.basis.iter().map(|v| linalg::mat_vec(f, a, v)).collect();
        Subspace::from_vectors(f, a.len() - 1, rows)
    }
}

/// Number of points of PG(n,q).
pub fn point_count(n: usize, q: usize) -> usize {
    (0..=n).map(|i| q.pow(i as u32)).sum()
}

/// All points of PG(n,q), sorted lexicographically.
pub fn enumerate_points(n: usize, f: &Field) -> Vec<PGPoint> {
    let mut pts = Subspace::full(n).points(f);
    pts.sort();
    pts
}

/// The q+1 points of the line through two distinct points.
pub fn line_through(f: &Field, a: &PGPoint, b: &PGPoint) -> Vec<PGPoint> {
    Subspace::span(f, a.ambient(), [a, b]).points(f)
}

/// Image of a point under `p -> A p`.
pub fn apply(f: &Field, a: &Matrix, p: &PGPoint) -> PGPoint {
    PGPoint::new(f, linalg::mat_vec(f, a, &p.0)).expect("projectivities are injective")
}

/// Plücker coordinates of a line of PG(5,q): the minors `p_ij`, i < j,
/// in lexicographic order of (i,j).
pub fn plucker(f: &Field, line: &Subspace) -> Result<PGPoint, GeomError> {
    if line.dim() != 1 {
        return Err(GeomError::WrongDimension { expected: 1, got: line.dim() });
    }
    let (u, v) = (&line.basis[0], &line.basis[1]);
    let n = u.len();
    let mut coords = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            coords.push(f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i])));
        }
    }
    PGPoint::new(f, coords)
}

/// The cross-ratio `(a,b;c,d)` of four distinct collinear points, with the
/// convention that parameters `(inf, 0, 1, l)` give `l`. For distinct
/// points the value is never 0, 1 or infinity.
pub fn cross_ratio(f: &Field, a: &PGPoint, b: &PGPoint, c: &PGPoint, d: &PGPoint) -> Result<Fe, GeomError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(GeomError::CoincidentPoints);
            }
        }
    }
    let line = Subspace::span(f, a.ambient(), [a, b]);
    let hom: Vec<Vec<Fe>> = pts
        .iter()
        .map(|p| line.coords_of(f, &p.0).ok_or(GeomError::NotCollinear))
        .collect::<Result<_, _>>()?;
    let br = |u: &[Fe], v: &[Fe]| f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0]));
    let num = f.mul(br(&hom[0], &hom[2]), br(&hom[1], &hom[3]));
    let den = f.mul(br(&hom[0], &hom[3]), br(&hom[1], &hom[2]));
    f.div(num, den).map_err(|_| GeomError::CoincidentPoints)
}

/// Coefficients of the last frame point in terms of the first N+1, all
/// nonzero, or `None` if the frame is not in general position.
fn frame_weights(f: &Field, frame: &[PGPoint]) -> Option<(Matrix, Vec<Fe>)> {
    let n1 = frame.len() - 1;
    let cols: Matrix = frame[..n1].iter().map(|p| p.0.clone()).collect();
    let s = linalg::transpose(&cols);
    let lambda = linalg::solve(f, &s, &frame[n1].0)?;
    lambda.iter().all(|l| !l.is_zero()).then_some((s, lambda))
}

pub fn in_general_position(f: &Field, frame: &[PGPoint]) -> bool {
    frame.len() == frame[0].ambient() + 2 && frame_weights(f, frame).is_some()
}

/// The projectivity `A` (acting on column vectors) with `A src[i] = dst[i]`
/// projectively, for frames of N+2 points in general position.
pub fn fit_projectivity(f: &Field, src: &[PGPoint], dst: &[PGPoint]) -> Result<Matrix, GeomError> {
    let n = src.first().map_or(0, |p| p.ambient());
    for frame in [src, dst] {
        if frame.len() != n + 2 {
            return Err(GeomError::FrameSize { expected: n + 2, got: frame.len() });
        }
    }
    let (s, lam) = frame_weights(f, src).ok_or(GeomError::FrameNotGeneral)?;
    let (d, mu) = frame_weights(f, dst).ok_or(GeomError::FrameNotGeneral)?;
    let scale = |m: &Matrix, w: &[Fe]| -> Matrix {
        m.iter().map(|row| row.iter().zip(w).map(|(&x, &c)| f.mul(x, c)).collect()).collect()
    };
    let s_inv = linalg::inverse(f, &scale(&s, &lam)).ok_or(GeomError::FrameNotGeneral)?;
    let mut a = linalg::mat_mul(f, &scale(&d, &mu), &s_inv);
    // normalise the first nonzero entry to 1
    let lead = a.iter().flatten().copied().find(|c| !c.is_zero()).unwrap();
    let inv = f.inv_nz(lead);
    for c in a.iter_mut().flatten() {
        *c = f.mul(*c, inv);
    }
    Ok(a)
}

/// Projection from a subspace `center` of `within` onto a complement,
/// expressed in coordinates relative to a fixed complementary basis.
pub struct Projection {
    center_dim: usize,
    basis: Subspace,
    change: Matrix,
}

impl Projection {
    pub fn new(f: &Field, center: &Subspace, within: &Subspace) -> Result<Projection, GeomError> {
        if !within.contains_subspace(f, center) {
            return Err(GeomError::NotInSpace);
        }
        let mut rows: Matrix = center.basis().clone();
        for v in within.basis() {
            let mut trial = rows.clone();
            trial.push(v.clone());
            if linalg::rank(f, trial) > rows.len() {
                rows.push(v.clone());
            }
        }
        let basis = Subspace::from_vectors(f, within.ambient(), rows.clone());
        // coordinates relative to `rows`: solve via the echelon basis
        let cols = linalg::transpose(&rows);
        let k = rows.len();
        let pick: Vec<usize> = linalg::pivots(basis.basis());
        let square: Matrix = pick.iter().map(|&r| cols[r].clone()).collect();
        let change = linalg::inverse(f, &square).expect("basis rows are independent");
        debug_assert_eq!(change.len(), k);
        let change = change
            .into_iter()
            .map(|row| {
                let mut full = vec![Fe::ZERO; within.ambient() + 1];
                for (c, &r) in row.iter().zip(&pick) {
                    full[r] = *c;
                }
                full
            })
            .collect();
        Ok(Projection { center_dim: center.basis().len(), basis, change })
    }

    /// Projective dimension of the target space.
    pub fn target_dim(&self) -> usize {
        self.change.len() - self.center_dim - 1
    }

    /// The image of `p`, or `None` if `p` lies in the center.
    pub fn project(&self, f: &Field, p: &PGPoint) -> Result<Option<PGPoint>, GeomError> {
        if !self.basis.contains(f, p) {
            return Err(GeomError::NotInSpace);
        }
        let coords = linalg::mat_vec(f, &self.change, p.coords());
        Ok(normalize(f, coords[self.center_dim..].to_vec()).map(PGPoint))
    }
}

/// Span of the lines through `x` inside `within` that meet `pts` only in
/// `x` or lie entirely in `pts`.
pub fn tangent_space(f: &Field, x: &PGPoint, pts: &HashSet<PGPoint>, within: &Subspace) -> Result<Subspace, GeomError> {
    if !pts.contains(x) {
        return Err(GeomError::PointNotInSet);
    }
    let mut gens: Vec<PGPoint> = vec![x.clone()];
    for p in within.points(f) {
        if &p == x {
            continue;
        }
        let on_line = line_through(f, x, &p);
        let hits = on_line.iter().filter(|y| pts.contains(y)).count();
        if hits == 1 || hits == on_line.len() {
            gens.push(p);
        }
    }
    Ok(Subspace::span(f, x.ambient(), &gens))
}
