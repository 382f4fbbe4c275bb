//! Combinatorial recognition of elliptic quadrics, tubes (quadratic cones
//! minus their vertex) and hyperbolic quadrics in a 3-space.

use super::{line_through, GeomError, PGPoint, Subspace};
use crate::gf::Field;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricKind {
    Elliptic,
    Tube,
    Hypo,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricReport {
    pub kind: QuadricKind,
    pub point_count: usize,
    /// The vertex of a tube (not itself in the set).
    pub vertex: Option<PGPoint>,
    /// Lines contained in the set; for a tube, lines contained in the set
    /// together with its vertex.
    pub generators: Vec<Subspace>,
    /// For a hypo, the two reguli as index lists into `generators`.
    pub rulings: Option<[Vec<usize>; 2]>,
}

impl QuadricReport {
    fn other(point_count: usize, generators: Vec<Subspace>) -> Self {
        QuadricReport { kind: QuadricKind::Other, point_count, vertex: None, generators, rulings: None }
    }
}

pub fn classify_quadric(f: &Field, space: &Subspace, pts: &[PGPoint]) -> Result<QuadricReport, GeomError> {
    if space.dim() != 3 {
        return Err(GeomError::WrongDimension { expected: 3, got: space.dim() });
    }
    if pts.iter().any(|p| !space.contains(f, p)) {
        return Err(GeomError::NotInSpace);
    }
    let q = f.order();
    let set: HashSet<&PGPoint> = pts.iter().collect();
    let count = set.len();
    let ambient = space.ambient();

    // lines meeting the set in at least two points, with their hit counts
    let mut full = BTreeSet::new();
    let mut max_secant = 0;
    let uniq: Vec<&PGPoint> = set.iter().copied().collect();
    for (i, a) in uniq.iter().enumerate() {
        for b in &uniq[i + 1..] {
            let line = line_through(f, a, b);
            let hits = line.iter().filter(|p| set.contains(p)).count();
            if hits == q + 1 {
                full.insert(Subspace::span(f, ambient, [*a, *b]));
            } else {
                max_secant = max_secant.max(hits);
            }
        }
    }
    let full: Vec<Subspace> = full.into_iter().collect();
    let spans_space = Subspace::span(f, ambient, pts.iter()).dim() == 3;

    if count == q * q + 1 && full.is_empty() && max_secant <= 2 && spans_space {
        return Ok(QuadricReport { kind: QuadricKind::Elliptic, point_count: count, vertex: None, generators: full, rulings: None });
    }
    if count == (q + 1) * (q + 1) && full.len() == 2 * (q + 1) {
        if let Some(rulings) = split_reguli(f, &full, q) {
            let covered: HashSet<PGPoint> = full.iter().flat_map(|l| l.points(f)).collect();
            if covered.len() == count && pts.iter().all(|p| covered.contains(p)) {
                return Ok(QuadricReport { kind: QuadricKind::Hypo, point_count: count, vertex: None, generators: full, rulings: Some(rulings) });
            }
        }
    }
    if count == q * (q + 1) && full.is_empty() {
        let mut found = Vec::new();
        for v in space.points(f) {
            if set.contains(&v) {
                continue;
            }
            if let Some(gens) = cone_generators(f, &v, &set, space, q) {
                found.push((v, gens));
            }
        }
        if found.len() == 1 {
            let (v, gens) = found.pop().unwrap();
            return Ok(QuadricReport { kind: QuadricKind::Tube, point_count: count, vertex: Some(v), generators: gens, rulings: None });
        }
    }
    Ok(QuadricReport::other(count, full))
}

/// Splits 2(q+1) lines into two families of q+1 pairwise skew lines, each
/// line meeting every line of the other family.
fn split_reguli(f: &Field, lines: &[Subspace], q: usize) -> Option<[Vec<usize>; 2]> {
    let meets = |a: &Subspace, b: &Subspace| a.intersect(f, b).dim() >= 0;
    let (mut first, mut second) = (vec![0], vec![]);
    for i in 1..lines.len() {
        if meets(&lines[0], &lines[i]) {
            second.push(i);
        } else {
            first.push(i);
        }
    }
    if first.len() != q + 1 || second.len() != q + 1 {
        return None;
    }
    for fam in [&first, &second] {
        for (k, &i) in fam.iter().enumerate() {
            if fam[k + 1..].iter().any(|&j| meets(&lines[i], &lines[j])) {
                return None;
            }
        }
    }
    for &i in &first {
        for &j in &second {
            if lines[i].intersect(f, &lines[j]).dim() != 0 {
                return None;
            }
        }
    }
    Some([first, second])
}

/// If every line through `v` meets the set in 0 or q points, the q+1 lines
/// of the second kind cover the set and no three of them are coplanar,
/// returns those lines.
fn cone_generators(f: &Field, v: &PGPoint, set: &HashSet<&PGPoint>, space: &Subspace, q: usize) -> Option<Vec<Subspace>> {
    let ambient = space.ambient();
    let mut gens = BTreeSet::new();
    for p in set.iter() {
        let line = line_through(f, v, p);
        let hits = line.iter().filter(|x| set.contains(x)).count();
        if hits != q {
            return None;
        }
        gens.insert(Subspace::span(f, ambient, [v, *p]));
    }
    let gens: Vec<Subspace> = gens.into_iter().collect();
    if gens.len() != q + 1 {
        return None;
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            for k in j + 1..gens.len() {
                if gens[i].join(f, &gens[j]).join(f, &gens[k]).dim() != 3 {
                    return None;
                }
            }
        }
    }
    Some(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fe;

    /// Points of PG(3,q) with X0 X1 = X2^2 + t X2 X3 + n X3^2.
    fn form_points(f: &Field, t: Fe, n: Fe) -> Vec<PGPoint> {
        super::super::enumerate_points(3, f)
            .into_iter()
            .filter(|p| {
                let c = p.coords();
                let lhs = f.mul(c[0], c[1]);
                let rhs = f.add(f.add(f.mul(c[2], c[2]), f.mul(t, f.mul(c[2], c[3]))), f.mul(n, f.mul(c[3], c[3])));
                lhs == rhs
            })
            .collect()
    }

    #[test]
    fn three_kinds() {
        let f2 = Field::prime(2).unwrap();
        let space = Subspace::full(3);
        // the cone minus its vertex (0,0,0,1)
        let cone: Vec<PGPoint> = form_points(&f2, Fe(0), Fe(0)).into_iter().filter(|p| *p != PGPoint::unit(3, 3)).collect();
        let tube = classify_quadric(&f2, &space, &cone).unwrap();
        assert_eq!(tube.kind, QuadricKind::Tube);
        assert_eq!(tube.point_count, 6);
        assert_eq!(tube.vertex, Some(PGPoint::unit(3, 3)));
        assert_eq!(tube.generators.len(), 3);
        let ell = classify_quadric(&f2, &space, &form_points(&f2, Fe(1), Fe(1))).unwrap();
        assert_eq!((ell.kind, ell.point_count), (QuadricKind::Elliptic, 5));
        let f3 = Field::prime(3).unwrap();
        let hypo = classify_quadric(&f3, &space, &form_points(&f3, Fe(1), Fe(0))).unwrap();
        assert_eq!((hypo.kind, hypo.point_count), (QuadricKind::Hypo, 16));
        let r = hypo.rulings.unwrap();
        assert_eq!((r[0].len(), r[1].len()), (4, 4));
    }

    #[test]
    fn plane_is_other_and_dimension_checked() {
        let f2 = Field::prime(2).unwrap();
        let plane = Subspace::coordinate(3, &[3]).points(&f2);
        let rep = classify_quadric(&f2, &Subspace::full(3), &plane[..6]).unwrap();
        assert_eq!(rep.kind, QuadricKind::Other);
        assert!(classify_quadric(&f2, &Subspace::coordinate(3, &[3]), &plane).is_err());
        assert_eq!(
            classify_quadric(&f2, &Subspace::coordinate(4, &[4]), &[PGPoint::unit(4, 4)]),
            Err(GeomError::NotInSpace)
        );
    }
}
