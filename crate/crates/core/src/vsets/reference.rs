//! Reference varieties: Segre varieties, the quadric Veronese variety and
//! the normal rational cubic scroll.

use super::VsetError;
use crate::gf::{Fe, Field};
use crate::projgeom::{cross_ratio, enumerate_points, line_through, PGPoint, Subspace};
use serde::Serialize;
use std::collections::HashSet;

/// Products of all point pairs of PG(m,q) x PG(n,q); coordinate
/// `(n+1) i + j` is `x_i y_j`.
pub fn segre_points(m: usize, n: usize, f: &Field) -> Result<Vec<PGPoint>, VsetError> {
    if !matches!((m, n), (1, 2) | (1, 3) | (2, 2)) {
        return Err(VsetError::UnsupportedSegre(m, n));
    }
    let a = enumerate_points(m, f);
    let b = enumerate_points(n, f);
    Ok(a.iter()
        .flat_map(|x| {
            b.iter().map(move |y| {
                let v = x.coords().iter().flat_map(|&u| y.coords().iter().map(move |&w| f.mul(u, w))).collect();
                PGPoint::new(f, v).expect("product of nonzero vectors")
            })
        })
        .collect())
}

/// `(x,y,z) -> (x^2, y^2, z^2, xy, yz, zx)`.
pub fn veronese_map(f: &Field, [x, y, z]: [Fe; 3]) -> PGPoint {
    PGPoint::new(f, vec![f.mul(x, x), f.mul(y, y), f.mul(z, z), f.mul(x, y), f.mul(y, z), f.mul(z, x)])
        .expect("Veronese image of a nonzero vector")
}

pub fn quadric_veronese_points(f: &Field) -> Vec<PGPoint> {
    enumerate_points(2, f).iter().map(|p| veronese_map(f, [p.coords()[0], p.coords()[1], p.coords()[2]])).collect()
}

/// The scroll S(1,2) in PG(4,q): the line `(s,t,0,0,0)` joined to the
/// conic `(0,0,s^2,st,t^2)` by equal parameters.
#[derive(Clone, Debug, Serialize)]
pub struct Scroll {
    pub points: Vec<PGPoint>,
    /// Ruling lines, in parameter order.
    pub rulings: Vec<Subspace>,
    pub directrix: Vec<PGPoint>,
    pub conic: Vec<PGPoint>,
}

pub fn scroll_s12(f: &Field) -> Scroll {
    let params = enumerate_points(1, f);
    let z = Fe::ZERO;
    let mut directrix = vec![];
    let mut conic = vec![];
    for p in &params {
        let (s, t) = (p.coords()[0], p.coords()[1]);
        directrix.push(PGPoint::new(f, vec![s, t, z, z, z]).unwrap());
        conic.push(PGPoint::new(f, vec![z, z, f.mul(s, s), f.mul(s, t), f.mul(t, t)]).unwrap());
    }
    let rulings: Vec<Subspace> = directrix.iter().zip(&conic).map(|(a, b)| Subspace::span(f, 4, [a, b])).collect();
    let mut seen = HashSet::new();
    let points = rulings.iter().flat_map(|r| r.points(f)).filter(|p| seen.insert(p.clone())).collect();
    Scroll { points, rulings, directrix, conic }
}

/// Cross-ratio of four distinct points `a,b,c,d` of a conic, given by all
/// its points: the lines from `a` to the tangent at `a`, `b`, `c`, `d`
/// cut a line not through `a` in four points whose cross-ratio is taken.
pub fn conic_cross_ratio(f: &Field, conic: &[PGPoint], [a, b, c, d]: [&PGPoint; 4]) -> Result<Fe, VsetError> {
    let ambient = a.ambient();
    let plane = Subspace::span(f, ambient, conic);
    if plane.dim() != 2 {
        return Err(VsetError::Invariant(format!("conic spans dimension {}", plane.dim())));
    }
    let on: HashSet<&PGPoint> = conic.iter().collect();
    if ![a, b, c, d].iter().all(|p| on.contains(p)) {
        return Err(VsetError::Invariant("point not on the conic".into()));
    }
    let pts = plane.points(f);
    let tangent_dir = pts
        .iter()
        .find(|p| *p != a && line_through(f, a, p).iter().filter(|x| on.contains(x)).count() == 1)
        .ok_or_else(|| VsetError::Invariant("no tangent line".into()))?;
    let apoint = Subspace::span(f, ambient, [a]);
    let transversal = pts
        .iter()
        .flat_map(|u| pts.iter().map(move |v| (u, v)))
        .map(|(u, v)| Subspace::span(f, ambient, [u, v]))
        .find(|l| l.dim() == 1 && l.intersect(f, &apoint).dim() < 0)
        .expect("a plane has lines missing a point");
    let cut = |p: &PGPoint| -> Result<PGPoint, VsetError> {
        let line = Subspace::span(f, ambient, [a, p]);
        let meet = line.intersect(f, &transversal);
        Ok(PGPoint::new(f, meet.basis()[0].clone())?)
    };
    Ok(cross_ratio(f, &cut(tangent_dir)?, &cut(b)?, &cut(c)?, &cut(d)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segre_counts() {
        let f = Field::prime(2).unwrap();
        assert_eq!(segre_points(2, 2, &f).unwrap().len(), 49);
        assert_eq!(segre_points(1, 2, &f).unwrap().len(), 21);
        assert_eq!(segre_points(1, 3, &f).unwrap().len(), 45);
        assert_eq!(segre_points(3, 3, &f).err(), Some(VsetError::UnsupportedSegre(3, 3)));
        let s = segre_points(2, 2, &f).unwrap();
        assert_eq!(s.iter().collect::<HashSet<_>>().len(), 49);
        assert!(s.iter().all(|p| p.ambient() == 8));
    }

    #[test]
    fn segre_of_two_lines_is_a_hypo() {
        let f = Field::prime(3).unwrap();
        let s = segre_points(1, 2, &f).unwrap();
        // points x (x) y with x on PG(1) and y on the line z = 0 of PG(2)
        let sub: Vec<PGPoint> = s.into_iter().filter(|p| p.coords()[2].is_zero() && p.coords()[5].is_zero()).collect();
        let space = Subspace::span(&f, 5, &sub);
        let r = crate::projgeom::classify_quadric(&f, &space, &sub).unwrap();
        assert_eq!(r.kind, crate::projgeom::QuadricKind::Hypo);
        assert_eq!(r.point_count, 16);
    }

    #[test]
    fn veronese_counts() {
        let f = Field::prime(2).unwrap();
        let v = quadric_veronese_points(&f);
        assert_eq!(v.len(), 7);
        assert_eq!(v.iter().collect::<HashSet<_>>().len(), 7);
        let f3 = Field::prime(3).unwrap();
        let v3 = quadric_veronese_points(&f3);
        assert_eq!(Subspace::span(&f3, 5, &v3).dim(), 5);
    }

    #[test]
    fn scroll_over_f3() {
        let f = Field::prime(3).unwrap();
        let s = scroll_s12(&f);
        assert_eq!(s.points.len(), 16);
        assert_eq!(s.rulings.len(), 4);
        assert_eq!(Subspace::span(&f, 4, &s.points).dim(), 4);
    }

    #[test]
    fn scroll_preserves_cross_ratio() {
        for (p, e) in [(3, 1), (2, 2), (5, 1)] {
            let f = Field::new(p, e, None).unwrap();
            let s = scroll_s12(&f);
            let n = s.rulings.len();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let idx = [i, j, k, l];
                            if idx.iter().collect::<HashSet<_>>().len() < 4 {
                                continue;
                            }
                            let [a, b, c, d] = idx.map(|x| &s.directrix[x]);
                            let line = cross_ratio(&f, a, b, c, d).unwrap();
                            let conic = conic_cross_ratio(&f, &s.conic, idx.map(|x| &s.conic[x])).unwrap();
                            assert_eq!(line, conic);
                        }
                    }
                }
            }
        }
    }
}
