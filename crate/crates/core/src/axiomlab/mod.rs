//! Checkers for the Veronesean axiom systems on a point set `X` with a
//! family `Xi` of 3-spaces, plus the containment uniqueness scan.
//!
//! Every checker returns an [`AxiomReport`] and never panics on a failing
//! instance, so mutated inputs can be used as negative controls.

mod hjelmslev;

pub use hjelmslev::{affine_plane_violation, check_h_axioms, hj_checks, Census, HjelmslevReport, ScrollCheck, SingularPlane, VeroneseSub};

use crate::gf::Field;
use crate::projgeom::{classify_quadric, line_through, tangent_space, GeomError, PGPoint, QuadricKind, QuadricReport, Subspace};
use crate::report::{histogram, AxiomReport, Witness};
use crate::vsets::{expected_quadric, expected_quadric_size, segre_equivalence, segre_points, ModelEquivalence, VeroneseanModel};
use crate::quadalg::Kind;
use crate::ringplane::PlaneModel;
use rayon::prelude::*;
use itertools::Itertools;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

/// A member of the family: a 3-space and the points of `X` in it.
#[derive(Clone, Debug)]
pub struct Member {
    pub subspace: Subspace,
    /// Sorted indices into `X`.
    pub points: Vec<usize>,
    pub quadric: QuadricReport,
}

/// A point set with a family of 3-spaces, the input of every checker.
#[derive(Clone, Debug)]
pub struct Candidate {
    field: Arc<Field>,
    pub ambient: usize,
    pub x: Vec<PGPoint>,
    pub xi: Vec<Member>,
    index: HashMap<PGPoint, usize>,
}

impl Candidate {
    pub fn from_model(m: &VeroneseanModel) -> Self {
        let xi = m.xi.iter().map(|x| Member { subspace: x.subspace.clone(), points: x.points.clone(), quadric: x.quadric.clone() }).collect();
        Self::assemble(m.field().clone(), m.ambient, m.x.clone(), xi)
    }

    /// Computes the points and quadric of each subspace.
    pub fn from_subspaces(f: &Arc<Field>, x: Vec<PGPoint>, spaces: Vec<Subspace>) -> Result<Self, GeomError> {
        let ambient = x[0].ambient();
        let mut c = Self::assemble(f.clone(), ambient, x, vec![]);
        for s in spaces {
            c.add_member(s)?;
        }
        Ok(c)
    }

    fn assemble(field: Arc<Field>, ambient: usize, x: Vec<PGPoint>, xi: Vec<Member>) -> Self {
        let index = x.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Candidate { field, ambient, x, xi, index }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn index_of(&self, p: &PGPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Indices of the points of `X` in a subspace.
    pub fn points_in(&self, s: &Subspace) -> Vec<usize> {
        let f = &*self.field;
        let eqs = s.dual_basis(f);
        (0..self.x.len())
            .filter(|&i| eqs.iter().all(|e| e.iter().zip(self.x[i].coords()).fold(crate::gf::Fe::ZERO, |a, (&u, &v)| f.add(a, f.mul(u, v))).is_zero()))
            .collect()
    }

    pub fn add_member(&mut self, s: Subspace) -> Result<(), GeomError> {
        let points = self.points_in(&s);
        let pts: Vec<PGPoint> = points.iter().map(|&i| self.x[i].clone()).collect();
        let quadric = classify_quadric(&self.field, &s, &pts)?;
        self.xi.push(Member { subspace: s, points, quadric });
        Ok(())
    }

    pub fn remove_member(&mut self, i: usize) -> Member {
        self.xi.remove(i)
    }

    /// Members containing each point.
    pub fn members_through(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]; self.x.len()];
        for (m, mem) in self.xi.iter().enumerate() {
            for &p in &mem.points {
                out[p].push(m);
            }
        }
        out
    }

    /// Tube vertices, deduplicated, in first-seen order.
    pub fn vertices(&self) -> Vec<PGPoint> {
        let mut seen = HashSet::new();
        self.xi.iter().filter_map(|m| m.quadric.vertex.clone()).filter(|v| seen.insert(v.clone())).collect()
    }

    /// The tangent plane `T_x(xi)`.
    pub fn tangent(&self, x: usize, member: usize) -> Result<Subspace, GeomError> {
        let mem = &self.xi[member];
        let set: HashSet<PGPoint> = mem.points.iter().map(|&i| self.x[i].clone()).collect();
        tangent_space(&self.field, &self.x[x], &set, &mem.subspace)
    }

    /// The span of all tangent planes at `x`.
    pub fn tangent_span(&self, x: usize, through: &[usize]) -> Result<Subspace, GeomError> {
        let f = &*self.field;
        let mut span = Subspace::empty(self.ambient);
        for &m in through {
            span = span.join(f, &self.tangent(x, m)?);
        }
        Ok(span)
    }
}

/// Pairs of distinct points not covered by any member.
fn check_cover(c: &Candidate, id: &str, anchor: &str) -> AxiomReport {
    let mut rep = AxiomReport::new(id, anchor);
    let through = c.members_through();
    let n = c.x.len();
    let failures: Vec<Witness> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let through = &through;
            (a + 1..n).filter_map(move |b| {
                let shared = through[a].iter().any(|m| through[b].binary_search(m).is_ok());
                (!shared).then(|| Witness::new("pair lies in no member").points([a, b]))
            })
        })
        .collect();
    rep.absorb(failures);
    rep.stat("pairs", n * n.saturating_sub(1) / 2);
    rep
}

/// Runs `check` on the points of every pairwise intersection of members.
fn pairwise<F>(c: &Candidate, check: F) -> (Vec<Witness>, BTreeMap<String, usize>)
where
    F: Fn(usize, usize, &Subspace, &[PGPoint]) -> Option<Witness> + Sync,
{
    let f = &*c.field;
    let n = c.xi.len();
    let results: Vec<(isize, Option<Witness>)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let check = &check;
            (i + 1..n).map(move |j| {
                let meet = c.xi[i].subspace.intersect(f, &c.xi[j].subspace);
                let pts = if meet.dim() >= 0 { meet.points(f) } else { vec![] };
                (meet.dim(), check(i, j, &meet, &pts))
            })
        })
        .collect();
    let dims = histogram(results.iter().map(|r| r.0));
    (results.into_iter().filter_map(|r| r.1).collect(), dims)
}

/// Whether the points `bad` of `meet` lie in a subspace of codimension 1
/// of `meet` (for a point, only the empty set qualifies).
fn in_codim1(f: &Field, meet: &Subspace, bad: &[&PGPoint]) -> bool {
    Subspace::span(f, meet.ambient(), bad.iter().copied()).dim() < meet.dim()
}

/// Points of the closure of a member: its points plus the vertex of a tube.
fn closure(c: &Candidate, m: usize) -> HashSet<PGPoint> {
    let mem = &c.xi[m];
    let mut s: HashSet<PGPoint> = mem.points.iter().map(|&i| c.x[i].clone()).collect();
    s.extend(mem.quadric.vertex.clone());
    s
}

/// `(V1)`, `(V2)` and `(V3*)` with `n = 3`.
pub fn check_v_axioms(c: &Candidate) -> [AxiomReport; 3] {
    let f = &*c.field;
    let v1 = check_cover(c, "V1", "Veronesean axiom V1: two points lie in a member");

    let mut v2 = AxiomReport::new("V2", "Veronesean axiom V2: members meet inside the closures, extra points in a codimension 1 subspace");
    let closures: Vec<HashSet<PGPoint>> = (0..c.xi.len()).map(|m| closure(c, m)).collect();
    let (fails, dims) = pairwise(c, |i, j, meet, pts| {
        if let Some(p) = pts.iter().find(|p| !closures[i].contains(p) || !closures[j].contains(p)) {
            return Some(Witness::new(format!("intersection point {p} outside the closures")).lines([i, j]));
        }
        let extra: Vec<&PGPoint> = pts.iter().filter(|p| c.index_of(p).is_none()).collect();
        (!in_codim1(f, meet, &extra)).then(|| Witness::new("points outside X are not in a codimension 1 subspace").lines([i, j]))
    });
    v2.absorb(fails);
    v2.stat("intersection_dims", dims);

    let v3 = check_tangent_spans(c, "V3*", "Veronesean axiom V3*: tangent planes at a point lie in a fixed 4-space");
    [v1, v2, v3]
}

fn check_tangent_spans(c: &Candidate, id: &str, anchor: &str) -> AxiomReport {
    let mut rep = AxiomReport::new(id, anchor);
    let through = c.members_through();
    let results: Vec<Result<isize, Witness>> = (0..c.x.len())
        .into_par_iter()
        .map(|x| match c.tangent_span(x, &through[x]) {
            Ok(s) if s.dim() <= 4 => Ok(s.dim()),
            Ok(s) => Err(Witness::new(format!("tangent planes span dimension {}", s.dim())).points([x])),
            Err(e) => Err(Witness::new(format!("tangent space undefined: {e}")).points([x])),
        })
        .collect();
    rep.stat("tangent_span_dims", histogram(results.iter().filter_map(|r| r.as_ref().ok().copied())));
    rep.absorb(results.into_iter().filter_map(|r| r.err()).collect());
    rep
}

/// `(S1)`, `(S2)` and `(S3*)`.
pub fn check_s_axioms(c: &Candidate) -> [AxiomReport; 3] {
    let s1 = check_cover(c, "S1", "Segrean axiom S1: two points lie in a member");
    let mut s2 = AxiomReport::new("S2", "Segrean axiom S2: two members meet inside X");
    let (fails, dims) = pairwise(c, |i, j, _, pts| {
        pts.iter().find(|p| c.index_of(p).is_none()).map(|p| Witness::new(format!("intersection point {p} not in X")).lines([i, j]))
    });
    s2.absorb(fails);
    s2.stat("intersection_dims", dims);
    let s3 = check_tangent_spans(c, "S3*", "Segrean axiom S3*: tangent planes at a point lie in a fixed 4-space");
    [s1, s2, s3]
}

/// `(H1)`, `(H2)` and `(H3*)`, with `Y` the set of tube vertices.
pub fn check_h_basic(c: &Candidate) -> [AxiomReport; 3] {
    let f = &*c.field;
    let h1 = check_cover(c, "H1", "Hjelmslevian axiom H1: two points lie in a member");
    let mut h2 = AxiomReport::new("H2", "Hjelmslevian axiom H2: members meet inside X and Y, vertices in a codimension 1 subspace");
    for (m, mem) in c.xi.iter().enumerate() {
        h2.require(mem.quadric.kind == QuadricKind::Tube, || Witness::new("member is not a tube").lines([m]));
    }
    let y: HashSet<PGPoint> = c.vertices().into_iter().collect();
    let y_in: Vec<bool> = c.xi.iter().map(|m| m.subspace.points(f).iter().any(|p| y.contains(p))).collect();
    let (fails, dims) = pairwise(c, |i, j, meet, pts| {
        if let Some(p) = pts.iter().find(|p| c.index_of(p).is_none() && !y.contains(*p)) {
            return Some(Witness::new(format!("intersection point {p} outside X and Y")).lines([i, j]));
        }
        let in_y: Vec<&PGPoint> = pts.iter().filter(|p| y.contains(*p)).collect();
        if !in_codim1(f, meet, &in_y) {
            return Some(Witness::new("vertices of the intersection are not in a codimension 1 subspace").lines([i, j]));
        }
        (!in_y.is_empty() && !(y_in[i] && y_in[j])).then(|| Witness::new("intersection meets Y but a member does not").lines([i, j]))
    });
    h2.absorb(fails);
    h2.stat("intersection_dims", dims);
    let h3 = check_tangent_spans(c, "H3*", "Hjelmslevian axiom H3*: tangent planes at a point lie in a fixed 4-space");
    [h1, h2, h3]
}

/// The S-axioms of a split model together with its identification as a
/// Segre variety of type (2,2).
#[derive(Clone, Debug, Serialize)]
pub struct SReport {
    pub axioms: [AxiomReport; 3],
    pub segre: ModelEquivalence,
    /// Histogram of the number of planes inside `X` through each point.
    pub singular_planes_per_point: BTreeMap<String, usize>,
}

impl SReport {
    pub fn holds(&self) -> bool {
        self.axioms.iter().all(|a| a.holds) && self.segre.holds()
    }
}

pub fn check_s_model(model: &VeroneseanModel, plane: &PlaneModel) -> Result<SReport, crate::vsets::VsetError> {
    let c = Candidate::from_model(model);
    let axioms = check_s_axioms(&c);
    let segre = segre_equivalence(model, plane)?;
    let planes = singular_planes_through(&c);
    Ok(SReport { axioms, segre, singular_planes_per_point: histogram(planes) })
}

/// Number of planes contained in `X` through each point.
pub fn singular_planes_through(c: &Candidate) -> Vec<usize> {
    let f = &*c.field;
    let inside = |pts: &[PGPoint]| pts.iter().all(|p| c.index_of(p).is_some());
    let lines: Vec<Vec<Subspace>> = (0..c.x.len())
        .into_par_iter()
        .map(|a| {
            let mut ls: Vec<Subspace> = vec![];
            for b in 0..c.x.len() {
                if a != b && inside(&line_through(f, &c.x[a], &c.x[b])) {
                    let l = Subspace::span(f, c.ambient, [&c.x[a], &c.x[b]]);
                    if !ls.contains(&l) {
                        ls.push(l);
                    }
                }
            }
            ls
        })
        .collect();
    lines
        .par_iter()
        .map(|ls| {
            let mut planes: Vec<Subspace> = vec![];
            for i in 0..ls.len() {
                for j in i + 1..ls.len() {
                    let p = ls[i].join(f, &ls[j]);
                    if !planes.contains(&p) && inside(&p.points(f)) {
                        planes.push(p);
                    }
                }
            }
            planes.len()
        })
        .collect()
}

/// The Segre variety `S(1,n)` for `n` in {2,3} with the hyperbolic
/// quadrics `PG(1) x l` over the lines `l` of `PG(n)`.
pub fn segre_candidate(n: usize, f: &Arc<Field>) -> Result<Candidate, crate::vsets::VsetError> {
    let x = segre_points(1, n, f)?;
    let pg_n = crate::projgeom::enumerate_points(n, f);
    let mut lines: Vec<Subspace> = vec![];
    for (i, a) in pg_n.iter().enumerate() {
        for b in &pg_n[i + 1..] {
            let l = Subspace::span(f, n, [a, b]);
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
    }
    let spaces = lines
        .iter()
        .map(|l| {
            let [u, v] = [&l.basis()[0], &l.basis()[1]];
            let rows = [[1, 0], [0, 1]]
                .iter()
                .flat_map(|e| [u, v].map(|w| e.iter().flat_map(|&a| w.iter().map(move |&b| if a == 1 { b } else { crate::gf::Fe::ZERO })).collect()))
                .collect();
            Subspace::from_vectors(f, 2 * (n + 1) - 1, rows)
        })
        .collect();
    Ok(Candidate::from_subspaces(f, x, spaces)?)
}

/// Per-point labels of a point set in a subspace.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointLabel {
    /// The tangent lines span a hyperplane of the subspace.
    Regular,
    /// The tangent lines span the whole subspace.
    Singular,
    /// Neither, so the set is not a hypersurface.
    Irregular,
}

/// Labels each point by the span of the lines through it that lie in the set
/// or meet it only there.
pub fn hypersurface_check(f: &Field, space: &Subspace, pts: &[PGPoint]) -> Vec<PointLabel> {
    let set: HashSet<&PGPoint> = pts.iter().collect();
    let all = space.points(f);
    pts.iter()
        .map(|x| {
            let mut covered: HashSet<&PGPoint> = HashSet::from([x]);
            for p in &all {
                if p == x || covered.contains(p) {
                    continue;
                }
                let line = line_through(f, x, p);
                let hits = line.iter().filter(|y| set.contains(y)).count();
                if hits == 1 || hits == line.len() {
                    covered.extend(all.iter().filter(|y| line.contains(y)));
                }
            }
            let span = Subspace::span(f, space.ambient(), covered.iter().copied());
            if span.dim() == space.dim() {
                PointLabel::Singular
            } else if span.dim() == space.dim() - 1 {
                PointLabel::Regular
            } else {
                PointLabel::Irregular
            }
        })
        .collect()
}

/// Scans the 3-spaces spanned by 4 points of `X`. Outside the family, none
/// may meet `X` in a quadric of the family's kind, and a 3-space meeting
/// `X` in as many points as a member must be a member.
pub fn containment_uniqueness(c: &Candidate, kind: Kind) -> Result<AxiomReport, crate::vsets::VsetError> {
    let f = &*c.field;
    let q = f.order();
    let mut rep = AxiomReport::new("uniqueness", "containment uniqueness: every ovoid, tube or hypo in X spans a member");
    if q > 3 {
        return Err(crate::vsets::VsetError::Invariant(format!("4-subset scan limited to q <= 3, got q = {q}")));
    }
    let n = c.x.len();
    let members: HashSet<&Subspace> = c.xi.iter().map(|m| &m.subspace).collect();
    let mut spans: Vec<Subspace> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local: HashSet<Subspace> = HashSet::new();
            for b in a + 1..n {
                for d in b + 1..n {
                    let s3 = Subspace::span(f, c.ambient, [&c.x[a], &c.x[b], &c.x[d]]);
                    if s3.dim() != 2 {
                        continue;
                    }
                    for e in d + 1..n {
                        if s3.contains(f, &c.x[e]) {
                            continue;
                        }
                        let s = Subspace::span(f, c.ambient, [&c.x[a], &c.x[b], &c.x[d], &c.x[e]]);
                        if !members.contains(&s) {
                            local.insert(s);
                        }
                    }
                }
            }
            local.into_iter()
        })
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    spans.sort();
    let size = expected_quadric_size(kind, q);
    let want = expected_quadric(kind);
    let outcomes: Vec<(usize, Option<Witness>)> = spans
        .par_iter()
        .map(|s| {
            let pts = c.points_in(s);
            let coords: Vec<PGPoint> = pts.iter().map(|&i| c.x[i].clone()).collect();
            let found = contained_quadric(f, s, &coords, size, want);
            let w = match found {
                Ok(None) => None,
                Ok(Some(sub)) => Some(
                    Witness::new(format!("non-member 3-space meets X in {} points and contains a {:?}", pts.len(), want))
                        .points(sub.into_iter().map(|k| pts[k])),
                ),
                Err(msg) => Some(Witness::new(msg).points(pts.iter().copied())),
            };
            (pts.len(), w)
        })
        .collect();
    rep.stat("quadruples", n * (n - 1) * (n - 2) * (n.saturating_sub(3)) / 24);
    rep.stat("non_member_spans", spans.len());
    rep.stat("non_member_intersection_sizes", histogram(outcomes.iter().map(|o| o.0)));
    rep.stat("quadric_size", size);
    rep.absorb(outcomes.into_iter().filter_map(|o| o.1).collect());
    Ok(rep)
}

/// Subsets of `size` points of `pts` spanning `space` that classify as `want`.
/// Returns the first such subset, by index into `pts`.
fn contained_quadric(
    f: &Field,
    space: &Subspace,
    pts: &[PGPoint],
    size: usize,
    want: QuadricKind,
) -> Result<Option<Vec<usize>>, String> {
    const MAX_SUBSETS: u128 = 1 << 20;
    if pts.len() < size {
        return Ok(None);
    }
    let subsets = (0..size as u128).fold(1u128, |acc, i| acc * (pts.len() as u128 - i) / (i + 1));
    if subsets > MAX_SUBSETS {
        return Err(format!("{} points in a non-member 3-space; {subsets} subsets exceed the scan limit", pts.len()));
    }
    for sub in (0..pts.len()).combinations(size) {
        let chosen: Vec<PGPoint> = sub.iter().map(|&k| pts[k].clone()).collect();
        if Subspace::span(f, space.ambient(), &chosen) != *space {
            continue;
        }
        if classify_quadric(f, space, &chosen).map(|r| r.kind).unwrap_or(QuadricKind::Other) == want {
            return Ok(Some(sub));
        }
    }
    Ok(None)
}
