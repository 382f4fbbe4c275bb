//! The Hjelmslevian suite for dual models: the vertex plane, singular
//! lines and planes, the map chi onto the dual of the vertex plane, the
//! properties Hj1 to Hj4, the vertex cones over cubic scrolls and the
//! embedded quadric Veronese variety.

use super::{check_h_basic, Candidate};
use crate::gf::Fe;
use crate::projgeom::{cross_ratio, PGPoint, Projection, Subspace};
use crate::report::{histogram, AxiomReport, Witness};
use crate::ringplane::PlaneModel;
use crate::vsets::{conic_cross_ratio, fit_equivalence, scroll_s12, VeroneseanModel, VsetError};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Clone, Debug, Serialize)]
pub struct SingularPlane {
    pub plane: Subspace,
    pub radical: Subspace,
    /// Indices into `X` of the points off the radical line.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub n: usize,
    /// Singular lines through each point.
    pub g_x: BTreeMap<String, usize>,
    /// Tubes through each point.
    pub n_x: BTreeMap<String, usize>,
    /// Sizes of the sets `X_y` of points on singular lines through a vertex.
    pub x_y: BTreeMap<String, usize>,
    /// `|X| = 4 n_x + g_x + 1` at every point; only meaningful for q = 2.
    pub count_identity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VeroneseSub {
    pub subspace: Subspace,
    pub points: Vec<usize>,
    pub span_dim: isize,
    pub skew_to_pi_y: bool,
    /// Each singular plane contains exactly one of its points.
    pub one_per_singular_plane: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScrollCheck {
    /// Index into `y`.
    pub vertex: usize,
    pub span_dim: isize,
    /// Projected from the vertex, `X_y` and the vertex plane give a set
    /// projectively equal to the reference cubic scroll.
    pub cone_matches: bool,
    /// Cross-ratios of Veronese conic points and of radical lines agree;
    /// `None` below q = 3.
    pub cross_ratio_matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HjelmslevReport {
    pub h1: AxiomReport,
    pub h2: AxiomReport,
    pub h3: AxiomReport,
    pub y: Vec<PGPoint>,
    pub pi_y: Subspace,
    /// `Y` is the point set of a plane.
    pub y_plane: AxiomReport,
    pub singular_lines: Vec<Subspace>,
    pub singular_planes: Vec<SingularPlane>,
    /// Index into `singular_planes` of the plane through each point.
    pub chi: Vec<Option<usize>>,
    /// Every point lies in a unique singular plane, and the radical lines
    /// are exactly the lines of the vertex plane.
    pub singular_structure: AxiomReport,
    pub hj1: AxiomReport,
    pub hj2: AxiomReport,
    pub hj3: AxiomReport,
    pub hj4: AxiomReport,
    pub census: Census,
    pub veronese_sub: VeroneseSub,
    pub scroll_checks: Vec<ScrollCheck>,
    pub scroll: AxiomReport,
}

impl HjelmslevReport {
    pub fn reports(&self) -> [&AxiomReport; 10] {
        [&self.h1, &self.h2, &self.h3, &self.y_plane, &self.singular_structure, &self.hj1, &self.hj2, &self.hj3, &self.hj4, &self.scroll]
    }

    pub fn holds(&self) -> bool {
        self.reports().iter().all(|r| r.holds) && self.veronese_sub.span_dim == 5 && self.veronese_sub.skew_to_pi_y && self.veronese_sub.one_per_singular_plane
    }
}

/// Checks the axioms of an affine plane of order `q`. Returns a
/// description of the first violation.
pub fn affine_plane_violation(points: &[usize], lines: &[Vec<usize>], q: usize) -> Option<String> {
    if points.len() != q * q {
        return Some(format!("{} points, expected {}", points.len(), q * q));
    }
    let mut lines: Vec<Vec<usize>> = lines.iter().map(|l| {
        let mut l = l.clone();
        l.sort_unstable();
        l
    }).collect();
    lines.sort();
    lines.dedup();
    if let Some(l) = lines.iter().find(|l| l.len() != q) {
        return Some(format!("a line has {} points", l.len()));
    }
    let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    if lines.iter().flatten().any(|p| !pos.contains_key(p)) {
        return Some("a line leaves the point set".into());
    }
    let n = points.len();
    let mut joined = vec![0usize; n * n];
    for l in &lines {
        for (i, a) in l.iter().enumerate() {
            for b in &l[i + 1..] {
                let (x, y) = (pos[a], pos[b]);
                joined[x * n + y] += 1;
                joined[y * n + x] += 1;
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if joined[x * n + y] != 1 {
                return Some(format!("points {} and {} are on {} lines", points[x], points[y], joined[x * n + y]));
            }
        }
    }
    for l in &lines {
        for &p in points {
            if l.contains(&p) {
                continue;
            }
            let parallels = lines.iter().filter(|m| m.contains(&p) && m.iter().all(|x| !l.contains(x))).count();
            if parallels != 1 {
                return Some(format!("point {p} has {parallels} parallels to a line"));
            }
        }
    }
    None
}

/// Hj1 to Hj4 from combinatorial data: tubes as sorted point lists with
/// their vertices, `chi` as a singular plane index per point, and singular
/// lines as (vertex, points of X).
pub fn hj_checks(tubes: &[Vec<usize>], tube_vertex: &[usize], chi: &[Option<usize>], singular_lines: &[(usize, Vec<usize>)], q: usize) -> [AxiomReport; 4] {
    let n = chi.len();
    let mut through = vec![vec![]; n];
    for (t, pts) in tubes.iter().enumerate() {
        for &p in pts {
            through[p].push(t);
        }
    }
    let common = |a: &[usize], b: &[usize]| a.iter().filter(|x| b.binary_search(x).is_ok()).count();

    let mut hj1 = AxiomReport::new("Hj1", "Hjelmslev property Hj1: points joined by a unique tube iff their images differ");
    let fails: Vec<Witness> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let through = &through;
            (a + 1..n).filter_map(move |b| {
                let k = common(&through[a], &through[b]);
                let distinct = chi[a] != chi[b] || chi[a].is_none();
                (k == 0 || (k == 1) != distinct).then(|| Witness::new(format!("{k} joining tubes, images distinct = {distinct}")).points([a, b]))
            })
        })
        .collect();
    hj1.absorb(fails);

    let mut hj2 = AxiomReport::new("Hj2", "Hjelmslev property Hj2: tubes meet in a unique point iff their images differ");
    let m = tubes.len();
    let fails: Vec<Witness> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| {
            (a + 1..m).filter_map(move |b| {
                let k = common(&tubes[a], &tubes[b]);
                let distinct = tube_vertex[a] != tube_vertex[b];
                (k == 0 || (k == 1) != distinct).then(|| Witness::new(format!("{k} common points, images distinct = {distinct}")).lines([a, b]))
            })
        })
        .collect();
    hj2.absorb(fails);

    let mut hj3 = AxiomReport::new("Hj3", "Hjelmslev property Hj3: fibers of chi are affine planes");
    let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, c) in chi.iter().enumerate() {
        match c {
            Some(c) => fibers.entry(*c).or_default().push(x),
            None => hj3.fail(Witness::new("point without image").points([x])),
        }
    }
    for (k, fiber) in &fibers {
        let lines: Vec<Vec<usize>> =
            tubes.iter().map(|t| t.iter().copied().filter(|p| chi[*p] == Some(*k)).collect::<Vec<_>>()).filter(|l| l.len() >= 2).collect();
        if let Some(v) = affine_plane_violation(fiber, &lines, q) {
            hj3.fail(Witness::new(format!("fiber {k}: {v}")).points(fiber.iter().copied()));
        }
    }
    hj3.stat("fiber_sizes", histogram(fibers.values().map(|f| f.len())));

    let mut hj4 = AxiomReport::new("Hj4", "Hjelmslev property Hj4: tubes over a line of the dual plane form an affine plane");
    let vertices: HashSet<usize> = tube_vertex.iter().copied().collect();
    let mut vs: Vec<usize> = vertices.into_iter().collect();
    vs.sort_unstable();
    for y in vs {
        let ts: Vec<usize> = (0..m).filter(|&t| tube_vertex[t] == y).collect();
        let lines: Vec<Vec<usize>> = singular_lines
            .iter()
            .filter(|(v, _)| *v == y)
            .map(|(_, pts)| ts.iter().copied().filter(|&t| pts.iter().all(|p| tubes[t].binary_search(p).is_ok())).collect())
            .collect();
        if let Some(v) = affine_plane_violation(&ts, &lines, q) {
            hj4.fail(Witness::new(format!("vertex {y}: {v}")).lines(ts.iter().copied()));
        }
    }
    [hj1, hj2, hj3, hj4]
}

/// Runs the full suite on a dual model. The embedded quadric Veronese
/// variety is located through the ring coordinates of `plane`.
pub fn check_h_axioms(model: &VeroneseanModel, plane: &PlaneModel) -> Result<HjelmslevReport, VsetError> {
    let c = Candidate::from_model(model);
    let f = c.field().clone();
    let q = f.order();
    let [h1, h2, h3] = check_h_basic(&c);

    // vertex plane
    let y = c.vertices();
    let y_index: HashMap<PGPoint, usize> = y.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let pi_y = Subspace::span(&f, c.ambient, &y);
    let mut y_plane = AxiomReport::new("Y-plane", "the vertices form the point set of a plane");
    y_plane.require(pi_y.dim() == 2, || Witness::new(format!("vertices span dimension {}", pi_y.dim())));
    y_plane.require(y.len() == q * q + q + 1, || Witness::new(format!("{} vertices", y.len())));
    if pi_y.dim() == 2 {
        y_plane.require(pi_y.points(&f).iter().all(|p| y_index.contains_key(p)), || Witness::new("a point of the span is not a vertex"));
    }

    // singular lines: generators of tubes
    let mut line_pos: HashMap<Subspace, usize> = HashMap::new();
    let mut singular_lines: Vec<Subspace> = vec![];
    let mut line_data: Vec<(usize, Vec<usize>)> = vec![];
    let mut tube_vertex = vec![];
    for mem in &c.xi {
        let v = mem.quadric.vertex.as_ref().and_then(|v| y_index.get(v).copied()).unwrap_or(usize::MAX);
        tube_vertex.push(v);
        for g in &mem.quadric.generators {
            if !line_pos.contains_key(g) {
                line_pos.insert(g.clone(), singular_lines.len());
                singular_lines.push(g.clone());
                line_data.push((v, c.points_in(g)));
            }
        }
    }
    let mut lines_through = vec![vec![]; c.x.len()];
    for (l, (_, pts)) in line_data.iter().enumerate() {
        for &p in pts {
            lines_through[p].push(l);
        }
    }

    // singular planes and chi
    let mut singular_structure =
        AxiomReport::new("singular-planes", "each point lies in a unique singular plane; radical lines are the lines of the vertex plane");
    let mut plane_pos: HashMap<Subspace, usize> = HashMap::new();
    let mut singular_planes: Vec<SingularPlane> = vec![];
    let mut chi = vec![None; c.x.len()];
    for x in 0..c.x.len() {
        let span = lines_through[x].iter().fold(Subspace::empty(c.ambient), |s, &l| s.join(&f, &singular_lines[l]));
        if let Some(&k) = plane_pos.get(&span) {
            chi[x] = Some(k);
            continue;
        }
        if span.dim() != 2 {
            singular_structure.fail(Witness::new(format!("singular lines through the point span dimension {}", span.dim())).points([x]));
            continue;
        }
        let pts = span.points(&f);
        let in_y: Vec<&PGPoint> = pts.iter().filter(|p| y_index.contains_key(*p)).collect();
        let radical = Subspace::span(&f, c.ambient, in_y.iter().copied());
        let others_in_x = pts.iter().filter(|p| !y_index.contains_key(*p)).all(|p| c.index_of(p).is_some());
        if radical.dim() != 1 || in_y.len() != q + 1 || !others_in_x {
            singular_structure.fail(Witness::new("plane of singular lines is not singular").points([x]));
            continue;
        }
        let points = c.points_in(&span);
        plane_pos.insert(span.clone(), singular_planes.len());
        chi[x] = Some(singular_planes.len());
        singular_planes.push(SingularPlane { plane: span, radical, points });
    }
    for x in 0..c.x.len() {
        let containing = singular_planes.iter().filter(|s| s.plane.contains(&f, &c.x[x])).count();
        singular_structure.require(containing == 1, || Witness::new(format!("point lies in {containing} singular planes")).points([x]));
    }
    let radicals: HashSet<&Subspace> = singular_planes.iter().map(|s| &s.radical).collect();
    singular_structure.require(radicals.len() == singular_planes.len() && singular_planes.len() == q * q + q + 1, || {
        Witness::new(format!("{} singular planes with {} radical lines", singular_planes.len(), radicals.len()))
    });
    singular_structure.require(radicals.iter().all(|r| pi_y.contains_subspace(&f, r)), || Witness::new("radical line outside the vertex plane"));

    let tubes: Vec<Vec<usize>> = c.xi.iter().map(|m| m.points.clone()).collect();
    let [hj1, hj2, hj3, hj4] = hj_checks(&tubes, &tube_vertex, &chi, &line_data, q);

    // census
    let n_x: Vec<usize> = c.members_through().iter().map(|t| t.len()).collect();
    let g_x: Vec<usize> = lines_through.iter().map(|l| l.len()).collect();
    let x_y_sets: Vec<Vec<usize>> = (0..y.len())
        .map(|v| {
            let mut s: Vec<usize> = line_data.iter().filter(|(w, _)| *w == v).flat_map(|(_, p)| p.iter().copied()).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let census = Census {
        n: c.x.len(),
        count_identity: (0..c.x.len()).all(|x| c.x.len() == 4 * n_x[x] + g_x[x] + 1),
        g_x: histogram(g_x),
        n_x: histogram(n_x),
        x_y: histogram(x_y_sets.iter().map(|s| s.len())),
    };

    // embedded quadric Veronese variety: triples with coordinates in K
    let mut v_points: Vec<usize> = plane
        .points
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().all(|e| e.y.is_zero()))
        .map(|(p, _)| model.pt_map[p])
        .collect();
    v_points.sort_unstable();
    let v_span = Subspace::span(&f, c.ambient, v_points.iter().map(|&i| &c.x[i]));
    let veronese_sub = VeroneseSub {
        span_dim: v_span.dim(),
        skew_to_pi_y: v_span.intersect(&f, &pi_y).dim() < 0,
        one_per_singular_plane: v_points.len() == singular_planes.len()
            && singular_planes.iter().all(|s| v_points.iter().filter(|i| s.points.binary_search(i).is_ok()).count() == 1),
        subspace: v_span,
        points: v_points,
    };

    // vertex cones
    let mut scroll = AxiomReport::new("scroll", "vertex cones over normal rational cubic scrolls with matching cross-ratios");
    let scroll_checks: Vec<ScrollCheck> = (0..y.len())
        .into_par_iter()
        .map(|v| scroll_check(&c, &y, v, &x_y_sets[v], &pi_y, &singular_planes, &veronese_sub.points))
        .collect::<Result<_, _>>()?;
    for s in &scroll_checks {
        scroll.require(s.span_dim == 5 && s.cone_matches && s.cross_ratio_matches != Some(false), || {
            Witness::new(format!("span {} cone {} cross-ratio {:?}", s.span_dim, s.cone_matches, s.cross_ratio_matches)).points([s.vertex])
        });
    }

    Ok(HjelmslevReport {
        h1,
        h2,
        h3,
        y,
        pi_y,
        y_plane,
        singular_lines,
        singular_planes,
        chi,
        singular_structure,
        hj1,
        hj2,
        hj3,
        hj4,
        census,
        veronese_sub,
        scroll_checks,
        scroll,
    })
}

fn scroll_check(
    c: &Candidate,
    y: &[PGPoint],
    v: usize,
    x_y: &[usize],
    pi_y: &Subspace,
    planes: &[SingularPlane],
    v_points: &[usize],
) -> Result<ScrollCheck, VsetError> {
    let f = &**c.field();
    let q = f.order();
    let vertex = &y[v];
    let span_dim = Subspace::span(f, c.ambient, x_y.iter().map(|&i| &c.x[i])).dim();
    let failed = ScrollCheck { vertex: v, span_dim, cone_matches: false, cross_ratio_matches: Some(false) };
    let pi_pts = pi_y.points(f);
    let within = Subspace::span(f, c.ambient, x_y.iter().map(|&i| &c.x[i]).chain(&pi_pts).chain([vertex]));
    if within.dim() != 5 {
        return Ok(failed);
    }
    let proj = Projection::new(f, &Subspace::span(f, c.ambient, [vertex]), &within)?;
    let image = |p: &PGPoint| proj.project(f, p).map(|o| o.expect("point differs from the vertex"));
    let mut src_set: HashSet<PGPoint> = HashSet::new();
    for &i in x_y {
        src_set.insert(image(&c.x[i])?);
    }
    for p in pi_pts.iter().filter(|p| *p != vertex) {
        src_set.insert(image(p)?);
    }
    // rulings: singular planes whose radical line passes through the vertex
    let through: Vec<&SingularPlane> = planes.iter().filter(|s| s.radical.contains(f, vertex)).collect();
    let mut directrix = vec![];
    let mut conic = vec![];
    let mut raw_conic = vec![];
    let mut radicals = vec![];
    for s in &through {
        let on: Vec<usize> = v_points.iter().copied().filter(|i| s.points.binary_search(i).is_ok()).collect();
        if on.len() != 1 {
            return Ok(failed);
        }
        let other = s.radical.points(f).into_iter().find(|p| p != vertex).expect("a line has two points");
        directrix.push(image(&other)?);
        conic.push(image(&c.x[on[0]])?);
        raw_conic.push(c.x[on[0]].clone());
        radicals.push(s.radical.clone());
    }
    if through.len() != q + 1 {
        return Ok(failed);
    }
    let reference = scroll_s12(f);
    let line = Subspace::span(f, 4, &directrix[..2]);
    let z = Fe::ZERO;
    let mut dst = vec![];
    for d in &directrix {
        let st = line.coords_of(f, d.coords()).ok_or_else(|| VsetError::Invariant("directrix points are not collinear".into()))?;
        dst.push(PGPoint::new(f, vec![st[0], st[1], z, z, z])?);
    }
    for d in &directrix {
        let st = line.coords_of(f, d.coords()).expect("checked above");
        dst.push(PGPoint::new(f, vec![z, z, f.mul(st[0], st[0]), f.mul(st[0], st[1]), f.mul(st[1], st[1])])?);
    }
    let src: Vec<PGPoint> = directrix.iter().chain(&conic).cloned().collect();
    let ref_set: HashSet<&PGPoint> = reference.points.iter().collect();
    let cone_matches = src_set.len() == ref_set.len()
        && fit_equivalence(f, &src, &dst).is_some_and(|m| src_set.iter().all(|p| ref_set.contains(&crate::projgeom::apply(f, &m, p))));

    let cross_ratio_matches = if q >= 3 {
        let transversal = pi_pts
            .iter()
            .flat_map(|a| pi_pts.iter().map(move |b| (a, b)))
            .map(|(a, b)| Subspace::span(f, c.ambient, [a, b]))
            .find(|l| l.dim() == 1 && !l.contains(f, vertex))
            .expect("a plane has lines missing a point");
        let cuts: Vec<PGPoint> = radicals
            .iter()
            .map(|r| PGPoint::new(f, r.intersect(f, &transversal).basis()[0].clone()))
            .collect::<Result<_, _>>()?;
        let k = cuts.len();
        let mut ok = true;
        for a in 0..k {
            for b in 0..k {
                for d in 0..k {
                    for e in 0..k {
                        if [a, b, d, e].iter().collect::<HashSet<_>>().len() < 4 {
                            continue;
                        }
                        let lines = cross_ratio(f, &cuts[a], &cuts[b], &cuts[d], &cuts[e])?;
                        let on_conic = conic_cross_ratio(f, &raw_conic, [&raw_conic[a], &raw_conic[b], &raw_conic[d], &raw_conic[e]])?;
                        ok &= lines == on_conic;
                    }
                }
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(ScrollCheck { vertex: v, span_dim, cone_matches, cross_ratio_matches })
}
