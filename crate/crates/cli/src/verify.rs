use crate::config::{primary_construction, Check, Resolved, RunConfig};
use crate::models::{build_models, Models};
use quadplane::axiomlab::{
    check_h_axioms, check_s_model, check_v_axioms, containment_uniqueness, Candidate, Census, HjelmslevReport,
};
use quadplane::gf::FieldDescriptor;
use quadplane::quadalg::{check_algebra, AlgebraDescriptor, Kind};
use quadplane::report::{AxiomReport, Witness};
use quadplane::ringplane::{check_plane, quadrangle_transitivity_report};
use quadplane::vsets::{
    model_equivalence, quadric_veronese_equivalence, reference_line_check, segre_equivalence, Construction, ModelEquivalence,
};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub holds: bool,
    pub reports: Vec<AxiomReport>,
    pub details: Value,
}

#[derive(Serialize)]
pub struct ModelSummary {
    pub construction: Construction,
    pub points: usize,
    pub members: usize,
    pub span_dim: isize,
    /// SHA-256 of the model JSON.
    pub digest: String,
}

/// Everything the digest covers.
#[derive(Serialize)]
pub struct ReportBody {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub field: FieldDescriptor,
    pub algebra: AlgebraDescriptor,
    pub plane_digest: String,
    pub models: Vec<ModelSummary>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusSummary>,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct Report {
    #[serde(flatten)]
    pub body: ReportBody,
    /// SHA-256 of the serialized body.
    pub digest: String,
    /// Wall-clock seconds per phase; not covered by the digest.
    pub timings: BTreeMap<String, f64>,
}

/// The census with constant values pulled out of the histograms.
#[derive(Serialize)]
pub struct CensusSummary {
    pub n: usize,
    pub g_x: Option<usize>,
    pub n_x: Option<usize>,
    pub x_y: Option<usize>,
    pub count_identity: bool,
    pub histograms: Census,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest_of(value: &impl Serialize) -> String {
    sha256_hex(&serde_json::to_vec(value).expect("report values serialize"))
}

fn constant(h: &BTreeMap<String, usize>) -> Option<usize> {
    match h.len() {
        1 => h.keys().next().and_then(|k| k.parse().ok()),
        _ => None,
    }
}

fn equivalence_report(id: &str, anchor: &str, eq: &ModelEquivalence) -> AxiomReport {
    let mut rep = AxiomReport::new(id, anchor);
    rep.require(eq.holds(), || {
        Witness::new(if eq.matrix.is_none() {
            "no projectivity found".to_string()
        } else {
            format!("{}/{} points and {}/{} subspaces matched", eq.points_matched, eq.points_checked, eq.subspaces_matched, eq.subspaces_checked)
        })
    });
    rep.stat("points_checked", eq.points_checked);
    rep.stat("subspaces_checked", eq.subspaces_checked);
    rep
}

struct Runner<'a> {
    r: &'a Resolved,
    models: Models,
    hjelmslev: Option<HjelmslevReport>,
    timings: BTreeMap<String, f64>,
}

impl Runner<'_> {
    fn primary(&self) -> &quadplane::vsets::VeroneseanModel {
        let c = primary_construction(&self.r.config.constructions).expect("validated");
        self.models.get(c).expect("primary model is built")
    }

    fn hjelmslev(&mut self) -> anyhow::Result<&HjelmslevReport> {
        if self.hjelmslev.is_none() {
            self.hjelmslev = Some(check_h_axioms(self.primary(), &self.models.plane)?);
        }
        Ok(self.hjelmslev.as_ref().expect("just computed"))
    }

    fn run(&mut self, check: Check) -> anyhow::Result<(Vec<AxiomReport>, Value)> {
        let kind = self.r.algebra.kind();
        Ok(match check {
            Check::Algebra => (vec![check_algebra(&self.r.algebra)], json!({ "kind": kind })),
            Check::Plane => (vec![check_plane(&self.models.plane)], json!({ "points": self.models.plane.num_points() })),
            Check::Vaxioms => {
                let c = Candidate::from_model(self.primary());
                (check_v_axioms(&c).to_vec(), json!({ "construction": self.primary().construction }))
            }
            Check::Saxioms => {
                let s = check_s_model(self.primary(), &self.models.plane)?;
                let mut reports = s.axioms.to_vec();
                reports.push(equivalence_report("segre", "Segre variety of type (2,2)", &s.segre));
                (reports, json!({ "segre": s.segre, "singular_planes_per_point": s.singular_planes_per_point }))
            }
            Check::Haxioms => {
                let h = self.hjelmslev()?;
                let mut reports: Vec<AxiomReport> = h.reports().into_iter().cloned().collect();
                let mut v = AxiomReport::new("veronese", "embedded quadric Veronese variety spans a 5-space skew to the vertex plane");
                let vs = &h.veronese_sub;
                v.require(vs.span_dim == 5, || Witness::new(format!("span dimension {}", vs.span_dim)));
                v.require(vs.skew_to_pi_y, || Witness::new("meets the vertex plane"));
                v.require(vs.one_per_singular_plane, || Witness::new("not one point per singular plane"));
                reports.push(v);
                let details = json!({
                    "y": h.y,
                    "pi_y": h.pi_y,
                    "veronese_sub": h.veronese_sub,
                    "scroll_checks": h.scroll_checks,
                });
                (reports, details)
            }
            Check::Census => {
                let q = self.r.algebra.q();
                let census = self.hjelmslev()?.census.clone();
                let mut rep = AxiomReport::new("census", "Hjelmslev census: singular lines, tubes and X_y sizes per point");
                rep.require(constant(&census.g_x) == Some(q + 1), || Witness::new("singular lines per point not constant q+1"));
                rep.require(constant(&census.n_x) == Some(q * (q + 1)), || Witness::new("tubes per point not constant q(q+1)"));
                rep.require(constant(&census.x_y) == Some(q * q * (q + 1)), || Witness::new("X_y sizes not constant q^2(q+1)"));
                if q == 2 {
                    rep.require(census.count_identity, || Witness::new("|X| != 4 n_x + g_x + 1"));
                }
                (vec![rep], json!({}))
            }
            Check::Equivalence => self.equivalence()?,
            Check::Transitivity => {
                let t = quadrangle_transitivity_report(&self.models.plane)?;
                let mut rep = AxiomReport::new("transitivity", "sharp transitivity on proper ordered quadrangles");
                rep.require(t.transitive, || Witness::new("some quadrangle is not an image of the standard one"));
                rep.require(t.count_quadrangles == t.group_order, || {
                    Witness::new(format!("{} quadrangles but {} group elements", t.count_quadrangles, t.group_order))
                });
                rep.require(t.stabilizer_order == 1, || {
                    Witness::new(format!("standard quadrangle stabilizer of order {} ({} scalar matrices)", t.stabilizer_order, t.scalar_matrices))
                });
                (vec![rep], serde_json::to_value(&t)?)
            }
            Check::Uniqueness => {
                let c = Candidate::from_model(self.primary());
                (vec![containment_uniqueness(&c, kind)?], json!({ "construction": self.primary().construction }))
            }
        })
    }

    fn equivalence(&mut self) -> anyhow::Result<(Vec<AxiomReport>, Value)> {
        let alg = self.r.algebra.clone();
        let plane = &self.models.plane;
        let matrices = &self.models.matrices;
        let mut reports = vec![];
        let mut details = serde_json::Map::new();
        for m in self.models.vsets() {
            let mut rep = AxiomReport::new(format!("vset:{}", construction_name(m.construction)), "V-set spans PG(8,q), lines give quadrics of the kind");
            rep.absorb(m.violations(plane).into_iter().map(Witness::new).collect());
            reports.push(rep);
            if m.construction != Construction::Matrices {
                let eq = model_equivalence(matrices, m);
                let id = format!("equivalence:matrices~{}", construction_name(m.construction));
                reports.push(equivalence_report(&id, "projectivity between constructions, checked on all points and lines", &eq));
                details.insert(id, serde_json::to_value(&eq)?);
            }
        }
        if let Some(par) = &self.models.parametrization {
            let mut rep = AxiomReport::new("parametrization", "parametrization is a V-set exactly when t^2 - 4n is nonzero");
            let expected = !alg.discriminant().is_zero();
            rep.require(par.projectivity.is_some() == expected, || {
                Witness::new(format!("projectivity found = {}, discriminant nonzero = {expected}", par.projectivity.is_some()))
            });
            let q = alg.q();
            if alg.kind() == Kind::Dual && alg.field().characteristic() == 2 {
                rep.require(par.span.dim() == 2, || Witness::new(format!("span dimension {}, expected a plane", par.span.dim())));
                rep.require(par.distinct == q * q + q + 1, || Witness::new(format!("{} distinct images", par.distinct)));
            }
            rep.stat("span_dim", par.span.dim());
            rep.stat("distinct", par.distinct);
            reports.push(rep);
            details.insert("parametrization".into(), json!({ "zeta": par.zeta, "span_dim": par.span.dim(), "distinct": par.distinct, "projectivity": par.projectivity }));
            if alg.kind() == Kind::Dual && alg.field().characteristic() != 2 {
                let (dim, eq) = quadric_veronese_equivalence(plane)?;
                let mut rep = equivalence_report("quadric-veronese", "dual parametrization is a quadric Veronese variety", &eq);
                rep.require(dim == 5, || Witness::new(format!("span dimension {dim}")));
                reports.push(rep);
                details.insert("quadric_veronese".into(), serde_json::to_value(&eq)?);
            }
        }
        if alg.kind() == Kind::Split {
            let eq = segre_equivalence(matrices, plane)?;
            reports.push(equivalence_report("segre", "Segre variety of type (2,2)", &eq));
            details.insert("segre".into(), serde_json::to_value(&eq)?);
        }
        let rl = reference_line_check(matrices, plane)?;
        let mut rep = AxiomReport::new("reference-line", "X0 X1 = X3^2 + t X3 X4 + n X4^2 on the line [0,0,1]");
        rep.require(rl.holds(), || Witness::new(format!("{rl:?}")));
        reports.push(rep);
        details.insert("reference_line".into(), serde_json::to_value(&rl)?);
        Ok((reports, Value::Object(details)))
    }
}

pub fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::Matrices => "matrices",
        Construction::Reduction => "reduction",
        Construction::Juxtaposition => "juxtaposition",
        Construction::Parametrization => "parametrization",
    }
}

pub fn verify(r: &Resolved) -> anyhow::Result<Report> {
    let start = Instant::now();
    let models = build_models(&r.algebra, &r.config.constructions)?;
    let mut timings = BTreeMap::new();
    timings.insert("build".to_string(), start.elapsed().as_secs_f64());
    let mut runner = Runner { r, models, hjelmslev: None, timings };
    let mut checks = vec![];
    for &check in &r.config.checks {
        let t = Instant::now();
        let (reports, details) = runner.run(check)?;
        runner.timings.insert(check.name().to_string(), t.elapsed().as_secs_f64());
        checks.push(CheckResult { check, holds: reports.iter().all(|a| a.holds), reports, details });
    }
    let census = match (&runner.hjelmslev, r.config.checks.contains(&Check::Census)) {
        (Some(h), true) => Some(CensusSummary {
            n: h.census.n,
            g_x: constant(&h.census.g_x),
            n_x: constant(&h.census.n_x),
            x_y: constant(&h.census.x_y),
            count_identity: h.census.count_identity,
            histograms: h.census.clone(),
        }),
        _ => None,
    };
    let models = runner
        .models
        .vsets()
        .filter(|m| r.config.constructions.contains(&m.construction))
        .map(|m| ModelSummary {
            construction: m.construction,
            points: m.x.len(),
            members: m.xi.len(),
            span_dim: m.span().dim(),
            digest: digest_of(m),
        })
        .collect();
    let body = ReportBody {
        tool: "quadplane",
        version: env!("CARGO_PKG_VERSION"),
        config: r.config.clone(),
        field: r.field.descriptor(),
        algebra: r.algebra.descriptor(),
        plane_digest: digest_of(&runner.models.plane),
        models,
        holds: checks.iter().all(|c| c.holds),
        checks,
        census,
    };
    let digest = digest_of(&body);
    let mut timings = runner.timings;
    timings.insert("total".to_string(), start.elapsed().as_secs_f64());
    Ok(Report { body, digest, timings })
}

/// A fixed-width table of every axiom report.
pub fn render_text(rep: &Report) -> String {
    let b = &rep.body;
    let mut out = format!(
        "quadplane {}  field F_{}^{}  {} algebra (t={}, n={})\n",
        b.version, b.field.p, b.field.e, b.algebra.kind, b.algebra.t, b.algebra.n
    );
    out += &format!("{:<14} {:<34} {:<6} {:>10}\n", "check", "report", "result", "violations");
    for c in &b.checks {
        for a in &c.reports {
            let verdict = if a.holds { "ok" } else { "FAIL" };
            out += &format!("{:<14} {:<34} {:<6} {:>10}\n", c.check.name(), a.id, verdict, a.violations);
        }
    }
    if let Some(c) = &b.census {
        out += &format!("census: n = {}, g_x = {:?}, n_x = {:?}, |X_y| = {:?}\n", c.n, c.g_x, c.n_x, c.x_y);
    }
    out += &format!("overall: {}\ndigest: {}\n", if b.holds { "ok" } else { "FAIL" }, rep.digest);
    out
}
