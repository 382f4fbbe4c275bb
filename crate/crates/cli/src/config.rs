use clap::{Args, ValueEnum};
use quadplane::gf::Field;
use quadplane::quadalg::{Algebra, Kind};
use quadplane::vsets::Construction;
use serde::Serialize;
use std::path::PathBuf;
use std::sync::Arc;

/// A configuration problem; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(ConfigError(msg.into()).into())
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Field order as P or P^E.
    #[arg(long)]
    pub field: String,
    /// Modulus coefficients c0,c1,...,ce (monic, irreducible).
    #[arg(long)]
    pub modulus: Option<String>,
    /// Algebra kind: extension, dual or split.
    #[arg(long, conflicts_with_all = ["t", "n"])]
    pub kind: Option<String>,
    /// Algebra parameter t of X^2 - tX + n, as a field element index.
    #[arg(long, requires = "n")]
    pub t: Option<u64>,
    /// Algebra parameter n of X^2 - tX + n, as a field element index.
    #[arg(long, requires = "t")]
    pub n: Option<u64>,
    /// Comma-separated constructions: matrices, reduction, juxtaposition, parametrization.
    #[arg(long)]
    pub construction: Option<String>,
    /// Output path (report file for verify, directory for export).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for the checkers.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated checks: algebra, plane, vaxioms, saxioms, haxioms,
    /// equivalence, transitivity, uniqueness, census.
    #[arg(long)]
    pub checks: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Algebra,
    Plane,
    Vaxioms,
    Saxioms,
    Haxioms,
    Equivalence,
    Transitivity,
    Uniqueness,
    Census,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Algebra => "algebra",
            Check::Plane => "plane",
            Check::Vaxioms => "vaxioms",
            Check::Saxioms => "saxioms",
            Check::Haxioms => "haxioms",
            Check::Equivalence => "equivalence",
            Check::Transitivity => "transitivity",
            Check::Uniqueness => "uniqueness",
            Check::Census => "census",
        }
    }

    const ALL: [Check; 9] = [
        Check::Algebra,
        Check::Plane,
        Check::Vaxioms,
        Check::Saxioms,
        Check::Haxioms,
        Check::Equivalence,
        Check::Transitivity,
        Check::Uniqueness,
        Check::Census,
    ];
}

/// Algebra as requested on the command line.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraSpec {
    Kind(Kind),
    Params { t: u64, n: u64 },
}

/// The part of the configuration that determines the results; echoed in
/// the report and covered by its digest.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub p: u32,
    pub e: u32,
    pub modulus: Option<Vec<u32>>,
    pub algebra: AlgebraSpec,
    pub constructions: Vec<Construction>,
    pub checks: Vec<Check>,
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_field(s: &str) -> anyhow::Result<(u32, u32)> {
    let (p, e) = match s.split_once('^') {
        Some((p, e)) => (p, e),
        None => (s, "1"),
    };
    match (p.trim().parse(), e.trim().parse()) {
        (Ok(p), Ok(e)) => Ok((p, e)),
        _ => config_err(format!("--field expects P or P^E, got {s:?}")),
    }
}

fn parse_kind(s: &str) -> anyhow::Result<Kind> {
    match s.to_ascii_lowercase().as_str() {
        "extension" => Ok(Kind::Extension),
        "dual" => Ok(Kind::Dual),
        "split" => Ok(Kind::Split),
        _ => config_err(format!("unknown kind {s:?}; expected extension, dual or split")),
    }
}

pub fn parse_constructions(s: Option<&str>) -> anyhow::Result<Vec<Construction>> {
    let Some(s) = s else {
        return Ok(vec![Construction::Matrices, Construction::Reduction, Construction::Juxtaposition, Construction::Parametrization]);
    };
    let mut out = vec![];
    for c in split_list(s) {
        let c = match c {
            "matrices" => Construction::Matrices,
            "reduction" => Construction::Reduction,
            "juxtaposition" => Construction::Juxtaposition,
            "parametrization" => Construction::Parametrization,
            _ => return config_err(format!("unknown construction {c:?}")),
        };
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return config_err("--construction is empty");
    }
    Ok(out)
}

fn parse_checks(s: Option<&str>, kind: Kind) -> anyhow::Result<Vec<Check>> {
    let Some(s) = s else {
        let mut d = vec![Check::Algebra, Check::Plane, Check::Vaxioms, Check::Equivalence];
        match kind {
            Kind::Split => d.push(Check::Saxioms),
            Kind::Dual => d.extend([Check::Haxioms, Check::Census]),
            Kind::Extension => {}
        }
        d.sort();
        return Ok(d);
    };
    let mut out = vec![];
    for c in split_list(s) {
        match Check::ALL.iter().find(|k| k.name() == c) {
            Some(&k) if !out.contains(&k) => out.push(k),
            Some(_) => {}
            None => return config_err(format!("unknown check {c:?}")),
        }
    }
    if out.is_empty() {
        return config_err("--checks is empty");
    }
    out.sort();
    Ok(out)
}

/// A validated configuration with its field and algebra built.
pub struct Resolved {
    pub config: RunConfig,
    pub field: Arc<Field>,
    pub algebra: Arc<Algebra>,
}

pub fn resolve(args: &ModelArgs, checks: Option<&str>) -> anyhow::Result<Resolved> {
    let (p, e) = parse_field(&args.field)?;
    let modulus = match &args.modulus {
        None => None,
        Some(m) => Some(
            split_list(m)
                .map(|c| c.parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| ConfigError(format!("--modulus expects comma-separated integers, got {m:?}")))?,
        ),
    };
    let field = Field::new(p, e, modulus.clone()).map_err(|err| ConfigError(err.to_string()))?;
    let (spec, t, n) = match (&args.kind, args.t, args.n) {
        (Some(k), None, None) => {
            let kind = parse_kind(k)?;
            let (t, n) = Algebra::canonical_params(&field, kind);
            (AlgebraSpec::Kind(kind), t, n)
        }
        (None, Some(t), Some(n)) => {
            let elem = |v: u64| field.elem(v).map_err(|err| ConfigError(err.to_string()));
            (AlgebraSpec::Params { t, n }, elem(t)?, elem(n)?)
        }
        _ => return config_err("give either --kind or both --t and --n"),
    };
    let algebra = Algebra::new(field.clone(), t, n).map_err(|err| ConfigError(err.to_string()))?;
    let constructions = parse_constructions(args.construction.as_deref())?;
    let checks = parse_checks(checks, algebra.kind())?;
    let config = RunConfig { p, e, modulus, algebra: spec, constructions, checks };
    validate(&config, &algebra)?;
    Ok(Resolved { config, field, algebra })
}

/// Largest field order for the exhaustive 4-subset and group scans.
pub const SCAN_MAX_Q: usize = 3;

fn validate(c: &RunConfig, alg: &Algebra) -> anyhow::Result<()> {
    let kind = alg.kind();
    let q = alg.q();
    for &check in &c.checks {
        match check {
            Check::Saxioms if kind != Kind::Split => return config_err(format!("saxioms requires a split algebra, got {kind}")),
            Check::Haxioms | Check::Census if kind != Kind::Dual => {
                return config_err(format!("{} requires a dual algebra, got {kind}", check.name()))
            }
            Check::Transitivity | Check::Uniqueness if q > SCAN_MAX_Q => {
                return config_err(format!("{} enumerates exhaustively and supports q <= {SCAN_MAX_Q}, got q = {q}", check.name()))
            }
            _ => {}
        }
    }
    let needs_model = c.checks.iter().any(|k| matches!(k, Check::Vaxioms | Check::Saxioms | Check::Haxioms | Check::Uniqueness | Check::Census));
    if needs_model && primary_construction(&c.constructions).is_none() {
        return config_err("axiom checks need one of the matrices, reduction or juxtaposition constructions");
    }
    Ok(())
}

/// The model the axiom checks run on: the first listed construction that
/// always yields a V-set.
pub fn primary_construction(cs: &[Construction]) -> Option<Construction> {
    cs.iter().copied().find(|&c| c != Construction::Parametrization)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(field: &str, kind: &str) -> ModelArgs {
        ModelArgs {
            field: field.into(),
            modulus: None,
            kind: Some(kind.into()),
            t: None,
            n: None,
            construction: None,
            out: None,
            threads: None,
        }
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field("2").unwrap(), (2, 1));
        assert_eq!(parse_field("2^3").unwrap(), (2, 3));
        assert!(parse_field("two").is_err());
    }

    #[test]
    fn kind_resolves_to_canonical_parameters() {
        let r = resolve(&args("3", "extension"), None).unwrap();
        assert_eq!(r.algebra.kind(), Kind::Extension);
        let (t, n) = Algebra::canonical_params(&r.field, Kind::Extension);
        assert_eq!((r.algebra.t(), r.algebra.n()), (t, n));
    }

    #[test]
    fn default_checks_follow_the_kind() {
        assert!(resolve(&args("2", "dual"), None).unwrap().config.checks.contains(&Check::Haxioms));
        assert!(resolve(&args("2", "split"), None).unwrap().config.checks.contains(&Check::Saxioms));
        let ext = resolve(&args("2", "extension"), None).unwrap().config.checks;
        assert!(!ext.contains(&Check::Saxioms) && !ext.contains(&Check::Haxioms));
    }

    #[test]
    fn mismatched_checks_are_config_errors() {
        for (kind, check) in [("dual", "saxioms"), ("split", "haxioms"), ("extension", "census")] {
            let err = resolve(&args("2", kind), Some(check)).err().unwrap();
            assert!(err.downcast_ref::<ConfigError>().is_some());
        }
        assert!(resolve(&args("5", "dual"), Some("uniqueness")).is_err());
        let mut a = args("2", "dual");
        a.construction = Some("parametrization".into());
        assert!(resolve(&a, Some("vaxioms")).is_err());
        assert!(resolve(&a, Some("algebra")).is_ok());
    }

    #[test]
    fn explicit_parameters() {
        let mut a = args("3", "dual");
        a.kind = None;
        a.t = Some(0);
        a.n = Some(1);
        assert_eq!(resolve(&a, None).unwrap().algebra.kind(), Kind::Extension);
        a.n = Some(7);
        assert!(resolve(&a, None).is_err());
    }
}
