use crate::config::{ConfigError, Resolved};
use crate::models::build_models;
use crate::verify::{construction_name, sha256_hex};
use anyhow::Context;
use quadplane::vsets::Construction;
use serde_json::json;
use std::path::{Path, PathBuf};

/// Files written by an export, with their SHA-256 digests.
pub struct Written {
    pub files: Vec<(PathBuf, String)>,
}

fn write(dir: &Path, name: &str, bytes: &[u8], written: &mut Written) -> anyhow::Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    written.files.push((path, sha256_hex(bytes)));
    Ok(())
}

/// Writes `plane.json`, one `model-<construction>.json` per requested
/// V-set, `parametrization.json` when requested, and `incidence.txt`, a
/// 0/1 grid with one row per point and one column per line.
pub fn export(r: &Resolved, dir: Option<&Path>) -> anyhow::Result<Written> {
    let dir = dir.ok_or_else(|| ConfigError("export needs --out DIR".into()))?;
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let models = build_models(&r.algebra, &r.config.constructions)?;
    let mut written = Written { files: vec![] };
    write(dir, "plane.json", &serde_json::to_vec(&models.plane)?, &mut written)?;
    for &c in &r.config.constructions {
        if let Some(m) = models.get(c) {
            write(dir, &format!("model-{}.json", construction_name(c)), &serde_json::to_vec(m)?, &mut written)?;
        }
    }
    if let (Some(p), true) = (&models.parametrization, r.config.constructions.contains(&Construction::Parametrization)) {
        let value = json!({
            "zeta": p.zeta,
            "images": p.images,
            "distinct": p.distinct,
            "span": p.span,
            "projectivity": p.projectivity,
        });
        write(dir, "parametrization.json", &serde_json::to_vec(&value)?, &mut written)?;
    }
    write(dir, "incidence.txt", models.plane.incidence.grid().as_bytes(), &mut written)?;
    Ok(written)
}
