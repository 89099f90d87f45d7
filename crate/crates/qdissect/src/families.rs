//! Scan-family lookup: named built-ins or a JSON template file.
//!
//! File format mirrors the template fields:
//!
//! ```json
//! {
//!   "name": "custom",
//!   "first":  {"signs": "both", "modulus": 7, "offset_min": 1, "offset_max": 1, "power": 1},
//!   "second": {"signs": "plus", "modulus": 21, "offset_min": 1, "offset_max": 20, "power": 1},
//!   "t": 7,
//!   "order": 500
//! }
//! ```

use std::path::Path;

use serde::Deserialize;

use qdissect_core::verify::{builtin_templates, FactorTemplate, FamilyTemplate, SignChoice};

#[derive(Deserialize)]
struct FactorFile {
    signs: String,
    modulus: i64,
    offset_min: i64,
    offset_max: i64,
    power: u32,
}

#[derive(Deserialize)]
struct FamilyFile {
    name: String,
    first: FactorFile,
    second: FactorFile,
    t: i64,
    order: i64,
}

fn signs(s: &str) -> Result<SignChoice, String> {
    match s {
        "plus" => Ok(SignChoice::Plus),
        "minus" => Ok(SignChoice::Minus),
        "both" => Ok(SignChoice::Both),
        other => Err(format!("unknown sign choice {other:?} (plus|minus|both)")),
    }
}

fn factor(f: &FactorFile) -> Result<FactorTemplate, String> {
    Ok(FactorTemplate {
        signs: signs(&f.signs)?,
        modulus: f.modulus,
        offset_min: f.offset_min,
        offset_max: f.offset_max,
        power: f.power,
    })
}

/// Resolves `--family`: a built-in name first, then a template file path.
pub fn resolve(arg: &str) -> Result<FamilyTemplate, String> {
    if let Some(t) = builtin_templates().into_iter().find(|t| t.name == arg) {
        return Ok(t);
    }
    let path = Path::new(arg);
    if !path.exists() {
        let names: Vec<String> = builtin_templates().into_iter().map(|t| t.name).collect();
        return Err(format!(
            "no built-in family {:?} (have: {}) and no such file",
            arg,
            names.join(", ")
        ));
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {arg}: {e}"))?;
    let file: FamilyFile =
        serde_json::from_str(&text).map_err(|e| format!("parsing {arg}: {e}"))?;
    if file.t < 1 || file.order < 1 {
        return Err("template t and order must be positive".to_string());
    }
    if file.second.modulus % file.first.modulus != 0 {
        return Err("template moduli must nest (first divides second)".to_string());
    }
    Ok(FamilyTemplate {
        name: file.name,
        first: factor(&file.first)?,
        second: factor(&file.second)?,
        t: file.t,
        order: file.order,
    })
}
