//! Structural and semantic validation of job configs. Every violation is
//! collected (not just the first), each one citing the JSON path it occurred
//! at; the machine-readable schema shipped in `schema/jobconfig.schema.json`
//! describes the same contract.

use serde_json::{Map, Value};

use crate::config::JobConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { path: path.into(), message: message.into() }
    }
}

pub const MODEL_FAMILIES: [&str; 7] = [
    "ring",
    "ring_with_hop",
    "kspace_ring",
    "ladder",
    "ssh_chain",
    "ssh_cylinder",
    "two_site",
];

pub const JOB_TYPES: [&str; 5] =
    ["spectrum", "ep_scan", "theorem_check", "evolve", "ladder_analytic"];

pub const STATE_SELECTORS: [&str; 6] = [
    "stripe_odd_rows",
    "stripe_even_rows",
    "site",
    "ssh_edge_left",
    "two_site_a",
    "amplitudes",
];

pub const TARGET_SELECTORS: [&str; 6] = [
    "cylinder_lo",
    "cylinder_le",
    "ssh_edge_left",
    "initial",
    "two_site_c",
    "amplitudes",
];

/// Families that carry a κ parameter (and can therefore be swept).
const FAMILIES_WITH_KAPPA: [&str; 5] =
    ["ring_with_hop", "kspace_ring", "ssh_chain", "ssh_cylinder", "two_site"];

/// Families with a built-in theorem quadruple.
const FAMILIES_WITH_QUADRUPLE: [&str; 4] =
    ["ring_with_hop", "two_site", "ssh_chain", "ssh_cylinder"];

pub fn validate_text(text: &str) -> Result<JobConfig, Vec<Violation>> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| vec![Violation::new("$", format!("invalid JSON: {e}"))])?;
    validate_value(&value)
}

pub fn validate_value(value: &Value) -> Result<JobConfig, Vec<Violation>> {
    let mut v = Vec::new();
    let root = match value.as_object() {
        Some(o) => o,
        None => {
            return Err(vec![Violation::new("$", "config must be a JSON object")]);
        }
    };
    check_keys(root, "$", &["model", "job"], &mut v);

    let family = match root.get("model") {
        Some(model) => validate_model(model, &mut v),
        None => {
            v.push(Violation::new("$.model", "missing required key"));
            None
        }
    };
    match root.get("job") {
        Some(job) => validate_job(job, family.as_deref(), root.get("model"), &mut v),
        None => v.push(Violation::new("$.job", "missing required key")),
    }

    if !v.is_empty() {
        return Err(v);
    }
    serde_json::from_value::<JobConfig>(value.clone())
        .map_err(|e| vec![Violation::new("$", format!("config does not parse: {e}"))])
}

fn check_keys(map: &Map<String, Value>, path: &str, allowed: &[&str], v: &mut Vec<Violation>) {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            v.push(Violation::new(
                format!("{path}.{key}"),
                format!("unknown key (allowed: {})", allowed.join(", ")),
            ));
        }
    }
}

fn as_object<'a>(value: &'a Value, path: &str, v: &mut Vec<Violation>) -> Option<&'a Map<String, Value>> {
    match value.as_object() {
        Some(o) => Some(o),
        None => {
            v.push(Violation::new(path, "must be a JSON object"));
            None
        }
    }
}

fn get_uint(map: &Map<String, Value>, path: &str, key: &str, v: &mut Vec<Violation>) -> Option<u64> {
    match map.get(key) {
        None => {
            v.push(Violation::new(format!("{path}.{key}"), "missing required key"));
            None
        }
        Some(val) => match val.as_u64() {
            Some(n) => Some(n),
            None => {
                v.push(Violation::new(
                    format!("{path}.{key}"),
                    "must be a nonnegative integer",
                ));
                None
            }
        },
    }
}

fn get_finite(map: &Map<String, Value>, path: &str, key: &str, v: &mut Vec<Violation>) -> Option<f64> {
    match map.get(key) {
        None => {
            v.push(Violation::new(format!("{path}.{key}"), "missing required key"));
            None
        }
        Some(val) => finite_number(val, &format!("{path}.{key}"), v),
    }
}

fn finite_number(value: &Value, path: &str, v: &mut Vec<Violation>) -> Option<f64> {
    match value.as_f64() {
        Some(x) if x.is_finite() => Some(x),
        _ => {
            v.push(Violation::new(path, "must be a finite number"));
            None
        }
    }
}

/// A complex scalar: a plain number or a `[re, im]` pair of finite numbers.
fn complex_param(value: &Value, path: &str, v: &mut Vec<Violation>) -> bool {
    match value {
        Value::Number(_) => finite_number(value, path, v).is_some(),
        Value::Array(items) if items.len() == 2 => {
            let re = finite_number(&items[0], &format!("{path}[0]"), v);
            let im = finite_number(&items[1], &format!("{path}[1]"), v);
            re.is_some() && im.is_some()
        }
        _ => {
            v.push(Violation::new(path, "must be a number or a [re, im] pair"));
            false
        }
    }
}

fn require_complex(map: &Map<String, Value>, path: &str, key: &str, v: &mut Vec<Violation>) {
    match map.get(key) {
        None => v.push(Violation::new(format!("{path}.{key}"), "missing required key")),
        Some(val) => {
            complex_param(val, &format!("{path}.{key}"), v);
        }
    }
}

fn validate_model(value: &Value, v: &mut Vec<Violation>) -> Option<String> {
    let path = "$.model";
    let map = as_object(value, path, v)?;
    let family = match map.get("family").and_then(Value::as_str) {
        Some(f) => f.to_string(),
        None => {
            v.push(Violation::new(
                format!("{path}.family"),
                format!("must be one of: {}", MODEL_FAMILIES.join(", ")),
            ));
            return None;
        }
    };
    match family.as_str() {
        "ring" => {
            check_keys(map, path, &["family", "n_half"], v);
            if let Some(n) = get_uint(map, path, "n_half", v) {
                if n < 2 {
                    v.push(Violation::new(format!("{path}.n_half"), "must be >= 2"));
                }
            }
        }
        "ring_with_hop" => {
            check_keys(map, path, &["family", "n_half", "l0", "r", "kappa"], v);
            let n_half = get_uint(map, path, "n_half", v);
            if let Some(n) = n_half {
                if n < 2 {
                    v.push(Violation::new(format!("{path}.n_half"), "must be >= 2"));
                }
            }
            if let Some(l0) = get_uint(map, path, "l0", v) {
                if l0 < 1 {
                    v.push(Violation::new(format!("{path}.l0"), "site labels are 1-based"));
                } else if let Some(n) = n_half {
                    if l0 > 2 * n {
                        v.push(Violation::new(
                            format!("{path}.l0"),
                            format!("must be within 1..={} on this ring", 2 * n),
                        ));
                    }
                }
            }
            if let Some(r) = get_uint(map, path, "r", v) {
                if r < 1 {
                    v.push(Violation::new(format!("{path}.r"), "must be >= 1"));
                }
            }
            require_complex(map, path, "kappa", v);
        }
        "kspace_ring" => {
            check_keys(map, path, &["family", "n_sites", "kappa"], v);
            if let Some(n) = get_uint(map, path, "n_sites", v) {
                if n < 4 {
                    v.push(Violation::new(format!("{path}.n_sites"), "must be >= 4"));
                }
            }
            require_complex(map, path, "kappa", v);
        }
        "ladder" => {
            check_keys(map, path, &["family", "n_rungs", "j", "n_max"], v);
            let n_rungs = get_uint(map, path, "n_rungs", v);
            if let Some(n) = n_rungs {
                if n < 2 {
                    v.push(Violation::new(format!("{path}.n_rungs"), "must be >= 2"));
                }
            }
            get_finite(map, path, "j", v);
            if let Some(m) = get_uint(map, path, "n_max", v) {
                if m < 1 {
                    v.push(Violation::new(format!("{path}.n_max"), "must be >= 1"));
                } else if let Some(n) = n_rungs {
                    if m > n / 2 {
                        v.push(Violation::new(
                            format!("{path}.n_max"),
                            format!("must be <= n_rungs/2 = {}", n / 2),
                        ));
                    }
                }
            }
        }
        "ssh_chain" => {
            check_keys(map, path, &["family", "n_cells", "delta", "kappa"], v);
            if let Some(n) = get_uint(map, path, "n_cells", v) {
                if n < 2 {
                    v.push(Violation::new(format!("{path}.n_cells"), "must be >= 2"));
                }
            }
            if let Some(d) = get_finite(map, path, "delta", v) {
                if !(d > 0.0 && d < 1.0) {
                    v.push(Violation::new(format!("{path}.delta"), "must be in (0,1)"));
                }
            }
            require_complex(map, path, "kappa", v);
        }
        "ssh_cylinder" => {
            check_keys(
                map,
                path,
                &["family", "m_rows", "n_cells", "delta", "j_inter", "kappa", "row_coupling"],
                v,
            );
            if let Some(m) = get_uint(map, path, "m_rows", v) {
                if m < 2 || m % 2 != 0 {
                    v.push(Violation::new(format!("{path}.m_rows"), "must be even"));
                }
            }
            if let Some(n) = get_uint(map, path, "n_cells", v) {
                if n < 2 {
                    v.push(Violation::new(format!("{path}.n_cells"), "must be >= 2"));
                }
            }
            if let Some(d) = get_finite(map, path, "delta", v) {
                if !(d > 0.0 && d < 1.0) {
                    v.push(Violation::new(format!("{path}.delta"), "must be in (0,1)"));
                }
            }
            get_finite(map, path, "j_inter", v);
            require_complex(map, path, "kappa", v);
            if let Some(rc) = map.get("row_coupling") {
                match rc.as_str() {
                    Some("uniform") | Some("staggered") => {}
                    _ => v.push(Violation::new(
                        format!("{path}.row_coupling"),
                        "must be \"uniform\" or \"staggered\"",
                    )),
                }
            }
        }
        "two_site" => {
            check_keys(map, path, &["family", "kappa", "eps0"], v);
            require_complex(map, path, "kappa", v);
            get_finite(map, path, "eps0", v);
        }
        other => {
            v.push(Violation::new(
                format!("{path}.family"),
                format!("unknown family \"{other}\" (known: {})", MODEL_FAMILIES.join(", ")),
            ));
            return None;
        }
    }
    Some(family)
}

/// Lattice dimension implied by a (structurally valid) model object; used to
/// check explicit amplitude lists.
fn model_dim(family: &str, model: &Value) -> Option<usize> {
    let map = model.as_object()?;
    let get = |key: &str| map.get(key).and_then(Value::as_u64).map(|n| n as usize);
    match family {
        "ring" | "ring_with_hop" => Some(2 * get("n_half")?),
        "kspace_ring" => Some(get("n_sites")?),
        "ladder" => Some(2 * get("n_rungs")?),
        "ssh_chain" => Some(2 * get("n_cells")?),
        "ssh_cylinder" => Some(get("m_rows")? * 2 * get("n_cells")?),
        "two_site" => Some(2),
        _ => None,
    }
}

fn validate_job(
    value: &Value,
    family: Option<&str>,
    model: Option<&Value>,
    v: &mut Vec<Violation>,
) {
    let path = "$.job";
    let Some(map) = as_object(value, path, v) else { return };
    let kind = match map.get("type").and_then(Value::as_str) {
        Some(k) => k,
        None => {
            v.push(Violation::new(
                format!("{path}.type"),
                format!("must be one of: {}", JOB_TYPES.join(", ")),
            ));
            return;
        }
    };
    match kind {
        "spectrum" => {
            check_keys(map, path, &["type", "tol_cluster", "tol_rank", "output"], v);
            for key in ["tol_cluster", "tol_rank"] {
                if let Some(val) = map.get(key) {
                    if let Some(x) = finite_number(val, &format!("{path}.{key}"), v) {
                        if x <= 0.0 {
                            v.push(Violation::new(format!("{path}.{key}"), "must be > 0"));
                        }
                    }
                }
            }
            require_output(map, path, "output", v);
        }
        "ep_scan" => {
            check_keys(map, path, &["type", "kappa_values", "output"], v);
            match map.get("kappa_values") {
                None => v.push(Violation::new(
                    format!("{path}.kappa_values"),
                    "missing required key",
                )),
                Some(Value::Array(items)) if !items.is_empty() => {
                    for (i, item) in items.iter().enumerate() {
                        complex_param(item, &format!("{path}.kappa_values[{i}]"), v);
                    }
                }
                Some(_) => v.push(Violation::new(
                    format!("{path}.kappa_values"),
                    "must be a nonempty array of κ values",
                )),
            }
            require_output(map, path, "output", v);
            if let Some(f) = family {
                if !FAMILIES_WITH_KAPPA.contains(&f) {
                    v.push(Violation::new(
                        format!("{path}.type"),
                        format!(
                            "family \"{f}\" has no κ parameter to sweep (supported: {})",
                            FAMILIES_WITH_KAPPA.join(", ")
                        ),
                    ));
                }
            }
        }
        "theorem_check" => {
            check_keys(map, path, &["type", "tol", "k_index", "output"], v);
            if let Some(val) = map.get("tol") {
                if let Some(x) = finite_number(val, &format!("{path}.tol"), v) {
                    if x <= 0.0 {
                        v.push(Violation::new(format!("{path}.tol"), "must be > 0"));
                    }
                }
            }
            require_output(map, path, "output", v);
            if let Some(f) = family {
                if !FAMILIES_WITH_QUADRUPLE.contains(&f) {
                    v.push(Violation::new(
                        format!("{path}.type"),
                        format!(
                            "family \"{f}\" has no built-in theorem quadruple (supported: {})",
                            FAMILIES_WITH_QUADRUPLE.join(", ")
                        ),
                    ));
                }
                match (map.get("k_index"), f) {
                    (None, _) | (Some(Value::Null), _) => {}
                    (Some(val), "ring_with_hop") => match val.as_u64() {
                        Some(idx) => {
                            if let Some(r) = model
                                .and_then(Value::as_object)
                                .and_then(|m| m.get("r"))
                                .and_then(Value::as_u64)
                            {
                                if idx >= r {
                                    v.push(Violation::new(
                                        format!("{path}.k_index"),
                                        format!("must be < r = {r}"),
                                    ));
                                }
                            }
                        }
                        None => v.push(Violation::new(
                            format!("{path}.k_index"),
                            "must be a nonnegative integer",
                        )),
                    },
                    (Some(_), other) => v.push(Violation::new(
                        format!("{path}.k_index"),
                        format!("only applies to ring_with_hop models, not \"{other}\""),
                    )),
                }
            }
        }
        "evolve" => {
            check_keys(
                map,
                path,
                &[
                    "type",
                    "times",
                    "dt",
                    "method",
                    "renormalize_internally",
                    "initial_state",
                    "fidelity_target",
                    "fidelity_grid_dt",
                    "snapshots_output",
                    "fidelity_output",
                ],
                v,
            );
            match map.get("times") {
                None => v.push(Violation::new(format!("{path}.times"), "missing required key")),
                Some(Value::Array(items)) if !items.is_empty() => {
                    let mut prev: Option<f64> = None;
                    for (i, item) in items.iter().enumerate() {
                        let p = format!("{path}.times[{i}]");
                        if let Some(t) = finite_number(item, &p, v) {
                            if t < 0.0 {
                                v.push(Violation::new(&*p, "must be >= 0"));
                            }
                            if let Some(prev) = prev {
                                if t <= prev {
                                    v.push(Violation::new(&*p, "times must be strictly increasing"));
                                }
                            }
                            prev = Some(t);
                        }
                    }
                }
                Some(_) => v.push(Violation::new(
                    format!("{path}.times"),
                    "must be a nonempty array of snapshot times",
                )),
            }
            for key in ["dt", "fidelity_grid_dt"] {
                match map.get(key) {
                    None | Some(Value::Null) => {}
                    Some(val) => {
                        if let Some(x) = finite_number(val, &format!("{path}.{key}"), v) {
                            if x <= 0.0 {
                                v.push(Violation::new(format!("{path}.{key}"), "must be > 0"));
                            }
                        }
                    }
                }
            }
            if let Some(val) = map.get("method") {
                match val.as_str() {
                    Some("fixed_step_rk4") | Some("dense_expm") => {}
                    _ => v.push(Violation::new(
                        format!("{path}.method"),
                        "must be \"fixed_step_rk4\" or \"dense_expm\"",
                    )),
                }
            }
            if let Some(val) = map.get("renormalize_internally") {
                if !val.is_boolean() {
                    v.push(Violation::new(
                        format!("{path}.renormalize_internally"),
                        "must be a boolean",
                    ));
                }
            }
            require_output(map, path, "snapshots_output", v);
            match map.get("initial_state") {
                None => v.push(Violation::new(
                    format!("{path}.initial_state"),
                    "missing required key",
                )),
                Some(sel) => validate_state_selector(
                    sel,
                    &format!("{path}.initial_state"),
                    family,
                    model,
                    &STATE_SELECTORS,
                    v,
                ),
            }
            let has_target = !matches!(map.get("fidelity_target"), None | Some(Value::Null));
            if let Some(sel) = map.get("fidelity_target") {
                if !sel.is_null() {
                    validate_state_selector(
                        sel,
                        &format!("{path}.fidelity_target"),
                        family,
                        model,
                        &TARGET_SELECTORS,
                        v,
                    );
                }
            }
            let has_fidelity_output =
                !matches!(map.get("fidelity_output"), None | Some(Value::Null));
            if has_target && !has_fidelity_output {
                v.push(Violation::new(
                    format!("{path}.fidelity_output"),
                    "required when fidelity_target is set",
                ));
            }
            if !has_target && has_fidelity_output {
                v.push(Violation::new(
                    format!("{path}.fidelity_target"),
                    "required when fidelity_output is set",
                ));
            }
            if !has_target && !matches!(map.get("fidelity_grid_dt"), None | Some(Value::Null)) {
                v.push(Violation::new(
                    format!("{path}.fidelity_grid_dt"),
                    "only applies when fidelity_target is set",
                ));
            }
        }
        "ladder_analytic" => {
            check_keys(map, path, &["type", "n_max", "k_count", "output", "summary_output"], v);
            match map.get("n_max") {
                None | Some(Value::Null) => {}
                Some(Value::String(s)) if s == "infinite" => {}
                Some(val) => match val.as_u64() {
                    Some(n) if n >= 1 => {}
                    _ => v.push(Violation::new(
                        format!("{path}.n_max"),
                        "must be a positive integer or \"infinite\"",
                    )),
                },
            }
            if let Some(val) = map.get("k_count") {
                match val.as_u64() {
                    Some(n) if n >= 2 => {}
                    _ => v.push(Violation::new(format!("{path}.k_count"), "must be >= 2")),
                }
            }
            require_output(map, path, "output", v);
            if let Some(so) = map.get("summary_output") {
                if !so.is_null() && !matches!(so, Value::String(s) if !s.is_empty()) {
                    v.push(Violation::new(
                        format!("{path}.summary_output"),
                        "must be a nonempty path",
                    ));
                }
            }
            if let Some(f) = family {
                if f != "ladder" {
                    v.push(Violation::new(
                        format!("{path}.type"),
                        format!("requires a ladder model, got \"{f}\""),
                    ));
                }
            }
        }
        other => {
            v.push(Violation::new(
                format!("{path}.type"),
                format!("unknown job type \"{other}\" (known: {})", JOB_TYPES.join(", ")),
            ));
        }
    }
}

fn require_output(map: &Map<String, Value>, path: &str, key: &str, v: &mut Vec<Violation>) {
    match map.get(key) {
        Some(Value::String(s)) if !s.is_empty() => {}
        Some(_) => v.push(Violation::new(format!("{path}.{key}"), "must be a nonempty path")),
        None => v.push(Violation::new(format!("{path}.{key}"), "missing required key")),
    }
}

fn validate_state_selector(
    value: &Value,
    path: &str,
    family: Option<&str>,
    model: Option<&Value>,
    allowed_types: &[&str],
    v: &mut Vec<Violation>,
) {
    let Some(map) = as_object(value, path, v) else { return };
    let kind = match map.get("type").and_then(Value::as_str) {
        Some(k) => k,
        None => {
            v.push(Violation::new(
                format!("{path}.type"),
                format!("must be one of: {}", allowed_types.join(", ")),
            ));
            return;
        }
    };
    if !allowed_types.contains(&kind) {
        v.push(Violation::new(
            format!("{path}.type"),
            format!("unknown selector \"{kind}\" (allowed: {})", allowed_types.join(", ")),
        ));
        return;
    }
    let require_family = |want: &[&str], v: &mut Vec<Violation>| {
        if let Some(f) = family {
            if !want.contains(&f) {
                v.push(Violation::new(
                    format!("{path}.type"),
                    format!("selector \"{kind}\" requires a {} model, got \"{f}\"", want.join("/")),
                ));
            }
        }
    };
    match kind {
        "stripe_odd_rows" | "stripe_even_rows" | "cylinder_lo" | "cylinder_le" => {
            check_keys(map, path, &["type"], v);
            require_family(&["ssh_cylinder"], v);
        }
        "ssh_edge_left" => {
            check_keys(map, path, &["type"], v);
            require_family(&["ssh_chain"], v);
        }
        "two_site_a" | "two_site_c" => {
            check_keys(map, path, &["type"], v);
            require_family(&["two_site"], v);
        }
        "initial" => {
            check_keys(map, path, &["type"], v);
        }
        "site" => {
            check_keys(map, path, &["type", "row", "col"], v);
            let row = get_uint(map, path, "row", v);
            let col = get_uint(map, path, "col", v);
            for (key, val) in [("row", row), ("col", col)] {
                if let Some(0) = val {
                    v.push(Violation::new(
                        format!("{path}.{key}"),
                        "site labels are 1-based",
                    ));
                }
            }
        }
        "amplitudes" => {
            check_keys(map, path, &["type", "values"], v);
            match map.get("values") {
                None => v.push(Violation::new(format!("{path}.values"), "missing required key")),
                Some(Value::Array(items)) if !items.is_empty() => {
                    for (i, item) in items.iter().enumerate() {
                        complex_param(item, &format!("{path}.values[{i}]"), v);
                    }
                    if let (Some(f), Some(m)) = (family, model) {
                        if let Some(dim) = model_dim(f, m) {
                            if items.len() != dim {
                                v.push(Violation::new(
                                    format!("{path}.values"),
                                    format!("needs exactly {dim} entries for this model, got {}", items.len()),
                                ));
                            }
                        }
                    }
                }
                Some(_) => v.push(Violation::new(
                    format!("{path}.values"),
                    "must be a nonempty array of amplitudes",
                )),
            }
        }
        _ => unreachable!("selector kinds are filtered above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(text: &str) -> Vec<Violation> {
        validate_text(text).err().unwrap_or_default()
    }

    fn paths(text: &str) -> Vec<String> {
        violations(text).into_iter().map(|v| v.path).collect()
    }

    #[test]
    fn a_valid_config_parses_with_defaults() {
        let text = r#"{
            "model": {"family": "ssh_chain", "n_cells": 20, "delta": 0.1, "kappa": 0.5},
            "job": {"type": "theorem_check", "output": "report.json"}
        }"#;
        let cfg = validate_text(text).expect("valid config");
        assert_eq!(cfg.job.kind(), "theorem_check");
        let echo = serde_json::to_value(&cfg).unwrap();
        assert_eq!(echo["job"]["tol"], serde_json::json!(1e-10));
    }

    #[test]
    fn out_of_range_delta_is_reported_at_its_path() {
        let text = r#"{
            "model": {"family": "ssh_chain", "n_cells": 20, "delta": 1.5, "kappa": 0.5},
            "job": {"type": "spectrum", "output": "s.csv"}
        }"#;
        let vio = violations(text);
        assert_eq!(vio.len(), 1);
        assert_eq!(vio[0].path, "$.model.delta");
        assert!(vio[0].message.contains("(0,1)"), "{}", vio[0].message);
    }

    #[test]
    fn odd_row_count_is_reported() {
        let text = r#"{
            "model": {"family": "ssh_cylinder", "m_rows": 7, "n_cells": 10,
                      "delta": 0.1, "j_inter": 1.0, "kappa": 0.5},
            "job": {"type": "spectrum", "output": "s.csv"}
        }"#;
        let vio = violations(text);
        assert_eq!(vio.len(), 1);
        assert_eq!(vio[0].path, "$.model.m_rows");
        assert!(vio[0].message.contains("even"));
    }

    #[test]
    fn all_violations_are_collected_not_just_the_first() {
        let text = r#"{
            "model": {"family": "ssh_chain", "n_cells": 1, "delta": 2.0, "kappa": 0.5},
            "job": {"type": "evolve", "times": [3.0, 1.0, -2.0],
                    "initial_state": {"type": "stripe_odd_rows"},
                    "snapshots_output": "snap.csv", "dt": -0.5}
        }"#;
        let got = paths(text);
        for want in [
            "$.model.n_cells",
            "$.model.delta",
            "$.job.times[1]",
            "$.job.times[2]",
            "$.job.dt",
            "$.job.initial_state.type",
        ] {
            assert!(got.iter().any(|p| p == want), "missing {want} in {got:?}");
        }
    }

    #[test]
    fn unknown_keys_and_job_model_mismatches() {
        let text = r#"{
            "model": {"family": "ring", "n_half": 6, "extra": 1},
            "job": {"type": "ep_scan", "kappa_values": [0.5], "output": "s.csv"}
        }"#;
        let got = paths(text);
        assert!(got.contains(&"$.model.extra".to_string()), "{got:?}");
        assert!(got.contains(&"$.job.type".to_string()), "κ sweep needs a κ family: {got:?}");

        let text = r#"{
            "model": {"family": "ring", "n_half": 6},
            "job": {"type": "ladder_analytic", "output": "l.csv"}
        }"#;
        assert!(paths(text).contains(&"$.job.type".to_string()));
    }

    #[test]
    fn fidelity_fields_must_be_consistent() {
        let base = r#"{
            "model": {"family": "two_site", "kappa": 0.5, "eps0": 0.0},
            "job": {"type": "evolve", "times": [1.0],
                    "initial_state": {"type": "two_site_a"},
                    "snapshots_output": "snap.csv"PLUG}
        }"#;
        let with = |extra: &str| base.replace("PLUG", extra);
        assert!(validate_text(&with("")).is_ok());
        let got = paths(&with(r#", "fidelity_target": {"type": "two_site_c"}"#));
        assert!(got.contains(&"$.job.fidelity_output".to_string()), "{got:?}");
        let got = paths(&with(r#", "fidelity_output": "f.csv""#));
        assert!(got.contains(&"$.job.fidelity_target".to_string()), "{got:?}");
        let got = paths(&with(r#", "fidelity_grid_dt": 5.0"#));
        assert!(got.contains(&"$.job.fidelity_grid_dt".to_string()), "{got:?}");
    }

    #[test]
    fn amplitude_lists_must_match_the_lattice_size() {
        let text = r#"{
            "model": {"family": "two_site", "kappa": 0.5, "eps0": 0.0},
            "job": {"type": "evolve", "times": [1.0],
                    "initial_state": {"type": "amplitudes", "values": [1.0, 0.0, 0.0]},
                    "snapshots_output": "snap.csv"}
        }"#;
        let vio = violations(text);
        assert_eq!(vio.len(), 1, "{vio:?}");
        assert_eq!(vio[0].path, "$.job.initial_state.values");
        assert!(vio[0].message.contains("exactly 2"));
    }

    #[test]
    fn k_index_bounds_follow_the_hop_span() {
        let text = r#"{
            "model": {"family": "ring_with_hop", "n_half": 6, "l0": 1, "r": 3, "kappa": 0.5},
            "job": {"type": "theorem_check", "k_index": 3, "output": "t.json"}
        }"#;
        let vio = violations(text);
        assert_eq!(vio.len(), 1, "{vio:?}");
        assert_eq!(vio[0].path, "$.job.k_index");

        let ok = text.replace("\"k_index\": 3", "\"k_index\": 2");
        assert!(validate_text(&ok).is_ok());
    }

    #[test]
    fn malformed_json_is_a_single_root_violation() {
        let vio = violations("{not json");
        assert_eq!(vio.len(), 1);
        assert_eq!(vio[0].path, "$");
    }
}
