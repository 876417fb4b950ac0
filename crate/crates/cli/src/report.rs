//! Classification and dimension reports.

use qgr_core::pairing::DualModel;
use qgr_core::tangent::{self, TangentSpace};
use qgr_core::uq;
use qgr_core::QgrError;
use serde_json::{json, Value};

use crate::{Format, RunConfig};

fn space_json(model: &DualModel, t: &TangentSpace) -> (Value, bool) {
    let cert = tangent::is_tangent_space(model, t);
    let ideal = tangent::ideal_of(model, t);
    let round_trip = tangent::tangent_of(model, &ideal).space == t.space;
    let left_ideal = tangent::is_left_ideal(model, &ideal);
    let codim = ideal.codim(model);
    let dim_law = t.dim() == codim + 1;
    let ok = cert.passed() && round_trip && left_ideal && dim_law;
    let basis: Vec<Value> = t
        .space
        .basis()
        .iter()
        .map(|f| {
            let (mu, v) = f.parts.iter().next().expect("basis vectors are nonzero");
            json!({
                "weight": mu,
                "coords": v.iter().map(|c| c.to_text()).collect::<Vec<_>>(),
                "pbw": tangent::fmt_functional(model, f),
            })
        })
        .collect();
    let v = json!({
        "name": t.display_name(),
        "dim": t.dim(),
        "gamma_dim": t.gamma_dim(),
        "basis": basis,
        "certificates": {
            "counit": cert.counit,
            "coideal": cert.coideal,
            "k_stable": cert.k_stable,
            "witnesses": cert.witnesses,
            "round_trip": round_trip,
            "left_ideal": left_ideal,
            "ideal_codim": codim,
            "dimension_law": dim_law,
        },
    });
    (v, ok)
}

/// Refuses to run when the truncation is not certified for the requested
/// dimension bound.
pub fn require_audit(cfg: &RunConfig) -> Result<tangent::AuditReport, QgrError> {
    let audit = tangent::step4_audit(cfg.n, cfg.r);
    if cfg.max_dim <= 2 * cfg.r * (cfg.n - cfg.r) && !audit.certifies(cfg.truncation) {
        return Err(QgrError::AuditRefused(format!(
            "truncation {} not certified for (N, r) = ({}, {}): {}",
            cfg.truncation,
            cfg.n,
            cfg.r,
            audit.lines.join("; ")
        )));
    }
    Ok(audit)
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<(String, u8), QgrError> {
    let audit = require_audit(cfg)?;
    let model = cfg.model(cfg.truncation)?;
    let spaces = tangent::classify(&model, cfg.max_dim)?;
    let mut all_ok = true;
    let mut entries = Vec::new();
    for t in &spaces {
        let (v, ok) = space_json(&model, t);
        all_ok &= ok;
        entries.push(v);
    }
    let report = json!({
        "N": cfg.n,
        "r": cfg.r,
        "truncation": cfg.truncation,
        "max_dim": cfg.max_dim,
        "beyond_certified_bound": !cfg.max_dim_auto && cfg.max_dim > 2 * cfg.r * (cfg.n - cfg.r),
        "audit": audit,
        "spaces": entries,
    });
    let code = if all_ok { 0 } else { 1 };
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("name,dim,gamma_dim,certified\n");
            for (t, e) in spaces.iter().zip(report["spaces"].as_array().unwrap()) {
                let c = &e["certificates"];
                let ok = ["counit", "coideal", "k_stable", "round_trip", "left_ideal", "dimension_law"].iter().all(|k| c[k] == true);
                s.push_str(&format!("{},{},{},{}\n", csv_field(&t.display_name()), t.dim(), t.gamma_dim(), ok));
            }
            s
        }
        Format::Text => {
            let mut s = format!("(N, r) = ({}, {}), truncation {}, max dim {}\n", cfg.n, cfg.r, cfg.truncation, cfg.max_dim);
            for t in &spaces {
                s.push_str(&format!("{:<8} dim Gamma = {}\n", t.display_name(), t.gamma_dim()));
                for f in t.space.basis() {
                    s.push_str(&format!("    {}\n", tangent::fmt_functional(&model, &f)));
                }
            }
            s.push_str(&format!("{} spaces\n", spaces.len()));
            s
        }
    };
    Ok((text, code))
}

pub fn cmd_dims(cfg: &RunConfig, k: usize) -> Result<(String, u8), QgrError> {
    let mut rows = Vec::new();
    if k > 0 {
        let model = cfg.model(k)?;
        for l in 0..=k {
            let pm = model.pairing_matrix(l);
            rows.push((l, pm.rank(cfg.probe_seed), uq::pbw_count(cfg.n, cfg.r, l)));
        }
    } else {
        rows.push((0, 1, 1));
    }
    let ok = rows.iter().all(|(_, a, b)| a == b);
    let text = match cfg.format {
        Format::Json => {
            let v: Vec<Value> = rows.iter().map(|(l, a, b)| json!({"k": l, "computed": a, "predicted": b, "match": a == b})).collect();
            serde_json::to_string_pretty(&json!({"N": cfg.n, "r": cfg.r, "dims": v})).unwrap() + "\n"
        }
        Format::Csv => {
            let mut s = String::from("k,computed,predicted,match\n");
            for (l, a, b) in &rows {
                s.push_str(&format!("{l},{a},{b},{}\n", a == b));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (l, a, b) in &rows {
                s.push_str(&format!("k={l}: computed {a}, predicted {b}{}\n", if a == b { "" } else { "  MISMATCH" }));
            }
            s
        }
    };
    Ok((text, if ok { 0 } else { 1 }))
}

/// Quotes a CSV field when it holds a comma or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
