//! Verification suites. Each suite checks exact identities and stops at the
//! first counterexample, which is reported as the witness.

use std::collections::BTreeMap;

use qgr_core::grassmann::{format_belement, Grassmannian};
use qgr_core::pairing;
use qgr_core::tangent::{self, TangentSpace};
use qgr_core::uq::{self, Gen, RootSide};
use qgr_core::{QgrError, RatFunc};
use serde_json::{json, Value};

use crate::{report, Format, RunConfig, Suite};

/// Outcome of one suite: named checks with counts, plus the first failure.
struct Outcome {
    suite: &'static str,
    checks: Vec<(String, Value)>,
    witness: Option<String>,
}

impl Outcome {
    fn new(suite: &'static str) -> Self {
        Outcome { suite, checks: Vec::new(), witness: None }
    }

    fn record(&mut self, name: impl Into<String>, v: Value) {
        self.checks.push((name.into(), v));
    }

    fn fail(&mut self, w: String) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn render(&self, cfg: &RunConfig) -> String {
        let pass = self.witness.is_none();
        match cfg.format {
            Format::Json => {
                let checks: serde_json::Map<String, Value> = self.checks.iter().cloned().collect();
                let v = json!({
                    "suite": self.suite,
                    "N": cfg.n,
                    "r": cfg.r,
                    "truncation": cfg.truncation,
                    "pass": pass,
                    "checks": checks,
                    "witness": self.witness,
                });
                serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
            }
            Format::Csv => {
                let mut s = String::from("check,value\n");
                for (k, v) in &self.checks {
                    s.push_str(&format!("{},{}\n", report::csv_field(k), csv_cell(v)));
                }
                s.push_str(&format!("pass,{pass}\n"));
                s
            }
            Format::Text => {
                let mut s = format!("verify {} (N, r) = ({}, {})\n", self.suite, cfg.n, cfg.r);
                for (k, v) in &self.checks {
                    s.push_str(&format!("  {k}: {v}\n"));
                }
                match &self.witness {
                    None => s.push_str("pass\n"),
                    Some(w) => s.push_str(&format!("FAIL: {w}\n")),
                }
                s
            }
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => report::csv_field(s),
        other => report::csv_field(&other.to_string()),
    }
}

pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<(String, u8), QgrError> {
    let out = match suite {
        Suite::Relations => relations(cfg)?,
        Suite::Pairing => pairing_suite(cfg)?,
        Suite::Primitives => primitives(cfg)?,
        Suite::Actions => actions(cfg)?,
        Suite::Nilpotency => nilpotency(cfg)?,
    };
    let code = if out.witness.is_none() { 0 } else { 1 };
    Ok((out.render(cfg), code))
}

fn all_generators(n: usize) -> Vec<Gen> {
    (1..n).flat_map(|i| [Gen::e(i), Gen::f(i), Gen::k(i), Gen::kinv(i)]).collect()
}

/// Every relation pairs to zero with every PBW monomial up to the truncation.
fn relations(cfg: &RunConfig) -> Result<Outcome, QgrError> {
    let model = cfg.model(cfg.truncation)?;
    let g = &model.grass;
    let mut out = Outcome::new("relations");
    let rels = g.all_relations();
    let mut pairs = 0usize;
    'outer: for rel in &rels {
        let diff = rel.difference();
        for k in 0..model.monomials.len() {
            let f = model.monomial_functional(k);
            let v = model.functional_apply(&f, &diff);
            pairs += 1;
            if !v.is_zero() {
                out.fail(format!(
                    "relation {} ({}) pairs to {} with {}",
                    rel.tag,
                    format_belement(&diff),
                    v.to_text(),
                    model.monomials[k].label(&model.letters)
                ));
                break 'outer;
            }
        }
    }
    out.record("relations", json!(rels.len()));
    out.record("monomials", json!(model.monomials.len()));
    out.record("pairings_checked", json!(pairs));
    Ok(out)
}

/// Rank identities, agreement of the two evaluation routes and degree
/// orthogonality.
fn pairing_suite(cfg: &RunConfig) -> Result<Outcome, QgrError> {
    let mut out = Outcome::new("pairing");
    let model = cfg.model(cfg.truncation)?;
    for k in 1..=cfg.truncation {
        let rank = model.pairing_matrix(k).rank(cfg.probe_seed);
        let predicted = uq::pbw_count(cfg.n, cfg.r, k);
        out.record(format!("rank_k{k}"), json!(rank));
        if rank != predicted {
            out.fail(format!("rank {rank} at k = {k}, predicted {predicted}"));
        }
    }

    let k_eval = if cfg.n <= 3 { cfg.truncation.min(2) } else { 1 };
    let by_eval = pairing::pairing_matrix_by_eval(cfg.n, cfg.r, k_eval, cfg.convention)?;
    let pm = model.pairing_matrix(k_eval);
    out.record("route_check_degree", json!(k_eval));
    for (i, (a, b)) in pm.entries.iter().zip(&by_eval).enumerate() {
        if let Some(j) = (0..a.len()).find(|&j| a[j] != b[j]) {
            out.fail(format!(
                "<{}, {}> is {} by tables but {} by direct evaluation",
                pm.col_labels[j],
                pm.rows[i],
                a[j].to_text(),
                b[j].to_text()
            ));
            break;
        }
    }

    let mut checked = 0usize;
    for (c, mono) in model.monomials.iter().enumerate() {
        let d = mono.degree();
        if d + 1 > model.m {
            continue;
        }
        let vals = model.monomial_values(c);
        for (w, word) in model.words.iter().enumerate() {
            if word.len() != d + 1 {
                continue;
            }
            checked += 1;
            if let Some(x) = vals.get(&w).filter(|x| !x.is_zero()) {
                out.fail(format!("{} pairs to {} with {}", mono.label(&model.letters), x.to_text(), word));
            }
        }
    }
    out.record("orthogonality_pairs_checked", json!(checked));
    out.record("orthogonality_max_degree", json!(model.m.saturating_sub(1)));
    Ok(out)
}

fn primitives(cfg: &RunConfig) -> Result<Outcome, QgrError> {
    let mut out = Outcome::new("primitives");
    let model = cfg.model(cfg.truncation.max(2))?;
    let s = cfg.r * (cfg.n - cfg.r);
    let all = tangent::primitives(&model).len();
    let e = tangent::primitives_side(&model, RootSide::E).len();
    let f = tangent::primitives_side(&model, RootSide::F).len();
    out.record("dimension", json!(all));
    out.record("e_side", json!(e));
    out.record("f_side", json!(f));
    if all != 2 * s {
        out.fail(format!("primitive space has dimension {all}, expected {}", 2 * s));
    }
    if e != s || f != s {
        out.fail(format!("one-sided primitive dimensions {e} and {f}, expected {s}"));
    }
    Ok(out)
}

/// Formula action against the action derived from the pairing, for every
/// generator of U_q(sl_N) on every z_ij.
fn actions(cfg: &RunConfig) -> Result<Outcome, QgrError> {
    let mut out = Outcome::new("actions");
    let g = Grassmannian::new(cfg.n, cfg.r)?;
    let mut checked = 0usize;
    for u in all_generators(cfg.n) {
        for z in g.generators() {
            checked += 1;
            let formula: BTreeMap<_, RatFunc> = g.act_gen(u, z).into_iter().filter(|(_, c)| !c.is_zero()).collect();
            let derived: BTreeMap<_, RatFunc> = pairing::pairing_action(u, z, cfg.n).into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if formula != derived {
                out.fail(format!("{u} acting on {z}: formula {formula:?}, pairing {derived:?}"));
            }
        }
    }
    out.record("pairs_checked", json!(checked));
    Ok(out)
}

/// Induced representations of every classified space: defining relations,
/// Leibniz rule, nilpotency and joint spectrum.
fn nilpotency(cfg: &RunConfig) -> Result<Outcome, QgrError> {
    let mut out = Outcome::new("nilpotency");
    let model = cfg.model(cfg.truncation)?;
    report::require_audit(cfg)?;
    let spaces: Vec<TangentSpace> = tangent::classify(&model, cfg.max_dim)?;
    for t in &spaces {
        let name = t.display_name();
        let rep = tangent::induced_rep(&model, t)?;
        if let Some(w) = rep.relation_failures(&model.grass).first() {
            out.fail(format!("{name}: {w}"));
        }
        if let Some(w) = rep.leibniz_failures(&model).first() {
            out.fail(format!("{name}: {w}"));
        }
        let spectrum = tangent::nilpotency_report(&model, &rep);
        if let Some(w) = spectrum.violations.first() {
            out.fail(format!("{name}: {w}"));
        }
        out.record(name, serde_json::to_value(&spectrum).expect("report serializes"));
    }
    out.record("spaces", json!(spaces.len()));
    Ok(out)
}
