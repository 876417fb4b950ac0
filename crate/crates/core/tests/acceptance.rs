//! Acceptance run: one PASS/FAIL line per criterion, all checks exact.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use qgr_core::grassmann::Grassmannian;
use qgr_core::linalg::{self, Matrix};
use qgr_core::pairing::{self, eval_b, with_jobs, DualModel, ModelConfig};
use qgr_core::tangent::{self, TangentSpace};
use qgr_core::uq::{Gen, RootConvention, RootSide};
use qgr_core::RatFunc;

const CONFIGS: [(usize, usize); 4] = [(2, 1), (3, 1), (4, 1), (4, 2)];

type Check = Result<String, String>;

fn model(n: usize, r: usize, m: usize, conv: RootConvention) -> DualModel {
    let mut cfg = ModelConfig::new(n, r, m);
    cfg.convention = conv;
    DualModel::build(&cfg).unwrap_or_else(|e| panic!("model ({n},{r},{m}): {e}"))
}

fn binom(n: usize, k: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

fn golden(n: usize, r: usize) -> Vec<(&'static str, usize)> {
    let s = r * (n - r);
    let mut v = vec![("T0", 0), ("T+", s), ("T-", s), ("T", 2 * s)];
    if (n, r) == (2, 1) {
        v.extend([("T1,+", 2), ("T1,-", 2)]);
    }
    if (n, r) == (4, 2) {
        v.extend([("T2,+", 5), ("T2,-", 5)]);
    }
    v.sort();
    v
}

fn summary(spaces: &[TangentSpace]) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = spaces.iter().map(|t| (t.display_name(), t.gamma_dim())).collect();
    v.sort();
    v
}

struct Classified {
    n: usize,
    r: usize,
    model: DualModel,
    spaces: Vec<TangentSpace>,
    secs: f64,
}

fn classify_all() -> Vec<Classified> {
    CONFIGS
        .iter()
        .map(|&(n, r)| {
            let start = Instant::now();
            let model = model(n, r, 3, RootConvention::Standard);
            let spaces = tangent::classify(&model, 2 * r * (n - r)).unwrap_or_else(|e| panic!("classify ({n},{r}): {e}"));
            Classified { n, r, model, spaces, secs: start.elapsed().as_secs_f64() }
        })
        .collect()
}

fn c1_golden(runs: &[Classified]) -> Check {
    let limits = [60.0, 300.0, 900.0, 3600.0];
    let mut notes = Vec::new();
    for (c, limit) in runs.iter().zip(limits) {
        let got = summary(&c.spaces);
        let want: Vec<(String, usize)> = golden(c.n, c.r).into_iter().map(|(a, b)| (a.to_string(), b)).collect();
        if got != want {
            return Err(format!("({},{}): got {got:?}, expected {want:?}", c.n, c.r));
        }
        if c.secs > limit {
            return Err(format!("({},{}) took {:.1}s, limit {limit}s", c.n, c.r, c.secs));
        }
        notes.push(format!("({},{}) {} spaces in {:.2}s", c.n, c.r, got.len(), c.secs));
    }
    Ok(notes.join("; "))
}

fn c2_ranks() -> Check {
    let cases = [(2, 1, 3), (3, 1, 2), (4, 1, 2), (4, 2, 2)];
    let mut notes = Vec::new();
    for (n, r, kmax) in cases {
        for k in 1..=kmax {
            let pm = pairing::pairing_matrix(n, r, k, RootConvention::Standard).map_err(|e| e.to_string())?;
            let rank = pm.rank(7);
            let d = 2 * r * (n - r);
            let want: usize = (0..=k).map(|l| if l == 0 { 1 } else { binom(d + l - 1, l) }).sum();
            if rank != want {
                return Err(format!("({n},{r},{k}): rank {rank}, expected {want}"));
            }
            notes.push(format!("({n},{r},{k})={rank}"));
        }
    }
    Ok(notes.join(" "))
}

fn c3_primitives() -> Check {
    let mut notes = Vec::new();
    for (n, r) in CONFIGS {
        let m = model(n, r, 2, RootConvention::Standard);
        let all = tangent::primitives(&m).len();
        let e = tangent::primitives_side(&m, RootSide::E).len();
        let s = r * (n - r);
        if all != 2 * s || e != s {
            return Err(format!("({n},{r}): dim {all}, E-side {e}; expected {} and {s}", 2 * s));
        }
        notes.push(format!("({n},{r}) {all}/{e}"));
    }
    Ok(notes.join(" "))
}

fn c4_actions() -> Check {
    let mut count = 0;
    for n in 2..=4 {
        let g = Grassmannian::new(n, 1).unwrap();
        for i in 1..n {
            for u in [Gen::e(i), Gen::f(i), Gen::k(i), Gen::kinv(i)] {
                for z in g.generators() {
                    let a: BTreeMap<_, RatFunc> = g.act_gen(u, z).into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    let b: BTreeMap<_, RatFunc> = pairing::pairing_action(u, z, n).into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    if a != b {
                        return Err(format!("N={n}: {u} on {z}: {a:?} vs {b:?}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} generator pairs"))
}

fn c5_relations(runs: &[Classified]) -> Check {
    let mut notes = Vec::new();
    for c in runs {
        let m = &c.model;
        let rels = m.grass.all_relations();
        for rel in &rels {
            let diff = rel.difference();
            for k in 0..m.monomials.len() {
                let v = m.functional_apply(&m.monomial_functional(k), &diff);
                if !v.is_zero() {
                    return Err(format!("({},{}) relation {} against {}: {}", c.n, c.r, rel.tag, m.monomials[k].label(&m.letters), v));
                }
            }
        }
        // second route through matrix coefficients where it is cheap
        if c.n <= 3 {
            let mons: Vec<_> = m.monomials.iter().map(|p| p.to_uelement(&m.letters, RootConvention::Standard)).collect();
            for rel in &rels {
                let diff = rel.difference();
                if let Some(u) = mons.iter().find(|u| !eval_b(u, &diff, &m.grass).is_zero()) {
                    return Err(format!("({},{}) relation {} fails by direct evaluation against {:?}", c.n, c.r, rel.tag, u));
                }
            }
        }
        notes.push(format!("({},{}) {}x{}", c.n, c.r, rels.len(), m.monomials.len()));
    }
    Ok(notes.join(" "))
}

fn c6_orthogonality(runs: &[Classified]) -> Check {
    let mut pairs = 0;
    for c in runs {
        let m = &c.model;
        for (ci, mono) in m.monomials.iter().enumerate() {
            let k = mono.degree();
            if k > 2 {
                continue;
            }
            let vals = m.monomial_values(ci);
            for (w, word) in m.words.iter().enumerate() {
                if word.len() == k + 1 {
                    pairs += 1;
                    if vals.get(&w).is_some_and(|x| !x.is_zero()) {
                        return Err(format!("({},{}) {} on {}", c.n, c.r, mono.label(&m.letters), word));
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} monomial/word pairs vanish"))
}

fn c7_round_trips(runs: &[Classified]) -> Check {
    let mut count = 0;
    for c in runs {
        for t in &c.spaces {
            let ideal = tangent::ideal_of(&c.model, t);
            let back = tangent::tangent_of(&c.model, &ideal);
            if back.space != t.space {
                return Err(format!("({},{}) {}: round trip differs", c.n, c.r, t.display_name()));
            }
            if t.dim() != ideal.codim(&c.model) + 1 {
                return Err(format!("({},{}) {}: dim {} but codim {}", c.n, c.r, t.display_name(), t.dim(), ideal.codim(&c.model)));
            }
            if !tangent::is_left_ideal(&c.model, &ideal) {
                return Err(format!("({},{}) {}: not a left ideal", c.n, c.r, t.display_name()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} spaces"))
}

fn is_nilpotent(m: &Matrix) -> bool {
    let d = m.len();
    let mut p = m.clone();
    for _ in 1..d.max(1) {
        p = linalg::mat_mul(&p, m);
    }
    p.iter().all(|r| linalg::is_zero_vec(r))
}

fn c8_nilpotency(runs: &[Classified]) -> Check {
    let mut count = 0;
    for c in runs {
        let g = &c.model.grass;
        let eps: Vec<RatFunc> =
            (1..=c.n).map(|i| if i > c.r { RatFunc::q_pow(2 * i as i64 - 2 * c.n as i64 - 1) } else { RatFunc::zero() }).collect();
        for t in &c.spaces {
            let name = t.display_name();
            let rep = tangent::induced_rep(&c.model, t).map_err(|e| e.to_string())?;
            for z in g.generators() {
                let mut m = rep.rho[&z].clone();
                if z.i == z.j {
                    for (k, row) in m.iter_mut().enumerate() {
                        row[k] -= &eps[z.i - 1];
                    }
                }
                if !is_nilpotent(&m) {
                    return Err(format!("({},{}) {name}: rho({z}) shifted is not nilpotent", c.n, c.r));
                }
            }
            let report = tangent::nilpotency_report(&c.model, &rep);
            let want: Vec<String> = eps.iter().map(|e| e.to_string()).collect();
            if !report.ok() || report.eigen_tuples != vec![want.clone()] {
                return Err(format!(
                    "({},{}) {name}: spectrum {:?}, expected {want:?}, {:?}",
                    c.n, c.r, report.eigen_tuples, report.violations
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} induced representations"))
}

fn c9_determinism(runs: &[Classified]) -> Check {
    for c in runs {
        let (n, r) = (c.n, c.r);
        let alt = model(n, r, 3, RootConvention::Alternate);
        let alt_spaces = tangent::classify(&alt, 2 * r * (n - r)).map_err(|e| e.to_string())?;
        if summary(&alt_spaces) != summary(&c.spaces) {
            return Err(format!("({n},{r}) alternate roots: {:?}", summary(&alt_spaces)));
        }
        let run = |jobs: usize| {
            with_jobs(jobs, || {
                let m = model(n, r, 3, RootConvention::Standard);
                tangent::classify(&m, 2 * r * (n - r)).map(|s| s.iter().map(|t| (t.display_name(), t.space.basis())).collect::<Vec<_>>())
            })
        };
        let one = run(1).map_err(|e| e.to_string())?;
        let eight = run(8).map_err(|e| e.to_string())?;
        if one != eight {
            return Err(format!("({n},{r}) jobs 1 and 8 differ"));
        }
    }
    Ok("alternate roots and jobs 1/8 agree at all four (N, r)".to_string())
}

fn main() -> ExitCode {
    let runs = classify_all();
    let results: Vec<(&str, Check)> = vec![
        ("classification golden lists", c1_golden(&runs)),
        ("pairing ranks", c2_ranks()),
        ("primitive dimensions", c3_primitives()),
        ("action convention lock", c4_actions()),
        ("relation soundness", c5_relations(&runs)),
        ("degree orthogonality", c6_orthogonality(&runs)),
        ("correspondence round trips", c7_round_trips(&runs)),
        ("nilpotency and spectrum", c8_nilpotency(&runs)),
        ("determinism", c9_determinism(&runs)),
    ];
    let mut failed = 0;
    for (i, (name, res)) in results.iter().enumerate() {
        match res {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
