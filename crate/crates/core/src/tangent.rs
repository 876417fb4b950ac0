//! Quantum tangent spaces inside the truncated dual: right K-action,
//! left-coideal tests, primitive elements, K-isotypic decomposition, the
//! correspondence with left ideals of B, induced representations and the
//! classification search.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::QgrError;
use crate::grassmann::{Grassmannian, SWord, ShiftedElement, ZGen};
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::pairing::{DualModel, Functional, Weight};
use crate::qfield::RatFunc;
use crate::uq::{self, Gen, RootSide};

/// A subspace of the truncated dual, kept weight by weight in reduced
/// echelon form so that equal spaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Space {
    pub parts: BTreeMap<Weight, Subspace>,
}

impl Space {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn span(model: &DualModel, fs: &[Functional]) -> Self {
        let mut s = Self::zero();
        for f in fs {
            s.add(model, f);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.parts.values().map(|p| p.dim()).sum()
    }

    pub fn rows(&self, mu: &[i64]) -> &[Vector] {
        self.parts.get(mu).map(|p| p.rows.as_slice()).unwrap_or(&[])
    }

    pub fn reduce_part(&self, mu: &[i64], v: &[RatFunc]) -> Vector {
        match self.parts.get(mu) {
            Some(p) => p.reduce(v),
            None => v.to_vec(),
        }
    }

    pub fn contains_part(&self, mu: &[i64], v: &[RatFunc]) -> bool {
        linalg::is_zero_vec(&self.reduce_part(mu, v))
    }

    pub fn contains(&self, f: &Functional) -> bool {
        f.parts.iter().all(|(mu, v)| self.contains_part(mu, v))
    }

    pub fn add_part(&mut self, model: &DualModel, mu: &[i64], vs: &[Vector]) {
        let amb = model.by_weight[mu].len();
        let p = self.parts.entry(mu.to_vec()).or_insert_with(|| Subspace::zero(amb));
        *p = p.add_vectors(vs);
        if p.dim() == 0 {
            self.parts.remove(mu);
        }
    }

    pub fn add(&mut self, model: &DualModel, f: &Functional) {
        for (mu, v) in &f.parts {
            self.add_part(model, mu, std::slice::from_ref(v));
        }
    }

    pub fn contains_space(&self, other: &Space) -> bool {
        other.parts.iter().all(|(mu, p)| p.rows.iter().all(|r| self.contains_part(mu, r)))
    }

    pub fn basis(&self) -> Vec<Functional> {
        let mut out = Vec::new();
        for (mu, p) in &self.parts {
            for r in &p.rows {
                out.push(Functional::homogeneous(mu.clone(), r.clone()));
            }
        }
        out
    }

    fn key(&self) -> Vec<(Weight, Matrix)> {
        self.parts.iter().map(|(mu, p)| (mu.clone(), p.rows.clone())).collect()
    }
}

/// Generators of the Hopf subalgebra K: `E_i`, `F_i` for `i != r`, all `K_j`.
pub fn k_generators(n: usize, r: usize) -> Vec<Gen> {
    let mut out = Vec::new();
    for i in (1..n).filter(|&i| i != r) {
        out.push(Gen::e(i));
        out.push(Gen::f(i));
    }
    for j in 1..n {
        out.push(Gen::k(j));
    }
    out
}

/// Right action `f.g` of a generator of K.
pub fn k_action(model: &DualModel, f: &Functional, g: Gen) -> Result<Functional, QgrError> {
    if !g.in_k(model.r()) {
        return Err(QgrError::NotInK(g.to_string()));
    }
    Ok(model.act(f, g))
}

/// Span of all `b -> f(a b)` for words `a`, obtained by closing `{f}` under
/// left translation by the generators.
pub fn right_translates(model: &DualModel, f: &Functional) -> Space {
    let mut space = Space::zero();
    let mut todo = vec![f.clone()];
    let gens = model.grass.generators();
    while let Some(g) = todo.pop() {
        if g.is_zero() || space.contains(&g) {
            continue;
        }
        space.add(model, &g);
        for &a in &gens {
            let mut t = model.translate(&g, a);
            let e = model.grass.eps_gen(a);
            if !e.is_zero() {
                t.add_scaled(&g, &e);
            }
            todo.push(t);
        }
    }
    space
}

/// Functionals vanishing on 1 and on every product of two or more shifted
/// generators, that is the primitive elements within the truncation.
pub fn primitives(model: &DualModel) -> Vec<Functional> {
    let mut out = Vec::new();
    for (mu, cols) in &model.by_weight {
        let neg: Weight = mu.iter().map(|x| -x).collect();
        let rows: Vec<Vector> = model
            .words_of_label(&neg)
            .iter()
            .filter(|&&w| model.words[w].len() != 1)
            .map(|&w| cols.iter().map(|&c| model.monomial_values(c).get(&w).cloned().unwrap_or_default()).collect())
            .collect();
        for v in linalg::kernel(&rows, cols.len()) {
            out.push(Functional::homogeneous(mu.clone(), v));
        }
    }
    out
}

fn weight_side(mu: &[i64]) -> Option<RootSide> {
    if mu.iter().all(|&x| x >= 0) && mu.iter().any(|&x| x > 0) {
        Some(RootSide::E)
    } else if mu.iter().all(|&x| x <= 0) && mu.iter().any(|&x| x < 0) {
        Some(RootSide::F)
    } else {
        None
    }
}

/// Primitive elements whose weights lie on one side.
pub fn primitives_side(model: &DualModel, side: RootSide) -> Vec<Functional> {
    primitives(model).into_iter().filter(|f| f.parts.keys().all(|mu| weight_side(mu) == Some(side))).collect()
}

/// Submodule generated by `v` under the K-generators, modulo `base`;
/// returns a basis of the quotient as weight-tagged coordinate vectors.
fn generate(model: &DualModel, mu: &[i64], v: &[RatFunc], base: &Space, gens: &[Gen]) -> Vec<(Weight, Vector)> {
    let mut acc = base.clone();
    let mut out = Vec::new();
    let mut todo = vec![(mu.to_vec(), v.to_vec())];
    while let Some((w, x)) = todo.pop() {
        if acc.contains_part(&w, &x) {
            continue;
        }
        acc.add_part(model, &w, std::slice::from_ref(&x));
        out.push((w.clone(), x.clone()));
        let f = Functional::homogeneous(w, x);
        for &g in gens {
            for (nw, y) in model.act(&f, g).parts {
                todo.push((nw, y));
            }
        }
    }
    out
}

fn module_gens(n: usize, r: usize) -> (Vec<Gen>, Vec<Gen>) {
    let es: Vec<Gen> = (1..n).filter(|&i| i != r).map(Gen::e).collect();
    let mut fe: Vec<Gen> = (1..n).filter(|&i| i != r).map(Gen::f).collect();
    fe.extend(es.iter().copied());
    (es, fe)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotypicComponent {
    pub highest_weight: Weight,
    pub dim: usize,
    pub multiplicity: usize,
}

/// K-module structure of the degree-k part of the E-side (`RootSide::E`) or
/// F-side of the truncated dual, taken modulo all lower degrees.
pub fn isotypic_decompose(model: &DualModel, k: usize, side: RootSide) -> Result<Vec<IsotypicComponent>, QgrError> {
    if k == 0 || k > model.m {
        return Err(QgrError::IndexOutOfRange(format!("degree {k} outside 1..={}", model.m)));
    }
    let (n, r) = (model.n(), model.r());
    let (es, fe) = module_gens(n, r);
    let mut lower = Space::zero();
    let mut top = Space::zero();
    for (mu, cols) in &model.by_weight {
        let low: Vec<Vector> =
            (0..cols.len()).filter(|&t| model.monomials[cols[t]].degree() < k).map(|t| linalg::unit_vec(cols.len(), t)).collect();
        if !low.is_empty() {
            lower.add_part(model, mu, &low);
        }
        let hi: Vec<Vector> = (0..cols.len())
            .filter(|&t| {
                let m = &model.monomials[cols[t]];
                m.degree() == k && m.letters.iter().all(|&l| model.letters[l].side == side)
            })
            .map(|t| linalg::unit_vec(cols.len(), t))
            .collect();
        if !hi.is_empty() {
            top.add_part(model, mu, &hi);
        }
    }
    let ambient = Space::sum(&top, &lower, model);
    let mut out = Vec::new();
    for (mu, part) in &top.parts {
        let qb = &part.rows;
        let mut cons: Vec<Vector> = Vec::new();
        for &e in &es {
            let imgs: Vec<Functional> = qb.iter().map(|v| model.act(&Functional::homogeneous(mu.clone(), v.clone()), e)).collect();
            push_constraints(model, &lower, &imgs, &mut cons);
        }
        let hb = linalg::kernel(&cons, qb.len());
        if hb.is_empty() {
            continue;
        }
        let hw: Vec<Vector> = hb.iter().map(|h| linalg::combine(h, qb, model.by_weight[mu].len())).collect();
        let module = generate(model, mu, &hw[0], &lower, &fe);
        for (w, x) in &module {
            if !ambient.contains_part(w, x) {
                return Err(QgrError::Inconsistent(format!("degree-{k} {side:?}-side not K-stable at weight {w:?}")));
            }
        }
        out.push(IsotypicComponent { highest_weight: mu.clone(), dim: module.len(), multiplicity: hw.len() });
    }
    Ok(out)
}

impl Space {
    fn sum(a: &Space, b: &Space, model: &DualModel) -> Space {
        let mut s = a.clone();
        for (mu, p) in &b.parts {
            s.add_part(model, mu, &p.rows);
        }
        s
    }
}

/// For images `imgs[t]` of basis vectors, append the linear conditions
/// "combination lies in `base`" as rows over `t`.
fn push_constraints(model: &DualModel, base: &Space, imgs: &[Functional], cons: &mut Vec<Vector>) {
    let mut weights: Vec<&Weight> = imgs.iter().flat_map(|f| f.parts.keys()).collect();
    weights.sort();
    weights.dedup();
    for nw in weights {
        let len = model.by_weight[nw].len();
        let rems: Vec<Vector> = imgs
            .iter()
            .map(|f| match f.parts.get(nw) {
                Some(v) => base.reduce_part(nw, v),
                None => linalg::zero_vec(len),
            })
            .collect();
        for s in 0..len {
            let row: Vector = rems.iter().map(|r| r[s].clone()).collect();
            if !linalg::is_zero_vec(&row) {
                cons.push(row);
            }
        }
    }
}

/// Outcome of the three tangent-space tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub counit: bool,
    pub coideal: bool,
    pub k_stable: bool,
    pub witnesses: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.counit && self.coideal && self.k_stable
    }
}

/// A candidate quantum tangent space, always containing the counit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentSpace {
    pub name: Option<String>,
    pub space: Space,
}

impl TangentSpace {
    pub fn new(space: Space) -> Self {
        TangentSpace { name: None, space }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Dimension of the calculus, one less than the space including the counit.
    pub fn gamma_dim(&self) -> usize {
        self.dim().saturating_sub(1)
    }

    pub fn contains_counit(&self, model: &DualModel) -> bool {
        self.space.contains(&model.counit())
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "unlabeled".to_string())
    }
}

/// Checks `eps in T`, closure under left translates, and K-stability.
pub fn is_tangent_space(model: &DualModel, t: &TangentSpace) -> Certificate {
    let mut witnesses = Vec::new();
    let counit = t.contains_counit(model);
    if !counit {
        witnesses.push("counit not contained".to_string());
    }
    let gens = model.grass.generators();
    let mut coideal = true;
    let mut k_stable = true;
    for f in t.space.basis() {
        for &a in &gens {
            let g = model.translate(&f, a);
            if !t.space.contains(&g) {
                coideal = false;
                witnesses.push(format!("translate by {a} of {} leaves T: {}", fmt_functional(model, &f), fmt_functional(model, &g)));
            }
        }
        for g in k_generators(model.n(), model.r()) {
            let h = model.act(&f, g);
            if !t.space.contains(&h) {
                k_stable = false;
                witnesses.push(format!("{} . {g} leaves T", fmt_functional(model, &f)));
            }
        }
    }
    Certificate { counit, coideal, k_stable, witnesses }
}

pub fn fmt_functional(model: &DualModel, f: &Functional) -> String {
    let terms = model.describe(f);
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.iter().map(|(m, c)| if c.is_one() { m.clone() } else { format!("({c})*{m}") }).collect::<Vec<_>>().join(" + ")
}

/// Dimension bookkeeping that bounds the PBW degree of any tangent space of
/// dimension at most `2r(N-r)`, so that a finite truncation is exhaustive.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub r: usize,
    /// Largest degree a tangent space may reach, if the bounds decide it.
    pub max_degree: Option<usize>,
    pub boundary: bool,
    pub lines: Vec<String>,
}

impl AuditReport {
    pub fn certifies(&self, truncation: usize) -> bool {
        matches!(self.max_degree, Some(d) if d <= truncation)
    }
}

pub fn step4_audit(n: usize, r: usize) -> AuditReport {
    let d = r * (n - r);
    let mut lines = vec![format!("one-sided budget beyond degree 1: {d}")];
    let mut boundary = false;
    let max_degree;
    if r == 1 || r == n - 1 {
        let deg2 = n * (n - 1) / 2;
        lines.push(format!("degree-2 one-sided space irreducible of dim {deg2}"));
        if deg2 <= d {
            // only N = 2, where every degree adds one dimension
            lines.push(format!("N = 2: total one-sided dim k <= 2(N-1) = {}", 2 * (n - 1)));
            max_degree = Some(2 * (n - 1));
        } else {
            lines.push(format!("{deg2} > {d}: no degree-2 part"));
            max_degree = Some(1);
        }
    } else {
        let v1 = r * (r + 1) * (n - r) * (n - r + 1) / 4;
        let v2 = r * (r - 1) * (n - r) * (n - r - 1) / 4;
        lines.push(format!("dim V1 = {v1} {} {d}", if v1 > d { ">" } else { "<=" }));
        lines.push(format!("dim V2 = {v2} {} {d}", if v2 <= d { "<=" } else { ">" }));
        if v1 <= d {
            lines.push("V1 fits the budget; bounds do not decide".to_string());
            max_degree = None;
        } else if v2 > d {
            max_degree = Some(1);
        } else {
            if v2 == d {
                boundary = true;
                lines.push("boundary case dim V2 = r(N-r)".to_string());
            }
            if d + v2 >= 2 * d {
                lines.push("degree 1 and V2 exhaust the budget".to_string());
                max_degree = Some(2);
            } else if r == 2 || r == n - 2 {
                let w1 = 2 * (n - 2) * (n - 1) * n / 3;
                let w2 = 2 * (n - 2) * (n - 1) * (n - 3) / 3;
                let least = w1.min(w2);
                lines.push(format!("degree-3 components of dims {w1}, {w2}"));
                if least + d + v2 > 2 * d {
                    lines.push(format!("{least} + {d} + {v2} > {}: no degree-3 part", 2 * d));
                    max_degree = Some(2);
                } else {
                    max_degree = None;
                }
            } else {
                lines.push("degree-3 bound not available".to_string());
                max_degree = None;
            }
        }
    }
    AuditReport { n, r, max_degree, boundary, lines }
}

struct SearchCtx<'a> {
    model: &'a DualModel,
    gens: Vec<ZGen>,
    es: Vec<Gen>,
    fe: Vec<Gen>,
}

/// Every tangent space `T^eps` of dimension at most `max_dim + 1` inside the
/// truncated dual, built degree by degree from highest-weight vectors.
pub fn classify(model: &DualModel, max_dim: usize) -> Result<Vec<TangentSpace>, QgrError> {
    let (es, fe) = module_gens(model.n(), model.r());
    let ctx = SearchCtx { model, gens: model.grass.generators(), es, fe };
    let t0 = Space::span(model, &[model.counit()]);
    let mut results: BTreeMap<Vec<(Weight, Matrix)>, Space> = BTreeMap::new();
    results.insert(t0.key(), t0.clone());
    let mut layer = vec![t0];
    for k in 0..model.m {
        let next: Vec<Vec<Space>> =
            layer.par_iter().map(|t| extensions(&ctx, t, k, (max_dim + 1).saturating_sub(t.dim()))).collect::<Result<_, _>>()?;
        let mut dedup: BTreeMap<Vec<(Weight, Matrix)>, Space> = BTreeMap::new();
        for s in next.into_iter().flatten() {
            dedup.entry(s.key()).or_insert(s);
        }
        layer = dedup.values().cloned().collect();
        results.extend(dedup);
    }
    let mut out: Vec<TangentSpace> = results
        .into_values()
        .map(|s| {
            let name = label_space(model, &s);
            TangentSpace { name, space: s }
        })
        .collect();
    out.sort_by(|a, b| (a.dim(), name_rank(&a.name)).cmp(&(b.dim(), name_rank(&b.name))).then_with(|| a.space.key().cmp(&b.space.key())));
    Ok(out)
}

fn name_rank(name: &Option<String>) -> usize {
    const ORDER: [&str; 8] = ["T0", "T+", "T-", "T", "T1,+", "T1,-", "T2,+", "T2,-"];
    name.as_deref().and_then(|n| ORDER.iter().position(|o| *o == n)).unwrap_or(ORDER.len())
}

fn extensions(ctx: &SearchCtx, t: &Space, k: usize, budget: usize) -> Result<Vec<Space>, QgrError> {
    let model = ctx.model;
    if budget == 0 {
        return Ok(Vec::new());
    }
    // A: functionals of degree <= k+1 all of whose translates lie in t
    let a_parts: Vec<(Weight, Vec<Vector>)> = model
        .by_weight
        .par_iter()
        .filter_map(|(mu, cols)| {
            let idx: Vec<usize> = (0..cols.len()).filter(|&i| model.monomials[cols[i]].degree() <= k + 1).collect();
            if idx.is_empty() {
                return None;
            }
            let mut cons = Vec::new();
            let units: Vec<Functional> =
                idx.iter().map(|&i| Functional::homogeneous(mu.clone(), linalg::unit_vec(cols.len(), i))).collect();
            for &a in &ctx.gens {
                let imgs: Vec<Functional> = units.iter().map(|u| model.translate(u, a)).collect();
                push_constraints(model, t, &imgs, &mut cons);
            }
            let basis: Vec<Vector> = linalg::kernel(&cons, idx.len())
                .into_iter()
                .map(|b| {
                    let mut v = linalg::zero_vec(cols.len());
                    for (&i, x) in idx.iter().zip(b) {
                        v[i] = x;
                    }
                    v
                })
                .collect();
            (!basis.is_empty()).then(|| (mu.clone(), basis))
        })
        .collect();

    let mut cands: Vec<(usize, Vec<(Weight, Vector)>)> = Vec::new();
    for (mu, av) in &a_parts {
        let cols = &model.by_weight[mu];
        let mut acc = t.clone();
        let mut qb: Vec<Vector> = Vec::new();
        for v in av {
            if !acc.contains_part(mu, v) {
                acc.add_part(model, mu, std::slice::from_ref(v));
                qb.push(v.clone());
            }
        }
        if qb.is_empty() {
            continue;
        }
        let mut cons = Vec::new();
        for &e in &ctx.es {
            let imgs: Vec<Functional> = qb.iter().map(|v| model.act(&Functional::homogeneous(mu.clone(), v.clone()), e)).collect();
            push_constraints(model, t, &imgs, &mut cons);
        }
        let hb = linalg::kernel(&cons, qb.len());
        if hb.is_empty() {
            continue;
        }
        let hvecs: Vec<Vector> = hb.iter().map(|h| linalg::combine(h, &qb, cols.len())).collect();
        let h = hvecs.len();
        let mut base: Vec<Vector> = t.rows(mu).to_vec();
        base.extend((0..cols.len()).filter(|&i| model.monomials[cols[i]].degree() <= k).map(|i| linalg::unit_vec(cols.len(), i)));
        let rb = linalg::rank(&base);
        let mut with_h = base.clone();
        with_h.extend(hvecs.iter().cloned());
        let free = linalg::rank(&with_h) - rb;
        let s = h - free;
        let dim_l = generate(model, mu, &hvecs[0], t, &ctx.fe).len();
        for d in 1..=free {
            if d * dim_l <= budget && (s > 0 || d < h) {
                return Err(QgrError::InfiniteFamily(format!(
                    "weight {mu:?}: {h} highest-weight vectors ({s} of lower degree), modules of dim {dim_l}, budget {budget}"
                )));
            }
        }
        if s == 0 {
            let mut module = Vec::new();
            for v in &hvecs {
                module.extend(generate(model, mu, v, t, &ctx.fe));
            }
            cands.push((h * dim_l, module));
        }
    }

    let mut out = Vec::new();
    let nc = cands.len();
    for mask in 1u64..(1u64 << nc) {
        let total: usize = (0..nc).filter(|i| mask >> i & 1 == 1).map(|i| cands[i].0).sum();
        if total > budget {
            continue;
        }
        let mut s = t.clone();
        for i in (0..nc).filter(|i| mask >> i & 1 == 1) {
            for (w, v) in &cands[i].1 {
                s.add_part(model, w, std::slice::from_ref(v));
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Match a space against the list of known tangent spaces by dimension and
/// weight support.
pub fn label_space(model: &DualModel, s: &Space) -> Option<String> {
    let (n, r) = (model.n(), model.r());
    let zero = vec![0; n - 1];
    if s.rows(&zero).len() != 1 || !s.contains(&model.counit()) {
        return None;
    }
    if s.dim() == 1 {
        return Some("T0".into());
    }
    let d = r * (n - r);
    let mut deg1 = [0usize; 2];
    let mut deg2 = [0usize; 2];
    for (mu, p) in &s.parts {
        if *mu == zero {
            continue;
        }
        let side = match weight_side(mu)? {
            RootSide::E => 0,
            RootSide::F => 1,
        };
        let cols = &model.by_weight[mu];
        let hi: Vec<usize> = (0..cols.len()).filter(|&i| model.monomials[cols[i]].degree() >= 2).collect();
        if p.rows.iter().any(|row| (0..cols.len()).any(|i| model.monomials[cols[i]].degree() >= 3 && !row[i].is_zero())) {
            return None;
        }
        let proj: Vec<Vector> = p.rows.iter().map(|row| hi.iter().map(|&i| row[i].clone()).collect()).collect();
        let h = if hi.is_empty() { 0 } else { linalg::rank(&proj) };
        deg2[side] += h;
        deg1[side] += p.dim() - h;
    }
    let v1 = r * (r + 1) * (n - r) * (n - r + 1) / 4;
    let v2 = r * (r - 1) * (n - r) * (n - r - 1) / 4;
    let sides = ["+", "-"];
    match (deg1, deg2) {
        ([a, 0], [0, 0]) if a == d => Some("T+".into()),
        ([0, b], [0, 0]) if b == d => Some("T-".into()),
        ([a, b], [0, 0]) if a == d && b == d => Some("T".into()),
        _ => {
            for side in 0..2 {
                let other = 1 - side;
                if deg1[side] == d && deg1[other] == 0 && deg2[other] == 0 && deg2[side] > 0 {
                    if deg2[side] == v1 {
                        return Some(format!("T1,{}", sides[side]));
                    }
                    if deg2[side] == v2 {
                        return Some(format!("T2,{}", sides[side]));
                    }
                }
            }
            None
        }
    }
}

/// `L_T` within the truncation: per weight, the subspace of combinations of
/// the chosen minor-row words on which every element of T vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealTruncation {
    pub m: usize,
    pub parts: BTreeMap<Weight, Subspace>,
}

impl IdealTruncation {
    pub fn dim(&self) -> usize {
        self.parts.values().map(|p| p.dim()).sum()
    }

    /// Codimension inside the span of B⁺ modulo (B⁺)^{m+1}.
    pub fn codim(&self, model: &DualModel) -> usize {
        model.monomials.len() - 1 - self.dim()
    }

    /// Elements of the ideal written as combinations of words.
    pub fn elements(&self, model: &DualModel) -> Vec<ShiftedElement> {
        let mut out = Vec::new();
        for (mu, p) in &self.parts {
            let rows = model.minor_rows(mu);
            for beta in &p.rows {
                out.push(rows.iter().zip(beta).map(|(&w, c)| (model.words[w].clone(), c.clone())).collect());
            }
        }
        out
    }
}

pub fn ideal_of(model: &DualModel, t: &TangentSpace) -> IdealTruncation {
    let mut parts = BTreeMap::new();
    for mu in model.by_weight.keys() {
        let mm = model.minor(mu);
        let cons: Vec<Vector> = t.space.rows(mu).iter().map(|c| linalg::mat_vec(&mm, c)).collect();
        let ker = linalg::kernel(&cons, mm.len());
        parts.insert(mu.clone(), Subspace::span(mm.len(), &ker));
    }
    IdealTruncation { m: model.m, parts }
}

pub fn tangent_of(model: &DualModel, l: &IdealTruncation) -> TangentSpace {
    let mut space = Space::zero();
    for (mu, cols) in &model.by_weight {
        let mm = model.minor(mu);
        let mt = linalg::transpose(&mm, cols.len());
        let cons: Vec<Vector> = l.parts[mu].rows.iter().map(|beta| linalg::mat_vec(&mt, beta)).collect();
        let ker = linalg::kernel(&cons, cols.len());
        if !ker.is_empty() {
            space.add_part(model, mu, &ker);
        }
    }
    TangentSpace::new(space)
}

/// Whether `z+_a L` lies in `L` for every generator, inside the truncation.
pub fn is_left_ideal(model: &DualModel, l: &IdealTruncation) -> bool {
    let gens = model.grass.generators();
    for (mu, p) in &l.parts {
        let rows = model.minor_rows(mu);
        for beta in &p.rows {
            for &a in &gens {
                let nmu: Weight = mu.iter().zip(a.label(model.n())).map(|(x, y)| x - y).collect();
                let Some(cols) = model.by_weight.get(&nmu) else { continue };
                let mut x = linalg::zero_vec(cols.len());
                for (&w, bj) in rows.iter().zip(beta) {
                    if bj.is_zero() || model.words[w].len() + 1 > model.m {
                        continue;
                    }
                    let mut aw = vec![a];
                    aw.extend_from_slice(&model.words[w].0);
                    let id = model.word_id(&SWord(aw)).unwrap();
                    for (xk, &c) in x.iter_mut().zip(cols) {
                        if let Some(v) = model.monomial_values(c).get(&id) {
                            *xk += &(bj * v);
                        }
                    }
                }
                let inv = model.minor_inverse(&nmu);
                let beta2 = linalg::mat_vec(&linalg::transpose(inv, inv.len()), &x);
                if !l.parts[&nmu].contains(&beta2) {
                    return false;
                }
            }
        }
    }
    true
}

/// Representation of B on T^eps from `t_i(ab) = sum_j rho(a)_ij t_j(b)`.
#[derive(Clone, Debug)]
pub struct InducedRep {
    pub dim: usize,
    pub basis: Vec<Functional>,
    pub rho: BTreeMap<ZGen, Matrix>,
}

fn basis_with_counit(model: &DualModel, t: &TangentSpace) -> Vec<Functional> {
    let eps = model.counit();
    let mut acc = Space::span(model, std::slice::from_ref(&eps));
    let mut out = vec![eps];
    for f in t.space.basis() {
        if !acc.contains(&f) {
            acc.add(model, &f);
            out.push(f);
        }
    }
    out
}

/// Coordinates of `g` in the given homogeneous basis.
fn express(basis: &[Functional], g: &Functional) -> Option<Vector> {
    let mut x = linalg::zero_vec(basis.len());
    let mut weights: Vec<&Weight> = g.parts.keys().collect();
    weights.extend(basis.iter().flat_map(|b| b.parts.keys()));
    weights.sort();
    weights.dedup();
    for mu in weights {
        let idx: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].parts.contains_key(mu)).collect();
        let Some(target) = g.parts.get(mu) else { continue };
        let rows: Vec<Vector> = idx.iter().map(|&i| basis[i].parts[mu].clone()).collect();
        if rows.is_empty() {
            return None;
        }
        let sol = linalg::solve_in_span(&rows, target)?;
        for (&i, c) in idx.iter().zip(sol) {
            x[i] = c;
        }
    }
    Some(x)
}

pub fn induced_rep(model: &DualModel, t: &TangentSpace) -> Result<InducedRep, QgrError> {
    let basis = basis_with_counit(model, t);
    let d = basis.len();
    let mut rho = BTreeMap::new();
    for a in model.grass.generators() {
        let e = model.grass.eps_gen(a);
        let mut m = Vec::with_capacity(d);
        for ti in &basis {
            let mut g = model.translate(ti, a);
            if !e.is_zero() {
                g.add_scaled(ti, &e);
            }
            let row = express(&basis, &g).ok_or_else(|| QgrError::Inconsistent(format!("translate by {a} leaves the space")))?;
            m.push(row);
        }
        rho.insert(a, m);
    }
    Ok(InducedRep { dim: d, basis, rho })
}

impl InducedRep {
    pub fn word_matrix(&self, w: &[ZGen]) -> Matrix {
        let mut m = linalg::identity(self.dim);
        for z in w {
            m = linalg::mat_mul(&m, &self.rho[z]);
        }
        m
    }

    /// Every relation maps to the zero matrix; returns the failing tags.
    pub fn relation_failures(&self, g: &Grassmannian) -> Vec<String> {
        let mut out = Vec::new();
        for rel in g.all_relations() {
            let mut acc: Matrix = (0..self.dim).map(|_| linalg::zero_vec(self.dim)).collect();
            for (w, c) in rel.difference().iter() {
                let m = self.word_matrix(w);
                for (ra, rm) in acc.iter_mut().zip(&m) {
                    for (x, y) in ra.iter_mut().zip(rm) {
                        if !y.is_zero() {
                            *x += &(c * y);
                        }
                    }
                }
            }
            if acc.iter().any(|r| !linalg::is_zero_vec(r)) {
                out.push(rel.tag.clone());
            }
        }
        out
    }

    /// `t_i(a b w) = sum_j (rho(a) rho(b))_ij t_j(w)` for generators `a, b`
    /// and shifted words `w` with room in the truncation; returns failures.
    pub fn leibniz_failures(&self, model: &DualModel) -> Vec<String> {
        let g = &model.grass;
        let gens = g.generators();
        let words: Vec<SWord> = g.spanning_words(model.m.saturating_sub(2));
        let mut out = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let m = linalg::mat_mul(&self.rho[&a], &self.rho[&b]);
                for w in &words {
                    let mut lhs = ShiftedElement::zero();
                    let pref = g.to_shifted(&crate::grassmann::BElement::single(vec![a, b], RatFunc::one()));
                    for (p, c) in pref.iter() {
                        let mut v = p.0.clone();
                        v.extend_from_slice(&w.0);
                        lhs.add_term(SWord(v), c);
                    }
                    let one = ShiftedElement::single(w.clone(), RatFunc::one());
                    let tw: Vec<RatFunc> = self.basis.iter().map(|t| model.functional_apply_shifted(t, &one)).collect();
                    for (i, ti) in self.basis.iter().enumerate() {
                        let l = model.functional_apply_shifted(ti, &lhs);
                        let r = linalg::dot(&m[i], &tw);
                        if l != r {
                            out.push(format!("t{i}({a}{b}{w})"));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Nilpotency and joint-spectrum data of an induced representation.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub eps_tuple: Vec<String>,
    pub eigen_tuples: Vec<Vec<String>>,
    pub offdiag_index: BTreeMap<String, usize>,
    pub diag_index: BTreeMap<String, usize>,
    pub transitions_checked: usize,
    pub violations: Vec<String>,
}

impl SpectrumReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn nilpotency_index(m: &Matrix, d: usize) -> Option<usize> {
    let mut p = linalg::identity(d);
    for k in 0..=d {
        if p.iter().all(|r| linalg::is_zero_vec(r)) {
            return Some(k);
        }
        p = linalg::mat_mul(&p, m);
    }
    None
}

fn shifted_matrix(m: &Matrix, e: &RatFunc) -> Matrix {
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= e;
    }
    out
}

/// Common kernel of the given matrices acting on column vectors.
fn common_kernel(ms: &[Matrix], d: usize) -> Matrix {
    let rows: Vec<Vector> = ms.iter().flat_map(|m| m.iter().cloned()).collect();
    linalg::kernel(&rows, d)
}

pub fn nilpotency_report(model: &DualModel, rep: &InducedRep) -> SpectrumReport {
    let g = &model.grass;
    let (n, d) = (g.n, rep.dim);
    let eps: Vec<RatFunc> = (1..=n).map(|i| g.eps_gen(ZGen::new(i, i))).collect();
    let mut violations = Vec::new();
    let mut offdiag_index = BTreeMap::new();
    let mut diag_index = BTreeMap::new();
    for z in g.generators() {
        if z.i != z.j {
            match nilpotency_index(&rep.rho[&z], d) {
                Some(k) => {
                    offdiag_index.insert(z.to_string(), k);
                }
                None => violations.push(format!("rho({z}) not nilpotent")),
            }
        }
    }
    let shifted: Vec<Matrix> = (1..=n).map(|i| shifted_matrix(&rep.rho[&ZGen::new(i, i)], &eps[i - 1])).collect();
    for i in 1..=n {
        match nilpotency_index(&shifted[i - 1], d) {
            Some(k) => {
                diag_index.insert(format!("z+({i},{i})"), k);
            }
            None => violations.push(format!("rho(z+({i},{i})) not nilpotent")),
        }
    }
    // nilpotent shifts force the eps-tuple to be the only joint eigenvalue
    let eigen_space = common_kernel(&shifted, d);
    let mut eigen_tuples = Vec::new();
    if diag_index.len() == n && !eigen_space.is_empty() {
        eigen_tuples.push(eps.iter().map(|x| x.to_string()).collect());
    } else {
        violations.push("joint spectrum differs from the eps-tuple".to_string());
    }

    let mut checked = 0;
    let gens = g.generators();
    for z in gens.iter().filter(|z| z.i != z.j) {
        let plus = z.i < z.j;
        // generators preceding z in the ordering of its block
        let smaller: Vec<Matrix> = gens
            .iter()
            .filter(|y| y.i != y.j && (y.i < y.j) == plus)
            .filter(|y| if plus { (y.i, y.j) < (z.i, z.j) } else { y.i > z.i || (y.i == z.i && y.j > z.j) })
            .map(|y| rep.rho[y].clone())
            .collect();
        let mut all = shifted.clone();
        all.extend(smaller);
        let (k, l) = (z.i, z.j);
        let lk = &eps[k - 1];
        let mut mu = eps.clone();
        if plus {
            mu[k - 1] = lk * &RatFunc::q_pow(-2);
            mu[l - 1] = &eps[l - 1] + &(&(&RatFunc::one() - &RatFunc::q_pow(-2)) * lk);
        } else {
            let c = RatFunc::q_pow(2 * k as i64 - 2 * n as i64 - 1);
            let one_m = &RatFunc::one() - &RatFunc::q_pow(2);
            mu[k - 1] = &(&RatFunc::q_pow(2) * lk) + &(&one_m * &c);
            mu[l - 1] = &(&eps[l - 1] + &(&one_m * lk)) - &(&one_m * &c);
        }
        for v in common_kernel(&all, d) {
            let w = linalg::mat_vec(&rep.rho[z], &v);
            checked += 1;
            for i in 1..=n {
                let lhs = linalg::mat_vec(&rep.rho[&ZGen::new(i, i)], &w);
                let rhs: Vector = w.iter().map(|x| x * &mu[i - 1]).collect();
                if lhs != rhs {
                    violations.push(format!("transition by {z} breaks the eigenvalue of z({i},{i})"));
                }
            }
        }
    }
    SpectrumReport {
        eps_tuple: eps.iter().map(|x| x.to_string()).collect(),
        eigen_tuples,
        offdiag_index,
        diag_index,
        transitions_checked: checked,
        violations,
    }
}

/// Predicted dimension of the degree-k one-sided part: `C(r(N-r)+k-1, k)`.
pub fn one_sided_dim(n: usize, r: usize, k: usize) -> usize {
    uq::binomial(r * (n - r) + k - 1, k)
}
