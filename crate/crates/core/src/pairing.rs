//! The dual pairing between U_q(sl_N) and O_q(Gr(r,N)).
//!
//! Two independent routes are provided. [`eval`] multiplies generator
//! matrices on tensor powers of the fundamental representation and reads off
//! a matrix coefficient. [`DualModel`] instead realizes every PBW monomial as
//! a table of values on shifted words, obtained by letting generators act
//! through the explicit action formulas: `(f.g)(b) = f(g |> b)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::QgrError;
use crate::grassmann::{BElement, Grassmannian, SWord, ShiftedElement, ZGen};
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::qfield::RatFunc;
use crate::uq::{self, Gen, GenKind, Letter, PbwMonomial, RootConvention, UElement};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Slot {
    /// A matrix coefficient `u^row_col`.
    U,
    /// An antipode image `S(u^row_col)`.
    Su,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MixedLetter {
    pub slot: Slot,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for MixedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            Slot::U => write!(f, "u({},{})", self.row, self.col),
            Slot::Su => write!(f, "Su({},{})", self.row, self.col),
        }
    }
}

pub type MixedWord = Vec<MixedLetter>;

pub type Weight = Vec<i64>;

type Sparse = Vec<(usize, usize, RatFunc)>;

fn sparse(m: &Matrix) -> Sparse {
    let mut out = Vec::new();
    for (a, row) in m.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                out.push((a, b, x.clone()));
            }
        }
    }
    out
}

/// Matrices of a generator in the two slot representations: the fundamental
/// one and `X -> rho(S(X))^T`.
fn slot_matrix(g: Gen, slot: Slot, n: usize) -> Sparse {
    match slot {
        Slot::U => sparse(&uq::fundamental_matrix(g, n)),
        Slot::Su => {
            let s = UElement::gen(g).antipode().matrix(n);
            sparse(&linalg::transpose(&s, n))
        }
    }
}

struct SlotReps {
    n: usize,
    cache: HashMap<(Gen, Slot), Sparse>,
}

impl SlotReps {
    fn new(n: usize) -> Self {
        SlotReps { n, cache: HashMap::new() }
    }
    fn get(&mut self, g: Gen, slot: Slot) -> &Sparse {
        let n = self.n;
        self.cache.entry((g, slot)).or_insert_with(|| slot_matrix(g, slot, n))
    }
}

/// `<x, w>` for a word in matrix coefficients and antipode images.
pub fn eval(x: &UElement, w: &[MixedLetter], n: usize) -> RatFunc {
    let k = w.len();
    if k == 0 {
        return x.counit();
    }
    let rows: Vec<usize> = w.iter().map(|l| if l.slot == Slot::U { l.row } else { l.col } - 1).collect();
    let cols: Vec<usize> = w.iter().map(|l| if l.slot == Slot::U { l.col } else { l.row } - 1).collect();
    let mut reps = SlotReps::new(n);
    let mut total = RatFunc::zero();
    for (word, c) in x.terms() {
        let mut vec: HashMap<Vec<usize>, RatFunc> = HashMap::new();
        vec.insert(cols.clone(), RatFunc::one());
        for &g in word.iter().rev() {
            let mut next: HashMap<Vec<usize>, RatFunc> = HashMap::new();
            let kpart = match g.kind {
                GenKind::E => Some(Gen::k(g.index)),
                GenKind::F => Some(Gen::kinv(g.index)),
                _ => None,
            };
            for t in 0..k {
                if kpart.is_none() && t > 0 {
                    break;
                }
                // per-slot matrices for this coproduct term; None is the identity
                let mats: Vec<Option<Sparse>> = (0..k)
                    .map(|s| match (g.kind, s.cmp(&t)) {
                        (GenKind::K | GenKind::Kinv, _) => Some(reps.get(g, w[s].slot).clone()),
                        (_, std::cmp::Ordering::Equal) => Some(reps.get(g, w[s].slot).clone()),
                        (GenKind::E, std::cmp::Ordering::Greater) => Some(reps.get(kpart.unwrap(), w[s].slot).clone()),
                        (GenKind::F, std::cmp::Ordering::Less) => Some(reps.get(kpart.unwrap(), w[s].slot).clone()),
                        _ => None,
                    })
                    .collect();
                for (idx, v) in &vec {
                    let mut partial: Vec<(Vec<usize>, RatFunc)> = vec![(Vec::with_capacity(k), v.clone())];
                    for s in 0..k {
                        let mut np = Vec::new();
                        match &mats[s] {
                            None => {
                                for (mut p, cc) in partial {
                                    p.push(idx[s]);
                                    np.push((p, cc));
                                }
                            }
                            Some(m) => {
                                for (p, cc) in &partial {
                                    for (a, b, x) in m {
                                        if *b == idx[s] {
                                            let mut p2 = p.clone();
                                            p2.push(*a);
                                            np.push((p2, cc * x));
                                        }
                                    }
                                }
                            }
                        }
                        partial = np;
                    }
                    for (p, cc) in partial {
                        *next.entry(p).or_default() += &cc;
                    }
                }
            }
            next.retain(|_, v| !v.is_zero());
            vec = next;
        }
        if let Some(v) = vec.get(&rows) {
            total += &(c * v);
        }
    }
    total
}

/// `<x, b>` through the embedding of B into matrix coefficients.
pub fn eval_b(x: &UElement, b: &BElement, g: &Grassmannian) -> RatFunc {
    let mut total = RatFunc::zero();
    for (w, c) in b.iter() {
        for (a, mw) in g.embed(w) {
            let v = eval(x, &mw, g.n);
            if !v.is_zero() {
                total += &(&(c * &a) * &v);
            }
        }
    }
    total
}

/// Left action of a generator on z_ij computed as `z_(1) <g, z_(2)>` from
/// the coproduct of matrix coefficients: the coefficient of z_lm is
/// `<g, u^l_i S(u^j_m)>`.
pub fn pairing_action(g: Gen, z: ZGen, n: usize) -> Vec<(ZGen, RatFunc)> {
    let x = UElement::gen(g);
    let mut out = Vec::new();
    for l in 1..=n {
        for m in 1..=n {
            let w = [MixedLetter { slot: Slot::U, row: l, col: z.i }, MixedLetter { slot: Slot::Su, row: z.j, col: m }];
            let v = eval(&x, &w, n);
            if !v.is_zero() {
                out.push((ZGen::new(l, m), v));
            }
        }
    }
    out
}

/// Values of a functional on shifted words, keyed by word id.
pub type Values = BTreeMap<usize, RatFunc>;

/// Element of the truncated dual, stored by weight as coordinates over the
/// PBW monomials of that weight.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Functional {
    pub parts: BTreeMap<Weight, Vector>,
}

impl Functional {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn homogeneous(mu: Weight, v: Vector) -> Self {
        let mut f = Self::zero();
        if !linalg::is_zero_vec(&v) {
            f.parts.insert(mu, v);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|v| linalg::is_zero_vec(v))
    }

    pub fn add_scaled(&mut self, other: &Functional, c: &RatFunc) {
        for (mu, v) in &other.parts {
            let e = self.parts.entry(mu.clone()).or_insert_with(|| linalg::zero_vec(v.len()));
            for (a, b) in e.iter_mut().zip(v) {
                *a += &(b * c);
            }
        }
        self.parts.retain(|_, v| !linalg::is_zero_vec(v));
    }

    pub fn scale(&self, c: &RatFunc) -> Functional {
        let mut out = Functional::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &Functional) -> Functional {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::one());
        out
    }
}

/// Settings for building a [`DualModel`].
#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub n: usize,
    pub r: usize,
    pub truncation: usize,
    pub convention: RootConvention,
    pub cache_dir: Option<PathBuf>,
}

impl ModelConfig {
    pub fn new(n: usize, r: usize, truncation: usize) -> Self {
        ModelConfig { n, r, truncation, convention: RootConvention::Standard, cache_dir: None }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    n: usize,
    r: usize,
    m: usize,
    convention: RootConvention,
    words: usize,
    monomials: usize,
    values: Vec<Vec<(usize, RatFunc)>>,
}

/// Realization of the degree-m truncation of U/K⁺U as functionals on
/// B/(B⁺)^{m+1}, spanned by the shifted words of length at most m.
pub struct DualModel {
    pub grass: Grassmannian,
    pub m: usize,
    pub convention: RootConvention,
    pub words: Vec<SWord>,
    word_index: HashMap<SWord, usize>,
    word_labels: Vec<Weight>,
    by_label: HashMap<Weight, Vec<usize>>,
    pub letters: Vec<Letter>,
    pub monomials: Vec<PbwMonomial>,
    pub mon_weight: Vec<Weight>,
    values: Vec<Values>,
    /// Monomial ids of each weight, in monomial order.
    pub by_weight: BTreeMap<Weight, Vec<usize>>,
    rows: BTreeMap<Weight, Vec<usize>>,
    minv: BTreeMap<Weight, Matrix>,
    actions: HashMap<Gen, Vec<Vec<(usize, RatFunc)>>>,
}

fn vadd(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vneg(a: &[i64]) -> Weight {
    a.iter().map(|x| -x).collect()
}

/// Run `f` on a dedicated pool of `jobs` worker threads.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

impl DualModel {
    pub fn build(cfg: &ModelConfig) -> Result<DualModel, QgrError> {
        let grass = Grassmannian::new(cfg.n, cfg.r)?;
        let (n, r, m) = (cfg.n, cfg.r, cfg.truncation);
        let words = grass.spanning_words(m);
        let word_index: HashMap<SWord, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let word_labels: Vec<Weight> = words.iter().map(|w| crate::grassmann::word_label(&w.0, n)).collect();
        let mut by_label: HashMap<Weight, Vec<usize>> = HashMap::new();
        for (i, l) in word_labels.iter().enumerate() {
            by_label.entry(l.clone()).or_default().push(i);
        }
        let mut actions = HashMap::new();
        for i in 1..n {
            for g in [Gen::e(i), Gen::f(i)] {
                let table: Vec<Vec<(usize, RatFunc)>> = words
                    .par_iter()
                    .map(|w| grass.act_shifted_word(g, w).iter().map(|(w2, c)| (word_index[w2], c.clone())).collect())
                    .collect();
                actions.insert(g, table);
            }
        }
        let letters = uq::pbw_letters(n, r);
        let monomials = uq::pbw_monomials(n, r, m);
        let mon_weight: Vec<Weight> = monomials.iter().map(|p| p.weight(&letters, n)).collect();
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (k, w) in mon_weight.iter().enumerate() {
            by_weight.entry(w.clone()).or_default().push(k);
        }
        let mut model = DualModel {
            grass,
            m,
            convention: cfg.convention,
            words,
            word_index,
            word_labels,
            by_label,
            letters,
            monomials,
            mon_weight,
            values: Vec::new(),
            by_weight,
            rows: BTreeMap::new(),
            minv: BTreeMap::new(),
            actions,
        };
        let cache_path = cfg.cache_dir.as_ref().map(|d| d.join(format!("dual_{n}_{r}_{m}_{:?}.json", cfg.convention).to_lowercase()));
        let loaded = match &cache_path {
            Some(p) if p.exists() => model.load_cache(p)?,
            _ => false,
        };
        if !loaded {
            model.compute_values();
            if let Some(p) = &cache_path {
                model.store_cache(p)?;
            }
        }
        model.choose_minors()?;
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.grass.n
    }

    pub fn r(&self) -> usize {
        self.grass.r
    }

    pub fn word_id(&self, w: &SWord) -> Option<usize> {
        self.word_index.get(w).copied()
    }

    pub fn word_label(&self, id: usize) -> &Weight {
        &self.word_labels[id]
    }

    pub fn words_of_label(&self, l: &[i64]) -> &[usize] {
        self.by_label.get(l).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Values of the PBW monomial with the given id.
    pub fn monomial_values(&self, k: usize) -> &Values {
        &self.values[k]
    }

    /// Rows of the invertible minor chosen for weight `mu`.
    pub fn minor_rows(&self, mu: &[i64]) -> &[usize] {
        self.rows.get(mu).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Pairing values of the chosen minor rows against the monomials of
    /// weight `mu`; rows are words, columns monomials.
    pub fn minor(&self, mu: &[i64]) -> Matrix {
        let cols = &self.by_weight[mu];
        self.rows[mu].iter().map(|w| cols.iter().map(|&c| self.values[c].get(w).cloned().unwrap_or_default()).collect()).collect()
    }

    pub fn minor_inverse(&self, mu: &[i64]) -> &Matrix {
        &self.minv[mu]
    }

    fn compute_values(&mut self) {
        let conv = self.convention;
        let letter_elems: Vec<UElement> = self
            .letters
            .iter()
            .map(|l| PbwMonomial { letters: vec![self.letters.iter().position(|x| x == l).unwrap()] }.to_uelement(&self.letters, conv))
            .collect();
        let mut values: Vec<Values> = Vec::with_capacity(self.monomials.len());
        let mut idx: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut start = 0;
        while start < self.monomials.len() {
            let deg = self.monomials[start].degree();
            let end = (start..self.monomials.len()).find(|&k| self.monomials[k].degree() != deg).unwrap_or(self.monomials.len());
            let layer: Vec<Values> = (start..end)
                .into_par_iter()
                .map(|k| {
                    let mon = &self.monomials[k];
                    if mon.letters.is_empty() {
                        let mut v = Values::new();
                        v.insert(0, RatFunc::one());
                        return v;
                    }
                    let pre = &mon.letters[..mon.letters.len() - 1];
                    let pid = idx[pre];
                    let pw = &self.mon_weight[pid];
                    let x = &letter_elems[*mon.letters.last().unwrap()];
                    let mut acc = Values::new();
                    for (uw, c) in x.terms() {
                        let mut f = values[pid].clone();
                        let mut fw = pw.clone();
                        for &g in uw {
                            let (nf, nw) = self.apply_gen_values(&f, &fw, g);
                            f = nf;
                            fw = nw;
                        }
                        for (w, v) in f {
                            *acc.entry(w).or_default() += &(c * &v);
                        }
                    }
                    acc.retain(|_, v| !v.is_zero());
                    acc
                })
                .collect();
            for (k, v) in (start..end).zip(layer) {
                idx.insert(self.monomials[k].letters.clone(), k);
                values.push(v);
            }
            start = end;
        }
        self.values = values;
    }

    fn load_cache(&mut self, p: &Path) -> Result<bool, QgrError> {
        let text = std::fs::read_to_string(p).map_err(|e| QgrError::Cache(format!("{}: {e}", p.display())))?;
        let c: CacheFile = serde_json::from_str(&text).map_err(|e| QgrError::Cache(format!("{}: {e}", p.display())))?;
        if c.n != self.n()
            || c.r != self.r()
            || c.m != self.m
            || c.convention != self.convention
            || c.words != self.words.len()
            || c.monomials != self.monomials.len()
        {
            return Ok(false);
        }
        self.values = c.values.into_iter().map(|v| v.into_iter().collect()).collect();
        Ok(true)
    }

    fn store_cache(&self, p: &Path) -> Result<(), QgrError> {
        if let Some(d) = p.parent() {
            std::fs::create_dir_all(d).map_err(|e| QgrError::Cache(format!("{}: {e}", d.display())))?;
        }
        let c = CacheFile {
            n: self.n(),
            r: self.r(),
            m: self.m,
            convention: self.convention,
            words: self.words.len(),
            monomials: self.monomials.len(),
            values: self.values.iter().map(|v| v.iter().map(|(a, b)| (*a, b.clone())).collect()).collect(),
        };
        let text = serde_json::to_string(&c).map_err(|e| QgrError::Cache(e.to_string()))?;
        std::fs::write(p, text).map_err(|e| QgrError::Cache(format!("{}: {e}", p.display())))
    }

    fn choose_minors(&mut self) -> Result<(), QgrError> {
        for (mu, cols) in &self.by_weight {
            let mut space = Subspace::zero(cols.len());
            let mut chosen = Vec::new();
            let mut minor = Vec::new();
            for &w in self.words_of_label(&vneg(mu)) {
                let row: Vector = cols.iter().map(|&c| self.values[c].get(&w).cloned().unwrap_or_default()).collect();
                if !linalg::is_zero_vec(&space.reduce(&row)) {
                    space = space.add_vectors(std::slice::from_ref(&row));
                    chosen.push(w);
                    minor.push(row);
                    if chosen.len() == cols.len() {
                        break;
                    }
                }
            }
            if chosen.len() < cols.len() {
                return Err(QgrError::RankDeficient(format!("weight {mu:?}: rank {} < {}", chosen.len(), cols.len())));
            }
            let inv = linalg::inverse(&minor).ok_or_else(|| QgrError::RankDeficient(format!("weight {mu:?}")))?;
            self.rows.insert(mu.clone(), chosen);
            self.minv.insert(mu.clone(), inv);
        }
        Ok(())
    }

    /// `(f.g)(w) = f(g |> w)` on value tables; `f` has weight `fw`.
    pub fn apply_gen_values(&self, f: &Values, fw: &[i64], g: Gen) -> (Values, Weight) {
        let n = self.n();
        let nw = vadd(fw, &g.weight(n));
        let mut out = Values::new();
        match g.kind {
            GenKind::K | GenKind::Kinv => {
                for (&w, v) in f {
                    let e: i64 = self.words[w].0.iter().map(|&z| Grassmannian::k_exponent(g.index, z)).sum();
                    let e = if g.kind == GenKind::K { e } else { -e };
                    out.insert(w, v * &RatFunc::q_pow(e));
                }
            }
            _ => {
                let table = &self.actions[&g];
                for &w in self.words_of_label(&vneg(&nw)) {
                    let mut s = RatFunc::zero();
                    for (w2, c) in &table[w] {
                        if let Some(v) = f.get(w2) {
                            s += &(c * v);
                        }
                    }
                    if !s.is_zero() {
                        out.insert(w, s);
                    }
                }
            }
        }
        (out, nw)
    }

    /// Values of a functional on all shifted words of length at most m.
    pub fn values_of(&self, f: &Functional) -> Values {
        let mut out = Values::new();
        for (mu, v) in &f.parts {
            for (c, &k) in v.iter().zip(&self.by_weight[mu]) {
                if c.is_zero() {
                    continue;
                }
                for (w, x) in &self.values[k] {
                    *out.entry(*w).or_default() += &(c * x);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn values_of_part(&self, mu: &[i64], v: &[RatFunc]) -> Values {
        let mut f = Functional::zero();
        f.parts.insert(mu.to_vec(), v.to_vec());
        self.values_of(&f)
    }

    /// Coordinates of a weight-homogeneous value table; `None` if the values
    /// are not those of an element of the truncated dual.
    pub fn coords_from_values(&self, mu: &[i64], vals: &Values) -> Option<Vector> {
        let Some(rows) = self.rows.get(mu) else {
            return if vals.values().all(|v| v.is_zero()) { Some(Vec::new()) } else { None };
        };
        let b: Vector = rows.iter().map(|w| vals.get(w).cloned().unwrap_or_default()).collect();
        Some(linalg::mat_vec(&self.minv[mu], &b))
    }

    /// Split a value table by weight and convert each part to coordinates,
    /// checking that the coordinates reproduce every value.
    pub fn functional_from_values(&self, vals: &Values) -> Result<Functional, QgrError> {
        let mut parts: BTreeMap<Weight, Values> = BTreeMap::new();
        for (&w, v) in vals {
            if !v.is_zero() {
                parts.entry(vneg(&self.word_labels[w])).or_default().insert(w, v.clone());
            }
        }
        let mut f = Functional::zero();
        for (mu, pv) in parts {
            let c = self
                .coords_from_values(&mu, &pv)
                .ok_or_else(|| QgrError::Inconsistent(format!("values of weight {mu:?} outside the truncated dual")))?;
            if self.values_of_part(&mu, &c) != pv {
                return Err(QgrError::Inconsistent(format!("values of weight {mu:?} not in the span of PBW functionals")));
            }
            if !linalg::is_zero_vec(&c) {
                f.parts.insert(mu, c);
            }
        }
        Ok(f)
    }

    /// The counit as a functional.
    pub fn counit(&self) -> Functional {
        let zero = vec![0; self.n() - 1];
        let len = self.by_weight[&zero].len();
        Functional::homogeneous(zero, linalg::unit_vec(len, 0))
    }

    /// The functional of the PBW monomial with id `k`.
    pub fn monomial_functional(&self, k: usize) -> Functional {
        let mu = self.mon_weight[k].clone();
        let cols = &self.by_weight[&mu];
        let pos = cols.iter().position(|&c| c == k).unwrap();
        Functional::homogeneous(mu, linalg::unit_vec(cols.len(), pos))
    }

    /// Value table of an arbitrary element of U restricted to words of length
    /// at most m.
    pub fn element_values(&self, x: &UElement) -> Values {
        let zero = vec![0; self.n() - 1];
        let mut acc = Values::new();
        for (uw, c) in x.terms() {
            let mut f = Values::new();
            f.insert(0, RatFunc::one());
            let mut fw = zero.clone();
            for &g in uw {
                let (nf, nw) = self.apply_gen_values(&f, &fw, g);
                f = nf;
                fw = nw;
            }
            for (w, v) in f {
                *acc.entry(w).or_default() += &(c * &v);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    /// The functional `b -> <x, b>` in PBW coordinates.
    pub fn functional_of(&self, x: &UElement) -> Result<Functional, QgrError> {
        self.functional_from_values(&self.element_values(x))
    }

    pub fn functional_apply_shifted(&self, f: &Functional, s: &ShiftedElement) -> RatFunc {
        let vals = self.values_of(f);
        let mut total = RatFunc::zero();
        for (w, c) in s.iter() {
            if w.len() > self.m {
                continue;
            }
            if let Some(v) = self.word_index.get(w).and_then(|id| vals.get(id)) {
                total += &(c * v);
            }
        }
        total
    }

    /// `f(b)`; shifted words longer than the truncation pair to zero.
    pub fn functional_apply(&self, f: &Functional, b: &BElement) -> RatFunc {
        self.functional_apply_shifted(f, &self.grass.to_shifted(b))
    }

    /// Right action `(f.g)(b) = f(g |> b)`.
    pub fn act(&self, f: &Functional, g: Gen) -> Functional {
        let mut out = Functional::zero();
        for (mu, v) in &f.parts {
            let vals = self.values_of_part(mu, v);
            let (nv, nw) = self.apply_gen_values(&vals, mu, g);
            if let Some(c) = self.coords_from_values(&nw, &nv) {
                if !linalg::is_zero_vec(&c) {
                    out.add_scaled(&Functional::homogeneous(nw, c), &RatFunc::one());
                }
            }
        }
        out
    }

    /// Left translate `(tr_a f)(w) = f(z+_a w)`, which is again a functional
    /// of degree at most m - 1.
    pub fn translate(&self, f: &Functional, a: ZGen) -> Functional {
        let la = a.label(self.n());
        let mut out = Functional::zero();
        for (mu, v) in &f.parts {
            let vals = self.values_of_part(mu, v);
            let nw = vadd(mu, &la);
            let mut res = Values::new();
            for &w in self.words_of_label(&vneg(&nw)) {
                if self.words[w].len() + 1 > self.m {
                    continue;
                }
                let mut aw = vec![a];
                aw.extend_from_slice(&self.words[w].0);
                if let Some(x) = vals.get(&self.word_index[&SWord(aw)]) {
                    res.insert(w, x.clone());
                }
            }
            if let Some(c) = self.coords_from_values(&nw, &res) {
                if !linalg::is_zero_vec(&c) {
                    out.add_scaled(&Functional::homogeneous(nw, c), &RatFunc::one());
                }
            }
        }
        out
    }

    /// Largest PBW degree with a nonzero coordinate.
    pub fn degree(&self, f: &Functional) -> usize {
        let mut d = 0;
        for (mu, v) in &f.parts {
            for (c, &k) in v.iter().zip(&self.by_weight[mu]) {
                if !c.is_zero() {
                    d = d.max(self.monomials[k].degree());
                }
            }
        }
        d
    }

    /// Human-readable expansion in PBW monomials.
    pub fn describe(&self, f: &Functional) -> Vec<(String, RatFunc)> {
        let mut out = Vec::new();
        for (mu, v) in &f.parts {
            for (c, &k) in v.iter().zip(&self.by_weight[mu]) {
                if !c.is_zero() {
                    out.push((self.monomials[k].label(&self.letters), c.clone()));
                }
            }
        }
        out
    }
}

/// Pairing values of PBW monomials (columns) against shifted words (rows).
#[derive(Clone, Debug)]
pub struct PairingMatrix {
    pub rows: Vec<SWord>,
    pub cols: Vec<PbwMonomial>,
    pub col_labels: Vec<String>,
    pub entries: Matrix,
    /// Row indices of an invertible minor.
    pub minor_rows: Vec<usize>,
}

impl PairingMatrix {
    pub fn rank(&self, seed: u64) -> usize {
        linalg::exact_rank(&self.entries, seed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("word");
        for c in &self.col_labels {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (w, row) in self.rows.iter().zip(&self.entries) {
            out.push_str(&w.to_string());
            for x in row {
                out.push(',');
                out.push_str(&x.to_text());
            }
            out.push('\n');
        }
        out
    }
}

impl DualModel {
    /// The pairing matrix of PBW monomials of degree at most `k <= m`
    /// against all shifted words of length at most `k`.
    pub fn pairing_matrix(&self, k: usize) -> PairingMatrix {
        let rows: Vec<usize> = (0..self.words.len()).filter(|&w| self.words[w].len() <= k).collect();
        let cols: Vec<usize> = (0..self.monomials.len()).filter(|&c| self.monomials[c].degree() <= k).collect();
        let entries: Matrix =
            rows.iter().map(|w| cols.iter().map(|&c| self.values[c].get(w).cloned().unwrap_or_default()).collect()).collect();
        let mut minor_rows = Vec::new();
        if k == self.m {
            for rs in self.rows.values() {
                minor_rows.extend(rs.iter().copied());
            }
            minor_rows.sort();
        }
        PairingMatrix {
            rows: rows.iter().map(|&w| self.words[w].clone()).collect(),
            cols: cols.iter().map(|&c| self.monomials[c].clone()).collect(),
            col_labels: cols.iter().map(|&c| self.monomials[c].label(&self.letters)).collect(),
            entries,
            minor_rows,
        }
    }
}

/// Pairing matrix for `(N, r, k)`; fails with a rank-deficiency error if the
/// monomials are not separated by the words.
pub fn pairing_matrix(n: usize, r: usize, k: usize, conv: RootConvention) -> Result<PairingMatrix, QgrError> {
    let mut cfg = ModelConfig::new(n, r, k);
    cfg.convention = conv;
    let model = DualModel::build(&cfg)?;
    Ok(model.pairing_matrix(k))
}

/// The same matrix computed entry by entry through [`eval_b`].
pub fn pairing_matrix_by_eval(n: usize, r: usize, k: usize, conv: RootConvention) -> Result<Matrix, QgrError> {
    let g = Grassmannian::new(n, r)?;
    let letters = uq::pbw_letters(n, r);
    let mons: Vec<UElement> = uq::pbw_monomials(n, r, k).iter().map(|p| p.to_uelement(&letters, conv)).collect();
    let rows: Vec<BElement> = g.spanning_words(k).into_iter().map(|w| g.from_shifted(&ShiftedElement::single(w, RatFunc::one()))).collect();
    Ok(rows.par_iter().map(|b| mons.iter().map(|x| eval_b(x, b, &g)).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(slot: Slot, row: usize, col: usize) -> MixedLetter {
        MixedLetter { slot, row, col }
    }

    #[test]
    fn unit_pairs_by_counit() {
        let one = UElement::one();
        assert!(eval(&one, &[ml(Slot::U, 1, 1), ml(Slot::Su, 2, 2)], 2).is_one());
        assert!(eval(&one, &[ml(Slot::U, 1, 2)], 2).is_zero());
    }

    #[test]
    fn generator_pairings() {
        for (n, r) in [(2, 1), (3, 1), (4, 2)] {
            let g = Grassmannian::new(n, r).unwrap();
            let z = BElement::single(vec![ZGen::new(r, r + 1)], RatFunc::one());
            let s = (n - r) as i64;
            assert_eq!(eval_b(&UElement::gen(Gen::e(r)), &z, &g), RatFunc::q_pow(-2 * s));
        }
        let g = Grassmannian::new(2, 1).unwrap();
        let z = BElement::single(vec![ZGen::new(2, 1)], RatFunc::one());
        assert_eq!(eval_b(&UElement::gen(Gen::f(1)), &z, &g), -RatFunc::q_pow(-3));
    }

    #[test]
    fn pairing_action_matches_formula() {
        let n = 3;
        let g = Grassmannian::new(n, 1).unwrap();
        for i in 1..n {
            for gen in [Gen::e(i), Gen::f(i), Gen::k(i)] {
                for z in g.generators() {
                    let mut a: Vec<_> = pairing_action(gen, z, n);
                    let mut b = g.act_gen(gen, z);
                    a.sort_by_key(|x| x.0);
                    b.sort_by_key(|x| x.0);
                    assert_eq!(a, b, "{gen} on {z}");
                }
            }
        }
    }

    #[test]
    fn model_matches_eval_route() {
        let m = DualModel::build(&ModelConfig::new(2, 1, 2)).unwrap();
        let direct = pairing_matrix_by_eval(2, 1, 2, RootConvention::Standard).unwrap();
        assert_eq!(m.pairing_matrix(2).entries, direct);
    }

    #[test]
    fn small_pairing_matrices() {
        let p = pairing_matrix(2, 1, 1, RootConvention::Standard).unwrap();
        assert_eq!((p.entries.len(), p.cols.len()), (5, 3));
        assert_eq!(p.rank(1), 3);
        let p0 = pairing_matrix(2, 1, 0, RootConvention::Standard).unwrap();
        assert_eq!(p0.entries, vec![vec![RatFunc::one()]]);
        assert!(p.to_csv().starts_with("word,1,F[1,1],E[1,1]\n"));
    }

    #[test]
    fn functional_round_trips() {
        let m = DualModel::build(&ModelConfig::new(2, 1, 2)).unwrap();
        let eps = m.counit();
        let z = BElement::single(vec![ZGen::new(2, 2), ZGen::new(2, 2)], RatFunc::one());
        assert_eq!(m.functional_apply(&eps, &z), RatFunc::q_pow(-2));
        assert_eq!(m.functional_of(&UElement::one()).unwrap(), eps);
        assert!(m.functional_of(&UElement::zero()).unwrap().is_zero());
        let e = UElement::gen(Gen::e(1));
        let fe = m.functional_of(&e).unwrap();
        let b = BElement::single(vec![ZGen::new(1, 2)], RatFunc::one());
        assert_eq!(m.functional_apply(&fe, &b), eval_b(&e, &b, &m.grass));
        assert_eq!(fe.parts.len(), 1);
        let (mu, v) = fe.parts.iter().next().unwrap();
        assert_eq!(mu, &vec![1]);
        assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 1);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("qgr-cache-test-{}", std::process::id()));
        let mut cfg = ModelConfig::new(2, 1, 2);
        cfg.cache_dir = Some(dir.clone());
        let a = DualModel::build(&cfg).unwrap();
        let b = DualModel::build(&cfg).unwrap();
        assert_eq!(a.values, b.values);
        std::fs::remove_dir_all(dir).ok();
    }
}
