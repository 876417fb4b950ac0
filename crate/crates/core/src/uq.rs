//! Words and linear combinations in the generators of U_q(sl_N), their
//! coproduct and antipode, the vector representation, root vectors for the
//! roots that straddle `r`, and the PBW monomials spanning U/K⁺U.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::QgrError;
use crate::linalg::{identity, zero_vec, Matrix};
use crate::qfield::RatFunc;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum GenKind {
    E,
    F,
    K,
    Kinv,
}

/// A generator symbol `E_i`, `F_i`, `K_i` or `K_i^{-1}`, `1 <= i <= N-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Gen {
    pub kind: GenKind,
    pub index: usize,
}

impl Gen {
    pub fn new(kind: GenKind, index: usize, n: usize) -> Result<Gen, QgrError> {
        if index == 0 || index >= n {
            return Err(QgrError::IndexOutOfRange(format!("generator index {index} for N = {n}")));
        }
        Ok(Gen { kind, index })
    }

    pub fn e(i: usize) -> Gen {
        Gen { kind: GenKind::E, index: i }
    }
    pub fn f(i: usize) -> Gen {
        Gen { kind: GenKind::F, index: i }
    }
    pub fn k(i: usize) -> Gen {
        Gen { kind: GenKind::K, index: i }
    }
    pub fn kinv(i: usize) -> Gen {
        Gen { kind: GenKind::Kinv, index: i }
    }

    /// Weight as a vector in Z^{N-1}.
    pub fn weight(&self, n: usize) -> Vec<i64> {
        let mut w = vec![0; n - 1];
        match self.kind {
            GenKind::E => w[self.index - 1] = 1,
            GenKind::F => w[self.index - 1] = -1,
            _ => {}
        }
        w
    }

    pub fn is_grouplike(&self) -> bool {
        matches!(self.kind, GenKind::K | GenKind::Kinv)
    }

    /// Membership in the Hopf subalgebra K (everything except E_r, F_r).
    pub fn in_k(&self, r: usize) -> bool {
        self.is_grouplike() || self.index != r
    }

    /// Counit value.
    pub fn counit(&self) -> RatFunc {
        if self.is_grouplike() {
            RatFunc::one()
        } else {
            RatFunc::zero()
        }
    }

    fn inverse_of(&self, other: &Gen) -> bool {
        self.index == other.index && matches!((self.kind, other.kind), (GenKind::K, GenKind::Kinv) | (GenKind::Kinv, GenKind::K))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GenKind::E => "E",
            GenKind::F => "F",
            GenKind::K => "K",
            GenKind::Kinv => "Kinv",
        };
        write!(f, "{k}{}", self.index)
    }
}

pub type UWord = Vec<Gen>;

/// Append `g` to a word, cancelling an adjacent `K_i K_i^{-1}` pair.
fn push_reduced(w: &mut UWord, g: Gen) {
    if w.last().is_some_and(|l| l.inverse_of(&g)) {
        w.pop();
    } else {
        w.push(g);
    }
}

fn concat(a: &[Gen], b: &[Gen]) -> UWord {
    let mut w = a.to_vec();
    for &g in b {
        push_reduced(&mut w, g);
    }
    w
}

/// Linear combination of generator words with Q(q) coefficients. Words are
/// not straightened; only `K K^{-1}` cancellation is applied.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UElement {
    terms: BTreeMap<UWord, RatFunc>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        UElement::from_word(Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        UElement::from_word(vec![g])
    }

    pub fn from_word(w: UWord) -> Self {
        let mut reduced = Vec::new();
        for g in w {
            push_reduced(&mut reduced, g);
        }
        let mut terms = BTreeMap::new();
        terms.insert(reduced, RatFunc::one());
        UElement { terms }
    }

    pub fn terms(&self) -> &BTreeMap<UWord, RatFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: UWord, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> UElement {
        if c.is_zero() {
            return UElement::zero();
        }
        UElement { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &UElement) -> UElement {
        self.add(&other.scale(&RatFunc::from_int(-1)))
    }

    pub fn mul(&self, other: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(concat(a, b), &(x * y));
            }
        }
        out
    }

    /// Common weight of all terms, or `None` if the element mixes weights.
    /// The zero element is reported as weight zero.
    pub fn weight(&self, n: usize) -> Option<Vec<i64>> {
        let mut found: Option<Vec<i64>> = None;
        for w in self.terms.keys() {
            let wt = word_weight(w, n);
            match &found {
                None => found = Some(wt),
                Some(f) if *f != wt => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or_else(|| vec![0; n - 1]))
    }

    /// Counit: 1 on K-words, 0 on any word containing E or F.
    pub fn counit(&self) -> RatFunc {
        let mut s = RatFunc::zero();
        for (w, c) in &self.terms {
            if w.iter().all(|g| g.is_grouplike()) {
                s += c;
            }
        }
        s
    }

    /// Antipode, extended anti-multiplicatively.
    pub fn antipode(&self) -> UElement {
        let mut out = UElement::zero();
        for (w, c) in &self.terms {
            let mut acc = UElement::one().scale(c);
            for g in w {
                acc = antipode_gen(*g).mul(&acc);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Iterated coproduct into `k` tensor slots.
    pub fn coproduct(&self, k: usize) -> Tensor {
        assert!(k >= 1, "coproduct needs at least one slot");
        let mut out = Tensor::zero(k);
        for (w, c) in &self.terms {
            let mut acc = Tensor::unit(k).scale(c);
            for g in w {
                acc = acc.mul(&coproduct_gen(*g, k));
            }
            out = out.add(&acc);
        }
        out
    }

    /// Image in the vector representation.
    pub fn matrix(&self, n: usize) -> Matrix {
        let mut out: Matrix = (0..n).map(|_| zero_vec(n)).collect();
        for (w, c) in &self.terms {
            let mut m = identity(n);
            for g in w {
                m = crate::linalg::mat_mul(&m, &fundamental_matrix(*g, n));
            }
            for i in 0..n {
                for j in 0..n {
                    if !m[i][j].is_zero() {
                        out[i][j] += &(c * &m[i][j]);
                    }
                }
            }
        }
        out
    }
}

pub fn word_weight(w: &[Gen], n: usize) -> Vec<i64> {
    let mut wt = vec![0; n - 1];
    for g in w {
        for (a, b) in wt.iter_mut().zip(g.weight(n)) {
            *a += b;
        }
    }
    wt
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_empty() { "1".to_string() } else { w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("*") };
                if c.is_one() {
                    word
                } else {
                    format!("({c})*{word}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn antipode_gen(g: Gen) -> UElement {
    let minus = RatFunc::from_int(-1);
    match g.kind {
        GenKind::E => UElement::from_word(vec![g, Gen::kinv(g.index)]).scale(&minus),
        GenKind::F => UElement::from_word(vec![Gen::k(g.index), g]).scale(&minus),
        GenKind::K => UElement::gen(Gen::kinv(g.index)),
        GenKind::Kinv => UElement::gen(Gen::k(g.index)),
    }
}

/// Iterated coproduct of a generator: `E` sits in one slot with `K` to its
/// right and `1` to its left; `F` has `K^{-1}` to its left and `1` to its right.
fn coproduct_gen(g: Gen, k: usize) -> Tensor {
    let mut t = Tensor::zero(k);
    if g.is_grouplike() {
        t.add_term(vec![vec![g]; k], &RatFunc::one());
        return t;
    }
    for s in 0..k {
        let slots: Vec<UWord> = (0..k)
            .map(|j| match (g.kind, j.cmp(&s)) {
                (_, std::cmp::Ordering::Equal) => vec![g],
                (GenKind::E, std::cmp::Ordering::Greater) => vec![Gen::k(g.index)],
                (GenKind::F, std::cmp::Ordering::Less) => vec![Gen::kinv(g.index)],
                _ => Vec::new(),
            })
            .collect();
        t.add_term(slots, &RatFunc::one());
    }
    t
}

/// Element of the k-fold tensor power, as a combination of slot words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    pub slots: usize,
    terms: BTreeMap<Vec<UWord>, RatFunc>,
}

impl Tensor {
    pub fn zero(k: usize) -> Self {
        Tensor { slots: k, terms: BTreeMap::new() }
    }

    pub fn unit(k: usize) -> Self {
        let mut t = Tensor::zero(k);
        t.add_term(vec![Vec::new(); k], &RatFunc::one());
        t
    }

    pub fn terms(&self) -> &BTreeMap<Vec<UWord>, RatFunc> {
        &self.terms
    }

    pub fn add_term(&mut self, w: Vec<UWord>, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(w.clone()).or_default();
        *v += c;
        if v.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Tensor {
        let mut t = Tensor::zero(self.slots);
        for (w, x) in &self.terms {
            t.add_term(w.clone(), &(x * c));
        }
        t
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut t = self.clone();
        for (w, c) in &other.terms {
            t.add_term(w.clone(), c);
        }
        t
    }

    /// Slotwise product.
    pub fn mul(&self, other: &Tensor) -> Tensor {
        let mut t = Tensor::zero(self.slots);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let w: Vec<UWord> = a.iter().zip(b).map(|(p, s)| concat(p, s)).collect();
                t.add_term(w, &(x * y));
            }
        }
        t
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Vector representation of a generator on C^N:
/// `E_k -> e_{k+1,k}`, `F_k -> e_{k,k+1}`, `K_k -> diag(.., q^{-1}, q, ..)`
/// with the nontrivial entries in rows `k`, `k+1`. This is the convention under
/// which the pairing reproduces the action formulas on the generators z_ij.
pub fn fundamental_matrix(g: Gen, n: usize) -> Matrix {
    let k = g.index;
    assert!(k >= 1 && k < n, "generator index out of range");
    let mut m: Matrix = (0..n).map(|_| zero_vec(n)).collect();
    match g.kind {
        GenKind::E => m[k][k - 1] = RatFunc::one(),
        GenKind::F => m[k - 1][k] = RatFunc::one(),
        GenKind::K | GenKind::Kinv => {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = RatFunc::one();
            }
            let s = if g.kind == GenKind::K { 1 } else { -1 };
            m[k - 1][k - 1] = RatFunc::q_pow(-s);
            m[k][k] = RatFunc::q_pow(s);
        }
    }
    m
}

/// Which q-commutator recursion defines the non-simple root vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, Default)]
pub enum RootConvention {
    /// `E_{ij} = E_{i,j-1} E_j - q^{-1} E_j E_{i,j-1}`,
    /// `F_{ij} = F_j F_{i,j-1} - q F_{i,j-1} F_j`.
    #[default]
    Standard,
    /// The same recursions with `q` and `q^{-1}` exchanged.
    Alternate,
}

/// The roots `alpha_ij = alpha_i + ... + alpha_j` with `i <= r <= j`, in
/// lexicographic order of `(i, j)`.
pub fn phi_r(n: usize, r: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=r {
        for j in r..n {
            out.push((i, j));
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum RootSide {
    E,
    F,
}

/// Root vector `E_{alpha_ij}` or `F_{alpha_ij}` by iterated q-commutators.
pub fn root_vector(side: RootSide, i: usize, j: usize, r: usize, conv: RootConvention) -> Result<UElement, QgrError> {
    if !(1 <= i && i <= r && r <= j) {
        return Err(QgrError::NotInPhiR(i, j, r));
    }
    Ok(root_vector_unchecked(side, i, j, conv))
}

fn root_vector_unchecked(side: RootSide, i: usize, j: usize, conv: RootConvention) -> UElement {
    let (ce, cf) = match conv {
        RootConvention::Standard => (RatFunc::q_pow(-1), RatFunc::q()),
        RootConvention::Alternate => (RatFunc::q(), RatFunc::q_pow(-1)),
    };
    match side {
        RootSide::E => {
            let mut x = UElement::gen(Gen::e(i));
            for t in i + 1..=j {
                let g = UElement::gen(Gen::e(t));
                x = x.mul(&g).sub(&g.mul(&x).scale(&ce));
            }
            x
        }
        RootSide::F => {
            let mut x = UElement::gen(Gen::f(i));
            for t in i + 1..=j {
                let g = UElement::gen(Gen::f(t));
                x = g.mul(&x).sub(&x.mul(&g).scale(&cf));
            }
            x
        }
    }
}

/// A PBW letter: a root vector on one side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub side: RootSide,
    pub i: usize,
    pub j: usize,
}

impl Letter {
    pub fn weight(&self, n: usize) -> Vec<i64> {
        let s = if self.side == RootSide::E { 1 } else { -1 };
        (1..n).map(|k| if self.i <= k && k <= self.j { s } else { 0 }).collect()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == RootSide::E { "E" } else { "F" };
        write!(f, "{s}[{},{}]", self.i, self.j)
    }
}

/// PBW letters in their fixed order: all F root vectors, then all E root
/// vectors, each in the order of [`phi_r`].
pub fn pbw_letters(n: usize, r: usize) -> Vec<Letter> {
    let roots = phi_r(n, r);
    let mut out: Vec<Letter> = roots.iter().map(|&(i, j)| Letter { side: RootSide::F, i, j }).collect();
    out.extend(roots.iter().map(|&(i, j)| Letter { side: RootSide::E, i, j }));
    out
}

/// Ordered monomial `prod F_beta^{n_beta} prod E_beta^{m_beta}`, stored as a
/// nondecreasing list of indices into [`pbw_letters`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PbwMonomial {
    pub letters: Vec<usize>,
}

impl PbwMonomial {
    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    /// Exponent vectors (F side, E side) over the roots of [`phi_r`].
    pub fn exponents(&self, n: usize, r: usize) -> (Vec<u32>, Vec<u32>) {
        let m = phi_r(n, r).len();
        let mut f = vec![0; m];
        let mut e = vec![0; m];
        for &t in &self.letters {
            if t < m {
                f[t] += 1;
            } else {
                e[t - m] += 1;
            }
        }
        (f, e)
    }

    pub fn weight(&self, letters: &[Letter], n: usize) -> Vec<i64> {
        let mut w = vec![0; n - 1];
        for &t in &self.letters {
            for (a, b) in w.iter_mut().zip(letters[t].weight(n)) {
                *a += b;
            }
        }
        w
    }

    pub fn to_uelement(&self, letters: &[Letter], conv: RootConvention) -> UElement {
        let mut x = UElement::one();
        for &t in &self.letters {
            let l = letters[t];
            x = x.mul(&root_vector_unchecked(l.side, l.i, l.j, conv));
        }
        x
    }

    pub fn label(&self, letters: &[Letter]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut k = 0;
        while k < self.letters.len() {
            let t = self.letters[k];
            let mut e = 0;
            while k < self.letters.len() && self.letters[k] == t {
                e += 1;
                k += 1;
            }
            parts.push(if e == 1 { letters[t].to_string() } else { format!("{}^{e}", letters[t]) });
        }
        parts.join("*")
    }
}

/// All PBW monomials of degree at most `max_deg`, ordered by degree and then
/// lexicographically in the letter indices.
pub fn pbw_monomials(n: usize, r: usize, max_deg: usize) -> Vec<PbwMonomial> {
    let nl = 2 * phi_r(n, r).len();
    let mut out = vec![PbwMonomial { letters: Vec::new() }];
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for t in start..nl {
                let mut w = m.clone();
                w.push(t);
                next.push(w);
            }
        }
        out.extend(next.iter().map(|l| PbwMonomial { letters: l.clone() }));
        layer = next;
    }
    out
}

/// `sum_{l <= k} C(2r(N-r) + l - 1, l)`, the predicted dimension of the
/// degree-k truncation of U/K⁺U.
pub fn pbw_count(n: usize, r: usize, k: usize) -> usize {
    let d = 2 * r * (n - r);
    (0..=k).map(|l| binomial(d + l - 1, l)).sum()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return if k == 0 { 1 } else { 0 };
    }
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc as usize
}

/// Parse a product such as `E1*E2*Kinv1` or `F[1,3]*E[2,2]` into an element.
/// Bracketed symbols are root vectors and need `r` for validation.
pub fn parse_uelement(s: &str, n: usize, r: usize, conv: RootConvention) -> Result<UElement, QgrError> {
    let mut acc = UElement::one();
    let s = s.trim();
    if s == "1" {
        return Ok(acc);
    }
    for tok in s.split('*') {
        let tok = tok.trim();
        let factor = if let Some(rest) = tok.strip_suffix(']') {
            let (head, args) = rest.split_once('[').ok_or_else(|| QgrError::Parse(format!("bad root vector {tok}")))?;
            let (a, b) = args.split_once(',').ok_or_else(|| QgrError::Parse(format!("bad root vector {tok}")))?;
            let i: usize = a.trim().parse().map_err(|_| QgrError::Parse(tok.to_string()))?;
            let j: usize = b.trim().parse().map_err(|_| QgrError::Parse(tok.to_string()))?;
            let side = match head {
                "E" => RootSide::E,
                "F" => RootSide::F,
                _ => return Err(QgrError::Parse(format!("bad root vector {tok}"))),
            };
            if j >= n {
                return Err(QgrError::IndexOutOfRange(tok.to_string()));
            }
            root_vector(side, i, j, r, conv)?
        } else {
            UElement::gen(tok.parse::<Gen>().and_then(|g| Gen::new(g.kind, g.index, n))?)
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

impl FromStr for Gen {
    type Err = QgrError;
    fn from_str(s: &str) -> Result<Gen, QgrError> {
        let (kind, rest) = if let Some(x) = s.strip_prefix("Kinv") {
            (GenKind::Kinv, x)
        } else if let Some(x) = s.strip_prefix('K') {
            (GenKind::K, x)
        } else if let Some(x) = s.strip_prefix('E') {
            (GenKind::E, x)
        } else if let Some(x) = s.strip_prefix('F') {
            (GenKind::F, x)
        } else {
            return Err(QgrError::Parse(format!("unknown generator {s}")));
        };
        let index = rest.parse().map_err(|_| QgrError::Parse(format!("bad generator index in {s}")))?;
        Ok(Gen { kind, index })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_mul;
    use crate::qfield::rf;

    fn diag(entries: &[&str]) -> Matrix {
        let n = entries.len();
        (0..n).map(|i| (0..n).map(|j| if i == j { rf(entries[i]) } else { RatFunc::zero() }).collect()).collect()
    }

    fn msub(a: &Matrix, b: &Matrix) -> Matrix {
        a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
    }

    fn mscale(a: &Matrix, c: &RatFunc) -> Matrix {
        a.iter().map(|x| x.iter().map(|u| u * c).collect()).collect()
    }

    #[test]
    fn fundamental_matrices_n2() {
        assert_eq!(fundamental_matrix(Gen::k(1), 2), diag(&["1/q", "q"]));
        let e = fundamental_matrix(Gen::e(1), 2);
        assert!(e[1][0].is_one() && e[0][1].is_zero() && e[0][0].is_zero());
        let f = fundamental_matrix(Gen::f(1), 2);
        let comm = msub(&mat_mul(&e, &f), &mat_mul(&f, &e));
        let kk = msub(&fundamental_matrix(Gen::k(1), 2), &fundamental_matrix(Gen::kinv(1), 2));
        assert_eq!(comm, mscale(&kk, &RatFunc::qhat().inv().unwrap()));
        assert_eq!(comm, diag(&["-1", "1"]));
    }

    #[test]
    fn out_of_range_generator() {
        assert!(Gen::new(GenKind::E, 3, 3).is_err());
        assert!(Gen::new(GenKind::K, 0, 3).is_err());
        assert!(parse_uelement("E4", 4, 2, RootConvention::Standard).is_err());
    }

    #[test]
    fn defining_relations_in_vector_representation() {
        for n in 2..=4 {
            let m = |g: Gen| fundamental_matrix(g, n);
            for i in 1..n {
                let kk = mat_mul(&m(Gen::k(i)), &m(Gen::kinv(i)));
                assert_eq!(kk, identity(n));
                let comm = msub(&mat_mul(&m(Gen::e(i)), &m(Gen::f(i))), &mat_mul(&m(Gen::f(i)), &m(Gen::e(i))));
                let rhs = mscale(&msub(&m(Gen::k(i)), &m(Gen::kinv(i))), &RatFunc::qhat().inv().unwrap());
                assert_eq!(comm, rhs);
                for j in 1..n {
                    let a = if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    // K_i E_j K_i^{-1} = q^{a_ij} E_j
                    let conj = mat_mul(&mat_mul(&m(Gen::k(i)), &m(Gen::e(j))), &m(Gen::kinv(i)));
                    assert_eq!(conj, mscale(&m(Gen::e(j)), &RatFunc::q_pow(a)));
                    let conj = mat_mul(&mat_mul(&m(Gen::k(i)), &m(Gen::f(j))), &m(Gen::kinv(i)));
                    assert_eq!(conj, mscale(&m(Gen::f(j)), &RatFunc::q_pow(-a)));
                    if i != j {
                        let c = msub(&mat_mul(&m(Gen::e(i)), &m(Gen::f(j))), &mat_mul(&m(Gen::f(j)), &m(Gen::e(i))));
                        assert!(c.iter().flatten().all(|x| x.is_zero()));
                    }
                    if i.abs_diff(j) == 1 {
                        // E_i^2 E_j - [2] E_i E_j E_i + E_j E_i^2 = 0
                        let two = &RatFunc::q() + &RatFunc::q_pow(-1);
                        for side in [GenKind::E, GenKind::F] {
                            let x = m(Gen { kind: side, index: i });
                            let y = m(Gen { kind: side, index: j });
                            let xx = mat_mul(&x, &x);
                            let s = msub(
                                &msub(&mat_mul(&xx, &y), &mscale(&mat_mul(&mat_mul(&x, &y), &x), &two)),
                                &mscale(&mat_mul(&y, &xx), &RatFunc::from_int(-1)),
                            );
                            assert!(s.iter().flatten().all(|v| v.is_zero()));
                        }
                    } else if i != j {
                        let x = m(Gen::e(i));
                        let y = m(Gen::e(j));
                        assert_eq!(mat_mul(&x, &y), mat_mul(&y, &x));
                    }
                }
            }
        }
    }

    #[test]
    fn coproduct_examples() {
        let k3 = UElement::gen(Gen::k(2)).coproduct(3);
        assert_eq!(k3.len(), 1);
        assert_eq!(k3.terms().keys().next().unwrap(), &vec![vec![Gen::k(2)]; 3]);
        let e2 = UElement::gen(Gen::e(1)).coproduct(2);
        let mut expect = Tensor::zero(2);
        expect.add_term(vec![vec![Gen::e(1)], vec![Gen::k(1)]], &RatFunc::one());
        expect.add_term(vec![vec![], vec![Gen::e(1)]], &RatFunc::one());
        assert_eq!(e2, expect);
        let ef = UElement::from_word(vec![Gen::e(1), Gen::f(1)]).coproduct(2);
        assert_eq!(ef.len(), 4);
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(UElement::gen(Gen::k(1)).antipode(), UElement::gen(Gen::kinv(1)));
        let s = UElement::gen(Gen::e(2)).antipode();
        assert_eq!(s, UElement::from_word(vec![Gen::e(2), Gen::kinv(2)]).scale(&RatFunc::from_int(-1)));
        let s = UElement::from_word(vec![Gen::e(1), Gen::f(2)]).antipode();
        assert_eq!(s, UElement::from_word(vec![Gen::k(2), Gen::f(2), Gen::e(1), Gen::kinv(1)]));
        assert_eq!(UElement::one().antipode(), UElement::one());
    }

    #[test]
    fn kk_inverse_cancels() {
        let x = UElement::from_word(vec![Gen::e(1), Gen::k(2), Gen::kinv(2), Gen::f(1)]);
        assert_eq!(x, UElement::from_word(vec![Gen::e(1), Gen::f(1)]));
        let y = UElement::gen(Gen::kinv(1)).mul(&UElement::gen(Gen::k(1)));
        assert_eq!(y, UElement::one());
    }

    #[test]
    fn root_vector_examples() {
        let c = RootConvention::Standard;
        assert_eq!(root_vector(RootSide::E, 2, 2, 2, c).unwrap(), UElement::gen(Gen::e(2)));
        let e = root_vector(RootSide::E, 2, 3, 2, c).unwrap();
        let expect = UElement::from_word(vec![Gen::e(2), Gen::e(3)])
            .sub(&UElement::from_word(vec![Gen::e(3), Gen::e(2)]).scale(&RatFunc::q_pow(-1)));
        assert_eq!(e, expect);
        assert!(root_vector(RootSide::E, 3, 3, 2, c).is_err());
        let f = root_vector(RootSide::F, 1, 3, 1, c).unwrap();
        assert_eq!(f.weight(4), Some(vec![-1, -1, -1]));
        assert_eq!(f.terms().len(), 4);
    }

    #[test]
    fn weights() {
        assert_eq!(UElement::gen(Gen::e(2)).weight(4), Some(vec![0, 1, 0]));
        let x = root_vector(RootSide::E, 1, 3, 2, RootConvention::Alternate).unwrap();
        assert_eq!(x.weight(4), Some(vec![1, 1, 1]));
        let mixed = UElement::gen(Gen::e(1)).add(&UElement::gen(Gen::f(1)));
        assert_eq!(mixed.weight(2), None);
    }

    #[test]
    fn pbw_enumeration() {
        let m = pbw_monomials(2, 1, 2);
        let letters = pbw_letters(2, 1);
        let labels: Vec<String> = m.iter().map(|x| x.label(&letters)).collect();
        assert_eq!(labels, ["1", "F[1,1]", "E[1,1]", "F[1,1]^2", "F[1,1]*E[1,1]", "E[1,1]^2"]);
        assert_eq!(pbw_monomials(2, 1, 0).len(), 1);
        assert_eq!(pbw_monomials(4, 2, 1).len(), 9);
        for (n, r) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            for k in 0..=3 {
                assert_eq!(pbw_monomials(n, r, k).len(), pbw_count(n, r, k));
            }
        }
        assert_eq!(pbw_count(4, 2, 2), 45);
    }

    #[test]
    fn parse_words() {
        let x = parse_uelement("E1*E2*Kinv1", 3, 1, RootConvention::Standard).unwrap();
        assert_eq!(x, UElement::from_word(vec![Gen::e(1), Gen::e(2), Gen::kinv(1)]));
        let y = parse_uelement("F[1,2]", 3, 1, RootConvention::Standard).unwrap();
        assert_eq!(y, root_vector(RootSide::F, 1, 2, 1, RootConvention::Standard).unwrap());
        assert_eq!(Gen::kinv(3).to_string(), "Kinv3");
    }
}
