//! Sparse linear combinations over Q(q) with an ordered key type.

use std::collections::BTreeMap;

use crate::qfield::RatFunc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Comb<K: Ord + Clone> {
    terms: BTreeMap<K, RatFunc>,
}

impl<K: Ord + Clone> Default for Comb<K> {
    fn default() -> Self {
        Comb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Comb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: RatFunc) -> Self {
        let mut out = Self::zero();
        out.add_term(k, &c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<K, RatFunc> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<K, RatFunc> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> RatFunc {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: K, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Comb<K>, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &Comb<K>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::one());
        out
    }

    pub fn minus(&self, other: &Comb<K>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::from_int(-1));
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &RatFunc)> {
        self.terms.iter()
    }
}

impl<K: Ord + Clone> FromIterator<(K, RatFunc)> for Comb<K> {
    fn from_iter<I: IntoIterator<Item = (K, RatFunc)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, &c);
        }
        out
    }
}
