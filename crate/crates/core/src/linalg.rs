//! Dense exact linear algebra over Q(q): echelon forms, kernels, inverses,
//! and rank with a cheap specialization precheck.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qfield::{Poly, RatFunc};

pub type Vector = Vec<RatFunc>;
pub type Matrix = Vec<Vec<RatFunc>>;

pub fn zero_vec(n: usize) -> Vector {
    vec![RatFunc::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = RatFunc::one();
    v
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

pub fn is_zero_vec(v: &[RatFunc]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn dot(a: &[RatFunc], b: &[RatFunc]) -> RatFunc {
    let mut s = RatFunc::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

/// `y = M x` for a matrix stored as rows.
pub fn mat_vec(m: &Matrix, x: &[RatFunc]) -> Vector {
    m.iter().map(|row| dot(row, x)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = zero_vec(n);
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[k].iter().enumerate() {
                    if !y.is_zero() {
                        out[j] += &(x * y);
                    }
                }
            }
            out
        })
        .collect()
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Linear combination `sum c_i v_i`.
pub fn combine(coeffs: &[RatFunc], vecs: &[Vector], n: usize) -> Vector {
    let mut out = zero_vec(n);
    for (c, v) in coeffs.iter().zip(vecs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += &(c * x);
            }
        }
    }
    out
}

/// Reduced row echelon form. Returns the nonzero rows and the pivot columns.
pub fn rref(rows: &[Vector]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    let ncol = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncol {
        if rank == m.len() {
            break;
        }
        // sparsest nonzero entry as pivot keeps coefficient growth down
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(rank) {
            if !row[c].is_zero() {
                let w = row[c].weight();
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((i, w));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].inv().unwrap();
        for x in m[rank].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    m.truncate(rank);
    (m, pivots)
}

/// Rank by exact elimination over Q(q).
pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : M x = 0}` for `M` with `ncol` columns.
pub fn kernel(rows: &[Vector], ncol: usize) -> Matrix {
    let (red, piv) = rref(rows);
    let mut out = Vec::new();
    let mut is_piv = vec![false; ncol];
    for &p in &piv {
        is_piv[p] = true;
    }
    for f in (0..ncol).filter(|&c| !is_piv[c]) {
        let mut v = unit_vec(ncol, f);
        for (i, &p) in piv.iter().enumerate() {
            v[p] = -&red[i][f];
        }
        out.push(v);
    }
    out
}

/// Coefficients `x` with `sum_i x_i rows[i] = target`, if they exist.
pub fn solve_in_span(rows: &[Vector], target: &[RatFunc]) -> Option<Vector> {
    let k = rows.len();
    // columns: the given rows, then -target
    let sys: Matrix = (0..target.len())
        .map(|c| {
            let mut r: Vector = rows.iter().map(|row| row[c].clone()).collect();
            r.push(-&target[c]);
            r
        })
        .collect();
    if sys.is_empty() {
        return Some(zero_vec(k));
    }
    let (red, piv) = rref(&sys);
    if piv.contains(&k) {
        return None;
    }
    let mut x = zero_vec(k);
    for (i, &p) in piv.iter().enumerate() {
        x[p] = -&red[i][k];
    }
    Some(x)
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(unit_vec(n, i));
            row
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A subspace kept in reduced echelon form, so membership and equality are
/// cheap and canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub dim_ambient: usize,
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { dim_ambient: n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(n: usize, vecs: &[Vector]) -> Self {
        let (rows, pivots) = rref(vecs);
        Subspace { dim_ambient: n, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` modulo the subspace (remainder has zeros at pivot columns).
    pub fn reduce(&self, v: &[RatFunc]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn add_vectors(&self, vecs: &[Vector]) -> Subspace {
        let mut all = self.rows.clone();
        all.extend(vecs.iter().cloned());
        Subspace::span(self.dim_ambient, &all)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Linear functionals (as vectors) vanishing on the subspace.
    pub fn annihilator(&self) -> Matrix {
        kernel(&self.rows, self.dim_ambient)
    }
}

/// Rank of `m` after substituting `q = q0`; exact over Q.
pub fn rank_at(m: &[Vector], q0: &BigRational) -> Option<usize> {
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m.len());
    for r in m {
        let mut row = Vec::with_capacity(r.len());
        for x in r {
            row.push(x.evaluate_at(q0).ok()?);
        }
        rows.push(row);
    }
    Some(rational_rank(rows))
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncol = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncol {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = BigRational::one() / rows[rank][c].clone();
        let prow: Vec<BigRational> = rows[rank].iter().map(|x| x * &inv).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        rows[rank] = prow;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Lower bound on the rank of `m` over Q(q), from evaluation at a seeded
/// random rational point that avoids the poles of every entry.
pub fn rank_precheck(m: &[Vector], seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let num: i64 = rng.gen_range(2..1000);
        let den: i64 = rng.gen_range(1..100);
        let q0 = BigRational::new(BigInt::from(num), BigInt::from(den));
        if let Some(r) = rank_at(m, &q0) {
            return r;
        }
    }
    0
}

/// Rank over Z[q] by fraction-free (Bareiss) elimination after clearing
/// denominators row by row.
pub fn fraction_free_rank(m: &[Vector]) -> usize {
    let mut rows: Vec<Vec<Poly>> = m
        .iter()
        .map(|r| {
            let mut l = Poly::one();
            for x in r {
                if !x.denom().is_one() {
                    let g = l.gcd(x.denom());
                    l = &l * &x.denom().div_exact(&g);
                }
            }
            r.iter().map(|x| if x.is_zero() { Poly::zero() } else { x.numerator_over(&l) }).collect()
        })
        .collect();
    let ncol = rows.first().map_or(0, |r| r.len());
    let mut prev = Poly::one();
    let mut rank = 0;
    for c in 0..ncol {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank][c].clone();
        let prow = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[c].clone();
            for j in 0..ncol {
                let v = &(&piv * &row[j]) - &(&f * &prow[j]);
                row[j] = if v.is_zero() { v } else { v.div_exact(&prev) };
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Exact rank: the precheck certifies full rank directly; otherwise the
/// fraction-free elimination decides.
pub fn exact_rank(m: &[Vector], seed: u64) -> usize {
    let full = m.len().min(m.first().map_or(0, |r| r.len()));
    let pre = rank_precheck(m, seed);
    if pre == full {
        return pre;
    }
    fraction_free_rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rf;

    fn mat(rows: &[&[&str]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect()
    }

    #[test]
    fn identity_rank() {
        let m = identity(3);
        assert_eq!(rank(&m), 3);
        assert_eq!(rank_precheck(&m, 1), 3);
        assert_eq!(exact_rank(&m, 1), 3);
    }

    #[test]
    fn precheck_is_only_a_lower_bound() {
        let m = mat(&[&["q-q^-1"]]);
        assert_eq!(rank_at(&m, &BigRational::one()), Some(0));
        assert_eq!(fraction_free_rank(&m), 1);
        assert_eq!(exact_rank(&m, 7), 1);
    }

    #[test]
    fn dependent_rows() {
        let m = mat(&[&["1", "q", "q^2"], &["q", "q^2", "q^3"], &["1/q", "1", "q+1"]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(fraction_free_rank(&m), 2);
        assert_eq!(exact_rank(&m, 3), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            assert!(dot(row, &k[0]).is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(&[&["q", "1"], &["1", "1/(q+1)"]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(inverse(&mat(&[&["1", "q"], &["q^-1", "1"]])).is_none());
    }

    #[test]
    fn subspace_membership() {
        let s = Subspace::span(3, &mat(&[&["1", "q", "0"], &["0", "1", "1"]]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&mat(&[&["2", "2*q+1", "1"]])[0]));
        assert!(!s.contains(&unit_vec(3, 2)));
        let ann = s.annihilator();
        assert_eq!(ann.len(), 1);
        for r in &s.rows {
            assert!(dot(r, &ann[0]).is_zero());
        }
    }

    #[test]
    fn solve_in_span_examples() {
        let q = RatFunc::q();
        let rows = vec![vec![RatFunc::one(), RatFunc::zero()], vec![q.clone(), RatFunc::one()]];
        let t = vec![&q + &RatFunc::one(), RatFunc::from_int(2)];
        let x = solve_in_span(&rows, &t).unwrap();
        assert_eq!(combine(&x, &rows, 2), t);
        assert!(solve_in_span(&rows[..1], &[RatFunc::one(), RatFunc::one()]).is_none());
    }
}
