//! Dense exact-rational matrices: Bareiss fraction-free rank and
//! determinant, exact inversion, a modular rank pre-check, and the
//! row/column split behind the Laplace-expansion argument.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("prime {0} divides a denominator")]
    BadPrime(u64),
    #[error("internal: {0}")]
    Internal(String),
}

/// Row-major dense matrix over arbitrary-precision rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        ExactMatrix::from_fn(r, c, |i, j| rat_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        ExactMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows);
        ExactMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for t in 0..self.cols {
                let a = self.get(i, t);
                if !a.is_zero() {
                    acc += a * other.get(t, j);
                }
            }
            acc
        })
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        ExactMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Clears denominators row by row; returns the integer matrix together
    /// with the per-row scale factors.
    fn to_row_scaled_int(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut out = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                let d = self.get(i, j).denom();
                lcm = num_integer::lcm(lcm, d.clone());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|j| {
                    let e = self.get(i, j);
                    e.numer() * (&lcm / e.denom())
                })
                .collect();
            out.push(row);
            scales.push(lcm);
        }
        (out, scales)
    }
}

/// Bareiss fraction-free elimination on an integer matrix. Pivot choice is
/// the first nonzero entry in column order. Returns the rank, and for a
/// square full-rank input the determinant (sign already accounting for row
/// swaps).
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (usize, Option<BigInt>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot_row = (rank..rows).find(|&i| !m[i][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        if pr != rank {
            m.swap(pr, rank);
            sign = -sign;
        }
        for i in (rank + 1)..rows {
            for j in (col + 1)..cols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = num / &prev; // exact division by the Bareiss identity
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    let det = if rows == cols && rank == rows {
        let d = if rows == 0 { BigInt::one() } else { prev };
        Some(if sign < 0 { -d } else { d })
    } else {
        None
    };
    (rank, det)
}

/// Exact rank via fraction-free elimination.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    let (int, _) = m.to_row_scaled_int();
    bareiss(int).0
}

/// Exact determinant of a square matrix.
pub fn det_exact(m: &ExactMatrix) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.rows() == 0 {
        return Rational::one();
    }
    let (int, scales) = m.to_row_scaled_int();
    match bareiss(int) {
        (_, Some(det)) => {
            let mut denom = BigInt::one();
            for s in scales {
                denom *= s;
            }
            Rational::new(det, denom)
        }
        _ => Rational::zero(),
    }
}

/// Exact inverse via Gauss-Jordan elimination.
pub fn invert_exact(m: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = ExactMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a.get(i, col).is_zero());
        let Some(pr) = pivot else {
            return Err(LinalgError::Singular);
        };
        if pr != col {
            for j in 0..n {
                let tmp = a.get(pr, j).clone();
                a.set(pr, j, a.get(col, j).clone());
                a.set(col, j, tmp);
                let tmp = inv.get(pr, j).clone();
                inv.set(pr, j, inv.get(col, j).clone());
                inv.set(col, j, tmp);
            }
        }
        let p = a.get(col, col).clone();
        for j in 0..n {
            a.set(col, j, a.get(col, j) / &p);
            inv.set(col, j, inv.get(col, j) / &p);
        }
        for i in 0..n {
            if i == col || a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col).clone();
            for j in 0..n {
                let av = a.get(i, j) - &factor * a.get(col, j);
                a.set(i, j, av);
                let iv = inv.get(i, j) - &factor * inv.get(col, j);
                inv.set(i, j, iv);
            }
        }
    }
    Ok(inv)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Reduces a rational matrix mod `p`. Fails if a denominator vanishes mod p.
fn reduce_mod(m: &ExactMatrix, p: u64) -> Result<Vec<u64>, LinalgError> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            let den = bigint_mod(e.denom(), p);
            if den == 0 {
                return Err(LinalgError::BadPrime(p));
            }
            let num = bigint_mod(e.numer(), p);
            // p is prime, so Fermat inversion applies.
            out.push(mulmod(num, powmod(den, p - 2, p), p));
        }
    }
    Ok(out)
}

fn rank_mod_flat(data: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&i| data[i * cols + col] % p != 0);
        let Some(pr) = pivot else { continue };
        if pr != rank {
            for j in 0..cols {
                data.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = powmod(data[rank * cols + col], p - 2, p);
        for i in (rank + 1)..rows {
            let f = mulmod(data[i * cols + col], inv, p);
            if f == 0 {
                continue;
            }
            for j in col..cols {
                let sub = mulmod(f, data[rank * cols + j], p);
                let cell = &mut data[i * cols + j];
                *cell = (*cell + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of `m` reduced mod a machine-word prime. A fast pre-check only:
/// the result never exceeds `rank_exact(m)` and may fall below it.
pub fn rank_modular(m: &ExactMatrix, p: u64) -> Result<usize, LinalgError> {
    assert!(p < 1 << 62, "prime must fit comfortably in a machine word");
    let mut data = reduce_mod(m, p)?;
    Ok(rank_mod_flat(&mut data, m.rows(), m.cols(), p))
}

pub const SPLIT_PRIME: u64 = (1 << 61) - 1;

/// Abstract independence oracle over a ground set of indices.
pub(crate) trait MatroidOracle {
    fn is_independent(&self, set: &[usize]) -> bool;
}

/// Linear matroid on the rows of an integer matrix reduced mod p.
struct ModRowMatroid {
    data: Vec<u64>,
    cols: usize,
    p: u64,
}

impl ModRowMatroid {
    fn from_rows(m: &ExactMatrix, p: u64) -> Result<Self, LinalgError> {
        Ok(ModRowMatroid {
            data: reduce_mod(m, p)?,
            cols: m.cols(),
            p,
        })
    }
}

impl MatroidOracle for ModRowMatroid {
    fn is_independent(&self, set: &[usize]) -> bool {
        let mut sub: Vec<u64> = Vec::with_capacity(set.len() * self.cols);
        for &r in set {
            sub.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        rank_mod_flat(&mut sub, set.len(), self.cols, self.p) == set.len()
    }
}

/// Linear matroid on the rows of a rational matrix, exact arithmetic.
struct ExactRowMatroid<'a> {
    m: &'a ExactMatrix,
}

impl MatroidOracle for ExactRowMatroid<'_> {
    fn is_independent(&self, set: &[usize]) -> bool {
        let all_cols: Vec<usize> = (0..self.m.cols()).collect();
        rank_exact(&self.m.submatrix(set, &all_cols)) == set.len()
    }
}

/// Maximum common independent set of two matroids on ground set `0..n` via
/// shortest augmenting paths. Deterministic: greedy ascending-index start,
/// BFS in ascending index order.
pub(crate) fn matroid_intersection(n: usize, target: usize, m1: &dyn MatroidOracle, m2: &dyn MatroidOracle) -> Option<Vec<usize>> {
    let mut current: Vec<usize> = Vec::new();
    // Greedy common independent start.
    for x in 0..n {
        let mut cand = current.clone();
        cand.push(x);
        cand.sort_unstable();
        if m1.is_independent(&cand) && m2.is_independent(&cand) {
            current = cand;
        }
        if current.len() == target {
            return Some(current);
        }
    }
    while current.len() < target {
        let in_set: Vec<bool> = {
            let mut v = vec![false; n];
            for &x in &current {
                v[x] = true;
            }
            v
        };
        let with_swap = |y: usize, x: usize| -> Vec<usize> {
            let mut s: Vec<usize> = current.iter().copied().filter(|&z| z != y).collect();
            s.push(x);
            s.sort_unstable();
            s
        };
        let with_add = |x: usize| -> Vec<usize> {
            let mut s = current.clone();
            s.push(x);
            s.sort_unstable();
            s
        };
        // BFS from sources (addable in M1) to sinks (addable in M2).
        let mut prev: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for x in 0..n {
            if !in_set[x] && m1.is_independent(&with_add(x)) {
                seen[x] = true;
                queue.push_back(x);
            }
        }
        let mut reached_sink = None;
        'bfs: while let Some(u) = queue.pop_front() {
            if !in_set[u] && m2.is_independent(&with_add(u)) {
                reached_sink = Some(u);
                break 'bfs;
            }
            if in_set[u] {
                // u = y in I; arcs y -> x when I - y + x is M1-independent.
                for x in 0..n {
                    if !in_set[x] && !seen[x] && m1.is_independent(&with_swap(u, x)) {
                        seen[x] = true;
                        prev[x] = Some(u);
                        queue.push_back(x);
                    }
                }
            } else {
                // u = x not in I; arcs x -> y when I - y + x is M2-independent.
                for &y in &current {
                    if !seen[y] && m2.is_independent(&with_swap(y, u)) {
                        seen[y] = true;
                        prev[y] = Some(u);
                        queue.push_back(y);
                    }
                }
            }
        }
        let Some(sink) = reached_sink else {
            return None;
        };
        // Walk the path back, toggling membership.
        let mut node = Some(sink);
        let mut member: Vec<bool> = in_set;
        while let Some(u) = node {
            member[u] = !member[u];
            node = prev[u];
        }
        current = (0..n).filter(|&x| member[x]).collect();
    }
    Some(current)
}

/// For an invertible square matrix `x` and a column set `c` of size k,
/// returns a row set `r` of size k such that `x[r, c]` and the complementary
/// submatrix `x[r', c']` are both invertible. Such a set always exists by
/// the generalized Laplace expansion of det(x) along the columns `c`.
///
/// The search runs a linear-matroid intersection between the row matroid of
/// `x[:, c]` and (via the complementary-minor identity det x[r',c'] = ±det x
/// · det x⁻¹[c, r]) the column matroid of `x⁻¹[c, :]`. Oracles run mod a
/// fixed prime for speed; the returned set is re-verified exactly and the
/// computation falls back to exact oracles when the modular image degrades.
pub fn laplace_split(x: &ExactMatrix, c: &[usize]) -> Result<Vec<usize>, LinalgError> {
    assert!(x.is_square(), "laplace_split needs a square matrix");
    let n = x.rows();
    let mut cols: Vec<usize> = c.to_vec();
    cols.sort_unstable();
    cols.dedup();
    assert_eq!(cols.len(), c.len(), "column set has duplicates");
    assert!(cols.iter().all(|&j| j < n), "column index out of range");
    let k = cols.len();
    if det_exact(x).is_zero() {
        return Err(LinalgError::Singular);
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == n {
        return Ok((0..n).collect());
    }
    let inv = invert_exact(x)?;
    let all_rows: Vec<usize> = (0..n).collect();
    let all_cols: Vec<usize> = (0..n).collect();
    let a = x.submatrix(&all_rows, &cols); // n x k
    let b_t = inv.submatrix(&cols, &all_cols); // k x n; its column matroid
    let b = ExactMatrix::from_fn(n, k, |i, j| b_t.get(j, i).clone());

    let verify = |r: &[usize]| -> bool {
        let comp_rows: Vec<usize> = (0..n).filter(|i| !r.contains(i)).collect();
        let comp_cols: Vec<usize> = (0..n).filter(|j| !cols.contains(j)).collect();
        !det_exact(&x.submatrix(r, &cols)).is_zero()
            && !det_exact(&x.submatrix(&comp_rows, &comp_cols)).is_zero()
    };

    let modular = || -> Result<Option<Vec<usize>>, LinalgError> {
        let m1 = ModRowMatroid::from_rows(&a, SPLIT_PRIME)?;
        let m2 = ModRowMatroid::from_rows(&b, SPLIT_PRIME)?;
        Ok(matroid_intersection(n, k, &m1, &m2))
    };
    if let Ok(Some(r)) = modular() {
        if verify(&r) {
            return Ok(r);
        }
    }
    // Exact oracles; guaranteed to succeed since det(x) != 0.
    let m1 = ExactRowMatroid { m: &a };
    let m2 = ExactRowMatroid { m: &b };
    match matroid_intersection(n, k, &m1, &m2) {
        Some(r) => {
            debug_assert!(verify(&r));
            Ok(r)
        }
        None => Err(LinalgError::Internal(
            "no common basis found for an invertible matrix".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(rank_exact(&ExactMatrix::identity(3)), 3);
        assert_eq!(rank_exact(&ExactMatrix::zero(4, 4)), 0);
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det_exact(&ExactMatrix::identity(5)), rat_int(1));
        let d = ExactMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(det_exact(&d), rat_int(6));
        let s = ExactMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(det_exact(&s), rat_int(0));
    }

    #[test]
    fn invert_upper_triangular() {
        let m = ExactMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        let inv = invert_exact(&m).unwrap();
        assert_eq!(inv, ExactMatrix::from_i64_rows(&[vec![1, -1], vec![0, 1]]));
        assert_eq!(inv.mul(&m), ExactMatrix::identity(2));
    }

    #[test]
    fn invert_singular_errors() {
        let s = ExactMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(invert_exact(&s), Err(LinalgError::Singular));
    }

    #[test]
    fn rank_modular_examples() {
        assert_eq!(rank_modular(&ExactMatrix::identity(3), 101), Ok(3));
        let d = ExactMatrix::from_i64_rows(&[vec![101, 0], vec![0, 1]]);
        assert_eq!(rank_modular(&d, 101), Ok(1));
        assert_eq!(rank_exact(&d), 2);
        let bad = ExactMatrix::from_fn(1, 1, |_, _| Rational::new(BigInt::from(1), BigInt::from(101)));
        assert_eq!(rank_modular(&bad, 101), Err(LinalgError::BadPrime(101)));
    }

    #[test]
    fn rank_modular_never_exceeds_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = ExactMatrix::from_fn(4, 5, |_, _| rat_int(rng.gen_range(-3..=3)));
            for p in [2u64, 3, 101, SPLIT_PRIME] {
                assert!(rank_modular(&m, p).unwrap() <= rank_exact(&m));
            }
        }
    }

    #[test]
    fn bareiss_det_matches_permuted_row_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let rows: Vec<Vec<i64>> = (0..5)
                .map(|_| (0..5).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            let m = ExactMatrix::from_i64_rows(&rows);
            // Reverse the rows: an even permutation of 5 rows (two swaps).
            let rev: Vec<Vec<i64>> = rows.iter().rev().cloned().collect();
            let m_rev = ExactMatrix::from_i64_rows(&rev);
            assert_eq!(det_exact(&m), det_exact(&m_rev));
        }
    }

    fn brute_force_splits(x: &ExactMatrix, c: &[usize]) -> Vec<Vec<usize>> {
        let n = x.rows();
        let comp_cols: Vec<usize> = (0..n).filter(|j| !c.contains(j)).collect();
        (0..n)
            .combinations(c.len())
            .filter(|r| {
                let comp_rows: Vec<usize> = (0..n).filter(|i| !r.contains(i)).collect();
                !det_exact(&x.submatrix(r, c)).is_zero()
                    && !det_exact(&x.submatrix(&comp_rows, &comp_cols)).is_zero()
            })
            .collect()
    }

    #[test]
    fn laplace_split_identity() {
        let r = laplace_split(&ExactMatrix::identity(4), &[0, 1]).unwrap();
        assert_eq!(r, vec![0, 1]);
    }

    #[test]
    fn laplace_split_antidiagonal() {
        let m = ExactMatrix::from_fn(4, 4, |i, j| {
            if i + j == 3 {
                rat_int(1)
            } else {
                rat_int(0)
            }
        });
        assert_eq!(laplace_split(&m, &[0, 1]).unwrap(), vec![2, 3]);
    }

    #[test]
    fn laplace_split_singular_errors() {
        let s = ExactMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(laplace_split(&s, &[0]), Err(LinalgError::Singular));
    }

    #[test]
    fn laplace_split_random_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = loop {
            let cand = ExactMatrix::from_fn(6, 6, |_, _| rat_int(rng.gen_range(-9..=9)));
            if !det_exact(&cand).is_zero() {
                break cand;
            }
        };
        let c = [0usize, 1, 2];
        let r = laplace_split(&m, &c).unwrap();
        let valid = brute_force_splits(&m, &c);
        assert!(!valid.is_empty());
        assert!(valid.contains(&r));
    }

    #[test]
    fn laplace_split_trivial_column_sets() {
        let m = ExactMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(laplace_split(&m, &[]).unwrap(), Vec::<usize>::new());
        assert_eq!(laplace_split(&m, &[0, 1]).unwrap(), vec![0, 1]);
    }
}
