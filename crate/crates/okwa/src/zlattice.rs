//! Integer matrices, the column Hermite normal form, and exact rational
//! linear algebra.
//!
//! The HNF here is the column form: for an `n×m` integer matrix `A` there is a
//! unimodular `U` with `A·U = [0 | H]`, where `H` has no zero column and a
//! strictly increasing pivot map `f` from columns to rows such that
//! `h[i][j] = 0` for `i > f(j)`, `h[f(j)][j] ≥ 1`, and
//! `0 ≤ h[f(i)][j] < h[f(i)][i]` for `i < j`. `H` is the canonical basis of
//! the column lattice of `A`.
//!
//! The elimination is a Kannan–Bachem style sweep: pivots are produced row by
//! row with gcd-driven column combinations, and already-placed pivot rows are
//! re-reduced after every new pivot so entries stay small. Output is unique
//! for a given lattice, so remixing generators never changes the result.
//!
//! ```
//! use okwa::zlattice::{hnf, lattice_index, IntMatrix};
//!
//! // Z-generators of the ideal (3, 2−i√5) over the basis {1, i√5}.
//! let a = IntMatrix::from_i64_rows(&[&[3, 0, 2, 5], &[0, 3, -1, 2]]);
//! let h = hnf(&a, false);
//! assert_eq!(h.h, IntMatrix::from_i64_rows(&[&[3, 1], &[0, 1]]));
//! assert_eq!(lattice_index(&a).unwrap(), 3.into());
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix does not have full rank")]
    NotFullRank,
    #[error("linear system has no solution")]
    NoSolution,
}

/// Dense integer matrix, row major, arbitrary precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds a matrix out of column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        IntMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn vcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self[(i, j)].clone() } else { other[(i - self.rows, j)].clone() }
        })
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &other[(k, j)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Gcd of all entries; zero for the zero matrix.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for e in &self.entries {
            g = g.gcd(e);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_exact(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (q, r) = self[(i, j)].div_rem(c);
            debug_assert!(r.is_zero());
            q
        })
    }

    pub fn to_rational(&self) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| BigRational::from_integer(self[(i, j)].clone()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut sign = 1i8;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(i, j)].clone();
                            m[(k, j)] = b;
                            m[(i, j)] = a;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    m[(i, j)] = q;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 { -d } else { d }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Result of a column HNF computation: `a · transform = [0 | h]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    /// The nonzero block `H`.
    pub h: IntMatrix,
    /// `pivot_map[j]` is the pivot row of column `j` of `h`; strictly increasing.
    pub pivot_map: Vec<usize>,
    /// Unimodular column transform, present when requested.
    pub transform: Option<IntMatrix>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.h.cols
    }
}

/// Column Hermite normal form of `a`.
///
/// Pivots sit at the bottom of their columns, so the elimination sweeps rows
/// from the last to the first, peeling off one pivot column per nonzero row.
pub fn hnf(a: &IntMatrix, want_transform: bool) -> HnfResult {
    let n = a.rows;
    let m = a.cols;
    // Work on column vectors; `u` mirrors every column operation.
    let mut cols: Vec<Vec<BigInt>> = a.columns();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|j| {
            let mut e = vec![BigInt::zero(); m];
            if want_transform {
                e[j] = BigInt::one();
            }
            e
        })
        .collect();

    // Placed pivot columns, deepest pivot first; paired with their pivot rows.
    let mut placed: Vec<(Vec<BigInt>, Vec<BigInt>, usize)> = Vec::new();
    let mut active = m;
    for row in (0..n).rev() {
        // Accumulate the gcd of row entries into one active column, zeroing
        // the others by pairwise extended-gcd combinations.
        let mut pivot_col: Option<usize> = None;
        for j in 0..active {
            if cols[j][row].is_zero() {
                continue;
            }
            match pivot_col {
                None => pivot_col = Some(j),
                Some(p) => {
                    let (g, x, y) = ext_gcd(&cols[p][row], &cols[j][row]);
                    let ca = cols[p][row].clone() / &g;
                    let cb = cols[j][row].clone() / &g;
                    // new p = x·p + y·j (entry g), new j = ca·j − cb·p (entry 0)
                    combine(&mut cols, p, j, &x, &y, &ca, &cb);
                    if want_transform {
                        combine(&mut u, p, j, &x, &y, &ca, &cb);
                    }
                }
            }
        }
        let Some(p) = pivot_col else { continue };
        active -= 1;
        cols.swap(p, active);
        u.swap(p, active);
        let mut col = cols[active].clone();
        let mut ucol = u[active].clone();
        if col[row].is_negative() {
            negate(&mut col);
            negate(&mut ucol);
        }
        // Keep already-placed (deeper) columns reduced at the new pivot row.
        for (dc, du, _) in placed.iter_mut() {
            let q = dc[row].div_floor(&col[row]);
            if !q.is_zero() {
                for (t, s) in dc.iter_mut().zip(col.iter()) {
                    *t -= &q * s;
                }
                for (t, s) in du.iter_mut().zip(ucol.iter()) {
                    *t -= &q * s;
                }
            }
        }
        placed.push((col, ucol, row));
    }

    placed.reverse(); // pivot rows now strictly increasing
    let pivots: Vec<usize> = placed.iter().map(|(_, _, r)| *r).collect();
    let h = IntMatrix::from_fn(n, placed.len(), |i, j| placed[j].0[i].clone());
    let transform = want_transform.then(|| {
        // A·U = [0 | H]: the spent active columns (now zero) come first.
        IntMatrix::from_fn(m, m, |i, j| {
            if j < active {
                u[j][i].clone()
            } else {
                placed[j - active].1[i].clone()
            }
        })
    });
    HnfResult { h, pivot_map: pivots, transform }
}

/// Applies the 2×2 unimodular combination to columns `p` and `j`:
/// `(p, j) ← (x·p + y·j, −cb·p + ca·j)`.
fn combine(cols: &mut [Vec<BigInt>], p: usize, j: usize, x: &BigInt, y: &BigInt, ca: &BigInt, cb: &BigInt) {
    let cp = cols[p].clone();
    let cj = cols[j].clone();
    for k in 0..cp.len() {
        cols[p][k] = x * &cp[k] + y * &cj[k];
        cols[j][k] = ca * &cj[k] - cb * &cp[k];
    }
}

fn negate(col: &mut [BigInt]) {
    for e in col.iter_mut() {
        *e = -std::mem::take(e);
    }
}

/// Extended gcd: returns `(g, x, y)` with `g = gcd(a,b) ≥ 0` and `ax + by = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Membership of `v` in the column lattice described by an HNF.
pub fn lattice_contains(h: &HnfResult, v: &[BigInt]) -> Result<bool, LatticeError> {
    if v.len() != h.h.rows {
        return Err(LatticeError::DimensionMismatch { expected: h.h.rows, got: v.len() });
    }
    Ok(lattice_coordinates(h, v).is_some())
}

/// Expresses `v` over the HNF basis columns, when possible.
pub fn lattice_coordinates(h: &HnfResult, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = h.h.cols;
    let mut v = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); r];
    for j in (0..r).rev() {
        let row = h.pivot_map[j];
        let (q, rem) = v[row].div_rem(&h.h[(row, j)]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for i in 0..v.len() {
                v[i] -= &q * &h.h[(i, j)];
            }
        }
        coeffs[j] = q;
    }
    v.iter().all(|e| e.is_zero()).then_some(coeffs)
}

/// `|Z^n / L|` for the full-rank column lattice `L` of `a`, i.e. `|det H|`.
pub fn lattice_index(a: &IntMatrix) -> Result<BigInt, LatticeError> {
    let h = hnf(a, false);
    if h.rank() != a.rows {
        return Err(LatticeError::NotFullRank);
    }
    let mut d = BigInt::one();
    for j in 0..h.h.cols {
        d *= &h.h[(h.pivot_map[j], j)];
    }
    Ok(d)
}

/// An integer solution `x` of `a·x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let h = hnf(a, true);
    let t = lattice_coordinates(&h, b)?;
    let u = h.transform.as_ref().unwrap();
    let zeros = a.cols - h.h.cols;
    let mut padded = vec![BigInt::zero(); a.cols];
    padded[zeros..].clone_from_slice(&t);
    Some(u.mul_vec(&padded))
}

/// Basis (as columns) of the integer kernel of `a`.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let h = hnf(a, true);
    let u = h.transform.unwrap();
    let zeros = a.cols - h.h.cols;
    IntMatrix::from_fn(a.cols, zeros, |i, j| u[(i, j)].clone())
}

/// Dense rational matrix with exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigRational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix { rows, cols, entries }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        QMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn hcat(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        QMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        QMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigRational::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_integer()))
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        let mut l = BigInt::one();
        for e in &self.entries {
            l = l.lcm(e.denom());
        }
        l
    }

    /// Clears denominators: returns `(d, M)` with `M = d·self` integral.
    pub fn scale_to_integer(&self) -> (BigInt, IntMatrix) {
        let d = self.common_denominator();
        let m = IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            let s = &self[(i, j)] * BigRational::from_integer(d.clone());
            debug_assert!(s.is_integer());
            s.to_integer()
        });
        (d, m)
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        if self.rows == 0 {
            return BigRational::one();
        }
        let (d, m) = self.scale_to_integer();
        let num = m.det();
        let mut den = BigInt::one();
        for _ in 0..self.rows {
            den *= &d;
        }
        BigRational::new(num, den)
    }

    /// Row-reduces a copy to reduced echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            for j in 0..m.cols {
                let a = m[(r, j)].clone();
                let b = m[(p, j)].clone();
                m[(r, j)] = b;
                m[(p, j)] = a;
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hcat(&QMatrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.cols + j]
    }
}

/// Solution of a rational linear system.
#[derive(Debug, Clone)]
pub struct RationalSolution {
    /// One solution `X` with `a·X = b`.
    pub solution: QMatrix,
    /// Rank of `a`.
    pub rank: usize,
    /// Indices of a column basis of the column space of `a`.
    pub column_basis: Vec<usize>,
}

/// Solves `a·X = b` exactly over the rationals.
pub fn solve_rational(a: &QMatrix, b: &QMatrix) -> Result<RationalSolution, LatticeError> {
    if a.rows != b.rows {
        return Err(LatticeError::DimensionMismatch { expected: a.rows, got: b.rows });
    }
    let aug = a.hcat(b);
    let (r, pivots) = aug.rref();
    let mut a_pivots = Vec::new();
    for &p in &pivots {
        if p < a.cols {
            a_pivots.push(p);
        } else {
            return Err(LatticeError::NoSolution);
        }
    }
    let mut x = QMatrix::zero(a.cols, b.cols);
    for (row, &p) in a_pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(p, j)] = r[(row, a.cols + j)].clone();
        }
    }
    Ok(RationalSolution { solution: x, rank: a_pivots.len(), column_basis: a_pivots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Brute-force membership: search small integer combinations of `gens`.
    fn member_bruteforce(gens: &[Vec<BigInt>], v: &[BigInt], bound: i64) -> bool {
        fn rec(gens: &[Vec<BigInt>], acc: &mut [BigInt], k: usize, v: &[BigInt], bound: i64) -> bool {
            if k == gens.len() {
                return acc.iter().zip(v.iter()).all(|(a, b)| a == b);
            }
            for c in -bound..=bound {
                let c = bi(c);
                for (a, g) in acc.iter_mut().zip(gens[k].iter()) {
                    *a += &c * g;
                }
                if rec(gens, acc, k + 1, v, bound) {
                    return true;
                }
                for (a, g) in acc.iter_mut().zip(gens[k].iter()) {
                    *a -= &c * g;
                }
            }
            false
        }
        let mut acc = vec![BigInt::zero(); v.len()];
        rec(gens, &mut acc, 0, v, bound)
    }

    #[test]
    fn hnf_identity() {
        let a = IntMatrix::identity(3);
        let r = hnf(&a, true);
        assert_eq!(r.h, IntMatrix::identity(3));
        assert_eq!(r.pivot_map, vec![0, 1, 2]);
        assert_eq!(r.transform.unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn hnf_zero_matrix() {
        let a = IntMatrix::zero(2, 3);
        let r = hnf(&a, false);
        assert_eq!(r.h.cols, 0);
        assert!(r.pivot_map.is_empty());
    }

    #[test]
    fn hnf_ideal_lattice() {
        // Z-generators of the ideal (3, 2−i√5) over the basis {1, ω}.
        let a = IntMatrix::from_fn(2, 4, |i, j| {
            let cols = [[3, 0], [0, 3], [2, -1], [5, 2]];
            bi(cols[j][i])
        });
        let r = hnf(&a, true);
        assert_eq!(r.h, IntMatrix::from_i64_rows(&[&[3, 1], &[0, 1]]));
        // A·U really is [0 | H].
        let u = r.transform.as_ref().unwrap();
        let prod = a.mul(u);
        assert_eq!(prod, IntMatrix::zero(2, 2).hcat(&r.h));
        assert_eq!(u.det().abs(), bi(1));
        // Index is 3, the norm computed in the worked quadratic example.
        assert_eq!(lattice_index(&a).unwrap(), bi(3));
        // Mutual membership against brute force.
        let gens = a.columns();
        for v in [[2i64, -1], [1, 1], [3, 0]] {
            let v: Vec<BigInt> = v.iter().map(|&x| bi(x)).collect();
            assert!(lattice_contains(&r, &v).unwrap());
            assert!(member_bruteforce(&gens, &v, 3));
        }
        let one = [bi(1), bi(0)];
        assert!(!lattice_contains(&r, &one).unwrap());
        assert!(!member_bruteforce(&gens, &one, 6));
    }

    #[test]
    fn hnf_idempotent_and_unique() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..4);
            let m = rng.gen_range(1..5);
            let a = IntMatrix::from_fn(n, m, |_, _| bi(rng.gen_range(-6..7)));
            let r = hnf(&a, false);
            // Idempotence.
            let again = hnf(&r.h, false);
            assert_eq!(again.h, r.h);
            // Uniqueness under a random unimodular column remix.
            let remixed = remix(&a, &mut rng);
            assert_eq!(hnf(&remixed, false).h, r.h);
            // Lattice equality in both directions.
            let rr = hnf(&remixed, false);
            for c in a.columns() {
                assert!(lattice_contains(&rr, &c).unwrap());
            }
            for c in remixed.columns() {
                assert!(lattice_contains(&r, &c).unwrap());
            }
        }
    }

    pub(super) fn remix(a: &IntMatrix, rng: &mut ChaCha8Rng) -> IntMatrix {
        let mut cols = a.columns();
        let m = cols.len();
        if m < 2 {
            return a.clone();
        }
        for _ in 0..8 {
            let i = rng.gen_range(0..m);
            let mut j = rng.gen_range(0..m);
            if i == j {
                j = (j + 1) % m;
            }
            let c = bi(rng.gen_range(-3..4));
            let src = cols[j].clone();
            for (t, s) in cols[i].iter_mut().zip(src.iter()) {
                *t += &c * s;
            }
            if rng.gen_bool(0.3) {
                cols.swap(i, j);
            }
        }
        IntMatrix::from_columns(a.rows, &cols)
    }

    #[test]
    fn index_multiplicative_on_nested_diagonals() {
        // L'' = diag(4,6) ⊆ L' = diag(2,3) ⊆ Z²: index(L'') = index(L')·|L'/L''|.
        let l1 = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let l2 = IntMatrix::from_i64_rows(&[&[4, 0], &[0, 6]]);
        let i1 = lattice_index(&l1).unwrap();
        let i2 = lattice_index(&l2).unwrap();
        assert_eq!(i2, &i1 * bi(4)); // |L'/L''| = 2·2
    }

    #[test]
    fn solve_rational_cases() {
        let id = QMatrix::identity(2);
        let b = QMatrix::from_fn(2, 1, |i, _| BigRational::from_integer(bi(i as i64 + 5)));
        let s = solve_rational(&id, &b).unwrap();
        assert_eq!(s.solution, b);

        let a = QMatrix::from_fn(2, 2, |i, j| {
            let rows = [[1, 2], [2, 4]];
            BigRational::from_integer(bi(rows[i][j]))
        });
        let b = QMatrix::from_fn(2, 1, |i, _| BigRational::from_integer(bi([1, 2][i])));
        let s = solve_rational(&a, &b).unwrap();
        assert_eq!(a.mul(&s.solution), b);
        assert_eq!(s.rank, 1);

        let a = QMatrix::from_fn(2, 1, |i, _| BigRational::from_integer(bi([1, 0][i])));
        let b = QMatrix::from_fn(2, 1, |i, _| BigRational::from_integer(bi([0, 1][i])));
        assert_eq!(solve_rational(&a, &b).unwrap_err(), LatticeError::NoSolution);
    }

    #[test]
    fn solve_integer_and_kernel() {
        let a = IntMatrix::from_i64_rows(&[&[2, 3], &[0, 1]]);
        let b = vec![bi(7), bi(1)];
        let x = solve_integer(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(solve_integer(&a, &[bi(1), bi(0)]).is_none());

        let a = IntMatrix::from_i64_rows(&[&[1, 2, 3]]);
        let k = kernel(&a);
        assert_eq!(k.cols, 2);
        for j in 0..k.cols {
            assert!(a.mul_vec(&k.column(j)).iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn bareiss_determinant() {
        let a = IntMatrix::from_i64_rows(&[&[2, -1, 0], &[3, 4, 1], &[0, 5, -2]]);
        // Cofactor check by hand: 2*(4*-2-1*5) - (-1)*(3*-2-1*0) + 0 = -26 - 6 = -32.
        assert_eq!(a.det(), bi(-32));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..5);
            let a = IntMatrix::from_fn(n, n, |_, _| bi(rng.gen_range(-5..6)));
            let b = IntMatrix::from_fn(n, n, |_, _| bi(rng.gen_range(-5..6)));
            assert_eq!(a.mul(&b).det(), a.det() * b.det());
        }
    }
}
