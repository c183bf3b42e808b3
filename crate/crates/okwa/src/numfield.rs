//! Exact arithmetic in a number field `K = Q(θ)` of degree `d`, presented by
//! a full representation of its ring of integers `O_K`: a monic integer
//! minimal polynomial `m_θ` together with an integral basis
//! `Ω = {ω_1 = 1, …, ω_d}` written over the power basis `{1, θ, …, θ^{d−1}}`.
//!
//! Elements are length-`d` vectors of arbitrary-precision rationals over `Ω`
//! (the vector representation). Multiplication goes through the
//! precomputed regular-representation matrices `M_i`, inversion solves the
//! `d×d` system `(Σ a_i M_i)·x = e_1`, and the field norm is the determinant
//! of the regular representation. An element is an algebraic integer exactly
//! when all of its coordinates are integers.
//!
//! Integral bases are accepted and verified (multiplicative closure over `Z`,
//! `ω_1 = 1`, squarefree `m_θ`), never computed: callers provide `Ω` up
//! front. The size conditions a primitive element can additionally satisfy
//! affect only complexity, not correctness, and are not enforced here.
//!
//! Complex embeddings of the field are computed lazily at a requested
//! precision as disks that provably contain the roots of `m_θ`; they serve
//! diagnostics and the symbolic export only and never influence an exact
//! decision.

use crate::zlattice::{solve_rational, IntMatrix, QMatrix};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("minimal polynomial must be monic of degree ≥ 1")]
    NonMonicPolynomial,
    #[error("minimal polynomial is not squarefree (discriminant is zero)")]
    NotSquarefree,
    #[error("basis matrix over the power basis is singular")]
    SingularBasis,
    #[error("first basis element must be 1")]
    FirstBasisElementNotOne,
    #[error("basis is not multiplicatively closed over Z")]
    NonIntegralMultTable,
    #[error("division by zero")]
    DivisionByZero,
}

/// Shared handle to an immutable field description.
pub type FieldRef = Arc<NumberField>;

/// Element of `K` as a rational coordinate vector over the integral basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgNum {
    pub coords: Vec<BigRational>,
}

impl AlgNum {
    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates of an integral element.
    pub fn int_coords(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.coords.iter().map(|c| c.to_integer()).collect())
    }
}

/// Disk in the complex plane certified to contain one root of `m_θ`.
#[derive(Debug, Clone, Copy)]
pub struct EmbeddingDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl EmbeddingDisk {
    pub fn contains_f64(&self, z: Complex64) -> bool {
        (self.center - z).norm() <= self.radius
    }
}

/// Symbolic representation of an element: its minimal polynomial over `Q`
/// plus an isolating disk selecting the intended root.
#[derive(Debug, Clone)]
pub struct SymbolicRep {
    /// Coefficients `c_0, …, c_k` of the monic minimal polynomial (with `c_k = 1`).
    pub min_poly: Vec<BigRational>,
    pub disk: EmbeddingDisk,
}

/// A number field together with the data needed for exact `O_K` arithmetic.
#[derive(Debug, Clone)]
pub struct NumberField {
    degree: usize,
    /// Coefficients `a_0, …, a_{d−1}` of the monic `m_θ = x^d + Σ a_i x^i`.
    min_poly: Vec<BigInt>,
    /// Row `i` holds the power-basis coordinates of `ω_i`.
    basis_over_power: QMatrix,
    /// `mult_table[i]` maps coordinates of `b` to coordinates of `ω_i·b`.
    mult_table: Vec<IntMatrix>,
    /// Field discriminant `det(Tr(ω_i ω_j))`.
    discriminant: BigInt,
    /// `max(1, d⁴(log₂ d + log₂|Δ|))` as a rational.
    complexity_measure: BigRational,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.basis_over_power == other.basis_over_power
    }
}
impl Eq for NumberField {}

impl NumberField {
    /// Loads a field from a monic integer minimal polynomial (coefficients
    /// `c_0, …, c_{d−1}` of `x^d + Σ c_i x^i`) and an integral basis given in
    /// power-basis coordinates, one row per basis element.
    pub fn load(min_poly_low: Vec<BigInt>, basis_over_power: QMatrix) -> Result<FieldRef, NumFieldError> {
        let d = min_poly_low.len();
        if d == 0 {
            return Err(NumFieldError::NonMonicPolynomial);
        }
        if basis_over_power.rows != d || basis_over_power.cols != d {
            return Err(NumFieldError::SingularBasis);
        }
        if poly_disc(&min_poly_low).is_zero() {
            return Err(NumFieldError::NotSquarefree);
        }
        let inv_basis_t = basis_over_power.transpose().inverse().ok_or(NumFieldError::SingularBasis)?;
        // ω_1 must be the element 1 = (1, 0, …, 0) in the power basis.
        for j in 0..d {
            let want = if j == 0 { BigRational::one() } else { BigRational::zero() };
            if basis_over_power[(0, j)] != want {
                return Err(NumFieldError::FirstBasisElementNotOne);
            }
        }
        // Regular representation of each basis element: multiply in the power
        // basis, reduce mod m_θ, convert back to Ω-coordinates.
        let mut mult_table = Vec::with_capacity(d);
        for i in 0..d {
            let wi: Vec<BigRational> = (0..d).map(|k| basis_over_power[(i, k)].clone()).collect();
            let mut m = QMatrix::zero(d, d);
            for j in 0..d {
                let wj: Vec<BigRational> = (0..d).map(|k| basis_over_power[(j, k)].clone()).collect();
                let prod = poly_mulmod(&wi, &wj, &min_poly_low);
                let omega_coords = inv_basis_t.mul_vec(&prod);
                for k in 0..d {
                    m[(k, j)] = omega_coords[k].clone();
                }
            }
            let int = m.to_integer().ok_or(NumFieldError::NonIntegralMultTable)?;
            mult_table.push(int);
        }
        debug_assert_eq!(mult_table[0], IntMatrix::identity(d));
        // Trace form: Tr(ω_i ω_j) = tr(M_i · M_j).
        let t = IntMatrix::from_fn(d, d, |i, j| {
            let p = mult_table[i].mul(&mult_table[j]);
            (0..d).map(|k| p[(k, k)].clone()).sum()
        });
        let discriminant = t.det();
        if discriminant.is_zero() {
            return Err(NumFieldError::SingularBasis);
        }
        let complexity_measure = complexity_measure(d, &discriminant);
        Ok(Arc::new(NumberField {
            degree: d,
            min_poly: min_poly_low,
            basis_over_power,
            mult_table,
            discriminant,
            complexity_measure,
        }))
    }

    /// The rational field `Q` (degree 1).
    pub fn rationals() -> FieldRef {
        NumberField::load(vec![BigInt::from(-1)], QMatrix::identity(1)).unwrap()
    }

    /// `Q(√m)` for a squarefree `m ≢ 1 (mod 4)`, with integral basis `{1, √m}`.
    ///
    /// This covers the Gaussian integers (`m = −1`) and `Z[i√5]` (`m = −5`).
    pub fn quadratic(m: i64) -> Result<FieldRef, NumFieldError> {
        NumberField::load(vec![BigInt::from(-m), BigInt::zero()], QMatrix::identity(2))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Low coefficients `c_0, …, c_{d−1}` of the monic minimal polynomial.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn basis_over_power(&self) -> &QMatrix {
        &self.basis_over_power
    }

    pub fn mult_table(&self) -> &[IntMatrix] {
        &self.mult_table
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn complexity_measure(&self) -> &BigRational {
        &self.complexity_measure
    }

    pub fn zero(&self) -> AlgNum {
        AlgNum { coords: vec![BigRational::zero(); self.degree] }
    }

    pub fn one(&self) -> AlgNum {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, r: BigRational) -> AlgNum {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r;
        AlgNum { coords }
    }

    pub fn from_int(&self, n: i64) -> AlgNum {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_int_coords(&self, coords: &[i64]) -> AlgNum {
        assert_eq!(coords.len(), self.degree);
        AlgNum { coords: coords.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect() }
    }

    pub fn from_coords(&self, coords: Vec<BigRational>) -> AlgNum {
        assert_eq!(coords.len(), self.degree);
        AlgNum { coords }
    }

    pub fn add(&self, a: &AlgNum, b: &AlgNum) -> AlgNum {
        AlgNum { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &AlgNum, b: &AlgNum) -> AlgNum {
        AlgNum { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &AlgNum) -> AlgNum {
        AlgNum { coords: a.coords.iter().map(|x| -x).collect() }
    }

    /// Product via `Σ_i a_i (M_i · b)`.
    pub fn mul(&self, a: &AlgNum, b: &AlgNum) -> AlgNum {
        let d = self.degree;
        let mut out = vec![BigRational::zero(); d];
        for i in 0..d {
            if a.coords[i].is_zero() {
                continue;
            }
            let m = &self.mult_table[i];
            for k in 0..d {
                let mut acc = BigRational::zero();
                for j in 0..d {
                    if !b.coords[j].is_zero() && !m[(k, j)].is_zero() {
                        acc += BigRational::from_integer(m[(k, j)].clone()) * &b.coords[j];
                    }
                }
                if !acc.is_zero() {
                    out[k] += &a.coords[i] * acc;
                }
            }
        }
        AlgNum { coords: out }
    }

    pub fn scale(&self, r: &BigRational, a: &AlgNum) -> AlgNum {
        AlgNum { coords: a.coords.iter().map(|x| x * r).collect() }
    }

    /// Matrix of multiplication by `a` in the basis `Ω`.
    pub fn regular_representation(&self, a: &AlgNum) -> QMatrix {
        let d = self.degree;
        QMatrix::from_fn(d, d, |k, j| {
            let mut acc = BigRational::zero();
            for i in 0..d {
                if !a.coords[i].is_zero() && !self.mult_table[i][(k, j)].is_zero() {
                    acc += &a.coords[i] * BigRational::from_integer(self.mult_table[i][(k, j)].clone());
                }
            }
            acc
        })
    }

    /// Multiplicative inverse, solving `(Σ a_i M_i)·x = e_1`.
    pub fn inv(&self, a: &AlgNum) -> Result<AlgNum, NumFieldError> {
        if a.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        let r = self.regular_representation(a);
        let mut e1 = QMatrix::zero(self.degree, 1);
        e1[(0, 0)] = BigRational::one();
        let sol = solve_rational(&r, &e1).map_err(|_| NumFieldError::DivisionByZero)?;
        Ok(AlgNum { coords: (0..self.degree).map(|i| sol.solution[(i, 0)].clone()).collect() })
    }

    pub fn div(&self, a: &AlgNum, b: &AlgNum) -> Result<AlgNum, NumFieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Field norm `N_{K/Q}(a) = det(Σ a_i M_i)`.
    pub fn norm(&self, a: &AlgNum) -> BigRational {
        self.regular_representation(a).det()
    }

    pub fn trace(&self, a: &AlgNum) -> BigRational {
        let r = self.regular_representation(a);
        (0..self.degree).map(|i| r[(i, i)].clone()).sum()
    }

    /// Size `S(α)`: every stored rational contributes
    /// `max(1, bitlen(num)) + max(1, bitlen(den))`, so zero contributes 2.
    pub fn bit_size(&self, a: &AlgNum) -> u64 {
        a.coords
            .iter()
            .map(|c| c.numer().bits().max(1) + c.denom().bits().max(1))
            .sum()
    }

    /// Root disks of `m_θ`, refined until every radius is below
    /// `2^-precision_bits` or f64 resolution is reached. Diagnostics only.
    pub fn embeddings(&self, precision_bits: u32) -> Vec<EmbeddingDisk> {
        root_disks(&self.min_poly, precision_bits)
    }

    /// Disk evaluation of `a` under the `k`-th embedding.
    pub fn embed(&self, a: &AlgNum, k: usize, precision_bits: u32) -> EmbeddingDisk {
        let theta = self.embeddings(precision_bits)[k];
        let d = self.degree;
        // Power-basis coordinates of a, evaluated at θ by Horner on disks.
        let mut acc = disk_exact(Complex64::new(0.0, 0.0));
        for p in (0..d).rev() {
            let mut coeff = BigRational::zero();
            for i in 0..d {
                coeff += &a.coords[i] * &self.basis_over_power[(i, p)];
            }
            acc = disk_add(disk_mul(acc, theta), rational_disk(&coeff));
        }
        acc
    }

    /// Minimal polynomial of `a` over `Q` plus an isolating disk
    /// (the symbolic representation used for export).
    pub fn symbolic(&self, a: &AlgNum, precision_bits: u32) -> SymbolicRep {
        let ch = self.char_poly(a);
        let min_poly = squarefree_part(&ch);
        let disk = self.embed(a, 0, precision_bits);
        SymbolicRep { min_poly, disk }
    }

    /// Characteristic polynomial of the regular representation of `a`,
    /// monic, by the trace-recurrence (Faddeev–LeVerrier) method.
    pub fn char_poly(&self, a: &AlgNum) -> Vec<BigRational> {
        let d = self.degree;
        let m = self.regular_representation(a);
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = BigRational::one();
        let mut n = m.clone();
        for k in 1..=d {
            let tr: BigRational = (0..d).map(|i| n[(i, i)].clone()).sum();
            let c = -tr / BigRational::from_integer(BigInt::from(k as i64));
            coeffs[d - k] = c.clone();
            if k < d {
                for i in 0..d {
                    let v = &n[(i, i)] + &c;
                    n[(i, i)] = v;
                }
                n = m.mul(&n);
            }
        }
        coeffs
    }
}

/// `max(1, d⁴(log₂ d + log₂|Δ|))` as a rational. The measure is f64-derived;
/// it only feeds size bounds, never exact decisions.
fn complexity_measure(d: usize, disc: &BigInt) -> BigRational {
    let log_d = (d as f64).log2();
    let log_disc = bigint_log2_abs(disc);
    let raw = (d as f64).powi(4) * (log_d + log_disc);
    let clamped = raw.max(1.0);
    BigRational::from_float(clamped).unwrap_or_else(BigRational::one)
}

/// `log₂|n|` for nonzero `n`, via the top bits.
pub fn bigint_log2_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return 0.0;
    }
    if bits <= 52 {
        return n.abs().to_f64().unwrap().log2();
    }
    let shift = bits - 52;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// Polynomial product of `a` and `b` reduced mod the monic polynomial with
/// low coefficients `m` (degree `d = m.len()`).
fn poly_mulmod(a: &[BigRational], b: &[BigRational], m: &[BigInt]) -> Vec<BigRational> {
    let d = m.len();
    let mut prod = vec![BigRational::zero(); 2 * d];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                prod[i + j] += ai * bj;
            }
        }
    }
    // x^d ≡ −Σ m_i x^i.
    for k in (d..2 * d).rev() {
        if prod[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut prod[k], BigRational::zero());
        for i in 0..d {
            prod[k - d + i] -= &c * BigRational::from_integer(m[i].clone());
        }
    }
    prod.truncate(d);
    prod
}

/// Discriminant of the monic integer polynomial with low coefficients `low`,
/// via the Sylvester resultant of `p` and `p'`.
pub fn poly_disc(low: &[BigInt]) -> BigInt {
    let d = low.len();
    let mut p: Vec<BigInt> = low.to_vec();
    p.push(BigInt::one()); // degree d, monic
    if d == 1 {
        return BigInt::one();
    }
    let dp: Vec<BigInt> = (1..=d).map(|i| &p[i] * BigInt::from(i as i64)).collect();
    let res = resultant(&p, &dp);
    if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant via the Sylvester matrix determinant (exact, small degrees).
fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    let q_deg = q.iter().rposition(|c| !c.is_zero());
    let Some(m) = q_deg else { return BigInt::zero() };
    if m == 0 {
        let mut acc = BigInt::one();
        for _ in 0..n {
            acc *= &q[0];
        }
        return acc;
    }
    let size = n + m;
    let s = IntMatrix::from_fn(size, size, |i, j| {
        if i < m {
            let k = j as i64 - i as i64;
            if k >= 0 && (k as usize) <= n { p[n - k as usize].clone() } else { BigInt::zero() }
        } else {
            let i = i - m;
            let k = j as i64 - i as i64;
            if k >= 0 && (k as usize) <= m { q[m - k as usize].clone() } else { BigInt::zero() }
        }
    });
    s.det()
}

/// Squarefree part `p / gcd(p, p')` of a rational polynomial given by all
/// coefficients low-to-high; result is monic.
fn squarefree_part(p: &[BigRational]) -> Vec<BigRational> {
    let dp: Vec<BigRational> = (1..p.len())
        .map(|i| &p[i] * BigRational::from_integer(BigInt::from(i as i64)))
        .collect();
    let g = poly_gcd(p, &dp);
    let mut q = poly_div_exact(p, &g);
    let lead = q.last().cloned().unwrap_or_else(BigRational::one);
    if !lead.is_one() {
        for c in q.iter_mut() {
            *c = &*c / &lead;
        }
    }
    q
}

fn poly_deg(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = poly_deg(b).unwrap();
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &b[db];
        for i in 0..=db {
            let v = &r[dr - db + i] - &f * &b[i];
            r[dr - db + i] = v;
        }
        r[dr] = BigRational::zero();
    }
    r
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while poly_deg(&b).is_some() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let da = poly_deg(&a).unwrap_or(0);
    let lead = a[da].clone();
    if !lead.is_zero() && !lead.is_one() {
        for c in a.iter_mut() {
            *c = &*c / &lead;
        }
    }
    a.truncate(da + 1);
    a
}

fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let da = poly_deg(a).unwrap();
    let db = poly_deg(b).unwrap();
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let f = &r[db + k] / &b[db];
        q[k] = f.clone();
        for i in 0..=db {
            let v = &r[k + i] - &f * &b[i];
            r[k + i] = v;
        }
    }
    debug_assert!(poly_deg(&r).is_none());
    q
}

// ---- complex disk arithmetic (diagnostics only) ----

const DISK_SLOP: f64 = 1e-13;

fn disk_exact(c: Complex64) -> EmbeddingDisk {
    EmbeddingDisk { center: c, radius: 0.0 }
}

fn rational_disk(r: &BigRational) -> EmbeddingDisk {
    let v = r.numer().to_f64().unwrap_or(f64::MAX) / r.denom().to_f64().unwrap_or(1.0);
    EmbeddingDisk { center: Complex64::new(v, 0.0), radius: v.abs() * DISK_SLOP + f64::MIN_POSITIVE }
}

pub(crate) fn disk_add(a: EmbeddingDisk, b: EmbeddingDisk) -> EmbeddingDisk {
    let c = a.center + b.center;
    EmbeddingDisk { center: c, radius: inflate(a.radius + b.radius, c.norm()) }
}

pub(crate) fn disk_mul(a: EmbeddingDisk, b: EmbeddingDisk) -> EmbeddingDisk {
    let c = a.center * b.center;
    let r = a.center.norm() * b.radius + b.center.norm() * a.radius + a.radius * b.radius;
    EmbeddingDisk { center: c, radius: inflate(r, c.norm()) }
}

fn inflate(r: f64, scale: f64) -> f64 {
    r * (1.0 + DISK_SLOP) + scale * DISK_SLOP + f64::MIN_POSITIVE
}

/// Durand–Kerner root disks for a monic integer polynomial; each returned
/// disk contains at least one root, and for squarefree inputs at the reached
/// precision the disks are pairwise disjoint.
fn root_disks(low: &[BigInt], precision_bits: u32) -> Vec<EmbeddingDisk> {
    let d = low.len();
    let coeffs: Vec<Complex64> = low
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0))
        .chain(std::iter::once(Complex64::new(1.0, 0.0)))
        .collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let bound = 1.0 + low.iter().map(|c| c.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut zs: Vec<Complex64> = (0..d).map(|k| bound * seed.powu(k as u32 + 1)).collect();
    let target = (2.0f64).powi(-(precision_bits.min(48) as i32));
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for k in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != k {
                    denom *= zs[k] - zs[j];
                }
            }
            let w = eval(zs[k]) / denom;
            zs[k] -= w;
            delta = delta.max(w.norm());
        }
        if delta < target.min(1e-14) {
            break;
        }
    }
    (0..d)
        .map(|k| {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != k {
                    denom *= zs[k] - zs[j];
                }
            }
            let w = (eval(zs[k]) / denom).norm();
            EmbeddingDisk { center: zs[k], radius: inflate(d as f64 * w, zs[k].norm()) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn br(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn brf(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn load_quadratic_im5() {
        let f = NumberField::quadratic(-5).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.mult_table()[1], IntMatrix::from_i64_rows(&[&[0, -5], &[1, 0]]));
        // Trace form diag(2, −10), determinant −20.
        assert_eq!(f.discriminant(), &BigInt::from(-20));
    }

    #[test]
    fn load_rationals_and_gaussian() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.mult_table()[0], IntMatrix::identity(1));
        assert_eq!(q.discriminant(), &BigInt::one());

        let gi = NumberField::quadratic(-1).unwrap();
        assert_eq!(gi.discriminant(), &BigInt::from(-4));
    }

    #[test]
    fn load_rejects_bad_inputs() {
        assert_eq!(
            NumberField::load(vec![], QMatrix::identity(0)).unwrap_err(),
            NumFieldError::NonMonicPolynomial
        );
        // x² (double root) is not squarefree.
        assert_eq!(
            NumberField::load(vec![BigInt::zero(), BigInt::zero()], QMatrix::identity(2)).unwrap_err(),
            NumFieldError::NotSquarefree
        );
        // Singular basis matrix {1, 1}.
        let mut s = QMatrix::zero(2, 2);
        s[(0, 0)] = BigRational::one();
        s[(1, 0)] = BigRational::one();
        assert_eq!(
            NumberField::load(vec![BigInt::from(5), BigInt::zero()], s).unwrap_err(),
            NumFieldError::SingularBasis
        );
        // {1, θ/2} for θ² = −5 is not multiplicatively closed over Z.
        let mut half = QMatrix::identity(2);
        half[(1, 1)] = brf(1, 2);
        assert_eq!(
            NumberField::load(vec![BigInt::from(5), BigInt::zero()], half).unwrap_err(),
            NumFieldError::NonIntegralMultTable
        );
        // ω_1 ≠ 1.
        let mut swapped = QMatrix::zero(2, 2);
        swapped[(0, 1)] = BigRational::one();
        swapped[(1, 0)] = BigRational::one();
        assert_eq!(
            NumberField::load(vec![BigInt::from(5), BigInt::zero()], swapped).unwrap_err(),
            NumFieldError::FirstBasisElementNotOne
        );
    }

    #[test]
    fn mul_worked_example() {
        // (2 − i√5)(i√5 − 1) = 3(1 + i√5), the identity behind the two-state
        // equivalence in the quadratic example.
        let f = NumberField::quadratic(-5).unwrap();
        let a = f.from_int_coords(&[2, -1]);
        let b = f.from_int_coords(&[-1, 1]);
        assert_eq!(f.mul(&a, &b), f.from_int_coords(&[3, 3]));
        // a·1 = a, and (1+ω)(1−ω) = 1 − ω² = 6.
        assert_eq!(f.mul(&a, &f.one()), a);
        let p = f.mul(&f.from_int_coords(&[1, 1]), &f.from_int_coords(&[1, -1]));
        assert_eq!(p, f.from_int_coords(&[6, 0]));
    }

    #[test]
    fn inverse_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
        let a = f.from_int_coords(&[1, 1]);
        let inv = f.inv(&a).unwrap();
        assert_eq!(inv, f.from_coords(vec![brf(1, 6), brf(-1, 6)]));
        assert_eq!(f.mul(&a, &inv), f.one());
        assert_eq!(f.inv(&f.zero()).unwrap_err(), NumFieldError::DivisionByZero);

        let q = NumberField::rationals();
        let r = q.from_rational(brf(2, 3));
        assert_eq!(q.inv(&r).unwrap(), q.from_rational(brf(3, 2)));
    }

    #[test]
    fn norm_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        assert_eq!(f.norm(&f.zero()), br(0));
        assert_eq!(f.norm(&f.one()), br(1));
        // N(a + bω) = a² + 5b².
        assert_eq!(f.norm(&f.from_int_coords(&[2, -1])), br(9));
        assert_eq!(f.norm(&f.from_int(3)), br(9));
    }

    #[test]
    fn bit_size_convention() {
        let f = NumberField::quadratic(-5).unwrap();
        // Each zero coordinate contributes max(1,0)+max(1,1) = 2.
        assert_eq!(f.bit_size(&f.zero()), 4);
        assert_eq!(f.bit_size(&f.one()), 2 + 2);
        let q = NumberField::rationals();
        for k in 0..12u32 {
            let v = q.from_rational(BigRational::from_integer(BigInt::from(2u64.pow(k))));
            assert_eq!(q.bit_size(&v), (k as u64 + 1) + 1);
        }
    }

    #[test]
    fn ring_axioms_random() {
        let fields = [
            NumberField::rationals(),
            NumberField::quadratic(-1).unwrap(),
            NumberField::quadratic(-5).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in &fields {
            for _ in 0..40 {
                let rnd = |rng: &mut ChaCha8Rng| {
                    f.from_coords(
                        (0..f.degree()).map(|_| brf(rng.gen_range(-6..7), rng.gen_range(1..4))).collect(),
                    )
                };
                let a = rnd(&mut rng);
                let b = rnd(&mut rng);
                let c = rnd(&mut rng);
                assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                assert_eq!(f.norm(&f.mul(&a, &b)), f.norm(&a) * f.norm(&b));
            }
        }
    }

    #[test]
    fn integrality_closure() {
        let f = NumberField::quadratic(-5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = f.from_int_coords(&[rng.gen_range(-9..10), rng.gen_range(-9..10)]);
            let b = f.from_int_coords(&[rng.gen_range(-9..10), rng.gen_range(-9..10)]);
            assert!(f.add(&a, &b).is_integral());
            assert!(f.mul(&a, &b).is_integral());
        }
    }

    #[test]
    fn norm_size_bound() {
        // log₂|N(α)| ≤ d(log₂ C_K + S(α)) for integral α.
        let fields = [
            NumberField::rationals(),
            NumberField::quadratic(-1).unwrap(),
            NumberField::quadratic(-5).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for f in &fields {
            let ck = f.complexity_measure().to_f64().unwrap_or(1.0);
            let logck = ck.log2().max(0.0);
            for _ in 0..200 {
                let a = f.from_coords((0..f.degree()).map(|_| br(rng.gen_range(-1000..1001))).collect());
                let n = f.norm(&a);
                if n.is_zero() {
                    continue;
                }
                let lhs = n.to_integer().bits() as f64;
                let rhs = f.degree() as f64 * (logck + f.bit_size(&a) as f64);
                assert!(lhs <= rhs, "norm-size bound violated: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn embeddings_contain_norm() {
        let f = NumberField::quadratic(-5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let a = f.from_int_coords(&[rng.gen_range(-8..9), rng.gen_range(-8..9)]);
            let d0 = f.embed(&a, 0, 40);
            let d1 = f.embed(&a, 1, 40);
            let prod = disk_mul(d0, d1);
            let n = f.norm(&a);
            let nf = n.numer().to_f64().unwrap() / n.denom().to_f64().unwrap();
            assert!(
                prod.contains_f64(Complex64::new(nf, 0.0)),
                "product of embedding disks misses the norm"
            );
        }
    }

    #[test]
    fn symbolic_min_poly() {
        let f = NumberField::quadratic(-5).unwrap();
        let omega = f.from_int_coords(&[0, 1]);
        let s = f.symbolic(&omega, 30);
        assert_eq!(s.min_poly, vec![br(5), br(0), br(1)]);
        // A rational element has a degree-1 minimal polynomial.
        let s = f.symbolic(&f.from_int(7), 30);
        assert_eq!(s.min_poly, vec![br(-7), br(1)]);
    }

    #[test]
    fn poly_disc_values() {
        // disc(x² + 5) = −20, disc(x² + 1) = −4, disc(x² − 2) = 8.
        assert_eq!(poly_disc(&[BigInt::from(5), BigInt::zero()]), BigInt::from(-20));
        assert_eq!(poly_disc(&[BigInt::from(1), BigInt::zero()]), BigInt::from(-4));
        assert_eq!(poly_disc(&[BigInt::from(-2), BigInt::zero()]), BigInt::from(8));
    }
}
