//! Fractional ideals of `O_K` as integer lattices in Hermite normal form.
//!
//! An ideal is stored as a positive denominator `den` and a full-rank `d×d`
//! HNF matrix whose columns are the `Ω`-coordinate vectors of a Z-basis of
//! `den·𝔞`. Every constructor normalizes to the minimal denominator and the
//! canonical HNF basis, so ideal equality is structural equality.
//!
//! On top of the group arithmetic (sum, product, inverse, norm) the module
//! implements the machinery the almost-minimal generating-set computation
//! consumes: pairwise-coprime factor refinement, a generalized Chinese
//! remainder theorem built from idempotent splittings of `1`, and
//! deterministic two-element generation. None of it ever factors an ideal
//! into primes; coprimality and refinement are the only tools.
//!
//! ```
//! use okwa::ideals::Ideal;
//! use okwa::numfield::NumberField;
//!
//! let f = NumberField::quadratic(-5).unwrap();
//! let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
//! // N(𝔞) = 3, and 𝔞·𝔞⁻¹ = O_K even though 𝔞 has no single generator.
//! assert_eq!(a.norm(), num_rational::BigRational::from_integer(3.into()));
//! assert!(a.mul(&a.inverse()).is_one());
//! ```

use crate::numfield::{AlgNum, FieldRef};
use crate::zlattice::{self, hnf, HnfResult, IntMatrix, QMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("the zero module is not a fractional ideal")]
    ZeroIdeal,
    #[error("ideals belong to different fields")]
    FieldMismatch,
    #[error("operation requires integral ideals")]
    NonIntegralInput,
    #[error("lattice is not closed under multiplication by the ring")]
    NotClosed,
    #[error("lattice does not have full rank")]
    NotFullRank,
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("moduli and residues have different lengths")]
    LengthMismatch,
    #[error("ideal quotient is not integral")]
    NotDivisible,
}

/// Fractional ideal `𝔞 = L/den`, with `L` the column lattice of `mat`.
#[derive(Debug, Clone)]
pub struct Ideal {
    field: FieldRef,
    den: BigInt,
    mat: IntMatrix,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.mat == other.mat
    }
}
impl Eq for Ideal {}

impl Ideal {
    /// The unit ideal `O_K`.
    pub fn one(field: &FieldRef) -> Ideal {
        let d = field.degree();
        Ideal { field: field.clone(), den: BigInt::one(), mat: IntMatrix::identity(d) }
    }

    /// The `O_K`-span of the given generators.
    pub fn from_generators(field: &FieldRef, gens: &[AlgNum]) -> Result<Ideal, IdealError> {
        let d = field.degree();
        let mut cols: Vec<Vec<BigRational>> = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            for i in 0..d {
                let mut e = field.zero();
                e.coords[i] = BigRational::one();
                cols.push(field.mul(&e, g).coords);
            }
        }
        if cols.is_empty() {
            return Err(IdealError::ZeroIdeal);
        }
        let q = QMatrix::from_columns(d, &cols);
        let (den, m) = q.scale_to_integer();
        Ideal::canonical(field.clone(), den, m)
    }

    /// The principal ideal `(g)`.
    pub fn principal(field: &FieldRef, g: &AlgNum) -> Result<Ideal, IdealError> {
        Ideal::from_generators(field, std::slice::from_ref(g))
    }

    /// Validates externally supplied parts: full rank, multiplicative closure,
    /// then normalizes to canonical form.
    pub fn from_parts(field: &FieldRef, den: BigInt, mat: IntMatrix) -> Result<Ideal, IdealError> {
        let d = field.degree();
        if den.is_zero() {
            return Err(IdealError::ZeroIdeal);
        }
        if mat.rows != d {
            return Err(IdealError::NotFullRank);
        }
        let ideal = Ideal::canonical(field.clone(), den.abs(), mat)?;
        let h = ideal.hnf_result();
        for j in 0..d {
            let col = ideal.mat.column(j);
            for i in 1..d {
                let prod = field.mult_table()[i].mul_vec(&col);
                if !zlattice::lattice_contains(&h, &prod).unwrap_or(false) {
                    return Err(IdealError::NotClosed);
                }
            }
        }
        Ok(ideal)
    }

    /// Normalizes arbitrary generating columns of `den·𝔞` into (minimal den, HNF).
    fn canonical(field: FieldRef, den: BigInt, m: IntMatrix) -> Result<Ideal, IdealError> {
        let d = field.degree();
        let r = hnf(&m, false);
        if r.rank() != d {
            return Err(IdealError::NotFullRank);
        }
        let mut mat = r.h;
        let mut den = den;
        let g = mat.content().gcd(&den);
        if !g.is_one() {
            mat = mat.div_exact(&g);
            let (q, rem) = den.div_rem(&g);
            debug_assert!(rem.is_zero());
            den = q;
        }
        Ok(Ideal { field, den, mat })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn mat(&self) -> &IntMatrix {
        &self.mat
    }

    /// `𝔞 ⊆ O_K`, equivalent to `den == 1` in canonical form.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.mat == IntMatrix::identity(self.field.degree())
    }

    /// Z-basis of `𝔞` as field elements (columns divided by `den`).
    pub fn basis_elements(&self) -> Vec<AlgNum> {
        let d = self.field.degree();
        let den = BigRational::from_integer(self.den.clone());
        (0..d)
            .map(|j| {
                let col = self.mat.column(j);
                self.field.from_coords(
                    col.into_iter().map(|c| BigRational::from_integer(c) / &den).collect(),
                )
            })
            .collect()
    }

    fn hnf_result(&self) -> HnfResult {
        HnfResult {
            h: self.mat.clone(),
            pivot_map: (0..self.field.degree()).collect(),
            transform: None,
        }
    }

    fn assert_same_field(&self, other: &Ideal) {
        assert_eq!(self.field, other.field, "ideal operands belong to different fields");
    }

    /// Ideal sum `𝔞 + 𝔟` (the gcd for integral ideals).
    pub fn add(&self, other: &Ideal) -> Ideal {
        self.assert_same_field(other);
        let den = self.den.lcm(&other.den);
        let a = self.mat.scale(&(&den / &self.den));
        let b = other.mat.scale(&(&den / &other.den));
        Ideal::canonical(self.field.clone(), den, a.hcat(&b)).expect("sum of ideals has full rank")
    }

    /// Ideal product `𝔞𝔟`.
    pub fn mul(&self, other: &Ideal) -> Ideal {
        self.assert_same_field(other);
        let d = self.field.degree();
        let f = &self.field;
        let a = self.basis_scaled();
        let b = other.basis_scaled();
        let mut cols = Vec::with_capacity(d * d);
        for x in &a {
            for y in &b {
                cols.push(f.mul(x, y).int_coords().expect("integral product"));
            }
        }
        let m = IntMatrix::from_columns(d, &cols);
        Ideal::canonical(self.field.clone(), &self.den * &other.den, m)
            .expect("product of ideals has full rank")
    }

    /// Columns of `mat` as integral elements (a Z-basis of `den·𝔞`).
    fn basis_scaled(&self) -> Vec<AlgNum> {
        let d = self.field.degree();
        (0..d)
            .map(|j| {
                self.field.from_coords(
                    self.mat.column(j).into_iter().map(BigRational::from_integer).collect(),
                )
            })
            .collect()
    }

    /// The dual ideal `𝔞^{-1} = {x ∈ K | x𝔞 ⊆ O_K}`.
    ///
    /// Solved over Z: with `I = den·𝔞` integral and `N = [O_K : I]`, every
    /// `x ∈ I^{-1}` satisfies `Nx ∈ O_K`, so `N·I^{-1}` is the lattice of
    /// integral `η` with `R(v_i)·η ≡ 0 (mod N)` for every basis column `v_i`.
    /// That kernel lattice comes out of one HNF transform.
    pub fn inverse(&self) -> Ideal {
        let d = self.field.degree();
        let n = self.mat.det().abs();
        let mut stacked = IntMatrix::zero(0, d);
        for v in self.basis_scaled() {
            let r = self.field.regular_representation(&v);
            stacked = stacked.vcat(&r.to_integer().expect("integral regular representation"));
        }
        let c = stacked.hcat(&IntMatrix::identity(d * d).scale(&-n.clone()));
        let k = zlattice::kernel(&c);
        let lambda = IntMatrix::from_fn(d, k.cols, |i, j| k[(i, j)].clone());
        // 𝔞^{-1} = den · Λ / N.
        let scaled = lambda.scale(&self.den);
        Ideal::canonical(self.field.clone(), n, scaled).expect("inverse ideal has full rank")
    }

    /// `𝔞^e` by repeated squaring; `𝔞^0 = O_K`.
    pub fn pow(&self, e: u32) -> Ideal {
        let mut base = self.clone();
        let mut acc = Ideal::one(&self.field);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `(α)·𝔞` for a nonzero field element `α`.
    pub fn mul_element(&self, alpha: &AlgNum) -> Ideal {
        assert!(!alpha.is_zero(), "scaling an ideal by zero");
        let r = self.field.regular_representation(alpha);
        let prod = r.mul(&self.mat.to_rational());
        let (s, m) = prod.scale_to_integer();
        Ideal::canonical(self.field.clone(), &self.den * s, m).expect("scaled ideal has full rank")
    }

    /// Exact quotient `𝔞·𝔟^{-1}`, required to be integral.
    pub fn div_exact(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        let q = self.mul(&other.inverse());
        if q.is_integral() {
            Ok(q)
        } else {
            Err(IdealError::NotDivisible)
        }
    }

    /// `N(𝔞) = |det(mat)| / den^d`; equals `|O_K/𝔞|` for integral ideals.
    pub fn norm(&self) -> BigRational {
        let num = self.mat.det().abs();
        let mut den = BigInt::one();
        for _ in 0..self.field.degree() {
            den *= &self.den;
        }
        BigRational::new(num, den)
    }

    /// Norm of an integral ideal as an integer.
    pub fn norm_integer(&self) -> Option<BigInt> {
        self.is_integral().then(|| self.mat.det().abs())
    }

    /// Membership `x ∈ 𝔞`.
    pub fn contains(&self, x: &AlgNum) -> bool {
        let scaled: Vec<BigRational> =
            x.coords.iter().map(|c| c * BigRational::from_integer(self.den.clone())).collect();
        if !scaled.iter().all(|c| c.is_integer()) {
            return false;
        }
        let v: Vec<BigInt> = scaled.iter().map(|c| c.to_integer()).collect();
        zlattice::lattice_contains(&self.hnf_result(), &v).unwrap_or(false)
    }

    /// Canonical representative of `x + 𝔞` inside the fundamental box of the
    /// HNF basis (coordinates in `[0, 1)` over the basis).
    pub fn reduce_mod(&self, x: &AlgNum) -> AlgNum {
        let d = self.field.degree();
        let basis = QMatrix::from_fn(d, d, |i, j| {
            BigRational::new(self.mat[(i, j)].clone(), self.den.clone())
        });
        let inv = basis.inverse().expect("ideal basis is invertible");
        let t = inv.mul_vec(&x.coords);
        let mut out = x.coords.clone();
        for j in 0..d {
            let fl = t[j].floor();
            if fl.is_zero() {
                continue;
            }
            for i in 0..d {
                let v = &out[i] - &fl * BigRational::new(self.mat[(i, j)].clone(), self.den.clone());
                out[i] = v;
            }
        }
        self.field.from_coords(out)
    }

    /// Coprimality test: `𝔞 + 𝔟 = O_K`.
    pub fn coprime_with(&self, other: &Ideal) -> bool {
        self.add(other).is_one()
    }
}

/// For coprime `𝔞 + 𝔟 = O_K`, splits `1 = u + v` with `u ∈ 𝔞`, `v ∈ 𝔟`.
///
/// The combination comes from expressing the coordinate vector of `1` over
/// the joined lattice of the two ideals with an integral solve.
pub fn split_one(a: &Ideal, b: &Ideal) -> Result<(AlgNum, AlgNum), IdealError> {
    a.assert_same_field(b);
    let f = a.field().clone();
    let d = f.degree();
    if a.is_one() {
        return Ok((f.one(), f.zero()));
    }
    if b.is_one() {
        return Ok((f.zero(), f.one()));
    }
    if !a.add(b).is_one() {
        return Err(IdealError::NotCoprime);
    }
    let den = a.den.lcm(&b.den);
    let am = a.mat.scale(&(&den / &a.den));
    let bm = b.mat.scale(&(&den / &b.den));
    let joined = am.hcat(&bm);
    let mut target = vec![BigInt::zero(); d];
    target[0] = den.clone();
    let xi = zlattice::solve_integer(&joined, &target).ok_or(IdealError::NotCoprime)?;
    // u = Σ ξ_j · (a-block column j) / den.
    let mut u = vec![BigRational::zero(); d];
    for j in 0..d {
        for i in 0..d {
            u[i] += BigRational::new(&xi[j] * &am[(i, j)], den.clone());
        }
    }
    let u = f.from_coords(u);
    let v = f.sub(&f.one(), &u);
    debug_assert!(a.contains(&u) && b.contains(&v));
    Ok((u, v))
}

/// Pairwise-coprime refinement of integral ideals.
///
/// Returns coprime ideals `m_1, …, m_ℓ` and a matrix of natural exponents
/// with `inputs[i] = Π_j m_j^{e[i][j]}` exactly. The refinement loop replaces
/// a non-coprime pair `(𝔞, 𝔟)` with `{𝔞𝔤^{-1}, 𝔤, 𝔟𝔤^{-1}}` for
/// `𝔤 = 𝔞 + 𝔟`, always picking the first such pair in list order, until the
/// pool is pairwise coprime. Exponents are read off afterwards by exact
/// division, and the reconstruction is checked.
pub fn factor_refine(inputs: &[Ideal]) -> Result<(Vec<Ideal>, Vec<Vec<u32>>), IdealError> {
    for i in inputs {
        if !i.is_integral() {
            return Err(IdealError::NonIntegralInput);
        }
    }
    let mut pool: Vec<Ideal> = Vec::new();
    for i in inputs {
        if !i.is_one() && !pool.contains(i) {
            pool.push(i.clone());
        }
    }
    'refine: loop {
        for x in 0..pool.len() {
            for y in x + 1..pool.len() {
                let g = pool[x].add(&pool[y]);
                if g.is_one() {
                    continue;
                }
                let qa = pool[x].div_exact(&g)?;
                let qb = pool[y].div_exact(&g)?;
                let keep: Vec<Ideal> = pool
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != x && *k != y)
                    .map(|(_, v)| v.clone())
                    .collect();
                pool = keep;
                for cand in [qa, g, qb] {
                    if !cand.is_one() && !pool.contains(&cand) {
                        pool.push(cand);
                    }
                }
                continue 'refine;
            }
        }
        break;
    }
    let exponents: Vec<Vec<u32>> =
        inputs.iter().map(|i| pool.iter().map(|m| valuation(i, m)).collect()).collect();
    // The refinement invariant guarantees each input is a power product of
    // the pool; verify the reconstruction.
    for (i, exps) in inputs.iter().zip(&exponents) {
        let mut acc = Ideal::one(i.field());
        for (m, &e) in pool.iter().zip(exps) {
            if e > 0 {
                acc = acc.mul(&m.pow(e));
            }
        }
        if &acc != i {
            return Err(IdealError::NotDivisible);
        }
    }
    Ok((pool, exponents))
}

/// Number of times the proper integral ideal `m` divides `i` exactly.
fn valuation(i: &Ideal, m: &Ideal) -> u32 {
    let mut t = i.clone();
    let mut e = 0u32;
    loop {
        match t.div_exact(m) {
            Ok(next) => {
                t = next;
                e += 1;
            }
            Err(_) => return e,
        }
    }
}

/// Element of `m^e` whose valuation is exactly `e` at every prime of `m`,
/// certified by the factor-free check `(α)·m^{-e} + m = O_K`.
///
/// Candidates are scanned deterministically: the HNF basis columns of `m^e`
/// first, then growing integer combinations of them. Membership in
/// `m^e \ m^{e+1}` alone is not enough when `m` is composite — a column can
/// overshoot the valuation at one prime of `m` while another prime keeps it
/// out of `m^{e+1}` — so the stronger coprimality certificate is required.
pub(crate) fn element_with_exact_valuation(m: &Ideal, e: u32) -> AlgNum {
    let f = m.field().clone();
    let me = m.pow(e);
    let me_inv = me.inverse();
    let ok = |alpha: &AlgNum| -> bool {
        if alpha.is_zero() {
            return false;
        }
        let q = Ideal::principal(&f, alpha).expect("nonzero").mul(&me_inv);
        q.is_integral() && q.add(m).is_one()
    };
    let basis = me.basis_elements();
    for b in &basis {
        if ok(b) {
            return b.clone();
        }
    }
    let d = f.degree();
    for bound in 1i64..=8 {
        let mut coeffs = vec![-bound; d];
        loop {
            let mut alpha = f.zero();
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    alpha = f.add(&alpha, &f.scale(&BigRational::from_integer(BigInt::from(*c)), b));
                }
            }
            if ok(&alpha) {
                return alpha;
            }
            let mut k = 0;
            loop {
                if k == d {
                    break;
                }
                coeffs[k] += 1;
                if coeffs[k] <= bound {
                    break;
                }
                coeffs[k] = -bound;
                k += 1;
            }
            if k == d {
                break;
            }
        }
    }
    unreachable!("no element of exact valuation found in a generous search box")
}

/// Chinese remainder for pairwise-coprime integral moduli: returns `x ∈ O_K`
/// with `x ≡ residues[i] (mod moduli[i])` for every `i`.
///
/// Built from idempotents: `1 = u_i + v_i` with `u_i ∈ I_i` and
/// `v_i ∈ Π_{j≠i} I_j`, then `x = Σ residues[i]·v_i`.
pub fn ideal_crt(moduli: &[Ideal], residues: &[AlgNum]) -> Result<AlgNum, IdealError> {
    if moduli.len() != residues.len() || moduli.is_empty() {
        return Err(IdealError::LengthMismatch);
    }
    let f = moduli[0].field().clone();
    for m in moduli {
        if !m.is_integral() {
            return Err(IdealError::NonIntegralInput);
        }
    }
    for r in residues {
        if !r.is_integral() {
            return Err(IdealError::NonIntegralInput);
        }
    }
    for i in 0..moduli.len() {
        for j in i + 1..moduli.len() {
            if !moduli[i].coprime_with(&moduli[j]) {
                return Err(IdealError::NotCoprime);
            }
        }
    }
    let mut x = f.zero();
    for i in 0..moduli.len() {
        if residues[i].is_zero() {
            continue;
        }
        let mut rest = Ideal::one(&f);
        for (j, m) in moduli.iter().enumerate() {
            if j != i {
                rest = rest.mul(m);
            }
        }
        let (_, v) = split_one(&moduli[i], &rest)?;
        x = f.add(&x, &f.mul(&residues[i], &v));
    }
    Ok(x)
}

/// Finds `x ∈ 𝔞` such that `x·𝔞^{-1}` is integral and coprime to `𝔟`.
///
/// Refines `{𝔞, 𝔟}` into coprime factors, picks exact-valuation residues at
/// the factors of `𝔟`, forces membership in the remaining factors of `𝔞`,
/// and combines by the ideal CRT.
pub fn coprime_representative(a: &Ideal, b: &Ideal) -> Result<AlgNum, IdealError> {
    a.assert_same_field(b);
    let f = a.field().clone();
    if !a.is_integral() || !b.is_integral() {
        return Err(IdealError::NonIntegralInput);
    }
    if a.is_one() {
        return Ok(f.one());
    }
    // A basis element of 𝔞 often already works; prefer it to the CRT route.
    let a_inv = a.inverse();
    for cand in a.basis_elements() {
        let q = Ideal::principal(&f, &cand).expect("nonzero").mul(&a_inv);
        debug_assert!(q.is_integral());
        if q.add(b).is_one() {
            return Ok(cand);
        }
    }
    let (basis, exps) = factor_refine(&[a.clone(), b.clone()])?;
    let e_a = &exps[0];
    let e_b = &exps[1];
    let mut moduli = Vec::new();
    let mut residues = Vec::new();
    let mut rest = Ideal::one(&f);
    for (j, m) in basis.iter().enumerate() {
        if e_b[j] > 0 {
            // Factor of 𝔟: pin the valuation of x at exactly e_a[j].
            let r = if e_a[j] == 0 { f.one() } else { element_with_exact_valuation(m, e_a[j]) };
            moduli.push(m.pow(e_a[j] + 1));
            residues.push(r);
        } else if e_a[j] > 0 {
            rest = rest.mul(&m.pow(e_a[j]));
        }
    }
    if moduli.is_empty() {
        // 𝔟 shares no factor with 𝔞: any nonzero element of 𝔞 works.
        return Ok(a.basis_elements()[0].clone());
    }
    if !rest.is_one() {
        moduli.push(rest);
        residues.push(f.zero());
    }
    let x = ideal_crt(&moduli, &residues)?;
    debug_assert!(a.contains(&x));
    Ok(x)
}

/// Two elements generating the integral ideal: `𝔞 = x₁O_K + x₂O_K`.
///
/// `x₁` is the HNF basis column with the smallest diagonal entry (ties go to
/// the smaller pivot row); `x₂` makes `x₂·𝔞^{-1}` integral and coprime to
/// `(x₁)`.
pub fn two_element(a: &Ideal) -> Result<(AlgNum, AlgNum), IdealError> {
    if !a.is_integral() {
        return Err(IdealError::NonIntegralInput);
    }
    let d = a.field().degree();
    let mut best = 0usize;
    for j in 1..d {
        if a.mat()[(j, j)] < a.mat()[(best, best)] {
            best = j;
        }
    }
    let x1 = a.basis_elements()[best].clone();
    let principal = Ideal::principal(a.field(), &x1).expect("basis columns are nonzero");
    let x2 = coprime_representative(a, &principal)?;
    Ok((x1, x2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn br(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn int_ideal(f: &FieldRef, n: i64) -> Ideal {
        Ideal::principal(f, &f.from_int(n)).unwrap()
    }

    #[test]
    fn generators_and_canonical_form() {
        let f = NumberField::quadratic(-5).unwrap();
        let one = Ideal::from_generators(&f, &[f.one()]).unwrap();
        assert!(one.is_one());

        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        assert!(a.is_integral());
        assert_eq!(a.mat(), &IntMatrix::from_i64_rows(&[&[3, 1], &[0, 1]]));

        let q = NumberField::rationals();
        let half =
            Ideal::from_generators(&q, &[q.from_rational(BigRational::new(1.into(), 2.into()))]).unwrap();
        assert_eq!(half.den(), &BigInt::from(2));
        assert_eq!(half.mat(), &IntMatrix::identity(1));

        assert_eq!(Ideal::from_generators(&f, &[f.zero()]).unwrap_err(), IdealError::ZeroIdeal);
    }

    #[test]
    fn add_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        assert_eq!(a.add(&Ideal::one(&f)), Ideal::one(&f));
        assert_eq!(a.add(&a), a);

        let q = NumberField::rationals();
        assert_eq!(int_ideal(&q, 2).add(&int_ideal(&q, 3)), Ideal::one(&q));
        assert_eq!(int_ideal(&q, 12).add(&int_ideal(&q, 18)), int_ideal(&q, 6));
    }

    #[test]
    fn mul_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        assert_eq!(a.mul(&Ideal::one(&f)), a);
        // (3, 2−ω)·(3, 2+ω) = (3).
        let conj = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, 1])]).unwrap();
        assert_eq!(a.mul(&conj), int_ideal(&f, 3));

        let q = NumberField::rationals();
        assert_eq!(int_ideal(&q, 2).mul(&int_ideal(&q, 3)), int_ideal(&q, 6));
    }

    #[test]
    fn inverse_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        assert_eq!(Ideal::one(&f).inverse(), Ideal::one(&f));
        // (3, 2−ω)^{-1} = (1/3)(1−ω, 2+ω), the worked value.
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        let inv = a.inverse();
        let third = BigRational::new(1.into(), 3.into());
        let want = Ideal::from_generators(
            &f,
            &[
                f.from_coords(vec![&third * br(1), &third * br(-1)]),
                f.from_coords(vec![&third * br(2), &third * br(1)]),
            ],
        )
        .unwrap();
        assert_eq!(inv, want);
        assert!(a.mul(&inv).is_one());

        let q = NumberField::rationals();
        let inv2 = int_ideal(&q, 2).inverse();
        assert_eq!(inv2.den(), &BigInt::from(2));
        assert!(int_ideal(&q, 2).mul(&inv2).is_one());
    }

    #[test]
    fn norm_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        assert_eq!(Ideal::one(&f).norm(), br(1));
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        assert_eq!(a.norm(), br(3));
        assert_eq!(a.mul(&a.inverse()).norm(), br(1));
        let conj = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, 1])]).unwrap();
        assert_eq!(a.mul(&conj).norm(), a.norm() * conj.norm());
    }

    #[test]
    fn contains_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        assert!(a.contains(&f.zero()));
        assert!(a.contains(&f.from_int_coords(&[2, -1])));
        assert!(!a.contains(&f.one()));
    }

    #[test]
    fn from_parts_validates() {
        let f = NumberField::quadratic(-5).unwrap();
        // The lattice Z·1 + Z·2ω is not an O_K-module: ω·1 = ω ∉ lattice.
        let bad = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        assert_eq!(Ideal::from_parts(&f, BigInt::one(), bad).unwrap_err(), IdealError::NotClosed);
        let good = IntMatrix::from_i64_rows(&[&[3, 1], &[0, 1]]);
        let a = Ideal::from_parts(&f, BigInt::one(), good).unwrap();
        assert_eq!(a.norm(), br(3));
    }

    #[test]
    fn group_law_random() {
        let fields = [NumberField::quadratic(-1).unwrap(), NumberField::quadratic(-5).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for f in &fields {
            for _ in 0..25 {
                let g1 = f.from_int_coords(&[rng.gen_range(-5..6), rng.gen_range(-5..6)]);
                let g2 = f.from_int_coords(&[rng.gen_range(-5..6), rng.gen_range(-5..6)]);
                if g1.is_zero() && g2.is_zero() {
                    continue;
                }
                let a = Ideal::from_generators(f, &[g1, g2]).unwrap();
                assert!(a.mul(&a.inverse()).is_one());
                let b = int_ideal(f, rng.gen_range(1..9));
                let c = int_ideal(f, rng.gen_range(1..9));
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
                if a.is_integral() {
                    // 𝔞𝔟 ⊆ 𝔟 so N(𝔟) divides N(𝔞𝔟).
                    let prod = a.mul(&b);
                    assert!(prod.norm().to_integer().is_multiple_of(&b.norm().to_integer()));
                }
            }
        }
    }

    #[test]
    fn factor_refine_integers() {
        let q = NumberField::rationals();
        let (basis, exps) = factor_refine(&[int_ideal(&q, 12), int_ideal(&q, 18)]).unwrap();
        let vals: Vec<i64> = basis.iter().map(|m| m.norm().to_integer().to_i64().unwrap()).collect();
        let mut sorted = vals.clone();
        sorted.sort();
        assert_eq!(sorted, vec![2, 3]);
        // 12 = 2²·3, 18 = 2·3².
        for (i, n) in [(0usize, 12i64), (1, 18)] {
            let mut acc = 1i64;
            for (j, m) in vals.iter().enumerate() {
                acc *= m.pow(exps[i][j]);
            }
            assert_eq!(acc, n);
        }
    }

    #[test]
    fn factor_refine_trivial_and_coprime() {
        let q = NumberField::rationals();
        let (basis, exps) = factor_refine(&[Ideal::one(&q)]).unwrap();
        assert!(basis.is_empty());
        assert_eq!(exps, vec![Vec::<u32>::new()]);

        let f = NumberField::quadratic(-5).unwrap();
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        let b = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, 1])]).unwrap();
        assert!(a.coprime_with(&b));
        let (basis, _) = factor_refine(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis.contains(&a) && basis.contains(&b));

        let frac = a.inverse();
        assert_eq!(factor_refine(&[frac]).unwrap_err(), IdealError::NonIntegralInput);
    }

    #[test]
    fn crt_cases() {
        let q = NumberField::rationals();
        let x =
            ideal_crt(&[int_ideal(&q, 2), int_ideal(&q, 3)], &[q.from_int(1), q.from_int(2)]).unwrap();
        let r = x.coords[0].to_integer().mod_floor(&BigInt::from(6));
        assert_eq!(r, BigInt::from(5));

        let f = NumberField::quadratic(-5).unwrap();
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        let b = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, 1])]).unwrap();
        let x = ideal_crt(&[a.clone(), b.clone()], &[f.zero(), f.one()]).unwrap();
        assert!(a.contains(&x));
        assert!(b.contains(&f.sub(&x, &f.one())));

        // Single modulus.
        let x = ideal_crt(&[a.clone()], &[f.from_int(2)]).unwrap();
        assert!(a.contains(&f.sub(&x, &f.from_int(2))));

        assert_eq!(
            ideal_crt(&[int_ideal(&q, 2), int_ideal(&q, 4)], &[q.zero(), q.zero()]).unwrap_err(),
            IdealError::NotCoprime
        );
        assert_eq!(ideal_crt(&[int_ideal(&q, 2)], &[]).unwrap_err(), IdealError::LengthMismatch);
    }

    #[test]
    fn coprime_representative_cases() {
        let q = NumberField::rationals();
        assert_eq!(coprime_representative(&Ideal::one(&q), &int_ideal(&q, 3)).unwrap(), q.one());
        let x = coprime_representative(&int_ideal(&q, 2), &int_ideal(&q, 3)).unwrap();
        assert_eq!(x, q.from_int(2));

        let f = NumberField::quadratic(-5).unwrap();
        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        let b = int_ideal(&f, 3);
        let x = coprime_representative(&a, &b).unwrap();
        let quot = Ideal::principal(&f, &x).unwrap().mul(&a.inverse());
        assert!(quot.is_integral());
        assert!(quot.add(&b).is_one());
    }

    #[test]
    fn two_element_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let (x1, x2) = two_element(&Ideal::one(&f)).unwrap();
        assert_eq!(x1, f.one());
        assert_eq!(x2, f.one());

        let q = NumberField::rationals();
        let (x1, x2) = two_element(&int_ideal(&q, 6)).unwrap();
        assert_eq!(x1, q.from_int(6));
        assert_eq!(Ideal::from_generators(&q, &[x1, x2]).unwrap(), int_ideal(&q, 6));

        let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
        let (x1, x2) = two_element(&a).unwrap();
        assert_eq!(Ideal::from_generators(&f, &[x1, x2]).unwrap(), a);
    }

    #[test]
    fn two_element_random() {
        let f = NumberField::quadratic(-5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let g1 = f.from_int_coords(&[rng.gen_range(-6..7), rng.gen_range(-6..7)]);
            let g2 = f.from_int_coords(&[rng.gen_range(-6..7), rng.gen_range(-6..7)]);
            if g1.is_zero() && g2.is_zero() {
                continue;
            }
            let a = Ideal::from_generators(&f, &[g1, g2]).unwrap();
            if !a.is_integral() {
                continue;
            }
            let (x1, x2) = two_element(&a).unwrap();
            assert_eq!(Ideal::from_generators(&f, &[x1, x2]).unwrap(), a);
        }
    }

    #[test]
    fn reduce_mod_is_canonical() {
        let f = NumberField::quadratic(-5).unwrap();
        let a = int_ideal(&f, 3);
        let x = f.from_int_coords(&[7, -4]);
        let r = a.reduce_mod(&x);
        assert!(a.contains(&f.sub(&x, &r)));
        // Reduction is idempotent and depends only on the residue class.
        assert_eq!(a.reduce_mod(&r), r);
        let y = f.add(&x, &f.from_int_coords(&[3, 6]));
        assert_eq!(a.reduce_mod(&y), r);
    }

    #[test]
    fn exact_valuation_element() {
        let f = NumberField::quadratic(-5).unwrap();
        // (1+ω) = 𝔭𝔮 with N(𝔭) = 2 and N(𝔮) = 3. The first HNF column of
        // (1+ω) is 6, which overshoots the valuation at 𝔭; the exactness
        // check must reject it and land on a valuation-1 element.
        let m = Ideal::principal(&f, &f.from_int_coords(&[1, 1])).unwrap();
        let x = element_with_exact_valuation(&m, 1);
        let q = Ideal::principal(&f, &x).unwrap().mul(&m.inverse());
        assert!(q.is_integral());
        assert!(q.add(&m).is_one());
    }
}
