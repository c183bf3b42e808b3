//! Finitely generated torsion-free `O_K`-modules inside `K^n`, handled
//! through pseudo-generating sets `{(𝔞_i, v_i)}` representing `Σ 𝔞_i v_i`.
//!
//! The central algorithm is the pseudo-HNF: column elimination over `K` where
//! each pivot is normalized to `1` by pushing content into its coefficient
//! ideal, and two columns are combined through a splitting `aλ + bμ = 1` with
//! `λ ∈ 𝔞𝔡^{-1}`, `μ ∈ 𝔟𝔡^{-1}`, `𝔡 = a𝔞 + b𝔟`. The result is a
//! pseudo-basis with a unit upper-triangular vector matrix whose coefficient
//! ideals depend only on the module; off-diagonal entries are reduced to
//! canonical representatives so equal modules produce identical output.
//!
//! On top of it: the determinantal ideal (sum of maximal-minor ideals), the
//! chain-length bound it implies, the constructive isomorphism
//! `𝔞x ⊕ 𝔟y = O_K x' ⊕ 𝔞𝔟 y'`, and the computation of a generating set of
//! size at most `rank + 1` for integral modules.
//!
//! ```
//! use okwa::ideals::Ideal;
//! use okwa::numfield::NumberField;
//! use okwa::okmodules::{generating_set, PseudoElement, PseudoMatrix, Shape};
//!
//! let f = NumberField::quadratic(-5).unwrap();
//! let a = Ideal::from_generators(&f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap();
//! // The rank-1 module 𝔞·(1) ⊆ O_K needs two generators: 𝔞 is not principal.
//! let m = PseudoMatrix {
//!     field: f.clone(),
//!     ambient_dim: 1,
//!     elems: vec![PseudoElement { coeff: a.clone(), vec: vec![f.one()] }],
//!     shape: Shape::PseudoBasis,
//! };
//! let gens = generating_set(&m).unwrap();
//! assert_eq!(gens.len(), 2);
//! // And they regenerate exactly the ideal we started from.
//! let back = Ideal::from_generators(&f, &[gens[0][0].clone(), gens[1][0].clone()]).unwrap();
//! assert_eq!(back, a);
//! ```

use crate::ideals::{self, Ideal, IdealError};
use crate::numfield::{AlgNum, FieldRef};
use crate::zlattice::{self, IntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("module does not have full rank in its ambient space")]
    NotFullRank,
    #[error("module is not contained in O_K^n")]
    NotIntegral,
    #[error("vector dimension does not match the ambient dimension")]
    DimensionMismatch,
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// One pseudo-element `(coefficient ideal, vector)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoElement {
    pub coeff: Ideal,
    pub vec: Vec<AlgNum>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Generating,
    PseudoBasis,
}

/// Pseudo-generating set (or pseudo-basis) of a module in `K^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoMatrix {
    pub field: FieldRef,
    pub ambient_dim: usize,
    pub elems: Vec<PseudoElement>,
    pub shape: Shape,
}

impl PseudoMatrix {
    pub fn new(field: FieldRef, ambient_dim: usize, elems: Vec<PseudoElement>) -> Self {
        for e in &elems {
            assert_eq!(e.vec.len(), ambient_dim, "pseudo-element dimension mismatch");
        }
        PseudoMatrix { field, ambient_dim, elems, shape: Shape::Generating }
    }

    /// Module generated by plain vectors, all coefficients `O_K`.
    pub fn free(field: &FieldRef, vectors: &[Vec<AlgNum>]) -> Self {
        let dim = vectors.first().map_or(0, Vec::len);
        let elems = vectors
            .iter()
            .map(|v| PseudoElement { coeff: Ideal::one(field), vec: v.clone() })
            .collect();
        PseudoMatrix::new(field.clone(), dim, elems)
    }

    /// Coefficient ideals, in column order.
    pub fn ideals(&self) -> Vec<Ideal> {
        self.elems.iter().map(|e| e.coeff.clone()).collect()
    }

    /// Whether the module lies inside `O_K^n`: every product of an ideal
    /// basis element with the vector must have integral coordinates.
    pub fn is_integral(&self) -> bool {
        self.elems.iter().all(|e| {
            e.coeff
                .basis_elements()
                .iter()
                .all(|x| e.vec.iter().all(|c| self.field.mul(x, c).is_integral()))
        })
    }
}

pub(crate) fn vec_scale(f: &FieldRef, a: &AlgNum, v: &[AlgNum]) -> Vec<AlgNum> {
    v.iter().map(|c| f.mul(a, c)).collect()
}

pub(crate) fn vec_add(f: &FieldRef, a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub(crate) fn vec_sub(f: &FieldRef, a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

/// Pseudo-HNF of a full-rank pseudo-generating set.
///
/// Returns the canonical pseudo-basis `{(𝔠_i, h_i)}` of the same module with
/// `H = [h_1 … h_n]` unit upper triangular; the `𝔠_i` depend only on the
/// module.
pub fn pseudo_hnf(m: &PseudoMatrix) -> Result<PseudoMatrix, ModuleError> {
    let f = m.field.clone();
    let n = m.ambient_dim;
    let mut active: Vec<PseudoElement> =
        m.elems.iter().filter(|e| !e.vec.iter().all(AlgNum::is_zero)).cloned().collect();
    let mut pivots: Vec<PseudoElement> = Vec::new(); // deepest pivot row first
    for row in (0..n).rev() {
        let mut acc: Option<PseudoElement> = None;
        let mut rest: Vec<PseudoElement> = Vec::new();
        for e in active.drain(..) {
            if e.vec[row].is_zero() {
                rest.push(e);
                continue;
            }
            match acc.take() {
                None => acc = Some(e),
                Some(w) => {
                    let (new_acc, eliminated) = combine_columns(&f, &w, &e, row);
                    acc = Some(new_acc);
                    if !eliminated.vec.iter().all(AlgNum::is_zero) {
                        rest.push(eliminated);
                    }
                }
            }
        }
        active = rest;
        let Some(mut piv) = acc else {
            return Err(ModuleError::NotFullRank);
        };
        // Normalize the pivot entry to 1 by pushing content into the ideal.
        let a = piv.vec[row].clone();
        if a != f.one() {
            piv.coeff = piv.coeff.mul_element(&a);
            let inv = f.inv(&a).expect("pivot entry is nonzero");
            piv.vec = vec_scale(&f, &inv, &piv.vec);
        }
        pivots.push(piv);
    }
    pivots.reverse(); // pivot rows ascending: column j has pivot at row j
    // Canonical reduction of the above-diagonal entries: h_j[i] is unique
    // modulo 𝔠_i·𝔠_j^{-1}.
    for j in 1..n {
        for i in (0..j).rev() {
            let modulus = pivots[i].coeff.mul(&pivots[j].coeff.inverse());
            let x = pivots[j].vec[i].clone();
            let rep = modulus.reduce_mod(&x);
            let lambda = f.sub(&x, &rep);
            if lambda.is_zero() {
                continue;
            }
            let scaled = vec_scale(&f, &lambda, &pivots[i].vec);
            pivots[j].vec = vec_sub(&f, &pivots[j].vec, &scaled);
        }
    }
    Ok(PseudoMatrix { field: f, ambient_dim: n, elems: pivots, shape: Shape::PseudoBasis })
}

/// Cohen-style combination of two pseudo-elements at `row`: returns the new
/// accumulator (entry `1`, ideal `𝔡 = a𝔞 + b𝔟`) and the eliminated column
/// (entry `0`, ideal `𝔞𝔟𝔡^{-1}`), preserving
/// `𝔞u + 𝔟w = 𝔡w' + 𝔞𝔟𝔡^{-1}u'`.
fn combine_columns(
    f: &FieldRef,
    w: &PseudoElement, // accumulator
    u: &PseudoElement,
    row: usize,
) -> (PseudoElement, PseudoElement) {
    let b = w.vec[row].clone();
    let a = u.vec[row].clone();
    let a_ideal = u.coeff.mul_element(&a);
    let b_ideal = w.coeff.mul_element(&b);
    let d = a_ideal.add(&b_ideal);
    let d_inv = d.inverse();
    let aa = a_ideal.mul(&d_inv);
    let bb = b_ideal.mul(&d_inv);
    let (s, t) = ideals::split_one(&aa, &bb).expect("a𝔞𝔡⁻¹ and b𝔟𝔡⁻¹ are coprime");
    let lambda = f.div(&s, &a).expect("row entry is nonzero");
    let mu = f.div(&t, &b).expect("row entry is nonzero");
    let new_vec = vec_add(f, &vec_scale(f, &lambda, &u.vec), &vec_scale(f, &mu, &w.vec));
    debug_assert!(new_vec[row] == f.one());
    let elim_vec = vec_sub(f, &vec_scale(f, &b, &u.vec), &vec_scale(f, &a, &w.vec));
    debug_assert!(elim_vec[row].is_zero());
    let elim_ideal = u.coeff.mul(&w.coeff).mul(&d_inv);
    (
        PseudoElement { coeff: d, vec: new_vec },
        PseudoElement { coeff: elim_ideal, vec: elim_vec },
    )
}

/// Determinant of an `n×n` matrix over `K` given as rows, by Gaussian
/// elimination in the field.
fn k_det(f: &FieldRef, rows: &[Vec<AlgNum>]) -> AlgNum {
    let n = rows.len();
    let mut m: Vec<Vec<AlgNum>> = rows.to_vec();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return f.zero();
        };
        if p != c {
            m.swap(p, c);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[c][c].clone());
        let inv = f.inv(&m[c][c].clone()).expect("pivot nonzero");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = f.mul(&m[r][c], &inv);
            for k in c..n {
                let v = f.sub(&m[r][k], &f.mul(&factor, &m[c][k]));
                m[r][k] = v;
            }
        }
    }
    det
}

/// The determinantal ideal `𝔡 = Σ_J det(A_J)·Π_{j∈J} 𝔞_j` over all size-`n`
/// column subsets `J`; equals `Π 𝔠_i` of the pseudo-HNF.
pub fn determinantal_ideal(m: &PseudoMatrix) -> Result<Ideal, ModuleError> {
    let f = m.field.clone();
    let n = m.ambient_dim;
    let k = m.elems.len();
    if k < n {
        return Err(ModuleError::NotFullRank);
    }
    let mut acc: Option<Ideal> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vec<AlgNum>> = (0..n)
            .map(|i| subset.iter().map(|&j| m.elems[j].vec[i].clone()).collect())
            .collect();
        let det = k_det(&f, &rows);
        if !det.is_zero() {
            let mut term = Ideal::principal(&f, &det).expect("nonzero det");
            for &j in &subset {
                term = term.mul(&m.elems[j].coeff);
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        // Next size-n subset of {0, …, k−1} in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return acc.ok_or(ModuleError::NotFullRank);
            }
            i -= 1;
            if subset[i] != i + k - n {
                subset[i] += 1;
                for t in i + 1..n {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Expresses `v` over a pseudo-basis by back-substitution; returns the
/// coefficients `c_j` (with `v = Σ c_j h_j`) when every `c_j ∈ 𝔠_j`.
pub fn express_in_basis(
    basis: &PseudoMatrix,
    v: &[AlgNum],
) -> Result<Option<Vec<AlgNum>>, ModuleError> {
    assert_eq!(basis.shape, Shape::PseudoBasis, "requires a pseudo-basis");
    let f = &basis.field;
    let n = basis.ambient_dim;
    if v.len() != n {
        return Err(ModuleError::DimensionMismatch);
    }
    let mut work = v.to_vec();
    let mut coeffs = vec![f.zero(); n];
    for j in (0..n).rev() {
        let c = work[j].clone();
        if !c.is_zero() {
            let scaled = vec_scale(f, &c, &basis.elems[j].vec);
            work = vec_sub(f, &work, &scaled);
        }
        coeffs[j] = c;
    }
    debug_assert!(work.iter().all(AlgNum::is_zero));
    for (c, e) in coeffs.iter().zip(&basis.elems) {
        if !c.is_zero() && !e.coeff.contains(c) {
            return Ok(None);
        }
    }
    Ok(Some(coeffs))
}

/// Membership `v ∈ Σ 𝔞_i v_i` for a full-rank module.
pub fn module_contains(m: &PseudoMatrix, v: &[AlgNum]) -> Result<bool, ModuleError> {
    let basis = if m.shape == Shape::PseudoBasis { m.clone() } else { pseudo_hnf(m)? };
    Ok(express_in_basis(&basis, v)?.is_some())
}

/// Module equality via the canonical pseudo-HNF, cross-checked against
/// mutual membership of scaled generators.
pub fn module_equals(m1: &PseudoMatrix, m2: &PseudoMatrix) -> Result<bool, ModuleError> {
    if m1.ambient_dim != m2.ambient_dim {
        return Ok(false);
    }
    let b1 = pseudo_hnf(m1)?;
    let b2 = pseudo_hnf(m2)?;
    let canonical = b1.elems == b2.elems;
    let mutual = mutual_containment(m1, &b2)? && mutual_containment(m2, &b1)?;
    debug_assert_eq!(canonical, mutual, "pseudo-HNF canonicity violated");
    Ok(canonical && mutual)
}

fn mutual_containment(m: &PseudoMatrix, target_basis: &PseudoMatrix) -> Result<bool, ModuleError> {
    let f = &m.field;
    for e in &m.elems {
        for x in e.coeff.basis_elements() {
            let v = vec_scale(f, &x, &e.vec);
            if express_in_basis(target_basis, &v)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Upper bound `⌊log₂ N(𝔡)⌋` on the length of strictly increasing chains of
/// modules `M = M_1 ⊂ ⋯ ⊂ M_k ⊆ O_K^n` above the integral module `M`.
pub fn chain_bound(m: &PseudoMatrix) -> Result<u64, ModuleError> {
    if !m.is_integral() {
        return Err(ModuleError::NotIntegral);
    }
    let d = determinantal_ideal(m)?;
    let n = d.norm_integer().ok_or(ModuleError::NotIntegral)?;
    debug_assert!(n >= BigInt::one());
    Ok(n.bits() - 1)
}

/// The four elements of the constructive `𝔞 ⊕ 𝔟 ≅ O_K ⊕ 𝔞𝔟` isomorphism:
/// `a ∈ 𝔞`, `b ∈ 𝔟`, `c ∈ 𝔟^{-1}`, `d ∈ 𝔞^{-1}` with `ad − bc = 1`.
pub fn lemma_quadruple(
    aid: &Ideal,
    bid: &Ideal,
) -> Result<(AlgNum, AlgNum, AlgNum, AlgNum), ModuleError> {
    let f = aid.field().clone();
    // Scale to integral ideals.
    let da = BigRational::from_integer(aid.den().clone());
    let db = BigRational::from_integer(bid.den().clone());
    let a_int = aid.mul_element(&f.from_rational(da.clone()));
    let b_int = bid.mul_element(&f.from_rational(db.clone()));
    let alpha = ideals::coprime_representative(&a_int, &b_int)?;
    let quot = Ideal::principal(&f, &alpha)?.mul(&a_int.inverse());
    let (e, b_el) = ideals::split_one(&quot, &b_int)?;
    let c_el = if b_el.is_zero() { f.zero() } else { f.neg(&f.one()) };
    let d_el = f.div(&e, &alpha).expect("alpha nonzero");
    // Undo the scaling.
    let a_out = f.scale(&da.recip(), &alpha);
    let d_out = f.scale(&da, &d_el);
    let b_out = f.scale(&db.recip(), &b_el);
    let c_out = f.scale(&db, &c_el);
    debug_assert_eq!(f.sub(&f.mul(&a_out, &d_out), &f.mul(&b_out, &c_out)), f.one());
    Ok((a_out, b_out, c_out, d_out))
}

/// Rewrites `𝔞x + 𝔟y` as `O_K x' + 𝔞𝔟 y'` with
/// `(x' y') = (x y)·[[a, c], [b, d]]`.
pub fn split_pair(
    p: &PseudoElement,
    q: &PseudoElement,
) -> Result<(PseudoElement, PseudoElement), ModuleError> {
    let f = p.coeff.field().clone();
    assert_eq!(p.vec.len(), q.vec.len(), "ambient dimensions differ");
    let (a, b, c, d) = lemma_quadruple(&p.coeff, &q.coeff)?;
    let x = vec_add(&f, &vec_scale(&f, &a, &p.vec), &vec_scale(&f, &b, &q.vec));
    let y = vec_add(&f, &vec_scale(&f, &c, &p.vec), &vec_scale(&f, &d, &q.vec));
    Ok((
        PseudoElement { coeff: Ideal::one(&f), vec: x },
        PseudoElement { coeff: p.coeff.mul(&q.coeff), vec: y },
    ))
}

/// Left fold of [`split_pair`] over a pseudo-basis: a pseudo-generating set
/// `{(O_K, y_1), …, (O_K, y_{ℓ−1}), (Π𝔞_i, z)}` of the same module.
pub fn steinitz_form(m: &PseudoMatrix) -> Result<PseudoMatrix, ModuleError> {
    assert_eq!(m.shape, Shape::PseudoBasis, "requires a pseudo-basis");
    if m.elems.len() <= 1 {
        return Ok(m.clone());
    }
    let mut out: Vec<PseudoElement> = Vec::new();
    let mut current = m.elems[0].clone();
    for next in &m.elems[1..] {
        if current.coeff.is_one() {
            // Nothing to absorb: keep the free column as-is.
            out.push(std::mem::replace(&mut current, next.clone()));
            continue;
        }
        let (free, folded) = split_pair(&current, next)?;
        out.push(free);
        current = folded;
    }
    out.push(current);
    Ok(PseudoMatrix {
        field: m.field.clone(),
        ambient_dim: m.ambient_dim,
        elems: out,
        shape: Shape::PseudoBasis,
    })
}

/// Attempts to exhibit a single generator of the residual ideal.
///
/// Complete for `Q` and for imaginary quadratic fields, where a generator is
/// an element of norm exactly `N(𝔟)` and the norm form is positive definite,
/// so a finite exhaustive scan decides principality. For other fields the
/// check is opportunistic (unit ideal, basis columns, two-element pairs) and
/// may return `None` for a principal ideal; callers then fall back to the
/// two-generator representation.
pub fn residual_generator(b: &Ideal) -> Option<AlgNum> {
    let f = b.field().clone();
    if b.is_one() {
        return Some(f.one());
    }
    let d = f.degree();
    if d == 1 {
        return Some(b.basis_elements()[0].clone());
    }
    if d == 2 && f.discriminant().is_negative() {
        return imaginary_quadratic_generator(b);
    }
    for cand in b.basis_elements() {
        if cand.is_zero() {
            continue;
        }
        if &Ideal::principal(&f, &cand).ok()? == b {
            return Some(cand);
        }
    }
    if b.is_integral() {
        if let Ok((x1, x2)) = ideals::two_element(b) {
            for cand in [x1, x2] {
                if &Ideal::principal(&f, &cand).ok()? == b {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Norm-equation decision in an imaginary quadratic field.
///
/// `|N(·)|` is a positive definite quadratic form on the ideal lattice, the
/// minimum over nonzero elements is at least `N(𝔟)` (every principal ideal
/// `(α) ⊆ 𝔟` has norm a multiple of `N(𝔟)`), and the minimum equals `N(𝔟)`
/// exactly when `𝔟` is principal, with any minimizer a generator. The
/// shortest vector comes out of exact Gauss–Lagrange reduction of the
/// rank-2 basis under the norm form.
fn imaginary_quadratic_generator(b: &Ideal) -> Option<AlgNum> {
    let f = b.field().clone();
    let basis = b.basis_elements();
    let mut u = basis[0].clone();
    let mut v = basis[1].clone();
    // Bilinear form attached to |N|: ⟨x, y⟩ = Tr(x·ȳ)/2 with ȳ = Tr(y) − y.
    let pairing = |x: &AlgNum, y: &AlgNum| -> BigRational {
        let conj = f.sub(&f.from_rational(f.trace(y)), y);
        f.trace(&f.mul(x, &conj)) / BigRational::from_integer(BigInt::from(2))
    };
    if f.norm(&v) < f.norm(&u) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let mu = pairing(&u, &v) / f.norm(&u);
        let r = round_nearest(&mu);
        if !r.is_zero() {
            let shift = f.scale(&BigRational::from_integer(r), &u);
            v = f.sub(&v, &shift);
        }
        if f.norm(&v) < f.norm(&u) {
            std::mem::swap(&mut u, &mut v);
        } else {
            break;
        }
    }
    if f.norm(&u) == b.norm() {
        debug_assert_eq!(&Ideal::principal(&f, &u).unwrap(), b);
        Some(u)
    } else {
        None
    }
}

fn round_nearest(q: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (q + half).floor().to_integer()
}

/// Generating set of at most `rank + 1` integral vectors for an integral
/// module given by a pseudo-basis: the iterated split leaves one residual
/// ideal, which is either exhibited principal (size `rank`) or represented
/// by two generators (size `rank + 1`).
pub fn generating_set(m: &PseudoMatrix) -> Result<Vec<Vec<AlgNum>>, ModuleError> {
    assert_eq!(m.shape, Shape::PseudoBasis, "requires a pseudo-basis");
    if !m.is_integral() {
        return Err(ModuleError::NotIntegral);
    }
    let f = m.field.clone();
    let st = steinitz_form(m)?;
    let ell = st.elems.len();
    let mut out: Vec<Vec<AlgNum>> = Vec::with_capacity(ell + 1);
    for e in &st.elems[..ell - 1] {
        debug_assert!(e.coeff.is_one());
        out.push(e.vec.clone());
    }
    let last = &st.elems[ell - 1];
    let residual = &last.coeff;
    match residual_generator(residual) {
        Some(g) => out.push(vec_scale(&f, &g, &last.vec)),
        None => {
            let (x1, x2) = ideals::two_element(residual)?;
            out.push(vec_scale(&f, &x1, &last.vec));
            out.push(vec_scale(&f, &x2, &last.vec));
        }
    }
    Ok(out)
}

/// Integral coefficients `c_j ∈ O_K` with `Σ c_j gens[j] = target`, when they
/// exist. The bilinear system is blown up to one integer linear system via
/// the regular representation.
pub fn solve_integral_combination(
    f: &FieldRef,
    gens: &[Vec<AlgNum>],
    target: &[AlgNum],
) -> Option<Vec<AlgNum>> {
    let d = f.degree();
    let k = gens.len();
    let n = target.len();
    if k == 0 {
        return target.iter().all(AlgNum::is_zero).then(Vec::new);
    }
    // Rows: n blocks of d equations; columns: k blocks of d unknowns.
    let mut blocks: Vec<Vec<IntMatrix>> = Vec::with_capacity(n);
    for row in 0..n {
        let mut line = Vec::with_capacity(k);
        for g in gens {
            let r = f.regular_representation(&g[row]);
            line.push(r.to_integer()?);
        }
        blocks.push(line);
    }
    let a = IntMatrix::from_fn(n * d, k * d, |i, j| blocks[i / d][j / d][(i % d, j % d)].clone());
    let mut b = Vec::with_capacity(n * d);
    for t in target {
        let coords = t.int_coords()?;
        b.extend(coords);
    }
    let xi = zlattice::solve_integer(&a, &b)?;
    Some(
        (0..k)
            .map(|j| {
                f.from_coords(
                    xi[j * d..(j + 1) * d].iter().cloned().map(BigRational::from_integer).collect(),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e_vec(f: &FieldRef, n: usize, i: usize) -> Vec<AlgNum> {
        (0..n).map(|k| if k == i { f.one() } else { f.zero() }).collect()
    }

    fn ints(f: &FieldRef, vals: &[i64]) -> Vec<AlgNum> {
        vals.iter().map(|&v| f.from_int(v)).collect()
    }

    fn ideal_3_2mw(f: &FieldRef) -> Ideal {
        Ideal::from_generators(f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap()
    }

    #[test]
    fn pseudo_hnf_identity() {
        let f = NumberField::quadratic(-5).unwrap();
        let m = PseudoMatrix::free(&f, &[e_vec(&f, 2, 0), e_vec(&f, 2, 1)]);
        let b = pseudo_hnf(&m).unwrap();
        assert_eq!(b.elems.len(), 2);
        for (j, e) in b.elems.iter().enumerate() {
            assert!(e.coeff.is_one());
            assert_eq!(e.vec, e_vec(&f, 2, j));
        }
    }

    #[test]
    fn pseudo_hnf_rank_one_absorbs_content() {
        // n = 1: {((3), [1]), ((2−ω), [1])} collapses to {((3, 2−ω), [1])}.
        let f = NumberField::quadratic(-5).unwrap();
        let i3 = Ideal::principal(&f, &f.from_int(3)).unwrap();
        let i2mw = Ideal::principal(&f, &f.from_int_coords(&[2, -1])).unwrap();
        let m = PseudoMatrix::new(
            f.clone(),
            1,
            vec![
                PseudoElement { coeff: i3, vec: vec![f.one()] },
                PseudoElement { coeff: i2mw, vec: vec![f.one()] },
            ],
        );
        let b = pseudo_hnf(&m).unwrap();
        assert_eq!(b.elems.len(), 1);
        assert_eq!(b.elems[0].coeff, ideal_3_2mw(&f));
        assert_eq!(b.elems[0].vec, vec![f.one()]);
    }

    #[test]
    fn pseudo_hnf_norm_example_and_determinantal_ideal() {
        // {(O_K, (3,0)), (O_K, (1,1))} over Z[i√5]: unit-triangular basis and
        // Π𝔠_i equal to the principal ideal (3) — the determinantal-ideal
        // cross-check in both directions.
        let f = NumberField::quadratic(-5).unwrap();
        let m = PseudoMatrix::free(&f, &[ints(&f, &[3, 0]), ints(&f, &[1, 1])]);
        let b = pseudo_hnf(&m).unwrap();
        assert_eq!(b.elems.len(), 2);
        assert_eq!(b.elems[0].vec[0], f.one());
        assert!(b.elems[0].vec[1].is_zero());
        assert_eq!(b.elems[1].vec[1], f.one());
        let prod = b.elems[0].coeff.mul(&b.elems[1].coeff);
        let det = determinantal_ideal(&m).unwrap();
        assert_eq!(det, prod);
        assert_eq!(det, Ideal::principal(&f, &f.from_int(3)).unwrap());
        assert!(module_equals(&m, &b).unwrap());
    }

    #[test]
    fn determinantal_ideal_diag_case() {
        let q = NumberField::rationals();
        let m = PseudoMatrix::free(&q, &[ints(&q, &[2, 0]), ints(&q, &[0, 2])]);
        assert_eq!(determinantal_ideal(&m).unwrap(), Ideal::principal(&q, &q.from_int(4)).unwrap());
        let id = PseudoMatrix::free(&q, &[e_vec(&q, 2, 0), e_vec(&q, 2, 1)]);
        assert!(determinantal_ideal(&id).unwrap().is_one());
    }

    #[test]
    fn module_contains_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let m = PseudoMatrix::free(&f, &[ints(&f, &[3, 0]), ints(&f, &[1, 1])]);
        assert!(module_contains(&m, &[f.zero(), f.zero()]).unwrap());
        // Explicit O_K combination: (2, −1) = (3,0) − (1,1).
        assert!(module_contains(&m, &[f.from_int(2), f.from_int(-1)]).unwrap());
        assert!(!module_contains(&m, &[f.one(), f.zero()]).unwrap());
        assert_eq!(module_contains(&m, &[f.one()]).unwrap_err(), ModuleError::DimensionMismatch);
    }

    #[test]
    fn module_equals_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let m = PseudoMatrix::free(&f, &[ints(&f, &[3, 0]), ints(&f, &[1, 1])]);
        assert!(module_equals(&m, &m).unwrap());
        let full = PseudoMatrix::free(&f, &[e_vec(&f, 2, 0), e_vec(&f, 2, 1)]);
        assert!(!module_equals(&m, &full).unwrap());
        // Order of generators does not matter.
        let permuted = PseudoMatrix::free(&f, &[ints(&f, &[1, 1]), ints(&f, &[3, 0])]);
        assert!(module_equals(&m, &permuted).unwrap());
    }

    #[test]
    fn pseudo_hnf_canonical_under_remixes() {
        let f = NumberField::quadratic(-5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..15 {
            let g1 = ints(&f, &[rng.gen_range(1..5), rng.gen_range(-3..4)]);
            let g2 = ints(&f, &[rng.gen_range(-3..4), rng.gen_range(1..5)]);
            let m = PseudoMatrix::free(&f, &[g1.clone(), g2.clone()]);
            let Ok(b) = pseudo_hnf(&m) else { continue };
            // Add a redundant generator and remix: the output must be identical.
            let extra = vec_add(&f, &g1, &vec_scale(&f, &f.from_int(rng.gen_range(-2..3)), &g2));
            let remixed = PseudoMatrix::free(&f, &[g2, extra, g1]);
            let b2 = pseudo_hnf(&remixed).unwrap();
            assert_eq!(b.elems, b2.elems);
            let det = determinantal_ideal(&m).unwrap();
            let prod = b.elems.iter().fold(Ideal::one(&f), |acc, e| acc.mul(&e.coeff));
            assert_eq!(det, prod);
        }
    }

    #[test]
    fn chain_bound_cases() {
        let q = NumberField::rationals();
        let full = PseudoMatrix::free(&q, &[e_vec(&q, 2, 0), e_vec(&q, 2, 1)]);
        assert_eq!(chain_bound(&full).unwrap(), 0);
        // diag(4) over Q, n = 1: bound 2 matches the chain (4) ⊂ (2) ⊂ (1).
        let m4 = PseudoMatrix::free(&q, &[ints(&q, &[4])]);
        assert_eq!(chain_bound(&m4).unwrap(), 2);
        // diag(2^k): the bound is exactly k and the chain (2^k) ⊂ … ⊂ (1)
        // realizes it.
        for k in 0..6u32 {
            let m = PseudoMatrix::free(&q, &[ints(&q, &[2i64.pow(k)])]);
            assert_eq!(chain_bound(&m).unwrap(), k as u64);
            for i in 0..k {
                let bigger = Ideal::principal(&q, &q.from_int(2i64.pow(i))).unwrap();
                let smaller = Ideal::principal(&q, &q.from_int(2i64.pow(i + 1))).unwrap();
                assert!(bigger.contains(&q.from_int(2i64.pow(i + 1))));
                assert_ne!(bigger, smaller);
            }
        }
        let f = NumberField::quadratic(-5).unwrap();
        let m = PseudoMatrix::free(&f, &[ints(&f, &[3, 0]), ints(&f, &[1, 1])]);
        // N(𝔡) = N((3)) = 9: bound ⌊log₂ 9⌋ = 3.
        assert_eq!(chain_bound(&m).unwrap(), 3);
        // Fractional input is rejected.
        let half = PseudoMatrix::new(
            q.clone(),
            1,
            vec![PseudoElement {
                coeff: Ideal::principal(&q, &q.from_int(2)).unwrap().inverse(),
                vec: vec![q.one()],
            }],
        );
        assert_eq!(chain_bound(&half).unwrap_err(), ModuleError::NotIntegral);
    }

    #[test]
    fn quadruple_trivial_and_rational() {
        let f = NumberField::quadratic(-5).unwrap();
        let one = Ideal::one(&f);
        let (a, b, c, d) = lemma_quadruple(&one, &one).unwrap();
        assert_eq!((a, b, c, d), (f.one(), f.zero(), f.zero(), f.one()));

        let q = NumberField::rationals();
        let i2 = Ideal::principal(&q, &q.from_int(2)).unwrap();
        let i3 = Ideal::principal(&q, &q.from_int(3)).unwrap();
        let (a, b, c, d) = lemma_quadruple(&i2, &i3).unwrap();
        assert!(i2.contains(&a) && i3.contains(&b));
        assert!(i3.inverse().contains(&c) && i2.inverse().contains(&d));
        assert_eq!(q.sub(&q.mul(&a, &d), &q.mul(&b, &c)), q.one());
    }

    #[test]
    fn quadruple_for_nonprincipal_pair() {
        // 𝔞 = (3, 2−ω), 𝔟 = 𝔞^{-1}: the four memberships and ad − bc = 1,
        // and the resulting map really is an isomorphism onto O_K².
        let f = NumberField::quadratic(-5).unwrap();
        let aid = ideal_3_2mw(&f);
        let bid = aid.inverse();
        let (a, b, c, d) = lemma_quadruple(&aid, &bid).unwrap();
        assert!(aid.contains(&a));
        assert!(bid.contains(&b));
        assert!(bid.inverse().contains(&c));
        assert!(aid.inverse().contains(&d));
        assert_eq!(f.sub(&f.mul(&a, &d), &f.mul(&b, &c)), f.one());
        // φ(s, t) = (ds − ct, at − bs) maps 𝔞 ⊕ 𝔞^{-1} onto O_K².
        let image = PseudoMatrix::new(
            f.clone(),
            2,
            vec![
                PseudoElement { coeff: aid.clone(), vec: vec![d.clone(), f.neg(&b)] },
                PseudoElement { coeff: bid, vec: vec![f.neg(&c), a.clone()] },
            ],
        );
        let okk = PseudoMatrix::free(&f, &[e_vec(&f, 2, 0), e_vec(&f, 2, 1)]);
        assert!(module_equals(&image, &okk).unwrap());
    }

    #[test]
    fn split_pair_preserves_module() {
        let f = NumberField::quadratic(-5).unwrap();
        let aid = ideal_3_2mw(&f);
        let bid = aid.inverse();
        let p = PseudoElement { coeff: aid, vec: ints(&f, &[1, 0]) };
        let q = PseudoElement { coeff: bid, vec: ints(&f, &[0, 1]) };
        let (r1, r2) = split_pair(&p, &q).unwrap();
        assert!(r1.coeff.is_one());
        assert!(r2.coeff.is_one()); // 𝔞·𝔞^{-1} = O_K
        let before = PseudoMatrix::new(f.clone(), 2, vec![p, q]);
        let after = PseudoMatrix::new(f.clone(), 2, vec![r1, r2]);
        assert!(module_equals(&before, &after).unwrap());
    }

    #[test]
    fn steinitz_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        // All ideals already trivial: unchanged.
        let free =
            pseudo_hnf(&PseudoMatrix::free(&f, &[e_vec(&f, 2, 0), e_vec(&f, 2, 1)])).unwrap();
        let st = steinitz_form(&free).unwrap();
        assert_eq!(st.elems, free.elems);
        // Rank 1: unchanged.
        let single = pseudo_hnf(&PseudoMatrix::free(&f, &[ints(&f, &[2])])).unwrap();
        assert_eq!(steinitz_form(&single).unwrap().elems, single.elems);
        // {(𝔞, v1), (𝔞^{-1}, v2)}: both output ideals become O_K.
        let aid = ideal_3_2mw(&f);
        let m = PseudoMatrix {
            field: f.clone(),
            ambient_dim: 2,
            elems: vec![
                PseudoElement { coeff: aid.clone(), vec: ints(&f, &[1, 0]) },
                PseudoElement { coeff: aid.inverse(), vec: ints(&f, &[0, 1]) },
            ],
            shape: Shape::PseudoBasis,
        };
        let st = steinitz_form(&m).unwrap();
        assert!(st.elems[0].coeff.is_one());
        assert!(st.elems[1].coeff.is_one());
        assert!(module_equals(&m, &st).unwrap());
    }

    #[test]
    fn generating_set_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        // Free module: the basis vectors themselves.
        let free =
            pseudo_hnf(&PseudoMatrix::free(&f, &[e_vec(&f, 2, 0), e_vec(&f, 2, 1)])).unwrap();
        let gens = generating_set(&free).unwrap();
        assert_eq!(gens, vec![e_vec(&f, 2, 0), e_vec(&f, 2, 1)]);

        // Rank-1 module 𝔞·(1) for the non-principal 𝔞: two generators that
        // regenerate exactly the worked ideal.
        let aid = ideal_3_2mw(&f);
        let m = PseudoMatrix {
            field: f.clone(),
            ambient_dim: 1,
            elems: vec![PseudoElement { coeff: aid.clone(), vec: vec![f.one()] }],
            shape: Shape::PseudoBasis,
        };
        let gens = generating_set(&m).unwrap();
        assert_eq!(gens.len(), 2);
        let regenerated =
            Ideal::from_generators(&f, &[gens[0][0].clone(), gens[1][0].clone()]).unwrap();
        assert_eq!(regenerated, aid);

        // A principal residual over Q is detected and yields rank-many vectors.
        let q = NumberField::rationals();
        let m = pseudo_hnf(&PseudoMatrix::new(
            q.clone(),
            2,
            vec![
                PseudoElement { coeff: Ideal::one(&q), vec: ints(&q, &[1, 0]) },
                PseudoElement {
                    coeff: Ideal::principal(&q, &q.from_int(2)).unwrap(),
                    vec: ints(&q, &[0, 1]),
                },
            ],
        ))
        .unwrap();
        let gens = generating_set(&m).unwrap();
        assert_eq!(gens, vec![ints(&q, &[1, 0]), ints(&q, &[0, 2])]);
    }

    #[test]
    fn generating_set_spans_same_module() {
        let f = NumberField::quadratic(-5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..10 {
            let vectors = [
                ints(&f, &[rng.gen_range(1..4), rng.gen_range(-2..3)]),
                ints(&f, &[rng.gen_range(-2..3), rng.gen_range(1..4)]),
            ];
            let aid = ideal_3_2mw(&f);
            let m = PseudoMatrix::new(
                f.clone(),
                2,
                vec![
                    PseudoElement { coeff: aid.clone(), vec: vectors[0].clone() },
                    PseudoElement { coeff: Ideal::one(&f), vec: vectors[1].clone() },
                ],
            );
            let Ok(basis) = pseudo_hnf(&m) else { continue };
            if !basis.is_integral() {
                continue;
            }
            let gens = generating_set(&basis).unwrap();
            assert!(gens.len() <= basis.elems.len() + 1);
            let span = PseudoMatrix::free(&f, &gens);
            assert!(module_equals(&span, &m).unwrap());
        }
    }

    #[test]
    fn residual_generator_imaginary_quadratic() {
        let gi = NumberField::quadratic(-1).unwrap();
        // (1+2i) is principal in Z[i]; its HNF columns (5 and 3+i) are not
        // generators, so the norm-equation search has to find one.
        let a = Ideal::principal(&gi, &gi.from_int_coords(&[1, 2])).unwrap();
        let g = residual_generator(&a).expect("principal ideal must be detected");
        assert_eq!(Ideal::principal(&gi, &g).unwrap(), a);

        let f = NumberField::quadratic(-5).unwrap();
        assert!(residual_generator(&ideal_3_2mw(&f)).is_none());
        let p = Ideal::principal(&f, &f.from_int_coords(&[1, 1])).unwrap();
        let g = residual_generator(&p).expect("principal");
        assert_eq!(Ideal::principal(&f, &g).unwrap(), p);
    }

    #[test]
    fn solve_integral_combination_cases() {
        let f = NumberField::quadratic(-5).unwrap();
        let gens = vec![ints(&f, &[3, 0]), ints(&f, &[1, 1])];
        let target = ints(&f, &[2, -1]);
        let c = solve_integral_combination(&f, &gens, &target).unwrap();
        let mut acc = vec![f.zero(), f.zero()];
        for (ci, g) in c.iter().zip(&gens) {
            acc = vec_add(&f, &acc, &vec_scale(&f, ci, g));
        }
        assert_eq!(acc, target);
        assert!(solve_integral_combination(&f, &gens, &[f.one(), f.zero()]).is_none());
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        let q = NumberField::rationals();
        let m = PseudoMatrix::free(&q, &[ints(&q, &[1, 2]), ints(&q, &[2, 4])]);
        assert_eq!(pseudo_hnf(&m).unwrap_err(), ModuleError::NotFullRank);
    }
}
