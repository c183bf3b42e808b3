//! Weighted automata over the field `K`: evaluation, forward and backward
//! bases, conjugation by a matrix, minimization, and exact equivalence with
//! counterexample extraction.
//!
//! The convention is fixed once: configurations are row vectors, `init` is a
//! row, `final` is a column, and reading a word multiplies transition
//! matrices on the right, so `A(▷w) = init·A(σ_1)⋯A(σ_k)`. Words are stored
//! as sequences of indices into the automaton's alphabet and enumerated in
//! length-first, then alphabet order everywhere, which makes every word list
//! and every returned counterexample deterministic.
//!
//! Automata with zero states are legal values (they compute the zero
//! language), which keeps minimization total.
//!
//! ```
//! use okwa::fixtures::example1_automaton;
//! use okwa::wautomata::{equiv_counterexample, minimize_k};
//!
//! // The 3-state integral encoding of (3, 2−i√5) has a 2-state minimal
//! // automaton once fractions are allowed.
//! let a = example1_automaton();
//! let m = minimize_k(&a).unwrap();
//! assert_eq!((a.n_states, m.n_states), (3, 2));
//! assert!(equiv_counterexample(&a, &m).unwrap().is_none());
//! ```

use crate::numfield::{AlgNum, FieldRef};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("word contains a symbol outside the alphabet")]
    UnknownSymbol,
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("automata belong to different fields")]
    FieldMismatch,
    #[error("matrix is not a morphism from or to any automaton")]
    NoConjugate,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// Word over an automaton alphabet, as letter indices.
pub type Word = Vec<usize>;

/// Renders a word through an alphabet.
pub fn word_to_string(alphabet: &[char], w: &[usize]) -> String {
    w.iter().map(|&i| alphabet[i]).collect()
}

/// Parses a string into letter indices over `alphabet`.
pub fn parse_word(alphabet: &[char], s: &str) -> Result<Word, AutomatonError> {
    s.chars()
        .map(|c| alphabet.iter().position(|&a| a == c).ok_or(AutomatonError::UnknownSymbol))
        .collect()
}

/// Dense matrix over `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<AlgNum>,
}

impl KMat {
    pub fn zero(f: &FieldRef, rows: usize, cols: usize) -> Self {
        KMat { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity(f: &FieldRef, n: usize) -> Self {
        let mut m = KMat::zero(f, n, n);
        for i in 0..n {
            m[(i, i)] = f.one();
        }
        m
    }

    pub fn from_rows(f: &FieldRef, rows: &[Vec<AlgNum>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = KMat::zero(f, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_columns(f: &FieldRef, cols: &[Vec<AlgNum>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = KMat::zero(f, r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> Vec<AlgNum> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<AlgNum> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self, f: &FieldRef) -> KMat {
        let mut m = KMat::zero(f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, f: &FieldRef, other: &KMat) -> KMat {
        assert_eq!(self.cols, other.rows);
        let mut m = KMat::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                        acc = f.add(&acc, &f.mul(&self[(i, k)], &other[(k, j)]));
                    }
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(AlgNum::is_integral)
    }
}

impl std::ops::Index<(usize, usize)> for KMat {
    type Output = AlgNum;
    fn index(&self, (i, j): (usize, usize)) -> &AlgNum {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for KMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut AlgNum {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn row_times_mat(f: &FieldRef, row: &[AlgNum], m: &KMat) -> Vec<AlgNum> {
    assert_eq!(row.len(), m.rows);
    (0..m.cols)
        .map(|j| {
            let mut acc = f.zero();
            for (k, r) in row.iter().enumerate() {
                if !r.is_zero() && !m[(k, j)].is_zero() {
                    acc = f.add(&acc, &f.mul(r, &m[(k, j)]));
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn mat_times_col(f: &FieldRef, m: &KMat, col: &[AlgNum]) -> Vec<AlgNum> {
    assert_eq!(col.len(), m.cols);
    (0..m.rows)
        .map(|i| {
            let mut acc = f.zero();
            for (k, c) in col.iter().enumerate() {
                if !c.is_zero() && !m[(i, k)].is_zero() {
                    acc = f.add(&acc, &f.mul(&m[(i, k)], c));
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn dot(f: &FieldRef, a: &[AlgNum], b: &[AlgNum]) -> AlgNum {
    assert_eq!(a.len(), b.len());
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

/// Incremental reduced row echelon over `K`, tracking how each echelon row
/// is expressed over the vectors that were inserted successfully.
pub(crate) struct KEchelon {
    f: FieldRef,
    dim: usize,
    /// (pivot column, reduced row, expression over inserted originals)
    rows: Vec<(usize, Vec<AlgNum>, Vec<AlgNum>)>,
}

impl KEchelon {
    pub fn new(f: &FieldRef, dim: usize) -> Self {
        KEchelon { f: f.clone(), dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot coordinates of the echelon rows, ascending.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(c, _, _)| *c).collect();
        p.sort_unstable();
        p
    }

    fn reduce(&self, v: &[AlgNum]) -> (Vec<AlgNum>, Vec<AlgNum>) {
        let f = &self.f;
        let mut r = v.to_vec();
        let mut coeffs = vec![f.zero(); self.rows.len()];
        for (idx, (p, row, _)) in self.rows.iter().enumerate() {
            if r[*p].is_zero() {
                continue;
            }
            let factor = r[*p].clone();
            for j in 0..self.dim {
                if !row[j].is_zero() {
                    let nv = f.sub(&r[j], &f.mul(&factor, &row[j]));
                    r[j] = nv;
                }
            }
            coeffs[idx] = factor;
        }
        (r, coeffs)
    }

    /// Coefficients over the inserted vectors when `v` lies in their span.
    pub fn express(&self, v: &[AlgNum]) -> Option<Vec<AlgNum>> {
        let (r, coeffs) = self.reduce(v);
        if !r.iter().all(AlgNum::is_zero) {
            return None;
        }
        let f = &self.f;
        let mut out = vec![f.zero(); self.rows.len()];
        for (idx, (_, _, expr)) in self.rows.iter().enumerate() {
            if coeffs[idx].is_zero() {
                continue;
            }
            for (k, e) in expr.iter().enumerate() {
                if !e.is_zero() {
                    let nv = f.add(&out[k], &f.mul(&coeffs[idx], e));
                    out[k] = nv;
                }
            }
        }
        Some(out)
    }

    /// Inserts `v` if it is independent of the rows so far; returns whether
    /// the rank grew.
    pub fn try_insert(&mut self, v: &[AlgNum]) -> bool {
        assert_eq!(v.len(), self.dim);
        let f = self.f.clone();
        let (r, coeffs) = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.rows.len();
        // Expression of r over the originals: e_k − Σ coeffs[i]·expr_i.
        let mut expr = vec![f.zero(); k + 1];
        expr[k] = f.one();
        for (idx, (_, _, e)) in self.rows.iter().enumerate() {
            if coeffs[idx].is_zero() {
                continue;
            }
            for (t, v) in e.iter().enumerate() {
                if !v.is_zero() {
                    let nv = f.sub(&expr[t], &f.mul(&coeffs[idx], v));
                    expr[t] = nv;
                }
            }
        }
        let inv = f.inv(&r[pivot]).expect("pivot nonzero");
        let row: Vec<AlgNum> = r.iter().map(|x| f.mul(&inv, x)).collect();
        let expr: Vec<AlgNum> = expr.iter().map(|x| f.mul(&inv, x)).collect();
        // Keep the system fully reduced: clear the new pivot from old rows.
        for (_, orow, oexpr) in self.rows.iter_mut() {
            if orow[pivot].is_zero() {
                continue;
            }
            let factor = orow[pivot].clone();
            for j in 0..self.dim {
                if !row[j].is_zero() {
                    let nv = f.sub(&orow[j], &f.mul(&factor, &row[j]));
                    orow[j] = nv;
                }
            }
            oexpr.resize(k + 1, f.zero());
            for (t, v) in expr.iter().enumerate() {
                if !v.is_zero() {
                    let nv = f.sub(&oexpr[t], &f.mul(&factor, v));
                    oexpr[t] = nv;
                }
            }
        }
        for (_, _, oexpr) in self.rows.iter_mut() {
            oexpr.resize(k + 1, f.zero());
        }
        self.rows.push((pivot, row, expr));
        true
    }
}

/// Solves `A·X = B` over `K`; free variables are set to zero.
pub(crate) fn k_solve(f: &FieldRef, a: &KMat, b: &KMat) -> Option<KMat> {
    assert_eq!(a.rows, b.rows);
    let mut ech = KEchelon::new(f, a.rows);
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..a.cols {
        if ech.try_insert(&a.column(j)) {
            kept.push(j);
        }
    }
    let mut x = KMat::zero(f, a.cols, b.cols);
    for j in 0..b.cols {
        let coeffs = ech.express(&b.column(j))?;
        for (t, &orig) in kept.iter().enumerate() {
            x[(orig, j)] = coeffs[t].clone();
        }
    }
    Some(x)
}

/// Weighted automaton over `K` with one transition matrix per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAutomaton {
    pub field: FieldRef,
    pub alphabet: Vec<char>,
    pub n_states: usize,
    pub init: Vec<AlgNum>,
    pub trans: Vec<KMat>,
    pub final_: Vec<AlgNum>,
    pub integral: bool,
}

impl WeightedAutomaton {
    pub fn new(
        field: FieldRef,
        alphabet: Vec<char>,
        init: Vec<AlgNum>,
        trans: Vec<KMat>,
        final_: Vec<AlgNum>,
    ) -> Result<Self, AutomatonError> {
        let n = init.len();
        if alphabet.is_empty() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[i + 1..].contains(c) {
                return Err(AutomatonError::AlphabetMismatch);
            }
        }
        if trans.len() != alphabet.len() || final_.len() != n {
            return Err(AutomatonError::DimensionMismatch);
        }
        for t in &trans {
            if t.rows != n || t.cols != n {
                return Err(AutomatonError::DimensionMismatch);
            }
        }
        let integral = init.iter().all(AlgNum::is_integral)
            && final_.iter().all(AlgNum::is_integral)
            && trans.iter().all(KMat::is_integral);
        Ok(WeightedAutomaton { field, alphabet, n_states: n, init, trans, final_, integral })
    }

    /// The zero-language automaton on the given alphabet (no states).
    pub fn zero(field: &FieldRef, alphabet: Vec<char>) -> Self {
        let trans = alphabet.iter().map(|_| KMat::zero(field, 0, 0)).collect();
        WeightedAutomaton::new(field.clone(), alphabet, vec![], trans, vec![]).unwrap()
    }

    fn check_word(&self, w: &[usize]) -> Result<(), AutomatonError> {
        if w.iter().any(|&i| i >= self.alphabet.len()) {
            return Err(AutomatonError::UnknownSymbol);
        }
        Ok(())
    }

    /// Configuration `A(▷w) = init·A(σ_1)⋯A(σ_k)`.
    pub fn config(&self, w: &[usize]) -> Result<Vec<AlgNum>, AutomatonError> {
        self.check_word(w)?;
        let mut c = self.init.clone();
        for &s in w {
            c = row_times_mat(&self.field, &c, &self.trans[s]);
        }
        Ok(c)
    }

    /// Observation column `A(w⊲) = A(σ_1)⋯A(σ_k)·final`.
    pub fn observation(&self, w: &[usize]) -> Result<Vec<AlgNum>, AutomatonError> {
        self.check_word(w)?;
        let mut c = self.final_.clone();
        for &s in w.iter().rev() {
            c = mat_times_col(&self.field, &self.trans[s], &c);
        }
        Ok(c)
    }

    /// The value `⟦A⟧(w) = A(▷w⊲)`.
    pub fn eval(&self, w: &[usize]) -> Result<AlgNum, AutomatonError> {
        Ok(dot(&self.field, &self.config(w)?, &self.final_))
    }

    /// Recomputed integrality of all entries.
    pub fn recheck_integral(&self) -> bool {
        self.init.iter().all(AlgNum::is_integral)
            && self.final_.iter().all(AlgNum::is_integral)
            && self.trans.iter().all(KMat::is_integral)
    }
}

/// Prefix-closed words whose configurations form a basis of the forward
/// space, discovered breadth-first in (length, alphabet) order. The word `ε`
/// is always listed, even for the zero configuration.
pub fn forward_words(a: &WeightedAutomaton) -> Vec<Word> {
    forward_basis(a).0
}

pub(crate) fn forward_basis(a: &WeightedAutomaton) -> (Vec<Word>, Vec<Vec<AlgNum>>) {
    let f = &a.field;
    let mut ech = KEchelon::new(f, a.n_states);
    let mut basis_words: Vec<Word> = Vec::new();
    let mut configs: Vec<Vec<AlgNum>> = Vec::new();
    let mut queue: Vec<(Word, Vec<AlgNum>)> = Vec::new();
    if ech.try_insert(&a.init) {
        basis_words.push(vec![]);
        configs.push(a.init.clone());
        queue.push((vec![], a.init.clone()));
    }
    let mut head = 0;
    while head < queue.len() {
        let (w, c) = queue[head].clone();
        head += 1;
        for s in 0..a.alphabet.len() {
            let next = row_times_mat(f, &c, &a.trans[s]);
            if ech.try_insert(&next) {
                let mut nw = w.clone();
                nw.push(s);
                basis_words.push(nw.clone());
                configs.push(next.clone());
                queue.push((nw, next));
            }
        }
    }
    let words = if basis_words.is_empty() { vec![vec![]] } else { basis_words };
    (words, configs)
}

/// Suffix-closed words whose observation columns form a basis of the
/// backward space, growing words on the left.
pub fn backward_words(a: &WeightedAutomaton) -> Vec<Word> {
    backward_basis(a).0
}

pub(crate) fn backward_basis(a: &WeightedAutomaton) -> (Vec<Word>, Vec<Vec<AlgNum>>) {
    let f = &a.field;
    let mut ech = KEchelon::new(f, a.n_states);
    let mut basis_words: Vec<Word> = Vec::new();
    let mut obs: Vec<Vec<AlgNum>> = Vec::new();
    let mut queue: Vec<(Word, Vec<AlgNum>)> = Vec::new();
    if ech.try_insert(&a.final_) {
        basis_words.push(vec![]);
        obs.push(a.final_.clone());
        queue.push((vec![], a.final_.clone()));
    }
    let mut head = 0;
    while head < queue.len() {
        let (w, c) = queue[head].clone();
        head += 1;
        for s in 0..a.alphabet.len() {
            let next = mat_times_col(f, &a.trans[s], &c);
            if ech.try_insert(&next) {
                let mut nw = vec![s];
                nw.extend(w.iter().copied());
                basis_words.push(nw.clone());
                obs.push(next.clone());
                queue.push((nw, next));
            }
        }
    }
    let words = if basis_words.is_empty() { vec![vec![]] } else { basis_words };
    (words, obs)
}

pub enum ConjugateSide {
    /// `m` maps configurations of `a` into the result:
    /// `A'(▷) = A(▷)·m`, `m·A'(σ) = A(σ)·m`, `m·A'(⊲) = A(⊲)`.
    Right,
    /// `m` maps configurations of the result into `a`:
    /// `A'(▷)·m = A(▷)`, `A'(σ)·m = m·A(σ)`, `A'(⊲) = m·A(⊲)`.
    Left,
}

/// Conjugates `a` by `m`, solving the morphism equations exactly over `K`.
pub fn conjugate(
    a: &WeightedAutomaton,
    m: &KMat,
    side: ConjugateSide,
) -> Result<WeightedAutomaton, AutomatonError> {
    let f = &a.field;
    match side {
        ConjugateSide::Right => {
            if m.rows != a.n_states {
                return Err(AutomatonError::DimensionMismatch);
            }
            let init = row_times_mat(f, &a.init, m);
            let mut trans = Vec::with_capacity(a.trans.len());
            for t in &a.trans {
                let rhs = t.mul(f, m);
                let x = k_solve(f, m, &rhs).ok_or(AutomatonError::NoConjugate)?;
                trans.push(x);
            }
            let fin_mat = KMat::from_columns(f, &[a.final_.clone()]);
            let x = k_solve(f, m, &fin_mat).ok_or(AutomatonError::NoConjugate)?;
            let final_ = x.column(0);
            WeightedAutomaton::new(f.clone(), a.alphabet.clone(), init, trans, final_)
        }
        ConjugateSide::Left => {
            if m.cols != a.n_states {
                return Err(AutomatonError::DimensionMismatch);
            }
            let mt = m.transpose(f);
            // init' solves X·m = init.
            let init_rhs = KMat::from_columns(f, &[a.init.clone()]);
            let x = k_solve(f, &mt, &init_rhs).ok_or(AutomatonError::NoConjugate)?;
            let init = x.column(0);
            let mut trans = Vec::with_capacity(a.trans.len());
            for t in &a.trans {
                // X·m = m·A(σ)  ⇔  mᵀ·Xᵀ = (m·A(σ))ᵀ
                let rhs = m.mul(f, t).transpose(f);
                let xt = k_solve(f, &mt, &rhs).ok_or(AutomatonError::NoConjugate)?;
                trans.push(xt.transpose(f));
            }
            let final_ = mat_times_col(f, m, &a.final_);
            WeightedAutomaton::new(f.clone(), a.alphabet.clone(), init, trans, final_)
        }
    }
}

/// Minimal `K`-weighted automaton for `⟦a⟧`: the forward conjugate of the
/// backward conjugate. The output dimension is the rank of the Hankel matrix.
pub fn minimize_k(a: &WeightedAutomaton) -> Result<WeightedAutomaton, AutomatonError> {
    let f = &a.field;
    let (_, obs) = backward_basis(a);
    if obs.is_empty() {
        return Ok(WeightedAutomaton::zero(f, a.alphabet.clone()));
    }
    let b = KMat::from_columns(f, &obs);
    let observable = conjugate(a, &b, ConjugateSide::Right)?;
    let (_, configs) = forward_basis(&observable);
    if configs.is_empty() {
        return Ok(WeightedAutomaton::zero(f, a.alphabet.clone()));
    }
    let v = KMat::from_rows(f, &configs);
    conjugate(&observable, &v, ConjugateSide::Left)
}

/// Least word (length-first, then alphabet order) on which the two automata
/// disagree, or `None` when they compute the same language.
///
/// Works on the difference automaton: two automata of dimensions `n₁`, `n₂`
/// agree exactly when they agree on all words of length below `n₁ + n₂`, and
/// the forward-basis exploration below covers every word up to that bound
/// because each inspected word extends a basis word.
pub fn equiv_counterexample(
    a: &WeightedAutomaton,
    b: &WeightedAutomaton,
) -> Result<Option<Word>, AutomatonError> {
    if a.field != b.field {
        return Err(AutomatonError::FieldMismatch);
    }
    if a.alphabet != b.alphabet {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let f = &a.field;
    let dim = a.n_states + b.n_states;
    let value = |ca: &[AlgNum], cb: &[AlgNum]| -> AlgNum {
        f.sub(&dot(f, ca, &a.final_), &dot(f, cb, &b.final_))
    };
    let joint =
        |ca: &[AlgNum], cb: &[AlgNum]| -> Vec<AlgNum> { ca.iter().chain(cb).cloned().collect() };
    let c0 = (a.init.clone(), b.init.clone());
    if !value(&c0.0, &c0.1).is_zero() {
        return Ok(Some(vec![]));
    }
    let mut ech = KEchelon::new(f, dim);
    let mut queue: Vec<(Word, (Vec<AlgNum>, Vec<AlgNum>))> = Vec::new();
    if ech.try_insert(&joint(&c0.0, &c0.1)) {
        queue.push((vec![], c0));
    }
    let mut head = 0;
    while head < queue.len() {
        let (w, (ca, cb)) = queue[head].clone();
        head += 1;
        for s in 0..a.alphabet.len() {
            let na = row_times_mat(f, &ca, &a.trans[s]);
            let nb = row_times_mat(f, &cb, &b.trans[s]);
            let mut nw = w.clone();
            nw.push(s);
            if !value(&na, &nb).is_zero() {
                return Ok(Some(nw));
            }
            if ech.try_insert(&joint(&na, &nb)) {
                queue.push((nw, (na, nb)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use num_rational::BigRational;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    /// Random automaton with integer coordinates bounded by `bound`.
    pub fn random_automaton(
        f: &FieldRef,
        alphabet: &[char],
        n: usize,
        bound: i64,
        rng: &mut ChaCha8Rng,
    ) -> WeightedAutomaton {
        let d = f.degree();
        let rnd = |rng: &mut ChaCha8Rng| {
            f.from_coords(
                (0..d).map(|_| BigRational::from_integer(rng.gen_range(-bound..=bound).into())).collect(),
            )
        };
        let init: Vec<AlgNum> = (0..n).map(|_| rnd(rng)).collect();
        let final_: Vec<AlgNum> = (0..n).map(|_| rnd(rng)).collect();
        let trans: Vec<KMat> = alphabet
            .iter()
            .map(|_| {
                let rows: Vec<Vec<AlgNum>> =
                    (0..n).map(|_| (0..n).map(|_| rnd(rng)).collect()).collect();
                KMat::from_rows(f, &rows)
            })
            .collect();
        WeightedAutomaton::new(f.clone(), alphabet.to_vec(), init, trans, final_).unwrap()
    }

    /// All words over `letters` letters up to the given length, length-lex.
    pub fn words_up_to(letters: usize, max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![vec![]];
        let mut layer: Vec<Word> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..letters {
                    let mut nw = w.clone();
                    nw.push(s);
                    next.push(nw);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::{random_automaton, words_up_to};
    use super::*;
    use crate::numfield::NumberField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// 1-state automaton computing c^{|w|} over a single letter.
    fn scalar_automaton(f: &FieldRef, c: AlgNum) -> WeightedAutomaton {
        let t = KMat::from_rows(f, &[vec![c]]);
        WeightedAutomaton::new(f.clone(), vec!['a'], vec![f.one()], vec![t], vec![f.one()]).unwrap()
    }

    #[test]
    fn eval_cases() {
        let q = NumberField::rationals();
        let a = scalar_automaton(&q, q.from_int(2));
        assert_eq!(a.eval(&[]).unwrap(), q.one());
        for n in 0..8usize {
            let w = vec![0; n];
            assert_eq!(a.eval(&w).unwrap(), q.from_int(1 << n));
        }
        assert_eq!(a.eval(&[1]).unwrap_err(), AutomatonError::UnknownSymbol);
        // Empty-word value is init·final.
        let f = NumberField::quadratic(-5).unwrap();
        let two_state = WeightedAutomaton::new(
            f.clone(),
            vec!['a'],
            vec![f.from_int(1), f.from_int(2)],
            vec![KMat::identity(&f, 2)],
            vec![f.from_int(3), f.from_int_coords(&[0, 1])],
        )
        .unwrap();
        assert_eq!(two_state.eval(&[]).unwrap(), f.from_int_coords(&[3, 2]));
    }

    #[test]
    fn config_concatenation() {
        let q = NumberField::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let a = random_automaton(&q, &['a', 'b'], 3, 3, &mut rng);
        for _ in 0..20 {
            let u: Word = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..2)).collect();
            let v: Word = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..2)).collect();
            let mut uv = u.clone();
            uv.extend(&v);
            let cu = a.config(&u).unwrap();
            let mut walked = cu.clone();
            for &s in &v {
                walked = row_times_mat(&q, &walked, &a.trans[s]);
            }
            assert_eq!(walked, a.config(&uv).unwrap());
        }
    }

    #[test]
    fn forward_backward_words() {
        let q = NumberField::rationals();
        // Zero-initial automaton: W = {ε}.
        let zero = WeightedAutomaton::new(
            q.clone(),
            vec!['a'],
            vec![q.zero()],
            vec![KMat::identity(&q, 1)],
            vec![q.one()],
        )
        .unwrap();
        assert_eq!(forward_words(&zero), vec![Vec::<usize>::new()]);
        // One-state nonzero: W = {ε}.
        let one = scalar_automaton(&q, q.from_int(2));
        assert_eq!(forward_words(&one), vec![Vec::<usize>::new()]);
        assert_eq!(backward_words(&one), vec![Vec::<usize>::new()]);
        // Zero-final automaton: backward words = {ε}.
        let nofinal = WeightedAutomaton::new(
            q.clone(),
            vec!['a'],
            vec![q.one()],
            vec![KMat::identity(&q, 1)],
            vec![q.zero()],
        )
        .unwrap();
        assert_eq!(backward_words(&nofinal), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn conjugate_identity_and_permutation() {
        let q = NumberField::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let a = random_automaton(&q, &['a', 'b'], 3, 3, &mut rng);
        let id = KMat::identity(&q, 3);
        let same = conjugate(&a, &id, ConjugateSide::Right).unwrap();
        assert_eq!(same.init, a.init);
        assert_eq!(same.final_, a.final_);
        assert_eq!(same.trans, a.trans);
        // Permutation: language preserved on all words up to 2n.
        let mut p = KMat::zero(&q, 3, 3);
        p[(0, 2)] = q.one();
        p[(1, 0)] = q.one();
        p[(2, 1)] = q.one();
        let relabeled = conjugate(&a, &p, ConjugateSide::Right).unwrap();
        for w in words_up_to(2, 6) {
            assert_eq!(a.eval(&w).unwrap(), relabeled.eval(&w).unwrap());
        }
    }

    #[test]
    fn backward_conjugate_forward_vectors_are_values() {
        // After conjugating with the backward basis B, the forward vector of
        // w lists the values A(▷w·u⊲) over the backward words u.
        let q = NumberField::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let a = random_automaton(&q, &['a', 'b'], 3, 2, &mut rng);
        let (bwords, obs) = backward_basis(&a);
        let b = KMat::from_columns(&q, &obs);
        let ap = conjugate(&a, &b, ConjugateSide::Right).unwrap();
        for w in words_up_to(2, 3) {
            let cfg = ap.config(&w).unwrap();
            for (j, u) in bwords.iter().enumerate() {
                let mut wu = w.clone();
                wu.extend(u.iter().copied());
                assert_eq!(cfg[j], a.eval(&wu).unwrap());
            }
        }
    }

    #[test]
    fn minimize_scalar_and_zero() {
        let q = NumberField::rationals();
        let a = scalar_automaton(&q, q.from_int(2));
        let m = minimize_k(&a).unwrap();
        assert_eq!(m.n_states, 1);
        // Minimization is dimension-stable.
        assert_eq!(minimize_k(&m).unwrap().n_states, 1);
        let zero = WeightedAutomaton::zero(&q, vec!['a']);
        assert_eq!(minimize_k(&zero).unwrap().n_states, 0);
        assert_eq!(zero.eval(&[0, 0]).unwrap(), q.zero());
    }

    #[test]
    fn minimize_preserves_language_random() {
        let fields = [NumberField::rationals(), NumberField::quadratic(-5).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for f in &fields {
            for _ in 0..10 {
                let a = random_automaton(f, &['a', 'b'], 3, 2, &mut rng);
                let m = minimize_k(&a).unwrap();
                assert!(m.n_states <= a.n_states);
                assert!(equiv_counterexample(&a, &m).unwrap().is_none());
                // Hankel block rank on (forward × backward) words equals the
                // minimal dimension.
                let fw = forward_words(&a);
                let bw = backward_words(&a);
                let mut ech = KEchelon::new(f, bw.len());
                for w in &fw {
                    let row: Vec<AlgNum> = bw
                        .iter()
                        .map(|u| {
                            let mut wu = w.clone();
                            wu.extend(u.iter().copied());
                            a.eval(&wu).unwrap()
                        })
                        .collect();
                    ech.try_insert(&row);
                }
                assert_eq!(ech.rank(), m.n_states);
            }
        }
    }

    #[test]
    fn equivalence_cases() {
        let q = NumberField::rationals();
        let two = scalar_automaton(&q, q.from_int(2));
        let three = scalar_automaton(&q, q.from_int(3));
        assert_eq!(equiv_counterexample(&two, &two).unwrap(), None);
        assert_eq!(equiv_counterexample(&two, &three).unwrap(), Some(vec![0]));
        // Returned word matches a brute-force least-difference scan.
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..10 {
            let a = random_automaton(&q, &['a', 'b'], 2, 2, &mut rng);
            let b = random_automaton(&q, &['a', 'b'], 2, 2, &mut rng);
            let cex = equiv_counterexample(&a, &b).unwrap();
            let brute = words_up_to(2, 5)
                .into_iter()
                .find(|w| a.eval(w).unwrap() != b.eval(w).unwrap());
            assert_eq!(cex, brute);
        }
    }

    #[test]
    fn alphabet_mismatch() {
        let q = NumberField::rationals();
        let a = scalar_automaton(&q, q.from_int(2));
        let b = WeightedAutomaton::zero(&q, vec!['x']);
        assert_eq!(equiv_counterexample(&a, &b).unwrap_err(), AutomatonError::AlphabetMismatch);
    }

    #[test]
    fn word_parsing() {
        let alphabet = ['a', 'b'];
        assert_eq!(parse_word(&alphabet, "abba").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(word_to_string(&alphabet, &[0, 1]), "ab");
        assert_eq!(parse_word(&alphabet, "ac").unwrap_err(), AutomatonError::UnknownSymbol);
    }
}
