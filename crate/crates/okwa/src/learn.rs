//! Exact active learning from value and equivalence queries.
//!
//! [`learn_k`] is the learner over the field: it maintains a finite block of
//! the Hankel matrix on prefix-closed rows `P` and suffix-closed columns `S`,
//! closes the table by promoting any one-letter extension whose row leaves
//! the `K`-span of the `P`-rows, builds the hypothesis by solving for the
//! transition coefficients, and processes a counterexample by adding all of
//! its suffixes to `S` before re-closing. Keeping the `P`-rows independent
//! makes every hypothesis minimal, and with all suffixes of a counterexample
//! present the next hypothesis is provably correct on it, so the teacher can
//! never repeat a counterexample.
//!
//! [`learn_ok`] wraps a ring-valued teacher for the field learner: value
//! queries pass through (with an integrality check), and each equivalence
//! query first runs the integrality transform on the hypothesis — a witness
//! word with a non-integral value is returned to the learner directly as a
//! counterexample, and only transformed integral automata ever reach the
//! teacher. A final transform turns the accepted minimal automaton over `K`
//! into the integral output with at most `rank + 1` states.
//!
//! ```
//! use okwa::fixtures::example1_automaton;
//! use okwa::learn::{learn_ok, LearnOptions, SimulatedTeacher};
//! use okwa::wautomata::equiv_counterexample;
//!
//! let target = example1_automaton();
//! let mut teacher = SimulatedTeacher::new(target.clone());
//! let out = learn_ok(&mut teacher, &LearnOptions::default()).unwrap();
//! assert!(out.automaton.integral);
//! assert_eq!(out.stats.rank, 2);
//! assert!(equiv_counterexample(&target, &out.automaton).unwrap().is_none());
//! ```

use crate::numfield::{AlgNum, FieldRef};
use crate::transform::{transform, TransformError, TransformOutcome, TransformStats};
use crate::wautomata::{
    equiv_counterexample, AutomatonError, KEchelon, KMat, WeightedAutomaton, Word,
};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LearnError {
    #[error("teacher returned a non-integral value; the language is not ring-valued")]
    NonIntegralTeacher,
    #[error("teacher answers contradict the closed table")]
    TeacherInconsistent,
    #[error("hypothesis dimension exceeded the configured ceiling")]
    DimensionCeiling,
    #[error("equivalence-query budget exhausted without convergence")]
    Diverged,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Oracle interface: value queries and equivalence queries.
///
/// `value` must be a pure function of the word, and any counterexample
/// returned from `equivalence(h)` must satisfy `value(w) ≠ ⟦h⟧(w)`.
pub trait Teacher {
    fn field(&self) -> &FieldRef;
    fn alphabet(&self) -> &[char];
    fn value(&mut self, w: &[usize]) -> AlgNum;
    fn equivalence(&mut self, hypothesis: &WeightedAutomaton) -> Option<Word>;
}

/// Teacher backed by a hidden automaton; counts its queries.
pub struct SimulatedTeacher {
    target: WeightedAutomaton,
    pub value_queries: usize,
    pub equivalence_queries: usize,
}

impl SimulatedTeacher {
    pub fn new(target: WeightedAutomaton) -> Self {
        SimulatedTeacher { target, value_queries: 0, equivalence_queries: 0 }
    }

    pub fn target(&self) -> &WeightedAutomaton {
        &self.target
    }
}

impl Teacher for SimulatedTeacher {
    fn field(&self) -> &FieldRef {
        &self.target.field
    }

    fn alphabet(&self) -> &[char] {
        &self.target.alphabet
    }

    fn value(&mut self, w: &[usize]) -> AlgNum {
        self.value_queries += 1;
        self.target.eval(w).expect("word over the teacher alphabet")
    }

    fn equivalence(&mut self, hypothesis: &WeightedAutomaton) -> Option<Word> {
        self.equivalence_queries += 1;
        equiv_counterexample(&self.target, hypothesis).expect("compatible automata")
    }
}

#[derive(Debug, Clone)]
pub struct LearnOptions {
    /// Ceiling on the hypothesis dimension; exceeding it aborts the run.
    pub max_dim: usize,
    /// Ceiling on the number of equivalence queries.
    pub max_equivalence_queries: usize,
}

impl Default for LearnOptions {
    fn default() -> Self {
        LearnOptions { max_dim: 64, max_equivalence_queries: 4096 }
    }
}

/// Query accounting of a ring-learning run.
#[derive(Debug, Clone, Default)]
pub struct LearnStats {
    /// Value queries forwarded to the underlying teacher (cached repeats are
    /// not re-asked).
    pub value_queries: usize,
    /// Equivalence queries issued by the inner field learner.
    pub equivalence_queries: usize,
    /// How many of those reached the ring teacher (the rest were answered by
    /// the transform's counterexamples).
    pub teacher_equivalence_queries: usize,
    /// Lengths of all processed counterexamples.
    pub counterexample_lengths: Vec<usize>,
    /// Rank of the learned language (dimension of the minimal automaton).
    pub rank: usize,
    /// Module-growing iterations summed over all transform runs.
    pub phase2_total: usize,
    /// Chain bounds summed over all transform runs.
    pub chain_bound_total: u64,
}

impl LearnStats {
    pub fn max_counterexample_len(&self) -> usize {
        self.counterexample_lengths.iter().copied().max().unwrap_or(0)
    }
}

/// Result of [`learn_ok`].
#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub automaton: WeightedAutomaton,
    pub stats: LearnStats,
}

/// Hankel-block state of the field learner.
struct Table<'a> {
    teacher: &'a mut dyn Teacher,
    field: FieldRef,
    n_letters: usize,
    prefixes: Vec<Word>,
    suffixes: Vec<Word>,
    cache: HashMap<Word, AlgNum>,
}

impl<'a> Table<'a> {
    fn value(&mut self, w: Word) -> AlgNum {
        if let Some(v) = self.cache.get(&w) {
            return v.clone();
        }
        let v = self.teacher.value(&w);
        self.cache.insert(w, v.clone());
        v
    }

    fn row(&mut self, w: &[usize]) -> Vec<AlgNum> {
        let suffixes = self.suffixes.clone();
        suffixes
            .into_iter()
            .map(|s| {
                let mut ws = w.to_vec();
                ws.extend(&s);
                self.value(ws)
            })
            .collect()
    }

    /// Closes the table: promote one-letter extensions while their rows are
    /// independent of the `P`-rows. Returns the echelon of the final rows.
    fn close(&mut self, max_dim: usize) -> Result<KEchelon, LearnError> {
        let mut ech = KEchelon::new(&self.field, self.suffixes.len());
        let mut prefixes = std::mem::take(&mut self.prefixes);
        // Existing prefixes stay independent when columns are added.
        for p in &prefixes {
            let row = self.row(p);
            if !ech.try_insert(&row) {
                return Err(LearnError::TeacherInconsistent);
            }
        }
        if prefixes.is_empty() {
            let row = self.row(&[]);
            if ech.try_insert(&row) {
                prefixes.push(vec![]);
            }
        }
        let mut head = 0;
        while head < prefixes.len() {
            let p = prefixes[head].clone();
            head += 1;
            for s in 0..self.n_letters {
                let mut ps = p.clone();
                ps.push(s);
                let row = self.row(&ps);
                if ech.try_insert(&row) {
                    prefixes.push(ps);
                    if prefixes.len() > max_dim {
                        return Err(LearnError::DimensionCeiling);
                    }
                }
            }
        }
        debug_assert_eq!(ech.rank(), prefixes.len());
        self.prefixes = prefixes;
        Ok(ech)
    }

    /// Builds the hypothesis from a closed table.
    fn hypothesis(&mut self, ech: &KEchelon) -> Result<WeightedAutomaton, LearnError> {
        let f = self.field.clone();
        let alphabet = self.teacher.alphabet().to_vec();
        let n = self.prefixes.len();
        if n == 0 {
            return Ok(WeightedAutomaton::zero(&f, alphabet));
        }
        // ε is the first prefix, so the initial vector is e₀.
        let mut init = vec![f.zero(); n];
        init[0] = f.one();
        let mut trans = Vec::with_capacity(self.n_letters);
        for s in 0..self.n_letters {
            let mut m = KMat::zero(&f, n, n);
            for i in 0..n {
                let mut ps = self.prefixes[i].clone();
                ps.push(s);
                let row = self.row(&ps);
                let coeffs = ech.express(&row).ok_or(LearnError::TeacherInconsistent)?;
                for (j, c) in coeffs.into_iter().enumerate() {
                    m[(i, j)] = c;
                }
            }
            trans.push(m);
        }
        let prefixes = self.prefixes.clone();
        let final_: Vec<AlgNum> = prefixes.into_iter().map(|p| self.value(p)).collect();
        WeightedAutomaton::new(f, alphabet, init, trans, final_).map_err(Into::into)
    }

    /// Adds every suffix of `c` (including `ε` and `c` itself) to `S`.
    fn add_suffixes(&mut self, c: &[usize]) {
        for start in 0..=c.len() {
            let s = c[start..].to_vec();
            if !self.suffixes.contains(&s) {
                self.suffixes.push(s);
            }
        }
    }
}

/// Learns the minimal automaton over the field for the teacher's language.
pub fn learn_k(
    teacher: &mut dyn Teacher,
    opts: &LearnOptions,
) -> Result<WeightedAutomaton, LearnError> {
    let field = teacher.field().clone();
    let n_letters = teacher.alphabet().len();
    let mut table = Table {
        teacher,
        field,
        n_letters,
        prefixes: Vec::new(),
        suffixes: vec![vec![]],
        cache: HashMap::new(),
    };
    for _ in 0..opts.max_equivalence_queries {
        let ech = table.close(opts.max_dim)?;
        let h = table.hypothesis(&ech)?;
        match table.teacher.equivalence(&h) {
            None => return Ok(h),
            Some(c) => table.add_suffixes(&c),
        }
    }
    Err(LearnError::Diverged)
}

/// Oracle adapter that realizes the ring teacher for the field learner.
struct RingOracle<'a> {
    teacher: &'a mut dyn Teacher,
    stats: LearnStats,
    violation: Option<LearnError>,
    /// Input and output of the most recent successful transform, reused when
    /// the accepted hypothesis is the one that was just transformed.
    last_transform: Option<(WeightedAutomaton, WeightedAutomaton, TransformStats)>,
}

impl<'a> RingOracle<'a> {
    fn record_transform(&mut self, stats: &TransformStats) {
        self.stats.phase2_total += stats.phase2_iters;
        self.stats.chain_bound_total += stats.chain_bound;
    }
}

impl<'a> Teacher for RingOracle<'a> {
    fn field(&self) -> &FieldRef {
        self.teacher.field()
    }

    fn alphabet(&self) -> &[char] {
        self.teacher.alphabet()
    }

    fn value(&mut self, w: &[usize]) -> AlgNum {
        self.stats.value_queries += 1;
        let v = self.teacher.value(w);
        if !v.is_integral() && self.violation.is_none() {
            self.violation = Some(LearnError::NonIntegralTeacher);
        }
        v
    }

    fn equivalence(&mut self, hypothesis: &WeightedAutomaton) -> Option<Word> {
        if self.violation.is_some() {
            return None; // unwind: learn_ok reports the stored error
        }
        self.stats.equivalence_queries += 1;
        match transform(hypothesis) {
            Ok(TransformOutcome::Counterexample(w)) => {
                // ⟦h⟧(w) is not integral while the target value is, so w is a
                // genuine counterexample; the ring teacher is not consulted.
                self.stats.counterexample_lengths.push(w.len());
                Some(w)
            }
            Ok(TransformOutcome::Automaton { automaton, stats }) => {
                self.record_transform(&stats);
                self.last_transform = Some((hypothesis.clone(), automaton.clone(), stats));
                self.stats.teacher_equivalence_queries += 1;
                let answer = self.teacher.equivalence(&automaton);
                if let Some(c) = &answer {
                    self.stats.counterexample_lengths.push(c.len());
                }
                answer
            }
            Err(e) => {
                self.violation = Some(e.into());
                None
            }
        }
    }
}

/// Learns an integral automaton with at most `rank + 1` states for a
/// ring-valued language, by reduction to the field learner.
pub fn learn_ok(teacher: &mut dyn Teacher, opts: &LearnOptions) -> Result<LearnOutcome, LearnError> {
    let mut oracle =
        RingOracle { teacher, stats: LearnStats::default(), violation: None, last_transform: None };
    let hypothesis = learn_k(&mut oracle, opts)?;
    if let Some(err) = oracle.violation {
        return Err(err);
    }
    let mut stats = oracle.stats;
    stats.rank = hypothesis.n_states;
    // The accepted hypothesis was transformed for its final equivalence
    // query; reuse that output instead of transforming again.
    let automaton = match oracle.last_transform {
        Some((input, output, _)) if input == hypothesis => output,
        _ => match transform(&hypothesis)? {
            TransformOutcome::Automaton { automaton, stats: t } => {
                stats.phase2_total += t.phase2_iters;
                stats.chain_bound_total += t.chain_bound;
                automaton
            }
            TransformOutcome::Counterexample(_) => return Err(LearnError::NonIntegralTeacher),
        },
    };
    Ok(LearnOutcome { automaton, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numfield::NumberField;
    use crate::wautomata::minimize_k;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_target(f: &FieldRef, c: i64) -> WeightedAutomaton {
        let t = KMat::from_rows(f, &[vec![f.from_int(c)]]);
        WeightedAutomaton::new(f.clone(), vec!['a'], vec![f.one()], vec![t], vec![f.one()]).unwrap()
    }

    #[test]
    fn simulated_teacher_delegates() {
        let q = NumberField::rationals();
        let target = scalar_target(&q, 2);
        let mut t = SimulatedTeacher::new(target.clone());
        assert_eq!(t.value(&[]), q.one());
        assert_eq!(t.equivalence(&target), None);
        let zero = WeightedAutomaton::zero(&q, vec!['a']);
        // Shortest nonzero word of the target is ε.
        assert_eq!(t.equivalence(&zero), Some(vec![]));
        assert_eq!(t.value_queries, 1);
        assert_eq!(t.equivalence_queries, 2);
    }

    #[test]
    fn learn_zero_language() {
        let q = NumberField::rationals();
        let zero = WeightedAutomaton::zero(&q, vec!['a', 'b']);
        let mut t = SimulatedTeacher::new(zero);
        let h = learn_k(&mut t, &LearnOptions::default()).unwrap();
        assert_eq!(h.n_states, 0);
        assert_eq!(t.equivalence_queries, 1);
    }

    #[test]
    fn learn_scalar_language() {
        let q = NumberField::rationals();
        let target = scalar_target(&q, 2);
        let mut t = SimulatedTeacher::new(target.clone());
        let h = learn_k(&mut t, &LearnOptions::default()).unwrap();
        assert_eq!(h.n_states, 1);
        assert!(t.equivalence_queries <= 2);
        assert!(equiv_counterexample(&target, &h).unwrap().is_none());
    }

    #[test]
    fn learn_k_on_worked_example() {
        // The minimal automaton over Q(i√5) for the worked language has two
        // states, and so must the learned hypothesis.
        let wa = fixtures::example1_automaton();
        let mut t = SimulatedTeacher::new(wa.clone());
        let h = learn_k(&mut t, &LearnOptions::default()).unwrap();
        assert_eq!(h.n_states, 2);
        assert!(equiv_counterexample(&wa, &h).unwrap().is_none());
    }

    #[test]
    fn learn_ok_scalar() {
        let q = NumberField::rationals();
        let target = scalar_target(&q, 3);
        let mut t = SimulatedTeacher::new(target.clone());
        let out = learn_ok(&mut t, &LearnOptions::default()).unwrap();
        assert_eq!(out.automaton.n_states, 1);
        assert!(out.automaton.integral);
        assert!(equiv_counterexample(&target, &out.automaton).unwrap().is_none());
        assert_eq!(out.stats.rank, 1);
    }

    #[test]
    fn learn_ok_worked_example() {
        let wa = fixtures::example1_automaton();
        let mut t = SimulatedTeacher::new(wa.clone());
        let out = learn_ok(&mut t, &LearnOptions::default()).unwrap();
        assert!(out.automaton.integral);
        assert!(equiv_counterexample(&wa, &out.automaton).unwrap().is_none());
        assert_eq!(out.stats.rank, 2);
        // The worked ideal is not principal, so the extra state is needed.
        assert_eq!(out.automaton.n_states, 3);
    }

    #[test]
    fn learn_ok_random_targets() {
        let fields = [NumberField::rationals(), NumberField::quadratic(-5).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(121);
        for f in &fields {
            for _ in 0..6 {
                let target = fixtures::random_okwa(f, &['a', 'b'], 3, 2, &mut rng);
                let rank = minimize_k(&target).unwrap().n_states;
                let mut t = SimulatedTeacher::new(target.clone());
                let out = learn_ok(&mut t, &LearnOptions::default()).unwrap();
                assert!(equiv_counterexample(&target, &out.automaton).unwrap().is_none());
                assert!(out.automaton.n_states <= rank + 1);
                assert_eq!(out.stats.rank, rank);
                assert!(
                    out.stats.equivalence_queries as u64
                        <= (rank + 1) as u64 + out.stats.chain_bound_total
                );
            }
        }
    }

    #[test]
    fn non_integral_teacher_is_rejected() {
        let q = NumberField::rationals();
        let half = q.from_rational(BigRational::new(1.into(), 2.into()));
        let t = KMat::from_rows(&q, &[vec![half]]);
        let target =
            WeightedAutomaton::new(q.clone(), vec!['a'], vec![q.one()], vec![t], vec![q.one()])
                .unwrap();
        let mut teacher = SimulatedTeacher::new(target);
        assert_eq!(
            learn_ok(&mut teacher, &LearnOptions::default()).unwrap_err(),
            LearnError::NonIntegralTeacher
        );
    }
}
