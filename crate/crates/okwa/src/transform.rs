//! The reduction from automata over `K` to automata over `O_K`: given a
//! `K`-weighted automaton, either construct an equivalent integral automaton
//! with at most `rank + 1` states, or exhibit a word whose value is not an
//! algebraic integer.
//!
//! The pipeline conjugates the input with a basis of its backward space, so
//! that forward vectors become tuples of language values; runs the two-phase
//! generator search ([`ok_generators`]) — first growing words while the
//! `K`-rank of the reached configurations increases, then while the
//! `O_K`-module they span still grows, with the second phase bounded by the
//! chain bound of the phase-one module; extracts a pseudo-basis of the
//! forward module and an almost-minimal generating set from it; and finally
//! conjugates back with the generator matrix, solving the morphism equations
//! over `O_K` so the output is integral by construction.
//!
//! Counterexamples come from two checks on every word that enters the word
//! set: its value must be integral, and its configuration must be integral.
//! A non-integral configuration alone is completed into a value-level
//! counterexample by scanning suffixes from the backward-word list; in the
//! pipeline the conjugated automaton satisfies `A'(w_j⊲) = e_j`, so each
//! configuration coordinate *is* a value and the completion never misses.
//!
//! ```
//! use okwa::fixtures::example1_automaton;
//! use okwa::transform::{transform, TransformOutcome};
//! use okwa::wautomata::minimize_k;
//!
//! // The worked ideal is not principal, so rebuilding an integral automaton
//! // from the 2-state minimal one needs the extra state.
//! let min = minimize_k(&example1_automaton()).unwrap();
//! match transform(&min).unwrap() {
//!     TransformOutcome::Automaton { automaton, stats } => {
//!         assert_eq!(automaton.n_states, 3);
//!         assert!(stats.extra_state);
//!     }
//!     TransformOutcome::Counterexample(_) => unreachable!("the language is integral"),
//! }
//! ```

use crate::numfield::{AlgNum, FieldRef};
use crate::okmodules::{self, ModuleError, PseudoMatrix};
use crate::wautomata::{
    backward_basis, conjugate, dot, mat_times_col, row_times_mat, AutomatonError, ConjugateSide,
    KEchelon, KMat, WeightedAutomaton, Word,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("final conjugation system is unsolvable over the ring — library invariant violated")]
    InternalInconsistency,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Instrumentation of a successful transform run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformStats {
    /// Dimension of the minimal automaton over `K` (the language rank).
    pub rank: usize,
    /// Words added during the module-growing phase.
    pub phase2_iters: usize,
    /// `⌊log₂ N(𝔡)⌋` for the determinantal ideal of the phase-one module.
    pub chain_bound: u64,
    /// Whether the `rank + 1`-th state was needed.
    pub extra_state: bool,
}

/// Result of the reduction: exactly one branch.
#[derive(Debug, Clone)]
pub enum TransformOutcome {
    /// Word whose value under the input automaton is not integral.
    Counterexample(Word),
    /// Equivalent integral automaton with at most `rank + 1` states.
    Automaton { automaton: WeightedAutomaton, stats: TransformStats },
}

/// Result of the two-phase forward-module generator search.
#[derive(Debug, Clone)]
pub enum OkGenerators {
    /// Word whose value is not integral.
    Counterexample(Word),
    /// Prefix-closed words whose configurations generate the forward module.
    Generators(Vec<Word>),
}

struct PhaseOutput {
    words: Vec<Word>,
    configs: Vec<Vec<AlgNum>>,
    /// Number of words found in phase one (= the rank when positive).
    rank: usize,
    /// Coordinate positions that restrict configurations to a full-rank basis.
    proj: Vec<usize>,
    phase2_iters: usize,
    chain_bound: u64,
}

enum Phases {
    Counterexample(Word),
    Done(PhaseOutput),
}

/// Two-phase search on `a` (assumed conjugated so that configurations are
/// expected integral): grow words while the `K`-rank increases, then while
/// the `O_K`-module of reached configurations grows.
pub fn ok_generators(a: &WeightedAutomaton) -> Result<OkGenerators, TransformError> {
    let (suffix_words, suffix_obs) = backward_basis(a);
    let suffixes: Vec<(Word, Vec<AlgNum>)> =
        suffix_words.into_iter().zip(suffix_obs.into_iter()).collect();
    match run_phases(a, &suffixes)? {
        Phases::Counterexample(w) => Ok(OkGenerators::Counterexample(w)),
        Phases::Done(out) => Ok(OkGenerators::Generators(out.words)),
    }
}

/// Value-level counterexample check for a word with configuration `c`:
/// a non-integral value witnesses directly; a non-integral configuration is
/// completed with the suffix whose observation exposes a non-integral value.
fn check_word(
    a: &WeightedAutomaton,
    w: &[usize],
    c: &[AlgNum],
    suffixes: &[(Word, Vec<AlgNum>)],
) -> Option<Word> {
    let f = &a.field;
    let value = dot(f, c, &a.final_);
    if !value.is_integral() {
        return Some(w.to_vec());
    }
    if c.iter().all(AlgNum::is_integral) {
        return None;
    }
    for (u, obs) in suffixes {
        if !dot(f, c, obs).is_integral() {
            let mut wu = w.to_vec();
            wu.extend(u.iter().copied());
            return Some(wu);
        }
    }
    None
}

fn run_phases(
    a: &WeightedAutomaton,
    suffixes: &[(Word, Vec<AlgNum>)],
) -> Result<Phases, TransformError> {
    let f = a.field.clone();
    // Phase one: words that increase the rank.
    if let Some(cex) = check_word(a, &[], &a.init, suffixes) {
        return Ok(Phases::Counterexample(cex));
    }
    let mut ech = KEchelon::new(&f, a.n_states);
    let mut words: Vec<Word> = Vec::new();
    let mut configs: Vec<Vec<AlgNum>> = Vec::new();
    if ech.try_insert(&a.init) {
        words.push(vec![]);
        configs.push(a.init.clone());
    }
    let mut head = 0;
    while head < words.len() {
        let (w, c) = (words[head].clone(), configs[head].clone());
        head += 1;
        for s in 0..a.alphabet.len() {
            let next = row_times_mat(&f, &c, &a.trans[s]);
            if ech.try_insert(&next) {
                let mut nw = w.clone();
                nw.push(s);
                if let Some(cex) = check_word(a, &nw, &next, suffixes) {
                    return Ok(Phases::Counterexample(cex));
                }
                words.push(nw);
                configs.push(next);
            }
        }
    }
    let rank = words.len();
    if rank == 0 {
        // Zero initial vector: the language is identically zero.
        return Ok(Phases::Done(PhaseOutput {
            words: vec![vec![]],
            configs: vec![],
            rank: 0,
            proj: vec![],
            phase2_iters: 0,
            chain_bound: 0,
        }));
    }
    // Restrict coordinates to the pivot columns of the phase-one basis, so
    // the module is full-rank in its ambient space.
    let proj = ech.pivot_columns();
    let project =
        |c: &[AlgNum]| -> Vec<AlgNum> { proj.iter().map(|&j| c[j].clone()).collect() };
    let mut gens: Vec<Vec<AlgNum>> = configs.iter().map(|c| project(c)).collect();
    let chain_bound = scaled_chain_bound(&f, &gens)?;
    let mut basis = okmodules::pseudo_hnf(&PseudoMatrix::free(&f, &gens))?;
    // Phase two: words that augment the module.
    let mut phase2_iters = 0usize;
    let mut head = 0;
    while head < words.len() {
        let (w, c) = (words[head].clone(), configs[head].clone());
        head += 1;
        for s in 0..a.alphabet.len() {
            let next = row_times_mat(&f, &c, &a.trans[s]);
            let p = project(&next);
            if okmodules::express_in_basis(&basis, &p)?.is_some() {
                continue;
            }
            let mut nw = w.clone();
            nw.push(s);
            if let Some(cex) = check_word(a, &nw, &next, suffixes) {
                return Ok(Phases::Counterexample(cex));
            }
            words.push(nw);
            configs.push(next);
            gens.push(p);
            basis = okmodules::pseudo_hnf(&PseudoMatrix::free(&f, &gens))?;
            phase2_iters += 1;
            if phase2_iters > 10_000 {
                return Err(TransformError::InternalInconsistency);
            }
        }
    }
    Ok(Phases::Done(PhaseOutput { words, configs, rank, proj, phase2_iters, chain_bound }))
}

/// Chain bound of the module spanned by `gens`, after clearing a common
/// rational denominator when the vectors are fractional (the bound is then
/// the one of the scaled integral module).
fn scaled_chain_bound(f: &FieldRef, gens: &[Vec<AlgNum>]) -> Result<u64, ModuleError> {
    let mut den = BigInt::one();
    for g in gens {
        for c in g {
            for q in &c.coords {
                den = den.lcm(q.denom());
            }
        }
    }
    let scaled: Vec<Vec<AlgNum>> = if den.is_one() {
        gens.to_vec()
    } else {
        let s = f.from_rational(num_rational::BigRational::from_integer(den));
        gens.iter().map(|g| okmodules::vec_scale(f, &s, g)).collect()
    };
    okmodules::chain_bound(&PseudoMatrix::free(f, &scaled))
}

/// Computes an equivalent integral automaton with at most `rank + 1` states,
/// or a word whose value is not integral.
pub fn transform(a: &WeightedAutomaton) -> Result<TransformOutcome, TransformError> {
    let f = a.field.clone();
    // (i) backward basis; an empty basis means the language is zero.
    let (bwords, obs) = backward_basis(a);
    if obs.is_empty() {
        return Ok(zero_outcome(a));
    }
    let b = KMat::from_columns(&f, &obs);
    // (ii) conjugate so configurations become value tuples over `bwords`.
    let observable = conjugate(a, &b, ConjugateSide::Right)?;
    // In the observable automaton the backward words observe unit vectors,
    // so coordinate j of any configuration is the value of (word)·w_j.
    let suffixes: Vec<(Word, Vec<AlgNum>)> = bwords
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let mut e = vec![f.zero(); observable.n_states];
            e[j] = f.one();
            (w.clone(), e)
        })
        .collect();
    // (iii) two-phase generator search.
    let out = match run_phases(&observable, &suffixes)? {
        Phases::Counterexample(w) => return Ok(TransformOutcome::Counterexample(w)),
        Phases::Done(out) => out,
    };
    if out.rank == 0 {
        return Ok(zero_outcome(a));
    }
    // (iv) pseudo-basis of the forward module in restricted coordinates.
    let gens_proj: Vec<Vec<AlgNum>> =
        out.configs.iter().map(|c| out.proj.iter().map(|&j| c[j].clone()).collect()).collect();
    let basis = okmodules::pseudo_hnf(&PseudoMatrix::free(&f, &gens_proj))?;
    // (v) almost-minimal generating set, mapped back to full coordinates.
    let ys_proj = okmodules::generating_set(&basis)?;
    let extra_state = ys_proj.len() > out.rank;
    let full = unproject(&f, &out, &ys_proj).ok_or(TransformError::InternalInconsistency)?;
    // (vi) conjugate the observable automaton with F over the ring.
    let automaton = conjugate_over_ring(&observable, &full)?;
    if !automaton.integral {
        return Err(TransformError::InternalInconsistency);
    }
    let stats = TransformStats {
        rank: out.rank,
        phase2_iters: out.phase2_iters,
        chain_bound: out.chain_bound,
        extra_state,
    };
    Ok(TransformOutcome::Automaton { automaton, stats })
}

fn zero_outcome(a: &WeightedAutomaton) -> TransformOutcome {
    TransformOutcome::Automaton {
        automaton: WeightedAutomaton::zero(&a.field, a.alphabet.clone()),
        stats: TransformStats { rank: 0, phase2_iters: 0, chain_bound: 0, extra_state: false },
    }
}

/// Lifts generators given in restricted coordinates back to full vectors:
/// each one is the unique member of the span of the phase-one configurations
/// with the prescribed projection.
fn unproject(f: &FieldRef, out: &PhaseOutput, ys_proj: &[Vec<AlgNum>]) -> Option<Vec<Vec<AlgNum>>> {
    let m = out.configs[0].len();
    if out.proj.len() == m {
        return Some(ys_proj.to_vec());
    }
    let basis_rows: Vec<Vec<AlgNum>> = out.configs[..out.rank].to_vec();
    let vp = KMat::from_rows(
        f,
        &basis_rows
            .iter()
            .map(|c| out.proj.iter().map(|&j| c[j].clone()).collect())
            .collect::<Vec<_>>(),
    );
    let vpt = vp.transpose(f);
    let v = KMat::from_rows(f, &basis_rows);
    let mut full = Vec::with_capacity(ys_proj.len());
    for y in ys_proj {
        let rhs = KMat::from_columns(f, &[y.clone()]);
        let coeffs = crate::wautomata::k_solve(f, &vpt, &rhs)?;
        let row: Vec<AlgNum> = (0..out.rank).map(|i| coeffs[(i, 0)].clone()).collect();
        full.push(row_times_mat(f, &row, &v));
    }
    Some(full)
}

/// Conjugates `a` with the stacked generator matrix `F`, solving
/// `A''(▷)·F = A(▷)`, `A''(σ)·F = F·A(σ)` over `O_K` and setting
/// `A''(⊲) = F·A(⊲)`. Solvability over the ring is guaranteed because the
/// rows of `F` generate the forward module; failure is a library bug.
fn conjugate_over_ring(
    a: &WeightedAutomaton,
    rows: &[Vec<AlgNum>],
) -> Result<WeightedAutomaton, TransformError> {
    let f = a.field.clone();
    let ell = rows.len();
    let fmat = KMat::from_rows(&f, rows);
    let init = okmodules::solve_integral_combination(&f, rows, &a.init)
        .ok_or(TransformError::InternalInconsistency)?;
    let mut trans = Vec::with_capacity(a.trans.len());
    for t in &a.trans {
        let mut mat = KMat::zero(&f, ell, ell);
        for (i, y) in rows.iter().enumerate() {
            let target = row_times_mat(&f, y, t);
            let coeffs = okmodules::solve_integral_combination(&f, rows, &target)
                .ok_or(TransformError::InternalInconsistency)?;
            for (j, c) in coeffs.into_iter().enumerate() {
                mat[(i, j)] = c;
            }
        }
        trans.push(mat);
    }
    let final_ = mat_times_col(&f, &fmat, &a.final_);
    WeightedAutomaton::new(f, a.alphabet.clone(), init, trans, final_).map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numfield::NumberField;
    use crate::wautomata::{equiv_counterexample, minimize_k, testutil::words_up_to};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_state(f: &FieldRef, weight: AlgNum) -> WeightedAutomaton {
        let t = KMat::from_rows(f, &[vec![weight]]);
        WeightedAutomaton::new(f.clone(), vec!['a'], vec![f.one()], vec![t], vec![f.one()])
            .unwrap()
    }

    #[test]
    fn counterexample_on_halving_automaton() {
        let q = NumberField::rationals();
        let a = one_state(&q, q.from_rational(BigRational::new(1.into(), 2.into())));
        match transform(&a).unwrap() {
            TransformOutcome::Counterexample(w) => {
                assert_eq!(w, vec![0]);
                assert!(!a.eval(&w).unwrap().is_integral());
            }
            _ => panic!("expected a counterexample"),
        }
        match ok_generators(&a).unwrap() {
            OkGenerators::Counterexample(w) => assert_eq!(w, vec![0]),
            _ => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn integral_input_passes_through() {
        let q = NumberField::rationals();
        let a = one_state(&q, q.from_int(2));
        match transform(&a).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => {
                assert_eq!(automaton.n_states, 1);
                assert!(!stats.extra_state);
                assert!(automaton.integral);
                assert!(equiv_counterexample(&a, &automaton).unwrap().is_none());
            }
            _ => panic!("expected an automaton"),
        }
        match ok_generators(&a).unwrap() {
            OkGenerators::Generators(w) => assert_eq!(w, vec![Vec::<usize>::new()]),
            _ => panic!("expected generators"),
        }
    }

    #[test]
    fn zero_language() {
        let q = NumberField::rationals();
        let z = WeightedAutomaton::zero(&q, vec!['a']);
        match transform(&z).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => {
                assert_eq!(automaton.n_states, 0);
                assert_eq!(stats.rank, 0);
            }
            _ => panic!("expected an automaton"),
        }
    }

    #[test]
    fn phase_two_grows_module_within_bound() {
        // Configurations live in the even-coordinate-sum sublattice of Z²:
        // the rank fills up at {ε, a} with configurations (2,0), (0,2), and
        // the word b reaches (1,1), which is in the rational span but outside
        // the module — exactly one phase-two addition, within the bound
        // log₂(index) = 2.
        let q = NumberField::rationals();
        let half = BigRational::new(1.into(), 2.into());
        let swap = KMat::from_rows(&q, &[vec![q.zero(), q.one()], vec![q.one(), q.zero()]]);
        let avg = KMat::from_rows(
            &q,
            &[
                vec![q.from_rational(half.clone()), q.from_rational(half.clone())],
                vec![q.from_rational(half.clone()), q.from_rational(half)],
            ],
        );
        let a = WeightedAutomaton::new(
            q.clone(),
            vec!['a', 'b'],
            vec![q.from_int(2), q.zero()],
            vec![swap, avg],
            vec![q.one(), q.zero()],
        )
        .unwrap();
        // All reachable values are integral.
        for w in words_up_to(2, 6) {
            assert!(a.eval(&w).unwrap().is_integral());
        }
        match transform(&a).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => {
                assert_eq!(stats.rank, 2);
                assert_eq!(stats.phase2_iters, 1);
                assert_eq!(stats.chain_bound, 2);
                assert!(stats.phase2_iters as u64 <= stats.chain_bound);
                assert!(!stats.extra_state);
                assert_eq!(automaton.n_states, 2);
                assert!(automaton.integral);
                assert!(equiv_counterexample(&a, &automaton).unwrap().is_none());
            }
            _ => panic!("expected an automaton"),
        }
    }

    #[test]
    fn worked_example_needs_extra_state() {
        // The 3-state encoding of (3, 2−ω) minimizes to 2 states over the
        // field, and transforming that minimal automaton has to spend the
        // extra state because the ideal is not principal.
        let wa = fixtures::example1_automaton();
        let min = minimize_k(&wa).unwrap();
        assert_eq!(min.n_states, 2);
        match transform(&min).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => {
                assert_eq!(stats.rank, 2);
                assert!(stats.extra_state);
                assert_eq!(automaton.n_states, 3);
                assert!(automaton.integral);
                assert!(equiv_counterexample(&wa, &automaton).unwrap().is_none());
                assert!(stats.phase2_iters as u64 <= stats.chain_bound);
            }
            _ => panic!("expected an automaton"),
        }
    }

    #[test]
    fn principal_encoding_stays_minimal() {
        // Over the Gaussian integers every ideal is principal, so the
        // transform recovers a 2-state automaton from the 2-state minimal one.
        let gi = NumberField::quadratic(-1).unwrap();
        let ideal = crate::ideals::Ideal::principal(&gi, &gi.from_int_coords(&[1, 2])).unwrap();
        let wa = fixtures::pip_automaton(&ideal).unwrap();
        let min = minimize_k(&wa).unwrap();
        assert_eq!(min.n_states, 2);
        match transform(&min).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => {
                assert!(!stats.extra_state);
                assert_eq!(automaton.n_states, 2);
                assert!(automaton.integral);
                assert!(equiv_counterexample(&wa, &automaton).unwrap().is_none());
            }
            _ => panic!("expected an automaton"),
        }
    }

    #[test]
    fn random_roundtrip_small() {
        let fields =
            [NumberField::rationals(), NumberField::quadratic(-1).unwrap(), NumberField::quadratic(-5).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for f in &fields {
            for _ in 0..8 {
                let t = fixtures::random_okwa(f, &['a', 'b'], 3, 2, &mut rng);
                let min = minimize_k(&t).unwrap();
                match transform(&min).unwrap() {
                    TransformOutcome::Automaton { automaton, stats } => {
                        assert!(automaton.n_states <= min.n_states + 1);
                        assert!(automaton.integral);
                        assert!(equiv_counterexample(&t, &automaton).unwrap().is_none());
                        assert!(stats.phase2_iters as u64 <= stats.chain_bound);
                    }
                    TransformOutcome::Counterexample(w) => {
                        panic!("integral language produced counterexample {w:?}")
                    }
                }
            }
        }
    }

    #[test]
    fn transform_is_deterministic() {
        let wa = fixtures::example1_automaton();
        let min = minimize_k(&wa).unwrap();
        let (a1, s1) = match transform(&min).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => (automaton, stats),
            _ => panic!("expected an automaton"),
        };
        let (a2, s2) = match transform(&min).unwrap() {
            TransformOutcome::Automaton { automaton, stats } => (automaton, stats),
            _ => panic!("expected an automaton"),
        };
        assert_eq!(a1, a2);
        assert_eq!(s1, s2);
    }

    #[test]
    fn perturbed_automata_yield_sound_counterexamples() {
        let q = NumberField::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let mut found = 0;
        for _ in 0..12 {
            let mut t = fixtures::random_okwa(&q, &['a', 'b'], 3, 2, &mut rng);
            // Perturb one transition entry by 1/2.
            let half = BigRational::new(1.into(), 2.into());
            let old = t.trans[0][(1, 1)].clone();
            t.trans[0][(1, 1)] = q.add(&old, &q.from_rational(half));
            let t = WeightedAutomaton::new(
                q.clone(),
                t.alphabet.clone(),
                t.init.clone(),
                t.trans.clone(),
                t.final_.clone(),
            )
            .unwrap();
            if let TransformOutcome::Counterexample(w) = transform(&t).unwrap() {
                assert!(!t.eval(&w).unwrap().is_integral());
                found += 1;
            }
        }
        assert!(found > 0, "no perturbation was detected");
    }
}
