//! Acceptance suite: one test per criterion, each printing a PASS line when
//! it completes. Run with `cargo test --test acceptance -- --nocapture` to
//! see the lines; the per-test ok/FAILED status carries the same information.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use okwa::fixtures::{self, example1_automaton, example1_field};
use okwa::ideals::{self, Ideal};
use okwa::learn::{learn_ok, LearnOptions, SimulatedTeacher};
use okwa::numfield::{bigint_log2_abs, AlgNum, FieldRef, NumberField};
use okwa::okmodules::{self, PseudoElement, PseudoMatrix};
use okwa::transform::{transform, TransformOutcome, TransformStats};
use okwa::wautomata::{equiv_counterexample, minimize_k, WeightedAutomaton};
use okwa::zlattice::{self, hnf, IntMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixed factor of the value-query envelope `c·(rank²·|Σ|·maxCexLen)`
/// asserted in criterion 4. The worst ratio observed on the seeded suite is
/// 1.50, so the pinned factor carries a generous margin.
const VALUE_QUERY_ENVELOPE_FACTOR: usize = 8;

fn fields() -> Vec<FieldRef> {
    vec![
        NumberField::rationals(),
        NumberField::quadratic(-1).unwrap(),
        NumberField::quadratic(-5).unwrap(),
    ]
}

fn run_transform(a: &WeightedAutomaton) -> (WeightedAutomaton, TransformStats) {
    match transform(a).expect("transform") {
        TransformOutcome::Automaton { automaton, stats } => (automaton, stats),
        TransformOutcome::Counterexample(w) => {
            panic!("unexpected counterexample {w:?} on an integral language")
        }
    }
}

#[test]
fn criterion_01_worked_example_reproduction() {
    let wa = example1_automaton();
    assert_eq!(wa.n_states, 3);
    assert!(wa.integral);
    let min = minimize_k(&wa).unwrap();
    assert_eq!(min.n_states, 2);
    let (out, stats) = run_transform(&min);
    assert_eq!(out.n_states, 3);
    assert!(stats.extra_state);
    assert!(out.integral);
    assert!(equiv_counterexample(&wa, &out).unwrap().is_none());
    println!("criterion 1 (worked-example reproduction 3 -> 2 -> 3 states): PASS");
}

#[test]
fn criteria_02_03_almost_minimality_and_chain_bound() {
    let mut total = 0usize;
    for (fi, f) in fields().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + fi as u64);
        for i in 0..70 {
            let states = 2 + (i % 3);
            let target = fixtures::random_okwa(f, &['a', 'b'], states, 2, &mut rng);
            let min = minimize_k(&target).unwrap();
            let (out, stats) = run_transform(&min);
            // Criterion 2: almost-minimality and equivalence.
            assert!(
                out.n_states <= min.n_states + 1,
                "states {} > rank {} + 1",
                out.n_states,
                min.n_states
            );
            assert!(out.integral);
            assert!(equiv_counterexample(&target, &out).unwrap().is_none());
            // Criterion 3: phase-two iterations within the chain bound.
            assert!(
                stats.phase2_iters as u64 <= stats.chain_bound,
                "phase2 {} > chain bound {}",
                stats.phase2_iters,
                stats.chain_bound
            );
            total += 1;
        }
    }
    assert!(total >= 200);
    println!("criterion 2 (almost-minimality, {total} random targets): PASS");
    println!("criterion 3 (phase-2 iterations within chain bound, {total} runs): PASS");
}

#[test]
fn criterion_04_learning_end_to_end() {
    let mut total = 0usize;
    let mut worst_ratio = 0.0f64;
    for (fi, f) in fields().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + fi as u64);
        for i in 0..100 {
            let states = 2 + (i % 2);
            let target = fixtures::random_okwa(f, &['a', 'b'], states, 2, &mut rng);
            let mut teacher = SimulatedTeacher::new(target.clone());
            let out = learn_ok(&mut teacher, &LearnOptions::default()).expect("learning run");
            assert!(equiv_counterexample(&target, &out.automaton).unwrap().is_none());
            let s = &out.stats;
            assert!(
                s.equivalence_queries as u64 <= (s.rank + 1) as u64 + s.chain_bound_total,
                "equivalence queries {} > rank {} + 1 + chain bounds {}",
                s.equivalence_queries,
                s.rank,
                s.chain_bound_total
            );
            let envelope = VALUE_QUERY_ENVELOPE_FACTOR
                * s.rank.max(1) * s.rank.max(1)
                * target.alphabet.len()
                * s.max_counterexample_len().max(1);
            assert!(
                s.value_queries <= envelope,
                "value queries {} above envelope {envelope}",
                s.value_queries
            );
            let ratio = s.value_queries as f64 / (envelope / VALUE_QUERY_ENVELOPE_FACTOR) as f64;
            worst_ratio = worst_ratio.max(ratio);
            total += 1;
        }
    }
    assert!(total >= 300);
    println!(
        "criterion 4 (learning end-to-end, {total} targets, worst envelope ratio {worst_ratio:.2} of factor {VALUE_QUERY_ENVELOPE_FACTOR}): PASS"
    );
}

#[test]
fn criterion_05_counterexample_soundness() {
    let fields = fields();
    let mut count = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(5000);
    let primes = [2i64, 3, 5, 7];
    'outer: while count < 100 {
        for f in &fields {
            let base = fixtures::random_okwa(f, &['a', 'b'], 3, 2, &mut rng);
            // Perturb one transition entry by 1/p and keep the instance only
            // when some short word provably has a non-integral value.
            let letter = rng.gen_range(0..2);
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let p = primes[rng.gen_range(0..primes.len())];
            let mut trans = base.trans.clone();
            let bump = f.from_rational(BigRational::new(BigInt::one(), BigInt::from(p)));
            let old = trans[letter][(i, j)].clone();
            trans[letter][(i, j)] = f.add(&old, &bump);
            let a = WeightedAutomaton::new(
                f.clone(),
                base.alphabet.clone(),
                base.init.clone(),
                trans,
                base.final_.clone(),
            )
            .unwrap();
            let witnessed = words_up_to(2, 6).iter().any(|w| !a.eval(w).unwrap().is_integral());
            if !witnessed {
                continue;
            }
            match transform(&a).expect("transform") {
                TransformOutcome::Counterexample(w) => {
                    assert!(!a.eval(&w).unwrap().is_integral());
                }
                TransformOutcome::Automaton { .. } => {
                    panic!("non-integral language slipped through the transform")
                }
            }
            count += 1;
            if count >= 100 {
                break 'outer;
            }
        }
    }
    println!("criterion 5 (counterexample soundness, {count} perturbed automata): PASS");
}

#[test]
fn criterion_06_ideal_arithmetic_oracles() {
    // Over Q, ideal arithmetic must agree with integer gcd/lcm/CRT.
    let q = NumberField::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(6000);
    let int_ideal = |n: i64| Ideal::principal(&q, &q.from_int(n)).unwrap();
    let ideal_value = |a: &Ideal| -> BigRational { a.norm() };
    let mut cases = 0usize;
    while cases < 1000 {
        let a = rng.gen_range(1i64..200);
        let b = rng.gen_range(1i64..200);
        let ia = int_ideal(a);
        let ib = int_ideal(b);
        assert_eq!(ideal_value(&ia.add(&ib)), BigRational::from_integer(a.gcd(&b).into()));
        assert_eq!(ideal_value(&ia.mul(&ib)), BigRational::from_integer((a * b).into()));
        assert_eq!(ia.inverse().norm(), BigRational::new(BigInt::one(), a.into()));
        // Membership is divisibility.
        let x = rng.gen_range(-200i64..200);
        assert_eq!(ia.contains(&q.from_int(x)), x.rem_euclid(a) == 0);
        cases += 4;
        // Integer CRT against the ideal CRT.
        let m1 = rng.gen_range(2i64..40);
        let m2 = rng.gen_range(2i64..40);
        if m1.gcd(&m2) == 1 {
            let r1 = rng.gen_range(0..m1);
            let r2 = rng.gen_range(0..m2);
            let x = ideals::ideal_crt(
                &[int_ideal(m1), int_ideal(m2)],
                &[q.from_int(r1), q.from_int(r2)],
            )
            .unwrap();
            let xv = x.coords[0].to_integer();
            assert_eq!(xv.mod_floor(&BigInt::from(m1)), BigInt::from(r1));
            assert_eq!(xv.mod_floor(&BigInt::from(m2)), BigInt::from(r2));
            cases += 1;
        }
    }
    // Over Q(i√5): the group law and norm multiplicativity.
    let f = example1_field();
    let mut rng = ChaCha8Rng::seed_from_u64(6001);
    for _ in 0..500 {
        let a = fixtures::random_ideal(&f, 5, &mut rng);
        let b = fixtures::random_ideal(&f, 5, &mut rng);
        assert!(a.mul(&a.inverse()).is_one());
        assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
    }
    println!("criterion 6 (ideal arithmetic against integer oracles, {cases}+500 cases): PASS");
}

#[test]
fn criterion_07_hnf_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(7000);
    for case in 0..500 {
        let n = 1 + case % 3;
        let m = n + rng.gen_range(0..3);
        let a = IntMatrix::from_fn(n, m, |_, _| BigInt::from(rng.gen_range(-8i64..9)));
        let h = hnf(&a, false);
        let remixed = remix_columns(&a, &mut rng);
        let h2 = hnf(&remixed, false);
        assert_eq!(h.h, h2.h, "HNF not unique under unimodular remix");
        assert_eq!(h.pivot_map, h2.pivot_map);
        // Lattice equality in both directions.
        for c in a.columns() {
            assert!(zlattice::lattice_contains(&h2, &c).unwrap());
        }
        for c in remixed.columns() {
            assert!(zlattice::lattice_contains(&h, &c).unwrap());
        }
        // Index on full-rank cases.
        if h.rank() == n && n == m {
            let mut diag = BigInt::one();
            for j in 0..n {
                diag *= &h.h[(h.pivot_map[j], j)];
            }
            assert_eq!(zlattice::lattice_index(&a).unwrap(), diag);
            assert_eq!(diag, a.det().abs());
        }
    }
    // The worked lattice (3, 2 − i√5) has index 3.
    let gens = IntMatrix::from_fn(2, 4, |i, j| {
        let cols = [[3, 0], [0, 3], [2, -1], [5, 2]];
        BigInt::from(cols[j][i])
    });
    assert_eq!(zlattice::lattice_index(&gens).unwrap(), BigInt::from(3));
    println!("criterion 7 (HNF uniqueness/index, 500 remixes + worked lattice): PASS");
}

#[test]
fn criterion_08_pseudo_hnf_canonicity() {
    let f = example1_field();
    let mut rng = ChaCha8Rng::seed_from_u64(8000);
    let mut done = 0usize;
    while done < 200 {
        let i1 = fixtures::random_ideal(&f, 3, &mut rng);
        let i2 = fixtures::random_ideal(&f, 3, &mut rng);
        let v1 = vec![
            f.from_int_coords(&[rng.gen_range(1..4), rng.gen_range(-2..3)]),
            f.from_int_coords(&[rng.gen_range(-2..3), rng.gen_range(-2..3)]),
        ];
        let v2 = vec![
            f.from_int_coords(&[rng.gen_range(-2..3), rng.gen_range(-2..3)]),
            f.from_int_coords(&[rng.gen_range(1..4), rng.gen_range(-2..3)]),
        ];
        let m = PseudoMatrix::new(
            f.clone(),
            2,
            vec![
                PseudoElement { coeff: i1.clone(), vec: v1.clone() },
                PseudoElement { coeff: i2.clone(), vec: v2.clone() },
            ],
        );
        let Ok(b1) = okmodules::pseudo_hnf(&m) else { continue };
        // Remix: permute, rescale one pseudo-element by a field element, and
        // append a redundant generator inside the module.
        let lambda = f.from_int_coords(&[1, 1]);
        let scaled = PseudoElement {
            coeff: i1.mul_element(&lambda),
            vec: v1.iter().map(|c| f.div(c, &lambda).unwrap()).collect(),
        };
        let w: Vec<AlgNum> = {
            let x1 = &i1.basis_elements()[0];
            let x2 = &i2.basis_elements()[1];
            v1.iter()
                .zip(&v2)
                .map(|(a, b)| f.add(&f.mul(x1, a), &f.mul(x2, b)))
                .collect()
        };
        let remixed = PseudoMatrix::new(
            f.clone(),
            2,
            vec![
                PseudoElement { coeff: i2, vec: v2 },
                PseudoElement { coeff: Ideal::one(&f), vec: w },
                scaled,
            ],
        );
        let b2 = okmodules::pseudo_hnf(&remixed).unwrap();
        assert_eq!(b1.elems, b2.elems, "pseudo-HNF differs across remixes");
        let det = okmodules::determinantal_ideal(&m).unwrap();
        let prod = b1.elems.iter().fold(Ideal::one(&f), |acc, e| acc.mul(&e.coeff));
        assert_eq!(det, prod, "determinantal ideal differs from the product of the c_i");
        done += 1;
    }
    println!("criterion 8 (pseudo-HNF canonicity, {done} remixed modules): PASS");
}

#[test]
fn criterion_09_pip_linkage() {
    let mut checked = 0usize;
    for (fi, f) in [NumberField::quadratic(-5).unwrap(), NumberField::quadratic(-1).unwrap()]
        .iter()
        .enumerate()
    {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + fi as u64);
        let mut seen: Vec<Ideal> = Vec::new();
        while seen.len() < 20 {
            let a = fixtures::random_ideal(f, 4, &mut rng);
            if !a.is_integral() || seen.contains(&a) {
                continue;
            }
            let wa = fixtures::pip_automaton(&a).unwrap();
            let min = minimize_k(&wa).unwrap();
            assert_eq!(min.n_states, 2);
            let (out, stats) = run_transform(&min);
            assert!(equiv_counterexample(&wa, &out).unwrap().is_none());
            let generator = fixtures::principal_bruteforce(&a, 40);
            assert_eq!(
                stats.extra_state,
                generator.is_none(),
                "extra state {} but brute force found {:?} for an ideal of norm {}",
                stats.extra_state,
                generator,
                a.norm()
            );
            seen.push(a);
            checked += 1;
        }
    }
    println!("criterion 9 (state-minimality matches brute-force principality, {checked} ideals): PASS");
}

#[test]
fn criterion_10_norm_size_bound() {
    for f in fields() {
        let ck = f.complexity_measure();
        let log_ck = (ck.numer().to_f64().unwrap() / ck.denom().to_f64().unwrap()).log2().max(0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(10_000);
        let mut done = 0usize;
        while done < 1000 {
            let coords: Vec<BigRational> = (0..f.degree())
                .map(|_| BigRational::from_integer(rng.gen_range(-100_000i64..=100_000).into()))
                .collect();
            let a = f.from_coords(coords);
            let n = f.norm(&a);
            if n.is_zero() {
                continue;
            }
            let lhs = bigint_log2_abs(&n.to_integer());
            let rhs = f.degree() as f64 * (log_ck + f.bit_size(&a) as f64);
            assert!(lhs <= rhs, "norm-size bound violated: {lhs} > {rhs}");
            done += 1;
        }
    }
    println!("criterion 10 (norm-size bound, 1000 integral elements per field): PASS");
}

// ---- helpers ----

fn words_up_to(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
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

fn remix_columns(a: &IntMatrix, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut cols = a.columns();
    let m = cols.len();
    if m < 2 {
        return a.clone();
    }
    for _ in 0..10 {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m);
        if i == j {
            j = (j + 1) % m;
        }
        let c = BigInt::from(rng.gen_range(-3i64..4));
        let src = cols[j].clone();
        for (t, s) in cols[i].iter_mut().zip(src.iter()) {
            *t += &c * s;
        }
        if rng.gen_bool(0.3) {
            cols.swap(i, j);
        }
        if rng.gen_bool(0.2) {
            for t in cols[i].iter_mut() {
                *t = -std::mem::take(t);
            }
        }
    }
    IntMatrix::from_columns(a.rows, &cols)
}
