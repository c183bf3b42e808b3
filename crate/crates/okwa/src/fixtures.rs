//! Reference automata and reproducible random instances.
//!
//! The centerpiece is [`pip_automaton`]: a 3-state integral automaton over
//! `Σ = {a, b}` encoding an integral ideal `𝔞` so that its language has rank
//! 2, the reachable Hankel-row module is isomorphic to `O_K ⊕ 𝔞`, and a
//! 2-state integral automaton for the language exists exactly when `𝔞` is
//! principal. Deciding state-minimality therefore decides principality.
//!
//! [`principal_bruteforce`] is the desk-scale testing oracle for that
//! equivalence: an exhaustive scan for a single generator. It lives here, in
//! the fixture layer, and is never consulted by the transform or the learner.

use crate::ideals::Ideal;
use crate::numfield::{AlgNum, FieldRef, NumberField};
use crate::okmodules::{self, PseudoElement, PseudoMatrix, Shape};
use crate::wautomata::{KMat, WeightedAutomaton};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("ideal must be integral")]
    NonIntegralIdeal,
    #[error("fixture construction failed: {0}")]
    Construction(String),
}

/// Requested fixture, reproducible from its parameters.
#[derive(Debug, Clone)]
pub enum FixtureSpec {
    /// The worked quadratic example: `K = Q(i√5)`, `𝔞 = (3, 2 − i√5)`.
    Example1,
    /// The ideal-encoding automaton for a given integral ideal.
    PipIdeal(Ideal),
    /// Seeded random integral automaton.
    Random { field: FieldRef, alphabet: Vec<char>, states: usize, coeff_bound: i64, seed: u64 },
}

impl FixtureSpec {
    pub fn build(&self) -> Result<WeightedAutomaton, FixtureError> {
        match self {
            FixtureSpec::Example1 => Ok(example1_automaton()),
            FixtureSpec::PipIdeal(a) => pip_automaton(a),
            FixtureSpec::Random { field, alphabet, states, coeff_bound, seed } => {
                use rand::SeedableRng;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(random_okwa(field, alphabet, *states, *coeff_bound, &mut rng))
            }
        }
    }
}

/// `Q(i√5)` with integral basis `{1, ω}`, `ω² = −5`.
pub fn example1_field() -> FieldRef {
    NumberField::quadratic(-5).unwrap()
}

/// The non-principal ideal `(3, 2 − ω)` of `Z[i√5]`.
pub fn example1_ideal(f: &FieldRef) -> Ideal {
    Ideal::from_generators(f, &[f.from_int(3), f.from_int_coords(&[2, -1])]).unwrap()
}

/// The 3-state automaton of the worked quadratic example.
pub fn example1_automaton() -> WeightedAutomaton {
    let f = example1_field();
    let a = example1_ideal(&f);
    pip_automaton(&a).expect("the worked ideal is integral")
}

/// The 3-state `O_K`-weighted automaton over `{a, b}` encoding `𝔞`.
///
/// Built from two generators `x, y` of `𝔞` and the isomorphism
/// `φ: 𝔞 ⊕ 𝔞^{-1} ≅ O_K²`, `φ(s, t) = (ds − ct, at − bs)`, with images
/// `(x₁, x₂) = φ(x, 0)` and `(y₁, y₂) = φ(y, 0)`:
///
/// * `init = e₀`, `final = (1, 0, 0)ᵀ`;
/// * on `a`: `q₀ → x₁q₁ + x₂q₂`, `q₁ → q₀`, `q₂ → 0`;
/// * on `b`: `q₀ → y₁q₁ + y₂q₂`, `q₁ → 0`, `q₂ → q₀`.
///
/// The language vanishes on words of odd length, the derivatives satisfy
/// `(aa)^{-1}L = x₁·L` and `(ab)^{-1}L = x₂·L`, and the Hankel-row module is
/// `O_K·L ⊕ 𝔞·D` for the common direction `D` of the one-letter derivatives,
/// so the minimal automaton over the field has 2 states while a 2-state
/// integral automaton exists exactly when `𝔞` is principal.
pub fn pip_automaton(a: &Ideal) -> Result<WeightedAutomaton, FixtureError> {
    if !a.is_integral() {
        return Err(FixtureError::NonIntegralIdeal);
    }
    let f = a.field().clone();
    // Two generators of 𝔞 via the rank-1 generating-set computation; when 𝔞
    // is visibly principal a single generator comes back and is used twice.
    let m = PseudoMatrix {
        field: f.clone(),
        ambient_dim: 1,
        elems: vec![PseudoElement { coeff: a.clone(), vec: vec![f.one()] }],
        shape: Shape::PseudoBasis,
    };
    let gens =
        okmodules::generating_set(&m).map_err(|e| FixtureError::Construction(e.to_string()))?;
    let x = gens[0][0].clone();
    let y = if gens.len() > 1 { gens[1][0].clone() } else { x.clone() };
    let (_, b_el, _, d_el) = okmodules::lemma_quadruple(a, &a.inverse())
        .map_err(|e| FixtureError::Construction(e.to_string()))?;
    // φ restricted to the first summand: φ(s, 0) = (d·s, −b·s).
    let phi = |s: &AlgNum| -> (AlgNum, AlgNum) { (f.mul(&d_el, s), f.neg(&f.mul(&b_el, s))) };
    let (x1, x2) = phi(&x);
    let (y1, y2) = phi(&y);
    let z = f.zero();
    let one = f.one();
    let ta = KMat::from_rows(
        &f,
        &[
            vec![z.clone(), x1, x2],
            vec![one.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone()],
        ],
    );
    let tb = KMat::from_rows(
        &f,
        &[
            vec![z.clone(), y1, y2],
            vec![z.clone(), z.clone(), z.clone()],
            vec![one.clone(), z.clone(), z.clone()],
        ],
    );
    let init = vec![one.clone(), z.clone(), z.clone()];
    let final_ = vec![one, z.clone(), z];
    let wa = WeightedAutomaton::new(f, vec!['a', 'b'], init, vec![ta, tb], final_)
        .map_err(|e| FixtureError::Construction(e.to_string()))?;
    if !wa.integral {
        return Err(FixtureError::Construction("encoding produced non-integral entries".into()));
    }
    Ok(wa)
}

/// Exhaustive scan for a single generator of the integral ideal `a`: every
/// integral element with coordinates bounded by `coeff_bound` is tried.
///
/// A found generator proves principality. `None` proves non-principality
/// only where the norm equation is exhaustively excluded — for `Q` and the
/// imaginary quadratic fields used at desk scale, where every generator of
/// `a` has norm exactly `N(a)` and bounded coordinates; in general it is
/// merely a failed search. Test oracle only: the transform and the learner
/// never call it.
pub fn principal_bruteforce(a: &Ideal, coeff_bound: i64) -> Option<AlgNum> {
    assert!(a.is_integral(), "brute-force scan expects an integral ideal");
    let f = a.field().clone();
    let norm = a.norm();
    let d = f.degree();
    let mut coeffs = vec![-coeff_bound; d];
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let alpha = f.from_coords(
                coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
            );
            if f.norm(&alpha).abs() == norm && a.contains(&alpha) {
                return Some(alpha);
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return None;
            }
            coeffs[k] += 1;
            if coeffs[k] <= coeff_bound {
                break;
            }
            coeffs[k] = -coeff_bound;
            k += 1;
        }
    }
}

/// Random automaton with integral entries whose coordinates are bounded by
/// `coeff_bound`; identical seeds yield identical automata.
pub fn random_okwa(
    f: &FieldRef,
    alphabet: &[char],
    states: usize,
    coeff_bound: i64,
    rng: &mut ChaCha8Rng,
) -> WeightedAutomaton {
    let d = f.degree();
    let rnd = |rng: &mut ChaCha8Rng| {
        f.from_coords(
            (0..d)
                .map(|_| BigRational::from_integer(rng.gen_range(-coeff_bound..=coeff_bound).into()))
                .collect(),
        )
    };
    let init: Vec<AlgNum> = (0..states).map(|_| rnd(rng)).collect();
    let final_: Vec<AlgNum> = (0..states).map(|_| rnd(rng)).collect();
    let trans: Vec<KMat> = alphabet
        .iter()
        .map(|_| {
            let rows: Vec<Vec<AlgNum>> =
                (0..states).map(|_| (0..states).map(|_| rnd(rng)).collect()).collect();
            KMat::from_rows(f, &rows)
        })
        .collect();
    WeightedAutomaton::new(f.clone(), alphabet.to_vec(), init, trans, final_).unwrap()
}

/// Small random integral ideal: the span of two random elements, not both zero.
pub fn random_ideal(f: &FieldRef, coeff_bound: i64, rng: &mut ChaCha8Rng) -> Ideal {
    loop {
        let g1 = f.from_coords(
            (0..f.degree())
                .map(|_| BigRational::from_integer(rng.gen_range(-coeff_bound..=coeff_bound).into()))
                .collect(),
        );
        let g2 = f.from_coords(
            (0..f.degree())
                .map(|_| BigRational::from_integer(rng.gen_range(-coeff_bound..=coeff_bound).into()))
                .collect(),
        );
        if g1.is_zero() && g2.is_zero() {
            continue;
        }
        if let Ok(a) = Ideal::from_generators(f, &[g1, g2]) {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wautomata::{self, minimize_k};
    use rand::SeedableRng;

    #[test]
    fn pip_automaton_structure() {
        let wa = example1_automaton();
        let f = &wa.field.clone();
        assert_eq!(wa.n_states, 3);
        assert!(wa.integral);
        // Zero on words of odd length; the empty word evaluates to 1.
        assert_eq!(wa.eval(&[]).unwrap(), f.one());
        assert_eq!(wa.eval(&[0]).unwrap(), f.zero());
        assert_eq!(wa.eval(&[1]).unwrap(), f.zero());
        for w in [vec![0, 0, 0], vec![0, 1, 0], vec![1, 1, 1], vec![1, 0, 1]] {
            assert_eq!(wa.eval(&w).unwrap(), f.zero());
        }
        // (aa)^{-1}L = x₁·L and (ab)^{-1}L = x₂·L, with (x₁, x₂) the image of
        // the first generator: checked behaviorally on short words.
        let x1 = wa.eval(&[0, 0]).unwrap();
        let x2 = wa.eval(&[0, 1]).unwrap();
        for w in [vec![], vec![0, 0], vec![0, 1], vec![1, 0]] {
            let mut aaw = vec![0, 0];
            aaw.extend(&w);
            let mut abw = vec![0, 1];
            abw.extend(&w);
            assert_eq!(wa.eval(&aaw).unwrap(), f.mul(&x1, &wa.eval(&w).unwrap()));
            assert_eq!(wa.eval(&abw).unwrap(), f.mul(&x2, &wa.eval(&w).unwrap()));
        }
        // The one-letter derivatives are parallel over the field (the module
        // they span has rank one, itself isomorphic to the encoded ideal),
        // and together the four length-2 values generate the unit ideal.
        let y1 = wa.eval(&[1, 0]).unwrap();
        let y2 = wa.eval(&[1, 1]).unwrap();
        assert_eq!(f.mul(&x1, &y2), f.mul(&x2, &y1));
        let f5 = example1_field();
        let values = Ideal::from_generators(&f5, &[x1, x2, y1, y2]).unwrap();
        assert!(values.is_one());
    }

    #[test]
    fn pip_automaton_minimizes_to_two_states() {
        let wa = example1_automaton();
        let m = minimize_k(&wa).unwrap();
        assert_eq!(m.n_states, 2);
        assert!(wautomata::equiv_counterexample(&wa, &m).unwrap().is_none());
    }

    #[test]
    fn pip_automaton_principal_case() {
        // 𝔞 = O_K over Q(i√5): the encoding still has 3 states and rank 2.
        let f = example1_field();
        let one = Ideal::one(&f);
        let wa = pip_automaton(&one).unwrap();
        assert_eq!(wa.n_states, 3);
        assert_eq!(minimize_k(&wa).unwrap().n_states, 2);
    }

    #[test]
    fn bruteforce_cases() {
        let q = NumberField::rationals();
        let six = Ideal::principal(&q, &q.from_int(6)).unwrap();
        let g = principal_bruteforce(&six, 10).unwrap();
        assert_eq!(Ideal::principal(&q, &g).unwrap(), six);
        // The unit ideal is generated by the first unit found in scan order.
        let g1 = principal_bruteforce(&Ideal::one(&q), 10).unwrap();
        assert_eq!(Ideal::principal(&q, &g1).unwrap(), Ideal::one(&q));

        let f = example1_field();
        // The worked ideal has norm 3 and a² + 5b² = 3 has no solution.
        assert!(principal_bruteforce(&example1_ideal(&f), 10).is_none());
    }

    #[test]
    fn random_fixture_is_reproducible() {
        let q = NumberField::rationals();
        let mut r1 = ChaCha8Rng::seed_from_u64(99);
        let mut r2 = ChaCha8Rng::seed_from_u64(99);
        let a = random_okwa(&q, &['a', 'b'], 3, 4, &mut r1);
        let b = random_okwa(&q, &['a', 'b'], 3, 4, &mut r2);
        assert_eq!(a, b);
        assert!(a.integral);
    }
}
