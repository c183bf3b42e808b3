//! Exact arithmetic for weighted automata over number rings.
//!
//! The crate provides, bottom up:
//!
//! * [`zlattice`] — arbitrary-precision integer matrices, the column Hermite
//!   normal form, and exact rational linear algebra;
//! * [`numfield`] — a number field `K = Q(θ)` presented by an integral basis
//!   of its ring of integers `O_K`, with exact element arithmetic;
//! * [`ideals`] — fractional ideals of `O_K` as Z-lattices in HNF, including
//!   factor refinement, ideal CRT and two-element generation;
//! * [`okmodules`] — finitely generated torsion-free `O_K`-modules via
//!   pseudo-generating sets: pseudo-HNF, determinantal ideals, chain bounds,
//!   and almost-minimal generating sets;
//! * [`wautomata`] — weighted automata over `K`: evaluation, forward/backward
//!   bases, conjugation, minimization and equivalence testing;
//! * [`transform`] — the reduction that turns a `K`-weighted automaton into an
//!   equivalent almost-minimal `O_K`-weighted automaton, or produces a word
//!   whose value is not an algebraic integer;
//! * [`learn`] — exact active learning of `O_K`-weighted automata from value
//!   and equivalence queries;
//! * [`json`], [`fixtures`], [`cli`] — serialization, reference automata
//!   (including the principal-ideal encoding), and the `okwa` command line.
//!
//! All computation is exact: elements of `K` are vectors of arbitrary-precision
//! rationals over the integral basis, ideals and modules are integer lattices,
//! and no floating point enters any decision. Complex embeddings exist only as
//! interval diagnostics.
//!
//! Every value in the crate is immutable once built; operations are pure
//! functions, so values can be shared freely across threads.
//!
//! ```
//! use okwa::numfield::NumberField;
//!
//! // Q(i√5): minimal polynomial x² + 5, integral basis {1, ω}.
//! let f = NumberField::quadratic(-5).unwrap();
//! let a = f.from_int_coords(&[2, -1]); // 2 − ω
//! let b = f.from_int_coords(&[-1, 1]); // ω − 1
//! assert_eq!(f.mul(&a, &b), f.from_int_coords(&[3, 3])); // 3 + 3ω
//! assert_eq!(f.norm(&a), num_rational::BigRational::from_integer(9.into()));
//! ```

pub mod cli;
pub mod fixtures;
pub mod ideals;
pub mod json;
pub mod learn;
pub mod numfield;
pub mod okmodules;
pub mod transform;
pub mod wautomata;
pub mod zlattice;
