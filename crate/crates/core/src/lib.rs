//! Exact computations around automorphisms of free groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`word`]: reduced words in `F_n`, endomorphisms given by generator
//!   images, and the universal power/commutator decompositions in [`dark`].
//! * [`group_ring`]: `ZF_n` / `F_pF_n` arithmetic, Fox derivatives and
//!   Jacobian matrices.
//! * [`tensor`]: the truncated tensor algebra, Magnus expansions,
//!   valuations, contractions and cyclic quotients.
//! * [`lie`]: free Lie rings in Lyndon coordinates, their restricted
//!   analogues and graded derivations.
//! * [`lattice`]: exact integer and mod-`p` linear algebra.
//! * [`andreadakis`]: depth tests, Johnson morphism, the two trace maps and
//!   the lattice comparisons between the sub-Lie ring generated in degree one
//!   and the kernel of the trace.
//! * [`congruence`]: congruence filtrations of `GL_n(qZ)`.
//! * [`restricted`]: the mod-`p` analogues.
//! * [`suite`]: verification suites producing deterministic JSON reports.

pub mod andreadakis;
pub mod congruence;
pub mod dark;
pub mod error;
pub mod group_ring;
pub mod lattice;
pub mod lie;
pub mod restricted;
pub mod ring;
pub mod sampling;
pub mod suite;
pub mod tensor;
pub mod word;

pub use error::{Error, Result};
pub use lattice::{HnfBasis, IntMatrix};
pub use group_ring::{GroupRingElement, JacobianMatrix};


pub use lie::{Derivation, LieElement, LyndonBasis, RestrictedDerivation, RestrictedLieElement};
pub use ring::Ring;

pub use tensor::{CyclicClassVector, TensorPoly, Valuation};
pub use word::{Endomorphism, Letter, Word};
