//! Geometry over the field with one element.
//!
//! The crate is organized bottom-up:
//!
//! - [`abelian`]: finitely generated abelian groups in invariant-factor form,
//!   Smith normal form, hom-set counting. These are the value groups for
//!   everything above.
//! - [`monoid`]: pointed commutative monoids, their prime spectra,
//!   localizations, residue maps, and hom-set enumeration.
//! - [`scheme`]: the finite spaces obtained from monoid spectra (affine
//!   spaces, tori, roots of unity, the projective line), point counting over
//!   the degree-n extensions, and the counting polynomial.
//! - [`zeta`]: zeta functions of such spaces as divisors on the integer line,
//!   built from tensor-power factors, plus the limit and Riemann-sum
//!   evaluations that connect counts to the divisor.
//! - [`ringbridge`]: the base change to ordinary rings: monoid rings, the
//!   sign-extension quotient, and point counts over prime fields.
//! - [`analytic`]: the numerical side: zeta on the critical line, Hardy's
//!   function, zero tables, Chebyshev-type prime sums, and the
//!   explicit-formula reconstruction of the counting distribution.
//! - [`verify`]: the acceptance checks wired into both the test suite and the
//!   CLI `verify` subcommand.
//!
//! Heavy inner loops are data-parallel through [`par`]; disabling the
//! `parallel` feature swaps in sequential fallbacks with bit-identical
//! results.

pub mod abelian;
pub mod analytic;
pub mod monoid;
pub mod par;
pub mod ringbridge;
pub mod scheme;
pub mod verify;
pub mod zeta;
