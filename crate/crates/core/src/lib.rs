//! Exact and certified-precision machinery for finite multiple Hurwitz zeta
//! values, quasi-shuffle/shuffle word algebra, double-shuffle regularization,
//! and residue-calculus parity identities.
//!
//! The crate is organized around a few layers:
//!
//! * [`indices`] — multi-indices, color vectors (roots of unity as residues),
//!   slicing and reversal.
//! * [`exact`] — exact rational arithmetic used by all finite-window sums.
//! * [`bigfloat`] / [`bounded`] — arbitrary-precision binary floats with
//!   tracked absolute error bounds.
//! * [`hurwitz`] — finite multiple Hurwitz zeta values and the six window
//!   identities (translation, decomposition, reflection, antipode,
//!   truncation, expansion).
//! * [`series`] — Taylor/Laurent expansions at integer centers, cot/csc
//!   kernel expansions, and residue assembly.
//! * [`words`] — stuffle and shuffle products on index words and the
//!   decomposition into admissible words times powers of the divergent
//!   letter.
//! * [`numeric`] — certified evaluation of convergent (colored) multiple
//!   zeta values and the regularization polynomials in `T`.
//! * [`parity`] — the parity theorems, truncated corollaries, bound lemmas
//!   and depth-reduction certificates, all evaluated as residuals.
//! * [`sweeps`] — deterministic seeded verification sweeps shared by the
//!   CLI and the acceptance suite.

pub mod bigfloat;
pub mod bounded;
pub mod config;
pub mod consts;
pub mod error;
pub mod exact;
pub mod hurwitz;
pub mod indices;
pub mod numeric;
pub mod parity;
pub mod series;
pub mod sweeps;
pub mod words;

pub use error::{Error, Result};
pub use exact::{ExactValue, Frac};
pub use indices::{ColorVector, Ends, MultiIndex, SliceRange};
