//! Interpolant extraction from clausal tableaux.
//!
//! Given sentences `F` and `G` with `F ⊨ G`, the crate finds a closed clausal
//! tableau for `F ∧ ¬G` and reads off an interpolant `H` with `F ⊨ H ⊨ G`:
//!
//! * [`craig`] yields Craig-Lyndon interpolants for first-order inputs, and
//!   Horn interpolants for Horn inputs;
//! * [`access`] yields access interpolants for relativized formulas, whose
//!   binding patterns are bounded by those of the inputs.
//!
//! Lower layers are usable on their own: [`syntax`] parses formulas and
//! tableaux, [`clausify`] computes clausal forms, [`prover`] contains a
//! connection prover and a hyper tableau prover, and [`transform`] rewrites
//! tableaux into the shape required for access interpolation.

pub mod access;
pub mod clausify;
pub mod craig;
pub mod logic;
pub mod prover;
pub mod syntax;
pub mod tableau;
pub mod transform;

pub use logic::{Atom, Clause, Formula, Literal, Polarity, Substitution, Term};
pub use tableau::{Side, Tableau};
