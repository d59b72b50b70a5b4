//! Exact computer algebra for the equivariant quantum K-theory of the type-A
//! flag manifold `Fl_{n+1}`.
//!
//! Everything is computed on the semi-infinite side `K_H(Q_G)`: polynomial
//! representatives are evaluated through line-bundle tensor operators driven
//! by admissible subsets of `(-ε_J)`-chains in the quantum Bruhat graph.
//!
//! Module map:
//!
//! * [`weyl`]: permutations, roots, weights and the group algebra `Z[P]`.
//! * [`series`]: truncated Novikov series and polynomials in `z_j = 1 - x_j`.
//! * [`qbg`]: the quantum Bruhat graph.
//! * [`chain`]: the reduced `(-ε_J)`-chains `Γ_J`.
//! * [`chevalley`]: semi-infinite classes and the Chevalley tensor operators.
//! * [`demazure`]: division-free Demazure operators on `Z[P]` coefficients.
//! * [`grothendieck`]: quantum double Grothendieck polynomials.
//! * [`sijection`]: path sets `D_J`, their classification and the
//!   sign-reversing involution.
//! * [`verify`]: the evaluation map and the end-to-end verification suites.

pub mod chain;
pub mod chevalley;
pub mod demazure;
mod error;
pub mod exec;
pub mod grothendieck;
pub mod qbg;
pub mod series;
pub mod sijection;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use exec::Exec;
