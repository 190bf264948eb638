//! Exact symbolic calculus for superbundle-valued forms on a polynomial chart
//! of a symplectic manifold.
//!
//! The crate builds primitive superconnections `𝔸 = (A, B, ω)` acting on pairs
//! of forms, checks the primitive Bianchi identity and the transgression
//! formula as literal zero residuals over the rationals, and evaluates the
//! primitive Chern character and Â-genus.

pub mod circle_model;
pub mod coefficients;
pub mod endforms;
pub mod error;
pub mod forms;
pub mod harness;
pub mod oracle;
pub mod primitive;
pub mod random;
pub mod syntax;

pub use coefficients::{Poly, Rational};
pub use endforms::{EndForm, Parity, SuperBundle, SuperConn};
pub use error::{Error, Result};
pub use forms::{Blade, Chart, Form, SymplecticForm};
pub use primitive::{EndPair, Grading, PrimFamily, PrimSuperConn, ScalarPair};
