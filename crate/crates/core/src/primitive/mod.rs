//! The pair calculus on `Ω ⊕ Ω`: boundary map, primitive superconnections,
//! their even powers, transgression along families and characteristic classes.

pub mod charclass;
pub mod conn;
pub mod family;
pub mod pair;
pub mod series;

pub use charclass::{a_hat, a_hat_with_order, check_nilpotent, chern_character, degree_zero_part, pair_exp};
pub use conn::{
    bianchi_residual, closedness_residual, derivative_coeffs, eval_poly_at_square, prim_bracket,
    prim_power, prim_square, PrimSuperConn, SquarePowers,
};
pub use family::{
    family_at, family_velocity, transgress_between, transgression_residual,
    velocity_times_fprime, PrimFamily,
};
pub use pair::{boundary_partial, pair_product, str_bold, EndPair, Grading, ScalarPair};
pub use series::{a_hat_log_series, Series};
