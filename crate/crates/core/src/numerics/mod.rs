//! Quadrature, Monte-Carlo integration and special functions.

mod gamma;
mod montecarlo;
mod quadrature;

pub use gamma::euler_gamma;
pub use montecarlo::{mc_integrate_gaussian3d, MIN_SAMPLES};
pub use quadrature::{
    integrate_1d, integrate_2d, Interval, QuadratureResult, Rectangle, Tolerance, EVALUATION_BUDGET,
};
