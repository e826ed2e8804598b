use crate::error::{Error, Result};

/// Euler Gamma function for positive real arguments.
pub fn euler_gamma(n: f64) -> Result<f64> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::domain("gamma argument", n));
    }
    Ok(libm::tgamma(n))
}
