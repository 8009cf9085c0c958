//! Real roots of monic cubics x^3 - p x^2 + q x + r, plus the sign rule for
//! counting negative roots from the coefficients alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CubicError {
    #[error("discriminant {0:.3e} indicates a complex-conjugate root pair")]
    ComplexRootsDetected(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Coefficients of x^3 - p_sq x^2 + q x + r.
///
/// The quadratic coefficient is stored negated (`p_sq`) so that for cubics
/// with three real roots it equals the root sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs {
    pub p_sq: f64,
    pub q: f64,
    pub r: f64,
}

impl CubicCoeffs {
    pub fn from_roots(x0: f64, x1: f64, x2: f64) -> Self {
        Self {
            p_sq: x0 + x1 + x2,
            q: x0 * x1 + x0 * x2 + x1 * x2,
            r: -x0 * x1 * x2,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((x - self.p_sq) * x + self.q) * x + self.r
    }

    fn eval_deriv(&self, x: f64) -> f64 {
        (3.0 * x - 2.0 * self.p_sq) * x + self.q
    }

    /// Characteristic magnitude of the roots, for relative tolerances.
    fn root_scale(&self) -> f64 {
        1.0_f64
            .max(self.p_sq.abs())
            .max(self.q.abs().sqrt())
            .max(self.r.abs().cbrt())
    }
}

/// The three real roots, ascending.
///
/// Fails with `ComplexRootsDetected` when the discriminant is negative beyond
/// a relative tolerance of 1e-9 on its natural scale.
pub fn cubic_real_roots(c: &CubicCoeffs) -> Result<[f64; 3], CubicError> {
    let p = c.p_sq;
    // depress: x = y + p/3 gives y^3 + a y + b
    let a = c.q - p * p / 3.0;
    let b = -2.0 * p * p * p / 27.0 + p * c.q / 3.0 + c.r;
    let disc = -4.0 * a * a * a - 27.0 * b * b;
    let scale = c.root_scale();
    let disc_tol = 1e-9 * scale.powi(6);
    if disc < -disc_tol {
        return Err(CubicError::ComplexRootsDetected(disc));
    }

    let shift = p / 3.0;
    let mut roots = if a < -f64::EPSILON * scale * scale {
        let m = 2.0 * (-a / 3.0).sqrt();
        let cos3t = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
        let theta = cos3t.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [
            m * theta.cos() + shift,
            m * (theta - tau).cos() + shift,
            m * (theta - 2.0 * tau).cos() + shift,
        ]
    } else {
        // a ~ 0 within the accepted region forces b ~ 0: near-triple root
        let y = (-b).cbrt();
        [y + shift; 3]
    };

    // one Newton step against the undepressed cubic claws back the shift error
    let deriv_floor = 1e-8 * scale * scale;
    for x in roots.iter_mut() {
        let d = c.eval_deriv(*x);
        if d.abs() > deriv_floor {
            *x -= c.eval(*x) / d;
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Whether exactly two of the three real roots are negative, decided from the
/// coefficient signs: with root sum p_sq >= 0, that holds iff q < 0 and r < 0.
pub fn two_negative_roots_rule(c: &CubicCoeffs) -> Result<bool, CubicError> {
    if c.p_sq < 0.0 {
        return Err(CubicError::PreconditionViolated(format!(
            "root sum p_sq = {} is negative",
            c.p_sq
        )));
    }
    match cubic_real_roots(c) {
        Ok(_) => {}
        Err(CubicError::ComplexRootsDetected(d)) => {
            return Err(CubicError::PreconditionViolated(format!(
                "cubic has complex roots (discriminant {d:.3e})"
            )))
        }
        Err(e) => return Err(e),
    }
    Ok(c.q < 0.0 && c.r < 0.0)
}
