//! The radial spread `G₀ : M₁ ∖ γ₁ → A₁`.
//!
//! Identity outside `V_{1/2} = {0 ≤ r ≤ 1/2, 1 < z < L-1}`; inside, the
//! neighborhood of the inner axis segment is pushed off the axis,
//! `X(θ, r, z) ↦ X(θ, 1/4 + r/2, z)`. The map is Lipschitz; its differential
//! in Euclidean coordinates is `U(y)·diag((1/4 + r/2)/r, 1/2, 1)·U(x)⁻¹`.

use crate::error::{CoreError, Result};
use crate::geometry::{frame_matrix, M3, V3};

#[derive(Debug, Clone, Copy)]
pub struct RadialSpread {
    pub l: f64,
}

impl RadialSpread {
    pub fn new(l: f64) -> Self {
        Self { l }
    }

    fn active(&self, r: f64, z: f64) -> bool {
        // Inclusive in z so that boundary evaluation on the exposed caps
        // agrees with the limit from inside M₁ (the only side the domain has).
        r <= 0.5 && (1.0..=self.l - 1.0).contains(&z)
    }

    /// Meridian action on `(r, z)`.
    pub fn forward_rz(&self, r: f64, z: f64) -> (f64, f64) {
        if self.active(r, z) {
            (0.25 + 0.5 * r, z)
        } else {
            (r, z)
        }
    }

    /// Meridian inverse on `(r, z) ∈ A₁`.
    pub fn inverse_rz(&self, r: f64, z: f64) -> (f64, f64) {
        if (0.25..=0.5).contains(&r) && (1.0..=self.l - 1.0).contains(&z) {
            (2.0 * (r - 0.25), z)
        } else {
            (r, z)
        }
    }

    /// Meridian 2×2 differential `∂(R, Z)/∂(r, z)` and the angular factor
    /// `R/r` (the θθ entry of the Euclidean differential).
    pub fn jacobian_rz(&self, r: f64, z: f64) -> Result<(M3, f64)> {
        if self.active(r, z) {
            if r <= 0.0 {
                return Err(CoreError::Singular(
                    "radial spread differential is unbounded on γ₁ (r = 0)".into(),
                ));
            }
            let theta_fac = (0.25 + 0.5 * r) / r;
            Ok((
                M3::from_diagonal(&V3::new(theta_fac, 0.5, 1.0)),
                theta_fac,
            ))
        } else {
            Ok((M3::identity(), 1.0))
        }
    }

    /// Full Euclidean differential `U(y)·diag(·)·U(x)⁻¹` at `x = X(θ, r, z)`.
    pub fn jacobian_euclidean(&self, theta: f64, r: f64, z: f64) -> Result<M3> {
        let (diag, _) = self.jacobian_rz(r, z)?;
        let u = frame_matrix(theta);
        Ok(u * diag * u.transpose())
    }
}
