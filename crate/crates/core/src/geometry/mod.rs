//! Coordinates, regions, the flattened sphere and the metrics of both spaces.
//!
//! Everything here is axisymmetric: every predicate and metric depends on the
//! meridian pair `(r, z)` only. The meridian half-plane does all the work; the
//! third dimension is carried by the angle `θ` and the chart maps.

mod capsule;
mod profile;
mod regions;

pub use capsule::{AxisCapsule, CapsuleCoords};
pub use profile::{FlatSphere, ProfilePiece};
pub use regions::{RegionTag, Regions};

use crate::error::{CoreError, Result};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub type V3 = Vector3<f64>;
pub type M3 = Matrix3<f64>;

/// Normalize an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t == TAU {
        0.0
    } else {
        t
    }
}

/// Shortest signed angular difference `a - b`, in `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(TAU);
    if d > PI {
        d -= TAU;
    }
    d
}

/// Cylindrical coordinates `(θ, r, z)` of a Euclidean point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylCoords {
    pub theta: f64,
    pub r: f64,
    pub z: f64,
}

impl CylCoords {
    pub fn new(theta: f64, r: f64, z: f64) -> Self {
        assert!(r >= 0.0, "radius must be nonnegative, got {r}");
        Self {
            theta: wrap_angle(theta),
            r,
            z,
        }
    }

    /// The chart map `X : (θ, r, z) → (r cos θ, r sin θ, z)`.
    pub fn to_cartesian(&self) -> V3 {
        V3::new(
            self.r * self.theta.cos(),
            self.r * self.theta.sin(),
            self.z,
        )
    }

    pub fn from_cartesian(p: &V3) -> Self {
        let r = p.x.hypot(p.y);
        let theta = if r == 0.0 { 0.0 } else { p.y.atan2(p.x) };
        Self::new(theta, r, p.z)
    }
}

/// Convenience wrapper for the chart map `X`.
pub fn cyl_to_cart(c: CylCoords) -> V3 {
    c.to_cartesian()
}

pub fn cart_to_cyl(p: &V3) -> CylCoords {
    CylCoords::from_cartesian(p)
}

/// Handle coordinates `(θ, s, z)` on `M₂ = S²_flat × [-1, L+1]`:
/// `s` is the intrinsic arclength from the south pole along the flattened
/// sphere, `z` the handle parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandleCoords {
    pub theta: f64,
    pub s: f64,
    pub z: f64,
}

impl HandleCoords {
    pub fn new(theta: f64, s: f64, z: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            s,
            z,
        }
    }
}

/// A point of the wormhole manifold, tagged by chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ManifoldPoint {
    /// `M₁ = ℝ³ ∖ (P₁ ∪ P₂)` in cylindrical coordinates.
    M1(CylCoords),
    /// The handle `M₂` in `(θ, s, z)` coordinates.
    M2(HandleCoords),
}

impl ManifoldPoint {
    pub fn m1(theta: f64, r: f64, z: f64) -> Self {
        ManifoldPoint::M1(CylCoords::new(theta, r, z))
    }

    pub fn m2(theta: f64, s: f64, z: f64) -> Self {
        ManifoldPoint::M2(HandleCoords::new(theta, s, z))
    }

    pub fn theta(&self) -> f64 {
        match self {
            ManifoldPoint::M1(c) => c.theta,
            ManifoldPoint::M2(c) => c.theta,
        }
    }
}

/// Warp factor of the handle metric `α₂(z) dz²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Alpha2 {
    /// Constant warp `δ²`; `δ = 1` is the matched default, `δ ≪ 1` the
    /// fisheye regime.
    Const { value: f64 },
}

impl Alpha2 {
    pub fn eval(&self, _z: f64) -> f64 {
        match self {
            Alpha2::Const { value } => *value,
        }
    }

    pub fn derivative(&self, _z: f64) -> f64 {
        match self {
            Alpha2::Const { .. } => 0.0,
        }
    }
}

/// Parameters of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WormholeParams {
    /// Pole separation; the second ball is removed around `(0, 0, L)`.
    pub l: f64,
    /// Handle warp scale: `α₂ ≡ δ²`.
    pub delta: f64,
    /// Collar cutoff for sampling the singular material tensors.
    pub tau_min: f64,
    /// Residual tolerance of the meridian Newton inversion.
    pub newton_tol: f64,
    /// Normalize the Σ₂ boundary coordinate so the fitted collar metric has
    /// `α ≡ 1` (sets `α₂ ≡ k²` with `k = (L-2)/(L+6+2π)` and `t̃ = k·z`).
    pub remark1_normalization: bool,
}

impl Default for WormholeParams {
    fn default() -> Self {
        Self {
            l: 8.0,
            delta: 1.0,
            tau_min: 1e-6,
            newton_tol: 1e-12,
            remark1_normalization: false,
        }
    }
}

impl WormholeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.l > 3.0) {
            return Err(CoreError::InvalidParams(format!(
                "pole separation must satisfy L > 3, got {}",
                self.l
            )));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "warp scale delta must be positive and finite, got {}",
                self.delta
            )));
        }
        if !(self.tau_min > 0.0 && self.tau_min < 0.25) {
            return Err(CoreError::InvalidParams(format!(
                "tau_min must lie in (0, 1/4), got {}",
                self.tau_min
            )));
        }
        if !(self.newton_tol > 0.0 && self.newton_tol <= 1e-6) {
            return Err(CoreError::InvalidParams(format!(
                "newton_tol must lie in (0, 1e-6], got {}",
                self.newton_tol
            )));
        }
        Ok(())
    }

    /// Scale `k` of the Remark-1 boundary coordinate on Σ₂.
    pub fn remark1_scale(&self) -> f64 {
        (self.l - 2.0) / (self.l + 6.0 + TAU)
    }

    pub fn alpha2(&self) -> Alpha2 {
        if self.remark1_normalization {
            let k = self.remark1_scale();
            Alpha2::Const { value: k * k }
        } else {
            Alpha2::Const {
                value: self.delta * self.delta,
            }
        }
    }

    /// Scale applied to `z` to obtain the Σ₂ boundary coordinate `t̃`.
    pub fn sigma2_t_scale(&self) -> f64 {
        if self.remark1_normalization {
            self.remark1_scale()
        } else {
            1.0
        }
    }
}

/// The orthogonal frame matrix `U(x)` mapping `e₁, e₂, e₃` to the Euclidean
/// unit vectors of the `θ`, `r`, `z` directions at `x = X(θ, r, z)`.
pub fn frame_matrix(theta: f64) -> M3 {
    let (s, c) = theta.sin_cos();
    M3::from_columns(&[V3::new(-s, c, 0.0), V3::new(c, s, 0.0), V3::new(0.0, 0.0, 1.0)])
}

/// Metric of `M` in the chart basis at `p`.
///
/// `M₁`: Euclidean in cylindrical coordinates, `diag(r², 1, 1)` in `(θ, r, z)`.
/// `M₂`: product metric `diag(ρ(s)², 1, α₂(z))` in `(θ, s, z)`.
pub fn metric_m(params: &WormholeParams, p: &ManifoldPoint) -> Result<M3> {
    match p {
        ManifoldPoint::M1(c) => {
            if c.r <= 0.0 {
                return Err(CoreError::Singular(
                    "cylindrical chart degenerates on the axis (r = 0)".into(),
                ));
            }
            Ok(M3::from_diagonal(&V3::new(c.r * c.r, 1.0, 1.0)))
        }
        ManifoldPoint::M2(c) => {
            let fs = FlatSphere::new();
            if c.s <= 0.0 || c.s >= fs.total_arclength() {
                return Err(CoreError::Singular(format!(
                    "handle chart degenerates at the poles (s = {})",
                    c.s
                )));
            }
            let rho = fs.rho(c.s);
            Ok(M3::from_diagonal(&V3::new(
                rho * rho,
                1.0,
                params.alpha2().eval(c.z),
            )))
        }
    }
}

/// Inverse metric in the chart basis.
pub fn inverse_metric_m(params: &WormholeParams, p: &ManifoldPoint) -> Result<M3> {
    let g = metric_m(params, p)?;
    Ok(M3::from_diagonal(&V3::new(
        1.0 / g[(0, 0)],
        1.0 / g[(1, 1)],
        1.0 / g[(2, 2)],
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chart_map_matches_definition() {
        // (θ=0, r=1, z=2) → (1, 0, 2)
        let p = cyl_to_cart(CylCoords::new(0.0, 1.0, 2.0));
        assert_relative_eq!(p, V3::new(1.0, 0.0, 2.0), epsilon = 1e-15);
        // (θ=π/2, r=2, z=-1) → (0, 2, -1)
        let q = cyl_to_cart(CylCoords::new(PI / 2.0, 2.0, -1.0));
        assert_relative_eq!(q, V3::new(0.0, 2.0, -1.0), epsilon = 1e-15);
    }

    #[test]
    fn cylindrical_round_trip() {
        let mut x: u64 = 0x9e3779b97f4a7c15;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let c = CylCoords::new(next() * TAU, 0.1 + 4.0 * next(), 8.0 * next() - 4.0);
            let back = cart_to_cyl(&c.to_cartesian());
            assert!((back.r - c.r).abs() < 1e-14);
            assert!((back.z - c.z).abs() < 1e-14);
            assert!(angle_diff(back.theta, c.theta).abs() < 1e-13);
        }
    }

    #[test]
    fn metric_m_examples() {
        let params = WormholeParams::default();
        // M1 at r = 2: diag(4, 1, 1)
        let g = metric_m(&params, &ManifoldPoint::m1(0.3, 2.0, 5.0)).unwrap();
        assert_relative_eq!(g, M3::from_diagonal(&V3::new(4.0, 1.0, 1.0)), epsilon = 1e-14);
        // M2 at s = 1 + π/2 (tube equator, ρ = 2), α₂ ≡ 1: diag(4, 1, 1)
        let g = metric_m(&params, &ManifoldPoint::m2(0.0, 1.0 + PI / 2.0, 3.0)).unwrap();
        assert_relative_eq!(g, M3::from_diagonal(&V3::new(4.0, 1.0, 1.0)), epsilon = 1e-12);
        // M2 on the flat cap (ρ = s), α₂ ≡ δ²
        let params = WormholeParams {
            delta: 0.5,
            ..Default::default()
        };
        let g = metric_m(&params, &ManifoldPoint::m2(0.0, 0.5, 0.0)).unwrap();
        assert_relative_eq!(
            g,
            M3::from_diagonal(&V3::new(0.25, 1.0, 0.25)),
            epsilon = 1e-14
        );
    }

    #[test]
    fn metric_m_rejects_singular_points() {
        let params = WormholeParams::default();
        assert!(metric_m(&params, &ManifoldPoint::m1(0.0, 0.0, -3.0)).is_err());
        assert!(metric_m(&params, &ManifoldPoint::m2(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(WormholeParams::default().validate().is_ok());
        let bad = WormholeParams {
            l: 2.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = WormholeParams {
            delta: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn frame_matrix_is_orthogonal() {
        for k in 0..16 {
            let u = frame_matrix(k as f64 * 0.41);
            let err = (u.transpose() * u - M3::identity()).norm();
            assert!(err < 1e-14, "UᵀU deviates from I by {err}");
        }
    }
}
