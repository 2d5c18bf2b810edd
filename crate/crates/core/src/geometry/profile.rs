//! Arclength parametrization of the flattened sphere `S²_flat = ∂P₁`.
//!
//! In the meridian half-plane, `P₁` is the unit-distance neighborhood of the
//! radial segment `{0 ≤ r ≤ 1, z = 0}`: a square capped by the circle
//! `(r-1)² + z² = 1`. Traced by arclength `s` from the south pole `(0, -1)`,
//! the boundary runs over the flat bottom disc, the outer semicircle and the
//! flat top disc; the total arclength is `Λ = 2 + π`.

use crate::error::{CoreError, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfilePiece {
    BottomCap,
    Arc,
    TopCap,
}

/// The `(ρ, ζ)` profile of `S²_flat` by arclength from the south pole.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatSphere;

impl FlatSphere {
    pub fn new() -> Self {
        FlatSphere
    }

    /// Total south-pole-to-north-pole arclength `Λ = 2 + π`.
    pub fn total_arclength(&self) -> f64 {
        2.0 + PI
    }

    pub fn piece(&self, s: f64) -> ProfilePiece {
        if s <= 1.0 {
            ProfilePiece::BottomCap
        } else if s <= 1.0 + PI {
            ProfilePiece::Arc
        } else {
            ProfilePiece::TopCap
        }
    }

    /// Profile point `(ρ, ζ)`: axis distance and height.
    pub fn point(&self, s: f64) -> Result<(f64, f64)> {
        let lambda = self.total_arclength();
        if !(0.0..=lambda).contains(&s) {
            return Err(CoreError::OutOfDomain(format!(
                "profile arclength {s} outside [0, {lambda}]"
            )));
        }
        Ok(match self.piece(s) {
            ProfilePiece::BottomCap => (s, -1.0),
            ProfilePiece::Arc => (1.0 + (s - 1.0).sin(), -(s - 1.0).cos()),
            ProfilePiece::TopCap => (lambda - s, 1.0),
        })
    }

    /// Axis distance `ρ(s)`; the `g₂` angular metric factor is `ρ²`.
    pub fn rho(&self, s: f64) -> f64 {
        match self.piece(s) {
            ProfilePiece::BottomCap => s,
            ProfilePiece::Arc => 1.0 + (s - 1.0).sin(),
            ProfilePiece::TopCap => self.total_arclength() - s,
        }
    }

    pub fn rho_prime(&self, s: f64) -> f64 {
        match self.piece(s) {
            ProfilePiece::BottomCap => 1.0,
            ProfilePiece::Arc => (s - 1.0).cos(),
            ProfilePiece::TopCap => -1.0,
        }
    }

    /// Unit tangent `(dρ/ds, dζ/ds)`.
    pub fn tangent(&self, s: f64) -> (f64, f64) {
        match self.piece(s) {
            ProfilePiece::BottomCap => (1.0, 0.0),
            ProfilePiece::Arc => ((s - 1.0).cos(), (s - 1.0).sin()),
            ProfilePiece::TopCap => (-1.0, 0.0),
        }
    }

    /// Arclength of the boundary point `(r, z) ∈ ∂P₁` (meridian).
    pub fn arclength_of_point(&self, r: f64, z: f64) -> Result<f64> {
        let on_bottom = (z + 1.0).abs() < 1e-9 && (0.0..=1.0 + 1e-9).contains(&r);
        let on_top = (z - 1.0).abs() < 1e-9 && (0.0..=1.0 + 1e-9).contains(&r);
        let arc_res = (r - 1.0).hypot(z) - 1.0;
        if on_bottom && r <= 1.0 {
            return Ok(r.min(1.0));
        }
        if on_top && r <= 1.0 {
            return Ok(self.total_arclength() - r.min(1.0));
        }
        if arc_res.abs() < 1e-9 && r >= 1.0 - 1e-9 {
            let phi = (r - 1.0).atan2(-z);
            return Ok(1.0 + phi.clamp(0.0, PI));
        }
        Err(CoreError::OutOfDomain(format!(
            "({r}, {z}) does not lie on the flattened sphere"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_and_equator() {
        let fs = FlatSphere::new();
        assert_eq!(fs.point(0.0).unwrap(), (0.0, -1.0));
        let lambda = fs.total_arclength();
        let (rho, zeta) = fs.point(lambda).unwrap();
        assert!(rho.abs() < 1e-15 && (zeta - 1.0).abs() < 1e-15);
        // Outermost point of the tube circle (r-1)² + z² = 1: maximizing r on
        // the constraint gives (2, 0) at arclength 1 + π/2.
        let (rho, zeta) = fs.point(1.0 + PI / 2.0).unwrap();
        assert!((rho - 2.0).abs() < 1e-15 && zeta.abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        let fs = FlatSphere::new();
        assert!(fs.point(-0.1).is_err());
        assert!(fs.point(2.0 + PI + 0.1).is_err());
    }

    #[test]
    fn arclength_parametrization_unit_speed() {
        // |d(ρ,ζ)/ds| = 1 by central differences at interior points away from
        // the junctions (curvature jumps there but the tangent is continuous).
        let fs = FlatSphere::new();
        let lambda = fs.total_arclength();
        let h = 1e-5;
        let n = 1000;
        let mut checked = 0;
        for i in 0..n {
            let s = lambda * (i as f64 + 0.5) / n as f64;
            if (s - 1.0).abs() < 2.0 * h || (s - 1.0 - PI).abs() < 2.0 * h {
                continue;
            }
            let (rp, zp) = fs.point(s + h).unwrap();
            let (rm, zm) = fs.point(s - h).unwrap();
            let speed = ((rp - rm) / (2.0 * h)).hypot((zp - zm) / (2.0 * h));
            assert!(
                (speed - 1.0).abs() < 1e-10,
                "speed {speed} at s = {s} deviates from 1"
            );
            checked += 1;
        }
        assert!(checked > 990);
    }

    #[test]
    fn continuity_at_junctions() {
        let fs = FlatSphere::new();
        for s0 in [1.0, 1.0 + PI] {
            let (ra, za) = fs.point(s0 - 1e-13).unwrap();
            let (rb, zb) = fs.point(s0 + 1e-13).unwrap();
            assert!((ra - rb).abs() < 1e-12 && (za - zb).abs() < 1e-12);
        }
    }

    #[test]
    fn point_to_arclength_round_trip() {
        let fs = FlatSphere::new();
        for i in 0..200 {
            let s = fs.total_arclength() * (i as f64 + 0.5) / 200.0;
            let (r, z) = fs.point(s).unwrap();
            let back = fs.arclength_of_point(r, z).unwrap();
            assert!((back - s).abs() < 1e-9, "s = {s}, back = {back}");
        }
    }
}
