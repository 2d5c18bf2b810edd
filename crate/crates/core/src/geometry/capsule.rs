//! Meridian distance helpers and the polar-like capsule coordinate system
//! around the axis segment `{r = 0, 0 ≤ z ≤ L}`.
//!
//! Every solid in the construction is, in the meridian half-plane, a
//! unit-neighborhood of a segment or an axis-aligned box, so all signed
//! distances reduce to the two helpers below.

/// Distance from the meridian point `(r, z)` to the vertical segment
/// `{r = r0, z0 ≤ z ≤ z1}`.
pub fn dist_to_vertical_segment(r: f64, z: f64, r0: f64, z0: f64, z1: f64) -> f64 {
    let dz = (z0 - z).max(z - z1).max(0.0);
    (r - r0).hypot(dz)
}

/// Distance from `(r, z)` to the horizontal segment `{z = z0, 0 ≤ r ≤ r1}`.
pub fn dist_to_radial_segment(r: f64, z: f64, z0: f64, r1: f64) -> f64 {
    let dr = (r - r1).max(0.0);
    dr.hypot(z - z0)
}

/// Signed distance from `(r, z)` to the box `{0 ≤ r ≤ rmax, z0 ≤ z ≤ z1}`
/// (negative inside).
pub fn signed_dist_to_box(r: f64, z: f64, rmax: f64, z0: f64, z1: f64) -> f64 {
    let dr = r - rmax;
    let dz = (z0 - z).max(z - z1);
    if dr <= 0.0 && dz <= 0.0 {
        dr.max(dz)
    } else {
        dr.max(0.0).hypot(dz.max(0.0))
    }
}

/// Capsule coordinates `(u, ς)` of a meridian point relative to the axis
/// segment `{r = 0, 0 ≤ z ≤ L}`: `ς` is the distance to the segment and `u`
/// parametrizes the fibration rays (downward fan, side rays, upward fan).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapsuleCoords {
    pub u: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AxisCapsule {
    pub l: f64,
}

impl AxisCapsule {
    pub fn new(l: f64) -> Self {
        Self { l }
    }

    pub fn u_max(&self) -> f64 {
        std::f64::consts::PI + self.l
    }

    /// Distance `ς` to the axis segment.
    pub fn sigma(&self, r: f64, z: f64) -> f64 {
        let dz = (-z).max(z - self.l).max(0.0);
        r.hypot(dz)
    }

    pub fn coords(&self, r: f64, z: f64) -> CapsuleCoords {
        use std::f64::consts::FRAC_PI_2;
        let u = if z < 0.0 {
            r.atan2(-z)
        } else if z <= self.l {
            FRAC_PI_2 + z
        } else {
            FRAC_PI_2 + self.l + (z - self.l).atan2(r)
        };
        CapsuleCoords {
            u,
            sigma: self.sigma(r, z),
        }
    }

    /// Ray origin and unit direction for parameter `u`.
    pub fn ray(&self, u: f64) -> ((f64, f64), (f64, f64)) {
        use std::f64::consts::FRAC_PI_2;
        if u <= FRAC_PI_2 {
            ((0.0, 0.0), (u.sin(), -u.cos()))
        } else if u <= FRAC_PI_2 + self.l {
            ((0.0, u - FRAC_PI_2), (1.0, 0.0))
        } else {
            let beta = u - FRAC_PI_2 - self.l;
            ((0.0, self.l), (beta.cos(), beta.sin()))
        }
    }

    /// The point at capsule coordinates `(u, ς)`.
    pub fn point(&self, u: f64, sigma: f64) -> (f64, f64) {
        let ((or, oz), (dr, dz)) = self.ray(u);
        (or + sigma * dr, oz + sigma * dz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capsule_coords_round_trip() {
        let cap = AxisCapsule::new(8.0);
        let pts = [
            (0.5, -2.0),
            (3.0, -0.5),
            (1.0, 4.0),
            (2.0, 8.5),
            (0.3, 9.5),
            (4.0, 3.0),
        ];
        for (r, z) in pts {
            let c = cap.coords(r, z);
            let (r2, z2) = cap.point(c.u, c.sigma);
            assert!(
                (r - r2).abs() < 1e-12 && (z - z2).abs() < 1e-12,
                "({r},{z}) -> ({r2},{z2})"
            );
        }
    }

    #[test]
    fn signed_box_distance() {
        assert!((signed_dist_to_box(0.5, 4.0, 0.25, 1.0, 7.0) - 0.25).abs() < 1e-15);
        assert!((signed_dist_to_box(0.1, 4.0, 0.25, 1.0, 7.0) + 0.15).abs() < 1e-15);
        let d = signed_dist_to_box(0.5, 0.5, 0.25, 1.0, 7.0);
        assert!((d - (0.25f64.hypot(0.5))).abs() < 1e-15);
    }
}
