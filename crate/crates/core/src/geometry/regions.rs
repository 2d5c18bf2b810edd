//! Signed distances and membership predicates for every region the
//! construction names, plus the device-side classifier.
//!
//! Meridian shapes (all axisymmetric):
//! * `P₁`, `P₂` — unit neighborhoods of the radial segments at `z = 0`, `z = L`;
//! * `V_t` — box `{0 ≤ r ≤ t, 1 < z < L-1}` around the inner axis segment;
//! * `A₁ = M₁ ∖ V_{1/4}`, the dumbbell complement;
//! * `K = P₃` — unit neighborhood of the vertical segment `{r = 2, -2 ≤ z ≤ L+2}`
//!   (a thick-walled tube with smoothed corners), `Σ = ∂K`;
//! * `P₄` — cylinder box `{0 ≤ r ≤ 1, -1 ≤ z ≤ L+1}`; `N₂` is its interior
//!   column, `N₁ = ℝ³ ∖ (P₃ ∪ P₄)`, `N = N₁ ∪ N₂`.

use super::capsule::{dist_to_radial_segment, dist_to_vertical_segment, signed_dist_to_box};
use super::{CylCoords, V3};
use serde::{Deserialize, Serialize};

/// Classification of a device-side point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionTag {
    N1,
    N2,
    K,
    Sigma1,
    Sigma2,
    /// Far field where the deformation is the identity.
    OutsideRelevant,
}

/// All region predicates for a given pole separation `L`.
#[derive(Debug, Clone, Copy)]
pub struct Regions {
    pub l: f64,
}

impl Regions {
    pub fn new(l: f64) -> Self {
        Self { l }
    }

    /// Signed distance to `P₁` (negative inside).
    pub fn sd_p1(&self, r: f64, z: f64) -> f64 {
        dist_to_radial_segment(r, z, 0.0, 1.0) - 1.0
    }

    /// Signed distance to `P₂`.
    pub fn sd_p2(&self, r: f64, z: f64) -> f64 {
        dist_to_radial_segment(r, z, self.l, 1.0) - 1.0
    }

    /// Signed distance to the closed neck box `V̄_t`.
    pub fn sd_neck(&self, r: f64, z: f64, t: f64) -> f64 {
        signed_dist_to_box(r, z, t, 1.0, self.l - 1.0)
    }

    /// Signed distance to the dumbbell `P₁ ∪ V̄_{1/4} ∪ P₂` whose complement
    /// is (the closure of) `A₁`.
    pub fn sd_dumbbell(&self, r: f64, z: f64) -> f64 {
        self.sd_p1(r, z)
            .min(self.sd_p2(r, z))
            .min(self.sd_neck(r, z, 0.25))
    }

    /// Signed distance to the obstacle `K = P₃` — exact for the stadium
    /// profile; this is `-τ̃` inside and `+τ̃` outside.
    pub fn sd_k(&self, r: f64, z: f64) -> f64 {
        dist_to_vertical_segment(r, z, 2.0, -2.0, self.l + 2.0) - 1.0
    }

    /// Euclidean distance to the cloaking surface `Σ = ∂K` (unsigned is
    /// `|sd_k|`); for points of `N` this is the boundary-normal coordinate τ̃.
    pub fn tau_tilde(&self, r: f64, z: f64) -> f64 {
        self.sd_k(r, z)
    }

    /// Signed distance to the cylinder box `P₄`.
    pub fn sd_p4(&self, r: f64, z: f64) -> f64 {
        signed_dist_to_box(r, z, 1.0, -1.0, self.l + 1.0)
    }

    /// Signed distance to the device solid `D_N = P₃ ∪ P₄` whose complement
    /// is `N₁`.
    pub fn sd_device(&self, r: f64, z: f64) -> f64 {
        self.sd_k(r, z).min(self.sd_p4(r, z))
    }

    /// Distance to `P₁ ∪ P₂`; the deformation is the identity where this is ≥ 4.
    pub fn dist_to_balls(&self, r: f64, z: f64) -> f64 {
        self.sd_p1(r, z).min(self.sd_p2(r, z))
    }

    /// Identity-zone defining function `ψ_out = dist(·, P₁ ∪ P₂) − 4`.
    pub fn psi_out(&self, r: f64, z: f64) -> f64 {
        self.dist_to_balls(r, z) - 4.0
    }

    pub fn in_m1(&self, r: f64, z: f64) -> bool {
        self.sd_p1(r, z) > 0.0 && self.sd_p2(r, z) > 0.0
    }

    pub fn in_n2(&self, r: f64, z: f64) -> bool {
        r < 1.0 && (-1.0..=self.l + 1.0).contains(&z)
    }

    pub fn in_n(&self, r: f64, z: f64) -> bool {
        self.sd_k(r, z) > 0.0 && (self.sd_p4(r, z) > 0.0 || self.in_n2(r, z))
    }

    /// Whether the Σ-foot of `(r, z)` lies on `Σ₂ = ∂K ∩ {r = 1, -1 ≤ z ≤ L+1}`.
    pub fn foot_on_sigma2(&self, r: f64, z: f64) -> bool {
        // The nearest ∂K point sits radially between (r, z) and the core
        // segment {r = 2}; it has radius 1 exactly when the point lies inside
        // the tube bore at bore heights.
        r < 1.0 && (-1.0..=self.l + 1.0).contains(&z)
    }

    /// Classify a device-side Cartesian point; also returns the signed
    /// distance to `∂K` (negative inside `K`).
    pub fn classify(&self, p: &V3) -> (RegionTag, f64) {
        let c = CylCoords::from_cartesian(p);
        let (r, z) = (c.r, c.z);
        let sd = self.sd_k(r, z);
        if sd.abs() < 1e-12 {
            let tag = if self.foot_on_sigma2(r, z) || (r - 1.0).abs() < 1e-12 && (-1.0..=self.l + 1.0).contains(&z) {
                RegionTag::Sigma2
            } else {
                RegionTag::Sigma1
            };
            return (tag, sd);
        }
        if sd < 0.0 {
            return (RegionTag::K, sd);
        }
        if self.in_n2(r, z) {
            return (RegionTag::N2, sd);
        }
        if self.psi_out(r, z) >= 0.0 {
            return (RegionTag::OutsideRelevant, sd);
        }
        (RegionTag::N1, sd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let reg = Regions::new(8.0);
        // Inside the tube bore: N2, distance 0.5 to the inner wall r = 1.
        let (tag, sd) = reg.classify(&V3::new(0.5, 0.0, 4.0));
        assert_eq!(tag, RegionTag::N2);
        assert!((sd - 0.5).abs() < 1e-14);
        // Inside the obstacle wall.
        let (tag, sd) = reg.classify(&V3::new(2.0, 0.0, 4.0));
        assert_eq!(tag, RegionTag::K);
        assert!(sd < 0.0);
        // Far field: identity zone.
        let (tag, _) = reg.classify(&V3::new(10.0, 0.0, 10.0));
        assert_eq!(tag, RegionTag::OutsideRelevant);
        // Under the bottom disc: still N1.
        let (tag, _) = reg.classify(&V3::new(0.5, 0.0, -1.5));
        assert_eq!(tag, RegionTag::N1);
    }

    #[test]
    fn partition_is_exhaustive_and_exclusive() {
        // Offset grid over [0, 6] × [-4, L+4] in (r, z); every point gets
        // exactly one tag by construction of classify, so check consistency
        // of the predicates instead: N = N1 ∪ N2 and K are disjoint, cover
        // everything off Σ.
        let reg = Regions::new(8.0);
        let (nr, nz) = (1000, 1000);
        let mut counts = [0usize; 4];
        for i in 0..nr {
            let r = 6.0 * (i as f64 + 0.513) / nr as f64;
            for j in 0..nz {
                let z = -4.0 + 16.0 * (j as f64 + 0.487) / nz as f64;
                let sd = reg.sd_k(r, z);
                let in_k = sd < 0.0;
                let in_n2 = reg.in_n2(r, z);
                let in_n1 = reg.sd_device(r, z) > 0.0;
                assert!(
                    !(in_k && (in_n1 || in_n2)),
                    "K overlaps N at ({r}, {z})"
                );
                assert!(
                    !(in_n1 && in_n2),
                    "N1 overlaps N2 at ({r}, {z})"
                );
                assert!(
                    in_k || in_n1 || in_n2 || sd.abs() < 1e-9 || reg.sd_p4(r, z).abs() < 1e-9,
                    "({r}, {z}) unclassified"
                );
                let idx = if in_k {
                    0
                } else if in_n2 {
                    1
                } else if in_n1 {
                    2
                } else {
                    3
                };
                counts[idx] += 1;
            }
        }
        assert!(counts[0] > 0 && counts[1] > 0 && counts[2] > 0);
    }

    #[test]
    fn axisymmetry_of_classification() {
        let reg = Regions::new(8.0);
        let samples = [(0.5, 4.0), (2.5, -1.0), (3.5, 9.0), (0.2, -2.0)];
        for (r, z) in samples {
            let base = reg.classify(&V3::new(r, 0.0, z));
            for k in 1..8 {
                let th = k as f64 * 0.7853;
                let p = V3::new(r * th.cos(), r * th.sin(), z);
                let got = reg.classify(&p);
                assert_eq!(base.0, got.0);
                assert!((base.1 - got.1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tube_wall_contains_reference_cylinder() {
        // The finite cylinder {r = 2, 0 ≤ z ≤ L} lies inside K with unit
        // clearance.
        let reg = Regions::new(8.0);
        for i in 0..50 {
            let z = 8.0 * i as f64 / 49.0;
            assert!((reg.sd_k(2.0, z) + 1.0).abs() < 1e-14);
        }
    }
}
