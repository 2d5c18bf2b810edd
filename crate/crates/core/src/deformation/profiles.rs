//! Meridian boundary profiles of the two deformation regions.
//!
//! `Γ₀ = ∂A₁`: bottom cap of `P₁`, its outer arc, the exposed top-cap strip,
//! the neck wall `Σ₀ = {r = 1/4, 1 ≤ z ≤ L-1}`, then mirrored around `P₂`.
//! `Γ₁ = ∂N₁`: bottom disc, inner-wall stub, torus cap, outer wall, mirrored.
//! Both are parametrized by arclength from the bottom axis point `(0, -1)`
//! to the top axis point `(0, L+1)` and expose position, unit tangent, the
//! unit normal pointing into the region, and the offset curvature `κ`
//! (defined by `ν' = κ T`, so a normal offset at depth `d` stretches
//! tangentially by `1 + κ d`).

use crate::geometry::{FlatSphere, Regions};
use std::f64::consts::PI;

pub type P2 = (f64, f64);

#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub pos: P2,
    pub tangent: P2,
    /// Unit normal into the region (away from the solid).
    pub normal: P2,
    pub curvature: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Foot {
    pub dist: f64,
    pub param: f64,
}

fn mirror_point(l: f64, p: BoundaryPoint) -> BoundaryPoint {
    BoundaryPoint {
        pos: (p.pos.0, l - p.pos.1),
        tangent: (-p.tangent.0, p.tangent.1),
        normal: (p.normal.0, -p.normal.1),
        curvature: p.curvature,
    }
}

/// `∂A₁`, the boundary of the dumbbell complement.
#[derive(Debug, Clone, Copy)]
pub struct SourceProfile {
    pub l: f64,
}

impl SourceProfile {
    pub fn new(l: f64) -> Self {
        Self { l }
    }

    /// Arclength of the corner where the exposed top cap meets `Σ₀`.
    pub fn corner(&self) -> f64 {
        1.75 + PI
    }

    pub fn total(&self) -> f64 {
        self.l + 1.5 + 2.0 * PI
    }

    pub fn half(&self) -> f64 {
        0.5 * self.total()
    }

    pub fn eval(&self, a: f64) -> BoundaryPoint {
        let half = self.half();
        if a > half {
            return mirror_point(self.l, self.eval_lower(self.total() - a));
        }
        self.eval_lower(a)
    }

    fn eval_lower(&self, a: f64) -> BoundaryPoint {
        let ac = self.corner();
        debug_assert!((-1e-9..=self.half() + 1e-9).contains(&a));
        if a <= 1.0 {
            BoundaryPoint {
                pos: (a, -1.0),
                tangent: (1.0, 0.0),
                normal: (0.0, -1.0),
                curvature: 0.0,
            }
        } else if a <= 1.0 + PI {
            let phi = a - 1.0;
            BoundaryPoint {
                pos: (1.0 + phi.sin(), -phi.cos()),
                tangent: (phi.cos(), phi.sin()),
                normal: (phi.sin(), -phi.cos()),
                curvature: 1.0,
            }
        } else if a <= ac {
            BoundaryPoint {
                pos: (2.0 + PI - a, 1.0),
                tangent: (-1.0, 0.0),
                normal: (0.0, 1.0),
                curvature: 0.0,
            }
        } else {
            BoundaryPoint {
                pos: (0.25, 1.0 + (a - ac)),
                tangent: (0.0, 1.0),
                normal: (1.0, 0.0),
                curvature: 0.0,
            }
        }
    }

    /// Nearest boundary point for `(r, z)` outside the dumbbell: distance and
    /// the `Γ₀` arclength of the foot. On corner-diagonal ties either branch
    /// may be returned; the collar correspondence makes both agree.
    pub fn foot(&self, r: f64, z: f64) -> Foot {
        let reg = Regions::new(self.l);
        let fs = FlatSphere::new();
        let mut best = Foot {
            dist: f64::INFINITY,
            param: 0.0,
        };

        // P1 capsule.
        let d1 = reg.sd_p1(r, z);
        if d1 < best.dist {
            let s = self.ball_foot_arclength(&fs, r, z, 0.0);
            best = Foot {
                dist: d1,
                param: s.min(self.corner()),
            };
        }
        // P2 capsule (mirror frame).
        let d2 = reg.sd_p2(r, z);
        if d2 < best.dist {
            let s = self.ball_foot_arclength(&fs, r, self.l - z, 0.0);
            best = Foot {
                dist: d2,
                param: self.total() - s.min(self.corner()),
            };
        }
        // Neck wall Σ₀ (only the exposed face contributes; box-corner feet
        // coincide with P1/P2 feet).
        if (1.0..=self.l - 1.0).contains(&z) {
            let dn = r - 0.25;
            if dn < best.dist {
                best = Foot {
                    dist: dn,
                    param: self.corner() + (z - 1.0),
                };
            }
        }
        best
    }

    /// Arclength (in the lower-ball frame shifted so its core sits at z=0)
    /// of the nearest `∂P₁` point.
    fn ball_foot_arclength(&self, fs: &FlatSphere, r: f64, z: f64, z0: f64) -> f64 {
        let zz = z - z0;
        // Foot of (r, zz) on the radial segment {0 ≤ r ≤ 1, z = 0}.
        let sr = r.min(1.0);
        let (dr, dz) = (r - sr, zz);
        let len = dr.hypot(dz);
        if len < 1e-12 {
            // On the core segment: undefined direction; callers never hit
            // this for domain points.
            return 0.0;
        }
        let b = (sr + dr / len, dz / len);
        fs.arclength_of_point(b.0, b.1).unwrap_or_else(|_| {
            // Numerical guard: project the angle directly.
            if b.1 <= -1.0 + 1e-9 {
                b.0.min(1.0)
            } else if b.1 >= 1.0 - 1e-9 {
                fs.total_arclength() - b.0.min(1.0)
            } else {
                1.0 + (b.0 - 1.0).atan2(-b.1).clamp(0.0, PI)
            }
        })
    }
}

/// `∂N₁`, the boundary of the device-solid complement.
#[derive(Debug, Clone, Copy)]
pub struct TargetProfile {
    pub l: f64,
}

impl TargetProfile {
    pub fn new(l: f64) -> Self {
        Self { l }
    }

    /// Arclength of the disc-edge corner `(1, -1)`.
    pub fn corner(&self) -> f64 {
        1.0
    }

    pub fn total(&self) -> f64 {
        self.l + 8.0 + 2.0 * PI
    }

    pub fn half(&self) -> f64 {
        0.5 * self.total()
    }

    /// Arclength of Σ₁ (everything between the two disc edges).
    pub fn sigma1_len(&self) -> f64 {
        self.l + 6.0 + 2.0 * PI
    }

    pub fn eval(&self, a: f64) -> BoundaryPoint {
        let half = self.half();
        if a > half {
            return mirror_point(self.l, self.eval_lower(self.total() - a));
        }
        self.eval_lower(a)
    }

    fn eval_lower(&self, a: f64) -> BoundaryPoint {
        if a <= 1.0 {
            BoundaryPoint {
                pos: (a, -1.0),
                tangent: (1.0, 0.0),
                normal: (0.0, -1.0),
                curvature: 0.0,
            }
        } else if a <= 2.0 {
            BoundaryPoint {
                pos: (1.0, -a),
                tangent: (0.0, -1.0),
                normal: (-1.0, 0.0),
                curvature: 0.0,
            }
        } else if a <= 2.0 + PI {
            let psi = a - 2.0;
            BoundaryPoint {
                pos: (2.0 - psi.cos(), -2.0 - psi.sin()),
                tangent: (psi.sin(), -psi.cos()),
                normal: (-psi.cos(), -psi.sin()),
                curvature: 1.0,
            }
        } else {
            BoundaryPoint {
                pos: (3.0, a - 4.0 - PI),
                tangent: (0.0, 1.0),
                normal: (1.0, 0.0),
                curvature: 0.0,
            }
        }
    }

    /// Nearest `Γ₁` point for `(r, z) ∈ N₁`.
    pub fn foot(&self, r: f64, z: f64) -> Foot {
        if z > 0.5 * self.l {
            let f = self.foot_lower(r, self.l - z);
            return Foot {
                dist: f.dist,
                param: self.total() - f.param,
            };
        }
        self.foot_lower(r, z)
    }

    fn foot_lower(&self, r: f64, z: f64) -> Foot {
        let reg = Regions::new(self.l);
        let mut best = Foot {
            dist: f64::INFINITY,
            param: 0.0,
        };

        // Obstacle capsule K (lower portion).
        let dk = reg.sd_k(r, z);
        if dk < best.dist {
            let zc = z.clamp(-2.0, self.l + 2.0);
            let (dr, dz) = (r - 2.0, z - zc);
            let len = dr.hypot(dz);
            if len > 1e-12 {
                let b = (2.0 + dr / len, zc + dz / len);
                let param = if b.1 < -2.0 {
                    // torus cap
                    let psi = (-(b.1 + 2.0)).atan2(2.0 - b.0).clamp(0.0, PI);
                    2.0 + psi
                } else if b.0 < 2.0 {
                    // inner wall; N₁ feet land on the stub z ∈ [-2, -1]
                    1.0 + (-1.0 - b.1).clamp(0.0, 1.0)
                } else {
                    // outer wall
                    2.0 + PI + (b.1 + 2.0)
                };
                best = Foot { dist: dk, param };
            }
        }
        // Bottom disc of P4 (exposed for r ≤ 1, z < -1).
        if r <= 1.0 && z < -1.0 {
            let dd = -1.0 - z;
            if dd < best.dist {
                best = Foot {
                    dist: dd,
                    param: r,
                };
            }
        }
        best
    }
}
