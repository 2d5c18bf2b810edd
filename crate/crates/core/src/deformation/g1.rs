//! The meridian profile morph `G₁ : A₁ → N₁`.
//!
//! Three regimes, glued C¹ along their seams:
//!
//! * **Collar** (boundary distance ≤ `t_mid`): exact normal-offset transport,
//!   `Γ₀(a) + d ν₀ ↦ Γ₁(φ(a)) + d ν₁`. Speed-1 windows around the profile
//!   corners make the offsets rigid across the corner diagonals, so foot
//!   ambiguity there is harmless.
//! * **Morph band** (between the collar and the identity zone): both annuli
//!   are swept by explicit transfinite fibrations `Φ(ℓ, s)`: cubic Hermite
//!   fibers launched from the seam curve `{boundary distance = t_mid}` along
//!   mollified normals (reentrant creases open into launch fans), landing on
//!   a shared outer wedge parametrized by `ψ_out = dist(·, P₁∪P₂) − 4`
//!   levels over the identity shell. The map is
//!   `G = Φ_N(κ̃(ℓ, s), s) ∘ Φ_A⁻¹`, where the seam correspondence `κ` is the
//!   collar transport restricted to the seam curves and `κ̃` relaxes it onto
//!   the matched shell parametrization — the topological wrap lives entirely
//!   in this monotone 1D reparametrization. Since both sweeps use identical
//!   formulas from level `s_end` outward (and near the axis, where the seam
//!   curves coincide and `κ` is the identity), the composite is exactly the
//!   identity there; in particular the near-axis wedges `{r < 1/4}` beyond
//!   the flattened balls stay fixed.
//! * **Identity** (`ψ_out ≥ 0`): exact.
//!
//! Both directions of the band map are damped 2D Newton solves on the
//! closed-form sweeps. Bijectivity and the Jacobian-determinant band are
//! verified on grids at construction, not assumed.

use super::correspondence::{smoothstep5, Correspondence, AXIS_WINDOW};
use super::curves::{
    identity_shell, psi_level_on_ray, shell_param_of_direction, source_seam, target_seam,
    MeridianCurve, PinMap, P2,
};
use super::profiles::{SourceProfile, TargetProfile};
use crate::error::{CoreError, Result};
use crate::geometry::{AxisCapsule, Regions};
use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

pub type M2 = Matrix2<f64>;

/// Tunables of the morph; serialized with the map so a run is reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphConfig {
    /// Exact-collar depth (≥ 1/4 so the normal-offset rule holds on 0 < t < 1/4).
    pub t_mid: f64,
    /// Speed-1 corner window half-width on each profile face.
    pub window: f64,
    /// Normalized ramp width of the correspondence speed bumps.
    pub ramp_width: f64,
    /// Fiber level at which both sweeps enter the shared outer wedge.
    pub s_end: f64,
    /// Depth of the shared wedge in `ψ_out` units.
    pub psi_band: f64,
    /// Half-width of the crease mollification window along the seam curves.
    pub crease_window: f64,
    /// Ball-arc angle up to which the shell assignment follows the radial
    /// field exactly; the corridor territory beyond compresses onto the
    /// waist-adjacent shell band.
    pub arc_pin_angle: f64,
    /// Headroom fractions of the source assignment at the arc end and the
    /// notch crease.
    pub a_tail: (f64, f64),
    /// Device-side pocket pins (fractions of the disc-offset radius) at the
    /// crease and the stub end.
    pub n_pocket: (f64, f64),
    /// Meridian residual tolerance of the Newton solves.
    pub forward_tol: f64,
}

impl Default for MorphConfig {
    fn default() -> Self {
        Self {
            t_mid: 0.26,
            window: 0.30,
            ramp_width: 0.05,
            s_end: 0.75,
            psi_band: 0.30,
            crease_window: 0.12,
            arc_pin_angle: 0.8,
            a_tail: (0.40, 0.55),
            n_pocket: (0.75, 0.97),
            forward_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeridianRegion {
    Identity,
    Collar,
    Morph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    N,
}

/// The meridian map with all of its frozen construction data.
#[derive(Debug, Clone)]
pub struct ProfileMorph {
    pub l: f64,
    pub cfg: MorphConfig,
    pub source: SourceProfile,
    pub target: TargetProfile,
    pub corr: Correspondence,
    pub capsule: AxisCapsule,
    pub regions: Regions,
    pub seam_a: MeridianCurve,
    pub seam_n: MeridianCurve,
    pub shell: MeridianCurve,
    m_a: PinMap,
    m_n: PinMap,
}

/// Shell-arclength pins following the outward field on the source side.
fn source_pins(cfg: &MorphConfig, seam_half: f64, shell_half: f64) -> Vec<(f64, f64)> {
    use std::f64::consts::{FRAC_PI_2, PI};
    let t = cfg.t_mid;
    let rad = 1.0 + t;
    let phi1 = cfg.arc_pin_angle;
    let l_phi1 = 1.0 + rad * (phi1 + FRAC_PI_2);
    let m_phi1 = 1.0 + 5.0 * (phi1 + FRAC_PI_2);
    let headroom = shell_half - m_phi1;
    let arc_end = 1.0 + PI * rad;
    let crease = arc_end + 0.75 - t;
    vec![
        (0.0, 0.0),
        (1.0, 1.0),
        (l_phi1, m_phi1),
        (arc_end, m_phi1 + cfg.a_tail.0 * headroom),
        (crease, m_phi1 + cfg.a_tail.1 * headroom),
        (seam_half, shell_half),
    ]
}

/// Shell-arclength pins on the device side: the under-disc pocket exits
/// through the corridor between the axis column and the obstacle cap, the
/// cap and wall exit radially, the waist territory compresses.
fn target_pins(cfg: &MorphConfig, l: f64, seam_half: f64, shell_half: f64) -> Vec<(f64, f64)> {
    use std::f64::consts::{FRAC_PI_2, PI};
    let t = cfg.t_mid;
    let rad = 1.0 + t;
    let q = 1.0 - t;
    let crease = q;
    let stub_end = 2.0 * q;
    let cap_mid = stub_end + FRAC_PI_2 * rad;
    let cap_end = stub_end + PI * rad;
    let mut pins = vec![
        (0.0, 0.0),
        (AXIS_WINDOW, AXIS_WINDOW),
        (crease, cfg.n_pocket.0 * q),
        (stub_end, cfg.n_pocket.1 * q),
        (cap_mid, shell_param_of_direction(1.0, -(2.0 + rad))),
        (cap_end, shell_param_of_direction(2.0 + t, -2.0)),
    ];
    for z in [0.0, 2.0] {
        let lp = cap_end + 2.0 + z;
        if lp < seam_half - 0.3 && z < 0.5 * l - 0.5 {
            pins.push((lp, shell_param_of_direction(2.0 + t, z)));
        }
    }
    pins.push((seam_half, shell_half));
    pins
}

impl ProfileMorph {
    pub fn new(l: f64, cfg: MorphConfig) -> Result<Self> {
        if !(cfg.t_mid >= 0.25 && cfg.t_mid < cfg.window) {
            return Err(CoreError::Construction(
                "need 1/4 ≤ t_mid < corner window".into(),
            ));
        }
        let corr = Correspondence::build(l, cfg.window, cfg.ramp_width)?;
        let seam_a = source_seam(l, cfg.t_mid, cfg.crease_window);
        let seam_n = target_seam(l, cfg.t_mid, cfg.crease_window);
        let shell = identity_shell(l);
        let m_a = PinMap::symmetric(
            source_pins(&cfg, 0.5 * seam_a.total, 0.5 * shell.total),
            seam_a.total,
            shell.total,
        )?;
        let m_n = PinMap::symmetric(
            target_pins(&cfg, l, 0.5 * seam_n.total, 0.5 * shell.total),
            seam_n.total,
            shell.total,
        )?;
        let morph = Self {
            l,
            cfg,
            source: SourceProfile::new(l),
            target: TargetProfile::new(l),
            corr,
            capsule: AxisCapsule::new(l),
            regions: Regions::new(l),
            seam_a,
            seam_n,
            shell,
            m_a,
            m_n,
        };
        // The shared outer wedge must clear both seam curves; for large pole
        // separations the device wall at the waist approaches the prescribed
        // identity zone and the construction (like the geometry itself)
        // stops admitting an identity collar.
        let mut psi_max = f64::NEG_INFINITY;
        for curve in [&morph.seam_a, &morph.seam_n] {
            for i in 0..=2000 {
                let p = curve.eval(curve.total * i as f64 / 2000.0).pos;
                psi_max = psi_max.max(morph.regions.psi_out(p.0, p.1));
            }
        }
        if psi_max > -cfg.psi_band - 0.05 {
            return Err(CoreError::Construction(format!(
                "seam curves reach ψ_out = {psi_max}, inside the outer wedge band {}; \
                 the pole separation is too large for the prescribed identity zone",
                -cfg.psi_band
            )));
        }
        Ok(morph)
    }

    // ----- collar ----------------------------------------------------------

    /// Exact normal-offset transport; valid for boundary distance up to the
    /// foot reach (used for depth ≤ t_mid and for the seam correspondence).
    pub fn collar_value(&self, r: f64, z: f64) -> P2 {
        let foot = self.source.foot(r, z);
        let b = self.corr.eval(foot.param);
        let tp = self.target.eval(b);
        (
            tp.pos.0 + foot.dist * tp.normal.0,
            tp.pos.1 + foot.dist * tp.normal.1,
        )
    }

    /// Analytic meridian Jacobian of the collar map.
    pub fn collar_jacobian(&self, r: f64, z: f64) -> M2 {
        let foot = self.source.foot(r, z);
        let sp = self.source.eval(foot.param);
        let b = self.corr.eval(foot.param);
        let speed = self.corr.speed(foot.param);
        let tp = self.target.eval(b);
        let d = foot.dist;
        let stretch = speed * (1.0 + tp.curvature * d) / (1.0 + sp.curvature * d);
        let t0 = sp.tangent;
        let n0 = sp.normal;
        let t1 = tp.tangent;
        let n1 = tp.normal;
        M2::new(
            stretch * t1.0 * t0.0 + n1.0 * n0.0,
            stretch * t1.0 * t0.1 + n1.0 * n0.1,
            stretch * t1.1 * t0.0 + n1.1 * n0.0,
            stretch * t1.1 * t0.1 + n1.1 * n0.1,
        )
    }

    /// Exact inverse of the collar map for device points with boundary
    /// distance ≤ t_mid.
    pub fn collar_inverse(&self, r: f64, z: f64) -> P2 {
        let foot = self.target.foot(r, z);
        let a = self.corr.inverse(foot.param);
        let sp = self.source.eval(a);
        (
            sp.pos.0 + foot.dist * sp.normal.0,
            sp.pos.1 + foot.dist * sp.normal.1,
        )
    }

    // ----- seam correspondence ----------------------------------------------

    /// Collar-induced correspondence between the two seam curves.
    pub fn kappa(&self, l0: f64) -> f64 {
        let p = self.seam_a.eval(l0).pos;
        let y = self.collar_value(p.0, p.1);
        self.seam_n
            .param_of_point(y, 1e-6)
            .unwrap_or_else(|_| self.seam_n.total * l0 / self.seam_a.total)
    }

    fn kappa_blend(&self, s: f64) -> f64 {
        smoothstep5(s / self.cfg.s_end)
    }

    /// Relaxed seam correspondence: collar-induced at the seam, shell-matched
    /// from `s_end` outward.
    pub fn kappa_tilde(&self, l0: f64, s: f64) -> f64 {
        let w = self.kappa_blend(s);
        let shell_matched = self.m_n.inverse(self.m_a.eval(l0));
        if w >= 1.0 {
            return shell_matched;
        }
        (1.0 - w) * self.kappa(l0) + w * shell_matched
    }

    fn kappa_tilde_inv(&self, l1: f64, s: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.seam_a.total);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.kappa_tilde(mid, s) < l1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    // ----- transfinite sweeps ------------------------------------------------

    /// Point of the shared outer wedge at shell arclength `m` and level `s`.
    fn wedge_point(&self, m: f64, s: f64) -> P2 {
        let sh = self.shell.eval(m.clamp(0.0, self.shell.total));
        if s >= 1.0 {
            return sh.pos;
        }
        let cc = self.capsule.coords(sh.pos.0, sh.pos.1);
        let target = -self.cfg.psi_band * (1.0 - s) / (1.0 - self.cfg.s_end);
        psi_level_on_ray(
            &self.regions,
            &self.capsule,
            cc.u,
            target,
            (cc.sigma - 3.0 * self.cfg.psi_band - 1.0).max(1e-9),
            cc.sigma + 0.2,
        )
    }

    /// The transfinite sweep of one side: seam fiber `ℓ`, level `s ∈ [0, 1]`.
    fn sweep(&self, side: Side, l: f64, s: f64) -> P2 {
        let (seam, massign) = match side {
            Side::A => (&self.seam_a, &self.m_a),
            Side::N => (&self.seam_n, &self.m_n),
        };
        let m = massign.eval(l.clamp(0.0, seam.total));
        let se = self.cfg.s_end;
        if s >= se {
            return self.wedge_point(m, s);
        }
        // Straight fiber from the seam point to its wedge anchor. The fiber
        // families are kept non-crossing by the field-following shell
        // assignment; the collar handoff is C⁰ (the map is Lipschitz across
        // the seam, like the profile corners).
        let p0 = seam.eval(l).pos;
        let p1 = self.wedge_point(m, se);
        let t = (s / se).clamp(0.0, 1.0);
        (
            p0.0 + t * (p1.0 - p0.0),
            p0.1 + t * (p1.1 - p0.1),
        )
    }

    /// Invert a sweep by damped Newton on `(ℓ, s)`.
    fn sweep_inverse(&self, side: Side, x: P2) -> Result<(f64, f64)> {
        let (seam, total) = match side {
            Side::A => (&self.seam_a, self.seam_a.total),
            Side::N => (&self.seam_n, self.seam_n.total),
        };
        let mut l = seam.param_of_point(x, f64::INFINITY).unwrap_or(0.5 * total);
        let (chi, psi) = match side {
            Side::A => (
                self.regions.sd_dumbbell(x.0, x.1) - self.cfg.t_mid,
                self.regions.psi_out(x.0, x.1),
            ),
            Side::N => (
                self.regions.sd_device(x.0, x.1) - self.cfg.t_mid,
                self.regions.psi_out(x.0, x.1),
            ),
        };
        let mut s = if psi >= -self.cfg.psi_band {
            1.0 - (1.0 - self.cfg.s_end) * (-psi / self.cfg.psi_band)
        } else {
            self.cfg.s_end * (chi / (chi - (psi + self.cfg.psi_band))).clamp(0.0, 1.0)
        }
        .clamp(1e-6, 1.0 - 1e-9);

        let tol = self.cfg.forward_tol * x.0.abs().max(x.1.abs()).max(1.0);
        let mut tried_rescue = false;
        let f = |l: f64, s: f64| self.sweep(side, l, s);
        let mut val = f(l, s);
        let mut res = (val.0 - x.0, val.1 - x.1);
        for _ in 0..100 {
            let rn = res.0.hypot(res.1);
            if rn < tol {
                return Ok((l, s));
            }
            let hl = 1e-7 * (1.0 + l.abs());
            let hs = 1e-7;
            let s_hi = (s + hs).min(1.0);
            let s_lo = (s - hs).max(0.0);
            let fl1 = f((l + hl).min(total), s);
            let fl0 = f((l - hl).max(0.0), s);
            let fs1 = f(l, s_hi);
            let fs0 = f(l, s_lo);
            let dl = (l + hl).min(total) - (l - hl).max(0.0);
            let ds = s_hi - s_lo;
            let j = M2::new(
                (fl1.0 - fl0.0) / dl,
                (fs1.0 - fs0.0) / ds,
                (fl1.1 - fl0.1) / dl,
                (fs1.1 - fs0.1) / ds,
            );
            let det = j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)];
            if det.abs() < 1e-16 {
                return Err(CoreError::NonConvergence {
                    iters: 0,
                    residual: rn,
                });
            }
            let step_l = (j[(1, 1)] * res.0 - j[(0, 1)] * res.1) / det;
            let step_s = (-j[(1, 0)] * res.0 + j[(0, 0)] * res.1) / det;
            let mut lambda = 1.0;
            let mut advanced = false;
            for _ in 0..12 {
                let cl = (l - lambda * step_l).clamp(0.0, total);
                let cs = (s - lambda * step_s).clamp(0.0, 1.0 - 1e-12);
                let cv = f(cl, cs);
                let cr = (cv.0 - x.0, cv.1 - x.1);
                if cr.0.hypot(cr.1) < rn {
                    l = cl;
                    s = cs;
                    val = cv;
                    res = cr;
                    advanced = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !advanced {
                if tried_rescue {
                    return Err(CoreError::NonConvergence {
                        iters: 100,
                        residual: rn,
                    });
                }
                tried_rescue = true;
                // Coarse scan over the fiber rectangle near the initial ℓ.
                let mut best = (f64::INFINITY, l, s);
                for i in 0..=24 {
                    let cl = (l + (i as f64 / 24.0 - 0.5) * 0.2 * total).clamp(0.0, total);
                    for k in 0..=24 {
                        let cs = 0.999 * k as f64 / 24.0;
                        let cv = f(cl, cs);
                        let n = (cv.0 - x.0).hypot(cv.1 - x.1);
                        if n < best.0 {
                            best = (n, cl, cs);
                        }
                    }
                }
                l = best.1;
                s = best.2;
                val = f(l, s);
                res = (val.0 - x.0, val.1 - x.1);
            }
        }
        Err(CoreError::NonConvergence {
            iters: 100,
            residual: res.0.hypot(res.1),
        })
    }

    // ----- public map ------------------------------------------------------

    pub fn region(&self, r: f64, z: f64) -> Result<MeridianRegion> {
        let sd = self.regions.sd_dumbbell(r, z);
        if sd < -1e-9 {
            return Err(CoreError::OutOfDomain(format!(
                "({r}, {z}) lies inside the removed region (distance {sd})"
            )));
        }
        if self.regions.psi_out(r, z) >= 0.0 {
            Ok(MeridianRegion::Identity)
        } else if sd <= self.cfg.t_mid {
            Ok(MeridianRegion::Collar)
        } else {
            Ok(MeridianRegion::Morph)
        }
    }

    /// Meridian forward map on the closure of `A₁`.
    pub fn forward(&self, r: f64, z: f64) -> Result<P2> {
        Ok(match self.region(r, z)? {
            MeridianRegion::Identity => (r, z),
            MeridianRegion::Collar => self.collar_value(r, z),
            MeridianRegion::Morph => {
                let (l, s) = self.sweep_inverse(Side::A, (r, z))?;
                self.sweep(Side::N, self.kappa_tilde(l, s), s)
            }
        })
    }

    /// Inverse of the meridian map for device points in (the closure of) `N₁`.
    pub fn inverse(&self, r: f64, z: f64, _tol: f64) -> Result<P2> {
        let sd = self.regions.sd_device(r, z);
        if sd < -1e-9 {
            return Err(CoreError::OutOfDomain(format!(
                "({r}, {z}) lies inside the device solid"
            )));
        }
        if self.regions.psi_out(r, z) >= 0.0 {
            return Ok((r, z));
        }
        if sd <= self.cfg.t_mid {
            return Ok(self.collar_inverse(r, z));
        }
        let (l1, s) = self.sweep_inverse(Side::N, (r, z))?;
        let l0 = self.kappa_tilde_inv(l1, s);
        Ok(self.sweep(Side::A, l0, s))
    }

    /// Meridian Jacobian: analytic in the collar, implicit through the
    /// sweeps in the morph band, exact identity outside.
    pub fn jacobian(&self, r: f64, z: f64) -> Result<M2> {
        match self.region(r, z)? {
            MeridianRegion::Identity => Ok(M2::identity()),
            MeridianRegion::Collar => Ok(self.collar_jacobian(r, z)),
            MeridianRegion::Morph => {
                let (l, s) = self.sweep_inverse(Side::A, (r, z))?;
                let (ja, jy) = self.band_partials(l, s);
                let det = ja[(0, 0)] * ja[(1, 1)] - ja[(0, 1)] * ja[(1, 0)];
                if det.abs() < 1e-14 {
                    return Err(CoreError::Fold { r, z, det });
                }
                let inv_a = M2::new(ja[(1, 1)], -ja[(0, 1)], -ja[(1, 0)], ja[(0, 0)]) / det;
                Ok(jy * inv_a)
            }
        }
    }

    /// Partial derivatives of `Φ_A` and of the composite image
    /// `y(ℓ, s) = Φ_N(κ̃(ℓ, s), s)` with respect to `(ℓ, s)`.
    fn band_partials(&self, l: f64, s: f64) -> (M2, M2) {
        let hl = 1e-6 * (1.0 + l.abs());
        let hs = 1e-6;
        let ta = self.seam_a.total;
        let l1 = (l + hl).min(ta);
        let l0 = (l - hl).max(0.0);
        let s1 = (s + hs).min(1.0 - 1e-12);
        let s0 = (s - hs).max(0.0);
        let dl = l1 - l0;
        let ds = s1 - s0;

        let a_l1 = self.sweep(Side::A, l1, s);
        let a_l0 = self.sweep(Side::A, l0, s);
        let a_s1 = self.sweep(Side::A, l, s1);
        let a_s0 = self.sweep(Side::A, l, s0);
        let ja = M2::new(
            (a_l1.0 - a_l0.0) / dl,
            (a_s1.0 - a_s0.0) / ds,
            (a_l1.1 - a_l0.1) / dl,
            (a_s1.1 - a_s0.1) / ds,
        );

        let img = |l: f64, s: f64| self.sweep(Side::N, self.kappa_tilde(l, s), s);
        let y_l1 = img(l1, s);
        let y_l0 = img(l0, s);
        let y_s1 = img(l, s1);
        let y_s0 = img(l, s0);
        let jy = M2::new(
            (y_l1.0 - y_l0.0) / dl,
            (y_s1.0 - y_s0.0) / ds,
            (y_l1.1 - y_l0.1) / dl,
            (y_s1.1 - y_s0.1) / ds,
        );
        (ja, jy)
    }

    /// Orientation-adjusted determinant data of the two sweeps at
    /// `(ℓ-fraction, s)`; used by the construction validation. Both sweeps
    /// reverse orientation as maps `(ℓ, s) → (r, z)` (the seam tangent and
    /// into-band normal form a negative frame), so the values are negated:
    /// positive means fold-free.
    pub fn sweep_dets(&self, frac: f64, s: f64) -> (f64, f64) {
        let det_of = |side: Side, l: f64| {
            let h = 1e-6;
            let total = match side {
                Side::A => self.seam_a.total,
                Side::N => self.seam_n.total,
            };
            let l1 = (l + h).min(total);
            let l0 = (l - h).max(0.0);
            let s1 = (s + h).min(1.0 - 1e-12);
            let s0 = (s - h).max(0.0);
            let fl1 = self.sweep(side, l1, s);
            let fl0 = self.sweep(side, l0, s);
            let fs1 = self.sweep(side, l, s1);
            let fs0 = self.sweep(side, l, s0);
            let j = M2::new(
                (fl1.0 - fl0.0) / (l1 - l0),
                (fs1.0 - fs0.0) / (s1 - s0),
                (fl1.1 - fl0.1) / (l1 - l0),
                (fs1.1 - fs0.1) / (s1 - s0),
            );
            -(j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)])
        };
        (
            det_of(Side::A, frac * self.seam_a.total),
            det_of(Side::N, frac * self.seam_n.total),
        )
    }

    /// Probe accessor for examples/diagnostics: evaluate one sweep.
    pub fn sweep_probe(&self, frac: f64, s: f64, source_side: bool) -> P2 {
        if source_side {
            self.sweep(Side::A, frac * self.seam_a.total, s)
        } else {
            self.sweep(Side::N, frac * self.seam_n.total, s)
        }
    }

    /// Probe accessor for diagnostics.
    pub fn m_n_probe(&self, l: f64) -> f64 {
        self.m_n.eval(l)
    }

    /// Band clearance of the two sweeps at `(ℓ-fraction, s)`: signed distance
    /// of each fiber point beyond its own seam level (negative means the
    /// fiber dipped back into the collar band).
    pub fn sweep_clearance(&self, frac: f64, s: f64) -> (f64, f64) {
        let pa = self.sweep(Side::A, frac * self.seam_a.total, s);
        let pn = self.sweep(Side::N, frac * self.seam_n.total, s);
        (
            self.regions.sd_dumbbell(pa.0, pa.1) - self.cfg.t_mid,
            self.regions.sd_device(pn.0, pn.1) - self.cfg.t_mid,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn morph() -> ProfileMorph {
        ProfileMorph::new(8.0, MorphConfig::default()).unwrap()
    }

    #[test]
    fn identity_zones() {
        let g = morph();
        assert_eq!(g.forward(10.0, 4.0).unwrap(), (10.0, 4.0));
        assert_eq!(g.forward(0.3, -8.0).unwrap(), (0.3, -8.0));
        // Near-axis strips beyond the flattened balls stay exactly fixed.
        for z in [-1.6, -2.5, -4.0] {
            for r in [0.0, 0.1, 0.24] {
                let y = g.forward(r, z).unwrap();
                assert!(
                    (y.0 - r).abs() < 1e-10 && (y.1 - z).abs() < 1e-10,
                    "wedge point ({r}, {z}) moved to {y:?}"
                );
            }
        }
        let y = g.forward(0.2, 10.1).unwrap();
        assert!((y.0 - 0.2).abs() < 1e-10 && (y.1 - 10.1).abs() < 1e-10);
    }

    #[test]
    fn collar_normal_offsets_exact() {
        let g = morph();
        let (a, d) = (g.source.corner() + 2.0, 0.1);
        let sp = g.source.eval(a);
        let x = (sp.pos.0 + d * sp.normal.0, sp.pos.1 + d * sp.normal.1);
        let y = g.forward(x.0, x.1).unwrap();
        let tp = g.target.eval(g.corr.eval(a));
        let expect = (tp.pos.0 + d * tp.normal.0, tp.pos.1 + d * tp.normal.1);
        assert!(
            (y.0 - expect.0).abs() < 1e-12 && (y.1 - expect.1).abs() < 1e-12,
            "collar image {y:?} vs {expect:?}"
        );
    }

    #[test]
    fn corner_diagonal_is_continuous() {
        let g = morph();
        for t in [0.05, 0.12, 0.2] {
            let a = g.forward(0.25 + t + 1e-9, 1.0 + t).unwrap();
            let b = g.forward(0.25 + t - 1e-9, 1.0 + t).unwrap();
            let gap = (a.0 - b.0).hypot(a.1 - b.1);
            assert!(gap < 1e-7, "corner tear {gap} at depth {t}");
        }
    }

    #[test]
    fn seam_is_continuous() {
        let g = morph();
        // Across the collar/morph seam in several directions.
        for (r0, z0, dr, dz) in [
            (0.25, 4.0, 1.0, 0.0),
            (0.6, -1.0, 0.0, -1.0),
            (2.1, 0.55, 0.6, 0.6),
            (0.9, 1.6, 0.2, 1.0),
            (0.3, 9.0, -0.1, 1.0),
        ] {
            let n = (dr * dr + dz * dz as f64).sqrt();
            let (dr, dz) = (dr / n, dz / n);
            let (mut lo, mut hi) = (0.0, 3.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let p = (r0 + mid * dr, z0 + mid * dz);
                if g.regions.sd_dumbbell(p.0, p.1) < g.cfg.t_mid {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            let eps = 1e-7;
            let pin = (r0 + (t - eps) * dr, z0 + (t - eps) * dz);
            let pout = (r0 + (t + eps) * dr, z0 + (t + eps) * dz);
            let yi = g.forward(pin.0, pin.1).unwrap();
            let yo = g.forward(pout.0, pout.1).unwrap();
            let gap = (yi.0 - yo.0).hypot(yi.1 - yo.1);
            assert!(gap < 1e-5, "seam gap {gap} near ({r0}, {z0})");
        }
    }

    #[test]
    fn morph_band_lands_in_device_band() {
        let g = morph();
        for (r, z) in [(0.6, 4.0), (1.5, 4.0), (0.5, -2.4), (2.5, 0.4), (1.0, 6.5)] {
            let y = g.forward(r, z).unwrap();
            let chi = g.regions.sd_device(y.0, y.1) - g.cfg.t_mid;
            assert!(
                chi > -1e-7,
                "morph image {y:?} of ({r}, {z}) fell into the collar band: χ'_N = {chi}"
            );
        }
    }

    #[test]
    fn inverse_round_trip() {
        let g = morph();
        let pts = [
            (0.5, 4.0),
            (0.3, 1.2),
            (2.6, 4.2),
            (0.7, -1.6),
            (0.9, 9.4),
            (4.4, 4.0),
            (0.35, -3.0),
            (0.8, 1.45), // notch pocket
            (0.52, 1.30),
            (2.2, -0.4),
        ];
        for (r, z) in pts {
            let y = g.forward(r, z).unwrap();
            let x = g.inverse(y.0, y.1, 1e-12).unwrap();
            let err = (x.0 - r).hypot(x.1 - z);
            assert!(err < 1e-9, "round trip error {err} at ({r}, {z})");
        }
    }

    #[test]
    fn boundary_correspondence_on_sigma0() {
        let g = morph();
        let y = g.forward(0.25, 4.0).unwrap();
        assert!((y.0 - 3.0).abs() < 1e-9 && (y.1 - 4.0).abs() < 1e-9, "{y:?}");
    }

    #[test]
    fn kappa_is_monotone_and_pins_ends() {
        let g = morph();
        assert!(g.kappa(0.0).abs() < 1e-9);
        assert!((g.kappa(g.seam_a.total) - g.seam_n.total).abs() < 1e-9);
        let mut prev = -1.0;
        for i in 0..=400 {
            let l0 = g.seam_a.total * i as f64 / 400.0;
            let l1 = g.kappa(l0);
            assert!(l1 >= prev - 1e-10, "κ not monotone at {l0}");
            prev = l1;
        }
        // Identity near the axis.
        assert!((g.kappa(0.2) - 0.2).abs() < 1e-9);
    }

    #[test]
    fn rejects_interior_points() {
        let g = morph();
        assert!(g.forward(0.1, 4.0).is_err());
        assert!(g.forward(0.5, 0.0).is_err());
    }
}
