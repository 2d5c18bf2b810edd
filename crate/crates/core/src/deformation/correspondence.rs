//! The boundary correspondence `φ : ∂A₁ → ∂N₁` in arclength parameters.
//!
//! Pinned structure (lower half; the upper half mirrors):
//!
//! * `[0, 1/4] → [0, 1/4]` at speed 1 — the map is the identity near the axis;
//! * `[1/4, a_c - W] → [1/4, 1 - W]` — the ball boundary compresses onto the
//!   inner part of the disc (smooth dip, speed 1 at both ends);
//! * `[a_c - W, a_c + W] → [1 - W, 1 + W]` at speed 1 — the corner window,
//!   mapping the `Σ₀` corner to the disc edge isometrically on both faces;
//! * `[a_c + W, half] → [1 + W, half₁]` — `Σ₀` stretches over Σ₁ (smooth
//!   rise, speed 1 at both ends).
//!
//! Within a segment the speed is `1 + (m - 1)·bump(t)` with a C² plateau
//! bump, so `φ` is C² and the end speeds pin the junction conditions: the
//! corner window keeps the collar offsets rigid across the corner diagonals,
//! speed 1 at the `Σ₀` ends matches the handle warp `α₂ ≡ 1`, and the window
//! on the cap face realizes the flattening-map slope 1/2 near the north pole
//! (after the radial spread halves lengths there).

use super::profiles::{SourceProfile, TargetProfile};
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Quintic smoothstep: C² monotone ramp 0 → 1 on [0, 1].
pub fn smoothstep5(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

/// Integral of `smoothstep5` from 0 to `x ∈ [0, 1]`.
fn smoothstep5_integral(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let x2 = x * x;
    x2 * x2 * (2.5 + x * (-3.0 + x))
}

/// C² plateau bump on [0, 1]: ramps of width `dw` at both ends, 1 between.
fn bump(t: f64, dw: f64) -> f64 {
    if t < dw {
        smoothstep5(t / dw)
    } else if t > 1.0 - dw {
        smoothstep5((1.0 - t) / dw)
    } else {
        1.0
    }
}

/// Integral of `bump` from 0 to `t`.
fn bump_integral(t: f64, dw: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    if t <= dw {
        dw * smoothstep5_integral(t / dw)
    } else if t <= 1.0 - dw {
        0.5 * dw + (t - dw)
    } else {
        0.5 * dw + (1.0 - 2.0 * dw) + dw * (0.5 - smoothstep5_integral((1.0 - t) / dw))
    }
}

fn bump_total(dw: f64) -> f64 {
    1.0 - dw
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    /// Plateau speed; the speed profile is `1 + (m-1)·bump`.
    pub m: f64,
    /// Normalized ramp width of the bump.
    pub dw: f64,
}

impl Segment {
    fn solve(a0: f64, a1: f64, b0: f64, b1: f64, dw: f64) -> Result<Self> {
        let len = a1 - a0;
        let target = b1 - b0;
        let m = 1.0 + (target / len - 1.0) / bump_total(dw);
        if !(m > 0.0) {
            return Err(CoreError::Construction(format!(
                "correspondence segment [{a0}, {a1}] -> [{b0}, {b1}] needs nonpositive speed (m = {m}); narrow the ramps"
            )));
        }
        Ok(Segment {
            a0,
            a1,
            b0,
            b1,
            m,
            dw,
        })
    }

    fn eval(&self, a: f64) -> f64 {
        let len = self.a1 - self.a0;
        let t = ((a - self.a0) / len).clamp(0.0, 1.0);
        self.b0 + len * (t + (self.m - 1.0) * bump_integral(t, self.dw))
    }

    fn speed(&self, a: f64) -> f64 {
        let t = ((a - self.a0) / (self.a1 - self.a0)).clamp(0.0, 1.0);
        1.0 + (self.m - 1.0) * bump(t, self.dw)
    }
}

/// Identity window of the correspondence near the axis (the map fixes the
/// disc radius on `[0, AXIS_WINDOW]`; the flattening rule `R(s) = s` is
/// needed on `[0, 1/4]` and the extra margin keeps the near-axis morph
/// fibers exactly fixed).
pub const AXIS_WINDOW: f64 = 0.34;

/// Piecewise-C² monotone boundary correspondence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub segments: Vec<Segment>,
    /// Corner window half-width `W`.
    pub window: f64,
    pub total_a: f64,
    pub total_b: f64,
}

impl Correspondence {
    /// Build the correspondence for the default pinned junctions.
    pub fn build(l: f64, window: f64, dw: f64) -> Result<Self> {
        let src = SourceProfile::new(l);
        let tgt = TargetProfile::new(l);
        let ac = src.corner();
        let (ha, hb) = (src.half(), tgt.half());
        if window >= 0.75 {
            return Err(CoreError::Construction(
                "corner window must be narrower than the exposed cap strip (3/4)".into(),
            ));
        }

        let mut lower = vec![
            Segment::solve(0.0, AXIS_WINDOW, 0.0, AXIS_WINDOW, dw)?,
            Segment::solve(AXIS_WINDOW, ac - window, AXIS_WINDOW, 1.0 - window, dw)?,
            Segment::solve(ac - window, ac + window, 1.0 - window, 1.0 + window, dw)?,
            Segment::solve(ac + window, ha, 1.0 + window, hb, dw)?,
        ];
        // Mirror the lower half.
        let (ta, tb) = (src.total(), tgt.total());
        let mut upper: Vec<Segment> = lower
            .iter()
            .rev()
            .map(|s| Segment {
                a0: ta - s.a1,
                a1: ta - s.a0,
                b0: tb - s.b1,
                b1: tb - s.b0,
                m: s.m,
                dw: s.dw,
            })
            .collect();
        lower.append(&mut upper);

        let corr = Correspondence {
            segments: lower,
            window,
            total_a: ta,
            total_b: tb,
        };
        corr.validate()?;
        Ok(corr)
    }

    fn validate(&self) -> Result<()> {
        for w in self.segments.windows(2) {
            if (w[0].a1 - w[1].a0).abs() > 1e-12 || (w[0].b1 - w[1].b0).abs() > 1e-12 {
                return Err(CoreError::Construction(
                    "correspondence segments do not chain".into(),
                ));
            }
        }
        // Strict monotonicity on a fine grid.
        let n = 20_000;
        let mut prev = -1.0;
        for i in 0..=n {
            let a = self.total_a * i as f64 / n as f64;
            let b = self.eval(a);
            if b <= prev {
                return Err(CoreError::Construction(format!(
                    "correspondence not strictly monotone near a = {a}"
                )));
            }
            prev = b;
        }
        Ok(())
    }

    fn segment_for(&self, a: f64) -> &Segment {
        let a = a.clamp(0.0, self.total_a);
        self.segments
            .iter()
            .find(|s| a <= s.a1)
            .unwrap_or_else(|| self.segments.last().unwrap())
    }

    pub fn eval(&self, a: f64) -> f64 {
        self.segment_for(a).eval(a)
    }

    pub fn speed(&self, a: f64) -> f64 {
        self.segment_for(a).speed(a)
    }

    /// Invert the monotone correspondence.
    pub fn inverse(&self, b: f64) -> f64 {
        let b = b.clamp(0.0, self.total_b);
        let seg = self
            .segments
            .iter()
            .find(|s| b <= s.b1)
            .unwrap_or_else(|| self.segments.last().unwrap());
        let (mut lo, mut hi) = (seg.a0, seg.a1);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if seg.eval(mid) < b {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Minimum and maximum speed over a fine grid (reported as the measured
    /// Lipschitz band of the boundary correspondence).
    pub fn speed_band(&self) -> (f64, f64) {
        let n = 50_000;
        let mut band = (f64::INFINITY, 0.0f64);
        for i in 0..=n {
            let a = self.total_a * i as f64 / n as f64;
            let v = self.speed(a);
            band.0 = band.0.min(v);
            band.1 = band.1.max(v);
        }
        band
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corr() -> Correspondence {
        Correspondence::build(8.0, 0.3, 0.05).unwrap()
    }

    #[test]
    fn endpoints_and_pins() {
        let c = corr();
        assert!(c.eval(0.0).abs() < 1e-14);
        assert!((c.eval(c.total_a) - c.total_b).abs() < 1e-12);
        // Identity window near the axis.
        assert!((c.eval(0.1) - 0.1).abs() < 1e-14);
        // Corner pin: a_c ↦ disc edge.
        let src = SourceProfile::new(8.0);
        assert!((c.eval(src.corner()) - 1.0).abs() < 1e-12);
        // Speed 1 through the corner window.
        for da in [-0.29, -0.1, 0.0, 0.1, 0.29] {
            assert!((c.speed(src.corner() + da) - 1.0).abs() < 1e-14);
        }
        // Midpoint pin (symmetry).
        assert!((c.eval(src.half()) - TargetProfile::new(8.0).half()).abs() < 1e-10);
    }

    #[test]
    fn symmetry() {
        let c = corr();
        for i in 0..100 {
            let a = c.total_a * i as f64 / 100.0;
            let lhs = c.eval(c.total_a - a);
            let rhs = c.total_b - c.eval(a);
            assert!((lhs - rhs).abs() < 1e-10, "asymmetry at a = {a}");
        }
    }

    #[test]
    fn speed_is_derivative() {
        let c = corr();
        let h = 1e-6;
        for i in 1..400 {
            let a = c.total_a * i as f64 / 400.0;
            let fd = (c.eval(a + h) - c.eval(a - h)) / (2.0 * h);
            let an = c.speed(a);
            assert!(
                (fd - an).abs() < 1e-6 * (1.0 + an),
                "speed mismatch at a = {a}: {fd} vs {an}"
            );
        }
    }

    #[test]
    fn inverse_round_trip() {
        let c = corr();
        for i in 0..500 {
            let a = c.total_a * (i as f64 + 0.5) / 500.0;
            let back = c.inverse(c.eval(a));
            assert!((back - a).abs() < 1e-9, "a = {a}, back = {back}");
        }
    }

    #[test]
    fn speed_band_is_positive_and_sane() {
        let (lo, hi) = corr().speed_band();
        assert!(lo > 0.02, "min speed {lo}");
        assert!(hi < 50.0, "max speed {hi}");
    }
}
