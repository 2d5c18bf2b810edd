//! Explicit arclength parametrizations of the three curves the morph band is
//! anchored on: the two seam curves (boundary-distance `t_mid` offsets of the
//! dumbbell and of the device solid) and the shared identity shell
//! `{dist(·, P₁ ∪ P₂) = 4}`.
//!
//! All pieces are segments and circular arcs, so evaluation, tangents,
//! normals and point-to-parameter projection are closed form. Reentrant
//! creases (the notch corners of the offsets) get mollified launch normals:
//! the into-band normal rotates continuously across a small parameter window
//! around each crease, which turns the crease into a proper launch fan.

use crate::error::{CoreError, Result};
use crate::geometry::Regions;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

pub type P2 = (f64, f64);

fn rot(v: P2, ang: f64) -> P2 {
    let (s, c) = ang.sin_cos();
    (c * v.0 - s * v.1, s * v.0 + c * v.1)
}

fn angle_of(v: P2) -> f64 {
    v.1.atan2(v.0)
}

/// One analytic piece of a meridian curve.
#[derive(Debug, Clone, Copy)]
enum Piece {
    /// Straight segment from `p0` with unit direction `dir`.
    Seg { p0: P2, dir: P2, normal: P2 },
    /// Circular arc centered `c`, radius `rad`, from angle `a0`, sweeping
    /// with sign `sweep` (±1); the into-band normal is radial times `nsign`.
    Arc {
        c: P2,
        rad: f64,
        a0: f64,
        sweep: f64,
        nsign: f64,
    },
}

impl Piece {
    fn eval(&self, t: f64) -> (P2, P2, P2, f64) {
        match *self {
            Piece::Seg { p0, dir, normal } => {
                ((p0.0 + t * dir.0, p0.1 + t * dir.1), dir, normal, 0.0)
            }
            Piece::Arc {
                c,
                rad,
                a0,
                sweep,
                nsign,
            } => {
                let ang = a0 + sweep * t / rad;
                let radial = (ang.cos(), ang.sin());
                let pos = (c.0 + rad * radial.0, c.1 + rad * radial.1);
                let tangent = rot(radial, sweep * FRAC_PI_2);
                let normal = (nsign * radial.0, nsign * radial.1);
                // Offset curvature with respect to the into-band normal.
                let kappa = nsign / rad;
                (pos, tangent, normal, kappa)
            }
        }
    }
}

/// A meridian curve made of analytic pieces, arclength-parametrized, with
/// crease data for normal mollification.
#[derive(Debug, Clone)]
pub struct MeridianCurve {
    pieces: Vec<(f64, Piece)>, // cumulative start length, piece
    lens: Vec<f64>,
    pub total: f64,
    /// Parameters of reentrant creases (launch-normal mollification points).
    pub creases: Vec<f64>,
    /// Half-width of the mollification window.
    pub crease_window: f64,
}

/// A point on a meridian curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub pos: P2,
    pub tangent: P2,
    /// Raw into-band normal.
    pub normal: P2,
    /// Mollified launch normal.
    pub launch: P2,
    pub curvature: f64,
}

impl MeridianCurve {
    fn new(pieces: Vec<Piece>, lens: Vec<f64>, creases_at: &[usize], window: f64) -> Self {
        let mut cum = 0.0;
        let mut list = Vec::with_capacity(pieces.len());
        let mut crease_params = Vec::new();
        for (i, p) in pieces.into_iter().enumerate() {
            if creases_at.contains(&i) {
                crease_params.push(cum);
            }
            list.push((cum, p));
            cum += lens[i];
        }
        MeridianCurve {
            pieces: list,
            lens,
            total: cum,
            creases: crease_params,
            crease_window: window,
        }
    }

    fn locate(&self, l: f64) -> (usize, f64) {
        let l = l.clamp(0.0, self.total);
        let mut idx = self.pieces.len() - 1;
        for (i, (start, _)) in self.pieces.iter().enumerate() {
            if l < start + self.lens[i] {
                idx = i;
                break;
            }
        }
        (idx, l - self.pieces[idx].0)
    }

    pub fn eval(&self, l: f64) -> CurvePoint {
        let (i, t) = self.locate(l);
        let (pos, tangent, normal, curvature) = self.pieces[i].1.eval(t);
        let launch = self.mollified_normal(l, normal);
        CurvePoint {
            pos,
            tangent,
            normal,
            launch,
            curvature,
        }
    }

    fn raw_normal(&self, l: f64) -> P2 {
        let (i, t) = self.locate(l);
        self.pieces[i].1.eval(t).2
    }

    fn mollified_normal(&self, l: f64, normal: P2) -> P2 {
        for &lc in &self.creases {
            let w = self.crease_window;
            if (l - lc).abs() < w {
                let n0 = self.raw_normal(lc - w);
                let n1 = self.raw_normal(lc + w);
                let a0 = angle_of(n0);
                let mut da = angle_of(n1) - a0;
                if da > PI {
                    da -= 2.0 * PI;
                }
                if da < -PI {
                    da += 2.0 * PI;
                }
                let x = super::correspondence::smoothstep5((l - lc + w) / (2.0 * w));
                let ang = a0 + x * da;
                return (ang.cos(), ang.sin());
            }
        }
        normal
    }

    /// Arclength of a point assumed to lie on the curve (piecewise
    /// projection; tolerance `tol`).
    pub fn param_of_point(&self, p: P2, tol: f64) -> Result<f64> {
        let mut best: Option<(f64, f64)> = None;
        for (i, (start, piece)) in self.pieces.iter().enumerate() {
            let len = self.lens[i];
            let t = match *piece {
                Piece::Seg { p0, dir, .. } => {
                    ((p.0 - p0.0) * dir.0 + (p.1 - p0.1) * dir.1).clamp(0.0, len)
                }
                Piece::Arc { c, rad, a0, sweep, .. } => {
                    let ang = (p.1 - c.1).atan2(p.0 - c.0);
                    let mut d = sweep * (ang - a0);
                    while d < -PI {
                        d += 2.0 * PI;
                    }
                    while d > 2.0 * PI {
                        d -= 2.0 * PI;
                    }
                    (d * rad).clamp(0.0, len)
                }
            };
            let (pos, ..) = piece.eval(t);
            let err = (pos.0 - p.0).hypot(pos.1 - p.1);
            if best.map_or(true, |(e, _)| err < e) {
                best = Some((err, start + t));
            }
        }
        let (err, l) = best.unwrap();
        if err > tol {
            return Err(CoreError::OutOfDomain(format!(
                "point ({}, {}) is {err} away from the curve",
                p.0, p.1
            )));
        }
        Ok(l)
    }
}

/// Seam curve on the source side: `{dist(·, dumbbell) = t}`.
pub fn source_seam(l: f64, t: f64, crease_window: f64) -> MeridianCurve {
    let rad = 1.0 + t;
    let lower = vec![
        // Bottom cap offset.
        (
            Piece::Seg {
                p0: (0.0, -1.0 - t),
                dir: (1.0, 0.0),
                normal: (0.0, -1.0),
            },
            1.0,
        ),
        // Ball arc offset.
        (
            Piece::Arc {
                c: (1.0, 0.0),
                rad,
                a0: -FRAC_PI_2,
                sweep: 1.0,
                nsign: 1.0,
            },
            PI * rad,
        ),
        // Exposed top-cap offset, traversed inward.
        (
            Piece::Seg {
                p0: (1.0, 1.0 + t),
                dir: (-1.0, 0.0),
                normal: (0.0, 1.0),
            },
            0.75 - t,
        ),
        // Neck wall offset up to the symmetry plane (crease at its start).
        (
            Piece::Seg {
                p0: (0.25 + t, 1.0 + t),
                dir: (0.0, 1.0),
                normal: (1.0, 0.0),
            },
            0.5 * l - 1.0 - t,
        ),
    ];
    mirror_close(l, lower, &[3], crease_window)
}

/// Seam curve on the device side: `{dist(·, P₃ ∪ P₄) = t}`.
pub fn target_seam(l: f64, t: f64, crease_window: f64) -> MeridianCurve {
    let rad = 1.0 + t;
    let lower = vec![
        // Bottom disc offset.
        (
            Piece::Seg {
                p0: (0.0, -1.0 - t),
                dir: (1.0, 0.0),
                normal: (0.0, -1.0),
            },
            1.0 - t,
        ),
        // Inner-wall offset, downward (crease at its start).
        (
            Piece::Seg {
                p0: (1.0 - t, -1.0 - t),
                dir: (0.0, -1.0),
                normal: (-1.0, 0.0),
            },
            1.0 - t,
        ),
        // Torus cap offset.
        (
            Piece::Arc {
                c: (2.0, -2.0),
                rad,
                a0: PI,
                sweep: 1.0,
                nsign: 1.0,
            },
            PI * rad,
        ),
        // Outer wall offset up to the symmetry plane.
        (
            Piece::Seg {
                p0: (3.0 + t, -2.0),
                dir: (0.0, 1.0),
                normal: (1.0, 0.0),
            },
            0.5 * l + 2.0,
        ),
    ];
    mirror_close(l, lower, &[1], crease_window)
}

/// The identity shell `{dist(·, P₁ ∪ P₂) = 4}`: two radius-5 capsules glued
/// at the waist.
pub fn identity_shell(l: f64) -> MeridianCurve {
    let rad = 5.0;
    // The waist: circles of radius 5 around (1, 0) and (1, L) intersect at
    // z = L/2.
    let zc = 0.5 * l;
    let phi_waist = (zc / rad).asin();
    let lower = vec![
        (
            Piece::Seg {
                p0: (0.0, -rad),
                dir: (1.0, 0.0),
                normal: (0.0, -1.0),
            },
            1.0,
        ),
        (
            Piece::Arc {
                c: (1.0, 0.0),
                rad,
                a0: -FRAC_PI_2,
                sweep: 1.0,
                nsign: 1.0,
            },
            (FRAC_PI_2 + phi_waist) * rad,
        ),
    ];
    mirror_close(l, lower, &[], 0.0)
}

/// Close a lower-half piece list by its z ↦ L−z mirror.
fn mirror_close(
    l: f64,
    lower: Vec<(Piece, f64)>,
    creases_at: &[usize],
    window: f64,
) -> MeridianCurve {
    let mut pieces: Vec<Piece> = Vec::new();
    let mut lens: Vec<f64> = Vec::new();
    for (p, len) in &lower {
        pieces.push(*p);
        lens.push(*len);
    }
    // Mirrored pieces in reverse order.
    let mirror_p = |p: &Piece, len: f64| -> Piece {
        match *p {
            Piece::Seg { p0, dir, normal } => {
                // Mirrored traversal runs from the mirrored end back to the
                // mirrored start: reflect and reverse.
                let end = (p0.0 + len * dir.0, p0.1 + len * dir.1);
                Piece::Seg {
                    p0: (end.0, l - end.1),
                    dir: (-dir.0, dir.1),
                    normal: (normal.0, -normal.1),
                }
            }
            Piece::Arc {
                c,
                rad,
                a0,
                sweep,
                nsign,
            } => {
                let a_end = a0 + sweep * len / rad;
                Piece::Arc {
                    c: (c.0, l - c.1),
                    rad,
                    a0: -a_end,
                    sweep,
                    nsign,
                }
            }
        }
    };
    let mut mirror_creases = Vec::new();
    let n_lower = pieces.len();
    for (i, (p, len)) in lower.iter().enumerate().rev() {
        // A crease at the start of a lower piece mirrors to a crease at the
        // end of the mirrored piece, i.e. the start of the next one.
        if creases_at.contains(&i) {
            mirror_creases.push(n_lower + (n_lower - i));
        }
        pieces.push(mirror_p(p, *len));
        lens.push(*len);
    }
    let mut all_creases: Vec<usize> = creases_at.to_vec();
    for c in mirror_creases {
        if c < pieces.len() {
            all_creases.push(c);
        }
    }
    MeridianCurve::new(pieces, lens, &all_creases, window)
}

/// Monotone piecewise-linear pin interpolation: maps seam arclength onto
/// shell arclength. The pins encode the geometry of the outward `ψ`-field:
/// flat pieces exit straight, ball arcs exit radially at their own angle, and
/// the corridor territory (neck/notch/pocket) compresses onto the narrow
/// shell band at the waist or the pocket mouth.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PinMap {
    pub pins: Vec<(f64, f64)>,
}

impl PinMap {
    pub fn new(mut pins: Vec<(f64, f64)>) -> Result<Self> {
        pins.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in pins.windows(2) {
            if w[1].0 <= w[0].0 + 1e-12 || w[1].1 <= w[0].1 + 1e-12 {
                return Err(CoreError::Construction(format!(
                    "shell assignment pins not strictly monotone: {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(PinMap { pins })
    }

    /// Mirror-symmetric closure: pins for the lower half produce the upper
    /// half by reflection.
    pub fn symmetric(lower: Vec<(f64, f64)>, len_from: f64, len_to: f64) -> Result<Self> {
        let mut pins = lower.clone();
        for &(a, b) in lower.iter().rev() {
            let (ma, mb) = (len_from - a, len_to - b);
            if ma > pins.last().unwrap().0 + 1e-12 {
                pins.push((ma, mb));
            }
        }
        Self::new(pins)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pins = &self.pins;
        let x = x.clamp(pins[0].0, pins[pins.len() - 1].0);
        let i = pins.partition_point(|p| p.0 < x).max(1).min(pins.len() - 1);
        let (a, b) = (pins[i - 1], pins[i]);
        b.1 + (x - b.0) * (b.1 - a.1) / (b.0 - a.0)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        let pins = &self.pins;
        let y = y.clamp(pins[0].1, pins[pins.len() - 1].1);
        let i = pins.partition_point(|p| p.1 < y).max(1).min(pins.len() - 1);
        let (a, b) = (pins[i - 1], pins[i]);
        b.0 + (y - b.1) * (b.0 - a.0) / (b.1 - a.1)
    }
}

/// Shell arclength of the radial exit in direction `(dr, dz)` from the lower
/// ball core (valid below the waist angle).
pub fn shell_param_of_direction(dr: f64, dz: f64) -> f64 {
    1.0 + 5.0 * (dz.atan2(dr) + FRAC_PI_2)
}

/// Solve for the point on the capsule ray `u` where `ψ_out` equals `target`
/// (bisection between `lo` and `hi` capsule radii).
pub fn psi_level_on_ray(
    regions: &Regions,
    capsule: &crate::geometry::AxisCapsule,
    u: f64,
    target: f64,
    lo: f64,
    hi: f64,
) -> P2 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..64 {
        let mid = 0.5 * (a + b);
        let p = capsule.point(u, mid);
        if regions.psi_out(p.0, p.1) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    capsule.point(u, 0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Regions;

    #[test]
    fn seam_curves_lie_on_their_level_sets() {
        let reg = Regions::new(8.0);
        let t = 0.26;
        let src = source_seam(8.0, t, 0.12);
        for i in 0..=800 {
            let l = src.total * i as f64 / 800.0;
            let p = src.eval(l).pos;
            let d = reg.sd_dumbbell(p.0, p.1);
            assert!(
                (d - t).abs() < 1e-12,
                "source seam off level at l = {l}: d = {d}, p = {p:?}"
            );
        }
        let tgt = target_seam(8.0, t, 0.12);
        for i in 0..=800 {
            let l = tgt.total * i as f64 / 800.0;
            let p = tgt.eval(l).pos;
            let d = reg.sd_device(p.0, p.1);
            assert!(
                (d - t).abs() < 1e-12,
                "target seam off level at l = {l}: d = {d}, p = {p:?}"
            );
        }
        let sh = identity_shell(8.0);
        for i in 1..800 {
            let l = sh.total * i as f64 / 800.0;
            let p = sh.eval(l).pos;
            let d = reg.psi_out(p.0, p.1);
            assert!(d.abs() < 1e-12, "shell off level at l = {l}: {d}");
        }
    }

    #[test]
    fn curves_are_continuous_and_end_on_axis() {
        for curve in [
            source_seam(8.0, 0.26, 0.12),
            target_seam(8.0, 0.26, 0.12),
            identity_shell(8.0),
        ] {
            let n = 3000;
            for i in 1..n {
                let l = curve.total * i as f64 / n as f64;
                let h = 1e-7;
                let a = curve.eval(l - h).pos;
                let b = curve.eval(l + h).pos;
                let gap = (a.0 - b.0).hypot(a.1 - b.1);
                assert!(gap < 4.0 * h, "jump {gap} at l = {l}");
            }
            let s0 = curve.eval(0.0).pos;
            let s1 = curve.eval(curve.total).pos;
            assert!(s0.0.abs() < 1e-12 && s1.0.abs() < 1e-12, "{s0:?} {s1:?}");
        }
    }

    #[test]
    fn param_of_point_round_trip() {
        let curve = target_seam(8.0, 0.26, 0.12);
        for i in 0..400 {
            let l = curve.total * (i as f64 + 0.5) / 400.0;
            let p = curve.eval(l).pos;
            let back = curve.param_of_point(p, 1e-9).unwrap();
            assert!((back - l).abs() < 1e-9, "l = {l}, back = {back}");
        }
    }

    #[test]
    fn launch_normals_are_continuous() {
        for curve in [source_seam(8.0, 0.26, 0.12), target_seam(8.0, 0.26, 0.12)] {
            let n = 6000;
            for i in 1..n {
                let l = curve.total * i as f64 / n as f64;
                let h = curve.total / (n as f64 * 10.0);
                let a = curve.eval(l - h).launch;
                let b = curve.eval(l + h).launch;
                let gap = (a.0 - b.0).hypot(a.1 - b.1);
                assert!(
                    gap < 40.0 * h,
                    "launch normal jump {gap} at l = {l} (curve total {})",
                    curve.total
                );
            }
        }
    }

    #[test]
    fn pin_map_monotone_round_trip() {
        let m = PinMap::symmetric(
            vec![(0.0, 0.0), (1.0, 1.0), (4.0, 12.8), (8.0, 13.5)],
            16.0,
            27.0,
        )
        .unwrap();
        assert!((m.eval(0.5) - 0.5).abs() < 1e-13);
        assert!((m.eval(16.0) - 27.0).abs() < 1e-10);
        let mut prev = -1.0;
        for i in 0..=2000 {
            let x = 16.0 * i as f64 / 2000.0;
            let y = m.eval(x);
            assert!(y > prev, "not monotone at {x}");
            prev = y;
        }
        for i in 0..100 {
            let x = 16.0 * (i as f64 + 0.5) / 100.0;
            assert!((m.inverse(m.eval(x)) - x).abs() < 1e-9, "at {x}");
        }
    }
}
