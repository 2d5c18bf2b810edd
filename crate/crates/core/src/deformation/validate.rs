//! Construction-time verification of the meridian map: bijectivity is
//! checked, not assumed.

use super::{DeformationMap, MeridianRegion};
use crate::error::{CoreError, Result};
use crate::par;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationLevel {
    /// Coarse grids; used by unit tests.
    Quick,
    /// The grids the build command runs.
    Full,
}

/// Measured constants of the constructed map.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ValidationReport {
    pub grid_points: usize,
    /// Meridian Jacobian determinant range of the forward map over the
    /// deformation band (collar + morph).
    pub det_min: f64,
    pub det_max: f64,
    /// Largest meridian singular value of the forward map and of its inverse
    /// (the measured Lipschitz constants).
    pub lipschitz_fwd: f64,
    pub lipschitz_inv: f64,
    /// Boundary-correspondence speed band.
    pub speed_min: f64,
    pub speed_max: f64,
    /// Largest collar/morph seam jump sampled along the seam.
    pub max_seam_gap: f64,
    /// Smallest image separation of distinct grid points.
    pub min_image_separation: f64,
    /// Largest forward/inverse round-trip error over the band grid.
    pub max_round_trip: f64,
    /// Largest deviation from the identity on the near-axis wedges.
    pub max_wedge_drift: f64,
    /// Smallest transfinite sweep determinant (both sides).
    pub sweep_det_min: f64,
}

/// Run the validation suite; errors on folds, tears or monotonicity
/// violations, otherwise reports the measured constants.
pub fn validate(map: &DeformationMap, level: ValidationLevel) -> Result<ValidationReport> {
    let l = map.params.l;
    let morph = &map.morph;
    let t_mid = morph.cfg.t_mid;

    // --- κ monotone, pinned, Lipschitz ---
    let nk = match level {
        ValidationLevel::Quick => 800,
        ValidationLevel::Full => 3200,
    };
    let kappas: Vec<f64> = par::map_indexed(nk + 1, |i| {
        morph.kappa(morph.seam_a.total * i as f64 / nk as f64)
    });
    let dk = morph.seam_a.total / nk as f64;
    for (i, w) in kappas.windows(2).enumerate() {
        if w[1] < w[0] - 1e-9 {
            return Err(CoreError::Construction(format!(
                "seam correspondence not monotone near ℓ = {}",
                i as f64 * dk
            )));
        }
        if (w[1] - w[0]) / dk > 40.0 {
            return Err(CoreError::Construction(format!(
                "seam correspondence jumps near ℓ = {}",
                i as f64 * dk
            )));
        }
    }
    if kappas[0].abs() > 1e-8 || (kappas[nk] - morph.seam_n.total).abs() > 1e-8 {
        return Err(CoreError::Construction(
            "seam correspondence does not pin the axis ends".into(),
        ));
    }

    // --- transfinite sweep determinants over the (ℓ, s) rectangles ---
    let (nl, ns) = match level {
        ValidationLevel::Quick => (700, 24),
        ValidationLevel::Full => (2400, 48),
    };
    let sweep_rows: Vec<(f64, f64)> = par::map_indexed(nl + 1, |i| {
        let frac = i as f64 / nl as f64;
        let mut worst = f64::INFINITY;
        let mut clearance = f64::INFINITY;
        for k in 0..=ns {
            let s = 0.002 + 0.996 * k as f64 / ns as f64;
            let (da, dn) = morph.sweep_dets(frac, s);
            worst = worst.min(da).min(dn);
            let (ca, cn) = morph.sweep_clearance(frac, s);
            clearance = clearance.min(ca).min(cn);
        }
        (worst, clearance)
    });
    let sweep_det_min = sweep_rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let clearance_min = sweep_rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    if sweep_det_min <= 1e-6 {
        return Err(CoreError::Construction(format!(
            "transfinite sweep degenerates (min determinant {sweep_det_min})"
        )));
    }
    if clearance_min < -1e-6 {
        return Err(CoreError::Construction(format!(
            "a morph fiber dips back into the collar band (clearance {clearance_min})"
        )));
    }

    // --- seam continuity (forward across the collar/morph seam) ---
    let n_seam = match level {
        ValidationLevel::Quick => 500,
        ValidationLevel::Full => 1600,
    };
    let seam_gaps: Vec<f64> = par::map_indexed(n_seam + 1, |i| {
        let l0 = morph.seam_a.total * i as f64 / n_seam as f64;
        let cp = morph.seam_a.eval(l0);
        let eps = 3e-8;
        let pin = (cp.pos.0 - eps * cp.normal.0, cp.pos.1 - eps * cp.normal.1);
        let pout = (cp.pos.0 + eps * cp.normal.0, cp.pos.1 + eps * cp.normal.1);
        match (morph.forward(pin.0, pin.1), morph.forward(pout.0, pout.1)) {
            (Ok(a), Ok(b)) => (a.0 - b.0).hypot(a.1 - b.1),
            _ => f64::INFINITY,
        }
    });
    let max_seam_gap = seam_gaps.into_iter().fold(0.0f64, f64::max);
    if max_seam_gap > 1e-5 {
        return Err(CoreError::Construction(format!(
            "collar/morph seam tears by {max_seam_gap}"
        )));
    }

    // --- near-axis wedge identity ---
    let mut max_wedge_drift: f64 = 0.0;
    for i in 0..200 {
        let r = 0.249 * (i % 20) as f64 / 19.0;
        let depth = 1.3 + 4.5 * (i / 20) as f64 / 9.0;
        for z in [-depth, l + depth] {
            if map.regions.sd_dumbbell(r, z) < 1e-6 {
                continue;
            }
            let y = morph.forward(r, z)?;
            max_wedge_drift = max_wedge_drift.max((y.0 - r).hypot(y.1 - z));
        }
    }
    if max_wedge_drift > 1e-9 {
        return Err(CoreError::Construction(format!(
            "near-axis wedge moves by {max_wedge_drift}"
        )));
    }

    // --- band grid: forward Newton, orientation, Lipschitz, injectivity ---
    let (nr, nz) = match level {
        ValidationLevel::Quick => (110, 210),
        ValidationLevel::Full => (240, 460),
    };
    let (r_max, z_lo, z_hi) = (6.4, -5.4, l + 5.4);
    let rows: Vec<Vec<[f64; 6]>> = par::map_indexed(nr, |i| {
        let r = r_max * (i as f64 + 0.51) / nr as f64;
        let mut row = Vec::new();
        for j in 0..nz {
            let z = z_lo + (z_hi - z_lo) * (j as f64 + 0.49) / nz as f64;
            if map.regions.sd_dumbbell(r, z) < 2e-3 {
                continue;
            }
            if matches!(morph.region(r, z), Ok(MeridianRegion::Identity)) {
                continue;
            }
            let Ok(y) = morph.forward(r, z) else {
                row.push([f64::NAN, r, z, 0.0, 0.0, 0.0]);
                continue;
            };
            let Ok(j2) = morph.jacobian(r, z) else {
                row.push([f64::NAN, r, z, 0.0, 0.0, 0.0]);
                continue;
            };
            let det = j2[(0, 0)] * j2[(1, 1)] - j2[(0, 1)] * j2[(1, 0)];
            let sv = svals2(&j2);
            let rt = match morph.inverse(y.0, y.1, 1e-12) {
                Ok(x) => (x.0 - r).hypot(x.1 - z),
                Err(_) => f64::INFINITY,
            };
            row.push([y.0, y.1, det, sv.1, sv.0, rt]);
        }
        row
    });

    let mut det_min = f64::INFINITY;
    let mut det_max = f64::NEG_INFINITY;
    let mut lip_f: f64 = 0.0;
    let mut lip_i: f64 = 0.0;
    let mut max_round_trip: f64 = 0.0;
    let mut images: Vec<(f64, f64)> = Vec::new();
    let mut grid_points = 0usize;
    for row in &rows {
        for e in row {
            if e[0].is_nan() {
                return Err(CoreError::Construction(format!(
                    "forward solve failed at ({}, {})",
                    e[1], e[2]
                )));
            }
            grid_points += 1;
            let det = e[2];
            if det <= 0.0 {
                return Err(CoreError::Fold {
                    r: e[0],
                    z: e[1],
                    det,
                });
            }
            det_min = det_min.min(det);
            det_max = det_max.max(det);
            lip_f = lip_f.max(e[3]);
            if e[4] > 1e-14 {
                lip_i = lip_i.max(1.0 / e[4]);
            }
            max_round_trip = max_round_trip.max(e[5]);
            images.push((e[0], e[1]));
        }
    }
    if max_round_trip > 1e-8 {
        return Err(CoreError::Construction(format!(
            "forward/inverse round trip off by {max_round_trip}"
        )));
    }

    images.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut min_sep = f64::INFINITY;
    for w in images.windows(2) {
        let d = (w[0].0 - w[1].0).hypot(w[0].1 - w[1].1);
        if d < min_sep {
            min_sep = d;
        }
    }
    if min_sep < 1e-12 {
        return Err(CoreError::Construction(format!(
            "two grid points map within {min_sep} of each other"
        )));
    }

    let (speed_min, speed_max) = morph.corr.speed_band();
    Ok(ValidationReport {
        grid_points,
        det_min,
        det_max,
        lipschitz_fwd: lip_f,
        lipschitz_inv: lip_i,
        speed_min,
        speed_max,
        max_seam_gap,
        min_image_separation: min_sep,
        max_round_trip,
        max_wedge_drift,
        sweep_det_min,
    })
}

fn svals2(j: &nalgebra::Matrix2<f64>) -> (f64, f64) {
    let a = j[(0, 0)];
    let b = j[(0, 1)];
    let c = j[(1, 0)];
    let d = j[(1, 1)];
    let q1 = ((a + d) * (a + d) + (b - c) * (b - c)).sqrt();
    let q2 = ((a - d) * (a - d) + (b + c) * (b + c)).sqrt();
    let (s1, s2) = (0.5 * (q1 + q2), 0.5 * (q1 - q2).abs());
    (s2.min(s1), s2.max(s1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::WormholeParams;

    #[test]
    fn quick_validation_passes() {
        let map = DeformationMap::new(WormholeParams::default()).unwrap();
        let report = validate(&map, ValidationLevel::Quick).unwrap();
        assert!(report.det_min > 1.0 / 50.0, "det_min = {}", report.det_min);
        assert!(report.det_max < 50.0, "det_max = {}", report.det_max);
        assert!(report.max_seam_gap < 1e-6, "seam gap {}", report.max_seam_gap);
        assert!(report.min_image_separation > 1e-6);
        assert!(report.grid_points > 4_000);
        assert!(report.max_round_trip < 1e-9);
        assert!(report.sweep_det_min > 0.0);
    }
}
