//! The deformation map `F : M ∖ γ → N` and its pieces.
//!
//! On `M₁` the map is `F₁ = G₁ ∘ G₀`: the radial spread pushes the inner axis
//! segment off the axis, and the profile morph carries the dumbbell
//! complement onto the device complement. On `M₂` the map flattens the sphere
//! factor onto the tube bore, `F₂(y(θ,s), z) = X(θ, R(s), z)`, where `R` is
//! the radial profile induced by restricting `F₁` to the flattened sphere —
//! so the two pieces agree across the glued boundary by construction.

pub mod correspondence;
pub mod curves;
pub mod g0;
pub mod g1;
pub mod profiles;
pub mod serialize;
pub mod validate;

pub use g0::RadialSpread;
pub use g1::{MeridianRegion, MorphConfig, ProfileMorph};
pub use serialize::MapDocument;
pub use validate::{ValidationLevel, ValidationReport};

use crate::error::{CoreError, Result};
use crate::geometry::{
    frame_matrix, CylCoords, FlatSphere, HandleCoords, ManifoldPoint, Regions, WormholeParams, M3,
    V3,
};
use std::f64::consts::PI;

/// Glue-boundary assignment tolerance: device points this close to the bore
/// count as `M₂`-side on inversion.
const GLUE_TOL: f64 = 1e-9;

/// The assembled deformation map with evaluation, Jacobians and inversion.
#[derive(Debug, Clone)]
pub struct DeformationMap {
    pub params: WormholeParams,
    pub spread: RadialSpread,
    pub morph: ProfileMorph,
    pub regions: Regions,
    flat: FlatSphere,
}

impl DeformationMap {
    /// Construct without the (expensive) grid validation.
    pub fn new(params: WormholeParams) -> Result<Self> {
        params.validate()?;
        let morph = ProfileMorph::new(params.l, MorphConfig::default())?;
        Ok(Self {
            params,
            spread: RadialSpread::new(params.l),
            morph,
            regions: Regions::new(params.l),
            flat: FlatSphere::new(),
        })
    }

    /// Construct and run the validation suite; fails on folds or
    /// monotonicity violations.
    pub fn build(params: WormholeParams, level: ValidationLevel) -> Result<(Self, ValidationReport)> {
        let map = Self::new(params)?;
        let report = validate::validate(&map, level)?;
        Ok((map, report))
    }

    pub fn lambda(&self) -> f64 {
        self.flat.total_arclength()
    }

    // ----- the flattening profile R(s) --------------------------------------

    /// `Γ₀` arclength of the boundary image of the flattened-sphere point at
    /// arclength `s` (the radial spread compresses the last half-unit of the
    /// top cap onto the corner strip).
    pub fn boundary_param_of_s(&self, s: f64) -> f64 {
        if s <= 1.0 + PI {
            s
        } else {
            let sigma = self.lambda() - s;
            let rp = if sigma >= 0.5 {
                sigma
            } else {
                0.25 + 0.5 * sigma
            };
            2.0 + PI - rp
        }
    }

    /// Radial profile of the flattening map: `R : [0, Λ) → [0, 1)`.
    pub fn r_of_s(&self, s: f64) -> f64 {
        self.morph.corr.eval(self.boundary_param_of_s(s))
    }

    pub fn r_of_s_prime(&self, s: f64) -> f64 {
        let da_ds = if s <= 1.0 + PI {
            1.0
        } else if self.lambda() - s >= 0.5 {
            1.0
        } else {
            0.5
        };
        self.morph.corr.speed(self.boundary_param_of_s(s)) * da_ds
    }

    /// Inverse profile `s(R)`.
    pub fn s_of_r(&self, radius: f64) -> f64 {
        let a = self.morph.corr.inverse(radius);
        if a <= 1.0 + PI {
            a
        } else {
            let rp = 2.0 + PI - a;
            let sigma = if rp >= 0.5 { rp } else { 2.0 * (rp - 0.25) };
            self.lambda() - sigma
        }
    }

    // ----- domain checks -----------------------------------------------------

    fn check_m1(&self, c: &CylCoords) -> Result<()> {
        if self.regions.sd_p1(c.r, c.z) < -1e-9 || self.regions.sd_p2(c.r, c.z) < -1e-9 {
            return Err(CoreError::OutOfDomain(format!(
                "M1 point (r = {}, z = {}) lies inside a removed ball",
                c.r, c.z
            )));
        }
        if c.r < 1e-12 && (1.0 - 1e-12..=self.params.l - 1.0 + 1e-12).contains(&c.z) {
            return Err(CoreError::Singular("point on γ₁ (inner axis segment)".into()));
        }
        Ok(())
    }

    fn check_m2(&self, c: &HandleCoords) -> Result<()> {
        let lambda = self.lambda();
        if !(0.0..lambda).contains(&c.s) {
            if (c.s - lambda).abs() < 1e-12 || c.s >= lambda {
                return Err(CoreError::Singular("point on γ₂ (north-pole line)".into()));
            }
            return Err(CoreError::OutOfDomain(format!(
                "handle arclength {} outside [0, Λ)",
                c.s
            )));
        }
        if !(-1.0 - 1e-9..=self.params.l + 1.0 + 1e-9).contains(&c.z) {
            return Err(CoreError::OutOfDomain(format!(
                "handle parameter z = {} outside [-1, L+1]",
                c.z
            )));
        }
        Ok(())
    }

    /// Distance of a manifold point to the removed curve γ (Euclidean to γ₁
    /// on `M₁`, intrinsic to the north-pole line on `M₂`).
    pub fn tau_gamma(&self, p: &ManifoldPoint) -> f64 {
        match p {
            ManifoldPoint::M1(c) => {
                let dz = (1.0 - c.z).max(c.z - (self.params.l - 1.0)).max(0.0);
                c.r.hypot(dz)
            }
            ManifoldPoint::M2(c) => self.lambda() - c.s,
        }
    }

    // ----- forward / inverse -------------------------------------------------

    pub fn forward(&self, p: &ManifoldPoint) -> Result<V3> {
        match p {
            ManifoldPoint::M1(c) => {
                self.check_m1(c)?;
                let (r0, z0) = self.spread.forward_rz(c.r, c.z);
                let (rr, zz) = self.morph.forward(r0, z0)?;
                Ok(CylCoords::new(c.theta, rr.max(0.0), zz).to_cartesian())
            }
            ManifoldPoint::M2(c) => {
                self.check_m2(c)?;
                let radius = self.r_of_s(c.s);
                Ok(CylCoords::new(c.theta, radius, c.z).to_cartesian())
            }
        }
    }

    pub fn inverse(&self, y: &V3) -> Result<ManifoldPoint> {
        let c = CylCoords::from_cartesian(y);
        let tau = self.regions.tau_tilde(c.r, c.z);
        if tau <= 0.0 {
            return Err(CoreError::OutOfDomain(format!(
                "device point at signed distance {tau} from Σ is not in N"
            )));
        }
        let in_bore = c.r < 1.0 - GLUE_TOL
            && (-1.0 - GLUE_TOL..=self.params.l + 1.0 + GLUE_TOL).contains(&c.z);
        if in_bore {
            let s = self.s_of_r(c.r);
            let z = c.z.clamp(-1.0, self.params.l + 1.0);
            return Ok(ManifoldPoint::m2(c.theta, s, z));
        }
        let (ra, za) = self.morph.inverse(c.r, c.z, self.params.newton_tol)?;
        let (rm, zm) = self.spread.inverse_rz(ra, za);
        Ok(ManifoldPoint::m1(c.theta, rm.max(0.0), zm))
    }

    // ----- Jacobians -----------------------------------------------------------

    /// Differential of `F` at `p`, as a matrix from the chart basis at `p`
    /// to Euclidean coordinates at `F(p)`.
    ///
    /// Chart bases: Cartesian on `M₁`; `(∂s, ∂θ, ∂z)` on `M₂` — that ordering
    /// is the glue-compatible positive orientation (the chart metric is then
    /// `diag(1, ρ², α₂)`), so `det DF > 0` throughout.
    pub fn jacobian(&self, p: &ManifoldPoint) -> Result<M3> {
        match p {
            ManifoldPoint::M1(c) => {
                self.check_m1(c)?;
                let (r0, z0) = self.spread.forward_rz(c.r, c.z);
                let (j0, th0) = self.spread.jacobian_rz(c.r, c.z)?;
                let j1 = self.morph.jacobian(r0, z0)?;
                let (rr, _) = self.morph.forward(r0, z0)?;
                let th1 = if r0 < 1e-12 { 1.0 } else { rr / r0 };
                // Meridian chain and angular factor.
                let mut diag = M3::zeros();
                diag[(0, 0)] = th1 * th0;
                let j2 = j1 * nalgebra::Matrix2::new(j0[(1, 1)], 0.0, 0.0, j0[(2, 2)]);
                diag[(1, 1)] = j2[(0, 0)];
                diag[(1, 2)] = j2[(0, 1)];
                diag[(2, 1)] = j2[(1, 0)];
                diag[(2, 2)] = j2[(1, 1)];
                let y = self.forward(p)?;
                let uy = frame_matrix(CylCoords::from_cartesian(&y).theta);
                let ux = frame_matrix(c.theta);
                Ok(uy * diag * ux.transpose())
            }
            ManifoldPoint::M2(c) => {
                self.check_m2(c)?;
                let radius = self.r_of_s(c.s);
                let rp = self.r_of_s_prime(c.s);
                let uy = frame_matrix(c.theta);
                // Columns: ∂s ↦ R'(s)·r̂, ∂θ ↦ R·θ̂, ∂z ↦ ẑ.
                let mut d = M3::zeros();
                d[(0, 1)] = radius;
                d[(1, 0)] = rp;
                d[(2, 2)] = 1.0;
                Ok(uy * d)
            }
        }
    }

    /// Central-difference Jacobian of the implemented forward map, in the
    /// same bases as [`Self::jacobian`]. The step is relative,
    /// `h = scale · max(1, |coordinate|)`.
    pub fn jacobian_fd(&self, p: &ManifoldPoint, scale: f64) -> Result<M3> {
        match p {
            ManifoldPoint::M1(c) => {
                let x = c.to_cartesian();
                let mut j = M3::zeros();
                for k in 0..3 {
                    let h = scale * x[k].abs().max(1.0);
                    let mut xp = x;
                    let mut xm = x;
                    xp[k] += h;
                    xm[k] -= h;
                    let fp = self.forward(&ManifoldPoint::M1(CylCoords::from_cartesian(&xp)))?;
                    let fm = self.forward(&ManifoldPoint::M1(CylCoords::from_cartesian(&xm)))?;
                    let col = (fp - fm) / (2.0 * h);
                    j.set_column(k, &col);
                }
                Ok(j)
            }
            ManifoldPoint::M2(c) => {
                let mut j = M3::zeros();
                let coords = [c.s, c.theta, c.z];
                for k in 0..3 {
                    let h = scale * coords[k].abs().max(1.0);
                    let mut up = *c;
                    let mut dn = *c;
                    match k {
                        0 => {
                            up.s += h;
                            dn.s -= h;
                        }
                        1 => {
                            up.theta += h;
                            dn.theta -= h;
                        }
                        _ => {
                            up.z += h;
                            dn.z -= h;
                        }
                    }
                    let fp = self.forward(&ManifoldPoint::M2(up))?;
                    let fm = self.forward(&ManifoldPoint::M2(dn))?;
                    j.set_column(k, &((fp - fm) / (2.0 * h)));
                }
                Ok(j)
            }
        }
    }

    /// Metric of `M` at `p` in the chart basis used by [`Self::jacobian`].
    pub fn chart_metric(&self, p: &ManifoldPoint) -> Result<M3> {
        match p {
            ManifoldPoint::M1(_) => Ok(M3::identity()),
            ManifoldPoint::M2(c) => {
                let rho = self.flat.rho(c.s);
                Ok(M3::from_diagonal(&V3::new(
                    1.0,
                    rho * rho,
                    self.params.alpha2().eval(c.z),
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::wrap_angle;

    fn map() -> DeformationMap {
        DeformationMap::new(WormholeParams::default()).unwrap()
    }

    #[test]
    fn flat_cap_is_fixed() {
        // (θ, s = 0.1, z = 0) → X(θ, 0.1, 0): R(s) = s on the inner cap.
        let m = map();
        let y = m.forward(&ManifoldPoint::m2(0.7, 0.1, 0.0)).unwrap();
        let c = CylCoords::from_cartesian(&y);
        assert!((c.r - 0.1).abs() < 1e-13 && c.z.abs() < 1e-13);
        assert!((wrap_angle(c.theta) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn far_field_identity() {
        let m = map();
        let p = ManifoldPoint::m1(0.0, 10.0, 10.0);
        let y = m.forward(&p).unwrap();
        assert!((y - V3::new(10.0, 0.0, 10.0)).norm() < 1e-14);
        let j = m.jacobian(&p).unwrap();
        assert!((j - M3::identity()).norm() < 1e-12);
        match m.inverse(&y).unwrap() {
            ManifoldPoint::M1(c) => {
                assert!((c.r - 10.0).abs() < 1e-12 && (c.z - 10.0).abs() < 1e-12)
            }
            _ => panic!("far-field point must invert into M1"),
        }
    }

    #[test]
    fn flattening_profile_near_np_has_slope_half() {
        let m = map();
        let lambda = m.lambda();
        for sigma in [0.05, 0.2, 0.4] {
            let r = m.r_of_s(lambda - sigma);
            assert!(
                (r - (1.0 - 0.5 * sigma)).abs() < 1e-12,
                "R(Λ - {sigma}) = {r}"
            );
        }
        // R(s) = s near SP.
        assert!((m.r_of_s(0.2) - 0.2).abs() < 1e-13);
    }

    #[test]
    fn glued_boundary_consistency() {
        // F₁'s limit onto ∂P₁ equals F₂ on S²_flat × {-1}: approach ∂P₁ from
        // M₁ along the inward normal and compare with the M₂ value.
        let m = map();
        let fs = FlatSphere::new();
        for i in 1..40 {
            let s = fs.total_arclength() * i as f64 / 40.0;
            let (rho, zeta) = fs.point(s).unwrap();
            let theta = 0.9;
            // Boundary normal of P₁ in the meridian plane.
            let (tr, tz) = fs.tangent(s);
            let (nr, nz) = (tz, -tr); // outward from P₁
            let eps = 1e-8;
            let p1 = ManifoldPoint::m1(theta, rho + eps * nr, zeta + eps * nz);
            let y1 = m.forward(&p1).unwrap();
            let y2 = m.forward(&ManifoldPoint::m2(theta, s, -1.0)).unwrap();
            assert!(
                (y1 - y2).norm() < 1e-7,
                "glue mismatch at s = {s}: {} vs {}",
                y1,
                y2
            );
        }
    }

    #[test]
    fn inverse_round_trip_both_charts() {
        let m = map();
        let pts = [
            ManifoldPoint::m1(0.3, 0.2, 3.0),
            ManifoldPoint::m1(2.0, 1.6, 1.6),
            ManifoldPoint::m1(4.0, 3.0, -1.0),
            ManifoldPoint::m1(1.0, 0.4, -2.0),
            ManifoldPoint::m2(0.5, 0.3, 2.0),
            ManifoldPoint::m2(5.1, 3.0, -0.5),
            ManifoldPoint::m2(2.2, 4.9, 8.7),
        ];
        for p in pts {
            let y = m.forward(&p).unwrap();
            let q = m.inverse(&y).unwrap();
            match (p, q) {
                (ManifoldPoint::M1(a), ManifoldPoint::M1(b)) => {
                    assert!((a.r - b.r).abs() < 1e-8 && (a.z - b.z).abs() < 1e-8, "{a:?} vs {b:?}");
                }
                (ManifoldPoint::M2(a), ManifoldPoint::M2(b)) => {
                    assert!((a.s - b.s).abs() < 1e-8 && (a.z - b.z).abs() < 1e-9, "{a:?} vs {b:?}");
                }
                (a, b) => panic!("chart flip: {a:?} -> {b:?}"),
            }
        }
    }

    #[test]
    fn inverse_bore_example() {
        let m = map();
        let y = V3::new(0.1, 0.0, 0.0);
        match m.inverse(&y).unwrap() {
            ManifoldPoint::M2(c) => {
                assert!((c.s - 0.1).abs() < 1e-12 && c.z.abs() < 1e-13);
            }
            _ => panic!("bore point must invert into M2"),
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = map();
        let pts = [
            ManifoldPoint::m1(0.4, 0.2, 4.0),  // neck collar
            ManifoldPoint::m1(1.3, 2.1, 0.6),  // ball collar
            ManifoldPoint::m1(2.2, 0.8, 4.5),  // morph band
            ManifoldPoint::m1(0.0, 5.0, -3.0), // morph, outer
            ManifoldPoint::m2(0.8, 0.6, 1.0),
            ManifoldPoint::m2(0.8, 4.6, 7.0),
        ];
        for p in pts {
            let ja = m.jacobian(&p).unwrap();
            let jf = m.jacobian_fd(&p, 1e-6).unwrap();
            let rel = (ja - jf).norm() / ja.norm();
            assert!(rel < 2e-6, "Jacobian mismatch {rel} at {p:?}");
        }
    }

    #[test]
    fn jacobian_orientation() {
        let m = map();
        for p in [
            ManifoldPoint::m1(0.0, 0.15, 2.0),
            ManifoldPoint::m1(0.0, 2.0, 4.0),
            ManifoldPoint::m2(0.0, 2.0, 4.0),
            ManifoldPoint::m1(0.0, 6.0, 3.0),
        ] {
            let det = m.jacobian(&p).unwrap().determinant();
            assert!(det > 0.0, "det = {det} at {p:?}");
        }
    }

    #[test]
    fn rejects_gamma() {
        let m = map();
        assert!(m.forward(&ManifoldPoint::m1(0.0, 0.0, 4.0)).is_err());
        assert!(m
            .forward(&ManifoldPoint::m2(0.0, FlatSphere::new().total_arclength(), 0.0))
            .is_err());
    }
}
