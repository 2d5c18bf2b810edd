use wormhole_core::deformation::{MeridianRegion, MorphConfig, ProfileMorph};

fn min_composite_det(g: &ProfileMorph) -> f64 {
    let mut dmin = f64::INFINITY;
    let zones: [(f64, f64, f64, f64); 3] = [
        (1.0, 3.4, 1.05, 2.8),
        (0.2, 1.6, -3.2, -1.25),
        (0.3, 1.2, 1.05, 2.2),
    ];
    for (r0, r1, z0, z1) in zones {
        for i in 0..22 {
            let r = r0 + (r1 - r0) * (i as f64 + 0.5) / 22.0;
            for j in 0..22 {
                let z = z0 + (z1 - z0) * (j as f64 + 0.5) / 22.0;
                if g.regions.sd_dumbbell(r, z) < 0.265 { continue; }
                if !matches!(g.region(r, z), Ok(MeridianRegion::Morph)) { continue; }
                if let Ok(j2) = g.jacobian(r, z) {
                    let det = j2[(0,0)]*j2[(1,1)] - j2[(0,1)]*j2[(1,0)];
                    dmin = dmin.min(det);
                }
            }
        }
    }
    dmin
}

fn min_sweep(g: &ProfileMorph) -> (f64, f64) {
    let mut det = f64::INFINITY;
    let mut clear = f64::INFINITY;
    for i in 0..=1500 {
        let frac = i as f64 / 1500.0;
        for k in 0..=30 {
            let s = 0.002 + 0.996 * k as f64 / 30.0;
            let (da, dn) = g.sweep_dets(frac, s);
            det = det.min(da).min(dn);
            if k > 0 {
                let (ca, cn) = g.sweep_clearance(frac, s);
                clear = clear.min(ca).min(cn);
            }
        }
    }
    (det, clear)
}

fn main() {
    for (a1, t1, t2, p1, p2) in [
        (0.80, 0.40, 0.55, 0.75, 0.97),
        (0.60, 0.40, 0.55, 0.75, 0.97),
        (0.45, 0.50, 0.65, 0.75, 0.97),
        (0.80, 0.40, 0.55, 0.68, 1.05),
        (0.60, 0.45, 0.60, 0.68, 1.05),
        (0.45, 0.50, 0.65, 0.68, 1.08),
    ] {
        let cfg = MorphConfig { arc_pin_angle: a1, a_tail: (t1, t2), n_pocket: (p1, p2), ..Default::default() };
        match ProfileMorph::new(8.0, cfg) {
            Ok(g) => {
                let (sd, sc) = min_sweep(&g);
                let cd = if sd > 0.0 { min_composite_det(&g) } else { f64::NAN };
                println!("a1={a1} tail=({t1},{t2}) pocket=({p1},{p2}): sweep_det={sd:+.4} clear={sc:+.4} composite_det={cd:+.5}");
            }
            Err(e) => println!("a1={a1} ...: ERR {e}"),
        }
    }
}
