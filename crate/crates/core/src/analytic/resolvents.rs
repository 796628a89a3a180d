//! Large-N resolvents of the GUE LvN generator and GUE-jump dissipator.

use std::f64::consts::PI;

use crate::analytic::form_factors::semicircle_difference_density;
use crate::error::{invalid, Error, Result};
use crate::specfun::hyp2f1_complex;
use crate::C64;

fn check_v(v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid("v", format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

/// (z/2v)(1 − ₂F₁(−1/2, 1/2; 2; 16v/z²)); the cut is [−4√v, 4√v].
pub fn lvn_resolvent(z: C64, v: f64) -> Result<C64> {
    check_v(v)?;
    let edge = 4.0 * v.sqrt();
    if z.im == 0.0 && z.re.abs() <= edge {
        return Err(Error::BranchCut { arg: format!("{z}") });
    }
    let w = 16.0 * v / (z * z);
    Ok(z / (2.0 * v) * (1.0 - hyp2f1_complex(-0.5, 0.5, 2.0, w)?))
}

/// −(1/2v)(1 − ₂F₁(−1/2, 1/2; 2; −16v/z)); the cut is [−16v, 0].
pub fn gue_dissipator_resolvent(z: C64, v: f64) -> Result<C64> {
    check_v(v)?;
    if z.im == 0.0 && z.re <= 0.0 && z.re >= -16.0 * v {
        return Err(Error::BranchCut { arg: format!("{z}") });
    }
    let w = -16.0 * v / z;
    Ok(-(1.0 - hyp2f1_complex(-0.5, 0.5, 2.0, w)?) / (2.0 * v))
}

/// Small-|z| form −(1/2v)(1 − (4/3π)√(z + 16v)/√z).
pub fn gue_dissipator_resolvent_near_origin(z: C64, v: f64) -> Result<C64> {
    check_v(v)?;
    if z.norm() == 0.0 {
        return Err(Error::BranchCut { arg: format!("{z}") });
    }
    Ok(-(1.0 - 4.0 / (3.0 * PI) * (z + 16.0 * v).sqrt() / z.sqrt()) / (2.0 * v))
}

/// Density of the dissipator eigenvalues x = −u² ∈ [−16v, 0), i.e.
/// P(√−x)/√−x with P the semicircle difference density.
pub fn gue_dissipator_density(x: f64, v: f64) -> Result<f64> {
    check_v(v)?;
    if !(x < 0.0) || x <= -16.0 * v {
        return Ok(0.0);
    }
    let u = (-x).sqrt();
    Ok(semicircle_difference_density(u, v)? / u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn lvn_laurent_expansion() {
        let v = 1.0;
        for k in 0..8 {
            let z = C64::from_polar(100.0, 0.1 + k as f64 * 0.8);
            let g = lvn_resolvent(z, v).unwrap();
            let lead = 1.0 / z + 2.0 * v / (z * z * z);
            assert!(((g - lead) / g).norm() < 1e-6, "{z}");
        }
    }

    #[test]
    fn lvn_stieltjes_matches_difference_density() {
        let v = 0.5;
        for &u in &[-2.2, -0.7, 0.3, 1.9] {
            let g = lvn_resolvent(C64::new(u, 1e-9), v).unwrap();
            let want = semicircle_difference_density(u, v).unwrap();
            assert!((-g.im / PI - want).abs() < 1e-6, "u = {u}");
        }
        assert!(lvn_resolvent(C64::new(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn dissipator_resolvent_conjugation_and_cut() {
        let z = C64::new(-3.0, 0.4);
        let a = gue_dissipator_resolvent(z, 1.0).unwrap();
        let b = gue_dissipator_resolvent(z.conj(), 1.0).unwrap();
        assert!((a - b.conj()).norm() < 1e-13);
        assert!(gue_dissipator_resolvent(C64::new(-1.0, 0.0), 1.0).is_err());
        let g = gue_dissipator_resolvent(C64::new(-100.0, 0.0), 1.0).unwrap();
        assert!(g.re < 0.0);
    }

    #[test]
    fn dissipator_near_origin() {
        for &z in &[C64::new(1e-9, 0.0), C64::new(-1e-9, 1e-10), C64::new(1e-10, 1e-9)] {
            let g = gue_dissipator_resolvent(z, 1.0).unwrap();
            let a = gue_dissipator_resolvent_near_origin(z, 1.0).unwrap();
            assert!(((g - a) / g).norm() < 1e-4, "{z}: {g} vs {a}");
        }
    }

    #[test]
    fn dissipator_density_from_resolvent() {
        let v = 1.0;
        for &x in &[-12.0, -5.0, -1.0, -0.05] {
            let g = gue_dissipator_resolvent(C64::new(x, 1e-10), v).unwrap();
            let want = gue_dissipator_density(x, v).unwrap();
            assert!((-g.im / PI - want).abs() < 1e-6 * want.max(1.0), "x = {x}");
        }
        // unit mass; substitute x = −s² to absorb the 1/√x edge
        let q = integrate(|s: f64| 2.0 * s * gue_dissipator_density(-s * s, v).unwrap(), 0.0, 4.0, 1e-12, 1e-12)
            .unwrap();
        assert!((q.value - 1.0).abs() < 1e-8);
        // ρ(x)√|x| stays bounded at the origin
        let r: Vec<f64> = [1e-4, 1e-6, 1e-8]
            .iter()
            .map(|&e| gue_dissipator_density(-e, v).unwrap() * e.sqrt())
            .collect();
        assert!(r.iter().all(|&x| x.is_finite() && x < 1.0));
        assert!((r[2] - r[1]).abs() < 1e-3);
    }
}
