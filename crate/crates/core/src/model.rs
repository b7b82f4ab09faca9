//! Ground-state phase diagram of the integrable bond-charge chain at the
//! symmetric coupling point, filling n in (0, 1].
//!
//! In the thermodynamic limit the ground state is fixed by two densities:
//! unpaired fermions n_s filling a Fermi sea, and eta pairs n_d spread with
//! uniform amplitude over the L' = L - N_s momenta left vacant by the sea.
//! Minimizing the energy density
//!
//!   e(n_s, n_d) = -(2/pi) sin(pi n_s) + u n_d,    n = n_s + 2 n_d,
//!
//! over n_s in [0, n] gives three bulk regimes plus the empty-sea corner:
//!
//! * region I   (u > u_c(n)):  pure Fermi sea, n_s = n, n_d = 0;
//! * region II  (-4 < u < u_c(n)): mixed, cos(pi n_s) = -u/4 fixes the sea
//!   and the remainder pairs up, n_d = (n - n_s)/2;
//! * region III (u < -4): fully paired, n_s = 0, n_d = n/2;
//! * region IV: the n = 1, u > 4 corner of region I, kept as its own label
//!   because at unit filling the pair fraction a jumps between 0 and 1/2
//!   across u = 4 instead of growing continuously.
//!
//! The critical line u_c(n) = -4 cos(pi n) is where the mixed-phase
//! stationarity condition collides with the constraint boundary n_s = n.
//! Points exactly on u = u_c(n) or u = -4 are labelled `Boundary` and carry
//! the limiting parameters of the adjacent mixed phase, which keeps every
//! observable continuous from the region-II side.
//!
//! All entanglement measures downstream depend on the phase point only
//! through the pair fraction a = n_d / (1 - n_s): the probability that any
//! given vacant slot hosts a pair.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// A point of the control space: filling n in (0, 1] and interaction u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub n: f64,
    pub u: f64,
}

impl PhasePoint {
    pub fn new(n: f64, u: f64) -> Self {
        PhasePoint { n, u }
    }
}

/// Which branch of the phase diagram a point falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    I,
    II,
    III,
    IV,
    Boundary,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::Boundary => "boundary",
        };
        f.write_str(s)
    }
}

/// Variational parameters of the ground state at one phase point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateParams {
    /// Density of unpaired (Fermi-sea) fermions.
    pub n_s: f64,
    /// Density of eta pairs.
    pub n_d: f64,
    pub region: Region,
    /// Pair fraction a = n_d / (1 - n_s); the single knob every
    /// thermodynamic-limit entanglement measure depends on.
    pub a: f64,
}

/// Side from which a boundary is approached when evaluating one-sided
/// quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    FromBelow,
    FromAbove,
}

/// Analytic second derivatives of the ground-state energy density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDerivatives {
    pub d2e_du2: f64,
    pub d2e_dn2: f64,
    pub side: Side,
}

fn validate(p: PhasePoint) -> Result<()> {
    if !(p.n > 0.0 && p.n <= 1.0) || !p.n.is_finite() {
        return Err(Error::FillingOutOfRange(p.n));
    }
    if !p.u.is_finite() {
        return Err(Error::NonFiniteCoupling(p.u));
    }
    Ok(())
}

/// Critical interaction u_c(n) = -4 cos(pi n) separating the mixed phase
/// from the pure Fermi sea.
pub fn critical_u(n: f64) -> Result<f64> {
    if !(n > 0.0 && n <= 1.0) || !n.is_finite() {
        return Err(Error::FillingOutOfRange(n));
    }
    Ok(-4.0 * (PI * n).cos())
}

/// Ground-state densities, region label, and pair fraction at a phase point.
pub fn ground_state(p: PhasePoint) -> Result<GroundStateParams> {
    validate(p)?;
    let u_c = critical_u(p.n)?;

    if p.u > u_c {
        let region = if p.n == 1.0 { Region::IV } else { Region::I };
        return Ok(GroundStateParams {
            n_s: p.n,
            n_d: 0.0,
            region,
            a: 0.0,
        });
    }
    if p.u == u_c {
        // Limiting parameters from the region-II side. For n < 1 the pair
        // fraction vanishes at the boundary; at n = 1 the mixed phase keeps
        // a = 1/2 all the way up to u = 4, so that is the limit we report.
        let a = if p.n == 1.0 { 0.5 } else { 0.0 };
        return Ok(GroundStateParams {
            n_s: p.n,
            n_d: 0.0,
            region: Region::Boundary,
            a,
        });
    }
    if p.u > -4.0 {
        // Mixed phase: the sea depth solves cos(pi n_s) = -u/4.
        let n_s = (-p.u / 4.0).acos() / PI;
        // u < u_c guarantees n_s < n mathematically; the max() only guards
        // the last-ulp case where acos rounds onto the constraint.
        let n_d = ((p.n - n_s) / 2.0).max(0.0);
        let a = if n_d == 0.0 { 0.0 } else { n_d / (1.0 - n_s) };
        return Ok(GroundStateParams {
            n_s,
            n_d,
            region: Region::II,
            a,
        });
    }
    // u <= -4: every fermion is bound into a pair. The u = -4 line itself is
    // the III boundary; its parameters coincide with the region-II limit.
    let region = if p.u == -4.0 {
        Region::Boundary
    } else {
        Region::III
    };
    Ok(GroundStateParams {
        n_s: 0.0,
        n_d: p.n / 2.0,
        region,
        a: p.n / 2.0,
    })
}

/// Variational energy density e(n_s, n_d) = -(2/pi) sin(pi n_s) + u n_d.
/// No minimization: callers may probe non-optimal densities (the tests use
/// this to check that `ground_state` really is the minimizer).
pub fn energy_density(n_s: f64, n_d: f64, u: f64) -> f64 {
    debug_assert!(n_s >= 0.0 && n_d >= 0.0 && n_s + 2.0 * n_d <= 2.0 + 1e-12);
    -(2.0 / PI) * (PI * n_s).sin() + u * n_d
}

/// Ground-state energy density at a phase point.
pub fn ground_state_energy(p: PhasePoint) -> Result<f64> {
    let gs = ground_state(p)?;
    Ok(energy_density(gs.n_s, gs.n_d, p.u))
}

/// Analytic second derivatives of the ground-state energy density with
/// respect to u and n, one-sided at phase boundaries.
///
/// * region II: the envelope theorem gives dE/du = n_d(u), so
///   d2E/du2 = -1 / (2 pi sqrt(16 - u^2)); E is linear in n at fixed u
///   (n enters only through n_d = (n - n_s)/2), so d2E/dn2 = 0.
/// * regions I/IV: E = -(2/pi) sin(pi n), so d2E/dn2 = 2 pi sin(pi n) and
///   d2E/du2 = 0. (Differentiating -(2/pi) sin twice brings back +sin.)
/// * region III: E = u n / 2 is linear in both arguments.
///
/// At |u| = 4 approached from inside the mixed phase the u-derivative
/// diverges; that is reported as [`Error::SingularPoint`] rather than an
/// infinity.
pub fn energy_second_derivatives(p: PhasePoint, side: Side) -> Result<EnergyDerivatives> {
    let gs = ground_state(p)?;
    let effective = match gs.region {
        Region::Boundary => {
            if p.u == -4.0 {
                // II/III line: below in u is the fully paired phase.
                match side {
                    Side::FromBelow => Region::III,
                    Side::FromAbove => Region::II,
                }
            } else {
                // u = u_c(n) line: below in u is the mixed phase.
                match side {
                    Side::FromBelow => Region::II,
                    Side::FromAbove => {
                        if p.n == 1.0 {
                            Region::IV
                        } else {
                            Region::I
                        }
                    }
                }
            }
        }
        r => r,
    };
    let derivs = match effective {
        Region::II => {
            let disc = 16.0 - p.u * p.u;
            if disc <= 0.0 {
                return Err(Error::SingularPoint);
            }
            EnergyDerivatives {
                d2e_du2: -1.0 / (2.0 * PI * disc.sqrt()),
                d2e_dn2: 0.0,
                side,
            }
        }
        Region::I | Region::IV => EnergyDerivatives {
            d2e_du2: 0.0,
            d2e_dn2: 2.0 * PI * (PI * p.n).sin(),
            side,
        },
        Region::III => EnergyDerivatives {
            d2e_du2: 0.0,
            d2e_dn2: 0.0,
            side,
        },
        Region::Boundary => unreachable!("boundary resolved to a bulk region above"),
    };
    Ok(derivs)
}

/// Filling n(a, u) along the curve of constant pair fraction a inside the
/// mixed phase: n = n_s(u) + 2 a (1 - n_s(u)).
///
/// Every thermodynamic-limit measure is a function of a alone, so these are
/// the curves along which all of them are exactly flat. a = 1/2 maps onto
/// the n = 1 line.
pub fn iso_correlation_curve(a: f64, u: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&a) || !a.is_finite() {
        return Err(Error::BadParameter(format!(
            "iso-correlation level a = {a} outside [0, 1/2]"
        )));
    }
    if !(u.abs() < 4.0) {
        return Err(Error::BadParameter(format!(
            "iso-correlation curves live in the mixed phase, need |u| < 4, got u = {u}"
        )));
    }
    let n_s = (-u / 4.0).acos() / PI;
    let mut n = n_s + 2.0 * a * (1.0 - n_s);
    // 2a(1-n_s) + n_s can overshoot 1 by one ulp when a = 1/2.
    if n > 1.0 && n < 1.0 + 1e-12 {
        n = 1.0;
    }
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::CurveOutOfRange(n));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn critical_line_anchors() {
        // Half filling sits within one ulp of u_c = 0, unit filling at
        // exactly 4, and low filling approaches -4.
        assert_abs_diff_eq!(critical_u(0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(critical_u(1.0).unwrap(), 4.0);
        assert_relative_eq!(critical_u(0.25).unwrap(), -4.0 / 2f64.sqrt(), max_relative = 1e-15);
        assert!(critical_u(0.0).is_err(), "n = 0 must be rejected");
        assert!(critical_u(1.1).is_err(), "n > 1 must be rejected");
    }

    #[test]
    fn region_classification_examples() {
        let gs = ground_state(PhasePoint::new(0.5, 2.0)).unwrap();
        assert_eq!(gs.region, Region::I);
        assert_eq!(gs.n_s, 0.5);
        assert_eq!(gs.n_d, 0.0);
        assert_eq!(gs.a, 0.0);

        let gs = ground_state(PhasePoint::new(0.5, -2.0)).unwrap();
        assert_eq!(gs.region, Region::II);
        assert_relative_eq!(gs.n_s, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(gs.n_d, 1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(gs.a, 0.125, max_relative = 1e-13);

        let gs = ground_state(PhasePoint::new(0.5, -5.0)).unwrap();
        assert_eq!(gs.region, Region::III);
        assert_eq!(gs.n_s, 0.0);
        assert_eq!(gs.n_d, 0.25);
        assert_eq!(gs.a, 0.25);

        let gs = ground_state(PhasePoint::new(1.0, 5.0)).unwrap();
        assert_eq!(gs.region, Region::IV);
        assert_eq!(gs.a, 0.0);

        // Boundaries carry the limiting mixed-phase parameters.
        let gs = ground_state(PhasePoint::new(1.0, 4.0)).unwrap();
        assert_eq!(gs.region, Region::Boundary);
        assert_eq!(gs.a, 0.5);
        let gs = ground_state(PhasePoint::new(0.5, -4.0)).unwrap();
        assert_eq!(gs.region, Region::Boundary);
        assert_eq!(gs.n_d, 0.25);
    }

    #[test]
    fn unit_filling_pins_the_pair_fraction_at_one_half() {
        // At n = 1 the mixed phase has a = (1 - n_s)/(2(1 - n_s)) = 1/2
        // identically; the arithmetic must deliver that exactly, because an
        // acceptance check requires S_single = 2 bits to 1e-12 across the
        // whole interval.
        let mut u = -3.9;
        while u < 4.0 {
            let gs = ground_state(PhasePoint::new(1.0, u)).unwrap();
            assert_eq!(gs.region, Region::II);
            assert_eq!(gs.a, 0.5, "a must be exactly 1/2 at u = {u}");
            u += 0.037;
        }
    }

    #[test]
    fn mixed_phase_stationarity_condition() {
        let mut u = -3.9;
        while u < -0.05 {
            let gs = ground_state(PhasePoint::new(0.9, u)).unwrap();
            assert_eq!(gs.region, Region::II);
            assert_abs_diff_eq!((PI * gs.n_s).cos(), -u / 4.0, epsilon = 1e-14);
            assert_abs_diff_eq!(gs.n_s + 2.0 * gs.n_d, 0.9, epsilon = 1e-14);
            u += 0.05;
        }
    }

    #[test]
    fn ground_state_energy_example() {
        // n = 0.5, u = -2: n_s = 1/3, n_d = 1/12,
        // e = -(2/pi) sin(pi/3) - 2/12 = -sqrt(3)/pi - 1/6.
        let e = ground_state_energy(PhasePoint::new(0.5, -2.0)).unwrap();
        assert_relative_eq!(e, -3f64.sqrt() / PI - 1.0 / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn second_derivatives_by_region() {
        let d = energy_second_derivatives(PhasePoint::new(0.5, -2.0), Side::FromBelow).unwrap();
        assert_relative_eq!(d.d2e_du2, -1.0 / (2.0 * PI * 12f64.sqrt()), max_relative = 1e-14);
        assert_eq!(d.d2e_dn2, 0.0);

        let d = energy_second_derivatives(PhasePoint::new(0.5, 2.0), Side::FromAbove).unwrap();
        assert_eq!(d.d2e_du2, 0.0);
        assert_relative_eq!(d.d2e_dn2, 2.0 * PI, max_relative = 1e-14);

        let d = energy_second_derivatives(PhasePoint::new(0.5, -7.0), Side::FromBelow).unwrap();
        assert_eq!(d.d2e_du2, 0.0);
        assert_eq!(d.d2e_dn2, 0.0);

        // Boundary at u = -4: mixed side diverges, paired side is flat.
        assert_eq!(
            energy_second_derivatives(PhasePoint::new(0.5, -4.0), Side::FromAbove),
            Err(Error::SingularPoint)
        );
        let d = energy_second_derivatives(PhasePoint::new(0.5, -4.0), Side::FromBelow).unwrap();
        assert_eq!(d.d2e_du2, 0.0);
    }

    #[test]
    fn second_derivative_in_u_matches_finite_differences() {
        let h = 1e-3;
        for &u in &[-3.5, -2.0, -1.0, -0.3] {
            let p = |uu: f64| ground_state_energy(PhasePoint::new(0.75, uu)).unwrap();
            let num = (p(u + h) - 2.0 * p(u) + p(u - h)) / (h * h);
            let ana = energy_second_derivatives(PhasePoint::new(0.75, u), Side::FromBelow)
                .unwrap()
                .d2e_du2;
            assert_relative_eq!(num, ana, max_relative = 1e-5);
        }
    }

    #[test]
    fn second_derivative_in_n_matches_finite_differences_in_the_sea_phase() {
        // Pins the sign convention: d2/dn2 of -(2/pi) sin(pi n) is
        // +2 pi sin(pi n), not a cosine.
        let h = 1e-4;
        for &n in &[0.3, 0.5, 0.8] {
            let e = |nn: f64| ground_state_energy(PhasePoint::new(nn, 3.9)).unwrap();
            let num = (e(n + h) - 2.0 * e(n) + e(n - h)) / (h * h);
            let ana = energy_second_derivatives(PhasePoint::new(n, 3.9), Side::FromAbove)
                .unwrap()
                .d2e_dn2;
            assert_relative_eq!(num, ana, max_relative = 1e-5);
            assert_relative_eq!(ana, 2.0 * PI * (PI * n).sin(), max_relative = 1e-14);
        }
    }

    #[test]
    fn iso_correlation_curve_examples() {
        // a = 1/2 is the unit-filling line.
        for &u in &[-3.9, -1.0, 0.0, 2.5, 3.9] {
            assert_eq!(iso_correlation_curve(0.5, u).unwrap(), 1.0);
        }
        // a = 1/8 passes through (n, u) = (1/2, -2).
        assert_relative_eq!(iso_correlation_curve(0.125, -2.0).unwrap(), 0.5, max_relative = 1e-14);
        // The a = 0 curve is the critical line itself: n(u) = n_s(u).
        let n = iso_correlation_curve(0.0, -2.0).unwrap();
        assert_relative_eq!(n, 1.0 / 3.0, max_relative = 1e-14);
        assert!(iso_correlation_curve(0.7, 0.0).is_err());
        assert!(iso_correlation_curve(0.2, 4.0).is_err());
    }

    #[test]
    fn pair_fraction_is_constant_along_iso_curves() {
        for &a in &[0.05, 0.125, 0.3, 0.5] {
            let mut u = -3.95;
            while u < 3.95 {
                let n = iso_correlation_curve(a, u).unwrap();
                let gs = ground_state(PhasePoint::new(n, u)).unwrap();
                assert_abs_diff_eq!(gs.a, a, epsilon = 1e-12);
                u += 0.1;
            }
        }
    }

    #[test]
    fn energy_is_continuous_across_the_critical_line() {
        for &n in &[0.3, 0.5, 0.9] {
            let u_c = critical_u(n).unwrap();
            let below = ground_state_energy(PhasePoint::new(n, u_c - 1e-9)).unwrap();
            let at = ground_state_energy(PhasePoint::new(n, u_c)).unwrap();
            let above = ground_state_energy(PhasePoint::new(n, u_c + 1e-9)).unwrap();
            assert_abs_diff_eq!(below, at, epsilon = 1e-8);
            assert_abs_diff_eq!(above, at, epsilon = 1e-8);
        }
    }
}
