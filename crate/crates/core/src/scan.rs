//! Parameter sweeps, numerical derivatives, and classification of the
//! derivative singularities at the phase boundaries.
//!
//! The ground-state transitions show up in the u-derivatives of the
//! correlation measures in three distinct ways: a logarithmic divergence
//! (entropy-like measures at the mixed/sea boundary, where the pair
//! fraction vanishes linearly and h2'(a) ~ -log a), an inverse-square-root
//! divergence (at u = -4, where n_s'(u) ~ (16 - u^2)^(-1/2)), and finite
//! jumps (measures with finite slope in a). `classify_singularity` tells
//! these apart from two-sided log-spaced derivative profiles, fitting both
//! power-law and logarithmic models and requiring one to win by a margin.

use crate::error::{Error, Result};
use crate::measures::{self, EntropyForm};
use crate::model::{self, GroundStateParams, PhasePoint, Region};
use crate::numerics::KahanSum;

/// What varies along a sweep; the other coordinate is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    /// Vary u at fixed filling n.
    U { n: f64 },
    /// Vary n at fixed interaction u.
    N { u: f64 },
    /// Vary u along the curve of constant pair fraction a (filling follows
    /// n = n_s(u) + 2a(1 - n_s(u))). Every thermodynamic-limit measure is
    /// constant along these curves; sweeps over them are the sharpest
    /// smoothness test available.
    IsoCurve { a: f64 },
}

/// Measures a sweep can evaluate per point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    EnergyDensity,
    SingleModeEntropy,
    PairMutualInformation,
    PairNegativity,
    PairedModesEntropy(EntropyForm),
    TwoPairMutualInformation,
    Odlro,
}

impl MeasureKind {
    /// Stable column name for CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::EnergyDensity => "energy",
            MeasureKind::SingleModeEntropy => "s_single",
            MeasureKind::PairMutualInformation => "i_pair",
            MeasureKind::PairNegativity => "n_pair",
            MeasureKind::PairedModesEntropy(_) => "s_pair",
            MeasureKind::TwoPairMutualInformation => "i_two_pair",
            MeasureKind::Odlro => "odlro",
        }
    }

    /// True for measures reported in bits (candidates for nats conversion).
    pub fn is_entropic(&self) -> bool {
        matches!(
            self,
            MeasureKind::SingleModeEntropy
                | MeasureKind::PairMutualInformation
                | MeasureKind::PairedModesEntropy(_)
                | MeasureKind::TwoPairMutualInformation
        )
    }
}

/// The full measure set in canonical order.
pub fn default_measures(form: EntropyForm) -> Vec<MeasureKind> {
    vec![
        MeasureKind::EnergyDensity,
        MeasureKind::SingleModeEntropy,
        MeasureKind::PairMutualInformation,
        MeasureKind::PairNegativity,
        MeasureKind::PairedModesEntropy(form),
        MeasureKind::TwoPairMutualInformation,
        MeasureKind::Odlro,
    ]
}

/// One sweep point: abscissa, region label, measure values, and (optional)
/// first derivatives with respect to the abscissa.
#[derive(Debug, Clone)]
pub struct ScanRecord {
    pub x: f64,
    pub region: Region,
    pub values: Vec<f64>,
    pub d1: Vec<Option<f64>>,
}

/// Evaluate one measure at a resolved ground state; `u` is the interaction
/// at that point (the energy density needs it, nothing else does).
pub fn eval_measure(kind: MeasureKind, gs: &GroundStateParams, u: f64) -> f64 {
    match kind {
        MeasureKind::EnergyDensity => model::energy_density(gs.n_s, gs.n_d, u),
        MeasureKind::SingleModeEntropy => measures::single_mode_entropy(gs.a),
        MeasureKind::PairMutualInformation => measures::pair_mutual_information(gs.a),
        MeasureKind::PairNegativity => measures::pair_negativity(gs.a),
        MeasureKind::PairedModesEntropy(form) => measures::paired_modes_entropy(gs.a, form),
        MeasureKind::TwoPairMutualInformation => measures::two_pair_mutual_information(gs.a),
        MeasureKind::Odlro => measures::odlro(gs.n_s, gs.n_d),
    }
}

/// Resolve a sweep abscissa to a phase point.
fn phase_point(axis: SweepAxis, x: f64) -> Result<PhasePoint> {
    match axis {
        SweepAxis::U { n } => Ok(PhasePoint::new(n, x)),
        SweepAxis::N { u } => Ok(PhasePoint::new(x, u)),
        SweepAxis::IsoCurve { a } => {
            let n = model::iso_correlation_curve(a, x)?;
            Ok(PhasePoint::new(n, x))
        }
    }
}

fn eval_record(axis: SweepAxis, x: f64, kinds: &[MeasureKind]) -> Result<ScanRecord> {
    let p = phase_point(axis, x)?;
    let gs = model::ground_state(p)?;
    let values = kinds.iter().map(|&k| eval_measure(k, &gs, p.u)).collect();
    Ok(ScanRecord {
        x,
        region: gs.region,
        values,
        d1: vec![None; kinds.len()],
    })
}

/// Uniform sweep over [start, stop] with the given step. Derivative slots
/// are left empty; fill them with [`numerical_derivative`].
pub fn sweep(
    axis: SweepAxis,
    start: f64,
    stop: f64,
    step: f64,
    kinds: &[MeasureKind],
) -> Result<Vec<ScanRecord>> {
    if !(step > 0.0) || !step.is_finite() || stop < start {
        return Err(Error::BadParameter(format!(
            "bad sweep range [{start}, {stop}] step {step}"
        )));
    }
    let count = ((stop - start) / step).round() as usize;
    let mut records = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let x = start + i as f64 * step;
        if x > stop + step * 1e-9 {
            break;
        }
        records.push(eval_record(axis, x, kinds)?);
    }
    Ok(records)
}

/// Fill the d1 slots with finite-difference derivatives: central where both
/// neighbours share the point's region, one-sided next to a region change
/// (so no stencil ever straddles a phase boundary), empty where neither
/// neighbour is usable.
pub fn numerical_derivative(records: &mut [ScanRecord]) {
    let len = records.len();
    if len < 2 {
        return;
    }
    let h = records[1].x - records[0].x;
    for w in records.windows(2) {
        assert!(
            ((w[1].x - w[0].x) - h).abs() <= 1e-6 * h.abs(),
            "numerical_derivative needs a uniform grid"
        );
    }
    let n_meas = records[0].values.len();
    for i in 0..len {
        let left = i > 0 && records[i - 1].region == records[i].region;
        let right = i + 1 < len && records[i + 1].region == records[i].region;
        for k in 0..n_meas {
            records[i].d1[k] = match (left, right) {
                (true, true) => Some((records[i + 1].values[k] - records[i - 1].values[k]) / (2.0 * h)),
                (false, true) => Some((records[i + 1].values[k] - records[i].values[k]) / h),
                (true, false) => Some((records[i].values[k] - records[i - 1].values[k]) / h),
                (false, false) => None,
            };
        }
    }
}

/// Window and fit policy for singularity classification.
#[derive(Debug, Clone, Copy)]
pub struct WindowPolicy {
    /// Closest approach to the critical point. Below ~1e-5 the cancellation
    /// in n - n_s(u) starts eating the derivative's significant digits.
    pub min_offset: f64,
    /// Farthest probe; keeps the window inside the asymptotic regime.
    pub max_offset: f64,
    /// Log-spaced sampling density.
    pub points_per_decade: usize,
    /// |d1| must grow by this factor from the far to the near quartile of
    /// the window before the point counts as divergent. The slowest
    /// divergence on the menu is logarithmic, which only grows by ~1.6
    /// across three decades; finite-slope profiles stay within a percent.
    /// The default sits between the two.
    pub divergence_ratio: f64,
    /// Relative margin by which the winning fit's (1 - R^2) must beat the
    /// loser's; anything closer is reported as ambiguous.
    pub fit_margin: f64,
    /// Acceptance band around -1/2 for the inverse-square-root exponent.
    pub exponent_tol: f64,
    /// A jump must exceed this multiple of the one-sided noise floor.
    pub jump_noise_factor: f64,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy {
            min_offset: 1e-5,
            max_offset: 1e-2,
            points_per_decade: 16,
            divergence_ratio: 1.35,
            fit_margin: 0.10,
            exponent_tol: 0.05,
            jump_noise_factor: 10.0,
        }
    }
}

/// Outcome classes for a derivative profile at a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityClass {
    /// |d1| ~ delta^p with p within tolerance of -1/2.
    InverseSqrt,
    /// |d1| ~ A log delta + B.
    LogDivergence,
    /// Finite one-sided limits that disagree.
    FiniteJump,
    /// Finite limits that agree within noise.
    Smooth,
    /// Divergent, but neither model wins by the required margin, or the
    /// winning power law has an exponent outside the accepted band.
    Ambiguous,
}

impl std::fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SingularityClass::InverseSqrt => "inverse_sqrt",
            SingularityClass::LogDivergence => "log_divergence",
            SingularityClass::FiniteJump => "finite_jump",
            SingularityClass::Smooth => "smooth",
            SingularityClass::Ambiguous => "ambiguous",
        };
        f.write_str(s)
    }
}

/// Which side of the critical point the classification was made on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitSide {
    FromBelow,
    FromAbove,
    Both,
}

impl std::fmt::Display for FitSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FitSide::FromBelow => "from_below",
            FitSide::FromAbove => "from_above",
            FitSide::Both => "both",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct SingularityReport {
    pub x_c: f64,
    pub class: SingularityClass,
    /// Power-law exponent, when a power fit was performed and won.
    pub fitted_exponent: Option<f64>,
    /// R^2 of the winning fit, when a fit was performed.
    pub fit_r2: Option<f64>,
    pub side: FitSide,
    /// Human-readable fit diagnostics (both R^2 values, limits, noise).
    pub notes: String,
}

/// Two-sided log-spaced derivative profile around x_c. Each point carries a
/// local central-difference derivative with step h = delta/16, so the
/// stencil never crosses the critical point; points whose stencil leaves
/// the model's domain are skipped silently (a one-sided profile is fine).
pub fn refined_profile(
    axis: SweepAxis,
    x_c: f64,
    policy: &WindowPolicy,
    kinds: &[MeasureKind],
) -> Result<Vec<ScanRecord>> {
    assert!(policy.min_offset > 0.0 && policy.max_offset > policy.min_offset);
    let decades = (policy.max_offset / policy.min_offset).log10();
    let n_pts = (decades * policy.points_per_decade as f64).ceil() as usize + 1;
    let step = decades / (n_pts - 1) as f64;
    let mut records = Vec::new();
    for side in [-1.0f64, 1.0] {
        for i in 0..n_pts {
            let delta = policy.min_offset * 10f64.powf(i as f64 * step);
            let x = x_c + side * delta;
            let h = delta / 16.0;
            let (lo, hi) = (
                eval_record(axis, x - h, kinds),
                eval_record(axis, x + h, kinds),
            );
            let (Ok(lo), Ok(hi), Ok(mut rec)) = (lo, hi, eval_record(axis, x, kinds)) else {
                continue;
            };
            // A stencil that straddles a region change measures nothing.
            if lo.region != rec.region || hi.region != rec.region {
                continue;
            }
            for k in 0..kinds.len() {
                rec.d1[k] = Some((hi.values[k] - lo.values[k]) / (2.0 * h));
            }
            records.push(rec);
        }
    }
    if records.is_empty() {
        return Err(Error::InsufficientResolution(0));
    }
    records.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    Ok(records)
}

pub(crate) struct LinFit {
    pub(crate) slope: f64,
    pub(crate) intercept: f64,
    pub(crate) r2: f64,
}

pub(crate) fn linear_regression(xs: &[f64], ys: &[f64]) -> LinFit {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
    for (x, y) in xs.iter().zip(ys) {
        sxx.add((x - mx) * (x - mx));
        sxy.add((x - mx) * (y - my));
        syy.add((y - my) * (y - my));
    }
    let slope = sxy.value() / sxx.value();
    let intercept = my - slope * mx;
    let ss_tot = syy.value();
    let mut ss_res = KahanSum::new();
    for (x, y) in xs.iter().zip(ys) {
        let e = y - (intercept + slope * x);
        ss_res.add(e * e);
    }
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res.value() / ss_tot
    } else if ss_res.value() < 1e-30 {
        1.0
    } else {
        0.0
    };
    LinFit {
        slope,
        intercept,
        r2,
    }
}

/// Per-side view of the profile: (delta, d1) with delta = |x - x_c| sorted
/// ascending.
fn side_points(
    records: &[ScanRecord],
    measure_idx: usize,
    x_c: f64,
    policy: &WindowPolicy,
    above: bool,
) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            let delta = if above { r.x - x_c } else { x_c - r.x };
            if delta < policy.min_offset * (1.0 - 1e-9)
                || delta > policy.max_offset * (1.0 + 1e-9)
            {
                return None;
            }
            r.d1[measure_idx].map(|d| (delta, d))
        })
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pts
}

fn quartile_stats(pts: &[(f64, f64)], near: bool) -> (f64, f64) {
    let q = (pts.len() / 4).max(2).min(pts.len());
    let slice = if near { &pts[..q] } else { &pts[pts.len() - q..] };
    let mean = slice.iter().map(|p| p.1).sum::<f64>() / q as f64;
    let var = slice.iter().map(|p| (p.1 - mean) * (p.1 - mean)).sum::<f64>() / q as f64;
    (mean, var.sqrt())
}

/// Classify the singularity of one measure's derivative profile at x_c.
///
/// Divergence is declared when the near-window quartile of |d1| exceeds the
/// far quartile by `divergence_ratio`. Divergent profiles are fitted as a
/// power law (ln|d1| vs ln delta) and as a logarithm (|d1| vs ln delta);
/// the model with the smaller 1 - R^2 must win by `fit_margin`, otherwise
/// the result is `Ambiguous`. A winning power law is `InverseSqrt` only if
/// its exponent lands within `exponent_tol` of -1/2. Non-divergent profiles
/// compare one-sided limits against the sampled noise floor to separate
/// `FiniteJump` from `Smooth`.
pub fn classify_singularity(
    records: &[ScanRecord],
    measure_idx: usize,
    x_c: f64,
    policy: &WindowPolicy,
) -> Result<SingularityReport> {
    let below = side_points(records, measure_idx, x_c, policy, false);
    let above = side_points(records, measure_idx, x_c, policy, true);
    let usable = below.len().max(above.len());
    if usable < 8 {
        return Err(Error::InsufficientResolution(usable));
    }
    let sides: Vec<(&[(f64, f64)], FitSide)> = [
        (below.as_slice(), FitSide::FromBelow),
        (above.as_slice(), FitSide::FromAbove),
    ]
    .into_iter()
    .filter(|(pts, _)| pts.len() >= 8)
    .collect();

    // A central difference with half-step h resolves a derivative no finer
    // than eps |f| / h, and the profile's smallest stencil is min_offset/16.
    // Roundoff noise therefore grows toward x_c exactly like a divergence
    // would; an identically-flat measure must not trip the ratio test, so
    // the near window must also clear this absolute floor.
    let value_scale = records
        .iter()
        .map(|r| r.values[measure_idx].abs())
        .fold(0.0, f64::max);
    let fd_floor = 1e-12 * value_scale / (policy.min_offset / 16.0);

    // Divergence test per usable side, on |d1|.
    let mut diverging: Option<(&[(f64, f64)], FitSide, f64)> = None;
    for &(pts, side) in &sides {
        let abs_pts: Vec<(f64, f64)> = pts.iter().map(|&(d, v)| (d, v.abs())).collect();
        let (near, _) = quartile_stats(&abs_pts, true);
        let (far, _) = quartile_stats(&abs_pts, false);
        if near > policy.divergence_ratio * far && near > fd_floor && near.is_finite() {
            match diverging {
                Some((_, _, best)) if best >= near => {}
                _ => diverging = Some((pts, side, near)),
            }
        }
    }

    if let Some((pts, side, _)) = diverging {
        let (ln_d, abs_v): (Vec<f64>, Vec<f64>) =
            pts.iter().map(|&(d, v)| (d.ln(), v.abs())).unzip();
        let ln_v: Vec<f64> = abs_v.iter().map(|v| v.max(1e-300).ln()).collect();
        let power = linear_regression(&ln_d, &ln_v);
        let semilog = linear_regression(&ln_d, &abs_v);
        let (p_miss, l_miss) = (1.0 - power.r2, 1.0 - semilog.r2);
        let notes = format!(
            "power fit: exponent {:.4}, R2 {:.6}; log fit: R2 {:.6}",
            power.slope, power.r2, semilog.r2
        );
        let report = |class, exp: Option<f64>, r2| SingularityReport {
            x_c,
            class,
            fitted_exponent: exp,
            fit_r2: Some(r2),
            side,
            notes: notes.clone(),
        };
        if p_miss < l_miss * (1.0 - policy.fit_margin) {
            // Power law wins.
            if (power.slope + 0.5).abs() <= policy.exponent_tol {
                return Ok(report(SingularityClass::InverseSqrt, Some(power.slope), power.r2));
            }
            return Ok(report(SingularityClass::Ambiguous, Some(power.slope), power.r2));
        }
        if l_miss < p_miss * (1.0 - policy.fit_margin) {
            return Ok(report(SingularityClass::LogDivergence, None, semilog.r2));
        }
        return Ok(report(SingularityClass::Ambiguous, Some(power.slope), power.r2));
    }

    // No divergence: compare one-sided limits. The nearest quartile
    // approximates the limit; its spread sets the noise floor.
    let mut limits: Vec<(FitSide, f64, f64)> = Vec::new();
    for &(pts, side) in &sides {
        let (mean, std) = quartile_stats(pts, true);
        limits.push((side, mean, std));
    }
    match limits.as_slice() {
        [(_, lo, s_lo), (_, hi, s_hi)] => {
            let scale = lo.abs().max(hi.abs()).max(1.0);
            let noise = s_lo.max(*s_hi).max(1e-12 * scale);
            let jump = (hi - lo).abs();
            let notes = format!(
                "one-sided limits {lo:.6e} / {hi:.6e}, jump {jump:.3e}, noise floor {noise:.3e}"
            );
            let class = if jump > policy.jump_noise_factor * noise {
                SingularityClass::FiniteJump
            } else {
                SingularityClass::Smooth
            };
            Ok(SingularityReport {
                x_c,
                class,
                fitted_exponent: None,
                fit_r2: None,
                side: FitSide::Both,
                notes,
            })
        }
        [(side, limit, std)] => Ok(SingularityReport {
            x_c,
            class: SingularityClass::Smooth,
            fitted_exponent: None,
            fit_r2: None,
            side: *side,
            notes: format!("single-sided limit {limit:.6e}, noise floor {std:.3e}"),
        }),
        _ => Err(Error::InsufficientResolution(usable)),
    }
}

/// One cell of a phase-diagram raster.
#[derive(Debug, Clone, Copy)]
pub struct PhaseCell {
    pub n: f64,
    pub u: f64,
    pub region: Region,
    pub n_s: f64,
    pub n_d: f64,
    pub a: f64,
}

/// Raster of the phase diagram plus iso-correlation contours.
#[derive(Debug, Clone)]
pub struct PhaseGrid {
    pub cells: Vec<PhaseCell>,
    /// (a level, polyline of (u, n) samples).
    pub contours: Vec<(f64, Vec<(f64, f64)>)>,
}

/// Rasterize the phase diagram over [n_range] x [u_range] at the given
/// resolution (rows x cols, both >= 2), with iso-correlation contours at
/// the requested a levels.
pub fn phase_grid(
    n_range: (f64, f64),
    u_range: (f64, f64),
    resolution: (usize, usize),
    a_levels: &[f64],
) -> Result<PhaseGrid> {
    let (n_lo, n_hi) = n_range;
    let (u_lo, u_hi) = u_range;
    let (rows, cols) = resolution;
    if rows < 2 || cols < 2 || !(n_hi > n_lo) || !(u_hi > u_lo) {
        return Err(Error::BadParameter(format!(
            "bad grid: n in [{n_lo}, {n_hi}], u in [{u_lo}, {u_hi}], {rows}x{cols}"
        )));
    }
    let mut cells = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let n = n_lo + (n_hi - n_lo) * i as f64 / (rows - 1) as f64;
        for j in 0..cols {
            let u = u_lo + (u_hi - u_lo) * j as f64 / (cols - 1) as f64;
            let gs = model::ground_state(PhasePoint::new(n, u))?;
            cells.push(PhaseCell {
                n,
                u,
                region: gs.region,
                n_s: gs.n_s,
                n_d: gs.n_d,
                a: gs.a,
            });
        }
    }
    let mut contours = Vec::with_capacity(a_levels.len());
    for &a in a_levels {
        let mut line = Vec::new();
        for j in 0..cols {
            let u = u_lo + (u_hi - u_lo) * j as f64 / (cols - 1) as f64;
            if u.abs() >= 4.0 {
                continue;
            }
            if let Ok(n) = model::iso_correlation_curve(a, u) {
                if n >= n_lo && n <= n_hi {
                    line.push((u, n));
                }
            }
        }
        contours.push((a, line));
    }
    Ok(PhaseGrid { cells, contours })
}
