//! Cross-validation of every closed form in this crate against the exact
//! finite-size oracle, plus the finite-size arbitration of the two spots
//! where published formulas disagree with enumeration (the paired-block
//! entropy branch and the mixed-shape partition count).
//!
//! `run_all` executes the whole suite and returns one row per check. Rows
//! gate (`Pass`/`Fail`) or inform (`Finding`); findings document resolved
//! discrepancies and conventions rather than health. The CLI turns any
//! `Fail` into a nonzero exit.

use crate::error::Result;
use crate::measures::{self, EntropyForm};
use crate::model::{self, PhasePoint, Side};
use crate::numerics::binomial_exact;
use crate::oracle::{self, Mode};
use crate::qmeasure::{self, QMode, QParams};
use crate::scan::linear_regression;
use crate::spectra::{mixed_block_spectrum, BlockSpec};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Informational: documents a convention or a resolved discrepancy.
    Finding,
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Finding => "FINDING",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: &'static str,
    pub detail: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
}

fn gate(name: &'static str, detail: String, deviation: f64, tolerance: f64) -> CheckRow {
    // NaN deviations must fail, so test the passing direction.
    let status = if deviation <= tolerance {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CheckRow {
        name,
        detail,
        deviation,
        tolerance,
        status,
    }
}

fn finding(name: &'static str, detail: String, deviation: f64) -> CheckRow {
    CheckRow {
        name,
        detail,
        deviation,
        tolerance: f64::INFINITY,
        status: CheckStatus::Finding,
    }
}

/// Split a mode list into (lone count, paired count): a mode is paired when
/// its momentum partner is also in the block.
fn shape_of(modes: &[Mode]) -> (usize, usize) {
    let d2 = modes
        .iter()
        .filter(|m| modes.contains(&m.partner()))
        .count();
    (modes.len() - d2, d2)
}

/// Run the full verification suite. `tol_scale` multiplies every gate
/// tolerance (use 1.0 unless hunting for marginal failures).
pub fn run_all(tol_scale: f64) -> Result<Vec<CheckRow>> {
    assert!(tol_scale > 0.0, "tolerance scale must be positive");
    let mut rows = Vec::new();

    // --- 1. Closed-form purity vs oracle, every subset up to 4 modes. ---
    {
        let mut max_dev = 0.0f64;
        let mut subsets = 0usize;
        for &n_d in &[2usize, 4] {
            let state = oracle::build_state(8, n_d)?;
            for d in 1..=4usize {
                oracle::for_each_combination(8, d, |idx| {
                    let modes: Vec<Mode> = idx.iter().map(|&i| Mode(i)).collect();
                    let (d1, d2) = shape_of(&modes);
                    let exact = oracle::exact_rdm(&state, &modes).purity();
                    let closed = qmeasure::purity_mixed(8.0, n_d as f64, d1, d2);
                    max_dev = max_dev.max((exact - closed).abs());
                    subsets += 1;
                });
            }
        }
        rows.push(gate(
            "block_purity_all_subsets",
            format!("{subsets} subsets of L' = 8 at N_d = 2, 4; shapes classified by partner membership"),
            max_dev,
            1e-12 * tol_scale,
        ));
    }

    // --- 2. Closed-form spectra vs brute-force eigenvalues, one block per shape. ---
    {
        let state = oracle::build_state(8, 3)?;
        let blocks: [(&[usize], BlockSpec); 6] = [
            (&[0], BlockSpec::new(1, 0)),
            (&[0, 2], BlockSpec::new(2, 0)),
            (&[0, 1], BlockSpec::new(0, 1)),
            (&[0, 1, 2, 3], BlockSpec::new(0, 2)),
            (&[0, 1, 2], BlockSpec::new(1, 1)),
            (&[0, 1, 2, 4], BlockSpec::new(2, 1)),
        ];
        let mut max_dev = 0.0f64;
        for (idx, spec) in blocks {
            let modes: Vec<Mode> = idx.iter().map(|&i| Mode(i)).collect();
            let brute = oracle::exact_spectrum(&oracle::exact_rdm(&state, &modes));
            let mut closed = mixed_block_spectrum(8, 3, spec)?.expanded_desc();
            closed.resize(brute.len(), 0.0);
            for (b, c) in brute.iter().zip(&closed) {
                max_dev = max_dev.max((b - c).abs());
            }
        }
        rows.push(gate(
            "block_spectra_shapes",
            "eigenvalues incl. degeneracies for open/paired/mixed blocks at (L', N_d) = (8, 3)".into(),
            max_dev,
            1e-12 * tol_scale,
        ));
    }

    // --- 3. Entropies from the closed spectra vs brute force. ---
    {
        let state = oracle::build_state(8, 3)?;
        let blocks: [(&[usize], BlockSpec); 4] = [
            (&[0], BlockSpec::new(1, 0)),
            (&[0, 1], BlockSpec::new(0, 1)),
            (&[0, 2], BlockSpec::new(2, 0)),
            (&[0, 1, 2], BlockSpec::new(1, 1)),
        ];
        let mut max_dev = 0.0f64;
        for (idx, spec) in blocks {
            let modes: Vec<Mode> = idx.iter().map(|&i| Mode(i)).collect();
            let brute = oracle::exact_entropy(&oracle::exact_rdm(&state, &modes));
            let closed = measures::block_entropy(8, 3, spec)?;
            max_dev = max_dev.max((brute - closed).abs());
        }
        rows.push(gate(
            "block_entropies",
            "von Neumann entropies of four block shapes at (L', N_d) = (8, 3)".into(),
            max_dev,
            1e-10 * tol_scale,
        ));
    }

    // --- 4. Finite-size arbitration of the paired-block entropy branch. ---
    {
        let sizes = [12usize, 14, 16, 18, 20];
        let (xs, ys): (Vec<f64>, Vec<f64>) = sizes
            .iter()
            .map(|&l| {
                let s = measures::block_entropy(l, l / 2, BlockSpec::new(0, 1)).unwrap();
                (1.0 / l as f64, s)
            })
            .unzip();
        let fit = linear_regression(&xs, &ys);
        let spectrum = measures::paired_modes_entropy(0.5, EntropyForm::Spectrum);
        let printed = measures::paired_modes_entropy(0.5, EntropyForm::Printed);
        let d_spectrum = (fit.intercept - spectrum).abs();
        let d_printed = (fit.intercept - printed).abs();
        let row = gate(
            "pair_entropy_branch",
            format!(
                "1/L' extrapolation of S_pair at a = 1/2 over L' = 12..20: intercept {:.4} bits; \
                 distance {:.4} to the spectrum branch ({spectrum}) vs {:.4} to the printed \
                 closed form ({printed})",
                fit.intercept, d_spectrum, d_printed
            ),
            d_spectrum,
            0.02 * tol_scale,
        );
        let decisive = d_printed > 10.0 * d_spectrum;
        rows.push(CheckRow {
            status: if decisive { row.status } else { CheckStatus::Fail },
            ..row
        });
    }

    // --- 5. Pair-negativity convention. ---
    {
        let sizes = [8usize, 12, 16, 20];
        let (xs, ys): (Vec<f64>, Vec<f64>) = sizes
            .iter()
            .map(|&l| {
                let state = oracle::build_state(l, l / 2).unwrap();
                let rdm = oracle::exact_rdm(&state, &[Mode(0), Mode(1)]);
                (1.0 / (l as f64 - 1.0), oracle::exact_negativity(&rdm, &[0]))
            })
            .unzip();
        let fit = linear_regression(&xs, &ys);
        let raw_limit = 3.0 * measures::pair_negativity(0.5);
        rows.push(gate(
            "pair_negativity_extrapolation",
            format!(
                "oracle partial-transpose negativity of a (k, -k) pair at a = 1/2 is exactly \
                 linear in 1/(L'-1); intercept {:.12} vs a(1-a) = {raw_limit}",
                fit.intercept
            ),
            (fit.intercept - raw_limit).abs(),
            2e-3 * tol_scale,
        ));
        rows.push(finding(
            "pair_negativity_normalization",
            "the raw partial-transpose negativity extrapolates to a(1-a); the per-pair measure \
             divides by d - 1 = 3, so tabulated values are one third of the raw sum"
                .into(),
            (fit.intercept - raw_limit).abs(),
        ));
    }

    // --- 6. Two-pair negativity at finite size. ---
    {
        let cases = [(8usize, 4usize), (10, 5), (12, 6)];
        let mut vals = Vec::new();
        for (l, n_d) in cases {
            let state = oracle::build_state(l, n_d)?;
            let rdm = oracle::exact_rdm(&state, &[Mode(0), Mode(1), Mode(2), Mode(3)]);
            vals.push(oracle::exact_negativity(&rdm, &[0, 1]));
        }
        let worst_rise = vals
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        rows.push(gate(
            "two_pair_negativity_decay",
            format!(
                "pair-pair negativity at a = 1/2 shrinks with size: {:.6}, {:.6}, {:.6} \
                 for L' = 8, 10, 12",
                vals[0], vals[1], vals[2]
            ),
            worst_rise.max(0.0),
            1e-12 * tol_scale,
        ));
        rows.push(finding(
            "two_pair_negativity_finite_size",
            "two complete pairs carry nonzero negativity at finite size (13/70 at L' = 8); \
             only the thermodynamic limit vanishes"
                .into(),
            vals[2],
        ));
    }

    // --- 7. Q measure vs brute-force purity average. ---
    {
        let cases = [(8usize, 2usize, 2usize), (8, 4, 3), (8, 4, 4), (10, 5, 4)];
        let mut max_rel = 0.0f64;
        for (l, n_d, d) in cases {
            let state = oracle::build_state(l, n_d)?;
            let brute = oracle::exact_q(&state, d)?;
            let closed = qmeasure::q_measure(&QParams {
                l: l as f64,
                n_s: 0.0,
                n_d: n_d as f64,
                d,
                mode: QMode::ExactSpectrum,
            })?;
            max_rel = max_rel.max((brute - closed).abs() / brute.abs().max(1e-300));
        }
        rows.push(gate(
            "q_vs_oracle",
            "shape-resolved Q against the average purity over every D-mode block".into(),
            max_rel,
            1e-10 * tol_scale,
        ));
    }

    // --- 8. Product-form purity as a large-L approximation. ---
    {
        let mut max_gap = 0.0f64;
        let mut gaps = Vec::new();
        for d in [2usize, 4, 8] {
            let base = QParams {
                l: 1000.0,
                n_s: 333.2,
                n_d: 83.4,
                d,
                mode: QMode::ExactSpectrum,
            };
            let exact = qmeasure::q_measure(&base)?;
            let prod = qmeasure::q_measure(&QParams {
                mode: QMode::ProductForm,
                ..base
            })?;
            let gap = (exact - prod).abs();
            gaps.push(format!("D = {d}: {gap:.2e}"));
            max_gap = max_gap.max(gap);
        }
        rows.push(gate(
            "q_product_form_gap",
            format!(
                "|Q_product - Q_exact| at L = 1000, N_s = 333.2, N_d = 83.4 ({})",
                gaps.join(", ")
            ),
            max_gap,
            1e-3 * tol_scale,
        ));
    }

    // --- 9. Partition-count sum rules. ---
    {
        let cases = [(8usize, 4usize), (10, 4), (12, 6)];
        let mut max_exact_dev = 0.0f64;
        let mut printed_notes = Vec::new();
        for (l, d) in cases {
            let total = binomial_exact(l as u64, d as u64) as f64;
            let mut exact_sum = 0.0;
            let mut printed_sum = 0.0;
            let mut d2 = 0;
            while d2 <= d {
                exact_sum += qmeasure::partition_count_exact(l as f64, d, d2);
                printed_sum += qmeasure::partition_count(l as f64, d, d2);
                d2 += 2;
            }
            max_exact_dev = max_exact_dev.max((exact_sum - total).abs() / total);
            printed_notes.push(format!("(L' = {l}, D = {d}): {printed_sum:.1} vs {total:.0}"));
        }
        rows.push(gate(
            "partition_sum_rule",
            "shape counts must resum to C(L', D)".into(),
            max_exact_dev,
            1e-9 * tol_scale,
        ));
        rows.push(finding(
            "printed_partition_count",
            format!(
                "the product-form shape count misses a (D2-1)!! pairing factor for D2 >= 4 \
                 and breaks the sum rule: {}; Q uses the exact count in both modes",
                printed_notes.join("; ")
            ),
            0.0,
        ));
    }

    // --- 10. Gauge invariance of reduced blocks. ---
    {
        // A per-slot sign twist is a slot-local unitary; slots straddling
        // the block boundary make the reduced matrix itself gauge-covariant
        // (it picks up a block-local diagonal twist), but its spectrum,
        // purity and negativity cannot move.
        let canonical = oracle::build_state(8, 3)?;
        let signs = [-1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0];
        let twisted = oracle::build_state_with_gauge(8, 3, &signs)?;
        let modes = [Mode(0), Mode(1), Mode(2)];
        let a = oracle::exact_rdm(&canonical, &modes);
        let b = oracle::exact_rdm(&twisted, &modes);
        let mut max_dev = (a.purity() - b.purity()).abs();
        for (x, y) in oracle::exact_spectrum(&a)
            .iter()
            .zip(oracle::exact_spectrum(&b).iter())
        {
            max_dev = max_dev.max((x - y).abs());
        }
        max_dev = max_dev.max(
            (oracle::exact_negativity(&a, &[0]) - oracle::exact_negativity(&b, &[0])).abs(),
        );
        rows.push(gate(
            "gauge_invariance",
            "block spectra, purities and negativities ignore per-slot sign twists".into(),
            max_dev,
            1e-12 * tol_scale,
        ));
    }

    // --- 11. ODLRO identity. ---
    {
        let mut max_dev = 0.0f64;
        for i in 0..10 {
            let n_s = i as f64 * 0.1;
            for j in 0..=5 {
                let a = j as f64 * 0.1;
                let n_d = a * (1.0 - n_s);
                let direct = measures::odlro(n_s, n_d);
                let via_negativity = 3.0 * measures::pair_negativity(a) * (1.0 - n_s).powi(2);
                max_dev = max_dev.max((direct - via_negativity).abs());
            }
        }
        rows.push(gate(
            "odlro_negativity_identity",
            "n_d (1 - n_s - n_d) = 3 N_pair (1 - n_s)^2 across the (n_s, a) grid".into(),
            max_dev,
            1e-14 * tol_scale,
        ));
    }

    // --- 12. Energy curvatures against finite differences. ---
    {
        let five_point = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
            (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                / (12.0 * h * h)
        };
        let p = PhasePoint::new(0.5, -2.0);
        let closed_u = model::energy_second_derivatives(p, Side::FromBelow)?.d2e_du2;
        let fd_u = five_point(
            &|u| model::ground_state_energy(PhasePoint::new(0.5, u)).unwrap(),
            -2.0,
            1e-3,
        );
        rows.push(gate(
            "d2e_du2_vs_fd",
            format!("mixed phase at (n, u) = (0.5, -2): closed {closed_u:.9} vs finite difference {fd_u:.9}"),
            (closed_u - fd_u).abs() / closed_u.abs(),
            1e-6 * tol_scale,
        ));
        let q = PhasePoint::new(0.6, 3.0);
        let closed_n = model::energy_second_derivatives(q, Side::FromBelow)?.d2e_dn2;
        let fd_n = five_point(
            &|n| model::ground_state_energy(PhasePoint::new(n, 3.0)).unwrap(),
            0.6,
            1e-3,
        );
        rows.push(gate(
            "d2e_dn2_vs_fd",
            format!(
                "unpaired phase at (n, u) = (0.6, 3): closed {closed_n:.9} vs finite difference \
                 {fd_n:.9}; fixes the curvature at 2 pi sin(pi n) = {:.9}",
                2.0 * PI * (PI * 0.6).sin()
            ),
            (closed_n - fd_n).abs() / closed_n.abs(),
            1e-6 * tol_scale,
        ));
    }

    // --- 13. The tabulated ground state minimizes the energy functional. ---
    {
        let points = [
            (0.5, -2.0),
            (0.5, 1.0),
            (0.3, -5.0),
            (1.0, 5.0),
            (0.7, -4.0),
        ];
        let mut worst = f64::NEG_INFINITY;
        for (n, u) in points {
            let e_gs = model::ground_state_energy(PhasePoint::new(n, u))?;
            for i in 0..=100 {
                let n_s = n * i as f64 / 100.0;
                let n_d = (n - n_s) / 2.0;
                worst = worst.max(e_gs - model::energy_density(n_s, n_d, u));
            }
        }
        rows.push(gate(
            "ground_state_minimality",
            "closed-form ground state beats every (n_s, n_d) split on a 101-point grid at five phase points".into(),
            worst.max(0.0),
            1e-12 * tol_scale,
        ));
    }

    Ok(rows)
}
