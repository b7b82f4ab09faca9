//! Cross-validation of the closed-form layer against the brute-force
//! oracle, beyond the block-by-block spectrum checks of the acceptance
//! gate: mutual information, negativity laws, gauge twists, and the
//! approach to the thermodynamic limit.

use etamode::measures::{self, block_entropy};
use etamode::model::iso_correlation_curve;
use etamode::oracle::{self, Mode};
use etamode::spectra::{mixed_block_spectrum, mixed_block_spectrum_tdl, BlockSpec};

/// Finite-size mutual information of a +k/-k pair from closed-form block
/// entropies matches the oracle's S_A + S_B - S_AB exactly.
#[test]
fn pair_mutual_information_matches_oracle() {
    for (l_prime, n_d) in [(8usize, 4usize), (10, 3), (12, 6), (12, 2)] {
        let state = oracle::build_state(l_prime, n_d).unwrap();
        let brute = oracle::exact_mutual_information(&state, &[Mode(0)], &[Mode(1)]);
        let s_single = block_entropy(l_prime, n_d, BlockSpec::new(1, 0)).unwrap();
        let s_pair = block_entropy(l_prime, n_d, BlockSpec::new(0, 1)).unwrap();
        let closed = 2.0 * s_single - s_pair;
        assert!(
            (brute - closed).abs() < 1e-10,
            "I(+k : -k) mismatch at L' = {l_prime}, N_d = {n_d}: oracle {brute}, closed {closed}"
        );
    }
}

/// The raw pair negativity on L' slots is a(1 - a) L' / (L' - 1): exactly
/// linear in 1/(L' - 1), reproduced by the partial transpose of the oracle.
#[test]
fn pair_negativity_law_matches_oracle() {
    for l_prime in [8usize, 10, 12, 14] {
        for n_d in [l_prime / 4, l_prime / 2] {
            let a = n_d as f64 / l_prime as f64;
            let state = oracle::build_state(l_prime, n_d).unwrap();
            let rdm = oracle::exact_rdm(&state, &[Mode(0), Mode(1)]);
            let brute = oracle::exact_negativity(&rdm, &[0]);
            let law = a * (1.0 - a) * l_prime as f64 / (l_prime as f64 - 1.0);
            assert!(
                (brute - law).abs() < 1e-12,
                "pair negativity at L' = {l_prime}, N_d = {n_d}: oracle {brute}, law {law}"
            );
        }
    }
}

/// Two-pair (four-mode) negativity at half filling: frozen finite-size
/// values anchor the eigensolver, and the sequence decays toward zero.
#[test]
fn two_pair_negativity_matches_frozen_values() {
    let frozen = [
        (8usize, 4usize, 13.0 / 70.0),
        (10, 5, 0.134_920_634_920_635),
        (12, 6, 0.106_060_606_060_606),
    ];
    let mut prev = f64::INFINITY;
    for (l_prime, n_d, expected) in frozen {
        let state = oracle::build_state(l_prime, n_d).unwrap();
        let rdm = oracle::exact_rdm(&state, &[Mode(0), Mode(1), Mode(2), Mode(3)]);
        let neg = oracle::exact_negativity(&rdm, &[0, 1]);
        assert!(
            (neg - expected).abs() < 1e-12,
            "two-pair negativity at L' = {l_prime}: {neg} vs frozen {expected}"
        );
        assert!(neg < prev, "two-pair negativity must decay with L'");
        prev = neg;
    }
    assert!(
        measures::two_pair_negativity_tdl() == 0.0,
        "the decaying sequence extrapolates to zero in the thermodynamic limit"
    );
}

/// Finite-lattice spectra converge to the thermodynamic-limit spectra at
/// the 1/L' rate: at L' = 2000 a four-mode block agrees to a few 1e-3.
#[test]
fn finite_spectra_approach_tdl()
{
    let a = 0.3;
    for spec in [BlockSpec::new(0, 2), BlockSpec::new(2, 1), BlockSpec::new(1, 0)] {
        let l_prime = 2000usize;
        let n_d = (a * l_prime as f64).round() as usize;
        let mut finite = mixed_block_spectrum(l_prime, n_d, spec).unwrap().expanded_desc();
        let mut tdl = mixed_block_spectrum_tdl(a, spec).expanded_desc();
        let len = finite.len().max(tdl.len());
        finite.resize(len, 0.0);
        tdl.resize(len, 0.0);
        let max_dev = finite
            .iter()
            .zip(&tdl)
            .map(|(f, t)| (f - t).abs())
            .fold(0.0, f64::max);
        assert!(
            max_dev < 5e-3,
            "finite spectrum at L' = {l_prime} should sit within O(1/L') of the limit, dev {max_dev} for {spec:?}"
        );
    }
}

/// Momentum-dependent gauge twists change the state's amplitudes but no
/// reduced spectrum, purity, entropy, negativity, or Q value.
#[test]
fn gauge_twist_leaves_observables_invariant() {
    let (l_prime, n_d) = (8usize, 3usize);
    let signs = [1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0];
    let plain = oracle::build_state(l_prime, n_d).unwrap();
    let twisted = oracle::build_state_with_gauge(l_prime, n_d, &signs).unwrap();
    for modes in [vec![Mode(0)], vec![Mode(0), Mode(1)], vec![Mode(0), Mode(1), Mode(4)]] {
        let rdm_a = oracle::exact_rdm(&plain, &modes);
        let rdm_b = oracle::exact_rdm(&twisted, &modes);
        let (sa, sb) = (oracle::exact_spectrum(&rdm_a), oracle::exact_spectrum(&rdm_b));
        let dev = sa
            .iter()
            .zip(&sb)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "gauge twist moved a spectrum by {dev}");
        assert!(
            (oracle::exact_entropy(&rdm_a) - oracle::exact_entropy(&rdm_b)).abs() < 1e-10,
            "gauge twist moved an entropy"
        );
        if modes.len() == 2 {
            let (na, nb) = (
                oracle::exact_negativity(&rdm_a, &[0]),
                oracle::exact_negativity(&rdm_b, &[0]),
            );
            assert!((na - nb).abs() < 1e-12, "gauge twist moved a negativity");
        }
    }
    for d in 1..=3 {
        let (qa, qb) = (
            oracle::exact_q(&plain, d).unwrap(),
            oracle::exact_q(&twisted, d).unwrap(),
        );
        assert!((qa - qb).abs() < 1e-12, "gauge twist moved Q at D = {d}");
    }
}

/// Oracle single-mode entropies approach the closed-form limit 2 h2(a)
/// monotonically from below as L' grows at fixed a.
#[test]
fn single_mode_entropy_converges_to_limit() {
    let a = 0.25;
    let limit = measures::single_mode_entropy(a);
    let mut prev_gap = f64::INFINITY;
    for l_prime in [8usize, 12, 16, 20] {
        let n_d = (a * l_prime as f64).round() as usize;
        let state = oracle::build_state(l_prime, n_d).unwrap();
        let s = oracle::exact_entropy(&oracle::exact_rdm(&state, &[Mode(0)]));
        let gap = limit - s;
        assert!(gap > 0.0, "finite lattice entropy must sit below the limit");
        assert!(gap < prev_gap, "gap to the limit must shrink with L'");
        prev_gap = gap;
    }
    assert!(prev_gap < 0.05, "L' = 20 should be within 0.05 bits of the limit");
}

/// The iso-correlation curve construction really holds a fixed along u:
/// re-solving the ground state at (n(a, u), u) returns the same a.
#[test]
fn iso_correlation_curve_preserves_a() {
    for a in [0.1, 0.25, 0.4, 0.5] {
        let mut u = -3.5;
        while u < 3.9 {
            if let Ok(n) = iso_correlation_curve(a, u) {
                let gs = etamode::model::ground_state(etamode::model::PhasePoint::new(n, u)).unwrap();
                assert!(
                    (gs.a - a).abs() < 1e-12,
                    "curve at (a, u) = ({a}, {u}) reproduced a = {}",
                    gs.a
                );
            }
            u += 0.37;
        }
    }
}
