//! The multipartite correlation measure Q for blocks of D momentum modes:
//!
//!   Q_D = 4^D/(4^D - 1) * [ 1 - <Tr rho_block^2> ],
//!
//! the bracket averaging the block purity over every D-mode subset of the
//! L' vacant momenta. A subset splits into D1 lone modes and D2/2 complete
//! pairs; the average therefore needs (i) the purity of each block shape and
//! (ii) how many subsets realize each shape.
//!
//! Two purity evaluations are provided. `ProductForm` multiplies the pure
//! open-block and paired-block purities, treating the two sectors as
//! uncorrelated; `ExactSpectrum` uses the exact mixed-block spectrum, which
//! keeps the hypergeometric cross-correlation between the sectors. The two
//! agree in the thermodynamic limit and differ at order 1/L'.
//!
//! For the shape count, the product expression
//!
//!   f(D2) = [prod_{i<D1} (L'-2i)/D1!] * [prod_{j<D2/2} (L'-2D1-2j)/D2!]
//!
//! is provided as `partition_count`, but it undercounts whenever D2 >= 4:
//! dividing by D2! erases the (D2-1)!! ways of matching the D2 paired modes
//! into partner pairs, and the counts then fail the sum rule
//! sum_D2 f = C(L', D). The combinatorial count
//!
//!   f_exact(D2) = C(L'/2, D2/2) C(L'/2 - D2/2, D1) 2^D1
//!
//! (choose whole slots for the pairs, slots for the lone modes, then one
//! endpoint of each lone slot) satisfies the sum rule exactly and matches
//! brute-force enumeration; `q_measure` uses it for both purity modes.
//!
//! All arguments are real-valued: a length-L scan evaluates Q at the
//! thermodynamic densities N_s(u) = L n_s(u), N_d(u) = L n_d(u), which are
//! not integers. The gamma-extended binomials of `numerics` make every
//! quantity here a smooth function of (L', N_d) that coincides with the
//! integer combinatorics on the lattice.

use crate::error::{Error, Result};
use crate::numerics::{log_binomial_real, KahanSum, SignedLog};

/// Purity evaluation strategy for mixed block shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMode {
    /// Purity of a mixed shape approximated by the product of the pure
    /// open-block and paired-block purities.
    ProductForm,
    /// Purity taken from the exact mixed-block spectrum.
    ExactSpectrum,
}

/// Inputs for one Q evaluation. `l`, `n_s`, `n_d` are real-valued counts
/// (sites, unpaired fermions, pairs); `d` is the block size in modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    pub l: f64,
    pub n_s: f64,
    pub n_d: f64,
    pub d: usize,
    pub mode: QMode,
}

impl QParams {
    /// Number of vacant slots the pairs live on.
    pub fn l_prime(&self) -> f64 {
        self.l - self.n_s
    }
}

/// Squared weight [prod_i c_i / den]^2 assembled from signed-log factors.
/// Squaring makes the signs irrelevant, but an exact zero anywhere (a pole
/// of 1/Gamma, i.e. an out-of-support term) must kill the whole product.
fn squared_weight(log_num: &[SignedLog], log_den: SignedLog) -> f64 {
    let mut log_abs = -2.0 * log_den.log_abs;
    for t in log_num {
        if t.sign == 0.0 {
            return 0.0;
        }
        log_abs += 2.0 * t.log_abs;
    }
    log_abs.exp()
}

/// Purity of a block of D1 lone modes (2*D1 half-open slots):
/// Tr rho^2 = sum_M C(2 D1, M) [C(L'-2 D1, N_d - M) / C(L', N_d)]^2.
pub fn purity_open(l_prime: f64, n_d: f64, d1: usize) -> f64 {
    purity_mixed(l_prime, n_d, d1, 0)
}

/// Purity of a block of D2/2 complete pairs (D2 whole slots):
/// Tr rho^2 = sum_alpha [C(D2, alpha) C(L'-D2, N_d - alpha) / C(L', N_d)]^2.
pub fn purity_paired(l_prime: f64, n_d: f64, d2: usize) -> f64 {
    assert!(d2 % 2 == 0, "paired sector needs an even mode count, got {d2}");
    purity_mixed(l_prime, n_d, 0, d2)
}

/// Purity of the general shape (D1 lone modes, D2/2 complete pairs) from the
/// exact mixed spectrum:
/// sum_{M, alpha} C(2 D1, M) [C(D2, alpha) C(L'-2D1-D2, N_d-M-alpha) / C(L', N_d)]^2.
pub fn purity_mixed(l_prime: f64, n_d: f64, d1: usize, d2: usize) -> f64 {
    assert!(
        l_prime >= (2 * d1 + d2) as f64,
        "block touches {} slots, only L' = {l_prime} available",
        2 * d1 + d2
    );
    assert!(n_d >= 0.0 && n_d <= l_prime, "N_d = {n_d} outside [0, L' = {l_prime}]");
    let rest = l_prime - (2 * d1 + d2) as f64;
    let den = log_binomial_real(l_prime, n_d);
    debug_assert!(den.sign > 0.0);
    let mut total = KahanSum::new();
    for m_occ in 0..=2 * d1 {
        let mult = log_binomial_real((2 * d1) as f64, m_occ as f64).value();
        let mut sector = KahanSum::new();
        for alpha in 0..=d2 {
            let t = squared_weight(
                &[
                    log_binomial_real(d2 as f64, alpha as f64),
                    log_binomial_real(rest, n_d - (m_occ + alpha) as f64),
                ],
                den,
            );
            sector.add(t);
        }
        total.add(mult * sector.value());
    }
    total.value()
}

/// The product-form shape count f(D2); kept verbatim for comparison. It
/// matches enumeration for D2 <= 2 but undercounts by (D2-1)!! beyond.
pub fn partition_count(l_prime: f64, d: usize, d2: usize) -> f64 {
    assert!(d2 <= d && d2 % 2 == 0, "need even D2 <= D, got D2 = {d2}, D = {d}");
    let d1 = d - d2;
    let mut log = 0.0;
    for i in 0..d1 {
        let f = l_prime - 2.0 * i as f64;
        assert!(f > 0.0, "count requires L' > 2 (D1 - 1)");
        log += f.ln();
    }
    log -= crate::numerics::ln_factorial(d1 as u64);
    for j in 0..d2 / 2 {
        let f = l_prime - 2.0 * d1 as f64 - 2.0 * j as f64;
        assert!(f > 0.0, "count requires L' > 2 (D1 + D2/2 - 1)");
        log += f.ln();
    }
    log -= crate::numerics::ln_factorial(d2 as u64);
    log.exp()
}

/// Number of D-mode subsets of L' momenta containing exactly D2 paired
/// modes: choose the D2/2 whole slots, the D1 lone slots, then an endpoint
/// for each lone slot. Satisfies sum_{D2} f_exact = C(L', D) exactly.
pub fn partition_count_exact(l_prime: f64, d: usize, d2: usize) -> f64 {
    assert!(d2 <= d && d2 % 2 == 0, "need even D2 <= D, got D2 = {d2}, D = {d}");
    let d1 = d - d2;
    let half = l_prime / 2.0;
    let pairs = log_binomial_real(half, (d2 / 2) as f64);
    let lone = log_binomial_real(half - (d2 / 2) as f64, d1 as f64);
    if pairs.sign == 0.0 || lone.sign == 0.0 {
        return 0.0;
    }
    let log = pairs.log_abs + lone.log_abs + d1 as f64 * 2f64.ln();
    pairs.sign * lone.sign * log.exp()
}

/// The Q measure itself. Shape weights use the combinatorially exact count;
/// `mode` only selects how each shape's purity is evaluated.
pub fn q_measure(params: &QParams) -> Result<f64> {
    let lp = params.l_prime();
    let d = params.d;
    if d < 1 {
        return Err(Error::BadParameter("Q needs a block of at least one mode".into()));
    }
    if !(lp.is_finite() && lp >= d as f64) {
        return Err(Error::BadParameter(format!(
            "L' = L - N_s = {lp} cannot host a {d}-mode block"
        )));
    }
    if !(params.n_d >= 0.0 && params.n_d <= lp) {
        return Err(Error::BadParameter(format!(
            "pair count N_d = {} outside [0, L' = {lp}]",
            params.n_d
        )));
    }
    // Weighted mean of the linear entropy 1 - purity over block shapes,
    // normalized by the weight sum so that exact purities of 1 (N_d = 0 or
    // N_d = L') give Q = 0 to machine precision.
    let mut weight_sum = KahanSum::new();
    let mut lin_entropy = KahanSum::new();
    let mut d2 = 0usize;
    while d2 <= d {
        let d1 = d - d2;
        if lp >= (2 * d1 + d2) as f64 {
            let w = partition_count_exact(lp, d, d2);
            if w > 0.0 {
                let purity = match params.mode {
                    QMode::ProductForm => {
                        purity_open(lp, params.n_d, d1) * purity_paired(lp, params.n_d, d2)
                    }
                    QMode::ExactSpectrum => purity_mixed(lp, params.n_d, d1, d2),
                };
                weight_sum.add(w);
                lin_entropy.add(w * (1.0 - purity));
            }
        }
        d2 += 2;
    }
    let ws = weight_sum.value();
    if !(ws > 0.0) {
        return Err(Error::BadParameter(format!(
            "no admissible block shape for D = {d} at L' = {lp}"
        )));
    }
    let norm = 1.0 / (1.0 - 0.25f64.powi(d as i32));
    Ok((norm * lin_entropy.value() / ws).clamp(0.0, 1.0))
}
