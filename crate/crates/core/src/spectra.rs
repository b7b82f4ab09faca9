//! Closed-form reduced-density-matrix spectra for arbitrary blocks of
//! momentum modes in the uniformly paired ground state.
//!
//! The state distributes N_d pairs with equal amplitude over the L' vacant
//! slots, each slot j binding the orbital pair (k_j, down) and (-k_j, up).
//! A block of D selected momenta therefore splits the slots three ways:
//!
//! * D2 slots lie entirely inside the block (both partners selected); they
//!   behave as one collective Dicke ladder, so each pair sector contributes
//!   a single nondegenerate eigenvalue;
//! * 2*D1 slots are cut in half (one partner selected); tracing the outer
//!   half fully decoheres them, leaving an occupancy mixture with binomial
//!   degeneracy C(2*D1, M);
//! * the rest is environment.
//!
//! The resulting spectrum is hypergeometric,
//!
//!   lambda_{M, alpha} = C(D2, alpha) C(L' - 2 D1 - D2, N_d - M - alpha)
//!                       / C(L', N_d),   multiplicity C(2 D1, M),
//!
//! with M counting pairs trapped on the cut slots and alpha the Dicke sector
//! of the interior ladder. Every special case below is this one formula with
//! D1 = 0 or D2 = 0, and the thermodynamic-limit variants replace the
//! hypergeometric factors by binomials in the pair fraction a.

use crate::error::{Error, Result};
use crate::numerics::{
    binomial_exact, log_binomial, KahanSum, LogWeight,
    EXACT_BINOMIAL_MAX_M,
};

/// Eigenvalues below this are flushed to exact zero when a spectrum is
/// assembled; they are beyond double-precision resolution and only add noise
/// to entropies.
pub const EIGENVALUE_FLOOR: f64 = 1e-300;

/// Shape of a momentum-mode block: `lone_modes` momenta whose partner is
/// outside the block (D1), and `paired_pairs` complete (k, -k) pairs (D2/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    pub lone_modes: usize,
    pub paired_pairs: usize,
}

impl BlockSpec {
    pub fn new(lone_modes: usize, paired_pairs: usize) -> Self {
        BlockSpec {
            lone_modes,
            paired_pairs,
        }
    }

    /// D1: number of lone modes. Each lone mode leaves two slots half-open
    /// (its own and its partner's), hence the 2*D1 in the spectrum formula.
    pub fn d1(&self) -> usize {
        self.lone_modes
    }

    /// D2: number of slots fully inside the block.
    pub fn d2(&self) -> usize {
        2 * self.paired_pairs
    }

    /// Number of momentum modes in the block.
    pub fn modes(&self) -> usize {
        self.lone_modes + 2 * self.paired_pairs
    }

    /// Number of slots the block touches: 2*D1 half-slots + D2 whole slots.
    pub fn touched_slots(&self) -> usize {
        2 * self.lone_modes + 2 * self.paired_pairs
    }
}

/// A reduced-density-matrix spectrum as (eigenvalue, multiplicity) pairs.
/// Multiplicities are kept symbolic because C(2*D1, M) outgrows any sensible
/// expanded list long before the formulas break down.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub entries: Vec<(f64, u64)>,
}

impl Spectrum {
    /// Assemble a spectrum: drop sub-resolution eigenvalues and renormalize
    /// the trace. The raw weights already sum to 1 mathematically; the
    /// renormalization only strips the ~1e-9 relative drift the log-gamma
    /// backend leaves at million-slot sizes.
    fn assemble(mut entries: Vec<(f64, u64)>) -> Spectrum {
        entries.retain(|&(v, m)| v > EIGENVALUE_FLOOR && m > 0);
        let mut tr = KahanSum::new();
        for &(v, m) in &entries {
            tr.add(v * m as f64);
        }
        let tr = tr.value();
        debug_assert!(
            (tr - 1.0).abs() < 1e-6,
            "spectrum trace {tr} too far from 1: formula bug, not roundoff"
        );
        if tr > 0.0 {
            for e in &mut entries {
                e.0 /= tr;
            }
        }
        Spectrum { entries }
    }

    /// Total weight; 1 up to roundoff by construction.
    pub fn trace(&self) -> f64 {
        let mut s = KahanSum::new();
        for &(v, m) in &self.entries {
            s.add(v * m as f64);
        }
        s.value()
    }

    /// Tr rho^2.
    pub fn purity(&self) -> f64 {
        let mut s = KahanSum::new();
        for &(v, m) in &self.entries {
            s.add(v * v * m as f64);
        }
        s.value()
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn rank(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Eigenvalues expanded with multiplicity, descending. Only meant for
    /// comparisons against brute-force diagonalization, hence the cap.
    pub fn expanded_desc(&self) -> Vec<f64> {
        assert!(
            self.rank() <= 1_000_000,
            "expanding a spectrum with {} eigenvalues is a mistake",
            self.rank()
        );
        let mut out = Vec::with_capacity(self.rank() as usize);
        for &(v, m) in &self.entries {
            for _ in 0..m {
                out.push(v);
            }
        }
        out.sort_by(|x, y| y.partial_cmp(x).unwrap());
        out
    }
}

fn check_block(l_prime: usize, spec: BlockSpec) -> Result<()> {
    if spec.touched_slots() > l_prime {
        return Err(Error::BlockTooLarge {
            touched: spec.touched_slots(),
            l_prime,
        });
    }
    Ok(())
}

fn check_pairs(l_prime: usize, n_d: usize) -> Result<()> {
    if n_d > l_prime {
        return Err(Error::TooManyPairs { n_d, l_prime });
    }
    Ok(())
}

/// One momentum mode in the thermodynamic limit: occupation basis
/// {empty, down, up, doubly occupied} with weights
/// {(1-a)^2, a(1-a), a(1-a), a^2}.
pub fn single_mode_spectrum_tdl(a: f64) -> Spectrum {
    assert!((0.0..=1.0).contains(&a), "pair fraction a = {a} outside [0, 1]");
    Spectrum::assemble(vec![
        ((1.0 - a) * (1.0 - a), 1),
        (a * (1.0 - a), 2),
        (a * a, 1),
    ])
}

/// Finite-size spectrum of a block of P/2 complete (k, -k) pairs, i.e. P
/// whole slots (P even). The interior slots form a Dicke ladder, so each
/// occupancy sector alpha carries exactly one eigenvalue
/// C(P, alpha) C(L'-P, N_d-alpha) / C(L', N_d).
pub fn paired_block_spectrum(l_prime: usize, n_d: usize, p: usize) -> Result<Spectrum> {
    if p % 2 != 0 {
        return Err(Error::OddPairedBlock(p));
    }
    mixed_block_spectrum(l_prime, n_d, BlockSpec::new(0, p / 2))
}

/// Finite-size spectrum of a block of D1 lone modes (partners all outside).
/// The 2*D1 half-open slots decohere completely: sector M holds one
/// eigenvalue C(L'-2*D1, N_d-M) / C(L', N_d) with multiplicity C(2*D1, M).
pub fn open_block_spectrum(l_prime: usize, n_d: usize, d1: usize) -> Result<Spectrum> {
    mixed_block_spectrum(l_prime, n_d, BlockSpec::new(d1, 0))
}

/// Finite-size spectrum of a general block: D1 lone modes plus D2/2 complete
/// pairs. This is the master formula; see the module docs.
pub fn mixed_block_spectrum(l_prime: usize, n_d: usize, spec: BlockSpec) -> Result<Spectrum> {
    check_pairs(l_prime, n_d)?;
    check_block(l_prime, spec)?;
    let (d1, d2) = (spec.d1(), spec.d2());
    let rest = (l_prime - 2 * d1 - d2) as u64;
    let denom = log_binomial(l_prime as u64, n_d as i64);
    let mut entries = Vec::new();
    for m_occ in 0..=(2 * d1).min(n_d) {
        let mult = multiplicity(2 * d1, m_occ);
        for alpha in 0..=d2.min(n_d - m_occ) {
            let lam = log_binomial(d2 as u64, alpha as i64)
                .mul(log_binomial(rest, (n_d - m_occ - alpha) as i64))
                .div(denom);
            if !lam.is_zero {
                entries.push((lam.value(), mult));
            }
        }
    }
    Ok(Spectrum::assemble(entries))
}

/// Thermodynamic-limit spectrum of a general block at pair fraction a:
/// lambda_{M, alpha} = C(D2, alpha) a^(M+alpha) (1-a)^(2*D1+D2-M-alpha),
/// multiplicity C(2*D1, M). The finite-size hypergeometric factors converge
/// to these binomials as L' -> infinity at fixed a = N_d/L'.
pub fn mixed_block_spectrum_tdl(a: f64, spec: BlockSpec) -> Spectrum {
    assert!((0.0..=1.0).contains(&a), "pair fraction a = {a} outside [0, 1]");
    let (d1, d2) = (spec.d1(), spec.d2());
    let total = 2 * d1 + d2;
    // a = 0 or 1 collapse the state onto a single occupancy pattern; handle
    // them outside the log to avoid ln(0).
    if a == 0.0 || a == 1.0 {
        return Spectrum::assemble(vec![(1.0, 1)]);
    }
    let (ln_a, ln_b) = (a.ln(), (1.0 - a).ln());
    let mut entries = Vec::new();
    for m_occ in 0..=2 * d1 {
        let mult = multiplicity(2 * d1, m_occ);
        for alpha in 0..=d2 {
            let occupied = (m_occ + alpha) as f64;
            let empty = (total - m_occ - alpha) as f64;
            let lam = log_binomial(d2 as u64, alpha as i64)
                .mul(LogWeight::from_log(occupied * ln_a + empty * ln_b));
            if !lam.is_zero {
                entries.push((lam.value(), mult));
            }
        }
    }
    Spectrum::assemble(entries)
}

/// Thermodynamic-limit spectrum of P/2 complete pairs.
pub fn paired_block_spectrum_tdl(a: f64, p: usize) -> Result<Spectrum> {
    if p % 2 != 0 {
        return Err(Error::OddPairedBlock(p));
    }
    Ok(mixed_block_spectrum_tdl(a, BlockSpec::new(0, p / 2)))
}

/// Thermodynamic-limit spectrum of D1 lone modes.
pub fn open_block_spectrum_tdl(a: f64, d1: usize) -> Spectrum {
    mixed_block_spectrum_tdl(a, BlockSpec::new(d1, 0))
}

fn multiplicity(half_slots: usize, m_occ: usize) -> u64 {
    assert!(
        half_slots as u64 <= EXACT_BINOMIAL_MAX_M,
        "degeneracy C({half_slots}, {m_occ}) needs exact arithmetic"
    );
    let c = binomial_exact(half_slots as u64, m_occ as u64);
    u64::try_from(c).expect("degeneracy exceeds u64; blocks this wide are unsupported")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn single_mode_matches_hand_diagonal() {
        // L' = 4, N_d = 2 exact single-mode reduction is diag(1/6, 1/3, 1/3, 1/6);
        // its TDL counterpart at a = 1/2 is diag(1/4, 1/4, 1/4, 1/4).
        let s = mixed_block_spectrum(4, 2, BlockSpec::new(1, 0)).unwrap();
        let expanded = s.expanded_desc();
        assert_eq!(expanded.len(), 4);
        assert_relative_eq!(expanded[0], 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(expanded[1], 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(expanded[2], 1.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(expanded[3], 1.0 / 6.0, max_relative = 1e-14);

        let tdl = single_mode_spectrum_tdl(0.5);
        for v in tdl.expanded_desc() {
            assert_relative_eq!(v, 0.25, max_relative = 1e-14);
        }
    }

    #[test]
    fn paired_block_example_values() {
        // L' = 4, N_d = 2, one whole pair (P = 2):
        // {C(2,a) C(2,2-a)}/C(4,2) = {1/6, 4/6, 1/6}.
        let s = paired_block_spectrum(4, 2, 2).unwrap();
        let v = s.expanded_desc();
        assert_eq!(v.len(), 3);
        assert_relative_eq!(v[0], 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(v[1], 1.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(v[2], 1.0 / 6.0, max_relative = 1e-14);
        assert!(paired_block_spectrum(4, 2, 3).is_err(), "odd P must fail");
    }

    #[test]
    fn all_spectra_have_unit_trace() {
        for &(lp, nd) in &[(6usize, 3usize), (10, 4), (24, 12), (200, 77)] {
            for &(d1, pp) in &[(0usize, 1usize), (1, 0), (2, 0), (1, 1), (0, 2), (3, 2)] {
                let spec = BlockSpec::new(d1, pp);
                if spec.touched_slots() > lp {
                    continue;
                }
                let s = mixed_block_spectrum(lp, nd, spec).unwrap();
                assert_abs_diff_eq!(s.trace(), 1.0, epsilon = 1e-12);
                let s = mixed_block_spectrum_tdl(0.37, spec);
                assert_abs_diff_eq!(s.trace(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rank_counts_match_the_occupancy_combinatorics() {
        // A block with D1 = 2, D2 = 2 at generous N_d: rank
        // sum_M C(4, M) * #alpha = 2^4 * 3 = 48.
        let s = mixed_block_spectrum(12, 6, BlockSpec::new(2, 1)).unwrap();
        assert_eq!(s.rank(), 48);
    }

    #[test]
    fn special_cases_embed_in_the_master_formula() {
        let a = mixed_block_spectrum(10, 4, BlockSpec::new(0, 2)).unwrap();
        let b = paired_block_spectrum(10, 4, 4).unwrap();
        assert_eq!(a, b);
        let a = mixed_block_spectrum(10, 4, BlockSpec::new(2, 0)).unwrap();
        let b = open_block_spectrum(10, 4, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn finite_size_spectra_converge_to_tdl() {
        let spec = BlockSpec::new(1, 1);
        let a = 0.25;
        let tdl = mixed_block_spectrum_tdl(a, spec);
        let mut prev_err = f64::INFINITY;
        for &lp in &[40usize, 160, 640] {
            let s = mixed_block_spectrum(lp, lp / 4, spec).unwrap();
            // Same (M, alpha) enumeration order in both constructors.
            let err: f64 = s
                .entries
                .iter()
                .zip(&tdl.entries)
                .map(|(x, y)| (x.0 - y.0).abs())
                .fold(0.0, f64::max);
            assert!(
                err < prev_err,
                "finite-size error must shrink with L': {err} !< {prev_err}"
            );
            prev_err = err;
        }
        assert!(prev_err < 5e-3, "L' = 640 should be within 5e-3 of the TDL");
    }

    #[test]
    fn huge_blocks_stay_finite_and_normalized() {
        // A quarter-million slots with a 512-slot paired block exercises the
        // log-gamma backend end to end.
        let s = paired_block_spectrum(1 << 18, 1 << 17, 512).unwrap();
        assert_abs_diff_eq!(s.trace(), 1.0, epsilon = 1e-12);
        assert!(s.entries.iter().all(|&(v, _)| v.is_finite() && v > 0.0));
    }

    #[test]
    fn oversized_blocks_are_rejected() {
        assert_eq!(
            mixed_block_spectrum(4, 2, BlockSpec::new(2, 1)),
            Err(Error::BlockTooLarge {
                touched: 6,
                l_prime: 4
            })
        );
        assert!(matches!(
            mixed_block_spectrum(8, 9, BlockSpec::new(1, 0)),
            Err(Error::TooManyPairs { .. })
        ));
    }
}
