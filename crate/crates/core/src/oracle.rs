//! Exact finite-size oracle: builds the uniformly paired state explicitly in
//! a fermionic Fock space, reduces it to arbitrary momentum-mode blocks, and
//! evaluates spectra, entropies, negativities, and Q by brute force.
//!
//! Everything closed-form elsewhere in the crate is cross-checked against
//! this module at small L'. The oracle is deliberately written from the
//! microscopic definitions — creation operators, anticommutation signs,
//! partial transposes — and shares no combinatorial shortcuts with the
//! formulas it validates.
//!
//! Conventions. The L' vacant momenta are labelled 0..L', with partners
//! m <-> m ^ 1 (even m is +k, odd m is -k of the same pair). Slot s binds
//! the orbitals (k_s, down) and (-k_s, up); with orbitals laid out as
//! (slot 0 down, slot 0 up, slot 1 down, ...) slot s owns the adjacent
//! global orbitals 2s and 2s + 1, while *mode* m owns orbital 2m (its down
//! spin) and orbital 2(m ^ 1) + 1 (its up spin, which lives in the partner
//! slot). Each pair creator fills its two adjacent orbitals; reordering the
//! product into canonical ascending-orbital form costs one transposition
//! per pair, i.e. a global phase (-1)^(N_d) that cancels in every density
//! matrix. Amplitudes are therefore stored in the canonical Fock gauge.

use crate::error::{Error, Result};
use crate::numerics::binomial_exact;
use nalgebra::DMatrix;

/// Hard cap on the exactly representable system: u32 slot masks and
/// C(24, 12) = 2.7M amplitudes keep every oracle call interactive.
pub const MAX_L_PRIME: usize = 24;

/// Cap on brute-force block enumeration in [`exact_q`].
pub const MAX_Q_BLOCKS: u128 = 100_000;

/// A momentum mode label in 0..L'. Even and odd labels of the same pair are
/// partners: `Mode(2i)` is +k of pair i, `Mode(2i + 1)` is -k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(pub usize);

impl Mode {
    /// The opposite momentum of the same pair slot.
    pub fn partner(self) -> Mode {
        Mode(self.0 ^ 1)
    }

    /// Global orbital hosting this mode's spin-down fermion.
    fn down_orbital(self) -> usize {
        2 * self.0
    }

    /// Global orbital hosting this mode's spin-up fermion (lives in the
    /// partner slot: the pair on slot s is (k_s down, -k_s up)).
    fn up_orbital(self) -> usize {
        2 * (self.0 ^ 1) + 1
    }
}

/// The uniformly paired state on L' slots with N_d pairs, stored as one
/// amplitude per slot-occupation bitmask.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub l_prime: usize,
    pub n_d: usize,
    /// (slot mask, amplitude), masks strictly ascending.
    pub amplitudes: Vec<(u32, f64)>,
}

/// Canonical state: every slot subset with amplitude +1/sqrt(C(L', N_d)).
pub fn build_state(l_prime: usize, n_d: usize) -> Result<OracleState> {
    build_state_with_gauge(l_prime, n_d, &vec![1.0; l_prime])
}

/// Same state with per-slot gauge signs eta_s -> signs[s] * eta_s. A sign
/// twist is a slot-local unitary, and a slot can straddle a mode block, so
/// the reduced matrix is only gauge-covariant — but block spectra,
/// purities and negativities must not move, and the verification suite
/// checks exactly that.
pub fn build_state_with_gauge(l_prime: usize, n_d: usize, signs: &[f64]) -> Result<OracleState> {
    if l_prime % 2 != 0 || !(2..=MAX_L_PRIME).contains(&l_prime) {
        return Err(Error::OracleSize {
            got: l_prime,
            max: MAX_L_PRIME,
        });
    }
    if n_d > l_prime {
        return Err(Error::TooManyPairs { n_d, l_prime });
    }
    assert_eq!(signs.len(), l_prime, "need one gauge sign per slot");
    assert!(signs.iter().all(|s| s.abs() == 1.0), "gauge signs must be +-1");
    let count = binomial_exact(l_prime as u64, n_d as u64) as usize;
    let norm = 1.0 / (count as f64).sqrt();
    let mut amplitudes = Vec::with_capacity(count);
    if n_d == 0 {
        amplitudes.push((0u32, norm));
    } else {
        // Gosper's hack walks the weight-N_d masks in ascending order.
        let mut mask: u32 = (1 << n_d) - 1;
        let top: u32 = 1 << l_prime;
        while mask < top {
            let mut amp = norm;
            let mut m = mask;
            while m != 0 {
                let s = m.trailing_zeros() as usize;
                amp *= signs[s];
                m &= m - 1;
            }
            amplitudes.push((mask, amp));
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
        debug_assert_eq!(amplitudes.len(), count);
    }
    Ok(OracleState {
        l_prime,
        n_d,
        amplitudes,
    })
}

/// Dense reduced density matrix of a block of modes, in the local basis
/// b = sum_i (down_i + 2 up_i) 4^i over the modes in the order given.
#[derive(Debug, Clone)]
pub struct RdmMatrix {
    pub modes: Vec<Mode>,
    pub matrix: DMatrix<f64>,
}

impl RdmMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Tr rho^2 without diagonalizing: rho is symmetric, so this is the
    /// squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|x| x * x).sum()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// Exact reduction of the state to the given modes (distinct, in 0..L').
///
/// For every slot configuration the global Fock string is split into block
/// orbitals (ordered as the mode list, down before up within a mode) and
/// environment orbitals (ascending); the anticommutation sign of that
/// reshuffle multiplies the amplitude. Configurations sharing an
/// environment pattern contribute coherently, everything else traces out.
pub fn exact_rdm(state: &OracleState, modes: &[Mode]) -> RdmMatrix {
    let d = modes.len();
    assert!(d > 0, "empty block");
    assert!(d <= 10, "a {d}-mode block needs a 4^{d}-dimensional matrix; not happening");
    for (i, m) in modes.iter().enumerate() {
        assert!(m.0 < state.l_prime, "mode {} outside 0..{}", m.0, state.l_prime);
        assert!(
            modes[..i].iter().all(|o| o != m),
            "mode {} listed twice",
            m.0
        );
    }
    // 2 * MAX_L_PRIME = 48 orbitals fit one u64 Fock word.
    let block_orbitals: Vec<usize> = modes
        .iter()
        .flat_map(|m| [m.down_orbital(), m.up_orbital()])
        .collect();
    let mut in_block: u64 = 0;
    for &o in &block_orbitals {
        in_block |= 1 << o;
    }

    // Group amplitudes by environment pattern. A BTreeMap keeps the
    // accumulation order deterministic so repeated runs agree to the bit.
    let mut groups: std::collections::BTreeMap<u64, Vec<(usize, f64)>> =
        std::collections::BTreeMap::new();
    for &(mask, amp) in &state.amplitudes {
        // Slot mask -> orbital string: slot s occupies orbitals 2s, 2s+1.
        let mut fock: u64 = 0;
        let mut m = mask;
        while m != 0 {
            let s = m.trailing_zeros() as usize;
            fock |= 0b11 << (2 * s);
            m &= m - 1;
        }
        // Local basis index and reordering sign: pull the occupied block
        // orbitals out of the ascending string one by one, in block order;
        // each pull hops over the not-yet-pulled occupied orbitals below it.
        let mut b = 0usize;
        let mut sign = 1.0f64;
        let mut remaining = fock;
        for (i, &o) in block_orbitals.iter().enumerate() {
            if fock >> o & 1 == 1 {
                b |= 1 << i;
                let below = (remaining & ((1u64 << o) - 1)).count_ones();
                if below % 2 == 1 {
                    sign = -sign;
                }
                remaining &= !(1u64 << o);
            }
        }
        let env = fock & !in_block;
        debug_assert_eq!(env, remaining & !in_block);
        groups.entry(env).or_default().push((b, sign * amp));
    }

    let dim = 1usize << (2 * d);
    let mut matrix = DMatrix::<f64>::zeros(dim, dim);
    for members in groups.values() {
        for &(bi, ai) in members {
            for &(bj, aj) in members {
                matrix[(bi, bj)] += ai * aj;
            }
        }
    }
    RdmMatrix {
        modes: modes.to_vec(),
        matrix,
    }
}

/// Eigenvalues of a symmetric matrix via Householder tridiagonalization and
/// Sturm-count bisection, ascending. Reduced density matrices here are
/// massively degenerate, which drives shifted-QR iterations (including the
/// one in the linear-algebra crate) into non-convergence; bisection is
/// slower but cannot fail, and the oracle values gate everything else.
fn symmetric_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigenvalues of a non-square matrix");
    if n == 1 {
        return vec![a[(0, 0)]];
    }
    // Householder similarity reduction to tridiagonal form. Each reflector
    // v annihilates one column below the subdiagonal through
    // A <- A - 2 v w^T - 2 w v^T with w = A v - (v^T A v) v.
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a[(i, k)] * a[(i, k)];
        }
        let x0 = a[(k + 1, k)];
        let norm = norm2.sqrt();
        if norm == 0.0 || norm2 - x0 * x0 == 0.0 {
            // Column already tridiagonal.
            continue;
        }
        let alpha = -x0.signum() * norm;
        let mut v = vec![0.0; n];
        let scale = 1.0 / (2.0 * alpha * alpha - 2.0 * x0 * alpha).sqrt();
        v[k + 1] = (x0 - alpha) * scale;
        for i in k + 2..n {
            v[i] = a[(i, k)] * scale;
        }
        // w = A v - (v^T A v) v, restricted to the live trailing block.
        let mut p = vec![0.0; n];
        for i in k..n {
            let mut s = 0.0;
            for j in k + 1..n {
                s += a[(i, j)] * v[j];
            }
            p[i] = s;
        }
        let vtav: f64 = (k + 1..n).map(|i| v[i] * p[i]).sum();
        for i in k..n {
            p[i] -= vtav * v[i];
        }
        for i in k..n {
            for j in k..n {
                a[(i, j)] -= 2.0 * (v[i] * p[j] + p[i] * v[j]);
            }
        }
    }
    let d: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let e: Vec<f64> = (0..n - 1).map(|i| a[(i + 1, i)]).collect();

    // Sturm count: eigenvalues of the tridiagonal matrix strictly below x,
    // from the signs of the LDL^T pivots.
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = 1.0f64;
        for i in 0..n {
            let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
            q = d[i] - x - off / q;
            if q < 0.0 {
                count += 1;
            } else if q == 0.0 {
                // A zero pivot means x is an eigenvalue of a leading block;
                // nudge it so the recurrence keeps moving.
                q = -1e-300;
                count += 1;
            }
        }
        count
    };

    // Gershgorin interval enclosing the whole spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let width = (hi - lo).max(1e-300);

    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        // Smallest x with count_below(x) >= j + 1, i.e. the j-th smallest
        // eigenvalue, found by plain bisection: ~60 halvings push the
        // bracket to one ulp of the spectrum width.
        let (mut a_j, mut b_j) = (lo, hi + width * 1e-15);
        for _ in 0..80 {
            let mid = 0.5 * (a_j + b_j);
            if mid <= a_j || mid >= b_j {
                break;
            }
            if count_below(mid) >= j + 1 {
                b_j = mid;
            } else {
                a_j = mid;
            }
        }
        out.push(0.5 * (a_j + b_j));
    }
    out
}

/// Eigenvalues of a reduced density matrix, descending.
pub fn exact_spectrum(rdm: &RdmMatrix) -> Vec<f64> {
    let mut v = symmetric_eigenvalues(rdm.matrix.clone());
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Von Neumann entropy of a reduced density matrix, in bits.
pub fn exact_entropy(rdm: &RdmMatrix) -> f64 {
    exact_spectrum(rdm)
        .iter()
        .filter(|&&v| v > 1e-14)
        .map(|&v| -v * v.log2())
        .sum()
}

/// Negativity of a bipartition of the block: sum of |negative eigenvalues|
/// of the partial transpose over the modes listed in `cut` (positions into
/// `rdm.modes`). The raw, unnormalized convention.
pub fn exact_negativity(rdm: &RdmMatrix, cut: &[usize]) -> f64 {
    let d = rdm.modes.len();
    assert!(cut.iter().all(|&i| i < d), "cut position out of range");
    let dim = rdm.dim();
    let mut cut_mask = 0usize;
    for &i in cut {
        cut_mask |= 0b11 << (2 * i);
    }
    let mut pt = DMatrix::<f64>::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            // Swap the cut modes' local digits between row and column.
            let rr = (r & !cut_mask) | (c & cut_mask);
            let cc = (c & !cut_mask) | (r & cut_mask);
            pt[(rr, cc)] = rdm.matrix[(r, c)];
        }
    }
    symmetric_eigenvalues(pt)
        .into_iter()
        .filter(|&v| v < 0.0)
        .map(|v| -v)
        .sum()
}

/// Mutual information I(A : B) = S_A + S_B - S_AB between two disjoint mode
/// sets, in bits.
pub fn exact_mutual_information(state: &OracleState, a: &[Mode], b: &[Mode]) -> f64 {
    assert!(a.iter().all(|m| !b.contains(m)), "blocks must be disjoint");
    let joint: Vec<Mode> = a.iter().chain(b.iter()).copied().collect();
    exact_entropy(&exact_rdm(state, a)) + exact_entropy(&exact_rdm(state, b))
        - exact_entropy(&exact_rdm(state, &joint))
}

/// Brute-force Q: average the exact block purity over every D-mode subset.
pub fn exact_q(state: &OracleState, d: usize) -> Result<f64> {
    if d < 1 || d > state.l_prime {
        return Err(Error::BadParameter(format!(
            "block size D = {d} outside 1..=L' = {}",
            state.l_prime
        )));
    }
    let count = binomial_exact(state.l_prime as u64, d as u64);
    if count > MAX_Q_BLOCKS {
        return Err(Error::TooManyBlocks {
            l_prime: state.l_prime,
            d,
            count,
            max: MAX_Q_BLOCKS,
        });
    }
    let mut sum_purity = 0.0;
    let mut blocks = 0u64;
    for_each_combination(state.l_prime, d, |idx| {
        let modes: Vec<Mode> = idx.iter().map(|&i| Mode(i)).collect();
        sum_purity += exact_rdm(state, &modes).purity();
        blocks += 1;
    });
    debug_assert_eq!(blocks as u128, count);
    let mean = sum_purity / blocks as f64;
    let norm = 1.0 / (1.0 - 0.25f64.powi(d as i32));
    Ok((norm * (1.0 - mean)).clamp(0.0, 1.0))
}

/// Visit every k-subset of 0..n in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    assert!(k <= n);
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        f(&idx);
        return;
    }
    loop {
        f(&idx);
        // Advance the rightmost index that still has room.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
