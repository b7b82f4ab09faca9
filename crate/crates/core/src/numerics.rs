//! Combinatorial kernels shared by every finite-size formula in the crate.
//!
//! Everything downstream — block spectra, purities, the Q measure — reduces
//! to ratios of binomial coefficients. Those ratios are kept honest by two
//! backends: exact `u128` integer arithmetic while the numbers fit
//! (`m <= EXACT_BINOMIAL_MAX_M`), and log-gamma beyond. A third, signed
//! variant extends the binomial coefficient to real arguments through the
//! gamma function; that is what lets a length-1000 scan treat the unpaired
//! count N_s(u) = L arccos(-u/4)/pi as a genuine real number instead of
//! forcing a staircase through integer fillings. The gamma extension agrees
//! exactly with the integer coefficient whenever both arguments are whole,
//! because the out-of-support terms sit on poles of 1/Gamma.

use statrs::function::gamma::ln_gamma;

/// Largest first argument for which `binomial_exact` is guaranteed not to
/// overflow `u128` (the multiplicative scheme needs headroom of one factor
/// above C(m, m/2); C(120, 60) * 120 still fits).
pub const EXACT_BINOMIAL_MAX_M: u64 = 120;

/// C(m, k) in exact integer arithmetic. Panics if `m` exceeds
/// [`EXACT_BINOMIAL_MAX_M`]; callers guard the size and fall back to log
/// space. Out-of-range `k` gives 0, as the combinatorial reading demands.
pub fn binomial_exact(m: u64, k: u64) -> u128 {
    assert!(
        m <= EXACT_BINOMIAL_MAX_M,
        "binomial_exact: m = {m} would overflow u128"
    );
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        // Multiply before dividing: the running value is itself a binomial
        // coefficient, so the division is always exact.
        c = c * (m - k + i) as u128 / i as u128;
    }
    c
}

/// ln(n!) via the log-gamma function.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// A nonnegative weight carried as its natural logarithm, with exact zero
/// tracked explicitly so that out-of-support terms never pollute a sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogWeight {
    pub log_value: f64,
    pub is_zero: bool,
}

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight {
        log_value: f64::NEG_INFINITY,
        is_zero: true,
    };

    pub fn from_log(log_value: f64) -> Self {
        LogWeight {
            log_value,
            is_zero: false,
        }
    }

    /// Back to linear scale; exact zeros stay exactly zero.
    pub fn value(self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.log_value.exp()
        }
    }

    pub fn mul(self, other: LogWeight) -> LogWeight {
        if self.is_zero || other.is_zero {
            LogWeight::ZERO
        } else {
            LogWeight::from_log(self.log_value + other.log_value)
        }
    }

    pub fn div(self, other: LogWeight) -> LogWeight {
        assert!(!other.is_zero, "LogWeight: division by exact zero");
        if self.is_zero {
            LogWeight::ZERO
        } else {
            LogWeight::from_log(self.log_value - other.log_value)
        }
    }
}

/// ln C(m, k) with integer semantics: exact zero outside 0 <= k <= m.
/// Uses exact integer arithmetic while it fits, log-gamma beyond.
pub fn log_binomial(m: u64, k: i64) -> LogWeight {
    if k < 0 || k as u64 > m {
        return LogWeight::ZERO;
    }
    let k = k as u64;
    if k == 0 || k == m {
        return LogWeight::from_log(0.0);
    }
    if m <= EXACT_BINOMIAL_MAX_M {
        LogWeight::from_log((binomial_exact(m, k) as f64).ln())
    } else {
        LogWeight::from_log(ln_factorial(m) - ln_factorial(k) - ln_factorial(m - k))
    }
}

/// A real number carried as (sign, ln|x|). `sign == 0` encodes exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub log_abs: f64,
    pub sign: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        log_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    pub fn positive(log_abs: f64) -> Self {
        SignedLog { log_abs, sign: 1.0 }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.log_abs.exp()
        }
    }
}

/// ln|Gamma(x)| together with the sign of Gamma(x), valid on the whole real
/// line. Poles at non-positive integers are reported with `sign = 0` and an
/// infinite magnitude, which downstream code reads as "1/Gamma = exact 0".
pub fn ln_gamma_signed(x: f64) -> SignedLog {
    if x > 0.0 {
        return SignedLog::positive(ln_gamma(x));
    }
    if x == x.floor() {
        // Pole of Gamma at 0, -1, -2, ...
        return SignedLog {
            log_abs: f64::INFINITY,
            sign: 0.0,
        };
    }
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x), with 1 - x > 1 > 0.
    let r = x - x.floor(); // in (0, 1)
    let log_abs_sin = (std::f64::consts::PI * r).sin().ln();
    let log_abs = std::f64::consts::PI.ln() - log_abs_sin - ln_gamma(1.0 - x);
    // sin(pi x) = (-1)^floor(x) sin(pi r) with sin(pi r) > 0.
    let sign = if (x.floor() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    SignedLog { log_abs, sign }
}

/// Generalized binomial coefficient C(x, k) = Gamma(x+1) / (Gamma(k+1)
/// Gamma(x-k+1)) for real arguments, as a signed log value.
///
/// When both arguments are whole numbers this reduces bit-for-bit to the
/// integer coefficient (including the exact zeros outside 0 <= k <= x), so
/// scans that pass through integer fillings are continuous there. Away from
/// integers the continuation is smooth; slightly negative lobes just past
/// the support edge are genuine features of the gamma extension and are kept
/// with their sign so that Vandermonde-type sum rules continue to hold.
pub fn log_binomial_real(x: f64, k: f64) -> SignedLog {
    assert!(
        x > -1.0 && x.is_finite() && k.is_finite(),
        "log_binomial_real: unsupported arguments x = {x}, k = {k}"
    );
    if x.fract() == 0.0 && k.fract() == 0.0 && x >= 0.0 {
        let lw = log_binomial(x as u64, k as i64);
        return if lw.is_zero {
            SignedLog::ZERO
        } else {
            SignedLog::positive(lw.log_value)
        };
    }
    let num = ln_gamma_signed(x + 1.0);
    let den_k = ln_gamma_signed(k + 1.0);
    let den_xk = ln_gamma_signed(x - k + 1.0);
    if den_k.sign == 0.0 || den_xk.sign == 0.0 {
        // 1/Gamma vanishes at the poles: the coefficient is exactly zero.
        return SignedLog::ZERO;
    }
    SignedLog {
        log_abs: num.log_abs - den_k.log_abs - den_xk.log_abs,
        sign: num.sign * den_k.sign * den_xk.sign,
    }
}

/// Probability that a block of `m` slots holds exactly `j` of the `n_d`
/// pairs spread uniformly over `l_prime` slots:
/// C(m, j) C(l_prime - m, n_d - j) / C(l_prime, n_d).
pub fn hypergeometric_weight(l_prime: u64, n_d: u64, m: u64, j: i64) -> f64 {
    log_hypergeometric_weight(l_prime, n_d, m, j).value()
}

/// Same weight kept in log scale; used where the raw value underflows.
pub fn log_hypergeometric_weight(l_prime: u64, n_d: u64, m: u64, j: i64) -> LogWeight {
    assert!(m <= l_prime, "block of {m} slots exceeds L' = {l_prime}");
    assert!(n_d <= l_prime, "N_d = {n_d} exceeds L' = {l_prime}");
    if j < 0 || j as u64 > m || j as u64 > n_d || n_d - j as u64 > l_prime - m {
        return LogWeight::ZERO;
    }
    if l_prime <= EXACT_BINOMIAL_MAX_M {
        // Exact path: convert each factor to f64 *before* multiplying so the
        // intermediate product cannot overflow u128.
        let a = binomial_exact(m, j as u64) as f64;
        let b = binomial_exact(l_prime - m, n_d - j as u64) as f64;
        let c = binomial_exact(l_prime, n_d) as f64;
        return LogWeight::from_log((a * b / c).ln());
    }
    log_binomial(m, j)
        .mul(log_binomial(l_prime - m, n_d as i64 - j))
        .div(log_binomial(l_prime, n_d as i64))
}

/// Neumaier-compensated accumulator: the spectra routinely sum 10^4..10^6
/// terms spanning many orders of magnitude, and several acceptance
/// tolerances sit at 1e-12, so naive summation is not good enough.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
