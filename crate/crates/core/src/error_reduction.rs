//! Round planning for error reduction by parallel repetition with a threshold
//! acceptance rule.
//!
//! Completeness is bounded by the Chernoff tail of independent play,
//! soundness by the `pᵏ C(n,k)` bound on the `n`-fold game. Tail bounds are
//! evaluated in log space.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Required slack in `c·lg β + H(c) < 0`.
const RATE_MARGIN: f64 = 0.01;
const MAX_DENOMINATOR: u32 = 64;
const MAX_ROUNDS: u64 = 1 << 40;

/// `H(x) = −x lg x − (1−x) lg(1−x)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy needs x in [0,1], got {x}")));
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// `2^(−H(x)/x)` for `x ∈ (0,1]`.
pub fn entropy_threshold(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("entropy threshold needs x in (0,1], got {x}")));
    }
    Ok((-binary_entropy(x)? / x).exp2())
}

/// True iff `β < 2^(−H(α)/α) < α`.
pub fn threshold_condition(alpha: f64, beta: f64) -> Result<bool> {
    if !(0.0 <= beta && beta < alpha && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "need 0 <= beta < alpha <= 1, got alpha {alpha}, beta {beta}"
        )));
    }
    let t = entropy_threshold(alpha)?;
    Ok(beta < t && t < alpha)
}

/// Chernoff bound `exp(−p n (1 − c/p)² / 2)` on independent play falling to
/// `c·n` accepting rounds or fewer.
pub fn completeness_error_bound(p: f64, c: f64, n: u64) -> Result<f64> {
    if !(0.0 < c && c < p && p <= 1.0) {
        return Err(Error::Domain(format!("need 0 < c < p <= 1, got c {c}, p {p}")));
    }
    let lambda = 1.0 - c / p;
    Ok((-p * n as f64 * lambda * lambda / 2.0).exp())
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k == 0 || k == n {
        return 0.0;
    }
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// `min(1, pᵏ C(n,k))`.
pub fn soundness_error_bound(p: f64, n: u64, k: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("need p in [0,1], got {p}")));
    }
    if k > n {
        return Err(Error::Domain(format!("threshold k={k} exceeds n={n}")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let ln = k as f64 * p.ln() + ln_binomial(n, k);
    Ok(ln.min(0.0).exp())
}

/// A rational threshold fraction `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

impl Fraction {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌊(num/den)·n⌋` computed exactly.
    pub fn floor_times(self, n: u64) -> u64 {
        ((self.num as u128 * n as u128) / self.den as u128) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReductionPlan {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub c: Fraction,
    pub c_value: f64,
    pub n: u64,
    pub k: u64,
    pub completeness_bound: f64,
    pub soundness_bound: f64,
    pub satisfied: bool,
}

/// Per-round decay rates (natural log) of the two bounds at threshold `c`:
/// `α(1 − c/α)²/2` and `−(c ln β + H_e(c))`.
fn rates(alpha: f64, beta: f64, c: f64) -> (f64, f64) {
    let lambda = 1.0 - c / alpha;
    let completeness = alpha * lambda * lambda / 2.0;
    let h = binary_entropy(c).unwrap_or(0.0) * std::f64::consts::LN_2;
    let soundness = if beta == 0.0 { f64::INFINITY } else { -(c * beta.ln() + h) };
    (completeness, soundness)
}

/// Threshold fraction with `c < α` and `c·lg β + H(c) < −margin`, chosen to
/// maximize the slower of the two decay rates.
pub fn choose_threshold(alpha: f64, beta: f64) -> Option<Fraction> {
    let mut best: Option<(f64, Fraction)> = None;
    for den in 1..=MAX_DENOMINATOR {
        for num in 1..den {
            let f = Fraction { num, den };
            let c = f.value();
            if c >= alpha {
                break;
            }
            let coefficient = if beta == 0.0 {
                f64::NEG_INFINITY
            } else {
                c * beta.log2() + binary_entropy(c).unwrap_or(0.0)
            };
            if coefficient >= -RATE_MARGIN {
                continue;
            }
            let (rc, rs) = rates(alpha, beta, c);
            let rate = rc.min(rs);
            if best.is_none_or(|(r, _)| rate > r) {
                best = Some((rate, f));
            }
        }
    }
    best.map(|(_, f)| f)
}

fn bounds(alpha: f64, beta: f64, c: Fraction, n: u64) -> (u64, f64, f64) {
    let k = c.floor_times(n);
    let comp = completeness_error_bound(alpha, c.value(), n).expect("c < alpha");
    let sound = soundness_error_bound(beta, n, k).expect("k <= n");
    (k, comp, sound)
}

/// Smallest number of repetitions (found by doubling, then bisection) for
/// which both error bounds are at most `epsilon`, re-verified directly.
pub fn plan_rounds(alpha: f64, beta: f64, epsilon: f64) -> Result<ErrorReductionPlan> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 0.5), got {epsilon}")));
    }
    if !threshold_condition(alpha, beta)? {
        return Err(Error::ThresholdCondition {
            alpha,
            beta,
            threshold: entropy_threshold(alpha)?,
        });
    }
    let c = choose_threshold(alpha, beta).ok_or(Error::ThresholdCondition {
        alpha,
        beta,
        threshold: entropy_threshold(alpha)?,
    })?;
    let ok = |n: u64| {
        let (_, comp, sound) = bounds(alpha, beta, c, n);
        comp <= epsilon && sound <= epsilon
    };
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= MAX_ROUNDS {
            return Err(Error::Domain(format!("no plan within {MAX_ROUNDS} repetitions")));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: ok(hi); lo is 0 or was seen failing
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n = hi;
    let (k, completeness_bound, soundness_bound) = bounds(alpha, beta, c, n);
    Ok(ErrorReductionPlan {
        alpha,
        beta,
        epsilon,
        c,
        c_value: c.value(),
        n,
        k,
        completeness_bound,
        soundness_bound,
        satisfied: completeness_bound <= epsilon && soundness_bound <= epsilon,
    })
}

/// Samples `(x, 2^(−H(x)/x))` on `x_min, x_min + step, …, ≤ x_max`.
pub fn entropy_curve(x_min: f64, x_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(0.0 < x_min && x_min <= x_max && x_max <= 1.0 && step > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 < min <= max <= 1 and step > 0, got min {x_min}, max {x_max}, step {step}"
        )));
    }
    let count = ((x_max - x_min) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            let x = (x_min + i as f64 * step).min(x_max);
            Ok((x, entropy_threshold(x)?))
        })
        .collect()
}

/// Formats `x` with 12 significant digits.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp).max(0) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

/// Writes the curve as CSV with header `x,y`.
pub fn write_curve_csv<W: Write>(curve: &[(f64, f64)], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,y")?;
    for &(x, y) in curve {
        writeln!(out, "{},{}", format_significant(x), format_significant(y))?;
    }
    Ok(())
}
