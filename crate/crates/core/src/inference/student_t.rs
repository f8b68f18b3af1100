//! Two-tailed Student t critical values by numerical inversion of the CDF.

use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `P(|T| > t)` for `t ≥ 0` and `df` degrees of freedom.
pub fn t_two_tailed_p(t: f64, df: u64) -> f64 {
    let v = df as f64;
    let t2 = t * t;
    if t2 < v {
        // Small t: go through the complement to keep the tail accurate.
        1.0 - beta_reg(0.5, v / 2.0, t2 / (v + t2))
    } else {
        beta_reg(v / 2.0, 0.5, v / (v + t2))
    }
}

fn ln_density(t: f64, v: f64) -> f64 {
    ln_gamma((v + 1.0) / 2.0)
        - ln_gamma(v / 2.0)
        - 0.5 * (v * std::f64::consts::PI).ln()
        - (v + 1.0) / 2.0 * (t * t / v).ln_1p()
}

/// The critical value `t` with `P(|T_df| > t) = alpha`.
///
/// Brackets the root, narrows it by bisection, then polishes with Newton
/// steps on the tail probability, whose derivative is twice the density.
/// `alpha = 1` gives 0.
pub fn t_quantile(alpha: f64, df: u64) -> Result<f64> {
    if df == 0 {
        return Err(Error::domain("degrees of freedom must be positive"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0, 1]")));
    }
    if alpha == 1.0 {
        return Ok(0.0);
    }
    let v = df as f64;
    let f = |t: f64| t_two_tailed_p(t, df) - alpha;

    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::domain(format!("no finite t quantile for alpha {alpha}")));
        }
    }
    while hi - lo > 1e-3 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut t = 0.5 * (lo + hi);
    for _ in 0..50 {
        let slope = -2.0 * ln_density(t, v).exp();
        let next = t - f(t) / slope;
        if !(next > lo && next < hi) {
            break;
        }
        let done = (next - t).abs() <= 4.0 * f64::EPSILON * t;
        t = next;
        if done {
            break;
        }
    }
    Ok(t)
}
