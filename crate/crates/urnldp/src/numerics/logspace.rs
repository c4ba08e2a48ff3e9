//! Log-domain probability arithmetic with an explicit `-inf` sentinel.
//!
//! Probabilities underflow f64 around n ~ 700 steps, so the exact
//! distribution code works exclusively with log-probabilities. `-inf`
//! marks states of probability exactly zero and propagates through sums.

/// Log of probability zero.
pub const NEG_INF: f64 = f64::NEG_INFINITY;

/// log(e^x + e^y) with max-shift, tolerating `-inf` operands.
#[inline]
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == NEG_INF {
        return y;
    }
    if y == NEG_INF {
        return x;
    }
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// log(sum e^{x_i}) with max-shift; `-inf` if every term is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(NEG_INF, f64::max);
    if m == NEG_INF {
        return NEG_INF;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// ln(p) that maps p <= 0 to the `-inf` sentinel instead of NaN.
#[inline]
pub fn ln_prob(p: f64) -> f64 {
    if p > 0.0 {
        p.ln()
    } else {
        NEG_INF
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_handles_sentinels() {
        assert_eq!(log_add_exp(NEG_INF, NEG_INF), NEG_INF);
        assert_eq!(log_add_exp(NEG_INF, -1.5), -1.5);
        let v = log_add_exp(0.0, 0.0);
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let xs = [-700.0, -701.0, -702.5];
        let direct = ((-700.0f64).exp() + (-701.0f64).exp() + (-702.5f64).exp()).ln();
        assert!((log_sum_exp(&xs) - direct).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_survives_deep_underflow() {
        let xs = [-2000.0, -2000.0];
        let v = log_sum_exp(&xs);
        assert!((v - (-2000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }
}
