//! Log-domain primitives. Every exponential in the dual updates goes
//! through [`logaddexp`].

/// `log(e^a + e^b)` without overflow.
#[inline]
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log(1 + e^x)`.
#[inline]
pub fn softplus(x: f64) -> f64 {
    logaddexp(0.0, x)
}

/// `1 / (1 + e^{-x})`, stable on both tails.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log sum_j e^{x_j}`; `-inf` for an empty slice.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `log (1/n) sum_j e^{x_j}`. Callers guarantee a nonempty slice.
pub fn logmeanexp(xs: &[f64]) -> f64 {
    debug_assert!(!xs.is_empty());
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let mean = xs.iter().map(|&x| (x - max).exp()).sum::<f64>() / xs.len() as f64;
    max + mean.ln()
}

/// Softmax weights `e^{x_j} / sum_k e^{x_k}` written into `out`.
pub fn softmax_into(xs: &[f64], out: &mut Vec<f64>) {
    out.clear();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.extend(xs.iter().map(|&x| (x - max).exp()));
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
}
