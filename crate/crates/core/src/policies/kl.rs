/// Absolute tolerance of the KL upper-confidence bisection.
pub const KLUCB_TOLERANCE: f64 = 1e-9;

/// `KL(Ber(p), Ber(q))` with `0 · ln 0 = 0`; `+∞` when `q` is 0 or 1 and
/// `p` puts mass where `q` does not.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    fn term(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    }
    (term(p, q) + term(1.0 - p, 1.0 - q)).max(0.0)
}

/// Largest `q ∈ [mu, 1]` with `n · d(mu, q) ≤ ln t + c · ln ln t`.
///
/// A negative exploration budget (small `t`) is clamped to 0, which gives `mu`.
pub fn klucb_index(mu: f64, n: u64, t: u64, c: f64) -> f64 {
    let mu = mu.clamp(0.0, 1.0);
    if n == 0 {
        return 1.0;
    }
    if mu >= 1.0 {
        return 1.0;
    }
    let ln_t = (t.max(1) as f64).ln();
    let lnln = if ln_t > 0.0 { ln_t.ln() } else { 0.0 };
    let budget = (ln_t + c * lnln).max(0.0) / n as f64;
    if budget == 0.0 {
        return mu;
    }
    let (mut lo, mut hi) = (mu, 1.0);
    while hi - lo > KLUCB_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if kl_bernoulli(mu, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn divergence_examples() {
        assert_eq!(kl_bernoulli(0.5, 0.5), 0.0);
        assert_abs_diff_eq!(kl_bernoulli(0.5, 0.75), 0.14384103622589042, epsilon = 1e-14);
        assert_abs_diff_eq!(kl_bernoulli(0.0, 0.5), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(kl_bernoulli(0.5, 1.0), f64::INFINITY);
        assert_eq!(kl_bernoulli(1.0, 1.0), 0.0);
        assert_eq!(kl_bernoulli(0.0, 0.0), 0.0);
    }

    #[test]
    fn index_examples() {
        // t = 1 has zero budget.
        assert_eq!(klucb_index(0.3, 5, 1, 0.0), 0.3);
        assert_eq!(klucb_index(1.0, 5, 100, 3.0), 1.0);

        let q = klucb_index(0.5, 10, 100, 0.0);
        assert_abs_diff_eq!(q, 0.8879087616458614, epsilon = 2e-9);
        assert_abs_diff_eq!(10.0 * kl_bernoulli(0.5, q), 100f64.ln(), epsilon = 1e-6);

        // Dense scan on a 1e-6 grid as an independent route.
        let budget = 100f64.ln() / 10.0;
        let scanned = (0..=500_000)
            .map(|k| 0.5 + k as f64 * 1e-6)
            .filter(|&q| kl_bernoulli(0.5, q) <= budget)
            .fold(0.5f64, f64::max);
        assert!((q - scanned).abs() <= 1e-6);
    }

    proptest! {
        #[test]
        fn index_dominates_mean_and_shrinks_with_n(
            p in 0.001f64..0.999,
            n in 1u64..1000,
            t in 10u64..1_000_000,
            c in 0.0f64..5.0,
        ) {
            let q = klucb_index(p, n, t, c);
            prop_assert!(q >= p && q <= 1.0);
            let next = klucb_index(p, n + 1, t, c);
            prop_assert!(next <= q);
            // Away from the saturation at 1 the decrease is strict.
            if q < 1.0 - 1e-6 {
                prop_assert!(next < q);
            }
        }
    }
}
