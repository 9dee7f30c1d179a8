use proptest::prelude::*;

use scent::dual_updates::{bregman_exp, dual_gap, dual_sgd_step, sox_step, spmd_step, spmd_step_batch};
use scent::logexp::{logaddexp, logmeanexp};
use scent::oracle::prox_bruteforce;
use scent::{Alpha, StepSchedule};

fn scale(x: f64) -> f64 {
    1.0 + x.abs()
}

proptest! {
    #[test]
    fn closed_form_matches_bisection(nu in -15.0..15.0f64, s in -15.0..15.0f64, ln_a in -10.0..10.0f64) {
        let got = spmd_step(nu, s, Alpha::from_ln(ln_a));
        let want = prox_bruteforce(nu, s, ln_a.exp());
        prop_assert!((got - want).abs() <= 1e-9 * scale(want), "{got} vs {want}");
    }

    #[test]
    fn step_is_a_convex_combination_of_exponentials(nu in -20.0..20.0f64, s in -20.0..20.0f64, ln_a in -12.0..12.0f64) {
        // e^{nu_new} = w e^s + (1 - w) e^{nu} with w = a e^nu / (1 + a e^nu)
        let x = ln_a + nu;
        let lw = -logaddexp(0.0, -x);
        let l1w = -logaddexp(0.0, x);
        let want = logaddexp(lw + s, l1w + nu);
        let got = spmd_step(nu, s, Alpha::from_ln(ln_a));
        prop_assert!((got - want).abs() <= 1e-12 * scale(want));
        prop_assert!(got >= nu.min(s) - 1e-12 && got <= nu.max(s) + 1e-12);
    }

    #[test]
    fn larger_steps_move_closer_to_the_sample(nu in -10.0..10.0f64, s in -10.0..10.0f64, a in -8.0..8.0f64, b in -8.0..8.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let near = spmd_step(nu, s, Alpha::from_ln(hi));
        let far = spmd_step(nu, s, Alpha::from_ln(lo));
        prop_assert!((near - s).abs() <= (far - s).abs() + 1e-12);
        prop_assert_eq!(spmd_step(nu, s, Alpha::Infinite), s);
    }

    #[test]
    fn bregman_is_nonnegative_and_vanishes_on_the_diagonal(a in -30.0..30.0f64, b in -30.0..30.0f64) {
        prop_assert!(bregman_exp(a, b) >= 0.0);
        prop_assert_eq!(bregman_exp(a, a), 0.0);
    }

    #[test]
    fn dual_gap_is_scaled_bregman(log_m in -5.0..5.0f64, nu in -5.0..5.0f64) {
        let want = log_m.exp() * bregman_exp(nu, log_m);
        prop_assert!((dual_gap(log_m, nu) - want).abs() <= 1e-12 * scale(want));
    }

    #[test]
    fn clamped_sgd_stays_in_bounds(nu in -5.0..5.0f64, s in -5.0..5.0f64, a in 1e-3..1e2f64, c0 in -3.0..0.0f64, w in 0.0..3.0f64) {
        let c1 = c0 + w;
        let nu0 = nu.clamp(c0, c1);
        let next = dual_sgd_step(nu0, s, a, Some((c0, c1))).unwrap();
        prop_assert!(next >= c0 && next <= c1);
    }

    #[test]
    fn sox_rate_is_a_moving_average(nu in -15.0..15.0f64, s in -15.0..15.0f64, g in 1e-4..1.0f64) {
        // alpha = gamma' e^{-nu} with gamma' = g / (1 - g)
        let gp = g / (1.0 - g);
        let via_rate = spmd_step(nu, s, StepSchedule::SoxRate { gamma_prime: gp }.alpha(1, nu).unwrap());
        let via_sox = sox_step(nu, s, g).unwrap();
        let direct = ((1.0 - g) * nu.exp() + g * s.exp()).ln();
        prop_assert!((via_rate - via_sox).abs() <= 1e-11 * scale(via_sox));
        prop_assert!((via_sox - direct).abs() <= 1e-11 * scale(direct));
    }

    #[test]
    fn batch_step_uses_log_mean_exp(nu in -5.0..5.0f64, xs in prop::collection::vec(-8.0..8.0f64, 1..20), ln_a in -4.0..4.0f64) {
        let a = Alpha::from_ln(ln_a);
        prop_assert_eq!(spmd_step_batch(nu, &xs, a).unwrap(), spmd_step(nu, logmeanexp(&xs), a));
    }

    #[test]
    fn shift_equivariance(nu in -5.0..5.0f64, s in -5.0..5.0f64, ln_a in -5.0..5.0f64, c in -20.0..20.0f64) {
        // shifting s and nu by c is the same as scaling alpha by e^{-c}
        let base = spmd_step(nu, s, Alpha::from_ln(ln_a));
        let shifted = spmd_step(nu + c, s + c, Alpha::from_ln(ln_a - c));
        prop_assert!((shifted - c - base).abs() <= 1e-10 * scale(c));
    }
}
