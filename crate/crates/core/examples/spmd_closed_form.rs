//! The dual proximal step in closed form, against bisection, for a few
//! step sizes. Larger steps move `nu` closer to the sample.

use scent::dual_updates::{bregman_exp, spmd_step};
use scent::oracle::prox_bruteforce;
use scent::Alpha;

fn main() {
    let (nu, s) = (0.5, 2.0);
    println!("nu_prev = {nu}, s = {s}");
    println!("{:>8} {:>14} {:>14} {:>10}", "ln a", "closed form", "bisection", "D(new, old)");
    for ln_a in [-6.0, -2.0, 0.0, 2.0, 6.0] {
        let got = spmd_step(nu, s, Alpha::from_ln(ln_a));
        let want = prox_bruteforce(nu, s, f64::exp(ln_a));
        println!("{ln_a:>8} {got:>14.10} {want:>14.10} {:>10.3e}", bregman_exp(got, nu));
    }
    println!("infinite step: {}", spmd_step(nu, s, Alpha::Infinite));
}
