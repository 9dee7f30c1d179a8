//! The two-point pair used for the lower bound: both laws have the same
//! support, and their dual optima are separated by order `1/sqrt(T)`.

use scent::problems::hard_instance_pair;

fn main() -> scent::Result<()> {
    let kappa = 4.0;
    for t in [100u64, 10_000, 1_000_000] {
        let (p0, p1) = hard_instance_pair(kappa, t)?;
        let sep = (p1.stats.nu_star - p0.stats.nu_star).abs();
        let need = (kappa - 1.0) / (32.0 * (kappa * t as f64).sqrt());
        println!(
            "T={t:>8}: m0={:.4} m1={:.6} ratio0={:.4} separation={sep:.3e} >= {need:.3e}",
            p0.stats.m, p1.stats.m, p0.stats.kappa
        );
    }
    Ok(())
}
