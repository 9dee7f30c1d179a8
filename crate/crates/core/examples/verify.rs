//! Kernel self-checks against the exact oracles.

fn main() -> scent::Result<()> {
    for c in scent::experiment::verify_all(0)? {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
