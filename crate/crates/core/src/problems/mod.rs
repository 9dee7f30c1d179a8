//! Concrete problem instances.

mod dual_only;
mod kldro;
mod multiclass;
mod pauc;
mod synth;

pub use dual_only::{hard_instance_pair, DistributionStats, DualDist, DualOnlyProblem};
pub use kldro::{kldro_problem, KlDroProblem};
pub use multiclass::{multiclass_ce_problem, MulticlassProblem, Negatives};
pub use pauc::{pauc_problem, PaucProblem};
pub use synth::{synth_multiclass, synth_pauc, synth_regression};
