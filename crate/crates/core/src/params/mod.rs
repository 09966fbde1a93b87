//! The weighted density series f•, its finite truncations, a subsampling
//! tester, and the experiment showing that low-order densities do not force
//! its value.

mod fbullet;
mod forcing;
mod oscillating;
mod tester;

pub use fbullet::{f_bullet, FBulletParam, GammaWitness};
pub use forcing::{forcing_failure_experiment, ForcingReport, OrderGaps};
pub use oscillating::build_oscillating_param;
pub use tester::{estimate_by_subsampling, SubsampleEstimate, TesterConfig};
