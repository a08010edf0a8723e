//! Multi-swarm consensus-based optimization for continuous multi-objective
//! problems.
//!
//! Several particle swarms each minimize a weighted-sum scalarization of the
//! objectives. The swarms' weight vectors repel each other, and each swarm's
//! consensus point is steered away from outcomes already claimed by other
//! swarms, so together they spread out along the Pareto front.
//!
//! ```no_run
//! use mscbo::{dynamics, problems};
//!
//! let problem = problems::schaffer1();
//! let out = dynamics::run(&problem, &dynamics::RunConfig::default()).unwrap();
//! let front = out.approximation.nondominated_points();
//! let hv = mscbo::indicators::hypervolume(&front, problem.hv_ref()).unwrap();
//! println!("{} points, hypervolume {hv:.4}", front.len());
//! ```

pub mod cli;
pub mod dynamics;
mod error;
pub mod indicators;
pub mod interaction;
pub mod noise;
pub mod problems;
pub mod scalarize;

pub use dynamics::{run, RunConfig, RunOutput, SwarmState, Variant, WeightInit};
pub use error::{Error, Result};
pub use problems::Problem;
