//! Stochastic simulation of the particle systems and diffusions, and the
//! expectation form of duality checked by sampling both sides.
//!
//! Jump processes run as Gillespie chains with rates read off the direct
//! generator. Diffusions use Euler–Maruyama with one Brownian driver per
//! site pair, so every step moves mass between two sites and Σx is
//! conserved exactly.

mod ctmc;
mod duality;
mod estimate;
mod rng;
mod sde;
mod state;

pub use ctmc::Ctmc;
pub use duality::{mc_duality, McConfig, McDuality, MC_SIGMAS};
pub use estimate::{McEstimate, Moments};
pub use rng::trajectory_rng;
pub use sde::{Sde, MAX_HALVINGS};
pub use state::{State, Trajectory};
