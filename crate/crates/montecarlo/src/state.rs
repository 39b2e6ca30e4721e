use duality_core::processes::Family;
use serde::{Deserialize, Serialize};

/// A configuration of a particle system or a diffusion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum State {
    Lattice(Vec<i64>),
    Continuum(Vec<f64>),
}

impl State {
    pub fn len(&self) -> usize {
        match self {
            State::Lattice(v) => v.len(),
            State::Continuum(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> f64 {
        match self {
            State::Lattice(v) => v.iter().sum::<i64>() as f64,
            State::Continuum(v) => v.iter().sum(),
        }
    }

    pub fn as_lattice(&self) -> Option<&[i64]> {
        match self {
            State::Lattice(v) => Some(v),
            State::Continuum(_) => None,
        }
    }

    pub fn as_continuum(&self) -> Option<&[f64]> {
        match self {
            State::Continuum(v) => Some(v),
            State::Lattice(_) => None,
        }
    }
}

/// A recorded path: `states[i]` holds on `[times[i], times[i+1])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub family: Family,
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub seed: u64,
}

impl Trajectory {
    pub fn last(&self) -> Option<&State> {
        self.states.last()
    }
}
