//! Fairness and goodness scores on weighted signed networks, with the attack,
//! bound and axiom machinery built on top of them.

pub mod attacks;
pub mod axioms;
pub mod bounds;
pub mod campaign;
pub mod data;
pub mod error;
pub mod fga;
pub mod wsn;

pub use error::{Error, Result};
pub use fga::{compute_fga, predict_weight, recompute_after, FgaConfig, FgaScores};
pub use wsn::{normalize_rating, MoveKind, NodeId, RatingScale, Wsn};
