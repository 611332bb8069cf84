//! Visibility radius laws for random obstacle models.
//!
//! Three obstacle families are covered: the Poisson-Boolean model of balls,
//! the Poisson cylinder model and Brownian interlacements. For each one the
//! crate computes the exact conditional law of the visibility radius where a
//! closed form exists, simulates it by sampling scenes, and compares both with
//! the exponential limit law.

mod error;

pub mod boolean_model;
pub mod cylinder_model;
pub mod geometry;
pub mod interlacements;
pub mod limitlaw;
pub mod mathcore;
pub mod scene;
pub mod simharness;

pub use error::{Error, Result};
pub use geometry::{ConeSpec, ObstacleBall, ObstacleLine, SegmentToTarget, ThickenedCone, Vect};
pub use mathcore::{Dimension, RngStream};
pub use scene::{sample_q, Obstacle, ObstacleScene, SamplingWindow};
