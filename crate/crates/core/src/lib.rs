//! Planar-pushing reinforcement learning at desk scale.
//!
//! A 2D push-physics world with randomized objects, a velocity-command
//! robot, teacher/student history encoders trained with regularized
//! online adaptation, PPO with hand-written gradients, and an evaluation
//! harness with a five-criteria success protocol.

pub mod check;
pub mod envgen;
pub mod error;
pub mod eval;
pub mod math;
pub mod nn;
pub mod obs;
pub mod physics;
pub mod reward;
pub mod rl;
pub mod runconfig;

pub use error::{Error, Result};
pub use math::{Mat3, Vec2};
pub use physics::{ObjectSpec, Pose2, ServoModel, Shape, SimConfig, Twist2, WorldState};
