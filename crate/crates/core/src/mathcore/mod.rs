//! Special functions, dimensional constants, quadrature rules and the
//! reproducible random-stream contract shared by every model.

mod quadrature;
mod rng;
mod special;

pub use quadrature::{integrate_adaptive, GaussLegendre};
pub use rng::{stream_id, RngStream};
pub use special::{beta_fn, gamma_ln, green_constant, unit_ball_volume, Dimension};
