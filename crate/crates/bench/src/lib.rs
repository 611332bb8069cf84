//! Benchmark fixtures shared by the criterion targets.

use vislab_core::boolean_model::BooleanParams;
use vislab_core::cylinder_model::CylinderParams;
use vislab_core::{Dimension, Result};

pub fn boolean_fixture(d: u32) -> Result<BooleanParams> {
    BooleanParams::new(0.05, "const:1".parse()?, Dimension::new(d)?)
}

pub fn cylinder_fixture(d: u32) -> Result<CylinderParams> {
    CylinderParams::new(1.0, 1.0, Dimension::new(d)?)
}
