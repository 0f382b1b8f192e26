//! Exact verification toolkit for twisted and bulk-deformed Fukaya-type
//! A-infinity categories.

pub mod ainfty;
pub mod coeff;
pub mod deform;
pub mod io;
pub mod linalg;
pub mod model;
pub mod picard;
pub mod pipeline;
pub mod registry;
pub mod trees;
