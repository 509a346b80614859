//! Design and analysis toolkit for electrostatically transduced MEMS/NEMS
//! resonators: analytic and FEM modal models, equivalent-circuit extraction,
//! capacitive and MOS readout comparison, fabrication gap corrections and
//! sizing against application profiles.

pub mod analytic;
pub mod constants;
pub mod design;
pub mod error;
pub mod fab;
pub mod fem;
pub mod geometry;
pub mod material;
pub mod mode;
pub mod transducer;
pub mod transduction;
pub mod units;

mod roots;

pub use error::{Error, Result};
pub use geometry::{BeamGeometry, DiskGeometry, Geometry, VibrationAxis};
pub use material::{load_material, Material};
pub use mode::ModeResult;
pub use transducer::{Detection, MosParams, Transducer};
