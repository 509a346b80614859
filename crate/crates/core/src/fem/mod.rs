//! Finite-element modal solver: Hermite beam elements, plane-stress
//! triangles, skyline storage and a generalized symmetric eigensolver.

pub mod assembly;
pub mod eigen;
pub mod mesh;
pub mod modal;
pub mod skyline;

pub use assembly::{assemble_beam, assemble_disk, AssembledSystem, DofKind, DofMap};
pub use eigen::{solve_modes, solve_modes_with, EigenMethod, FemMode};
pub use mesh::{mesh_beam, mesh_disk, Mesh, MeshKind};
pub use modal::{
    beam_modal_fem, disk_fem_mode_of_order, disk_modal_fem, identify_angular_order, mode_shape_csv,
    DiskFemMode,
};
