//! Element matrices and global assembly.
//!
//! Beams use 2-node Hermite elements (transverse displacement and rotation
//! per node) with the consistent mass matrix. Disks use 3-node constant
//! strain triangles in plane stress, also with consistent mass.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::fem::mesh::{mesh_beam, Mesh, MeshKind};
use crate::fem::skyline::SkylineMatrix;
use crate::geometry::{BeamGeometry, DiskGeometry};
use crate::material::Material;

/// Physical meaning of one degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    /// Displacement along axis 0 (x) or 1 (y / transverse).
    Translation(u8),
    Rotation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub dofs_per_node: usize,
    pub kinds: Vec<DofKind>,
}

impl DofMap {
    pub fn node_of(&self, dof: usize) -> usize {
        dof / self.dofs_per_node
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }
}

/// Global stiffness and mass with bookkeeping. Both matrices share one
/// skyline profile and are symmetric by storage.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub stiffness: SkylineMatrix,
    pub mass: SkylineMatrix,
    pub dof_map: DofMap,
    pub constraints: BTreeSet<usize>,
    pub mesh: Mesh,
}

impl AssembledSystem {
    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.dof_map.len())
            .filter(|d| !self.constraints.contains(d))
            .collect()
    }

    pub fn without_constraints(&self) -> Self {
        Self {
            constraints: BTreeSet::new(),
            ..self.clone()
        }
    }
}

fn profile_for(mesh: &Mesh, dofs_per_node: usize) -> Vec<usize> {
    let n = mesh.nodes().len() * dofs_per_node;
    let mut first: Vec<usize> = (0..n).collect();
    for conn in mesh.elements() {
        let lowest = conn.iter().min().copied().unwrap_or(0) * dofs_per_node;
        for &node in conn {
            for d in 0..dofs_per_node {
                let dof = node * dofs_per_node + d;
                first[dof] = first[dof].min(lowest);
            }
        }
    }
    first
}

fn scatter(target: &mut SkylineMatrix, dofs: &[usize], local: &[f64], size: usize) {
    for a in 0..size {
        for b in 0..=a {
            let (i, j) = (dofs[a], dofs[b]);
            if i >= j {
                target.add(i, j, local[a * size + b]);
            } else {
                target.add(j, i, local[a * size + b]);
            }
        }
    }
}

/// (stiffness, mass) of one Hermite beam element, row-major 4×4 over
/// (w₁, θ₁, w₂, θ₂).
pub fn beam_element(ei: f64, rho_a: f64, h: f64) -> ([f64; 16], [f64; 16]) {
    let k = ei / h.powi(3);
    let h2 = h * h;
    let stiffness = [
        12.0,
        6.0 * h,
        -12.0,
        6.0 * h, //
        6.0 * h,
        4.0 * h2,
        -6.0 * h,
        2.0 * h2, //
        -12.0,
        -6.0 * h,
        12.0,
        -6.0 * h, //
        6.0 * h,
        2.0 * h2,
        -6.0 * h,
        4.0 * h2,
    ]
    .map(|v| v * k);
    let m = rho_a * h / 420.0;
    let mass = [
        156.0,
        22.0 * h,
        54.0,
        -13.0 * h, //
        22.0 * h,
        4.0 * h2,
        13.0 * h,
        -3.0 * h2, //
        54.0,
        13.0 * h,
        156.0,
        -22.0 * h, //
        -13.0 * h,
        -3.0 * h2,
        -22.0 * h,
        4.0 * h2,
    ]
    .map(|v| v * m);
    (stiffness, mass)
}

/// Clamped-clamped beam, `n_elements` uniform elements, bending about the
/// axis selected by the geometry's vibration axis.
pub fn assemble_beam(
    geom: &BeamGeometry,
    mat: &Material,
    n_elements: usize,
) -> Result<AssembledSystem> {
    let mesh = mesh_beam(geom.length(), n_elements)?;
    let ei = mat.youngs_modulus() * geom.second_moment();
    let rho_a = mat.density() * geom.area();
    let first = profile_for(&mesh, 2);
    let mut stiffness = SkylineMatrix::zeros(first.clone());
    let mut mass = SkylineMatrix::zeros(first);
    for (e, conn) in mesh.elements().iter().enumerate() {
        let (ke, me) = beam_element(ei, rho_a, mesh.element_size(e));
        let dofs = [2 * conn[0], 2 * conn[0] + 1, 2 * conn[1], 2 * conn[1] + 1];
        scatter(&mut stiffness, &dofs, &ke, 4);
        scatter(&mut mass, &dofs, &me, 4);
    }
    let n_nodes = mesh.nodes().len();
    let kinds = (0..n_nodes)
        .flat_map(|_| [DofKind::Translation(1), DofKind::Rotation])
        .collect();
    let last = 2 * (n_nodes - 1);
    Ok(AssembledSystem {
        stiffness,
        mass,
        dof_map: DofMap {
            dofs_per_node: 2,
            kinds,
        },
        constraints: [0, 1, last, last + 1].into_iter().collect(),
        mesh,
    })
}

/// (stiffness, mass) of a constant-strain triangle, row-major 6×6 over
/// (u₁, v₁, u₂, v₂, u₃, v₃).
pub fn triangle_element(
    nodes: [[f64; 2]; 3],
    mat: &Material,
    thickness: f64,
) -> ([f64; 36], [f64; 36]) {
    let [p0, p1, p2] = nodes;
    let twice_area = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    let area = 0.5 * twice_area;
    let b = [p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]];
    let c = [p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]];
    // strain-displacement rows (εxx, εyy, γxy), scaled by 1/(2A)
    let mut bm = [[0.0; 6]; 3];
    for k in 0..3 {
        bm[0][2 * k] = b[k] / twice_area;
        bm[1][2 * k + 1] = c[k] / twice_area;
        bm[2][2 * k] = c[k] / twice_area;
        bm[2][2 * k + 1] = b[k] / twice_area;
    }
    let (e, nu) = (mat.youngs_modulus(), mat.poisson_ratio());
    let f = e / (1.0 - nu * nu);
    let d = [
        [f, f * nu, 0.0],
        [f * nu, f, 0.0],
        [0.0, 0.0, f * (1.0 - nu) / 2.0],
    ];
    let mut stiffness = [0.0; 36];
    for i in 0..6 {
        for j in 0..6 {
            let mut s = 0.0;
            for p in 0..3 {
                for q in 0..3 {
                    s += bm[p][i] * d[p][q] * bm[q][j];
                }
            }
            stiffness[i * 6 + j] = s * thickness * area;
        }
    }
    let mut mass = [0.0; 36];
    let m = mat.density() * thickness * area / 12.0;
    for a in 0..3 {
        for bb in 0..3 {
            let v = if a == bb { 2.0 * m } else { m };
            mass[(2 * a) * 6 + 2 * bb] = v;
            mass[(2 * a + 1) * 6 + 2 * bb + 1] = v;
        }
    }
    (stiffness, mass)
}

/// Free (unconstrained) plane-stress disk on the given triangle mesh.
pub fn assemble_disk(geom: &DiskGeometry, mat: &Material, mesh: &Mesh) -> Result<AssembledSystem> {
    if mesh.kind() != MeshKind::PlaneStress2d {
        return Err(crate::error::invariant(
            "mesh",
            "disk assembly needs a triangle mesh",
        ));
    }
    let first = profile_for(mesh, 2);
    let mut stiffness = SkylineMatrix::zeros(first.clone());
    let mut mass = SkylineMatrix::zeros(first);
    for conn in mesh.elements() {
        let pts = [
            mesh.nodes()[conn[0]],
            mesh.nodes()[conn[1]],
            mesh.nodes()[conn[2]],
        ];
        let (ke, me) = triangle_element(pts, mat, geom.thickness());
        let dofs = [
            2 * conn[0],
            2 * conn[0] + 1,
            2 * conn[1],
            2 * conn[1] + 1,
            2 * conn[2],
            2 * conn[2] + 1,
        ];
        scatter(&mut stiffness, &dofs, &ke, 6);
        scatter(&mut mass, &dofs, &me, 6);
    }
    let kinds = (0..mesh.nodes().len())
        .flat_map(|_| [DofKind::Translation(0), DofKind::Translation(1)])
        .collect();
    Ok(AssembledSystem {
        stiffness,
        mass,
        dof_map: DofMap {
            dofs_per_node: 2,
            kinds,
        },
        constraints: BTreeSet::new(),
        mesh: mesh.clone(),
    })
}
