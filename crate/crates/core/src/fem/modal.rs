use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{invariant, Error, Result};
use crate::fem::assembly::{assemble_beam, assemble_disk, AssembledSystem};
use crate::fem::eigen::{solve_modes, FemMode};
use crate::fem::mesh::{mesh_disk, Mesh, MeshKind};
use crate::geometry::{BeamGeometry, DiskGeometry};
use crate::material::Material;
use crate::mode::ModeResult;

/// Number of rigid-body modes of a free plane body.
pub const PLANE_RIGID_MODES: usize = 3;
/// Eigenvalues below this fraction of the first elastic one count as rigid.
pub const RIGID_FRACTION: f64 = 1e-6;
/// Elastic disk modes returned besides the rigid ones.
pub const DISK_ELASTIC_MODES: usize = 9;
/// Harmonic pairs closer than this energy ratio are ambiguous.
const AMBIGUITY_RATIO: f64 = 0.9;

/// Acceptance mesh for disk runs: edge R/16.
pub const DISK_MESH_DIVISIONS: usize = 16;

/// Beam modes; effective mass is φᵀMφ for the unit-maximum vector, i.e.
/// referred to the point of peak deflection.
pub fn beam_modal_fem(
    geom: &BeamGeometry,
    mat: &Material,
    n_elements: usize,
    k: usize,
) -> Result<(AssembledSystem, Vec<FemMode>, Vec<ModeResult>)> {
    let sys = assemble_beam(geom, mat, n_elements)?;
    let modes = solve_modes(&sys, k)?;
    let results = modes
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mass = sys.mass.bilinear(&m.vector, &m.vector);
            let shape = m.vector.iter().step_by(2).copied().collect();
            ModeResult::new(m.frequency, i + 1, mass, shape)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((sys, modes, results))
}

/// Count of leading eigenvalues below `RIGID_FRACTION` × the first elastic eigenvalue.
pub fn rigid_mode_count(modes: &[FemMode]) -> usize {
    let top = modes.iter().map(|m| m.eigenvalue).fold(0.0, f64::max);
    let first_elastic = modes
        .iter()
        .map(|m| m.eigenvalue)
        .find(|&l| l > RIGID_FRACTION * top)
        .unwrap_or(top);
    modes
        .iter()
        .filter(|m| m.eigenvalue < RIGID_FRACTION * first_elastic)
        .count()
}

/// Elastic disk mode with its raw FEM vector.
#[derive(Debug, Clone)]
pub struct DiskFemMode {
    pub mode: ModeResult,
    pub fem: FemMode,
    /// Dominant harmonic, or the leading candidate when identification was ambiguous.
    pub angular_order: usize,
    pub ambiguous: bool,
}

/// Free-disk in-plane modes on `mesh`. Rigid modes are discarded; each
/// elastic mode carries its angular order and an effective mass referred
/// to the peak rim radial displacement.
pub fn disk_modal_fem(
    geom: &DiskGeometry,
    mat: &Material,
    mesh: &Mesh,
) -> Result<Vec<DiskFemMode>> {
    let sys = assemble_disk(geom, mat, mesh)?;
    let modes = solve_modes(&sys, PLANE_RIGID_MODES + DISK_ELASTIC_MODES)?;
    let rigid = rigid_mode_count(&modes);
    if rigid != PLANE_RIGID_MODES {
        return Err(Error::RigidBodyCount {
            found: rigid,
            expected: PLANE_RIGID_MODES,
        });
    }
    let rim = mesh.rim_nodes();
    modes
        .into_iter()
        .skip(rigid)
        .map(|fem| {
            let (angular_order, ambiguous) = match identify_angular_order(&fem.vector, mesh) {
                Ok(n) => (n, false),
                Err(Error::AmbiguousOrder { first, .. }) => (first, true),
                Err(e) => return Err(e),
            };
            let rim_peak = rim
                .iter()
                .map(|&i| radial_at(mesh, &fem.vector, i).abs())
                .fold(0.0, f64::max);
            let modal_mass = sys.mass.bilinear(&fem.vector, &fem.vector);
            let mode = ModeResult::new(
                fem.frequency,
                angular_order,
                modal_mass / (rim_peak * rim_peak),
                fem.vector.clone(),
            )?;
            Ok(DiskFemMode {
                mode,
                fem,
                angular_order,
                ambiguous,
            })
        })
        .collect()
}

/// First elastic mode with angular order `n` from a mesh with edge R/divisions.
pub fn disk_fem_mode_of_order(
    geom: &DiskGeometry,
    mat: &Material,
    divisions: usize,
    n: usize,
) -> Result<DiskFemMode> {
    let mesh = mesh_disk(geom, geom.radius() / divisions as f64)?;
    disk_modal_fem(geom, mat, &mesh)?
        .into_iter()
        .find(|m| m.angular_order == n && !m.ambiguous)
        .ok_or_else(|| invariant("mesh", format!("no mode of angular order {n} found")))
}

fn radial_at(mesh: &Mesh, vector: &[f64], node: usize) -> f64 {
    let [x, y] = mesh.nodes()[node];
    let theta = y.atan2(x);
    vector[2 * node] * theta.cos() + vector[2 * node + 1] * theta.sin()
}

fn tangential_at(mesh: &Mesh, vector: &[f64], node: usize) -> f64 {
    let [x, y] = mesh.nodes()[node];
    let theta = y.atan2(x);
    -vector[2 * node] * theta.sin() + vector[2 * node + 1] * theta.cos()
}

/// Share of mean-square per harmonic 0..=max of samples on a closed curve.
fn harmonic_energies(samples: &[(f64, f64)]) -> Vec<f64> {
    let count = samples.len();
    let max_harmonic = count / 2;
    let weights: Vec<f64> = (0..count)
        .map(|j| {
            let prev = samples[(j + count - 1) % count].0;
            let next = samples[(j + 1) % count].0;
            let mut span = next - prev;
            if span <= 0.0 {
                span += 2.0 * PI;
            }
            0.5 * span
        })
        .collect();
    (0..=max_harmonic)
        .map(|m| {
            let (mut a, mut b) = (0.0, 0.0);
            for ((theta, u), w) in samples.iter().zip(&weights) {
                a += w * u * (m as f64 * theta).cos();
                b += w * u * (m as f64 * theta).sin();
            }
            if m == 0 {
                (a / (2.0 * PI)).powi(2)
            } else {
                (a * a + b * b) / (2.0 * PI * PI)
            }
        })
        .collect()
}

/// Dominant harmonic of the rim radial displacement.
///
/// Falls back on the tangential displacement when the radial part carries
/// no energy (torsional motion). Two harmonics within 10% energy of each
/// other give `Error::AmbiguousOrder`.
pub fn identify_angular_order(vector: &[f64], mesh: &Mesh) -> Result<usize> {
    if mesh.kind() != MeshKind::PlaneStress2d || vector.len() != 2 * mesh.nodes().len() {
        return Err(invariant(
            "mode",
            "angular order needs a plane mode on a disk mesh",
        ));
    }
    let mut rim: Vec<(f64, usize)> = mesh
        .rim_nodes()
        .into_iter()
        .map(|i| {
            let [x, y] = mesh.nodes()[i];
            let t = y.atan2(x);
            (if t < 0.0 { t + 2.0 * PI } else { t }, i)
        })
        .collect();
    rim.sort_by(|a, b| a.0.total_cmp(&b.0));
    if rim.len() < 4 {
        return Err(invariant("mesh", "rim has too few nodes"));
    }
    let radial: Vec<(f64, f64)> = rim
        .iter()
        .map(|&(t, i)| (t, radial_at(mesh, vector, i)))
        .collect();
    let tangential: Vec<(f64, f64)> = rim
        .iter()
        .map(|&(t, i)| (t, tangential_at(mesh, vector, i)))
        .collect();
    let mut energy = harmonic_energies(&radial);
    let total_r: f64 = energy.iter().sum();
    let tang = harmonic_energies(&tangential);
    if total_r < 1e-8 * tang.iter().sum::<f64>() {
        energy = tang;
    }
    let mut ranked: Vec<(f64, usize)> = energy.iter().copied().zip(0..).collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let (top, second) = (ranked[0], ranked[1]);
    if !(top.0 > 0.0) {
        return Err(invariant("mode", "rim displacement is identically zero"));
    }
    if second.0 >= AMBIGUITY_RATIO * top.0 {
        return Err(Error::AmbiguousOrder {
            first: top.1,
            second: second.1,
        });
    }
    Ok(top.1)
}

/// CSV of nodal displacements: `node,x,y,ux,uy` for plane meshes,
/// `node,x,w,theta` for beams.
pub fn mode_shape_csv(mesh: &Mesh, vector: &[f64]) -> String {
    let mut out = String::new();
    match mesh.kind() {
        MeshKind::PlaneStress2d => {
            out.push_str("node,x,y,ux,uy\n");
            for (i, p) in mesh.nodes().iter().enumerate() {
                writeln!(
                    out,
                    "{i},{:e},{:e},{:e},{:e}",
                    p[0],
                    p[1],
                    vector[2 * i],
                    vector[2 * i + 1]
                )
                .unwrap();
            }
        }
        MeshKind::Beam1d => {
            out.push_str("node,x,w,theta\n");
            for (i, p) in mesh.nodes().iter().enumerate() {
                writeln!(
                    out,
                    "{i},{:e},{:e},{:e}",
                    p[0],
                    vector[2 * i],
                    vector[2 * i + 1]
                )
                .unwrap();
            }
        }
    }
    out
}
