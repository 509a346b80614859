//! Generalized symmetric eigenproblem K·φ = λ·M·φ on the free dofs.
//!
//! Both routes work on the shifted pencil A = K + c·M with c > 0 chosen
//! from the diagonal ratios, so free-free systems (singular K) factor
//! cleanly and the lowest eigenvalues keep full relative accuracy:
//!
//! * `Dense` factors A with nalgebra and diagonalizes L⁻¹·M·L⁻ᵀ.
//! * `Subspace` factors A in skyline storage and runs subspace iteration
//!   with Rayleigh–Ritz projection, which scales to the larger disk meshes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fem::assembly::{AssembledSystem, DofKind};
use crate::fem::skyline::SkylineMatrix;

/// Free-dof count above which `Auto` switches to subspace iteration.
pub const DENSE_LIMIT: usize = 600;
/// Acceptance threshold on the relative eigen-residual.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Modes with ‖Kφ‖ below this fraction of ‖K‖∞·‖φ‖ are treated as null-space modes.
pub const NULL_SPACE_FRACTION: f64 = 1e-11;
const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    #[default]
    Auto,
    Dense,
    Subspace,
}

/// One eigenpair on the full dof set (constrained dofs hold zeros).
#[derive(Debug, Clone, PartialEq)]
pub struct FemMode {
    pub eigenvalue: f64,
    pub frequency: f64,
    /// Normalized to unit maximum nodal displacement magnitude.
    pub vector: Vec<f64>,
    /// ‖Kφ − λMφ‖/‖Kφ‖; for null-space modes the normwise backward
    /// error ‖Kφ − λMφ‖/(‖K‖∞·‖φ‖) instead.
    pub residual: f64,
}

/// The `k` lowest modes, frequencies ascending.
pub fn solve_modes(sys: &AssembledSystem, k: usize) -> Result<Vec<FemMode>> {
    solve_modes_with(sys, k, EigenMethod::Auto)
}

pub fn solve_modes_with(
    sys: &AssembledSystem,
    k: usize,
    method: EigenMethod,
) -> Result<Vec<FemMode>> {
    let free = sys.free_dofs();
    if k == 0 || k > free.len() {
        return Err(Error::TooManyModes {
            requested: k,
            available: free.len(),
        });
    }
    let stiffness = sys.stiffness.submatrix(&free);
    let mass = sys.mass.submatrix(&free);
    let shift = 1e-8
        * (0..free.len())
            .map(|i| stiffness.diagonal(i) / mass.diagonal(i))
            .fold(0.0, f64::max);
    let use_dense = match method {
        EigenMethod::Dense => true,
        EigenMethod::Subspace => false,
        EigenMethod::Auto => free.len() <= DENSE_LIMIT,
    };
    let pairs = if use_dense {
        dense_pairs(&stiffness, &mass, shift, k)?
    } else {
        subspace_pairs(&stiffness, &mass, shift, k)?
    };

    let k_norm = stiffness.norm_inf();
    let mut modes = Vec::with_capacity(k);
    for (lambda, reduced) in pairs {
        let residual = residual(&stiffness, &mass, lambda, &reduced, k_norm);
        if !(residual < RESIDUAL_TOLERANCE) {
            return Err(Error::NoConvergence {
                iterations: MAX_ITERATIONS,
                residual,
            });
        }
        let mut vector = vec![0.0; sys.dof_map.len()];
        for (r, &d) in free.iter().enumerate() {
            vector[d] = reduced[r];
        }
        normalize_displacement(sys, &mut vector);
        modes.push(FemMode {
            eigenvalue: lambda,
            frequency: lambda.max(0.0).sqrt() / (2.0 * std::f64::consts::PI),
            vector,
            residual,
        });
    }
    Ok(modes)
}

fn residual(k: &SkylineMatrix, m: &SkylineMatrix, lambda: f64, phi: &[f64], k_norm: f64) -> f64 {
    let kphi = k.matvec(phi);
    let mphi = m.matvec(phi);
    let r: f64 = kphi
        .iter()
        .zip(&mphi)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let kphi_norm = kphi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let phi_norm = phi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if kphi_norm < NULL_SPACE_FRACTION * k_norm * phi_norm {
        r / (k_norm * phi_norm)
    } else {
        r / kphi_norm
    }
}

/// Scales so the largest nodal translation magnitude is 1 and that node's
/// largest component is positive.
fn normalize_displacement(sys: &AssembledSystem, vector: &mut [f64]) {
    let per = sys.dof_map.dofs_per_node;
    let mut best = (0.0, 0usize);
    for node in 0..vector.len() / per {
        let mag = (0..per)
            .filter(|&d| matches!(sys.dof_map.kinds[node * per + d], DofKind::Translation(_)))
            .map(|d| vector[node * per + d].powi(2))
            .sum::<f64>()
            .sqrt();
        if mag > best.0 * (1.0 + 1e-12) {
            best = (mag, node);
        }
    }
    if best.0 == 0.0 {
        return;
    }
    let node = best.1;
    let lead = (0..per)
        .filter(|&d| matches!(sys.dof_map.kinds[node * per + d], DofKind::Translation(_)))
        .map(|d| vector[node * per + d])
        .fold(0.0_f64, |a, v| if v.abs() > a.abs() { v } else { a });
    let scale = lead.signum() / best.0;
    vector.iter_mut().for_each(|v| *v *= scale);
}

fn dense_pairs(
    stiffness: &SkylineMatrix,
    mass: &SkylineMatrix,
    shift: f64,
    k: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let a = stiffness.add_scaled(shift, mass).to_dense();
    let m = mass.to_dense();
    let chol = a.cholesky().ok_or(Error::NotPositiveDefinite(0))?;
    let l = chol.l();
    // C = L⁻¹·M·L⁻ᵀ, eigenvalues 1/(λ + c)
    let linv_m = l
        .solve_lower_triangular(&m)
        .ok_or(Error::NotPositiveDefinite(0))?;
    let c = l
        .solve_lower_triangular(&linv_m.transpose())
        .ok_or(Error::NotPositiveDefinite(0))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let lt = l.transpose();
    order
        .into_iter()
        .take(k)
        .map(|i| {
            let mu = eig.eigenvalues[i];
            let y = eig.eigenvectors.column(i).into_owned();
            let phi = lt
                .solve_upper_triangular(&y)
                .ok_or(Error::NotPositiveDefinite(0))?;
            Ok((1.0 / mu - shift, phi.as_slice().to_vec()))
        })
        .collect()
}

/// Deterministic, well-spread start vectors: the diagonal of M, unit vectors
/// at the dofs with the smallest K/M diagonal ratio, and a fixed
/// quasi-random fill so no mode is orthogonal to the starting block.
fn start_block(stiffness: &SkylineMatrix, mass: &SkylineMatrix, p: usize) -> DMatrix<f64> {
    let n = stiffness.dim();
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        x[(i, 0)] = mass.diagonal(i);
    }
    let mut ratio: Vec<(f64, usize)> = (0..n)
        .map(|i| (stiffness.diagonal(i) / mass.diagonal(i), i))
        .collect();
    ratio.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for col in 1..p {
        for i in 0..n {
            // golden-ratio sequence, fixed for every run
            let t = ((i * 7919 + col * 104_729) as f64 * 0.618_033_988_749_895).fract();
            x[(i, col)] = 1e-3 * (t - 0.5) * mass.diagonal(i);
        }
        if let Some(&(_, dof)) = ratio.get(col - 1) {
            x[(dof, col)] += mass.diagonal(dof);
        }
    }
    x
}

fn mass_apply(mass: &SkylineMatrix, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for c in 0..x.ncols() {
        let col: Vec<f64> = x.column(c).iter().copied().collect();
        out.set_column(c, &DVector::from_vec(mass.matvec(&col)));
    }
    out
}

/// Solves the small dense pencil (a, b) and returns ν ascending with
/// b-orthonormal eigenvectors.
fn small_pencil(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let b = (b + b.transpose()) * 0.5;
    let chol = b.cholesky().ok_or(Error::NotPositiveDefinite(0))?;
    let l = chol.l();
    let t = l
        .solve_lower_triangular(a)
        .ok_or(Error::NotPositiveDefinite(0))?;
    let c = l
        .solve_lower_triangular(&t.transpose())
        .ok_or(Error::NotPositiveDefinite(0))?;
    let eig = SymmetricEigen::new((&c + c.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();
    let mut q = DMatrix::zeros(a.nrows(), order.len());
    let mut values = Vec::with_capacity(order.len());
    for (c, &i) in order.iter().enumerate() {
        values.push(eig.eigenvalues[i]);
        let v = lt
            .solve_upper_triangular(&eig.eigenvectors.column(i).into_owned())
            .ok_or(Error::NotPositiveDefinite(0))?;
        q.set_column(c, &v);
    }
    Ok((values, q))
}

fn subspace_pairs(
    stiffness: &SkylineMatrix,
    mass: &SkylineMatrix,
    shift: f64,
    k: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = stiffness.dim();
    let p = (2 * k).max(k + 8).min(n);
    let shifted = stiffness.add_scaled(shift, mass);
    let factor = shifted.cholesky()?;
    let k_norm = stiffness.norm_inf();

    let mut x = start_block(stiffness, mass, p);
    let mut previous: Option<Vec<f64>> = None;
    let mut worst = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        // Y = A⁻¹·M·X
        let mx = mass_apply(mass, &x);
        let mut y = DMatrix::zeros(n, p);
        for c in 0..p {
            let rhs: Vec<f64> = mx.column(c).iter().copied().collect();
            y.set_column(c, &DVector::from_vec(factor.solve(&rhs)));
        }
        // Rayleigh–Ritz on (A, M): Yᵀ·A·Y = Yᵀ·M·X, Yᵀ·M·Y
        let a_r = y.transpose() * &mx;
        let my = mass_apply(mass, &y);
        let m_r = y.transpose() * &my;
        let (nu, q) = small_pencil(&((&a_r + a_r.transpose()) * 0.5), &m_r)?;
        x = &y * &q;

        // rigid-body Ritz values sit at the shift and jitter at roundoff, so
        // the tolerance is scaled by the largest wanted value
        let scale = nu[k - 1].abs();
        let settled = previous
            .as_ref()
            .is_some_and(|prev| (0..k).all(|i| (nu[i] - prev[i]).abs() <= 1e-13 * scale));
        previous = Some(nu.clone());
        if settled {
            let pairs: Vec<(f64, Vec<f64>)> = (0..k)
                .map(|i| (nu[i] - shift, x.column(i).iter().copied().collect()))
                .collect();
            worst = pairs
                .iter()
                .map(|(l, v)| residual(stiffness, mass, *l, v, k_norm))
                .fold(0.0, f64::max);
            if worst < 1e-2 * RESIDUAL_TOLERANCE {
                return Ok(pairs);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: worst,
    })
}
