//! Grid search with local refinement, minimizing the as-fabricated R_x.
//!
//! The free parameters are the cross-section (width and thickness for a
//! beam, thickness for a disk), the drawn gap and the bias. The length or
//! radius is not gridded: for each parameter point it is solved by
//! bisection so the operating frequency lands on a target. Targets are the
//! centre and both inner edges of the tolerance band (or of each band),
//! since R_x varies monotonically with frequency at fixed cross-section and
//! the best point often sits on an edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analytic::{beam_effective_params, disk_mode, BeamModeCoefficient};
use crate::design::candidate::{DesignCandidate, DesignInputs};
use crate::design::check::{check_spec, Tolerances};
use crate::design::profile::{FrequencyTarget, Interval, SpecProfile};
use crate::error::{invariant, Error, Result};
use crate::fab::ProcessModel;
use crate::geometry::{BeamGeometry, DiskGeometry, Geometry, VibrationAxis};
use crate::material::Material;
use crate::mode::ModeResult;
use crate::transducer::{Detection, Transducer};

/// Largest admissible V_p / V_PI.
pub const PULL_IN_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Beam,
    Disk,
}

/// Parameter box. `size` is the beam length or disk radius; `width` is
/// ignored for disks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub family: Family,
    pub vibration_axis: VibrationAxis,
    pub size: Interval,
    pub width: Option<Interval>,
    pub thickness: Interval,
    pub drawn_gap: Interval,
    pub bias_voltage: Interval,
}

/// Fixed parts of the design and the parameter box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpace {
    pub bounds: Bounds,
    pub material: Material,
    /// Falls back on the profile's Q requirement.
    pub assumed_q: Option<f64>,
    pub tunnel_depth: f64,
    pub drive_voltage: f64,
    /// Electrode area as a fraction of the facing area (beam: L × breadth)
    /// or of the rim area (disk). Defaults: 1 for beams, 1/4 for disks.
    pub electrode_fraction: Option<f64>,
    pub gap_rel_permittivity: f64,
    pub detection: Detection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerSettings {
    /// Samples per gridded parameter.
    pub grid_points: usize,
    /// Step halvings during refinement.
    pub refinement_levels: usize,
    /// Best grid points used as refinement seeds.
    pub refine_top: usize,
    pub max_results: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_points: 5,
            refinement_levels: 8,
            refine_top: 4,
            max_results: 10,
        }
    }
}

/// Cheap modal model: frequency coefficient and mass fraction computed once.
struct ModalScaling {
    family: Family,
    axis: VibrationAxis,
    density: f64,
    // beam: f = coefficient·depth/L²; disk: f = coefficient/R
    coefficient: f64,
    // m_eff over the body mass (beam ρAL, disk ρπR²t)
    mass_fraction: f64,
}

impl ModalScaling {
    fn new(space: &DesignSpace) -> Result<Self> {
        let mat = &space.material;
        let b = &space.bounds;
        match b.family {
            Family::Beam => {
                let probe = BeamGeometry::new(10.0, 1.0, 1.0, b.vibration_axis)?;
                let (m, _) = beam_effective_params(&probe, mat, 1, 0.5)?;
                let a1 = BeamModeCoefficient::new(1)?.a_n;
                Ok(Self {
                    family: Family::Beam,
                    axis: b.vibration_axis,
                    density: mat.density(),
                    coefficient: a1 * (mat.youngs_modulus() / mat.density()).sqrt(),
                    mass_fraction: m / (mat.density() * probe.area() * probe.length()),
                })
            }
            Family::Disk => {
                let probe = DiskGeometry::new(1.0, 0.1)?;
                let mode = disk_mode(&probe, mat, 2)?;
                Ok(Self {
                    family: Family::Disk,
                    axis: b.vibration_axis,
                    density: mat.density(),
                    coefficient: mode.frequency() * probe.radius(),
                    mass_fraction: mode.effective_mass() / probe.mass(mat.density()),
                })
            }
        }
    }

    fn mode(&self, g: &Geometry) -> Result<ModeResult> {
        let (f, m, order) = match g {
            Geometry::Beam(b) => (
                self.coefficient * b.bending_depth() / b.length().powi(2),
                self.mass_fraction * self.density * b.area() * b.length(),
                1,
            ),
            Geometry::Disk(d) => (
                self.coefficient / d.radius(),
                self.mass_fraction * d.mass(self.density),
                2,
            ),
        };
        ModeResult::new(f, order, m, vec![1.0])
    }
}

/// Gridded coordinates: [width, thickness, gap, bias] or [thickness, gap, bias].
#[derive(Debug, Clone, PartialEq)]
struct Point(Vec<f64>);

struct Problem<'a> {
    profile: &'a SpecProfile,
    space: &'a DesignSpace,
    process: &'a ProcessModel,
    tol: &'a Tolerances,
    scaling: ModalScaling,
    axes: Vec<Interval>,
    targets: Vec<f64>,
    q: f64,
    fraction: f64,
}

struct Feasible {
    point: Point,
    size: f64,
    candidate: DesignCandidate,
}

type Failures = Vec<&'static str>;

impl<'a> Problem<'a> {
    fn geometry(&self, p: &Point, size: f64) -> Result<Geometry> {
        let v = &p.0;
        Ok(match self.scaling.family {
            Family::Beam => Geometry::Beam(BeamGeometry::new(size, v[0], v[1], self.scaling.axis)?),
            Family::Disk => Geometry::Disk(DiskGeometry::new(size, v[0])?),
        })
    }

    fn gap_bias(&self, p: &Point) -> (f64, f64) {
        let n = p.0.len();
        (p.0[n - 2], p.0[n - 1])
    }

    fn inputs(&self, p: &Point, size: f64) -> Result<DesignInputs> {
        let geometry = self.geometry(p, size)?;
        let area = self.fraction
            * match &geometry {
                Geometry::Beam(b) => b.facing_area(),
                Geometry::Disk(d) => d.rim_area(),
            };
        let (gap, bias) = self.gap_bias(p);
        let transducer = Transducer::new(
            gap,
            bias,
            self.space.drive_voltage,
            area,
            self.space.gap_rel_permittivity,
            self.space.detection,
        )?;
        Ok(DesignInputs {
            geometry,
            material: self.space.material,
            transducer,
            assumed_q: self.q,
            tunnel_depth: self.space.tunnel_depth,
            process: *self.process,
            tuning_voltage_range: None,
        })
    }

    /// Operating frequency; zero past the electrostatic instability.
    fn operating_frequency(&self, p: &Point, size: f64) -> Result<f64> {
        let inputs = self.inputs(p, size)?;
        let mode = self.scaling.mode(&inputs.geometry)?;
        let gap = self
            .process
            .gap_after_release(inputs.transducer.gap(), inputs.tunnel_depth);
        let t = inputs.transducer.with_gap(gap)?;
        Ok(crate::transduction::spring_softening_frequency(&mode, &t).unwrap_or(0.0))
    }

    /// Size whose operating frequency equals `target`; the frequency falls
    /// monotonically with size.
    fn snap(&self, p: &Point, target: f64) -> std::result::Result<f64, &'static str> {
        let b = &self.space.bounds;
        let mut lo = b.size.lo();
        if self.scaling.family == Family::Beam {
            lo = lo.max(p.0[0].max(p.0[1]) * (1.0 + 1e-9));
        } else {
            lo = lo.max(p.0[0] * (1.0 + 1e-9));
        }
        let mut hi = b.size.hi();
        if lo > hi {
            return Err("geometry");
        }
        let f = |s: f64| self.operating_frequency(p, s).map_err(|_| "geometry");
        let (f_lo, f_hi) = (f(lo)?, f(hi)?);
        if !(f_lo >= target && target >= f_hi) {
            return Err("frequency");
        }
        for _ in 0..200 {
            if hi - lo <= 1e-14 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if f(mid)? >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // of the two bracket ends keep the one closer in frequency
        let (a, b_) = (f(lo)?, f(hi)?);
        Ok(if (a - target).abs() <= (b_ - target).abs() {
            lo
        } else {
            hi
        })
    }

    fn evaluate(&self, p: &Point, target: f64) -> std::result::Result<Feasible, Failures> {
        let size = self.snap(p, target).map_err(|r| vec![r])?;
        let inputs = self.inputs(p, size).map_err(|_| vec!["geometry"])?;
        let mode = self
            .scaling
            .mode(&inputs.geometry)
            .map_err(|_| vec!["geometry"])?;
        let candidate = match DesignCandidate::analyze_with_mode(inputs, &mode) {
            Ok(c) => c,
            Err(Error::Unstable { .. }) => return Err(vec!["pull_in_margin"]),
            Err(_) => return Err(vec!["analysis"]),
        };
        let failures = feasibility_failures(&candidate, self.profile, self.tol);
        if failures.is_empty() {
            Ok(Feasible {
                point: p.clone(),
                size,
                candidate,
            })
        } else {
            Err(failures)
        }
    }

    fn best_over_targets(&self, p: &Point, tally: &mut Tally) -> Option<Feasible> {
        let mut best: Option<Feasible> = None;
        for &t in &self.targets {
            match self.evaluate(p, t) {
                Ok(f) => {
                    if best.as_ref().is_none_or(|b| rx(&f) < rx(b)) {
                        best = Some(f);
                    }
                }
                Err(rules) => tally.record(&rules),
            }
            tally.evaluations += 1;
        }
        best
    }

    fn refine(
        &self,
        seed: Feasible,
        levels: usize,
        grid_points: usize,
        tally: &mut Tally,
    ) -> Feasible {
        let mut best = seed;
        let mut steps: Vec<f64> = self
            .axes
            .iter()
            .map(|a| (a.hi() - a.lo()) / (grid_points.max(2) - 1) as f64 / 2.0)
            .collect();
        for _ in 0..levels {
            loop {
                let mut improved = false;
                for i in 0..self.axes.len() {
                    for dir in [-1.0, 1.0] {
                        let mut x = best.point.0.clone();
                        x[i] = (x[i] + dir * steps[i]).clamp(self.axes[i].lo(), self.axes[i].hi());
                        if x[i] == best.point.0[i] {
                            continue;
                        }
                        if let Some(f) = self.best_over_targets(&Point(x), tally) {
                            if rx(&f) < rx(&best) {
                                best = f;
                                improved = true;
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            steps.iter_mut().for_each(|s| *s /= 2.0);
        }
        best
    }
}

fn rx(f: &Feasible) -> f64 {
    f.candidate.analysis.motional_resistance
}

/// Every rule the candidate breaks: spec criteria, fab rules and the
/// pull-in margin. Empty means feasible.
pub fn feasibility_failures(c: &DesignCandidate, p: &SpecProfile, tol: &Tolerances) -> Failures {
    let mut out: Failures = Vec::new();
    for name in check_spec(c, p, tol).failed() {
        out.push(match name {
            "frequency" => "frequency",
            "q" => "q",
            "impedance" => "impedance",
            "dc_voltage" => "dc_voltage",
            _ => "tuning",
        });
    }
    for rule in c.analysis.fab.failed_rules() {
        out.push(match rule {
            "min_drawn_gap" => "min_drawn_gap",
            "max_tunnel_depth" => "max_tunnel_depth",
            _ => "tunnel_depth_non_negative",
        });
    }
    if !(c.analysis.pull_in_fraction <= PULL_IN_FRACTION) {
        out.push("pull_in_margin");
    }
    out
}

#[derive(Default)]
struct Tally {
    evaluations: usize,
    counts: BTreeMap<&'static str, usize>,
}

impl Tally {
    fn record(&mut self, rules: &[&'static str]) {
        for r in rules {
            *self.counts.entry(r).or_default() += 1;
        }
    }

    fn summary(&self) -> String {
        let mut ranked: Vec<(&str, usize)> = self.counts.iter().map(|(k, v)| (*k, *v)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let parts: Vec<String> = ranked
            .iter()
            .map(|(rule, n)| format!("{rule} ({n}/{} evaluations)", self.evaluations))
            .collect();
        if parts.is_empty() {
            "no evaluations".into()
        } else {
            parts.join(", ")
        }
    }
}

fn frequency_targets(p: &SpecProfile, tol: &Tolerances) -> Vec<f64> {
    const INNER: f64 = 1e-6;
    match &p.center_frequency {
        FrequencyTarget::Center(fc) if tol.frequency_relative > 0.0 => {
            let d = fc * tol.frequency_relative * (1.0 - INNER);
            vec![fc - d, *fc, fc + d]
        }
        FrequencyTarget::Center(fc) => vec![*fc],
        FrequencyTarget::Bands(bands) => bands
            .iter()
            .flat_map(|b| {
                let d = (b.hi() - b.lo()) * INNER;
                [b.lo() + d, b.midpoint(), b.hi() - d]
            })
            .collect(),
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Point).collect()
}

/// Ranked feasible designs, lowest as-fabricated R_x first. Each returned
/// candidate is re-analyzed with the full analytic model and re-checked;
/// an empty result is reported as `Error::Infeasible` with the rules that
/// rejected the grid.
pub fn optimize(
    profile: &SpecProfile,
    space: &DesignSpace,
    process: &ProcessModel,
    tol: &Tolerances,
    settings: &OptimizerSettings,
) -> Result<Vec<DesignCandidate>> {
    let b = &space.bounds;
    let mut axes = Vec::new();
    if b.family == Family::Beam {
        axes.push(
            b.width
                .ok_or_else(|| invariant("width", "beam bounds need a width interval"))?,
        );
    }
    axes.extend([b.thickness, b.drawn_gap, b.bias_voltage]);
    if settings.grid_points == 0 || settings.max_results == 0 {
        return Err(invariant(
            "settings",
            "grid_points and max_results must be >= 1",
        ));
    }
    let q = space
        .assumed_q
        .or(profile.q_required)
        .ok_or_else(|| invariant("assumed_q", "required when the profile sets no Q"))?;
    let fraction = space.electrode_fraction.unwrap_or(match b.family {
        Family::Beam => 1.0,
        Family::Disk => 0.25,
    });
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(invariant("electrode_fraction", "must lie in (0, 1]"));
    }
    let problem = Problem {
        profile,
        space,
        process,
        tol,
        scaling: ModalScaling::new(space)?,
        targets: frequency_targets(profile, tol),
        axes: axes.clone(),
        q,
        fraction,
    };

    let mut tally = Tally::default();
    let samples: Vec<Vec<f64>> = axes
        .iter()
        .map(|a| a.samples(settings.grid_points))
        .collect();
    let mut feasible: Vec<Feasible> = cartesian(&samples)
        .iter()
        .filter_map(|p| problem.best_over_targets(p, &mut tally))
        .collect();
    if feasible.is_empty() {
        return Err(Error::Infeasible(tally.summary()));
    }
    feasible.sort_by(|a, b| rx(a).total_cmp(&rx(b)));

    let seeds: Vec<Feasible> = feasible
        .iter()
        .take(settings.refine_top)
        .map(clone_feasible)
        .collect();
    for seed in seeds {
        let refined = problem.refine(
            seed,
            settings.refinement_levels,
            settings.grid_points,
            &mut tally,
        );
        feasible.push(refined);
    }
    feasible.sort_by(|a, b| rx(a).total_cmp(&rx(b)));

    let mut out: Vec<DesignCandidate> = Vec::new();
    let mut seen: Vec<(Vec<f64>, f64)> = Vec::new();
    for f in feasible {
        if seen.iter().any(|(p, s)| *p == f.point.0 && *s == f.size) {
            continue;
        }
        let Ok(full) = DesignCandidate::analyze(f.candidate.inputs.clone()) else {
            continue;
        };
        if feasibility_failures(&full, profile, tol).is_empty() {
            seen.push((f.point.0.clone(), f.size));
            out.push(full);
        }
        if out.len() == settings.max_results {
            break;
        }
    }
    if out.is_empty() {
        return Err(Error::Infeasible(
            "re-analysis rejected every grid survivor".into(),
        ));
    }
    out.sort_by(|a, b| {
        a.analysis
            .motional_resistance
            .total_cmp(&b.analysis.motional_resistance)
    });
    Ok(out)
}

fn clone_feasible(f: &Feasible) -> Feasible {
    Feasible {
        point: f.point.clone(),
        size: f.size,
        candidate: f.candidate.clone(),
    }
}
