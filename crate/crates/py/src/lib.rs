//! Python bindings. Lengths are metres, voltages volts, frequencies hertz.
//! Structured results (circuits, reports, candidates) cross the boundary
//! as JSON strings so they round-trip with the CLI files.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use resokit::analytic::{beam_mode_frequency, disk_wineglass_frequency, fundamental_mode};
use resokit::design::{
    builtin_profiles, check_spec, find_profile, optimize, tuning_range, DesignCandidate,
    DesignConfig, OptimizerSettings, SpaceConfig, Tolerances,
};
use resokit::fab::{self, ProcessModel};
use resokit::fem::beam_modal_fem;
use resokit::transduction::{self, EquivalentCircuit, Spectrum};
use resokit::{BeamGeometry, DiskGeometry, Geometry, ModeResult, VibrationAxis};

create_exception!(
    resokit,
    ResokitError,
    PyException,
    "Error raised by the resokit library."
);

fn err(e: resokit::Error) -> PyErr {
    ResokitError::new_err(e.to_string())
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for resokit::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

#[pyclass(frozen, module = "resokit")]
pub struct Material {
    inner: resokit::Material,
}

#[pymethods]
impl Material {
    /// Preset name (e.g. "silicon") or path to a material JSON file.
    #[new]
    #[pyo3(signature = (name = "silicon"))]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: resokit::load_material(name).py()?,
        })
    }

    #[getter]
    fn youngs_modulus(&self) -> f64 {
        self.inner.youngs_modulus()
    }

    #[getter]
    fn density(&self) -> f64 {
        self.inner.density()
    }

    #[getter]
    fn poisson_ratio(&self) -> f64 {
        self.inner.poisson_ratio()
    }

    fn __repr__(&self) -> String {
        format!(
            "Material(E={:e}, rho={}, nu={})",
            self.inner.youngs_modulus(),
            self.inner.density(),
            self.inner.poisson_ratio()
        )
    }
}

fn material(m: Option<&Material>) -> resokit::Material {
    m.map_or_else(resokit::material::silicon, |m| m.inner)
}

#[pyclass(frozen, module = "resokit")]
pub struct Beam {
    inner: BeamGeometry,
}

#[pymethods]
impl Beam {
    /// Clamped-clamped beam; `axis` is "in_plane" or "out_of_plane".
    #[new]
    #[pyo3(signature = (length, width, thickness, axis = "in_plane"))]
    fn new(length: f64, width: f64, thickness: f64, axis: &str) -> PyResult<Self> {
        let axis = match axis {
            "in_plane" => VibrationAxis::InPlane,
            "out_of_plane" => VibrationAxis::OutOfPlane,
            other => {
                return Err(ResokitError::new_err(format!(
                    "axis must be in_plane or out_of_plane, got {other}"
                )))
            }
        };
        Ok(Self {
            inner: BeamGeometry::new(length, width, thickness, axis).py()?,
        })
    }

    #[pyo3(signature = (material = None, n = 1))]
    fn frequency(&self, material: Option<&Material>, n: usize) -> PyResult<f64> {
        beam_mode_frequency(&self.inner, &self::material(material), n).py()
    }

    /// Lowest `modes` FEM frequencies with `elements` Hermite elements.
    #[pyo3(signature = (material = None, elements = 64, modes = 3))]
    fn fem_frequencies(
        &self,
        material: Option<&Material>,
        elements: usize,
        modes: usize,
    ) -> PyResult<Vec<f64>> {
        let (_, fem, _) =
            beam_modal_fem(&self.inner, &self::material(material), elements, modes).py()?;
        Ok(fem.iter().map(|m| m.frequency).collect())
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.length()
    }
}

#[pyclass(frozen, module = "resokit")]
pub struct Disk {
    inner: DiskGeometry,
}

#[pymethods]
impl Disk {
    #[new]
    fn new(radius: f64, thickness: f64) -> PyResult<Self> {
        Ok(Self {
            inner: DiskGeometry::new(radius, thickness).py()?,
        })
    }

    /// Wine-glass (n = 2) or higher in-plane mode frequency.
    #[pyo3(signature = (material = None, n = 2))]
    fn frequency(&self, material: Option<&Material>, n: usize) -> PyResult<f64> {
        disk_wineglass_frequency(&self.inner, &self::material(material), n).py()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius()
    }
}

fn geometry(obj: &Bound<'_, PyAny>) -> PyResult<Geometry> {
    if let Ok(b) = obj.extract::<PyRef<'_, Beam>>() {
        return Ok(Geometry::Beam(b.inner));
    }
    if let Ok(d) = obj.extract::<PyRef<'_, Disk>>() {
        return Ok(Geometry::Disk(d.inner));
    }
    Err(ResokitError::new_err("expected a Beam or Disk"))
}

#[pyclass(frozen, module = "resokit")]
pub struct Mode {
    inner: ModeResult,
}

#[pymethods]
impl Mode {
    #[getter]
    fn frequency(&self) -> f64 {
        self.inner.frequency()
    }

    #[getter]
    fn effective_mass(&self) -> f64 {
        self.inner.effective_mass()
    }

    #[getter]
    fn effective_stiffness(&self) -> f64 {
        self.inner.effective_stiffness()
    }
}

/// Working mode of a geometry: beam fundamental or disk wine-glass.
#[pyfunction]
#[pyo3(name = "fundamental_mode", signature = (geometry, material = None))]
fn py_fundamental_mode(geometry: &Bound<'_, PyAny>, material: Option<&Material>) -> PyResult<Mode> {
    Ok(Mode {
        inner: fundamental_mode(&self::geometry(geometry)?, &self::material(material)).py()?,
    })
}

#[pyclass(frozen, module = "resokit")]
pub struct Transducer {
    inner: resokit::Transducer,
}

#[pymethods]
impl Transducer {
    #[new]
    #[pyo3(signature = (gap, bias_voltage, electrode_area, drive_voltage = 0.1, gap_rel_permittivity = 1.0))]
    fn new(
        gap: f64,
        bias_voltage: f64,
        electrode_area: f64,
        drive_voltage: f64,
        gap_rel_permittivity: f64,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: resokit::Transducer::new(
                gap,
                bias_voltage,
                drive_voltage,
                electrode_area,
                gap_rel_permittivity,
                resokit::Detection::Capacitive,
            )
            .py()?,
        })
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.inner.gap()
    }
}

#[pyfunction]
fn motional_resistance(mode: &Mode, transducer: &Transducer, q: f64) -> PyResult<f64> {
    transduction::motional_resistance(&mode.inner, &transducer.inner, q).py()
}

#[pyfunction]
fn pull_in_voltage(mode: &Mode, transducer: &Transducer) -> f64 {
    transduction::pull_in_voltage(&mode.inner, &transducer.inner)
}

#[pyfunction]
fn spring_softening_frequency(mode: &Mode, transducer: &Transducer) -> PyResult<f64> {
    transduction::spring_softening_frequency(&mode.inner, &transducer.inner).py()
}

#[pyclass(frozen, module = "resokit")]
pub struct Circuit {
    inner: EquivalentCircuit,
}

#[pymethods]
impl Circuit {
    #[getter]
    fn r_x(&self) -> f64 {
        self.inner.r_x()
    }

    #[getter]
    fn l_x(&self) -> f64 {
        self.inner.l_x()
    }

    #[getter]
    fn c_x(&self) -> f64 {
        self.inner.c_x()
    }

    #[getter]
    fn c0(&self) -> f64 {
        self.inner.c0()
    }

    #[getter]
    fn f0(&self) -> f64 {
        self.inner.f0()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn netlist(&self) -> Vec<String> {
        self.inner.netlist()
    }

    /// (frequencies, magnitude_db, phase_rad) on a geometric grid.
    #[pyo3(signature = (f_lo, f_hi, points, termination = transduction::DEFAULT_TERMINATION))]
    fn spectrum(
        &self,
        f_lo: f64,
        f_hi: f64,
        points: usize,
        termination: f64,
    ) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let s = transduction::transmission_spectrum(&self.inner, termination, f_lo, f_hi, points)
            .py()?;
        Ok((
            s.frequencies().to_vec(),
            s.magnitude().to_vec(),
            s.phase().to_vec(),
        ))
    }
}

#[pyfunction]
fn equivalent_circuit(mode: &Mode, transducer: &Transducer, q: f64) -> PyResult<Circuit> {
    Ok(Circuit {
        inner: transduction::equivalent_circuit(&mode.inner, &transducer.inner, q).py()?,
    })
}

/// Q from the −3 dB crossings of a sampled magnitude response.
#[pyfunction]
fn extract_q(frequencies: Vec<f64>, magnitude_db: Vec<f64>, phase_rad: Vec<f64>) -> PyResult<f64> {
    let s = Spectrum::new(frequencies, magnitude_db, phase_rad).py()?;
    transduction::extract_q(&s).py()
}

/// Released gap; `process_json` overrides the default process model.
#[pyfunction]
#[pyo3(signature = (drawn_gap, tunnel_depth, process_json = None))]
fn released_gap(drawn_gap: f64, tunnel_depth: f64, process_json: Option<&str>) -> PyResult<f64> {
    let process = match process_json {
        Some(j) => ProcessModel::from_json(j).py()?,
        None => ProcessModel::default(),
    };
    fab::released_gap(drawn_gap, tunnel_depth, &process).py()
}

#[pyfunction]
fn profile_names() -> Vec<String> {
    builtin_profiles().into_iter().map(|p| p.name).collect()
}

/// Analyzes a design config (JSON text) and returns the candidate as JSON.
#[pyfunction]
fn analyze_design(config_json: &str) -> PyResult<String> {
    let inputs = DesignConfig::from_json(config_json).py()?.inputs().py()?;
    Ok(DesignCandidate::analyze(inputs).py()?.to_json())
}

/// Spec report JSON for a design config or candidate JSON against a built-in profile.
#[pyfunction]
#[pyo3(signature = (design_json, profile, frequency_tolerance = None))]
fn check_design(
    design_json: &str,
    profile: &str,
    frequency_tolerance: Option<f64>,
) -> PyResult<(bool, String)> {
    let candidate = match DesignCandidate::from_json(design_json) {
        Ok(c) => c,
        Err(_) => {
            DesignCandidate::analyze(DesignConfig::from_json(design_json).py()?.inputs().py()?)
                .py()?
        }
    };
    let tol = match frequency_tolerance {
        Some(t) => Tolerances::from_json(&format!("{{\"frequency_relative\": {t}}}")).py()?,
        None => Tolerances::standard(),
    };
    let report = check_spec(&candidate, &find_profile(profile).py()?, &tol);
    Ok((report.passed, report.to_json()))
}

/// f(v_min) − f(v_max) for a candidate JSON.
#[pyfunction]
fn candidate_tuning_range(candidate_json: &str, v_min: f64, v_max: f64) -> PyResult<f64> {
    tuning_range(
        &DesignCandidate::from_json(candidate_json).py()?,
        v_min,
        v_max,
    )
    .py()
}

/// Ranked candidates (JSON list) for a bounds config against a built-in profile.
#[pyfunction]
#[pyo3(signature = (profile, bounds_json, grid_points = None))]
fn optimize_design(
    profile: &str,
    bounds_json: &str,
    grid_points: Option<usize>,
) -> PyResult<Vec<String>> {
    let config = SpaceConfig::from_json(bounds_json).py()?;
    let mut settings: OptimizerSettings = config.settings.unwrap_or_default();
    if let Some(g) = grid_points {
        settings.grid_points = g;
    }
    let found = optimize(
        &find_profile(profile).py()?,
        &config.space().py()?,
        &config.process.unwrap_or_default(),
        &config.tolerances.unwrap_or_else(Tolerances::standard),
        &settings,
    )
    .py()?;
    Ok(found.iter().map(DesignCandidate::to_json).collect())
}

#[pymodule]
#[pyo3(name = "resokit")]
fn resokit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResokitError", m.py().get_type::<ResokitError>())?;
    m.add_class::<Material>()?;
    m.add_class::<Beam>()?;
    m.add_class::<Disk>()?;
    m.add_class::<Mode>()?;
    m.add_class::<Transducer>()?;
    m.add_class::<Circuit>()?;
    m.add_function(wrap_pyfunction!(py_fundamental_mode, m)?)?;
    m.add_function(wrap_pyfunction!(motional_resistance, m)?)?;
    m.add_function(wrap_pyfunction!(pull_in_voltage, m)?)?;
    m.add_function(wrap_pyfunction!(spring_softening_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(extract_q, m)?)?;
    m.add_function(wrap_pyfunction!(released_gap, m)?)?;
    m.add_function(wrap_pyfunction!(profile_names, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_design, m)?)?;
    m.add_function(wrap_pyfunction!(check_design, m)?)?;
    m.add_function(wrap_pyfunction!(candidate_tuning_range, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_design, m)?)?;
    Ok(())
}
