use std::fmt::Write as _;
use std::fs;

use serde::Serialize;
use serde_json::Value;

use resokit::analytic::{beam_mode_frequency, disk_wineglass_frequency, fundamental_mode};
use resokit::design::{
    builtin_profiles, check_spec, find_profile, optimize, DesignCandidate, DesignConfig,
    DesignInputs, ModalConfig, SpaceConfig, SpecProfile, SpecReport, Tolerances,
};
use resokit::fab::{check_fab_constraints, ProcessModel};
use resokit::fem::{beam_modal_fem, disk_modal_fem, mesh_disk, mode_shape_csv};
use resokit::transduction::{
    detection_comparison, detection_csv, equivalent_circuit, extract_q, transmission_spectrum,
};
use resokit::{Geometry, Material, Transducer};

use crate::output::{emit, json};
use crate::*;

const DEFAULT_SPECTRUM_POINTS: usize = 2001;
const DEFAULT_SCALES: [f64; 5] = [1.0, 0.8, 0.6, 0.4, 0.2];

pub fn dispatch(command: Command) -> CliResult<i32> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::Fem(a) => fem(a),
        Command::Respond(a) => respond(a),
        Command::CompareDetection(a) => compare_detection(a),
        Command::Check(a) => check(a),
        Command::Optimize(a) => run_optimize(a),
        Command::Gap(a) => gap(a),
        Command::Profiles(a) => profiles(a),
    }
}

fn design_inputs(path: &Path, o: &Overrides) -> CliResult<(DesignConfig, DesignInputs)> {
    let config = DesignConfig::from_json(&read(path)?)?;
    let mut inputs = config.inputs()?;
    if let Some(v) = o.bias {
        inputs.transducer = inputs.transducer.with_bias(v)?;
    }
    if let Some(g) = o.gap {
        inputs.transducer = inputs.transducer.with_gap(g)?;
    }
    if let Some(q) = o.q {
        inputs.assumed_q = q;
    }
    if let Some(t) = o.tunnel_depth {
        inputs.tunnel_depth = t;
    }
    Ok((config, inputs))
}

/// The released-gap transducer; fab violations are domain failures.
fn as_fabricated(inputs: &DesignInputs) -> CliResult<Transducer> {
    let report = check_fab_constraints(&inputs.transducer, inputs.tunnel_depth, &inputs.process);
    if !report.passed {
        return Err(CliError::Domain(format!(
            "fabrication rules fail: {}",
            report.failed_rules().join(", ")
        )));
    }
    Ok(inputs.transducer.with_gap(report.released_gap)?)
}

#[derive(Debug, Serialize)]
struct ModeRow {
    mode: String,
    analytic_hz: f64,
    fem_hz: f64,
    delta_percent: f64,
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    schema_version: u32,
    family: &'static str,
    material: Material,
    mesh: String,
    modes: Vec<ModeRow>,
}

fn row(mode: String, analytic: f64, fem: f64) -> ModeRow {
    ModeRow {
        mode,
        analytic_hz: analytic,
        fem_hz: fem,
        delta_percent: (fem - analytic) / analytic * 100.0,
    }
}

fn analyze(a: AnalyzeArgs) -> CliResult<i32> {
    let c = ModalConfig::from_json(&read(&a.config)?)?;
    let mat = c.material.resolve()?;
    let report = match c.geometry {
        Geometry::Beam(b) => {
            let n = a.modes.unwrap_or(3);
            let (_, fem, _) = beam_modal_fem(&b, &mat, c.beam_elements(), n)?;
            let modes = (1..=n)
                .map(|i| {
                    Ok(row(
                        format!("flexural n={i}"),
                        beam_mode_frequency(&b, &mat, i)?,
                        fem[i - 1].frequency,
                    ))
                })
                .collect::<CliResult<Vec<_>>>()?;
            AnalyzeReport {
                schema_version: 1,
                family: "beam",
                material: mat,
                mesh: format!("{} Hermite elements", c.beam_elements()),
                modes,
            }
        }
        Geometry::Disk(d) => {
            let n = a.modes.unwrap_or(1);
            let mesh = mesh_disk(&d, d.radius() / c.disk_divisions() as f64)?;
            let fem = disk_modal_fem(&d, &mat, &mesh)?;
            let modes = (2..2 + n)
                .map(|order| {
                    let m = fem
                        .iter()
                        .find(|m| m.angular_order == order && !m.ambiguous)
                        .ok_or_else(|| {
                            CliError::Domain(format!(
                                "no FEM mode of angular order {order} on this mesh"
                            ))
                        })?;
                    Ok(row(
                        format!("wine-glass n={order}"),
                        disk_wineglass_frequency(&d, &mat, order)?,
                        m.mode.frequency(),
                    ))
                })
                .collect::<CliResult<Vec<_>>>()?;
            AnalyzeReport {
                schema_version: 1,
                family: "disk",
                material: mat,
                mesh: format!("polar triangles, edge R/{}", c.disk_divisions()),
                modes,
            }
        }
    };
    let text = match a.format {
        TableFormat::Json => json(&report),
        TableFormat::Text => {
            let mut s = format!("{} ({})\n", report.family, report.mesh);
            writeln!(
                s,
                "{:<16} {:>24} {:>24} {:>24}",
                "mode", "analytic_hz", "fem_hz", "delta_percent"
            )
            .unwrap();
            for r in &report.modes {
                writeln!(
                    s,
                    "{:<16} {:>24} {:>24} {:>24}",
                    r.mode, r.analytic_hz, r.fem_hz, r.delta_percent
                )
                .unwrap();
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct FemRow {
    index: usize,
    frequency_hz: f64,
    eigenvalue: f64,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    angular_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ambiguous: Option<bool>,
}

fn fem(a: FemArgs) -> CliResult<i32> {
    let c = ModalConfig::from_json(&read(&a.config)?)?;
    let mat = c.material.resolve()?;
    let (rows, shapes) = match c.geometry {
        Geometry::Beam(b) => {
            let (sys, modes, _) = beam_modal_fem(&b, &mat, c.beam_elements(), a.modes)?;
            let rows: Vec<FemRow> = modes
                .iter()
                .enumerate()
                .map(|(i, m)| FemRow {
                    index: i + 1,
                    frequency_hz: m.frequency,
                    eigenvalue: m.eigenvalue,
                    residual: m.residual,
                    angular_order: None,
                    ambiguous: None,
                })
                .collect();
            let shapes: Vec<String> = modes
                .iter()
                .map(|m| mode_shape_csv(&sys.mesh, &m.vector))
                .collect();
            (rows, shapes)
        }
        Geometry::Disk(d) => {
            let mesh = mesh_disk(&d, d.radius() / c.disk_divisions() as f64)?;
            let modes = disk_modal_fem(&d, &mat, &mesh)?;
            let rows = modes
                .iter()
                .enumerate()
                .map(|(i, m)| FemRow {
                    index: i + 1,
                    frequency_hz: m.fem.frequency,
                    eigenvalue: m.fem.eigenvalue,
                    residual: m.fem.residual,
                    angular_order: Some(m.angular_order),
                    ambiguous: Some(m.ambiguous),
                })
                .collect();
            let shapes = modes
                .iter()
                .map(|m| mode_shape_csv(&mesh, &m.fem.vector))
                .collect();
            (rows, shapes)
        }
    };
    if let Some(dir) = &a.shape_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
        for (i, s) in shapes.iter().enumerate() {
            write(&dir.join(format!("mode_{}.csv", i + 1)), s)?;
        }
    }
    let text = match a.format {
        CurveFormat::Json => json(&rows),
        CurveFormat::Csv => {
            let disk = rows.first().is_some_and(|r| r.angular_order.is_some());
            let mut s = String::from("index,frequency_hz,eigenvalue,residual");
            s.push_str(if disk {
                ",angular_order,ambiguous\n"
            } else {
                "\n"
            });
            for r in &rows {
                write!(
                    s,
                    "{},{:e},{:e},{:e}",
                    r.index, r.frequency_hz, r.eigenvalue, r.residual
                )
                .unwrap();
                if let (Some(n), Some(amb)) = (r.angular_order, r.ambiguous) {
                    write!(s, ",{n},{amb}").unwrap();
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct RespondSummary {
    f0_hz: f64,
    configured_q: f64,
    extracted_q: f64,
    loaded_q: f64,
    motional_resistance_ohm: f64,
    termination_ohm: f64,
    released_gap_m: f64,
    points: usize,
}

fn respond(a: RespondArgs) -> CliResult<i32> {
    let (config, inputs) = design_inputs(&a.config, &a.overrides)?;
    let t = as_fabricated(&inputs)?;
    let mode = fundamental_mode(&inputs.geometry, &inputs.material)?;
    let circuit = equivalent_circuit(&mode, &t, inputs.assumed_q)?;
    let termination = config.termination()?;
    let points = a
        .points
        .or(config.spectrum_points)
        .unwrap_or(DEFAULT_SPECTRUM_POINTS);
    let span = a.span.unwrap_or(6.0 / inputs.assumed_q);
    if !(span > 0.0 && span < 1.0) {
        return Err(CliError::Usage(format!(
            "span must lie in (0, 1), got {span}"
        )));
    }
    let f0 = circuit.f0();
    let spectrum = transmission_spectrum(
        &circuit,
        termination,
        f0 * (1.0 - span),
        f0 * (1.0 + span),
        points,
    )?;
    let extracted = extract_q(&spectrum)?;
    if let Some(p) = &a.circuit {
        write(p, &circuit.to_json())?;
    }
    if let Some(p) = &a.netlist {
        write(p, &(circuit.netlist().join("\n") + "\n"))?;
    }
    let on_stdout = emit(&a.out, &spectrum.to_csv())?;
    let summary = RespondSummary {
        f0_hz: f0,
        configured_q: inputs.assumed_q,
        extracted_q: extracted,
        loaded_q: (circuit.l_x() / circuit.c_x()).sqrt() / (circuit.r_x() + 2.0 * termination),
        motional_resistance_ohm: circuit.r_x(),
        termination_ohm: termination,
        released_gap_m: t.gap(),
        points: spectrum.len(),
    };
    let text = match a.format {
        TableFormat::Json => json(&summary),
        TableFormat::Text => format!(
            "f0 {} Hz, R_x {} ohm, configured Q {}, extracted Q {} (loaded Q {}), {} points\n",
            summary.f0_hz,
            summary.motional_resistance_ohm,
            summary.configured_q,
            summary.extracted_q,
            summary.loaded_q,
            summary.points
        ),
    };
    if on_stdout {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    Ok(EXIT_OK)
}

fn compare_detection(a: DetectionArgs) -> CliResult<i32> {
    let (config, inputs) = design_inputs(&a.config, &a.overrides)?;
    let t = as_fabricated(&inputs)?;
    let scales = a
        .scales
        .or(config.scales.clone())
        .unwrap_or_else(|| DEFAULT_SCALES.to_vec());
    let points = detection_comparison(
        &inputs.geometry,
        &inputs.material,
        &t,
        inputs.assumed_q,
        &scales,
    )?;
    emit(&a.out, &detection_csv(&points))?;
    Ok(EXIT_OK)
}

fn load_profile(p: &ProfileChoice) -> CliResult<(SpecProfile, Tolerances)> {
    let profile = match (&p.profile, &p.profile_file) {
        (Some(name), _) => find_profile(name)?,
        (None, Some(path)) => SpecProfile::from_json(&read(path)?)?,
        (None, None) => return Err(CliError::Usage("give --profile or --profile-file".into())),
    };
    let tol = match &p.tolerances {
        Some(path) => Tolerances::from_json(&read(path)?)?,
        None => Tolerances::standard(),
    };
    Ok((profile, tol))
}

fn schema(e: serde_json::Error) -> CliError {
    CliError::Usage(format!("schema error: {e}"))
}

/// Design config, single candidate, or `optimize` output.
fn load_candidates(path: &Path, o: &Overrides) -> CliResult<Vec<DesignCandidate>> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(schema)?;
    let overridden =
        o.bias.is_some() || o.gap.is_some() || o.q.is_some() || o.tunnel_depth.is_some();
    if value.get("candidates").is_some() || value.get("inputs").is_some() {
        if overridden {
            return Err(CliError::Usage(
                "overrides apply to design configs only".into(),
            ));
        }
        if let Some(list) = value.get("candidates") {
            return list
                .as_array()
                .ok_or_else(|| CliError::Usage("`candidates` must be an array".into()))?
                .iter()
                .map(|c| Ok(DesignCandidate::from_json(&c.to_string())?))
                .collect();
        }
        return Ok(vec![DesignCandidate::from_json(&text)?]);
    }
    let (_, inputs) = design_inputs(path, o)?;
    Ok(vec![DesignCandidate::analyze(inputs)?])
}

fn check(a: CheckArgs) -> CliResult<i32> {
    let (profile, tol) = load_profile(&a.profile)?;
    let candidates = load_candidates(&a.input, &a.overrides)?;
    let reports: Vec<SpecReport> = candidates
        .iter()
        .map(|c| check_spec(c, &profile, &tol))
        .collect();
    let text = match a.format {
        TableFormat::Json if reports.len() == 1 => json(&reports[0]),
        TableFormat::Json => json(&reports),
        TableFormat::Text => reports
            .iter()
            .map(SpecReport::to_text)
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(&a.out, &text)?;
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failed().into_iter().map(String::from))
        .collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        let mut names = failed;
        names.dedup();
        eprintln!("spec check failed: {}", names.join(", "));
        Ok(EXIT_DOMAIN)
    }
}

#[derive(Debug, Serialize)]
struct OptimizeOutput<'a> {
    schema_version: u32,
    profile: &'a str,
    candidates: &'a [DesignCandidate],
}

fn run_optimize(a: OptimizeArgs) -> CliResult<i32> {
    let (profile, tol) = load_profile(&a.profile)?;
    let config = SpaceConfig::from_json(&read(&a.bounds)?)?;
    let space = config.space()?;
    let process = match &a.process {
        Some(p) => ProcessModel::from_json(&read(p)?)?,
        None => config.process.unwrap_or_default(),
    };
    let tol = if a.profile.tolerances.is_some() {
        tol
    } else {
        config.tolerances.unwrap_or(tol)
    };
    let mut settings = config.settings.unwrap_or_default();
    if let Some(g) = a.grid_points {
        settings.grid_points = g;
    }
    if let Some(m) = a.max_results {
        settings.max_results = m;
    }
    let found = optimize(&profile, &space, &process, &tol, &settings)?;
    let text = match a.format {
        TableFormat::Json => json(&OptimizeOutput {
            schema_version: 1,
            profile: &profile.name,
            candidates: &found,
        }),
        TableFormat::Text => {
            let mut s = format!("profile {}\n", profile.name);
            writeln!(
                s,
                "{:>4} {:>10} {:>10} {:>10} {:>9} {:>7} {:>14} {:>12} {:>8}",
                "rank",
                "size_um",
                "width_um",
                "thick_um",
                "gap_nm",
                "bias_v",
                "frequency_hz",
                "r_x_ohm",
                "v/v_pi"
            )
            .unwrap();
            for (i, c) in found.iter().enumerate() {
                let (size, width, thick) = match c.inputs.geometry {
                    Geometry::Beam(b) => (b.length(), Some(b.width()), b.thickness()),
                    Geometry::Disk(d) => (d.radius(), None, d.thickness()),
                };
                writeln!(
                    s,
                    "{:>4} {:>10.4} {:>10} {:>10.4} {:>9.2} {:>7.3} {:>14.1} {:>12.2} {:>8.4}",
                    i + 1,
                    size * 1e6,
                    width.map_or("-".into(), |w| format!("{:.4}", w * 1e6)),
                    thick * 1e6,
                    c.inputs.transducer.gap() * 1e9,
                    c.inputs.transducer.bias_voltage(),
                    c.analysis.frequency,
                    c.analysis.motional_resistance,
                    c.analysis.pull_in_fraction
                )
                .unwrap();
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn gap(a: GapArgs) -> CliResult<i32> {
    let (transducer, tunnel, mut process) = match &a.config {
        Some(path) => {
            let (_, i) = design_inputs(path, &Overrides::default())?;
            (i.transducer, i.tunnel_depth, i.process)
        }
        None => {
            let drawn = a
                .drawn
                .ok_or_else(|| CliError::Usage("give a design config or --drawn".into()))?;
            // area and bias do not enter the gap model
            (
                Transducer::airgap(drawn, 0.0, 1.0)?,
                0.0,
                ProcessModel::default(),
            )
        }
    };
    let transducer = match a.drawn {
        Some(d) => transducer.with_gap(d)?,
        None => transducer,
    };
    let tunnel = a.tunnel_depth.unwrap_or(tunnel);
    if let Some(p) = &a.process {
        process = ProcessModel::from_json(&read(p)?)?;
    }
    let report = check_fab_constraints(&transducer, tunnel, &process);
    let text = match a.format {
        TableFormat::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        TableFormat::Text => report.to_text(),
    };
    emit(&a.out, &text)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_DOMAIN })
}

fn profiles(a: ProfilesArgs) -> CliResult<i32> {
    let all = builtin_profiles();
    let text = match a.format {
        TableFormat::Json => json(&all),
        TableFormat::Text => {
            let mut s = String::new();
            for p in &all {
                let f = p
                    .nominal_frequencies()
                    .iter()
                    .map(|f| format!("{:.1} MHz", f / 1e6))
                    .collect::<Vec<_>>()
                    .join(", ");
                let q = p.q_required.map_or("-".into(), |q| format!("{q}"));
                writeln!(s, "{:<16} {:<28} Q {}", p.name, f, q).unwrap();
            }
            s.push_str("oscillator-n<N> is available for any N >= 1\n");
            s
        }
    };
    print!("{text}");
    Ok(EXIT_OK)
}
