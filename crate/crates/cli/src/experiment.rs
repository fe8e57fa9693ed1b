//! Runs one configured experiment and writes its artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hqa_core::dynamics::{
    adiabaticity_metric, energy_diagram, evolve, ground_state, linear_schedule, standard_observables,
    stroboscopic_compare, uniform_times, AnnealRun, EnergyDiagram, HamiltonianSource,
    IntegrationStats, StroboscopicComparison, StroboscopicOptions, Trajectory,
};
use hqa_core::mip::{decode, encode, DecodedSolution, EncodedMip, MipInstance};
use hqa_core::model::{build_driver_hamiltonian, build_effective, build_problem_hamiltonian};
use hqa_core::oracle::{grid_check, solve, OracleSolution};
use hqa_core::{HilbertSpace, LinOp, StateVector};
use serde::Serialize;

use crate::config::{ExperimentConfig, Mode};
use crate::output::{num, plot_svg, Series, Table};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `value < limit` passes, except for `relation = "=="`.
    pub limit: f64,
    pub relation: &'static str,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            passed: value < limit,
            value,
            limit,
            relation: "<",
        }
    }

    pub fn above(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            passed: value > limit,
            value,
            limit,
            relation: ">",
        }
    }

    pub fn equal(name: impl Into<String>, value: f64, expected: f64) -> Self {
        Self {
            name: name.into(),
            passed: value == expected,
            value,
            limit: expected,
            relation: "==",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Expectations {
    pub energy: f64,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub norm: f64,
}

impl Expectations {
    fn from_final(tr: &Trajectory) -> Self {
        let pick = |prefix: &str| -> Vec<f64> {
            tr.observables
                .iter()
                .filter(|(n, _)| n.starts_with(prefix) && n[1..].parse::<usize>().is_ok())
                .map(|(_, v)| *v.last().unwrap())
                .collect()
        };
        Self {
            energy: tr.final_value("H_P").unwrap_or(f64::NAN),
            y: pick("y"),
            x: pick("x"),
            norm: tr.final_value("norm").unwrap_or(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundSummary {
    pub energy: f64,
    pub decoded: DecodedSolution,
    /// `decoded.x − x*` of the oracle optimum (reported, not checked).
    pub x_deviation_from_oracle: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdiabaticitySummary {
    pub s: Vec<f64>,
    pub metric: Vec<f64>,
    pub max: f64,
    pub argmax_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MipAnnealReport {
    pub name: String,
    pub truncation: usize,
    pub total_time: f64,
    pub integrator_tol: f64,
    #[serde(rename = "final")]
    pub final_expectations: Expectations,
    pub excess_energy: f64,
    pub decoded_final: DecodedSolution,
    pub ground: GroundSummary,
    pub oracle: OracleSolution,
    pub adiabaticity: AdiabaticitySummary,
    pub integration: IntegrationStats,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub name: String,
    pub truncation: usize,
    pub drive_frequency: f64,
    pub nominal_time: f64,
    pub total_time: f64,
    pub periods: usize,
    pub integrator_tol: f64,
    pub lab_tol: f64,
    /// Ground energy of the effective problem Hamiltonian.
    pub ground_energy: f64,
    pub spectrum_width: f64,
    pub rwa_budget: f64,
    /// Largest lab − effective difference at the stroboscopic instants.
    pub max_strobe_difference: BTreeMap<String, f64>,
    pub final_lab: BTreeMap<String, f64>,
    pub final_effective: BTreeMap<String, f64>,
    pub lab_integration: IntegrationStats,
    pub effective_integration: IntegrationStats,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub comparison: StroboscopicComparison,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub name: String,
    pub truncation: usize,
    /// Which pair of Hamiltonians is interpolated.
    pub hamiltonians: &'static str,
    pub grid_points: usize,
    pub min_gap: f64,
    pub min_gap_s: f64,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub diagram: EnergyDiagram,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridCross {
    pub y: Vec<bool>,
    pub resolution: usize,
    pub range: (f64, f64),
    pub grid_x: Vec<f64>,
    pub grid_cost: f64,
    pub exact_cost: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub solution: OracleSolution,
    pub grid: Vec<GridCross>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone)]
pub enum Report {
    MipAnneal(Box<MipAnnealReport>),
    Appendix(Box<AppendixReport>),
    Diagram(Box<DiagramReport>),
    Oracle(Box<OracleReport>),
}

impl Report {
    pub fn checks(&self) -> &[Check] {
        match self {
            Report::MipAnneal(r) => &r.checks,
            Report::Appendix(r) => &r.checks,
            Report::Diagram(r) => &r.checks,
            Report::Oracle(r) => &r.checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    fn body(&self) -> Result<serde_json::Value> {
        Ok(match self {
            Report::MipAnneal(r) => serde_json::to_value(r)?,
            Report::Appendix(r) => serde_json::to_value(r)?,
            Report::Diagram(r) => serde_json::to_value(r)?,
            Report::Oracle(r) => serde_json::to_value(r)?,
        })
    }

    pub fn summary(&self, cfg: &ExperimentConfig) -> Result<serde_json::Value> {
        Ok(serde_json::json!({
            "mode": cfg.mode.to_string(),
            "config": cfg,
            "passed": self.passed(),
            "result": self.body()?,
        }))
    }

    /// Final scalar observables compared by the convergence report.
    pub fn convergence_observables(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        match self {
            Report::MipAnneal(r) => {
                out.push(("final_H_P".into(), r.final_expectations.energy));
                out.push(("ground_energy".into(), r.ground.energy));
                out.push(("excess_energy".into(), r.excess_energy));
                for (i, v) in r.final_expectations.y.iter().enumerate() {
                    out.push((format!("final_y{}", i + 1), *v));
                }
                for (i, v) in r.final_expectations.x.iter().enumerate() {
                    out.push((format!("final_x{}", i + 1), *v));
                }
                for (i, v) in r.ground.decoded.x.iter().enumerate() {
                    out.push((format!("ground_x{}", i + 1), *v));
                }
                out.push(("adiabaticity_max".into(), r.adiabaticity.max));
            }
            Report::Appendix(r) => {
                out.push(("final_lab_H_P".into(), r.final_lab["H_P"]));
                out.push(("final_effective_H_P".into(), r.final_effective["H_P"]));
                out.push(("ground_energy".into(), r.ground_energy));
                out.push(("max_strobe_difference_H_P".into(), r.max_strobe_difference["H_P"]));
            }
            Report::Diagram(r) => out.push(("min_gap".into(), r.min_gap)),
            Report::Oracle(r) => {
                out.push(("optimum_cost".into(), r.solution.best.cost));
                for (i, v) in r.solution.best.x.iter().enumerate() {
                    out.push((format!("optimum_x{}", i + 1), *v));
                }
            }
        }
        out
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    Ok(match cfg.mode {
        Mode::MipAnneal => Report::MipAnneal(Box::new(mip_anneal(cfg)?)),
        Mode::AppendixLabVsEff => Report::Appendix(Box::new(appendix(cfg)?)),
        Mode::EnergyDiagram => Report::Diagram(Box::new(diagram(cfg)?)),
        Mode::OracleOnly => Report::Oracle(Box::new(oracle_only(cfg)?)),
    })
}

/// Runs the experiment and writes `summary.json`, the CSV tables and (optionally) plots to `dir`.
pub fn run(cfg: &ExperimentConfig, dir: &Path) -> Result<(Report, Vec<PathBuf>)> {
    let report = execute(cfg)?;
    let files = write_artifacts(cfg, &report, dir)?;
    Ok((report, files))
}

fn encoded(cfg: &ExperimentConfig) -> Result<(EncodedMip, HilbertSpace, LinOp, LinOp)> {
    let (inst, driver) = cfg.mip_parts()?;
    let enc = encode(inst, driver)?;
    let space = enc.space(cfg.truncation)?;
    let problem = enc.problem_hamiltonian(&space)?;
    let drv = enc.driver_hamiltonian(&space)?;
    Ok((enc, space, problem, drv))
}

fn normalized(psi: &StateVector) -> Result<StateVector> {
    Ok(StateVector::normalized(psi.space().clone(), psi.amplitudes().clone())?)
}

fn mip_anneal(cfg: &ExperimentConfig) -> Result<MipAnnealReport> {
    let (enc, _space, problem, driver) = encoded(cfg)?;
    let inst = &enc.instance;
    let oracle = solve(inst)?;

    let (e0, ground) = ground_state(&problem)?;
    let ground_decoded = decode(inst, &ground)?;
    let (_, psi0) = ground_state(&driver)?;

    let observables = standard_observables(&problem)?;
    let mut run = AnnealRun::new(
        cfg.total_time,
        HamiltonianSource::Standard {
            driver: driver.clone(),
            problem: problem.clone(),
        },
        uniform_times(cfg.total_time, cfg.samples),
        cfg.integrator_tol,
    )?
    .with_observables(observables);
    run.keep_states = false;
    let trajectory = evolve(&run, &psi0)
        .with_context(|| format!("annealing run {} (N = {})", cfg.name, cfg.truncation))?;

    let final_expectations = Expectations::from_final(&trajectory);
    let decoded_final = decode(inst, &normalized(&trajectory.final_state)?)?;
    let excess_energy = final_expectations.energy - e0;

    let points = cfg.checks.adiabaticity_points.max(2);
    let s: Vec<f64> = (0..points).map(|k| k as f64 / (points - 1) as f64).collect();
    let metric = s
        .iter()
        .map(|&sv| adiabaticity_metric(&driver, &problem, cfg.total_time, sv * cfg.total_time))
        .collect::<hqa_core::Result<Vec<f64>>>()?;
    let (argmax, max) = metric
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, &m)| if m > acc.1 { (k, m) } else { acc });
    let adiabaticity = AdiabaticitySummary {
        argmax_s: s[argmax],
        s,
        metric,
        max,
    };

    let checks_cfg = &cfg.checks;
    let expected_y = checks_cfg.expected_y.clone().unwrap_or_else(|| {
        oracle.best.y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    });
    let expected_x = checks_cfg.expected_x.clone().unwrap_or_else(|| oracle.best.x.clone());
    let mut checks = vec![Check::below(
        "final_energy_excess",
        excess_energy.abs(),
        checks_cfg.energy_tol,
    )];
    for (i, (v, e)) in final_expectations.y.iter().zip(&expected_y).enumerate() {
        checks.push(Check::below(format!("final_y{}", i + 1), (v - e).abs(), checks_cfg.y_tol));
    }
    for (i, (v, e)) in final_expectations.x.iter().zip(&expected_x).enumerate() {
        checks.push(Check::below(format!("final_x{}", i + 1), (v - e).abs(), checks_cfg.x_tol));
    }
    let mismatches = ground_decoded
        .y_rounded
        .iter()
        .zip(&oracle.best.y)
        .filter(|(a, b)| a != b)
        .count();
    checks.push(Check::equal("ground_y_mismatches_vs_oracle", mismatches as f64, 0.0));
    checks.push(Check::below("adiabaticity_max", adiabaticity.max, checks_cfg.adiabaticity_max));

    let x_deviation_from_oracle = ground_decoded
        .x
        .iter()
        .zip(&oracle.best.x)
        .map(|(a, b)| a - b)
        .collect();
    Ok(MipAnnealReport {
        name: cfg.name.clone(),
        truncation: cfg.truncation,
        total_time: cfg.total_time,
        integrator_tol: cfg.integrator_tol,
        final_expectations,
        excess_energy,
        decoded_final,
        ground: GroundSummary {
            energy: e0,
            decoded: ground_decoded,
            x_deviation_from_oracle,
        },
        oracle,
        adiabaticity,
        integration: trajectory.stats,
        checks,
        trajectory,
    })
}

fn appendix(cfg: &ExperimentConfig) -> Result<AppendixReport> {
    let spec = cfg.hybrid.as_ref().context("missing [hybrid] section")?;
    let space = HilbertSpace::qubits_and_resonators(spec.qubits, spec.resonators, cfg.truncation)?;
    let lab_tol = cfg.appendix.lab_tol.unwrap_or(cfg.integrator_tol);
    let opts = StroboscopicOptions {
        nominal_time: cfg.total_time,
        lab_tol,
        effective_tol: cfg.integrator_tol,
        period_stride: cfg.appendix.period_stride,
        extra_samples: cfg.appendix.extra_samples,
    };
    let cmp = stroboscopic_compare(spec, &space, &opts)
        .with_context(|| format!("stroboscopic comparison {}", cfg.name))?;

    let names: Vec<String> = cmp
        .lab
        .observables
        .iter()
        .map(|(n, _)| n.clone())
        .filter(|n| n != "norm")
        .collect();
    let mut max_strobe_difference = BTreeMap::new();
    let mut final_lab = BTreeMap::new();
    let mut final_effective = BTreeMap::new();
    let last = *cmp.strobe_index.last().context("no stroboscopic samples")?;
    for n in &names {
        max_strobe_difference.insert(n.clone(), cmp.max_abs_difference(n).unwrap_or(f64::NAN));
        final_lab.insert(n.clone(), cmp.lab.series(n).map_or(f64::NAN, |v| v[last]));
        final_effective.insert(n.clone(), cmp.effective.series(n).map_or(f64::NAN, |v| v[last]));
    }
    let budget = cmp.rwa_budget;
    let checks = vec![
        Check::below("max_strobe_difference_H_P", max_strobe_difference["H_P"], budget),
        Check::below(
            "final_lab_H_P_minus_ground",
            (final_lab["H_P"] - cmp.ground_energy).abs(),
            budget,
        ),
        Check::below(
            "final_effective_H_P_minus_ground",
            (final_effective["H_P"] - cmp.ground_energy).abs(),
            budget,
        ),
    ];
    Ok(AppendixReport {
        name: cfg.name.clone(),
        truncation: cfg.truncation,
        drive_frequency: cmp.drive_frequency,
        nominal_time: cfg.total_time,
        total_time: cmp.total_time,
        periods: cmp.periods,
        integrator_tol: cfg.integrator_tol,
        lab_tol,
        ground_energy: cmp.ground_energy,
        spectrum_width: cmp.spectrum_width,
        rwa_budget: budget,
        max_strobe_difference,
        final_lab,
        final_effective,
        lab_integration: cmp.lab.stats,
        effective_integration: cmp.effective.stats,
        checks,
        comparison: cmp,
    })
}

fn diagram(cfg: &ExperimentConfig) -> Result<DiagramReport> {
    let n = cfg.diagram.grid_points;
    let grid: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let (driver, problem, hamiltonians) = if let Some(spec) = &cfg.hybrid {
        let space = HilbertSpace::qubits_and_resonators(spec.qubits, spec.resonators, cfg.truncation)?;
        if spec.drive_frequency.is_some() {
            let eff = build_effective(spec, &space)?;
            (eff.driver, eff.problem, "effective")
        } else {
            (
                build_driver_hamiltonian(spec, &space)?,
                build_problem_hamiltonian(spec, &space)?,
                "static",
            )
        }
    } else {
        let (_, _, problem, driver) = encoded(cfg)?;
        (driver, problem, "mip")
    };
    let diagram = energy_diagram(linear_schedule(&driver, &problem), &grid, cfg.diagram.levels)?;
    Ok(DiagramReport {
        name: cfg.name.clone(),
        truncation: cfg.truncation,
        hamiltonians,
        grid_points: n,
        min_gap: diagram.min_gap,
        min_gap_s: diagram.min_gap_s,
        checks: vec![Check::above("min_gap", diagram.min_gap, 0.0)],
        diagram,
    })
}

/// Grid resolution per axis for the brute-force cross-check, or `None` when
/// the grid would be too large.
fn grid_resolution(lines: usize) -> Option<usize> {
    match lines {
        1 | 2 => Some(400),
        3 => Some(100),
        _ => None,
    }
}

fn oracle_only(cfg: &ExperimentConfig) -> Result<OracleReport> {
    let inst: &MipInstance = cfg.mip.as_ref().context("missing [mip] section")?;
    let solution = solve(inst)?;
    let mut grid = Vec::new();
    let mut checks = Vec::new();
    let worst_residual = solution
        .sectors
        .iter()
        .map(|s| s.stationarity_residual)
        .fold(0.0_f64, f64::max);
    checks.push(Check::below("max_stationarity_residual", worst_residual, 1e-10));
    if let Some(resolution) = grid_resolution(inst.lines()) {
        let range = (0.0, inst.total.abs().max(1.0));
        let mut worst = f64::INFINITY;
        for sector in &solution.sectors {
            let (grid_x, grid_cost) = grid_check(inst, &sector.y, range, resolution)?;
            worst = worst.min(grid_cost - sector.cost);
            grid.push(GridCross {
                y: sector.y.clone(),
                resolution,
                range,
                grid_x,
                grid_cost,
                exact_cost: sector.cost,
            });
        }
        checks.push(Check::above("min_grid_minus_exact_cost", worst, -1e-9));
    }
    Ok(OracleReport {
        name: cfg.name.clone(),
        solution,
        grid,
        checks,
    })
}

fn trajectory_table(tr: &Trajectory, total_time: f64) -> Table {
    let mut header = vec!["t".to_string(), "s".to_string()];
    header.extend(tr.observables.iter().map(|(n, _)| {
        if n == "norm" {
            n.clone()
        } else {
            format!("expect_{}", n.replace('_', ""))
        }
    }));
    let mut table = Table::new(header);
    for (k, &t) in tr.times.iter().enumerate() {
        let mut row = vec![t, t / total_time];
        row.extend(tr.observables.iter().map(|(_, v)| v[k]));
        table.push_values(&row);
    }
    table
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_artifacts(cfg: &ExperimentConfig, report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    let mut emit = |name: &str| {
        let p = dir.join(name);
        files.push(p.clone());
        p
    };
    match report {
        Report::MipAnneal(r) => {
            let tr = &r.trajectory;
            trajectory_table(tr, r.total_time).write(&emit("trajectory.csv"))?;
            let mut ad = Table::new(["s", "metric"]);
            for (s, m) in r.adiabaticity.s.iter().zip(&r.adiabaticity.metric) {
                ad.push_values(&[*s, *m]);
            }
            ad.write(&emit("adiabaticity.csv"))?;
            if cfg.plots {
                let e0 = vec![r.ground.energy; tr.times.len()];
                plot_svg(
                    &emit("energy.svg"),
                    "problem energy",
                    "t",
                    "<H_P>",
                    &[
                        Series { label: "<H_P>", x: &tr.times, y: tr.series("H_P").unwrap() },
                        Series { label: "E0", x: &tr.times, y: &e0 },
                    ],
                )?;
                plot_named(&emit("qubits.svg"), "qubit occupations", "<(1+sz)/2>", tr, 'y')?;
                plot_named(&emit("resonators.svg"), "resonator quadratures", "<(a+a†)/2>", tr, 'x')?;
            }
        }
        Report::Appendix(r) => {
            let c = &r.comparison;
            trajectory_table(&c.lab, c.total_time).write(&emit("trajectory.csv"))?;
            trajectory_table(&c.effective, c.total_time).write(&emit("trajectory_effective.csv"))?;
            let names: Vec<&String> = r.max_strobe_difference.keys().collect();
            let mut header = vec!["n".to_string(), "t".to_string()];
            for n in &names {
                let n = n.replace('_', "");
                header.push(format!("lab_{n}"));
                header.push(format!("effective_{n}"));
                header.push(format!("diff_{n}"));
            }
            let mut strobe = Table::new(header);
            let paired: Vec<_> = names.iter().map(|n| c.paired(n).unwrap()).collect();
            let period_stride = cfg.appendix.period_stride;
            for (k, &t) in c.strobe_times.iter().enumerate() {
                let mut row = vec![(k * period_stride).to_string(), num(t)];
                for (l, e, d) in &paired {
                    row.extend([num(l[k]), num(e[k]), num(d[k])]);
                }
                strobe.push_raw(row);
            }
            strobe.write(&emit("stroboscopic.csv"))?;
            if cfg.plots {
                let (l, e, _) = c.paired("H_P").unwrap();
                plot_svg(
                    &emit("stroboscopic_energy.svg"),
                    "effective problem energy at t = 2nπ/ω",
                    "t",
                    "<H_P^eff>",
                    &[
                        Series { label: "lab frame", x: &c.strobe_times, y: &l },
                        Series { label: "rotating frame", x: &c.strobe_times, y: &e },
                    ],
                )?;
                plot_named(&emit("lab_qubit.svg"), "lab frame, qubit", "<(1+sz)/2>", &c.lab, 'y')?;
                plot_named(&emit("lab_resonator.svg"), "lab frame, resonator", "<(a+a†)/2>", &c.lab, 'x')?;
                plot_svg(
                    &emit("lab_energy.svg"),
                    "lab frame, effective problem energy",
                    "t",
                    "<H_P^eff>",
                    &[Series { label: "<H_P^eff>", x: &c.lab.times, y: c.lab.series("H_P").unwrap() }],
                )?;
            }
        }
        Report::Diagram(r) => {
            let d = &r.diagram;
            let k = d.levels.first().map_or(0, |l| l.len());
            let mut header = vec!["s".to_string()];
            header.extend((0..k).map(|i| format!("E{i}")));
            header.push("gap".into());
            header.push("min_gap".into());
            let mut table = Table::new(header);
            let gaps = d.gaps();
            for (i, s) in d.s.iter().enumerate() {
                let mut row = vec![num(*s)];
                row.extend(d.levels[i].iter().map(|&e| num(e)));
                row.push(num(gaps[i]));
                row.push(if *s == d.min_gap_s { "1" } else { "0" }.into());
                table.push_raw(row);
            }
            table.write(&emit("energy_diagram.csv"))?;
            if cfg.plots {
                let cols: Vec<Vec<f64>> = (0..k).map(|i| d.levels.iter().map(|l| l[i]).collect()).collect();
                let labels: Vec<String> = (0..k).map(|i| format!("E{i}")).collect();
                let series: Vec<Series> = cols
                    .iter()
                    .zip(&labels)
                    .map(|(c, l)| Series { label: l, x: &d.s, y: c })
                    .collect();
                plot_svg(&emit("energy_diagram.svg"), "instantaneous spectrum", "s", "energy", &series)?;
            }
        }
        Report::Oracle(r) => {
            write_json(&emit("oracle.json"), &r.solution)?;
        }
    }
    write_json(&emit("summary.json"), &report.summary(cfg)?)?;
    Ok(files)
}

fn plot_named(path: &Path, title: &str, ylabel: &str, tr: &Trajectory, prefix: char) -> Result<()> {
    let series: Vec<Series> = tr
        .observables
        .iter()
        .filter(|(n, _)| n.starts_with(prefix) && n[1..].parse::<usize>().is_ok())
        .map(|(n, v)| Series { label: n, x: &tr.times, y: v })
        .collect();
    plot_svg(path, title, "t", ylabel, &series)
}
