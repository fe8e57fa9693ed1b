//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use hqa_cli::config::{preset, ExperimentConfig, Mode};
use hqa_cli::convergence::{compare, variants, ConvergenceReport};
use hqa_cli::experiment::{execute, AppendixReport, MipAnnealReport, Report};
use hqa_core::dynamics::ground_state;
use hqa_core::hilbert::{annihilation, commutator, pauli, PauliAxis};
use hqa_core::mip::{decode, encode, MipDriver, MipInstance};
use hqa_core::model::{
    build_driver_hamiltonian, build_effective, build_lab_frame, build_problem_hamiltonian,
    rotating_transform, HybridProblemSpec,
};
use hqa_core::oracle::{grid_check, solve, solve_sector};
use hqa_core::{HilbertSpace, LinOp};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn mip_report(r: Report) -> MipAnnealReport {
    match r {
        Report::MipAnneal(r) => *r,
        _ => unreachable!("expected an annealing report"),
    }
}

fn appendix_report(r: Report) -> AppendixReport {
    match r {
        Report::Appendix(r) => *r,
        _ => unreachable!("expected an appendix report"),
    }
}

fn fig_config() -> ExperimentConfig {
    preset("paper-fig1-3").unwrap()
}

fn anneal_with(cfg: &ExperimentConfig) -> MipAnnealReport {
    mip_report(execute(cfg).expect("annealing run"))
}

fn criterion_1(base: &MipAnnealReport) -> Outcome {
    let excess = base.excess_energy;
    outcome(
        excess.abs() < 1e-2,
        format!(
            "final <H_P> = {:.6}, E0 = {:.6}, |diff| = {:.3e} (< 1e-2)",
            base.final_expectations.energy,
            base.ground.energy,
            excess.abs()
        ),
    )
}

fn criterion_2(base: &MipAnnealReport) -> Outcome {
    let y = &base.final_expectations.y;
    let x = &base.final_expectations.x;
    let dy = (y[0] - 1.0).abs().max(y[1].abs());
    let dx = (x[0] - 1.07).abs().max((x[1] - 0.69).abs());
    outcome(
        dy < 0.05 && dx < 0.02,
        format!(
            "y = ({:.5}, {:.5}) max dev {dy:.2e} (< 0.05); x = ({:.5}, {:.5}) max dev {dx:.2e} (< 0.02)",
            y[0], y[1], x[0], x[1]
        ),
    )
}

fn criterion_3() -> Outcome {
    let inst = MipInstance::production_planning();
    let sol = solve(&inst).unwrap();
    let best = &sol.best;
    let oracle_y = best.y == [true, false];
    let oracle_x = (best.x[0] - 1.0726).abs() < 1e-4 && (best.x[1] - 0.6814).abs() < 1e-4;

    // Brute-force cross-check of the winning sector on [0, 2]² at 400² points.
    let (_, grid_cost) = grid_check(&inst, &best.y, (0.0, 2.0), 400).unwrap();
    let h = 2.0 / 399.0;
    let hess_norm = 2.0 * inst.quadratic[1] + 4.0 * inst.penalty_weight;
    let grid_ok = grid_cost >= best.cost - 1e-9 && grid_cost - best.cost <= h * h * hess_norm;
    let sector_ok = solve_sector(&inst, &best.y).unwrap().x == best.x;

    let enc = encode(&inst, &MipDriver::uniform(2, 1.0, 1.0)).unwrap();
    let mut parts = Vec::new();
    let mut quantum_ok = true;
    for (n, tol) in [(8, 1e-3), (16, 1e-4)] {
        let space = enc.space(n).unwrap();
        let (_, psi) = ground_state(&enc.problem_hamiltonian(&space).unwrap()).unwrap();
        let d = decode(&inst, &psi).unwrap();
        let y_exact = d.y_rounded == best.y
            && d.y.iter().zip(&d.y_rounded).all(|(v, &r)| (v - if r { 1.0 } else { 0.0 }).abs() < 1e-9);
        let dx = (d.x[0] - best.x[0]).abs().max((d.x[1] - best.x[1]).abs());
        let ok = y_exact && dx < tol;
        quantum_ok &= ok;
        parts.push(format!(
            "N={n}: y {} x = ({:.6}, {:.6}) dev {dx:.2e} (< {tol:e}) {}",
            if y_exact { "exact" } else { "MISMATCH" },
            d.x[0],
            d.x[1],
            if ok { "ok" } else { "FAIL" }
        ));
    }
    outcome(
        oracle_y && oracle_x && grid_ok && sector_ok && quantum_ok,
        format!(
            "oracle y* = {:?} x* = ({:.6}, {:.6}) grid {}; {}",
            best.y,
            best.x[0],
            best.x[1],
            if grid_ok { "consistent" } else { "INCONSISTENT" },
            parts.join("; ")
        ),
    )
}

fn criterion_4(app: &AppendixReport) -> Outcome {
    let budget = app.rwa_budget;
    let strobe = app.max_strobe_difference["H_P"];
    let lab = (app.final_lab["H_P"] - app.ground_energy).abs();
    let eff = (app.final_effective["H_P"] - app.ground_energy).abs();
    outcome(
        strobe < budget && lab < budget && eff < budget,
        format!(
            "T = {:.4} ({} periods), budget {budget:.4e}: max strobe diff {strobe:.3e}, final lab-E0 {lab:.3e}, final eff-E0 {eff:.3e}",
            app.total_time, app.periods
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut cfg = preset("paper-appendix").unwrap();
    cfg.mode = Mode::EnergyDiagram;
    match execute(&cfg).unwrap() {
        Report::Diagram(d) => outcome(
            d.min_gap > 0.0 && d.grid_points == 200,
            format!("min gap {:.6e} at s = {:.4} over {} points", d.min_gap, d.min_gap_s, d.grid_points),
        ),
        _ => unreachable!(),
    }
}

fn max_commutator_with_sigma_z(h: &LinOp, space: &HilbertSpace) -> f64 {
    (0..space.num_qubits())
        .map(|i| {
            let z = space.qubit_op(i, &pauli(PauliAxis::Z)).unwrap();
            commutator(h, &z).unwrap().max_abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_6() -> Outcome {
    let spec: HybridProblemSpec = preset("paper-appendix").unwrap().hybrid.unwrap();
    let omega = spec.drive_frequency.unwrap();
    let space = HilbertSpace::qubits_and_resonators(1, 1, 10).unwrap();
    let eff = build_effective(&spec, &space).unwrap();

    let mut frame_dev: f64 = 0.0;
    for n in [1usize, 7, 500, 9998] {
        let u = rotating_transform(&space, &spec, 2.0 * PI * n as f64 / omega).unwrap();
        let back = &(&u.adjoint() * &eff.problem) * &u;
        frame_dev = frame_dev.max(back.max_abs_diff(&eff.problem).unwrap());
    }

    let enc = encode(&MipInstance::production_planning(), &MipDriver::uniform(2, 1.0, 1.0)).unwrap();
    let mip_space = enc.space(8).unwrap();
    let mip_problem = enc.problem_hamiltonian(&mip_space).unwrap();
    let comm = max_commutator_with_sigma_z(&mip_problem, &mip_space)
        .max(max_commutator_with_sigma_z(&eff.problem, &space))
        .max(max_commutator_with_sigma_z(&build_problem_hamiltonian(&spec, &space).unwrap(), &space));

    let mut ladder_dev: f64 = 0.0;
    for n in 2..=16 {
        let a = annihilation(n).unwrap();
        let c = commutator(&a, &a.adjoint()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = match (i == j, i == n - 1) {
                    (false, _) => 0.0,
                    (true, false) => 1.0,
                    (true, true) => 1.0 - n as f64,
                };
                ladder_dev = ladder_dev.max((c.matrix()[(i, j)] - hqa_core::C64::new(want, 0.0)).norm());
            }
        }
    }

    let t_mid = 0.5 * 408.2;
    let lab0 = build_lab_frame(&spec, &space, 0.0).unwrap();
    let lab1 = build_lab_frame(&spec, &space, 0.3).unwrap();
    let lab2 = build_lab_frame(&spec, &space, t_mid).unwrap();
    let builders = [
        mip_problem,
        enc.replacement_hamiltonian(&mip_space).unwrap(),
        enc.driver_hamiltonian(&mip_space).unwrap(),
        build_problem_hamiltonian(&spec, &space).unwrap(),
        build_driver_hamiltonian(&spec, &space).unwrap(),
        eff.problem.clone(),
        eff.driver.clone(),
        lab0.problem,
        lab0.driver,
        lab1.problem,
        lab1.driver,
        lab2.problem,
        lab2.driver,
    ];
    let herm = builders.iter().map(|h| h.hermitian_deviation()).fold(0.0, f64::max);

    // Squares of square roots carry a few ulps of rounding.
    let ladder_ok = ladder_dev <= 64.0 * f64::EPSILON;
    outcome(
        frame_dev < 1e-10 && comm < 1e-12 && ladder_ok && herm < 1e-12,
        format!(
            "U†H_P^eff U - H_P^eff {frame_dev:.2e} (< 1e-10); [H_P, σz] {comm:.2e} (< 1e-12); [a,a†] structure dev {ladder_dev:.2e}; Hermiticity {herm:.2e} (< 1e-12)"
        ),
    )
}

fn convergence_line(r: &ConvergenceReport) -> String {
    let bad: Vec<String> = r
        .rows
        .iter()
        .filter(|row| !row.passed)
        .map(|row| {
            format!(
                "{} dN {:.2e} dtol {:.2e}",
                row.observable, row.delta_truncation, row.delta_tol
            )
        })
        .collect();
    let worst_n = r.rows.iter().map(|x| x.delta_truncation).fold(0.0, f64::max);
    let worst_t = r.rows.iter().map(|x| x.delta_tol).fold(0.0, f64::max);
    format!(
        "{}: worst dN {worst_n:.2e}, worst dtol {worst_t:.2e}{}",
        r.name,
        if bad.is_empty() { String::new() } else { format!(" [over 1e-4: {}]", bad.join(", ")) }
    )
}

fn criterion_7(base_fig: &MipAnnealReport, base_app: &AppendixReport) -> Outcome {
    let fig = fig_config();
    let [_, doubled, halved] = variants(&fig);
    let fig_runs = [
        Report::MipAnneal(Box::new(base_fig.clone())).convergence_observables(),
        execute(&doubled).unwrap().convergence_observables(),
        execute(&halved).unwrap().convergence_observables(),
    ];
    let fig_report = compare(&fig, fig_runs);

    let app = preset("paper-appendix").unwrap();
    let [_, doubled, halved] = variants(&app);
    let app_runs = [
        Report::Appendix(Box::new(base_app.clone())).convergence_observables(),
        execute(&doubled).unwrap().convergence_observables(),
        execute(&halved).unwrap().convergence_observables(),
    ];
    let app_report = compare(&app, app_runs);
    outcome(
        fig_report.converged && app_report.converged,
        format!("{}; {}", convergence_line(&fig_report), convergence_line(&app_report)),
    )
}

fn criterion_8(base: &MipAnnealReport) -> Outcome {
    let mut excess = Vec::new();
    for t in [1000.0, 2000.0] {
        let mut cfg = fig_config();
        cfg.total_time = t;
        excess.push(anneal_with(&cfg).excess_energy);
    }
    excess.push(base.excess_energy);
    // Allow for the energy error of the integrator itself.
    let slack = 1e-6;
    let monotone = excess.windows(2).all(|w| w[1] <= w[0] + slack);
    let metric = base.adiabaticity.max;
    outcome(
        metric < 0.1 && monotone,
        format!(
            "max metric {metric:.3e} at s = {:.3} (< 0.1); excess at T=1000,2000,4000: {:.3e}, {:.3e}, {:.3e}",
            base.adiabaticity.argmax_s, excess[0], excess[1], excess[2]
        ),
    )
}

fn main() {
    let start = Instant::now();
    let base_fig = anneal_with(&fig_config());
    let base_app = appendix_report(execute(&preset("paper-appendix").unwrap()).unwrap());

    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("1 energy at end of anneal", Box::new(|| criterion_1(&base_fig))),
        ("2 final occupations and quadratures", Box::new(|| criterion_2(&base_fig))),
        ("3 oracle equivalence", Box::new(criterion_3)),
        ("4 stroboscopic lab vs rotating frame", Box::new(|| criterion_4(&base_app))),
        ("5 gap positivity", Box::new(criterion_5)),
        ("6 operator identities", Box::new(criterion_6)),
        ("7 convergence in N and tolerance", Box::new(|| criterion_7(&base_fig, &base_app))),
        ("8 adiabaticity", Box::new(|| criterion_8(&base_fig))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} ({:.1}s)",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of 8 criteria passed in {:.0}s",
        8 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
