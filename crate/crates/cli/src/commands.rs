//! One function per subcommand. Each writes a deterministic report (resolved
//! config header, summary lines, CSV blocks) and decides the exit status.

use std::fmt::Write as _;
use std::fs;

use pointbethe::bethe::{coefficients_bc_oracle, MAX_ORACLE_N};
use pointbethe::couplings::gauge_data;
use pointbethe::exec::Execution;
use pointbethe::factorization::{
    block_reduction_check, check_factorization_panel, classify, scan_couplings, yang_baxter_matrix_check,
};
use pointbethe::sampling::{random_momenta, seeded_rng, SamplePanel};
use pointbethe::scattering::{amplitudes, amplitudes_bvp_oracle};
use pointbethe::tolerance;
use pointbethe::wavefunction::{all_pairs_boundary_residual, gauge_transform, grid_csv, PositionVector};
use pointbethe::{BetheState, CoefficientVector, CouplingParameters, GridSpec, MomentumVector};

use crate::config::{Command, RunConfig};
use crate::Failure;

struct Report {
    text: String,
    failures: Vec<String>,
}

impl Report {
    fn new(cfg: &RunConfig) -> Self {
        Report { text: cfg.to_string(), failures: Vec::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// Records `name = value` and marks a failure when above `tol`.
    fn residual(&mut self, name: &str, value: f64, tol: f64) {
        let ok = value <= tol;
        self.line(format!("{name} = {value:.6e} ({})", if ok { "ok" } else { "FAIL" }));
        if !ok {
            self.failures.push(format!("{name} = {value:.3e} > {tol:.1e}"));
        }
    }

    fn finish(mut self, cfg: &RunConfig) -> Result<(), Failure> {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        self.line(format!("# result = {verdict}"));
        print!("{}", self.text);
        if let Some(path) = &cfg.output_path {
            fs::write(path, &self.text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        }
        if self.failures.is_empty() {
            Ok(())
        } else {
            Err(Failure::Residual(self.failures.join("; ")))
        }
    }
}

fn params(cfg: &RunConfig) -> Result<CouplingParameters, Failure> {
    Ok(CouplingParameters::new(cfg.c[0], cfg.lambda[0], cfg.gamma[0], cfg.eta[0])?)
}

fn momenta(cfg: &RunConfig) -> Result<MomentumVector, Failure> {
    let k = match &cfg.momenta {
        Some(k) => k.clone(),
        None => random_momenta(&mut seeded_rng(cfg.seed), cfg.n_particles, 2.0, 0.2),
    };
    Ok(MomentumVector::new(k)?)
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    match cfg.command {
        Command::Scatter => scatter(cfg),
        Command::YbCheck => yb_check(cfg),
        Command::Scan => scan(cfg),
        Command::Coeffs => coeffs(cfg),
        Command::Eigen => eigen(cfg),
        Command::Gauge => gauge(cfg),
    }
}

fn scatter(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params(cfg)?;
    let mut report = Report::new(cfg);
    report.line("u,re_st_plus,im_st_plus,re_sr_plus,im_sr_plus,re_st_minus,im_st_minus,re_sr_minus,im_sr_minus,oracle_rel_err");
    let mut worst: f64 = 0.0;
    for step in 0..cfg.u_steps {
        let u = if cfg.u_steps == 1 {
            cfg.u_min
        } else {
            cfg.u_min + (cfg.u_max - cfg.u_min) * step as f64 / (cfg.u_steps - 1) as f64
        };
        let a = amplitudes(&p, u)?;
        let mut row = format!("{u:.16e}");
        for z in [a.s_t_plus, a.s_r_plus, a.s_t_minus, a.s_r_minus] {
            let _ = write!(row, ",{:.16e},{:.16e}", z.re, z.im);
        }
        // the lab-frame oracle needs k1 != k2
        if u == 0.0 {
            row.push_str(",n/a");
        } else {
            let oracle = amplitudes_bvp_oracle(&p, u / 2.0, -u / 2.0)?;
            let err = a.max_relative_difference(&oracle, 1e-12);
            worst = worst.max(err);
            let _ = write!(row, ",{err:.3e}");
        }
        report.line(row);
    }
    report.residual("max_oracle_rel_err", worst, cfg.tolerance);
    report.finish(cfg)
}

fn yb_check(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params(cfg)?;
    let n = cfg.n_particles;
    let panel = SamplePanel::seeded(cfg.seed, 100);
    let mut report = Report::new(cfg);
    report.line(format!("class = {}", classify(&p, tolerance::STRUCTURAL)));
    let fr = check_factorization_panel(&p, &panel)?;
    for (idx, r) in fr.residuals.iter().enumerate() {
        report.line(format!("factorization_{} = {r:.6e}", idx + 1));
    }
    let [g, real, imag] = fr.reduced_condition_residuals;
    report.line(format!("reduced_conditions = {g:.6e},{real:.6e},{imag:.6e}"));
    let yb = yang_baxter_matrix_check(&p, n, &panel, Execution::default())?;
    report.residual("unitarity", yb.unitarity, cfg.tolerance);
    report.residual("braid", yb.braid, cfg.tolerance);
    report.residual("commutation", yb.commutation, cfg.tolerance);
    if n >= 4 {
        let (u, v) = panel.pairs[0];
        for i in 1..n - 1 {
            let r = block_reduction_check(&p, n, i, u, v)?;
            report.residual(&format!("block_reduction_{i}"), r, cfg.tolerance);
        }
    }
    report.finish(cfg)
}

fn scan(cfg: &RunConfig) -> Result<(), Failure> {
    let mut grid = GridSpec::new(cfg.c.clone(), cfg.lambda.clone(), cfg.gamma.clone(), cfg.eta.clone());
    grid.panel_seed = cfg.seed;
    let result = scan_couplings(&grid, Execution::default())?;
    let mut report = Report::new(cfg);
    report.line(format!("# points = {}", result.rows.len()));
    report.line(format!("# passing = {}", result.passing().len()));
    let bad = result.misclassified();
    report.line(format!("# misclassified = {}", bad.len()));
    for row in &bad {
        report.failures.push(format!("misclassified {} (residual {:.3e})", row.params, row.max_residual));
    }
    report.text.push_str(&result.to_csv());
    report.finish(cfg)
}

fn table_csv(state: &BetheState) -> String {
    let group = state.group();
    let mut out = String::from("p,q,re,im\n");
    for (pi, p) in group.elements().iter().enumerate() {
        for (qi, q) in group.elements().iter().enumerate() {
            let a = state.coefficient(pi, qi);
            let _ = writeln!(out, "{p},{q},{:.16e},{:.16e}", a.re, a.im);
        }
    }
    out
}

fn coeffs(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params(cfg)?;
    let k = momenta(cfg)?;
    let n = k.len();
    let a = CoefficientVector::unit(n, 0);
    let mut report = Report::new(cfg);
    report.line(format!("# momenta = {:?}", k.as_slice()));
    report.line(format!("# energy = {:.16e}", k.energy()));
    let state = BetheState::new(p, k.clone(), a.clone());
    if n <= MAX_ORACLE_N {
        let sol = coefficients_bc_oracle(&p, &k, &a)?;
        report.line(format!("# equations = {}, unknowns = {}, null_dimension = {}", sol.equations, sol.unknowns, sol.null_dimension));
        report.residual("oracle_residual", sol.residual, cfg.tolerance);
        if let Ok(state) = &state {
            report.residual("oracle_table_difference", state.max_table_difference(&sol.table), cfg.tolerance);
        }
    }
    match state {
        Ok(state) => report.text.push_str(&table_csv(&state)),
        Err(e) => {
            report.line(format!("# no table: {e}"));
            report.failures.push(e.to_string());
        }
    }
    report.finish(cfg)
}

fn grid_points(n: usize, per_axis: usize) -> Result<Vec<PositionVector>, Failure> {
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| if per_axis == 1 { 0.0 } else { -2.0 + 4.0 * i as f64 / (per_axis - 1) as f64 })
        .collect();
    let total = per_axis.checked_pow(n as u32).filter(|&t| t <= 1_000_000);
    let total = total.ok_or_else(|| Failure::Config(format!("grid of {per_axis}^{n} points is too large")))?;
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0.0; n];
            for slot in x.iter_mut() {
                *slot = axis[idx % per_axis];
                idx /= per_axis;
            }
            Ok(PositionVector::new(x)?)
        })
        .collect()
}

fn eigen(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params(cfg)?;
    let k = momenta(cfg)?;
    let state = BetheState::new(p, k.clone(), CoefficientVector::unit(k.len(), 0))?;
    let expansion = state.expansion();
    let mut report = Report::new(cfg);
    report.line(format!("# momenta = {:?}", k.as_slice()));
    report.line(format!("# energy = {:.16e}", k.energy()));
    if k.len() >= 2 {
        let r = all_pairs_boundary_residual(&expansion, &p, &mut seeded_rng(cfg.seed), cfg.samples)?;
        report.residual("boundary_r1", r.r1, cfg.tolerance);
        report.residual("boundary_r2", r.r2, cfg.tolerance);
    }
    let points = grid_points(k.len(), cfg.grid)?;
    let values = expansion.evaluate_many(&points, Execution::default())?;
    report.text.push_str(&grid_csv(&points, &values));
    report.finish(cfg)
}

fn gauge(cfg: &RunConfig) -> Result<(), Failure> {
    let p = params(cfg)?;
    let data = gauge_data(&p)?;
    let k = momenta(cfg)?;
    let state = BetheState::new(p, k.clone(), CoefficientVector::unit(k.len(), 0))?;
    let mapped = gauge_transform(&state)?;
    let mut report = Report::new(cfg);
    report.line(format!("# momenta = {:?}", k.as_slice()));
    report.line(format!("c_tilde = {:.16e}", data.c_tilde));
    report.line(format!("alpha = {:.16e}", data.alpha));
    if k.len() >= 2 {
        let delta = CouplingParameters::delta(data.c_tilde);
        let r = all_pairs_boundary_residual(&mapped, &delta, &mut seeded_rng(cfg.seed), cfg.samples)?;
        report.residual("delta_gas_r1", r.r1, cfg.tolerance);
        report.residual("delta_gas_r2", r.r2, cfg.tolerance);
    }
    report.finish(cfg)
}
