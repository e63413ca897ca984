//! Command-line front end: model time series and the randomized inequality sweep.
//!
//! Exit codes: 0 on success, 1 on configuration or I/O errors, 2 when a
//! computed bound is violated. Violations are written to `<out>.violation`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use rayon::prelude::*;

use crate::closed::ClosedBattery;
use crate::coherence::{generalized_coherence, offdiag_weight, CoherenceBasis};
use crate::error::{Error, Result};
use crate::ineq::{
    check_propositions, format_matrix, frobenius_trace_ineq, holder_rank_trace_ineq, lemma1, lemma1_prime,
    lemma1_unitary_corollary, lemma2, lemma2b, von_neumann_work_bounds, InequalityCheck, EQUALITY_TOL,
};
use crate::linalg::{commutator, DEFAULT_RANK_TOL};
use crate::models::{
    spin_boson_bound_series, spin_boson_build, two_spin_build, two_spin_power, two_spin_work, xy_modes,
    xy_work_bound_a, BoundPath, Protocol, SpinBosonParams, TwoSpinParams, XYChainParams,
};
use crate::models::xy::{xy_power_from_modes, xy_work_from_modes, FermionSector};
use crate::open::{kraus_bounds, lindblad_evolve, KrausChannel};
use crate::sample::{
    cell_seed, random_density_any_rank, random_hermitian, random_hermitian_kraus, random_hermitian_scaled,
    random_matrix, random_unitary, rng,
};
use crate::scalar::CMat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qbattery", version, about = "Work, power and energy-exchange bounds for quantum batteries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two spins in opposed fields, reduced to a two-level battery
    TwoSpin(TwoSpinArgs),
    /// Field quench of the anisotropic XY chain
    Xy(XyArgs),
    /// Dephasing spin with tunneling in a Markovian bath
    SpinBoson(SpinBosonArgs),
    /// Randomized check of every inequality and identity
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// CSV destination (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File receiving the resolved configuration as key=value lines
    #[arg(long)]
    pub params_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TwoSpinArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Bloch components of the reduced initial state
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0.1,0.2,0.05", allow_negative_numbers = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct XyArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub h1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub h2: f64,
    #[arg(long, default_value_t = 30.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 600)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpinBosonArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub omega0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub delta0: f64,
    #[arg(long, default_value_t = 10.0)]
    pub gamma: f64,
    /// Real initial coherence, with equal populations
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub rho12: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Number of output rows
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
    /// Integration step
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,6,8")]
    pub dims: Vec<usize>,
    /// Random instances per dimension
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// CSV payload with its parameter comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub params: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Result of a run before it is written out.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    /// One line per violated bound.
    pub violations: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

fn num(x: f64) -> String {
    // folds -0 into 0 so the text does not depend on the sign of a zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn param(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn check_grid(t_end: f64, steps: usize) -> std::result::Result<(), CliError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::Usage(format!("--t-end must be positive, got {t_end}")));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    Ok(())
}

fn grid(t_end: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|i| t_end * i as f64 / (steps - 1) as f64).collect()
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

const CLOSED_COLUMNS: [&str; 9] =
    ["t", "W", "P", "W_bound_A", "W_bound_B", "W_bound_C", "P_bound_A", "P_bound_B", "P_bound_C"];
const OPEN_COLUMNS: [&str; 8] = ["t", "E", "dE_abs", "bound_rhs", "WA", "WB", "re_rho12", "im_rho12"];
const VERIFY_COLUMNS: [&str; 7] = ["name", "dim", "seed", "lhs", "rhs", "slack_ratio", "holds"];

fn record(violations: &mut Vec<String>, at: &str, c: &InequalityCheck<f64>) {
    if !c.holds {
        violations.push(format!("{at} {} lhs={} rhs={}", c.name, num(c.lhs), num(c.rhs)));
    }
}

pub fn run_two_spin(a: &TwoSpinArgs) -> std::result::Result<RunOutput, CliError> {
    check_grid(a.t_end, a.steps)?;
    let eps: [f64; 3] = a
        .eps
        .as_slice()
        .try_into()
        .map_err(|_| CliError::Usage(format!("--eps takes three values, got {}", a.eps.len())))?;
    let p = TwoSpinParams::new(a.j, a.b, eps)?;
    let bat = two_spin_build(&p, Protocol::Opposed)?;
    let mut rows = Vec::with_capacity(a.steps);
    let mut violations = Vec::new();
    for t in grid(a.t_end, a.steps) {
        let wr = bat.work_bounds(t)?;
        let pr = bat.power_bounds(t)?;
        let (w, pw) = (two_spin_work(&p, t), two_spin_power(&p, t));
        let at = format!("t={}", num(t));
        for (q, bounds, prefix) in [(w, &wr, "W_bound_"), (pw, &pr, "P_bound_")] {
            for (name, b) in ["A", "B", "C"].iter().zip([bounds.bound_a, bounds.bound_b, bounds.bound_c]) {
                record(&mut violations, &at, &InequalityCheck::new(format!("{prefix}{name}"), q.abs(), b));
            }
        }
        rows.push(
            [t, w, pw, wr.bound_a, wr.bound_b, wr.bound_c, pr.bound_a, pr.bound_b, pr.bound_c].map(num).to_vec(),
        );
    }
    let params = vec![
        param("subcommand", "two-spin"),
        param("protocol", 2),
        param("j", a.j),
        param("b", a.b),
        param("eps", format!("{},{},{}", eps[0], eps[1], eps[2])),
        param("t_end", a.t_end),
        param("steps", a.steps),
    ];
    Ok(RunOutput { table: Table { params, header: header(&CLOSED_COLUMNS), rows }, violations })
}

pub fn run_xy(a: &XyArgs) -> std::result::Result<RunOutput, CliError> {
    check_grid(a.t_end, a.steps)?;
    let p = XYChainParams::new(a.n, a.eta, a.h1, a.h2)?;
    let modes = xy_modes(&p);
    let bound = xy_work_bound_a(&p);
    let times = grid(a.t_end, a.steps);
    let values: Vec<(f64, f64)> =
        times.par_iter().map(|&t| (xy_work_from_modes(&modes, t), xy_power_from_modes(&modes, t))).collect();
    let mut rows = Vec::with_capacity(a.steps);
    let mut violations = Vec::new();
    for (&t, &(w, pw)) in times.iter().zip(&values) {
        record(&mut violations, &format!("t={}", num(t)), &InequalityCheck::new("W_bound_A", w.abs(), bound));
        let mut row = vec![num(t), num(w), num(pw), num(bound)];
        row.extend(std::iter::repeat_n(String::new(), 5));
        rows.push(row);
    }
    let sector = match modes.sector {
        FermionSector::Antiperiodic => "antiperiodic",
        FermionSector::Periodic => "periodic",
    };
    let params = vec![
        param("subcommand", "xy"),
        param("n", a.n),
        param("eta", a.eta),
        param("h1", a.h1),
        param("h2", a.h2),
        param("t_end", a.t_end),
        param("steps", a.steps),
        param("sector", sector),
    ];
    Ok(RunOutput { table: Table { params, header: header(&CLOSED_COLUMNS), rows }, violations })
}

pub fn run_spin_boson(a: &SpinBosonArgs) -> std::result::Result<RunOutput, CliError> {
    check_grid(a.t_end, a.steps)?;
    let p = SpinBosonParams::with_rho12(a.omega0, a.delta0, a.gamma, Complex::new(a.rho12, 0.0))?;
    let m = spin_boson_build(&p)?;
    let traj = lindblad_evolve(&m, &p.rho0, a.t_end, a.dt)?;
    let last = traj.len() - 1;
    if last < a.steps - 1 {
        return Err(CliError::Usage(format!(
            "--dt {} gives {last} integration steps, fewer than the {} output intervals",
            a.dt,
            a.steps - 1
        )));
    }
    let series = spin_boson_bound_series(&p, &traj)?;
    let mut violations = Vec::new();
    for (k, (&q, &b)) in series.general.quantity.iter().zip(&series.bound).enumerate() {
        record(&mut violations, &format!("t={}", num(traj.times[k])), &InequalityCheck::new("bound_rhs", q, b));
    }
    let div = a.steps - 1;
    let rows = (0..a.steps)
        .map(|j| {
            let k = (j * last + div / 2) / div;
            let r12 = traj.states[k][(0, 1)];
            [
                traj.times[k],
                traj.energies[k],
                series.general.quantity[k],
                series.bound[k],
                series.general.wa[k],
                series.general.wb[k],
                r12.re,
                r12.im,
            ]
            .map(num)
            .to_vec()
        })
        .collect();
    let path = match series.path {
        BoundPath::Specialized => "specialized",
        BoundPath::General => "general",
    };
    let params = vec![
        param("subcommand", "spin-boson"),
        param("omega0", a.omega0),
        param("delta0", a.delta0),
        param("gamma", a.gamma),
        param("rho12", a.rho12),
        param("t_end", a.t_end),
        param("steps", a.steps),
        param("dt", a.dt),
        param("bound_path", path),
    ];
    Ok(RunOutput { table: Table { params, header: header(&OPEN_COLUMNS), rows }, violations })
}

/// Random operators for one verification cell.
#[derive(Debug, Clone)]
pub struct Instance {
    pub dim: usize,
    pub seed: u64,
    pub a: CMat<f64>,
    pub b: CMat<f64>,
    pub x: CMat<f64>,
    pub u: CMat<f64>,
    pub rho: CMat<f64>,
    pub h0: CMat<f64>,
    pub v: CMat<f64>,
    pub kraus: Vec<CMat<f64>>,
    pub t: f64,
}

impl Instance {
    pub fn generate(dim: usize, seed: u64) -> Self {
        use rand::Rng;
        let mut r = rng(seed);
        let a = random_hermitian(&mut r, dim);
        let b = random_hermitian(&mut r, dim);
        let x = random_matrix(&mut r, dim);
        let u = random_unitary(&mut r, dim);
        let rho = random_density_any_rank(&mut r, dim);
        let h0 = random_hermitian_scaled(&mut r, dim, 10.0);
        let v = random_hermitian_scaled(&mut r, dim, 10.0);
        let count = r.random_range(1..=3);
        let kraus = random_hermitian_kraus(&mut r, dim, count);
        let t = r.random_range(0.05..3.0);
        Self { dim, seed, a, b, x, u, rho, h0, v, kraus, t }
    }

    pub fn describe(&self) -> String {
        let mut s = format!("dim={} seed={} t={}\n", self.dim, self.seed, num(self.t));
        for (name, m) in
            [("A", &self.a), ("B", &self.b), ("X", &self.x), ("U", &self.u), ("rho", &self.rho), ("H0", &self.h0), ("V", &self.v)]
        {
            s.push_str(&format!("{name} = [{}]\n", format_matrix(m)));
        }
        for (i, k) in self.kraus.iter().enumerate() {
            s.push_str(&format!("K{i} = [{}]\n", format_matrix(k)));
        }
        s
    }
}

/// Every inequality and identity family evaluated on one instance.
pub fn verify_instance(inst: &Instance) -> Result<Vec<InequalityCheck<f64>>> {
    let (a, b, x, u, rho, h0, v) = (&inst.a, &inst.b, &inst.x, &inst.u, &inst.rho, &inst.h0, &inst.v);
    let mut out = vec![
        frobenius_trace_ineq(x, b)?,
        holder_rank_trace_ineq(h0, &(u.adjoint() * commutator(rho, u)?), DEFAULT_RANK_TOL)?,
        lemma1(a, b)?,
        lemma1_unitary_corollary(u, b)?,
        lemma1_prime(u, b)?,
        lemma2(u, b)?,
        lemma2b(a, b)?,
    ];
    let basis = CoherenceBasis::of_hermitian(a)?;
    out.extend(check_propositions(&basis, x, b)?);
    let c = generalized_coherence(x, &basis)?;
    let w = offdiag_weight(x, &basis)?;
    out.push(InequalityCheck::with_slack("coherence_offdiag", (c - w).abs(), EQUALITY_TOL * w.max(1.0), 0.0, 0.0));

    let bat = ClosedBattery::new(h0.clone(), v.clone(), rho.clone())?;
    out.extend(bat.work_bounds(inst.t)?.checks("work_"));
    out.extend(bat.power_bounds(inst.t)?.checks("power_"));
    out.push(bat.power_combined_bound(inst.t)?);
    out.extend(von_neumann_work_bounds(rho, h0, &bat.unitary(inst.t))?.checks());
    let ch = KrausChannel::new(inst.kraus.clone())?;
    out.extend(kraus_bounds(&ch, rho, h0)?.checks("kraus_"));
    Ok(out)
}

/// One row of the sweep.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub dim: usize,
    pub seed: u64,
    pub check: InequalityCheck<f64>,
}

/// Evaluates every `(dim, sample)` cell in parallel, each from its own
/// seed derived from `master`. Output order does not depend on scheduling.
pub fn verify_sweep(dims: &[usize], samples: usize, master: u64) -> Result<Vec<SweepRecord>> {
    let cells: Vec<(usize, u64)> =
        dims.iter().flat_map(|&d| (0..samples).map(move |i| (d, cell_seed(master, d, i)))).collect();
    let per_cell: Vec<Vec<SweepRecord>> = cells
        .par_iter()
        .map(|&(dim, seed)| {
            let checks = verify_instance(&Instance::generate(dim, seed))?;
            Ok(checks.into_iter().map(|check| SweepRecord { dim, seed, check }).collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

pub fn run_verify(a: &VerifyArgs) -> std::result::Result<RunOutput, CliError> {
    if a.dims.is_empty() || a.dims.iter().any(|&d| d < 2) {
        return Err(CliError::Usage("--dims needs dimensions of at least 2".into()));
    }
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let records = verify_sweep(&a.dims, a.samples, a.seed)?;
    let mut violations = Vec::new();
    let mut reported = std::collections::BTreeSet::new();
    for rec in &records {
        if !rec.check.holds {
            record(&mut violations, &format!("dim={} seed={}", rec.dim, rec.seed), &rec.check);
            if reported.insert(rec.seed) {
                violations.push(Instance::generate(rec.dim, rec.seed).describe());
            }
        }
    }
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.check.name.clone(),
                r.dim.to_string(),
                r.seed.to_string(),
                num(r.check.lhs),
                num(r.check.rhs),
                num(r.check.slack_ratio),
                r.check.holds.to_string(),
            ]
        })
        .collect();
    let dims: Vec<String> = a.dims.iter().map(|d| d.to_string()).collect();
    let params = vec![
        param("subcommand", "verify"),
        param("dims", dims.join(",")),
        param("samples", a.samples),
        param("seed", a.seed),
    ];
    Ok(RunOutput { table: Table { params, header: header(&VERIFY_COLUMNS), rows }, violations })
}

/// Writes the `# key=value ...` comment line, the header and the rows.
pub fn emit_csv<W: Write>(table: &Table, mut w: W) -> std::result::Result<(), CliError> {
    let comment: Vec<String> = table.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(w, "# {}", comment.join(" "))?;
    let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    csv.write_record(&table.header)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::result::Result<(), CliError>) -> std::result::Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn violation_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".violation");
    PathBuf::from(s)
}

/// Executes a parsed command and returns the exit code.
pub fn run(cli: &Cli) -> std::result::Result<i32, CliError> {
    let (result, output) = match &cli.command {
        Command::TwoSpin(a) => (run_two_spin(a)?, &a.output),
        Command::Xy(a) => (run_xy(a)?, &a.output),
        Command::SpinBoson(a) => (run_spin_boson(a)?, &a.output),
        Command::Verify(a) => (run_verify(a)?, &a.output),
    };
    if let Some(path) = &output.params_out {
        write_file(path, |w| {
            for (k, v) in &result.table.params {
                writeln!(w, "{k}={v}")?;
            }
            Ok(())
        })?;
    }
    match &output.out {
        Some(path) => write_file(path, |w| emit_csv(&result.table, w))?,
        None => emit_csv(&result.table, io::stdout().lock())?,
    }
    if result.violations.is_empty() {
        return Ok(EXIT_OK);
    }
    let report = |w: &mut dyn Write| -> io::Result<()> {
        let comment: Vec<String> = result.table.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(w, "# {}", comment.join(" "))?;
        for line in &result.violations {
            writeln!(w, "{line}")?;
        }
        Ok(())
    };
    match &output.out {
        Some(path) => write_file(&violation_path(path), |w| Ok(report(w)?))?,
        None => report(&mut io::stderr().lock())?,
    }
    eprintln!("{} bound violation(s) found", result.violations.iter().filter(|l| !l.contains('\n')).count());
    Ok(EXIT_VIOLATION)
}

/// Parses `args` (program name first), runs, and maps every failure to an exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qbattery").chain(args.iter().copied())).unwrap()
    }

    fn csv_text(out: &RunOutput) -> String {
        let mut buf = Vec::new();
        emit_csv(&out.table, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn flags_parse() {
        let cli = parse(&["two-spin", "--j", "1", "--b", "1", "--eps", "0,-0.1,0", "--t-end", "10", "--steps", "200"]);
        match cli.command {
            Command::TwoSpin(a) => assert_eq!(a.eps, vec![0.0, -0.1, 0.0]),
            _ => panic!("wrong subcommand"),
        }
        let cli = parse(&["xy", "--n", "8", "--h1", "-0.5"]);
        assert!(matches!(cli.command, Command::Xy(XyArgs { n: 8, .. })));
        let cli = parse(&["verify", "--dims", "2,3", "--samples", "5", "--seed", "9"]);
        assert!(matches!(cli.command, Command::Verify(VerifyArgs { samples: 5, seed: 9, .. })));
    }

    #[test]
    fn configuration_errors_exit_one() {
        assert_eq!(main_with_args(["qbattery", "xy", "--n", "7"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["qbattery", "two-spin", "--eps", "0.4,0.4,0.4"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["qbattery", "two-spin", "--eps", "0.1,0.1"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["qbattery", "xy", "--steps", "1"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["qbattery", "spin-boson", "--dt", "0.5"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["qbattery", "frobnicate"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["qbattery", "xy", "--eta", "abc"]), EXIT_CONFIG);
    }

    #[test]
    fn zero_state_gives_zero_work_column() {
        let cli = parse(&["two-spin", "--j", "1", "--b", "1", "--eps", "0,0,0", "--t-end", "10", "--steps", "200"]);
        let Command::TwoSpin(a) = &cli.command else { unreachable!() };
        let out = run_two_spin(a).unwrap();
        assert_eq!(out.table.rows.len(), 200);
        assert!(out.violations.is_empty());
        for row in &out.table.rows {
            assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
        }
    }

    #[test]
    fn single_row_round_trip() {
        let table = Table {
            params: vec![param("subcommand", "x"), param("k", 1.5)],
            header: header(&["t", "W"]),
            rows: vec![vec![num(0.1), num(-2.0 / 3.0)]],
        };
        let mut buf = Vec::new();
        emit_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# subcommand=x k=1.5");
        let body = lines.collect::<Vec<_>>().join("\n");
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        assert_eq!(rdr.headers().unwrap(), vec!["t", "W"]);
        let rec = rdr.records().next().unwrap().unwrap();
        assert_eq!(rec[0].parse::<f64>().unwrap(), 0.1);
        assert_eq!(rec[1].parse::<f64>().unwrap(), -2.0 / 3.0);
    }

    #[test]
    fn two_spin_golden_rows() {
        let cli = parse(&["two-spin", "--j", "1", "--b", "0.5", "--eps", "0.1,0.2,0.05", "--t-end", "1", "--steps", "3"]);
        let Command::TwoSpin(a) = &cli.command else { unreachable!() };
        let text = csv_text(&run_two_spin(a).unwrap());
        let expect = "# subcommand=two-spin protocol=2 j=1 b=0.5 eps=0.1,0.2,0.05 t_end=1 steps=3\n\
t,W,P,W_bound_A,W_bound_B,W_bound_C,P_bound_A,P_bound_B,P_bound_C\n";
        assert!(text.starts_with(expect), "{text}");
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(rows.len(), 3);
        let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
        // at t = 0: W = 0, P = −8BJε2, and bound A on the power is 12|BJ|sqrt(ε1² + ε2²)
        assert_eq!(&rows[0][..20], "0.0000000000000000e0");
        assert_eq!(first[1], 0.0);
        assert!((first[2] + 0.8).abs() < 1e-15);
        assert_eq!(first[3], 0.0);
        assert!((first[6] - 6.0 * 0.05f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn xy_small_chain_golden_rows() {
        let cli = parse(&["xy", "--n", "4", "--eta", "0.5", "--h1", "0", "--h2", "1", "--t-end", "2", "--steps", "3"]);
        let Command::Xy(a) = &cli.command else { unreachable!() };
        let out = run_xy(a).unwrap();
        let text = csv_text(&out);
        assert!(text.starts_with("# subcommand=xy n=4 eta=0.5 h1=0 h2=1 t_end=2 steps=3 sector=antiperiodic\n"));
        let p = XYChainParams::new(4, 0.5, 0.0, 1.0).unwrap();
        let row: Vec<&str> = text.lines().nth(3).unwrap().split(',').collect();
        assert_eq!(row.len(), 9);
        assert_eq!(row[1], num(crate::models::xy_work(&p, 1.0)));
        assert_eq!(row[3], num(xy_work_bound_a(&p)));
        assert!(row[4..].iter().all(|c| c.is_empty()));
    }

    #[test]
    fn spin_boson_rows_sample_the_trajectory() {
        let cli = parse(&["spin-boson", "--t-end", "0.5", "--steps", "11", "--dt", "1e-3"]);
        let Command::SpinBoson(a) = &cli.command else { unreachable!() };
        let out = run_spin_boson(a).unwrap();
        assert!(out.violations.is_empty());
        assert_eq!(out.table.rows.len(), 11);
        assert_eq!(out.table.rows[10][0], num(0.5));
        assert!(out.table.params.contains(&param("bound_path", "specialized")));
    }

    #[test]
    fn verify_rows_are_ordered_and_pass() {
        let recs = verify_sweep(&[2, 3], 4, 11).unwrap();
        assert!(recs.iter().all(|r| r.check.holds), "{:?}", recs.iter().find(|r| !r.check.holds));
        let again = verify_sweep(&[2, 3], 4, 11).unwrap();
        assert_eq!(recs.len(), again.len());
        for (x, y) in recs.iter().zip(&again) {
            assert_eq!((x.seed, &x.check.name, x.check.lhs), (y.seed, &y.check.name, y.check.lhs));
        }
        let names: std::collections::BTreeSet<&str> = recs.iter().map(|r| r.check.name.as_str()).collect();
        for n in ["lemma1", "lemma1_prime", "lemma2b", "prop4", "work_A", "power_C", "power_combined", "von_neumann_lower", "kraus_B"] {
            assert!(names.contains(n), "{n} missing");
        }
    }

    #[test]
    fn violations_are_written_next_to_the_output() {
        let dir = std::env::temp_dir().join(format!("qbattery-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("v.csv");
        let table = Table { params: vec![param("subcommand", "t")], header: header(&["t"]), rows: vec![vec![num(0.0)]] };
        let result = RunOutput { table, violations: vec!["t=0 W_bound_A lhs=1 rhs=0".into()] };
        write_file(&violation_path(&out), |w| {
            for l in &result.violations {
                writeln!(w, "{l}")?;
            }
            Ok(())
        })
        .unwrap();
        assert!(std::fs::read_to_string(dir.join("v.csv.violation")).unwrap().contains("W_bound_A"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
