mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand};
use nalgebra::DVector;
use qudit_hhl::chem::{self, SweepConfig};
use qudit_hhl::hhl::{choose_defaults, hhl_solve_real, HhlConfig};
use qudit_hhl::linalg::real_to_complex;
use qudit_hhl::resources::{self, compare_table};
use qudit_hhl::textio;
use qudit_hhl::toy::ToySystem;

use output::{boolean, fixed, int, num, text, Cell, Format, Table};

/// Shift applied to the plot-only HF column.
const PLOT_HF_SHIFT: f64 = -0.005;

#[derive(Debug, Parser)]
#[command(
    name = "qhhl",
    version,
    about = "Qudit HHL solver, chemistry sweeps and resource tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Qudit dimension.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,

    /// Clock register size.
    #[arg(long, global = true)]
    nr: Option<usize>,

    /// Evolution time.
    #[arg(long, global = true)]
    t: Option<f64>,

    /// Inversion constant, in eigenvalue units.
    #[arg(long, global = true)]
    c: Option<f64>,

    /// Truncate C to n_r base-d digits on the phase scale.
    #[arg(long = "c-expand", global = true)]
    c_expand: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a built-in 3x3 system (diag or nondiag).
    Toy { system: ToySystem },
    /// Solve A x = b from matrix and vector files.
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Correlation energies for a directory of CI Hamiltonians.
    Chem {
        dir: PathBuf,
        /// Add an HF column shifted for plotting.
        #[arg(long)]
        plot_shift: bool,
        /// Use the raw principal sub-matrix without the reference shift.
        #[arg(long)]
        no_shift: bool,
    },
    /// Register sizes and gate counts.
    Resources {
        /// Binary versus ternary state-register sizes for N_s = 2..20.
        #[arg(long, conflicts_with_all = ["p", "ns"])]
        table3: bool,
        /// Decimal precisions, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        p: Vec<u32>,
        /// Spin-orbital counts: `a..b` (inclusive) or a comma list.
        #[arg(long)]
        ns: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3])]
        dims: Vec<usize>,
    },
}

impl Cli {
    fn overrides(&self, mut config: HhlConfig) -> Result<HhlConfig> {
        if let Some(t) = self.t {
            config.t = t;
        }
        if let Some(c) = self.c {
            config.c = c;
        }
        config = config.with_c_expansion(self.c_expand);
        config.validate()?;
        Ok(config)
    }

    fn emit(&self, table: &Table) -> Result<()> {
        output::emit(&table.render(self.format), self.out.as_deref())
    }
}

fn usage_error(message: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::ValueValidation, message)
        .exit()
}

fn parse_ns(spec: &str) -> Option<Vec<u64>> {
    let values: Vec<u64> = match spec.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (a..=b).collect()
        }
        None => spec
            .split(',')
            .map(|s| s.trim().parse().ok())
            .collect::<Option<_>>()?,
    };
    (!values.is_empty() && values.iter().all(|&n| n >= 1)).then_some(values)
}

fn cmd_toy(cli: &Cli, system: ToySystem) -> Result<()> {
    let sizes = match cli.nr {
        Some(n) => vec![n],
        None => system.default_clock_sizes(),
    };
    let mut table = Table::new(&[
        "system",
        "dim",
        "n_r",
        "t",
        "c",
        "c_expansion",
        "x0",
        "x1",
        "x2",
        "b_dot_x",
        "b_dot_x_classical",
        "pfd_percent",
        "p_success",
    ]);
    for n_r in sizes {
        let config = cli.overrides(system.reference_config(cli.dim as usize, n_r)?)?;
        let r = system
            .run(&config)
            .with_context(|| format!("{} with n_r = {n_r}", system.name()))?;
        let mut row = vec![
            text(r.system),
            int(r.dim),
            int(r.n_r),
            num(r.t),
            num(r.c),
            boolean(r.c_expansion),
        ];
        row.extend(r.x.iter().map(|&x| fixed(x, 5)));
        row.extend([
            fixed(r.b_dot_x, 5),
            fixed(r.b_dot_x_classical, 5),
            fixed(r.pfd_percent, 2),
            num(r.p_success),
        ]);
        table.push(row);
    }
    cli.emit(&table)
}

fn cmd_solve(cli: &Cli, matrix: &Path, rhs: &Path) -> Result<()> {
    let a = textio::read_matrix_file(matrix, &[])?.matrix;
    let b = textio::read_vector_file(rhs)?;
    if b.len() != a.nrows() {
        bail!(
            "{} is {}x{} but {} has {} entries",
            matrix.display(),
            a.nrows(),
            a.ncols(),
            rhs.display(),
            b.len()
        );
    }
    let n_r = cli.nr.unwrap_or(4);
    let config = cli.overrides(choose_defaults(
        &real_to_complex(&a),
        cli.dim as usize,
        n_r,
    )?)?;
    let sol = hhl_solve_real(&a, &b, &config)?;
    let classical = a
        .clone()
        .lu()
        .solve(&DVector::from_column_slice(&b))
        .context("matrix is singular")?;
    let b_dot = |x: &mut dyn Iterator<Item = f64>| b.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
    let max_error = sol
        .x_vector
        .iter()
        .zip(classical.iter())
        .map(|(h, c)| (h - c).norm())
        .fold(0.0, f64::max);

    let mut columns: Vec<String> = [
        "dim",
        "n_r",
        "t",
        "c",
        "c_eff",
        "p_success",
        "p_ancilla",
        "overlap",
        "b_norm",
        "b_dot_x",
        "b_dot_x_classical",
        "max_abs_error",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut row: Vec<Cell> = vec![
        int(config.dim),
        int(config.n_r),
        num(config.t),
        num(config.c),
        num(sol.c_eff),
        num(sol.p_success),
        num(sol.p_ancilla),
        num(sol.overlap),
        num(sol.b_norm),
        num(b_dot(&mut sol.x_vector.iter().map(|z| z.re))),
        num(b_dot(&mut classical.iter().copied())),
        num(max_error),
    ];
    for (i, (h, c)) in sol.x_vector.iter().zip(classical.iter()).enumerate() {
        columns.extend([
            format!("x{i}_re"),
            format!("x{i}_im"),
            format!("x{i}_classical"),
        ]);
        row.extend([num(h.re), num(h.im), num(*c)]);
    }
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    table.push(row);
    cli.emit(&table)
}

/// Returns the number of geometries that failed.
fn cmd_chem(cli: &Cli, dir: &Path, plot_shift: bool, no_shift: bool) -> Result<usize> {
    let loaded = chem::load_ci_directory(dir)?;
    let mut failures: Vec<(String, String)> = Vec::new();
    let mut hams = Vec::new();
    for (path, h) in loaded {
        match h {
            Ok(h) => hams.push(h),
            Err(e) => failures.push((path.display().to_string(), e.to_string())),
        }
    }
    let config = SweepConfig {
        dim: cli.dim as usize,
        n_r: cli.nr.unwrap_or(5),
        t: cli.t,
        c: cli.c,
        c_expansion: cli.c_expand,
        shift: !no_shift,
    };

    let mut columns = vec![
        "file",
        "r",
        "e_hf",
        "e_cisd",
        "e_lccsd",
        "e_hhl",
        "e_cisd_corr",
        "e_lccsd_corr",
        "e_hhl_corr",
        "k",
        "overlap",
        "p_success",
        "dim",
        "n_r",
        "t",
        "c",
    ];
    if plot_shift {
        columns.push("e_hf_plot");
    }
    let mut table = Table::new(&columns);
    for (h, result) in hams.iter().zip(chem::pec_sweep(&hams, &config)) {
        let g = match result {
            Ok(g) => g,
            Err(e) => {
                failures.push((h.source.clone(), e.to_string()));
                continue;
            }
        };
        let name = Path::new(&g.source)
            .file_name()
            .map_or(g.source.clone(), |f| f.to_string_lossy().into_owned());
        let mut row = vec![
            text(name),
            num(g.r),
            fixed(g.e_hf, 6),
            fixed(g.e_hf + g.cisd_corr, 6),
            fixed(g.e_hf + g.lccsd_corr, 6),
            fixed(g.hhl.e_total, 6),
            fixed(g.cisd_corr, 6),
            fixed(g.lccsd_corr, 6),
            fixed(g.hhl.e_corr, 6),
            num(g.hhl.k),
            num(g.hhl.overlap),
            num(g.hhl.p_success),
            int(g.hhl.dim),
            int(g.hhl.n_r),
            num(g.hhl.t),
            num(g.hhl.c),
        ];
        if plot_shift {
            row.push(fixed(g.e_hf + PLOT_HF_SHIFT, 6));
        }
        table.push(row);
    }
    cli.emit(&table)?;
    for (source, message) in &failures {
        eprintln!("error: {source}: {message}");
    }
    if !failures.is_empty() {
        eprintln!(
            "{} of {} geometries failed",
            failures.len(),
            failures.len() + table.rows.len()
        );
    }
    Ok(failures.len())
}

fn cmd_resources(
    cli: &Cli,
    table3: bool,
    p: &[u32],
    ns: Option<&str>,
    dims: &[usize],
) -> Result<()> {
    if table3 {
        let rows = resources::state_register_table();
        let content = match cli.format {
            Format::Csv => resources::state_register_csv(&rows),
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        };
        return output::emit(&content, cli.out.as_deref());
    }
    if p.is_empty() {
        usage_error("resources needs --table3 or --p");
    }
    let ns = match ns {
        Some(spec) => parse_ns(spec).unwrap_or_else(|| {
            usage_error(format!("invalid --ns '{spec}', expected a..b or a list"))
        }),
        None => (2..=100).collect(),
    };
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        usage_error(format!("dimension {d} in --dims is below 2"));
    }
    let rows = compare_table(p, &ns, dims)?;
    let mut table = Table::new(&[
        "p",
        "n_s",
        "n",
        "d",
        "n_r",
        "n_r_real",
        "m",
        "m_real",
        "ancilla",
        "total",
        "total_difference",
        "cu_applications",
        "iqft_two_qudit",
        "iqft_formula",
        "ucr_rotations",
        "decomposition_scale",
    ]);
    for row in rows {
        let e = &row.estimate;
        table.push(vec![
            int(e.p),
            e.n_s.map_or(Cell::Empty, int),
            int(e.n),
            int(e.d),
            int(e.n_r),
            num(e.n_r_real),
            int(e.m),
            num(e.m_real),
            int(e.ancilla),
            int(e.total),
            int(row.total_difference),
            int(e.cu_applications),
            int(e.iqft_two_qudit),
            num(e.iqft_formula),
            int(e.ucr_rotations),
            num(e.decomposition_scale),
        ]);
    }
    cli.emit(&table)
}

fn run(cli: &Cli) -> Result<usize> {
    match &cli.command {
        Command::Toy { system } => cmd_toy(cli, *system).map(|_| 0),
        Command::Solve { matrix, rhs } => cmd_solve(cli, matrix, rhs).map(|_| 0),
        Command::Chem {
            dir,
            plot_shift,
            no_shift,
        } => cmd_chem(cli, dir, *plot_shift, *no_shift),
        Command::Resources {
            table3,
            p,
            ns,
            dims,
        } => cmd_resources(cli, *table3, p, ns.as_deref(), dims).map(|_| 0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
