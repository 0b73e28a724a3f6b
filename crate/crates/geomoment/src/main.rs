use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geomoment::commands::{self, Format, Output, PointChoice};
use geomoment_core::verify::DEFAULT_TOLERANCE;
use geomoment_core::{MomentKind, TemplateSet};

#[derive(Parser)]
#[command(name = "geomoment", version, about = "3D geometric moment invariants: generation, evaluation, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    Polynomial,
    Rational,
}

impl From<SetArg> for TemplateSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::Polynomial => TemplateSet::Polynomial,
            SetArg::Rational => TemplateSet::Rational,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Raw,
    Central,
    Normalized,
}

impl From<KindArg> for MomentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Raw => MomentKind::Raw,
            KindArg::Central => MomentKind::Central,
            KindArg::Normalized => MomentKind::Normalized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PointArg {
    /// The fixed integer point of the independence argument
    #[value(alias = "paper")]
    Reference,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the invariants of order 2 or 3 in normalized-moment variables
    Gen {
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value = "polynomial")]
        set: SetArg,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Moment tensor of a point cloud (.csv) or voxel grid (.json)
    Moments {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        #[arg(long, value_enum, default_value = "normalized")]
        kind: KindArg,
    },
    /// Evaluate an invariant set on a point cloud or voxel grid
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value = "polynomial")]
        set: SetArg,
    },
    /// Check invariance under random similarity transforms; exits 1 on failure
    Verify {
        /// Defaults to the bundled 50-point sample cloud
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        rotations: usize,
        #[arg(long, env = "TI_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Number of rational generators for order d, optionally the Poincaré coefficients
    Count {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        poincare: Option<usize>,
    },
    /// Jacobian rank of the 13 rational order-3 invariants
    Independence {
        #[arg(long, value_enum, default_value = "reference")]
        point: PointArg,
        #[arg(long, env = "TI_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Decompose the moment variables of the given orders into irreducible modules
    Decompose {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Run the exact symbolic self-check; exits 1 on any failure
    SelfCheck,
}

fn run(cmd: Command) -> geomoment::Result<Output> {
    match cmd {
        Command::Gen { order, set, format } => commands::gen(order, set.into(), format.into()),
        Command::Moments { input, max_order, kind } => commands::moments(&input, max_order, kind.into()),
        Command::Eval { input, order, set } => commands::eval(&input, order, set.into()),
        Command::Verify { input, rotations, seed, tol } => commands::verify(input.as_ref(), rotations, seed, tol),
        Command::Count { order, poincare } => commands::count(order, poincare),
        Command::Independence { point, seed } => {
            let p = match point {
                PointArg::Reference => PointChoice::Reference,
                PointArg::Random => PointChoice::Random,
            };
            commands::independence(p, seed)
        }
        Command::Decompose { orders, format } => commands::decompose(&orders, format.into()),
        Command::SelfCheck => commands::self_check(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
