use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use starq_core::poisson::PoissonMode;
use starq_core::star::Gauge;

#[derive(Parser, Debug)]
#[command(name = "starq", version, about = "Exact star products for integrable Poisson structures on R^3")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "STARQ_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build M_0 … M_N and write the star product.
    Construct(ConstructArgs),
    /// Check a stored star product by evaluation on monomials.
    Verify(VerifyArgs),
    /// Evaluate P·(curl P) for a Poisson vector.
    Jacobi(JacobiArgs),
    /// Report the obstruction AR_k.
    Obstruction(ObstructionArgs),
    /// Decide whether an abstract term is an ordered operator.
    OpoCheck(OpoCheckArgs),
    /// Render a stored star product as LaTeX.
    ExportLatex(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    NablaPhi,
    PsiNablaPhi,
}

impl From<ModeArg> for PoissonMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::NablaPhi => PoissonMode::NablaPhi,
            ModeArg::PsiNablaPhi => PoissonMode::PsiNablaPhi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Opo,
    Canonical,
}

impl From<GaugeArg> for Gauge {
    fn from(g: GaugeArg) -> Self {
        match g {
            GaugeArg::Opo => Gauge::Opo,
            GaugeArg::Canonical => Gauge::Canonical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Text,
}

/// Potentials: `sym` for free jet variables, `@path` to read a file, or an
/// inline polynomial.
#[derive(Args, Debug, Clone)]
pub struct PotentialArgs {
    #[arg(long, value_enum, default_value = "nabla-phi")]
    pub mode: ModeArg,
    #[arg(long, default_value = "sym")]
    pub phi: String,
    #[arg(long)]
    pub psi: Option<String>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub order: usize,
    /// Largest derivative order on a P-factor in symbolic mode; defaults to 2N+1.
    #[arg(long)]
    pub jet_order: Option<usize>,
    #[arg(long, value_enum, default_value = "opo")]
    pub gauge: GaugeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write obstruction and experiment reports.
    #[arg(long)]
    pub reports: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Restrict M_2, M_3 to ordered operators and test AR_4 = 0.
    #[arg(long)]
    pub opo_restrict: bool,
    /// With --opo-restrict, also admit unordered three-factor terms.
    #[arg(long, requires = "opo_restrict")]
    pub with_unordered: bool,
    /// Report which levels lift to ordered operators.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Potentials to substitute into a symbolic star product.
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub psi: Option<String>,
    /// Skip the triples derived from the slot pairs of each level.
    #[arg(long)]
    pub no_targeted: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct JacobiArgs {
    /// Components P^23, P^31, P^12 separated by commas.
    #[arg(long = "P", conflicts_with_all = ["phi", "psi"])]
    pub p: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub psi: Option<String>,
}

#[derive(Args, Debug)]
pub struct ObstructionArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "opo")]
    pub gauge: GaugeArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct OpoCheckArgs {
    /// A term such as `dP(r;i,s) dP(s;j,r) @1(i) @2(j)`.
    pub term: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
