use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use qkz_core::combinat::{parse_descriptor, reduction_trace};
use qkz_core::construct::{family, Kind};
use qkz_core::nullres::{coordinates, rational_string, DetMode};
use qkz_core::qchar::{
    branching, ch_m, ch_u, fermion_product, fermionic_identity, inv_qpochhammer_inf, ising_char, verify_tetranomial,
    virasoro_product, QSeries,
};
use qkz_core::verify::{run, Params, Suite};
use qkz_core::wedge::WedgeElement;
use qkz_core::Error;

mod table;

#[derive(Parser)]
#[command(name = "qkz", version, about = "Null-residue solution spaces of the level-zero sl2 qKZ system")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites
    Verify(VerifyArgs),
    /// Emit constructed objects
    Emit {
        #[command(subcommand)]
        what: EmitCmd,
    },
    /// Candidate basis of the null-residue space
    Basis(BasisArgs),
    /// A single generator
    Gen(GenArgs),
    /// Character of U or M
    Char(CharArgs),
    /// Branching function
    Branch(BranchArgs),
    /// Coordinates of an element in the candidate basis
    Coords(CoordsArgs),
    /// Rewrite an out-of-range monomial descriptor until it vanishes
    Reduce(ReduceArgs),
    /// Check a q-series identity
    Qid(QidArgs),
}

#[derive(Subcommand)]
enum EmitCmd {
    Basis(BasisArgs),
    Gen(GenArgs),
    Char(CharArgs),
    Branch(BranchArgs),
    Series(SeriesArgs),
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct Size {
    /// even number of variables
    #[arg(long, value_name = "N")]
    even: Option<usize>,
    /// odd number of variables
    #[arg(long, value_name = "N")]
    odd: Option<usize>,
}

impl Size {
    fn vars(&self) -> Result<Option<usize>, Error> {
        match (self.even, self.odd) {
            (Some(n), _) if n % 2 == 1 || n == 0 => Err(Error::Arity(format!("--even expects a positive even number, got {n}"))),
            (_, Some(n)) if n % 2 == 0 => Err(Error::Arity(format!("--odd expects an odd number, got {n}"))),
            (Some(n), _) | (_, Some(n)) => Ok(Some(n)),
            _ => Ok(None),
        }
    }

    fn require(&self) -> Result<usize, Error> {
        self.vars()?.ok_or_else(|| Error::Arity("one of --even or --odd is required".into()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Basis,
    Det,
    Span,
    Tetra,
    Char,
    Resolution,
    Special,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symbolic,
    Randomized,
}

impl From<ModeArg> for DetMode {
    fn from(m: ModeArg) -> DetMode {
        match m {
            ModeArg::Symbolic => DetMode::Symbolic,
            ModeArg::Randomized => DetMode::Randomized,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[command(flatten)]
    size: Size,
    #[arg(long)]
    ell: Option<usize>,
    /// half-size of the combinatorial model (span suite)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 20)]
    cutoff: usize,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = 8)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// include wall-clock time per suite
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BasisArgs {
    #[command(flatten)]
    size: Size,
    #[arg(long)]
    ell: usize,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    size: Size,
    /// v, w, v0, xi, xi1, xi2
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    U,
    M,
}

#[derive(Args)]
struct CharArgs {
    /// even or odd; must agree with --n
    #[arg(long)]
    parity: Option<String>,
    /// number of variables
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: i64,
    #[arg(long, default_value_t = 20)]
    cutoff: usize,
    #[arg(long, value_enum, default_value_t = Which::M)]
    which: Which,
}

#[derive(Args)]
struct BranchArgs {
    /// 0/even or 1/odd
    #[arg(long)]
    parity: String,
    #[arg(long)]
    lambda: u32,
    #[arg(long, default_value_t = 20)]
    cutoff: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesName {
    Virasoro,
    Ising,
    Partitions,
    FermionProduct,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    name: SeriesName,
    /// 0/even or 1/odd (ising)
    #[arg(long, default_value = "0")]
    parity: String,
    /// twice the spin (virasoro)
    #[arg(long, default_value_t = 0)]
    lambda: u32,
    #[arg(long, default_value_t = 20)]
    cutoff: usize,
}

#[derive(Args)]
struct CoordsArgs {
    #[command(flatten)]
    size: Size,
    /// generator to decompose
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// element JSON (as produced by `gen`); `-` reads standard input
    #[arg(long, conflicts_with = "kind")]
    input: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    n: usize,
    /// descriptor `(i_{l1-1},...,i_0|j_k,...,j_0)`
    #[arg(long)]
    descriptor: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Tetra,
    Fermionic,
    Ising,
}

#[derive(Args)]
struct QidArgs {
    #[arg(value_enum)]
    which: Identity,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value = "0")]
    parity: String,
    #[arg(long, default_value_t = 15)]
    cutoff: usize,
    #[arg(long, default_value_t = 6)]
    z_range: i64,
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn parse_parity(s: &str) -> Result<u8, Error> {
    match s.to_ascii_lowercase().as_str() {
        "0" | "even" => Ok(0),
        "1" | "odd" => Ok(1),
        _ => Err(Error::Parse(format!("parity must be 0, 1, even or odd, got {s:?}"))),
    }
}

fn verify(a: &VerifyArgs) -> Outcome {
    let suites: Vec<Suite> = match a.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Basis => vec![Suite::Basis],
        SuiteArg::Det => vec![Suite::Det],
        SuiteArg::Span => vec![Suite::Span],
        SuiteArg::Tetra => vec![Suite::Tetra],
        SuiteArg::Char => vec![Suite::Char],
        SuiteArg::Resolution => vec![Suite::Resolution],
        SuiteArg::Special => vec![Suite::Special],
    };
    let p = Params {
        vars: a.size.vars()?,
        ell: a.ell,
        n: a.n,
        n_max: a.n_max,
        cutoff: a.cutoff,
        mode: a.mode.map(Into::into),
        trials: a.trials,
        seed: a.seed,
        timing: a.timing,
    };
    let r = run(&suites, &p)?;
    Ok((value(&r), r.pass))
}

fn basis(a: &BasisArgs) -> Outcome {
    let vars = a.size.require()?;
    qkz_core::max_vars_check(vars)?;
    let rows: Vec<Value> = family(vars)
        .enumerate_basis(a.ell)?
        .into_iter()
        .map(|(idx, q)| json!({ "label": idx.to_string(), "index": value(&idx), "element": value(&q) }))
        .collect();
    Ok((json!({ "n": vars, "ell": a.ell, "basis": rows }), true))
}

fn generator(a: &GenArgs) -> Result<WedgeElement, Error> {
    let vars = a.size.require()?;
    qkz_core::max_vars_check(vars)?;
    let kind: Kind = a.kind.parse()?;
    Ok((*family(vars).generator(kind, a.index)?).clone())
}

fn gen(a: &GenArgs) -> Outcome {
    Ok((value(&generator(a)?), true))
}

fn char_cmd(a: &CharArgs) -> Outcome {
    if let Some(p) = &a.parity {
        if parse_parity(p)? as usize != a.n % 2 {
            return Err(Failure::Usage(format!("--parity {p} disagrees with --n {}", a.n)));
        }
    }
    qkz_core::max_vars_check(a.n)?;
    let s = match a.which {
        Which::U => ch_u(a.n, a.ell, a.cutoff),
        Which::M => ch_m(a.n, a.ell, a.cutoff),
    };
    Ok((value(&s), true))
}

fn branch(a: &BranchArgs) -> Outcome {
    Ok((value(&branching(parse_parity(&a.parity)?, a.lambda, a.cutoff)?), true))
}

fn series(a: &SeriesArgs) -> Outcome {
    let s: QSeries = match a.name {
        SeriesName::Virasoro => virasoro_product(a.lambda, a.cutoff),
        SeriesName::Ising => ising_char(parse_parity(&a.parity)?, a.cutoff),
        SeriesName::Partitions => inv_qpochhammer_inf(a.cutoff),
        SeriesName::FermionProduct => fermion_product(a.cutoff),
    };
    Ok((value(&s), true))
}

fn coords(a: &CoordsArgs) -> Outcome {
    let w: WedgeElement = match (&a.kind, &a.input) {
        (Some(kind), _) => generator(&GenArgs { size: a.size.clone(), kind: kind.clone(), index: a.index })?,
        (None, Some(path)) => {
            let mut text = String::new();
            if path == "-" {
                std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(e.to_string()))?;
            } else {
                text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            }
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad element JSON: {e}")))?
        }
        (None, None) => return Err(Failure::Usage("give --kind or --input".into())),
    };
    qkz_core::max_vars_check(w.vars())?;
    let c = coordinates(&w)?;
    let den = BigRational::from_integer(c.denominator.clone());
    let rows: Vec<Value> = c
        .rows
        .iter()
        .zip(&c.numerators)
        .filter(|(_, s)| !s.is_zero())
        .map(|(idx, s)| json!({ "label": idx.to_string(), "index": value(idx), "coefficient": value(s), "text": s.to_string() }))
        .collect();
    let out = json!({
        "n": w.vars(),
        "ell": w.ell(),
        "denominator": rational_string::format_rational(&den),
        "coordinates": rows,
    });
    Ok((out, true))
}

fn reduce(a: &ReduceArgs) -> Outcome {
    let d = parse_descriptor(a.n, &a.descriptor)?;
    Ok((value(&reduction_trace(&d)?), true))
}

fn qid(a: &QidArgs) -> Outcome {
    match a.which {
        Identity::Tetra => {
            let reports: Vec<_> = (0..=a.n_max as i64).map(verify_tetranomial).collect();
            let ok = reports.iter().all(|r| r.ok());
            Ok((value(&reports), ok))
        }
        Identity::Fermionic => {
            let r = fermionic_identity(parse_parity(&a.parity)?, a.cutoff, a.z_range)?;
            Ok((value(&r), r.equal))
        }
        Identity::Ising => {
            let s = ising_char(parse_parity(&a.parity)?, a.cutoff);
            let p = fermion_product(a.cutoff);
            let ok = s.agrees_with(&p);
            Ok((json!({ "sum": value(&s), "product": value(&p), "equal": ok }), ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Emit { what } => match what {
            EmitCmd::Basis(a) => basis(a),
            EmitCmd::Gen(a) => gen(a),
            EmitCmd::Char(a) => char_cmd(a),
            EmitCmd::Branch(a) => branch(a),
            EmitCmd::Series(a) => series(a),
        },
        Command::Basis(a) => basis(a),
        Command::Gen(a) => gen(a),
        Command::Char(a) => char_cmd(a),
        Command::Branch(a) => branch(a),
        Command::Coords(a) => coords(a),
        Command::Reduce(a) => reduce(a),
        Command::Qid(a) => qid(a),
    };
    match outcome {
        Ok((v, pass)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("json")),
                Format::Table => print!("{}", table::render(&v)),
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
