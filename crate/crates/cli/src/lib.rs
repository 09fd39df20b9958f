//! The `rootnum` command line: argument parsing, one library call per
//! subcommand, JSON or text rendering, and exit codes.

pub mod fixtures;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rootnum::artin::{self, GroupId, RepDescriptor};
use rootnum::curve::{self, WeierstrassModel};
use rootnum::globalroot::{self, FieldDescriptor, Parity};
use rootnum::localroot::{self, ExtPlace};
use rootnum::predict::{self, Cubic};
use rootnum::{Error, Sign};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "rootnum-cli/1";

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const UNSUPPORTED: i32 = 2;
    pub const FACTORIZATION: i32 = 3;
    pub const PARSE: i32 = 4;
    pub const FIXTURE: i32 = 5;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedLocalCase { .. } | Error::UnsupportedSplitting { .. } => exit::UNSUPPORTED,
        Error::FactorizationIncomplete { .. } => exit::FACTORIZATION,
        Error::ParseError { .. } => exit::PARSE,
        _ => exit::OTHER,
    }
}

#[derive(Debug, Parser)]
#[command(name = "rootnum", version, about = "Root numbers of elliptic curves and parity predictions")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Known factor of the discriminant; may be repeated.
    #[arg(long = "hint-factor", global = true, value_name = "N")]
    pub hints: Vec<BigInt>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CurveArg {
    /// Model as [a1,a2,a3,a4,a6]; entries may be p/q.
    #[arg(long, value_parser = parse_model, allow_hyphen_values = true)]
    pub curve: WeierstrassModel,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local root number at a prime, `inf`, or a place (e, f) of an extension.
    Local {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        prime: String,
        #[arg(long, requires = "f")]
        e: Option<u32>,
        #[arg(long, requires = "e")]
        f: Option<u32>,
    },
    /// Global root number over Q.
    Global {
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Global root number over a number field.
    Basechange {
        #[command(flatten)]
        curve: CurveArg,
        /// quad:d, biquad:a,b, zeta8, radical:m=..,p=..,n=.., good:r=..,c=.., c2pow:d
        #[arg(long, allow_hyphen_values = true)]
        field: FieldDescriptor,
    },
    /// Root numbers of all quadratic twists by squarefree |d| <= bound.
    TwistScan {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        bound: u64,
    },
    /// Root number over Q(m^(1/p^n)) for a semistable curve good at p.
    Tower {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: BigInt,
    },
    #[command(subcommand)]
    Artin(ArtinCommand),
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Parity verdict for the congruent number problem.
    Congruent {
        #[arg(long)]
        n: BigInt,
        /// Recompute the root number from local data and compare with the table.
        #[arg(long)]
        engine: bool,
    },
    #[command(subcommand)]
    Family(FamilyCommand),
    #[command(subcommand)]
    Predict(PredictCommand),
    /// Run a fixture corpus (the bundled one by default).
    Verify {
        #[arg(long)]
        fixtures: Option<std::path::PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ArtinCommand {
    /// w(E/Q, rho) from w(E/Q), a representation descriptor and N_E.
    Twist {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        w: Sign,
        /// JSON {dim, self_dual, alpha, coprime_attested}.
        #[arg(long, value_parser = parse_rep)]
        rep: RepDescriptor,
        #[arg(long)]
        conductor: BigInt,
    },
    /// Irreducible representations of a built-in group (D2n, Sn, A5, C2^d).
    Table {
        #[arg(long, value_parser = parse_group)]
        group: GroupId,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Forced multiplicity parities over a D_2q extension.
    Dihedral {
        #[arg(long)]
        q: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wq: Sign,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wquad: Sign,
        /// Comma-separated w(E/Q, rho_i).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_sign)]
        wrho: Vec<Sign>,
    },
    /// Odd-dimensional irreducible count of S_n.
    SnCount {
        #[arg(long)]
        n: u64,
    },
    /// Rank bound over an S_n extension when w(E/Q) = -1.
    Sn {
        #[arg(long)]
        n: u64,
    },
    /// floor(k / m) from odd self-dual dimensions and the order <= 2 character count.
    Order2 {
        #[arg(long, value_delimiter = ',', required_unless_present = "group")]
        dims: Vec<u64>,
        #[arg(long, required_unless_present = "group")]
        m: Option<u64>,
        /// Read dimensions and m from a built-in table instead.
        #[arg(long, value_parser = parse_group, conflicts_with_all = ["dims", "m"])]
        group: Option<GroupId>,
    },
    /// rk(E/F) >= n for a C_n extension of a Heegner field.
    Heegner {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        heegner_attested: bool,
        #[arg(long)]
        coprime_attested: bool,
    },
    /// The twist with root number -1 over K(sqrt Delta_K).
    SqrtDisc {
        #[arg(long, value_enum)]
        degree_parity: ParityArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wq: Sign,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Fibres of y^2 = x(x^2 - 49(1 + t^4)^2) at t = l/m with |l|, |m| <= bound.
    Cassels {
        #[arg(long)]
        bound: u64,
    },
    /// Fibres of y^2 = x^3 + t x^2 - (t + 3) x + 1 for integers t in [from, to].
    Washington {
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
    },
    /// Partner cubic g = d0 f such that every d is represented by f or g.
    Partner {
        /// Coefficients [a,b,c,e] of a x^3 + b x^2 + c x + e.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cubic)]
        cubic: Cubic,
        /// Twist sample; defaults to squarefree |d| <= 30.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        d: Vec<i64>,
    },
    /// Compare twist root numbers of two cubics on a sample of d.
    Flip {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cubic)]
        f: Cubic,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_cubic)]
        g: Cubic,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        d: Vec<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PredictCommand {
    /// Whether every place of Q splits into an even number of places.
    EvenRank {
        #[arg(long, allow_hyphen_values = true)]
        field: FieldDescriptor,
    },
    /// Growth over Q(zeta_8) for curves split multiplicative at 2.
    Zeta8 {
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Constant twist root numbers over K (fake CM).
    Fakecm {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        no_real_places: bool,
        #[arg(long)]
        abelian_good_reduction: bool,
        /// w(E/K), if known.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wk: Option<Sign>,
    },
    /// Smallest negative d0 flipping every twist root number.
    D0 {
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Minimalist Galois module W_G for a group without quadratic characters.
    Wg {
        #[arg(long, value_parser = parse_group)]
        group: GroupId,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wq: Sign,
    },
    /// Minimalist prediction over the D10 field of discriminant -3^5 5^13.
    D10 {
        #[arg(long)]
        conductor: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wq: Sign,
    },
    /// The key (N_E mod 8|Delta_F|, w) of minimalist predictions.
    Galmod {
        #[arg(long)]
        conductor: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        delta: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        wq: Sign,
    },
}

fn parse_model(s: &str) -> Result<WeierstrassModel, String> {
    curve::parse_curve(s).map_err(|e| e.to_string())
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rep(s: &str) -> Result<RepDescriptor, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn parse_group(s: &str) -> Result<GroupId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cubic(s: &str) -> Result<Cubic, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// The outcome of a subcommand: a JSON result and the exit code it implies.
pub struct Outcome {
    pub command: &'static str,
    pub result: Value,
    pub code: i32,
}

fn ok(command: &'static str, result: Value) -> Outcome {
    Outcome { command, result, code: exit::OK }
}

pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let hints = &cli.hints;
    Ok(match &cli.command {
        Command::Local { curve, prime, e, f } => {
            let w = match (prime.as_str(), e, f) {
                ("inf", _, _) => localroot::root_number_infinite(),
                (p, Some(e), Some(f)) => localroot::local_root_number_ext(&curve.curve, &ExtPlace::new(parse_int(p)?, *e, *f))?,
                (p, _, _) => localroot::local_root_number(&curve.curve, &parse_int(p)?)?,
            };
            ok("local", json!({ "curve": curve.curve, "prime": prime, "root_number": w }))
        }
        Command::Global { curve } => {
            let w = globalroot::global_root_number_with_hints(&curve.curve, hints)?;
            ok("global", json!({ "curve": curve.curve, "root_number": w }))
        }
        Command::Basechange { curve, field } => {
            let w = globalroot::base_change_root_number_with_hints(&curve.curve, field, hints)?;
            ok("basechange", json!({ "curve": curve.curve, "field": field, "root_number": w }))
        }
        Command::TwistScan { curve, bound } => {
            ok("twist-scan", to_value(globalroot::twist_scan_with_hints(&curve.curve, *bound, hints)?))
        }
        Command::Tower { curve, p, n, m } => {
            let w = globalroot::tower_root_number_with_hints(&curve.curve, *p, *n, m, hints)?;
            ok("tower", json!({ "curve": curve.curve, "p": p, "n": n, "m": m.to_string(), "root_number": w }))
        }
        Command::Artin(ArtinCommand::Twist { w, rep, conductor }) => {
            let r = artin::artin_twist_root(*w, rep, conductor)?;
            ok("artin", json!({ "rep": rep, "conductor": conductor.to_string(), "root_number": r }))
        }
        Command::Artin(ArtinCommand::Table { group }) => ok("artin", to_value(artin::group_table(*group)?)),
        Command::Bounds(b) => bounds(b)?,
        Command::Congruent { n, engine: true } => {
            ok("congruent", json!({ "n": n.to_string(), "root_number": predict::congruent_root_verified(n)? }))
        }
        Command::Congruent { n, engine: false } => ok("congruent", to_value(predict::predicted_congruent(n)?)),
        Command::Family(f) => family(f)?,
        Command::Predict(p) => prediction(p, hints)?,
        Command::Verify { fixtures: path } => {
            let report = match path {
                Some(p) => fixtures::run_fixtures(p)?,
                None => fixtures::run_corpus(fixtures::BUNDLED_CORPUS)?,
            };
            let code = if report.failed == 0 { exit::OK } else { exit::FIXTURE };
            Outcome { command: "verify", result: to_value(report), code }
        }
    })
}

fn parse_int(s: &str) -> Result<BigInt, Error> {
    s.parse().map_err(|_| Error::ParseError { line: 1, msg: format!("not an integer: {s:?}") })
}

fn bounds(b: &BoundsCommand) -> Result<Outcome, Error> {
    Ok(match b {
        BoundsCommand::Dihedral { q, wq, wquad, wrho } => {
            ok("bounds", to_value(artin::dihedral_parity_solver(*q, *wq, *wquad, wrho)?))
        }
        BoundsCommand::SnCount { n } => ok("bounds", json!({ "n": n, "count": artin::sn_odd_irrep_count(*n).to_string() })),
        BoundsCommand::Sn { n } => ok("bounds", json!({ "n": n, "bound": artin::sn_rank_bound(*n)?.to_string() })),
        BoundsCommand::Order2 { dims, m, group } => {
            let bound = match group {
                Some(g) => artin::order2_bound_for(&artin::group_table(*g)?)?,
                None => artin::order2_bound(dims, m.unwrap_or(0))?,
            };
            ok("bounds", json!({ "bound": bound }))
        }
        BoundsCommand::Heegner { n, heegner_attested, coprime_attested } => {
            ok("bounds", json!({ "bound": artin::heegner_bound(*n, *heegner_attested, *coprime_attested)? }))
        }
        BoundsCommand::SqrtDisc { degree_parity, wq } => {
            let parity = match degree_parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            let t = artin::sqrt_disc_growth(parity, *wq)?;
            ok("bounds", json!({ "twist": t.name(), "root_number": Sign::Minus, "conditional": true }))
        }
    })
}

fn family(f: &FamilyCommand) -> Result<Outcome, Error> {
    let sample = |d: &Vec<i64>| if d.is_empty() { predict::default_twist_sample() } else { d.clone() };
    Ok(match f {
        FamilyCommand::Cassels { bound } => ok("family", to_value(predict::cassels_scan(*bound)?)),
        FamilyCommand::Washington { from, to } => ok("family", to_value(predict::washington_scan(*from, *to)?)),
        FamilyCommand::Partner { cubic, d } => ok("family", to_value(predict::representability_partner(cubic, &sample(d))?)),
        FamilyCommand::Flip { f, g, d } => ok("family", to_value(predict::twist_flip_report(f, g, &sample(d))?)),
    })
}

fn prediction(p: &PredictCommand, hints: &[BigInt]) -> Result<Outcome, Error> {
    Ok(match p {
        PredictCommand::EvenRank { field } => {
            ok("predict", json!({ "field": field, "even_rank": predict::even_rank_field(field)?, "conditional": true }))
        }
        PredictCommand::Zeta8 { curve } => ok("predict", to_value(predict::zeta8_growth(&curve.curve)?)),
        PredictCommand::Fakecm { curve, no_real_places, abelian_good_reduction, wk } => ok(
            "predict",
            to_value(predict::fakecm_classify(&curve.curve, *no_real_places, *abelian_good_reduction, *wk)?),
        ),
        PredictCommand::D0 { curve } => {
            let d0 = globalroot::find_d0_with_hints(&curve.curve, hints)?;
            ok("predict", json!({ "curve": curve.curve, "d0": d0.to_string() }))
        }
        PredictCommand::Wg { group, wq } => {
            ok("predict", to_value(predict::minimalist_wg(&artin::group_table(*group)?, *wq)?))
        }
        PredictCommand::D10 { conductor, wq } => ok("predict", to_value(predict::minimalist_d10(conductor, *wq)?)),
        PredictCommand::Galmod { conductor, delta, wq } => {
            ok("predict", to_value(predict::galmod_key(conductor, delta, *wq)?))
        }
    })
}

/// JSON envelope or `key: value` text.
pub fn render(outcome: &Outcome, as_json: bool) -> String {
    if as_json {
        let v = json!({ "schema": SCHEMA, "command": outcome.command, "result": outcome.result });
        return serde_json::to_string(&v).expect("json");
    }
    match &outcome.result {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

pub fn render_error(e: &Error, as_json: bool) -> String {
    if as_json {
        let v = json!({ "schema": SCHEMA, "error": e.to_string(), "exit_code": exit_code(e) });
        serde_json::to_string(&v).expect("json")
    } else {
        format!("error: {e}")
    }
}

/// Parses `args` and runs the command. Returns the text to print and the exit code.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => exit::OK,
                _ => exit::PARSE,
            };
            return (e.render().to_string(), code);
        }
    };
    match execute(&cli) {
        Ok(out) => (render(&out, cli.json), out.code),
        Err(e) => (render_error(&e, cli.json), exit_code(&e)),
    }
}
