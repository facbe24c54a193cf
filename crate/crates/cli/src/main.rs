//! Command-line front end: construct, verify, convert, bounds, and
//! montecarlo over the rankforge file formats.
//!
//! Exit codes: 0 success / verification pass, 1 malformed input, 2
//! verification fail, 3 enumeration budget exceeded.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rankforge_core::bounds::{
    bound_dim_expander, bound_lossy_seeded, bound_two_source, LossyBoundMode, TwoSourceBoundMode,
};
use rankforge_core::error::Error;
use rankforge_core::expander::tensor_then_condense;
use rankforge_core::io::{self, parse_rat, RankforgeFile};
use rankforge_core::montecarlo::{montecarlo, RandomKind};
use rankforge_core::seeded::{
    design_from_condenser, lossless_collection, lossy_collection, lossy_functional_count,
    rat_ceil, rat_floor, RankMode, Rat,
};
use rankforge_core::twosource::{
    code_to_condenser, condense_tensor_lossless, condenser_to_code, gabidulin_code, pruned_lossless,
    roth_code,
};
use rankforge_core::verify::{
    verify_code, verify_design, verify_expander, verify_seeded, verify_two_source, VerifyMode,
    VerifyOptions, VerifyReport,
};
use rankforge_core::Field;

#[derive(Parser)]
#[command(name = "rankforge", version, about = "pseudorandom linear algebra over finite fields", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an object and write it to a file
    Construct(ConstructArgs),
    /// Check an object file's claimed property by brute force
    Verify(VerifyArgs),
    /// Transform one object file into another
    Convert(ConvertArgs),
    /// Existential parameter thresholds
    Bounds(BoundsArgs),
    /// Sample random objects and report the verified-success frequency
    Montecarlo(MontecarloArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    kind: ConstructKind,
}

#[derive(Args, Clone)]
struct CommonConstruct {
    /// Field written p^k, e.g. 13^1
    #[arg(long)]
    field: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Strong lossless seeded condenser (folded Wronskian)
    Lossless {
        #[command(flatten)]
        common: CommonConstruct,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
    },
    /// Lossy seeded condenser (<= r, eps)
    Lossy {
        #[command(flatten)]
        common: CommonConstruct,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        /// Rational a/b
        #[arg(long)]
        eps: String,
        /// Collection size (defaults to the functional count, no padding)
        #[arg(long)]
        size: Option<usize>,
    },
    /// Dimension expander via tensor-then-condense
    Expander {
        #[command(flatten)]
        common: CommonConstruct,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value = "0")]
        gamma: String,
    },
    /// Bilinear lossless two-source condenser
    TwoSource {
        #[command(flatten)]
        common: CommonConstruct,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = TwoSourceVariant::Pruned)]
        variant: TwoSourceVariant,
    },
    /// Gabidulin rank-metric code (field is the base F_q, written q^1)
    Gabidulin {
        #[command(flatten)]
        common: CommonConstruct,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Roth rank-metric code
    Roth {
        #[command(flatten)]
        common: CommonConstruct,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum TwoSourceVariant {
    Pruned,
    CondenseTensor,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Required in sampled mode
    #[arg(long)]
    seed: Option<u64>,
    /// Samples per checked dimension in sampled mode
    #[arg(long)]
    trials: Option<u64>,
    /// Exhaustive work-unit budget
    #[arg(long)]
    budget: Option<u128>,
    /// Verifier shard count; reports are identical for every value
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(subcommand)]
    kind: ConvertKind,
}

#[derive(Subcommand)]
enum ConvertKind {
    /// Collection file -> design file (orthogonal-complement duality)
    DesignFromCondenser {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bilinear condenser file -> rank-metric code file (kernel view)
    CondenserToCode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank-metric code file -> bilinear condenser file (parity-check view)
    CodeToCondenser {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Collection over F_{p^k} -> collection over F_p via the coordinate map
    Lift {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Target base field, written p^1
        #[arg(long)]
        base: String,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[command(subcommand)]
    kind: BoundsKind,
}

#[derive(Subcommand)]
enum BoundsKind {
    /// Existential degree bound for dimension expanders
    DimExp {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        json: bool,
    },
    /// Existential size bound for lossy seeded condensers
    Lossy {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value_t = LossyModeArg::Le)]
        mode: LossyModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Existential output bound for bilinear two-source condensers
    TwoSource {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value = "0")]
        eps: String,
        /// lossless (eps = 0), eq (both ranks exact), le (first source <= r)
        #[arg(long, value_enum)]
        mode: Option<TwoSourceModeArg>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum LossyModeArg {
    Le,
    Eq,
}

#[derive(Copy, Clone, ValueEnum)]
enum TwoSourceModeArg {
    Lossless,
    Eq,
    Le,
}

#[derive(Args)]
struct MontecarloArgs {
    #[arg(long, value_enum)]
    kind: MontecarloKind,
    #[arg(long)]
    field: String,
    /// Master seed; every randomized path requires one explicitly
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum MontecarloKind {
    MatrixRank,
    Lossy,
    DimExpander,
    TwoSource,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders help/version through the error path as well
            use clap::error::ErrorKind;
            match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    std::process::exit(0);
                }
                _ => {
                    let line = err.to_string().lines().next().unwrap_or("bad arguments").to_string();
                    eprintln!("{line}");
                    std::process::exit(1);
                }
            }
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            match err {
                Error::Budget { .. } => 3,
                _ => 1,
            }
        }
    };
    std::process::exit(code);
}

fn parse_field(spec: &str) -> Result<Field, Error> {
    let (p, k) = spec
        .split_once('^')
        .ok_or_else(|| Error::Parse(format!("field '{spec}': expected p^k, e.g. 13^1")))?;
    let p: u64 = p.parse().map_err(|_| Error::Parse(format!("field characteristic '{p}'")))?;
    let k: u32 = k.parse().map_err(|_| Error::Parse(format!("field extension degree '{k}'")))?;
    Field::new(p, k)
}

fn named_rat(name: &str, s: &str) -> Result<Rat, Error> {
    parse_rat(s).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Construct(args) => run_construct(args),
        Command::Verify(args) => run_verify(args),
        Command::Convert(args) => run_convert(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Montecarlo(args) => run_montecarlo(args),
    }
}

fn run_construct(args: ConstructArgs) -> Result<i32, Error> {
    match args.kind {
        ConstructKind::Lossless { common, n, t, r } => {
            let field = parse_field(&common.field)?;
            let c = lossless_collection(&field, n, t, r)?;
            std::fs::write(&common.out, io::collection_to_string(&c))?;
            println!("wrote {} ({} matrices, {})", common.out.display(), c.matrices.len(), c.claim.describe());
        }
        ConstructKind::Lossy { common, n, t, r, eps, size } => {
            let field = parse_field(&common.field)?;
            let eps = named_rat("--eps", &eps)?;
            let size = match size {
                Some(s) => s,
                None => lossy_functional_count(n, t, r, eps)?,
            };
            let c = lossy_collection(&field, n, t, r, eps, size)?;
            std::fs::write(&common.out, io::collection_to_string(&c))?;
            println!("wrote {} ({} matrices, {})", common.out.display(), c.matrices.len(), c.claim.describe());
        }
        ConstructKind::Expander { common, n, d, eps, delta, gamma } => {
            let field = parse_field(&common.field)?;
            let eps = named_rat("--eps", &eps)?;
            let delta = named_rat("--delta", &delta)?;
            let gamma = named_rat("--gamma", &gamma)?;
            let r_sub = rat_floor(eps * Rat::new(n as i64, 1)).max(0) as usize;
            if r_sub < 1 {
                return Err(Error::InvalidParams(format!(
                    "--eps: floor(eps*n) = 0, nothing to expand at n={n}"
                )));
            }
            let rc = rat_ceil((Rat::new(1, 1) - gamma) * Rat::new((r_sub * d) as i64, 1)) as usize;
            let input = n * d;
            let size = lossy_functional_count(input, n, rc, delta)?;
            let c = lossy_collection(&field, input, n, rc, delta, size)?;
            let x = tensor_then_condense(&c, d, gamma)?;
            std::fs::write(&common.out, io::expander_to_string(&x))?;
            println!("wrote {} (degree {}, {})", common.out.display(), x.degree(), x.describe());
        }
        ConstructKind::TwoSource { common, n, m, r, s, variant } => {
            let field = parse_field(&common.field)?;
            let b = match variant {
                TwoSourceVariant::Pruned => pruned_lossless(&field, n, m, r, s)?,
                TwoSourceVariant::CondenseTensor => condense_tensor_lossless(&field, n, m, r, s)?,
            };
            std::fs::write(&common.out, io::bilinear_to_string(&b))?;
            println!("wrote {} ({})", common.out.display(), b.describe());
        }
        ConstructKind::Gabidulin { common, m, n, r } => {
            let field = parse_field(&common.field)?;
            if !field.is_prime_field() {
                return Err(Error::Parse(
                    "--field: Gabidulin base field must be written q^1 with q prime".into(),
                ));
            }
            let code = gabidulin_code(field.p(), m, n, r)?;
            std::fs::write(&common.out, io::code_to_string(&code))?;
            println!("wrote {} (dim {}, dist {})", common.out.display(), code.dim(), code.dist);
        }
        ConstructKind::Roth { common, n, m, r } => {
            let field = parse_field(&common.field)?;
            let code = roth_code(&field, n, m, r)?;
            std::fs::write(&common.out, io::code_to_string(&code))?;
            println!("wrote {} (dim {}, dist {})", common.out.display(), code.dim(), code.dist);
        }
    }
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Result<i32, Error> {
    let mut opts = VerifyOptions::default();
    match args.mode {
        ModeArg::Exhaustive => {}
        ModeArg::Sampled => {
            let seed = args
                .seed
                .ok_or_else(|| Error::Parse("--seed: sampled mode requires an explicit seed".into()))?;
            let trials = args
                .trials
                .ok_or_else(|| Error::Parse("--trials: sampled mode requires a trial count".into()))?;
            opts.mode = VerifyMode::Sampled { seed, count: trials };
        }
    }
    if let Some(budget) = args.budget {
        opts.budget = budget;
    }
    if let Some(jobs) = args.jobs {
        opts.jobs = jobs.max(1);
    }
    let report: VerifyReport = match io::read_file(&args.input)? {
        RankforgeFile::Matrix(_) => {
            return Err(Error::Parse(
                "--in: matrix files carry no claim to verify".into(),
            ))
        }
        RankforgeFile::Collection(c) => verify_seeded(&c, &opts)?,
        RankforgeFile::Design(d) => verify_design(&d, &opts)?,
        RankforgeFile::Expander(x) => verify_expander(&x, &opts)?,
        RankforgeFile::Code(c) => verify_code(&c, &opts)?,
        RankforgeFile::Bilinear(b) => verify_two_source(&b, &opts)?,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report json"));
    } else {
        println!("{}", report.render_text());
    }
    Ok(if report.pass { 0 } else { 2 })
}

fn run_convert(args: ConvertArgs) -> Result<i32, Error> {
    match args.kind {
        ConvertKind::DesignFromCondenser { input, out } => {
            let RankforgeFile::Collection(c) = io::read_file(&input)? else {
                return Err(Error::Parse("--in: expected a collection file".into()));
            };
            let d = design_from_condenser(&c)?;
            std::fs::write(&out, io::design_to_string(&d))?;
            println!("wrote {} ({} subspaces, {})", out.display(), d.subspaces.len(), d.describe());
        }
        ConvertKind::CondenserToCode { input, out } => {
            let RankforgeFile::Bilinear(b) = io::read_file(&input)? else {
                return Err(Error::Parse("--in: expected a bilinear condenser file".into()));
            };
            let code = condenser_to_code(&b)?;
            std::fs::write(&out, io::code_to_string(&code))?;
            println!("wrote {} (dim {}, dist {})", out.display(), code.dim(), code.dist);
        }
        ConvertKind::CodeToCondenser { input, out } => {
            let RankforgeFile::Code(c) = io::read_file(&input)? else {
                return Err(Error::Parse("--in: expected a code file".into()));
            };
            let b = code_to_condenser(&c)?;
            std::fs::write(&out, io::bilinear_to_string(&b))?;
            println!("wrote {} ({})", out.display(), b.describe());
        }
        ConvertKind::Lift { input, out, base } => {
            let RankforgeFile::Collection(c) = io::read_file(&input)? else {
                return Err(Error::Parse("--in: expected a collection file".into()));
            };
            let target = parse_field(&base)?;
            if !target.is_prime_field() || target.p() != c.field.p() {
                return Err(Error::Parse(format!(
                    "--base: must be the prime base field {}^1 of the input",
                    c.field.p()
                )));
            }
            let provenance = format!("p={} k={}", c.field.p(), c.field.k());
            let lifted = rankforge_core::smallfield::lift_condenser(&c)?;
            std::fs::write(&out, io::collection_to_string_with_provenance(&lifted, Some(&provenance)))?;
            println!("wrote {} ({} matrices over F_{})", out.display(), lifted.matrices.len(), lifted.field.q());
        }
    }
    Ok(0)
}

fn run_bounds(args: BoundsArgs) -> Result<i32, Error> {
    let (report, json) = match args.kind {
        BoundsKind::DimExp { q, alpha, eps, json } => {
            let alpha = named_rat("--alpha", &alpha)?;
            let eps = named_rat("--eps", &eps)?;
            (bound_dim_expander(q, alpha, eps), json)
        }
        BoundsKind::Lossy { q, n, t, r, eps, mode, json } => {
            let eps = named_rat("--eps", &eps)?;
            let mode = match mode {
                LossyModeArg::Le => LossyBoundMode::Le,
                LossyModeArg::Eq => LossyBoundMode::Eq,
            };
            (bound_lossy_seeded(q, n, t, r, eps, mode), json)
        }
        BoundsKind::TwoSource { q, n, m, r, s, eps, mode, json } => {
            let eps = named_rat("--eps", &eps)?;
            let mode = match mode {
                Some(TwoSourceModeArg::Lossless) => TwoSourceBoundMode::Lossless,
                Some(TwoSourceModeArg::Eq) => TwoSourceBoundMode::Eq,
                Some(TwoSourceModeArg::Le) => TwoSourceBoundMode::Le,
                None if eps == Rat::new(0, 1) => TwoSourceBoundMode::Lossless,
                None => TwoSourceBoundMode::Eq,
            };
            (bound_two_source(q, n, m, r, s, eps, mode), json)
        }
    };
    match report {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report json"));
            } else {
                println!("{}", report.render_text());
            }
            Ok(0)
        }
        Err(Error::InvalidParams(msg)) if msg.starts_with("bound inapplicable") => {
            println!("{msg}");
            Ok(0)
        }
        Err(e) => Err(e),
    }
}

fn run_montecarlo(args: MontecarloArgs) -> Result<i32, Error> {
    let field = parse_field(&args.field)?;
    let need = |name: &str, v: Option<usize>| {
        v.ok_or_else(|| Error::Parse(format!("{name} is required for this kind")))
    };
    let need_rat = |name: &str, v: &Option<String>| -> Result<Rat, Error> {
        match v {
            Some(s) => named_rat(name, s),
            None => Err(Error::Parse(format!("{name} is required for this kind"))),
        }
    };
    let kind = match args.kind {
        MontecarloKind::MatrixRank => RandomKind::MatrixRankAtMost {
            n: args.n,
            m: need("--m", args.m)?,
            r: need("--r", args.r)?,
        },
        MontecarloKind::Lossy => RandomKind::LossyCollection {
            n: args.n,
            t: need("--t", args.t)?,
            count: need("--count", args.count)?,
            r: need("--r", args.r)?,
            eps: need_rat("--eps", &args.eps)?,
            mode: RankMode::Le,
        },
        MontecarloKind::DimExpander => RandomKind::DimExpander {
            n: args.n,
            d: need("--d", args.d)?,
            eps: need_rat("--eps", &args.eps)?,
            alpha: need_rat("--alpha", &args.alpha)?,
        },
        MontecarloKind::TwoSource => RandomKind::TwoSource {
            n: args.n,
            m: need("--m", args.m)?,
            t: need("--t", args.t)?,
            r: need("--r", args.r)?,
            s: need("--s", args.s)?,
            eps: need_rat("--eps", &args.eps)?,
        },
    };
    let report = montecarlo(&field, &kind, args.seed, args.trials)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report json"));
    } else {
        println!("{}", report.render_text());
    }
    Ok(0)
}
