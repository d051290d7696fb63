use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use cfstammer::family::{parse_letters, Family, FamilyDescriptor, ThetaSpec};
use cfstammer::generators::{BlockSource, ConcatFamily};
use cfstammer::matgrowth::{alphabet_spectrum, block_growth_analyze};
use cfstammer::report::{analyze, AnalysisConfig, Source};
use cfstammer::suites;
use cfstammer::words::text::{self, format_word};
use cfstammer::words::{Alphabet, Exponent, FiniteWord};
use cfstammer::Error;

#[derive(Parser)]
#[command(
    name = "cfstammer",
    version,
    about = "Stammering continued fractions: generate words, scan for repetitions, apply the transcendence criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first letters of a family as one line of word text.
    Generate {
        family: String,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long)]
        count: usize,
    },
    /// Run the full analysis on a family prefix or a word file.
    Analyze(AnalyzeArgs),
    /// Run an invariant suite: floor-identities, continuants, matrix-growth, cross-oracles.
    Verify(VerifyArgs),
    /// Spectral radii of the letter matrices of an odd alphabet, optionally
    /// with the block-family continuant analysis.
    MatrixReport(MatrixArgs),
}

/// Family parameters; each flag becomes a `key=value` pair of the
/// descriptor.
#[derive(Args, Default)]
struct FamilyArgs {
    /// Letters for the binary families and paperfolding.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// binary or morphic.
    #[arg(long)]
    route: Option<String>,
    /// golden, silver, or a pattern such as 1,(2).
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// regular, seed:N, or a sign pattern such as +-+.
    #[arg(long)]
    folds: Option<String>,
    /// Seed word of a perturbed-symmetry system.
    #[arg(long)]
    w: Option<String>,
    /// Symmetries such as 3:R or 3.1:E,:R, separated by ';'.
    #[arg(long)]
    sym: Option<String>,
    /// Symmetry schedule: indices such as 0,1 or seed:N.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Explicit blocks, letters separated by ',', blocks by ';'.
    #[arg(long)]
    blocks: Option<String>,
    /// Morphism images, letters separated by ',', images by ';'.
    #[arg(long)]
    sigma: Option<String>,
    /// Letter coding applied to the fixed point.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    start: Option<String>,
    /// Extra `key=value` parameter.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    extra: Vec<String>,
}

impl FamilyArgs {
    fn descriptor(&self, name: &str) -> Result<FamilyDescriptor, Error> {
        let mut d = FamilyDescriptor::new(name);
        let named = [
            ("a", &self.a),
            ("b", &self.b),
            ("route", &self.route),
            ("theta", &self.theta),
            ("k", &self.k),
            ("folds", &self.folds),
            ("w", &self.w),
            ("sym", &self.sym),
            ("schedule", &self.schedule),
            ("alphabet", &self.alphabet),
            ("lambda", &self.lambda),
            ("seed", &self.seed),
            ("blocks", &self.blocks),
            ("sigma", &self.sigma),
            ("phi", &self.phi),
            ("start", &self.start),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                d.params.insert(key.to_string(), v.clone());
            }
        }
        for pair in &self.extra {
            d.push_pair(pair)?;
        }
        Ok(d)
    }

    fn is_empty(&self) -> bool {
        self.descriptor("")
            .map(|d| d.params.is_empty())
            .unwrap_or(false)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Family name; omit when reading --input.
    #[arg(required_unless_present = "input", conflicts_with = "input")]
    family: Option<String>,
    #[command(flatten)]
    params: FamilyArgs,
    /// Word file holding one word.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    prefix_len: Option<usize>,
    /// Number of distinct periods T required by both conditions.
    #[arg(long, short = 'T', default_value_t = 5)]
    scales: usize,
    /// Smallest exponent scanned, as p/q.
    #[arg(long, default_value = "11/10", value_parser = parse_ratio)]
    min_w: Exponent,
    /// Largest offset ratio |U|/|V| scanned, as p/q.
    #[arg(long, default_value = "1", value_parser = parse_ratio)]
    max_wprime: Exponent,
    /// Smallest period counted; default floor(sqrt(prefix length)).
    #[arg(long)]
    min_scale: Option<usize>,
    /// Largest offset |U| scanned; default the largest useful one.
    #[arg(long)]
    max_r: Option<usize>,
    #[arg(long, default_value_t = cfstammer::report::DEFAULT_TAIL_FRACTION)]
    tail_fraction: f64,
    /// Collapse the growth window to its last sample (default for baum-sweet).
    #[arg(long, conflicts_with = "no_assume_convergent")]
    assume_convergent: bool,
    #[arg(long)]
    no_assume_convergent: bool,
    /// Number of leading letters echoed in the report.
    #[arg(long, default_value_t = cfstammer::report::DEFAULT_FIRST_LETTERS)]
    first: usize,
    #[arg(long)]
    max_period: Option<usize>,
    #[arg(long)]
    max_preperiod: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    /// Continued fraction to test; repeatable. Default golden, silver and 1,(2).
    #[arg(long)]
    theta: Vec<String>,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Per-identity cap on checked tuples.
    #[arg(long, default_value_t = 100_000)]
    cap: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    max_letter: u64,
    /// Stream length compared by cross-oracles.
    #[arg(long, default_value_t = 100_000)]
    letters: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct MatrixArgs {
    /// Comma-separated letters, odd count at least 3.
    #[arg(long, default_value = "1,2,3")]
    alphabet: String,
    /// Also analyse a block family over the alphabet.
    #[arg(long)]
    block_growth: bool,
    #[arg(long, default_value_t = 4.0)]
    lambda: f64,
    /// Explicit blocks, letters separated by ',', blocks by ';'.
    #[arg(long, conflicts_with = "seed")]
    blocks: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    n_blocks: usize,
}

fn parse_ratio(s: &str) -> Result<Exponent, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: u64 = num
        .trim()
        .parse()
        .map_err(|_| format!("bad rational {s:?}"))?;
    let den: u64 = den
        .trim()
        .parse()
        .map_err(|_| format!("bad rational {s:?}"))?;
    if den == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(num, den))
}

enum Failure {
    Input(Error),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn read_word(path: &PathBuf) -> Result<FiniteWord, Error> {
    let content =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut file = text::parse(&content)?;
    if file.words.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "{} holds {} words; analyze expects exactly one",
            path.display(),
            file.words.len()
        )));
    }
    Ok(file.words.remove(0))
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let source = match (&args.family, &args.input) {
        (Some(name), _) => Source::Family(Family::from_descriptor(&args.params.descriptor(name)?)?),
        (None, Some(path)) => {
            if !args.params.is_empty() {
                return Err(
                    Error::InvalidParameter("family parameters given with --input".into()).into(),
                );
            }
            Source::Word {
                label: path.display().to_string(),
                word: read_word(path)?,
            }
        }
        (None, None) => unreachable!("clap requires a family or --input"),
    };
    let assume_convergent = match (args.assume_convergent, args.no_assume_convergent) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    };
    let cfg = AnalysisConfig {
        prefix_len: args.prefix_len,
        scales: args.scales,
        min_w: args.min_w,
        max_wprime: args.max_wprime,
        min_scale: args.min_scale,
        max_r: args.max_r,
        tail_fraction: args.tail_fraction,
        assume_convergent,
        first_letters: args.first,
        max_period: args.max_period,
        max_preperiod: args.max_preperiod,
    };
    let doc = analyze(&source, &cfg)?;
    match args.format {
        Format::Json => emit(&format!("{}\n", doc.to_json())),
        Format::Text => emit(&doc.to_text()),
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let report = match args.suite.as_str() {
        "floor-identities" => {
            let names = if args.theta.is_empty() {
                vec![
                    "golden".to_string(),
                    "silver".to_string(),
                    "1,(2)".to_string(),
                ]
            } else {
                args.theta.clone()
            };
            let thetas = names
                .iter()
                .map(|t| t.parse::<ThetaSpec>())
                .collect::<Result<Vec<_>, _>>()?;
            suites::floor_identities(&thetas, args.n_max, args.cap)?
        }
        "continuants" => suites::continuants(args.trials, args.seed),
        "matrix-growth" => {
            suites::matrix_growth(args.max_letter, args.trials.min(1000), args.seed)?
        }
        "cross-oracles" => suites::cross_oracles(args.letters, args.trials.min(1000), args.seed)?,
        other => return Err(Error::UnknownSuite(other.to_string()).into()),
    };
    match args.format {
        Format::Json => emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("report serializes")
        )),
        Format::Text => emit(&report.to_text()),
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn run_matrix(args: MatrixArgs) -> Result<(), Failure> {
    let alphabet = Alphabet::new(parse_letters(&args.alphabet)?)?;
    let json = if args.block_growth {
        let source = match &args.blocks {
            Some(b) => BlockSource::Explicit(
                b.split(';')
                    .map(|w| FiniteWord::new(parse_letters(w)?))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => BlockSource::Seeded(args.seed),
        };
        let fam = ConcatFamily::new(alphabet, source, args.lambda)?;
        serde_json::to_string_pretty(&block_growth_analyze(&fam, args.n_blocks)?)
    } else {
        serde_json::to_string_pretty(&alphabet_spectrum(&alphabet)?)
    };
    emit(&format!("{}\n", json.expect("report serializes")));
    Ok(())
}

/// Writes to stdout, staying quiet when the reader has gone away.
fn emit(text: &str) {
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            family,
            params,
            count,
        } => params
            .descriptor(&family)
            .and_then(|d| Family::from_descriptor(&d))
            .and_then(|f| f.prefix(count))
            .map(|w| emit(&format!("{}\n", format_word(&w))))
            .map_err(Failure::from),
        Command::Analyze(args) => run_analyze(args),
        Command::Verify(args) => run_verify(args),
        Command::MatrixReport(args) => run_matrix(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Suite) => {
            eprintln!("suite failed");
            ExitCode::from(3)
        }
    }
}
