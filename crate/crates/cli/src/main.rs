//! `swcc`: encode, decode, corrupt and count weight-constrained binary codes.
//!
//! Data files hold one bitstring per line (`0`/`1`, LF terminated).
//! Diagnostics go to stderr so pipes compose.

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use swcc_core::oracle::{
    count_secc, count_swcc, enumerate_class, measure_rate, verify_halfspace_bound, SamplePolicy,
    DEFAULT_ENUMERATION_BUDGET,
};
use swcc_core::{
    parse_fraction, tag_width, Band, BitSeq, Codec, CodeParams, Error, Mode, PolarityCodec,
    Profile, SCodec, SEccCodec, SPrimeCodec, WCodec, WEccCodec,
};

#[derive(Parser)]
#[command(name = "swcc", version, about = "Subblock and sliding-window energy-constrained codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode one payload per input line.
    Encode(CodecArgs),
    /// Decode one codeword per input line, correcting errors for ECC schemes.
    Decode {
        #[command(flatten)]
        codec: CodecArgs,
        /// Stop at the first line that fails to decode.
        #[arg(long)]
        strict: bool,
    },
    /// Flip bits in codewords under a bounded error model.
    Corrupt {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long, value_enum, default_value_t = ErrorModel::PerBlock)]
        model: ErrorModel,
        /// Expected flips per block, in [0, 1].
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sidecar listing flipped positions; defaults to `<output>.flips`.
        #[arg(long)]
        flips: Option<PathBuf>,
    },
    /// Exact class sizes.
    Count(ClassArgs),
    /// List class members in lexicographic order.
    Enumerate {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[command(flatten)]
        io: OutputArg,
    },
    /// Check |W| and |S| against 2^(n-1) directly.
    VerifyBounds(ClassArgs),
    /// Rate of a codec, with a round-trip check on sampled payloads.
    Rate {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Push every payload through the codec instead of sampling.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    S,
    SPrime,
    Polarity,
    W,
    SEcc,
    WEcc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ErrorModel {
    /// At most one flip in each block.
    PerBlock,
    /// Any two flips at least `ell` positions apart.
    MinDistance,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    a: Option<usize>,
    /// Defaults to `ell`.
    #[arg(long)]
    b: Option<usize>,
    /// Lower weight fraction as `num/den`.
    #[arg(long, requires = "p2")]
    p1: Option<String>,
    /// Upper weight fraction as `num/den`.
    #[arg(long, requires = "p1")]
    p2: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[command(flatten)]
    params: ParamArgs,
    /// Inner band for w-ecc.
    #[arg(long, requires = "inner_b")]
    inner_a: Option<usize>,
    #[arg(long, requires = "inner_a")]
    inner_b: Option<usize>,
    #[arg(long, short, default_value = "-")]
    input: PathBuf,
    #[command(flatten)]
    io: OutputArg,
}

#[derive(Args)]
struct OutputArg {
    #[arg(long, short, default_value = "-")]
    output: PathBuf,
}

#[derive(Args)]
struct ClassArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Restrict to one class; both are reported by default.
    #[arg(long)]
    mode: Option<Mode>,
}

/// Failure carrying its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::new(3, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } => 1,
            Error::Length { .. } | Error::Parse { .. } => 2,
            Error::BudgetExceeded(_) => 5,
            _ => 4,
        };
        Self::new(code, e.to_string())
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("swcc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Encode(args) => cmd_encode(&args),
        Command::Decode { codec, strict } => cmd_decode(&codec, strict),
        Command::Corrupt {
            codec,
            model,
            rate,
            seed,
            flips,
        } => cmd_corrupt(&codec, model, rate, seed, flips),
        Command::Count(args) => cmd_count(&args),
        Command::Enumerate { class, budget, io } => cmd_enumerate(&class, budget, &io.output),
        Command::VerifyBounds(args) => cmd_verify_bounds(&args),
        Command::Rate {
            codec,
            samples,
            seed,
            exhaustive,
        } => cmd_rate(&codec, samples, seed, exhaustive),
    }
}

impl ParamArgs {
    fn profile(&self) -> Outcome<Option<Profile>> {
        match (&self.p1, &self.p2) {
            (Some(p1), Some(p2)) => Ok(Some(Profile::new(parse_fraction(p1)?, parse_fraction(p2)?)?)),
            _ => Ok(None),
        }
    }

    fn code_params(&self) -> Outcome<CodeParams> {
        let profile = self.profile()?;
        let params = match (self.a, profile) {
            (None, Some(p)) if self.b.is_none() => CodeParams::from_profile(self.n, self.ell, p)?,
            (None, _) => return Err(Failure::new(1, "give --a (and optionally --b) or --p1/--p2")),
            (Some(a), p) => {
                let params = CodeParams::new(self.n, self.ell, a, self.b.unwrap_or(self.ell))?;
                match p {
                    Some(p) => params.with_profile(p)?,
                    None => params,
                }
            }
        };
        Ok(params)
    }

    /// Raw band for the counting commands, where `a == b` is allowed.
    fn band(&self) -> Outcome<(usize, usize)> {
        match (self.a, self.profile()?) {
            (Some(a), _) => Ok((a, self.b.unwrap_or(self.ell))),
            (None, Some(p)) => Ok((p.lower(self.ell), p.upper(self.ell))),
            (None, None) => Err(Failure::new(1, "give --a (and optionally --b) or --p1/--p2")),
        }
    }
}

impl CodecArgs {
    fn build(&self) -> Outcome<Box<dyn Codec>> {
        let params = self.params.code_params()?;
        let codec: Box<dyn Codec> = match self.scheme {
            Scheme::S => Box::new(SCodec::new(&params)?),
            Scheme::SPrime => Box::new(SPrimeCodec::new(&params)?),
            Scheme::Polarity => Box::new(PolarityCodec::new(&params)?),
            Scheme::W => Box::new(WCodec::new(&params)?),
            Scheme::SEcc => Box::new(SEccCodec::new(&params)?),
            Scheme::WEcc => match (self.inner_a, self.inner_b) {
                (Some(lo), Some(hi)) => Box::new(WEccCodec::with_inner_band(&params, Band::new(lo, hi)?)?),
                _ => Box::new(WEccCodec::new(&params)?),
            },
        };
        Ok(codec)
    }

    /// Length of the unit that carries at most one error under the error model.
    fn block_len(&self) -> usize {
        let ell = self.params.ell;
        match self.scheme {
            Scheme::WEcc => ell + 2 * tag_width(ell),
            _ => ell,
        }
    }
}

fn read_lines(path: &Path) -> Outcome<Vec<String>> {
    let mut text = String::new();
    let result = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)
    } else {
        fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text))
    };
    result.map_err(|e| Failure::io(path, e))?;
    Ok(text.lines().map(str::to_owned).collect())
}

fn open_output(path: &Path) -> Outcome<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let file = fs::File::create(path).map_err(|e| Failure::io(path, e))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn parse_line(line: &str, number: usize, expected: usize) -> Outcome<BitSeq> {
    let x: BitSeq = line
        .parse()
        .map_err(|e: Error| Failure::new(2, format!("line {number}: {e}")))?;
    if x.len() != expected {
        return Err(Failure::new(
            2,
            format!("line {number}: expected {expected} bits, got {}", x.len()),
        ));
    }
    Ok(x)
}

fn write_line(out: &mut dyn Write, path: &Path, line: impl std::fmt::Display) -> Outcome {
    writeln!(out, "{line}").map_err(|e| Failure::io(path, e))
}

fn cmd_encode(args: &CodecArgs) -> Outcome {
    let codec = args.build()?;
    eprintln!(
        "{}: payload {} bits, codeword {} bits, redundancy {} bits",
        codec.scheme(),
        codec.payload_len(),
        codec.codeword_len(),
        codec.redundancy()
    );
    let lines = read_lines(&args.input)?;
    let mut out = open_output(&args.io.output)?;
    for (i, line) in lines.iter().enumerate() {
        let x = parse_line(line, i + 1, codec.payload_len())?;
        let c = codec
            .encode(&x)
            .map_err(|e| Failure::from(e).prefixed(i + 1))?;
        write_line(&mut *out, &args.io.output, c)?;
    }
    out.flush().map_err(|e| Failure::io(&args.io.output, e))
}

impl Failure {
    fn prefixed(self, line: usize) -> Self {
        Self::new(self.code, format!("line {line}: {}", self.message))
    }
}

/// Lines that fail to decode produce an empty output line so that output
/// lines stay aligned with input lines.
fn cmd_decode(args: &CodecArgs, strict: bool) -> Outcome {
    let codec = args.build()?;
    let lines = read_lines(&args.input)?;
    let mut out = open_output(&args.io.output)?;
    let mut failures = 0;
    let mut total_corrections = 0;
    for (i, line) in lines.iter().enumerate() {
        let c = parse_line(line, i + 1, codec.codeword_len())?;
        match codec.decode_counting(&c) {
            Ok((x, corrections)) => {
                total_corrections += corrections;
                if corrections > 0 {
                    eprintln!("line {}: corrected {corrections} substitution(s)", i + 1);
                }
                write_line(&mut *out, &args.io.output, x)?;
            }
            Err(e) => {
                let failure = Failure::from(e).prefixed(i + 1);
                if strict {
                    out.flush().map_err(|e| Failure::io(&args.io.output, e))?;
                    return Err(failure);
                }
                eprintln!("{}", failure.message);
                failures += 1;
                write_line(&mut *out, &args.io.output, "")?;
            }
        }
    }
    out.flush().map_err(|e| Failure::io(&args.io.output, e))?;
    eprintln!(
        "{}: {} line(s), {total_corrections} correction(s), {failures} failure(s)",
        codec.scheme(),
        lines.len()
    );
    if failures > 0 {
        return Err(Failure::new(4, format!("{failures} line(s) could not be decoded")));
    }
    Ok(())
}

fn flip_positions(len: usize, block: usize, model: ErrorModel, rate: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut flips = Vec::new();
    match model {
        ErrorModel::PerBlock => {
            for start in (0..len).step_by(block) {
                let size = block.min(len - start);
                if rng.gen_bool(rate) {
                    flips.push(start + rng.gen_range(1..=size));
                }
            }
        }
        ErrorModel::MinDistance => {
            let p = rate / block as f64;
            let mut next_allowed = 1;
            for pos in 1..=len {
                if pos >= next_allowed && rng.gen_bool(p) {
                    flips.push(pos);
                    next_allowed = pos + block;
                }
            }
        }
    }
    flips
}

fn cmd_corrupt(args: &CodecArgs, model: ErrorModel, rate: f64, seed: u64, flips: Option<PathBuf>) -> Outcome {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Failure::new(1, format!("rate {rate} outside [0, 1]")));
    }
    let codec = args.build()?;
    // Under min-distance the spacing is ell itself.
    let block = match model {
        ErrorModel::PerBlock => args.block_len(),
        ErrorModel::MinDistance => args.params.ell,
    };
    let lines = read_lines(&args.input)?;
    let mut out = open_output(&args.io.output)?;
    let sidecar_path = flips.or_else(|| {
        (args.io.output != Path::new("-")).then(|| {
            let mut p = args.io.output.clone().into_os_string();
            p.push(".flips");
            PathBuf::from(p)
        })
    });
    let mut sidecar = sidecar_path.as_deref().map(open_output).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, line) in lines.iter().enumerate() {
        let mut c = parse_line(line, i + 1, codec.codeword_len())?;
        let positions = flip_positions(c.len(), block, model, rate, &mut rng);
        for &p in &positions {
            c.toggle(p)?;
        }
        write_line(&mut *out, &args.io.output, c)?;
        if let (Some(s), Some(path)) = (sidecar.as_mut(), sidecar_path.as_deref()) {
            let listed: Vec<String> = positions.iter().map(usize::to_string).collect();
            write_line(&mut **s, path, listed.join(" "))?;
        }
    }
    out.flush().map_err(|e| Failure::io(&args.io.output, e))?;
    if let (Some(mut s), Some(path)) = (sidecar, sidecar_path.as_deref()) {
        s.flush().map_err(|e| Failure::io(path, e))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    class: &'static str,
    n: usize,
    ell: usize,
    a: usize,
    b: usize,
    count: String,
}

fn cmd_count(args: &ClassArgs) -> Outcome {
    let p = &args.params;
    let (a, b) = p.band()?;
    let mut rows = Vec::new();
    if args.mode != Some(Mode::Window) && (args.mode.is_some() || p.ell > 0 && p.n % p.ell == 0) {
        rows.push(("S", count_secc(p.n, p.ell, a, b)?));
    }
    if args.mode != Some(Mode::Subblock) {
        rows.push(("W", count_swcc(p.n, p.ell, a, b)?));
    }
    let rows: Vec<CountRow> = rows
        .into_iter()
        .map(|(class, count)| CountRow {
            class,
            n: p.n,
            ell: p.ell,
            a,
            b,
            count: count.to_string(),
        })
        .collect();
    if p.json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
    } else {
        println!("{:<6} {:>6} {:>6} {:>10}  count", "class", "n", "ell", "band");
        for r in &rows {
            let band = format!("[{}, {}]", r.a, r.b);
            println!("{:<6} {:>6} {:>6} {:>10}  {}", r.class, r.n, r.ell, band, r.count);
        }
    }
    Ok(())
}

fn cmd_enumerate(args: &ClassArgs, budget: u64, output: &Path) -> Outcome {
    let p = &args.params;
    let (a, b) = p.band()?;
    let mode = args.mode.unwrap_or(Mode::Window);
    let members = enumerate_class(p.n, p.ell, a, b, mode, budget)?;
    let mut out = open_output(output)?;
    let mut count = 0usize;
    for x in members {
        write_line(&mut *out, output, x)?;
        count += 1;
    }
    out.flush().map_err(|e| Failure::io(output, e))?;
    eprintln!("{count} member(s)");
    Ok(())
}

fn cmd_verify_bounds(args: &ClassArgs) -> Outcome {
    let p = &args.params;
    let (a, b) = p.band()?;
    let report = verify_halfspace_bound(p.n, p.ell, a, b)?;
    if p.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return Ok(());
    }
    let verdict = |holds: bool| if holds { "holds" } else { "fails" };
    println!("n={} ell={} band=[{}, {}]", report.n, report.ell, report.a, report.b);
    println!("2^(n-1)               {}", report.threshold);
    println!("|W|                   {}  {}", report.swcc_count, verdict(report.swcc_holds));
    if let (Some(count), Some(holds)) = (&report.secc_count, report.secc_holds) {
        println!("|S|                   {count}  {}", verdict(holds));
    }
    println!("c                     {:.4}", report.c);
    println!(
        "ln(n)/c^2             {:.2}  sufficient condition {}",
        report.required_ell,
        if report.sufficient_condition { "met" } else { "not met" }
    );
    println!("bound                 {}", verdict(report.holds()));
    Ok(())
}

fn cmd_rate(args: &CodecArgs, samples: usize, seed: u64, exhaustive: bool) -> Outcome {
    let codec = args.build()?;
    let policy = if exhaustive {
        SamplePolicy::Exhaustive
    } else {
        SamplePolicy::Random { samples, seed }
    };
    let report = measure_rate(codec.as_ref(), policy)?;
    if args.params.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return Ok(());
    }
    println!("scheme       {}", report.scheme);
    println!("payload      {}", report.payload_len);
    println!("codeword     {}", report.codeword_len);
    println!("redundancy   {}", report.redundancy);
    println!("rate         {}/{} = {:.4}", report.payload_len, report.codeword_len, report.rate);
    match report.class_rate {
        Some(r) => println!("class rate   {r:.4}"),
        None => println!("class rate   n/a"),
    }
    println!("verified     {}/{}", report.verified, report.samples);
    if report.verified != report.samples {
        return Err(Failure::new(4, "some samples failed to round-trip"));
    }
    Ok(())
}
