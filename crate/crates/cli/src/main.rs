use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cyclolog::criteria::{check_ab, into_report, run_check};
use cyclolog::cyclotomic::DEFAULT_NORM_BOUND;
use cyclolog::report::CsvReportWriter;
use cyclolog::scan::scan_with;
use cyclolog::{CheckKind, CheckOptions, CheckReport, ModCtx, Prepared, ScanConfig, Verdict};

const EXIT_ERROR: u8 = 1;
const EXIT_SKIPPED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "cyclolog", version, about = "Discrete-log congruence checks for primes N = 1 mod p")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check on one context and print a single report.
    Check(CheckArgs),
    /// Run checks over every prime N = 1 mod p in a range.
    Scan(ScanArgs),
}

#[derive(Args)]
struct Common {
    /// Character exponent i for chi = omega^i (thmP, gamma); default: every admissible one.
    #[arg(long, allow_negative_numbers = true)]
    chi: Option<i64>,
    /// Index i for si (S_i) or depth for powerlog.
    #[arg(long = "i")]
    index: Option<u64>,
    /// Coefficient bound for the norm-equation search.
    #[arg(long, default_value_t = DEFAULT_NORM_BOUND)]
    norm_bound: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add per-check wall time (ms) to each report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_parser = parse_kind)]
    check: CheckKind,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<i64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    p: u64,
    /// Inclusive range LO..HI for N.
    #[arg(long, value_parser = parse_range)]
    range: (u64, u64),
    /// Comma-separated checks, or "all".
    #[arg(long, default_value = "all", value_parser = parse_checks)]
    checks: CheckList,
    #[arg(long, env = "CYCLO_JOBS", default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_kind(s: &str) -> Result<CheckKind, String> {
    s.parse().map_err(|e: cyclolog::Error| e.to_string())
}

#[derive(Clone)]
struct CheckList(Vec<CheckKind>);

fn parse_checks(s: &str) -> Result<CheckList, String> {
    if s == "all" {
        return Ok(CheckList(CheckKind::ALL.to_vec()));
    }
    let kinds = s.split(',').map(|t| parse_kind(t.trim())).collect::<Result<Vec<_>, _>>()?;
    if kinds.is_empty() {
        return Err("no checks given".into());
    }
    Ok(CheckList(kinds))
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Writes reports in the chosen format; CSV gets its header once.
enum Out<W: Write> {
    Json(W),
    Csv(CsvReportWriter<W>),
}

impl<W: Write> Out<W> {
    fn new(format: Format, w: W) -> Self {
        match format {
            Format::Json => Out::Json(w),
            Format::Csv => Out::Csv(CsvReportWriter::new(w)),
        }
    }

    fn emit(&mut self, r: &CheckReport) -> io::Result<()> {
        match self {
            Out::Json(w) => writeln!(w, "{}", r.to_json()),
            Out::Csv(w) => w.write(r),
        }
    }
}

fn options(c: &Common) -> CheckOptions {
    CheckOptions { chi: c.chi, index: c.index }
}

fn run_single(args: &CheckArgs) -> Result<CheckReport, String> {
    let p = args.p;
    let opts = options(&args.common);
    if args.check == CheckKind::Ab {
        if let (Some(a), Some(b)) = (args.a, args.b) {
            return Ok(into_report(CheckKind::Ab, p, 0, None, check_ab(p, a, b)));
        }
    }
    let n = args.n.ok_or_else(|| match args.check {
        CheckKind::Ab => "check ab needs --a and --b, or --n".to_string(),
        _ => format!("check {} needs --n", args.check),
    })?;
    Ok(match ModCtx::new(p, n) {
        Ok(ctx) => {
            let prep = Prepared::new(ctx, args.common.norm_bound);
            into_report(args.check, p, n, Some(&prep.ctx), run_check(&prep, args.check, opts))
        }
        Err(e) => CheckReport::bare(args.check, p, n).errored(&e),
    })
}

fn cmd_check(args: CheckArgs) -> ExitCode {
    let start = Instant::now();
    let mut report = match run_single(&args) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if args.common.timing {
        report.ms = Some(start.elapsed().as_millis() as u64);
    }
    let mut out = Out::new(args.common.format, io::stdout().lock());
    if let Err(e) = out.emit(&report) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    match report.verdict {
        Verdict::Holds | Verdict::Fails => ExitCode::SUCCESS,
        Verdict::Skipped => ExitCode::from(EXIT_SKIPPED),
        Verdict::Error => {
            eprintln!("error: {}", report.aux.get("error").map(String::as_str).unwrap_or("unknown"));
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn cmd_scan(args: ScanArgs) -> ExitCode {
    let (lo, hi) = args.range;
    let mut cfg = ScanConfig::new(args.p, lo, hi, args.checks.0);
    cfg.jobs = args.jobs.max(1);
    cfg.norm_bound = args.common.norm_bound;
    cfg.options = options(&args.common);
    cfg.timing = args.common.timing;

    let mut out = Out::new(args.common.format, io::stdout().lock());
    let (mut total, mut skipped, mut errors) = (0usize, 0usize, 0usize);
    let mut io_err = None;
    let res = scan_with(&cfg, |r| {
        total += 1;
        match r.verdict {
            Verdict::Skipped => skipped += 1,
            Verdict::Error => errors += 1,
            _ => {}
        }
        if io_err.is_none() {
            io_err = out.emit(&r).err();
        }
    });
    if let Err(e) = res {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    if let Some(e) = io_err {
        // a closed pipe is not worth a message
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
        return ExitCode::from(EXIT_ERROR);
    }
    if errors > 0 {
        eprintln!("{errors} of {total} reports ended in an error");
        ExitCode::from(EXIT_ERROR)
    } else if total > 0 && skipped == total {
        ExitCode::from(EXIT_SKIPPED)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match cli.cmd {
        Command::Check(a) => cmd_check(a),
        Command::Scan(a) => cmd_scan(a),
    }
}
