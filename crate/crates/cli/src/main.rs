use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fano_scrolls::{
    assess_point, local_cover_germ, CoxAmbient, FiberPoint, MonomialSystem, SignInvolution,
};
use fano_scrolls_cli::{is_prime, ClassificationDocument, RunConfig};

#[derive(Parser)]
#[command(
    name = "fano-scrolls",
    version,
    about = "Linear systems, sign involutions, and double-cover singularity verdicts on rational scrolls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate scroll candidates, run every filter, and emit the final table
    Classify(ClassifyArgs),
    /// Print the monomial basis of a scroll linear system
    Basis(BasisArgs),
    /// Analyze the double-cover germ at a fibre point of the double-point curve
    Germ(GermArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Enumeration bound on the scroll degrees
    #[arg(long, default_value_t = 30)]
    bound: i64,
    /// Specialization seeds, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
    seeds: Vec<u64>,
    /// Prime modulus for the finite-field chart scans
    #[arg(long = "scan-prime", default_value_t = 101)]
    scan_prime: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (default: stdout); a relative path resolves against
    /// $FANO_SCROLLS_OUTDIR when that is set
    #[arg(long)]
    output: Option<PathBuf>,
    /// Size of the worker pool for candidate verification (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Report a mismatch against the reference table as a warning, not a failure
    #[arg(long)]
    research: bool,
}

#[derive(Args)]
struct BasisArgs {
    /// Scroll degrees
    d1: i64,
    d2: i64,
    d3: i64,
    /// Divisor class "a,b" for |aM + bL|
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    class: Vec<i64>,
    /// Keep only monomials invariant under the involution
    #[arg(long, conflicts_with = "anti_invariant")]
    invariant: bool,
    /// Keep only anti-invariant monomials
    #[arg(long = "anti-invariant")]
    anti_invariant: bool,
    /// Sign pattern like "+,-,+,+,-" on (t0, t1, x0, x1, x2); defaults to the
    /// standard involution
    #[arg(long)]
    involution: Option<String>,
}

#[derive(Args)]
struct GermArgs {
    /// Scroll degrees (the third is zero on the germ route)
    d1: i64,
    d2: i64,
    /// Fibre point: "generic", "1:0", or "0:1"
    #[arg(long, default_value = "generic")]
    point: String,
    /// Specialization seeds, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
    seeds: Vec<u64>,
    /// Prime modulus for the finite-field chart scans
    #[arg(long = "scan-prime", default_value_t = 101)]
    scan_prime: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Basis(args) => cmd_basis(args),
        Command::Germ(args) => cmd_germ(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn cmd_classify(args: ClassifyArgs) -> Result<u8, String> {
    let config = RunConfig {
        bound: args.bound,
        seeds: args.seeds,
        scan_prime: args.scan_prime,
    };
    config.validate().map_err(|e| e.to_string())?;

    let build = || ClassificationDocument::build(config.clone());
    let built = match args.workers {
        Some(0) => return Err("workers must be positive".into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| e.to_string())?
            .install(build),
        None => build(),
    };
    let doc = built.map_err(|e| e.to_string())?;

    let rendered = match args.format {
        Format::Json => doc.to_json(),
        Format::Markdown => doc.to_markdown(),
    };
    write_output(args.output, &rendered)?;

    if doc.matches_reference {
        Ok(0)
    } else if args.research {
        eprintln!("warning: accepted set differs from the reference table (research mode)");
        Ok(0)
    } else {
        eprintln!("accepted set differs from the reference table");
        Ok(1)
    }
}

/// Write to stdout, treating a closed pipe as a normal end of output.
fn print_out(content: &str) -> Result<(), String> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(content.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(format!("cannot write to stdout: {e}")),
    }
}

fn write_output(path: Option<PathBuf>, content: &str) -> Result<(), String> {
    let Some(path) = path else {
        return print_out(content);
    };
    let resolved = match std::env::var_os("FANO_SCROLLS_OUTDIR") {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    };
    if let Some(parent) = resolved.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    std::fs::write(&resolved, content)
        .map_err(|e| format!("cannot write {}: {e}", resolved.display()))
}

fn parse_involution(pattern: &str, n_vars: usize) -> Result<SignInvolution, String> {
    let signs: Vec<i8> = pattern
        .chars()
        .filter(|c| !matches!(c, ',' | '(' | ')' | ' '))
        .map(|c| match c {
            '+' => Ok(1i8),
            '-' => Ok(-1i8),
            other => Err(format!(
                "invalid sign character {other:?} in involution pattern"
            )),
        })
        .collect::<Result<_, _>>()?;
    if signs.len() != n_vars {
        return Err(format!(
            "involution pattern must give {n_vars} signs, got {}",
            signs.len()
        ));
    }
    SignInvolution::new(signs).map_err(|e| e.to_string())
}

fn cmd_basis(args: BasisArgs) -> Result<u8, String> {
    if args.class.len() != 2 {
        return Err(format!(
            "--class takes exactly two integers a,b for |aM + bL|, got {} value(s)",
            args.class.len()
        ));
    }
    let ambient = CoxAmbient::scroll(args.d1, args.d2, args.d3).map_err(|e| e.to_string())?;
    let class = ambient
        .scroll_class(args.class[0], args.class[1])
        .map_err(|e| e.to_string())?;
    let system = MonomialSystem::full(&ambient, &class).map_err(|e| e.to_string())?;

    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "system: |{class}| on F({},{},{})",
        args.d1, args.d2, args.d3
    );
    let listed = if args.invariant || args.anti_invariant {
        let inv = match &args.involution {
            Some(pattern) => parse_involution(pattern, ambient.n_vars())?,
            None => SignInvolution::standard_sigma(&ambient).map_err(|e| e.to_string())?,
        };
        let decomposition = system.parity_decompose(&inv).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "involution: {}", inv.pattern());
        let _ = writeln!(
            out,
            "part: {}",
            if args.invariant {
                "invariant"
            } else {
                "anti-invariant"
            }
        );
        if args.invariant {
            decomposition.plus
        } else {
            decomposition.minus
        }
    } else {
        system
    };
    let _ = writeln!(out, "h0: {}", listed.h0());
    for monomial in listed.materialize() {
        let _ = writeln!(out, "{}", ambient.format_monomial(&monomial));
    }
    print_out(&out)?;
    Ok(0)
}

fn parse_point(token: &str) -> Result<FiberPoint, String> {
    match token.trim().trim_start_matches('[').trim_end_matches(']') {
        "generic" => Ok(FiberPoint::Generic),
        "1:0" => Ok(FiberPoint::T1Zero),
        "0:1" => Ok(FiberPoint::T0Zero),
        other => Err(format!(
            "invalid point {other:?}: expected \"generic\", \"1:0\", or \"0:1\""
        )),
    }
}

fn cmd_germ(args: GermArgs) -> Result<u8, String> {
    if args.seeds.is_empty() {
        return Err("at least one seed is required".into());
    }
    if !is_prime(args.scan_prime) {
        return Err(format!(
            "scan prime must be a prime number, got {}",
            args.scan_prime
        ));
    }
    let point = parse_point(&args.point)?;
    let ambient = CoxAmbient::scroll(args.d1, args.d2, 0).map_err(|e| e.to_string())?;
    let ram = MonomialSystem::ram_system(&ambient).map_err(|e| e.to_string())?;
    let sigma = SignInvolution::standard_sigma(&ambient).map_err(|e| e.to_string())?;
    let plus = ram
        .parity_decompose(&sigma)
        .map_err(|e| e.to_string())?
        .plus;
    let family = local_cover_germ(&plus, point).map_err(|e| e.to_string())?;
    let assessment =
        assess_point(&family, point, &args.seeds, args.scan_prime).map_err(|e| e.to_string())?;

    let doc = serde_json::json!({
        "scroll": [args.d1, args.d2, 0],
        "point": point.label(),
        "chart": point.chart_substitution(),
        "family": family.to_string(),
        "assessment": serde_json::to_value(&assessment).map_err(|e| e.to_string())?,
    });
    let mut rendered = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    rendered.push('\n');
    print_out(&rendered)?;
    Ok(0)
}
