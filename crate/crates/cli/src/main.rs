use charvar_cli::{run_fixtures, run_text, timeout_from_env, Options, OutputOrder, RingDefaults};
use charvar_core::filt::DEFAULT_SLACK;
use charvar_core::Field;
use clap::{Parser, ValueEnum};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Degrevlex,
    Weighted,
}

/// Runs a session file (or standard input) and prints one JSON value per
/// command.
#[derive(Debug, Parser)]
#[command(name = "charvar", version)]
struct Cli {
    /// Session file; `-` or nothing reads standard input.
    session: Option<PathBuf>,
    /// Characteristic of the ring used when the session has no `ring` line.
    #[arg(long, requires = "dim", value_parser = parse_prime)]
    prime: Option<u64>,
    /// Dimension of the ring used when the session has no `ring` line.
    #[arg(long, requires = "prime")]
    dim: Option<usize>,
    /// Order in which commutative polynomials and bases are printed.
    #[arg(long, value_enum, default_value_t = OrderArg::Weighted)]
    order: OrderArg,
    /// Extra degrees checked beyond the effective bound.
    #[arg(long, default_value_t = DEFAULT_SLACK, allow_negative_numbers = false)]
    slack: i64,
    /// Run the fixture corpus in this directory instead of a session.
    #[arg(long, value_name = "DIR", conflicts_with = "session")]
    fixtures: Option<PathBuf>,
    /// Print the fixture summary as JSON.
    #[arg(long)]
    json: bool,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    Field::new(p).map(|_| p).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timeout = match timeout_from_env() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("charvar: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = Options {
        order: match cli.order {
            OrderArg::Degrevlex => OutputOrder::DegRevLex,
            OrderArg::Weighted => OutputOrder::Weighted,
        },
        slack: cli.slack,
        defaults: RingDefaults {
            prime: cli.prime,
            dim: cli.dim,
        },
        timeout,
        base_dir: None,
        nested: false,
    };

    if let Some(dir) = &cli.fixtures {
        return match run_fixtures(dir, &opts) {
            Ok(report) => {
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
                if cli.json {
                    println!("{}", report.to_json());
                } else {
                    print!("{}", report.to_text());
                }
                ExitCode::from(if report.all_passed() { 0 } else { 1 })
            }
            Err(e) => {
                eprintln!("charvar: cannot read {}: {e}", dir.display());
                ExitCode::from(1)
            }
        };
    }

    let (text, base_dir) = match cli.session.as_deref() {
        Some(p) if p.as_os_str() != "-" => match std::fs::read_to_string(p) {
            Ok(t) => (t, p.parent().map(|d| d.to_path_buf())),
            Err(e) => {
                eprintln!("charvar: cannot read {}: {e}", p.display());
                return ExitCode::from(1);
            }
        },
        _ => {
            let mut t = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut t) {
                eprintln!("charvar: cannot read standard input: {e}");
                return ExitCode::from(1);
            }
            (t, None)
        }
    };
    let out = run_text(&text, &Options { base_dir, ..opts });
    print!("{}", out.render());
    ExitCode::from(out.status.exit_code() as u8)
}
