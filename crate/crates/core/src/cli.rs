//! Command-line front end. Every subcommand writes one artifact (text, JSON or
//! CSV) to stdout or to `--output`, and maps failures to distinct exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds;
use crate::census;
use crate::chars;
use crate::error::Error;
use crate::harvest::{density_report, SetVariant, SievePrimeSet};
use crate::poly::{Polynomial, SequenceSpec};
use crate::sieve;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "quadsieve", version, about = "Square-sieve experiments on quadratic fields Q(sqrt(f(g^n)))")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the artifact here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Seed for randomized scans.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Coefficients, constant term first: `1,6,1` is X^2 + 6X + 1.
    #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
    pub f: String,
    #[arg(short = 'g', long = "base")]
    pub g: u64,
}

impl SpecArgs {
    fn spec(&self) -> Result<SequenceSpec, Error> {
        SequenceSpec::validate(self.f.parse()?, self.g)
    }
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(short = 'M', default_value_t = 0)]
    pub m: u64,
    #[arg(short = 'N')]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Sieve window start; defaults to N^(1/(2 alpha)) (ln N)^(-1/alpha).
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long = "C", default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.677)]
    pub alpha: f64,
    #[arg(long, default_value = "standard")]
    pub variant: String,
    /// Read the prime set from an export file instead of harvesting it.
    #[arg(long)]
    pub primes: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count n with Q(sqrt(u(n))) = Q(sqrt(s)), or all s <= S, or list distinct fields.
    Census {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(short = 's', conflicts_with_all = ["s_bound", "fields"])]
        s: Option<u64>,
        #[arg(short = 'S', conflicts_with = "fields")]
        s_bound: Option<u64>,
        #[arg(long)]
        fields: bool,
    },
    /// Run the square sieve on a window and emit the run as JSON.
    Sieve {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(short = 's', default_value_t = 1)]
        s: u64,
        #[command(flatten)]
        set: SetArgs,
        /// Include the pair diagnostics U, V, W, T, Q.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Character sums.
    Charsum {
        #[command(subcommand)]
        kind: CharsumCommand,
    },
    /// Harvest sieve primes, or measure their density.
    Primes {
        #[arg(short = 'g', long = "base", default_value_t = 2)]
        g: u64,
        #[arg(long)]
        z: f64,
        #[arg(long = "C", default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 0.677)]
        alpha: f64,
        #[arg(long, default_value = "standard")]
        variant: String,
        /// Report the fraction of primes l <= z with P+(l-1) >= l^alpha instead.
        #[arg(long)]
        density: bool,
    },
    /// Exponent table, regime bounds and bound curves.
    Bounds {
        #[arg(long, default_value_t = 0.677)]
        alpha: f64,
        #[arg(long = "N")]
        n: Option<f64>,
        #[arg(long = "S")]
        s: Option<f64>,
        /// Emit the regime bound over the grid `--ns` x `--ss` as CSV.
        #[arg(long)]
        curve: bool,
        #[arg(long, value_delimiter = ',', default_value = "1e3,1e6,1e9")]
        ns: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
        ss: Vec<f64>,
        /// Balance one of the proof term systems: endgame, av1, av2.
        #[arg(long)]
        optimize: Option<String>,
    },
    /// Run the property suite; nonzero exit on any failure.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CharsumCommand {
    /// Worst complete sum over primes p <= p_max, as CSV.
    Weil {
        #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        lambda: i64,
        #[arg(long = "p-max")]
        p_max: u64,
    },
    /// Complete sum modulo l p with its product decomposition residual.
    Pair {
        #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        lambda: i64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        a: i64,
    },
    /// Incomplete sum over k = 1..K.
    Incomplete {
        #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
        f: String,
        #[arg(long = "A", default_value_t = 1, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        lambda: i64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long = "K")]
        k: u64,
    },
    /// Mean square of sums over s <= S against odd squarefree moduli <= R, psi = 1.
    Hb {
        #[arg(long = "R")]
        r: u64,
        #[arg(long = "S")]
        s: u64,
    },
    /// Short character sum sum_{n<=k} (n/q).
    Conditional {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
    },
    /// Product decomposition residuals on seeded random admissible tuples, as CSV.
    Product {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

enum Failure {
    Precondition(Error),
    Invariant(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Precondition(e)
    }
}

struct Artifact {
    body: String,
    invariant_failure: Option<String>,
}

impl Artifact {
    fn ok(body: String) -> Self {
        Self {
            body,
            invariant_failure: None,
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn load_set(args: &SetArgs, g: u64, n: u64) -> Result<SievePrimeSet, Failure> {
    if let Some(path) = &args.primes {
        let text = std::fs::read_to_string(path).map_err(Failure::Io)?;
        return Ok(SievePrimeSet::import(&text)?);
    }
    let z = args.z.unwrap_or_else(|| bounds::default_z(n.max(3) as f64, args.alpha));
    Ok(SievePrimeSet::build(g, z, args.c, args.alpha, args.variant.parse::<SetVariant>()?)?)
}

fn execute(cli: &Cli) -> Result<Artifact, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Census {
            spec,
            window,
            s,
            s_bound,
            fields,
        } => {
            let sp = spec.spec()?;
            if let Some(s) = s {
                let count = census::count_q(&sp, window.m, window.n, *s)?;
                return Ok(Artifact::ok(match format {
                    Some(Format::Json) => pretty(&json!({"M": window.m, "N": window.n, "s": s, "count": count})),
                    _ => format!("{count}\n"),
                }));
            }
            let result = if *fields {
                census::distinct_fields(&sp, window.m, window.n)?
            } else {
                let bound = s_bound.ok_or_else(|| Error::InvalidArgument("need -s, -S or --fields".into()))?;
                census::count_q_total(&sp, window.m, window.n, bound)?
            };
            if result.per_s.values().sum::<u64>() > window.n {
                return Err(Failure::Invariant("census total exceeds N".into()));
            }
            Ok(Artifact::ok(pretty(&result.to_json())))
        }
        Command::Sieve {
            spec,
            window,
            s,
            set,
            diagnostics,
        } => {
            let sp = spec.spec()?;
            let primes = load_set(set, sp.g, window.n)?;
            let run = sieve::sieve_run(&sp, window.m, window.n, *s, &primes)?;
            let mut value = serde_json::to_value(&run).unwrap();
            let mut failure = (!run.certificate.holds).then(|| "certificate inequality fails".to_string());
            if *diagnostics {
                let d = sieve::diagnostics(&sp, window.m, window.n, *s, &primes)?;
                if !d.gcd_bound_holds {
                    failure = Some("pair gcd bound fails".into());
                }
                value["diagnostics"] = serde_json::to_value(d).unwrap();
            }
            Ok(Artifact {
                body: pretty(&value),
                invariant_failure: failure,
            })
        }
        Command::Charsum { kind } => charsum(kind, format, cli.seed),
        Command::Primes {
            g,
            z,
            c,
            alpha,
            variant,
            density,
        } => {
            if *density {
                let r = density_report(*g, *z as u64, *alpha)?;
                return Ok(Artifact::ok(pretty(&serde_json::to_value(r).unwrap())));
            }
            let set = SievePrimeSet::build(*g, *z, *c, *alpha, variant.parse()?)?;
            let failure = set.check().err();
            Ok(Artifact {
                body: set.export(),
                invariant_failure: failure,
            })
        }
        Command::Bounds {
            alpha,
            n,
            s,
            curve,
            ns,
            ss,
            optimize,
        } => {
            if *curve {
                return Ok(Artifact::ok(bounds::bound_curve_csv(*alpha, ns, ss)?));
            }
            if let Some(which) = optimize {
                let n = n.unwrap_or(1e6);
                let s = s.unwrap_or(1.0);
                let ts = match which.as_str() {
                    "endgame" => bounds::endgame_system(*alpha, n)?,
                    "av1" => bounds::av1_system(*alpha, n, s)?,
                    "av2" => bounds::av2_system(*alpha, n, s)?,
                    other => return Err(Error::InvalidArgument(format!("unknown term system {other:?}")).into()),
                };
                let r = bounds::grakol_optimize(&ts);
                let failure = (!r.guarantee_holds).then(|| "balancing guarantee fails".to_string());
                return Ok(Artifact {
                    body: pretty(&serde_json::to_value(r).unwrap()),
                    invariant_failure: failure,
                });
            }
            let table = bounds::exponent_table(*alpha)?;
            let check = bounds::interpolation_check(*alpha)?;
            let regime = match (n, s) {
                (Some(n), Some(s)) => Some(bounds::regime_bound(*alpha, *n, *s)?),
                _ => None,
            };
            let failure = (!check.holds).then(|| "interpolation inequality fails".to_string());
            let body = if format == Some(Format::Json) {
                pretty(&json!({"table": table, "interpolation": check, "regime": regime}))
            } else {
                let mut text = table.to_text();
                if let Some(r) = regime {
                    text += &format!("{:<13}{:.6e} ({}, shape comparison)\n", "bound", r.value, r.regime.label());
                }
                text
            };
            Ok(Artifact {
                body,
                invariant_failure: failure,
            })
        }
        Command::Verify { quick } => {
            let report = verify::run_suite(cli.seed, *quick);
            let body = if format == Some(Format::Json) {
                pretty(&serde_json::to_value(&report).unwrap())
            } else {
                report.to_text()
            };
            let failure = (!report.all_passed()).then(|| "property suite failed".to_string());
            Ok(Artifact {
                body,
                invariant_failure: failure,
            })
        }
    }
}

fn charsum(kind: &CharsumCommand, format: Option<Format>, seed: u64) -> Result<Artifact, Failure> {
    let parse = |f: &str| -> Result<Polynomial, Failure> { Ok(f.parse::<Polynomial>()?) };
    let json_of = |v: serde_json::Value| Artifact::ok(pretty(&v));
    match kind {
        CharsumCommand::Weil { f, lambda, p_max } => {
            let scan = chars::weil_scan(&parse(f)?, *lambda, *p_max)?;
            let failure = (!scan.violations.is_empty()).then(|| format!("bound exceeded at {:?}", scan.violations));
            let body = if format == Some(Format::Json) {
                pretty(&serde_json::to_value(&scan).unwrap())
            } else {
                scan.to_csv()
            };
            Ok(Artifact {
                body,
                invariant_failure: failure,
            })
        }
        CharsumCommand::Pair { f, lambda, ell, p, a } => {
            let f = parse(f)?;
            let sum = chars::complete_sum_pair(&f, *lambda, *ell, *p, *a)?;
            let residual = chars::product_formula_residual(&f, *lambda, *ell, *p, *a)?;
            let tolerance = chars::FLOAT_RESIDUAL * sum.period as f64;
            let ok = if *a == 0 { residual == 0.0 } else { residual <= tolerance };
            let mut art = json_of(json!({"sum": sum, "product_residual": residual}));
            if !ok {
                art.invariant_failure = Some(format!("product residual {residual}"));
            }
            Ok(art)
        }
        CharsumCommand::Incomplete {
            f,
            shift,
            lambda,
            ell,
            p,
            k,
        } => Ok(json_of(serde_json::to_value(chars::incomplete_sum(&parse(f)?, *shift, *lambda, *ell, *p, *k)?).unwrap())),
        CharsumCommand::Hb { r, s } => {
            let psi = vec![1.0; *s as usize];
            Ok(json_of(serde_json::to_value(chars::hb_average(*r, &psi)?).unwrap()))
        }
        CharsumCommand::Conditional { q, k } => {
            Ok(json_of(serde_json::to_value(chars::conditional_char_measure(*q, *k)?).unwrap()))
        }
        CharsumCommand::Product { trials } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut body = String::from("f,lambda,ell,p,a,period,residual\n");
            let mut failure = None;
            for _ in 0..*trials {
                let t = verify::random_admissible_tuple(&mut rng, 4, 300, false);
                let r = chars::product_formula_residual(&t.f, t.lambda, t.ell, t.p, t.a)?;
                if r > chars::FLOAT_RESIDUAL * t.period as f64 {
                    failure = Some(format!("residual {r} for {t:?}"));
                }
                body += &format!("\"{}\",{},{},{},{},{},{:.3e}\n", t.f, t.lambda, t.ell, t.p, t.a, t.period, r);
            }
            Ok(Artifact {
                body,
                invariant_failure: failure,
            })
        }
    }
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    run_cli(&cli, out, err)
}

pub fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let artifact = match execute(cli) {
        Ok(a) => a,
        Err(Failure::Precondition(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_PRECONDITION;
        }
        Err(Failure::Invariant(msg)) => {
            let _ = writeln!(err, "invariant failure: {msg}");
            return EXIT_INVARIANT;
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "io error: {e}");
            return EXIT_IO;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &artifact.body),
        None => out.write_all(artifact.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "io error: {e}");
        return EXIT_IO;
    }
    match artifact.invariant_failure {
        Some(msg) => {
            let _ = writeln!(err, "invariant failure: {msg}");
            EXIT_INVARIANT
        }
        None => EXIT_OK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("quadsieve").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn census_prints_count() {
        let (code, out, _) = run_args(&["census", "-f", "1,6,1", "-g", "2", "-M", "0", "-N", "10", "-s", "17"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "1\n");
    }

    #[test]
    fn census_json_schema() {
        let (code, out, _) = run_args(&["census", "-f", "1,6,1", "-g", "2", "-N", "5", "-S", "50"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        for key in ["M", "N", "S", "per_s", "classes", "skipped"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["per_s"], json!([[17, 1], [41, 1]]));
    }

    #[test]
    fn bounds_table_contains_beta() {
        let (code, out, _) = run_args(&["bounds", "--alpha", "0.677"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("0.73855"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["census", "-f", "1,x", "-g", "2", "-N", "5", "-s", "1"]).0, EXIT_PRECONDITION);
        assert_eq!(run_args(&["census", "-f", "0,0,1", "-g", "2", "-N", "5", "-s", "1"]).0, EXIT_PRECONDITION);
        assert_eq!(run_args(&["census", "-g", "2"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["bounds", "--alpha", "0.4"]).0, EXIT_PRECONDITION);
        assert_eq!(run_args(&["charsum", "pair", "-f", "1,0,1", "--ell", "7", "--p", "13"]).0, EXIT_PRECONDITION);
    }

    #[test]
    fn product_scan_is_seed_deterministic() {
        let a = run_args(&["charsum", "product", "--trials", "10", "--seed", "3"]);
        let b = run_args(&["charsum", "product", "--trials", "10", "--seed", "3"]);
        assert_eq!(a.0, EXIT_OK);
        assert_eq!(a.1, b.1);
        assert_ne!(a.1, run_args(&["charsum", "product", "--trials", "10", "--seed", "4"]).1);
    }
}
