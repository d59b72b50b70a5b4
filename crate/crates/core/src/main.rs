use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qkflag::chain::{chain_for, normalize_set, validate_chain};
use qkflag::chevalley::{tensor_minuscule_with, KqgClass};
use qkflag::grothendieck::{groth, groth_classical};
use qkflag::qbg::{all_edges, to_dot, to_tsv};
use qkflag::series::NovikovDeg;
use qkflag::sijection::{check_sijection_with, enumerate_all_with, telescope_sum_with};
use qkflag::verify::{self, Report};
use qkflag::weyl::Permutation;
use qkflag::{Error, Exec};

#[derive(Parser)]
#[command(name = "qkflag", version, about = "Quantum K-theory of type-A flag manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Presentation {
    Z,
    X,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Main,
    Longest,
    PropWk,
    Ideal,
    Descent,
    Sijection,
    Demazure,
}

#[derive(clap::Args)]
struct Common {
    /// Rank: the flag manifold is Fl_{n+1}.
    #[arg(long)]
    n: usize,
    /// Truncation degree in the Novikov variables.
    #[arg(long = "q-deg", default_value_t = 3)]
    q_deg: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for --format json.
    #[arg(long)]
    json: bool,
    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Common {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Quantum Bruhat graph edges.
    Qbg {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: bool,
    },
    /// The chain for a subset J.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long = "J", value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Expansion of [O(w∘ε_J)] ⊗ [O(w)].
    Chevalley {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        w: String,
        #[arg(long = "J", value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Quantum double Grothendieck polynomial.
    Groth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        w: String,
        /// Set Q = 0.
        #[arg(long)]
        classical: bool,
        #[arg(long, value_enum, default_value_t = Presentation::Z)]
        presentation: Presentation,
    },
    /// Path sets and the sign-reversing involution.
    Sijection {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        /// Print every path with its class.
        #[arg(long)]
        dump: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random elements per law (demazure suite).
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

enum Outcome {
    Ok,
    Failed,
}

fn parse_window(n: usize, s: &str) -> Result<Permutation, Error> {
    let bad = || Error::Parse(format!("cannot parse window {s:?}"));
    let window: Vec<usize> = if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    } else {
        if n + 1 > 9 {
            return Err(Error::Parse("compact windows need n + 1 <= 9; use a comma list".into()));
        }
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_, _>>()?
    };
    if window.len() != n + 1 {
        return Err(Error::Parse(format!("window {s:?} has length {}, expected {}", window.len(), n + 1)));
    }
    Permutation::new(window)
}

/// Pretty JSON with object keys sorted.
fn sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn class_output(cls: &KqgClass, format: Format) -> String {
    match format {
        Format::Json => sorted_json(&cls.to_json_value()) + "\n",
        _ => cls.to_rows(),
    }
}

#[derive(Serialize)]
struct SijectionJson {
    n: usize,
    k: usize,
    sizes: Vec<(Vec<usize>, usize)>,
    census: Vec<(String, usize)>,
    fixed_points: Vec<String>,
    passed: bool,
    telescoped: Vec<qkflag::chevalley::ClassTermJson>,
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let common = match &cli.cmd {
        Cmd::Qbg { common, .. }
        | Cmd::Chain { common, .. }
        | Cmd::Chevalley { common, .. }
        | Cmd::Groth { common, .. }
        | Cmd::Sijection { common, .. }
        | Cmd::Verify { common, .. } => common,
    };
    let n = common.n;
    if n == 0 {
        return Err(Error::Config("--n must be at least 1".into()));
    }
    if common.threads > 0 {
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let exec = if common.threads == 1 { Exec::Sequential } else { Exec::default() };
    let (d, format) = (common.q_deg, common.format());

    match cli.cmd {
        Cmd::Qbg { dot, .. } => {
            let edges = all_edges(n)?;
            if dot || format == Format::Dot {
                print!("{}", to_dot(n, &edges));
            } else {
                print!("{}", to_tsv(&edges));
            }
        }
        Cmd::Chain { set, .. } => {
            let set = normalize_set(n, &set)?;
            let chain = chain_for(n, &set)?;
            let v = validate_chain(&chain)?;
            print!("{}", chain.to_rows());
            eprintln!(
                "closed form {}, label pattern {}",
                if v.closed_form_agrees { "agrees" } else { "DIFFERS" },
                if v.pattern_holds { "holds" } else { "FAILS" }
            );
            if !v.passed() {
                return Ok(Outcome::Failed);
            }
        }
        Cmd::Chevalley { w, set, .. } => {
            let w = parse_window(n, &w)?;
            let cls = KqgClass::basis(w, NovikovDeg::zero(n), d);
            print!("{}", class_output(&tensor_minuscule_with(exec, &cls, &set)?, format));
        }
        Cmd::Groth { w, classical, presentation, .. } => {
            let w = parse_window(n, &w)?;
            let g = if classical { groth_classical(&w, d)? } else { groth(&w, d)? };
            let x = presentation == Presentation::X;
            match format {
                Format::Json if x => println!("{}", sorted_json(&g.swap_presentation().to_json_value())),
                Format::Json => println!("{}", sorted_json(&g.to_json_value())),
                _ => println!("{}", g.render(x)),
            }
        }
        Cmd::Sijection { k, dump, .. } => {
            let check = check_sijection_with(exec, n, k)?;
            let telescoped = telescope_sum_with(exec, n, k, d)?;
            if dump {
                for p in enumerate_all_with(exec, n, k)? {
                    eprintln!("{}\t{}", qkflag::sijection::classify(&p), p);
                }
            }
            if format == Format::Json {
                let out = SijectionJson {
                    n,
                    k,
                    sizes: check.sizes.clone().into_iter().collect(),
                    census: check.census.iter().map(|(c, m)| (c.to_string(), *m)).collect(),
                    fixed_points: check.fixed_points.iter().map(|p| p.to_string()).collect(),
                    passed: check.passed(),
                    telescoped: telescoped.to_json_value(),
                };
                println!("{}", sorted_json(&out));
            } else {
                for (set, m) in &check.sizes {
                    println!("|D_J| J={set:?}\t{m}");
                }
                for (c, m) in &check.census {
                    println!("class {c}\t{m}");
                }
                for p in &check.fixed_points {
                    println!("fixed point\t{p}");
                }
                println!("involution\t{}", if check.passed() { "ok" } else { "FAIL" });
                print!("{}", telescoped.to_rows());
            }
            if !check.passed() {
                return Ok(Outcome::Failed);
            }
        }
        Cmd::Verify { suite, k, seed, samples, .. } => {
            let reports: Vec<Report> = match suite {
                Suite::Main => vec![verify::verify_main_with(exec, n, d)?],
                Suite::Longest => vec![verify::verify_longest_with(exec, n, d)?],
                Suite::Ideal => vec![verify::verify_ideal_with(exec, n, d)?],
                Suite::Descent => vec![verify::verify_descent_with(exec, n, d)?],
                Suite::Sijection => vec![verify::verify_sijection_with(exec, n, d)?],
                Suite::Demazure => vec![verify::verify_demazure(n, samples, seed)?],
                Suite::PropWk => {
                    let ks: Vec<usize> = match k {
                        Some(k) => vec![k],
                        None => (1..=n).collect(),
                    };
                    ks.into_iter()
                        .map(|k| verify::verify_prop_wk_with(exec, n, k, d))
                        .collect::<Result<_, _>>()?
                }
            };
            if format == Format::Json {
                let json = if reports.len() == 1 { sorted_json(&reports[0]) } else { sorted_json(&reports) };
                println!("{json}");
            } else {
                for r in &reports {
                    print!("{}", r.to_text());
                }
            }
            if !reports.iter().all(|r| r.passed) {
                return Ok(Outcome::Failed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e @ Error::Integrity(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
