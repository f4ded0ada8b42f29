use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

use cospectral::graphing::{
    embedded_spectral_radius, mtp_check, product_test_function, rokhlin_partition_with, Graphing,
    TestFunction, DEFAULT_CLASS_CAP,
};
use cospectral::harness::{self, parse_ranges, ExperimentConfig, OracleSpec, EXPERIMENTS};
use cospectral::irs::{
    permutation_stabilizer_oracle, rng, sample_bernoulli_percolation, IrsSample,
};
use cospectral::linalg::PowerOptions;
use cospectral::schreier::{
    folner_search, generate_ball_from, BallOptions, SubgroupOracle, DEFAULT_VERTEX_CAP,
};
use cospectral::spectral::{
    critical_exponent, dirichlet_lower_bound_with, grigorchuk_rho, return_probability_bound_with,
};
use cospectral::{Error, ExactGraphing, StallingsAutomaton, Weight, Word};

#[derive(Parser)]
#[command(
    name = "cospectral",
    version,
    about = "Co-spectral radius estimates for Schreier graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for seeded oracles and samplers.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Ball radius.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Output file (stdout when omitted); experiments treat it as a stem.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Radius-R ball of a Schreier graph, as a JSON summary or DOT.
    Ball {
        /// Oracle spec, e.g. `kernel:weights=1,0` or `perm:n=50;d=2`.
        oracle: String,
        #[arg(long, value_enum, default_value = "json")]
        format: BallFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Lower bound for the co-spectral radius from a finite window.
    Spectral {
        oracle: String,
        #[arg(long, value_enum, default_value = "dirichlet")]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Stallings automaton of H1 ∩ H2 for subgroups of F_d.
    Intersect {
        /// Comma-separated generators of H1, e.g. `aa,b,abA`.
        h1: String,
        h2: String,
        #[arg(long, short, default_value_t = 2)]
        d: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Cogrowth, critical exponent and the cogrowth-formula ρ of ⟨gens⟩ ≤ F_d.
    Cogrowth {
        gens: String,
        #[arg(long, short, default_value_t = 2)]
        d: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Draw an IRS sample and print its JSON record.
    Sample {
        #[command(subcommand)]
        kind: SampleKind,
    },
    /// Finite graphings read from a text file.
    Graphing {
        #[command(subcommand)]
        op: GraphingOp,
    },
    /// Run an experiment from a flat key = value config file.
    Experiment {
        /// One of main_theorem, sup_conjugates, wreath_counterexample, cogrowth_sweep.
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum SampleKind {
    Percolation {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        window: i64,
        #[command(flatten)]
        common: Common,
    },
    Perm {
        #[arg(long)]
        n: usize,
        #[arg(long, short, default_value_t = 2)]
        d: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum GraphingOp {
    /// Both sides of the mass transport identity for a seeded random kernel.
    Mtp {
        input: PathBuf,
        /// Use exact rational weights.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Partition X = B ⊔ A_1 ⊔ … ⊔ A_N with no map edge inside a class.
    Rokhlin {
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        class_cap: usize,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Embedded spectral radius of a point set (default: all points).
    Embedded {
        input: PathBuf,
        /// Inclusive ranges, e.g. `0..9,20`.
        #[arg(long)]
        set: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Product test function 1_F × f2 over a Schreier ball and a graphing.
    Testfn {
        /// Graphing X2 with one map per free generator of the oracle.
        input: PathBuf,
        /// Oracle for X1; F is the best Følner set found in its ball.
        #[arg(long)]
        oracle: String,
        /// Component P2 ⊆ X2 (default: all points).
        #[arg(long)]
        component: Option<String>,
        #[arg(long, value_enum, default_value = "eigen")]
        f2: F2Kind,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BallFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dirichlet,
    Return,
}

#[derive(Clone, Copy, ValueEnum)]
enum F2Kind {
    Eigen,
    Indicator,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CAP: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_resource_cap() => EXIT_CAP,
        Error::Io(_) => EXIT_FAILURE,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> cospectral::Result<()> {
    emit_text(&harness::to_json(value)?, out)
}

fn emit_text(text: &str, out: Option<&Path>) -> cospectral::Result<()> {
    match out {
        Some(path) => harness::write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn oracle(spec: &str, seed: Option<u64>) -> cospectral::Result<harness::AnyOracle> {
    let spec: OracleSpec = spec.parse()?;
    match seed {
        Some(s) => spec.with_default_seed(s).build(),
        None => spec.build(),
    }
}

fn words(list: &str) -> cospectral::Result<Vec<Word>> {
    list.split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(str::parse)
        .collect()
}

fn read_graphing<W: Weight>(path: &Path) -> cospectral::Result<Graphing<W>> {
    fs::read_to_string(path)?.parse()
}

fn random_kernel(points: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let u = (0..points).map(|_| r.gen::<f64>()).collect();
    let v = (0..points).map(|_| r.gen::<f64>()).collect();
    (u, v)
}

#[derive(Serialize)]
struct MtpOut<W> {
    points: usize,
    lhs: W,
    rhs: W,
    difference: f64,
}

#[derive(Serialize)]
struct IntersectOut {
    generators: Vec<Word>,
    states: usize,
    index: cospectral::SubgroupIndex,
    dot: String,
}

#[derive(Serialize)]
struct CogrowthOut {
    cogrowth: cospectral::CogrowthResult64,
    critical_exponent: Option<f64>,
    rho: f64,
    index: cospectral::SubgroupIndex,
}

fn run(command: Command) -> cospectral::Result<()> {
    match command {
        Command::Ball {
            oracle: spec,
            format,
            common,
        } => {
            let o = oracle(&spec, common.seed)?;
            let opts = BallOptions::default();
            let ball = generate_ball_from(&o, o.root(), common.radius.unwrap_or(3), &opts)?;
            match format {
                BallFormat::Json => emit(&ball.summary(), common.out.as_deref()),
                BallFormat::Dot => {
                    let alphabet = o.family().alphabet();
                    emit_text(
                        &ball.to_dot(&alphabet, |c| c.to_string()),
                        common.out.as_deref(),
                    )
                }
            }
        }
        Command::Spectral {
            oracle: spec,
            method,
            tol,
            vertex_cap,
            common,
        } => {
            let o = oracle(&spec, common.seed)?;
            let radius = common.radius.unwrap_or(10);
            let est: cospectral::SpectralEstimate64 = match method {
                MethodArg::Dirichlet => {
                    let opts = BallOptions {
                        vertex_cap,
                        track_halo: false,
                    };
                    let ball = generate_ball_from(&o, o.root(), radius, &opts)?;
                    dirichlet_lower_bound_with(
                        &ball,
                        &PowerOptions {
                            tol,
                            ..PowerOptions::default()
                        },
                    )?
                }
                MethodArg::Return => return_probability_bound_with(&o, radius, vertex_cap)?,
            };
            emit(&est, common.out.as_deref())
        }
        Command::Intersect { h1, h2, d, common } => {
            let a = StallingsAutomaton::build(&words(&h1)?, d)?;
            let b = StallingsAutomaton::build(&words(&h2)?, d)?;
            let c = a.intersect(&b)?;
            let out = IntersectOut {
                generators: c.generators(),
                states: c.num_states(),
                index: c.index(),
                dot: c.to_dot(),
            };
            emit(&out, common.out.as_deref())
        }
        Command::Cogrowth { gens, d, common } => {
            let a = StallingsAutomaton::build(&words(&gens)?, d)?;
            let cogrowth: cospectral::CogrowthResult64 = a.cogrowth_rate();
            let out = CogrowthOut {
                critical_exponent: critical_exponent(&cogrowth),
                rho: grigorchuk_rho(cogrowth.alpha, d)?,
                index: a.index(),
                cogrowth,
            };
            emit(&out, common.out.as_deref())
        }
        Command::Sample { kind } => match kind {
            SampleKind::Percolation { p, window, common } => {
                let s = sample_bernoulli_percolation(p, window, common.seed.unwrap_or(0))?;
                emit(
                    &IrsSample::Percolation(s).to_record(),
                    common.out.as_deref(),
                )
            }
            SampleKind::Perm { n, d, common } => {
                let o = permutation_stabilizer_oracle(n, d, common.seed.unwrap_or(0))?;
                emit(
                    &IrsSample::Permutation(o).to_record(),
                    common.out.as_deref(),
                )
            }
        },
        Command::Graphing { op } => run_graphing(op),
        Command::Experiment {
            name,
            config,
            threads,
            common,
        } => {
            let mut cfg = match &config {
                Some(path) => fs::read_to_string(path)?.parse()?,
                None => ExperimentConfig::default(),
            };
            cfg.experiment = name;
            if let Some(seed) = common.seed {
                cfg.seeds = vec![seed];
            }
            if let Some(r) = common.radius {
                cfg.radius = r;
            }
            if let Some(out) = common.out {
                cfg.out = Some(out);
            }
            if let Some(t) = threads {
                cfg.threads = t.max(1);
            }
            if !EXPERIMENTS.contains(&cfg.experiment.as_str()) {
                return Err(Error::Invalid(format!(
                    "unknown experiment `{}`; expected one of {}",
                    cfg.experiment,
                    EXPERIMENTS.join(", ")
                )));
            }
            let report = harness::run_experiment(&cfg)?;
            match &cfg.out {
                Some(stem) => {
                    let written = harness::export(
                        &report,
                        stem,
                        &[harness::Format::Json, harness::Format::Csv],
                    )?;
                    for p in written {
                        eprintln!("wrote {}", p.display());
                    }
                    Ok(())
                }
                None => emit(&report, None),
            }
        }
    }
}

fn run_graphing(op: GraphingOp) -> cospectral::Result<()> {
    match op {
        GraphingOp::Mtp {
            input,
            exact,
            common,
        } => {
            let seed = common.seed.unwrap_or(0);
            if exact {
                let g: ExactGraphing = read_graphing(&input)?;
                let (u, v) = random_kernel(g.points(), seed);
                let to_q = |x: f64| num_rational::BigRational::from_float(x).expect("finite");
                let (u, v): (Vec<_>, Vec<_>) = (
                    u.into_iter().map(to_q).collect(),
                    v.into_iter().map(to_q).collect(),
                );
                let r = mtp_check(&g, |x, y| &u[x] * &v[y]);
                let diff = num_traits::ToPrimitive::to_f64(&(&r.lhs - &r.rhs))
                    .unwrap_or(f64::NAN)
                    .abs();
                emit(
                    &MtpOut {
                        points: g.points(),
                        lhs: r.lhs.to_string(),
                        rhs: r.rhs.to_string(),
                        difference: diff,
                    },
                    common.out.as_deref(),
                )
            } else {
                let g: Graphing<f64> = read_graphing(&input)?;
                let (u, v) = random_kernel(g.points(), seed);
                let r = mtp_check(&g, |x, y| u[x] * v[y]);
                emit(
                    &MtpOut {
                        points: g.points(),
                        lhs: r.lhs,
                        rhs: r.rhs,
                        difference: (r.lhs - r.rhs).abs(),
                    },
                    common.out.as_deref(),
                )
            }
        }
        GraphingOp::Rokhlin {
            input,
            delta,
            class_cap,
            exact,
            common,
        } => {
            if exact {
                let g: ExactGraphing = read_graphing(&input)?;
                let r = rokhlin_partition_with(&g, delta, class_cap)?;
                r.verify(&g)?;
                let weight = r.b_weight.to_string();
                #[derive(Serialize)]
                struct Out<'a> {
                    b: &'a [usize],
                    classes: &'a [Vec<usize>],
                    b_weight: String,
                    delta: f64,
                    class_caps: &'a [usize],
                }
                emit(
                    &Out {
                        b: &r.b,
                        classes: &r.classes,
                        b_weight: weight,
                        delta,
                        class_caps: &r.class_caps,
                    },
                    common.out.as_deref(),
                )
            } else {
                let g: Graphing<f64> = read_graphing(&input)?;
                let r = rokhlin_partition_with(&g, delta, class_cap)?;
                r.verify(&g)?;
                emit(&r, common.out.as_deref())
            }
        }
        GraphingOp::Embedded { input, set, common } => {
            let g: Graphing<f64> = read_graphing(&input)?;
            let p: Vec<usize> = match set {
                Some(s) => to_points(&s, g.points())?,
                None => (0..g.points()).collect(),
            };
            emit(&embedded_spectral_radius(&g, &p)?, common.out.as_deref())
        }
        GraphingOp::Testfn {
            input,
            oracle: spec,
            component,
            f2,
            common,
        } => {
            let x2: Graphing<f64> = read_graphing(&input)?;
            let o = oracle(&spec, common.seed)?;
            let ball = generate_ball_from(
                &o,
                o.root(),
                common.radius.unwrap_or(10),
                &BallOptions::default(),
            )?;
            let f = folner_search(&ball)?;
            let p2 = match component {
                Some(s) => to_points(&s, x2.points())?,
                None => (0..x2.points()).collect(),
            };
            let f2 = match f2 {
                F2Kind::Eigen => TestFunction::top_eigenfunction(&x2, p2)?,
                F2Kind::Indicator => TestFunction::interior_indicator(&x2, p2)?,
            };
            let t = product_test_function(&ball, &f.set.members, &x2, &f2)?;
            emit(&t.report, common.out.as_deref())
        }
    }
}

fn to_points(ranges: &str, n: usize) -> cospectral::Result<Vec<usize>> {
    parse_ranges(ranges)?
        .into_iter()
        .map(|x| {
            usize::try_from(x)
                .ok()
                .filter(|&x| x < n)
                .ok_or_else(|| Error::Invalid(format!("point {x} out of range")))
        })
        .collect()
}
