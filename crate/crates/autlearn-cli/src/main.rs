//! Command-line driver: learn predicate automata for automatic sequences,
//! verify supplied automata against the self-verification conditions,
//! evaluate predicates pointwise, and compare the learner against the
//! direct construction.
//!
//! Exit codes: 0 success, 1 configuration or parse error, 2 budget
//! exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use autlearn::dfa::CompleteDfa;
use autlearn::format;
use autlearn::lstar::{learn, Budgets, LearnOptions, RunStats, Verdict};
use autlearn::numeration::{NumerationSystem, SystemKind, TrackSystemSpec};
use autlearn::predicate::CompileOptions;
use autlearn::sequence::SequenceDfao;
use autlearn::teachers::{
    adder_for, AdderTeacher, EqFacTeacher, EqRevFacTeacher, PartialSumTeacher, PeriodTeacher,
    Summand, TeacherOptions,
};
use autlearn::Error;

#[derive(Parser)]
#[command(name = "autlearn", version, about = "Learn self-verifying predicate automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Predicate {
    Eqfac,
    Eqrevfac,
    Period,
    Adder,
    PartialSum,
}

impl Predicate {
    fn name(self) -> &'static str {
        match self {
            Predicate::Eqfac => "eqfac",
            Predicate::Eqrevfac => "eqrevfac",
            Predicate::Period => "period",
            Predicate::Adder => "adder",
            Predicate::PartialSum => "partial-sum",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Canonical,
    Dot,
    Walnut,
}

#[derive(Args)]
struct JobArgs {
    /// Built-in sequence name, `rarefied-thue-morse`, or a DFAO file path.
    #[arg(long)]
    sequence: Option<String>,
    /// Numeration system (`base2`, `zeckendorf`, `tribonacci`, ...) or a
    /// custom-system config file path. Required for adder jobs.
    #[arg(long)]
    system: Option<String>,
    /// Load the addition relation from a canonical automaton file instead
    /// of learning it.
    #[arg(long)]
    adder: Option<PathBuf>,
    /// Synchronized summand automaton for partial-sum jobs.
    #[arg(long)]
    synchronized: Option<PathBuf>,
    /// Value offset of a file-loaded summand (0 or 1).
    #[arg(long, default_value_t = 0)]
    offset: u64,
    /// Evaluate memberships directly below this bound.
    #[arg(long, default_value_t = 10_000_000)]
    threshold_direct: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_queries: u64,
    #[arg(long, default_value_t = 10_000)]
    max_states: usize,
    /// Disable the membership query cache (slower; for experiments).
    #[arg(long)]
    no_cache: bool,
    /// Reserved for future randomized strategies; unused by the core.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a predicate automaton and write it out with its run stats.
    Learn {
        predicate: Predicate,
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Output formats; canonical and dot are always written.
        #[arg(long, value_delimiter = ',', default_values = ["canonical", "dot"])]
        format: Vec<Format>,
    },
    /// Check a supplied automaton against the self-verification conditions.
    Verify {
        predicate: Predicate,
        automaton: PathBuf,
        #[command(flatten)]
        job: JobArgs,
    },
    /// Evaluate a predicate membership query on an integer tuple.
    Eval {
        predicate: Predicate,
        /// Sequence name (or numeration system for adder jobs).
        target: String,
        values: Vec<String>,
        #[command(flatten)]
        job: JobArgs,
    },
    /// Compare the learner against the direct ¬∃ construction (eqfac,
    /// base-k sequences only).
    Compare {
        #[command(flatten)]
        job: JobArgs,
        /// Run the comparison even for systems with known intermediate
        /// blowup.
        #[arg(long)]
        force: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Error>().is_some_and(|e| matches!(e, Error::BudgetExceeded(_))) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn load_system(spec: &str) -> anyhow::Result<NumerationSystem> {
    if Path::new(spec).exists() {
        let text = fs::read_to_string(spec)?;
        let name = Path::new(spec)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("custom");
        return Ok(format::parse_numeration_config(name, &text)?);
    }
    Ok(NumerationSystem::by_name(spec)?)
}

fn load_sequence(spec: &str) -> anyhow::Result<SequenceDfao> {
    if Path::new(spec).exists() {
        let text = fs::read_to_string(spec)?;
        return Ok(format::parse_dfao(&text)?);
    }
    Ok(SequenceDfao::builtin(spec)?)
}

struct Job {
    teacher_opts: TeacherOptions,
    learn_opts: LearnOptions,
    adder_file: Option<PathBuf>,
}

impl Job {
    fn new(args: &JobArgs) -> Self {
        let teacher_opts = TeacherOptions {
            direct_threshold: args.threshold_direct,
            compile: CompileOptions::default(),
            ..TeacherOptions::default()
        };
        let learn_opts = LearnOptions {
            budgets: Budgets { max_unique_queries: args.max_queries, max_states: args.max_states },
            use_cache: !args.no_cache,
            trace: true,
        };
        Job { teacher_opts, learn_opts, adder_file: args.adder.clone() }
    }

    /// Addition relation for a system: from `--adder`, built in for base k,
    /// learned otherwise.
    fn adder(&self, system: &NumerationSystem) -> anyhow::Result<CompleteDfa> {
        if let Some(path) = &self.adder_file {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let adder = format::parse_dfa(&text)?;
            let expect = TrackSystemSpec::uniform(system.clone(), 3)?.alphabet();
            if *adder.alphabet() != expect {
                bail!("adder file has the wrong alphabet for {}", system.name());
            }
            return Ok(adder);
        }
        if !system.is_positional() {
            eprintln!("learning the {} adder first", system.name());
        }
        Ok(adder_for(system, self.teacher_opts)?)
    }
}

enum Teacher {
    EqFac(Box<EqFacTeacher>),
    EqRevFac(Box<EqRevFacTeacher>),
    Period(Box<PeriodTeacher>),
    Adder(Box<AdderTeacher>),
    PartialSum(Box<PartialSumTeacher>),
}

impl Teacher {
    fn spec(&self) -> &TrackSystemSpec {
        match self {
            Teacher::EqFac(t) => t.spec(),
            Teacher::EqRevFac(t) => t.spec(),
            Teacher::Period(t) => t.spec(),
            Teacher::Adder(t) => t.spec(),
            Teacher::PartialSum(t) => t.spec(),
        }
    }

    fn membership(&self, v: &[u64]) -> anyhow::Result<bool> {
        Ok(match self {
            Teacher::EqFac(t) => t.membership(v[0], v[1], v[2]),
            Teacher::EqRevFac(t) => t.membership(v[0], v[1], v[2]),
            Teacher::Period(t) => t.membership(v[0], v[1], v[2]),
            Teacher::Adder(t) => t.membership(v[0], v[1], v[2]),
            Teacher::PartialSum(t) => t.membership(v[0], v[1]),
        })
    }

    fn learn(&self, opts: &LearnOptions) -> autlearn::Result<(CompleteDfa, RunStats)> {
        let out = match self {
            Teacher::EqFac(t) => learn(&**t, &**t, t.spec().alphabet(), opts)?,
            Teacher::EqRevFac(t) => learn(&**t, &**t, t.spec().alphabet(), opts)?,
            Teacher::Period(t) => learn(&**t, &**t, t.spec().alphabet(), opts)?,
            Teacher::Adder(t) => learn(&**t, &**t, t.spec().alphabet(), opts)?,
            Teacher::PartialSum(t) => learn(&**t, &**t, t.spec().alphabet(), opts)?,
        };
        Ok((out.automaton, out.stats))
    }

    fn verify(&self, a: &CompleteDfa) -> autlearn::Result<Verdict> {
        use autlearn::lstar::HypothesisVerifier;
        match self {
            Teacher::EqFac(t) => t.verify(a),
            Teacher::EqRevFac(t) => t.verify(a),
            Teacher::Period(t) => t.verify(a),
            Teacher::Adder(t) => t.verify(a),
            Teacher::PartialSum(t) => t.verify(a),
        }
    }
}

fn build_teacher(predicate: Predicate, args: &JobArgs, job: &Job) -> anyhow::Result<Teacher> {
    match predicate {
        Predicate::Adder => {
            let system = load_system(
                args.system
                    .as_deref()
                    .ok_or_else(|| anyhow!("adder jobs need --system"))?,
            )?;
            Ok(Teacher::Adder(Box::new(AdderTeacher::new(system, job.teacher_opts)?)))
        }
        Predicate::PartialSum => {
            let summand = if let Some(path) = &args.synchronized {
                let text = fs::read_to_string(path)?;
                let (b, systems) = format::parse_synchronized(&text)?;
                Summand::new(b, systems[0].clone(), systems[1].clone(), args.offset)?
            } else {
                match args.sequence.as_deref() {
                    Some("rarefied-thue-morse") => {
                        Summand::rarefied_thue_morse(&job.teacher_opts.compile)?
                    }
                    Some(name) => Summand::from_dfao(&load_sequence(name)?),
                    None => bail!("partial-sum jobs need --sequence or --synchronized"),
                }
            };
            let x_adder = job.adder(&summand.x_system)?;
            Ok(Teacher::PartialSum(Box::new(PartialSumTeacher::new(
                summand, x_adder, job.teacher_opts,
            )?)))
        }
        _ => {
            let x = load_sequence(
                args.sequence
                    .as_deref()
                    .ok_or_else(|| anyhow!("{} jobs need --sequence", predicate.name()))?,
            )?;
            let adder = job.adder(x.system())?;
            Ok(match predicate {
                Predicate::Eqfac => {
                    Teacher::EqFac(Box::new(EqFacTeacher::new(x, None, adder, job.teacher_opts)?))
                }
                Predicate::Eqrevfac => {
                    Teacher::EqRevFac(Box::new(EqRevFacTeacher::new(x, adder, job.teacher_opts)?))
                }
                Predicate::Period => {
                    Teacher::Period(Box::new(PeriodTeacher::new(x, adder, job.teacher_opts)?))
                }
                _ => unreachable!(),
            })
        }
    }
}

fn output_stem(predicate: Predicate, args: &JobArgs) -> String {
    let target = args
        .sequence
        .clone()
        .or_else(|| args.system.clone())
        .or_else(|| {
            args.synchronized
                .as_ref()
                .and_then(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
        })
        .unwrap_or_else(|| "job".into());
    let target: String = target
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '-' })
        .collect();
    format!("{}-{}", predicate.name(), target)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Learn { predicate, job: args, out, format: formats } => {
            let job = Job::new(&args);
            let teacher = build_teacher(predicate, &args, &job)?;
            let (automaton, stats) = teacher.learn(&job.learn_opts)?;
            fs::create_dir_all(&out)?;
            let stem = output_stem(predicate, &args);
            // canonical and DOT are the contract; walnut is opt-in
            fs::write(out.join(format!("{stem}.txt")), format::write_dfa(&automaton))?;
            fs::write(out.join(format!("{stem}.dot")), format::to_dot(&automaton))?;
            if formats.contains(&Format::Walnut) {
                let (trimmed, _) = automaton.trim();
                fs::write(
                    out.join(format!("{stem}.walnut.txt")),
                    format::to_walnut(&trimmed, teacher.spec().systems()),
                )?;
            }
            fs::write(out.join(format!("{stem}.stats.txt")), stats.stats_file())?;
            eprintln!("{}", stats.kv_line());
            println!(
                "learned {} with {} states ({} trimmed)",
                stem, stats.final_states, stats.final_states_trimmed
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { predicate, automaton, job: args } => {
            let job = Job::new(&args);
            let teacher = build_teacher(predicate, &args, &job)?;
            let text = fs::read_to_string(&automaton)
                .with_context(|| format!("reading {}", automaton.display()))?;
            let a = format::parse_dfa(&text)?;
            match teacher.verify(&a)? {
                Verdict::Correct => {
                    println!("correct");
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Counterexample(w) => {
                    let tuple = teacher.spec().tuple_decode(&w)?;
                    let claim = a.accepts(&w);
                    println!(
                        "counterexample {:?}: automaton says {}, predicate says {}",
                        tuple,
                        claim,
                        teacher.membership(&tuple)?
                    );
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Eval { predicate, target, values, job: mut args } => {
            match predicate {
                Predicate::Adder => args.system = Some(target),
                _ => args.sequence = Some(target),
            }
            let job = Job::new(&args);
            let teacher = build_teacher(predicate, &args, &job)?;
            let expected = teacher.spec().arity();
            if values.len() != expected {
                bail!("{} takes {} integers, got {}", predicate.name(), expected, values.len());
            }
            let tuple: Vec<u64> = values
                .iter()
                .map(|v| v.parse::<u64>().map_err(|_| anyhow!("malformed integer {v:?}")))
                .collect::<anyhow::Result<_>>()?;
            println!("{}", teacher.membership(&tuple)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { job: args, force } => {
            let job = Job::new(&args);
            let x = load_sequence(
                args.sequence
                    .as_deref()
                    .ok_or_else(|| anyhow!("compare needs --sequence"))?,
            )?;
            if !matches!(x.system().kind(), SystemKind::Base(_)) && !force {
                bail!(
                    "compare is refused for the {} system: the direct construction is known \
                     to blow up on intermediate automata (pass --force to override)",
                    x.system().name()
                );
            }
            let adder = job.adder(x.system())?;
            let teacher = EqFacTeacher::new(x, None, adder, job.teacher_opts)?;
            let direct = teacher.direct_method()?;
            let (d_trim, _) = direct.dfa.trim();
            println!(
                "direct: final_states={} final_states_trimmed={} peak_intermediate_states={}",
                direct.dfa.state_count(),
                d_trim.state_count(),
                direct.peak_states
            );
            let out = learn(&teacher, &teacher, teacher.spec().alphabet(), &job.learn_opts)?;
            println!("lstar: {}", out.stats.stats_file().trim().replace('\n', " "));
            let equivalent = direct.dfa.equivalent(&out.automaton)?.is_none();
            println!("routes_language_equivalent={equivalent}");
            if !equivalent {
                bail!("direct and learned automata disagree");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
