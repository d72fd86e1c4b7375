use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use psl2z::analyze::{is_almost_malnormal, is_parabolic};
use psl2z::codec::{self, emit, emit_many};
use psl2z::count::{CountCache, IsoMode};
use psl2z::enumerate::{enum_cyclically_reduced, enum_rooted};
use psl2z::experiment::{run_experiment, to_csv, Experiment, ExperimentError, ExperimentSpec};
use psl2z::moves::{apply_in_place, minimal_sequence};
use psl2z::sample::{
    sample_by_iso, sample_cyclically_reduced, sample_of_size, sample_rooted, sample_silhouette, RawGraphSampler,
    Rng,
};
use psl2z::stallings::{build_stallings, member};
use psl2z::words::parse_word_list;
use psl2z::{CombType, IsoType, LabeledGraph, Word};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (graph format: psl2z-graph v1)");

#[derive(Parser)]
#[command(name = "psl2z", version = VERSION, about = "Subgroup graphs of the modular group")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stallings graph of the subgroup generated by a word list
    Stallings {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact counts
    Count(CountArgs),
    /// Uniform random graphs
    Sample(SampleArgs),
    /// Silhouette of a graph
    Silhouette {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        trace: bool,
    },
    /// Exhaustive enumeration for small sizes
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        rooted: bool,
        #[arg(long = "group-by", value_enum)]
        group_by: Option<GroupBy>,
        #[arg(long = "include-trivial")]
        include_trivial: bool,
    },
    /// Decide a property of a rooted graph; exit status 0 for yes, 1 for no
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        witness: bool,
    },
    /// Monte Carlo experiment, CSV report
    Experiment {
        name: Experiment,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u32>,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0.15)]
        alpha: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["comb_type", "iso"]))]
struct CountArgs {
    #[arg(long = "type")]
    comb_type: Option<CombType>,
    #[arg(long, value_enum, default_value = "s")]
    what: What,
    /// n,l2,l3,r
    #[arg(long)]
    iso: Option<String>,
    #[arg(long = "cyclically-reduced")]
    cyclically_reduced: bool,
    /// Labeled graphs instead of subgroups
    #[arg(long)]
    labeled: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["comb_type", "iso", "size", "silhouette"]))]
struct SampleArgs {
    #[arg(long = "type")]
    comb_type: Option<CombType>,
    #[arg(long)]
    iso: Option<String>,
    /// Uniform cyclically reduced graph with n vertices
    #[arg(long)]
    size: Option<u32>,
    /// Uniform silhouette graph with n vertices
    #[arg(long)]
    silhouette: Option<u32>,
    /// With --type: rooted graph of that type
    #[arg(long)]
    rooted: bool,
    #[arg(long = "cyclically-reduced")]
    cyclically_reduced: bool,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    #[value(name = "s")]
    S,
    #[value(name = "L")]
    L,
    #[value(name = "H")]
    H,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupBy {
    Type,
    Iso,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Parabolic,
    Malnormal,
    Member,
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn write_out(out: &Option<String>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn read_graph(path: &str) -> Result<LabeledGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    codec::parse(&text).map_err(|e| usage(format!("{path}: {e}")))
}

fn parse_iso(s: &str) -> Result<(u32, IsoType), Failure> {
    let parts: Vec<&str> = s.trim().trim_matches(|c| c == '(' || c == ')').split(',').collect();
    let nums: Vec<u32> = parts
        .iter()
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("bad --iso {s:?}: expected n,l2,l3,r")))?;
    match nums[..] {
        [n, l2, l3, r] => Ok((n, IsoType::new(l2, l3, r))),
        _ => Err(usage(format!("bad --iso {s:?}: expected n,l2,l3,r"))),
    }
}

fn checked(g: LabeledGraph) -> Result<LabeledGraph, Failure> {
    match g.validate() {
        Ok(()) => Ok(g),
        Err(v) => Err(Failure::Invariant(format!("produced an invalid graph: {v:?}"))),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let cache = CountCache::global();
    match cli.cmd {
        Cmd::Stallings { gens, out } => {
            let words = parse_word_list(&gens)?;
            write_out(&out, &emit(&checked(build_stallings(&words))?))?;
        }
        Cmd::Count(a) => {
            let value = if let Some(t) = a.comb_type {
                match a.what {
                    What::S => cache.s(&t)?,
                    What::L => cache.l_count(&t)?,
                    What::H => cache.h_count(&t)?,
                }
            } else {
                let (n, sigma) = parse_iso(a.iso.as_deref().expect("group requires one"))?;
                let mode = if a.cyclically_reduced { IsoMode::CyclicallyReduced } else { IsoMode::All };
                if a.labeled {
                    cache.count_by_iso_labeled(n, &sigma, mode)?
                } else {
                    cache.count_by_iso(n, &sigma, mode)?
                }
            };
            println!("{value}");
        }
        Cmd::Sample(a) => {
            let mut rng = Rng::new(a.seed);
            let raw = match a.size {
                Some(n) => Some(RawGraphSampler::new(n)?),
                None => None,
            };
            let mut graphs = Vec::with_capacity(a.count);
            for _ in 0..a.count {
                let g = if let Some(t) = &a.comb_type {
                    if a.rooted {
                        sample_rooted(cache, t, &mut rng)?
                    } else {
                        sample_cyclically_reduced(cache, t, &mut rng)?
                    }
                } else if let Some(iso) = &a.iso {
                    let (n, sigma) = parse_iso(iso)?;
                    let mode = if a.cyclically_reduced { IsoMode::CyclicallyReduced } else { IsoMode::All };
                    sample_by_iso(cache, n, &sigma, mode, &mut rng)?
                } else if let Some(raw) = &raw {
                    sample_of_size(cache, raw, &mut rng)?
                } else {
                    sample_silhouette(a.silhouette.expect("group requires one"), &mut rng)?
                };
                graphs.push(checked(g)?);
            }
            write_out(&a.out, &emit_many(&graphs))?;
        }
        Cmd::Silhouette { input, trace } => {
            let g = read_graph(&input)?;
            g.validate().map_err(|v| usage(format!("{input}: not a reduced graph: {v:?}")))?;
            let seq = minimal_sequence(&g);
            let mut h = g.clone();
            let mut text = String::new();
            for m in &seq {
                apply_in_place(&mut h, *m).map_err(|e| Failure::Invariant(e.to_string()))?;
                if trace {
                    text.push_str(&format!("{m}\n"));
                }
            }
            if trace {
                text.push('\n');
            }
            text.push_str(&emit(&h.relab()));
            print!("{text}");
        }
        Cmd::Enumerate { size, rooted, group_by, include_trivial } => {
            if !(1..=9).contains(&size) {
                return Err(usage("enumeration supports sizes 1 to 9"));
            }
            let stream: Box<dyn Iterator<Item = LabeledGraph>> = if rooted {
                Box::new(enum_rooted(size, include_trivial))
            } else {
                Box::new(enum_cyclically_reduced(size))
            };
            let mut stdout = std::io::stdout().lock();
            match group_by {
                None => {
                    let mut first = true;
                    for g in stream {
                        if !first {
                            writeln!(stdout).map_err(|e| usage(e.to_string()))?;
                        }
                        first = false;
                        write!(stdout, "{}", emit(&g)).map_err(|e| usage(e.to_string()))?;
                    }
                }
                Some(GroupBy::Type) => {
                    let mut tally: BTreeMap<CombType, u64> = BTreeMap::new();
                    for g in stream {
                        *tally.entry(g.comb_type()).or_default() += 1;
                    }
                    for (t, c) in tally {
                        writeln!(stdout, "{t} {c}").map_err(|e| usage(e.to_string()))?;
                    }
                }
                Some(GroupBy::Iso) => {
                    let mut tally: BTreeMap<IsoType, u64> = BTreeMap::new();
                    for g in stream {
                        let t = g.iso_type().map_err(|e| Failure::Invariant(e.to_string()))?;
                        *tally.entry(t).or_default() += 1;
                    }
                    for (t, c) in tally {
                        writeln!(stdout, "{t} {c}").map_err(|e| usage(e.to_string()))?;
                    }
                }
            }
        }
        Cmd::Check { what, input, word, witness } => {
            let g = read_graph(&input)?;
            g.validate().map_err(|v| usage(format!("{input}: not a reduced graph: {v:?}")))?;
            let verdict = match what {
                CheckKind::Parabolic => is_parabolic(&g),
                CheckKind::Malnormal => {
                    let (ok, w) = is_almost_malnormal(&g);
                    if let (true, Some(w)) = (witness, w) {
                        println!("witness {} at {} and {}", w.word, w.p, w.q);
                    }
                    ok
                }
                CheckKind::Member => {
                    let w: Word = word.ok_or_else(|| usage("member needs --word"))?.parse()?;
                    member(&g, &w)
                }
            };
            println!("{verdict}");
            return Ok(if verdict { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Experiment { name, sizes, trials, alpha, seed, out } => {
            let spec = ExperimentSpec { experiment: name, sizes, trials, alpha, seed };
            let rows = run_experiment(&spec).map_err(|e| match e {
                ExperimentError::Invariant(m) => Failure::Invariant(m),
                e => usage(e.to_string()),
            })?;
            let bad = rows.iter().find(|r| r.metric == "rank_violations" && r.value != 0.0);
            write_out(&out, &to_csv(&rows))?;
            if let Some(r) = bad {
                return Err(Failure::Invariant(format!("{} rank violations at n = {}", r.value, r.n)));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("invariant breach: {m}");
            ExitCode::from(3)
        }
    }
}
