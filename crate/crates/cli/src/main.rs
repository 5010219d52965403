use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use knotoid::enumerate::{assign_crossings, gen_shadows, ingest_planar_code};
use knotoid::invariants::signature;
use knotoid::moves::{equivalent, simplify, Equivalence, ReachParams};
use knotoid::pipeline::{
    census_to_string, census_total, classify, load, load_fixtures, report_census, report_uniqueness, verify_fixtures,
    ClassifyParams,
};
use knotoid::{parse_code, print_pd, Diagram};

/// Spherical knotoid diagrams: codes, invariants, moves and census tables.
#[derive(Parser)]
#[command(name = "knotoid", version)]
struct Cli {
    /// Worker threads; output never depends on it.
    #[arg(long, global = true, env = "KNOTOID_WORKERS")]
    workers: Option<usize>,
    /// Aligned, human-oriented output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Read codes from a file instead of stdin, one per line.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct Search {
    /// Crossing-increasing Reidemeister II moves allowed per path.
    #[arg(long, default_value_t = 0)]
    r: u32,
    /// Allow flypes.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    flypes: bool,
    /// Distinct diagrams per search before giving up.
    #[arg(long, default_value_t = ReachParams::DEFAULT_MAX_STATES)]
    state_cap: usize,
}

impl Search {
    fn params(self) -> ReachParams {
        ReachParams { r: self.r, use_flypes: self.flypes, max_states: self.state_cap }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Canonical,
    Em,
    Pd,
}

#[derive(Subcommand)]
enum Command {
    /// Convert PD or EM codes.
    Codes {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "canonical")]
        to: Format,
        /// Same as `--to canonical`.
        #[arg(long, conflicts_with = "to")]
        canonical: bool,
    },
    /// Print the five invariants of each code.
    Invariants {
        #[command(flatten)]
        input: Input,
    },
    /// Simplify each code by Reidemeister moves (and flypes).
    Simplify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: Search,
    },
    /// Decide whether two codes are connected by moves.
    Equivalent {
        a: String,
        b: String,
        #[command(flatten)]
        search: Search,
    },
    /// List diagrams (or shadows) with a given number of crossings.
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
        /// Print shadows instead of decorated diagrams.
        #[arg(long)]
        shadows: bool,
        /// Take shadows from a planar_code file instead of generating them.
        #[arg(long, conflicts_with = "n")]
        planar_code: Option<PathBuf>,
    },
    /// Build the census of prime knotoids.
    Classify {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Distinct diagrams per search in the group and symmetry passes.
        #[arg(long, default_value_t = ClassifyParams::DEFAULT_SEARCH_CAP)]
        state_cap: usize,
        /// Do not identify a knotoid with its rotation.
        #[arg(long)]
        no_rotation: bool,
    },
    /// Check computed invariants against a fixture file.
    Verify {
        #[arg(long)]
        fixtures: PathBuf,
        #[arg(long)]
        max_crossings: Option<usize>,
    },
    /// Summary tables of a census file.
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = ["1", "2"])]
        table: String,
    },
}

fn read_text(input: &Input) -> Result<String> {
    match &input.input {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_codes(input: &Input) -> Result<Vec<Diagram>> {
    read_text(input)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| parse_code(l).with_context(|| format!("code {}", i + 1)))
        .collect()
}

fn table(rows: Vec<Vec<String>>, pretty: bool) -> String {
    let mut s = String::new();
    if pretty {
        let widths: Vec<usize> =
            (0..rows[0].len()).map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0)).collect();
        for r in &rows {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            s.push_str(cells.join("  ").trim_end());
            s.push('\n');
        }
    } else {
        for r in &rows {
            s.push_str(&r.join("\t"));
            s.push('\n');
        }
    }
    s
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Codes { input, to, canonical } => {
            let to = if canonical { Format::Canonical } else { to };
            for d in read_codes(&input)? {
                let line = match to {
                    Format::Canonical => d.code().to_em(),
                    Format::Em => knotoid::print_em(&d),
                    Format::Pd => print_pd(&d),
                };
                writeln!(out, "{line}")?;
            }
        }
        Command::Invariants { input } => {
            for d in read_codes(&input)? {
                let sig = signature(&d);
                let rows = sig.values().iter().map(|(k, v)| vec![k.to_string(), v.to_string()]).collect();
                out.write_all(table(rows, cli.pretty).as_bytes())?;
            }
        }
        Command::Simplify { input, search } => {
            for d in read_codes(&input)? {
                let (s, capped) = simplify(&d, search.params());
                if capped {
                    eprintln!("warning: state cap reached; result may not be minimal");
                }
                writeln!(out, "{}", s.code().to_em())?;
            }
        }
        Command::Equivalent { a, b, search } => {
            let (a, b) = (parse_code(&a).context("first code")?, parse_code(&b).context("second code")?);
            let verdict = match equivalent(&a, &b, search.params()) {
                Equivalence::Equivalent => "equivalent",
                Equivalence::Distinct => "distinct",
                Equivalence::NotConnected => "not-connected",
                Equivalence::Indeterminate => "indeterminate",
            };
            writeln!(out, "{verdict}")?;
        }
        Command::Enumerate { n, shadows, planar_code } => {
            let maps = match (n, planar_code) {
                (_, Some(path)) => {
                    let data = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
                    let got = ingest_planar_code(&data)?;
                    eprintln!("records {} kept {} shadows {}", got.records, got.kept, got.shadows.len());
                    got.shadows
                }
                (Some(n), None) => gen_shadows(n)?,
                (None, None) => bail!("give --n or --planar-code"),
            };
            let mut lines: Vec<String> = if shadows {
                maps.iter().filter_map(|s| s.code()).map(|c| c.to_em()).collect()
            } else {
                maps.iter().flat_map(assign_crossings).map(|d| d.code().to_em()).collect()
            };
            lines.sort();
            lines.dedup();
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
        Command::Classify { max_n, out: path, state_cap, no_rotation } => {
            let mut p = ClassifyParams::new(max_n).with_state_cap(state_cap);
            for s in &mut p.reduce {
                s.max_states = ReachParams::DEFAULT_MAX_STATES;
            }
            p.rotation_augmented = !no_rotation;
            let census = classify(&p)?;
            for (step, count) in &census.funnel {
                eprintln!("{step}: {count}");
            }
            let text = census_to_string(&census.records);
            match path {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Verify { fixtures, max_crossings } => {
            let fx = load_fixtures(&fixtures)?;
            let rep = verify_fixtures(&fx, max_crossings);
            let mut rows = vec![vec!["invariant".to_string(), "match".to_string(), "mismatch".to_string()]];
            for (k, pass, fail) in &rep.per_invariant {
                rows.push(vec![k.to_string(), pass.to_string(), fail.to_string()]);
            }
            out.write_all(table(rows, cli.pretty).as_bytes())?;
            for m in &rep.mismatches {
                writeln!(out, "mismatch\t{}\t{}\tgot {}\twant {}", m.name, m.invariant, m.got, m.want)?;
            }
            for (name, e) in &rep.code_errors {
                writeln!(out, "code-error\t{name}\t{e}")?;
            }
            if !rep.all_pass() {
                bail!("{} mismatches, {} code errors", rep.mismatches.len(), rep.code_errors.len());
            }
        }
        Command::Report { input, table: which } => {
            let records = match &input.input {
                Some(p) => load(p)?,
                None => knotoid::pipeline::census_from_str(&read_text(&input)?)?,
            };
            let rows = if which == "1" {
                let body = report_census(&records);
                let total = census_total(&body);
                let head = ["crossings", "total", "chiral_yes", "chiral_no", "rotatable_yes", "rotatable_no", "possible_duplicates"];
                let mut rows = vec![head.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
                let cells = |label: String, r: &knotoid::pipeline::CensusRow| {
                    vec![
                        label,
                        r.total.to_string(),
                        r.chiral_yes.to_string(),
                        r.chiral_no.to_string(),
                        r.rotatable_yes.to_string(),
                        r.rotatable_no.to_string(),
                        r.possible_duplicates.to_string(),
                    ]
                };
                for r in &body {
                    rows.push(cells(r.crossings.to_string(), r));
                }
                rows.push(cells("total".to_string(), &total));
                rows
            } else {
                let mut rows = vec![vec!["invariant".to_string(), "unique".to_string(), "non_unique".to_string()]];
                for (k, u, n) in report_uniqueness(&records) {
                    rows.push(vec![k.to_string(), u.to_string(), n.to_string()]);
                }
                rows
            };
            out.write_all(table(rows, cli.pretty).as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is configured once");
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let res = run(cli, &mut out).and_then(|()| out.flush().map_err(Into::into));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
