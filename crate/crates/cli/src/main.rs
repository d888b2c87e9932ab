use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use moduli::bounds::CutoffTable;
use moduli::casegen::{
    generate_candidates, CandidateSet, CandidateTriple, CaseContext, CasegenConfig,
};
use moduli::catalog::product_catalog;
use moduli::classpoly::ClassPolyCache;
use moduli::eliminate::{Eliminator, Schedule, Status, Verdict};
use moduli::pipeline::{run_full_proof, summarize, RunConfig, SCHEMA_VERSION};
use moduli::quadforms::{reduced_forms, ClassNumberTable, Discriminant};
use moduli::tables::{default_data_dir, sha256_hex, DataTables, DEFAULT_SCAN_CAP};
use moduli::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(
    name = "moduli",
    version,
    about = "Verify that triples of singular moduli with rational product are trivial"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Directory holding the checksummed data tables.
    #[arg(long, global = true, env = "MODULI_DATA_DIR")]
    data_dir: Option<PathBuf>,
    /// Directory for cached class polynomials.
    #[arg(long, global = true, env = "MODULI_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args, Clone)]
struct ElimArgs {
    /// Keep only candidates whose smallest class number is at most this.
    #[arg(long)]
    max_h3: Option<u32>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Precision ladder, comma separated headroom bits.
    #[arg(long, value_delimiter = ',', default_values_t = Schedule::default().rungs)]
    ladder: Vec<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced forms of a discriminant, one `a b c` row each.
    Forms {
        #[arg(short = 'd', long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Class number of a discriminant.
    Classnum {
        #[arg(short = 'd', long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Hilbert class polynomial coefficients, leading first.
    Hcp {
        #[arg(short = 'd', long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Cutoff table of the bound cases.
    Thresholds,
    /// Generate the candidate discriminant triples.
    Casegen {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_h3: Option<u32>,
    },
    /// Eliminate candidates from a casegen file.
    Eliminate {
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        elim: ElimArgs,
    },
    /// Products of the trivial triples, as TSV.
    Catalog {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data table maintenance.
    Tables {
        #[command(subcommand)]
        action: TablesAction,
    },
    /// Thresholds, candidates, elimination and catalog in one run.
    Run {
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        elim: ElimArgs,
    },
}

#[derive(Subcommand)]
enum TablesAction {
    /// Check checksums and row consistency.
    Validate,
    /// Recompute the tables into `--out` (defaults to the data directory).
    Regen {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize, Deserialize)]
struct CandidateFile {
    schema_version: u32,
    candidates: Vec<CandidateTriple>,
}

#[derive(Serialize)]
struct VerdictFile<'a> {
    schema_version: u32,
    verdicts: &'a [Verdict],
}

enum Failure {
    Usage(String),
    Undecided(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Data { .. }
            | Error::Checksum { .. }
            | Error::Io { .. }
            | Error::Json(_)
            | Error::CapTooSmall { .. }
            | Error::ClassNumberNotTabulated { .. } => Failure::Data(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| io_err(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| io_err(Path::new("<stdout>"), e))
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn disc(v: i64) -> Result<Discriminant, Failure> {
    Ok(Discriminant::new(v)?)
}

fn data_dir(c: &Common) -> PathBuf {
    c.data_dir.clone().unwrap_or_else(default_data_dir)
}

fn hcp_cache(c: &Common) -> ClassPolyCache {
    match &c.cache_dir {
        Some(d) => ClassPolyCache::with_dir(d),
        None => ClassPolyCache::in_memory(),
    }
}

fn candidate_set(c: &Common, max_h3: Option<u32>) -> Result<CandidateSet, Failure> {
    let tables = DataTables::load(&data_dir(c))?;
    let scan = ClassNumberTable::scan(DEFAULT_SCAN_CAP);
    let cutoffs = CutoffTable::compute()?;
    let ctx = CaseContext {
        tables: &tables,
        cutoffs: &cutoffs,
        scan: &scan,
    };
    Ok(generate_candidates(&ctx, CasegenConfig { max_h3 })?)
}

fn schedule(e: &ElimArgs) -> Result<Schedule, Failure> {
    if e.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    Ok(Schedule::new(e.ladder.clone())?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    match cli.command {
        Command::Forms { disc: d } => {
            let mut s = String::new();
            for f in reduced_forms(disc(d)?) {
                s.push_str(&format!("{}\t{}\t{}\n", f.a, f.b, f.c));
            }
            emit(None, &s)
        }
        Command::Classnum { disc: d } => emit(None, &format!("{}\n", disc(d)?.class_number())),
        Command::Hcp { disc: d } => {
            let h = hcp_cache(common).get(disc(d)?)?;
            let s: String = h
                .coefficients_descending()
                .iter()
                .map(|c| format!("{c}\n"))
                .collect();
            emit(None, &s)
        }
        Command::Thresholds => {
            let t = CutoffTable::compute()?;
            match common.format {
                Format::Json => emit(None, &json(&t)?),
                Format::Tsv => {
                    let mut s = String::from("case\tm\tk\tcutoff\texpected\n");
                    for e in &t.entries {
                        s.push_str(&format!(
                            "{}\t{},{},{}\t{}\t{}\t{}\n",
                            e.case, e.m[0], e.m[1], e.m[2], e.k, e.cutoff, e.expected
                        ));
                    }
                    emit(None, &s)
                }
            }
        }
        Command::Casegen { out, max_h3 } => {
            let set = candidate_set(common, max_h3)?;
            let file = CandidateFile {
                schema_version: SCHEMA_VERSION,
                candidates: set.candidates.clone(),
            };
            if let Some(p) = &out {
                emit(Some(p), &json(&file)?)?;
            }
            let mut s = String::from("case\tgenerated\tkept\tover_approximated\n");
            for (case, n) in &set.per_case {
                s.push_str(&format!(
                    "{case}\t{}\t{}\t{}\n",
                    n.generated, n.kept, n.over_approximated
                ));
            }
            s.push_str(&format!(
                "total\t{}\treference\t{}\tsurplus\t{}\n",
                set.candidates.len(),
                set.reference_total,
                set.surplus
            ));
            if out.is_none() {
                emit(None, &json(&file)?)
            } else {
                emit(None, &s)
            }
        }
        Command::Eliminate {
            candidates,
            out,
            elim,
        } => {
            let sched = schedule(&elim)?;
            let text = fs::read_to_string(&candidates).map_err(|e| io_err(&candidates, e))?;
            let file: CandidateFile = serde_json::from_str(&text)
                .map_err(|e| Failure::Data(format!("{}: {e}", candidates.display())))?;
            let list: Vec<CandidateTriple> = file
                .candidates
                .into_iter()
                .filter(|c| elim.max_h3.is_none_or(|m| c.h3 <= m))
                .collect();
            let mut eliminator = Eliminator::new(sched, hcp_cache(common));
            eliminator.plan(&list);
            let verdicts = eliminator.eliminate_all(&list, elim.jobs)?;
            let body = json(&VerdictFile {
                schema_version: SCHEMA_VERSION,
                verdicts: &verdicts,
            })?;
            match &out {
                Some(p) => {
                    emit(Some(p), &body)?;
                    emit(None, &json(&summarize(&verdicts))?)?;
                }
                None => emit(None, &body)?,
            }
            let bad = verdicts
                .iter()
                .filter(|v| v.status != Status::Eliminated)
                .count();
            if bad > 0 {
                return Err(Failure::Undecided(format!(
                    "{bad} candidates not eliminated"
                )));
            }
            Ok(())
        }
        Command::Catalog { out } => {
            let c = product_catalog()?;
            emit(out.as_deref(), &c.to_tsv())?;
            if out.is_some() {
                emit(None, &json(&c.stats())?)?;
            }
            Ok(())
        }
        Command::Tables { action } => match action {
            TablesAction::Validate => {
                DataTables::load(&data_dir(common))?;
                emit(None, "ok\n")
            }
            TablesAction::Regen { out } => {
                let dir = out.unwrap_or_else(|| data_dir(common));
                let tables = DataTables::generate(&ClassNumberTable::scan(DEFAULT_SCAN_CAP));
                tables.write(&dir)?;
                let mut s = String::new();
                for (name, body) in [
                    (moduli::tables::TABLE_2_1_FILE, tables.render_table_2_1()),
                    (moduli::tables::TABLE_4_1_FILE, tables.render_table_4_1()),
                    (moduli::tables::H_MAXIMA_FILE, tables.render_h_maxima()),
                ] {
                    s.push_str(&format!("{}\t{name}\n", sha256_hex(body.as_bytes())));
                }
                emit(None, &s)
            }
        },
        Command::Run { out, elim } => {
            let mut config = RunConfig::new(data_dir(common));
            config.cache_dir = common.cache_dir.clone();
            config.schedule = schedule(&elim)?;
            config.jobs = elim.jobs;
            config.max_h3 = elim.max_h3;
            let report = run_full_proof(&config)?;
            let body = match common.format {
                Format::Json => json(&report)?,
                Format::Tsv => {
                    let mut s = String::from("case\tcandidates\teliminated\tundecided\tfound\tpairs\tmax_bits\tseconds\n");
                    for (case, v) in &report.proof.verdicts {
                        s.push_str(&format!(
                            "{case}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\n",
                            v.candidates,
                            v.eliminated,
                            v.undecided,
                            v.rational_product_found,
                            v.pairs_checked,
                            v.max_precision_bits,
                            report
                                .telemetry
                                .case_seconds
                                .get(case)
                                .copied()
                                .unwrap_or(0.0)
                        ));
                    }
                    s
                }
            };
            emit(out.as_deref(), &body)?;
            if !report.proof.success {
                let first = &report.proof.offending[0];
                return Err(Failure::Undecided(format!(
                    "{} candidates not eliminated, first {} ({}, {}, {})",
                    report.proof.offending.len(),
                    first.case,
                    first.d1,
                    first.d2,
                    first.d3
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Undecided(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_UNDECIDED)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
