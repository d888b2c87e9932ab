//! End-to-end proof run: thresholds, candidates, elimination, catalog.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::bounds::CutoffTable;
use crate::casegen::{generate_candidates, CaseContext, CaseCount, CaseLabel, CasegenConfig};
use crate::catalog::{product_catalog, CatalogStats};
use crate::classpoly::ClassPolyCache;
use crate::eliminate::{Eliminator, Schedule, Status, Verdict};
use crate::error::{Error, Result};
use crate::quadforms::ClassNumberTable;
use crate::tables::{DataTables, DEFAULT_SCAN_CAP};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Directory for cached class polynomials; `None` keeps them in memory.
    pub cache_dir: Option<PathBuf>,
    pub data_dir: PathBuf,
    pub schedule: Schedule,
    pub jobs: usize,
    pub max_h3: Option<u32>,
}

impl RunConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> RunConfig {
        RunConfig {
            cache_dir: None,
            data_dir: data_dir.into(),
            schedule: Schedule::default(),
            jobs: 1,
            max_h3: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::InvalidArgument("jobs must be at least 1".into()));
        }
        Schedule::new(self.schedule.rungs.clone()).map(|_| ())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CaseSummary {
    pub candidates: usize,
    pub eliminated: usize,
    pub undecided: usize,
    pub rational_product_found: usize,
    pub pairs_checked: u64,
    pub exact_checks: u64,
    pub max_precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogSummary {
    pub stats: CatalogStats,
    pub sha256: String,
}

/// Deterministic part of the report.
#[derive(Clone, Debug, Serialize)]
pub struct ProofContent {
    pub success: bool,
    pub max_h3: Option<u32>,
    pub ladder: Vec<u32>,
    pub cutoffs: CutoffTable,
    pub candidate_counts: BTreeMap<CaseLabel, CaseCount>,
    pub candidates: usize,
    pub reference_total: usize,
    pub surplus: i64,
    pub verdicts: BTreeMap<CaseLabel, CaseSummary>,
    /// Every verdict other than `Eliminated`.
    pub offending: Vec<Verdict>,
    pub catalog: CatalogSummary,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Telemetry {
    pub jobs: usize,
    pub total_seconds: f64,
    pub stage_seconds: BTreeMap<String, f64>,
    pub case_seconds: BTreeMap<CaseLabel, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofReport {
    pub schema_version: u32,
    pub proof: ProofContent,
    pub telemetry: Telemetry,
}

impl ProofReport {
    pub fn undecided(&self) -> usize {
        self.proof.verdicts.values().map(|s| s.undecided).sum()
    }
}

pub fn summarize(verdicts: &[Verdict]) -> BTreeMap<CaseLabel, CaseSummary> {
    let mut out: BTreeMap<CaseLabel, CaseSummary> = BTreeMap::new();
    for v in verdicts {
        let s = out.entry(v.case).or_default();
        s.candidates += 1;
        match v.status {
            Status::Eliminated => s.eliminated += 1,
            Status::Undecided => s.undecided += 1,
            Status::RationalProductFound => s.rational_product_found += 1,
        }
        s.pairs_checked += v.pairs_checked;
        s.exact_checks += v.exact_checks;
        s.max_precision_bits = s.max_precision_bits.max(v.max_precision_bits);
    }
    out
}

pub fn run_full_proof(config: &RunConfig) -> Result<ProofReport> {
    config.validate()?;
    let start = Instant::now();
    let mut telemetry = Telemetry {
        jobs: config.jobs,
        ..Telemetry::default()
    };
    let stage = |name: &str, t: Instant, tel: &mut Telemetry| {
        tel.stage_seconds
            .insert(name.to_string(), t.elapsed().as_secs_f64());
    };

    let t = Instant::now();
    let tables = DataTables::load(&config.data_dir)?;
    let scan = ClassNumberTable::scan(DEFAULT_SCAN_CAP);
    stage("data", t, &mut telemetry);

    let t = Instant::now();
    let cutoffs = CutoffTable::compute()?;
    stage("thresholds", t, &mut telemetry);

    let t = Instant::now();
    let ctx = CaseContext {
        tables: &tables,
        cutoffs: &cutoffs,
        scan: &scan,
    };
    let set = generate_candidates(
        &ctx,
        CasegenConfig {
            max_h3: config.max_h3,
        },
    )?;
    stage("casegen", t, &mut telemetry);
    log::info!("{} candidates", set.candidates.len());

    let t = Instant::now();
    let hcp = match &config.cache_dir {
        Some(dir) => ClassPolyCache::with_dir(dir),
        None => ClassPolyCache::in_memory(),
    };
    let mut eliminator = Eliminator::new(config.schedule.clone(), hcp);
    eliminator.plan(&set.candidates);
    let mut verdicts = Vec::with_capacity(set.candidates.len());
    for case in CaseLabel::ALL {
        let group: Vec<_> = set
            .candidates
            .iter()
            .filter(|c| c.case == case)
            .cloned()
            .collect();
        if group.is_empty() {
            continue;
        }
        let tc = Instant::now();
        verdicts.extend(eliminator.eliminate_all(&group, config.jobs)?);
        telemetry
            .case_seconds
            .insert(case, tc.elapsed().as_secs_f64());
        log::info!("{case}: {} candidates done", group.len());
    }
    stage("eliminate", t, &mut telemetry);

    let t = Instant::now();
    let catalog = product_catalog()?;
    stage("catalog", t, &mut telemetry);

    let offending: Vec<Verdict> = verdicts
        .iter()
        .filter(|v| v.status != Status::Eliminated)
        .cloned()
        .collect();
    telemetry.total_seconds = start.elapsed().as_secs_f64();
    Ok(ProofReport {
        schema_version: SCHEMA_VERSION,
        proof: ProofContent {
            success: offending.is_empty(),
            max_h3: config.max_h3,
            ladder: config.schedule.rungs.clone(),
            cutoffs,
            candidate_counts: set.per_case,
            candidates: set.candidates.len(),
            reference_total: set.reference_total,
            surplus: set.surplus,
            verdicts: summarize(&verdicts),
            offending,
            catalog: CatalogSummary {
                stats: catalog.stats(),
                sha256: catalog.digest(),
            },
        },
        telemetry,
    })
}
