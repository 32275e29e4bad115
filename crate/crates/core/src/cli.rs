//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code.
//!
//! Exit codes: 0 success, 1 usage, configuration or parse error, 2 domain
//! outcome (power flow divergence, islanding, unreachable buses).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::black_start::{plan_black_start, BlackStartError, GAConfig, PlanDocument};
use crate::grid::{bundled, connected_components, parse_case, GridCase};
use crate::instruct::{
    build_dataset, estimate_tokens, parse_knowledge, read_jsonl, write_jsonl_to, DatasetConfig,
    InstructionRecord, PartStats, TaskKind, BUNDLED_KNOWLEDGE, TEMPLATE_VERSION, TOKEN_ESTIMATOR,
};
use crate::power_flow::{solve_nr, SolutionDocument};
use crate::scenario::{
    generate_adjustment, generate_batch, generate_black_start, generate_monitoring,
    generate_snapshot, ScenarioConfig, SkippedScenario,
};

/// Value of `--knowledge` that selects the knowledge file shipped with the crate.
pub const BUNDLED_KNOWLEDGE_NAME: &str = "bundled";

#[derive(Debug, Parser)]
#[command(
    name = "dispatchgen",
    version,
    about = "Power-dispatch scenario simulation and instruction-dataset generation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Shared {
    /// Case file path or bundled case name (case14, case30, case57, case118); repeat or comma-separate for several.
    #[arg(long, value_delimiter = ',')]
    case: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scenario count for gen-scenarios, record count for gen-dataset.
    #[arg(long)]
    samples: Option<usize>,
    /// Output file, or output directory for gen-dataset.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Multiply every bus demand before use.
    #[arg(long)]
    scale_loads: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioKind {
    Adjustment,
    Monitoring,
    BlackStart,
    Snapshot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the AC power flow of a case and print the solution document.
    SolvePf {
        #[command(flatten)]
        shared: Shared,
    },
    /// Generate simulation scenarios as JSONL.
    GenScenarios {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_enum, default_value = "monitoring")]
        kind: ScenarioKind,
    },
    /// Render, mix and write an instruction dataset with its manifest.
    GenDataset {
        #[command(flatten)]
        shared: Shared,
        /// Share of dispatch records in the output.
        #[arg(long)]
        fraction: Option<f64>,
        /// Knowledge JSONL path, or `bundled` for the shipped set.
        #[arg(long)]
        knowledge: Option<String>,
    },
    /// Plan a black start and print the merged restoration plan.
    PlanBlackstart {
        #[command(flatten)]
        shared: Shared,
    },
    /// Summarize a dataset JSONL file or, with --case, the cases.
    Stats {
        #[command(flatten)]
        shared: Shared,
        /// Dataset JSONL file.
        dataset: Option<PathBuf>,
    },
}

/// Contents of a `--config` file. Relative paths resolve against the
/// file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub cases: Vec<String>,
    pub scenario: ScenarioConfig,
    pub ga: GAConfig,
    pub template_version: Option<String>,
    pub output: Option<PathBuf>,
    pub dispatch_fraction: Option<f64>,
    pub knowledge: Option<String>,
    pub workers: Option<usize>,
    pub scale_loads: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Cross-field checks; embedded configs apply their own.
    pub fn check(&self) -> Result<(), String> {
        let mut p = Vec::new();
        if let Err(e) = self.scenario.check() {
            p.push(e.to_string());
        }
        if let Err(e) = self.ga.check() {
            p.push(e.to_string());
        }
        if let Some(v) = &self.template_version {
            if v != TEMPLATE_VERSION {
                p.push(format!("template_version {v:?} is not supported; this build renders {TEMPLATE_VERSION:?}"));
            }
        }
        if let Some(f) = self.dispatch_fraction {
            if !(0.0..=1.0).contains(&f) {
                p.push(format!("dispatch_fraction must lie in [0, 1], got {f}"));
            }
        }
        if self.workers == Some(0) {
            p.push("workers must be at least 1".into());
        }
        if let Some(s) = self.scale_loads {
            if !(s.is_finite() && s >= 0.0) {
                p.push(format!(
                    "scale_loads must be a finite non-negative factor, got {s}"
                ));
            }
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(p.join("; "))
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (program name first), runs the command and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

struct LoadedCase {
    argument: String,
    case: GridCase,
    text: String,
}

/// Resolved run settings after merging the config file with flags.
struct Settings {
    cfg: RunConfig,
    cases: Vec<LoadedCase>,
    config_hash: Option<(String, String)>,
    /// Directory of the config file, for its relative paths.
    config_dir: Option<PathBuf>,
    output_from_flag: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn resolve(base: Option<&Path>, path: &str) -> PathBuf {
    match base {
        Some(dir) if Path::new(path).is_relative() => dir.join(path),
        _ => PathBuf::from(path),
    }
}

fn load_case(
    argument: &str,
    base: Option<&Path>,
    scale: Option<f64>,
) -> Result<LoadedCase, Failure> {
    let path = resolve(base, argument);
    let text = if path.is_file() {
        fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    } else if let Some(t) = bundled::text(argument) {
        t.to_string()
    } else {
        return Err(usage(format!(
            "case {argument:?} is neither a readable file nor a bundled case ({})",
            bundled::NAMES.join(", ")
        )));
    };
    let mut case = parse_case(&text).map_err(|e| usage(format!("{argument}: {e}")))?;
    if let Some(s) = scale {
        case = case.with_load_scale(s);
    }
    Ok(LoadedCase {
        argument: argument.into(),
        case,
        text,
    })
}

fn settings(shared: &Shared, need_case: bool) -> Result<Settings, Failure> {
    let (mut cfg, config_hash, config_dir) = match &shared.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let cfg = RunConfig::from_toml(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let name = path
                .file_name()
                .map_or_else(|| "config".into(), |n| n.to_string_lossy().into_owned());
            (
                cfg,
                Some((name, sha256_hex(text.as_bytes()))),
                path.parent().map(Path::to_path_buf),
            )
        }
        None => (RunConfig::default(), None, None),
    };
    let cases_from_flags = !shared.case.is_empty();
    if cases_from_flags {
        cfg.cases = shared.case.clone();
    }
    if let Some(seed) = shared.seed {
        cfg.scenario.seed = seed;
        cfg.ga.seed = seed;
    }
    if let Some(n) = shared.samples {
        cfg.scenario.samples = n;
    }
    if shared.out.is_some() {
        cfg.output = shared.out.clone();
    }
    if shared.workers.is_some() {
        cfg.workers = shared.workers;
    }
    if shared.scale_loads.is_some() {
        cfg.scale_loads = shared.scale_loads;
    }
    if need_case && cfg.cases.is_empty() {
        return Err(usage(
            "no case given; pass --case or set `cases` in the config",
        ));
    }
    let case_base = if cases_from_flags {
        None
    } else {
        config_dir.as_deref()
    };
    let cases = cfg
        .cases
        .iter()
        .map(|c| load_case(c, case_base, cfg.scale_loads))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Settings {
        cfg,
        cases,
        config_hash,
        config_dir,
        output_from_flag: shared.out.is_some(),
    })
}

fn with_workers<R: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> Result<R, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| usage(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn output_path(s: &Settings) -> Option<PathBuf> {
    let base = if s.output_from_flag {
        None
    } else {
        s.config_dir.as_deref()
    };
    s.cfg.output.as_ref().map(|p| match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.clone(),
    })
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("stdout: {e}"))),
    }
}

fn single_case(s: &Settings) -> Result<&LoadedCase, Failure> {
    match s.cases.as_slice() {
        [one] => Ok(one),
        _ => Err(usage("this command takes exactly one case")),
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::SolvePf { shared } => solve_pf(&shared, out),
        Command::GenScenarios { shared, kind } => gen_scenarios(&shared, kind, out, err),
        Command::GenDataset {
            shared,
            fraction,
            knowledge,
        } => gen_dataset(&shared, fraction, knowledge, err),
        Command::PlanBlackstart { shared } => plan_blackstart(&shared, out, err),
        Command::Stats { shared, dataset } => stats(&shared, dataset, out),
    }
}

fn checked(shared: &Shared, need_case: bool) -> Result<Settings, Failure> {
    let s = settings(shared, need_case)?;
    s.cfg.check().map_err(usage)?;
    Ok(s)
}

fn solve_pf(shared: &Shared, out: &mut dyn Write) -> CmdResult {
    let s = checked(shared, true)?;
    let lc = single_case(&s)?;
    let result = solve_nr(&lc.case, &s.cfg.scenario.pf);
    emit(
        &SolutionDocument::new(&lc.case, &result).to_yaml(),
        output_path(&s).as_deref(),
        out,
    )?;
    match result {
        Ok(_) => Ok(0),
        Err(e) => Err(Failure::Domain(format!("{}: {e}", lc.case.name))),
    }
}

fn to_line<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("scenarios serialize")
}

fn scenario_lines(
    case: &GridCase,
    s: &Settings,
    kind: ScenarioKind,
) -> Vec<Result<String, SkippedScenario>> {
    let sc = &s.cfg.scenario;
    match kind {
        ScenarioKind::Adjustment => generate_batch(sc, |i| {
            generate_adjustment(case, sc, i).map(|x| to_line(&x))
        }),
        ScenarioKind::Monitoring => generate_batch(sc, |i| {
            generate_monitoring(case, sc, i).map(|x| to_line(&x))
        }),
        ScenarioKind::BlackStart => generate_batch(sc, |i| {
            generate_black_start(case, sc, &s.cfg.ga, i).map(|x| to_line(&x))
        }),
        ScenarioKind::Snapshot => {
            generate_batch(sc, |i| generate_snapshot(case, sc, i).map(|x| to_line(&x)))
        }
    }
}

fn gen_scenarios(
    shared: &Shared,
    kind: ScenarioKind,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let s = checked(shared, true)?;
    let lc = single_case(&s)?;
    let lines = with_workers(s.cfg.workers, || scenario_lines(&lc.case, &s, kind))?;
    let mut text = String::new();
    let mut skipped = 0usize;
    for line in lines {
        match line {
            Ok(l) => {
                text.push_str(&l);
                text.push('\n');
            }
            Err(sk) => {
                skipped += 1;
                let _ = writeln!(err, "skipped scenario {}: {}", sk.index, sk.reason);
            }
        }
    }
    emit(&text, output_path(&s).as_deref(), out)?;
    let _ = writeln!(
        err,
        "{}: {} scenarios, {} skipped",
        lc.case.name,
        s.cfg.scenario.samples - skipped,
        skipped
    );
    Ok(0)
}

/// Knowledge records and the name and text to hash.
fn load_knowledge(
    arg: &str,
    base: Option<&Path>,
) -> Result<(Vec<InstructionRecord>, String, String), Failure> {
    let (name, text) = if arg == BUNDLED_KNOWLEDGE_NAME {
        (
            "knowledge:bundled".to_string(),
            BUNDLED_KNOWLEDGE.to_string(),
        )
    } else {
        let path = resolve(base, arg);
        let text =
            fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        (format!("knowledge:{arg}"), text)
    };
    let records = parse_knowledge(text.as_bytes()).map_err(|e| usage(format!("{name}: {e}")))?;
    Ok((records, name, text))
}

fn remove_quietly(paths: &[&Path]) {
    for p in paths {
        let _ = fs::remove_file(p);
    }
}

fn gen_dataset(
    shared: &Shared,
    fraction: Option<f64>,
    knowledge: Option<String>,
    err: &mut dyn Write,
) -> CmdResult {
    let mut s = settings(shared, true)?;
    if fraction.is_some() {
        s.cfg.dispatch_fraction = fraction;
    }
    let knowledge_from_flag = knowledge.is_some();
    if knowledge_from_flag {
        s.cfg.knowledge = knowledge;
    }
    let total = s.cfg.scenario.samples;
    if total == 0 {
        return Err(usage("nothing to emit: samples is 0"));
    }
    s.cfg.check().map_err(usage)?;
    let dir = output_path(&s).ok_or_else(|| usage("gen-dataset needs --out <directory>"))?;

    let mut hashes = BTreeMap::new();
    for lc in &s.cases {
        hashes.insert(
            format!("case:{}", lc.argument),
            sha256_hex(lc.text.as_bytes()),
        );
    }
    if let Some((name, h)) = &s.config_hash {
        hashes.insert(format!("config:{name}"), h.clone());
    }
    let knowledge_base = if knowledge_from_flag {
        None
    } else {
        s.config_dir.as_deref()
    };
    let knowledge = match &s.cfg.knowledge {
        Some(arg) => {
            let (records, name, text) = load_knowledge(arg, knowledge_base)?;
            hashes.insert(name, sha256_hex(text.as_bytes()));
            records
        }
        None => Vec::new(),
    };
    let fraction = s
        .cfg
        .dispatch_fraction
        .unwrap_or(if knowledge.is_empty() { 1.0 } else { 0.85 });
    let cfg = DatasetConfig {
        scenario: s.cfg.scenario.clone(),
        ga: s.cfg.ga.clone(),
        dispatch_fraction: fraction,
    };
    let cases: Vec<GridCase> = s.cases.iter().map(|c| c.case.clone()).collect();

    let (records, mut manifest) = with_workers(s.cfg.workers, || {
        build_dataset(&cases, knowledge, &cfg, total)
    })?
    .map_err(|e| usage(e.to_string()))?;
    manifest.fixture_hashes = hashes;

    fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let data_path = dir.join("dataset.jsonl");
    let manifest_path = dir.join("manifest.yaml");
    let write = || -> std::io::Result<()> {
        let mut buf = Vec::new();
        write_jsonl_to(&records, &mut buf)?;
        fs::write(&data_path, buf)?;
        fs::write(&manifest_path, manifest.to_yaml())
    };
    if let Err(e) = write() {
        remove_quietly(&[&data_path, &manifest_path]);
        return Err(usage(format!("writing {}: {e}", dir.display())));
    }
    for sk in &manifest.skipped {
        let _ = writeln!(err, "skipped scenario {}: {}", sk.index, sk.reason);
    }
    let _ = writeln!(
        err,
        "wrote {} records ({} dispatch, {} knowledge) to {}",
        manifest.total,
        manifest.tokens.dispatch.records,
        manifest.tokens.knowledge.records,
        dir.display()
    );
    Ok(0)
}

fn plan_blackstart(shared: &Shared, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let s = checked(shared, true)?;
    let lc = single_case(&s)?;
    let plan = with_workers(s.cfg.workers, || plan_black_start(&lc.case, &s.cfg.ga))?.map_err(
        |e| match e {
            BlackStartError::NoGenerators => usage(format!(
                "{}: no online generator can start the restoration",
                lc.case.name
            )),
            other => usage(format!("{}: {other}", lc.case.name)),
        },
    )?;
    emit(
        &PlanDocument::new(&lc.case, &s.cfg.ga, &plan).to_yaml(),
        output_path(&s).as_deref(),
        out,
    )?;
    if plan.unreachable.is_empty() {
        Ok(0)
    } else {
        let ids: Vec<String> = plan.unreachable.iter().map(|b| b.0.to_string()).collect();
        let _ = writeln!(
            err,
            "buses unreachable from the cranking unit: {}",
            ids.join(", ")
        );
        Ok(2)
    }
}

#[derive(Debug, Serialize)]
struct CaseStats {
    case: String,
    buses: usize,
    branches: usize,
    in_service_branches: usize,
    generators: usize,
    online_generators: usize,
    total_p_demand_mw: f64,
    total_q_demand_mvar: f64,
    generation_capacity_mw: f64,
    islands: usize,
}

impl CaseStats {
    fn of(case: &GridCase) -> Self {
        let online = case.online_generators();
        CaseStats {
            case: case.name.clone(),
            buses: case.buses.len(),
            branches: case.branches.len(),
            in_service_branches: case.branches.iter().filter(|b| b.in_service()).count(),
            generators: case.generators.len(),
            online_generators: online.len(),
            total_p_demand_mw: case.total_p_demand(),
            total_q_demand_mvar: case.buses.iter().map(|b| b.q_demand).sum(),
            generation_capacity_mw: online.iter().map(|&g| case.generators[g].p_max).sum(),
            islands: connected_components(case, true).len(),
        }
    }
}

#[derive(Debug, Serialize)]
struct DatasetStats {
    records: usize,
    counts: BTreeMap<TaskKind, usize>,
    dispatch_fraction: f64,
    dispatch: PartStats,
    knowledge: PartStats,
    max_input_tokens: usize,
    max_output_tokens: usize,
    token_estimator: String,
}

impl DatasetStats {
    fn of(records: &[InstructionRecord]) -> Self {
        let mut counts = BTreeMap::new();
        for r in records {
            *counts.entry(r.meta.task).or_insert(0) += 1;
        }
        let dispatch = PartStats::of(records.iter().filter(|r| r.meta.task.is_dispatch()));
        let knowledge = PartStats::of(records.iter().filter(|r| !r.meta.task.is_dispatch()));
        DatasetStats {
            records: records.len(),
            counts,
            dispatch_fraction: if records.is_empty() {
                0.0
            } else {
                dispatch.records as f64 / records.len() as f64
            },
            dispatch,
            knowledge,
            max_input_tokens: records
                .iter()
                .map(InstructionRecord::input_tokens)
                .max()
                .unwrap_or(0),
            max_output_tokens: records
                .iter()
                .map(|r| estimate_tokens(&r.output))
                .max()
                .unwrap_or(0),
            token_estimator: TOKEN_ESTIMATOR.into(),
        }
    }
}

fn stats(shared: &Shared, dataset: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let s = checked(shared, false)?;
    let mut text = String::new();
    if let Some(path) = &dataset {
        let records = read_jsonl(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        text.push_str(
            &serde_yaml::to_string(&DatasetStats::of(&records)).expect("stats serialize"),
        );
    }
    for lc in &s.cases {
        if !text.is_empty() {
            text.push_str("---\n");
        }
        text.push_str(&serde_yaml::to_string(&CaseStats::of(&lc.case)).expect("stats serialize"));
    }
    if text.is_empty() {
        return Err(usage("stats needs a dataset file or --case"));
    }
    emit(&text, output_path(&s).as_deref(), out)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("dispatchgen").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn config_parses_nested_sections() {
        let cfg = RunConfig::from_toml(
            "cases = [\"case30\"]\ndispatch_fraction = 0.5\n[scenario]\nseed = 9\nload_range = [0.9, 1.1]\n\
             [scenario.pf]\nmax_iterations = 12\n[ga]\npopulation = 16\n",
        )
        .unwrap();
        assert_eq!(cfg.cases, vec!["case30"]);
        assert_eq!(cfg.scenario.seed, 9);
        assert_eq!(cfg.scenario.load_range, (0.9, 1.1));
        assert_eq!(cfg.scenario.pf.max_iterations, 12);
        assert_eq!(cfg.ga.population, 16);
        assert_eq!(cfg.ga.generations, GAConfig::default().generations);
        cfg.check().unwrap();
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(RunConfig::from_toml("sample = 3\n").is_err());
        let cfg = RunConfig::from_toml(
            "template_version = \"v0\"\n[scenario]\nload_range = [1.2, 0.8]\n",
        )
        .unwrap();
        let msg = cfg.check().unwrap_err();
        assert!(
            msg.contains("template_version") && msg.contains("load_range"),
            "{msg}"
        );
    }

    #[test]
    fn flags_override_the_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "cases = [\"case30\"]\n[scenario]\nseed = 4\nsamples = 8\n",
        )
        .unwrap();
        let shared = Shared {
            case: vec!["case14".into()],
            seed: Some(11),
            samples: None,
            out: None,
            config: Some(path),
            workers: None,
            scale_loads: Some(0.5),
        };
        let s = settings(&shared, true).unwrap();
        assert_eq!(s.cases[0].case.name, "case14");
        assert_eq!(
            (s.cfg.scenario.seed, s.cfg.ga.seed, s.cfg.scenario.samples),
            (11, 11, 8)
        );
        let full = bundled::case14().total_p_demand();
        assert!((s.cases[0].case.total_p_demand() - 0.5 * full).abs() < 1e-9);
    }

    #[test]
    fn help_exits_zero_and_bad_flags_exit_one() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("gen-dataset"));
        assert_eq!(run_args(&["solve-pf", "--seed", "x"]).0, 1);
        assert_eq!(run_args(&["solve-pf"]).0, 1);
    }

    #[test]
    fn stats_on_a_bundled_case() {
        let (code, out, _) = run_args(&["stats", "--case", "case30"]);
        assert_eq!(code, 0);
        assert!(
            out.contains("buses: 30") && out.contains("islands: 1"),
            "{out}"
        );
    }
}
