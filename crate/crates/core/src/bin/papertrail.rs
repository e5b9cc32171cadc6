use std::fmt::Display;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use papertrail::compositional::PeriodWindows;
use papertrail::config::Config;
use papertrail::corpus::{read_corpus_file, write_corpus_file};
use papertrail::funding::{aggregate_funding, new_grantees, read_grants_csv, FundingSummary, NewGranteeSummary, RatesTable};
use papertrail::hclust::Linkage;
use papertrail::model::PublicationRecord;
use papertrail::network::network_report;
use papertrail::report::{self, ReportTable};
use papertrail::resolve::{apply_careers, propose_merges, read_careers_csv, resolve, MergeMap, ResearcherProfile};
use papertrail::screening::{screen, ScreeningReport};
use papertrail::synth::{generate_corpus, write_synth_dir, SynthSpec};
use papertrail::temporal::{run_pipeline, ClusterSolution};
use papertrail::trust::{analyze_trust, Registry, TrustAnalysis};

#[derive(Parser)]
#[command(name = "papertrail", version, about = "Forensic scientometrics for suspected authorship-for-sale networks")]
struct Cli {
    /// Defaults for windows, linkage, seed and thresholds.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Run the data-parallel stages on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the inclusion rules to a raw export.
    Screen(ScreenArgs),
    /// Merge author mentions into researcher profiles.
    Resolve(ResolveArgs),
    /// Verify funders against a registry and flag identifier gaps.
    Trust(TrustArgs),
    /// Cluster researchers by their before/during/after publication mix.
    Cluster(ClusterArgs),
    /// Co-authorship graph, citation statistics and author-count flags.
    Network(NetworkArgs),
    /// Grant exposure of network researchers.
    Funding(FundingArgs),
    /// Render tables and charts from the outputs of the other stages.
    Report(ReportArgs),
    /// Generate a synthetic corpus with planted ground truth.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ScreenArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    phrase: Option<String>,
    #[arg(long)]
    max_authors: Option<usize>,
    /// Included records, CSV or JSONL by extension.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ResolveArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Curated merge map (source_id, profile_key, canonical_name).
    #[arg(long)]
    merges: Option<PathBuf>,
    /// Full career counts per profile and year.
    #[arg(long)]
    careers: Option<PathBuf>,
    /// Write heuristic merge proposals here for curation.
    #[arg(long)]
    propose: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrustArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    registry: PathBuf,
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    profiles: PathBuf,
    /// Before, during and after windows, e.g. 2015-2018,2019-2022,2023-2025.
    #[arg(long)]
    windows: Option<PeriodWindows>,
    #[arg(long)]
    linkage: Option<Linkage>,
    #[arg(long)]
    kmin: Option<usize>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    gap_iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NetworkArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    profiles: PathBuf,
    /// Corpus checked for oversized author lists; defaults to --corpus.
    #[arg(long)]
    flag_corpus: Option<PathBuf>,
    #[arg(long)]
    flag_authors_above: Option<usize>,
    /// Typical authors per paper in the field, for comparison.
    #[arg(long)]
    field_norm: Option<f64>,
    /// Edge list export (profile_a, profile_b, weight).
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FundingArgs {
    #[arg(long)]
    grants: PathBuf,
    #[arg(long)]
    rates: PathBuf,
    #[arg(long)]
    profiles: PathBuf,
    #[arg(long)]
    windows: Option<PeriodWindows>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Included corpus, for the publisher rollup and per-year counts.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    screening: Option<PathBuf>,
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    trust: Option<PathBuf>,
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    funding: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Generator spec; the built-in case-study spec when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct FundingOutput {
    summary: FundingSummary,
    new_grantees: NewGranteeSummary,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn data_err(path: &Path, e: impl Display) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| data_err(path, e))
}

fn create(path: &Path) -> Result<File, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| data_err(dir, e))?;
    }
    File::create(path).map_err(|e| data_err(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_reader(open(path)?).map_err(|e| data_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    create(path)?;
    std::fs::write(path, text).map_err(|e| data_err(path, e))
}

fn read_corpus(path: &Path) -> Result<Vec<PublicationRecord>, Failure> {
    let parsed = read_corpus_file(path).map_err(|e| data_err(path, e))?;
    if parsed.malformed_rows() > 0 {
        log::warn!("{}: skipped {} malformed rows", path.display(), parsed.malformed_rows());
    }
    Ok(parsed.records)
}

fn read_profiles(path: &Path) -> Result<Vec<ResearcherProfile>, Failure> {
    read_json(path)
}

fn cmd_screen(cfg: &Config, a: ScreenArgs) -> Outcome {
    let mut criteria = cfg.screening_criteria();
    if let Some(p) = a.phrase {
        criteria.phrase = p;
    }
    if let Some(m) = a.max_authors {
        criteria.max_authors = m;
    }
    criteria.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let records = read_corpus(&a.corpus)?;
    let (included, report) = screen(&records, &criteria);
    create(&a.out)?;
    write_corpus_file(&a.out, &included).map_err(|e| data_err(&a.out, e))?;
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    eprintln!(
        "screened {}: {} included, {} excluded",
        report.input_count,
        report.included_count,
        report.excluded_count()
    );
    Ok(())
}

fn cmd_resolve(a: ResolveArgs) -> Outcome {
    let records = read_corpus(&a.corpus)?;
    if let Some(path) = &a.propose {
        let mentions: Vec<_> = records.iter().flat_map(|r| r.authors.iter().cloned()).collect();
        propose_merges(&mentions).write_csv(create(path)?)?;
    }
    let merges = match &a.merges {
        Some(path) => MergeMap::read_csv(open(path)?).map_err(|e| data_err(path, e))?,
        None => MergeMap::empty(),
    };
    let mut profiles = resolve(&records, &merges)?;
    if let Some(path) = &a.careers {
        let careers = read_careers_csv(open(path)?).map_err(|e| data_err(path, e))?;
        let unknown = apply_careers(&mut profiles, &careers);
        if !unknown.is_empty() {
            log::warn!("{} career rows name unknown profiles", unknown.len());
        }
    }
    write_json(&a.out, &profiles)?;
    eprintln!("resolved {} profiles", profiles.len());
    Ok(())
}

fn cmd_trust(cfg: &Config, a: TrustArgs) -> Outcome {
    let records = read_corpus(&a.corpus)?;
    let registry = Registry::read_csv(open(&a.registry)?).map_err(|e| data_err(&a.registry, e))?;
    let profiles = match &a.profiles {
        Some(p) => read_profiles(p)?,
        None => resolve(&records, &MergeMap::empty())?,
    };
    let analysis = analyze_trust(&records, &profiles, &registry, &cfg.extractor(), cfg.execution());
    write_json(&a.out, &analysis)?;
    eprintln!(
        "{} publications, {} high severity",
        analysis.summary.publication_count, analysis.summary.high_severity_publication_count
    );
    Ok(())
}

fn cmd_cluster(cfg: &Config, a: ClusterArgs) -> Outcome {
    let mut pc = cfg.pipeline();
    if let Some(w) = a.windows {
        pc.windows = w;
    }
    if let Some(l) = a.linkage {
        pc.linkage = l;
    }
    if let Some(k) = a.kmin {
        pc.k_min = k;
    }
    if let Some(k) = a.kmax {
        pc.k_max = k;
    }
    if let Some(b) = a.gap_iters {
        pc.gap_iterations = b;
    }
    if let Some(s) = a.seed {
        pc.seed = s;
    }
    if pc.k_min < 2 || pc.k_max < pc.k_min {
        return Err(Failure::Usage(format!("need 2 <= kmin <= kmax, got {}..{}", pc.k_min, pc.k_max)));
    }
    let profiles = read_profiles(&a.profiles)?;
    let solution = run_pipeline(&profiles, &pc)?;
    create(&a.out)?;
    std::fs::write(&a.out, solution.to_json()? + "\n").map_err(|e| data_err(&a.out, e))?;
    eprintln!(
        "k = {} (gap criterion: {}), {} profiles clustered, {} excluded",
        solution.k,
        solution.gap_k.map_or("none".to_string(), |k| k.to_string()),
        solution.assignments.len(),
        solution.excluded.len()
    );
    Ok(())
}

fn cmd_network(cfg: &Config, a: NetworkArgs) -> Outcome {
    let records = read_corpus(&a.corpus)?;
    let flag_records = match &a.flag_corpus {
        Some(p) => read_corpus(p)?,
        None => records.clone(),
    };
    let profiles = read_profiles(&a.profiles)?;
    let threshold = a.flag_authors_above.unwrap_or(cfg.network.flag_authors_above);
    if threshold == 0 {
        return Err(Failure::Usage("--flag-authors-above must be at least 1".into()));
    }
    let field_norm = a.field_norm.or(cfg.network.field_norm);
    let (report, graph) = network_report(&records, &flag_records, &profiles, threshold, field_norm, cfg.execution())?;
    if let Some(path) = &a.edges {
        graph.write_edges_csv(create(path)?)?;
    }
    write_json(&a.out, &report)?;
    eprintln!("{} authors, {} co-authorship links", report.node_count, report.edge_count);
    Ok(())
}

fn cmd_funding(cfg: &Config, a: FundingArgs) -> Outcome {
    let windows = a.windows.unwrap_or(cfg.windows);
    let grants = read_grants_csv(open(&a.grants)?).map_err(|e| data_err(&a.grants, e))?;
    let rates = RatesTable::read_csv(open(&a.rates)?).map_err(|e| data_err(&a.rates, e))?;
    let profiles = read_profiles(&a.profiles)?;
    let summary = aggregate_funding(&grants, &profiles, &rates, &windows)?;
    let new_grantees = new_grantees(&summary);
    eprintln!(
        "{} funded researchers, {} new grantees",
        summary.funded_researcher_count,
        new_grantees.researchers.len()
    );
    write_json(&a.out, &FundingOutput { summary, new_grantees })
}

fn cmd_report(a: ReportArgs) -> Outcome {
    let mut tables: Vec<ReportTable> = Vec::new();
    if let Some(p) = &a.screening {
        tables.push(report::screening_table(&read_json::<ScreeningReport>(p)?));
    }
    if let Some(p) = &a.corpus {
        let records = read_corpus(p)?;
        tables.push(report::publisher_rollup(&records));
        tables.push(report::per_year_table(&records));
    }
    if let Some(p) = &a.profiles {
        tables.push(report::country_counts(&read_profiles(p)?));
    }
    if let Some(p) = &a.trust {
        tables.push(report::trust_table(&read_json::<TrustAnalysis>(p)?.summary));
    }
    if let Some(p) = &a.solution {
        let text = std::fs::read_to_string(p).map_err(|e| data_err(p, e))?;
        let solution = ClusterSolution::from_json(&text).map_err(|e| data_err(p, e))?;
        tables.push(report::cluster_report(&solution));
    }
    if let Some(p) = &a.network {
        tables.push(report::network_table(&read_json(p)?));
    }
    if let Some(p) = &a.funding {
        let f: FundingOutput = read_json(p)?;
        tables.push(report::funding_table(&f.summary));
        tables.push(report::new_grantee_table(&f.new_grantees, &f.summary));
    }
    if tables.is_empty() {
        return Err(Failure::Usage("report needs at least one stage output".into()));
    }
    report::write_report_dir(&a.out, &tables).map_err(|e| data_err(&a.out, e))?;
    eprintln!("wrote {} tables to {}", tables.len(), a.out.display());
    Ok(())
}

fn cmd_synth(cfg: &Config, a: SynthArgs) -> Outcome {
    let mut spec = match &a.spec {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| data_err(p, e))?;
            SynthSpec::from_toml(&text).map_err(|e| data_err(p, e))?
        }
        None => SynthSpec {
            seed: cfg.seed,
            ..SynthSpec::case_study()
        },
    };
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    let out = generate_corpus(&spec)?;
    write_synth_dir(&a.out, &spec, &out).map_err(|e| data_err(&a.out, e))?;
    eprintln!("wrote {} records to {}", out.records.len(), a.out.display());
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| Failure::Usage(e.to_string()))?,
        None => Config::default(),
    };
    if cli.sequential {
        cfg.parallel = false;
    }
    match cli.command {
        Command::Screen(a) => cmd_screen(&cfg, a),
        Command::Resolve(a) => cmd_resolve(a),
        Command::Trust(a) => cmd_trust(&cfg, a),
        Command::Cluster(a) => cmd_cluster(&cfg, a),
        Command::Network(a) => cmd_network(&cfg, a),
        Command::Funding(a) => cmd_funding(&cfg, a),
        Command::Report(a) => cmd_report(a),
        Command::Synth(a) => cmd_synth(&cfg, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("papertrail: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("papertrail: {m}");
            ExitCode::from(1)
        }
    }
}
