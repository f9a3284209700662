use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use refsum::config::PipelineConfig;
use refsum::io::{read_json, read_jsonl, write_json, write_jsonl, RawDocument, RawTweet};
use refsum::pipeline::{
    build_clusters, cluster_problem, evaluate_summary, prepare, read_clusters, run_pipeline,
    summarize_cluster, training_samples,
};
use refsum::records::{SolutionRecord, SummaryRecord};
use refsum_core::corpus::ClusterData;
use refsum_core::oracle::{
    brute_force, solve_auxiliary_encoding, solve_exact, solve_greedy, Lambda, Metric,
    OracleSolution,
};
use refsum_core::rouge::rouge_n_multi;
use refsum_core::summarizer::{self, RegressionModel};
use refsum_core::textproc::{ngram_counts, tokenize, NGramCounts};

/// Exact ROUGE upper-bound reference summaries for news clusters with
/// linked tweets.
///
/// Exit status: 0 on success, 1 on input or configuration errors, 2 when a
/// solver limit stopped a search before optimality was proven.
#[derive(Parser)]
#[command(name = "refsum", version)]
struct Cli {
    /// Pipeline config (TOML). Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean raw documents and tweets into DIR/documents.jsonl and DIR/tweets.jsonl.
    Prep {
        #[arg(long)]
        documents: PathBuf,
        #[arg(long)]
        tweets: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster cleaned records from DIR into DIR/clusters.jsonl.
    Cluster {
        #[arg(long)]
        dir: PathBuf,
        /// TF cosine threshold, decimal or a/b.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Solve the oracle program for each cluster of a clusters file and
    /// print one JSON solution per line.
    Oracle {
        #[arg(long)]
        clusters: PathBuf,
        /// Only this cluster key.
        #[arg(long)]
        key: Option<String>,
        /// Weight of ROUGE-1 in the objective, decimal or a/b.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Solver::Exact)]
        solver: Solver,
        /// Seconds, 0 for no limit.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print ROUGE-1 and ROUGE-2 recall of a candidate text against reference texts.
    Rouge {
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        reference: Vec<PathBuf>,
    },
    /// Train the regression summarizer on clusters and their reference
    /// summaries (the output of `oracle`).
    Train {
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        references: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize every cluster with a trained model.
    Summarize {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score summaries against linked tweets and reference summaries.
    Eval {
        #[arg(long)]
        summaries: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        references: PathBuf,
    },
    /// Run every stage from the config and write the report.
    Report {
        /// Reuse artifacts vouched for by an existing manifest.
        #[arg(long)]
        resume: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Exact,
    Greedy1,
    Greedy2,
    Aux,
    Brute,
}

impl Solver {
    fn name(self) -> &'static str {
        match self {
            Solver::Exact => "exact",
            Solver::Greedy1 => "greedy1",
            Solver::Greedy2 => "greedy2",
            Solver::Aux => "aux",
            Solver::Brute => "brute",
        }
    }
}

enum Outcome {
    Done,
    NotOptimal,
}

fn emit<T: serde::Serialize>(out: Option<&Path>, items: &[T]) -> anyhow::Result<()> {
    match out {
        Some(path) => write_jsonl(path, items)?,
        None => {
            for item in items {
                println!("{}", serde_json::to_string(item)?);
            }
        }
    }
    Ok(())
}

fn clusters_with_key(path: &Path, key: Option<&str>) -> anyhow::Result<Vec<ClusterData>> {
    let clusters = read_clusters(path)?;
    match key {
        None => Ok(clusters),
        Some(k) => {
            let found: Vec<_> = clusters.into_iter().filter(|c| c.key == k).collect();
            if found.is_empty() {
                bail!("no cluster with key {k:?} in {}", path.display());
            }
            Ok(found)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    match cli.command {
        Command::Prep {
            documents,
            tweets,
            out,
        } => {
            let docs: Vec<RawDocument> = read_jsonl(&documents)?;
            let raw: Vec<RawTweet> = read_jsonl(&tweets)?;
            let (docs, tweets) = prepare(docs, raw, &cfg.tokenizer()?)?;
            write_jsonl(&out.join("documents.jsonl"), &docs)?;
            write_jsonl(&out.join("tweets.jsonl"), &tweets)?;
            eprintln!("{} documents, {} tweets", docs.len(), tweets.len());
        }
        Command::Cluster { dir, threshold } => {
            let mut cfg = cfg;
            if let Some(t) = threshold {
                cfg.cluster.threshold = t;
            }
            let docs = read_jsonl(&dir.join("documents.jsonl"))?;
            let tweets = read_jsonl(&dir.join("tweets.jsonl"))?;
            let clusters = build_clusters(&docs, &tweets, &cfg.cluster_config()?);
            write_jsonl(&dir.join("clusters.jsonl"), &clusters)?;
            eprintln!("{} clusters", clusters.len());
        }
        Command::Oracle {
            clusters,
            key,
            lambda,
            budget,
            solver,
            time_limit,
            out,
        } => {
            let lambda = match lambda {
                Some(l) => Lambda::parse(&l)?,
                None => cfg.lambda()?,
            };
            let budget = budget.unwrap_or(cfg.oracle.budget);
            let mut solver_cfg = cfg.solver_config();
            if let Some(t) = time_limit {
                solver_cfg.time_limit = t;
            }
            let mut records = Vec::new();
            let mut all_optimal = true;
            for c in clusters_with_key(&clusters, key.as_deref())? {
                let problem = cluster_problem(&c, lambda, budget)?;
                let solution: OracleSolution = match solver {
                    Solver::Exact => solve_exact(&problem, &solver_cfg)?,
                    Solver::Greedy1 => solve_greedy(&problem, Metric::Rouge1)?,
                    Solver::Greedy2 => solve_greedy(&problem, Metric::Rouge2)?,
                    Solver::Aux => solve_auxiliary_encoding(&problem, &solver_cfg)?,
                    Solver::Brute => brute_force(&problem)?,
                };
                if matches!(solver, Solver::Exact | Solver::Aux) && !solution.optimal {
                    all_optimal = false;
                }
                records.push(SolutionRecord::new(
                    &c.key,
                    solver.name(),
                    &problem,
                    &solution,
                ));
            }
            emit(out.as_deref(), &records)?;
            if !all_optimal {
                return Ok(Outcome::NotOptimal);
            }
        }
        Command::Rouge {
            candidate,
            reference,
        } => {
            let tok = cfg.tokenizer()?;
            let read =
                |p: &Path| std::fs::read_to_string(p).with_context(|| p.display().to_string());
            let cand = tokenize(&read(&candidate)?, &tok);
            let refs = reference
                .iter()
                .map(|p| Ok(tokenize(&read(p)?, &tok)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            for order in [1, 2] {
                let r: Vec<NGramCounts> = refs.iter().map(|t| ngram_counts(t, order)).collect();
                let score = rouge_n_multi(&ngram_counts(&cand, order), &r)?;
                println!("ROUGE-{order}: {}", score.percent());
            }
        }
        Command::Train {
            clusters,
            references,
            out,
        } => {
            let clusters = read_clusters(&clusters)?;
            let refs: Vec<SolutionRecord> = read_jsonl(&references)?;
            let samples = training_samples(&clusters, &refs, &cfg.stopwords()?)?;
            let model = summarizer::train(&samples, &cfg.train_config())?;
            write_json(&out, &model)?;
            eprintln!("trained on {} sentences", samples.len());
        }
        Command::Summarize {
            model,
            clusters,
            budget,
            out,
        } => {
            let model: RegressionModel = read_json(&model)?;
            let stop = cfg.stopwords()?;
            let budget = budget.unwrap_or(cfg.summarize.budget);
            let summaries: Vec<SummaryRecord> = read_clusters(&clusters)?
                .iter()
                .map(|c| summarize_cluster(&model, c, &stop, budget))
                .collect();
            emit(out.as_deref(), &summaries)?;
        }
        Command::Eval {
            summaries,
            clusters,
            references,
        } => {
            let summaries: Vec<SummaryRecord> = read_jsonl(&summaries)?;
            let clusters = read_clusters(&clusters)?;
            let refs: Vec<SolutionRecord> = read_jsonl(&references)?;
            let mut evals = Vec::new();
            for s in &summaries {
                let c = clusters
                    .iter()
                    .find(|c| c.key == s.key)
                    .with_context(|| format!("no cluster {}", s.key))?;
                let r = refs
                    .iter()
                    .find(|r| r.key == s.key)
                    .with_context(|| format!("no reference {}", s.key))?;
                evals.push(evaluate_summary(s, c, r)?);
            }
            emit(None, &evals)?;
        }
        Command::Report { resume } => {
            let report = run_pipeline(&cfg, resume)?;
            print!("{}", report.report);
            eprintln!("wrote {}", report.out_dir.display());
            if report.non_optimal > 0 {
                return Ok(Outcome::NotOptimal);
            }
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotOptimal) => {
            eprintln!("error: a solver limit was reached before optimality was proven");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
