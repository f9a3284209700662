//! Stage functions and the end-to-end run.
//!
//! Artifacts written to the output directory:
//!
//! | file | content |
//! |---|---|
//! | `documents.jsonl`, `tweets.jsonl` | cleaned records |
//! | `clusters.jsonl` | one cluster with its documents and tweets per line |
//! | `references.jsonl` | reference summary per cluster |
//! | `comparison.jsonl` | UB-1, UB-2, UB-Comb, GA-1, GA-2 per cluster |
//! | `model.json` | trained regression model |
//! | `summaries.jsonl`, `eval.jsonl` | summarizer output and its scores |
//! | `report.md` | corpus statistics and result tables |
//! | `manifest.json` | config hash, input and output hashes, version |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use refsum_core::corpus::{
    candidate_sentences, categorize_tweet, cluster_documents, generate_reference,
    preprocess_tweets, reference_problem, ClusterConfig, ClusterData, DocumentRecord, TweetRecord,
    TweetType, TypeCounts,
};
use refsum_core::oracle::{
    combination_guard, solve_exact, solve_greedy, Lambda, Metric, OracleProblem, SolverConfig,
    MAX_BRUTE_FORCE_SENTENCES,
};
use refsum_core::rouge::{format_percent, rouge_n_single};
use refsum_core::summarizer::{
    self, extract_features, label_sentences, RegressionModel, TermTable,
};
use refsum_core::textproc::{NGramCounts, SentenceId, SentenceRecord, TokenizerConfig};
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::io::{
    hash_file, read_json, read_jsonl, write_file, write_json, write_jsonl, RawDocument, RawTweet,
};
use crate::records::{
    mean, ComparisonRecord, EvalRecord, ReferenceRecord, Score, SolutionRecord, SummaryRecord,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Cleans raw records. Fails on the first document without a body or on a
/// repeated document id.
pub fn prepare(
    documents: Vec<RawDocument>,
    tweets: Vec<RawTweet>,
    tokenizer: &TokenizerConfig,
) -> Result<(Vec<DocumentRecord>, Vec<TweetRecord>)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut docs = Vec::with_capacity(documents.len());
    for d in documents {
        if !seen.insert(d.id.clone()) {
            return Err(Error::Stage {
                stage: "prep",
                message: format!("duplicate document id {}", d.id),
            });
        }
        let id = d.id.clone();
        docs.push(
            d.into_record(tokenizer)
                .map_err(|e| Error::record("prep", id, e))?,
        );
    }
    let tweets = preprocess_tweets(
        tweets
            .into_iter()
            .map(|t| t.into_record(tokenizer))
            .collect(),
    );
    Ok((docs, tweets))
}

/// Clusters documents and gathers each cluster's records.
pub fn build_clusters(
    docs: &[DocumentRecord],
    tweets: &[TweetRecord],
    config: &ClusterConfig,
) -> Vec<ClusterData> {
    cluster_documents(docs, tweets, config)
        .iter()
        .map(|c| ClusterData::gather(c, docs, tweets))
        .collect()
}

pub fn tweet_types(cluster: &ClusterData) -> TypeCounts {
    let mut counts = TypeCounts::default();
    for t in &cluster.tweets {
        counts.add(categorize_tweet(t, &cluster.documents));
    }
    counts
}

pub fn reference_record(
    cluster: &ClusterData,
    lambda: Lambda,
    budget: usize,
    solver: &SolverConfig,
) -> refsum_core::Result<ReferenceRecord> {
    let problem = reference_problem(cluster, lambda, budget)?;
    let summary = generate_reference(cluster, lambda, budget, solver)?;
    Ok(ReferenceRecord {
        key: cluster.key.clone(),
        date: cluster.date,
        tweet_fraction: summary.tweet_fraction(),
        summary: SolutionRecord::new(&cluster.key, "exact", &problem, &summary.solution),
        tweet_types: tweet_types(cluster),
    })
}

pub fn comparison_record(
    cluster: &ClusterData,
    lambda: Lambda,
    budget: usize,
    solver: &SolverConfig,
) -> refsum_core::Result<ComparisonRecord> {
    let problem = reference_problem(cluster, lambda, budget)?;
    let exact = |l: Lambda, name: &str| -> refsum_core::Result<SolutionRecord> {
        let p = problem.clone().with_lambda(l);
        Ok(SolutionRecord::new(
            &cluster.key,
            name,
            &p,
            &solve_exact(&p, solver)?,
        ))
    };
    let greedy = |m: Metric, name: &str| -> refsum_core::Result<SolutionRecord> {
        Ok(SolutionRecord::new(
            &cluster.key,
            name,
            &problem,
            &solve_greedy(&problem, m)?,
        ))
    };
    let guard_holds = if problem.sentences().len() <= MAX_BRUTE_FORCE_SENTENCES {
        Some(combination_guard(&problem)?.holds)
    } else {
        None
    };
    Ok(ComparisonRecord {
        key: cluster.key.clone(),
        ub1: exact(Lambda::ROUGE1, "UB-1")?,
        ub2: exact(Lambda::ROUGE2, "UB-2")?,
        ub_comb: exact(lambda, "UB-Comb")?,
        ga1: greedy(Metric::Rouge1, "GA-1")?,
        ga2: greedy(Metric::Rouge2, "GA-2")?,
        guard_holds,
    })
}

fn summed_bigrams<'a>(
    sentences: impl IntoIterator<Item = &'a SentenceRecord>,
    order: usize,
) -> NGramCounts {
    let parts: Vec<NGramCounts> = sentences
        .into_iter()
        .map(|s| refsum_core::textproc::ngram_counts(&s.tokens, order))
        .collect();
    NGramCounts::sum(order, parts.iter()).unwrap_or_else(|_| NGramCounts::empty(order))
}

fn pick<'a>(pool: &'a [SentenceRecord], ids: &[SentenceId]) -> Vec<&'a SentenceRecord> {
    pool.iter().filter(|s| ids.contains(&s.id)).collect()
}

/// Labeled feature vectors of every candidate of every cluster that has a
/// reference summary with at least one bigram.
pub fn training_samples(
    clusters: &[ClusterData],
    references: &[SolutionRecord],
    stopwords: &std::collections::BTreeSet<String>,
) -> Result<Vec<(summarizer::FeatureVector, f64)>> {
    let by_key: BTreeMap<&str, &SolutionRecord> =
        references.iter().map(|r| (r.key.as_str(), r)).collect();
    let mut samples = Vec::new();
    for cluster in clusters {
        let Some(reference) = by_key.get(cluster.key.as_str()) else {
            continue;
        };
        let pool = candidate_sentences(cluster);
        let target = summed_bigrams(pick(&pool, &reference.selected), 2);
        if target.total() == 0 {
            log::warn!(
                "cluster {}: reference summary has no bigrams, not used for training",
                cluster.key
            );
            continue;
        }
        let table = TermTable::from_cluster(cluster);
        let labels = label_sentences(&pool, &[target])
            .map_err(|e| Error::record("train", cluster.key.clone(), e))?;
        for (s, (_, label)) in pool.iter().zip(labels) {
            let f = extract_features(s, &table, stopwords)
                .map_err(|e| Error::record("train", s.id.to_string(), e))?;
            samples.push((f, label_to_f64(&label)));
        }
    }
    Ok(samples)
}

fn label_to_f64(v: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(v).unwrap_or(0.0)
}

pub fn summarize_cluster(
    model: &RegressionModel,
    cluster: &ClusterData,
    stopwords: &std::collections::BTreeSet<String>,
    budget: usize,
) -> SummaryRecord {
    let pool = candidate_sentences(cluster);
    let table = TermTable::from_cluster(cluster);
    let selected = summarizer::summarize(model, &pool, &table, stopwords, budget);
    let chosen = pick(&pool, &selected);
    SummaryRecord {
        key: cluster.key.clone(),
        words: chosen.iter().map(|s| s.word_length).sum(),
        sentences: chosen
            .iter()
            .map(|s| refsum_core::corpus::SummarySentence {
                id: s.id,
                origin: s.origin,
                source: s.source.clone(),
                text: s.raw.clone(),
            })
            .collect(),
        selected,
    }
}

pub fn evaluate_summary(
    summary: &SummaryRecord,
    cluster: &ClusterData,
    reference: &SolutionRecord,
) -> refsum_core::Result<EvalRecord> {
    let problem = reference_problem(cluster, Lambda::default(), usize::MAX)?;
    let eval = problem.evaluate(&summary.selected)?;
    let pool = candidate_sentences(cluster);
    let against_reference = |order: usize| -> refsum_core::Result<Score> {
        let cand = summed_bigrams(pick(&pool, &summary.selected), order);
        let refc = summed_bigrams(pick(&pool, &reference.selected), order);
        if refc.total() == 0 {
            return Ok(Score::new(&BigRational::from_integer(0.into())));
        }
        Ok((&rouge_n_single(&cand, &refc)?).into())
    };
    Ok(EvalRecord {
        key: summary.key.clone(),
        tweets_rouge1: (&eval.rouge1).into(),
        tweets_rouge2: (&eval.rouge2).into(),
        reference_rouge1: against_reference(1)?,
        reference_rouge2: against_reference(2)?,
    })
}

/// Inputs, outputs and settings of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub report: String,
    pub clusters: usize,
    /// Clusters skipped because their oracle failed, with the reason.
    pub skipped: Vec<(String, String)>,
    /// Solutions cut short by a solver limit.
    pub non_optimal: usize,
    /// Stages whose artifacts were reused.
    pub reused: Vec<&'static str>,
}

struct Run {
    out: PathBuf,
    previous: Option<Manifest>,
    outputs: BTreeMap<String, String>,
    reused: Vec<&'static str>,
}

impl Run {
    /// The path of `name` when the previous manifest vouches for its content.
    fn reusable(&mut self, stage: &'static str, name: &str) -> Result<Option<PathBuf>> {
        let path = self.out.join(name);
        if let Some(recorded) = self.previous.as_ref().and_then(|m| m.outputs.get(name)) {
            if path.exists() && hash_file(&path)? == *recorded {
                log::info!("{stage}: reusing {}", path.display());
                if !self.reused.contains(&stage) {
                    self.reused.push(stage);
                }
                self.outputs.insert(name.to_string(), recorded.clone());
                return Ok(Some(path));
            }
        }
        log::info!("{stage}: writing {}", path.display());
        Ok(None)
    }

    fn written(&mut self, name: &str) -> Result<()> {
        let hash = hash_file(&self.out.join(name))?;
        self.outputs.insert(name.to_string(), hash);
        Ok(())
    }

    fn stage<T, F>(&mut self, stage: &'static str, name: &str, compute: F) -> Result<Vec<T>>
    where
        T: Serialize + serde::de::DeserializeOwned,
        F: FnOnce() -> Result<Vec<T>>,
    {
        if let Some(path) = self.reusable(stage, name)? {
            return read_jsonl(&path);
        }
        let items = compute()?;
        write_jsonl(&self.out.join(name), &items)?;
        self.written(name)?;
        Ok(items)
    }
}

fn input_hashes(cfg: &PipelineConfig) -> Result<BTreeMap<String, String>> {
    let mut inputs = BTreeMap::new();
    for p in [&cfg.paths.documents, &cfg.paths.tweets] {
        inputs.insert(p.display().to_string(), hash_file(&cfg.resolve(p))?);
    }
    if let Some(p) = &cfg.tokenizer.stopword_file {
        inputs.insert(p.display().to_string(), hash_file(&cfg.resolve(p))?);
    }
    Ok(inputs)
}

/// Runs every stage and writes the report and manifest.
///
/// With `resume`, artifacts recorded in an existing manifest with the same
/// config and input hashes are loaded instead of recomputed.
pub fn run_pipeline(cfg: &PipelineConfig, resume: bool) -> Result<RunReport> {
    cfg.validate()?;
    let out = cfg.out_dir();
    let inputs = input_hashes(cfg)?;
    let config_hash = cfg.hash();
    let manifest_path = out.join("manifest.json");
    let previous = if resume && manifest_path.exists() {
        read_json::<Manifest>(&manifest_path)
            .ok()
            .filter(|m| m.config_hash == config_hash && m.inputs == inputs && m.version == VERSION)
    } else {
        None
    };
    let mut run = Run {
        out: out.clone(),
        previous,
        outputs: BTreeMap::new(),
        reused: Vec::new(),
    };

    let tokenizer = cfg.tokenizer()?;
    let stopwords = cfg.stopwords()?;
    let raw_docs: Vec<RawDocument> = read_jsonl(&cfg.resolve(&cfg.paths.documents))?;
    let raw_tweets: Vec<RawTweet> = read_jsonl(&cfg.resolve(&cfg.paths.tweets))?;
    let stats = InputStats {
        documents: raw_docs.len(),
        tweets: raw_tweets.len(),
        retweets: raw_tweets.iter().filter(|t| t.retweet).count(),
    };

    let mut prepared = None;
    let mut prep = || -> Result<(Vec<DocumentRecord>, Vec<TweetRecord>)> {
        if prepared.is_none() {
            prepared = Some(prepare(raw_docs.clone(), raw_tweets.clone(), &tokenizer)?);
        }
        Ok(prepared.clone().unwrap_or_default())
    };
    let docs = run.stage("prep", "documents.jsonl", || Ok(prep()?.0))?;
    let tweets = run.stage("prep", "tweets.jsonl", || Ok(prep()?.1))?;
    let cluster_cfg = cfg.cluster_config()?;
    let clusters = run.stage("cluster", "clusters.jsonl", || {
        Ok(build_clusters(&docs, &tweets, &cluster_cfg))
    })?;

    let lambda = cfg.lambda()?;
    let solver = cfg.solver_config();
    let budget = cfg.oracle.budget;
    let mut skipped = Vec::new();
    let references = run.stage("reference", "references.jsonl", || {
        let mut out = Vec::new();
        for c in &clusters {
            match reference_record(c, lambda, budget, &solver) {
                Ok(r) => out.push(r),
                Err(e) => {
                    log::warn!("reference: skipping cluster {}: {e}", c.key);
                    skipped.push((c.key.clone(), e.to_string()));
                }
            }
        }
        Ok(out)
    })?;
    if run.reused.contains(&"reference") {
        let have: Vec<&str> = references.iter().map(|r| r.key.as_str()).collect();
        for c in clusters.iter().filter(|c| !have.contains(&c.key.as_str())) {
            skipped.push((c.key.clone(), "skipped in an earlier run".into()));
        }
    }
    let comparisons = run.stage("compare", "comparison.jsonl", || {
        let mut out = Vec::new();
        for c in clusters
            .iter()
            .filter(|c| references.iter().any(|r| r.key == c.key))
        {
            match comparison_record(c, lambda, budget, &solver) {
                Ok(r) => out.push(r),
                Err(e) => log::warn!("compare: skipping cluster {}: {e}", c.key),
            }
        }
        Ok(out)
    })?;

    let model: Option<RegressionModel> = match run.reusable("train", "model.json")? {
        Some(path) => read_json(&path)?,
        None => {
            let summaries: Vec<SolutionRecord> =
                references.iter().map(|r| r.summary.clone()).collect();
            let samples = training_samples(&clusters, &summaries, &stopwords)?;
            let model = if samples.is_empty() {
                log::warn!("train: no training samples");
                None
            } else {
                Some(
                    summarizer::train(&samples, &cfg.train_config())
                        .map_err(|e| Error::record("train", "all clusters", e))?,
                )
            };
            write_json(&out.join("model.json"), &model)?;
            run.written("model.json")?;
            model
        }
    };

    let summary_budget = cfg.summarize.budget;
    let summaries = run.stage("summarize", "summaries.jsonl", || {
        Ok(match &model {
            Some(m) => clusters
                .iter()
                .filter(|c| references.iter().any(|r| r.key == c.key))
                .map(|c| summarize_cluster(m, c, &stopwords, summary_budget))
                .collect(),
            None => Vec::new(),
        })
    })?;
    let evals = run.stage("eval", "eval.jsonl", || {
        let mut out = Vec::new();
        for s in &summaries {
            let (Some(c), Some(r)) = (
                clusters.iter().find(|c| c.key == s.key),
                references.iter().find(|r| r.key == s.key),
            ) else {
                continue;
            };
            out.push(
                evaluate_summary(s, c, &r.summary)
                    .map_err(|e| Error::record("eval", s.key.clone(), e))?,
            );
        }
        Ok(out)
    })?;

    let non_optimal = references.iter().filter(|r| !r.summary.optimal).count()
        + comparisons
            .iter()
            .flat_map(|c| [&c.ub1, &c.ub2, &c.ub_comb])
            .filter(|s| !s.optimal)
            .count();
    let report = render_report(&ReportInput {
        stats,
        docs: &docs,
        tweets: &tweets,
        clusters: &clusters,
        references: &references,
        comparisons: &comparisons,
        evals: &evals,
        skipped: &skipped,
        lambda,
        budget,
    })?;
    write_file(&out.join("report.md"), report.as_bytes())?;
    run.outputs
        .insert("report.md".into(), hash_file(&out.join("report.md"))?);

    let manifest = Manifest {
        tool: "refsum".into(),
        version: VERSION.into(),
        config_hash,
        seed: cfg.seed,
        inputs,
        outputs: run.outputs.clone(),
    };
    write_json(&manifest_path, &manifest)?;

    Ok(RunReport {
        out_dir: out,
        report,
        clusters: clusters.len(),
        skipped,
        non_optimal,
        reused: run.reused,
    })
}

#[derive(Debug, Clone, Copy)]
struct InputStats {
    documents: usize,
    tweets: usize,
    retweets: usize,
}

struct ReportInput<'a> {
    stats: InputStats,
    docs: &'a [DocumentRecord],
    tweets: &'a [TweetRecord],
    clusters: &'a [ClusterData],
    references: &'a [ReferenceRecord],
    comparisons: &'a [ComparisonRecord],
    evals: &'a [EvalRecord],
    skipped: &'a [(String, String)],
    lambda: Lambda,
    budget: usize,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn scores(
    records: &[&SolutionRecord],
    f: impl Fn(&SolutionRecord) -> &Score,
) -> Result<BigRational> {
    let values = records
        .iter()
        .map(|r| f(r).value())
        .collect::<Result<Vec<_>>>()?;
    Ok(mean(&values))
}

fn render_report(input: &ReportInput<'_>) -> Result<String> {
    let mut r = String::new();
    let w = &mut r;
    let _ = writeln!(w, "# refsum report\n");
    let _ = writeln!(
        w,
        "version {VERSION}, lambda {}, budget {} words\n",
        input.lambda, input.budget
    );

    let _ = writeln!(w, "## Corpus\n");
    let _ = writeln!(w, "| item | count |\n|---|---:|");
    let cluster_docs: usize = input.clusters.iter().map(|c| c.documents.len()).sum();
    let cluster_sentences: usize = input.clusters.iter().map(|c| c.sentence_count()).sum();
    let cluster_tweets: usize = input.clusters.iter().map(|c| c.tweets.len()).sum();
    for (item, n) in [
        ("input documents", input.stats.documents),
        ("input tweets", input.stats.tweets),
        ("retweets dropped", input.stats.retweets),
        ("tweets after cleanup", input.tweets.len()),
        ("documents after cleanup", input.docs.len()),
        ("clusters", input.clusters.len()),
        ("documents in clusters", cluster_docs),
        ("sentences in clusters", cluster_sentences),
        ("linked tweets in clusters", cluster_tweets),
    ] {
        let _ = writeln!(w, "| {item} | {n} |");
    }

    let _ = writeln!(w, "\n## Linked tweet types\n");
    let mut types = TypeCounts::default();
    for rec in input.references {
        types.merge(&rec.tweet_types);
    }
    let _ = writeln!(w, "| type | tweets | share |\n|---|---:|---:|");
    for t in TweetType::ALL {
        let _ = writeln!(
            w,
            "| {t:?} | {} | {:.2}% |",
            types.get(t),
            100.0 * types.fraction(t)
        );
    }

    let _ = writeln!(w, "\n## Upper bounds and greedy baselines\n");
    let _ = writeln!(
        w,
        "ROUGE recall in percent against the linked tweets, mean over {} clusters.\n",
        input.comparisons.len()
    );
    let _ = writeln!(w, "| system | ROUGE-1 | ROUGE-2 |\n|---|---:|---:|");
    let mut means: BTreeMap<&str, (BigRational, BigRational)> = BTreeMap::new();
    if let Some(first) = input.comparisons.first() {
        for (i, (name, _)) in first.rows().iter().enumerate() {
            let rows: Vec<&SolutionRecord> =
                input.comparisons.iter().map(|c| c.rows()[i].1).collect();
            let r1 = scores(&rows, |s| &s.rouge1)?;
            let r2 = scores(&rows, |s| &s.rouge2)?;
            let _ = writeln!(
                w,
                "| {name} | {} | {} |",
                format_percent(&r1),
                format_percent(&r2)
            );
            means.insert(name, (r1, r2));
        }
    }
    let _ = writeln!(w, "\n| cluster | guard | R1 UB-1 >= UB-Comb >= UB-2 | R2 UB-2 = UB-Comb >= UB-1 | GA-k <= UB-k |\n|---|---|---|---|---|");
    for c in input.comparisons {
        let v = |s: &Score| s.value();
        let r1 = (v(&c.ub1.rouge1)?, v(&c.ub_comb.rouge1)?, v(&c.ub2.rouge1)?);
        let r2 = (v(&c.ub2.rouge2)?, v(&c.ub_comb.rouge2)?, v(&c.ub1.rouge2)?);
        let ga = v(&c.ga1.rouge1)? <= r1.0 && v(&c.ga2.rouge2)? <= r2.0;
        let guard = match c.guard_holds {
            Some(true) => "holds",
            Some(false) => "fails",
            None => "not checked",
        };
        let _ = writeln!(
            w,
            "| {} | {guard} | {} | {} | {} |",
            c.key,
            yes(r1.0 >= r1.1 && r1.1 >= r1.2),
            yes(r2.0 == r2.1 && r2.1 >= r2.2),
            yes(ga)
        );
    }

    let _ = writeln!(w, "\n## Reference summaries\n");
    let _ = writeln!(w, "| cluster | date | docs | tweets | words | ROUGE-1 | ROUGE-2 | optimal | tweet sentences |\n|---|---|---:|---:|---:|---:|---:|---|---:|");
    for rec in input.references {
        let c = input.clusters.iter().find(|c| c.key == rec.key);
        let _ = writeln!(
            w,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {:.2}% |",
            rec.key,
            rec.date,
            c.map_or(0, |c| c.documents.len()),
            c.map_or(0, |c| c.tweets.len()),
            rec.summary.words,
            rec.summary.rouge1.percent,
            rec.summary.rouge2.percent,
            yes(rec.summary.optimal),
            100.0 * rec.tweet_fraction
        );
    }
    let fractions: Vec<f64> = input.references.iter().map(|r| r.tweet_fraction).collect();
    if !fractions.is_empty() {
        let _ = writeln!(
            w,
            "\nMean share of summary sentences taken from tweets: {:.2}%",
            100.0 * fractions.iter().sum::<f64>() / fractions.len() as f64
        );
    }
    for (key, reason) in input.skipped {
        let _ = writeln!(w, "\nSkipped cluster {key}: {reason}");
    }

    let _ = writeln!(w, "\n## Summarizer\n");
    if input.evals.is_empty() {
        let _ = writeln!(w, "No model was trained.");
    } else {
        let col = |f: fn(&EvalRecord) -> &Score| -> Result<String> {
            let values = input
                .evals
                .iter()
                .map(|e| f(e).value())
                .collect::<Result<Vec<_>>>()?;
            Ok(format_percent(&mean(&values)))
        };
        let _ = writeln!(w, "| against | ROUGE-1 | ROUGE-2 |\n|---|---:|---:|");
        let _ = writeln!(
            w,
            "| linked tweets | {} | {} |",
            col(|e| &e.tweets_rouge1)?,
            col(|e| &e.tweets_rouge2)?
        );
        let _ = writeln!(
            w,
            "| reference summaries | {} | {} |",
            col(|e| &e.reference_rouge1)?,
            col(|e| &e.reference_rouge2)?
        );
    }
    Ok(r)
}

/// Reads `clusters.jsonl`-style files.
pub fn read_clusters(path: &Path) -> Result<Vec<ClusterData>> {
    read_jsonl(path)
}

/// Builds the oracle instance of a cluster, reporting the cluster key on
/// failure.
pub fn cluster_problem(
    cluster: &ClusterData,
    lambda: Lambda,
    budget: usize,
) -> Result<OracleProblem> {
    reference_problem(cluster, lambda, budget)
        .map_err(|e| Error::record("oracle", cluster.key.clone(), e))
}
