//! End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
//! and exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refsum::config::PipelineConfig;
use refsum::io::{read_jsonl, RawDocument, RawTweet};
use refsum::pipeline::{cluster_problem, prepare, run_pipeline};
use refsum::records::SummaryRecord;
use refsum_core::corpus::{cluster_documents, filter_clusters, ClusterData, ClusterFilter};
use refsum_core::oracle::{
    brute_force, build_problem, combination_guard, solve_auxiliary_encoding, solve_exact,
    solve_greedy, Lambda, Metric, OracleProblem, SolverConfig, TweetReference,
};
use refsum_core::rouge::rouge_n_multi;
use refsum_core::summarizer::{extract_features, summarize, train, TermTable, TrainConfig};
use refsum_core::textproc::{
    default_stopwords, ngram_counts, Origin, SentenceId, SentenceRecord, Token,
};

type Outcome = Result<String, String>;

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic")
}

fn fixture_config() -> PipelineConfig {
    PipelineConfig::load(&fixture_dir().join("pipeline.toml")).expect("fixture config")
}

fn fixture_clusters() -> Vec<ClusterData> {
    let cfg = fixture_config();
    let docs: Vec<RawDocument> = read_jsonl(&cfg.resolve(&cfg.paths.documents)).unwrap();
    let tweets: Vec<RawTweet> = read_jsonl(&cfg.resolve(&cfg.paths.tweets)).unwrap();
    let (docs, tweets) = prepare(docs, tweets, &cfg.tokenizer().unwrap()).unwrap();
    refsum::pipeline::build_clusters(&docs, &tweets, &cfg.cluster_config().unwrap())
}

fn words(text: &str) -> Vec<Token> {
    text.split_whitespace().map(Token::from).collect()
}

fn random_text(rng: &mut ChaCha8Rng, vocab: usize, lo: usize, hi: usize) -> Vec<Token> {
    let n = rng.gen_range(lo..=hi);
    (0..n)
        .map(|_| Token::new(format!("w{}", rng.gen_range(0..vocab))))
        .collect()
}

fn random_problem(rng: &mut ChaCha8Rng, references: usize, lambda: Lambda) -> OracleProblem {
    let vocab = rng.gen_range(4..=30);
    let n = rng.gen_range(1..=12);
    let budget = rng.gen_range(0..=30);
    let sentences = (0..n)
        .map(|i| {
            let t = random_text(rng, vocab, 1, 8);
            let raw = t.iter().map(Token::as_str).collect::<Vec<_>>().join(" ");
            SentenceRecord::with_tokens(SentenceId(i), Origin::Document, "doc", raw, t)
        })
        .collect();
    let refs = (0..references)
        .map(|i| TweetReference::from_tokens(format!("t{i}"), &random_text(rng, vocab, 2, 10)))
        .collect();
    build_problem(sentences, refs, budget, lambda).unwrap()
}

fn exactness() -> Outcome {
    let start = Instant::now();
    let lambdas = [Lambda::ROUGE2, Lambda::ROUGE1, Lambda::default()];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let refs = rng.gen_range(1..=5);
        let p = random_problem(&mut rng, refs, lambdas[i % 3]);
        let exact = solve_exact(&p, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let brute = brute_force(&p).map_err(|e| e.to_string())?;
        if exact.objective != brute.objective || !exact.optimal {
            return Err(format!(
                "instance {i}: exact {} vs brute {}",
                exact.objective, brute.objective
            ));
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("200 instances equal, {:.2}s", took.as_secs_f64()))
}

fn encoding_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 50 {
        let p = random_problem(&mut rng, 1, Lambda::ROUGE2);
        if p.references()[0].bigram_weight.is_none() {
            continue;
        }
        let exact = solve_exact(&p, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let aux =
            solve_auxiliary_encoding(&p, &SolverConfig::default()).map_err(|e| e.to_string())?;
        if aux.rouge2 != exact.rouge2 {
            return Err(format!(
                "instance {checked}: aux {} vs exact {}",
                aux.rouge2, exact.rouge2
            ));
        }
        checked += 1;
    }
    Ok("50 single-reference instances equal".into())
}

fn bound_pattern() -> Outcome {
    let cfg = fixture_config();
    let clusters = fixture_clusters();
    if clusters.is_empty() {
        return Err("fixture has no clusters".into());
    }
    let solver = SolverConfig::default();
    for c in &clusters {
        let base = cluster_problem(c, cfg.lambda().unwrap(), cfg.oracle.budget)
            .map_err(|e| e.to_string())?;
        let guard = combination_guard(&base).map_err(|e| e.to_string())?;
        if !guard.holds {
            return Err(format!("{}: λ guard does not hold", c.key));
        }
        let solve = |l: Lambda| solve_exact(&base.clone().with_lambda(l), &solver).unwrap();
        let ub1 = solve(Lambda::ROUGE1);
        let ub2 = solve(Lambda::ROUGE2);
        let comb = solve_exact(&base, &solver).unwrap();
        let ga1 = solve_greedy(&base, Metric::Rouge1).unwrap();
        let ga2 = solve_greedy(&base, Metric::Rouge2).unwrap();
        let ok = ub1.rouge1 >= comb.rouge1
            && comb.rouge1 >= ub2.rouge1
            && ub2.rouge2 == comb.rouge2
            && comb.rouge2 >= ub1.rouge2
            && ga1.rouge1 <= ub1.rouge1
            && ga2.rouge2 <= ub2.rouge2;
        if !ok {
            return Err(format!("{}: pattern violated", c.key));
        }
    }
    Ok(format!(
        "{} fixture clusters, guard holds on all",
        clusters.len()
    ))
}

fn budget_sweep() -> Outcome {
    let cfg = fixture_config();
    let clusters = fixture_clusters();
    for c in &clusters {
        let mut previous: Option<BigRational> = None;
        for budget in (0..=100).step_by(10) {
            let p = cluster_problem(c, cfg.lambda().unwrap(), budget).map_err(|e| e.to_string())?;
            let exact = solve_exact(&p, &SolverConfig::default()).unwrap();
            if previous.as_ref().is_some_and(|v| exact.objective < *v) {
                return Err(format!("{} budget {budget}: objective decreased", c.key));
            }
            for metric in [Metric::Rouge1, Metric::Rouge2] {
                if solve_greedy(&p, metric).unwrap().objective > exact.objective {
                    return Err(format!("{} budget {budget}: greedy above exact", c.key));
                }
            }
            previous = Some(exact.objective);
        }
    }
    Ok(format!("{} clusters x 11 budgets", clusters.len()))
}

/// Candidate, references, order, expected numerator and denominator.
const ROUGE_TABLE: [(&str, &[&str], usize, i64, i64); 30] = [
    ("a b c", &["a b c"], 1, 1, 1),
    ("a b c", &["d e f"], 1, 0, 1),
    ("a b c", &["a b c"], 2, 1, 1),
    ("a b", &["c d"], 2, 0, 1),
    ("a b c", &["a b c d"], 1, 3, 4),
    ("a b c", &["a b c d"], 2, 2, 3),
    ("a a b", &["a b b"], 1, 2, 3),
    ("a a a", &["a a"], 1, 1, 1),
    ("a", &["a a a a"], 1, 1, 4),
    ("a b", &["a b", "a c"], 1, 3, 4),
    ("a b", &["a b", "a c"], 2, 1, 2),
    ("x y z", &["x", "y", "w"], 1, 2, 3),
    ("the cat sat", &["the cat sat on the mat"], 1, 1, 2),
    ("the cat sat", &["the cat sat on the mat"], 2, 2, 5),
    ("on the mat the cat", &["the cat sat on the mat"], 1, 5, 6),
    ("on the mat the cat", &["the cat sat on the mat"], 2, 3, 5),
    ("a b c d e", &["e d c b a"], 1, 1, 1),
    ("a b c d e", &["e d c b a"], 2, 0, 1),
    ("a b a b", &["a b a b a b"], 2, 3, 5),
    ("a b a b", &["a b a b a b"], 1, 2, 3),
    ("a b c", &["a b", "b c", "c a"], 2, 2, 3),
    ("a b c", &["a b", "b c", "c a"], 1, 1, 1),
    ("a c", &["a b", "a b a b", "c"], 1, 7, 12),
    ("a b c d", &["a b", "c d e f g h"], 2, 3, 5),
    ("a b c d", &["a b", "c d e f g h"], 1, 2, 3),
    ("b", &["a b c", "a b c"], 1, 1, 3),
    ("a b c d e f g", &["a x c y e z g"], 1, 4, 7),
    ("a b c d e f g", &["a x c y e z g"], 2, 0, 1),
    ("x x y y", &["x y x y"], 2, 1, 3),
    ("x x y y", &["x y x y"], 1, 1, 1),
];

fn rouge_table() -> Outcome {
    for (i, (cand, refs, n, num, den)) in ROUGE_TABLE.iter().enumerate() {
        let r: Vec<_> = refs.iter().map(|t| ngram_counts(&words(t), *n)).collect();
        let got = rouge_n_multi(&ngram_counts(&words(cand), *n), &r).map_err(|e| e.to_string())?;
        let want = BigRational::new(BigInt::from(*num), BigInt::from(*den));
        if *got.value() != want {
            return Err(format!("case {i}: got {} want {want}", got.value()));
        }
    }
    Ok("30 cases exact".into())
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut reports = Vec::new();
    for d in &dirs {
        let mut cfg = fixture_config();
        cfg.paths.out_dir = d.path().to_path_buf();
        run_pipeline(&cfg, false).map_err(|e| e.to_string())?;
        reports.push(std::fs::read(d.path().join("report.md")).unwrap());
    }
    if reports[0] != reports[1] {
        return Err("reports differ".into());
    }
    Ok(format!("report.md identical ({} bytes)", reports[0].len()))
}

fn summarizer_sanity() -> Outcome {
    let truth = [0.02, 0.01, -0.3];
    let bias = 0.1;
    let stop = default_stopwords();
    let function_words = ["the", "of", "and", "a", "to", "in"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut clusters = Vec::new();
    let mut samples = Vec::new();
    for _ in 0..12 {
        let sentences: Vec<SentenceRecord> = (0..15)
            .map(|i| {
                let n = rng.gen_range(5..=25);
                let tokens: Vec<Token> = (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            Token::from(function_words[rng.gen_range(0..function_words.len())])
                        } else {
                            Token::new(format!("w{}", rng.gen_range(0..40)))
                        }
                    })
                    .collect();
                let raw = tokens
                    .iter()
                    .map(Token::as_str)
                    .collect::<Vec<_>>()
                    .join(" ")
                    + ".";
                SentenceRecord::with_tokens(SentenceId(i), Origin::Document, "doc", raw, tokens)
            })
            .collect();
        let table = TermTable::from_sentences(&sentences);
        for s in &sentences {
            let f = extract_features(s, &table, &stop).unwrap();
            let x = f.to_array();
            let y = bias + (0..3).map(|j| truth[j] * x[j]).sum::<f64>();
            samples.push((f, y));
        }
        clusters.push((sentences, table));
    }
    let cfg = TrainConfig {
        epsilon: 0.0,
        regularization: 1e4,
        ..TrainConfig::default()
    };
    let model = train(&samples, &cfg).map_err(|e| e.to_string())?;
    let (raw, _) = model.raw_weights();
    let err = (0..3)
        .map(|j| (raw[j] - truth[j]).abs())
        .fold(0.0, f64::max);
    if err >= 1e-3 {
        return Err(format!("max weight error {err:.2e}"));
    }
    for (sentences, table) in &clusters {
        let ids = summarize(&model, sentences, table, &stop, 100);
        let len: usize = ids
            .iter()
            .map(|id| sentences[id.0 as usize].word_length)
            .sum();
        if len > 100 {
            return Err(format!("summary of {len} tokens"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let mut pcfg = fixture_config();
    pcfg.paths.out_dir = dir.path().to_path_buf();
    run_pipeline(&pcfg, false).map_err(|e| e.to_string())?;
    let summaries: Vec<SummaryRecord> = read_jsonl(&dir.path().join("summaries.jsonl")).unwrap();
    if let Some(s) = summaries.iter().find(|s| s.words > 100) {
        return Err(format!("fixture summary {} has {} tokens", s.key, s.words));
    }
    Ok(format!(
        "max weight error {err:.2e}, {} synthetic and {} fixture summaries within 100 tokens",
        clusters.len(),
        summaries.len()
    ))
}

fn corpus_rules() -> Outcome {
    let cfg = fixture_config();
    let docs: Vec<RawDocument> = read_jsonl(&cfg.resolve(&cfg.paths.documents)).unwrap();
    let tweets: Vec<RawTweet> = read_jsonl(&cfg.resolve(&cfg.paths.tweets)).unwrap();
    let (docs, tweets) = prepare(docs, tweets, &cfg.tokenizer().unwrap()).unwrap();

    // Dropped: retweets a-10 b-09 c-09, short a-11 b-11 c-10, duplicates
    // a-12 b-10 c-11, too few ASCII tokens a-14 c-12.
    let mut expected: BTreeSet<String> = BTreeSet::new();
    for (prefix, ids) in [
        ("a", vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 13]),
        ("b", vec![1, 2, 3, 4, 5, 6, 7, 8, 12]),
    ] {
        expected.extend(ids.into_iter().map(|i| format!("{prefix}-{i:02}")));
    }
    expected.extend((1..=8).map(|i| format!("c-{i:02}")));
    expected.extend((1..=10).map(|i| format!("d-{i:02}")));
    expected.extend((1..=7).map(|i| format!("e-{i:02}")));
    let surviving: BTreeSet<String> = tweets.iter().map(|t| t.id.clone()).collect();
    if surviving != expected {
        let missing: Vec<_> = expected.difference(&surviving).collect();
        let extra: Vec<_> = surviving.difference(&expected).collect();
        return Err(format!("missing {missing:?}, unexpected {extra:?}"));
    }

    let mut open = cfg.cluster_config().unwrap();
    let filter = open.filter;
    open.filter = ClusterFilter {
        min_docs: 0,
        min_tweets: 0,
    };
    let all = cluster_documents(&docs, &tweets, &open);
    let kept: BTreeSet<String> = filter_clusters(all.clone(), &filter)
        .into_iter()
        .map(|c| c.key)
        .collect();
    let violators: BTreeSet<String> = all
        .iter()
        .filter(|c| c.document_ids.len() < 3 || c.tweet_ids.len() < 8)
        .map(|c| c.key.clone())
        .collect();
    let want_kept: BTreeSet<String> = ["bangkokblast", "heatwave", "greececrisis"]
        .map(String::from)
        .into();
    let want_dropped: BTreeSet<String> =
        ["fireworks", "marathon", "doc:f1"].map(String::from).into();
    let dropped: BTreeSet<String> = all
        .iter()
        .map(|c| c.key.clone())
        .filter(|k| !kept.contains(k))
        .collect();
    if kept != want_kept || dropped != want_dropped || dropped != violators {
        return Err(format!("kept {kept:?}, dropped {dropped:?}"));
    }
    Ok(format!(
        "{} tweets survive, {} of {} clusters dropped",
        surviving.len(),
        dropped.len(),
        all.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exact solver equals brute force", exactness),
        (
            "auxiliary encoding equals exact ROUGE-2",
            encoding_equivalence,
        ),
        ("upper bound and greedy pattern", bound_pattern),
        ("budget monotonicity and greedy dominance", budget_sweep),
        ("hand-computed ROUGE table", rouge_table),
        ("pipeline determinism", determinism),
        ("summarizer weight recovery and budget", summarizer_sanity),
        ("corpus rules and cluster filters", corpus_rules),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
