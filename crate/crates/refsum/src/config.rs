//! Pipeline configuration, read from a TOML file.
//!
//! Every key is optional; missing keys take the defaults below.
//!
//! ```toml
//! seed = 0
//!
//! [paths]
//! tweets = "tweets.jsonl"        # relative to the config file
//! documents = "documents.jsonl"
//! out_dir = "out"
//!
//! [tokenizer]
//! remove_stopwords = false
//! stem = false                   # English Snowball stemmer
//! stopword_file = "stop.txt"     # replaces the bundled list
//!
//! [cluster]
//! threshold = "0.5"              # TF cosine must be strictly above
//! general_hashtags = ["thisweek", "icymi"]
//! min_docs = 3
//! min_tweets = 8
//!
//! [oracle]
//! lambda = "0.0001"              # decimal or "a/b"
//! budget = 100
//! time_limit = 0.0               # seconds, 0 = none
//! node_limit = 0                 # 0 = none
//! branch_order = "by_length_density"
//!
//! [train]
//! epsilon = 0.01
//! regularization = 1.0
//! epochs = 200
//!
//! [summarize]
//! budget = 100
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use refsum_core::corpus::{ClusterConfig, ClusterFilter};
use refsum_core::defaults;
use refsum_core::oracle::{BranchOrder, Lambda, SolverConfig};
use refsum_core::summarizer::TrainConfig;
use refsum_core::textproc::{default_stopwords, parse_stopwords, Stemmer, TokenizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::hash_bytes;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub paths: Paths,
    pub tokenizer: TokenizerSettings,
    pub cluster: ClusterSettings,
    pub oracle: OracleSettings,
    pub train: TrainSettings,
    pub summarize: SummarizeSettings,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub tweets: PathBuf,
    pub documents: PathBuf,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TokenizerSettings {
    pub remove_stopwords: bool,
    pub stem: bool,
    pub stopword_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSettings {
    pub threshold: String,
    pub general_hashtags: Vec<String>,
    pub min_docs: usize,
    pub min_tweets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSettings {
    pub lambda: String,
    pub budget: usize,
    pub time_limit: f64,
    pub node_limit: u64,
    pub branch_order: BranchOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSettings {
    pub epsilon: f64,
    pub regularization: f64,
    pub epochs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SummarizeSettings {
    pub budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            paths: Paths::default(),
            tokenizer: TokenizerSettings::default(),
            cluster: ClusterSettings::default(),
            oracle: OracleSettings::default(),
            train: TrainSettings::default(),
            summarize: SummarizeSettings::default(),
            base_dir: PathBuf::from("."),
        }
    }
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            tweets: "tweets.jsonl".into(),
            documents: "documents.jsonl".into(),
            out_dir: "out".into(),
        }
    }
}

impl Default for ClusterSettings {
    fn default() -> Self {
        let (p, q) = defaults::CLUSTER_THRESHOLD;
        ClusterSettings {
            threshold: format!("{p}/{q}"),
            general_hashtags: defaults::GENERAL_HASHTAGS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            min_docs: defaults::MIN_CLUSTER_DOCS,
            min_tweets: defaults::MIN_CLUSTER_TWEETS,
        }
    }
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            lambda: Lambda::default().to_string(),
            budget: defaults::BUDGET,
            time_limit: 0.0,
            node_limit: 0,
            branch_order: BranchOrder::default(),
        }
    }
}

impl Default for TrainSettings {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainSettings {
            epsilon: t.epsilon,
            regularization: t.regularization,
            epochs: t.epochs,
        }
    }
}

impl Default for SummarizeSettings {
    fn default() -> Self {
        SummarizeSettings {
            budget: defaults::BUDGET,
        }
    }
}

struct Snowball(rust_stemmers::Stemmer);

impl Stemmer for Snowball {
    fn stem(&self, word: &str) -> String {
        self.0.stem(word).into_owned()
    }
}

/// The English Snowball stemmer.
pub fn english_stemmer() -> Arc<dyn Stemmer> {
    Arc::new(Snowball(rust_stemmers::Stemmer::create(
        rust_stemmers::Algorithm::English,
    )))
}

impl PipelineConfig {
    /// Reads a config file; relative paths are taken from its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: PipelineConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e
                .span()
                .map_or(0, |s| text[..s.start].lines().count().max(1)),
            message: e.message().to_string(),
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.lambda()?;
        self.cluster_config()?;
        self.solver_config()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.train_config()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.paths.out_dir)
    }

    pub fn lambda(&self) -> Result<Lambda> {
        Lambda::parse(&self.oracle.lambda).map_err(|e| Error::Config(format!("oracle.lambda: {e}")))
    }

    pub fn cluster_config(&self) -> Result<ClusterConfig> {
        let t = Lambda::parse(&self.cluster.threshold)
            .map_err(|e| Error::Config(format!("cluster.threshold: {e}")))?;
        Ok(ClusterConfig {
            threshold: (t.numer(), t.denom()),
            general_hashtags: self
                .cluster
                .general_hashtags
                .iter()
                .map(|h| h.trim_start_matches('#').to_lowercase())
                .collect(),
            filter: ClusterFilter {
                min_docs: self.cluster.min_docs,
                min_tweets: self.cluster.min_tweets,
            },
        })
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            time_limit: self.oracle.time_limit,
            node_limit: self.oracle.node_limit,
            branch_order: self.oracle.branch_order,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epsilon: self.train.epsilon,
            regularization: self.train.regularization,
            epochs: self.train.epochs,
            seed: self.seed,
        }
    }

    /// Stopwords used for the summarizer's stop-ratio feature and, when
    /// enabled, for token filtering.
    pub fn stopwords(&self) -> Result<BTreeSet<String>> {
        match &self.tokenizer.stopword_file {
            Some(p) => {
                let p = self.resolve(p);
                let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
                Ok(parse_stopwords(&text))
            }
            None => Ok(default_stopwords()),
        }
    }

    pub fn tokenizer(&self) -> Result<TokenizerConfig> {
        Ok(TokenizerConfig {
            stopwords: if self.tokenizer.remove_stopwords {
                Some(Arc::new(self.stopwords()?))
            } else {
                None
            },
            stemmer: self.tokenizer.stem.then(english_stemmer),
        })
    }

    /// SHA-256 of the canonical TOML rendering.
    pub fn hash(&self) -> String {
        hash_bytes(toml::to_string(self).unwrap_or_default().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_stated_values() {
        let c = PipelineConfig::default();
        assert_eq!(c.cluster_config().unwrap().threshold, (1, 2));
        assert_eq!(c.cluster.min_docs, 3);
        assert_eq!(c.cluster.min_tweets, 8);
        assert_eq!(c.lambda().unwrap(), Lambda::new(1, 10_000).unwrap());
        assert_eq!(c.oracle.budget, 100);
        assert_eq!(c.summarize.budget, 100);
        assert!(c
            .cluster_config()
            .unwrap()
            .general_hashtags
            .contains("icymi"));
    }

    #[test]
    fn load_partial_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.toml");
        std::fs::write(
            &path,
            "seed = 7\n[oracle]\nlambda = \"1/2\"\n[cluster]\nthreshold = \"0.25\"\n",
        )
        .unwrap();
        let c = PipelineConfig::load(&path).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.train_config().seed, 7);
        assert_eq!(c.lambda().unwrap(), Lambda::new(1, 2).unwrap());
        assert_eq!(c.cluster_config().unwrap().threshold, (1, 4));
        assert_eq!(c.out_dir(), dir.path().join("out"));

        std::fs::write(&path, "[oracle]\nlambda = \"2\"\n").unwrap();
        assert!(matches!(PipelineConfig::load(&path), Err(Error::Config(_))));
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(matches!(
            PipelineConfig::load(&path),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn hash_tracks_content() {
        let a = PipelineConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn stemmer_option() {
        let c = PipelineConfig {
            tokenizer: TokenizerSettings {
                stem: true,
                remove_stopwords: true,
                stopword_file: None,
            },
            ..Default::default()
        };
        let toks =
            refsum_core::textproc::tokenize("The bombings were running", &c.tokenizer().unwrap());
        let words: Vec<&str> = toks.iter().map(|t| t.as_str()).collect();
        assert_eq!(words, ["bomb", "run"]);
    }
}
