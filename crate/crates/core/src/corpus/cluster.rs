use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{DocumentRecord, TweetRecord};
use crate::defaults;

/// A dated group of documents and the tweets linking to them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    /// The smallest shared hashtag, or `doc:<id>` for a document that started
    /// its own cluster.
    pub key: String,
    pub date: NaiveDate,
    pub document_ids: BTreeSet<String>,
    pub tweet_ids: BTreeSet<String>,
}

/// Minimum cluster size kept after clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterFilter {
    pub min_docs: usize,
    pub min_tweets: usize,
}

impl Default for ClusterFilter {
    fn default() -> Self {
        ClusterFilter {
            min_docs: defaults::MIN_CLUSTER_DOCS,
            min_tweets: defaults::MIN_CLUSTER_TWEETS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterConfig {
    /// A hashtag-less document joins a cluster when the cosine is strictly
    /// above `threshold.0 / threshold.1`.
    pub threshold: (u64, u64),
    /// Lowercase hashtags ignored for grouping.
    pub general_hashtags: BTreeSet<String>,
    pub filter: ClusterFilter,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            threshold: defaults::CLUSTER_THRESHOLD,
            general_hashtags: defaults::GENERAL_HASHTAGS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            filter: ClusterFilter::default(),
        }
    }
}

type TermFrequencies = BTreeMap<String, u64>;

fn term_frequencies<'a>(docs: impl IntoIterator<Item = &'a DocumentRecord>) -> TermFrequencies {
    let mut tf = TermFrequencies::new();
    for doc in docs {
        for s in &doc.sentences {
            for t in &s.tokens {
                *tf.entry(t.as_str().to_string()).or_insert(0) += 1;
            }
        }
    }
    tf
}

/// Cosine between two raw term-frequency vectors, kept as exact integers:
/// `cos = dot / sqrt(left · right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Similarity {
    pub dot: u64,
    pub left: u64,
    pub right: u64,
}

impl Similarity {
    fn between(a: &TermFrequencies, b: &TermFrequencies) -> Self {
        let norm = |v: &TermFrequencies| v.values().map(|c| c * c).sum();
        let dot = a
            .iter()
            .filter_map(|(term, ca)| b.get(term).map(|cb| ca * cb))
            .sum();
        Similarity {
            dot,
            left: norm(a),
            right: norm(b),
        }
    }

    pub fn value(&self) -> f64 {
        if self.left == 0 || self.right == 0 {
            return 0.0;
        }
        self.dot as f64 / libm::sqrt(self.left as f64 * self.right as f64)
    }

    /// `cos > p / q`, decided exactly.
    pub fn exceeds(&self, (p, q): (u64, u64)) -> bool {
        if self.left == 0 || self.right == 0 {
            return false;
        }
        if self.dot == 0 {
            return false;
        }
        // dot / sqrt(l r) > p / q  <=>  dot² q² > p² l r   (both sides positive)
        let big = BigUint::from;
        big(self.dot).pow(2) * big(q).pow(2) > big(p).pow(2) * big(self.left) * big(self.right)
    }

    /// Exact comparison of two cosines.
    pub fn cmp_value(&self, other: &Similarity) -> core::cmp::Ordering {
        let big = BigUint::from;
        let zero = |s: &Similarity| s.left == 0 || s.right == 0 || s.dot == 0;
        match (zero(self), zero(other)) {
            (true, true) => return core::cmp::Ordering::Equal,
            (true, false) => return core::cmp::Ordering::Less,
            (false, true) => return core::cmp::Ordering::Greater,
            _ => {}
        }
        let lhs = big(self.dot).pow(2) * big(other.left) * big(other.right);
        let rhs = big(other.dot).pow(2) * big(self.left) * big(self.right);
        lhs.cmp(&rhs)
    }
}

/// TF cosine between a document and the centroid of `cluster_docs`.
///
/// The centroid is the mean term-frequency vector; the cosine does not
/// depend on the scaling, so the summed vector is used. Returns 0 when
/// either side has no terms.
pub fn tf_cosine(doc: &DocumentRecord, cluster_docs: &[DocumentRecord]) -> f64 {
    Similarity::between(&term_frequencies([doc]), &term_frequencies(cluster_docs)).value()
}

/// Keeps exactly the clusters with enough documents and tweets.
pub fn filter_clusters(clusters: Vec<Cluster>, filter: &ClusterFilter) -> Vec<Cluster> {
    clusters
        .into_iter()
        .filter(|c| {
            c.document_ids.len() >= filter.min_docs && c.tweet_ids.len() >= filter.min_tweets
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

struct Building {
    key: String,
    date: NaiveDate,
    docs: Vec<usize>,
    tf: TermFrequencies,
}

/// Groups documents into clusters.
///
/// Documents published the same day whose linked tweets share a
/// non-general hashtag end up together (transitively). Each remaining
/// document, in `(date, id)` order, joins the same-day cluster with the
/// highest TF cosine if that cosine is above the threshold, the smaller key
/// winning ties; otherwise it starts a cluster of its own. Small clusters
/// are filtered out at the end.
pub fn cluster_documents(
    docs: &[DocumentRecord],
    tweets: &[TweetRecord],
    config: &ClusterConfig,
) -> Vec<Cluster> {
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.sort_by(|&a, &b| (docs[a].date, &docs[a].id).cmp(&(docs[b].date, &docs[b].id)));

    let mut linked: BTreeMap<&str, Vec<&TweetRecord>> = BTreeMap::new();
    for t in tweets {
        if let Some(url) = &t.linked_url {
            linked.entry(url.as_str()).or_default().push(t);
        }
    }
    let tags_of = |d: &DocumentRecord| -> BTreeSet<&str> {
        linked
            .get(d.url.as_str())
            .into_iter()
            .flatten()
            .flat_map(|t| t.hashtags.iter().map(String::as_str))
            .filter(|h| !config.general_hashtags.contains(*h))
            .collect()
    };

    let mut uf = UnionFind((0..docs.len()).collect());
    let mut first_with: BTreeMap<(NaiveDate, &str), usize> = BTreeMap::new();
    let mut doc_tags: Vec<BTreeSet<&str>> = Vec::with_capacity(docs.len());
    for d in docs {
        doc_tags.push(tags_of(d));
    }
    for &i in &order {
        for &tag in &doc_tags[i] {
            match first_with.get(&(docs[i].date, tag)) {
                Some(&j) => uf.union(i, j),
                None => {
                    first_with.insert((docs[i].date, tag), i);
                }
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &order {
        if !doc_tags[i].is_empty() {
            let root = uf.find(i);
            groups.entry(root).or_default().push(i);
        }
    }
    let mut building: Vec<Building> = groups
        .into_values()
        .map(|members| {
            let key = members
                .iter()
                .flat_map(|&i| doc_tags[i].iter().copied())
                .min()
                .unwrap_or_default()
                .to_string();
            Building {
                key,
                date: docs[members[0]].date,
                tf: term_frequencies(members.iter().map(|&i| &docs[i])),
                docs: members,
            }
        })
        .collect();

    for &i in order.iter().filter(|&&i| doc_tags[i].is_empty()) {
        let doc = &docs[i];
        let tf = term_frequencies([doc]);
        let mut best: Option<(usize, Similarity)> = None;
        for (c, b) in building
            .iter()
            .enumerate()
            .filter(|(_, b)| b.date == doc.date)
        {
            let sim = Similarity::between(&tf, &b.tf);
            let better = match &best {
                None => true,
                Some((bc, bs)) => match sim.cmp_value(bs) {
                    core::cmp::Ordering::Greater => true,
                    core::cmp::Ordering::Equal => b.key < building[*bc].key,
                    core::cmp::Ordering::Less => false,
                },
            };
            if better {
                best = Some((c, sim));
            }
        }
        match best {
            Some((c, sim)) if sim.exceeds(config.threshold) => {
                let target = &mut building[c];
                target.docs.push(i);
                for (term, n) in tf {
                    *target.tf.entry(term).or_insert(0) += n;
                }
            }
            _ => building.push(Building {
                key: alloc::format!("doc:{}", doc.id),
                date: doc.date,
                docs: alloc::vec![i],
                tf,
            }),
        }
    }

    let mut clusters: Vec<Cluster> = building
        .into_iter()
        .map(|b| {
            let urls: BTreeSet<&str> = b.docs.iter().map(|&i| docs[i].url.as_str()).collect();
            Cluster {
                key: b.key,
                date: b.date,
                document_ids: b.docs.iter().map(|&i| docs[i].id.clone()).collect(),
                tweet_ids: urls
                    .iter()
                    .flat_map(|u| linked.get(u).into_iter().flatten())
                    .map(|t| t.id.clone())
                    .collect(),
            }
        })
        .collect();
    clusters.sort_by(|a, b| (a.date, &a.key).cmp(&(b.date, &b.key)));
    filter_clusters(clusters, &config.filter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::TokenizerConfig;
    use alloc::vec;

    fn date(d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2015, 8, d).unwrap()
    }

    fn doc(id: &str, day: u32, body: &str) -> DocumentRecord {
        DocumentRecord::new(
            id,
            alloc::format!("u/{id}"),
            date(day),
            "",
            body,
            &TokenizerConfig::default(),
        )
        .unwrap()
    }

    fn tweet(id: &str, doc: &str, tags: &[&str]) -> TweetRecord {
        let tags: Vec<String> = tags.iter().map(|s| s.to_string()).collect();
        TweetRecord::new(
            id,
            "some tweet text here now",
            &tags,
            Some(alloc::format!("u/{doc}")),
            false,
            &TokenizerConfig::default(),
        )
    }

    fn no_filter() -> ClusterConfig {
        ClusterConfig {
            filter: ClusterFilter {
                min_docs: 0,
                min_tweets: 0,
            },
            ..ClusterConfig::default()
        }
    }

    #[test]
    fn cosine_examples() {
        let d = doc("a", 1, "alpha beta gamma.");
        assert!((tf_cosine(&d, &[d.clone()]) - 1.0).abs() < 1e-12);
        let e = doc("b", 1, "delta epsilon.");
        assert_eq!(tf_cosine(&d, &[e]), 0.0);
        // {a:2, b:1} against centroid {a:1}
        let x = doc("x", 1, "a a b.");
        let c = doc("c", 1, "a.");
        let expected = 2.0 / libm::sqrt(5.0);
        assert!((tf_cosine(&x, &[c]) - expected).abs() < 1e-12);
        assert!((expected - 0.894).abs() < 1e-3);
    }

    #[test]
    fn exact_threshold() {
        // cos = 1/2 exactly is not above 1/2
        let s = Similarity {
            dot: 1,
            left: 2,
            right: 2,
        };
        assert!(!s.exceeds((1, 2)));
        assert!(s.exceeds((49, 100)));
        let none = Similarity {
            dot: 0,
            left: 0,
            right: 3,
        };
        assert_eq!(none.value(), 0.0);
        assert!(!none.exceeds((0, 1)));
    }

    #[test]
    fn hashtag_groups() {
        let docs = vec![doc("d1", 1, "x."), doc("d2", 1, "y."), doc("d3", 1, "z.")];
        let tweets = vec![
            tweet("t1", "d1", &["x"]),
            tweet("t2", "d2", &["x"]),
            tweet("t3", "d3", &["X", "icymi"]),
        ];
        let clusters = cluster_documents(&docs, &tweets, &no_filter());
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].key, "x");
        assert_eq!(clusters[0].document_ids.len(), 3);
        assert_eq!(clusters[0].tweet_ids.len(), 3);
    }

    #[test]
    fn general_hashtags_and_dates_separate() {
        let docs = vec![doc("d1", 1, "x."), doc("d2", 1, "y."), doc("d3", 2, "z.")];
        let tweets = vec![
            tweet("t1", "d1", &["icymi"]),
            tweet("t2", "d2", &["icymi", "b"]),
            tweet("t3", "d3", &["b"]),
        ];
        let clusters = cluster_documents(&docs, &tweets, &no_filter());
        let keys: Vec<(&str, usize)> = clusters
            .iter()
            .map(|c| (c.key.as_str(), c.document_ids.len()))
            .collect();
        assert_eq!(keys, [("b", 1), ("doc:d1", 1), ("b", 1)]);
    }

    #[test]
    fn transitive_hashtags() {
        let docs = vec![doc("d1", 1, "x."), doc("d2", 1, "y."), doc("d3", 1, "z.")];
        let tweets = vec![
            tweet("t1", "d1", &["q"]),
            tweet("t2", "d2", &["q", "p"]),
            tweet("t3", "d3", &["p"]),
        ];
        let clusters = cluster_documents(&docs, &tweets, &no_filter());
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].key, "p");
    }

    #[test]
    fn low_similarity_makes_singleton() {
        // cos(d3, {a b}) = 1/sqrt(2 * ...) kept below 0.5
        let docs = vec![
            doc("d1", 1, "a b c d."),
            doc("d2", 1, "a b c d."),
            doc("d3", 1, "a x y z w."),
        ];
        let tweets = vec![tweet("t1", "d1", &["k"]), tweet("t2", "d2", &["k"])];
        let tf3 = term_frequencies([&docs[2]]);
        let tfk = term_frequencies([&docs[0], &docs[1]]);
        let sim = Similarity::between(&tf3, &tfk);
        assert!(sim.value() < 0.5);
        let clusters = cluster_documents(&docs, &tweets, &no_filter());
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].key, "doc:d3");
        let filtered = cluster_documents(&docs, &tweets, &ClusterConfig::default());
        assert!(filtered.is_empty());
    }

    #[test]
    fn ties_join_smaller_key() {
        let docs = vec![
            doc("d1", 1, "a b c."),
            doc("d2", 1, "a b c."),
            doc("d3", 1, "a b c."),
        ];
        let tweets = vec![tweet("t1", "d1", &["zeta"]), tweet("t2", "d2", &["alpha"])];
        let clusters = cluster_documents(&docs, &tweets, &no_filter());
        assert_eq!(clusters.len(), 2);
        let alpha = clusters.iter().find(|c| c.key == "alpha").unwrap();
        assert!(alpha.document_ids.contains("d3"));
        let all: usize = clusters.iter().map(|c| c.document_ids.len()).sum();
        assert_eq!(all, 3);
    }

    #[test]
    fn filter_examples() {
        let make = |docs: usize, tweets: usize| Cluster {
            key: "k".into(),
            date: date(1),
            document_ids: (0..docs).map(|i| alloc::format!("d{i}")).collect(),
            tweet_ids: (0..tweets).map(|i| alloc::format!("t{i}")).collect(),
        };
        let kept = filter_clusters(
            vec![make(2, 10), make(3, 8), make(5, 7)],
            &ClusterFilter::default(),
        );
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].document_ids.len(), 3);
        assert_eq!(kept[0].tweet_ids.len(), 8);
    }
}
