use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::defaults::MIN_TWEET_TOKENS;
use crate::textproc::{tokenize, Token, TokenizerConfig};

/// A tweet carrying a link to a news document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    /// Lowercase, without the leading `#`.
    pub hashtags: Vec<String>,
    pub linked_url: Option<String>,
    pub is_retweet: bool,
}

fn hashtags_in(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace()
        .filter_map(|w| w.strip_prefix('#'))
        .map(|tag| {
            tag.chars()
                .take_while(|c| c.is_alphanumeric() || *c == '_')
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|t| !t.is_empty())
}

impl TweetRecord {
    /// Tokenizes the text and merges the given hashtags with those found in it.
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        hashtags: &[String],
        linked_url: Option<String>,
        is_retweet: bool,
        cfg: &TokenizerConfig,
    ) -> Self {
        let text = text.into();
        let mut tags: BTreeSet<String> = hashtags
            .iter()
            .map(|h| h.trim_start_matches('#').to_lowercase())
            .filter(|h| !h.is_empty())
            .collect();
        tags.extend(hashtags_in(&text));
        TweetRecord {
            id: id.into(),
            tokens: tokenize(&text, cfg),
            text,
            hashtags: tags.into_iter().collect(),
            linked_url,
            is_retweet,
        }
    }

    /// The text without URLs, for display and the declarative filter.
    pub fn display_text(&self) -> String {
        self.text
            .split_whitespace()
            .filter(|w| {
                let l = w.to_lowercase();
                !(l.starts_with("http://") || l.starts_with("https://"))
            })
            .collect::<Vec<_>>()
            .join(" ")
            .trim()
            .to_string()
    }
}

/// Cleans linked tweets, in order: drop retweets, drop non-ASCII tokens,
/// drop tweets under five tokens, merge tweets with the same link and token
/// sequence into the first one seen.
pub fn preprocess_tweets(raw: Vec<TweetRecord>) -> Vec<TweetRecord> {
    let mut seen: BTreeSet<(Option<String>, Vec<Token>)> = BTreeSet::new();
    let mut out = Vec::new();
    for mut tweet in raw {
        if tweet.is_retweet {
            continue;
        }
        tweet.tokens.retain(Token::is_ascii);
        if tweet.tokens.len() < MIN_TWEET_TOKENS {
            continue;
        }
        if !seen.insert((tweet.linked_url.clone(), tweet.tokens.clone())) {
            continue;
        }
        out.push(tweet);
    }
    out
}
