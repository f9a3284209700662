//! Exact ROUGE upper-bound reference summaries for news clusters guided by
//! linked tweets.
//!
//! The crate is `no_std` (with `alloc`) so that the solver and the metric can
//! be embedded anywhere; file formats, configuration and the command line
//! live in the `refsum` companion crate.
//!
//! * [`textproc`] tokenization, sentence splitting and n-gram counting.
//! * [`rouge`] exact multi-reference ROUGE-N recall.
//! * [`oracle`] the budgeted ROUGE maximization program and its solvers.
//! * [`corpus`] tweet cleanup, clustering, tweet typing and reference generation.
//! * [`summarizer`] feature-based epsilon-insensitive regression summarizer.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod corpus;
pub mod defaults;
mod error;
pub mod oracle;
pub mod rouge;
pub mod summarizer;
pub mod textproc;

pub use error::{Error, Result};
