//! Exact inference for iterated-response (Rational Speech Acts) pragmatics over
//! finite reference games.
//!
//! Two families of agents are provided over the same game:
//!
//! * the *global* agents, which reason about complete utterances
//!   (literal listener, pragmatic speaker, pragmatic listener);
//! * the *incremental* agents, which reason one word at a time over a prefix
//!   trie of the utterance inventory, together with the utterance-level speaker
//!   obtained from them by the chain rule and greedy unrolling.
//!
//! Every distribution is computed by exact summation over its finite support.
//! The crate is `no_std` and only needs `alloc`; file formats, corpus readers and
//! the command line live in the `incrsa` companion crate.
//!
//! ```
//! use incrsa_core::{scenarios, RsaModel};
//!
//! let fig2 = scenarios::builtin_scenario("fig2").unwrap();
//! let model = RsaModel::new(fig2.game);
//! let speaker = model.pragmatic_speaker_gp("R1").unwrap();
//! assert!((speaker.prob("red dress") - 0.5).abs() < 1e-12);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod agents;
pub mod dist;
pub mod error;
pub mod model;
pub mod scenarios;
pub mod trie;
pub mod tuna;

pub use agents::{optimal_utterances, RsaModel, DEFAULT_TIE_EPSILON};
pub use dist::Distribution;
pub use error::{GameError, QueryError};
pub use model::{CostModel, Prior, ReferenceGame, Semantics, Utterance, Word, World, STOP};
pub use trie::{NodeId, UtteranceTrie};
