//! Listener and speaker agents, global and incremental.
//!
//! Global agents work on complete inventory utterances:
//!
//! * `L0-UTT(w | u)  ∝ prior(w) · [[u]](w)`
//! * `S1-UTT-GP(u | w) ∝ L0-UTT(w | u) · exp(-cost(u))`
//! * `L1-UTT(w | u)  ∝ prior(w) · S1-UTT-GP(u | w)`
//!
//! Incremental agents work one word at a time, using the extension-counting
//! truth of the trie:
//!
//! * `L0-WORD(w | c, word) ∝ prior(w) · [[c + word]](w)`
//! * `S1-WORD(word | c, w) ∝ L0-WORD(w | c, word) · exp(-cost(word))`,
//!   uniform over the continuations of `c` when every one of them gives `w`
//!   zero literal mass
//! * `L1-WORD(w | c, word) ∝ prior(w) · S1-WORD(word | c, w)`, over the
//!   worlds in which `c + word` keeps non-zero incremental truth
//!
//! `S1-UTT-IP(u | w)` is the product of the `S1-WORD` steps spelling out `u`
//! followed by the step that chooses STOP.
//!
//! Zero literal-listener mass means a log of minus infinity, so such options
//! receive zero speaker mass rather than an error.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dist::Distribution;
use crate::error::QueryError;
use crate::model::{join_words, ReferenceGame, Utterance, Word};
use crate::trie::{NodeId, UtteranceTrie};

/// Default slack when deciding that two probabilities tie.
pub const DEFAULT_TIE_EPSILON: f64 = 1e-9;

/// Slack on the chance-level bound of the weak-informativity check; absorbs
/// rounding in `1/k` versus `1/|W|`.
const CHANCE_SLACK: f64 = 1e-12;

/// A reference game together with its utterance trie.
///
/// All queries are pure; a model can be shared between threads.
#[derive(Clone, Debug)]
pub struct RsaModel {
    game: ReferenceGame,
    trie: UtteranceTrie,
}

impl RsaModel {
    pub fn new(game: ReferenceGame) -> Self {
        let trie = UtteranceTrie::build(&game);
        RsaModel { game, trie }
    }

    pub fn game(&self) -> &ReferenceGame {
        &self.game
    }

    pub fn trie(&self) -> &UtteranceTrie {
        &self.trie
    }

    fn world(&self, id: &str) -> Result<usize, QueryError> {
        self.game
            .world_index(id)
            .ok_or_else(|| QueryError::UnknownWorld(id.to_string()))
    }

    fn utterance<W: AsRef<str>>(&self, words: &[W]) -> Result<usize, QueryError> {
        self.game
            .utterance_index(words)
            .ok_or_else(|| QueryError::UnknownUtterance(join_words(words)))
    }

    // ---- global agents ----

    fn l0_utt_row(&self, utterance: usize) -> Vec<f64> {
        let prior = self.game.prior_mass();
        let weights: Vec<f64> = (0..prior.len())
            .map(|w| if self.game.truth(utterance, w) { prior[w] } else { 0.0 })
            .collect();
        normalized(weights)
    }

    /// Speaker row over inventory indices; uniform when `world` satisfies no
    /// utterance.
    fn gp_row(&self, world: usize) -> Vec<f64> {
        let costs = self.game.costs();
        let weights: Vec<f64> = self
            .game
            .inventory()
            .iter()
            .enumerate()
            .map(|(u, utt)| {
                let literal = self.l0_utt_row(u)[world];
                if literal == 0.0 {
                    0.0
                } else {
                    literal * libm::exp(-costs.utterance_cost(utt.words(), true))
                }
            })
            .collect();
        if weights.iter().all(|w| *w == 0.0) {
            let n = weights.len();
            return alloc::vec![1.0 / n as f64; n];
        }
        normalized(weights)
    }

    pub fn literal_listener_utt<W: AsRef<str>>(&self, utterance: &[W]) -> Result<Distribution, QueryError> {
        let u = self.utterance(utterance)?;
        let prior = self.game.prior_mass();
        let weights = (0..prior.len())
            .map(|w| if self.game.truth(u, w) { prior[w] } else { 0.0 })
            .collect();
        Ok(Distribution::from_weights(self.game.world_ids(), weights))
    }

    pub fn pragmatic_speaker_gp(&self, world: &str) -> Result<Distribution, QueryError> {
        let w = self.world(world)?;
        Ok(Distribution::from_weights(self.game.utterance_labels(), self.gp_row(w)))
    }

    pub fn pragmatic_listener_utt<W: AsRef<str>>(&self, utterance: &[W]) -> Result<Distribution, QueryError> {
        let u = self.utterance(utterance)?;
        let prior = self.game.prior_mass();
        let weights = (0..prior.len()).map(|w| prior[w] * self.gp_row(w)[u]).collect();
        Ok(Distribution::from_weights(self.game.world_ids(), weights))
    }

    // ---- incremental agents ----

    /// L0-WORD row for the prefix ending at `node`.
    fn l0_word_row(&self, node: NodeId) -> Vec<f64> {
        let prior = self.game.prior_mass();
        let weights = (0..prior.len())
            .map(|w| prior[w] * self.trie.truth_at(node, w))
            .collect();
        normalized(weights)
    }

    /// S1-WORD row at `node` for `world`, aligned with the node's children.
    fn s1_word_row(&self, node: NodeId, world: usize) -> Vec<(&Word, NodeId, f64)> {
        let costs = self.game.costs();
        let mut row: Vec<(&Word, NodeId, f64)> = self
            .trie
            .node(node)
            .children()
            .map(|(word, child)| (word, child, self.l0_word_row(child)[world]))
            .collect();
        if row.iter().all(|(_, _, literal)| *literal == 0.0) {
            let p = 1.0 / row.len() as f64;
            for entry in &mut row {
                entry.2 = p;
            }
            return row;
        }
        for entry in &mut row {
            if entry.2 > 0.0 {
                entry.2 *= libm::exp(-costs.word_cost(entry.0.as_str()));
            }
        }
        let total: f64 = row.iter().map(|e| e.2).sum();
        if total > 0.0 {
            for entry in &mut row {
                entry.2 /= total;
            }
        }
        row
    }

    pub fn literal_listener_word<W: AsRef<str>>(&self, context: &[W], word: &str) -> Result<Distribution, QueryError> {
        let node = self.trie.step(context, word)?;
        let prior = self.game.prior_mass();
        let weights = (0..prior.len())
            .map(|w| prior[w] * self.trie.truth_at(node, w))
            .collect();
        Ok(Distribution::from_weights(self.game.world_ids(), weights))
    }

    /// Distribution over the continuations of `context`.
    pub fn pragmatic_speaker_word<W: AsRef<str>>(
        &self,
        context: &[W],
        world: &str,
    ) -> Result<Distribution, QueryError> {
        let w = self.world(world)?;
        let node = self.trie.locate(context)?;
        let row = self.s1_word_row(node, w);
        let support = row.iter().map(|(word, _, _)| word.as_str().to_string()).collect();
        let weights = row.iter().map(|(_, _, p)| *p).collect();
        Ok(Distribution::from_weights(support, weights))
    }

    pub fn pragmatic_listener_word<W: AsRef<str>>(
        &self,
        context: &[W],
        word: &str,
    ) -> Result<Distribution, QueryError> {
        let next = self.trie.step(context, word)?;
        let node = self.trie.locate(context)?;
        let prior = self.game.prior_mass();
        let weights = (0..prior.len())
            .map(|w| {
                if self.trie.truth_at(next, w) == 0.0 {
                    return 0.0;
                }
                let speaker = self
                    .s1_word_row(node, w)
                    .into_iter()
                    .find(|(_, child, _)| *child == next)
                    .map_or(0.0, |(_, _, p)| p);
                prior[w] * speaker
            })
            .collect();
        Ok(Distribution::from_weights(self.game.world_ids(), weights))
    }

    fn ip_row(&self, world: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.game.inventory().len()];
        let mut stack = alloc::vec![(UtteranceTrie::ROOT, 1.0)];
        while let Some((node, mass)) = stack.pop() {
            if let Some(u) = self.trie.node(node).utterance() {
                out[u] = mass;
                continue;
            }
            for (_, child, p) in self.s1_word_row(node, world) {
                stack.push((child, mass * p));
            }
        }
        out
    }

    /// Utterance-level speaker built from word-level choices by the chain rule.
    pub fn speaker_utt_ip(&self, world: &str) -> Result<Distribution, QueryError> {
        let w = self.world(world)?;
        Ok(Distribution::from_weights(self.game.utterance_labels(), self.ip_row(w)))
    }

    /// Builds an utterance for `world` by taking the most probable next word
    /// until STOP. Ties go to the lexicographically smallest word.
    pub fn greedy_unroll(&self, world: &str) -> Result<Utterance, QueryError> {
        let w = self.world(world)?;
        let mut node = UtteranceTrie::ROOT;
        // every step goes one level deeper and leaves are STOP nodes
        for _ in 0..self.trie.max_depth() {
            let row = self.s1_word_row(node, w);
            let best = row.iter().map(|e| e.2).fold(0.0, f64::max);
            let (_, child, _) = row
                .into_iter()
                .find(|e| best - e.2 <= DEFAULT_TIE_EPSILON)
                .expect("every non-leaf trie node has a continuation");
            node = child;
            if let Some(u) = self.trie.node(node).utterance() {
                return Ok(self.game.inventory()[u].clone());
            }
        }
        unreachable!("greedy unrolling exceeded the trie depth")
    }

    /// Whether the literal listener recovers `world` from its greedily
    /// unrolled utterance with at least chance probability `1/|W|`.
    /// Requires a zero-cost game.
    pub fn weakly_informative(&self, world: &str) -> Result<bool, QueryError> {
        if !self.game.costs().is_zero() {
            return Err(QueryError::NonZeroCosts);
        }
        let w = self.world(world)?;
        let unrolled = self.greedy_unroll(world)?;
        let u = self.utterance(unrolled.words())?;
        let chance = 1.0 / self.game.worlds().len() as f64;
        Ok(self.l0_utt_row(u)[w] >= chance - CHANCE_SLACK)
    }
}

fn normalized(mut weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        for w in &mut weights {
            *w /= total;
        }
    }
    weights
}

/// Labels of `dist` whose probability is within `tie_epsilon` of the maximum.
pub fn optimal_utterances(dist: &Distribution, tie_epsilon: f64) -> Vec<String> {
    dist.near_max(tie_epsilon).into_iter().map(String::from).collect()
}
