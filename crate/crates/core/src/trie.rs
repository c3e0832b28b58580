//! Prefix trie over the utterance inventory and the extension-counting
//! incremental semantics defined on it.
//!
//! Every inventory utterance is a path from the root ending in a [`STOP`](crate::STOP)
//! leaf. Each node records, per world, how many complete utterances passing
//! through it are true in that world, and how many are true of at least one
//! world. The incremental truth of a prefix in a world is the ratio of the two.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::QueryError;
#[cfg(test)]
use crate::model::STOP;
use crate::model::{join_words, ReferenceGame, Word};

/// Index of a node inside an [`UtteranceTrie`].
pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct TrieNode {
    children: BTreeMap<Word, NodeId>,
    counts: Vec<u32>,
    satisfiable: u32,
    utterance: Option<usize>,
    depth: usize,
}

impl TrieNode {
    fn new(worlds: usize, depth: usize) -> Self {
        TrieNode {
            children: BTreeMap::new(),
            counts: alloc::vec![0; worlds],
            satisfiable: 0,
            utterance: None,
            depth,
        }
    }

    /// Children in lexicographic word order.
    pub fn children(&self) -> impl Iterator<Item = (&Word, NodeId)> + '_ {
        self.children.iter().map(|(w, id)| (w, *id))
    }

    /// Inventory index of the utterance this STOP leaf completes.
    pub fn utterance(&self) -> Option<usize> {
        self.utterance
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of words on the path from the root, STOP included.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Complete extensions of this prefix true in `world`.
    pub fn extension_count(&self, world: usize) -> u32 {
        self.counts[world]
    }

    /// Complete extensions of this prefix true of at least one world.
    pub fn satisfiable_extensions(&self) -> u32 {
        self.satisfiable
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UtteranceTrie {
    nodes: Vec<TrieNode>,
    world_count: usize,
}

impl UtteranceTrie {
    pub const ROOT: NodeId = 0;

    pub fn build(game: &ReferenceGame) -> Self {
        let worlds = game.worlds().len();
        let mut nodes = alloc::vec![TrieNode::new(worlds, 0)];
        for (index, utterance) in game.inventory().iter().enumerate() {
            let truths: Vec<bool> = (0..worlds).map(|w| game.truth(index, w)).collect();
            let satisfiable = truths.iter().any(|t| *t);

            let mut path = alloc::vec![Self::ROOT];
            let mut node = Self::ROOT;
            let stop = Word::stop();
            for word in utterance.words().iter().chain(core::iter::once(&stop)) {
                node = match nodes[node].children.get(word) {
                    Some(&child) => child,
                    None => {
                        let child = nodes.len();
                        let depth = nodes[node].depth + 1;
                        nodes.push(TrieNode::new(worlds, depth));
                        nodes[node].children.insert(word.clone(), child);
                        child
                    }
                };
                path.push(node);
            }
            nodes[node].utterance = Some(index);

            for &id in &path {
                let n = &mut nodes[id];
                for (count, truth) in n.counts.iter_mut().zip(&truths) {
                    *count += u32::from(*truth);
                }
                n.satisfiable += u32::from(satisfiable);
            }
        }
        UtteranceTrie {
            nodes,
            world_count: worlds,
        }
    }

    pub fn node(&self, id: NodeId) -> &TrieNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn child(&self, node: NodeId, word: &str) -> Option<NodeId> {
        self.nodes[node].children.get(word).copied()
    }

    /// Follows `prefix` (which may end in [`STOP`](crate::STOP)) from the root.
    pub fn locate<W: AsRef<str>>(&self, prefix: &[W]) -> Result<NodeId, QueryError> {
        let mut node = Self::ROOT;
        for w in prefix {
            node = self.child(node, w.as_ref()).ok_or_else(|| QueryError::UnknownPrefix {
                prefix: join_words(prefix),
            })?;
        }
        Ok(node)
    }

    /// Words (STOP included) that can follow `prefix` on the way to some
    /// inventory utterance, in lexicographic order.
    pub fn continuations<W: AsRef<str>>(&self, prefix: &[W]) -> Result<Vec<Word>, QueryError> {
        let node = self.locate(prefix)?;
        Ok(self.nodes[node].children.keys().cloned().collect())
    }

    /// Locates `context + word`, reporting the valid continuations on failure.
    pub fn step<W: AsRef<str>>(&self, context: &[W], word: &str) -> Result<NodeId, QueryError> {
        let node = self.locate(context)?;
        self.child(node, word).ok_or_else(|| QueryError::InvalidContinuation {
            context: join_words(context),
            word: word.to_string(),
            valid: self.nodes[node]
                .children
                .keys()
                .map(|w| w.as_str().to_string())
                .collect::<Vec<String>>(),
        })
    }

    /// Incremental truth of the prefix at `node` in `world`. Zero when no
    /// extension of the prefix is true of any world.
    pub fn truth_at(&self, node: NodeId, world: usize) -> f64 {
        let n = &self.nodes[node];
        if n.satisfiable == 0 {
            0.0
        } else {
            f64::from(n.counts[world]) / f64::from(n.satisfiable)
        }
    }

    pub fn incremental_truth<W: AsRef<str>>(&self, prefix: &[W], world: usize) -> Result<f64, QueryError> {
        Ok(self.truth_at(self.locate(prefix)?, world))
    }

    /// Depth of the deepest STOP leaf, i.e. longest utterance length + 1.
    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::builtin_scenario;

    fn fig2() -> (ReferenceGame, UtteranceTrie) {
        let game = builtin_scenario("fig2").unwrap().game;
        let trie = UtteranceTrie::build(&game);
        (game, trie)
    }

    #[test]
    fn fig2_red_node_counts() {
        let (_, trie) = fig2();
        let root: Vec<&str> = trie
            .node(UtteranceTrie::ROOT)
            .children()
            .map(|(w, _)| w.as_str())
            .collect();
        assert_eq!(root, ["dress", "red"]);
        let red = trie.node(trie.locate(&["red"]).unwrap());
        assert_eq!(
            [red.extension_count(0), red.extension_count(1), red.extension_count(2)],
            [2, 0, 1]
        );
        assert_eq!(red.satisfiable_extensions(), 2);
    }

    #[test]
    fn fig2_incremental_truths() {
        let (_, trie) = fig2();
        assert_eq!(trie.incremental_truth(&["red"], 2).unwrap(), 0.5);
        assert_eq!(trie.incremental_truth(&["red"], 0).unwrap(), 1.0);
        assert_eq!(trie.incremental_truth(&["red"], 1).unwrap(), 0.0);
        assert_eq!(trie.incremental_truth(&["red", "dress", STOP], 0).unwrap(), 1.0);
        assert_eq!(trie.incremental_truth(&["red", "dress", STOP], 2).unwrap(), 0.0);
    }

    #[test]
    fn fig2_continuations() {
        let (_, trie) = fig2();
        let words = |p: &[&str]| -> Vec<String> {
            trie.continuations(p)
                .unwrap()
                .into_iter()
                .map(|w| w.as_str().to_string())
                .collect()
        };
        assert_eq!(words(&[]), ["dress", "red"]);
        assert_eq!(words(&["dress"]), [STOP]);
        assert_eq!(words(&["red"]), ["dress", "object"]);
        assert!(matches!(
            trie.continuations(&["object"]),
            Err(QueryError::UnknownPrefix { .. })
        ));
    }

    #[test]
    fn spanish_vestido_can_stop_or_continue() {
        let game = builtin_scenario("spanish-vestido").unwrap().game;
        let trie = UtteranceTrie::build(&game);
        let conts = trie.continuations(&["vestido"]).unwrap();
        assert!(conts.iter().any(Word::is_stop));
        assert!(conts.iter().any(|w| w.as_str() == "rojo"));
    }

    #[test]
    fn single_utterance_trie() {
        use crate::model::{CostModel, Prior, Semantics, Utterance, World};
        let game = ReferenceGame::new(
            alloc::vec![World::new("w")],
            alloc::vec![Word::new("a")],
            alloc::vec![Utterance::parse("a")],
            Semantics::table([("a", "w")]),
            CostModel::zero(),
            Prior::Uniform,
        )
        .unwrap();
        let trie = UtteranceTrie::build(&game);
        let a = trie.node(trie.locate(&["a"]).unwrap());
        assert_eq!((a.extension_count(0), a.satisfiable_extensions()), (1, 1));
        assert_eq!(trie.max_depth(), 2);
    }

    #[test]
    fn unsatisfiable_prefix_has_zero_truth() {
        use crate::model::{CostModel, Prior, Semantics, Utterance, World};
        let game = ReferenceGame::new(
            alloc::vec![World::new("w1"), World::new("w2")],
            alloc::vec![Word::new("a"), Word::new("b")],
            alloc::vec![Utterance::parse("a"), Utterance::parse("b a")],
            Semantics::table([("a", "w1")]),
            CostModel::zero(),
            Prior::Uniform,
        )
        .unwrap();
        let trie = UtteranceTrie::build(&game);
        assert_eq!(trie.incremental_truth(&["b"], 0).unwrap(), 0.0);
        assert_eq!(trie.incremental_truth(&["b"], 1).unwrap(), 0.0);
    }
}
