//! Reference games: worlds, words, utterances, their truth conditions, costs
//! and the prior over worlds.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{GameError, QueryError};

/// Reserved surface of the utterance terminator.
pub const STOP: &str = "<stop>";

const PRIOR_TOLERANCE: f64 = 1e-9;

/// A single token. The terminator is an ordinary `Word` with surface [`STOP`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(String);

impl Word {
    pub fn new(surface: impl Into<String>) -> Self {
        Word(surface.into())
    }

    pub fn stop() -> Self {
        Word(STOP.to_string())
    }

    pub fn is_stop(&self) -> bool {
        self.0 == STOP
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn is_well_formed(&self) -> bool {
        !self.0.is_empty() && !self.0.chars().any(char::is_whitespace)
    }
}

impl AsRef<str> for Word {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

// Word orders and hashes exactly like its surface string.
impl core::borrow::Borrow<str> for Word {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word::new(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered sequence of non-terminator words. Inventories store utterances
/// without the trailing [`STOP`]; the trie adds it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Utterance(Vec<Word>);

impl Utterance {
    pub fn new(words: Vec<Word>) -> Self {
        Utterance(words)
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Utterance(words.into_iter().map(Word::new).collect())
    }

    /// Splits on whitespace.
    pub fn parse(text: &str) -> Self {
        Utterance::from_words(text.split_whitespace())
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Space-joined surface form, the key used by truth tables and output.
    pub fn label(&self) -> String {
        join_words(&self.0)
    }
}

impl fmt::Display for Utterance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub(crate) fn join_words<W: AsRef<str>>(words: &[W]) -> String {
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(w.as_ref());
    }
    out
}

/// A referent. Attributes are only consulted by lexical semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    pub id: String,
    pub attributes: BTreeMap<String, String>,
}

impl World {
    pub fn new(id: impl Into<String>) -> Self {
        World {
            id: id.into(),
            attributes: BTreeMap::new(),
        }
    }

    pub fn with_attributes<I, K, V>(id: impl Into<String>, attributes: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        World {
            id: id.into(),
            attributes: attributes.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }
}

/// Truth conditions of the inventory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Semantics {
    /// Explicit list of true `(utterance label, world id)` pairs; every other
    /// pair is false.
    Table { true_pairs: BTreeSet<(String, String)> },
    /// Each word requires the listed attribute values; an utterance is true of
    /// a world iff every one of its words is.
    Lexical {
        lexicon: BTreeMap<String, BTreeMap<String, String>>,
    },
}

impl Semantics {
    pub fn table<I, U, W>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (U, W)>,
        U: Into<String>,
        W: Into<String>,
    {
        Semantics::Table {
            true_pairs: pairs.into_iter().map(|(u, w)| (u.into(), w.into())).collect(),
        }
    }

    fn word_holds(lexicon: &BTreeMap<String, BTreeMap<String, String>>, word: &Word, world: &World) -> bool {
        lexicon
            .get(word.as_str())
            .is_some_and(|required| required.iter().all(|(k, v)| world.attributes.get(k) == Some(v)))
    }
}

/// Additive word costs. The cost of an utterance is the sum of the costs of
/// its words, plus the stop cost when the terminator is counted.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    pub default_word: f64,
    pub overrides: BTreeMap<String, f64>,
    pub stop: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::zero()
    }
}

impl CostModel {
    pub fn zero() -> Self {
        CostModel::per_word(0.0)
    }

    /// Every word costs `cost`; the terminator is free.
    pub fn per_word(cost: f64) -> Self {
        CostModel {
            default_word: cost,
            overrides: BTreeMap::new(),
            stop: 0.0,
        }
    }

    pub fn word_cost(&self, word: &str) -> f64 {
        if word == STOP {
            self.stop
        } else {
            self.overrides.get(word).copied().unwrap_or(self.default_word)
        }
    }

    pub fn utterance_cost<W: AsRef<str>>(&self, words: &[W], include_stop: bool) -> f64 {
        let words: f64 = words.iter().map(|w| self.word_cost(w.as_ref())).sum();
        if include_stop {
            words + self.stop
        } else {
            words
        }
    }

    pub fn is_zero(&self) -> bool {
        self.default_word == 0.0 && self.stop == 0.0 && self.overrides.values().all(|c| *c == 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum Prior {
    #[default]
    Uniform,
    /// Mass per world id; worlds left out get zero.
    Explicit(BTreeMap<String, f64>),
}

/// A validated, immutable reference game.
///
/// Truth values are expanded eagerly into a dense utterance-by-world table;
/// the original [`Semantics`] is kept so the game can be written back out.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceGame {
    worlds: Vec<World>,
    vocabulary: Vec<Word>,
    inventory: Vec<Utterance>,
    semantics: Semantics,
    costs: CostModel,
    prior: Prior,
    truth: Vec<Vec<bool>>,
    prior_mass: Vec<f64>,
}

impl ReferenceGame {
    /// Validates the parts and expands the semantics. `vocabulary` lists the
    /// ordinary words only; the terminator is implicit.
    pub fn new(
        worlds: Vec<World>,
        vocabulary: Vec<Word>,
        inventory: Vec<Utterance>,
        semantics: Semantics,
        costs: CostModel,
        prior: Prior,
    ) -> Result<Self, GameError> {
        if worlds.is_empty() {
            return Err(GameError::NoWorlds);
        }
        if inventory.is_empty() {
            return Err(GameError::EmptyInventory);
        }

        let mut world_ids = BTreeSet::new();
        for w in &worlds {
            if !world_ids.insert(w.id.as_str()) {
                return Err(GameError::DuplicateWorld(w.id.clone()));
            }
        }

        let mut vocab = BTreeSet::new();
        for w in &vocabulary {
            if w.is_stop() {
                return Err(GameError::ReservedStop { field: "vocabulary" });
            }
            if !w.is_well_formed() {
                return Err(GameError::MalformedWord(w.0.clone()));
            }
            if !vocab.insert(w.as_str()) {
                return Err(GameError::DuplicateWord(w.0.clone()));
            }
        }

        let mut seen = BTreeSet::new();
        for (index, u) in inventory.iter().enumerate() {
            if u.is_empty() {
                return Err(GameError::EmptyUtterance { index });
            }
            for w in u.words() {
                if w.is_stop() {
                    return Err(GameError::ReservedStop { field: "utterances" });
                }
                if !vocab.contains(w.as_str()) {
                    return Err(GameError::UnknownWord {
                        utterance: u.label(),
                        word: w.0.clone(),
                    });
                }
            }
            if !seen.insert(u) {
                return Err(GameError::DuplicateUtterance(u.label()));
            }
        }

        check_cost("default_word".to_string(), costs.default_word)?;
        check_cost("stop".to_string(), costs.stop)?;
        for (word, cost) in &costs.overrides {
            if !vocab.contains(word.as_str()) {
                return Err(GameError::UnknownCostWord(word.clone()));
            }
            check_cost(alloc::format!("overrides.{word}"), *cost)?;
        }

        let prior_mass = match &prior {
            Prior::Uniform => alloc::vec![1.0 / worlds.len() as f64; worlds.len()],
            Prior::Explicit(masses) => {
                for (id, m) in masses {
                    if !world_ids.contains(id.as_str()) {
                        return Err(GameError::UnknownPriorWorld(id.clone()));
                    }
                    if !m.is_finite() || *m < 0.0 {
                        return Err(GameError::InvalidPrior {
                            world: id.clone(),
                            value: *m,
                        });
                    }
                }
                let total: f64 = masses.values().sum();
                if (total - 1.0).abs() > PRIOR_TOLERANCE {
                    return Err(GameError::PriorNotNormalized(total));
                }
                worlds
                    .iter()
                    .map(|w| masses.get(&w.id).copied().unwrap_or(0.0))
                    .collect()
            }
        };

        let truth = expand_semantics(&semantics, &worlds, &vocabulary, &inventory, &vocab)?;

        Ok(ReferenceGame {
            worlds,
            vocabulary,
            inventory,
            semantics,
            costs,
            prior,
            truth,
            prior_mass,
        })
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn vocabulary(&self) -> &[Word] {
        &self.vocabulary
    }

    pub fn inventory(&self) -> &[Utterance] {
        &self.inventory
    }

    pub fn semantics(&self) -> &Semantics {
        &self.semantics
    }

    pub fn costs(&self) -> &CostModel {
        &self.costs
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    /// Prior mass per world, in world order.
    pub fn prior_mass(&self) -> &[f64] {
        &self.prior_mass
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w.id == id)
    }

    pub fn utterance_index<W: AsRef<str>>(&self, words: &[W]) -> Option<usize> {
        self.inventory
            .iter()
            .position(|u| u.len() == words.len() && u.words().iter().zip(words).all(|(a, b)| a.as_str() == b.as_ref()))
    }

    pub fn world_ids(&self) -> Vec<String> {
        self.worlds.iter().map(|w| w.id.clone()).collect()
    }

    pub fn utterance_labels(&self) -> Vec<String> {
        self.inventory.iter().map(Utterance::label).collect()
    }

    /// Truth of inventory utterance `utterance` in world `world`, by index.
    pub fn truth(&self, utterance: usize, world: usize) -> bool {
        self.truth[utterance][world]
    }

    /// Truth of an inventory utterance in a world, by surface and id.
    pub fn global_truth<W: AsRef<str>>(&self, words: &[W], world: &str) -> Result<bool, QueryError> {
        let u = self
            .utterance_index(words)
            .ok_or_else(|| QueryError::UnknownUtterance(join_words(words)))?;
        let w = self
            .world_index(world)
            .ok_or_else(|| QueryError::UnknownWorld(world.to_string()))?;
        Ok(self.truth[u][w])
    }

    pub fn utterance_cost<W: AsRef<str>>(&self, words: &[W], include_stop: bool) -> f64 {
        self.costs.utterance_cost(words, include_stop)
    }

    /// Length of the longest inventory utterance.
    pub fn max_utterance_len(&self) -> usize {
        self.inventory.iter().map(Utterance::len).max().unwrap_or(0)
    }
}

fn check_cost(field: String, value: f64) -> Result<(), GameError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(GameError::InvalidCost { field, value })
    }
}

fn expand_semantics(
    semantics: &Semantics,
    worlds: &[World],
    vocabulary: &[Word],
    inventory: &[Utterance],
    vocab: &BTreeSet<&str>,
) -> Result<Vec<Vec<bool>>, GameError> {
    match semantics {
        Semantics::Table { true_pairs } => {
            let mut truth = alloc::vec![alloc::vec![false; worlds.len()]; inventory.len()];
            for (u, w) in true_pairs {
                let ui = inventory
                    .iter()
                    .position(|x| &x.label() == u)
                    .ok_or_else(|| GameError::UnknownTableUtterance(u.clone()))?;
                let wi = worlds
                    .iter()
                    .position(|x| &x.id == w)
                    .ok_or_else(|| GameError::UnknownTableWorld(w.clone()))?;
                truth[ui][wi] = true;
            }
            Ok(truth)
        }
        Semantics::Lexical { lexicon } => {
            for word in lexicon.keys() {
                if !vocab.contains(word.as_str()) {
                    return Err(GameError::UnknownLexiconWord(word.clone()));
                }
            }
            if let Some(missing) = vocabulary.iter().find(|w| !lexicon.contains_key(w.as_str())) {
                return Err(GameError::MissingLexiconEntry(missing.0.clone()));
            }
            Ok(inventory
                .iter()
                .map(|u| {
                    worlds
                        .iter()
                        .map(|world| u.words().iter().all(|w| Semantics::word_holds(lexicon, w, world)))
                        .collect()
                })
                .collect())
        }
    }
}
