//! Referring-expression experiment over attribute-coded corpus trials.
//!
//! Entities and descriptions are both sets of `name:value` attributes. Each
//! attribute is one word; a word is true of an entity iff the entity carries
//! exactly that attribute value. Per domain, every attested description of at
//! most two words becomes an inventory utterance, and each trial is turned
//! into a game over its own entities with the inventory members compatible
//! with at least one of them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::agents::{optimal_utterances, RsaModel};
use crate::error::GameError;
use crate::model::{CostModel, Prior, ReferenceGame, Semantics, Utterance, Word, World};

/// Longest attested description admitted to the inventory.
pub const MAX_INVENTORY_WORDS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Domain {
    Furniture,
    People,
}

impl Domain {
    /// Order used to linearize an unordered attribute set: modifiers, then
    /// the head noun, then other properties, then position.
    pub fn precedence(self) -> &'static [&'static str] {
        match self {
            Domain::Furniture => &["size", "colour", "orientation", "type", "x-dimension", "y-dimension"],
            Domain::People => &[
                "age",
                "hairColour",
                "orientation",
                "type",
                "hasHair",
                "hasBeard",
                "hasGlasses",
                "hasShirt",
                "hasSuit",
                "hasTie",
                "x-dimension",
                "y-dimension",
            ],
        }
    }

    /// Sorts attributes by [`Domain::precedence`]; attributes outside the
    /// list follow in name order. The sort is stable.
    pub fn linearize(self, attributes: &mut [AttributeWord]) {
        let order = self.precedence();
        let rank = |a: &AttributeWord| order.iter().position(|n| *n == a.name).unwrap_or(order.len());
        attributes.sort_by(|a, b| {
            rank(a).cmp(&rank(b)).then_with(|| {
                if rank(a) == order.len() {
                    a.name.cmp(&b.name)
                } else {
                    core::cmp::Ordering::Equal
                }
            })
        });
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Furniture => "furniture",
            Domain::People => "people",
        })
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "furniture" => Ok(Domain::Furniture),
            "people" => Ok(Domain::People),
            other => Err(alloc::format!(
                "unknown domain '{other}' (expected furniture or people)"
            )),
        }
    }
}

/// One attribute-value pair used as a word, rendered `name:value`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "String", try_from = "String"))]
pub struct AttributeWord {
    pub name: String,
    pub value: String,
}

impl AttributeWord {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        AttributeWord {
            name: name.into(),
            value: value.into(),
        }
    }

    /// Whitespace inside values becomes `_` so the token stays one word.
    pub fn token(&self) -> String {
        let mut out = String::with_capacity(self.name.len() + self.value.len() + 1);
        for c in self.name.chars().chain(core::iter::once(':')).chain(self.value.chars()) {
            out.push(if c.is_whitespace() { '_' } else { c });
        }
        out
    }

    pub fn holds_for(&self, entity: &TunaEntity) -> bool {
        entity.attributes.get(&self.name) == Some(&self.value)
    }
}

impl fmt::Display for AttributeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for AttributeWord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((name, value)) if !name.is_empty() && !value.is_empty() => Ok(AttributeWord::new(name, value)),
            _ => Err(alloc::format!("'{s}' is not a name:value attribute")),
        }
    }
}

impl From<AttributeWord> for String {
    fn from(a: AttributeWord) -> String {
        a.token()
    }
}

impl TryFrom<String> for AttributeWord {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TunaEntity {
    pub id: String,
    pub is_target: bool,
    pub attributes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TunaTrial {
    pub id: String,
    pub domain: Domain,
    pub entities: Vec<TunaEntity>,
    /// Attested description, in linear order.
    pub description: Vec<AttributeWord>,
}

impl TunaTrial {
    pub fn targets(&self) -> impl Iterator<Item = &TunaEntity> + '_ {
        self.entities.iter().filter(|e| e.is_target)
    }

    pub fn target(&self) -> Option<&TunaEntity> {
        let mut targets = self.targets();
        match (targets.next(), targets.next()) {
            (Some(t), None) => Some(t),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), TunaError> {
        let targets = self.targets().count();
        if targets != 1 {
            return Err(TunaError::TargetCount {
                trial: self.id.clone(),
                targets,
            });
        }
        if self.description.is_empty() {
            return Err(TunaError::EmptyDescription(self.id.clone()));
        }
        Ok(())
    }

    pub fn description_utterance(&self) -> Utterance {
        Utterance::new(self.description.iter().map(|a| Word::new(a.token())).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TunaError {
    TargetCount {
        trial: String,
        targets: usize,
    },
    EmptyDescription(String),
    /// No inventory utterance is true of any entity in the trial.
    NoCompatibleUtterance(String),
    /// Every compatible utterance is false of the target.
    UndescribableTarget(String),
    Game {
        trial: String,
        source: GameError,
    },
}

impl fmt::Display for TunaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TunaError::TargetCount { trial, targets } => {
                write!(f, "trial {trial}: expected exactly one target, found {targets}")
            }
            TunaError::EmptyDescription(t) => write!(f, "trial {t}: empty description"),
            TunaError::NoCompatibleUtterance(t) => {
                write!(f, "trial {t}: no inventory utterance is true of any entity")
            }
            TunaError::UndescribableTarget(t) => {
                write!(f, "trial {t}: no inventory utterance is true of the target")
            }
            TunaError::Game { trial, source } => write!(f, "trial {trial}: {source}"),
        }
    }
}

impl core::error::Error for TunaError {}

/// Distinct attested descriptions of at most [`MAX_INVENTORY_WORDS`] words,
/// in order of first attestation.
pub fn build_inventory(trials: &[TunaTrial]) -> Vec<Vec<AttributeWord>> {
    let mut seen = BTreeSet::new();
    let mut inventory = Vec::new();
    for trial in trials {
        let d = &trial.description;
        if d.is_empty() || d.len() > MAX_INVENTORY_WORDS {
            continue;
        }
        if seen.insert(d.clone()) {
            inventory.push(d.clone());
        }
    }
    inventory
}

/// The trial as a game: entities are worlds, the compatible inventory members
/// are the utterances, every word costs 1 and STOP is free.
pub fn build_trial_game(trial: &TunaTrial, inventory: &[Vec<AttributeWord>]) -> Result<ReferenceGame, TunaError> {
    let compatible: Vec<&Vec<AttributeWord>> = inventory
        .iter()
        .filter(|u| trial.entities.iter().any(|e| u.iter().all(|a| a.holds_for(e))))
        .collect();
    if compatible.is_empty() {
        return Err(TunaError::NoCompatibleUtterance(trial.id.clone()));
    }

    let mut lexicon: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut vocabulary = Vec::new();
    for a in compatible.iter().flat_map(|u| u.iter()) {
        if let alloc::collections::btree_map::Entry::Vacant(slot) = lexicon.entry(a.token()) {
            vocabulary.push(Word::new(slot.key().clone()));
            slot.insert([(a.name.clone(), a.value.clone())].into());
        }
    }

    let worlds = trial
        .entities
        .iter()
        .map(|e| World {
            id: e.id.clone(),
            attributes: e.attributes.clone(),
        })
        .collect();
    let utterances = compatible
        .iter()
        .map(|u| Utterance::new(u.iter().map(|a| Word::new(a.token())).collect()))
        .collect();

    ReferenceGame::new(
        worlds,
        vocabulary,
        utterances,
        Semantics::Lexical { lexicon },
        CostModel::per_word(1.0),
        Prior::Uniform,
    )
    .map_err(|source| TunaError::Game {
        trial: trial.id.clone(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialOutcome {
    pub trial: String,
    pub target: String,
    pub gp_optimal: Vec<String>,
    pub ip_optimal: Vec<String>,
}

impl TrialOutcome {
    pub fn gp_two_word(&self) -> usize {
        count_two_word(&self.gp_optimal)
    }

    pub fn ip_two_word(&self) -> usize {
        count_two_word(&self.ip_optimal)
    }
}

fn count_two_word(labels: &[String]) -> usize {
    labels.iter().filter(|l| l.split(' ').count() == 2).count()
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentReport {
    pub domain: Domain,
    pub trial_count: usize,
    pub gp_two_word_optima: usize,
    pub ip_two_word_optima: usize,
    pub trials: Vec<TrialOutcome>,
    /// Trials skipped, with the reason.
    pub unusable: Vec<(String, String)>,
}

impl ExperimentReport {
    /// Aggregates per-trial outcomes; the totals do not depend on their order.
    pub fn from_outcomes(domain: Domain, trials: Vec<TrialOutcome>, unusable: Vec<(String, String)>) -> Self {
        ExperimentReport {
            domain,
            trial_count: trials.len(),
            gp_two_word_optima: trials.iter().map(TrialOutcome::gp_two_word).sum(),
            ip_two_word_optima: trials.iter().map(TrialOutcome::ip_two_word).sum(),
            trials,
            unusable,
        }
    }
}

/// Optimal sets of both utterance-level speakers for one trial's target.
pub fn evaluate_trial(
    trial: &TunaTrial,
    inventory: &[Vec<AttributeWord>],
    tie_epsilon: f64,
) -> Result<TrialOutcome, TunaError> {
    trial.validate()?;
    let target = trial.target().expect("validated trial has one target").id.clone();
    let game = build_trial_game(trial, inventory)?;
    let t = game.world_index(&target).expect("target is a world of its own game");
    if !(0..game.inventory().len()).any(|u| game.truth(u, t)) {
        return Err(TunaError::UndescribableTarget(trial.id.clone()));
    }
    let model = RsaModel::new(game);
    let gp = model
        .pragmatic_speaker_gp(&target)
        .expect("target is a world of its own game");
    let ip = model
        .speaker_utt_ip(&target)
        .expect("target is a world of its own game");
    Ok(TrialOutcome {
        trial: trial.id.clone(),
        target,
        gp_optimal: optimal_utterances(&gp, tie_epsilon),
        ip_optimal: optimal_utterances(&ip, tie_epsilon),
    })
}

/// Runs every trial of `domain`; trials from other domains are ignored and
/// trials that cannot be turned into a game are listed as unusable.
pub fn run_experiment(
    domain: Domain,
    trials: &[TunaTrial],
    inventory: &[Vec<AttributeWord>],
    tie_epsilon: f64,
) -> ExperimentReport {
    let mut outcomes = Vec::new();
    let mut unusable = Vec::new();
    for trial in trials.iter().filter(|t| t.domain == domain) {
        match evaluate_trial(trial, inventory, tie_epsilon) {
            Ok(o) => outcomes.push(o),
            Err(e) => unusable.push((trial.id.clone(), e.to_string())),
        }
    }
    ExperimentReport::from_outcomes(domain, outcomes, unusable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn entity(id: &str, target: bool, attrs: &[(&str, &str)]) -> TunaEntity {
        TunaEntity {
            id: id.into(),
            is_target: target,
            attributes: attrs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    fn desc(xs: &[&str]) -> Vec<AttributeWord> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn trial(id: &str, entities: Vec<TunaEntity>, d: &[&str]) -> TunaTrial {
        TunaTrial {
            id: id.into(),
            domain: Domain::Furniture,
            entities,
            description: desc(d),
        }
    }

    fn grey_desk_scene() -> Vec<TunaEntity> {
        vec![
            entity(
                "t",
                true,
                &[
                    ("type", "desk"),
                    ("colour", "grey"),
                    ("x-dimension", "5"),
                    ("y-dimension", "2"),
                ],
            ),
            entity(
                "d1",
                false,
                &[
                    ("type", "desk"),
                    ("colour", "blue"),
                    ("x-dimension", "1"),
                    ("y-dimension", "1"),
                ],
            ),
            entity(
                "d2",
                false,
                &[
                    ("type", "desk"),
                    ("colour", "red"),
                    ("x-dimension", "3"),
                    ("y-dimension", "3"),
                ],
            ),
            entity(
                "d3",
                false,
                &[
                    ("type", "chair"),
                    ("colour", "green"),
                    ("x-dimension", "2"),
                    ("y-dimension", "1"),
                ],
            ),
        ]
    }

    #[test]
    fn inventory_dedups_and_drops_long_descriptions() {
        let scene = grey_desk_scene();
        let trials = vec![
            trial("a", scene.clone(), &["colour:grey", "type:desk"]),
            trial("b", scene.clone(), &["colour:grey"]),
            trial("c", scene.clone(), &["colour:grey", "type:desk"]),
            trial("d", scene, &["size:large", "colour:grey", "type:desk"]),
        ];
        let inv = build_inventory(&trials);
        assert_eq!(inv, vec![desc(&["colour:grey", "type:desk"]), desc(&["colour:grey"])]);
    }

    #[test]
    fn trial_game_keeps_only_compatible_utterances() {
        let t = trial("a", grey_desk_scene(), &["colour:grey"]);
        let inv = vec![
            desc(&["colour:grey"]),
            desc(&["colour:grey", "type:desk"]),
            desc(&["colour:purple"]),
        ];
        let game = build_trial_game(&t, &inv).unwrap();
        assert_eq!(game.utterance_labels(), ["colour:grey", "colour:grey type:desk"]);
        assert_eq!(game.costs(), &CostModel::per_word(1.0));
        let m = RsaModel::new(game);
        for u in [&["colour:grey"][..], &["colour:grey", "type:desk"][..]] {
            assert_eq!(m.literal_listener_utt(u).unwrap().prob("t"), 1.0);
        }
    }

    #[test]
    fn no_compatible_utterance() {
        let t = trial("a", grey_desk_scene(), &["colour:grey"]);
        let inv = vec![desc(&["colour:purple"])];
        assert_eq!(
            build_trial_game(&t, &inv),
            Err(TunaError::NoCompatibleUtterance("a".into()))
        );
    }

    #[test]
    fn grey_desk_worked_example() {
        // "grey" and "grey desk" both pick out the target; position needs two words.
        let t = trial("a", grey_desk_scene(), &["colour:grey", "type:desk"]);
        let inv = vec![
            desc(&["colour:grey"]),
            desc(&["colour:grey", "type:desk"]),
            desc(&["x-dimension:5", "y-dimension:2"]),
            desc(&["type:desk"]),
        ];
        let out = evaluate_trial(&t, &inv, 1e-9).unwrap();
        assert_eq!(out.gp_optimal, ["colour:grey"]);
        assert_eq!(out.ip_optimal, ["x-dimension:5 y-dimension:2"]);
        assert_eq!((out.gp_two_word(), out.ip_two_word()), (0, 1));
    }

    #[test]
    fn undescribable_target_is_unusable() {
        let t = trial("a", grey_desk_scene(), &["colour:grey"]);
        let inv = vec![desc(&["colour:blue"])];
        assert_eq!(
            evaluate_trial(&t, &inv, 1e-9),
            Err(TunaError::UndescribableTarget("a".into()))
        );
    }

    #[test]
    fn multi_target_trials_are_unusable() {
        let mut scene = grey_desk_scene();
        scene[1].is_target = true;
        let t = trial("plural", scene, &["type:desk"]);
        let trials = [t];
        let report = run_experiment(Domain::Furniture, &trials, &build_inventory(&trials), 1e-9);
        assert_eq!(report.trial_count, 0);
        assert_eq!(report.unusable.len(), 1);
    }

    #[test]
    fn linearization_follows_precedence() {
        let mut attrs = desc(&[
            "type:desk",
            "x-dimension:1",
            "colour:grey",
            "zzz:1",
            "aaa:2",
            "size:large",
        ]);
        Domain::Furniture.linearize(&mut attrs);
        let tokens: Vec<String> = attrs.iter().map(AttributeWord::token).collect();
        assert_eq!(
            tokens,
            [
                "size:large",
                "colour:grey",
                "type:desk",
                "x-dimension:1",
                "aaa:2",
                "zzz:1"
            ]
        );
    }

    #[test]
    fn attribute_word_parsing() {
        let a: AttributeWord = "colour:dark grey".parse().unwrap();
        assert_eq!(a.token(), "colour:dark_grey");
        assert!("colour".parse::<AttributeWord>().is_err());
        assert!(":grey".parse::<AttributeWord>().is_err());
        assert_eq!("x:1:2".parse::<AttributeWord>().unwrap().value, "1:2");
    }
}
