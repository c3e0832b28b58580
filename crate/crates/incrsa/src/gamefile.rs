//! JSON game documents.
//!
//! ```json
//! {
//!   "worlds": [{"id": "R1", "attributes": {"colour": "red"}}],
//!   "vocabulary": ["dress", "red"],
//!   "utterances": [["dress"], ["red", "dress"]],
//!   "semantics": {"mode": "table", "true_pairs": [["red dress", "R1"]]},
//!   "costs": {"default_word": 0.0, "overrides": {}, "stop": 0.0},
//!   "prior": "uniform"
//! }
//! ```
//!
//! `costs` and `prior` may be omitted. STOP is implicit and may not be listed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use incrsa_core::{CostModel, GameError, Prior, ReferenceGame, Semantics, Utterance, Word, World};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed game document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("prior: expected \"uniform\" or a map of world masses, found \"{0}\"")]
    Prior(String),
    #[error("{0}")]
    Game(#[from] GameError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub worlds: Vec<WorldDoc>,
    pub vocabulary: Vec<String>,
    pub utterances: Vec<Vec<String>>,
    pub semantics: SemanticsDoc,
    #[serde(default)]
    pub costs: CostsDoc,
    #[serde(default)]
    pub prior: PriorDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum SemanticsDoc {
    Table {
        true_pairs: Vec<(String, String)>,
    },
    Lexical {
        lexicon: BTreeMap<String, BTreeMap<String, String>>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostsDoc {
    #[serde(default)]
    pub default_word: f64,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub stop: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriorDoc {
    Named(String),
    Explicit(BTreeMap<String, f64>),
}

impl Default for PriorDoc {
    fn default() -> Self {
        PriorDoc::Named("uniform".into())
    }
}

impl GameDoc {
    pub fn into_game(self) -> Result<ReferenceGame, LoadError> {
        let prior = match self.prior {
            PriorDoc::Named(name) if name == "uniform" => Prior::Uniform,
            PriorDoc::Named(other) => return Err(LoadError::Prior(other)),
            PriorDoc::Explicit(masses) => Prior::Explicit(masses),
        };
        let semantics = match self.semantics {
            SemanticsDoc::Table { true_pairs } => Semantics::table(true_pairs),
            SemanticsDoc::Lexical { lexicon } => Semantics::Lexical { lexicon },
        };
        let game = ReferenceGame::new(
            self.worlds
                .into_iter()
                .map(|w| World {
                    id: w.id,
                    attributes: w.attributes,
                })
                .collect(),
            self.vocabulary.into_iter().map(Word::new).collect(),
            self.utterances.into_iter().map(Utterance::from_words).collect(),
            semantics,
            CostModel {
                default_word: self.costs.default_word,
                overrides: self.costs.overrides,
                stop: self.costs.stop,
            },
            prior,
        )?;
        Ok(game)
    }

    pub fn from_game(game: &ReferenceGame) -> Self {
        let semantics = match game.semantics() {
            Semantics::Table { true_pairs } => SemanticsDoc::Table {
                true_pairs: true_pairs.iter().cloned().collect(),
            },
            Semantics::Lexical { lexicon } => SemanticsDoc::Lexical {
                lexicon: lexicon.clone(),
            },
        };
        let costs = game.costs();
        GameDoc {
            worlds: game
                .worlds()
                .iter()
                .map(|w| WorldDoc {
                    id: w.id.clone(),
                    attributes: w.attributes.clone(),
                })
                .collect(),
            vocabulary: game.vocabulary().iter().map(|w| w.as_str().to_string()).collect(),
            utterances: game
                .inventory()
                .iter()
                .map(|u| u.words().iter().map(|w| w.as_str().to_string()).collect())
                .collect(),
            semantics,
            costs: CostsDoc {
                default_word: costs.default_word,
                overrides: costs.overrides.clone(),
                stop: costs.stop,
            },
            prior: match game.prior() {
                Prior::Uniform => PriorDoc::default(),
                Prior::Explicit(m) => PriorDoc::Explicit(m.clone()),
            },
        }
    }
}

pub fn load_game(text: &str) -> Result<ReferenceGame, LoadError> {
    serde_json::from_str::<GameDoc>(text)?.into_game()
}

pub fn load_game_file(path: &Path) -> Result<ReferenceGame, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_game(&text)
}

pub fn to_json(game: &ReferenceGame) -> String {
    let mut out = serde_json::to_string_pretty(&GameDoc::from_game(game)).expect("game documents always serialize");
    out.push('\n');
    out
}
