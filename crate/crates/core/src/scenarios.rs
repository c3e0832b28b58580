//! Built-in worked examples paired with their published agent tables.
//!
//! * `fig2`: red dress, blue dress, red hat; utterances *dress*, *red dress*,
//!   *red object*; zero costs.
//! * `english-dress` / `spanish-vestido`: red dress vs. blue hat with
//!   pre-nominal and post-nominal colour adjectives; every word costs 1, STOP
//!   is free.
//! * `sedivy-tall`: tall cup, tall pitcher, short cup, key; contrastive
//!   *tall* heard before the noun.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::agents::RsaModel;
use crate::dist::Distribution;
use crate::error::QueryError;
use crate::model::{join_words, CostModel, Prior, ReferenceGame, Semantics, Utterance, Word, World, STOP};

/// Tolerance on cells printed to two decimals.
pub const PRINTED_TOLERANCE: f64 = 0.005;

/// One agent evaluated at one conditioning input.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    LiteralListenerUtt(Utterance),
    SpeakerGp(String),
    PragmaticListenerUtt(Utterance),
    LiteralListenerWord { context: Vec<Word>, word: Word },
    SpeakerWord { context: Vec<Word>, world: String },
    PragmaticListenerWord { context: Vec<Word>, word: Word },
    SpeakerIp(String),
}

impl Probe {
    pub fn agent(&self) -> &'static str {
        match self {
            Probe::LiteralListenerUtt(_) => "L0-UTT",
            Probe::SpeakerGp(_) => "S1-UTT-GP",
            Probe::PragmaticListenerUtt(_) => "L1-UTT",
            Probe::LiteralListenerWord { .. } => "L0-WORD",
            Probe::SpeakerWord { .. } => "S1-WORD",
            Probe::PragmaticListenerWord { .. } => "L1-WORD",
            Probe::SpeakerIp(_) => "S1-UTT-IP",
        }
    }

    pub fn evaluate(&self, model: &RsaModel) -> Result<Distribution, QueryError> {
        match self {
            Probe::LiteralListenerUtt(u) => model.literal_listener_utt(u.words()),
            Probe::SpeakerGp(w) => model.pragmatic_speaker_gp(w),
            Probe::PragmaticListenerUtt(u) => model.pragmatic_listener_utt(u.words()),
            Probe::LiteralListenerWord { context, word } => model.literal_listener_word(context, word.as_str()),
            Probe::SpeakerWord { context, world } => model.pragmatic_speaker_word(context, world),
            Probe::PragmaticListenerWord { context, word } => model.pragmatic_listener_word(context, word.as_str()),
            Probe::SpeakerIp(w) => model.speaker_utt_ip(w),
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::LiteralListenerUtt(u) | Probe::PragmaticListenerUtt(u) => {
                write!(f, "{}(· | {})", self.agent(), u)
            }
            Probe::SpeakerGp(w) | Probe::SpeakerIp(w) => write!(f, "{}(· | {})", self.agent(), w),
            Probe::LiteralListenerWord { context, word } | Probe::PragmaticListenerWord { context, word } => {
                write!(f, "{}(· | [{}], {})", self.agent(), join_words(context), word)
            }
            Probe::SpeakerWord { context, world } => {
                write!(f, "{}(· | [{}], {})", self.agent(), join_words(context), world)
            }
        }
    }
}

/// Expected distribution for one probe. Labels not listed are expected to
/// carry zero mass.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedRow {
    pub probe: Probe,
    pub cells: Vec<(String, f64)>,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioFixture {
    pub name: String,
    pub game: ReferenceGame,
    pub expected: Vec<ExpectedRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowReport {
    pub probe: String,
    pub tolerance: f64,
    /// `(label, expected, computed)` over the union of expected and computed labels.
    pub cells: Vec<(String, f64, f64)>,
    pub max_deviation: f64,
    pub error: Option<String>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioReport {
    pub name: String,
    pub rows: Vec<RowReport>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(RowReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }
}

/// Evaluates every expected row. Failures, including query errors, are
/// recorded in the report.
pub fn run_scenario(fixture: &ScenarioFixture) -> ScenarioReport {
    let model = RsaModel::new(fixture.game.clone());
    let rows = fixture
        .expected
        .iter()
        .map(|row| {
            let probe = row.probe.to_string();
            match row.probe.evaluate(&model) {
                Ok(dist) => {
                    let mut cells: Vec<(String, f64, f64)> =
                        row.cells.iter().map(|(l, p)| (l.clone(), *p, dist.prob(l))).collect();
                    for (label, p) in dist.iter() {
                        if !row.cells.iter().any(|(l, _)| l == label) {
                            cells.push((label.to_string(), 0.0, p));
                        }
                    }
                    RowReport {
                        probe,
                        tolerance: row.tolerance,
                        max_deviation: dist.max_abs_deviation(&row.cells),
                        cells,
                        error: None,
                    }
                }
                Err(e) => RowReport {
                    probe,
                    tolerance: row.tolerance,
                    cells: Vec::new(),
                    max_deviation: f64::INFINITY,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    ScenarioReport {
        name: fixture.name.clone(),
        rows,
    }
}

pub const SCENARIO_NAMES: [&str; 4] = ["fig2", "english-dress", "spanish-vestido", "sedivy-tall"];

pub fn builtin_scenarios() -> Vec<ScenarioFixture> {
    vec![fig2(), english_dress(), spanish_vestido(), sedivy_tall()]
}

pub fn builtin_scenario(name: &str) -> Option<ScenarioFixture> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

fn words(xs: &[&str]) -> Vec<Word> {
    xs.iter().map(|w| Word::new(*w)).collect()
}

fn cells(xs: &[(&str, f64)]) -> Vec<(String, f64)> {
    xs.iter().map(|(l, p)| (l.to_string(), *p)).collect()
}

fn row(probe: Probe, xs: &[(&str, f64)]) -> ExpectedRow {
    ExpectedRow {
        probe,
        cells: cells(xs),
        tolerance: PRINTED_TOLERANCE,
    }
}

fn lexicon(entries: &[(&str, &str, &str)]) -> Semantics {
    let mut lexicon: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (word, attr, value) in entries {
        lexicon
            .entry(word.to_string())
            .or_default()
            .insert(attr.to_string(), value.to_string());
    }
    Semantics::Lexical { lexicon }
}

fn fig2() -> ScenarioFixture {
    let game = ReferenceGame::new(
        vec![World::new("R1"), World::new("R2"), World::new("R3")],
        words(&["dress", "red", "object"]),
        vec![
            Utterance::parse("dress"),
            Utterance::parse("red dress"),
            Utterance::parse("red object"),
        ],
        Semantics::table([
            ("dress", "R1"),
            ("dress", "R2"),
            ("red dress", "R1"),
            ("red object", "R1"),
            ("red object", "R3"),
        ]),
        CostModel::zero(),
        Prior::Uniform,
    )
    .expect("fig2 game is valid");

    let utt = Utterance::parse;
    let step = |ctx: &[&str], world: &str| Probe::SpeakerWord {
        context: words(ctx),
        world: world.to_string(),
    };
    let expected = vec![
        row(
            Probe::LiteralListenerUtt(utt("dress")),
            &[("R1", 0.5), ("R2", 0.5), ("R3", 0.0)],
        ),
        row(
            Probe::LiteralListenerUtt(utt("red dress")),
            &[("R1", 1.0), ("R2", 0.0), ("R3", 0.0)],
        ),
        row(
            Probe::LiteralListenerUtt(utt("red object")),
            &[("R1", 0.5), ("R2", 0.0), ("R3", 0.5)],
        ),
        row(
            Probe::SpeakerGp("R1".into()),
            &[("dress", 0.25), ("red dress", 0.5), ("red object", 0.25)],
        ),
        row(
            Probe::SpeakerGp("R2".into()),
            &[("dress", 1.0), ("red dress", 0.0), ("red object", 0.0)],
        ),
        row(
            Probe::SpeakerGp("R3".into()),
            &[("dress", 0.0), ("red dress", 0.0), ("red object", 1.0)],
        ),
        row(
            Probe::PragmaticListenerUtt(utt("dress")),
            &[("R1", 0.2), ("R2", 0.8), ("R3", 0.0)],
        ),
        row(
            Probe::PragmaticListenerUtt(utt("red dress")),
            &[("R1", 1.0), ("R2", 0.0), ("R3", 0.0)],
        ),
        row(
            Probe::PragmaticListenerUtt(utt("red object")),
            &[("R1", 0.2), ("R2", 0.0), ("R3", 0.8)],
        ),
        row(step(&[], "R1"), &[("dress", 0.43), ("red", 0.57)]),
        row(step(&["red"], "R1"), &[("dress", 0.67), ("object", 0.33)]),
        row(step(&[], "R2"), &[("dress", 1.0), ("red", 0.0)]),
        row(step(&["red"], "R2"), &[("dress", 0.5), ("object", 0.5)]),
        row(step(&[], "R3"), &[("dress", 0.0), ("red", 1.0)]),
        row(step(&["red"], "R3"), &[("dress", 0.0), ("object", 1.0)]),
        row(
            Probe::PragmaticListenerWord {
                context: vec![],
                word: Word::new("red"),
            },
            &[("R1", 0.36), ("R2", 0.0), ("R3", 0.64)],
        ),
        // The printed R1 row is 0.01 off the exact 3/7, 8/21, 4/21.
        ExpectedRow {
            probe: Probe::SpeakerIp("R1".into()),
            cells: cells(&[("dress", 0.42), ("red dress", 0.38), ("red object", 0.20)]),
            tolerance: 0.02,
        },
        row(
            Probe::SpeakerIp("R2".into()),
            &[("dress", 1.0), ("red dress", 0.0), ("red object", 0.0)],
        ),
        row(
            Probe::SpeakerIp("R3".into()),
            &[("dress", 0.0), ("red dress", 0.0), ("red object", 1.0)],
        ),
    ];
    ScenarioFixture {
        name: "fig2".into(),
        game,
        expected,
    }
}

fn dress_hat_worlds() -> Vec<World> {
    vec![
        World::with_attributes("R1", [("colour", "red"), ("type", "dress")]),
        World::with_attributes("R2", [("colour", "blue"), ("type", "hat")]),
    ]
}

fn english_dress() -> ScenarioFixture {
    let game = ReferenceGame::new(
        dress_hat_worlds(),
        words(&["dress", "red", "hat", "blue"]),
        vec![
            Utterance::parse("dress"),
            Utterance::parse("red dress"),
            Utterance::parse("hat"),
            Utterance::parse("blue hat"),
        ],
        lexicon(&[
            ("dress", "type", "dress"),
            ("red", "colour", "red"),
            ("hat", "type", "hat"),
            ("blue", "colour", "blue"),
        ]),
        CostModel::per_word(1.0),
        Prior::Uniform,
    )
    .expect("english game is valid");
    ScenarioFixture {
        name: "english-dress".into(),
        game,
        expected: vec![
            row(Probe::SpeakerGp("R1".into()), &[("dress", 0.73), ("red dress", 0.27)]),
            row(Probe::SpeakerIp("R1".into()), &[("dress", 0.5), ("red dress", 0.5)]),
        ],
    }
}

fn spanish_vestido() -> ScenarioFixture {
    let game = ReferenceGame::new(
        dress_hat_worlds(),
        words(&["vestido", "rojo", "sombrero", "azul"]),
        vec![
            Utterance::parse("vestido"),
            Utterance::parse("vestido rojo"),
            Utterance::parse("sombrero"),
            Utterance::parse("sombrero azul"),
        ],
        lexicon(&[
            ("vestido", "type", "dress"),
            ("rojo", "colour", "red"),
            ("sombrero", "type", "hat"),
            ("azul", "colour", "blue"),
        ]),
        CostModel::per_word(1.0),
        Prior::Uniform,
    )
    .expect("spanish game is valid");
    ScenarioFixture {
        name: "spanish-vestido".into(),
        game,
        expected: vec![
            row(
                Probe::SpeakerGp("R1".into()),
                &[("vestido", 0.73), ("vestido rojo", 0.27)],
            ),
            row(
                Probe::SpeakerIp("R1".into()),
                &[("vestido", 0.73), ("vestido rojo", 0.27)],
            ),
            row(
                Probe::SpeakerWord {
                    context: words(&["vestido"]),
                    world: "R1".into(),
                },
                &[(STOP, 0.73), ("rojo", 0.27)],
            ),
        ],
    }
}

fn sedivy_tall() -> ScenarioFixture {
    let game = ReferenceGame::new(
        vec![
            World::with_attributes("tall_cup", [("size", "tall"), ("type", "cup")]),
            World::with_attributes("tall_pitcher", [("size", "tall"), ("type", "pitcher")]),
            World::with_attributes("short_cup", [("size", "short"), ("type", "cup")]),
            World::with_attributes("key", [("type", "key")]),
        ],
        words(&["tall", "short", "cup", "pitcher", "key"]),
        vec![
            Utterance::parse("tall cup"),
            Utterance::parse("short cup"),
            Utterance::parse("tall pitcher"),
            Utterance::parse("cup"),
            Utterance::parse("pitcher"),
            Utterance::parse("key"),
        ],
        lexicon(&[
            ("tall", "size", "tall"),
            ("short", "size", "short"),
            ("cup", "type", "cup"),
            ("pitcher", "type", "pitcher"),
            ("key", "type", "key"),
        ]),
        CostModel::per_word(1.0),
        Prior::Uniform,
    )
    .expect("sedivy game is valid");
    ScenarioFixture {
        name: "sedivy-tall".into(),
        game,
        expected: vec![
            row(
                Probe::PragmaticListenerWord {
                    context: vec![],
                    word: Word::new("tall"),
                },
                &[
                    ("tall_cup", 0.6),
                    ("tall_pitcher", 0.4),
                    ("short_cup", 0.0),
                    ("key", 0.0),
                ],
            ),
            ExpectedRow {
                probe: Probe::PragmaticListenerWord {
                    context: words(&["tall"]),
                    word: Word::new("pitcher"),
                },
                cells: cells(&[("tall_pitcher", 1.0)]),
                tolerance: 0.001,
            },
        ],
    }
}
