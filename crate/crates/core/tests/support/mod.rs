//! Random reference games and a brute-force evaluator of the incremental
//! agents that works directly from the inventory, without the trie.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use incrsa_core::{CostModel, Prior, ReferenceGame, Semantics, Utterance, Word, World, STOP};
use rand::rngs::StdRng;
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct GameShape {
    pub worlds: (usize, usize),
    pub utterances: (usize, usize),
    pub max_len: usize,
    pub vocabulary: usize,
    pub zero_cost: bool,
    /// Every world satisfies at least one utterance.
    pub satisfiable: bool,
    pub random_prior: bool,
}

impl GameShape {
    pub fn general() -> Self {
        GameShape {
            worlds: (1, 6),
            utterances: (1, 12),
            max_len: 4,
            vocabulary: 5,
            zero_cost: false,
            satisfiable: false,
            random_prior: true,
        }
    }
}

const VOCAB: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

pub fn random_game(rng: &mut StdRng, shape: GameShape) -> ReferenceGame {
    let n_worlds = rng.gen_range(shape.worlds.0..=shape.worlds.1);
    let target = rng.gen_range(shape.utterances.0..=shape.utterances.1);
    let vocab = &VOCAB[..shape.vocabulary];

    let mut seen = BTreeSet::new();
    let mut inventory = Vec::new();
    for _ in 0..target * 20 {
        if inventory.len() == target {
            break;
        }
        let len = rng.gen_range(1..=shape.max_len);
        let words: Vec<&str> = (0..len).map(|_| vocab[rng.gen_range(0..vocab.len())]).collect();
        if seen.insert(words.clone()) {
            inventory.push(Utterance::from_words(words));
        }
    }

    let worlds: Vec<World> = (0..n_worlds).map(|i| World::new(format!("w{i}"))).collect();
    let mut truth: Vec<Vec<bool>> = inventory
        .iter()
        .map(|_| (0..n_worlds).map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    if shape.satisfiable {
        for w in 0..n_worlds {
            if !truth.iter().any(|row| row[w]) {
                let u = rng.gen_range(0..inventory.len());
                truth[u][w] = true;
            }
        }
    }
    let pairs = inventory.iter().zip(&truth).flat_map(|(u, row)| {
        row.iter()
            .enumerate()
            .filter(|(_, t)| **t)
            .map(move |(w, _)| (u.label(), format!("w{w}")))
    });
    let semantics = Semantics::table(pairs.collect::<Vec<_>>());

    let used: BTreeSet<&str> = inventory
        .iter()
        .flat_map(|u| u.words().iter().map(Word::as_str))
        .collect();
    let vocabulary: Vec<Word> = used.iter().map(|w| Word::new(*w)).collect();

    let costs = if shape.zero_cost {
        CostModel::zero()
    } else {
        let mut c = CostModel::per_word(rng.gen_range(0.0..2.0));
        c.stop = rng.gen_range(0.0..1.0);
        for w in &used {
            if rng.gen_bool(0.5) {
                c.overrides.insert(w.to_string(), rng.gen_range(0.0..3.0));
            }
        }
        c
    };

    let prior = if shape.random_prior && rng.gen_bool(0.5) {
        let raw: Vec<f64> = (0..n_worlds).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut masses: BTreeMap<String, f64> = worlds
            .iter()
            .zip(&raw)
            .map(|(w, m)| (w.id.clone(), m / total))
            .collect();
        // force an exact unit total
        let sum: f64 = masses.values().sum();
        *masses.get_mut("w0").unwrap() += 1.0 - sum;
        Prior::Explicit(masses)
    } else {
        Prior::Uniform
    };

    ReferenceGame::new(worlds, vocabulary, inventory, semantics, costs, prior).expect("random game is valid")
}

fn full_sequence(u: &Utterance) -> Vec<String> {
    u.words()
        .iter()
        .map(|w| w.as_str().to_string())
        .chain(std::iter::once(STOP.to_string()))
        .collect()
}

/// Inventory indices whose STOP-terminated word sequence starts with `prefix`.
fn extensions(game: &ReferenceGame, prefix: &[String]) -> Vec<usize> {
    game.inventory()
        .iter()
        .enumerate()
        .filter(|(_, u)| {
            let full = full_sequence(u);
            full.len() >= prefix.len() && full[..prefix.len()] == *prefix
        })
        .map(|(i, _)| i)
        .collect()
}

pub fn bf_extension_count(game: &ReferenceGame, prefix: &[String], world: usize) -> usize {
    extensions(game, prefix)
        .into_iter()
        .filter(|&u| game.truth(u, world))
        .count()
}

pub fn bf_incremental_truth(game: &ReferenceGame, prefix: &[String], world: usize) -> f64 {
    let n = game.worlds().len();
    let sat: Vec<usize> = extensions(game, prefix)
        .into_iter()
        .filter(|&u| (0..n).any(|w| game.truth(u, w)))
        .collect();
    if sat.is_empty() {
        return 0.0;
    }
    sat.iter().filter(|&&u| game.truth(u, world)).count() as f64 / sat.len() as f64
}

pub fn bf_continuations(game: &ReferenceGame, prefix: &[String]) -> Vec<String> {
    let set: BTreeSet<String> = extensions(game, prefix)
        .into_iter()
        .filter_map(|u| full_sequence(&game.inventory()[u]).get(prefix.len()).cloned())
        .collect();
    set.into_iter().collect()
}

pub fn bf_l0_word(game: &ReferenceGame, prefix: &[String], word: &str, world: usize) -> f64 {
    let mut next = prefix.to_vec();
    next.push(word.to_string());
    let prior = game.prior_mass();
    let weights: Vec<f64> = (0..prior.len())
        .map(|w| prior[w] * bf_incremental_truth(game, &next, w))
        .collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        0.0
    } else {
        weights[world] / total
    }
}

pub fn bf_s1_word(game: &ReferenceGame, prefix: &[String], world: usize) -> Vec<(String, f64)> {
    let conts = bf_continuations(game, prefix);
    let literal: Vec<f64> = conts.iter().map(|c| bf_l0_word(game, prefix, c, world)).collect();
    if literal.iter().all(|l| *l == 0.0) {
        let p = 1.0 / conts.len() as f64;
        return conts.into_iter().map(|c| (c, p)).collect();
    }
    let weights: Vec<f64> = conts
        .iter()
        .zip(&literal)
        .map(|(c, l)| l * (-game.costs().word_cost(c)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    conts.into_iter().zip(weights).map(|(c, w)| (c, w / total)).collect()
}

/// Chain-rule utterance speaker, one product per inventory utterance.
pub fn bf_ip(game: &ReferenceGame, world: usize) -> Vec<f64> {
    game.inventory()
        .iter()
        .map(|u| {
            let full = full_sequence(u);
            let mut p = 1.0;
            for i in 0..full.len() {
                let step = bf_s1_word(game, &full[..i], world);
                p *= step.iter().find(|(c, _)| *c == full[i]).map_or(0.0, |(_, q)| *q);
            }
            p
        })
        .collect()
}

/// Global speaker from the truth table.
pub fn bf_gp(game: &ReferenceGame, world: usize) -> Vec<f64> {
    let prior = game.prior_mass();
    let n = prior.len();
    let weights: Vec<f64> = game
        .inventory()
        .iter()
        .enumerate()
        .map(|(u, utt)| {
            let z: f64 = (0..n).filter(|&w| game.truth(u, w)).map(|w| prior[w]).sum();
            if z == 0.0 || !game.truth(u, world) {
                return 0.0;
            }
            prior[world] / z * (-game.costs().utterance_cost(utt.words(), true)).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        vec![1.0 / weights.len() as f64; weights.len()]
    } else {
        weights.into_iter().map(|w| w / total).collect()
    }
}

/// Every proper prefix (including the empty one) of every inventory utterance,
/// plus each complete STOP-terminated path.
pub fn all_prefixes(game: &ReferenceGame) -> Vec<Vec<String>> {
    let mut out = BTreeSet::new();
    for u in game.inventory() {
        let full = full_sequence(u);
        for i in 0..=full.len() {
            out.insert(full[..i].to_vec());
        }
    }
    out.into_iter().collect()
}
