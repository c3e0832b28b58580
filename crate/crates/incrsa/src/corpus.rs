//! Readers for TUNA trials: the XML corpus layout and the JSON fixture mirror.
//!
//! A trial document looks like
//!
//! ```xml
//! <TRIAL ID="s1t1">
//!   <DOMAIN>
//!     <ENTITY ID="e1" TYPE="target">
//!       <ATTRIBUTE NAME="colour" VALUE="grey"/>
//!       <ATTRIBUTE NAME="type" VALUE="desk"/>
//!     </ENTITY>
//!     <ENTITY ID="e2" TYPE="distractor">...</ENTITY>
//!   </DOMAIN>
//!   <DESCRIPTION>
//!     <ATTRIBUTE NAME="colour" VALUE="grey">grey</ATTRIBUTE>
//!     <ATTRIBUTE NAME="type" VALUE="desk">desk</ATTRIBUTE>
//!   </DESCRIPTION>
//!   <ATTRIBUTE-SET>...</ATTRIBUTE-SET>
//! </TRIAL>
//! ```
//!
//! The description's attribute order is kept as the word order. When a trial
//! only has an `ATTRIBUTE-SET`, the set is linearized by the domain's fixed
//! attribute precedence.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use incrsa_core::tuna::{AttributeWord, Domain, TunaEntity, TunaTrial};
use roxmltree::{Document, Node};
use thiserror::Error;
use walkdir::WalkDir;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Fixture { path: PathBuf, message: String },
    #[error("no usable trials under {0}")]
    Empty(PathBuf),
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    /// Single-target trials, sorted by id.
    pub trials: Vec<TunaTrial>,
    /// Trials with more than one target, dropped.
    pub multi_target: usize,
    /// Files or trials that could not be read, with the reason.
    pub errors: Vec<(PathBuf, String)>,
}

/// Reads every `.xml` file below `root` (or `root` itself if it is a file).
pub fn parse_corpus(root: &Path) -> Result<Corpus, CorpusError> {
    if !root.exists() {
        return Err(CorpusError::Io {
            path: root.to_path_buf(),
            source: std::io::Error::from(std::io::ErrorKind::NotFound),
        });
    }
    let mut files: Vec<PathBuf> = WalkDir::new(root)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("xml")))
        .collect();
    files.sort();

    let mut corpus = Corpus::default();
    for path in files {
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                corpus.errors.push((path, e.to_string()));
                continue;
            }
        };
        let doc = match Document::parse(&text) {
            Ok(d) => d,
            Err(e) => {
                corpus.errors.push((path, e.to_string()));
                continue;
            }
        };
        let trials: Vec<Node> = doc.descendants().filter(|n| n.has_tag_name("TRIAL")).collect();
        if trials.is_empty() {
            corpus.errors.push((path, "no TRIAL element".into()));
            continue;
        }
        for node in trials {
            match read_trial(node) {
                Ok(t) if t.targets().count() > 1 => corpus.multi_target += 1,
                Ok(t) if t.target().is_none() => {
                    corpus.errors.push((path.clone(), format!("trial {}: no target", t.id)))
                }
                Ok(t) => corpus.trials.push(t),
                Err(message) => corpus.errors.push((path.clone(), message)),
            }
        }
    }
    if corpus.trials.is_empty() {
        return Err(CorpusError::Empty(root.to_path_buf()));
    }
    corpus.trials.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(corpus)
}

fn attribute_children<'a>(node: Node<'a, 'a>) -> impl Iterator<Item = Node<'a, 'a>> {
    node.descendants().filter(|n| n.has_tag_name("ATTRIBUTE"))
}

fn attribute_word(node: Node) -> Result<AttributeWord, String> {
    match (node.attribute("NAME"), node.attribute("VALUE")) {
        (Some(name), Some(value)) if !name.is_empty() && !value.is_empty() => Ok(AttributeWord::new(name, value)),
        _ => Err(format!("ATTRIBUTE at byte {} lacks NAME or VALUE", node.range().start)),
    }
}

fn read_trial(node: Node) -> Result<TunaTrial, String> {
    let id = node.attribute("ID").ok_or("TRIAL without ID")?.to_string();
    let mut entities = Vec::new();
    for e in node.descendants().filter(|n| n.has_tag_name("ENTITY")) {
        let eid = e
            .attribute("ID")
            .ok_or_else(|| format!("trial {id}: ENTITY without ID"))?;
        let is_target = match e.attribute("TYPE") {
            Some("target") => true,
            Some("distractor") => false,
            other => return Err(format!("trial {id}: entity {eid} has TYPE {other:?}")),
        };
        let mut attributes = BTreeMap::new();
        for a in attribute_children(e) {
            let a = attribute_word(a).map_err(|m| format!("trial {id}: {m}"))?;
            attributes.insert(a.name, a.value);
        }
        entities.push(TunaEntity {
            id: eid.to_string(),
            is_target,
            attributes,
        });
    }
    if entities.is_empty() {
        return Err(format!("trial {id}: no entities"));
    }
    let domain = if entities
        .iter()
        .any(|e| e.attributes.get("type").is_some_and(|t| t == "person"))
    {
        Domain::People
    } else {
        Domain::Furniture
    };

    let child = |tag: &str| node.children().find(|n| n.has_tag_name(tag));
    let mut description = Vec::new();
    if let Some(d) = child("DESCRIPTION") {
        for a in attribute_children(d) {
            description.push(attribute_word(a).map_err(|m| format!("trial {id}: {m}"))?);
        }
    }
    if description.is_empty() {
        if let Some(set) = child("ATTRIBUTE-SET") {
            for a in attribute_children(set) {
                description.push(attribute_word(a).map_err(|m| format!("trial {id}: {m}"))?);
            }
            domain.linearize(&mut description);
        }
    }
    // A repeated attribute adds no content; keep its first mention.
    let mut seen = Vec::new();
    description.retain(|a| {
        let fresh = !seen.contains(a);
        if fresh {
            seen.push(a.clone());
        }
        fresh
    });
    if description.is_empty() {
        return Err(format!("trial {id}: no description attributes"));
    }
    Ok(TunaTrial {
        id,
        domain,
        entities,
        description,
    })
}

/// Reads a JSON list of trials.
pub fn load_fixture(path: &Path) -> Result<Vec<TunaTrial>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let trials: Vec<TunaTrial> = serde_json::from_str(&text).map_err(|e| CorpusError::Fixture {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if trials.is_empty() {
        return Err(CorpusError::Empty(path.to_path_buf()));
    }
    Ok(trials)
}
