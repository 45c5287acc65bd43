//! Matching lexicon, stemming, and the syntactic and semantic similarity scores.

mod similarity;
mod stem;
mod wordnet;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use similarity::{cosine_sim, CharProfile, Metric, SimilarityScore};
pub use stem::porter_stem;
pub use wordnet::{load_wordnet, PartOfSpeech, SenseProfile, Synset, WordNetGraph};

use crate::ingest::DatasetProfile;
use crate::task::{Operator, TaskKind};
use crate::vis::ChartId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EntryKind {
    Attribute,
    Alias,
    Value,
    TaskKeyword,
    VisKeyword,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskKeyword {
    pub keyword: String,
    pub task: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Operator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisKeyword {
    pub keyword: String,
    pub chart: ChartId,
}

#[derive(Debug, Clone)]
pub struct LexEntry {
    pub surface: String,
    pub kind: EntryKind,
    /// Attribute name, task id, or chart id depending on `kind`.
    pub canonical: String,
    pub parent_attribute: Option<String>,
    pub tokens: Vec<String>,
    pub stems: Vec<String>,
    pub profile: CharProfile,
    /// Operator carried by a task keyword.
    pub operator: Option<Operator>,
}

impl LexEntry {
    fn new(surface: &str, kind: EntryKind, canonical: &str, parent_attribute: Option<&str>) -> Self {
        let surface = surface.trim().to_lowercase();
        let tokens = surface_tokens(&surface);
        let stems = tokens.iter().map(|t| porter_stem(t)).collect();
        Self {
            profile: CharProfile::new(&surface),
            surface,
            kind,
            canonical: canonical.to_string(),
            parent_attribute: parent_attribute.map(str::to_string),
            tokens,
            stems,
            operator: None,
        }
    }

    /// The attribute this entry resolves to, if any.
    pub fn attribute(&self) -> Option<&str> {
        match self.kind {
            EntryKind::Attribute | EntryKind::Alias => Some(&self.canonical),
            EntryKind::Value => self.parent_attribute.as_deref(),
            _ => None,
        }
    }
}

/// Split a lowercase surface into alphanumeric tokens, keeping decimal
/// points that sit between digits.
pub fn surface_tokens(surface: &str) -> Vec<String> {
    let chars: Vec<char> = surface.chars().collect();
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let decimal = c == '.'
            && i > 0
            && chars[i - 1].is_ascii_digit()
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
        if c.is_alphanumeric() || decimal {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            tokens.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    /// Stem → ids of attribute, alias and value entries containing it.
    by_stem: HashMap<String, Vec<usize>>,
    /// Per attribute/alias entry, the WordNet senses of its head token.
    senses: HashMap<usize, Vec<SenseProfile>>,
}

impl Lexicon {
    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn entry(&self, id: usize) -> &LexEntry {
        &self.entries[id]
    }

    pub fn entries_with_stem(&self, stem: &str) -> &[usize] {
        self.by_stem.get(stem).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn data_entry_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind, EntryKind::Attribute | EntryKind::Alias | EntryKind::Value))
            .map(|(i, _)| i)
    }

    pub fn keyword_entries(&self, kind: EntryKind) -> impl Iterator<Item = &LexEntry> + '_ {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    /// Token senses for an attribute or alias entry; empty without WordNet.
    pub fn entry_senses(&self, id: usize) -> &[SenseProfile] {
        self.senses.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn build_lexicon(
    profile: &DatasetProfile,
    task_keywords: &[TaskKeyword],
    vis_keywords: &[VisKeyword],
    wordnet: Option<&WordNetGraph>,
) -> Lexicon {
    let mut entries = Vec::new();
    for (name, meta) in profile.attributes() {
        entries.push(LexEntry::new(name, EntryKind::Attribute, name, None));
        for alias in &meta.aliases {
            entries.push(LexEntry::new(alias, EntryKind::Alias, name, None));
        }
    }
    for (name, meta) in profile.attributes() {
        if !meta.attr_type.is_discrete() {
            continue;
        }
        for value in meta.domain.values() {
            let key = value.to_lowercase();
            if profile.value_index().contains_key(&key) {
                entries.push(LexEntry::new(value, EntryKind::Value, value, Some(name)));
            }
        }
    }
    for kw in task_keywords {
        let mut e = LexEntry::new(&kw.keyword, EntryKind::TaskKeyword, kw.task.as_str(), None);
        e.operator = kw.operator;
        entries.push(e);
    }
    for kw in vis_keywords {
        entries.push(LexEntry::new(&kw.keyword, EntryKind::VisKeyword, kw.chart.as_str(), None));
    }

    let mut by_stem: HashMap<String, Vec<usize>> = HashMap::new();
    let mut senses = HashMap::new();
    let mut cache: HashMap<String, SenseProfile> = HashMap::new();
    for (id, e) in entries.iter().enumerate() {
        if !matches!(e.kind, EntryKind::Attribute | EntryKind::Alias | EntryKind::Value) {
            continue;
        }
        let mut seen: Vec<&str> = Vec::new();
        for s in &e.stems {
            if !seen.contains(&s.as_str()) {
                seen.push(s);
                by_stem.entry(s.clone()).or_default().push(id);
            }
        }
        if let (Some(wn), EntryKind::Attribute | EntryKind::Alias) = (wordnet, e.kind) {
            // Multiword names are compared through their head noun, the last token.
            let profiles = e
                .tokens
                .last()
                .into_iter()
                .map(|t| cache.entry(t.clone()).or_insert_with(|| wn.sense_profile(t)).clone())
                .collect();
            senses.insert(id, profiles);
        }
    }
    Lexicon {
        entries,
        by_stem,
        senses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_tokenization() {
        assert_eq!(surface_tokens("pg-13"), ["pg", "13"]);
        assert_eq!(surface_tokens("rotten tomatoes rating"), ["rotten", "tomatoes", "rating"]);
        assert_eq!(surface_tokens("7.5 stars."), ["7.5", "stars"]);
        assert_eq!(surface_tokens("a/b"), ["a", "b"]);
    }
}
