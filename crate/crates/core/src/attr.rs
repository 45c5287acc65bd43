//! Mapping n-grams to data attributes and resolving the attribute map.

use std::collections::{BTreeSet, HashMap, HashSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::lexicon::{CharProfile, EntryKind, Lexicon, Metric, SenseProfile, SimilarityScore, WordNetGraph};
use crate::parse::{NGram, ParsedQuery, Pos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InferenceType {
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeMatch {
    pub attribute: String,
    /// N-gram as typed.
    pub query_phrase: String,
    /// N-gram stems.
    pub ngram_text: String,
    pub span: (usize, usize),
    pub score: SimilarityScore,
    pub entry: Option<usize>,
    pub kind: EntryKind,
    /// Domain value for value-kind matches.
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchMeta {
    pub score: f64,
    pub metric: Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AttributeMapEntry {
    pub name: String,
    pub query_phrase: Vec<String>,
    pub inference_type: InferenceType,
    pub is_ambiguous: bool,
    pub ambiguity: Vec<String>,
    pub encode: bool,
    pub meta: MatchMeta,
}

pub type AttributeMap = IndexMap<String, AttributeMapEntry>;

/// All attributes that matched one query span.
#[derive(Debug, Clone, PartialEq)]
pub struct PhraseGroup {
    pub span: (usize, usize),
    pub phrase: String,
    pub attributes: Vec<String>,
    /// Value candidates per attribute, best first.
    pub values: IndexMap<String, Vec<String>>,
}

impl PhraseGroup {
    pub fn covers(&self, trimmed_pos: usize) -> bool {
        self.span.0 <= trimmed_pos && trimmed_pos < self.span.1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DroppedCandidate {
    pub phrase: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct AttributeResolution {
    pub map: AttributeMap,
    pub groups: Vec<PhraseGroup>,
    pub matches: Vec<AttributeMatch>,
    pub dropped: Vec<DroppedCandidate>,
}

impl AttributeResolution {
    pub fn encodable(&self) -> impl Iterator<Item = &AttributeMapEntry> {
        self.map.values().filter(|e| e.encode)
    }

    /// Phrase groups covering a trimmed-token position.
    pub fn groups_covering(&self, trimmed_pos: usize) -> impl Iterator<Item = &PhraseGroup> {
        self.groups.iter().filter(move |g| g.covers(trimmed_pos))
    }

    /// Whether a trimmed position lies inside any attribute phrase.
    pub fn is_covered(&self, trimmed_pos: usize) -> bool {
        self.groups.iter().any(|g| g.covers(trimmed_pos))
    }
}

/// Phrase-level choices that collapse ambiguity.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResolutionOverrides {
    /// Query phrase → chosen attribute.
    #[serde(default)]
    pub attributes: IndexMap<String, String>,
    #[serde(default)]
    pub values: Vec<ValueOverride>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueOverride {
    pub attribute: String,
    pub phrase: String,
    pub values: Vec<String>,
}

impl ResolutionOverrides {
    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty() && self.values.is_empty()
    }

    fn attribute_for(&self, phrase: &str, ngram_text: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(k, _)| phrase_matches(k, phrase, ngram_text))
            .map(|(_, v)| v.as_str())
    }

    fn values_for(&self, attribute: &str, phrase: &str, ngram_text: &str) -> Option<&[String]> {
        self.values
            .iter()
            .find(|v| v.attribute == attribute && phrase_matches(&v.phrase, phrase, ngram_text))
            .map(|v| v.values.as_slice())
    }
}

fn phrase_matches(key: &str, phrase: &str, ngram_text: &str) -> bool {
    let key = key.trim().to_lowercase();
    key == phrase || key == ngram_text
}

pub struct MatchOptions<'a> {
    pub threshold: f64,
    /// Stems that never take part in semantic matching (task and chart keywords).
    pub keyword_stems: &'a HashSet<String>,
    /// Words that may not begin or end a matching n-gram.
    pub boundary_words: &'a HashSet<String>,
    /// Stems of nouns naming the dataset's records; alone they match only exact one-word entries.
    pub record_nouns: &'a HashSet<String>,
}

fn excluded_boundary(parsed: &ParsedQuery, g: &NGram, boundary: &HashSet<String>) -> bool {
    let toks = &parsed.trimmed_tokens[g.span.0..g.span.1];
    let bad = |t: &crate::parse::Token| boundary.contains(&t.text) || matches!(t.pos, Pos::Conj | Pos::Prep);
    bad(&toks[0]) || bad(&toks[toks.len() - 1])
}

/// Score every candidate n-gram against the attribute, alias and value
/// entries, keeping those at or above the threshold.
pub fn match_ngrams(
    parsed: &ParsedQuery,
    lexicon: &Lexicon,
    wordnet: Option<&WordNetGraph>,
    opts: &MatchOptions<'_>,
) -> Vec<AttributeMatch> {
    let mut out = Vec::new();
    let mut sense_cache: HashMap<String, SenseProfile> = HashMap::new();
    let data_ids: Vec<usize> = lexicon.data_entry_ids().collect();

    for g in parsed.ngrams.iter().chain(&parsed.compounds) {
        if excluded_boundary(parsed, g, opts.boundary_words) {
            continue;
        }
        let toks = &parsed.trimmed_tokens[g.span.0..g.span.1];
        // A word naming the records matches only an entry that is exactly that word.
        let record_noun = toks.len() == 1 && opts.record_nouns.contains(&toks[0].stem);
        let numeric_only = toks.iter().all(|t| t.pos == Pos::Num);
        let mut best: HashMap<usize, SimilarityScore> = HashMap::new();

        if numeric_only {
            for &id in &data_ids {
                let e = lexicon.entry(id);
                if e.kind == EntryKind::Value && e.surface == g.surface {
                    best.insert(id, SimilarityScore::syntactic(1.0));
                }
            }
        } else {
            let stems: BTreeSet<&str> = toks.iter().map(|t| t.stem.as_str()).collect();
            let mut iter = stems.iter();
            if let Some(first) = iter.next() {
                let mut cands: Vec<usize> = lexicon.entries_with_stem(first).to_vec();
                for s in iter {
                    let with: HashSet<usize> = lexicon.entries_with_stem(s).iter().copied().collect();
                    cands.retain(|id| with.contains(id));
                }
                let cands = cands.into_iter().filter(|id| {
                    let stems = &lexicon.entry(*id).stems;
                    stems_within(toks, stems) && (!record_noun || stems.len() == 1)
                });
                for id in cands {
                    best.insert(id, SimilarityScore::syntactic(1.0));
                }
            }
            let profile = CharProfile::new(&g.surface);
            for &id in &data_ids {
                if record_noun || best.contains_key(&id) {
                    continue;
                }
                let entry = lexicon.entry(id);
                let v = profile.cosine(&entry.profile);
                if v >= opts.threshold
                    && (toks.len() == 1
                        || tokens_supported(toks, &entry.tokens, opts.threshold) && stems_within(toks, &entry.stems))
                {
                    best.insert(id, SimilarityScore::syntactic(v));
                }
            }

            let semantic_ok = wordnet.is_some()
                && toks
                    .iter()
                    .all(|t| t.pos != Pos::Num && !opts.keyword_stems.contains(&t.stem) && !opts.boundary_words.contains(&t.text)
                        && !opts.record_nouns.contains(&t.stem));
            if let (true, Some(wn)) = (semantic_ok, wordnet) {
                let query_senses: Vec<SenseProfile> = toks
                    .iter()
                    .map(|t| sense_cache.entry(t.text.clone()).or_insert_with(|| wn.sense_profile(&t.text)).clone())
                    .collect();
                if query_senses.iter().any(|s| !s.is_empty()) {
                    for &id in &data_ids {
                        let entry_senses = lexicon.entry_senses(id);
                        if entry_senses.is_empty() {
                            continue;
                        }
                        let per_token: Vec<f64> = query_senses
                            .iter()
                            .map(|q| entry_senses.iter().map(|e| wn.wup_profiles(q, e)).fold(0.0, f64::max))
                            .collect();
                        let v = per_token.iter().sum::<f64>() / per_token.len() as f64;
                        // The mean is the score, but every token has to clear the bar on its own.
                        let weakest = per_token.iter().copied().fold(f64::INFINITY, f64::min);
                        let current = best.get(&id).map_or(0.0, |s| s.value);
                        if weakest >= opts.threshold && v > current {
                            best.insert(id, SimilarityScore::semantic(v));
                        }
                    }
                }
            }
        }

        let mut found: Vec<(usize, SimilarityScore)> = best.into_iter().filter(|(_, s)| s.value >= opts.threshold).collect();
        found.sort_by_key(|(id, _)| *id);
        // A phrase naming an attribute is not also read as one of its values.
        let named: HashSet<&str> = found
            .iter()
            .filter(|(_, score)| score.metric == Metric::Syntactic && score.value >= 1.0)
            .map(|(id, _)| lexicon.entry(*id))
            .filter(|e| matches!(e.kind, EntryKind::Attribute | EntryKind::Alias))
            .filter_map(|e| e.attribute())
            .collect();
        let found: Vec<_> = found
            .iter()
            .copied()
            .filter(|(id, _)| {
                let e = lexicon.entry(*id);
                e.kind != EntryKind::Value || !e.attribute().is_some_and(|a| named.contains(a))
            })
            .collect();
        for (id, score) in found {
            let e = lexicon.entry(id);
            let Some(attribute) = e.attribute() else { continue };
            out.push(AttributeMatch {
                attribute: attribute.to_string(),
                query_phrase: g.surface.clone(),
                ngram_text: g.text.clone(),
                span: g.span,
                score,
                entry: Some(id),
                kind: e.kind,
                value: (e.kind == EntryKind::Value).then(|| e.canonical.clone()),
            });
        }
    }
    out
}

/// Every query token is itself a near match for some entry token, so a
/// phrase cannot pass on the strength of one shared word.
fn tokens_supported(toks: &[crate::parse::Token], entry_tokens: &[String], threshold: f64) -> bool {
    toks.iter().all(|t| {
        let p = CharProfile::new(&t.text);
        entry_tokens.iter().any(|e| p.cosine(&CharProfile::new(e)) >= threshold)
    })
}

/// No stem occurs in the n-gram more often than in the entry.
fn stems_within(toks: &[crate::parse::Token], entry_stems: &[String]) -> bool {
    toks.iter().all(|t| {
        let want = toks.iter().filter(|o| o.stem == t.stem).count();
        entry_stems.iter().filter(|s| **s == t.stem).count() >= want
    })
}

fn partially_overlaps(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 < b.1 && b.0 < a.1 && !strictly_contains(a, b) && !strictly_contains(b, a) && a != b
}

fn strictly_contains(outer: (usize, usize), inner: (usize, usize)) -> bool {
    outer.0 <= inner.0 && inner.1 <= outer.1 && outer != inner
}

/// Collapse raw matches into the attribute map.
///
/// A match is dropped when a strictly longer span scoring at least as high
/// contains it. Within a span, attributes within `margin` of the best score
/// form an ambiguity group.
pub fn resolve_matches(
    matches: Vec<AttributeMatch>,
    overrides: Option<&ResolutionOverrides>,
    margin: f64,
) -> AttributeResolution {
    let mut dropped = Vec::new();
    let mut surviving = Vec::new();
    for m in &matches {
        let cover = matches
            .iter()
            .find(|o| strictly_contains(o.span, m.span) && o.score.value >= m.score.value);
        match cover {
            Some(o) => dropped.push(DroppedCandidate {
                phrase: m.query_phrase.clone(),
                attribute: Some(m.attribute.clone()),
                reason: format!("contained in longer phrase `{}`", o.query_phrase),
            }),
            None => surviving.push(m.clone()),
        }
    }
    // A phrase straddling another attribute's phrase is redundant when its
    // attribute is also matched somewhere clean.
    let clean = |m: &AttributeMatch| {
        !surviving
            .iter()
            .any(|o| o.attribute != m.attribute && partially_overlaps(o.span, m.span))
    };
    let straddling: Vec<usize> = (0..surviving.len())
        .filter(|&i| {
            let m = &surviving[i];
            !clean(m) && surviving.iter().any(|p| p.attribute == m.attribute && p.span != m.span && clean(p))
        })
        .collect();
    for &i in straddling.iter().rev() {
        let m = surviving.remove(i);
        dropped.push(DroppedCandidate {
            phrase: m.query_phrase.clone(),
            attribute: Some(m.attribute.clone()),
            reason: "overlaps another attribute's phrase".to_string(),
        });
    }

    let mut spans: Vec<(usize, usize)> = surviving.iter().map(|m| m.span).collect();
    spans.sort();
    spans.dedup();

    let mut kept: Vec<AttributeMatch> = Vec::new();
    let mut groups = Vec::new();
    for span in spans {
        let mut in_span: Vec<AttributeMatch> = surviving.iter().filter(|m| m.span == span).cloned().collect();
        // Prefer the non-compound surface when scores tie.
        in_span.sort_by(|a, b| {
            b.score
                .value
                .total_cmp(&a.score.value)
                .then_with(|| a.query_phrase.contains('-').cmp(&b.query_phrase.contains('-')))
        });
        let phrase = in_span[0].query_phrase.clone();
        let ngram_text = in_span[0].ngram_text.clone();

        if let Some(chosen) = overrides.and_then(|o| o.attribute_for(&phrase, &ngram_text)) {
            let before = in_span.len();
            in_span.retain(|m| m.attribute == chosen);
            if in_span.is_empty() {
                in_span.push(AttributeMatch {
                    attribute: chosen.to_string(),
                    query_phrase: phrase.clone(),
                    ngram_text: ngram_text.clone(),
                    span,
                    score: SimilarityScore::syntactic(1.0),
                    entry: None,
                    kind: EntryKind::Attribute,
                    value: None,
                });
            }
            if before != in_span.len() {
                dropped.push(DroppedCandidate {
                    phrase: phrase.clone(),
                    attribute: None,
                    reason: format!("override chose `{chosen}`"),
                });
            }
        }

        let best = in_span.iter().map(|m| m.score.value).fold(0.0, f64::max);
        let mut attributes: Vec<String> = Vec::new();
        for m in &in_span {
            if m.score.value + 1e-12 >= best - margin {
                if !attributes.contains(&m.attribute) {
                    attributes.push(m.attribute.clone());
                }
            } else if !attributes.contains(&m.attribute) {
                dropped.push(DroppedCandidate {
                    phrase: phrase.clone(),
                    attribute: Some(m.attribute.clone()),
                    reason: format!("score {:.3} below best {:.3}", m.score.value, best),
                });
            }
        }
        attributes.sort();

        let mut values: IndexMap<String, Vec<String>> = IndexMap::new();
        for attr in &attributes {
            let vals: Vec<&AttributeMatch> = in_span.iter().filter(|m| &m.attribute == attr && m.value.is_some()).collect();
            if vals.is_empty() {
                continue;
            }
            let chosen = overrides.and_then(|o| o.values_for(attr, &phrase, &ngram_text));
            let list: Vec<String> = match chosen {
                Some(list) => list.to_vec(),
                None => {
                    let vbest = vals.iter().map(|m| m.score.value).fold(0.0, f64::max);
                    let mut scored: Vec<(&str, f64)> = vals
                        .iter()
                        .filter(|m| m.score.value + 1e-12 >= vbest - margin)
                        .map(|m| (m.value.as_deref().unwrap_or_default(), m.score.value))
                        .collect();
                    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
                    let mut list: Vec<String> = Vec::new();
                    for (v, _) in scored {
                        if !list.iter().any(|x| x == v) {
                            list.push(v.to_string());
                        }
                    }
                    list
                }
            };
            values.insert(attr.clone(), list);
        }

        for m in in_span {
            if attributes.contains(&m.attribute) {
                kept.push(m);
            }
        }
        groups.push(PhraseGroup {
            span,
            phrase,
            attributes,
            values,
        });
    }

    let map = build_map(&kept, &groups);
    AttributeResolution {
        map,
        groups,
        matches: kept,
        dropped,
    }
}

fn build_map(kept: &[AttributeMatch], groups: &[PhraseGroup]) -> AttributeMap {
    let mut names: Vec<(usize, String)> = Vec::new();
    for m in kept {
        match names.iter_mut().find(|(_, n)| *n == m.attribute) {
            Some((pos, _)) => *pos = (*pos).min(m.span.0),
            None => names.push((m.span.0, m.attribute.clone())),
        }
    }
    names.sort();

    let mut map = AttributeMap::new();
    for (_, name) in names {
        let mine: Vec<&AttributeMatch> = kept.iter().filter(|m| m.attribute == name).collect();
        let mut phrases: Vec<(usize, String)> = Vec::new();
        for g in groups.iter().filter(|g| g.attributes.contains(&name)) {
            if !phrases.iter().any(|(_, p)| *p == g.phrase) {
                phrases.push((g.span.0, g.phrase.clone()));
            }
        }
        phrases.sort();
        let mut ambiguity: Vec<String> = Vec::new();
        for g in groups.iter().filter(|g| g.attributes.contains(&name) && g.attributes.len() > 1) {
            for a in &g.attributes {
                if *a != name && !ambiguity.contains(a) {
                    ambiguity.push(a.clone());
                }
            }
        }
        ambiguity.sort();
        let explicit = mine.iter().any(|m| matches!(m.kind, EntryKind::Attribute | EntryKind::Alias));
        let top = mine
            .iter()
            .max_by(|a, b| {
                a.score
                    .value
                    .total_cmp(&b.score.value)
                    .then_with(|| (a.score.metric == Metric::Syntactic).cmp(&(b.score.metric == Metric::Syntactic)))
            })
            .expect("attribute has matches");
        map.insert(
            name.clone(),
            AttributeMapEntry {
                name,
                query_phrase: phrases.into_iter().map(|(_, p)| p).collect(),
                inference_type: if explicit {
                    InferenceType::Explicit
                } else {
                    InferenceType::Implicit
                },
                is_ambiguous: !ambiguity.is_empty(),
                ambiguity,
                encode: true,
                meta: MatchMeta {
                    score: top.score.value,
                    metric: top.score.metric,
                },
            },
        );
    }
    map
}
