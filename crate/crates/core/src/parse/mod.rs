//! Query normalization, tagging, relation extraction, and n-gram generation.

mod normalize;
mod relations;
mod tagger;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use normalize::{format_number, normalize_query};
pub use relations::{
    comparator_at, extract_relations, Comparison, HeuristicRelations, RelationEdge, RelationLabel, RelationParser,
};
pub use tagger::{HeuristicTagger, Pos, Tagger};

use crate::lexicon::porter_stem;

/// English function words plus common command words.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself", "yourselves",
    "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "these", "those", "am", "is", "are",
    "was", "were", "be", "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
    "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after", "above", "below", "to", "from", "up",
    "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once", "here", "there", "when",
    "where", "why", "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor",
    "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "should",
    "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn", "hasn", "haven",
    "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn", "weren", "won", "wouldn",
    // command words
    "show", "shows", "showing", "visualize", "visualise", "visualizing", "create", "display", "give", "draw", "make",
    "see", "want", "like", "please", "let", "us", "tell", "find", "get", "different", "also", "would", "could",
    "across", "per", "exactly", "least", "much", "many",
];

pub const DEFAULT_KEEP_LIST: &[&str] = &[
    "and", "or", "between", "over", "under", "above", "below", "not", "except", "by", "per", "across",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Token {
    pub text: String,
    pub stem: String,
    pub pos: Pos,
    pub index: usize,
    pub is_stop: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_value: Option<f64>,
}

/// A contiguous run of trimmed tokens, `span` is the half-open range
/// `[start, end)` over trimmed-token positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NGram {
    /// Space-joined stems.
    pub text: String,
    /// The words as typed (after normalization).
    pub surface: String,
    pub span: (usize, usize),
    pub n: usize,
}

impl NGram {
    pub fn contains(&self, other: &NGram) -> bool {
        self.span.0 <= other.span.0 && other.span.1 <= self.span.1 && self.span != other.span
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParsedQuery {
    pub raw: String,
    pub normalized: String,
    pub tokens: Vec<Token>,
    pub relations: Vec<RelationEdge>,
    pub trimmed_tokens: Vec<Token>,
    pub ngrams: Vec<NGram>,
    /// Whole hyphenated words, extra match candidates beside `ngrams`.
    pub compounds: Vec<NGram>,
}

impl ParsedQuery {
    /// Trimmed position of a full-token index, if the token survived trimming.
    pub fn trimmed_position(&self, token_index: usize) -> Option<usize> {
        self.trimmed_tokens.iter().position(|t| t.index == token_index)
    }
}

pub struct ParseOptions<'a> {
    pub stopwords: &'a HashSet<String>,
    pub keep_list: &'a HashSet<String>,
    pub max_n: usize,
    pub task_stems: &'a HashSet<String>,
    pub tagger: &'a dyn Tagger,
    pub relations: &'a dyn RelationParser,
}

pub fn tokenize_and_tag(normalized: &str, tagger: &dyn Tagger) -> Vec<Token> {
    let words: Vec<String> = split_words(normalized).into_iter().map(|(w, _)| w).collect();
    let tags = tagger.tag(&words);
    words
        .into_iter()
        .zip(tags)
        .enumerate()
        .map(|(index, (text, pos))| {
            let numeric_value = if pos == Pos::Num { text.parse().ok() } else { None };
            // A tagger may call something NUM that does not parse.
            let pos = if pos == Pos::Num && numeric_value.is_none() { Pos::Noun } else { pos };
            Token {
                stem: porter_stem(&text),
                text,
                pos,
                index,
                is_stop: false,
                numeric_value,
            }
        })
        .collect()
}

/// Whitespace words with hyphenated words split into their parts. Each part
/// carries the index of the compound it came from, when there was one.
fn split_words(normalized: &str) -> Vec<(String, Option<usize>)> {
    let mut out = Vec::new();
    for (k, word) in normalized.split_whitespace().enumerate() {
        if word.contains('-') {
            out.extend(word.split('-').filter(|p| !p.is_empty()).map(|p| (p.to_string(), Some(k))));
        } else {
            out.push((word.to_string(), None));
        }
    }
    out
}

/// Drop stopwords not on the keep-list; the survivors keep their stems.
pub fn trim_and_stem(tokens: &[Token], stopwords: &HashSet<String>, keep_list: &HashSet<String>) -> Vec<Token> {
    tokens.iter().filter(|t| !is_stop(&t.text, stopwords, keep_list)).cloned().collect()
}

fn is_stop(text: &str, stopwords: &HashSet<String>, keep_list: &HashSet<String>) -> bool {
    stopwords.contains(text) && !keep_list.contains(text)
}

/// Every contiguous span of length 1..=min(max_n, len), longest first, then by position.
pub fn generate_ngrams(trimmed: &[Token], max_n: usize) -> Vec<NGram> {
    let len = trimmed.len();
    let mut out = Vec::new();
    for n in (1..=max_n.min(len)).rev() {
        for start in 0..=len - n {
            out.push(make_ngram(trimmed, start, start + n));
        }
    }
    out
}

fn make_ngram(trimmed: &[Token], start: usize, end: usize) -> NGram {
    let slice = &trimmed[start..end];
    NGram {
        text: slice.iter().map(|t| t.stem.as_str()).collect::<Vec<_>>().join(" "),
        surface: slice.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" "),
        span: (start, end),
        n: end - start,
    }
}

pub fn parse_query(raw: &str, opts: &ParseOptions<'_>) -> ParsedQuery {
    let normalized = normalize_query(raw);
    let mut tokens = tokenize_and_tag(&normalized, opts.tagger);
    for t in &mut tokens {
        t.is_stop = is_stop(&t.text, opts.stopwords, opts.keep_list);
    }
    let relations = opts.relations.relations(&tokens, opts.task_stems);
    let trimmed_tokens = trim_and_stem(&tokens, opts.stopwords, opts.keep_list);
    let ngrams = generate_ngrams(&trimmed_tokens, opts.max_n);

    let mut compounds = Vec::new();
    let parts = split_words(&normalized);
    let whole: Vec<&str> = normalized.split_whitespace().collect();
    let mut k = 0;
    while k < parts.len() {
        if let Some(word_idx) = parts[k].1 {
            let end_tok = (k..parts.len()).take_while(|&j| parts[j].1 == Some(word_idx)).last().unwrap_or(k);
            let start = trimmed_tokens.iter().position(|t| t.index == k);
            let end = trimmed_tokens.iter().position(|t| t.index == end_tok);
            if let (Some(s), Some(e)) = (start, end) {
                if e - s == end_tok - k {
                    let mut g = make_ngram(&trimmed_tokens, s, e + 1);
                    g.surface = whole[word_idx].to_string();
                    compounds.push(g);
                }
            }
            k = end_tok + 1;
        } else {
            k += 1;
        }
    }

    ParsedQuery {
        raw: raw.to_string(),
        normalized,
        tokens,
        relations,
        trimmed_tokens,
        ngrams,
        compounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(words: &[&str]) -> HashSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn parse(q: &str) -> ParsedQuery {
        let stop = set(DEFAULT_STOPWORDS);
        let keep = set(DEFAULT_KEEP_LIST);
        let task = set(&["relationship", "averag", "distribut"]);
        parse_query(
            q,
            &ParseOptions {
                stopwords: &stop,
                keep_list: &keep,
                max_n: 5,
                task_stems: &task,
                tagger: &HeuristicTagger,
                relations: &HeuristicRelations,
            },
        )
    }

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn trims_but_keeps_conjunctions() {
        let p = parse("show the relationship between budget and rating");
        assert_eq!(texts(&p.trimmed_tokens), ["relationship", "between", "budget", "and", "rating"]);
        assert!(parse("a of the").trimmed_tokens.is_empty());
        assert_eq!(parse("grossed").trimmed_tokens[0].stem, "gross");
    }

    #[test]
    fn relationship_edges() {
        let p = parse("relationship between budget and rating");
        let has = |h: usize, d: usize, l: RelationLabel| {
            p.relations.contains(&RelationEdge {
                head_index: h,
                dependent_index: d,
                label: l,
            })
        };
        assert!(has(0, 2, RelationLabel::Of));
        assert!(has(2, 4, RelationLabel::Conj));
        assert!(!p.relations.iter().any(|e| e.label == RelationLabel::Compare));
    }

    #[test]
    fn compare_edge() {
        let p = parse("gross over 100M");
        assert!(p.relations.contains(&RelationEdge {
            head_index: 1,
            dependent_index: 2,
            label: RelationLabel::Compare
        }));
        assert!(p.relations.contains(&RelationEdge {
            head_index: 1,
            dependent_index: 0,
            label: RelationLabel::Compare
        }));
        assert!(parse("show budget").relations.is_empty());
    }

    #[test]
    fn between_range_edges() {
        let p = parse("rating between 5 and 8");
        let nums: Vec<usize> = p
            .relations
            .iter()
            .filter(|e| e.label == RelationLabel::Compare && p.tokens[e.dependent_index].pos == Pos::Num)
            .map(|e| e.dependent_index)
            .collect();
        assert_eq!(nums, [2, 4]);
    }

    #[test]
    fn hyphen_compounds() {
        let p = parse("pg-13 movies");
        assert_eq!(texts(&p.tokens), ["pg", "13", "movies"]);
        assert_eq!(p.compounds.len(), 1);
        assert_eq!(p.compounds[0].surface, "pg-13");
        assert_eq!(p.compounds[0].span, (0, 2));
    }

    #[test]
    fn ngram_examples() {
        let p = parse("budget rating");
        let got: Vec<&str> = p.ngrams.iter().map(|g| g.surface.as_str()).collect();
        assert_eq!(got, ["budget rating", "budget", "rating"]);
        assert!(generate_ngrams(&[], 5).is_empty());
        let six = parse("alpha beta gamma delta epsilon zeta");
        assert_eq!(six.ngrams.len(), 20);
    }

    #[test]
    fn numeric_tokens() {
        let p = parse("over 100000000");
        assert_eq!(p.tokens[1].pos, Pos::Num);
        assert_eq!(p.tokens[1].numeric_value, Some(100000000.0));
    }
}
