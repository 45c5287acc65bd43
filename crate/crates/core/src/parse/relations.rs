use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::tagger::Pos;
use super::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationLabel {
    Conj,
    Mod,
    Compare,
    Groupby,
    Of,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationEdge {
    pub head_index: usize,
    pub dependent_index: usize,
    pub label: RelationLabel,
}

/// Produces relation edges over tagged tokens. `task_stems` holds the
/// stems of single-word task keywords.
pub trait RelationParser: Send + Sync {
    fn relations(&self, tokens: &[Token], task_stems: &HashSet<String>) -> Vec<RelationEdge>;
}

/// Window-based rules over the tag sequence; see [`extract_relations`].
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicRelations;

impl RelationParser for HeuristicRelations {
    fn relations(&self, tokens: &[Token], task_stems: &HashSet<String>) -> Vec<RelationEdge> {
        extract_relations(tokens, task_stems)
    }
}

const WINDOW: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Greater,
    Less,
    Equal,
    Between,
}

/// Comparator phrases, longest first.
const COMPARATORS: &[(&[&str], Comparison)] = &[
    (&["greater", "than"], Comparison::Greater),
    (&["more", "than"], Comparison::Greater),
    (&["higher", "than"], Comparison::Greater),
    (&["larger", "than"], Comparison::Greater),
    (&["bigger", "than"], Comparison::Greater),
    (&["at", "least"], Comparison::Greater),
    (&["less", "than"], Comparison::Less),
    (&["fewer", "than"], Comparison::Less),
    (&["lower", "than"], Comparison::Less),
    (&["smaller", "than"], Comparison::Less),
    (&["at", "most"], Comparison::Less),
    (&["equal", "to"], Comparison::Equal),
    (&["over"], Comparison::Greater),
    (&["above"], Comparison::Greater),
    (&["exceeding"], Comparison::Greater),
    (&["exceeds"], Comparison::Greater),
    (&["under"], Comparison::Less),
    (&["below"], Comparison::Less),
    (&["exactly"], Comparison::Equal),
    (&["between"], Comparison::Between),
];

/// Comparator starting at token `i`, with its length.
pub fn comparator_at(tokens: &[Token], i: usize) -> Option<(Comparison, usize)> {
    COMPARATORS.iter().find_map(|(words, cmp)| {
        let fits = i + words.len() <= tokens.len() && words.iter().enumerate().all(|(k, w)| tokens[i + k].text == *w);
        fits.then_some((*cmp, words.len()))
    })
}

fn is_content(t: &Token) -> bool {
    !t.is_stop && matches!(t.pos, Pos::Noun | Pos::Verb | Pos::Adj | Pos::Num)
}

fn is_nominal(t: &Token) -> bool {
    !t.is_stop && matches!(t.pos, Pos::Noun | Pos::Verb)
}

fn edge(head: usize, dependent: usize, label: RelationLabel) -> RelationEdge {
    RelationEdge {
        head_index: head,
        dependent_index: dependent,
        label,
    }
}

/// Heuristic relation rules:
/// - `conj` between the nearest content tokens on either side of and/or;
/// - `compare` from a comparator to its number(s), then to anchor
///   candidates in priority order (inside the phrase, right after the
///   number, nearest before the comparator);
/// - `groupby` from by/across/per to the following noun;
/// - `of` from a task keyword to the nearest noun, looking ahead first.
pub fn extract_relations(tokens: &[Token], task_stems: &HashSet<String>) -> Vec<RelationEdge> {
    let mut edges = Vec::new();
    let n = tokens.len();

    for (i, t) in tokens.iter().enumerate() {
        if t.pos != Pos::Conj || !matches!(t.text.as_str(), "and" | "or") {
            continue;
        }
        let left = (i.saturating_sub(WINDOW)..i).rev().find(|&j| is_content(&tokens[j]));
        let right = (i + 1..n.min(i + 1 + WINDOW)).find(|&j| is_content(&tokens[j]));
        if let (Some(l), Some(r)) = (left, right) {
            edges.push(edge(l, r, RelationLabel::Conj));
        }
    }

    let mut i = 0;
    while i < n {
        let Some((cmp, len)) = comparator_at(tokens, i) else {
            i += 1;
            continue;
        };
        let after = i + len;
        let nums: Vec<usize> = if cmp == Comparison::Between {
            let first = (after..n.min(after + WINDOW)).find(|&j| tokens[j].pos == Pos::Num);
            match first {
                Some(a) if a + 2 < n && tokens[a + 1].text == "and" && tokens[a + 2].pos == Pos::Num => vec![a, a + 2],
                _ => Vec::new(),
            }
        } else {
            let mut found = None;
            for j in after..n.min(after + WINDOW) {
                if tokens[j].pos == Pos::Num {
                    found = Some(j);
                    break;
                }
                if tokens[j].pos == Pos::Conj || comparator_at(tokens, j).is_some() {
                    break;
                }
            }
            found.into_iter().collect()
        };
        if nums.is_empty() {
            i += 1;
            continue;
        }
        for &num in &nums {
            edges.push(edge(i, num, RelationLabel::Compare));
        }
        let first_num = nums[0];
        let last_num = *nums.last().expect("non-empty");
        let mut anchors: Vec<usize> = (after..first_num).filter(|&j| is_nominal(&tokens[j])).collect();
        if last_num + 1 < n && tokens[last_num + 1].pos == Pos::Noun && !tokens[last_num + 1].is_stop {
            anchors.push(last_num + 1);
        }
        if let Some(before) = (i.saturating_sub(2 * WINDOW)..i).rev().find(|&j| is_nominal(&tokens[j])) {
            anchors.push(before);
        }
        for a in anchors {
            edges.push(edge(i, a, RelationLabel::Compare));
        }
        i = last_num + 1;
    }

    for (i, t) in tokens.iter().enumerate() {
        if matches!(t.text.as_str(), "by" | "across" | "per") {
            if let Some(j) = (i + 1..n.min(i + 1 + WINDOW)).find(|&j| tokens[j].pos == Pos::Noun && !tokens[j].is_stop) {
                edges.push(edge(i, j, RelationLabel::Groupby));
            }
        }
    }

    for (i, t) in tokens.iter().enumerate() {
        if !task_stems.contains(&t.stem) {
            continue;
        }
        let noun = |j: &usize| tokens[*j].pos == Pos::Noun && !tokens[*j].is_stop && *j != i;
        let ahead = (i + 1..n.min(i + 1 + WINDOW)).find(noun);
        let target = ahead.or_else(|| (i.saturating_sub(WINDOW)..i).rev().find(noun));
        if let Some(j) = target {
            edges.push(edge(i, j, RelationLabel::Of));
        }
    }

    edges
}
