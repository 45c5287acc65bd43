use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Num,
    Conj,
    Prep,
    Det,
    Other,
}

/// Assigns a coarse part-of-speech tag to each token. Implementations must
/// be deterministic.
pub trait Tagger: Send + Sync {
    fn tag(&self, words: &[String]) -> Vec<Pos>;
}

/// Closed-class lexicon plus suffix rules, with NOUN as the fallback.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicTagger;

const CONJ: &[&str] = &["and", "or", "but", "nor"];
const PREP: &[&str] = &[
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "over", "under", "above", "below", "between", "across",
    "per", "into", "than", "about", "after", "before", "during", "through", "within", "without", "except", "among",
    "against", "via", "vs", "versus", "since", "until", "like", "as",
];
const DET: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "each", "every", "all", "some", "any", "my", "our", "their",
    "its", "his", "her", "which", "what", "whose",
];
const VERB: &[&str] = &[
    "show", "visualize", "visualise", "create", "display", "plot", "draw", "make", "give", "compare", "correlate",
    "relate", "see", "want", "is", "are", "was", "were", "be", "been", "have", "has", "had", "do", "does", "did", "can",
    "could", "would", "should", "will", "let", "get", "find", "list", "tell", "break", "vary", "varies", "grow",
    "grows", "change", "changes", "earn", "earns", "cost", "costs",
];
const ADJ: &[&str] = &[
    "average", "mean", "total", "highest", "lowest", "maximum", "minimum", "max", "min", "more", "less", "greater",
    "fewer", "higher", "lower", "larger", "smaller", "bigger", "different", "least", "most", "many", "much", "few",
    "top", "best", "worst", "overall", "equal",
];
const ADV: &[&str] = &["not", "just", "only", "how", "also", "very", "too", "exactly", "when", "where", "why"];
const OTHER: &[&str] = &["me", "i", "you", "we", "us", "it", "they", "them", "please"];
const ING_NOUNS: &[&str] = &[
    "rating", "earning", "housing", "spending", "building", "funding", "pricing", "clothing", "thing", "king", "ring",
    "spring", "morning", "evening", "string", "wedding", "ceiling", "meeting", "painting", "setting", "offering",
    "listing", "holding", "saving", "wing", "swing", "ranking", "filing", "shipping", "heating", "parking", "timing",
    "training", "lighting", "marketing", "staffing", "boxing", "skiing", "skating", "swimming", "cycling", "rowing",
    "sailing", "fencing", "wrestling", "shooting", "diving", "surfing", "bobsleigh",
];
const ED_NOUNS: &[&str] = &[
    "red", "bed", "speed", "hundred", "seed", "need", "feed", "shed", "breed", "weed", "sled", "reed", "creed",
    "greed", "bread", "head", "thread", "lead", "shred", "bred", "fred", "ted",
];

impl Tagger for HeuristicTagger {
    fn tag(&self, words: &[String]) -> Vec<Pos> {
        words.iter().map(|w| tag_word(w)).collect()
    }
}

fn is_number(word: &str) -> bool {
    word.bytes().next().is_some_and(|b| b.is_ascii_digit()) && word.parse::<f64>().is_ok()
}

fn tag_word(w: &str) -> Pos {
    if is_number(w) {
        return Pos::Num;
    }
    let lists: [(&[&str], Pos); 7] = [
        (CONJ, Pos::Conj),
        (PREP, Pos::Prep),
        (DET, Pos::Det),
        (OTHER, Pos::Other),
        (ADV, Pos::Adv),
        (ADJ, Pos::Adj),
        (VERB, Pos::Verb),
    ];
    for (list, pos) in lists {
        if list.contains(&w) {
            return pos;
        }
    }
    let singular = w.strip_suffix('s').unwrap_or(w);
    if ING_NOUNS.contains(&w) || ING_NOUNS.contains(&singular) || ED_NOUNS.contains(&w) {
        return Pos::Noun;
    }
    if w.ends_with("ings") {
        return Pos::Noun;
    }
    if (w.len() > 4 && w.ends_with("ing")) || (w.len() > 3 && w.ends_with("ed")) {
        return Pos::Verb;
    }
    if w.len() > 3 && w.ends_with("ly") {
        return Pos::Adv;
    }
    Pos::Noun
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(q: &str) -> Vec<Pos> {
        let words: Vec<String> = q.split_whitespace().map(str::to_string).collect();
        HeuristicTagger.tag(&words)
    }

    #[test]
    fn default_rules() {
        assert_eq!(tags("show average gross"), [Pos::Verb, Pos::Adj, Pos::Noun]);
        assert_eq!(tags("and"), [Pos::Conj]);
        assert_eq!(tags("100000000"), [Pos::Num]);
        assert_eq!(tags("grossed rating quickly"), [Pos::Verb, Pos::Noun, Pos::Adv]);
        assert_eq!(tags("ratings earnings red"), [Pos::Noun, Pos::Noun, Pos::Noun]);
        assert_eq!(tags("between the"), [Pos::Prep, Pos::Det]);
    }
}
