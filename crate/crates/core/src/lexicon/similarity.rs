use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Syntactic,
    Semantic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub metric: Metric,
}

impl SimilarityScore {
    pub fn syntactic(value: f64) -> Self {
        Self {
            value,
            metric: Metric::Syntactic,
        }
    }

    pub fn semantic(value: f64) -> Self {
        Self {
            value,
            metric: Metric::Semantic,
        }
    }
}

/// Character unigram and bigram counts of a normalized string, sorted by
/// feature key so two profiles can be merged in linear time.
#[derive(Debug, Clone, PartialEq)]
pub struct CharProfile {
    features: Vec<(u64, u32)>,
    norm: f64,
}

impl CharProfile {
    pub fn new(text: &str) -> Self {
        let norm_text = normalize(text);
        let chars: Vec<char> = norm_text.chars().collect();
        let mut keys: Vec<u64> = Vec::with_capacity(chars.len() * 2);
        keys.extend(chars.iter().map(|&c| c as u64));
        keys.extend(chars.windows(2).map(|w| ((w[0] as u64 + 1) << 32) | w[1] as u64));
        keys.sort_unstable();
        let mut features: Vec<(u64, u32)> = Vec::new();
        for k in keys {
            match features.last_mut() {
                Some((last, n)) if *last == k => *n += 1,
                _ => features.push((k, 1)),
            }
        }
        let norm = features.iter().map(|&(_, n)| (n as f64) * (n as f64)).sum::<f64>().sqrt();
        Self { features, norm }
    }

    pub fn cosine(&self, other: &CharProfile) -> f64 {
        if self.features == other.features {
            return 1.0;
        }
        if self.norm == 0.0 || other.norm == 0.0 {
            return 0.0;
        }
        let (a, b) = (&self.features, &other.features);
        let (mut i, mut j) = (0, 0);
        let mut dot = 0u64;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    dot += a[i].1 as u64 * b[j].1 as u64;
                    i += 1;
                    j += 1;
                }
            }
        }
        (dot as f64 / (self.norm * other.norm)).clamp(0.0, 1.0)
    }
}

fn normalize(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Cosine similarity of character unigram+bigram count vectors.
pub fn cosine_sim(a: &str, b: &str) -> SimilarityScore {
    SimilarityScore::syntactic(CharProfile::new(a).cosine(&CharProfile::new(b)))
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use proptest::prelude::*;

    use super::*;

    /// Independent oracle: count features in a hash map and use the textbook formula.
    fn oracle(a: &str, b: &str) -> f64 {
        fn counts(s: &str) -> HashMap<String, f64> {
            let s = s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
            let cs: Vec<char> = s.chars().collect();
            let mut m = HashMap::new();
            for c in &cs {
                *m.entry(c.to_string()).or_insert(0.0) += 1.0;
            }
            for w in cs.windows(2) {
                *m.entry(format!("{}{}|", w[0], w[1])).or_insert(0.0) += 1.0;
            }
            m
        }
        let (x, y) = (counts(a), counts(b));
        let dot: f64 = x.iter().map(|(k, v)| v * y.get(k).copied().unwrap_or(0.0)).sum();
        let nx = x.values().map(|v| v * v).sum::<f64>().sqrt();
        let ny = y.values().map(|v| v * v).sum::<f64>().sqrt();
        if nx == 0.0 || ny == 0.0 {
            0.0
        } else {
            dot / (nx * ny)
        }
    }

    #[test]
    fn frozen_values() {
        assert_eq!(cosine_sim("budget", "budget").value, 1.0);
        // 8 / sqrt(9 * 11)
        assert!((cosine_sim("ratng", "rating").value - 0.804_030_252_207_8).abs() < 1e-12);
        assert!(cosine_sim("ratng", "rating").value >= 0.8);
        // 2 / sqrt(11 * 11)
        assert!((cosine_sim("gross", "genre").value - 0.181_818_181_818_2).abs() < 1e-12);
        assert!(cosine_sim("gross", "genre").value < 0.8);
        assert!(cosine_sim("histogram", "imdb rating").value < 0.8);
    }

    #[test]
    fn normalization() {
        assert_eq!(cosine_sim("Worldwide  Gross", "worldwide gross").value, 1.0);
    }

    proptest! {
        #[test]
        fn agrees_with_oracle(a in "[a-z][a-z ]{0,11}", b in "[a-z][a-z ]{0,11}") {
            let got = cosine_sim(&a, &b).value;
            let want = oracle(&a, &b);
            prop_assert!((got - want).abs() < 1e-9 || (want > 1.0 - 1e-9 && got == 1.0));
        }

        #[test]
        fn symmetric_and_bounded(a in "\\PC{1,16}", b in "\\PC{1,16}") {
            let ab = cosine_sim(&a, &b).value;
            prop_assert_eq!(ab, cosine_sim(&b, &a).value);
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn identity(a in "[a-zA-Z0-9]{1,16}") {
            prop_assert_eq!(cosine_sim(&a, &a).value, 1.0);
        }
    }
}
