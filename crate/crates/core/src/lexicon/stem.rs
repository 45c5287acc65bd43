//! The original Porter (1980) suffix-stripping stemmer.

/// Stem a lowercase alphabetic token. Anything else is returned unchanged.
pub fn porter_stem(token: &str) -> String {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut w = Word(token.as_bytes().to_vec());
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5a();
    w.step5b();
    String::from_utf8(w.0).expect("ascii in, ascii out")
}

struct Word(Vec<u8>);

fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Number of VC sequences in `w`.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let c = is_consonant(w, i);
        if c && prev_vowel {
            m += 1;
        }
        prev_vowel = !c;
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

/// consonant-vowel-consonant ending, last consonant not w, x or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

impl Word {
    fn ends(&self, suffix: &str) -> bool {
        self.0.ends_with(suffix.as_bytes())
    }

    fn stem_len(&self, suffix: &str) -> usize {
        self.0.len() - suffix.len()
    }

    fn replace(&mut self, suffix: &str, with: &str) {
        let n = self.stem_len(suffix);
        self.0.truncate(n);
        self.0.extend_from_slice(with.as_bytes());
    }

    /// Apply the first rule whose suffix matches, if `cond` holds on its stem.
    fn apply_rules(&mut self, rules: &[(&str, &str)], cond: impl Fn(&[u8], &str) -> bool) {
        for (suffix, with) in rules {
            if self.ends(suffix) {
                let stem = &self.0[..self.stem_len(suffix)];
                if cond(stem, suffix) {
                    self.replace(suffix, with);
                }
                return;
            }
        }
    }

    fn step1a(&mut self) {
        self.apply_rules(&[("sses", "ss"), ("ies", "i"), ("ss", "ss"), ("s", "")], |_, _| true);
    }

    fn step1b(&mut self) {
        if self.ends("eed") {
            if measure(&self.0[..self.stem_len("eed")]) > 0 {
                self.replace("eed", "ee");
            }
            return;
        }
        let mut removed = false;
        for suffix in ["ed", "ing"] {
            if self.ends(suffix) && has_vowel(&self.0[..self.stem_len(suffix)]) {
                self.replace(suffix, "");
                removed = true;
                break;
            }
        }
        if !removed {
            return;
        }
        if self.ends("at") || self.ends("bl") || self.ends("iz") {
            self.0.push(b'e');
        } else if ends_double_consonant(&self.0) && !matches!(self.0[self.0.len() - 1], b'l' | b's' | b'z') {
            self.0.pop();
        } else if measure(&self.0) == 1 && ends_cvc(&self.0) {
            self.0.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && has_vowel(&self.0[..self.0.len() - 1]) {
            self.replace("y", "i");
        }
    }

    fn step2(&mut self) {
        self.apply_rules(
            &[
                ("ational", "ate"),
                ("tional", "tion"),
                ("enci", "ence"),
                ("anci", "ance"),
                ("izer", "ize"),
                ("abli", "able"),
                ("alli", "al"),
                ("entli", "ent"),
                ("eli", "e"),
                ("ousli", "ous"),
                ("ization", "ize"),
                ("ation", "ate"),
                ("ator", "ate"),
                ("alism", "al"),
                ("iveness", "ive"),
                ("fulness", "ful"),
                ("ousness", "ous"),
                ("aliti", "al"),
                ("iviti", "ive"),
                ("biliti", "ble"),
            ],
            |stem, _| measure(stem) > 0,
        );
    }

    fn step3(&mut self) {
        self.apply_rules(
            &[
                ("icate", "ic"),
                ("ative", ""),
                ("alize", "al"),
                ("iciti", "ic"),
                ("ical", "ic"),
                ("ful", ""),
                ("ness", ""),
            ],
            |stem, _| measure(stem) > 0,
        );
    }

    fn step4(&mut self) {
        self.apply_rules(
            &[
                ("al", ""),
                ("ance", ""),
                ("ence", ""),
                ("er", ""),
                ("ic", ""),
                ("able", ""),
                ("ible", ""),
                ("ant", ""),
                ("ement", ""),
                ("ment", ""),
                ("ent", ""),
                ("ion", ""),
                ("ou", ""),
                ("ism", ""),
                ("ate", ""),
                ("iti", ""),
                ("ous", ""),
                ("ive", ""),
                ("ize", ""),
            ],
            |stem, suffix| {
                measure(stem) > 1 && (suffix != "ion" || matches!(stem.last(), Some(b's' | b't')))
            },
        );
    }

    fn step5a(&mut self) {
        if self.ends("e") {
            let stem = &self.0[..self.0.len() - 1];
            let m = measure(stem);
            if m > 1 || (m == 1 && !ends_cvc(stem)) {
                self.0.pop();
            }
        }
    }

    fn step5b(&mut self) {
        if measure(&self.0) > 1 && self.ends("ll") {
            self.0.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::porter_stem;

    // Reference outputs from NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode.
    const ORACLE: &[(&str, &str)] = include!("../../tests/data/porter_oracle.in");

    #[test]
    fn matches_reference_implementation() {
        let mut bad = Vec::new();
        for (word, want) in ORACLE {
            let got = porter_stem(word);
            if got != *want {
                bad.push(format!("{word}: got {got}, want {want}"));
            }
        }
        assert!(bad.is_empty(), "{} mismatches:\n{}", bad.len(), bad.join("\n"));
    }

    #[test]
    fn query_examples() {
        assert_eq!(porter_stem("grossed"), "gross");
        assert_eq!(porter_stem("rating"), "rate");
        assert_eq!(porter_stem("and"), "and");
    }

    #[test]
    fn non_alphabetic_unchanged() {
        assert_eq!(porter_stem("100000000"), "100000000");
        assert_eq!(porter_stem("pg13"), "pg13");
        assert_eq!(porter_stem("Rating"), "Rating");
        assert_eq!(porter_stem(""), "");
    }
}
