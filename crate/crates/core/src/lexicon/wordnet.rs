//! WordNet hypernym graph read from Princeton database files, and Wu-Palmer
//! similarity over it.

use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use super::similarity::SimilarityScore;
use super::stem::porter_stem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartOfSpeech {
    Noun,
    Verb,
}

impl PartOfSpeech {
    fn tag(self) -> &'static str {
        match self {
            Self::Noun => "n",
            Self::Verb => "v",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Synset {
    pub offset: u32,
    pub pos: PartOfSpeech,
    pub lemmas: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct WordNetGraph {
    synsets: Vec<Synset>,
    parents: Vec<Vec<usize>>,
    depth: Vec<u32>,
    by_offset: HashMap<(PartOfSpeech, u32), usize>,
    index: HashMap<(PartOfSpeech, String), Vec<usize>>,
}

/// Senses of one word with each sense's ancestor distances, ready for
/// repeated Wu-Palmer comparisons.
#[derive(Debug, Clone, Default)]
pub struct SenseProfile {
    senses: Vec<(PartOfSpeech, HashMap<usize, u32>)>,
}

impl SenseProfile {
    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }
}

const BUNDLED_NOUN_DATA: &str = include_str!("../../resources/wordnet/data.noun");
const BUNDLED_NOUN_INDEX: &str = include_str!("../../resources/wordnet/index.noun");
const BUNDLED_VERB_DATA: &str = include_str!("../../resources/wordnet/data.verb");
const BUNDLED_VERB_INDEX: &str = include_str!("../../resources/wordnet/index.verb");

/// Load a WordNet graph from a directory holding `data.noun`/`index.noun`
/// and optionally `data.verb`/`index.verb`.
pub fn load_wordnet(path: impl AsRef<Path>) -> Result<WordNetGraph> {
    let dir = path.as_ref();
    let read = |name: &str| -> Result<String> {
        std::fs::read_to_string(dir.join(name)).map_err(|e| Error::Resource {
            path: dir.join(name),
            message: e.to_string(),
        })
    };
    let noun_data = read("data.noun")?;
    let noun_index = read("index.noun")?;
    let verb = if dir.join("data.verb").exists() {
        Some((read("data.verb")?, read("index.verb")?))
    } else {
        None
    };
    let mut sources = vec![(PartOfSpeech::Noun, noun_data.as_str(), noun_index.as_str())];
    if let Some((d, i)) = &verb {
        sources.push((PartOfSpeech::Verb, d.as_str(), i.as_str()));
    }
    WordNetGraph::from_sources(&sources).map_err(|message| Error::Resource {
        path: dir.to_path_buf(),
        message,
    })
}

impl WordNetGraph {
    /// The trimmed noun/verb subset compiled into the library.
    pub fn bundled() -> Arc<WordNetGraph> {
        static GRAPH: OnceLock<Arc<WordNetGraph>> = OnceLock::new();
        GRAPH
            .get_or_init(|| {
                Arc::new(
                    WordNetGraph::from_sources(&[
                        (PartOfSpeech::Noun, BUNDLED_NOUN_DATA, BUNDLED_NOUN_INDEX),
                        (PartOfSpeech::Verb, BUNDLED_VERB_DATA, BUNDLED_VERB_INDEX),
                    ])
                    .expect("bundled WordNet subset is well formed"),
                )
            })
            .clone()
    }

    /// Build from `(pos, data file text, index file text)` triples.
    pub fn from_sources(sources: &[(PartOfSpeech, &str, &str)]) -> std::result::Result<Self, String> {
        let mut g = WordNetGraph::default();
        let mut pending: Vec<Vec<(PartOfSpeech, u32)>> = Vec::new();
        for &(pos, data, _) in sources {
            for (lineno, line) in data.lines().enumerate() {
                if line.starts_with("  ") || line.trim().is_empty() {
                    continue;
                }
                let (synset, parents) =
                    parse_data_line(line, pos).map_err(|m| format!("data.{} line {}: {m}", pos_name(pos), lineno + 1))?;
                let id = g.synsets.len();
                if g.by_offset.insert((pos, synset.offset), id).is_some() {
                    return Err(format!("duplicate synset offset {}", synset.offset));
                }
                g.synsets.push(synset);
                pending.push(parents);
            }
        }
        g.parents = pending
            .into_iter()
            .map(|ps| ps.iter().filter_map(|k| g.by_offset.get(k).copied()).collect())
            .collect();
        for &(pos, _, index) in sources {
            for (lineno, line) in index.lines().enumerate() {
                if line.starts_with("  ") || line.trim().is_empty() {
                    continue;
                }
                let (lemma, offsets) =
                    parse_index_line(line).map_err(|m| format!("index.{} line {}: {m}", pos_name(pos), lineno + 1))?;
                let ids: Vec<usize> = offsets.iter().filter_map(|o| g.by_offset.get(&(pos, *o)).copied()).collect();
                if !ids.is_empty() {
                    g.index.insert((pos, lemma), ids);
                }
            }
        }
        // Lemmas present in data files but absent from the index still resolve.
        for (id, s) in g.synsets.iter().enumerate() {
            for lemma in &s.lemmas {
                let entry = g.index.entry((s.pos, lemma.clone())).or_default();
                if !entry.contains(&id) {
                    entry.push(id);
                }
            }
        }
        g.compute_depths();
        Ok(g)
    }

    fn compute_depths(&mut self) {
        let n = self.synsets.len();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (child, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                children[p].push(child);
            }
        }
        let mut depth = vec![0u32; n];
        let mut queue = VecDeque::new();
        for (id, ps) in self.parents.iter().enumerate() {
            if ps.is_empty() {
                depth[id] = 1;
                queue.push_back(id);
            }
        }
        while let Some(id) = queue.pop_front() {
            for &c in &children[id] {
                if depth[c] == 0 {
                    depth[c] = depth[id] + 1;
                    queue.push_back(c);
                }
            }
        }
        // Synsets only reachable through a cycle get treated as roots.
        for d in depth.iter_mut().filter(|d| **d == 0) {
            *d = 1;
        }
        self.depth = depth;
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: usize) -> &Synset {
        &self.synsets[id]
    }

    pub fn parents(&self, id: usize) -> &[usize] {
        &self.parents[id]
    }

    /// Minimum depth from a root; roots have depth 1.
    pub fn depth(&self, id: usize) -> u32 {
        self.depth[id]
    }

    pub fn find(&self, pos: PartOfSpeech, offset: u32) -> Option<usize> {
        self.by_offset.get(&(pos, offset)).copied()
    }

    /// Synsets listing `lemma` exactly, in sense order.
    pub fn synsets_for(&self, lemma: &str, pos: PartOfSpeech) -> &[usize] {
        self.index
            .get(&(pos, lemma.to_lowercase().replace(' ', "_")))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Senses of a surface word after inflection stripping; the Porter stem
    /// is tried only when no base form is found.
    pub fn lookup(&self, word: &str) -> Vec<(PartOfSpeech, usize)> {
        let word = word.to_lowercase();
        let mut out: Vec<(PartOfSpeech, usize)> = Vec::new();
        for pos in [PartOfSpeech::Noun, PartOfSpeech::Verb] {
            for cand in base_forms(&word, pos) {
                for &id in self.synsets_for(&cand, pos) {
                    if !out.contains(&(pos, id)) {
                        out.push((pos, id));
                    }
                }
            }
        }
        if out.is_empty() {
            let stem = porter_stem(&word);
            for pos in [PartOfSpeech::Noun, PartOfSpeech::Verb] {
                out.extend(self.synsets_for(&stem, pos).iter().map(|&id| (pos, id)));
            }
        }
        out
    }

    /// Every ancestor of `id` (itself included) with its shortest upward distance.
    pub fn ancestors(&self, id: usize) -> HashMap<usize, u32> {
        let mut dist = HashMap::new();
        dist.insert(id, 0);
        let mut queue = VecDeque::from([id]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            for &p in &self.parents[cur] {
                if !dist.contains_key(&p) {
                    dist.insert(p, d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    pub fn sense_profile(&self, word: &str) -> SenseProfile {
        SenseProfile {
            senses: self
                .lookup(word)
                .into_iter()
                .map(|(pos, id)| (pos, self.ancestors(id)))
                .collect(),
        }
    }

    /// Wu-Palmer similarity of two synsets: the best common subsumer c
    /// maximizes 2·depth(c) / (2·depth(c) + dist(a, c) + dist(b, c)).
    pub fn wup_synsets(&self, a: usize, b: usize) -> f64 {
        self.wup_maps(&self.ancestors(a), &self.ancestors(b))
    }

    fn wup_maps(&self, a: &HashMap<usize, u32>, b: &HashMap<usize, u32>) -> f64 {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut best = 0.0f64;
        for (&c, &da) in small {
            if let Some(&db) = large.get(&c) {
                let two_d = 2.0 * self.depth[c] as f64;
                best = best.max(two_d / (two_d + da as f64 + db as f64));
            }
        }
        best
    }

    /// Best score over all same-part-of-speech sense pairs; 0 when either
    /// side has no senses.
    pub fn wup_profiles(&self, a: &SenseProfile, b: &SenseProfile) -> f64 {
        let mut best = 0.0f64;
        for (pa, ma) in &a.senses {
            for (pb, mb) in &b.senses {
                if pa == pb {
                    best = best.max(self.wup_maps(ma, mb));
                    if best >= 1.0 {
                        return 1.0;
                    }
                }
            }
        }
        best
    }

    pub fn wup_sim(&self, a: &str, b: &str) -> SimilarityScore {
        SimilarityScore::semantic(self.wup_profiles(&self.sense_profile(a), &self.sense_profile(b)))
    }
}

fn pos_name(pos: PartOfSpeech) -> &'static str {
    match pos {
        PartOfSpeech::Noun => "noun",
        PartOfSpeech::Verb => "verb",
    }
}

fn parse_data_line(line: &str, pos: PartOfSpeech) -> std::result::Result<(Synset, Vec<(PartOfSpeech, u32)>), String> {
    let body = line.split(" | ").next().unwrap_or(line);
    let mut f = body.split_whitespace();
    let mut next = |what: &str| f.next().ok_or_else(|| format!("missing {what}"));
    let offset: u32 = next("offset")?.parse().map_err(|_| "bad offset".to_string())?;
    next("lexicographer file")?;
    let ss_type = next("synset type")?;
    if ss_type != pos.tag() {
        return Err(format!("synset type `{ss_type}` in {} file", pos_name(pos)));
    }
    let w_cnt = usize::from_str_radix(next("word count")?, 16).map_err(|_| "bad word count".to_string())?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        lemmas.push(next("lemma")?.to_lowercase());
        next("lex id")?;
    }
    let p_cnt: usize = next("pointer count")?.parse().map_err(|_| "bad pointer count".to_string())?;
    let mut parents = Vec::new();
    for _ in 0..p_cnt {
        let symbol = next("pointer symbol")?;
        let target: u32 = next("pointer offset")?.parse().map_err(|_| "bad pointer offset".to_string())?;
        let target_pos = next("pointer pos")?;
        next("pointer source/target")?;
        if (symbol == "@" || symbol == "@i") && target_pos == pos.tag() {
            parents.push((pos, target));
        }
    }
    Ok((Synset { offset, pos, lemmas }, parents))
}

fn parse_index_line(line: &str) -> std::result::Result<(String, Vec<u32>), String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() < 4 {
        return Err("too few fields".into());
    }
    let synset_cnt: usize = f[2].parse().map_err(|_| "bad synset count".to_string())?;
    if synset_cnt > f.len() {
        return Err("synset count exceeds fields".into());
    }
    let offsets = f[f.len() - synset_cnt..]
        .iter()
        .map(|o| o.parse::<u32>().map_err(|_| format!("bad offset `{o}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((f[0].to_lowercase(), offsets))
}

/// Candidate base forms: the word itself, then inflection-stripped variants.
fn base_forms(word: &str, pos: PartOfSpeech) -> Vec<String> {
    let rules: &[(&str, &str)] = match pos {
        PartOfSpeech::Noun => &[
            ("s", ""),
            ("ses", "s"),
            ("xes", "x"),
            ("zes", "z"),
            ("ches", "ch"),
            ("shes", "sh"),
            ("men", "man"),
            ("ies", "y"),
        ],
        PartOfSpeech::Verb => &[
            ("s", ""),
            ("ies", "y"),
            ("es", "e"),
            ("es", ""),
            ("ed", "e"),
            ("ed", ""),
            ("ing", "e"),
            ("ing", ""),
        ],
    };
    let mut out = vec![word.to_string()];
    for (suffix, with) in rules {
        if let Some(stem) = word.strip_suffix(suffix) {
            if !stem.is_empty() {
                let cand = format!("{stem}{with}");
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_root_depth() {
        let g = WordNetGraph::bundled();
        let entity = g.synsets_for("entity", PartOfSpeech::Noun)[0];
        assert_eq!(g.depth(entity), 1);
        assert!(g.parents(entity).is_empty());
    }

    #[test]
    fn shared_synsets_score_one() {
        let g = WordNetGraph::bundled();
        assert_eq!(g.wup_sim("movie", "movie").value, 1.0);
        assert_eq!(g.wup_sim("film", "movie").value, 1.0);
        assert_eq!(g.wup_sim("car", "automobile").value, 1.0);
        assert_eq!(g.wup_sim("movies", "films").value, 1.0);
    }

    #[test]
    fn no_synset_scores_zero() {
        let g = WordNetGraph::bundled();
        assert_eq!(g.wup_sim("budget", "and").value, 0.0);
        assert_eq!(g.wup_sim("budget", "qzxv").value, 0.0);
    }

    #[test]
    fn unrelated_words_below_threshold() {
        let g = WordNetGraph::bundled();
        assert!(g.wup_sim("budget", "genre").value < 0.8);
        assert!(g.wup_sim("histogram", "rating").value < 0.8);
    }

    #[test]
    fn inflected_lookup() {
        let g = WordNetGraph::bundled();
        assert!(!g.lookup("grossed").is_empty());
        assert!(!g.lookup("medals").is_empty());
        assert!(!g.lookup("duplexes").is_empty());
    }

    #[test]
    fn missing_dir_is_resource_error() {
        let err = load_wordnet("/nonexistent/wordnet").unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn corrupt_file_is_resource_error() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("data.noun"), "00000000 03 n zz entity\n").unwrap();
        std::fs::write(dir.path().join("index.noun"), "").unwrap();
        assert!(matches!(load_wordnet(dir.path()), Err(Error::Resource { .. })));
    }

    #[test]
    fn loads_directory_copy() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/resources/wordnet");
        let g = load_wordnet(dir).unwrap();
        assert_eq!(g.len(), WordNetGraph::bundled().len());
    }
}
