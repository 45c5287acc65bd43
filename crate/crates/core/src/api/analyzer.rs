use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use indexmap::IndexMap;

use super::config::Config;
use super::response::{AnalyticSpec, DebugInfo, KeywordConflict, NgramMatch};
use crate::attr::{
    match_ngrams, resolve_matches, AttributeMatch, AttributeResolution, DroppedCandidate, MatchOptions, ResolutionOverrides,
};
use crate::error::{Error, Result};
use crate::ingest::{set_alias_map, set_attribute_type, AttrType, DatasetProfile};
use crate::lexicon::{build_lexicon, load_wordnet, porter_stem, surface_tokens, Lexicon, WordNetGraph};
use crate::parse::{parse_query, HeuristicRelations, HeuristicTagger, ParseOptions, ParsedQuery};
use crate::task::{
    extract_filters, find_keywords, infer_implicit_tasks, insert_task, instances_for, KeywordKeys, Operator,
    TaskInstance, TaskKind, TaskMap,
};
use crate::vis::{
    detect_explicit_vis, enumerate_combinations, filter_only_table, generate_spec, rank_vis, ChartId, VegaLiteSpec,
    VisContext,
};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalyzeOptions {
    pub dialog: bool,
    pub debug: bool,
    pub overrides: Option<ResolutionOverrides>,
}

/// What a follow-up query needs from the one before it.
#[derive(Debug, Clone)]
struct DialogState {
    resolution: AttributeResolution,
    tasks: Vec<TaskInstance>,
    filters: Vec<TaskInstance>,
    request: Option<ChartId>,
}

/// Follow-up state for one conversation.
#[derive(Debug, Clone, Default)]
pub struct SessionContext {
    pub previous: Option<AnalyticSpec>,
    pub dataset_id: String,
    pub dialog_active: bool,
    state: Option<DialogState>,
}

impl SessionContext {
    pub fn new(dataset_id: impl Into<String>) -> Self {
        Self {
            dataset_id: dataset_id.into(),
            ..Default::default()
        }
    }

    pub fn clear(&mut self) {
        self.previous = None;
        self.state = None;
        self.dialog_active = false;
    }
}

/// One dataset plus configuration, ready to answer queries.
pub struct Analyzer {
    profile: Arc<DatasetProfile>,
    config: Config,
    wordnet: Option<Arc<WordNetGraph>>,
    lexicon: Lexicon,
    stopwords: HashSet<String>,
    keep_list: HashSet<String>,
    task_keys: KeywordKeys,
    vis_keys: Vec<(String, ChartId)>,
    task_stems: HashSet<String>,
    keyword_stems: HashSet<String>,
    boundary_words: HashSet<String>,
    record_nouns: HashSet<String>,
    warnings: Vec<String>,
    data_name: String,
    session: SessionContext,
}

impl Analyzer {
    pub fn new(profile: DatasetProfile, config: Config) -> Result<Self> {
        Self::from_shared(Arc::new(profile), config)
    }

    pub fn from_shared(profile: Arc<DatasetProfile>, config: Config) -> Result<Self> {
        config.validate()?;
        let mut warnings: Vec<String> = profile.warnings().to_vec();
        let wordnet = if !config.semantic_matching {
            None
        } else if let Some(path) = &config.wordnet_path {
            match load_wordnet(path) {
                Ok(g) => Some(Arc::new(g)),
                Err(e) => {
                    warnings.push(format!("{e}; semantic matching disabled"));
                    None
                }
            }
        } else {
            Some(WordNetGraph::bundled())
        };

        let stopwords: HashSet<String> = config
            .stopwords
            .iter()
            .chain(&config.special_word_lists.extra_stopwords)
            .map(|s| s.to_lowercase())
            .collect();
        let keep_list: HashSet<String> = config.stopword_keep_list.iter().map(|s| s.to_lowercase()).collect();
        let key = |surface: &str| -> Vec<String> {
            surface_tokens(&surface.to_lowercase())
                .into_iter()
                .filter(|t| !stopwords.contains(t) || keep_list.contains(t))
                .map(|t| porter_stem(&t))
                .collect()
        };

        let mut task_keys: KeywordKeys = Vec::new();
        let mut task_stems = HashSet::new();
        let mut keyword_stems = HashSet::new();
        for kw in &config.task_keyword_table {
            let stems = key(&kw.keyword);
            if stems.is_empty() {
                continue;
            }
            if stems.len() == 1 {
                task_stems.insert(stems[0].clone());
            }
            keyword_stems.extend(stems.iter().cloned());
            task_keys.push((stems.join(" "), kw.task.as_str().to_string(), kw.operator));
        }
        let mut vis_keys = Vec::new();
        for kw in &config.vis_keyword_table {
            let stems = key(&kw.keyword);
            if stems.is_empty() {
                continue;
            }
            keyword_stems.extend(stems.iter().cloned());
            vis_keys.push((stems.join(" "), kw.chart));
        }
        let boundary_words = config.special_word_lists.boundary_words.iter().map(|s| s.to_lowercase()).collect();

        let lexicon = build_lexicon(
            &profile,
            &config.task_keyword_table,
            &config.vis_keyword_table,
            wordnet.as_deref(),
        );
        Ok(Self {
            profile,
            config,
            wordnet,
            lexicon,
            stopwords,
            keep_list,
            task_keys,
            vis_keys,
            task_stems,
            keyword_stems,
            boundary_words,
            record_nouns: HashSet::new(),
            warnings,
            data_name: "data".to_string(),
            session: SessionContext::default(),
        })
    }

    /// Name used for the `data` reference in emitted specs.
    /// The name's words are also taken as nouns for the records themselves
    /// ("cars" for `cars.csv`), which never match an attribute alone.
    pub fn with_data_name(mut self, name: impl Into<String>) -> Self {
        self.data_name = name.into();
        self.record_nouns = surface_tokens(&self.data_name.to_lowercase())
            .iter()
            .filter(|t| t.chars().any(char::is_alphabetic))
            .map(|t| porter_stem(t))
            .collect();
        self
    }

    pub fn data_name(&self) -> &str {
        &self.data_name
    }

    pub fn profile(&self) -> &DatasetProfile {
        &self.profile
    }

    pub fn shared_profile(&self) -> Arc<DatasetProfile> {
        Arc::clone(&self.profile)
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn session(&self) -> &SessionContext {
        &self.session
    }

    /// Swap in a new profile and rebuild the lexicon. Dialog state is cleared.
    pub fn set_profile(&mut self, profile: DatasetProfile) {
        self.profile = Arc::new(profile);
        self.lexicon = build_lexicon(
            &self.profile,
            &self.config.task_keyword_table,
            &self.config.vis_keyword_table,
            self.wordnet.as_deref(),
        );
        self.session.clear();
    }

    pub fn set_attribute_type(&mut self, attribute: &str, new_type: AttrType) -> Result<()> {
        let updated = set_attribute_type(&self.profile, attribute, new_type)?;
        self.set_profile(updated);
        Ok(())
    }

    pub fn set_alias_map<S: AsRef<str>>(&mut self, aliases: &IndexMap<String, Vec<S>>) -> Result<()> {
        let updated = set_alias_map(&self.profile, aliases)?;
        self.set_profile(updated);
        Ok(())
    }

    pub fn parse(&self, query: &str) -> ParsedQuery {
        parse_query(
            query,
            &ParseOptions {
                stopwords: &self.stopwords,
                keep_list: &self.keep_list,
                max_n: self.config.max_n,
                task_stems: &self.task_stems,
                tagger: &HeuristicTagger,
                relations: &HeuristicRelations,
            },
        )
    }

    /// Analyze with the built-in session.
    pub fn analyze_query(
        &mut self,
        query: &str,
        dialog: bool,
        debug: bool,
        overrides: Option<&ResolutionOverrides>,
    ) -> Result<AnalyticSpec> {
        let opts = AnalyzeOptions {
            dialog,
            debug,
            overrides: overrides.cloned(),
        };
        let mut session = std::mem::take(&mut self.session);
        let out = self.analyze(query, &opts, &mut session);
        self.session = session;
        out
    }

    /// The top chart for a query, with the dataset rows inlined.
    pub fn render_vis(&mut self, query: &str, dialog: bool) -> Result<VegaLiteSpec> {
        let spec = self.analyze_query(query, dialog, false, None)?;
        let mut vl = spec.vis_list.into_iter().next().ok_or(Error::NoVisualization)?.vl_spec;
        vl.data.values = Some(self.profile.records_json(None));
        Ok(vl)
    }

    fn check_overrides(&self, overrides: &ResolutionOverrides) -> Result<()> {
        for attr in overrides.attributes.values() {
            if self.profile.attribute(attr).is_none() {
                return Err(Error::InvalidOverride(format!("unknown attribute `{attr}`")));
            }
        }
        for v in &overrides.values {
            let Some(meta) = self.profile.attribute(&v.attribute) else {
                return Err(Error::InvalidOverride(format!("unknown attribute `{}`", v.attribute)));
            };
            if let Some(bad) = v.values.iter().find(|x| !meta.domain.values().contains(x)) {
                return Err(Error::InvalidOverride(format!(
                    "`{bad}` is not a value of `{}`",
                    v.attribute
                )));
            }
        }
        Ok(())
    }

    /// Every n-gram/attribute match at the configured threshold, before
    /// ambiguity resolution.
    pub fn match_attributes(&self, parsed: &ParsedQuery) -> Vec<AttributeMatch> {
        let opts = MatchOptions {
            threshold: self.config.similarity_threshold,
            keyword_stems: &self.keyword_stems,
            boundary_words: &self.boundary_words,
            record_nouns: &self.record_nouns,
        };
        let mut matches = match_ngrams(parsed, &self.lexicon, self.wordnet.as_deref(), &opts);
        self.drop_keyword_overlaps(parsed, &mut matches);
        matches
    }

    /// Matches lying inside a multiword task keyword ("over time") belong to
    /// the keyword, except temporal attributes which it refers to anyway.
    fn drop_keyword_overlaps(&self, parsed: &ParsedQuery, matches: &mut Vec<AttributeMatch>) {
        let spans: Vec<(usize, usize)> = parsed
            .ngrams
            .iter()
            .filter(|g| g.n > 1 && self.task_keys.iter().any(|(k, _, _)| *k == g.text))
            .map(|g| g.span)
            .collect();
        if spans.is_empty() {
            return;
        }
        matches.retain(|m| {
            let inside = spans.iter().any(|s| s.0 <= m.span.0 && m.span.1 <= s.1);
            !inside
                || self
                    .profile
                    .attribute(&m.attribute)
                    .is_some_and(|a| a.attr_type == AttrType::Temporal)
        });
    }

    /// Run the full pipeline against an explicit session context.
    pub fn analyze(&self, query: &str, opts: &AnalyzeOptions, session: &mut SessionContext) -> Result<AnalyticSpec> {
        if query.trim().is_empty() {
            return Err(Error::EmptyQuery);
        }
        if let Some(o) = &opts.overrides {
            self.check_overrides(o)?;
        }
        let mut timings: IndexMap<String, f64> = IndexMap::new();
        let mut clock = Instant::now();
        let mut lap = |name: &str, timings: &mut IndexMap<String, f64>| {
            timings.insert(name.to_string(), clock.elapsed().as_secs_f64() * 1000.0);
            clock = Instant::now();
        };

        let parsed = self.parse(query);
        lap("parse", &mut timings);

        let matches = self.match_attributes(&parsed);
        let mut resolution = resolve_matches(matches, opts.overrides.as_ref(), self.config.ambiguity_margin);
        lap("attributes", &mut timings);

        let (hits, conflicts) = find_keywords(&parsed, &self.task_keys, &resolution);
        let (filters, dropped_filters) = extract_filters(&parsed, &mut resolution, &self.profile);
        let mut tasks: Vec<TaskInstance> = Vec::new();
        for hit in &hits {
            let Some(kind) = TaskKind::from_id(&hit.canonical) else { continue };
            for inst in instances_for(kind, hit.operator, hit, &parsed, &resolution, &self.profile) {
                if !tasks.iter().any(|t| t == &inst) {
                    tasks.push(inst);
                }
            }
        }
        let request = detect_explicit_vis(&parsed, &self.vis_keys);
        lap("tasks", &mut timings);

        let mut dropped: Vec<DroppedCandidate> = resolution.dropped.clone();
        dropped.extend(dropped_filters);
        let matched = resolution.matches.clone();

        let mut state = DialogState {
            resolution,
            tasks,
            filters,
            request: request.as_ref().map(|r| r.chart_id),
        };
        let mut dialog_case = None;
        if !opts.dialog {
            session.clear();
        } else if let Some(prev) = &session.state {
            dialog_case = merge_followup(prev, &mut state);
        }

        let mut task_map = TaskMap::new();
        for t in state.tasks.iter().chain(&state.filters) {
            insert_task(&mut task_map, t.clone());
        }

        let mut vis_list = Vec::new();
        let mut ranking_scores = Vec::new();
        if self.config.generate_vis {
            let ctx = VisContext {
                profile: &self.profile,
                tasks: &state.tasks,
                filters: &state.filters,
                request: state.request,
                data_name: &self.data_name,
            };
            let combos = enumerate_combinations(&state.resolution);
            let mut charts = Vec::with_capacity(combos.len());
            for combo in &combos {
                charts.push(generate_spec(combo, &ctx)?);
            }
            if charts.is_empty() && !state.filters.is_empty() {
                charts.push(filter_only_table(&ctx));
            }
            let implied: Vec<(TaskKind, Vec<String>)> = charts
                .iter()
                .filter_map(|c| c.task.map(|t| (t, c.task_attributes.clone())))
                .collect();
            let (list, scores) = rank_vis(charts, &ctx, &state.resolution.map, &self.config.ranking_weights);
            vis_list = list;
            ranking_scores = scores;

            let has_base = state.tasks.iter().any(|t| t.task != TaskKind::Filter);
            if !has_base {
                // Implicit tasks follow the ranked order.
                let mut ordered: Vec<(TaskKind, Vec<String>)> = Vec::new();
                for entry in &vis_list {
                    if let Some((t, a)) = implied.iter().find(|(t, a)| {
                        entry.tasks.contains(t) && a.iter().all(|x| entry.vl_spec.encoding.fields().contains(x))
                    }) {
                        if !ordered.contains(&(*t, a.clone())) {
                            ordered.push((*t, a.clone()));
                        }
                    }
                }
                for inst in infer_implicit_tasks(&ordered, &task_map) {
                    insert_task(&mut task_map, inst);
                }
            }
        }
        lap("vis", &mut timings);

        let debug = opts.debug.then(|| {
            let mut warnings = self.warnings.clone();
            if self.wordnet.is_none() && self.config.semantic_matching {
                warnings.push("semantic matching unavailable".into());
            }
            DebugInfo {
                ngram_matches: matched
                    .iter()
                    .map(|m| NgramMatch {
                        query_phrase: m.query_phrase.clone(),
                        ngram: m.ngram_text.clone(),
                        span: m.span,
                        attribute: m.attribute.clone(),
                        kind: m.kind,
                        value: m.value.clone(),
                        score: m.score.value,
                        metric: m.score.metric,
                    })
                    .collect(),
                dropped_candidates: dropped,
                keyword_conflicts: conflicts
                    .iter()
                    .map(|c| KeywordConflict {
                        query_phrase: c.surface.clone(),
                        keyword: c.canonical.clone(),
                        resolution: "attribute match preferred".into(),
                    })
                    .collect(),
                chart_request: request.clone(),
                ranking_scores,
                dialog: dialog_case.map(str::to_string),
                warnings,
                timings,
            }
        });

        let spec = AnalyticSpec {
            attribute_map: state.resolution.map.clone(),
            task_map,
            vis_list,
            debug,
        };
        if opts.dialog {
            let mut remembered = spec.clone();
            remembered.debug = None;
            session.previous = Some(remembered);
            session.dialog_active = true;
            session.state = Some(state);
        }
        Ok(spec)
    }
}

/// Fold the previous query's state into a follow-up. Returns the rule applied.
fn merge_followup(prev: &DialogState, cur: &mut DialogState) -> Option<&'static str> {
    let has_base = cur.tasks.iter().any(|t| t.task != TaskKind::Filter);
    if cur.resolution.map.is_empty() {
        cur.resolution = prev.resolution.clone();
        cur.tasks = prev.tasks.clone();
        cur.filters = prev.filters.clone();
        cur.request = cur.request.or(prev.request);
        return Some(if cur.request != prev.request {
            "chart request applied to previous attributes"
        } else {
            "previous attributes inherited"
        });
    }
    let filter_only = !has_base && cur.resolution.map.values().all(|e| !e.encode) && !cur.filters.is_empty();
    if !filter_only {
        return None;
    }
    let mut merged = prev.resolution.clone();
    for (name, entry) in &cur.resolution.map {
        if !merged.map.contains_key(name) {
            merged.map.insert(name.clone(), entry.clone());
        }
    }
    merged.groups.extend(cur.resolution.groups.iter().cloned());
    merged.matches.extend(cur.resolution.matches.iter().cloned());
    let mut filters = prev.filters.clone();
    for f in &cur.filters {
        // A new membership filter on an attribute replaces the old one.
        filters.retain(|p| !(f.operator == Operator::In && p.operator == Operator::In && p.attributes == f.attributes));
        filters.push(f.clone());
    }
    cur.resolution = merged;
    cur.tasks = prev.tasks.clone();
    cur.filters = filters;
    cur.request = cur.request.or(prev.request);
    Some("filters added to previous chart")
}
