mod common;

use indexmap::IndexMap;
use nl2vis::attr::{InferenceType, ResolutionOverrides};
use nl2vis::ingest::{AttrType, SourceFormat};
use nl2vis::task::{Operator, TaskKind};
use nl2vis::vis::{validate_spec, Mark};
use nl2vis::{
    deserialize, get_metadata, infer_metadata, load_dataset, serialize, AnalyzeOptions, Analyzer, Config, Error,
    SessionContext,
};
use serde_json::json;

const RUNNING_QUERY: &str =
    "Show the relationship between budget and rating for Action and Adventure movies that grossed over 100M";

fn one_shot(a: &Analyzer, q: &str) -> nl2vis::AnalyticSpec {
    a.analyze(q, &AnalyzeOptions::default(), &mut SessionContext::default()).unwrap()
}

#[test]
fn bigram_phrase_beats_unigram() {
    let a = common::analyzer("movies");
    let spec = one_shot(&a, "show imdb rating");
    assert_eq!(spec.attribute_map.keys().collect::<Vec<_>>(), ["IMDB Rating"]);
    assert!(!spec.attribute_map["IMDB Rating"].is_ambiguous);
}

#[test]
fn chart_words_do_not_match_attributes() {
    let a = common::analyzer("movies");
    let parsed = a.parse("histogram");
    assert!(a.match_attributes(&parsed).is_empty());
}

#[test]
fn rating_override_collapses_running_query() {
    let a = common::analyzer("movies");
    let mut overrides = ResolutionOverrides::default();
    overrides.attributes.insert("rating".into(), "IMDB Rating".into());
    let opts = AnalyzeOptions {
        overrides: Some(overrides),
        ..Default::default()
    };
    let spec = a.analyze(RUNNING_QUERY, &opts, &mut SessionContext::default()).unwrap();
    assert!(!spec.attribute_map.contains_key("Content Rating"));
    assert!(!spec.attribute_map.contains_key("Rotten Tomatoes Rating"));
    assert!(spec.attribute_map.values().all(|e| !e.is_ambiguous));
    let corr = &spec.task_map[TaskKind::Correlation.as_str()];
    assert_eq!(corr.len(), 1);
    assert_eq!(corr[0].attributes, ["Production Budget", "IMDB Rating"]);
    assert!(!corr[0].is_attr_ambiguous);
    assert_eq!(spec.vis_list.len(), 1);
}

#[test]
fn override_to_unknown_attribute_is_rejected() {
    let a = common::analyzer("movies");
    let mut overrides = ResolutionOverrides::default();
    overrides.attributes.insert("rating".into(), "Stars".into());
    let opts = AnalyzeOptions {
        overrides: Some(overrides),
        ..Default::default()
    };
    let err = a.analyze(RUNNING_QUERY, &opts, &mut SessionContext::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidOverride(_)), "{err}");
}

#[test]
fn value_override_narrows_filter() {
    let a = common::analyzer("olympics");
    let q = "Show me medals for hockey and skating by country";
    let spec = one_shot(&a, q);
    let filter = &spec.task_map[TaskKind::Filter.as_str()][0];
    assert!(filter.is_value_ambiguous);

    let overrides: ResolutionOverrides = serde_json::from_value(json!({
        "values": [{"attribute": "Sport", "phrase": "hockey", "values": ["Ice Hockey"]}]
    }))
    .unwrap();
    let opts = AnalyzeOptions {
        overrides: Some(overrides),
        ..Default::default()
    };
    let spec = a.analyze(q, &opts, &mut SessionContext::default()).unwrap();
    let values = &spec.task_map[TaskKind::Filter.as_str()][0].values;
    assert!(values.contains(&json!("Ice Hockey")));
    assert!(!values.contains(&json!("Hockey")));
}

#[test]
fn alias_map_feeds_matching() {
    let mut a = common::analyzer("movies");
    let mut aliases = IndexMap::new();
    aliases.insert("Production Budget".to_string(), vec!["investment"]);
    a.set_alias_map(&aliases).unwrap();
    assert!(get_metadata(a.profile())["Production Budget"]
        .aliases
        .contains(&"investment".to_string()));
    let spec = one_shot(&a, "Show me the investment and gross");
    let e = &spec.attribute_map["Production Budget"];
    assert_eq!(e.query_phrase, ["investment"]);
    assert_eq!(e.inference_type, InferenceType::Explicit);
}

#[test]
fn retyping_changes_charts() {
    let mut a = common::analyzer("movies");
    let before = one_shot(&a, "Show running time");
    assert_eq!(before.vis_list[0].vl_spec.mark, Mark::Bar);
    a.set_attribute_type("Running Time", AttrType::Ordinal).unwrap();
    assert!(get_metadata(a.profile())["Running Time"].type_overridden);
    let after = one_shot(&a, "Show running time");
    let x = after.vis_list[0].vl_spec.encoding.x.as_ref().unwrap();
    assert_eq!(x.bin, None);
    assert!(matches!(a.set_attribute_type("Genre", AttrType::Quantitative), Err(Error::TypeCoercion { .. })));
}

#[test]
fn empty_query_is_an_error() {
    let a = common::analyzer("cars");
    assert!(matches!(
        a.analyze("  ", &AnalyzeOptions::default(), &mut SessionContext::default()),
        Err(Error::EmptyQuery)
    ));
}

#[test]
fn unmatched_query_yields_empty_response() {
    let a = common::analyzer("cars");
    let spec = one_shot(&a, "hello there");
    assert!(spec.attribute_map.is_empty());
    assert!(spec.task_map.is_empty());
    assert!(spec.vis_list.is_empty());
}

#[test]
fn render_vis_inlines_data() {
    let mut a = common::analyzer("cars");
    let vl = a.render_vis("Show mpg against horsepower", false).unwrap();
    assert_eq!(vl.mark, Mark::Point);
    assert_eq!(vl.data.values.as_ref().unwrap().len(), a.profile().row_count());
    assert!(matches!(a.render_vis("hello there", false), Err(Error::NoVisualization)));
}

#[test]
fn dialog_false_clears_the_session() {
    let mut a = common::analyzer("housing");
    a.analyze_query("Show average prices for different home types over the years", true, false, None)
        .unwrap();
    assert!(a.session().previous.is_some());
    let followed = a.analyze_query("As a bar chart", true, false, None).unwrap();
    assert_eq!(followed.vis_list[0].vl_spec.mark, Mark::Bar);

    let fresh = a.analyze_query("As a bar chart", false, false, None).unwrap();
    assert!(fresh.vis_list.is_empty());
    assert!(a.session().previous.is_none());
}

#[test]
fn fresh_attributes_replace_dialog_context() {
    let a = common::analyzer("housing");
    let opts = AnalyzeOptions {
        dialog: true,
        ..Default::default()
    };
    let mut session = SessionContext::new("housing");
    a.analyze("Show average prices for different home types over the years", &opts, &mut session)
        .unwrap();
    let spec = a.analyze("Show square feet distribution", &opts, &mut session).unwrap();
    assert_eq!(spec.attribute_map.keys().collect::<Vec<_>>(), ["Square Feet"]);
}

#[test]
fn debug_section_reports_stages() {
    let a = common::analyzer("movies");
    let opts = AnalyzeOptions {
        debug: true,
        ..Default::default()
    };
    let spec = a
        .analyze("Create a histogram showing distribution of IMDB ratings", &opts, &mut SessionContext::default())
        .unwrap();
    let debug = spec.debug.as_ref().unwrap();
    assert_eq!(debug.timings.keys().collect::<Vec<_>>(), ["parse", "attributes", "tasks", "vis"]);
    assert_eq!(debug.chart_request.as_ref().unwrap().query_phrase, "histogram");
    assert!(!debug.ngram_matches.is_empty());
    assert_eq!(debug.ranking_scores.len(), spec.vis_list.len());

    // Without the flag the key is absent from the JSON.
    let plain = one_shot(&a, "Create a histogram showing distribution of IMDB ratings");
    assert!(!serialize(&plain).contains("\"debug\""));
}

#[test]
fn serialized_key_order_is_fixed() {
    let a = common::analyzer("movies");
    let spec = one_shot(&a, RUNNING_QUERY);
    let text = serialize(&spec);
    let pos = |k: &str| text.find(k).unwrap();
    assert!(pos("\"attributeMap\"") < pos("\"taskMap\"") && pos("\"taskMap\"") < pos("\"visList\""));
    assert!(text.contains("\"values\":[100000000]"));
    assert_eq!(deserialize(&text).unwrap(), spec);
}

#[test]
fn comparison_filters() {
    let a = common::analyzer("movies");
    let spec = one_shot(&a, "Show movies with IMDB rating between 7 and 9");
    let f = &spec.task_map[TaskKind::Filter.as_str()][0];
    assert_eq!(f.operator, Operator::Range);
    assert_eq!(f.values, [json!(7), json!(9)]);

    let spec = one_shot(&a, "Show comedy movies with a budget over 50M");
    let filters = &spec.task_map[TaskKind::Filter.as_str()];
    assert!(filters
        .iter()
        .any(|f| f.operator == Operator::Gt && f.attributes == ["Production Budget"] && f.values == [json!(50000000)]));
}

#[test]
fn filter_only_query_is_a_count_table() {
    let a = common::analyzer("cars");
    let spec = one_shot(&a, "Show cars from Japan and Europe");
    assert_eq!(spec.attribute_map.keys().collect::<Vec<_>>(), ["Origin"]);
    let vl = &spec.vis_list[0].vl_spec;
    assert_eq!(vl.mark, Mark::Text);
    assert_eq!(vl.transform[0].filter.one_of.as_ref().unwrap(), &[json!("Japan"), json!("Europe")]);
    assert!(validate_spec(vl, a.profile()).is_empty());
}

#[test]
fn explicit_chart_requests() {
    let a = common::analyzer("movies");
    let cases = [
        ("Box plot of IMDB rating by genre", Mark::Boxplot),
        ("Pie chart of worldwide gross by content rating", Mark::Arc),
        ("Show a scatterplot of gross and budget", Mark::Point),
        ("Show a table of genre", Mark::Text),
    ];
    for (q, mark) in cases {
        let spec = one_shot(&a, q);
        let top = &spec.vis_list[0];
        assert_eq!(top.vl_spec.mark, mark, "{q}");
        assert_eq!(top.inference_type, InferenceType::Explicit, "{q}");
    }
}

#[test]
fn unsupported_request_falls_back_to_table() {
    let a = common::analyzer("movies");
    let spec = one_shot(&a, "Show a boxplot of genre and content rating");
    let top = &spec.vis_list[0].vl_spec;
    assert_eq!(top.mark, Mark::Text);
    assert!(validate_spec(top, a.profile()).is_empty());
}

#[test]
fn record_noun_alone_matches_nothing() {
    let a = common::analyzer("cars");
    let parsed = a.parse("cars");
    assert!(a.match_attributes(&parsed).is_empty());
}

#[test]
fn multiword_task_keyword_keeps_its_words() {
    let a = common::analyzer("movies");
    let spec = one_shot(&a, "Trend of production budget over time");
    assert!(!spec.attribute_map.contains_key("Running Time"));
    assert!(spec.task_map.contains_key(TaskKind::Trend.as_str()));
}

#[test]
fn semantic_matching_can_be_disabled() {
    let a = common::analyzer("movies");
    let on = one_shot(&a, "Show the films");
    let off = common::analyzer_with(
        "movies",
        Config {
            semantic_matching: false,
            ..Config::default()
        },
    );
    let spec = one_shot(&off, "Show the films");
    assert!(spec.attribute_map.len() <= on.attribute_map.len());
    assert!(spec
        .attribute_map
        .values()
        .all(|e| e.meta.metric == nl2vis::lexicon::Metric::Syntactic));
}

#[test]
fn missing_wordnet_degrades_with_warning() {
    let profile = infer_metadata(load_dataset(&b"Budget,Genre\n10,Drama\n20,Comedy\n"[..], SourceFormat::Csv).unwrap())
        .unwrap();
    let config = Config {
        wordnet_path: Some("/nonexistent/wordnet".into()),
        ..Config::default()
    };
    let a = Analyzer::new(profile, config).unwrap();
    assert!(a.warnings().iter().any(|w| w.contains("semantic matching disabled")));
    let spec = one_shot(&a, "Show budget by genre");
    assert_eq!(spec.vis_list[0].vl_spec.mark, Mark::Bar);
}

#[test]
fn colleges_scatter_with_color() {
    let a = common::analyzer("colleges");
    let spec = one_shot(&a, "Show debt and earnings for different types of colleges");
    let vl = &spec.vis_list[0].vl_spec;
    assert_eq!(vl.mark, Mark::Point);
    assert_eq!(vl.encoding.color.as_ref().unwrap().field.as_deref(), Some("College Type"));
}
