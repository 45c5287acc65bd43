use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::attr::{AttributeMap, DroppedCandidate};
use crate::error::Result;
use crate::lexicon::{EntryKind, Metric};
use crate::task::TaskMap;
use crate::vis::{ChartRequest, RankingScore, VisListEntry};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyticSpec {
    pub attribute_map: AttributeMap,
    pub task_map: TaskMap,
    pub vis_list: Vec<VisListEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub debug: Option<DebugInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NgramMatch {
    pub query_phrase: String,
    pub ngram: String,
    pub span: (usize, usize),
    pub attribute: String,
    pub kind: EntryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub score: f64,
    pub metric: Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KeywordConflict {
    pub query_phrase: String,
    pub keyword: String,
    pub resolution: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DebugInfo {
    pub ngram_matches: Vec<NgramMatch>,
    pub dropped_candidates: Vec<DroppedCandidate>,
    pub keyword_conflicts: Vec<KeywordConflict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_request: Option<ChartRequest>,
    pub ranking_scores: Vec<RankingScore>,
    /// How a follow-up query was combined with the previous one, if it was.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dialog: Option<String>,
    pub warnings: Vec<String>,
    /// Milliseconds per stage.
    pub timings: IndexMap<String, f64>,
}

/// Canonical JSON text of a response.
pub fn serialize(spec: &AnalyticSpec) -> String {
    serde_json::to_string(spec).expect("analytic spec serializes")
}

pub fn deserialize(text: &str) -> Result<AnalyticSpec> {
    Ok(serde_json::from_str(text)?)
}
