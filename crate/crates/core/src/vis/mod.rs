//! Chart generation, ranking, and Vega-Lite output.

mod generate;
mod spec;
mod validate;

pub use generate::{
    enumerate_combinations, filter_only_table, generate_spec, rank_vis, ChartId, ChartRequest, ChartSource,
    GeneratedChart, RankingScore, RankingWeights, VisContext, VisListEntry,
};
pub use spec::{
    DataRef, Encoding, FieldDef, FieldPredicate, FieldType, Mark, Transform, VegaLiteSpec, VEGA_LITE_SCHEMA,
};
pub use validate::validate_spec;

use crate::parse::ParsedQuery;

/// The first chart keyword among the n-grams (longest span first). `keys`
/// pairs a keyword's space-joined stems with its chart.
pub fn detect_explicit_vis(parsed: &ParsedQuery, keys: &[(String, ChartId)]) -> Option<ChartRequest> {
    parsed.ngrams.iter().find_map(|g| {
        keys.iter().find(|(k, _)| *k == g.text).map(|(_, chart)| ChartRequest {
            chart_id: *chart,
            query_phrase: g.surface.clone(),
        })
    })
}
