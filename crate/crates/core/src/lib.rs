//! Natural-language queries over a tabular dataset, turned into inferred
//! attributes, analytic tasks, and ranked Vega-Lite charts.

pub mod api;
pub mod attr;
pub mod error;
pub mod ingest;
pub mod lexicon;
pub mod parse;
pub mod task;
pub mod vis;

pub use api::{deserialize, serialize, AnalyticSpec, AnalyzeOptions, Analyzer, Config, SessionContext};
pub use error::{Error, Result};
pub use ingest::{get_metadata, infer_metadata, load_dataset, load_dataset_path, set_alias_map, set_attribute_type};
