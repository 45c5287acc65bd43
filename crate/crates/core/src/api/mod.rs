//! The query pipeline facade, follow-up dialog handling, and response format.

mod analyzer;
mod config;
mod response;

pub use analyzer::{AnalyzeOptions, Analyzer, SessionContext};
pub use config::{Config, SpecialWordLists};
pub use response::{deserialize, serialize, AnalyticSpec, DebugInfo, KeywordConflict, NgramMatch};
