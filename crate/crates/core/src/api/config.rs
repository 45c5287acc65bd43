use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{TaskKeyword, VisKeyword};
use crate::parse::{DEFAULT_KEEP_LIST, DEFAULT_STOPWORDS};
use crate::task::{Operator, TaskKind};
use crate::vis::{ChartId, RankingWeights};

/// Extra word lists that tune matching for a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SpecialWordLists {
    /// Words that may not start or end an attribute phrase and never match semantically.
    pub boundary_words: Vec<String>,
    /// Added to the stopword list.
    pub extra_stopwords: Vec<String>,
}

impl Default for SpecialWordLists {
    fn default() -> Self {
        Self {
            boundary_words: [
                "chart",
                "plot",
                "graph",
                "visualization",
                "visualisation",
                "diagram",
                "view",
                "record",
                "records",
                "row",
                "rows",
                "item",
                "items",
                "entry",
                "entries",
            ]
            .map(String::from)
            .to_vec(),
            extra_stopwords: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Config {
    pub similarity_threshold: f64,
    pub max_n: usize,
    /// Matches this close to a phrase's best score share its ambiguity group.
    pub ambiguity_margin: f64,
    pub stopwords: Vec<String>,
    pub stopword_keep_list: Vec<String>,
    pub task_keyword_table: Vec<TaskKeyword>,
    pub vis_keyword_table: Vec<VisKeyword>,
    /// WordNet database directory; the bundled subset when unset.
    pub wordnet_path: Option<PathBuf>,
    pub semantic_matching: bool,
    pub ranking_weights: RankingWeights,
    pub special_word_lists: SpecialWordLists,
    pub generate_vis: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            similarity_threshold: 0.8,
            max_n: 5,
            ambiguity_margin: 0.05,
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            stopword_keep_list: DEFAULT_KEEP_LIST.iter().map(|s| s.to_string()).collect(),
            task_keyword_table: default_task_keywords(),
            vis_keyword_table: default_vis_keywords(),
            wordnet_path: None,
            semantic_matching: true,
            ranking_weights: RankingWeights::default(),
            special_word_lists: SpecialWordLists::default(),
            generate_vis: true,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.similarity_threshold > 0.0 && self.similarity_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "similarityThreshold must be in (0, 1], got {}",
                self.similarity_threshold
            )));
        }
        if self.max_n == 0 {
            return Err(Error::Config("maxN must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.ambiguity_margin) {
            return Err(Error::Config("ambiguityMargin must be in [0, 1)".into()));
        }
        if self.task_keyword_table.is_empty() || self.vis_keyword_table.is_empty() {
            return Err(Error::Config("keyword tables must not be empty".into()));
        }
        for kw in &self.task_keyword_table {
            let allowed = match kw.task {
                TaskKind::DerivedValue => matches!(
                    kw.operator,
                    None | Some(Operator::Avg | Operator::Sum | Operator::Count | Operator::Min | Operator::Max)
                ),
                TaskKind::Filter => false,
                _ => kw.operator.is_none(),
            };
            if !allowed {
                return Err(Error::Config(format!("task keyword `{}` has an invalid task/operator", kw.keyword)));
            }
        }
        Ok(())
    }
}

fn default_task_keywords() -> Vec<TaskKeyword> {
    use Operator::{Avg, Count, Max, Min, Sum};
    use TaskKind::*;
    let table: &[(&str, TaskKind, Option<Operator>)] = &[
        ("correlate", Correlation, None),
        ("correlation", Correlation, None),
        ("correlated", Correlation, None),
        ("relationship", Correlation, None),
        ("relation", Correlation, None),
        ("relate", Correlation, None),
        ("related", Correlation, None),
        ("compare", Correlation, None),
        ("versus", Correlation, None),
        ("vs", Correlation, None),
        ("distribution", Distribution, None),
        ("distributed", Distribution, None),
        ("range", Distribution, None),
        ("spread", Distribution, None),
        ("average", DerivedValue, Some(Avg)),
        ("mean", DerivedValue, Some(Avg)),
        ("avg", DerivedValue, Some(Avg)),
        ("sum", DerivedValue, Some(Sum)),
        ("total", DerivedValue, Some(Sum)),
        ("count", DerivedValue, Some(Count)),
        ("number of", DerivedValue, Some(Count)),
        ("maximum", DerivedValue, Some(Max)),
        ("max", DerivedValue, Some(Max)),
        ("minimum", DerivedValue, Some(Min)),
        ("min", DerivedValue, Some(Min)),
        ("trend", Trend, None),
        ("trends", Trend, None),
        ("over time", Trend, None),
        ("over the years", Trend, None),
        ("over the year", Trend, None),
    ];
    table
        .iter()
        .map(|(k, t, op)| TaskKeyword {
            keyword: (*k).to_string(),
            task: *t,
            operator: *op,
        })
        .collect()
}

fn default_vis_keywords() -> Vec<VisKeyword> {
    use ChartId::*;
    let table: &[(&str, ChartId)] = &[
        ("histogram", Histogram),
        ("bar chart", Barchart),
        ("bar graph", Barchart),
        ("line chart", Linechart),
        ("line graph", Linechart),
        ("area chart", Areachart),
        ("scatterplot", Scatterplot),
        ("scatter plot", Scatterplot),
        ("scatter", Scatterplot),
        ("pie chart", Piechart),
        ("pie", Piechart),
        ("box plot", Boxplot),
        ("boxplot", Boxplot),
        ("strip plot", Stripplot),
        ("stripplot", Stripplot),
        ("heatmap", Heatmap),
        ("heat map", Heatmap),
        ("table", Table),
    ];
    table
        .iter()
        .map(|(k, c)| VisKeyword {
            keyword: (*k).to_string(),
            chart: *c,
        })
        .collect()
}
