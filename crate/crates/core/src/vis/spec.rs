use serde::{Deserialize, Serialize};

use crate::ingest::AttrType;

pub const VEGA_LITE_SCHEMA: &str = "https://vega.github.io/schema/vega-lite/v5.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Bar,
    Tick,
    Line,
    Area,
    Point,
    Arc,
    Boxplot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldType {
    Quantitative,
    Nominal,
    Ordinal,
    Temporal,
}

impl From<AttrType> for FieldType {
    fn from(t: AttrType) -> Self {
        match t {
            AttrType::Quantitative => Self::Quantitative,
            AttrType::Nominal => Self::Nominal,
            AttrType::Ordinal => Self::Ordinal,
            AttrType::Temporal => Self::Temporal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(rename = "type")]
    pub field_type: FieldType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_unit: Option<String>,
}

impl FieldDef {
    pub fn field(name: &str, t: AttrType) -> Self {
        Self {
            field: Some(name.to_string()),
            field_type: t.into(),
            aggregate: None,
            bin: None,
            time_unit: (t == AttrType::Temporal).then(|| "year".to_string()),
        }
    }

    pub fn binned(name: &str) -> Self {
        Self {
            bin: Some(true),
            ..Self::field(name, AttrType::Quantitative)
        }
    }

    pub fn aggregated(name: &str, aggregate: &str) -> Self {
        if aggregate == "count" {
            return Self::count();
        }
        Self {
            aggregate: Some(aggregate.to_string()),
            ..Self::field(name, AttrType::Quantitative)
        }
    }

    pub fn count() -> Self {
        Self {
            field: None,
            field_type: FieldType::Quantitative,
            aggregate: Some("count".to_string()),
            bin: None,
            time_unit: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Encoding {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<FieldDef>,
}

impl Encoding {
    pub fn channels(&self) -> Vec<(&'static str, &FieldDef)> {
        [
            ("x", &self.x),
            ("y", &self.y),
            ("color", &self.color),
            ("size", &self.size),
            ("column", &self.column),
            ("row", &self.row),
            ("theta", &self.theta),
            ("text", &self.text),
        ]
        .into_iter()
        .filter_map(|(name, def)| def.as_ref().map(|d| (name, d)))
        .collect()
    }

    /// Distinct encoded field names in channel order.
    pub fn fields(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (_, def) in self.channels() {
            if let Some(f) = &def.field {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldPredicate {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one_of: Option<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lt: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equal: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Vec<serde_json::Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub filter: FieldPredicate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<serde_json::Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VegaLiteSpec {
    #[serde(rename = "$schema")]
    pub schema: String,
    pub data: DataRef,
    pub mark: Mark,
    pub encoding: Encoding,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transform: Vec<Transform>,
}

impl VegaLiteSpec {
    pub fn filtered_fields(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in &self.transform {
            if !out.contains(&t.filter.field) {
                out.push(t.filter.field.clone());
            }
        }
        out
    }
}
