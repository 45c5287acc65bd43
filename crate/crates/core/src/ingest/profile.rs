use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use chrono::NaiveDate;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

const MAX_INDEXED_VALUE_LEN: usize = 60;
const NUMERIC_SHARE: f64 = 0.95;
const DATE_SHARE: f64 = 0.90;
const CALENDAR_WORDS: &[&str] = &["year", "yr", "date", "month", "quarter", "decade", "season"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AttrType {
    #[serde(rename = "Q")]
    Quantitative,
    #[serde(rename = "N")]
    Nominal,
    #[serde(rename = "O")]
    Ordinal,
    #[serde(rename = "T")]
    Temporal,
}

impl AttrType {
    pub fn code(self) -> &'static str {
        match self {
            Self::Quantitative => "Q",
            Self::Nominal => "N",
            Self::Ordinal => "O",
            Self::Temporal => "T",
        }
    }

    /// Vega-Lite type name.
    pub fn vl_type(self) -> &'static str {
        match self {
            Self::Quantitative => "quantitative",
            Self::Nominal => "nominal",
            Self::Ordinal => "ordinal",
            Self::Temporal => "temporal",
        }
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, Self::Nominal | Self::Ordinal)
    }
}

impl fmt::Display for AttrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for AttrType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" | "quantitative" => Ok(Self::Quantitative),
            "n" | "nominal" => Ok(Self::Nominal),
            "o" | "ordinal" => Ok(Self::Ordinal),
            "t" | "temporal" => Ok(Self::Temporal),
            other => Err(Error::Config(format!("unknown attribute type `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Domain {
    Range { min: f64, max: f64 },
    Period { earliest: NaiveDate, latest: NaiveDate },
    Values(Vec<String>),
}

impl Domain {
    pub fn values(&self) -> &[String] {
        match self {
            Domain::Values(v) => v,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AttributeMetadata {
    pub name: String,
    pub attr_type: AttrType,
    pub domain: Domain,
    pub aliases: Vec<String>,
    pub type_overridden: bool,
}

/// Inferred schema of a dataset. Override operations return new profiles.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetProfile {
    attributes: IndexMap<String, AttributeMetadata>,
    row_count: usize,
    value_index: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    #[serde(skip)]
    dataset: Arc<Dataset>,
}

impl PartialEq for DatasetProfile {
    fn eq(&self, other: &Self) -> bool {
        self.attributes == other.attributes
            && self.row_count == other.row_count
            && self.value_index == other.value_index
            && self.warnings == other.warnings
    }
}

impl DatasetProfile {
    pub fn attributes(&self) -> &IndexMap<String, AttributeMetadata> {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeMetadata> {
        self.attributes.get(name)
    }

    pub fn attr_type(&self, name: &str) -> Option<AttrType> {
        self.attributes.get(name).map(|a| a.attr_type)
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn value_index(&self) -> &BTreeMap<String, Vec<String>> {
        &self.value_index
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// Rows as JSON objects, numbers for Q attributes and strings elsewhere.
    pub fn records_json(&self, limit: Option<usize>) -> Vec<serde_json::Value> {
        let n = limit.unwrap_or(usize::MAX).min(self.dataset.len());
        let types: Vec<AttrType> = self.attributes.values().map(|a| a.attr_type).collect();
        self.dataset.rows()[..n]
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for ((name, cell), ty) in self.dataset.columns().iter().zip(row).zip(&types) {
                    let cell = cell.trim();
                    let value = if cell.is_empty() {
                        serde_json::Value::Null
                    } else if *ty == AttrType::Quantitative {
                        parse_number(cell)
                            .map(json_number)
                            .unwrap_or_else(|| serde_json::Value::String(cell.to_string()))
                    } else {
                        serde_json::Value::String(cell.to_string())
                    };
                    obj.insert(name.clone(), value);
                }
                serde_json::Value::Object(obj)
            })
            .collect()
    }
}

/// Integral values become JSON integers so they print without a fraction.
pub fn json_number(v: f64) -> serde_json::Value {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        serde_json::Value::from(v as i64)
    } else {
        serde_json::Number::from_f64(v)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

/// Parse a numeric cell, accepting thousands separators and a leading
/// currency symbol.
pub fn parse_number(raw: &str) -> Option<f64> {
    let mut s = raw.trim();
    let negative = s.starts_with('-');
    if negative {
        s = &s[1..];
    }
    for sym in ['$', '€', '£'] {
        if let Some(rest) = s.strip_prefix(sym) {
            s = rest;
            break;
        }
    }
    let s = s.replace(',', "");
    if s.is_empty()
        || !s.bytes().any(|b| b.is_ascii_digit())
        || !s
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'))
    {
        return None;
    }
    let v: f64 = s.parse().ok()?;
    if !v.is_finite() {
        return None;
    }
    Some(if negative { -v } else { v })
}

const MONTHS: &[&str] = &[
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];

/// Parse a date cell under the fixed format list. Bare 4-digit years are
/// accepted only when `allow_year` is set.
pub fn parse_date(raw: &str, allow_year: bool) -> Option<NaiveDate> {
    let s = raw.trim();
    if s.len() >= 10 {
        if let Ok(d) = NaiveDate::parse_from_str(&s[..10], "%Y-%m-%d") {
            let rest = &s[10..];
            if rest.is_empty() || rest.starts_with('T') || rest.starts_with(' ') {
                return Some(d);
            }
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%m/%d/%Y") {
        return Some(d);
    }
    if let Some((mon, year)) = s.split_once(' ') {
        let mon = mon.to_ascii_lowercase();
        if mon.len() >= 3 && year.len() == 4 {
            if let Some(m) = MONTHS.iter().position(|p| mon.starts_with(p)) {
                let full_ok = mon.len() == 3 || full_month_name(m).starts_with(&mon);
                if full_ok {
                    if let Ok(y) = year.parse::<i32>() {
                        return NaiveDate::from_ymd_opt(y, m as u32 + 1, 1);
                    }
                }
            }
        }
    }
    if allow_year && s.len() == 4 && s.bytes().all(|b| b.is_ascii_digit()) {
        let y: i32 = s.parse().ok()?;
        if (1500..=2100).contains(&y) {
            return NaiveDate::from_ymd_opt(y, 1, 1);
        }
    }
    None
}

fn full_month_name(m: usize) -> &'static str {
    [
        "january", "february", "march", "april", "may", "june", "july", "august", "september",
        "october", "november", "december",
    ][m]
}

fn has_calendar_word(name: &str) -> bool {
    name.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .any(|w| CALENDAR_WORDS.contains(&w) || CALENDAR_WORDS.iter().any(|c| w == format!("{c}s")))
}

/// Sort distinct strings numerically when they are all numbers, else lexically.
fn sorted_distinct(values: BTreeSet<String>) -> Vec<String> {
    let mut out: Vec<String> = values.into_iter().collect();
    if !out.is_empty() && out.iter().all(|v| parse_number(v).is_some()) {
        out.sort_by(|a, b| {
            parse_number(a)
                .partial_cmp(&parse_number(b))
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.cmp(b))
        });
    }
    out
}

fn non_empty(values: impl Iterator<Item = impl AsRef<str>>) -> Vec<String> {
    values
        .map(|v| v.as_ref().trim().to_string())
        .filter(|v| !v.is_empty())
        .collect()
}

fn infer_type(name: &str, cells: &[String]) -> AttrType {
    if cells.is_empty() {
        return AttrType::Nominal;
    }
    let total = cells.len() as f64;
    // Dates first so calendar-named year columns are not swallowed by Q.
    let allow_year = has_calendar_word(name);
    let dates = cells.iter().filter(|c| parse_date(c, allow_year).is_some()).count();
    if dates as f64 / total >= DATE_SHARE {
        return AttrType::Temporal;
    }
    let numbers = cells.iter().filter(|c| parse_number(c).is_some()).count();
    if numbers as f64 / total >= NUMERIC_SHARE {
        return AttrType::Quantitative;
    }
    AttrType::Nominal
}

/// Domain under `ty`. In strict mode every value must conform, otherwise
/// non-conforming values are ignored.
fn compute_domain(name: &str, ty: AttrType, cells: &[String], strict: bool) -> Result<Domain> {
    match ty {
        AttrType::Quantitative => {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for c in cells {
                match parse_number(c) {
                    Some(v) => {
                        min = min.min(v);
                        max = max.max(v);
                    }
                    None if strict => {
                        return Err(Error::TypeCoercion {
                            attribute: name.to_string(),
                            target: ty.to_string(),
                            value: c.clone(),
                        })
                    }
                    None => {}
                }
            }
            if min > max {
                min = 0.0;
                max = 0.0;
            }
            Ok(Domain::Range { min, max })
        }
        AttrType::Temporal => {
            let allow_year = strict || has_calendar_word(name);
            let mut earliest: Option<NaiveDate> = None;
            let mut latest: Option<NaiveDate> = None;
            for c in cells {
                match parse_date(c, allow_year) {
                    Some(d) => {
                        earliest = Some(earliest.map_or(d, |e| e.min(d)));
                        latest = Some(latest.map_or(d, |l| l.max(d)));
                    }
                    None if strict => {
                        return Err(Error::TypeCoercion {
                            attribute: name.to_string(),
                            target: ty.to_string(),
                            value: c.clone(),
                        })
                    }
                    None => {}
                }
            }
            let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date");
            Ok(Domain::Period {
                earliest: earliest.unwrap_or(epoch),
                latest: latest.unwrap_or(epoch),
            })
        }
        AttrType::Nominal | AttrType::Ordinal => Ok(Domain::Values(sorted_distinct(cells.iter().cloned().collect()))),
    }
}

fn build_value_index(attributes: &IndexMap<String, AttributeMetadata>) -> BTreeMap<String, Vec<String>> {
    let mut index: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for meta in attributes.values() {
        if !meta.attr_type.is_discrete() {
            continue;
        }
        for v in meta.domain.values() {
            if v.chars().count() > MAX_INDEXED_VALUE_LEN {
                continue;
            }
            let owners = index.entry(v.to_lowercase()).or_default();
            if !owners.contains(&meta.name) {
                owners.push(meta.name.clone());
            }
        }
    }
    index
}

pub fn infer_metadata(dataset: Dataset) -> Result<DatasetProfile> {
    infer_metadata_shared(Arc::new(dataset))
}

pub fn infer_metadata_shared(dataset: Arc<Dataset>) -> Result<DatasetProfile> {
    let mut attributes = IndexMap::new();
    let mut warnings = Vec::new();
    for (i, name) in dataset.columns().iter().enumerate() {
        let cells = non_empty(dataset.column_values(i));
        if cells.is_empty() {
            warnings.push(format!("attribute `{name}` has no values; typed N with an empty domain"));
        }
        let ty = infer_type(name, &cells);
        let domain = compute_domain(name, ty, &cells, false)?;
        attributes.insert(
            name.clone(),
            AttributeMetadata {
                name: name.clone(),
                attr_type: ty,
                domain,
                aliases: Vec::new(),
                type_overridden: false,
            },
        );
    }
    let value_index = build_value_index(&attributes);
    Ok(DatasetProfile {
        attributes,
        row_count: dataset.len(),
        value_index,
        warnings,
        dataset,
    })
}

/// Read-only view of the attribute metadata.
pub fn get_metadata(profile: &DatasetProfile) -> &IndexMap<String, AttributeMetadata> {
    &profile.attributes
}

pub fn set_attribute_type(profile: &DatasetProfile, attribute: &str, new_type: AttrType) -> Result<DatasetProfile> {
    let idx = profile
        .dataset
        .column_index(attribute)
        .filter(|_| profile.attributes.contains_key(attribute))
        .ok_or_else(|| Error::Key(attribute.to_string()))?;
    let cells = non_empty(profile.dataset.column_values(idx));
    let domain = compute_domain(attribute, new_type, &cells, true)?;
    let mut next = profile.clone();
    let meta = next.attributes.get_mut(attribute).expect("checked above");
    meta.attr_type = new_type;
    meta.domain = domain;
    meta.type_overridden = true;
    next.value_index = build_value_index(&next.attributes);
    Ok(next)
}

pub fn set_alias_map<S: AsRef<str>>(
    profile: &DatasetProfile,
    alias_map: &IndexMap<String, Vec<S>>,
) -> Result<DatasetProfile> {
    let mut next = profile.clone();
    for (attribute, aliases) in alias_map {
        if !next.attributes.contains_key(attribute) {
            return Err(Error::Key(attribute.clone()));
        }
        for alias in aliases {
            let alias = alias.as_ref().trim().to_lowercase();
            if alias.is_empty() {
                continue;
            }
            if let Some(other) = next
                .attributes
                .keys()
                .find(|k| *k != attribute && k.to_lowercase() == alias)
            {
                return Err(Error::AliasConflict {
                    alias,
                    attribute: attribute.clone(),
                    existing: other.clone(),
                });
            }
            let meta = next.attributes.get_mut(attribute).expect("checked above");
            if !meta.aliases.contains(&alias) {
                meta.aliases.push(alias);
            }
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{load_dataset, SourceFormat};

    fn profile(csv: &str) -> DatasetProfile {
        infer_metadata(load_dataset(csv.as_bytes(), SourceFormat::Csv).unwrap()).unwrap()
    }

    fn day_csv() -> String {
        let mut s = String::from("Day,Genre,When\n");
        for d in 1..=31 {
            let g = ["Action", "Adventure", "Comedy"][d % 3];
            s.push_str(&format!("{d},{g},2001-05-{:02}\n", d.min(28)));
        }
        s
    }

    #[test]
    fn integer_days_are_quantitative() {
        let p = profile(&day_csv());
        assert_eq!(p.attr_type("Day"), Some(AttrType::Quantitative));
        assert_eq!(p.attribute("Day").unwrap().domain, Domain::Range { min: 1.0, max: 31.0 });
    }

    #[test]
    fn iso_dates_are_temporal() {
        let p = profile(&day_csv());
        assert_eq!(p.attr_type("When"), Some(AttrType::Temporal));
    }

    #[test]
    fn genre_is_nominal_with_sorted_domain() {
        let p = profile(&day_csv());
        let g = p.attribute("Genre").unwrap();
        assert_eq!(g.attr_type, AttrType::Nominal);
        assert_eq!(g.domain.values(), ["Action", "Adventure", "Comedy"]);
        assert_eq!(p.value_index()["action"], vec!["Genre".to_string()]);
    }

    #[test]
    fn year_needs_calendar_name() {
        let p = profile("Release Year,Code\n1999,1999\n2004,2004\n");
        assert_eq!(p.attr_type("Release Year"), Some(AttrType::Temporal));
        assert_eq!(p.attr_type("Code"), Some(AttrType::Quantitative));
    }

    #[test]
    fn currency_and_separators() {
        assert_eq!(parse_number("$184,900"), Some(184900.0));
        assert_eq!(parse_number("-£3.5"), Some(-3.5));
        assert_eq!(parse_number("inf"), None);
        assert_eq!(parse_number("NaN"), None);
        assert_eq!(parse_number("PG-13"), None);
    }

    #[test]
    fn date_formats() {
        assert!(parse_date("2001-05-02", false).is_some());
        assert!(parse_date("2001-05-02T10:00:00Z", false).is_some());
        assert!(parse_date("05/02/2001", false).is_some());
        assert!(parse_date("Jan 2001", false).is_some());
        assert!(parse_date("January 2001", false).is_some());
        assert!(parse_date("2001", false).is_none());
        assert!(parse_date("2001", true).is_some());
        assert!(parse_date("1400", true).is_none());
    }

    #[test]
    fn empty_column_warns() {
        let p = profile("a,b\n1,\n2,\n");
        assert_eq!(p.attr_type("b"), Some(AttrType::Nominal));
        assert!(p.attribute("b").unwrap().domain.values().is_empty());
        assert_eq!(p.warnings().len(), 1);
    }

    #[test]
    fn mostly_numeric_with_empties() {
        let mut s = String::from("v\n");
        for i in 0..40 {
            s.push_str(if i % 10 == 0 { "\n" } else { "3.5\n" });
        }
        let p = profile(&s);
        assert_eq!(p.attr_type("v"), Some(AttrType::Quantitative));
    }

    #[test]
    fn override_day_to_temporal_fails() {
        let p = profile(&day_csv());
        let err = set_attribute_type(&p, "Day", AttrType::Temporal).unwrap_err();
        match err {
            Error::TypeCoercion { value, .. } => assert_eq!(value, "1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn override_to_ordinal_keeps_domain() {
        let p = profile(&day_csv());
        let q = set_attribute_type(&p, "Genre", AttrType::Ordinal).unwrap();
        let g = q.attribute("Genre").unwrap();
        assert_eq!(g.attr_type, AttrType::Ordinal);
        assert!(g.type_overridden);
        assert_eq!(g.domain, p.attribute("Genre").unwrap().domain);
        assert!(!p.attribute("Genre").unwrap().type_overridden);
    }

    #[test]
    fn override_idempotent() {
        let p = profile(&day_csv());
        let once = set_attribute_type(&p, "Day", AttrType::Nominal).unwrap();
        let twice = set_attribute_type(&once, "Day", AttrType::Nominal).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.value_index()["1"], vec!["Day".to_string()]);
    }

    #[test]
    fn override_unknown_attribute() {
        let p = profile(&day_csv());
        assert!(matches!(set_attribute_type(&p, "foo", AttrType::Quantitative), Err(Error::Key(_))));
    }

    #[test]
    fn override_q_on_text_fails() {
        let p = profile(&day_csv());
        assert!(matches!(
            set_attribute_type(&p, "Genre", AttrType::Quantitative),
            Err(Error::TypeCoercion { .. })
        ));
    }

    #[test]
    fn aliases_dedupe_and_conflict() {
        let p = profile(&day_csv());
        let mut m = IndexMap::new();
        m.insert("Day".to_string(), vec!["dom", "DOM", " dom "]);
        let q = set_alias_map(&p, &m).unwrap();
        assert_eq!(q.attribute("Day").unwrap().aliases, ["dom"]);

        let mut bad = IndexMap::new();
        bad.insert("Day".to_string(), vec!["genre"]);
        assert!(matches!(set_alias_map(&p, &bad), Err(Error::AliasConflict { .. })));

        let mut missing = IndexMap::new();
        missing.insert("Nope".to_string(), vec!["x"]);
        assert!(matches!(set_alias_map(&p, &missing), Err(Error::Key(_))));
    }

    #[test]
    fn numeric_ordinal_domain_sorts_numerically() {
        let p = profile("Cylinders\n8\n4\n10\n6\n4\n");
        let q = set_attribute_type(&p, "Cylinders", AttrType::Ordinal).unwrap();
        assert_eq!(q.attribute("Cylinders").unwrap().domain.values(), ["4", "6", "8", "10"]);
    }

    #[test]
    fn records_json_types() {
        let p = profile("a,b\n1,x\n2.5,\n");
        let rows = p.records_json(Some(5));
        assert_eq!(rows[0]["a"], serde_json::json!(1));
        assert_eq!(rows[1]["a"], serde_json::json!(2.5));
        assert!(rows[1]["b"].is_null());
    }
}
