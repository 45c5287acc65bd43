//! Analytic task detection, attribute binding, and filter extraction.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::attr::{AttributeResolution, DroppedCandidate, InferenceType};
use crate::ingest::{json_number, AttrType, DatasetProfile};
use crate::parse::{comparator_at, Comparison, ParsedQuery, Pos, RelationLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Correlation,
    Distribution,
    #[serde(rename = "derivedvalue")]
    DerivedValue,
    Trend,
    Filter,
}

impl TaskKind {
    pub const ALL: [TaskKind; 5] = [
        TaskKind::Correlation,
        TaskKind::Distribution,
        TaskKind::DerivedValue,
        TaskKind::Trend,
        TaskKind::Filter,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Correlation => "correlation",
            Self::Distribution => "distribution",
            Self::DerivedValue => "derivedvalue",
            Self::Trend => "trend",
            Self::Filter => "filter",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == id)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Operator {
    Gt,
    Lt,
    Eq,
    Range,
    In,
    Avg,
    Sum,
    Count,
    Min,
    Max,
    None,
}

impl Operator {
    /// Vega-Lite aggregate name for derived-value operators.
    pub fn aggregate(self) -> Option<&'static str> {
        match self {
            Self::Avg => Some("mean"),
            Self::Sum => Some("sum"),
            Self::Count => Some("count"),
            Self::Min => Some("min"),
            Self::Max => Some("max"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskInstance {
    pub task: TaskKind,
    pub query_phrase: Vec<String>,
    pub inference_type: InferenceType,
    pub attributes: Vec<String>,
    pub operator: Operator,
    pub values: Vec<serde_json::Value>,
    pub is_attr_ambiguous: bool,
    pub is_value_ambiguous: bool,
    /// Candidate values per ambiguous phrase.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub value_ambiguity: IndexMap<String, Vec<String>>,
}

impl TaskInstance {
    fn new(task: TaskKind, inference_type: InferenceType, attributes: Vec<String>, operator: Operator) -> Self {
        Self {
            task,
            query_phrase: Vec::new(),
            inference_type,
            attributes,
            operator,
            values: Vec::new(),
            is_attr_ambiguous: false,
            is_value_ambiguous: false,
            value_ambiguity: IndexMap::new(),
        }
    }

    fn same_as(&self, other: &TaskInstance) -> bool {
        self.task == other.task
            && self.operator == other.operator
            && self.values == other.values
            && same_set(&self.attributes, &other.attributes)
    }
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

pub type TaskMap = IndexMap<String, Vec<TaskInstance>>;

/// Add an instance unless an identical one is present; keys stay in task order.
pub fn insert_task(map: &mut TaskMap, inst: TaskInstance) -> bool {
    let exists = map
        .get(inst.task.as_str())
        .is_some_and(|list| list.iter().any(|i| i.same_as(&inst)));
    if exists {
        return false;
    }
    map.entry(inst.task.as_str().to_string()).or_default().push(inst);
    map.sort_by(|a, _, b, _| {
        let rank = |k: &str| TaskKind::from_id(k).map_or(usize::MAX, |t| t as usize);
        rank(a).cmp(&rank(b))
    });
    true
}

/// A task or chart keyword located in the query.
#[derive(Debug, Clone, PartialEq)]
pub struct KeywordHit {
    pub canonical: String,
    pub operator: Option<Operator>,
    /// Span over trimmed tokens.
    pub span: (usize, usize),
    pub surface: String,
}

/// Keyword phrases to match, as (stem key, canonical id, operator).
pub type KeywordKeys = Vec<(String, String, Option<Operator>)>;

/// Find keyword phrases among the n-grams, longest first. Hits whose whole
/// span lies inside attribute phrases are returned separately as conflicts.
pub fn find_keywords(
    parsed: &ParsedQuery,
    keys: &KeywordKeys,
    resolution: &AttributeResolution,
) -> (Vec<KeywordHit>, Vec<KeywordHit>) {
    let mut hits: Vec<KeywordHit> = Vec::new();
    let mut conflicts = Vec::new();
    for g in &parsed.ngrams {
        let overlaps = |h: &KeywordHit| g.span.0 < h.span.1 && h.span.0 < g.span.1;
        if hits.iter().any(overlaps) || conflicts.iter().any(overlaps) {
            continue;
        }
        if let Some((_, canonical, op)) = keys.iter().find(|(k, _, _)| *k == g.text) {
            let hit = KeywordHit {
                canonical: canonical.clone(),
                operator: *op,
                span: g.span,
                surface: g.surface.clone(),
            };
            if (g.span.0..g.span.1).all(|p| resolution.is_covered(p)) {
                conflicts.push(hit);
            } else {
                hits.push(hit);
            }
        }
    }
    hits.sort_by_key(|h| h.span);
    (hits, conflicts)
}

/// Alternatives for each attribute slot a task keyword reaches.
pub type Slots = Vec<Vec<String>>;

/// Follow `of` edges from the keyword, then `conj` edges and phrase extents,
/// to collect attribute slots. Falls back to every encodable phrase group.
pub fn bind_task_attributes(hit: &KeywordHit, parsed: &ParsedQuery, resolution: &AttributeResolution) -> (Slots, bool) {
    let keyword_tokens: HashSet<usize> = (hit.span.0..hit.span.1).map(|p| parsed.trimmed_tokens[p].index).collect();
    let mut seen: HashSet<usize> = HashSet::new();
    let mut queue: VecDeque<usize> = parsed
        .relations
        .iter()
        .filter(|e| e.label == RelationLabel::Of && keyword_tokens.contains(&e.head_index))
        .map(|e| e.dependent_index)
        .collect();
    let mut group_ids: Vec<usize> = Vec::new();
    while let Some(tok) = queue.pop_front() {
        if !seen.insert(tok) {
            continue;
        }
        for e in parsed.relations.iter().filter(|e| e.label == RelationLabel::Conj) {
            if e.head_index == tok {
                queue.push_back(e.dependent_index);
            } else if e.dependent_index == tok {
                queue.push_back(e.head_index);
            }
        }
        if let Some(pos) = parsed.trimmed_position(tok) {
            for (gi, g) in resolution.groups.iter().enumerate() {
                if g.covers(pos) {
                    if !group_ids.contains(&gi) {
                        group_ids.push(gi);
                    }
                    for p in g.span.0..g.span.1 {
                        queue.push_back(parsed.trimmed_tokens[p].index);
                    }
                }
            }
        }
    }
    group_ids.sort_by_key(|&gi| resolution.groups[gi].span);
    let slots = slots_from(resolution, group_ids.into_iter());
    if !slots.is_empty() {
        return (slots, false);
    }
    (fallback_slots(resolution), true)
}

fn slots_from(resolution: &AttributeResolution, group_ids: impl Iterator<Item = usize>) -> Slots {
    let mut slots: Slots = Vec::new();
    for gi in group_ids {
        let alts: Vec<String> = resolution.groups[gi]
            .attributes
            .iter()
            .filter(|a| resolution.map.get(*a).is_some_and(|e| e.encode))
            .cloned()
            .collect();
        if !alts.is_empty() && !slots.contains(&alts) {
            slots.push(alts);
        }
    }
    slots
}

pub fn fallback_slots(resolution: &AttributeResolution) -> Slots {
    slots_from(resolution, 0..resolution.groups.len())
}

fn cartesian(slots: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![Vec::new()];
    for slot in slots {
        let mut next = Vec::new();
        for prefix in &out {
            for a in slot {
                if !prefix.contains(a) {
                    let mut p = prefix.clone();
                    p.push(a.clone());
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out.retain(|c| !c.is_empty());
    out
}

/// Instances for one base-task keyword hit.
pub fn instances_for(
    task: TaskKind,
    operator: Option<Operator>,
    hit: &KeywordHit,
    parsed: &ParsedQuery,
    resolution: &AttributeResolution,
    profile: &DatasetProfile,
) -> Vec<TaskInstance> {
    let (mut slots, _) = bind_task_attributes(hit, parsed, resolution);
    let mut out = Vec::new();
    let make = |attrs: Vec<String>, ambiguous: bool, op: Operator| {
        let mut inst = TaskInstance::new(task, InferenceType::Explicit, attrs, op);
        inst.query_phrase = vec![hit.surface.clone()];
        inst.is_attr_ambiguous = ambiguous;
        inst
    };
    match task {
        TaskKind::Correlation => {
            if slots.len() < 2 {
                slots = fallback_slots(resolution);
            }
            for i in 0..slots.len() {
                for j in i + 1..slots.len() {
                    let ambiguous = slots[i].len() > 1 || slots[j].len() > 1;
                    for a in &slots[i] {
                        for b in &slots[j] {
                            if a != b {
                                out.push(make(vec![a.clone(), b.clone()], ambiguous, Operator::None));
                            }
                        }
                    }
                }
            }
        }
        TaskKind::Distribution | TaskKind::Trend => {
            slots.truncate(3);
            let ambiguous = slots.iter().any(|s| s.len() > 1);
            for combo in cartesian(&slots) {
                out.push(make(combo, ambiguous, Operator::None));
            }
        }
        TaskKind::DerivedValue => {
            let op = operator.unwrap_or(Operator::Avg);
            for slot in &slots {
                let alts: Vec<&String> = slot
                    .iter()
                    .filter(|a| op == Operator::Count || profile.attr_type(a) == Some(AttrType::Quantitative))
                    .collect();
                for a in &alts {
                    out.push(make(vec![(*a).clone()], alts.len() > 1, op));
                }
            }
        }
        TaskKind::Filter => {}
    }
    out
}

/// Build filter instances from value matches and comparison phrases, and
/// mark every filtered attribute as not encoded.
pub fn extract_filters(
    parsed: &ParsedQuery,
    resolution: &mut AttributeResolution,
    profile: &DatasetProfile,
) -> (Vec<TaskInstance>, Vec<DroppedCandidate>) {
    let mut filters: Vec<TaskInstance> = Vec::new();
    let mut dropped = Vec::new();

    for g in &resolution.groups {
        let attr_ambiguous = g.values.len() > 1;
        for (attr, values) in &g.values {
            let idx = match filters
                .iter()
                .position(|f| f.operator == Operator::In && f.attributes.len() == 1 && f.attributes[0] == *attr)
            {
                Some(i) => i,
                None => {
                    let mut inst = TaskInstance::new(TaskKind::Filter, InferenceType::Explicit, vec![attr.clone()], Operator::In);
                    inst.is_attr_ambiguous = attr_ambiguous;
                    filters.push(inst);
                    filters.len() - 1
                }
            };
            let f = &mut filters[idx];
            if !f.query_phrase.contains(&g.phrase) {
                f.query_phrase.push(g.phrase.clone());
            }
            f.is_attr_ambiguous |= attr_ambiguous;
            for v in values {
                let v = serde_json::Value::String(v.clone());
                if !f.values.contains(&v) {
                    f.values.push(v);
                }
            }
            if values.len() > 1 {
                f.is_value_ambiguous = true;
                f.value_ambiguity.insert(g.phrase.clone(), values.clone());
            }
        }
    }

    let mut heads: Vec<usize> = parsed
        .relations
        .iter()
        .filter(|e| e.label == RelationLabel::Compare)
        .map(|e| e.head_index)
        .collect();
    heads.dedup();
    for head in heads {
        let Some((cmp, len)) = comparator_at(&parsed.tokens, head) else { continue };
        let deps: Vec<usize> = parsed
            .relations
            .iter()
            .filter(|e| e.label == RelationLabel::Compare && e.head_index == head)
            .map(|e| e.dependent_index)
            .collect();
        let mut nums: Vec<f64> = deps.iter().filter_map(|&d| parsed.tokens[d].numeric_value).collect();
        let anchors: Vec<usize> = deps.iter().copied().filter(|&d| parsed.tokens[d].pos != Pos::Num).collect();
        let phrase = parsed.tokens[head..head + len]
            .iter()
            .chain(deps.iter().filter(|&&d| parsed.tokens[d].pos == Pos::Num).map(|&d| &parsed.tokens[d]))
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let mut resolved: Option<(Vec<String>, String)> = None;
        for a in anchors {
            let Some(pos) = parsed.trimmed_position(a) else { continue };
            let mut attrs: Vec<String> = Vec::new();
            let mut anchor_phrase = String::new();
            for g in resolution.groups_covering(pos) {
                for attr in &g.attributes {
                    if profile.attr_type(attr) == Some(AttrType::Quantitative) && !attrs.contains(attr) {
                        attrs.push(attr.clone());
                        anchor_phrase = g.phrase.clone();
                    }
                }
            }
            if !attrs.is_empty() {
                resolved = Some((attrs, anchor_phrase));
                break;
            }
        }
        let Some((attrs, anchor_phrase)) = resolved else {
            dropped.push(DroppedCandidate {
                phrase,
                attribute: None,
                reason: "comparison has no quantitative attribute anchor".into(),
            });
            continue;
        };
        let (op, values) = match cmp {
            Comparison::Greater => (Operator::Gt, nums),
            Comparison::Less => (Operator::Lt, nums),
            Comparison::Equal => (Operator::Eq, nums),
            Comparison::Between => {
                nums.sort_by(f64::total_cmp);
                (Operator::Range, nums)
            }
        };
        for attr in &attrs {
            let mut inst = TaskInstance::new(TaskKind::Filter, InferenceType::Explicit, vec![attr.clone()], op);
            inst.query_phrase = vec![format!("{anchor_phrase} {phrase}")];
            inst.values = values.iter().map(|&v| json_number(v)).collect();
            inst.is_attr_ambiguous = attrs.len() > 1;
            if !filters.iter().any(|f| f.same_as(&inst)) {
                filters.push(inst);
            }
        }
    }

    for f in &filters {
        for a in &f.attributes {
            if let Some(entry) = resolution.map.get_mut(a) {
                entry.encode = false;
            }
        }
    }
    (filters, dropped)
}

/// Chart-implied tasks, skipping any already present.
pub fn infer_implicit_tasks(chart_tasks: &[(TaskKind, Vec<String>)], task_map: &TaskMap) -> Vec<TaskInstance> {
    let mut out: Vec<TaskInstance> = Vec::new();
    for (task, attrs) in chart_tasks {
        let inst = TaskInstance::new(*task, InferenceType::Implicit, attrs.clone(), Operator::None);
        let dup = |i: &TaskInstance| i.task == *task && same_set(&i.attributes, attrs);
        let present = task_map.get(task.as_str()).is_some_and(|l| l.iter().any(dup)) || out.iter().any(dup);
        if !present {
            out.push(inst);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_expansion() {
        let slots = vec![vec!["a".to_string()], vec!["b".to_string(), "c".to_string()]];
        assert_eq!(cartesian(&slots), vec![vec!["a", "b"], vec!["a", "c"]]);
        assert!(cartesian(&[]).is_empty());
    }

    #[test]
    fn insert_dedupes_and_orders() {
        let mut map = TaskMap::new();
        let f = TaskInstance::new(TaskKind::Filter, InferenceType::Explicit, vec!["A".into()], Operator::In);
        let c = TaskInstance::new(
            TaskKind::Correlation,
            InferenceType::Explicit,
            vec!["A".into(), "B".into()],
            Operator::None,
        );
        assert!(insert_task(&mut map, f.clone()));
        assert!(!insert_task(&mut map, f));
        let mut swapped = c.clone();
        swapped.attributes.reverse();
        assert!(insert_task(&mut map, c));
        assert!(!insert_task(&mut map, swapped));
        assert_eq!(map.keys().collect::<Vec<_>>(), ["correlation", "filter"]);
    }

    #[test]
    fn implicit_skips_explicit() {
        let mut map = TaskMap::new();
        insert_task(
            &mut map,
            TaskInstance::new(TaskKind::Correlation, InferenceType::Explicit, vec!["A".into(), "B".into()], Operator::None),
        );
        let got = infer_implicit_tasks(
            &[
                (TaskKind::Correlation, vec!["B".into(), "A".into()]),
                (TaskKind::DerivedValue, vec!["C".into()]),
                (TaskKind::DerivedValue, vec!["C".into()]),
            ],
            &map,
        );
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].task, TaskKind::DerivedValue);
        assert_eq!(got[0].operator, Operator::None);
    }
}
