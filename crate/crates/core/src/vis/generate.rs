use std::fmt;

use serde::{Deserialize, Serialize};

use super::spec::{DataRef, Encoding, FieldDef, FieldPredicate, Mark, Transform, VegaLiteSpec, VEGA_LITE_SCHEMA};
use crate::attr::{AttributeMap, AttributeResolution, InferenceType};
use crate::error::{Error, Result};
use crate::ingest::{AttrType, DatasetProfile};
use crate::task::{Operator, TaskInstance, TaskKind};

/// Most categories a color legend gets before a column facet is used instead.
const MAX_COLOR_CATEGORIES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartId {
    Histogram,
    Barchart,
    Linechart,
    Areachart,
    Scatterplot,
    Piechart,
    Boxplot,
    Stripplot,
    Heatmap,
    Table,
}

impl ChartId {
    pub const ALL: [ChartId; 10] = [
        ChartId::Histogram,
        ChartId::Barchart,
        ChartId::Linechart,
        ChartId::Areachart,
        ChartId::Scatterplot,
        ChartId::Piechart,
        ChartId::Boxplot,
        ChartId::Stripplot,
        ChartId::Heatmap,
        ChartId::Table,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Histogram => "histogram",
            Self::Barchart => "barchart",
            Self::Linechart => "linechart",
            Self::Areachart => "areachart",
            Self::Scatterplot => "scatterplot",
            Self::Piechart => "piechart",
            Self::Boxplot => "boxplot",
            Self::Stripplot => "stripplot",
            Self::Heatmap => "heatmap",
            Self::Table => "table",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == id)
    }

    /// The mark a request for this chart must produce.
    pub fn mark(self) -> Mark {
        match self {
            Self::Histogram | Self::Barchart | Self::Heatmap => Mark::Bar,
            Self::Linechart => Mark::Line,
            Self::Areachart => Mark::Area,
            Self::Scatterplot => Mark::Point,
            Self::Piechart => Mark::Arc,
            Self::Boxplot => Mark::Boxplot,
            Self::Stripplot => Mark::Tick,
            Self::Table => Mark::Text,
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChartRequest {
    pub chart_id: ChartId,
    pub query_phrase: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ChartSource {
    Attributes,
    AttributesAndTasks,
    Request,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedChart {
    pub spec: VegaLiteSpec,
    /// The analytic task the chart serves.
    pub task: Option<TaskKind>,
    pub task_attributes: Vec<String>,
    pub source: ChartSource,
    /// The requested chart type was produced (not a table fallback).
    pub honored_request: bool,
}

pub struct VisContext<'a> {
    pub profile: &'a DatasetProfile,
    /// Explicit non-filter task instances.
    pub tasks: &'a [TaskInstance],
    pub filters: &'a [TaskInstance],
    pub request: Option<ChartId>,
    pub data_name: &'a str,
}

/// Expand ambiguity groups over the encodable attributes; every result has
/// at most three attributes.
pub fn enumerate_combinations(resolution: &AttributeResolution) -> Vec<Vec<String>> {
    let order: Vec<&String> = resolution.map.keys().collect();
    let encodable: Vec<String> = resolution.encodable().map(|e| e.name.clone()).collect();
    let rank = |a: &String| order.iter().position(|o| *o == a).unwrap_or(usize::MAX);

    let mut slots: Vec<Vec<String>> = Vec::new();
    let mut placed: Vec<String> = Vec::new();
    for name in &encodable {
        if placed.contains(name) {
            continue;
        }
        let group = resolution
            .groups
            .iter()
            .filter(|g| g.attributes.contains(name))
            .map(|g| g.attributes.iter().filter(|a| encodable.contains(a)).cloned().collect::<Vec<_>>())
            .find(|alts| alts.len() > 1);
        let mut slot = group.unwrap_or_else(|| vec![name.clone()]);
        slot.retain(|a| !placed.contains(a));
        slot.sort_by_key(rank);
        placed.extend(slot.iter().cloned());
        slots.push(slot);
    }

    let mut combos: Vec<Vec<String>> = vec![Vec::new()];
    for slot in &slots {
        combos = combos
            .iter()
            .flat_map(|prefix| {
                slot.iter().map(move |a| {
                    let mut c = prefix.clone();
                    c.push(a.clone());
                    c
                })
            })
            .collect();
    }
    let mut out: Vec<Vec<String>> = Vec::new();
    for mut combo in combos {
        if combo.is_empty() {
            continue;
        }
        combo.sort_by_key(rank);
        let pieces = if combo.len() > 3 { subsets_of_three(&combo) } else { vec![combo] };
        for p in pieces {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn subsets_of_three(items: &[String]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            for k in j + 1..items.len() {
                out.push(vec![items[i].clone(), items[j].clone(), items[k].clone()]);
            }
        }
    }
    out
}

struct Roles {
    q: Vec<String>,
    d: Vec<String>,
    t: Vec<String>,
}

impl Roles {
    fn signature(&self) -> (usize, usize, usize) {
        (self.q.len(), self.d.len(), self.t.len())
    }
}

struct Builder<'a> {
    ctx: &'a VisContext<'a>,
    combo: &'a [String],
    roles: Roles,
    aggregate: String,
}

impl Builder<'_> {
    fn ty(&self, name: &str) -> AttrType {
        self.ctx.profile.attr_type(name).unwrap_or(AttrType::Nominal)
    }

    fn f(&self, name: &str) -> FieldDef {
        FieldDef::field(name, self.ty(name))
    }

    fn categories(&self, name: &str) -> usize {
        self.ctx.profile.attribute(name).map_or(0, |a| a.domain.values().len())
    }

    fn spec(&self, mark: Mark, encoding: Encoding) -> VegaLiteSpec {
        VegaLiteSpec {
            schema: VEGA_LITE_SCHEMA.to_string(),
            data: DataRef {
                name: self.ctx.data_name.to_string(),
                values: None,
            },
            mark,
            encoding,
            transform: Vec::new(),
        }
    }

    /// Put a discrete attribute on color when its legend stays small, else facet by column.
    fn color_or_column(&self, enc: &mut Encoding, name: &str) {
        if self.categories(name) <= MAX_COLOR_CATEGORIES {
            enc.color = Some(self.f(name));
        } else {
            enc.column = Some(self.f(name));
        }
    }

    fn scatter(&self, x: &str, y: &str) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let mut enc = Encoding {
            x: Some(self.f(x)),
            y: Some(self.f(y)),
            ..Default::default()
        };
        if let Some(third) = self.combo.iter().find(|a| *a != x && *a != y) {
            match self.ty(third) {
                AttrType::Quantitative => enc.size = Some(self.f(third)),
                AttrType::Temporal => enc.column = Some(self.f(third)),
                _ => enc.color = Some(self.f(third)),
            }
        }
        (self.spec(Mark::Point, enc), Some(TaskKind::Correlation), vec![x.to_string(), y.to_string()])
    }

    fn histogram(&self, q: &str) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let mut enc = Encoding {
            x: Some(FieldDef::binned(q)),
            y: Some(FieldDef::count()),
            ..Default::default()
        };
        if let Some(d) = self.roles.d.first() {
            enc.color = Some(self.f(d));
        }
        (self.spec(Mark::Bar, enc), Some(TaskKind::Distribution), vec![q.to_string()])
    }

    fn count_bar(&self) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let d0 = &self.roles.d[0];
        let mut enc = Encoding {
            x: Some(self.f(d0)),
            y: Some(FieldDef::count()),
            ..Default::default()
        };
        if let Some(d1) = self.roles.d.get(1) {
            self.color_or_column(&mut enc, d1);
        }
        (self.spec(Mark::Bar, enc), Some(TaskKind::Distribution), self.roles.d.clone())
    }

    fn aggregate_bar(&self, x: &str, q: &str) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let mut enc = Encoding {
            x: Some(self.f(x)),
            y: Some(FieldDef::aggregated(q, &self.aggregate)),
            ..Default::default()
        };
        if let Some(extra) = self.combo.iter().find(|a| *a != x && *a != q) {
            if self.ty(extra) == AttrType::Temporal {
                enc.column = Some(self.f(extra));
            } else {
                self.color_or_column(&mut enc, extra);
            }
        }
        (self.spec(Mark::Bar, enc), Some(TaskKind::DerivedValue), vec![q.to_string()])
    }

    fn line(&self, mark: Mark) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let t = &self.roles.t[0];
        let y = match self.roles.q.first() {
            Some(q) => FieldDef::aggregated(q, &self.aggregate),
            None => FieldDef::count(),
        };
        let mut enc = Encoding {
            x: Some(self.f(t)),
            y: Some(y),
            ..Default::default()
        };
        if let Some(d) = self.roles.d.first() {
            enc.color = Some(self.f(d));
        }
        let mut attrs = vec![t.clone()];
        attrs.extend(self.roles.q.first().cloned());
        (self.spec(mark, enc), Some(TaskKind::Trend), attrs)
    }

    fn table(&self) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let c = self.combo;
        let mut enc = Encoding {
            text: Some(FieldDef::count()),
            ..Default::default()
        };
        if let Some(a) = c.first() {
            enc.row = Some(self.f(a));
        }
        if let Some(b) = c.get(1) {
            enc.column = Some(self.f(b));
        }
        if let Some(v) = c.get(2) {
            enc.text = Some(if self.ty(v) == AttrType::Quantitative {
                FieldDef::aggregated(v, "mean")
            } else {
                self.f(v)
            });
        }
        (self.spec(Mark::Text, enc), None, Vec::new())
    }

    /// Default chart for the attribute types alone.
    fn by_types(&self) -> (VegaLiteSpec, Option<TaskKind>, Vec<String>) {
        let r = &self.roles;
        match r.signature() {
            (1, 0, 0) => self.histogram(&r.q[0]),
            (0, 1 | 2, 0) => self.count_bar(),
            (0, 0, 1) | (0, 1, 1) | (1, 0, 1) | (1, 1, 1) => self.line(Mark::Line),
            (2, _, _) | (3, 0, 0) => self.scatter(&r.q[0], &r.q[1]),
            (1, 1 | 2, 0) => self.aggregate_bar(&r.d[0], &r.q[0]),
            _ => self.table(),
        }
    }

    fn requested(&self, chart: ChartId) -> Option<(VegaLiteSpec, Option<TaskKind>, Vec<String>)> {
        let r = &self.roles;
        let (nq, nd, nt) = r.signature();
        Some(match chart {
            ChartId::Histogram => match (r.q.first(), nd) {
                (Some(q), _) => self.histogram(q),
                (None, 1 | 2) => self.count_bar(),
                _ => return None,
            },
            ChartId::Barchart => {
                if nt >= 1 && nq >= 1 && nd >= 1 {
                    let t = &r.t[0];
                    let d = &r.d[0];
                    let enc = Encoding {
                        x: Some(self.f(d)),
                        y: Some(FieldDef::aggregated(&r.q[0], &self.aggregate)),
                        color: Some(self.f(d)),
                        column: Some(self.f(t)),
                        ..Default::default()
                    };
                    (self.spec(Mark::Bar, enc), Some(TaskKind::DerivedValue), vec![r.q[0].clone()])
                } else if nq >= 1 && nd >= 1 {
                    self.aggregate_bar(&r.d[0], &r.q[0])
                } else if nq >= 1 && nt >= 1 {
                    self.aggregate_bar(&r.t[0], &r.q[0])
                } else if nq == 2 {
                    let enc = Encoding {
                        x: Some(FieldDef::binned(&r.q[0])),
                        y: Some(FieldDef::aggregated(&r.q[1], &self.aggregate)),
                        ..Default::default()
                    };
                    (self.spec(Mark::Bar, enc), Some(TaskKind::DerivedValue), vec![r.q[1].clone()])
                } else if nq == 1 {
                    self.histogram(&r.q[0])
                } else if nd >= 1 {
                    self.count_bar()
                } else if nt == 1 {
                    let enc = Encoding {
                        x: Some(self.f(&r.t[0])),
                        y: Some(FieldDef::count()),
                        ..Default::default()
                    };
                    (self.spec(Mark::Bar, enc), Some(TaskKind::Distribution), r.t.clone())
                } else {
                    return None;
                }
            }
            ChartId::Linechart | ChartId::Areachart => {
                let mark = chart.mark();
                if nt >= 1 {
                    self.line(mark)
                } else if nq >= 1 && nd >= 1 {
                    let (mut spec, _, attrs) = self.aggregate_bar(&r.d[0], &r.q[0]);
                    spec.mark = mark;
                    (spec, Some(TaskKind::Trend), attrs)
                } else if nq == 2 {
                    let enc = Encoding {
                        x: Some(self.f(&r.q[0])),
                        y: Some(FieldDef::aggregated(&r.q[1], &self.aggregate)),
                        ..Default::default()
                    };
                    (self.spec(mark, enc), Some(TaskKind::Trend), vec![r.q[0].clone(), r.q[1].clone()])
                } else if nq == 1 {
                    let (mut spec, _, attrs) = self.histogram(&r.q[0]);
                    spec.mark = mark;
                    (spec, Some(TaskKind::Distribution), attrs)
                } else {
                    return None;
                }
            }
            ChartId::Scatterplot => {
                if nq >= 2 {
                    self.scatter(&r.q[0], &r.q[1])
                } else if nq == 1 {
                    let mut enc = Encoding {
                        x: Some(self.f(&r.q[0])),
                        ..Default::default()
                    };
                    if let Some(other) = r.d.first().or(r.t.first()) {
                        enc.y = Some(self.f(other));
                    }
                    (self.spec(Mark::Point, enc), Some(TaskKind::Distribution), vec![r.q[0].clone()])
                } else {
                    return None;
                }
            }
            ChartId::Piechart => {
                let d = r.d.first()?;
                let theta = match r.q.first() {
                    Some(q) => FieldDef::aggregated(q, if self.aggregate == "mean" { "sum" } else { &self.aggregate }),
                    None => FieldDef::count(),
                };
                let enc = Encoding {
                    theta: Some(theta),
                    color: Some(self.f(d)),
                    ..Default::default()
                };
                let attrs = r.q.first().map_or_else(|| vec![d.clone()], |q| vec![q.clone()]);
                (self.spec(Mark::Arc, enc), Some(TaskKind::DerivedValue), attrs)
            }
            ChartId::Boxplot => {
                let q = r.q.first()?;
                let mut enc = Encoding {
                    y: Some(self.f(q)),
                    ..Default::default()
                };
                if let Some(d) = r.d.first() {
                    enc.x = Some(self.f(d));
                }
                (self.spec(Mark::Boxplot, enc), Some(TaskKind::Distribution), vec![q.clone()])
            }
            ChartId::Stripplot => {
                let q = r.q.first()?;
                let mut enc = Encoding {
                    x: Some(self.f(q)),
                    ..Default::default()
                };
                if let Some(d) = r.d.first() {
                    enc.y = Some(self.f(d));
                }
                (self.spec(Mark::Tick, enc), Some(TaskKind::Distribution), vec![q.clone()])
            }
            ChartId::Heatmap => {
                let (x, y) = match (nq, nd) {
                    (q, _) if q >= 2 => (FieldDef::binned(&r.q[0]), FieldDef::binned(&r.q[1])),
                    (1, d) if d >= 1 => (self.f(&r.d[0]), FieldDef::binned(&r.q[0])),
                    (0, d) if d >= 2 => (self.f(&r.d[0]), self.f(&r.d[1])),
                    _ => return None,
                };
                let enc = Encoding {
                    x: Some(x),
                    y: Some(y),
                    color: Some(FieldDef::count()),
                    ..Default::default()
                };
                (self.spec(Mark::Bar, enc), Some(TaskKind::Distribution), self.combo.to_vec())
            }
            ChartId::Table => self.table(),
        })
    }

    fn for_distribution(&self) -> Option<(VegaLiteSpec, Option<TaskKind>, Vec<String>)> {
        let r = &self.roles;
        Some(match r.signature() {
            (1, 0, 0) => self.histogram(&r.q[0]),
            (1, 1, 0) => {
                let enc = Encoding {
                    x: Some(self.f(&r.q[0])),
                    y: Some(self.f(&r.d[0])),
                    ..Default::default()
                };
                (self.spec(Mark::Tick, enc), Some(TaskKind::Distribution), vec![r.q[0].clone()])
            }
            (2, 0, 0) => {
                let enc = Encoding {
                    x: Some(FieldDef::binned(&r.q[0])),
                    y: Some(FieldDef::binned(&r.q[1])),
                    color: Some(FieldDef::count()),
                    ..Default::default()
                };
                (self.spec(Mark::Bar, enc), Some(TaskKind::Distribution), r.q.clone())
            }
            (0, 1 | 2, 0) => self.count_bar(),
            _ => return None,
        })
    }
}

fn transforms(filters: &[TaskInstance]) -> Vec<Transform> {
    filters
        .iter()
        .filter_map(|f| {
            let field = f.attributes.first()?.clone();
            let mut p = FieldPredicate {
                field,
                one_of: None,
                gt: None,
                lt: None,
                equal: None,
                range: None,
            };
            match f.operator {
                Operator::In => p.one_of = Some(f.values.clone()),
                Operator::Gt => p.gt = f.values.first().cloned(),
                Operator::Lt => p.lt = f.values.first().cloned(),
                Operator::Eq => p.equal = f.values.first().cloned(),
                Operator::Range => p.range = Some(f.values.clone()),
                _ => return None,
            }
            Some(Transform { filter: p })
        })
        .collect()
}

/// Build the chart for one attribute combination.
pub fn generate_spec(combo: &[String], ctx: &VisContext<'_>) -> Result<GeneratedChart> {
    if combo.len() > 3 {
        return Err(Error::Contract(format!(
            "combination of {} attributes; at most 3 can be encoded",
            combo.len()
        )));
    }
    let mut roles = Roles {
        q: Vec::new(),
        d: Vec::new(),
        t: Vec::new(),
    };
    for a in combo {
        match ctx.profile.attr_type(a) {
            Some(AttrType::Quantitative) => roles.q.push(a.clone()),
            Some(AttrType::Temporal) => roles.t.push(a.clone()),
            Some(_) => roles.d.push(a.clone()),
            None => return Err(Error::Key(a.clone())),
        }
    }
    let aggregate = ctx
        .tasks
        .iter()
        .find(|t| t.task == TaskKind::DerivedValue && t.attributes.iter().all(|a| combo.contains(a)))
        .and_then(|t| t.operator.aggregate())
        .unwrap_or("mean")
        .to_string();
    let b = Builder {
        ctx,
        combo,
        roles,
        aggregate,
    };
    let within = |t: &&TaskInstance| !t.attributes.is_empty() && t.attributes.iter().all(|a| combo.contains(a));
    let has_task = |kind: TaskKind| ctx.tasks.iter().filter(within).any(|t| t.task == kind);

    let mut honored_request = false;
    let (spec, task, task_attributes, source) = if let Some(chart) = ctx.request {
        match b.requested(chart) {
            Some((s, t, a)) => {
                honored_request = true;
                (s, t, a, ChartSource::Request)
            }
            None => {
                let (s, t, a) = b.table();
                (s, t, a, ChartSource::Request)
            }
        }
    } else if let Some(c) = ctx.tasks.iter().filter(within).find(|t| t.task == TaskKind::Correlation) {
        let (s, t, a) = b.scatter(&c.attributes[0], &c.attributes[1]);
        (s, t, a, ChartSource::AttributesAndTasks)
    } else if let Some((s, t, a)) = has_task(TaskKind::Distribution).then(|| b.for_distribution()).flatten() {
        (s, t, a, ChartSource::AttributesAndTasks)
    } else if b.roles.signature() == (1, 0, 0) && has_task(TaskKind::DerivedValue) {
        let q = &b.roles.q[0];
        let enc = Encoding {
            y: Some(FieldDef::aggregated(q, &b.aggregate)),
            ..Default::default()
        };
        (b.spec(Mark::Bar, enc), Some(TaskKind::DerivedValue), vec![q.clone()], ChartSource::AttributesAndTasks)
    } else {
        let (s, t, a) = b.by_types();
        let guided = t.is_some_and(|k| has_task(k));
        (
            s,
            t,
            a,
            if guided {
                ChartSource::AttributesAndTasks
            } else {
                ChartSource::Attributes
            },
        )
    };
    let mut spec = spec;
    spec.transform = transforms(ctx.filters);
    Ok(GeneratedChart {
        spec,
        task,
        task_attributes,
        source,
        honored_request,
    })
}

/// Text-mark count table for queries that only filter.
pub fn filter_only_table(ctx: &VisContext<'_>) -> GeneratedChart {
    let spec = VegaLiteSpec {
        schema: VEGA_LITE_SCHEMA.to_string(),
        data: DataRef {
            name: ctx.data_name.to_string(),
            values: None,
        },
        mark: Mark::Text,
        encoding: Encoding {
            text: Some(FieldDef::count()),
            ..Default::default()
        },
        transform: transforms(ctx.filters),
    };
    GeneratedChart {
        spec,
        task: None,
        task_attributes: Vec::new(),
        source: if ctx.request.is_some() {
            ChartSource::Request
        } else {
            ChartSource::Attributes
        },
        honored_request: ctx.request == Some(ChartId::Table),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VisListEntry {
    pub attributes: Vec<String>,
    pub inference_type: InferenceType,
    pub tasks: Vec<TaskKind>,
    pub score: f64,
    pub vl_spec: VegaLiteSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct RankingWeights {
    pub explicit_request: f64,
    pub task_match: f64,
    pub affinity: f64,
    pub explicit_attribute: f64,
}

impl Default for RankingWeights {
    fn default() -> Self {
        Self {
            explicit_request: 100.0,
            task_match: 10.0,
            affinity: 5.0,
            explicit_attribute: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankingScore {
    pub attributes: Vec<String>,
    pub mark: Mark,
    pub score: f64,
    pub explicit_request: bool,
    pub task_match: bool,
    pub affinity: bool,
    pub explicit_attributes: usize,
    pub chart_source: ChartSource,
}

fn has_affinity(task: TaskKind, types: &[AttrType]) -> bool {
    let count = |t: AttrType| types.iter().filter(|x| **x == t).count();
    let q = count(AttrType::Quantitative);
    let d = types.iter().filter(|t| t.is_discrete()).count();
    let t = count(AttrType::Temporal);
    match task {
        TaskKind::Correlation => q >= 2,
        TaskKind::Distribution => q == 1 && t == 0,
        TaskKind::DerivedValue => q >= 1 && d >= 1,
        TaskKind::Trend => t >= 1,
        TaskKind::Filter => false,
    }
}

/// Score charts and order them, best first; ties keep generation order.
pub fn rank_vis(
    charts: Vec<GeneratedChart>,
    ctx: &VisContext<'_>,
    map: &AttributeMap,
    weights: &RankingWeights,
) -> (Vec<VisListEntry>, Vec<RankingScore>) {
    let mut scored: Vec<(VisListEntry, RankingScore)> = charts
        .into_iter()
        .map(|c| {
            let fields = c.spec.encoding.fields();
            let types: Vec<AttrType> = fields.iter().filter_map(|f| ctx.profile.attr_type(f)).collect();
            let explicit_request = c.honored_request;
            let task_match = c.task.is_some_and(|k| {
                ctx.tasks
                    .iter()
                    .any(|t| t.task == k && t.attributes.iter().all(|a| fields.contains(a)))
            });
            let affinity = task_match && c.task.is_some_and(|k| has_affinity(k, &types));
            let explicit_attributes = fields
                .iter()
                .filter(|f| map.get(*f).is_some_and(|e| e.inference_type == InferenceType::Explicit))
                .count();
            let score = weights.explicit_request * f64::from(u8::from(explicit_request))
                + weights.task_match * f64::from(u8::from(task_match))
                + weights.affinity * f64::from(u8::from(affinity))
                + weights.explicit_attribute * explicit_attributes as f64;

            let mut tasks: Vec<TaskKind> = c.task.into_iter().collect();
            for t in ctx.tasks {
                if !tasks.contains(&t.task) && !t.attributes.is_empty() && t.attributes.iter().all(|a| fields.contains(a)) {
                    tasks.push(t.task);
                }
            }
            if !c.spec.transform.is_empty() {
                tasks.push(TaskKind::Filter);
            }
            tasks.sort();
            let mut attributes = fields.clone();
            for f in c.spec.filtered_fields() {
                if !attributes.contains(&f) {
                    attributes.push(f);
                }
            }
            let entry = VisListEntry {
                attributes: attributes.clone(),
                inference_type: if c.source == ChartSource::Request {
                    InferenceType::Explicit
                } else {
                    InferenceType::Implicit
                },
                tasks,
                score,
                vl_spec: c.spec.clone(),
            };
            let detail = RankingScore {
                attributes,
                mark: c.spec.mark,
                score,
                explicit_request,
                task_match,
                affinity,
                explicit_attributes,
                chart_source: c.source,
            };
            (entry, detail)
        })
        .collect();
    scored.sort_by(|a, b| b.0.score.total_cmp(&a.0.score));
    scored.into_iter().unzip()
}
