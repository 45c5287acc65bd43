use super::spec::{FieldDef, FieldType, Mark, VegaLiteSpec, VEGA_LITE_SCHEMA};
use crate::ingest::{AttrType, DatasetProfile};

const AGGREGATES: &[&str] = &["count", "mean", "sum", "min", "max", "median"];

/// Structural checks for the supported mark and encoding subset. Returns
/// one message per problem; an empty list means the spec is valid.
pub fn validate_spec(spec: &VegaLiteSpec, profile: &DatasetProfile) -> Vec<String> {
    let mut problems = Vec::new();
    if spec.schema != VEGA_LITE_SCHEMA {
        problems.push(format!("unexpected $schema {}", spec.schema));
    }
    if spec.data.name.is_empty() && spec.data.values.is_none() {
        problems.push("data has neither a name nor inline values".to_string());
    }

    let enc = &spec.encoding;
    let channels = enc.channels();
    match spec.mark {
        Mark::Arc => {
            if enc.theta.is_none() {
                problems.push("arc mark without theta".to_string());
            }
        }
        Mark::Text => {
            if enc.text.is_none() {
                problems.push("text mark without text channel".to_string());
            }
        }
        _ => {
            if enc.x.is_none() && enc.y.is_none() {
                problems.push(format!("{:?} mark without x or y", spec.mark).to_lowercase());
            }
        }
    }
    if enc.theta.is_some() && spec.mark != Mark::Arc {
        problems.push("theta used without arc mark".to_string());
    }

    for (channel, def) in &channels {
        check_field(channel, def, profile, &mut problems);
    }
    let fields = enc.fields();
    if fields.len() > 3 {
        problems.push(format!("{} distinct encoded fields", fields.len()));
    }

    for t in &spec.transform {
        let p = &t.filter;
        if profile.attribute(&p.field).is_none() {
            problems.push(format!("filter on unknown field {}", p.field));
        }
        let set = [p.one_of.is_some(), p.gt.is_some(), p.lt.is_some(), p.equal.is_some(), p.range.is_some()]
            .into_iter()
            .filter(|b| *b)
            .count();
        if set != 1 {
            problems.push(format!("filter on {} has {set} predicates", p.field));
        }
        if p.one_of.as_ref().is_some_and(Vec::is_empty) {
            problems.push(format!("empty oneOf on {}", p.field));
        }
        for v in [&p.gt, &p.lt].into_iter().flatten() {
            if !v.is_number() {
                problems.push(format!("non-numeric bound on {}", p.field));
            }
        }
        if let Some(r) = &p.range {
            let nums: Vec<f64> = r.iter().filter_map(serde_json::Value::as_f64).collect();
            if nums.len() != 2 || r.len() != 2 || nums[0] > nums[1] {
                problems.push(format!("range on {} is not two ascending numbers", p.field));
            }
        }
    }
    problems
}

fn check_field(channel: &str, def: &FieldDef, profile: &DatasetProfile, problems: &mut Vec<String>) {
    if let Some(agg) = &def.aggregate {
        if !AGGREGATES.contains(&agg.as_str()) {
            problems.push(format!("{channel}: unknown aggregate {agg}"));
        }
    }
    let is_count = def.aggregate.as_deref() == Some("count");
    let Some(field) = &def.field else {
        if !is_count {
            problems.push(format!("{channel}: no field and no count aggregate"));
        }
        return;
    };
    let Some(attr) = profile.attribute(field) else {
        problems.push(format!("{channel}: unknown field {field}"));
        return;
    };
    if FieldType::from(attr.attr_type) != def.field_type {
        problems.push(format!(
            "{channel}: {field} typed {:?} but the attribute is {}",
            def.field_type,
            attr.attr_type.code()
        ));
    }
    if def.bin == Some(true) && attr.attr_type != AttrType::Quantitative {
        problems.push(format!("{channel}: bin on non-quantitative {field}"));
    }
    if def.time_unit.is_some() && attr.attr_type != AttrType::Temporal {
        problems.push(format!("{channel}: timeUnit on non-temporal {field}"));
    }
    if def.aggregate.is_some() && !is_count && attr.attr_type != AttrType::Quantitative {
        problems.push(format!("{channel}: aggregate on non-quantitative {field}"));
    }
}
