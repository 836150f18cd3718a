//! Wire formats. Every JSON document is built as a `serde_json::Value`,
//! whose object maps keep keys sorted, so identical results serialize to
//! identical bytes no matter which front end produced them.

use serde_json::{json, Value};

use crate::benchmark::BenchmarkProfile;
use crate::corpus::{Corpus, InstitutionRecord, ValidationReport};
use crate::error::EngineError;
use crate::indicators::{Indicator, IndicatorVector};
use crate::rating::{OverallRating, RatingRow};
use crate::taxonomy::SubjectTaxonomy;

fn actual_values(v: &IndicatorVector) -> Value {
    json!([
        v.total_pubs,
        v.total_cites,
        v.h_index,
        v.pct_top_snip,
        v.cpp
    ])
}

pub fn rating_json(rows: &[RatingRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "institution": r.institution_id,
                    "name": r.name,
                    "pubs": r.vector.total_pubs,
                    "cites": r.vector.total_cites,
                    "h": r.vector.h_index,
                    "pct_top_snip": r.vector.pct_top_snip,
                    "cpp": r.vector.cpp,
                    "percentage": r.percentage,
                    "band": r.band,
                })
            })
            .collect(),
    )
}

/// CSV in the column order of a printed rating table, with display rounding.
pub fn rating_csv(rows: &[RatingRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "University",
        "Publication",
        "Citation",
        "H-index",
        "% Pubs in top 25% SNIP",
        "CPP",
        "Band",
    ])
    .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.name.clone(),
            r.vector.total_pubs.to_string(),
            r.vector.total_cites.to_string(),
            r.vector.h_index.to_string(),
            format!("{:.2}", r.vector.pct_top_snip),
            format!("{:.2}", r.vector.cpp),
            r.band.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn benchmark_json(profile: &BenchmarkProfile) -> Value {
    json!({
        "subject": profile.subject,
        "level": profile.level,
        "window": profile.window,
        "indicators": Indicator::ALL.map(Indicator::key),
        "entries": profile.entries.iter().map(|e| json!({
            "institution": e.institution_id,
            "actual": actual_values(&e.actual),
            "pct": e.pct,
        })).collect::<Vec<_>>(),
        "degenerate": profile.degenerate,
    })
}

pub fn benchmark_multi_json(profiles: &[BenchmarkProfile]) -> Value {
    Value::Array(profiles.iter().map(benchmark_json).collect())
}

pub fn overall_json(corpus: &Corpus, overall: &OverallRating) -> Value {
    json!({
        "preset": overall.query.preset,
        "region": overall.query.region,
        "window": overall.query.window,
        "min_pubs": overall.query.min_pubs,
        "subjects": overall.subjects.iter().map(|c| json!({
            "code": c,
            "name": corpus.taxonomy().node(*c).map(|n| n.name.as_str()),
        })).collect::<Vec<_>>(),
        "rows": overall.rows.iter().map(|r| json!({
            "institution": r.institution_id,
            "name": r.name,
            "bands": r.bands,
        })).collect::<Vec<_>>(),
    })
}

/// Nested tree of level-1 roots, each with its children.
pub fn taxonomy_json(taxonomy: &SubjectTaxonomy) -> Value {
    fn node_json(t: &SubjectTaxonomy, code: crate::taxonomy::SubjectCode) -> Value {
        let n = t.node(code).expect("child codes exist");
        json!({
            "code": n.code,
            "name": n.name,
            "level": n.level,
            "children": t.children(code).map(|c| node_json(t, c)).collect::<Vec<_>>(),
        })
    }
    let roots: Vec<Value> = taxonomy
        .nodes_at(crate::taxonomy::Level::Discipline)
        .map(|n| node_json(taxonomy, n.code))
        .collect();
    json!({ "nodes": taxonomy.len(), "roots": roots })
}

pub fn institutions_json<'a>(
    institutions: impl IntoIterator<Item = &'a InstitutionRecord>,
) -> Value {
    Value::Array(
        institutions
            .into_iter()
            .map(|i| json!({"institution": i.institution_id, "name": i.name, "region": i.region}))
            .collect(),
    )
}

pub fn validation_json(report: &ValidationReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

pub fn error_json(err: &EngineError) -> Value {
    json!({ "error": err.name(), "message": err.to_string() })
}

/// Compact canonical serialization used for HTTP bodies.
pub fn to_compact(value: &Value) -> String {
    serde_json::to_string(value).expect("Value serializes")
}

/// Pretty serialization with a trailing newline, used for files.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("Value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> RatingRow {
        RatingRow {
            institution_id: "U1".into(),
            name: "Uni, \"One\"".into(),
            vector: IndicatorVector {
                total_pubs: 905,
                total_cites: 6224,
                h_index: 32,
                pct_top_snip: 42.0,
                cpp: 6224.0 / 905.0,
            },
            grand_total: 250.0,
            percentage: 100.0,
            band: 1,
        }
    }

    #[test]
    fn rating_json_keys_are_sorted() {
        let s = to_compact(&rating_json(&[row()]));
        assert!(
            s.starts_with(r#"[{"band":1,"cites":6224,"cpp":6.87"#),
            "{s}"
        );
        let keys = [
            "band",
            "cites",
            "cpp",
            "h",
            "institution",
            "name",
            "pct_top_snip",
            "percentage",
            "pubs",
        ];
        let mut last = 0;
        for k in keys {
            let at = s.find(&format!("\"{k}\":")).unwrap();
            assert!(at >= last);
            last = at;
        }
    }

    #[test]
    fn csv_rounds_for_display() {
        let s = rating_csv(&[row()]);
        let mut lines = s.lines();
        assert_eq!(
            lines.next().unwrap(),
            "University,Publication,Citation,H-index,% Pubs in top 25% SNIP,CPP,Band"
        );
        assert_eq!(
            lines.next().unwrap(),
            "\"Uni, \"\"One\"\"\",905,6224,32,42.00,6.88,1"
        );
    }
}
