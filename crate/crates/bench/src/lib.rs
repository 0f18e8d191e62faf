//! Shared fixtures for the pipeline benchmarks.

use timenorm_core::corpus::AnnotatedExpression;

/// A small hand-annotated training corpus exercising every rule shape the
/// learner produces: direct equalities, shifts, month anchors, durations,
/// and sets.
pub fn training_corpus() -> Vec<AnnotatedExpression> {
    let rows: &[(&str, &str, &str, &str)] = &[
        ("last october", "DATE", "2020-10", "2021-05-17"),
        ("last july", "DATE", "2020-07", "2021-05-17"),
        ("last january", "DATE", "2019-01", "2020-06-15"),
        ("last year", "DATE", "2020", "2021-05-17"),
        ("last month", "DATE", "2021-04", "2021-05-17"),
        ("last week", "DATE", "2021-W19", "2021-05-17"),
        ("this month", "DATE", "2021-05", "2021-05-17"),
        ("this year", "DATE", "2021", "2021-05-17"),
        ("today", "DATE", "2021-05-17", "2021-05-17"),
        ("3 days ago", "DATE", "2021-05-14", "2021-05-17"),
        ("5 days ago", "DATE", "2021-05-12", "2021-05-17"),
        ("in 2 months", "DATE", "2021-07-17", "2021-05-17"),
        ("in 4 months", "DATE", "2021-09-17", "2021-05-17"),
        ("october 2014", "DATE", "2014-10", "2021-05-17"),
        ("march 2019", "DATE", "2019-03", "2021-05-17"),
        ("2014", "DATE", "2014", "2021-05-17"),
        ("2019", "DATE", "2019", "2021-05-17"),
        ("two years", "DURATION", "P2Y", "2021-05-17"),
        ("3 weeks", "DURATION", "P3W", "2021-05-17"),
        ("every may", "SET", "XXXX-05", "2021-05-17"),
        ("every june", "SET", "XXXX-06", "2021-05-17"),
    ];
    rows.iter()
        .map(|(surface, ty, value, dct)| AnnotatedExpression {
            doc_id: "bench".into(),
            surface: surface.to_string(),
            gold_type: ty.to_string(),
            gold_value: value.to_string(),
            dct: dct.to_string(),
        })
        .collect()
}
