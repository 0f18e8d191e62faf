//! Corpus ingestion (TimeML documents and a simple TSV format) and
//! evaluation of a rule store against gold annotations.

use serde::Serialize;

use crate::codec::{parse_timex_value, serialize_timex_value};
use crate::error::{Result, TemporalError};
use crate::lexicon::Lexicon;
use crate::normalize::{normalize, NormalizeFailure};
use crate::rule::RuleStore;

/// One gold-annotated time expression with its document context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedExpression {
    pub doc_id: String,
    pub surface: String,
    pub gold_type: String,
    pub gold_value: String,
    /// Document creation time, as a TIMEX3 value string.
    pub dct: String,
}

/// Extract the TIMEX3 annotations of one TimeML document. The document
/// creation time is the TIMEX3 marked `functionInDocument="CREATION_TIME"`;
/// every other TIMEX3 becomes one expression.
pub fn ingest_timeml(text: &str, doc_id: &str) -> Result<Vec<AnnotatedExpression>> {
    let mut raw = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find("<TIMEX3") {
        rest = &rest[start + "<TIMEX3".len()..];
        let Some(attr_end) = rest.find('>') else {
            return Err(TemporalError::MalformedCorpus(format!(
                "{doc_id}: unterminated TIMEX3 tag"
            )));
        };
        let attrs = &rest[..attr_end];
        rest = &rest[attr_end + 1..];
        let body = if attrs.trim_end().ends_with('/') {
            String::new()
        } else {
            let Some(close) = rest.find("</TIMEX3>") else {
                return Err(TemporalError::MalformedCorpus(format!(
                    "{doc_id}: TIMEX3 without closing tag"
                )));
            };
            let body = &rest[..close];
            rest = &rest[close + "</TIMEX3>".len()..];
            strip_tags(body)
        };
        raw.push((
            attr_value(attrs, "type").unwrap_or_default(),
            attr_value(attrs, "value").unwrap_or_default(),
            attr_value(attrs, "functionInDocument").unwrap_or_default(),
            body,
        ));
    }
    let dct = raw
        .iter()
        .find(|(_, _, func, _)| func == "CREATION_TIME")
        .map(|(_, value, _, _)| normalize_dct(value))
        .ok_or_else(|| {
            TemporalError::MalformedCorpus(format!("{doc_id}: no CREATION_TIME TIMEX3"))
        })?;
    Ok(raw
        .into_iter()
        .filter(|(_, _, func, _)| func != "CREATION_TIME")
        .map(|(ty, value, _, body)| AnnotatedExpression {
            doc_id: doc_id.to_string(),
            surface: body,
            gold_type: ty,
            gold_value: value,
            dct: dct.clone(),
        })
        .collect())
}

fn attr_value(attrs: &str, name: &str) -> Option<String> {
    let mut rest = attrs;
    while let Some(pos) = rest.find(name) {
        let before_ok = pos == 0
            || !rest[..pos]
                .chars()
                .next_back()
                .is_some_and(|c| c.is_alphanumeric());
        let after = &rest[pos + name.len()..];
        let after_eq = after.trim_start();
        if before_ok {
            if let Some(q) = after_eq.strip_prefix('=') {
                let q = q.trim_start();
                let quote = q.chars().next()?;
                if quote == '"' || quote == '\'' {
                    let inner = &q[1..];
                    let end = inner.find(quote)?;
                    return Some(unescape_xml(&inner[..end]));
                }
            }
        }
        rest = &rest[pos + name.len()..];
    }
    None
}

fn strip_tags(s: &str) -> String {
    let mut out = String::new();
    let mut in_tag = false;
    for c in s.chars() {
        match c {
            '<' => in_tag = true,
            '>' => in_tag = false,
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    unescape_xml(out.split_whitespace().collect::<Vec<_>>().join(" ").as_str())
}

fn unescape_xml(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

/// DCT values sometimes appear in compact form (`20140201`); re-punctuate.
fn normalize_dct(value: &str) -> String {
    let v = value.trim();
    if v.len() == 8 && v.chars().all(|c| c.is_ascii_digit()) {
        format!("{}-{}-{}", &v[..4], &v[4..6], &v[6..8])
    } else {
        v.to_string()
    }
}

/// Parse the TSV corpus format: `surface<TAB>type<TAB>value<TAB>dct`, with
/// blank lines and `#` comments ignored.
pub fn ingest_tsv(text: &str, doc_id: &str) -> Result<Vec<AnnotatedExpression>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(TemporalError::MalformedCorpus(format!(
                "{doc_id}: line {} has {} columns, expected 4",
                lineno + 1,
                cols.len()
            )));
        }
        out.push(AnnotatedExpression {
            doc_id: doc_id.to_string(),
            surface: cols[0].to_string(),
            gold_type: cols[1].to_string(),
            gold_value: cols[2].to_string(),
            dct: cols[3].to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ErrorBreakdown {
    pub unseen_pattern: u32,
    pub bad_rule: u32,
    pub exec_error: u32,
    pub other: u32,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct EvalReport {
    pub total: u32,
    pub skipped: u32,
    pub type_accuracy: f64,
    pub value_accuracy: f64,
    pub errors: ErrorBreakdown,
}

/// Normalize every expression against its document's creation time and score
/// exact type/value agreement. Expressions whose gold value (or DCT) lies
/// outside the supported grammar are skipped, not scored.
pub fn evaluate(store: &RuleStore, test: &[AnnotatedExpression], lexicon: &Lexicon) -> EvalReport {
    let mut report = EvalReport { total: test.len() as u32, ..EvalReport::default() };
    let mut type_correct = 0u32;
    let mut value_correct = 0u32;
    for expr in test {
        let (Ok(gold), Ok(dct)) =
            (parse_timex_value(&expr.gold_value), parse_timex_value(&expr.dct))
        else {
            report.skipped += 1;
            continue;
        };
        let tokens = lexicon.tokenize(&expr.surface);
        match normalize(&tokens, &dct, store, lexicon) {
            Ok(n) => {
                if n.timex_type.name() == expr.gold_type {
                    type_correct += 1;
                }
                if serialize_timex_value(&n.value) == serialize_timex_value(&gold) {
                    value_correct += 1;
                } else {
                    report.errors.bad_rule += 1;
                }
            }
            Err(NormalizeFailure::NoMatch) => report.errors.unseen_pattern += 1,
            Err(NormalizeFailure::ExecError(_)) => report.errors.exec_error += 1,
        }
    }
    let scored = report.total - report.skipped;
    if scored > 0 {
        report.type_accuracy = type_correct as f64 / scored as f64;
        report.value_accuracy = value_correct as f64 / scored as f64;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::learn;

    const DOC: &str = r#"<?xml version="1.0" ?>
<TimeML>
<DCT><TIMEX3 tid="t0" type="DATE" value="2014-02-01" functionInDocument="CREATION_TIME">February 1, 2014</TIMEX3></DCT>
<TEXT>It happened <TIMEX3 tid="t1" type="DATE" value="2014-XX-XX">2014</TIMEX3>,
before <TIMEX3 tid="t2" type="DATE" value="2014-01">last month</TIMEX3>.</TEXT>
</TimeML>"#;

    #[test]
    fn ingests_timeml_documents() {
        let exprs = ingest_timeml(DOC, "doc1").unwrap();
        assert_eq!(exprs.len(), 2);
        assert_eq!(exprs[0].surface, "2014");
        assert_eq!(exprs[0].gold_value, "2014-XX-XX");
        assert_eq!(exprs[0].dct, "2014-02-01");
        assert_eq!(exprs[1].surface, "last month");
        assert_eq!(exprs[1].gold_type, "DATE");
    }

    #[test]
    fn missing_dct_is_an_error() {
        let doc = r#"<TimeML><TIMEX3 type="DATE" value="2014-01">then</TIMEX3></TimeML>"#;
        assert!(matches!(
            ingest_timeml(doc, "d"),
            Err(TemporalError::MalformedCorpus(_))
        ));
    }

    #[test]
    fn compact_dcts_get_repunctuated() {
        let doc = r#"<TIMEX3 type="DATE" value="20140201" functionInDocument="CREATION_TIME">dct</TIMEX3>
<TIMEX3 type="DATE" value="2014-01">last month</TIMEX3>"#;
        let exprs = ingest_timeml(doc, "d").unwrap();
        assert_eq!(exprs[0].dct, "2014-02-01");
    }

    #[test]
    fn ingests_tsv_lines() {
        let text = "# comment\nlast october\tDATE\t2020-10\t2021-05-17\n\n";
        let exprs = ingest_tsv(text, "t").unwrap();
        assert_eq!(exprs.len(), 1);
        assert_eq!(exprs[0].surface, "last october");
        assert!(matches!(
            ingest_tsv("a\tb\tc\n", "t"),
            Err(TemporalError::MalformedCorpus(_))
        ));
    }

    #[test]
    fn perfect_store_scores_one() {
        let lex = Lexicon::default();
        let corpus = ingest_tsv(
            "last year\tDATE\t2020\t2021-05-17\n\
             last month\tDATE\t2021-04\t2021-05-17\n\
             last week\tDATE\t2021-W19\t2021-05-17\n",
            "t",
        )
        .unwrap();
        let store = learn(&corpus, &lex).unwrap();
        let report = evaluate(&store, &corpus, &lex);
        assert_eq!(report.total, 3);
        assert_eq!(report.skipped, 0);
        assert_eq!(report.value_accuracy, 1.0);
        assert_eq!(report.type_accuracy, 1.0);
        assert_eq!(report.errors, ErrorBreakdown::default());
    }

    #[test]
    fn unsupported_gold_values_are_skipped() {
        let lex = Lexicon::default();
        let store = RuleStore::parse("MONTH:$1\tInstant\t(ModifyEnum[$1])\t1\t1\n").unwrap();
        let corpus =
            ingest_tsv("whenever\tDATE\tXXXX-XX\t2021-05-17\noctober\tDATE\t2021-10\t2021-05-17\n", "t")
                .unwrap();
        let report = evaluate(&store, &corpus, &lex);
        assert_eq!(report.skipped, 1);
        assert_eq!(report.value_accuracy, 1.0);
    }
}
