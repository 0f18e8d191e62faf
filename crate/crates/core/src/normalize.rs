//! Applying learned rules to new expressions: direct full-pattern match
//! first, then minimum-cover segmentation over rule spans and stop words,
//! then merging the segment operations into one sequence.

use std::cmp::Reverse;

use crate::error::TemporalError;
use crate::lexicon::{Bindings, Lexicon, Token};
use crate::op::{execute, sort_sequence, Operation, OperationSequence};
use crate::rule::{resolve, Rule, RuleStore};
use crate::unit::TimeUnit;
use crate::value::TemporalValue;

/// TIMEX3 type of a normalized value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimexType {
    Date,
    Time,
    Duration,
    Set,
}

impl TimexType {
    pub fn of(v: &TemporalValue) -> TimexType {
        match v {
            TemporalValue::Duration(_) => TimexType::Duration,
            TemporalValue::Approx(_) => TimexType::Date,
            TemporalValue::Instant(i) => {
                if i.has_generic() {
                    TimexType::Set
                } else if i.granularity().rank() > TimeUnit::Day.rank() {
                    TimexType::Time
                } else {
                    TimexType::Date
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TimexType::Date => "DATE",
            TimexType::Time => "TIME",
            TimexType::Duration => "DURATION",
            TimexType::Set => "SET",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    Direct,
    Segmented,
}

/// A successful normalization.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub timex_type: TimexType,
    pub value: TemporalValue,
    pub rules_used: Vec<Rule>,
    pub via: Via,
}

/// Why a normalization produced nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizeFailure {
    /// No rule matches and no segmentation cover exists.
    NoMatch,
    /// Matches or covers existed but every execution failed.
    ExecError(TemporalError),
}

impl std::fmt::Display for NormalizeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormalizeFailure::NoMatch => f.write_str("no matching rule or cover"),
            NormalizeFailure::ExecError(e) => write!(f, "execution failed: {e}"),
        }
    }
}

/// One matched span inside a segmentation cover.
#[derive(Debug, Clone)]
struct Segment {
    rule_idx: usize,
    start: usize,
    bindings: Bindings,
}

type Cover = Vec<Segment>;

/// Best covers kept per prefix; a handful suffices to survive downstream
/// execution conflicts without re-running the DP.
const KEEP_COVERS: usize = 4;

pub fn normalize(
    tokens: &[Token],
    dct: &TemporalValue,
    store: &RuleStore,
    lexicon: &Lexicon,
) -> Result<Normalization, NormalizeFailure> {
    // Direct match: highest-ranked rule matching the whole expression; on an
    // execution error fall through to the next-ranked match.
    let mut exec_err: Option<TemporalError> = None;
    for (rule, bindings) in store.matching(tokens) {
        match resolve(&rule.operations, &bindings).and_then(|ops| execute(&ops, dct)) {
            Ok(value) => {
                return Ok(Normalization {
                    timex_type: TimexType::of(&value),
                    value,
                    rules_used: vec![rule.clone()],
                    via: Via::Direct,
                })
            }
            Err(e) => exec_err = Some(e),
        }
    }

    // Segmentation over rule spans and skippable stop words.
    for cover in segment_covers(tokens, store, lexicon) {
        let mut ops: Vec<Operation> = Vec::new();
        let mut rules_used = Vec::new();
        let mut resolved_ok = true;
        for seg in &cover {
            let rule = &store.rules()[seg.rule_idx];
            match resolve(&rule.operations, &seg.bindings) {
                Ok(r) => {
                    for op in r.ops() {
                        if !ops.contains(op) {
                            ops.push(*op);
                        }
                    }
                    rules_used.push(rule.clone());
                }
                Err(e) => {
                    exec_err = Some(e);
                    resolved_ok = false;
                    break;
                }
            }
        }
        if !resolved_ok {
            continue;
        }
        let seq = sort_sequence(ops);
        match execute(&seq, dct) {
            Ok(value) => {
                return Ok(Normalization {
                    timex_type: TimexType::of(&value),
                    value,
                    rules_used,
                    via: Via::Segmented,
                })
            }
            Err(e @ TemporalError::KindMismatch(_)) => {
                exec_err = Some(TemporalError::KindConflict(e.to_string()));
            }
            Err(e) => exec_err = Some(e),
        }
    }

    match exec_err {
        Some(e) => Err(NormalizeFailure::ExecError(e)),
        None => Err(NormalizeFailure::NoMatch),
    }
}

/// Merge resolved segment operations: union with duplicates collapsed, in
/// canonical order.
pub fn merge(op_sets: &[OperationSequence]) -> OperationSequence {
    let mut ops: Vec<Operation> = Vec::new();
    for seq in op_sets {
        for op in seq.ops() {
            if !ops.contains(op) {
                ops.push(*op);
            }
        }
    }
    sort_sequence(ops)
}

/// The best segmentation cover of the full token list, if any (first element
/// of the ranked cover list).
pub fn segment(
    tokens: &[Token],
    store: &RuleStore,
    lexicon: &Lexicon,
) -> Option<Vec<(usize, Bindings)>> {
    segment_covers(tokens, store, lexicon)
        .into_iter()
        .next()
        .map(|c| c.into_iter().map(|s| (s.rule_idx, s.bindings)).collect())
}

/// Dynamic program over prefixes: `f[i]` holds the best covers of the first
/// `i` tokens. A stop word may be skipped whenever the prefix before it is
/// coverable; rule spans must match exactly.
fn segment_covers(tokens: &[Token], store: &RuleStore, lexicon: &Lexicon) -> Vec<Cover> {
    let n = tokens.len();
    if n == 0 {
        return Vec::new();
    }
    let mut f: Vec<Vec<Cover>> = vec![Vec::new(); n + 1];
    f[0].push(Vec::new());
    for i in 1..=n {
        let mut candidates: Vec<Cover> = Vec::new();
        if lexicon.is_stopword(&tokens[i - 1]) && !f[i - 1].is_empty() {
            candidates.extend(f[i - 1].iter().cloned());
        }
        for j in 0..i {
            if f[j].is_empty() {
                continue;
            }
            for (idx, rule) in store.rules().iter().enumerate() {
                let Some(bindings) = rule.pattern.matches(&tokens[j..i]) else { continue };
                for cover in &f[j] {
                    let mut c = cover.clone();
                    c.push(Segment { rule_idx: idx, start: j, bindings: bindings.clone() });
                    candidates.push(c);
                }
            }
        }
        candidates.sort_by_cached_key(|c| cover_key(c, store));
        candidates.dedup_by_key(|c| {
            c.iter().map(|s| (s.rule_idx, s.start)).collect::<Vec<_>>()
        });
        candidates.truncate(KEEP_COVERS);
        f[i] = candidates;
    }
    f.pop().unwrap()
}

/// Cover order: fewest segments, then most-frequent rules (descending-sorted
/// support vector, larger first), then earliest segment starts.
fn cover_key(cover: &Cover, store: &RuleStore) -> (usize, Vec<Reverse<u32>>, Vec<usize>) {
    let mut supports: Vec<Reverse<u32>> =
        cover.iter().map(|s| Reverse(store.rules()[s.rule_idx].support)).collect();
    supports.sort_unstable();
    let starts: Vec<usize> = cover.iter().map(|s| s.start).collect();
    (cover.len(), supports, starts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{parse_timex_value, serialize_timex_value};
    use crate::lexicon::Lexicon;
    use crate::rule::RuleStore;

    fn store(lines: &[&str]) -> RuleStore {
        RuleStore::parse(&lines.join("\n")).unwrap()
    }

    fn norm(
        expr: &str,
        dct: &str,
        store: &RuleStore,
    ) -> Result<(String, String, Via), NormalizeFailure> {
        let lex = Lexicon::default();
        let tokens = lex.tokenize(expr);
        let dct = parse_timex_value(dct).unwrap();
        normalize(&tokens, &dct, store, &lex).map(|n| {
            (n.timex_type.name().to_string(), serialize_timex_value(&n.value), n.via)
        })
    }

    #[test]
    fn direct_match_applies_the_top_rule() {
        let s = store(&["last MONTH:$1\tInstant\t(ToLast[year],ModifyEnum[$1])\t5\t6"]);
        let (ty, v, via) = norm("last october", "2021-05-17", &s).unwrap();
        assert_eq!((ty.as_str(), v.as_str()), ("DATE", "2020-10"));
        assert_eq!(via, Via::Direct);
    }

    #[test]
    fn this_month_resolves_a_unit_slot() {
        let s = store(&["this TIME_UNIT:$1\tInstant\t(Equal[$1])\t5\t5"]);
        let (ty, v, _) = norm("this month", "2021-05-17", &s).unwrap();
        assert_eq!((ty.as_str(), v.as_str()), ("DATE", "2021-05"));
    }

    #[test]
    fn segmentation_covers_unmatched_expressions() {
        let s = store(&[
            "MONTH:$1\tInstant\t(ModifyEnum[$1])\t9\t9",
            "NUM:$1\tInstant\t(ModifyVal[$1,year])\t4\t4",
        ]);
        let (ty, v, via) = norm("in october 2014", "2021-05-17", &s).unwrap();
        assert_eq!((ty.as_str(), v.as_str()), ("DATE", "2014-10"));
        assert_eq!(via, Via::Segmented);
    }

    #[test]
    fn trailing_stop_words_are_absorbed() {
        let s = store(&["MONTH:$1\tInstant\t(ModifyEnum[$1])\t9\t9"]);
        let (_, v, via) = norm("october -", "2021-05-17", &s).unwrap();
        assert_eq!(v, "2021-10");
        assert_eq!(via, Via::Segmented);
    }

    #[test]
    fn durations_merge_additively() {
        let s = store(&[
            "NUM:$1 TIME_UNIT:$2\tDuration\t(Add[$1,$2])\t3\t3",
        ]);
        let (ty, v, _) = norm("1 year and 2 months", "2021-05-17", &s).unwrap();
        assert_eq!((ty.as_str(), v.as_str()), ("DURATION", "P1Y2M"));
    }

    #[test]
    fn unknown_expressions_fail_without_panicking() {
        let s = store(&["MONTH:$1\tInstant\t(ModifyEnum[$1])\t9\t9"]);
        let err = norm("zzz unknown", "2021-05-17", &s).unwrap_err();
        assert_eq!(err, NormalizeFailure::NoMatch);
    }

    #[test]
    fn failing_rule_falls_to_next_ranked_match() {
        // The top rule produces an invalid date for this binding; the second
        // one succeeds.
        let s = store(&[
            "NUM:$1\tInstant\t(ModifyVal[$1,dayOfMonth])\t9\t9",
            "NUM:$1\tInstant\t(ModifyVal[$1,year])\t4\t4",
        ]);
        let (_, v, via) = norm("2014", "2021-02-17", &s).unwrap();
        assert_eq!(v, "2014-02-17");
        assert_eq!(via, Via::Direct);
    }

    #[test]
    fn time_values_report_time_type() {
        let s = store(&["DAY_TIME:$1\tInstant\t(ModifyEnum[$1])\t2\t2"]);
        let (ty, v, _) = norm("morning", "2021-05-17", &s).unwrap();
        assert_eq!((ty.as_str(), v.as_str()), ("TIME", "2021-05-17TMO"));
    }

    #[test]
    fn set_values_report_set_type() {
        let s = store(&["every MONTH:$1\tInstant\t(ModifyEnum[$1],MakeSet[year])\t2\t2"]);
        let (ty, v, _) = norm("every may", "2021-05-17", &s).unwrap();
        assert_eq!((ty.as_str(), v.as_str()), ("SET", "XXXX-05"));
    }
}
