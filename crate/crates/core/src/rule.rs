//! Rule learning: abstract captured operation sequences against surface
//! tokens into pattern rules, aggregate them over a corpus, and rank by
//! frequency.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::capture::{capture_with, CaptureOptions, CaptureTask};
use crate::codec::parse_timex_value;
use crate::corpus::AnnotatedExpression;
use crate::error::{Result, TemporalError};
use crate::lexicon::{num_vals, Binding, Bindings, Lexicon, Pattern, PatternElem, TagType, TagValue, Token};
use crate::op::{parse_sequence, sort_sequence, Operation, OperationSequence, Slot};
use crate::unit::EnumConst;
use crate::value::TemporalValue;

/// The kind of value a rule produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueType {
    Instant,
    Duration,
    ApproxRef,
}

impl ValueType {
    pub fn of(v: &TemporalValue) -> ValueType {
        match v {
            TemporalValue::Instant(_) => ValueType::Instant,
            TemporalValue::Duration(_) => ValueType::Duration,
            TemporalValue::Approx(_) => ValueType::ApproxRef,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueType::Instant => "Instant",
            ValueType::Duration => "Duration",
            ValueType::ApproxRef => "ApproxRef",
        }
    }

    pub fn from_name(s: &str) -> Option<ValueType> {
        Some(match s {
            "Instant" => ValueType::Instant,
            "Duration" => ValueType::Duration,
            "ApproxRef" => ValueType::ApproxRef,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub pattern: Pattern,
    pub value_type: ValueType,
    pub operations: OperationSequence,
    pub support: u32,
    pub pattern_support: u32,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.pattern,
            self.value_type.name(),
            self.operations,
            self.support,
            self.pattern_support
        )
    }
}

/// Substitute pattern-variable bindings into a rule's operation slots.
pub fn resolve(seq: &OperationSequence, bindings: &Bindings) -> Result<OperationSequence> {
    let num = |s: &Slot<i64>| -> Result<Slot<i64>> {
        match s {
            Slot::Val(v) => Ok(Slot::Val(*v)),
            Slot::Var(k) => match bindings.get(k) {
                Some(Binding::Num(v)) => Ok(Slot::Val(*v)),
                _ => Err(TemporalError::UnresolvedVariable),
            },
        }
    };
    let unit = |s: &Slot<crate::unit::TimeUnit>| -> Result<Slot<crate::unit::TimeUnit>> {
        match s {
            Slot::Val(u) => Ok(Slot::Val(*u)),
            Slot::Var(k) => match bindings.get(k) {
                Some(Binding::Unit(u)) => Ok(Slot::Val(*u)),
                _ => Err(TemporalError::UnresolvedVariable),
            },
        }
    };
    let field = |s: &Slot<crate::unit::TimeField>| -> Result<Slot<crate::unit::TimeField>> {
        match s {
            Slot::Val(f) => Ok(Slot::Val(*f)),
            Slot::Var(k) => match bindings.get(k) {
                Some(Binding::Unit(u)) => Ok(Slot::Val(u.default_field())),
                _ => Err(TemporalError::UnresolvedVariable),
            },
        }
    };
    let en = |s: &Slot<EnumConst>| -> Result<Slot<EnumConst>> {
        match s {
            Slot::Val(e) => Ok(Slot::Val(*e)),
            Slot::Var(k) => match bindings.get(k) {
                Some(Binding::Enum(e)) => Ok(Slot::Val(*e)),
                _ => Err(TemporalError::UnresolvedVariable),
            },
        }
    };
    let mut out = Vec::with_capacity(seq.len());
    for op in seq.ops() {
        out.push(match op {
            Operation::ModifyVal { v, f } => Operation::ModifyVal { v: num(v)?, f: field(f)? },
            Operation::ModifyEnum { e } => Operation::ModifyEnum { e: en(e)? },
            Operation::CountEnum { v, e, scope } => {
                Operation::CountEnum { v: num(v)?, e: en(e)?, scope: unit(scope)? }
            }
            Operation::Equal { f } => Operation::Equal { f: field(f)? },
            Operation::ToBegin { f } => Operation::ToBegin { f: field(f)? },
            Operation::ToEnd { f } => Operation::ToEnd { f: field(f)? },
            Operation::Forward { v, u } => Operation::Forward { v: num(v)?, u: unit(u)? },
            Operation::Backward { v, u } => Operation::Backward { v: num(v)?, u: unit(u)? },
            Operation::ToNext { u } => Operation::ToNext { u: unit(u)? },
            Operation::ToLast { u } => Operation::ToLast { u: unit(u)? },
            Operation::MakeSet { u } => Operation::MakeSet { u: unit(u)? },
            Operation::Add { v, u } => Operation::Add { v: num(v)?, u: unit(u)? },
            Operation::ApproxRef { r } => {
                if r.var().is_some() {
                    return Err(TemporalError::UnresolvedVariable);
                }
                *op
            }
        });
    }
    Ok(sort_sequence(out))
}

/// Concrete parameters of an operation that could surface as tokens, in slot
/// order. `None` marks slots that never abstract (e.g. non-default fields).
fn op_params(op: &Operation) -> Vec<Option<Binding>> {
    let num = |s: &Slot<i64>| s.val().ok().map(Binding::Num);
    let unit = |s: &Slot<crate::unit::TimeUnit>| s.val().ok().map(Binding::Unit);
    let field = |s: &Slot<crate::unit::TimeField>| {
        s.val().ok().and_then(|f| {
            if f == f.unit.default_field() {
                Some(Binding::Unit(f.unit))
            } else {
                None
            }
        })
    };
    let en = |s: &Slot<EnumConst>| s.val().ok().map(Binding::Enum);
    match op {
        Operation::ModifyVal { v, f } => vec![num(v), field(f)],
        Operation::ModifyEnum { e } => vec![en(e)],
        Operation::CountEnum { v, e, scope } => vec![num(v), en(e), unit(scope)],
        Operation::Equal { f } | Operation::ToBegin { f } | Operation::ToEnd { f } => {
            vec![field(f)]
        }
        Operation::Forward { v, u } | Operation::Backward { v, u } | Operation::Add { v, u } => {
            vec![num(v), unit(u)]
        }
        Operation::ToNext { u } | Operation::ToLast { u } | Operation::MakeSet { u } => {
            vec![unit(u)]
        }
        Operation::ApproxRef { .. } => vec![None],
    }
}

/// Rebuild `op` replacing the slots named in `vars` (by slot position) with
/// variables.
fn op_with_vars(op: &Operation, vars: &[Option<u8>]) -> Operation {
    fn slot<T: Copy>(s: &Slot<T>, v: Option<u8>) -> Slot<T> {
        match v {
            Some(k) => Slot::Var(k),
            None => *s,
        }
    }
    match op {
        Operation::ModifyVal { v, f } => {
            Operation::ModifyVal { v: slot(v, vars[0]), f: slot(f, vars[1]) }
        }
        Operation::ModifyEnum { e } => Operation::ModifyEnum { e: slot(e, vars[0]) },
        Operation::CountEnum { v, e, scope } => Operation::CountEnum {
            v: slot(v, vars[0]),
            e: slot(e, vars[1]),
            scope: slot(scope, vars[2]),
        },
        Operation::Equal { f } => Operation::Equal { f: slot(f, vars[0]) },
        Operation::ToBegin { f } => Operation::ToBegin { f: slot(f, vars[0]) },
        Operation::ToEnd { f } => Operation::ToEnd { f: slot(f, vars[0]) },
        Operation::Forward { v, u } => {
            Operation::Forward { v: slot(v, vars[0]), u: slot(u, vars[1]) }
        }
        Operation::Backward { v, u } => {
            Operation::Backward { v: slot(v, vars[0]), u: slot(u, vars[1]) }
        }
        Operation::ToNext { u } => Operation::ToNext { u: slot(u, vars[0]) },
        Operation::ToLast { u } => Operation::ToLast { u: slot(u, vars[0]) },
        Operation::MakeSet { u } => Operation::MakeSet { u: slot(u, vars[0]) },
        Operation::Add { v, u } => Operation::Add { v: slot(v, vars[0]), u: slot(u, vars[1]) },
        Operation::ApproxRef { r } => Operation::ApproxRef { r: *r },
    }
}

/// Token indices whose surface denotes `b`.
fn surfacing_tokens(tokens: &[Token], b: Binding) -> Vec<usize> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| match b {
            Binding::Num(v) => t.number() == Some(v),
            Binding::Unit(u) => t.tag(TagType::TimeUnit) == Some(TagValue::Unit(u)),
            Binding::Enum(e) => {
                let ty = match e {
                    EnumConst::Month(_) => TagType::Month,
                    EnumConst::Weekday(_) => TagType::Week,
                    EnumConst::Season(_) => TagType::Season,
                    EnumConst::DayPart(_) => TagType::DayTime,
                };
                t.tag(ty) == Some(TagValue::Enum(e))
            }
        })
        .map(|(i, _)| i)
        .collect()
}

fn slot_type_of(b: Binding) -> Option<TagType> {
    match b {
        Binding::Num(_) => None,
        Binding::Unit(_) => Some(TagType::TimeUnit),
        Binding::Enum(e) => Some(match e {
            EnumConst::Month(_) => TagType::Month,
            EnumConst::Weekday(_) => TagType::Week,
            EnumConst::Season(_) => TagType::Season,
            EnumConst::DayPart(_) => TagType::DayTime,
        }),
    }
}

const MAX_ASSIGNMENTS: usize = 64;

/// Abstract one sound operation sequence against the tokens: every parameter
/// value that surfaces becomes a typed slot bound to a variable; one
/// candidate per consistent token assignment.
pub fn abstract_candidates(
    tokens: &[Token],
    sequences: &[OperationSequence],
    value_type: ValueType,
) -> Vec<(Pattern, OperationSequence)> {
    let mut out: BTreeSet<(Pattern, OperationSequence)> = BTreeSet::new();
    for seq in sequences {
        // The empty sequence (base equals target exactly) carries no signal a
        // rule could reapply; the Equal form of the same fact does.
        if seq.is_empty() {
            continue;
        }
        // (op index, slot index, value, candidate token indices)
        let mut params: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for (oi, op) in seq.ops().iter().enumerate() {
            for (si, p) in op_params(op).into_iter().enumerate() {
                if let Some(b) = p {
                    let cands = surfacing_tokens(tokens, b);
                    if !cands.is_empty() {
                        params.push((oi, si, cands));
                    }
                }
            }
        }
        let mut assignments: Vec<Vec<usize>> = vec![Vec::new()];
        for (_, _, cands) in &params {
            let mut next = Vec::new();
            for a in &assignments {
                for &c in cands {
                    let mut a = a.clone();
                    a.push(c);
                    next.push(a);
                    if next.len() > MAX_ASSIGNMENTS {
                        break;
                    }
                }
            }
            assignments = next;
            assignments.truncate(MAX_ASSIGNMENTS);
        }
        for assign in &assignments {
            // Chosen tokens in surface order decide variable numbers.
            let mut chosen: Vec<usize> = assign.clone();
            chosen.sort_unstable();
            chosen.dedup();
            let var_of = |tok: usize| chosen.iter().position(|&t| t == tok).map(|i| i as u8 + 1);

            let mut slot_ty: BTreeMap<usize, Option<TagType>> = BTreeMap::new();
            let mut ops: Vec<Operation> = Vec::new();
            for (oi, op) in seq.ops().iter().enumerate() {
                let ps = op_params(op);
                let mut vars: Vec<Option<u8>> = vec![None; ps.len()];
                for (pi, (poi, psi, _)) in params.iter().enumerate() {
                    if *poi == oi {
                        let tok = assign[pi];
                        vars[*psi] = var_of(tok);
                        if let Some(b) = ps[*psi] {
                            slot_ty.insert(tok, slot_type_of(b));
                        }
                    }
                }
                ops.push(op_with_vars(op, &vars));
            }
            let elements = tokens
                .iter()
                .enumerate()
                .map(|(i, t)| match var_of(i) {
                    Some(var) => PatternElem::Slot { ty: slot_ty[&i], var },
                    None => PatternElem::Literal(t.surface.clone()),
                })
                .collect();
            out.insert((Pattern { elements }, OperationSequence(ops)));
        }
    }
    let _ = value_type;
    out.into_iter().collect()
}

/// The learned rule collection, ordered by descending frequency.
#[derive(Debug, Clone, Default)]
pub struct RuleStore {
    rules: Vec<Rule>,
}

impl RuleStore {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rules matching the full token slice, in store order.
    pub fn matching<'a>(
        &'a self,
        tokens: &'a [Token],
    ) -> impl Iterator<Item = (&'a Rule, Bindings)> + 'a {
        self.rules
            .iter()
            .filter_map(move |r| r.pattern.matches(tokens).map(|b| (r, b)))
    }

    /// Line-oriented persistence; bit-exact across runs.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rules {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<RuleStore> {
        let mut rules = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || {
                TemporalError::UnsupportedValueForm(format!(
                    "rule file line {}: {line}",
                    lineno + 1
                ))
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 {
                return Err(bad());
            }
            rules.push(Rule {
                pattern: Pattern::parse(cols[0])?,
                value_type: ValueType::from_name(cols[1]).ok_or_else(bad)?,
                operations: parse_sequence(cols[2])?,
                support: cols[3].parse().map_err(|_| bad())?,
                pattern_support: cols[4].parse().map_err(|_| bad())?,
            });
        }
        Ok(RuleStore { rules })
    }
}

/// Options for corpus learning.
#[derive(Debug, Clone, Default)]
pub struct LearnOptions {
    pub capture: CaptureOptions,
}

pub fn learn(corpus: &[AnnotatedExpression], lexicon: &Lexicon) -> Result<RuleStore> {
    learn_with(corpus, lexicon, &LearnOptions::default())
}

pub fn learn_with(
    corpus: &[AnnotatedExpression],
    lexicon: &Lexicon,
    opts: &LearnOptions,
) -> Result<RuleStore> {
    if corpus.is_empty() {
        return Err(TemporalError::EmptyCorpus);
    }
    let token_lists: Vec<Vec<Token>> =
        corpus.iter().map(|e| lexicon.tokenize(&e.surface)).collect();

    // Aggregate identical (pattern, type, operations) rules over expressions.
    let mut counts: BTreeMap<(Pattern, ValueType, OperationSequence), u32> = BTreeMap::new();
    for (expr, tokens) in corpus.iter().zip(&token_lists) {
        let (Ok(target), Ok(base)) =
            (parse_timex_value(&expr.gold_value), parse_timex_value(&expr.dct))
        else {
            continue;
        };
        let task = CaptureTask { base, target, numeric_pool: num_vals(tokens) };
        let Ok(res) = capture_with(&task, &opts.capture) else { continue };
        let seqs: Vec<OperationSequence> =
            res.sequences.into_iter().map(|(s, _)| s).collect();
        let vt = ValueType::of(&task.target);
        for (pattern, ops) in abstract_candidates(tokens, &seqs, vt) {
            *counts.entry((pattern, vt, ops)).or_insert(0) += 1;
        }
    }
    if counts.is_empty() {
        return Err(TemporalError::EmptyCorpus);
    }

    // Pattern support: how many training expressions each pattern matches.
    let mut pattern_support: BTreeMap<Pattern, u32> = BTreeMap::new();
    for (pattern, _, _) in counts.keys() {
        if pattern_support.contains_key(pattern) {
            continue;
        }
        let n = token_lists.iter().filter(|t| pattern.matches(t).is_some()).count() as u32;
        pattern_support.insert(pattern.clone(), n);
    }

    // One rule per pattern: maximal support, then shorter operations, then
    // lexicographic operation text.
    let mut best: BTreeMap<String, Rule> = BTreeMap::new();
    for ((pattern, vt, ops), support) in counts {
        let rule = Rule {
            pattern_support: pattern_support[&pattern],
            pattern,
            value_type: vt,
            operations: ops,
            support,
        };
        let key = rule.pattern.to_string();
        match best.get(&key) {
            Some(cur) if !beats(&rule, cur) => {}
            _ => {
                best.insert(key, rule);
            }
        }
    }

    let mut rules: Vec<Rule> = best.into_values().collect();
    rules.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then(b.pattern_support.cmp(&a.pattern_support))
            .then(a.pattern.to_string().cmp(&b.pattern.to_string()))
    });
    Ok(RuleStore { rules })
}

fn beats(challenger: &Rule, incumbent: &Rule) -> bool {
    (
        challenger.support,
        std::cmp::Reverse(challenger.operations.len()),
        std::cmp::Reverse(challenger.operations.to_string()),
    ) > (
        incumbent.support,
        std::cmp::Reverse(incumbent.operations.len()),
        std::cmp::Reverse(incumbent.operations.to_string()),
    )
}
