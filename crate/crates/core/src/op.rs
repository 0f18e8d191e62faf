//! The ten temporal operations, their canonical ordering, and the executor
//! that applies an ordered sequence to a base value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TemporalError};
use crate::unit::{Bound, EnumConst, TimeField, TimeUnit};
use crate::value::{
    season_first_month, weekday_from_num, DurationValue, FieldValue, Instant, TemporalValue,
};

/// An operation parameter that is either a concrete value or a rule variable
/// slot (`$k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot<T> {
    Val(T),
    Var(u8),
}

impl<T: Copy> Slot<T> {
    pub fn val(&self) -> Result<T> {
        match self {
            Slot::Val(v) => Ok(*v),
            Slot::Var(_) => Err(TemporalError::UnresolvedVariable),
        }
    }

    pub fn var(&self) -> Option<u8> {
        match self {
            Slot::Val(_) => None,
            Slot::Var(k) => Some(*k),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Slot<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Val(v) => v.fmt(f),
            Slot::Var(k) => write!(f, "${k}"),
        }
    }
}

/// One of the ten temporal operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Operation {
    ModifyVal { v: Slot<i64>, f: Slot<TimeField> },
    ModifyEnum { e: Slot<EnumConst> },
    CountEnum { v: Slot<i64>, e: Slot<EnumConst>, scope: Slot<TimeUnit> },
    Equal { f: Slot<TimeField> },
    ToBegin { f: Slot<TimeField> },
    ToEnd { f: Slot<TimeField> },
    Forward { v: Slot<i64>, u: Slot<TimeUnit> },
    Backward { v: Slot<i64>, u: Slot<TimeUnit> },
    ToNext { u: Slot<TimeUnit> },
    ToLast { u: Slot<TimeUnit> },
    MakeSet { u: Slot<TimeUnit> },
    Add { v: Slot<i64>, u: Slot<TimeUnit> },
    ApproxRef { r: Slot<crate::value::ApproxKind> },
}

impl Operation {
    /// The unit whose field the operation acts on; drives execution order.
    pub fn unit(&self) -> Option<TimeUnit> {
        let unit = match self {
            Operation::ModifyVal { f, .. }
            | Operation::Equal { f }
            | Operation::ToBegin { f }
            | Operation::ToEnd { f } => f.val().ok()?.unit,
            Operation::ModifyEnum { e } => e.val().ok()?.unit(),
            // CountEnum selects a day (the v-th weekday) within its scope.
            Operation::CountEnum { .. } => TimeUnit::Day,
            Operation::Forward { u, .. }
            | Operation::Backward { u, .. }
            | Operation::ToNext { u }
            | Operation::ToLast { u }
            | Operation::MakeSet { u }
            | Operation::Add { v: _, u } => u.val().ok()?,
            Operation::ApproxRef { .. } => TimeUnit::Century,
        };
        Some(unit)
    }

    /// Intra-field tie-break rank: base-independent modifications first, then
    /// shifts, then counting and truncation, then set marking.
    fn class_rank(&self) -> u8 {
        match self {
            Operation::ModifyVal { .. } => 0,
            Operation::ModifyEnum { .. } => 1,
            Operation::ToBegin { .. } => 2,
            Operation::ToEnd { .. } => 3,
            Operation::ToNext { .. } => 4,
            Operation::ToLast { .. } => 5,
            Operation::Forward { .. } => 6,
            Operation::Backward { .. } => 7,
            Operation::CountEnum { .. } => 8,
            Operation::Equal { .. } => 9,
            Operation::MakeSet { .. } => 10,
            Operation::Add { .. } => 11,
            Operation::ApproxRef { .. } => 12,
        }
    }

    /// Deterministic total sort key: coarser units first, then operation
    /// class, then parameters.
    pub fn sort_key(&self) -> (u8, u8, String) {
        let mut unit_rank = self.unit().map(|u| u.rank()).unwrap_or(0);
        // Equal truncates whatever the other operations produced and MakeSet
        // marks the finished instant, so both sort after every field-level
        // operation regardless of their unit.
        if matches!(self, Operation::Equal { .. }) {
            unit_rank += 50;
        }
        if matches!(self, Operation::MakeSet { .. }) {
            unit_rank += 100;
        }
        (unit_rank, self.class_rank(), self.to_string())
    }

    pub fn has_variables(&self) -> bool {
        match self {
            Operation::ModifyVal { v, f } => v.var().is_some() || f.var().is_some(),
            Operation::ModifyEnum { e } => e.var().is_some(),
            Operation::CountEnum { v, e, scope } => {
                v.var().is_some() || e.var().is_some() || scope.var().is_some()
            }
            Operation::Equal { f } | Operation::ToBegin { f } | Operation::ToEnd { f } => {
                f.var().is_some()
            }
            Operation::Forward { v, u } | Operation::Backward { v, u } | Operation::Add { v, u } => {
                v.var().is_some() || u.var().is_some()
            }
            Operation::ToNext { u } | Operation::ToLast { u } | Operation::MakeSet { u } => {
                u.var().is_some()
            }
            Operation::ApproxRef { r } => r.var().is_some(),
        }
    }

    pub fn variables(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut push = |v: Option<u8>| {
            if let Some(k) = v {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        };
        match self {
            Operation::ModifyVal { v, f } => {
                push(v.var());
                push(f.var());
            }
            Operation::ModifyEnum { e } => push(e.var()),
            Operation::CountEnum { v, e, scope } => {
                push(v.var());
                push(e.var());
                push(scope.var());
            }
            Operation::Equal { f } | Operation::ToBegin { f } | Operation::ToEnd { f } => {
                push(f.var())
            }
            Operation::Forward { v, u } | Operation::Backward { v, u } | Operation::Add { v, u } => {
                push(v.var());
                push(u.var());
            }
            Operation::ToNext { u } | Operation::ToLast { u } | Operation::MakeSet { u } => {
                push(u.var())
            }
            Operation::ApproxRef { r } => push(r.var()),
        }
        out
    }

    /// Numeric parameters subject to the capture pool discipline. Day-of-week
    /// values are enum-coded (they surface as weekday tokens, not numbers).
    pub fn numeric_params(&self) -> Vec<i64> {
        match self {
            Operation::ModifyVal { v, f } => {
                if let (Ok(v), Ok(f)) = (v.val(), f.val()) {
                    if f == (TimeField { unit: TimeUnit::Day, bound: Bound::Unit(TimeUnit::Week) }) {
                        vec![]
                    } else {
                        vec![v]
                    }
                } else {
                    vec![]
                }
            }
            Operation::CountEnum { v, .. }
            | Operation::Forward { v, .. }
            | Operation::Backward { v, .. }
            | Operation::Add { v, .. } => v.val().map(|v| vec![v]).unwrap_or_default(),
            _ => vec![],
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::ModifyVal { v, f: fld } => write!(f, "ModifyVal[{v},{fld}]"),
            Operation::ModifyEnum { e } => write!(f, "ModifyEnum[{e}]"),
            Operation::CountEnum { v, e, scope } => write!(f, "CountEnum[{v},{e},{scope}]"),
            Operation::Equal { f: fld } => write!(f, "Equal[{fld}]"),
            Operation::ToBegin { f: fld } => write!(f, "ToBegin[{fld}]"),
            Operation::ToEnd { f: fld } => write!(f, "ToEnd[{fld}]"),
            Operation::Forward { v, u } => write!(f, "Forward[{v},{u}]"),
            Operation::Backward { v, u } => write!(f, "Backward[{v},{u}]"),
            Operation::ToNext { u } => write!(f, "ToNext[{u}]"),
            Operation::ToLast { u } => write!(f, "ToLast[{u}]"),
            Operation::MakeSet { u } => write!(f, "MakeSet[{u}]"),
            Operation::Add { v, u } => write!(f, "Add[{v},{u}]"),
            Operation::ApproxRef { r } => match r {
                Slot::Val(r) => write!(f, "ApproxRef[{}]", r.name()),
                Slot::Var(k) => write!(f, "ApproxRef[${k}]"),
            },
        }
    }
}

/// An ordered operation sequence. Construction through [`sort_sequence`]
/// guarantees the canonical execution order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct OperationSequence(pub Vec<Operation>);

impl OperationSequence {
    pub fn ops(&self) -> &[Operation] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn has_variables(&self) -> bool {
        self.0.iter().any(|op| op.has_variables())
    }

    pub fn variables(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for op in &self.0 {
            for k in op.variables() {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        out
    }

    pub fn numeric_params(&self) -> Vec<i64> {
        self.0.iter().flat_map(|op| op.numeric_params()).collect()
    }
}

impl fmt::Display for OperationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, op) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            op.fmt(f)?;
        }
        write!(f, ")")
    }
}

/// Arrange operations in canonical execution order: coarser fields first,
/// base-independent operations before base-dependent ones on the same field,
/// then a fixed intra-class order.
pub fn sort_sequence(ops: impl IntoIterator<Item = Operation>) -> OperationSequence {
    let mut v: Vec<Operation> = ops.into_iter().collect();
    v.sort_by_cached_key(|op| op.sort_key());
    OperationSequence(v)
}

/// Execute an operation sequence against a base value.
pub fn execute(seq: &OperationSequence, base: &TemporalValue) -> Result<TemporalValue> {
    if seq.has_variables() {
        return Err(TemporalError::UnresolvedVariable);
    }
    let has_add = seq.0.iter().any(|op| matches!(op, Operation::Add { .. }));
    let has_ref = seq.0.iter().any(|op| matches!(op, Operation::ApproxRef { .. }));
    if has_ref {
        if seq.len() != 1 {
            return Err(TemporalError::KindMismatch(
                "ApproxRef cannot be combined with other operations".into(),
            ));
        }
        if let Operation::ApproxRef { r } = seq.0[0] {
            return Ok(TemporalValue::Approx(r.val()?));
        }
    }
    if has_add {
        // Durations accumulate: an instant base contributes nothing, but an
        // existing duration is extended.
        let mut dur = match base {
            TemporalValue::Duration(d) => d.clone(),
            _ => DurationValue::new(),
        };
        for op in &seq.0 {
            let Operation::Add { v, u } = op else {
                return Err(TemporalError::KindMismatch(
                    "duration sequences consist solely of Add operations".into(),
                ));
            };
            let v = v.val()?;
            if v < 0 {
                return Err(TemporalError::FieldOverflow("negative duration count".into()));
            }
            dur.add(u.val()?, v as u32)?;
        }
        if dur.is_empty() {
            return Err(TemporalError::EmptySequenceOnDuration);
        }
        return Ok(TemporalValue::Duration(dur));
    }
    let mut cur = base.as_instant()?.clone();
    for op in &seq.0 {
        cur = apply_instant_op(op, &cur)?;
    }
    Ok(TemporalValue::Instant(cur))
}

fn apply_instant_op(op: &Operation, cur: &Instant) -> Result<Instant> {
    match op {
        Operation::ModifyVal { v, f } => {
            let f = f.val()?;
            cur.set_field(f, v.val()? as i32)
        }
        Operation::ModifyEnum { e } => apply_modify_enum(e.val()?, cur),
        Operation::CountEnum { v, e, scope } => {
            apply_count_enum(v.val()?, e.val()?, scope.val()?, cur)
        }
        Operation::Equal { f } => cur.reexpress(f.val()?.unit),
        Operation::ToBegin { f } => apply_to_boundary(f.val()?, cur, true),
        Operation::ToEnd { f } => apply_to_boundary(f.val()?, cur, false),
        Operation::Forward { v, u } => cur.shift(u.val()?, v.val()?),
        Operation::Backward { v, u } => cur.shift(u.val()?, -v.val()?),
        Operation::ToNext { u } => cur.reexpress(u.val()?)?.shift(u.val()?, 1),
        Operation::ToLast { u } => cur.reexpress(u.val()?)?.shift(u.val()?, -1),
        Operation::MakeSet { u } => cur.make_set(u.val()?),
        Operation::Add { .. } | Operation::ApproxRef { .. } => {
            Err(TemporalError::KindMismatch("non-instant operation on an instant".into()))
        }
    }
}

/// Modify the field named by an enumerable constant and drop everything
/// finer, matching the worked semantics ("2021-05-17" + Summer = "2021-SU").
fn apply_modify_enum(e: EnumConst, cur: &Instant) -> Result<Instant> {
    match e {
        EnumConst::Month(m) => {
            let with = cur.set_field(
                TimeField { unit: TimeUnit::Month, bound: Bound::Unit(TimeUnit::Year) },
                m as i32,
            )?;
            with.truncate(TimeUnit::Month)
        }
        EnumConst::Weekday(d) => {
            let with = cur.set_field(
                TimeField { unit: TimeUnit::Day, bound: Bound::Unit(TimeUnit::Week) },
                d as i32,
            )?;
            with.truncate(TimeUnit::Day)
        }
        EnumConst::Season(s) => {
            let y = cur.num(TimeUnit::Year).ok_or(TemporalError::WrongKind)?;
            Instant::from_chain(vec![
                (TimeUnit::Year, FieldValue::Num(y)),
                (TimeUnit::Season, FieldValue::Num(s as i32)),
            ])
        }
        EnumConst::DayPart(p) => {
            let day = cur.truncate(TimeUnit::Day).map_err(|_| TemporalError::WrongKind)?;
            let with = day.set_field(
                TimeField { unit: TimeUnit::DayTime, bound: Bound::Unit(TimeUnit::Day) },
                p as i32,
            )?;
            Ok(with)
        }
    }
}

/// Find the v-th weekday within the current scope unit (month or year).
fn apply_count_enum(v: i64, e: EnumConst, scope: TimeUnit, cur: &Instant) -> Result<Instant> {
    let EnumConst::Weekday(wd) = e else {
        return Err(TemporalError::KindMismatch("CountEnum counts weekdays".into()));
    };
    if v < 1 {
        return Err(TemporalError::FieldOverflow("CountEnum ordinal must be positive".into()));
    }
    let weekday = weekday_from_num(wd as i32).ok_or(TemporalError::WrongKind)?;
    let y = cur.num(TimeUnit::Year).ok_or(TemporalError::WrongKind)?;
    let (first, last) = match scope {
        TimeUnit::Month => {
            let m = cur.num(TimeUnit::Month).ok_or(TemporalError::WrongKind)?;
            let first = chrono::NaiveDate::from_ymd_opt(y, m as u32, 1)
                .ok_or(TemporalError::WrongKind)?;
            let last = if m == 12 {
                chrono::NaiveDate::from_ymd_opt(y + 1, 1, 1)
            } else {
                chrono::NaiveDate::from_ymd_opt(y, m as u32 + 1, 1)
            }
            .ok_or(TemporalError::WrongKind)?
            .pred_opt()
            .ok_or(TemporalError::WrongKind)?;
            (first, last)
        }
        TimeUnit::Year => {
            let first =
                chrono::NaiveDate::from_ymd_opt(y, 1, 1).ok_or(TemporalError::WrongKind)?;
            let last =
                chrono::NaiveDate::from_ymd_opt(y, 12, 31).ok_or(TemporalError::WrongKind)?;
            (first, last)
        }
        other => {
            return Err(TemporalError::KindMismatch(format!(
                "unsupported CountEnum scope {other}"
            )))
        }
    };
    use chrono::Datelike;
    let offset = (7 + weekday.num_days_from_monday() as i64
        - first.weekday().num_days_from_monday() as i64)
        % 7;
    let target = first + chrono::Days::new((offset + (v - 1) * 7) as u64);
    if target > last {
        return Err(TemporalError::FieldOverflow(format!(
            "no {v}-th {} in scope",
            e.name()
        )));
    }
    Instant::from_ymd(target.year(), target.month() as i32, target.day() as i32)
}

/// Move a field to its begin or end point within its bounding unit.
fn apply_to_boundary(f: TimeField, cur: &Instant, begin: bool) -> Result<Instant> {
    use TimeUnit::*;
    match (f.unit, f.bound) {
        (Month, Bound::Unit(Quarter)) => {
            let m = cur.num(Month).ok_or(TemporalError::WrongKind)?;
            let q = (m - 1) / 3;
            let target = if begin { q * 3 + 1 } else { q * 3 + 3 };
            cur.set_field(TimeField { unit: Month, bound: Bound::Unit(Year) }, target)
        }
        (Month, Bound::Unit(Year)) => {
            cur.set_field(f, if begin { 1 } else { 12 })
        }
        (Month, Bound::Unit(Season)) => {
            let m = cur.num(Month).ok_or(TemporalError::WrongKind)?;
            let s = crate::value::season_of_month(m) as i32;
            let first = season_first_month(s);
            let target = if begin { first } else { (first + 2 - 1) % 12 + 1 };
            cur.set_field(TimeField { unit: Month, bound: Bound::Unit(Year) }, target)
        }
        (Day, Bound::Unit(Week)) => cur.set_field(f, if begin { 1 } else { 7 }),
        (Day, Bound::Unit(Month)) => {
            if begin {
                cur.set_field(f, 1)
            } else {
                let y = cur.num(Year).ok_or(TemporalError::WrongKind)?;
                let m = cur.num(Month).ok_or(TemporalError::WrongKind)?;
                cur.set_field(f, days_in_month(y, m))
            }
        }
        (Quarter, Bound::Unit(Year)) | (Season, Bound::Unit(Year)) => {
            cur.set_field(f, if begin { 1 } else { 4 })
        }
        (Week, Bound::Unit(Year)) => {
            if begin {
                cur.set_field(f, 1)
            } else {
                let y = cur.num(Year).ok_or(TemporalError::WrongKind)?;
                cur.set_field(f, iso_weeks_in_year(y))
            }
        }
        (Hour, Bound::Unit(Day)) => cur.set_field(f, if begin { 0 } else { 23 }),
        (Minute, Bound::Unit(Hour)) | (Second, Bound::Unit(Minute)) => {
            cur.set_field(f, if begin { 0 } else { 59 })
        }
        _ => Err(TemporalError::KindMismatch(format!("no boundary defined for {f}"))),
    }
}

pub fn days_in_month(y: i32, m: i32) -> i32 {
    let first = chrono::NaiveDate::from_ymd_opt(y, m as u32, 1).unwrap();
    let next = if m == 12 {
        chrono::NaiveDate::from_ymd_opt(y + 1, 1, 1).unwrap()
    } else {
        chrono::NaiveDate::from_ymd_opt(y, m as u32 + 1, 1).unwrap()
    };
    (next - first).num_days() as i32
}

fn iso_weeks_in_year(y: i32) -> i32 {
    if chrono::NaiveDate::from_isoywd_opt(y, 53, chrono::Weekday::Mon).is_some() {
        53
    } else {
        52
    }
}

fn parse_slot<T>(s: &str, f: impl Fn(&str) -> Option<T>) -> Result<Slot<T>> {
    if let Some(rest) = s.strip_prefix('$') {
        let k: u8 = rest
            .parse()
            .map_err(|_| TemporalError::UnsupportedValueForm(format!("bad variable {s}")))?;
        return Ok(Slot::Var(k));
    }
    f(s)
        .map(Slot::Val)
        .ok_or_else(|| TemporalError::UnsupportedValueForm(format!("bad parameter {s}")))
}

fn parse_int_slot(s: &str) -> Result<Slot<i64>> {
    parse_slot(s, |t| t.parse::<i64>().ok())
}

/// Parse one operation from its textual form, e.g. `Backward[2,month]` or
/// `ModifyEnum[$1]`.
pub fn parse_operation(s: &str) -> Result<Operation> {
    let bad = || TemporalError::UnsupportedValueForm(format!("bad operation {s}"));
    let open = s.find('[').ok_or_else(bad)?;
    if !s.ends_with(']') {
        return Err(bad());
    }
    let name = &s[..open];
    let args: Vec<&str> = s[open + 1..s.len() - 1].split(',').map(str::trim).collect();
    let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
    Ok(match name {
        "ModifyVal" => {
            arity(2)?;
            Operation::ModifyVal {
                v: parse_int_slot(args[0])?,
                f: parse_slot(args[1], TimeField::from_syntax)?,
            }
        }
        "ModifyEnum" => {
            arity(1)?;
            Operation::ModifyEnum { e: parse_slot(args[0], EnumConst::from_name)? }
        }
        "CountEnum" => {
            arity(3)?;
            Operation::CountEnum {
                v: parse_int_slot(args[0])?,
                e: parse_slot(args[1], EnumConst::from_name)?,
                scope: parse_slot(args[2], TimeUnit::from_name)?,
            }
        }
        "Equal" => {
            arity(1)?;
            Operation::Equal { f: parse_slot(args[0], TimeField::from_syntax)? }
        }
        "ToBegin" => {
            arity(1)?;
            Operation::ToBegin { f: parse_slot(args[0], TimeField::from_syntax)? }
        }
        "ToEnd" => {
            arity(1)?;
            Operation::ToEnd { f: parse_slot(args[0], TimeField::from_syntax)? }
        }
        "Forward" => {
            arity(2)?;
            Operation::Forward {
                v: parse_int_slot(args[0])?,
                u: parse_slot(args[1], TimeUnit::from_name)?,
            }
        }
        "Backward" => {
            arity(2)?;
            Operation::Backward {
                v: parse_int_slot(args[0])?,
                u: parse_slot(args[1], TimeUnit::from_name)?,
            }
        }
        "ToNext" => {
            arity(1)?;
            Operation::ToNext { u: parse_slot(args[0], TimeUnit::from_name)? }
        }
        "ToLast" => {
            arity(1)?;
            Operation::ToLast { u: parse_slot(args[0], TimeUnit::from_name)? }
        }
        "MakeSet" => {
            arity(1)?;
            Operation::MakeSet { u: parse_slot(args[0], TimeUnit::from_name)? }
        }
        "Add" => {
            arity(2)?;
            Operation::Add {
                v: parse_int_slot(args[0])?,
                u: parse_slot(args[1], TimeUnit::from_name)?,
            }
        }
        "ApproxRef" => {
            arity(1)?;
            Operation::ApproxRef { r: parse_slot(args[0], crate::value::ApproxKind::from_name)? }
        }
        _ => return Err(bad()),
    })
}

/// Parse `(op1,op2,...)`; a bare operation without parentheses also parses as
/// a singleton sequence.
pub fn parse_sequence(s: &str) -> Result<OperationSequence> {
    let s = s.trim();
    let inner = match s.strip_prefix('(') {
        Some(rest) => rest
            .strip_suffix(')')
            .ok_or_else(|| TemporalError::UnsupportedValueForm(format!("bad sequence {s}")))?,
        None => s,
    };
    let mut ops = Vec::new();
    // Split on commas outside brackets: operation parameters contain commas.
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                ops.push(parse_operation(inner[start..i].trim())?);
                start = i + 1;
            }
            _ => {}
        }
    }
    let tail = inner[start..].trim();
    if !tail.is_empty() {
        ops.push(parse_operation(tail)?);
    }
    Ok(OperationSequence(ops))
}

/// True iff some non-empty strict subsequence of `seq` produces the same
/// result on `base` (the low-redundancy criterion). The empty subsequence is
/// not considered: `(Equal[dayOfMonth])` is the preferred direct sequence for
/// a day-granular target even when the base is already day-granular.
pub fn is_redundant(seq: &OperationSequence, base: &TemporalValue) -> Result<bool> {
    let full = execute(seq, base)?;
    let n = seq.len();
    if n == 0 {
        return Ok(false);
    }
    for mask in 1..(1u32 << n) - 1 {
        let sub: Vec<Operation> =
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| seq.0[i]).collect();
        let sub = OperationSequence(sub);
        if let Ok(out) = execute(&sub, base) {
            if out == full {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{parse_timex_value, serialize_timex_value};

    fn run(seq: &str, base: &str) -> String {
        let seq = parse_sequence(seq).unwrap();
        let base = parse_timex_value(base).unwrap();
        serialize_timex_value(&execute(&seq, &base).unwrap())
    }

    #[test]
    fn modify_val_sets_weekday_within_week() {
        assert_eq!(run("ModifyVal[5,dayOfWeek]", "2021-05-17"), "2021-05-21");
    }

    #[test]
    fn modify_enum_replaces_field_and_truncates() {
        assert_eq!(run("ModifyEnum[Summer]", "2021-05-17"), "2021-SU");
        assert_eq!(run("ModifyEnum[October]", "2021-05-17"), "2021-10");
        assert_eq!(run("ModifyEnum[Friday]", "2021-05-17"), "2021-05-21");
        // Extending by one chain step from a coarser base.
        assert_eq!(run("ModifyEnum[October]", "2020"), "2020-10");
    }

    #[test]
    fn count_enum_finds_nth_weekday() {
        assert_eq!(run("CountEnum[1,Friday,month]", "2021-05-17"), "2021-05-07");
        assert_eq!(run("CountEnum[2,Monday,month]", "2021-05-17"), "2021-05-10");
        assert_eq!(run("CountEnum[1,Friday,year]", "2021-05-17"), "2021-01-01");
        assert!(matches!(
            parse_sequence("CountEnum[5,Friday,month]").and_then(|s| execute(
                &s,
                &parse_timex_value("2021-05-17").unwrap()
            )),
            Err(TemporalError::FieldOverflow(_))
        ));
    }

    #[test]
    fn equal_reexpresses_at_coarser_field() {
        assert_eq!(run("Equal[monthOfYear]", "2021-05-17"), "2021-05");
        assert_eq!(run("Equal[dayOfMonth]", "2021-05-17"), "2021-05-17");
        assert_eq!(run("Equal[weekOfYear]", "2021-05-17"), "2021-W20");
        assert_eq!(run("Equal[quarterOfYear]", "2021-05"), "2021-Q2");
    }

    #[test]
    fn boundaries_move_fields_to_their_edges() {
        assert_eq!(run("ToBegin[monthOfQuarter]", "2021-05"), "2021-04");
        assert_eq!(run("ToEnd[monthOfQuarter]", "2021-05"), "2021-06");
        assert_eq!(run("ToBegin[dayOfMonth]", "2021-05-17"), "2021-05-01");
        assert_eq!(run("ToEnd[dayOfMonth]", "2021-02-17"), "2021-02-28");
        assert_eq!(run("ToEnd[monthOfYear]", "2021-05"), "2021-12");
    }

    #[test]
    fn forward_and_backward_shift_by_unit() {
        assert_eq!(run("Backward[2,month]", "2021-05"), "2021-03");
        assert_eq!(run("Forward[3,day]", "2021-05-30"), "2021-06-02");
        assert_eq!(run("Backward[1,week]", "2021-W20"), "2021-W19");
        assert_eq!(run("Forward[2,year]", "2021-05-17"), "2023-05-17");
        // Shape-preserving shifts refuse to invent days.
        assert!(matches!(
            parse_sequence("Forward[1,month]").and_then(|s| execute(
                &s,
                &parse_timex_value("2021-01-31").unwrap()
            )),
            Err(TemporalError::FieldOverflow(_))
        ));
    }

    #[test]
    fn to_next_and_to_last_step_at_their_granularity() {
        assert_eq!(run("ToNext[month]", "2021-05"), "2021-06");
        assert_eq!(run("ToLast[month]", "2021-05"), "2021-04");
        // From a finer base, the value is first re-expressed at the unit.
        assert_eq!(run("ToLast[year]", "2021-05-17"), "2020");
        assert_eq!(run("ToNext[week]", "2021-05-17"), "2021-W21");
    }

    #[test]
    fn make_set_marks_generic_fields() {
        assert_eq!(run("MakeSet[week]", "2021"), "2021-WXX");
        assert_eq!(run("MakeSet[day]", "2021-05"), "2021-05-XX");
    }

    #[test]
    fn add_builds_duration_values() {
        assert_eq!(run("Add[2,month]", "P1Y"), "P1Y2M");
        let seq = parse_sequence("(Add[1,year],Add[2,month])").unwrap();
        let out = execute(&seq, &parse_timex_value("2021-05-17").unwrap()).unwrap();
        assert_eq!(serialize_timex_value(&out), "P1Y2M");
    }

    #[test]
    fn approx_ref_yields_reference_values() {
        assert_eq!(run("ApproxRef[Past]", "2021-05"), "PAST_REF");
        assert_eq!(run("ApproxRef[Future]", "2021-05-17"), "FUTURE_REF");
    }

    #[test]
    fn last_october_composes_to_last_and_modify_enum() {
        assert_eq!(run("(ToLast[year],ModifyEnum[October])", "2021-05-17"), "2020-10");
    }

    #[test]
    fn redundancy_detects_absorbed_prefixes() {
        let base = parse_timex_value("2021-01").unwrap();
        let seq = parse_sequence("(ToNext[month],ModifyEnum[May])").unwrap();
        assert!(is_redundant(&seq, &base).unwrap());
        let direct = parse_sequence("(ToLast[year],ModifyEnum[October])").unwrap();
        assert!(!is_redundant(&direct, &parse_timex_value("2021-05-17").unwrap()).unwrap());
    }

    #[test]
    fn sequences_sort_coarse_to_fine() {
        let a = parse_operation("ModifyEnum[October]").unwrap();
        let b = parse_operation("ToLast[year]").unwrap();
        let sorted = sort_sequence(vec![a, b]);
        assert_eq!(sorted.to_string(), "(ToLast[year],ModifyEnum[October])");
        let c = parse_operation("ModifyVal[2030,year]").unwrap();
        let sorted = sort_sequence(vec![a, c, b]);
        assert_eq!(
            sorted.to_string(),
            "(ModifyVal[2030,year],ToLast[year],ModifyEnum[October])"
        );
    }

    #[test]
    fn operation_syntax_round_trips() {
        for s in [
            "ModifyVal[5,dayOfWeek]",
            "ModifyEnum[$1]",
            "CountEnum[$1,$2,month]",
            "Equal[monthOfYear]",
            "ToBegin[monthOfQuarter]",
            "ToEnd[dayOfMonth]",
            "Backward[$1,$2]",
            "Forward[3,day]",
            "ToNext[week]",
            "ToLast[$1]",
            "MakeSet[week]",
            "Add[2,month]",
            "ApproxRef[Past]",
        ] {
            assert_eq!(parse_operation(s).unwrap().to_string(), s);
        }
        let seq = "(ToLast[year],ModifyEnum[$1])";
        assert_eq!(parse_sequence(seq).unwrap().to_string(), seq);
    }
}
