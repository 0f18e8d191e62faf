//! Reverse-engineering operation sequences: given a base value and a gold
//! value, search for every low-redundancy sequence that turns the base into
//! the gold, drawing numeric parameters only from the expression's pool.
//!
//! Values act as search vertices and operations as edges. The search descends
//! the field hierarchy from coarse to fine: at each visited field it either
//! recurses directly (the base already agrees with the target there) or tries
//! every small operation combination whose effect closes the gap.

use std::collections::BTreeSet;

use crate::error::{Result, TemporalError};
use crate::op::{execute, is_redundant, sort_sequence, Operation, OperationSequence, Slot};
use crate::unit::{Bound, EnumConst, TimeField, TimeUnit, ALL_UNITS};
use crate::value::{Instant, TemporalValue};

/// One capture request: transform `base` into `target` spending numbers only
/// from `numeric_pool`.
#[derive(Debug, Clone)]
pub struct CaptureTask {
    pub base: TemporalValue,
    pub target: TemporalValue,
    /// Multiset of integers surfacing in the expression's tokens.
    pub numeric_pool: Vec<i64>,
}

/// Search knobs. The defaults suit corpus learning; tests narrow the unit
/// universe to match their oracles.
#[derive(Debug, Clone)]
pub struct CaptureOptions {
    /// Units the search may descend into.
    pub units: Vec<TimeUnit>,
    /// Node-visit cap; exceeding it flags the result as truncated.
    pub budget: usize,
}

impl Default for CaptureOptions {
    fn default() -> CaptureOptions {
        CaptureOptions { units: ALL_UNITS.to_vec(), budget: 10_000 }
    }
}

/// All sequences found, each with the pool values it consumed.
#[derive(Debug, Clone, Default)]
pub struct CaptureResult {
    pub sequences: Vec<(OperationSequence, Vec<i64>)>,
    /// True when the node budget ran out; the sequence list is then partial.
    pub truncated: bool,
}

impl CaptureResult {
    pub fn sequence_set(&self) -> BTreeSet<OperationSequence> {
        self.sequences.iter().map(|(s, _)| s.clone()).collect()
    }
}

pub fn capture(task: &CaptureTask) -> Result<CaptureResult> {
    capture_with(task, &CaptureOptions::default())
}

pub fn capture_with(task: &CaptureTask, opts: &CaptureOptions) -> Result<CaptureResult> {
    let mut found: BTreeSet<OperationSequence> = BTreeSet::new();
    let mut truncated = false;
    match &task.target {
        TemporalValue::Approx(r) => {
            found.insert(OperationSequence(vec![Operation::ApproxRef { r: Slot::Val(*r) }]));
        }
        TemporalValue::Duration(d) => {
            let mut pool = task.numeric_pool.clone();
            let mut ops = Vec::new();
            let mut ok = true;
            for (unit, n) in d.counts() {
                if !consume(&mut pool, n as i64) {
                    ok = false;
                    break;
                }
                ops.push(Operation::Add { v: Slot::Val(n as i64), u: Slot::Val(unit) });
            }
            if ok && !ops.is_empty() {
                found.insert(sort_sequence(ops));
            }
        }
        TemporalValue::Instant(t) => {
            let base = task.base.as_instant()?;
            if t.has_generic() {
                let generic = t.generic_units();
                let filled = match t.fill_generics_from(base) {
                    Ok(f) => f,
                    Err(_) => return Err(TemporalError::NoSequenceFound),
                };
                let mut inner = Search::new(&filled, opts);
                inner.run(base, &task.numeric_pool);
                truncated = inner.truncated;
                for seq in inner.found {
                    let mut ops = seq.0;
                    for &u in &generic {
                        ops.push(Operation::MakeSet { u: Slot::Val(u) });
                    }
                    found.insert(sort_sequence(ops));
                }
            } else {
                let mut search = Search::new(t, opts);
                search.run(base, &task.numeric_pool);
                truncated = search.truncated;
                found = search.found;
            }
        }
    }
    // Keep only sound, pool-respecting, low-redundancy sequences; the search
    // over-approximates slightly (e.g. canonical re-sorting after MakeSet).
    let mut sequences = Vec::new();
    for seq in found {
        match execute(&seq, &task.base) {
            Ok(out) if out == task.target => {}
            _ => continue,
        }
        let consumed = seq.numeric_params();
        if !is_submultiset(&consumed, &task.numeric_pool) {
            continue;
        }
        if is_redundant(&seq, &task.base).unwrap_or(true) {
            continue;
        }
        sequences.push((seq, consumed));
    }
    if sequences.is_empty() && !truncated {
        return Err(TemporalError::NoSequenceFound);
    }
    Ok(CaptureResult { sequences, truncated })
}

fn consume(pool: &mut Vec<i64>, v: i64) -> bool {
    if let Some(pos) = pool.iter().position(|&p| p == v) {
        pool.swap_remove(pos);
        true
    } else {
        false
    }
}

fn is_submultiset(needles: &[i64], pool: &[i64]) -> bool {
    let mut rest = pool.to_vec();
    needles.iter().all(|&v| consume(&mut rest, v))
}

struct Search<'a> {
    target: &'a Instant,
    units: Vec<TimeUnit>,
    budget: usize,
    nodes: usize,
    truncated: bool,
    found: BTreeSet<OperationSequence>,
}

impl<'a> Search<'a> {
    fn new(target: &'a Instant, opts: &CaptureOptions) -> Search<'a> {
        let mut units: Vec<TimeUnit> =
            opts.units.iter().copied().filter(|u| target.index(*u).is_some()).collect();
        units.sort_by_key(|u| u.rank());
        Search { target, units, budget: opts.budget, nodes: 0, truncated: false, found: BTreeSet::new() }
    }

    fn run(&mut self, base: &Instant, pool: &[i64]) {
        let mut acc = Vec::new();
        let mut pool = pool.to_vec();
        self.dfs(base, None, &mut acc, &mut pool);
    }

    fn emit(&mut self, cur: &Instant, acc: &[Operation]) {
        if cur == self.target {
            self.found.insert(sort_sequence(acc.to_vec()));
        }
        let gran = self.target.granularity();
        if let Ok(re) = cur.reexpress(gran) {
            if &re == self.target {
                let mut ops = acc.to_vec();
                ops.push(Operation::Equal { f: Slot::Val(self.target.granularity_field()) });
                self.found.insert(sort_sequence(ops));
            }
        }
    }

    fn dfs(
        &mut self,
        cur: &Instant,
        frontier: Option<u8>,
        acc: &mut Vec<Operation>,
        pool: &mut Vec<i64>,
    ) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            return;
        }
        self.emit(cur, acc);
        for i in 0..self.units.len() {
            let u = self.units[i];
            if let Some(f) = frontier {
                if u.rank() <= f {
                    continue;
                }
            }
            let Some(tidx) = self.target.index(u) else { continue };
            if cur.index(u).is_none() {
                continue;
            }
            let candidates = candidate_ops(u, pool);
            // Single operations closing the gap at u. When the gap is already
            // zero the operation must still change the value (re-shaping, like
            // ModifyEnum truncating finer fields); pure no-ops lead nowhere
            // the plain descent does not reach.
            for (op, cost) in &candidates {
                let Ok(next) = apply(op, cur) else { continue };
                if next.index(u) != Some(tidx) || next == *cur {
                    continue;
                }
                self.descend(&next, u, &[*op], &cost.clone(), acc, pool);
            }
            // Canonically ordered two-element subsets of the unit's
            // operations; larger same-unit combinations are necessarily
            // redundant (a later operation overrides an earlier one).
            for (a, ca) in &candidates {
                for (b, cb) in &candidates {
                    if a.sort_key() >= b.sort_key() {
                        continue;
                    }
                    let mut cost = ca.clone();
                    cost.extend_from_slice(cb);
                    if !is_submultiset(&cost, pool) {
                        continue;
                    }
                    let Ok(mid) = apply(a, cur) else { continue };
                    let Ok(next) = apply(b, &mid) else { continue };
                    if next.index(u) != Some(tidx) || next == *cur {
                        continue;
                    }
                    self.descend(&next, u, &[*a, *b], &cost, acc, pool);
                }
            }
        }
    }

    fn descend(
        &mut self,
        next: &Instant,
        u: TimeUnit,
        ops: &[Operation],
        cost: &[i64],
        acc: &mut Vec<Operation>,
        pool: &mut Vec<i64>,
    ) {
        let saved_pool = pool.clone();
        let mut ok = true;
        for &c in cost {
            if !consume(pool, c) {
                ok = false;
                break;
            }
        }
        if ok {
            let len = acc.len();
            acc.extend_from_slice(ops);
            self.dfs(next, Some(u.rank()), acc, pool);
            acc.truncate(len);
        }
        *pool = saved_pool;
    }
}

fn apply(op: &Operation, cur: &Instant) -> Result<Instant> {
    let seq = OperationSequence(vec![*op]);
    match execute(&seq, &TemporalValue::Instant(cur.clone()))? {
        TemporalValue::Instant(i) => Ok(i),
        _ => Err(TemporalError::WrongKind),
    }
}

/// Enumerate the operations that act on unit `u`, pairing each with the pool
/// values it would consume. Day-of-week values are enum-coded and free.
fn candidate_ops(u: TimeUnit, pool: &[i64]) -> Vec<(Operation, Vec<i64>)> {
    use TimeUnit::*;
    let mut out: Vec<(Operation, Vec<i64>)> = Vec::new();
    let mut nums: Vec<i64> = pool.to_vec();
    nums.sort_unstable();
    nums.dedup();

    let field = |unit: TimeUnit, bound: TimeUnit| TimeField { unit, bound: Bound::Unit(bound) };

    // ModifyVal on every field of this unit; values come from the pool except
    // for day-of-week.
    let mut fields: Vec<TimeField> = vec![u.default_field()];
    if u == Month {
        fields.push(field(Month, Quarter));
    }
    for f in &fields {
        for &v in &nums {
            if in_bounds(f, v) {
                out.push((Operation::ModifyVal { v: Slot::Val(v), f: Slot::Val(*f) }, vec![v]));
            }
        }
    }
    if u == Day {
        for v in 1..=7 {
            out.push((
                Operation::ModifyVal { v: Slot::Val(v), f: Slot::Val(field(Day, Week)) },
                vec![],
            ));
        }
    }

    // ModifyEnum over the enumerable constants of this unit.
    let enums: Vec<EnumConst> = match u {
        Month => (1..=12).map(EnumConst::Month).collect(),
        Day => (1..=7).map(EnumConst::Weekday).collect(),
        Season => (1..=4).filter_map(crate::unit::Season::from_num).map(EnumConst::Season).collect(),
        DayTime => (1..=4).filter_map(crate::unit::DayPart::from_num).map(EnumConst::DayPart).collect(),
        _ => Vec::new(),
    };
    for e in enums {
        out.push((Operation::ModifyEnum { e: Slot::Val(e) }, vec![]));
    }

    // CountEnum: the v-th weekday within a month or year.
    if u == Day {
        for &v in &nums {
            if (1..=5).contains(&v) {
                for scope in [Month, Year] {
                    for wd in 1..=7 {
                        out.push((
                            Operation::CountEnum {
                                v: Slot::Val(v),
                                e: Slot::Val(EnumConst::Weekday(wd)),
                                scope: Slot::Val(scope),
                            },
                            vec![v],
                        ));
                    }
                }
            }
        }
    }

    // Boundary moves on the fields anchored at this unit.
    let boundary_fields: Vec<TimeField> = match u {
        Month => vec![field(Month, Quarter), field(Month, Year), field(Month, Season)],
        Day => vec![field(Day, Week), field(Day, Month)],
        Quarter => vec![field(Quarter, Year)],
        Season => vec![field(Season, Year)],
        Week => vec![field(Week, Year)],
        Hour => vec![field(Hour, Day)],
        Minute => vec![field(Minute, Hour)],
        Second => vec![field(Second, Minute)],
        _ => Vec::new(),
    };
    for f in boundary_fields {
        out.push((Operation::ToBegin { f: Slot::Val(f) }, vec![]));
        out.push((Operation::ToEnd { f: Slot::Val(f) }, vec![]));
    }

    // Shifts.
    for &v in &nums {
        if v > 0 {
            out.push((Operation::Forward { v: Slot::Val(v), u: Slot::Val(u) }, vec![v]));
            out.push((Operation::Backward { v: Slot::Val(v), u: Slot::Val(u) }, vec![v]));
        }
    }
    out.push((Operation::ToNext { u: Slot::Val(u) }, vec![]));
    out.push((Operation::ToLast { u: Slot::Val(u) }, vec![]));

    out
}

fn in_bounds(f: &TimeField, v: i64) -> bool {
    match f.value_bounds() {
        Some((lo, hi)) => v >= lo as i64 && v <= hi as i64,
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_timex_value;
    use crate::op::parse_sequence;

    fn run(base: &str, target: &str, pool: &[i64]) -> BTreeSet<OperationSequence> {
        let task = CaptureTask {
            base: parse_timex_value(base).unwrap(),
            target: parse_timex_value(target).unwrap(),
            numeric_pool: pool.to_vec(),
        };
        let res = capture(&task).unwrap();
        assert!(!res.truncated);
        res.sequence_set()
    }

    fn seq(s: &str) -> OperationSequence {
        parse_sequence(s).unwrap()
    }

    #[test]
    fn finds_last_october_path() {
        let found = run("2021-05-17", "2020-10", &[]);
        assert!(found.contains(&seq("(ToLast[year],ModifyEnum[October])")), "{found:?}");
    }

    #[test]
    fn today_captures_as_equal_day() {
        let found = run("2021-05-17", "2021-05-17", &[]);
        assert!(found.contains(&seq("Equal[dayOfMonth]")), "{found:?}");
        assert!(found.contains(&OperationSequence::default()));
    }

    #[test]
    fn duration_targets_use_add() {
        let found = run("2021-05-17", "P2M", &[2]);
        let expected: BTreeSet<_> = [seq("Add[2,month]")].into_iter().collect();
        assert_eq!(found, expected);
    }

    #[test]
    fn duration_needs_pool_coverage() {
        let task = CaptureTask {
            base: parse_timex_value("2021-05-17").unwrap(),
            target: parse_timex_value("P2M").unwrap(),
            numeric_pool: vec![],
        };
        assert!(matches!(capture(&task), Err(TemporalError::NoSequenceFound)));
    }

    #[test]
    fn weekday_values_bypass_the_pool() {
        let found = run("2021-05-17", "2021-05-21", &[]);
        assert!(found.contains(&seq("ModifyVal[5,dayOfWeek]")), "{found:?}");
        // Forward[4,day] needs 4 in the pool.
        assert!(!found.contains(&seq("Forward[4,day]")));
        let with_pool = run("2021-05-17", "2021-05-21", &[4]);
        assert!(with_pool.contains(&seq("Forward[4,day]")), "{with_pool:?}");
    }

    #[test]
    fn approx_targets_are_single_references() {
        let found = run("2021-05-17", "PAST_REF", &[]);
        let expected: BTreeSet<_> = [seq("ApproxRef[Past]")].into_iter().collect();
        assert_eq!(found, expected);
    }

    #[test]
    fn set_targets_append_make_set() {
        let found = run("2021-05-17", "XXXX-05", &[]);
        assert!(found.contains(&seq("(ModifyEnum[May],MakeSet[year])")), "{found:?}");
        let weekly = run("2021-05-17", "2021-WXX", &[]);
        assert!(weekly.contains(&seq("(Equal[weekOfYear],MakeSet[week])")), "{weekly:?}");
    }

    #[test]
    fn every_sequence_executes_to_the_target() {
        for (base, target, pool) in [
            ("2021-05-17", "2020-10", vec![]),
            ("2021-05-17", "2021-W19", vec![1]),
            ("2021-05-17", "2021-04-26", vec![3]),
            ("2021-05-17", "2022-Q1", vec![1]),
        ] {
            let task = CaptureTask {
                base: parse_timex_value(base).unwrap(),
                target: parse_timex_value(target).unwrap(),
                numeric_pool: pool,
            };
            let res = capture(&task).unwrap_or_else(|e| panic!("{base} -> {target}: {e}"));
            for (s, _) in &res.sequences {
                let out = execute(s, &task.base).unwrap();
                assert_eq!(out, task.target, "{s}");
            }
        }
    }
}
