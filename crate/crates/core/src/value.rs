//! Temporal values: granular instants, duration bags and approximate
//! references, plus the calendar arithmetic defined over them.
//!
//! All calendar math is proleptic Gregorian with ISO-8601 week numbering
//! (weeks start on Monday).

use std::collections::BTreeMap;
use std::fmt;

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TemporalError};
use crate::unit::{Bound, DayPart, Season, TimeField, TimeUnit};

/// Value of one populated field: a concrete number, or the TIMEX3 `X`
/// placeholder marking the unit generic (a recurring set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FieldValue {
    Num(i32),
    Generic,
}

impl FieldValue {
    pub fn num(self) -> Option<i32> {
        match self {
            FieldValue::Num(n) => Some(n),
            FieldValue::Generic => None,
        }
    }
}

/// A granular instant: a contiguous chain of populated fields from the
/// coarsest down to its granularity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instant {
    chain: Vec<(TimeUnit, FieldValue)>,
}

impl Instant {
    pub fn from_chain(chain: Vec<(TimeUnit, FieldValue)>) -> Result<Instant> {
        let inst = Instant { chain };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_ymd(y: i32, m: i32, d: i32) -> Result<Instant> {
        Instant::from_chain(vec![
            (TimeUnit::Year, FieldValue::Num(y)),
            (TimeUnit::Month, FieldValue::Num(m)),
            (TimeUnit::Day, FieldValue::Num(d)),
        ])
    }

    fn validate(&self) -> Result<()> {
        let overflow = |msg: String| Err(TemporalError::FieldOverflow(msg));
        if self.chain.is_empty() {
            return overflow("empty field chain".into());
        }
        let head = self.chain[0].0;
        if !matches!(head, TimeUnit::Century | TimeUnit::Decade | TimeUnit::Year) {
            return overflow(format!("chain cannot start at {head}"));
        }
        for w in self.chain.windows(2) {
            let (prev, next) = (w[0].0, w[1].0);
            if !prev.successors().contains(&next) {
                return overflow(format!("{next} cannot follow {prev}"));
            }
        }
        // Fully underspecified dates ("XXXX-XX") are outside the supported
        // grammar; fully generic week forms ("XXXX-WXX") are recurring sets.
        if self.chain.iter().all(|(_, v)| *v == FieldValue::Generic)
            && self.get(TimeUnit::Week).is_none()
        {
            return overflow("fully underspecified chain".into());
        }
        for (i, &(unit, value)) in self.chain.iter().enumerate() {
            if value == FieldValue::Generic
                && matches!(unit, TimeUnit::Season | TimeUnit::DayTime)
            {
                return overflow(format!("{unit} cannot be generic"));
            }
            let bound = if i == 0 { Bound::Top } else { Bound::Unit(self.chain[i - 1].0) };
            let field = TimeField { unit, bound };
            if let FieldValue::Num(n) = value {
                let (lo, hi) = field
                    .value_bounds()
                    .ok_or_else(|| TemporalError::FieldOverflow(format!("no bounds for {field}")))?;
                if n < lo || n > hi {
                    return overflow(format!("{field}={n} outside [{lo},{hi}]"));
                }
            }
        }
        // Calendar validity for fully numeric date chains.
        if let (Some(y), Some(m), Some(d)) =
            (self.num(TimeUnit::Year), self.num(TimeUnit::Month), self.num(TimeUnit::Day))
        {
            if self.get(TimeUnit::Week).is_none()
                && NaiveDate::from_ymd_opt(y, m as u32, d as u32).is_none()
            {
                return overflow(format!("invalid date {y:04}-{m:02}-{d:02}"));
            }
        }
        if let (Some(y), Some(w)) = (self.num(TimeUnit::Year), self.num(TimeUnit::Week)) {
            if NaiveDate::from_isoywd_opt(y, w as u32, Weekday::Mon).is_none() {
                return overflow(format!("invalid week {y:04}-W{w:02}"));
            }
        }
        Ok(())
    }

    pub fn chain(&self) -> &[(TimeUnit, FieldValue)] {
        &self.chain
    }

    /// The finest populated unit.
    pub fn granularity(&self) -> TimeUnit {
        self.chain.last().unwrap().0
    }

    /// The granularity unit as a field, with its bound from the chain.
    pub fn granularity_field(&self) -> TimeField {
        let n = self.chain.len();
        let bound = if n >= 2 { Bound::Unit(self.chain[n - 2].0) } else { Bound::Top };
        TimeField { unit: self.granularity(), bound }
    }

    pub fn get(&self, unit: TimeUnit) -> Option<FieldValue> {
        self.chain.iter().find(|(u, _)| *u == unit).map(|(_, v)| *v)
    }

    pub fn num(&self, unit: TimeUnit) -> Option<i32> {
        self.get(unit).and_then(|v| v.num())
    }

    pub fn has_generic(&self) -> bool {
        self.chain.iter().any(|(_, v)| *v == FieldValue::Generic)
    }

    pub fn generic_units(&self) -> Vec<TimeUnit> {
        self.chain
            .iter()
            .filter(|(_, v)| *v == FieldValue::Generic)
            .map(|(u, _)| *u)
            .collect()
    }

    /// Drop all fields finer than `unit`; `unit` must be on the chain.
    pub fn truncate(&self, unit: TimeUnit) -> Result<Instant> {
        let pos = self
            .chain
            .iter()
            .position(|(u, _)| *u == unit)
            .ok_or(TemporalError::IncomparableRange)?;
        Ok(Instant { chain: self.chain[..=pos].to_vec() })
    }

    /// The calendar date of a day-or-finer instant, when fully numeric.
    pub fn date(&self) -> Option<NaiveDate> {
        let y = self.num(TimeUnit::Year)?;
        if let Some(w) = self.num(TimeUnit::Week) {
            let d = self.num(TimeUnit::Day)?;
            return NaiveDate::from_isoywd_opt(y, w as u32, weekday_from_num(d)?);
        }
        let m = self.num(TimeUnit::Month)?;
        let d = self.num(TimeUnit::Day)?;
        NaiveDate::from_ymd_opt(y, m as u32, d as u32)
    }

    fn from_date_like(&self, date: NaiveDate) -> Result<Instant> {
        // Rebuild the date fields preserving the chain shape and any finer
        // time-of-day fields.
        let mut chain: Vec<(TimeUnit, FieldValue)> = Vec::new();
        if self.get(TimeUnit::Week).is_some() {
            let iso = date.iso_week();
            chain.push((TimeUnit::Year, FieldValue::Num(iso.year())));
            chain.push((TimeUnit::Week, FieldValue::Num(iso.week() as i32)));
            chain.push((
                TimeUnit::Day,
                FieldValue::Num(date.weekday().number_from_monday() as i32),
            ));
        } else {
            chain.push((TimeUnit::Year, FieldValue::Num(date.year())));
            chain.push((TimeUnit::Month, FieldValue::Num(date.month() as i32)));
            chain.push((TimeUnit::Day, FieldValue::Num(date.day() as i32)));
        }
        for &(u, v) in &self.chain {
            if u.rank() > TimeUnit::Day.rank() {
                chain.push((u, v));
            }
        }
        Instant::from_chain(chain)
    }

    /// Expand the chain down to `unit` by taking the begin point of every
    /// missing finer field. Used for index computations on coarse values.
    fn begin_expand(&self, unit: TimeUnit) -> Option<Instant> {
        if self.has_generic() {
            return None;
        }
        let mut chain = self.chain.clone();
        // Promote decade/century heads to a year head first if needed.
        if unit.rank() > self.granularity().rank() {
            if chain[0].0 == TimeUnit::Century && unit != TimeUnit::Century {
                let c = chain[0].1.num()?;
                chain[0] = (TimeUnit::Year, FieldValue::Num(c * 100));
            } else if chain[0].0 == TimeUnit::Decade && unit != TimeUnit::Decade {
                let d = chain[0].1.num()?;
                chain[0] = (TimeUnit::Year, FieldValue::Num(d * 10));
            }
        }
        loop {
            let last = chain.last().unwrap().0;
            if last.rank() >= unit.rank() {
                break;
            }
            let next = match last {
                TimeUnit::Year => {
                    if unit == TimeUnit::Week {
                        (TimeUnit::Week, FieldValue::Num(1))
                    } else if unit == TimeUnit::Quarter {
                        (TimeUnit::Quarter, FieldValue::Num(1))
                    } else if unit == TimeUnit::Season {
                        (TimeUnit::Season, FieldValue::Num(1))
                    } else {
                        (TimeUnit::Month, FieldValue::Num(1))
                    }
                }
                TimeUnit::Month | TimeUnit::Week => (TimeUnit::Day, FieldValue::Num(1)),
                TimeUnit::Day => {
                    if unit == TimeUnit::DayTime {
                        (TimeUnit::DayTime, FieldValue::Num(1))
                    } else {
                        (TimeUnit::Hour, FieldValue::Num(0))
                    }
                }
                TimeUnit::Hour => (TimeUnit::Minute, FieldValue::Num(0)),
                TimeUnit::Minute => (TimeUnit::Second, FieldValue::Num(0)),
                _ => return None,
            };
            chain.push(next);
        }
        Some(Instant { chain })
    }

    /// Linear index of this instant at granularity `unit`, taking the begin
    /// point when the instant is coarser than `unit`. Drives the capture
    /// search and `field_diff`.
    pub fn index(&self, unit: TimeUnit) -> Option<i64> {
        use TimeUnit::*;
        let v = self.begin_expand(unit)?;
        let year = || -> Option<i64> {
            if let Some(y) = v.num(Year) {
                Some(y as i64)
            } else if let Some(d) = v.num(Decade) {
                Some(d as i64 * 10)
            } else {
                v.num(Century).map(|c| c as i64 * 100)
            }
        };
        match unit {
            Century => Some(year()? / 100),
            Decade => Some(year()? / 10),
            Year => year(),
            Quarter => {
                let q = v
                    .num(Quarter)
                    .or_else(|| v.num(Month).map(|m| (m - 1) / 3 + 1))?;
                Some(year()? * 4 + (q as i64 - 1))
            }
            Season => {
                let s = v
                    .num(Season)
                    .or_else(|| v.num(Month).map(|m| season_of_month(m) as i32))?;
                Some(year()? * 4 + (s as i64 - 1))
            }
            Month => {
                let m = v.num(Month).or_else(|| {
                    v.num(Quarter)
                        .map(|q| (q - 1) * 3 + 1)
                        .or_else(|| v.num(Season).map(|s| season_first_month(s)))
                })?;
                if v.get(Week).is_some() {
                    return None;
                }
                Some(year()? * 12 + (m as i64 - 1))
            }
            Week => {
                let date = if v.get(Day).is_some() || v.get(Month).is_some() {
                    v.date()?
                } else if let Some(w) = v.num(Week) {
                    NaiveDate::from_isoywd_opt(v.num(Year)?, w as u32, Weekday::Mon)?
                } else {
                    NaiveDate::from_isoywd_opt(v.num(Year)?, 1, Weekday::Mon)?
                };
                let monday = date - chrono::Days::new(date.weekday().num_days_from_monday() as u64);
                Some(monday.num_days_from_ce() as i64 / 7)
            }
            Day => Some(v.date()?.num_days_from_ce() as i64),
            DayTime => {
                let dt = v
                    .num(DayTime)
                    .or_else(|| v.num(Hour).map(|h| day_part_of_hour(h) as i32))?;
                Some(v.date()?.num_days_from_ce() as i64 * 4 + (dt as i64 - 1))
            }
            Hour => Some(v.date()?.num_days_from_ce() as i64 * 24 + v.num(Hour)? as i64),
            Minute => Some(v.index(Hour)? * 60 + v.num(Minute)? as i64),
            Second => Some(v.index(Minute)? * 60 + v.num(Second)? as i64),
        }
    }

    /// Re-express this instant at granularity `unit`, converting between
    /// parallel subdivisions where defined (date -> week, month -> quarter,
    /// month -> season, hour -> part of day).
    pub fn reexpress(&self, unit: TimeUnit) -> Result<Instant> {
        use TimeUnit::*;
        if self.get(unit).is_some() {
            return self.truncate(unit);
        }
        if self.has_generic() {
            return Err(TemporalError::IncomparableRange);
        }
        let gran = self.granularity();
        if unit.rank() > gran.rank() {
            return Err(TemporalError::KindMismatch(format!(
                "cannot re-express {gran}-granular value at finer unit {unit}"
            )));
        }
        match unit {
            Century => {
                let y = self.index(Year).ok_or(TemporalError::IncomparableRange)?;
                Instant::from_chain(vec![(Century, FieldValue::Num((y / 100) as i32))])
            }
            Decade => {
                let y = self.index(Year).ok_or(TemporalError::IncomparableRange)?;
                Instant::from_chain(vec![(Decade, FieldValue::Num((y / 10) as i32))])
            }
            Year => {
                let y = self.num(Year).ok_or(TemporalError::IncomparableRange)?;
                Instant::from_chain(vec![(Year, FieldValue::Num(y))])
            }
            Quarter => {
                let y = self.num(Year).ok_or(TemporalError::IncomparableRange)?;
                let m = self.num(Month).ok_or(TemporalError::IncomparableRange)?;
                Instant::from_chain(vec![
                    (Year, FieldValue::Num(y)),
                    (Quarter, FieldValue::Num((m - 1) / 3 + 1)),
                ])
            }
            Season => {
                let y = self.num(Year).ok_or(TemporalError::IncomparableRange)?;
                let m = self.num(Month).ok_or(TemporalError::IncomparableRange)?;
                Instant::from_chain(vec![
                    (Year, FieldValue::Num(y)),
                    (Season, FieldValue::Num(season_of_month(m) as i32)),
                ])
            }
            Week => {
                let date = self.date().ok_or(TemporalError::IncomparableRange)?;
                let iso = date.iso_week();
                Instant::from_chain(vec![
                    (Year, FieldValue::Num(iso.year())),
                    (Week, FieldValue::Num(iso.week() as i32)),
                ])
            }
            DayTime => {
                let h = self.num(Hour).ok_or(TemporalError::IncomparableRange)?;
                let mut base = self.truncate(Day)?;
                base.chain.push((DayTime, FieldValue::Num(day_part_of_hour(h) as i32)));
                base.validate()?;
                Ok(base)
            }
            _ => Err(TemporalError::IncomparableRange),
        }
    }

    /// Set the field addressed by `field` to `v`, extending the chain by one
    /// step when the field is just below the current granularity.
    pub fn set_field(&self, field: TimeField, v: i32) -> Result<Instant> {
        use TimeUnit::*;
        if self.has_generic() {
            return Err(TemporalError::WrongKind);
        }
        if let Some((lo, hi)) = field.value_bounds() {
            if v < lo || v > hi {
                return Err(TemporalError::FieldOverflow(format!(
                    "{field}={v} outside [{lo},{hi}]"
                )));
            }
        }
        match (field.unit, field.bound) {
            (Year, Bound::Top) => {
                if self.chain[0].0 != Year {
                    return Err(TemporalError::KindMismatch("no year field".into()));
                }
                let mut c = self.chain.clone();
                c[0] = (Year, FieldValue::Num(v));
                Instant::from_chain(c)
            }
            (Decade, Bound::Top) | (Century, Bound::Top) => {
                if self.chain[0].0 != field.unit {
                    return Err(TemporalError::KindMismatch(format!("no {} field", field.unit)));
                }
                Instant::from_chain(vec![(field.unit, FieldValue::Num(v))])
            }
            (Day, Bound::Unit(Week)) => {
                if let Some(date) = self.date() {
                    let monday =
                        date - chrono::Days::new(date.weekday().num_days_from_monday() as u64);
                    let target = monday + chrono::Days::new((v - 1) as u64);
                    self.from_date_like(target)
                } else if self.granularity() == Week && self.num(Week).is_some() {
                    let mut c = self.chain.clone();
                    c.push((Day, FieldValue::Num(v)));
                    Instant::from_chain(c)
                } else {
                    Err(TemporalError::KindMismatch("no week context for day-of-week".into()))
                }
            }
            (Month, Bound::Unit(Quarter)) => {
                let m = self.num(Month).ok_or_else(|| {
                    TemporalError::KindMismatch("no month field for month-of-quarter".into())
                })?;
                let q = (m - 1) / 3;
                self.replace_or_extend(Month, q * 3 + v)
            }
            (unit, _) => self.replace_or_extend(unit, v),
        }
    }

    fn replace_or_extend(&self, unit: TimeUnit, v: i32) -> Result<Instant> {
        let mut c = self.chain.clone();
        if let Some(pos) = c.iter().position(|(u, _)| *u == unit) {
            c[pos] = (unit, FieldValue::Num(v));
        } else if self.granularity().successors().contains(&unit) {
            c.push((unit, FieldValue::Num(v)));
        } else {
            return Err(TemporalError::KindMismatch(format!(
                "cannot address {unit} from a {}-granular value",
                self.granularity()
            )));
        }
        Instant::from_chain(c)
    }

    /// Shift the instant by `n` steps of `unit`, preserving its shape and
    /// granularity. `unit` must be at or above the granularity's rank in the
    /// sense that the shift is well defined on the populated fields.
    pub fn shift(&self, unit: TimeUnit, n: i64) -> Result<Instant> {
        use TimeUnit::*;
        if self.has_generic() {
            return Err(TemporalError::WrongKind);
        }
        if n == 0 {
            return Ok(self.clone());
        }
        let mismatch =
            |m: &str| -> Result<Instant> { Err(TemporalError::KindMismatch(m.to_string())) };
        match unit {
            Century | Decade | Year => {
                let head = self.chain[0].0;
                if head != unit && unit != Year {
                    return mismatch("shift unit does not match the chain head");
                }
                let mut c = self.chain.clone();
                if head == unit {
                    let cur = c[0].1.num().unwrap();
                    c[0].1 = FieldValue::Num(cur + n as i32);
                } else {
                    return mismatch("year shift on a non-year chain");
                }
                Instant::from_chain(c)
            }
            Quarter => {
                if let Some(q) = self.num(Quarter) {
                    let y = self.num(Year).unwrap() as i64;
                    let idx = y * 4 + q as i64 - 1 + n;
                    let mut c = self.chain.clone();
                    let ypos = c.iter().position(|(u, _)| *u == Year).unwrap();
                    let qpos = c.iter().position(|(u, _)| *u == Quarter).unwrap();
                    c[ypos].1 = FieldValue::Num(idx.div_euclid(4) as i32);
                    c[qpos].1 = FieldValue::Num(idx.rem_euclid(4) as i32 + 1);
                    Instant::from_chain(c)
                } else if self.get(Month).is_some() {
                    self.shift(Month, n * 3)
                } else {
                    mismatch("no quarter context")
                }
            }
            Season => {
                if let Some(s) = self.num(Season) {
                    let y = self.num(Year).unwrap() as i64;
                    let idx = y * 4 + s as i64 - 1 + n;
                    Instant::from_chain(vec![
                        (Year, FieldValue::Num(idx.div_euclid(4) as i32)),
                        (Season, FieldValue::Num(idx.rem_euclid(4) as i32 + 1)),
                    ])
                } else {
                    mismatch("no season field")
                }
            }
            Month => {
                let m = match self.num(Month) {
                    Some(m) => m,
                    None => return mismatch("no month field"),
                };
                let y = self.num(Year).unwrap() as i64;
                let idx = y * 12 + m as i64 - 1 + n;
                let mut c = self.chain.clone();
                let ypos = c.iter().position(|(u, _)| *u == Year).unwrap();
                let mpos = c.iter().position(|(u, _)| *u == Month).unwrap();
                c[ypos].1 = FieldValue::Num(idx.div_euclid(12) as i32);
                c[mpos].1 = FieldValue::Num(idx.rem_euclid(12) as i32 + 1);
                Instant::from_chain(c)
            }
            Week => {
                if let Some(date) = self.date() {
                    self.from_date_like(shift_days(date, n * 7)?)
                } else if self.num(Week).is_some() {
                    let y = self.num(Year).unwrap();
                    let w = self.num(Week).unwrap();
                    let monday = NaiveDate::from_isoywd_opt(y, w as u32, Weekday::Mon)
                        .ok_or(TemporalError::WrongKind)?;
                    let moved = shift_days(monday, n * 7)?;
                    let iso = moved.iso_week();
                    let mut c = self.chain.clone();
                    let ypos = c.iter().position(|(u, _)| *u == Year).unwrap();
                    let wpos = c.iter().position(|(u, _)| *u == Week).unwrap();
                    c[ypos].1 = FieldValue::Num(iso.year());
                    c[wpos].1 = FieldValue::Num(iso.week() as i32);
                    Instant::from_chain(c)
                } else {
                    mismatch("no week context")
                }
            }
            Day => match self.date() {
                Some(date) => self.from_date_like(shift_days(date, n)?),
                None => mismatch("no day field"),
            },
            DayTime => {
                let dt = match self.num(DayTime) {
                    Some(dt) => dt,
                    None => return mismatch("no part-of-day field"),
                };
                let date = self.date().ok_or(TemporalError::WrongKind)?;
                let idx = date.num_days_from_ce() as i64 * 4 + dt as i64 - 1 + n;
                let moved = NaiveDate::from_num_days_from_ce_opt(idx.div_euclid(4) as i32)
                    .ok_or_else(|| TemporalError::FieldOverflow("date out of range".into()))?;
                let mut out = self.from_date_like(moved)?;
                let pos = out.chain.iter().position(|(u, _)| *u == DayTime).unwrap();
                out.chain[pos].1 = FieldValue::Num(idx.rem_euclid(4) as i32 + 1);
                Ok(out)
            }
            Hour | Minute | Second => {
                let per_day = match unit {
                    Hour => 24,
                    Minute => 24 * 60,
                    _ => 24 * 3600,
                };
                let cur = self.index(unit).ok_or(TemporalError::KindMismatch(format!(
                    "no {unit} field"
                )))?;
                if self.num(unit).is_none() {
                    return mismatch("shift finer than granularity");
                }
                let idx = cur + n;
                let day = idx.div_euclid(per_day);
                let within = idx.rem_euclid(per_day);
                let date = NaiveDate::from_num_days_from_ce_opt(day as i32)
                    .ok_or_else(|| TemporalError::FieldOverflow("date out of range".into()))?;
                let mut out = self.from_date_like(date)?;
                let (h, mi, s) = match unit {
                    Hour => (within, -1, -1),
                    Minute => (within / 60, within % 60, -1),
                    _ => (within / 3600, within % 3600 / 60, within % 60),
                };
                for (u, val) in [(Hour, h), (Minute, mi), (Second, s)] {
                    if val >= 0 {
                        if let Some(pos) = out.chain.iter().position(|(x, _)| *x == u) {
                            out.chain[pos].1 = FieldValue::Num(val as i32);
                        }
                    }
                }
                out.validate()?;
                Ok(out)
            }
        }
    }

    /// Mark `unit` generic (an X placeholder): in place when populated,
    /// appended when it is a valid extension of the granularity.
    pub fn make_set(&self, unit: TimeUnit) -> Result<Instant> {
        let mut c = self.chain.clone();
        if let Some(pos) = c.iter().position(|(u, _)| *u == unit) {
            c[pos].1 = FieldValue::Generic;
        } else if self.granularity().successors().contains(&unit) {
            c.push((unit, FieldValue::Generic));
        } else {
            return Err(TemporalError::KindMismatch(format!(
                "cannot mark {unit} as a set on a {}-granular value",
                self.granularity()
            )));
        }
        Instant::from_chain(c)
    }

    /// Replace every generic field with the corresponding field of `other`
    /// (re-expressed as needed). Used to anchor set-marked targets in capture.
    pub fn fill_generics_from(&self, other: &Instant) -> Result<Instant> {
        let mut c = self.chain.clone();
        for entry in c.iter_mut() {
            if entry.1 == FieldValue::Generic {
                let donor = other.reexpress(entry.0).or_else(|_| {
                    other
                        .begin_expand(entry.0)
                        .ok_or(TemporalError::IncomparableRange)
                })?;
                let v = donor.num(entry.0).ok_or(TemporalError::IncomparableRange)?;
                entry.1 = FieldValue::Num(v);
            }
        }
        Instant::from_chain(c)
    }
}

fn shift_days(date: NaiveDate, n: i64) -> Result<NaiveDate> {
    let idx = date.num_days_from_ce() as i64 + n;
    NaiveDate::from_num_days_from_ce_opt(idx as i32)
        .filter(|d| (0..=9999).contains(&d.year()))
        .ok_or_else(|| TemporalError::FieldOverflow("date out of range".into()))
}

pub fn weekday_from_num(d: i32) -> Option<Weekday> {
    Some(match d {
        1 => Weekday::Mon,
        2 => Weekday::Tue,
        3 => Weekday::Wed,
        4 => Weekday::Thu,
        5 => Weekday::Fri,
        6 => Weekday::Sat,
        7 => Weekday::Sun,
        _ => return None,
    })
}

/// Meteorological seasons; December is assigned to the winter of its own
/// year, January and February to the winter of theirs.
pub fn season_of_month(m: i32) -> Season {
    match m {
        3..=5 => Season::Spring,
        6..=8 => Season::Summer,
        9..=11 => Season::Fall,
        _ => Season::Winter,
    }
}

pub fn season_first_month(s: i32) -> i32 {
    match s {
        1 => 3,
        2 => 6,
        3 => 9,
        _ => 12,
    }
}

pub fn day_part_of_hour(h: i32) -> DayPart {
    match h {
        6..=11 => DayPart::Morning,
        12..=17 => DayPart::Afternoon,
        18..=21 => DayPart::Evening,
        _ => DayPart::Night,
    }
}

/// A duration bag: non-negative counts per time unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct DurationValue {
    counts: BTreeMap<TimeUnit, u32>,
}

impl DurationValue {
    pub fn new() -> DurationValue {
        DurationValue::default()
    }

    pub fn single(unit: TimeUnit, n: u32) -> Result<DurationValue> {
        let mut d = DurationValue::new();
        d.add(unit, n)?;
        Ok(d)
    }

    pub fn add(&mut self, unit: TimeUnit, n: u32) -> Result<()> {
        if !matches!(
            unit,
            TimeUnit::Year
                | TimeUnit::Month
                | TimeUnit::Week
                | TimeUnit::Day
                | TimeUnit::Hour
                | TimeUnit::Minute
                | TimeUnit::Second
        ) {
            return Err(TemporalError::KindMismatch(format!("{unit} not usable in a duration")));
        }
        *self.counts.entry(unit).or_insert(0) += n;
        Ok(())
    }

    pub fn counts(&self) -> impl Iterator<Item = (TimeUnit, u32)> + '_ {
        self.counts.iter().map(|(u, n)| (*u, *n))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.values().all(|n| *n == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ApproxKind {
    Past,
    Present,
    Future,
}

impl ApproxKind {
    pub fn name(self) -> &'static str {
        match self {
            ApproxKind::Past => "Past",
            ApproxKind::Present => "Present",
            ApproxKind::Future => "Future",
        }
    }

    pub fn from_name(s: &str) -> Option<ApproxKind> {
        Some(match s {
            "Past" => ApproxKind::Past,
            "Present" => ApproxKind::Present,
            "Future" => ApproxKind::Future,
            _ => return None,
        })
    }
}

/// A TIMEX3 temporal value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TemporalValue {
    Instant(Instant),
    Duration(DurationValue),
    Approx(ApproxKind),
}

impl TemporalValue {
    pub fn as_instant(&self) -> Result<&Instant> {
        match self {
            TemporalValue::Instant(i) => Ok(i),
            _ => Err(TemporalError::WrongKind),
        }
    }

    pub fn is_instant(&self) -> bool {
        matches!(self, TemporalValue::Instant(_))
    }
}

impl fmt::Display for TemporalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::codec::serialize_timex_value(self))
    }
}

/// Truncate an instant value to granularity `g`.
pub fn truncate(v: &TemporalValue, g: TimeUnit) -> Result<TemporalValue> {
    let inst = v.as_instant()?;
    Ok(TemporalValue::Instant(inst.truncate(g)?))
}

/// Signed count of `lower.unit` steps from `a` to `b` over the field range
/// closed by `upper`. Both instants must populate the range.
pub fn field_diff(
    a: &TemporalValue,
    b: &TemporalValue,
    _upper: TimeField,
    lower: TimeField,
) -> Result<i64> {
    let (a, b) = (a.as_instant()?, b.as_instant()?);
    if a.granularity().rank() < lower.unit.rank() || b.granularity().rank() < lower.unit.rank() {
        return Err(TemporalError::IncomparableRange);
    }
    let ia = a.index(lower.unit).ok_or(TemporalError::IncomparableRange)?;
    let ib = b.index(lower.unit).ok_or(TemporalError::IncomparableRange)?;
    Ok(ib - ia)
}
