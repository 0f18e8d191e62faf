//! Bit-exact codec between [`TemporalValue`] and TIMEX3 value strings.
//!
//! Supported grammar: `yyyy`, `yyy` (decade), `yy` (century), `yyyy-MM`,
//! `yyyy-MM-DD`, `yyyy-Www`, `yyyy-Www-D`, `yyyy-QQ`, `yyyy-SS`,
//! date`T`HH[:MM[:SS]], date`T`(MO|AF|EV|NI), durations `P[nY][nM][nW][nD]`
//! and `PT[nH][nM][nS]`, `X` placeholders per digit group, and
//! `PAST_REF`/`PRESENT_REF`/`FUTURE_REF`.

use crate::error::{Result, TemporalError};
use crate::unit::TimeUnit;
use crate::value::{ApproxKind, DurationValue, FieldValue, Instant, TemporalValue};

pub fn parse_timex_value(text: &str) -> Result<TemporalValue> {
    let unsupported = || TemporalError::UnsupportedValueForm(text.to_string());
    match text {
        "PAST_REF" => return Ok(TemporalValue::Approx(ApproxKind::Past)),
        "PRESENT_REF" => return Ok(TemporalValue::Approx(ApproxKind::Present)),
        "FUTURE_REF" => return Ok(TemporalValue::Approx(ApproxKind::Future)),
        _ => {}
    }
    if let Some(rest) = text.strip_prefix('P') {
        return parse_duration(rest).ok_or_else(unsupported);
    }
    let (date_part, time_part) = match text.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (text, None),
    };
    let mut chain = parse_date_part(date_part).ok_or_else(unsupported)?;
    if let Some(t) = time_part {
        if chain.last().map(|(u, _)| *u) != Some(TimeUnit::Day) {
            return Err(unsupported());
        }
        parse_time_part(t, &mut chain).ok_or_else(unsupported)?;
    }
    let inst = Instant::from_chain(chain).map_err(|_| unsupported())?;
    Ok(TemporalValue::Instant(inst))
}

fn field(digits: &str) -> Option<FieldValue> {
    if digits.chars().all(|c| c == 'X') {
        Some(FieldValue::Generic)
    } else {
        digits.parse::<i32>().ok().map(FieldValue::Num)
    }
}

fn is_digits_or_x(s: &str) -> bool {
    !s.is_empty()
        && (s.chars().all(|c| c.is_ascii_digit()) || s.chars().all(|c| c == 'X'))
}

fn parse_date_part(s: &str) -> Option<Vec<(TimeUnit, FieldValue)>> {
    let mut parts = s.split('-');
    let head = parts.next()?;
    if !is_digits_or_x(head) {
        return None;
    }
    let mut chain: Vec<(TimeUnit, FieldValue)> = Vec::new();
    match head.len() {
        4 => chain.push((TimeUnit::Year, field(head)?)),
        3 => chain.push((TimeUnit::Decade, field(head)?)),
        2 => chain.push((TimeUnit::Century, field(head)?)),
        _ => return None,
    }
    let Some(second) = parts.next() else {
        return if parts.next().is_none() { Some(chain) } else { None };
    };
    if chain[0].0 != TimeUnit::Year {
        return None;
    }
    if let Some(w) = second.strip_prefix('W') {
        if w.len() != 2 || !is_digits_or_x(w) {
            return None;
        }
        chain.push((TimeUnit::Week, field(w)?));
        if let Some(third) = parts.next() {
            if third.len() != 1 || !is_digits_or_x(third) {
                return None;
            }
            chain.push((TimeUnit::Day, field(third)?));
        }
    } else if let Some(q) = second.strip_prefix('Q') {
        if q.len() != 1 || parts.next().is_some() {
            return None;
        }
        chain.push((TimeUnit::Quarter, field(q)?));
    } else if ["SP", "SU", "FA", "WI"].contains(&second) {
        if parts.next().is_some() {
            return None;
        }
        let s = match second {
            "SP" => 1,
            "SU" => 2,
            "FA" => 3,
            _ => 4,
        };
        chain.push((TimeUnit::Season, FieldValue::Num(s)));
    } else {
        if second.len() != 2 || !is_digits_or_x(second) {
            return None;
        }
        chain.push((TimeUnit::Month, field(second)?));
        if let Some(third) = parts.next() {
            if third.len() != 2 || !is_digits_or_x(third) {
                return None;
            }
            chain.push((TimeUnit::Day, field(third)?));
        }
    }
    if parts.next().is_some() {
        return None;
    }
    Some(chain)
}

fn parse_time_part(s: &str, chain: &mut Vec<(TimeUnit, FieldValue)>) -> Option<()> {
    if let Some(dp) = match s {
        "MO" => Some(1),
        "AF" => Some(2),
        "EV" => Some(3),
        "NI" => Some(4),
        _ => None,
    } {
        chain.push((TimeUnit::DayTime, FieldValue::Num(dp)));
        return Some(());
    }
    let mut parts = s.split(':');
    let hh = parts.next()?;
    if hh.len() != 2 || !is_digits_or_x(hh) {
        return None;
    }
    chain.push((TimeUnit::Hour, field(hh)?));
    for unit in [TimeUnit::Minute, TimeUnit::Second] {
        let Some(p) = parts.next() else { break };
        if p.len() != 2 || !is_digits_or_x(p) {
            return None;
        }
        chain.push((unit, field(p)?));
    }
    if parts.next().is_some() {
        return None;
    }
    Some(())
}

fn parse_duration(rest: &str) -> Option<TemporalValue> {
    let (date_sect, time_sect) = match rest.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (rest, None),
    };
    let mut dur = DurationValue::new();
    let mut any = false;
    let mut scan = |sect: &str, units: &[(char, TimeUnit)], any: &mut bool| -> Option<()> {
        let mut s = sect;
        let mut next_allowed = 0usize;
        while !s.is_empty() {
            let digits: String = s.chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return None;
            }
            s = &s[digits.len()..];
            let marker = s.chars().next()?;
            s = &s[1..];
            let pos = units[next_allowed..].iter().position(|(c, _)| *c == marker)?;
            let unit = units[next_allowed + pos].1;
            next_allowed += pos + 1;
            dur.add(unit, digits.parse().ok()?).ok()?;
            *any = true;
        }
        Some(())
    };
    scan(
        date_sect,
        &[
            ('Y', TimeUnit::Year),
            ('M', TimeUnit::Month),
            ('W', TimeUnit::Week),
            ('D', TimeUnit::Day),
        ],
        &mut any,
    )?;
    if let Some(t) = time_sect {
        if t.is_empty() {
            return None;
        }
        scan(
            t,
            &[('H', TimeUnit::Hour), ('M', TimeUnit::Minute), ('S', TimeUnit::Second)],
            &mut any,
        )?;
    }
    if !any {
        return None;
    }
    Some(TemporalValue::Duration(dur))
}

pub fn serialize_timex_value(v: &TemporalValue) -> String {
    match v {
        TemporalValue::Approx(ApproxKind::Past) => "PAST_REF".to_string(),
        TemporalValue::Approx(ApproxKind::Present) => "PRESENT_REF".to_string(),
        TemporalValue::Approx(ApproxKind::Future) => "FUTURE_REF".to_string(),
        TemporalValue::Duration(d) => serialize_duration(d),
        TemporalValue::Instant(inst) => serialize_instant(inst),
    }
}

fn serialize_duration(d: &DurationValue) -> String {
    let mut out = String::from("P");
    let mut time = String::new();
    for (unit, n) in d.counts() {
        let (marker, is_time) = match unit {
            TimeUnit::Year => ('Y', false),
            TimeUnit::Month => ('M', false),
            TimeUnit::Week => ('W', false),
            TimeUnit::Day => ('D', false),
            TimeUnit::Hour => ('H', true),
            TimeUnit::Minute => ('M', true),
            _ => ('S', true),
        };
        let part = format!("{n}{marker}");
        if is_time {
            time.push_str(&part);
        } else {
            out.push_str(&part);
        }
    }
    if !time.is_empty() {
        out.push('T');
        out.push_str(&time);
    }
    out
}

fn pad(v: FieldValue, width: usize) -> String {
    match v {
        FieldValue::Num(n) => format!("{:0width$}", n),
        FieldValue::Generic => "X".repeat(width),
    }
}

fn serialize_instant(inst: &Instant) -> String {
    let mut out = String::new();
    let mut after_week = false;
    for &(unit, v) in inst.chain() {
        match unit {
            TimeUnit::Year => out.push_str(&pad(v, 4)),
            TimeUnit::Decade => out.push_str(&pad(v, 3)),
            TimeUnit::Century => out.push_str(&pad(v, 2)),
            TimeUnit::Quarter => {
                out.push_str("-Q");
                out.push_str(&pad(v, 1));
            }
            TimeUnit::Season => {
                out.push('-');
                match v {
                    FieldValue::Num(n) => {
                        out.push_str(["SP", "SU", "FA", "WI"][(n - 1) as usize])
                    }
                    FieldValue::Generic => out.push_str("XX"),
                }
            }
            TimeUnit::Month => {
                out.push('-');
                out.push_str(&pad(v, 2));
            }
            TimeUnit::Week => {
                after_week = true;
                out.push_str("-W");
                out.push_str(&pad(v, 2));
            }
            TimeUnit::Day => {
                out.push('-');
                out.push_str(&pad(v, if after_week { 1 } else { 2 }));
            }
            TimeUnit::DayTime => {
                out.push('T');
                match v {
                    FieldValue::Num(n) => out.push_str(["MO", "AF", "EV", "NI"][(n - 1) as usize]),
                    FieldValue::Generic => out.push_str("XX"),
                }
            }
            TimeUnit::Hour => {
                out.push('T');
                out.push_str(&pad(v, 2));
            }
            TimeUnit::Minute | TimeUnit::Second => {
                out.push(':');
                out.push_str(&pad(v, 2));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(s: &str) {
        let v = parse_timex_value(s).unwrap();
        assert_eq!(serialize_timex_value(&v), s);
    }

    #[test]
    fn parses_paper_examples() {
        let v = parse_timex_value("2021-05-17T12:00").unwrap();
        let inst = v.as_instant().unwrap();
        assert_eq!(inst.num(TimeUnit::Year), Some(2021));
        assert_eq!(inst.num(TimeUnit::Month), Some(5));
        assert_eq!(inst.num(TimeUnit::Day), Some(17));
        assert_eq!(inst.num(TimeUnit::Hour), Some(12));
        assert_eq!(inst.num(TimeUnit::Minute), Some(0));

        match parse_timex_value("P2M").unwrap() {
            TemporalValue::Duration(d) => {
                assert_eq!(d.counts().collect::<Vec<_>>(), vec![(TimeUnit::Month, 2)])
            }
            other => panic!("expected duration, got {other:?}"),
        }

        assert_eq!(parse_timex_value("PAST_REF").unwrap(), TemporalValue::Approx(ApproxKind::Past));

        let v = parse_timex_value("2021-SU").unwrap();
        let inst = v.as_instant().unwrap();
        assert_eq!(inst.num(TimeUnit::Year), Some(2021));
        assert_eq!(inst.num(TimeUnit::Season), Some(2));

        let v = parse_timex_value("2021-WXX").unwrap();
        let inst = v.as_instant().unwrap();
        assert_eq!(inst.get(TimeUnit::Week), Some(FieldValue::Generic));
    }

    #[test]
    fn serializes_examples() {
        let inst = Instant::from_chain(vec![
            (TimeUnit::Year, FieldValue::Num(2021)),
            (TimeUnit::Month, FieldValue::Num(5)),
        ])
        .unwrap();
        assert_eq!(serialize_timex_value(&TemporalValue::Instant(inst)), "2021-05");

        let mut d = DurationValue::new();
        d.add(TimeUnit::Year, 1).unwrap();
        d.add(TimeUnit::Month, 2).unwrap();
        assert_eq!(serialize_timex_value(&TemporalValue::Duration(d)), "P1Y2M");

        assert_eq!(
            serialize_timex_value(&TemporalValue::Approx(ApproxKind::Future)),
            "FUTURE_REF"
        );
    }

    #[test]
    fn roundtrips_supported_forms() {
        for s in [
            "2021", "199", "20", "2021-05", "2021-05-17", "2021-W20", "2021-W20-1", "2021-Q2",
            "2021-SU", "2021-05-17T12", "2021-05-17T12:30", "2021-05-17T12:30:05",
            "2021-05-17TMO", "P1Y2M", "P3W", "PT2H30M", "P1DT12H", "XXXX-WXX", "2021-WXX",
            "XXXX-05", "2014-XX-XX", "PAST_REF", "PRESENT_REF", "FUTURE_REF",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn rejects_unsupported_forms() {
        for s in [
            "", "XXXX-XX", "2021-13", "2021-02-30", "2021-W54", "P", "PT", "2021-05-17T25",
            "abc", "2021-5", "2021-05-17T12:00:00.5", "-0500", "P2X", "2021-05-17-12",
        ] {
            assert!(parse_timex_value(s).is_err(), "should reject {s:?}");
        }
    }
}
