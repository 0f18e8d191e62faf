//! Time units, time fields and the enumerable temporal constants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TemporalError;

/// A time unit, ordered from coarse to fine.
///
/// Quarter and Season are parallel subdivisions of Year: neither bounds the
/// other, but the total order places Quarter just above Season so sorting
/// stays deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TimeUnit {
    Century,
    Decade,
    Year,
    Quarter,
    Season,
    Month,
    Week,
    Day,
    DayTime,
    Hour,
    Minute,
    Second,
}

pub const ALL_UNITS: [TimeUnit; 12] = [
    TimeUnit::Century,
    TimeUnit::Decade,
    TimeUnit::Year,
    TimeUnit::Quarter,
    TimeUnit::Season,
    TimeUnit::Month,
    TimeUnit::Week,
    TimeUnit::Day,
    TimeUnit::DayTime,
    TimeUnit::Hour,
    TimeUnit::Minute,
    TimeUnit::Second,
];

impl TimeUnit {
    /// Rank in the granularity order; smaller is coarser.
    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn is_coarser_than(self, other: TimeUnit) -> bool {
        self.rank() < other.rank()
    }

    /// Units that may directly follow `self` in an instant's field chain.
    pub fn successors(self) -> &'static [TimeUnit] {
        use TimeUnit::*;
        match self {
            Century | Decade => &[],
            Year => &[Quarter, Season, Month, Week],
            Quarter | Season => &[],
            Month => &[Day],
            Week => &[Day],
            Day => &[DayTime, Hour],
            DayTime => &[],
            Hour => &[Minute],
            Minute => &[Second],
            Second => &[],
        }
    }

    pub fn name(self) -> &'static str {
        use TimeUnit::*;
        match self {
            Century => "century",
            Decade => "decade",
            Year => "year",
            Quarter => "quarter",
            Season => "season",
            Month => "month",
            Week => "week",
            Day => "day",
            DayTime => "dayTime",
            Hour => "hour",
            Minute => "minute",
            Second => "second",
        }
    }

    pub fn from_name(s: &str) -> Option<TimeUnit> {
        use TimeUnit::*;
        Some(match s {
            "century" => Century,
            "decade" => Decade,
            "year" => Year,
            "quarter" => Quarter,
            "season" => Season,
            "month" => Month,
            "week" => Week,
            "day" => Day,
            "dayTime" => DayTime,
            "hour" => Hour,
            "minute" => Minute,
            "second" => Second,
            _ => return None,
        })
    }

    /// The default bounding unit when a bare unit is promoted to a field,
    /// e.g. `month` -> month-of-year, `day` -> day-of-month.
    pub fn default_field(self) -> TimeField {
        use TimeUnit::*;
        let bound = match self {
            Century | Decade | Year => Bound::Top,
            Quarter | Season | Month | Week => Bound::Unit(Year),
            Day => Bound::Unit(Month),
            DayTime | Hour => Bound::Unit(Day),
            Minute => Bound::Unit(Hour),
            Second => Bound::Unit(Minute),
        };
        TimeField { unit: self, bound }
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Upper bound of a time field: a coarser unit, or the top of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bound {
    Unit(TimeUnit),
    Top,
}

/// A time unit together with the coarser unit bounding its values,
/// e.g. (Day, Week) is day-of-week with values 1..=7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeField {
    pub unit: TimeUnit,
    pub bound: Bound,
}

impl TimeField {
    pub fn new(unit: TimeUnit, bound: Bound) -> Result<TimeField, TemporalError> {
        if let Bound::Unit(b) = bound {
            if !b.is_coarser_than(unit) {
                return Err(TemporalError::FieldOverflow(format!(
                    "bound {b} is not coarser than {unit}"
                )));
            }
        }
        Ok(TimeField { unit, bound })
    }

    /// Inclusive value bounds, when the field carries an integer value.
    pub fn value_bounds(&self) -> Option<(i32, i32)> {
        use TimeUnit::*;
        match (self.unit, self.bound) {
            (Year, Bound::Top) => Some((0, 9999)),
            (Decade, Bound::Top) => Some((0, 999)),
            (Century, Bound::Top) => Some((0, 99)),
            (Month, Bound::Unit(Year)) => Some((1, 12)),
            (Month, Bound::Unit(Quarter)) => Some((1, 3)),
            (Quarter, Bound::Unit(Year)) => Some((1, 4)),
            (Season, Bound::Unit(Year)) => Some((1, 4)),
            (Week, Bound::Unit(Year)) => Some((1, 53)),
            (Day, Bound::Unit(Month)) => Some((1, 31)),
            (Day, Bound::Unit(Week)) => Some((1, 7)),
            (Day, Bound::Unit(Year)) => Some((1, 366)),
            (DayTime, Bound::Unit(Day)) => Some((1, 4)),
            (Hour, Bound::Unit(Day)) => Some((0, 23)),
            (Minute, Bound::Unit(Hour)) => Some((0, 59)),
            (Second, Bound::Unit(Minute)) => Some((0, 59)),
            _ => None,
        }
    }

    /// Textual form used in the operation syntax: `unitOfBound`, or the bare
    /// unit name for top-level fields (`year`, `decade`, `century`).
    pub fn syntax(&self) -> String {
        match self.bound {
            Bound::Top => self.unit.name().to_string(),
            Bound::Unit(b) => {
                let b = b.name();
                let mut cap = String::with_capacity(b.len());
                let mut chars = b.chars();
                if let Some(c) = chars.next() {
                    cap.extend(c.to_uppercase());
                    cap.push_str(chars.as_str());
                }
                format!("{}Of{}", self.unit.name(), cap)
            }
        }
    }

    pub fn from_syntax(s: &str) -> Option<TimeField> {
        if let Some((u, b)) = s.split_once("Of") {
            let unit = TimeUnit::from_name(u)?;
            let mut lower = String::with_capacity(b.len());
            let mut chars = b.chars();
            lower.extend(chars.next()?.to_lowercase());
            lower.push_str(chars.as_str());
            let bound = TimeUnit::from_name(&lower)?;
            TimeField::new(unit, Bound::Unit(bound)).ok()
        } else {
            let unit = TimeUnit::from_name(s)?;
            match unit {
                TimeUnit::Century | TimeUnit::Decade | TimeUnit::Year => {
                    Some(TimeField { unit, bound: Bound::Top })
                }
                _ => Some(unit.default_field()),
            }
        }
    }
}

impl fmt::Display for TimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.syntax())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Season {
    Spring = 1,
    Summer = 2,
    Fall = 3,
    Winter = 4,
}

impl Season {
    pub fn from_num(n: i32) -> Option<Season> {
        Some(match n {
            1 => Season::Spring,
            2 => Season::Summer,
            3 => Season::Fall,
            4 => Season::Winter,
            _ => return None,
        })
    }

    pub fn code(self) -> &'static str {
        match self {
            Season::Spring => "SP",
            Season::Summer => "SU",
            Season::Fall => "FA",
            Season::Winter => "WI",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Season::Spring => "Spring",
            Season::Summer => "Summer",
            Season::Fall => "Fall",
            Season::Winter => "Winter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DayPart {
    Morning = 1,
    Afternoon = 2,
    Evening = 3,
    Night = 4,
}

impl DayPart {
    pub fn from_num(n: i32) -> Option<DayPart> {
        Some(match n {
            1 => DayPart::Morning,
            2 => DayPart::Afternoon,
            3 => DayPart::Evening,
            4 => DayPart::Night,
            _ => return None,
        })
    }

    pub fn code(self) -> &'static str {
        match self {
            DayPart::Morning => "MO",
            DayPart::Afternoon => "AF",
            DayPart::Evening => "EV",
            DayPart::Night => "NI",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DayPart::Morning => "Morning",
            DayPart::Afternoon => "Afternoon",
            DayPart::Evening => "Evening",
            DayPart::Night => "Night",
        }
    }
}

pub const MONTH_NAMES: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

pub const WEEKDAY_NAMES: [&str; 7] = [
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
];

/// An enumerable temporal constant: a month name, a weekday, a season or a
/// part of day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EnumConst {
    Month(u8),
    Weekday(u8),
    Season(Season),
    DayPart(DayPart),
}

impl EnumConst {
    /// The unit whose field this constant modifies.
    pub fn unit(self) -> TimeUnit {
        match self {
            EnumConst::Month(_) => TimeUnit::Month,
            EnumConst::Weekday(_) => TimeUnit::Day,
            EnumConst::Season(_) => TimeUnit::Season,
            EnumConst::DayPart(_) => TimeUnit::DayTime,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnumConst::Month(m) => MONTH_NAMES[(m - 1) as usize],
            EnumConst::Weekday(d) => WEEKDAY_NAMES[(d - 1) as usize],
            EnumConst::Season(s) => s.name(),
            EnumConst::DayPart(p) => p.name(),
        }
    }

    pub fn from_name(s: &str) -> Option<EnumConst> {
        if let Some(i) = MONTH_NAMES.iter().position(|m| *m == s) {
            return Some(EnumConst::Month(i as u8 + 1));
        }
        if let Some(i) = WEEKDAY_NAMES.iter().position(|d| *d == s) {
            return Some(EnumConst::Weekday(i as u8 + 1));
        }
        match s {
            "Spring" => Some(EnumConst::Season(Season::Spring)),
            "Summer" => Some(EnumConst::Season(Season::Summer)),
            "Fall" | "Autumn" => Some(EnumConst::Season(Season::Fall)),
            "Winter" => Some(EnumConst::Season(Season::Winter)),
            "Morning" => Some(EnumConst::DayPart(DayPart::Morning)),
            "Afternoon" => Some(EnumConst::DayPart(DayPart::Afternoon)),
            "Evening" => Some(EnumConst::DayPart(DayPart::Evening)),
            "Night" => Some(EnumConst::DayPart(DayPart::Night)),
            _ => None,
        }
    }
}

impl fmt::Display for EnumConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
