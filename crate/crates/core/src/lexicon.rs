//! Tokenization, the token-type lexicon, numeric words, stop words, and
//! surface-pattern matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Result, TemporalError};
use crate::unit::{DayPart, EnumConst, Season, TimeUnit};

/// The slot-capable token types plus the implicit numeric type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagType {
    Month,
    Week,
    Season,
    DayTime,
    TimeUnit,
    InEq,
}

impl TagType {
    pub fn name(self) -> &'static str {
        match self {
            TagType::Month => "MONTH",
            TagType::Week => "WEEK",
            TagType::Season => "SEASON",
            TagType::DayTime => "DAY_TIME",
            TagType::TimeUnit => "TIME_UNIT",
            TagType::InEq => "IN_EQ",
        }
    }

    pub fn from_name(s: &str) -> Option<TagType> {
        Some(match s {
            "MONTH" => TagType::Month,
            "WEEK" => TagType::Week,
            "SEASON" => TagType::Season,
            "DAY_TIME" => TagType::DayTime,
            "TIME_UNIT" => TagType::TimeUnit,
            "IN_EQ" => TagType::InEq,
            _ => return None,
        })
    }
}

/// The canonical value a tag denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagValue {
    Enum(EnumConst),
    Unit(TimeUnit),
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    pub ty: TagType,
    pub value: TagValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NumberStyle {
    Cardinal,
    Ordinal,
    Digits,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TokenKind {
    Word,
    Number { value: i64, style: NumberStyle },
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    /// Lowercased surface; multiword lexicon phrases are joined with `_`.
    pub surface: String,
    pub kind: TokenKind,
    pub tags: Vec<Tag>,
}

impl Token {
    pub fn number(&self) -> Option<i64> {
        match self.kind {
            TokenKind::Number { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn tag(&self, ty: TagType) -> Option<TagValue> {
        self.tags.iter().find(|t| t.ty == ty).map(|t| t.value)
    }
}

/// Collect every integer surfacing in the tokens (the capture pool).
pub fn num_vals(tokens: &[Token]) -> Vec<i64> {
    tokens.iter().filter_map(Token::number).collect()
}

/// The static lexicon: surface variants to tags, numeric words, stop words.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Tag>>,
    /// Multiword entries, longest first, as (words, tag).
    phrases: Vec<(Vec<String>, Tag)>,
    cardinals: BTreeMap<String, i64>,
    ordinals: BTreeMap<String, i64>,
    stop_words: BTreeSet<String>,
}

const MONTHS: [&str; 12] = [
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];
const MONTH_ABBREVS: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];
const WEEKDAYS: [&str; 7] =
    ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];
const WEEKDAY_ABBREVS: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];
const ONES: [&str; 20] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty",
];
const ORDINAL_ONES: [&str; 20] = [
    "first", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth",
    "eleventh", "twelfth", "thirteenth", "fourteenth", "fifteenth", "sixteenth", "seventeenth",
    "eighteenth", "nineteenth", "twentieth", "thirtieth",
];
const TENS: [(&str, i64); 8] = [
    ("twenty", 20),
    ("thirty", 30),
    ("forty", 40),
    ("fifty", 50),
    ("sixty", 60),
    ("seventy", 70),
    ("eighty", 80),
    ("ninety", 90),
];

impl Default for Lexicon {
    fn default() -> Lexicon {
        let mut lex = Lexicon {
            entries: BTreeMap::new(),
            phrases: Vec::new(),
            cardinals: BTreeMap::new(),
            ordinals: BTreeMap::new(),
            stop_words: BTreeSet::new(),
        };

        for (i, name) in MONTHS.iter().enumerate() {
            let tag = Tag {
                ty: TagType::Month,
                value: TagValue::Enum(EnumConst::Month(i as u8 + 1)),
            };
            lex.insert(name, tag);
            let ab = MONTH_ABBREVS[i];
            lex.insert(ab, tag);
            lex.insert(&format!("{ab}."), tag);
        }
        // Common longer-form variants.
        lex.insert("sept", lex.entries["sep"][0]);
        lex.insert("sept.", lex.entries["sep"][0]);

        for (i, name) in WEEKDAYS.iter().enumerate() {
            let tag = Tag {
                ty: TagType::Week,
                value: TagValue::Enum(EnumConst::Weekday(i as u8 + 1)),
            };
            lex.insert(name, tag);
            let ab = WEEKDAY_ABBREVS[i];
            lex.insert(ab, tag);
            lex.insert(&format!("{ab}."), tag);
        }
        for (variant, tag) in [("tues", "tue"), ("thur", "thu"), ("thurs", "thu")] {
            lex.insert(variant, lex.entries[tag][0]);
            lex.insert(&format!("{variant}."), lex.entries[tag][0]);
        }

        for (name, season) in [
            ("spring", Season::Spring),
            ("summer", Season::Summer),
            ("autumn", Season::Fall),
            ("fall", Season::Fall),
            ("winter", Season::Winter),
        ] {
            lex.insert(
                name,
                Tag { ty: TagType::Season, value: TagValue::Enum(EnumConst::Season(season)) },
            );
        }

        for (name, part) in [
            ("morning", DayPart::Morning),
            ("afternoon", DayPart::Afternoon),
            ("noon", DayPart::Afternoon),
            ("evening", DayPart::Evening),
            ("night", DayPart::Night),
            ("midnight", DayPart::Night),
        ] {
            lex.insert(
                name,
                Tag { ty: TagType::DayTime, value: TagValue::Enum(EnumConst::DayPart(part)) },
            );
        }

        for (singular, plural, unit) in [
            ("second", "seconds", TimeUnit::Second),
            ("minute", "minutes", TimeUnit::Minute),
            ("hour", "hours", TimeUnit::Hour),
            ("day", "days", TimeUnit::Day),
            ("week", "weeks", TimeUnit::Week),
            ("weekend", "weekends", TimeUnit::Week),
            ("month", "months", TimeUnit::Month),
            ("quarter", "quarters", TimeUnit::Quarter),
            ("season", "seasons", TimeUnit::Season),
            ("year", "years", TimeUnit::Year),
            ("decade", "decades", TimeUnit::Decade),
            ("century", "centuries", TimeUnit::Century),
        ] {
            let tag = Tag { ty: TagType::TimeUnit, value: TagValue::Unit(unit) };
            lex.insert(singular, tag);
            lex.insert(plural, tag);
        }

        let in_eq = Tag { ty: TagType::InEq, value: TagValue::None };
        for word in ["nearly", "about", "around", "almost", "over"] {
            lex.insert(word, in_eq);
        }
        for phrase in
            ["a mere", "no more than", "at least", "at most", "up to", "more than", "less than"]
        {
            lex.phrases
                .push((phrase.split(' ').map(str::to_string).collect(), in_eq));
        }
        lex.phrases.sort_by_key(|(w, _)| std::cmp::Reverse(w.len()));

        for (i, name) in ONES.iter().enumerate() {
            lex.cardinals.insert((*name).to_string(), i as i64 + 1);
        }
        for (name, v) in TENS {
            lex.cardinals.insert(name.to_string(), v);
        }
        // "second" the ordinal stays a plain TIME_UNIT word; the clash is
        // resolved in favour of the far more common unit reading.
        for name in ORDINAL_ONES {
            let v = match name {
                "first" => 1,
                "third" => 3,
                "thirtieth" => 30,
                _ => {
                    ORDINAL_ONES.iter().position(|n| *n == name).unwrap() as i64 + 2
                }
            };
            lex.ordinals.insert(name.to_string(), v);
        }

        for w in [
            "a", "an", "the", "this", "that", "these", "those", "of", "in", "on", "at", "to",
            "for", "from", "by", "and", "or", ",", "-", "\u{2013}", "/", ".",
        ] {
            lex.stop_words.insert(w.to_string());
        }

        lex
    }
}

impl Lexicon {
    fn insert(&mut self, surface: &str, tag: Tag) {
        let tags = self.entries.entry(surface.to_string()).or_default();
        if !tags.contains(&tag) {
            tags.push(tag);
        }
    }

    /// Merge override entries from a plain-text file: one entry per line,
    /// `TYPE<TAB>canonical<TAB>variant1|variant2|...`.
    pub fn load_overrides(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || {
                TemporalError::UnsupportedValueForm(format!(
                    "lexicon override line {}: {line}",
                    lineno + 1
                ))
            };
            let mut parts = line.split('\t');
            let ty = TagType::from_name(parts.next().ok_or_else(bad)?).ok_or_else(bad)?;
            let canonical = parts.next().ok_or_else(bad)?;
            let variants = parts.next().ok_or_else(bad)?;
            let value = match ty {
                TagType::TimeUnit => {
                    TagValue::Unit(TimeUnit::from_name(canonical).ok_or_else(bad)?)
                }
                TagType::InEq => TagValue::None,
                _ => TagValue::Enum(EnumConst::from_name(canonical).ok_or_else(bad)?),
            };
            let tag = Tag { ty, value };
            for variant in variants.split('|') {
                let variant = variant.trim().to_lowercase();
                if variant.contains(' ') {
                    self.phrases
                        .push((variant.split(' ').map(str::to_string).collect(), tag));
                } else {
                    self.insert(&variant, tag);
                }
            }
        }
        self.phrases.sort_by_key(|(w, _)| std::cmp::Reverse(w.len()));
        Ok(())
    }

    /// Replace the stop-word list with the file's contents (one per line).
    pub fn load_stop_words(&mut self, text: &str) {
        self.stop_words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
    }

    pub fn is_stopword(&self, token: &Token) -> bool {
        self.stop_words.contains(&token.surface)
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let text = text.to_lowercase();
        // Raw scan: word / digit / punctuation runs with byte offsets.
        let mut raw: Vec<(String, TokenKind, usize, usize)> = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some(&(start, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c.is_alphabetic() {
                let mut end = start;
                let mut s = String::new();
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_alphabetic() {
                        s.push(c);
                        end = i + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                raw.push((s, TokenKind::Word, start, end));
            } else if c.is_ascii_digit() {
                let mut end = start;
                let mut s = String::new();
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        end = i + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let value = s.parse::<i64>().unwrap_or(0);
                raw.push((s, TokenKind::Number { value, style: NumberStyle::Digits }, start, end));
            } else {
                let mut s = String::new();
                s.push(c);
                raw.push((s, TokenKind::Punct, start, start + c.len_utf8()));
                chars.next();
            }
        }

        // Adjacency-dependent merges: ordinal suffixes ("2nd"), lexicon
        // abbreviations with a trailing period ("oct."), hyphenated number
        // words ("twenty-one").
        let mut merged: Vec<(String, TokenKind)> = Vec::new();
        let mut i = 0;
        while i < raw.len() {
            let (ref s, ref kind, _, end) = raw[i];
            if let TokenKind::Number { value, style: NumberStyle::Digits } = *kind {
                if i + 1 < raw.len()
                    && raw[i + 1].2 == end
                    && matches!(raw[i + 1].0.as_str(), "st" | "nd" | "rd" | "th")
                {
                    merged.push((
                        format!("{s}{}", raw[i + 1].0),
                        TokenKind::Number { value, style: NumberStyle::Ordinal },
                    ));
                    i += 2;
                    continue;
                }
            }
            if *kind == TokenKind::Word {
                if i + 1 < raw.len() && raw[i + 1].0 == "." && raw[i + 1].2 == end {
                    let dotted = format!("{s}.");
                    if self.entries.contains_key(&dotted) {
                        merged.push((dotted, TokenKind::Word));
                        i += 2;
                        continue;
                    }
                }
                if i + 2 < raw.len()
                    && raw[i + 1].0 == "-"
                    && raw[i + 1].2 == end
                    && raw[i + 2].2 == raw[i + 1].3
                {
                    let tens = self.cardinals.get(s).copied().filter(|v| v % 10 == 0);
                    let unit_word = &raw[i + 2].0;
                    let unit = self
                        .cardinals
                        .get(unit_word)
                        .map(|&v| (v, NumberStyle::Cardinal))
                        .or_else(|| {
                            self.ordinals.get(unit_word).map(|&v| (v, NumberStyle::Ordinal))
                        });
                    if let (Some(tens), Some((unit, style))) = (tens, unit) {
                        if (1..=9).contains(&unit) {
                            merged.push((
                                format!("{s}-{unit_word}"),
                                TokenKind::Number { value: tens + unit, style },
                            ));
                            i += 3;
                            continue;
                        }
                    }
                }
            }
            merged.push((s.clone(), kind.clone()));
            i += 1;
        }

        // Number words.
        let mut tokens: Vec<Token> = merged
            .into_iter()
            .map(|(surface, kind)| {
                let kind = if kind == TokenKind::Word {
                    if let Some(&v) = self.cardinals.get(&surface) {
                        TokenKind::Number { value: v, style: NumberStyle::Cardinal }
                    } else if let Some(&v) = self.ordinals.get(&surface) {
                        TokenKind::Number { value: v, style: NumberStyle::Ordinal }
                    } else {
                        TokenKind::Word
                    }
                } else {
                    kind
                };
                Token { surface, kind, tags: Vec::new() }
            })
            .collect();

        // Multiword phrases collapse into one token, surfaces joined by `_`
        // so space-separated pattern files stay unambiguous.
        let mut out: Vec<Token> = Vec::new();
        let mut i = 0;
        'outer: while i < tokens.len() {
            for (words, tag) in &self.phrases {
                if tokens.len() - i >= words.len()
                    && tokens[i..i + words.len()]
                        .iter()
                        .zip(words)
                        .all(|(t, w)| &t.surface == w)
                {
                    out.push(Token {
                        surface: words.join("_"),
                        kind: TokenKind::Word,
                        tags: vec![*tag],
                    });
                    i += words.len();
                    continue 'outer;
                }
            }
            let mut t = tokens[i].clone();
            if let Some(tags) = self.entries.get(&t.surface) {
                t.tags = tags.clone();
            }
            out.push(t);
            i += 1;
        }
        tokens = out;

        // "a"/"an" reads as the number one directly before a time unit.
        for i in 0..tokens.len() {
            if matches!(tokens[i].surface.as_str(), "a" | "an")
                && tokens
                    .get(i + 1)
                    .is_some_and(|n| n.tag(TagType::TimeUnit).is_some())
            {
                tokens[i].kind = TokenKind::Number { value: 1, style: NumberStyle::Cardinal };
            }
        }

        tokens
    }
}

/// One element of a surface pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternElem {
    Literal(String),
    /// `ty = None` denotes the implicit NUM type.
    Slot { ty: Option<TagType>, var: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pattern {
    pub elements: Vec<PatternElem>,
}

/// A value bound to a pattern variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Binding {
    Enum(EnumConst),
    Unit(TimeUnit),
    Num(i64),
}

pub type Bindings = BTreeMap<u8, Binding>;

impl Pattern {
    pub fn literal(tokens: &[Token]) -> Pattern {
        Pattern {
            elements: tokens
                .iter()
                .map(|t| PatternElem::Literal(t.surface.clone()))
                .collect(),
        }
    }

    pub fn variables(&self) -> Vec<u8> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                PatternElem::Slot { var, .. } => Some(*var),
                PatternElem::Literal(_) => None,
            })
            .collect()
    }

    /// Match against a full token slice, returning variable bindings.
    pub fn matches(&self, tokens: &[Token]) -> Option<Bindings> {
        if tokens.len() != self.elements.len() {
            return None;
        }
        let mut bindings = Bindings::new();
        for (elem, token) in self.elements.iter().zip(tokens) {
            match elem {
                PatternElem::Literal(s) => {
                    if &token.surface != s {
                        return None;
                    }
                }
                PatternElem::Slot { ty: None, var } => {
                    let v = token.number()?;
                    bindings.insert(*var, Binding::Num(v));
                }
                PatternElem::Slot { ty: Some(ty), var } => {
                    let value = token.tag(*ty)?;
                    let b = match value {
                        TagValue::Enum(e) => Binding::Enum(e),
                        TagValue::Unit(u) => Binding::Unit(u),
                        TagValue::None => return None,
                    };
                    bindings.insert(*var, b);
                }
            }
        }
        Some(bindings)
    }

    pub fn parse(text: &str) -> Result<Pattern> {
        let mut elements = Vec::new();
        for word in text.split(' ').filter(|w| !w.is_empty()) {
            if let Some((ty, var)) = word.rsplit_once(":$") {
                let var: u8 = var.parse().map_err(|_| {
                    TemporalError::UnsupportedValueForm(format!("bad pattern slot {word}"))
                })?;
                let ty = if ty == "NUM" {
                    None
                } else {
                    Some(TagType::from_name(ty).ok_or_else(|| {
                        TemporalError::UnsupportedValueForm(format!("bad pattern slot {word}"))
                    })?)
                };
                elements.push(PatternElem::Slot { ty, var });
            } else {
                elements.push(PatternElem::Literal(word.to_string()));
            }
        }
        Ok(Pattern { elements })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match e {
                PatternElem::Literal(s) => f.write_str(s)?,
                PatternElem::Slot { ty: Some(ty), var } => write!(f, "{}:${var}", ty.name())?,
                PatternElem::Slot { ty: None, var } => write!(f, "NUM:${var}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_and_tags_surface_forms() {
        let lex = Lexicon::default();
        let toks = lex.tokenize("last October");
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[0].surface, "last");
        assert!(toks[0].tags.is_empty());
        assert_eq!(
            toks[1].tag(TagType::Month),
            Some(TagValue::Enum(EnumConst::Month(10)))
        );

        let toks = lex.tokenize("7 days later");
        assert_eq!(toks[0].number(), Some(7));
        assert_eq!(toks[1].tag(TagType::TimeUnit), Some(TagValue::Unit(TimeUnit::Day)));
        assert_eq!(toks[2].surface, "later");
        assert!(toks[2].tags.is_empty());

        assert!(lex.tokenize("").is_empty());
    }

    #[test]
    fn merges_abbreviations_ordinals_and_hyphenated_numbers() {
        let lex = Lexicon::default();
        let toks = lex.tokenize("Oct. 2nd");
        assert_eq!(toks[0].surface, "oct.");
        assert_eq!(
            toks[0].tag(TagType::Month),
            Some(TagValue::Enum(EnumConst::Month(10)))
        );
        assert_eq!(
            toks[1].kind,
            TokenKind::Number { value: 2, style: NumberStyle::Ordinal }
        );

        let toks = lex.tokenize("twenty-one days");
        assert_eq!(toks[0].number(), Some(21));
        let toks = lex.tokenize("the twenty-first of May");
        assert_eq!(toks[1].number(), Some(21));
    }

    #[test]
    fn merges_in_eq_phrases() {
        let lex = Lexicon::default();
        let toks = lex.tokenize("no more than 3 days");
        assert_eq!(toks[0].surface, "no_more_than");
        assert_eq!(toks[0].tag(TagType::InEq), Some(TagValue::None));
        assert_eq!(toks[1].number(), Some(3));
    }

    #[test]
    fn article_before_unit_reads_as_one() {
        let lex = Lexicon::default();
        let toks = lex.tokenize("a year ago");
        assert_eq!(toks[0].number(), Some(1));
        let toks = lex.tokenize("a dog");
        assert_eq!(toks[0].number(), None);
    }

    #[test]
    fn stop_words_cover_the_fixed_list() {
        let lex = Lexicon::default();
        for (w, expect) in [("-", true), ("of", true), ("october", false), ("this", true)] {
            let t = &lex.tokenize(w)[0];
            assert_eq!(lex.is_stopword(t), expect, "{w}");
        }
    }

    #[test]
    fn patterns_match_and_bind() {
        let lex = Lexicon::default();
        let p = Pattern::parse("last MONTH:$1").unwrap();
        let b = p.matches(&lex.tokenize("last october")).unwrap();
        assert_eq!(b[&1], Binding::Enum(EnumConst::Month(10)));
        assert!(p.matches(&lex.tokenize("next october")).is_none());

        let p = Pattern::parse("last TIME_UNIT:$1").unwrap();
        let b = p.matches(&lex.tokenize("last year")).unwrap();
        assert_eq!(b[&1], Binding::Unit(TimeUnit::Year));

        let p = Pattern::parse("NUM:$1 TIME_UNIT:$2 later").unwrap();
        let b = p.matches(&lex.tokenize("7 days later")).unwrap();
        assert_eq!(b[&1], Binding::Num(7));
        assert_eq!(b[&2], Binding::Unit(TimeUnit::Day));
        assert_eq!(p.to_string(), "NUM:$1 TIME_UNIT:$2 later");
    }

    #[test]
    fn overrides_extend_the_lexicon() {
        let mut lex = Lexicon::default();
        lex.load_overrides("MONTH\tOctober\tokt|okt.\nIN_EQ\t-\troughly speaking\n")
            .unwrap();
        let toks = lex.tokenize("okt");
        assert_eq!(
            toks[0].tag(TagType::Month),
            Some(TagValue::Enum(EnumConst::Month(10)))
        );
        let toks = lex.tokenize("roughly speaking");
        assert_eq!(toks[0].surface, "roughly_speaking");

        lex.load_stop_words("the\nof\n");
        let t = &lex.tokenize("this")[0];
        assert!(!lex.is_stopword(t));
    }
}
