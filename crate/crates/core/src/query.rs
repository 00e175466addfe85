//! Literals, queries, redescriptions and the accuracy measure.
//!
//! A query is an ordered, non-empty fold of literals: the first literal's
//! support, then for each subsequent `(connective, literal)` an intersection
//! (`&`) or union (`|`) applied to the accumulated support. There is no
//! operator precedence and no parenthesisation; evaluation is strictly
//! left-to-right, which is exactly the shape greedy extension produces.

use crate::bitset::Bitset;
use crate::data::{literal_support, DataTable};
use crate::error::Error;
use std::cmp::Ordering;
use std::fmt;

/// Predicate on a single attribute.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// Boolean column is true.
    BoolTrue,
    /// Value is one of the listed categories. Kept sorted and deduplicated.
    InCategories(Vec<String>),
    /// Inclusive numerical interval; at least one bound is present.
    Interval { lo: Option<f64>, hi: Option<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    pub attribute: String,
    pub predicate: Predicate,
}

impl Literal {
    pub fn boolean(attribute: impl Into<String>) -> Self {
        Literal {
            attribute: attribute.into(),
            predicate: Predicate::BoolTrue,
        }
    }

    pub fn categories<S: Into<String>>(
        attribute: impl Into<String>,
        cats: impl IntoIterator<Item = S>,
    ) -> Self {
        let mut cats: Vec<String> = cats.into_iter().map(Into::into).collect();
        cats.sort();
        cats.dedup();
        Literal {
            attribute: attribute.into(),
            predicate: Predicate::InCategories(cats),
        }
    }

    pub fn interval(attribute: impl Into<String>, lo: Option<f64>, hi: Option<f64>) -> Self {
        debug_assert!(lo.is_some() || hi.is_some());
        Literal {
            attribute: attribute.into(),
            predicate: Predicate::Interval { lo, hi },
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.predicate {
            Predicate::BoolTrue => write!(f, "[{}]", self.attribute),
            Predicate::InCategories(cats) => {
                write!(f, "[{} in {{{}}}]", self.attribute, cats.join(","))
            }
            Predicate::Interval { lo, hi } => match (lo, hi) {
                (Some(lo), Some(hi)) => write!(f, "[{} <= {} <= {}]", lo, self.attribute, hi),
                (Some(lo), None) => write!(f, "[{} <= {}]", lo, self.attribute),
                (None, Some(hi)) => write!(f, "[{} <= {}]", self.attribute, hi),
                (None, None) => unreachable!("interval literal without bounds"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    fn symbol(&self) -> char {
        match self {
            Connective::And => '&',
            Connective::Or => '|',
        }
    }
}

/// Ordered fold of literals; the first element carries no connective.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub first: Literal,
    pub rest: Vec<(Connective, Literal)>,
}

impl Query {
    pub fn single(literal: Literal) -> Self {
        Query {
            first: literal,
            rest: Vec::new(),
        }
    }

    pub fn extended(&self, connective: Connective, literal: Literal) -> Self {
        let mut q = self.clone();
        q.rest.push((connective, literal));
        q
    }

    pub fn literal_count(&self) -> usize {
        1 + self.rest.len()
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        std::iter::once(&self.first).chain(self.rest.iter().map(|(_, l)| l))
    }

    /// Left-to-right fold: intersect on AND, union on OR.
    pub fn eval(&self, table: &DataTable) -> Result<Bitset, Error> {
        let mut acc = literal_support(&self.first, table)?;
        for (conn, lit) in &self.rest {
            let supp = literal_support(lit, table)?;
            acc = match conn {
                Connective::And => acc.and(&supp),
                Connective::Or => acc.or(&supp),
            };
        }
        Ok(acc)
    }

    /// Canonical rendering; `parse` accepts everything `format` emits.
    pub fn format(&self) -> String {
        let mut out = self.first.to_string();
        for (conn, lit) in &self.rest {
            out.push(' ');
            out.push(conn.symbol());
            out.push(' ');
            out.push_str(&lit.to_string());
        }
        out
    }

    /// Parse against a table, validating attribute names, kinds and
    /// category alphabets.
    pub fn parse(input: &str, table: &DataTable) -> Result<Query, Error> {
        let query = Query::parse_syntax(input)?;
        for lit in query.literals() {
            validate_literal(lit, table, input)?;
        }
        Ok(query)
    }

    /// Purely syntactic parse, used where no table is at hand (e.g. when
    /// joining result files by attribute).
    pub fn parse_syntax(input: &str) -> Result<Query, Error> {
        parser::parse(input)
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

fn validate_literal(lit: &Literal, table: &DataTable, input: &str) -> Result<(), Error> {
    let pos = input.find(lit.attribute.as_str()).unwrap_or(0);
    let column = table
        .column(&lit.attribute)
        .ok_or_else(|| Error::UnknownAttribute(lit.attribute.clone()))?;
    match (&lit.predicate, column.kind_name()) {
        (Predicate::BoolTrue, "boolean") => Ok(()),
        (Predicate::InCategories(cats), "categorical") => {
            let alphabet = column.alphabet().expect("categorical column");
            for c in cats {
                if !alphabet.iter().any(|a| a == c) {
                    return Err(Error::Grammar {
                        position: pos,
                        message: format!(
                            "unknown category `{c}` for attribute `{}`",
                            lit.attribute
                        ),
                    });
                }
            }
            Ok(())
        }
        (Predicate::Interval { .. }, "numerical") => Ok(()),
        (_, found) => Err(Error::KindMismatch {
            attribute: lit.attribute.clone(),
            expected: match lit.predicate {
                Predicate::BoolTrue => "boolean",
                Predicate::InCategories(_) => "categorical",
                Predicate::Interval { .. } => "numerical",
            },
            found,
        }),
    }
}

mod parser {
    use super::{Connective, Error, Literal, Query};

    struct Scanner<'a> {
        input: &'a str,
        pos: usize,
    }

    #[derive(Debug, PartialEq)]
    enum Token<'a> {
        Open,
        Close,
        BraceOpen,
        BraceClose,
        Comma,
        And,
        Or,
        Le,
        Ge,
        Word(&'a str),
    }

    impl<'a> Scanner<'a> {
        fn new(input: &'a str) -> Self {
            Scanner { input, pos: 0 }
        }

        fn error(&self, message: impl Into<String>) -> Error {
            Error::Grammar {
                position: self.pos,
                message: message.into(),
            }
        }

        fn skip_ws(&mut self) {
            let rest = &self.input[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
        }

        fn next_token(&mut self) -> Result<Token<'a>, Error> {
            self.skip_ws();
            let bytes = self.input.as_bytes();
            let Some(&b) = bytes.get(self.pos) else {
                return Err(self.error("unexpected end of input"));
            };
            let tok = match b {
                b'[' => Token::Open,
                b']' => Token::Close,
                b'{' => Token::BraceOpen,
                b'}' => Token::BraceClose,
                b',' => Token::Comma,
                b'&' => Token::And,
                b'|' => Token::Or,
                b'<' | b'>' => {
                    if bytes.get(self.pos + 1) != Some(&b'=') {
                        return Err(self.error("expected `<=` or `>=`"));
                    }
                    self.pos += 2;
                    return Ok(if b == b'<' { Token::Le } else { Token::Ge });
                }
                _ => {
                    let start = self.pos;
                    while self.pos < bytes.len() && !is_delimiter(bytes[self.pos]) {
                        self.pos += 1;
                    }
                    if self.pos == start {
                        return Err(self.error(format!("unexpected character `{}`", b as char)));
                    }
                    return Ok(Token::Word(&self.input[start..self.pos]));
                }
            };
            self.pos += 1;
            Ok(tok)
        }

        fn expect(&mut self, want: Token<'_>, what: &str) -> Result<(), Error> {
            let tok = self.next_token()?;
            if std::mem::discriminant(&tok) == std::mem::discriminant(&want) {
                Ok(())
            } else {
                Err(self.error(format!("expected {what}")))
            }
        }

        fn word(&mut self, what: &str) -> Result<&'a str, Error> {
            match self.next_token()? {
                Token::Word(w) => Ok(w),
                _ => Err(self.error(format!("expected {what}"))),
            }
        }

        fn at_end(&mut self) -> bool {
            self.skip_ws();
            self.pos == self.input.len()
        }
    }

    fn is_delimiter(b: u8) -> bool {
        matches!(
            b,
            b'[' | b']' | b'{' | b'}' | b',' | b'&' | b'|' | b'<' | b'>' | b'='
        ) || b.is_ascii_whitespace()
    }

    fn as_number(word: &str) -> Option<f64> {
        word.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    pub(super) fn parse(input: &str) -> Result<Query, Error> {
        let mut sc = Scanner::new(input);
        let first = literal(&mut sc)?;
        let mut rest = Vec::new();
        while !sc.at_end() {
            let conn = match sc.next_token()? {
                Token::And => Connective::And,
                Token::Or => Connective::Or,
                _ => return Err(sc.error("expected `&` or `|`")),
            };
            rest.push((conn, literal(&mut sc)?));
        }
        Ok(Query { first, rest })
    }

    fn literal(sc: &mut Scanner) -> Result<Literal, Error> {
        sc.expect(Token::Open, "`[`")?;
        let w = sc.word("attribute name or number")?;
        if let Some(lo) = as_number(w) {
            // `[x <= NAME]` or `[x <= NAME <= y]`
            sc.expect(Token::Le, "`<=`")?;
            let name = sc.word("attribute name")?;
            match sc.next_token()? {
                Token::Close => Ok(Literal::interval(name, Some(lo), None)),
                Token::Le => {
                    let hi = sc.word("number")?;
                    let hi = as_number(hi).ok_or_else(|| sc.error("expected number"))?;
                    sc.expect(Token::Close, "`]`")?;
                    Ok(Literal::interval(name, Some(lo), Some(hi)))
                }
                _ => Err(sc.error("expected `<=` or `]`")),
            }
        } else {
            let name = w;
            match sc.next_token()? {
                Token::Close => Ok(Literal::boolean(name)),
                Token::Le => {
                    let hi = sc.word("number")?;
                    let hi = as_number(hi).ok_or_else(|| sc.error("expected number"))?;
                    sc.expect(Token::Close, "`]`")?;
                    Ok(Literal::interval(name, None, Some(hi)))
                }
                Token::Ge => {
                    // accepted as input, rendered canonically as `[x <= NAME]`
                    let lo = sc.word("number")?;
                    let lo = as_number(lo).ok_or_else(|| sc.error("expected number"))?;
                    sc.expect(Token::Close, "`]`")?;
                    Ok(Literal::interval(name, Some(lo), None))
                }
                Token::Word("in") => {
                    sc.expect(Token::BraceOpen, "`{`")?;
                    let mut cats = vec![sc.word("category")?.to_string()];
                    loop {
                        match sc.next_token()? {
                            Token::Comma => cats.push(sc.word("category")?.to_string()),
                            Token::BraceClose => break,
                            _ => return Err(sc.error("expected `,` or `}`")),
                        }
                    }
                    sc.expect(Token::Close, "`]`")?;
                    Ok(Literal::categories(name, cats))
                }
                _ => Err(sc.error("expected `]`, `<=`, `>=` or `in`")),
            }
        }
    }
}

/// Counts of the four support cells of a redescription: both queries,
/// left only, right only, neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    pub e11: usize,
    pub e10: usize,
    pub e01: usize,
    pub e00: usize,
}

impl Partition {
    pub fn total(&self) -> usize {
        self.e11 + self.e10 + self.e01 + self.e00
    }

    fn denominator(&self) -> usize {
        self.e11 + self.e10 + self.e01
    }

    /// Jaccard accuracy E11/(E11+E10+E01), with 0/0 defined as 0.
    pub fn accuracy(&self) -> f64 {
        let den = self.denominator();
        if den == 0 {
            0.0
        } else {
            self.e11 as f64 / den as f64
        }
    }

    /// Exact rational comparison of accuracies, avoiding float rounding.
    pub fn cmp_accuracy(&self, other: &Partition) -> Ordering {
        let (n1, d1) = (self.e11 as u128, self.denominator() as u128);
        let (n2, d2) = (other.e11 as u128, other.denominator() as u128);
        match (d1, d2) {
            (0, 0) => Ordering::Equal,
            (0, _) => (0u128).cmp(&n2), // 0 vs other
            (_, 0) => n1.cmp(&0),
            _ => (n1 * d2).cmp(&(n2 * d1)),
        }
    }

    /// `accuracy >= floor`, evaluated without dividing so the boundary
    /// case is exact whenever `floor * denominator` is.
    pub fn accuracy_at_least(&self, floor: f64) -> bool {
        self.e11 as f64 >= floor * self.denominator() as f64
    }
}

/// Partition counts of two supports over the same universe.
pub fn support_partition(lsupp: &Bitset, rsupp: &Bitset) -> Result<Partition, Error> {
    let e11 = lsupp.try_intersection_count(rsupp)?;
    let e10 = lsupp.count_ones() - e11;
    let e01 = rsupp.count_ones() - e11;
    let e00 = lsupp.len() - e11 - e10 - e01;
    Ok(Partition { e11, e10, e01, e00 })
}

/// User constraints on mined redescriptions. `min_supp` and `min_out`
/// are entity counts; `max_length` bounds the total number of literals
/// across both queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints {
    pub min_supp: usize,
    pub min_out: usize,
    pub min_accuracy: f64,
    pub max_length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintViolation {
    MinSupp,
    MinOut,
    MinAccuracy,
    MaxLength,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintViolation::MinSupp => "minsupp",
            ConstraintViolation::MinOut => "minout",
            ConstraintViolation::MinAccuracy => "min_accuracy",
            ConstraintViolation::MaxLength => "max_length",
        })
    }
}

impl Constraints {
    /// All thresholds are inclusive.
    pub fn check(
        &self,
        partition: &Partition,
        literal_count: usize,
    ) -> Result<(), ConstraintViolation> {
        if partition.e11 < self.min_supp {
            return Err(ConstraintViolation::MinSupp);
        }
        if partition.e00 < self.min_out {
            return Err(ConstraintViolation::MinOut);
        }
        if !partition.accuracy_at_least(self.min_accuracy) {
            return Err(ConstraintViolation::MinAccuracy);
        }
        if literal_count > self.max_length {
            return Err(ConstraintViolation::MaxLength);
        }
        Ok(())
    }

    pub fn satisfies(&self, partition: &Partition, literal_count: usize) -> bool {
        self.check(partition, literal_count).is_ok()
    }
}

/// A pair of queries over the two tables with its support partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Redescription {
    pub lquery: Query,
    pub rquery: Query,
    pub partition: Partition,
}

impl Redescription {
    pub fn accuracy(&self) -> f64 {
        self.partition.accuracy()
    }

    pub fn literal_count(&self) -> usize {
        self.lquery.literal_count() + self.rquery.literal_count()
    }
}
