//! Two-sided tabular data: loading, validation, equal-height
//! discretisation and literal supports.
//!
//! Entity identity is row order; the two tables must cover the identical
//! universe and are never joined by key. Tables are immutable once loaded.

use crate::bitset::Bitset;
use crate::error::Error;
use crate::query::{Literal, Predicate};
use rustc_hash::FxHashMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// The shared, ordered entity universe. Identities are row indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntityUniverse {
    pub count: usize,
}

impl EntityUniverse {
    pub fn ids(&self) -> std::ops::Range<usize> {
        0..self.count
    }
}

/// Declared kind of one attribute, from the schema sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnKind {
    Boolean {
        true_token: String,
        false_token: String,
    },
    Categorical,
    Numerical,
}

/// Schema sidecar: one line per attribute, `NAME KIND [TRUE [FALSE]]`,
/// `#` starts a comment. The token pair applies to boolean columns and
/// defaults to `1` / `0`.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    kinds: FxHashMap<String, ColumnKind>,
}

impl Schema {
    pub fn new() -> Self {
        Schema::default()
    }

    pub fn declare(&mut self, name: impl Into<String>, kind: ColumnKind) {
        self.kinds.insert(name.into(), kind);
    }

    pub fn kind(&self, name: &str) -> Option<&ColumnKind> {
        self.kinds.get(name)
    }

    pub fn parse(text: &str) -> Result<Schema, Error> {
        let mut schema = Schema::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let name = parts.next().unwrap().to_string();
            validate_name(&name, lineno + 1)?;
            let kind = match parts.next() {
                Some("boolean") => ColumnKind::Boolean {
                    true_token: parts.next().unwrap_or("1").to_string(),
                    false_token: parts.next().unwrap_or("0").to_string(),
                },
                Some("categorical") => ColumnKind::Categorical,
                Some("numerical") => ColumnKind::Numerical,
                other => {
                    return Err(Error::Parse {
                        row: lineno + 1,
                        column: name,
                        message: format!(
                            "expected kind boolean|categorical|numerical, got {:?}",
                            other.unwrap_or("")
                        ),
                    })
                }
            };
            if let ColumnKind::Boolean {
                true_token,
                false_token,
            } = &kind
            {
                if true_token == false_token {
                    return Err(Error::Parse {
                        row: lineno + 1,
                        column: name,
                        message: "boolean true and false tokens must differ".into(),
                    });
                }
            }
            schema.declare(name, kind);
        }
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Schema, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Schema::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut names: Vec<&String> = self.kinds.keys().collect();
        names.sort();
        let mut out = String::new();
        for name in names {
            match &self.kinds[name] {
                ColumnKind::Boolean {
                    true_token,
                    false_token,
                } => out.push_str(&format!("{name} boolean {true_token} {false_token}\n")),
                ColumnKind::Categorical => out.push_str(&format!("{name} categorical\n")),
                ColumnKind::Numerical => out.push_str(&format!("{name} numerical\n")),
            }
        }
        out
    }
}

/// Attribute names double as query-grammar tokens, so they must not
/// collide with delimiters or parse as numbers.
fn validate_name(name: &str, row: usize) -> Result<(), Error> {
    let bad = |message: String| Error::Parse {
        row,
        column: name.to_string(),
        message,
    };
    if name.is_empty() {
        return Err(bad("empty attribute name".into()));
    }
    if name
        .chars()
        .any(|c| c.is_whitespace() || "[]{}<>=&|,".contains(c))
    {
        return Err(bad("attribute name contains a reserved character".into()));
    }
    if name.parse::<f64>().is_ok() {
        return Err(bad("attribute name must not look like a number".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub enum ColumnData {
    Boolean(Bitset),
    Categorical {
        /// Per-row index into `alphabet`.
        codes: Vec<u32>,
        /// Sorted distinct labels observed in the column.
        alphabet: Vec<String>,
    },
    Numerical {
        values: Vec<f64>,
        /// Row indices sorted by value (ties by row), the backbone of
        /// discretisation and interval supports.
        sorted_rows: Vec<u32>,
    },
}

#[derive(Debug, Clone)]
pub struct AttributeColumn {
    pub name: String,
    pub data: ColumnData,
    bool_tokens: Option<(String, String)>,
}

impl AttributeColumn {
    pub fn boolean(name: impl Into<String>, bits: Bitset) -> Self {
        AttributeColumn {
            name: name.into(),
            data: ColumnData::Boolean(bits),
            bool_tokens: Some(("1".into(), "0".into())),
        }
    }

    pub fn categorical<S: AsRef<str>>(name: impl Into<String>, labels: &[S]) -> Self {
        let mut alphabet: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        alphabet.sort();
        alphabet.dedup();
        let codes = labels
            .iter()
            .map(|s| {
                alphabet
                    .binary_search_by(|a| a.as_str().cmp(s.as_ref()))
                    .unwrap() as u32
            })
            .collect();
        AttributeColumn {
            name: name.into(),
            data: ColumnData::Categorical { codes, alphabet },
            bool_tokens: None,
        }
    }

    pub fn numerical(name: impl Into<String>, values: Vec<f64>) -> Self {
        let mut sorted_rows: Vec<u32> = (0..values.len() as u32).collect();
        sorted_rows.sort_by(|&a, &b| values[a as usize].total_cmp(&values[b as usize]));
        AttributeColumn {
            name: name.into(),
            data: ColumnData::Numerical {
                values,
                sorted_rows,
            },
            bool_tokens: None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Boolean(b) => b.len(),
            ColumnData::Categorical { codes, .. } => codes.len(),
            ColumnData::Numerical { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.data {
            ColumnData::Boolean(_) => "boolean",
            ColumnData::Categorical { .. } => "categorical",
            ColumnData::Numerical { .. } => "numerical",
        }
    }

    pub fn alphabet(&self) -> Option<&[String]> {
        match &self.data {
            ColumnData::Categorical { alphabet, .. } => Some(alphabet),
            _ => None,
        }
    }

    /// Support of one category, by alphabet index.
    pub fn category_support(&self, code: u32) -> Option<Bitset> {
        match &self.data {
            ColumnData::Categorical { codes, .. } => Some(Bitset::from_indices(
                codes.len(),
                codes
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == code)
                    .map(|(i, _)| i),
            )),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DataTable {
    pub side: Side,
    pub columns: Vec<AttributeColumn>,
    rows: usize,
    by_name: FxHashMap<String, usize>,
}

impl DataTable {
    pub fn new(side: Side, columns: Vec<AttributeColumn>) -> Result<DataTable, Error> {
        let rows = columns.first().map_or(0, |c| c.len());
        let mut by_name = FxHashMap::default();
        for (i, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::ShapeMismatch {
                    left: rows,
                    right: col.len(),
                });
            }
            if by_name.insert(col.name.clone(), i).is_some() {
                return Err(Error::Parse {
                    row: 0,
                    column: col.name.clone(),
                    message: "duplicate column name".into(),
                });
            }
        }
        Ok(DataTable {
            side,
            columns,
            rows,
            by_name,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn column(&self, name: &str) -> Option<&AttributeColumn> {
        self.by_name.get(name).map(|&i| &self.columns[i])
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Write the table back out; `load_csv` on the result reproduces every
    /// literal support exactly (numeric cells use the shortest round-trip
    /// representation).
    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })?;
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        w.write_record(&names).map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })?;
        let mut record = Vec::with_capacity(self.columns.len());
        for row in 0..self.rows {
            record.clear();
            for col in &self.columns {
                let cell = match &col.data {
                    ColumnData::Boolean(bits) => {
                        let (t, f) = col
                            .bool_tokens
                            .clone()
                            .unwrap_or_else(|| ("1".into(), "0".into()));
                        if bits.get(row) {
                            t
                        } else {
                            f
                        }
                    }
                    ColumnData::Categorical { codes, alphabet } => {
                        alphabet[codes[row] as usize].clone()
                    }
                    ColumnData::Numerical { values, .. } => format!("{}", values[row]),
                };
                record.push(cell);
            }
            w.write_record(&record).map_err(|e| Error::Csv {
                path: path.display().to_string(),
                source: e,
            })?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// Load one side. Row order defines the entity universe.
pub fn load_csv(path: &Path, side: Side, schema: &Schema) -> Result<DataTable, Error> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();

    let mut kinds = Vec::with_capacity(headers.len());
    for name in &headers {
        validate_name(name, 0)?;
        let kind = schema.kind(name).ok_or_else(|| Error::Parse {
            row: 0,
            column: name.clone(),
            message: "attribute missing from schema".into(),
        })?;
        kinds.push(kind.clone());
    }

    enum Builder {
        Boolean(Vec<bool>),
        Categorical(Vec<String>),
        Numerical(Vec<f64>),
    }
    let mut builders: Vec<Builder> = kinds
        .iter()
        .map(|k| match k {
            ColumnKind::Boolean { .. } => Builder::Boolean(Vec::new()),
            ColumnKind::Categorical => Builder::Categorical(Vec::new()),
            ColumnKind::Numerical => Builder::Numerical(Vec::new()),
        })
        .collect();

    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e,
        })?;
        for (c, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            let cell_err = |message: String| Error::Parse {
                row,
                column: headers[c].clone(),
                message,
            };
            match (&mut builders[c], &kinds[c]) {
                (
                    Builder::Boolean(v),
                    ColumnKind::Boolean {
                        true_token,
                        false_token,
                    },
                ) => {
                    if cell == true_token {
                        v.push(true);
                    } else if cell == false_token {
                        v.push(false);
                    } else {
                        return Err(cell_err(format!(
                            "expected `{true_token}` or `{false_token}`, got `{cell}`"
                        )));
                    }
                }
                (Builder::Categorical(v), _) => {
                    if cell.is_empty() {
                        return Err(cell_err("missing category label".into()));
                    }
                    if cell.chars().any(|ch| "[]{}<>=&|,".contains(ch)) {
                        return Err(cell_err(format!(
                            "category label `{cell}` contains a reserved character"
                        )));
                    }
                    v.push(cell.to_string());
                }
                (Builder::Numerical(v), _) => {
                    let value: f64 = cell
                        .parse()
                        .map_err(|_| cell_err(format!("not a number: `{cell}`")))?;
                    if !value.is_finite() {
                        return Err(cell_err(format!("non-finite value `{cell}`")));
                    }
                    v.push(value);
                }
                _ => unreachable!("builder and kind are constructed together"),
            }
        }
    }

    let mut columns = Vec::with_capacity(headers.len());
    for (name, builder) in headers.into_iter().zip(builders) {
        let column = match builder {
            Builder::Boolean(v) => {
                let bits = Bitset::from_indices(
                    v.len(),
                    v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
                );
                let mut col = AttributeColumn::boolean(name.clone(), bits);
                if let Some(ColumnKind::Boolean {
                    true_token,
                    false_token,
                }) = schema.kind(&name)
                {
                    col.bool_tokens = Some((true_token.clone(), false_token.clone()));
                }
                col
            }
            Builder::Categorical(v) => AttributeColumn::categorical(name, &v),
            Builder::Numerical(v) => AttributeColumn::numerical(name, v),
        };
        columns.push(column);
    }
    DataTable::new(side, columns)
}

/// Both sides over one universe.
#[derive(Debug, Clone)]
pub struct Tables {
    pub left: DataTable,
    pub right: DataTable,
}

impl Tables {
    pub fn new(left: DataTable, right: DataTable) -> Result<Tables, Error> {
        if left.rows() != right.rows() {
            return Err(Error::ShapeMismatch {
                left: left.rows(),
                right: right.rows(),
            });
        }
        Ok(Tables { left, right })
    }

    pub fn load(left: &Path, right: &Path, schema: &Schema) -> Result<Tables, Error> {
        Tables::new(
            load_csv(left, Side::Left, schema)?,
            load_csv(right, Side::Right, schema)?,
        )
    }

    pub fn universe(&self) -> EntityUniverse {
        EntityUniverse {
            count: self.left.rows(),
        }
    }

    pub fn rows(&self) -> usize {
        self.left.rows()
    }

    pub fn side(&self, side: Side) -> &DataTable {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// Equal-height bucketing of one numerical column.
///
/// Buckets are contiguous runs of the value-sorted rows, targeting
/// `ceil(n / nbuk)` rows each; a run of equal values is never split, so
/// buckets may be unequal and fewer than `nbuk`. `edges[0]` is the column
/// minimum and `edges[k]` the maximum value inside bucket `k-1`, which
/// anchors every interval literal at observed values.
#[derive(Debug, Clone)]
pub struct Bucketing {
    edges: Vec<f64>,
    /// Minimum value inside each bucket; interval literals for a bucket
    /// range open at this value so that equal values stay together and
    /// inclusive bounds reproduce the bucket union exactly.
    mins: Vec<f64>,
    /// Bucket boundaries as positions into the column's sorted row order;
    /// bucket `k` covers `sorted_rows[pos[k]..pos[k+1]]`.
    pos: Vec<usize>,
}

impl Bucketing {
    /// `nbuk >= 1`, column non-empty.
    pub fn equal_height(column: &AttributeColumn, nbuk: usize) -> Result<Bucketing, Error> {
        let ColumnData::Numerical {
            values,
            sorted_rows,
        } = &column.data
        else {
            return Err(Error::KindMismatch {
                attribute: column.name.clone(),
                expected: "numerical",
                found: column.kind_name(),
            });
        };
        if nbuk == 0 {
            return Err(Error::InvalidParams("nbuk must be at least 1".into()));
        }
        let n = sorted_rows.len();
        if n == 0 {
            return Err(Error::InvalidParams(format!(
                "cannot discretise empty column `{}`",
                column.name
            )));
        }
        let target = n.div_ceil(nbuk);
        let value_at = |pos: usize| values[sorted_rows[pos] as usize];

        let mut pos = vec![0];
        let mut edges = vec![value_at(0)];
        let mut mins = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = (start + target).min(n);
            // never split a run of equal values across an edge
            while end < n && value_at(end) == value_at(end - 1) {
                end += 1;
            }
            mins.push(value_at(start));
            edges.push(value_at(end - 1));
            pos.push(end);
            start = end;
        }
        Ok(Bucketing { edges, mins, pos })
    }

    pub fn bucket_count(&self) -> usize {
        self.pos.len() - 1
    }

    /// Ascending bucket edges β₀..β_k.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Sorted-order positions covered by buckets `lo..hi` (half-open).
    pub fn range_positions(&self, lo: usize, hi: usize) -> (usize, usize) {
        (self.pos[lo], self.pos[hi])
    }

    pub fn range_count(&self, lo: usize, hi: usize) -> usize {
        self.pos[hi] - self.pos[lo]
    }

    pub fn bucket_len(&self, k: usize) -> usize {
        self.pos[k + 1] - self.pos[k]
    }

    /// Interval literal whose support is exactly the union of buckets
    /// `lo..hi`: inclusive bounds anchored at the first included bucket's
    /// minimum and the last included bucket's maximum.
    pub fn range_literal(&self, attribute: &str, lo: usize, hi: usize) -> Literal {
        debug_assert!(lo < hi && hi <= self.bucket_count());
        Literal {
            attribute: attribute.to_string(),
            predicate: Predicate::Interval {
                lo: Some(self.mins[lo]),
                hi: Some(self.edges[hi]),
            },
        }
    }

    /// Per-row bucket index for a column of `n` rows.
    pub fn row_assignment(&self, column: &AttributeColumn) -> Vec<u32> {
        let ColumnData::Numerical { sorted_rows, .. } = &column.data else {
            panic!("bucketing over a non-numerical column");
        };
        let mut assignment = vec![0u32; sorted_rows.len()];
        for k in 0..self.bucket_count() {
            for &row in &sorted_rows[self.pos[k]..self.pos[k + 1]] {
                assignment[row as usize] = k as u32;
            }
        }
        assignment
    }
}

/// Support of a literal: bit `i` set iff entity `i` satisfies it.
/// Interval bounds are inclusive.
pub fn literal_support(literal: &Literal, table: &DataTable) -> Result<Bitset, Error> {
    let column = table
        .column(&literal.attribute)
        .ok_or_else(|| Error::UnknownAttribute(literal.attribute.clone()))?;
    let mismatch = |expected: &'static str| Error::KindMismatch {
        attribute: literal.attribute.clone(),
        expected,
        found: column.kind_name(),
    };
    match (&literal.predicate, &column.data) {
        (Predicate::BoolTrue, ColumnData::Boolean(bits)) => Ok(bits.clone()),
        (Predicate::BoolTrue, _) => Err(mismatch("boolean")),
        (Predicate::InCategories(cats), ColumnData::Categorical { codes, alphabet }) => {
            let mut wanted = vec![false; alphabet.len()];
            for c in cats {
                if let Ok(i) = alphabet.binary_search_by(|a| a.as_str().cmp(c)) {
                    wanted[i] = true;
                }
            }
            Ok(Bitset::from_indices(
                codes.len(),
                codes
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| wanted[c as usize])
                    .map(|(i, _)| i),
            ))
        }
        (Predicate::InCategories(_), _) => Err(mismatch("categorical")),
        (
            Predicate::Interval { lo, hi },
            ColumnData::Numerical {
                values,
                sorted_rows,
            },
        ) => {
            let start = match lo {
                Some(lo) => sorted_rows.partition_point(|&r| values[r as usize] < *lo),
                None => 0,
            };
            let end = match hi {
                Some(hi) => sorted_rows.partition_point(|&r| values[r as usize] <= *hi),
                None => sorted_rows.len(),
            };
            Ok(Bitset::from_indices(
                values.len(),
                sorted_rows[start.min(end)..end].iter().map(|&r| r as usize),
            ))
        }
        (Predicate::Interval { .. }, _) => Err(mismatch("numerical")),
    }
}
