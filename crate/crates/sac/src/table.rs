//! A minimal named-column table with group-by and summarize.
//!
//! Just enough dataframe to express grouped aggregation: named columns of
//! equal length, a grouping step that indexes rows by key, and summarize /
//! aggregate-all steps that reduce value columns per group. Tables are
//! immutable; every operation builds a new one. Output rows are always in
//! ascending key order, matching how statistical environments print
//! grouped summaries.

use crate::agg::Aggregator;
use crate::engines;
use crate::error::{Error, Result};
use crate::types::{Key, KeyVector, OrderPolicy, ValueVector};

/// Column payload: grouping keys or numeric values.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Keys(KeyVector),
    Values(ValueVector),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Keys(k) => k.len(),
            ColumnData::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    data: ColumnData,
}

impl Column {
    pub fn new(name: impl Into<String>, data: ColumnData) -> Column {
        Column {
            name: name.into(),
            data,
        }
    }

    pub fn keys(name: impl Into<String>, keys: KeyVector) -> Column {
        Column::new(name, ColumnData::Keys(keys))
    }

    pub fn values(name: impl Into<String>, values: ValueVector) -> Column {
        Column::new(name, ColumnData::Values(values))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.data, ColumnData::Values(_))
    }
}

/// Ordered named columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<Column>,
    rows: usize,
}

impl Table {
    /// Builds a table, checking that lengths agree and names are nonempty
    /// and distinct. A table with no columns has zero rows.
    pub fn from_columns(columns: Vec<Column>) -> Result<Table> {
        let rows = columns.first().map_or(0, Column::len);
        for col in &columns {
            if col.name().is_empty() {
                return Err(Error::EmptyColumnName);
            }
            if col.len() != rows {
                return Err(Error::ShapeMismatch {
                    left: rows,
                    right: col.len(),
                });
            }
        }
        for (i, col) in columns.iter().enumerate() {
            if columns[..i].iter().any(|c| c.name() == col.name()) {
                return Err(Error::DuplicateColumn(col.name().to_string()));
            }
        }
        Ok(Table { columns, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::NoSuchColumn(name.to_string()))
    }

    /// The named column as keys.
    pub fn key_column(&self, name: &str) -> Result<&KeyVector> {
        match self.column(name)?.data() {
            ColumnData::Keys(k) => Ok(k),
            ColumnData::Values(_) => Err(Error::ColumnKindMismatch {
                name: name.to_string(),
                expected: "key",
            }),
        }
    }

    /// The named column as numeric values.
    pub fn value_column(&self, name: &str) -> Result<&[f64]> {
        match self.column(name)?.data() {
            ColumnData::Values(v) => Ok(v),
            ColumnData::Keys(_) => Err(Error::ColumnKindMismatch {
                name: name.to_string(),
                expected: "value",
            }),
        }
    }

    /// Indexes rows by the named key column, groups in ascending key order.
    pub fn group_by(&self, key: &str) -> Result<GroupedTable<'_>> {
        let keys = self.key_column(key)?;
        let groups = engines::group_row_indices(keys, OrderPolicy::SortedAscending);
        Ok(GroupedTable {
            base: self,
            key_name: key.to_string(),
            groups,
        })
    }

    /// Aggregates every non-key numeric column by the named key. The result
    /// keeps the key column's name and names each aggregate column
    /// `<column>_<aggregator>`.
    pub fn aggregate_all(&self, key: &str, agg: Aggregator) -> Result<Table> {
        let grouped = self.group_by(key)?;
        let value_names: Vec<&str> = self
            .columns
            .iter()
            .filter(|c| c.is_numeric() && c.name() != key)
            .map(Column::name)
            .collect();
        if value_names.is_empty() {
            return Err(Error::NoNumericColumns);
        }
        let mut out = vec![Column::keys(key, grouped.group_keys())];
        for name in value_names {
            let aggregates = grouped.fold_column(name, agg)?;
            out.push(Column::values(format!("{name}_{agg}"), aggregates));
        }
        Table::from_columns(out)
    }
}

/// A table plus a row index per distinct key. Borrows its base table; the
/// groups partition the base's row positions, positions increasing within
/// each group.
#[derive(Debug)]
pub struct GroupedTable<'a> {
    base: &'a Table,
    key_name: String,
    groups: Vec<(Key, Vec<usize>)>,
}

impl<'a> GroupedTable<'a> {
    pub fn base(&self) -> &'a Table {
        self.base
    }

    pub fn key_name(&self) -> &str {
        &self.key_name
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Distinct keys in group order.
    pub fn group_keys(&self) -> KeyVector {
        self.groups.iter().map(|(k, _)| k.clone()).collect()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|(_, rows)| rows.len()).collect()
    }

    /// Row positions per group, in group order.
    pub fn groups(&self) -> &[(Key, Vec<usize>)] {
        &self.groups
    }

    fn fold_column(&self, value: &str, agg: Aggregator) -> Result<ValueVector> {
        let col = self.base.value_column(value)?;
        self.groups
            .iter()
            .map(|(_, rows)| {
                let group: ValueVector = rows.iter().map(|&i| col[i]).collect();
                agg.fold(&group)
            })
            .collect()
    }

    /// Reduces the named value column per group into a two-column table:
    /// the key column (keeping its name) and `out_name`.
    pub fn summarize(&self, out_name: &str, agg: Aggregator, value: &str) -> Result<Table> {
        let aggregates = self.fold_column(value, agg)?;
        Table::from_columns(vec![
            Column::keys(self.key_name.clone(), self.group_keys()),
            Column::values(out_name, aggregates),
        ])
    }
}
