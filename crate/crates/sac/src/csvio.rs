//! CSV reading and writing, plus the text formatting shared by the CLI.
//!
//! The dialect is deliberately small: comma separator, one header row, no
//! quoting. Every value this library deals in (integers, floats, short
//! identifiers) prints without commas, so instead of a quoting convention
//! we reject cells that would need one. Floats are written in the shortest
//! form that parses back to the same bits, which makes write-then-read the
//! identity.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::table::{Column, Table};
use crate::types::{KeyVector, KeyedSummary};

fn csv_error(line: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        line,
        message: message.into(),
    }
}

/// Splits one line into cells. The caller strips line endings.
fn split_cells(line: &str) -> Vec<&str> {
    line.split(',').collect()
}

/// Reads header and rows, checking every row has the header's field count.
/// Lines are 1-based in errors; blank interior lines are rejected.
pub fn read_rows(reader: &mut dyn BufRead) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));

    let header_line = lines.next().ok_or_else(|| csv_error(1, "missing header row"))?;
    let header: Vec<String> = split_cells(header_line)
        .into_iter()
        .map(str::to_string)
        .collect();
    if header.iter().any(String::is_empty) {
        return Err(csv_error(1, "empty column name in header"));
    }

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let cells = split_cells(line);
        if cells.len() != header.len() {
            return Err(csv_error(
                lineno,
                format!("expected {} fields, got {}", header.len(), cells.len()),
            ));
        }
        rows.push(cells.into_iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

/// Integer keys when every cell parses as i64, byte-string labels otherwise.
pub fn parse_key_column(cells: &[String]) -> KeyVector {
    let ints: Option<Vec<i64>> = cells.iter().map(|c| c.parse::<i64>().ok()).collect();
    match ints {
        Some(ks) => KeyVector::Int(ks),
        None => KeyVector::Bytes(cells.iter().map(|c| c.as_bytes().to_vec()).collect()),
    }
}

fn parse_value_column(name: &str, cells: &[String]) -> Result<Vec<f64>> {
    cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.parse::<f64>().map_err(|_| {
                csv_error(i + 2, format!("column `{name}`: `{c}` is not a number"))
            })
        })
        .collect()
}

fn parse_subscript_column(name: &str, cells: &[String]) -> Result<Vec<usize>> {
    cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.parse::<usize>().map_err(|_| {
                csv_error(
                    i + 2,
                    format!("column `{name}`: `{c}` is not a nonnegative integer"),
                )
            })
        })
        .collect()
}

fn column_cells(rows: &[Vec<String>], j: usize) -> Vec<String> {
    rows.iter().map(|r| r[j].clone()).collect()
}

/// Reads a table. Columns named in `key_columns` parse as keys; every
/// other column must be numeric. Missing key columns are reported as
/// unknown columns.
pub fn read_table(reader: &mut dyn BufRead, key_columns: &[&str]) -> Result<Table> {
    let (header, rows) = read_rows(reader)?;
    for key in key_columns {
        if !header.iter().any(|h| h == key) {
            return Err(Error::NoSuchColumn(key.to_string()));
        }
    }
    let mut columns = Vec::with_capacity(header.len());
    for (j, name) in header.iter().enumerate() {
        let cells = column_cells(&rows, j);
        let column = if key_columns.contains(&name.as_str()) {
            Column::keys(name.clone(), parse_key_column(&cells))
        } else {
            Column::values(name.clone(), parse_value_column(name, &cells)?)
        };
        columns.push(column);
    }
    Table::from_columns(columns)
}

/// Reads subscript columns plus one value column. The value column is the
/// named one, or the last column when unnamed; all remaining columns are
/// subscripts in header order.
pub fn read_subscripts(
    reader: &mut dyn BufRead,
    value_column: Option<&str>,
) -> Result<(Vec<Vec<usize>>, Vec<f64>, Vec<String>)> {
    let (header, rows) = read_rows(reader)?;
    if header.len() < 2 {
        return Err(csv_error(
            1,
            "need at least one subscript column and one value column",
        ));
    }
    let value_idx = match value_column {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::NoSuchColumn(name.to_string()))?,
        None => header.len() - 1,
    };

    let values = parse_value_column(&header[value_idx], &column_cells(&rows, value_idx))?;
    let mut sub_columns = Vec::new();
    let mut sub_names = Vec::new();
    for (j, name) in header.iter().enumerate() {
        if j == value_idx {
            continue;
        }
        sub_columns.push(parse_subscript_column(name, &column_cells(&rows, j))?);
        sub_names.push(name.clone());
    }

    let sub_rows: Vec<Vec<usize>> = (0..rows.len())
        .map(|i| sub_columns.iter().map(|c| c[i]).collect())
        .collect();
    Ok((sub_rows, values, sub_names))
}

/// Shortest decimal form that parses back to the same f64.
pub fn format_float(v: f64) -> String {
    format!("{v}")
}

/// `v` to `sig` significant digits, in plain (non-exponent) notation.
pub fn format_significant(v: f64, sig: u32) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    // {:e} exposes the exact decimal exponent, avoiding log10 edge cases.
    let sci = format!("{v:e}");
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .expect("{:e} always contains an exponent")
        .parse()
        .expect("exponent is an integer");
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

fn check_cell(text: &str, what: &str) -> Result<()> {
    if text.contains(',') || text.contains('\n') || text.contains('\r') {
        return Err(csv_error(
            0,
            format!("{what} `{text}` contains a separator and this dialect has no quoting"),
        ));
    }
    Ok(())
}

/// Writes a summary as CSV with the header `key,<value_header>`.
pub fn write_summary_csv(
    writer: &mut dyn Write,
    summary: &KeyedSummary,
    value_header: &str,
) -> Result<()> {
    check_cell(value_header, "column name")?;
    writeln!(writer, "key,{value_header}")?;
    for (key, value) in summary.keys().keys().zip(summary.values()) {
        let key_text = key.to_string();
        check_cell(&key_text, "key")?;
        writeln!(writer, "{key_text},{}", format_float(*value))?;
    }
    Ok(())
}

/// Writes a summary as two right-aligned text columns, values shown to six
/// significant digits.
pub fn write_summary_text(
    writer: &mut dyn Write,
    summary: &KeyedSummary,
    value_header: &str,
) -> Result<()> {
    let keys: Vec<String> = summary.keys().keys().map(|k| k.to_string()).collect();
    let values: Vec<String> = summary
        .values()
        .iter()
        .map(|&v| format_significant(v, 6))
        .collect();
    let key_width = keys.iter().map(String::len).fold("key".len(), usize::max);
    let value_width = values
        .iter()
        .map(String::len)
        .fold(value_header.len(), usize::max);
    writeln!(writer, "{:>key_width$}  {:>value_width$}", "key", value_header)?;
    for (k, v) in keys.iter().zip(&values) {
        writeln!(writer, "{k:>key_width$}  {v:>value_width$}")?;
    }
    Ok(())
}

/// Reads back a two-column summary written by [`write_summary_csv`].
pub fn read_summary_csv(reader: &mut dyn BufRead) -> Result<KeyedSummary> {
    let (header, rows) = read_rows(reader)?;
    if header.len() != 2 || header[0] != "key" {
        return Err(csv_error(1, "expected a `key,<aggregate>` header"));
    }
    let keys = parse_key_column(&column_cells(&rows, 0));
    let values = parse_value_column(&header[1], &column_cells(&rows, 1))?;
    KeyedSummary::new(keys, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn cursor(s: &str) -> Cursor<&[u8]> {
        Cursor::new(s.as_bytes())
    }

    #[test]
    fn read_table_paper_shape() {
        let data = "userid,rating\n381,5\n1291,4\n3992,4\n193942,4\n9493,5\n\
                    381,5\n3992,5\n381,3\n3992,5\n193942,4\n";
        let t = read_table(&mut cursor(data), &["userid"]).unwrap();
        assert_eq!(t.n_rows(), 10);
        assert_eq!(
            t.key_column("userid").unwrap().as_ints().unwrap()[..3],
            [381, 1291, 3992]
        );
        assert_eq!(t.value_column("rating").unwrap()[9], 4.0);
    }

    #[test]
    fn read_table_header_only() {
        let t = read_table(&mut cursor("userid,rating\n"), &["userid"]).unwrap();
        assert_eq!(t.n_rows(), 0);
        assert_eq!(t.n_columns(), 2);
    }

    #[test]
    fn read_table_text_keys() {
        let t = read_table(&mut cursor("k,v\nalpha,1\n42,2\n"), &["k"]).unwrap();
        // One non-integer cell makes the whole column byte-string labels.
        assert_eq!(t.key_column("k").unwrap(), &KeyVector::from_labels(["alpha", "42"]));
    }

    #[test]
    fn read_table_errors() {
        assert!(matches!(
            read_table(&mut cursor(""), &["k"]),
            Err(Error::Csv { line: 1, .. })
        ));
        assert!(matches!(
            read_table(&mut cursor("k,v\n1,2,3\n"), &["k"]),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            read_table(&mut cursor("k,v\n1,notanumber\n"), &["k"]),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            read_table(&mut cursor("k,v\n1,2\n"), &["zzz"]),
            Err(Error::NoSuchColumn(_))
        ));
    }

    #[test]
    fn read_rows_handles_crlf() {
        let (header, rows) = read_rows(&mut cursor("a,b\r\n1,2\r\n")).unwrap();
        assert_eq!(header, vec!["a", "b"]);
        assert_eq!(rows, vec![vec!["1".to_string(), "2".to_string()]]);
    }

    #[test]
    fn read_subscripts_last_column_is_value() {
        let (subs, vals, names) =
            read_subscripts(&mut cursor("i,j,val\n1,2,0.5\n3,1,1.5\n"), None).unwrap();
        assert_eq!(subs, vec![vec![1, 2], vec![3, 1]]);
        assert_eq!(vals, vec![0.5, 1.5]);
        assert_eq!(names, vec!["i", "j"]);
    }

    #[test]
    fn read_subscripts_named_value() {
        let (subs, vals, _) =
            read_subscripts(&mut cursor("val,i\n0.5,1\n1.5,3\n"), Some("val")).unwrap();
        assert_eq!(subs, vec![vec![1], vec![3]]);
        assert_eq!(vals, vec![0.5, 1.5]);
    }

    #[test]
    fn read_subscripts_needs_two_columns() {
        assert!(matches!(
            read_subscripts(&mut cursor("v\n1\n"), None),
            Err(Error::Csv { line: 1, .. })
        ));
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [13.0 / 3.0, 0.1, -1.0 / 7.0, 1e300, 5.0, 0.0] {
            let text = format_float(v);
            assert_eq!(text.parse::<f64>().unwrap(), v, "{text}");
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(13.0 / 3.0, 6), "4.33333");
        assert_eq!(format_significant(14.0 / 3.0, 6), "4.66667");
        assert_eq!(format_significant(5.0, 6), "5.00000");
        assert_eq!(format_significant(193942.0, 6), "193942");
        assert_eq!(format_significant(0.000123456789, 6), "0.000123457");
        assert_eq!(format_significant(-13.0 / 3.0, 6), "-4.33333");
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(13.0 / 3.0, 5), "4.3333");
    }

    #[test]
    fn summary_csv_round_trip() {
        let summary = KeyedSummary::new(
            KeyVector::Int(vec![381, 1291, 3992]),
            vec![13.0 / 3.0, 4.0, 14.0 / 3.0],
        )
        .unwrap();
        let mut out = Vec::new();
        write_summary_csv(&mut out, &summary, "rating_mean").unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("key,rating_mean\n"));

        let back = read_summary_csv(&mut Cursor::new(text.as_bytes())).unwrap();
        assert_eq!(back.keys(), summary.keys());
        assert_eq!(back.values(), summary.values());
    }

    #[test]
    fn csv_rejects_embedded_commas() {
        let summary = KeyedSummary::new(
            KeyVector::from_labels(["a,b"]),
            vec![1.0],
        )
        .unwrap();
        let mut out = Vec::new();
        assert!(matches!(
            write_summary_csv(&mut out, &summary, "v"),
            Err(Error::Csv { .. })
        ));
    }

    #[test]
    fn text_output_is_aligned() {
        let summary = KeyedSummary::new(
            KeyVector::Int(vec![381, 193942]),
            vec![13.0 / 3.0, 4.0],
        )
        .unwrap();
        let mut out = Vec::new();
        write_summary_text(&mut out, &summary, "rating_mean").unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "   key  rating_mean");
        assert_eq!(lines[1], "   381      4.33333");
        assert_eq!(lines[2], "193942      4.00000");
    }
}
