//! LIBSVM text format: `label idx:val idx:val ...` with 1-based indices.
//!
//! Labels are remapped to ±1. Accepted encodings are `{−1, +1}`, `{0, 1}`
//! (0 → −1) and `{1, 2}` (2 → −1); a file is classified by the set of raw
//! labels it contains.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::dataset::{Dataset, SparseRow};
use crate::error::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a LIBSVM stream. `n_features` overrides the dimension inferred
/// from the largest index; it must not be smaller than that index.
pub fn parse_libsvm<R: BufRead>(reader: R, n_features: Option<usize>) -> Result<Dataset> {
    let mut raw_labels = Vec::new();
    let mut rows = Vec::new();
    let mut extent = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("nonempty line has a token");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| parse_error(lineno, format!("bad label `{label_tok}`")))?;
        let mut pairs = Vec::new();
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| parse_error(lineno, format!("expected idx:val, got `{tok}`")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_error(lineno, format!("bad index in `{tok}`")))?;
            if idx == 0 {
                return Err(parse_error(lineno, "indices are 1-based"));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| parse_error(lineno, format!("bad value in `{tok}`")))?;
            if !val.is_finite() {
                return Err(parse_error(lineno, format!("non-finite value in `{tok}`")));
            }
            pairs.push((idx - 1, val));
        }
        let row = SparseRow::from_pairs(pairs).map_err(|e| parse_error(lineno, e.to_string()))?;
        extent = extent.max(row.extent());
        raw_labels.push((lineno, label));
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let labels = remap_labels(&raw_labels)?;
    let n = match n_features {
        Some(n) if n < extent => {
            return Err(Error::InvalidConfig(format!(
                "dimension override {n} is smaller than the largest index {extent}"
            )))
        }
        Some(n) => n,
        None => extent.max(1),
    };
    Dataset::new(n, rows, labels)
}

fn remap_labels(raw: &[(usize, f64)]) -> Result<Vec<f64>> {
    let in_set = |set: &[f64]| raw.iter().all(|(_, l)| set.contains(l));
    let map: fn(f64) -> f64 = if in_set(&[-1.0, 1.0]) {
        |l| l
    } else if in_set(&[0.0, 1.0]) {
        |l| if l == 0.0 { -1.0 } else { 1.0 }
    } else if in_set(&[1.0, 2.0]) {
        |l| if l == 2.0 { -1.0 } else { 1.0 }
    } else {
        let (line, bad) = raw
            .iter()
            .find(|(_, l)| ![-1.0, 0.0, 1.0, 2.0].contains(l))
            .unwrap_or(&raw[0]);
        return Err(parse_error(
            *line,
            format!("unsupported label encoding (found {bad}); expected ±1, 0/1 or 1/2"),
        ));
    };
    Ok(raw.iter().map(|(_, l)| map(*l)).collect())
}

pub fn read_libsvm_file<P: AsRef<Path>>(path: P, n_features: Option<usize>) -> Result<Dataset> {
    let f = File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_libsvm(BufReader::new(f), n_features)
}

/// Writes `dataset` in LIBSVM format with `+1`/`-1` labels. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_libsvm<W: Write>(dataset: &Dataset, mut out: W) -> Result<()> {
    for (row, z) in dataset.rows().iter().zip(dataset.labels()) {
        write!(out, "{}", if *z > 0.0 { "+1" } else { "-1" })?;
        for (i, v) in row.indices().iter().zip(row.values()) {
            write!(out, " {}:{}", i + 1, v)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, n: Option<usize>) -> Result<Dataset> {
        parse_libsvm(s.as_bytes(), n)
    }

    #[test]
    fn single_line_semantics() {
        let d = parse("+1 1:0.5 3:2.0\n", Some(3)).unwrap();
        assert_eq!(d.labels(), &[1.0]);
        assert_eq!(d.rows()[0].to_dense(3), vec![0.5, 0.0, 2.0]);
    }

    #[test]
    fn zero_one_labels_remap() {
        let d = parse("0 2:1\n1 1:1\n", Some(4)).unwrap();
        assert_eq!(d.labels(), &[-1.0, 1.0]);
        assert_eq!(d.rows()[0].to_dense(4), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn one_two_labels_remap() {
        let d = parse("1 1:1\n2 1:2\n2 2:1\n", None).unwrap();
        assert_eq!(d.labels(), &[1.0, -1.0, -1.0]);
        assert_eq!(d.n_features(), 2);
    }

    #[test]
    fn unsorted_indices_are_sorted() {
        let d = parse("-1 3:3 1:1\n", None).unwrap();
        assert_eq!(d.rows()[0].indices(), &[0, 2]);
        assert_eq!(d.n_features(), 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse("+1 1:1\n-1 2:x\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("+1 1:1\n\nfoo 1:1\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("+1 0:1\n", None), Err(Error::Parse { .. })));
        assert!(matches!(parse("+1 2\n", None), Err(Error::Parse { .. })));
        assert!(matches!(parse("3 1:1\n", None), Err(Error::Parse { .. })));
        assert!(matches!(parse("", None), Err(Error::EmptyDataset)));
        assert!(matches!(parse("\n  \n", None), Err(Error::EmptyDataset)));
        assert!(parse("+1 5:1\n", Some(3)).is_err());
    }

    #[test]
    fn five_line_round_trip() {
        let text = "+1 1:0.5 3:2\n-1 2:-1.25 4:1e-3\n+1 1:3 2:4 3:5 4:6\n-1 4:0.1\n+1 2:7.5\n";
        let d = parse(text, None).unwrap();
        let mut buf = Vec::new();
        write_libsvm(&d, &mut buf).unwrap();
        let d2 = parse_libsvm(buf.as_slice(), None).unwrap();
        assert_eq!(d, d2);
        assert_eq!(d.len(), 5);
    }
}
