use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Bag, Dataset};
use crate::error::{Error, Result};

/// Reads a bag CSV file (`bag_id,label,f1,...,fd`, header required).
///
/// Bags are ordered by first appearance; instances keep row order. The dataset
/// is named after the file stem.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    read_dataset(file, path, &name)
}

/// Parses the bag CSV format from any reader. `source` is used in error messages.
pub fn read_dataset<R: Read>(reader: R, source: &Path, name: &str) -> Result<Dataset> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(parse_err(1, "empty file".into()));
    }
    if header.len() < 3 || &header[0] != "bag_id" || &header[1] != "label" {
        return Err(parse_err(
            1,
            "header must start with `bag_id,label` followed by at least one feature column"
                .into(),
        ));
    }
    let width = header.len();
    let d = width - 2;

    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, (bool, u64, Vec<Vec<f64>>)> = HashMap::new();

    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(parse_err(
                line,
                format!(
                    "inconsistent dimensionality: expected {width} columns ({d} features), found {}",
                    record.len()
                ),
            ));
        }
        let id = &record[0];
        if id.is_empty() {
            return Err(parse_err(line, "empty bag_id".into()));
        }
        let label = match &record[1] {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(line, format!("non-binary label {other:?}"))),
        };
        let mut x = Vec::with_capacity(d);
        for (j, field) in record.iter().skip(2).enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line, format!("feature {} is not a number: {field:?}", j + 1)))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("feature {} is not finite", j + 1)));
            }
            x.push(v);
        }
        match groups.get_mut(id) {
            Some((bag_label, first_line, rows)) => {
                if *bag_label != label {
                    return Err(parse_err(
                        line,
                        format!(
                            "label of bag {id} differs from the label at line {first_line}"
                        ),
                    ));
                }
                rows.push(x);
            }
            None => {
                order.push(id.to_string());
                groups.insert(id.to_string(), (label, line, vec![x]));
            }
        }
    }

    if order.is_empty() {
        return Err(parse_err(2, "file has a header but no data rows".into()));
    }

    let bags = order
        .into_iter()
        .map(|id| {
            let (label, _, rows) = groups.remove(&id).expect("grouped id");
            Bag::new(id, label, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(name, bags)
}

/// Writes a dataset in the bag CSV format, one row per instance, bags in order.
pub fn write_dataset<W: Write>(dataset: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["bag_id".to_string(), "label".to_string()];
    header.extend((1..=dataset.d).map(|j| format!("f{j}")));
    w.write_record(&header).map_err(csv_io_err)?;
    for bag in &dataset.bags {
        let label = if bag.label { "1" } else { "0" };
        for x in &bag.instances {
            let mut row = Vec::with_capacity(x.len() + 2);
            row.push(bag.id.clone());
            row.push(label.to_string());
            row.extend(x.iter().map(|v| v.to_string()));
            w.write_record(&row).map_err(csv_io_err)?;
        }
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        source: e,
    })
}

/// Writes per-instance ground-truth labels as `bag_id,instance,label`.
pub fn write_instance_labels<W: Write>(
    dataset: &Dataset,
    labels: &[Vec<bool>],
    writer: W,
) -> Result<()> {
    if labels.len() != dataset.n_bags() {
        return Err(Error::LengthMismatch {
            left: dataset.n_bags(),
            right: labels.len(),
        });
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["bag_id", "instance", "label"])
        .map_err(csv_io_err)?;
    for (bag, bag_labels) in dataset.bags.iter().zip(labels) {
        for (k, &z) in bag_labels.iter().enumerate() {
            w.write_record([bag.id.as_str(), &k.to_string(), if z { "1" } else { "0" }])
                .map_err(csv_io_err)?;
        }
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        source: e,
    })
}

fn csv_io_err(e: csv::Error) -> Error {
    Error::Io {
        path: "<writer>".into(),
        source: std::io::Error::other(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Dataset> {
        read_dataset(text.as_bytes(), Path::new("mem.csv"), "mem")
    }

    fn line_of(err: Error) -> u64 {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn groups_rows_by_bag() {
        let ds = parse("bag_id,label,f1,f2\na,1,0.5,1\na,1,2,3\nb,0,-1,0\n").unwrap();
        assert_eq!(ds.n_bags(), 2);
        assert_eq!(ds.d, 2);
        assert_eq!(ds.bags[0].id, "a");
        assert_eq!(ds.bags[0].instances, vec![vec![0.5, 1.0], vec![2.0, 3.0]]);
        assert!(!ds.bags[1].label);
    }

    #[test]
    fn non_contiguous_rows_preserve_order() {
        let ds = parse("bag_id,label,f1\na,1,1\nb,0,2\na,1,3\n").unwrap();
        assert_eq!(ds.bags[0].instances, vec![vec![1.0], vec![3.0]]);
        assert_eq!(ds.bags[1].id, "b");
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = parse("bag_id,label,f1,f2\na,1,0,1\nb,0,1\n").unwrap_err();
        assert_eq!(line_of(err), 3);
    }

    #[test]
    fn non_binary_label_reports_line() {
        let err = parse("bag_id,label,f1\na,2,0\n").unwrap_err();
        assert_eq!(line_of(err), 2);
    }

    #[test]
    fn label_mismatch_within_bag() {
        let err = parse("bag_id,label,f1\na,1,0\nb,0,0\na,0,1\n").unwrap_err();
        assert_eq!(line_of(err), 4);
    }

    #[test]
    fn malformed_number() {
        let err = parse("bag_id,label,f1\na,1,x\n").unwrap_err();
        assert_eq!(line_of(err), 2);
        let err = parse("bag_id,label,f1\na,1,NaN\n").unwrap_err();
        assert_eq!(line_of(err), 2);
    }

    #[test]
    fn empty_inputs() {
        assert!(parse("").is_err());
        assert!(parse("bag_id,label,f1\n").is_err());
        assert!(parse("id,y,f1\na,1,0\n").is_err());
    }

    #[test]
    fn write_then_read() {
        let ds = parse("bag_id,label,f1,f2\na,1,0.1,1e-3\na,1,2,3\nb,0,-1.25,0\n").unwrap();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let again = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(ds.bags, again.bags);
    }
}
