//! Tab-separated label and code files written next to a feature store.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::labeling::BinaryCode;

use super::store::RowId;

pub const CLUSTER_HEADER: &str = "# row\tclip_id\twindow\tcluster\tdistance\tpruned";
pub const CODE_HEADER: &str = "# row\tclip_id\twindow\tcode";

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLabelRow {
    pub id: RowId,
    pub cluster: usize,
    pub distance: f64,
    pub pruned: bool,
}

pub fn format_cluster_labels(rows: &[ClusterLabelRow]) -> String {
    let mut out = String::from(CLUSTER_HEADER);
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        writeln!(
            out,
            "{i}\t{}\t{}\t{}\t{:?}\t{}",
            r.id.clip_id, r.id.window, r.cluster, r.distance, r.pruned as u8
        )
        .unwrap();
    }
    out
}

fn field<'a>(parts: &[&'a str], i: usize, line: usize) -> Result<&'a str> {
    parts
        .get(i)
        .copied()
        .ok_or_else(|| Error::invalid_input(format!("label file line {line}: missing column {i}")))
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::invalid_input(format!("label file line {line}: cannot parse {s:?}")))
}

pub fn parse_cluster_labels(text: &str) -> Result<Vec<ClusterLabelRow>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        rows.push(ClusterLabelRow {
            id: RowId {
                clip_id: field(&parts, 1, line_no)?.to_owned(),
                window: parse_num(field(&parts, 2, line_no)?, line_no)?,
            },
            cluster: parse_num(field(&parts, 3, line_no)?, line_no)?,
            distance: parse_num(field(&parts, 4, line_no)?, line_no)?,
            pruned: field(&parts, 5, line_no)? == "1",
        });
    }
    Ok(rows)
}

pub fn read_cluster_labels(path: impl AsRef<Path>) -> Result<Vec<ClusterLabelRow>> {
    parse_cluster_labels(&std::fs::read_to_string(path)?)
}

pub fn format_codes(ids: &[RowId], codes: &[BinaryCode]) -> String {
    let mut out = String::from(CODE_HEADER);
    out.push('\n');
    for (i, (id, c)) in ids.iter().zip(codes).enumerate() {
        writeln!(out, "{i}\t{}\t{}\t{c}", id.clip_id, id.window).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_rows_roundtrip() {
        let rows = vec![
            ClusterLabelRow {
                id: RowId {
                    clip_id: "a".into(),
                    window: 3,
                },
                cluster: 7,
                distance: 0.125,
                pruned: true,
            },
            ClusterLabelRow {
                id: RowId {
                    clip_id: "b".into(),
                    window: 0,
                },
                cluster: 0,
                distance: 1e-7,
                pruned: false,
            },
        ];
        let text = format_cluster_labels(&rows);
        assert!(text.starts_with(CLUSTER_HEADER));
        assert_eq!(parse_cluster_labels(&text).unwrap(), rows);
    }

    #[test]
    fn bad_line() {
        assert!(parse_cluster_labels("0\ta\tx\t1\t0.1\t0\n").is_err());
        assert!(parse_cluster_labels("0\ta\n").is_err());
    }
}
