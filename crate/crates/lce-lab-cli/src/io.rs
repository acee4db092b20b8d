//! CSV reading and writing.
//!
//! Data files carry a header of block columns, `v1..v{dv},u1..u{du}` with an
//! optional trailing `w` weight column; query files carry a single block.
//! Numbers are written as shortest round-trip decimals.

use std::path::Path;

use lce_lab::linalg::Vector;
use lce_lab::moments::FiniteJointDistribution;

use crate::CliError;

/// Columns grouped by block prefix, plus the optional weight column.
pub struct CsvBlocks {
    pub blocks: Vec<Vec<Vector>>,
    pub weights: Option<Vec<f64>>,
}

/// Read a CSV whose header is `p1..pk` for each prefix `p` in order, with an
/// optional trailing `w` column when `allow_weight` is set.
pub fn read_csv_blocks(
    path: &Path,
    prefixes: &[&str],
    allow_weight: bool,
) -> Result<CsvBlocks, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(None, format!("{}: {e}", path.display())))?;

    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(Some(1), e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();

    // column layout: for each prefix, a maximal run p1, p2, ...
    let mut widths = Vec::with_capacity(prefixes.len());
    let mut idx = 0usize;
    for prefix in prefixes {
        let mut width = 0usize;
        while idx < names.len() && names[idx] == format!("{prefix}{}", width + 1) {
            width += 1;
            idx += 1;
        }
        if width == 0 {
            return Err(CliError::parse(
                Some(1),
                format!(
                    "expected column {prefix}1 at position {}, found {:?}",
                    idx + 1,
                    names.get(idx).copied().unwrap_or("<end>")
                ),
            ));
        }
        widths.push(width);
    }
    let has_weight = idx < names.len() && names[idx] == "w";
    if has_weight && !allow_weight {
        return Err(CliError::parse(Some(1), "weight column not allowed here"));
    }
    if idx + usize::from(has_weight) != names.len() {
        return Err(CliError::parse(
            Some(1),
            format!("unexpected trailing column {:?}", names[idx + usize::from(has_weight)]),
        ));
    }

    let mut blocks: Vec<Vec<Vector>> = vec![Vec::new(); prefixes.len()];
    let mut weights: Vec<f64> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx + 2; // header is line 1
        let record = record.map_err(|e| CliError::parse(Some(line), e.to_string()))?;
        if record.len() != names.len() {
            return Err(CliError::parse(
                Some(line),
                format!("expected {} fields, found {}", names.len(), record.len()),
            ));
        }
        let parse = |s: &str, col: &str| -> Result<f64, CliError> {
            s.parse::<f64>().map_err(|_| {
                CliError::parse(Some(line), format!("column {col}: not a number: {s:?}"))
            })
        };
        let mut pos = 0usize;
        for (b, &width) in widths.iter().enumerate() {
            let mut v = Vector::zeros(width);
            for k in 0..width {
                v[k] = parse(&record[pos], names[pos])?;
                pos += 1;
            }
            blocks[b].push(v);
        }
        if has_weight {
            weights.push(parse(&record[pos], "w")?);
        }
    }
    if blocks[0].is_empty() {
        return Err(CliError::parse(None, "no data rows"));
    }
    Ok(CsvBlocks {
        blocks,
        weights: has_weight.then_some(weights),
    })
}

/// Read a `v1..,u1..[,w]` data file into a finite joint law.
pub fn read_joint_csv(path: &Path) -> Result<FiniteJointDistribution, CliError> {
    let mut parsed = read_csv_blocks(path, &["v", "u"], true)?;
    let u = parsed.blocks.pop().expect("two blocks");
    let v = parsed.blocks.pop().expect("two blocks");
    FiniteJointDistribution::from_rows(v.into_iter().zip(u).collect(), parsed.weights)
        .map_err(CliError::from)
}

/// Shortest round-trip decimal rendering (matches the JSON documents).
pub fn fmt_f64(x: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(x).to_string()
}

/// Render a CSV table with header.
pub fn write_table_csv(columns: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Numbered column names `p1..pk`.
pub fn numbered_columns(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}
