//! Matrix, perturbation and assignment files.
//!
//! Matrices come as CSV (one row per line, `inf` for a missing edge) or as a
//! JSON object `{"n": .., "m": .., "weights": [[..], ..]}` whose entries are
//! numbers or the string `"inf"`. Assignments are lists of 1-based `(i, j)`
//! pairs, either `[[i, j], ..]` in JSON or one `i,j` per CSV line.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use bapsens::{Assignment, Edge, WeightMatrix};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// From the file extension, else by looking at the first character.
    pub fn detect(path: Option<&Path>, text: &str) -> Format {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ if matches!(text.trim_start().chars().next(), Some('{' | '[')) => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Number(f64),
    Token(String),
}

impl Entry {
    fn value(self) -> Result<f64> {
        match self {
            Entry::Number(x) => Ok(x),
            Entry::Token(t) => parse_weight(&t),
        }
    }
}

#[derive(Deserialize)]
struct JsonMatrix {
    n: usize,
    m: usize,
    weights: Vec<Vec<Entry>>,
}

fn parse_weight(token: &str) -> Result<f64> {
    let t = token.trim();
    t.parse::<f64>().with_context(|| format!("not a number: {t:?}"))
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

/// Rows of numbers as written in the file. Shape is checked later by
/// [`bapsens::validate_matrix`].
pub fn parse_matrix(text: &str, format: Format) -> Result<Vec<Vec<f64>>> {
    match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for (k, record) in csv_reader(text).records().enumerate() {
                let record = record.with_context(|| format!("line {}", k + 1))?;
                let row = record
                    .iter()
                    .map(parse_weight)
                    .collect::<Result<Vec<f64>>>()
                    .with_context(|| format!("row {}", k + 1))?;
                rows.push(row);
            }
            Ok(rows)
        }
        Format::Json => {
            let parsed: JsonMatrix = serde_json::from_str(text).context("malformed matrix object")?;
            ensure!(
                parsed.weights.len() == parsed.n,
                "\"n\" is {} but \"weights\" has {} rows",
                parsed.n,
                parsed.weights.len()
            );
            let mut rows = Vec::with_capacity(parsed.n);
            for (i, row) in parsed.weights.into_iter().enumerate() {
                ensure!(
                    row.len() == parsed.m,
                    "\"m\" is {} but row {} has {} entries",
                    parsed.m,
                    i + 1,
                    row.len()
                );
                rows.push(row.into_iter().map(Entry::value).collect::<Result<Vec<f64>>>()?);
            }
            Ok(rows)
        }
    }
}

/// CSV with `inf` for missing edges; values use shortest round-trip form.
pub fn write_matrix_csv(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// 1-based `(i, j)` pairs.
pub fn parse_pairs(text: &str, format: Format) -> Result<Vec<(usize, usize)>> {
    match format {
        Format::Json => {
            let pairs: Vec<(usize, usize)> = serde_json::from_str(text).context("expected a list of [i, j] pairs")?;
            Ok(pairs)
        }
        Format::Csv => {
            let mut pairs = Vec::new();
            for (k, record) in csv_reader(text).records().enumerate() {
                let record = record.with_context(|| format!("line {}", k + 1))?;
                if record.len() != 2 {
                    bail!("line {}: expected \"i,j\"", k + 1);
                }
                let i = record[0].parse().with_context(|| format!("line {}", k + 1))?;
                let j = record[1].parse().with_context(|| format!("line {}", k + 1))?;
                pairs.push((i, j));
            }
            Ok(pairs)
        }
    }
}

/// 1-based `(i, j)` in the caller's orientation to an internal edge.
pub fn edge_from_pair(w: &WeightMatrix, (i, j): (usize, usize)) -> Result<Edge> {
    let e = Edge::from_one_based(i, j).with_context(|| format!("edge ({i},{j}) is not 1-based"))?;
    let internal = w.to_internal(e);
    ensure!(
        w.contains_edge_index(internal),
        "edge ({i},{j}) outside a {}x{} matrix",
        external_dims(w).0,
        external_dims(w).1
    );
    Ok(internal)
}

pub fn assignment_from_pairs(w: &WeightMatrix, pairs: &[(usize, usize)]) -> Result<Assignment> {
    let edges = pairs
        .iter()
        .map(|&p| edge_from_pair(w, p))
        .collect::<Result<Vec<Edge>>>()?;
    Ok(Assignment::from_edges(edges, w.rows(), w.cols())?)
}

/// Internal edge to 1-based `[i, j]` in the caller's orientation.
pub fn pair_of(w: &WeightMatrix, e: Edge) -> [usize; 2] {
    let (i, j) = w.to_external(e).one_based();
    [i, j]
}

/// Dimensions as supplied by the caller.
pub fn external_dims(w: &WeightMatrix) -> (usize, usize) {
    if w.is_transposed() {
        (w.cols(), w.rows())
    } else {
        w.dims()
    }
}

pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}
