//! Ingestion and persistence: Matrix Market files, edge lists, vector files,
//! trace CSVs, and the bundled fixtures.
//!
//! Readers reject malformed input with the offending line number; nothing is
//! silently repaired. Floats are written with 17 significant digits so that
//! write-then-read round-trips are bit exact.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::solver::{ConvergenceTrace, TraceRecord};
use crate::vector::DenseVector;

/// Edge-list form of a graph: `(src, dst, weight)` with strictly positive
/// weights. Duplicate `(src, dst)` pairs are summed when converting to a
/// matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// How raw weights become matrix entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalizationMode {
    /// Use weights as stored.
    None,
    /// Divide every nonzero column by its sum; zero columns stay zero and
    /// are reported as dangling.
    ColumnStochastic,
    /// Column-stochastic scaled by the damping factor `0 < d < 1`. The
    /// teleportation term belongs on the right-hand side, not the matrix.
    Damped(f64),
}

fn format_f64(x: f64) -> String {
    // 17 significant digits: lossless binary64 round-trip
    format!("{x:.16e}")
}

/// Reads a Matrix Market `coordinate real general` file with 1-based
/// indices. Entries must be strictly positive; duplicates are summed; the
/// matrix must be square.
pub fn read_matrix_market(path: &Path) -> Result<SparseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let display = path.display().to_string();
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(&display, 1, "empty file"))?;
    let expected = ["%%matrixmarket", "matrix", "coordinate", "real", "general"];
    let fields: Vec<String> = header
        .split_whitespace()
        .map(|f| f.to_lowercase())
        .collect();
    if fields != expected {
        return Err(Error::parse(
            &display,
            1,
            format!(
                "expected header '%%MatrixMarket matrix coordinate real general', got '{header}'"
            ),
        ));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if tokens.len() != 3 {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        "size line must be 'rows cols nnz'",
                    ));
                }
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| {
                        Error::parse(
                            &display,
                            line_no,
                            format!("'{s}' is not a nonnegative integer"),
                        )
                    })
                };
                let rows = parse(tokens[0])?;
                let cols = parse(tokens[1])?;
                let nnz = parse(tokens[2])?;
                if rows != cols {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        format!("matrix must be square, got {rows} x {cols}"),
                    ));
                }
                size = Some((rows, cols, nnz));
                triplets.reserve(nnz);
            }
            Some((rows, _, nnz)) => {
                if tokens.len() != 3 {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        "entry line must be 'row col value'",
                    ));
                }
                if triplets.len() == nnz {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        format!("more than the declared {nnz} entries"),
                    ));
                }
                let row: usize = tokens[0].parse().map_err(|_| {
                    Error::parse(
                        &display,
                        line_no,
                        format!("'{}' is not an index", tokens[0]),
                    )
                })?;
                let col: usize = tokens[1].parse().map_err(|_| {
                    Error::parse(
                        &display,
                        line_no,
                        format!("'{}' is not an index", tokens[1]),
                    )
                })?;
                let value: f64 = tokens[2].parse().map_err(|_| {
                    Error::parse(
                        &display,
                        line_no,
                        format!("'{}' is not a number", tokens[2]),
                    )
                })?;
                if row < 1 || row > rows || col < 1 || col > rows {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        format!("index ({row}, {col}) outside 1..={rows}"),
                    ));
                }
                if !(value > 0.0) || !value.is_finite() {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        format!("value {value} must be strictly positive and finite"),
                    ));
                }
                triplets.push((row - 1, col - 1, value));
            }
        }
    }
    let Some((rows, _, nnz)) = size else {
        return Err(Error::parse(&display, 1, "missing size line"));
    };
    if triplets.len() != nnz {
        return Err(Error::parse(
            &display,
            0,
            format!("declared {nnz} entries but found {}", triplets.len()),
        ));
    }
    SparseMatrix::from_triplets(rows, &triplets)
}

/// Writes a matrix as Matrix Market `coordinate real general`, 1-based.
pub fn write_matrix_market(m: &SparseMatrix, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res: std::io::Result<()> = (|| {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", m.dim(), m.dim(), m.nnz())?;
        for (row, col, val) in m.triplets() {
            writeln!(w, "{} {} {}", row + 1, col + 1, format_f64(val))?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Reads a whitespace-separated edge list: `src dst [weight]` per line with
/// 0-based indices, default weight 1, `#` comments. The node count is the
/// largest index seen plus one.
pub fn read_edge_list(path: &Path) -> Result<EdgeList> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let display = path.display().to_string();
    let mut edges = Vec::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::parse(
                &display,
                line_no,
                "expected 'src dst' or 'src dst weight'",
            ));
        }
        let src: usize = tokens[0].parse().map_err(|_| {
            Error::parse(
                &display,
                line_no,
                format!("'{}' is not an index", tokens[0]),
            )
        })?;
        let dst: usize = tokens[1].parse().map_err(|_| {
            Error::parse(
                &display,
                line_no,
                format!("'{}' is not an index", tokens[1]),
            )
        })?;
        let weight: f64 = match tokens.get(2) {
            Some(tok) => tok
                .parse()
                .map_err(|_| Error::parse(&display, line_no, format!("'{tok}' is not a number")))?,
            None => 1.0,
        };
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::parse(
                &display,
                line_no,
                format!("weight {weight} must be strictly positive and finite"),
            ));
        }
        n = n.max(src + 1).max(dst + 1);
        edges.push((src, dst, weight));
    }
    Ok(EdgeList { n, edges })
}

/// Writes a matrix as an edge list (`src dst weight`); inverse of the
/// edge-to-matrix orientation, so entry `(row, col)` becomes `col row`.
pub fn write_edge_list(m: &SparseMatrix, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res: std::io::Result<()> = (|| {
        for (row, col, val) in m.triplets() {
            writeln!(w, "{} {} {}", col, row, format_f64(val))?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Converts an edge list to a matrix: edge `src -> dst` contributes to
/// column `src`, row `dst`, so diffusing node `src` delivers along its
/// out-edges. Returns the matrix and the dangling (zero-sum) columns.
pub fn to_matrix(el: &EdgeList, mode: NormalizationMode) -> Result<(SparseMatrix, Vec<usize>)> {
    to_matrix_with_options(el, mode, false)
}

/// Like [`to_matrix`]; with `patch_dangling` the dangling columns are
/// rewritten to uniform columns before normalization. The report still lists
/// the originally dangling columns.
pub fn to_matrix_with_options(
    el: &EdgeList,
    mode: NormalizationMode,
    patch_dangling: bool,
) -> Result<(SparseMatrix, Vec<usize>)> {
    let triplets: Vec<(usize, usize, f64)> = el
        .edges
        .iter()
        .map(|&(src, dst, w)| (dst, src, w))
        .collect();
    let raw = SparseMatrix::from_triplets(el.n, &triplets)?;
    normalize_matrix(&raw, mode, patch_dangling)
}

/// Applies a [`NormalizationMode`] to an existing matrix. Returns the result
/// and the columns that were dangling before any patching.
pub fn normalize_matrix(
    m: &SparseMatrix,
    mode: NormalizationMode,
    patch_dangling: bool,
) -> Result<(SparseMatrix, Vec<usize>)> {
    let n = m.dim();
    let dangling: Vec<usize> = (0..n).filter(|&c| m.col_nnz(c) == 0).collect();
    if let NormalizationMode::Damped(d) = mode {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "damping factor must lie strictly between 0 and 1, got {d}"
            )));
        }
    }
    let mut triplets: Vec<(usize, usize, f64)> = m.triplets().collect();
    if patch_dangling && n > 0 {
        let fill = 1.0 / n as f64;
        for &c in &dangling {
            for r in 0..n {
                triplets.push((r, c, fill));
            }
        }
    }
    let scale_of = |col_sum: f64| -> f64 {
        match mode {
            NormalizationMode::None => 1.0,
            NormalizationMode::ColumnStochastic => {
                if col_sum > 0.0 {
                    1.0 / col_sum
                } else {
                    1.0
                }
            }
            NormalizationMode::Damped(d) => {
                if col_sum > 0.0 {
                    d / col_sum
                } else {
                    1.0
                }
            }
        }
    };
    // per-column sums after optional patching
    let mut sums = vec![0.0f64; n];
    for &(_, c, v) in &triplets {
        sums[c] += v;
    }
    let scaled: Vec<(usize, usize, f64)> = triplets
        .into_iter()
        .map(|(r, c, v)| (r, c, v * scale_of(sums[c])))
        .collect();
    Ok((SparseMatrix::from_triplets(n, &scaled)?, dangling))
}

/// CSV header for convergence traces.
pub const TRACE_CSV_HEADER: &str =
    "step,node,alpha,diffused_amount,fluid_l1,fluid_sigma_v,invariant_residual";

/// Writes a trace as CSV with 17-significant-digit floats.
pub fn write_trace_csv(trace: &ConvergenceTrace, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res: std::io::Result<()> = (|| {
        writeln!(w, "{TRACE_CSV_HEADER}")?;
        for r in trace.records() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.step,
                r.node,
                format_f64(r.alpha),
                format_f64(r.diffused_amount),
                format_f64(r.fluid_l1),
                format_f64(r.fluid_sigma_v),
                format_f64(r.invariant_residual)
            )?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Parses a trace CSV produced by [`write_trace_csv`].
pub fn read_trace_csv(path: &Path) -> Result<ConvergenceTrace> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let display = path.display().to_string();
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(&display, 1, "empty file"))?;
    if header.trim() != TRACE_CSV_HEADER {
        return Err(Error::parse(&display, 1, "unexpected trace CSV header"));
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::parse(&display, line_no, "expected 7 fields"));
        }
        let step: u64 = fields[0]
            .parse()
            .map_err(|_| Error::parse(&display, line_no, "bad step"))?;
        let node: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(&display, line_no, "bad node"))?;
        let float = |k: usize, nm: &str| {
            fields[k]
                .parse::<f64>()
                .map_err(|_| Error::parse(&display, line_no, format!("bad {nm}")))
        };
        records.push(TraceRecord {
            step,
            node,
            alpha: float(2, "alpha")?,
            diffused_amount: float(3, "diffused_amount")?,
            fluid_l1: float(4, "fluid_l1")?,
            fluid_sigma_v: float(5, "fluid_sigma_v")?,
            invariant_residual: float(6, "invariant_residual")?,
        });
    }
    Ok(ConvergenceTrace::from_records(records))
}

/// Writes a vector, one 17-significant-digit value per line.
pub fn write_vector(x: &DenseVector, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res: std::io::Result<()> = (|| {
        for v in x.iter() {
            writeln!(w, "{}", format_f64(*v))?;
        }
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Reads a vector written by [`write_vector`]; blank lines and `#` comments
/// are allowed.
pub fn read_vector(path: &Path) -> Result<DenseVector> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let display = path.display().to_string();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::parse(&display, idx + 1, format!("'{line}' is not a number")))?;
        out.push(v);
    }
    Ok(DenseVector::from_vec(out))
}

/// Deterministic test matrices, addressable by name.
#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    /// 5-node graph with two 3-cycles sharing a node: node 0 feeds nodes 1
    /// and 2 with weight 0.5 each, then 1 -> 3, 2 -> 4, 3 -> 0, 4 -> 0.
    Snake,
    /// 2-node linear example: p_10 = p_01 = 0.5 with b = (1, 0).
    TwoNode,
    /// The 2 x 2 rank-one column-stochastic matrix with all entries 0.5.
    Rank1,
    /// Sparse random matrix with heterogeneous column sums below 1.
    RandomSubstochastic { n: usize, seed: u64 },
    /// Dense strictly positive column-stochastic matrix.
    RandomErgodic { n: usize, seed: u64 },
}

impl Fixture {
    pub const NAMES: [&'static str; 5] = [
        "snake",
        "twonode",
        "rank1",
        "random_substochastic(n,seed)",
        "random_ergodic(n,seed)",
    ];
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "snake" => return Ok(Fixture::Snake),
            "twonode" => return Ok(Fixture::TwoNode),
            "rank1" => return Ok(Fixture::Rank1),
            _ => {}
        }
        let args_of = |name: &str| -> Option<&str> {
            s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
        };
        let parse_args = |rest: &str| -> Result<(usize, u64)> {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::UnknownFixture(s.to_string()));
            }
            let n = parts[0]
                .parse::<usize>()
                .map_err(|_| Error::UnknownFixture(s.to_string()))?;
            let seed = parts[1]
                .parse::<u64>()
                .map_err(|_| Error::UnknownFixture(s.to_string()))?;
            Ok((n, seed))
        };
        if let Some(rest) = args_of("random_substochastic") {
            let (n, seed) = parse_args(rest)?;
            return Ok(Fixture::RandomSubstochastic { n, seed });
        }
        if let Some(rest) = args_of("random_ergodic") {
            let (n, seed) = parse_args(rest)?;
            return Ok(Fixture::RandomErgodic { n, seed });
        }
        Err(Error::UnknownFixture(s.to_string()))
    }
}

/// Builds a fixture matrix; some fixtures also carry a right-hand side.
pub fn make_fixture(fixture: &Fixture) -> Result<(SparseMatrix, Option<DenseVector>)> {
    match fixture {
        Fixture::Snake => {
            let m = SparseMatrix::from_triplets(
                5,
                &[
                    (1, 0, 0.5),
                    (2, 0, 0.5),
                    (3, 1, 1.0),
                    (4, 2, 1.0),
                    (0, 3, 1.0),
                    (0, 4, 1.0),
                ],
            )?;
            Ok((m, None))
        }
        Fixture::TwoNode => {
            let m = SparseMatrix::from_triplets(2, &[(1, 0, 0.5), (0, 1, 0.5)])?;
            Ok((m, Some(DenseVector::from_vec(vec![1.0, 0.0]))))
        }
        Fixture::Rank1 => {
            let m = SparseMatrix::from_triplets(
                2,
                &[(0, 0, 0.5), (1, 0, 0.5), (0, 1, 0.5), (1, 1, 0.5)],
            )?;
            Ok((m, None))
        }
        Fixture::RandomSubstochastic { n, seed } => Ok((random_substochastic(*n, *seed)?, None)),
        Fixture::RandomErgodic { n, seed } => Ok((random_ergodic(*n, *seed)?, None)),
    }
}

/// Sparse random matrix with column sums drawn from [0.05, 0.9]: columns
/// contract at very different rates, the regime where residual-driven
/// scheduling beats full sweeps.
fn random_substochastic(n: usize, seed: u64) -> Result<SparseMatrix> {
    if n == 0 {
        return Ok(SparseMatrix::zero(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    for col in 0..n {
        let degree = rng.random_range(1..=6usize.min(n));
        let mut rows = std::collections::BTreeSet::new();
        while rows.len() < degree {
            rows.insert(rng.random_range(0..n));
        }
        let raw: Vec<f64> = (0..degree).map(|_| rng.random_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let target = rng.random_range(0.05..0.9);
        for (row, w) in rows.into_iter().zip(raw) {
            triplets.push((row, col, w * target / total));
        }
    }
    SparseMatrix::from_triplets(n, &triplets)
}

/// Dense strictly positive column-stochastic matrix: irreducible and
/// aperiodic by construction.
fn random_ergodic(n: usize, seed: u64) -> Result<SparseMatrix> {
    if n == 0 {
        return Ok(SparseMatrix::zero(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::with_capacity(n * n);
    for col in 0..n {
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        for (row, w) in raw.into_iter().enumerate() {
            triplets.push((row, col, w / total));
        }
    }
    SparseMatrix::from_triplets(n, &triplets)
}
