//! Adjacent Independent Row (AIR) matrices.
//!
//! An `m × n` AIR matrix (`m ≥ n`) is a 0/1 matrix in which every `n`
//! cyclically adjacent rows are linearly independent over every field. The
//! construction alternates vertically stacked identities `I_{a×b}` with
//! their horizontally repeated transposes, following the Euclidean
//! remainder sequence of `(m, n)`:
//!
//! ```text
//! T(m, n), m >= n:  m = β·n + ρ
//!     ρ == 0  ->  I_{m×n}
//!     else    ->  [ I_{βn×n} ]
//!                 [ B(ρ, n)  ]
//!
//! B(r, c), r < c:   c = β·r + ρ
//!     ρ == 0  ->  I_{c×r}ᵀ
//!     else    ->  [ I_{βr×r}ᵀ | T(r, ρ) ]
//! ```
//!
//! For `(5, 2)` this yields rows `10, 01, 10, 01, 11`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{FieldMatrix, PrimeField};

/// Fields the property checkers evaluate over unless told otherwise.
pub const TEST_FIELDS: [PrimeField; 2] = [PrimeField::GF2, PrimeField::GF3];

/// `I_{a×b}`: `a/b` copies of `I_b` stacked vertically.
pub fn stacked_identity(field: PrimeField, a: usize, b: usize) -> Result<FieldMatrix> {
    if b == 0 || !a.is_multiple_of(b) {
        return Err(Error::NotDivisible { rows: a, cols: b });
    }
    let mut data = vec![0u32; a * b];
    for r in 0..a {
        data[r * b + r % b] = 1;
    }
    FieldMatrix::from_row_major(field, a, b, data)
}

/// The remainder chain behind the block layout.
///
/// `lambda[0]` is the first remainder after whole `I_n` blocks have been
/// stripped from the top (`stripped_blocks` of them), and each later entry
/// satisfies `lambda[i-1] = beta[i]·lambda[i] + lambda[i+1]` with `n` playing
/// the role of `lambda[-1]`. The last entry is `gcd(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidChain {
    pub lambda: Vec<usize>,
    pub beta: Vec<usize>,
    pub stripped_blocks: usize,
}

impl EuclidChain {
    /// Index of the last chain element.
    pub fn len_index(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn terminal(&self) -> usize {
        *self.lambda.last().expect("chain is never empty")
    }
}

pub fn euclid_chain(m: usize, n: usize) -> Result<EuclidChain> {
    if n == 0 || m <= n {
        return Err(Error::InvalidDims { m, n });
    }
    // m - n lands in [1, n] after removing the extra I_n blocks
    let first = (m - n - 1) % n + 1;
    let stripped_blocks = (m - n - first) / n;
    let mut lambda = vec![first];
    let mut beta = Vec::new();
    let (mut prev, mut cur) = (n, first);
    loop {
        let (q, r) = prev.div_rem(&cur);
        beta.push(q);
        if r == 0 {
            break;
        }
        lambda.push(r);
        prev = cur;
        cur = r;
    }
    Ok(EuclidChain {
        lambda,
        beta,
        stripped_blocks,
    })
}

/// A 0/1 matrix with `m ≥ n ≥ 1`, stored over GF(2).
///
/// [`build_air`] is the only constructor that guarantees the adjacency
/// property; [`AirMatrix::from_rows`] accepts any 0/1 matrix so candidate
/// encoders can be checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AirMatrix {
    matrix: FieldMatrix,
}

impl AirMatrix {
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let matrix = FieldMatrix::from_rows(PrimeField::GF2, rows)?;
        let (m, n) = (matrix.rows(), matrix.cols());
        if n == 0 || m < n {
            return Err(Error::InvalidDims { m, n });
        }
        Ok(AirMatrix { matrix })
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        self.matrix.row(i)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.matrix.to_rows()
    }

    /// The same 0/1 pattern as a matrix over `field`.
    pub fn over(&self, field: PrimeField) -> FieldMatrix {
        self.matrix.over(field).expect("0/1 entries are valid in every field")
    }

    /// Flips one entry. Only useful for exercising the checkers.
    pub fn flip(&mut self, i: usize, j: usize) {
        let v = self.matrix.get(i, j);
        self.matrix.set(i, j, 1 - v).expect("0/1 entry");
    }

    /// Cyclic window of `len` row indices starting at `start`.
    pub fn window(&self, start: usize, len: usize) -> Vec<usize> {
        let m = self.m();
        (0..len).map(|s| (start + s) % m).collect()
    }

    /// `m` lines of `n` space-separated digits.
    pub fn to_text(&self) -> String {
        self.matrix.to_string()
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let row = line
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(Error::Schema(format!("AIR entry {other:?} is not 0 or 1"))),
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn to_json(&self) -> AirJson {
        AirJson {
            m: self.m(),
            n: self.n(),
            rows: self.to_rows(),
        }
    }

    pub fn from_json(json: &AirJson) -> Result<Self> {
        if json.rows.len() != json.m || json.rows.iter().any(|r| r.len() != json.n) {
            return Err(Error::Schema(format!(
                "rows do not match declared size {}x{}",
                json.m, json.n
            )));
        }
        if json.rows.iter().flatten().any(|&v| v > 1) {
            return Err(Error::Schema("AIR entries must be 0 or 1".into()));
        }
        Self::from_rows(&json.rows)
    }
}

impl fmt::Display for AirMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// JSON form: `{"m":…, "n":…, "rows":[[…],…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AirJson {
    pub m: usize,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

pub fn build_air(m: usize, n: usize) -> Result<AirMatrix> {
    if n == 0 || m < n {
        return Err(Error::InvalidDims { m, n });
    }
    Ok(AirMatrix {
        matrix: tall_block(m, n)?,
    })
}

fn tall_block(m: usize, n: usize) -> Result<FieldMatrix> {
    let (beta, rho) = m.div_rem(&n);
    let top = stacked_identity(PrimeField::GF2, beta * n, n)?;
    if rho == 0 {
        return Ok(top);
    }
    top.vstack(&wide_block(rho, n)?)
}

fn wide_block(r: usize, c: usize) -> Result<FieldMatrix> {
    let (beta, rho) = c.div_rem(&r);
    let left = stacked_identity(PrimeField::GF2, beta * r, r)?.transpose();
    if rho == 0 {
        return Ok(left);
    }
    left.hstack(&tall_block(r, rho)?)
}

fn windows_independent(m: &FieldMatrix, n: usize, cyclic: bool) -> bool {
    let rows = m.rows();
    let starts = if cyclic { rows } else { rows + 1 - n };
    (0..starts).all(|i| {
        let idx: Vec<usize> = (0..n).map(|s| (i + s) % rows).collect();
        m.select_rows(&idx).rank() == n
    })
}

/// Every window of `n` consecutive rows (wrapping when `cyclic`) has rank
/// `n` over each field in `fields`.
pub fn check_adjacent_independence_over(air: &AirMatrix, cyclic: bool, fields: &[PrimeField]) -> bool {
    fields
        .iter()
        .all(|&f| windows_independent(&air.over(f), air.n(), cyclic))
}

pub fn check_adjacent_independence(air: &AirMatrix, cyclic: bool) -> bool {
    check_adjacent_independence_over(air, cyclic, &TEST_FIELDS)
}

/// Which neighbours count as "above" a row in the span-exclusion check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `n-1` rows with lower indices, `gcd(m,n)-1` rows with higher indices.
    AboveIsEarlier,
    /// The mirror image.
    AboveIsLater,
}

/// Rows `k` is tested against: the `n-1` rows "above" and `gcd(m,n)-1`
/// rows "below", cyclically.
pub fn span_exclusion_neighbours(m: usize, n: usize, k: usize, orientation: Orientation) -> Vec<usize> {
    let g = m.gcd(&n);
    let back = |s: usize| (k + m - s % m) % m;
    let fwd = |s: usize| (k + s) % m;
    let (above, below): (Vec<usize>, Vec<usize>) = match orientation {
        Orientation::AboveIsEarlier => ((1..n).map(back).collect(), (1..g).map(fwd).collect()),
        Orientation::AboveIsLater => ((1..n).map(fwd).collect(), (1..g).map(back).collect()),
    };
    above.into_iter().chain(below).collect()
}

pub fn check_span_exclusion_over(air: &AirMatrix, orientation: Orientation, fields: &[PrimeField]) -> bool {
    let (m, n) = (air.m(), air.n());
    fields.iter().all(|&f| {
        let mat = air.over(f);
        (0..m).all(|k| {
            let mut idx = span_exclusion_neighbours(m, n, k, orientation);
            idx.sort_unstable();
            idx.dedup();
            idx.retain(|&i| i != k);
            let base = mat.select_rows(&idx);
            let base_rank = base.rank();
            let with = base.vstack(&mat.select_rows(&[k])).expect("same shape");
            with.rank() > base_rank
        })
    })
}

/// Row `k` lies outside the span of its `n-1` predecessors and
/// `gcd(m,n)-1` successors (cyclic), for every `k`.
pub fn check_span_exclusion(air: &AirMatrix) -> bool {
    check_span_exclusion_over(air, Orientation::AboveIsEarlier, &TEST_FIELDS)
}
