//! Verification campaigns and table reproduction.
//!
//! Correctness of a linear code is checked on the basis: encoding every
//! unit message vector and decoding every wanted symbol at every receiver
//! covers the whole message space by linearity.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::air::{build_air, check_adjacent_independence_over, check_span_exclusion_over, AirMatrix, Orientation};
use crate::codec::{IndexCode, MessageVector, PaddedScalarCode, PartitionedCode, SchemeKind, SideInfo, WindowCode};
use crate::error::Result;
use crate::galois::PrimeField;
use crate::suicp::{
    after_class, after_interval, before_in_class, before_interval, min_rate_fraction, truncated_decimal, Rate,
    SniProblem,
};

pub mod golden {
    //! Committed copies of the reference tables.
    pub const TABLE1: &str = include_str!("../golden/table1.csv");
    pub const TABLE1_ERRATA: &str = include_str!("../golden/table1_errata.csv");
    pub const TABLE4: &str = include_str!("../golden/table4.csv");
    pub const TABLE5: &str = include_str!("../golden/table5.csv");
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeDescriptor {
    pub kind: SchemeKind,
    pub dim: usize,
    pub code_len: usize,
    pub air_rows: usize,
    pub air_cols: usize,
}

impl SchemeDescriptor {
    pub fn of(code: &dyn IndexCode) -> Self {
        let (air_rows, air_cols) = code.air_dims();
        SchemeDescriptor {
            kind: code.kind(),
            dim: code.dim(),
            code_len: code.code_len(),
            air_rows,
            air_cols,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub basis: usize,
    pub receiver: usize,
    pub slot: usize,
    pub expected: u32,
    pub got: Option<u32>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub problem: SniProblem,
    pub scheme: SchemeDescriptor,
    pub basis_vectors: usize,
    pub decodes: usize,
    pub failures: Vec<Failure>,
    pub max_touched: usize,
    pub instantly_decodable: bool,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Basis round trip for every receiver and wanted slot.
pub fn verify_scheme(code: &dyn IndexCode) -> VerificationReport {
    let problem = *code.problem();
    let (field, k, b) = (code.field(), problem.messages(), code.dim());
    let per_basis: Vec<(usize, usize, Vec<Failure>)> = (0..k * b)
        .into_par_iter()
        .map(|w| {
            let msg = MessageVector::basis(field, k, b, w);
            let mut failures = Vec::new();
            let mut max_touched = 0;
            let mut decodes = 0;
            let bc = match code.encode(&msg) {
                Ok(bc) => bc,
                Err(e) => {
                    failures.push(Failure {
                        basis: w,
                        receiver: 0,
                        slot: 0,
                        expected: 0,
                        got: None,
                        error: Some(e.to_string()),
                    });
                    return (0, 0, failures);
                }
            };
            for r in 0..k {
                let side = SideInfo::for_receiver(&problem, r, &msg);
                for j in 0..b {
                    decodes += 1;
                    let expected = msg.symbols()[r * b + j];
                    match code.decode(&bc, r, j, &side) {
                        Ok((v, trace)) => {
                            max_touched = max_touched.max(trace.code_indices.len());
                            if v.value() != expected {
                                failures.push(Failure {
                                    basis: w,
                                    receiver: r,
                                    slot: j,
                                    expected,
                                    got: Some(v.value()),
                                    error: None,
                                });
                            }
                        }
                        Err(e) => failures.push(Failure {
                            basis: w,
                            receiver: r,
                            slot: j,
                            expected,
                            got: None,
                            error: Some(e.to_string()),
                        }),
                    }
                }
            }
            (decodes, max_touched, failures)
        })
        .collect();

    let mut report = VerificationReport {
        problem,
        scheme: SchemeDescriptor::of(code),
        basis_vectors: k * b,
        decodes: 0,
        failures: Vec::new(),
        max_touched: 0,
        instantly_decodable: false,
    };
    for (decodes, touched, failures) in per_basis {
        report.decodes += decodes;
        report.max_touched = report.max_touched.max(touched);
        report.failures.extend(failures);
    }
    report.instantly_decodable = report.max_touched == 1 && report.verified();
    report
}

/// Minimum-rate partitioned code, padded scalar code and the
/// `D+U+1` window code, each verified.
pub fn verify_all_schemes(problem: SniProblem, field: PrimeField) -> Result<Vec<VerificationReport>> {
    let codes: Vec<Box<dyn IndexCode>> = vec![
        Box::new(PartitionedCode::min_rate(problem, field)?),
        Box::new(PaddedScalarCode::min_length(problem, field)?),
        Box::new(WindowCode::new(problem, field)?),
    ];
    Ok(codes.iter().map(|c| verify_scheme(c.as_ref())).collect())
}

/// One line of the partition-encoding table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "K")]
    pub messages: usize,
    #[serde(rename = "D")]
    pub after: usize,
    #[serde(rename = "U_min")]
    pub before_min: usize,
    #[serde(rename = "U_max")]
    pub before_max: usize,
    pub a_min: usize,
    pub b_min: usize,
    pub lower: usize,
    pub upper: String,
    pub air_size: String,
    pub instant: String,
}

impl TableRow {
    pub fn gamma(&self) -> usize {
        self.air_size
            .split_once('x')
            .and_then(|(_, g)| g.parse().ok())
            .unwrap_or(0)
    }
}

/// Rows for `D ∈ [1:d_max]`, `U ∈ [1:D]`, merging runs of `U` with the same
/// `(a_min, b_min)`.
pub fn reproduce_table1(messages: usize, d_max: usize) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = Vec::new();
    for after in 1..=d_max {
        for before in 1..=after {
            let r = min_rate_fraction(messages, after, before);
            let code_len = r.b * (after + 1) + r.a;
            let tau = num_integer::gcd(messages * r.b, code_len);
            let (t, gamma) = (messages * r.b / tau, code_len / tau);
            let row = TableRow {
                messages,
                after,
                before_min: before,
                before_max: before,
                a_min: r.a,
                b_min: r.b,
                lower: after + 1,
                upper: truncated_decimal(&r.rate, 4),
                air_size: format!("{t}x{gamma}"),
                instant: if gamma == 1 { "**".into() } else { String::new() },
            };
            match rows.last_mut() {
                Some(prev) if prev.after == after && prev.a_min == row.a_min && prev.b_min == row.b_min => {
                    prev.before_max = before;
                }
                _ => rows.push(row),
            }
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRow {
    pub l: usize,
    #[serde(rename = "D_min")]
    pub after_min: usize,
    #[serde(rename = "D_max")]
    pub after_max: isize,
    #[serde(rename = "U_min")]
    pub before_min: usize,
    #[serde(rename = "U_max")]
    pub before_max: isize,
}

/// `D_l` and `U_l` for `l ∈ [1:l_max]`.
pub fn reproduce_interval_table(messages: usize, l_max: usize) -> Vec<IntervalRow> {
    (1..=l_max)
        .map(|l| {
            let (after_min, after_max) = after_interval(messages, l);
            let (before_min, before_max) = before_interval(messages, l);
            IntervalRow {
                l,
                after_min,
                after_max,
                before_min,
                before_max,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullRateRow {
    #[serde(rename = "K")]
    pub messages: usize,
    #[serde(rename = "D")]
    pub after: usize,
    #[serde(rename = "U_min")]
    pub before_min: usize,
    #[serde(rename = "U_max")]
    pub before_max: usize,
    pub a: usize,
    pub b: usize,
    pub lower: usize,
    pub rate: String,
    pub remark: String,
}

/// `(D, U_min, U_max)` cells of the minimum-rate table for `K = 71`.
pub const FULL_RATE_CELLS: [(usize, usize, usize); 10] = [
    (44, 1, 5),
    (44, 6, 22),
    (44, 23, 26),
    (45, 1, 2),
    (45, 3, 22),
    (45, 23, 26),
    (27, 27, 27),
    (33, 25, 25),
    (15, 2, 2),
    (3, 1, 1),
];

/// Number of interval classes the remark column looks at.
pub const REMARK_CLASSES: usize = 5;

fn class_remark(messages: usize, after: usize, before: usize) -> String {
    let (d_in, u_in) = match after_class(messages, after, REMARK_CLASSES) {
        Some(l) => (true, before_in_class(messages, before, l)),
        None => (
            false,
            (1..=REMARK_CLASSES).any(|l| before_in_class(messages, before, l)),
        ),
    };
    format!(
        "D {} D_l and U {} U_l",
        if d_in { "∈" } else { "∉" },
        if u_in { "∈" } else { "∉" }
    )
}

/// Evaluates each cell, splitting it wherever `(a, b)` or the remark
/// changes within the `U` range. A faithful cell yields exactly one row.
pub fn reproduce_full_rate_table(messages: usize, cells: &[(usize, usize, usize)]) -> Vec<FullRateRow> {
    let mut rows: Vec<FullRateRow> = Vec::new();
    for &(after, u_lo, u_hi) in cells {
        let start = rows.len();
        for before in u_lo..=u_hi {
            let r = min_rate_fraction(messages, after, before);
            let remark = class_remark(messages, after, before);
            let extend = rows.len() > start;
            match rows.last_mut() {
                Some(prev) if extend && prev.a == r.a && prev.b == r.b && prev.remark == remark => {
                    prev.before_max = before;
                }
                _ => rows.push(FullRateRow {
                    messages,
                    after,
                    before_min: before,
                    before_max: before,
                    a: r.a,
                    b: r.b,
                    lower: after + 1,
                    rate: truncated_decimal(&r.rate, 4),
                    remark,
                }),
            }
        }
    }
    rows
}

/// Pads a decimal string to four places (`"35.5"` → `"35.5000"`,
/// `"71"` → `"71.0000"`) so printed table values compare against
/// [`truncated_decimal`] output.
pub fn normalize_decimal(s: &str) -> String {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let mut frac: String = frac.chars().take(4).collect();
    while frac.len() < 4 {
        frac.push('0');
    }
    format!("{int}.{frac}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    #[serde(rename = "D")]
    pub after: usize,
    #[serde(rename = "U_min")]
    pub before_min: usize,
    #[serde(rename = "U_max")]
    pub before_max: usize,
    pub column: String,
    pub printed: String,
    pub corrected: String,
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(text: &str) -> std::result::Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn write_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

impl TableRow {
    fn cell_mut(&mut self, column: &str) -> Option<&mut String> {
        match column {
            "upper" => Some(&mut self.upper),
            "air_size" => Some(&mut self.air_size),
            "instant" => Some(&mut self.instant),
            _ => None,
        }
    }

    /// Overwrites one named cell. Returns the previous value rendered as
    /// text, or `None` for an unknown column.
    pub fn set_cell(&mut self, column: &str, value: &str) -> Option<String> {
        match column {
            "a_min" | "b_min" | "lower" => {
                let slot = match column {
                    "a_min" => &mut self.a_min,
                    "b_min" => &mut self.b_min,
                    _ => &mut self.lower,
                };
                let old = slot.to_string();
                *slot = value.parse().ok()?;
                Some(old)
            }
            _ => self.cell_mut(column).map(|c| std::mem::replace(c, value.to_string())),
        }
    }
}

/// Applies errata to a transcription. Errors if an erratum names a row or
/// cell that does not exist or whose printed value differs from `printed`.
pub fn apply_errata(rows: &[TableRow], errata: &[Erratum]) -> std::result::Result<Vec<TableRow>, String> {
    let mut out = rows.to_vec();
    for e in errata {
        let row = out
            .iter_mut()
            .find(|r| r.after == e.after && r.before_min == e.before_min && r.before_max == e.before_max)
            .ok_or_else(|| {
                format!(
                    "erratum for missing row D={} U={}..{}",
                    e.after, e.before_min, e.before_max
                )
            })?;
        let old = row
            .set_cell(&e.column, &e.corrected)
            .ok_or_else(|| format!("unknown column {}", e.column))?;
        if old != e.printed {
            return Err(format!(
                "erratum expects {:?} in {} but the transcription has {old:?}",
                e.printed, e.column
            ));
        }
    }
    Ok(out)
}

/// Cell-level differences between two tables keyed by `(D, U_min, U_max)`.
pub fn diff_tables(expected: &[TableRow], actual: &[TableRow]) -> Vec<String> {
    let key = |r: &TableRow| (r.after, r.before_min, r.before_max);
    let exp: BTreeMap<_, _> = expected.iter().map(|r| (key(r), r)).collect();
    let act: BTreeMap<_, _> = actual.iter().map(|r| (key(r), r)).collect();
    let mut out = Vec::new();
    for (k, e) in &exp {
        match act.get(k) {
            None => out.push(format!("missing row D={} U={}..{}", k.0, k.1, k.2)),
            Some(a) if a != e => out.push(format!("row D={} U={}..{}: expected {e:?}, got {a:?}", k.0, k.1, k.2)),
            _ => {}
        }
    }
    for k in act.keys().filter(|k| !exp.contains_key(k)) {
        out.push(format!("unexpected row D={} U={}..{}", k.0, k.1, k.2));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AirViolation {
    pub m: usize,
    pub n: usize,
    pub q: u32,
    pub check: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AirSweepReport {
    pub m_max: usize,
    pub matrices: usize,
    pub violations: Vec<AirViolation>,
}

/// Both property checks on a single matrix, one violation per failing
/// (field, check) pair.
pub fn check_air(air: &AirMatrix, fields: &[PrimeField]) -> Vec<AirViolation> {
    let mut out = Vec::new();
    for &f in fields {
        let (m, n, q) = (air.m(), air.n(), f.modulus());
        if !check_adjacent_independence_over(air, true, &[f]) {
            out.push(AirViolation {
                m,
                n,
                q,
                check: "adjacent_independence",
            });
        }
        if !check_span_exclusion_over(air, Orientation::AboveIsEarlier, &[f]) {
            out.push(AirViolation {
                m,
                n,
                q,
                check: "span_exclusion",
            });
        }
    }
    out
}

/// Every `build_air(m, n)` with `1 ≤ n ≤ m ≤ m_max`.
pub fn sweep_air_properties(m_max: usize, fields: &[PrimeField]) -> AirSweepReport {
    let pairs: Vec<(usize, usize)> = (1..=m_max).flat_map(|m| (1..=m).map(move |n| (m, n))).collect();
    let violations: Vec<AirViolation> = pairs
        .par_iter()
        .flat_map_iter(|&(m, n)| check_air(&build_air(m, n).expect("m >= n >= 1"), fields))
        .collect();
    AirSweepReport {
        m_max,
        matrices: pairs.len(),
        violations,
    }
}

/// `K / ⌊K/2⌋`, the reciprocal of the known `U = D = 1` capacity.
pub fn unit_neighbour_capacity_rate(messages: usize) -> Rate {
    Rate::new(messages as u64, (messages / 2) as u64)
}
