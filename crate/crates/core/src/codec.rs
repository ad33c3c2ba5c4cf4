//! Encoders and per-receiver decoders for the three constructions:
//!
//! * [`PartitionedCode`]: `b`-dimensional vector code, each of the `τ`
//!   partitions encoded by a `t × γ` AIR matrix;
//! * [`PaddedScalarCode`]: scalar code over `a` padded zero messages with a
//!   `(K+a) × (D+1+a+b)` AIR matrix;
//! * [`WindowCode`]: scalar code with a `K × (D+U+1)` AIR matrix.
//!
//! Decoders see only the broadcast and a [`SideInfo`], which refuses to
//! hold anything outside the receiver's side-information set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::air::{build_air, AirMatrix};
use crate::error::{Error, Result};
use crate::galois::{annihilator, FieldElement, FieldMatrix, PrimeField};
use crate::suicp::{PartitionScheme, ScalarPadding, SniProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Partitioned,
    ScalarPadded,
    ScalarDu,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Partitioned => "partitioned",
            SchemeKind::ScalarPadded => "scalar_padded",
            SchemeKind::ScalarDu => "scalar_du",
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partitioned" => Ok(SchemeKind::Partitioned),
            "scalar_padded" => Ok(SchemeKind::ScalarPadded),
            "scalar_du" => Ok(SchemeKind::ScalarDu),
            other => Err(Error::Schema(format!("unknown scheme {other:?}"))),
        }
    }
}

/// `K·b` message symbols in flat order: `y_w = x_{⌊w/b⌋, w mod b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageVector {
    field: PrimeField,
    messages: usize,
    dim: usize,
    symbols: Vec<u32>,
}

impl MessageVector {
    pub fn new(field: PrimeField, messages: usize, dim: usize, symbols: Vec<u32>) -> Result<Self> {
        if dim == 0 || symbols.len() != messages * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} symbols for K={messages}, b={dim}",
                symbols.len()
            )));
        }
        if let Some(&bad) = symbols.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::ElementOutOfRange {
                value: bad,
                q: field.modulus(),
            });
        }
        Ok(MessageVector {
            field,
            messages,
            dim,
            symbols,
        })
    }

    pub fn zeros(field: PrimeField, messages: usize, dim: usize) -> Self {
        MessageVector {
            field,
            messages,
            dim,
            symbols: vec![0; messages * dim],
        }
    }

    /// The unit vector with a one at flat position `w`.
    pub fn basis(field: PrimeField, messages: usize, dim: usize, w: usize) -> Self {
        let mut v = Self::zeros(field, messages, dim);
        v.symbols[w] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// The `b` symbols of message `k`.
    pub fn message(&self, k: usize) -> &[u32] {
        &self.symbols[k * self.dim..(k + 1) * self.dim]
    }

    pub fn to_file(&self) -> MessageFile {
        MessageFile {
            q: self.field.modulus(),
            messages: self.messages,
            b: self.dim,
            symbols: self.symbols.clone(),
        }
    }

    pub fn from_file(file: &MessageFile) -> Result<Self> {
        let field = PrimeField::new(file.q)?;
        Self::new(field, file.messages, file.b, file.symbols.clone())
            .map_err(|e| Error::Schema(format!("message file: {e}")))
    }
}

/// `{"q":2, "K":13, "b":5, "symbols":[…]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageFile {
    pub q: u32,
    #[serde(rename = "K")]
    pub messages: usize,
    pub b: usize,
    pub symbols: Vec<u32>,
}

/// Code symbols `c_0 … c_{N−1}` in global index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Broadcast {
    field: PrimeField,
    scheme: SchemeKind,
    symbols: Vec<u32>,
}

impl Broadcast {
    pub fn new(field: PrimeField, scheme: SchemeKind, symbols: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::ElementOutOfRange {
                value: bad,
                q: field.modulus(),
            });
        }
        Ok(Broadcast { field, scheme, symbols })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn to_file(&self) -> BroadcastFile {
        BroadcastFile {
            q: self.field.modulus(),
            scheme: self.scheme,
            n: self.symbols.len(),
            symbols: self.symbols.clone(),
        }
    }

    pub fn from_file(file: &BroadcastFile) -> Result<Self> {
        let field = PrimeField::new(file.q)?;
        if file.n != file.symbols.len() {
            return Err(Error::Schema(format!(
                "broadcast declares N={} but carries {} symbols",
                file.n,
                file.symbols.len()
            )));
        }
        Self::new(field, file.scheme, file.symbols.clone()).map_err(|e| Error::Schema(format!("broadcast file: {e}")))
    }
}

/// `{"q":…, "scheme":"partitioned"|"scalar_padded"|"scalar_du", "N":…, "symbols":[…]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BroadcastFile {
    pub q: u32,
    pub scheme: SchemeKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub symbols: Vec<u32>,
}

/// What one receiver knows: the full contents of each message in its
/// side-information set, and nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideInfo {
    receiver: usize,
    known: BTreeMap<usize, Vec<u32>>,
}

impl SideInfo {
    /// Extracts receiver `k`'s side information from the full message.
    pub fn for_receiver(problem: &SniProblem, k: usize, msg: &MessageVector) -> Self {
        let known = problem
            .side_info_set(k)
            .into_iter()
            .map(|i| (i, msg.message(i).to_vec()))
            .collect();
        SideInfo { receiver: k, known }
    }

    /// Builds side information from explicit entries. Validated against the
    /// problem when it is handed to a decoder.
    pub fn from_entries(receiver: usize, entries: impl IntoIterator<Item = (usize, Vec<u32>)>) -> Self {
        SideInfo {
            receiver,
            known: entries.into_iter().collect(),
        }
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    pub fn messages(&self) -> impl Iterator<Item = (usize, &[u32])> + '_ {
        self.known.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    fn symbol(&self, message: usize, slot: usize) -> Result<u32> {
        self.known
            .get(&message)
            .map(|v| v[slot])
            .ok_or(Error::MissingSideInfo(message))
    }

    fn validate(&self, problem: &SniProblem, receiver: usize, dim: usize, field: PrimeField) -> Result<()> {
        let allowed = problem.side_info_set(receiver);
        if let Some(&extra) = self.known.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::UnexpectedSideInfo(extra));
        }
        if let Some(&missing) = allowed.iter().find(|k| !self.known.contains_key(k)) {
            return Err(Error::MissingSideInfo(missing));
        }
        for v in self.known.values() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "side information of length {} for b={dim}",
                    v.len()
                )));
            }
            if let Some(&bad) = v.iter().find(|&&x| x >= field.modulus()) {
                return Err(Error::ElementOutOfRange {
                    value: bad,
                    q: field.modulus(),
                });
            }
        }
        Ok(())
    }
}

/// Which code symbols one decode touched, and what it solved for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeTrace {
    pub receiver: usize,
    pub slot: usize,
    pub code_indices: Vec<usize>,
    pub solved: Vec<u32>,
}

/// Common surface of the three constructions.
pub trait IndexCode: Send + Sync {
    fn kind(&self) -> SchemeKind;
    fn problem(&self) -> &SniProblem;
    fn field(&self) -> PrimeField;
    /// Symbols per message (`b`).
    fn dim(&self) -> usize;
    /// Broadcast length `N`.
    fn code_len(&self) -> usize;
    /// Shape of the AIR matrix in use.
    fn air_dims(&self) -> (usize, usize);
    fn encode(&self, msg: &MessageVector) -> Result<Broadcast>;
    /// Recovers symbol `slot` of message `receiver`.
    fn decode(
        &self,
        broadcast: &Broadcast,
        receiver: usize,
        slot: usize,
        side: &SideInfo,
    ) -> Result<(FieldElement, DecodeTrace)>;

    /// Decodes all `b` wanted symbols of one receiver.
    fn decode_receiver(
        &self,
        broadcast: &Broadcast,
        receiver: usize,
        side: &SideInfo,
    ) -> Result<Vec<(FieldElement, DecodeTrace)>> {
        (0..self.dim())
            .map(|j| self.decode(broadcast, receiver, j, side))
            .collect()
    }
}

fn check_message(code: &dyn IndexCode, msg: &MessageVector) -> Result<()> {
    if msg.field != code.field() {
        return Err(Error::FieldMismatch {
            left: msg.field.modulus(),
            right: code.field().modulus(),
        });
    }
    let k = code.problem().messages();
    if msg.messages != k || msg.dim != code.dim() {
        return Err(Error::DimensionMismatch(format!(
            "message is K={}, b={} but the code expects K={k}, b={}",
            msg.messages,
            msg.dim,
            code.dim()
        )));
    }
    Ok(())
}

fn check_decode_inputs(
    code: &dyn IndexCode,
    broadcast: &Broadcast,
    receiver: usize,
    slot: usize,
    side: &SideInfo,
) -> Result<()> {
    if broadcast.scheme != code.kind() {
        return Err(Error::Schema(format!(
            "broadcast was produced by {} but decoding as {}",
            broadcast.scheme.name(),
            code.kind().name()
        )));
    }
    if broadcast.field != code.field() {
        return Err(Error::FieldMismatch {
            left: broadcast.field.modulus(),
            right: code.field().modulus(),
        });
    }
    if broadcast.len() != code.code_len() {
        return Err(Error::DimensionMismatch(format!(
            "broadcast has {} symbols, code length is {}",
            broadcast.len(),
            code.code_len()
        )));
    }
    if receiver >= code.problem().messages() || slot >= code.dim() || side.receiver != receiver {
        return Err(Error::ReceiverOutOfRange { receiver, slot });
    }
    side.validate(code.problem(), receiver, code.dim(), code.field())
}

/// Solves `window · u = residual` where `window` holds the chosen AIR rows
/// as columns.
fn solve_window(matrix: &FieldMatrix, rows: &[usize], residual: &[u32]) -> Result<Vec<u32>> {
    let system = matrix.select_rows(rows).transpose();
    system.solve(residual).map_err(|e| match e {
        Error::SingularSystem { .. } | Error::InconsistentSystem => Error::SingularWindow { start: rows[0] },
        other => other,
    })
}

/// Partition-based `b`-dimensional vector code.
#[derive(Debug, Clone)]
pub struct PartitionedCode {
    problem: SniProblem,
    scheme: PartitionScheme,
    field: PrimeField,
    matrix: FieldMatrix,
}

impl PartitionedCode {
    pub fn new(problem: SniProblem, scheme: PartitionScheme, field: PrimeField) -> Self {
        let matrix = scheme.air.over(field);
        PartitionedCode {
            problem,
            scheme,
            field,
            matrix,
        }
    }

    /// The minimum-rate scheme for `problem`.
    pub fn min_rate(problem: SniProblem, field: PrimeField) -> Result<Self> {
        let r = problem.min_rate_fraction();
        Ok(Self::new(problem, problem.partition_params(r.a, r.b)?, field))
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }
}

impl IndexCode for PartitionedCode {
    fn kind(&self) -> SchemeKind {
        SchemeKind::Partitioned
    }

    fn problem(&self) -> &SniProblem {
        &self.problem
    }

    fn field(&self) -> PrimeField {
        self.field
    }

    fn dim(&self) -> usize {
        self.scheme.b
    }

    fn code_len(&self) -> usize {
        self.scheme.code_len
    }

    fn air_dims(&self) -> (usize, usize) {
        (self.scheme.partition_size, self.scheme.gamma)
    }

    /// `c_{i+sτ} = Σ_h y_{i+hτ} · L[h][s]` for every partition `i`.
    fn encode(&self, msg: &MessageVector) -> Result<Broadcast> {
        check_message(self, msg)?;
        let PartitionScheme {
            tau,
            partition_size,
            gamma,
            code_len,
            ..
        } = self.scheme;
        let mut out = vec![0u32; code_len];
        let mut part = vec![0u32; partition_size];
        for i in 0..tau {
            for (h, slot) in part.iter_mut().enumerate() {
                *slot = msg.symbols[i + h * tau];
            }
            for (s, c) in self.matrix.vec_mul(&part)?.into_iter().enumerate().take(gamma) {
                out[i + s * tau] = c;
            }
        }
        Broadcast::new(self.field, SchemeKind::Partitioned, out)
    }

    /// Solves the `γ × γ` system on the cyclic row window starting at the
    /// wanted symbol's position within its partition. Every other position
    /// of that partition belongs to side information.
    fn decode(
        &self,
        broadcast: &Broadcast,
        receiver: usize,
        slot: usize,
        side: &SideInfo,
    ) -> Result<(FieldElement, DecodeTrace)> {
        check_decode_inputs(self, broadcast, receiver, slot, side)?;
        let f = self.field;
        let PartitionScheme {
            b,
            tau,
            partition_size: t,
            gamma,
            ..
        } = self.scheme;
        let w = receiver * b + slot;
        let (g, h) = (w % tau, w / tau);
        let window: Vec<usize> = (0..gamma).map(|s| (h + s) % t).collect();
        let code_indices: Vec<usize> = (0..gamma).map(|s| g + s * tau).collect();

        let mut residual: Vec<u32> = code_indices.iter().map(|&i| broadcast.symbols[i]).collect();
        for p in (0..t).filter(|p| !window.contains(p)) {
            let (msg, sym) = self.scheme.symbol_of(g + p * tau);
            let y = side.symbol(msg, sym)?;
            if y == 0 {
                continue;
            }
            for (s, r) in residual.iter_mut().enumerate() {
                *r = f.sub(*r, f.mul(y, self.matrix.get(p, s)));
            }
        }
        let solved = solve_window(&self.matrix, &window, &residual)?;
        let value = f.element(solved[0])?;
        Ok((
            value,
            DecodeTrace {
                receiver,
                slot,
                code_indices,
                solved,
            },
        ))
    }
}

/// Scalar code over the problem padded with `a` always-zero messages.
#[derive(Debug, Clone)]
pub struct PaddedScalarCode {
    problem: SniProblem,
    padding: ScalarPadding,
    field: PrimeField,
    air: AirMatrix,
    matrix: FieldMatrix,
}

impl PaddedScalarCode {
    pub fn new(problem: SniProblem, a: usize, b: usize, field: PrimeField) -> Result<Self> {
        let padding = ScalarPadding::new(&problem, a, b)?;
        let (m, n) = padding.air_dims(&problem);
        let air = build_air(m, n)?;
        let matrix = air.over(field);
        Ok(PaddedScalarCode {
            problem,
            padding,
            field,
            air,
            matrix,
        })
    }

    /// Uses the smallest padding found by the search.
    pub fn min_length(problem: SniProblem, field: PrimeField) -> Result<Self> {
        let p = problem.scalar_padding();
        Self::new(problem, p.a, p.b, field)
    }

    pub fn padding(&self) -> ScalarPadding {
        self.padding
    }

    pub fn air(&self) -> &AirMatrix {
        &self.air
    }
}

impl IndexCode for PaddedScalarCode {
    fn kind(&self) -> SchemeKind {
        SchemeKind::ScalarPadded
    }

    fn problem(&self) -> &SniProblem {
        &self.problem
    }

    fn field(&self) -> PrimeField {
        self.field
    }

    fn dim(&self) -> usize {
        1
    }

    fn code_len(&self) -> usize {
        self.padding.length
    }

    fn air_dims(&self) -> (usize, usize) {
        (self.air.m(), self.air.n())
    }

    fn encode(&self, msg: &MessageVector) -> Result<Broadcast> {
        check_message(self, msg)?;
        let mut padded = msg.symbols.clone();
        padded.resize(self.air.m(), 0);
        Broadcast::new(self.field, SchemeKind::ScalarPadded, self.matrix.vec_mul(&padded)?)
    }

    /// Strips the known rows, then applies a functional that kills every
    /// interference row and is one on the wanted row.
    fn decode(
        &self,
        broadcast: &Broadcast,
        receiver: usize,
        slot: usize,
        side: &SideInfo,
    ) -> Result<(FieldElement, DecodeTrace)> {
        check_decode_inputs(self, broadcast, receiver, slot, side)?;
        let f = self.field;
        let mut residual = broadcast.symbols.clone();
        for (msg, value) in side.messages() {
            let x = value[0];
            if x == 0 {
                continue;
            }
            for (r, &l) in residual.iter_mut().zip(self.matrix.row(msg)) {
                *r = f.sub(*r, f.mul(x, l));
            }
        }
        let interference: Vec<&[u32]> = self
            .problem
            .interference(receiver)
            .into_iter()
            .map(|i| self.matrix.row(i))
            .collect();
        let phi = annihilator(f, &interference, self.matrix.row(receiver))?;
        let value = f.dot(&phi, &residual);
        let code_indices = phi
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
            .collect();
        Ok((
            f.element(value)?,
            DecodeTrace {
                receiver,
                slot,
                code_indices,
                solved: vec![value],
            },
        ))
    }
}

/// Scalar code of length `D+U+1` from a `K × (D+U+1)` AIR matrix.
#[derive(Debug, Clone)]
pub struct WindowCode {
    problem: SniProblem,
    field: PrimeField,
    air: AirMatrix,
    matrix: FieldMatrix,
}

impl WindowCode {
    pub fn new(problem: SniProblem, field: PrimeField) -> Result<Self> {
        let air = build_air(problem.messages(), problem.after() + problem.before() + 1)?;
        let matrix = air.over(field);
        Ok(WindowCode {
            problem,
            field,
            air,
            matrix,
        })
    }

    pub fn air(&self) -> &AirMatrix {
        &self.air
    }
}

impl IndexCode for WindowCode {
    fn kind(&self) -> SchemeKind {
        SchemeKind::ScalarDu
    }

    fn problem(&self) -> &SniProblem {
        &self.problem
    }

    fn field(&self) -> PrimeField {
        self.field
    }

    fn dim(&self) -> usize {
        1
    }

    fn code_len(&self) -> usize {
        self.air.n()
    }

    fn air_dims(&self) -> (usize, usize) {
        (self.air.m(), self.air.n())
    }

    fn encode(&self, msg: &MessageVector) -> Result<Broadcast> {
        check_message(self, msg)?;
        Broadcast::new(self.field, SchemeKind::ScalarDu, self.matrix.vec_mul(&msg.symbols)?)
    }

    /// After removing side information, the unknowns are the `D+U+1`
    /// consecutive messages `k−U … k+D`, whose rows form an AIR window.
    fn decode(
        &self,
        broadcast: &Broadcast,
        receiver: usize,
        slot: usize,
        side: &SideInfo,
    ) -> Result<(FieldElement, DecodeTrace)> {
        check_decode_inputs(self, broadcast, receiver, slot, side)?;
        let f = self.field;
        let kk = self.problem.messages();
        let u = self.problem.before();
        let window = self.air.window((receiver + kk - u) % kk, self.air.n());
        let mut residual = broadcast.symbols.clone();
        for (msg, value) in side.messages() {
            let x = value[0];
            if x == 0 {
                continue;
            }
            for (r, &l) in residual.iter_mut().zip(self.matrix.row(msg)) {
                *r = f.sub(*r, f.mul(x, l));
            }
        }
        let solved = solve_window(&self.matrix, &window, &residual)?;
        let value = f.element(solved[u])?;
        let code_indices = (0..self.air.n()).collect();
        Ok((
            value,
            DecodeTrace {
                receiver,
                slot,
                code_indices,
                solved,
            },
        ))
    }
}
