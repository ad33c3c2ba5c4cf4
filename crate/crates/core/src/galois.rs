//! Prime-field arithmetic and the dense linear-algebra kernel.
//!
//! Everything here works over GF(q) for a prime `q`. Vectors are passed as
//! raw `u32` slices whose entries are already reduced mod `q`; the typed
//! [`FieldElement`] exists for scalar work where carrying the field along is
//! worth the extra word.
//!
//! Gaussian elimination always pivots on the first nonzero entry of a column
//! (there is no magnitude in a finite field), so every result, including the
//! particular solution picked by [`annihilator`], is deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// GF(q) for prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub const GF2: PrimeField = PrimeField { q: 2 };
    pub const GF3: PrimeField = PrimeField { q: 3 };

    pub fn new(q: u32) -> Result<Self> {
        if is_prime(q) {
            Ok(PrimeField { q })
        } else {
            Err(Error::NotPrime(q))
        }
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.q
    }

    pub fn element(self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement { value, field: self })
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, field: self }
    }

    pub fn one(self) -> FieldElement {
        FieldElement { value: 1, field: self }
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn reduce(self, value: u64) -> u32 {
        (value % self.q as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse via Fermat: a^(q-2).
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.q) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        let q = self.q as u64;
        let s = a
            .iter()
            .zip(b)
            .fold(0u64, |acc, (&x, &y)| (acc + x as u64 * y as u64) % q);
        s as u32
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A value of GF(q) tagged with its field.
///
/// The arithmetic operators panic when the operands come from different
/// fields; use the `try_*` forms when that cannot be ruled out statically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn try_add(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.add(self.value, rhs.value),
            field: f,
        })
    }

    pub fn try_sub(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.sub(self.value, rhs.value),
            field: f,
        })
    }

    pub fn try_mul(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.mul(self.value, rhs.value),
            field: f,
        })
    }

    pub fn try_div(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.div(self.value, rhs.value)?,
            field: f,
        })
    }

    fn same_field(self, rhs: FieldElement) -> Result<PrimeField> {
        if self.field == rhs.field {
            Ok(self.field)
        } else {
            Err(Error::FieldMismatch {
                left: self.field.q,
                right: rhs.field.q,
            })
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands from different fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_row_major(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.q) {
            return Err(Error::ElementOutOfRange { value: bad, q: field.q });
        }
        Ok(FieldMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from row vectors. All rows must have the same length.
    pub fn from_rows<R: AsRef<[u32]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: expected length {cols}, got {}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(field, rows.len(), cols, data)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn element(&self, i: usize, j: usize) -> FieldElement {
        FieldElement {
            value: self.get(i, j),
            field: self.field,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) -> Result<()> {
        if value >= self.field.q {
            return Err(Error::ElementOutOfRange { value, q: self.field.q });
        }
        self.data[i * self.cols + j] = value;
        Ok(())
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(<[u32]>::to_vec).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn select_rows(&self, indices: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        FieldMatrix {
            field: self.field,
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn vstack(&self, below: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_field(below)?;
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn hstack(&self, right: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_field(right)?;
        if self.rows != right.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, right.rows
            )));
        }
        let cols = self.cols + right.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(right.row(i));
        }
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Reinterprets the entries in another field. Fails if an entry is not
    /// a valid residue there.
    pub fn over(&self, field: PrimeField) -> Result<FieldMatrix> {
        Self::from_row_major(field, self.rows, self.cols, self.data.clone())
    }

    /// `self · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self.row_iter().map(|r| self.field.dot(r, x)).collect())
    }

    /// `x · self` for a row vector `x`.
    pub fn vec_mul(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(xi, a));
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.reduce_rows().len()
    }

    /// Solves `self · x = y`.
    ///
    /// Inconsistency is reported before rank deficiency, so a system that is
    /// both gets [`Error::InconsistentSystem`].
    pub fn solve(&self, y: &[u32]) -> Result<Vec<u32>> {
        let (x, rank) = self.solve_particular(y)?;
        if rank < self.cols {
            return Err(Error::SingularSystem { rank, cols: self.cols });
        }
        Ok(x)
    }

    /// Some solution of `self · x = y` (free variables set to zero) together
    /// with the rank of `self`.
    pub fn solve_particular(&self, y: &[u32]) -> Result<(Vec<u32>, usize)> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                y.len(),
                self.rows
            )));
        }
        if let Some(&bad) = y.iter().find(|&&v| v >= self.field.q) {
            return Err(Error::ElementOutOfRange {
                value: bad,
                q: self.field.q,
            });
        }
        let n = self.cols;
        let mut aug = FieldMatrix::zeros(self.field, self.rows, n + 1);
        for (i, &yi) in y.iter().enumerate() {
            aug.data[i * (n + 1)..i * (n + 1) + n].copy_from_slice(self.row(i));
            aug.data[i * (n + 1) + n] = yi;
        }
        let pivots = aug.reduce_rows();
        if pivots.last() == Some(&n) {
            return Err(Error::InconsistentSystem);
        }
        let mut x = vec![0u32; n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, n);
        }
        Ok((x, pivots.len()))
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    fn reduce_rows(&mut self) -> Vec<usize> {
        let f = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = self.get(r, j);
                self.data[r * cols + j] = f.mul(v, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.data[i * cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn check_field(&self, other: &FieldMatrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.q,
                right: other.field.q,
            })
        }
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.row_iter() {
            let line: Vec<String> = r.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Finds a functional `φ` with `φ·r = 0` for every interference row and
/// `φ·wanted = 1`.
///
/// Such a `φ` exists exactly when `wanted` is outside the span of the
/// interference rows. Free coordinates of the solution are fixed to zero.
pub fn annihilator<R: AsRef<[u32]>>(field: PrimeField, interference: &[R], wanted: &[u32]) -> Result<Vec<u32>> {
    let n = wanted.len();
    let mut system = Vec::with_capacity(interference.len() + 1);
    for r in interference {
        let r = r.as_ref();
        if r.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "interference row of length {} against wanted row of length {n}",
                r.len()
            )));
        }
        system.push(r.to_vec());
    }
    system.push(wanted.to_vec());
    let a = FieldMatrix::from_rows(field, &system)?;
    let mut rhs = vec![0u32; system.len()];
    *rhs.last_mut().expect("wanted row present") = 1;
    match a.solve_particular(&rhs) {
        Ok((phi, _)) => Ok(phi),
        Err(Error::InconsistentSystem) => Err(Error::NotDecodable),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn rejects_composite_moduli() {
        for q in [0, 1, 4, 6, 9, 15, 91] {
            assert_eq!(PrimeField::new(q), Err(Error::NotPrime(q)));
        }
        for q in [2, 3, 5, 7, 11, 97] {
            assert!(PrimeField::new(q).is_ok());
        }
    }

    #[test]
    fn element_range_is_checked() {
        assert!(gf(5).element(4).is_ok());
        assert_eq!(gf(5).element(5), Err(Error::ElementOutOfRange { value: 5, q: 5 }));
    }

    #[test]
    fn small_field_identities() {
        let f2 = gf(2);
        assert_eq!((f2.one() + f2.one()).value(), 0);
        let f3 = gf(3);
        assert_eq!(f3.element(2).unwrap().inverse().unwrap().value(), 2);
        let f7 = gf(7);
        assert_eq!((f7.element(3).unwrap() * f7.element(5).unwrap()).value(), 1);
        assert_eq!(f7.zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = gf(2).one();
        let b = gf(3).one();
        assert_eq!(a.try_add(b), Err(Error::FieldMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn exhaustive_axioms_up_to_eleven() {
        for q in [2u32, 3, 5, 7, 11] {
            let f = gf(q);
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    // independent oracle: plain integer arithmetic mod q
                    assert_eq!(f.add(a, b), (a + b) % q);
                    assert_eq!(f.mul(a, b), (a * b) % q);
                    assert_eq!(f.sub(a, b), (a + q - b) % q);
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(FieldMatrix::identity(f, 3).rank(), 3);
        assert_eq!(FieldMatrix::zeros(f, 2, 4).rank(), 0);
        let m = FieldMatrix::from_rows(f, &[[1, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        // [1 1] and [1 2] are independent over GF(3) but [1 1],[2 2] are not
        let m = FieldMatrix::from_rows(gf(3), &[[1, 1], [2, 2]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let f = gf(2);
        let i2 = FieldMatrix::identity(f, 2);
        assert_eq!(i2.solve(&[1, 0]).unwrap(), vec![1, 0]);

        let tall = FieldMatrix::from_rows(f, &[[1, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(tall.solve(&[1, 1, 0]).unwrap(), vec![1, 1]);
        assert_eq!(tall.solve(&[1, 1, 1]), Err(Error::InconsistentSystem));

        let dup = FieldMatrix::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(dup.solve(&[0, 1]), Err(Error::InconsistentSystem));
        assert_eq!(dup.solve(&[1, 1]), Err(Error::SingularSystem { rank: 1, cols: 2 }));
    }

    #[test]
    fn solve_over_gf5() {
        let f = gf(5);
        let a = FieldMatrix::from_rows(f, &[[2, 3], [1, 1]]).unwrap();
        let x = [3, 1];
        let y = a.mul_vec(&x).unwrap();
        assert_eq!(a.solve(&y).unwrap(), x.to_vec());
    }

    #[test]
    fn annihilator_examples() {
        let f = gf(2);
        assert_eq!(annihilator(f, &[[0u32, 1]], &[1, 0]).unwrap(), vec![1, 0]);
        assert_eq!(annihilator(f, &[[1u32, 1]], &[1, 1]), Err(Error::NotDecodable));
        // rows 1,2 of the 5x2 AIR matrix span everything
        assert_eq!(annihilator(f, &[[0u32, 1], [1, 0]], &[1, 1]), Err(Error::NotDecodable));
        assert_eq!(annihilator(f, &[[0u32, 1]], &[1, 1]).unwrap(), vec![1, 0]);
        let none: [[u32; 2]; 0] = [];
        let phi = annihilator(f, &none, &[0, 1]).unwrap();
        assert_eq!(f.dot(&phi, &[0, 1]), 1);
    }

    #[test]
    fn annihilator_matches_span_enumeration() {
        // oracle: enumerate the span of the interference rows over GF(2)
        let f = gf(2);
        let rows: Vec<Vec<u32>> = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let mut span = Vec::new();
        for mask in 0..4u32 {
            let mut v = vec![0u32; 3];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, b) in v.iter_mut().zip(r) {
                        *a ^= b;
                    }
                }
            }
            span.push(v);
        }
        for w in 0..8u32 {
            let wanted: Vec<u32> = (0..3).map(|i| w >> i & 1).collect();
            let res = annihilator(f, &rows, &wanted);
            if span.contains(&wanted) {
                assert_eq!(res, Err(Error::NotDecodable));
            } else {
                let phi = res.unwrap();
                assert_eq!(f.dot(&phi, &wanted), 1);
                for r in &rows {
                    assert_eq!(f.dot(&phi, r), 0);
                }
            }
        }
    }

    #[test]
    fn stacking_and_products() {
        let f = gf(2);
        let a = FieldMatrix::identity(f, 2);
        let b = FieldMatrix::from_rows(f, &[[1, 1]]).unwrap();
        let s = a.vstack(&b).unwrap();
        assert_eq!(s.to_rows(), vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(s.vec_mul(&[1, 1, 1]).unwrap(), vec![0, 0]);
        assert_eq!(s.transpose().rows(), 2);
        assert!(a.hstack(&b).is_err());
        assert!(a.vstack(&FieldMatrix::identity(gf(3), 2)).is_err());
    }
}
