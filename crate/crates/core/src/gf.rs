//! Exact arithmetic over GF(2) and GF(3), tensor products of 2-vectors and
//! dense row reduction.
//!
//! Matrix rows are bit-sliced: a row of up to 64 entries is stored as two
//! words, one holding the positions of entries equal to 1 and one holding the
//! positions of entries equal to 2. Over GF(2) the second plane is always
//! empty. Row operations then cost a handful of word operations regardless of
//! the column count, which matters because rank computations over 16-column
//! matrices dominate the four-factor pipeline.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The two supported prime fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Gf2,
    Gf3,
}

impl Field {
    pub fn from_order(q: u8) -> Result<Field> {
        match q {
            2 => Ok(Field::Gf2),
            3 => Ok(Field::Gf3),
            _ => Err(Error::UnsupportedField(q)),
        }
    }

    pub fn order(self) -> u8 {
        match self {
            Field::Gf2 => 2,
            Field::Gf3 => 3,
        }
    }

    pub fn element(self, value: u8) -> Result<FieldElement> {
        if value < self.order() {
            Ok(FieldElement { value, field: self })
        } else {
            Err(Error::ElementOutOfRange { value, q: self.order() })
        }
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.order()
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        (a + self.order() - b) % self.order()
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        (a * b) % self.order()
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        (self.order() - a) % self.order()
    }

    /// Multiplicative inverse of a nonzero element. Every nonzero element of
    /// GF(2) and GF(3) is its own inverse.
    #[inline]
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0 && a < self.order());
        a
    }
}

/// A single element of GF(2) or GF(3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u8,
    field: Field,
}

impl FieldElement {
    pub fn value(self) -> u8 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement { value: self.field.sub(self.value, rhs.value), field: self.field }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: self.field.neg(self.value), field: self.field }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A vector of the 2-dimensional space over GF(q), used as the representative
/// of a point of PG(1, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vec2(pub [u8; 2]);

impl Vec2 {
    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0]
    }
}

/// A row of at most 64 field entries, bit-sliced into the positions holding
/// 1 and the positions holding 2.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedRow {
    pub ones: u64,
    pub twos: u64,
}

impl PackedRow {
    pub const ZERO: PackedRow = PackedRow { ones: 0, twos: 0 };

    pub fn from_entries(entries: &[u8]) -> PackedRow {
        assert!(entries.len() <= 64);
        let mut row = PackedRow::ZERO;
        for (c, &v) in entries.iter().enumerate() {
            row.set(c, v);
        }
        row
    }

    pub fn to_entries(self, len: usize) -> Vec<u8> {
        (0..len).map(|c| self.get(c)).collect()
    }

    #[inline]
    pub fn get(self, col: usize) -> u8 {
        ((self.ones >> col) & 1) as u8 | ((((self.twos >> col) & 1) as u8) << 1)
    }

    #[inline]
    pub fn set(&mut self, col: usize, value: u8) {
        let bit = 1u64 << col;
        self.ones &= !bit;
        self.twos &= !bit;
        match value {
            0 => {}
            1 => self.ones |= bit,
            2 => self.twos |= bit,
            _ => panic!("entry {value} is not a GF(3) element"),
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        (self.ones | self.twos) == 0
    }

    #[inline]
    pub fn support(self) -> u64 {
        self.ones | self.twos
    }

    /// Index of the first nonzero entry.
    #[inline]
    pub fn leading(self) -> Option<usize> {
        let s = self.support();
        if s == 0 {
            None
        } else {
            Some(s.trailing_zeros() as usize)
        }
    }

    #[inline]
    pub fn neg(self, field: Field) -> PackedRow {
        match field {
            Field::Gf2 => self,
            Field::Gf3 => PackedRow { ones: self.twos, twos: self.ones },
        }
    }

    #[inline]
    pub fn add(self, other: PackedRow, field: Field) -> PackedRow {
        match field {
            Field::Gf2 => PackedRow { ones: self.ones ^ other.ones, twos: 0 },
            Field::Gf3 => {
                let (x1, x2, y1, y2) = (self.ones, self.twos, other.ones, other.twos);
                let x0 = !(x1 | x2);
                let y0 = !(y1 | y2);
                PackedRow {
                    ones: (x1 & y0) | (x0 & y1) | (x2 & y2),
                    twos: (x2 & y0) | (x0 & y2) | (x1 & y1),
                }
            }
        }
    }

    #[inline]
    pub fn sub(self, other: PackedRow, field: Field) -> PackedRow {
        self.add(other.neg(field), field)
    }

    #[inline]
    pub fn scale(self, s: u8, field: Field) -> PackedRow {
        match s % field.order() {
            0 => PackedRow::ZERO,
            1 => self,
            _ => self.neg(field),
        }
    }

    /// Shift every entry `n` columns towards higher indices.
    #[inline]
    pub fn shifted(self, n: u32) -> PackedRow {
        PackedRow { ones: self.ones << n, twos: self.twos << n }
    }

    #[inline]
    pub fn or(self, other: PackedRow) -> PackedRow {
        PackedRow { ones: self.ones | other.ones, twos: self.twos | other.twos }
    }

    /// Standard bilinear pairing `Σ self[i]·other[i]`.
    #[inline]
    pub fn dot(self, other: PackedRow, field: Field) -> u8 {
        match field {
            Field::Gf2 => ((self.ones & other.ones).count_ones() & 1) as u8,
            Field::Gf3 => {
                let plus = (self.ones & other.ones).count_ones() + (self.twos & other.twos).count_ones();
                let minus = (self.ones & other.twos).count_ones() + (self.twos & other.ones).count_ones();
                ((plus + 2 * minus) % 3) as u8
            }
        }
    }

    /// Scale so that the first nonzero entry is 1.
    #[inline]
    pub fn normalized(self, field: Field) -> PackedRow {
        match self.leading() {
            Some(c) if self.get(c) == 2 => self.neg(field),
            _ => self,
        }
    }
}

/// Tensor product of 2-vectors. The coordinate at multi-index
/// `(b_1, …, b_k)` is `Π v_i[b_i]`, laid out lexicographically with `b_1` most
/// significant.
pub fn tensor_product(field: Field, vectors: &[Vec2]) -> Result<Vec<u8>> {
    let mut out = vec![1u8];
    for v in vectors {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        if v.0.iter().any(|&x| x >= field.order()) {
            return Err(Error::ElementOutOfRange { value: v.0[0].max(v.0[1]), q: field.order() });
        }
        let mut next = Vec::with_capacity(out.len() * 2);
        for &o in &out {
            next.push(field.mul(o, v.0[0]));
            next.push(field.mul(o, v.0[1]));
        }
        out = next;
    }
    Ok(out)
}

/// Dense matrix over GF(q) with at most 64 columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: Field,
    cols: usize,
    rows: Vec<PackedRow>,
}

impl DenseMatrix {
    pub fn new(field: Field, cols: usize) -> DenseMatrix {
        assert!(cols <= 64, "at most 64 columns are supported");
        DenseMatrix { field, cols, rows: Vec::new() }
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u8>]) -> Result<DenseMatrix> {
        let mut m = DenseMatrix::new(field, cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a {}-column matrix", r.len(), cols)));
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= field.order()) {
                return Err(Error::ElementOutOfRange { value: bad, q: field.order() });
            }
            m.rows.push(PackedRow::from_entries(r));
        }
        Ok(m)
    }

    pub fn from_packed(field: Field, cols: usize, rows: Vec<PackedRow>) -> DenseMatrix {
        assert!(cols <= 64);
        DenseMatrix { field, cols, rows }
    }

    pub fn push_row(&mut self, row: PackedRow) {
        self.rows.push(row);
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn packed_rows(&self) -> &[PackedRow] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        FieldElement { value: self.rows[r].get(c), field: self.field }
    }

    pub fn transpose(&self) -> DenseMatrix {
        assert!(self.rows.len() <= 64, "transpose limited to 64 rows");
        let mut t = DenseMatrix::new(self.field, self.rows.len());
        for c in 0..self.cols {
            let mut row = PackedRow::ZERO;
            for (r, src) in self.rows.iter().enumerate() {
                row.set(r, src.get(c));
            }
            t.rows.push(row);
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.field);
        for &r in &self.rows {
            red.insert(r);
        }
        red.rank()
    }

    /// `M·c`, for a column vector given as a packed row.
    pub fn apply(&self, c: PackedRow) -> Vec<u8> {
        self.rows.iter().map(|r| r.dot(c, self.field)).collect()
    }

    /// The unique (up to scalar) nonzero vector `c` with `M·c = 0`, scaled so
    /// its first nonzero coordinate is 1.
    pub fn kernel_vector(&self) -> Result<PackedRow> {
        let mut red = RowReducer::new(self.field);
        for &r in &self.rows {
            red.insert(r);
        }
        red.kernel_vector(self.cols)
    }
}

/// Incremental Gaussian elimination with first-nonzero pivoting. Pivot rows are
/// indexed by their leading column and normalized to a leading 1.
#[derive(Debug, Clone)]
pub struct RowReducer {
    field: Field,
    pivots: [PackedRow; 64],
    mask: u64,
}

impl RowReducer {
    pub fn new(field: Field) -> RowReducer {
        RowReducer { field, pivots: [PackedRow::ZERO; 64], mask: 0 }
    }

    pub fn rank(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Reduce `row` against the current pivots.
    #[inline]
    pub fn reduce(&self, mut row: PackedRow) -> PackedRow {
        loop {
            let hits = row.support() & self.mask;
            if hits == 0 {
                return row;
            }
            let c = hits.trailing_zeros() as usize;
            let p = self.pivots[c];
            row = if (row.ones >> c) & 1 == 1 { row.sub(p, self.field) } else { row.add(p, self.field) };
        }
    }

    /// Insert a row; returns true if it raised the rank.
    #[inline]
    pub fn insert(&mut self, row: PackedRow) -> bool {
        let r = self.reduce(row);
        match r.leading() {
            None => false,
            Some(c) => {
                self.pivots[c] = r.normalized(self.field);
                self.mask |= 1 << c;
                true
            }
        }
    }

    pub fn pivot_columns(&self) -> u64 {
        self.mask
    }

    /// Kernel of the inserted rows when it is exactly one-dimensional.
    pub fn kernel_vector(&self, cols: usize) -> Result<PackedRow> {
        let full = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        let free = full & !self.mask;
        if free.count_ones() != 1 {
            return Err(Error::KernelNotOneDimensional { rank: self.rank(), cols });
        }
        let f = free.trailing_zeros() as usize;
        // Back substitution into reduced echelon form, last pivot first.
        let mut reduced = self.pivots;
        let mut cols_desc: Vec<usize> = (0..64).filter(|c| self.mask >> c & 1 == 1).collect();
        cols_desc.reverse();
        for (i, &c) in cols_desc.iter().enumerate() {
            let mut row = reduced[c];
            for &later in &cols_desc[..i] {
                match row.get(later) {
                    0 => {}
                    1 => row = row.sub(reduced[later], self.field),
                    _ => row = row.add(reduced[later], self.field),
                }
            }
            reduced[c] = row;
        }
        let mut x = PackedRow::ZERO;
        x.set(f, 1);
        for &c in &cols_desc {
            x.set(c, self.field.neg(reduced[c].get(f)));
        }
        Ok(x.normalized(self.field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_row_addition_matches_scalar_table() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                let x = PackedRow::from_entries(&[a]);
                let y = PackedRow::from_entries(&[b]);
                assert_eq!(x.add(y, Field::Gf3).get(0), (a + b) % 3);
                assert_eq!(x.sub(y, Field::Gf3).get(0), (a + 3 - b) % 3);
                assert_eq!(x.dot(y, Field::Gf3), (a * b) % 3);
            }
        }
    }

    #[test]
    fn tensor_product_examples() {
        let f = Field::Gf3;
        assert_eq!(tensor_product(f, &[Vec2([1, 0]), Vec2([1, 0])]).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(tensor_product(f, &[Vec2([0, 1]), Vec2([0, 1])]).unwrap(), vec![0, 0, 0, 1]);
        assert_eq!(tensor_product(f, &[Vec2([1, 1]), Vec2([1, 2])]).unwrap(), vec![1, 2, 1, 2]);
        assert!(matches!(tensor_product(f, &[Vec2([0, 0])]), Err(Error::ZeroVector)));
    }

    #[test]
    fn rank_examples() {
        let f = Field::Gf3;
        let id: Vec<Vec<u8>> = (0..4).map(|i| (0..4).map(|j| u8::from(i == j)).collect()).collect();
        assert_eq!(DenseMatrix::from_rows(f, 4, &id).unwrap().rank(), 4);
        let twice = DenseMatrix::from_rows(f, 3, &[vec![1, 2, 0], vec![1, 2, 0]]).unwrap();
        assert_eq!(twice.rank(), 1);
        assert_eq!(DenseMatrix::new(f, 5).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let f = Field::Gf3;
        let m = DenseMatrix::from_rows(f, 2, &[vec![1, 0]]).unwrap();
        assert_eq!(m.kernel_vector().unwrap().to_entries(2), vec![0, 1]);
        let id = DenseMatrix::from_rows(f, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(id.kernel_vector(), Err(Error::KernelNotOneDimensional { .. })));
        // x + y + z = 0 and x + 2y = 0 over GF(3): (1, 1, 1).
        let m = DenseMatrix::from_rows(f, 3, &[vec![1, 1, 1], vec![1, 2, 0]]).unwrap();
        let c = m.kernel_vector().unwrap();
        assert_eq!(c.to_entries(3), vec![1, 1, 1]);
        assert!(m.apply(c).iter().all(|&v| v == 0));
    }

    #[test]
    fn gf2_kernel() {
        let f = Field::Gf2;
        let m = DenseMatrix::from_rows(f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(m.kernel_vector().unwrap().to_entries(3), vec![1, 1, 1]);
    }

    #[test]
    fn field_elements() {
        let f = Field::Gf3;
        let two = f.element(2).unwrap();
        let one = f.element(1).unwrap();
        assert_eq!((two + two).value(), 1);
        assert_eq!((one - two).value(), 2);
        assert_eq!((two * two).value(), 1);
        assert_eq!((-one).value(), 2);
        assert!(f.element(3).is_err());
        assert!(Field::from_order(5).is_err());
    }
}
