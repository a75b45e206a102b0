//! Bitsliced vectors and small dense matrices over GF(3).
//!
//! A vector of up to 32 trits is stored as two bit masks: bit `i` of `ones`
//! is set when coordinate `i` equals 1, bit `i` of `twos` when it equals 2.
//! Addition is a handful of word operations, which keeps rank computations
//! on the `n x n` slice matrices cheap enough to run hundreds of thousands
//! of times per planarity sweep.

use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trits {
    pub ones: u32,
    pub twos: u32,
}

impl Trits {
    pub const ZERO: Trits = Trits { ones: 0, twos: 0 };

    /// The `i`-th standard basis vector.
    pub fn unit(i: usize) -> Self {
        Trits {
            ones: 1 << i,
            twos: 0,
        }
    }

    pub fn get(self, i: usize) -> u8 {
        ((self.ones >> i) & 1) as u8 | ((((self.twos >> i) & 1) as u8) << 1)
    }

    pub fn set(&mut self, i: usize, v: u8) {
        let bit = 1u32 << i;
        self.ones &= !bit;
        self.twos &= !bit;
        match v % 3 {
            1 => self.ones |= bit,
            2 => self.twos |= bit,
            _ => {}
        }
    }

    pub fn is_zero(self) -> bool {
        (self.ones | self.twos) == 0
    }

    pub fn support(self) -> u32 {
        self.ones | self.twos
    }

    /// Multiply by a scalar in GF(3).
    pub fn scale(self, c: u8) -> Self {
        match c % 3 {
            0 => Trits::ZERO,
            1 => self,
            _ => -self,
        }
    }

    /// Coordinate-wise product.
    pub fn hadamard(self, o: Self) -> Self {
        Trits {
            ones: (self.ones & o.ones) | (self.twos & o.twos),
            twos: (self.ones & o.twos) | (self.twos & o.ones),
        }
    }

    /// Standard inner product.
    pub fn dot(self, o: Self) -> u8 {
        let h = self.hadamard(o);
        ((h.ones.count_ones() + 2 * h.twos.count_ones()) % 3) as u8
    }

    /// Index of the lowest nonzero coordinate.
    pub fn lowest(self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| s.trailing_zeros() as usize)
    }
}

impl Add for Trits {
    type Output = Trits;
    #[inline]
    fn add(self, o: Trits) -> Trits {
        let t = (self.ones | o.twos) ^ (self.twos | o.ones);
        Trits {
            ones: (self.twos | o.twos) ^ t,
            twos: (self.ones | o.ones) ^ t,
        }
    }
}

impl AddAssign for Trits {
    #[inline]
    fn add_assign(&mut self, o: Trits) {
        *self = *self + o;
    }
}

impl Neg for Trits {
    type Output = Trits;
    #[inline]
    fn neg(self) -> Trits {
        Trits {
            ones: self.twos,
            twos: self.ones,
        }
    }
}

impl Sub for Trits {
    type Output = Trits;
    #[inline]
    fn sub(self, o: Trits) -> Trits {
        self + (-o)
    }
}

impl SubAssign for Trits {
    #[inline]
    fn sub_assign(&mut self, o: Trits) {
        *self = *self - o;
    }
}

/// Incrementally built echelon basis of a subspace of GF(3)^n.
///
/// Rows are kept with a pivot digit of 1 and zeros in the pivot positions of
/// every earlier row, so reducing in insertion order is exact.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Trits)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Trits) -> Trits {
        for &(p, r) in &self.rows {
            let d = v.get(p);
            if d != 0 {
                v -= r.scale(d);
            }
        }
        v
    }

    pub fn contains(&self, v: Trits) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the spanning set; returns false if it was already in the span.
    pub fn insert(&mut self, v: Trits) -> bool {
        let v = self.reduce(v);
        match v.lowest() {
            None => false,
            Some(p) => {
                // scale so the pivot digit is 1 (2 * 2 = 1)
                let v = v.scale(v.get(p));
                self.rows.push((p, v));
                true
            }
        }
    }

    /// Basis of the orthogonal complement, i.e. the solution space of
    /// `row . x = 0` for every inserted row, over coordinates `0..n`.
    pub fn null_space(&self, n: usize) -> Vec<Trits> {
        // Fully reduce so each pivot column is a unit column.
        let mut rows = self.rows.clone();
        for i in (0..rows.len()).rev() {
            let (p, r) = rows[i];
            for j in 0..i {
                let d = rows[j].1.get(p);
                if d != 0 {
                    rows[j].1 -= r.scale(d);
                }
            }
        }
        let pivots: u32 = rows.iter().fold(0, |acc, &(p, _)| acc | (1 << p));
        let mut basis = Vec::new();
        for free in 0..n {
            if pivots & (1 << free) != 0 {
                continue;
            }
            let mut v = Trits::unit(free);
            for &(p, r) in &rows {
                // x_p + r_free * x_free = 0
                let d = r.get(free);
                if d != 0 {
                    v.set(p, 3 - d);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[Trits]) -> usize {
    let mut e = Echelon::new();
    for &v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Whether the vectors are linearly independent (early exit on the first dependency).
pub fn independent(vectors: &[Trits]) -> bool {
    let mut e = Echelon::new();
    vectors.iter().all(|&v| e.insert(v))
}

/// Partial linear map built from `(input, output)` pairs.
///
/// Tracks whether the pairs are consistent with some linear *bijection*:
/// an input already in the span must map to the matching combination of
/// outputs, and independent inputs must have independent outputs.
#[derive(Clone, Debug, Default)]
pub struct PairEchelon {
    // pivot is taken on the input part
    rows: Vec<(usize, Trits, Trits)>,
    outputs: Echelon,
}

impl PairEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Records `input -> output`; returns false if this contradicts the
    /// pairs seen so far or would break injectivity.
    pub fn insert(&mut self, mut input: Trits, mut output: Trits) -> bool {
        for &(p, ri, ro) in &self.rows {
            let d = input.get(p);
            if d != 0 {
                input -= ri.scale(d);
                output -= ro.scale(d);
            }
        }
        match input.lowest() {
            None => output.is_zero(),
            Some(p) => {
                if !self.outputs.insert(output) {
                    return false;
                }
                let d = input.get(p);
                self.rows.push((p, input.scale(d), output.scale(d)));
                true
            }
        }
    }

    /// Image of `v` if `v` lies in the span of the recorded inputs.
    pub fn apply(&self, mut v: Trits) -> Option<Trits> {
        let mut out = Trits::ZERO;
        for &(p, ri, ro) in &self.rows {
            let d = v.get(p);
            if d != 0 {
                v -= ri.scale(d);
                out += ro.scale(d);
            }
        }
        v.is_zero().then_some(out)
    }
}

/// Square matrix over GF(3), stored as the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    cols: Vec<Trits>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat {
            n,
            cols: vec![Trits::ZERO; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Mat {
            n,
            cols: (0..n).map(Trits::unit).collect(),
        }
    }

    pub fn from_cols(cols: Vec<Trits>) -> Self {
        Mat {
            n: cols.len(),
            cols,
        }
    }

    pub fn from_rows(rows: &[Trits]) -> Self {
        let n = rows.len();
        let mut cols = vec![Trits::ZERO; n];
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter_mut().enumerate() {
                c.set(i, r.get(j));
            }
        }
        Mat { n, cols }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> &[Trits] {
        &self.cols
    }

    pub fn col(&self, j: usize) -> Trits {
        self.cols[j]
    }

    pub fn row(&self, i: usize) -> Trits {
        let mut r = Trits::ZERO;
        for (j, c) in self.cols.iter().enumerate() {
            r.set(j, c.get(i));
        }
        r
    }

    pub fn rows(&self) -> Vec<Trits> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    #[inline]
    pub fn apply(&self, x: Trits) -> Trits {
        let mut acc = Trits::ZERO;
        let mut ones = x.ones;
        while ones != 0 {
            let j = ones.trailing_zeros() as usize;
            acc += self.cols[j];
            ones &= ones - 1;
        }
        let mut twos = x.twos;
        while twos != 0 {
            let j = twos.trailing_zeros() as usize;
            acc -= self.cols[j];
            twos &= twos - 1;
        }
        acc
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn mul(&self, other: &Mat) -> Mat {
        Mat {
            n: self.n,
            cols: other.cols.iter().map(|&c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat {
            n: self.n,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat {
            n: self.n,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: u8) -> Mat {
        Mat {
            n: self.n,
            cols: self.cols.iter().map(|&a| a.scale(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rank(&self.cols)
    }

    pub fn is_invertible(&self) -> bool {
        independent(&self.cols)
    }

    pub fn inverse(&self) -> Option<Mat> {
        let mut pe = PairEchelon::new();
        for (j, &c) in self.cols.iter().enumerate() {
            if !pe.insert(c, Trits::unit(j)) {
                return None;
            }
        }
        let cols = (0..self.n)
            .map(|i| pe.apply(Trits::unit(i)))
            .collect::<Option<Vec<_>>>()?;
        Some(Mat { n: self.n, cols })
    }
}

/// Common kernel of a family of matrices.
pub fn common_kernel<'a>(n: usize, mats: impl IntoIterator<Item = &'a Mat>) -> Vec<Trits> {
    let mut e = Echelon::new();
    for m in mats {
        for i in 0..n {
            e.insert(m.row(i));
            if e.rank() == n {
                return Vec::new();
            }
        }
    }
    e.null_space(n)
}

/// All vectors in the span of `basis`, in a deterministic order.
pub fn span(basis: &[Trits]) -> Vec<Trits> {
    let mut out = vec![Trits::ZERO];
    for &b in basis {
        let len = out.len();
        for c in [1u8, 2] {
            let add = b.scale(c);
            for i in 0..len {
                let v = out[i] + add;
                out.push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_digits(d: &[u8]) -> Trits {
        let mut t = Trits::ZERO;
        for (i, &v) in d.iter().enumerate() {
            t.set(i, v);
        }
        t
    }

    #[test]
    fn bitsliced_add_matches_digit_arithmetic() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                let s = Trits::ZERO.scale(0);
                let mut x = s;
                let mut y = s;
                x.set(3, a);
                y.set(3, b);
                assert_eq!((x + y).get(3), (a + b) % 3);
                assert_eq!((x - y).get(3), (3 + a - b) % 3);
                assert_eq!((-x).get(3), (3 - a) % 3);
                assert_eq!(x.hadamard(y).get(3), (a * b) % 3);
            }
        }
    }

    #[test]
    fn null_space_is_orthogonal() {
        let rows = [from_digits(&[1, 2, 0, 1]), from_digits(&[0, 1, 1, 2])];
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r);
        }
        let ns = e.null_space(4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(r.dot(*v), 0);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(&[
            from_digits(&[1, 1, 0]),
            from_digits(&[0, 1, 1]),
            from_digits(&[1, 0, 1]),
        ]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), Mat::identity(3));
        assert_eq!(inv.mul(&m), Mat::identity(3));
        let singular = Mat::from_rows(&[
            from_digits(&[1, 1, 0]),
            from_digits(&[2, 2, 0]),
            from_digits(&[0, 0, 1]),
        ]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 2);
    }

    #[test]
    fn pair_echelon_detects_conflicts() {
        let mut pe = PairEchelon::new();
        assert!(pe.insert(Trits::unit(0), Trits::unit(1)));
        assert!(pe.insert(Trits::unit(1), Trits::unit(0)));
        // consistent: e0 + e1 -> e1 + e0
        assert!(pe.insert(Trits::unit(0) + Trits::unit(1), Trits::unit(0) + Trits::unit(1)));
        assert!(!pe.insert(Trits::unit(0).scale(2), Trits::unit(1)));
        // independent input, dependent output: not injective
        assert!(!pe.insert(Trits::unit(2), Trits::unit(0)));
    }

    #[test]
    fn span_size() {
        let s = span(&[Trits::unit(0), Trits::unit(2)]);
        assert_eq!(s.len(), 9);
    }
}
