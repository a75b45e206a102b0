//! Arithmetic in GF(3^n), 1 <= n <= 12.
//!
//! Elements are base-3 integer codes: digit `i` of the code is the coordinate
//! of `α^i` in the power basis, where `α` is a root of the degree-`n` Conway
//! polynomial. Multiplication goes through log/antilog tables; addition goes
//! through the bitsliced [`Trits`] form.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf3::Trits;

pub const MAX_DEGREE: usize = 12;

/// Conway polynomials for p = 3, coefficients from the constant term up.
const CONWAY: [&[u8]; MAX_DEGREE] = [
    &[1, 1],
    &[2, 2, 1],
    &[1, 2, 0, 1],
    &[2, 0, 0, 2, 1],
    &[1, 2, 0, 0, 0, 1],
    &[2, 2, 1, 0, 2, 0, 1],
    &[1, 0, 2, 0, 0, 0, 0, 1],
    &[2, 2, 2, 0, 1, 2, 0, 0, 1],
    &[1, 1, 2, 2, 0, 0, 0, 0, 0, 1],
    &[2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1],
    &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1],
];

/// A field element, identified by its base-3 code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

pub struct FieldCtx {
    n: usize,
    q: u32,
    modulus: Vec<u8>,
    exp: Vec<Fe>,
    log: Vec<u32>,
    trits: Vec<Trits>,
    mask_code: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Shared context for GF(3^n); built once per degree and cached.
pub fn make_field(n: usize) -> Result<Arc<FieldCtx>> {
    static CACHE: [OnceLock<Arc<FieldCtx>>; MAX_DEGREE] = [const { OnceLock::new() }; MAX_DEGREE];
    if !(1..=MAX_DEGREE).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    Ok(CACHE[n - 1]
        .get_or_init(|| Arc::new(FieldCtx::build(n, CONWAY[n - 1])))
        .clone())
}

impl FieldCtx {
    fn build(n: usize, modulus: &[u8]) -> FieldCtx {
        let q = 3u32.pow(n as u32);
        let pow3: Vec<u32> = (0..n).map(|i| 3u32.pow(i as u32)).collect();
        let mask_code: Vec<u32> = (0..1u32 << n)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| pow3[i]).sum())
            .collect();
        let to_code = |t: Trits| mask_code[t.ones as usize] + 2 * mask_code[t.twos as usize];

        let mut trits = vec![Trits::ZERO; q as usize];
        for (c, t) in trits.iter_mut().enumerate() {
            let mut c = c as u32;
            for i in 0..n {
                t.set(i, (c % 3) as u8);
                c /= 3;
            }
        }

        // α^n = -(m_0 + m_1 α + ... + m_{n-1} α^{n-1})
        let mut reduction = Trits::ZERO;
        for (i, &d) in modulus[..n].iter().enumerate() {
            reduction.set(i, (3 - d) % 3);
        }
        let top = 1u32 << n;
        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * order);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = Trits::unit(0);
        for i in 0..order {
            let code = to_code(cur);
            assert_eq!(log[code as usize], u32::MAX, "modulus for n = {n} is not primitive");
            log[code as usize] = i as u32;
            exp.push(Fe(code));
            let shifted = Trits {
                ones: cur.ones << 1,
                twos: cur.twos << 1,
            };
            let carry = ((shifted.ones & top != 0) as u8) | (((shifted.twos & top != 0) as u8) << 1);
            let low = Trits {
                ones: shifted.ones & (top - 1),
                twos: shifted.twos & (top - 1),
            };
            cur = low + reduction.scale(carry);
        }
        assert_eq!(cur, Trits::unit(0), "α has the wrong order for n = {n}");
        exp.extend_from_within(..);

        FieldCtx {
            n,
            q,
            modulus: modulus.to_vec(),
            exp,
            log,
            trits,
            mask_code,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> {
        (1..self.q).map(Fe)
    }

    pub fn element(&self, code: u32) -> Result<Fe> {
        if code < self.q {
            Ok(Fe(code))
        } else {
            Err(Error::Parse(format!("element code {code} is not below {}", self.q)))
        }
    }

    #[inline]
    pub fn trits(&self, x: Fe) -> Trits {
        self.trits[x.idx()]
    }

    #[inline]
    pub fn from_trits(&self, t: Trits) -> Fe {
        Fe(self.mask_code[t.ones as usize] + 2 * self.mask_code[t.twos as usize])
    }

    /// The basis element α^i as a field element.
    pub fn basis(&self, i: usize) -> Fe {
        Fe(3u32.pow(i as u32))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.from_trits(self.trits[a.idx()] + self.trits[b.idx()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.from_trits(self.trits[a.idx()] - self.trits[b.idx()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.from_trits(-self.trits[a.idx()])
    }

    /// Multiply by an element of the prime field.
    #[inline]
    pub fn scale(&self, a: Fe, c: u8) -> Fe {
        self.from_trits(self.trits[a.idx()].scale(c))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        self.exp[(self.log[a.idx()] + self.log[b.idx()]) as usize]
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        let l = self.log[a.idx()];
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let ord = (self.q - 1) as u64;
        let l = self.log[a.idx()] as u64 * (e % ord) % ord;
        self.exp[l as usize]
    }

    /// α^k.
    #[inline]
    pub fn gen_pow(&self, k: u64) -> Fe {
        self.exp[(k % (self.q - 1) as u64) as usize]
    }

    /// Discrete logarithm base α; `None` for zero.
    #[inline]
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.idx()])
    }

    /// x ↦ x^{3^i}.
    pub fn frobenius(&self, a: Fe, i: usize) -> Fe {
        self.pow(a, 3u64.pow((i % self.n) as u32))
    }

    pub fn check_divisor(&self, k: usize) -> Result<()> {
        if k == 0 || self.n % k != 0 {
            Err(Error::NotADivisor(k, self.n))
        } else {
            Ok(())
        }
    }

    /// Relative trace Tr^n_k(x) = x + x^{3^k} + ... + x^{3^{n-k}}.
    pub fn trace(&self, a: Fe, k: usize) -> Result<Fe> {
        self.check_divisor(k)?;
        Ok((0..self.n / k).fold(Fe::ZERO, |acc, j| self.add(acc, self.frobenius(a, j * k))))
    }

    /// The subfield GF(3^m): zero followed by the nonzero elements in
    /// ascending discrete-log order.
    pub fn subfield_elements(&self, m: usize) -> Result<Vec<Fe>> {
        self.check_divisor(m)?;
        let sub_order = 3u32.pow(m as u32) - 1;
        let step = (self.q - 1) / sub_order;
        let mut out = vec![Fe::ZERO];
        out.extend((0..sub_order).map(|j| self.exp[(j * step) as usize]));
        Ok(out)
    }

    pub fn in_subfield(&self, a: Fe, m: usize) -> bool {
        self.n % m == 0 && self.pow(a, 3u64.pow(m as u32)) == a
    }

    /// Euler's criterion.
    pub fn is_square(&self, a: Fe) -> bool {
        a.0 == 0 || self.pow(a, ((self.q - 1) / 2) as u64) == Fe::ONE
    }

    /// Parses `0`, a decimal code, `g` or `g^k`.
    pub fn parse_elem(&self, text: &str) -> Result<Fe> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = t.strip_prefix('g') {
            if rest.is_empty() {
                return Ok(self.gen_pow(1));
            }
            let k = rest
                .strip_prefix('^')
                .and_then(|k| k.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad element `{text}`")))?;
            return Ok(self.gen_pow(k));
        }
        let code = t
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad element `{text}`")))?;
        self.element(code)
    }

    pub fn format_elem(&self, a: Fe) -> String {
        match self.log(a) {
            None => "0".to_string(),
            Some(l) => format!("g^{l}"),
        }
    }
}

/// Base-3 digit sum.
pub fn digit_sum(mut e: u64) -> u32 {
    let mut s = 0;
    while e > 0 {
        s += (e % 3) as u32;
        e /= 3;
    }
    s
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = make_field(1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.gen_pow(1), Fe(2));
    }

    #[test]
    fn degree_two_generator() {
        let f = make_field(2).unwrap();
        let a = f.gen_pow(1);
        assert_eq!(a, Fe(3));
        // α^2 = α + 1
        assert_eq!(f.mul(a, a), f.add(a, Fe::ONE));
        let orders: Vec<u64> = (1..=8).filter(|&k| f.pow(a, k) == Fe::ONE).collect();
        assert_eq!(orders, vec![8]);
        assert_eq!(f.trace(a, 1).unwrap(), Fe::ONE);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(make_field(0).unwrap_err(), Error::DegreeOutOfRange(0));
        assert_eq!(make_field(13).unwrap_err(), Error::DegreeOutOfRange(13));
    }

    #[test]
    fn generator_order_degree_six() {
        let f = make_field(6).unwrap();
        let a = f.gen_pow(1);
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = f.mul(x, a);
            k += 1;
        }
        assert_eq!(k, 728);
    }

    #[test]
    fn inverses_degree_four() {
        let f = make_field(4).unwrap();
        for x in f.nonzero() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
            assert_eq!(f.mul(Fe::ZERO, x), Fe::ZERO);
        }
        assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
        assert_eq!(f.inv(Fe::ZERO).unwrap_err(), Error::InverseOfZero);
    }

    #[test]
    fn traces() {
        let f = make_field(6).unwrap();
        assert_eq!(f.trace(Fe::ONE, 1).unwrap(), Fe::ZERO);
        for x in f.elements() {
            assert!(f.in_subfield(f.trace(x, 3).unwrap(), 3));
        }
        assert_eq!(f.trace(Fe::ONE, 4).unwrap_err(), Error::NotADivisor(4, 6));
    }

    #[test]
    fn squares_and_subfields() {
        let f = make_field(5).unwrap();
        assert!(f.is_square(Fe::ONE));
        assert!(!f.is_square(f.gen_pow(1)));
        let f6 = make_field(6).unwrap();
        let sub = f6.subfield_elements(2).unwrap();
        assert_eq!(sub.len(), 9);
        for &a in &sub {
            for &b in &sub {
                assert!(sub.contains(&f6.add(a, b)));
                assert!(sub.contains(&f6.mul(a, b)));
            }
        }
    }

    #[test]
    fn element_syntax() {
        let f = make_field(6).unwrap();
        assert_eq!(f.parse_elem("0").unwrap(), Fe::ZERO);
        assert_eq!(f.parse_elem("g").unwrap(), f.gen_pow(1));
        assert_eq!(f.parse_elem("g^91").unwrap(), f.gen_pow(91));
        assert_eq!(f.parse_elem("5").unwrap(), Fe(5));
        assert!(f.parse_elem("729").is_err());
        assert!(f.parse_elem("h").is_err());
        assert_eq!(f.format_elem(f.gen_pow(91)), "g^91");
        assert_eq!(f.format_elem(Fe::ZERO), "0");
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(14), 4);
        assert_eq!(digit_sum(30), 2);
        assert_eq!(digit_sum(2), 2);
    }
}
