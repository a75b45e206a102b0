//! Sparse univariate functions over GF(3^n) and planarity tests.

use std::fmt;
use std::sync::{Arc, OnceLock};

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{digit_sum, gcd, make_field, Fe, FieldCtx};
use crate::gf3::{independent, Mat, Trits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: Fe,
    pub exp: u64,
}

/// `F(x) = sum c_i x^{e_i}` with a lazily built value table.
#[derive(Clone)]
pub struct PlanarFn {
    ctx: Arc<FieldCtx>,
    terms: Vec<Term>,
    table: OnceLock<Arc<Vec<Fe>>>,
}

impl fmt::Debug for PlanarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarFn(n={}, {})", self.ctx.n(), self)
    }
}

impl PartialEq for PlanarFn {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.n() == other.ctx.n() && self.terms == other.terms
    }
}

impl Eq for PlanarFn {}

impl PlanarFn {
    /// Builds a function from terms. Zero coefficients are dropped, exponents
    /// must be below `q - 1` and pairwise distinct.
    pub fn new(ctx: Arc<FieldCtx>, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let limit = (ctx.q() - 1) as u64;
        let mut terms: Vec<Term> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        for t in &terms {
            if t.exp >= limit {
                return Err(Error::ExponentOutOfRange { exp: t.exp, limit });
            }
            if t.coeff.code() >= ctx.q() {
                return Err(Error::Parse(format!("coefficient code {} out of range", t.coeff.code())));
            }
        }
        terms.sort_by(|a, b| b.exp.cmp(&a.exp));
        if let Some(w) = terms.windows(2).find(|w| w[0].exp == w[1].exp) {
            return Err(Error::DuplicateExponent(w[0].exp));
        }
        Ok(PlanarFn {
            ctx,
            terms,
            table: OnceLock::new(),
        })
    }

    pub fn monomial(ctx: Arc<FieldCtx>, exp: u64) -> Result<Self> {
        Self::new(ctx, [Term { coeff: Fe::ONE, exp }])
    }

    /// Function text in the term grammar.
    pub fn parse(ctx: Arc<FieldCtx>, text: &str) -> Result<Self> {
        Self::parse_with(ctx, text, false)
    }

    /// Like [`PlanarFn::parse`]; with `reduce` set, exponents are reduced
    /// modulo `q - 1` (as functions on the whole field).
    pub fn parse_with(ctx: Arc<FieldCtx>, text: &str, reduce: bool) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty function".into()));
        }
        let limit = (ctx.q() - 1) as u64;
        let mut terms = Vec::new();
        for (negate, raw) in signed_terms(&cleaned) {
            let (coeff_txt, exp) = split_term(raw)?;
            let mut coeff = match coeff_txt {
                None => Fe::ONE,
                Some(c) => ctx.parse_elem(c)?,
            };
            if negate {
                coeff = ctx.neg(coeff);
            }
            let exp = match exp {
                Some(e) if reduce && e >= limit => (e - 1) % limit + 1,
                Some(e) => e,
                None => 0,
            };
            if terms.iter().any(|t: &Term| t.exp == exp) {
                return Err(Error::DuplicateExponent(exp));
            }
            terms.push(Term { coeff, exp });
        }
        Self::new(ctx, terms)
    }

    /// File form: a line `n=<int>` followed by the function text; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut n = None;
        let mut body = String::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if let Some(v) = compact.strip_prefix("n=") {
                n = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad context line `{line}`")))?);
            } else {
                body.push_str(line);
                body.push(' ');
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing `n=` line".into()))?;
        Self::parse(make_field(n)?, &body)
    }

    /// Interpolates a value table of length `q`.
    pub fn from_table(ctx: Arc<FieldCtx>, table: Vec<Fe>) -> Result<Self> {
        let terms = interpolate(&ctx, &table)?;
        let f = Self::new(ctx, terms)?;
        let _ = f.table.set(Arc::new(table));
        Ok(f)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].coeff == Fe::ONE
    }

    /// Exponent if the function is `c x^d` for a single term.
    pub fn single_exponent(&self) -> Option<u64> {
        (self.terms.len() == 1).then(|| self.terms[0].exp)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        if let Some(t) = self.table.get() {
            return t[x.idx()];
        }
        let ctx = &self.ctx;
        self.terms
            .iter()
            .fold(Fe::ZERO, |acc, t| ctx.add(acc, ctx.mul(t.coeff, ctx.pow(x, t.exp))))
    }

    pub fn table(&self) -> &[Fe] {
        self.table.get_or_init(|| Arc::new(self.build_table()))
    }

    pub fn shared_table(&self) -> Arc<Vec<Fe>> {
        self.table();
        self.table.get().expect("table built").clone()
    }

    fn build_table(&self) -> Vec<Fe> {
        let ctx = &self.ctx;
        let q = ctx.q() as usize;
        let ord = (q - 1) as u64;
        let mut acc = vec![Trits::ZERO; q];
        for t in &self.terms {
            let ct = ctx.trits(t.coeff);
            if t.exp == 0 {
                for a in acc.iter_mut() {
                    *a += ct;
                }
                continue;
            }
            let lc = ctx.log(t.coeff).expect("nonzero coefficient") as u64;
            let step = t.exp % ord;
            let mut l = lc;
            for k in 0..ord {
                let x = ctx.gen_pow(k);
                acc[x.idx()] += ctx.trits(ctx.gen_pow(l));
                l += step;
                if l >= ord {
                    l -= ord;
                }
            }
        }
        acc.into_iter().map(|t| ctx.from_trits(t)).collect()
    }

    pub fn algebraic_degree(&self) -> Result<u32> {
        self.terms
            .iter()
            .map(|t| digit_sum(t.exp))
            .max()
            .ok_or(Error::ZeroFunction)
    }

    /// Every exponent is of the form 3^j + 3^i.
    pub fn is_do(&self) -> bool {
        !self.terms.is_empty() && self.terms.iter().all(|t| digit_sum(t.exp) == 2)
    }

    /// Drops the constant and linear terms.
    pub fn ea_normal(&self) -> PlanarFn {
        let terms: Vec<Term> = self.terms.iter().copied().filter(|t| digit_sum(t.exp) >= 2).collect();
        PlanarFn::new(self.ctx.clone(), terms).expect("subset of valid terms")
    }

    /// Drops a constant term, warning when one was present.
    pub fn without_constant(self) -> PlanarFn {
        if self.terms.iter().any(|t| t.exp == 0) {
            warn!("dropping constant term of {self}");
            let terms: Vec<Term> = self.terms.iter().copied().filter(|t| t.exp != 0).collect();
            PlanarFn::new(self.ctx.clone(), terms).expect("subset of valid terms")
        } else {
            self
        }
    }

    pub fn derivative_table(&self, a: Fe) -> Result<Vec<Fe>> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let ctx = &self.ctx;
        let t = self.table();
        Ok(ctx.elements().map(|x| ctx.sub(t[ctx.add(x, a).idx()], t[x.idx()])).collect())
    }

    /// Every derivative `D_a F`, `a != 0`, is a bijection. O(q^2).
    pub fn is_planar_general(&self) -> bool {
        let ctx = &self.ctx;
        let q = ctx.q() as usize;
        let t = self.table();
        // D_{-a} F(x) = -D_a F(x - a), so one direction per ± pair suffices.
        (1..ctx.q())
            .into_par_iter()
            .filter(|&a| leading_digit_one(a))
            .try_for_each_init(
                || vec![0u32; q],
                |seen, a| {
                    let a = Fe(a);
                    for x in ctx.elements() {
                        let d = ctx.sub(t[ctx.add(x, a).idx()], t[x.idx()]);
                        if seen[d.idx()] == a.code() {
                            return Err(());
                        }
                        seen[d.idx()] = a.code();
                    }
                    Ok(())
                },
            )
            .is_ok()
    }

    pub fn bilinear_slices(&self) -> Result<BilinearSlices> {
        if !self.is_do() {
            return Err(Error::NotDo);
        }
        Ok(BilinearSlices::from_fn(|x| self.eval(x), &self.ctx))
    }

    /// Rank test: `x ↦ B_F(x, a)` is injective for every `a != 0`.
    pub fn is_planar_do(&self) -> Result<bool> {
        Ok(self.bilinear_slices()?.is_planar())
    }

    pub fn is_planar(&self) -> Result<bool> {
        self.is_planar_with(false)
    }

    /// Dispatching planarity test. Non-DO, non-monomial inputs with n >= 10
    /// need `allow_long_running`.
    pub fn is_planar_with(&self, allow_long_running: bool) -> Result<bool> {
        if self.terms.is_empty() {
            return Ok(false);
        }
        if self.is_do() {
            return self.is_planar_do();
        }
        if let Some(d) = self.single_exponent() {
            // D_a(c x^d)(x) = a^d D_1(c x^d)(x / a)
            let ctx = &self.ctx;
            let c = self.terms[0].coeff;
            let mut seen = vec![false; ctx.q() as usize];
            for x in ctx.elements() {
                let v = ctx.mul(c, ctx.sub(ctx.pow(ctx.add(x, Fe::ONE), d), ctx.pow(x, d)));
                if std::mem::replace(&mut seen[v.idx()], true) {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        if self.n() >= 10 && !allow_long_running {
            return Err(Error::LongRunning(format!(
                "general planarity test over GF(3^{}) is quadratic in the field size",
                self.n()
            )));
        }
        Ok(self.is_planar_general())
    }
}

impl fmt::Display for PlanarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = format_coeff(&self.ctx, t.coeff);
            match (coeff, t.exp) {
                (None, 0) => write!(f, "1")?,
                (Some(c), 0) => write!(f, "{c}")?,
                (None, e) => write!(f, "x^{e}")?,
                (Some(c), e) => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Coefficient text; `None` for 1. The prime-field element 2 prints as `2`.
pub fn format_coeff(ctx: &FieldCtx, c: Fe) -> Option<String> {
    match c.code() {
        1 => None,
        2 => Some("2".into()),
        _ => Some(ctx.format_elem(c)),
    }
}

/// Splits at top-level `+` and `-`; a leading sign is allowed.
fn signed_terms(text: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let (mut start, mut negate) = (0, false);
    for (i, c) in text.char_indices() {
        if c == '+' || c == '-' {
            if i > 0 {
                out.push((negate, &text[start..i]));
            }
            negate = c == '-';
            start = i + 1;
        }
    }
    out.push((negate, &text[start..]));
    out
}

fn split_term(raw: &str) -> Result<(Option<&str>, Option<u64>)> {
    let bad = || Error::Parse(format!("malformed term `{raw}`"));
    if raw.is_empty() {
        return Err(bad());
    }
    match raw.find('x') {
        None => Ok((Some(raw), None)),
        Some(pos) => {
            let coeff = raw[..pos].strip_suffix('*').unwrap_or(&raw[..pos]);
            let coeff = (!coeff.is_empty()).then_some(coeff);
            let rest = &raw[pos + 1..];
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse::<u64>().ok())
                    .ok_or_else(bad)?
            };
            Ok((coeff, Some(exp)))
        }
    }
}

/// Lowest nonzero base-3 digit of `code` is 1: one representative per ± pair.
pub(crate) fn leading_digit_one(mut code: u32) -> bool {
    while code % 3 == 0 {
        code /= 3;
    }
    code % 3 == 1
}

/// The symmetric bilinear form `B_F(x, y) = F(x+y) - F(x) - F(y) + F(0)` of a
/// DO function, stored on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSlices {
    n: usize,
    basis: Vec<Trits>,
}

impl BilinearSlices {
    pub fn from_fn(f: impl Fn(Fe) -> Fe, ctx: &FieldCtx) -> Self {
        let n = ctx.n();
        let e: Vec<Fe> = (0..n).map(|i| ctx.basis(i)).collect();
        let fe: Vec<Trits> = e.iter().map(|&x| ctx.trits(f(x))).collect();
        let f0 = ctx.trits(f(Fe::ZERO));
        let mut basis = vec![Trits::ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let v = ctx.trits(f(ctx.add(e[i], e[j]))) - fe[i] - fe[j] + f0;
                basis[i * n + j] = v;
                basis[j * n + i] = v;
            }
        }
        BilinearSlices { n, basis }
    }

    pub fn from_basis(n: usize, basis: Vec<Trits>) -> Self {
        assert_eq!(basis.len(), n * n);
        BilinearSlices { n, basis }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `B(e_i, e_j)`.
    pub fn on_basis(&self, i: usize, j: usize) -> Trits {
        self.basis[i * self.n + j]
    }

    pub fn basis_values(&self) -> &[Trits] {
        &self.basis
    }

    /// `B(x, y)` for vectors in coordinates.
    pub fn eval(&self, x: Trits, y: Trits) -> Trits {
        self.slice(y).apply(x)
    }

    /// The matrix of `x ↦ B(x, a)`.
    pub fn slice(&self, a: Trits) -> Mat {
        let n = self.n;
        let cols = (0..n)
            .map(|i| {
                let row = &self.basis[i * n..(i + 1) * n];
                let mut acc = Trits::ZERO;
                for (j, &b) in row.iter().enumerate() {
                    acc += b.scale(a.get(j));
                }
                acc
            })
            .collect();
        Mat::from_cols(cols)
    }

    /// Every slice with `a != 0` is nonsingular.
    pub fn is_planar(&self) -> bool {
        let n = self.n;
        let q = 3u32.pow(n as u32);
        let mask_ones: Vec<u32> = (0..q).map(|c| code_mask(c, 1)).collect();
        let mask_twos: Vec<u32> = (0..q).map(|c| code_mask(c, 2)).collect();
        (1..q)
            .into_par_iter()
            .filter(|&a| leading_digit_one(a))
            .all(|a| {
                let a = Trits {
                    ones: mask_ones[a as usize],
                    twos: mask_twos[a as usize],
                };
                independent(self.slice(a).cols())
            })
    }
}

fn code_mask(mut c: u32, digit: u32) -> u32 {
    let mut m = 0;
    let mut i = 0;
    while c > 0 {
        if c % 3 == digit {
            m |= 1 << i;
        }
        c /= 3;
        i += 1;
    }
    m
}

/// Dempwolff's criterion: `x^d` and `x^e` are CCZ-equivalent iff
/// `d = 3^i e` or `d = 3^i e^{-1}` modulo `3^n - 1`.
pub fn cyclotomic_equivalent(d: u64, e: u64, n: usize) -> bool {
    let m = 3u64.pow(n as u32) - 1;
    let (d, e) = (d % m, e % m);
    let e_inv = mod_inverse(e, m);
    let mut p = 1u64;
    for _ in 0..n {
        if d == p * e % m || e_inv.is_some_and(|ei| d == p * ei % m) {
            return true;
        }
        p = p * 3 % m;
    }
    false
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if gcd(a, m) != 1 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Coefficients of the unique polynomial of degree < q agreeing with `table`.
/// DO, linear and constant exponents are tried first; a full interpolation
/// runs only if they do not reproduce the table.
pub fn interpolate(ctx: &FieldCtx, table: &[Fe]) -> Result<Vec<Term>> {
    let q = ctx.q() as usize;
    if table.len() != q {
        return Err(Error::Parse(format!("table has {} entries, expected {q}", table.len())));
    }
    let n = ctx.n();
    let ord = (q - 1) as u64;
    let mut cheap = vec![0u64];
    for j in 0..n {
        cheap.push(3u64.pow(j as u32));
        for i in 0..=j {
            cheap.push(3u64.pow(j as u32) + 3u64.pow(i as u32));
        }
    }
    cheap.sort_unstable();
    cheap.dedup();
    let attempt = |exps: &[u64]| -> Vec<Term> {
        exps.par_iter()
            .filter_map(|&e| {
                let c = coefficient(ctx, table, e);
                (!c.is_zero()).then_some(Term { coeff: c, exp: e })
            })
            .collect()
    };
    let terms = attempt(&cheap);
    let candidate = PlanarFn::new(make_field(n)?, terms.clone())?;
    if candidate.table() == table {
        return Ok(terms);
    }
    let all: Vec<u64> = (0..ord).collect();
    let terms = attempt(&all);
    // x^{q-1} coefficient: sum over x != 0 of F(x) equals -(a_0 + a_{q-1})
    let total = ctx.nonzero().fold(Fe::ZERO, |acc, x| ctx.add(acc, table[x.idx()]));
    let top = ctx.sub(ctx.neg(total), table[0]);
    if !top.is_zero() {
        return Err(Error::ExponentOutOfRange { exp: ord, limit: ord });
    }
    Ok(terms)
}

/// `a_e = -sum_{x != 0} F(x) x^{-e}` for `0 < e < q - 1`; `a_0 = F(0)`.
fn coefficient(ctx: &FieldCtx, table: &[Fe], e: u64) -> Fe {
    if e == 0 {
        return table[0];
    }
    let ord = ctx.order() as u64;
    let mut acc = Trits::ZERO;
    for k in 0..ord {
        let x = ctx.gen_pow(k);
        let fx = table[x.idx()];
        if fx.is_zero() {
            continue;
        }
        let w = ctx.mul(fx, ctx.gen_pow((ord - (k * e) % ord) % ord));
        acc += ctx.trits(w);
    }
    ctx.from_trits(-acc)
}
