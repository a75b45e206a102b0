//! Generators for the named families of planar functions over GF(3^n), the
//! Dickson representatives and the sporadic examples.
//!
//! Product-form families live on GF(3^m)^2 with n = 2m and are carried over
//! to GF(3^n) by the pairing `(a, b) ↦ a + b g`, with `g` the field
//! generator. Their planar function is `½ (z ⋆ z)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::equivalence::LinearMap;
use crate::error::{Error, Result};
use crate::field::{gcd, make_field, Fe, FieldCtx};
use crate::planarfn::{PlanarFn, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    FF,
    D,
    DQuad,
    DKosick,
    DBinom,
    A,
    CG,
    G,
    CM,
    TST,
    PW,
    ACW,
    BH,
    ZKW,
    B,
    CK,
    ZP,
    GK,
    Sporadic,
}

impl FamilyId {
    pub const ALL: [FamilyId; 19] = [
        FamilyId::FF,
        FamilyId::A,
        FamilyId::CM,
        FamilyId::TST,
        FamilyId::ACW,
        FamilyId::CK,
        FamilyId::D,
        FamilyId::DQuad,
        FamilyId::DKosick,
        FamilyId::DBinom,
        FamilyId::CG,
        FamilyId::G,
        FamilyId::PW,
        FamilyId::BH,
        FamilyId::ZKW,
        FamilyId::B,
        FamilyId::ZP,
        FamilyId::GK,
        FamilyId::Sporadic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::FF => "FF",
            FamilyId::D => "D",
            FamilyId::DQuad => "D-quad",
            FamilyId::DKosick => "D-kosick",
            FamilyId::DBinom => "D-binom",
            FamilyId::A => "A",
            FamilyId::CG => "CG",
            FamilyId::G => "G",
            FamilyId::CM => "CM",
            FamilyId::TST => "TST",
            FamilyId::PW => "PW",
            FamilyId::ACW => "ACW",
            FamilyId::BH => "BH",
            FamilyId::ZKW => "ZKW",
            FamilyId::B => "B",
            FamilyId::CK => "CK",
            FamilyId::ZP => "ZP",
            FamilyId::GK => "GK",
            FamilyId::Sporadic => "SPORADIC",
        }
    }

    /// Catalog tag; the Dickson representatives all belong to D.
    pub fn tag(self) -> &'static str {
        match self {
            FamilyId::DQuad | FamilyId::DKosick | FamilyId::DBinom => "D",
            f => f.name(),
        }
    }

    pub fn parse(s: &str) -> Result<FamilyId> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unknown(format!("family `{s}`")))
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Int(i64),
    Elem(Fe),
}

const ELEMENT_PARAMS: [&str; 3] = ["alpha", "beta", "omega"];

/// A family with its parameters over GF(3^n). Parameters left out take
/// their defaults at generation time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub n: usize,
    pub params: BTreeMap<String, Param>,
}

impl FamilySpec {
    pub fn new(family: FamilyId, n: usize) -> Self {
        FamilySpec {
            family,
            n,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.params.insert(name.to_string(), Param::Int(value));
        self
    }

    pub fn with_elem(mut self, name: &str, value: Fe) -> Self {
        self.params.insert(name.to_string(), Param::Elem(value));
        self
    }

    /// Parses `FAMILY key=value ...`; `sign=+` and `sign=-` are accepted
    /// for TST and `alpha`, `beta`, `omega` take field elements.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut words = text.split_whitespace();
        let family = FamilyId::parse(words.next().ok_or_else(|| Error::Parse("empty family spec".into()))?)?;
        let mut spec = FamilySpec::new(family, n);
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{w}`")))?;
            let value = if ELEMENT_PARAMS.contains(&k) {
                Param::Elem(make_field(n)?.parse_elem(v)?)
            } else if k == "sign" && (v == "+" || v == "-") {
                Param::Int(if v == "+" { 1 } else { -1 })
            } else {
                Param::Int(v.parse().map_err(|_| Error::Parse(format!("bad integer `{v}` for `{k}`")))?)
            };
            spec.params.insert(k.to_string(), value);
        }
        Ok(spec)
    }

    fn int(&self, name: &str) -> Result<i64> {
        match self.params.get(name) {
            Some(Param::Int(v)) => Ok(*v),
            Some(Param::Elem(_)) => Err(Error::Parse(format!("{}: `{name}` must be an integer", self.family))),
            None => Err(Error::Constraint(format!("{}: missing parameter `{name}`", self.family))),
        }
    }

    fn int_or(&self, name: &str, default: i64) -> Result<i64> {
        if self.params.contains_key(name) {
            self.int(name)
        } else {
            Ok(default)
        }
    }

    fn elem(&self, name: &str) -> Result<Option<Fe>> {
        match self.params.get(name) {
            Some(Param::Elem(e)) => Ok(Some(*e)),
            Some(Param::Int(_)) => Err(Error::Parse(format!("{}: `{name}` must be a field element", self.family))),
            None => Ok(None),
        }
    }

    fn check_known(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Constraint(format!("{}: unknown parameter `{k}`", self.family))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        let ctx = make_field(self.n).ok();
        for (k, v) in &self.params {
            match (v, &ctx) {
                (Param::Int(s), _) if k == "sign" => write!(f, " sign={}", if *s > 0 { "+" } else { "-" })?,
                (Param::Int(v), _) => write!(f, " {k}={v}")?,
                (Param::Elem(e), Some(ctx)) => write!(f, " {k}={}", ctx.format_elem(*e))?,
                (Param::Elem(e), None) => write!(f, " {k}={}", e.0)?,
            }
        }
        Ok(())
    }
}

fn require(family: FamilyId, ok: bool, clause: impl fmt::Display) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Constraint(format!("{family}: {clause}")))
    }
}

fn even_half(family: FamilyId, n: usize) -> Result<usize> {
    if n % 2 != 0 {
        return Err(Error::Constraint(format!("{family}: n = 2m must be even, got n = {n}")));
    }
    Ok(n / 2)
}

fn nu2(k: u64) -> u32 {
    k.trailing_zeros()
}

fn pow3(ctx: &FieldCtx, a: i64) -> u64 {
    3u64.pow(a.rem_euclid(ctx.n() as i64) as u32)
}

/// Builds a polynomial from `(coefficient, exponent)` pairs, merging equal
/// exponents.
fn poly(ctx: &Arc<FieldCtx>, terms: &[(Fe, u64)]) -> Result<PlanarFn> {
    let mut merged: BTreeMap<u64, Fe> = BTreeMap::new();
    for &(c, e) in terms {
        let slot = merged.entry(e).or_insert(Fe::ZERO);
        *slot = ctx.add(*slot, c);
    }
    PlanarFn::new(ctx.clone(), merged.into_iter().map(|(exp, coeff)| Term { coeff, exp }))
}

fn from_values(ctx: &Arc<FieldCtx>, f: impl Fn(Fe) -> Fe + Sync) -> Result<PlanarFn> {
    let table: Vec<Fe> = (0..ctx.q()).into_par_iter().map(|c| f(Fe(c))).collect();
    PlanarFn::from_table(ctx.clone(), table)
}

fn subfield_nonsquare(ctx: &FieldCtx, a: Fe, m: usize) -> bool {
    let order = 3u64.pow(m as u32) - 1;
    !a.is_zero() && ctx.in_subfield(a, m) && ctx.pow(a, order / 2) != Fe::ONE
}

/// The nonsquare of GF(3^m)^* with the smallest discrete log.
fn smallest_nonsquare(ctx: &FieldCtx, m: usize) -> Result<Fe> {
    Ok(ctx.subfield_elements(m)?
        .into_iter()
        .find(|&a| subfield_nonsquare(ctx, a, m))
        .expect("GF(3^m)^* has nonsquares"))
}

fn is_primitive(ctx: &FieldCtx, a: Fe) -> bool {
    ctx.log(a).is_some_and(|l| gcd(l as u64, ctx.order() as u64) == 1)
}

/// The pairing GF(3^m)^2 ↔ GF(3^{2m}), `(a, b) ↦ a + b β` with `β` the
/// field generator.
pub struct BivariatePairing {
    ctx: Arc<FieldCtx>,
    m: usize,
    beta: Fe,
    split: Vec<(Fe, Fe)>,
}

impl BivariatePairing {
    pub fn new(ctx: Arc<FieldCtx>) -> Result<Self> {
        let n = ctx.n();
        if n % 2 != 0 {
            return Err(Error::Constraint(format!("pairing needs even n, got {n}")));
        }
        let m = n / 2;
        let beta = ctx.gen_pow(1);
        let sub = ctx.subfield_elements(m)?;
        let mut split = vec![(Fe::ZERO, Fe::ZERO); ctx.q() as usize];
        for &b in &sub {
            let bb = ctx.mul(b, beta);
            for &a in &sub {
                split[ctx.add(a, bb).idx()] = (a, b);
            }
        }
        Ok(BivariatePairing { ctx, m, beta, split })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn join(&self, a: Fe, b: Fe) -> Fe {
        self.ctx.add(a, self.ctx.mul(b, self.beta))
    }

    pub fn split(&self, z: Fe) -> (Fe, Fe) {
        self.split[z.idx()]
    }

    /// The univariate function `z ↦ join(F(split(z)))`.
    pub fn univariate(&self, f: impl Fn(Fe, Fe) -> (Fe, Fe) + Sync) -> Result<PlanarFn> {
        from_values(&self.ctx, |z| {
            let (a, b) = self.split(z);
            let (u, v) = f(a, b);
            self.join(u, v)
        })
    }

    /// `½ (z ⋆ z)` for a commutative product on GF(3^m)^2.
    pub fn from_product(&self, star: impl Fn(Fe, Fe, Fe, Fe) -> (Fe, Fe) + Sync) -> Result<PlanarFn> {
        let ctx = &self.ctx;
        self.univariate(|a, b| {
            let (u, v) = star(a, b, a, b);
            (ctx.scale(u, 2), ctx.scale(v, 2))
        })
    }
}

/// Index used by the Dickson quadrinomial: `i`, or `m - i` when
/// `gcd(i, m) ≠ gcd(i, 2m)`.
pub fn dickson_index(m: usize, i: usize) -> Result<usize> {
    require(FamilyId::DQuad, m >= 2, format_args!("m ≥ 2 fails for m = {m}"))?;
    require(FamilyId::DQuad, 0 < i && i < m, format_args!("0 < i < m fails for i = {i}, m = {m}"))?;
    let ok = |i: usize| gcd(i as u64, m as u64) == gcd(i as u64, 2 * m as u64);
    let j = if ok(i) { i } else { m - i };
    assert!(ok(j), "gcd condition holds for i or m - i");
    Ok(j)
}

/// `x^2 + x^{q+1} - x^{(q+1) 3^i} + x^{2 q 3^i}` over GF(q^2), q = 3^m.
pub fn dickson_quadrinomial(m: usize, i: usize) -> Result<PlanarFn> {
    let i = dickson_index(m, i)?;
    let ctx = make_field(2 * m)?;
    let (q, r) = (3u64.pow(m as u32), 3u64.pow(i as u32));
    let (one, minus) = (Fe::ONE, ctx.neg(Fe::ONE));
    // x^{2 q r}: both digits sit at position m + i, reduced mod n
    let top = 2 * pow3(&ctx, (m + i) as i64);
    poly(&ctx, &[(one, 2), (one, q + 1), (minus, (q + 1) * r), (one, top)])
}

/// `L(t(x)^2) + ½ x^2` with `t = x^q - x` and `L = 8^{-1} (x^{3^i} - x)`.
pub fn dickson_kosick(m: usize, i: usize) -> Result<PlanarFn> {
    require(FamilyId::DKosick, m >= 2, format_args!("m ≥ 2 fails for m = {m}"))?;
    require(FamilyId::DKosick, 0 < i && i < m, format_args!("0 < i < m fails for i = {i}, m = {m}"))?;
    let ctx = make_field(2 * m)?;
    // 8 = 2 and 2^{-1} = 2 in characteristic 3
    from_values(&ctx, |x| {
        let t = ctx.sub(ctx.frobenius(x, m), x);
        let t2 = ctx.mul(t, t);
        let l = ctx.scale(ctx.sub(ctx.frobenius(t2, i), t2), 2);
        ctx.add(l, ctx.scale(ctx.mul(x, x), 2))
    })
}

/// `M(x) = 3x - x^r + x^q + x^{qr}` with `r = 3^i`, `i` as chosen by
/// [`dickson_index`]; maps the Kosick form onto the quadrinomial.
pub fn dickson_permutation(m: usize, i: usize) -> Result<LinearMap> {
    let i = dickson_index(m, i)?;
    let ctx = make_field(2 * m)?;
    let images = (0..ctx.n())
        .map(|k| {
            let b = ctx.basis(k);
            let s = ctx.sub(ctx.frobenius(b, m), ctx.frobenius(b, i));
            ctx.add(s, ctx.frobenius(b, m + i))
        })
        .collect();
    Ok(LinearMap::from_images(&ctx, images))
}

/// `x^{q+1} + α^{e (3^{m/2} - 1)} x^{2 · 3^{m/2}}` over GF(q^2), α the field
/// generator.
pub fn dickson_binomial(m: usize, e: u64) -> Result<PlanarFn> {
    let fam = FamilyId::DBinom;
    require(fam, m >= 2 && m % 2 == 0, format_args!("m ≥ 2 even fails for m = {m}"))?;
    let h = 3u64.pow((m / 2) as u32);
    require(fam, h % 4 == 1, format_args!("3^(m/2) ≡ 1 mod 4 fails for m = {m}"))?;
    require(fam, e >= 1, "e must be a positive integer")?;
    let ctx = make_field(2 * m)?;
    let q = 3u64.pow(m as u32);
    let c = ctx.gen_pow(e * (h - 1));
    poly(&ctx, &[(Fe::ONE, q + 1), (c, 2 * h)])
}

const SPORADIC_6: [&str; 7] = [
    "g^91*x^30 + x^10 + x^2",
    "g^91*x^486 + x^10 + x^2",
    "g^182*x^82 + 2*x^10 + g^91*x^6 + x^2",
    "g^182*x^82 + 2*x^10 + g^273*x^6 + x^2",
    "g^91*x^486 + g^182*x^90 + 2*x^10 + x^2",
    "g^273*x^486 + g^182*x^90 + 2*x^10 + x^2",
    "g^273*x^246 + g^182*x^82 + g^91*x^6 + x^2",
];

const SPORADIC_9: [&str; 2] = [
    "x^756 + x^486 + x^162 + x^6 + x^2",
    "x^486 + x^162 + 2*x^84 + 2*x^18 + x^2",
];

fn sporadic_list(n: usize) -> &'static [&'static str] {
    match n {
        6 => &SPORADIC_6,
        9 => &SPORADIC_9,
        _ => &[],
    }
}

/// The expansion-search function `f_k` over GF(3^n), n ∈ {6, 9}.
pub fn sporadic(n: usize, k: usize) -> Result<PlanarFn> {
    let list = sporadic_list(n);
    match k.checked_sub(1).and_then(|i| list.get(i)) {
        Some(text) => PlanarFn::parse(make_field(n)?, text),
        None => Err(Error::Unknown(format!("sporadic f{k} over GF(3^{n})"))),
    }
}

fn usize_param(spec: &FamilySpec, name: &str) -> Result<usize> {
    let v = spec.int(name)?;
    usize::try_from(v).map_err(|_| Error::Constraint(format!("{}: `{name}` must be non-negative", spec.family)))
}

/// Nonsquare `alpha` of GF(3^m), defaulting to the smallest one.
fn subfield_alpha(spec: &FamilySpec, ctx: &FieldCtx, m: usize) -> Result<Fe> {
    match spec.elem("alpha")? {
        Some(a) => {
            require(spec.family, subfield_nonsquare(ctx, a, m), format_args!("alpha must be a nonsquare of GF(3^{m})"))?;
            Ok(a)
        }
        None => smallest_nonsquare(ctx, m),
    }
}

fn primitive_alpha(spec: &FamilySpec, ctx: &FieldCtx) -> Result<Fe> {
    match spec.elem("alpha")? {
        Some(a) => {
            require(spec.family, is_primitive(ctx, a), "alpha must be primitive")?;
            Ok(a)
        }
        None => Ok(ctx.gen_pow(1)),
    }
}

/// An element outside GF(3^m), defaulting to the generator.
fn outside_subfield(spec: &FamilySpec, ctx: &FieldCtx, name: &str, m: usize) -> Result<Fe> {
    let v = spec.elem(name)?.unwrap_or(ctx.gen_pow(1));
    require(spec.family, !ctx.in_subfield(v, m), format_args!("{name} must lie outside GF(3^{m})"))?;
    Ok(v)
}

/// Twisted multiplication `x^{3^k} y + x y^{3^k}`.
fn circ(ctx: &FieldCtx, k: usize, x: Fe, y: Fe) -> Fe {
    ctx.add(ctx.mul(ctx.frobenius(x, k), y), ctx.mul(x, ctx.frobenius(y, k)))
}

pub fn generate(spec: &FamilySpec) -> Result<PlanarFn> {
    use FamilyId::*;
    let fam = spec.family;
    let n = spec.n;
    let ctx = make_field(n)?;
    let nn = n as u64;
    match fam {
        FF => {
            spec.check_known(&[])?;
            PlanarFn::monomial(ctx, 2)
        }
        A => {
            spec.check_known(&["i"])?;
            let i = usize_param(spec, "i")?;
            require(fam, 1 <= i && i <= n / 2, format_args!("1 ≤ i ≤ ⌊n/2⌋ fails for i = {i}"))?;
            require(fam, (nn / gcd(nn, i as u64)) % 2 == 1, format_args!("n/gcd(n,i) odd fails for i = {i}"))?;
            PlanarFn::monomial(ctx, 3u64.pow(i as u32) + 1)
        }
        CM => {
            spec.check_known(&["i"])?;
            let i = usize_param(spec, "i")?;
            require(fam, i >= 3 && i % 2 == 1, format_args!("i ≥ 3 odd fails for i = {i}"))?;
            require(fam, gcd(nn, i as u64) == 1, format_args!("gcd(n,i) = 1 fails for i = {i}"))?;
            PlanarFn::monomial(ctx.clone(), cm_exponent(&ctx, i))
        }
        TST => {
            spec.check_known(&["sign"])?;
            let sign = spec.int_or("sign", 1)?;
            require(fam, sign == 1 || sign == -1, "sign must be + or -")?;
            require(fam, n >= 5 && n % 2 == 1, format_args!("n ≥ 5 odd fails for n = {n}"))?;
            let mid = if sign == 1 { Fe::ONE } else { ctx.neg(Fe::ONE) };
            poly(&ctx, &[(Fe::ONE, 10), (mid, 6), (ctx.neg(Fe::ONE), 2)])
        }
        ACW => {
            spec.check_known(&[])?;
            require(fam, n == 5, "defined over GF(3^5) only")?;
            poly(&ctx, &[(Fe::ONE, 90), (Fe::ONE, 2)])
        }
        CK => {
            spec.check_known(&["option"])?;
            require(fam, n == 5, "defined over GF(3^5) only")?;
            let option = spec.int_or("option", 1)?;
            require(fam, option == 1 || option == 2, "option must be 1 or 2")?;
            let l = if option == 1 {
                poly(&ctx, &[(ctx.neg(Fe::ONE), 3)])?
            } else {
                poly(&ctx, &[(ctx.neg(Fe::ONE), 1)])?
            };
            let d = if option == 1 {
                poly(&ctx, &[(ctx.neg(Fe::ONE), 36), (Fe::ONE, 30), (Fe::ONE, 28), (Fe::ONE, 4)])?
            } else {
                poly(&ctx, &[(ctx.neg(Fe::ONE), 36), (Fe::ONE, 28), (Fe::ONE, 12), (Fe::ONE, 4)])?
            };
            from_values(&ctx, |x| {
                let t = ctx.sub(ctx.pow(x, 3), x);
                let v = ctx.add(l.eval(ctx.mul(t, t)), d.eval(t));
                ctx.add(v, ctx.scale(ctx.mul(x, x), 2))
            })
        }
        D => {
            spec.check_known(&["i", "alpha"])?;
            let m = even_half(fam, n)?;
            let i = usize_param(spec, "i")?;
            require(fam, 0 < i && i <= m / 2, format_args!("0 < i ≤ ⌊m/2⌋ fails for i = {i}, m = {m}"))?;
            let alpha = subfield_alpha(spec, &ctx, m)?;
            let pairing = BivariatePairing::new(ctx.clone())?;
            pairing.from_product(|a, b, c, d| {
                let u = ctx.add(ctx.mul(a, c), ctx.mul(alpha, ctx.frobenius(ctx.mul(b, d), i)));
                let v = ctx.add(ctx.mul(a, d), ctx.mul(b, c));
                (u, v)
            })
        }
        DQuad => {
            spec.check_known(&["i"])?;
            dickson_quadrinomial(even_half(fam, n)?, usize_param(spec, "i")?)
        }
        DKosick => {
            spec.check_known(&["i"])?;
            dickson_kosick(even_half(fam, n)?, usize_param(spec, "i")?)
        }
        DBinom => {
            spec.check_known(&["e"])?;
            let e = spec.int_or("e", 1)?;
            require(fam, e >= 1, "e must be a positive integer")?;
            dickson_binomial(even_half(fam, n)?, e as u64)
        }
        CG => {
            let m = even_half(fam, n)?;
            require(fam, m >= 3, format_args!("m ≥ 3 fails for m = {m}"))?;
            if m % 2 == 1 {
                spec.check_known(&["beta"])?;
                let beta = outside_subfield(spec, &ctx, "beta", m)?;
                let alpha = ctx.sub(ctx.frobenius(beta, m), beta);
                let a3 = ctx.mul(alpha, ctx.mul(alpha, alpha));
                let lin = ctx.sub(Fe::ONE, ctx.mul(a3, alpha));
                kosick_form(&ctx, m, |y| {
                    let s = ctx.add(ctx.pow(y, 9), ctx.mul(alpha, ctx.pow(y, 3)));
                    ctx.sub(ctx.mul(lin, y), s)
                }, |_| Fe::ZERO)
            } else {
                spec.check_known(&["alpha"])?;
                let alpha = subfield_alpha(spec, &ctx, m)?;
                let a3 = ctx.pow(alpha, 3);
                let pairing = BivariatePairing::new(ctx.clone())?;
                pairing.from_product(|a, b, c, d| {
                    let bd = ctx.mul(b, d);
                    let u = ctx.add(ctx.add(ctx.mul(a, c), ctx.mul(alpha, bd)), ctx.mul(a3, ctx.pow(bd, 9)));
                    let v = ctx.add(ctx.add(ctx.mul(a, d), ctx.mul(b, c)), ctx.mul(alpha, ctx.pow(bd, 3)));
                    (u, v)
                })
            }
        }
        G => {
            spec.check_known(&["beta"])?;
            let m = even_half(fam, n)?;
            require(fam, m >= 3 && m % 2 == 1, format_args!("m ≥ 3 odd fails for m = {m}"))?;
            let beta = outside_subfield(spec, &ctx, "beta", m)?;
            let alpha = ctx.sub(ctx.frobenius(beta, m), beta);
            let a5 = ctx.inv(ctx.pow(alpha, 5))?;
            let a10 = ctx.mul(a5, a5);
            kosick_form(
                &ctx,
                m,
                |y| ctx.sub(y, ctx.mul(a5, ctx.pow(y, 3))),
                |t| ctx.neg(ctx.mul(a10, ctx.pow(t, 10))),
            )
        }
        PW => {
            spec.check_known(&[])?;
            require(fam, n == 10, "defined over GF(3^10) only")?;
            let pairing = BivariatePairing::new(ctx.clone())?;
            pairing.from_product(|a, b, c, d| {
                let bd = ctx.mul(b, d);
                let u = ctx.add(ctx.mul(a, c), ctx.pow(bd, 9));
                let v = ctx.add(ctx.add(ctx.mul(a, d), ctx.mul(b, c)), ctx.pow(bd, 27));
                (u, v)
            })
        }
        BH => {
            spec.check_known(&["s", "omega", "beta"])?;
            let m = even_half(fam, n)?;
            let s = usize_param(spec, "s")?;
            require(fam, 0 < s && s < m, format_args!("0 < s < m fails for s = {s}, m = {m}"))?;
            require(fam, nu2(s as u64) != nu2(m as u64), format_args!("ν2(s) ≠ ν2(m) fails for s = {s}, m = {m}"))?;
            let omega = outside_subfield(spec, &ctx, "omega", m)?;
            let beta = spec.elem("beta")?.unwrap_or(ctx.gen_pow(1));
            require(fam, !ctx.is_square(beta), "beta must be a nonsquare")?;
            let (pm, ps) = (3u64.pow(m as u32), 3u64.pow(s as u32));
            let wb = ctx.mul(omega, beta);
            let wbq = ctx.mul(omega, ctx.frobenius(beta, m));
            poly(&ctx, &[(Fe::ONE, pm + 1), (wb, ps + 1), (wbq, ps * pm + pm)])
        }
        ZKW => {
            spec.check_known(&["s", "alpha"])?;
            require(fam, n % 3 == 0, format_args!("n = 3k fails for n = {n}"))?;
            let k = n / 3;
            require(fam, gcd(3, k as u64) == 1, format_args!("gcd(3,k) = 1 fails for k = {k}"))?;
            let s = usize_param(spec, "s")?;
            require(fam, s > 0, "s must be positive")?;
            require(fam, k % 3 == s % 3, format_args!("k ≡ s mod 3 fails for k = {k}, s = {s}"))?;
            require(fam, (nn / gcd(s as u64, nn)) % 2 == 1, format_args!("n/gcd(s,n) odd fails for s = {s}"))?;
            let alpha = primitive_alpha(spec, &ctx)?;
            let c = ctx.neg(ctx.pow(alpha, 3u64.pow(k as u32) - 1));
            let e2 = pow3(&ctx, k as i64) + pow3(&ctx, (2 * k + s) as i64);
            poly(&ctx, &[(Fe::ONE, pow3(&ctx, s as i64) + 1), (c, e2)])
        }
        B => {
            spec.check_known(&["s", "alpha"])?;
            require(fam, n % 4 == 0, format_args!("n = 4k fails for n = {n}"))?;
            let k = n / 4;
            let s = usize_param(spec, "s")?;
            require(fam, s > 0, "s must be positive")?;
            let kk = 2 * k as u64;
            require(fam, (kk / gcd(kk, s as u64)) % 2 == 1, format_args!("2k/gcd(2k,s) odd fails for s = {s}"))?;
            require(fam, s % 2 == 0, format_args!("3^s ≡ 1 mod 4 fails for s = {s}"))?;
            require(fam, k % 2 == 0, format_args!("3^k ≡ 1 mod 4 fails for k = {k}"))?;
            let alpha = primitive_alpha(spec, &ctx)?;
            let c = ctx.neg(ctx.pow(alpha, 3u64.pow(k as u32) - 1));
            let e2 = pow3(&ctx, (3 * k) as i64) + pow3(&ctx, (k + s) as i64);
            poly(&ctx, &[(Fe::ONE, pow3(&ctx, s as i64) + 1), (c, e2)])
        }
        ZP => {
            spec.check_known(&["i", "k", "alpha"])?;
            let m = even_half(fam, n)?;
            let (i, k) = (usize_param(spec, "i")?, usize_param(spec, "k")?);
            require(fam, i <= m / 2 && k <= m / 2, format_args!("0 ≤ k,i ≤ ⌊m/2⌋ fails for i = {i}, k = {k}"))?;
            require(fam, (i, k) != (0, 0), "(i,k) ≠ (0,0) fails")?;
            let mm = m as u64;
            require(fam, (mm / gcd(mm, k as u64)) % 2 == 1, format_args!("m/gcd(m,k) odd fails for k = {k}"))?;
            let alpha = subfield_alpha(spec, &ctx, m)?;
            let pairing = BivariatePairing::new(ctx.clone())?;
            pairing.from_product(|a, b, c, d| {
                let u = ctx.add(circ(&ctx, k, a, c), ctx.mul(alpha, ctx.frobenius(circ(&ctx, k, b, d), i)));
                let v = ctx.add(ctx.mul(a, d), ctx.mul(b, c));
                (u, v)
            })
        }
        GK => {
            spec.check_known(&["k", "alpha", "beta"])?;
            let m = even_half(fam, n)?;
            require(fam, m % 2 == 0 && !m.is_power_of_two(), format_args!("m even and not a power of 2 fails for m = {m}"))?;
            let k = usize_param(spec, "k")?;
            require(fam, 0 < k && k < m, format_args!("0 < k < m fails for k = {k}"))?;
            let mm = m as u64;
            require(fam, (mm / gcd(mm, k as u64)) % 2 == 1, format_args!("m/gcd(m,k) odd fails for k = {k}"))?;
            let alpha = subfield_alpha(spec, &ctx, m)?;
            let h = 3u64.pow((m / 2) as u32) + 1;
            // As printed the condition reads "not a (3^{m/2}+1)-th power";
            // the product is planar exactly when beta is one.
            let beta = spec.elem("beta")?.unwrap_or(Fe::ONE);
            require(
                fam,
                ctx.in_subfield(beta, m) && !beta.is_zero() && is_power_in_subfield(&ctx, beta, m, h),
                format_args!("beta must be a nonzero {h}-th power in GF(3^{m})"),
            )?;
            let ba = ctx.div(beta, alpha)?;
            let (pk, pkm) = (k, k + m / 2);
            let pairing = BivariatePairing::new(ctx.clone())?;
            pairing.univariate(|x, y| {
                let u = ctx.add(ctx.mul(ctx.frobenius(x, pk), x), ctx.mul(alpha, ctx.mul(ctx.frobenius(y, pk), y)));
                let v = ctx.add(ctx.mul(ctx.frobenius(x, pkm), y), ctx.mul(ba, ctx.mul(x, ctx.frobenius(y, pkm))));
                (u, v)
            })
        }
        Sporadic => {
            spec.check_known(&["f"])?;
            sporadic(n, usize_param(spec, "f")?)
        }
    }
}

fn is_power_in_subfield(ctx: &FieldCtx, b: Fe, m: usize, h: u64) -> bool {
    let order = 3u64.pow(m as u32) - 1;
    let g = gcd(h, order);
    ctx.pow(b, order / g) == Fe::ONE
}

/// `L(t(x)^2) + D(t(x)) + ½ x^2` with `t(x) = x^{3^m} - x`.
fn kosick_form(
    ctx: &Arc<FieldCtx>,
    m: usize,
    l: impl Fn(Fe) -> Fe + Sync,
    d: impl Fn(Fe) -> Fe + Sync,
) -> Result<PlanarFn> {
    from_values(ctx, |x| {
        let t = ctx.sub(ctx.frobenius(x, m), x);
        let v = ctx.add(l(ctx.mul(t, t)), d(t));
        ctx.add(v, ctx.scale(ctx.mul(x, x), 2))
    })
}

/// `(3^i + 1) / 2` reduced to `1..q-1`.
fn cm_exponent(ctx: &FieldCtx, i: usize) -> u64 {
    let ord = ctx.order() as u64;
    let modulus = 2 * ord;
    let r = (0..i).fold(1u64, |acc, _| acc * 3 % modulus);
    let e = (r + 1) / 2 % ord;
    if e == 0 {
        ord
    } else {
        e
    }
}

/// `(|N|, |N_m|)` as given by the family's closed form; `None` for non-DO
/// families and where no formula is known.
pub fn expected_nuclei(spec: &FamilySpec) -> Result<Option<(u64, u64)>> {
    use FamilyId::*;
    let n = spec.n as u64;
    let p = |e: u64| 3u64.pow(e as u32);
    let int = |name: &str| usize_param(spec, name).map(|v| v as u64);
    let m = n / 2;
    Ok(match spec.family {
        FF => Some((p(n), p(n))),
        A => {
            let g = gcd(n, int("i")?);
            Some((p(g), p(g)))
        }
        CM => None,
        TST | ACW | CK | G => Some((3, 3)),
        D => Some((p(gcd(int("i")?, m)), p(m))),
        DQuad | DKosick => {
            let i = dickson_index(m as usize, int("i")? as usize)? as u64;
            Some((p(gcd(i, m)), p(m)))
        }
        DBinom => Some((p(m / 2), p(m))),
        CG => Some((3, p(m))),
        PW => Some((3, p(5))),
        BH => {
            let g = gcd(m, int("s")?);
            Some((p(g), p(2 * g)))
        }
        ZKW => {
            let g = gcd(int("s")?, n / 3);
            Some((p(g), p(g)))
        }
        B => {
            let g = gcd(int("s")?, n / 4);
            Some((p(g), p(2 * g)))
        }
        ZP => {
            let (i, k) = (int("i")?, int("k")?);
            let gk = gcd(m, k);
            if i == 0 {
                Some((p(gk), p(2 * gk)))
            } else {
                Some((p(gcd(gk, i)), p(gk)))
            }
        }
        GK => {
            let g = gcd(int("k")?, m);
            Some((p(g / 2), p(g)))
        }
        Sporadic => match n {
            6 => Some((3, 9)),
            9 => Some((3, 27)),
            _ => None,
        },
    })
}

/// Every family instance over GF(3^n) with default element parameters,
/// in a fixed order.
pub fn admissible(n: usize) -> Vec<FamilySpec> {
    FamilyId::ALL
        .into_iter()
        .flat_map(|f| admissible_for(f, n))
        .collect()
}

pub fn admissible_for(family: FamilyId, n: usize) -> Vec<FamilySpec> {
    use FamilyId::*;
    let spec = FamilySpec::new(family, n);
    let m = n / 2;
    let nn = n as u64;
    let range = |lo: usize, hi: usize, key: &'static str| -> Vec<FamilySpec> {
        (lo..=hi).map(|v| spec.clone().with(key, v as i64)).collect()
    };
    let candidates: Vec<FamilySpec> = match family {
        FF | ACW | PW => vec![spec.clone()],
        A => range(1, n / 2, "i"),
        CM => {
            let Ok(ctx) = make_field(n) else { return Vec::new() };
            let mut seen = Vec::new();
            let mut out = Vec::new();
            for i in (3..n).step_by(2) {
                if gcd(nn, i as u64) != 1 {
                    continue;
                }
                let e = cm_exponent(&ctx, i);
                if !seen.contains(&e) {
                    seen.push(e);
                    out.push(spec.clone().with("i", i as i64));
                }
            }
            out
        }
        TST => vec![spec.clone().with("sign", 1), spec.clone().with("sign", -1)],
        CK => vec![spec.clone().with("option", 1), spec.clone().with("option", 2)],
        D | DQuad | DKosick => range(1, m / 2, "i"),
        DBinom => vec![spec.clone().with("e", 1)],
        CG | G => vec![spec.clone()],
        BH => range(1, m.saturating_sub(1), "s"),
        ZKW | B => range(1, n.saturating_sub(1), "s"),
        ZP => (0..=m / 2)
            .flat_map(|i| (0..=m / 2).map(move |k| (i, k)))
            .map(|(i, k)| spec.clone().with("i", i as i64).with("k", k as i64))
            .collect(),
        GK => range(1, m.saturating_sub(1), "k"),
        Sporadic => range(1, sporadic_list(n).len(), "f"),
    };
    candidates.into_iter().filter(|s| validate(s).is_ok()).collect()
}

/// Every admissible instance at degree `n`, generated.
pub fn instances(n: usize) -> Result<Vec<(FamilySpec, PlanarFn)>> {
    admissible(n)
        .into_iter()
        .map(|spec| generate(&spec).map(|f| (spec, f)))
        .collect()
}

/// Checks the family constraints without building the function.
pub fn validate(spec: &FamilySpec) -> Result<()> {
    use FamilyId::*;
    let fam = spec.family;
    let n = spec.n;
    let nn = n as u64;
    if n == 0 || n > 12 {
        return Err(Error::DegreeOutOfRange(n));
    }
    match fam {
        A => {
            let i = usize_param(spec, "i")?;
            require(fam, 1 <= i && i <= n / 2, "1 ≤ i ≤ ⌊n/2⌋")?;
            require(fam, (nn / gcd(nn, i as u64)) % 2 == 1, "n/gcd(n,i) odd")
        }
        CM => {
            let i = usize_param(spec, "i")?;
            require(fam, i >= 3 && i % 2 == 1 && gcd(nn, i as u64) == 1, "i ≥ 3 odd with gcd(n,i) = 1")
        }
        TST => require(fam, n >= 5 && n % 2 == 1, "n ≥ 5 odd"),
        ACW | CK => require(fam, n == 5, "n = 5"),
        PW => require(fam, n == 10, "n = 10"),
        D | DQuad | DKosick => {
            let m = even_half(fam, n)?;
            let i = usize_param(spec, "i")?;
            let hi = if fam == D { m / 2 } else { m - 1 };
            require(fam, 0 < i && i <= hi, "index out of range")
        }
        DBinom => {
            let m = even_half(fam, n)?;
            require(fam, m % 2 == 0 && 3u64.pow((m / 2) as u32) % 4 == 1, "3^(m/2) ≡ 1 mod 4")
        }
        CG => {
            let m = even_half(fam, n)?;
            require(fam, m >= 3, "m ≥ 3")
        }
        G => {
            let m = even_half(fam, n)?;
            require(fam, m >= 3 && m % 2 == 1, "m ≥ 3 odd")
        }
        BH => {
            let m = even_half(fam, n)?;
            let s = usize_param(spec, "s")?;
            require(fam, 0 < s && s < m && nu2(s as u64) != nu2(m as u64), "0 < s < m with ν2(s) ≠ ν2(m)")
        }
        ZKW => {
            let s = usize_param(spec, "s")?;
            let k = n / 3;
            require(
                fam,
                n % 3 == 0 && gcd(3, k as u64) == 1 && s > 0 && k % 3 == s % 3 && (nn / gcd(s as u64, nn)) % 2 == 1,
                "n = 3k, gcd(3,k) = 1, k ≡ s mod 3, n/gcd(s,n) odd",
            )
        }
        B => {
            let s = usize_param(spec, "s")?;
            let k = n / 4;
            let kk = 2 * k as u64;
            require(
                fam,
                n % 4 == 0 && s > 0 && s % 2 == 0 && k % 2 == 0 && (kk / gcd(kk, s as u64)) % 2 == 1,
                "n = 4k, 2k/gcd(2k,s) odd, 3^s ≡ 3^k ≡ 1 mod 4",
            )
        }
        ZP => {
            let m = even_half(fam, n)?;
            let (i, k) = (usize_param(spec, "i")?, usize_param(spec, "k")?);
            let mm = m as u64;
            require(
                fam,
                i <= m / 2 && k <= m / 2 && (i, k) != (0, 0) && (mm / gcd(mm, k as u64)) % 2 == 1,
                "0 ≤ k,i ≤ ⌊m/2⌋, (i,k) ≠ (0,0), m/gcd(m,k) odd",
            )
        }
        GK => {
            let m = even_half(fam, n)?;
            let k = usize_param(spec, "k")?;
            let mm = m as u64;
            require(
                fam,
                m % 2 == 0 && !m.is_power_of_two() && 0 < k && k < m && (mm / gcd(mm, k as u64)) % 2 == 1,
                "m even, not a power of 2, m/gcd(m,k) odd",
            )
        }
        FF => Ok(()),
        Sporadic => {
            let f = usize_param(spec, "f")?;
            require(fam, 1 <= f && f <= sporadic_list(n).len(), "unknown sporadic index")
        }
    }
}
