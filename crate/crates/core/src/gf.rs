//! Arithmetic in finite fields `F_{p^h}` given by an explicit monic
//! irreducible modulus over `F_p`.
//!
//! Elements are plain [`FieldElement`] codes: the coordinates
//! `(c_0, ..., c_{h-1})` of `c_0 + c_1 u + ... + c_{h-1} u^{h-1}` packed as
//! the base-`p` integer `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`. All arithmetic
//! goes through the owning [`FieldSpec`], which is immutable once built and
//! can be shared freely between threads.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fields up to this order get logarithm tables for multiplication.
const TABLE_LIMIT: u64 = 1 << 16;

/// An element of some [`FieldSpec`], stored as its base-`p` coordinate code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn code(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps a code without validating it against a field.
    #[inline]
    pub(crate) fn from_code(code: u64) -> Self {
        FieldElement(code)
    }
}

struct LogTables {
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero codes `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// A finite field `F_{p^h} = F_p[u]/(modulus)`.
pub struct FieldSpec {
    p: u64,
    h: u32,
    q: u64,
    /// Ascending coefficients, length `h + 1`, monic.
    modulus: Vec<u64>,
    pow_p: Vec<u64>,
    tables: Option<LogTables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.literal())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

/// Builds `F_{p^h}`. When `modulus` is omitted the lexicographically smallest
/// monic irreducible polynomial of degree `h` is used, comparing coefficient
/// vectors from the `u^{h-1}` coefficient down to the constant term.
///
/// `modulus` lists ascending coefficients; it may include the leading `1` or
/// omit it.
pub fn make_field(p: u64, h: u32, modulus: Option<&[u64]>) -> Result<Arc<FieldSpec>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if h == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    let q = checked_pow(p, h).ok_or(Error::FieldTooLarge { p, h })?;
    let modulus = match modulus {
        Some(m) => {
            let mut m: Vec<u64> = m.iter().map(|c| c % p).collect();
            if m.len() == h as usize {
                m.push(1);
            }
            if m.len() != h as usize + 1 || m[h as usize] != 1 {
                return Err(Error::InvalidField(format!(
                    "modulus must be monic of degree {h}"
                )));
            }
            if h == 1 {
                // Any monic linear modulus gives the prime field; normalise it.
                vec![0, 1]
            } else {
                if !fp_poly::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
        }
        None => smallest_irreducible(p, h),
    };
    Ok(Arc::new(FieldSpec::from_parts(p, h, q, modulus)))
}

/// Decomposes `q = p^h`; `None` unless `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

fn smallest_irreducible(p: u64, h: u32) -> Vec<u64> {
    if h == 1 {
        return vec![0, 1];
    }
    let count = checked_pow(p, h).expect("field order already checked");
    for idx in 0..count {
        // The most significant digit of idx is the u^{h-1} coefficient.
        let mut m = vec![0u64; h as usize + 1];
        let mut rest = idx;
        for c in m.iter_mut().take(h as usize) {
            *c = rest % p;
            rest /= p;
        }
        m[h as usize] = 1;
        if m[0] != 0 && fp_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl FieldSpec {
    fn from_parts(p: u64, h: u32, q: u64, modulus: Vec<u64>) -> Self {
        let mut pow_p = Vec::with_capacity(h as usize + 1);
        let mut acc = 1u64;
        for i in 0..=h {
            pow_p.push(acc);
            if i < h {
                acc = acc.saturating_mul(p);
            }
        }
        let mut spec = FieldSpec { p, h, q, modulus, pow_p, tables: None };
        if q <= TABLE_LIMIT && q > 2 {
            spec.tables = Some(spec.build_tables());
        }
        spec
    }

    fn build_tables(&self) -> LogTables {
        let order = self.q - 1;
        let factors = distinct_prime_factors(order);
        let g = (2..self.q)
            .map(FieldElement)
            .find(|&g| factors.iter().all(|&l| self.pow_slow(g, order / l) != FieldElement::ONE))
            .expect("multiplicative group is cyclic");
        let n = order as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = FieldElement::ONE;
        for i in 0..n {
            exp[i] = cur.0 as u32;
            exp[i + n] = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        LogTables { exp, log }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Ascending modulus coefficients including the leading one.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// CLI literal, e.g. `p=3,h=2,mod=u^2+1`.
    pub fn literal(&self) -> String {
        if self.h == 1 {
            format!("p={}", self.p)
        } else {
            format!("p={},h={},mod={}", self.p, self.h, self.format_coeffs(&self.modulus))
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `u`; equals zero in a prime field.
    pub fn generator(&self) -> FieldElement {
        if self.h == 1 {
            FieldElement::ZERO
        } else {
            FieldElement(self.p)
        }
    }

    /// Element from an arbitrary code; `None` when `code >= q`.
    pub fn element(&self, code: u64) -> Option<FieldElement> {
        (code < self.q).then_some(FieldElement(code))
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.p as i64) as u64;
        FieldElement(r)
    }

    pub fn from_u128(&self, n: u128) -> FieldElement {
        FieldElement((n % self.p as u128) as u64)
    }

    /// Element with the given power-basis coordinates (extra ones ignored).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let mut code = 0u64;
        for (i, &c) in coeffs.iter().take(self.h as usize).enumerate() {
            code += (c % self.p) * self.pow_p[i];
        }
        FieldElement(code)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.h as usize);
        let mut rest = a.0;
        for _ in 0..self.h {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    /// Whether `a` lies in the prime field.
    pub fn is_prime_field_element(&self, a: FieldElement) -> bool {
        a.0 < self.p
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.h == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y, mut code) = (a.0, b.0, 0u64);
        for i in 0..self.h as usize {
            let d = (x % self.p + y % self.p) % self.p;
            code += d * self.pow_p[i];
            x /= self.p;
            y /= self.p;
        }
        FieldElement(code)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.h == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let (mut x, mut code) = (a.0, 0u64);
        for i in 0..self.h as usize {
            let d = x % self.p;
            if d != 0 {
                code += (self.p - d) * self.pow_p[i];
            }
            x /= self.p;
        }
        FieldElement(code)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.h == 1 {
            return FieldElement(mulmod(a.0, b.0, self.p));
        }
        match &self.tables {
            Some(t) => {
                let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FieldElement(t.exp[i] as u64)
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        let h = self.h as usize;
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let mut prod = vec![0u64; 2 * h - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(xi, yj, p)) % p;
            }
        }
        for k in (h..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..h {
                let sub = mulmod(c, self.modulus[j], p);
                prod[k - h + j] = (prod[k - h + j] + p - sub) % p;
            }
        }
        self.from_coeffs(&prod[..h])
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = (t.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return FieldElement(t.exp[l] as u64);
        }
        self.pow_slow(a, e)
    }

    fn pow_slow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow_or_prime(acc, base);
            }
            base = self.mul_slow_or_prime(base, base);
            e >>= 1;
        }
        acc
    }

    fn mul_slow_or_prime(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.h == 1 {
            FieldElement(mulmod(a.0, b.0, self.p))
        } else {
            self.mul_slow(a, b)
        }
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let n = (self.q - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return Some(FieldElement(t.exp[(n - l) % n] as u64));
        }
        Some(self.pow_slow(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^{p^k}`.
    pub fn frobenius_power(&self, a: FieldElement, k: u64) -> FieldElement {
        let k = (k % self.h as u64) as u32;
        if k == 0 || a.0 < self.p {
            return a;
        }
        self.pow(a, self.pow_p[k as usize])
    }

    /// The unique `b` with `b^{p^r} = a`.
    pub fn p_power_root(&self, a: FieldElement, r: u64) -> FieldElement {
        let h = self.h as u64;
        self.frobenius_power(a, (h - r % h) % h)
    }

    /// Whether `a` lies in the subfield `F_{p^r}`; `r` must divide `h`.
    pub fn in_subfield(&self, a: FieldElement, r: u32) -> Result<bool> {
        if r == 0 || self.h % r != 0 {
            return Err(Error::NotASubfield { r, h: self.h });
        }
        Ok(self.frobenius_power(a, r as u64) == a)
    }

    /// Whether `a^q = a` for `q = p^k`, i.e. `a` lies in `F_{p^gcd(h,k)}`.
    pub fn fixed_by_frobenius(&self, a: FieldElement, k: u64) -> bool {
        self.frobenius_power(a, k) == a
    }

    /// Readable form in the generator `u`, e.g. `2*u+1`.
    pub fn format(&self, a: FieldElement) -> String {
        self.format_coeffs(&self.coeffs(a))
    }

    /// Like [`format`](Self::format) but parenthesised when it is not a plain integer.
    pub fn format_coefficient(&self, a: FieldElement) -> String {
        if self.is_prime_field_element(a) {
            a.0.to_string()
        } else {
            format!("({})", self.format(a))
        }
    }

    fn format_coeffs(&self, c: &[u64]) -> String {
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let s = match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "u".to_string(),
                (1, _) => format!("{ci}*u"),
                (_, 1) => format!("u^{i}"),
                _ => format!("{ci}*u^{i}"),
            };
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Builds `F_{p^{hm}}` together with an embedding of `self` into it.
    ///
    /// The embedding sends `u` to the first root (in code order) of this
    /// field's modulus inside the larger field.
    pub fn extension(self: &Arc<Self>, m: u32) -> Result<(Arc<FieldSpec>, Embedding)> {
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        if m == 1 {
            return Ok((self.clone(), Embedding::identity(self.clone())));
        }
        let big = make_field(self.p, self.h * m, None)?;
        let emb = Embedding::new(self.clone(), big.clone())?;
        Ok((big, emb))
    }
}

/// A field embedding `F_{p^h} -> F_{p^{hm}}`.
#[derive(Clone)]
pub struct Embedding {
    source: Arc<FieldSpec>,
    target: Arc<FieldSpec>,
    /// Powers `rho^0, ..., rho^{h-1}` of the image of `u`.
    basis: Vec<FieldElement>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({} -> {})", self.source, self.target)
    }
}

impl Embedding {
    pub fn identity(field: Arc<FieldSpec>) -> Self {
        let basis = (0..field.h)
            .map(|i| FieldElement(field.pow_p[i as usize]))
            .collect();
        Embedding { source: field.clone(), target: field, basis }
    }

    /// Embedding into `target`, which must contain a root of the source modulus.
    pub fn new(source: Arc<FieldSpec>, target: Arc<FieldSpec>) -> Result<Self> {
        if source.p != target.p || target.h % source.h != 0 {
            return Err(Error::InvalidField(format!(
                "{source} does not embed into {target}"
            )));
        }
        if source.h == 1 {
            return Ok(Embedding { source, target, basis: vec![FieldElement::ONE] });
        }
        let rho = target
            .elements()
            .find(|&x| {
                let mut acc = FieldElement::ZERO;
                for &c in source.modulus.iter().rev() {
                    acc = target.add(target.mul(acc, x), FieldElement(c));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::InvalidField("no root of the modulus found".into()))?;
        let mut basis = Vec::with_capacity(source.h as usize);
        let mut cur = FieldElement::ONE;
        for _ in 0..source.h {
            basis.push(cur);
            cur = target.mul(cur, rho);
        }
        Ok(Embedding { source, target, basis })
    }

    pub fn source(&self) -> &Arc<FieldSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FieldSpec> {
        &self.target
    }

    pub fn map(&self, a: FieldElement) -> FieldElement {
        if a.0 < self.source.p {
            return a;
        }
        let t = &self.target;
        self.source
            .coeffs(a)
            .iter()
            .zip(&self.basis)
            .fold(FieldElement::ZERO, |acc, (&c, &b)| t.add(acc, t.mul(FieldElement(c), b)))
    }
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn checked_pow(p: u64, h: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..h {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Parses `p=5`, `q=25`, `p=5,h=2` or `p=3,h=2,mod=u^2+1`.
pub fn parse_field(text: &str) -> Result<Arc<FieldSpec>> {
    let bad = |msg: &str| Error::InvalidField(format!("{msg} in field literal {text:?}"));
    let (mut p, mut h, mut q, mut modulus) = (None, None, None, None);
    for part in text.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let value = value.trim();
        match key.trim() {
            "p" => p = Some(value.parse::<u64>().map_err(|_| bad("bad p"))?),
            "h" => h = Some(value.parse::<u32>().map_err(|_| bad("bad h"))?),
            "q" => q = Some(value.parse::<u64>().map_err(|_| bad("bad q"))?),
            "mod" => modulus = Some(value.to_string()),
            _ => return Err(bad("unknown key")),
        }
    }
    let (p, h) = match (p, h, q) {
        (Some(p), h, None) => (p, h.unwrap_or(1)),
        (None, None, Some(q)) => prime_power(q).ok_or_else(|| bad("q is not a prime power"))?,
        (Some(p), h, Some(q)) if prime_power(q) == Some((p, h.unwrap_or_else(|| prime_power(q).map_or(0, |x| x.1)))) => {
            prime_power(q).unwrap()
        }
        _ => return Err(bad("inconsistent p, h, q")),
    };
    match modulus {
        None => make_field(p, h, None),
        Some(m) => {
            let coeffs = parse_univariate(&m, p).ok_or_else(|| bad("bad modulus"))?;
            if coeffs.len() != h as usize + 1 {
                return Err(bad("modulus degree differs from h"));
            }
            make_field(p, h, Some(&coeffs))
        }
    }
}

/// Ascending coefficients mod `p` of a polynomial in `u` such as `u^3+2*u+1`.
fn parse_univariate(text: &str, p: u64) -> Option<Vec<u64>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<u64> = Vec::new();
    let mut rest = cleaned.as_str();
    let mut sign_neg = false;
    if let Some(r) = rest.strip_prefix('-') {
        sign_neg = true;
        rest = r;
    }
    loop {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        let (c, e) = match term.split_once('u') {
            None => (term.parse::<u64>().ok()?, 0usize),
            Some((c, e)) => {
                let c = match c.strip_suffix('*').unwrap_or(c) {
                    "" => 1,
                    c => c.parse::<u64>().ok()?,
                };
                let e = match e {
                    "" => 1,
                    e => e.strip_prefix('^')?.parse::<usize>().ok()?,
                };
                (c, e)
            }
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        let c = c % p;
        coeffs[e] = (coeffs[e] + if sign_neg { (p - c) % p } else { c }) % p;
        if end == rest.len() {
            break;
        }
        sign_neg = &rest[end..end + 1] == "-";
        rest = &rest[end + 1..];
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Some(coeffs)
}

/// Dense univariate polynomials over `F_p`, ascending coefficients.
mod fp_poly {
    use super::{mulmod, powmod};

    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = powmod(m[dm], p - 2, p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = mulmod(r[k], inv_lead, p);
            for j in 0..=dm {
                let sub = mulmod(c, m[j], p);
                r[k - dm + j] = (r[k - dm + j] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or irreducibility test for a monic `m` of degree at least 2.
    pub(super) fn is_irreducible(m: &[u64], p: u64) -> bool {
        let deg = m.len() - 1;
        let x = vec![0u64, 1];
        let mut xp = x.clone();
        for _ in 0..deg / 2 {
            xp = pow_mod(&xp, p, m, p);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(m, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn small_irreducibility() {
            assert!(is_irreducible(&[1, 0, 1], 3));
            assert!(!is_irreducible(&[1, 0, 1], 5));
            assert!(is_irreducible(&[1, 1, 0, 1], 5));
            // (u^2+1)^2 over F_3 has no roots but is reducible.
            assert!(!is_irreducible(&[1, 0, 2, 0, 1], 3));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FieldSpec> {
        make_field(3, 2, None).unwrap()
    }

    #[test]
    fn prime_field_has_trivial_modulus() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.literal(), "p=5");
    }

    #[test]
    fn f9_default_modulus_matches_exhaustive_choice() {
        // Brute force: the first monic quadratic (in the documented order) with no root mod 3.
        let mut first = None;
        'outer: for c1 in 0..3u64 {
            for c0 in 0..3u64 {
                if (0..3u64).all(|x| (x * x + c1 * x + c0) % 3 != 0) {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(first.as_deref(), Some(&[1u64, 0, 1][..]));
        assert_eq!(f9().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(make_field(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(5, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus)));
        assert!(matches!(make_field(2, 64, None), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn frobenius_on_f9() {
        let f = f9();
        let u = f.generator();
        let two = f.from_int(2);
        assert_eq!(f.frobenius_power(u, 1), f.mul(two, u));
        assert_eq!(f.frobenius_power(two, 1), two);
        assert_eq!(f.frobenius_power(u, 2), u);
        assert_eq!(f.p_power_root(f.mul(two, u), 1), u);
    }

    #[test]
    fn roots_in_prime_field() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(f.p_power_root(f.from_int(3), 1), f.from_int(3));
        assert_eq!(f.p_power_root(f.zero(), 3), f.zero());
    }

    #[test]
    fn subfield_membership() {
        let f = f9();
        assert!(f.in_subfield(f.from_int(2), 1).unwrap());
        assert!(!f.in_subfield(f.generator(), 1).unwrap());
        assert!(f.elements().all(|a| f.in_subfield(a, 2).unwrap()));
        assert!(f.in_subfield(f.one(), 3).is_err());
    }

    fn exhaustive_laws(f: &FieldSpec) {
        let p = f.characteristic();
        for a in f.elements() {
            assert_eq!(f.pow(a, f.order()), a);
            if !a.is_zero() {
                assert_eq!(f.pow(a, f.order() - 1), f.one());
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            assert_eq!(f.p_power_root(f.frobenius_power(a, 1), 1), a);
            for b in f.elements() {
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                assert_eq!(f.sub(f.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn field_laws_exhaustive_small() {
        for (p, h) in [(2, 1), (2, 2), (3, 2), (5, 1), (2, 3), (11, 2), (7, 1)] {
            exhaustive_laws(&make_field(p, h, None).unwrap());
        }
    }

    #[test]
    fn slow_and_table_multiplication_agree() {
        let f = make_field(5, 3, None).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = make_field(3, 11, None).unwrap();
        assert!(f.tables.is_none());
        let u = f.generator();
        assert_eq!(f.frobenius_power(u, 11), u);
        let inv = f.inv(u).unwrap();
        assert_eq!(f.mul(u, inv), f.one());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = f9();
        let (big, emb) = small.extension(2).unwrap();
        assert_eq!(big.order(), 81);
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
            }
        }
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn element_formatting() {
        let f = f9();
        let e = f.add(f.mul(f.from_int(2), f.generator()), f.one());
        assert_eq!(f.format(e), "2*u+1");
        assert_eq!(f.format_coefficient(e), "(2*u+1)");
        assert_eq!(f.format_coefficient(f.from_int(2)), "2");
        assert_eq!(f.literal(), "p=3,h=2,mod=u^2+1");
        assert_eq!(*parse_field(&f.literal()).unwrap(), *f);
        assert_eq!(parse_field("q=9").unwrap().literal(), f.literal());
        assert_eq!(parse_field("p=5").unwrap().order(), 5);
        assert_eq!(parse_field("p=5,h=3").unwrap().order(), 125);
        assert!(parse_field("p=3,h=2,mod=u^2+2*u").is_err());
        assert!(parse_field("q=12").is_err());
    }
}
