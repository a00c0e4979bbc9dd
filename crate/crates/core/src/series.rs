//! Truncated power series in `t` over a finite field, Hasse derivatives,
//! Hensel lifting of plane-curve branches, and Laurent series with absolute
//! precision for exact elimination.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::mpoly::MultiPoly;

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binomial(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn small_binomial(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // p is prime and den < p is nonzero here, so invert by Fermat.
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `D^(k) (sum a_i t^i) = sum C(i, k) a_i t^(i-k)`; the result has `len - k` terms.
pub fn hasse_shift(field: &FieldSpec, s: &[FieldElement], k: usize) -> Vec<FieldElement> {
    if k >= s.len() {
        return Vec::new();
    }
    let p = field.characteristic();
    (k..s.len())
        .map(|i| {
            let b = binomial_mod_p(i as u64, k as u64, p);
            if b == 0 {
                FieldElement::ZERO
            } else {
                field.mul(s[i], field.from_int(b as i64))
            }
        })
        .collect()
}

/// Product truncated to `n` terms.
pub fn mul_trunc(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement], n: usize) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] = field.add(out[i + j], field.mul(ai, bj));
        }
    }
    out
}

/// Inverse of a series with nonzero constant term, to `n` terms.
pub fn inv_trunc(field: &FieldSpec, a: &[FieldElement], n: usize) -> Option<Vec<FieldElement>> {
    let c0 = field.inv(*a.first()?)?;
    let mut out = vec![FieldElement::ZERO; n];
    if n == 0 {
        return Some(out);
    }
    out[0] = c0;
    for k in 1..n {
        let mut acc = FieldElement::ZERO;
        for i in 1..=k.min(a.len() - 1) {
            acc = field.add(acc, field.mul(a[i], out[k - i]));
        }
        out[k] = field.neg(field.mul(acc, c0));
    }
    Some(out)
}

pub fn add_series(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            field.add(x, y)
        })
        .collect()
}

/// `s(t)^q = sum a_i^q t^(iq)` in characteristic `p`, truncated to `n` terms.
pub fn frobenius_dilate(field: &FieldSpec, s: &[FieldElement], q: u64, n: usize) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; n];
    for (i, &a) in s.iter().enumerate() {
        let j = i as u64 * q;
        if j >= n as u64 {
            break;
        }
        out[j as usize] = field.pow(a, q);
    }
    out
}

/// A bivariate polynomial grouped as `sum_j c_j(x) y^j` for series evaluation.
pub struct BivariateEvaluator {
    field: Arc<FieldSpec>,
    /// `by_y[j]` holds `c_j(x)` as dense coefficients in `x`.
    by_y: Vec<Vec<FieldElement>>,
}

impl BivariateEvaluator {
    pub fn new(f: &MultiPoly) -> Self {
        assert_eq!(f.nvars(), 2, "bivariate polynomial expected");
        let dy = f.degree_in(1) as usize;
        let dx = f.degree_in(0) as usize;
        let mut by_y = vec![vec![FieldElement::ZERO; dx + 1]; dy + 1];
        for (m, c) in f.terms() {
            let e = m.exponents();
            by_y[e[1] as usize][e[0] as usize] = c;
        }
        BivariateEvaluator { field: f.field().clone(), by_y }
    }

    /// `f(x0 + t, y(t)) mod t^n`.
    pub fn eval(&self, x0: FieldElement, y: &[FieldElement], n: usize) -> Vec<FieldElement> {
        let f = &*self.field;
        let shift = [x0, FieldElement::ONE];
        let mut acc = vec![FieldElement::ZERO; n];
        for coeffs in self.by_y.iter().rev() {
            acc = mul_trunc(f, &acc, y, n);
            // c_j(x0 + t) by Horner in x.
            let mut cj = vec![FieldElement::ZERO; n];
            for &b in coeffs.iter().rev() {
                cj = mul_trunc(f, &cj, &shift, n);
                if n > 0 {
                    cj[0] = f.add(cj[0], b);
                }
            }
            acc = add_series(f, &acc, &cj);
        }
        acc.truncate(n);
        acc
    }
}

/// The branch `y(t)` with `y(0) = y0` and `f(x0 + t, y(t)) = 0 mod t^n`, by
/// Newton iteration with precision doubling.
pub fn hensel_lift(f: &MultiPoly, x0: FieldElement, y0: FieldElement, n: usize) -> Result<Vec<FieldElement>> {
    let field = f.field().clone();
    let ev = BivariateEvaluator::new(f);
    let evy = BivariateEvaluator::new(&f.partial_derivative(1));
    if !ev.eval(x0, &[y0], 1)[0].is_zero() {
        return Err(Error::Precondition("center does not lie on the curve".into()));
    }
    if evy.eval(x0, &[y0], 1)[0].is_zero() {
        return Err(Error::Precondition("f_y vanishes at the center".into()));
    }
    let mut y = vec![y0];
    let mut prec = 1;
    while prec < n {
        let next = (2 * prec).min(n);
        y.resize(next, FieldElement::ZERO);
        let r = ev.eval(x0, &y, next);
        let d = evy.eval(x0, &y, next);
        let dinv = inv_trunc(&field, &d, next).expect("f_y is a unit at the center");
        let step = mul_trunc(&field, &r, &dinv, next);
        for (yi, si) in y.iter_mut().zip(step) {
            *yi = field.sub(*yi, si);
        }
        prec = next;
    }
    y.truncate(n);
    Ok(y)
}

/// Exponent standing for "known exactly".
pub const EXACT: i64 = i64::MAX / 4;

/// A Laurent series known modulo `t^prec`. Stored coefficients start at a
/// nonzero term; indices between the stored tail and `prec` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LSeries {
    start: i64,
    coeffs: Vec<FieldElement>,
    prec: i64,
}

fn cap(e: i64) -> i64 {
    e.min(EXACT)
}

impl LSeries {
    pub fn exact_zero() -> Self {
        LSeries { start: 0, coeffs: Vec::new(), prec: EXACT }
    }

    pub fn exact_constant(c: FieldElement) -> Self {
        LSeries::from_coeffs(0, vec![c], EXACT)
    }

    /// `sum coeffs[i] t^(start + i) + O(t^prec)`.
    pub fn from_coeffs(start: i64, coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let mut s = LSeries { start, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.start).clamp(0, self.coeffs.len() as i64) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Whether no nonzero coefficient is known.
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// The first nonzero coefficient, if one is known.
    pub fn leading(&self) -> Option<(i64, FieldElement)> {
        self.coeffs.first().map(|&c| (self.start, c))
    }

    /// Lower bound on the valuation.
    fn lower(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn coefficient(&self, i: i64) -> FieldElement {
        if i < self.start {
            return FieldElement::ZERO;
        }
        self.coeffs.get((i - self.start) as usize).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &LSeries, field: &FieldSpec) -> LSeries {
        self.combine(other, field, false)
    }

    pub fn sub(&self, other: &LSeries, field: &FieldSpec) -> LSeries {
        self.combine(other, field, true)
    }

    fn combine(&self, other: &LSeries, field: &FieldSpec, negate: bool) -> LSeries {
        let prec = self.prec.min(other.prec);
        let lo = self.start.min(other.start);
        let hi = (self.start + self.coeffs.len() as i64)
            .max(other.start + other.coeffs.len() as i64)
            .min(prec);
        let coeffs = (lo..hi.max(lo))
            .map(|i| {
                let b = other.coefficient(i);
                let b = if negate { field.neg(b) } else { b };
                field.add(self.coefficient(i), b)
            })
            .collect();
        LSeries::from_coeffs(lo, coeffs, prec)
    }

    pub fn mul(&self, other: &LSeries, field: &FieldSpec) -> LSeries {
        let prec = cap(
            self.prec
                .saturating_add(other.lower())
                .min(other.prec.saturating_add(self.lower())),
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LSeries { start: 0, coeffs: Vec::new(), prec };
        }
        let start = self.start + other.start;
        let len = ((prec - start).max(0) as usize).min(self.coeffs.len() + other.coeffs.len() - 1);
        let coeffs = mul_trunc(field, &self.coeffs, &other.coeffs, len);
        LSeries::from_coeffs(start, coeffs, prec)
    }

    pub fn scale(&self, c: FieldElement, field: &FieldSpec) -> LSeries {
        if c.is_zero() {
            return LSeries::exact_zero();
        }
        LSeries::from_coeffs(self.start, self.coeffs.iter().map(|&a| field.mul(a, c)).collect(), self.prec)
    }

    /// Inverse, defined when a nonzero term is known. An exact series with
    /// more than one term is inverted to relative precision `rel_cap`.
    pub fn inv(&self, field: &FieldSpec, rel_cap: i64) -> Option<LSeries> {
        let v = self.valuation()?;
        let rel = if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Some(LSeries::from_coeffs(-v, vec![field.inv(self.coeffs[0])?], EXACT));
            }
            rel_cap
        } else {
            (self.prec - v).min(rel_cap)
        };
        let u = inv_trunc(field, &self.coeffs, rel as usize)?;
        Some(LSeries::from_coeffs(-v, u, -v + rel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::mpoly::parse_poly;

    #[test]
    fn lucas_binomials() {
        assert_eq!(binomial_mod_p(5, 2, 5), 0);
        assert_eq!(binomial_mod_p(5, 5, 5), 1);
        assert_eq!(binomial_mod_p(6, 1, 5), 1);
        assert_eq!(binomial_mod_p(7, 3, 2), 1);
        assert_eq!(binomial_mod_p(3, 5, 7), 0);
        for n in 0..30u64 {
            for k in 0..=n {
                let exact = (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
                assert_eq!(binomial_mod_p(n, k, 7) as u128, exact % 7, "C({n},{k})");
            }
        }
    }

    #[test]
    fn hasse_examples() {
        let f = make_field(5, 1, None).unwrap();
        let t5: Vec<_> = (0..8).map(|i| if i == 5 { f.one() } else { f.zero() }).collect();
        assert!(hasse_shift(&f, &t5, 2).iter().all(|c| c.is_zero()));
        assert_eq!(hasse_shift(&f, &t5, 5)[0], f.one());
        let t2 = vec![f.zero(), f.zero(), f.one()];
        assert_eq!(hasse_shift(&f, &t2, 1), vec![f.zero(), f.from_int(2)]);
    }

    #[test]
    fn square_root_branch() {
        let f5 = make_field(5, 1, None).unwrap();
        let f = parse_poly("y^2 - x - 1", 2, &f5).unwrap();
        let y = hensel_lift(&f, f5.zero(), f5.one(), 4).unwrap();
        let want: Vec<_> = [1, 3, 3, 1].iter().map(|&c| f5.from_int(c)).collect();
        assert_eq!(y, want);
        let sq = mul_trunc(&f5, &y, &y, 4);
        assert_eq!(sq, vec![f5.one(), f5.one(), f5.zero(), f5.zero()]);
        assert!(hensel_lift(&f, f5.zero(), f5.zero(), 4).is_err());
    }

    #[test]
    fn laurent_precision_tracking() {
        let f = make_field(5, 1, None).unwrap();
        // a = t + 2t^2 + O(t^5)
        let a = LSeries::from_coeffs(0, vec![f.zero(), f.one(), f.from_int(2), f.zero(), f.zero()], 5);
        assert_eq!(a.valuation(), Some(1));
        let inv = a.inv(&f, 100).unwrap();
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(inv.precision(), 3);
        let one = a.mul(&inv, &f);
        assert_eq!(one.leading(), Some((0, f.one())));
        assert_eq!(one.precision(), 4);
        let z = LSeries::from_coeffs(0, vec![f.zero(); 3], 3);
        assert!(z.is_zero_to_precision());
        assert_eq!(z.mul(&a, &f).precision(), 4);
        assert!(LSeries::exact_zero().mul(&a, &f).is_exact());
        let d = a.sub(&a, &f);
        assert!(d.is_zero_to_precision() && d.precision() == 5);
    }

    #[test]
    fn frobenius_dilation_is_qth_power() {
        let f9 = make_field(3, 2, None).unwrap();
        let s: Vec<_> = (0..6).map(|i| f9.element(i as u64 + 2).unwrap()).collect();
        let n = 20;
        let mut pw = vec![f9.one()];
        for _ in 0..9 {
            pw = mul_trunc(&f9, &pw, &s, n);
        }
        // s only has 6 terms, so its 9th power is s(t)^9 up to t^20 exactly.
        assert_eq!(frobenius_dilate(&f9, &s, 9, n), pw);
    }
}
