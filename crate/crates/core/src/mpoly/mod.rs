//! Sparse multivariate polynomials over a [`FieldSpec`].
//!
//! Terms are kept in a `BTreeMap` ordered by graded reverse lexicographic
//! order, so the leading term is the last entry. Zero coefficients are never
//! stored.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldElement, FieldSpec};

pub use parse::{parse_poly, parse_rational};

/// Exponent vector with one 16-bit entry per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize, e: u16) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(&a, &b)| a - b).collect())
    }

    fn scale(&self, k: u64) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&e| u16::try_from(e as u64 * k).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables `X0, X1, ...` over a finite field.
#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<FieldSpec>,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms && *self.field == *other.field
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.field, self)
    }
}

impl MultiPoly {
    pub fn zero(field: Arc<FieldSpec>, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Arc<FieldSpec>, nvars: usize, c: FieldElement) -> Self {
        let mut p = MultiPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: Arc<FieldSpec>, nvars: usize) -> Self {
        MultiPoly::constant(field, nvars, FieldElement::ONE)
    }

    /// The variable `X_i`.
    pub fn var(field: Arc<FieldSpec>, nvars: usize, i: usize) -> Self {
        MultiPoly::monomial(field, nvars, FieldElement::ONE, Monomial::var(nvars, i, 1))
    }

    pub fn monomial(field: Arc<FieldSpec>, nvars: usize, c: FieldElement, m: Monomial) -> Self {
        assert_eq!(m.0.len(), nvars, "monomial arity");
        let mut p = MultiPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        field: Arc<FieldSpec>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = MultiPoly::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, FieldElement)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, FieldElement)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Common degree of all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = self.field.clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars || *self.field != *other.field {
            return Err(Error::IncompatibleOperands);
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &MultiPoly) {
        assert!(
            self.nvars == other.nvars && *self.field == *other.field,
            "operands over different rings"
        );
    }

    pub fn scale(&self, c: FieldElement) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.field.clone(), self.nvars);
        }
        let f = &self.field;
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, c: FieldElement, m: &Monomial) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.field.clone(), self.nvars);
        }
        let f = &self.field;
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, &a)| (t.mul(m), f.mul(a, c))).collect(),
        }
    }

    /// Makes the leading coefficient one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Raises every coefficient to the `p^k`-th power and multiplies every
    /// exponent by `p^k`; this is `self^(p^k)` in characteristic `p`.
    pub fn frobenius(&self, k: u32) -> MultiPoly {
        let f = &self.field;
        let pk = f.characteristic().pow(k);
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.scale(pk), f.frobenius_power(c, k as u64)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> MultiPoly {
        let p = self.field.characteristic();
        let mut acc = MultiPoly::one(self.field.clone(), self.nvars);
        let mut rest = e;
        let mut k = 0u32;
        // Base-p digits: self^e = prod_k (self^(p^k))^(digit_k).
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let base = self.frobenius(k);
                acc = &acc * &base.pow_small(digit);
            }
            rest /= p;
            k += 1;
        }
        acc
    }

    fn pow_small(&self, mut e: u64) -> MultiPoly {
        let mut acc = MultiPoly::one(self.field.clone(), self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `X_i`.
    pub fn partial_derivative(&self, i: usize) -> MultiPoly {
        assert!(i < self.nvars, "variable index out of range");
        let f = &self.field;
        let mut out = MultiPoly::zero(self.field.clone(), self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let coeff = f.mul(c, f.from_int(e as i64));
            if coeff.is_zero() {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] -= 1;
            out.terms.insert(nm, coeff);
        }
        out
    }

    /// `(F_0, ..., F_{n})`.
    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.partial_derivative(i)).collect()
    }

    /// Division by the single divisor `divisor` under grevlex: returns
    /// `(quotient, remainder)` with `self = quotient * divisor + remainder`
    /// and no remainder term divisible by the leading monomial of `divisor`.
    pub fn divide(&self, divisor: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.check_compatible(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lm = lm.clone();
        let f = self.field.clone();
        let lc_inv = f.inv(lc).expect("nonzero leading coefficient");
        let mut work = self.terms.clone();
        let mut quotient = MultiPoly::zero(f.clone(), self.nvars);
        let mut remainder = MultiPoly::zero(f.clone(), self.nvars);
        while let Some((m, c)) = work.pop_last() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = f.mul(c, lc_inv);
                for (dm, &dc) in divisor.terms.iter().rev().skip(1) {
                    let tm = dm.mul(&qm);
                    let sub = f.neg(f.mul(dc, qc));
                    let entry = work.entry(tm).or_insert(FieldElement::ZERO);
                    *entry = f.add(*entry, sub);
                    if entry.is_zero() {
                        let key = dm.mul(&qm);
                        work.remove(&key);
                    }
                }
                quotient.terms.insert(qm, qc);
            } else {
                remainder.terms.insert(m, c);
            }
        }
        Ok((quotient, remainder))
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &MultiPoly) -> Result<bool> {
        let (_, r) = other.divide(self)?;
        Ok(r.is_zero())
    }

    /// The `p^r`-th root when every exponent is
    /// divisible by `p^r`, otherwise `None`.
    pub fn p_power_root(&self, r: u32) -> Option<MultiPoly> {
        let f = &self.field;
        let pr = f.characteristic().checked_pow(r)?;
        let mut out = MultiPoly::zero(self.field.clone(), self.nvars);
        for (m, &c) in &self.terms {
            if m.0.iter().any(|&e| e as u64 % pr != 0) {
                return None;
            }
            let nm = Monomial(m.0.iter().map(|&e| (e as u64 / pr) as u16).collect());
            out.terms.insert(nm, f.p_power_root(c, r as u64));
        }
        Some(out)
    }

    /// Largest `r` such that `self` is a `p^r`-th power, with the root.
    /// Constants and zero report `r = 0`.
    pub fn max_p_power_root(&self) -> (u32, MultiPoly) {
        let p = self.field.characteristic();
        let g = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().copied())
            .fold(0u64, |g, e| gcd(g, e as u64));
        if g == 0 {
            return (0, self.clone());
        }
        let mut r = 0;
        let mut rest = g;
        while rest % p == 0 {
            rest /= p;
            r += 1;
        }
        let root = self.p_power_root(r).expect("exponents divisible by p^r");
        (r, root)
    }

    /// Replaces `X_i` by `images[i]`.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (field, nv) = (first.field.clone(), first.nvars);
        if images.iter().any(|g| g.nvars != nv || *g.field != *field) || *field != *self.field {
            return Err(Error::IncompatibleOperands);
        }
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|g| vec![MultiPoly::one(field.clone(), nv), g.clone()])
            .collect();
        let mut out = MultiPoly::zero(field.clone(), nv);
        for (m, &c) in &self.terms {
            let mut term = MultiPoly::constant(field.clone(), nv, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &images[i];
                    powers.push(next);
                }
                term = &term * &powers[e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = f.mul(t, f.pow(x, e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Maps every coefficient through a field embedding.
    pub fn embed(&self, emb: &Embedding) -> MultiPoly {
        assert_eq!(**emb.source(), *self.field, "embedding source field");
        MultiPoly {
            field: emb.target().clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), emb.map(c))).collect(),
        }
    }

    /// Whether every coefficient satisfies `c^(p^k) = c`.
    pub fn coefficients_fixed_by(&self, k: u64) -> bool {
        self.terms.values().all(|&c| self.field.fixed_by_frobenius(c, k))
    }

    /// Sets `X_i = 1`, keeping the variable count.
    pub fn dehomogenize(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.field.clone(), self.nvars);
        for (m, &c) in &self.terms {
            let mut nm = m.clone();
            nm.0[i] = 0;
            out.add_term(nm, c);
        }
        out
    }

    /// Moves the polynomial into `nvars` variables via `map[i]` = new index of `X_i`.
    pub fn remap_variables(&self, nvars: usize, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MultiPoly::zero(self.field.clone(), nvars);
        for (m, &c) in &self.terms {
            let mut nm = Monomial::one(nvars);
            for (i, &e) in m.0.iter().enumerate() {
                nm.0[map[i]] += e;
            }
            out.add_term(nm, c);
        }
        out
    }

    /// Sum of the terms whose monomials satisfy `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Flat copy suited to repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        let degs: Vec<u16> = (0..self.nvars).map(|i| self.degree_in(i)).collect();
        CompiledPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, &c)| (c, m.0.to_vec())).collect(),
            degs,
        }
    }
}

/// A polynomial flattened for fast repeated evaluation.
pub struct CompiledPoly {
    field: Arc<FieldSpec>,
    terms: Vec<(FieldElement, Vec<u16>)>,
    degs: Vec<u16>,
}

impl CompiledPoly {
    /// Evaluates at `point`, using `scratch` for the power tables.
    pub fn eval(&self, point: &[FieldElement], scratch: &mut Vec<Vec<FieldElement>>) -> FieldElement {
        let f = &self.field;
        scratch.resize(self.degs.len(), Vec::new());
        for (i, &d) in self.degs.iter().enumerate() {
            let row = &mut scratch[i];
            row.clear();
            let mut cur = FieldElement::ONE;
            row.push(cur);
            for _ in 0..d {
                cur = f.mul(cur, point[i]);
                row.push(cur);
            }
        }
        let mut acc = FieldElement::ZERO;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t = f.mul(t, scratch[i][e as usize]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        let f = self.field.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), f.neg(c));
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(self.field.neg(FieldElement::ONE))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let f = &self.field;
        let mut acc: std::collections::HashMap<Monomial, FieldElement> =
            std::collections::HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(FieldElement::ZERO);
                *e = f.add(*e, f.mul(ca, cb));
            }
        }
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for MultiPoly {
    /// Canonical form: grevlex-descending terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("X{i}") } else { format!("X{i}^{e}") })
                .collect();
            let coeff = self.field.format_coefficient(c);
            if vars.is_empty() {
                f.write_str(&coeff)?;
            } else if c == FieldElement::ONE {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn f5() -> Arc<FieldSpec> {
        make_field(5, 1, None).unwrap()
    }

    fn p(s: &str, n: usize, f: &Arc<FieldSpec>) -> MultiPoly {
        parse_poly(s, n, f).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let a = Monomial::from_exponents(&[1, 0, 1]);
        let b = Monomial::from_exponents(&[0, 2, 0]);
        // Same degree: X1^2 > X0*X2 because X0*X2 has the larger last exponent.
        assert!(b > a);
        assert!(Monomial::from_exponents(&[0, 0, 3]) > b);
        assert!(Monomial::from_exponents(&[2, 0, 0]) > Monomial::from_exponents(&[1, 1, 0]));
    }

    #[test]
    fn derivative_examples() {
        let f = f5();
        assert_eq!(p("X0^6", 1, &f).partial_derivative(0), p("X0^5", 1, &f));
        assert!(p("X0^5", 1, &f).partial_derivative(0).is_zero());
        let s = p("X0*X1^5 + X1*X2^5 + X0^5*X2 + X3^6", 4, &f);
        assert_eq!(s.partial_derivative(1), p("X2^5", 4, &f));
    }

    #[test]
    fn division_examples() {
        let f = f5();
        let (q, r) = p("X0^2 - X1^2", 2, &f).divide(&p("X0 - X1", 2, &f)).unwrap();
        assert_eq!(q, p("X0 + X1", 2, &f));
        assert!(r.is_zero());
        // One step by hand: X0^2 + X1 = (X0 + X1)(X0 - X1) + X1^2 + X1.
        let (q, r) = p("X0^2 + X1", 2, &f).divide(&p("X0 - X1", 2, &f)).unwrap();
        assert_eq!(q, p("X0 + X1", 2, &f));
        assert_eq!(r, p("X1^2 + X1", 2, &f));
        let g = p("X0^3 + 2*X0*X1 + 1", 2, &f);
        let (q, r) = g.divide(&g).unwrap();
        assert_eq!(q, MultiPoly::one(f.clone(), 2));
        assert!(r.is_zero());
        assert_eq!(g.divide(&MultiPoly::zero(f.clone(), 2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn divisibility_examples() {
        let f = f5();
        assert!(p("X0-X1", 2, &f).divides(&p("X0^2-X1^2", 2, &f)).unwrap());
        let s = p("X0*X1^5 + X1*X2^5 + X0^5*X2 + X3^6", 4, &f);
        let w = p("X0*X1+X1*X2+X0*X2+X3^2", 4, &f).pow(5);
        assert!(!s.divides(&w).unwrap());
        assert!(s.divides(&MultiPoly::zero(f.clone(), 4)).unwrap());
    }

    #[test]
    fn p_power_roots() {
        let f = f5();
        let g = p("X0^5*X1^10 + 2*X0^5", 2, &f);
        assert_eq!(g.p_power_root(1), Some(p("X0*X1^2 + 2*X0", 2, &f)));
        assert_eq!(p("X0^5 + X1", 2, &f).p_power_root(1), None);
        let s = p("X0*X1^5 + X1*X2^5 + X0^5*X2 + X3^6", 4, &f);
        let w = s
            .gradient()
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(f.clone(), 4), |acc, (i, fi)| {
                &acc + &(fi * &MultiPoly::var(f.clone(), 4, i).pow(5))
            });
        assert_eq!(w.p_power_root(1), Some(p("X0*X1+X1*X2+X0*X2+X3^2", 4, &f)));
    }

    #[test]
    fn substitution_examples() {
        let f = f5();
        let quad = p("X0*X3 - X1*X2", 4, &f);
        let images: Vec<_> = ["X2^2", "X0*X2", "X1*X2", "X0*X1"].iter().map(|s| p(s, 3, &f)).collect();
        assert!(quad.substitute(&images).unwrap().is_zero());
        let sq = p("X0^2", 1, &f).substitute(&[p("X0+X1", 2, &f)]).unwrap();
        assert_eq!(sq, p("X0^2 + 2*X0*X1 + X1^2", 2, &f));
        let f3 = make_field(3, 1, None).unwrap();
        let fermat = p("X0^4+X1^4+X2^4+X3^4", 4, &f3);
        let cubes: Vec<_> = (0..4).map(|i| MultiPoly::var(f3.clone(), 4, i).pow(3)).collect();
        assert_eq!(fermat.substitute(&cubes).unwrap(), fermat.pow(3));
        assert!(quad.substitute(&images[..2]).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f = f5();
        let g = p("X0^2+X1", 2, &f);
        assert_eq!(g.evaluate(&[f.from_int(2), f.one()]).unwrap(), f.zero());
        let h = p("X0^3 + 3", 2, &f);
        assert_eq!(h.evaluate(&[f.zero(), f.zero()]).unwrap(), f.from_int(3));
        let s = p("X0*X1^5 + X1*X2^5 + X0^5*X2 + X3^6", 4, &f);
        assert_eq!(s.evaluate(&[f.one(); 4]).unwrap(), f.from_int(4));
        assert!(g.evaluate(&[f.one()]).is_err());
    }

    #[test]
    fn frobenius_matches_pow() {
        let f = make_field(3, 2, None).unwrap();
        let g = parse_poly("(u+1)*X0 + X1^2 + u", 2, &f).unwrap();
        assert_eq!(g.frobenius(1), g.pow(3));
        assert_eq!(g.pow(7), &(&g.pow(4) * &g.pow(2)) * &g);
    }
}
