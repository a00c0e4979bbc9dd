//! Exhaustive point counts and closed-form counts and bounds for curves with many points.

use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gf::{is_prime, make_field, prime_power, FieldElement, FieldSpec};
use crate::mpoly::MultiPoly;
use crate::projective::{affine_count, projective_count, with_threads, ProjectiveSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Projective,
    Affine,
}

impl CountMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMode::Projective => "projective",
            CountMode::Affine => "affine",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CountReport {
    pub field_order: u64,
    pub mode: CountMode,
    pub count: u128,
    /// Counted points at which every partial derivative also vanishes.
    pub singular: u128,
    pub candidates: u128,
    pub guard: u128,
    pub elapsed: Duration,
}

impl CountReport {
    /// The count is of the given equation, which is singular somewhere on the counted set.
    pub fn model_caveat(&self) -> bool {
        self.singular > 0
    }
}

fn zero_with_gradient(f: &MultiPoly) -> impl Fn(&[FieldElement]) -> (bool, bool) + Sync {
    let fc = f.compile();
    let grad: Vec<_> = f.gradient().iter().map(MultiPoly::compile).collect();
    move |pt| {
        let mut scratch = Vec::new();
        if !fc.eval(pt, &mut scratch).is_zero() {
            return (false, false);
        }
        (true, grad.iter().all(|g| g.eval(pt, &mut scratch).is_zero()))
    }
}

/// Points of `P^n(F_q)` on the homogeneous `f`, where `n + 1` is the number of variables.
pub fn count_projective(f: &MultiPoly, guard: u128, threads: usize) -> Result<CountReport> {
    if f.homogeneous_degree().is_none() {
        return Err(Error::NotAHypersurface("polynomial is zero or not homogeneous".into()));
    }
    if f.nvars() == 0 {
        return Err(Error::NotAHypersurface("no variables".into()));
    }
    let start = Instant::now();
    let space = ProjectiveSpace::new(f.field().clone(), f.nvars() - 1);
    let test = zero_with_gradient(f);
    let (count, singular) = with_threads(threads, || -> Result<(u128, u128)> {
        Ok((
            projective_count(&space, guard, |pt| test(pt).0)?,
            projective_count(&space, guard, |pt| test(pt).1)?,
        ))
    })?;
    Ok(CountReport {
        field_order: f.field().order(),
        mode: CountMode::Projective,
        count,
        singular,
        candidates: space.len(),
        guard,
        elapsed: start.elapsed(),
    })
}

/// Solutions of `f = 0` in `F_q^k`, where `k` is the number of variables.
pub fn count_affine(f: &MultiPoly, guard: u128, threads: usize) -> Result<CountReport> {
    let start = Instant::now();
    let field = f.field();
    let k = f.nvars();
    let test = zero_with_gradient(f);
    let (count, singular) = with_threads(threads, || -> Result<(u128, u128)> {
        Ok((
            affine_count(field, k, guard, |pt| test(pt).0)?,
            affine_count(field, k, guard, |pt| test(pt).1)?,
        ))
    })?;
    Ok(CountReport {
        field_order: field.order(),
        mode: CountMode::Affine,
        count,
        singular,
        candidates: (field.order() as u128).saturating_pow(k as u32),
        guard,
        elapsed: start.elapsed(),
    })
}

/// `q + 1 + g * floor(2 sqrt(q))`.
pub fn hws_bound(q: u64, g: u64) -> u128 {
    let s = (4 * q as u128).isqrt();
    q as u128 + 1 + g as u128 * s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvFermatBound {
    pub n: u64,
    pub q: u64,
    /// Roots of `T^n - 1` in `F_q`.
    pub r: u64,
    /// Roots of `T^n + 1` in `F_q`.
    pub s: u64,
    pub value: Ratio<i128>,
    pub floor: i128,
    /// `r == gcd(n, q - 1)`.
    pub gcd_agrees: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn count_roots(field: &FieldSpec, n: u64, target: FieldElement) -> u64 {
    field.elements().filter(|&t| field.pow(t, n) == target).count() as u64
}

/// `2(n^2 - 2n) + 2n(q + 3)/3 - 2(n - 2)(2n + r + s)/3`, the bound for Frobenius classical
/// curves of the form `x^n y^n - x^n - y^n = 1`.
pub fn sv_fermat_bound(n: u64, q: u64) -> Result<SvFermatBound> {
    let (p, h) = prime_power(q).ok_or(Error::InvalidField(format!("{q} is not a prime power")))?;
    if n == 0 || n % p == 0 {
        return Err(Error::Precondition(format!("n = {n} must be positive and prime to p = {p}")));
    }
    if q > 1_000_000 {
        return Err(Error::Precondition("root enumeration is limited to q <= 10^6".into()));
    }
    let field = make_field(p, h, None)?;
    let r = count_roots(&field, n, field.one());
    let s = count_roots(&field, n, field.neg(field.one()));
    let (ni, qi, ri, si) = (n as i128, q as i128, r as i128, s as i128);
    let value = Ratio::from_integer(2 * (ni * ni - 2 * ni)) + Ratio::new(2 * ni * (qi + 3), 3)
        - Ratio::new(2 * (ni - 2) * (2 * ni + ri + si), 3);
    Ok(SvFermatBound { n, q, r, s, floor: value.floor().to_integer(), value, gcd_agrees: r == gcd(n, q - 1) })
}

/// `q^2 (q - 1) + 2q`.
pub fn artin_mumford_count(q: u64) -> Result<u128> {
    prime_power(q).ok_or(Error::InvalidField(format!("{q} is not a prime power")))?;
    let q = q as u128;
    Ok(q * q * (q - 1) + 2 * q)
}

/// `n^2 (p^r - 3) + 4n`, valid when `n = (q - 1)/(p^r - 1)` and `r` divides `h` for `q = p^h`.
pub fn fermat_xy_count(n: u64, p: u64, r: u32, q: u64) -> Result<i128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (qp, h) = prime_power(q).ok_or(Error::InvalidField(format!("{q} is not a prime power")))?;
    if qp != p {
        return Err(Error::NotAPowerOfP(q, p));
    }
    if r == 0 || h % r != 0 {
        return Err(Error::Precondition(format!("r = {r} must divide h = {h}")));
    }
    let pr = p.pow(r);
    if (q - 1) / (pr - 1) != n {
        return Err(Error::Precondition(format!("n = {n} differs from (q - 1)/(p^r - 1) = {}", (q - 1) / (pr - 1))));
    }
    let (n, pr) = (n as i128, pr as i128);
    Ok(n * n * (pr - 3) + 4 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;
    use crate::projective::DEFAULT_GUARD;

    #[test]
    fn projective_counts() {
        let f9 = make_field(3, 2, None).unwrap();
        let herm = parse_poly("X0^4 + X1^4 + X2^4", 3, &f9).unwrap();
        let rep = count_projective(&herm, DEFAULT_GUARD, 0).unwrap();
        assert_eq!(rep.count, 28);
        assert!(!rep.model_caveat());
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(count_projective(&parse_poly("X0", 2, &f5).unwrap(), DEFAULT_GUARD, 1).unwrap().count, 1);
        let plane = parse_poly("X0 + X1 + 2*X2 + X3", 4, &f5).unwrap();
        assert_eq!(count_projective(&plane, DEFAULT_GUARD, 2).unwrap().count, 31);
    }

    #[test]
    fn affine_counts() {
        let f4 = make_field(2, 2, None).unwrap();
        let am = parse_poly("(x^2+x)*(y^2+y) + 1", 2, &f4).unwrap();
        assert_eq!(count_affine(&am, DEFAULT_GUARD, 0).unwrap().count, 4);
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(count_affine(&parse_poly("X0", 1, &f7).unwrap(), DEFAULT_GUARD, 0).unwrap().count, 1);
        let cusp = parse_poly("y^2 - x^3", 2, &f7).unwrap();
        let rep = count_affine(&cusp, DEFAULT_GUARD, 0).unwrap();
        assert_eq!(rep.count, 7);
        assert!(rep.model_caveat());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(hws_bound(49, 0), 50);
        assert_eq!(hws_bound(49, 3), 92);
        assert_eq!(hws_bound(2, 1), 5);
        let sv = sv_fermat_bound(8, 49).unwrap();
        assert_eq!((sv.r, sv.s), (8, 8));
        assert_eq!(sv.value, Ratio::new(736, 3));
        assert_eq!(sv.floor, 245);
        assert!(sv.gcd_agrees);
        let one = sv_fermat_bound(1, 7).unwrap();
        assert_eq!((one.r, one.s), (1, 1));
        assert_eq!(one.value, Ratio::new(22, 3));
        assert_eq!(artin_mumford_count(2).unwrap(), 8);
        assert_eq!(artin_mumford_count(3).unwrap(), 24);
        assert_eq!(artin_mumford_count(5).unwrap(), 110);
        assert_eq!(fermat_xy_count(8, 7, 1, 49).unwrap(), 288);
        assert!(fermat_xy_count(3, 2, 2, 16).is_err());
        assert_eq!(fermat_xy_count(1, 5, 2, 25).unwrap(), 26);
    }
}
