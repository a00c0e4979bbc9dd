//! Hypersurfaces `F = 0` in `P^n`: Gauss map, the divisibility test for
//! Frobenius nonclassicality, the nonclassical locus, p-power detection and
//! small-field point enumeration.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{make_field, prime_power, Embedding, FieldElement, FieldSpec};
use crate::mpoly::MultiPoly;
use crate::projective::{projective_filter, ProjectiveSpace, DEFAULT_GUARD};

/// A hypersurface given by a nonzero homogeneous polynomial of positive degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    f: MultiPoly,
    d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FncStatus {
    FrobeniusNonclassical,
    FrobeniusClassical,
    /// `p` divides the degree.
    DegenerateCaseI,
    /// `sum F_i X_i^q` vanishes identically.
    DegenerateCaseII,
}

#[derive(Clone, Debug)]
pub struct FncVerdict {
    pub status: FncStatus,
    pub q: u64,
    /// `W = sum F_i X_i^q`.
    pub w: MultiPoly,
    /// `W mod F`.
    pub remainder: MultiPoly,
    pub quotient: MultiPoly,
}

/// `W` together with its maximal p-power root: `w = reduced^(p^r)`.
#[derive(Clone, Debug)]
pub struct LocusPoly {
    pub w: MultiPoly,
    pub reduced: MultiPoly,
    pub r: u32,
}

#[derive(Clone, Debug)]
pub struct GaussPower {
    pub r: u32,
    /// `U_i` with `F_i = U_i^(p^r)`, present when `r >= 1`.
    pub base: Option<Vec<MultiPoly>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsepReport {
    pub p: u64,
    pub r: u32,
    pub n: usize,
    pub q: u64,
    /// `p^(r(n-1))`, saturating.
    pub deg_i: u128,
    /// `q^(n-1)`, saturating.
    pub upper: u128,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl InsepReport {
    pub fn violated(&self) -> bool {
        !(self.lower_ok && self.upper_ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub missing_variable: Vec<usize>,
    pub vanishing_partial: Vec<usize>,
    pub poly_is_p_power: bool,
}

impl StructuralFlags {
    pub fn is_cone(&self) -> bool {
        !self.missing_variable.is_empty()
    }

    pub fn any(&self) -> bool {
        self.is_cone() || !self.vanishing_partial.is_empty() || self.poly_is_p_power
    }
}

/// Points of `P^n` over some finite field, in canonical order.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub field: Arc<FieldSpec>,
    pub points: Vec<Vec<FieldElement>>,
}

impl Hypersurface {
    pub fn new(f: MultiPoly) -> Result<Self> {
        if f.nvars() < 2 {
            return Err(Error::NotAHypersurface("need at least two variables".into()));
        }
        let d = f
            .homogeneous_degree()
            .ok_or_else(|| Error::NotAHypersurface("polynomial is zero or not homogeneous".into()))?;
        if d == 0 {
            return Err(Error::NotAHypersurface("polynomial is constant".into()));
        }
        Ok(Hypersurface { f, d })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.f
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.f.field()
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.f.nvars() - 1
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        self.f.gradient()
    }

    /// The exponent `k` with `q = p^k`, after checking the coefficients lie in `F_q`.
    fn target_exponent(&self, q: u64) -> Result<u32> {
        let p = self.field().characteristic();
        let k = match prime_power(q) {
            Some((base, k)) if base == p => k,
            _ => return Err(Error::NotAPowerOfP(q, p)),
        };
        if !self.f.coefficients_fixed_by(k as u64) {
            return Err(Error::CoefficientsOutsideFq(q));
        }
        if self.d as u64 - 1 + q > u16::MAX as u64 {
            return Err(Error::Precondition(format!("degree {} + q - 1 exceeds the exponent range", self.d)));
        }
        Ok(k)
    }

    /// `sum_i F_i X_i^q`.
    pub fn w_poly(&self, q: u64) -> Result<MultiPoly> {
        self.target_exponent(q)?;
        Ok(self.w_unchecked(q))
    }

    fn w_unchecked(&self, q: u64) -> MultiPoly {
        let field = self.field().clone();
        let nv = self.f.nvars();
        self.gradient()
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(field.clone(), nv), |acc, (i, fi)| {
                let xq = crate::mpoly::Monomial::var(nv, i, q as u16);
                &acc + &fi.mul_term(FieldElement::ONE, &xq)
            })
    }

    pub fn fnc_test(&self, q: u64) -> Result<FncVerdict> {
        self.target_exponent(q)?;
        let w = self.w_unchecked(q);
        let (quotient, remainder) = w.divide(&self.f)?;
        let p = self.field().characteristic();
        let status = if self.d as u64 % p == 0 {
            FncStatus::DegenerateCaseI
        } else if w.is_zero() {
            FncStatus::DegenerateCaseII
        } else if remainder.is_zero() {
            FncStatus::FrobeniusNonclassical
        } else {
            FncStatus::FrobeniusClassical
        };
        Ok(FncVerdict { status, q, w, remainder, quotient })
    }

    pub fn fnc_locus_poly(&self, q: u64) -> Result<LocusPoly> {
        let w = self.w_poly(q)?;
        let (r, reduced) = w.max_p_power_root();
        Ok(LocusPoly { w, reduced, r })
    }

    /// Largest `r` with every partial derivative a `p^r`-th power polynomial.
    pub fn gauss_p_power(&self) -> GaussPower {
        let grad = self.gradient();
        let p = self.field().characteristic();
        let g = grad
            .iter()
            .flat_map(|fi| fi.terms().flat_map(|(m, _)| m.exponents().to_vec()))
            .fold(0u64, |g, e| gcd(g, e as u64));
        if g == 0 {
            return GaussPower { r: 0, base: None };
        }
        let mut r = 0;
        let mut rest = g;
        while rest % p == 0 {
            rest /= p;
            r += 1;
        }
        if r == 0 {
            return GaussPower { r: 0, base: None };
        }
        let base = grad
            .iter()
            .map(|fi| fi.p_power_root(r).expect("exponents divisible by p^r"))
            .collect();
        GaussPower { r, base: Some(base) }
    }

    pub fn insep_bound_report(&self, q: u64) -> Result<InsepReport> {
        self.target_exponent(q)?;
        let gp = self.gauss_p_power();
        if gp.r == 0 {
            return Err(Error::Precondition(
                "no p-power structure of the Gauss map was found at the polynomial level".into(),
            ));
        }
        Ok(insep_degree_bound(self.field().characteristic(), gp.r, self.n(), q))
    }

    pub fn structural_flags(&self) -> StructuralFlags {
        let support = self.f.support();
        let missing_variable = (0..self.f.nvars()).filter(|i| !support.contains(i)).collect();
        let vanishing_partial = self
            .gradient()
            .iter()
            .enumerate()
            .filter(|(_, fi)| fi.is_zero())
            .map(|(i, _)| i)
            .collect();
        let poly_is_p_power = self.f.max_p_power_root().0 >= 1;
        StructuralFlags { missing_variable, vanishing_partial, poly_is_p_power }
    }

    /// Singular points over `F_{Q^m}`, `Q` the coefficient field order.
    pub fn singular_points(&self, m: u32) -> Result<PointSet> {
        let (big, emb) = self.field().extension(m)?;
        self.singular_points_over(big, &emb)
    }

    fn singular_points_over(&self, big: Arc<FieldSpec>, emb: &Embedding) -> Result<PointSet> {
        let f = self.f.embed(emb).compile();
        let grad: Vec<_> = self.gradient().iter().map(|g| g.embed(emb).compile()).collect();
        let space = ProjectiveSpace::new(big.clone(), self.n());
        let points = projective_filter(&space, DEFAULT_GUARD, |pt| {
            let mut scratch = Vec::new();
            f.eval(pt, &mut scratch).is_zero() && grad.iter().all(|g| g.eval(pt, &mut scratch).is_zero())
        })?;
        Ok(PointSet { field: big, points })
    }

    /// Nonsingular points over `F_{q^m}` where `W` vanishes.
    pub fn locus_points(&self, q: u64, m: u32) -> Result<PointSet> {
        let k = self.target_exponent(q)?;
        let (big, emb) = field_containing(self.field(), k * m)?;
        let w = self.w_unchecked(q).embed(&emb).compile();
        let f = self.f.embed(&emb).compile();
        let grad: Vec<_> = self.gradient().iter().map(|g| g.embed(&emb).compile()).collect();
        let space = ProjectiveSpace::new(big.clone(), self.n());
        let points = projective_filter(&space, DEFAULT_GUARD, |pt| {
            let mut scratch = Vec::new();
            f.eval(pt, &mut scratch).is_zero()
                && grad.iter().any(|g| !g.eval(pt, &mut scratch).is_zero())
                && w.eval(pt, &mut scratch).is_zero()
        })?;
        Ok(PointSet { field: big, points })
    }

    /// Nonsingular points over `F_{q^m}`.
    pub fn nonsingular_points(&self, q: u64, m: u32) -> Result<PointSet> {
        let k = self.target_exponent(q)?;
        let (big, emb) = field_containing(self.field(), k * m)?;
        let f = self.f.embed(&emb).compile();
        let grad: Vec<_> = self.gradient().iter().map(|g| g.embed(&emb).compile()).collect();
        let space = ProjectiveSpace::new(big.clone(), self.n());
        let points = projective_filter(&space, DEFAULT_GUARD, |pt| {
            let mut scratch = Vec::new();
            f.eval(pt, &mut scratch).is_zero() && grad.iter().any(|g| !g.eval(pt, &mut scratch).is_zero())
        })?;
        Ok(PointSet { field: big, points })
    }
}

/// `F_{p^degree}` with an embedding of `field`; requires `h | degree`.
pub fn field_containing(field: &Arc<FieldSpec>, degree: u32) -> Result<(Arc<FieldSpec>, Embedding)> {
    let h = field.degree();
    if degree == h {
        return Ok((field.clone(), Embedding::identity(field.clone())));
    }
    if degree == 0 || degree % h != 0 {
        return Err(Error::NotASubfield { r: h, h: degree });
    }
    let big = make_field(field.characteristic(), degree, None)?;
    let emb = Embedding::new(field.clone(), big.clone())?;
    Ok((big, emb))
}

/// Inseparable degree `p^(r(n-1))` under property (A), checked against `p <= deg_i <= q^(n-1)`.
pub fn insep_degree_bound(p: u64, r: u32, n: usize, q: u64) -> InsepReport {
    let e = (r as u64).saturating_mul(n.saturating_sub(1) as u64);
    let deg_i = sat_pow(p as u128, e);
    let upper = sat_pow(q as u128, n.saturating_sub(1) as u64);
    InsepReport {
        p,
        r,
        n,
        q,
        deg_i,
        upper,
        lower_ok: deg_i >= p as u128,
        upper_ok: deg_i <= upper,
    }
}

fn sat_pow(base: u128, e: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn surf(s: &str, nv: usize, p: u64, h: u32) -> Hypersurface {
        let f = make_field(p, h, None).unwrap();
        Hypersurface::new(parse_poly(s, nv, &f).unwrap()).unwrap()
    }

    const QUARTIC: &str = "X0*X1^5 + X1*X2^5 + X0^5*X2 + X3^6";

    #[test]
    fn rejects_bad_input() {
        let f = make_field(5, 1, None).unwrap();
        assert!(Hypersurface::new(parse_poly("X0^2 + X1", 2, &f).unwrap()).is_err());
        assert!(Hypersurface::new(parse_poly("0", 2, &f).unwrap()).is_err());
        assert!(Hypersurface::new(parse_poly("3", 2, &f).unwrap()).is_err());
        let s = surf(QUARTIC, 4, 5, 1);
        assert_eq!(s.fnc_test(6).unwrap_err(), Error::NotAPowerOfP(6, 5));
        let s9 = surf("u*X0 + X1", 2, 3, 2);
        assert_eq!(s9.fnc_test(3).unwrap_err(), Error::CoefficientsOutsideFq(3));
        assert!(s9.fnc_test(9).is_ok());
    }

    #[test]
    fn quartic_surface_gradient_and_verdict() {
        let s = surf(QUARTIC, 4, 5, 1);
        let f = s.field().clone();
        let want: Vec<_> = ["X1^5", "X2^5", "X0^5", "X3^5"].iter().map(|t| parse_poly(t, 4, &f).unwrap()).collect();
        assert_eq!(s.gradient(), want);
        let v = s.fnc_test(5).unwrap();
        assert_eq!(v.status, FncStatus::FrobeniusClassical);
        let quad = parse_poly("X0*X1+X1*X2+X0*X2+X3^2", 4, &f).unwrap();
        assert_eq!(v.w, quad.pow(5));
        assert!(!v.remainder.is_zero());
        let loc = s.fnc_locus_poly(5).unwrap();
        assert_eq!((loc.reduced, loc.r), (quad, 1));
        let gp = s.gauss_p_power();
        assert_eq!(gp.r, 1);
        let base: Vec<_> = ["X1", "X2", "X0", "X3"].iter().map(|t| parse_poly(t, 4, &f).unwrap()).collect();
        assert_eq!(gp.base.unwrap(), base);
        assert!(!s.structural_flags().any());
        let ins = s.insep_bound_report(5).unwrap();
        assert_eq!((ins.deg_i, ins.upper, ins.violated()), (25, 25, false));
    }

    #[test]
    fn fermat_quartic_over_f3() {
        let s = surf("X0^4+X1^4+X2^4+X3^4", 4, 3, 1);
        let v = s.fnc_test(9).unwrap();
        assert_eq!(v.status, FncStatus::FrobeniusNonclassical);
        assert_eq!(v.w, s.poly().pow(3));
        let cubes: Vec<_> = (0..4).map(|i| MultiPoly::var(s.field().clone(), 4, i).pow(3)).collect();
        assert_eq!(s.gradient(), cubes);
    }

    #[test]
    fn degenerate_cases() {
        let s = surf("X0^5 + X1^5", 2, 5, 1);
        assert_eq!(s.fnc_test(5).unwrap().status, FncStatus::DegenerateCaseI);
        assert!(s.structural_flags().poly_is_p_power);
        let c = surf("X0^3+X1^3", 4, 5, 1);
        let fl = c.structural_flags();
        assert_eq!(fl.missing_variable, vec![2, 3]);
        assert!(fl.is_cone());
    }

    #[test]
    fn quadric_locus_poly() {
        let s = surf("X0^2+X1^2+X2^2", 3, 5, 1);
        let loc = s.fnc_locus_poly(5).unwrap();
        let f = s.field().clone();
        assert_eq!(loc.w, parse_poly("2X0^6+2X1^6+2X2^6", 3, &f).unwrap());
        assert_eq!(loc.r, 0);
        assert_eq!(s.gauss_p_power().r, 0);
    }

    #[test]
    fn hyperplane_gradient_is_constant() {
        let s = surf("X0 + 2X1 + 3X2", 3, 5, 1);
        let f = s.field().clone();
        let g: Vec<_> = s.gradient().iter().map(|gi| gi.constant_term()).collect();
        assert_eq!(g, vec![f.from_int(1), f.from_int(2), f.from_int(3)]);
        assert_eq!(s.gauss_p_power().r, 0);
        assert!(s.singular_points(1).unwrap().points.is_empty());
    }

    #[test]
    fn other_gauss_powers() {
        let s = surf("X0^6+X1^6+X2^2X3^4+X3^6", 4, 5, 1);
        assert_eq!(s.gauss_p_power().r, 0);
        assert!(s.insep_bound_report(5).is_err());
    }

    #[test]
    fn insep_arithmetic() {
        let a = insep_degree_bound(7, 1, 2, 7);
        assert_eq!((a.deg_i, a.upper, a.violated()), (7, 7, false));
        let b = insep_degree_bound(7, 3, 2, 7);
        assert!(b.violated());
        assert!(!b.upper_ok);
    }

    #[test]
    fn singular_enumeration() {
        let s = surf(QUARTIC, 4, 5, 1);
        assert!(s.singular_points(1).unwrap().points.is_empty());
        let cone = surf("X0^2+X1^2+X2^2", 4, 5, 1);
        let sing = cone.singular_points(1).unwrap();
        let f = cone.field().clone();
        assert_eq!(sing.points, vec![vec![f.zero(), f.zero(), f.zero(), f.one()]]);
    }

    #[test]
    fn locus_over_f25_matches_quadric() {
        let s = surf(QUARTIC, 4, 5, 1);
        let loc = s.locus_points(5, 2).unwrap();
        let big = loc.field.clone();
        assert_eq!(big.order(), 25);
        let f = s.field().clone();
        let quad = parse_poly("X0*X1+X1*X2+X0*X2+X3^2", 4, &f).unwrap();
        let emb = Embedding::new(f.clone(), big.clone()).unwrap();
        let quad = quad.embed(&emb);
        let all = s.nonsingular_points(5, 2).unwrap();
        let expected: Vec<_> = all
            .points
            .iter()
            .filter(|p| quad.evaluate(p).unwrap().is_zero())
            .cloned()
            .collect();
        assert_eq!(loc.points, expected);
        assert!(!expected.is_empty());
        let rational = s.locus_points(5, 1).unwrap();
        assert_eq!(rational.points, s.nonsingular_points(5, 1).unwrap().points);
    }
}
