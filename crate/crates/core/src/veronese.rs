//! The degree-`s` Veronese embedding of the plane and Frobenius order
//! sequences of plane curves with respect to degree-`s` linear systems.

use std::sync::Arc;

use crate::curve::{frobenius_order_sequence, OrderParams, OrderSeqReport, RationalFunction, SpaceCurveModel};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::mpoly::{Monomial, MultiPoly};

/// Degree-`s` monomials in `(X, Y, Z)`, ordered by ascending `i + j`, then ascending `j`,
/// where the monomial is `X^i Y^j Z^(s-i-j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseMap {
    s: u16,
    exponents: Vec<(u16, u16)>,
}

impl VeroneseMap {
    pub fn new(s: u16) -> Result<Self> {
        if s == 0 {
            return Err(Error::Precondition("the degree s must be positive".into()));
        }
        let mut exponents = Vec::new();
        for total in 0..=s {
            for j in 0..=total {
                exponents.push((total - j, j));
            }
        }
        Ok(VeroneseMap { s, exponents })
    }

    pub fn s(&self) -> u16 {
        self.s
    }

    /// Dimension `M` of the target projective space.
    pub fn m(&self) -> usize {
        self.exponents.len() - 1
    }

    /// `(i, j)` pairs; the exponent of `Z` is `s - i - j`.
    pub fn exponents(&self) -> &[(u16, u16)] {
        &self.exponents
    }

    /// The monomials as elements of `F[X, Y, Z]`.
    pub fn monomials(&self) -> Vec<Monomial> {
        self.exponents
            .iter()
            .map(|&(i, j)| Monomial::from_exponents(&[i, j, self.s - i - j]))
            .collect()
    }

    /// Affine coordinate functions `x^i y^j` on the chart `Z = 1`.
    pub fn affine_coordinates(&self, field: &Arc<FieldSpec>) -> Vec<RationalFunction> {
        self.exponents
            .iter()
            .map(|&(i, j)| {
                let m = Monomial::from_exponents(&[i, j]);
                RationalFunction::polynomial(MultiPoly::monomial(field.clone(), 2, FieldElement::ONE, m))
            })
            .collect()
    }

    pub fn format(&self) -> String {
        let names = ["X", "Y", "Z"];
        let parts: Vec<String> = self
            .monomials()
            .iter()
            .map(|m| {
                let factors: Vec<String> = m
                    .exponents()
                    .iter()
                    .zip(names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(&e, v)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                    .collect();
                factors.join("*")
            })
            .collect();
        format!("({})", parts.join(" : "))
    }
}

/// `F(phi_s)` as a polynomial in `(X, Y, Z)`.
pub fn compose(poly: &MultiPoly, s: u16) -> Result<MultiPoly> {
    let map = VeroneseMap::new(s)?;
    if poly.nvars() != map.m() + 1 {
        return Err(Error::ArityMismatch { expected: map.m() + 1, got: poly.nvars() });
    }
    let field = poly.field();
    let images: Vec<MultiPoly> = map
        .monomials()
        .into_iter()
        .map(|m| MultiPoly::monomial(field.clone(), 3, FieldElement::ONE, m))
        .collect();
    poly.substitute(&images)
}

#[derive(Clone, Debug)]
pub struct VeroneseCertificate {
    pub s: u16,
    pub m: usize,
    pub report: OrderSeqReport,
    /// The Frobenius order sequence differs from `(0, ..., M - 1)`.
    pub nonclassical: bool,
    /// `p <= M`.
    pub outside_hypotheses: bool,
}

/// Frobenius order sequence of the affine plane curve `f(x, y) = 0` under the degree-`s` monomials.
pub fn plane_fnc_wrt_degree_s(f: &MultiPoly, s: u16, q: u64, params: &OrderParams) -> Result<VeroneseCertificate> {
    let map = VeroneseMap::new(s)?;
    if f.nvars() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.nvars() });
    }
    let deg = f.total_degree().unwrap_or(0);
    if deg <= s as u32 {
        return Err(Error::Precondition(format!("the plane curve has degree {deg} but must exceed s = {s}")));
    }
    let curve = SpaceCurveModel::new(f.clone(), map.affine_coordinates(f.field()))?;
    let report = frobenius_order_sequence(&curve, q, params)?;
    let m = map.m();
    Ok(VeroneseCertificate {
        s,
        m,
        nonclassical: !report.is_standard(),
        outside_hypotheses: f.field().characteristic() <= m as u64,
        report,
    })
}
