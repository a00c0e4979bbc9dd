//! Curves given by a plane model `f(x, y) = 0` and rational coordinate
//! functions `(phi_0 : ... : phi_n)`.
//!
//! Order sequences are computed from power-series expansions in
//! `t = x - x0` at sampled centers. A row of Hasse derivatives is accepted
//! when exact elimination over the Laurent series leaves a known nonzero
//! coefficient, which certifies linear independence over the function field.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{prime_power, Embedding, FieldElement, FieldSpec};
use crate::hypersurface::Hypersurface;
use crate::mpoly::{parse_poly, parse_rational, MultiPoly};
use crate::series::{frobenius_dilate, hasse_shift, hensel_lift, inv_trunc, mul_trunc, BivariateEvaluator, LSeries};

/// A quotient of bivariate polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunction {
    pub fn polynomial(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.field().clone(), num.nvars());
        RationalFunction { num, den }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }
}

impl std::fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == MultiPoly::one(self.den.field().clone(), 2) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// A plane model with coordinate functions, all over one field.
#[derive(Clone, Debug)]
pub struct SpaceCurveModel {
    f: MultiPoly,
    coords: Vec<RationalFunction>,
}

impl SpaceCurveModel {
    pub fn new(f: MultiPoly, coords: Vec<RationalFunction>) -> Result<Self> {
        if f.nvars() != 2 {
            return Err(Error::InvalidCurve("the plane model must be bivariate".into()));
        }
        if f.is_constant() {
            return Err(Error::InvalidCurve("the plane model is constant".into()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidCurve("no coordinate functions".into()));
        }
        for c in &coords {
            if c.num.nvars() != 2 || c.den.nvars() != 2 || **c.num.field() != **f.field() || **c.den.field() != **f.field() {
                return Err(Error::IncompatibleOperands);
            }
            if c.den.is_zero() || f.divides(&c.den)? {
                return Err(Error::InvalidCurve(format!("denominator {} vanishes on the curve", c.den)));
            }
        }
        Ok(SpaceCurveModel { f, coords })
    }

    /// Parses a plane model and `;`-separated coordinate literals.
    pub fn parse(plane: &str, coords: &str, field: &Arc<FieldSpec>) -> Result<Self> {
        let f = parse_poly(plane, 2, field)?;
        let coords = coords
            .split(';')
            .map(|c| parse_rational(c.trim(), 2, field).map(|(num, den)| RationalFunction { num, den }))
            .collect::<Result<Vec<_>>>()?;
        SpaceCurveModel::new(f, coords)
    }

    pub fn plane(&self) -> &MultiPoly {
        &self.f
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.f.field()
    }

    /// Dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    fn defined_over(&self, k: u32) -> bool {
        self.f.coefficients_fixed_by(k as u64)
            && self
                .coords
                .iter()
                .all(|c| c.num.coefficients_fixed_by(k as u64) && c.den.coefficients_fixed_by(k as u64))
    }
}

/// An affine point `(x0, y0)` of the plane model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Center {
    pub x: FieldElement,
    pub y: FieldElement,
}

/// The curve data carried over to `F_{Q^m}`.
pub struct CurveChart {
    field: Arc<FieldSpec>,
    m: u32,
    f: BivariateEvaluator,
    fy: BivariateEvaluator,
    nums: Vec<BivariateEvaluator>,
    dens: Vec<BivariateEvaluator>,
    f_poly: MultiPoly,
}

impl CurveChart {
    pub fn new(curve: &SpaceCurveModel, m: u32) -> Result<Self> {
        let fy = curve.f.partial_derivative(1);
        if fy.is_zero() {
            return Err(Error::InvalidCurve(
                "f_y vanishes identically, so x is not a separating variable; swap x and y".into(),
            ));
        }
        let (field, emb) = curve.field().extension(m)?;
        let e = |p: &MultiPoly| p.embed(&emb);
        let dens_poly: Vec<MultiPoly> = curve.coords.iter().map(|c| e(&c.den)).collect();
        Ok(CurveChart {
            m,
            f: BivariateEvaluator::new(&e(&curve.f)),
            fy: BivariateEvaluator::new(&e(&fy)),
            nums: curve.coords.iter().map(|c| BivariateEvaluator::new(&e(&c.num))).collect(),
            dens: dens_poly.iter().map(BivariateEvaluator::new).collect(),
            f_poly: e(&curve.f),
            field,
        })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    fn value(ev: &BivariateEvaluator, c: Center) -> FieldElement {
        ev.eval(c.x, &[c.y], 1)[0]
    }

    pub fn is_admissible(&self, c: Center) -> bool {
        Self::value(&self.f, c).is_zero()
            && !Self::value(&self.fy, c).is_zero()
            && self.dens.iter().all(|d| !Self::value(d, c).is_zero())
    }

    /// Up to `count` admissible centers, chosen by scanning x-values in a
    /// seeded random order; returned in canonical order. At most
    /// [`CENTER_SCAN_BUDGET`] candidate points are tested.
    pub fn sample_centers(&self, count: usize, seed: u64) -> Vec<Center> {
        let mut xs: Vec<FieldElement> = self.field.elements().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        xs.shuffle(&mut rng);
        xs.truncate((CENTER_SCAN_BUDGET / self.field.order()).max(1) as usize);
        let f = &self.field;
        let mut found = Vec::new();
        for x in xs {
            if found.len() >= count {
                break;
            }
            let row: Vec<Center> = f
                .elements()
                .map(|y| Center { x, y })
                .filter(|&c| self.is_admissible(c))
                .collect();
            found.extend(row);
        }
        found.truncate(count);
        found.sort();
        found
    }

    /// Expansion of the branch and of every coordinate at `center` to `n` terms.
    pub fn expand(&self, center: Center, n: usize) -> Result<SeriesExpansion> {
        if !self.is_admissible(center) {
            return Err(Error::Precondition("center is not admissible".into()));
        }
        let y = hensel_lift(&self.f_poly, center.x, center.y, n)?;
        let f = &*self.field;
        let coords = self
            .nums
            .iter()
            .zip(&self.dens)
            .map(|(num, den)| {
                let a = num.eval(center.x, &y, n);
                let b = den.eval(center.x, &y, n);
                let binv = inv_trunc(f, &b, n).expect("denominator is a unit at an admissible center");
                mul_trunc(f, &a, &binv, n)
            })
            .collect();
        Ok(SeriesExpansion { center, precision: n, y, coords })
    }

    /// `f(x0 + t, y(t)) mod t^N` for a computed expansion.
    pub fn residual(&self, e: &SeriesExpansion) -> Vec<FieldElement> {
        self.f.eval(e.center.x, &e.y, e.precision)
    }

}

/// Truncated expansions at a center; `coords[i]` is the series of `phi_i`.
#[derive(Clone, Debug)]
pub struct SeriesExpansion {
    pub center: Center,
    pub precision: usize,
    pub y: Vec<FieldElement>,
    pub coords: Vec<Vec<FieldElement>>,
}

/// A chart over `F_{Q^m}` with sampled centers.
pub struct CenterSet {
    pub chart: CurveChart,
    pub centers: Vec<Center>,
}

/// Admissible centers over `F_{Q^m}`.
pub fn find_centers(curve: &SpaceCurveModel, m: u32, count: usize, seed: u64) -> Result<CenterSet> {
    let chart = CurveChart::new(curve, m)?;
    let centers = chart.sample_centers(count, seed);
    if centers.is_empty() {
        return Err(Error::NoCenter { field_order: chart.field.order() });
    }
    Ok(CenterSet { chart, centers })
}

pub const CENTER_SCAN_BUDGET: u64 = 1 << 20;

/// Raises `m` from `m_start` until `count` centers exist or `m_max` is reached.
pub fn find_centers_escalating(
    curve: &SpaceCurveModel,
    m_start: u32,
    m_max: u32,
    count: usize,
    seed: u64,
) -> Result<CenterSet> {
    let mut best: Option<CenterSet> = None;
    let mut last_order = 0;
    for m in m_start..=m_max.max(m_start) {
        let chart = CurveChart::new(curve, m)?;
        last_order = chart.field.order();
        if last_order > 1 << 20 {
            break;
        }
        let centers = chart.sample_centers(count, seed);
        let enough = centers.len() >= count;
        if !centers.is_empty() && best.as_ref().is_none_or(|b| b.centers.len() < centers.len()) {
            best = Some(CenterSet { chart, centers });
        }
        if enough {
            break;
        }
    }
    best.ok_or(Error::NoCenter { field_order: last_order })
}

/// Tuning knobs for order-sequence computations.
#[derive(Clone, Debug)]
pub struct OrderParams {
    /// Extension degree for centers; `None` escalates from 2.
    pub m: Option<u32>,
    pub count: usize,
    /// Series precision; `None` means `4 * cap + 16`.
    pub precision: Option<usize>,
    /// Largest derivative order tried; `None` means `max(q, n + 1)`.
    pub cap: Option<u32>,
    pub seed: u64,
}

impl Default for OrderParams {
    fn default() -> Self {
        OrderParams { m: None, count: 3, precision: None, cap: None, seed: 0 }
    }
}

pub const DEFAULT_M_START: u32 = 2;
pub const DEFAULT_M_MAX: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryStatus {
    Certified,
    /// Some earlier row was rejected after seeing no further than the center's
    /// top point order `j_n(P)`.
    ProbableAtPrecision { precision: usize, centers: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    Order,
    Frobenius,
}

/// The nonzero coefficient that certified a rank increase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PivotWitness {
    pub center: Center,
    /// Derivative order of the row; `None` for the Frobenius row.
    pub row: Option<u32>,
    pub column: usize,
    /// Exponent of `t` of the certifying coefficient.
    pub index: i64,
    pub value: FieldElement,
}

#[derive(Clone, Debug)]
pub struct CenterOrders {
    pub center: Center,
    /// `(j_0(P), ..., j_n(P))`, absent if the precision did not reach full rank.
    pub orders: Option<Vec<u32>>,
    /// Sequence computed at this center, absent if the cap was exhausted.
    pub sequence: Option<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct OrderSeqReport {
    pub kind: SequenceKind,
    pub q: u64,
    pub sequence: Vec<u32>,
    pub status: Vec<EntryStatus>,
    pub witnesses: Vec<PivotWitness>,
    pub point_orders: Vec<CenterOrders>,
    pub precision: usize,
    pub cap: u32,
    pub field: Arc<FieldSpec>,
    pub m: u32,
    /// Smallest residual precision among rejected rows at the chosen center.
    pub min_rejection_precision: Option<i64>,
    /// `p <= n`.
    pub outside_hypotheses: bool,
}

impl OrderSeqReport {
    /// `(0, 1, ..., n)` for order sequences, `(0, ..., n - 1)` for Frobenius ones.
    pub fn is_standard(&self) -> bool {
        self.sequence.iter().enumerate().all(|(i, &e)| e == i as u32)
    }

    pub fn all_certified(&self) -> bool {
        self.status.iter().all(|s| *s == EntryStatus::Certified)
    }

    pub fn centers(&self) -> usize {
        self.point_orders.len()
    }
}

/// Whether `nu` is `eps` with exactly one entry removed.
pub fn drops_one(eps: &[u32], nu: &[u32]) -> bool {
    if nu.len() + 1 != eps.len() {
        return false;
    }
    let mut skipped = false;
    let mut j = 0;
    for &e in eps {
        if j < nu.len() && nu[j] == e {
            j += 1;
        } else if !skipped {
            skipped = true;
        } else {
            return false;
        }
    }
    j == nu.len()
}

enum Outcome {
    Accepted { column: usize, index: i64, value: FieldElement },
    Rejected { residual_precision: i64 },
}

/// Row space over the Laurent series field, kept with distinct pivot columns.
struct Echelon<'a> {
    field: &'a FieldSpec,
    rows: Vec<(usize, Vec<LSeries>)>,
    rel_cap: i64,
}

impl<'a> Echelon<'a> {
    fn new(field: &'a FieldSpec, rel_cap: i64) -> Self {
        Echelon { field, rows: Vec::new(), rel_cap }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn try_add(&mut self, mut v: Vec<LSeries>) -> Outcome {
        let f = self.field;
        for (c, b) in &self.rows {
            let coef = v[*c].clone();
            if coef.is_exact() && coef.is_zero_to_precision() {
                continue;
            }
            for j in 0..v.len() {
                v[j] = if j == *c { LSeries::exact_zero() } else { v[j].sub(&coef.mul(&b[j], f), f) };
            }
        }
        let pivots: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        let candidate = (0..v.len())
            .filter(|j| !pivots.contains(j))
            .filter_map(|j| v[j].valuation().map(|val| (val, j)))
            .min();
        match candidate {
            Some((_, c)) => {
                let (index, value) = v[c].leading().expect("known nonzero entry");
                let inv = v[c].inv(f, self.rel_cap).expect("unit after shifting");
                for (j, entry) in v.iter_mut().enumerate() {
                    *entry = if j == c { LSeries::exact_constant(FieldElement::ONE) } else { entry.mul(&inv, f) };
                }
                self.rows.push((c, v));
                Outcome::Accepted { column: c, index, value }
            }
            None => {
                let residual_precision = (0..v.len())
                    .filter(|j| !pivots.contains(j))
                    .map(|j| v[j].precision())
                    .min()
                    .unwrap_or(i64::MAX);
                Outcome::Rejected { residual_precision }
            }
        }
    }
}

fn to_lseries(s: &[FieldElement]) -> LSeries {
    LSeries::from_coeffs(0, s.to_vec(), s.len() as i64)
}

/// Hasse-derivative row of order `e` at an expansion.
pub fn derivative_row(field: &FieldSpec, e: &SeriesExpansion, k: u32) -> Vec<Vec<FieldElement>> {
    e.coords.iter().map(|s| hasse_shift(field, s, k as usize)).collect()
}

struct CenterRun {
    accepted: Vec<u32>,
    witnesses: Vec<PivotWitness>,
    /// `(row, residual precision)` for rejected rows.
    rejections: Vec<(u32, i64)>,
    rank: usize,
}

fn greedy_at(
    field: &FieldSpec,
    exp: &SeriesExpansion,
    cap: u32,
    frobenius: Option<u64>,
) -> CenterRun {
    let n1 = exp.coords.len();
    let mut ech = Echelon::new(field, exp.precision as i64);
    let mut run = CenterRun { accepted: Vec::new(), witnesses: Vec::new(), rejections: Vec::new(), rank: 0 };
    if let Some(q) = frobenius {
        let row: Vec<LSeries> = exp
            .coords
            .iter()
            .map(|s| to_lseries(&frobenius_dilate(field, s, q, exp.precision)))
            .collect();
        if let Outcome::Accepted { column, index, value } = ech.try_add(row) {
            run.witnesses.push(PivotWitness { center: exp.center, row: None, column, index, value });
        }
    }
    for e in 0..=cap {
        if ech.rank() == n1 {
            break;
        }
        let row: Vec<LSeries> = derivative_row(field, exp, e).iter().map(|s| to_lseries(s)).collect();
        match ech.try_add(row) {
            Outcome::Accepted { column, index, value } => {
                run.accepted.push(e);
                run.witnesses.push(PivotWitness { center: exp.center, row: Some(e), column, index, value });
            }
            Outcome::Rejected { residual_precision } => run.rejections.push((e, residual_precision)),
        }
    }
    run.rank = ech.rank();
    run
}

/// `(j_0(P), ..., j_n(P))` by exact column-rank growth of the coefficient matrix.
pub fn point_orders(field: &FieldSpec, exp: &SeriesExpansion) -> Option<Vec<u32>> {
    let n1 = exp.coords.len();
    let shift = exp
        .coords
        .iter()
        .filter_map(|s| s.iter().position(|c| !c.is_zero()))
        .min()?;
    let ncols = exp.precision - shift;
    // Row-reduce column by column; a column that raises the rank is an order.
    let mut rows: Vec<Vec<FieldElement>> = exp.coords.iter().map(|s| s[shift..].to_vec()).collect();
    let mut orders = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == n1 {
            break;
        }
        let Some(piv) = (rank..n1).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(rows[rank][col]).expect("nonzero");
        for r in rank + 1..n1 {
            let factor = field.mul(rows[r][col], inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..ncols {
                let sub = field.mul(factor, rows[rank][c]);
                rows[r][c] = field.sub(rows[r][c], sub);
            }
        }
        orders.push(col as u32);
        rank += 1;
    }
    (rank == n1).then_some(orders)
}

fn target_exponent(curve: &SpaceCurveModel, q: u64) -> Result<u32> {
    let p = curve.field().characteristic();
    match prime_power(q) {
        Some((base, k)) if base == p => Ok(k),
        _ => Err(Error::NotAPowerOfP(q, p)),
    }
}

fn centers_for(curve: &SpaceCurveModel, params: &OrderParams) -> Result<CenterSet> {
    match params.m {
        Some(m) => find_centers(curve, m, params.count, params.seed),
        None => find_centers_escalating(curve, DEFAULT_M_START, DEFAULT_M_MAX, params.count, params.seed),
    }
}

/// Residual precision at or below which a rejection is not trusted: the top
/// point order at the center, or 0 when the orders are unknown.
fn weak_below(orders: &Option<Vec<u32>>) -> i64 {
    orders.as_ref().and_then(|o| o.last()).map_or(0, |&j| j as i64)
}

fn run_sequence(curve: &SpaceCurveModel, q: u64, params: &OrderParams, kind: SequenceKind) -> Result<OrderSeqReport> {
    let k = target_exponent(curve, q)?;
    if kind == SequenceKind::Frobenius && !curve.defined_over(k) {
        return Err(Error::CoefficientsOutsideFq(q));
    }
    if curve.coords.iter().all(RationalFunction::is_constant) {
        return Err(Error::Precondition("all coordinate functions are constant".into()));
    }
    let n = curve.n();
    let cap = params.cap.unwrap_or((q.min(u32::MAX as u64) as u32).max(n as u32 + 1));
    if (cap as usize) < n {
        return Err(Error::Precondition(format!("cap {cap} is smaller than n = {n}")));
    }
    let precision = params.precision.unwrap_or(4 * cap as usize + 16);
    if precision <= cap as usize {
        return Err(Error::Precondition("precision must exceed the cap".into()));
    }
    let set = centers_for(curve, params)?;
    let chart = &set.chart;
    let field = chart.field.clone();
    let frob = (kind == SequenceKind::Frobenius).then_some(q);
    let needed = match kind {
        SequenceKind::Order => n + 1,
        SequenceKind::Frobenius => n,
    };
    let runs: Vec<(SeriesExpansion, CenterRun, Option<Vec<u32>>)> = set
        .centers
        .par_iter()
        .map(|&c| {
            let exp = chart.expand(c, precision)?;
            let run = greedy_at(&field, &exp, cap, frob);
            let orders = point_orders(&field, &exp);
            Ok((exp, run, orders))
        })
        .collect::<Result<Vec<_>>>()?;
    let complete = |r: &CenterRun| r.rank == n + 1 && r.accepted.len() == needed;
    let best = runs
        .iter()
        .enumerate()
        .filter(|(_, (_, r, _))| complete(r))
        .min_by(|a, b| a.1 .1.accepted.cmp(&b.1 .1.accepted).then(a.0.cmp(&b.0)));
    let Some((_, (_, run, orders))) = best else {
        let rank = runs.iter().map(|(_, r, _)| r.rank).max().unwrap_or(0);
        if runs.iter().any(|(_, r, o)| r.rejections.iter().any(|&(_, prec)| prec <= weak_below(o))) {
            return Err(Error::PrecisionExhausted { rank, needed: n + 1, precision });
        }
        return Err(Error::CapExhausted { rank, needed: n + 1, cap });
    };
    let status = run
        .accepted
        .iter()
        .map(|&e| {
            let weak = run.rejections.iter().any(|&(row, prec)| row < e && prec <= weak_below(orders));
            if weak {
                EntryStatus::ProbableAtPrecision { precision, centers: set.centers.len() }
            } else {
                EntryStatus::Certified
            }
        })
        .collect();
    let point_orders = runs
        .iter()
        .map(|(exp, r, o)| CenterOrders {
            center: exp.center,
            orders: o.clone(),
            sequence: complete(r).then(|| r.accepted.clone()),
        })
        .collect();
    Ok(OrderSeqReport {
        kind,
        q,
        sequence: run.accepted.clone(),
        status,
        witnesses: run.witnesses.clone(),
        point_orders,
        precision,
        cap,
        m: chart.m,
        field,
        min_rejection_precision: run.rejections.iter().map(|r| r.1).min(),
        outside_hypotheses: curve.field().characteristic() <= n as u64,
    })
}

/// The lex-minimal sequence `(eps_0, ..., eps_n)` with nonvanishing Wronskian.
pub fn order_sequence(curve: &SpaceCurveModel, q: u64, params: &OrderParams) -> Result<OrderSeqReport> {
    run_sequence(curve, q, params, SequenceKind::Order)
}

/// The lex-minimal `(nu_0, ..., nu_{n-1})` with the Frobenius row in place of one derivative row.
pub fn frobenius_order_sequence(curve: &SpaceCurveModel, q: u64, params: &OrderParams) -> Result<OrderSeqReport> {
    run_sequence(curve, q, params, SequenceKind::Frobenius)
}

/// Re-expands at a witness center and reads the certifying coefficient again.
pub fn recheck_witness(curve: &SpaceCurveModel, report: &OrderSeqReport, w: &PivotWitness) -> Result<bool> {
    let chart = CurveChart::new(curve, report.m)?;
    let exp = chart.expand(w.center, report.precision)?;
    let frob = (report.kind == SequenceKind::Frobenius).then_some(report.q);
    let run = greedy_at(&chart.field, &exp, report.cap, frob);
    Ok(run.witnesses.contains(w))
}

/// `F(phi) = num / den` with each distinct denominator raised to the least power that clears it.
pub fn clear_denominators(poly: &MultiPoly, coords: &[RationalFunction]) -> Result<(MultiPoly, MultiPoly)> {
    if poly.nvars() != coords.len() {
        return Err(Error::ArityMismatch { expected: poly.nvars(), got: coords.len() });
    }
    let field = poly.field().clone();
    let one = MultiPoly::one(field.clone(), 2);
    // Normalize to monic denominators; constants fold into the numerator.
    let mut groups: Vec<MultiPoly> = Vec::new();
    let mut nums = Vec::with_capacity(coords.len());
    let mut group_of = Vec::with_capacity(coords.len());
    for c in coords {
        let (_, lc) = c.den.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = field.inv(lc).expect("nonzero");
        nums.push(c.num.scale(lc_inv));
        let d = c.den.scale(lc_inv);
        if d.is_constant() {
            group_of.push(None);
        } else {
            let g = match groups.iter().position(|x| *x == d) {
                Some(g) => g,
                None => {
                    groups.push(d);
                    groups.len() - 1
                }
            };
            group_of.push(Some(g));
        }
    }
    let sums: Vec<Vec<u32>> = poly
        .terms()
        .map(|(m, _)| {
            let mut s = vec![0u32; groups.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if let Some(g) = group_of[i] {
                    s[g] += e as u32;
                }
            }
            s
        })
        .collect();
    let e: Vec<u32> = (0..groups.len()).map(|g| sums.iter().map(|s| s[g]).max().unwrap_or(0)).collect();
    let mut num_pows: Vec<PowerCache> = nums.iter().map(|p| PowerCache::new(p.clone())).collect();
    let mut den_pows: Vec<PowerCache> = groups.iter().map(|p| PowerCache::new(p.clone())).collect();
    let mut out = MultiPoly::zero(field.clone(), 2);
    for ((m, c), s) in poly.terms().zip(&sums) {
        let mut term = MultiPoly::constant(field.clone(), 2, c);
        for (i, &ex) in m.exponents().iter().enumerate() {
            if ex > 0 {
                term = &term * num_pows[i].get(ex as u32);
            }
        }
        for g in 0..groups.len() {
            let k = e[g] - s[g];
            if k > 0 {
                term = &term * den_pows[g].get(k);
            }
        }
        out = &out + &term;
    }
    let den = (0..groups.len()).fold(one, |acc, g| &acc * den_pows[g].get(e[g]));
    Ok((out, den))
}

struct PowerCache {
    powers: Vec<MultiPoly>,
}

impl PowerCache {
    fn new(base: MultiPoly) -> Self {
        let one = MultiPoly::one(base.field().clone(), base.nvars());
        PowerCache { powers: vec![one, base] }
    }

    fn get(&mut self, k: u32) -> &MultiPoly {
        while self.powers.len() <= k as usize {
            let next = &self.powers[self.powers.len() - 1] * &self.powers[1];
            self.powers.push(next);
        }
        &self.powers[k as usize]
    }
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub holds: bool,
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
}

/// Whether the curve lies on `F = 0`: the cleared numerator of `F(phi)` is divisible by `f`.
pub fn membership_identity(curve: &SpaceCurveModel, poly: &MultiPoly) -> Result<Membership> {
    if **poly.field() != **curve.field() {
        return Err(Error::IncompatibleOperands);
    }
    let (numerator, denominator) = clear_denominators(poly, &curve.coords)?;
    let holds = curve.f.divides(&numerator)?;
    Ok(Membership { holds, numerator, denominator })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separability {
    Inseparable,
    Separable,
    /// Every partial derivative vanishes along the curve.
    Undefined,
}

/// Derivative test for the Gauss map of `S` restricted to the curve.
pub fn gauss_restriction_separability(curve: &SpaceCurveModel, s: &Hypersurface) -> Result<Separability> {
    if curve.coords.iter().all(RationalFunction::is_constant) {
        return Err(Error::Precondition("all coordinate functions are constant".into()));
    }
    if !membership_identity(curve, s.poly())?.holds {
        return Err(Error::Precondition("the curve does not lie on the hypersurface".into()));
    }
    let f = &curve.f;
    let parts: Vec<(MultiPoly, MultiPoly)> = s
        .gradient()
        .iter()
        .map(|g| clear_denominators(g, &curve.coords))
        .collect::<Result<_>>()?;
    let mut nonzero = Vec::new();
    for (i, (a, _)) in parts.iter().enumerate() {
        if !f.divides(a)? {
            nonzero.push(i);
        }
    }
    let Some(&j) = nonzero.first() else {
        return Ok(Separability::Undefined);
    };
    let fx = f.partial_derivative(0);
    let fy = f.partial_derivative(1);
    // d/dx along the curve, scaled by f_y: P_x f_y - P_y f_x.
    let dx = |p: &MultiPoly| &(&p.partial_derivative(0) * &fy) - &(&p.partial_derivative(1) * &fx);
    let (aj, bj) = &parts[j];
    for (i, (ai, bi)) in parts.iter().enumerate() {
        if i == j {
            continue;
        }
        let a = ai * bj;
        let b = bi * aj;
        let wronsk = &(&dx(&a) * &b) - &(&a * &dx(&b));
        if !f.divides(&wronsk)? {
            return Ok(Separability::Separable);
        }
    }
    Ok(Separability::Inseparable)
}

#[derive(Clone, Debug)]
pub struct OsculatingData {
    pub center: Center,
    pub field: Arc<FieldSpec>,
    /// Hyperplane coefficients, normalized so the last nonzero one is 1.
    pub coeffs: Vec<FieldElement>,
    pub point_orders: Vec<u32>,
    /// `j_n(P)`.
    pub contact: u32,
    /// `r` when the contact order is `p^r` with `r >= 1`.
    pub r: Option<u32>,
    /// Proportionality to the gradient of the given hypersurface at the point.
    pub tangent_match: Option<bool>,
}

/// The hyperplane with maximal contact at `center`: the kernel of the first `j_n(P)` columns.
pub fn osculating_hyperplane(
    curve: &SpaceCurveModel,
    chart: &CurveChart,
    center: Center,
    precision: usize,
    eps: Option<&[u32]>,
    surface: Option<&Hypersurface>,
) -> Result<OsculatingData> {
    let field = chart.field.clone();
    let f = &*field;
    let exp = chart.expand(center, precision)?;
    let orders = point_orders(f, &exp)
        .ok_or_else(|| Error::NonGenericCenter("precision too small to resolve the point orders".into()))?;
    if let Some(eps) = eps {
        if eps != orders.as_slice() {
            return Err(Error::NonGenericCenter(format!("point orders {orders:?} differ from {eps:?}")));
        }
    }
    let n1 = exp.coords.len();
    let contact = *orders.last().expect("nonempty");
    let shift = exp
        .coords
        .iter()
        .filter_map(|s| s.iter().position(|c| !c.is_zero()))
        .min()
        .expect("rank reached");
    // Columns 0..contact of the shifted coefficient matrix, transposed into equations.
    let eqs: Vec<Vec<FieldElement>> = (0..contact as usize)
        .map(|col| (0..n1).map(|i| exp.coords[i][shift + col]).collect())
        .collect();
    let kernel = kernel_vector(f, &eqs, n1)
        .ok_or_else(|| Error::NonGenericCenter("osculating system is under-determined".into()))?;
    let p = f.characteristic();
    let r = (1..64).find(|&r| p.checked_pow(r) == Some(contact as u64));
    let tangent_match = match surface {
        None => None,
        Some(s) => {
            let emb = Embedding::new(curve.field().clone(), field.clone())?;
            let point: Vec<FieldElement> = exp.coords.iter().map(|s| s[0]).collect();
            let grad: Vec<FieldElement> = s
                .gradient()
                .iter()
                .map(|g| g.embed(&emb).evaluate(&point))
                .collect::<Result<_>>()?;
            Some(proportional(f, &grad, &kernel))
        }
    };
    Ok(OsculatingData { center, field, coeffs: kernel, point_orders: orders, contact, r, tangent_match })
}

/// A nonzero solution of `eqs * v = 0` when the solution space is a line.
fn kernel_vector(f: &FieldSpec, eqs: &[Vec<FieldElement>], n: usize) -> Option<Vec<FieldElement>> {
    let mut rows: Vec<Vec<FieldElement>> = eqs.to_vec();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][col]).unwrap();
        for c in 0..n {
            rows[rank][c] = f.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in 0..n {
                    let sub = f.mul(factor, rows[rank][c]);
                    rows[r][c] = f.sub(rows[r][c], sub);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rank + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![FieldElement::ZERO; n];
    v[free] = FieldElement::ONE;
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = f.neg(rows[r][free]);
    }
    let last = v.iter().rposition(|c| !c.is_zero())?;
    let inv = f.inv(v[last]).unwrap();
    Some(v.iter().map(|&c| f.mul(c, inv)).collect())
}

fn proportional(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> bool {
    if a.iter().all(|c| c.is_zero()) || b.iter().all(|c| c.is_zero()) {
        return false;
    }
    (0..a.len()).all(|i| (0..a.len()).all(|j| f.mul(a[i], b[j]) == f.mul(a[j], b[i])))
}

/// Everything needed to conclude Frobenius nonclassicality of a curve on a hypersurface.
#[derive(Clone, Debug)]
pub struct PipelineCertificate {
    pub q: u64,
    pub on_surface: bool,
    /// The cleared numerator of `W(phi)` is divisible by `f`.
    pub on_locus: bool,
    pub separability: Option<Separability>,
    pub frobenius: Option<OrderSeqReport>,
    pub hypotheses_witnessed: bool,
    /// Set when the hypotheses are witnessed.
    pub conclusion_fnc: Option<bool>,
    /// Whether the directly computed sequence agrees with the conclusion.
    pub cross_check: Option<bool>,
    pub outside_hypotheses: bool,
}

pub fn fnc_pipeline_verdict(
    curve: &SpaceCurveModel,
    s: &Hypersurface,
    q: u64,
    params: &OrderParams,
) -> Result<PipelineCertificate> {
    let outside = s.field().characteristic() <= s.n() as u64;
    let on_surface = membership_identity(curve, s.poly())?.holds;
    if !on_surface {
        return Ok(PipelineCertificate {
            q,
            on_surface,
            on_locus: false,
            separability: None,
            frobenius: None,
            hypotheses_witnessed: false,
            conclusion_fnc: None,
            cross_check: None,
            outside_hypotheses: outside,
        });
    }
    let w = s.w_poly(q)?;
    let on_locus = membership_identity(curve, &w)?.holds;
    let separability = gauss_restriction_separability(curve, s)?;
    let frobenius = frobenius_order_sequence(curve, q, params)?;
    let hypotheses_witnessed = on_locus && separability == Separability::Inseparable;
    let direct = !frobenius.is_standard();
    let conclusion_fnc = hypotheses_witnessed.then_some(true);
    let cross_check = conclusion_fnc.map(|c| c == direct);
    Ok(PipelineCertificate {
        q,
        on_surface,
        on_locus,
        separability: Some(separability),
        outside_hypotheses: outside || frobenius.outside_hypotheses,
        frobenius: Some(frobenius),
        hypotheses_witnessed,
        conclusion_fnc,
        cross_check,
    })
}
