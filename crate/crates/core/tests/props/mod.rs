//! Seeded property suites, shared by the `properties` and `acceptance` targets.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{RngSeed, TestCaseError, TestRunner};

use fnc_core::counting::{count_affine, count_projective};
use fnc_core::curve::{
    drops_one, find_centers, frobenius_order_sequence, order_sequence, Center, CurveChart, OrderParams,
    RationalFunction, SpaceCurveModel,
};
use fnc_core::projective::DEFAULT_GUARD;
use fnc_core::series::{binomial_mod_p, hasse_shift, mul_trunc};
use fnc_core::{make_field, Error, FieldElement, FieldSpec, Monomial, MultiPoly};

pub const CASES: u32 = 256;

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("gf: Frobenius additivity and root round trips", gf_frobenius_and_roots),
    ("mpoly: division invariant G = QF + R", mpoly_division),
    ("mpoly: p-power-root round trip", mpoly_p_power_root),
    ("mpoly: Euler identity when p does not divide d", mpoly_euler),
    ("series: Hasse composition", series_hasse_composition),
    ("series: Hensel residual vanishes", series_hensel_residual),
    ("curve: greedy eps equals brute force, nu drops one entry", curve_greedy_general),
    ("curve: same on p-power curves", curve_greedy_p_power),
    ("counting: parallel equals serial", counting_parallel),
    ("counting: hyperplanes and affine/projective consistency", counting_consistency),
];

fn run<S: Strategy>(
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = ProptestConfig {
        cases: CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

const FIELDS: [(u64, u32); 7] = [(5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)];

fn field(i: usize) -> Arc<FieldSpec> {
    let (p, h) = FIELDS[i % FIELDS.len()];
    make_field(p, h, None).unwrap()
}

fn elt(f: &FieldSpec, code: u64) -> FieldElement {
    f.element(code % f.order()).unwrap()
}

type Terms = Vec<(Vec<u16>, u64)>;

fn poly(f: &Arc<FieldSpec>, nvars: usize, terms: &[(Vec<u16>, u64)]) -> MultiPoly {
    MultiPoly::from_terms(
        f.clone(),
        nvars,
        terms.iter().map(|(e, c)| (Monomial::from_exponents(&e[..nvars]), elt(f, *c))),
    )
}

fn terms(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), any::<u64>()), 1..=max_terms)
}

/// Random forms of degree `d`: each term's last exponent absorbs the remainder.
fn homogeneous(f: &Arc<FieldSpec>, nvars: usize, d: u16, raw: &[(Vec<u16>, u64)]) -> MultiPoly {
    let terms = raw.iter().map(|(e, c)| {
        let mut left = d;
        let mut exps = vec![0u16; nvars];
        for (slot, &x) in exps.iter_mut().zip(e).take(nvars - 1) {
            *slot = x.min(left);
            left -= *slot;
        }
        exps[nvars - 1] = left;
        (Monomial::from_exponents(&exps), elt(f, *c))
    });
    MultiPoly::from_terms(f.clone(), nvars, terms)
}

pub fn gf_frobenius_and_roots() -> Result<(), String> {
    run(0x6766, (0usize..7, any::<u64>(), any::<u64>(), 0u64..6), |(fi, a, b, k)| {
        let f = field(fi);
        let (a, b) = (elt(&f, a), elt(&f, b));
        let sum = f.add(a, b);
        prop_assert_eq!(f.frobenius_power(sum, k), f.add(f.frobenius_power(a, k), f.frobenius_power(b, k)));
        prop_assert_eq!(f.frobenius_power(f.mul(a, b), k), f.mul(f.frobenius_power(a, k), f.frobenius_power(b, k)));
        prop_assert_eq!(f.pow(a, f.characteristic()), f.frobenius_power(a, 1));
        prop_assert_eq!(f.p_power_root(f.frobenius_power(a, k), k), a);
        prop_assert_eq!(f.frobenius_power(f.p_power_root(a, k), k), a);
        if let Some(ai) = f.inv(a) {
            prop_assert_eq!(f.mul(a, ai), f.one());
        }
        Ok(())
    })
}

pub fn mpoly_division() -> Result<(), String> {
    run(0x6d70, (0usize..7, terms(3, 5, 8), terms(3, 3, 4)), |(fi, g, d)| {
        let f = field(fi);
        let g = poly(&f, 3, &g);
        let d = poly(&f, 3, &d);
        prop_assume!(!d.is_zero());
        let (q, r) = g.divide(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, g);
        let lead = d.leading_term().unwrap().0.clone();
        prop_assert!(r.terms().all(|(m, _)| !lead.divides(m)));
        Ok(())
    })
}

pub fn mpoly_p_power_root() -> Result<(), String> {
    run(0x7072, (0usize..7, terms(3, 3, 6), 1u32..3), |(fi, g, r)| {
        let f = field(fi);
        let g = poly(&f, 3, &g);
        let pr = f.characteristic().pow(r);
        prop_assume!(g.total_degree().unwrap_or(0) as u64 * pr < u16::MAX as u64);
        let big = g.pow(pr);
        prop_assert_eq!(big.p_power_root(r), Some(g.clone()));
        let (k, root) = big.max_p_power_root();
        prop_assert!(k >= r || g.is_constant());
        prop_assert_eq!(root.pow(f.characteristic().pow(k)), big);
        Ok(())
    })
}

pub fn mpoly_euler() -> Result<(), String> {
    run(0x6575, (0usize..7, 1u16..7, terms(4, 6, 6)), |(fi, d, raw)| {
        let f = field(fi);
        prop_assume!(d as u64 % f.characteristic() != 0);
        let form = homogeneous(&f, 4, d, &raw);
        prop_assume!(!form.is_zero());
        let mut lhs = MultiPoly::zero(f.clone(), 4);
        for (i, fi) in form.gradient().iter().enumerate() {
            lhs = &lhs + &(&MultiPoly::var(f.clone(), 4, i) * fi);
        }
        prop_assert_eq!(lhs, form.scale(f.from_int(d as i64)));
        Ok(())
    })
}

pub fn series_hasse_composition() -> Result<(), String> {
    let strategy = (0usize..7, prop::collection::vec(any::<u64>(), 40), 0usize..16, 0usize..16);
    run(0x6861, strategy, |(fi, coeffs, i, j)| {
        let f = field(fi);
        let s: Vec<FieldElement> = coeffs.iter().map(|&c| elt(&f, c)).collect();
        let lhs = hasse_shift(&f, &hasse_shift(&f, &s, j), i);
        let c = f.from_int(binomial_mod_p((i + j) as u64, i as u64, f.characteristic()) as i64);
        let rhs: Vec<FieldElement> = hasse_shift(&f, &s, i + j).into_iter().map(|x| f.mul(c, x)).collect();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

/// `terms + y + 1` with coordinates `(1, x, y)`.
fn plane_curve(f: &Arc<FieldSpec>, terms: &[(Vec<u16>, u64)]) -> Option<SpaceCurveModel> {
    let plane = &(&poly(f, 2, terms) + &MultiPoly::var(f.clone(), 2, 1)) + &MultiPoly::one(f.clone(), 2);
    let coords = (0..3)
        .map(|i| {
            let p = if i == 0 { MultiPoly::one(f.clone(), 2) } else { MultiPoly::var(f.clone(), 2, i - 1) };
            RationalFunction::polynomial(p)
        })
        .collect();
    SpaceCurveModel::new(plane, coords).ok()
}

fn low_degree(raw: &[(Vec<u16>, u64)]) -> Terms {
    raw.iter().filter(|(e, _)| e[0] + e[1] <= 4).cloned().collect()
}

pub fn series_hensel_residual() -> Result<(), String> {
    run(0x6865, (0usize..7, terms(2, 4, 6), 1u32..3, any::<u64>()), |(fi, raw, m, seed)| {
        let f = field(fi);
        let Some(curve) = plane_curve(&f, &low_degree(&raw)) else { return Ok(()) };
        let Ok(chart) = CurveChart::new(&curve, m) else { return Ok(()) };
        for c in chart.sample_centers(3, seed) {
            let e = chart.expand(c, 24).unwrap();
            prop_assert_eq!(e.y[0], c.y);
            prop_assert!(chart.residual(&e).iter().all(|r| r.is_zero()));
        }
        Ok(())
    })
}

fn det_series(field: &FieldSpec, rows: &[Vec<Vec<FieldElement>>], len: usize) -> Vec<FieldElement> {
    let mut perm: Vec<usize> = (0..rows.len()).collect();
    let mut total = vec![FieldElement::ZERO; len];
    permute(&mut perm, 0, &mut |p, even| {
        let mut prod = vec![FieldElement::ZERO; len];
        prod[0] = field.one();
        for (r, &c) in p.iter().enumerate() {
            prod = mul_trunc(field, &prod, &rows[r][c], len);
        }
        for (t, x) in total.iter_mut().zip(prod) {
            *t = if even { field.add(*t, x) } else { field.sub(*t, x) };
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], bool)) {
    if k == p.len() {
        let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]);
        visit(p, inversions.count() % 2 == 0);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Lex-first increasing triple of derivative orders with a nonzero Wronskian, minimized over centers.
fn brute_force_eps(chart: &CurveChart, centers: &[Center], cap: u32, n: usize) -> Option<Vec<u32>> {
    let f = chart.field();
    let mut best: Option<Vec<u32>> = None;
    for &c in centers {
        let e = chart.expand(c, n).unwrap();
        let found = (0..=cap).find_map(|a| {
            (a + 1..=cap).find_map(|b| {
                (b + 1..=cap).find_map(|d| {
                    let rows: Vec<Vec<Vec<FieldElement>>> = [a, b, d]
                        .iter()
                        .map(|&k| e.coords.iter().map(|s| hasse_shift(f, s, k as usize)).collect())
                        .collect();
                    let det = det_series(f, &rows, n - d as usize);
                    det.iter().any(|x| !x.is_zero()).then(|| vec![a, b, d])
                })
            })
        });
        if let Some(s) = found {
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    best
}

fn check_against_brute_force(curve: &SpaceCurveModel) -> Result<(), TestCaseError> {
    let params = OrderParams { m: Some(2), cap: Some(8), ..OrderParams::default() };
    let Ok(set) = find_centers(curve, 2, params.count, params.seed) else {
        return Ok(());
    };
    let brute = brute_force_eps(&set.chart, &set.centers, 8, 64);
    match order_sequence(curve, 5, &params) {
        Ok(rep) => {
            prop_assert!(rep.all_certified());
            prop_assert_eq!(Some(rep.sequence.clone()), brute);
            let nu = frobenius_order_sequence(curve, 5, &params).unwrap();
            prop_assert!(drops_one(&rep.sequence, &nu.sequence), "{:?} {:?}", rep.sequence, nu.sequence);
        }
        Err(Error::CapExhausted { .. }) => prop_assert_eq!(brute, None),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

pub fn curve_greedy_general() -> Result<(), String> {
    run(0x6f72, terms(2, 4, 6), |raw| {
        let f = make_field(5, 1, None).unwrap();
        let Some(curve) = plane_curve(&f, &low_degree(&raw)) else { return Ok(()) };
        check_against_brute_force(&curve)
    })
}

/// Exponents in `{0, 1, 5}` give curves such as `y = x^5 + x` with large orders.
pub fn curve_greedy_p_power() -> Result<(), String> {
    run(0x6f73, terms(2, 2, 5), |raw| {
        let f = make_field(5, 1, None).unwrap();
        let spread: Terms = raw.iter().map(|(e, c)| (e.iter().map(|&x| [0, 1, 5][x as usize]).collect(), *c)).collect();
        let Some(curve) = plane_curve(&f, &spread) else { return Ok(()) };
        check_against_brute_force(&curve)
    })
}

pub fn counting_parallel() -> Result<(), String> {
    run(0x636e, (0usize..4, 1u16..4, terms(4, 3, 5), 3usize..5), |(fi, d, raw, nv)| {
        let f = field(fi);
        let form = homogeneous(&f, nv, d, &raw);
        prop_assume!(!form.is_zero());
        let serial = count_projective(&form, DEFAULT_GUARD, 1).unwrap();
        let parallel = count_projective(&form, DEFAULT_GUARD, 4).unwrap();
        prop_assert_eq!(serial.count, parallel.count);
        prop_assert_eq!(serial.singular, parallel.singular);
        let affine = form.dehomogenize(0);
        prop_assert_eq!(
            count_affine(&affine, DEFAULT_GUARD, 1).unwrap().count,
            count_affine(&affine, DEFAULT_GUARD, 3).unwrap().count
        );
        Ok(())
    })
}

pub fn counting_consistency() -> Result<(), String> {
    run(0x6363, (0usize..4, 1usize..4, terms(4, 2, 5), 1u16..3), |(fi, n, raw, d)| {
        let f = field(fi);
        let q = f.order() as u128;
        let plane = MultiPoly::var(f.clone(), n + 1, n);
        prop_assert_eq!(count_projective(&plane, DEFAULT_GUARD, 0).unwrap().count, (q.pow(n as u32) - 1) / (q - 1));

        let form = homogeneous(&f, 3, d, &raw);
        prop_assume!(!form.is_zero());
        let total = count_projective(&form, DEFAULT_GUARD, 0).unwrap().count;
        let chart = count_affine(&form.dehomogenize(0).remap_variables(2, &[0, 0, 1]), DEFAULT_GUARD, 0).unwrap().count;
        let infinity = form.filter_terms(|m| m.exponents()[0] == 0);
        let at_infinity = if infinity.is_zero() {
            q + 1
        } else {
            count_projective(&infinity.remap_variables(2, &[0, 0, 1]), DEFAULT_GUARD, 0).unwrap().count
        };
        prop_assert_eq!(total, chart + at_infinity);
        Ok(())
    })
}
