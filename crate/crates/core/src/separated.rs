//! Hypersurfaces with separated variables `F = G + H`: split detection, the
//! Kummer cover criterion, the `A, B, C` decomposition and the diagonal-tail
//! criterion over `F_q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldElement};
use crate::mpoly::{Monomial, MultiPoly};

/// `F = G + H` with `G` and `H` on disjoint variable sets.
#[derive(Clone, Debug)]
pub struct SeparatedSplit {
    pub g_vars: Vec<usize>,
    pub h_vars: Vec<usize>,
    pub g: MultiPoly,
    pub h: MultiPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct KummerReport {
    pub d: u32,
    pub q: u64,
    pub k: Option<u64>,
    pub k_integral: bool,
    pub p_divides_k: bool,
    pub identity_holds: bool,
    pub verdict: bool,
    /// The criterion is stated for smooth hypersurfaces, which is not checked.
    pub smoothness_proviso: bool,
}

#[derive(Clone, Debug)]
pub struct AbcDecomposition {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct Thm46Report {
    pub d: u32,
    pub q: u64,
    /// Every `r >= 1` with `d = (q-1)/(p^r-1)`.
    pub candidates: Vec<u32>,
    pub r: Option<u32>,
    pub abc: Option<AbcDecomposition>,
    pub abc_ok: bool,
    pub dual_identity_ok: bool,
    pub ratios_ok: bool,
    pub verdict: bool,
    /// The base locus of the diagonal tail is assumed nonsingular on `F = 0`.
    pub regularity_proviso: bool,
}

/// Groups the variables of `F` by monomial co-occurrence and splits them in two.
///
/// Non-singleton components go to `G` (the first of them if there are
/// several, the rest to `H`) and singleton components to `H`. If every
/// component is a single variable, `H` is the last one.
pub fn split_separated(f: &MultiPoly) -> Option<SeparatedSplit> {
    let comps = components(f);
    if comps.len() < 2 {
        return None;
    }
    let mut g_vars = Vec::new();
    let mut h_vars = Vec::new();
    if comps.iter().all(|c| c.len() == 1) {
        for (i, c) in comps.iter().enumerate() {
            if i + 1 == comps.len() {
                h_vars.extend(c)
            } else {
                g_vars.extend(c)
            }
        }
    } else {
        let mut taken = false;
        for c in &comps {
            if c.len() > 1 && !taken {
                g_vars.extend(c);
                taken = true;
            } else {
                h_vars.extend(c);
            }
        }
    }
    g_vars.sort_unstable();
    h_vars.sort_unstable();
    let on = |vars: &[usize]| {
        let vars = vars.to_vec();
        f.filter_terms(move |m| m.exponents().iter().enumerate().any(|(i, &e)| e > 0 && vars.contains(&i)))
    };
    let g = on(&g_vars);
    let h = on(&h_vars);
    Some(SeparatedSplit { g_vars, h_vars, g, h })
}

/// Connected components of the co-occurrence graph on the support, ordered by least index.
fn components(f: &MultiPoly) -> Vec<Vec<usize>> {
    let n = f.nvars();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for (m, _) in f.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exponents()[i] > 0).collect();
        for w in vars.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let support = f.support();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in support {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => comps[k].push(i),
            None => {
                roots.push(r);
                comps.push(vec![i]);
            }
        }
    }
    comps
}

fn characteristic_exponent(f: &MultiPoly, q: u64) -> Result<u32> {
    let p = f.field().characteristic();
    match prime_power(q) {
        Some((base, k)) if base == p => Ok(k),
        _ => Err(Error::NotAPowerOfP(q, p)),
    }
}

/// Checks `F = G(X_0..X_{n-1}) + c X_n^d` against `kd = d - 1 + q`, `p | k`
/// and `G'^k = sum G'_i X_i^q` where `G' = -G/c`.
pub fn kummer_check(f: &MultiPoly, q: u64) -> Result<KummerReport> {
    characteristic_exponent(f, q)?;
    let nv = f.nvars();
    if nv < 2 {
        return Err(Error::WrongShape("need at least two variables".into()));
    }
    let last = nv - 1;
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongShape("polynomial is zero or not homogeneous".into()))?;
    let tail = Monomial::var(nv, last, d as u16);
    let c = f.coefficient(&tail);
    let g = f.filter_terms(|m| m.exponents()[last] == 0);
    if c.is_zero() || g.num_terms() + 1 != f.num_terms() || g.is_zero() {
        return Err(Error::WrongShape(format!(
            "expected G(X0..X{}) + c*X{last}^d",
            last.saturating_sub(1)
        )));
    }
    if d <= 2 {
        return Err(Error::Precondition(format!("degree {d} must exceed 2")));
    }
    let field = f.field().clone();
    let p = field.characteristic();
    let scale = field.neg(field.inv(c).expect("nonzero"));
    let g = g.scale(scale);
    let num = d as u64 - 1 + q;
    let k_integral = num % d as u64 == 0;
    let k = k_integral.then_some(num / d as u64);
    let p_divides_k = k.is_some_and(|k| k % p == 0);
    let identity_holds = match k {
        Some(k) => {
            let lhs = g.pow(k);
            let rhs = (0..last).fold(MultiPoly::zero(field.clone(), nv), |acc, i| {
                let xq = Monomial::var(nv, i, q as u16);
                &acc + &g.partial_derivative(i).mul_term(FieldElement::ONE, &xq)
            });
            lhs == rhs
        }
        None => false,
    };
    Ok(KummerReport {
        d,
        q,
        k,
        k_integral,
        p_divides_k,
        identity_holds,
        verdict: k_integral && p_divides_k && identity_holds,
        smoothness_proviso: true,
    })
}

/// Writes a ternary form as `A^(p^r) X0 + B^(p^r) X1 + C^(p^r) X2`.
///
/// Returns `Ok(None)` when some monomial fits no slot.
pub fn abc_decompose(g: &MultiPoly, r: u32) -> Result<Option<AbcDecomposition>> {
    if g.nvars() != 3 {
        return Err(Error::WrongShape("expected a form in three variables".into()));
    }
    let d = g
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongShape("polynomial is zero or not homogeneous".into()))?;
    let p = g.field().characteristic();
    let pr = p
        .checked_pow(r)
        .ok_or_else(|| Error::Precondition("p^r overflows".into()))?;
    if r == 0 || (d as u64).saturating_sub(1) % pr != 0 || d == 0 {
        return Err(Error::Precondition(format!("p^r = {pr} must divide d - 1 = {}", d as i64 - 1)));
    }
    let field = g.field().clone();
    let mut slots: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); 3];
    for (m, c) in g.terms() {
        let res: Vec<u64> = m.exponents().iter().map(|&e| e as u64 % pr).collect();
        let Some(j) = (0..3).find(|&j| (0..3).all(|i| res[i] == u64::from(i == j))) else {
            return Ok(None);
        };
        let mut e = m.exponents().to_vec();
        e[j] -= 1;
        slots[j].push((Monomial::from_exponents(&e), c));
    }
    let mut roots = slots.into_iter().map(|terms| {
        MultiPoly::from_terms(field.clone(), 3, terms)
            .p_power_root(r)
            .expect("residues make every exponent divisible by p^r")
    });
    let (a, b, c) = (roots.next().unwrap(), roots.next().unwrap(), roots.next().unwrap());
    Ok(Some(AbcDecomposition { a, b, c }))
}

/// Checks the criterion for `F = G(X0, X1, X2) + sum_{i >= 3} a_i X_i^d`, `n > 3`.
pub fn thm46_check(f: &MultiPoly, q: u64) -> Result<Thm46Report> {
    let k = characteristic_exponent(f, q)?;
    let nv = f.nvars();
    if nv < 5 {
        return Err(Error::WrongShape("need n > 3, i.e. at least five variables".into()));
    }
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongShape("polynomial is zero or not homogeneous".into()))?;
    let field = f.field().clone();
    let a: Vec<FieldElement> = (3..nv).map(|i| f.coefficient(&Monomial::var(nv, i, d as u16))).collect();
    let g_full = f.filter_terms(|m| m.exponents()[3..].iter().all(|&e| e == 0));
    if a.iter().any(|c| c.is_zero()) || g_full.num_terms() + a.len() != f.num_terms() || g_full.is_zero() {
        return Err(Error::WrongShape(
            "expected G(X0,X1,X2) + a3*X3^d + ... + an*Xn^d with every a_i nonzero".into(),
        ));
    }
    let g = g_full.remap_variables(3, &{
        let mut map = vec![0; nv];
        map[1] = 1;
        map[2] = 2;
        map
    });
    let p = field.characteristic();
    let candidates: Vec<u32> = (1..=k)
        .filter(|&r| {
            let pr = p.pow(r);
            (q - 1) % (pr - 1) == 0 && (q - 1) / (pr - 1) == d as u64
        })
        .collect();
    let mut report = Thm46Report {
        d,
        q,
        candidates: candidates.clone(),
        r: None,
        abc: None,
        abc_ok: false,
        dual_identity_ok: false,
        ratios_ok: false,
        verdict: false,
        regularity_proviso: true,
    };
    let Some(&r) = candidates.first() else {
        return Ok(report);
    };
    report.r = Some(r);
    let an = *a.last().unwrap();
    let an_inv = field.inv(an).expect("nonzero");
    report.ratios_ok = a[..a.len() - 1]
        .iter()
        .all(|&ai| field.fixed_by_frobenius(field.mul(ai, an_inv), r as u64));
    if let Some(abc) = abc_decompose(&g, r)? {
        report.abc_ok = true;
        let e = (q / p.pow(r)) as u16;
        let dual = [&abc.a, &abc.b, &abc.c]
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(field.clone(), 3), |acc, (i, u)| {
                &acc + &u.mul_term(FieldElement::ONE, &Monomial::var(3, i, e))
            });
        report.dual_identity_ok = dual == g;
        report.abc = Some(abc);
    }
    report.verdict = report.abc_ok && report.dual_identity_ok && report.ratios_ok;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::hypersurface::{FncStatus, Hypersurface};
    use crate::mpoly::parse_poly;

    #[test]
    fn split_examples() {
        let f9 = make_field(3, 2, None).unwrap();
        let s = split_separated(&parse_poly("X0^4+X1^4+X2^4-X3^4", 4, &f9).unwrap()).unwrap();
        assert_eq!((s.g_vars, s.h_vars), (vec![0, 1, 2], vec![3]));
        assert_eq!(s.h, parse_poly("-X3^4", 4, &f9).unwrap());
        assert!(split_separated(&parse_poly("X0X1+X1X2+X2X0", 3, &f9).unwrap()).is_none());
        let f125 = make_field(5, 3, None).unwrap();
        let garcia = parse_poly(GARCIA, 4, &f125).unwrap();
        let s = split_separated(&garcia).unwrap();
        assert_eq!((s.g_vars.clone(), s.h_vars.clone()), (vec![0, 2], vec![1, 3]));
        assert_eq!(s.h, parse_poly("Y^31 + W^31", 4, &f125).unwrap());
        assert_eq!(&s.g + &s.h, garcia);
    }

    pub(crate) const GARCIA: &str = "(X^6+Z^6)^5X + (X^5+XZ^4)^5Z^6 + Y^31 + W^31";

    #[test]
    fn kummer_examples() {
        let f9 = make_field(3, 2, None).unwrap();
        let f = parse_poly("X0^4+X1^4+X2^4-X3^4", 4, &f9).unwrap();
        let rep = kummer_check(&f, 9).unwrap();
        assert_eq!(rep.k, Some(3));
        assert!(rep.k_integral && rep.p_divides_k && rep.identity_holds && rep.verdict);
        let g = Hypersurface::new(parse_poly("X0^4+X1^4+X2^4", 3, &f9).unwrap()).unwrap();
        assert_eq!(g.fnc_test(9).unwrap().status, FncStatus::FrobeniusNonclassical);
        let whole = Hypersurface::new(f).unwrap();
        assert_eq!(whole.fnc_test(9).unwrap().status, FncStatus::FrobeniusNonclassical);

        let f5 = make_field(5, 1, None).unwrap();
        let rep = kummer_check(&parse_poly("X0^3+X1^3+X2^3-X3^3", 4, &f5).unwrap(), 5).unwrap();
        assert_eq!(rep.k, None);
        assert!(!rep.verdict);
        assert!(matches!(
            kummer_check(&parse_poly("X0^2+X1^2-X2^2", 3, &f5).unwrap(), 5),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            kummer_check(&parse_poly("X0^3+X1^2X2", 3, &f5).unwrap(), 5),
            Err(Error::WrongShape(_))
        ));
    }

    #[test]
    fn abc_examples() {
        let f9 = make_field(3, 2, None).unwrap();
        let g = parse_poly("X0^4+X1^4+X2^4", 3, &f9).unwrap();
        let abc = abc_decompose(&g, 1).unwrap().unwrap();
        assert_eq!(abc.a, MultiPoly::var(f9.clone(), 3, 0));
        assert_eq!(abc.b, MultiPoly::var(f9.clone(), 3, 1));
        assert_eq!(abc.c, MultiPoly::var(f9.clone(), 3, 2));
        assert!(abc_decompose(&parse_poly("X0^2X1^2", 3, &f9).unwrap(), 1).unwrap().is_none());
        assert!(abc_decompose(&parse_poly("X0^3", 3, &f9).unwrap(), 1).is_err());
        let h = parse_poly("X0^3X1 + u*X0X2^3 + X1^4 + 2X0X1^3 + X2X0^3", 3, &f9).unwrap();
        let abc = abc_decompose(&h, 1).unwrap().unwrap();
        let x = |i| MultiPoly::var(f9.clone(), 3, i);
        let back = &(&(&abc.a.pow(3) * &x(0)) + &(&abc.b.pow(3) * &x(1))) + &(&abc.c.pow(3) * &x(2));
        assert_eq!(back, h);
    }

    #[test]
    fn thm46_pair() {
        let f9 = make_field(3, 2, None).unwrap();
        let pos = parse_poly("X0^4+X1^4+X2^4+2X3^4+X4^4", 5, &f9).unwrap();
        let rep = thm46_check(&pos, 9).unwrap();
        assert_eq!(rep.r, Some(1));
        assert!(rep.verdict);
        let s = Hypersurface::new(pos).unwrap();
        assert_eq!(s.fnc_test(9).unwrap().status, FncStatus::FrobeniusNonclassical);
        let neg = parse_poly("X0^4+X1^4+X2^4+u*X3^4+X4^4", 5, &f9).unwrap();
        let rep = thm46_check(&neg, 9).unwrap();
        assert!(rep.abc_ok && rep.dual_identity_ok && !rep.ratios_ok && !rep.verdict);
        let quint = parse_poly("X0^5+X1^5+X2^5+X3^5+X4^5", 5, &f9).unwrap();
        let rep = thm46_check(&quint, 9).unwrap();
        assert!(rep.candidates.is_empty() && !rep.verdict);
        assert!(thm46_check(&parse_poly("X0^4+X1^4+X2^4+X3^4", 4, &f9).unwrap(), 9).is_err());
    }
}
