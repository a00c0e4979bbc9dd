//! Enumeration of projective and affine point sets over a finite field.
//!
//! Projective points are normalized so that the first nonzero coordinate is
//! one. The canonical order is lexicographic on coordinate codes, which puts
//! `(0:...:0:1)` first and the chart `X0 = 1` last.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_GUARD: u128 = 100_000_000;

const CHUNK: u128 = 4096;

/// `P^n(F)` as an indexed set in canonical order.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: Arc<FieldSpec>,
    n: usize,
}

impl ProjectiveSpace {
    pub fn new(field: Arc<FieldSpec>, n: usize) -> Self {
        ProjectiveSpace { field, n }
    }

    pub fn len(&self) -> u128 {
        let q = self.field.order() as u128;
        (0..=self.n as u32).fold(0u128, |acc, k| acc.saturating_add(q.saturating_pow(k)))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The point at position `idx` of the canonical order.
    pub fn point(&self, idx: u128) -> Vec<FieldElement> {
        let q = self.field.order() as u128;
        let mut rest = idx;
        // Block with leading one at position k holds q^(n-k) points; blocks run k = n, n-1, ..., 0.
        for k in (0..=self.n).rev() {
            let size = q.pow((self.n - k) as u32);
            if rest < size {
                let mut pt = vec![FieldElement::ZERO; self.n + 1];
                pt[k] = FieldElement::ONE;
                fill_digits(&mut pt[k + 1..], rest, q);
                return pt;
            }
            rest -= size;
        }
        panic!("point index out of range");
    }

    /// Advances `pt` to its successor; returns false past the last point.
    fn advance(&self, pt: &mut [FieldElement]) -> bool {
        let q = self.field.order();
        let lead = pt.iter().position(|c| !c.is_zero()).expect("normalized point");
        if odometer(&mut pt[lead + 1..], q) {
            return true;
        }
        if lead == 0 {
            return false;
        }
        pt[lead] = FieldElement::ZERO;
        pt[lead - 1] = FieldElement::ONE;
        true
    }
}

/// Writes `value` in base `q` into `digits`, most significant first.
fn fill_digits(digits: &mut [FieldElement], mut value: u128, q: u128) {
    for d in digits.iter_mut().rev() {
        *d = FieldElement::from_code((value % q) as u64);
        value /= q;
    }
}

/// Increments a base-`q` counter, most significant digit first; false on wraparound.
fn odometer(digits: &mut [FieldElement], q: u64) -> bool {
    for d in digits.iter_mut().rev() {
        let next = d.code() + 1;
        if next < q {
            *d = FieldElement::from_code(next);
            return true;
        }
        *d = FieldElement::ZERO;
    }
    false
}

fn check_guard(candidates: u128, guard: u128) -> Result<()> {
    if candidates > guard {
        return Err(Error::GuardExceeded { candidates, guard });
    }
    Ok(())
}

/// Runs `f` on a pool with `threads` workers; zero means the global pool.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

fn chunks(total: u128) -> Vec<(u128, u128)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

/// All points of `P^n(F)` satisfying `pred`, in canonical order.
pub fn projective_filter<P>(
    space: &ProjectiveSpace,
    guard: u128,
    pred: P,
) -> Result<Vec<Vec<FieldElement>>>
where
    P: Fn(&[FieldElement]) -> bool + Sync,
{
    let total = space.len();
    check_guard(total, guard)?;
    let parts: Vec<Vec<Vec<FieldElement>>> = chunks(total)
        .into_par_iter()
        .map(|(start, end)| {
            let mut pt = space.point(start);
            let mut hits = Vec::new();
            for i in start..end {
                if pred(&pt) {
                    hits.push(pt.clone());
                }
                if i + 1 < end {
                    space.advance(&mut pt);
                }
            }
            hits
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Number of points of `P^n(F)` satisfying `pred`.
pub fn projective_count<P>(space: &ProjectiveSpace, guard: u128, pred: P) -> Result<u128>
where
    P: Fn(&[FieldElement]) -> bool + Sync,
{
    let total = space.len();
    check_guard(total, guard)?;
    Ok(chunks(total)
        .into_par_iter()
        .map(|(start, end)| {
            let mut pt = space.point(start);
            let mut hits = 0u128;
            for i in start..end {
                if pred(&pt) {
                    hits += 1;
                }
                if i + 1 < end {
                    space.advance(&mut pt);
                }
            }
            hits
        })
        .sum())
}

/// All points of `F^k` satisfying `pred`, in lexicographic order.
pub fn affine_filter<P>(
    field: &FieldSpec,
    k: usize,
    guard: u128,
    pred: P,
) -> Result<Vec<Vec<FieldElement>>>
where
    P: Fn(&[FieldElement]) -> bool + Sync,
{
    let q = field.order() as u128;
    let total = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    check_guard(total, guard)?;
    let parts: Vec<Vec<Vec<FieldElement>>> = chunks(total)
        .into_par_iter()
        .map(|(start, end)| {
            let mut pt = vec![FieldElement::ZERO; k];
            fill_digits(&mut pt, start, q);
            let mut hits = Vec::new();
            for _ in start..end {
                if pred(&pt) {
                    hits.push(pt.clone());
                }
                odometer(&mut pt, q as u64);
            }
            hits
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Number of points of `F^k` satisfying `pred`.
pub fn affine_count<P>(field: &FieldSpec, k: usize, guard: u128, pred: P) -> Result<u128>
where
    P: Fn(&[FieldElement]) -> bool + Sync,
{
    let q = field.order() as u128;
    let total = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    check_guard(total, guard)?;
    Ok(chunks(total)
        .into_par_iter()
        .map(|(start, end)| {
            let mut pt = vec![FieldElement::ZERO; k];
            fill_digits(&mut pt, start, q);
            let mut hits = 0u128;
            for _ in start..end {
                if pred(&pt) {
                    hits += 1;
                }
                odometer(&mut pt, q as u64);
            }
            hits
        })
        .sum())
}

/// Formats a projective point as `(a:b:...)`.
pub fn format_point(field: &FieldSpec, pt: &[FieldElement]) -> String {
    let parts: Vec<String> = pt.iter().map(|&c| field.format(c)).collect();
    format!("({})", parts.join(":"))
}
