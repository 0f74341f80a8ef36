//! Unitarity of highest weights: g₀-dominance and g₀-unitarity, the odd
//! interlocking chain, the integral classification, the open region C, its
//! boundary candidates, and absolute protectedness.
//!
//! The integral predicate is `g₀-unitary ∧ interlocking ∧ ((i) ∨ (ii))` with
//!
//! * (i)  `g₂ ≤ −len₁ − q` and `g₁ ≥ len₃`,
//! * (ii) `g₁ = 0`, `len₃ = 0` and `g₂ ≤ −len₁ − len₂`,
//!
//! where `g₁ = λᵐ + μⁿ`, `g₂ = λ¹ + μ¹`, `g₃ = λ¹ − λᵐ`. The first inequality
//! of (i) is `(Λ+ρ, ε_{i₀} − δ₁) ≤ 0`, the second `(Λ+ρ, εₘ − δ_{len₃+1}) ≥ 0`.
//! On sl(2|1) the predicate carves out `{g₁ ≥ 0, g₂ ≤ −1} ∪ {g₁ = 0, g₂ ≤ 0}`
//! for every rational weight.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::atypicality::atypicality_degree;
use crate::error::{Error, Result};
use crate::rational::{pair_as_str, q, Q};
use crate::rootdata::RootDatum;
use crate::weights::{is_integral, jakobsen_params, rho_pairing, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    InteriorC,
    BoundaryCandidate,
    OutsideAtypical,
    NotUnitary,
    NonIntegralUndetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitarityVerdict {
    pub g0_dominant: bool,
    pub g0_unitary: bool,
    pub odd_interlocking: bool,
    /// `None` when the weight is not integral.
    pub g_unitary_integral: Option<bool>,
    pub region: Region,
    pub absolutely_protected: bool,
    /// `((Λ+ρ, ε_p − δ₁), (Λ+ρ, ε_{p+1} − δₙ))`
    #[serde(with = "pair_as_str")]
    pub pairings: (Q, Q),
    #[serde(with = "crate::rational::as_str")]
    pub g1: Q,
    #[serde(with = "crate::rational::as_str")]
    pub g2: Q,
    #[serde(with = "crate::rational::as_str")]
    pub g3: Q,
    pub atypicality: usize,
    /// Membership was decided from necessary conditions only.
    pub partial: bool,
}

fn chain_ok(xs: &[Q]) -> bool {
    xs.windows(2).all(|p| {
        let d = &p[0] - &p[1];
        d.is_integer() && !d.is_negative()
    })
}

/// Compact dominance: the chains λ¹ ≥ … ≥ λᵖ, λ^{p+1} ≥ … ≥ λᵐ, μ¹ ≥ … ≥ μⁿ
/// with integral gaps.
pub fn compact_dominant(w: &Weight, datum: &RootDatum) -> bool {
    let p = datum.p;
    chain_ok(&w.lam[..p]) && chain_ok(&w.lam[p..]) && chain_ok(&w.mu)
}

/// Compact dominance plus `λᵐ ≥ λ¹` when both noncompact blocks are present.
pub fn g0_dominance(w: &Weight, datum: &RootDatum) -> bool {
    if w.check_dims(datum).is_err() || !compact_dominant(w, datum) {
        return false;
    }
    if datum.p == 0 || datum.q == 0 {
        return true;
    }
    w.lam[datum.m - 1] >= w.lam[0]
}

/// `𝛌 < −m + max(i₀, j₀) + 1`, or `𝛌` in `{−m + max(i₀,j₀) + 1, …, −m + i₀ + j₀}`.
pub fn g0_unitarity(w: &Weight, datum: &RootDatum) -> bool {
    if !g0_dominance(w, datum) {
        return false;
    }
    if datum.p == 0 || datum.q == 0 {
        return true;
    }
    let j = jakobsen_params(w, datum).expect("split checked above");
    let m = datum.m as i64;
    let threshold = q(-m + j.i0.max(j.j0) as i64 + 1);
    if j.uplambda < threshold {
        return true;
    }
    j.uplambda.is_integer() && j.uplambda <= q(-m + (j.i0 + j.j0) as i64)
}

/// The continuous part of the g₀-unitary set: `𝛌 < −m + max(i₀, j₀) + 1`.
pub fn below_continuous_threshold(w: &Weight, datum: &RootDatum) -> Result<bool> {
    let j = jakobsen_params(w, datum)?;
    let m = datum.m as i64;
    Ok(j.uplambda < q(-m + j.i0.max(j.j0) as i64 + 1))
}

/// `λ^{p+1} ≥ … ≥ λᵐ ≥ −μⁿ ≥ … ≥ −μ¹ ≥ λ¹ ≥ … ≥ λᵖ`.
pub fn odd_interlocking(w: &Weight, datum: &RootDatum) -> bool {
    if w.check_dims(datum).is_err() {
        return false;
    }
    let p = datum.p;
    let mut chain: Vec<Q> = w.lam[p..].to_vec();
    chain.extend(w.mu.iter().rev().map(|x| -x.clone()));
    chain.extend(w.lam[..p].iter().cloned());
    chain.windows(2).all(|p| p[0] >= p[1])
}

/// `(g₁, g₂, g₃) = (λᵐ + μⁿ, λ¹ + μ¹, λ¹ − λᵐ)`.
pub fn g_values(w: &Weight, datum: &RootDatum) -> (Q, Q, Q) {
    let (m, n) = (datum.m, datum.n);
    (
        &w.lam[m - 1] + &w.mu[n - 1],
        &w.lam[0] + &w.mu[0],
        &w.lam[0] - &w.lam[m - 1],
    )
}

fn odd_conditions(w: &Weight, datum: &RootDatum) -> Result<bool> {
    let j = jakobsen_params(w, datum)?;
    let (g1, g2, _) = g_values(w, datum);
    let first = g2 <= q(-((j.len1 + datum.q) as i64)) && g1 >= q(j.len3 as i64);
    let second = g1.is_zero() && j.len3 == 0 && g2 <= q(-((j.len1 + j.len2) as i64));
    Ok(first || second)
}

/// Unitarity of an integral weight; `None` when the weight is not integral.
pub fn g_unitarity_integral(w: &Weight, datum: &RootDatum) -> Result<Option<bool>> {
    w.check_dims(datum)?;
    if !is_integral(w) {
        return Ok(None);
    }
    Ok(Some(necessary(w, datum) && odd_conditions(w, datum)?))
}

/// The theorem's conditions with `g₁ ≤ len₃` in (i), kept for comparison.
pub fn g_unitarity_integral_as_printed(w: &Weight, datum: &RootDatum) -> Result<bool> {
    let j = jakobsen_params(w, datum)?;
    let (g1, g2, _) = g_values(w, datum);
    let first = g2 <= q(-((j.len1 + datum.q) as i64)) && g1 <= q(j.len3 as i64);
    let second = g1.is_zero() && j.len3 == 0 && g2 <= q(-((j.len1 + j.len2) as i64));
    Ok(odd_interlocking(w, datum) && (first || second))
}

fn necessary(w: &Weight, datum: &RootDatum) -> bool {
    g0_unitarity(w, datum) && odd_interlocking(w, datum)
}

/// `Some(unitary)` when decidable, `None` for non-integral weights that pass
/// the necessary conditions outside sl(2|1).
pub fn is_unitary(w: &Weight, datum: &RootDatum) -> Result<Option<bool>> {
    w.check_dims(datum)?;
    if datum.p == 0 || datum.q == 0 {
        return Err(Error::RequiresNoncompactSplit { p: datum.p, q: datum.q });
    }
    if !necessary(w, datum) {
        return Ok(Some(false));
    }
    let exact_everywhere = datum.m == 2 && datum.n == 1;
    if is_integral(w) || exact_everywhere {
        return Ok(Some(odd_conditions(w, datum)?));
    }
    Ok(None)
}

/// `((Λ+ρ, ε_p − δ₁), (Λ+ρ, ε_{p+1} − δₙ))`.
pub fn boundary_pairings(w: &Weight, datum: &RootDatum) -> Result<(Q, Q)> {
    if datum.p == 0 || datum.q == 0 {
        return Err(Error::RequiresNoncompactSplit { p: datum.p, q: datum.q });
    }
    let b1 = datum.odd_root(datum.p - 1, 0);
    let g2 = datum.odd_root(datum.p, datum.n - 1);
    Ok((rho_pairing(w, &b1, datum), rho_pairing(w, &g2, datum)))
}

pub fn is_absolutely_protected(w: &Weight, datum: &RootDatum) -> Result<bool> {
    let (a, b) = boundary_pairings(w, datum)?;
    Ok(a.is_positive() && b.is_negative())
}

pub fn region_classify(w: &Weight, datum: &RootDatum) -> Result<UnitarityVerdict> {
    w.check_dims(datum)?;
    let pairings = boundary_pairings(w, datum)?;
    let (g1, g2, g3) = g_values(w, datum);
    let degree = atypicality_degree(w, datum).degree;
    let unitary = is_unitary(w, datum)?;
    let (a, b) = (&pairings.0, &pairings.1);
    let region = match unitary {
        Some(false) => Region::NotUnitary,
        None => Region::NonIntegralUndetermined,
        Some(true) => {
            if a.is_negative() && b.is_positive() && degree == 0 {
                Region::InteriorC
            } else if !a.is_positive() && !b.is_negative() && (a.is_zero() || b.is_zero()) {
                Region::BoundaryCandidate
            } else {
                Region::OutsideAtypical
            }
        }
    };
    Ok(UnitarityVerdict {
        g0_dominant: g0_dominance(w, datum),
        g0_unitary: g0_unitarity(w, datum),
        odd_interlocking: odd_interlocking(w, datum),
        g_unitary_integral: g_unitarity_integral(w, datum)?,
        absolutely_protected: unitary == Some(true) && a.is_positive() && b.is_negative(),
        region,
        pairings,
        g1,
        g2,
        g3,
        atypicality: degree,
        partial: unitary.is_none(),
    })
}
