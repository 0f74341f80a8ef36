//! Witten indices as supercharacters of DS twists, the regulated supertrace
//! cross-check, KMMR cancellation, formal dimensions and superdimensions.
//!
//! The index of a module M for a supercharge x is read off the Ξ = 0 slice of
//! its character: weights λ with `(λ, α) = 0` for every twist root α, with
//! super signs, restricted to the kept coordinates and evaluated at fugacities
//! `q'ⱼ = e^{−αⱼ(X)}` for the simple roots of g_x.
//!
//! Restricted depths `w` are partial sums of the kept coordinates of `Λ − λ`.
//! For a rank-1 twist on the odd simple root `εₘ − δ₁` a slice weight with
//! restricted depth `w` sits at parent depth at most `A·|w|₁ + (n−1)|(Λ,α)| + mn`
//! (`A = 2` when m, n ≥ 2, else 1), so the fibre over `w` is complete once that
//! bound is within the truncation. Other twists are evaluated on whatever the
//! truncation holds and flagged `heuristic`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::atypicality::atypicality_degree;
use crate::characters::{
    fragmentation, g0_decomposition_typical, module_character, simple_character, FormalCharacter,
    SupermoduleDescriptor,
};
use crate::dstwist::{twist_root_datum, SuperchargeDescriptor, TwistDatum};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, qr, to_f64, Q};
use crate::rootdata::{Parity, Root, RootDatum};
use crate::weights::Weight;

/// Fugacities `q'ⱼ ∈ (0, 1)`, one per simple root of the twisted algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FugacityPoint {
    #[serde(rename = "q_values", with = "crate::rational::vec_as_str")]
    pub values: Vec<Q>,
}

impl FugacityPoint {
    pub fn new(values: Vec<Q>) -> Self {
        FugacityPoint { values }
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::FugacityOutOfChamber(e.to_string()))
    }

    pub fn check(&self, t: &TwistDatum) -> Result<()> {
        let r = twisted_rank(t);
        if self.values.len() != r {
            return Err(Error::FugacityOutOfChamber(format!(
                "{} values given, the twisted algebra has {r} simple roots",
                self.values.len()
            )));
        }
        for v in &self.values {
            if !v.is_positive() || *v >= Q::one() {
                return Err(Error::FugacityOutOfChamber(format!("{} is not in (0, 1)", fmt_q(v))));
            }
        }
        Ok(())
    }
}

/// Number of simple roots of the twisted algebra.
pub fn twisted_rank(t: &TwistDatum) -> usize {
    t.twisted.as_ref().map_or(0, |d| d.rank())
}

/// `(λ, α)` must have one sign on the module: +1 if all are ≥ 0, −1 if all ≤ 0.
pub fn xi_sign(ch: &FormalCharacter, alpha: &Root, datum: &RootDatum) -> Result<i64> {
    let (mut pos, mut neg) = (false, false);
    for v in ch.terms.keys() {
        let x = datum.pair(&ch.weight_at(datum, v), alpha);
        pos |= x.is_positive();
        neg |= x.is_negative();
    }
    match (pos, neg) {
        (true, true) => Err(Error::NoConsistentXiSign),
        (false, true) => Ok(-1),
        _ => Ok(1),
    }
}

/// `s·(λ, α)` for a rank-1 supercharge.
pub fn xi_eigenvalue(lambda: &Weight, x: &SuperchargeDescriptor, datum: &RootDatum, sign: i64) -> Result<Q> {
    x.validate(datum)?;
    if x.rank() != 1 {
        return Err(Error::InvalidSupercharge("Xi eigenvalues need a rank-1 supercharge".into()));
    }
    Ok(q(sign) * datum.pair(lambda, &x.roots(datum)[0]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTerm {
    pub restricted_weight: Weight,
    /// Restricted depth relative to the reference slice weight.
    pub depth_vector: Vec<i64>,
    pub mult: i64,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupertraceSample {
    #[serde(with = "crate::rational::as_str")]
    pub beta: Q,
    pub value: f64,
    pub slice_value: f64,
    pub tail_bound: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexValue {
    pub series: Vec<IndexTerm>,
    /// Sum over the complete part of the series.
    #[serde(with = "crate::rational::as_str")]
    pub value: Q,
    pub exact: bool,
    /// Restricted depth up to which every coefficient is final.
    pub reliable_depth: Option<i64>,
    pub heuristic: bool,
    pub slice_truncated: bool,
    pub xi_sign: Option<i64>,
    pub samples: Vec<SupertraceSample>,
}

/// Slice coefficients keyed by restricted depth relative to `Λ|kept`.
struct Slice {
    coeffs: BTreeMap<Vec<i64>, i64>,
    /// Parent depth vectors of slice terms, for the heuristic edge check.
    parent_depths: Vec<i64>,
}

struct Context<'a> {
    datum: &'a RootDatum,
    twist: TwistDatum,
    roots: Vec<Root>,
    /// `(A, C)` of the fibre bound, when it applies.
    bound: Option<(i64, i64)>,
    depth: i64,
}

impl<'a> Context<'a> {
    fn new(
        datum: &'a RootDatum,
        x: &SuperchargeDescriptor,
        fug: &FugacityPoint,
        top: &Weight,
        depth: i64,
    ) -> Result<Self> {
        let twist = twist_root_datum(datum, x)?;
        fug.check(&twist)?;
        let roots = x.roots(datum);
        let simple = datum.odd_simple_index().map(|j| &datum.simple_roots[j]);
        let bound = if roots.len() == 1 && Some(&roots[0]) == simple {
            let (m, n) = (datum.m as i64, datum.n as i64);
            let a_coef = if m >= 2 && n >= 2 { 2 } else { 1 };
            let a = datum.pair(top, &roots[0]).abs();
            let a = crate::rational::to_i64(&a.ceil()).unwrap_or(i64::MAX / 4);
            Some((a_coef, (n - 1) * a + m * n))
        } else {
            None
        };
        Ok(Context { datum, twist, roots, bound, depth })
    }

    fn in_slice(&self, lambda: &Weight) -> bool {
        self.roots.iter().all(|r| self.datum.pair(lambda, r).is_zero())
    }

    /// Partial sums of the kept coordinates of `Λ − λ` (last one dropped).
    fn restricted_depth(&self, v: &[i64]) -> Vec<i64> {
        let d = self.datum.coords_of_depth(v);
        let kept = self.twist.kept_coords();
        let mut acc = 0;
        let mut out = vec![];
        for (idx, &c) in kept.iter().enumerate() {
            acc += d[c];
            if idx + 1 < kept.len() {
                out.push(acc);
            }
        }
        out
    }

    fn complete(&self, w: &[i64]) -> bool {
        match self.bound {
            Some((a, c)) => a * w.iter().map(|x| x.abs()).sum::<i64>() + c <= self.depth,
            None => true,
        }
    }

    fn reliable_depth(&self) -> Option<i64> {
        self.bound.map(|(a, c)| (self.depth - c).div_euclid(a))
    }

    fn slice(&self, ch: &FormalCharacter) -> Slice {
        let mut coeffs = BTreeMap::new();
        let mut parent_depths = vec![];
        for (v, c) in &ch.terms {
            if !self.in_slice(&ch.weight_at(self.datum, v)) {
                continue;
            }
            let s = ch.parity_at(self.datum, v).sign();
            *coeffs.entry(self.restricted_depth(v)).or_insert(0) += s * c;
            parent_depths.push(v.iter().sum());
        }
        Slice { coeffs, parent_depths }
    }
}

fn minimal_key(keys: impl Iterator<Item = Vec<i64>>) -> Option<Vec<i64>> {
    keys.min_by_key(|w| (w.iter().map(|x| x.abs()).sum::<i64>(), w.clone()))
}

fn eval_monomial(fug: &FugacityPoint, c: &[i64]) -> Q {
    let mut acc = Q::one();
    for (qv, &e) in fug.values.iter().zip(c) {
        let p = crate::rational::pow(qv, e.unsigned_abs() as u32);
        acc *= if e >= 0 { p } else { Q::one() / p };
    }
    acc
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Value of the complete part of a slice relative to `w_ref`.
fn slice_value(ctx: &Context, slice: &BTreeMap<Vec<i64>, i64>, w_ref: &[i64], fug: &FugacityPoint) -> Q {
    slice
        .iter()
        .filter(|(w, c)| **c != 0 && ctx.complete(w))
        .map(|(w, c)| q(*c) * eval_monomial(fug, &diff(w, w_ref)))
        .sum()
}

/// Coordinates of `Λ − λ` on the kept positions from restricted partial sums.
fn kept_differences(kept: &[usize], w: &[i64]) -> Vec<(usize, i64)> {
    let mut prev = 0;
    kept.iter()
        .enumerate()
        .map(|(idx, &c)| {
            let cur = w.get(idx).copied().unwrap_or(0);
            let delta = cur - prev;
            prev = cur;
            (c, delta)
        })
        .collect()
}

fn restricted_weight_of(ctx: &Context, top: &Weight, w: &[i64]) -> Weight {
    // Rebuild kept coordinates of Λ − λ from partial sums, then subtract.
    let top_coords = top.coords();
    let coords: Vec<Q> = kept_differences(&ctx.twist.kept_coords(), w)
        .iter()
        .map(|(c, delta)| &top_coords[*c] - q(*delta))
        .collect();
    let m = ctx.twist.m();
    Weight::new(coords[..m].to_vec(), coords[m..].to_vec())
}

/// Index of a character (route (i)) with the supertrace cross-check at the
/// given inverse temperatures (route (ii), rank-1 supercharges only).
pub fn index_of_character(
    ch: &FormalCharacter,
    x: &SuperchargeDescriptor,
    fug: &FugacityPoint,
    datum: &RootDatum,
    betas: &[Q],
) -> Result<IndexValue> {
    let ctx = Context::new(datum, x, fug, &ch.base, ch.depth_limit)?;
    let slice = ctx.slice(ch);
    let nonzero: BTreeMap<Vec<i64>, i64> = slice.coeffs.iter().filter(|(_, c)| **c != 0).map(|(k, v)| (k.clone(), *v)).collect();
    let w_ref = minimal_key(slice.coeffs.keys().cloned()).unwrap_or_else(|| vec![0; twisted_rank(&ctx.twist)]);
    let value = slice_value(&ctx, &nonzero, &w_ref, fug);
    let series = nonzero
        .iter()
        .map(|(w, c)| IndexTerm {
            restricted_weight: restricted_weight_of(&ctx, &ch.base, w),
            depth_vector: diff(w, &w_ref),
            mult: *c,
            complete: ctx.complete(w),
        })
        .collect();
    let heuristic = ctx.bound.is_none();
    let slice_truncated = match ctx.bound {
        Some(_) => slice.coeffs.keys().any(|w| !ctx.complete(w)),
        None => {
            let edge = ch.depth_limit - (datum.m * datum.n) as i64;
            slice.parent_depths.iter().any(|&d| d > edge)
        }
    };
    let exact = !heuristic && twisted_rank(&ctx.twist) == 0 && !slice_truncated;

    let (xi, samples) = if x.rank() == 1 {
        match xi_sign(ch, &ctx.roots[0], datum) {
            Ok(s) => (Some(s), supertrace_samples(&ctx, ch, fug, &w_ref, s, betas)),
            Err(_) => (None, vec![]),
        }
    } else {
        (None, vec![])
    };
    Ok(IndexValue {
        series,
        value,
        exact,
        reliable_depth: ctx.reliable_depth(),
        heuristic,
        slice_truncated,
        xi_sign: xi,
        samples,
    })
}

/// `Σ (−1)^F m(λ) e^{−βΞ(λ)} e^{(λ − λ_ref)(X)}` over the truncated character.
/// Ξ-nonzero weights pair up along the twist root; pairs cut by the truncation
/// lie in the top `ht(α)` layers, whose plain trace bounds the discrepancy.
fn supertrace_samples(
    ctx: &Context,
    ch: &FormalCharacter,
    fug: &FugacityPoint,
    w_ref: &[i64],
    sign: i64,
    betas: &[Q],
) -> Vec<SupertraceSample> {
    let datum = ctx.datum;
    let alpha = &ctx.roots[0];
    let ht: i64 = datum.root_depth(alpha).iter().sum();
    // X on the kept coordinates: z₀ = 0, z_{j+1} = z_j + ln q'_j.
    let kept = ctx.twist.kept_coords();
    let mut x = vec![0.0; datum.dim()];
    let mut z = 0.0;
    for (idx, &c) in kept.iter().enumerate() {
        x[c] = z;
        if idx < fug.values.len() {
            z += to_f64(&fug.values[idx]).ln();
        }
    }
    // Reference: kept coordinates of Λ − λ_ref from w_ref.
    let mut ref_d = vec![0i64; datum.dim()];
    for (c, delta) in kept_differences(&kept, w_ref) {
        ref_d[c] = delta;
    }
    let ref_x: f64 = ref_d.iter().zip(&x).map(|(d, xv)| *d as f64 * xv).sum();
    betas
        .iter()
        .map(|beta| {
            let b = to_f64(beta);
            let (mut total, mut slice, mut tail, mut scale) = (0.0, 0.0, 0.0, 0.0);
            for (v, c) in &ch.terms {
                let lambda = ch.weight_at(datum, v);
                let xi = sign as f64 * to_f64(&datum.pair(&lambda, alpha));
                let d = datum.coords_of_depth(v);
                let lx: f64 = ref_x - d.iter().zip(&x).map(|(dv, xv)| *dv as f64 * xv).sum::<f64>();
                let weight = (-b * xi + lx).exp();
                let s = ch.parity_at(datum, v).sign() as f64;
                let term = s * *c as f64 * weight;
                total += term;
                scale += (*c as f64).abs() * weight;
                if ctx.in_slice(&lambda) {
                    slice += term;
                } else if v.iter().sum::<i64>() > ch.depth_limit - ht {
                    tail += (*c as f64).abs() * weight;
                }
            }
            let tol = 1e-9 * (1.0 + scale);
            SupertraceSample {
                beta: beta.clone(),
                value: total,
                slice_value: slice,
                tail_bound: tail,
                within_bound: (total - slice).abs() <= tail + tol,
            }
        })
        .collect()
}

pub fn default_betas() -> Vec<Q> {
    vec![qr(1, 2), q(2)]
}

pub fn witten_index(
    module: &SupermoduleDescriptor,
    x: &SuperchargeDescriptor,
    fug: &FugacityPoint,
    datum: &RootDatum,
    depth: i64,
) -> Result<IndexValue> {
    let ch = module_character(module, datum, depth)?;
    index_of_character(&ch, x, fug, datum, &default_betas())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KmmrFactor {
    pub weight: Weight,
    pub parity: Parity,
    #[serde(with = "crate::rational::as_str")]
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KmmrReport {
    #[serde(with = "crate::rational::as_str")]
    pub kac_value: Q,
    pub factors: Vec<KmmrFactor>,
    /// Restricted depths (relative to `Λ₀|kept`) where the slices disagree.
    pub residual: Vec<(Vec<i64>, i64)>,
    #[serde(with = "crate::rational::as_str")]
    pub residual_value: Q,
    pub holds: bool,
}

/// Compares the index of K(Λ₀) with the sum over its composition factors,
/// all read on the same truncation and the same reference weight.
pub fn kmmr_cancellation_check(
    lam0: &Weight,
    x: &SuperchargeDescriptor,
    fug: &FugacityPoint,
    datum: &RootDatum,
    depth: i64,
) -> Result<KmmrReport> {
    let kac = crate::characters::kac_character_default(lam0, datum, depth)?;
    let ctx = Context::new(datum, x, fug, lam0, depth)?;
    let kac_slice = ctx.slice(&kac).coeffs;
    let factors = if atypicality_degree(lam0, datum).degree == 0 {
        vec![]
    } else {
        fragmentation(lam0, datum)?
    };
    let mut pieces = vec![];
    for f in &factors {
        let h: i64 = f.offset.iter().sum();
        let sub = simple_character(&f.weight, datum, depth - h)?;
        let emb = sub.embed(lam0, &f.offset, kac.parity, depth);
        pieces.push((f, ctx.slice(&emb).coeffs));
    }
    let w_ref = minimal_key(kac_slice.keys().cloned())
        .or_else(|| minimal_key(pieces.iter().flat_map(|p| p.1.keys().cloned())))
        .unwrap_or_else(|| vec![0; twisted_rank(&ctx.twist)]);
    let mut residual: BTreeMap<Vec<i64>, i64> = kac_slice.clone();
    for (_, s) in &pieces {
        for (w, c) in s {
            *residual.entry(w.clone()).or_insert(0) -= c;
        }
    }
    residual.retain(|_, c| *c != 0);
    let kac_value = slice_value(&ctx, &kac_slice, &w_ref, fug);
    let residual_value = slice_value(&ctx, &residual, &w_ref, fug);
    Ok(KmmrReport {
        kac_value,
        factors: pieces
            .iter()
            .map(|(f, s)| KmmrFactor {
                weight: f.weight.clone(),
                parity: f.parity,
                value: slice_value(&ctx, s, &w_ref, fug),
            })
            .collect(),
        holds: residual.is_empty(),
        residual: residual.into_iter().collect(),
        residual_value,
    })
}

fn hc_gate(lam0: &Weight, datum: &RootDatum) -> Result<()> {
    let shifted = lam0.add(&datum.rho_even);
    for b in &datum.noncompact_positive {
        let x = datum.pair(&shifted, b);
        if x.is_zero() {
            return Err(Error::LimitOfDiscreteSeries { weight: lam0.to_string(), root: b.label(datum.m) });
        }
        if x.is_positive() {
            return Err(Error::NotDiscreteSeries { weight: lam0.to_string(), root: b.label(datum.m) });
        }
    }
    Ok(())
}

/// The product formula without the compact dominance gate; negative or zero
/// on non-dominant weights (the virtual dimension).
fn formal_dimension_unchecked(lam0: &Weight, datum: &RootDatum) -> Q {
    let with_c = lam0.add(&datum.rho_compact);
    let with_0 = lam0.add(&datum.rho_even);
    let mut d = Q::one();
    for a in &datum.compact_positive {
        d *= datum.pair(&with_c, a) / datum.pair(&datum.rho_compact, a);
    }
    for b in &datum.noncompact_positive {
        d *= datum.pair(&with_0, b).abs() / datum.pair(&datum.rho_even, b);
    }
    d
}

/// `Π_{Φc⁺} (Λ+ρc, α)/(ρc, α) · Π_{Φn⁺} |(Λ+ρ₀, β)|/(ρ₀, β)`.
pub fn formal_dimension(lam0: &Weight, datum: &RootDatum) -> Result<Q> {
    lam0.check_dims(datum)?;
    if !crate::unitarity::compact_dominant(lam0, datum) {
        return Err(Error::NonDominant(lam0.to_string()));
    }
    hc_gate(lam0, datum)?;
    Ok(formal_dimension_unchecked(lam0, datum))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperdimTerm {
    pub weight: Weight,
    pub parity: Parity,
    #[serde(with = "crate::rational::as_str")]
    pub formal_dimension: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperdimReport {
    #[serde(with = "crate::rational::as_str")]
    pub superdimension: Q,
    pub terms: Vec<SuperdimTerm>,
}

/// `Σ_j (−1)^{p(Λⱼ)} d(Λⱼ)` over caller-supplied constituents. Constituents
/// that are not compact-dominant contribute their virtual dimension.
pub fn superdimension_of(constituents: &[(Weight, Parity)], datum: &RootDatum) -> Result<SuperdimReport> {
    let mut offenders = vec![];
    for (w, _) in constituents {
        w.check_dims(datum)?;
        if let Err(e) = hc_gate(w, datum) {
            offenders.push(match e {
                Error::NotDiscreteSeries { weight, root } | Error::LimitOfDiscreteSeries { weight, root } => {
                    format!("{weight} at {root}")
                }
                other => other.to_string(),
            });
        }
    }
    if !offenders.is_empty() {
        return Err(Error::NotDiscreteSeries { weight: offenders.join("; "), root: "see weight list".into() });
    }
    let mut total = Q::zero();
    let mut terms = vec![];
    for (w, p) in constituents {
        let d = formal_dimension_unchecked(w, datum);
        total += q(p.sign()) * &d;
        terms.push(SuperdimTerm { weight: w.clone(), parity: *p, formal_dimension: d });
    }
    Ok(SuperdimReport { superdimension: total, terms })
}

/// Superdimension of the Kac module of a typical weight.
pub fn superdimension(lam: &Weight, datum: &RootDatum) -> Result<SuperdimReport> {
    let dec = g0_decomposition_typical(lam, datum)?;
    if dec.lower_bound_only {
        return Err(Error::Unsupported(format!(
            "{lam} is atypical; pass its constituent list explicitly"
        )));
    }
    let cs: Vec<(Weight, Parity)> = dec.constituents.into_iter().map(|c| (c.weight, c.parity)).collect();
    superdimension_of(&cs, datum)
}
