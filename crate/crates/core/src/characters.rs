//! Truncated formal characters.
//!
//! A character is stored relative to its highest weight Λ: a term with depth
//! vector `c` stands for the weight `Λ − Σ cⱼ αⱼ` over the simple roots, and
//! truncation keeps `Σ cⱼ ≤ depth_limit`. Offsets between characters are kept
//! as depth vectors, never recovered from weights (for m = n the shift vector
//! lies in the root lattice).
//!
//! The super parity of a term is the parity of the highest weight vector plus
//! the coefficient of the odd simple root.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::atypicality::{atypicality_degree, vanishing_odd_roots};
use crate::error::{Error, Result};
use crate::rational::{q, qr};
use crate::rootdata::{Parity, Root, RootDatum};
use crate::unitarity::{below_continuous_threshold, compact_dominant, region_classify, Region};
use crate::weights::Weight;

pub type Terms = BTreeMap<Vec<i64>, i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharacter {
    pub base: Weight,
    pub depth_limit: i64,
    pub parity: Parity,
    pub terms: Terms,
}

fn total(v: &[i64]) -> i64 {
    v.iter().sum()
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl FormalCharacter {
    pub fn zero(base: Weight, depth_limit: i64, parity: Parity) -> Self {
        FormalCharacter { base, depth_limit, parity, terms: Terms::new() }
    }

    /// `e^Λ`.
    pub fn monomial(base: Weight, rank: usize, depth_limit: i64, parity: Parity) -> Self {
        let mut c = FormalCharacter::zero(base, depth_limit, parity);
        if depth_limit >= 0 {
            c.terms.insert(vec![0; rank], 1);
        }
        c
    }

    pub fn add_term(&mut self, v: Vec<i64>, c: i64) {
        if c == 0 || total(&v) > self.depth_limit {
            return;
        }
        let e = self.terms.entry(v.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&v);
        }
    }

    pub fn coefficient(&self, v: &[i64]) -> i64 {
        self.terms.get(v).copied().unwrap_or(0)
    }

    fn check_compatible(&self, other: &FormalCharacter) -> Result<()> {
        if self.base != other.base || self.parity != other.parity {
            return Err(Error::BaseMismatch(
                format!("{} ({:?})", self.base, self.parity),
                format!("{} ({:?})", other.base, other.parity),
            ));
        }
        Ok(())
    }

    /// Sum, truncated to the smaller depth limit.
    pub fn add(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        self.check_compatible(other)?;
        let mut out = FormalCharacter {
            depth_limit: self.depth_limit.min(other.depth_limit),
            terms: Terms::new(),
            ..self.clone()
        };
        for (v, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(v.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> FormalCharacter {
        let mut out = FormalCharacter { terms: Terms::new(), ..self.clone() };
        for (v, c) in &self.terms {
            out.add_term(v.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        self.add(&other.scale(-1))
    }

    /// Product with another character; exponents add, so the result is
    /// based at `self.base + other.base`. The caller passes that weight.
    pub fn mul(&self, other: &FormalCharacter, base: Weight) -> FormalCharacter {
        let limit = self.depth_limit.min(other.depth_limit);
        let mut out = FormalCharacter {
            base,
            depth_limit: limit,
            parity: match (self.parity, other.parity) {
                (a, b) if a == b => Parity::Even,
                _ => Parity::Odd,
            },
            terms: Terms::new(),
        };
        for (v, c) in &self.terms {
            for (w, d) in &other.terms {
                if total(v) + total(w) <= limit {
                    out.add_term(add_vec(v, w), c * d);
                }
            }
        }
        out
    }

    /// Re-expresses the character relative to `new_base = base + Σ offsetⱼ αⱼ`.
    pub fn embed(&self, new_base: &Weight, offset: &[i64], new_parity: Parity, depth_limit: i64) -> FormalCharacter {
        let mut out = FormalCharacter {
            base: new_base.clone(),
            depth_limit,
            parity: new_parity,
            terms: Terms::new(),
        };
        for (v, c) in &self.terms {
            out.add_term(add_vec(v, offset), *c);
        }
        out
    }

    pub fn truncate(&self, depth_limit: i64) -> FormalCharacter {
        let mut out = FormalCharacter { depth_limit, terms: Terms::new(), ..self.clone() };
        for (v, c) in &self.terms {
            out.add_term(v.clone(), *c);
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    pub fn weight_at(&self, datum: &RootDatum, v: &[i64]) -> Weight {
        datum.weight_at_depth(&self.base, v)
    }

    pub fn parity_at(&self, datum: &RootDatum, v: &[i64]) -> Parity {
        match datum.odd_simple_index() {
            Some(j) => self.parity.plus(v[j]),
            None => self.parity,
        }
    }

    /// Terms with super signs applied.
    pub fn supercharacter(&self, datum: &RootDatum) -> FormalCharacter {
        let mut out = FormalCharacter { terms: Terms::new(), ..self.clone() };
        for (v, c) in &self.terms {
            out.add_term(v.clone(), c * self.parity_at(datum, v).sign());
        }
        out
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            base: self.base.clone(),
            depth_limit: self.depth_limit,
            parity: self.parity,
            terms: self
                .terms
                .iter()
                .map(|(v, c)| SeriesTerm { depth_vector: v.clone(), mult: *c })
                .collect(),
        }
    }

    pub fn from_json(s: &SeriesJson) -> FormalCharacter {
        let mut out = FormalCharacter {
            base: s.base.clone(),
            depth_limit: s.depth_limit,
            parity: s.parity,
            terms: Terms::new(),
        };
        for t in &s.terms {
            out.add_term(t.depth_vector.clone(), t.mult);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub depth_vector: Vec<i64>,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub base: Weight,
    pub depth_limit: i64,
    pub parity: Parity,
    pub terms: Vec<SeriesTerm>,
}

/// Multiplies by `(1 − e^{−α})^{−1}` where `a` is the depth vector of α.
fn mul_geometric(ch: &mut FormalCharacter, a: &[i64]) {
    let h = total(a);
    assert!(h > 0);
    let old = std::mem::take(&mut ch.terms);
    for (v, c) in old {
        let mut cur = v;
        while total(&cur) <= ch.depth_limit {
            ch.add_term(cur.clone(), c);
            cur = add_vec(&cur, a);
        }
    }
}

/// Multiplies by `(1 + sign·e^{−β})`.
fn mul_one_plus(ch: &mut FormalCharacter, b: &[i64], sign: i64) {
    let old = ch.terms.clone();
    for (v, c) in old {
        ch.add_term(add_vec(&v, b), sign * c);
    }
}

fn even_denominator(ch: &mut FormalCharacter, datum: &RootDatum) {
    for a in &datum.even_positive {
        mul_geometric(ch, &datum.root_depth(a));
    }
}

fn odd_numerator(ch: &mut FormalCharacter, datum: &RootDatum) {
    for b in &datum.odd_positive {
        mul_one_plus(ch, &datum.root_depth(b), 1);
    }
}

pub fn verma_character(lam: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    lam.check_dims(datum)?;
    let mut ch = FormalCharacter::monomial(lam.clone(), datum.rank(), depth, Parity::Even);
    even_denominator(&mut ch, datum);
    odd_numerator(&mut ch, datum);
    Ok(ch)
}

/// Verma character of the even part alone (no odd factor).
pub fn even_verma_character(lam: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    lam.check_dims(datum)?;
    let mut ch = FormalCharacter::monomial(lam.clone(), datum.rank(), depth, Parity::Even);
    even_denominator(&mut ch, datum);
    Ok(ch)
}

/// `Σ_{w ∈ G} sgn(w) e^{w·Λ} · Π_{α ∈ Φ₀⁺} (1 − e^{−α})^{−1}` for a group of
/// block permutations G. Terms of G that do not move Λ by a root-lattice
/// vector are rejected.
pub fn weyl_type_character(
    lam: &Weight,
    datum: &RootDatum,
    depth: i64,
    group: &[(Vec<usize>, i64)],
) -> Result<FormalCharacter> {
    lam.check_dims(datum)?;
    let v = lam.add(&datum.rho).coords();
    let mut ch = FormalCharacter::zero(lam.clone(), depth, Parity::Even);
    for (perm, sgn) in group {
        // (w v)_l = v_{perm[l]}; offset = v − w v must be integral.
        let mut diff = Vec::with_capacity(v.len());
        for l in 0..v.len() {
            let d = &v[l] - &v[perm[l]];
            if !d.is_integer() {
                return Err(Error::NonDominant(lam.to_string()));
            }
            diff.push(crate::rational::to_i64(&d).expect("small integer"));
        }
        let depth_vec = datum.depth_of_coords(&diff);
        ch.add_term(depth_vec, *sgn);
    }
    even_denominator(&mut ch, datum);
    Ok(ch)
}

/// Finite Weyl character of the compact part times the noncompact denominator.
pub fn generalized_verma_character(lam0: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    lam0.check_dims(datum)?;
    if !compact_dominant(lam0, datum) {
        return Err(Error::NonDominant(lam0.to_string()));
    }
    weyl_type_character(lam0, datum, depth, &datum.compact_weyl_group())
}

/// Character of the simple g₀-module with highest weight Λ.
///
/// Exact when p·q = 0 (finite-dimensional) and for p = q = 1 (the su(1,1)
/// factor is finite-dimensional when λ¹ − λ² ∈ ℤ≥0, a Verma module otherwise).
/// For other splits the generalized Verma module is returned when it is
/// irreducible, i.e. strictly below the continuous unitarity threshold.
pub fn simple_g0_character(lam: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    lam.check_dims(datum)?;
    if !compact_dominant(lam, datum) {
        return Err(Error::NonDominant(lam.to_string()));
    }
    if datum.p == 0 || datum.q == 0 {
        return weyl_type_character(lam, datum, depth, &datum.even_weyl_group());
    }
    if datum.p == 1 && datum.q == 1 {
        let k = &lam.lam[0] - &lam.lam[1];
        if k.is_integer() && k >= q(0) {
            return weyl_type_character(lam, datum, depth, &datum.even_weyl_group());
        }
        return weyl_type_character(lam, datum, depth, &datum.compact_weyl_group());
    }
    if below_continuous_threshold(lam, datum)? {
        return weyl_type_character(lam, datum, depth, &datum.compact_weyl_group());
    }
    Err(Error::Unsupported(format!(
        "simple g0 character at {lam}: generalized Verma module may be reducible"
    )))
}

/// `ch K(Λ) = L0char · Π_{β ∈ Φ₁⁺} (1 + e^{−β})`.
pub fn kac_character(
    lam: &Weight,
    datum: &RootDatum,
    l0char: &FormalCharacter,
    depth: i64,
) -> Result<FormalCharacter> {
    if l0char.base != *lam {
        return Err(Error::BaseMismatch(l0char.base.to_string(), lam.to_string()));
    }
    let mut ch = l0char.truncate(depth.min(l0char.depth_limit));
    odd_numerator(&mut ch, datum);
    Ok(ch)
}

/// Kac character induced from the simple g₀-module.
pub fn kac_character_default(lam: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    let l0 = simple_g0_character(lam, datum, depth)?;
    kac_character(lam, datum, &l0, depth)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub weight: Weight,
    pub parity: Parity,
    /// Depth vector of `Λ − weight`.
    pub offset: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub constituents: Vec<Constituent>,
    pub lower_bound_only: bool,
}

/// g₀-constituents `L₀(Λ − Σ_S)` over subsets S of odd positive roots; for
/// atypical Λ only the subsets avoiding the vanishing roots.
pub fn g0_decomposition_typical(lam: &Weight, datum: &RootDatum) -> Result<Decomposition> {
    lam.check_dims(datum)?;
    let vanishing = vanishing_odd_roots(lam, datum);
    let roots: Vec<&Root> = datum.odd_positive.iter().filter(|r| !vanishing.contains(r)).collect();
    let mut constituents = vec![];
    for mask in 0u64..(1u64 << roots.len()) {
        let mut w = lam.clone();
        let mut offset = vec![0; datum.rank()];
        let mut count = 0;
        for (b, r) in roots.iter().enumerate() {
            if mask >> b & 1 == 1 {
                w = w.add_root(r, -1);
                offset = add_vec(&offset, &datum.root_depth(r));
                count += 1;
            }
        }
        constituents.push(Constituent { weight: w, parity: Parity::from_count(count), offset });
    }
    Ok(Decomposition { constituents, lower_bound_only: !vanishing.is_empty() })
}

/// The two roots that can vanish on the boundary of C:
/// `β₁ = ε_p − δ₁` and `γ₂ = ε_{p+1} − δₙ`.
pub fn boundary_roots(datum: &RootDatum) -> Result<(Root, Root)> {
    if datum.p == 0 || datum.q == 0 {
        return Err(Error::RequiresNoncompactSplit { p: datum.p, q: datum.q });
    }
    Ok((datum.odd_root(datum.p - 1, 0), datum.odd_root(datum.p, datum.n - 1)))
}

/// Composition factors of K(Λ) when the vanishing odd roots lie in
/// {β₁, γ₂}: `None` for typical Λ, otherwise the factor list (Λ first).
///
/// One vanishing root γ gives {Λ, Λ − γ}. Both vanishing gives
/// {Λ, Λ − β₁, Λ − γ₂, Λ − β₁ − γ₂} for n > 1 and {Λ, Λ − β₁, Λ − γ₂} for n = 1.
pub fn recombination_factors(lam: &Weight, datum: &RootDatum) -> Result<Option<Vec<Constituent>>> {
    let (b1, g2) = boundary_roots(datum)?;
    let vanishing = vanishing_odd_roots(lam, datum);
    if vanishing.is_empty() {
        return Ok(None);
    }
    if vanishing.iter().any(|r| *r != b1 && *r != g2) {
        return Err(Error::ChainLeftBoundaryCase { weight: lam.to_string() });
    }
    let make = |roots: &[&Root]| -> Constituent {
        let mut w = lam.clone();
        let mut offset = vec![0; datum.rank()];
        for r in roots {
            w = w.add_root(r, -1);
            offset = add_vec(&offset, &datum.root_depth(r));
        }
        Constituent { weight: w, parity: Parity::from_count(roots.len() as i64), offset }
    };
    let has_b = vanishing.contains(&b1);
    let has_g = vanishing.contains(&g2);
    let mut out = vec![make(&[])];
    if has_b {
        out.push(make(&[&b1]));
    }
    if has_g {
        out.push(make(&[&g2]));
    }
    if has_b && has_g && datum.n > 1 {
        out.push(make(&[&b1, &g2]));
    }
    Ok(Some(out))
}

/// Fragmentation of K(Λ₀) at a boundary candidate.
pub fn fragmentation(lam0: &Weight, datum: &RootDatum) -> Result<Vec<Constituent>> {
    let v = region_classify(lam0, datum)?;
    if v.region != Region::BoundaryCandidate {
        return Err(Error::NotBoundary(lam0.to_string()));
    }
    recombination_factors(lam0, datum)?.ok_or_else(|| Error::NotBoundary(lam0.to_string()))
}

/// Character of L(Λ) by `ch L(Λ) = ch K(Λ) − Σ ch L(Λᵢ)` over the lower
/// recombination factors, recursively. Typical Λ gives ch K(Λ).
pub fn simple_character(lam: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    let mut memo = HashMap::new();
    let ch = simple_character_rec(lam, datum, depth, &mut memo)?;
    if !ch.is_nonnegative() {
        return Err(Error::Unsupported(format!(
            "recombination recursion produced a negative multiplicity at {lam}"
        )));
    }
    Ok(ch)
}

fn simple_character_rec(
    lam: &Weight,
    datum: &RootDatum,
    depth: i64,
    memo: &mut HashMap<(String, i64), FormalCharacter>,
) -> Result<FormalCharacter> {
    let key = (lam.to_string(), depth);
    if let Some(c) = memo.get(&key) {
        return Ok(c.clone());
    }
    let kac = kac_character_default(lam, datum, depth)?;
    let mut ch = kac;
    if let Some(factors) = recombination_factors(lam, datum)? {
        for f in factors.iter().skip(1) {
            let h = total(&f.offset);
            if h > depth {
                continue;
            }
            let sub = simple_character_rec(&f.weight, datum, depth - h, memo)?;
            let emb = sub.embed(lam, &f.offset, Parity::Even, depth);
            ch = ch.sub(&emb)?;
        }
    }
    memo.insert(key, ch.clone());
    Ok(ch)
}

/// [`simple_character`] restricted to boundary candidates.
pub fn simple_boundary_character(lam0: &Weight, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    let v = region_classify(lam0, datum)?;
    if v.region != Region::BoundaryCandidate {
        return Err(Error::NotBoundary(lam0.to_string()));
    }
    simple_character(lam0, datum, depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillatorSector {
    /// Even total degree; highest weight vector ηx.
    Plus,
    /// Odd total degree; highest weight vector η.
    Minus,
}

impl OscillatorSector {
    /// Highest weight on sl(2|1) with p = q = 1.
    pub fn highest_weight(self) -> Weight {
        match self {
            OscillatorSector::Plus => Weight::new(vec![q(-1), qr(1, 2)], vec![q(0)]),
            OscillatorSector::Minus => Weight::new(vec![qr(-1, 2), q(0)], vec![q(0)]),
        }
    }

    pub fn from_weight(w: &Weight) -> Option<OscillatorSector> {
        [OscillatorSector::Plus, OscillatorSector::Minus]
            .into_iter()
            .find(|s| s.highest_weight() == *w)
    }
}

/// Characters of the oscillator supermodules of su(1,1|1). The highest weight
/// vector is odd in both sectors.
pub fn oscillator_character(sector: OscillatorSector, depth: i64) -> FormalCharacter {
    let mut ch = FormalCharacter::zero(sector.highest_weight(), depth, Parity::Odd);
    for k in 0..=depth.max(0) {
        match sector {
            OscillatorSector::Plus => {
                ch.add_term(vec![k, 0], 1);
                ch.add_term(vec![k, 1], 1);
            }
            OscillatorSector::Minus => {
                ch.add_term(vec![k, 0], 1);
                ch.add_term(vec![k + 1, 1], 1);
            }
        }
    }
    ch
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuleKind {
    Verma,
    Kac,
    GeneralizedVerma,
    SimpleTyp,
    SimpleBoundary,
    Oscillator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupermoduleDescriptor {
    pub kind: ModuleKind,
    pub highest_weight: Weight,
    pub parity: Parity,
}

pub fn module_character(desc: &SupermoduleDescriptor, datum: &RootDatum, depth: i64) -> Result<FormalCharacter> {
    let lam = &desc.highest_weight;
    let ch = match desc.kind {
        ModuleKind::Verma => verma_character(lam, datum, depth)?,
        ModuleKind::Kac => kac_character_default(lam, datum, depth)?,
        ModuleKind::GeneralizedVerma => {
            let l0 = generalized_verma_character(lam, datum, depth)?;
            kac_character(lam, datum, &l0, depth)?
        }
        ModuleKind::SimpleTyp => {
            if atypicality_degree(lam, datum).degree != 0 {
                return Err(Error::NoCharacter(format!("{lam} is atypical")));
            }
            kac_character_default(lam, datum, depth)?
        }
        ModuleKind::SimpleBoundary => simple_boundary_character(lam, datum, depth)?,
        ModuleKind::Oscillator => {
            let sl21 = datum.m == 2 && datum.n == 1 && datum.p == 1;
            let sector = OscillatorSector::from_weight(lam).filter(|_| sl21).ok_or_else(|| {
                Error::NoCharacter(format!("{lam} is not an oscillator highest weight of su(1,1|1)"))
            })?;
            // The highest weight vector is odd; the descriptor parity shifts it.
            let c = oscillator_character(sector, depth);
            return Ok(FormalCharacter { parity: c.parity.plus((desc.parity == Parity::Odd) as i64), ..c });
        }
    };
    Ok(FormalCharacter { parity: desc.parity, ..ch })
}
