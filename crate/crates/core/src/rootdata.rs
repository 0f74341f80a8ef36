//! Root system of sl(m|n) with a (p, q) split of the ε block.
//!
//! Roots are integer vectors in the combined basis `ε₁..εₘ, δ₁..δₙ`. The form
//! is `(εᵢ, εⱼ) = δᵢⱼ`, `(δₖ, δₗ) = −δₖₗ`. Positive roots are the standard ones:
//! `εᵢ − εⱼ` and `δₖ − δₗ` for i < j, k < l, and every `εᵢ − δₖ`. The compact
//! even roots stay inside one of the blocks `{1..p}`, `{p+1..m}`, `{δ}`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(k: i64) -> Parity {
        if k.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn plus(self, k: i64) -> Parity {
        if k.rem_euclid(2) == 0 {
            self
        } else {
            self.flip()
        }
    }

    /// `+1` for even, `−1` for odd.
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub coords: Vec<i64>,
    pub parity: Parity,
}

impl Root {
    fn unit(m: usize, n: usize, a: usize, b: usize, parity: Parity) -> Root {
        let mut coords = vec![0; m + n];
        coords[a] += 1;
        coords[b] -= 1;
        Root { coords, parity }
    }

    /// `εᵢ − εⱼ` (0-based indices).
    pub fn eps_eps(m: usize, n: usize, i: usize, j: usize) -> Root {
        Root::unit(m, n, i, j, Parity::Even)
    }

    /// `δₖ − δₗ` (0-based indices).
    pub fn delta_delta(m: usize, n: usize, k: usize, l: usize) -> Root {
        Root::unit(m, n, m + k, m + l, Parity::Even)
    }

    /// `εᵢ − δₖ` (0-based indices).
    pub fn odd(m: usize, n: usize, i: usize, k: usize) -> Root {
        Root::unit(m, n, i, m + k, Parity::Odd)
    }

    pub fn neg(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
            parity: self.parity,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    /// For `±(εᵢ − δₖ)`: the 0-based pair `(i, k)`.
    pub fn odd_indices(&self, m: usize) -> Option<(usize, usize)> {
        if !self.is_odd() {
            return None;
        }
        let i = self.coords[..m].iter().position(|&c| c != 0)?;
        let k = self.coords[m..].iter().position(|&c| c != 0)?;
        Some((i, k))
    }

    pub fn to_weight(&self, m: usize) -> Weight {
        Weight::from_ints(&self.coords[..m], &self.coords[m..])
    }

    pub fn label(&self, m: usize) -> String {
        let mut out = String::new();
        for (idx, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if idx < m {
                format!("e{}", idx + 1)
            } else {
                format!("d{}", idx - m + 1)
            };
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            out.push_str(&format!("{sign}{mag}{name}"));
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub even_positive: Vec<Root>,
    pub odd_positive: Vec<Root>,
    pub compact_positive: Vec<Root>,
    pub noncompact_positive: Vec<Root>,
    pub simple_roots: Vec<Root>,
    pub rho_even: Weight,
    pub rho_odd: Weight,
    pub rho_compact: Weight,
    pub rho: Weight,
    pub defect: usize,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        (self.m, self.n, self.p, self.q) == (other.m, other.n, other.p, other.q)
    }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "su({},{}|{})", self.p, self.q, self.n)
    }
}

/// Checked constructor: `p + q ≥ 2`, `n ≥ 1`, `p + q + n ≥ 3`.
pub fn build_root_datum(p: i64, q: i64, n: i64) -> Result<RootDatum> {
    if p < 0 || q < 0 || n < 0 {
        return Err(Error::InvalidAlgebra(format!("negative argument in ({p},{q},{n})")));
    }
    if p + q < 2 || n < 1 || p + q + n < 3 {
        return Err(Error::InvalidAlgebra(format!(
            "need p+q ≥ 2, n ≥ 1 and p+q+n ≥ 3, got ({p},{q},{n})"
        )));
    }
    Ok(RootDatum::build(p as usize, q as usize, n as usize))
}

impl RootDatum {
    pub fn new(p: i64, q: i64, n: i64) -> Result<RootDatum> {
        build_root_datum(p, q, n)
    }

    /// Unchecked sizes, used for twisted algebras such as sl(1|0) or sl(1|1).
    pub fn relaxed(p: usize, q: usize, n: usize) -> Result<RootDatum> {
        if p + q + n == 0 {
            return Err(Error::InvalidAlgebra("empty algebra".into()));
        }
        Ok(RootDatum::build(p, q, n))
    }

    fn build(p: usize, qq: usize, n: usize) -> RootDatum {
        let m = p + qq;
        let mut even_positive = vec![];
        let mut compact_positive = vec![];
        let mut noncompact_positive = vec![];
        for i in 0..m {
            for j in i + 1..m {
                let r = Root::eps_eps(m, n, i, j);
                if (i < p) == (j < p) {
                    compact_positive.push(r.clone());
                } else {
                    noncompact_positive.push(r.clone());
                }
                even_positive.push(r);
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                let r = Root::delta_delta(m, n, k, l);
                compact_positive.push(r.clone());
                even_positive.push(r);
            }
        }
        let mut odd_positive = vec![];
        for i in 0..m {
            for k in 0..n {
                odd_positive.push(Root::odd(m, n, i, k));
            }
        }
        let mut simple_roots = vec![];
        for i in 0..m.saturating_sub(1) {
            simple_roots.push(Root::eps_eps(m, n, i, i + 1));
        }
        if m >= 1 && n >= 1 {
            simple_roots.push(Root::odd(m, n, m - 1, 0));
        }
        for k in 0..n.saturating_sub(1) {
            simple_roots.push(Root::delta_delta(m, n, k, k + 1));
        }
        let half_sum = |roots: &[Root]| -> Weight {
            let mut acc = Weight::zero(m, n);
            for r in roots {
                acc = acc.add(&r.to_weight(m));
            }
            acc.scale(&crate::rational::half())
        };
        let rho = Weight::new(
            (0..m).map(|i| q((m - i) as i64)).collect(),
            (0..n).map(|k| q(-(k as i64) - 1)).collect(),
        );
        RootDatum {
            m,
            n,
            p,
            q: qq,
            rho_even: half_sum(&even_positive),
            rho_odd: half_sum(&odd_positive),
            rho_compact: half_sum(&compact_positive),
            even_positive,
            odd_positive,
            compact_positive,
            noncompact_positive,
            simple_roots,
            rho,
            defect: m.min(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        (self.m + self.n).saturating_sub(1)
    }

    /// 0-based position of the odd simple root `εₘ − δ₁` among the simple roots.
    pub fn odd_simple_index(&self) -> Option<usize> {
        if self.m >= 1 && self.n >= 1 {
            Some(self.m - 1)
        } else {
            None
        }
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.even_positive.iter().chain(self.odd_positive.iter()).cloned().collect()
    }

    pub fn odd_root(&self, i: usize, k: usize) -> Root {
        Root::odd(self.m, self.n, i, k)
    }

    pub fn shift(&self) -> Weight {
        Weight::shift(self.m, self.n)
    }

    /// Integer form on root coordinates.
    pub fn root_form(&self, a: &Root, b: &Root) -> i64 {
        let m = self.m;
        let e: i64 = (0..m).map(|i| a.coords[i] * b.coords[i]).sum();
        let d: i64 = (m..self.dim()).map(|i| a.coords[i] * b.coords[i]).sum();
        e - d
    }

    /// `(w, α)` for a root α.
    pub fn pair(&self, w: &Weight, alpha: &Root) -> Q {
        let mut acc = Q::zero();
        for (i, l) in w.lam.iter().enumerate() {
            let c = alpha.coords[i];
            if c != 0 {
                acc += l * q(c);
            }
        }
        for (k, u) in w.mu.iter().enumerate() {
            let c = alpha.coords[self.m + k];
            if c != 0 {
                acc -= u * q(c);
            }
        }
        acc
    }

    pub fn bilinear_form(&self, u: &Weight, v: &Weight) -> Result<Q> {
        u.check_dims(self)?;
        v.check_dims(self)?;
        let e: Q = u.lam.iter().zip(&v.lam).map(|(a, b)| a * b).sum();
        let d: Q = u.mu.iter().zip(&v.mu).map(|(a, b)| a * b).sum();
        Ok(e - d)
    }

    /// For m = n the shift vector is null and orthogonal to everything; a
    /// direction proportional to it is invisible to the form.
    pub fn is_degenerate_direction(&self, v: &Weight) -> bool {
        self.m == self.n && v.is_zero_mod_shift()
    }

    pub fn even_reflection(&self, alpha: &Root, beta: &Weight) -> Result<Weight> {
        beta.check_dims(self)?;
        if alpha.is_odd() {
            return Err(Error::NotEvenRoot(alpha.label(self.m)));
        }
        let aa = self.root_form(alpha, alpha);
        if aa == 0 {
            return Err(Error::IsotropicRoot(alpha.label(self.m)));
        }
        let c = q(2) * self.pair(beta, alpha) / q(aa);
        Ok(beta.sub(&alpha.to_weight(self.m).scale(&c)))
    }

    /// Dot action `σ(w + ρ) − ρ` of an even reflection.
    pub fn dot_reflection(&self, alpha: &Root, w: &Weight) -> Result<Weight> {
        Ok(self.even_reflection(alpha, &w.add(&self.rho))?.sub(&self.rho))
    }

    /// New simple system after reflecting at the odd simple root `alpha`.
    pub fn odd_reflection(&self, alpha: &Root, simple: &[Root]) -> Result<Vec<Root>> {
        if !alpha.is_odd() || !simple.contains(alpha) {
            return Err(Error::NotSimpleRoot(alpha.label(self.m)));
        }
        Ok(simple
            .iter()
            .map(|beta| {
                if beta == alpha {
                    alpha.neg()
                } else if self.root_form(beta, alpha) != 0 {
                    let coords = beta.coords.iter().zip(&alpha.coords).map(|(a, b)| a + b).collect();
                    Root {
                        coords,
                        parity: if beta.is_odd() { Parity::Even } else { Parity::Odd },
                    }
                } else {
                    beta.clone()
                }
            })
            .collect())
    }

    /// Simple-root coefficients of a root-lattice vector given in combined
    /// coordinates (partial sums). Panics when the coordinates do not sum to 0.
    pub fn depth_of_coords(&self, coords: &[i64]) -> Vec<i64> {
        assert_eq!(coords.len(), self.dim());
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.rank());
        for (idx, c) in coords.iter().enumerate() {
            acc += c;
            if idx + 1 < coords.len() {
                out.push(acc);
            }
        }
        assert_eq!(acc, 0, "vector is not in the root lattice");
        out
    }

    pub fn root_depth(&self, r: &Root) -> Vec<i64> {
        self.depth_of_coords(&r.coords)
    }

    /// Coordinates of `Σ cⱼ αⱼ` (simple roots) in the combined basis.
    pub fn coords_of_depth(&self, depth: &[i64]) -> Vec<i64> {
        let mut coords = vec![0; self.dim()];
        for (j, c) in depth.iter().enumerate() {
            coords[j] += c;
            coords[j + 1] -= c;
        }
        coords
    }

    /// The weight `base − Σ cⱼ αⱼ`.
    pub fn weight_at_depth(&self, base: &Weight, depth: &[i64]) -> Weight {
        let c = self.coords_of_depth(depth);
        base.sub(&Weight::from_ints(&c[..self.m], &c[self.m..]))
    }

    /// Compact Weyl group as signed permutations of the combined coordinates.
    pub fn compact_weyl_group(&self) -> Vec<(Vec<usize>, i64)> {
        block_permutations(&[self.p, self.q, self.n])
    }

    /// Even Weyl group `S_m × S_n`.
    pub fn even_weyl_group(&self) -> Vec<(Vec<usize>, i64)> {
        block_permutations(&[self.m, self.n])
    }
}

/// Signed permutations of `0..Σ sizes` that preserve consecutive blocks.
pub(crate) fn block_permutations(sizes: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let mut out: Vec<(Vec<usize>, i64)> = vec![(vec![], 1)];
    let mut offset = 0;
    for &s in sizes {
        let local = permutations(s);
        let mut next = Vec::with_capacity(out.len() * local.len());
        for (prefix, sg) in &out {
            for (perm, sp) in &local {
                let mut v = prefix.clone();
                v.extend(perm.iter().map(|x| x + offset));
                next.push((v, sg * sp));
            }
        }
        out = next;
        offset += s;
    }
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    if k == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = vec![];
    for (perm, sign) in permutations(k - 1) {
        // Insert k−1 at every position; moving it left past t entries costs t transpositions.
        for pos in 0..k {
            let mut v = perm.clone();
            v.insert(pos, k - 1);
            let t = (k - 1 - pos) as i64;
            out.push((v, if t % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct RootDatumJson {
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    positive_roots: Vec<Root>,
}

impl Serialize for RootDatum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootDatumJson {
            m: self.m,
            n: self.n,
            p: self.p,
            q: self.q,
            positive_roots: self.positive_roots(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RootDatumJson::deserialize(d)?;
        if raw.p + raw.q != raw.m {
            return Err(serde::de::Error::custom("p + q must equal m"));
        }
        let datum = RootDatum::relaxed(raw.p, raw.q, raw.n).map_err(serde::de::Error::custom)?;
        if datum.positive_roots() != raw.positive_roots {
            return Err(serde::de::Error::custom("positive roots do not match the standard system"));
        }
        Ok(datum)
    }
}
