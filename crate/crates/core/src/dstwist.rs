//! Odd supercharges as orthogonal odd-root sets and their Duflo–Serganova
//! twists, at the level of root data and highest weights.

use serde::{Deserialize, Serialize};

use crate::atypicality::{pairwise_orthogonal, vanishing_odd_roots};
use crate::error::{Error, Result};
use crate::rational::fmt_q;
use crate::rootdata::{Parity, Root, RootDatum};
use crate::weights::{rho_pairing, Weight};

/// `x = Σ uᵢ (+ zᵢ vᵢ)` over root vectors of the odd roots `ε_{iₐ} − δ_{kₐ}`.
/// Pairs are 0-based here and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperchargeDescriptor {
    pub pairs: Vec<(usize, usize)>,
    pub signs: Vec<i64>,
    pub homological: bool,
}

#[derive(Serialize, Deserialize)]
struct SuperchargeJson {
    roots: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signs: Option<Vec<i64>>,
    #[serde(default = "default_true")]
    homological: bool,
}

fn default_true() -> bool {
    true
}

impl Serialize for SuperchargeDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SuperchargeJson {
            roots: self.pairs.iter().map(|&(i, k)| [i + 1, k + 1]).collect(),
            signs: Some(self.signs.clone()),
            homological: self.homological,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperchargeDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SuperchargeJson::deserialize(d)?;
        if raw.roots.iter().any(|r| r[0] == 0 || r[1] == 0) {
            return Err(serde::de::Error::custom("root indices are 1-based"));
        }
        let signs = raw.signs.unwrap_or_else(|| vec![1; raw.roots.len()]);
        Ok(SuperchargeDescriptor {
            pairs: raw.roots.iter().map(|r| (r[0] - 1, r[1] - 1)).collect(),
            signs,
            homological: raw.homological,
        })
    }
}

impl SuperchargeDescriptor {
    /// Homological supercharge with all signs +1 (0-based pairs).
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        SuperchargeDescriptor { pairs: pairs.to_vec(), signs: vec![1; pairs.len()], homological: true }
    }

    /// Built from a set of odd roots, e.g. an atypicality witness.
    pub fn from_roots(roots: &[Root], m: usize) -> Result<Self> {
        let pairs = roots
            .iter()
            .map(|r| r.odd_indices(m).ok_or_else(|| Error::InvalidSupercharge(format!("{} is even", r.label(m)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperchargeDescriptor::from_pairs(&pairs))
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidSupercharge(e.to_string()))
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn roots(&self, datum: &RootDatum) -> Vec<Root> {
        self.pairs.iter().map(|&(i, k)| datum.odd_root(i, k)).collect()
    }

    pub fn validate(&self, datum: &RootDatum) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSupercharge(msg));
        if self.pairs.is_empty() {
            return bad("no roots".into());
        }
        if self.pairs.len() > datum.defect {
            return bad(format!("rank {} exceeds defect {}", self.pairs.len(), datum.defect));
        }
        if self.signs.len() != self.pairs.len() {
            return bad(format!("{} signs for {} roots", self.signs.len(), self.pairs.len()));
        }
        if self.signs.iter().any(|s| s.abs() != 1) {
            return bad("signs must be 1 or -1".into());
        }
        for (a, &(i, k)) in self.pairs.iter().enumerate() {
            if i >= datum.m || k >= datum.n {
                return bad(format!("root (e{}, d{}) out of range", i + 1, k + 1));
            }
            for &(j, l) in &self.pairs[a + 1..] {
                if i == j || k == l {
                    return bad(format!(
                        "roots e{}-d{} and e{}-d{} are not orthogonal",
                        i + 1,
                        k + 1,
                        j + 1,
                        l + 1
                    ));
                }
            }
        }
        debug_assert!(pairwise_orthogonal(&self.roots(datum), datum));
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TwistDatum {
    pub parent: RootDatum,
    /// `None` when every index is removed (sl(k|k) twisted by rank k).
    pub twisted: Option<RootDatum>,
    pub kept_eps: Vec<usize>,
    pub kept_delta: Vec<usize>,
    pub rank: usize,
    /// Positive roots of the parent orthogonal to every twist root, other
    /// than the twist roots themselves (parent coordinates).
    pub phi_x: Vec<Root>,
    /// Numbers of `+1` and `−1` signs.
    pub signature: (usize, usize),
}

#[derive(Serialize)]
pub struct TwistSummary {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub rank: usize,
    pub defect: usize,
    pub kept_eps: Vec<usize>,
    pub kept_delta: Vec<usize>,
    pub roots: Vec<String>,
    pub signature: (usize, usize),
}

impl TwistDatum {
    pub fn m(&self) -> usize {
        self.kept_eps.len()
    }

    pub fn n(&self) -> usize {
        self.kept_delta.len()
    }

    pub fn defect(&self) -> usize {
        self.m().min(self.n())
    }

    /// Kept positions in the parent's combined coordinates.
    pub fn kept_coords(&self) -> Vec<usize> {
        let m = self.parent.m;
        self.kept_eps.iter().copied().chain(self.kept_delta.iter().map(|k| m + k)).collect()
    }

    /// A parent root supported on kept indices, in twisted coordinates.
    pub fn reindex_root(&self, r: &Root) -> Root {
        Root { coords: self.kept_coords().iter().map(|&c| r.coords[c]).collect(), parity: r.parity }
    }

    /// A parent odd-root pair in twisted indices, if both survive.
    pub fn reindex_pair(&self, (i, k): (usize, usize)) -> Option<(usize, usize)> {
        Some((self.kept_eps.iter().position(|&x| x == i)?, self.kept_delta.iter().position(|&x| x == k)?))
    }

    pub fn summary(&self) -> TwistSummary {
        TwistSummary {
            m: self.m(),
            n: self.n(),
            p: self.twisted.as_ref().map_or(0, |d| d.p),
            q: self.twisted.as_ref().map_or(0, |d| d.q),
            rank: self.rank,
            defect: self.defect(),
            kept_eps: self.kept_eps.iter().map(|i| i + 1).collect(),
            kept_delta: self.kept_delta.iter().map(|k| k + 1).collect(),
            roots: self.phi_x.iter().map(|r| self.reindex_root(r).label(self.m())).collect(),
            signature: self.signature,
        }
    }
}

pub fn twist_root_datum(datum: &RootDatum, x: &SuperchargeDescriptor) -> Result<TwistDatum> {
    x.validate(datum)?;
    let removed_eps: Vec<usize> = x.pairs.iter().map(|p| p.0).collect();
    let removed_delta: Vec<usize> = x.pairs.iter().map(|p| p.1).collect();
    let kept_eps: Vec<usize> = (0..datum.m).filter(|i| !removed_eps.contains(i)).collect();
    let kept_delta: Vec<usize> = (0..datum.n).filter(|k| !removed_delta.contains(k)).collect();
    let p = kept_eps.iter().filter(|&&i| i < datum.p).count();
    let q = kept_eps.len() - p;
    let twisted = if kept_eps.is_empty() && kept_delta.is_empty() {
        None
    } else {
        Some(RootDatum::relaxed(p, q, kept_delta.len())?)
    };
    let xs = x.roots(datum);
    let phi_x = datum
        .positive_roots()
        .into_iter()
        .filter(|a| !xs.contains(a) && xs.iter().all(|b| datum.root_form(a, b) == 0))
        .collect();
    let plus = x.signs.iter().filter(|&&s| s > 0).count();
    Ok(TwistDatum {
        parent: datum.clone(),
        twisted,
        kept_eps,
        kept_delta,
        rank: x.rank(),
        phi_x,
        signature: (plus, x.rank() - plus),
    })
}

/// Deletes the twisted coordinate pairs.
pub fn restrict_weight(w: &Weight, t: &TwistDatum) -> Weight {
    Weight::new(
        t.kept_eps.iter().map(|&i| w.lam[i].clone()).collect(),
        t.kept_delta.iter().map(|&k| w.mu[k].clone()).collect(),
    )
}

/// `(w + ρ)|kept − ρ_x`: preserves every ρ-shifted pairing with kept roots.
pub fn restrict_weight_rho_shifted(w: &Weight, t: &TwistDatum) -> Weight {
    let shifted = restrict_weight(&w.add(&t.parent.rho), t);
    match &t.twisted {
        Some(d) => shifted.sub(&d.rho),
        None => shifted,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsSummand {
    pub weight: Weight,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsResult {
    pub summands: Vec<DsSummand>,
    /// False when a step used a non-simple root: the listed summand is
    /// certain, further summands are not determined.
    pub exact: bool,
}

/// DS twist of the simple module `L(Λ)` with highest weight vector of the
/// given parity.
pub fn ds_simple(lam: &Weight, parity: Parity, x: &SuperchargeDescriptor, datum: &RootDatum) -> Result<DsResult> {
    lam.check_dims(datum)?;
    x.validate(datum)?;
    let report = crate::atypicality::atypicality_degree(lam, datum);
    if report.degree < x.rank() {
        return Ok(DsResult { summands: vec![], exact: true });
    }
    let vanishing = vanishing_odd_roots(lam, datum);
    for r in x.roots(datum) {
        if !vanishing.contains(&r) {
            return Err(Error::RootNotVanishing {
                root: r.label(datum.m),
                weight: lam.to_string(),
                pairing: fmt_q(&rho_pairing(lam, &r, datum)),
            });
        }
    }
    // Rank-1 steps in the order of the root list.
    let mut current = vec![DsSummand { weight: lam.clone(), parity }];
    let mut cur_datum = datum.clone();
    let mut pending = x.pairs.clone();
    let mut exact = true;
    while let Some(&pair) = pending.first() {
        let step = SuperchargeDescriptor::from_pairs(&[pair]);
        let t = twist_root_datum(&cur_datum, &step)?;
        let simple = cur_datum.odd_simple_index().map(|j| cur_datum.simple_roots[j].clone())
            == Some(cur_datum.odd_root(pair.0, pair.1));
        let mut next = vec![];
        for s in &current {
            let main = restrict_weight_rho_shifted(&s.weight, &t);
            push_unique(&mut next, DsSummand { weight: main, parity: s.parity });
        }
        exact &= simple;
        current = next;
        pending = pending[1..].iter().filter_map(|&p| t.reindex_pair(p)).collect();
        match t.twisted {
            Some(d) => cur_datum = d,
            None => break,
        }
    }
    Ok(DsResult { summands: current, exact })
}

fn push_unique(v: &mut Vec<DsSummand>, s: DsSummand) {
    if !v.iter().any(|t| t.parity == s.parity && t.weight.same_representative(&s.weight)) {
        v.push(s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atypicality::atypicality_degree;

    #[test]
    fn sl21_twist_is_empty() {
        let d = RootDatum::new(1, 1, 1).unwrap();
        let x = SuperchargeDescriptor::from_pairs(&[(1, 0)]);
        let t = twist_root_datum(&d, &x).unwrap();
        assert!(t.phi_x.is_empty());
        assert_eq!((t.m(), t.n()), (1, 0));
        assert_eq!(restrict_weight(&Weight::zero(2, 1), &t), Weight::zero(1, 0));
        let r = ds_simple(&Weight::zero(2, 1), Parity::Even, &x, &d).unwrap();
        assert!(r.exact);
        assert_eq!(r.summands.len(), 1);
        assert!(r.summands[0].weight.is_zero_mod_shift());
    }

    #[test]
    fn sl32_rank_one_root_counts() {
        let d = RootDatum::new(2, 1, 2).unwrap();
        let x = SuperchargeDescriptor::from_pairs(&[(2, 0)]);
        let t = twist_root_datum(&d, &x).unwrap();
        let even = t.phi_x.iter().filter(|r| !r.is_odd()).count();
        let odd = t.phi_x.iter().filter(|r| r.is_odd()).count();
        assert_eq!((even, odd), (1, 2));
        let tw = t.twisted.as_ref().unwrap();
        let mut mapped: Vec<Root> = t.phi_x.iter().map(|r| t.reindex_root(r)).collect();
        let mut expect = tw.positive_roots();
        mapped.sort();
        expect.sort();
        assert_eq!(mapped, expect);
    }

    #[test]
    fn typical_weight_twists_to_zero() {
        let d = RootDatum::new(1, 1, 1).unwrap();
        let x = SuperchargeDescriptor::from_pairs(&[(1, 0)]);
        let r = ds_simple(&Weight::from_ints(&[-3, 0], &[1]), Parity::Even, &x, &d).unwrap();
        assert!(r.summands.is_empty());
    }

    #[test]
    fn nonvanishing_root_is_reported() {
        let d = RootDatum::new(1, 1, 1).unwrap();
        let x = SuperchargeDescriptor::from_pairs(&[(0, 0)]);
        let e = ds_simple(&Weight::zero(2, 1), Parity::Even, &x, &d).unwrap_err();
        assert_eq!(e.kind(), "RootNotVanishing");
    }

    #[test]
    fn maximal_witness_twist_on_sl33() {
        let d = RootDatum::new(1, 2, 3).unwrap();
        let rep = atypicality_degree(&Weight::zero(3, 3), &d);
        let x = SuperchargeDescriptor::from_roots(&rep.witness, 3).unwrap();
        assert_eq!(x.rank(), 3);
        let t = twist_root_datum(&d, &x).unwrap();
        assert!(t.twisted.is_none());
        let r = ds_simple(&Weight::zero(3, 3), Parity::Even, &x, &d).unwrap();
        assert_eq!(r.summands.len(), 1);
    }

    #[test]
    fn invalid_descriptors() {
        let d = RootDatum::new(1, 2, 2).unwrap();
        for x in [
            SuperchargeDescriptor::from_pairs(&[(0, 0), (0, 1)]),
            SuperchargeDescriptor::from_pairs(&[(0, 0), (1, 0)]),
            SuperchargeDescriptor::from_pairs(&[(3, 0)]),
            SuperchargeDescriptor::from_pairs(&[]),
        ] {
            assert_eq!(x.validate(&d).unwrap_err().kind(), "InvalidSupercharge");
        }
    }

    #[test]
    fn json_is_one_based() {
        let x = SuperchargeDescriptor::parse_json(r#"{"roots":[[2,1]]}"#).unwrap();
        assert_eq!(x.pairs, vec![(1, 0)]);
        assert_eq!(x.signs, vec![1]);
        assert!(x.homological);
        let back = serde_json::to_string(&x).unwrap();
        assert_eq!(SuperchargeDescriptor::parse_json(&back).unwrap(), x);
        assert!(SuperchargeDescriptor::parse_json(r#"{"roots":[[0,1]]}"#).is_err());
    }
}
