//! Weights of sl(m|n) as exact rational tuples `(λ¹..λᵐ | μ¹..μⁿ)`, compared
//! modulo the shift vector `(1,…,1 | −1,…,−1)`.
//!
//! Also: the Jakobsen parameters of a weight, the (Δ, r) labels, ρ-shifted
//! pairings and the integrality predicate.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, qr, vec_as_str, Q};
use crate::rootdata::{Root, RootDatum};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Weight {
    #[serde(rename = "lambda", with = "vec_as_str")]
    pub lam: Vec<Q>,
    #[serde(with = "vec_as_str")]
    pub mu: Vec<Q>,
}

impl Weight {
    pub fn new(lam: Vec<Q>, mu: Vec<Q>) -> Self {
        Weight { lam, mu }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Weight::new(vec![Q::zero(); m], vec![Q::zero(); n])
    }

    /// The shift vector `(1,…,1 | −1,…,−1)`.
    pub fn shift(m: usize, n: usize) -> Self {
        Weight::new(vec![Q::one(); m], vec![-Q::one(); n])
    }

    pub fn from_ints(lam: &[i64], mu: &[i64]) -> Self {
        Weight::new(lam.iter().map(|&x| q(x)).collect(), mu.iter().map(|&x| q(x)).collect())
    }

    /// Weight with the given combined coordinates (ε block first).
    pub fn from_coords(m: usize, coords: &[Q]) -> Self {
        Weight::new(coords[..m].to_vec(), coords[m..].to_vec())
    }

    pub fn m(&self) -> usize {
        self.lam.len()
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn coords(&self) -> Vec<Q> {
        self.lam.iter().chain(self.mu.iter()).cloned().collect()
    }

    /// Parses the compact form `"−1,0|1"`; rationals may be written `p/q`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParseWeight {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (l, r) = s.split_once('|').ok_or_else(|| err("missing '|' separating λ and μ"))?;
        if r.contains('|') {
            return Err(err("more than one '|'"));
        }
        let block = |b: &str| -> Result<Vec<Q>> {
            if b.trim().is_empty() {
                return Ok(vec![]);
            }
            b.split(',')
                .map(|t| parse_q(t).ok_or_else(|| err(&format!("bad rational {:?}", t.trim()))))
                .collect()
        };
        Ok(Weight::new(block(l)?, block(r)?))
    }

    /// Parses and checks the block sizes against an algebra.
    pub fn parse_for(s: &str, datum: &RootDatum) -> Result<Self> {
        let w = Weight::parse(s)?;
        w.check_dims(datum)?;
        Ok(w)
    }

    pub fn check_dims(&self, datum: &RootDatum) -> Result<()> {
        if self.m() != datum.m || self.n() != datum.n {
            return Err(Error::DimensionMismatch {
                expected: format!("({}|{})", datum.m, datum.n),
                got: format!("({}|{})", self.m(), self.n()),
            });
        }
        Ok(())
    }

    fn same_shape(&self, other: &Weight) -> bool {
        self.m() == other.m() && self.n() == other.n()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert!(self.same_shape(other), "weight shapes differ");
        Weight::new(
            self.lam.iter().zip(&other.lam).map(|(a, b)| a + b).collect(),
            self.mu.iter().zip(&other.mu).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight::new(
            self.lam.iter().map(|a| a * c).collect(),
            self.mu.iter().map(|a| a * c).collect(),
        )
    }

    pub fn add_root(&self, root: &Root, c: i64) -> Weight {
        self.add(&root.to_weight(self.m()).scale(&q(c)))
    }

    /// `self + t·shift`.
    pub fn shifted(&self, t: &Q) -> Weight {
        Weight::new(
            self.lam.iter().map(|a| a + t).collect(),
            self.mu.iter().map(|a| a - t).collect(),
        )
    }

    /// Exact coordinate equality (no shift quotient).
    pub fn same_representative(&self, other: &Weight) -> bool {
        self.lam == other.lam && self.mu == other.mu
    }

    pub fn is_zero_mod_shift(&self) -> bool {
        *self == Weight::zero(self.m(), self.n())
    }
}

impl PartialEq for Weight {
    /// Equality modulo the shift vector.
    fn eq(&self, other: &Self) -> bool {
        if !self.same_shape(other) {
            return false;
        }
        let d = self.sub(other);
        let t = match (d.lam.first(), d.mu.first()) {
            (Some(a), _) => a.clone(),
            (None, Some(b)) => -b.clone(),
            (None, None) => return true,
        };
        d.lam.iter().all(|x| *x == t) && d.mu.iter().all(|x| *x == -t.clone())
    }
}

impl Eq for Weight {}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.lam.iter().map(fmt_q).collect();
        let r: Vec<String> = self.mu.iter().map(fmt_q).collect();
        write!(f, "{}|{}", l.join(","), r.join(","))
    }
}

/// Representative with `λ¹ + λᵐ = 2μⁿ`. With an empty block the other block
/// is pinned instead (`λᵐ = 0` when n = 0, `μⁿ = 0` when m = 0).
pub fn canonicalize(w: &Weight) -> Weight {
    let (m, n) = (w.m(), w.n());
    let t = if m >= 1 && n >= 1 {
        (q(2) * &w.mu[n - 1] - &w.lam[0] - &w.lam[m - 1]) / q(4)
    } else if m >= 1 {
        -w.lam[m - 1].clone()
    } else if n >= 1 {
        w.mu[n - 1].clone()
    } else {
        Q::zero()
    };
    w.shifted(&t)
}

/// All of λⁱ − λʲ, μᵏ − μˡ and λⁱ + μᵏ are integers.
pub fn is_integral(w: &Weight) -> bool {
    let int = |x: &Q| x.is_integer();
    let lam_ok = w.lam.windows(2).all(|p| int(&(&p[0] - &p[1])));
    let mu_ok = w.mu.windows(2).all(|p| int(&(&p[0] - &p[1])));
    let mix_ok = match (w.lam.first(), w.mu.first()) {
        (Some(a), Some(b)) => int(&(a + b)),
        _ => true,
    };
    lam_ok && mu_ok && mix_ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JakobsenParams {
    /// a₂..a_{m−1}
    #[serde(with = "vec_as_str")]
    pub a: Vec<Q>,
    /// b₁..b_{n−1}
    #[serde(with = "vec_as_str")]
    pub b: Vec<Q>,
    #[serde(with = "crate::rational::as_str")]
    pub uplambda: Q,
    #[serde(with = "crate::rational::as_str")]
    pub upalpha: Q,
    pub i0: usize,
    pub j0: usize,
    pub len1: usize,
    pub len2: usize,
    pub len3: usize,
}

impl JakobsenParams {
    /// Full `a₁..aₘ` with the pinned zeros at both ends.
    pub fn a_full(&self, m: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); m];
        for (i, x) in self.a.iter().enumerate() {
            v[i + 1] = x.clone();
        }
        v
    }
}

pub fn jakobsen_params(w: &Weight, datum: &RootDatum) -> Result<JakobsenParams> {
    w.check_dims(datum)?;
    let (m, n, p, qq) = (datum.m, datum.n, datum.p, datum.q);
    if p == 0 || qq == 0 {
        return Err(Error::RequiresNoncompactSplit { p, q: qq });
    }
    let c = canonicalize(w);
    let up_l = &c.lam[0] - &c.lam[m - 1];
    let up_a = &c.lam[0] + &c.lam[m - 1];
    let two = q(2);
    let a_full: Vec<Q> = (0..m)
        .map(|i| {
            if i < p {
                &c.lam[i] - (&up_l + &up_a) / &two
            } else {
                &c.lam[i] - (&up_a - &up_l) / &two
            }
        })
        .collect();
    let b_full: Vec<Q> = c.mu.iter().map(|x| x - &up_a / &two).collect();

    // i0: largest index in 1..p with a_i = 0 (a_1 = 0 always).
    let i0 = (1..=p).filter(|&i| a_full[i - 1].is_zero()).max().unwrap_or(1);
    // j0 = q when a_{p+1} = 0, else the smallest j with a_{m−j} ≠ 0.
    let j0 = if a_full[p].is_zero() {
        qq
    } else {
        (1..m).find(|&j| !a_full[m - j - 1].is_zero()).unwrap_or(qq)
    };
    let len1 = (2..=p).filter(|&i| c.lam[0] != c.lam[i - 1]).count();
    let len2 = (p + 1..m).filter(|&j| c.lam[j - 1] != c.lam[m - 1]).count();
    let len3 = (1..n).filter(|&k| c.mu[k - 1] != c.mu[n - 1]).count();

    Ok(JakobsenParams {
        a: if m >= 2 { a_full[1..m - 1].to_vec() } else { vec![] },
        b: if n >= 1 { b_full[..n - 1].to_vec() } else { vec![] },
        uplambda: up_l,
        upalpha: up_a,
        i0,
        j0,
        len1,
        len2,
        len3,
    })
}

/// Inverse of [`jakobsen_params`]: the canonical weight with these parameters.
pub fn reconstruct(params: &JakobsenParams, datum: &RootDatum) -> Weight {
    let (m, n, p) = (datum.m, datum.n, datum.p);
    let a = params.a_full(m);
    let half_l = &params.uplambda / q(2);
    let half_a = &params.upalpha / q(2);
    let lam = (0..m)
        .map(|i| {
            let s = if i < p { &half_l } else { &-half_l.clone() };
            &a[i] + s + &half_a
        })
        .collect();
    let mu = (0..n)
        .map(|k| {
            let b = if k + 1 < n { params.b[k].clone() } else { Q::zero() };
            b + &half_a
        })
        .collect();
    Weight::new(lam, mu)
}

/// The conformal dimension Δ = Λ(H) and R-charge r = Λ(J).
///
/// Both are shift-invariant. Δ needs both noncompact blocks; for m = n the
/// R-charge is `Σλ + Σμ`.
pub fn delta_r(w: &Weight, datum: &RootDatum) -> Result<(Q, Q)> {
    let d = delta(w, datum)?;
    Ok((d, r_charge(w, datum)?))
}

pub fn delta(w: &Weight, datum: &RootDatum) -> Result<Q> {
    w.check_dims(datum)?;
    let (m, p, qq) = (datum.m, datum.p, datum.q);
    if p == 0 || qq == 0 {
        return Err(Error::RequiresNoncompactSplit { p, q: qq });
    }
    let s1: Q = w.lam[..p].iter().sum();
    let s2: Q = w.lam[p..].iter().sum();
    Ok(qr(2, m as i64) * (q(qq as i64) * s1 - q(p as i64) * s2))
}

pub fn r_charge(w: &Weight, datum: &RootDatum) -> Result<Q> {
    w.check_dims(datum)?;
    let (m, n) = (datum.m as i64, datum.n as i64);
    let sl: Q = w.lam.iter().sum();
    let sm: Q = w.mu.iter().sum();
    Ok(if m == n {
        sl + sm
    } else {
        (q(n) * sl + q(m) * sm) / q(n - m)
    })
}

/// `(w + ρ, α)`.
pub fn rho_pairing(w: &Weight, alpha: &Root, datum: &RootDatum) -> Q {
    datum.pair(&w.add(&datum.rho), alpha)
}

/// sl(2|1) with p = q = 1: the weight `((Δ−r)/2, (−Δ−r)/2 | 0)` with labels (Δ, r).
pub fn sl21_weight_from_delta_r(delta: &Q, r: &Q) -> Weight {
    let two = q(2);
    Weight::new(vec![(delta - r) / &two, (-delta.clone() - r) / &two], vec![Q::zero()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl21() -> RootDatum {
        RootDatum::new(1, 1, 1).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let w = Weight::parse("\u{2212}1, 0|1/2").unwrap();
        assert_eq!(w.lam, vec![q(-1), q(0)]);
        assert_eq!(w.mu, vec![qr(1, 2)]);
        assert_eq!(w.to_string(), "-1,0|1/2");
        assert!(Weight::parse("0,0").is_err());
        assert!(Weight::parse("0,a|0").is_err());
        assert!(Weight::parse_for("0,0,0|0", &sl21()).is_err());
    }

    #[test]
    fn equality_is_modulo_shift() {
        let w = Weight::from_ints(&[1, 2], &[3]);
        assert_eq!(w, w.shifted(&qr(7, 3)));
        assert_ne!(w, Weight::from_ints(&[1, 2], &[4]));
    }

    #[test]
    fn canonical_forms() {
        let c = canonicalize(&Weight::from_ints(&[-1, 0], &[1]));
        assert!(c.same_representative(&Weight::new(
            vec![qr(-1, 4), qr(3, 4)],
            vec![qr(1, 4)]
        )));
        assert!(canonicalize(&Weight::zero(2, 1)).same_representative(&Weight::zero(2, 1)));
    }

    #[test]
    fn jakobsen_examples() {
        let d = sl21();
        let j = jakobsen_params(&Weight::zero(2, 1), &d).unwrap();
        assert_eq!((j.uplambda.clone(), j.upalpha.clone()), (q(0), q(0)));
        assert!(j.a.is_empty() && j.b.is_empty());
        let j = jakobsen_params(&Weight::from_ints(&[-1, 0], &[1]), &d).unwrap();
        assert_eq!(j.uplambda, q(-1));
        assert_eq!(j.upalpha, qr(1, 2));
        assert!(jakobsen_params(&Weight::zero(3, 1), &RootDatum::new(3, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn delta_r_of_roots() {
        let d = sl21();
        let qroot = Root::odd(2, 1, 1, 0);
        let sroot = Root::odd(2, 1, 0, 0);
        assert_eq!(delta_r(&qroot.to_weight(2), &d).unwrap(), (q(-1), q(1)));
        assert_eq!(delta_r(&sroot.to_weight(2), &d).unwrap(), (q(1), q(1)));
        assert_eq!(delta_r(&Weight::zero(2, 1), &d).unwrap(), (q(0), q(0)));
        let w = sl21_weight_from_delta_r(&qr(-3, 2), &qr(1, 2));
        assert_eq!(delta_r(&w, &d).unwrap(), (qr(-3, 2), qr(1, 2)));
    }

    #[test]
    fn rho_pairing_examples() {
        let d = sl21();
        let w = Weight::zero(2, 1);
        assert_eq!(rho_pairing(&w, &Root::odd(2, 1, 1, 0), &d), q(0));
        assert_eq!(rho_pairing(&w, &Root::odd(2, 1, 0, 0), &d), q(1));
    }

    #[test]
    fn integrality() {
        assert!(is_integral(&Weight::from_ints(&[3, -1], &[2])));
        assert!(is_integral(&Weight::new(vec![qr(1, 2), qr(-1, 2)], vec![qr(1, 2)])));
        assert!(!is_integral(&Weight::new(vec![qr(1, 2), q(0)], vec![q(0)])));
    }
}
