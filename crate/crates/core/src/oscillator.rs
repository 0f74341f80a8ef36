//! Exact matrix model of the su(1,1|1) oscillator supermodules on the
//! truncation `span{xᵃηᵇ : a ≤ N, b ≤ 1}` of ℂ[x, η].
//!
//! Operators are dense matrices over Gaussian rationals in the monomial basis
//! (index `2a + b`). Differential operators move the x-degree by at most 2, so
//! products are faithful on columns of degree ≤ N − 2 (the interior block) and
//! every identity is checked there.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use crate::characters::OscillatorSector;
use crate::error::{Error, Result};
use crate::linalg::{is_hermitian, is_psd_hermitian, nullspace, rank, C};
use crate::rational::{fmt_q, parse_q, q, qr, to_f64, Q};
use crate::rootdata::Parity;

fn c(x: Q) -> C {
    C::new(x, Q::zero())
}

fn ci(re: i64) -> C {
    c(q(re))
}

pub fn fmt_c(z: &C) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => fmt_q(&z.re),
        (true, false) => format!("{}i", fmt_q(&z.im)),
        _ => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", fmt_q(&z.re), sign, fmt_q(&z.im.abs()))
        }
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with rational `a`, `b`.
pub fn parse_gaussian(s: &str) -> Option<C> {
    let t = s.replace('−', "-").replace(' ', "");
    let Some(body) = t.strip_suffix('i') else {
        return parse_q(&t).map(c);
    };
    let split = body.char_indices().rev().find(|&(k, ch)| k > 0 && (ch == '+' || ch == '-')).map(|(k, _)| k);
    let (re, im) = match split {
        Some(k) => (parse_q(&body[..k])?, &body[k..]),
        None => (Q::zero(), body),
    };
    let im = match im {
        "" | "+" => Q::one(),
        "-" => -Q::one(),
        x => parse_q(x.trim_start_matches('+'))?,
    };
    Some(C::new(re, im))
}

/// `|z|²` as an exact rational.
pub fn norm_sqr(z: &C) -> Q {
    &z.re * &z.re + &z.im * &z.im
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedFock {
    pub n: usize,
}

impl TruncatedFock {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Unsupported(format!("truncation degree {n} is below 4")));
        }
        Ok(TruncatedFock { n })
    }

    pub fn dim(&self) -> usize {
        2 * (self.n + 1)
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        2 * a + b
    }

    pub fn monomial(&self, idx: usize) -> (usize, usize) {
        (idx / 2, idx % 2)
    }

    /// `⟨xᵃηᵇ, xᵃηᵇ⟩ = a!`.
    pub fn norm(&self, idx: usize) -> Q {
        let (a, _) = self.monomial(idx);
        (1..=a as i64).fold(Q::one(), |acc, k| acc * q(k))
    }

    /// Super parity: the η-degree.
    pub fn parity(&self, idx: usize) -> Parity {
        Parity::from_count(self.monomial(idx).1 as i64)
    }

    /// `𝒪⁺` for even total degree, `𝒪⁻` for odd.
    pub fn sector(&self, idx: usize) -> OscillatorSector {
        let (a, b) = self.monomial(idx);
        if (a + b) % 2 == 0 {
            OscillatorSector::Plus
        } else {
            OscillatorSector::Minus
        }
    }

    /// `(Δ, r) = (−a − 1/2, b − 1/2)`, the eigenvalues of H and J.
    pub fn weight_label(&self, idx: usize) -> (Q, Q) {
        let (a, b) = self.monomial(idx);
        (-q(a as i64) - qr(1, 2), q(b as i64) - qr(1, 2))
    }

    pub fn interior(&self, idx: usize) -> bool {
        self.monomial(idx).0 + 2 <= self.n
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.interior(i)).collect()
    }

    fn op(&self, parity: Parity, f: impl Fn(usize, usize) -> Option<(usize, usize, C)>) -> FockOperator {
        let d = self.dim();
        let mut mat = vec![vec![C::zero(); d]; d];
        for col in 0..d {
            let (a, b) = self.monomial(col);
            if let Some((a2, b2, v)) = f(a, b) {
                if a2 <= self.n {
                    mat[self.index(a2, b2)][col] = v;
                }
            }
        }
        FockOperator { mat, parity }
    }

    pub fn identity(&self) -> FockOperator {
        self.op(Parity::Even, |a, b| Some((a, b, ci(1))))
    }

    pub fn x(&self) -> FockOperator {
        self.op(Parity::Even, |a, b| Some((a + 1, b, ci(1))))
    }

    pub fn dx(&self) -> FockOperator {
        self.op(Parity::Even, |a, b| (a > 0).then(|| (a - 1, b, ci(a as i64))))
    }

    pub fn eta(&self) -> FockOperator {
        self.op(Parity::Odd, |a, b| (b == 0).then_some((a, 1, ci(1))))
    }

    pub fn deta(&self) -> FockOperator {
        self.op(Parity::Odd, |a, b| (b == 1).then_some((a, 0, ci(1))))
    }

    /// `(−1)^b`.
    pub fn parity_operator(&self) -> FockOperator {
        self.op(Parity::Even, |a, b| Some((a, b, ci(if b == 0 { 1 } else { -1 }))))
    }

    pub fn basis_vector(&self, a: usize, b: usize) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim()];
        v[self.index(a, b)] = ci(1);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockOperator {
    pub mat: Vec<Vec<C>>,
    pub parity: Parity,
}

impl FockOperator {
    fn dim(&self) -> usize {
        self.mat.len()
    }

    pub fn compose(&self, other: &FockOperator) -> FockOperator {
        let d = self.dim();
        let mut mat = vec![vec![C::zero(); d]; d];
        for i in 0..d {
            for k in 0..d {
                if self.mat[i][k].is_zero() {
                    continue;
                }
                for j in 0..d {
                    if !other.mat[k][j].is_zero() {
                        mat[i][j] = &mat[i][j] + &self.mat[i][k] * &other.mat[k][j];
                    }
                }
            }
        }
        let parity = if self.parity == other.parity { Parity::Even } else { Parity::Odd };
        FockOperator { mat, parity }
    }

    /// Sum of operators of the same parity.
    pub fn plus(&self, other: &FockOperator) -> FockOperator {
        let mat = self
            .mat
            .iter()
            .zip(&other.mat)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        FockOperator { mat, parity: self.parity }
    }

    pub fn scale(&self, z: &C) -> FockOperator {
        let mat = self.mat.iter().map(|r| r.iter().map(|a| a * z).collect()).collect();
        FockOperator { mat, parity: self.parity }
    }

    pub fn minus(&self, other: &FockOperator) -> FockOperator {
        self.plus(&other.scale(&ci(-1)))
    }

    /// `[A, B] = AB − (−1)^{|A||B|} BA`.
    pub fn bracket(&self, other: &FockOperator) -> FockOperator {
        let ab = self.compose(other);
        let ba = other.compose(self);
        if self.parity == Parity::Odd && other.parity == Parity::Odd {
            ab.plus(&ba)
        } else {
            ab.minus(&ba)
        }
    }

    /// Adjoint for the weighted inner product: `(A†)ᵢⱼ = conj(Aⱼᵢ) wⱼ / wᵢ`.
    pub fn adjoint(&self, fock: &TruncatedFock) -> FockOperator {
        let d = self.dim();
        let w: Vec<Q> = (0..d).map(|i| fock.norm(i)).collect();
        let mut mat = vec![vec![C::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                if !self.mat[j][i].is_zero() {
                    mat[i][j] = self.mat[j][i].conj() * c(&w[j] / &w[i]);
                }
            }
        }
        FockOperator { mat, parity: self.parity }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        self.mat.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Equality on the columns of the interior block.
    pub fn eq_on_interior(&self, other: &FockOperator, fock: &TruncatedFock) -> bool {
        fock.interior_indices()
            .into_iter()
            .all(|j| (0..self.dim()).all(|i| self.mat[i][j] == other.mat[i][j]))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    E,
    H,
    F,
    J,
    Q,
    Qbar,
    S,
    Sbar,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::E,
        Generator::H,
        Generator::F,
        Generator::J,
        Generator::Q,
        Generator::Qbar,
        Generator::S,
        Generator::Sbar,
    ];
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::E => "E",
            Generator::H => "H",
            Generator::F => "F",
            Generator::J => "J",
            Generator::Q => "Q",
            Generator::Qbar => "Qbar",
            Generator::S => "S",
            Generator::Sbar => "Sbar",
        };
        f.write_str(s)
    }
}

pub struct Generators {
    pub fock: TruncatedFock,
    pub ops: BTreeMap<Generator, FockOperator>,
    /// `(−1)^F`.
    pub parity: FockOperator,
}

impl Generators {
    pub fn get(&self, g: Generator) -> &FockOperator {
        &self.ops[&g]
    }
}

/// E = −½∂ₓ², H = −x∂ₓ − ½, F = ½x², J = η∂η − ½,
/// Q = ηx, Q̄ = ∂η x, S = −η∂ₓ, S̄ = ∂η∂ₓ, and the parity (−1)^F.
pub fn build_generators(n: usize) -> Result<Generators> {
    let fock = TruncatedFock::new(n)?;
    let (x, dx, eta, deta, id) = (fock.x(), fock.dx(), fock.eta(), fock.deta(), fock.identity());
    let half = c(qr(1, 2));
    let mut ops = BTreeMap::new();
    ops.insert(Generator::E, dx.compose(&dx).scale(&-half.clone()));
    ops.insert(Generator::H, x.compose(&dx).scale(&ci(-1)).minus(&id.scale(&half)));
    ops.insert(Generator::F, x.compose(&x).scale(&half));
    ops.insert(Generator::J, eta.compose(&deta).minus(&id.scale(&half)));
    ops.insert(Generator::Q, eta.compose(&x));
    ops.insert(Generator::Qbar, deta.compose(&x));
    ops.insert(Generator::S, eta.compose(&dx).scale(&ci(-1)));
    ops.insert(Generator::Sbar, deta.compose(&dx));
    Ok(Generators { parity: fock.parity_operator(), fock, ops })
}

/// The full bracket table: every unordered pair, with the expected result
/// as a combination of generators (empty for 0).
pub fn bracket_table() -> Vec<(Generator, Generator, Vec<(i64, Generator)>)> {
    use Generator::*;
    let nonzero: Vec<(Generator, Generator, Vec<(i64, Generator)>)> = vec![
        (E, H, vec![(-2, E)]),
        (E, F, vec![(1, H)]),
        (H, F, vec![(-2, F)]),
        (E, Q, vec![(1, S)]),
        (E, Qbar, vec![(-1, Sbar)]),
        (F, S, vec![(1, Q)]),
        (F, Sbar, vec![(-1, Qbar)]),
        (H, Q, vec![(-1, Q)]),
        (H, Qbar, vec![(-1, Qbar)]),
        (H, S, vec![(1, S)]),
        (H, Sbar, vec![(1, Sbar)]),
        (J, Q, vec![(1, Q)]),
        (J, Qbar, vec![(-1, Qbar)]),
        (J, S, vec![(1, S)]),
        (J, Sbar, vec![(-1, Sbar)]),
        (Q, Qbar, vec![(2, F)]),
        (Q, Sbar, vec![(-1, H), (-1, J)]),
        (Qbar, S, vec![(1, H), (-1, J)]),
        (S, Sbar, vec![(2, E)]),
    ];
    let mut out = vec![];
    for (i, &a) in Generator::ALL.iter().enumerate() {
        for &b in &Generator::ALL[i..] {
            let rhs = nonzero
                .iter()
                .find(|(x, y, _)| (*x, *y) == (a, b))
                .map(|t| t.2.clone())
                .unwrap_or_default();
            out.push((a, b, rhs));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketCheck {
    pub left: Generator,
    pub right: Generator,
    pub expected: String,
    pub holds: bool,
}

fn combination(gens: &Generators, terms: &[(i64, Generator)], parity: Parity) -> FockOperator {
    let d = gens.fock.dim();
    let mut acc = FockOperator { mat: vec![vec![C::zero(); d]; d], parity };
    for (k, g) in terms {
        acc = acc.plus(&gens.get(*g).scale(&ci(*k)));
    }
    acc
}

fn fmt_combination(terms: &[(i64, Generator)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .enumerate()
        .map(|(i, (k, g))| match (i, *k) {
            (0, 1) => format!("{g}"),
            (0, -1) => format!("-{g}"),
            (_, 1) => format!(" + {g}"),
            (_, -1) => format!(" - {g}"),
            (0, k) => format!("{k}{g}"),
            (_, k) if k < 0 => format!(" - {}{g}", -k),
            (_, k) => format!(" + {k}{g}"),
        })
        .collect()
}

pub fn check_brackets(gens: &Generators) -> Vec<BracketCheck> {
    bracket_table()
        .into_iter()
        .map(|(a, b, rhs)| {
            let lhs = gens.get(a).bracket(gens.get(b));
            let expected = combination(gens, &rhs, lhs.parity);
            BracketCheck {
                left: a,
                right: b,
                expected: fmt_combination(&rhs),
                holds: lhs.eq_on_interior(&expected, &gens.fock),
            }
        })
        .collect()
}

/// `Q† = S̄` and `S† = −Q̄` on the interior block.
pub fn check_adjunctions(gens: &Generators) -> (bool, bool) {
    let f = &gens.fock;
    let q_adj = gens.get(Generator::Q).adjoint(f);
    let s_adj = gens.get(Generator::S).adjoint(f);
    (
        q_adj.eq_on_interior(gens.get(Generator::Sbar), f),
        s_adj.eq_on_interior(&gens.get(Generator::Qbar).scale(&ci(-1)), f),
    )
}

/// `Q_(r,t) = rQ − tS = η(rx + t∂ₓ)`.
pub fn family_supercharge(r: &C, t: &C, gens: &Generators) -> Result<FockOperator> {
    if r.is_zero() && t.is_zero() {
        return Err(Error::ZeroSupercharge);
    }
    Ok(gens.get(Generator::Q).scale(r).minus(&gens.get(Generator::S).scale(t)))
}

/// `[Q_(r,t), Q_(r,t)†] = −|r|²(H+J) + |t|²(J−H) + 2r t̄ F − 2 r̄ t E`.
pub fn family_xi_expected(r: &C, t: &C, gens: &Generators) -> FockOperator {
    let (h, j) = (gens.get(Generator::H), gens.get(Generator::J));
    let r2 = c(norm_sqr(r));
    let t2 = c(norm_sqr(t));
    h.plus(j)
        .scale(&-r2)
        .plus(&j.minus(h).scale(&t2))
        .plus(&gens.get(Generator::F).scale(&(r * t.conj() * ci(2))))
        .minus(&gens.get(Generator::E).scale(&(r.conj() * t * ci(2))))
}

/// Weighted Gram form `W·Ξ` restricted to the interior block.
pub fn interior_gram(op: &FockOperator, fock: &TruncatedFock) -> Vec<Vec<C>> {
    let idx = fock.interior_indices();
    idx.iter()
        .map(|&i| idx.iter().map(|&j| &op.mat[i][j] * c(fock.norm(i))).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub squares_to_zero: bool,
    pub adjoint_matches: bool,
    pub xi_matches: bool,
    pub xi_hermitian: bool,
    pub xi_psd: bool,
}

pub fn check_family(r: &C, t: &C, gens: &Generators) -> Result<FamilyCheck> {
    let f = &gens.fock;
    let qrt = family_supercharge(r, t, gens)?;
    let adj = qrt.adjoint(f);
    let expected_adj = gens
        .get(Generator::Sbar)
        .scale(&r.conj())
        .plus(&gens.get(Generator::Qbar).scale(&t.conj()));
    let xi = qrt.bracket(&adj);
    let gram = interior_gram(&xi, f);
    Ok(FamilyCheck {
        squares_to_zero: qrt.compose(&qrt).is_zero(),
        adjoint_matches: adj.eq_on_interior(&expected_adj, f),
        xi_matches: xi.eq_on_interior(&family_xi_expected(r, t, gens), f),
        xi_hermitian: is_hermitian(&gram),
        xi_psd: is_psd_hermitian(&gram),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalKernel {
    pub dimension: usize,
    /// Coefficients of `x^{2k}` in the even kernel vector (constant term 1).
    pub f_plus: Vec<String>,
    /// Coefficients of `ηx^{2k}` in the odd kernel vector.
    pub f_minus: Vec<String>,
}

/// Joint kernel of `Q_(r,t)` and its adjoint among vectors of degree ≤ N − 2,
/// imposing the equations in degrees ≤ N − 3 (the ones the truncation does
/// not cut).
pub fn formal_kernel(r: &C, t: &C, n: usize) -> Result<FormalKernel> {
    if r.is_zero() || t.is_zero() {
        return Err(Error::Unsupported("formal kernel needs r and t nonzero".into()));
    }
    let gens = build_generators(n)?;
    let f = &gens.fock;
    let qrt = family_supercharge(r, t, &gens)?;
    let adj = qrt.adjoint(f);
    let unknowns = f.interior_indices();
    let rows: Vec<usize> = (0..f.dim()).filter(|&i| f.monomial(i).0 + 3 <= n).collect();
    let mut system = vec![];
    for op in [&qrt, &adj] {
        for &i in &rows {
            system.push(unknowns.iter().map(|&j| op.mat[i][j].clone()).collect::<Vec<C>>());
        }
    }
    let ker = nullspace(&system, unknowns.len());
    let mut f_plus = vec![];
    let mut f_minus = vec![];
    for v in &ker {
        let full: BTreeMap<(usize, usize), C> =
            unknowns.iter().zip(v).map(|(&j, x)| (f.monomial(j), x.clone())).collect();
        let lead_even = full.get(&(0, 0)).cloned().unwrap_or_else(C::zero);
        let lead_odd = full.get(&(0, 1)).cloned().unwrap_or_else(C::zero);
        let (lead, b, out) = if !lead_even.is_zero() {
            (lead_even, 0, &mut f_plus)
        } else {
            (lead_odd, 1, &mut f_minus)
        };
        if lead.is_zero() {
            continue;
        }
        *out = (0..=(n - 2) / 2).map(|k| fmt_c(&(full[&(2 * k, b)].clone() / lead.clone()))).collect();
    }
    Ok(FormalKernel { dimension: ker.len(), f_plus, f_minus })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    /// `ρ = |r/t|²` for f₊ (or `|t/r|²` for f₋).
    #[serde(with = "crate::rational::as_str")]
    pub ratio: Q,
    pub order: usize,
    /// Exact partial sum `Σ_{k≤K} (ρ/4)^k (2k)!/(k!)²`.
    #[serde(with = "crate::rational::as_str")]
    pub partial_sum: Q,
    pub partial_sum_f64: f64,
    pub converges: bool,
    /// `(1 − ρ)^{−1/2}` when ρ < 1.
    pub closed_form: Option<f64>,
}

/// Partial sums of `Σ (ρ/4)^k (2k)!/(k!)²` for a given ρ ≥ 0.
pub fn norm_series_ratio(ratio: &Q, order: usize) -> Result<NormSeries> {
    if *ratio == Q::one() {
        return Err(Error::MarginalCircle);
    }
    let quarter = ratio / q(4);
    let mut term = Q::one();
    let mut sum = Q::one();
    for k in 0..order as i64 {
        // term_{k+1} = term_k · (ρ/4) · (2k+1)(2k+2)/(k+1)²
        term = term * &quarter * q((2 * k + 1) * (2 * k + 2)) / q((k + 1) * (k + 1));
        sum += &term;
    }
    let converges = *ratio < Q::one();
    Ok(NormSeries {
        ratio: ratio.clone(),
        order,
        partial_sum_f64: to_f64(&sum),
        partial_sum: sum,
        converges,
        closed_form: converges.then(|| (1.0 - to_f64(ratio)).powf(-0.5)),
    })
}

/// Norm series of f₊: `ρ = |r|²/|t|²`.
pub fn norm_series(r: &C, t: &C, order: usize) -> Result<NormSeries> {
    if t.is_zero() {
        return Err(Error::Unsupported("f+ is undefined for t = 0".into()));
    }
    norm_series_ratio(&(norm_sqr(r) / norm_sqr(t)), order)
}

/// Norm series of f₋: `ρ = |t|²/|r|²`.
pub fn norm_series_minus(r: &C, t: &C, order: usize) -> Result<NormSeries> {
    if r.is_zero() {
        return Err(Error::Unsupported("f- is undefined for r = 0".into()));
    }
    norm_series_ratio(&(norm_sqr(t) / norm_sqr(r)), order)
}

/// `(I_{𝒪⁺}, I_{𝒪⁻})` of `Q_(r,t)`: f₊ (even) is normalizable iff |r| < |t|,
/// f₋ (odd) iff |t| < |r|.
pub fn index_family(r: &C, t: &C) -> Result<(i64, i64)> {
    if r.is_zero() && t.is_zero() {
        return Err(Error::ZeroSupercharge);
    }
    let (r2, t2) = (norm_sqr(r), norm_sqr(t));
    if r2 == t2 {
        return Err(Error::MarginalCircle);
    }
    let plus_normalizable = r2 < t2;
    let minus_normalizable = t2 < r2;
    Ok((plus_normalizable as i64, -(minus_normalizable as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorIndex {
    pub supercharge: String,
    pub sector: OscillatorSector,
    pub index: i64,
    /// Kernel basis of Ξ in the sector, as monomial labels.
    pub kernel: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillatorIndices {
    pub n: usize,
    /// `(I_{𝒪⁺}(Q), I_{𝒪⁻}(Q), I_{𝒪⁺}(S), I_{𝒪⁻}(S))`.
    pub values: [i64; 4],
    pub sectors: Vec<SectorIndex>,
}

fn monomial_label(a: usize, b: usize) -> String {
    let x = match a {
        0 => String::new(),
        1 => "x".into(),
        _ => format!("x^{a}"),
    };
    match (b, x.is_empty()) {
        (0, true) => "1".into(),
        (0, false) => x,
        (_, true) => "eta".into(),
        (_, false) => format!("eta*{x}"),
    }
}

/// Supertrace of `(−1)^F` over the kernel of `Ξ = [x, x†]` in each sector,
/// computed on the interior block.
pub fn oscillator_indices(n: usize) -> Result<OscillatorIndices> {
    let gens = build_generators(n)?;
    let f = &gens.fock;
    let mut sectors = vec![];
    for (name, g) in [("Q", Generator::Q), ("S", Generator::S)] {
        let op = gens.get(g);
        let xi = op.bracket(&op.adjoint(f));
        for sector in [OscillatorSector::Plus, OscillatorSector::Minus] {
            let idx: Vec<usize> = f.interior_indices().into_iter().filter(|&i| f.sector(i) == sector).collect();
            let block: Vec<Vec<C>> =
                idx.iter().map(|&i| idx.iter().map(|&j| xi.mat[i][j].clone()).collect()).collect();
            let ker = nullspace(&block, idx.len());
            let mut index = 0;
            let mut kernel = vec![];
            for v in &ker {
                // Ξ is diagonal in the monomial basis, so kernel vectors are monomials.
                let pos = v.iter().position(|z| !z.is_zero()).expect("nonzero kernel vector");
                let (a, b) = f.monomial(idx[pos]);
                index += f.parity(idx[pos]).sign();
                kernel.push(monomial_label(a, b));
            }
            sectors.push(SectorIndex { supercharge: name.into(), sector, index, kernel });
        }
    }
    let values = [sectors[0].index, sectors[1].index, sectors[2].index, sectors[3].index];
    Ok(OscillatorIndices { n, values, sectors })
}

/// Parses states such as `eta`, `x^2`, `eta*x`, `3/2*x^2 + i*eta`.
pub fn parse_state(s: &str, fock: &TruncatedFock) -> Result<Vec<C>> {
    let bad = |why: &str| Error::ParseWeight { input: s.to_string(), reason: why.to_string() };
    let normalized = s.replace('−', "-").replace(' ', "");
    if normalized.is_empty() {
        return Err(bad("empty state"));
    }
    let mut terms = vec![];
    let mut cur = String::new();
    for ch in normalized.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut v = vec![C::zero(); fock.dim()];
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, term.trim_start_matches('+')),
        };
        let mut coef = ci(sign);
        let (mut a, mut b) = (0usize, 0usize);
        for factor in body.split('*') {
            match factor {
                "" => return Err(bad("empty factor")),
                "1" => {}
                "i" => coef *= C::new(Q::zero(), Q::one()),
                "eta" => b += 1,
                "x" => a += 1,
                f if f.starts_with("x^") => {
                    a += f[2..].parse::<usize>().map_err(|_| bad("bad exponent"))?;
                }
                f => coef *= c(parse_q(f).ok_or_else(|| bad("unknown factor"))?),
            }
        }
        if b > 1 {
            continue; // η² = 0
        }
        if a > fock.n {
            return Err(bad("degree exceeds the truncation"));
        }
        let idx = fock.index(a, b);
        v[idx] = &v[idx] + coef;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpsReport {
    pub annihilator_dim: usize,
    pub is_bps: bool,
    #[serde(with = "crate::rational::as_str")]
    pub deg_bps: Q,
}

/// Dimension of `{a ∈ span(Q, Q̄, S, S̄) : a·v = 0}` and the BPS degree
/// `(dim ann − 2)/2`.
pub fn bps_report(v: &[C], gens: &Generators) -> Result<BpsReport> {
    let f = &gens.fock;
    if v.iter().all(|z| z.is_zero()) {
        return Err(Error::ZeroVector);
    }
    if v.iter().enumerate().any(|(i, z)| !z.is_zero() && !f.interior(i)) {
        return Err(Error::Unsupported("state must lie in the interior block (degree ≤ N − 2)".into()));
    }
    let images: Vec<Vec<C>> = [Generator::Q, Generator::Qbar, Generator::S, Generator::Sbar]
        .iter()
        .map(|g| gens.get(*g).apply(v))
        .collect();
    let ann = 4 - rank(&images);
    Ok(BpsReport { annihilator_dim: ann, is_bps: ann > 2, deg_bps: qr(ann as i64 - 2, 2) })
}
