//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the library's combinatorics: weights, pairings, root
//! sets and simple characters are rebuilt from the gl(m|n) matrix units.

#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slmn::rational::{q, qr, Q};
use slmn::Weight;

pub const SEED: u64 = 0x5eed_2024;

pub fn rng(salt: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

/// `(w + ρ, εᵢ − δₖ)` with ρ = (m, …, 1 | −1, …, −n) and (δ, δ) = −1.
pub fn odd_pairing(w: &Weight, i: usize, k: usize) -> Q {
    let m = w.lam.len();
    let rho_i = q((m - i) as i64);
    let rho_k = q(-(k as i64) - 1);
    &w.lam[i] + rho_i + &w.mu[k] + rho_k
}

/// Odd roots (as index pairs) with vanishing ρ-shifted pairing.
pub fn vanishing_pairs(w: &Weight) -> Vec<(usize, usize)> {
    let (m, n) = (w.lam.len(), w.mu.len());
    let mut out = vec![];
    for i in 0..m {
        for k in 0..n {
            if odd_pairing(w, i, k).is_zero() {
                out.push((i, k));
            }
        }
    }
    out
}

/// Bilinear form on odd roots `εᵢ − δₖ`: `δᵢⱼ − δₖₗ`.
fn odd_form(a: (usize, usize), b: (usize, usize)) -> i64 {
    (a.0 == b.0) as i64 - (a.1 == b.1) as i64
}

/// Largest pairwise orthogonal subset, by enumerating every subset.
pub fn brute_force_degree(w: &Weight) -> usize {
    let roots = vanishing_pairs(w);
    let k = roots.len();
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let chosen: Vec<_> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| roots[b]).collect();
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(x, a)| chosen[x + 1..].iter().all(|b| odd_form(*a, *b) == 0));
        if ok {
            best = best.max(chosen.len());
        }
    }
    best
}

pub fn random_int_weight(r: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> Weight {
    let lam: Vec<i64> = (0..m).map(|_| r.gen_range(lo..=hi)).collect();
    let mu: Vec<i64> = (0..n).map(|_| r.gen_range(lo..=hi)).collect();
    Weight::from_ints(&lam, &mu)
}

/// Every integral weight with entries in `[lo, hi]`.
pub fn all_int_weights(m: usize, n: usize, lo: i64, hi: i64) -> Vec<Weight> {
    let d = m + n;
    let span = (hi - lo + 1) as usize;
    (0..span.pow(d as u32))
        .map(|mut code| {
            let mut xs = vec![0i64; d];
            for x in xs.iter_mut() {
                *x = lo + (code % span) as i64;
                code /= span;
            }
            Weight::from_ints(&xs[..m], &xs[m..])
        })
        .collect()
}

/// sl(2|1) weight with labels (Δ, r): `((Δ − r)/2, (−Δ − r)/2 | 0)`.
pub fn sl21_from_labels(delta: &Q, r: &Q) -> Weight {
    let two = q(2);
    Weight::new(vec![(delta - r) / &two, (-delta.clone() - r) / &two], vec![Q::zero()])
}

/// Membership in the sl(2|1) unitarity set: the open region
/// `Δ − r + 2 < 0, −Δ − r > 0`, the line `Δ = −r, Δ ≤ 0`, and the line
/// `Δ = r − 2, Δ + r < 0`.
pub fn sl21_unitary(delta: &Q, r: &Q) -> bool {
    let two = q(2);
    let open = (delta - r + &two).is_negative() && (-delta.clone() - r).is_positive();
    let line1 = *delta == -r.clone() && !delta.is_positive();
    let line2 = *delta == r - &two && (delta + r).is_negative();
    open || line1 || line2
}

pub fn sl21_open_region(delta: &Q, r: &Q) -> bool {
    (delta - r + q(2)).is_negative() && (-delta.clone() - r).is_positive()
}

/// The (Δ, r) grid `[−5, 5]²` with step 1/4.
pub fn sl21_grid() -> Vec<(Q, Q)> {
    let pts: Vec<Q> = (-20..=20).map(|k| qr(k, 4)).collect();
    let mut out = vec![];
    for d in &pts {
        for r in &pts {
            out.push((d.clone(), r.clone()));
        }
    }
    out
}

/// Number of semistandard tableaux of shape `shape` with entries ≤ `k`.
pub fn ssyt_count(shape: &[usize], k: usize) -> u64 {
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut fill = vec![vec![0usize; shape.first().copied().unwrap_or(0)]; shape.len()];
    fn go(idx: usize, cells: &[(usize, usize)], fill: &mut Vec<Vec<usize>>, k: usize) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { fill[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { fill[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for v in lo_row.max(lo_col)..=k {
            fill[r][c] = v;
            total += go(idx + 1, cells, fill, k);
        }
        total
    }
    go(0, &cells, &mut fill, k)
}

/// Shape of a dominant integral gl(k) weight, shifted so its last part is 0.
pub fn shape_of(xs: &[i64]) -> Vec<usize> {
    let last = *xs.last().unwrap();
    xs.iter().map(|x| (x - last) as usize).filter(|&x| x > 0).collect()
}

/// Verma module of gl(m|n) with highest weight Λ, realised on PBW words in
/// the lowering matrix units. Simple-module weight multiplicities are ranks
/// of the pairing between lowering words and raising words.
pub struct VermaOracle {
    m: usize,
    n: usize,
    lam: Vec<Q>,
    /// Lowering units `E_ij`, i > j, in PBW order.
    letters: Vec<(usize, usize)>,
    cache: RefCell<HashMap<((usize, usize), Vec<u8>), Vec<(Vec<u8>, Q)>>>,
}

type Vector = BTreeMap<Vec<u8>, Q>;

impl VermaOracle {
    pub fn new(w: &Weight) -> Self {
        let (m, n) = (w.lam.len(), w.mu.len());
        let d = m + n;
        let mut letters = vec![];
        for j in 0..d {
            for i in j + 1..d {
                letters.push((i, j));
            }
        }
        let lam = w.lam.iter().chain(&w.mu).cloned().collect();
        VermaOracle { m, n, lam, letters, cache: RefCell::new(HashMap::new()) }
    }

    fn odd(&self, i: usize) -> bool {
        i >= self.m
    }

    fn unit_parity(&self, (i, j): (usize, usize)) -> bool {
        self.odd(i) != self.odd(j)
    }

    /// Super bracket of matrix units.
    fn bracket(&self, a: (usize, usize), b: (usize, usize)) -> Vec<((usize, usize), i64)> {
        let sign = if self.unit_parity(a) && self.unit_parity(b) { -1 } else { 1 };
        let mut out: Vec<((usize, usize), i64)> = vec![];
        if a.1 == b.0 {
            out.push(((a.0, b.1), 1));
        }
        if b.1 == a.0 {
            let t = ((b.0, a.1), -sign);
            match out.iter_mut().find(|(u, _)| *u == t.0) {
                Some(e) => e.1 += t.1,
                None => out.push(t),
            }
        }
        out.retain(|(_, c)| *c != 0);
        out
    }

    fn letter_index(&self, u: (usize, usize)) -> u8 {
        self.letters.iter().position(|&l| l == u).unwrap() as u8
    }

    /// `X · (word ⊗ v)` in PBW normal form.
    fn act(&self, x: (usize, usize), word: &[u8]) -> Vec<(Vec<u8>, Q)> {
        let key = (x, word.to_vec());
        if let Some(r) = self.cache.borrow().get(&key) {
            return r.clone();
        }
        let mut out = Vector::new();
        if word.is_empty() {
            if x.0 == x.1 {
                if !self.lam[x.0].is_zero() {
                    out.insert(vec![], self.lam[x.0].clone());
                }
            } else if x.0 > x.1 {
                out.insert(vec![self.letter_index(x)], Q::one());
            }
        } else {
            let y = word[0];
            let yu = self.letters[y as usize];
            let rest = &word[1..];
            let lowering = x.0 > x.1;
            let xi = if lowering { Some(self.letter_index(x)) } else { None };
            match xi {
                Some(xi) if xi < y => {
                    let mut w = vec![xi];
                    w.extend_from_slice(word);
                    out.insert(w, Q::one());
                }
                Some(xi) if xi == y && self.unit_parity(x) => {}
                Some(xi) if xi == y => {
                    let mut w = vec![xi];
                    w.extend_from_slice(word);
                    out.insert(w, Q::one());
                }
                _ => {
                    let sign = if self.unit_parity(x) && self.unit_parity(yu) { -1 } else { 1 };
                    for (w, c) in self.act(x, rest) {
                        for (w2, c2) in self.act(yu, &w) {
                            add(&mut out, w2, c2 * &c * q(sign));
                        }
                    }
                    for (z, k) in self.bracket(x, yu) {
                        for (w, c) in self.act(z, rest) {
                            add(&mut out, w, c * q(k));
                        }
                    }
                }
            }
        }
        let res: Vec<(Vec<u8>, Q)> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.cache.borrow_mut().insert(key, res.clone());
        res
    }

    fn apply(&self, x: (usize, usize), v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (w, c) in v {
            for (w2, c2) in self.act(x, w) {
                add(&mut out, w2, c2 * c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Simple-root depth vector of a word: `E_ij` (i > j) adds 1 in slots j..i.
    pub fn depth(&self, word: &[u8]) -> Vec<i64> {
        let mut d = vec![0i64; self.m + self.n - 1];
        for &l in word {
            let (i, j) = self.letters[l as usize];
            for s in d.iter_mut().take(i).skip(j) {
                *s += 1;
            }
        }
        d
    }

    /// Normal-ordered lowering words of total height ≤ `limit`.
    pub fn words(&self, limit: i64) -> Vec<Vec<u8>> {
        let mut out = vec![];
        let mut cur = vec![];
        self.words_rec(0, limit, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, start: usize, budget: i64, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        out.push(cur.clone());
        for l in start..self.letters.len() {
            let (i, j) = self.letters[l];
            let h = (i - j) as i64;
            if h > budget {
                continue;
            }
            let odd = self.unit_parity((i, j));
            cur.push(l as u8);
            self.words_rec(if odd { l + 1 } else { l }, budget - h, cur, out);
            cur.pop();
        }
    }

    /// Weight multiplicities of the simple module, keyed by depth vector.
    pub fn simple_character(&self, limit: i64) -> BTreeMap<Vec<i64>, i64> {
        let mut spaces: BTreeMap<Vec<i64>, Vec<Vec<u8>>> = BTreeMap::new();
        for w in self.words(limit) {
            spaces.entry(self.depth(&w)).or_default().push(w);
        }
        let mut out = BTreeMap::new();
        for (d, ws) in spaces {
            // Raising words: transpose every letter.
            let mut rows = vec![];
            for u in &ws {
                let mut v = Vector::new();
                v.insert(u.clone(), Q::one());
                let row: Vec<Q> = ws
                    .iter()
                    .map(|e| {
                        let mut acc = v.clone();
                        for &l in e.iter().rev() {
                            let (i, j) = self.letters[l as usize];
                            acc = self.apply((j, i), &acc);
                        }
                        acc.get(&vec![]).cloned().unwrap_or_else(Q::zero)
                    })
                    .collect();
                rows.push(row);
            }
            let r = rank(rows);
            if r > 0 {
                out.insert(d, r as i64);
            }
        }
        out
    }

    /// Verma multiplicities (number of PBW words per depth).
    pub fn verma_character(&self, limit: i64) -> BTreeMap<Vec<i64>, i64> {
        let mut out = BTreeMap::new();
        for w in self.words(limit) {
            *out.entry(self.depth(&w)).or_insert(0) += 1;
        }
        out
    }
}

fn add(v: &mut Vector, w: Vec<u8>, c: Q) {
    let e = v.entry(w).or_insert_with(Q::zero);
    *e += c;
}

pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..cols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}
