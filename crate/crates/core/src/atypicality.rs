//! Vanishing odd roots and the degree of atypicality.
//!
//! Two odd roots `εᵢ − δₖ`, `εⱼ − δₗ` are orthogonal exactly when i ≠ j and
//! k ≠ l, so a mutually orthogonal family of vanishing roots is a matching in
//! the bipartite graph on ε and δ indices, and the degree is its maximum size.

use serde::{Deserialize, Serialize};

use crate::rootdata::{Root, RootDatum};
use crate::weights::{rho_pairing, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtypicalityReport {
    pub vanishing_roots: Vec<Root>,
    pub degree: usize,
    pub witness: Vec<Root>,
    pub is_maximal: bool,
}

/// Odd positive roots with `(w + ρ, α) = 0`.
pub fn vanishing_odd_roots(w: &Weight, datum: &RootDatum) -> Vec<Root> {
    datum
        .odd_positive
        .iter()
        .filter(|a| num_traits::Zero::is_zero(&rho_pairing(w, a, datum)))
        .cloned()
        .collect()
}

pub fn atypicality_degree(w: &Weight, datum: &RootDatum) -> AtypicalityReport {
    let vanishing = vanishing_odd_roots(w, datum);
    let edges: Vec<(usize, usize)> =
        vanishing.iter().filter_map(|r| r.odd_indices(datum.m)).collect();
    let pairs = lexmin_maximum_matching(datum.m, datum.n, &edges);
    let witness: Vec<Root> = pairs.iter().map(|&(i, k)| datum.odd_root(i, k)).collect();
    AtypicalityReport {
        degree: witness.len(),
        is_maximal: witness.len() == datum.defect,
        vanishing_roots: vanishing,
        witness,
    }
}

/// Degree of atypicality for an arbitrary set of odd roots (signs ignored).
pub fn matching_degree(roots: &[Root], m: usize, n: usize) -> usize {
    let edges: Vec<(usize, usize)> = roots.iter().filter_map(|r| r.odd_indices(m)).collect();
    maximum_matching(m, n, &edges, &vec![false; m], &vec![false; n])
}

/// Size of a maximum matching avoiding the blocked vertices (Kuhn's algorithm).
pub fn maximum_matching(
    left: usize,
    right: usize,
    edges: &[(usize, usize)],
    blocked_left: &[bool],
    blocked_right: &[bool],
) -> usize {
    let mut adj = vec![vec![]; left];
    for &(i, k) in edges {
        if !blocked_left[i] && !blocked_right[k] && !adj[i].contains(&k) {
            adj[i].push(k);
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    let mut size = 0;
    for i in 0..left {
        let mut seen = vec![false; right];
        if augment(i, &adj, &mut owner, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &k in &adj[i] {
        if seen[k] {
            continue;
        }
        seen[k] = true;
        let free = match owner[k] {
            None => true,
            Some(j) => augment(j, adj, owner, seen),
        };
        if free {
            owner[k] = Some(i);
            return true;
        }
    }
    false
}

/// The lexicographically smallest `(i, k)` sequence among maximum matchings.
fn lexmin_maximum_matching(m: usize, n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut bl = vec![false; m];
    let mut br = vec![false; n];
    let target = maximum_matching(m, n, edges, &bl, &br);
    let mut chosen = vec![];
    let mut sorted = edges.to_vec();
    sorted.sort();
    sorted.dedup();
    for &(i, k) in &sorted {
        if chosen.len() == target {
            break;
        }
        if bl[i] || br[k] {
            continue;
        }
        bl[i] = true;
        br[k] = true;
        if chosen.len() + 1 + maximum_matching(m, n, edges, &bl, &br) == target {
            chosen.push((i, k));
        } else {
            bl[i] = false;
            br[k] = false;
        }
    }
    chosen
}

/// Roots that are pairwise orthogonal under the form.
pub fn pairwise_orthogonal(roots: &[Root], datum: &RootDatum) -> bool {
    roots
        .iter()
        .enumerate()
        .all(|(a, r)| roots[a + 1..].iter().all(|s| datum.root_form(r, s) == 0))
}
