//! Closed-form lists of admissible circled sets, family by family.

use itertools::Itertools;

use crate::diagram::{self, DynkinDiagram, Perm, StarAction};
use crate::error::{Result, TitsError};
use crate::rootkit::Kind;

/// `{d, 2d, ..., rd}`.
fn spaced(d: usize, r: usize) -> Vec<usize> {
    (1..=r).map(|i| i * d).collect()
}

fn even_or_one(d: usize) -> bool {
    d == 1 || d % 2 == 0
}

/// Pairs `(d, r)` with `r >= 1` and `r * d <= bound`.
fn spacings(bound: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=bound).flat_map(move |d| (1..=bound / d).map(move |r| (d, r)))
}

/// Circled sets for the standard *-action of the given order.
fn standard_sets(kind: Kind, n: usize, order: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = match (kind, order) {
        (Kind::A, 1) => (1..=n + 1)
            .filter(|d| (n + 1) % d == 0 && *d <= n)
            .map(|d| spaced(d, (n + 1) / d - 1))
            .collect(),
        (Kind::A, 2) => spacings(n + 1)
            .filter(|&(d, r)| (n + 1) % d == 0 && 2 * r * d <= n + 1)
            .map(|(d, r)| {
                spaced(d, r)
                    .into_iter()
                    .flat_map(|x| [x, n + 1 - x])
                    .sorted()
                    .dedup()
                    .collect()
            })
            .collect(),
        (Kind::B, 1) => spacings(n).filter(|&(d, _)| even_or_one(d)).map(|(d, r)| spaced(d, r)).collect(),
        (Kind::C, 1) => spacings(n).map(|(d, r)| spaced(d, r)).collect(),
        (Kind::D, 1) => spacings(n)
            .filter(|&(d, r)| even_or_one(d) && r * d != n - 1)
            .map(|(d, r)| spaced(d, r))
            .collect(),
        (Kind::D, 2) => spacings(n - 1)
            .filter(|&(d, _)| even_or_one(d))
            .map(|(d, r)| {
                if r * d == n - 1 {
                    // The spacing reaches the fork: circle both spin vertices instead.
                    let mut j = spaced(d, r - 1);
                    j.extend([n - 1, n]);
                    j
                } else {
                    spaced(d, r)
                }
            })
            .collect(),
        (Kind::D, 3 | 6) => vec![vec![2]],
        (Kind::E, 1) if n == 6 => vec![vec![2], vec![1, 6], vec![2, 4]],
        (Kind::E, 2) => vec![vec![2], vec![1, 6], vec![2, 4], vec![1, 2, 6]],
        (Kind::E, 1) if n == 7 => vec![
            vec![1],
            vec![6],
            vec![7],
            vec![1, 3],
            vec![1, 6],
            vec![1, 6, 7],
            vec![1, 3, 4, 6],
        ],
        (Kind::E, 1) => vec![vec![1], vec![8], vec![1, 8], vec![7, 8], vec![1, 6, 7, 8]],
        (Kind::F, 1) => vec![vec![1], vec![4], vec![1, 4]],
        (Kind::G, 1) => vec![vec![2]],
        _ => Vec::new(),
    };
    sets.push(Vec::new());
    sets.push((1..=n).collect());
    sets
}

/// Generator of the standard *-action of each order.
fn standard_generators(kind: Kind, n: usize, order: usize) -> Vec<Perm> {
    let mut p = Perm::identity(n);
    match (kind, order) {
        (_, 1) => return Vec::new(),
        (Kind::A | Kind::E, 2) => {
            let sigma: Vec<usize> = match kind {
                Kind::A => (1..=n).map(|i| n + 1 - i).collect(),
                _ => vec![6, 2, 5, 4, 3, 1],
            };
            p.0[1..].copy_from_slice(&sigma);
        }
        (Kind::D, 2) => p.0.swap(n - 1, n),
        (Kind::D, 3) => {
            p.0[1] = 3;
            p.0[3] = 4;
            p.0[4] = 1;
        }
        (Kind::D, 6) => {
            let mut q = Perm::identity(n);
            q.0.swap(3, 4);
            p.0[1] = 3;
            p.0[3] = 4;
            p.0[4] = 1;
            return vec![p, q];
        }
        _ => {}
    }
    vec![p]
}

/// The closed-form circled sets, transported to the given *-action.
pub fn closed_form_sets(kind: Kind, rank: usize, gamma: &StarAction) -> Result<Vec<Vec<usize>>> {
    let d = DynkinDiagram::build(kind, rank)?;
    let order = gamma.order();
    let gens = standard_generators(kind, rank, order);
    let mut elements = vec![Perm::identity(rank)];
    loop {
        let next: Vec<Perm> = elements
            .iter()
            .flat_map(|x| gens.iter().map(move |g| g.compose(x)))
            .chain(elements.iter().cloned())
            .sorted()
            .dedup()
            .collect();
        if next.len() == elements.len() {
            break;
        }
        elements = next;
    }
    if elements.len() != order {
        return Err(TitsError::NoSuchGamma { kind, rank, order });
    }
    let target: Vec<Perm> = gamma.elements.iter().cloned().sorted().collect();
    let phi = diagram::automorphisms(&d)
        .into_iter()
        .find(|g| {
            let gi = g.inverse();
            elements.iter().map(|x| g.compose(x).compose(&gi)).sorted().collect_vec() == target
        })
        .ok_or(TitsError::NoSuchGamma { kind, rank, order })?;
    Ok(standard_sets(kind, rank, order)
        .into_iter()
        .map(|j| phi.apply_set(&j))
        .collect())
}
