//! Root data for irreducible reduced root systems in Bourbaki numbering.
//!
//! Weights are integer vectors in the fundamental-weight basis, roots are integer
//! vectors in the simple-root basis. Vertex labels are 1-based in the public API
//! and 0-based in vectors.

mod snf;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TitsError};

pub use snf::{smith, Smith};

/// Coordinates in the fundamental-weight basis.
pub type Weight = Vec<i64>;
/// Coordinates in the simple-root basis.
pub type Root = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::A, Kind::B, Kind::C, Kind::D, Kind::E, Kind::F, Kind::G];

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Kind::A => rank >= 1,
            Kind::B | Kind::C => rank >= 2,
            Kind::D => rank >= 4,
            Kind::E => (6..=8).contains(&rank),
            Kind::F => rank == 4,
            Kind::G => rank == 2,
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Kind::A | Kind::B | Kind::C | Kind::D)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Kind::A => 'A',
            Kind::B => 'B',
            Kind::C => 'C',
            Kind::D => 'D',
            Kind::E => 'E',
            Kind::F => 'F',
            Kind::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Kind {
    type Err = TitsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Kind::A),
            "B" => Ok(Kind::B),
            "C" => Ok(Kind::C),
            "D" => Ok(Kind::D),
            "E" => Ok(Kind::E),
            "F" => Ok(Kind::F),
            "G" => Ok(Kind::G),
            other => Err(TitsError::UnknownKind(other.to_string())),
        }
    }
}

pub fn validate(kind: Kind, rank: usize) -> Result<()> {
    if kind.is_valid_rank(rank) {
        Ok(())
    } else {
        Err(TitsError::InvalidType { kind, rank })
    }
}

/// Undirected edges of the Dynkin diagram, 1-based.
pub fn dynkin_edges(kind: Kind, rank: usize) -> Vec<(usize, usize)> {
    let chain = |n: usize| (1..n).map(|i| (i, i + 1)).collect_vec();
    match kind {
        Kind::A | Kind::B | Kind::C | Kind::F | Kind::G => chain(rank),
        Kind::D => {
            let mut e = chain(rank - 1);
            e.push((rank - 2, rank));
            e
        }
        Kind::E => {
            let mut e = vec![(1, 3), (2, 4)];
            e.extend((3..rank).map(|i| (i, i + 1)));
            e
        }
    }
}

/// (long vertex, short vertex, multiplicity) for the unique multiple bond, if any.
fn multiple_bond(kind: Kind, rank: usize) -> Option<(usize, usize, i64)> {
    match kind {
        Kind::B => Some((rank - 1, rank, 2)),
        Kind::C => Some((rank, rank - 1, 2)),
        Kind::F => Some((2, 3, 2)),
        Kind::G => Some((2, 1, 3)),
        _ => None,
    }
}

/// `m[j][i] = <alpha_i, alpha_j^vee>`, so column `i` is `alpha_i` in the weight basis.
pub fn cartan_matrix(kind: Kind, rank: usize) -> Result<Vec<Vec<i64>>> {
    validate(kind, rank)?;
    let mut m = vec![vec![0i64; rank]; rank];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (u, v) in dynkin_edges(kind, rank) {
        m[u - 1][v - 1] = -1;
        m[v - 1][u - 1] = -1;
    }
    if let Some((long, short, mult)) = multiple_bond(kind, rank) {
        m[short - 1][long - 1] = -mult;
    }
    Ok(m)
}

/// Squared lengths of the simple roots, scaled so the shortest root has length 2
/// in simply-laced and C/G types and the short roots of B/F have length 2.
pub fn root_norms(kind: Kind, rank: usize) -> Vec<i64> {
    match kind {
        Kind::B => (1..=rank).map(|i| if i == rank { 2 } else { 4 }).collect(),
        Kind::C => (1..=rank).map(|i| if i == rank { 4 } else { 2 }).collect(),
        Kind::F => vec![4, 4, 2, 2],
        Kind::G => vec![2, 6],
        _ => vec![2; rank],
    }
}

/// The cocenter `P / Q`, presented by its invariant factors (all > 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocenter {
    pub factors: Vec<i64>,
    rows: Vec<Vec<i64>>,
}

impl Cocenter {
    pub fn order(&self) -> i64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    pub fn project(&self, weight: &[i64]) -> Vec<i64> {
        self.rows
            .iter()
            .zip(&self.factors)
            .map(|(row, &d)| row.iter().zip(weight).map(|(a, b)| a * b).sum::<i64>().rem_euclid(d))
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.factors)
            .map(|((a, b), d)| (a + b).rem_euclid(*d))
            .collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.factors).map(|(a, d)| (k * a).rem_euclid(*d)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        self.scale(-1, x)
    }

    pub fn is_zero(x: &[i64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// Order of the class `x`.
    pub fn class_order(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.factors)
            .map(|(&r, &d)| d / gcd(r, d))
            .fold(1, lcm)
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        self.factors
            .iter()
            .map(|&d| 0..d)
            .multi_cartesian_product()
            .collect()
    }

    /// Subgroup generated by `gens`, as a sorted list of elements.
    pub fn span(&self, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut seen: HashSet<Vec<i64>> = HashSet::from([self.zero()]);
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().sorted().collect()
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Everything derived from one Cartan type, computed once and cached.
#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    pub kind: Kind,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub norms: Vec<i64>,
    pub positive_roots: Vec<Root>,
    pub longest_word: Vec<usize>,
    /// 1-based opposition involution, index 0 unused.
    pub opposition: Vec<usize>,
    pub cocenter: Cocenter,
    pub minuscule: Vec<Weight>,
}

fn build(kind: Kind, rank: usize) -> Result<RootSystem> {
    let cartan = cartan_matrix(kind, rank)?;
    let norms = root_norms(kind, rank);
    let positive_roots = root_strings(&cartan);
    let longest_word = longest_word(&cartan);
    let opposition = opposition_from_word(&cartan, &longest_word);
    let s = smith(&cartan);
    let (factors, rows): (Vec<i64>, Vec<Vec<i64>>) = s
        .factors
        .iter()
        .zip(s.left)
        .filter(|(d, _)| **d > 1)
        .map(|(d, row)| (*d, row))
        .unzip();
    let cocenter = Cocenter { factors, rows };
    let mut sys = RootSystem {
        kind,
        rank,
        cartan,
        norms,
        positive_roots,
        longest_word,
        opposition,
        cocenter,
        minuscule: Vec::new(),
    };
    sys.minuscule = (0..rank)
        .map(|_| 0..=1i64)
        .multi_cartesian_product()
        .filter(|w| w.iter().any(|&x| x != 0) && sys.is_minuscule(w))
        .collect();
    Ok(sys)
}

/// Cached root system of the given type.
pub fn root_system(kind: Kind, rank: usize) -> Result<Arc<RootSystem>> {
    static CACHE: OnceLock<Mutex<HashMap<(Kind, usize), Arc<RootSystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(sys) = cache.lock().expect("root system cache poisoned").get(&(kind, rank)) {
        return Ok(sys.clone());
    }
    let sys = Arc::new(build(kind, rank)?);
    cache
        .lock()
        .expect("root system cache poisoned")
        .insert((kind, rank), sys.clone());
    Ok(sys)
}

fn to_weight(cartan: &[Vec<i64>], root: &[i64]) -> Weight {
    cartan
        .iter()
        .map(|row| row.iter().zip(root).map(|(a, c)| a * c).sum())
        .collect()
}

/// Positive roots grown by simple-root strings, sorted by height then coordinates.
fn root_strings(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let simple = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect_vec())
        .collect_vec();
    let mut known: HashSet<Root> = simple.iter().cloned().collect();
    let mut layer = simple;
    let mut all = layer.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            let pairing = to_weight(cartan, beta);
            for i in 0..n {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing[i] > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    all
}

/// Reflect a strictly dominant weight down to its negative, recording the indices.
fn longest_word(cartan: &[Vec<i64>]) -> Vec<usize> {
    let n = cartan.len();
    let mut v = vec![1i64; n];
    let mut word = Vec::new();
    while let Some(i) = (0..n).find(|&i| v[i] > 0) {
        let c = v[i];
        for (j, vj) in v.iter_mut().enumerate() {
            *vj -= c * cartan[j][i];
        }
        word.push(i);
    }
    word
}

fn reflect_root(cartan: &[Vec<i64>], i: usize, root: &mut [i64]) {
    let pairing: i64 = cartan[i].iter().zip(root.iter()).map(|(a, c)| a * c).sum();
    root[i] -= pairing;
}

fn opposition_from_word(cartan: &[Vec<i64>], word: &[usize]) -> Vec<usize> {
    let n = cartan.len();
    let mut sigma = vec![0; n + 1];
    for i in 0..n {
        let mut r = (0..n).map(|j| i64::from(i == j)).collect_vec();
        for &k in word {
            reflect_root(cartan, k, &mut r);
        }
        let j = r
            .iter()
            .position(|&x| x == -1)
            .expect("w0 sends a simple root to a negative simple root");
        debug_assert_eq!(r.iter().filter(|&&x| x != 0).count(), 1);
        sigma[i + 1] = j + 1;
    }
    sigma
}

impl RootSystem {
    pub fn alpha_in_omega(&self, i: usize) -> Weight {
        self.cartan.iter().map(|row| row[i - 1]).collect()
    }

    pub fn root_to_weight(&self, root: &[i64]) -> Weight {
        to_weight(&self.cartan, root)
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("nonempty root system")
    }

    pub fn omega(&self, i: usize) -> Weight {
        (1..=self.rank).map(|j| i64::from(i == j)).collect()
    }

    pub fn root_norm(&self, root: &[i64]) -> i64 {
        let n = self.rank;
        let mut total = 0;
        for k in 0..n {
            for l in 0..n {
                total += root[k] * root[l] * self.cartan[l][k] * self.norms[l];
            }
        }
        total / 2
    }

    /// `<lambda, beta^vee>` for a weight and a root.
    pub fn pair_coroot(&self, weight: &[i64], root: &[i64]) -> i64 {
        let num: i64 = (0..self.rank).map(|k| root[k] * self.norms[k] * weight[k]).sum();
        let den = self.root_norm(root);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    pub fn is_minuscule(&self, weight: &[i64]) -> bool {
        self.positive_roots
            .iter()
            .all(|r| (-1..=1).contains(&self.pair_coroot(weight, r)))
    }

    /// Simple reflection on a weight.
    pub fn reflect_weight(&self, i: usize, weight: &mut [i64]) {
        let c = weight[i];
        for (j, w) in weight.iter_mut().enumerate() {
            *w -= c * self.cartan[j][i];
        }
    }

    pub fn w0_weight(&self, weight: &[i64]) -> Weight {
        let mut w = weight.to_vec();
        for &i in &self.longest_word {
            self.reflect_weight(i, &mut w);
        }
        w
    }

    pub fn project(&self, weight: &[i64]) -> Vec<i64> {
        self.cocenter.project(weight)
    }

    pub fn class_order(&self, weight: &[i64]) -> i64 {
        self.cocenter.class_order(&self.project(weight))
    }

    /// The unique minuscule weight (or zero) in the class of `class`.
    pub fn minuscule_representative(&self, class: &[i64]) -> Result<Weight> {
        if Cocenter::is_zero(class) {
            return Ok(vec![0; self.rank]);
        }
        let hits = self
            .minuscule
            .iter()
            .filter(|w| self.project(w) == class)
            .collect_vec();
        match hits.as_slice() {
            [w] => Ok((*w).clone()),
            _ => Err(TitsError::NoMinuscule { class: class.to_vec() }),
        }
    }

    /// Index `k` when the representative of `class` is a single `omega_k`.
    pub fn minuscule_index(&self, class: &[i64]) -> Result<Option<usize>> {
        let w = self.minuscule_representative(class)?;
        Ok(w.iter().position(|&x| x == 1).map(|k| k + 1))
    }
}

pub fn positive_roots(kind: Kind, rank: usize) -> Result<Vec<Root>> {
    Ok(root_system(kind, rank)?.positive_roots.clone())
}

pub fn opposition_involution(kind: Kind, rank: usize) -> Result<Vec<usize>> {
    Ok(root_system(kind, rank)?.opposition.clone())
}

pub fn cocenter(kind: Kind, rank: usize) -> Result<Cocenter> {
    Ok(root_system(kind, rank)?.cocenter.clone())
}

pub fn class_order(kind: Kind, rank: usize, weight: &[i64]) -> Result<i64> {
    Ok(root_system(kind, rank)?.class_order(weight))
}

pub fn minuscule_representative(kind: Kind, rank: usize, class: &[i64]) -> Result<Weight> {
    root_system(kind, rank)?.minuscule_representative(class)
}

/// Number of roots (positive and negative).
pub fn root_count(kind: Kind, rank: usize) -> Result<usize> {
    Ok(2 * root_system(kind, rank)?.positive_roots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types(max_rank: usize) -> Vec<(Kind, usize)> {
        Kind::ALL
            .iter()
            .flat_map(|&k| (1..=max_rank).map(move |n| (k, n)))
            .filter(|&(k, n)| k.is_valid_rank(n))
            .collect()
    }

    /// Textbook |Phi^+|.
    fn positive_count(kind: Kind, n: usize) -> usize {
        match kind {
            Kind::A => n * (n + 1) / 2,
            Kind::B | Kind::C => n * n,
            Kind::D => n * (n - 1),
            Kind::E => [36, 63, 120][n - 6],
            Kind::F => 24,
            Kind::G => 6,
        }
    }

    #[test]
    fn root_counts_match_textbook_values() {
        for (k, n) in all_types(12) {
            let sys = root_system(k, n).unwrap();
            assert_eq!(sys.positive_roots.len(), positive_count(k, n), "{k}{n}");
            assert_eq!(sys.longest_word.len(), positive_count(k, n), "{k}{n}");
        }
    }

    #[test]
    fn spot_checked_simple_roots() {
        let b4 = root_system(Kind::B, 4).unwrap();
        assert_eq!(b4.alpha_in_omega(3), vec![0, -1, 2, -2]);
        assert_eq!(b4.alpha_in_omega(4), vec![0, 0, -1, 2]);
        let c3 = root_system(Kind::C, 3).unwrap();
        assert_eq!(c3.alpha_in_omega(3), vec![0, -2, 2]);
        let f4 = root_system(Kind::F, 4).unwrap();
        assert_eq!(f4.alpha_in_omega(1), vec![2, -1, 0, 0]);
        assert_eq!(f4.alpha_in_omega(2), vec![-1, 2, -2, 0]);
        assert_eq!(f4.alpha_in_omega(4), vec![0, 0, -1, 2]);
        let g2 = root_system(Kind::G, 2).unwrap();
        assert_eq!(g2.alpha_in_omega(2), vec![-3, 2]);
    }

    #[test]
    fn highest_roots() {
        let g2 = root_system(Kind::G, 2).unwrap();
        assert_eq!(g2.highest_root(), &vec![3, 2]);
        let e8 = root_system(Kind::E, 8).unwrap();
        assert_eq!(e8.highest_root(), &vec![2, 3, 4, 6, 5, 4, 3, 2]);
        let f4 = root_system(Kind::F, 4).unwrap();
        assert_eq!(f4.highest_root(), &vec![2, 3, 4, 2]);
    }

    #[test]
    fn opposition_involutions() {
        let expect = |k, n, s: Vec<usize>| {
            let mut full = vec![0];
            full.extend(s);
            assert_eq!(opposition_involution(k, n).unwrap(), full, "{k}{n}");
        };
        expect(Kind::A, 4, vec![4, 3, 2, 1]);
        expect(Kind::D, 5, vec![1, 2, 3, 5, 4]);
        expect(Kind::D, 6, vec![1, 2, 3, 4, 5, 6]);
        expect(Kind::E, 6, vec![6, 2, 5, 4, 3, 1]);
        expect(Kind::E, 7, (1..=7).collect());
        expect(Kind::B, 3, vec![1, 2, 3]);
    }

    #[test]
    fn w0_is_an_involution_sending_rho_to_minus_rho() {
        for (k, n) in all_types(8) {
            let sys = root_system(k, n).unwrap();
            for i in 1..=n {
                let w = sys.omega(i);
                assert_eq!(sys.w0_weight(&sys.w0_weight(&w)), w);
            }
            assert_eq!(sys.w0_weight(&vec![1; n]), vec![-1; n]);
        }
    }

    #[test]
    fn cocenter_orders_equal_determinants() {
        let expect = |k, n, f: Vec<i64>| assert_eq!(cocenter(k, n).unwrap().factors, f, "{k}{n}");
        expect(Kind::A, 5, vec![6]);
        expect(Kind::B, 4, vec![2]);
        expect(Kind::C, 3, vec![2]);
        expect(Kind::D, 4, vec![2, 2]);
        expect(Kind::D, 5, vec![4]);
        expect(Kind::D, 6, vec![2, 2]);
        expect(Kind::E, 6, vec![3]);
        expect(Kind::E, 7, vec![2]);
        expect(Kind::E, 8, vec![]);
        expect(Kind::F, 4, vec![]);
        expect(Kind::G, 2, vec![]);
    }

    #[test]
    fn type_a_classes_follow_index_sum() {
        // In A_n, omega_j is j times omega_1 modulo the root lattice.
        for n in 1..=9 {
            let sys = root_system(Kind::A, n).unwrap();
            let c1 = sys.project(&sys.omega(1));
            for j in 1..=n {
                assert_eq!(sys.project(&sys.omega(j)), sys.cocenter.scale(j as i64, &c1));
            }
        }
    }

    #[test]
    fn minuscule_weights_by_type() {
        let idx = |k, n| {
            root_system(k, n)
                .unwrap()
                .minuscule
                .iter()
                .map(|w| {
                    assert_eq!(w.iter().sum::<i64>(), 1);
                    w.iter().position(|&x| x == 1).unwrap() + 1
                })
                .sorted()
                .collect_vec()
        };
        assert_eq!(idx(Kind::A, 3), vec![1, 2, 3]);
        assert_eq!(idx(Kind::B, 4), vec![4]);
        assert_eq!(idx(Kind::C, 4), vec![1]);
        assert_eq!(idx(Kind::D, 5), vec![1, 4, 5]);
        assert_eq!(idx(Kind::E, 6), vec![1, 6]);
        assert_eq!(idx(Kind::E, 7), vec![7]);
        assert!(idx(Kind::E, 8).is_empty());
        assert!(idx(Kind::F, 4).is_empty());
        assert!(idx(Kind::G, 2).is_empty());
    }

    #[test]
    fn every_nonzero_class_has_one_minuscule_representative() {
        for (k, n) in all_types(10) {
            let sys = root_system(k, n).unwrap();
            for class in sys.cocenter.elements() {
                let w = sys.minuscule_representative(&class).unwrap();
                assert_eq!(sys.project(&w), class);
            }
        }
    }

    #[test]
    fn class_orders() {
        let e7 = root_system(Kind::E, 7).unwrap();
        assert_eq!(e7.class_order(&e7.omega(7)), 2);
        assert_eq!(e7.class_order(&e7.omega(2)), 2);
        assert_eq!(e7.class_order(&e7.omega(1)), 1);
        let e6 = root_system(Kind::E, 6).unwrap();
        assert_eq!(e6.class_order(&e6.omega(2)), 1);
        assert_eq!(e6.class_order(&e6.omega(3)), 3);
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for k in Kind::ALL {
            assert_eq!(k.to_string().parse::<Kind>().unwrap(), k);
        }
        assert!("Q".parse::<Kind>().is_err());
    }
}
