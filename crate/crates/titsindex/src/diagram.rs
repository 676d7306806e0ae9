//! Dynkin diagrams as labeled multigraphs, their extension by the affine vertex,
//! recognition of induced subdiagrams and the *-action of diagram automorphisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TitsError};
use crate::rootkit::{self, Kind};

/// Permutation of `0..=n` stored as its image list. Vertex 0 (the affine vertex)
/// is always fixed by automorphisms of the finite diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..=n).collect())
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn apply_set(&self, set: &[usize]) -> Vec<usize> {
        set.iter().map(|&v| self.apply(v)).sorted().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Product of the two off-diagonal Cartan entries.
    pub multiplicity: i64,
    /// `(long, short)` for multiple bonds between roots of different lengths.
    pub arrow: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinDiagram {
    pub kind: Kind,
    pub rank: usize,
    pub affine: bool,
    pub vertices: Vec<usize>,
    /// `pairing[(u, v)] = <alpha_u, alpha_v^vee>` for adjacent `u != v`.
    pairing: BTreeMap<(usize, usize), i64>,
}

/// A connected induced subdiagram together with its Bourbaki labeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Component {
    pub kind: Kind,
    pub rank: usize,
    /// `labeling[k - 1]` is the vertex carrying Bourbaki label `k`.
    pub labeling: Vec<usize>,
}

impl Component {
    pub fn vertices(&self) -> Vec<usize> {
        self.labeling.iter().copied().sorted().collect()
    }

    pub fn min_vertex(&self) -> usize {
        *self.labeling.iter().min().expect("nonempty component")
    }

    pub fn contains(&self, v: usize) -> bool {
        self.labeling.contains(&v)
    }

    /// Bourbaki label of vertex `v`, if present.
    pub fn local_index(&self, v: usize) -> Option<usize> {
        self.labeling.iter().position(|&w| w == v).map(|k| k + 1)
    }

    pub fn type_name(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }
}

impl DynkinDiagram {
    pub fn build(kind: Kind, rank: usize) -> Result<Self> {
        let cartan = rootkit::cartan_matrix(kind, rank)?;
        let mut pairing = BTreeMap::new();
        for (j, row) in cartan.iter().enumerate() {
            for (i, &a) in row.iter().enumerate() {
                if i != j && a != 0 {
                    pairing.insert((i + 1, j + 1), a);
                }
            }
        }
        Ok(DynkinDiagram {
            kind,
            rank,
            affine: false,
            vertices: (1..=rank).collect(),
            pairing,
        })
    }

    /// Diagram given directly by its off-diagonal Cartan entries on vertices
    /// `1..=n`. `kind` and `rank` are placeholders, so `extend` is meaningless here.
    pub fn from_pairings(n: usize, pairing: BTreeMap<(usize, usize), i64>) -> Self {
        DynkinDiagram {
            kind: Kind::A,
            rank: n,
            affine: false,
            vertices: (1..=n).collect(),
            pairing: pairing.into_iter().filter(|&(_, a)| a != 0).collect(),
        }
    }

    /// Adds vertex 0 for `-theta`, the negative highest root.
    pub fn extend(&self) -> Result<Self> {
        if self.affine {
            return Err(TitsError::AlreadyAffine);
        }
        let sys = rootkit::root_system(self.kind, self.rank)?;
        let theta = sys.highest_root().clone();
        let theta_w = sys.root_to_weight(&theta);
        let theta_norm = sys.root_norm(&theta);
        let mut ext = self.clone();
        ext.affine = true;
        ext.vertices.insert(0, 0);
        for v in 1..=self.rank {
            let to_v = -theta_w[v - 1];
            if to_v != 0 {
                ext.pairing.insert((0, v), to_v);
                ext.pairing.insert((v, 0), to_v * sys.norms[v - 1] / theta_norm);
            }
        }
        Ok(ext)
    }

    pub fn a(&self, u: usize, v: usize) -> i64 {
        if u == v {
            2
        } else {
            self.pairing.get(&(u, v)).copied().unwrap_or(0)
        }
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|&w| w != v && self.a(v, w) != 0)
            .collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices
            .iter()
            .tuple_combinations()
            .filter(|&(&a, &b)| self.a(a, b) != 0)
            .map(|(&a, &b)| {
                let (ab, ba) = (self.a(a, b), self.a(b, a));
                let arrow = match (ab.abs(), ba.abs()) {
                    (x, 1) if x > 1 => Some((a, b)),
                    (1, y) if y > 1 => Some((b, a)),
                    _ => None,
                };
                Edge {
                    a,
                    b,
                    multiplicity: ab * ba,
                    arrow,
                }
            })
            .collect()
    }

    fn check_vertices(&self, subset: &[usize]) -> Result<()> {
        match subset.iter().find(|v| !self.vertices.contains(v)) {
            Some(&vertex) => Err(TitsError::VertexOutOfRange { vertex }),
            None => Ok(()),
        }
    }

    /// Connected components of the subgraph induced on `subset`, sorted by minimum.
    pub fn connected_components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let inside: BTreeSet<usize> = subset.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in &inside {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if inside.contains(&w) && seen.insert(w) {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Components of the induced subdiagram, each recognized with its Bourbaki labeling.
    pub fn induced_components(&self, subset: &[usize]) -> Result<Vec<Component>> {
        self.check_vertices(subset)?;
        self.connected_components(subset)
            .iter()
            .map(|c| self.recognize(c))
            .collect()
    }

    /// Recognizes a connected vertex set as a finite Dynkin diagram.
    pub fn recognize(&self, comp: &[usize]) -> Result<Component> {
        let k = comp.len();
        // C before B so that a rank-2 double bond reads as C2.
        let order = [Kind::A, Kind::C, Kind::B, Kind::D, Kind::E, Kind::F, Kind::G];
        let profile = |d: &DynkinDiagram, vs: &[usize]| {
            vs.iter()
                .tuple_combinations()
                .map(|(&u, &v)| (d.a(u, v).min(d.a(v, u)), d.a(u, v).max(d.a(v, u))))
                .filter(|&p| p != (0, 0))
                .sorted()
                .collect_vec()
        };
        let target = profile(self, comp);
        for kind in order.into_iter().filter(|kind| kind.is_valid_rank(k)) {
            let template = DynkinDiagram::build(kind, k)?;
            if profile(&template, &template.vertices) != target {
                continue;
            }
            let isos = isomorphisms(&template, &template.vertices, self, comp);
            let choice = isos
                .into_iter()
                .filter(|phi| !(kind == Kind::D && k >= 5) || phi[k - 2] > phi[k - 1])
                .min();
            if let Some(labeling) = choice {
                return Ok(Component { kind, rank: k, labeling });
            }
        }
        Err(TitsError::NotFinite(comp.to_vec()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": format!("{}{}", self.kind, self.rank),
            "affine": self.affine,
            "vertices": self.vertices,
            "edges": self.edges(),
        })
    }
}

/// All label-preserving bijections `src_vs -> dst_vs` respecting Cartan entries.
/// Result `phi[i]` is the image of `src_vs[i]`.
pub fn isomorphisms(
    src: &DynkinDiagram,
    src_vs: &[usize],
    dst: &DynkinDiagram,
    dst_vs: &[usize],
) -> Vec<Vec<usize>> {
    if src_vs.len() != dst_vs.len() {
        return Vec::new();
    }
    // Visit source vertices in BFS order so each new vertex has an assigned parent.
    let mut order: Vec<usize> = Vec::new();
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in src_vs {
        if order.contains(&s) {
            continue;
        }
        order.push(s);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in src.neighbors(v) {
                if src_vs.contains(&w) && !order.contains(&w) {
                    order.push(w);
                    parent.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut found = Vec::new();
    let mut image: BTreeMap<usize, usize> = BTreeMap::new();
    extend_iso(src, dst, dst_vs, &order, &parent, &mut image, &mut found);
    found
        .into_iter()
        .map(|img| src_vs.iter().map(|s| img[s]).collect())
        .collect()
}

fn extend_iso(
    src: &DynkinDiagram,
    dst: &DynkinDiagram,
    dst_vs: &[usize],
    order: &[usize],
    parent: &BTreeMap<usize, usize>,
    image: &mut BTreeMap<usize, usize>,
    found: &mut Vec<BTreeMap<usize, usize>>,
) {
    let Some(&s) = order.get(image.len()) else {
        found.push(image.clone());
        return;
    };
    let candidates: Vec<usize> = match parent.get(&s) {
        Some(p) => dst
            .neighbors(image[p])
            .into_iter()
            .filter(|w| dst_vs.contains(w))
            .collect(),
        None => dst_vs.to_vec(),
    };
    for c in candidates {
        if image.values().any(|&x| x == c) {
            continue;
        }
        let fits = image
            .iter()
            .all(|(&s2, &c2)| src.a(s, s2) == dst.a(c, c2) && src.a(s2, s) == dst.a(c2, c));
        if fits {
            image.insert(s, c);
            extend_iso(src, dst, dst_vs, order, parent, image, found);
            image.remove(&s);
        }
    }
}

/// Automorphisms of a finite diagram, as permutations of `0..=rank` fixing 0.
pub fn automorphisms(diagram: &DynkinDiagram) -> Vec<Perm> {
    let vs: Vec<usize> = diagram.vertices.iter().copied().filter(|&v| v != 0).collect();
    isomorphisms(diagram, &vs, diagram, &vs)
        .into_iter()
        .map(|phi| {
            let mut p = Perm::identity(diagram.rank);
            for (&v, w) in vs.iter().zip(phi) {
                p.0[v] = w;
            }
            p
        })
        .sorted()
        .collect()
}

/// A subgroup of the automorphism group acting on the diagram (the *-action).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarAction {
    pub rank: usize,
    /// Sorted element list; the identity comes first.
    pub elements: Vec<Perm>,
    pub generators: Vec<Perm>,
}

impl StarAction {
    pub fn from_elements(rank: usize, elements: Vec<Perm>) -> Self {
        let elements: Vec<Perm> = elements.into_iter().sorted().dedup().collect();
        let mut generators: Vec<Perm> = Vec::new();
        for g in &elements {
            if !closure(rank, &generators).contains(g) {
                generators.push(g.clone());
            }
        }
        StarAction { rank, elements, generators }
    }

    pub fn trivial(rank: usize) -> Self {
        Self::from_elements(rank, vec![Perm::identity(rank)])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orbit(&self, v: usize) -> Vec<usize> {
        self.elements.iter().map(|g| g.apply(v)).sorted().dedup().collect()
    }

    pub fn is_invariant(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        self.generators.iter().all(|g| s.iter().all(|&v| s.contains(&g.apply(v))))
    }

    /// Orbit partition of an invariant set, sorted by minimum.
    pub fn orbits(&self, set: &[usize]) -> Result<Vec<Vec<usize>>> {
        if !self.is_invariant(set) {
            return Err(TitsError::NotInvariant { circled: set.to_vec() });
        }
        Ok(set
            .iter()
            .map(|&v| self.orbit(v))
            .sorted()
            .dedup()
            .collect())
    }

    pub fn stabilizer(&self, v: usize) -> Vec<Perm> {
        self.elements.iter().filter(|g| g.apply(v) == v).cloned().collect()
    }

    /// Nontrivial orbits on the finite vertices, for display.
    pub fn moved_orbits(&self) -> Vec<Vec<usize>> {
        (1..=self.rank)
            .map(|v| self.orbit(v))
            .filter(|o| o.len() > 1)
            .sorted()
            .dedup()
            .collect()
    }
}

fn closure(rank: usize, gens: &[Perm]) -> BTreeSet<Perm> {
    let mut seen = BTreeSet::from([Perm::identity(rank)]);
    let mut frontier = vec![Perm::identity(rank)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Subgroups of `Aut(D)` up to conjugacy, ordered by size. Each class is
/// represented by the member with the lexicographically smallest element list.
pub fn subgroups_up_to_conjugacy(kind: Kind, rank: usize) -> Result<Vec<StarAction>> {
    let d = DynkinDiagram::build(kind, rank)?;
    let aut = automorphisms(&d);
    let id = Perm::identity(rank);
    let others: Vec<&Perm> = aut.iter().filter(|g| **g != id).collect();
    let mut subgroups: BTreeSet<Vec<Perm>> = BTreeSet::new();
    for picked in others.iter().copied().powerset() {
        let gens: Vec<Perm> = picked.into_iter().cloned().collect();
        subgroups.insert(closure(rank, &gens).into_iter().collect());
    }
    let mut reps: BTreeSet<(usize, Vec<Perm>)> = BTreeSet::new();
    for h in &subgroups {
        let rep = aut
            .iter()
            .map(|g| {
                let gi = g.inverse();
                h.iter().map(|x| g.compose(x).compose(&gi)).sorted().collect_vec()
            })
            .min()
            .expect("identity conjugates");
        reps.insert((rep.len(), rep));
    }
    Ok(reps
        .into_iter()
        .map(|(_, els)| StarAction::from_elements(rank, els))
        .collect())
}

/// The conjugacy-class representative of the given order.
pub fn gamma_of_order(kind: Kind, rank: usize, order: usize) -> Result<StarAction> {
    subgroups_up_to_conjugacy(kind, rank)?
        .into_iter()
        .find(|g| g.order() == order)
        .ok_or(TitsError::NoSuchGamma { kind, rank, order })
}

/// Chain of vertices with bond glyphs, plus an optional branch vertex.
fn layout(kind: Kind, n: usize) -> (Vec<usize>, Vec<&'static str>, Option<(usize, usize)>) {
    let single = "--";
    match kind {
        Kind::A => ((1..=n).collect(), vec![single; n - 1], None),
        Kind::B | Kind::C => {
            let mut bonds = vec![single; n - 2];
            bonds.push(if kind == Kind::B { "=>" } else { "<=" });
            ((1..=n).collect(), bonds, None)
        }
        Kind::D => ((1..n).collect(), vec![single; n - 2], Some((n - 2, n))),
        Kind::E => {
            let chain = std::iter::once(1).chain(3..=n).collect_vec();
            (chain, vec![single; n - 2], Some((4, 2)))
        }
        Kind::F => (vec![1, 2, 3, 4], vec![single, "=>", single], None),
        Kind::G => (vec![1, 2], vec!["<≡"], None),
    }
}

/// ASCII picture with circled vertices in parentheses and the *-orbits below.
pub fn render_ascii(kind: Kind, rank: usize, circled: &[usize], gamma: Option<&StarAction>) -> String {
    let cell = |v: usize| {
        if circled.contains(&v) {
            format!("({v})")
        } else {
            format!(" {v} ")
        }
    };
    let (chain, bonds, branch) = layout(kind, rank);
    let mut line = String::new();
    let mut anchor_col = 0;
    for (i, &v) in chain.iter().enumerate() {
        if i > 0 {
            line.push_str(bonds[i - 1]);
        }
        let c = cell(v);
        if branch.is_some_and(|(at, _)| at == v) {
            anchor_col = line.chars().count() + c.chars().count() / 2;
        }
        line.push_str(&c);
    }
    let mut out = vec![line.trim_end().to_string()];
    if let Some((_, b)) = branch {
        let c = cell(b);
        out.push(format!("{}|", " ".repeat(anchor_col)));
        let start = anchor_col.saturating_sub(c.chars().count() / 2);
        out.push(format!("{}{}", " ".repeat(start), c).trim_end().to_string());
    }
    if let Some(g) = gamma.filter(|g| g.order() > 1) {
        let orbits = g
            .moved_orbits()
            .iter()
            .map(|o| format!("{{{}}}", o.iter().join(",")))
            .join(" ");
        out.push(format!("*-action of order {}: {}", g.order(), orbits));
    }
    out.join("\n")
}
