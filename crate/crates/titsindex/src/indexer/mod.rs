//! Tits indices: admissibility, exhaustive enumeration up to diagram symmetry,
//! the closed-form catalog, relative root systems and labels.

mod closed_form;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::diagram::{self, Component, DynkinDiagram, Perm, StarAction};
use crate::error::{Result, TitsError};
use crate::rootkit::{self, Kind};

pub use closed_form::closed_form_sets;

/// Diagram, *-action and circled set `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitsIndex {
    pub kind: Kind,
    pub rank: usize,
    pub gamma: StarAction,
    pub circled: Vec<usize>,
}

impl TitsIndex {
    pub fn new(kind: Kind, rank: usize, gamma: StarAction, circled: &[usize]) -> Result<Self> {
        rootkit::validate(kind, rank)?;
        let circled: Vec<usize> = circled.iter().copied().sorted().dedup().collect();
        if let Some(&vertex) = circled.iter().find(|&&v| v == 0 || v > rank) {
            return Err(TitsError::VertexOutOfRange { vertex });
        }
        if !gamma.is_invariant(&circled) {
            return Err(TitsError::NotInvariant { circled });
        }
        Ok(TitsIndex { kind, rank, gamma, circled })
    }

    pub fn diagram(&self) -> Result<DynkinDiagram> {
        DynkinDiagram::build(self.kind, self.rank)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.gamma
            .orbits(&self.circled)
            .expect("circled set checked invariant at construction")
    }

    pub fn relative_rank(&self) -> usize {
        self.orbits().len()
    }

    pub fn uncircled(&self) -> Vec<usize> {
        (1..=self.rank).filter(|v| !self.circled.contains(v)).collect()
    }

    /// Components of the anisotropic kernel `D \ J`.
    pub fn kernel(&self) -> Result<Vec<Component>> {
        self.diagram()?.induced_components(&self.uncircled())
    }

    pub fn label(&self) -> Result<String> {
        tits_label(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitWitness {
    pub orbit: Vec<usize>,
    /// Components of the test diagram that meet the orbit, as `type{vertices}`.
    pub components: Vec<String>,
    /// Image of the orbit under the componentwise opposition involution.
    pub image: Vec<usize>,
    pub invariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub witnesses: Vec<OrbitWitness>,
}

fn extended(kind: Kind, rank: usize) -> Result<Arc<DynkinDiagram>> {
    static CACHE: OnceLock<Mutex<HashMap<(Kind, usize), Arc<DynkinDiagram>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().expect("diagram cache poisoned").get(&(kind, rank)) {
        return Ok(d.clone());
    }
    let d = Arc::new(DynkinDiagram::build(kind, rank)?.extend()?);
    cache.lock().expect("diagram cache poisoned").insert((kind, rank), d.clone());
    Ok(d)
}

/// Opposition-invariance test on the extended diagram: for every *-orbit `O` of
/// `J + {0}`, the diagram `(D^ \ J^) + O` must be finite and its opposition
/// involution must preserve `O`. The empty set is always admissible.
pub fn is_admissible(kind: Kind, rank: usize, gamma: &StarAction, circled: &[usize]) -> Result<AdmissibilityReport> {
    let index = TitsIndex::new(kind, rank, gamma.clone(), circled)?;
    if index.circled.is_empty() {
        return Ok(AdmissibilityReport { admissible: true, witnesses: Vec::new() });
    }
    let ext = extended(kind, rank)?;
    let hat: BTreeSet<usize> = index.circled.iter().copied().chain([0]).collect();
    let outside = (0..=rank).filter(|v| !hat.contains(v)).collect_vec();
    let mut orbits = vec![vec![0]];
    orbits.extend(index.orbits());
    let mut witnesses = Vec::new();
    for orbit in orbits {
        let test_set = outside.iter().chain(&orbit).copied().sorted().collect_vec();
        let comps = ext
            .connected_components(&test_set)
            .into_iter()
            .filter(|c| c.iter().any(|v| orbit.contains(v)))
            .map(|c| ext.recognize(&c))
            .collect::<Result<Vec<_>>>()?;
        let mut image = Vec::new();
        for &v in &orbit {
            let c = comps.iter().find(|c| c.contains(v)).expect("orbit vertex lies in a component");
            let sigma = rootkit::opposition_involution(c.kind, c.rank)?;
            let k = c.local_index(v).expect("vertex in component");
            image.push(c.labeling[sigma[k] - 1]);
        }
        image.sort_unstable();
        let invariant = image == orbit;
        witnesses.push(OrbitWitness {
            components: comps
                .iter()
                .map(|c| format!("{}{{{}}}", c.type_name(), c.vertices().iter().join(",")))
                .collect(),
            orbit,
            image,
            invariant,
        });
    }
    let admissible = witnesses.iter().all(|w| w.invariant);
    Ok(AdmissibilityReport { admissible, witnesses })
}

/// Elements of `Aut(D)` normalizing `gamma`.
pub fn normalizer(kind: Kind, rank: usize, gamma: &StarAction) -> Result<Vec<Perm>> {
    let d = DynkinDiagram::build(kind, rank)?;
    let target: BTreeSet<&Perm> = gamma.elements.iter().collect();
    Ok(diagram::automorphisms(&d)
        .into_iter()
        .filter(|g| {
            let gi = g.inverse();
            gamma
                .elements
                .iter()
                .all(|x| target.contains(&g.compose(x).compose(&gi)))
        })
        .collect())
}

/// Lexicographically smallest image of `J` under the normalizer of `gamma`.
pub fn canonicalize(normalizer: &[Perm], circled: &[usize]) -> Vec<usize> {
    normalizer
        .iter()
        .map(|g| g.apply_set(circled))
        .min()
        .unwrap_or_else(|| circled.iter().copied().sorted().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Enumerated,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexCatalog {
    pub kind: Kind,
    pub rank: usize,
    pub gamma: StarAction,
    pub provenance: Provenance,
    pub entries: Vec<TitsIndex>,
}

impl IndexCatalog {
    pub fn circled_sets(&self) -> Vec<Vec<usize>> {
        self.entries.iter().map(|e| e.circled.clone()).collect()
    }
}

fn sort_sets(sets: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    sets.into_iter()
        .sorted_by(|a, b| (a.len(), a).cmp(&(b.len(), b)))
        .dedup()
        .collect()
}

fn catalog_from_sets(
    kind: Kind,
    rank: usize,
    gamma: &StarAction,
    provenance: Provenance,
    sets: Vec<Vec<usize>>,
) -> Result<IndexCatalog> {
    let entries = sort_sets(sets)
        .into_iter()
        .map(|j| TitsIndex::new(kind, rank, gamma.clone(), &j))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndexCatalog { kind, rank, gamma: gamma.clone(), provenance, entries })
}

/// Every admissible `J` that is a union of *-orbits, one per normalizer class.
pub fn enumerate(kind: Kind, rank: usize, gamma: &StarAction) -> Result<IndexCatalog> {
    rootkit::validate(kind, rank)?;
    let norm = normalizer(kind, rank, gamma)?;
    let orbits = gamma.orbits(&(1..=rank).collect_vec())?;
    let mut found = Vec::new();
    for mask in 0u64..(1 << orbits.len()) {
        let j = orbits
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, o)| o.iter().copied())
            .sorted()
            .collect_vec();
        if canonicalize(&norm, &j) != j {
            continue;
        }
        if is_admissible(kind, rank, gamma, &j)?.admissible {
            found.push(j);
        }
    }
    catalog_from_sets(kind, rank, gamma, Provenance::Enumerated, found)
}

/// The closed-form family lists, canonicalized the same way as `enumerate`.
pub fn closed_form(kind: Kind, rank: usize, gamma: &StarAction) -> Result<IndexCatalog> {
    let norm = normalizer(kind, rank, gamma)?;
    let sets = closed_form_sets(kind, rank, gamma)?
        .into_iter()
        .map(|j| canonicalize(&norm, &j))
        .collect();
    catalog_from_sets(kind, rank, gamma, Provenance::ClosedForm, sets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeSystem {
    pub relative_rank: usize,
    /// Relative roots in the basis of orbit sums, positive and negative.
    pub roots: Vec<Vec<i64>>,
    /// Cartan type such as `"BC2"` or `"A3"`; `None` in relative rank 0.
    pub relative_type: Option<String>,
}

/// Projects the root system onto the span of the orbit sums.
pub fn relative_system(index: &TitsIndex) -> Result<RelativeSystem> {
    let orbits = index.orbits();
    let r = orbits.len();
    let sys = rootkit::root_system(index.kind, index.rank)?;
    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    for root in &sys.positive_roots {
        let v = orbits
            .iter()
            .map(|o| o.iter().map(|&x| root[x - 1]).sum::<i64>())
            .collect_vec();
        if v.iter().any(|&x| x != 0) {
            roots.insert(v.iter().map(|x| -x).collect());
            roots.insert(v);
        }
    }
    let relative_type = if r == 0 {
        None
    } else if roots.iter().any(|v| roots.contains(&v.iter().map(|x| 2 * x).collect_vec())) {
        Some(format!("BC{r}"))
    } else {
        let unit = |i: usize| (0..r).map(|k| i64::from(k == i)).collect_vec();
        let mut pairing = BTreeMap::new();
        for (a, b) in (0..r).cartesian_product(0..r).filter(|(a, b)| a != b) {
            let mut k = 0;
            loop {
                let next = unit(b)
                    .iter()
                    .zip(unit(a))
                    .map(|(x, y)| x + (k + 1) * y)
                    .collect_vec();
                if !roots.contains(&next) {
                    break;
                }
                k += 1;
            }
            pairing.insert((b + 1, a + 1), -k);
        }
        let d = DynkinDiagram::from_pairings(r, pairing);
        let c = d.recognize(&(1..=r).collect_vec())?;
        Some(c.type_name())
    };
    Ok(RelativeSystem {
        relative_rank: r,
        roots: roots.into_iter().collect(),
        relative_type,
    })
}

/// `d` for classical labels: one more than the size of the kernel component
/// through vertex 1, or 1 when vertex 1 is circled.
fn classical_spacing(index: &TitsIndex) -> Result<usize> {
    if index.circled.is_empty() {
        return Ok(if index.kind == Kind::A && index.gamma.order() == 1 {
            index.rank + 1
        } else {
            0
        });
    }
    if index.circled.contains(&1) {
        return Ok(1);
    }
    let comps = index.kernel()?;
    let c = comps.iter().find(|c| c.contains(1)).expect("vertex 1 is uncircled");
    Ok(c.rank + 1)
}

/// Label `[prefix]Xn_r_s`; the prefix is the *-action order and appears only when
/// the diagram has symmetries.
pub fn tits_label(index: &TitsIndex) -> Result<String> {
    let d = index.diagram()?;
    let prefix = if diagram::automorphisms(&d).len() > 1 {
        index.gamma.order().to_string()
    } else {
        String::new()
    };
    let triality = index.kind == Kind::D && index.rank == 4 && index.gamma.order() >= 3;
    let paren = matches!(index.kind, Kind::A | Kind::C | Kind::D) && !triality;
    let sup = if paren {
        format!("({})", classical_spacing(index)?)
    } else {
        let kernel = index.kernel()?;
        let roots: usize = kernel
            .iter()
            .map(|c| rootkit::root_count(c.kind, c.rank))
            .sum::<Result<usize>>()?;
        let dim = roots + index.rank - index.relative_rank();
        let mut s = dim.to_string();
        if index.kind == Kind::E && index.rank == 6 && index.gamma.order() == 2 && dim == 16 {
            s.push(if kernel.len() == 1 { 'a' } else { 'b' });
        }
        s
    };
    Ok(format!(
        "{prefix}{}{}_{}_{sup}",
        index.kind,
        index.rank,
        index.relative_rank()
    ))
}
