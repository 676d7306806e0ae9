//! Symbolic Tits-algebra constraints on anisotropic kernels.
//!
//! The kernel `D \ J` is cut into blocks (Galois orbits of components). Each
//! circled orbit yields a relation among block classes, obtained by restricting
//! the corresponding simple root to the kernel; each block class also satisfies
//! an order relation inherited from the ambient cocenter. `decide` runs the rule
//! system on these relations and renders the surviving conditions.

mod decide;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::diagram::{Component, Perm};
use crate::error::Result;
use crate::indexer::{self, TitsIndex};
use crate::rootkit::{self, Cocenter, Kind};

pub use decide::{decide, section6_catalog, Verdict, VerdictKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    /// Type A with trivial twist: `SL_1` of an Azumaya algebra.
    Algebra,
    /// Anything else: a group `H` tracked through its Tits class map.
    Group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBlock {
    pub id: usize,
    pub name: String,
    /// Galois orbit of components; the first one is the representative.
    pub components: Vec<Component>,
    pub base_degree: usize,
    pub base: String,
    /// Bourbaki permutations induced on the representative by its stabilizer.
    pub twist: Vec<Vec<usize>>,
    pub role: Role,
    /// Spacing block of a classical family (the algebra written `E`).
    pub spacing: bool,
}

impl KernelBlock {
    pub fn rep(&self) -> &Component {
        &self.components[0]
    }

    pub fn kind(&self) -> Kind {
        self.rep().kind
    }

    pub fn twisted(&self) -> bool {
        !self.twist.is_empty()
    }

    /// Degree of the algebra for algebra blocks.
    pub fn degree(&self) -> Option<i64> {
        (self.role == Role::Algebra).then(|| self.rep().rank as i64 + 1)
    }

    pub fn cocenter(&self) -> Cocenter {
        rootkit::root_system(self.rep().kind, self.rep().rank)
            .expect("recognized component")
            .cocenter
            .clone()
    }

    pub fn type_name(&self) -> String {
        let prefix = if self.twisted() { "twisted " } else { "" };
        format!("{prefix}{}", self.rep().type_name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelShape {
    pub blocks: Vec<KernelBlock>,
    /// Distinct base degrees in increasing order; position gives the prime count.
    degrees: Vec<usize>,
}

impl KernelShape {
    pub fn base_name(&self, degree: usize) -> String {
        if degree == 1 {
            return "R".to_string();
        }
        let primes = self.degrees.iter().filter(|&&d| d > 1 && d <= degree).count();
        format!("R{}", "'".repeat(primes.max(1)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Op {
    Plain,
    /// Evaluated after restriction to a bigger base.
    Res { to: String },
    /// Corestriction of the class over `from` down to `to`.
    Cores { from: String, to: String },
    /// A Galois conjugate of the representative.
    Conj,
}

/// One atom of a relation. For algebra blocks `class` is the single coefficient
/// with respect to the algebra class; for group blocks it is a cocenter element
/// of the representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub block: usize,
    pub op: Op,
    pub class: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Source {
    Orbit(Vec<usize>),
    Order { block: usize, omega: usize, ambient: usize, order: i64 },
}

/// `sum(terms) = 0` over the base of the given degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub base_degree: usize,
    pub terms: Vec<Term>,
    pub source: Source,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Orbit(o) => write!(f, "orbit {{{}}}", o.iter().join(",")),
            Source::Order { omega, ambient, order, .. } => {
                write!(f, "order of omega_{ambient} is {order} (block omega_{omega})")
            }
        }
    }
}

fn stabilizer_of_set(gamma: &[Perm], set: &[usize]) -> Vec<Perm> {
    gamma.iter().filter(|g| g.apply_set(set) == set).cloned().collect()
}

fn component_image(g: &Perm, comp: &Component, comps: &[Component]) -> usize {
    let v = g.apply(comp.labeling[0]);
    comps.iter().position(|c| c.contains(v)).expect("image component exists")
}

/// Classical naming: is this component the tail of the family, as opposed to a
/// spacing component?
fn is_tail(index: &TitsIndex, comp: &Component, orbit_size: usize) -> bool {
    let n = index.rank;
    match index.kind {
        Kind::A => index.gamma.order() == 2 && orbit_size == 1,
        Kind::B | Kind::C => comp.contains(n),
        Kind::D => {
            let triality = n == 4 && index.gamma.order() >= 3;
            if triality {
                return true;
            }
            let spin = comp.contains(n - 1) || comp.contains(n);
            let fork = comp.contains(n - 2) && comp.contains(n - 1) && comp.contains(n);
            // With a spin vertex circled (rd = n) every component is spacing.
            let spin_circled = index.circled.contains(&(n - 1)) || index.circled.contains(&n);
            spin && !spin_circled && (index.circled.contains(&(n - 2)) || fork)
        }
        _ => true,
    }
}

fn numbered(prefix: &str, count: usize, i: usize) -> String {
    if count == 1 {
        prefix.to_string()
    } else {
        format!("{prefix}{}", i + 1)
    }
}

/// Blocks of the anisotropic kernel with base degrees, twists and names.
pub fn kernel_shape(index: &TitsIndex) -> Result<KernelShape> {
    let comps = index.kernel()?;
    let gamma = &index.gamma.elements;
    let mut seen = BTreeSet::new();
    let mut raw = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        if seen.contains(&i) {
            continue;
        }
        let orbit: Vec<usize> = gamma
            .iter()
            .map(|g| component_image(g, c, &comps))
            .sorted()
            .dedup()
            .collect();
        seen.extend(orbit.iter().copied());
        let members: Vec<Component> = orbit.iter().map(|&j| comps[j].clone()).collect();
        let rep = &members[0];
        let stab = stabilizer_of_set(gamma, &rep.vertices());
        let twist: Vec<Vec<usize>> = stab
            .iter()
            .map(|g| {
                rep.labeling
                    .iter()
                    .map(|&v| rep.local_index(g.apply(v)).expect("stabilizer preserves component"))
                    .collect_vec()
            })
            .filter(|p| p.iter().enumerate().any(|(k, &x)| x != k + 1))
            .sorted()
            .dedup()
            .collect();
        let role = if rep.kind == Kind::A && twist.is_empty() {
            Role::Algebra
        } else {
            Role::Group
        };
        let degree = gamma.len() / stab.len();
        raw.push((members, degree, twist, role));
    }

    let exceptional = !index.kind.is_classical() || (index.kind == Kind::D && index.rank == 4 && index.gamma.order() >= 3);
    let has_group = raw.iter().any(|r| r.3 == Role::Group);
    let spacing: Vec<bool> = raw
        .iter()
        .map(|(members, degree, _, role)| {
            !exceptional && *role == Role::Algebra && !is_tail(index, &members[0], *degree)
        })
        .collect();
    let count = |pred: &dyn Fn(usize) -> bool| (0..raw.len()).filter(|&i| pred(i)).count();
    let n_e = count(&|i| spacing[i] || (exceptional && has_group && raw[i].3 == Role::Algebra));
    let n_a = count(&|i| raw[i].3 == Role::Algebra) - n_e;
    let n_h = count(&|i| raw[i].3 == Role::Group);
    let (mut e, mut a, mut h) = (0, 0, 0);
    let mut degrees: Vec<usize> = raw.iter().map(|r| r.1).collect();
    degrees.extend(index.orbits().iter().map(|o| o.len()));
    let degrees = degrees.into_iter().sorted().dedup().collect_vec();

    let mut shape = KernelShape { blocks: Vec::new(), degrees };
    for (id, (members, degree, twist, role)) in raw.into_iter().enumerate() {
        let name = if role == Role::Group {
            h += 1;
            numbered("H", n_h, h - 1)
        } else if spacing[id] || (exceptional && has_group) {
            e += 1;
            numbered("E", n_e, e - 1)
        } else {
            a += 1;
            numbered("A", n_a, a - 1)
        };
        shape.blocks.push(KernelBlock {
            id,
            name,
            components: members,
            base_degree: degree,
            base: shape.base_name(degree),
            twist,
            role,
            spacing: spacing[id],
        });
    }
    Ok(shape)
}

/// Restriction of an ambient weight to one kernel component, in Bourbaki coordinates.
pub fn local_weight(weight: &[i64], comp: &Component) -> Vec<i64> {
    comp.labeling.iter().map(|&v| weight[v - 1]).collect()
}

/// Class of a local weight: the coefficient for algebra blocks, the cocenter
/// element otherwise.
fn block_class(block: &KernelBlock, local: &[i64]) -> Vec<i64> {
    match block.degree() {
        Some(d) => {
            let k: i64 = local.iter().enumerate().map(|(j, x)| (j as i64 + 1) * x).sum();
            vec![k.rem_euclid(d)]
        }
        None => block.cocenter().project(local),
    }
}

/// Restricts an ambient weight to every kernel component and projects to its
/// cocenter: `(block id, member index, class)` per component.
pub fn restrict_weight(weight: &[i64], index: &TitsIndex) -> Result<Vec<(usize, usize, Vec<i64>)>> {
    let shape = kernel_shape(index)?;
    Ok(shape
        .blocks
        .iter()
        .flat_map(|b| {
            b.components
                .iter()
                .enumerate()
                .map(|(i, c)| (b.id, i, block_class(b, &local_weight(weight, c))))
                .collect_vec()
        })
        .collect())
}

fn is_zero_class(block: &KernelBlock, class: &[i64]) -> bool {
    let _ = block;
    class.iter().all(|&x| x == 0)
}

/// One relation per *-orbit `O` of `J`, taken at the point `min O` over the
/// base of degree `|O|`.
pub fn orbit_relations(index: &TitsIndex, shape: &KernelShape) -> Result<Vec<Relation>> {
    let sys = rootkit::root_system(index.kind, index.rank)?;
    let gamma = &index.gamma.elements;
    let mut out = Vec::new();
    for orbit in index.orbits() {
        let o = orbit[0];
        let alpha = sys.alpha_in_omega(o);
        debug_assert!(orbit_sum_is_stable(index, &orbit));
        let k_grp: Vec<Perm> = gamma.iter().filter(|g| g.apply(o) == o).cloned().collect();
        let base_degree = gamma.len() / k_grp.len();
        let mut terms = Vec::new();
        let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
        for b in &shape.blocks {
            for (i, c) in b.components.iter().enumerate() {
                if done.contains(&(b.id, i)) {
                    continue;
                }
                let q_orbit: Vec<usize> = k_grp
                    .iter()
                    .map(|g| {
                        let img = b
                            .components
                            .iter()
                            .position(|x| x.contains(g.apply(c.labeling[0])))
                            .expect("K permutes the block");
                        img
                    })
                    .sorted()
                    .dedup()
                    .collect();
                done.extend(q_orbit.iter().map(|&j| (b.id, j)));
                // Transport the restricted weight from `c` back to the representative.
                let rep = b.rep();
                let g = gamma
                    .iter()
                    .find(|g| g.apply_set(&rep.vertices()) == c.vertices())
                    .expect("block is a Galois orbit");
                let local: Vec<i64> = rep.labeling.iter().map(|&v| alpha[g.apply(v) - 1]).collect();
                let class = block_class(b, &local);
                if is_zero_class(b, &class) {
                    continue;
                }
                let field_degree = base_degree * q_orbit.len();
                let op = if q_orbit.len() > 1 {
                    Op::Cores {
                        from: shape.base_name(field_degree),
                        to: shape.base_name(base_degree),
                    }
                } else if base_degree > b.base_degree {
                    Op::Res { to: shape.base_name(base_degree) }
                } else if i != 0 {
                    Op::Conj
                } else {
                    Op::Plain
                };
                terms.push(Term { block: b.id, op, class });
            }
        }
        out.push(Relation {
            base_degree,
            terms,
            source: Source::Orbit(orbit.clone()),
        });
    }
    Ok(out)
}

/// The orbit sum of simple roots is fixed by the *-action on the kernel.
pub fn orbit_sum_is_stable(index: &TitsIndex, orbit: &[usize]) -> bool {
    let sys = match rootkit::root_system(index.kind, index.rank) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let mut weight = vec![0i64; index.rank];
    for &v in orbit {
        for (w, a) in weight.iter_mut().zip(sys.alpha_in_omega(v)) {
            *w += a;
        }
    }
    let uncircled = index.uncircled();
    index
        .gamma
        .elements
        .iter()
        .all(|g| uncircled.iter().all(|&v| weight[g.apply(v) - 1] == weight[v - 1]))
}

/// For every class `omega_k` of a block representative that is fixed by the
/// twist: `o * beta(omega_k) = 0`, `o` the order of the ambient `omega` above it.
pub fn order_relations(index: &TitsIndex, shape: &KernelShape) -> Result<Vec<Relation>> {
    let sys = rootkit::root_system(index.kind, index.rank)?;
    let mut out = Vec::new();
    for b in &shape.blocks {
        let rep = b.rep();
        let local_sys = rootkit::root_system(rep.kind, rep.rank)?;
        for w in &local_sys.minuscule {
            let k = w.iter().position(|&x| x == 1).expect("minuscule weights are fundamental") + 1;
            if b.twist.iter().any(|p| p[k - 1] != k) {
                continue;
            }
            let ambient = rep.labeling[k - 1];
            let order = sys.class_order(&sys.omega(ambient));
            let class = block_class(b, w);
            let scaled = match b.degree() {
                Some(d) => vec![(order * class[0]).rem_euclid(d)],
                None => b.cocenter().scale(order, &class),
            };
            out.push(Relation {
                base_degree: b.base_degree,
                terms: vec![Term { block: b.id, op: Op::Plain, class: scaled }],
                source: Source::Order { block: b.id, omega: k, ambient, order },
            });
        }
    }
    Ok(out)
}

/// Convenience: the kernel shape and both relation families.
pub fn relations(index: &TitsIndex) -> Result<(KernelShape, Vec<Relation>, Vec<Relation>)> {
    let shape = kernel_shape(index)?;
    let orbit = orbit_relations(index, &shape)?;
    let order = order_relations(index, &shape)?;
    Ok((shape, orbit, order))
}

/// Label helper re-exported for callers that only hold a Brauer verdict.
pub fn label(index: &TitsIndex) -> Result<String> {
    indexer::tits_label(index)
}
