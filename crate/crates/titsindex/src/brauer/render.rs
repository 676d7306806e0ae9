//! Canonical condition strings.

use std::collections::BTreeMap;

use itertools::Itertools;

use super::decide::{normalize, Classes};
use super::{KernelShape, Op, Relation, Role, Term};
use crate::indexer::TitsIndex;
use crate::rootkit::{self, Kind};

/// Display names of merged algebra classes.
pub(crate) struct Naming {
    names: BTreeMap<usize, String>,
}

impl Naming {
    pub(crate) fn new(shape: &KernelShape, classes: &Classes) -> Self {
        let mut names = BTreeMap::new();
        for b in &shape.blocks {
            if b.role != Role::Algebra || classes.root(b.id) != b.id {
                continue;
            }
            let members = classes.members(b.id);
            let letter = &b.name[..1];
            let family = shape
                .blocks
                .iter()
                .filter(|x| x.role == Role::Algebra && x.name.starts_with(letter))
                .count();
            let whole = members.iter().filter(|&&m| shape.blocks[m].name.starts_with(letter)).count() == family;
            let name = if whole && members.len() > 1 { letter.to_string() } else { b.name.clone() };
            names.insert(b.id, name);
        }
        Naming { names }
    }

    pub(crate) fn class_name(&self, root: usize) -> String {
        self.names[&root].clone()
    }
}

fn symmetric(c: i64, d: i64) -> i64 {
    let r = c.rem_euclid(d);
    if 2 * r > d {
        r - d
    } else {
        r
    }
}

pub(crate) fn wrap(op: &Op, inner: String) -> String {
    match op {
        Op::Plain => inner,
        Op::Res { to } => format!("res_{{{to}}}{inner}"),
        Op::Cores { from, to } => format!("cores_{{{from}/{to}}}{inner}"),
        Op::Conj => format!("conj{inner}"),
    }
}

fn coefficient(c: i64, atom: String) -> String {
    if c == 1 {
        atom
    } else {
        format!("{c}{atom}")
    }
}

/// `c1 atom1 + c2 atom2 ...` with signed integer coefficients.
fn sum(atoms: &[(i64, String)]) -> String {
    let mut out = String::new();
    for (i, (c, a)) in atoms.iter().enumerate() {
        let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
        if i > 0 || sign == "-" {
            out.push_str(sign);
        }
        out.push_str(&coefficient(mag, a.clone()));
    }
    out
}

struct Ctx<'a> {
    shape: &'a KernelShape,
    naming: &'a Naming,
}

impl Ctx<'_> {
    fn degree(&self, t: &Term) -> i64 {
        self.shape.blocks[t.block].degree().expect("algebra term")
    }

    fn algebra_atom(&self, t: &Term) -> String {
        wrap(&t.op, format!("[{}]", self.naming.class_name(t.block)))
    }

    /// Minuscule index of a class in a group block.
    fn omega(&self, t: &Term, class: &[i64]) -> usize {
        let rep = self.shape.blocks[t.block].rep();
        let sys = rootkit::root_system(rep.kind, rep.rank).expect("recognized component");
        sys.minuscule_index(class).ok().flatten().unwrap_or(0)
    }

    fn beta(&self, t: &Term, k: usize) -> String {
        let name = &self.shape.blocks[t.block].name;
        match &t.op {
            Op::Res { to } => format!("beta_{{{name}_{{{to}}}}}(omega_{k})"),
            op => wrap(op, format!("beta_{name}(omega_{k})")),
        }
    }

    /// Smallest minuscule index among generators of the cyclic group of `class`.
    fn generator_omega(&self, t: &Term) -> usize {
        let co = self.shape.blocks[t.block].cocenter();
        let ord = co.class_order(&t.class);
        (1..ord)
            .filter(|&k| rootkit::gcd(k, ord) == 1)
            .map(|k| self.omega(t, &co.scale(k, &t.class)))
            .min()
            .unwrap_or_else(|| self.omega(t, &t.class))
    }

    /// `beta_H(c) = RHS` with the sign chosen so RHS coefficients are positive.
    fn group_equation(&self, h: &Term, others: &[Term]) -> String {
        let co = self.shape.blocks[h.block].cocenter();
        let candidates = [(co.neg(&h.class), 1i64), (h.class.clone(), -1i64)];
        let rendered: Vec<(bool, usize, String)> = candidates
            .iter()
            .map(|(class, sign)| {
                // beta(class) = sign * others
                let atoms: Vec<(i64, String)> = others
                    .iter()
                    .map(|t| (symmetric(sign * t.class[0], self.degree(t)), self.algebra_atom(t)))
                    .collect();
                let positive = atoms.iter().all(|(c, _)| *c > 0);
                let k = self.omega(h, class);
                (positive, k, format!("{} = {}", self.beta(h, k), sum(&atoms)))
            })
            .collect();
        rendered
            .into_iter()
            .sorted_by_key(|(positive, k, _)| (!positive, *k))
            .next()
            .map(|x| x.2)
            .expect("two candidates")
    }

    fn algebra_relation(&self, terms: &[Term]) -> String {
        if let [t] = terms {
            let d = self.degree(t);
            let m = symmetric(t.class[0], d).abs();
            let atom = self.algebra_atom(t);
            return if m == 1 {
                format!("{atom}=0")
            } else {
                let x = self.naming.class_name(t.block);
                format!("{m}{atom}=0 (exp {x} ≤ {m})")
            };
        }
        let unit = |t: &&Term| symmetric(t.class[0], self.degree(t)).abs() == 1 && t.op == Op::Plain;
        let pivot = terms
            .iter()
            .filter(unit)
            .find(|t| self.naming.class_name(t.block).starts_with('E'))
            .or_else(|| terms.iter().find(unit));
        match pivot {
            Some(p) => {
                // others + c[P] = 0 with c = ±1, so others * (-c) = [P].
                let c = symmetric(p.class[0], self.degree(p));
                let atoms: Vec<(i64, String)> = terms
                    .iter()
                    .filter(|t| *t != p)
                    .map(|t| (symmetric(-c * t.class[0], self.degree(t)), self.algebra_atom(t)))
                    .collect();
                format!("{}={}", sum(&atoms), self.algebra_atom(p))
            }
            None => {
                let atoms: Vec<(i64, String)> = terms
                    .iter()
                    .map(|t| (symmetric(t.class[0], self.degree(t)), self.algebra_atom(t)))
                    .collect();
                format!("{}=0", sum(&atoms))
            }
        }
    }
}

/// Renders the orbit relations left after merging.
pub(crate) fn conditions(
    index: &TitsIndex,
    shape: &KernelShape,
    orbit: &[Relation],
    classes: &Classes,
    naming: &Naming,
    merges: Vec<String>,
) -> Vec<String> {
    let ctx = Ctx { shape, naming };
    let mut out = merges;
    let mut kills: BTreeMap<(usize, String), (Term, Vec<Vec<i64>>)> = BTreeMap::new();
    for rel in orbit {
        let nt = normalize(rel, shape, classes);
        if nt.is_empty() {
            continue;
        }
        let groups: Vec<&Term> = nt.iter().filter(|t| shape.blocks[t.block].role == Role::Group).collect();
        match groups.as_slice() {
            [] => out.push(ctx.algebra_relation(&nt)),
            [h] if nt.len() == 1 => {
                let entry = kills
                    .entry((h.block, format!("{:?}", h.op)))
                    .or_insert_with(|| ((*h).clone(), Vec::new()));
                entry.1.push(h.class.clone());
            }
            [h] => {
                let others: Vec<Term> = nt.iter().filter(|t| t != h).cloned().collect();
                out.push(ctx.group_equation(h, &others));
            }
            _ => {
                let atoms = nt
                    .iter()
                    .map(|t| match shape.blocks[t.block].role {
                        Role::Group => ctx.beta(t, ctx.omega(t, &t.class)),
                        Role::Algebra => ctx.algebra_atom(t),
                    })
                    .join("+");
                out.push(format!("{atoms}=0"));
            }
        }
    }
    for (first, killed) in kills.into_values() {
        let co = shape.blocks[first.block].cocenter();
        if first.op == Op::Plain && co.span(&killed).len() as i64 == co.order() {
            out.push(format!("beta_{}=0", shape.blocks[first.block].name));
            continue;
        }
        for class in killed {
            let t = Term { class, ..first.clone() };
            out.push(format!("{}=0", ctx.beta(&t, ctx.generator_omega(&t))));
        }
    }
    let outer_classical = matches!(index.kind, Kind::A | Kind::D) && index.gamma.order() == 2;
    if outer_classical && !index.circled.is_empty() {
        for b in shape.blocks.iter().filter(|b| b.role == Role::Group && b.twisted()) {
            out.push(format!("base({}, O)={}", b.name, shape.base_name(2)));
        }
    }
    out.into_iter().sorted().dedup().collect()
}
