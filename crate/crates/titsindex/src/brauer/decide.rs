//! Rule system: merging (M), exponent feasibility (R1), symplectic split (R2)
//! and the vector-representation bound (R5).

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::render::{self, Naming};
use super::{relations, KernelShape, Op, Relation, Role, Source, Term};
use crate::diagram::StarAction;
use crate::error::Result;
use crate::indexer::{self, TitsIndex};
use crate::rootkit::{gcd, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Excluded,
    Conditions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: String,
    pub verdict: VerdictKind,
    pub trace: Vec<String>,
    pub conditions: Vec<String>,
    /// Rule that fired, for excluded verdicts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
}

impl Verdict {
    pub fn is_excluded(&self) -> bool {
        self.verdict == VerdictKind::Excluded
    }
}

/// Union-find over block ids; the smallest id of a class is its root.
#[derive(Clone, Debug)]
pub(crate) struct Classes(Vec<usize>);

impl Classes {
    fn new(n: usize) -> Self {
        Classes((0..n).collect())
    }

    pub(crate) fn root(&self, mut x: usize) -> usize {
        while self.0[x] != x {
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.root(a), self.root(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
    }

    pub(crate) fn members(&self, x: usize) -> Vec<usize> {
        let r = self.root(x);
        (0..self.0.len()).filter(|&y| self.root(y) == r).collect()
    }
}

/// Relation with merged algebra classes: equal atoms are summed and zero
/// atoms dropped.
pub(crate) fn normalize(rel: &Relation, shape: &KernelShape, classes: &Classes) -> Vec<Term> {
    let mut acc: BTreeMap<(usize, String), Term> = BTreeMap::new();
    for t in &rel.terms {
        let b = &shape.blocks[t.block];
        let block = if b.role == Role::Algebra { classes.root(t.block) } else { t.block };
        let key = (block, format!("{:?}", t.op));
        let entry = acc.entry(key).or_insert_with(|| Term {
            block,
            op: t.op.clone(),
            class: vec![0; t.class.len()],
        });
        entry.class = match b.degree() {
            Some(d) => vec![(entry.class[0] + t.class[0]).rem_euclid(d)],
            None => b.cocenter().add(&entry.class, &t.class),
        };
    }
    acc.into_values().filter(|t| t.class.iter().any(|&x| x != 0)).collect()
}

fn is_unit(c: i64, d: i64) -> bool {
    gcd(c, d) == 1
}

fn prime_support(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rule M: two-term plain relations `c[X] + c'[Y] = 0` between algebras of the
/// same degree with unit coefficients `c = -c'` identify `X` and `Y`.
fn merge(shape: &KernelShape, orbit: &[Relation], classes: &mut Classes, trace: &mut Vec<String>) -> Vec<String> {
    let mut merges = Vec::new();
    loop {
        let mut changed = false;
        for rel in orbit {
            let nt = normalize(rel, shape, classes);
            if nt.len() != 2 || nt.iter().any(|t| t.op != Op::Plain) {
                continue;
            }
            let (x, y) = (&shape.blocks[nt[0].block], &shape.blocks[nt[1].block]);
            let (Some(dx), Some(dy)) = (x.degree(), y.degree()) else {
                continue;
            };
            let (cx, cy) = (nt[0].class[0], nt[1].class[0]);
            if dx != dy || !is_unit(cx, dx) || (cx + cy).rem_euclid(dx) != 0 {
                continue;
            }
            // Name the merge by the blocks that appear in the raw relation.
            let raw: Vec<usize> = rel
                .terms
                .iter()
                .map(|t| t.block)
                .filter(|&b| classes.root(b) == nt[0].block || classes.root(b) == nt[1].block)
                .sorted()
                .dedup()
                .collect();
            let (a, b) = (raw[0], *raw.last().unwrap());
            let text = format!("[{}]=[{}]", shape.blocks[a].name, shape.blocks[b].name);
            trace.push(format!("M: {} from {}", text, rel.source));
            merges.push(text);
            classes.union(nt[0].block, nt[1].block);
            changed = true;
        }
        if !changed {
            return merges;
        }
    }
}

/// Pure relations `m[X] = 0` on the merged class rooted at `root`.
fn pure_coefficients(rels: &[&Relation], shape: &KernelShape, classes: &Classes, root: usize) -> Vec<i64> {
    rels.iter()
        .filter_map(|r| {
            let nt = normalize(r, shape, classes);
            match nt.as_slice() {
                [t] if t.block == root && t.op == Op::Plain => Some(t.class[0]),
                _ => None,
            }
        })
        .collect()
}

fn rule_r1(shape: &KernelShape, rels: &[&Relation], classes: &Classes, naming: &Naming) -> Option<String> {
    for b in &shape.blocks {
        let Some(d) = b.degree() else { continue };
        if classes.root(b.id) != b.id || d == 1 {
            continue;
        }
        let ms = pure_coefficients(rels, shape, classes, b.id);
        let g = ms.iter().fold(d, |acc, &m| gcd(acc, m));
        let support = prime_support(d);
        let feasible = (1..=g).any(|e| g % e == 0 && prime_support(e) == support);
        if feasible {
            continue;
        }
        let x = naming.class_name(b.id);
        let step = if g == 1 {
            format!("hence [{x}]=0, a contradiction")
        } else if prime_support(g) == vec![g] {
            format!("hence exp {x}={g}, but exp {x} must have the prime factors of ind {x} = {d}")
        } else {
            format!("hence exp {x} divides {g}, but exp {x} must have the prime factors of ind {x} = {d}")
        };
        return Some(format!("R1 on {x} (degree {d}): pure relations give exp {x} | gcd({d}, {}) = {g}; {step}", ms.iter().map(|m| m.to_string()).join(", ")));
    }
    None
}

fn rule_r2(shape: &KernelShape, rels: &[&Relation], classes: &Classes) -> Option<String> {
    for b in &shape.blocks {
        if b.role != Role::Group || b.kind() != Kind::C {
            continue;
        }
        let killed: Vec<Vec<i64>> = rels
            .iter()
            .filter_map(|r| match normalize(r, shape, classes).as_slice() {
                [t] if t.block == b.id && t.op == Op::Plain => Some(t.class.clone()),
                _ => None,
            })
            .collect();
        let co = b.cocenter();
        if co.span(&killed).len() as i64 == co.order() {
            return Some(format!(
                "R2 on {} ({}): the generator of its cocenter is killed, so the symplectic kernel would be split; contradiction",
                b.name,
                b.type_name()
            ));
        }
    }
    None
}

/// Degree of the vector representation whose Tits algebra the spacing
/// algebras are Brauer equivalent to.
fn vector_degree(index: &TitsIndex) -> Option<i64> {
    let n = index.rank as i64;
    match index.kind {
        Kind::A => Some(n + 1),
        Kind::C | Kind::D => Some(2 * n),
        _ => None,
    }
}

fn rule_r5(index: &TitsIndex, shape: &KernelShape) -> Option<String> {
    let bound = vector_degree(index)?;
    shape.blocks.iter().filter(|b| b.spacing).find_map(|b| {
        let d = b.degree()?;
        (bound % d != 0).then(|| {
            format!("R5 on {}: degree {d} does not divide {bound}, the degree of the vector representation", b.name)
        })
    })
}

fn describe_terms(terms: &[Term], shape: &KernelShape) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|t| {
            let b = &shape.blocks[t.block];
            match b.role {
                Role::Algebra => {
                    let atom = render::wrap(&t.op, format!("[{}]", b.name));
                    if t.class[0] == 1 { atom } else { format!("{}{atom}", t.class[0]) }
                }
                Role::Group => render::wrap(&t.op, format!("beta_{}({})", b.name, t.class.iter().join(","))),
            }
        })
        .join(" + ")
}

/// Decides exclusion or renders the surviving conditions.
pub fn decide(index: &TitsIndex) -> Result<Verdict> {
    let label = indexer::tits_label(index)?;
    let (shape, orbit, order) = relations(index)?;
    let mut trace = Vec::new();
    for b in &shape.blocks {
        trace.push(format!(
            "block {}: {} over {} on {{{}}}",
            b.name,
            b.type_name(),
            b.base,
            b.components.iter().map(|c| c.vertices().iter().join(",")).join(" | ")
        ));
    }
    for r in &orbit {
        trace.push(format!("{} over {}: {} = 0", r.source, shape.base_name(r.base_degree), describe_terms(&r.terms, &shape)));
    }
    for r in &order {
        if let Source::Order { .. } = r.source {
            if r.terms.iter().any(|t| t.class.iter().any(|&x| x != 0)) {
                trace.push(format!("{}: {} = 0", r.source, describe_terms(&r.terms, &shape)));
            }
        }
    }

    let mut classes = Classes::new(shape.blocks.len());
    let merges = merge(&shape, &orbit, &mut classes, &mut trace);
    let naming = Naming::new(&shape, &classes);
    let all: Vec<&Relation> = orbit.iter().chain(order.iter()).collect();

    let fired = rule_r1(&shape, &all, &classes, &naming)
        .map(|t| ("R1", t))
        .or_else(|| rule_r2(&shape, &all, &classes).map(|t| ("R2", t)))
        .or_else(|| rule_r5(index, &shape).map(|t| ("R5", t)));
    if let Some((rule, step)) = fired {
        trace.push(step);
        trace.push(format!("excluded by rule {rule}"));
        return Ok(Verdict {
            label,
            verdict: VerdictKind::Excluded,
            trace,
            conditions: Vec::new(),
            rule: Some(rule.to_string()),
        });
    }

    let conditions = render::conditions(index, &shape, &orbit, &classes, &naming, merges);
    trace.push(format!("conditions: {}", if conditions.is_empty() { "none".into() } else { conditions.join("; ") }));
    Ok(Verdict {
        label,
        verdict: VerdictKind::Conditions,
        trace,
        conditions,
        rule: None,
    })
}

/// Every combinatorially admissible index of the type with its verdict.
pub fn section6_catalog(kind: Kind, rank: usize, gamma: &StarAction) -> Result<Vec<(TitsIndex, Verdict)>> {
    indexer::enumerate(kind, rank, gamma)?
        .entries
        .into_iter()
        .map(|e| {
            let v = decide(&e)?;
            Ok((e, v))
        })
        .collect()
}
