//! Structural analysis of a finite inverse semigroup: natural order,
//! Green's relations on idempotents, ideals, maximal subgroups, the maximal
//! group image and the flags collected in [`StructuralProfile`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::germ::GermSpace;
use crate::poset::Poset;
use crate::semigroup::{Group, InverseSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
}

/// `rel[s][t]` iff `s <= t` in the natural partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalOrder {
    n: usize,
    rel: Vec<bool>,
}

impl NaturalOrder {
    pub fn le(&self, s: usize, t: usize) -> bool {
        self.rel[s * self.n + t]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_poset(&self) -> Poset {
        Poset::new(self.n, |a, b| self.le(a, b)).expect("natural order is a partial order")
    }
}

/// `s <= t` iff `s = et` for some idempotent `e`.
pub fn natural_order(s: &InverseSemigroup) -> NaturalOrder {
    let n = s.size();
    let mut rel = vec![false; n * n];
    for a in s.elements() {
        for &e in s.idempotents() {
            for t in s.elements() {
                if s.mul(e, t) == a {
                    rel[a * n + t] = true;
                }
            }
        }
    }
    NaturalOrder { n, rel }
}

pub fn have_common_lower_bound(s: &InverseSemigroup, a: usize, b: usize) -> bool {
    s.elements().any(|u| s.le(u, a) && s.le(u, b))
}

/// `e D f` iff some `s` has `ss* = e` and `s*s = f`.
pub fn d_related(s: &InverseSemigroup, e: usize, f: usize) -> bool {
    s.elements().any(|a| s.ran(a) == e && s.dom(a) == f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreenData {
    /// Partition of `E(S)` into D-classes, ordered by least member.
    pub d_classes: Vec<Vec<usize>>,
    /// Partition of `E(S)` into J-classes, ordered by least member.
    pub j_classes: Vec<Vec<usize>>,
    /// `j_poset.le(a, b)` iff the ideal of class `a` is inside that of class `b`.
    pub j_poset: Poset,
    /// Downsets of `j_poset` under inclusion.
    pub ideal_lattice: Poset,
}

fn partition(items: &[usize], mut same: impl FnMut(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in items {
        match classes.iter_mut().find(|c| same(c[0], x)) {
            Some(c) => c.push(x),
            None => classes.push(vec![x]),
        }
    }
    classes
}

pub fn green_and_ideals(s: &InverseSemigroup) -> GreenData {
    let es = s.idempotents();
    let d_classes = partition(es, |e, f| d_related(s, e, f));
    let ideals: Vec<BTreeSet<usize>> = es.iter().map(|&e| s.principal_ideal(e)).collect();
    let idx = |e: usize| es.iter().position(|&x| x == e).unwrap();
    let j_classes = partition(es, |e, f| ideals[idx(e)] == ideals[idx(f)]);
    let j_poset =
        Poset::new(j_classes.len(), |a, b| ideals[idx(j_classes[a][0])].is_subset(&ideals[idx(j_classes[b][0])]))
            .expect("ideal inclusion on J-classes is a partial order");
    let ideal_lattice = j_poset.downset_lattice();
    GreenData { d_classes, j_classes, j_poset, ideal_lattice }
}

/// All two-sided ideals of `s`, including the empty one, computed directly
/// as unions of principal ideals.
pub fn two_sided_ideals(s: &InverseSemigroup) -> Vec<BTreeSet<usize>> {
    let principals: Vec<BTreeSet<usize>> = s.elements().map(|a| s.principal_ideal(s.ran(a))).collect();
    let mut all: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    all.insert(BTreeSet::new());
    loop {
        let mut added = Vec::new();
        for i in &all {
            for p in &principals {
                let u: BTreeSet<usize> = i.union(p).copied().collect();
                if !all.contains(&u) {
                    added.push(u);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        all.extend(added);
    }
    all.into_iter().collect()
}

/// `G_e = {s : ss* = s*s = e}` with the induced product, and its embedding.
pub fn maximal_subgroup(s: &InverseSemigroup, e: usize) -> Result<(Group, Vec<usize>), StructureError> {
    if !s.is_idempotent(e) {
        return Err(StructureError::NotIdempotent(e));
    }
    let elems: Vec<usize> = s.elements().filter(|&a| s.ran(a) == e && s.dom(a) == e).collect();
    let (sub, embed) = s.restrict(&elems).expect("maximal subgroup is closed");
    Ok((Group::new(sub).expect("maximal subgroup has one idempotent"), embed))
}

/// The maximal group image together with the quotient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupImage {
    pub group: Group,
    /// `sigma[s]` is the image of `s`.
    pub sigma: Vec<usize>,
    pub germs: GermSpace,
}

/// Quotient by "has a common lower bound in the natural order".
pub fn maximal_group_image(s: &InverseSemigroup) -> GroupImage {
    let germs = GermSpace::from_equivalence(s.size(), |a, b| have_common_lower_bound(s, a, b))
        .expect("common lower bound is an equivalence on an inverse semigroup");
    let k = germs.class_count();
    let table: Vec<Vec<usize>> =
        (0..k).map(|c| (0..k).map(|d| germs.class_of(s.mul(germs.rep(c), germs.rep(d)))).collect()).collect();
    let sigma = germs.labels().to_vec();
    for a in s.elements() {
        for b in s.elements() {
            assert_eq!(sigma[s.mul(a, b)], table[sigma[a]][sigma[b]], "germ relation is a congruence");
        }
    }
    let group = Group::from_table(table).expect("germ quotient is a group");
    GroupImage { group, sigma, germs }
}

pub fn center(s: &InverseSemigroup) -> Vec<usize> {
    s.elements().filter(|&z| s.elements().all(|a| s.mul(z, a) == s.mul(a, z))).collect()
}

/// Any element above an idempotent is idempotent.
pub fn is_e_unitary(s: &InverseSemigroup) -> bool {
    s.idempotents().iter().all(|&e| s.elements().all(|a| !s.le(e, a) || s.is_idempotent(a)))
}

fn maximum_of(s: &InverseSemigroup, set: &[usize]) -> Option<usize> {
    set.iter().copied().find(|&m| set.iter().all(|&a| s.le(a, m)))
}

/// Each sigma-class has a maximum element.
pub fn is_f_inverse_classical(s: &InverseSemigroup, image: &GroupImage) -> bool {
    (0..image.germs.class_count()).all(|c| {
        let class: Vec<usize> = image.germs.members(c).collect();
        maximum_of(s, &class).is_some()
    })
}

/// `sigma^-1(g) ∩ eSf` has a maximum for every `g` and idempotents `e, f`,
/// skipping empty intersections.
pub fn is_f_inverse_literal(s: &InverseSemigroup, image: &GroupImage) -> bool {
    for &e in s.idempotents() {
        for &f in s.idempotents() {
            let slice: BTreeSet<usize> = s.elements().map(|a| s.mul3(e, a, f)).collect();
            for g in 0..image.group.order() {
                let part: Vec<usize> = slice.iter().copied().filter(|&a| image.sigma[a] == g).collect();
                if !part.is_empty() && maximum_of(s, &part).is_none() {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralProfile {
    pub idempotents: Vec<usize>,
    pub has_zero: bool,
    pub is_monoid: bool,
    pub center: Vec<usize>,
    pub d_classes_of_idempotents: Vec<Vec<usize>>,
    pub j_classes: Vec<Vec<usize>>,
    pub j_poset: Poset,
    pub ideal_lattice: Poset,
    pub e_unitary: bool,
    pub f_inverse_classical: bool,
    pub f_inverse_literal: bool,
    pub max_group: GroupImage,
}

pub fn structural_profile(s: &InverseSemigroup) -> StructuralProfile {
    let green = green_and_ideals(s);
    let max_group = maximal_group_image(s);
    StructuralProfile {
        idempotents: s.idempotents().to_vec(),
        has_zero: s.zero().is_some(),
        is_monoid: s.identity().is_some(),
        center: center(s),
        d_classes_of_idempotents: green.d_classes,
        j_classes: green.j_classes,
        j_poset: green.j_poset,
        ideal_lattice: green.ideal_lattice,
        e_unitary: is_e_unitary(s),
        f_inverse_classical: is_f_inverse_classical(s, &max_group),
        f_inverse_literal: is_f_inverse_literal(s, &max_group),
        max_group,
    }
}

/// Least subset closed under multiplication and inversion containing `seed`.
pub fn subsemigroup_closure(s: &InverseSemigroup, seed: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = seed.iter().copied().collect();
    let mut frontier: Vec<usize> = set.iter().copied().collect();
    while let Some(a) = frontier.pop() {
        let mut fresh = vec![s.inv(a)];
        for &b in &set {
            fresh.push(s.mul(a, b));
            fresh.push(s.mul(b, a));
        }
        for x in fresh {
            if set.insert(x) {
                frontier.push(x);
            }
        }
    }
    set.into_iter().collect()
}
