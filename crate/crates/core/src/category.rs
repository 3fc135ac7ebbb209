//! Finite categories given by arrow lists and a composition table, functors
//! between them, skeletons and a decision procedure for equivalence.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::error::{ensure, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("object {0} has no identity arrow")]
    NoIdentity(usize),
    #[error("composite of arrows {0} and {1} has the wrong ends")]
    CompositionMismatch(usize, usize),
    #[error("composition is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("arrow {0} refers to a missing object")]
    BadObject(usize),
    #[error("arrow set is not closed under composition at ({0}, {1})")]
    NotClosed(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub cod: usize,
    pub dom: usize,
    /// Display data, e.g. the triple `(f, s, e)` of an idempotent splitting.
    pub payload: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: usize,
    arrows: Vec<Arrow>,
    /// `compose[f * n + g]` is `f∘g` when `dom f = cod g`.
    compose: Vec<usize>,
    identities: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl FiniteCategory {
    /// Builds and validates a category. `comp(f, g)` is only asked for
    /// composable pairs and must return the index of `f∘g`.
    pub fn new(
        objects: usize,
        arrows: Vec<Arrow>,
        comp: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, CategoryError> {
        let n = arrows.len();
        if let Some(i) = arrows.iter().position(|a| a.cod >= objects || a.dom >= objects) {
            return Err(CategoryError::BadObject(i));
        }
        let mut compose = vec![NONE; n * n];
        for f in 0..n {
            for g in 0..n {
                if arrows[f].dom == arrows[g].cod {
                    let h = comp(f, g);
                    if h >= n || arrows[h].cod != arrows[f].cod || arrows[h].dom != arrows[g].dom {
                        return Err(CategoryError::CompositionMismatch(f, g));
                    }
                    compose[f * n + g] = h;
                }
            }
        }
        let mut identities = Vec::with_capacity(objects);
        for o in 0..objects {
            let id = (0..n).find(|&i| {
                arrows[i].cod == o
                    && arrows[i].dom == o
                    && (0..n).all(|f| arrows[f].cod != o || compose[i * n + f] == f)
                    && (0..n).all(|f| arrows[f].dom != o || compose[f * n + i] == f)
            });
            identities.push(id.ok_or(CategoryError::NoIdentity(o))?);
        }
        let c = FiniteCategory { objects, arrows, compose, identities };
        for f in 0..n {
            for g in (0..n).filter(|&g| c.arrows[f].dom == c.arrows[g].cod) {
                for h in (0..n).filter(|&h| c.arrows[g].dom == c.arrows[h].cod) {
                    if c.comp(c.comp(f, g), h) != c.comp(f, c.comp(g, h)) {
                        return Err(CategoryError::NotAssociative(f, g, h));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, f: usize) -> &Arrow {
        &self.arrows[f]
    }

    pub fn dom(&self, f: usize) -> usize {
        self.arrows[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.arrows[f].cod
    }

    /// `f∘g`, if composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let h = self.compose[f * self.arrows.len() + g];
        (h != NONE).then_some(h)
    }

    fn comp(&self, f: usize, g: usize) -> usize {
        self.compose[f * self.arrows.len() + g]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// Arrows `a → b`.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&f| self.dom(f) == a && self.cod(f) == b).collect()
    }

    pub fn inverse_of(&self, f: usize) -> Option<usize> {
        self.hom(self.cod(f), self.dom(f))
            .into_iter()
            .find(|&g| self.comp(g, f) == self.identity(self.dom(f)) && self.comp(f, g) == self.identity(self.cod(f)))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse_of(f).is_some()
    }

    /// Some `g` with `g∘f = id`.
    pub fn is_split_mono(&self, f: usize) -> bool {
        let id = self.identity(self.dom(f));
        self.hom(self.cod(f), self.dom(f)).into_iter().any(|g| self.comp(g, f) == id)
    }

    pub fn isomorphic_objects(&self, a: usize, b: usize) -> Option<usize> {
        self.hom(a, b).into_iter().find(|&f| self.is_iso(f))
    }

    /// Isomorphism classes of objects, each sorted, ordered by least member.
    pub fn isomorphism_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for o in 0..self.objects {
            match classes.iter_mut().find(|c| self.isomorphic_objects(c[0], o).is_some()) {
                Some(c) => c.push(o),
                None => classes.push(vec![o]),
            }
        }
        classes
    }

    /// The full subcategory on `objs` (in the given order) and the embedding
    /// of its arrows.
    pub fn full_subcategory(&self, objs: &[usize]) -> (FiniteCategory, Vec<usize>) {
        let pos: BTreeMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let embed: Vec<usize> = (0..self.arrows.len())
            .filter(|&f| pos.contains_key(&self.dom(f)) && pos.contains_key(&self.cod(f)))
            .collect();
        let back: BTreeMap<usize, usize> = embed.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let arrows = embed
            .iter()
            .map(|&f| Arrow { cod: pos[&self.cod(f)], dom: pos[&self.dom(f)], payload: self.arrows[f].payload.clone() })
            .collect();
        let sub = FiniteCategory::new(objs.len(), arrows, |f, g| back[&self.comp(embed[f], embed[g])])
            .expect("full subcategory of a category");
        (sub, embed)
    }

    /// The wide subcategory on the arrows satisfying `keep`.
    pub fn wide_subcategory(
        &self,
        keep: impl Fn(usize) -> bool,
    ) -> Result<(FiniteCategory, Vec<usize>), CategoryError> {
        let embed: Vec<usize> = (0..self.arrows.len()).filter(|&f| keep(f)).collect();
        let back: BTreeMap<usize, usize> = embed.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        for &f in &embed {
            for &g in &embed {
                if let Some(h) = self.compose(f, g) {
                    if !back.contains_key(&h) {
                        return Err(CategoryError::NotClosed(f, g));
                    }
                }
            }
        }
        let arrows = embed.iter().map(|&f| self.arrows[f].clone()).collect();
        let sub = FiniteCategory::new(self.objects, arrows, |f, g| back[&self.comp(embed[f], embed[g])])?;
        Ok((sub, embed))
    }
}

/// Object and arrow maps of a functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl Functor {
    /// `self` after `first`.
    pub fn after(&self, first: &Functor) -> Functor {
        Functor {
            objects: first.objects.iter().map(|&o| self.objects[o]).collect(),
            arrows: first.arrows.iter().map(|&f| self.arrows[f]).collect(),
        }
    }
}

pub fn verify_functor(c: &FiniteCategory, d: &FiniteCategory, f: &Functor) -> Result<(), Violation> {
    ensure(f.objects.len() == c.object_count() && f.arrows.len() == c.arrow_count(), "functor tables are total", &[])?;
    for a in 0..c.arrow_count() {
        let fa = f.arrows[a];
        ensure(d.dom(fa) == f.objects[c.dom(a)] && d.cod(fa) == f.objects[c.cod(a)], "functor respects ends", &[a])?;
    }
    for o in 0..c.object_count() {
        ensure(f.arrows[c.identity(o)] == d.identity(f.objects[o]), "functor preserves identities", &[o])?;
    }
    for a in 0..c.arrow_count() {
        for b in 0..c.arrow_count() {
            if let Some(ab) = c.compose(a, b) {
                ensure(
                    d.compose(f.arrows[a], f.arrows[b]) == Some(f.arrows[ab]),
                    "functor preserves composition",
                    &[a, b],
                )?;
            }
        }
    }
    Ok(())
}

pub fn is_faithful(c: &FiniteCategory, f: &Functor) -> bool {
    (0..c.object_count()).all(|a| {
        (0..c.object_count()).all(|b| {
            let mut images: Vec<usize> = c.hom(a, b).iter().map(|&x| f.arrows[x]).collect();
            let n = images.len();
            images.sort_unstable();
            images.dedup();
            images.len() == n
        })
    })
}

pub fn is_full(c: &FiniteCategory, d: &FiniteCategory, f: &Functor) -> bool {
    (0..c.object_count()).all(|a| {
        (0..c.object_count()).all(|b| {
            let images: Vec<usize> = c.hom(a, b).iter().map(|&x| f.arrows[x]).collect();
            d.hom(f.objects[a], f.objects[b]).iter().all(|y| images.contains(y))
        })
    })
}

pub fn is_essentially_surjective(d: &FiniteCategory, f: &Functor) -> bool {
    (0..d.object_count()).all(|o| f.objects.iter().any(|&fo| d.isomorphic_objects(fo, o).is_some()))
}

/// Checks that `f` is a functor and an equivalence.
pub fn verify_equivalence(c: &FiniteCategory, d: &FiniteCategory, f: &Functor) -> Result<(), Violation> {
    verify_functor(c, d, f)?;
    ensure(is_full(c, d, f), "functor is full", &[])?;
    ensure(is_faithful(c, f), "functor is faithful", &[])?;
    ensure(is_essentially_surjective(d, f), "functor is essentially surjective", &[])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub category: FiniteCategory,
    /// Least object of each isomorphism class.
    pub objects: Vec<usize>,
    /// Embedding of skeleton arrows.
    pub arrows: Vec<usize>,
}

pub fn skeleton(c: &FiniteCategory) -> Skeleton {
    let objects: Vec<usize> = c.isomorphism_classes().iter().map(|cl| cl[0]).collect();
    let (category, arrows) = c.full_subcategory(&objects);
    Skeleton { category, objects, arrows }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ArrowSig {
    identity: bool,
    iso: bool,
    idempotent: bool,
    right_fixers: usize,
    left_fixers: usize,
}

fn arrow_sig(c: &FiniteCategory, f: usize) -> ArrowSig {
    let n = c.arrow_count();
    ArrowSig {
        identity: c.is_identity(f),
        iso: c.is_iso(f),
        idempotent: c.compose(f, f) == Some(f),
        right_fixers: (0..n).filter(|&g| c.compose(f, g) == Some(f)).count(),
        left_fixers: (0..n).filter(|&g| c.compose(g, f) == Some(f)).count(),
    }
}

fn hom_profile(c: &FiniteCategory, o: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let mut out: Vec<usize> = (0..c.object_count()).map(|b| c.hom(o, b).len()).collect();
    let mut inn: Vec<usize> = (0..c.object_count()).map(|a| c.hom(a, o).len()).collect();
    out.sort_unstable();
    inn.sort_unstable();
    (c.hom(o, o).len(), out, inn)
}

struct IsoSearch<'a> {
    c: &'a FiniteCategory,
    d: &'a FiniteCategory,
    sig_c: Vec<ArrowSig>,
    sig_d: Vec<ArrowSig>,
    obj: Vec<usize>,
    map: Vec<usize>,
    rev: Vec<usize>,
    trail: Vec<usize>,
}

impl IsoSearch<'_> {
    fn objects(&mut self, o: usize, used: &mut Vec<bool>) -> bool {
        if o == self.c.object_count() {
            return self.arrows_from_scratch();
        }
        let prof = hom_profile(self.c, o);
        for p in 0..self.d.object_count() {
            if used[p] || hom_profile(self.d, p) != prof {
                continue;
            }
            let consistent = (0..o).all(|q| {
                self.c.hom(o, q).len() == self.d.hom(p, self.obj[q]).len()
                    && self.c.hom(q, o).len() == self.d.hom(self.obj[q], p).len()
            });
            if !consistent {
                continue;
            }
            self.obj[o] = p;
            used[p] = true;
            if self.objects(o + 1, used) {
                return true;
            }
            used[p] = false;
        }
        false
    }

    fn arrows_from_scratch(&mut self) -> bool {
        self.map.iter_mut().for_each(|v| *v = NONE);
        self.rev.iter_mut().for_each(|v| *v = NONE);
        self.trail.clear();
        for o in 0..self.c.object_count() {
            let (a, b) = (self.c.identity(o), self.d.identity(self.obj[o]));
            if !self.assign(a, b) {
                return false;
            }
        }
        self.arrows()
    }

    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            if self.map[a] != NONE {
                if self.map[a] != b {
                    return false;
                }
                continue;
            }
            if self.rev[b] != NONE
                || self.sig_c[a] != self.sig_d[b]
                || self.d.dom(b) != self.obj[self.c.dom(a)]
                || self.d.cod(b) != self.obj[self.c.cod(a)]
            {
                return false;
            }
            self.map[a] = b;
            self.rev[b] = a;
            self.trail.push(a);
            for g in 0..self.c.arrow_count() {
                let mg = self.map[g];
                if mg == NONE {
                    continue;
                }
                if let Some(ag) = self.c.compose(a, g) {
                    queue.push((ag, self.d.compose(b, mg).expect("ends match")));
                }
                if let Some(ga) = self.c.compose(g, a) {
                    queue.push((ga, self.d.compose(mg, b).expect("ends match")));
                }
            }
        }
        true
    }

    fn arrows(&mut self) -> bool {
        let Some(a) = self.map.iter().position(|&v| v == NONE) else {
            return true;
        };
        let (p, q) = (self.obj[self.c.dom(a)], self.obj[self.c.cod(a)]);
        for b in self.d.hom(p, q) {
            if self.rev[b] != NONE {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(a, b) && self.arrows() {
                return true;
            }
            while self.trail.len() > mark {
                let x = self.trail.pop().unwrap();
                self.rev[self.map[x]] = NONE;
                self.map[x] = NONE;
            }
        }
        false
    }
}

/// An isomorphism of categories `c → d`, if one exists.
pub fn category_isomorphism(c: &FiniteCategory, d: &FiniteCategory) -> Option<Functor> {
    if c.object_count() != d.object_count() || c.arrow_count() != d.arrow_count() {
        return None;
    }
    let sig_c: Vec<ArrowSig> = (0..c.arrow_count()).map(|f| arrow_sig(c, f)).collect();
    let sig_d: Vec<ArrowSig> = (0..d.arrow_count()).map(|f| arrow_sig(d, f)).collect();
    let (mut x, mut y) = (sig_c.clone(), sig_d.clone());
    x.sort();
    y.sort();
    if x != y {
        return None;
    }
    let mut search = IsoSearch {
        c,
        d,
        sig_c,
        sig_d,
        obj: vec![NONE; c.object_count()],
        map: vec![NONE; c.arrow_count()],
        rev: vec![NONE; d.arrow_count()],
        trail: Vec::new(),
    };
    let mut used = vec![false; d.object_count()];
    if search.objects(0, &mut used) {
        let f = Functor { objects: search.obj, arrows: search.map };
        debug_assert!(verify_functor(c, d, &f).is_ok());
        Some(f)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryEquivalence {
    pub forward: Functor,
    pub backward: Functor,
    /// Isomorphism between the skeletons.
    pub skeleton_iso: Functor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent(Box<CategoryEquivalence>),
    NotEquivalent(String),
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent(_))
    }
}

/// A functor `c → d` obtained by retracting onto the skeleton of `c`,
/// applying a skeleton isomorphism and including into `d`.
fn functor_through_skeletons(c: &FiniteCategory, sc: &Skeleton, sd: &Skeleton, iso: &Functor) -> Functor {
    let rep_pos: Vec<usize> = (0..c.object_count())
        .map(|o| {
            sc.objects
                .iter()
                .position(|&r| c.isomorphic_objects(o, r).is_some())
                .expect("every object has a representative")
        })
        .collect();
    // alpha[o]: o → rep(o), an isomorphism
    let alpha: Vec<usize> = (0..c.object_count())
        .map(|o| c.isomorphic_objects(o, sc.objects[rep_pos[o]]).expect("isomorphic to its representative"))
        .collect();
    let sk_index: BTreeMap<usize, usize> = sc.arrows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let objects = (0..c.object_count()).map(|o| sd.objects[iso.objects[rep_pos[o]]]).collect();
    let arrows = (0..c.arrow_count())
        .map(|f| {
            let (a, b) = (c.dom(f), c.cod(f));
            let inv_a = c.inverse_of(alpha[a]).expect("alpha is invertible");
            let moved = c.compose(alpha[b], c.compose(f, inv_a).expect("composable")).expect("composable");
            sd.arrows[iso.arrows[sk_index[&moved]]]
        })
        .collect();
    Functor { objects, arrows }
}

/// Decides equivalence of finite categories by comparing skeletons.
pub fn categories_equivalent(c: &FiniteCategory, d: &FiniteCategory) -> EquivalenceVerdict {
    let sc = skeleton(c);
    let sd = skeleton(d);
    if sc.objects.len() != sd.objects.len() {
        return EquivalenceVerdict::NotEquivalent(format!(
            "isomorphism classes of objects differ: {} vs {}",
            sc.objects.len(),
            sd.objects.len()
        ));
    }
    if sc.category.arrow_count() != sd.category.arrow_count() {
        return EquivalenceVerdict::NotEquivalent(format!(
            "skeleton arrow counts differ: {} vs {}",
            sc.category.arrow_count(),
            sd.category.arrow_count()
        ));
    }
    let Some(iso) = category_isomorphism(&sc.category, &sd.category) else {
        return EquivalenceVerdict::NotEquivalent("skeletons are not isomorphic".into());
    };
    let inv = Functor {
        objects: (0..iso.objects.len()).map(|p| iso.objects.iter().position(|&v| v == p).unwrap()).collect(),
        arrows: (0..iso.arrows.len()).map(|p| iso.arrows.iter().position(|&v| v == p).unwrap()).collect(),
    };
    let forward = functor_through_skeletons(c, &sc, &sd, &iso);
    let backward = functor_through_skeletons(d, &sd, &sc, &inv);
    verify_equivalence(c, d, &forward).expect("skeleton transfer yields an equivalence");
    verify_equivalence(d, c, &backward).expect("skeleton transfer yields an equivalence");
    EquivalenceVerdict::Equivalent(Box::new(CategoryEquivalence { forward, backward, skeleton_iso: iso }))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One object with arrows a monoid given by its table.
    fn monoid_category(table: &[Vec<usize>]) -> FiniteCategory {
        let arrows = (0..table.len()).map(|i| Arrow { cod: 0, dom: 0, payload: vec![i] }).collect();
        FiniteCategory::new(1, arrows, |f, g| table[f][g]).unwrap()
    }

    /// Two isomorphic objects with a unique arrow between any pair.
    fn pair_groupoid() -> FiniteCategory {
        let arrows: Vec<Arrow> =
            (0..2).flat_map(|c| (0..2).map(move |d| Arrow { cod: c, dom: d, payload: vec![] })).collect();
        FiniteCategory::new(2, arrows.clone(), |f, g| {
            arrows.iter().position(|a| a.cod == arrows[f].cod && a.dom == arrows[g].dom).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn rejects_missing_identity() {
        let arrows = vec![Arrow { cod: 0, dom: 0, payload: vec![] }, Arrow { cod: 0, dom: 0, payload: vec![] }];
        // constant composition: no neutral arrow
        assert_eq!(FiniteCategory::new(1, arrows, |_, _| 0).unwrap_err(), CategoryError::NoIdentity(0));
    }

    #[test]
    fn pair_groupoid_is_equivalent_to_point() {
        let p = pair_groupoid();
        assert_eq!(p.isomorphism_classes(), vec![vec![0, 1]]);
        let point = monoid_category(&[vec![0]]);
        assert!(categories_equivalent(&p, &point).is_equivalent());
        assert!(category_isomorphism(&p, &point).is_none());
    }

    #[test]
    fn z2_is_not_two_element_semilattice() {
        let z2 = monoid_category(&[vec![0, 1], vec![1, 0]]);
        let sl = monoid_category(&[vec![0, 0], vec![0, 1]]);
        assert!(!categories_equivalent(&z2, &sl).is_equivalent());
        assert!(categories_equivalent(&z2, &z2).is_equivalent());
    }

    #[test]
    fn subcategories() {
        let p = pair_groupoid();
        let (wide, embed) = p.wide_subcategory(|f| p.is_identity(f)).unwrap();
        assert_eq!(wide.arrow_count(), 2);
        assert_eq!(embed.len(), 2);
        assert!(p.wide_subcategory(|f| !p.is_identity(f)).is_err());
        let (full, _) = p.full_subcategory(&[1]);
        assert_eq!(full.arrow_count(), 1);
        assert!(p.is_split_mono(1));
    }
}
