//! The idempotent splitting `S_E`, the Loganathan category `L(S)`, the
//! equivalence functor built from a context and transfer of congruences.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bimodule::{is_verified, MoritaContext};
use crate::category::{is_full, verify_equivalence, Arrow, FiniteCategory, Functor};
use crate::dsu::DisjointSet;
use crate::error::{ensure, Violation};
use crate::poset::Poset;
use crate::semigroup::InverseSemigroup;

/// Largest semigroup accepted by [`congruence_transfer`].
pub const CONGRUENCE_SIZE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KaroubiError {
    #[error("idempotents are not directed: {0} and {1} have no common upper bound")]
    NotDirected(usize, usize),
    #[error("semigroup of size {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not an inverse category: arrow {0} has no unique inverse")]
    NotInverseCategory(usize),
    #[error("context does not satisfy the axioms")]
    NotVerified,
    #[error(transparent)]
    Violation(#[from] Violation),
}

/// `S_E` together with the correspondence between objects and idempotents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub category: FiniteCategory,
    /// Object `o` is the idempotent `idempotents[o]`.
    pub idempotents: Vec<usize>,
    lookup: BTreeMap<(usize, usize, usize), usize>,
}

impl Splitting {
    pub fn object_of(&self, e: usize) -> Option<usize> {
        self.idempotents.iter().position(|&x| x == e)
    }

    /// Index of the arrow `(f, s, e)`.
    pub fn arrow_index(&self, f: usize, s: usize, e: usize) -> Option<usize> {
        self.lookup.get(&(f, s, e)).copied()
    }

    pub fn triple(&self, a: usize) -> (usize, usize, usize) {
        let p = &self.category.arrow(a).payload;
        (p[0], p[1], p[2])
    }
}

/// Builds `S_E`: objects `E(S)`, arrows `(f, s, e)` with `s ∈ fSe`, sorted
/// lexicographically.
pub fn idempotent_splitting(s: &InverseSemigroup) -> Splitting {
    let es = s.idempotents().to_vec();
    let mut arrows = Vec::new();
    let mut lookup = BTreeMap::new();
    for (fo, &f) in es.iter().enumerate() {
        for x in s.elements() {
            for (eo, &e) in es.iter().enumerate() {
                if s.mul3(f, x, e) == x {
                    lookup.insert((f, x, e), arrows.len());
                    arrows.push(Arrow { cod: fo, dom: eo, payload: vec![f, x, e] });
                }
            }
        }
    }
    let category = FiniteCategory::new(es.len(), arrows.clone(), |a, b| {
        let (f, x, _) = (arrows[a].payload[0], arrows[a].payload[1], arrows[a].payload[2]);
        let (y, d) = (arrows[b].payload[1], arrows[b].payload[2]);
        lookup[&(f, s.mul(x, y), d)]
    })
    .expect("idempotent splitting is a category");
    let sp = Splitting { category, idempotents: es, lookup };
    check_isomorphisms(s, &sp).expect("isomorphisms of S_E are the arrows (ss*, s, s*s)");
    sp
}

/// The isomorphisms of `S_E` are exactly the arrows `(ss*, s, s*s)`.
pub fn check_isomorphisms(s: &InverseSemigroup, sp: &Splitting) -> Result<(), Violation> {
    for a in 0..sp.category.arrow_count() {
        let (f, x, e) = sp.triple(a);
        let expected = f == s.ran(x) && e == s.dom(x);
        ensure(sp.category.is_iso(a) == expected, "isomorphisms are the arrows (ss*, s, s*s)", &[f, x, e])?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loganathan {
    pub category: FiniteCategory,
    /// Arrow `i` of `L(S)` is arrow `embed[i]` of `S_E`.
    pub embed: Vec<usize>,
}

/// The wide subcategory of `S_E` on arrows `(f, s, e)` with `s*s = e`,
/// checked to be exactly the split monomorphisms.
pub fn loganathan_category(s: &InverseSemigroup, sp: &Splitting) -> Result<Loganathan, Violation> {
    let keep = |a: usize| {
        let (_, x, e) = sp.triple(a);
        s.dom(x) == e
    };
    for a in 0..sp.category.arrow_count() {
        ensure(keep(a) == sp.category.is_split_mono(a), "L(S) consists of the split monomorphisms", &[a])?;
    }
    let (category, embed) =
        sp.category.wide_subcategory(keep).map_err(|_| Violation::new("L(S) is closed under composition", []))?;
    Ok(Loganathan { category, embed })
}

/// Objects up to "arrows both ways", ordered by "there is an arrow from
/// `a` to `b`". Returns the poset and the class of each object.
pub fn preorder_poset(c: &FiniteCategory) -> (Poset, Vec<usize>) {
    let n = c.object_count();
    let mut reach = vec![false; n * n];
    for f in c.arrows() {
        reach[f.dom * n + f.cod] = true;
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for o in 0..n {
        if class_of[o] == usize::MAX {
            for p in o..n {
                if reach[o * n + p] && reach[p * n + o] {
                    class_of[p] = reps.len();
                }
            }
            reps.push(o);
        }
    }
    let poset = Poset::new(reps.len(), |a, b| reach[reps[a] * n + reps[b]])
        .expect("reachability between classes is a partial order");
    (poset, class_of)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceFunctor {
    pub source: Splitting,
    pub target: Splitting,
    pub functor: Functor,
    /// `choice[o]` is the point `x_e` chosen for the object `o` of `S_E`.
    pub choice: Vec<usize>,
}

/// Points `x` with `⟨x, x⟩ = e`, for each idempotent `e` of `S`.
pub fn point_choices(ctx: &MoritaContext) -> Vec<Vec<usize>> {
    ctx.s().idempotents().iter().map(|&e| ctx.points().filter(|&x| ctx.ip_s(x, x) == e).collect()).collect()
}

/// `F(e) = [x_e, x_e]` and `F(f, s, e) = (F(f), [x_f, s x_e], F(e))` with
/// `x_e` the least point over `e`.
pub fn equivalence_functor(ctx: &MoritaContext) -> Result<EquivalenceFunctor, KaroubiError> {
    let choices = point_choices(ctx);
    if let Some(o) = choices.iter().position(Vec::is_empty) {
        return Err(Violation::new("every idempotent is some ⟨x, x⟩", [ctx.s().idempotents()[o]]).into());
    }
    let choice: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    equivalence_functor_with_choice(ctx, &choice)
}

pub fn equivalence_functor_with_choice(
    ctx: &MoritaContext,
    choice: &[usize],
) -> Result<EquivalenceFunctor, KaroubiError> {
    if !is_verified(ctx) {
        return Err(KaroubiError::NotVerified);
    }
    let (s, t) = (ctx.s(), ctx.t());
    let source = idempotent_splitting(s);
    let target = idempotent_splitting(t);
    for (o, &x) in choice.iter().enumerate() {
        ensure(ctx.ip_s(x, x) == source.idempotents[o], "chosen point lies over its idempotent", &[o, x])?;
    }
    let objects: Vec<usize> =
        choice.iter().map(|&x| target.object_of(ctx.ip_t(x, x)).expect("[x, x] is idempotent")).collect();
    let mut arrows = Vec::with_capacity(source.category.arrow_count());
    for a in 0..source.category.arrow_count() {
        let (f, x, e) = source.triple(a);
        let (fo, eo) = (source.object_of(f).unwrap(), source.object_of(e).unwrap());
        let img = ctx.ip_t(choice[fo], ctx.act_l(x, choice[eo]));
        let (tf, te) = (target.idempotents[objects[fo]], target.idempotents[objects[eo]]);
        let idx = target
            .arrow_index(tf, img, te)
            .ok_or_else(|| Violation::new("[x_f, s x_e] lies in F(f) T F(e)", [f, x, e]))?;
        arrows.push(idx);
    }
    let functor = Functor { objects, arrows };
    verify_equivalence(&source.category, &target.category, &functor)?;
    // fullness through the explicit preimage s = ⟨x_f t, x_e⟩
    for fo in 0..source.idempotents.len() {
        for eo in 0..source.idempotents.len() {
            let (xf, xe) = (choice[fo], choice[eo]);
            for b in target.category.hom(functor.objects[eo], functor.objects[fo]) {
                let (_, tt, _) = target.triple(b);
                let pre = ctx.ip_s(ctx.act_r(xf, tt), xe);
                ensure(ctx.ip_t(xf, ctx.act_l(pre, xe)) == tt, "t = [x_f, s x_e] for s = ⟨x_f t, x_e⟩", &[fo, eo, tt])?;
            }
        }
    }
    debug_assert!(is_full(&source.category, &target.category, &functor));
    Ok(EquivalenceFunctor { source, target, functor, choice: choice.to_vec() })
}

/// A partition as class labels numbered by least member.
pub type Partition = Vec<usize>;

fn normalize(labels: &[usize]) -> Partition {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

fn from_dsu(mut d: DisjointSet) -> Partition {
    d.canonical_labels().0
}

/// `p ⊆ q` as equivalence relations.
pub fn refines(p: &Partition, q: &Partition) -> bool {
    let mut image = BTreeMap::new();
    p.iter().zip(q).all(|(a, b)| *image.entry(a).or_insert(b) == b)
}

fn join(p: &Partition, q: &Partition) -> Partition {
    let mut d = DisjointSet::new(p.len());
    for labels in [p, q] {
        let mut first = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let r = *first.entry(l).or_insert(i);
            d.union(r, i);
        }
    }
    from_dsu(d)
}

/// All joins of the given generators together with the identity relation.
fn join_closure(n: usize, generators: BTreeSet<Partition>) -> Vec<Partition> {
    let mut all: BTreeSet<Partition> = generators.clone();
    all.insert((0..n).collect());
    let mut frontier: Vec<Partition> = all.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in &generators {
            let j = join(&p, g);
            if all.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    all.into_iter().collect()
}

/// The congruence lattice of `s`, closing principal congruences under join.
pub fn semigroup_congruences(s: &InverseSemigroup) -> Vec<Partition> {
    let n = s.size();
    let ones: Vec<Option<usize>> = std::iter::once(None).chain(s.elements().map(Some)).collect();
    let act = |u: Option<usize>, x: usize, v: Option<usize>| {
        let y = u.map_or(x, |u| s.mul(u, x));
        v.map_or(y, |v| s.mul(y, v))
    };
    let mut generators = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut d = DisjointSet::new(n);
            for &u in &ones {
                for &v in &ones {
                    d.union(act(u, a, v), act(u, b, v));
                }
            }
            generators.insert(from_dsu(d));
        }
    }
    join_closure(n, generators)
}

/// The congruence lattice of a finite category: equivalences on coterminal
/// arrows compatible with composition.
pub fn category_congruences(c: &FiniteCategory) -> Vec<Partition> {
    let n = c.arrow_count();
    let mut generators = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if c.dom(a) != c.dom(b) || c.cod(a) != c.cod(b) {
                continue;
            }
            let mut d = DisjointSet::new(n);
            for u in (0..n).filter(|&u| c.dom(u) == c.cod(a)) {
                for v in (0..n).filter(|&v| c.cod(v) == c.dom(a)) {
                    let ua = c.compose(u, a).unwrap();
                    let ub = c.compose(u, b).unwrap();
                    d.union(c.compose(ua, v).unwrap(), c.compose(ub, v).unwrap());
                }
            }
            generators.insert(from_dsu(d));
        }
    }
    join_closure(n, generators)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceTransfer {
    pub cong_s: Vec<Partition>,
    pub cong_se: Vec<Partition>,
    /// `phi[i]` indexes the image of `cong_s[i]` in `cong_se`.
    pub phi: Vec<usize>,
}

impl CongruenceTransfer {
    pub fn lattice_s(&self) -> Poset {
        Poset::new(self.cong_s.len(), |a, b| refines(&self.cong_s[a], &self.cong_s[b])).expect("inclusion order")
    }

    pub fn lattice_se(&self) -> Poset {
        Poset::new(self.cong_se.len(), |a, b| refines(&self.cong_se[a], &self.cong_se[b])).expect("inclusion order")
    }
}

fn check_directed(s: &InverseSemigroup) -> Result<(), KaroubiError> {
    let es = s.idempotents();
    for &e in es {
        for &f in es {
            if !es.iter().any(|&g| s.le(e, g) && s.le(f, g)) {
                return Err(KaroubiError::NotDirected(e, f));
            }
        }
    }
    Ok(())
}

/// Computes `Cong(S)` and `Cong(S_E)` independently and checks that
/// `R ↦ {((f,s,e), (f,t,e)) : s R t}` is an order isomorphism.
pub fn congruence_transfer(s: &InverseSemigroup) -> Result<CongruenceTransfer, KaroubiError> {
    if s.size() > CONGRUENCE_SIZE_LIMIT {
        return Err(KaroubiError::TooLarge { size: s.size(), limit: CONGRUENCE_SIZE_LIMIT });
    }
    check_directed(s)?;
    let sp = idempotent_splitting(s);
    let cong_s = semigroup_congruences(s);
    let cong_se = category_congruences(&sp.category);
    let index: BTreeMap<&Partition, usize> = cong_se.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut phi = Vec::with_capacity(cong_s.len());
    for (i, r) in cong_s.iter().enumerate() {
        let labels: Vec<usize> = (0..sp.category.arrow_count())
            .map(|a| {
                let (f, x, e) = sp.triple(a);
                let (fo, eo) = (sp.object_of(f).unwrap(), sp.object_of(e).unwrap());
                (fo * sp.idempotents.len() + eo) * s.size() + r[x]
            })
            .collect();
        let image = normalize(&labels);
        let j = *index.get(&image).ok_or_else(|| Violation::new("image of a congruence is a congruence", [i]))?;
        phi.push(j);
    }
    ensure(
        phi.iter().collect::<BTreeSet<_>>().len() == cong_se.len() && phi.len() == cong_se.len(),
        "congruence map is a bijection",
        &[cong_s.len(), cong_se.len()],
    )?;
    for a in 0..cong_s.len() {
        for b in 0..cong_s.len() {
            ensure(
                refines(&cong_s[a], &cong_s[b]) == refines(&cong_se[phi[a]], &cong_se[phi[b]]),
                "congruence map preserves and reflects inclusion",
                &[a, b],
            )?;
        }
    }
    Ok(CongruenceTransfer { cong_s, cong_se, phi })
}

/// Inverse of each arrow in an inverse category.
pub fn category_involution(c: &FiniteCategory) -> Result<Vec<usize>, KaroubiError> {
    (0..c.arrow_count())
        .map(|a| {
            let cands: Vec<usize> = c
                .hom(c.cod(a), c.dom(a))
                .into_iter()
                .filter(|&b| {
                    let aba = c.compose(c.compose(a, b).unwrap(), a).unwrap();
                    let bab = c.compose(c.compose(b, a).unwrap(), b).unwrap();
                    aba == a && bab == b
                })
                .collect();
            match cands.as_slice() {
                [b] => Ok(*b),
                _ => Err(KaroubiError::NotInverseCategory(a)),
            }
        })
        .collect()
}

/// Whether each class of the maximal groupoid image (coterminal arrows with
/// a common lower bound) has a maximum in the natural order.
pub fn f_inverse_category_check(c: &FiniteCategory) -> Result<bool, KaroubiError> {
    let inv = category_involution(c)?;
    let n = c.arrow_count();
    // a ≤ b iff coterminal and a = b (a* a)
    let le = |a: usize, b: usize| {
        c.dom(a) == c.dom(b) && c.cod(a) == c.cod(b) && c.compose(b, c.compose(inv[a], a).unwrap()) == Some(a)
    };
    let mut d = DisjointSet::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if (0..n).any(|l| le(l, a) && le(l, b)) {
                d.union(a, b);
            }
        }
    }
    let (labels, count) = d.canonical_labels();
    Ok((0..count).all(|k| {
        let class: Vec<usize> = (0..n).filter(|&a| labels[a] == k).collect();
        class.iter().any(|&m| class.iter().all(|&a| le(a, m)))
    }))
}
