//! Universal and tight groupoids, transformation groupoids, amplification
//! and the groupoid isomorphism induced by a context.
//!
//! Every space here is finite and discrete, so topology plays no role: what
//! is checked is bijectivity, surjectivity and the germ relations.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bimodule::{is_verified, MoritaContext};
use crate::category::{category_isomorphism, verify_functor, Arrow, CategoryError, FiniteCategory, Functor};
use crate::constructions::{build_semidirect_product, check_action};
use crate::dsu::DisjointSet;
use crate::error::{ensure, Violation};
use crate::germ::GermSpace;
use crate::semigroup::{Group, InverseSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("character {character} is outside the domain of element {element}")]
    OutOfDomain { element: usize, character: usize },
    #[error("semigroup has no zero")]
    NoZero,
    #[error("not an action by automorphisms: {0}")]
    NotAnAction(String),
    #[error("arrow {0} has no inverse")]
    NotAGroupoid(usize),
    #[error("context does not satisfy the axioms")]
    NotVerified,
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Violation(#[from] Violation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    /// Least idempotent sent to 1; the support is the filter above it.
    pub generator: usize,
    /// Idempotents sent to 1, ascending.
    pub support: Vec<usize>,
}

/// The nonzero homomorphisms `E(S) → {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSpace {
    idempotents: Vec<usize>,
    chars: Vec<Character>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl CharacterSpace {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn get(&self, c: usize) -> &Character {
        &self.chars[c]
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn value(&self, c: usize, e: usize) -> bool {
        self.chars[c].support.binary_search(&e).is_ok()
    }

    /// The character taking value 1 exactly where `holds` does.
    pub fn find(&self, holds: impl Fn(usize) -> bool) -> Option<usize> {
        let support: Vec<usize> = self.idempotents.iter().copied().filter(|&e| holds(e)).collect();
        self.index.get(&support).copied()
    }

    pub fn of_generator(&self, e: usize) -> Option<usize> {
        self.chars.iter().position(|c| c.generator == e)
    }

    /// `D(e)`: characters with value 1 at `e`.
    pub fn domain(&self, e: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.value(c, e)).collect()
    }
}

/// Characters of `E(S)`, one principal filter per idempotent, in element order.
pub fn characters(s: &InverseSemigroup) -> CharacterSpace {
    let es = s.idempotents().to_vec();
    let chars: Vec<Character> = es
        .iter()
        .map(|&e| Character { generator: e, support: es.iter().copied().filter(|&f| s.le(e, f)).collect() })
        .collect();
    let index = chars.iter().enumerate().map(|(i, c)| (c.support.clone(), i)).collect();
    CharacterSpace { idempotents: es, chars, index }
}

/// `(sφ)(e) = φ(s*es)` for `φ ∈ D(s*s)`.
pub fn character_action(
    s: &InverseSemigroup,
    chars: &CharacterSpace,
    x: usize,
    c: usize,
) -> Result<usize, GroupoidError> {
    if !chars.value(c, s.dom(x)) {
        return Err(GroupoidError::OutOfDomain { element: x, character: c });
    }
    let xi = s.inv(x);
    Ok(chars
        .find(|e| chars.value(c, s.mul3(xi, e, x)))
        .ok_or_else(|| Violation::new("translated character is a character", [x, c]))?)
}

/// A finite category in which every arrow is invertible. Units are objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    category: FiniteCategory,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn from_category(category: FiniteCategory) -> Result<Self, GroupoidError> {
        let inverse = (0..category.arrow_count())
            .map(|f| category.inverse_of(f).ok_or(GroupoidError::NotAGroupoid(f)))
            .collect::<Result<_, _>>()?;
        Ok(FiniteGroupoid { category, inverse })
    }

    pub fn new(units: usize, arrows: Vec<Arrow>, comp: impl Fn(usize, usize) -> usize) -> Result<Self, GroupoidError> {
        Self::from_category(FiniteCategory::new(units, arrows, comp)?)
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn unit_count(&self) -> usize {
        self.category.object_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.category.arrow_count()
    }

    pub fn dom(&self, a: usize) -> usize {
        self.category.dom(a)
    }

    pub fn cod(&self, a: usize) -> usize {
        self.category.cod(a)
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.category.compose(a, b)
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn unit(&self, o: usize) -> usize {
        self.category.identity(o)
    }

    pub fn isotropy(&self, o: usize) -> Vec<usize> {
        self.category.hom(o, o)
    }

    pub fn orbit(&self, o: usize) -> Vec<usize> {
        (0..self.unit_count()).filter(|&p| !self.category.hom(o, p).is_empty()).collect()
    }

    /// The full subgroupoid on `units`, with the arrow embedding.
    pub fn reduction(&self, units: &[usize]) -> (FiniteGroupoid, Vec<usize>) {
        let (category, embed) = self.category.full_subcategory(units);
        (FiniteGroupoid::from_category(category).expect("reduction of a groupoid"), embed)
    }
}

/// Germs of the action of `S` on its characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalGroupoid {
    pub groupoid: FiniteGroupoid,
    pub characters: CharacterSpace,
    /// Pairs `(s, φ)` with `φ ∈ D(s*s)`; arrow `a` is the germ class `a`.
    pub pairs: Vec<(usize, usize)>,
    pub germs: GermSpace,
    pair_index: BTreeMap<(usize, usize), usize>,
}

impl UniversalGroupoid {
    /// The arrow `[s, φ]`, if `φ ∈ D(s*s)`.
    pub fn germ(&self, s: usize, c: usize) -> Option<usize> {
        self.pair_index.get(&(s, c)).map(|&i| self.germs.class_of(i))
    }

    pub fn members(&self, a: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.germs.members(a).map(|i| self.pairs[i])
    }
}

pub fn universal_groupoid(s: &InverseSemigroup) -> Result<UniversalGroupoid, GroupoidError> {
    let chars = characters(s);
    let mut pairs = Vec::new();
    let mut pair_index = BTreeMap::new();
    for x in s.elements() {
        for c in chars.domain(s.dom(x)) {
            pair_index.insert((x, c), pairs.len());
            pairs.push((x, c));
        }
    }
    // (u, φ) generates the germ of every (x, φ) with u ≤ x
    let mut dsu = DisjointSet::new(pairs.len());
    for (i, &(u, c)) in pairs.iter().enumerate() {
        for x in s.elements().filter(|&x| s.le(u, x)) {
            dsu.union(i, pair_index[&(x, c)]);
        }
    }
    let germs = GermSpace::from_dsu(&mut dsu);
    let mut arrows = Vec::with_capacity(germs.class_count());
    for k in 0..germs.class_count() {
        let (x, c) = pairs[germs.rep(k)];
        let cod = character_action(s, &chars, x, c)?;
        for i in germs.members(k) {
            let (y, d) = pairs[i];
            ensure(d == c && character_action(s, &chars, y, d)? == cod, "range is constant on a germ", &[x, y, c])?;
        }
        arrows.push(Arrow { cod, dom: c, payload: vec![x, c] });
    }
    let class = |x: usize, c: usize| pair_index.get(&(x, c)).map(|&i| germs.class_of(i));
    for a in 0..arrows.len() {
        for b in (0..arrows.len()).filter(|&b| arrows[a].dom == arrows[b].cod) {
            let expected = class(s.mul(pairs[germs.rep(a)].0, pairs[germs.rep(b)].0), arrows[b].dom);
            ensure(expected.is_some(), "product of composable germs is a germ", &[a, b])?;
            for i in germs.members(a) {
                for j in germs.members(b) {
                    let got = class(s.mul(pairs[i].0, pairs[j].0), pairs[j].1);
                    ensure(got == expected, "product is well defined on germs", &[a, b, i, j])?;
                }
            }
        }
    }
    let groupoid = FiniteGroupoid::new(chars.len(), arrows.clone(), |a, b| {
        class(s.mul(arrows[a].payload[0], arrows[b].payload[0]), arrows[b].dom).expect("checked above")
    })?;
    Ok(UniversalGroupoid { groupoid, characters: chars, pairs, germs, pair_index })
}

/// Characters whose support is a maximal proper filter.
pub fn ultrafilters(chars: &CharacterSpace, zero: usize) -> Vec<usize> {
    let proper: Vec<usize> = (0..chars.len()).filter(|&c| !chars.value(c, zero)).collect();
    let contains = |big: usize, small: usize| chars.get(small).support.iter().all(|&e| chars.value(big, e));
    proper.iter().copied().filter(|&c| proper.iter().all(|&d| d == c || !contains(d, c))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightGroupoid {
    pub universal: UniversalGroupoid,
    pub groupoid: FiniteGroupoid,
    /// Unit `i` is the character `units[i]` of the universal groupoid.
    pub units: Vec<usize>,
    /// Arrow embedding into the universal groupoid.
    pub embed: Vec<usize>,
}

/// Reduction of the universal groupoid to the ultrafilters. In a finite
/// space the closure adds nothing.
pub fn tight_reduction(s: &InverseSemigroup) -> Result<TightGroupoid, GroupoidError> {
    let zero = s.zero().ok_or(GroupoidError::NoZero)?;
    let universal = universal_groupoid(s)?;
    let units = ultrafilters(&universal.characters, zero);
    let (groupoid, embed) = universal.groupoid.reduction(&units);
    Ok(TightGroupoid { universal, groupoid, units, embed })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationGroupoid {
    pub groupoid: FiniteGroupoid,
    pub characters: CharacterSpace,
    /// `action[g][φ] = gφ`, with `(gφ)(e) = φ(g⁻¹e)`.
    pub action: Vec<Vec<usize>>,
}

impl TransformationGroupoid {
    /// Index of the arrow `(g, φ)`.
    pub fn arrow_index(&self, g: usize, c: usize) -> usize {
        g * self.characters.len() + c
    }
}

/// `G ⋉ Ê` with `d(g, φ) = φ`, `r(g, φ) = gφ` and `(g, hψ)(h, ψ) = (gh, ψ)`.
pub fn transformation_groupoid(
    e: &InverseSemigroup,
    g: &Group,
    action: &[Vec<usize>],
) -> Result<TransformationGroupoid, GroupoidError> {
    if e.idempotents().len() != e.size() {
        return Err(GroupoidError::NotAnAction("acted-on semigroup is not a semilattice".into()));
    }
    check_action(e, g, action).map_err(|err| GroupoidError::NotAnAction(err.to_string()))?;
    let chars = characters(e);
    let nc = chars.len();
    let induced: Vec<Vec<usize>> = (0..g.order())
        .map(|a| {
            let ai = g.inv(a);
            (0..nc)
                .map(|c| chars.find(|f| chars.value(c, action[ai][f])).expect("automorphisms permute characters"))
                .collect()
        })
        .collect();
    let arrows: Vec<Arrow> = (0..g.order())
        .flat_map(|a| (0..nc).map(move |c| (a, c)))
        .map(|(a, c)| Arrow { cod: induced[a][c], dom: c, payload: vec![a, c] })
        .collect();
    let groupoid = FiniteGroupoid::new(nc, arrows, |x, y| g.mul(x / nc, y / nc) * nc + y % nc)?;
    Ok(TransformationGroupoid { groupoid, characters: chars, action: induced })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossProduct {
    pub semigroup: InverseSemigroup,
    pub universal: UniversalGroupoid,
    pub transformation: TransformationGroupoid,
    /// `Φ(g, φ) = [(e, g), φ]` for any `e` with `φ(g⁻¹e) = 1`.
    pub phi: Functor,
}

/// Builds `E ⋊ G`, its universal groupoid and `G ⋉ Ê`, and checks that
/// `(g, φ) ↦ [(e, g), φ]` is an isomorphism whatever `e` is chosen.
pub fn crossproduct_isomorphism(
    e: &InverseSemigroup,
    g: &Group,
    action: &[Vec<usize>],
) -> Result<CrossProduct, GroupoidError> {
    let transformation = transformation_groupoid(e, g, action)?;
    let semigroup =
        build_semidirect_product(e, g, action).map_err(|err| GroupoidError::NotAnAction(err.to_string()))?;
    let universal = universal_groupoid(&semigroup)?;
    let order = g.order();
    let one = g.identity();
    let (tc, uc) = (&transformation.characters, &universal.characters);
    let objects: Vec<usize> = (0..tc.len())
        .map(|c| {
            uc.find(|idx| idx % order == one && tc.value(c, idx / order))
                .ok_or_else(|| Violation::new("characters of E and of E ⋊ G correspond", [c]))
        })
        .collect::<Result<_, _>>()?;
    let mut arrows = Vec::with_capacity(transformation.groupoid.arrow_count());
    for a in 0..order {
        let ai = g.inv(a);
        for c in 0..tc.len() {
            let mut image = None;
            for x in e.elements().filter(|&x| tc.value(c, action[ai][x])) {
                let germ = universal.germ(x * order + a, objects[c]);
                ensure(germ.is_some(), "(e, g) acts on φ when φ(g⁻¹e) = 1", &[x, a, c])?;
                ensure(image.is_none() || image == germ, "Φ is independent of the chosen e", &[x, a, c])?;
                image = germ;
            }
            arrows.push(image.ok_or_else(|| Violation::new("some e has φ(g⁻¹e) = 1", [a, c]))?);
        }
    }
    let phi = Functor { objects, arrows };
    verify_functor(transformation.groupoid.category(), universal.groupoid.category(), &phi)?;
    ensure(is_bijection(&phi.objects, universal.groupoid.unit_count()), "Φ is bijective on units", &[])?;
    ensure(is_bijection(&phi.arrows, universal.groupoid.arrow_count()), "Φ is bijective on arrows", &[])?;
    Ok(CrossProduct { semigroup, universal, transformation, phi })
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.len() == n && map.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

/// `𝒢[Z]` for an anchor map `f: Z → 𝒢⁰`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amplified {
    pub groupoid: FiniteGroupoid,
    pub anchor: Vec<usize>,
    /// Arrow `i` is `(z', γ, z)` with `d(γ) = f(z)` and `r(γ) = f(z')`.
    pub triples: Vec<(usize, usize, usize)>,
    index: BTreeMap<(usize, usize, usize), usize>,
}

impl Amplified {
    pub fn arrow_index(&self, zp: usize, g: usize, z: usize) -> Option<usize> {
        self.index.get(&(zp, g, z)).copied()
    }
}

pub fn amplify(gd: &FiniteGroupoid, anchor: &[usize]) -> Result<Amplified, GroupoidError> {
    if let Some(z) = anchor.iter().position(|&u| u >= gd.unit_count()) {
        return Err(Violation::new("anchor map lands in the units", [z]).into());
    }
    let nz = anchor.len();
    let mut triples = Vec::new();
    for zp in 0..nz {
        for a in 0..gd.arrow_count() {
            for z in 0..nz {
                if gd.dom(a) == anchor[z] && gd.cod(a) == anchor[zp] {
                    triples.push((zp, a, z));
                }
            }
        }
    }
    let index: BTreeMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let arrows = triples.iter().map(|&(zp, a, z)| Arrow { cod: zp, dom: z, payload: vec![zp, a, z] }).collect();
    let groupoid = FiniteGroupoid::new(nz, arrows, |x, y| {
        let (zpp, a, _) = triples[x];
        let (_, b, z) = triples[y];
        index[&(zpp, gd.compose(a, b).expect("anchors match"), z)]
    })?;
    Ok(Amplified { groupoid, anchor: anchor.to_vec(), triples, index })
}

/// The space `Z` of germs `[x, φ]` with `φ ∈ D([x, x])`, and its maps to the
/// character spaces of both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceSpace {
    pub s_characters: CharacterSpace,
    pub t_characters: CharacterSpace,
    /// Pairs `(x, φ)` with `φ` a character of `E(T)` in `D([x, x])`.
    pub pairs: Vec<(usize, usize)>,
    pub germs: GermSpace,
    /// `σ[x, φ] = xφ`.
    pub sigma: Vec<usize>,
    /// `τ[x, φ] = φ`.
    pub tau: Vec<usize>,
    pair_index: BTreeMap<(usize, usize), usize>,
}

impl EquivalenceSpace {
    pub fn len(&self) -> usize {
        self.germs.class_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, x: usize, c: usize) -> Option<usize> {
        self.pair_index.get(&(x, c)).map(|&i| self.germs.class_of(i))
    }

    pub fn members(&self, z: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.germs.members(z).map(|i| self.pairs[i])
    }
}

/// `xφ = φ ∘ ε_x`, i.e. `e ↦ φ([ex, ex])`.
fn alpha(ctx: &MoritaContext, sc: &CharacterSpace, tc: &CharacterSpace, x: usize, c: usize) -> Option<usize> {
    sc.find(|e| tc.value(c, ctx.q(ctx.act_l(e, x))))
}

/// `x*ψ = ψ ∘ η_x`, i.e. `f ↦ ψ(⟨xf, xf⟩)`.
fn beta(ctx: &MoritaContext, sc: &CharacterSpace, tc: &CharacterSpace, x: usize, c: usize) -> Option<usize> {
    tc.find(|f| sc.value(c, ctx.p(ctx.act_r(x, f))))
}

pub fn equivalence_space(ctx: &MoritaContext) -> Result<EquivalenceSpace, GroupoidError> {
    if !is_verified(ctx) {
        return Err(GroupoidError::NotVerified);
    }
    let (s, t) = (ctx.s(), ctx.t());
    let sc = characters(s);
    let tc = characters(t);
    let le = |x: usize, y: usize| ctx.act_l(ctx.p(x), y) == x;
    let a = |x: usize, c: usize| alpha(ctx, &sc, &tc, x, c).ok_or_else(|| Violation::new("xφ is a character", [x, c]));
    let b = |x: usize, c: usize| beta(ctx, &sc, &tc, x, c).ok_or_else(|| Violation::new("x*ψ is a character", [x, c]));

    for x in ctx.points() {
        for c in tc.domain(ctx.q(x)) {
            let xc = a(x, c)?;
            ensure(sc.value(xc, ctx.p(x)), "xφ ∈ D(⟨x, x⟩)", &[x, c])?;
            ensure(b(x, xc)? == c, "x*(xφ) = φ", &[x, c])?;
        }
        for c in sc.domain(ctx.p(x)) {
            let xc = b(x, c)?;
            ensure(tc.value(xc, ctx.q(x)), "x*ψ ∈ D([x, x])", &[x, c])?;
            ensure(a(x, xc)? == c, "x(x*ψ) = ψ", &[x, c])?;
        }
        for y in ctx.points().filter(|&y| le(x, y)) {
            for c in tc.domain(ctx.q(x)) {
                ensure(tc.value(c, ctx.q(y)), "D([x, x]) ⊆ D([y, y]) for x ≤ y", &[x, y, c])?;
                ensure(a(x, c)? == a(y, c)?, "xφ = yφ for x ≤ y", &[x, y, c])?;
            }
        }
        for u in s.elements() {
            let sx = ctx.act_l(u, x);
            for c in tc.domain(ctx.q(x)) {
                let xc = a(x, c)?;
                let in_dom = sc.value(xc, s.dom(u));
                ensure(in_dom == tc.value(c, ctx.q(sx)), "φ ∈ x*D(s*s) iff φ ∈ D([sx, sx])", &[u, x, c])?;
                if in_dom {
                    ensure(a(sx, c)? == character_action(s, &sc, u, xc)?, "(sx)φ = s(xφ)", &[u, x, c])?;
                }
            }
        }
    }

    let mut pairs = Vec::new();
    let mut pair_index = BTreeMap::new();
    for x in ctx.points() {
        for c in tc.domain(ctx.q(x)) {
            pair_index.insert((x, c), pairs.len());
            pairs.push((x, c));
        }
    }
    let n = pairs.len();
    let witness = |i: usize, j: usize| {
        let ((x, c), (y, d)) = (pairs[i], pairs[j]);
        if c != d {
            return None;
        }
        ctx.points().find(|&w| le(w, x) && le(w, y) && tc.value(c, ctx.q(w)))
    };
    let wit: Vec<Option<usize>> = (0..n * n).map(|k| witness(k / n, k % n)).collect();
    // transitivity through the meet w = u[v, v]
    for i in 0..n {
        for j in 0..n {
            let Some(u) = wit[i * n + j] else { continue };
            for k in 0..n {
                let Some(v) = wit[j * n + k] else { continue };
                let w = ctx.act_r(u, ctx.q(v));
                let (x, y, z, c) = (pairs[i].0, pairs[j].0, pairs[k].0, pairs[i].1);
                ensure(le(w, x) && le(w, y) && le(w, z), "u[v, v] lies below all three points", &[i, j, k])?;
                ensure(tc.value(c, ctx.q(w)), "φ ∈ D([w, w])", &[i, j, k])?;
            }
        }
    }
    let germs = GermSpace::from_equivalence(n, |i, j| wit[i * n + j].is_some())?;

    let mut sigma = Vec::with_capacity(germs.class_count());
    let mut tau = Vec::with_capacity(germs.class_count());
    for z in 0..germs.class_count() {
        let (x, c) = pairs[germs.rep(z)];
        let v = a(x, c)?;
        for i in germs.members(z) {
            ensure(a(pairs[i].0, pairs[i].1)? == v, "σ is well defined", &[z, i])?;
        }
        sigma.push(v);
        tau.push(c);
    }
    ensure(is_onto(&sigma, sc.len()), "σ is surjective", &[])?;
    ensure(is_onto(&tau, tc.len()), "τ is surjective", &[])?;
    Ok(EquivalenceSpace { s_characters: sc, t_characters: tc, pairs, germs, sigma, tau, pair_index })
}

fn is_onto(map: &[usize], n: usize) -> bool {
    (0..n).all(|v| map.contains(&v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaWitness {
    pub space: EquivalenceSpace,
    pub universal_s: UniversalGroupoid,
    pub universal_t: UniversalGroupoid,
    /// `𝒢(S)[Z]` along `σ`.
    pub amplified_s: Amplified,
    /// `𝒢(T)[Z]` along `τ`.
    pub amplified_t: Amplified,
    pub phi: Functor,
    pub psi: Functor,
}

/// `Φ[x', s, φ, x] = [x', [x', sx], x*φ, x]` and
/// `Ψ[x', t, φ, x] = [x', ⟨x't, x⟩, xφ, x]`, checked well defined on every
/// representative, functorial and mutually inverse.
pub fn morita_witness(ctx: &MoritaContext) -> Result<MoritaWitness, GroupoidError> {
    let space = equivalence_space(ctx)?;
    let universal_s = universal_groupoid(ctx.s())?;
    let universal_t = universal_groupoid(ctx.t())?;
    let amplified_s = amplify(&universal_s.groupoid, &space.sigma)?;
    let amplified_t = amplify(&universal_t.groupoid, &space.tau)?;
    let (sc, tc) = (&space.s_characters, &space.t_characters);

    let mut phi_arrows = Vec::with_capacity(amplified_s.triples.len());
    for (i, &(zp, g, z)) in amplified_s.triples.iter().enumerate() {
        let mut image = None;
        for (xp, _) in space.members(zp) {
            for (x, c) in space.members(z) {
                for (u, psi) in universal_s.members(g) {
                    ensure(psi == space.sigma[z], "germ domain is σ(z)", &[i])?;
                    ensure(beta(ctx, sc, tc, x, psi) == Some(c), "x*(σ(z)) = τ(z)", &[i, x])?;
                    let t = ctx.ip_t(xp, ctx.act_l(u, x));
                    let gt = universal_t
                        .germ(t, c)
                        .ok_or_else(|| Violation::new("x*φ ∈ D(t*t) for t = [x', sx]", [i, u, x]))?;
                    let b = amplified_t.arrow_index(zp, gt, z);
                    ensure(b.is_some(), "Φ respects the anchors", &[i, u, x])?;
                    ensure(image.is_none() || image == b, "Φ is well defined on germ classes", &[i, u, x, xp])?;
                    image = b;
                }
            }
        }
        phi_arrows.push(image.expect("classes are nonempty"));
    }
    let mut psi_arrows = Vec::with_capacity(amplified_t.triples.len());
    for (i, &(zp, g, z)) in amplified_t.triples.iter().enumerate() {
        let mut image = None;
        for (xp, _) in space.members(zp) {
            for (x, c) in space.members(z) {
                for (t, d) in universal_t.members(g) {
                    ensure(d == c, "germ domain is τ(z)", &[i])?;
                    let xc = alpha(ctx, sc, tc, x, c).ok_or_else(|| Violation::new("xφ is a character", [x, c]))?;
                    let u = ctx.ip_s(ctx.act_r(xp, t), x);
                    let gs = universal_s
                        .germ(u, xc)
                        .ok_or_else(|| Violation::new("xφ ∈ D(s*s) for s = ⟨x't, x⟩", [i, t, x]))?;
                    let b = amplified_s.arrow_index(zp, gs, z);
                    ensure(b.is_some(), "Ψ respects the anchors", &[i, t, x])?;
                    ensure(image.is_none() || image == b, "Ψ is well defined on germ classes", &[i, t, x, xp])?;
                    image = b;
                }
            }
        }
        psi_arrows.push(image.expect("classes are nonempty"));
    }
    let units: Vec<usize> = (0..space.len()).collect();
    let phi = Functor { objects: units.clone(), arrows: phi_arrows };
    let psi = Functor { objects: units, arrows: psi_arrows };
    verify_functor(amplified_s.groupoid.category(), amplified_t.groupoid.category(), &phi)?;
    verify_functor(amplified_t.groupoid.category(), amplified_s.groupoid.category(), &psi)?;
    for (a, &b) in phi.arrows.iter().enumerate() {
        ensure(psi.arrows[b] == a, "Ψ∘Φ = id", &[a])?;
    }
    for (b, &a) in psi.arrows.iter().enumerate() {
        ensure(phi.arrows[a] == b, "Φ∘Ψ = id", &[b])?;
    }
    Ok(MoritaWitness { space, universal_s, universal_t, amplified_s, amplified_t, phi, psi })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightWitness {
    /// Points of `Z` over ultrafilters.
    pub points: Vec<usize>,
    pub tight_s: TightGroupoid,
    pub tight_t: TightGroupoid,
    pub amplified_s: Amplified,
    pub amplified_t: Amplified,
    pub phi: Functor,
}

/// Restricts a witness to the tight groupoids of two semigroups with zero.
pub fn tight_witness(ctx: &MoritaContext, w: &MoritaWitness) -> Result<TightWitness, GroupoidError> {
    let tight_s = tight_reduction(ctx.s())?;
    let tight_t = tight_reduction(ctx.t())?;
    let points: Vec<usize> = (0..w.space.len()).filter(|&z| tight_s.units.contains(&w.space.sigma[z])).collect();
    let over_t: Vec<usize> = (0..w.space.len()).filter(|&z| tight_t.units.contains(&w.space.tau[z])).collect();
    ensure(points == over_t, "σ and τ pick out the same points over ultrafilters", &[])?;
    let pos = |units: &[usize], u: usize| units.iter().position(|&v| v == u).expect("tight unit");
    let anchor_s: Vec<usize> = points.iter().map(|&z| pos(&tight_s.units, w.space.sigma[z])).collect();
    let anchor_t: Vec<usize> = points.iter().map(|&z| pos(&tight_t.units, w.space.tau[z])).collect();
    let amplified_s = amplify(&tight_s.groupoid, &anchor_s)?;
    let amplified_t = amplify(&tight_t.groupoid, &anchor_t)?;
    let mut arrows = Vec::with_capacity(amplified_s.triples.len());
    for (i, &(zp, g, z)) in amplified_s.triples.iter().enumerate() {
        let full = w.amplified_s.arrow_index(points[zp], tight_s.embed[g], points[z]).expect("tight arrows are arrows");
        let (_, gt, _) = w.amplified_t.triples[w.phi.arrows[full]];
        let local = tight_t.embed.iter().position(|&v| v == gt);
        let b = local.and_then(|l| amplified_t.arrow_index(zp, l, z));
        arrows.push(b.ok_or_else(|| Violation::new("Φ maps tight arrows to tight arrows", [i]))?);
    }
    let phi = Functor { objects: (0..points.len()).collect(), arrows };
    verify_functor(amplified_s.groupoid.category(), amplified_t.groupoid.category(), &phi)?;
    ensure(is_bijection(&phi.arrows, amplified_t.groupoid.arrow_count()), "restricted Φ is bijective", &[])?;
    Ok(TightWitness { points, tight_s, tight_t, amplified_s, amplified_t, phi })
}

/// An isomorphism of finite groupoids, if any.
pub fn groupoid_isomorphic(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Option<Functor> {
    if g1.unit_count() != g2.unit_count() || g1.arrow_count() != g2.arrow_count() {
        return None;
    }
    category_isomorphism(g1.category(), g2.category())
}
