//! Enlargements, their canonical bimodules, corners and the monoid
//! criterion.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bimodule::{ContextParts, MoritaContext};
use crate::error::{ensure, Violation};
use crate::iso::isomorphism;
use crate::semigroup::InverseSemigroup;
use crate::structure::center;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnlargementError {
    #[error("subset is not closed under multiplication and inversion")]
    NotClosed,
    #[error("not an enlargement (STS = S: {sts}, TST = T: {tst})")]
    NotEnlargement { sts: bool, tst: bool },
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("SeS is not all of S for e = {0}")]
    NotFull(usize),
    #[error("S is not a monoid")]
    NotMonoid,
    #[error("T is not a monoid")]
    TNotMonoid,
    #[error(transparent)]
    Violation(#[from] Violation),
}

/// Outcome of the enlargement test for `T ⊆ S`, in both forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnlargementWitness {
    pub t_elems: Vec<usize>,
    pub sts: bool,
    pub tst: bool,
    pub idempotent_sts: bool,
    pub idempotent_tst: bool,
}

impl EnlargementWitness {
    pub fn holds(&self) -> bool {
        self.sts && self.tst
    }
}

/// Computes `STS`, `TST`, `SE(T)S` and `E(T)SE(T)` and compares them with
/// `S` and `T`. The two forms must agree.
pub fn is_enlargement(s: &InverseSemigroup, t_elems: &[usize]) -> Result<EnlargementWitness, EnlargementError> {
    let t: BTreeSet<usize> = t_elems.iter().copied().collect();
    if t.is_empty() || t.iter().any(|&a| a >= s.size()) || !s.is_closed(&t.iter().copied().collect::<Vec<_>>()) {
        return Err(EnlargementError::NotClosed);
    }
    let e_t: BTreeSet<usize> = t.iter().copied().filter(|&a| s.is_idempotent(a)).collect();
    let all = s.all();
    let sts = s.product_set(&s.product_set(&all, &t), &all) == all;
    let tst = s.product_set(&s.product_set(&t, &all), &t) == t;
    let idempotent_sts = s.product_set(&s.product_set(&all, &e_t), &all) == all;
    let idempotent_tst = s.product_set(&s.product_set(&e_t, &all), &e_t) == t;
    let w = EnlargementWitness { t_elems: t.into_iter().collect(), sts, tst, idempotent_sts, idempotent_tst };
    ensure(
        w.holds() == (idempotent_sts && idempotent_tst),
        "element and idempotent forms of the enlargement test agree",
        &w.t_elems,
    )?;
    Ok(w)
}

/// `X = ST` with `⟨x,y⟩ = xy*` and `[x,y] = x*y`. `T` is re-indexed as in
/// [`InverseSemigroup::restrict`]; `X` is listed in increasing element order.
pub fn canonical_context(s: &InverseSemigroup, t_elems: &[usize]) -> Result<MoritaContext, EnlargementError> {
    let w = is_enlargement(s, t_elems)?;
    if !w.holds() {
        return Err(EnlargementError::NotEnlargement { sts: w.sts, tst: w.tst });
    }
    let (t, embed) = s.restrict(&w.t_elems).map_err(|_| EnlargementError::NotClosed)?;
    let tset: BTreeSet<usize> = embed.iter().copied().collect();
    let xs: Vec<usize> = s.product_set(&s.all(), &tset).into_iter().collect();
    let pos = |v: usize| xs.binary_search(&v).expect("X is closed under both actions");
    let t_index = |v: usize| embed.binary_search(&v).expect("x*y lies in T");
    let left = s.elements().map(|a| xs.iter().map(|&x| pos(s.mul(a, x))).collect()).collect();
    let right = xs.iter().map(|&x| embed.iter().map(|&b| pos(s.mul(x, b))).collect()).collect();
    let ip_s = xs.iter().map(|&x| xs.iter().map(|&y| s.mul(x, s.inv(y))).collect()).collect();
    let ip_t = xs.iter().map(|&x| xs.iter().map(|&y| t_index(s.mul(s.inv(x), y))).collect()).collect();
    let ctx = MoritaContext::from_parts(ContextParts { s: s.clone(), t, left, right, ip_s, ip_t })
        .expect("canonical tables have the right shape");
    Ok(ctx)
}

/// The elements of `X = ST` in `S`, in the order used by [`canonical_context`].
pub fn canonical_points(s: &InverseSemigroup, t_elems: &[usize]) -> Vec<usize> {
    let t: BTreeSet<usize> = t_elems.iter().copied().collect();
    s.product_set(&s.all(), &t).into_iter().collect()
}

/// The local submonoid `eSe` and its embedding.
pub fn corner(s: &InverseSemigroup, e: usize) -> Result<(InverseSemigroup, Vec<usize>), EnlargementError> {
    if !s.is_idempotent(e) {
        return Err(EnlargementError::NotIdempotent(e));
    }
    let elems: Vec<usize> = s.elements().map(|a| s.mul3(e, a, e)).collect::<BTreeSet<_>>().into_iter().collect();
    Ok(s.restrict(&elems).expect("eSe is closed"))
}

/// `SeS = S`.
pub fn is_full(s: &InverseSemigroup, e: usize) -> bool {
    s.is_idempotent(e) && s.principal_ideal(e).len() == s.size()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidCriterion {
    pub e: usize,
    pub corner_elems: Vec<usize>,
    /// `iso[t]` is the image of `t` in `eSe`, as an element of `S`.
    pub iso: Vec<usize>,
}

/// An idempotent `e` with `SeS = S` and `eSe ≅ T`, trying idempotents in
/// index order.
pub fn monoid_criterion(
    s: &InverseSemigroup,
    t: &InverseSemigroup,
) -> Result<Option<MonoidCriterion>, EnlargementError> {
    if t.identity().is_none() {
        return Err(EnlargementError::TNotMonoid);
    }
    for &e in s.idempotents() {
        if !is_full(s, e) {
            continue;
        }
        let (c, embed) = corner(s, e)?;
        if let Some(iso) = isomorphism(t, &c) {
            let iso = iso.into_iter().map(|i| embed[i]).collect();
            return Ok(Some(MonoidCriterion { e, corner_elems: embed, iso }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterIso {
    /// `φ(z) = eze` on `Z(S)`.
    pub phi: BTreeMap<usize, usize>,
    /// `ψ(w) = s1 w s2` on `Z(eSe)`.
    pub psi: BTreeMap<usize, usize>,
    /// The least pair with `s1 e s2 = 1`.
    pub factorization: (usize, usize),
}

/// The isomorphism `Z(S) ≅ Z(eSe)` for a monoid `S` with `SeS = S`.
pub fn center_isomorphism(s: &InverseSemigroup, e: usize) -> Result<CenterIso, EnlargementError> {
    let one = s.identity().ok_or(EnlargementError::NotMonoid)?;
    if !s.is_idempotent(e) {
        return Err(EnlargementError::NotIdempotent(e));
    }
    if !is_full(s, e) {
        return Err(EnlargementError::NotFull(e));
    }
    let factorizations: Vec<(usize, usize)> =
        s.elements().flat_map(|a| s.elements().map(move |b| (a, b))).filter(|&(a, b)| s.mul3(a, e, b) == one).collect();
    let (s1, s2) = factorizations[0];
    let (c, embed) = corner(s, e)?;
    let zc: Vec<usize> = center(&c).into_iter().map(|i| embed[i]).collect();
    let zs = center(s);
    let phi: BTreeMap<usize, usize> = zs.iter().map(|&z| (z, s.mul3(e, z, e))).collect();
    let psi: BTreeMap<usize, usize> = zc.iter().map(|&w| (w, s.mul3(s1, w, s2))).collect();
    for &z in &zs {
        ensure(zc.contains(&phi[&z]), "φ lands in the corner's center", &[z])?;
        ensure(psi[&phi[&z]] == z, "ψφ = id", &[z])?;
        for &y in &zs {
            ensure(phi[&s.mul(z, y)] == s.mul(phi[&z], phi[&y]), "φ is multiplicative", &[z, y])?;
        }
    }
    for &w in &zc {
        ensure(zs.contains(&psi[&w]), "ψ lands in the center", &[w])?;
        ensure(phi[&psi[&w]] == w, "φψ = id", &[w])?;
        for &(a, b) in &factorizations {
            ensure(s.mul3(a, w, b) == psi[&w], "ψ does not depend on the factorization", &[w, a, b])?;
        }
    }
    Ok(CenterIso { phi, psi, factorization: (s1, s2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{derived_identities, verify_context};
    use crate::constructions::{adjoin_identity, b5, build_matrix_enlargement, chain, two_chain};
    use crate::iso::are_isomorphic;
    use crate::semigroup::Group;

    const E11: usize = 0;
    const E21: usize = 2;
    const E22: usize = 3;
    const ZERO: usize = 4;

    #[test]
    fn b5_over_its_corner() {
        let w = is_enlargement(&b5(), &[ZERO, E11]).unwrap();
        assert!(w.holds() && w.idempotent_sts && w.idempotent_tst);
        let b = b5();
        let whole: Vec<usize> = b.elements().collect();
        assert!(is_enlargement(&b, &whole).unwrap().holds());
    }

    #[test]
    fn diagonal_is_not_an_enlargement() {
        // E11 E12 E22 = E12 lies in TST but not in T
        let w = is_enlargement(&b5(), &[ZERO, E11, E22]).unwrap();
        assert!(w.sts);
        assert!(!w.tst);
        assert!(!w.holds());
        assert_eq!(
            canonical_context(&b5(), &[ZERO, E11, E22]).unwrap_err(),
            EnlargementError::NotEnlargement { sts: true, tst: false }
        );
        assert_eq!(is_enlargement(&b5(), &[1]).unwrap_err(), EnlargementError::NotClosed);
    }

    #[test]
    fn canonical_context_of_b5() {
        let ctx = canonical_context(&b5(), &[E11, ZERO]).unwrap();
        assert_eq!(canonical_points(&b5(), &[E11, ZERO]), vec![E11, E21, ZERO]);
        assert_eq!(ctx.m(), 3);
        assert!(verify_context(&ctx).all_pass());
        assert!(derived_identities(&ctx).unwrap().all_pass());
    }

    #[test]
    fn canonical_context_of_s_over_s() {
        let s = b5();
        let all: Vec<usize> = s.elements().collect();
        let ctx = canonical_context(&s, &all).unwrap();
        assert_eq!(ctx.m(), 5);
        assert!(verify_context(&ctx).all_pass());
    }

    #[test]
    fn matrix_enlargement_context() {
        let (b, embed) = build_matrix_enlargement(&chain(3), 2).unwrap();
        assert!(is_enlargement(&b, &embed).unwrap().holds());
        let ctx = canonical_context(&b, &embed).unwrap();
        assert!(verify_context(&ctx).all_pass());
    }

    #[test]
    fn corners() {
        let (c, embed) = corner(&b5(), E11).unwrap();
        assert_eq!(embed, vec![E11, ZERO]);
        assert!(are_isomorphic(&c, &two_chain()));
        assert!(is_full(&b5(), E11));
        assert!(!is_full(&b5(), ZERO));
        let m = adjoin_identity(&b5()).unwrap();
        let (whole, _) = corner(&m, 5).unwrap();
        assert_eq!(whole, m);
        assert_eq!(corner(&b5(), 1).unwrap_err(), EnlargementError::NotIdempotent(1));
    }

    #[test]
    fn monoid_criteria() {
        let found = monoid_criterion(&b5(), &two_chain()).unwrap().unwrap();
        assert_eq!(found.e, E11);
        let z2 = Group::cyclic(2).into_semigroup();
        assert_eq!(monoid_criterion(&z2, &z2).unwrap().unwrap().e, 0);
        assert_eq!(monoid_criterion(&two_chain(), &chain(3)).unwrap(), None);
        assert_eq!(monoid_criterion(&two_chain(), &b5()).unwrap_err(), EnlargementError::TNotMonoid);
    }

    #[test]
    fn centers() {
        let m = adjoin_identity(&b5()).unwrap();
        let c = center_isomorphism(&m, 5).unwrap();
        assert!(c.phi.iter().all(|(a, b)| a == b));
        assert_eq!(center_isomorphism(&b5(), E11).unwrap_err(), EnlargementError::NotMonoid);
        assert_eq!(center_isomorphism(&m, E11).unwrap_err(), EnlargementError::NotFull(E11));
        let z3 = Group::cyclic(3).into_semigroup();
        assert_eq!(center_isomorphism(&z3, 0).unwrap().phi.len(), 3);
    }
}
