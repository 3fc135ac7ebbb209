//! Example semigroups: semilattices, Brandt semigroups, symmetric inverse
//! monoids, semidirect products, P-semigroups from McAlister triples,
//! Birget-Rhodes expansions and matrix enlargements.
//!
//! Every constructor hands its table to [`InverseSemigroup::from_table`], so
//! outputs are validated like user input.

use std::collections::BTreeSet;

use log::warn;
use thiserror::Error;

use crate::iso::are_isomorphic;
use crate::poset::Poset;
use crate::semigroup::{Group, InverseSemigroup, ValidationError};
use crate::structure::{is_e_unitary, maximal_group_image, natural_order};

/// Default cap on the size of a constructed semigroup.
pub const DEFAULT_SIZE_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("not a semilattice: {0}")]
    NotASemilattice(String),
    #[error("{what} would have {size} elements, limit is {limit}")]
    TooLarge { what: String, size: usize, limit: usize },
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("group element {0} does not act by an automorphism")]
    NotAutomorphism(usize),
    #[error("invalid McAlister triple: {0}")]
    InvalidTriple(String),
    #[error("semigroup has no zero")]
    NoZero,
    #[error("semigroup has no identity")]
    NoIdentity,
    #[error("construction identity fails: {0}")]
    IdentityFails(String),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

fn guard(what: &str, size: usize, limit: usize) -> Result<(), ConstructionError> {
    if size > limit {
        Err(ConstructionError::TooLarge { what: what.to_string(), size, limit })
    } else {
        Ok(())
    }
}

/// A semilattice from its meet table.
pub fn build_semilattice(meet: Vec<Vec<usize>>) -> Result<InverseSemigroup, ConstructionError> {
    let n = meet.len();
    for (a, row) in meet.iter().enumerate() {
        if row.len() != n {
            return Err(ValidationError::RowLength { row: a, len: row.len(), expected: n }.into());
        }
        if row[a] != a {
            return Err(ConstructionError::NotASemilattice(format!("{a}{a} != {a}")));
        }
        for b in 0..n {
            if meet[b].get(a) != Some(&row[b]) {
                return Err(ConstructionError::NotASemilattice(format!("{a}{b} != {b}{a}")));
            }
        }
    }
    Ok(InverseSemigroup::from_table(meet, None)?)
}

/// The chain `0 < 1 < ... < k-1` with meet `min`.
pub fn chain(k: usize) -> InverseSemigroup {
    let table = (0..k).map(|a| (0..k).map(|b| a.min(b)).collect()).collect();
    build_semilattice(table).expect("chain is a semilattice")
}

/// The two-element semilattice `{0, 1}`.
pub fn two_chain() -> InverseSemigroup {
    chain(2)
}

/// `{0, a, b, 1}` with `a ∧ b = 0`, indexed `0 = bottom, 1 = a, 2 = b, 3 = top`.
pub fn diamond() -> InverseSemigroup {
    let table = vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]];
    build_semilattice(table).expect("diamond is a semilattice")
}

/// Action of `Z/2` on the diamond exchanging the two atoms.
pub fn diamond_swap() -> Vec<Vec<usize>> {
    vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]
}

/// Every group element acts as the identity.
pub fn trivial_action(e: &InverseSemigroup, g: &Group) -> Vec<Vec<usize>> {
    vec![e.elements().collect(); g.order()]
}

/// `B_k(G)`: element `g E_ij` has index `(i*k + j)*|G| + g`, zero is last.
pub fn build_brandt(g: &Group, k: usize) -> Result<InverseSemigroup, ConstructionError> {
    build_brandt_with_limit(g, k, DEFAULT_SIZE_LIMIT)
}

pub fn build_brandt_with_limit(g: &Group, k: usize, limit: usize) -> Result<InverseSemigroup, ConstructionError> {
    let order = g.order();
    let n = k * k * order + 1;
    guard("Brandt semigroup", n, limit)?;
    let zero = n - 1;
    let index = |i: usize, j: usize, h: usize| (i * k + j) * order + h;
    let mut table = vec![vec![zero; n]; n];
    for (i, j, a) in iproduct3(k, k, order) {
        for (l, m, b) in iproduct3(k, k, order) {
            if j == l {
                table[index(i, j, a)][index(l, m, b)] = index(i, m, g.mul(a, b));
            }
        }
    }
    let mut names = Vec::with_capacity(n);
    for (i, j, a) in iproduct3(k, k, order) {
        if order == 1 {
            names.push(format!("E{}{}", i + 1, j + 1));
        } else {
            names.push(format!("g{a}E{}{}", i + 1, j + 1));
        }
    }
    names.push("0".to_string());
    Ok(InverseSemigroup::from_table(table, Some(names))?)
}

fn iproduct3(a: usize, b: usize, c: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..a).flat_map(move |i| (0..b).flat_map(move |j| (0..c).map(move |k| (i, j, k))))
}

/// The five-element Brandt semigroup, elements `E11 E12 E21 E22 0`.
pub fn b5() -> InverseSemigroup {
    build_brandt(&Group::trivial(), 2).expect("B5 is valid")
}

/// All partial injections of `{0..k}` under composition, `(st)(x) = s(t(x))`.
pub fn build_symmetric_inverse_monoid(k: usize) -> Result<InverseSemigroup, ConstructionError> {
    build_symmetric_inverse_monoid_with_limit(k, DEFAULT_SIZE_LIMIT)
}

pub fn build_symmetric_inverse_monoid_with_limit(
    k: usize,
    limit: usize,
) -> Result<InverseSemigroup, ConstructionError> {
    let expected: usize = (0..=k).map(|i| binomial(k, i).pow(2) * factorial(i)).sum();
    guard("symmetric inverse monoid", expected, limit)?;
    // value k encodes "undefined"
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![k; k];
    enumerate_partial_injections(k, 0, &mut cur, &mut maps);
    debug_assert_eq!(maps.len(), expected);
    maps.sort();
    let find = |m: &Vec<usize>| maps.binary_search(m).expect("closed under composition");
    let n = maps.len();
    let mut table = vec![vec![0; n]; n];
    for (a, s) in maps.iter().enumerate() {
        for (b, t) in maps.iter().enumerate() {
            let st: Vec<usize> = t.iter().map(|&y| if y == k { k } else { s[y] }).collect();
            table[a][b] = find(&st);
        }
    }
    let names = maps
        .iter()
        .map(|m| m.iter().map(|&v| if v == k { "-".to_string() } else { v.to_string() }).collect::<String>())
        .collect();
    Ok(InverseSemigroup::from_table(table, Some(names))?)
}

fn enumerate_partial_injections(k: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == k {
        out.push(cur.clone());
        return;
    }
    for v in 0..=k {
        if v == k || !cur[..i].contains(&v) {
            cur[i] = v;
            enumerate_partial_injections(k, i + 1, cur, out);
        }
    }
    cur[i] = k;
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub(crate) fn check_action(e: &InverseSemigroup, g: &Group, action: &[Vec<usize>]) -> Result<(), ConstructionError> {
    if action.len() != g.order() || action.iter().any(|row| row.len() != e.size() || row.iter().any(|&v| v >= e.size()))
    {
        return Err(ConstructionError::NotAnAction("table has the wrong shape".into()));
    }
    if action[g.identity()].iter().enumerate().any(|(x, &y)| x != y) {
        return Err(ConstructionError::NotAnAction("identity does not act trivially".into()));
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            for x in e.elements() {
                if action[g.mul(a, b)][x] != action[a][action[b][x]] {
                    return Err(ConstructionError::NotAnAction(format!("({a}{b})·{x} != {a}·({b}·{x})")));
                }
            }
        }
    }
    for (a, row) in action.iter().enumerate() {
        let image: BTreeSet<usize> = row.iter().copied().collect();
        let preserves = e.elements().all(|x| e.elements().all(|y| row[e.mul(x, y)] == e.mul(row[x], row[y])));
        if image.len() != e.size() || !preserves {
            return Err(ConstructionError::NotAutomorphism(a));
        }
    }
    Ok(())
}

/// `E ⋊ G` on `E × G`, index `e*|G| + g`, with `(e,g)(f,h) = (e ∧ g·f, gh)`.
pub fn build_semidirect_product(
    e: &InverseSemigroup,
    g: &Group,
    action: &[Vec<usize>],
) -> Result<InverseSemigroup, ConstructionError> {
    if e.idempotents().len() != e.size() {
        return Err(ConstructionError::NotASemilattice("not every element is idempotent".into()));
    }
    check_action(e, g, action)?;
    let order = g.order();
    let n = e.size() * order;
    let idx = |x: usize, a: usize| x * order + a;
    let mut table = vec![vec![0; n]; n];
    for x in e.elements() {
        for a in 0..order {
            for y in e.elements() {
                for b in 0..order {
                    table[idx(x, a)][idx(y, b)] = idx(e.mul(x, action[a][y]), g.mul(a, b));
                }
            }
        }
    }
    let s = InverseSemigroup::from_table(table, None)?;
    let one = g.identity();
    for x in e.elements() {
        for a in 0..order {
            let ai = g.inv(a);
            let star = idx(action[ai][x], ai);
            if s.inv(idx(x, a)) != star {
                return Err(ConstructionError::IdentityFails(format!("inverse of ({x},{a})")));
            }
            if s.dom(idx(x, a)) != idx(action[ai][x], one) {
                return Err(ConstructionError::IdentityFails(format!("(e,g)*(e,g) at ({x},{a})")));
            }
            for y in e.elements() {
                let conj = s.mul3(star, idx(y, one), idx(x, a));
                if conj != idx(action[ai][e.mul(x, y)], one) {
                    return Err(ConstructionError::IdentityFails(format!("conjugation of ({y},1) by ({x},{a})")));
                }
                for b in 0..order {
                    let product_order = e.le(x, y) && a == b;
                    if s.le(idx(x, a), idx(y, b)) != product_order {
                        return Err(ConstructionError::IdentityFails(format!("order at ({x},{a}),({y},{b})")));
                    }
                }
            }
        }
    }
    Ok(s)
}

/// A group acting on a poset `X` by order automorphisms, with a distinguished
/// subset `Y`.
#[derive(Debug, Clone)]
pub struct McAlisterTriple {
    pub poset: Poset,
    pub y: Vec<usize>,
    pub group: Group,
    /// `action[g][x]` is `g·x`.
    pub action: Vec<Vec<usize>>,
}

impl McAlisterTriple {
    fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let p = &self.poset;
        let lower: Vec<usize> = (0..p.size()).filter(|&z| p.le(z, a) && p.le(z, b)).collect();
        lower.iter().copied().find(|&z| lower.iter().all(|&l| p.le(l, z)))
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |m: &str| Err(ConstructionError::InvalidTriple(m.to_string()));
        let p = &self.poset;
        let n = p.size();
        let g = &self.group;
        let in_y: Vec<bool> = (0..n).map(|x| self.y.contains(&x)).collect();
        if self.y.is_empty() || self.y.iter().any(|&y| y >= n) {
            return bad("Y must be a nonempty subset of X");
        }
        if self.action.len() != g.order() || self.action.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return bad("action table has the wrong shape");
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if (0..n).any(|x| self.action[g.mul(a, b)][x] != self.action[a][self.action[b][x]]) {
                    return bad("not an action");
                }
            }
            let row = &self.action[a];
            if (0..n).collect::<BTreeSet<_>>() != row.iter().copied().collect() {
                return bad("group element does not act bijectively");
            }
            if (0..n).any(|x| (0..n).any(|z| p.le(x, z) != p.le(row[x], row[z]))) {
                return bad("group element does not act by an order automorphism");
            }
        }
        if (0..n).any(|x| self.action[g.identity()][x] != x) {
            return bad("identity does not act trivially");
        }
        if self.y.iter().any(|&y| (0..n).any(|z| p.le(z, y) && !in_y[z])) {
            return bad("Y is not a downset");
        }
        for &a in &self.y {
            for &b in &self.y {
                if self.meet(a, b).is_none() {
                    return bad("Y lacks a binary meet");
                }
            }
        }
        if (0..n).any(|x| !(0..g.order()).any(|a| in_y[self.action[a][x]])) {
            return bad("G·Y is not all of X");
        }
        if (0..g.order()).any(|a| !self.y.iter().any(|&y| in_y[self.action[a][y]])) {
            return bad("gY ∩ Y is empty for some g");
        }
        Ok(())
    }
}

/// `P(G, X, Y)`: pairs `(y, g)` with `y, g⁻¹y ∈ Y`, listed by `y` then `g`.
/// Returns the semigroup and the list of pairs.
pub fn build_mcalister_p(t: &McAlisterTriple) -> Result<(InverseSemigroup, Vec<(usize, usize)>), ConstructionError> {
    t.validate()?;
    let g = &t.group;
    let mut ys = t.y.clone();
    ys.sort_unstable();
    let pairs: Vec<(usize, usize)> = ys
        .iter()
        .flat_map(|&y| (0..g.order()).map(move |a| (y, a)))
        .filter(|&(y, a)| ys.binary_search(&t.action[g.inv(a)][y]).is_ok())
        .collect();
    let n = pairs.len();
    let mut table = vec![vec![0; n]; n];
    for (i, &(y, a)) in pairs.iter().enumerate() {
        for (j, &(z, b)) in pairs.iter().enumerate() {
            let m = t
                .meet(y, t.action[a][z])
                .ok_or_else(|| ConstructionError::InvalidTriple("missing meet in X".into()))?;
            let prod = (m, g.mul(a, b));
            table[i][j] = pairs
                .iter()
                .position(|&q| q == prod)
                .ok_or_else(|| ConstructionError::InvalidTriple("product leaves the P-semigroup".into()))?;
        }
    }
    let s = InverseSemigroup::from_table(table, None)?;
    if !is_e_unitary(&s) {
        return Err(ConstructionError::IdentityFails("P-semigroup is not E-unitary".into()));
    }
    let e_order = natural_order(&s);
    let es = s.idempotents();
    let e_poset = Poset::new(es.len(), |i, j| e_order.le(es[i], es[j])).expect("partial order");
    let y_poset = Poset::new(ys.len(), |i, j| t.poset.le(ys[i], ys[j])).expect("partial order");
    if e_poset.isomorphism(&y_poset).is_none() {
        return Err(ConstructionError::IdentityFails("E(P) is not isomorphic to Y".into()));
    }
    if !are_isomorphic(maximal_group_image(&s).group.as_semigroup(), g.as_semigroup()) {
        return Err(ConstructionError::IdentityFails("maximal group image is not G".into()));
    }
    Ok((s, pairs))
}

fn subset_masks(g: &Group) -> Vec<usize> {
    (1..1usize << g.order()).collect()
}

fn translate(g: &Group, a: usize, mask: usize) -> usize {
    (0..g.order()).filter(|&x| mask >> x & 1 == 1).fold(0, |acc, x| acc | 1 << g.mul(a, x))
}

/// Largest group order accepted by the Birget-Rhodes constructions.
pub const MAX_EXPANSION_GROUP: usize = 4;

fn expansion_guard(g: &Group) -> Result<(), ConstructionError> {
    if g.order() > MAX_EXPANSION_GROUP {
        return Err(ConstructionError::TooLarge {
            what: "Birget-Rhodes expansion group".into(),
            size: g.order(),
            limit: MAX_EXPANSION_GROUP,
        });
    }
    Ok(())
}

/// The triple `(P_fin(G), {A : 1 ∈ A}, G)`. Subsets are bitmasks listed in
/// increasing order, ordered by reverse inclusion.
pub fn birget_rhodes_triple(g: &Group) -> Result<McAlisterTriple, ConstructionError> {
    expansion_guard(g)?;
    let masks = subset_masks(g);
    let pos = |m: usize| masks.binary_search(&m).expect("translate of a nonempty subset");
    let poset = Poset::new(masks.len(), |i, j| masks[i] & masks[j] == masks[j]).expect("reverse inclusion");
    let one = 1usize << g.identity();
    let y = (0..masks.len()).filter(|&i| masks[i] & one != 0).collect();
    let action = (0..g.order()).map(|a| masks.iter().map(|&m| pos(translate(g, a, m))).collect()).collect();
    Ok(McAlisterTriple { poset, y, group: g.clone(), action })
}

/// Birget-Rhodes expansion of a finite group, built as a P-semigroup.
pub fn build_birget_rhodes(g: &Group) -> Result<InverseSemigroup, ConstructionError> {
    let (s, _) = build_mcalister_p(&birget_rhodes_triple(g)?)?;
    Ok(s)
}

/// The semilattice of nonempty subsets of `G` under union, with the
/// translation action of `G`.
pub fn finite_subsets(g: &Group) -> Result<(InverseSemigroup, Vec<Vec<usize>>), ConstructionError> {
    expansion_guard(g)?;
    let masks = subset_masks(g);
    let pos = |m: usize| masks.binary_search(&m).expect("union of nonempty subsets");
    let table = masks.iter().map(|&a| masks.iter().map(|&b| pos(a | b)).collect()).collect();
    let e = build_semilattice(table)?;
    let action = (0..g.order()).map(|a| masks.iter().map(|&m| pos(translate(g, a, m))).collect()).collect();
    Ok((e, action))
}

/// `P_fin(G) ⋊ G` together with the embedding of the Birget-Rhodes
/// expansion, `(A, g) ↦ (A, g)`.
pub fn birget_rhodes_in_semidirect(
    g: &Group,
) -> Result<(InverseSemigroup, InverseSemigroup, Vec<usize>), ConstructionError> {
    let triple = birget_rhodes_triple(g)?;
    let (br, pairs) = build_mcalister_p(&triple)?;
    let (e, action) = finite_subsets(g)?;
    let big = build_semidirect_product(&e, g, &action)?;
    // the poset X and the semilattice share the bitmask numbering
    let embed: Vec<usize> = pairs.iter().map(|&(a, h)| a * g.order() + h).collect();
    if !crate::iso::is_homomorphism(&br, &big, &embed) {
        return Err(ConstructionError::IdentityFails("expansion does not embed".into()));
    }
    Ok((big, br, embed))
}

/// `B_k(S)`: element `s E_ij` (`s` nonzero) has index `(i*k + j)*(|S|-1) + r`
/// with `r` the rank of `s` among nonzero elements; zero is last. Returns the
/// embedding `s ↦ s E_11`.
pub fn build_matrix_enlargement(
    s: &InverseSemigroup,
    k: usize,
) -> Result<(InverseSemigroup, Vec<usize>), ConstructionError> {
    build_matrix_enlargement_with_limit(s, k, DEFAULT_SIZE_LIMIT)
}

pub fn build_matrix_enlargement_with_limit(
    s: &InverseSemigroup,
    k: usize,
    limit: usize,
) -> Result<(InverseSemigroup, Vec<usize>), ConstructionError> {
    let zero = s.zero().ok_or(ConstructionError::NoZero)?;
    s.identity().ok_or(ConstructionError::NoIdentity)?;
    let nz: Vec<usize> = s.elements().filter(|&a| a != zero).collect();
    let r = nz.len();
    let n = k * k * r + 1;
    guard("matrix enlargement", n, limit)?;
    let bz = n - 1;
    let rank = |a: usize| nz.binary_search(&a).unwrap();
    let idx = |i: usize, j: usize, a: usize| (i * k + j) * r + rank(a);
    let mut table = vec![vec![bz; n]; n];
    for (i, j, a) in iproduct3(k, k, r) {
        for (l, m, b) in iproduct3(k, k, r) {
            let p = s.mul(nz[a], nz[b]);
            if j == l && p != zero {
                table[(i * k + j) * r + a][(l * k + m) * r + b] = idx(i, m, p);
            }
        }
    }
    let names = s.names().map(|ns| {
        let mut out: Vec<String> =
            iproduct3(k, k, r).map(|(i, j, a)| format!("{}E{}{}", ns[nz[a]], i + 1, j + 1)).collect();
        out.push("0".into());
        out
    });
    let b = InverseSemigroup::from_table(table, names)?;
    let embed = s.elements().map(|a| if a == zero { bz } else { idx(0, 0, a) }).collect();
    Ok((b, embed))
}

/// Adjoins a new zero as the last element, unless one exists already. The
/// one-element semigroup counts as having none, so it becomes the 2-chain.
pub fn adjoin_zero(s: &InverseSemigroup) -> Result<InverseSemigroup, ConstructionError> {
    if s.zero().is_some() && s.size() > 1 {
        warn!("semigroup already has a zero; returning it unchanged");
        return Ok(s.clone());
    }
    let n = s.size();
    let mut table = s.table();
    for row in &mut table {
        row.push(n);
    }
    table.push(vec![n; n + 1]);
    let names = s.names().map(|ns| ns.iter().cloned().chain(["0".to_string()]).collect());
    Ok(InverseSemigroup::from_table(table, names)?)
}

/// Adjoins a new identity as the last element, unless one exists already
/// (again treating the one-element semigroup as lacking one).
pub fn adjoin_identity(s: &InverseSemigroup) -> Result<InverseSemigroup, ConstructionError> {
    if s.identity().is_some() && s.size() > 1 {
        warn!("semigroup already has an identity; returning it unchanged");
        return Ok(s.clone());
    }
    let n = s.size();
    let mut table = s.table();
    for (a, row) in table.iter_mut().enumerate() {
        row.push(a);
    }
    table.push((0..=n).collect());
    let names = s.names().map(|ns| ns.iter().cloned().chain(["1".to_string()]).collect());
    Ok(InverseSemigroup::from_table(table, names)?)
}

/// `S × T` with `(a, b)` at index `a*|T| + b`.
pub fn direct_product(s: &InverseSemigroup, t: &InverseSemigroup) -> Result<InverseSemigroup, ConstructionError> {
    let m = t.size();
    let n = s.size() * m;
    guard("direct product", n, DEFAULT_SIZE_LIMIT)?;
    let mut table = vec![vec![0; n]; n];
    for a in s.elements() {
        for b in t.elements() {
            for c in s.elements() {
                for d in t.elements() {
                    table[a * m + b][c * m + d] = s.mul(a, c) * m + t.mul(b, d);
                }
            }
        }
    }
    Ok(InverseSemigroup::from_table(table, None)?)
}

pub fn build_group(table: Vec<Vec<usize>>) -> Result<Group, ConstructionError> {
    Ok(Group::from_table(table)?)
}

/// One representative of every isomorphism class of semilattices with at
/// most `max_n` elements, smallest first.
pub fn semilattices_up_to_iso(max_n: usize) -> Vec<InverseSemigroup> {
    let mut out: Vec<InverseSemigroup> = Vec::new();
    for n in 1..=max_n {
        let mut found: Vec<InverseSemigroup> = Vec::new();
        // orders compatible with the index order; every finite poset has a
        // linear extension, so nothing is lost up to isomorphism
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for bits in 0u32..1 << pairs.len() {
            let rel = |a: usize, b: usize| {
                a == b || (a < b && bits >> pairs.iter().position(|&p| p == (a, b)).unwrap() & 1 == 1)
            };
            let Some(p) = Poset::new(n, rel) else { continue };
            let meet = |a: usize, b: usize| {
                let lower: Vec<usize> = (0..n).filter(|&z| p.le(z, a) && p.le(z, b)).collect();
                lower.iter().copied().find(|&z| lower.iter().all(|&l| p.le(l, z)))
            };
            let mut table = vec![vec![0; n]; n];
            let mut ok = true;
            'rows: for a in 0..n {
                for b in 0..n {
                    match meet(a, b) {
                        Some(m) => table[a][b] = m,
                        None => {
                            ok = false;
                            break 'rows;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let sl = build_semilattice(table).expect("meet table of a meet-semilattice");
            if !found.iter().any(|f| are_isomorphic(f, &sl)) {
                found.push(sl);
            }
        }
        out.extend(found);
    }
    out
}

/// A named fixture.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub semigroup: InverseSemigroup,
}

/// The fixture catalog used by the test suites and the CLI.
pub fn catalog() -> Vec<CatalogEntry> {
    let z2 = Group::cyclic(2);
    let (pfin_z2, _, _) = birget_rhodes_in_semidirect(&z2).expect("fixture");
    let entries: Vec<(&'static str, InverseSemigroup)> = vec![
        ("trivial", Group::trivial().into_semigroup()),
        ("SL2", two_chain()),
        ("chain3", chain(3)),
        ("diamond", diamond()),
        ("Z2", z2.clone().into_semigroup()),
        ("Z3", Group::cyclic(3).into_semigroup()),
        ("K4", Group::klein().into_semigroup()),
        ("B5", b5()),
        ("B2(Z2)", build_brandt(&z2, 2).expect("fixture")),
        ("B5+1", adjoin_identity(&b5()).expect("fixture")),
        ("Z2+0", adjoin_zero(z2.as_semigroup()).expect("fixture")),
        ("sym1", build_symmetric_inverse_monoid(1).expect("fixture")),
        ("sym2", build_symmetric_inverse_monoid(2).expect("fixture")),
        ("BR(Z2)", build_birget_rhodes(&z2).expect("fixture")),
        ("BR(Z3)", build_birget_rhodes(&Group::cyclic(3)).expect("fixture")),
        ("diamond*Z2", build_semidirect_product(&diamond(), &z2, &diamond_swap()).expect("fixture")),
        ("Pfin(Z2)*Z2", pfin_z2),
        ("B2(chain3)", build_matrix_enlargement(&chain(3), 2).expect("fixture").0),
        ("SL2xSL2", direct_product(&two_chain(), &two_chain()).expect("fixture")),
    ];
    entries.into_iter().map(|(name, semigroup)| CatalogEntry { name, semigroup }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::isomorphism;
    use crate::structure::structural_profile;

    #[test]
    fn semilattices() {
        assert_eq!(two_chain().size(), 2);
        assert_eq!(chain(1).size(), 1);
        assert_eq!(diamond().size(), 4);
        assert!(matches!(build_semilattice(vec![vec![0, 0], vec![1, 1]]), Err(ConstructionError::NotASemilattice(_))));
        assert!(matches!(build_semilattice(vec![vec![1, 0], vec![0, 1]]), Err(ConstructionError::NotASemilattice(_))));
    }

    #[test]
    fn brandt_sizes() {
        let b = b5();
        assert_eq!(b.size(), 5);
        assert_eq!(b.name(1), "E12");
        assert_eq!(b.zero(), Some(4));
        assert!(are_isomorphic(&build_brandt(&Group::trivial(), 1).unwrap(), &two_chain()));
        assert_eq!(build_brandt(&Group::cyclic(2), 2).unwrap().size(), 9);
        assert!(matches!(
            build_brandt_with_limit(&Group::cyclic(2), 5, 20),
            Err(ConstructionError::TooLarge { size: 51, .. })
        ));
    }

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        let sizes: Vec<usize> = (1..=3).map(|k| build_symmetric_inverse_monoid(k).unwrap().size()).collect();
        assert_eq!(sizes, vec![2, 7, 34]);
        assert!(matches!(build_symmetric_inverse_monoid(5), Err(ConstructionError::TooLarge { size: 1546, .. })));
    }

    #[test]
    fn semidirect_products() {
        let z2 = Group::cyclic(2);
        let s = build_semidirect_product(&diamond(), &z2, &diamond_swap()).unwrap();
        assert_eq!(s.size(), 8);
        assert_eq!(s.idempotents(), &[0, 2, 4, 6]);
        let triv = Group::trivial();
        let d = build_semidirect_product(&diamond(), &triv, &trivial_action(&diamond(), &triv)).unwrap();
        assert_eq!(d, diamond());
        let bad = vec![vec![0, 1, 2, 3], vec![0, 2, 2, 3]];
        assert!(build_semidirect_product(&diamond(), &z2, &bad).is_err());
        // swapping an atom with the bottom breaks the meet
        let not_auto = vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3]];
        assert_eq!(build_semidirect_product(&diamond(), &z2, &not_auto), Err(ConstructionError::NotAutomorphism(1)));
    }

    #[test]
    fn birget_rhodes_sizes() {
        // oracle: pairs (A, g) with identity and g in A, counted directly
        for (g, expected) in [(Group::trivial(), 1), (Group::cyclic(2), 3), (Group::cyclic(3), 8), (Group::klein(), 20)]
        {
            let count = (1usize..1 << g.order())
                .filter(|m| m & 1 << g.identity() != 0)
                .map(|m| m.count_ones() as usize)
                .sum::<usize>();
            assert_eq!(count, expected);
            assert_eq!(build_birget_rhodes(&g).unwrap().size(), expected);
        }
        assert!(matches!(build_birget_rhodes(&Group::cyclic(5)), Err(ConstructionError::TooLarge { .. })));
    }

    #[test]
    fn birget_rhodes_is_f_inverse_with_image_g() {
        for g in [Group::cyclic(2), Group::cyclic(3), Group::klein()] {
            let p = structural_profile(&build_birget_rhodes(&g).unwrap());
            assert!(p.f_inverse_classical && p.e_unitary && p.is_monoid);
            assert!(are_isomorphic(p.max_group.group.as_semigroup(), g.as_semigroup()));
        }
    }

    #[test]
    fn mcalister_trivial_triple() {
        let e = diamond();
        let ord = natural_order(&e);
        let t = McAlisterTriple {
            poset: ord.as_poset(),
            y: (0..4).collect(),
            group: Group::trivial(),
            action: vec![(0..4).collect()],
        };
        let (p, _) = build_mcalister_p(&t).unwrap();
        assert!(are_isomorphic(&p, &e));
        let bad = McAlisterTriple { y: vec![3], ..t };
        assert!(matches!(build_mcalister_p(&bad), Err(ConstructionError::InvalidTriple(_))));
    }

    #[test]
    fn matrix_enlargements() {
        let (b, embed) = build_matrix_enlargement(&two_chain(), 2).unwrap();
        assert!(isomorphism(&b, &b5()).is_some());
        assert_eq!(embed, vec![4, 0]);
        let (one, _) = build_matrix_enlargement(&chain(3), 1).unwrap();
        assert!(are_isomorphic(&one, &chain(3)));
        let s = chain(3);
        let (b, embed) = build_matrix_enlargement(&s, 2).unwrap();
        let (sub, _) = b.restrict(&embed).unwrap();
        assert!(are_isomorphic(&sub, &s));
        assert_eq!(
            build_matrix_enlargement(Group::cyclic(2).as_semigroup(), 2).unwrap_err(),
            ConstructionError::NoZero
        );
    }

    #[test]
    fn adjunctions_and_products() {
        assert!(are_isomorphic(&adjoin_zero(Group::trivial().as_semigroup()).unwrap(), &two_chain()));
        assert_eq!(adjoin_zero(&two_chain()).unwrap(), two_chain());
        assert_eq!(adjoin_identity(&b5()).unwrap().size(), 6);
        let p = direct_product(&two_chain(), &two_chain()).unwrap();
        assert_eq!(p.idempotents().len(), 4);
        assert!(are_isomorphic(&p, &diamond()));
    }

    #[test]
    fn semilattice_counts() {
        let counts: Vec<usize> =
            (1..=4).map(|n| semilattices_up_to_iso(4).iter().filter(|s| s.size() == n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
    }

    #[test]
    fn pfin_semidirect_contains_expansion() {
        let (big, br, embed) = birget_rhodes_in_semidirect(&Group::cyclic(2)).unwrap();
        assert_eq!(big.size(), 6);
        assert_eq!(br.size(), 3);
        assert!(big.is_closed(&embed));
    }

    #[test]
    fn catalog_is_valid_and_named_uniquely() {
        let cat = catalog();
        let names: BTreeSet<&str> = cat.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), cat.len());
    }
}
