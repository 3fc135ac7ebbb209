//! Morita contexts: table representation, axiom verification, derived
//! identities, the two étale structures on the bimodule and its germs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::error::{ensure, Violation};
use crate::germ::GermSpace;
use crate::iso::is_isomorphism;
use crate::poset::Poset;
use crate::report::{find_counterexample, VerificationReport};
use crate::semigroup::InverseSemigroup;
use crate::structure::{maximal_group_image, GroupImage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("table `{table}` should be {rows}x{cols}")]
    Shape { table: &'static str, rows: usize, cols: usize },
    #[error("table `{table}` entry ({row}, {col}) = {value} is out of range")]
    OutOfRange { table: &'static str, row: usize, col: usize, value: usize },
    #[error("bimodule must be nonempty")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimoduleError {
    #[error("context does not verify")]
    ContextNotVerified,
    #[error("the orders induced by the two inner products differ at {0:?}")]
    OrdersDiffer(Vec<usize>),
    #[error("{side} germ action is not free at {witness:?}")]
    ActionNotFree { side: &'static str, witness: Vec<usize> },
    #[error("{side} germ action is not transitive")]
    ActionNotTransitive { side: &'static str },
    #[error(transparent)]
    Violation(#[from] Violation),
}

/// Raw tables of a context, row-major: `left[s][x] = sx`, `right[x][t] = xt`,
/// `ip_s[x][y] = ⟨x,y⟩`, `ip_t[x][y] = [x,y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextParts {
    pub s: InverseSemigroup,
    pub t: InverseSemigroup,
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
    pub ip_s: Vec<Vec<usize>>,
    pub ip_t: Vec<Vec<usize>>,
}

/// A candidate equivalence bimodule `X = {0..m}` between `S` and `T`.
/// Construction only checks table shapes; use [`verify_context`] for the
/// axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaContext {
    s: InverseSemigroup,
    t: InverseSemigroup,
    m: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    ip_s: Vec<usize>,
    ip_t: Vec<usize>,
}

fn flatten(
    table: &'static str,
    rows: Vec<Vec<usize>>,
    r: usize,
    c: usize,
    bound: usize,
) -> Result<Vec<usize>, ContextError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(ContextError::Shape { table, rows: r, cols: c });
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some(j) = row.iter().position(|&v| v >= bound) {
            return Err(ContextError::OutOfRange { table, row: i, col: j, value: row[j] });
        }
    }
    Ok(rows.into_iter().flatten().collect())
}

fn unflatten(flat: &[usize], cols: usize) -> Vec<Vec<usize>> {
    flat.chunks(cols).map(<[usize]>::to_vec).collect()
}

impl MoritaContext {
    pub fn from_parts(parts: ContextParts) -> Result<Self, ContextError> {
        let m = parts.ip_s.len();
        if m == 0 {
            return Err(ContextError::Empty);
        }
        let (ns, nt) = (parts.s.size(), parts.t.size());
        Ok(MoritaContext {
            left: flatten("left", parts.left, ns, m, m)?,
            right: flatten("right", parts.right, m, nt, m)?,
            ip_s: flatten("ip_S", parts.ip_s, m, m, ns)?,
            ip_t: flatten("ip_T", parts.ip_t, m, m, nt)?,
            s: parts.s,
            t: parts.t,
            m,
        })
    }

    pub fn into_parts(self) -> ContextParts {
        ContextParts {
            left: unflatten(&self.left, self.m),
            right: unflatten(&self.right, self.t.size()),
            ip_s: unflatten(&self.ip_s, self.m),
            ip_t: unflatten(&self.ip_t, self.m),
            s: self.s,
            t: self.t,
        }
    }

    pub fn parts(&self) -> ContextParts {
        self.clone().into_parts()
    }

    pub fn s(&self) -> &InverseSemigroup {
        &self.s
    }

    pub fn t(&self) -> &InverseSemigroup {
        &self.t
    }

    /// Size of the bimodule.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.m
    }

    /// `sx`
    pub fn act_l(&self, s: usize, x: usize) -> usize {
        self.left[s * self.m + x]
    }

    /// `xt`
    pub fn act_r(&self, x: usize, t: usize) -> usize {
        self.right[x * self.t.size() + t]
    }

    /// `⟨x,y⟩`
    pub fn ip_s(&self, x: usize, y: usize) -> usize {
        self.ip_s[x * self.m + y]
    }

    /// `[x,y]`
    pub fn ip_t(&self, x: usize, y: usize) -> usize {
        self.ip_t[x * self.m + y]
    }

    /// `p(x) = ⟨x,x⟩`
    pub fn p(&self, x: usize) -> usize {
        self.ip_s(x, x)
    }

    /// `q(x) = [x,x]`
    pub fn q(&self, x: usize) -> usize {
        self.ip_t(x, x)
    }
}

/// Checks both actions, surjectivity of the inner products and the seven
/// axioms, exhaustively.
pub fn verify_context(ctx: &MoritaContext) -> VerificationReport {
    verify_context_skipping(ctx, &[])
}

/// [`verify_context`] with the listed check ids left out.
pub fn verify_context_skipping(ctx: &MoritaContext, skip: &[&str]) -> VerificationReport {
    let (s, t, m) = (ctx.s(), ctx.t(), ctx.m());
    let (ns, nt) = (s.size(), t.size());
    let mut r = VerificationReport::new(format!("context verification (|S|={ns}, |T|={nt}, |X|={m})"));
    let mut check = |id: &str, detail: &str, f: &dyn Fn() -> Option<Vec<usize>>| {
        if !skip.contains(&id) {
            r.record(id, detail, f());
        }
    };
    check("left-action", "(st)x = s(tx)", &|| {
        find_counterexample([ns, ns, m], |[a, b, x]| ctx.act_l(s.mul(a, b), x) == ctx.act_l(a, ctx.act_l(b, x)))
    });
    check("right-action", "x(tu) = (xt)u", &|| {
        find_counterexample([m, nt, nt], |[x, a, b]| ctx.act_r(x, t.mul(a, b)) == ctx.act_r(ctx.act_r(x, a), b))
    });
    check("actions-commute", "(sx)t = s(xt)", &|| {
        find_counterexample([ns, m, nt], |[a, x, b]| ctx.act_r(ctx.act_l(a, x), b) == ctx.act_l(a, ctx.act_r(x, b)))
    });
    check("surjective-S", "every s is some ⟨x,y⟩", &|| {
        let hit: BTreeSet<usize> = ctx.ip_s.iter().copied().collect();
        s.elements().find(|a| !hit.contains(a)).map(|a| vec![a])
    });
    check("surjective-T", "every t is some [x,y]", &|| {
        let hit: BTreeSet<usize> = ctx.ip_t.iter().copied().collect();
        t.elements().find(|a| !hit.contains(a)).map(|a| vec![a])
    });
    check("axiom-1", "⟨sx,y⟩ = s⟨x,y⟩", &|| {
        find_counterexample([ns, m, m], |[a, x, y]| ctx.ip_s(ctx.act_l(a, x), y) == s.mul(a, ctx.ip_s(x, y)))
    });
    check("axiom-2", "⟨y,x⟩ = ⟨x,y⟩*", &|| {
        find_counterexample([m, m], |[x, y]| ctx.ip_s(y, x) == s.inv(ctx.ip_s(x, y)))
    });
    check("axiom-3", "⟨x,x⟩x = x", &|| find_counterexample([m], |[x]| ctx.act_l(ctx.p(x), x) == x));
    check("axiom-4", "[x,yt] = [x,y]t", &|| {
        find_counterexample([m, m, nt], |[x, y, b]| ctx.ip_t(x, ctx.act_r(y, b)) == t.mul(ctx.ip_t(x, y), b))
    });
    check("axiom-5", "[y,x] = [x,y]*", &|| {
        find_counterexample([m, m], |[x, y]| ctx.ip_t(y, x) == t.inv(ctx.ip_t(x, y)))
    });
    check("axiom-6", "x[x,x] = x", &|| find_counterexample([m], |[x]| ctx.act_r(x, ctx.q(x)) == x));
    check("axiom-7", "⟨x,y⟩z = x[y,z]", &|| {
        find_counterexample([m, m, m], |[x, y, z]| ctx.act_l(ctx.ip_s(x, y), z) == ctx.act_r(x, ctx.ip_t(y, z)))
    });
    r
}

pub fn is_verified(ctx: &MoritaContext) -> bool {
    verify_context(ctx).all_pass()
}

/// The ten consequences of the axioms, checked exhaustively on a verified
/// context.
pub fn derived_identities(ctx: &MoritaContext) -> Result<VerificationReport, BimoduleError> {
    if !is_verified(ctx) {
        return Err(BimoduleError::ContextNotVerified);
    }
    let (s, t, m) = (ctx.s(), ctx.t(), ctx.m());
    let (ns, nt) = (s.size(), t.size());
    let (l, r) = (|a, x| ctx.act_l(a, x), |x, b| ctx.act_r(x, b));
    let (ips, ipt) = (|x, y| ctx.ip_s(x, y), |x, y| ctx.ip_t(x, y));
    let mut rep = VerificationReport::new(format!("derived identities (|X|={m})"));
    rep.record(
        "identity-1",
        "⟨x,y⟩⟨z,w⟩ = ⟨x[y,z],w⟩",
        find_counterexample([m, m, m, m], |[x, y, z, w]| s.mul(ips(x, y), ips(z, w)) == ips(r(x, ipt(y, z)), w)),
    );
    rep.record(
        "identity-2",
        "[x,y][z,w] = [x,⟨y,z⟩w]",
        find_counterexample([m, m, m, m], |[x, y, z, w]| t.mul(ipt(x, y), ipt(z, w)) == ipt(x, l(ips(y, z), w))),
    );
    rep.record(
        "identity-3",
        "⟨x,sy⟩ = ⟨x,y⟩s*",
        find_counterexample([m, ns, m], |[x, a, y]| ips(x, l(a, y)) == s.mul(ips(x, y), s.inv(a))),
    );
    rep.record(
        "identity-4",
        "[xt,y] = t*[x,y]",
        find_counterexample([m, nt, m], |[x, b, y]| ipt(r(x, b), y) == t.mul(t.inv(b), ipt(x, y))),
    );
    rep.record(
        "identity-5",
        "⟨sx,sx⟩ = s⟨x,x⟩s*",
        find_counterexample([ns, m], |[a, x]| ctx.p(l(a, x)) == s.mul3(a, ctx.p(x), s.inv(a))),
    );
    rep.record(
        "identity-6",
        "[xt,xt] = t*[x,x]t",
        find_counterexample([m, nt], |[x, b]| ctx.q(r(x, b)) == t.mul3(t.inv(b), ctx.q(x), b)),
    );
    rep.record(
        "identity-7",
        "⟨x,x⟩ ∈ E(S) and [x,x] ∈ E(T)",
        find_counterexample([m], |[x]| s.is_idempotent(ctx.p(x)) && t.is_idempotent(ctx.q(x))),
    );
    let p_img: BTreeSet<usize> = ctx.points().map(|x| ctx.p(x)).collect();
    let q_img: BTreeSet<usize> = ctx.points().map(|x| ctx.q(x)).collect();
    let missing = s
        .idempotents()
        .iter()
        .find(|e| !p_img.contains(e))
        .map(|&e| vec![0, e])
        .or_else(|| t.idempotents().iter().find(|f| !q_img.contains(f)).map(|&f| vec![1, f]));
    rep.record("identity-8", "p and q are onto E(S) and E(T)", missing);
    rep.record(
        "identity-9",
        "⟨xt,y⟩ = ⟨x,yt*⟩ and ⟨x,yt⟩ = ⟨xt*,y⟩",
        find_counterexample([m, nt, m], |[x, b, y]| {
            ips(r(x, b), y) == ips(x, r(y, t.inv(b))) && ips(x, r(y, b)) == ips(r(x, t.inv(b)), y)
        }),
    );
    rep.record(
        "identity-10",
        "[sx,y] = [x,s*y] and [x,sy] = [s*x,y]",
        find_counterexample([ns, m, m], |[a, x, y]| {
            ipt(l(a, x), y) == ipt(x, l(s.inv(a), y)) && ipt(x, l(a, y)) == ipt(l(s.inv(a), x), y)
        }),
    );
    Ok(rep)
}

/// `ε_x(e) = [ex,ex]` and `η_x(f) = ⟨xf,xf⟩`, keyed by idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPair {
    pub eps: BTreeMap<usize, usize>,
    pub eta: BTreeMap<usize, usize>,
}

/// The pair of semilattice homomorphisms attached to `x`, verified.
pub fn hom_pair(ctx: &MoritaContext, x: usize) -> Result<HomPair, Violation> {
    let (s, t) = (ctx.s(), ctx.t());
    let eps: BTreeMap<usize, usize> = s.idempotents().iter().map(|&e| (e, ctx.q(ctx.act_l(e, x)))).collect();
    let eta: BTreeMap<usize, usize> = t.idempotents().iter().map(|&f| (f, ctx.p(ctx.act_r(x, f)))).collect();
    for &e in s.idempotents() {
        for &f in s.idempotents() {
            ensure(t.mul(eps[&e], eps[&f]) == eps[&s.mul(e, f)], "ε_x is a homomorphism", &[x, e, f])?;
        }
    }
    for &e in t.idempotents() {
        for &f in t.idempotents() {
            ensure(s.mul(eta[&e], eta[&f]) == eta[&t.mul(e, f)], "η_x is a homomorphism", &[x, e, f])?;
        }
    }
    Ok(HomPair { eps, eta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A set with a one-sided action and an anchor map into the idempotents.
/// `action[a][x]` is `ax` on the left or `xa` on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleSet {
    pub side: Side,
    pub action: Vec<Vec<usize>>,
    pub anchor: Vec<usize>,
}

impl EtaleSet {
    pub fn carrier(&self) -> usize {
        self.anchor.len()
    }

    /// Checks `p(x)x = x` and `p(sx) = s p(x) s*` (dually on the right).
    pub fn validate(&self, sg: &InverseSemigroup) -> Result<(), Violation> {
        for x in 0..self.carrier() {
            let p = self.anchor[x];
            ensure(sg.is_idempotent(p), "anchor lands in idempotents", &[x])?;
            ensure(self.action[p][x] == x, "anchor acts trivially", &[x])?;
            for a in sg.elements() {
                let expected = match self.side {
                    Side::Left => sg.mul3(a, p, sg.inv(a)),
                    Side::Right => sg.mul3(sg.inv(a), p, a),
                };
                ensure(self.anchor[self.action[a][x]] == expected, "anchor is equivariant", &[a, x])?;
            }
        }
        Ok(())
    }

    /// `x ≤ y` iff `x = p(x)y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.action[self.anchor[x]][y] == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleStructures {
    pub left: EtaleSet,
    pub right: EtaleSet,
    pub order: Poset,
}

pub fn left_etale(ctx: &MoritaContext) -> EtaleSet {
    EtaleSet {
        side: Side::Left,
        action: ctx.s().elements().map(|a| ctx.points().map(|x| ctx.act_l(a, x)).collect()).collect(),
        anchor: ctx.points().map(|x| ctx.p(x)).collect(),
    }
}

pub fn right_etale(ctx: &MoritaContext) -> EtaleSet {
    EtaleSet {
        side: Side::Right,
        action: ctx.t().elements().map(|b| ctx.points().map(|x| ctx.act_r(x, b)).collect()).collect(),
        anchor: ctx.points().map(|x| ctx.q(x)).collect(),
    }
}

/// Both étale structures, their common order, monotonicity of the inner
/// products and the meet property of bounded pairs.
pub fn etale_structures(ctx: &MoritaContext) -> Result<EtaleStructures, BimoduleError> {
    let left = left_etale(ctx);
    let right = right_etale(ctx);
    left.validate(ctx.s())?;
    right.validate(ctx.t())?;
    let m = ctx.m();
    if let Some(w) = find_counterexample([m, m], |[x, y]| left.le(x, y) == right.le(x, y)) {
        return Err(BimoduleError::OrdersDiffer(w));
    }
    let order = Poset::new(m, |x, y| left.le(x, y))
        .ok_or_else(|| Violation::new("induced relation is a partial order", Vec::new()))?;
    let (s, t) = (ctx.s(), ctx.t());
    for x in 0..m {
        for xx in (0..m).filter(|&xx| order.le(x, xx)) {
            for y in 0..m {
                for yy in (0..m).filter(|&yy| order.le(y, yy)) {
                    ensure(s.le(ctx.ip_s(x, y), ctx.ip_s(xx, yy)), "⟨,⟩ is monotone", &[x, xx, y, yy])?;
                    ensure(t.le(ctx.ip_t(x, y), ctx.ip_t(xx, yy)), "[,] is monotone", &[x, xx, y, yy])?;
                }
            }
        }
    }
    for x in 0..m {
        for y in (0..m).filter(|&y| order.le(y, x)) {
            for z in (0..m).filter(|&z| order.le(z, x)) {
                let u = ctx.act_l(ctx.p(y), z);
                ensure(u == ctx.act_l(ctx.p(z), y), "p(y)z = p(z)y below a common bound", &[x, y, z])?;
                let glb = order.le(u, y)
                    && order.le(u, z)
                    && (0..m).all(|w| !(order.le(w, y) && order.le(w, z)) || order.le(w, u));
                ensure(glb, "p(y)z is the meet", &[x, y, z])?;
            }
        }
    }
    Ok(EtaleStructures { left, right, order })
}

/// Germs of the bimodule: classes of "has a common lower bound".
pub fn bimodule_germs(ctx: &MoritaContext) -> Result<GermSpace, BimoduleError> {
    let order = etale_structures(ctx)?.order;
    let m = ctx.m();
    Ok(GermSpace::from_equivalence(m, |x, y| (0..m).any(|z| order.le(z, x) && order.le(z, y)))?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermGroupIso {
    pub germs: GermSpace,
    pub group_s: GroupImage,
    pub group_t: GroupImage,
    /// `left[g][y]` is `g·y`.
    pub left: Vec<Vec<usize>>,
    /// `right[y][h]` is `y·h`.
    pub right: Vec<Vec<usize>>,
    /// `iso[g] = h` where `g·[x0] = [x0]·h`, `x0 = 0`.
    pub iso: Vec<usize>,
}

/// Germ actions of the maximal group images on the bimodule germs, and the
/// group isomorphism they induce.
pub fn germ_group_isomorphism(ctx: &MoritaContext) -> Result<GermGroupIso, BimoduleError> {
    if !is_verified(ctx) {
        return Err(BimoduleError::ContextNotVerified);
    }
    let germs = bimodule_germs(ctx)?;
    let (s, t) = (ctx.s(), ctx.t());
    let group_s = maximal_group_image(s);
    let group_t = maximal_group_image(t);
    let k = germs.class_count();
    let (gs, gt) = (group_s.group.order(), group_t.group.order());
    let mut left = vec![vec![usize::MAX; k]; gs];
    for a in s.elements() {
        for x in ctx.points() {
            let (g, y, img) = (group_s.sigma[a], germs.class_of(x), germs.class_of(ctx.act_l(a, x)));
            ensure(left[g][y] == usize::MAX || left[g][y] == img, "left germ action is well defined", &[a, x])?;
            left[g][y] = img;
        }
    }
    let mut right = vec![vec![usize::MAX; gt]; k];
    for x in ctx.points() {
        for b in t.elements() {
            let (y, h, img) = (germs.class_of(x), group_t.sigma[b], germs.class_of(ctx.act_r(x, b)));
            ensure(right[y][h] == usize::MAX || right[y][h] == img, "right germ action is well defined", &[x, b])?;
            right[y][h] = img;
        }
    }
    for g in 0..gs {
        for y in 0..k {
            if left[g][y] == y && g != group_s.group.identity() {
                return Err(BimoduleError::ActionNotFree { side: "left", witness: vec![g, y] });
            }
        }
    }
    for y in 0..k {
        for h in 0..gt {
            if right[y][h] == y && h != group_t.group.identity() {
                return Err(BimoduleError::ActionNotFree { side: "right", witness: vec![y, h] });
            }
        }
    }
    if (0..gs).map(|g| left[g][0]).collect::<BTreeSet<_>>().len() != k {
        return Err(BimoduleError::ActionNotTransitive { side: "left" });
    }
    if (0..gt).map(|h| right[0][h]).collect::<BTreeSet<_>>().len() != k {
        return Err(BimoduleError::ActionNotTransitive { side: "right" });
    }
    for g in 0..gs {
        for y in 0..k {
            for h in 0..gt {
                ensure(left[g][right[y][h]] == right[left[g][y]][h], "germ actions commute", &[g, y, h])?;
            }
        }
    }
    let iso: Vec<usize> =
        (0..gs).map(|g| (0..gt).find(|&h| right[0][h] == left[g][0]).expect("right action is transitive")).collect();
    ensure(
        is_isomorphism(group_s.group.as_semigroup(), group_t.group.as_semigroup(), &iso),
        "induced map is a group isomorphism",
        &iso,
    )?;
    Ok(GermGroupIso { germs, group_s, group_t, left, right, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{b5, two_chain};
    use crate::semigroup::Group;

    /// X = {0, E11, E21} inside B5, as indices 0, 1, 2.
    fn b5_sl2() -> MoritaContext {
        let s = b5();
        let t = two_chain();
        let xs = [4, 0, 2];
        let pos = |v: usize| xs.iter().position(|&x| x == v).unwrap();
        // SL2 sits in B5 as 0 -> zero, 1 -> E11
        let t_in_s = [4, 0];
        let s_of_t = |v: usize| if v == 4 { 0 } else { 1 };
        let left = s.elements().map(|a| xs.iter().map(|&x| pos(s.mul(a, x))).collect()).collect();
        let right = xs.iter().map(|&x| t.elements().map(|b| pos(s.mul(x, t_in_s[b]))).collect()).collect();
        let ip_s = xs.iter().map(|&x| xs.iter().map(|&y| s.mul(x, s.inv(y))).collect()).collect();
        let ip_t = xs.iter().map(|&x| xs.iter().map(|&y| s_of_t(s.mul(s.inv(x), y))).collect()).collect();
        MoritaContext::from_parts(ContextParts { s, t, left, right, ip_s, ip_t }).unwrap()
    }

    #[test]
    fn b5_sl2_context_verifies() {
        let ctx = b5_sl2();
        let r = verify_context(&ctx);
        assert!(r.all_pass(), "{r}");
        assert_eq!(r.checks.len(), 12);
        let d = derived_identities(&ctx).unwrap();
        assert!(d.all_pass(), "{d}");
        assert_eq!(d.checks.len(), 10);
    }

    #[test]
    fn corrupted_inner_product_breaks_symmetry() {
        let mut parts = b5_sl2().into_parts();
        parts.ip_s[1][2] = 0;
        let ctx = MoritaContext::from_parts(parts).unwrap();
        let r = verify_context(&ctx);
        assert_eq!(r.get("axiom-2").unwrap().witness, Some(vec![1, 2]));
        assert_eq!(derived_identities(&ctx), Err(BimoduleError::ContextNotVerified));
    }

    #[test]
    fn shapes_are_checked() {
        let mut parts = b5_sl2().into_parts();
        parts.right.pop();
        assert_eq!(
            MoritaContext::from_parts(parts).unwrap_err(),
            ContextError::Shape { table: "right", rows: 3, cols: 2 }
        );
        let mut parts = b5_sl2().into_parts();
        parts.ip_t[0][0] = 7;
        assert!(matches!(MoritaContext::from_parts(parts), Err(ContextError::OutOfRange { table: "ip_T", .. })));
    }

    #[test]
    fn hom_pair_on_b5() {
        let ctx = b5_sl2();
        // x = E11 has ⟨x,x⟩ = E11
        let h = hom_pair(&ctx, 1).unwrap();
        assert_eq!(h.eps[&0], 1);
        assert_eq!(h.eps[&4], 0);
        for (&e, &f) in &h.eps {
            if ctx.s().le(e, ctx.p(1)) {
                assert_eq!(h.eta[&f], e);
            }
        }
    }

    #[test]
    fn etale_order_on_b5() {
        let ctx = b5_sl2();
        let st = etale_structures(&ctx).unwrap();
        assert!(st.order.le(0, 1) && st.order.le(0, 2));
        assert!(!st.order.le(1, 2) && !st.order.le(2, 1));
        st.left.validate(ctx.s()).unwrap();
    }

    #[test]
    fn germ_groups_of_b5_context_are_trivial() {
        let g = germ_group_isomorphism(&b5_sl2()).unwrap();
        assert_eq!(g.germs.class_count(), 1);
        assert_eq!(g.iso, vec![0]);
    }

    #[test]
    fn group_over_itself() {
        let g = Group::cyclic(3).into_semigroup();
        let n = g.size();
        let table = g.table();
        let ip_s = (0..n).map(|x| (0..n).map(|y| g.mul(x, g.inv(y))).collect()).collect();
        let ip_t = (0..n).map(|x| (0..n).map(|y| g.mul(g.inv(x), y)).collect()).collect();
        let ctx = MoritaContext::from_parts(ContextParts {
            s: g.clone(),
            t: g.clone(),
            left: table.clone(),
            right: table,
            ip_s,
            ip_t,
        })
        .unwrap();
        let iso = germ_group_isomorphism(&ctx).unwrap();
        assert_eq!(iso.germs.class_count(), 3);
        assert_eq!(iso.iso, vec![0, 1, 2]);
    }
}
