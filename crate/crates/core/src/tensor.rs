//! Tensor products of acts, composition of contexts, the opposite context
//! and the reconstruction of `S` from `X ⊗_T X`.

use thiserror::Error;

use crate::bimodule::{is_verified, ContextParts, MoritaContext};
use crate::dsu::DisjointSet;
use crate::error::{ensure, Violation};
use crate::germ::GermSpace;
use crate::semigroup::InverseSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("{0} is not an action")]
    ActionInvalid(&'static str),
    #[error("the middle semigroups differ")]
    MiddleMismatch,
    #[error("input context does not verify")]
    NotVerified,
    #[error("{what} is not constant on tensor classes, witness {witness:?}")]
    WellDefinednessBroken { what: &'static str, witness: Vec<usize> },
}

/// `X ⊗_T Y`: the pairs `(x, y)` modulo the least equivalence identifying
/// `(xt, y)` with `(x, ty)`. Classes are numbered by their least pair in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorProduct {
    nx: usize,
    ny: usize,
    germs: GermSpace,
}

impl TensorProduct {
    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.germs.class_of(x * self.ny + y)
    }

    pub fn class_count(&self) -> usize {
        self.germs.class_count()
    }

    /// Least pair of class `c`.
    pub fn rep(&self, c: usize) -> (usize, usize) {
        let r = self.germs.rep(c);
        (r / self.ny, r % self.ny)
    }

    pub fn members(&self, c: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.germs.members(c).map(|r| (r / self.ny, r % self.ny))
    }

    pub fn left_size(&self) -> usize {
        self.nx
    }

    pub fn right_size(&self) -> usize {
        self.ny
    }

    /// Checks that a bilinear map is constant on classes, i.e. factors
    /// through the tensor product.
    pub fn factors<V: PartialEq>(&self, f: impl Fn(usize, usize) -> V) -> bool {
        (0..self.class_count()).all(|c| {
            let (x0, y0) = self.rep(c);
            let v = f(x0, y0);
            self.members(c).all(|(x, y)| f(x, y) == v)
        })
    }
}

/// `right_x[x][t] = xt`, `left_y[t][y] = ty`.
pub fn tensor_product(
    t: &InverseSemigroup,
    right_x: &[Vec<usize>],
    left_y: &[Vec<usize>],
) -> Result<TensorProduct, TensorError> {
    let nx = right_x.len();
    let ny = left_y.first().map_or(0, Vec::len);
    let nt = t.size();
    if right_x.iter().any(|r| r.len() != nt || r.iter().any(|&v| v >= nx))
        || (0..nx).any(|x| (0..nt).any(|a| (0..nt).any(|b| right_x[x][t.mul(a, b)] != right_x[right_x[x][a]][b])))
    {
        return Err(TensorError::ActionInvalid("right action on X"));
    }
    if left_y.len() != nt
        || left_y.iter().any(|r| r.len() != ny || r.iter().any(|&v| v >= ny))
        || (0..ny).any(|y| (0..nt).any(|a| (0..nt).any(|b| left_y[t.mul(a, b)][y] != left_y[a][left_y[b][y]])))
    {
        return Err(TensorError::ActionInvalid("left action on Y"));
    }
    let mut dsu = DisjointSet::new(nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            for a in 0..nt {
                dsu.union(right_x[x][a] * ny + y, x * ny + left_y[a][y]);
            }
        }
    }
    let tp = TensorProduct { nx, ny, germs: GermSpace::from_dsu(&mut dsu) };
    debug_assert!((0..nx)
        .all(|x| (0..ny).all(|y| (0..nt).all(|a| tp.class_of(right_x[x][a], y) == tp.class_of(x, left_y[a][y])))));
    Ok(tp)
}

/// The context `(S, U, X ⊗_T Y)` built from `(S, T, X)` and `(T, U, Y)`.
/// Bimodule points are tensor classes.
pub fn compose_contexts(c1: &MoritaContext, c2: &MoritaContext) -> Result<MoritaContext, TensorError> {
    if c1.t() != c2.s() {
        return Err(TensorError::MiddleMismatch);
    }
    if !is_verified(c1) || !is_verified(c2) {
        return Err(TensorError::NotVerified);
    }
    let t = c1.t();
    let right_x: Vec<Vec<usize>> = c1.points().map(|x| t.elements().map(|b| c1.act_r(x, b)).collect()).collect();
    let left_y: Vec<Vec<usize>> = t.elements().map(|b| c2.points().map(|y| c2.act_l(b, y)).collect()).collect();
    let tp = tensor_product(t, &right_x, &left_y)?;
    let k = tp.class_count();
    let (s, u) = (c1.s(), c2.t());
    let broken = |what, witness: Vec<usize>| TensorError::WellDefinednessBroken { what, witness };

    let mut left = vec![vec![usize::MAX; k]; s.size()];
    for a in s.elements() {
        for c in 0..k {
            for (x, y) in tp.members(c) {
                let v = tp.class_of(c1.act_l(a, x), y);
                if left[a][c] != usize::MAX && left[a][c] != v {
                    return Err(broken("left action", vec![a, x, y]));
                }
                left[a][c] = v;
            }
        }
    }
    let mut right = vec![vec![usize::MAX; u.size()]; k];
    for c in 0..k {
        for b in u.elements() {
            for (x, y) in tp.members(c) {
                let v = tp.class_of(x, c2.act_r(y, b));
                if right[c][b] != usize::MAX && right[c][b] != v {
                    return Err(broken("right action", vec![x, y, b]));
                }
                right[c][b] = v;
            }
        }
    }
    let mut ip_s = vec![vec![usize::MAX; k]; k];
    let mut ip_u = vec![vec![usize::MAX; k]; k];
    for c in 0..k {
        for d in 0..k {
            for (x, y) in tp.members(c) {
                for (x2, y2) in tp.members(d) {
                    // ⟨x⊗y, x'⊗y'⟩ = ⟨x⟨y,y'⟩_T, x'⟩_S
                    let vs = c1.ip_s(c1.act_r(x, c2.ip_s(y, y2)), x2);
                    // [x⊗y, x'⊗y'] = [y, [x,x']_T y']_U
                    let vu = c2.ip_t(y, c2.act_l(c1.ip_t(x, x2), y2));
                    if ip_s[c][d] != usize::MAX && ip_s[c][d] != vs {
                        return Err(broken("⟨,⟩", vec![x, y, x2, y2]));
                    }
                    if ip_u[c][d] != usize::MAX && ip_u[c][d] != vu {
                        return Err(broken("[,]", vec![x, y, x2, y2]));
                    }
                    ip_s[c][d] = vs;
                    ip_u[c][d] = vu;
                }
            }
        }
    }
    Ok(MoritaContext::from_parts(ContextParts { s: s.clone(), t: u.clone(), left, right, ip_s, ip_t: ip_u })
        .expect("composite tables have the right shape"))
}

/// `(T, S, X)` with `t·x = xt*`, `x·s = s*x` and the inner products swapped.
pub fn opposite_context(ctx: &MoritaContext) -> MoritaContext {
    let (s, t) = (ctx.s(), ctx.t());
    let parts = ContextParts {
        s: t.clone(),
        t: s.clone(),
        left: t.elements().map(|b| ctx.points().map(|x| ctx.act_r(x, t.inv(b))).collect()).collect(),
        right: ctx.points().map(|x| s.elements().map(|a| ctx.act_l(s.inv(a), x)).collect()).collect(),
        ip_s: ctx.points().map(|x| ctx.points().map(|y| ctx.ip_t(x, y)).collect()).collect(),
        ip_t: ctx.points().map(|x| ctx.points().map(|y| ctx.ip_s(x, y)).collect()).collect(),
    };
    MoritaContext::from_parts(parts).expect("opposite tables have the right shape")
}

/// Moves a context along isomorphisms `s_map: S → S'` and `t_map: T → T'`.
pub fn transport_context(
    ctx: &MoritaContext,
    new_s: &InverseSemigroup,
    s_map: &[usize],
    new_t: &InverseSemigroup,
    t_map: &[usize],
) -> MoritaContext {
    let m = ctx.m();
    let mut left = vec![vec![0; m]; new_s.size()];
    for a in ctx.s().elements() {
        for x in ctx.points() {
            left[s_map[a]][x] = ctx.act_l(a, x);
        }
    }
    let mut right = vec![vec![0; new_t.size()]; m];
    for x in ctx.points() {
        for b in ctx.t().elements() {
            right[x][t_map[b]] = ctx.act_r(x, b);
        }
    }
    let ip_s = ctx.points().map(|x| ctx.points().map(|y| s_map[ctx.ip_s(x, y)]).collect()).collect();
    let ip_t = ctx.points().map(|x| ctx.points().map(|y| t_map[ctx.ip_t(x, y)]).collect()).collect();
    MoritaContext::from_parts(ContextParts { s: new_s.clone(), t: new_t.clone(), left, right, ip_s, ip_t })
        .expect("transported tables have the right shape")
}

/// A bijection of bimodules commuting with both actions and both inner
/// products, for contexts over the same pair of semigroups.
pub fn context_isomorphism(c1: &MoritaContext, c2: &MoritaContext) -> Option<Vec<usize>> {
    if c1.s() != c2.s() || c1.t() != c2.t() || c1.m() != c2.m() {
        return None;
    }
    let m = c1.m();
    let mut map = vec![usize::MAX; m];
    let mut rev = vec![usize::MAX; m];
    iso_step(c1, c2, &mut map, &mut rev).then_some(map)
}

fn iso_assign(
    c1: &MoritaContext,
    c2: &MoritaContext,
    map: &mut [usize],
    rev: &mut [usize],
    trail: &mut Vec<usize>,
    x: usize,
    y: usize,
) -> bool {
    let mut queue = vec![(x, y)];
    while let Some((x, y)) = queue.pop() {
        if map[x] != usize::MAX {
            if map[x] != y {
                return false;
            }
            continue;
        }
        if rev[y] != usize::MAX || c1.p(x) != c2.p(y) || c1.q(x) != c2.q(y) {
            return false;
        }
        map[x] = y;
        rev[y] = x;
        trail.push(x);
        for z in 0..c1.m() {
            if map[z] != usize::MAX && (c1.ip_s(x, z) != c2.ip_s(y, map[z]) || c1.ip_t(x, z) != c2.ip_t(y, map[z])) {
                return false;
            }
        }
        for a in c1.s().elements() {
            queue.push((c1.act_l(a, x), c2.act_l(a, y)));
        }
        for b in c1.t().elements() {
            queue.push((c1.act_r(x, b), c2.act_r(y, b)));
        }
    }
    true
}

fn iso_step(c1: &MoritaContext, c2: &MoritaContext, map: &mut [usize], rev: &mut [usize]) -> bool {
    let Some(x) = map.iter().position(|&v| v == usize::MAX) else {
        return true;
    };
    for y in 0..c2.m() {
        if rev[y] != usize::MAX {
            continue;
        }
        let mut trail = Vec::new();
        if iso_assign(c1, c2, map, rev, &mut trail, x, y) && iso_step(c1, c2, map, rev) {
            return true;
        }
        for z in trail {
            rev[map[z]] = usize::MAX;
            map[z] = usize::MAX;
        }
    }
    false
}

/// `X ⊗_T X → S`, `x ⊗ y ↦ ⟨x,y⟩`, with `X` a left `T`-set by `tx = xt*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfTensor {
    pub tensor: TensorProduct,
    /// `to_s[c]` is the element of `S` for class `c`.
    pub to_s: Vec<usize>,
}

/// Verifies that classes of `X ⊗_T X` correspond bijectively to `S`, with
/// the product `(x⊗y)(x'⊗y') = x[y,x']⊗y'` and involution `y⊗x` matching.
pub fn self_tensor_isomorphism(ctx: &MoritaContext) -> Result<SelfTensor, Violation> {
    ensure(is_verified(ctx), "input context verifies", &[])?;
    let (s, t) = (ctx.s(), ctx.t());
    let right_x: Vec<Vec<usize>> = ctx.points().map(|x| t.elements().map(|b| ctx.act_r(x, b)).collect()).collect();
    let left_x: Vec<Vec<usize>> =
        t.elements().map(|b| ctx.points().map(|x| ctx.act_r(x, t.inv(b))).collect()).collect();
    let tensor = tensor_product(t, &right_x, &left_x).map_err(|e| Violation::new(e.to_string(), Vec::new()))?;
    ensure(tensor.factors(|x, y| ctx.ip_s(x, y)), "⟨,⟩ is T-bilinear", &[])?;
    let k = tensor.class_count();
    let to_s: Vec<usize> = (0..k)
        .map(|c| {
            let (x, y) = tensor.rep(c);
            ctx.ip_s(x, y)
        })
        .collect();
    let mut hit = vec![usize::MAX; s.size()];
    for (c, &a) in to_s.iter().enumerate() {
        ensure(hit[a] == usize::MAX, "x⊗y ↦ ⟨x,y⟩ is injective", &[hit[a], c])?;
        hit[a] = c;
    }
    ensure(k == s.size(), "x⊗y ↦ ⟨x,y⟩ is surjective", &[k, s.size()])?;
    for c in 0..k {
        let (x, y) = tensor.rep(c);
        ensure(to_s[tensor.class_of(y, x)] == s.inv(to_s[c]), "involution matches", &[c])?;
        for d in 0..k {
            let (x2, y2) = tensor.rep(d);
            let prod = tensor.class_of(ctx.act_r(x, ctx.ip_t(y, x2)), y2);
            ensure(to_s[prod] == s.mul(to_s[c], to_s[d]), "product matches", &[c, d])?;
        }
    }
    Ok(SelfTensor { tensor, to_s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{derived_identities, verify_context};
    use crate::constructions::{b5, chain, two_chain};
    use crate::enlargement::canonical_context;
    use crate::semigroup::Group;

    fn b5_ctx() -> MoritaContext {
        canonical_context(&b5(), &[0, 4]).unwrap()
    }

    fn identity_ctx(s: &InverseSemigroup) -> MoritaContext {
        canonical_context(s, &s.elements().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn semilattice_tensor_collapses_to_products() {
        // oracle: over a semilattice acting on itself, (x,y) ~ (x',y') iff xy = x'y'
        let t = chain(3);
        let table = t.table();
        let tp = tensor_product(&t, &table, &table).unwrap();
        assert_eq!(tp.class_count(), 3);
        for x in 0..3 {
            for y in 0..3 {
                for x2 in 0..3 {
                    for y2 in 0..3 {
                        assert_eq!(tp.class_of(x, y) == tp.class_of(x2, y2), t.mul(x, y) == t.mul(x2, y2));
                    }
                }
            }
        }
        let sl = two_chain();
        assert_eq!(tensor_product(&sl, &sl.table(), &sl.table()).unwrap().class_count(), 2);
    }

    #[test]
    fn singleton_tensor_is_y() {
        let t = Group::trivial().into_semigroup();
        let tp = tensor_product(&t, &[vec![0]], &[vec![0, 1, 2]]).unwrap();
        assert_eq!(tp.class_count(), 3);
        assert!(tensor_product(&t, &[vec![1]], &[vec![0]]).is_err());
    }

    #[test]
    fn self_tensor_of_b5() {
        let st = self_tensor_isomorphism(&b5_ctx()).unwrap();
        assert_eq!(st.tensor.class_count(), 5);
        let dual = self_tensor_isomorphism(&opposite_context(&b5_ctx())).unwrap();
        assert_eq!(dual.tensor.class_count(), 2);
    }

    #[test]
    fn opposite_is_an_involution() {
        let ctx = b5_ctx();
        let op = opposite_context(&ctx);
        assert!(verify_context(&op).all_pass());
        assert_eq!(opposite_context(&op), ctx);
    }

    #[test]
    fn composition_round_trip() {
        let ctx = b5_ctx();
        let back = compose_contexts(&ctx, &opposite_context(&ctx)).unwrap();
        assert_eq!(back.s(), &b5());
        assert_eq!(back.t(), &b5());
        assert!(verify_context(&back).all_pass());
        assert!(derived_identities(&back).unwrap().all_pass());
        let other = compose_contexts(&opposite_context(&ctx), &ctx).unwrap();
        assert!(verify_context(&other).all_pass());
    }

    #[test]
    fn identity_is_neutral() {
        let ctx = b5_ctx();
        let id_t = identity_ctx(ctx.t());
        let c = compose_contexts(&ctx, &id_t).unwrap();
        assert!(context_isomorphism(&c, &ctx).is_some());
        let id_s = identity_ctx(ctx.s());
        let c = compose_contexts(&id_s, &ctx).unwrap();
        assert!(context_isomorphism(&c, &ctx).is_some());
    }

    #[test]
    fn mismatched_middle() {
        let ctx = b5_ctx();
        assert_eq!(compose_contexts(&ctx, &ctx), Err(TensorError::MiddleMismatch));
    }

    #[test]
    fn transport_along_isomorphism() {
        let ctx = b5_ctx();
        // T here is {E11, 0} re-indexed as 0 = E11, 1 = 0; two_chain has 0 = bottom
        let moved = transport_context(&ctx, &b5(), &[0, 1, 2, 3, 4], &two_chain(), &[1, 0]);
        assert!(verify_context(&moved).all_pass());
        assert_eq!(moved.t(), &two_chain());
    }
}
