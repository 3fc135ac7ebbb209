//! Deciding strong Morita equivalence of small semigroups: an invariant
//! screen that can refute, and two bounded searches that can confirm.
//! Exhausting a bound never counts as a refutation.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bimodule::{derived_identities, verify_context, ContextParts, MoritaContext};
use crate::constructions::build_matrix_enlargement_with_limit;
use crate::enlargement::{canonical_context, corner, is_full};
use crate::iso::{are_isomorphic, isomorphism};
use crate::report::VerificationReport;
use crate::semigroup::InverseSemigroup;
use crate::structure::{green_and_ideals, is_f_inverse_literal, maximal_group_image, maximal_subgroup};
use crate::tensor::{compose_contexts, opposite_context, transport_context};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invariant screen refutes equivalence: {0:?}")]
    ScreenNotPassed(Vec<String>),
    #[error("time budget exceeded")]
    BudgetExceeded,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("search produced a context that fails verification: {0}")]
    Unverified(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest `|X|` tried by the direct search.
    pub max_bimodule_size: usize,
    /// Largest semigroup built while exploring enlargement chains.
    pub max_chain_semigroup_size: usize,
    pub time_budget: Duration,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_bimodule_size: 8, max_chain_semigroup_size: 64, time_budget: Duration::from_secs(30) }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_bimodule_size == 0 || self.max_chain_semigroup_size == 0 || self.time_budget.is_zero() {
            return Err(SearchError::InvalidConfig("bounds must be positive".into()));
        }
        Ok(())
    }
}

/// Compares the invariants of strong Morita equivalence. A failing check
/// refutes equivalence.
pub fn invariant_screen(s: &InverseSemigroup, t: &InverseSemigroup) -> VerificationReport {
    let mut report = VerificationReport::new("invariant screen");
    let (gs, gt) = (green_and_ideals(s), green_and_ideals(t));
    let (ds, dt) = (gs.d_classes.len(), gt.d_classes.len());
    report.record("d-classes", &format!("{ds} vs {dt} D-classes"), (ds != dt).then(|| vec![ds, dt]));

    let groups = |sg: &InverseSemigroup, classes: &[Vec<usize>]| -> Vec<InverseSemigroup> {
        classes.iter().map(|c| maximal_subgroup(sg, c[0]).expect("idempotent").0.into_semigroup()).collect()
    };
    let (mut left, right) = (groups(s, &gs.d_classes), groups(t, &gt.d_classes));
    let mut unmatched = None;
    for (i, h) in right.iter().enumerate() {
        match left.iter().position(|g| are_isomorphic(g, h)) {
            Some(p) => {
                left.remove(p);
            }
            None => {
                unmatched = Some(vec![i]);
                break;
            }
        }
    }
    if ds != dt && unmatched.is_none() {
        unmatched = Some(vec![ds, dt]);
    }
    report.record("maximal-subgroups", "maximal subgroups match across D-classes", unmatched);

    let jp = gs.j_poset.isomorphism(&gt.j_poset).is_none();
    report.record("j-poset", "posets of J-classes are isomorphic", jp.then(Vec::new));
    let il = gs.ideal_lattice.isomorphism(&gt.ideal_lattice).is_none();
    report.record("ideal-lattice", "lattices of ideals are isomorphic", il.then(Vec::new));

    let (is, it) = (maximal_group_image(s), maximal_group_image(t));
    let gi = !are_isomorphic(is.group.as_semigroup(), it.group.as_semigroup());
    report.record(
        "group-image",
        &format!("maximal group images of orders {} and {}", is.group.order(), it.group.order()),
        gi.then(|| vec![is.group.order(), it.group.order()]),
    );
    let (zs, zt) = (s.zero().is_some(), t.zero().is_some());
    report.record("zero", "both or neither have a zero", (zs != zt).then(|| vec![zs as usize, zt as usize]));
    let (fs, ft) = (is_f_inverse_literal(s, &is), is_f_inverse_literal(t, &it));
    report.record("f-inverse", "F-inverse flags agree", (fs != ft).then(|| vec![fs as usize, ft as usize]));
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<MoritaContext>),
    /// Every `|X|` up to the bound was tried without success. This says
    /// nothing about larger bimodules.
    Exhausted {
        max_x: usize,
    },
}

impl SearchOutcome {
    pub fn context(&self) -> Option<&MoritaContext> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

const NONE: usize = usize::MAX;

struct Deadline {
    end: Instant,
    ticks: u32,
}

impl Deadline {
    fn new(budget: Duration) -> Self {
        Deadline { end: Instant::now() + budget, ticks: 0 }
    }

    fn check(&mut self) -> Result<(), SearchError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(256) && Instant::now() > self.end {
            return Err(SearchError::BudgetExceeded);
        }
        Ok(())
    }
}

/// Backtracking over symmetric `⟨,⟩` tables. A context is determined by its
/// `S`-valued inner product: points correspond to rows, the left action is
/// left multiplication of rows, and `T` is recovered as the maps
/// `x ↦ ⟨x, y⟩z`.
struct TableSearch<'a> {
    s: &'a InverseSemigroup,
    t: &'a InverseSemigroup,
    m: usize,
    a: Vec<usize>,
    deadline: &'a mut Deadline,
}

impl TableSearch<'_> {
    fn get(&self, i: usize, j: usize) -> usize {
        self.a[i * self.m + j]
    }

    fn set(&mut self, i: usize, j: usize, v: usize) {
        let m = self.m;
        self.a[i * m + j] = v;
        self.a[j * m + i] = if v == NONE { NONE } else { self.s.inv(v) };
    }

    fn diagonal(&mut self, i: usize) -> Result<Option<MoritaContext>, SearchError> {
        let es = self.s.idempotents().to_vec();
        if i == self.m {
            return self.entry(0, 1);
        }
        let start = if i == 0 { 0 } else { es.iter().position(|&e| e == self.get(i - 1, i - 1)).unwrap() };
        for &e in &es[start..] {
            self.set(i, i, e);
            let covered = (0..=i).map(|k| self.get(k, k)).collect::<std::collections::BTreeSet<_>>().len();
            if es.len() - covered < self.m - i {
                if let Some(c) = self.diagonal(i + 1)? {
                    return Ok(Some(c));
                }
            }
        }
        self.set(i, i, NONE);
        Ok(None)
    }

    /// Assigns `⟨i, j⟩` for `j > i`, row by row.
    fn entry(&mut self, i: usize, j: usize) -> Result<Option<MoritaContext>, SearchError> {
        self.deadline.check()?;
        if j == self.m {
            if !self.row_closed(i) {
                return Ok(None);
            }
            return if i + 1 == self.m { Ok(self.finish()) } else { self.entry(i + 1, i + 2) };
        }
        let (pi, pj) = (self.get(i, i), self.get(j, j));
        for v in self.s.elements() {
            if self.s.mul3(pi, v, pj) != v {
                continue;
            }
            self.set(i, j, v);
            if let Some(c) = self.entry(i, j + 1)? {
                return Ok(Some(c));
            }
        }
        self.set(i, j, NONE);
        Ok(None)
    }

    /// Row `i` is complete: it must differ from earlier rows, and each left
    /// translate must be a row, or could still become one.
    fn row_closed(&self, i: usize) -> bool {
        let m = self.m;
        let row: Vec<usize> = (0..m).map(|k| self.get(i, k)).collect();
        if (0..i).any(|k| (0..m).all(|l| self.get(k, l) == row[l])) {
            return false;
        }
        self.s.elements().all(|u| {
            let v: Vec<usize> = row.iter().map(|&x| self.s.mul(u, x)).collect();
            (0..m).any(|k| {
                if k <= i {
                    (0..m).all(|l| self.get(k, l) == v[l])
                } else {
                    (0..=i).all(|l| self.get(k, l) == v[l]) && self.get(k, k) == v[k]
                }
            })
        })
    }

    fn finish(&self) -> Option<MoritaContext> {
        let (s, t, m) = (self.s, self.t, self.m);
        let rows: Vec<Vec<usize>> = (0..m).map(|i| (0..m).map(|k| self.get(i, k)).collect()).collect();
        let mut hit = vec![false; s.size()];
        self.a.iter().for_each(|&v| hit[v] = true);
        if hit.contains(&false) {
            return None;
        }
        let mut left = vec![vec![0; m]; s.size()];
        for u in s.elements() {
            for x in 0..m {
                let v: Vec<usize> = rows[x].iter().map(|&y| s.mul(u, y)).collect();
                left[u][x] = rows.iter().position(|r| *r == v)?;
            }
        }
        // T as the maps x ↦ ⟨x, y⟩z
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut ip_code = vec![vec![0; m]; m];
        for y in 0..m {
            for z in 0..m {
                let f: Vec<usize> = (0..m).map(|x| left[self.get(x, y)][z]).collect();
                ip_code[y][z] = match maps.iter().position(|g| *g == f) {
                    Some(p) => p,
                    None => {
                        maps.push(f);
                        maps.len() - 1
                    }
                };
            }
        }
        if maps.len() != t.size() {
            return None;
        }
        let mut table = vec![vec![0; maps.len()]; maps.len()];
        for (p, f) in maps.iter().enumerate() {
            for (q, g) in maps.iter().enumerate() {
                let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                table[p][q] = maps.iter().position(|k| *k == h)?;
            }
        }
        let derived = InverseSemigroup::from_table(table, None).ok()?;
        let iso = isomorphism(&derived, t)?;
        let mut right = vec![vec![0; t.size()]; m];
        for (p, f) in maps.iter().enumerate() {
            for x in 0..m {
                right[x][iso[p]] = f[x];
            }
        }
        let ip_t = ip_code.iter().map(|r| r.iter().map(|&p| iso[p]).collect()).collect();
        let ctx = MoritaContext::from_parts(ContextParts { s: s.clone(), t: t.clone(), left, right, ip_s: rows, ip_t })
            .ok()?;
        verify_context(&ctx).all_pass().then_some(ctx)
    }
}

fn lower_bound(s: &InverseSemigroup, t: &InverseSemigroup) -> usize {
    let root = |n: usize| (1..).find(|m| m * m >= n).unwrap();
    [s.idempotents().len(), t.idempotents().len(), root(s.size()), root(t.size())].into_iter().max().unwrap()
}

fn check_found(ctx: &MoritaContext) -> Result<(), SearchError> {
    let report = verify_context(ctx);
    if !report.all_pass() {
        return Err(SearchError::Unverified(report.to_string()));
    }
    let identities = derived_identities(ctx).map_err(|e| SearchError::Unverified(e.to_string()))?;
    if !identities.all_pass() {
        return Err(SearchError::Unverified(identities.to_string()));
    }
    Ok(())
}

/// Tries `|X| = m` for increasing `m` up to the configured bound, returning
/// the first verified context in enumeration order.
pub fn strong_morita_search(
    s: &InverseSemigroup,
    t: &InverseSemigroup,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let screen = invariant_screen(s, t);
    if !screen.all_pass() {
        return Err(SearchError::ScreenNotPassed(screen.failures().map(|c| c.id.clone()).collect()));
    }
    let mut deadline = Deadline::new(cfg.time_budget);
    for m in lower_bound(s, t)..=cfg.max_bimodule_size {
        log::debug!("direct search at |X| = {m}");
        let mut search = TableSearch { s, t, m, a: vec![NONE; m * m], deadline: &mut deadline };
        if let Some(ctx) = search.diagonal(0)? {
            check_found(&ctx)?;
            return Ok(SearchOutcome::Found(Box::new(ctx)));
        }
    }
    Ok(SearchOutcome::Exhausted { max_x: cfg.max_bimodule_size })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// The corner `eSe` at a full idempotent.
    Corner { e: usize },
    /// `k × k` matrices over a monoid with zero.
    Matrix { k: usize },
}

/// One edge of a chain. When `forward`, the next semigroup is built from the
/// previous one by `kind`; otherwise the previous one is built from the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStep {
    pub kind: StepKind,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnlargementChain {
    /// From `S` to `T`. Consecutive semigroups are related by a step, except
    /// at the single point where the two halves meet up to isomorphism.
    pub semigroups: Vec<InverseSemigroup>,
    pub steps: Vec<ChainStep>,
    pub context: MoritaContext,
}

struct Node {
    sg: InverseSemigroup,
    parent: Option<(usize, StepKind)>,
}

/// `ctx(big, small)` where `small` sits in `big` through `embed`.
fn enlargement_context(big: &InverseSemigroup, small: &InverseSemigroup, embed: &[usize]) -> MoritaContext {
    let ctx = canonical_context(big, embed).expect("a step is an enlargement");
    let map = isomorphism(ctx.t(), small).expect("restriction is isomorphic to the small semigroup");
    let ids: Vec<usize> = big.elements().collect();
    transport_context(&ctx, big, &ids, small, &map)
}

/// `ctx(parent, child)` for a step from parent to child.
fn step_context(parent: &InverseSemigroup, child: &InverseSemigroup, kind: StepKind) -> MoritaContext {
    match kind {
        StepKind::Corner { e } => {
            let (_, embed) = corner(parent, e).expect("idempotent");
            enlargement_context(parent, child, &embed)
        }
        StepKind::Matrix { k } => {
            let (_, embed) = build_matrix_enlargement_with_limit(parent, k, usize::MAX).expect("monoid with zero");
            opposite_context(&enlargement_context(child, parent, &embed))
        }
    }
}

fn neighbours(sg: &InverseSemigroup, limit: usize) -> Vec<(InverseSemigroup, StepKind)> {
    let mut out = Vec::new();
    for &e in sg.idempotents() {
        if is_full(sg, e) {
            let (c, _) = corner(sg, e).expect("idempotent");
            if c.size() < sg.size() {
                out.push((c, StepKind::Corner { e }));
            }
        }
    }
    for k in 2.. {
        match build_matrix_enlargement_with_limit(sg, k, limit) {
            Ok((b, _)) => out.push((b, StepKind::Matrix { k })),
            Err(_) => break,
        }
    }
    out
}

fn path_to_root(nodes: &[Node], mut i: usize) -> Vec<usize> {
    let mut path = vec![i];
    while let Some((p, _)) = nodes[i].parent {
        path.push(p);
        i = p;
    }
    path.reverse();
    path
}

/// Bidirectional breadth-first search through corners at full idempotents
/// and matrix enlargements, matching semigroups up to isomorphism.
pub fn enlargement_chain_search(
    s: &InverseSemigroup,
    t: &InverseSemigroup,
    cfg: &SearchConfig,
) -> Result<Option<EnlargementChain>, SearchError> {
    cfg.validate()?;
    let deadline = Deadline::new(cfg.time_budget);
    let mut sides: [Vec<Node>; 2] =
        [vec![Node { sg: s.clone(), parent: None }], vec![Node { sg: t.clone(), parent: None }]];
    let mut queues: [VecDeque<usize>; 2] = [VecDeque::from([0]), VecDeque::from([0])];
    let mut meet = isomorphism(s, t).map(|iso| (0, 0, iso));
    let mut turn = 0;
    while meet.is_none() && (!queues[0].is_empty() || !queues[1].is_empty()) {
        if queues[turn].is_empty() {
            turn = 1 - turn;
        }
        let i = queues[turn].pop_front().expect("nonempty queue");
        let here = sides[turn][i].sg.clone();
        for (sg, kind) in neighbours(&here, cfg.max_chain_semigroup_size) {
            deadline.end.checked_duration_since(Instant::now()).ok_or(SearchError::BudgetExceeded)?;
            if sides[turn].iter().any(|n| are_isomorphic(&n.sg, &sg)) {
                continue;
            }
            let j = sides[turn].len();
            let other =
                sides[1 - turn].iter().enumerate().find_map(|(k, n)| isomorphism(&sg, &n.sg).map(|iso| (k, iso)));
            sides[turn].push(Node { sg, parent: Some((i, kind)) });
            queues[turn].push_back(j);
            if let Some((k, iso)) = other {
                meet = Some(if turn == 0 {
                    (j, k, iso)
                } else {
                    let inv = invert(&iso);
                    (k, j, inv)
                });
                break;
            }
        }
        turn = 1 - turn;
    }
    let Some((a, b, iso)) = meet else { return Ok(None) };

    let (left, right) = (&sides[0], &sides[1]);
    let path_s = path_to_root(left, a);
    let mut path_t = path_to_root(right, b);
    path_t.reverse();
    let mut semigroups: Vec<InverseSemigroup> = path_s.iter().map(|&i| left[i].sg.clone()).collect();
    semigroups.extend(path_t.iter().map(|&i| right[i].sg.clone()));
    let mut steps = Vec::new();
    let mut contexts = Vec::new();
    for w in path_s.windows(2) {
        let kind = left[w[1]].parent.expect("non-root").1;
        steps.push(ChainStep { kind, forward: true });
        contexts.push(step_context(&left[w[0]].sg, &left[w[1]].sg, kind));
    }
    // the two halves meet at isomorphic semigroups
    let (ms, mt) = (&left[a].sg, &right[b].sg);
    let all: Vec<usize> = ms.elements().collect();
    let id_ctx = canonical_context(ms, &all).expect("every semigroup enlarges itself");
    let restrict_iso = isomorphism(id_ctx.t(), ms).expect("restriction to everything");
    let to_mt: Vec<usize> = restrict_iso.iter().map(|&x| iso[x]).collect();
    contexts.push(transport_context(&id_ctx, ms, &all, mt, &to_mt));
    for w in path_t.windows(2) {
        let kind = right[w[0]].parent.expect("non-root").1;
        steps.push(ChainStep { kind, forward: false });
        contexts.push(opposite_context(&step_context(&right[w[1]].sg, &right[w[0]].sg, kind)));
    }
    let mut ctx = contexts[0].clone();
    for next in &contexts[1..] {
        ctx = compose_contexts(&ctx, next).map_err(|e| SearchError::Unverified(e.to_string()))?;
    }
    check_found(&ctx)?;
    Ok(Some(EnlargementChain { semigroups, steps, context: ctx }))
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (i, &v) in map.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{b5, birget_rhodes_in_semidirect, chain, diamond, two_chain};
    use crate::semigroup::Group;

    fn quick() -> SearchConfig {
        SearchConfig { max_bimodule_size: 4, ..SearchConfig::default() }
    }

    #[test]
    fn screen_examples() {
        assert!(invariant_screen(&b5(), &two_chain()).all_pass());
        let r = invariant_screen(&two_chain(), &chain(3));
        assert!(!r.all_pass());
        assert_eq!(r.get("j-poset").unwrap().status, crate::report::Status::Fail);
        assert!(invariant_screen(&diamond(), &diamond()).all_pass());
    }

    #[test]
    fn direct_search_finds_b5_context() {
        let out = strong_morita_search(&b5(), &two_chain(), &quick()).unwrap();
        let ctx = out.context().expect("witness at |X| = 3");
        assert_eq!(ctx.m(), 3);
    }

    #[test]
    fn direct_search_on_isomorphic_semilattices() {
        let out = strong_morita_search(&diamond(), &diamond(), &quick()).unwrap();
        assert_eq!(out.context().unwrap().m(), 4);
        let z2 = Group::cyclic(2).into_semigroup();
        assert!(strong_morita_search(&z2, &z2, &quick()).unwrap().context().is_some());
    }

    #[test]
    fn direct_search_refuses_screened_pairs() {
        assert!(matches!(strong_morita_search(&b5(), &chain(3), &quick()), Err(SearchError::ScreenNotPassed(_))));
    }

    #[test]
    fn search_is_deterministic() {
        let a = strong_morita_search(&b5(), &two_chain(), &quick()).unwrap();
        let b = strong_morita_search(&b5(), &two_chain(), &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chain_search_examples() {
        let chain_b5 = enlargement_chain_search(&b5(), &two_chain(), &SearchConfig::default()).unwrap().unwrap();
        assert_eq!(chain_b5.steps.len(), 1);
        assert_eq!(chain_b5.steps[0].kind, StepKind::Corner { e: 0 });
        let same = enlargement_chain_search(&diamond(), &diamond(), &SearchConfig::default()).unwrap().unwrap();
        assert!(same.steps.is_empty());
        let (big, br, _) = birget_rhodes_in_semidirect(&Group::cyclic(2)).unwrap();
        let c = enlargement_chain_search(&big, &br, &SearchConfig::default()).unwrap().unwrap();
        assert_eq!(c.steps.len(), 1);
        // 2x2 matrices over the 2-chain are already B5
        let back = enlargement_chain_search(&two_chain(), &b5(), &SearchConfig::default()).unwrap().unwrap();
        assert_eq!(back.steps, vec![ChainStep { kind: StepKind::Matrix { k: 2 }, forward: true }]);
        assert_eq!(back.context.m(), 3);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = SearchConfig { max_bimodule_size: 0, ..SearchConfig::default() };
        assert!(matches!(strong_morita_search(&b5(), &two_chain(), &cfg), Err(SearchError::InvalidConfig(_))));
    }
}
