//! Acceptance suite: twelve end-to-end criteria, each run against its time
//! limit. Prints one line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use morita_core::bimodule::{derived_identities, germ_group_isomorphism, verify_context, MoritaContext};
use morita_core::category::{is_essentially_surjective, is_faithful, is_full};
use morita_core::constructions::{
    b5, birget_rhodes_in_semidirect, build_birget_rhodes, build_matrix_enlargement, catalog, chain, diamond,
    diamond_swap, semilattices_up_to_iso, trivial_action, two_chain,
};
use morita_core::enlargement::{canonical_context, monoid_criterion};
use morita_core::groupoid::{crossproduct_isomorphism, morita_witness, tight_witness, universal_groupoid};
use morita_core::karoubi::{congruence_transfer, equivalence_functor, f_inverse_category_check, idempotent_splitting};
use morita_core::search::{invariant_screen, strong_morita_search, SearchConfig, SearchError, SearchOutcome};
use morita_core::structure::{is_f_inverse_classical, is_f_inverse_literal, maximal_group_image};
use morita_core::tensor::{compose_contexts, opposite_context, self_tensor_isomorphism};
use morita_core::{Group, InverseSemigroup};

/// A context together with a label, for the fixture pairs.
struct Fixture {
    name: &'static str,
    ctx: MoritaContext,
}

fn fixtures() -> Vec<Fixture> {
    let b = b5();
    let (bx, embed) = build_matrix_enlargement(&two_chain(), 2).unwrap();
    let (big, _, br_embed) = birget_rhodes_in_semidirect(&Group::cyclic(2)).unwrap();
    vec![
        Fixture { name: "B5 over SL2", ctx: canonical_context(&b, &[0, 4]).unwrap() },
        Fixture { name: "B_2(SL2) over SL2", ctx: canonical_context(&bx, &embed).unwrap() },
        Fixture { name: "Pfin(Z2)*Z2 over BR(Z2)", ctx: canonical_context(&big, &br_embed).unwrap() },
    ]
}

fn b5_context() -> MoritaContext {
    canonical_context(&b5(), &[0, 4]).unwrap()
}

fn self_contexts(max: usize) -> Vec<(&'static str, MoritaContext)> {
    catalog()
        .into_iter()
        .filter(|e| e.semigroup.size() <= max)
        .map(|e| {
            let all: Vec<usize> = e.semigroup.elements().collect();
            (e.name, canonical_context(&e.semigroup, &all).unwrap())
        })
        .collect()
}

fn expect_verified(name: &str, ctx: &MoritaContext) {
    let report = verify_context(ctx);
    assert!(report.all_pass(), "{name}: {report}");
}

fn criterion_1() -> String {
    let mut n = 0;
    for f in fixtures() {
        expect_verified(f.name, &f.ctx);
        n += 1;
    }
    for (name, ctx) in self_contexts(9) {
        expect_verified(name, &ctx);
        n += 1;
    }
    format!("{n} canonical contexts satisfy every axiom and surjectivity")
}

fn criterion_2() -> String {
    let mut contexts: Vec<MoritaContext> = fixtures().into_iter().map(|f| f.ctx).collect();
    contexts.extend(self_contexts(9).into_iter().map(|(_, c)| c));
    let b = b5_context();
    contexts.push(opposite_context(&b));
    contexts.push(compose_contexts(&b, &opposite_context(&b)).unwrap());
    if let SearchOutcome::Found(c) = strong_morita_search(&b5(), &two_chain(), &SearchConfig::default()).unwrap() {
        contexts.push(*c);
    }
    let mut checks = 0;
    for ctx in &contexts {
        assert!(verify_context(ctx).all_pass());
        let report = derived_identities(ctx).unwrap();
        assert!(report.all_pass(), "{report}");
        checks += report.checks.len();
    }
    format!("{checks} identity checks over {} contexts, no counterexamples", contexts.len())
}

fn criterion_3() -> String {
    let b = b5_context();
    let composed = compose_contexts(&b, &opposite_context(&b)).unwrap();
    expect_verified("composite", &composed);
    let st = self_tensor_isomorphism(&b).unwrap();
    assert_eq!(st.tensor.class_count(), 5);
    let s = b.s();
    // oracle: classes x⊗y determined by ⟨x, y⟩, products and involution
    let mut seen = BTreeSet::new();
    for c in 0..st.tensor.class_count() {
        let (x, y) = st.tensor.rep(c);
        assert_eq!(st.to_s[c], b.ip_s(x, y));
        seen.insert(st.to_s[c]);
        assert_eq!(st.to_s[st.tensor.class_of(y, x)], s.inv(st.to_s[c]));
        for d in 0..st.tensor.class_count() {
            let (xp, yp) = st.tensor.rep(d);
            let prod = st.tensor.class_of(b.act_r(x, b.ip_t(y, xp)), yp);
            assert_eq!(st.to_s[prod], s.mul(st.to_s[c], st.to_s[d]));
        }
    }
    assert_eq!(seen.len(), s.size());
    "composite verifies; 5 tensor classes match B5".into()
}

/// Germs of pairs `(s, F)` with `F` a filter containing `s*s`, found by
/// brute force over subsets of idempotents.
fn oracle_germ_counts(s: &InverseSemigroup) -> (usize, usize) {
    let es = s.idempotents();
    let mut filters: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 1usize..(1 << es.len()) {
        let f: BTreeSet<usize> = (0..es.len()).filter(|i| mask >> i & 1 == 1).map(|i| es[i]).collect();
        let up = f.iter().all(|&a| es.iter().all(|&b| !s.le(a, b) || f.contains(&b)));
        let meets = f.iter().all(|&a| f.iter().all(|&b| f.contains(&s.mul(a, b))));
        if up && meets {
            filters.push(f);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for x in s.elements() {
        for (i, f) in filters.iter().enumerate() {
            if f.contains(&s.dom(x)) {
                pairs.push((x, i));
            }
        }
    }
    let related = |a: (usize, usize), b: (usize, usize)| {
        a.1 == b.1 && filters[a.1].iter().any(|&e| s.mul(a.0, e) == s.mul(b.0, e))
    };
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for &p in &pairs {
        if !reps.iter().any(|&r| related(r, p)) {
            reps.push(p);
        }
    }
    (filters.len(), reps.len())
}

fn criterion_4() -> String {
    let mut notes = Vec::new();
    let b = b5_context();
    let (big, _, embed) = birget_rhodes_in_semidirect(&Group::cyclic(2)).unwrap();
    for (name, ctx) in [("B5/SL2", b), ("Pfin(Z2)*Z2/BR(Z2)", canonical_context(&big, &embed).unwrap())] {
        let w = morita_witness(&ctx).unwrap();
        for (a, &img) in w.phi.arrows.iter().enumerate() {
            assert_eq!(w.psi.arrows[img], a);
        }
        for (a, &img) in w.psi.arrows.iter().enumerate() {
            assert_eq!(w.phi.arrows[img], a);
        }
        notes.push(format!("{name}: {} arrows", w.phi.arrows.len()));
    }
    let g = universal_groupoid(&b5()).unwrap();
    assert_eq!((g.groupoid.unit_count(), g.groupoid.arrow_count()), (3, 5));
    assert_eq!(oracle_germ_counts(&b5()), (3, 5));
    format!("Φ∘Ψ and Ψ∘Φ are identities ({}); G(B5) has 3 units, 5 arrows", notes.join(", "))
}

fn criterion_5() -> String {
    let z2 = Group::cyclic(2);
    let cp = crossproduct_isomorphism(&diamond(), &z2, &diamond_swap()).unwrap();
    assert_eq!(cp.universal.groupoid.arrow_count(), 8);
    assert_eq!(cp.transformation.groupoid.arrow_count(), 8);
    let triv = Group::trivial();
    let c3 = chain(3);
    crossproduct_isomorphism(&c3, &triv, &trivial_action(&c3, &triv)).unwrap();
    "diamond⋊Z2 gives 8 arrows on both sides; chain3 with trivial action passes".into()
}

fn criterion_6() -> String {
    let ctx = b5_context();
    let w = morita_witness(&ctx).unwrap();
    let tw = tight_witness(&ctx, &w).unwrap();
    let (ts, tt) = (&tw.tight_s.groupoid, &tw.tight_t.groupoid);
    assert_eq!((ts.unit_count(), ts.arrow_count()), (2, 4));
    assert_eq!((tt.unit_count(), tt.arrow_count()), (1, 1));
    // pair groupoid on two units: exactly one arrow between any two units
    for u in 0..2 {
        for v in 0..2 {
            assert_eq!((0..4).filter(|&a| ts.dom(a) == u && ts.cod(a) == v).count(), 1);
        }
    }
    let n = tw.amplified_s.groupoid.arrow_count();
    assert_eq!(n, tw.amplified_t.groupoid.arrow_count());
    format!("tight groupoids (2 units, 4 arrows) vs (1, 1) amplify to isomorphic groupoids with {n} arrows")
}

fn criterion_7() -> String {
    let mut pairs: Vec<(String, MoritaContext)> = fixtures().into_iter().map(|f| (f.name.to_string(), f.ctx)).collect();
    pairs.extend(self_contexts(9).into_iter().map(|(n, c)| (format!("{n} over itself"), c)));
    for (name, ctx) in &pairs {
        let screen = invariant_screen(ctx.s(), ctx.t());
        assert!(screen.all_pass(), "{name}: {screen}");
        let ef = equivalence_functor(ctx).unwrap();
        let (c, d) = (&ef.source.category, &ef.target.category);
        assert!(is_faithful(c, &ef.functor), "{name}");
        assert!(is_full(c, d, &ef.functor), "{name}");
        assert!(is_essentially_surjective(d, &ef.functor), "{name}");
    }
    for (s, t) in [(two_chain(), chain(3)), (b5(), chain(3))] {
        assert!(!invariant_screen(&s, &t).all_pass());
    }
    format!("{} fixture contexts screened and their splitting functors verified; 2 pairs refuted", pairs.len())
}

fn criterion_8() -> String {
    let sls = semilattices_up_to_iso(4);
    assert_eq!(sls.len(), 9);
    let cfg = SearchConfig { max_bimodule_size: 8, time_budget: Duration::from_secs(60), ..SearchConfig::default() };
    let (mut found, mut refuted) = (0, 0);
    for (i, a) in sls.iter().enumerate() {
        for (j, b) in sls.iter().enumerate() {
            match strong_morita_search(a, b, &cfg) {
                Ok(SearchOutcome::Found(ctx)) => {
                    assert_eq!(i, j, "witness between non-isomorphic semilattices");
                    expect_verified("search witness", &ctx);
                    found += 1;
                }
                Ok(SearchOutcome::Exhausted { .. }) => panic!("search exhausted on pair ({i}, {j})"),
                Err(SearchError::ScreenNotPassed(reasons)) => {
                    assert_ne!(i, j);
                    assert!(reasons.iter().any(|r| r == "j-poset"), "{reasons:?}");
                    refuted += 1;
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
    format!("{found} isomorphic pairs found, {refuted} pairs refuted by the J-poset check")
}

/// Brute-force isomorphism test over all bijections.
fn oracle_isomorphic(s: &InverseSemigroup, t: &InverseSemigroup) -> bool {
    fn extend(s: &InverseSemigroup, t: &InverseSemigroup, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = map.len();
        if k == s.size() {
            return s.elements().all(|a| s.elements().all(|b| t.mul(map[a], map[b]) == map[s.mul(a, b)]));
        }
        for v in 0..t.size() {
            if !used[v] {
                used[v] = true;
                map.push(v);
                if extend(s, t, map, used) {
                    return true;
                }
                map.pop();
                used[v] = false;
            }
        }
        false
    }
    s.size() == t.size() && extend(s, t, &mut Vec::new(), &mut vec![false; t.size()])
}

fn criterion_9() -> String {
    let monoids: Vec<_> =
        catalog().into_iter().filter(|e| e.semigroup.size() <= 7 && e.semigroup.identity().is_some()).collect();
    for a in &monoids {
        for b in &monoids {
            let crit = monoid_criterion(&a.semigroup, &b.semigroup).unwrap().is_some();
            assert_eq!(crit, oracle_isomorphic(&a.semigroup, &b.semigroup), "{} vs {}", a.name, b.name);
        }
    }
    format!("{} monoids, {} ordered pairs agree with brute-force isomorphism", monoids.len(), monoids.len().pow(2))
}

fn criterion_10() -> String {
    let mut orders = Vec::new();
    for f in fixtures() {
        let g = germ_group_isomorphism(&f.ctx).unwrap();
        assert_eq!(g.group_s.group.order(), g.group_t.group.order());
        let n = g.germs.class_count();
        // free and transitive on both sides: |germs| = |G(S)| = |G(T)|
        assert_eq!(n, g.group_s.group.order());
        for y in 0..n {
            let left: BTreeSet<usize> = (0..n).map(|a| g.left[a][y]).collect();
            let right: BTreeSet<usize> = (0..n).map(|h| g.right[y][h]).collect();
            assert_eq!((left.len(), right.len()), (n, n));
        }
        orders.push(format!("{}: |G| = {}", f.name, n));
    }
    assert!(orders[0].ends_with("= 1") && orders[2].ends_with("= 2"));
    orders.join("; ")
}

/// Congruences of a small semigroup by brute force over all partitions.
fn oracle_congruence_count(s: &InverseSemigroup) -> usize {
    fn partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for i in 0..n {
            let mut next = Vec::new();
            for p in out {
                let blocks = p.iter().max().map_or(0, |&m| m + 1);
                for b in 0..=blocks.min(i) {
                    let mut q = p.clone();
                    q.push(b);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
    partitions(s.size())
        .into_iter()
        .filter(|p| {
            s.elements().all(|a| {
                s.elements()
                    .filter(|&b| p[a] == p[b])
                    .all(|b| s.elements().all(|c| p[s.mul(a, c)] == p[s.mul(b, c)] && p[s.mul(c, a)] == p[s.mul(c, b)]))
            })
        })
        .count()
}

fn criterion_11() -> String {
    let mut notes = Vec::new();
    let br = build_birget_rhodes(&Group::cyclic(2)).unwrap();
    for (name, s) in [("SL2", two_chain()), ("chain3", chain(3)), ("diamond", diamond()), ("BR(Z2)", br)] {
        let ct = congruence_transfer(&s).unwrap();
        assert_eq!(ct.cong_s.len(), oracle_congruence_count(&s), "{name}");
        assert_eq!(ct.cong_s.len(), ct.cong_se.len(), "{name}");
        assert!(ct.lattice_s().isomorphism(&ct.lattice_se()).is_some(), "{name}");
        notes.push(format!("{name}: {}", ct.cong_s.len()));
    }
    format!("congruence lattices isomorphic ({})", notes.join(", "))
}

/// Classical reading: one maximum per class of the maximal group image.
fn criterion_12() -> String {
    let mut lines = Vec::new();
    let b = b5();
    let ib = maximal_group_image(&b);
    assert!(is_f_inverse_literal(&b, &ib));
    assert!(!is_f_inverse_classical(&b, &ib));
    lines.push("B5: literal = true, classical = false".to_string());
    let mut mismatches = Vec::new();
    for f in fixtures() {
        let (s, t) = (f.ctx.s(), f.ctx.t());
        let (cs, ct) =
            (is_f_inverse_classical(s, &maximal_group_image(s)), is_f_inverse_classical(t, &maximal_group_image(t)));
        if cs != ct {
            mismatches.push(format!("{}: classical {cs} vs {ct}", f.name));
        }
        for sg in [s, t] {
            let cat = f_inverse_category_check(&idempotent_splitting(sg).category).unwrap();
            let classical = is_f_inverse_classical(sg, &maximal_group_image(sg));
            if cat != classical {
                mismatches.push(format!(
                    "{} side of size {}: splitting check {cat} vs classical {classical}",
                    f.name,
                    sg.size()
                ));
            }
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("; "));
    lines.join("; ")
}

/// Literal reading of the F-inverse property: invariant across the pairs and
/// matched by the splitting category check.
fn criterion_12_literal() -> String {
    let mut n = 0;
    for f in fixtures() {
        let (s, t) = (f.ctx.s(), f.ctx.t());
        let ls = is_f_inverse_literal(s, &maximal_group_image(s));
        assert_eq!(ls, is_f_inverse_literal(t, &maximal_group_image(t)), "{}", f.name);
        for sg in [s, t] {
            let cat = f_inverse_category_check(&idempotent_splitting(sg).category).unwrap();
            assert_eq!(cat, is_f_inverse_literal(sg, &maximal_group_image(sg)), "{}", f.name);
            n += 1;
        }
    }
    format!("literal flag invariant on every pair and equal to the splitting check on {n} semigroups")
}

type Criterion = (&'static str, fn() -> String, Duration);

fn main() {
    let secs = Duration::from_secs;
    let criteria: Vec<Criterion> = vec![
        ("1 canonical contexts verify", criterion_1, secs(5)),
        ("2 derived identities", criterion_2, secs(5)),
        ("3 transitivity and self-tensor", criterion_3, secs(1)),
        ("4 groupoid equivalence witness", criterion_4, secs(5)),
        ("5 cross-product isomorphism", criterion_5, secs(1)),
        ("6 tight restriction", criterion_6, secs(1)),
        ("7 invariants and splitting functor", criterion_7, secs(5)),
        ("8 semilattice rigidity", criterion_8, secs(60)),
        ("9 finite monoid rigidity", criterion_9, secs(30)),
        ("10 germ actions", criterion_10, secs(1)),
        ("11 congruence transfer", criterion_11, secs(30)),
        ("12 F-inverse invariance (classical)", criterion_12, secs(1)),
        ("12 F-inverse invariance (literal)", criterion_12_literal, secs(1)),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(detail) if elapsed <= limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("over time limit of {limit:?}; {detail}")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                ("FAIL", msg)
            }
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {name}: {status} in {:.3}s: {detail}", elapsed.as_secs_f64());
    }
    println!("{failed} failing");
    if failed > 0 {
        std::process::exit(1);
    }
}
