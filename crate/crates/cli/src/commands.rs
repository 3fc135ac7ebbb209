use std::fs;
use std::path::{Path, PathBuf};

use morita_core::bimodule::{derived_identities, verify_context, BimoduleError, MoritaContext};
use morita_core::category::{categories_equivalent, EquivalenceVerdict};
use morita_core::context_file::to_context_spec;
use morita_core::enlargement::{canonical_context, is_enlargement, EnlargementError};
use morita_core::groupoid::{
    morita_witness, tight_reduction, universal_groupoid, FiniteGroupoid, GroupoidError, UniversalGroupoid,
};
use morita_core::iso::isomorphism;
use morita_core::karoubi::{idempotent_splitting, loganathan_category};
use morita_core::search::{
    enlargement_chain_search, invariant_screen, strong_morita_search, SearchConfig, SearchError, SearchOutcome,
    StepKind,
};
use morita_core::structure::{natural_order, structural_profile};
use morita_core::tensor::{compose_contexts, transport_context, TensorError};
use morita_core::InverseSemigroup;

use crate::input::{load_context, load_semigroup};
use crate::report::{Report, Section, Table, Verdict};
use crate::{budget, Cli, CliError, Command, Outcome, Strategy, EXIT_FAIL, EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN};

fn names(s: &InverseSemigroup, elems: impl IntoIterator<Item = usize>) -> String {
    elems.into_iter().map(|e| s.name(e)).collect::<Vec<_>>().join(",")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass(report: Report) -> Outcome {
    Outcome { report, code: EXIT_OK }
}

fn finish(mut report: Report, verdict: Verdict, code: i32) -> Outcome {
    report.verdict = verdict;
    Outcome { report, code }
}

fn groupoid_error(e: GroupoidError) -> CliError {
    match e {
        GroupoidError::Violation(v) => CliError::Violation(v.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

fn enlargement_error(e: EnlargementError) -> CliError {
    match e {
        EnlargementError::Violation(v) => CliError::Violation(v.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

fn search_error(e: SearchError) -> CliError {
    match e {
        SearchError::Unverified(m) => CliError::Violation(m),
        other => CliError::Data(other.to_string()),
    }
}

/// Parses comma-separated indices or element names.
fn parse_subset(s: &InverseSemigroup, text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let idx = s
            .elements()
            .find(|&e| s.name(e) == tok)
            .or_else(|| tok.parse().ok().filter(|&i: &usize| i < s.size()))
            .ok_or_else(|| CliError::Data(format!("`{tok}` is not an element")))?;
        out.push(idx);
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Data("empty subset".into()));
    }
    Ok(out)
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "context".into());
    out.with_file_name(format!("{stem}-{suffix}.isg"))
}

/// Writes the context and, next to it, the tables of both semigroups, which
/// the context file references by file name.
fn write_context(out: &Path, ctx: &MoritaContext) -> Result<(), CliError> {
    let (sp, tp) = (sibling(out, "S"), sibling(out, "T"));
    let file_name = |p: &Path| p.file_name().expect("sibling has a name").to_string_lossy().into_owned();
    let write =
        |p: &Path, text: String| fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display())));
    write(&sp, ctx.s().to_spec_string())?;
    write(&tp, ctx.t().to_spec_string())?;
    write(out, to_context_spec(ctx, &file_name(&sp), &file_name(&tp)))
}

fn context_section(title: &str, ctx: &MoritaContext) -> Section {
    let (s, t) = (ctx.s(), ctx.t());
    let mut sec = Section::new(title);
    sec.field("|S|", s.size()).field("|T|", t.size()).field("|X|", ctx.m());
    let mut tab = Table::new("points", &["x", "<x,x>", "[x,x]"]);
    for x in ctx.points() {
        tab.row(vec![x.to_string(), s.name(ctx.p(x)), t.name(ctx.q(x))]);
    }
    sec.table(tab);
    sec
}

fn semigroup_section(s: &InverseSemigroup) -> Section {
    let mut sec = Section::new("semigroup");
    sec.field("size", s.size())
        .field("elements", names(s, s.elements()))
        .field("idempotents", names(s, s.idempotents().iter().copied()))
        .field("zero", s.zero().map_or("none".into(), |z| s.name(z)))
        .field("identity", s.identity().map_or("none".into(), |e| s.name(e)))
        .field("group", yes(s.is_group()));
    sec
}

fn groupoid_tables(
    sec: &mut Section,
    gd: &FiniteGroupoid,
    unit_label: impl Fn(usize) -> String,
    arrow_label: impl Fn(usize) -> String,
) {
    let mut units = Table::new("units", &["unit", "character"]);
    for u in 0..gd.unit_count() {
        units.row(vec![u.to_string(), unit_label(u)]);
    }
    let mut arrows = Table::new("arrows", &["arrow", "dom", "cod", "germ"]);
    for a in 0..gd.arrow_count() {
        arrows.row(vec![a.to_string(), gd.dom(a).to_string(), gd.cod(a).to_string(), arrow_label(a)]);
    }
    let mut iso = Table::new("isotropy", &["unit", "order", "orbit"]);
    for u in 0..gd.unit_count() {
        let orbit: Vec<String> = gd.orbit(u).iter().map(usize::to_string).collect();
        iso.row(vec![u.to_string(), gd.isotropy(u).len().to_string(), orbit.join(",")]);
    }
    sec.field("units", gd.unit_count()).field("arrows", gd.arrow_count());
    sec.table(units).table(arrows).table(iso);
}

fn character_name(s: &InverseSemigroup, u: &UniversalGroupoid, c: usize) -> String {
    format!("up({})", s.name(u.characters.get(c).generator))
}

fn germ_name(s: &InverseSemigroup, u: &UniversalGroupoid, a: usize) -> String {
    let (x, c) = u.members(a).next().expect("germ classes are nonempty");
    format!("[{}, {}]", s.name(x), character_name(s, u, c))
}

fn groupoid(echo: String, input: &str, tight: bool, limit: usize) -> Result<Outcome, CliError> {
    let s = load_semigroup(input, limit)?;
    let mut report = Report::new(echo);
    if tight {
        let tg = tight_reduction(&s).map_err(groupoid_error)?;
        let mut sec = Section::new("tight groupoid");
        let u = &tg.universal;
        groupoid_tables(
            &mut sec,
            &tg.groupoid,
            |i| character_name(&s, u, tg.units[i]),
            |a| germ_name(&s, u, tg.embed[a]),
        );
        report.section(sec);
    } else {
        let u = universal_groupoid(&s).map_err(groupoid_error)?;
        let mut sec = Section::new("universal groupoid");
        groupoid_tables(&mut sec, &u.groupoid, |c| character_name(&s, &u, c), |a| germ_name(&s, &u, a));
        report.section(sec);
    }
    Ok(pass(report))
}

fn search(
    echo: String,
    cli: &Cli,
    (left, right): (&str, &str),
    cfg: SearchConfig,
    strategy: Strategy,
    output: Option<&Path>,
) -> Result<Outcome, CliError> {
    let s = load_semigroup(left, cli.limit)?;
    let t = load_semigroup(right, cli.limit)?;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut report = Report::new(echo);
    let screen = invariant_screen(&s, &t);
    report.checks("invariant screen", &screen);
    if !screen.all_pass() {
        return Ok(finish(report, Verdict::Fail, EXIT_REFUTED));
    }
    let mut found: Option<MoritaContext> = None;
    let mut verdicts = Vec::new();
    if matches!(strategy, Strategy::Direct | Strategy::Both) {
        let mut sec = Section::new("direct search");
        sec.field("max |X|", cfg.max_bimodule_size);
        match strong_morita_search(&s, &t, &cfg) {
            Ok(SearchOutcome::Found(ctx)) => {
                sec.field("result", "found").field("|X|", ctx.m());
                found = Some(*ctx);
                verdicts.push(true);
            }
            Ok(SearchOutcome::Exhausted { max_x }) => {
                sec.field("result", format!("exhausted up to |X| = {max_x}"));
                verdicts.push(false);
            }
            Err(SearchError::BudgetExceeded) => {
                sec.field("result", "time budget exceeded");
                verdicts.push(false);
            }
            Err(e) => return Err(search_error(e)),
        }
        report.section(sec);
    }
    if matches!(strategy, Strategy::Chain | Strategy::Both) {
        let mut sec = Section::new("enlargement chain search");
        sec.field("max semigroup size", cfg.max_chain_semigroup_size);
        match enlargement_chain_search(&s, &t, &cfg) {
            Ok(Some(chain)) => {
                let mut tab = Table::new("steps", &["step", "from size", "to size", "kind", "direction"]);
                for (i, st) in chain.steps.iter().enumerate() {
                    let kind = match st.kind {
                        StepKind::Corner { e } => format!("corner at idempotent {e}"),
                        StepKind::Matrix { k } => format!("{k}x{k} matrices"),
                    };
                    let (a, b) = (chain.semigroups[i].size(), chain.semigroups[i + 1].size());
                    tab.row(vec![
                        i.to_string(),
                        a.to_string(),
                        b.to_string(),
                        kind,
                        if st.forward { "built from previous" } else { "built from next" }.into(),
                    ]);
                }
                sec.field("result", "found").field("|X|", chain.context.m()).table(tab);
                found.get_or_insert(chain.context);
                verdicts.push(true);
            }
            Ok(None) => {
                sec.field("result", "no chain within the size bound");
                verdicts.push(false);
            }
            Err(SearchError::BudgetExceeded) => {
                sec.field("result", "time budget exceeded");
                verdicts.push(false);
            }
            Err(e) => return Err(search_error(e)),
        }
        report.section(sec);
    }
    if verdicts.len() == 2 && verdicts[0] != verdicts[1] {
        log::warn!("search strategies disagree: direct {}, chain {}", verdicts[0], verdicts[1]);
        let mut sec = Section::new("strategies disagree");
        sec.field("direct found", yes(verdicts[0])).field("chain found", yes(verdicts[1]));
        report.section(sec);
    }
    match found {
        Some(ctx) => {
            report.section(context_section("witness", &ctx));
            if let Some(out) = output {
                write_context(out, &ctx)?;
            }
            Ok(finish(report, Verdict::Pass, EXIT_OK))
        }
        None => Ok(finish(report, Verdict::Unknown, EXIT_UNKNOWN)),
    }
}

pub fn dispatch(cli: &Cli, echo: String) -> Result<Outcome, CliError> {
    let limit = cli.limit;
    match &cli.command {
        Command::Validate { input } => {
            let s = load_semigroup(input, limit)?;
            let mut report = Report::new(echo);
            report.section(semigroup_section(&s));
            Ok(pass(report))
        }
        Command::Invariants { input } => {
            let s = load_semigroup(input, limit)?;
            let p = structural_profile(&s);
            let mut report = Report::new(echo);
            report.section(semigroup_section(&s));
            let mut sec = Section::new("invariants");
            let classes = |cs: &[Vec<usize>]| {
                cs.iter().map(|c| format!("{{{}}}", names(&s, c.iter().copied()))).collect::<Vec<_>>().join(" ")
            };
            sec.field("center", names(&s, p.center.iter().copied()))
                .field("D-classes", classes(&p.d_classes_of_idempotents))
                .field("J-classes", classes(&p.j_classes))
                .field("ideals", p.ideal_lattice.size())
                .field("E-unitary", yes(p.e_unitary))
                .field("F-inverse (classical)", yes(p.f_inverse_classical))
                .field("F-inverse (literal)", yes(p.f_inverse_literal))
                .field("maximal group image order", p.max_group.group.order());
            let mut tab = Table::new("J-order covers", &["below", "above"]);
            let n = p.j_poset.size();
            for a in 0..n {
                for b in 0..n {
                    if p.j_poset.lt(a, b) && !(0..n).any(|c| p.j_poset.lt(a, c) && p.j_poset.lt(c, b)) {
                        tab.row(vec![classes(&p.j_classes[a..=a]), classes(&p.j_classes[b..=b])]);
                    }
                }
            }
            sec.table(tab);
            report.section(sec);
            Ok(pass(report))
        }
        Command::Order { input } => {
            let s = load_semigroup(input, limit)?;
            let ord = natural_order(&s);
            let lt = |a: usize, b: usize| a != b && ord.le(a, b);
            let mut tab = Table::new("covers", &["below", "above"]);
            for a in s.elements() {
                for b in s.elements() {
                    if lt(a, b) && !s.elements().any(|c| lt(a, c) && lt(c, b)) {
                        tab.row(vec![s.name(a), s.name(b)]);
                    }
                }
            }
            let mut report = Report::new(echo);
            let mut sec = Section::new("natural order");
            sec.table(tab);
            report.section(sec);
            Ok(pass(report))
        }
        Command::Groupoid { input, tight } => groupoid(echo, input, *tight, limit),
        Command::Tight { input } => groupoid(echo, input, true, limit),
        Command::Karoubi { input } => {
            let s = load_semigroup(input, limit)?;
            let sp = idempotent_splitting(&s);
            let lg = loganathan_category(&s, &sp).map_err(|v| CliError::Violation(v.to_string()))?;
            let c = &sp.category;
            let mut arrows = Table::new("arrows", &["arrow", "cod", "element", "dom", "iso", "split mono"]);
            for a in 0..c.arrow_count() {
                let (f, x, e) = sp.triple(a);
                arrows.row(vec![
                    a.to_string(),
                    s.name(f),
                    s.name(x),
                    s.name(e),
                    yes(c.is_iso(a)).into(),
                    yes(c.is_split_mono(a)).into(),
                ]);
            }
            let mut sec = Section::new("idempotent splitting");
            sec.field("objects", names(&s, sp.idempotents.iter().copied())).field("arrows", c.arrow_count());
            let iso_classes: Vec<String> = c
                .isomorphism_classes()
                .iter()
                .map(|cl| format!("{{{}}}", names(&s, cl.iter().map(|&o| sp.idempotents[o]))))
                .collect();
            sec.field("isomorphism classes", iso_classes.join(" ")).table(arrows);
            let mut lsec = Section::new("split monomorphisms");
            let mut lt = Table::new("arrows", &["arrow", "cod", "element", "dom"]);
            for (i, &a) in lg.embed.iter().enumerate() {
                let (f, x, e) = sp.triple(a);
                lt.row(vec![i.to_string(), s.name(f), s.name(x), s.name(e)]);
            }
            lsec.field("arrows", lg.embed.len()).table(lt);
            let mut report = Report::new(echo);
            report.section(sec);
            report.section(lsec);
            Ok(pass(report))
        }
        Command::CatEquiv { left, right } => {
            let s = load_semigroup(left, limit)?;
            let t = load_semigroup(right, limit)?;
            let (ss, ts) = (idempotent_splitting(&s), idempotent_splitting(&t));
            let mut report = Report::new(echo);
            let mut sec = Section::new("idempotent splittings");
            sec.field("left", format!("{} objects, {} arrows", ss.category.object_count(), ss.category.arrow_count()))
                .field(
                    "right",
                    format!("{} objects, {} arrows", ts.category.object_count(), ts.category.arrow_count()),
                );
            match categories_equivalent(&ss.category, &ts.category) {
                EquivalenceVerdict::Equivalent(eq) => {
                    let mut objs = Table::new("functor on objects", &["object", "image"]);
                    for (o, &img) in eq.forward.objects.iter().enumerate() {
                        objs.row(vec![s.name(ss.idempotents[o]), t.name(ts.idempotents[img])]);
                    }
                    let mut arrows = Table::new("functor on arrows", &["arrow", "image"]);
                    for (a, &b) in eq.forward.arrows.iter().enumerate() {
                        let (f, x, e) = ss.triple(a);
                        let (g, y, d) = ts.triple(b);
                        arrows.row(vec![
                            format!("({}, {}, {})", s.name(f), s.name(x), s.name(e)),
                            format!("({}, {}, {})", t.name(g), t.name(y), t.name(d)),
                        ]);
                    }
                    sec.field("verdict", "equivalent").table(objs).table(arrows);
                    report.section(sec);
                    Ok(finish(report, Verdict::Pass, EXIT_OK))
                }
                EquivalenceVerdict::NotEquivalent(why) => {
                    sec.field("verdict", "not equivalent").field("reason", why);
                    report.section(sec);
                    Ok(finish(report, Verdict::Fail, EXIT_REFUTED))
                }
            }
        }
        Command::EnlargeCheck { input, subset } => {
            let s = load_semigroup(input, limit)?;
            let elems = parse_subset(&s, subset)?;
            let w = is_enlargement(&s, &elems).map_err(enlargement_error)?;
            let mut report = Report::new(echo);
            let mut sec = Section::new("enlargement");
            sec.field("subset", names(&s, elems.iter().copied()))
                .field("STS = S", yes(w.sts))
                .field("TST = T", yes(w.tst))
                .field("every idempotent is in STS", yes(w.idempotent_sts))
                .field("every idempotent of T is in TST", yes(w.idempotent_tst));
            report.section(sec);
            Ok(if w.holds() {
                finish(report, Verdict::Pass, EXIT_OK)
            } else {
                finish(report, Verdict::Fail, EXIT_FAIL)
            })
        }
        Command::ContextFromEnlargement { input, subset, output } => {
            let s = load_semigroup(input, limit)?;
            let elems = parse_subset(&s, subset)?;
            let ctx = canonical_context(&s, &elems).map_err(enlargement_error)?;
            let v = verify_context(&ctx);
            if !v.all_pass() {
                return Err(CliError::Violation(v.to_string()));
            }
            write_context(output, &ctx)?;
            let mut report = Report::new(echo);
            let mut sec = context_section("context", &ctx);
            sec.field("written", output.display());
            report.section(sec);
            Ok(pass(report))
        }
        Command::ContextVerify { input } => {
            let ctx = load_context(input, limit)?;
            let mut report = Report::new(echo);
            report.section(context_section("context", &ctx));
            let v = verify_context(&ctx);
            report.checks("axioms", &v);
            if !v.all_pass() {
                return Ok(finish(report, Verdict::Fail, EXIT_FAIL));
            }
            let d = derived_identities(&ctx).map_err(|e| match e {
                BimoduleError::Violation(v) => CliError::Violation(v.to_string()),
                other => CliError::Data(other.to_string()),
            })?;
            report.checks("derived identities", &d);
            if !d.all_pass() {
                return Err(CliError::Violation(d.to_string()));
            }
            Ok(pass(report))
        }
        Command::Compose { left, right, output } => {
            let c1 = load_context(left, limit)?;
            let mut c2 = load_context(right, limit)?;
            // accept a middle semigroup that matches only up to isomorphism
            if c1.t() != c2.s() {
                if let Some(map) = isomorphism(c2.s(), c1.t()) {
                    let ids: Vec<usize> = c2.t().elements().collect();
                    c2 = transport_context(&c2, c1.t(), &map, &c2.t().clone(), &ids);
                }
            }
            let ctx = compose_contexts(&c1, &c2).map_err(|e| match e {
                TensorError::WellDefinednessBroken { .. } => CliError::Violation(e.to_string()),
                other => CliError::Data(other.to_string()),
            })?;
            let v = verify_context(&ctx);
            if !v.all_pass() {
                return Err(CliError::Violation(v.to_string()));
            }
            if let Some(out) = output {
                write_context(out, &ctx)?;
            }
            let mut report = Report::new(echo);
            report.section(context_section("composite", &ctx));
            Ok(pass(report))
        }
        Command::Witness { input } => {
            let ctx = load_context(input, limit)?;
            let w = morita_witness(&ctx).map_err(groupoid_error)?;
            let (s, t) = (ctx.s(), ctx.t());
            let (us, ut) = (&w.universal_s, &w.universal_t);
            let mut z = Table::new("Z", &["point", "representative", "sigma", "tau"]);
            for p in 0..w.space.len() {
                let (x, c) = w.space.members(p).next().expect("nonempty class");
                z.row(vec![
                    p.to_string(),
                    format!("({x}, {})", character_name(t, ut, c)),
                    character_name(s, us, w.space.sigma[p]),
                    character_name(t, ut, w.space.tau[p]),
                ]);
            }
            let mut phi = Table::new("Phi", &["arrow", "source", "image"]);
            for (a, &b) in w.phi.arrows.iter().enumerate() {
                let (zp, g, zz) = w.amplified_s.triples[a];
                let (zp2, h, zz2) = w.amplified_t.triples[b];
                phi.row(vec![
                    a.to_string(),
                    format!("({zp}, {}, {zz})", germ_name(s, us, g)),
                    format!("({zp2}, {}, {zz2})", germ_name(t, ut, h)),
                ]);
            }
            let mut sec = Section::new("groupoid equivalence");
            sec.field("|Z|", w.space.len())
                .field(
                    "universal groupoid of S",
                    format!("{} units, {} arrows", us.groupoid.unit_count(), us.groupoid.arrow_count()),
                )
                .field(
                    "universal groupoid of T",
                    format!("{} units, {} arrows", ut.groupoid.unit_count(), ut.groupoid.arrow_count()),
                )
                .field("amplified arrows", w.phi.arrows.len())
                .field("Psi after Phi", "identity")
                .field("Phi after Psi", "identity")
                .table(z)
                .table(phi);
            let mut report = Report::new(echo);
            report.section(sec);
            Ok(pass(report))
        }
        Command::MeSearch { left, right, max_x, budget: secs, strategy, max_chain, output } => {
            let cfg = SearchConfig {
                max_bimodule_size: *max_x,
                max_chain_semigroup_size: *max_chain,
                time_budget: budget(*secs)?,
            };
            search(echo, cli, (left, right), cfg, *strategy, output.as_deref())
        }
        Command::Compare { left, right } => {
            let s = load_semigroup(left, limit)?;
            let t = load_semigroup(right, limit)?;
            let screen = invariant_screen(&s, &t);
            let mut report = Report::new(echo);
            report.checks("invariant checklist", &screen);
            Ok(if screen.all_pass() {
                finish(report, Verdict::Pass, EXIT_OK)
            } else {
                finish(report, Verdict::Fail, EXIT_REFUTED)
            })
        }
    }
}
