//! Self-test suite: one runnable check per advertised guarantee, with the
//! scales and tolerances pinned.  The `selftest` CLI command and the
//! acceptance integration tests both run these.

use crate::dot::emit_dot;
use crate::dsl::parse;
use crate::embed::{brute_force_minor, rooted_minor, topo_equiv};
use crate::family::{
    collapse_presentation, family_generate, order1_canonical, presentation_iso_certified,
    reroot_invariance_check, IsoVerdict,
};
use crate::finite::{convolution_counts, FiniteTree};
use crate::generate;
use crate::ordinal::OrdCNF;
use crate::seq::{leq_star_outcome, t_f_truncate, EPSeq, GreedyFailure, LeqStarOutcome};
use crate::seq::bounded_matching_oracle;
use crate::spined::{
    build_s, make_comb, spined_equiv, spined_minor, t_star, CombSize, SpinedTree,
};
use crate::verdict::Verdict;

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub const CRITERION_COUNT: usize = 14;

pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERION_COUNT).map(run).collect()
}

pub fn run(id: usize) -> CriterionReport {
    let (name, outcome) = match id {
        1 => ("embedding agrees with exhaustive search", c01()),
        2 => ("mutual embedding of finite trees is isomorphism", c02()),
        3 => ("enumeration counts match the convolution recurrence", c03()),
        4 => ("sequence domination agrees with the matching oracle", c04()),
        5 => ("sequence verdicts survive caterpillar spot checks", c05()),
        6 => ("canonical tree hierarchy is ordered by its indices", c06()),
        7 => ("canonical truncations fit in bounded-depth binary trees", c07()),
        8 => ("comb families form chains", c08()),
        9 => ("wide-ray extraction shrinks as the width grows", c09()),
        10 => ("length substitution yields equivalent non-isomorphic trees", c10()),
        11 => ("collapsing gaps preserves the tree", c11()),
        12 => ("finite-core forms separate order-one presentations", c12()),
        13 => ("unrooted embedding ignores the choice of root", c13()),
        14 => ("notation round-trips and rendering is deterministic", c14()),
        _ => panic!("no criterion {id}"),
    };
    let (pass, detail) = outcome;
    CriterionReport { id, name, pass, detail }
}

fn trees_up_to(n: usize) -> Vec<FiniteTree> {
    (1..=n)
        .flat_map(|k| FiniteTree::enumerate_rooted_trees(k).expect("within enumeration bound"))
        .collect()
}

fn c01() -> (bool, String) {
    let ts = trees_up_to(7);
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for t in &ts {
        for s in &ts {
            pairs += 1;
            let fast = rooted_minor(t, s);
            match brute_force_minor(t, s) {
                Ok(slow) if slow == fast => {}
                _ => bad += 1,
            }
        }
    }
    (bad == 0, format!("{pairs} ordered pairs up to 7 nodes, {bad} disagreements"))
}

fn c02() -> (bool, String) {
    let ts = trees_up_to(8);
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for t in &ts {
        for s in &ts {
            pairs += 1;
            if topo_equiv(t, s) != t.is_isomorphic(s) {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{pairs} ordered pairs up to 8 nodes, {bad} disagreements"))
}

fn c03() -> (bool, String) {
    let expect = [1usize, 1, 2, 4, 9, 20, 48, 115, 286];
    let conv = convolution_counts(9);
    let mut bad = Vec::new();
    for n in 1..=9 {
        let got = FiniteTree::enumerate_rooted_trees(n).expect("within bound").len();
        if got != conv[n] || got != expect[n - 1] {
            bad.push(n);
        }
    }
    (bad.is_empty(), format!("sizes 1..=9 against two independent counts, mismatches at {bad:?}"))
}

fn c04() -> (bool, String) {
    let mut r = generate::rng(0x04);
    let mut bad = 0usize;
    for _ in 0..500 {
        let f = generate::random_epseq(&mut r, 5);
        let g = generate::random_epseq(&mut r, 5);
        let fast = matches!(leq_star_outcome(&f, &g), LeqStarOutcome::Holds { .. });
        if fast != bounded_matching_oracle(&f, &g) {
            bad += 1;
        }
    }
    (bad == 0, format!("500 random sequence pairs, {bad} disagreements"))
}

fn host_bound(f: &EPSeq, g: &EPSeq) -> usize {
    g.prefix().len() + g.cycle().len() * (f.unrolling_bound(g) + 1) + 1
}

fn verify_failure(f: &EPSeq, g: &EPSeq, cert: &GreedyFailure) -> bool {
    match cert {
        GreedyFailure::CycleClassStuck { f_cycle_index } => {
            let fc = match f.cycle().get(*f_cycle_index) {
                Some(t) => t,
                None => return false,
            };
            g.cycle().iter().all(|gc| !rooted_minor(fc, gc))
        }
        GreedyFailure::PrefixStuck { f_index, ks } => {
            if ks.len() != *f_index {
                return false;
            }
            let mut prev: Option<usize> = None;
            for (n, &k) in ks.iter().enumerate() {
                if prev.is_some_and(|p| k <= p) || !rooted_minor(f.entry(n), g.entry(k)) {
                    return false;
                }
                prev = Some(k);
            }
            let start = prev.map_or(0, |p| p + 1);
            (start..host_bound(f, g)).all(|k| !rooted_minor(f.entry(*f_index), g.entry(k)))
        }
    }
}

fn c05() -> (bool, String) {
    let mut r = generate::rng(0x05);
    let (mut holds, mut fails) = (0usize, 0usize);
    let mut bad = 0usize;
    let mut attempts = 0usize;
    while (holds < 200 || fails < 50) && attempts < 20_000 {
        attempts += 1;
        let f = generate::random_epseq(&mut r, 5);
        let g = generate::random_epseq(&mut r, 5);
        match leq_star_outcome(&f, &g) {
            LeqStarOutcome::Holds { .. } if holds < 200 => {
                holds += 1;
                for n in 1..=5usize {
                    // the greedy witness matches entry n by host position
                    // prefix + n * cycle, so this horizon always suffices
                    let bound = g.prefix().len() + g.cycle().len() * (n + 1) + 1;
                    let guest = t_f_truncate(&f, n);
                    if !(1..=bound).any(|m| rooted_minor(&guest, &t_f_truncate(&g, m))) {
                        bad += 1;
                    }
                }
            }
            LeqStarOutcome::Fails { certificate } if fails < 50 => {
                fails += 1;
                if !verify_failure(&f, &g, &certificate) {
                    bad += 1;
                }
            }
            _ => {}
        }
    }
    (
        holds == 200 && fails == 50 && bad == 0,
        format!("{holds} positive and {fails} negative verdicts re-checked, {bad} failures"),
    )
}

fn c06() -> (bool, String) {
    let alphas: Vec<OrdCNF> = vec![
        OrdCNF::finite(1),
        OrdCNF::finite(2),
        OrdCNF::finite(3),
        OrdCNF::omega(),
        OrdCNF::omega().succ(),
        OrdCNF::from_terms(vec![(1, 2)]).expect("valid terms"),
        OrdCNF::from_terms(vec![(2, 1)]).expect("valid terms"),
        OrdCNF::from_terms(vec![(2, 1), (1, 1), (0, 1)]).expect("valid terms"),
    ];
    let mut bad = 0usize;
    for a in &alphas {
        if build_s(a).order() != *a {
            bad += 1;
        }
        for b in &alphas {
            let want = Verdict::from_bool(a <= b);
            match spined_minor(&SpinedTree::SOrd(a.clone()), &SpinedTree::SOrd(b.clone())) {
                Ok(v) if v == want => {}
                _ => bad += 1,
            }
        }
    }
    (bad == 0, format!("8 orders and 64 ordered pairs, {bad} mismatches"))
}

fn c07() -> (bool, String) {
    let host = FiniteTree::complete_binary(12);
    let alphas: Vec<(&str, OrdCNF)> = vec![
        ("1", OrdCNF::finite(1)),
        ("2", OrdCNF::finite(2)),
        ("3", OrdCNF::finite(3)),
        ("w", OrdCNF::omega()),
    ];
    let mut bad: Vec<String> = Vec::new();
    for (label, a) in &alphas {
        let t = build_s(a);
        for k in 1..=4usize {
            let trunc = t.truncate(k, k).expect("small truncation");
            // fitting some depth up to 12 is the same as fitting depth 12
            if !rooted_minor(&trunc, &host) {
                bad.push(format!("({label},{k})"));
            }
        }
    }
    (
        bad.is_empty(),
        format!("16 truncations against depth 12, failures at [{}]", bad.join(", ")),
    )
}

fn c08() -> (bool, String) {
    let mut bad = 0usize;
    let mut checks = 0usize;
    for hairy in [false, true] {
        let omega = make_comb(CombSize::Omega, hairy).expect("valid comb");
        for n in 2..=6usize {
            let small = make_comb(CombSize::Finite(n), hairy).expect("valid comb");
            checks += 2;
            if !matches!(spined_minor(&small, &omega), Ok(Verdict::True)) {
                bad += 1;
            }
            if matches!(spined_minor(&omega, &small), Ok(Verdict::True)) {
                bad += 1;
            }
            for m in n..=6usize {
                let large = make_comb(CombSize::Finite(m), hairy).expect("valid comb");
                checks += 1;
                if !matches!(spined_minor(&small, &large), Ok(Verdict::True)) {
                    bad += 1;
                }
                if m > n {
                    checks += 1;
                    if matches!(spined_minor(&large, &small), Ok(Verdict::True)) {
                        bad += 1;
                    }
                }
            }
        }
    }
    (bad == 0, format!("{checks} comb comparisons, {bad} wrong verdicts"))
}

fn opt_order(t: &Option<SpinedTree>) -> Option<OrdCNF> {
    t.as_ref().map(SpinedTree::order)
}

fn c09() -> (bool, String) {
    let mut r = generate::rng(0x90);
    let mut bad = 0usize;
    for _ in 0..100 {
        let t = generate::random_periodic(&mut r);
        let mut finite: Vec<Option<SpinedTree>> = Vec::new();
        let mut errs = false;
        for n in 3..=6u32 {
            match t_star(&t, CombSize::Finite(n as usize)) {
                Ok(res) => finite.push(res),
                Err(_) => errs = true,
            }
        }
        let at_omega = match t_star(&t, CombSize::Omega) {
            Ok(res) => res,
            Err(_) => {
                errs = true;
                None
            }
        };
        if errs {
            bad += 1;
            continue;
        }
        for w in finite.windows(2) {
            // widening the requirement can only shrink what survives
            match (opt_order(&w[1]), opt_order(&w[0])) {
                (Some(next), Some(prev)) if next > prev => bad += 1,
                (Some(_), None) => bad += 1,
                _ => {}
            }
        }
        for f in &finite {
            match (opt_order(&at_omega), opt_order(f)) {
                (Some(w), Some(n)) if w > n => bad += 1,
                (Some(_), None) => bad += 1,
                _ => {}
            }
        }
    }
    (bad == 0, format!("100 presentations over widths 3..=6 and w, {bad} violations"))
}

fn c10() -> (bool, String) {
    let base = SpinedTree::spine(
        crate::spined::Mode::Attach,
        Vec::new(),
        vec![Some(SpinedTree::ray())],
    )
    .expect("nonempty cycle");
    let fam = match family_generate(&base, 20) {
        Ok(f) => f,
        Err(e) => return (false, format!("family construction failed: {e}")),
    };
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for i in 0..fam.len() {
        for j in (i + 1)..fam.len() {
            pairs += 1;
            let fwd = matches!(spined_minor(&fam[i], &fam[j]), Ok(Verdict::True));
            let bwd = matches!(spined_minor(&fam[j], &fam[i]), Ok(Verdict::True));
            let (v, cert) = presentation_iso_certified(&fam[i], &fam[j]);
            let separated = v == IsoVerdict::NonIso
                && cert.is_some_and(|c| c.verify(&fam[i], &fam[j]));
            if !(fwd && bwd && separated) {
                bad += 1;
            }
        }
    }
    (
        fam.len() == 20 && bad == 0,
        format!("20 members, {pairs} unordered pairs, {bad} failures"),
    )
}

fn c11() -> (bool, String) {
    let mut r = generate::rng(0x11);
    let mut bad = 0usize;
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < 100 && attempts < 2000 {
        attempts += 1;
        let t = generate::random_periodic(&mut r);
        // presentations whose collapse is rejected (e.g. an undecorated root
        // ahead of one-off decorations) are outside the population
        let Ok(c) = collapse_presentation(&t) else { continue };
        done += 1;
        let fwd = matches!(spined_minor(&t, &c), Ok(Verdict::True));
        let bwd = matches!(spined_minor(&c, &t), Ok(Verdict::True));
        if !(fwd && bwd) {
            bad += 1;
        }
    }
    (
        bad == 0 && done == 100,
        format!("{done} presentations collapsed, {bad} equivalence failures"),
    )
}

fn c12() -> (bool, String) {
    let mut r = generate::rng(0x12);
    let ts: Vec<SpinedTree> = (0..100).map(|_| generate::random_order1(&mut r, 2)).collect();
    let mut forms = Vec::with_capacity(ts.len());
    for t in &ts {
        match order1_canonical(t) {
            Ok(f) => forms.push(f),
            Err(e) => return (false, format!("canonical form failed: {e}")),
        }
    }
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for i in 0..ts.len() {
        for j in (i + 1)..ts.len() {
            pairs += 1;
            let same_form = forms[i] == forms[j];
            let equiv = matches!(spined_equiv(&ts[i], &ts[j]), Ok(Verdict::True));
            if same_form != equiv {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{pairs} pairs of order-one presentations, {bad} disagreements"))
}

fn c13() -> (bool, String) {
    let ts = trees_up_to(6);
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for t in &ts {
        for s in &ts {
            pairs += 1;
            if !reroot_invariance_check(t, s) {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{pairs} ordered pairs up to 6 nodes, {bad} root-dependent verdicts"))
}

fn c14() -> (bool, String) {
    let mut r = generate::rng(0x14);
    let mut bad = 0usize;
    for _ in 0..1000 {
        let e = generate::random_expr(&mut r);
        match parse(&e.to_string()) {
            Ok(back) if back == e => {}
            _ => bad += 1,
        }
    }
    let mut dot_bad = 0usize;
    for t in trees_up_to(5) {
        let a = emit_dot(&t);
        if a != emit_dot(&t) || a != emit_dot(&t.canonicalize()) {
            dot_bad += 1;
        }
    }
    (
        bad == 0 && dot_bad == 0,
        format!("1000 notation round-trips ({bad} failed), 37 renders ({dot_bad} unstable)"),
    )
}
