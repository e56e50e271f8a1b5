//! Seeded random generators for trees, sequences, presentations, and
//! notation, used by the self-test suites and property tests.
//!
//! Everything is driven by an explicit [`ChaCha8Rng`] so runs are exactly
//! reproducible from a seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsl::Expr;
use crate::family::NatSeqSpec;
use crate::finite::FiniteTree;
use crate::ordinal::OrdCNF;
use crate::seq::EPSeq;
use crate::spined::{CombSize, Mode, SpinedTree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniform random attachment tree with between 1 and `max_nodes` nodes.
pub fn random_finite(r: &mut impl Rng, max_nodes: usize) -> FiniteTree {
    let n = r.gen_range(1..=max_nodes.max(1));
    let mut kids: Vec<Vec<usize>> = vec![Vec::new()];
    for v in 1..n {
        let parent = r.gen_range(0..v);
        kids[parent].push(v);
        kids.push(Vec::new());
    }
    fn build(v: usize, kids: &[Vec<usize>]) -> FiniteTree {
        FiniteTree::node(kids[v].iter().map(|&k| build(k, kids)).collect())
    }
    build(0, &kids)
}

/// A random eventually periodic tree sequence with small entries.
pub fn random_epseq(r: &mut impl Rng, max_nodes: usize) -> EPSeq {
    let plen = r.gen_range(0..=2);
    let clen = r.gen_range(1..=3);
    let prefix = (0..plen).map(|_| random_finite(r, max_nodes)).collect();
    let cycle = (0..clen).map(|_| random_finite(r, max_nodes)).collect();
    EPSeq::new(prefix, cycle).expect("cycle is nonempty")
}

fn random_lengths(r: &mut impl Rng) -> NatSeqSpec {
    match r.gen_range(0..4) {
        0 => NatSeqSpec::ones(),
        1 => {
            let p = [2usize, 3, 5][r.gen_range(0..3)];
            NatSeqSpec::prime_powers(p).expect("prime")
        }
        _ => {
            let plen = r.gen_range(0..=2);
            let clen = r.gen_range(1..=2);
            let prefix = (0..plen).map(|_| r.gen_range(1..=4)).collect();
            let cycle = (0..clen).map(|_| r.gen_range(1..=4)).collect();
            NatSeqSpec::periodic(prefix, cycle).expect("cycle is nonempty")
        }
    }
}

fn random_mode(r: &mut impl Rng) -> Mode {
    if r.gen_bool(0.5) {
        Mode::Attach
    } else {
        Mode::Glue
    }
}

/// A decoration slot drawn from the decidable shapes: empty, a small finite
/// tree, or a small finite canonical tree.
fn simple_slot(r: &mut impl Rng, allow_empty: bool) -> Option<SpinedTree> {
    match r.gen_range(0..if allow_empty { 4 } else { 3 }) {
        0 => Some(SpinedTree::Fin(random_finite(r, 4))),
        1 => Some(SpinedTree::Fin(FiniteTree::star(r.gen_range(1..=3)))),
        2 => Some(SpinedTree::SOrd(OrdCNF::finite(r.gen_range(0..=2)))),
        _ => None,
    }
}

/// A periodic spine presentation over decidable slot shapes, with an
/// occasional nested spine in the cycle.  Used where presentations are
/// compared or reduced en masse and every verdict must be definite.
pub fn random_periodic(r: &mut impl Rng) -> SpinedTree {
    let mode = random_mode(r);
    let plen = r.gen_range(0..=2);
    let clen = r.gen_range(1..=3);
    let prefix: Vec<_> = (0..plen).map(|_| simple_slot(r, true)).collect();
    let mut cycle: Vec<_> = (0..clen).map(|_| simple_slot(r, true)).collect();
    if cycle.iter().all(Option::is_none) {
        cycle[0] = simple_slot(r, false);
    }
    if r.gen_bool(0.3) {
        let inner = SpinedTree::spine(
            random_mode(r),
            Vec::new(),
            vec![Some(SpinedTree::Fin(random_finite(r, 3)))],
        )
        .expect("nonempty cycle");
        let at = r.gen_range(0..cycle.len());
        cycle[at] = Some(inner);
    }
    let t = SpinedTree::spine(mode, prefix, cycle).expect("nonempty cycle");
    t.with_lengths(random_lengths(r)).expect("spine carries lengths")
}

/// A presentation of order at most 1 whose branching sits in a finite core:
/// a finite tree, a trivial canonical tree, or a spine whose recurring slots
/// are all empty.
pub fn random_order1(r: &mut impl Rng, depth: usize) -> SpinedTree {
    if depth == 0 || r.gen_bool(0.25) {
        return match r.gen_range(0..3) {
            0 => SpinedTree::Fin(random_finite(r, 4)),
            1 => SpinedTree::SOrd(OrdCNF::finite(r.gen_range(0..=1))),
            _ => SpinedTree::ray(),
        };
    }
    let mode = random_mode(r);
    let plen = r.gen_range(0..=3);
    let prefix: Vec<_> = (0..plen)
        .map(|_| {
            if r.gen_bool(0.3) {
                None
            } else {
                Some(random_order1(r, depth - 1))
            }
        })
        .collect();
    let t = SpinedTree::spine(mode, prefix, vec![None]).expect("nonempty cycle");
    t.with_lengths(random_lengths(r)).expect("spine carries lengths")
}

/// A fully decorated periodic presentation satisfying the recurrence
/// conditions, suitable as a base for length substitution.
pub fn random_dense_base(r: &mut impl Rng) -> SpinedTree {
    let mode = random_mode(r);
    let clen = r.gen_range(1..=2);
    let cycle: Vec<_> = (0..clen)
        .map(|_| match r.gen_range(0..3) {
            0 => Some(SpinedTree::Fin(random_finite(r, 3))),
            1 => Some(SpinedTree::SOrd(OrdCNF::finite(1))),
            _ => Some(SpinedTree::ray()),
        })
        .collect();
    SpinedTree::spine(mode, Vec::new(), cycle).expect("nonempty cycle")
}

fn random_ordinal(r: &mut impl Rng) -> OrdCNF {
    let mut terms: Vec<(u32, u32)> = Vec::new();
    let mut exp = r.gen_range(0..4u32);
    loop {
        terms.push((exp, r.gen_range(1..4u32)));
        if exp == 0 || terms.len() == 3 || r.gen_bool(0.5) {
            break;
        }
        exp = r.gen_range(0..exp);
    }
    OrdCNF::from_terms(terms).expect("exponents strictly decrease")
}

fn random_slot_expr(r: &mut impl Rng, depth: usize) -> Option<Expr> {
    if r.gen_bool(0.25) {
        None
    } else {
        Some(random_tree_expr(r, depth))
    }
}

fn random_tree_expr(r: &mut impl Rng, depth: usize) -> Expr {
    let top = if depth == 0 { 3 } else { 5 };
    match r.gen_range(0..top) {
        0 => Expr::Fin(random_finite(r, 5)),
        1 => Expr::SOrd(random_ordinal(r)),
        2 => {
            let hairy = r.gen_bool(0.5);
            let size = if r.gen_bool(0.25) {
                CombSize::Omega
            } else {
                CombSize::Finite(r.gen_range(if hairy { 1..=5 } else { 2..=5 }))
            };
            Expr::Comb { size, hairy }
        }
        3 => {
            let plen = r.gen_range(0..=2);
            let clen = r.gen_range(1..=2);
            Expr::Spine {
                mode: random_mode(r),
                prefix: (0..plen).map(|_| random_slot_expr(r, depth - 1)).collect(),
                cycle: (0..clen).map(|_| random_slot_expr(r, depth - 1)).collect(),
            }
        }
        _ => {
            let clen = r.gen_range(1..=2);
            let base = Expr::Spine {
                mode: random_mode(r),
                prefix: Vec::new(),
                cycle: (0..clen).map(|_| Some(random_tree_expr(r, 0))).collect(),
            };
            Expr::Sf { base: Box::new(base), lengths: random_lengths(r) }
        }
    }
}

/// A random expression covering every notation form.
pub fn random_expr(r: &mut impl Rng) -> Expr {
    if r.gen_bool(0.15) {
        let plen = r.gen_range(0..=2);
        let clen = r.gen_range(1..=2);
        Expr::Seq {
            prefix: (0..plen).map(|_| random_finite(r, 3)).collect(),
            cycle: (0..clen).map(|_| random_finite(r, 3)).collect(),
        }
    } else {
        random_tree_expr(r, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..20 {
            assert_eq!(random_expr(&mut a), random_expr(&mut b));
        }
    }

    #[test]
    fn finite_sizes_in_range() {
        let mut r = rng(1);
        for _ in 0..200 {
            let t = random_finite(&mut r, 6);
            assert!((1..=6).contains(&t.size()));
        }
    }

    #[test]
    fn presentations_validate() {
        let mut r = rng(2);
        for _ in 0..100 {
            random_periodic(&mut r).validate().unwrap();
            random_dense_base(&mut r).validate().unwrap();
            let o1 = random_order1(&mut r, 2);
            o1.validate().unwrap();
            assert!(o1.order() <= OrdCNF::finite(1));
        }
    }
}
