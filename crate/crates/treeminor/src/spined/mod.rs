//! Infinite trees presented as decorated spines.
//!
//! A spined tree denotes a rooted, locally finite tree built from a one-way
//! infinite path (the spine) whose nodes carry optional decorations. A
//! decoration is either attached below a fresh child edge or glued so that
//! its root fuses with the spine node. Decorations are themselves spined
//! trees, so presentations nest, but the nesting depth is always finite.

pub mod minor;
pub mod tstar;

pub use minor::{spined_equiv, spined_minor, spined_minor_certified, MinorCertificate};
pub use tstar::t_star;

use crate::error::{Error, Result};
use crate::family::NatSeqSpec;
use crate::finite::FiniteTree;
use crate::ordinal::{ord_max, OrdCNF};

/// How a decoration meets its spine node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The decoration hangs below a new edge from the spine node.
    Attach,
    /// The decoration's root is identified with the spine node.
    Glue,
}

/// The decoration sequence along a spine, one entry per spine node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSeq {
    /// `prefix` one-off slots followed by `cycle` repeating forever.
    /// The cycle must be nonempty.
    Periodic { prefix: Vec<Option<SpinedTree>>, cycle: Vec<Option<SpinedTree>> },
    /// Slot `n` is the expansion of the `n`-th canonical approximant of the
    /// stored ordinal, which must be a limit.
    OrdinalRamp(OrdCNF),
    /// Slot `n` is the star with `n + 1` leaves.
    VRamp,
}

/// A presentation of a rooted, locally finite tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpinedTree {
    /// A finite tree, given explicitly.
    Fin(FiniteTree),
    /// A spine with decorations and edge lengths.
    Spine { mode: Mode, gen: GenSeq, lengths: NatSeqSpec },
    /// Shorthand for the canonical tree of the given order.
    SOrd(OrdCNF),
}

/// Largest child count over the nodes of a tree, which may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branching {
    Finite(usize),
    Unbounded,
}

impl std::fmt::Display for Branching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branching::Finite(n) => write!(f, "{n}"),
            Branching::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// One maximal ray of an infinite tree, identified by the chain of prefix
/// slots descended from the outermost spine, ending at the spine realizing
/// the tree's order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayDescriptor {
    pub path: Vec<usize>,
    pub order: OrdCNF,
}

impl std::fmt::Display for RayDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in &self.path {
            write!(f, "slot[{i}]/")?;
        }
        write!(f, "spine")
    }
}

/// Size parameter for combs: a finite tooth width or the unbounded case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombSize {
    Finite(usize),
    Omega,
}

impl std::fmt::Display for CombSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CombSize::Finite(n) => write!(f, "{n}"),
            CombSize::Omega => write!(f, "w"),
        }
    }
}

impl std::str::FromStr for CombSize {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "w" {
            Ok(CombSize::Omega)
        } else {
            s.parse::<usize>()
                .map(CombSize::Finite)
                .map_err(|_| Error::invalid(format!("expected a number or 'w', got {s:?}")))
        }
    }
}

/// Default node budget for truncations.
pub const DEFAULT_TRUNCATE_NODE_CAP: usize = 10_000;

impl GenSeq {
    /// The decoration at spine position `i`, expanded to an owned tree.
    pub(crate) fn slot(&self, i: usize) -> Result<Option<SpinedTree>> {
        match self {
            GenSeq::Periodic { prefix, cycle } => {
                if i < prefix.len() {
                    Ok(prefix[i].clone())
                } else if cycle.is_empty() {
                    Err(Error::invalid("decoration cycle must be nonempty"))
                } else {
                    Ok(cycle[(i - prefix.len()) % cycle.len()].clone())
                }
            }
            GenSeq::OrdinalRamp(l) => {
                let n = u32::try_from(i)
                    .map_err(|_| Error::invalid("ramp index out of range"))?;
                Ok(Some(build_s(&l.fundamental(n)?)))
            }
            GenSeq::VRamp => Ok(Some(SpinedTree::Fin(FiniteTree::star(i + 1)))),
        }
    }

}

/// The canonical tree of order `alpha`.
///
/// Order 0 is a single vertex and order 1 is a bare ray. A successor is a
/// spine whose every node carries the previous canonical tree below a fresh
/// edge; a limit is a spine carrying its increasing canonical approximants.
pub fn build_s(alpha: &OrdCNF) -> SpinedTree {
    if alpha.is_zero() {
        return SpinedTree::Fin(FiniteTree::leaf());
    }
    if *alpha == OrdCNF::finite(1) {
        return SpinedTree::Spine {
            mode: Mode::Attach,
            gen: GenSeq::Periodic { prefix: Vec::new(), cycle: vec![None] },
            lengths: NatSeqSpec::ones(),
        };
    }
    match alpha.pred() {
        Some(beta) => SpinedTree::Spine {
            mode: Mode::Attach,
            gen: GenSeq::Periodic { prefix: Vec::new(), cycle: vec![Some(build_s(&beta))] },
            lengths: NatSeqSpec::ones(),
        },
        None => SpinedTree::Spine {
            mode: Mode::Attach,
            gen: GenSeq::OrdinalRamp(alpha.clone()),
            lengths: NatSeqSpec::ones(),
        },
    }
}

/// `comb(n)`: a spine whose every node has `n - 1` extra pendant leaves, so
/// each spine node has degree `n` (counting the spine continuation); needs
/// `n >= 2`. `comb(w)` grows the pendant count without bound.
///
/// The hairy variant hangs a whole star below a fresh edge instead:
/// `hairycomb(n)` needs `n >= 1` and puts the `n`-leaf star below each spine
/// node; `hairycomb(w)` grows the stars without bound.
pub fn make_comb(size: CombSize, hairy: bool) -> Result<SpinedTree> {
    let (mode, gen) = match (size, hairy) {
        (CombSize::Finite(n), true) => {
            if n < 1 {
                return Err(Error::invalid("hairy comb needs teeth of at least 1"));
            }
            let slot = Some(SpinedTree::Fin(FiniteTree::star(n)));
            (Mode::Attach, GenSeq::Periodic { prefix: Vec::new(), cycle: vec![slot] })
        }
        (CombSize::Finite(n), false) => {
            if n < 2 {
                return Err(Error::invalid("comb needs width at least 2"));
            }
            let slot = Some(SpinedTree::Fin(FiniteTree::star(n - 1)));
            (Mode::Glue, GenSeq::Periodic { prefix: Vec::new(), cycle: vec![slot] })
        }
        (CombSize::Omega, true) => (Mode::Attach, GenSeq::VRamp),
        (CombSize::Omega, false) => (Mode::Glue, GenSeq::VRamp),
    };
    Ok(SpinedTree::Spine { mode, gen, lengths: NatSeqSpec::ones() })
}

impl SpinedTree {
    /// A bare ray.
    pub fn ray() -> SpinedTree {
        build_s(&OrdCNF::finite(1))
    }

    /// A periodic spine with unit edge lengths; the cycle must be nonempty.
    pub fn spine(
        mode: Mode,
        prefix: Vec<Option<SpinedTree>>,
        cycle: Vec<Option<SpinedTree>>,
    ) -> Result<SpinedTree> {
        if cycle.is_empty() {
            return Err(Error::invalid("decoration cycle must be nonempty"));
        }
        Ok(SpinedTree::Spine {
            mode,
            gen: GenSeq::Periodic { prefix, cycle },
            lengths: NatSeqSpec::ones(),
        })
    }

    /// Replace the spine edge lengths.
    pub fn with_lengths(self, lengths: NatSeqSpec) -> Result<SpinedTree> {
        match self {
            SpinedTree::Spine { mode, gen, .. } => Ok(SpinedTree::Spine { mode, gen, lengths }),
            _ => Err(Error::invalid("only spines carry edge lengths")),
        }
    }

    /// Check the structural invariants: nonempty cycles, limit ordinals under
    /// ramps, positive edge lengths, recursively through all decorations.
    pub fn validate(&self) -> Result<()> {
        match self {
            SpinedTree::Fin(_) | SpinedTree::SOrd(_) => Ok(()),
            SpinedTree::Spine { gen, lengths, .. } => {
                match lengths {
                    NatSeqSpec::PeriodicNat { prefix, cycle } => {
                        if cycle.is_empty() {
                            return Err(Error::invalid("length cycle must be nonempty"));
                        }
                        if prefix.iter().chain(cycle).any(|&v| v == 0) {
                            return Err(Error::invalid("lengths must be at least 1"));
                        }
                    }
                    NatSeqSpec::PrimePowers { p } => {
                        if !crate::family::is_prime(*p) {
                            return Err(Error::invalid(format!("{p} is not prime")));
                        }
                    }
                }
                match gen {
                    GenSeq::Periodic { prefix, cycle } => {
                        if cycle.is_empty() {
                            return Err(Error::invalid("decoration cycle must be nonempty"));
                        }
                        for slot in prefix.iter().chain(cycle).flatten() {
                            slot.validate()?;
                        }
                        Ok(())
                    }
                    GenSeq::OrdinalRamp(l) => {
                        if !l.is_limit() {
                            return Err(Error::invalid("ramp ordinal must be a limit"));
                        }
                        Ok(())
                    }
                    GenSeq::VRamp => Ok(()),
                }
            }
        }
    }

    /// True when the presented tree has finitely many nodes.
    pub fn is_finite(&self) -> bool {
        match self {
            SpinedTree::Fin(_) => true,
            SpinedTree::SOrd(a) => a.is_zero(),
            SpinedTree::Spine { .. } => false,
        }
    }

    /// The tree's order: zero for finite trees, and for a spine the
    /// supremum-style rank determined by its decorations.
    pub fn order(&self) -> OrdCNF {
        match self {
            SpinedTree::Fin(_) => OrdCNF::zero(),
            SpinedTree::SOrd(a) => a.clone(),
            SpinedTree::Spine { gen, .. } => match gen {
                GenSeq::Periodic { prefix, cycle } => {
                    let cycle_max = cycle
                        .iter()
                        .flatten()
                        .map(|s| s.order())
                        .max()
                        .unwrap_or_else(OrdCNF::zero);
                    let mut o = cycle_max.succ();
                    for s in prefix.iter().flatten() {
                        o = ord_max(&o, &s.order());
                    }
                    o
                }
                GenSeq::OrdinalRamp(l) => l.clone(),
                GenSeq::VRamp => OrdCNF::finite(1),
            },
        }
    }

    /// The order the spine of this presentation itself realizes, ignoring
    /// prefix decorations. Finite trees have no spine.
    fn spine_order(&self) -> Option<OrdCNF> {
        match self {
            SpinedTree::Fin(_) => None,
            SpinedTree::SOrd(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(a.clone())
                }
            }
            SpinedTree::Spine { gen, .. } => Some(match gen {
                GenSeq::Periodic { cycle, .. } => cycle
                    .iter()
                    .flatten()
                    .map(|s| s.order())
                    .max()
                    .unwrap_or_else(OrdCNF::zero)
                    .succ(),
                GenSeq::OrdinalRamp(l) => l.clone(),
                GenSeq::VRamp => OrdCNF::finite(1),
            }),
        }
    }

    /// All rays realizing the tree's order. Finite trees have none; infinite
    /// presentations always have at least one and only finitely many, found
    /// on the outermost spine or inside prefix decorations.
    pub fn maximal_rays(&self) -> Vec<RayDescriptor> {
        let target = self.order();
        if target.is_zero() {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.collect_rays(&target, &mut Vec::new(), &mut out);
        out
    }

    fn collect_rays(&self, target: &OrdCNF, path: &mut Vec<usize>, out: &mut Vec<RayDescriptor>) {
        if self.spine_order().as_ref() == Some(target) {
            out.push(RayDescriptor { path: path.clone(), order: target.clone() });
        }
        if let SpinedTree::Spine { gen: GenSeq::Periodic { prefix, .. }, .. } = self {
            for (i, slot) in prefix.iter().enumerate() {
                if let Some(s) = slot {
                    if s.order() == *target {
                        path.push(i);
                        s.collect_rays(target, path, out);
                        path.pop();
                    }
                }
            }
        }
    }

    /// Order and maximal-ray count; the tree must be infinite.
    pub fn classify(&self) -> Result<(OrdCNF, usize)> {
        if self.is_finite() {
            return Err(Error::invalid("classification needs an infinite tree"));
        }
        let order = self.order();
        let rays = self.maximal_rays().len();
        Ok((order, rays))
    }

    /// Largest child count over all nodes of the denoted tree.
    pub fn max_branching(&self) -> Branching {
        match self {
            SpinedTree::Fin(t) => Branching::Finite(t.max_branching()),
            SpinedTree::SOrd(a) => Branching::Finite(match a.as_finite() {
                Some(0) => 0,
                Some(1) => 1,
                _ => 2,
            }),
            SpinedTree::Spine { mode, gen, .. } => match gen {
                GenSeq::VRamp => Branching::Unbounded,
                GenSeq::OrdinalRamp(_) => match mode {
                    // every slot is a canonical tree of branching at most 2
                    Mode::Attach => Branching::Finite(2),
                    Mode::Glue => Branching::Finite(3),
                },
                GenSeq::Periodic { prefix, cycle } => {
                    let mut best = Branching::Finite(1);
                    for slot in prefix.iter().chain(cycle.iter()) {
                        let node = match slot {
                            None => 1,
                            Some(s) => match mode {
                                Mode::Attach => 2,
                                Mode::Glue => 1 + s.root_children(),
                            },
                        };
                        best = best.max(Branching::Finite(node));
                        if let Some(s) = slot {
                            best = best.max(s.max_branching());
                        }
                    }
                    best
                }
            },
        }
    }

    /// Child count of the denoted tree's root.
    fn root_children(&self) -> usize {
        match self {
            SpinedTree::Fin(t) => t.children().len(),
            SpinedTree::SOrd(a) => match a.as_finite() {
                Some(0) => 0,
                Some(1) => 1,
                _ => 2,
            },
            SpinedTree::Spine { mode, gen, .. } => {
                let slot0 = match gen {
                    GenSeq::Periodic { prefix, cycle } => {
                        prefix.first().unwrap_or_else(|| &cycle[0]).clone()
                    }
                    GenSeq::OrdinalRamp(l) => l.fundamental(0).ok().map(SpinedTree::SOrd),
                    GenSeq::VRamp => Some(SpinedTree::Fin(FiniteTree::star(1))),
                };
                1 + match (&slot0, mode) {
                    (None, _) => 0,
                    (Some(_), Mode::Attach) => 1,
                    (Some(s), Mode::Glue) => s.root_children(),
                }
            }
        }
    }

    /// Finite approximation: keep `steps` spine nodes, recurse into
    /// decorations to `depth - 1`, materialize finite decorations whole, and
    /// respect edge lengths. Uses the default node budget.
    pub fn truncate(&self, steps: usize, depth: usize) -> Result<FiniteTree> {
        self.truncate_capped(steps, depth, DEFAULT_TRUNCATE_NODE_CAP)
    }

    /// As [`truncate`](Self::truncate) with an explicit node budget.
    pub fn truncate_capped(&self, steps: usize, depth: usize, cap: usize) -> Result<FiniteTree> {
        if steps == 0 {
            return Err(Error::invalid("truncation needs at least one spine step"));
        }
        if depth == 0 {
            return Err(Error::invalid("truncation needs depth at least one"));
        }
        let mut budget = cap;
        self.trunc(steps, depth, cap, &mut budget)
    }

    fn trunc(&self, steps: usize, depth: usize, cap: usize, budget: &mut usize) -> Result<FiniteTree> {
        let take = |budget: &mut usize, n: usize| -> Result<()> {
            if *budget < n {
                Err(Error::limit("truncation nodes", cap))
            } else {
                *budget -= n;
                Ok(())
            }
        };
        match self {
            SpinedTree::Fin(t) => {
                take(budget, t.size())?;
                Ok(t.clone())
            }
            SpinedTree::SOrd(a) => build_s(a).trunc(steps, depth, cap, budget),
            SpinedTree::Spine { mode, gen, lengths } => {
                let mut tail: Option<FiniteTree> = None;
                for i in (0..steps).rev() {
                    let mut kids: Vec<FiniteTree> = Vec::new();
                    if depth >= 2 {
                        if let Some(slot) = gen.slot(i)? {
                            let sub = slot.trunc(steps, depth - 1, cap, budget)?;
                            match mode {
                                Mode::Attach => kids.push(sub),
                                Mode::Glue => {
                                    kids.extend(sub.children().iter().cloned());
                                    // the decoration root fuses away
                                    *budget += 1;
                                }
                            }
                        }
                    }
                    if let Some(next) = tail.take() {
                        let mut link = next;
                        for _ in 1..lengths.value(i) {
                            take(budget, 1)?;
                            link = FiniteTree::node(vec![link]);
                        }
                        kids.push(link);
                    }
                    take(budget, 1)?;
                    tail = Some(FiniteTree::node(kids));
                }
                Ok(tail.expect("steps >= 1"))
            }
        }
    }

    /// Rewrite to a canonical-ish form denoting an equivalent tree: finite
    /// parts in canonical order, ramps and recognizable spine shapes folded
    /// into ordinal shorthand, glued single vertices dropped. Edge lengths
    /// in the recurring region become 1: an embedding there can always shift
    /// a whole period deeper, so only the lengths between one-off spine
    /// nodes distinguish presentations.
    pub fn normalize_deep(&self) -> SpinedTree {
        match self {
            SpinedTree::Fin(t) => SpinedTree::Fin(t.canonicalize()),
            SpinedTree::SOrd(a) => {
                if a.is_zero() {
                    SpinedTree::Fin(FiniteTree::leaf())
                } else {
                    SpinedTree::SOrd(a.clone())
                }
            }
            SpinedTree::Spine { mode, gen, lengths } => match gen {
                GenSeq::OrdinalRamp(l) if l.is_limit() => SpinedTree::SOrd(l.clone()),
                GenSeq::OrdinalRamp(l) => SpinedTree::Spine {
                    mode: *mode,
                    gen: GenSeq::OrdinalRamp(l.clone()),
                    lengths: NatSeqSpec::ones(),
                },
                GenSeq::VRamp => SpinedTree::Spine {
                    mode: *mode,
                    gen: GenSeq::VRamp,
                    lengths: NatSeqSpec::ones(),
                },
                GenSeq::Periodic { prefix, cycle } => {
                    let norm = |slot: &Option<SpinedTree>| -> Option<SpinedTree> {
                        let s = slot.as_ref()?.normalize_deep();
                        if *mode == Mode::Glue {
                            if let SpinedTree::Fin(t) = &s {
                                if t.size() == 1 {
                                    // gluing a single vertex adds nothing
                                    return None;
                                }
                            }
                        }
                        Some(s)
                    };
                    let mut prefix: Vec<_> = prefix.iter().map(norm).collect();
                    let cycle: Vec<_> = cycle.iter().map(norm).collect();
                    if prefix.iter().all(Option::is_none) {
                        prefix.clear();
                    }
                    if prefix.is_empty() {
                        if cycle.iter().all(Option::is_none) {
                            return SpinedTree::SOrd(OrdCNF::finite(1));
                        }
                        let uniform = cycle.iter().all(|s| {
                            matches!(
                                (s, &cycle[0]),
                                (Some(SpinedTree::SOrd(a)), Some(SpinedTree::SOrd(b))) if a == b
                            )
                        });
                        if uniform {
                            if let Some(SpinedTree::SOrd(g)) = &cycle[0] {
                                return SpinedTree::SOrd(g.succ());
                            }
                        }
                    }
                    SpinedTree::Spine {
                        mode: *mode,
                        lengths: one_off_lengths(lengths, 0, prefix.len()),
                        gen: GenSeq::Periodic { prefix, cycle },
                    }
                }
            },
        }
    }

    /// The subtree rooted at spine node `m`, for periodic spines.
    pub(crate) fn tail(&self, m: usize) -> SpinedTree {
        if m == 0 {
            return self.clone();
        }
        match self {
            SpinedTree::Spine { mode, gen: GenSeq::Periodic { prefix, cycle }, lengths } => {
                let shifted = one_off_lengths(lengths, m, prefix.len());
                let (prefix, cycle) = if m < prefix.len() {
                    (prefix[m..].to_vec(), cycle.clone())
                } else {
                    let r = (m - prefix.len()) % cycle.len();
                    let mut rolled = cycle[r..].to_vec();
                    rolled.extend_from_slice(&cycle[..r]);
                    (Vec::new(), rolled)
                };
                SpinedTree::Spine {
                    mode: *mode,
                    gen: GenSeq::Periodic { prefix, cycle },
                    lengths: shifted,
                }
            }
            _ => self.clone(),
        }
    }

    /// The same tree pushed `k` bare unit steps deeper: a path of `k` extra
    /// nodes above the root. Ramps and canonical trees embed into their own
    /// tails, so for them the extra path is absorbed and `self` is returned
    /// unchanged.
    pub(crate) fn with_leading_gap(&self, k: usize) -> SpinedTree {
        if k == 0 {
            return self.clone();
        }
        match self {
            SpinedTree::Spine { mode, gen: GenSeq::Periodic { prefix, cycle }, lengths } => {
                let mut vals = vec![1usize; k];
                vals.extend((0..prefix.len().saturating_sub(1)).map(|i| lengths.value(i)));
                let mut new_prefix: Vec<Option<SpinedTree>> = vec![None; k];
                new_prefix.extend(prefix.iter().cloned());
                let lengths = if vals.iter().all(|&v| v == 1) {
                    NatSeqSpec::ones()
                } else {
                    NatSeqSpec::PeriodicNat { prefix: vals, cycle: vec![1] }
                };
                SpinedTree::Spine {
                    mode: *mode,
                    gen: GenSeq::Periodic { prefix: new_prefix, cycle: cycle.clone() },
                    lengths,
                }
            }
            SpinedTree::Fin(t) => {
                let mut out = t.clone();
                for _ in 0..k {
                    out = FiniteTree::node(vec![out]);
                }
                SpinedTree::Fin(out)
            }
            other => other.clone(),
        }
    }

    /// The child subtrees left hanging when this tree's root fuses into a
    /// host node. Entries are presentations up to equivalence.
    pub(crate) fn glued_components(&self) -> Vec<SpinedTree> {
        match self {
            SpinedTree::Fin(t) => {
                t.children().iter().map(|c| SpinedTree::Fin(c.clone())).collect()
            }
            SpinedTree::SOrd(a) => {
                if a.is_zero() {
                    Vec::new()
                } else if *a == OrdCNF::finite(1) {
                    vec![SpinedTree::SOrd(OrdCNF::finite(1))]
                } else if let Some(b) = a.pred() {
                    // below the root: the rest of the spine, and the slot
                    vec![SpinedTree::SOrd(a.clone()), SpinedTree::SOrd(b)]
                } else {
                    let first = a.fundamental(0).expect("limit");
                    vec![SpinedTree::SOrd(a.clone()), SpinedTree::SOrd(first)]
                }
            }
            SpinedTree::Spine { mode, gen, .. } => {
                let mut out = vec![self.spine_tail_equivalent()];
                let slot0 = match gen {
                    GenSeq::Periodic { prefix, cycle } => {
                        prefix.first().unwrap_or_else(|| &cycle[0]).clone()
                    }
                    GenSeq::OrdinalRamp(l) => {
                        l.fundamental(0).ok().map(SpinedTree::SOrd)
                    }
                    GenSeq::VRamp => Some(SpinedTree::Fin(FiniteTree::star(1))),
                };
                if let Some(s) = slot0 {
                    match mode {
                        Mode::Attach => out.push(s),
                        Mode::Glue => out.extend(s.glued_components()),
                    }
                }
                out
            }
        }
    }

    /// A presentation equivalent to the subtree hanging below the root along
    /// the spine: the first edge's interior nodes, then spine node 1 onward.
    fn spine_tail_equivalent(&self) -> SpinedTree {
        match self {
            SpinedTree::Spine { gen: GenSeq::Periodic { .. }, lengths, .. } => {
                self.tail(1).with_leading_gap(lengths.value(0).saturating_sub(1))
            }
            // ramps shifted by one step denote equivalent trees
            _ => self.clone(),
        }
    }
}

/// The length stream as seen from spine node `from` of a presentation with
/// `prefix_len` one-off slots: the values between the surviving one-off
/// nodes stay, the recurring region's lengths become 1.
fn one_off_lengths(lengths: &NatSeqSpec, from: usize, prefix_len: usize) -> NatSeqSpec {
    let vals: Vec<usize> =
        (from..prefix_len.saturating_sub(1)).map(|i| lengths.value(i)).collect();
    if vals.iter().all(|&v| v == 1) {
        NatSeqSpec::ones()
    } else {
        NatSeqSpec::PeriodicNat { prefix: vals, cycle: vec![1] }
    }
}
