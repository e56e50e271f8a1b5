//! Deciding the topological-minor order between spined presentations.
//!
//! The decision procedure is three-valued: `True` and `False` answers come
//! with a certificate naming the decisive step, while genuinely open cases
//! report `Unknown` rather than guessing. `False` is only ever reported when
//! every way an embedding could proceed — riding the host spine, branching
//! off into a recurring or one-off decoration, or trading places with a
//! decoration at the departure point — has been refuted.

use std::collections::HashMap;

use crate::embed::{rooted_minor, rooted_minor_at_root};
use crate::error::{Error, Result};
use crate::finite::FiniteTree;
use crate::family::NatSeqSpec;
use crate::matching::max_matching;
use crate::ordinal::OrdCNF;
use crate::spined::{Branching, GenSeq, Mode, SpinedTree};
use crate::verdict::Verdict;

/// Recursion budget for one top-level comparison.
pub const DECISION_FUEL: usize = 200_000;

/// Node budget for truncation-based finite window checks.
const WINDOW_NODE_CAP: usize = 500_000;

/// How many approximants of a limit host to probe before giving up.
const RAMP_SAMPLES: usize = 4;

/// Evidence accompanying a definite verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorCertificate {
    /// Both presentations normalize to the same form.
    Equal,
    /// An explicit embedding of one finite tree into another was found.
    FiniteEmbedding,
    /// Exhaustive search ruled out any embedding between finite trees.
    NoFiniteEmbedding,
    /// An infinite tree cannot embed into a finite one.
    FiniteTarget,
    /// The left tree is a canonical tree whose order the host reaches.
    OrderFits { left: OrdCNF, right: OrdCNF },
    /// The left order exceeds the right order.
    OrderExcess { left: OrdCNF, right: OrdCNF },
    /// The left tree branches more than the host ever does.
    BranchingExcess { left: Branching, right: Branching },
    /// A finite tree embeds into a sufficient finite window of the host.
    WindowEmbedding { steps: usize, depth: usize },
    /// A finite tree misses even a provably sufficient window of the host.
    WindowExhausted { steps: usize, depth: usize },
    /// The spine rides the host spine forever.
    Ride { start: usize },
    /// Unbounded fans ride a recurring host decoration of unbounded branching.
    FanRide { class: usize },
    /// Unbounded-fan spines of opposite styles never embed into each other.
    FanClash,
    /// The whole remaining tree embeds inside one host decoration.
    Dive { entry: usize },
    /// The ride leaves the spine while a decoration takes the spine's place.
    Swap { entry: usize },
    /// A recurring decoration of the left spine fits below no recurring
    /// decoration of the host.
    SlotMisfit { class: usize },
    /// The ride stalls and every dive and swap continuation is refuted.
    RideStuck { entry: usize },
}

impl std::fmt::Display for MinorCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use MinorCertificate::*;
        match self {
            Equal => write!(f, "presentations normalize to the same form"),
            FiniteEmbedding => write!(f, "explicit finite embedding found"),
            NoFiniteEmbedding => write!(f, "exhaustive finite search found no embedding"),
            FiniteTarget => write!(f, "an infinite tree cannot embed into a finite tree"),
            OrderFits { left, right } => {
                write!(f, "canonical tree of order {left} fits: host has order {right}")
            }
            OrderExcess { left, right } => {
                write!(f, "order {left} exceeds host order {right}")
            }
            BranchingExcess { left, right } => {
                write!(f, "branching {left} exceeds host branching {right}")
            }
            WindowEmbedding { steps, depth } => {
                write!(f, "embeds into the host window ({steps} steps, depth {depth})")
            }
            WindowExhausted { steps, depth } => {
                write!(f, "missing from a sufficient host window ({steps} steps, depth {depth})")
            }
            Ride { start } => write!(f, "spine rides the host spine from position {start}"),
            FanRide { class } => {
                write!(f, "fans ride host decoration class {class} of unbounded branching")
            }
            FanClash => write!(f, "unbounded-fan spines of opposite styles"),
            Dive { entry } => write!(f, "embeds inside a host decoration after {entry} spine steps"),
            Swap { entry } => {
                write!(f, "after {entry} spine steps a decoration takes over the host spine")
            }
            SlotMisfit { class } => {
                write!(f, "recurring decoration class {class} fits below no recurring host decoration")
            }
            RideStuck { entry } => {
                write!(f, "ride stalls at spine step {entry}; every dive and swap is refuted")
            }
        }
    }
}

/// Does `t` embed into `s` as a topological minor, mapping `t`'s root to any
/// node of `s` while preserving ancestry?
pub fn spined_minor(t: &SpinedTree, s: &SpinedTree) -> Result<Verdict> {
    Ok(spined_minor_certified(t, s)?.0)
}

/// As [`spined_minor`], also returning evidence for definite verdicts.
pub fn spined_minor_certified(
    t: &SpinedTree,
    s: &SpinedTree,
) -> Result<(Verdict, Option<MinorCertificate>)> {
    t.validate()?;
    s.validate()?;
    let a = t.normalize_deep();
    let b = s.normalize_deep();
    let mut ctx = Ctx { fuel: DECISION_FUEL };
    decide(&a, &b, &mut ctx)
}

/// Both directions of [`spined_minor`], combined three-valued.
pub fn spined_equiv(t: &SpinedTree, s: &SpinedTree) -> Result<Verdict> {
    let forward = spined_minor(t, s)?;
    if forward == Verdict::False {
        return Ok(Verdict::False);
    }
    Ok(forward.and(spined_minor(s, t)?))
}

struct Ctx {
    fuel: usize,
}

impl Ctx {
    fn spend(&mut self) -> Result<()> {
        if self.fuel == 0 {
            return Err(Error::limit("minor decision steps", DECISION_FUEL));
        }
        self.fuel -= 1;
        Ok(())
    }
}

type Outcome = (Verdict, Option<MinorCertificate>);

fn decide(a: &SpinedTree, b: &SpinedTree, ctx: &mut Ctx) -> Result<Outcome> {
    ctx.spend()?;
    let a = deramp(a);
    let b = deramp(b);
    if *a == *b {
        return Ok((Verdict::True, Some(MinorCertificate::Equal)));
    }
    if let SpinedTree::Fin(ta) = &*a {
        return finite_left(ta, &b, ctx);
    }
    if b.is_finite() {
        return Ok((Verdict::False, Some(MinorCertificate::FiniteTarget)));
    }
    // canonical trees are order-minimal: they embed exactly when the host
    // order reaches theirs
    if let SpinedTree::SOrd(alpha) = &*a {
        let right = b.order();
        return Ok(if *alpha <= right {
            (Verdict::True, Some(MinorCertificate::OrderFits { left: alpha.clone(), right }))
        } else {
            (Verdict::False, Some(MinorCertificate::OrderExcess { left: alpha.clone(), right }))
        });
    }
    let (oa, ob) = (a.order(), b.order());
    if oa > ob {
        return Ok((Verdict::False, Some(MinorCertificate::OrderExcess { left: oa, right: ob })));
    }
    let (ba, bb) = (a.max_branching(), b.max_branching());
    if ba > bb {
        return Ok((
            Verdict::False,
            Some(MinorCertificate::BranchingExcess { left: ba, right: bb }),
        ));
    }
    // expand a canonical host into spine form for the ride machinery
    let b_spine;
    let b_ref: &SpinedTree = if let SpinedTree::SOrd(beta) = &*b {
        b_spine = expand_sord(beta);
        &b_spine
    } else {
        &b
    };
    let (SpinedTree::Spine { mode: ma, gen: ga, .. }, SpinedTree::Spine { mode: mb, gen: gb, .. }) =
        (&*a, b_ref)
    else {
        return Ok((Verdict::Unknown, None));
    };
    match (ga, gb) {
        (GenSeq::VRamp, GenSeq::VRamp) => Ok(if ma == mb {
            (Verdict::True, Some(MinorCertificate::Ride { start: 0 }))
        } else {
            (Verdict::False, Some(MinorCertificate::FanClash))
        }),
        (GenSeq::VRamp, GenSeq::Periodic { prefix, cycle }) => {
            fans_into_periodic(&a, *ma, *mb, prefix, cycle, ctx)
        }
        (GenSeq::Periodic { prefix, cycle }, GenSeq::VRamp) => {
            periodic_into_fans(*ma, *mb, prefix, cycle, ctx)
        }
        (GenSeq::Periodic { prefix, cycle }, GenSeq::OrdinalRamp(l)) => {
            periodic_into_ramp(&a, *ma, prefix, cycle, &oa, l, ctx)
        }
        (GenSeq::Periodic { prefix: pa, cycle: ca }, GenSeq::Periodic { prefix: pb, cycle: cb }) => {
            periodic_into_periodic(&a, *ma, pa, ca, b_ref, *mb, pb, cb, ctx)
        }
        _ => Ok((Verdict::Unknown, None)),
    }
}

/// Replace a limit ramp by its ordinal shorthand; other trees pass through.
fn deramp(t: &SpinedTree) -> std::borrow::Cow<'_, SpinedTree> {
    match t {
        SpinedTree::Spine { gen: GenSeq::OrdinalRamp(l), .. } if l.is_limit() => {
            std::borrow::Cow::Owned(SpinedTree::SOrd(l.clone()))
        }
        _ => std::borrow::Cow::Borrowed(t),
    }
}

/// The spine form of a canonical tree, used as an embedding host.
fn expand_sord(beta: &OrdCNF) -> SpinedTree {
    let gen = if *beta == OrdCNF::finite(1) {
        GenSeq::Periodic { prefix: Vec::new(), cycle: vec![None] }
    } else if let Some(prev) = beta.pred() {
        GenSeq::Periodic { prefix: Vec::new(), cycle: vec![Some(SpinedTree::SOrd(prev))] }
    } else {
        GenSeq::OrdinalRamp(beta.clone())
    };
    SpinedTree::Spine { mode: Mode::Attach, gen, lengths: crate::family::NatSeqSpec::ones() }
}

fn finite_left(ta: &FiniteTree, b: &SpinedTree, _ctx: &mut Ctx) -> Result<Outcome> {
    if let SpinedTree::Fin(tb) = b {
        return Ok(if rooted_minor(ta, tb) {
            (Verdict::True, Some(MinorCertificate::FiniteEmbedding))
        } else {
            (Verdict::False, Some(MinorCertificate::NoFiniteEmbedding))
        });
    }
    if let SpinedTree::SOrd(alpha) = b {
        // canonical hosts branch two ways at most, and the least canonical
        // order accommodating a finite tree is computable outright, so no
        // truncation window is needed
        return Ok(match canonical_fit(ta) {
            None => (
                Verdict::False,
                Some(MinorCertificate::BranchingExcess {
                    left: Branching::Finite(ta.max_branching()),
                    right: Branching::Finite(2),
                }),
            ),
            Some(k) => {
                let need = OrdCNF::finite(k);
                if need <= *alpha {
                    (
                        Verdict::True,
                        Some(MinorCertificate::OrderFits { left: need, right: alpha.clone() }),
                    )
                } else {
                    (
                        Verdict::False,
                        Some(MinorCertificate::OrderExcess { left: need, right: alpha.clone() }),
                    )
                }
            }
        });
    }
    // a finite tree embeds into an infinite host exactly when it embeds into
    // a window wide enough that any embedding could be shifted into it
    let n = ta.size();
    let steps = window_steps(b, n).max(n + 2);
    let depth = n + 2;
    let host = b.truncate_capped(steps, depth, WINDOW_NODE_CAP)?;
    Ok(if rooted_minor(ta, &host) {
        (Verdict::True, Some(MinorCertificate::WindowEmbedding { steps, depth }))
    } else {
        (Verdict::False, Some(MinorCertificate::WindowExhausted { steps, depth }))
    })
}

/// The least canonical-host order a finite tree embeds into, or `None` when
/// no canonical tree hosts it (some node has three or more children).
fn canonical_fit(t: &FiniteTree) -> Option<u32> {
    if t.size() == 1 {
        return Some(0);
    }
    fit_pair(t).map(|(ride, _)| ride)
}

/// For one subtree: the least host order with the root placed on the host
/// spine, and the least host order overall. On the spine, one child may
/// continue along it while at most one other drops into the pendant
/// decoration, which is the canonical tree one order lower.
fn fit_pair(t: &FiniteTree) -> Option<(u32, u32)> {
    let kids = t.children();
    match kids.len() {
        0 => Some((1, 0)),
        1 => {
            let (ride, free) = fit_pair(&kids[0])?;
            let k = ride.min((free + 1).max(2));
            Some((k, k))
        }
        2 => {
            let (ride_a, free_a) = fit_pair(&kids[0])?;
            let (ride_b, free_b) = fit_pair(&kids[1])?;
            let k = ride_a
                .max(2)
                .max(free_b + 1)
                .min(ride_b.max(2).max(free_a + 1));
            Some((k, k))
        }
        _ => None,
    }
}

/// Spine steps after which an `n`-node embedding can always be shifted left
/// (periodic parts) or right into growing slots (ramps).
fn window_steps(t: &SpinedTree, n: usize) -> usize {
    match t {
        SpinedTree::Fin(_) => 0,
        SpinedTree::SOrd(_) => n + 2,
        SpinedTree::Spine { gen, .. } => match gen {
            GenSeq::Periodic { prefix, cycle } => {
                let own = prefix.len() + cycle.len() * (n + 1);
                prefix
                    .iter()
                    .chain(cycle.iter())
                    .flatten()
                    .map(|s| window_steps(s, n))
                    .max()
                    .unwrap_or(0)
                    .max(own)
            }
            _ => n + 2,
        },
    }
}

/// The pieces a decoration presents to its host position: the whole tree
/// below one fresh edge when attached, its hanging components when glued.
fn bundle(slot: &Option<SpinedTree>, mode: Mode) -> Vec<SpinedTree> {
    match (slot, mode) {
        (None, _) => Vec::new(),
        (Some(x), Mode::Attach) => vec![x.clone()],
        (Some(x), Mode::Glue) => x.glued_components(),
    }
}

/// The host subtrees an embedding can branch into at a decorated position.
fn dive_targets(slot: &SpinedTree, mode: Mode) -> Vec<SpinedTree> {
    match mode {
        Mode::Attach => vec![slot.clone()],
        Mode::Glue => slot.glued_components(),
    }
}

/// Three-valued injective assignment of items to bins. `True` needs a full
/// matching along definite edges; `False` holds when even indefinite edges
/// cannot cover all items.
fn verdict_matching(matrix: &[Vec<Verdict>], bins: usize) -> Verdict {
    let adj_true: Vec<Vec<usize>> = matrix
        .iter()
        .map(|row| (0..bins).filter(|&j| row[j] == Verdict::True).collect())
        .collect();
    if max_matching(bins, &adj_true) == matrix.len() {
        return Verdict::True;
    }
    let adj_maybe: Vec<Vec<usize>> = matrix
        .iter()
        .map(|row| (0..bins).filter(|&j| row[j] != Verdict::False).collect())
        .collect();
    if max_matching(bins, &adj_maybe) < matrix.len() {
        return Verdict::False;
    }
    Verdict::Unknown
}

/// Can the decoration at one left position sit below the decoration at one
/// host position, respecting both attachment styles?
fn slot_leq(
    x: &Option<SpinedTree>,
    ma: Mode,
    y: &Option<SpinedTree>,
    mb: Mode,
    ctx: &mut Ctx,
) -> Result<Verdict> {
    let x = match x {
        None => return Ok(Verdict::True),
        Some(x) => x,
    };
    let y = match y {
        None => return Ok(Verdict::False),
        Some(y) => y,
    };
    match (ma, mb) {
        (Mode::Attach, Mode::Attach) => Ok(decide(x, y, ctx)?.0),
        (Mode::Attach, Mode::Glue) => {
            // x must enter one hanging component of y
            let mut out = Verdict::False;
            for c in y.glued_components() {
                out = out.or(decide(x, &c, ctx)?.0);
                if out == Verdict::True {
                    break;
                }
            }
            Ok(out)
        }
        (Mode::Glue, Mode::Attach) => {
            let comps = x.glued_components();
            match comps.len() {
                0 => Ok(Verdict::True),
                1 => Ok(decide(&comps[0], y, ctx)?.0),
                // distinct components need distinct host branches
                _ => Ok(Verdict::False),
            }
        }
        (Mode::Glue, Mode::Glue) => {
            if let (SpinedTree::Fin(fx), SpinedTree::Fin(fy)) = (x, y) {
                return Ok(Verdict::from_bool(rooted_minor_at_root(fx, fy)));
            }
            let items = x.glued_components();
            let bins = y.glued_components();
            let mut matrix = Vec::with_capacity(items.len());
            for item in &items {
                let mut row = Vec::with_capacity(bins.len());
                for bin in &bins {
                    row.push(decide(item, bin, ctx)?.0);
                }
                matrix.push(row);
            }
            Ok(verdict_matching(&matrix, bins.len()))
        }
    }
}

/// Unbounded fans against a periodic host: ride a recurring decoration of
/// unbounded branching, or embed wholly inside one decoration.
fn fans_into_periodic(
    a: &SpinedTree,
    ma: Mode,
    mb: Mode,
    prefix: &[Option<SpinedTree>],
    cycle: &[Option<SpinedTree>],
    ctx: &mut Ctx,
) -> Result<Outcome> {
    if ma == Mode::Attach {
        for (ci, y) in cycle.iter().enumerate() {
            if let Some(y) = y {
                if y.max_branching() == Branching::Unbounded {
                    return Ok((Verdict::True, Some(MinorCertificate::FanRide { class: ci })));
                }
            }
        }
    }
    // shifting the fan spine changes nothing up to equivalence, so a dive at
    // any depth reduces to embedding the whole tree into one decoration
    let mut unknown = false;
    for y in prefix.iter().chain(cycle.iter()).flatten() {
        for target in dive_targets(y, mb) {
            match decide(a, &target, ctx)?.0 {
                Verdict::True => {
                    return Ok((Verdict::True, Some(MinorCertificate::Dive { entry: 0 })))
                }
                Verdict::Unknown => unknown = true,
                Verdict::False => {}
            }
        }
    }
    Ok(if unknown {
        (Verdict::Unknown, None)
    } else {
        (Verdict::False, Some(MinorCertificate::RideStuck { entry: 0 }))
    })
}

/// Periodic spine against an unbounded-fan host: every decoration must fit
/// the branch structure one fan position offers.
fn periodic_into_fans(
    ma: Mode,
    mb: Mode,
    prefix: &[Option<SpinedTree>],
    cycle: &[Option<SpinedTree>],
    _ctx: &mut Ctx,
) -> Result<Outcome> {
    for (i, slot) in prefix.iter().chain(cycle.iter()).enumerate() {
        let items = bundle(slot, ma);
        let ok = match mb {
            Mode::Attach => match items.len() {
                0 => true,
                // the single non-spine branch is a star below a fresh edge
                1 => match &items[0] {
                    SpinedTree::Fin(t) => rooted_minor(t, &FiniteTree::star(t.size())),
                    _ => false,
                },
                _ => false,
            },
            // host branches are bare leaves
            Mode::Glue => items.iter().all(|c| matches!(c, SpinedTree::Fin(t) if t.size() == 1)),
        };
        if !ok {
            return Ok((Verdict::False, Some(MinorCertificate::SlotMisfit { class: i })));
        }
    }
    Ok((Verdict::True, Some(MinorCertificate::Ride { start: 0 })))
}

/// Periodic spine against a limit-ordinal ramp. Order and branching excess
/// were already ruled out, so refutation is out of reach here: probe growing
/// approximants for a ride, dive, or swap, and otherwise stay undecided.
fn periodic_into_ramp(
    a: &SpinedTree,
    ma: Mode,
    prefix: &[Option<SpinedTree>],
    cycle: &[Option<SpinedTree>],
    oa: &OrdCNF,
    lambda: &OrdCNF,
    ctx: &mut Ctx,
) -> Result<Outcome> {
    let mut samples: Vec<OrdCNF> = Vec::new();
    for j in 0..RAMP_SAMPLES as u32 {
        samples.push(lambda.fundamental(j)?);
    }
    // include an approximant clear of the left order, when one exists
    for j in 0..64u32 {
        let mu = lambda.fundamental(j)?;
        if mu > *oa {
            samples.push(lambda.fundamental(j + 1)?);
            break;
        }
    }
    samples.dedup();

    // ride: every decoration class fits some approximant decoration
    let mut all_fit = true;
    for slot in prefix.iter().chain(cycle.iter()) {
        let mut fits = false;
        for mu in &samples {
            if slot_leq(slot, ma, &Some(SpinedTree::SOrd(mu.clone())), Mode::Attach, ctx)?
                == Verdict::True
            {
                fits = true;
                break;
            }
        }
        if !fits {
            all_fit = false;
            break;
        }
    }
    if all_fit {
        return Ok((Verdict::True, Some(MinorCertificate::Ride { start: 0 })));
    }

    // dive: the whole tree inside one approximant
    for mu in &samples {
        if decide(a, &SpinedTree::SOrd(mu.clone()), ctx)?.0 == Verdict::True {
            return Ok((Verdict::True, Some(MinorCertificate::Dive { entry: 0 })));
        }
    }

    // swap: ride a while, then a decoration takes over the host spine while
    // the remaining spine drops into an approximant decoration
    let entries = prefix.len() + cycle.len();
    'entry: for m in 0..=entries {
        for j in 0..m {
            let slot = slot_at(prefix, cycle, j);
            let mut fits = false;
            for mu in &samples {
                if slot_leq(&slot, ma, &Some(SpinedTree::SOrd(mu.clone())), Mode::Attach, ctx)?
                    == Verdict::True
                {
                    fits = true;
                    break;
                }
            }
            if !fits {
                continue 'entry;
            }
        }
        let x_m = slot_at(prefix, cycle, m);
        let tail_item = a.tail(m + 1);
        for mu in &samples {
            let spine_bin = SpinedTree::SOrd(lambda.clone());
            let slot_bin = SpinedTree::SOrd(mu.clone());
            let mut items = bundle(&x_m, ma);
            let tail_index = items.len();
            items.push(tail_item.clone());
            let mut matrix = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let spine_v = if i == tail_index {
                    // the diverted tail by definition leaves the spine
                    Verdict::False
                } else {
                    decide(item, &spine_bin, ctx)?.0
                };
                let slot_v = decide(item, &slot_bin, ctx)?.0;
                matrix.push(vec![spine_v, slot_v]);
            }
            if verdict_matching(&matrix, 2) == Verdict::True {
                return Ok((Verdict::True, Some(MinorCertificate::Swap { entry: m })));
            }
        }
    }
    Ok((Verdict::Unknown, None))
}

fn slot_at(
    prefix: &[Option<SpinedTree>],
    cycle: &[Option<SpinedTree>],
    i: usize,
) -> Option<SpinedTree> {
    if i < prefix.len() {
        prefix[i].clone()
    } else {
        cycle[(i - prefix.len()) % cycle.len()].clone()
    }
}

/// State shared by the matching phases of [`periodic_into_periodic`].
struct RideState<'t> {
    pa: &'t [Option<SpinedTree>],
    ca: &'t [Option<SpinedTree>],
    ma: Mode,
    pb: &'t [Option<SpinedTree>],
    cb: &'t [Option<SpinedTree>],
    mb: Mode,
    la: NatSeqSpec,
    lb: NatSeqSpec,
    memo: HashMap<(usize, usize), Verdict>,
}

impl RideState<'_> {
    /// Distance from the root to spine node `m` on the left.
    fn depth_a(&self, m: usize) -> usize {
        (0..m).fold(0usize, |s, i| s.saturating_add(self.la.value(i)))
    }

    /// Distance from the root to spine node `q` on the host.
    fn depth_b(&self, q: usize) -> usize {
        (0..q).fold(0usize, |s, i| s.saturating_add(self.lb.value(i)))
    }

    /// Can the left decoration at stream class `fc` sit below the host
    /// decoration at stream class `gc`?
    fn fit(&mut self, fc: usize, gc: usize, ctx: &mut Ctx) -> Result<Verdict> {
        if let Some(v) = self.memo.get(&(fc, gc)) {
            return Ok(*v);
        }
        let x = slot_at(self.pa, self.ca, fc);
        let y = slot_at(self.pb, self.cb, gc);
        let v = slot_leq(&x, self.ma, &y, self.mb, ctx)?;
        self.memo.insert((fc, gc), v);
        Ok(v)
    }

    /// Does some recurring host class accept the left class `fc`? Depth in
    /// the recurring region is free: a site of every class recurs
    /// arbitrarily deep.
    fn cyc_fit(&mut self, fc: usize, ctx: &mut Ctx) -> Result<Verdict> {
        let mut v = Verdict::False;
        for gc in self.pb.len()..self.pb.len() + self.cb.len() {
            match self.fit(fc, gc, ctx)? {
                Verdict::True => return Ok(Verdict::True),
                Verdict::Unknown => v = Verdict::Unknown,
                Verdict::False => {}
            }
        }
        Ok(v)
    }
}

fn spine_lengths(t: &SpinedTree) -> NatSeqSpec {
    match t {
        SpinedTree::Spine { lengths, .. } => lengths.clone(),
        _ => NatSeqSpec::ones(),
    }
}

/// The general periodic-versus-periodic case: a greedy ride matching the
/// decorated one-off spine nodes in order, then dives and swaps from every
/// feasible departure point.
///
/// Edge lengths bind only between nodes matched in the one-off regions of
/// both sides. A match into the recurring host region can always shift a
/// whole period deeper, so it absorbs any finite distance; a recurring left
/// decoration repeats forever, so all but finitely many copies must fit
/// recurring host decorations anyway, and sending them all there loses
/// nothing.
#[allow(clippy::too_many_arguments)]
fn periodic_into_periodic(
    a: &SpinedTree,
    ma: Mode,
    pa: &[Option<SpinedTree>],
    ca: &[Option<SpinedTree>],
    b: &SpinedTree,
    mb: Mode,
    pb: &[Option<SpinedTree>],
    cb: &[Option<SpinedTree>],
    ctx: &mut Ctx,
) -> Result<Outcome> {
    let mut ride = RideState {
        pa,
        ca,
        ma,
        pb,
        cb,
        mb,
        la: spine_lengths(a),
        lb: spine_lengths(b),
        memo: HashMap::new(),
    };

    // ride the one-off left decorations in order: each takes the earliest
    // host one-off site that fits and lies deep enough, else the recurring
    // region, where every later one then stays
    let dec_a: Vec<usize> = (0..pa.len()).filter(|&n| pa[n].is_some()).collect();
    let mut picks: Vec<Option<usize>> = Vec::new();
    let mut unknown = false;
    let mut stuck_entry: Option<usize> = None;
    let mut prev: Option<(usize, usize)> = None;
    let mut in_cycle = false;
    for (i, &n) in dec_a.iter().enumerate() {
        let mut chosen: Option<usize> = None;
        if !in_cycle {
            let (from_n, from_q) = prev.unwrap_or((0, 0));
            let need = ride.depth_a(n) - ride.depth_a(from_n);
            let start = prev.map_or(0, |(_, pq)| pq + 1);
            for q in start..pb.len() {
                if pb[q].is_none() {
                    continue;
                }
                if ride.depth_b(q) - ride.depth_b(from_q) < need {
                    continue;
                }
                match ride.fit(n, q, ctx)? {
                    Verdict::True => {
                        chosen = Some(q);
                        break;
                    }
                    Verdict::Unknown => unknown = true,
                    Verdict::False => {}
                }
            }
        }
        match chosen {
            Some(q) => {
                prev = Some((n, q));
                picks.push(Some(q));
            }
            None => match ride.cyc_fit(n, ctx)? {
                Verdict::True => {
                    in_cycle = true;
                    picks.push(None);
                }
                v => {
                    if v == Verdict::Unknown {
                        unknown = true;
                    }
                    stuck_entry = Some(i);
                    break;
                }
            },
        }
    }

    let stuck = match stuck_entry {
        Some(i) => dec_a[i],
        None => {
            // every recurring left class must fit some recurring host class
            let mut first_bad: Option<usize> = None;
            for j in 0..ca.len() {
                if ca[j].is_none() {
                    continue;
                }
                match ride.cyc_fit(pa.len() + j, ctx)? {
                    Verdict::True => {}
                    v => {
                        if v == Verdict::Unknown {
                            unknown = true;
                        }
                        first_bad = Some(pa.len() + j);
                        break;
                    }
                }
            }
            match first_bad {
                None => {
                    let start = picks.first().map_or(0, |p| p.unwrap_or(pb.len()));
                    return Ok((Verdict::True, Some(MinorCertificate::Ride { start })));
                }
                Some(s) => s,
            }
        }
    };

    for m in 0..=stuck {
        // departure data: the ride covers the decorated positions above m
        let j = dec_a.iter().take_while(|&&n| n < m).count();
        let mut after = 0;
        let mut base = (0usize, 0usize);
        let mut from_cycle = false;
        if j > 0 {
            match picks[j - 1] {
                Some(q) => {
                    after = q + 1;
                    base = (ride.depth_a(dec_a[j - 1]), ride.depth_b(q));
                }
                None => from_cycle = true,
            }
        }
        if (pa.len()..m).any(|n| ca[(n - pa.len()) % ca.len()].is_some()) {
            from_cycle = true;
        }
        if from_cycle {
            // one-off host sites all lie above the recurring region
            after = pb.len();
        }
        let need = if from_cycle { 0 } else { ride.depth_a(m) - base.0 };
        let tail_m = a.tail(m);

        // dives: the remaining spine drops into a decoration strictly below
        // the last ridden position — a recurring one absorbs the distance,
        // a one-off site gets the unfilled part of the gap prepended as
        // bare spine so the decoration must supply that depth itself
        for y in cb.iter().flatten() {
            for target in dive_targets(y, mb) {
                match decide(&tail_m, &target, ctx)?.0 {
                    Verdict::True => {
                        return Ok((Verdict::True, Some(MinorCertificate::Dive { entry: m })))
                    }
                    Verdict::Unknown => unknown = true,
                    Verdict::False => {}
                }
            }
        }
        for q in after..pb.len() {
            let Some(y) = &pb[q] else { continue };
            let gap = ride.depth_b(q) - base.1;
            let item = tail_m.with_leading_gap(need.saturating_sub(gap + 1));
            for target in dive_targets(y, mb) {
                match decide(&item, &target, ctx)?.0 {
                    Verdict::True => {
                        return Ok((Verdict::True, Some(MinorCertificate::Dive { entry: m })))
                    }
                    Verdict::Unknown => unknown = true,
                    Verdict::False => {}
                }
            }
        }

        // swaps: spine node m sits at a fresh position whose decoration
        // receives the remaining spine, while node m's own decoration moves
        // into the branches the host node offers, the spine branch included
        let x_m = slot_at(pa, ca, m);
        let tail_item = a.tail(m + 1).with_leading_gap(ride.la.value(m).saturating_sub(1));
        let mut swap_sites: Vec<usize> = (pb.len()..pb.len() + cb.len()).collect();
        for q in after..pb.len() {
            // node m stands on the spine here, so the gap must be covered
            if ride.depth_b(q) - base.1 >= need {
                swap_sites.push(q);
            }
        }
        for site in swap_sites {
            let y = match slot_at(pb, cb, site) {
                Some(y) => y,
                None => continue, // no decoration, nowhere for the tail to go
            };
            let spine_bin =
                b.tail(site + 1).with_leading_gap(ride.lb.value(site).saturating_sub(1));
            let slot_bins = dive_targets(&y, mb);
            let mut items = bundle(&x_m, ma);
            let tail_index = items.len();
            items.push(tail_item.clone());
            let mut matrix = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let mut row = Vec::with_capacity(1 + slot_bins.len());
                row.push(if i == tail_index {
                    Verdict::False
                } else {
                    decide(item, &spine_bin, ctx)?.0
                });
                for bin in &slot_bins {
                    row.push(decide(item, bin, ctx)?.0);
                }
                matrix.push(row);
            }
            match verdict_matching(&matrix, 1 + slot_bins.len()) {
                Verdict::True => {
                    return Ok((Verdict::True, Some(MinorCertificate::Swap { entry: m })))
                }
                Verdict::Unknown => unknown = true,
                Verdict::False => {}
            }
        }
    }

    if unknown {
        return Ok((Verdict::Unknown, None));
    }
    // prefer the strongest refutation: a recurring left class below no
    // recurring host class refutes on its own
    for fc in 0..ca.len() {
        let x = &ca[fc];
        if x.is_none() {
            continue;
        }
        let mut all_false = true;
        for gc in 0..cb.len() {
            let y = &cb[gc];
            if slot_leq(x, ma, y, mb, ctx)? != Verdict::False {
                all_false = false;
                break;
            }
        }
        if all_false {
            return Ok((Verdict::False, Some(MinorCertificate::SlotMisfit { class: fc })));
        }
    }
    Ok((Verdict::False, Some(MinorCertificate::RideStuck { entry: stuck })))
}
