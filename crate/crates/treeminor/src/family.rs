use crate::embed::unrooted_minor;
use crate::error::{Error, Result};
use crate::finite::FiniteTree;
use crate::ordinal::OrdCNF;
use crate::spined::minor::spined_minor;
use crate::spined::{GenSeq, Mode, SpinedTree};
use crate::verdict::Verdict;

/// A specification of an infinite sequence of positive integers, used for
/// spine edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatSeqSpec {
    /// `prefix` one-off values, then `cycle` repeating forever.
    PeriodicNat { prefix: Vec<usize>, cycle: Vec<usize> },
    /// Entry `n` is `p^(n+1)` for a prime `p`; strictly increasing, and the
    /// ranges of distinct primes are disjoint.
    PrimePowers { p: usize },
}

impl NatSeqSpec {
    /// The all-ones sequence (the default edge lengths).
    pub fn ones() -> Self {
        NatSeqSpec::PeriodicNat { prefix: Vec::new(), cycle: vec![1] }
    }

    pub fn periodic(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::invalid("length cycle must be nonempty"));
        }
        if prefix.iter().chain(&cycle).any(|&v| v == 0) {
            return Err(Error::invalid("lengths must be at least 1"));
        }
        Ok(NatSeqSpec::PeriodicNat { prefix, cycle })
    }

    pub fn prime_powers(p: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(NatSeqSpec::PrimePowers { p })
    }

    /// Entry `i` of the sequence; saturates instead of overflowing.
    pub fn value(&self, i: usize) -> usize {
        match self {
            NatSeqSpec::PeriodicNat { prefix, cycle } => {
                if i < prefix.len() {
                    prefix[i]
                } else {
                    cycle[(i - prefix.len()) % cycle.len()]
                }
            }
            NatSeqSpec::PrimePowers { p } => {
                let exp = u32::try_from(i + 1).unwrap_or(u32::MAX);
                p.saturating_pow(exp)
            }
        }
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `n` primes in increasing order.
pub fn first_primes(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2;
    while out.len() < n {
        if is_prime(c) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn parts(
    t: &SpinedTree,
) -> Option<(Mode, &[Option<SpinedTree>], &[Option<SpinedTree>], &NatSeqSpec)> {
    match t {
        SpinedTree::Spine { mode, gen: GenSeq::Periodic { prefix, cycle }, lengths } => {
            Some((*mode, prefix, cycle, lengths))
        }
        _ => None,
    }
}

/// Drop the empty slots of a periodic spine presentation and reset the edge
/// lengths to one, keeping the decorated slots in order.  The result has a
/// decoration at every spine node and denotes a tree equivalent to the
/// input in both embedding directions.
///
/// That equivalence needs two preconditions, checked here.  The root slot
/// must be decorated: interior undecorated spine nodes have degree 2 and
/// smooth away, but an undecorated root is a pendant tip whose deletion
/// changes the tree.  And every one-off decoration must embed into some
/// recurring one ([`check_ray_conditions`]): the collapsed tree re-embeds
/// into the original by pushing each decoration onto a deep enough copy of
/// a recurring slot, which also absorbs the discarded edge lengths.
pub fn collapse_presentation(t: &SpinedTree) -> Result<SpinedTree> {
    t.validate()?;
    let Some((mode, prefix, cycle, _)) = parts(t) else {
        return Err(Error::invalid("collapse needs a periodic spine presentation"));
    };
    let new_cycle: Vec<_> = cycle.iter().filter(|s| s.is_some()).cloned().collect();
    if new_cycle.is_empty() {
        return Err(Error::invalid("collapse needs a decorated cycle slot"));
    }
    let root_decorated = prefix.first().map_or_else(|| cycle[0].is_some(), |s| s.is_some());
    if !root_decorated {
        return Err(Error::invalid("collapse would delete the undecorated root, a pendant tip"));
    }
    if !check_ray_conditions(t) {
        return Err(Error::invalid("collapse needs every one-off decoration to recur"));
    }
    let new_prefix: Vec<_> = prefix.iter().filter(|s| s.is_some()).cloned().collect();
    SpinedTree::spine(mode, new_prefix, new_cycle)
}

/// Whether every one-off decoration of a periodic spine presentation embeds
/// into some recurring one.  When this holds, trimming the prefix does not
/// lose structure, so the recurring decorations alone carry the tree.
pub fn check_ray_conditions(t: &SpinedTree) -> bool {
    let Some((_, prefix, cycle, _)) = parts(t) else {
        return false;
    };
    prefix.iter().flatten().all(|x| {
        cycle
            .iter()
            .flatten()
            .any(|y| matches!(spined_minor(x, y), Ok(Verdict::True)))
    })
}

/// Replace the spine edge lengths of a fully decorated periodic presentation
/// by the sequence `f`.  Requires every slot decorated and the ray conditions
/// to hold, so that the spine is the unique ray of maximal order and its
/// subdivision pattern is rigid under isomorphism.
pub fn s_f(base: &SpinedTree, f: NatSeqSpec) -> Result<SpinedTree> {
    base.validate()?;
    let Some((_, prefix, cycle, _)) = parts(base) else {
        return Err(Error::invalid("length substitution needs a periodic spine presentation"));
    };
    if prefix.iter().chain(cycle.iter()).any(Option::is_none) {
        return Err(Error::invalid("length substitution needs every spine slot decorated"));
    }
    if !check_ray_conditions(base) {
        return Err(Error::invalid("one-off decorations must recur along the cycle"));
    }
    base.clone().with_lengths(f)
}

/// Outcome of comparing two presentations as labelled trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoVerdict {
    Iso,
    NonIso,
    Unknown,
}

/// Evidence that two edge-length sequences have essentially different value
/// ranges: one range contains, infinitely often, values the other never
/// takes past some point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeCertificate {
    /// Both sequences run over prime powers with distinct bases; no power of
    /// one base equals a power of the other.
    DistinctPrimes { p: usize, q: usize },
    /// One sequence runs over powers of `p`, the other is periodic with all
    /// values at most `bound`; from exponent `escape_exp` on, every power of
    /// `p` is outside the periodic range.
    PowersEscapePeriodic { p: usize, bound: usize, escape_exp: u32 },
}

fn as_powers(f: &NatSeqSpec) -> Option<usize> {
    match f {
        NatSeqSpec::PrimePowers { p } => Some(*p),
        NatSeqSpec::PeriodicNat { .. } => None,
    }
}

fn periodic_max(f: &NatSeqSpec) -> Option<usize> {
    match f {
        NatSeqSpec::PeriodicNat { prefix, cycle } => {
            Some(prefix.iter().chain(cycle).copied().max().unwrap_or(0))
        }
        NatSeqSpec::PrimePowers { .. } => None,
    }
}

fn spine_lengths(t: &SpinedTree) -> Option<&NatSeqSpec> {
    parts(t).map(|(_, _, _, lengths)| lengths)
}

impl RangeCertificate {
    /// Re-check the certificate against the two presentations from scratch.
    pub fn verify(&self, a: &SpinedTree, b: &SpinedTree) -> bool {
        let (Some(la), Some(lb)) = (spine_lengths(a), spine_lengths(b)) else {
            return false;
        };
        match *self {
            RangeCertificate::DistinctPrimes { p, q } => {
                let bases = (as_powers(la), as_powers(lb));
                let claimed = bases == (Some(p), Some(q)) || bases == (Some(q), Some(p));
                // distinct primes have multiplicatively independent powers,
                // spot-checked over a small grid for good measure
                claimed
                    && p != q
                    && is_prime(p)
                    && is_prime(q)
                    && (1..=6u32).all(|i| {
                        (1..=6u32).all(|j| p.saturating_pow(i) != q.saturating_pow(j))
                    })
            }
            RangeCertificate::PowersEscapePeriodic { p, bound, escape_exp } => {
                let (base, cap) = match (as_powers(la), periodic_max(lb)) {
                    (Some(base), Some(cap)) => (base, cap),
                    _ => match (periodic_max(la), as_powers(lb)) {
                        (Some(cap), Some(base)) => (base, cap),
                        _ => return false,
                    },
                };
                base == p
                    && cap == bound
                    && is_prime(p)
                    && escape_exp >= 1
                    && p.saturating_pow(escape_exp) > bound
            }
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn stream_slot<'a>(
    prefix: &'a [Option<SpinedTree>],
    cycle: &'a [Option<SpinedTree>],
    i: usize,
) -> &'a Option<SpinedTree> {
    if i < prefix.len() {
        &prefix[i]
    } else {
        &cycle[(i - prefix.len()) % cycle.len()]
    }
}

/// Slot-for-slot structural equality, insensitive only to child order in
/// finite parts.  Deliberately syntactic: anything that would need a real
/// isomorphism argument stays unequal and the caller answers `Unknown`.
fn slot_iso_eq(x: &SpinedTree, y: &SpinedTree) -> bool {
    match (x, y) {
        (SpinedTree::Fin(a), SpinedTree::Fin(b)) => a.canonicalize() == b.canonicalize(),
        (SpinedTree::SOrd(a), SpinedTree::SOrd(b)) => a == b,
        (
            SpinedTree::Spine { mode: ma, gen: ga, lengths: la },
            SpinedTree::Spine { mode: mb, gen: gb, lengths: lb },
        ) => ma == mb && lengths_eq(la, lb) && gen_iso_eq(ga, gb),
        _ => false,
    }
}

fn gen_iso_eq(a: &GenSeq, b: &GenSeq) -> bool {
    match (a, b) {
        (GenSeq::VRamp, GenSeq::VRamp) => true,
        (GenSeq::OrdinalRamp(x), GenSeq::OrdinalRamp(y)) => x == y,
        (
            GenSeq::Periodic { prefix: pa, cycle: ca },
            GenSeq::Periodic { prefix: pb, cycle: cb },
        ) => slot_streams_eq(pa, ca, pb, cb),
        _ => false,
    }
}

fn slot_streams_eq(
    pa: &[Option<SpinedTree>],
    ca: &[Option<SpinedTree>],
    pb: &[Option<SpinedTree>],
    cb: &[Option<SpinedTree>],
) -> bool {
    // past both prefixes the streams are periodic, so agreement over one
    // common period decides agreement everywhere
    let bound = pa.len().max(pb.len()) + lcm(ca.len(), cb.len());
    (0..bound).all(|i| {
        match (stream_slot(pa, ca, i), stream_slot(pb, cb, i)) {
            (None, None) => true,
            (Some(x), Some(y)) => slot_iso_eq(x, y),
            _ => false,
        }
    })
}

fn lengths_eq(a: &NatSeqSpec, b: &NatSeqSpec) -> bool {
    match (a, b) {
        (NatSeqSpec::PrimePowers { p }, NatSeqSpec::PrimePowers { p: q }) => p == q,
        (
            NatSeqSpec::PeriodicNat { prefix: pa, cycle: ca },
            NatSeqSpec::PeriodicNat { prefix: pb, cycle: cb },
        ) => {
            let bound = pa.len().max(pb.len()) + lcm(ca.len(), cb.len());
            (0..bound).all(|i| a.value(i) == b.value(i))
        }
        // a strictly increasing sequence never agrees with a periodic one
        _ => false,
    }
}

pub fn presentation_iso(a: &SpinedTree, b: &SpinedTree) -> IsoVerdict {
    presentation_iso_certified(a, b).0
}

/// Decide whether two periodic spine presentations describe isomorphic
/// trees, with a range certificate in the negative case.
///
/// `Iso` is reported when the decoration streams match slot by slot and the
/// length sequences agree entrywise.  `NonIso` is reported only for fully
/// decorated presentations satisfying the ray conditions: there the spine is
/// the unique ray of maximal order, every spine node has degree at least
/// three, and an isomorphism would have to match the degree-two runs between
/// them, forcing the length ranges to agree past a finite prefix.  Everything
/// else is `Unknown`.
pub fn presentation_iso_certified(
    a: &SpinedTree,
    b: &SpinedTree,
) -> (IsoVerdict, Option<RangeCertificate>) {
    let (Some((ma, pa, ca, la)), Some((mb, pb, cb, lb))) = (parts(a), parts(b)) else {
        return (IsoVerdict::Unknown, None);
    };
    if ma != mb || !slot_streams_eq(pa, ca, pb, cb) {
        return (IsoVerdict::Unknown, None);
    }
    if lengths_eq(la, lb) {
        return (IsoVerdict::Iso, None);
    }
    let dense = pa.iter().chain(ca.iter()).all(Option::is_some);
    if !dense || !check_ray_conditions(a) {
        return (IsoVerdict::Unknown, None);
    }
    match (la, lb) {
        (NatSeqSpec::PrimePowers { p }, NatSeqSpec::PrimePowers { p: q }) if p != q => (
            IsoVerdict::NonIso,
            Some(RangeCertificate::DistinctPrimes { p: *p, q: *q }),
        ),
        (NatSeqSpec::PrimePowers { p }, per @ NatSeqSpec::PeriodicNat { .. })
        | (per @ NatSeqSpec::PeriodicNat { .. }, NatSeqSpec::PrimePowers { p }) => {
            let bound = periodic_max(per).unwrap_or(0);
            let mut escape_exp = 1u32;
            while p.saturating_pow(escape_exp) <= bound {
                escape_exp += 1;
            }
            (
                IsoVerdict::NonIso,
                Some(RangeCertificate::PowersEscapePeriodic { p: *p, bound, escape_exp }),
            )
        }
        // two periodic ranges are both finite, so neither escapes the other
        _ => (IsoVerdict::Unknown, None),
    }
}

/// Produce `n` pairwise non-isomorphic presentations that are all equivalent
/// to `base` under the embedding order, by substituting prime-power length
/// sequences over distinct primes.
pub fn family_generate(base: &SpinedTree, n: usize) -> Result<Vec<SpinedTree>> {
    if n == 0 {
        return Err(Error::invalid("family size must be positive"));
    }
    base.validate()?;
    let Some((_, prefix, cycle, _)) = parts(base) else {
        return Err(Error::invalid("family construction needs a periodic spine presentation"));
    };
    if prefix.iter().chain(cycle.iter()).any(Option::is_none) {
        return Err(Error::invalid("family construction needs every spine slot decorated"));
    }
    if !check_ray_conditions(base) {
        return Err(Error::invalid("one-off decorations must recur along the cycle"));
    }
    if base.order() < OrdCNF::finite(2) {
        return Err(Error::invalid("family construction needs order at least 2"));
    }
    first_primes(n)
        .into_iter()
        .map(|p| s_f(base, NatSeqSpec::prime_powers(p)?))
        .collect()
}

/// Canonical form for presentations of order at most one whose branching is
/// confined to a finite core: a finite tree plus a multiset of rays, one
/// hung from each listed core node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order1Form {
    /// The canonically ordered finite core.
    pub core: FiniteTree,
    /// Preorder indices of core nodes carrying a ray, one entry per ray.
    pub ray_marks: Vec<usize>,
}

struct MarkTree {
    marks: usize,
    kids: Vec<MarkTree>,
}

fn from_finite(f: &FiniteTree) -> MarkTree {
    MarkTree { marks: 0, kids: f.children().iter().map(from_finite).collect() }
}

fn to_mark_tree(t: &SpinedTree) -> Result<MarkTree> {
    match t {
        SpinedTree::Fin(f) => Ok(from_finite(f)),
        SpinedTree::SOrd(a) => {
            if a.is_zero() {
                Ok(MarkTree { marks: 0, kids: Vec::new() })
            } else if *a == OrdCNF::finite(1) {
                Ok(MarkTree { marks: 1, kids: Vec::new() })
            } else {
                Err(Error::invalid("presentation has order above 1"))
            }
        }
        SpinedTree::Spine { gen: GenSeq::VRamp | GenSeq::OrdinalRamp(_), .. } => Err(
            Error::unsupported("growing decorations spread branching over the whole spine"),
        ),
        SpinedTree::Spine { mode, gen: GenSeq::Periodic { prefix, cycle }, lengths } => {
            if cycle.iter().any(Option::is_some) {
                return Err(Error::unsupported("recurring decorations give an infinite core"));
            }
            // only the prefix carries decorations; past it the spine is a
            // bare ray, which a single mark on the last prefix node absorbs
            let mut below: Option<MarkTree> = None;
            for i in (0..prefix.len()).rev() {
                let mut node = MarkTree { marks: 0, kids: Vec::new() };
                if i == prefix.len() - 1 {
                    node.marks += 1;
                }
                if let Some(x) = &prefix[i] {
                    let part = to_mark_tree(x)?;
                    match mode {
                        Mode::Attach => node.kids.push(part),
                        Mode::Glue => {
                            node.marks += part.marks;
                            node.kids.extend(part.kids);
                        }
                    }
                }
                if let Some(next) = below.take() {
                    // a long edge's interior nodes are real degree-2 nodes:
                    // only the embedded side may subdivide, so they separate
                    // presentations in both embedding directions
                    let mut chain = next;
                    for _ in 1..lengths.value(i) {
                        chain = MarkTree { marks: 0, kids: vec![chain] };
                    }
                    node.kids.push(chain);
                }
                below = Some(node);
            }
            Ok(below.unwrap_or(MarkTree { marks: 1, kids: Vec::new() }))
        }
    }
}

/// A childless node with exactly one mark is itself just a point further
/// along a bare ray; fold it into the parent's mark count, cascading upward.
fn absorb_ray_tails(t: &mut MarkTree) {
    for k in &mut t.kids {
        absorb_ray_tails(k);
    }
    let mut kept = Vec::with_capacity(t.kids.len());
    for k in t.kids.drain(..) {
        if k.kids.is_empty() && k.marks == 1 {
            t.marks += 1;
        } else {
            kept.push(k);
        }
    }
    t.kids = kept;
}

fn aug_code(t: &MarkTree) -> String {
    let mut codes: Vec<String> = t.kids.iter().map(aug_code).collect();
    codes.sort();
    let mut s = String::from("(");
    for c in &codes {
        s.push_str(c);
    }
    s.push(')');
    s.push_str(&"*".repeat(t.marks));
    s
}

fn sort_canonical(t: &mut MarkTree) {
    for k in &mut t.kids {
        sort_canonical(k);
    }
    t.kids.sort_by_cached_key(aug_code);
}

fn layout(t: &MarkTree) -> Order1Form {
    fn walk(t: &MarkTree, idx: &mut usize, marks: &mut Vec<usize>) -> FiniteTree {
        let me = *idx;
        *idx += 1;
        for _ in 0..t.marks {
            marks.push(me);
        }
        FiniteTree::node(t.kids.iter().map(|k| walk(k, idx, marks)).collect())
    }
    let mut idx = 0;
    let mut ray_marks = Vec::new();
    let core = walk(t, &mut idx, &mut ray_marks);
    Order1Form { core, ray_marks }
}

/// Canonical form of an order-at-most-one presentation with a finite core.
///
/// Two presentations in the supported fragment get equal forms exactly when
/// they describe the same tree up to the embedding order in both directions.
/// Presentations of higher order are rejected as invalid; order-one
/// presentations whose branching recurs forever along a spine (so the core
/// is infinite) are rejected as unsupported.
pub fn order1_canonical(t: &SpinedTree) -> Result<Order1Form> {
    t.validate()?;
    if t.order() > OrdCNF::finite(1) {
        return Err(Error::invalid("presentation has order above 1"));
    }
    let mut mt = to_mark_tree(t)?;
    absorb_ray_tails(&mut mt);
    sort_canonical(&mut mt);
    Ok(layout(&mt))
}

/// Check that the unrooted embedding relation between two finite trees does
/// not depend on where either tree is rooted: every rooting of each side
/// yields the same answer as the given pair.
pub fn reroot_invariance_check(t: &FiniteTree, s: &FiniteTree) -> bool {
    let base = unrooted_minor(t, s);
    t.all_rootings()
        .iter()
        .all(|tr| s.all_rootings().iter().all(|sr| unrooted_minor(tr, sr) == base))
}

#[cfg(test)]
mod nat_tests {
    use super::*;

    #[test]
    fn periodic_values() {
        let f = NatSeqSpec::periodic(vec![3], vec![2, 5]).unwrap();
        let got: Vec<usize> = (0..6).map(|i| f.value(i)).collect();
        assert_eq!(got, vec![3, 2, 5, 2, 5, 2]);
        assert!(NatSeqSpec::periodic(vec![], vec![]).is_err());
        assert!(NatSeqSpec::periodic(vec![0], vec![1]).is_err());
    }

    #[test]
    fn prime_power_values() {
        let f = NatSeqSpec::prime_powers(2).unwrap();
        assert_eq!((0..4).map(|i| f.value(i)).collect::<Vec<_>>(), vec![2, 4, 8, 16]);
        assert!(NatSeqSpec::prime_powers(6).is_err());
        // saturates rather than panicking far out
        let _ = f.value(100);
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(8), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spined::minor::spined_equiv;
    use crate::spined::{make_comb, CombSize};

    fn fin(t: FiniteTree) -> Option<SpinedTree> {
        Some(SpinedTree::Fin(t))
    }

    fn dense_base() -> SpinedTree {
        SpinedTree::spine(Mode::Attach, vec![], vec![Some(SpinedTree::ray())]).unwrap()
    }

    #[test]
    fn collapse_drops_gaps_and_lengths() {
        let t = SpinedTree::spine(
            Mode::Glue,
            vec![fin(FiniteTree::star(2)), None],
            vec![fin(FiniteTree::star(2)), None, None],
        )
        .unwrap()
        .with_lengths(NatSeqSpec::periodic(vec![4], vec![2]).unwrap())
        .unwrap();
        let c = collapse_presentation(&t).unwrap();
        let want = SpinedTree::spine(
            Mode::Glue,
            vec![fin(FiniteTree::star(2))],
            vec![fin(FiniteTree::star(2))],
        )
        .unwrap();
        assert_eq!(c, want);
        // no gaps left, so collapsing again is a no-op
        assert_eq!(collapse_presentation(&c).unwrap(), c);
        // gaps and edge lengths are subdivision detail: the tree is unchanged
        assert_eq!(spined_equiv(&c, &t).unwrap(), Verdict::True);
    }

    #[test]
    fn collapse_rejects_an_undecorated_root() {
        // interior empty slots are degree-2 points and smooth away, but the
        // root is a pendant tip: the original tree is not a subdivision of
        // anything that lacks it, so collapse declines
        let t = SpinedTree::spine(
            Mode::Attach,
            vec![None, None],
            vec![fin(FiniteTree::star(2)), None],
        )
        .unwrap();
        assert!(collapse_presentation(&t).is_err());
        let t = SpinedTree::spine(
            Mode::Glue,
            vec![None, Some(crate::spined::build_s(&OrdCNF::finite(2)))],
            vec![fin(FiniteTree::star(2))],
        )
        .unwrap();
        assert!(collapse_presentation(&t).is_err());
    }

    #[test]
    fn collapse_requires_recurring_cover() {
        // this one-off decoration embeds into no recurring one, so the
        // collapsed tree could not host the original
        let t = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::star(3))],
            vec![fin(FiniteTree::star(1)), None],
        )
        .unwrap();
        assert!(collapse_presentation(&t).is_err());
    }

    #[test]
    fn collapse_rejects_undecorated_cycles() {
        let bare = SpinedTree::ray();
        assert!(collapse_presentation(&bare).is_err());
        assert!(collapse_presentation(&SpinedTree::Fin(FiniteTree::leaf())).is_err());
    }

    #[test]
    fn ray_conditions() {
        let ok = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::star(1))],
            vec![fin(FiniteTree::star(2))],
        )
        .unwrap();
        assert!(check_ray_conditions(&ok));
        // a one-off decoration wider than anything recurring breaks them
        let bad = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::star(3))],
            vec![fin(FiniteTree::star(1))],
        )
        .unwrap();
        assert!(!check_ray_conditions(&bad));
        // vacuous without one-off decorations
        assert!(check_ray_conditions(&dense_base()));
        assert!(!check_ray_conditions(&SpinedTree::Fin(FiniteTree::leaf())));
    }

    #[test]
    fn length_substitution_preconditions() {
        let f = NatSeqSpec::prime_powers(2).unwrap();
        let gapped =
            SpinedTree::spine(Mode::Attach, vec![], vec![fin(FiniteTree::leaf()), None]).unwrap();
        assert!(s_f(&gapped, f.clone()).is_err());
        let bad_prefix = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::star(3))],
            vec![fin(FiniteTree::star(1))],
        )
        .unwrap();
        assert!(s_f(&bad_prefix, f.clone()).is_err());
        assert!(s_f(&SpinedTree::Fin(FiniteTree::leaf()), f).is_err());
    }

    #[test]
    fn length_substitution_subdivides_the_spine() {
        let base = SpinedTree::spine(Mode::Attach, vec![], vec![fin(FiniteTree::leaf())]).unwrap();
        let same = s_f(&base, NatSeqSpec::ones()).unwrap();
        assert_eq!(same, base);
        let sub = s_f(&base, NatSeqSpec::prime_powers(2).unwrap()).unwrap();
        for k in [1usize, 2, 3, 4] {
            // k spine nodes with a pendant leaf each, plus 2^(i+1) - 1
            // subdivision nodes inside each of the k - 1 spine edges
            assert_eq!(base.truncate(k, 2).unwrap().size(), 2 * k);
            assert_eq!(sub.truncate(k, 2).unwrap().size(), k + (1 << k) - 1);
            // subdivision never changes the tree up to the embedding order
            assert_eq!(spined_equiv(&sub, &base).unwrap(), Verdict::True);
        }
    }

    #[test]
    fn iso_detects_matching_streams() {
        let a = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::star(2))],
            vec![fin(FiniteTree::star(2))],
        )
        .unwrap();
        // same decoration stream written with a different prefix/cycle split
        let b = SpinedTree::spine(Mode::Attach, vec![], vec![fin(FiniteTree::star(2))]).unwrap();
        assert_eq!(presentation_iso(&a, &a), IsoVerdict::Iso);
        assert_eq!(presentation_iso(&a, &b), IsoVerdict::Iso);
        // same stream, different connection mode: nothing to say
        let g = SpinedTree::spine(Mode::Glue, vec![], vec![fin(FiniteTree::star(2))]).unwrap();
        assert_eq!(presentation_iso(&b, &g), IsoVerdict::Unknown);
    }

    #[test]
    fn iso_separates_prime_power_ranges() {
        let base = dense_base();
        let a = s_f(&base, NatSeqSpec::prime_powers(2).unwrap()).unwrap();
        let b = s_f(&base, NatSeqSpec::prime_powers(3).unwrap()).unwrap();
        let (v, cert) = presentation_iso_certified(&a, &b);
        assert_eq!(v, IsoVerdict::NonIso);
        let cert = cert.unwrap();
        assert_eq!(cert, RangeCertificate::DistinctPrimes { p: 2, q: 3 });
        assert!(cert.verify(&a, &b));
        assert!(cert.verify(&b, &a));
        assert!(!cert.verify(&a, &a));
    }

    #[test]
    fn iso_separates_powers_from_periodic() {
        let base = dense_base();
        let a = s_f(&base, NatSeqSpec::prime_powers(2).unwrap()).unwrap();
        let (v, cert) = presentation_iso_certified(&a, &base);
        assert_eq!(v, IsoVerdict::NonIso);
        let cert = cert.unwrap();
        assert_eq!(
            cert,
            RangeCertificate::PowersEscapePeriodic { p: 2, bound: 1, escape_exp: 1 }
        );
        assert!(cert.verify(&a, &base));
        assert!(cert.verify(&base, &a));
    }

    #[test]
    fn iso_stays_unknown_without_leverage() {
        // two periodic length ranges are both finite sets; neither escapes
        // the other, so the range argument says nothing
        let base = dense_base();
        let a = s_f(&base, NatSeqSpec::periodic(vec![], vec![2]).unwrap()).unwrap();
        let b = s_f(&base, NatSeqSpec::periodic(vec![3], vec![2]).unwrap()).unwrap();
        assert_eq!(presentation_iso(&a, &b), IsoVerdict::Unknown);
        // with a gap in the stream the spine is not rigid enough
        let gapped =
            SpinedTree::spine(Mode::Attach, vec![], vec![Some(SpinedTree::ray()), None]).unwrap();
        let ga = gapped.clone().with_lengths(NatSeqSpec::prime_powers(2).unwrap()).unwrap();
        let gb = gapped.with_lengths(NatSeqSpec::prime_powers(3).unwrap()).unwrap();
        assert_eq!(presentation_iso(&ga, &gb), IsoVerdict::Unknown);
    }

    #[test]
    fn family_members_are_equivalent_but_distinct() {
        let fam = family_generate(&dense_base(), 3).unwrap();
        assert_eq!(fam.len(), 3);
        for i in 0..fam.len() {
            assert_eq!(presentation_iso(&fam[i], &fam[i]), IsoVerdict::Iso);
            for j in 0..fam.len() {
                if i == j {
                    continue;
                }
                assert_eq!(spined_equiv(&fam[i], &fam[j]).unwrap(), Verdict::True);
                let (v, cert) = presentation_iso_certified(&fam[i], &fam[j]);
                assert_eq!(v, IsoVerdict::NonIso);
                assert!(cert.unwrap().verify(&fam[i], &fam[j]));
            }
        }
    }

    #[test]
    fn family_preconditions() {
        assert!(family_generate(&dense_base(), 0).is_err());
        // order below two: every member would be a bare ray in disguise
        let low = make_comb(CombSize::Finite(2), false).unwrap();
        assert!(family_generate(&low, 2).is_err());
        let gapped =
            SpinedTree::spine(Mode::Attach, vec![], vec![Some(SpinedTree::ray()), None]).unwrap();
        assert!(family_generate(&gapped, 2).is_err());
    }

    #[test]
    fn order1_bare_ray() {
        let form = order1_canonical(&SpinedTree::ray()).unwrap();
        assert_eq!(form.core, FiniteTree::leaf());
        assert_eq!(form.ray_marks, vec![0]);
    }

    #[test]
    fn order1_finite_trees_use_child_order_freely() {
        let a = SpinedTree::Fin(FiniteTree::node(vec![FiniteTree::path(2), FiniteTree::leaf()]));
        let b = SpinedTree::Fin(FiniteTree::node(vec![FiniteTree::leaf(), FiniteTree::path(2)]));
        let fa = order1_canonical(&a).unwrap();
        assert_eq!(fa, order1_canonical(&b).unwrap());
        assert!(fa.ray_marks.is_empty());
        assert_eq!(fa.core.size(), 4);
    }

    #[test]
    fn order1_absorbs_ray_tails() {
        // a trailing undecorated spine node is just a later point of the ray
        let a = SpinedTree::spine(Mode::Attach, vec![fin(FiniteTree::leaf())], vec![None]).unwrap();
        let b = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::leaf()), None],
            vec![None],
        )
        .unwrap();
        let fa = order1_canonical(&a).unwrap();
        assert_eq!(fa, order1_canonical(&b).unwrap());
        // so are subdivision points on the tail edge
        let c = a.clone().with_lengths(NatSeqSpec::periodic(vec![9], vec![1]).unwrap()).unwrap();
        assert_eq!(fa, order1_canonical(&c).unwrap());
        assert_eq!(fa.core.size(), 2);
        assert_eq!(fa.ray_marks, vec![0]);
    }

    #[test]
    fn order1_keeps_interior_subdivisions() {
        // a degree-2 node between two branchings is rigid: only the embedded
        // side of the relation may subdivide, so lengthening an edge between
        // decorated nodes gives a genuinely different tree
        let short = SpinedTree::spine(
            Mode::Attach,
            vec![fin(FiniteTree::leaf()), fin(FiniteTree::leaf())],
            vec![None],
        )
        .unwrap();
        let long = short
            .clone()
            .with_lengths(NatSeqSpec::periodic(vec![2], vec![1]).unwrap())
            .unwrap();
        let fs = order1_canonical(&short).unwrap();
        let fl = order1_canonical(&long).unwrap();
        assert_ne!(fs, fl);
        // root, its pendant leaf, the second branching, and its pendant leaf
        assert_eq!(fs.core.size(), 4);
        // the longer edge keeps its one interior node
        assert_eq!(fl.core.size(), fs.core.size() + 1);
        // an extra decorated node is a real difference too
        let one = SpinedTree::spine(Mode::Attach, vec![fin(FiniteTree::leaf())], vec![None])
            .unwrap();
        assert_ne!(fs, order1_canonical(&one).unwrap());
    }

    #[test]
    fn order1_glue_fuses_components() {
        let glued =
            SpinedTree::spine(Mode::Glue, vec![fin(FiniteTree::star(2))], vec![None]).unwrap();
        let form = order1_canonical(&glued).unwrap();
        // the star root fuses into the spine node: two leaves plus the ray
        assert_eq!(form.core, FiniteTree::star(2));
        assert_eq!(form.ray_marks, vec![0]);
    }

    #[test]
    fn order1_rejections() {
        let comb = make_comb(CombSize::Finite(2), false).unwrap();
        assert!(matches!(order1_canonical(&comb), Err(Error::Unsupported(_))));
        let hairy_w = make_comb(CombSize::Omega, true).unwrap();
        assert!(matches!(order1_canonical(&hairy_w), Err(Error::Unsupported(_))));
        assert!(matches!(
            order1_canonical(&crate::spined::build_s(&OrdCNF::finite(2))),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn reroot_invariance_samples() {
        let trees = [
            FiniteTree::path(4),
            FiniteTree::star(3),
            FiniteTree::node(vec![FiniteTree::path(2), FiniteTree::star(2)]),
            FiniteTree::complete_binary(2),
        ];
        for t in &trees {
            for s in &trees {
                assert!(reroot_invariance_check(t, s));
            }
        }
    }
}
