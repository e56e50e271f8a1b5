//! Extracting the sub-presentation spanned by comb-carrying rays.
//!
//! For a width `alpha` (a finite value `>= 3`, or the unbounded width), a ray
//! survives the extraction when cofinally many of its nodes are wide enough
//! for a comb of that width: either a pendant fan with `alpha` tips embeds
//! into a single decoration branch hanging there, or the node itself fuses at
//! least `alpha - 2` extra branches. Everything that lies on no surviving ray
//! is dropped. Widening the fan can only shrink the result, so repeated
//! extraction with growing width is pointwise decreasing.

use crate::error::{Error, Result};
use crate::family::NatSeqSpec;
use crate::finite::FiniteTree;
use crate::spined::minor::spined_minor;
use crate::spined::{build_s, Branching, CombSize, GenSeq, Mode, SpinedTree};
use crate::verdict::Verdict;

/// The subtree spanned by all rays that trace combs of width `alpha`,
/// returned as a presentation, or `None` when no ray survives.
///
/// Defined on presentations built from finite trees and spines with periodic
/// or growing-fan generators; ordinal shorthands are first rewritten into
/// explicit spines, which rules out limit ordinals and ramp generators.
pub fn t_star(t: &SpinedTree, alpha: CombSize) -> Result<Option<SpinedTree>> {
    if let CombSize::Finite(n) = alpha {
        if n < 3 {
            return Err(Error::invalid("extraction width must be at least 3"));
        }
    }
    t.validate()?;
    let expanded = expand_ordinals(t)?;
    extract(&expanded, alpha)
}

/// Rewrite ordinal shorthands into explicit spines so the extraction only
/// sees concrete decoration slots. Limit ordinals have no periodic spine
/// form, so they (and ramp generators) are rejected.
fn expand_ordinals(t: &SpinedTree) -> Result<SpinedTree> {
    match t {
        SpinedTree::Fin(_) => Ok(t.clone()),
        SpinedTree::SOrd(a) => {
            if a.as_finite().is_some() {
                Ok(build_s(a))
            } else {
                Err(Error::unsupported(
                    "ray extraction needs an explicit periodic spine, not a limit shorthand",
                ))
            }
        }
        SpinedTree::Spine { gen: GenSeq::OrdinalRamp(_), .. } => Err(Error::unsupported(
            "ray extraction is not defined over ordinal ramp generators",
        )),
        SpinedTree::Spine { gen: GenSeq::VRamp, .. } => Ok(t.clone()),
        SpinedTree::Spine { mode, gen: GenSeq::Periodic { prefix, cycle }, lengths } => {
            let map = |slots: &[Option<SpinedTree>]| -> Result<Vec<Option<SpinedTree>>> {
                slots.iter().map(|s| s.as_ref().map(expand_ordinals).transpose()).collect()
            };
            Ok(SpinedTree::Spine {
                mode: *mode,
                gen: GenSeq::Periodic { prefix: map(prefix)?, cycle: map(cycle)? },
                lengths: lengths.clone(),
            })
        }
    }
}

/// The branches a decoration contributes at its host node: a pendant one for
/// an attached decoration, the fused child subtrees for a glued one.
fn slot_branches(slot: &SpinedTree, mode: Mode) -> Vec<SpinedTree> {
    match mode {
        Mode::Attach => vec![slot.clone()],
        Mode::Glue => slot.glued_components(),
    }
}

/// Whether one recurring decoration makes its host node wide enough: a fan
/// with `alpha` tips fits into one branch, or the branches alone supply the
/// `alpha - 2` extra edges a fused comb node needs. The unbounded width
/// needs fans of every finite size in one branch.
fn slot_qualifies(slot: &SpinedTree, mode: Mode, alpha: CombSize) -> Result<bool> {
    let branches = slot_branches(slot, mode);
    match alpha {
        CombSize::Finite(n) => {
            if branches.len() >= n - 2 {
                return Ok(true);
            }
            let fan = SpinedTree::Fin(FiniteTree::star(n));
            for b in &branches {
                match spined_minor(&fan, b)? {
                    Verdict::True => return Ok(true),
                    Verdict::False => {}
                    Verdict::Unknown => {
                        return Err(Error::unsupported(
                            "undecided fan embedding during ray extraction",
                        ))
                    }
                }
            }
            Ok(false)
        }
        CombSize::Omega => {
            Ok(branches.iter().any(|b| b.max_branching() == Branching::Unbounded))
        }
    }
}

fn extract(t: &SpinedTree, alpha: CombSize) -> Result<Option<SpinedTree>> {
    match t {
        // finite decorations contain no rays at all
        SpinedTree::Fin(_) => Ok(None),
        SpinedTree::SOrd(_) | SpinedTree::Spine { gen: GenSeq::OrdinalRamp(_), .. } => {
            unreachable!("ordinal shorthands are expanded before extraction")
        }
        SpinedTree::Spine { mode, gen: GenSeq::VRamp, lengths } => {
            // fans of every size recur along the spine, so it survives any
            // width; the fans themselves contain no rays
            Ok(Some(SpinedTree::Spine {
                mode: *mode,
                gen: GenSeq::Periodic { prefix: Vec::new(), cycle: vec![None] },
                lengths: lengths.clone(),
            }))
        }
        SpinedTree::Spine { mode, gen: GenSeq::Periodic { prefix, cycle }, lengths } => {
            let mut spine_survives = false;
            for s in cycle.iter().flatten() {
                if slot_qualifies(s, *mode, alpha)? {
                    spine_survives = true;
                    break;
                }
            }
            let sub = |slots: &[Option<SpinedTree>]| -> Result<Vec<Option<SpinedTree>>> {
                slots
                    .iter()
                    .map(|s| match s {
                        Some(x) => extract(x, alpha),
                        None => Ok(None),
                    })
                    .collect()
            };
            let new_prefix = sub(prefix)?;
            let new_cycle = sub(cycle)?;
            // a surviving recurring decoration is met cofinally often, so the
            // rays through it cover the whole spine even when the spine ray
            // itself carries no combs
            if spine_survives || new_cycle.iter().any(Option::is_some) {
                return Ok(Some(SpinedTree::Spine {
                    mode: *mode,
                    gen: GenSeq::Periodic { prefix: new_prefix, cycle: new_cycle },
                    lengths: lengths.clone(),
                }));
            }
            let Some(last) = new_prefix.iter().rposition(Option::is_some) else {
                return Ok(None);
            };
            let cont = new_prefix[last].clone().expect("position of a survivor");
            splice(&new_prefix[..last], *mode, cont).map(Some)
        }
    }
}

/// Wire the last surviving one-off decoration in as the continuation of the
/// spine: the surviving rays run through the first host nodes and onward into
/// the decoration's own spine, so the two spines join into one. Edge lengths
/// reset to 1; subdividing edges never changes which rays survive.
fn splice(early: &[Option<SpinedTree>], mode: Mode, cont: SpinedTree) -> Result<SpinedTree> {
    let SpinedTree::Spine {
        mode: d_mode,
        gen: GenSeq::Periodic { prefix: dp, cycle: dc },
        ..
    } = cont
    else {
        unreachable!("extraction yields periodic spines");
    };
    let has_early = early.iter().any(Option::is_some);
    let d_decorated = dp.iter().chain(dc.iter()).any(Option::is_some);
    let final_mode = match (has_early, d_decorated) {
        (true, true) if mode != d_mode => {
            return Err(Error::unsupported(
                "surviving decorations mix fused and pendant connections",
            ))
        }
        (_, true) => d_mode,
        _ => mode,
    };
    let mut new_prefix = early.to_vec();
    if mode == Mode::Attach {
        // the pendant edge becomes one more spine edge, and the junction
        // node keeps an empty decoration slot
        new_prefix.push(None);
    }
    new_prefix.extend(dp);
    Ok(SpinedTree::Spine {
        mode: final_mode,
        gen: GenSeq::Periodic { prefix: new_prefix, cycle: dc },
        lengths: NatSeqSpec::ones(),
    })
}
