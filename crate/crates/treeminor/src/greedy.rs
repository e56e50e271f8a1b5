//! Shared greedy scanner for matching one eventually periodic stream into
//! another by a strictly increasing index sequence.

use std::collections::HashSet;

use crate::verdict::Verdict;

/// Shape of an eventually periodic stream: `prefix` one-off positions, then
/// a cycle of length `cycle` repeating forever.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StreamShape {
    pub prefix: usize,
    pub cycle: usize,
}

impl StreamShape {
    /// Collapses a position to its recurrence class.
    pub fn class(&self, n: usize) -> usize {
        if n < self.prefix {
            n
        } else {
            self.prefix + (n - self.prefix) % self.cycle
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum GreedyOutcome {
    /// The scanner state repeated inside both cycles: the matching extends
    /// forever. `ks` holds the indices chosen before the repeat.
    Holds { ks: Vec<usize> },
    /// Entry `f_index` matched no position after the previous pick, with the
    /// scan covering the rest of the prefix plus one full cycle of the host.
    /// `saw_unknown` is set when any comparison during the whole run was
    /// indefinite, in which case the stall does not prove impossibility.
    Stuck { f_index: usize, ks: Vec<usize>, saw_unknown: bool },
}

/// Greedily assigns to every stream entry `n` the least host index
/// `k > ks[n-1]` whose comparison is `True`. Comparisons must be pure.
pub(crate) fn greedy_ride(
    f: StreamShape,
    g: StreamShape,
    mut leq: impl FnMut(usize, usize) -> Verdict,
) -> GreedyOutcome {
    assert!(f.cycle > 0 && g.cycle > 0, "cycles must be nonempty");
    let mut ks: Vec<usize> = Vec::new();
    let mut saw_unknown = false;
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let state_bound = (f.prefix + f.cycle) * (g.prefix + g.cycle) + f.prefix + g.prefix + 2;
    for n in 0..=state_bound {
        let start = ks.last().map_or(0, |&k| k + 1);
        if n >= f.prefix && start >= g.prefix && !seen.insert((f.class(n), g.class(start))) {
            return GreedyOutcome::Holds { ks };
        }
        // covers every remaining prefix position and one full cycle
        let end = start.max(g.prefix) + g.cycle - 1;
        let mut hit = None;
        for k in start..=end {
            match leq(n, k) {
                Verdict::True => {
                    hit = Some(k);
                    break;
                }
                Verdict::Unknown => saw_unknown = true,
                Verdict::False => {}
            }
        }
        match hit {
            Some(k) => ks.push(k),
            None => return GreedyOutcome::Stuck { f_index: n, ks, saw_unknown },
        }
    }
    unreachable!("state space of size {state_bound} exhausted without a repeat")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_true_holds_immediately() {
        let shape = StreamShape { prefix: 0, cycle: 1 };
        match greedy_ride(shape, shape, |_, _| Verdict::True) {
            GreedyOutcome::Holds { ks } => assert_eq!(ks, vec![0]),
            o => panic!("expected Holds, got {o:?}"),
        }
    }

    #[test]
    fn impossible_entry_stalls_with_full_scan() {
        let f = StreamShape { prefix: 1, cycle: 1 };
        let g = StreamShape { prefix: 0, cycle: 2 };
        let out = greedy_ride(f, g, |n, _| Verdict::from_bool(n != 0));
        match out {
            GreedyOutcome::Stuck { f_index, saw_unknown, .. } => {
                assert_eq!(f_index, 0);
                assert!(!saw_unknown);
            }
            o => panic!("expected Stuck, got {o:?}"),
        }
    }

    #[test]
    fn unknown_poisons_the_stall() {
        let f = StreamShape { prefix: 0, cycle: 1 };
        let g = StreamShape { prefix: 0, cycle: 1 };
        let out = greedy_ride(f, g, |_, _| Verdict::Unknown);
        match out {
            GreedyOutcome::Stuck { saw_unknown, .. } => assert!(saw_unknown),
            o => panic!("expected Stuck, got {o:?}"),
        }
    }

    #[test]
    fn skipping_ride_holds() {
        // f entries only fit every third g position
        let f = StreamShape { prefix: 0, cycle: 1 };
        let g = StreamShape { prefix: 0, cycle: 3 };
        match greedy_ride(f, g, |_, k| Verdict::from_bool(k % 3 == 2)) {
            GreedyOutcome::Holds { ks } => assert!(ks.iter().all(|k| k % 3 == 2)),
            o => panic!("expected Holds, got {o:?}"),
        }
    }
}
