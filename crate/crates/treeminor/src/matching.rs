//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).

/// Returns the size of a maximum matching. `adj[l]` lists the right-side
/// vertices available to left vertex `l`.
pub(crate) fn max_matching(n_right: usize, adj: &[Vec<usize>]) -> usize {
    matching_assignment(n_right, adj).0
}

/// Maximum matching plus, for each left vertex, its matched right vertex.
pub(crate) fn matching_assignment(
    n_right: usize,
    adj: &[Vec<usize>],
) -> (usize, Vec<Option<usize>>) {
    let mut right_to_left: Vec<Option<usize>> = vec![None; n_right];
    let mut size = 0usize;
    for l in 0..adj.len() {
        let mut seen = vec![false; n_right];
        if try_augment(l, adj, &mut seen, &mut right_to_left) {
            size += 1;
        }
    }
    let mut left_to_right = vec![None; adj.len()];
    for (r, owner) in right_to_left.iter().enumerate() {
        if let Some(l) = owner {
            left_to_right[*l] = Some(r);
        }
    }
    (size, left_to_right)
}

fn try_augment(
    l: usize,
    adj: &[Vec<usize>],
    seen: &mut Vec<bool>,
    right_to_left: &mut Vec<Option<usize>>,
) -> bool {
    for &r in &adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        match right_to_left[r] {
            None => {
                right_to_left[r] = Some(l);
                return true;
            }
            Some(other) => {
                if try_augment(other, adj, seen, right_to_left) {
                    right_to_left[r] = Some(l);
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(max_matching(0, &[]), 0);
        assert_eq!(max_matching(1, &[vec![0], vec![0]]), 1);
        assert_eq!(max_matching(2, &[vec![0, 1], vec![0]]), 2);
        // classic alternating-path case
        let adj = vec![vec![0], vec![0, 1], vec![1, 2]];
        let (size, assign) = matching_assignment(3, &adj);
        assert_eq!(size, 3);
        let mut rs: Vec<usize> = assign.into_iter().map(|o| o.unwrap()).collect();
        rs.sort();
        assert_eq!(rs, vec![0, 1, 2]);
    }

    #[test]
    fn infeasible_left_vertex() {
        let adj = vec![vec![], vec![0]];
        let (size, assign) = matching_assignment(1, &adj);
        assert_eq!(size, 1);
        assert_eq!(assign[0], None);
        assert_eq!(assign[1], Some(0));
    }
}
