use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap for [`FiniteTree::enumerate_rooted_trees`].
pub const DEFAULT_ENUM_BOUND: usize = 10;

/// A rooted unlabeled finite tree.
///
/// The stored child order is presentation only; all semantic equality goes
/// through [`FiniteTree::canonical_code`]. Structural `==` compares the
/// presentation, not the isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTree {
    children: Vec<FiniteTree>,
    size: usize,
}

/// Canonical AHU-style code: a balanced parenthesis string in which the
/// children's codes appear in sorted order at every level. Two trees are
/// isomorphic iff their codes are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifies an edge of a [`FiniteTree`] by the child-index path from the
/// root to the lower endpoint of the edge. The path is never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub Vec<usize>);

impl FiniteTree {
    /// The single-vertex tree.
    pub fn leaf() -> Self {
        FiniteTree { children: Vec::new(), size: 1 }
    }

    /// A root with the given child subtrees.
    pub fn node(children: Vec<FiniteTree>) -> Self {
        let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
        FiniteTree { children, size }
    }

    /// The path with `n` nodes, rooted at one end. `n` must be at least 1.
    pub fn path(n: usize) -> Self {
        assert!(n >= 1, "path needs at least one node");
        let mut t = FiniteTree::leaf();
        for _ in 1..n {
            t = FiniteTree::node(vec![t]);
        }
        t
    }

    /// The star `V_k`: a root with `k` leaf children.
    pub fn star(k: usize) -> Self {
        FiniteTree::node((0..k).map(|_| FiniteTree::leaf()).collect())
    }

    /// The complete binary tree in which every leaf is at distance `depth`
    /// from the root. `complete_binary(0)` is a single vertex.
    pub fn complete_binary(depth: usize) -> Self {
        if depth == 0 {
            FiniteTree::leaf()
        } else {
            let sub = FiniteTree::complete_binary(depth - 1);
            FiniteTree::node(vec![sub.clone(), sub])
        }
    }

    pub fn children(&self) -> &[FiniteTree] {
        &self.children
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Length in edges of the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// Largest child count over all nodes.
    pub fn max_branching(&self) -> usize {
        let here = self.children.len();
        self.children
            .iter()
            .map(|c| c.max_branching())
            .max()
            .map_or(here, |m| here.max(m))
    }

    fn code_string(&self) -> String {
        let mut parts: Vec<String> = self.children.iter().map(|c| c.code_string()).collect();
        parts.sort();
        let mut s = String::with_capacity(2 * self.size);
        s.push('(');
        for p in parts {
            s.push_str(&p);
        }
        s.push(')');
        s
    }

    /// Canonical isomorphism-invariant code.
    pub fn canonical_code(&self) -> CanonicalCode {
        CanonicalCode(self.code_string())
    }

    /// The canonical presentation: children sorted by code at every level.
    pub fn canonicalize(&self) -> FiniteTree {
        let mut kids: Vec<FiniteTree> = self.children.iter().map(|c| c.canonicalize()).collect();
        kids.sort_by(|a, b| a.code_string().cmp(&b.code_string()));
        FiniteTree::node(kids)
    }

    pub fn is_isomorphic(&self, other: &FiniteTree) -> bool {
        self.size == other.size && self.code_string() == other.code_string()
    }

    /// One representative per isomorphism class of rooted trees with exactly
    /// `n` nodes, sorted by canonical code. Uses the default size cap.
    pub fn enumerate_rooted_trees(n: usize) -> Result<Vec<FiniteTree>> {
        Self::enumerate_rooted_trees_bounded(n, DEFAULT_ENUM_BOUND)
    }

    /// Like [`FiniteTree::enumerate_rooted_trees`] with an explicit cap.
    pub fn enumerate_rooted_trees_bounded(n: usize, bound: usize) -> Result<Vec<FiniteTree>> {
        if n == 0 {
            return Err(Error::invalid("tree enumeration needs n >= 1"));
        }
        if n > bound {
            return Err(Error::limit("tree enumeration node count", bound));
        }
        // by_size[k] holds every class with k nodes, in a fixed order; a tree
        // of size m is a root plus a multiset of smaller trees, enumerated as
        // a non-increasing sequence of catalog indices.
        let mut by_size: Vec<Vec<FiniteTree>> = vec![Vec::new(), vec![FiniteTree::leaf()]];
        for m in 2..=n {
            let catalog: Vec<&FiniteTree> = by_size[1..m].iter().flatten().collect();
            let mut out: Vec<FiniteTree> = Vec::new();
            let mut picked: Vec<FiniteTree> = Vec::new();
            fill_multisets(&catalog, m - 1, catalog.len(), &mut picked, &mut out);
            out = out.into_iter().map(|t| t.canonicalize()).collect();
            out.sort_by(|a, b| a.code_string().cmp(&b.code_string()));
            by_size.push(out);
        }
        Ok(by_size.swap_remove(n))
    }

    /// All edges in preorder: for each node, each child edge before the
    /// child's own edges.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.size.saturating_sub(1));
        let mut prefix = Vec::new();
        self.collect_edges(&mut prefix, &mut out);
        out
    }

    fn collect_edges(&self, prefix: &mut Vec<usize>, out: &mut Vec<EdgeId>) {
        for (i, c) in self.children.iter().enumerate() {
            prefix.push(i);
            out.push(EdgeId(prefix.clone()));
            c.collect_edges(prefix, out);
            prefix.pop();
        }
    }

    /// Replaces each listed edge by a path with the given number of edges
    /// (1 leaves the edge alone, k inserts k-1 intermediate nodes). Edges not
    /// listed keep length 1.
    pub fn subdivide(&self, lengths: &BTreeMap<EdgeId, usize>) -> Result<FiniteTree> {
        let known: std::collections::BTreeSet<EdgeId> = self.edges().into_iter().collect();
        for (e, &k) in lengths {
            if !known.contains(e) {
                return Err(Error::invalid(format!("unknown edge {:?}", e.0)));
            }
            if k == 0 {
                return Err(Error::invalid("subdivision length must be at least 1"));
            }
        }
        let mut prefix = Vec::new();
        Ok(self.subdivide_walk(lengths, &mut prefix))
    }

    fn subdivide_walk(
        &self,
        lengths: &BTreeMap<EdgeId, usize>,
        prefix: &mut Vec<usize>,
    ) -> FiniteTree {
        let mut kids = Vec::with_capacity(self.children.len());
        for (i, c) in self.children.iter().enumerate() {
            prefix.push(i);
            let mut sub = c.subdivide_walk(lengths, prefix);
            let k = lengths.get(&EdgeId(prefix.clone())).copied().unwrap_or(1);
            for _ in 1..k {
                sub = FiniteTree::node(vec![sub]);
            }
            prefix.pop();
            kids.push(sub);
        }
        FiniteTree::node(kids)
    }

    /// Suppresses every non-root node that has exactly one child, splicing
    /// its parent directly to its child. The root is never suppressed.
    pub fn collapse(&self) -> FiniteTree {
        let kids = self
            .children
            .iter()
            .map(|c| {
                let mut cur = c;
                while cur.children.len() == 1 {
                    cur = &cur.children[0];
                }
                cur.collapse()
            })
            .collect();
        FiniteTree::node(kids)
    }

    /// One rooted tree per vertex, rerooted at that vertex, in preorder of
    /// the original presentation. The result always has `size()` entries.
    pub fn all_rootings(&self) -> Vec<FiniteTree> {
        let adj = self.adjacency();
        (0..self.size).map(|v| build_rooted(&adj, v, usize::MAX)).collect()
    }

    /// Undirected adjacency lists over preorder vertex indices.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.size];
        let mut next = 0usize;
        self.adjacency_walk(&mut next, &mut adj);
        adj
    }

    fn adjacency_walk(&self, next: &mut usize, adj: &mut Vec<Vec<usize>>) {
        let me = *next;
        *next += 1;
        for c in &self.children {
            let child_id = *next;
            adj[me].push(child_id);
            adj[child_id].push(me);
            c.adjacency_walk(next, adj);
        }
    }
}

fn fill_multisets(
    catalog: &[&FiniteTree],
    budget: usize,
    max_idx: usize,
    picked: &mut Vec<FiniteTree>,
    out: &mut Vec<FiniteTree>,
) {
    if budget == 0 {
        out.push(FiniteTree::node(picked.clone()));
        return;
    }
    for idx in (0..max_idx).rev() {
        let t = catalog[idx];
        if t.size() <= budget {
            picked.push(t.clone());
            fill_multisets(catalog, budget - t.size(), idx + 1, picked, out);
            picked.pop();
        }
    }
}

fn build_rooted(adj: &[Vec<usize>], v: usize, parent: usize) -> FiniteTree {
    let kids = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| build_rooted(adj, w, v))
        .collect();
    FiniteTree::node(kids)
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for FiniteTree {
    type Err = Error;

    /// Parses the parenthesis format. Children may appear in any order;
    /// whitespace between tokens is ignored.
    fn from_str(s: &str) -> Result<FiniteTree> {
        let mut stack: Vec<Vec<FiniteTree>> = Vec::new();
        let mut done: Option<FiniteTree> = None;
        for (i, ch) in s.char_indices() {
            let col = i + 1;
            if ch.is_whitespace() {
                continue;
            }
            if done.is_some() {
                return Err(Error::Parse {
                    line: 1,
                    col,
                    msg: "trailing input after tree".into(),
                });
            }
            match ch {
                '(' => stack.push(Vec::new()),
                ')' => {
                    let kids = stack.pop().ok_or(Error::Parse {
                        line: 1,
                        col,
                        msg: "unmatched ')'".into(),
                    })?;
                    let t = FiniteTree::node(kids);
                    match stack.last_mut() {
                        Some(top) => top.push(t),
                        None => done = Some(t),
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        col,
                        msg: format!("unexpected character {ch:?}"),
                    })
                }
            }
        }
        done.ok_or_else(|| Error::Parse {
            line: 1,
            col: s.len() + 1,
            msg: if stack.is_empty() {
                "empty input".into()
            } else {
                "unclosed '('".into()
            },
        })
    }
}

/// Independent class counts via the standard convolution recurrence for
/// rooted unlabeled trees: a(m) = (1/(m-1)) * sum c(k) a(m-k) with
/// c(k) = sum_{d|k} d * a(d).
pub(crate) fn convolution_counts(up_to: usize) -> Vec<usize> {
    let mut a = vec![0usize; up_to + 1];
    if up_to >= 1 {
        a[1] = 1;
    }
    for m in 2..=up_to {
        let mut total = 0usize;
        for k in 1..m {
            let mut c = 0usize;
            for d in 1..=k {
                if k % d == 0 {
                    c += d * a[d];
                }
            }
            total += c * a[m - k];
        }
        assert_eq!(total % (m - 1), 0);
        a[m] = total / (m - 1);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Backtracking isomorphism search, independent of canonical codes.
    fn iso_backtrack(a: &FiniteTree, b: &FiniteTree) -> bool {
        if a.size() != b.size() || a.children.len() != b.children.len() {
            return false;
        }
        let n = a.children.len();
        let mut used = vec![false; n];
        fn assign(
            a_kids: &[FiniteTree],
            b_kids: &[FiniteTree],
            i: usize,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == a_kids.len() {
                return true;
            }
            for j in 0..b_kids.len() {
                if !used[j] && iso_backtrack(&a_kids[i], &b_kids[j]) {
                    used[j] = true;
                    if assign(a_kids, b_kids, i + 1, used) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        assign(&a.children, &b.children, 0, &mut used)
    }

    #[test]
    fn code_base_cases() {
        assert_eq!(FiniteTree::leaf().canonical_code().as_str(), "()");
        assert_eq!(FiniteTree::star(2).canonical_code().as_str(), "(()())");
    }

    #[test]
    fn code_ignores_child_order() {
        let a = FiniteTree::node(vec![FiniteTree::path(3), FiniteTree::star(2)]);
        let b = FiniteTree::node(vec![FiniteTree::star(2), FiniteTree::path(3)]);
        assert_eq!(a.canonical_code(), b.canonical_code());
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn code_full_permutation_invariance() {
        // Every way of recursively permuting children yields the same code.
        fn variants(t: &FiniteTree) -> Vec<FiniteTree> {
            if t.children().is_empty() {
                return vec![FiniteTree::leaf()];
            }
            let per_child: Vec<Vec<FiniteTree>> = t.children().iter().map(variants).collect();
            // cartesian product of child variants, then all orderings of the result
            let mut rows: Vec<Vec<FiniteTree>> = vec![Vec::new()];
            for vs in &per_child {
                let mut next = Vec::new();
                for row in &rows {
                    for v in vs {
                        let mut r = row.clone();
                        r.push(v.clone());
                        next.push(r);
                    }
                }
                rows = next;
            }
            let mut out = Vec::new();
            for row in rows {
                permute(row.len(), &mut row.clone(), &mut |kids| {
                    out.push(FiniteTree::node(kids.to_vec()));
                });
            }
            out
        }
        fn permute(k: usize, items: &mut Vec<FiniteTree>, emit: &mut impl FnMut(&[FiniteTree])) {
            if k <= 1 {
                emit(items);
                return;
            }
            for i in 0..k {
                items.swap(i, k - 1);
                permute(k - 1, items, emit);
                items.swap(i, k - 1);
            }
        }

        let t = FiniteTree::node(vec![
            FiniteTree::star(2),
            FiniteTree::node(vec![FiniteTree::path(2)]),
            FiniteTree::leaf(),
        ]);
        assert_eq!(t.size(), 8);
        let code = t.canonical_code();
        for v in variants(&t) {
            assert_eq!(v.canonical_code(), code);
        }
    }

    #[test]
    fn iso_matches_backtracking_on_small_trees() {
        let trees: Vec<FiniteTree> = (1..=6)
            .flat_map(|n| FiniteTree::enumerate_rooted_trees(n).unwrap())
            .collect();
        for a in &trees {
            for b in &trees {
                assert_eq!(a.is_isomorphic(b), iso_backtrack(a, b));
            }
        }
    }

    #[test]
    fn iso_distinct_presentations() {
        let a: FiniteTree = "((())(()()))".parse().unwrap();
        let b: FiniteTree = "((()())(()))".parse().unwrap();
        assert_eq!(a.size(), 6);
        assert!(a.is_isomorphic(&b));
        assert!(!FiniteTree::star(2).is_isomorphic(&FiniteTree::path(3)));
    }

    #[test]
    fn enumeration_counts_match_convolution() {
        let expect = convolution_counts(10);
        for n in 1..=10 {
            let ts = FiniteTree::enumerate_rooted_trees(n).unwrap();
            assert_eq!(ts.len(), expect[n], "class count for {n} nodes");
            // one representative per class, sorted, no duplicates
            for w in ts.windows(2) {
                assert!(w[0].canonical_code() < w[1].canonical_code());
            }
            for t in &ts {
                assert_eq!(t.size(), n);
            }
        }
        assert_eq!(&expect[1..=9], &[1, 1, 2, 4, 9, 20, 48, 115, 286]);
    }

    #[test]
    fn enumeration_bounds() {
        assert!(matches!(
            FiniteTree::enumerate_rooted_trees(11),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            FiniteTree::enumerate_rooted_trees(0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(FiniteTree::enumerate_rooted_trees_bounded(11, 11).is_ok());
    }

    #[test]
    fn subdivide_identity_and_paths() {
        let t = FiniteTree::star(2);
        let all_one: BTreeMap<EdgeId, usize> =
            t.edges().into_iter().map(|e| (e, 1)).collect();
        assert!(t.subdivide(&all_one).unwrap().is_isomorphic(&t));

        let p2 = FiniteTree::path(2);
        let mut m = BTreeMap::new();
        m.insert(EdgeId(vec![0]), 3);
        let sub = p2.subdivide(&m).unwrap();
        assert!(sub.is_isomorphic(&FiniteTree::path(4)));
    }

    #[test]
    fn subdivide_rejects_unknown_edges() {
        let t = FiniteTree::path(2);
        let mut m = BTreeMap::new();
        m.insert(EdgeId(vec![5]), 2);
        assert!(matches!(t.subdivide(&m), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn collapse_basics() {
        assert!(FiniteTree::path(5).collapse().is_isomorphic(&FiniteTree::path(2)));
        let v3 = FiniteTree::star(3);
        assert!(v3.collapse().is_isomorphic(&v3));
        // the root survives even when unary
        let rooted_mid = FiniteTree::node(vec![FiniteTree::path(3)]);
        assert_eq!(rooted_mid.collapse().size(), 2);
    }

    #[test]
    fn collapse_of_subdivision_recovers_collapse() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let trees = FiniteTree::enumerate_rooted_trees(6).unwrap();
        for t in &trees {
            let lengths: BTreeMap<EdgeId, usize> = t
                .edges()
                .into_iter()
                .map(|e| {
                    let k = (next() % 3 + 1) as usize;
                    (e, k)
                })
                .collect();
            let extra: usize = lengths.values().map(|k| k - 1).sum();
            let sub = t.subdivide(&lengths).unwrap();
            assert_eq!(sub.size(), t.size() + extra);
            assert!(sub.collapse().is_isomorphic(&t.collapse()));
            // collapse is idempotent
            assert!(sub.collapse().collapse().is_isomorphic(&sub.collapse()));
        }
    }

    #[test]
    fn rootings_count_and_symmetry() {
        assert_eq!(FiniteTree::leaf().all_rootings().len(), 1);
        let p2 = FiniteTree::path(2);
        let r = p2.all_rootings();
        assert_eq!(r.len(), 2);
        assert!(r[0].is_isomorphic(&r[1]));
        for t in FiniteTree::enumerate_rooted_trees(6).unwrap() {
            assert_eq!(t.all_rootings().len(), t.size());
        }
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["()", "(()())", "((())(()()))"] {
            let t: FiniteTree = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert!(" ( ( ) ) ".parse::<FiniteTree>().is_ok());
        for bad in ["", "(", ")", "(()", "()x", "()()"] {
            assert!(bad.parse::<FiniteTree>().is_err(), "{bad:?} should fail");
        }
    }
}
