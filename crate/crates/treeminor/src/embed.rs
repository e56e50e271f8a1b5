use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::FiniteTree;
use crate::matching::{matching_assignment, max_matching};

/// Default cap on the host size accepted by [`brute_force_minor`].
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 12;

/// Where the embedded tree's root may land in the host.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootRule {
    /// The root may map to any host node (default).
    Anywhere,
    /// The root must map to the host root.
    AtRoot,
}

/// Decides whether some subdivision of `t` is a subtree of `s` with ancestor
/// relations preserved; `t`'s root may land on any node of `s`.
///
/// Two mutually recursive predicates drive the search: A(x, v) places the
/// subtree at `x` with root exactly at `v` via a maximum bipartite matching
/// of `x`'s child subtrees against `v`'s children, and B(x, v) allows the
/// root to slide to any descendant of `v`.
pub fn rooted_minor(t: &FiniteTree, s: &FiniteTree) -> bool {
    rooted_minor_with_rule(t, s, RootRule::Anywhere)
}

/// [`rooted_minor`] with the root placement rule made explicit.
pub fn rooted_minor_with_rule(t: &FiniteTree, s: &FiniteTree, rule: RootRule) -> bool {
    let mut emb = Emb::new(t, s);
    match rule {
        RootRule::Anywhere => emb.b(0, 0),
        RootRule::AtRoot => emb.a(0, 0),
    }
}

/// Strict variant: the root of `t` must map onto the root of `s`.
pub fn rooted_minor_at_root(t: &FiniteTree, s: &FiniteTree) -> bool {
    rooted_minor_with_rule(t, s, RootRule::AtRoot)
}

/// True iff both directions of [`rooted_minor`] hold.
pub fn topo_equiv(t: &FiniteTree, s: &FiniteTree) -> bool {
    rooted_minor(t, s) && rooted_minor(s, t)
}

/// True iff `t` embeds into some rerooting of `s`.
pub fn unrooted_minor(t: &FiniteTree, s: &FiniteTree) -> bool {
    let mut seen = BTreeSet::new();
    s.all_rootings()
        .into_iter()
        .filter(|r| seen.insert(r.canonical_code()))
        .any(|r| rooted_minor(t, &r))
}

/// A concrete embedding: where each node of `t` lands in `s`, and the host
/// path realizing each edge of `t`. Nodes are preorder indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    /// `node_map[x]` is the host node carrying `t`'s preorder node `x`.
    pub node_map: Vec<usize>,
    /// For each non-root node `c` of `t`: the host path from the image of
    /// `c`'s parent down to the image of `c`, endpoints included.
    pub edge_paths: Vec<(usize, Vec<usize>)>,
}

/// Witness for a positive [`rooted_minor`] answer, if one exists.
pub fn rooted_minor_witness(t: &FiniteTree, s: &FiniteTree) -> Option<EmbeddingWitness> {
    let mut emb = Emb::new(t, s);
    if !emb.b(0, 0) {
        return None;
    }
    let root_at = emb.landing(0, 0);
    let mut node_map = vec![usize::MAX; emb.t.len()];
    let mut edge_paths = Vec::new();
    emb.extract(0, root_at, &mut node_map, &mut edge_paths);
    Some(EmbeddingWitness { node_map, edge_paths })
}

/// Independent checker for [`EmbeddingWitness`]: verifies injectivity, root
/// ancestry, path validity and pairwise internal disjointness directly
/// against the two trees.
pub fn verify_witness(
    t: &FiniteTree,
    s: &FiniteTree,
    w: &EmbeddingWitness,
) -> std::result::Result<(), String> {
    let ta = Arena::new(t);
    let sa = Arena::new(s);
    if w.node_map.len() != ta.len() {
        return Err(format!(
            "node_map covers {} nodes, tree has {}",
            w.node_map.len(),
            ta.len()
        ));
    }
    let mut used = BTreeSet::new();
    for (x, &v) in w.node_map.iter().enumerate() {
        if v >= sa.len() {
            return Err(format!("image of node {x} out of range"));
        }
        if !used.insert(v) {
            return Err(format!("host node {v} used twice"));
        }
    }
    // the root's image must be an ancestor of every other image
    for &v in &w.node_map {
        let mut cur = v;
        loop {
            if cur == w.node_map[0] {
                break;
            }
            match sa.parent[cur] {
                Some(p) => cur = p,
                None => return Err(format!("image {v} is not below the root image")),
            }
        }
    }
    // every edge of t realized by exactly one path
    let mut covered = vec![false; ta.len()];
    let mut interiors = BTreeSet::new();
    for (c, path) in &w.edge_paths {
        let c = *c;
        if c == 0 || c >= ta.len() {
            return Err(format!("edge path for invalid node {c}"));
        }
        if covered[c] {
            return Err(format!("node {c} has two edge paths"));
        }
        covered[c] = true;
        let p = ta.parent[c].expect("non-root has a parent");
        if path.first() != Some(&w.node_map[p]) || path.last() != Some(&w.node_map[c]) {
            return Err(format!("path endpoints for node {c} do not match images"));
        }
        for pair in path.windows(2) {
            if sa.parent[pair[1]] != Some(pair[0]) {
                return Err(format!("path step {} -> {} is not a host edge", pair[0], pair[1]));
            }
        }
        for &mid in &path[1..path.len() - 1] {
            if used.contains(&mid) {
                return Err(format!("path interior {mid} collides with an image node"));
            }
            if !interiors.insert(mid) {
                return Err(format!("path interior {mid} used by two paths"));
            }
        }
    }
    for c in 1..ta.len() {
        if !covered[c] {
            return Err(format!("edge to node {c} has no path"));
        }
    }
    Ok(())
}

/// Literal transcription of the relation: enumerate every subdivision of `t`
/// with at most `|s|` nodes and search for it as a rooted subgraph of `s` by
/// plain backtracking. Exponential; the host size is capped.
pub fn brute_force_minor(t: &FiniteTree, s: &FiniteTree) -> Result<bool> {
    brute_force_minor_bounded(t, s, DEFAULT_BRUTE_FORCE_BOUND)
}

/// [`brute_force_minor`] with an explicit host-size cap.
pub fn brute_force_minor_bounded(t: &FiniteTree, s: &FiniteTree, bound: usize) -> Result<bool> {
    if s.size() > bound {
        return Err(Error::limit("brute-force host size", bound));
    }
    if t.size() > s.size() {
        return Ok(false);
    }
    let edges = t.edges();
    let spare = s.size() - t.size();
    let mut extras = vec![0usize; edges.len()];
    Ok(subdivisions_any(t, &edges, spare, 0, &mut extras, &mut |sub| {
        subgraph_anywhere(sub, s)
    }))
}

fn subdivisions_any(
    t: &FiniteTree,
    edges: &[crate::finite::EdgeId],
    spare: usize,
    idx: usize,
    extras: &mut Vec<usize>,
    check: &mut impl FnMut(&FiniteTree) -> bool,
) -> bool {
    if idx == edges.len() {
        let lengths: std::collections::BTreeMap<_, _> = edges
            .iter()
            .cloned()
            .zip(extras.iter().map(|&e| e + 1))
            .collect();
        let sub = t.subdivide(&lengths).expect("edges come from the tree itself");
        return check(&sub);
    }
    for take in 0..=spare {
        extras[idx] = take;
        if subdivisions_any(t, edges, spare - take, idx + 1, extras, check) {
            return true;
        }
    }
    extras[idx] = 0;
    false
}

/// Exact rooted subgraph embedding (no further subdivision): the root of `t`
/// maps to the root of `s`, child edges map to child edges.
fn subgraph_at(t: &FiniteTree, s: &FiniteTree) -> bool {
    if t.size() > s.size() {
        return false;
    }
    fn assign(t_kids: &[FiniteTree], s_kids: &[FiniteTree], i: usize, used: &mut Vec<bool>) -> bool {
        if i == t_kids.len() {
            return true;
        }
        for j in 0..s_kids.len() {
            if !used[j] && subgraph_at(&t_kids[i], &s_kids[j]) {
                used[j] = true;
                if assign(t_kids, s_kids, i + 1, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; s.children().len()];
    assign(t.children(), s.children(), 0, &mut used)
}

fn subgraph_anywhere(t: &FiniteTree, s: &FiniteTree) -> bool {
    subgraph_at(t, s) || s.children().iter().any(|c| subgraph_anywhere(t, c))
}

/// Flat representation shared by the decision procedure and the checker.
struct Arena {
    kids: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl Arena {
    fn new(t: &FiniteTree) -> Self {
        let mut a = Arena { kids: Vec::with_capacity(t.size()), parent: Vec::with_capacity(t.size()) };
        a.push(t, None);
        a
    }

    fn push(&mut self, t: &FiniteTree, parent: Option<usize>) -> usize {
        let me = self.kids.len();
        self.kids.push(Vec::with_capacity(t.children().len()));
        self.parent.push(parent);
        for c in t.children() {
            let id = self.push(c, Some(me));
            self.kids[me].push(id);
        }
        me
    }

    fn len(&self) -> usize {
        self.kids.len()
    }
}

struct Emb {
    t: Arena,
    s: Arena,
    ns: usize,
    a_memo: Vec<Option<bool>>,
    b_memo: Vec<Option<bool>>,
}

impl Emb {
    fn new(t: &FiniteTree, s: &FiniteTree) -> Self {
        let t = Arena::new(t);
        let s = Arena::new(s);
        let (nt, ns) = (t.len(), s.len());
        Emb { t, s, ns, a_memo: vec![None; nt * ns], b_memo: vec![None; nt * ns] }
    }

    /// Subtree at `x` embeds with its root exactly at `v`.
    fn a(&mut self, x: usize, v: usize) -> bool {
        if let Some(r) = self.a_memo[x * self.ns + v] {
            return r;
        }
        let t_kids = self.t.kids[x].clone();
        let s_kids = self.s.kids[v].clone();
        let ok = if t_kids.len() > s_kids.len() {
            false
        } else {
            let adj: Vec<Vec<usize>> = t_kids
                .iter()
                .map(|&tc| {
                    (0..s_kids.len()).filter(|&j| self.b(tc, s_kids[j])).collect()
                })
                .collect();
            max_matching(s_kids.len(), &adj) == t_kids.len()
        };
        self.a_memo[x * self.ns + v] = Some(ok);
        ok
    }

    /// Subtree at `x` embeds with its root at `v` or below.
    fn b(&mut self, x: usize, v: usize) -> bool {
        if let Some(r) = self.b_memo[x * self.ns + v] {
            return r;
        }
        let ok = self.a(x, v)
            || self.s.kids[v].clone().into_iter().any(|c| self.b(x, c));
        self.b_memo[x * self.ns + v] = Some(ok);
        ok
    }

    /// Given b(x, v), the node at or below `v` where the root of `x` lands.
    fn landing(&mut self, x: usize, v: usize) -> usize {
        let mut cur = v;
        loop {
            if self.a(x, cur) {
                return cur;
            }
            let next = self.s.kids[cur]
                .clone()
                .into_iter()
                .find(|&c| self.b(x, c))
                .expect("b held, so some branch leads to a placement");
            cur = next;
        }
    }

    /// Records the embedding rooted exactly at `v` (a(x, v) must hold).
    fn extract(
        &mut self,
        x: usize,
        v: usize,
        node_map: &mut Vec<usize>,
        edge_paths: &mut Vec<(usize, Vec<usize>)>,
    ) {
        node_map[x] = v;
        let t_kids = self.t.kids[x].clone();
        let s_kids = self.s.kids[v].clone();
        let adj: Vec<Vec<usize>> = t_kids
            .iter()
            .map(|&tc| (0..s_kids.len()).filter(|&j| self.b(tc, s_kids[j])).collect())
            .collect();
        let (size, assignment) = matching_assignment(s_kids.len(), &adj);
        debug_assert_eq!(size, t_kids.len(), "extraction requires a(x, v)");
        for (i, &tc) in t_kids.iter().enumerate() {
            let top = s_kids[assignment[i].expect("perfect on the left")];
            let land = self.landing(tc, top);
            // host path from v down to the landing node
            let mut rev = vec![land];
            let mut cur = land;
            while cur != v {
                cur = self.s.parent[cur].expect("landing lies below v");
                rev.push(cur);
            }
            rev.reverse();
            edge_paths.push((tc, rev));
            self.extract(tc, land, node_map, edge_paths);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use crate::finite::EdgeId;

    fn v(k: usize) -> FiniteTree {
        FiniteTree::star(k)
    }

    #[test]
    fn single_vertex_embeds_anywhere() {
        let leaf = FiniteTree::leaf();
        for n in 1..=6 {
            for s in FiniteTree::enumerate_rooted_trees(n).unwrap() {
                assert!(rooted_minor(&leaf, &s));
            }
        }
    }

    #[test]
    fn star_needs_enough_directions() {
        assert!(!rooted_minor(&v(3), &v(2)));
        assert!(rooted_minor(&v(2), &v(3)));
        assert!(!rooted_minor(&FiniteTree::path(4), &v(3)));
    }

    #[test]
    fn root_rule_distinguishes_shifted_embeddings() {
        // a 2-path embeds below the root of a 3-path either way, but a star
        // hanging one level down needs the relaxed rule
        let deep = FiniteTree::node(vec![v(2)]);
        assert!(rooted_minor(&v(2), &deep));
        assert!(rooted_minor_at_root(&v(2), &deep) == false);
        assert!(rooted_minor_at_root(&FiniteTree::path(2), &deep));
    }

    #[test]
    fn monotone_under_subdivision() {
        for n in 1..=6 {
            for t in FiniteTree::enumerate_rooted_trees(n).unwrap() {
                let lengths: BTreeMap<EdgeId, usize> =
                    t.edges().into_iter().enumerate().map(|(i, e)| (e, i % 2 + 1)).collect();
                let sub = t.subdivide(&lengths).unwrap();
                assert!(rooted_minor(&t, &sub));
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_small() {
        let trees: Vec<FiniteTree> =
            (1..=5).flat_map(|n| FiniteTree::enumerate_rooted_trees(n).unwrap()).collect();
        for t in &trees {
            for s in &trees {
                assert_eq!(
                    rooted_minor(t, s),
                    brute_force_minor(t, s).unwrap(),
                    "disagreement on {t} vs {s}"
                );
            }
        }
    }

    #[test]
    fn brute_force_bound() {
        let big = FiniteTree::path(13);
        assert!(matches!(
            brute_force_minor(&FiniteTree::leaf(), &big),
            Err(crate::error::Error::ResourceLimit { .. })
        ));
        assert!(brute_force_minor_bounded(&FiniteTree::leaf(), &big, 13).unwrap());
    }

    #[test]
    fn unrooted_examples() {
        assert!(unrooted_minor(&FiniteTree::path(3), &v(3)));
        for n in 1..=5 {
            for t in FiniteTree::enumerate_rooted_trees(n).unwrap() {
                assert!(unrooted_minor(&t, &t));
            }
        }
    }

    #[test]
    fn equiv_examples() {
        assert!(topo_equiv(&v(2), &v(2)));
        assert!(!topo_equiv(&v(2), &v(3)));
    }

    #[test]
    fn witness_exists_iff_minor_and_verifies() {
        let trees: Vec<FiniteTree> =
            (1..=6).flat_map(|n| FiniteTree::enumerate_rooted_trees(n).unwrap()).collect();
        let mut positive = 0usize;
        for t in &trees {
            for s in &trees {
                let w = rooted_minor_witness(t, s);
                assert_eq!(w.is_some(), rooted_minor(t, s));
                if let Some(w) = w {
                    verify_witness(t, s, &w).expect("witness must verify");
                    positive += 1;
                }
            }
        }
        assert!(positive > 200);
    }

    #[test]
    fn witness_shapes() {
        let w = rooted_minor_witness(&FiniteTree::leaf(), &v(3)).unwrap();
        assert_eq!(w.node_map, vec![0]);
        assert!(w.edge_paths.is_empty());
        let w = rooted_minor_witness(&v(2), &v(3)).unwrap();
        assert_eq!(w.node_map[0], 0);
        verify_witness(&v(2), &v(3), &w).unwrap();
    }

    #[test]
    fn checker_rejects_corrupted_witnesses() {
        let t = v(2);
        let s = v(3);
        let good = rooted_minor_witness(&t, &s).unwrap();
        let mut bad = good.clone();
        bad.node_map[1] = bad.node_map[2];
        assert!(verify_witness(&t, &s, &bad).is_err());
        let mut bad = good.clone();
        bad.edge_paths[0].1 = vec![0];
        assert!(verify_witness(&t, &s, &bad).is_err());
        let mut bad = good;
        bad.edge_paths.pop();
        assert!(verify_witness(&t, &s, &bad).is_err());
    }
}
