//! DOT rendering of finite trees.

use std::fmt::Write as _;

use crate::finite::FiniteTree;

/// Render a finite tree as a DOT digraph with the root on top.
///
/// The tree is put into canonical child order first and node ids follow its
/// preorder, so equal trees — regardless of how their children were listed —
/// always produce byte-identical output.
pub fn emit_dot(t: &FiniteTree) -> String {
    let c = t.canonicalize();
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut next = 0usize;
    fn walk(t: &FiniteTree, next: &mut usize, nodes: &mut String, edges: &mut String) -> usize {
        let me = *next;
        *next += 1;
        let _ = writeln!(nodes, "  n{me} [shape=circle,label=\"\"];");
        for k in t.children() {
            let kid = walk(k, next, nodes, edges);
            let _ = writeln!(edges, "  n{me} -> n{kid};");
        }
        me
    }
    walk(&c, &mut next, &mut nodes, &mut edges);
    let mut out = String::new();
    out.push_str("digraph tree {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str(&nodes);
    out.push_str(&edges);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let s = emit_dot(&FiniteTree::leaf());
        assert_eq!(s.matches("n0").count(), 1);
        assert!(!s.contains("->"));
        assert!(s.starts_with("digraph tree {"));
    }

    #[test]
    fn star_counts() {
        let s = emit_dot(&FiniteTree::star(2));
        assert_eq!(s.matches("[shape=circle").count(), 3);
        assert_eq!(s.matches("->").count(), 2);
    }

    #[test]
    fn deterministic_across_child_order() {
        let a = FiniteTree::node(vec![FiniteTree::path(2), FiniteTree::leaf()]);
        let b = FiniteTree::node(vec![FiniteTree::leaf(), FiniteTree::path(2)]);
        assert_eq!(emit_dot(&a), emit_dot(&b));
        assert_eq!(emit_dot(&a), emit_dot(&a));
    }
}
