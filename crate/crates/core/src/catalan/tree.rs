//! Binary trees of 132-avoiders and the removal multiset that determines them.
//!
//! A 132-avoider splits at its maximum into a left part, all of whose values
//! exceed those of the right part. Recursing on both parts gives a binary tree
//! with the maximum at the root.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::perm::{contains, Permutation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Node {
    pub left: Option<u32>,
    pub right: Option<u32>,
}

/// Arena-backed binary tree. Node 0 is the root when the tree is nonempty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BinaryTree {
    nodes: Vec<Node>,
}

impl BinaryTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        (!self.nodes.is_empty()).then_some(0)
    }

    pub fn node(&self, i: usize) -> Node {
        self.nodes[i]
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.nodes[i].left.is_none() && self.nodes[i].right.is_none()
    }

    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.len()];
        for i in self.preorder().into_iter().rev() {
            let n = self.nodes[i];
            size[i] +=
                n.left.map_or(0, |c| size[c as usize]) + n.right.map_or(0, |c| size[c as usize]);
        }
        size
    }

    /// Root, left subtree, right subtree.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack: Vec<usize> = self.root().into_iter().collect();
        while let Some(i) = stack.pop() {
            out.push(i);
            let n = self.nodes[i];
            if let Some(r) = n.right {
                stack.push(r as usize);
            }
            if let Some(l) = n.left {
                stack.push(l as usize);
            }
        }
        out
    }

    /// Left subtree, node, right subtree: the positions of the permutation.
    pub fn inorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut cur = self.root();
        while cur.is_some() || !stack.is_empty() {
            while let Some(i) = cur {
                stack.push(i);
                cur = self.nodes[i].left.map(|c| c as usize);
            }
            let i = stack.pop().unwrap();
            out.push(i);
            cur = self.nodes[i].right.map(|c| c as usize);
        }
        out
    }

    /// `g(root) = 0`; a right child inherits its parent's value; a left child
    /// adds the size of the parent's right subtree plus one.
    pub fn g_values(&self) -> Vec<usize> {
        let size = self.subtree_sizes();
        let mut g = vec![0usize; self.len()];
        for i in self.preorder() {
            let n = self.nodes[i];
            if let Some(r) = n.right {
                g[r as usize] = g[i];
            }
            if let Some(l) = n.left {
                g[l as usize] = g[i] + n.right.map_or(0, |r| size[r as usize]) + 1;
            }
        }
        g
    }
}

/// Decompose a 132-avoider at its maximum.
pub fn perm_to_tree(p: &Permutation) -> Result<BinaryTree> {
    if contains(p.values(), &[1, 3, 2]) {
        return Err(invalid(format!("{p} contains 132")));
    }
    let mut tree = BinaryTree::default();
    build(p.values(), &mut tree);
    Ok(tree)
}

fn build(values: &[u8], tree: &mut BinaryTree) -> Option<u32> {
    if values.is_empty() {
        return None;
    }
    let (at, _) = values.iter().enumerate().max_by_key(|&(_, v)| *v).unwrap();
    let id = tree.nodes.len();
    tree.nodes.push(Node::default());
    let left = build(&values[..at], tree);
    let right = build(&values[at + 1..], tree);
    tree.nodes[id] = Node { left, right };
    Some(id as u32)
}

/// Inverse of [`perm_to_tree`].
pub fn tree_to_perm(tree: &BinaryTree) -> Permutation {
    let size = tree.subtree_sizes();
    let mut value = vec![0u8; tree.len()];
    // each subtree occupies a block of values; the right part takes the low end
    let mut stack: Vec<(usize, usize)> = tree.root().map(|r| (r, 1)).into_iter().collect();
    while let Some((i, lo)) = stack.pop() {
        let n = tree.node(i);
        let right = n.right.map_or(0, |r| size[r as usize]);
        value[i] = (lo + size[i] - 1) as u8;
        if let Some(r) = n.right {
            stack.push((r as usize, lo));
        }
        if let Some(l) = n.left {
            stack.push((l as usize, lo + right));
        }
    }
    Permutation::from_raw(tree.inorder().into_iter().map(|i| value[i]).collect())
}

/// The multiset of g-values over all nodes, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RemovalMultiset {
    values: Vec<usize>,
}

impl RemovalMultiset {
    pub fn new(mut values: Vec<usize>) -> Self {
        values.sort_unstable();
        RemovalMultiset { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromStr for RemovalMultiset {
    type Err = Error;

    /// Whitespace- or comma-separated nonnegative integers, optionally in braces.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (line_no, line) in s.lines().enumerate() {
            let cleaned = line.replace(['{', '}'], " ");
            for token in cleaned.split(|c: char| c == ',' || c.is_whitespace()) {
                if token.is_empty() {
                    continue;
                }
                let v = token.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    msg: format!("bad multiset entry {token:?}"),
                })?;
                values.push(v);
            }
        }
        Ok(RemovalMultiset::new(values))
    }
}

impl fmt::Display for RemovalMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn multiset_g(tree: &BinaryTree) -> RemovalMultiset {
    RemovalMultiset::new(tree.g_values())
}

/// g-values listed in the order of the permutation's positions.
pub fn g_by_position(tree: &BinaryTree) -> Vec<usize> {
    let g = tree.g_values();
    tree.inorder().into_iter().map(|i| g[i]).collect()
}

/// Rebuild the unique tree whose g-multiset is `s`.
///
/// Nodes are created in the order node, right subtree, left subtree, along
/// which g never decreases. The next node is either the right child of the
/// last node (same g) or the left child of an open node `u`, one whose left
/// child is still free and whose right subtree is being built, with
/// `g(u) + |right(u)| + 1`.
pub fn reconstruct_tree(s: &RemovalMultiset) -> Result<BinaryTree> {
    let values = s.values();
    let not_realisable = |why: String| Error::NotRealisable(format!("{s}: {why}"));
    match values.first() {
        None => return Err(not_realisable("empty multiset".into())),
        Some(&0) => {}
        Some(_) => return Err(not_realisable("the root value 0 is missing".into())),
    }
    if values.len() > crate::perm::MAX_LEN {
        return Err(invalid("multiset too large"));
    }
    let mut tree = BinaryTree {
        nodes: vec![Node::default()],
    };
    let mut g = vec![0usize];
    // open nodes, innermost last
    let mut open: Vec<usize> = vec![0];
    for (count, &want) in values.iter().enumerate().skip(1) {
        let last = count - 1;
        let mut choice: Option<Option<usize>> = None;
        let mut matches = 0;
        if g[last] == want {
            choice = Some(None);
            matches += 1;
        }
        for (depth, &u) in open.iter().enumerate() {
            let right_size = count - u - 1;
            if g[u] + right_size + 1 == want {
                choice = Some(Some(depth));
                matches += 1;
            }
        }
        if matches > 1 {
            return Err(Error::Consistency(format!(
                "{s}: value {want} matches {matches} frontier positions"
            )));
        }
        let id = tree.nodes.len();
        tree.nodes.push(Node::default());
        g.push(want);
        match choice {
            None => {
                return Err(not_realisable(format!(
                    "no frontier position has value {want}"
                )));
            }
            Some(None) => tree.nodes[last].right = Some(id as u32),
            Some(Some(depth)) => {
                let u = open[depth];
                tree.nodes[u].left = Some(id as u32);
                open.truncate(depth);
            }
        }
        open.push(id);
    }
    Ok(tree)
}

pub fn reconstruct_from_multiset(s: &RemovalMultiset) -> Result<Permutation> {
    Ok(tree_to_perm(&reconstruct_tree(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn figure_instance() {
        let t = perm_to_tree(&p("785649231")).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(g_by_position(&t), vec![8, 4, 6, 4, 4, 0, 2, 0, 0]);
        let s: RemovalMultiset = "8 4 6 4 4 0 2 0 0".parse().unwrap();
        assert_eq!(multiset_g(&t), s);
        assert_eq!(reconstruct_from_multiset(&s).unwrap(), p("785649231"));
        assert_eq!(tree_to_perm(&t), p("785649231"));
    }

    #[test]
    fn single_node() {
        let t = perm_to_tree(&Permutation::trivial()).unwrap();
        assert!(t.is_leaf(0));
        assert_eq!(multiset_g(&t).values(), &[0]);
        let back = reconstruct_from_multiset(&RemovalMultiset::new(vec![0])).unwrap();
        assert_eq!(back, Permutation::trivial());
    }

    #[test]
    fn right_comb_is_all_zero() {
        // decreasing permutations put every node on the right spine
        let t = perm_to_tree(&p("54321")).unwrap();
        assert_eq!(multiset_g(&t).values(), &[0, 0, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(perm_to_tree(&p("132")).is_err());
        let empty = RemovalMultiset::default();
        assert!(matches!(
            reconstruct_from_multiset(&empty),
            Err(Error::NotRealisable(_))
        ));
        let no_root = RemovalMultiset::new(vec![1, 2]);
        assert!(matches!(
            reconstruct_from_multiset(&no_root),
            Err(Error::NotRealisable(_))
        ));
        let gap = RemovalMultiset::new(vec![0, 5]);
        assert!(matches!(
            reconstruct_from_multiset(&gap),
            Err(Error::NotRealisable(_))
        ));
        let err = "0 1 x".parse::<RemovalMultiset>().unwrap_err();
        assert!(err.to_string().contains("\"x\""));
    }
}
