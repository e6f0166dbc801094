//! Non-planar rooted trees and forests.
//!
//! A [`Tree`] is stored in canonical form: its children are sorted, and the
//! sort is applied at every level, so isomorphic trees compare equal. A
//! [`Forest`] is a sorted multiset of trees; the empty forest is the unit
//! `𝕀` of the forest algebra.
//!
//! The text format is the bracket encoding: a leaf is `[]`, a node is `[`
//! followed by its children's encodings and `]`. Forests join their trees
//! with `*` and the empty forest is written `I`.
//!
//! Trees are ordered by comparing child lists lexicographically, a shorter
//! prefix first. On encodings this is string order with `]` ranked before
//! `[`, so the leaf `[]` is the smallest tree and sorts first among siblings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    children: Vec<Tree>,
}

/// A plane (ordered) rooted tree, as it might come from user input or a
/// random generator. [`canonicalize`] turns it into a [`Tree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTree {
    pub children: Vec<RawTree>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    trees: Vec<Tree>,
}

pub fn canonicalize(raw: &RawTree) -> Tree {
    Tree::new(raw.children.iter().map(canonicalize).collect())
}

impl RawTree {
    pub fn leaf() -> Self {
        RawTree { children: Vec::new() }
    }
}

impl Tree {
    /// The single-node tree `•`.
    pub fn leaf() -> Self {
        Tree { children: Vec::new() }
    }

    /// Builds the tree whose root has the given subtrees.
    pub fn new(mut children: Vec<Tree>) -> Self {
        children.sort();
        Tree { children }
    }

    /// The chain of `n ≥ 1` nodes.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1, "a ladder has at least one node");
        let mut t = Tree::leaf();
        for _ in 1..n {
            t = Tree::new(vec![t]);
        }
        t
    }

    /// Root with `n` leaf children.
    pub fn corolla(n: usize) -> Self {
        Tree::new(vec![Tree::leaf(); n])
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of nodes.
    pub fn degree(&self) -> usize {
        1 + self.children.iter().map(Tree::degree).sum::<usize>()
    }

    /// The unique forest `f` with `B₊(f) = self`.
    pub fn b_minus(&self) -> Forest {
        Forest { trees: self.children.clone() }
    }

    pub fn to_raw(&self) -> RawTree {
        RawTree { children: self.children.iter().map(Tree::to_raw).collect() }
    }

    fn write_encoding(&self, out: &mut String) {
        out.push('[');
        for c in &self.children {
            c.write_encoding(out);
        }
        out.push(']');
    }

    pub fn encoding(&self) -> String {
        let mut s = String::with_capacity(2 * self.degree());
        self.write_encoding(&mut s);
        s
    }
}

/// Grafting: attach the roots of `f` to a new root.
pub fn b_plus(f: &Forest) -> Tree {
    // Forest trees are already sorted.
    Tree { children: f.trees.clone() }
}

/// Multiset union of two forests.
pub fn forest_product(a: &Forest, b: &Forest) -> Forest {
    a.product(b)
}

impl Forest {
    /// The empty forest `𝕀`.
    pub fn unit() -> Self {
        Forest { trees: Vec::new() }
    }

    pub fn single(t: Tree) -> Self {
        Forest { trees: vec![t] }
    }

    pub fn from_trees(trees: impl IntoIterator<Item = Tree>) -> Self {
        let mut trees: Vec<Tree> = trees.into_iter().collect();
        trees.sort();
        Forest { trees }
    }

    /// The forest of `n` isolated nodes.
    pub fn dots(n: usize) -> Self {
        Forest { trees: vec![Tree::leaf(); n] }
    }

    pub fn is_unit(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Returns the tree if the forest consists of exactly one.
    pub fn as_tree(&self) -> Option<&Tree> {
        match self.trees.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.trees.iter().map(Tree::degree).sum()
    }

    pub fn product(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.trees.len() + other.trees.len());
        // Merge of two sorted lists.
        let (mut i, mut j) = (0, 0);
        while i < self.trees.len() && j < other.trees.len() {
            if self.trees[i] <= other.trees[j] {
                trees.push(self.trees[i].clone());
                i += 1;
            } else {
                trees.push(other.trees[j].clone());
                j += 1;
            }
        }
        trees.extend_from_slice(&self.trees[i..]);
        trees.extend_from_slice(&other.trees[j..]);
        Forest { trees }
    }

    /// Splits off the smallest tree: returns `(rest, smallest)`.
    /// `None` for the empty forest.
    pub fn split_smallest(&self) -> Option<(Forest, Tree)> {
        let (first, rest) = self.trees.split_first()?;
        Some((Forest { trees: rest.to_vec() }, first.clone()))
    }

    pub fn encoding(&self) -> String {
        self.to_string()
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Self {
        Forest::single(t)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            return f.write_str("I");
        }
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(&t.encoding())?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    offset: usize,
}

impl Parser<'_> {
    fn tree(&mut self) -> Result<RawTree> {
        if self.bytes.get(self.pos) != Some(&b'[') {
            return Err(Error::parse(self.offset + self.pos, "expected '['"));
        }
        self.pos += 1;
        let mut children = Vec::new();
        loop {
            match self.bytes.get(self.pos) {
                Some(b'[') => children.push(self.tree()?),
                Some(b']') => {
                    self.pos += 1;
                    return Ok(RawTree { children });
                }
                Some(_) => return Err(Error::parse(self.offset + self.pos, "expected '[' or ']'")),
                None => return Err(Error::parse(self.offset + self.pos, "unterminated tree")),
            }
        }
    }
}

/// Parses a single tree encoding; any child order is accepted.
pub fn parse_raw_tree(s: &str, offset: usize) -> Result<RawTree> {
    let mut p = Parser { bytes: s.as_bytes(), pos: 0, offset };
    let t = p.tree()?;
    if p.pos != s.len() {
        return Err(Error::parse(offset + p.pos, "trailing characters after tree"));
    }
    Ok(t)
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(canonicalize(&parse_raw_tree(s, 0)?))
    }
}

impl FromStr for Forest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lead = s.len() - s.trim_start().len();
        let body = s.trim();
        if body == "I" {
            return Ok(Forest::unit());
        }
        if body.is_empty() {
            return Err(Error::parse(lead, "empty forest encoding (use \"I\")"));
        }
        let mut trees = Vec::new();
        let mut offset = lead;
        for part in body.split('*') {
            trees.push(canonicalize(&parse_raw_tree(part, offset)?));
            offset += part.len() + 1;
        }
        Ok(Forest::from_trees(trees))
    }
}

fn forest_table() -> &'static Mutex<Vec<Vec<Forest>>> {
    static TABLE: OnceLock<Mutex<Vec<Vec<Forest>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![vec![Forest::unit()]]))
}

/// Every forest with `n` nodes, each exactly once, in ascending order.
pub fn enumerate_forests(n: usize) -> Vec<Forest> {
    let mut table = forest_table().lock().expect("forest table poisoned");
    while table.len() <= n {
        let m = table.len();
        // trees of degree d come from forests of degree d - 1
        let trees_by_degree: Vec<Vec<Tree>> = (0..=m)
            .map(|d| if d == 0 { Vec::new() } else { table[d - 1].iter().map(b_plus).collect() })
            .collect();
        let mut all: Vec<Tree> = trees_by_degree.into_iter().flatten().collect();
        all.sort();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        multisets(&all, 0, m, &mut stack, &mut out);
        out.sort();
        table.push(out);
    }
    table[n].clone()
}

fn multisets(pool: &[Tree], start: usize, remaining: usize, stack: &mut Vec<Tree>, out: &mut Vec<Forest>) {
    if remaining == 0 {
        out.push(Forest { trees: stack.clone() });
        return;
    }
    for i in start..pool.len() {
        let d = pool[i].degree();
        if d <= remaining {
            stack.push(pool[i].clone());
            multisets(pool, i, remaining - d, stack, out);
            stack.pop();
        }
    }
}

/// Every tree with `n ≥ 1` nodes, in ascending order.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let mut v: Vec<Tree> = enumerate_forests(n - 1).iter().map(b_plus).collect();
    v.sort();
    v
}

/// Every nonempty forest with at most `max_degree` nodes, grouped by degree.
pub fn forests_up_to(max_degree: usize) -> Vec<Forest> {
    (1..=max_degree).flat_map(enumerate_forests).collect()
}

/// Multiplicity of each tree in the forest.
pub fn tree_counts(f: &Forest) -> BTreeMap<&Tree, usize> {
    let mut m = BTreeMap::new();
    for t in f.trees() {
        *m.entry(t).or_insert(0) += 1;
    }
    m
}
