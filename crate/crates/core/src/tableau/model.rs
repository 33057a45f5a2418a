use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{Clause, Literal};

pub type NodeId = usize;

/// Which input formula a clause comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Red,
    Blue,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Red => Side::Blue,
            Side::Blue => Side::Red,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Red => "red",
            Side::Blue => "blue",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Side tag of a definitional position: `L` for the left formula, `R` for the
/// negated right formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosSide {
    L,
    R,
}

impl PosSide {
    pub fn side(self) -> Side {
        match self {
            PosSide::L => Side::Red,
            PosSide::R => Side::Blue,
        }
    }

    pub fn letter(self) -> char {
        match self {
            PosSide::L => 'L',
            PosSide::R => 'R',
        }
    }
}

/// A side tag together with a path of child indices (1 or 2) from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalPosition {
    pub side: PosSide,
    pub path: Vec<u8>,
}

impl GlobalPosition {
    pub fn root(side: PosSide) -> GlobalPosition {
        GlobalPosition {
            side,
            path: Vec::new(),
        }
    }

    pub fn child(&self, index: u8) -> GlobalPosition {
        let mut path = self.path.clone();
        path.push(index);
        GlobalPosition {
            side: self.side,
            path,
        }
    }

    /// The path as digits, `e` for the root position.
    pub fn path_string(&self) -> String {
        if self.path.is_empty() {
            "e".to_string()
        } else {
            self.path.iter().map(|d| char::from(b'0' + d)).collect()
        }
    }
}

impl fmt::Display for GlobalPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.letter(), self.path_string())
    }
}

/// The eight shapes of definitional clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormTag {
    /// `D_root`
    Top = 1,
    /// `¬D_p` for `false`
    False = 2,
    /// `¬D_p ∨ D_p1` for a conjunction
    AndLeft = 3,
    /// `¬D_p ∨ D_p2` for a conjunction
    AndRight = 4,
    /// `¬D_p ∨ D_p1 ∨ D_p2`
    Or = 5,
    /// `¬D_p ∨ ¬R_p ∨ D_p1`
    Forall = 6,
    /// `¬D_p ∨ R_p σ_p`
    ExistsGuard = 7,
    /// `¬D_p ∨ D_p1 σ_p`
    ExistsBody = 8,
}

impl FormTag {
    pub fn number(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClauseMeta {
    pub pos: GlobalPosition,
    pub form: FormTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    /// `None` only at the root.
    pub lit: Option<Literal>,
    pub side: Option<Side>,
    /// Nearest ancestor with the complementary label, if closed.
    pub tgt: Option<NodeId>,
    /// Definitional clause this node's clause instantiates.
    pub meta: Option<ClauseMeta>,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
}

impl Node {
    fn new(
        lit: Option<Literal>,
        side: Option<Side>,
        meta: Option<ClauseMeta>,
        parent: Option<NodeId>,
    ) -> Node {
        Node {
            lit,
            side,
            tgt: None,
            meta,
            children: Vec::new(),
            parent,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("node {0} does not exist")]
    NoSuchNode(NodeId),
    #[error("node {0} has no literal label")]
    Unlabeled(NodeId),
    #[error("clause of node {node} ({clause}) is not an instance of any input clause")]
    Unmatched { node: NodeId, clause: String },
    #[error("node {0} has no side")]
    MissingSide(NodeId),
    #[error("tableau is not {0}")]
    Precondition(String),
}

/// An ordered tree of literal-labelled nodes. Node 0 is the unlabeled root.
///
/// Nodes live in an arena; detached subtrees stay in the arena until
/// [`Tableau::normalized`] renumbers the reachable nodes in pre-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    nodes: Vec<Node>,
}

impl Default for Tableau {
    fn default() -> Self {
        Tableau::new()
    }
}

impl Tableau {
    pub fn new() -> Tableau {
        Tableau {
            nodes: vec![Node::new(None, None, None, None)],
        }
    }

    pub const ROOT: NodeId = 0;

    pub fn root(&self) -> NodeId {
        Self::ROOT
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut Node {
        &mut self.nodes[id]
    }

    /// Size of the arena, detached nodes included.
    pub fn arena_len(&self) -> usize {
        self.nodes.len()
    }

    /// Number of nodes reachable from the root.
    pub fn len(&self) -> usize {
        self.preorder().len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[Self::ROOT].children.is_empty()
    }

    pub fn add_child(
        &mut self,
        parent: NodeId,
        lit: Literal,
        side: Option<Side>,
        meta: Option<ClauseMeta>,
    ) -> NodeId {
        let id = self.nodes.len();
        self.nodes
            .push(Node::new(Some(lit), side, meta, Some(parent)));
        self.nodes[parent].children.push(id);
        id
    }

    /// Adds a detached node with the same label, side and meta as `like`.
    pub fn add_detached_copy(&mut self, like: NodeId) -> NodeId {
        let src = &self.nodes[like];
        let node = Node::new(src.lit.clone(), src.side, src.meta.clone(), None);
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn lit(&self, id: NodeId) -> Option<&Literal> {
        self.nodes[id].lit.as_ref()
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Strict ancestors, nearest first.
    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = self.nodes[id].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.nodes[p].parent;
        }
        out
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.ancestors(id).len()
    }

    pub fn is_ancestor(&self, anc: NodeId, id: NodeId) -> bool {
        self.ancestors(id).contains(&anc)
    }

    /// Reachable nodes in pre-order.
    pub fn preorder(&self) -> Vec<NodeId> {
        self.preorder_from(Self::ROOT)
    }

    pub fn preorder_from(&self, start: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder()
            .into_iter()
            .filter(|&n| self.is_leaf(n))
            .collect()
    }

    /// Inner nodes other than the root.
    pub fn inner_nodes(&self) -> Vec<NodeId> {
        self.preorder()
            .into_iter()
            .filter(|&n| n != Self::ROOT && !self.is_leaf(n))
            .collect()
    }

    /// The clause formed by the children's labels.
    pub fn clause_of(&self, id: NodeId) -> Result<Clause, TableauError> {
        self.nodes[id]
            .children
            .iter()
            .map(|&c| self.lit(c).cloned().ok_or(TableauError::Unlabeled(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Clause::new)
    }

    /// Labels on the path from the root to `id`, `id` included.
    pub fn branch_literals(&self, id: NodeId) -> Vec<&Literal> {
        let mut out: Vec<&Literal> = self.lit(id).into_iter().collect();
        for a in self.ancestors(id) {
            out.extend(self.lit(a));
        }
        out
    }

    /// Nearest strict ancestor labelled with the complement of `id`'s label.
    pub fn complementary_ancestor(&self, id: NodeId) -> Option<NodeId> {
        let lit = self.lit(id)?;
        self.ancestors(id)
            .into_iter()
            .find(|&a| self.lit(a).is_some_and(|l| l.is_complement_of(lit)))
    }

    pub fn is_closed_node(&self, id: NodeId) -> bool {
        self.complementary_ancestor(id).is_some()
    }

    pub fn set_children(&mut self, id: NodeId, children: Vec<NodeId>) {
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes[id].children = children;
    }

    /// Deep copy of the subtree at `id` as a detached subtree.
    /// Returns the new root and a map from old to new ids.
    pub fn copy_subtree(&mut self, id: NodeId) -> (NodeId, HashMap<NodeId, NodeId>) {
        let mut map = HashMap::new();
        let order = self.preorder_from(id);
        for &old in &order {
            let new = self.add_detached_copy(old);
            map.insert(old, new);
        }
        for &old in &order {
            let kids: Vec<NodeId> = self.nodes[old].children.iter().map(|c| map[c]).collect();
            self.set_children(map[&old], kids);
        }
        (map[&id], map)
    }

    /// Sets every target to the nearest complementary ancestor.
    pub fn assign_targets(&mut self) {
        for id in self.preorder() {
            let tgt = self.complementary_ancestor(id);
            self.nodes[id].tgt = tgt;
        }
    }

    /// Copy with the reachable nodes renumbered in pre-order and targets recomputed.
    pub fn normalized(&self) -> Tableau {
        let order = self.preorder();
        let index: HashMap<NodeId, NodeId> =
            order.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let nodes = order
            .iter()
            .map(|&old| {
                let n = &self.nodes[old];
                Node {
                    lit: n.lit.clone(),
                    side: n.side,
                    tgt: None,
                    meta: n.meta.clone(),
                    children: n.children.iter().map(|c| index[c]).collect(),
                    parent: n.parent.map(|p| index[&p]),
                }
            })
            .collect();
        let mut t = Tableau { nodes };
        t.assign_targets();
        t
    }

    /// Applies `f` to every label.
    pub fn map_literals(&self, mut f: impl FnMut(&Literal) -> Literal) -> Tableau {
        let mut t = self.clone();
        for n in &mut t.nodes {
            if let Some(l) = &n.lit {
                n.lit = Some(f(l));
            }
        }
        t
    }

    /// Every inner node's clause together with the side of its children.
    pub fn clauses(&self) -> Vec<(NodeId, Option<Side>, Clause)> {
        self.preorder()
            .into_iter()
            .filter(|&n| !self.is_leaf(n))
            .filter_map(|n| {
                let side = self.nodes[self.nodes[n].children[0]].side;
                self.clause_of(n).ok().map(|c| (n, side, c))
            })
            .collect()
    }

    /// A canonical rendering that ignores child order, for comparing tableaux
    /// up to sibling permutation.
    pub fn canonical_string(&self) -> String {
        fn go(t: &Tableau, id: NodeId) -> String {
            let mut kids: Vec<String> = t.children(id).iter().map(|&c| go(t, c)).collect();
            kids.sort();
            let label = match (t.lit(id), t.node(id).side) {
                (Some(l), Some(s)) => format!("{l}@{s}"),
                (Some(l), None) => l.to_string(),
                (None, _) => "*".to_string(),
            };
            if kids.is_empty() {
                label
            } else {
                format!("{label}[{}]", kids.join(","))
            }
        }
        go(self, Self::ROOT)
    }
}
