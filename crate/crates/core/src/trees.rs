//! Planted ribbon trees with plain and round edges.
//!
//! A tree is stored as a recursive [`Vertex`]. Plain children are ordered
//! (the ribbon structure), round children are an unordered set and kept sorted
//! by canonical string so that structural equality is tree equality.

use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree family is empty or undefined for these leaf counts")]
    DomainTooSmall,
    #[error("edge {0} is external")]
    ExternalEdge(usize),
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Semistable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Plain,
    Round,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Vertex {
    PlainLeaf,
    RoundLeaf(u32),
    Plain { plain: Vec<Vertex>, round: Vec<Vertex> },
    Round(Vec<Vertex>),
}

impl Vertex {
    pub fn plain(plain: Vec<Vertex>, mut round: Vec<Vertex>) -> Self {
        sort_round(&mut round);
        Vertex::Plain { plain, round }
    }

    pub fn round(mut children: Vec<Vertex>) -> Self {
        sort_round(&mut children);
        Vertex::Round(children)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Vertex::PlainLeaf | Vertex::RoundLeaf(_))
    }

    pub fn canonical(&self) -> String {
        match self {
            Vertex::PlainLeaf => "l".into(),
            Vertex::RoundLeaf(i) => format!("r{i}"),
            Vertex::Plain { plain, round } => {
                let p: Vec<String> = plain.iter().map(Vertex::canonical).collect();
                let r: Vec<String> = round.iter().map(Vertex::canonical).collect();
                format!("P({};{})", p.join(","), r.join(","))
            }
            Vertex::Round(ch) => {
                let r: Vec<String> = ch.iter().map(Vertex::canonical).collect();
                format!("R{{{}}}", r.join(","))
            }
        }
    }

    /// Children in traversal order: plain first, then round.
    fn children(&self) -> Vec<&Vertex> {
        match self {
            Vertex::Plain { plain, round } => plain.iter().chain(round.iter()).collect(),
            Vertex::Round(ch) => ch.iter().collect(),
            _ => Vec::new(),
        }
    }

    fn vertex_ok(&self, stability: Stability) -> bool {
        match (self, stability) {
            (Vertex::Plain { plain, round }, Stability::Stable) => 1 + plain.len() + 2 * round.len() >= 3,
            (Vertex::Plain { plain, round }, Stability::Semistable) => 1 + plain.len() + round.len() >= 2,
            (Vertex::Round(ch), _) => 1 + ch.len() >= 3,
            _ => true,
        }
    }
}

fn sort_round(v: &mut [Vertex]) {
    v.sort_by_cached_key(Vertex::canonical);
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RibbonTree {
    k: usize,
    q: usize,
    top: Vertex,
}

/// Internal edges are named by the preorder index of their lower vertex; the
/// top vertex has index 0 and its incoming edge is the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStratum {
    pub canonical: String,
    pub codim: usize,
}

impl RibbonTree {
    pub fn new(top: Vertex) -> Self {
        let mut k = 0;
        let mut q = 0;
        count_leaves(&top, &mut k, &mut q);
        RibbonTree { k, q, top }
    }

    /// The tree without internal edges.
    pub fn corolla(k: usize, q: usize) -> Self {
        let round = (1..=q as u32).map(Vertex::RoundLeaf).collect();
        RibbonTree::new(Vertex::plain(vec![Vertex::PlainLeaf; k], round))
    }

    pub fn top(&self) -> &Vertex {
        &self.top
    }

    pub fn plain_leaves(&self) -> usize {
        self.k
    }

    pub fn round_leaves(&self) -> usize {
        self.q
    }

    pub fn canonical(&self) -> String {
        self.top.canonical()
    }

    pub fn internal_edges(&self) -> Vec<(EdgeId, EdgeKind)> {
        let mut out = Vec::new();
        let mut idx = 0;
        walk_edges(&self.top, &mut idx, &mut out);
        out
    }

    pub fn codim(&self) -> usize {
        self.internal_edges()
            .iter()
            .map(|(_, kind)| match kind {
                EdgeKind::Plain => 1,
                EdgeKind::Round => 2,
            })
            .sum()
    }

    pub fn stratum(&self) -> TreeStratum {
        TreeStratum { canonical: self.canonical(), codim: self.codim() }
    }

    pub fn satisfies(&self, stability: Stability) -> bool {
        fn rec(v: &Vertex, s: Stability) -> bool {
            v.vertex_ok(s) && v.children().into_iter().all(|c| rec(c, s))
        }
        rec(&self.top, stability)
    }

    pub fn contract(&self, e: EdgeId) -> Result<RibbonTree, TreeError> {
        if e.0 == 0 {
            return Err(TreeError::ExternalEdge(0));
        }
        let mut top = self.top.clone();
        let mut next = 1;
        match contract_in(&mut top, e.0, &mut next) {
            Some(Ok(())) => Ok(RibbonTree::new(top)),
            Some(Err(err)) => Err(err),
            None => Err(TreeError::NoSuchEdge(e.0)),
        }
    }
}

fn count_leaves(v: &Vertex, k: &mut usize, q: &mut usize) {
    match v {
        Vertex::PlainLeaf => *k += 1,
        Vertex::RoundLeaf(_) => *q += 1,
        _ => v.children().into_iter().for_each(|c| count_leaves(c, k, q)),
    }
}

fn walk_edges(v: &Vertex, idx: &mut usize, out: &mut Vec<(EdgeId, EdgeKind)>) {
    let edge_kind = |parent_is_plain_slot: bool| {
        if parent_is_plain_slot {
            EdgeKind::Plain
        } else {
            EdgeKind::Round
        }
    };
    let slots: Vec<(&Vertex, bool)> = match v {
        Vertex::Plain { plain, round } => {
            plain.iter().map(|c| (c, true)).chain(round.iter().map(|c| (c, false))).collect()
        }
        Vertex::Round(ch) => ch.iter().map(|c| (c, false)).collect(),
        _ => Vec::new(),
    };
    for (child, plain_slot) in slots {
        *idx += 1;
        if !child.is_leaf() {
            out.push((EdgeId(*idx), edge_kind(plain_slot)));
        }
        walk_edges(child, idx, out);
    }
}

/// Returns `None` if the target index lies outside this subtree.
fn contract_in(v: &mut Vertex, target: usize, next: &mut usize) -> Option<Result<(), TreeError>> {
    match v {
        Vertex::Plain { plain, round } => {
            for i in 0..plain.len() {
                let idx = *next;
                *next += 1;
                if idx == target {
                    return Some(match plain[i].clone() {
                        Vertex::Plain { plain: cp, round: cr } => {
                            plain.splice(i..i + 1, cp);
                            round.extend(cr);
                            sort_round(round);
                            Ok(())
                        }
                        _ => Err(TreeError::ExternalEdge(target)),
                    });
                }
                if let Some(r) = contract_in(&mut plain[i], target, next) {
                    return Some(r);
                }
            }
            contract_round_slots(round, target, next)
        }
        Vertex::Round(ch) => contract_round_slots(ch, target, next),
        _ => None,
    }
}

fn contract_round_slots(
    slots: &mut Vec<Vertex>,
    target: usize,
    next: &mut usize,
) -> Option<Result<(), TreeError>> {
    for j in 0..slots.len() {
        let idx = *next;
        *next += 1;
        if idx == target {
            return Some(match slots[j].clone() {
                Vertex::Round(grand) => {
                    slots.remove(j);
                    slots.extend(grand);
                    sort_round(slots);
                    Ok(())
                }
                _ => Err(TreeError::ExternalEdge(target)),
            });
        }
        if let Some(r) = contract_in(&mut slots[j], target, next) {
            return Some(r);
        }
    }
    None
}

type Options = Vec<(Vertex, usize)>;
type SeqOptions = Vec<(Vec<Vertex>, usize)>;

/// Memoized recursive generator. `budget` bounds the number of internal edges
/// below the current vertex; all counts are in edges, not codimension.
struct Generator {
    stability: Stability,
    labels: Vec<u32>,
    vertex_memo: HashMap<(usize, u32, usize), Options>,
    seq_memo: HashMap<(usize, u32, usize), SeqOptions>,
    round_memo: HashMap<(u32, usize), Options>,
}

fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut sub = mask;
    loop {
        out.push(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out
}

/// Set partitions of a bitmask, blocks listed by increasing least element.
fn set_partitions(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    for extra in submasks(rest) {
        let block = low | extra;
        for mut tail in set_partitions(rest & !extra) {
            tail.insert(0, block);
            out.push(tail);
        }
    }
    out
}

impl Generator {
    fn new(stability: Stability, q: usize) -> Self {
        Generator {
            stability,
            labels: (1..=q as u32).collect(),
            vertex_memo: HashMap::new(),
            seq_memo: HashMap::new(),
            round_memo: HashMap::new(),
        }
    }

    fn round_subtree(&mut self, block: u32, budget: usize) -> Options {
        if block.count_ones() == 1 {
            return vec![(Vertex::RoundLeaf(self.labels[block.trailing_zeros() as usize]), 0)];
        }
        if budget == 0 {
            return Vec::new();
        }
        if let Some(v) = self.round_memo.get(&(block, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for parts in set_partitions(block) {
            if parts.len() < 2 {
                continue;
            }
            for (children, used) in self.forest(&parts, budget - 1) {
                out.push((Vertex::round(children), used + 1));
            }
        }
        self.round_memo.insert((block, budget), out.clone());
        out
    }

    /// All ways to realize each block as a round subtree, within the budget.
    fn forest(&mut self, blocks: &[u32], budget: usize) -> SeqOptions {
        let Some((&first, rest)) = blocks.split_first() else {
            return vec![(Vec::new(), 0)];
        };
        let mut out = Vec::new();
        for (v, used) in self.round_subtree(first, budget) {
            for (mut tail, used2) in self.forest(rest, budget - used) {
                tail.insert(0, v.clone());
                out.push((tail, used + used2));
            }
        }
        out
    }

    fn plain_edge(&mut self, k: usize, mask: u32, budget: usize) -> Options {
        let mut out = Vec::new();
        if k == 1 && mask == 0 {
            out.push((Vertex::PlainLeaf, 0));
        }
        if budget >= 1 {
            for (v, used) in self.plain_vertex(k, mask, budget - 1) {
                out.push((v, used + 1));
            }
        }
        out
    }

    fn plain_seq(&mut self, k: usize, mask: u32, budget: usize) -> SeqOptions {
        if k == 0 && mask == 0 {
            return vec![(Vec::new(), 0)];
        }
        if let Some(v) = self.seq_memo.get(&(k, mask, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for k1 in 0..=k {
            for s1 in submasks(mask) {
                if k1 == 0 && s1 == 0 {
                    continue;
                }
                for (child, used) in self.plain_edge(k1, s1, budget) {
                    for (mut tail, used2) in self.plain_seq(k - k1, mask & !s1, budget - used) {
                        tail.insert(0, child.clone());
                        out.push((tail, used + used2));
                    }
                }
            }
        }
        self.seq_memo.insert((k, mask, budget), out.clone());
        out
    }

    fn plain_vertex(&mut self, k: usize, mask: u32, budget: usize) -> Options {
        if let Some(v) = self.vertex_memo.get(&(k, mask, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for direct in submasks(mask) {
            let mut round_opts = Vec::new();
            for parts in set_partitions(direct) {
                round_opts.extend(self.forest(&parts, budget));
            }
            for (round, used_r) in round_opts {
                for (plain, used_p) in self.plain_seq(k, mask & !direct, budget - used_r) {
                    let v = Vertex::plain(plain, round.clone());
                    if v.vertex_ok(self.stability) {
                        out.push((v, used_r + used_p));
                    }
                }
            }
        }
        self.vertex_memo.insert((k, mask, budget), out.clone());
        out
    }
}

fn finish(mut trees: Vec<RibbonTree>) -> Vec<RibbonTree> {
    trees.sort_by_cached_key(RibbonTree::canonical);
    trees.dedup();
    trees
}

/// Stable planted ribbon trees with `k` plain leaves and no round edges.
pub fn enumerate_stable(k: usize) -> Result<Vec<RibbonTree>, TreeError> {
    if k < 2 {
        return Err(TreeError::DomainTooSmall);
    }
    enumerate_plain_round(k, 0, Stability::Stable, None)
}

/// Plain/round trees with `k` plain and `q` round leaves.
///
/// Semistable families are infinite (chains of bivalent plain vertices), so
/// they require `max_internal_edges`; for stable families the bound is
/// optional.
pub fn enumerate_plain_round(
    k: usize,
    q: usize,
    stability: Stability,
    max_internal_edges: Option<usize>,
) -> Result<Vec<RibbonTree>, TreeError> {
    let valency = k + 1 + 2 * q;
    let ok = match stability {
        Stability::Stable => valency >= 3,
        Stability::Semistable => valency >= 2 && max_internal_edges.is_some(),
    };
    if !ok || q > 16 {
        return Err(TreeError::DomainTooSmall);
    }
    let budget = max_internal_edges.unwrap_or(k + 2 * q);
    let mut g = Generator::new(stability, q);
    let full = if q == 0 { 0 } else { (1u32 << q) - 1 };
    let trees = g
        .plain_vertex(k, full, budget)
        .into_iter()
        .map(|(v, _)| RibbonTree::new(v))
        .collect();
    Ok(finish(trees))
}

/// Number of dissections of a convex `(k+1)`-gon by `j` non-crossing
/// diagonals, i.e. faces of codimension `j` of the associahedron.
pub fn associahedron_faces(k: usize, j: usize) -> u128 {
    if k < 2 || j > k - 2 {
        return 0;
    }
    binomial((k - 2) as u128, j as u128) * binomial((k + j) as u128, j as u128) / (j as u128 + 1)
}

pub fn associahedron_total_faces(k: usize) -> u128 {
    (0..=k.saturating_sub(2)).map(|j| associahedron_faces(k, j)).sum()
}

pub fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FacetClass {
    /// Number of round leaves on the inner disk.
    pub a: usize,
    /// Plain leaves before the run.
    pub b: usize,
    /// Length of the run absorbed by the inner disk.
    pub c: usize,
    pub round_split: Vec<u32>,
}

/// Codimension-one boundary facets of the disk with `k` plain and `q` round
/// marked points, one per choice of run and round subset. Facets whose inner
/// disk carries no plain leaf are omitted.
pub fn boundary_facets(k: usize, q: usize) -> Vec<FacetClass> {
    let mut out = Vec::new();
    let full: u32 = if q == 0 { 0 } else { (1u32 << q) - 1 };
    let mut subsets = submasks(full);
    subsets.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    for b in 0..k {
        for c in 1..=k - b {
            for &sub in &subsets {
                let round_split: Vec<u32> =
                    (0..q as u32).filter(|i| sub & (1 << i) != 0).map(|i| i + 1).collect();
                out.push(FacetClass { a: round_split.len(), b, c, round_split });
            }
        }
    }
    out
}

/// Reads off the facet class of a tree with a single plain internal edge and
/// no round internal edges. Returns `None` for other shapes and for trees
/// whose inner disk carries no plain leaf.
pub fn facet_class_of(tree: &RibbonTree) -> Option<FacetClass> {
    let edges = tree.internal_edges();
    if edges.len() != 1 || edges[0].1 != EdgeKind::Plain {
        return None;
    }
    let Vertex::Plain { plain, .. } = tree.top() else { return None };
    let pos = plain.iter().position(|v| !v.is_leaf())?;
    let Vertex::Plain { plain: inner, round: inner_round } = &plain[pos] else { return None };
    if inner.is_empty() {
        return None;
    }
    let mut round_split: Vec<u32> = inner_round
        .iter()
        .filter_map(|v| match v {
            Vertex::RoundLeaf(i) => Some(*i),
            _ => None,
        })
        .collect();
    round_split.sort_unstable();
    Some(FacetClass { a: round_split.len(), b: pos, c: inner.len(), round_split })
}

/// Orders the internal edges of `tree` for a sequential contraction in which
/// `first` goes first; afterwards edges follow preorder.
pub fn contraction_sequence(tree: &RibbonTree, first: EdgeId) -> Result<Vec<RibbonTree>, TreeError> {
    let mut out = Vec::new();
    let mut cur = tree.contract(first)?;
    out.push(cur.clone());
    while let Some((e, _)) = cur.internal_edges().first().copied() {
        cur = cur.contract(e)?;
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_stable_counts() {
        assert_eq!(enumerate_stable(2).unwrap().len(), 1);
        assert_eq!(enumerate_stable(3).unwrap().len(), 3);
        assert_eq!(enumerate_stable(4).unwrap().len(), 11);
        assert_eq!(enumerate_stable(1), Err(TreeError::DomainTooSmall));
    }

    #[test]
    fn face_formula_totals() {
        let totals: Vec<u128> = (2..=8).map(associahedron_total_faces).collect();
        assert_eq!(totals, vec![1, 3, 11, 45, 197, 903, 4279]);
    }

    #[test]
    fn single_edge_contracts_to_corolla() {
        for t in enumerate_stable(4).unwrap() {
            let edges = t.internal_edges();
            if edges.len() == 1 {
                assert_eq!(t.contract(edges[0].0).unwrap(), RibbonTree::corolla(4, 0));
            }
        }
    }

    #[test]
    fn contracting_leaf_or_root_is_external() {
        let t = RibbonTree::corolla(3, 0);
        assert_eq!(t.contract(EdgeId(0)), Err(TreeError::ExternalEdge(0)));
        assert_eq!(t.contract(EdgeId(1)), Err(TreeError::ExternalEdge(1)));
        assert_eq!(t.contract(EdgeId(9)), Err(TreeError::NoSuchEdge(9)));
    }

    #[test]
    fn contraction_splices_children_in_place() {
        let inner = Vertex::plain(vec![Vertex::PlainLeaf, Vertex::PlainLeaf], vec![]);
        let t = RibbonTree::new(Vertex::plain(vec![Vertex::PlainLeaf, inner, Vertex::PlainLeaf], vec![]));
        assert_eq!(t.canonical(), "P(l,P(l,l;),l;)");
        let (e, kind) = t.internal_edges()[0];
        assert_eq!(kind, EdgeKind::Plain);
        assert_eq!(t.contract(e).unwrap().canonical(), "P(l,l,l,l;)");
    }

    #[test]
    fn round_edge_counts_twice() {
        let r = Vertex::round(vec![Vertex::RoundLeaf(2), Vertex::RoundLeaf(1)]);
        let t = RibbonTree::new(Vertex::plain(vec![], vec![r]));
        assert_eq!(t.canonical(), "P(;R{r1,r2})");
        assert_eq!(t.codim(), 2);
        assert!(t.satisfies(Stability::Stable));
        assert_eq!(t.contract(t.internal_edges()[0].0).unwrap(), RibbonTree::corolla(0, 2));
    }

    #[test]
    fn one_plain_one_round_leaf_has_three_stable_trees() {
        let trees = enumerate_plain_round(1, 1, Stability::Stable, None).unwrap();
        let names: Vec<String> = trees.iter().map(RibbonTree::canonical).collect();
        assert_eq!(names, vec!["P(P(;r1),l;)", "P(l,P(;r1);)", "P(l;r1)"]);
    }

    #[test]
    fn semistable_needs_a_bound() {
        assert_eq!(
            enumerate_plain_round(2, 0, Stability::Semistable, None),
            Err(TreeError::DomainTooSmall)
        );
        assert!(enumerate_plain_round(1, 0, Stability::Semistable, Some(1)).is_ok());
    }

    #[test]
    fn facets_for_two_leaves() {
        let pairs: Vec<(usize, usize)> = boundary_facets(2, 0).iter().map(|f| (f.b, f.c)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 1)]);
    }

    #[test]
    fn contraction_sequence_ends_at_corolla() {
        for t in enumerate_stable(5).unwrap() {
            for (e, _) in t.internal_edges() {
                let seq = contraction_sequence(&t, e).unwrap();
                assert_eq!(seq.len(), t.codim());
                assert_eq!(seq.last().unwrap(), &RibbonTree::corolla(5, 0));
            }
        }
    }
}
