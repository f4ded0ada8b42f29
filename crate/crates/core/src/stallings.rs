//! Stallings core automata for finitely generated subgroups of `F_d`.
//!
//! An automaton is a based graph with edges labelled by positive generators;
//! each edge may be read forwards (the generator) or backwards (its inverse).
//! After folding, every state has at most one outgoing edge per letter of the
//! symmetric set, so reading a word from the base is deterministic and the
//! subgroup is exactly the set of reduced words that return to the base.
//!
//! Automata are stored in a canonical form: states are numbered in BFS order
//! from the base (base = 0) exploring letters in slot order, and edges are
//! sorted. Two automata compare equal iff they are isomorphic as based
//! labelled graphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Generator, Word};
use crate::scalar::Scalar;

/// An arbitrary (possibly unfolded) based graph with positive-letter labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub rank: usize,
    pub num_vertices: usize,
    pub base: usize,
    /// `(source, generator index, target)`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl LabeledGraph {
    /// Bouquet of loops at the base, one subdivided loop per generator word.
    pub fn wedge(generators: &[Word], rank: usize) -> Result<Self> {
        let mut g = LabeledGraph {
            rank,
            num_vertices: 1,
            base: 0,
            edges: Vec::new(),
        };
        for w in generators {
            w.check_rank(rank)?;
            g.add_path(0, w, Some(0));
        }
        Ok(g)
    }

    /// Adds a path reading `word` from `start`. Ends at `end` when given,
    /// otherwise at a fresh vertex. Returns the endpoint.
    pub fn add_path(&mut self, start: usize, word: &Word, end: Option<usize>) -> usize {
        let n = word.len();
        if n == 0 {
            return end.unwrap_or(start);
        }
        let mut cur = start;
        for (i, g) in word.letters().iter().enumerate() {
            let next = if i + 1 == n {
                match end {
                    Some(e) => e,
                    None => self.fresh_vertex(),
                }
            } else {
                self.fresh_vertex()
            };
            if g.is_inverse() {
                self.edges.push((next, g.index(), cur));
            } else {
                self.edges.push((cur, g.index(), next));
            }
            cur = next;
        }
        cur
    }

    fn fresh_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }
}

/// Folded automaton in canonical form. See the module docs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StallingsAutomaton {
    rank: usize,
    num_states: usize,
    edges: Vec<(u32, u16, u32)>,
    /// `num_states × 2·rank` transition table indexed by letter slot.
    table: Vec<Option<u32>>,
}

/// Index of a subgroup: a positive integer or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupIndex {
    Finite(usize),
    #[serde(with = "infinite_tag")]
    Infinite,
}

mod infinite_tag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("infinite")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "infinite" {
            Ok(())
        } else {
            Err(serde::de::Error::custom("expected \"infinite\""))
        }
    }
}

/// Growth base of `|{h ∈ H : |h| = n}|` and the derived critical exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CogrowthResult<T> {
    pub alpha: T,
    /// `ln alpha`; `None` when `alpha = 0` (trivial subgroup).
    pub delta: Option<T>,
    pub iterations: usize,
    pub residual: T,
    pub converged: bool,
}

/// Power-iteration settings for [`StallingsAutomaton::cogrowth_rate_with`].
#[derive(Clone, Copy, Debug)]
pub struct CogrowthOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CogrowthOptions {
    fn default() -> Self {
        CogrowthOptions {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

impl StallingsAutomaton {
    /// The automaton of the trivial subgroup: one state, no edges.
    pub fn trivial(rank: usize) -> Self {
        StallingsAutomaton {
            rank,
            num_states: 1,
            edges: Vec::new(),
            table: vec![None; 2 * rank],
        }
    }

    /// The automaton of the whole group: one state with a loop per generator.
    pub fn whole_group(rank: usize) -> Self {
        let edges = (0..rank).map(|i| (0u32, i as u16, 0u32)).collect();
        Self::from_canonical_parts(rank, 1, edges)
    }

    /// Stallings automaton of `⟨generators⟩ ≤ F_rank`: folded and core.
    pub fn build(generators: &[Word], rank: usize) -> Result<Self> {
        Ok(Self::fold(&LabeledGraph::wedge(generators, rank)?).core())
    }

    /// Folds a labelled graph until deterministic. Only the component of the
    /// base survives. The result does not depend on edge order.
    pub fn fold(graph: &LabeledGraph) -> Self {
        let n = graph.num_vertices;
        let slots = 2 * graph.rank;
        let mut uf = UnionFind::new(n);
        // adjacency per representative: (slot, neighbour)
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for &(u, l, v) in &graph.edges {
            adj[u].push((2 * l, v));
            adj[v].push((2 * l + 1, u));
        }
        let mut queue: Vec<usize> = (0..n).collect();
        let mut seen: Vec<Option<usize>> = vec![None; slots];
        while let Some(v) = queue.pop() {
            let v = uf.find(v);
            seen.iter_mut().for_each(|s| *s = None);
            let mut merged = None;
            for &(slot, t) in &adj[v] {
                let t = uf.find(t);
                match seen[slot] {
                    None => seen[slot] = Some(t),
                    Some(t0) if t0 == t => {}
                    Some(t0) => {
                        merged = Some((t0, t));
                        break;
                    }
                }
            }
            if let Some((x, y)) = merged {
                let (keep, gone) = if x < y { (x, y) } else { (y, x) };
                uf.parent[gone] = keep;
                let moved = std::mem::take(&mut adj[gone]);
                adj[keep].extend(moved);
                queue.push(keep);
                // v itself may still have conflicts on other letters
                queue.push(v);
            } else {
                // compact the list so later merges scan less
                let mut compact: Vec<(usize, usize)> = seen
                    .iter()
                    .enumerate()
                    .filter_map(|(s, t)| t.map(|t| (s, t)))
                    .collect();
                compact.sort_unstable();
                adj[v] = compact;
            }
        }
        let mut table = vec![None; n * slots];
        for v in 0..n {
            if uf.find(v) != v {
                continue;
            }
            for &(slot, t) in &adj[v] {
                table[v * slots + slot] = Some(uf.find(t));
            }
        }
        let base = uf.find(graph.base);
        Self::canonicalize(graph.rank, base, n, |v, slot| table[v * slots + slot])
    }

    /// Relabels the component of `base` in BFS order.
    fn canonicalize(
        rank: usize,
        base: usize,
        n: usize,
        step: impl Fn(usize, usize) -> Option<usize>,
    ) -> Self {
        let slots = 2 * rank;
        let mut label = vec![u32::MAX; n];
        let mut order = vec![base];
        label[base] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for slot in 0..slots {
                if let Some(t) = step(v, slot) {
                    if label[t] == u32::MAX {
                        label[t] = order.len() as u32;
                        order.push(t);
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for &v in &order {
            for l in 0..rank {
                if let Some(t) = step(v, 2 * l) {
                    edges.push((label[v], l as u16, label[t]));
                }
            }
        }
        Self::from_canonical_parts(rank, order.len(), edges)
    }

    fn from_canonical_parts(
        rank: usize,
        num_states: usize,
        mut edges: Vec<(u32, u16, u32)>,
    ) -> Self {
        edges.sort_unstable();
        let slots = 2 * rank;
        let mut table = vec![None; num_states * slots];
        for &(u, l, v) in &edges {
            table[u as usize * slots + 2 * l as usize] = Some(v);
            table[v as usize * slots + 2 * l as usize + 1] = Some(u);
        }
        StallingsAutomaton {
            rank,
            num_states,
            edges,
            table,
        }
    }

    /// Removes hanging trees: repeatedly deletes non-base states of degree ≤ 1.
    pub fn core(&self) -> Self {
        let n = self.num_states;
        let mut degree = vec![0usize; n];
        for &(u, _, v) in &self.edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut alive = vec![true; n];
        let mut stack: Vec<usize> = (1..n).filter(|&v| degree[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for slot in 0..2 * self.rank {
                if let Some(t) = self.table[v * 2 * self.rank + slot] {
                    let t = t as usize;
                    if alive[t] && t != v {
                        degree[t] -= 1;
                        if t != 0 && degree[t] <= 1 {
                            stack.push(t);
                        }
                    }
                }
            }
        }
        Self::canonicalize(self.rank, 0, n, |v, slot| {
            if !alive[v] {
                return None;
            }
            self.table[v * 2 * self.rank + slot]
                .map(|t| t as usize)
                .filter(|&t| alive[t])
        })
    }

    pub fn to_graph(&self) -> LabeledGraph {
        LabeledGraph {
            rank: self.rank,
            num_vertices: self.num_states,
            base: 0,
            edges: self
                .edges
                .iter()
                .map(|&(u, l, v)| (u as usize, l as usize, v as usize))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Always 0 in canonical form.
    pub fn base(&self) -> usize {
        0
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges
            .iter()
            .map(|&(u, l, v)| (u as usize, l as usize, v as usize))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn transition(&self, state: usize, g: Generator) -> Option<usize> {
        if g.index() >= self.rank {
            return None;
        }
        self.table[state * 2 * self.rank + g.slot()].map(|t| t as usize)
    }

    pub fn degree(&self, state: usize) -> usize {
        (0..2 * self.rank)
            .filter(|&s| self.table[state * 2 * self.rank + s].is_some())
            .count()
    }

    /// No state has two edges with the same letter in or out. Holds by construction.
    pub fn is_folded(&self) -> bool {
        let mut out = vec![false; self.num_states * 2 * self.rank];
        for &(u, l, v) in &self.edges {
            for idx in [
                u as usize * 2 * self.rank + 2 * l as usize,
                v as usize * 2 * self.rank + 2 * l as usize + 1,
            ] {
                if out[idx] {
                    return false;
                }
                out[idx] = true;
            }
        }
        true
    }

    pub fn is_core(&self) -> bool {
        // a loop contributes two directions, hence degree 2
        (1..self.num_states).all(|v| self.degree(v) >= 2)
    }

    /// Every state has all `2d` directions.
    pub fn is_complete(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    /// Reads `w` from the base; `None` if it falls off the automaton.
    pub fn trace_from(&self, state: usize, w: &Word) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(state, |s, &g| self.transition(s, g))
    }

    /// `w ∈ H` iff reading `w` from the base returns to the base.
    pub fn membership(&self, w: &Word) -> bool {
        self.trace_from(0, w) == Some(0)
    }

    /// Core of the component of `(base, base)` in the labelled product:
    /// the automaton of `H₁ ∩ H₂`.
    pub fn intersect(&self, other: &StallingsAutomaton) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::FamilyMismatch(format!(
                "ranks {} and {}",
                self.rank, other.rank
            )));
        }
        let slots = 2 * self.rank;
        let mut index = std::collections::HashMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        index.insert((0usize, 0usize), 0usize);
        let mut table: Vec<Option<usize>> = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            head += 1;
            for slot in 0..slots {
                let g = Generator::from_slot(slot);
                let next = match (self.transition(p, g), other.transition(q, g)) {
                    (Some(p2), Some(q2)) => {
                        let len = pairs.len();
                        let id = *index.entry((p2, q2)).or_insert(len);
                        if id == len {
                            pairs.push((p2, q2));
                        }
                        Some(id)
                    }
                    _ => None,
                };
                table.push(next);
            }
        }
        let product =
            Self::canonicalize(self.rank, 0, pairs.len(), |v, slot| table[v * slots + slot]);
        Ok(product.core())
    }

    /// Finite index `n` iff complete with `n` states.
    pub fn index(&self) -> SubgroupIndex {
        if self.is_complete() {
            SubgroupIndex::Finite(self.num_states)
        } else {
            SubgroupIndex::Infinite
        }
    }

    /// Automaton of the conjugate `H^g = g⁻¹ H g`.
    pub fn conjugate(&self, g: &Word) -> Result<Self> {
        g.check_rank(self.rank)?;
        let mut graph = self.to_graph();
        let end = graph.add_path(0, g, None);
        graph.base = end;
        Ok(Self::fold(&graph).core())
    }

    /// A free basis of `H` read off a BFS spanning tree.
    pub fn generators(&self) -> Vec<Word> {
        let n = self.num_states;
        let mut path: Vec<Option<Word>> = vec![None; n];
        path[0] = Some(Word::identity());
        let mut tree_edge = std::collections::HashSet::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for slot in 0..2 * self.rank {
                let g = Generator::from_slot(slot);
                if let Some(t) = self.transition(v, g) {
                    if path[t].is_none() {
                        let mut w = path[v].clone().unwrap();
                        w.push(g);
                        path[t] = Some(w);
                        let key = if g.is_inverse() {
                            (t, g.index(), v)
                        } else {
                            (v, g.index(), t)
                        };
                        tree_edge.insert(key);
                        queue.push_back(t);
                    }
                }
            }
        }
        self.edges()
            .filter(|e| !tree_edge.contains(e))
            .map(|(u, l, v)| {
                let mut w = path[u].clone().unwrap();
                w.push(Generator::positive(l));
                w.multiply(&path[v].as_ref().unwrap().inverse())
            })
            .collect()
    }

    /// Darts of the core graph: `(state, slot)` pairs with a transition.
    fn darts(&self) -> Vec<(usize, usize, usize)> {
        let slots = 2 * self.rank;
        let mut darts = Vec::new();
        for v in 0..self.num_states {
            for slot in 0..slots {
                if let Some(t) = self.table[v * slots + slot] {
                    darts.push((v, slot, t as usize));
                }
            }
        }
        darts
    }

    /// Non-backtracking successor lists over darts.
    fn dart_successors(&self, darts: &[(usize, usize, usize)]) -> Vec<Vec<usize>> {
        let slots = 2 * self.rank;
        let mut dart_id = vec![usize::MAX; self.num_states * slots];
        for (i, &(v, slot, _)) in darts.iter().enumerate() {
            dart_id[v * slots + slot] = i;
        }
        darts
            .iter()
            .map(|&(_, slot, t)| {
                (0..slots)
                    .filter(|&s| s != slot ^ 1)
                    .filter_map(|s| {
                        let id = dart_id[t * slots + s];
                        (id != usize::MAX).then_some(id)
                    })
                    .collect()
            })
            .collect()
    }

    /// Cogrowth base with default tolerance `1e-10` and cap `10⁵` iterations.
    pub fn cogrowth_rate<T: Scalar>(&self) -> CogrowthResult<T> {
        self.cogrowth_rate_with(CogrowthOptions::default())
    }

    /// Perron value of the non-backtracking operator on darts, by power
    /// iteration on `B + I` with sup-norm normalisation (the shift makes
    /// periodic components aperiodic).
    pub fn cogrowth_rate_with<T: Scalar>(&self, opts: CogrowthOptions) -> CogrowthResult<T> {
        let darts = self.darts();
        if darts.is_empty() {
            return CogrowthResult {
                alpha: T::zero(),
                delta: None,
                iterations: 0,
                residual: T::zero(),
                converged: true,
            };
        }
        let succ = self.dart_successors(&darts);
        let m = darts.len();
        // B x: (Bx)(e) = Σ_{e→e'} x(e')
        let apply = |x: &[T], out: &mut Vec<T>| {
            out.clear();
            out.extend(
                succ.iter()
                    .map(|s| s.iter().fold(T::zero(), |acc, &j| acc + x[j])),
            );
        };
        let tol = T::from_f64_lossy(opts.tol);
        let mut x = vec![T::one(); m];
        let mut bx = Vec::with_capacity(m);
        let mut alpha = T::zero();
        let mut residual = T::infinity();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < opts.max_iter {
            iterations += 1;
            apply(&x, &mut bx);
            let shifted_norm = x
                .iter()
                .zip(&bx)
                .fold(T::zero(), |acc, (&xi, &bi)| acc.max(xi + bi));
            alpha = shifted_norm - T::one();
            residual = x.iter().zip(&bx).fold(T::zero(), |acc, (&xi, &bi)| {
                acc.max((bi - alpha * xi).abs())
            });
            if residual <= tol {
                converged = true;
                break;
            }
            for (xi, &bi) in x.iter_mut().zip(&bx) {
                *xi = (*xi + bi) / shifted_norm;
            }
        }
        let alpha = alpha.max(T::zero());
        CogrowthResult {
            alpha,
            delta: (alpha > T::zero()).then(|| alpha.ln()),
            iterations,
            residual,
            converged,
        }
    }

    /// Exact number of reduced words of each length `0..=max_len` lying in `H`.
    pub fn closed_reduced_counts(&self, max_len: usize) -> Vec<BigUint> {
        let darts = self.darts();
        let succ = self.dart_successors(&darts);
        let mut counts = vec![BigUint::one()];
        let mut cur: Vec<BigUint> = darts
            .iter()
            .map(|&(v, _, _)| {
                if v == 0 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            })
            .collect();
        for _ in 1..=max_len {
            let closed = darts
                .iter()
                .zip(&cur)
                .filter(|((_, _, t), _)| *t == 0)
                .fold(BigUint::zero(), |acc, (_, c)| acc + c);
            counts.push(closed);
            let mut next = vec![BigUint::zero(); darts.len()];
            for (i, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &j in &succ[i] {
                    next[j] += c;
                }
            }
            cur = next;
        }
        counts
    }

    /// Graphviz rendering: base drawn as a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stallings {\n  rankdir=LR;\n");
        for v in 0..self.num_states {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {v} [shape={shape}];");
        }
        for &(u, l, v) in &self.edges {
            let _ = writeln!(
                out,
                "  {u} -> {v} [label=\"{}\"];",
                Generator::positive(l as usize).to_char()
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Parses a subgroup file: one generator word per line, `#` comments allowed.
pub fn parse_generator_file(text: &str) -> Result<Vec<Word>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

/// Inverse of [`parse_generator_file`].
pub fn format_generator_file(words: &[Word]) -> String {
    words.iter().map(|w| format!("{w}\n")).collect()
}

/// Rejects obviously wrong inputs before building: empty words are dropped.
pub fn build_automaton(generators: &[Word], rank: usize) -> Result<StallingsAutomaton> {
    if rank == 0 {
        return Err(Error::invalid("rank must be positive"));
    }
    StallingsAutomaton::build(generators, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn words(s: &[&str]) -> Vec<Word> {
        s.iter().map(|w| w.parse().unwrap()).collect()
    }

    fn build(s: &[&str]) -> StallingsAutomaton {
        build_automaton(&words(s), 2).unwrap()
    }

    #[test]
    fn cyclic_subgroup_is_a_loop() {
        let a = build(&["a"]);
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.edges().collect::<Vec<_>>(), vec![(0, 0, 0)]);
    }

    #[test]
    fn empty_generating_set_is_trivial() {
        let t = build(&[]);
        assert_eq!(t, StallingsAutomaton::trivial(2));
        assert_eq!(t.num_edges(), 0);
    }

    #[test]
    fn index_two_kernel() {
        let k = build(&["aa", "b", "aBA"]);
        assert_eq!(k.num_states(), 2);
        assert_eq!(k.index(), SubgroupIndex::Finite(2));
        assert!(k.is_core() && k.is_folded() && k.is_complete());
    }

    #[test]
    fn fold_merges_duplicate_edges() {
        let g = LabeledGraph {
            rank: 2,
            num_vertices: 3,
            base: 0,
            edges: vec![(0, 0, 1), (0, 0, 2)],
        };
        let f = StallingsAutomaton::fold(&g);
        assert_eq!(f.num_states(), 2);
        assert_eq!(f.num_edges(), 1);
        // folding a folded automaton changes nothing
        assert_eq!(StallingsAutomaton::fold(&f.to_graph()), f);
    }

    #[test]
    fn fold_of_ab_and_a_b_inverse() {
        let h = build(&["ab", "aB"]);
        assert!(h.is_folded());
        let gens = words(&["ab", "aB"]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut w = Word::identity();
            for _ in 0..6 {
                let g = gens.choose(&mut rng).unwrap();
                w = if rand::Rng::gen_bool(&mut rng, 0.5) {
                    w.multiply(g)
                } else {
                    w.multiply(&g.inverse())
                };
            }
            assert!(h.membership(&w), "{w} should be in ⟨ab, aB⟩");
        }
    }

    #[test]
    fn membership_examples() {
        let h = build(&["aa", "b"]);
        assert!(h.membership(&"aab".parse().unwrap()));
        assert!(!h.membership(&"a".parse().unwrap()));
        assert!(h.membership(&"bAA".parse().unwrap()));
    }

    #[test]
    fn intersection_examples() {
        let a = build(&["a"]);
        let b = build(&["b"]);
        assert_eq!(a.intersect(&b).unwrap(), StallingsAutomaton::trivial(2));
        let a2 = build(&["aa"]);
        assert_eq!(a.intersect(&a2).unwrap(), a2);
        let h1 = build(&["aa", "b"]);
        let h2 = build(&["aaa", "b"]);
        let i = h1.intersect(&h2).unwrap();
        assert!(i.membership(&"aaaaaa".parse().unwrap()));
        assert!(i.membership(&"b".parse().unwrap()));
        assert!(!i.membership(&"aa".parse().unwrap()));
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            StallingsAutomaton::whole_group(2).index(),
            SubgroupIndex::Finite(1)
        );
        assert_eq!(build(&["a"]).index(), SubgroupIndex::Infinite);
        assert_eq!(build(&["a", "b"]), StallingsAutomaton::whole_group(2));
    }

    #[test]
    fn cogrowth_examples() {
        let whole = StallingsAutomaton::whole_group(2).cogrowth_rate::<f64>();
        assert!((whole.alpha - 3.0).abs() < 1e-9 && whole.converged);
        let trivial = StallingsAutomaton::trivial(2).cogrowth_rate::<f64>();
        assert_eq!(trivial.alpha, 0.0);
        assert!(trivial.delta.is_none());
        let kernel = build(&["aa", "b", "aBA"]).cogrowth_rate::<f64>();
        assert!((kernel.alpha - 3.0).abs() < 1e-8);
        let cyclic = build(&["a"]).cogrowth_rate::<f64>();
        assert!((cyclic.alpha - 1.0).abs() < 1e-8, "{}", cyclic.alpha);
    }

    #[test]
    fn closed_counts_of_whole_group() {
        let c = StallingsAutomaton::whole_group(2).closed_reduced_counts(6);
        let expect: Vec<u64> = vec![1, 4, 12, 36, 108, 324, 972];
        assert_eq!(c, expect.into_iter().map(BigUint::from).collect::<Vec<_>>());
        let t = StallingsAutomaton::trivial(2).closed_reduced_counts(4);
        assert_eq!(t[0], BigUint::one());
        assert!(t[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn conjugate_moves_base() {
        let h = build(&["aa", "b", "abA"]);
        // the index-2 subgroup is normal and contains b, so its conjugate contains a⁻¹ b a
        let c = h.conjugate(&"a".parse().unwrap()).unwrap();
        assert!(c.membership(
            &"AbA"
                .parse::<Word>()
                .unwrap()
                .multiply(&"aa".parse().unwrap())
        ));
        assert!(c.membership(&"Aba".parse().unwrap()));
        assert_eq!(c.index(), SubgroupIndex::Finite(2));
    }

    #[test]
    fn generators_generate() {
        let h = build(&["aa", "b", "aBA"]);
        let gens = h.generators();
        assert_eq!(gens.len(), 3); // rank of an index-2 subgroup of F_2
        assert_eq!(build_automaton(&gens, 2).unwrap(), h);
    }

    #[test]
    fn generator_file_roundtrip() {
        let text = "# subgroup\naa\nb\n\naBA # conj\n";
        let ws = parse_generator_file(text).unwrap();
        assert_eq!(ws, words(&["aa", "b", "aBA"]));
        assert_eq!(
            parse_generator_file(&format_generator_file(&ws)).unwrap(),
            ws
        );
    }

    #[test]
    fn dot_marks_base() {
        let dot = build(&["aa", "b"]).to_dot();
        assert!(dot.contains("0 [shape=doublecircle]"));
        assert!(dot.contains("label=\"a\""));
    }

    #[test]
    fn fold_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gens = words(&["abAB", "aab", "bba", "abab"]);
        let g = LabeledGraph::wedge(&gens, 2).unwrap();
        let reference = StallingsAutomaton::fold(&g);
        for _ in 0..10 {
            let mut shuffled = g.clone();
            shuffled.edges.shuffle(&mut rng);
            assert_eq!(StallingsAutomaton::fold(&shuffled), reference);
        }
    }
}
