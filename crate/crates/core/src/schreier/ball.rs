use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SubgroupOracle;
use crate::error::{Error, Result};
use crate::group::Generator;

pub const DEFAULT_VERTEX_CAP: usize = 5_000_000;

/// Marks a neighbour outside the ball whose identity was not recorded.
const OUTSIDE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
pub struct BallOptions {
    /// Maximum number of stored vertices (ball plus halo).
    pub vertex_cap: usize,
    /// Record the cosets one step beyond the rim so boundaries of sets
    /// touching the rim are exact. Spectral work can switch this off.
    pub track_halo: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            track_halo: true,
        }
    }
}

/// The radius-`R` ball around a coset in a Schreier graph.
///
/// Vertices are numbered in BFS order (root = 0, generators explored in slot
/// order), so the numbering is canonical for the rooted labelled graph. When
/// halo tracking is on, ids `len()..len()+halo_len()` name the cosets at
/// distance `R + 1`.
#[derive(Clone, Debug)]
pub struct SchreierBall<C> {
    radius: usize,
    rank: usize,
    cosets: Vec<C>,
    ball_len: usize,
    distance: Vec<u32>,
    /// BFS tree: `(parent, slot)` reaching each non-root vertex.
    parent: Vec<(u32, u8)>,
    neighbors: Vec<u32>,
}

/// JSON summary of a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSummary {
    pub vertices: usize,
    pub edges: usize,
    pub radius: usize,
    pub truncated: bool,
}

/// Exact BFS ball of radius `radius` around the root coset.
pub fn generate_ball<O: SubgroupOracle>(
    oracle: &O,
    radius: usize,
) -> Result<SchreierBall<O::Coset>> {
    generate_ball_from_with(oracle, oracle.root(), radius, &BallOptions::default())
}

/// Ball around an arbitrary coset.
pub fn generate_ball_from<O: SubgroupOracle>(
    oracle: &O,
    start: O::Coset,
    radius: usize,
    opts: &BallOptions,
) -> Result<SchreierBall<O::Coset>> {
    generate_ball_from_with(oracle, start, radius, opts)
}

pub(super) fn generate_ball_from_with<O: SubgroupOracle>(
    oracle: &O,
    start: O::Coset,
    radius: usize,
    opts: &BallOptions,
) -> Result<SchreierBall<O::Coset>> {
    let rank = oracle.rank();
    let slots = 2 * rank;
    let mut ids: HashMap<O::Coset, u32> = HashMap::new();
    ids.insert(start.clone(), 0);
    let mut order: Vec<O::Coset> = vec![start];
    let mut distance = vec![0u32];
    let mut parent = vec![(0u32, 0u8)];
    let mut neighbors: Vec<u32> = Vec::new();
    let mut head = 0;
    let mut level_end = 1;
    let mut level = 0usize;
    let mut halo: Vec<O::Coset> = Vec::new();
    let mut halo_ids: HashMap<O::Coset, u32> = HashMap::new();
    while head < order.len() {
        if head == level_end {
            level += 1;
            level_end = order.len();
        }
        let on_rim = level == radius;
        let here = order[head].clone();
        for slot in 0..slots {
            let g = Generator::from_slot(slot);
            let next = oracle.act(g, &here)?;
            let id = match ids.get(&next) {
                Some(&id) => id,
                None if !on_rim => {
                    if order.len() + halo.len() >= opts.vertex_cap {
                        return Err(Error::VertexCap {
                            cap: opts.vertex_cap,
                            attained_radius: level,
                        });
                    }
                    let id = order.len() as u32;
                    ids.insert(next.clone(), id);
                    order.push(next);
                    distance.push(level as u32 + 1);
                    parent.push((head as u32, slot as u8));
                    id
                }
                None if opts.track_halo => {
                    let h = match halo_ids.get(&next) {
                        Some(&h) => h,
                        None => {
                            if order.len() + halo.len() >= opts.vertex_cap {
                                return Err(Error::VertexCap {
                                    cap: opts.vertex_cap,
                                    attained_radius: radius,
                                });
                            }
                            let h = halo.len() as u32;
                            halo_ids.insert(next.clone(), h);
                            halo.push(next);
                            h
                        }
                    };
                    h | HALO_BIT
                }
                None => OUTSIDE,
            };
            neighbors.push(id);
        }
        head += 1;
    }
    let ball_len = order.len();
    // resolve halo ids now that the ball size is known
    for n in neighbors.iter_mut() {
        if *n != OUTSIDE && *n & HALO_BIT != 0 {
            *n = ball_len as u32 + (*n & !HALO_BIT);
        }
    }
    drop(ids);
    let mut cosets = order;
    cosets.extend(halo);
    Ok(SchreierBall {
        radius,
        rank,
        cosets,
        ball_len,
        distance,
        parent,
        neighbors,
    })
}

const HALO_BIT: u32 = 1 << 31;

impl<C> SchreierBall<C> {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `|S| = 2d`.
    pub fn degree(&self) -> usize {
        2 * self.rank
    }

    /// Number of vertices within distance `R`.
    pub fn len(&self) -> usize {
        self.ball_len
    }

    pub fn is_empty(&self) -> bool {
        self.ball_len == 0
    }

    pub fn halo_len(&self) -> usize {
        self.cosets.len() - self.ball_len
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn coset(&self, v: usize) -> &C {
        &self.cosets[v]
    }

    pub fn cosets(&self) -> &[C] {
        &self.cosets[..self.ball_len]
    }

    pub fn halo(&self) -> &[C] {
        &self.cosets[self.ball_len..]
    }

    pub fn distance(&self, v: usize) -> usize {
        self.distance[v] as usize
    }

    /// Neighbour of ball vertex `v` along letter `slot`. Returns ids `≥ len()`
    /// for halo vertices and `None` when the neighbour is outside and untracked.
    pub fn neighbor(&self, v: usize, slot: usize) -> Option<usize> {
        let n = self.neighbors[v * self.degree() + slot];
        (n != OUTSIDE).then_some(n as usize)
    }

    pub fn in_ball(&self, id: usize) -> bool {
        id < self.ball_len
    }

    /// Neighbour inside the ball, if any.
    pub fn inner_neighbor(&self, v: usize, slot: usize) -> Option<usize> {
        self.neighbor(v, slot).filter(|&n| n < self.ball_len)
    }

    pub(crate) fn raw_neighbors(&self, v: usize) -> &[u32] {
        let d = self.degree();
        &self.neighbors[v * d..(v + 1) * d]
    }

    /// All `S`-neighbours of `v` lie in the ball.
    pub fn is_interior(&self, v: usize) -> bool {
        self.raw_neighbors(v)
            .iter()
            .all(|&n| (n as usize) < self.ball_len)
    }

    pub fn interior(&self) -> Vec<usize> {
        (0..self.ball_len)
            .filter(|&v| self.is_interior(v))
            .collect()
    }

    /// Some vertex has a neighbour outside the ball.
    pub fn is_truncated(&self) -> bool {
        (0..self.ball_len).any(|v| !self.is_interior(v))
    }

    /// Directed edges `(u, s, v)` between ball vertices, one per vertex and letter.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Generator, usize)> + '_ {
        (0..self.ball_len).flat_map(move |u| {
            (0..self.degree()).filter_map(move |slot| {
                self.inner_neighbor(u, slot)
                    .map(|v| (u, Generator::from_slot(slot), v))
            })
        })
    }

    pub fn summary(&self) -> BallSummary {
        BallSummary {
            vertices: self.ball_len,
            edges: self.edges().count(),
            radius: self.radius,
            truncated: self.is_truncated(),
        }
    }

    /// Letters of a shortest path from the root to `v`.
    pub fn word_to(&self, mut v: usize) -> Vec<Generator> {
        let mut letters = Vec::with_capacity(self.distance[v] as usize);
        while v != 0 {
            let (p, slot) = self.parent[v];
            letters.push(Generator::from_slot(slot as usize));
            v = p as usize;
        }
        letters.reverse();
        letters
    }

    /// Canonical key of the rooted labelled ball (halo identities dropped).
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut key = Vec::with_capacity(self.neighbors.len() + 2);
        key.push(self.radius as u32);
        key.push(self.rank as u32);
        key.extend(self.neighbors.iter().map(|&n| {
            if (n as usize) < self.ball_len {
                n
            } else {
                OUTSIDE
            }
        }));
        key
    }

    /// Graphviz rendering. Each undirected edge is drawn once, labelled by
    /// its positive letter; the root is a double circle.
    pub fn to_dot(&self, alphabet: &[char], label: impl Fn(&C) -> String) -> String {
        let mut out = String::from("digraph schreier {\n");
        for v in 0..self.ball_len {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(
                out,
                "  {v} [shape={shape}, label=\"{}\"];",
                label(&self.cosets[v]).replace('"', "'")
            );
        }
        for v in 0..self.ball_len {
            for l in 0..self.rank {
                if let Some(t) = self.inner_neighbor(v, 2 * l) {
                    let _ = writeln!(
                        out,
                        "  {v} -> {t} [label=\"{}\"];",
                        alphabet.get(l).copied().unwrap_or('?')
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
