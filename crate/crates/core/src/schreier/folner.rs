use serde::{Deserialize, Serialize};

use super::SchreierBall;
use crate::error::{Error, Result};
use crate::spectral::dirichlet_eigenvector;

/// A vertex subset `P` of a ball with its interior and outer boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSet {
    /// Sorted ball vertex ids.
    pub members: Vec<usize>,
    /// `{x ∈ P : Sx ⊆ P}`.
    pub interior: Vec<usize>,
    /// `SP ∖ P`; may contain halo ids (`≥ ball.len()`).
    pub outer_boundary: Vec<usize>,
    /// `P` reaches the rim of the ball.
    pub truncated: bool,
}

/// Result of [`folner_search`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FolnerResult {
    pub set: ComponentSet,
    /// `|FS Δ F| / |F|` for the returned set.
    pub defect: f64,
    pub candidates: usize,
    /// `"ball"` or `"sweep"`.
    pub source: String,
}

fn membership_mask<C>(ball: &SchreierBall<C>, p: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; ball.len() + ball.halo_len()];
    for &v in p {
        if v >= ball.len() {
            return Err(Error::invalid(format!("vertex {v} is not in the ball")));
        }
        mask[v] = true;
    }
    Ok(mask)
}

/// `∂P = SP ∖ P` and `int(P) = {x ∈ P : Sx ⊆ P}`.
///
/// Neighbours outside the ball that were not recorded (halo tracking off) are
/// counted once per edge and force the truncated flag.
pub fn interior_boundary<C>(ball: &SchreierBall<C>, p: &[usize]) -> Result<ComponentSet> {
    let mask = membership_mask(ball, p)?;
    let mut members: Vec<usize> = p.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut seen = vec![false; mask.len()];
    let mut truncated = false;
    let mut untracked = 0usize;
    for &v in &members {
        let mut inside = true;
        if !ball.is_interior(v) {
            truncated = true;
        }
        for slot in 0..ball.degree() {
            match ball.neighbor(v, slot) {
                Some(n) if mask[n] => {}
                Some(n) => {
                    inside = false;
                    if !seen[n] {
                        seen[n] = true;
                        boundary.push(n);
                    }
                }
                None => {
                    inside = false;
                    untracked += 1;
                }
            }
        }
        if inside {
            interior.push(v);
        }
    }
    boundary.sort_unstable();
    // untracked outside neighbours get synthetic ids past the halo
    let base = mask.len();
    boundary.extend((0..untracked).map(|i| base + i));
    Ok(ComponentSet {
        members,
        interior,
        outer_boundary: boundary,
        truncated,
    })
}

/// `int(P)` computed as `P ∖ ∂(X ∖ P)`: the points of `P` hit from outside.
pub fn interior_via_complement<C>(ball: &SchreierBall<C>, p: &[usize]) -> Result<Vec<usize>> {
    let mask = membership_mask(ball, p)?;
    let mut hit = vec![false; ball.len()];
    for x in 0..ball.len() {
        for slot in 0..ball.degree() {
            match ball.neighbor(x, slot) {
                // x ∉ P, its neighbour in P lies in ∂(X ∖ P)
                Some(y) if !mask[x] && y < ball.len() && mask[y] => hit[y] = true,
                // x ∈ P with a neighbour z outside the ball: z ∈ X ∖ P and z·s⁻¹ = x
                Some(z) if mask[x] && z >= ball.len() => hit[x] = true,
                None if mask[x] => hit[x] = true,
                _ => {}
            }
        }
    }
    let mut out: Vec<usize> = (0..ball.len()).filter(|&v| mask[v] && !hit[v]).collect();
    out.dedup();
    Ok(out)
}

/// Incremental `|FS Δ F|` bookkeeping while growing `F` one vertex at a time.
struct SweepState<'a, C> {
    ball: &'a SchreierBall<C>,
    in_set: Vec<bool>,
    /// number of edges from `F` into each vertex (ball, halo, untracked tail)
    touched: Vec<u32>,
    outside_touched: usize,
    inside_untouched: usize,
    untracked_edges: usize,
    size: usize,
}

impl<'a, C> SweepState<'a, C> {
    fn new(ball: &'a SchreierBall<C>) -> Self {
        let n = ball.len() + ball.halo_len();
        SweepState {
            ball,
            in_set: vec![false; n],
            touched: vec![0; n],
            outside_touched: 0,
            inside_untouched: 0,
            untracked_edges: 0,
            size: 0,
        }
    }

    fn add(&mut self, v: usize) {
        debug_assert!(!self.in_set[v]);
        self.in_set[v] = true;
        self.size += 1;
        if self.touched[v] > 0 {
            self.outside_touched -= 1;
        } else {
            self.inside_untouched += 1;
        }
        for slot in 0..self.ball.degree() {
            match self.ball.neighbor(v, slot) {
                Some(w) => {
                    if self.touched[w] == 0 {
                        if self.in_set[w] {
                            self.inside_untouched -= 1;
                        } else {
                            self.outside_touched += 1;
                        }
                    }
                    self.touched[w] += 1;
                }
                None => self.untracked_edges += 1,
            }
        }
    }

    fn symmetric_difference(&self) -> usize {
        self.outside_touched + self.inside_untouched + self.untracked_edges
    }

    fn defect(&self) -> f64 {
        self.symmetric_difference() as f64 / self.size as f64
    }
}

/// `|FS Δ F| / |F|` for `F ⊆` ball.
pub fn folner_defect<C>(ball: &SchreierBall<C>, f: &[usize]) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::invalid(
            "Følner defect of the empty set is undefined",
        ));
    }
    membership_mask(ball, f)?;
    let mut state = SweepState::new(ball);
    let mut members = f.to_vec();
    members.sort_unstable();
    members.dedup();
    for v in members {
        state.add(v);
    }
    Ok(state.defect())
}

/// Best prefix of `order` by Følner defect. With `shells`, only prefixes
/// ending where `distance` changes are candidates. Returns
/// `(defect, prefix length, candidates examined)`.
fn best_prefix<C>(ball: &SchreierBall<C>, order: &[usize], shells: bool) -> (f64, usize, usize) {
    let mut state = SweepState::new(ball);
    let mut best = (f64::INFINITY, 0);
    let mut candidates = 0;
    for (i, &v) in order.iter().enumerate() {
        state.add(v);
        if shells
            && order
                .get(i + 1)
                .is_some_and(|&w| ball.distance(w) == ball.distance(v))
        {
            continue;
        }
        candidates += 1;
        let d = state.defect();
        if d < best.0 {
            best = (d, i + 1);
        }
    }
    (best.0, best.1, candidates)
}

/// Best Følner candidate among distance balls around the root and sweep cuts
/// over the level sets of the top Dirichlet eigenvector. The defect is exact
/// for the returned set.
pub fn folner_search<C>(ball: &SchreierBall<C>) -> Result<FolnerResult> {
    if ball.is_empty() {
        return Err(Error::invalid("empty ball"));
    }
    // BFS numbering is sorted by distance
    let by_distance: Vec<usize> = (0..ball.len()).collect();
    let (mut defect, len, mut candidates) = best_prefix(ball, &by_distance, true);
    let mut members = by_distance[..len].to_vec();
    let mut source = "ball";
    let interior = ball.interior();
    if !interior.is_empty() {
        let vec = dirichlet_eigenvector::<f64, C>(ball, 1e-10, 200_000);
        let mut order: Vec<(f64, usize)> = interior
            .iter()
            .zip(vec.iter())
            .map(|(&v, &x)| (x, v))
            .collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let order: Vec<usize> = order.into_iter().map(|(_, v)| v).collect();
        let (d, len, c) = best_prefix(ball, &order, false);
        candidates += c;
        if d < defect {
            defect = d;
            members = order[..len].to_vec();
            source = "sweep";
        }
    }
    let set = interior_boundary(ball, &members)?;
    Ok(FolnerResult {
        set,
        defect,
        candidates,
        source: source.to_string(),
    })
}
