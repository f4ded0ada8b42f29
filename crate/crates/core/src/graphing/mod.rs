//! Finite measure-preserving graphings.
//!
//! A graphing is a finite point set with positive weights and a list of
//! partial bijections `φ_i : U_i → φ_i(U_i)` preserving the weights. Each map
//! is stored once; its inverse is implicit, so map `i` owns the two letter
//! slots `2i` (forward) and `2i + 1` (inverse), as for group generators.
//!
//! The Markov operator averages over all `2k` slots and lets a point stay put
//! when a slot is undefined there:
//! `(Mf)(x) = (2k)⁻¹ Σ_slots f(φ_slot(x))`, with `φ_slot(x) := x` off the domain.

mod rokhlin;
mod testfn;

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{power_iteration, PowerOptions};
use crate::scalar::{Scalar, Weight};

pub use rokhlin::{rokhlin_partition, rokhlin_partition_with, RokhlinPartition, DEFAULT_CLASS_CAP};
pub use testfn::{
    product_test_function, ComponentShare, ProductTestFunction, TestFunction, TestFunctionReport,
};

/// A partial injection on `0..n`, with its inverse table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBijection {
    pub label: String,
    forward: Vec<Option<u32>>,
    backward: Vec<Option<u32>>,
}

impl PartialBijection {
    pub fn new(label: impl Into<String>, points: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let label = label.into();
        let mut forward = vec![None; points];
        let mut backward = vec![None; points];
        for &(x, y) in pairs {
            if x >= points || y >= points {
                return Err(Error::invalid(format!(
                    "map {label}: pair {x} -> {y} out of range"
                )));
            }
            if forward[x].is_some() {
                return Err(Error::invalid(format!("map {label}: {x} mapped twice")));
            }
            if backward[y].is_some() {
                return Err(Error::invalid(format!("map {label}: not injective at {y}")));
            }
            forward[x] = Some(y as u32);
            backward[y] = Some(x as u32);
        }
        Ok(PartialBijection {
            label,
            forward,
            backward,
        })
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.forward[x].map(|y| y as usize)
    }

    pub fn apply_inverse(&self, y: usize) -> Option<usize> {
        self.backward[y].map(|x| x as usize)
    }

    /// `(x, φ(x))` in increasing `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y as usize)))
    }

    pub fn domain_len(&self) -> usize {
        self.forward.iter().flatten().count()
    }
}

/// Points with weights `ν` and measure-preserving partial bijections.
#[derive(Clone, Debug, PartialEq)]
pub struct Graphing<W> {
    weights: Vec<W>,
    maps: Vec<PartialBijection>,
}

impl<W: Weight> Graphing<W> {
    /// Checks positivity of weights and `ν(φ(x)) = ν(x)`.
    pub fn new(weights: Vec<W>, maps: Vec<PartialBijection>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("graphing without points"));
        }
        if let Some(x) = weights.iter().position(|w| !(*w > W::zero())) {
            return Err(Error::invalid(format!(
                "weight of point {x} is not positive"
            )));
        }
        for m in &maps {
            if m.forward.len() != weights.len() {
                return Err(Error::invalid(format!(
                    "map {} has the wrong number of points",
                    m.label
                )));
            }
            if let Some((x, y)) = m.pairs().find(|&(x, y)| weights[x] != weights[y]) {
                return Err(Error::invalid(format!(
                    "map {} does not preserve the measure at {x} -> {y}",
                    m.label
                )));
            }
        }
        Ok(Graphing { weights, maps })
    }

    /// Unit weights.
    pub fn uniform(points: usize, maps: Vec<PartialBijection>) -> Result<Self> {
        Self::new(vec![W::one(); points], maps)
    }

    pub fn points(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &W {
        &self.weights[x]
    }

    pub fn maps(&self) -> &[PartialBijection] {
        &self.maps
    }

    /// `2k`, the number of letter slots.
    pub fn slots(&self) -> usize {
        2 * self.maps.len()
    }

    /// Image of `x` under slot `2i` (`φ_i`) or `2i + 1` (`φ_i⁻¹`).
    pub fn step(&self, slot: usize, x: usize) -> Option<usize> {
        let m = &self.maps[slot / 2];
        if slot % 2 == 0 {
            m.apply(x)
        } else {
            m.apply_inverse(x)
        }
    }

    pub fn total_weight(&self) -> W {
        self.weights.iter().cloned().sum()
    }

    pub fn mass(&self, set: &[usize]) -> W {
        // folded from +0: an empty float sum would be -0
        set.iter()
            .fold(W::zero(), |acc, &x| acc + self.weights[x].clone())
    }

    /// The same graphing with weights cast to another number type.
    pub fn map_weights<V: Weight>(&self, f: impl Fn(&W) -> V) -> Result<Graphing<V>> {
        Graphing::new(self.weights.iter().map(f).collect(), self.maps.clone())
    }

    /// Text form: `points n`, `weights …`, then `map label: x -> y, …`.
    pub fn to_text(&self) -> String {
        let mut out = format!("points {}\nweights", self.points());
        for w in &self.weights {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
        for m in &self.maps {
            let pairs: Vec<String> = m.pairs().map(|(x, y)| format!("{x} -> {y}")).collect();
            let _ = writeln!(out, "map {}: {}", m.label, pairs.join(", "));
        }
        out
    }
}

impl<W: Weight> FromStr for Graphing<W> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut points = None;
        let mut weights = None;
        let mut maps: Vec<(String, Vec<(usize, usize)>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::parse(format!("line {}: {msg}", lineno + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "points" => {
                    points = Some(
                        rest.trim()
                            .parse::<usize>()
                            .map_err(|_| bad("bad point count"))?,
                    )
                }
                "weights" => {
                    let ws: Result<Vec<W>> = rest
                        .split_whitespace()
                        .map(|w| w.parse::<W>().map_err(|_| bad("bad weight")))
                        .collect();
                    weights = Some(ws?);
                }
                "map" => {
                    let (label, body) = rest
                        .split_once(':')
                        .ok_or_else(|| bad("expected `map label: x -> y, ...`"))?;
                    let mut pairs = Vec::new();
                    for pair in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                        let (x, y) = pair
                            .split_once("->")
                            .ok_or_else(|| bad("expected `x -> y`"))?;
                        let x = x.trim().parse().map_err(|_| bad("bad point"))?;
                        let y = y.trim().parse().map_err(|_| bad("bad point"))?;
                        pairs.push((x, y));
                    }
                    maps.push((label.trim().to_string(), pairs));
                }
                _ => return Err(bad(&format!("unknown keyword {key:?}"))),
            }
        }
        let n = match (points, &weights) {
            (Some(n), Some(w)) if w.len() != n => {
                return Err(Error::parse("weights do not match the point count"))
            }
            (Some(n), _) => n,
            (None, Some(w)) => w.len(),
            (None, None) => return Err(Error::parse("missing `points` line")),
        };
        let weights = weights.unwrap_or_else(|| vec![W::one(); n]);
        let maps = maps
            .into_iter()
            .map(|(l, p)| PartialBijection::new(l, n, &p))
            .collect::<Result<_>>()?;
        Graphing::new(weights, maps)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        // keep the smaller id as the root so class order is by least point
        if a < b {
            self.0[b] = a;
        } else {
            self.0[a] = b;
        }
    }
}

/// Orbits of the equivalence relation generated by the maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitDecomposition<W> {
    /// Classes ordered by least point, points sorted.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub masses: Vec<W>,
}

impl<W: Weight> OrbitDecomposition<W> {
    /// Normalized class masses `τ`.
    pub fn tau(&self) -> Vec<W> {
        let total: W = self.masses.iter().cloned().sum();
        self.masses
            .iter()
            .map(|m| m.clone() / total.clone())
            .collect()
    }
}

pub fn orbit_decomposition<W: Weight>(g: &Graphing<W>) -> OrbitDecomposition<W> {
    let mut uf = UnionFind::new(g.points());
    for m in &g.maps {
        for (x, y) in m.pairs() {
            uf.union(x, y);
        }
    }
    let mut class_id = vec![usize::MAX; g.points()];
    let mut class_of = vec![0; g.points()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..g.points() {
        let r = uf.find(x);
        if class_id[r] == usize::MAX {
            class_id[r] = classes.len();
            classes.push(Vec::new());
        }
        class_of[x] = class_id[r];
        classes[class_id[r]].push(x);
    }
    let masses = classes.iter().map(|c| g.mass(c)).collect();
    OrbitDecomposition {
        classes,
        class_of,
        masses,
    }
}

/// Both sides of the mass transport identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MtpReport<W> {
    /// `Σ_x ν(x) Σ_{x'∈[x]} K(x, x')`
    pub lhs: W,
    /// `Σ_{x'} ν(x') Σ_{x∈[x']} K(x, x')`
    pub rhs: W,
}

/// Evaluates both sides of the mass transport identity for `kernel`, which is
/// only queried on pairs in the same orbit.
pub fn mtp_check<W: Weight>(g: &Graphing<W>, kernel: impl Fn(usize, usize) -> W) -> MtpReport<W> {
    let orbits = orbit_decomposition(g);
    let mut lhs = W::zero();
    for x in 0..g.points() {
        let sent: W = orbits.classes[orbits.class_of[x]]
            .iter()
            .map(|&y| kernel(x, y))
            .sum();
        lhs = lhs + g.weights[x].clone() * sent;
    }
    let mut rhs = W::zero();
    for y in 0..g.points() {
        let received: W = orbits.classes[orbits.class_of[y]]
            .iter()
            .map(|&x| kernel(x, y))
            .sum();
        rhs = rhs + g.weights[y].clone() * received;
    }
    MtpReport { lhs, rhs }
}

impl<T: Scalar> Graphing<T> {
    /// Lazy Markov operator applied to `f`.
    pub fn markov(&self, f: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.points()];
        self.markov_into(f, &mut out);
        out
    }

    fn markov_into(&self, f: &[T], out: &mut [T]) {
        let slots = self.slots();
        if slots == 0 {
            out.copy_from_slice(f);
            return;
        }
        let scale = T::one() / T::cast(slots);
        for (x, o) in out.iter_mut().enumerate() {
            let s = (0..slots).fold(T::zero(), |acc, slot| {
                acc + f[self.step(slot, x).unwrap_or(x)]
            });
            *o = s * scale;
        }
    }

    /// `⟨f, g⟩_ν`.
    pub fn inner(&self, f: &[T], g: &[T]) -> T {
        crate::linalg::weighted_dot(f, g, Some(&self.weights))
    }

    /// `⟨(I − M)f, f⟩_ν`.
    pub fn dirichlet_form(&self, f: &[T]) -> T {
        self.inner(f, f) - self.inner(&self.markov(f), f)
    }
}

/// Interior of `P`: points whose defined images all stay in `P`.
pub fn graphing_interior<W>(g: &Graphing<W>, p: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; g.weights.len()];
    p.iter().for_each(|&x| mask[x] = true);
    let mut out: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&x| {
            (0..2 * g.maps.len()).all(|slot| step_raw(g, slot, x).map_or(true, |y| mask[y]))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn step_raw<W>(g: &Graphing<W>, slot: usize, x: usize) -> Option<usize> {
    let m = &g.maps[slot / 2];
    if slot % 2 == 0 {
        m.apply(x)
    } else {
        m.apply_inverse(x)
    }
}

/// Connected components of the graph induced on `P`, ordered by least point.
pub fn induced_components<W>(g: &Graphing<W>, p: &[usize]) -> Vec<Vec<usize>> {
    let n = g.weights.len();
    let mut mask = vec![false; n];
    p.iter().for_each(|&x| mask[x] = true);
    let mut uf = UnionFind::new(n);
    for m in &g.maps {
        for (x, y) in m.pairs() {
            if mask[x] && mask[y] {
                uf.union(x, y);
            }
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for x in (0..n).filter(|&x| mask[x]) {
        let r = uf.find(x);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(x);
    }
    comps
}

/// Per-component data of [`embedded_spectral_radius`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedComponent<T> {
    pub members: Vec<usize>,
    pub interior: Vec<usize>,
    pub value: T,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedReport<T> {
    /// Maximum over components; `0` if every interior is empty.
    pub value: T,
    pub components: Vec<EmbeddedComponent<T>>,
}

/// Largest Rayleigh quotient `⟨Mf, f⟩/‖f‖²` over `f` supported on the
/// interior of a component of `P`, maximized over the components.
pub fn embedded_spectral_radius<T: Scalar>(
    g: &Graphing<T>,
    p: &[usize],
) -> Result<EmbeddedReport<T>> {
    embedded_spectral_radius_with(g, p, &PowerOptions::default())
}

pub fn embedded_spectral_radius_with<T: Scalar>(
    g: &Graphing<T>,
    p: &[usize],
    opts: &PowerOptions,
) -> Result<EmbeddedReport<T>> {
    if let Some(&x) = p.iter().find(|&&x| x >= g.points()) {
        return Err(Error::invalid(format!("point {x} out of range")));
    }
    let mut components = Vec::new();
    let mut best = T::zero();
    for members in induced_components(g, p) {
        let interior = graphing_interior(g, &members);
        let mut comp = EmbeddedComponent {
            members,
            interior,
            value: T::zero(),
            converged: true,
        };
        if !comp.interior.is_empty() {
            let (value, converged) = restricted_top(g, &comp.interior, opts);
            comp.value = value;
            comp.converged = converged;
            best = best.max(value);
        }
        components.push(comp);
    }
    Ok(EmbeddedReport {
        value: best,
        components,
    })
}

/// Top eigenvalue of `M` compressed to `support`, via `(I + PMP)/2`.
fn restricted_top<T: Scalar>(g: &Graphing<T>, support: &[usize], opts: &PowerOptions) -> (T, bool) {
    let (value, _, converged) = restricted_top_vector(g, support, opts);
    (value, converged)
}

/// Top eigenvalue and eigenvector (indexed like `support`), plus convergence.
pub(crate) fn restricted_top_vector<T: Scalar>(
    g: &Graphing<T>,
    support: &[usize],
    opts: &PowerOptions,
) -> (T, Vec<T>, bool) {
    let mut pos = vec![usize::MAX; g.points()];
    for (i, &x) in support.iter().enumerate() {
        pos[x] = i;
    }
    let weights: Vec<T> = support.iter().map(|&x| g.weights[x]).collect();
    let slots = g.slots();
    let half = T::cast(0.5);
    let scale = if slots == 0 {
        T::zero()
    } else {
        half / T::cast(slots)
    };
    let start = vec![T::one(); support.len()];
    let r = power_iteration(
        start,
        Some(&weights),
        |f: &[T], out: &mut [T]| {
            for (i, &x) in support.iter().enumerate() {
                let s = if slots == 0 {
                    f[i]
                } else {
                    (0..slots).fold(T::zero(), |acc, slot| {
                        let y = g.step(slot, x).unwrap_or(x);
                        if pos[y] == usize::MAX {
                            acc
                        } else {
                            acc + f[pos[y]]
                        }
                    })
                };
                out[i] = half * f[i] + if slots == 0 { half * s } else { scale * s };
            }
        },
        opts,
    );
    let two = T::cast(2.0);
    (
        (two * r.value - T::one()).max(T::zero()).min(T::one()),
        r.vector,
        r.converged,
    )
}

/// `(1/m) Σ_{i<m} Mⁱ f`.
pub fn cesaro_average<T: Scalar>(g: &Graphing<T>, f: &[T], m: usize) -> Result<Vec<T>> {
    if m == 0 {
        return Err(Error::invalid("Cesaro average needs m >= 1"));
    }
    if f.len() != g.points() {
        return Err(Error::invalid(
            "function length differs from the point count",
        ));
    }
    let mut acc = f.to_vec();
    let mut cur = f.to_vec();
    let mut next = vec![T::zero(); f.len()];
    for _ in 1..m {
        g.markov_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        for (a, &c) in acc.iter_mut().zip(&cur) {
            *a = *a + c;
        }
    }
    let m = T::cast(m);
    Ok(acc.into_iter().map(|a| a / m).collect())
}

/// A random measure-preserving graphing on `points` points with `maps`
/// partial bijections. Each map is a random permutation restricted to a
/// random domain of density `density`. Weights are drawn per orbit and
/// normalized to total mass 1.
pub fn random_graphing<R: Rng>(
    rng: &mut R,
    points: usize,
    maps: usize,
    density: f64,
) -> Graphing<f64> {
    let mut list = Vec::with_capacity(maps);
    for i in 0..maps {
        let mut perm: Vec<usize> = (0..points).collect();
        perm.shuffle(rng);
        let pairs: Vec<(usize, usize)> = (0..points)
            .filter(|_| rng.gen_bool(density))
            .map(|x| (x, perm[x]))
            .collect();
        list.push(
            PartialBijection::new(format!("phi{i}"), points, &pairs)
                .expect("restricted permutation"),
        );
    }
    let unit = Graphing::<f64>::uniform(points, list.clone()).expect("unit weights");
    let orbits = orbit_decomposition(&unit);
    let class_weight: Vec<f64> = orbits
        .classes
        .iter()
        .map(|_| rng.gen_range(0.5..2.0))
        .collect();
    let raw: Vec<f64> = (0..points)
        .map(|x| class_weight[orbits.class_of[x]])
        .collect();
    let total: f64 = raw.iter().sum();
    Graphing::new(raw.into_iter().map(|w| w / total).collect(), list)
        .expect("weights constant on orbits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::{any, prop_assert, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn cycle(n: usize) -> Graphing<f64> {
        let pairs: Vec<(usize, usize)> = (0..n).map(|x| (x, (x + 1) % n)).collect();
        Graphing::uniform(n, vec![PartialBijection::new("rot", n, &pairs).unwrap()]).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let text = "points 4\nweights 1 1 2 2\nmap phi: 0 -> 1, 1 -> 0\nmap psi: 2 -> 3\n";
        let g: Graphing<f64> = text.parse().unwrap();
        assert_eq!(g.points(), 4);
        assert_eq!(g.step(3, 3), Some(2));
        let back: Graphing<f64> = g.to_text().parse().unwrap();
        assert_eq!(back, g);
        let exact: Graphing<BigRational> = "points 2\nweights 1/3 1/3\nmap t: 0 -> 1, 1 -> 0"
            .parse()
            .unwrap();
        assert_eq!(exact.total_weight(), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn rejects_bad_graphings() {
        assert!("points 2\nweights 1 2\nmap t: 0 -> 1"
            .parse::<Graphing<f64>>()
            .is_err());
        assert!("points 2\nmap t: 0 -> 1, 1 -> 1"
            .parse::<Graphing<f64>>()
            .is_err());
        assert!("points 2\nmap t: 0 -> 5".parse::<Graphing<f64>>().is_err());
        assert!("points 2\nweights 1 0".parse::<Graphing<f64>>().is_err());
    }

    #[test]
    fn orbits_of_two_triangles() {
        let g: Graphing<f64> = "points 6\nmap r: 0 -> 1, 1 -> 2, 2 -> 0, 3 -> 4, 4 -> 5, 5 -> 3"
            .parse()
            .unwrap();
        let o = orbit_decomposition(&g);
        assert_eq!(o.classes, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(o.masses, vec![3.0, 3.0]);
        let id: Graphing<f64> = "points 4\nmap id: 0 -> 0, 1 -> 1, 2 -> 2, 3 -> 3"
            .parse()
            .unwrap();
        assert_eq!(orbit_decomposition(&id).classes.len(), 4);
    }

    #[test]
    fn orbits_match_independent_union_find() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_graphing(&mut rng, 100, 3, 0.3);
        let o = orbit_decomposition(&g);
        // flood fill over all slots
        let mut label = vec![usize::MAX; 100];
        let mut next = 0;
        for s in 0..100 {
            if label[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s] = next;
            while let Some(x) = stack.pop() {
                for slot in 0..g.slots() {
                    if let Some(y) = g.step(slot, x) {
                        if label[y] == usize::MAX {
                            label[y] = next;
                            stack.push(y);
                        }
                    }
                }
            }
            next += 1;
        }
        assert_eq!(o.classes.len(), next);
        for x in 0..100 {
            for y in 0..100 {
                assert_eq!(o.class_of[x] == o.class_of[y], label[x] == label[y]);
            }
        }
    }

    #[test]
    fn mtp_examples() {
        let c = cycle(3);
        let r = mtp_check(&c, |_, _| 1.0);
        assert_eq!((r.lhs, r.rhs), (9.0, 9.0));
        let g: Graphing<f64> = "points 5\nweights 1 1 1 2 2\nmap p: 0 -> 1, 1 -> 2, 3 -> 4"
            .parse()
            .unwrap();
        let phi = &g.maps()[0];
        let r = mtp_check(&g, |x, y| if phi.apply(x) == Some(y) { 1.0 } else { 0.0 });
        assert_eq!(r.lhs, 4.0);
        assert_eq!(r.rhs, 4.0);
    }

    #[test]
    fn mtp_exact_with_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_graphing(&mut rng, 40, 2, 0.5);
        let orbits = orbit_decomposition(&g);
        let ws: Vec<BigRational> = (0..40)
            .map(|x| BigRational::new((orbits.class_of[x] as i64 + 1).into(), 7.into()))
            .collect();
        let exact: Graphing<BigRational> = Graphing::new(ws, g.maps().to_vec()).unwrap();
        let r = mtp_check(&exact, |x, y| {
            BigRational::new(((x * 31 + y * 7) % 13).into(), 3.into())
        });
        assert_eq!(r.lhs, r.rhs);
    }

    proptest! {
        #[test]
        fn mtp_holds_on_random_graphings(seed in any::<u64>(), points in 1usize..60, maps in 1usize..4, density in 0.1f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graphing(&mut rng, points, maps, density);
            let k: Vec<f64> = (0..points * points).map(|_| rng.gen()).collect();
            let r = mtp_check(&g, |x, y| k[x * points + y]);
            prop_assert!((r.lhs - r.rhs).abs() <= 1e-9 * r.lhs.abs().max(1.0));
        }

        #[test]
        fn embedded_radius_in_unit_interval(seed in any::<u64>(), points in 1usize..80, mask in any::<u64>()) {
            let g = random_graphing(&mut ChaCha8Rng::seed_from_u64(seed), points, 2, 0.8);
            let p: Vec<usize> = (0..points).filter(|x| mask >> (x % 64) & 1 == 1).collect();
            let v = embedded_spectral_radius(&g, &p).unwrap().value;
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        }
    }

    #[test]
    fn embedded_examples() {
        let c = cycle(20);
        let all: Vec<usize> = (0..20).collect();
        assert!((embedded_spectral_radius(&c, &all).unwrap().value - 1.0).abs() < 1e-9);
        assert_eq!(embedded_spectral_radius(&c, &[4]).unwrap().value, 0.0);
        let path: Vec<usize> = (3..10).collect();
        let r = embedded_spectral_radius(&c, &path).unwrap();
        assert_eq!(r.components[0].interior, (4..9).collect::<Vec<_>>());
        assert!(
            (r.value - (std::f64::consts::PI / 6.0).cos()).abs() < 1e-8,
            "{}",
            r.value
        );
    }

    #[test]
    fn embedded_two_components_takes_max() {
        let c = cycle(30);
        let p: Vec<usize> = (0..5).chain(10..20).collect();
        let r = embedded_spectral_radius(&c, &p).unwrap();
        assert_eq!(r.components.len(), 2);
        assert!((r.value - (std::f64::consts::PI / 9.0).cos()).abs() < 1e-8);
    }

    #[test]
    fn cesaro_examples() {
        let c = cycle(7);
        let f: Vec<f64> = (0..7).map(|x| x as f64).collect();
        assert_eq!(cesaro_average(&c, &f, 1).unwrap(), f);
        let ones = vec![1.0; 7];
        for m in [1, 5, 40] {
            assert!(cesaro_average(&c, &ones, m)
                .unwrap()
                .iter()
                .all(|v| (v - 1.0).abs() < 1e-12));
        }
        let mut delta = vec![0.0; 7];
        delta[0] = 1.0;
        let avg = cesaro_average(&c, &delta, 20_000).unwrap();
        assert!(avg.iter().all(|v| (v - 1.0 / 7.0).abs() < 1e-3), "{avg:?}");
        assert!(cesaro_average(&c, &delta, 0).is_err());
    }

    #[test]
    fn markov_is_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_graphing(&mut rng, 60, 3, 0.6);
        let f: Vec<f64> = (0..60).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h: Vec<f64> = (0..60).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = g.inner(&g.markov(&f), &h);
        let b = g.inner(&f, &g.markov(&h));
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn works_in_f32() {
        let c: Graphing<f32> = "points 5\nmap r: 0 -> 1, 1 -> 2, 2 -> 3, 3 -> 4, 4 -> 0"
            .parse()
            .unwrap();
        let r = embedded_spectral_radius(&c, &[0, 1, 2, 3, 4]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5);
    }
}
