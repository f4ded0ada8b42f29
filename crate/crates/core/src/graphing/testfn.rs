use serde::{Deserialize, Serialize};

use super::{graphing_interior, Graphing, UnionFind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schreier::{folner_defect, SchreierBall};

/// A nonnegative, nonzero function supported on the interior of `component`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction<T> {
    pub values: Vec<T>,
    pub component: Vec<usize>,
    pub interior: Vec<usize>,
}

impl<T: Scalar> TestFunction<T> {
    pub fn new(g: &Graphing<T>, values: Vec<T>, component: Vec<usize>) -> Result<Self> {
        if values.len() != g.points() {
            return Err(Error::invalid(
                "test function length differs from the point count",
            ));
        }
        if let Some(&x) = component.iter().find(|&&x| x >= g.points()) {
            return Err(Error::invalid(format!("component point {x} out of range")));
        }
        if values.iter().any(|v| !(*v >= T::zero())) {
            return Err(Error::invalid("test functions are nonnegative"));
        }
        if values.iter().all(|v| v.is_zero()) {
            return Err(Error::invalid("test function is zero"));
        }
        let interior = graphing_interior(g, &component);
        let mut inside = vec![false; g.points()];
        interior.iter().for_each(|&x| inside[x] = true);
        if let Some(x) = (0..g.points()).find(|&x| !values[x].is_zero() && !inside[x]) {
            return Err(Error::invalid(format!(
                "support point {x} is not in the interior of the component"
            )));
        }
        let mut component = component;
        component.sort_unstable();
        component.dedup();
        Ok(TestFunction {
            values,
            component,
            interior,
        })
    }

    /// Indicator of the interior of `component`.
    pub fn interior_indicator(g: &Graphing<T>, component: Vec<usize>) -> Result<Self> {
        let interior = graphing_interior(g, &component);
        let mut values = vec![T::zero(); g.points()];
        interior.iter().for_each(|&x| values[x] = T::one());
        Self::new(g, values, component)
    }

    /// Top Dirichlet eigenfunction of the component's interior (nonnegative
    /// by Perron–Frobenius).
    pub fn top_eigenfunction(g: &Graphing<T>, component: Vec<usize>) -> Result<Self> {
        let interior = graphing_interior(g, &component);
        if interior.is_empty() {
            return Err(Error::invalid("component has empty interior"));
        }
        let (_, vec, _) = super::restricted_top_vector(g, &interior, &Default::default());
        let mut values = vec![T::zero(); g.points()];
        for (&x, v) in interior.iter().zip(vec) {
            values[x] = v.abs();
        }
        Self::new(g, values, component)
    }

    pub fn norm_sq(&self, g: &Graphing<T>) -> T {
        g.inner(&self.values, &self.values)
    }

    /// `λ′ = ⟨M f, f⟩ / ‖f‖²`.
    pub fn rayleigh(&self, g: &Graphing<T>) -> T {
        g.inner(&g.markov(&self.values), &self.values) / self.norm_sq(g)
    }
}

/// Mass and norm share of `f` on one orbit component of the product window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentShare<T> {
    pub points: usize,
    pub mass: T,
    /// `mass` over the mass of the whole window.
    pub tau: T,
    /// `‖f·1_z‖² / ‖f‖²`.
    pub norm_share: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionReport<T> {
    /// `|S|`.
    pub letters: usize,
    pub f_size: usize,
    /// `|FS Δ F| / |F|` in the Schreier ball.
    pub epsilon1: f64,
    /// `1 − ⟨(I−M)f₂, f₂⟩ / ‖f₂‖²`.
    pub lambda2_prime: T,
    pub norm_sq: T,
    /// `⟨(I − M)f, f⟩`.
    pub lhs: T,
    /// `(1 − λ₂′ + |S|ε₁)‖f‖²`.
    pub bound: T,
    pub slack: T,
    pub holds: bool,
    /// Empty when the product window exceeds the share cap.
    pub components: Vec<ComponentShare<T>>,
}

/// `f = 1_F × f₂` on `X₁ × X₂` with the diagonal maps `(x, y) ↦ (xs, φ_s(y))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductTestFunction<T> {
    pub f_set: Vec<usize>,
    pub f2: TestFunction<T>,
    pub report: TestFunctionReport<T>,
}

impl<T: Scalar> ProductTestFunction<T> {
    /// Nonzero values `((x₁, x₂), f(x₁, x₂))`.
    pub fn values(&self) -> impl Iterator<Item = ((usize, usize), T)> + '_ {
        self.f_set.iter().flat_map(move |&x| {
            self.f2
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(y, &v)| ((x, y), v))
        })
    }
}

const SHARE_CAP: usize = 5_000_000;

/// Builds `1_F × f₂` and evaluates both sides of
/// `⟨(I−M)f, f⟩ ≤ (1 − λ₂′ + |S|ε₁)‖f‖²`. Slot `s` of `X₂` is paired with
/// letter slot `s` of the ball, so `X₂` must have `|S|/2` maps.
pub fn product_test_function<T: Scalar, C>(
    x1: &SchreierBall<C>,
    f_set: &[usize],
    x2: &Graphing<T>,
    f2: &TestFunction<T>,
) -> Result<ProductTestFunction<T>> {
    let letters = x1.degree();
    if x2.slots() != letters {
        return Err(Error::invalid(format!(
            "X2 has {} map slots but the ball has {letters} letters",
            x2.slots()
        )));
    }
    let f2 = TestFunction::new(x2, f2.values.clone(), f2.component.clone())?;
    let epsilon1 = folner_defect(x1, f_set)?;
    let mut f_set = f_set.to_vec();
    f_set.sort_unstable();
    f_set.dedup();
    let mut in_f = vec![false; x1.len() + x1.halo_len()];
    f_set.iter().for_each(|&x| in_f[x] = true);

    let f2v = &f2.values;
    let weights = x2.weights();
    let size = T::cast(f_set.len());
    let mut quad = T::zero();
    for s in 0..letters {
        let n_s = f_set
            .iter()
            .filter(|&&x| x1.neighbor(x, s).is_some_and(|y| in_f[y]))
            .count();
        let (mut on, mut off) = (T::zero(), T::zero());
        for y in 0..x2.points() {
            match x2.step(s, y) {
                Some(z) => on = on + weights[y] * f2v[y] * f2v[z],
                None => off = off + weights[y] * f2v[y] * f2v[y],
            }
        }
        quad = quad + T::cast(n_s) * on + size * off;
    }
    let mf_f = quad / T::cast(letters);
    let f2_norm = f2.norm_sq(x2);
    let norm_sq = size * f2_norm;
    let lhs = norm_sq - mf_f;
    let lambda2_prime = f2.rayleigh(x2);
    let bound = (T::one() - lambda2_prime + T::cast(letters) * T::cast(epsilon1)) * norm_sq;
    let slack = bound - lhs;
    let components = shares(x1, &in_f, x2, &f2, norm_sq);
    let report = TestFunctionReport {
        letters,
        f_size: f_set.len(),
        epsilon1,
        lambda2_prime,
        norm_sq,
        lhs,
        bound,
        slack,
        holds: slack >= T::zero(),
        components,
    };
    Ok(ProductTestFunction { f_set, f2, report })
}

/// Orbit components of the product on `(ball ∪ halo) × X₂` that carry `f`.
fn shares<T: Scalar, C>(
    x1: &SchreierBall<C>,
    in_f: &[bool],
    x2: &Graphing<T>,
    f2: &TestFunction<T>,
    norm_sq: T,
) -> Vec<ComponentShare<T>> {
    let n1 = x1.len() + x1.halo_len();
    let n2 = x2.points();
    if n1.saturating_mul(n2) > SHARE_CAP {
        return Vec::new();
    }
    let id = |x: usize, y: usize| x * n2 + y;
    let mut uf = UnionFind::new(n1 * n2);
    for x in 0..x1.len() {
        for s in 0..x1.degree() {
            let Some(xs) = x1.neighbor(x, s) else {
                continue;
            };
            for y in 0..n2 {
                if let Some(ys) = x2.step(s, y) {
                    uf.union(id(x, y), id(xs, ys));
                }
            }
        }
    }
    let mut index = vec![usize::MAX; n1 * n2];
    let mut out: Vec<ComponentShare<T>> = Vec::new();
    let mut total = T::zero();
    let mut comp_of = vec![usize::MAX; n1 * n2];
    for p in 0..n1 * n2 {
        let r = uf.find(p);
        comp_of[p] = r;
        total = total + x2.weights()[p % n2];
    }
    for p in 0..n1 * n2 {
        let (x, y) = (p / n2, p % n2);
        if !(in_f[x] && !f2.values[y].is_zero()) {
            continue;
        }
        let r = comp_of[p];
        if index[r] == usize::MAX {
            index[r] = out.len();
            out.push(ComponentShare {
                points: 0,
                mass: T::zero(),
                tau: T::zero(),
                norm_share: T::zero(),
            });
        }
        let v = f2.values[y];
        let share = &mut out[index[r]];
        share.norm_share = share.norm_share + x2.weights()[y] * v * v / norm_sq;
    }
    for p in 0..n1 * n2 {
        let r = comp_of[p];
        if index[r] != usize::MAX {
            let share = &mut out[index[r]];
            share.points += 1;
            share.mass = share.mass + x2.weights()[p % n2];
        }
    }
    for share in &mut out {
        share.tau = share.mass / total;
    }
    out
}
