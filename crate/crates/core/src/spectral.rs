//! Lower bounds for the co-spectral radius `ρ = ‖M‖` of a Schreier graph,
//! where `(Mf)(x) = |S|⁻¹ Σ_{s∈S} f(xs)`, and the cogrowth formula for
//! subgroups of free groups.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Generator;
use crate::linalg::{power_iteration, PowerOptions};
use crate::scalar::Scalar;
use crate::schreier::{generate_ball_from, BallOptions, SchreierBall, SubgroupOracle};
use crate::stallings::CogrowthResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dirichlet,
    ReturnProbability,
}

/// A certified lower bound for `ρ(H\Γ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate<T> {
    pub method: Method,
    #[serde(rename = "value")]
    pub lower_bound: T,
    /// Ball radius (Dirichlet) or truncation radius (return probability).
    pub radius: usize,
    /// Walk length `2n`; zero for Dirichlet estimates.
    pub steps: usize,
    pub iterations: usize,
    pub residual: T,
    pub converged: bool,
    /// The computation ran on a smaller window than requested.
    pub truncated: bool,
    /// The ball has no interior vertex, so the bound is the trivial 0.
    pub empty_interior: bool,
}

/// Top eigenpair of `P·M·P` on the interior of `ball`, where `P` restricts to
/// the interior. The vector is indexed like `ball.interior()`.
fn dirichlet_power<T: Scalar, C>(
    ball: &SchreierBall<C>,
    opts: &PowerOptions,
) -> Option<(T, Vec<T>, usize, T, bool)> {
    let interior = ball.interior();
    if interior.is_empty() {
        return None;
    }
    let mut pos = vec![u32::MAX; ball.len()];
    for (i, &v) in interior.iter().enumerate() {
        pos[v] = i as u32;
    }
    // adjacency restricted to the interior, loops and multi-edges kept
    let degree = ball.degree();
    let mut nbrs: Vec<u32> = Vec::with_capacity(interior.len() * degree);
    for &v in &interior {
        for slot in 0..degree {
            // interior vertices have all neighbours in the ball
            let w = ball.neighbor(v, slot).expect("interior vertex");
            nbrs.push(pos[w]);
        }
    }
    let mut start = vec![T::zero(); interior.len()];
    if pos[ball.root()] != u32::MAX {
        start[pos[ball.root()] as usize] = T::one();
    } else {
        start.iter_mut().for_each(|x| *x = T::one());
    }
    let half = T::cast(0.5);
    let scale = half / T::cast(degree);
    let r = power_iteration(
        start,
        None,
        |x: &[T], y: &mut [T]| {
            for (i, out) in y.iter_mut().enumerate() {
                let s = nbrs[i * degree..(i + 1) * degree]
                    .iter()
                    .filter(|&&j| j != u32::MAX)
                    .fold(T::zero(), |acc, &j| acc + x[j as usize]);
                *out = half * x[i] + scale * s;
            }
        },
        opts,
    );
    let two = T::cast(2.0);
    Some((
        two * r.value - T::one(),
        r.vector,
        r.iterations,
        two * r.residual,
        r.converged,
    ))
}

/// Top Dirichlet eigenvector on `ball.interior()`; empty when the interior is.
pub fn dirichlet_eigenvector<T: Scalar, C>(
    ball: &SchreierBall<C>,
    tol: f64,
    max_iter: usize,
) -> Vec<T> {
    dirichlet_power::<T, C>(ball, &PowerOptions { tol, max_iter })
        .map(|r| r.1)
        .unwrap_or_default()
}

/// Largest Rayleigh quotient of `M` over functions supported on the interior
/// of the ball, by power iteration on `(I + PMP)/2` from the root indicator.
pub fn dirichlet_lower_bound<T: Scalar, C>(
    ball: &SchreierBall<C>,
    tol: T,
) -> Result<SpectralEstimate<T>> {
    let tol = tol.to_f64().unwrap_or(f64::NAN);
    dirichlet_lower_bound_with(
        ball,
        &PowerOptions {
            tol,
            ..PowerOptions::default()
        },
    )
}

pub fn dirichlet_lower_bound_with<T: Scalar, C>(
    ball: &SchreierBall<C>,
    opts: &PowerOptions,
) -> Result<SpectralEstimate<T>> {
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if ball.radius() < 1 && ball.is_truncated() {
        return Err(Error::invalid(
            "Dirichlet bound needs a ball of radius at least 1",
        ));
    }
    let mut est = SpectralEstimate {
        method: Method::Dirichlet,
        lower_bound: T::zero(),
        radius: ball.radius(),
        steps: 0,
        iterations: 0,
        residual: T::zero(),
        converged: true,
        truncated: false,
        empty_interior: true,
    };
    if !ball.is_truncated() {
        // a whole finite component: constants are eigenfunctions for 1
        est.lower_bound = T::one();
        est.empty_interior = false;
        return Ok(est);
    }
    if let Some((value, _, iterations, residual, converged)) = dirichlet_power::<T, C>(ball, opts) {
        est.lower_bound = value.max(T::zero()).min(T::one());
        est.iterations = iterations;
        est.residual = residual;
        est.converged = converged;
        est.empty_interior = false;
    }
    Ok(est)
}

/// Number of closed walks from the root of each length `0..=steps` inside
/// the ball. A closed walk of length `2n` stays within distance `n`, so the
/// counts are exact up to `steps = 2·radius + 1`.
pub fn closed_walk_counts<N: Num + Clone, C>(ball: &SchreierBall<C>, steps: usize) -> Vec<N> {
    let mut cur = vec![N::zero(); ball.len()];
    cur[ball.root()] = N::one();
    let mut counts = vec![N::one()];
    for _ in 0..steps {
        let mut next = vec![N::zero(); ball.len()];
        for (v, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for slot in 0..ball.degree() {
                if let Some(w) = ball.inner_neighbor(v, slot) {
                    next[w] = next[w].clone() + c.clone();
                }
            }
        }
        cur = next;
        counts.push(cur[ball.root()].clone());
    }
    counts
}

/// Number of reduced words of each length `0..=n` fixing the root coset,
/// counted as non-backtracking closed walks in the Schreier graph. Fails with
/// a vertex-cap error when more than `cap` walk states are live.
pub fn reduced_return_counts<O: SubgroupOracle>(
    oracle: &O,
    n: usize,
    cap: usize,
) -> Result<Vec<BigUint>> {
    let root = oracle.root();
    let slots = 2 * oracle.rank();
    // state: (coset, slot of the last letter); usize::MAX before the first letter
    let mut cur: HashMap<(O::Coset, usize), BigUint> = HashMap::new();
    cur.insert((root.clone(), usize::MAX), BigUint::from(1u32));
    let mut counts = vec![BigUint::from(1u32)];
    for len in 1..=n {
        let mut next: HashMap<(O::Coset, usize), BigUint> = HashMap::with_capacity(cur.len() * 2);
        for ((c, last), k) in &cur {
            for slot in 0..slots {
                let g = Generator::from_slot(slot);
                if *last != usize::MAX && Generator::from_slot(*last).inverse() == g {
                    continue;
                }
                let d = oracle.act(g, c)?;
                *next.entry((d, slot)).or_default() += k;
            }
        }
        if next.len() > cap {
            return Err(Error::VertexCap {
                cap,
                attained_radius: len - 1,
            });
        }
        counts.push(
            next.iter()
                .filter(|((c, _), _)| *c == root)
                .map(|(_, k)| k)
                .sum(),
        );
        cur = next;
    }
    Ok(counts)
}

fn walk_ball<O: SubgroupOracle>(
    oracle: &O,
    radius: usize,
    cap: usize,
) -> Result<(SchreierBall<O::Coset>, bool)> {
    let opts = BallOptions {
        vertex_cap: cap,
        track_halo: false,
    };
    match generate_ball_from(oracle, oracle.root(), radius, &opts) {
        Ok(b) => Ok((b, false)),
        Err(Error::VertexCap {
            attained_radius, ..
        }) => Ok((
            generate_ball_from(oracle, oracle.root(), attained_radius, &opts)?,
            true,
        )),
        Err(e) => Err(e),
    }
}

/// Exact return probabilities `p_{2k}(o, o)` for `k = 0..=n`.
pub fn return_probabilities<O: SubgroupOracle>(oracle: &O, n: usize) -> Result<Vec<BigRational>> {
    let (ball, truncated) = walk_ball(oracle, n, crate::schreier::DEFAULT_VERTEX_CAP)?;
    if truncated {
        return Err(Error::VertexCap {
            cap: crate::schreier::DEFAULT_VERTEX_CAP,
            attained_radius: ball.radius(),
        });
    }
    let counts: Vec<BigUint> = closed_walk_counts(&ball, 2 * n);
    let degree = BigUint::from(ball.degree());
    Ok((0..=n)
        .map(|k| {
            let num = counts[2 * k].clone().into();
            let den = num_traits::pow(degree.clone(), 2 * k).into();
            BigRational::new(num, den)
        })
        .collect())
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `p_{2n}(o, o)^{1/(2n)} ≤ ρ`, with the walk tracked out to radius `n`.
pub fn return_probability_bound<T: Scalar, O: SubgroupOracle>(
    oracle: &O,
    n: usize,
) -> Result<SpectralEstimate<T>> {
    return_probability_bound_with(oracle, n, crate::schreier::DEFAULT_VERTEX_CAP)
}

/// As [`return_probability_bound`] with an explicit state cap. When the cap
/// is hit the walk is confined to the largest complete ball, which still
/// gives a lower bound and sets `truncated`.
pub fn return_probability_bound_with<T: Scalar, O: SubgroupOracle>(
    oracle: &O,
    n: usize,
    cap: usize,
) -> Result<SpectralEstimate<T>> {
    if n == 0 {
        return Err(Error::invalid("walk half-length n must be at least 1"));
    }
    let (ball, truncated) = walk_ball(oracle, n, cap)?;
    let counts: Vec<BigUint> = closed_walk_counts(&ball, 2 * n);
    let closed = &counts[2 * n];
    let value = if closed.is_zero() {
        0.0
    } else {
        (big_ln(closed) / (2 * n) as f64 - (ball.degree() as f64).ln())
            .exp()
            .min(1.0)
    };
    Ok(SpectralEstimate {
        method: Method::ReturnProbability,
        lower_bound: T::from_f64_lossy(value),
        radius: ball.radius(),
        steps: 2 * n,
        iterations: 2 * n,
        residual: T::zero(),
        converged: true,
        truncated,
        empty_interior: false,
    })
}

/// `ρ` of `H ≤ F_d` from its cogrowth `α`: `√(2d−1)/d` when `α ≤ √(2d−1)`,
/// otherwise `(α + (2d−1)/α) / 2d`.
pub fn grigorchuk_rho<T: Scalar>(alpha: T, d: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::invalid("cogrowth formula needs rank at least 2"));
    }
    let q = T::cast(2 * d - 1);
    let slack = T::cast(1e-9);
    if !(alpha >= T::zero()) || alpha > q + slack {
        return Err(Error::invalid(format!(
            "cogrowth {alpha} outside [0, {}]",
            2 * d - 1
        )));
    }
    let alpha = alpha.min(q);
    let root = q.sqrt();
    let two_d = T::cast(2 * d);
    Ok(if alpha <= root {
        root / T::cast(d)
    } else {
        (alpha + q / alpha) / two_d
    })
}

/// `δ = ln α`; `None` when `α = 0`.
pub fn critical_exponent<T: Scalar>(c: &CogrowthResult<T>) -> Option<T> {
    (c.alpha > T::zero()).then(|| c.alpha.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irs::{KernelOracle, PermutationOracle};
    use crate::schreier::{generate_ball, AutomatonOracle, Family, WholeGroupOracle};
    use crate::stallings::StallingsAutomaton;
    use nalgebra::DMatrix;

    #[test]
    fn reduced_counts_match_automaton() {
        for gens in [
            vec!["aa", "b", "abA"],
            vec!["ab"],
            vec![],
            vec!["aab", "bAb"],
        ] {
            let words: Vec<crate::group::Word> = gens.iter().map(|w| w.parse().unwrap()).collect();
            let aut = StallingsAutomaton::build(&words, 2).unwrap();
            let expected = aut.closed_reduced_counts(8);
            let got = reduced_return_counts(&AutomatonOracle::new(aut), 8, 1_000_000).unwrap();
            assert_eq!(got, expected, "{gens:?}");
        }
    }

    #[test]
    fn reduced_counts_respect_cap() {
        let o = AutomatonOracle::new(StallingsAutomaton::trivial(2));
        assert!(reduced_return_counts(&o, 12, 1000)
            .unwrap_err()
            .is_resource_cap());
    }

    /// Dense Dirichlet oracle: top eigenvalue of `M` restricted to the interior.
    fn dense_dirichlet<C>(ball: &SchreierBall<C>) -> f64 {
        let interior = ball.interior();
        let n = interior.len();
        let mut pos = vec![usize::MAX; ball.len()];
        for (i, &v) in interior.iter().enumerate() {
            pos[v] = i;
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (i, &v) in interior.iter().enumerate() {
            for slot in 0..ball.degree() {
                let w = ball.neighbor(v, slot).unwrap();
                if pos[w] != usize::MAX {
                    m[(i, pos[w])] += 1.0 / ball.degree() as f64;
                }
            }
        }
        m.symmetric_eigenvalues().max()
    }

    fn tree() -> AutomatonOracle {
        AutomatonOracle::new(StallingsAutomaton::trivial(2))
    }

    #[test]
    fn z_path_eigenvalue() {
        let b = generate_ball(&KernelOracle::new(vec![1]).unwrap(), 10).unwrap();
        let e = dirichlet_lower_bound(&b, 1e-10).unwrap();
        let exact = (std::f64::consts::PI / 20.0).cos();
        assert!((e.lower_bound - exact).abs() < 1e-3, "{}", e.lower_bound);
        assert!((dense_dirichlet(&b) - exact).abs() < 1e-9);
        assert!(e.converged);
    }

    #[test]
    fn tree_ball_matches_dense_oracle() {
        let b = generate_ball(&tree(), 6).unwrap();
        let e = dirichlet_lower_bound(&b, 1e-12).unwrap();
        assert!(
            e.lower_bound > 0.79 && e.lower_bound < 0.75f64.sqrt(),
            "{}",
            e.lower_bound
        );
        assert!((e.lower_bound - dense_dirichlet(&b)).abs() < 1e-6);
    }

    #[test]
    fn single_vertex_is_one() {
        let b = generate_ball(&WholeGroupOracle::new(Family::Free { rank: 2 }), 1).unwrap();
        let e = dirichlet_lower_bound(&b, 1e-10f32).unwrap();
        assert_eq!(e.lower_bound, 1.0);
    }

    #[test]
    fn empty_interior_flagged() {
        let b = generate_ball(&tree(), 1).unwrap();
        let mut opts = BallOptions::default();
        opts.track_halo = false;
        let e = dirichlet_lower_bound(&b, 1e-10).unwrap();
        assert!(!e.empty_interior);
        let b0 = generate_ball_from(&tree(), tree().root(), 0, &opts).unwrap();
        assert!(dirichlet_lower_bound(&b0, 1e-10f64).is_err());
        assert!(dirichlet_lower_bound(&b, 0.0).is_err());
    }

    #[test]
    fn return_probability_examples() {
        let z = KernelOracle::new(vec![1, 0]).unwrap();
        // with a b-loop the walk on Z is lazy: p_4 = Σ_k C(4,k) 2^{-4} (1/2)^k ... computed directly
        let p = return_probabilities(&z, 2).unwrap();
        let lazy: f64 = (0..=4usize)
            .filter(|k| k % 2 == 0)
            .map(|k| {
                let moves =
                    binom(4, k) as f64 * 0.5f64.powi(k as i32) * 0.5f64.powi((4 - k) as i32);
                moves * binom(k, k / 2) as f64 * 0.5f64.powi(k as i32)
            })
            .sum();
        assert!((p[2].to_f64().unwrap() - lazy).abs() < 1e-15);
        let t = return_probability_bound::<f64, _>(&tree(), 1).unwrap();
        assert!((t.lower_bound - 0.5).abs() < 1e-15);
        let w =
            return_probability_bound::<f64, _>(&WholeGroupOracle::new(Family::Wreath), 5).unwrap();
        assert_eq!(w.lower_bound, 1.0);
    }

    #[test]
    fn z_without_loops() {
        // rank-1 kernel: the simple walk on Z, p_4 = 6/16
        let z = KernelOracle::new(vec![1]).unwrap();
        let e = return_probability_bound::<f64, _>(&z, 2).unwrap();
        assert!((e.lower_bound - 0.375f64.powf(0.25)).abs() < 1e-12);
    }

    fn binom(n: usize, k: usize) -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
    }

    #[test]
    fn supermultiplicative_returns() {
        let oracles: Vec<Box<dyn Fn(usize) -> Vec<BigRational>>> = vec![
            Box::new(|n| return_probabilities(&tree(), n).unwrap()),
            Box::new(|n| return_probabilities(&KernelOracle::new(vec![1, 2]).unwrap(), n).unwrap()),
            Box::new(|n| {
                let aut =
                    StallingsAutomaton::build(&["aab".parse().unwrap(), "bAb".parse().unwrap()], 2)
                        .unwrap();
                return_probabilities(&AutomatonOracle::new(aut), n).unwrap()
            }),
            Box::new(|n| return_probabilities(&PermutationOracle::sample(7, 2, 3), n).unwrap()),
        ];
        for p in oracles {
            let p = p(8);
            for m in 1..=4 {
                for n in 1..=4 {
                    assert!(p[m + n] >= &p[m] * &p[n], "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn dirichlet_monotone_in_radius() {
        let aut = StallingsAutomaton::build(&["aab".parse().unwrap(), "bAbb".parse().unwrap()], 2)
            .unwrap();
        let o = AutomatonOracle::new(aut);
        let mut prev = 0.0;
        for r in [2, 4, 6, 8] {
            let v = dirichlet_lower_bound(&generate_ball(&o, r).unwrap(), 1e-10)
                .unwrap()
                .lower_bound;
            assert!(v >= prev - 1e-9, "r={r}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn grigorchuk_examples() {
        let kesten = 3f64.sqrt() / 2.0;
        assert!((grigorchuk_rho(3.0f64, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((grigorchuk_rho(3f64.sqrt(), 2).unwrap() - kesten).abs() < 1e-12);
        assert!((grigorchuk_rho(0.0f64, 2).unwrap() - kesten).abs() < 1e-15);
        assert!(grigorchuk_rho(3.1f64, 2).is_err());
        assert!(grigorchuk_rho(1.0f64, 1).is_err());
        for d in 2..6 {
            let r = ((2 * d - 1) as f64).sqrt();
            for x in [r - 1e-9, r + 1e-9] {
                assert!((grigorchuk_rho(x, d).unwrap() - r / d as f64).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn critical_exponent_examples() {
        let c = |alpha: f64| CogrowthResult {
            alpha,
            delta: None,
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
        assert!((critical_exponent(&c(3.0)).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(critical_exponent(&c(1.0)), Some(0.0));
        assert_eq!(critical_exponent(&c(0.0)), None);
    }

    #[test]
    fn estimates_below_formula() {
        for gens in [
            vec!["aab", "bAb"],
            vec!["a"],
            vec!["ab", "ba"],
            vec!["aa", "b", "aBA"],
        ] {
            let ws: Vec<_> = gens.iter().map(|w| w.parse().unwrap()).collect();
            let aut = StallingsAutomaton::build(&ws, 2).unwrap();
            let rho = grigorchuk_rho(aut.cogrowth_rate::<f64>().alpha, 2).unwrap();
            let o = AutomatonOracle::new(aut);
            let d = dirichlet_lower_bound(&generate_ball(&o, 8).unwrap(), 1e-10).unwrap();
            let p = return_probability_bound::<f64, _>(&o, 8).unwrap();
            assert!(d.lower_bound <= rho + 0.02, "{gens:?}");
            assert!(p.lower_bound <= rho + 0.02, "{gens:?}");
        }
    }
}
