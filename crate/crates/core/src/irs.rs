//! Random and deterministic subgroup oracles.
//!
//! Samplers draw from `ChaCha8Rng::seed_from_u64(seed)`, so a seed names the
//! same subgroup on every platform.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{Generator, Word, WreathElement};
use crate::schreier::{check_generator, Family, SubgroupOracle};

/// Seeded generator used by every sampler.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A Bernoulli site-percolation configuration on `[-W, W]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercolationSample {
    pub p: f64,
    pub window: i64,
    pub seed: u64,
    /// Open sites, sorted.
    pub sites: Vec<i64>,
}

/// A maximal run of consecutive sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: i64,
    pub len: usize,
}

impl Segment {
    pub fn end(&self) -> i64 {
        self.start + self.len as i64 - 1
    }

    pub fn center(&self) -> i64 {
        self.start + (self.len as i64 - 1) / 2
    }
}

/// Sites `-W..=W` opened independently with probability `p`, in increasing order.
pub fn sample_bernoulli_percolation(p: f64, window: i64, seed: u64) -> Result<PercolationSample> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "percolation density {p} outside [0, 1]"
        )));
    }
    if window < 0 {
        return Err(Error::invalid("window must be nonnegative"));
    }
    let mut r = rng(seed);
    let sites = (-window..=window).filter(|_| r.gen_bool(p)).collect();
    Ok(PercolationSample {
        p,
        window,
        seed,
        sites,
    })
}

impl PercolationSample {
    pub fn contains(&self, site: i64) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn density(&self) -> f64 {
        self.sites.len() as f64 / (2 * self.window + 1) as f64
    }

    fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; (2 * self.window + 1) as usize];
        for &s in &self.sites {
            mask[(s + self.window) as usize] = true;
        }
        mask
    }

    /// Longest runs inside the window of open and of closed sites; the first
    /// such run wins ties.
    pub fn longest_segments(&self) -> (Option<Segment>, Option<Segment>) {
        let mask = self.mask();
        let mut best = [None::<Segment>, None::<Segment>];
        let mut i = 0;
        while i < mask.len() {
            let open = mask[i];
            let start = i;
            while i < mask.len() && mask[i] == open {
                i += 1;
            }
            let seg = Segment {
                start: start as i64 - self.window,
                len: i - start,
            };
            let slot = &mut best[usize::from(!open)];
            if slot.map_or(true, |b| seg.len > b.len) {
                *slot = Some(seg);
            }
        }
        (best[0], best[1])
    }
}

/// Coset `H_A·(f, n)` of `H_A = F_2^{⊕A}`, stored as `(f|_{Aᶜ}, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathCoset {
    pub lamps: BTreeMap<i64, Word>,
    pub shift: i64,
}

impl WreathCoset {
    pub fn at_shift(shift: i64) -> Self {
        WreathCoset {
            lamps: BTreeMap::new(),
            shift,
        }
    }
}

/// Schreier graph of `H_A ≤ F_2^{⊕ℤ} ⋊ ℤ` for `A ⊆ [-W, W]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathOracle {
    window: i64,
    mask: Vec<bool>,
}

/// Oracle for `H_A` with `A` the open sites of the sample.
pub fn wreath_percolation_oracle(sample: &PercolationSample) -> WreathOracle {
    WreathOracle {
        window: sample.window,
        mask: sample.mask(),
    }
}

impl WreathOracle {
    /// `H_A` for an explicit `A ⊆ [-W, W]`.
    pub fn from_set<I: IntoIterator<Item = i64>>(set: I, window: i64) -> Result<Self> {
        if window < 0 {
            return Err(Error::invalid("window must be nonnegative"));
        }
        let mut mask = vec![false; (2 * window + 1) as usize];
        for s in set {
            if s.abs() > window {
                return Err(Error::WindowExceeded {
                    position: s,
                    window,
                });
            }
            mask[(s + window) as usize] = true;
        }
        Ok(WreathOracle { window, mask })
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn in_set(&self, site: i64) -> bool {
        site.abs() <= self.window && self.mask[(site + self.window) as usize]
    }

    pub fn set(&self) -> Vec<i64> {
        (-self.window..=self.window)
            .filter(|&s| self.in_set(s))
            .collect()
    }

    /// `(f, n) ∈ H_A` iff `n = 0` and `supp f ⊆ A`.
    pub fn contains_element(&self, e: &WreathElement) -> bool {
        e.shift() == 0 && e.support().keys().all(|&k| self.in_set(k))
    }
}

impl SubgroupOracle for WreathOracle {
    type Coset = WreathCoset;

    fn family(&self) -> Family {
        Family::Wreath
    }

    fn root(&self) -> WreathCoset {
        WreathCoset::at_shift(0)
    }

    fn act(&self, g: Generator, c: &WreathCoset) -> Result<WreathCoset> {
        check_generator(Family::Wreath, g)?;
        let mut next = c.clone();
        if g.index() == 0 {
            next.shift += g.sign() as i64;
            if next.shift.abs() > self.window {
                return Err(Error::WindowExceeded {
                    position: next.shift,
                    window: self.window,
                });
            }
        } else if !self.in_set(c.shift) {
            let letter = Generator::new(g.index() - 1, g.is_inverse());
            let lamp = next.lamps.entry(c.shift).or_default();
            lamp.push(letter);
            if lamp.is_identity() {
                next.lamps.remove(&c.shift);
            }
        }
        Ok(next)
    }
}

/// Stabilizer of point 0 under `d` permutations of `{0, …, N−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationOracle {
    perms: Vec<Vec<u32>>,
    inverses: Vec<Vec<u32>>,
    seed: Option<u64>,
}

/// Uniform random `d`-tuple of permutations of `N` points, seeded.
pub fn permutation_stabilizer_oracle(n: usize, d: usize, seed: u64) -> Result<PermutationOracle> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("need at least one point and one generator"));
    }
    Ok(PermutationOracle::sample(n, d, seed))
}

impl PermutationOracle {
    pub(crate) fn sample(n: usize, d: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        let perms = (0..d)
            .map(|_| {
                let mut p: Vec<u32> = (0..n as u32).collect();
                p.shuffle(&mut r);
                p
            })
            .collect();
        let mut o = Self::from_permutations(perms).expect("shuffles are permutations");
        o.seed = Some(seed);
        o
    }

    /// Oracle from explicit images: `perms[i][x]` is `x · gᵢ`.
    pub fn from_permutations(perms: Vec<Vec<u32>>) -> Result<Self> {
        let n = perms
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("no permutations"))?;
        if n == 0 {
            return Err(Error::invalid("empty permutation"));
        }
        let mut inverses = Vec::with_capacity(perms.len());
        for p in &perms {
            if p.len() != n {
                return Err(Error::invalid("permutations of different sizes"));
            }
            let mut inv = vec![u32::MAX; n];
            for (x, &y) in p.iter().enumerate() {
                if y as usize >= n || inv[y as usize] != u32::MAX {
                    return Err(Error::invalid("not a permutation"));
                }
                inv[y as usize] = x as u32;
            }
            inverses.push(inv);
        }
        Ok(PermutationOracle {
            perms,
            inverses,
            seed: None,
        })
    }

    pub fn points(&self) -> usize {
        self.perms[0].len()
    }

    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Index of the stabilizer: the size of the orbit of point 0.
    pub fn orbit_size(&self) -> usize {
        let mut seen = vec![false; self.points()];
        seen[0] = true;
        let mut stack = vec![0u32];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for p in self.perms.iter().chain(&self.inverses) {
                let y = p[x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}

impl SubgroupOracle for PermutationOracle {
    type Coset = u32;

    fn family(&self) -> Family {
        Family::Free {
            rank: self.perms.len(),
        }
    }

    fn root(&self) -> u32 {
        0
    }

    fn act(&self, g: Generator, &x: &u32) -> Result<u32> {
        check_generator(self.family(), g)?;
        let table = if g.is_inverse() {
            &self.inverses
        } else {
            &self.perms
        };
        Ok(table[g.index()][x as usize])
    }
}

/// Kernel of `F_d → ℤ`, generator `i` ↦ `weights[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelOracle {
    weights: Vec<i64>,
}

/// See [`KernelOracle`].
pub fn kernel_to_z_oracle(weights: &[i64]) -> Result<KernelOracle> {
    KernelOracle::new(weights.to_vec())
}

impl KernelOracle {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::invalid(
                "all-zero weights give the whole group; use a whole-group oracle",
            ));
        }
        Ok(KernelOracle { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
}

impl SubgroupOracle for KernelOracle {
    type Coset = i64;

    fn family(&self) -> Family {
        Family::Free {
            rank: self.weights.len(),
        }
    }

    fn root(&self) -> i64 {
        0
    }

    fn act(&self, g: Generator, &k: &i64) -> Result<i64> {
        check_generator(self.family(), g)?;
        Ok(k + g.sign() as i64 * self.weights[g.index()])
    }
}

/// Serialized sample `{family, params, seed, data}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub family: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub data: serde_json::Value,
}

/// A sampled subgroup that can be written to and rebuilt from a [`SampleRecord`].
#[derive(Clone, Debug, PartialEq)]
pub enum IrsSample {
    Percolation(PercolationSample),
    Permutation(PermutationOracle),
}

impl IrsSample {
    pub fn to_record(&self) -> SampleRecord {
        match self {
            IrsSample::Percolation(s) => SampleRecord {
                family: "percolation".into(),
                params: json!({ "p": s.p, "window": s.window }),
                seed: Some(s.seed),
                data: json!(s.sites),
            },
            IrsSample::Permutation(o) => SampleRecord {
                family: "permutation".into(),
                params: json!({ "n": o.points(), "d": o.perms.len() }),
                seed: o.seed,
                data: json!(o.perms),
            },
        }
    }

    pub fn from_record(rec: &SampleRecord) -> Result<Self> {
        let bad = |what: &str| Error::parse(format!("sample record: {what}"));
        match rec.family.as_str() {
            "percolation" => {
                let p = rec.params["p"].as_f64().ok_or_else(|| bad("missing p"))?;
                let window = rec.params["window"]
                    .as_i64()
                    .ok_or_else(|| bad("missing window"))?;
                let sites: Vec<i64> = serde_json::from_value(rec.data.clone())?;
                let oracle = WreathOracle::from_set(sites.iter().copied(), window)?;
                Ok(IrsSample::Percolation(PercolationSample {
                    p,
                    window,
                    seed: rec.seed.unwrap_or(0),
                    sites: oracle.set(),
                }))
            }
            "permutation" => {
                let perms: Vec<Vec<u32>> = serde_json::from_value(rec.data.clone())?;
                let mut o = PermutationOracle::from_permutations(perms)?;
                o.seed = rec.seed;
                Ok(IrsSample::Permutation(o))
            }
            other => Err(bad(&format!("unknown family {other:?}"))),
        }
    }
}
