use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Graphing, PartialBijection};
use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Phase classes allowed per map before odd cycles are broken into `B`.
pub const DEFAULT_CLASS_CAP: usize = 64;

/// `X = B ⊔ A_1 ⊔ … ⊔ A_N` with `A_j ∩ φ_i(A_j ∩ U_i) ⊆ Fix(φ_i)` for all `i, j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RokhlinPartition<W> {
    pub b: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub b_weight: W,
    /// Requested bound on `ν(B)/ν(X)`.
    pub delta: f64,
    /// Class cap actually used for each map (raised above the configured cap
    /// when breaking cycles would overspend the budget).
    pub class_caps: Vec<usize>,
}

impl<W: Weight> RokhlinPartition<W> {
    /// Checks the three defining properties with exact set operations.
    pub fn verify(&self, g: &Graphing<W>) -> Result<()> {
        let mut owner = vec![usize::MAX; g.points()];
        for (j, set) in std::iter::once(&self.b).chain(&self.classes).enumerate() {
            for &x in set {
                if owner[x] != usize::MAX {
                    return Err(Error::invalid(format!("point {x} lies in two parts")));
                }
                owner[x] = j;
            }
        }
        if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::invalid(format!("point {x} is not covered")));
        }
        let bound = W::from_f64(self.delta)
            .ok_or_else(|| Error::invalid("delta not representable"))?
            * g.total_weight();
        if g.mass(&self.b) > bound {
            return Err(Error::invalid("weight of B exceeds delta"));
        }
        for m in g.maps() {
            for (x, y) in m.pairs() {
                // owner 0 is B, which carries no constraint
                if x != y && owner[x] != 0 && owner[x] == owner[y] {
                    return Err(Error::invalid(format!(
                        "map {} keeps {x} -> {y} inside one class",
                        m.label
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn rokhlin_partition<W: Weight>(g: &Graphing<W>, delta: f64) -> Result<RokhlinPartition<W>> {
    rokhlin_partition_with(g, delta, DEFAULT_CLASS_CAP)
}

/// Per-map colouring: chain parity, cycle phases, fixed points with parity 0,
/// then the product partition over maps. `δ` is relative to `ν(X)` and is
/// split evenly between the maps.
pub fn rokhlin_partition_with<W: Weight>(
    g: &Graphing<W>,
    delta: f64,
    class_cap: usize,
) -> Result<RokhlinPartition<W>> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let k = g.maps().len().max(1);
    let budget = W::from_f64(delta / k as f64)
        .ok_or_else(|| Error::invalid("delta not representable"))?
        * g.total_weight();
    let mut colours: Vec<Vec<u32>> = Vec::with_capacity(g.maps().len());
    let mut in_b = vec![false; g.points()];
    let mut class_caps = Vec::new();
    for m in g.maps() {
        let (c, broken, cap) = colour_map(g, m, &budget, class_cap);
        broken.into_iter().for_each(|x| in_b[x] = true);
        colours.push(c);
        class_caps.push(cap);
    }
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut b = Vec::new();
    for x in 0..g.points() {
        if in_b[x] {
            b.push(x);
            continue;
        }
        let key: Vec<u32> = colours.iter().map(|c| c[x]).collect();
        let next = classes.len();
        let j = *index.entry(key).or_insert(next);
        if j == next {
            classes.push(Vec::new());
        }
        classes[j].push(x);
    }
    let b_weight = g.mass(&b);
    Ok(RokhlinPartition {
        b,
        classes,
        b_weight,
        delta,
        class_caps,
    })
}

/// Colours for one map plus the points it sends to `B` and the cap used.
/// Colours 0 and 1 are chain parities; odd cycles of period `p` kept as
/// phase classes get colours `2 + offset(p) + phase`.
fn colour_map<W: Weight>(
    g: &Graphing<W>,
    m: &PartialBijection,
    budget: &W,
    cap: usize,
) -> (Vec<u32>, Vec<usize>, usize) {
    let n = g.points();
    let mut colour = vec![u32::MAX; n];
    // chains: walk back from every point that leaves the domain
    for end in (0..n).filter(|&x| m.apply(x).is_none()) {
        let mut x = end;
        let mut steps = 0u32;
        loop {
            colour[x] = steps % 2;
            match m.apply_inverse(x) {
                Some(p) => {
                    x = p;
                    steps += 1;
                }
                None => break,
            }
        }
    }
    // cycles, each listed from its least point
    let mut odd_cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if colour[start] != u32::MAX {
            continue;
        }
        let mut cycle = vec![start];
        let mut x = m.apply(start).expect("point on a cycle");
        while x != start {
            cycle.push(x);
            x = m.apply(x).expect("point on a cycle");
        }
        if cycle.len() % 2 == 0 || cycle.len() == 1 {
            for (i, &y) in cycle.iter().enumerate() {
                colour[y] = (i % 2) as u32;
            }
        } else {
            for &y in &cycle {
                colour[y] = u32::MAX - 1;
            }
            odd_cycles.push(cycle);
        }
    }
    let periods: BTreeSet<usize> = odd_cycles.iter().map(Vec::len).collect();
    // break cost of each period: one point (the least) per cycle
    let cost = |p: usize| -> W {
        odd_cycles
            .iter()
            .filter(|c| c.len() == p)
            .map(|c| g.weight(c[0]).clone())
            .sum()
    };
    let mut kept: Vec<usize> = Vec::new();
    let mut classes = 2;
    let mut dropped: Vec<usize> = Vec::new();
    for &p in &periods {
        if classes + p <= cap {
            kept.push(p);
            classes += p;
        } else {
            dropped.push(p);
        }
    }
    let mut spent: W = dropped.iter().map(|&p| cost(p)).sum();
    // over budget: keep the smallest dropped periods as phase classes too
    while spent > *budget {
        let p = dropped.remove(0);
        spent = spent - cost(p);
        kept.push(p);
        classes += p;
    }
    let used_cap = cap.max(classes);
    let mut offset: HashMap<usize, u32> = HashMap::new();
    let mut next = 2u32;
    for &p in &kept {
        offset.insert(p, next);
        next += p as u32;
    }
    let mut broken = Vec::new();
    for cycle in &odd_cycles {
        let p = cycle.len();
        match offset.get(&p) {
            Some(&base) => {
                for (i, &y) in cycle.iter().enumerate() {
                    colour[y] = base + i as u32;
                }
            }
            None => {
                broken.push(cycle[0]);
                // the rest is a chain ending just before the removed point
                for (i, &y) in cycle.iter().enumerate().skip(1) {
                    colour[y] = ((p - 1 - i) % 2) as u32;
                }
                colour[cycle[0]] = 0;
            }
        }
    }
    (colour, broken, used_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphing::random_graphing;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle_text(n: usize) -> String {
        let pairs: Vec<String> = (0..n).map(|x| format!("{x} -> {}", (x + 1) % n)).collect();
        format!("points {n}\nmap r: {}", pairs.join(", "))
    }

    #[test]
    fn even_cycle_two_colours() {
        let g: Graphing<f64> = cycle_text(12).parse().unwrap();
        let r = rokhlin_partition(&g, 0.01).unwrap();
        assert!(r.b.is_empty());
        assert_eq!(
            r.classes,
            vec![vec![0, 2, 4, 6, 8, 10], vec![1, 3, 5, 7, 9, 11]]
        );
        r.verify(&g).unwrap();
    }

    #[test]
    fn five_cycle_phases() {
        let g: Graphing<f64> = cycle_text(5).parse().unwrap();
        let r = rokhlin_partition(&g, 0.1).unwrap();
        assert!(r.b.is_empty());
        assert_eq!(r.classes.len(), 5);
        let phi = &g.maps()[0];
        for j in 0..5 {
            let image: Vec<usize> = r.classes[j]
                .iter()
                .map(|&x| phi.apply(x).unwrap())
                .collect();
            assert_eq!(image, r.classes[(j + 1) % 5]);
        }
        r.verify(&g).unwrap();
    }

    #[test]
    fn identity_is_one_class() {
        let g: Graphing<f64> = "points 4\nmap id: 0 -> 0, 1 -> 1, 2 -> 2, 3 -> 3"
            .parse()
            .unwrap();
        let r = rokhlin_partition(&g, 0.5).unwrap();
        assert!(r.b.is_empty());
        assert_eq!(r.classes, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn large_odd_periods_absorbed_or_cap_raised() {
        // one 101-cycle among 1000 fixed points: breaking it costs 1/1101
        let mut pairs: Vec<String> = (0..101)
            .map(|x| format!("{x} -> {}", (x + 1) % 101))
            .collect();
        pairs.extend((101..1101).map(|x| format!("{x} -> {x}")));
        let g: Graphing<f64> = format!("points 1101\nmap r: {}", pairs.join(", "))
            .parse()
            .unwrap();
        let r = rokhlin_partition(&g, 0.01).unwrap();
        assert_eq!(r.b, vec![0]);
        assert_eq!(r.class_caps, vec![DEFAULT_CLASS_CAP]);
        r.verify(&g).unwrap();
        // a budget too small for the break forces phase classes
        let tight = rokhlin_partition(&g, 1e-4).unwrap();
        assert!(tight.b.is_empty());
        assert_eq!(tight.class_caps, vec![103]);
        tight.verify(&g).unwrap();
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let g: Graphing<f64> = cycle_text(3).parse().unwrap();
        assert!(rokhlin_partition(&g, 0.0).is_err());
    }

    #[test]
    fn random_graphings_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = random_graphing(&mut rng, 500, 3, 0.7);
            let r = rokhlin_partition(&g, 0.1).unwrap();
            r.verify(&g).unwrap();
        }
    }

    proptest! {
        #[test]
        fn partition_invariants_hold(seed in any::<u64>(), points in 1usize..300, maps in 1usize..4, density in 0.1f64..1.0, delta in 0.01f64..0.5) {
            let g = random_graphing(&mut ChaCha8Rng::seed_from_u64(seed), points, maps, density);
            let r = rokhlin_partition(&g, delta).unwrap();
            prop_assert!(r.verify(&g).is_ok());
        }
    }

    #[test]
    fn exact_weights() {
        let g: Graphing<BigRational> =
            "points 3\nweights 1/3 1/3 1/3\nmap r: 0 -> 1, 1 -> 2, 2 -> 0"
                .parse()
                .unwrap();
        let r = rokhlin_partition_with(&g, 0.5, 2).unwrap();
        assert_eq!(r.b, vec![0]);
        r.verify(&g).unwrap();
    }
}
