use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{ball, BallOptions, ProductOracle, SubgroupOracle, DEFAULT_VERTEX_CAP};
use crate::error::Result;
use crate::group::Generator;

#[derive(Clone, Copy, Debug)]
pub struct DoubleCosetOptions {
    /// Radius of the ball explored inside each component; `None` means `2R + 2`.
    pub explore_radius: Option<usize>,
    pub vertex_cap: usize,
}

impl Default for DoubleCosetOptions {
    fn default() -> Self {
        DoubleCosetOptions {
            explore_radius: None,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// One component of the product Schreier graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCoset {
    /// Shortest `g` with `(H₁, H₂g)` in this component.
    pub representative: Vec<Generator>,
    /// `representative` spelled in the family alphabet.
    pub word: String,
    /// Vertices found within the explore radius.
    pub explored_vertices: usize,
    /// The whole component fits in the explore radius.
    pub complete: bool,
    /// Component size, known only when complete.
    pub size: Option<usize>,
}

/// Components of the diagonal action on `H₁\Γ × H₂\Γ` through the pairs
/// `(H₁, H₂g)` with `|g| ≤ R`, each listed once with a shortest representative.
///
/// Two start pairs are merged when one is reached while exploring the other.
/// For components larger than the explore radius this is a sufficient test
/// only, so incomplete entries may name the same double coset twice.
pub fn enumerate_double_cosets<A, B>(
    o1: A,
    o2: B,
    radius: usize,
    opts: &DoubleCosetOptions,
) -> Result<Vec<DoubleCoset>>
where
    A: SubgroupOracle,
    B: SubgroupOracle,
{
    let family = o1.family();
    let second = ball::generate_ball_from_with(
        &o2,
        o2.root(),
        radius,
        &BallOptions {
            vertex_cap: opts.vertex_cap,
            track_halo: false,
        },
    )?;
    let product = ProductOracle::new(o1, o2)?;
    let explore = opts.explore_radius.unwrap_or(2 * radius + 2);
    let ball_opts = BallOptions {
        vertex_cap: opts.vertex_cap,
        track_halo: false,
    };
    let root1 = product.first().root();
    let mut seen: HashSet<(A::Coset, B::Coset)> = HashSet::new();
    let mut out = Vec::new();
    for v in 0..second.len() {
        let start = (root1.clone(), second.coset(v).clone());
        if seen.contains(&start) {
            continue;
        }
        let comp = ball::generate_ball_from_with(&product, start, explore, &ball_opts)?;
        let complete = !comp.is_truncated();
        let representative = second.word_to(v);
        out.push(DoubleCoset {
            word: family.format_letters(&representative),
            representative,
            explored_vertices: comp.len(),
            complete,
            size: complete.then_some(comp.len()),
        });
        seen.extend(comp.cosets().iter().cloned());
    }
    Ok(out)
}
