//! Subgroup oracles and finite windows of Schreier graphs.
//!
//! A [`SubgroupOracle`] describes the right action of the generators on the
//! coset space `H\Γ` through canonical, hashable coset ids. Balls, boundaries,
//! product graphs and double cosets are all computed from that action alone.
//!
//! Cosets are right cosets `Hγ` with the generators acting on the right:
//! `Hγ · s = Hγs`. The root is `H` itself, so a word returns the root to
//! itself exactly when it lies in `H`.

mod ball;
mod double_coset;
mod folner;

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Generator, Word};
use crate::stallings::StallingsAutomaton;

pub use ball::{
    generate_ball, generate_ball_from, BallOptions, BallSummary, SchreierBall, DEFAULT_VERTEX_CAP,
};
pub use double_coset::{enumerate_double_cosets, DoubleCoset, DoubleCosetOptions};
pub use folner::{
    folner_defect, folner_search, interior_boundary, interior_via_complement, ComponentSet,
    FolnerResult,
};

/// Which group the oracle's generators belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    /// `F_d` with generators `a, b, …`.
    Free { rank: usize },
    /// `F_2^{⊕ℤ} ⋊ ℤ` with generators `s, a, b`.
    Wreath,
}

impl Family {
    /// Number of positive generators `d`; the symmetric set has `2d` letters.
    pub fn rank(self) -> usize {
        match self {
            Family::Free { rank } => rank,
            Family::Wreath => crate::group::WREATH_RANK,
        }
    }

    pub fn alphabet(self) -> Vec<char> {
        match self {
            Family::Free { rank } => (0..rank).map(|i| (b'a' + i as u8) as char).collect(),
            Family::Wreath => crate::group::WREATH_ALPHABET.to_vec(),
        }
    }

    pub fn format_letters(self, letters: &[Generator]) -> String {
        if letters.is_empty() {
            return "1".into();
        }
        let alphabet = self.alphabet();
        letters.iter().map(|g| g.to_char_in(&alphabet)).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Free { rank } => write!(f, "F{rank}"),
            Family::Wreath => f.write_str("wreath"),
        }
    }
}

/// Right action of a finitely generated group on the cosets of a subgroup.
///
/// Implementations must satisfy `act(g⁻¹, act(g, c)) = c`.
pub trait SubgroupOracle {
    type Coset: Clone + Eq + Hash + fmt::Debug;

    fn family(&self) -> Family;

    /// The coset `H` itself.
    fn root(&self) -> Self::Coset;

    fn act(&self, g: Generator, coset: &Self::Coset) -> Result<Self::Coset>;

    fn rank(&self) -> usize {
        self.family().rank()
    }

    fn act_word(&self, letters: &[Generator], coset: &Self::Coset) -> Result<Self::Coset> {
        letters
            .iter()
            .try_fold(coset.clone(), |c, &g| self.act(g, &c))
    }

    /// `w ∈ H` iff `w` fixes the root coset.
    fn contains(&self, letters: &[Generator]) -> Result<bool> {
        let root = self.root();
        Ok(self.act_word(letters, &root)? == root)
    }
}

impl<O: SubgroupOracle + ?Sized> SubgroupOracle for &O {
    type Coset = O::Coset;
    fn family(&self) -> Family {
        (**self).family()
    }
    fn root(&self) -> Self::Coset {
        (**self).root()
    }
    fn act(&self, g: Generator, coset: &Self::Coset) -> Result<Self::Coset> {
        (**self).act(g, coset)
    }
}

impl<O: SubgroupOracle + ?Sized> SubgroupOracle for Arc<O> {
    type Coset = O::Coset;
    fn family(&self) -> Family {
        (**self).family()
    }
    fn root(&self) -> Self::Coset {
        (**self).root()
    }
    fn act(&self, g: Generator, coset: &Self::Coset) -> Result<Self::Coset> {
        (**self).act(g, coset)
    }
}

pub(crate) fn check_generator(family: Family, g: Generator) -> Result<()> {
    if g.index() >= family.rank() {
        Err(Error::GeneratorOutOfRange {
            index: g.index(),
            rank: family.rank(),
        })
    } else {
        Ok(())
    }
}

/// `H = Γ`: a single coset fixed by everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WholeGroupOracle {
    family: Family,
}

impl WholeGroupOracle {
    pub fn new(family: Family) -> Self {
        WholeGroupOracle { family }
    }
}

impl SubgroupOracle for WholeGroupOracle {
    type Coset = ();

    fn family(&self) -> Family {
        self.family
    }

    fn root(&self) {}

    fn act(&self, g: Generator, _: &()) -> Result<()> {
        check_generator(self.family, g)
    }
}

/// Coset of a finitely generated `H ≤ F_d`: a state of the Stallings
/// automaton plus the reduced tail read after leaving the automaton. The tail
/// is empty for cosets on the core; otherwise its first letter has no
/// transition from `state`, which makes the pair canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutomatonCoset {
    pub state: u32,
    pub tail: Word,
}

/// Schreier graph of a subgroup given by its Stallings automaton: the
/// automaton with an infinite tree hanging off every missing direction.
#[derive(Clone, Debug)]
pub struct AutomatonOracle {
    automaton: Arc<StallingsAutomaton>,
}

impl AutomatonOracle {
    pub fn new(automaton: StallingsAutomaton) -> Self {
        AutomatonOracle {
            automaton: Arc::new(automaton),
        }
    }

    pub fn automaton(&self) -> &StallingsAutomaton {
        &self.automaton
    }
}

impl SubgroupOracle for AutomatonOracle {
    type Coset = AutomatonCoset;

    fn family(&self) -> Family {
        Family::Free {
            rank: self.automaton.rank(),
        }
    }

    fn root(&self) -> AutomatonCoset {
        AutomatonCoset {
            state: 0,
            tail: Word::identity(),
        }
    }

    fn act(&self, g: Generator, c: &AutomatonCoset) -> Result<AutomatonCoset> {
        check_generator(self.family(), g)?;
        let mut next = c.clone();
        if c.tail.is_empty() {
            match self.automaton.transition(c.state as usize, g) {
                Some(t) => next.state = t as u32,
                None => next.tail.push(g),
            }
        } else {
            next.tail.push(g);
        }
        Ok(next)
    }
}

/// Diagonal action on pairs of cosets. The component of the root pair is the
/// Schreier graph of `H₁ ∩ H₂`; the component of `(H₁, H₂g)` is that of
/// `H₁ ∩ H₂^g`.
#[derive(Clone, Debug)]
pub struct ProductOracle<A, B> {
    first: A,
    second: B,
}

impl<A: SubgroupOracle, B: SubgroupOracle> ProductOracle<A, B> {
    pub fn new(first: A, second: B) -> Result<Self> {
        if first.family() != second.family() {
            return Err(Error::FamilyMismatch(format!(
                "product of {} and {} oracles",
                first.family(),
                second.family()
            )));
        }
        Ok(ProductOracle { first, second })
    }

    pub fn first(&self) -> &A {
        &self.first
    }

    pub fn second(&self) -> &B {
        &self.second
    }
}

/// Builds the diagonal product oracle, rejecting mismatched families.
pub fn product_oracle<A: SubgroupOracle, B: SubgroupOracle>(
    o1: A,
    o2: B,
) -> Result<ProductOracle<A, B>> {
    ProductOracle::new(o1, o2)
}

impl<A: SubgroupOracle, B: SubgroupOracle> SubgroupOracle for ProductOracle<A, B> {
    type Coset = (A::Coset, B::Coset);

    fn family(&self) -> Family {
        self.first.family()
    }

    fn root(&self) -> Self::Coset {
        (self.first.root(), self.second.root())
    }

    fn act(&self, g: Generator, (c1, c2): &Self::Coset) -> Result<Self::Coset> {
        Ok((self.first.act(g, c1)?, self.second.act(g, c2)?))
    }
}

/// Stallings automaton of a finite-index subgroup from its finite Schreier graph.
pub fn automaton_from_finite_oracle<O: SubgroupOracle>(
    oracle: &O,
    vertex_cap: usize,
) -> Result<StallingsAutomaton> {
    let rank = match oracle.family() {
        Family::Free { rank } => rank,
        Family::Wreath => {
            return Err(Error::invalid(
                "Stallings automata exist only for free groups",
            ))
        }
    };
    let ball = generate_ball_with_cap(oracle, vertex_cap)?;
    if ball.is_truncated() {
        return Err(Error::invalid("Schreier graph is infinite"));
    }
    let mut graph = crate::stallings::LabeledGraph {
        rank,
        num_vertices: ball.len(),
        base: 0,
        edges: Vec::new(),
    };
    for v in 0..ball.len() {
        for l in 0..rank {
            let t = ball
                .neighbor(v, Generator::positive(l).slot())
                .expect("complete ball");
            graph.edges.push((v, l, t));
        }
    }
    Ok(StallingsAutomaton::fold(&graph))
}

fn generate_ball_with_cap<O: SubgroupOracle>(
    oracle: &O,
    vertex_cap: usize,
) -> Result<SchreierBall<O::Coset>> {
    let opts = BallOptions {
        vertex_cap,
        track_halo: false,
    };
    // A finite Schreier graph has diameter below its vertex count.
    ball::generate_ball_from_with(oracle, oracle.root(), vertex_cap, &opts)
}
