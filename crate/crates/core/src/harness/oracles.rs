use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Generator, Word};
use crate::irs::{
    kernel_to_z_oracle, permutation_stabilizer_oracle, sample_bernoulli_percolation,
    wreath_percolation_oracle, KernelOracle, PermutationOracle, WreathCoset, WreathOracle,
};
use crate::schreier::{
    automaton_from_finite_oracle, AutomatonCoset, AutomatonOracle, Family, SubgroupOracle,
    WholeGroupOracle,
};
use crate::stallings::StallingsAutomaton;

/// Textual description of a subgroup oracle: `kind[:key=value;key=value]`.
///
/// | kind          | keys                        | subgroup                          |
/// |---------------|-----------------------------|-----------------------------------|
/// | `whole`       | `d` or the flag `wreath`    | `Γ`                               |
/// | `trivial`     | `d`                         | `{1} ≤ F_d`                       |
/// | `automaton`   | `d`, `gens` (comma words)   | `⟨gens⟩ ≤ F_d`                    |
/// | `kernel`      | `weights`                   | kernel of `F_d → ℤ`               |
/// | `perm`        | `n`, `d`, `seed`            | random point stabiliser           |
/// | `percolation` | `p`, `w`, `seed`            | `H_A` for Bernoulli `A ⊆ [-w, w]` |
/// | `wreath`      | `a` (ranges), `w`           | `H_A` for an explicit `A`         |
///
/// Ranges in `a` are inclusive: `0..9,15` is `{0, …, 9, 15}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

impl OracleSpec {
    pub fn is_seeded(&self) -> bool {
        matches!(self.kind.as_str(), "perm" | "percolation")
    }

    /// Copy with `seed` set, unless the spec pins one already.
    pub fn with_default_seed(&self, seed: u64) -> OracleSpec {
        let mut out = self.clone();
        if self.is_seeded() {
            out.params
                .entry("seed".into())
                .or_insert_with(|| seed.to_string());
        }
        out
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(format!("oracle `{}` needs `{key}=`", self.kind)))
    }

    fn num<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| Error::parse(format!("bad value `{raw}` for `{key}`")))
    }

    fn num_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        if self.params.contains_key(key) {
            self.num(key)
        } else {
            Ok(default)
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::parse(format!(
                "oracle `{}` has no key `{k}`",
                self.kind
            ))),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<AnyOracle> {
        match self.kind.as_str() {
            "whole" => {
                self.check_keys(&["d", "wreath"])?;
                let family = if self.params.contains_key("wreath") {
                    Family::Wreath
                } else {
                    Family::Free {
                        rank: self.num_or("d", 2)?,
                    }
                };
                Ok(AnyOracle::Whole(WholeGroupOracle::new(family)))
            }
            "trivial" => {
                self.check_keys(&["d"])?;
                let d = self.num_or("d", 2)?;
                Ok(AnyOracle::Automaton(AutomatonOracle::new(
                    StallingsAutomaton::trivial(d),
                )))
            }
            "automaton" => {
                self.check_keys(&["d", "gens"])?;
                let d = self.num_or("d", 2)?;
                let gens = self
                    .get("gens")
                    .unwrap_or("")
                    .split(',')
                    .map(str::trim)
                    .filter(|w| !w.is_empty())
                    .map(Word::from_str)
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyOracle::Automaton(AutomatonOracle::new(
                    StallingsAutomaton::build(&gens, d)?,
                )))
            }
            "kernel" => {
                self.check_keys(&["weights"])?;
                let weights = parse_list::<i64>(self.require("weights")?)?;
                Ok(AnyOracle::Kernel(kernel_to_z_oracle(&weights)?))
            }
            "perm" => {
                self.check_keys(&["n", "d", "seed"])?;
                let o = permutation_stabilizer_oracle(
                    self.num("n")?,
                    self.num_or("d", 2)?,
                    self.num_or("seed", 0)?,
                )?;
                Ok(AnyOracle::Permutation(o))
            }
            "percolation" => {
                self.check_keys(&["p", "w", "seed"])?;
                let sample = sample_bernoulli_percolation(
                    self.num("p")?,
                    self.num_or("w", 1000)?,
                    self.num_or("seed", 0)?,
                )?;
                Ok(AnyOracle::Wreath(wreath_percolation_oracle(&sample)))
            }
            "wreath" => {
                self.check_keys(&["a", "w"])?;
                let set = parse_ranges(self.get("a").unwrap_or(""))?;
                Ok(AnyOracle::Wreath(WreathOracle::from_set(
                    set,
                    self.num_or("w", 1000)?,
                )?))
            }
            other => Err(Error::parse(format!("unknown oracle kind `{other}`"))),
        }
    }
}

impl FromStr for OracleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        if kind.is_empty() {
            return Err(Error::parse("empty oracle spec"));
        }
        let mut params = BTreeMap::new();
        for item in rest.split(';').map(str::trim).filter(|i| !i.is_empty()) {
            let (k, v) = item.split_once('=').unwrap_or((item, ""));
            if params
                .insert(k.trim().to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(Error::parse(format!("key `{}` given twice", k.trim())));
            }
        }
        Ok(OracleSpec {
            kind: kind.trim().to_string(),
            params,
        })
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        let mut sep = ':';
        for (k, v) in &self.params {
            if v.is_empty() {
                write!(f, "{sep}{k}")?;
            } else {
                write!(f, "{sep}{k}={v}")?;
            }
            sep = ';';
        }
        Ok(())
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse()
                .map_err(|_| Error::parse(format!("bad list item `{x}`")))
        })
        .collect()
}

/// `0..9,15,20..22` → the inclusive union.
pub fn parse_ranges(s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let bad = || Error::parse(format!("bad range `{item}`"));
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
                if hi < lo {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Any of the library's oracles behind one type, so products and balls can
/// be built from runtime specs.
#[derive(Clone, Debug)]
pub enum AnyOracle {
    Whole(WholeGroupOracle),
    Automaton(AutomatonOracle),
    Kernel(KernelOracle),
    Permutation(PermutationOracle),
    Wreath(WreathOracle),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyCoset {
    Unit,
    Automaton(AutomatonCoset),
    Int(i64),
    Point(u32),
    Wreath(WreathCoset),
}

impl fmt::Display for AnyCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyCoset::Unit => f.write_str("H"),
            AnyCoset::Automaton(c) => {
                if c.tail.is_empty() {
                    write!(f, "q{}", c.state)
                } else {
                    write!(f, "q{}.{}", c.state, c.tail)
                }
            }
            AnyCoset::Int(k) => write!(f, "{k}"),
            AnyCoset::Point(p) => write!(f, "{p}"),
            AnyCoset::Wreath(c) => {
                let lamps: Vec<String> = c.lamps.iter().map(|(k, w)| format!("{k}:{w}")).collect();
                write!(f, "[{}]@{}", lamps.join(","), c.shift)
            }
        }
    }
}

impl AnyOracle {
    /// Automaton of the subgroup when it is finitely generated and known
    /// explicitly (free families only; finite permutation actions are
    /// converted through their Schreier graph).
    pub fn automaton(&self, vertex_cap: usize) -> Option<Result<StallingsAutomaton>> {
        match self {
            AnyOracle::Whole(o) => match o.family() {
                Family::Free { rank } => Some(Ok(StallingsAutomaton::whole_group(rank))),
                Family::Wreath => None,
            },
            AnyOracle::Automaton(o) => Some(Ok(o.automaton().clone())),
            AnyOracle::Permutation(o) => Some(automaton_from_finite_oracle(o, vertex_cap)),
            AnyOracle::Kernel(_) | AnyOracle::Wreath(_) => None,
        }
    }
}

impl SubgroupOracle for AnyOracle {
    type Coset = AnyCoset;

    fn family(&self) -> Family {
        match self {
            AnyOracle::Whole(o) => o.family(),
            AnyOracle::Automaton(o) => o.family(),
            AnyOracle::Kernel(o) => o.family(),
            AnyOracle::Permutation(o) => o.family(),
            AnyOracle::Wreath(o) => o.family(),
        }
    }

    fn root(&self) -> AnyCoset {
        match self {
            AnyOracle::Whole(_) => AnyCoset::Unit,
            AnyOracle::Automaton(o) => AnyCoset::Automaton(o.root()),
            AnyOracle::Kernel(o) => AnyCoset::Int(o.root()),
            AnyOracle::Permutation(o) => AnyCoset::Point(o.root()),
            AnyOracle::Wreath(o) => AnyCoset::Wreath(o.root()),
        }
    }

    fn act(&self, g: Generator, c: &AnyCoset) -> Result<AnyCoset> {
        match (self, c) {
            (AnyOracle::Whole(o), AnyCoset::Unit) => o.act(g, &()).map(|_| AnyCoset::Unit),
            (AnyOracle::Automaton(o), AnyCoset::Automaton(c)) => {
                o.act(g, c).map(AnyCoset::Automaton)
            }
            (AnyOracle::Kernel(o), AnyCoset::Int(c)) => o.act(g, c).map(AnyCoset::Int),
            (AnyOracle::Permutation(o), AnyCoset::Point(c)) => o.act(g, c).map(AnyCoset::Point),
            (AnyOracle::Wreath(o), AnyCoset::Wreath(c)) => o.act(g, c).map(AnyCoset::Wreath),
            _ => Err(Error::invalid("coset does not belong to this oracle")),
        }
    }
}
