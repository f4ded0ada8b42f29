use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::oracles::{parse_ranges, AnyOracle, OracleSpec};
use crate::error::{Error, Result};
use crate::group::{Generator, WreathElement, WREATH_ALPHABET};
use crate::irs::{WreathCoset, WreathOracle};
use crate::linalg::PowerOptions;
use crate::schreier::{
    enumerate_double_cosets, folner_defect, folner_search, generate_ball_from, product_oracle,
    BallOptions, DoubleCosetOptions, Family, SubgroupOracle,
};
use crate::spectral::{dirichlet_lower_bound_with, reduced_return_counts, SpectralEstimate};
use crate::stallings::StallingsAutomaton;

/// `"ok"`, `"cap: …"` for resource caps, `"error: …"` otherwise.
fn status_of(e: &Error) -> String {
    if e.is_resource_cap() {
        format!("cap: {e}")
    } else {
        format!("error: {e}")
    }
}

/// Runs `f` over `items` on up to `threads` workers; the output is in input
/// order whatever the scheduling.
pub fn sweep<I: Sync, T: Send>(items: &[I], threads: usize, f: impl Fn(&I) -> T + Sync) -> Vec<T> {
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let out = f(&items[i]);
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|x| x.expect("every item ran"))
        .collect()
}

/// Nearest-rank quantiles at 0, ¼, ½, ¾, 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Option<Quantiles> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |q: f64| v[((q * (v.len() - 1) as f64).round()) as usize];
        Some(Quantiles {
            min: v[0],
            q25: at(0.25),
            median: at(0.5),
            q75: at(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub vertices: usize,
    /// The ball is a whole finite component.
    pub finite: bool,
    pub converged: bool,
    pub residual: f64,
}

fn estimate<O: SubgroupOracle>(
    oracle: &O,
    start: O::Coset,
    config: &ExperimentConfig,
) -> Result<Estimate> {
    let opts = BallOptions {
        vertex_cap: config.vertex_cap,
        track_halo: false,
    };
    let ball = generate_ball_from(oracle, start, config.radius, &opts)?;
    let power = PowerOptions {
        tol: config.tol,
        max_iter: config.max_iter,
    };
    let est: SpectralEstimate<f64> = dirichlet_lower_bound_with(&ball, &power)?;
    Ok(Estimate {
        value: est.lower_bound,
        vertices: ball.len(),
        finite: !ball.is_truncated(),
        converged: est.converged,
        residual: est.residual,
    })
}

fn build(spec: &OracleSpec, seed: u64) -> Result<AnyOracle> {
    spec.with_default_seed(seed).build()
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremRow {
    pub seed: u64,
    pub status: String,
    pub h2_estimate: Option<f64>,
    pub intersection_estimate: Option<f64>,
    pub gap: Option<f64>,
    pub h2_vertices: Option<usize>,
    pub intersection_vertices: Option<usize>,
    /// The `H₂` ball is a whole finite Schreier graph, so `ρ(Γ/H₂) = 1`.
    pub h2_finite: Option<bool>,
    pub converged: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremSummary {
    pub runs: usize,
    pub ok: usize,
    pub gap: Option<Quantiles>,
    pub gap_threshold: f64,
    /// Fraction of successful seeds with `gap ≤ gap_threshold`.
    pub frequency_within: Option<f64>,
    /// Most negative gap; bounded below by the solver residual.
    pub min_gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub config: ExperimentConfig,
    pub rows: Vec<MainTheoremRow>,
    pub summary: MainTheoremSummary,
}

/// Per seed: Dirichlet estimates for `Γ/H₂` and for the component of the
/// root pair in the product (the Schreier graph of `H₁ ∩ H₂`), both at the
/// configured radius.
pub fn exp_main_theorem(config: &ExperimentConfig) -> Result<MainTheoremReport> {
    let (h1, h2) = (config.h1()?.clone(), config.h2()?.clone());
    let gap_threshold = config.extra_or("gap_threshold", 0.1)?;
    let rows = sweep(&config.seeds, config.threads, |&seed| {
        let mut row = MainTheoremRow {
            seed,
            status: "ok".into(),
            h2_estimate: None,
            intersection_estimate: None,
            gap: None,
            h2_vertices: None,
            intersection_vertices: None,
            h2_finite: None,
            converged: None,
        };
        let run = || -> Result<(Estimate, Estimate)> {
            let o1 = build(&h1, seed)?;
            let o2 = build(&h2, seed)?;
            let e2 = estimate(&o2, o2.root(), config)?;
            let prod = product_oracle(o1, o2)?;
            let ei = estimate(&prod, prod.root(), config)?;
            Ok((e2, ei))
        };
        match run() {
            Ok((e2, ei)) => {
                row.h2_estimate = Some(e2.value);
                row.intersection_estimate = Some(ei.value);
                row.gap = Some(e2.value - ei.value);
                row.h2_vertices = Some(e2.vertices);
                row.intersection_vertices = Some(ei.vertices);
                row.h2_finite = Some(e2.finite);
                row.converged = Some(e2.converged && ei.converged);
            }
            Err(e) => row.status = status_of(&e),
        }
        row
    });
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap).collect();
    let summary = MainTheoremSummary {
        runs: rows.len(),
        ok: gaps.len(),
        gap: Quantiles::of(&gaps),
        gap_threshold,
        frequency_within: (!gaps.is_empty()).then(|| {
            gaps.iter().filter(|&&g| g <= gap_threshold).count() as f64 / gaps.len() as f64
        }),
        min_gap: gaps.iter().copied().reduce(f64::min),
    };
    Ok(MainTheoremReport {
        config: config.clone(),
        rows,
        summary,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateRow {
    /// `g` with the component containing `(H₁, H₂g)`, i.e. `Γ/(H₁ ∩ H₂^g)`.
    pub representative: String,
    pub status: String,
    pub estimate: Option<f64>,
    pub vertices: Option<usize>,
    pub component_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupConjugatesReport {
    pub config: ExperimentConfig,
    pub double_coset_radius: usize,
    pub h2_estimate: f64,
    pub rows: Vec<ConjugateRow>,
    pub max_estimate: Option<f64>,
    pub argmax: Option<String>,
}

/// Dirichlet estimates of every product component met within
/// `double_coset_radius` of the root pair, with the maximum over them.
pub fn exp_sup_conjugates(config: &ExperimentConfig) -> Result<SupConjugatesReport> {
    let seed = config.seeds.first().copied().unwrap_or(0);
    let o1 = build(config.h1()?, seed)?;
    let o2 = build(config.h2()?, seed)?;
    let dc_radius = config.extra_or("double_coset_radius", 3usize)?;
    let h2_estimate = estimate(&o2, o2.root(), config)?.value;
    let opts = DoubleCosetOptions {
        explore_radius: None,
        vertex_cap: config.vertex_cap,
    };
    let cosets = enumerate_double_cosets(&o1, &o2, dc_radius, &opts)?;
    let prod = product_oracle(&o1, &o2)?;
    let rows = sweep(&cosets, config.threads, |dc| {
        let mut row = ConjugateRow {
            representative: if dc.word.is_empty() {
                "1".into()
            } else {
                dc.word.clone()
            },
            status: "ok".into(),
            estimate: None,
            vertices: None,
            component_size: dc.size,
        };
        let start = o2
            .act_word(&dc.representative, &o2.root())
            .map(|c2| (o1.root(), c2));
        match start.and_then(|s| estimate(&prod, s, config)) {
            Ok(e) => {
                row.estimate = Some(e.value);
                row.vertices = Some(e.vertices);
            }
            Err(e) => row.status = status_of(&e),
        }
        row
    });
    let best = rows
        .iter()
        .filter_map(|r| r.estimate.map(|v| (v, &r.representative)))
        .fold(None, |acc: Option<(f64, &String)>, (v, w)| match acc {
            Some((b, _)) if b >= v => acc,
            _ => Some((v, w)),
        });
    Ok(SupConjugatesReport {
        config: config.clone(),
        double_coset_radius: dc_radius,
        h2_estimate,
        max_estimate: best.map(|b| b.0),
        argmax: best.map(|b| b.1.clone()),
        rows,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FolnerRow {
    pub subgroup: String,
    /// `"interval"` (cosets with no lamps and shift in the segment) or `"search"`.
    pub candidate: String,
    pub segment_start: i64,
    pub segment_len: usize,
    pub set_size: Option<usize>,
    pub defect: Option<f64>,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WreathReport {
    pub config: ExperimentConfig,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub window: i64,
    pub length: usize,
    pub words_checked: u64,
    pub common_nontrivial: u64,
    pub first_common: Option<String>,
    pub folner: Vec<FolnerRow>,
    pub narrative: Vec<String>,
}

/// Longest run of consecutive integers in a sorted set, as `(start, len)`.
fn longest_run(set: &[i64]) -> Option<(i64, usize)> {
    let mut best: Option<(i64, usize)> = None;
    let mut i = 0;
    while i < set.len() {
        let mut j = i + 1;
        while j < set.len() && set[j] == set[j - 1] + 1 {
            j += 1;
        }
        if best.is_none_or(|(_, len)| j - i > len) {
            best = Some((set[i], j - i));
        }
        i = j;
    }
    best
}

/// Exhaustive scan of reduced words of length `1..=max_len` over `{s, a, b}^±`:
/// returns `(words checked, words in both subgroups that are nontrivial
/// elements, a shortest such word)`.
pub fn common_elements(
    ha: &WreathOracle,
    hb: &WreathOracle,
    max_len: usize,
) -> (u64, u64, Option<String>) {
    struct Scan<'a> {
        ha: &'a WreathOracle,
        hb: &'a WreathOracle,
        e: WreathElement,
        word: Vec<Generator>,
        checked: u64,
        common: u64,
        first: Option<String>,
    }
    fn dfs(s: &mut Scan<'_>, depth: usize) {
        if depth == 0 {
            return;
        }
        for slot in 0..6 {
            let g = Generator::from_slot(slot);
            if s.word.last().is_some_and(|&l| l.inverse() == g) {
                continue;
            }
            s.e.right_mul_generator(g).expect("wreath letter");
            s.word.push(g);
            s.checked += 1;
            if s.ha.contains_element(&s.e) && s.hb.contains_element(&s.e) && !s.e.is_identity() {
                s.common += 1;
                if s.first.as_ref().is_none_or(|f| s.word.len() < f.len()) {
                    s.first = Some(
                        s.word
                            .iter()
                            .map(|g| g.to_char_in(&WREATH_ALPHABET))
                            .collect(),
                    );
                }
            }
            dfs(s, depth - 1);
            s.word.pop();
            s.e.right_mul_generator(g.inverse()).expect("wreath letter");
        }
    }
    let mut scan = Scan {
        ha,
        hb,
        e: WreathElement::identity(),
        word: Vec::with_capacity(max_len),
        checked: 0,
        common: 0,
        first: None,
    };
    dfs(&mut scan, max_len);
    (scan.checked, scan.common, scan.first)
}

fn folner_rows(name: &str, oracle: &WreathOracle, radius: usize, cap: usize) -> Vec<FolnerRow> {
    let set = oracle.set();
    let Some((start, len)) = longest_run(&set) else {
        return vec![FolnerRow {
            subgroup: name.into(),
            candidate: "interval".into(),
            segment_start: 0,
            segment_len: 0,
            set_size: None,
            defect: None,
            status: "error: empty set".into(),
        }];
    };
    let row = |candidate: &str, r: Result<(usize, f64)>| {
        let (set_size, defect, status) = match r {
            Ok((n, d)) => (Some(n), Some(d), "ok".to_string()),
            Err(e) => (None, None, status_of(&e)),
        };
        FolnerRow {
            subgroup: name.into(),
            candidate: candidate.into(),
            segment_start: start,
            segment_len: len,
            set_size,
            defect,
            status,
        }
    };
    let centre = start + (len as i64 - 1) / 2;
    let opts = BallOptions {
        vertex_cap: cap,
        track_halo: true,
    };
    let ball = generate_ball_from(oracle, WreathCoset::at_shift(centre), radius, &opts);
    let ball = match ball {
        Ok(b) => b,
        Err(e) => {
            let msg = status_of(&e);
            return ["interval", "search"]
                .iter()
                .map(|c| {
                    let mut r = row(c, Ok((0, 0.0)));
                    r.set_size = None;
                    r.defect = None;
                    r.status = msg.clone();
                    r
                })
                .collect();
        }
    };
    let segment: Vec<usize> = (0..ball.len())
        .filter(|&v| {
            let c = ball.coset(v);
            c.lamps.is_empty() && c.shift >= start && c.shift < start + len as i64
        })
        .collect();
    let interval = folner_defect(&ball, &segment).map(|d| (segment.len(), d));
    let search = folner_search(&ball).map(|f| (f.set.members.len(), f.defect));
    vec![row("interval", interval), row("search", search)]
}

/// Two lamplighter-type subgroups `H_A`, `H_B` with disjoint `A`, `B`: an
/// exhaustive search for common nontrivial elements, and Følner sets for
/// each near its longest segment.
pub fn exp_wreath_counterexample(config: &ExperimentConfig) -> Result<WreathReport> {
    let window: i64 = config.extra_or("window", 50)?;
    let a = parse_ranges(config.extra_str("a").unwrap_or("0..9"))?;
    let b = parse_ranges(config.extra_str("b").unwrap_or("10..19"))?;
    let length: usize = config.extra_or("length", 10)?;
    let ha = WreathOracle::from_set(a.iter().copied(), window)?;
    let hb = WreathOracle::from_set(b.iter().copied(), window)?;
    let (words_checked, common_nontrivial, first_common) = common_elements(&ha, &hb, length);
    let mut folner = folner_rows("H_A", &ha, config.radius, config.vertex_cap);
    folner.extend(folner_rows("H_B", &hb, config.radius, config.vertex_cap));

    let mut narrative = vec![format!(
        "checked all {words_checked} reduced words of length 1..={length} over s, a, b and inverses"
    )];
    narrative.push(match &first_common {
        None => format!("no nontrivial element lies in both H_A and H_B up to length {length}"),
        Some(w) => {
            format!("{common_nontrivial} words give common nontrivial elements, first `{w}`")
        }
    });
    for r in &folner {
        if let Some(d) = r.defect {
            narrative.push(format!(
                "{} {} candidate near segment {}..{}: {} cosets, Følner defect {d:.4}",
                r.subgroup,
                r.candidate,
                r.segment_start,
                r.segment_start + r.segment_len as i64 - 1,
                r.set_size.unwrap_or(0)
            ));
        }
    }
    Ok(WreathReport {
        config: config.clone(),
        a,
        b,
        window,
        length,
        words_checked,
        common_nontrivial,
        first_common,
        folner,
        narrative,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CogrowthRow {
    pub seed: u64,
    pub status: String,
    pub n: usize,
    /// Estimate from closed reduced-word counts; `None` when every count
    /// past length 0 vanishes (trivial subgroup).
    pub alpha_h2: Option<f64>,
    pub alpha_intersection: Option<f64>,
    /// Perron value of the non-backtracking operator when both subgroups
    /// have explicit automata.
    pub alpha_h2_exact: Option<f64>,
    pub alpha_intersection_exact: Option<f64>,
    pub delta_h2: Option<f64>,
    pub delta_intersection: Option<f64>,
    /// `δ(H₁ ∩ H₂) / δ(H₂)`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CogrowthDiagnostics {
    pub seed: u64,
    /// Exact counts, decimal.
    pub counts_h2: Vec<String>,
    pub counts_intersection: Vec<String>,
    /// `(c_m / c_{m−2})^{1/2}` for each `m`, where defined.
    pub ratio_estimates: Vec<Option<f64>>,
    /// `c_m^{1/m}` for each `m ≥ 1`, where defined.
    pub root_estimates: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CogrowthReport {
    pub config: ExperimentConfig,
    pub rows: Vec<CogrowthRow>,
    pub diagnostics: Vec<CogrowthDiagnostics>,
}

fn big_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn ratio_estimate(c: &[BigUint], m: usize) -> Option<f64> {
    (m >= 2 && !c[m].is_zero() && !c[m - 2].is_zero())
        .then(|| (big_f64(&c[m]) / big_f64(&c[m - 2])).sqrt())
}

fn root_estimate(c: &[BigUint], m: usize) -> Option<f64> {
    (m >= 1 && !c[m].is_zero()).then(|| big_f64(&c[m]).powf(1.0 / m as f64))
}

/// Growth base from counts `c_0..c_n`: the two-step ratio at the largest
/// usable length (counts vanish at odd lengths on bipartite graphs), else
/// the root estimate.
pub fn alpha_from_counts(c: &[BigUint]) -> Option<f64> {
    let n = c.len().checked_sub(1)?;
    (2..=n)
        .rev()
        .find_map(|m| ratio_estimate(c, m))
        .or_else(|| (1..=n).rev().find_map(|m| root_estimate(c, m)))
}

/// Per sample: closed reduced-word counts up to length `n` for `H₂` and for
/// `H₁ ∩ H₂` (at the product root), growth estimates, and exact values when
/// both subgroups have automata.
pub fn exp_cogrowth_sweep(config: &ExperimentConfig) -> Result<CogrowthReport> {
    let (h1, h2) = (config.h1()?.clone(), config.h2()?.clone());
    let n: usize = config.extra_or("n", 16)?;
    let results = sweep(&config.seeds, config.threads, |&seed| {
        cogrowth_one(&h1, &h2, seed, n, config)
    });
    let (rows, diagnostics) = results.into_iter().unzip();
    Ok(CogrowthReport {
        config: config.clone(),
        rows,
        diagnostics,
    })
}

fn cogrowth_one(
    h1: &OracleSpec,
    h2: &OracleSpec,
    seed: u64,
    n: usize,
    config: &ExperimentConfig,
) -> (CogrowthRow, CogrowthDiagnostics) {
    let mut row = CogrowthRow {
        seed,
        status: "ok".into(),
        n,
        alpha_h2: None,
        alpha_intersection: None,
        alpha_h2_exact: None,
        alpha_intersection_exact: None,
        delta_h2: None,
        delta_intersection: None,
        ratio: None,
    };
    let mut diag = CogrowthDiagnostics {
        seed,
        counts_h2: vec![],
        counts_intersection: vec![],
        ratio_estimates: vec![],
        root_estimates: vec![],
    };
    let run = |row: &mut CogrowthRow, diag: &mut CogrowthDiagnostics| -> Result<()> {
        let o1 = build(h1, seed)?;
        let o2 = build(h2, seed)?;
        if !matches!(o2.family(), Family::Free { .. }) {
            return Err(Error::invalid("cogrowth needs free-group oracles"));
        }
        let a1 = o1.automaton(config.vertex_cap).transpose()?;
        let a2 = o2.automaton(config.vertex_cap).transpose()?;
        let c2 = match &a2 {
            Some(a) => a.closed_reduced_counts(n),
            None => reduced_return_counts(&o2, n, config.vertex_cap)?,
        };
        let trivial2 = c2.iter().skip(1).all(Zero::is_zero);
        let ci = if trivial2 {
            c2.clone()
        } else if let (Some(x), Some(y)) = (&a1, &a2) {
            x.intersect(y)?.closed_reduced_counts(n)
        } else {
            reduced_return_counts(&product_oracle(&o1, &o2)?, n, config.vertex_cap)?
        };
        let exact = |a: &StallingsAutomaton| {
            let c = a.cogrowth_rate::<f64>();
            (c.alpha > 0.0).then_some(c.alpha)
        };
        if let Some(y) = &a2 {
            row.alpha_h2_exact = exact(y);
            if let Some(x) = &a1 {
                row.alpha_intersection_exact = exact(&x.intersect(y)?);
            }
        }
        row.alpha_h2 = alpha_from_counts(&c2);
        row.alpha_intersection = alpha_from_counts(&ci);
        let best2 = if a2.is_some() {
            row.alpha_h2_exact
        } else {
            row.alpha_h2
        };
        let besti = if a1.is_some() && a2.is_some() {
            row.alpha_intersection_exact
        } else {
            row.alpha_intersection
        };
        row.delta_h2 = best2.map(f64::ln);
        row.delta_intersection = besti.map(f64::ln);
        row.ratio = match (row.delta_intersection, row.delta_h2) {
            (Some(di), Some(d2)) if d2 > 0.0 => Some(di / d2),
            _ => None,
        };
        diag.counts_h2 = c2.iter().map(ToString::to_string).collect();
        diag.counts_intersection = ci.iter().map(ToString::to_string).collect();
        diag.ratio_estimates = (0..=n).map(|m| ratio_estimate(&ci, m)).collect();
        diag.root_estimates = (0..=n).map(|m| root_estimate(&ci, m)).collect();
        Ok(())
    };
    if let Err(e) = run(&mut row, &mut diag) {
        row.status = status_of(&e);
    }
    (row, diag)
}

// ---------------------------------------------------------------------------

/// Output of any experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    MainTheorem(MainTheoremReport),
    SupConjugates(SupConjugatesReport),
    WreathCounterexample(WreathReport),
    CogrowthSweep(CogrowthReport),
}

pub const EXPERIMENTS: [&str; 4] = [
    "main_theorem",
    "sup_conjugates",
    "wreath_counterexample",
    "cogrowth_sweep",
];

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    match config.experiment.as_str() {
        "main_theorem" => exp_main_theorem(config).map(Report::MainTheorem),
        "sup_conjugates" => exp_sup_conjugates(config).map(Report::SupConjugates),
        "wreath_counterexample" => {
            exp_wreath_counterexample(config).map(Report::WreathCounterexample)
        }
        "cogrowth_sweep" => exp_cogrowth_sweep(config).map(Report::CogrowthSweep),
        other => Err(Error::invalid(format!(
            "unknown experiment `{other}`; expected one of {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}
