//! Acceptance suite: ten end-to-end checks, one PASS/FAIL line each.
//! Runs with `cargo test --test acceptance`; exits nonzero if any fails.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cospectral::graphing::{
    mtp_check, product_test_function, random_graphing, rokhlin_partition, Graphing, TestFunction,
};
use cospectral::harness::{exp_main_theorem, exp_wreath_counterexample, ExperimentConfig};
use cospectral::irs::{KernelOracle, PermutationOracle};
use cospectral::linalg::PowerOptions;
use cospectral::schreier::{
    automaton_from_finite_oracle, enumerate_double_cosets, generate_ball, generate_ball_from,
    AutomatonOracle, BallOptions, DoubleCosetOptions, SchreierBall, SubgroupOracle,
};
use cospectral::spectral::{dirichlet_lower_bound_with, grigorchuk_rho};
use cospectral::{Generator, StallingsAutomaton, SubgroupIndex, Word};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn dirichlet(ball: &SchreierBall<impl Sized>) -> f64 {
    dirichlet_lower_bound_with::<f64, _>(ball, &PowerOptions::default())
        .unwrap()
        .lower_bound
}

fn cayley_ball(radius: usize) -> SchreierBall<cospectral::schreier::AutomatonCoset> {
    let o = AutomatonOracle::new(StallingsAutomaton::trivial(2));
    generate_ball_from(
        &o,
        o.root(),
        radius,
        &BallOptions {
            track_halo: false,
            ..Default::default()
        },
    )
    .unwrap()
}

/// Top eigenvalue of `M` on the interior of a ball, by dense symmetric eigensolve.
fn dense_dirichlet<C>(ball: &SchreierBall<C>) -> f64 {
    let interior = ball.interior();
    let mut pos = vec![usize::MAX; ball.len()];
    for (i, &v) in interior.iter().enumerate() {
        pos[v] = i;
    }
    let n = interior.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (i, &v) in interior.iter().enumerate() {
        for slot in 0..ball.degree() {
            let w = ball.neighbor(v, slot).unwrap();
            if pos[w] != usize::MAX {
                m[(i, pos[w])] += 1.0 / ball.degree() as f64;
            }
        }
    }
    SymmetricEigen::new(m).eigenvalues.max()
}

/// Dirichlet value of the `2d`-regular tree ball of radius `r` through its
/// radial reduction: levels `0..r` with Dirichlet condition at level `r`.
/// The symmetrised level operator has off-diagonals `√(2d−1)/(2d)` except
/// `1/√(2d)` between levels 0 and 1.
fn radial_tree_dirichlet(r: usize, d: usize) -> f64 {
    let n = r; // interior levels 0..r-1
    let q = (2 * d - 1) as f64;
    let deg = (2 * d) as f64;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let w = if k == 0 {
            (deg).sqrt() / deg
        } else {
            q.sqrt() / deg
        };
        m[(k, k + 1)] = w;
        m[(k + 1, k)] = w;
    }
    SymmetricEigen::new(m).eigenvalues.max()
}

fn criterion_1() -> Verdict {
    let rho = grigorchuk_rho(0.0f64, 2).unwrap();
    let mut values = Vec::new();
    let mut oracle_err: f64 = 0.0;
    for r in [4, 6, 8, 10, 12] {
        let ball = cayley_ball(r);
        let v = dirichlet(&ball);
        oracle_err = oracle_err.max((v - radial_tree_dirichlet(r, 2)).abs());
        if r <= 6 {
            oracle_err = oracle_err.max((v - dense_dirichlet(&ball)).abs());
        }
        values.push(v);
    }
    let last = *values.last().unwrap();
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);
    let pass = (0.84..=0.86603).contains(&last)
        && monotone
        && oracle_err < 1e-6
        && (rho - 3f64.sqrt() / 2.0).abs() < 1e-15
        && last <= rho;
    verdict(pass, format!("R=12 value {last:.6}, monotone {monotone}, oracle error {oracle_err:.1e}, rho {rho:.6}"))
}

fn criterion_2() -> Verdict {
    let o = KernelOracle::new(vec![1]).unwrap();
    let ball = generate_ball(&o, 10).unwrap();
    let v = dirichlet(&ball);
    let target = (PI / 20.0).cos();
    verdict(
        (v - target).abs() <= 1e-3,
        format!("value {v:.6}, cos(pi/20) {target:.6}"),
    )
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    loop {
        let len = rng.gen_range(1..=max_len);
        let w = Word::reduce((0..len).map(|_| Generator::from_slot(rng.gen_range(0..4))));
        if !w.is_empty() {
            return w;
        }
    }
}

fn random_subgroup(rng: &mut ChaCha8Rng) -> StallingsAutomaton {
    let k = rng.gen_range(1..=3);
    let gens: Vec<Word> = (0..k).map(|_| random_word(rng, 6)).collect();
    StallingsAutomaton::build(&gens, 2).unwrap()
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = f64::NEG_INFINITY;
    let mut finite = 0;
    let mut alpha_err: f64 = 0.0;
    let opts = BallOptions {
        track_halo: false,
        ..Default::default()
    };
    for _ in 0..20 {
        let h = random_subgroup(&mut rng);
        let alpha = h.cogrowth_rate::<f64>().alpha;
        let rho = grigorchuk_rho(alpha, 2).unwrap();
        let o = AutomatonOracle::new(h.clone());
        let est = dirichlet(&generate_ball_from(&o, o.root(), 10, &opts).unwrap());
        worst = worst.max(est - rho);
        if h.index() != SubgroupIndex::Infinite {
            finite += 1;
            alpha_err = alpha_err.max((alpha - 3.0).abs());
        }
    }
    verdict(
        worst <= 0.02 && alpha_err <= 0.05,
        format!("max(estimate - rho) {worst:.2e}, finite-index samples {finite} with max |alpha - 3| {alpha_err:.1e}"),
    )
}

/// Every reduced word of length at most `max_len` over `{a, b}^±`.
fn reduced_words(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for slot in 0..4 {
                let g = Generator::from_slot(slot);
                if w.last() == Some(g.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn criterion_4() -> Verdict {
    let words = reduced_words(8);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    let mut nontrivial = 0;
    for _ in 0..100 {
        let (h1, h2) = (random_subgroup(&mut rng), random_subgroup(&mut rng));
        let both = h1.intersect(&h2).unwrap();
        for w in &words {
            let expected = h1.membership(w) && h2.membership(w);
            if both.membership(w) != expected {
                mismatches += 1;
            }
            if expected && !w.is_empty() {
                nontrivial += 1;
            }
        }
    }
    verdict(
        mismatches == 0,
        format!(
            "{} words x 100 pairs, {mismatches} mismatches, {nontrivial} nontrivial common members",
            words.len()
        ),
    )
}

fn random_perm_oracle(rng: &mut ChaCha8Rng) -> PermutationOracle {
    let n = rng.gen_range(2..=7);
    let perms = (0..2)
        .map(|_| {
            let mut p: Vec<u32> = (0..n).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    PermutationOracle::from_permutations(perms).unwrap()
}

/// Orbit of point 0 as a coset table: `table[c][slot]`, plus BFS words.
fn coset_table(o: &PermutationOracle) -> (Vec<Vec<usize>>, Vec<Word>) {
    let mut id: HashMap<u32, usize> = HashMap::from([(o.root(), 0)]);
    let mut points = vec![o.root()];
    let mut words = vec![Word::identity()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for slot in 0..4 {
            let p = o.act(Generator::from_slot(slot), &points[c]).unwrap();
            if let std::collections::hash_map::Entry::Vacant(e) = id.entry(p) {
                e.insert(points.len());
                points.push(p);
                let mut w = words[c].clone();
                w.push(Generator::from_slot(slot));
                words.push(w);
                queue.push_back(points.len() - 1);
            }
        }
    }
    let table = points
        .iter()
        .map(|p| {
            (0..4)
                .map(|s| id[&o.act(Generator::from_slot(s), p).unwrap()])
                .collect()
        })
        .collect();
    (table, words)
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut total_components = 0;
    for trial in 0..20 {
        let p1 = random_perm_oracle(&mut rng);
        // odd trials: H2 is the stabilizer of another point in the same
        // action, so the product splits into several orbitals
        let p2 = if trial % 2 == 1 {
            let n = p1.points() as u32;
            let k = rng.gen_range(0..n);
            let swap = |x: u32| {
                if x == 0 {
                    k
                } else if x == k {
                    0
                } else {
                    x
                }
            };
            let perms = p1
                .permutations()
                .iter()
                .map(|p| (0..n).map(|x| swap(p[swap(x) as usize])).collect())
                .collect();
            PermutationOracle::from_permutations(perms).unwrap()
        } else {
            random_perm_oracle(&mut rng)
        };
        let (t1, _) = coset_table(&p1);
        let (t2, w2) = coset_table(&p2);
        let (n1, n2) = (t1.len(), t2.len());
        // components of the coset-pair graph, by flood fill over both tables
        let mut comp = vec![usize::MAX; n1 * n2];
        let mut sizes = Vec::new();
        let mut reps = Vec::new();
        for start in 0..n1 * n2 {
            if comp[start] != usize::MAX {
                continue;
            }
            let c = sizes.len();
            comp[start] = c;
            let mut stack = vec![start];
            let mut size = 0;
            let mut rep: Option<usize> = None;
            while let Some(p) = stack.pop() {
                size += 1;
                let (x, y) = (p / n2, p % n2);
                if x == 0 && rep.is_none_or(|r| w2[y].len() < w2[r].len()) {
                    rep = Some(y);
                }
                for s in 0..4 {
                    let q = t1[x][s] * n2 + t2[y][s];
                    if comp[q] == usize::MAX {
                        comp[q] = c;
                        stack.push(q);
                    }
                }
            }
            sizes.push(size);
            reps.push(rep.expect("every component meets the root coset of H1"));
        }
        // index of H1 ∩ H2^g through Stallings automata
        let a1 = automaton_from_finite_oracle(&p1, 1000).unwrap();
        let a2 = automaton_from_finite_oracle(&p2, 1000).unwrap();
        let mut brute: Vec<usize> = reps
            .iter()
            .map(|&y| {
                match a1
                    .intersect(&a2.conjugate(&w2[y]).unwrap())
                    .unwrap()
                    .index()
                {
                    SubgroupIndex::Finite(k) => k,
                    SubgroupIndex::Infinite => usize::MAX,
                }
            })
            .collect();
        let mut flood = sizes.clone();
        let opts = DoubleCosetOptions {
            explore_radius: Some(n1 * n2),
            ..Default::default()
        };
        let listed = enumerate_double_cosets(&p1, &p2, n2, &opts).unwrap();
        let mut enumerated: Vec<usize> = listed
            .iter()
            .map(|d| d.size.unwrap_or(usize::MAX))
            .collect();
        brute.sort_unstable();
        flood.sort_unstable();
        enumerated.sort_unstable();
        total_components += sizes.len();
        if brute != enumerated || flood != enumerated {
            failures.push(format!(
                "trial {trial}: enumerated {enumerated:?}, indices {brute:?}, flood {flood:?}"
            ));
        }
    }
    let mut detail = format!("{total_components} components over 20 pairs");
    if !failures.is_empty() {
        detail = format!("{detail}; {}", failures.join("; "));
    }
    verdict(failures.is_empty(), detail)
}

fn criterion_6() -> Verdict {
    let config: ExperimentConfig =
        "experiment = wreath_counterexample\na = 0..9\nb = 10..19\nlength = 10\nradius = 10\nwindow = 50\n"
            .parse()
            .unwrap();
    let r = exp_wreath_counterexample(&config).unwrap();
    let best_a = r
        .folner
        .iter()
        .filter(|f| f.subgroup == "H_A")
        .filter_map(|f| f.defect)
        .fold(f64::INFINITY, f64::min);
    verdict(
        r.common_nontrivial == 0 && best_a <= 0.25,
        format!(
            "{} words checked, {} common nontrivial; best H_A Folner defect {best_a:.4}",
            r.words_checked, r.common_nontrivial
        ),
    )
}

/// Union-find labels of the orbits of a graphing.
fn orbit_labels(g: &Graphing<f64>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..g.points()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for m in g.maps() {
        for (x, y) in m.pairs() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            parent[a] = b;
        }
    }
    (0..g.points()).map(|x| find(&mut parent, x)).collect()
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut oracle_worst: f64 = 0.0;
    for _ in 0..50 {
        let points = rng.gen_range(10..=300);
        let maps = rng.gen_range(1..=4);
        let density = rng.gen_range(0.2..1.0);
        let g = random_graphing(&mut rng, points, maps, density);
        let kernel: Vec<f64> = (0..points * points).map(|_| rng.gen::<f64>()).collect();
        let k = |x: usize, y: usize| kernel[x * points + y];
        let r = mtp_check(&g, k);
        worst = worst.max((r.lhs - r.rhs).abs());
        // direct double sum over same-orbit pairs
        let label = orbit_labels(&g);
        let mut sent = 0.0;
        for x in 0..points {
            for y in 0..points {
                if label[x] == label[y] {
                    sent += g.weights()[x] * k(x, y);
                }
            }
        }
        oracle_worst = oracle_worst.max((sent - r.lhs).abs());
    }
    verdict(
        worst <= 1e-9 && oracle_worst <= 1e-9,
        format!("max |lhs - rhs| {worst:.1e}, max |lhs - direct| {oracle_worst:.1e}"),
    )
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let delta = 0.1;
    let mut failures = 0;
    let mut worst_b: f64 = 0.0;
    let mut max_classes = 0;
    for _ in 0..50 {
        let points = rng.gen_range(1..=10_000);
        let maps = rng.gen_range(1..=4);
        let density = rng.gen_range(0.3..1.0);
        let g = random_graphing(&mut rng, points, maps, density);
        let r = rokhlin_partition(&g, delta).unwrap();
        // exact check, independent of the library's own verifier
        let mut owner = vec![usize::MAX; points];
        let mut covered = 0;
        for (j, class) in std::iter::once(&r.b).chain(&r.classes).enumerate() {
            for &x in class {
                if owner[x] == usize::MAX {
                    covered += 1;
                }
                owner[x] = j;
            }
        }
        let disjoint_cover = covered == points
            && r.b.len() + r.classes.iter().map(Vec::len).sum::<usize>() == points;
        let no_inner_edge = g.maps().iter().all(|m| {
            m.pairs()
                .all(|(x, y)| x == y || owner[x] == 0 || owner[x] != owner[y])
        });
        let b_weight: f64 = r.b.iter().map(|&x| g.weights()[x]).sum();
        worst_b = worst_b.max(b_weight / g.total_weight());
        max_classes = max_classes.max(r.classes.len());
        if !(disjoint_cover && no_inner_edge && b_weight <= delta * g.total_weight())
            || r.verify(&g).is_err()
        {
            failures += 1;
        }
    }
    verdict(
        failures == 0,
        format!("{failures} failures, max weight(B) {worst_b:.2e}, max classes {max_classes}"),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_diff: f64 = 0.0;
    let mut min_slack = f64::INFINITY;
    let mut trials = 0;
    while trials < 20 {
        let n = rng.gen_range(8..=60);
        let rot: Vec<u32> = (0..n as u32).map(|x| (x + 1) % n as u32).collect();
        let cycle = PermutationOracle::from_permutations(vec![rot]).unwrap();
        let ball = generate_ball(&cycle, n).unwrap();
        let m = rng.gen_range(3..=40);
        let density = rng.gen_range(0.4..1.0);
        let x2 = random_graphing(&mut rng, m, 1, density);
        let p2: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.8)).collect();
        let interior = cospectral::graphing::graphing_interior(&x2, &p2);
        if interior.is_empty() {
            continue;
        }
        let mut values = vec![0.0; m];
        for &y in &interior {
            values[y] = rng.gen_range(0.0..1.0);
        }
        values[interior[0]] += 0.1;
        let f2 = TestFunction::new(&x2, values.clone(), p2).unwrap();
        // F: an arc of the cycle, never the whole cycle
        let len = rng.gen_range(1..n);
        let start = rng.gen_range(0..n) as u32;
        let arc: Vec<u32> = (0..len as u32).map(|i| (start + i) % n as u32).collect();
        let f_set: Vec<usize> = (0..ball.len())
            .filter(|&v| arc.contains(ball.coset(v)))
            .collect();
        let t = product_test_function(&ball, &f_set, &x2, &f2).unwrap();

        // direct quadratic forms on Z/n × X2 with (x, y) -> (x ± 1, φ^{±1}(y)), lazy off the domain
        let in_f = |x: usize| arc.contains(&(x as u32));
        let f = |x: usize, y: usize| if in_f(x) { values[y] } else { 0.0 };
        let nu = x2.weights();
        let phi = &x2.maps()[0];
        let (mut norm, mut mf) = (0.0, 0.0);
        for x in 0..n {
            for y in 0..m {
                let fxy = f(x, y);
                norm += nu[y] * fxy * fxy;
                let fwd = phi.apply(y).map_or(fxy, |z| f((x + 1) % n, z));
                let back = phi.apply_inverse(y).map_or(fxy, |z| f((x + n - 1) % n, z));
                mf += nu[y] * fxy * (fwd + back) / 2.0;
            }
        }
        let (mut n2, mut m2) = (0.0, 0.0);
        for y in 0..m {
            n2 += nu[y] * values[y] * values[y];
            let fwd = phi.apply(y).map_or(values[y], |z| values[z]);
            let back = phi.apply_inverse(y).map_or(values[y], |z| values[z]);
            m2 += nu[y] * values[y] * (fwd + back) / 2.0;
        }
        let lambda2 = m2 / n2;
        // |FS Δ F| / |F| on the cycle
        let fs: Vec<usize> = (0..n)
            .filter(|&x| in_f((x + 1) % n) || in_f((x + n - 1) % n))
            .collect();
        let sym_diff = fs.iter().filter(|&&x| !in_f(x)).count()
            + (0..n).filter(|&x| in_f(x) && !fs.contains(&x)).count();
        let eps1 = sym_diff as f64 / len as f64;
        let lhs = norm - mf;
        let bound = (1.0 - lambda2 + 2.0 * eps1) * norm;
        let rep = &t.report;
        for (a, b) in [
            (rep.lhs, lhs),
            (rep.bound, bound),
            (rep.norm_sq, norm),
            (rep.lambda2_prime, lambda2),
            (rep.epsilon1, eps1),
        ] {
            worst_diff = worst_diff.max((a - b).abs());
        }
        min_slack = min_slack.min(bound - lhs).min(rep.slack);
        trials += 1;
    }
    verdict(
        worst_diff <= 1e-9 && min_slack >= 0.0,
        format!("max deviation from direct forms {worst_diff:.1e}, min slack {min_slack:.3e}"),
    )
}

fn criterion_10() -> Verdict {
    let config: ExperimentConfig =
        "experiment = main_theorem\nh1 = kernel:weights=1,0\nh2 = perm:n=50;d=2\nradius = 40\nseeds = 0..19\nthreads = 4\n"
            .parse()
            .unwrap();
    let r = exp_main_theorem(&config).unwrap();
    let ok = r.rows.iter().all(|row| {
        row.status == "ok"
            && row.gap.is_some_and(|g| g <= 0.1)
            && row.h2_finite == Some(true)
            && row.h2_estimate == Some(1.0)
    });
    let max_gap = r.summary.gap.as_ref().map_or(f64::NAN, |q| q.max);
    let mut statuses: BTreeMap<&str, usize> = BTreeMap::new();
    for row in &r.rows {
        *statuses
            .entry(if row.status == "ok" { "ok" } else { "failed" })
            .or_default() += 1;
    }
    verdict(
        ok,
        format!("{} seeds {statuses:?}, max gap {max_gap:.4}", r.rows.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Verdict); 10] = [
        (
            "Kesten value on the F2 Cayley ball",
            Duration::from_secs(60),
            criterion_1,
        ),
        (
            "path eigenvalue cos(pi/20)",
            Duration::from_secs(1),
            criterion_2,
        ),
        (
            "cogrowth formula consistency",
            Duration::from_secs(300),
            criterion_3,
        ),
        (
            "intersection membership",
            Duration::from_secs(300),
            criterion_4,
        ),
        (
            "double-coset decomposition",
            Duration::from_secs(300),
            criterion_5,
        ),
        (
            "wreath counterexample",
            Duration::from_secs(600),
            criterion_6,
        ),
        ("mass transport", Duration::from_secs(10), criterion_7),
        ("Rokhlin partition", Duration::from_secs(30), criterion_8),
        (
            "product test function",
            Duration::from_secs(300),
            criterion_9,
        ),
        (
            "intersection gap over seeds",
            Duration::from_secs(300),
            criterion_10,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let pass = v.pass && took <= *limit;
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {name}: {} ({:.2}s of {}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
