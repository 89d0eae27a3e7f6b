//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use ultraseq::clustertree::{pmax_report, PmaxReport};
use ultraseq::freqspace::{project_word, ultrametric_distance};
use ultraseq::lowering::wavelet::{
    coefficient_defect, drop_action_defect, main_equation_defect, raise_action_defect,
    reconstruction_defect, WaveletBasis,
};
use ultraseq::seqcore::{enumerate_necklaces, level1_cluster_size, shift};
use ultraseq::twofold::{count_twofold, count_twofold_bruteforce, count_twofold_exact, phi, twofold_table, TwoFoldRow};
use ultraseq::{
    build_tree, count_debruijn_sequences, count_eulerian_cycles, lower, necklace_count, project,
    raise, Alphabet, Composition, CyclicSequence, DeBruijnGraph, FrequencyVector, TreeOptions,
};

const TOLERANCE: f64 = 1e-9;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Collects named sub-checks; the criterion passes when all of them do.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failed.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn outcome(self) -> Outcome {
        if self.failed.is_empty() {
            Outcome::new(true, self.notes.join("; "))
        } else {
            Outcome::new(
                false,
                format!("failed: {} | passed: {}", self.failed.join("; "), self.notes.join("; ")),
            )
        }
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn necklace_counts() -> Outcome {
    let mut c = Checks::default();
    for (n, l, expected) in [(3u64, 2u64, 4u64), (7, 2, 20), (11, 2, 188)] {
        let (got, took) = timed(|| necklace_count(n, l));
        c.check(got == big(expected), format!("({n},{l}) -> {got}"));
        c.check(took < Duration::from_millis(1), format!("({n},{l}) in {took:?}"));
    }
    c.outcome()
}

fn burnside_sizes() -> Outcome {
    let mut c = Checks::default();
    for (a, b, expected) in [(9u64, 2u64, 5u64), (8, 3, 15), (7, 4, 30), (6, 5, 42)] {
        let got = level1_cluster_size(&Composition::new(vec![a, b]).unwrap());
        c.check(got == big(expected), format!("[{a},{b}] -> {got}"));
    }
    c.outcome()
}

fn debruijn_counts() -> Outcome {
    let mut c = Checks::default();
    let (_, took) = timed(|| {
        for (l, p) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2)] {
            let g = DeBruijnGraph::new(Alphabet::new(l as usize).unwrap(), p as usize - 1).unwrap();
            let best = count_eulerian_cycles(&g.to_multigraph().unwrap()).unwrap();
            let closed = count_debruijn_sequences(l, p);
            c.check(best == closed, format!("(l={l},p={p}) closed {closed} BEST {best}"));
        }
        for (order, expected) in [(2usize, 2u64), (3, 16)] {
            let g = DeBruijnGraph::new(Alphabet::BINARY, order).unwrap();
            let got = count_eulerian_cycles(&g.to_multigraph().unwrap()).unwrap();
            c.check(got == big(expected), format!("G_2({order}) -> {got}"));
        }
    });
    c.check(took < Duration::from_secs(1), format!("in {took:?}"));
    c.outcome()
}

fn column(rows: &[TwoFoldRow], f: impl Fn(&TwoFoldRow) -> &BigUint) -> Vec<BigUint> {
    rows.iter().map(|r| f(r).clone()).collect()
}

fn bigs(v: &[u64]) -> Vec<BigUint> {
    v.iter().copied().map(big).collect()
}

fn twofold_counts() -> Outcome {
    let mut c = Checks::default();
    for (p, expected) in [(1usize, 2u64), (2, 5), (3, 72), (4, 43_768)] {
        let got = count_twofold(p).unwrap();
        c.check(got == big(expected), format!("assembly N{p} = {got}"));
    }
    let (brute, took) = timed(|| [2usize, 3].map(|p| count_twofold_bruteforce(p).unwrap()));
    c.check(brute[0] == big(5), format!("brute force N2 = {}", brute[0]));
    c.check(brute[1] == big(72), format!("brute force N3 = {} (expected 72)", brute[1]));
    c.check(took < Duration::from_secs(30), format!("brute force in {took:?}"));

    let t3 = twofold_table(3).unwrap();
    let t4 = twofold_table(4).unwrap();
    let tables = column(&t3, |r| &r.perm_no) == bigs(&[16, 32, 24, 8, 1])
        && column(&t3, |r| &r.phi) == bigs(&[2, 8, 11, 6, 1])
        && column(&t3, |r| &r.cofactor) == bigs(&[1, 1, 2, 4, 16])
        && column(&t4, |r| &r.perm_no) == bigs(&[256, 1024, 1792, 1792, 1120, 448, 112, 16, 1])
        && column(&t4, |r| &r.phi) == bigs(&[16, 128, 380, 584, 519, 274, 84, 14, 1])
        && column(&t4, |r| &r.cofactor) == bigs(&[1, 1, 2, 4, 16, 48, 128, 448, 2048]);
    c.check(tables, "p=3 and p=4 tables");
    c.note(format!(
        "per-configuration exact N3 = {}, N4 = {}",
        count_twofold_exact(3).unwrap(),
        count_twofold_exact(4).unwrap()
    ));
    c.outcome()
}

fn phi_closed_forms() -> Outcome {
    let mut c = Checks::default();
    for p in [3usize, 4] {
        let half = 1u64 << (p - 1);
        let blocks = half as usize;
        // Φ(2^p - 2k) is indexed by k here
        let top = phi(p, 1).unwrap();
        c.check(top == big(1 << (half - 1)), format!("p={p} Φ(2^p-2) = {top}"));
        let two = phi(p, blocks - 1).unwrap();
        c.check(two == big((1 << p) - 2), format!("p={p} Φ(2) = {two}"));
        let four = phi(p, blocks - 2).unwrap();
        let expected = 2 * (half - 1) * (half - 2) - u64::from(p == 3);
        c.check(four == big(expected), format!("p={p} Φ(4) = {four}"));
    }
    c.outcome()
}

fn lowering_oracle() -> Outcome {
    let mut c = Checks::default();
    let mut vectors = 0usize;
    let (_, took) = timed(|| {
        for n in 1..=12usize {
            let necklaces = enumerate_necklaces(n, Alphabet::BINARY).unwrap();
            for p in 0..n {
                let mut preimage: BTreeMap<FrequencyVector, BTreeSet<FrequencyVector>> = BTreeMap::new();
                for s in &necklaces {
                    preimage.entry(project(s, p).unwrap()).or_default().insert(project(s, p + 1).unwrap());
                }
                for (y, expected) in preimage {
                    vectors += 1;
                    let got: BTreeSet<_> = lower(&y).unwrap().into_iter().collect();
                    if got != expected {
                        c.check(false, format!("n={n} p={p} y={:?}", y.to_dense()));
                    }
                }
            }
        }
    });
    c.note(format!("{vectors} realized vectors"));
    c.check(took < Duration::from_secs(300), format!("in {took:?}"));
    c.outcome()
}

fn level1_branching() -> Outcome {
    let mut c = Checks::default();
    let mut cases = 0;
    for n in 2..=15u64 {
        for z in 2..=n / 2 {
            cases += 1;
            let y = FrequencyVector::from_dense(1, Alphabet::BINARY, &[n - z, z]).unwrap();
            let got = lower(&y).unwrap().len() as u64;
            if got != z {
                c.check(false, format!("n={n} z={z} -> {got}"));
            }
        }
    }
    c.note(format!("{cases} cases"));
    c.outcome()
}

fn cluster_tree() -> Outcome {
    let mut c = Checks::default();
    let options = TreeOptions { half_tree: true, ..Default::default() };
    let tree = build_tree(11, Alphabet::BINARY, &options).unwrap();
    let leaves: BigUint = tree.leaves().iter().map(|node| &node.count).sum();
    c.check(leaves == big(94), format!("half tree leaves {leaves}"));
    let pmax = tree.max_branching_level();
    c.check(pmax == Some(5), format!("half tree p_max {pmax:?} (expected 5)"));
    for n in [7u64, 11, 13] {
        let PmaxReport { observed, predicted, .. } = pmax_report(n).unwrap();
        c.check(observed == predicted, format!("n={n} observed {observed:?} formula {predicted:?}"));
    }
    c.outcome()
}

fn all_words(l: usize, n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..l.pow(n as u32)).map(move |mut r| {
        let mut w = vec![0u8; n];
        for slot in w.iter_mut().rev() {
            *slot = (r % l) as u8;
            r /= l;
        }
        w
    })
}

fn property_suites() -> Outcome {
    let mut c = Checks::default();

    let mut projection_ok = true;
    for (l, max_n) in [(2usize, 10usize), (3, 6), (4, 5)] {
        let alphabet = Alphabet::new(l).unwrap();
        for n in 1..=max_n {
            for w in all_words(l, n) {
                let s = CyclicSequence::parse(&alphabet.format_word(&w), alphabet).unwrap();
                for p in 0..=n {
                    let x = project_word(&w, alphabet, p).unwrap();
                    projection_ok &= x.length() == n as u64 && x.to_dense().iter().sum::<u64>() == n as u64;
                    projection_ok &= (0..n as i64).all(|k| project_word(&shift(&s, k), alphabet, p).unwrap() == x);
                    if p < n {
                        projection_ok &= raise(&project_word(&w, alphabet, p + 1).unwrap()).unwrap() == x;
                    }
                }
            }
        }
    }
    c.check(projection_ok, "shift invariance, entry sums, raise coherence");

    let mut triangle_ok = true;
    for n in 1..=8usize {
        let necklaces = enumerate_necklaces(n, Alphabet::BINARY).unwrap();
        let m = necklaces.len();
        let d: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| ultrametric_distance(&necklaces[i], &necklaces[j]).unwrap()).collect())
            .collect();
        for a in 0..m {
            for b in 0..m {
                for x in 0..m {
                    triangle_ok &= d[a][b] <= d[a][x].max(d[b][x]);
                }
            }
        }
    }
    c.check(triangle_ok, "strong triangle inequality n <= 8");

    let mut trace_ok = true;
    for (l, max_p) in [(2usize, 6usize), (3, 4)] {
        for p in 2..=max_p {
            let g = DeBruijnGraph::new(Alphabet::new(l).unwrap(), p - 1).unwrap();
            let q = g.to_multigraph().unwrap().adjacency();
            let star: Vec<Vec<u64>> = q[1..].iter().map(|r| r[1..].to_vec()).collect();
            let mut power = star.clone();
            for m in 1..p {
                let trace: u64 = (0..power.len()).map(|i| power[i][i]).sum();
                trace_ok &= trace == (l as u64).pow(m as u32) - 1;
                power = (0..star.len())
                    .map(|i| (0..star.len()).map(|j| (0..star.len()).map(|k| power[i][k] * star[k][j]).sum()).collect())
                    .collect();
            }
        }
    }
    c.check(trace_ok, "trace relations");

    let mut line_ok = true;
    for p in 0..=4usize {
        let g = DeBruijnGraph::new(Alphabet::BINARY, p).unwrap();
        let next = DeBruijnGraph::new(Alphabet::BINARY, p + 1).unwrap().to_multigraph().unwrap().adjacency();
        for e in 0..g.edge_count() {
            for f in 0..g.edge_count() {
                let follows = g.edge_endpoints(e).1 == g.edge_endpoints(f).0;
                line_ok &= u64::from(follows) == next[e as usize][f as usize];
            }
        }
    }
    c.check(line_ok, "line graph l=2 p<=4");

    let mut worst: f64 = 0.0;
    for (l, max_p) in [(2usize, 4usize), (3, 3), (4, 3)] {
        let alphabet = Alphabet::new(l).unwrap();
        for p in 1..=max_p {
            worst = worst.max(WaveletBasis::new(alphabet, p).unwrap().orthonormality_defect());
            if p < max_p {
                worst = worst.max(raise_action_defect(alphabet, p).unwrap());
                worst = worst.max(drop_action_defect(alphabet, p).unwrap());
            }
        }
        for n in 3..=7usize {
            for s in enumerate_necklaces(n, alphabet).unwrap().iter().take(40) {
                for level in 2..=max_p.min(n) {
                    let z = project(s, level).unwrap();
                    worst = worst.max(coefficient_defect(&z).unwrap());
                    worst = worst.max(main_equation_defect(&z).unwrap());
                    worst = worst.max(reconstruction_defect(&z).unwrap());
                }
            }
        }
    }
    c.check(worst <= TOLERANCE, format!("wavelet defects max {worst:.2e}"));
    c.outcome()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("necklace counts", necklace_counts),
        ("level-1 cluster sizes n=11", burnside_sizes),
        ("de Bruijn counts", debruijn_counts),
        ("two-fold counts and tables", twofold_counts),
        ("Φ closed forms", phi_closed_forms),
        ("lowering oracle l=2 n<=12", lowering_oracle),
        ("level-1 branching n<=15", level1_branching),
        ("cluster tree n=11 and p_max", cluster_tree),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (outcome, took) = timed(run);
        if !outcome.pass {
            failures += 1;
        }
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name} ({took:.2?}): {}", i + 1, outcome.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
