//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs the bundled benchmark cones, the worked series example and a
//! seeded oracle suite of 200 random cones. The test fails if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use conenorm::poly::from_i64;
use conenorm::triangulator::Strategy;
use conenorm::{bundled, run, ConeInput, InputKind, Options, RunReport, TaskSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const LIMIT_4X4: Duration = Duration::from_secs(1);
const LIMIT_CROSS10: Duration = Duration::from_secs(10);
const LIMIT_CYCLO36: Duration = Duration::from_secs(300);
const LIMIT_5X5: Duration = Duration::from_secs(1800);
const LIMIT_ORACLES: Duration = Duration::from_secs(600);
const ORACLE_CONES: usize = 200;
const THREADS: [usize; 3] = [1, 4, 16];

struct Outcome {
    lines: Vec<String>,
    failed: usize,
    /// Multiplicity checks of every graded run with a series.
    graded_runs: usize,
    graded_failures: usize,
}

impl Outcome {
    fn report(&mut self, n: usize, ok: bool, what: &str, detail: String) {
        let line = format!("{} criterion {n}: {what} | {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        if !ok {
            self.failed += 1;
        }
    }

    fn note_graded(&mut self, r: &RunReport) {
        if r.hilbert_series.is_some() {
            self.graded_runs += 1;
            if r.multiplicity_check != Some(true) {
                self.graded_failures += 1;
            }
        }
    }
}

fn timed(input: &ConeInput, opts: &Options) -> (Result<RunReport, conenorm::Error>, Duration) {
    let t = Instant::now();
    let r = run(input, opts);
    (r, t.elapsed())
}

fn with_threads(opts: &Options, t: usize) -> Options {
    let mut o = opts.clone();
    o.threads = Some(t);
    o
}

/// Magic sum of an `n × n` square: the sum of its first row.
fn magic_grading(n: usize) -> Vec<i64> {
    let mut g = vec![0; n * n];
    g[..n].fill(1);
    g
}

fn deterministic(input: &ConeInput, opts: &Options) -> Result<bool, conenorm::Error> {
    let mut outs = Vec::new();
    for t in THREADS {
        outs.push(run(input, &with_threads(opts, t))?.canonical_json());
    }
    Ok(outs.windows(2).all(|w| w[0] == w[1]))
}

fn tri_size(r: &RunReport) -> (u64, BigInt) {
    let t = r.triangulation.as_ref().expect("triangulation");
    (t.size, t.stanley_components.clone())
}

fn criterion_4x4(out: &mut Outcome) -> (ConeInput, Options) {
    let input = bundled::magic(4).with_grading(&magic_grading(4));
    let mut opts = Options::with_tasks(TaskSet::all());
    opts.threads = Some(1);
    let (r, t) = timed(&input, &opts);
    match r {
        Ok(r) => {
            out.note_graded(&r);
            let hb = r.hilbert_basis.as_ref().map_or(0, Vec::len);
            let (size, stanley) = tri_size(&r);
            let ok = r.num_extreme_rays == 20 && r.num_support_hyperplanes == 16 && hb == 20 && t < LIMIT_4X4;
            out.report(
                1,
                ok,
                "4x4 magic squares: #ext 20, #supp 16, #Hilb 20, < 1 s single-threaded",
                format!(
                    "rank {}, #ext {}, #supp {}, #Hilb {hb}, triangulation {size} (soft: 46), Stanley {stanley}, {:.3} s",
                    r.rank,
                    r.num_extreme_rays,
                    r.num_support_hyperplanes,
                    t.as_secs_f64()
                ),
            );
        }
        Err(e) => out.report(1, false, "4x4 magic squares", format!("error: {e}")),
    }
    (input, opts)
}

fn criterion_cross10(out: &mut Outcome) -> (ConeInput, Options) {
    let input = bundled::cross(10);
    let mut opts = Options::with_tasks(TaskSet::all());
    opts.threads = Some(1);
    let (r, t) = timed(&input, &opts);
    match r {
        Ok(r) => {
            out.note_graded(&r);
            let hb = r.hilbert_basis.as_ref().map_or(0, Vec::len);
            let (size, stanley) = tri_size(&r);
            let vol = r.volume.clone().unwrap_or_default();
            let ok = r.num_support_hyperplanes == 1024
                && hb == 21
                && vol == BigRational::from_integer(1024.into())
                && stanley == BigInt::from(1024)
                && t < LIMIT_CROSS10;
            out.report(
                2,
                ok,
                "cross10: #supp 1024, #Hilb 21, volume 1024, Stanley 1024, < 10 s",
                format!(
                    "#ext {}, #supp {}, #Hilb {hb}, volume {vol}, Stanley {stanley}, triangulation {size}, {:.3} s",
                    r.num_extreme_rays,
                    r.num_support_hyperplanes,
                    t.as_secs_f64()
                ),
            );
        }
        Err(e) => out.report(2, false, "cross10", format!("error: {e}")),
    }
    (input, opts)
}

fn criterion_cyclo36(out: &mut Outcome) -> (ConeInput, Options) {
    let input = bundled::cyclo(36);
    let mut opts = Options::with_tasks(TaskSet::all());
    opts.tasks.deg1 = false;
    let (r, t) = timed(&input, &opts);
    match r {
        Ok(r) => {
            out.note_graded(&r);
            let hb = r.hilbert_basis.as_ref().map_or(0, Vec::len);
            let (size, stanley) = tri_size(&r);
            let ok =
                r.num_support_hyperplanes == 46_656 && hb == 37 && stanley == BigInt::from(46_656) && t < LIMIT_CYCLO36;
            out.report(
                3,
                ok,
                "cyclo36: #supp 46656, #Hilb 37, Stanley 46656, < 5 min",
                format!(
                    "#ext {}, #supp {}, #Hilb {hb}, Stanley {stanley}, triangulation {size} (soft: 44608), {:.3} s",
                    r.num_extreme_rays,
                    r.num_support_hyperplanes,
                    t.as_secs_f64()
                ),
            );
        }
        Err(e) => out.report(3, false, "cyclo36", format!("error: {e}")),
    }
    (input, opts)
}

fn criterion_5x5(out: &mut Outcome) {
    let input = bundled::magic(5);
    let mut opts = Options::with_tasks(TaskSet::default());
    opts.strategy.partial = true;
    let (r, t) = timed(&input, &opts);
    match r {
        Ok(r) => {
            let hb = r.hilbert_basis.as_ref().map_or(0, Vec::len);
            let ok = r.num_extreme_rays == 1940 && r.num_support_hyperplanes == 25 && hb == 4828 && t < LIMIT_5X5;
            out.report(
                4,
                ok,
                "5x5 magic squares: #ext 1940, #supp 25, #Hilb 4828, <= 30 min",
                format!(
                    "rank {}, #ext {}, #supp {}, #Hilb {hb}, partial triangulation {}, {:.1} s",
                    r.rank,
                    r.num_extreme_rays,
                    r.num_support_hyperplanes,
                    r.evaluation.simplices,
                    t.as_secs_f64()
                ),
            );
        }
        Err(e) => out.report(4, false, "5x5 magic squares", format!("error: {e}")),
    }
}

fn criterion_worked_example(out: &mut Outcome) {
    let input = ConeInput::from_i64(&[vec![1, 0], vec![0, 1]], InputKind::Gens).with_grading(&[2, 3]);
    let mut opts = Options::with_tasks(TaskSet::all());
    opts.verify = true;
    match run(&input, &opts) {
        Ok(r) => {
            out.note_graded(&r);
            let hs = r.hilbert_series.as_ref().expect("series");
            let raw_ok = hs.raw.numerator == from_i64(&[1]) && hs.raw.denominator == vec![2, 3];
            let cyc_ok =
                hs.cyclotomic.numerator == from_i64(&[1]) && hs.cyclotomic.factors == vec![(1, 2), (2, 1), (3, 1)];
            let std_ok = hs
                .standard
                .as_ref()
                .is_some_and(|s| s.numerator == from_i64(&[1, -1, 1]) && s.denominator == vec![1, 6]);
            let sixth = BigRational::new(1.into(), 6.into());
            let q_ok = hs
                .quasipolynomial
                .as_ref()
                .is_some_and(|q| q.period == 6 && (0..6).all(|r| q.coefficient(r, 1) == sixth));
            let ok = raw_ok && cyc_ok && std_ok && q_ok && r.multiplicity_check == Some(true);
            out.report(
                5,
                ok,
                "degrees (2,3): raw, cyclotomic and standard forms, period 6, q_1 = 1/6, multiplicity check",
                format!(
                    "raw {raw_ok}, cyclotomic {cyc_ok}, standard {std_ok}, quasipolynomial {q_ok}, check {:?}",
                    r.multiplicity_check
                ),
            );
        }
        Err(e) => out.report(5, false, "worked series example", format!("error: {e}")),
    }
}

fn keys(r: &RunReport) -> BTreeSet<Vec<usize>> {
    r.triangulation
        .as_ref()
        .and_then(|t| t.simplices.as_ref())
        .map(|s| s.iter().map(|x| x.key.clone()).collect())
        .unwrap_or_default()
}

struct OracleTally {
    ehrhart: usize,
    basis: usize,
    det_sum: usize,
    strategy: usize,
    nondeterministic: usize,
    errors: Vec<String>,
}

fn oracle_suite(out: &mut Outcome) -> OracleTally {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut tally = OracleTally {
        ehrhart: 0,
        basis: 0,
        det_sum: 0,
        strategy: 0,
        nondeterministic: 0,
        errors: Vec::new(),
    };
    for case in 0..ORACLE_CONES {
        let d = rng.gen_range(2..=4);
        let gens = random_cone(&mut rng, d, 8);
        let input = ConeInput::from_i64(&gens, InputKind::Gens).with_grading(&vec![1; d]);
        let f = facets(&gens);

        let mut all = Options::with_tasks(TaskSet::all());
        all.threads = Some(1);
        all.verify = true;
        all.keep_triangulation = true;
        let r = match run(&input, &all) {
            Ok(r) => r,
            Err(e) => {
                tally.errors.push(format!("case {case}: {e}"));
                continue;
            }
        };
        out.note_graded(&r);

        // (a) Ehrhart coefficients against lattice point counts
        let hs = r.hilbert_series.as_ref().expect("series");
        let h = expand(&hs.raw.numerator, &hs.raw.denominator, 8);
        if (0..=8).any(|k| h[k] as u64 != count_by_sum(&f, d, k)) {
            tally.ehrhart += 1;
        }

        // (b) Hilbert basis against the naive oracle
        if to_i64(r.hilbert_basis.as_ref().expect("basis")) != hilbert_basis_naive(&gens) {
            tally.basis += 1;
        }

        // (c) Σ|det| under permutations for equal generator degrees, and
        // the multiplicity under all permutations
        let poly_gens = random_polytope_cone(&mut rng, d, 8);
        let mut shuffled = poly_gens.clone();
        shuffled.shuffle(&mut rng);
        let mut tri = Options::with_tasks(TaskSet {
            volume: true,
            ..TaskSet::none()
        });
        tri.threads = Some(1);
        tri.tasks.tri = true;
        let a = run(&ConeInput::from_i64(&poly_gens, InputKind::Gens), &tri);
        let b = run(&ConeInput::from_i64(&shuffled, InputKind::Gens), &tri);
        let mut perm = gens.clone();
        perm.shuffle(&mut rng);
        let c = run(
            &ConeInput::from_i64(&perm, InputKind::Gens).with_grading(&vec![1; d]),
            &tri,
        );
        match (a, b, c) {
            (Ok(a), Ok(b), Ok(c)) => {
                if tri_size(&a).1 != tri_size(&b).1 || a.volume != b.volume || c.volume != r.volume {
                    tally.det_sum += 1;
                }
            }
            _ => tally.errors.push(format!("case {case}: permutation run failed")),
        }

        // (d) strategy invariance of the triangulation
        let strategies = [
            Strategy::pure_lex(),
            Strategy::pure_pyramid(),
            Strategy {
                supp_bound: 6,
                tri_bound: 4,
                memory_bound: 8,
                ..Strategy::default()
            },
        ];
        let mut sets = Vec::new();
        for s in strategies {
            let mut o = Options::with_tasks(TaskSet {
                tri: true,
                ..TaskSet::none()
            });
            o.threads = Some(1);
            o.keep_triangulation = true;
            o.strategy = s;
            match run(&input, &o) {
                Ok(x) => sets.push(keys(&x)),
                Err(e) => tally.errors.push(format!("case {case}: {e}")),
            }
        }
        if sets.len() != 3 || sets[0] != sets[1] || sets[0] != sets[2] || sets[0] != keys(&r) {
            tally.strategy += 1;
        }

        // determinism across thread counts, with pyramids forced
        let mut det_opts = all.clone();
        det_opts.strategy = Strategy::pure_pyramid();
        match deterministic(&input, &det_opts) {
            Ok(true) => {}
            Ok(false) => tally.nondeterministic += 1,
            Err(e) => tally.errors.push(format!("case {case}: {e}")),
        }
    }
    tally
}

#[test]
fn acceptance() {
    let mut out = Outcome {
        lines: Vec::new(),
        failed: 0,
        graded_runs: 0,
        graded_failures: 0,
    };

    let c1 = criterion_4x4(&mut out);
    let c2 = criterion_cross10(&mut out);
    let c3 = criterion_cyclo36(&mut out);
    criterion_5x5(&mut out);
    criterion_worked_example(&mut out);

    let t = Instant::now();
    let tally = oracle_suite(&mut out);
    let elapsed = t.elapsed();
    let ok = tally.ehrhart == 0
        && tally.basis == 0
        && tally.det_sum == 0
        && tally.strategy == 0
        && tally.errors.is_empty()
        && elapsed < LIMIT_ORACLES;
    out.report(
        6,
        ok,
        "oracle suite on 200 random cones: Ehrhart counts, Hilbert basis, det sums, strategy invariance, < 10 min",
        format!(
            "mismatches: ehrhart {}, basis {}, det sum {}, strategy {}; errors {:?}; {:.1} s",
            tally.ehrhart,
            tally.basis,
            tally.det_sum,
            tally.strategy,
            tally.errors.iter().take(3).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    );

    let mut det = Vec::new();
    for (name, (input, opts)) in [("4x4", &c1), ("cross10", &c2), ("cyclo36", &c3)] {
        det.push((name, deterministic(input, opts).unwrap_or(false)));
    }
    let ok = det.iter().all(|(_, d)| *d) && tally.nondeterministic == 0;
    out.report(
        7,
        ok,
        "identical machine-format reports at 1, 4 and 16 threads",
        format!("{det:?}, oracle cones differing: {}", tally.nondeterministic),
    );

    out.report(
        8,
        out.graded_runs > 0 && out.graded_failures == 0,
        "multiplicity equals the leading quasipolynomial coefficient times (d-1)! on every graded run",
        format!("{} graded runs, {} failures", out.graded_runs, out.graded_failures),
    );

    println!(
        "{} of {} criteria passed",
        out.lines.len() - out.failed,
        out.lines.len()
    );
    assert_eq!(out.failed, 0, "failed criteria:\n{}", out.lines.join("\n"));
}
