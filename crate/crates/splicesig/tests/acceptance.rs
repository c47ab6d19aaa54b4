//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. All equalities are exact rational equalities.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use splicesig::dedekind::{
    dedekind_sum, dedekind_sum_fast, reciprocity_defect, three_term_check,
};
use splicesig::ops::{
    completion, cut_edge, elementary, generate_random, iterated_torus, splice, star, torus,
};
use splicesig::rational::{int, rat, Rational};
use splicesig::sgamma::{check_main_theorem, s_gamma};
use splicesig::signature::{
    average_signature, family2_average_oracle, signature_function,
};
use splicesig::SpliceDiagram;

const EXAMPLE4: &str = include_str!("fixtures/example4.json");

fn finish(criterion: u32, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {criterion} PASS: {what} ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2?} > {budget:.2?}"
    );
}

#[test]
fn criterion_1_example4_fixture() {
    let started = Instant::now();
    let d = SpliceDiagram::parse(EXAMPLE4.as_bytes()).unwrap();
    let b = s_gamma(&d).unwrap();
    assert_eq!(b.linking, int(24));
    assert_eq!(b.nodes, int(38));
    assert_eq!(b.edges, rat(1, 171));
    assert_eq!(b.arrowheads, rat(14, 171));
    assert_eq!(b.total, rat(1015, 19));
    assert_eq!(average_signature(&d).unwrap(), rat(-1015, 57));
    let report = check_main_theorem(&d).unwrap();
    assert!(!report.skipped() && report.holds);
    finish(1, "S(Gamma) = 1015/19 with all terms, average = -1015/57, theorem holds", started, Duration::from_millis(100));
}

#[test]
fn criterion_2_torus_knots() {
    let started = Instant::now();
    let mut checked = 0;
    for q in 3u64..=25 {
        for p in 2..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let d = torus(p, q).unwrap();
            let want = -(int(p) - rat(1, p)) * (int(q) - rat(1, q)) / int(3);
            assert_eq!(average_signature(&d).unwrap(), want, "T({p},{q})");
            let report = check_main_theorem(&d).unwrap();
            assert!(!report.skipped() && report.holds, "T({p},{q})");
            checked += 1;
        }
    }
    assert!(checked > 150);
    finish(2, "average of every torus knot 2 <= p < q <= 25 matches -(p-1/p)(q-1/q)/3", started, Duration::from_secs(10));
}

#[test]
fn criterion_3_iterated_torus_knots() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(42);
    for case in 0..100 {
        let n = rng.gen_range(1..=3usize);
        let pairs: Vec<(u64, u64)> = (0..n)
            .map(|_| loop {
                let p = rng.gen_range(2..=12u64);
                let q = rng.gen_range(2..=12u64);
                if p.gcd(&q) == 1 {
                    break (p, q);
                }
            })
            .collect();
        let d = iterated_torus(&pairs).unwrap();
        let want: Rational = pairs
            .iter()
            .map(|&(p, q)| (int(p) - rat(1, p)) * (int(q) - rat(1, q)))
            .sum();
        assert_eq!(s_gamma(&d).unwrap().total, want, "case {case}: {pairs:?}");
        let report = check_main_theorem(&d).unwrap();
        assert!(!report.skipped() && report.holds, "case {case}: {pairs:?}");
    }
    finish(3, "100 random iterated torus knots match the cabling closed form and the theorem", started, Duration::from_secs(30));
}

#[test]
fn criterion_4_trefoil_step_function() {
    let started = Instant::now();
    let step = signature_function(&torus(2, 3).unwrap()).unwrap();
    assert_eq!(step.breakpoints(), &[rat(1, 6), rat(5, 6)]);
    assert_eq!(step.values(), &[0, -2, 0]);
    assert_eq!(step.integral(), rat(-4, 3));
    finish(4, "trefoil breakpoints {1/6, 5/6}, values (0, -2, 0), integral -4/3", started, Duration::from_millis(100));
}

#[test]
fn criterion_5_dedekind_suite() {
    let started = Instant::now();

    // fast = naive for every q <= 2000, 200 sampled p per q
    (1i64..=2000).into_par_iter().for_each(|q| {
        let mut rng = StdRng::seed_from_u64(q as u64);
        for _ in 0..200 {
            let p = rng.gen_range(-3 * q..=3 * q);
            assert_eq!(
                dedekind_sum_fast(p, q).unwrap(),
                dedekind_sum(p, q).unwrap(),
                "fast != naive at ({p}, {q})"
            );
        }
    });

    // reciprocity, exactly, for every coprime pair p < q <= 500
    (2i64..=500).into_par_iter().for_each(|q| {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let lhs = (dedekind_sum_fast(p, q).unwrap() + dedekind_sum_fast(q, p).unwrap()) * int(12);
            assert_eq!(lhs, reciprocity_defect(p, q).unwrap(), "reciprocity fails at ({p}, {q})");
        }
    });

    // three-term law on 1000 random admissible quadruples
    let mut rng = StdRng::seed_from_u64(5);
    let mut coprime = |bound: i64| loop {
        let a = rng.gen_range(1..=bound);
        let b = rng.gen_range(1..=bound);
        if a.gcd(&b) == 1 {
            break (a, b);
        }
    };
    for _ in 0..1000 {
        let (p, q) = coprime(80);
        let (u, v) = coprime(80);
        assert!(three_term_check(p, q, u, v).unwrap(), "three-term law fails at ({p},{q},{u},{v})");
    }

    // the paper's two aggregate values
    let left = dedekind_sum(-19, 38).unwrap()
        + dedekind_sum(-20, 38).unwrap()
        + dedekind_sum(1, 38).unwrap();
    assert_eq!(left, rat(45, 19));
    let right = dedekind_sum(1, 18).unwrap()
        + dedekind_sum(-9, 18).unwrap()
        + dedekind_sum(2, 18).unwrap()
        + dedekind_sum(-12, 18).unwrap();
    assert_eq!(right, rat(11, 6));

    finish(5, "fast=naive to q=2000, reciprocity to q=500, three-term x1000, aggregates 45/19 and 11/6", started, Duration::from_secs(60));
}

#[test]
fn criterion_6_property_suites_on_generated_corpus() {
    let started = Instant::now();

    let skipped: u64 = (0u64..1000)
        .into_par_iter()
        .map(|seed| {
            let d = generate_random(seed, 5).unwrap();
            let report = d.validate();
            assert!(report.is_valid() && report.is_almost_minimal && report.is_link, "seed {seed}");
            let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed_5eed);

            // route A (step-function integral) vs route B (Dedekind sums):
            // asserted inside average_signature
            let avg = average_signature(&d).unwrap();

            let node_edges = d.node_node_edges();
            if !node_edges.is_empty() {
                let e = node_edges[rng.gen_range(0..node_edges.len())];
                let edge = d.edges()[e].clone();
                let cut = cut_edge(&d, (&edge.ends[0], &edge.ends[1])).unwrap();

                // cut/splice round trip restores the diagram, and re-cutting
                // the spliced edge restores the sides with their multiplicities
                let glued =
                    splice(&cut.side_a, &cut.arrowhead_a, &cut.side_b, &cut.arrowhead_b).unwrap();
                assert_eq!(glued, d, "seed {seed}: cut/splice round trip");
                let again = cut_edge(&glued, (&edge.ends[0], &edge.ends[1])).unwrap();
                assert_eq!((again.mult_a, again.mult_b), (cut.mult_a, cut.mult_b), "seed {seed}");
                assert_eq!((again.side_a, again.side_b), (cut.side_a.clone(), cut.side_b.clone()));

                // node and leaf multiplicities are preserved inside each side
                for side in [&cut.side_a, &cut.side_b] {
                    for v in side.vertices() {
                        if v.kind != splicesig::VertexKind::Arrowhead {
                            assert_eq!(
                                side.vertex_multiplicity(&v.id).unwrap(),
                                d.vertex_multiplicity(&v.id).unwrap(),
                                "seed {seed}: multiplicity of {} not preserved",
                                v.id
                            );
                        }
                    }
                }

                // linking-term identity for the completions: -2ab
                let done_a = completion(&cut.side_a, &cut.arrowhead_a).unwrap();
                let done_b = completion(&cut.side_b, &cut.arrowhead_b).unwrap();
                let diff = s_gamma(&d).unwrap().linking
                    - s_gamma(&done_a).unwrap().linking
                    - s_gamma(&done_b).unwrap().linking;
                assert_eq!(diff, int(-2i64) * int(cut.mult_a) * int(cut.mult_b), "seed {seed}: -2ab");

                // splice additivity of the average with the eta correction
                let side_sum = average_signature(&cut.side_a).unwrap()
                    + average_signature(&cut.side_b).unwrap()
                    + int(cut.eta);
                assert_eq!(avg, side_sum, "seed {seed}: splice additivity");
            }

            // S-invariance under a compatible trivial splice
            let heads: Vec<String> = d.arrowheads().map(|a| a.id.clone()).collect();
            let head = &heads[rng.gen_range(0..heads.len())];
            let b: BigInt = d
                .arrowheads()
                .filter(|a| a.id != *head)
                .map(|a| d.linking_number(head, &a.id).unwrap())
                .sum();
            let partner = elementary(1, b.to_u64().unwrap()).unwrap();
            let glued = splice(&d, head, &partner, "ab").unwrap();
            assert_eq!(
                s_gamma(&glued).unwrap().total,
                s_gamma(&d).unwrap().total,
                "seed {seed}: trivial splice changes S"
            );

            // the main identity on every diagram the theorem covers
            let theorem = check_main_theorem(&d).unwrap();
            if theorem.skipped() {
                1u64
            } else {
                assert!(theorem.holds, "seed {seed}: theorem fails");
                0
            }
        })
        .sum();
    assert!(skipped <= 100, "too many skipped diagrams: {skipped}/1000");

    // closed-form oracle for the star family against the full pipeline
    let mut rng = StdRng::seed_from_u64(99);
    for case in 0..100 {
        let (p, q) = loop {
            let p = rng.gen_range(2..=7u64);
            let q = rng.gen_range(2..=7u64);
            if p.gcd(&q) == 1 {
                break (p, q);
            }
        };
        let mults: Vec<u64> = (0..rng.gen_range(1..=3usize)).map(|_| rng.gen_range(1..=4)).collect();
        assert_eq!(
            family2_average_oracle(p, q, &mults).unwrap(),
            average_signature(&star(p, q, &mults).unwrap()).unwrap(),
            "case {case}: star({p},{q},{mults:?})"
        );
    }

    finish(
        6,
        "1000-diagram corpus: round trips, preservation, -2ab, S-invariance, additivity, route agreement, star oracle, theorem",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_7_cli_determinism_and_exit_codes() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_splicesig");
    let fixture = |name: &str| format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));

    // byte-identical JSON reports across repeated runs
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let a = run(&["invariants", &fixture("example4.json"), "--json"]);
    let b = run(&["invariants", &fixture("example4.json"), "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "invariants --json is not byte-identical");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"total\": \"1015/19\""), "{text}");
    assert!(text.contains("\"integral_route\": \"-1015/57\""), "{text}");

    let g1 = run(&["generate", "--seed", "11", "--nodes", "5"]);
    let g2 = run(&["generate", "--seed", "11", "--nodes", "5"]);
    assert!(g1.status.success());
    assert_eq!(g1.stdout, g2.stdout, "generate is not deterministic");

    // exit-code contract: 0 success, 1 semantic failure, 2 I/O or usage
    let example4 = fixture("example4.json");
    let zero_weight = fixture("zero_weight.json");
    let dangling = fixture("dangling_edge.json");
    let unknot = fixture("unknot_figure.json");
    let codes: [(Vec<&str>, i32); 9] = [
        (vec!["validate", &example4], 0),
        (vec!["validate", &zero_weight], 1),
        (vec!["validate", &dangling], 2),
        (vec!["validate", "/nonexistent/diagram.json"], 2),
        (vec!["check", &example4], 0),
        (vec!["check", &unknot], 0),
        (vec!["check", "--random", "25", "--seed", "3"], 0),
        (vec!["selftest", "--identities", "--max-q", "60"], 0),
        (vec!["selftest", "--max-q", "0"], 2),
    ];
    for (args, want) in codes {
        let out = Command::new(bin).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(want), "exit code for {args:?}");
    }
    finish(7, "byte-identical JSON reports and the documented exit-code contract", started, Duration::from_secs(60));
}
