//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (visible with `--nocapture`). Runtime limits are
//! asserted where the criterion states one.

use diambound::abelian_bound::{
    brute_force_min_length_table, presented_group, zn_length_lower_bound, IntMatrix,
};
use diambound::flat_torus::{self, TorusClass};
use diambound::handle_complex::{scenario, Essentiality, HandleKind};
use diambound::hyp3::{meridian_lower_bound, tube_area_volume_ratio, MargulisConfig, TubeGeometry};
use diambound::metric_graph::{self, cycle_rank, MetricGraph};
use diambound::pipeline;
use diambound::presentation::{random_presentation, triangularize};
use diambound::rng::SplitMix64;
use std::time::Instant;

fn pass(criterion: u32, detail: String) {
    println!("criterion {criterion}: PASS — {detail}");
}

#[test]
fn c01_triangularization() {
    let t0 = Instant::now();
    let mut rng = SplitMix64::new(0xacc0101);
    for _ in 0..200 {
        let p = random_presentation(&mut rng, 5, 4, 12);
        let ell = p.length();
        let before = presented_group(&p.abelianization_matrix());
        let t = triangularize(&p).expect("random relators are nonempty");
        let q = t.as_presentation();
        assert!(q.relators.iter().all(|r| r.reduced().len() == 3));
        assert!(q.length() <= 3 * ell);
        assert_eq!(before, presented_group(&q.abelianization_matrix()));
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 5.0, "took {dt:?}");
    pass(1, format!("200 presentations triangularized, SNF preserved, in {dt:?}"));
}

#[test]
fn c02_short_basis() {
    let t0 = Instant::now();
    let mut rng = SplitMix64::new(0xacc0202);
    for _ in 0..1000 {
        let t = flat_torus::random_torus(&mut rng, 50.0);
        let b = flat_torus::short_basis(&t).expect("nondegenerate torus");
        assert_eq!(flat_torus::delta(b.x, b.y).abs(), 1);
        // Exhaustive systole check over the given-basis window.
        let mut brute = f64::INFINITY;
        for a in -50i64..=50 {
            for bb in -50i64..=50 {
                if a == 0 && bb == 0 {
                    continue;
                }
                brute = brute.min(t.class_length(TorusClass::new(a, bb)));
            }
        }
        assert!((b.x_length - brute).abs() <= 1e-9 * brute);
        let cert = flat_torus::short_basis_certificate(&t, &b);
        assert!(cert.lhs <= cert.rhs + 1e-9 * (1.0 + cert.rhs));
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "took {dt:?}");
    pass(2, format!("1000 lattices: unimodular short basis, systole vs brute force, in {dt:?}"));
}

#[test]
fn c03_coefficient_bound() {
    let mut rng = SplitMix64::new(0xacc0303);
    let mut done = 0;
    while done < 1000 {
        let t = flat_torus::random_torus(&mut rng, 50.0);
        let b = flat_torus::short_basis(&t).expect("nondegenerate torus");
        let l = TorusClass::new(rng.range_i64(-20, 20), rng.range_i64(-20, 20));
        if l.is_zero() || gcd(l.a, l.b) != 1 {
            continue;
        }
        let len = t.class_length(l);
        let c = flat_torus::class_coefficients(&t, &b, len, l).expect("nonzero class");
        assert_eq!(c.a * b.x.a + c.b * b.y.a, l.a);
        assert_eq!(c.a * b.x.b + c.b * b.y.b, l.b);
        assert!(c.bound.lhs <= c.bound.rhs + 1e-9 * (1.0 + c.bound.rhs), "{:?}", c.bound);
        done += 1;
    }
    pass(3, "1000 primitive classes satisfy the coefficient bound".to_string());
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn c04_intersection_inequality() {
    let mut rng = SplitMix64::new(0xacc0404);
    let mut done = 0;
    while done < 1000 {
        let t = flat_torus::random_torus(&mut rng, 50.0);
        let a = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        let b = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        let mu = TorusClass::new(rng.range_i64(-9, 9), rng.range_i64(-9, 9));
        if flat_torus::delta(a, b) == 0 {
            continue;
        }
        let ineq = flat_torus::intersection_inequality(&t, a, b, mu).expect("nonparallel");
        assert!(ineq.lhs <= ineq.rhs + 1e-9 * (1.0 + ineq.rhs), "{ineq:?}");
        done += 1;
    }
    pass(4, "1000 triples satisfy the intersection inequality".to_string());
}

#[test]
fn c05_graph_rank_and_subdivision() {
    let mut rng = SplitMix64::new(0xacc0505);
    let eps = 0.25;
    let mut checked = 0;
    while checked < 500 {
        let mut g = metric_graph::random_graph(&mut rng, 7, 10);
        let girth = metric_graph::girth(&g);
        if girth.is_finite() {
            // Rescale so the girth hypothesis holds at eps.
            let scale = eps / girth * (1.0 + 1e-9);
            for e in &mut g.edges {
                e.length *= scale;
            }
        }
        let n = g.total_length() + 0.01;
        let cert = metric_graph::rank_bound_certificate(&g, n, eps).expect("hypotheses hold");
        // Exact integer comparison against the floor of the bound.
        assert!(cert.rank as f64 <= cert.bound, "{cert:?}");
        checked += 1;
    }
    for _ in 0..200 {
        let g = metric_graph::random_closed_graph(&mut rng);
        let rank = cycle_rank(&g);
        let out = metric_graph::coarse_subdivision(&g).expect("closed connected rank >= 2");
        assert!(out.edges.len() <= 3 * (rank - 1), "{} > 3({rank}-1)", out.edges.len());
        assert_eq!(cycle_rank(&out), rank);
    }
    pass(5, "500 rank certificates + 200 coarse subdivisions, exact".to_string());
}

#[test]
fn c06_zn_bound_vs_oracle() {
    let t0 = Instant::now();
    let table = brute_force_min_length_table(200, 2, 12, 400_000_000).expect("in cap");
    for (n, min) in table {
        let bound = zn_length_lower_bound(n).expect("n >= 2");
        let m = min.unwrap_or_else(|| panic!("no presentation found for Z_{n}"));
        // Exact comparison on the integer side.
        assert!(
            m as f64 >= bound.primary,
            "Z_{n}: oracle {m} below bound {}",
            bound.primary
        );
    }
    // The stated closed form overclaims at N = 2: 2.13… > oracle 2.
    let b2 = zn_length_lower_bound(2).unwrap();
    assert!(b2.paper_variant > 2.0);
    assert!(b2.paper_variant_overclaims);
    assert_eq!(b2.primary, 2.0);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "took {dt:?}");
    pass(6, format!("oracle ≥ certified bound for N ∈ [2,200]; closed form flagged at N=2; {dt:?}"));
}

#[test]
fn c07_tube_geometry() {
    let mut l = 0.1;
    while l <= 10.0 {
        let ratio = tube_area_volume_ratio(l).expect("positive radius");
        let expected = 2.0 * l.cosh() / l.sinh();
        assert!((ratio - expected).abs() <= 1e-12 * expected);
        // Cross-check against the closed forms with an arbitrary core.
        let tube = TubeGeometry::new(l, 0.37).unwrap();
        assert!((tube.boundary_area() / tube.volume() - ratio).abs() <= 1e-12 * ratio);
        l += 0.1;
    }
    // Meridian consistency at L = ½Cℓ.
    for (c, ell) in [(2.0, 1.0), (3.5, 2.0), (1.2, 7.0)] {
        let tube = TubeGeometry::new(0.5 * c * ell, 1.0).unwrap();
        let diff = (meridian_lower_bound(c, ell) - tube.meridian_length()).abs();
        assert!(diff <= 1e-12 * tube.meridian_length());
    }
    pass(7, "area/volume ratio and meridian formula consistent over L ∈ [0.1, 10]".to_string());
}

#[test]
fn c08_surgery_suite() {
    // Scripted scenarios first.
    let scripted: Vec<diambound::handle_complex::HandleComplex> = vec![
        scenario::mixed(),
        scenario::h0_pair(),
        scenario::capped_chain(3),
        scenario::strip(4, false, Essentiality::Inessential),
        scenario::strip(3, true, Essentiality::Inessential),
        scenario::strip(5, false, Essentiality::Essential),
        scenario::two_strips(),
    ];
    let mut rng = SplitMix64::new(0xacc0808);
    let randoms = (0..93).map(|_| scenario::random_complex(&mut rng));
    let mut count = 0;
    for c in scripted.into_iter().chain(randoms) {
        let monkeys = c.monkey_count();
        let (good, cert) = c.make_good().expect("annotated scenario");
        // Exact rational chain: final ≤ 2·post-möbius ≤ 4·original.
        assert!(cert.mobius_doubling_ok, "{cert:?}");
        assert!(cert.zero_handle_doubling_ok, "{cert:?}");
        assert!(cert.chained_bound_ok, "{cert:?}");
        assert!(cert.h0_edge_bound_ok, "{cert:?}");
        assert_eq!(good.monkey_count(), monkeys);
        // Zero inessential strips remain.
        let strips = good.classify().unwrap().strips;
        assert!(strips
            .iter()
            .all(|s| good.strip_annotations.get(&s.id) == Some(&Essentiality::Essential)));
        // No embedded boundary loop through a 0-handle edge.
        for h in &good.handles {
            if h.kind == HandleKind::H0 {
                assert!(!good.boundary_loop_through_h0(h.id).unwrap());
            }
        }
        count += 1;
    }
    pass(8, format!("{count} complexes made good with exact certificates"));
}

#[test]
fn c09_constants_report() {
    let t0 = Instant::now();
    let report = pipeline::solve_r(MargulisConfig::new(0.104).unwrap(), 3).expect("finite R");
    let solve_time = t0.elapsed();
    assert!(solve_time.as_secs_f64() < 60.0, "took {solve_time:?}");

    // Finite R with per-ℓ certificates through the dominance threshold.
    assert!(report.r.chain_value.is_finite());
    assert!(report.r.chain_value > report.c3.chain_value);
    assert!(!report.certificate.is_empty());
    assert_eq!(report.certificate[0].ell, 3);
    assert!(report
        .certificate
        .iter()
        .any(|row| row.ell == report.dominance.ell_star));
    for row in &report.certificate {
        assert!(row.lhs > row.rhs, "certificate row failed: {row:?}");
    }
    assert!(report.dominance.margin_ok && report.dominance.derivative_ok);

    // Chain identities, exact in f64.
    let eps = report.epsilon_tilde;
    assert_eq!(report.b2.chain_value, report.b1.chain_value + 6.0);
    assert_eq!(
        report.b3.chain_value,
        512.0 * std::f64::consts::PI * std::f64::consts::PI
            * report.b2.chain_value
            * report.b2.chain_value
            / (3.0 * eps * eps)
    );
    assert_eq!(report.b4.chain_value, report.b2.chain_value + report.b3.chain_value);

    // R nonincreasing across the epsilon grid.
    let rs: Vec<f64> = [0.05, 0.104, 0.2]
        .iter()
        .map(|&e| {
            pipeline::solve_r(MargulisConfig::new(e).unwrap(), 3)
                .unwrap()
                .r
                .chain_value
        })
        .collect();
    assert!(rs[0] >= rs[1] && rs[1] >= rs[2], "{rs:?}");

    // Byte-stable report (regression snapshot of the full JSON).
    let again = pipeline::solve_r(MargulisConfig::new(0.104).unwrap(), 3).unwrap();
    assert_eq!(pipeline::to_json(&report), pipeline::to_json(&again));
    assert_eq!(report.r.chain_value.to_bits(), 4669212602688250929);

    pass(
        9,
        format!(
            "R = {:.6} in {solve_time:?}; chain identities exact; grid {rs:?} nonincreasing",
            report.r.chain_value
        ),
    );
}

#[test]
fn c10_kernel_basis() {
    let mut rng = SplitMix64::new(0xacc1010);
    let mut done = 0;
    while done < 500 {
        let n = rng.below(4) as usize + 3; // 3..=6
        let g = [
            (0..n).map(|_| rng.range_i64(-9, 9)).collect::<Vec<_>>(),
            (0..n).map(|_| rng.range_i64(-9, 9)).collect::<Vec<_>>(),
        ];
        let k = match flat_torus::kernel_basis(&g, 9.0) {
            Err(flat_torus::FlatTorusError::NotRankTwo) => continue,
            Err(e) => panic!("unexpected error {e}"),
            Ok(k) => k,
        };
        assert_eq!(k.vectors.len(), n - 2);
        let max_entry = g.iter().flatten().map(|e| e.abs()).max().unwrap();
        for s in &k.vectors {
            for row in &g {
                assert_eq!(row.iter().zip(s).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
            for &c in s {
                assert!(c.abs() <= 2 * max_entry * max_entry);
            }
        }
        done += 1;
    }
    pass(10, "500 kernel bases annihilate exactly within the coefficient bound".to_string());
}

#[test]
fn case_classification_interface() {
    // The Case 1 / Case 2 signatures the solver's narrative rests on.
    assert_eq!(pipeline::classify_case(&IntMatrix::new(0, 2)), pipeline::CaseClassification::Case1ZxZ);
    assert_eq!(
        pipeline::classify_case(&IntMatrix::from_rows(&[vec![0, 7]])),
        pipeline::CaseClassification::Case2ZxZr { r: 7 }
    );
}

#[test]
fn graph_format_interface() {
    let text = "V 3\nE 0 1 1.5\nE 1 2 0.25\nE 2 2 3\n";
    let g: MetricGraph = metric_graph::parse(text).unwrap();
    assert_eq!(cycle_rank(&g), 1);
    let printed = metric_graph::print(&g);
    assert_eq!(metric_graph::parse(&printed).unwrap(), g);
}

#[test]
fn complex_format_interface() {
    let c = scenario::mixed();
    let text = diambound::handle_complex::print(&c);
    let back = diambound::handle_complex::parse(&text).unwrap();
    assert_eq!(back, c);
}
