//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Tolerances are fixed here: every exact criterion uses zero tolerance,
//! Monte Carlo means must lie within 3 standard errors, the symbolic
//! identity at n = 8 must finish within 300 s and the rank sweep within 60 s.

use std::time::{Duration, Instant};

use distsep::bounds::{lemma_trdeg_cap, trdeg_ic_bound};
use distsep::claims::{verify_claims, ClaimsOptions};
use distsep::edm::{
    build_edm, column_stochasticize, psd_rank2_factorization, AlphaVector, StochasticEdm,
};
use distsep::exact::{int, rat, QMatrix, Rational};
use distsep::nested::oracle::{oracle_min_vertices, DEFAULT_GRID};
use distsep::nested::{check_nested, min_nested_polygon, restricted_rank_plus, NestedInstance};
use distsep::nmf::{
    factorization_to_nested, nested_to_factorization, nmf_best, to_fmatrix, trivial_factorization,
    verify_factorization, Factorization, NmfOptions,
};
use distsep::polygeom::{
    convex_hull, on_segment, oriented_volume_matrix, outer_polygon, scaling_equivalence,
    slack_matrix_simplex_slice, slice_geometry, verify_claim5_identity,
    verify_claim5_identity_scaled, vieta_recover, w_polygon, Point2, Polygon2,
};
use distsep::protocol::{protocol_from_factorization, quantum_size, simulate};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Criteria whose statement is false for the inputs it quantifies over.
/// They are still computed and reported; the run fails if one of them
/// unexpectedly passes, since the analysis behind this list would then be
/// wrong.
const EXPECTED_FAIL: &[&str] = &["w-slack-positive-scaling"];

fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |s, x| s + x)
}

fn stochastic(alpha: &AlphaVector) -> StochasticEdm {
    column_stochasticize(&build_edm(alpha)).unwrap()
}

/// The 200 instances shared by the rank and vertex criteria.
fn instances() -> Vec<AlphaVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|i| {
            let n = rng.gen_range(3..=30);
            AlphaVector::random(n, 10_000 + i, 40).unwrap()
        })
        .collect()
}

/// Reference vertex: the point of `col(D')` with coordinates `k` and `k+1`
/// zero and coordinate sum one, by a direct linear solve.
fn reference_vertex(a: &StochasticEdm, k: usize) -> Option<Vec<Rational>> {
    let n = a.n();
    let m = QMatrix::from_rows(vec![
        a.dprime.row(k),
        a.dprime.row((k + 1) % n),
        a.dprime.column_sums(),
    ])
    .ok()?;
    let c = m.solve(&[int(0), int(0), int(1)])?;
    a.dprime.mul_vec(&c).ok()
}

fn rank_three(inst: &[AlphaVector]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for alpha in inst {
        let d = build_edm(alpha).d;
        let ones = vec![Rational::one(); alpha.len()];
        let lin = alpha.values().to_vec();
        let sq: Vec<Rational> = lin.iter().map(|x| x * x).collect();
        let ok = d.rank() == 3 && [ones, lin, sq].iter().all(|v| d.solve(v).is_some());
        if !ok {
            bad.push(alpha.to_strings().join(","));
        }
    }
    let t = start.elapsed();
    Outcome {
        name: "rank-three",
        passed: bad.is_empty() && t < Duration::from_secs(60),
        detail: format!("{} instances, n in 3..=30, {:.2?}, failures {:?}", inst.len(), t, bad),
    }
}

fn outer_vertices_and_slack(inst: &[AlphaVector]) -> Outcome {
    let mut bad = Vec::new();
    let mut wrap_cases = 0;
    for alpha in inst {
        let a = stochastic(alpha);
        let n = a.n();
        let outer = outer_polygon(&a).unwrap();
        let vs = &outer.vertices;
        let slack = slack_matrix_simplex_slice(vs).unwrap();
        let vol = oriented_volume_matrix(outer.polygon.vertices());
        let positive = scaling_equivalence(&vol, slack.matrix()).is_some_and(|s| s.positive);
        for (k, v) in vs.iter().enumerate() {
            let zeros: Vec<usize> = (0..n).filter(|&i| v[i].is_zero()).collect();
            let mut expect = vec![k, (k + 1) % n];
            expect.sort();
            let ok = v.iter().all(|x| !x.is_negative())
                && sum(v).is_one()
                && zeros == expect
                && reference_vertex(&a, k).as_ref() == Some(v)
                && (0..n).all(|i| slack.matrix().get(i, k) == &v[i]);
            if !ok {
                bad.push(format!("{:?} k={}", alpha.to_strings(), k + 1));
            }
        }
        if !positive {
            bad.push(format!("{:?}: not a slack matrix of the outer polygon", alpha.to_strings()));
        }
        let last = alpha.values()[n - 1].clone();
        let first = alpha.values()[0].clone();
        if alpha.values().iter().all(|x| !((x - &last) * (x - &first)).is_positive()) {
            wrap_cases += 1;
        }
    }
    let a = stochastic(&AlphaVector::from_i64(&[0, 1, 2, 3]).unwrap());
    let v4 = outer_polygon(&a).unwrap().vertices[3].clone();
    let worked = v4 == vec![int(0), rat(1, 2), rat(1, 2), int(0)];
    Outcome {
        name: "outer-vertices-slack",
        passed: bad.is_empty() && worked && wrap_cases == inst.len(),
        detail: format!(
            "{} instances, wrap-around u_n nonpositive in {}, v_4(0,1,2,3) = (0,1/2,1/2,0): {}, failures {:?}",
            inst.len(),
            wrap_cases,
            worked,
            bad
        ),
    }
}

fn edge_contact() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=50 {
        for rep in 0..2u64 {
            let alpha = AlphaVector::random(n, 500 + 7 * n as u64 + rep, 25).unwrap();
            let g = slice_geometry(&stochastic(&alpha)).unwrap();
            count += 1;
            for e in 0..n {
                let (p, q) = g.outer.edge(e);
                if !g.inner.iter().any(|x| on_segment(p, q, x)) {
                    bad.push(format!("n={n} rep={rep} edge {}", e + 1));
                }
            }
        }
    }
    Outcome {
        name: "edge-contact",
        passed: bad.is_empty(),
        detail: format!("{count} instances, n in 3..=50, failures {bad:?}"),
    }
}

fn symbolic_identity() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut t8 = Duration::ZERO;
    for n in 3..=8 {
        let start = Instant::now();
        let r = verify_claim5_identity(n, 8).unwrap();
        let t = start.elapsed();
        if n == 8 {
            t8 = t;
        }
        ok &= r.holds() && r.pairs_checked == n * n;
        let mutated = verify_claim5_identity_scaled(n, 8, &rat(3, 2)).unwrap();
        ok &= !mutated.holds();
        lines.push(format!("n={n}: {} pairs, mutated fails at {}", r.pairs_checked, mutated.failures.len()));
    }
    Outcome {
        name: "w-determinant-identity",
        passed: ok && t8 < Duration::from_secs(300),
        detail: format!("{}; n=8 in {:.2?}", lines.join("; "), t8),
    }
}

fn w_positive_scaling() -> Outcome {
    let mut positive = 0;
    let mut invertible = 0;
    let mut total = 0;
    let mut first_bad = None;
    for n in 3..=10 {
        for rep in 0..5u64 {
            let raw = AlphaVector::random(n, 900 + 11 * n as u64 + rep, 30).unwrap();
            let (alpha, _) = raw.positive_shift();
            let a = stochastic(&alpha);
            let outer = outer_polygon(&a).unwrap();
            let s_out = slack_matrix_simplex_slice(&outer.vertices).unwrap();
            let w = w_polygon(&alpha).unwrap();
            let s_w = oriented_volume_matrix(&w.points);
            total += 1;
            match scaling_equivalence(&s_w, s_out.matrix()) {
                Some(s) if s.positive => positive += 1,
                Some(_) => {
                    invertible += 1;
                    first_bad.get_or_insert(format!("n={n} alpha={:?}", alpha.to_strings()));
                }
                None => {
                    first_bad.get_or_insert(format!("n={n}: no diagonal scaling"));
                }
            }
        }
    }
    Outcome {
        name: "w-slack-positive-scaling",
        passed: positive == total,
        detail: format!(
            "{total} positive alpha, n in 3..=10: positive scaling {positive}, invertible with mixed signs {}, first failure {:?}",
            invertible, first_bad
        ),
    }
}

fn vieta() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut bad = Vec::new();
    for t in 0..100 {
        let n = rng.gen_range(3..=12);
        let (alpha, _) = AlphaVector::random(n, 3000 + t, 25).unwrap().positive_shift();
        let w = w_polygon(&alpha).unwrap();
        let k = rng.gen_range(0..n);
        let lam = rat(rng.gen_range(0..=64), 64);
        let h = w.point(k + n - 1).lerp(w.point(k), &lam);
        let rec = vieta_recover(&w, &h, k).unwrap();
        let x = alpha.at(k).recip();
        let value = &x * &x - &rec.sigma2 * &x + &rec.sigma1;
        if !value.is_zero() {
            bad.push(format!("n={n} k={} lambda={lam}", k + 1));
        }
    }
    Outcome {
        name: "quadratic-recovery",
        passed: bad.is_empty(),
        detail: format!("100 points, exact root test, failures {bad:?}"),
    }
}

fn random_nested_instance(rng: &mut ChaCha8Rng) -> NestedInstance {
    let outer = loop {
        let raw: Vec<Point2> = (0..rng.gen_range(3..=12))
            .map(|_| Point2::from_i64(rng.gen_range(-25..=25), rng.gen_range(-25..=25)))
            .collect();
        let h = convex_hull(&raw);
        if (3..=8).contains(&h.len()) {
            break Polygon2::new(h).unwrap();
        }
    };
    let m = outer.len();
    let inner = (0..rng.gen_range(2..=8))
        .map(|_| {
            let i = rng.gen_range(0..m);
            if rng.gen_bool(0.25) {
                outer.vertex(i).lerp(outer.vertex(i + 1), &rat(rng.gen_range(0..=10), 10))
            } else {
                let j = rng.gen_range(0..m);
                let p = outer.vertex(i).lerp(outer.vertex(j), &rat(rng.gen_range(0..=10), 10));
                p.lerp(outer.vertex(rng.gen_range(0..m)), &rat(rng.gen_range(0..=6), 10))
            }
        })
        .collect();
    NestedInstance::new(inner, outer).unwrap()
}

fn nested_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut bad = Vec::new();
    for case in 0..100 {
        let inst = random_nested_instance(&mut rng);
        let cert = min_nested_polygon(&inst).unwrap();
        let k = oracle_min_vertices(&inst, DEFAULT_GRID).unwrap();
        if !check_nested(&cert, &inst) || cert.k != k {
            bad.push(format!("case {case}: solver {} oracle {k}", cert.k));
        }
    }
    let sq = Polygon2::new(vec![
        Point2::from_i64(-1, -1),
        Point2::from_i64(1, -1),
        Point2::from_i64(1, 1),
        Point2::from_i64(-1, 1),
    ])
    .unwrap();
    let diamond = NestedInstance::new(
        vec![
            Point2::from_i64(1, 0),
            Point2::from_i64(0, 1),
            Point2::from_i64(-1, 0),
            Point2::from_i64(0, -1),
        ],
        sq,
    )
    .unwrap();
    let kd = min_nested_polygon(&diamond).unwrap().k;
    let tri = Polygon2::new(vec![Point2::from_i64(0, 0), Point2::from_i64(3, 0), Point2::from_i64(1, 2)]).unwrap();
    let kt = min_nested_polygon(&NestedInstance::new(tri.vertices().to_vec(), tri).unwrap())
        .unwrap()
        .k;
    Outcome {
        name: "nested-solver",
        passed: bad.is_empty() && kd == 4 && kt == 3,
        detail: format!("100 instances vs oracle (grid {DEFAULT_GRID}), diamond k={kd}, triangle k={kt}, mismatches {bad:?}"),
    }
}

/// Exact restricted factorizations of `D'` of several sizes.
fn restricted_factorizations(a: &StochasticEdm) -> Vec<Factorization> {
    let g = slice_geometry(a).unwrap();
    let inst = NestedInstance::new(g.inner.clone(), g.outer.clone()).unwrap();
    let mut out = vec![trivial_factorization(a)];
    let cert = min_nested_polygon(&inst).unwrap();
    out.push(nested_to_factorization(&cert, a).unwrap());
    let outer_cert = distsep::nested::NestedCertificate::for_polygon(g.outer.clone(), &inst).unwrap();
    out.push(nested_to_factorization(&outer_cert, a).unwrap());
    // D' = (D' P)(P^T) for a column permutation P, plus a duplicated column.
    let n = a.n();
    let b = QMatrix::from_fn(n, n + 1, |i, j| a.dprime.get(i, j.min(n - 1)).clone());
    let c = QMatrix::from_fn(n + 1, n, |i, j| {
        if i == j && i < n - 1 {
            int(1)
        } else if j == n - 1 && i >= n - 1 {
            rat(1, 2)
        } else {
            int(0)
        }
    });
    out.push(Factorization::exact(b, c).unwrap());
    out
}

fn round_trip() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, n) in [3usize, 4, 5, 6, 8, 10].iter().enumerate() {
        let alpha = AlphaVector::random(*n, 40 + i as u64, 20).unwrap();
        let a = stochastic(&alpha);
        let g = slice_geometry(&a).unwrap();
        let inst = NestedInstance::new(g.inner, g.outer).unwrap();
        for f in restricted_factorizations(&a) {
            if !verify_factorization(&a.dprime, &f, 0.0) {
                bad.push(format!("n={n}: factorization does not verify"));
                continue;
            }
            let back = factorization_to_nested(&f, &a).unwrap();
            checked += 1;
            if back.certificate.k > f.size() || !check_nested(&back.certificate, &inst) {
                bad.push(format!("n={n}: size {} gave k={}", f.size(), back.certificate.k));
            }
        }
    }
    let a = stochastic(&AlphaVector::from_i64(&[0, 1, 2]).unwrap());
    let rr = restricted_rank_plus(&a).unwrap();
    let cert = distsep::nested::restricted_rank_certificate(&a).unwrap();
    let f = nested_to_factorization(&cert, &a).unwrap();
    let three = f.size() == 3 && verify_factorization(&a.dprime, &f, 0.0);
    Outcome {
        name: "factorization-nested-round-trip",
        passed: bad.is_empty() && rr == 3 && three,
        detail: format!("{checked} factorizations, restricted rank of D'(0,1,2) = {rr}, size-3 factorization verifies: {three}, failures {bad:?}"),
    }
}

fn psd_and_protocol() -> Outcome {
    let mut bad = Vec::new();
    let mut mc = Vec::new();
    for (idx, n) in [3usize, 4, 6, 9, 15, 30].iter().enumerate() {
        let alpha = AlphaVector::random(*n, 70 + idx as u64, 30).unwrap();
        let edm = build_edm(&alpha);
        if !psd_rank2_factorization(&alpha).verify(&edm.d) {
            bad.push(format!("n={n}: psd factorization"));
        }
        let q = quantum_size(&edm, &alpha).unwrap();
        if q.bits != 1 {
            bad.push(format!("n={n}: quantum bits {}", q.bits));
        }
        let a = column_stochasticize(&edm).unwrap();
        let mut facts = restricted_factorizations(&a);
        facts.push(Factorization::exact(edm.d.clone(), QMatrix::identity(*n)).unwrap());
        for f in &facts {
            let p = protocol_from_factorization(f).unwrap();
            let Factorization::Exact { b, c } = f else { unreachable!() };
            if p.expectation_matrix() != b.mul(c).unwrap() {
                bad.push(format!("n={n}: expectation identity"));
            }
        }
        let p = protocol_from_factorization(&facts[1]).unwrap();
        for (i, j) in [(0, n - 1), (n / 2, 0), (n - 1, n / 3)] {
            let s = simulate(&p, i, j, 100_000, 1000 + idx as u64).unwrap();
            if !s.within(3.0) {
                bad.push(format!("n={n} cell ({},{}): {} vs {}", i + 1, j + 1, s.empirical, s.exact));
            }
            mc.push(s);
        }
    }
    Outcome {
        name: "psd-and-protocol",
        passed: bad.is_empty(),
        detail: format!("{} Monte Carlo cells at 1e5 trials within 3 SE, failures {bad:?}", mc.len()),
    }
}

fn bound_calculators() -> Outcome {
    let mut ok = trdeg_ic_bound(16, 2) == 6;
    for m in 1..=30u64 {
        ok &= trdeg_ic_bound(m * m, 2) == (2 * m).saturating_sub(2);
    }
    let mut violations = 0;
    for total in 0..=100u64 {
        for v in 0..=total {
            let k = total - v;
            for d in 0..=total {
                if 4 * lemma_trdeg_cap(d, v, k) > total * total {
                    violations += 1;
                }
            }
        }
    }
    Outcome {
        name: "bound-calculators",
        passed: ok && violations == 0,
        detail: format!("square n up to 900 reproduce 2 sqrt(n) - 2, inequality violations for v+k <= 100: {violations}"),
    }
}

fn reproducibility() -> Outcome {
    let once = || {
        let alpha = AlphaVector::random(7, 123, 30).unwrap();
        let claims = verify_claims(&alpha, &ClaimsOptions { seed: 5, ..Default::default() }).unwrap();
        let a = stochastic(&alpha);
        let nmf = nmf_best(
            &to_fmatrix(&a.dprime),
            &NmfOptions { r: 4, seeds: 4, iters: 400, seed: 3, ..Default::default() },
        );
        let p = protocol_from_factorization(&trivial_factorization(&a)).unwrap();
        let sim = simulate(&p, 2, 5, 20_000, 9).unwrap();
        serde_json::to_string(&(claims, nmf, sim)).unwrap()
    };
    let (x, y) = (once(), once());
    Outcome {
        name: "reproducibility",
        passed: x == y,
        detail: format!("claims, nmf search and simulation serialized twice: {} bytes, identical {}", x.len(), x == y),
    }
}

fn main() {
    let inst = instances();
    let criteria: Vec<Box<dyn Fn() -> Outcome + '_>> = vec![
        Box::new(|| rank_three(&inst)),
        Box::new(|| outer_vertices_and_slack(&inst)),
        Box::new(edge_contact),
        Box::new(symbolic_identity),
        Box::new(w_positive_scaling),
        Box::new(vieta),
        Box::new(nested_vs_oracle),
        Box::new(round_trip),
        Box::new(psd_and_protocol),
        Box::new(bound_calculators),
        Box::new(reproducibility),
    ];
    let (mut passed, mut unexpected) = (0, 0);
    for c in &criteria {
        let start = Instant::now();
        let o = c();
        let expected_fail = EXPECTED_FAIL.contains(&o.name);
        let tag = match (o.passed, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        passed += usize::from(o.passed);
        if o.passed == expected_fail {
            unexpected += 1;
        }
        println!("{tag:<18} {:<32} [{:.1?}] {}", o.name, start.elapsed(), o.detail);
    }
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected", criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
