//! Acceptance criteria. Runs without the libtest harness so each criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_complex::Complex64;
use phasemat::canonical::{
    canonical_spanning_forest, canonicalize, check_canonical, is_essentially_oriented, minor_phase, shuffle_exponent,
    shuffle_sign, AssociatedBipartiteGraph,
};
use phasemat::json::{parse_matrix, parse_phirotope};
use phasemat::realize::{
    decide_realizability, max_phase_residual, normalize_to_tree, reconstruct, verify, NonRealizability,
    RealizabilityVerdict, UnsupportedReason,
};
use phasemat::{hypersum, zero_in_hypersum, ComplexMatrix, Phase, Phirotope};
use rand::Rng;

use common::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

/// 1. The rank-2 example is not realizable, with witness {4, 5}.
fn nonreal_witness() -> Check {
    let phi = nonreal2ex();
    let start = Instant::now();
    let verdict = decide_realizability(&phi);
    let elapsed = start.elapsed();
    let RealizabilityVerdict::NotRealizable(NonRealizability::Mismatch { witness, candidate }) = verdict else {
        return Err(format!("unexpected verdict {verdict:?}"));
    };
    ensure(witness.basis == vec![3, 4], || format!("witness {:?}", witness.basis))?;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let expected = [
        [
            one,
            zero,
            one,
            i,
            Complex64::from_polar(1.0, std::f64::consts::PI / 3.0),
        ],
        [zero, one, one, one, one],
    ];
    let mut err: f64 = 0.0;
    for (r, row) in expected.iter().enumerate() {
        for (c, &z) in row.iter().enumerate() {
            let e = candidate.entry(r, c);
            let target = phasemat::Entry::from_complex(z);
            err = err
                .max(e.phase().distance(target.phase()))
                .max((e.norm() - target.norm()).abs());
        }
    }
    ensure(err < 1e-9, || format!("candidate entry error {err:e}"))?;
    let d = witness.computed.distance(ph(11.0 / 12.0));
    ensure(d < 1e-9, || format!("computed phase {} off by {d:e}", witness.computed))?;
    ensure(witness.expected == ph(5.0 / 6.0), || {
        format!("expected phase {}", witness.expected)
    })?;
    within(elapsed, Duration::from_millis(100))?;
    Ok(format!(
        "witness {{4,5}}, computed {} (error {d:.1e}), candidate error {err:.1e}, {elapsed:?}",
        witness.computed
    ))
}

/// 2. The same phirotope satisfies every Grassmann–Plücker relation.
fn nonreal_gp_valid() -> Check {
    let phi = nonreal2ex();
    let start = Instant::now();
    let v = phi.check_gp();
    let elapsed = start.elapsed();
    ensure(v.is_empty(), || {
        format!("{} violations, first {:?}", v.len(), v.first())
    })?;
    within(elapsed, Duration::from_millis(100))?;
    Ok(format!("0 violations, {elapsed:?}"))
}

/// 3. The non-uniform rank-3 example is essentially oriented, and its
///    canonical rephasing matches the expected one up to gauge.
fn runex_orientation() -> Check {
    let start = Instant::now();
    let phi = Phirotope::from_matrix(&runex_matrix(), TOL).map_err(|e| e.to_string())?;
    let eo = is_essentially_oriented(&phi).map_err(|e| e.to_string())?;
    let c = canonicalize(&phi).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(eo, || "not essentially oriented".into())?;

    let forest = canonical_spanning_forest(&AssociatedBipartiteGraph::from_phirotope(&phi).unwrap());
    ensure(forest.edges == vec![(0, 3), (1, 3), (2, 4), (1, 4)], || {
        format!("forest {:?}", forest.edges)
    })?;
    check_canonical(&c.canonical, &forest).map_err(|e| e.to_string())?;
    let recomposed = phi.rephase(&c.rho).unwrap().scale_global(c.global_phase).unwrap();
    ensure(recomposed == c.canonical, || "canonical ≠ g·φ^ρ".into())?;

    // Our gauge fixes ρ_4 = 1 and rephases towards the canonical form; the
    // published vector rephases the other way with its own gauge and
    // reorientation. Equal up to a global phase, inversion and real signs:
    // ρ_ours · ρ_published ∈ c · {±1}ⁿ.
    let published = [1.5, 1.75, 0.0, 1.75, 0.0].map(ph);
    let prod: Vec<Phase> = c.rho.as_slice().iter().zip(published).map(|(&a, b)| a * b).collect();
    let base = prod[0];
    let ok = prod.iter().all(|&p| (p * base.inv()).is_real(TOL));
    ensure(ok, || {
        format!("ρ = {:?} not gauge-equivalent to published", c.rho.as_slice())
    })?;

    let from_fixture = runex_phirotope();
    ensure(from_fixture.approx_eq(&phi, TOL), || {
        format!("fixture phirotope differs by {:e}", from_fixture.max_distance(&phi))
    })?;
    within(elapsed, Duration::from_millis(100))?;
    Ok(format!("essentially oriented, ρ = {:?}, {elapsed:?}", c.rho.as_slice()))
}

/// 4. Random uniform complex matrices are recognized as realizable.
///
/// When `n = r + 1` the canonical tree covers every entry of `N`, so all
/// canonical values are real and no qualifying instance exists; those sizes
/// are checked to be reported as essentially oriented instead.
fn round_trip() -> Check {
    let start = Instant::now();
    let mut g = rng(4);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut vacuous = Vec::new();
    for r in 2..=4 {
        for n in 5..=9 {
            let mut done = 0;
            let mut draws = 0;
            while done < 200 {
                draws += 1;
                let m = random_matrix(&mut g, r, n);
                let phi = Phirotope::from_matrix(&m, TOL).unwrap();
                let verdict = decide_realizability(&phi);
                let Ok(c) = canonicalize(&phi) else { continue };
                if !phi.is_uniform() || c.canonical.values().iter().all(|v| v.is_real(TOL)) {
                    ensure(
                        verdict == RealizabilityVerdict::Unsupported(UnsupportedReason::EssentiallyOriented)
                            || !phi.is_uniform(),
                        || format!("r={r} n={n}: all-real canonical form gave {verdict:?}"),
                    )?;
                    if draws == 200 && done == 0 {
                        ensure(n == r + 1, || format!("r={r} n={n}: no non-real instance in 200 draws"))?;
                        vacuous.push((r, n));
                        break;
                    }
                    continue;
                }
                match verdict {
                    RealizabilityVerdict::Realizable { matrix, .. } => {
                        let res = max_phase_residual(&c.canonical, &matrix).unwrap();
                        ensure(verify(&c.canonical, &matrix).unwrap().is_none(), || {
                            format!("verify failed for r={r} n={n}")
                        })?;
                        worst = worst.max(res);
                    }
                    other => return Err(format!("r={r} n={n}: verdict {other:?}")),
                }
                done += 1;
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst < 1e-6, || format!("max residual {worst:e}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{count} instances realizable, max residual {worst:.1e}, vacuous (r, n) = {vacuous:?}, {elapsed:?}"
    ))
}

/// 5. Positive tree values parametrize distinct realizations of one
///    phirotope; the all-ones point is the reconstructed matrix.
fn tree_parametrization() -> Check {
    let canonical = parse_phirotope(fixture("realizable_rank3_canonical.json"), TOL).unwrap();
    let oracle = parse_matrix(fixture("realizable_rank3_expected_matrix.json")).unwrap();
    let rebuilt = reconstruct(&canonical).map_err(|e| e.to_string())?;
    let forest = canonical_spanning_forest(&AssociatedBipartiteGraph::from_phirotope(&canonical).unwrap());
    let n = canonical.ground_size();
    ensure(forest.edges.len() == n - 1, || "forest is not a tree".into())?;

    let ones = normalize_to_tree(&oracle, &forest, &vec![1.0; n - 1]).unwrap();
    let diff = ones.max_abs_diff(&rebuilt);
    ensure(diff < 1e-6, || {
        format!("all-ones point differs from reconstruction by {diff:e}")
    })?;

    let mut g = rng(5);
    let mut points: Vec<ComplexMatrix> = Vec::new();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let values: Vec<f64> = (0..n - 1).map(|_| g.random_range(-1.5f64..1.5).exp()).collect();
        let m = normalize_to_tree(&rebuilt, &forest, &values).unwrap();
        for (&(i, j), &v) in forest.edges.iter().zip(&values) {
            ensure((m.entry(i, j).norm() - v).abs() < 1e-12, || {
                "tree norm not prescribed".into()
            })?;
        }
        ensure(m.is_standard_form(), || "not in standard form".into())?;
        worst = worst.max(max_phase_residual(&canonical, &m).unwrap());
        points.push(m);
    }
    ensure(worst < 1e-7, || format!("phase residual {worst:e}"))?;
    let closest = points
        .iter()
        .tuple_combinations()
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(f64::INFINITY, f64::min);
    ensure(closest > 1e-6, || format!("two points coincide (distance {closest:e})"))?;
    Ok(format!(
        "50 distinct points (min distance {closest:.2e}), residual {worst:.1e}, all-ones error {diff:.1e}"
    ))
}

/// 6. Zero membership in the hypersum agrees with brute force.
fn hypersum_oracle() -> Check {
    let start = Instant::now();
    let mut g = rng(6);
    let mut disagreements = Vec::new();
    let mut with_zero = 0;
    for _ in 0..1000 {
        let k = g.random_range(1..=6);
        let mut phases: Vec<Phase> = Vec::with_capacity(k);
        for _ in 0..k {
            let p = match g.random_range(0..10) {
                0 => Phase::ZERO,
                1 if !phases.is_empty() => phases[g.random_range(0..phases.len())],
                2..=5 => ph(g.random_range(0..12) as f64 / 6.0),
                _ => random_phase(&mut g),
            };
            phases.push(p);
        }
        let ours = hypersum(&phases, TOL).contains_zero();
        let fast = zero_in_hypersum(&phases, TOL);
        let oracle = oracle_contains_zero(&phases);
        with_zero += usize::from(oracle);
        if ours != oracle || fast != oracle {
            disagreements.push(phases);
        }
    }
    let elapsed = start.elapsed();
    ensure(disagreements.is_empty(), || {
        format!("{} disagreements, first {:?}", disagreements.len(), disagreements[0])
    })?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "1000 sets ({with_zero} containing zero), 0 disagreements, {elapsed:?}"
    ))
}

/// 7. Shuffle signs and minor phases agree with determinants.
fn minor_signs() -> Check {
    ensure(shuffle_exponent(&[1, 2, 4], 7) == 8, || {
        "σ for H = {2,3,5}, r = 7".into()
    })?;
    let mut g = rng(7);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for t in 0..100 {
        let r = 1 + t % 4;
        let n = g.random_range(r + 1..=9);
        let m = random_standard_form(&mut g, r, n);
        let phi = Phirotope::from_matrix(&m, TOL).unwrap();
        for k in 1..=2.min(r).min(n - r) {
            for h in (0..r).combinations(k) {
                for j in (r..n).combinations(k) {
                    let mut block: Vec<Complex64> = h
                        .iter()
                        .flat_map(|&a| j.iter().map(move |&b| (a, b)))
                        .map(|(a, b)| m.get(a, b))
                        .collect();
                    let det = phasemat::cmatrix::determinant(&mut block, k);
                    let direct = Phase::of(det);
                    let ours = minor_phase(&phi, &h, &j).unwrap();
                    worst = worst.max(ours.distance(direct));

                    // the full maximal minor on (Ĥ, J) is the shuffle sign times det
                    let tuple: Vec<usize> = (0..r).filter(|x| !h.contains(x)).chain(j.iter().copied()).collect();
                    let full = m.maximal_minor(&tuple).unwrap();
                    let sign = shuffle_sign(&h, r).to_complex();
                    worst = worst.max((full - sign * det).norm() / det.norm().max(1e-300));
                    checked += 1;
                }
            }
        }
    }
    ensure(worst < 1e-7, || format!("max discrepancy {worst:e}"))?;
    Ok(format!("{checked} minors, max discrepancy {worst:.1e}"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 non-realizable witness", nonreal_witness),
        ("2 GP validity of the non-realizable example", nonreal_gp_valid),
        ("3 essential-orientability detection", runex_orientation),
        ("4 round-trip realizability", round_trip),
        ("5 realization-space parametrization", tree_parametrization),
        ("6 hypersum oracle equivalence", hypersum_oracle),
        ("7 minor-sign identities", minor_signs),
    ];
    let mut passed = Vec::new();
    for (name, f) in criteria {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => {
                println!("PASS  {name}: {detail}");
                passed.push(true);
            }
            Err(why) => {
                println!("FAIL  {name}: {why}");
                passed.push(false);
            }
        }
    }
    if passed[3] && passed[4] {
        println!("PASS  8 realization-space statement: executable content is criteria 4 and 5");
    } else {
        println!("FAIL  8 realization-space statement: depends on criteria 4 and 5");
    }
    if passed.iter().any(|p| !p) {
        std::process::exit(1);
    }
}
