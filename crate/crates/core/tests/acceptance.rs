//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use fracml::dynamics::{
    classify_trajectory, find_homogeneous_equilibrium, linearize_at, simulate_linear,
    simulate_nonlinear, Coupling, EmpiricalVerdict, InitialCondition, MapSpec, MapTriple,
    SystemSpec, DEFAULT_WINDOW,
};
use fracml::fracops::kernel_weights;
use fracml::spectra::{
    asymmetric_eigenvalues, block_circulant_eigenvalues, circulant_eigenvalues, dense_eigenvalues,
    multiset_distance, symmetric_eigenvalues, DEFAULT_DENSE_TOL,
};
use fracml::stability::boundary::beta_point;
use fracml::stability::{
    asymmetric_region, boundary_beta, classify_spectrum, innermost_cardioid_index,
    innermost_cardioid_index_brute_force, symmetric_region, StabilityRegion, Status,
};
use fracml::{BlockCirculantSpec, CirculantSpec, Complex64, DenseMatrix, FractionalOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn printed_eigenvalues() -> Outcome {
    let first = circulant_eigenvalues(&CirculantSpec::new(0.2, -0.5, 0.1, 3).unwrap());
    let d1 = multiset_distance(
        first.eigenvalues(),
        &[c(-0.2, 0.0), c(-0.65, 0.0866025), c(-0.65, -0.0866025)],
    );
    let second = circulant_eigenvalues(&CirculantSpec::new(0.2, -0.3, 0.1, 3).unwrap());
    // the second pair is printed to four decimals only
    let d2_printed = multiset_distance(second.eigenvalues(), &[c(0.0, 0.0), c(-0.45, 0.0866), c(-0.45, -0.0866)]);
    let s = 3f64.sqrt() / 20.0;
    let d2_exact = multiset_distance(second.eigenvalues(), &[c(0.0, 0.0), c(-0.45, s), c(-0.45, -s)]);
    check(
        d1 < 1e-6 && d2_exact < 1e-6 && d2_printed < 5e-5,
        format!("first set {d1:.1e} from printed; second set {d2_exact:.1e} from exact, {d2_printed:.1e} from 4-digit print"),
    )
}

fn printed_verdicts() -> Outcome {
    let v04 = classify_spectrum(&circulant_eigenvalues(&CirculantSpec::new(0.2, -0.5, 0.1, 3).unwrap()), order(0.4)).unwrap();
    let v08 = classify_spectrum(&circulant_eigenvalues(&CirculantSpec::new(0.2, -0.3, 0.1, 3).unwrap()), order(0.8)).unwrap();
    check(
        v04.status == Status::Unstable && v08.status == Status::Stable,
        format!("alpha=0.4 {} (witness {:.7}), alpha=0.8 {}", v04.status, v04.witness.unwrap_or_default(), v08.status),
    )
}

fn reference_points() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    let mut expect = |label: &str, got: Status, want: Status| {
        count += 1;
        if got != want {
            bad.push(format!("{label}: {got} != {want}"));
        }
    };
    let spectral = |spec: CirculantSpec, a: f64| classify_spectrum(&circulant_eigenvalues(&spec), order(a)).unwrap().status;

    let r = symmetric_region(order(0.2), 8).unwrap();
    expect("sym 0.2/8 (-0.05,0.1)", r.classify(-0.05, 0.1).status, Status::Stable);
    expect("sym 0.2/8 (0.1,-0.02)", r.classify(0.1, -0.02).status, Status::Unstable);
    expect("sym 0.2/8 spectral in", spectral(CirculantSpec::new(-0.05, 0.1, -0.05, 8).unwrap(), 0.2), Status::Stable);
    expect("sym 0.2/8 spectral out", spectral(CirculantSpec::new(0.1, -0.02, 0.1, 8).unwrap(), 0.2), Status::Unstable);

    let r = symmetric_region(order(0.5), 9).unwrap();
    expect("sym 0.5/9 (-0.1,0.6)", r.classify(-0.1, 0.6).status, Status::Stable);
    expect("sym 0.5/9 (0.6,0.2)", r.classify(0.6, 0.2).status, Status::Unstable);
    expect("sym 0.5/9 quad in", if r.quadrilateral().contains(-0.1, 0.6) { Status::Stable } else { Status::Unstable }, Status::Stable);
    expect("sym 0.5/9 quad out", if r.quadrilateral().contains(0.6, 0.2) { Status::Stable } else { Status::Unstable }, Status::Unstable);

    let r = asymmetric_region(order(0.3), 6).unwrap();
    expect("asym 0.3/6 (-0.1,-0.22)", r.classify(-0.1, -0.22).status, Status::Stable);
    expect("asym 0.3/6 (-0.3,0.5)", r.classify(-0.3, 0.5).status, Status::Unstable);
    expect("asym 0.3/6 spectral in", spectral(CirculantSpec::new(0.22, -0.1, -0.22, 6).unwrap(), 0.3), Status::Stable);
    expect("asym 0.3/6 spectral out", spectral(CirculantSpec::new(-0.5, -0.3, 0.5, 6).unwrap(), 0.3), Status::Unstable);

    let lin = |maps: MapTriple, n: usize, a: f64| {
        let e = find_homogeneous_equilibrium(&maps, 0.0, 1e-14).unwrap();
        let w = linearize_at(&maps, e.x_star);
        spectral(w.on_lattice(n).unwrap(), a)
    };
    expect("cubic (0.05,-0.1)", lin(MapTriple::logistic_cubic(0.05, -0.1), 4, 0.6), Status::Stable);
    expect("cubic region", symmetric_region(order(0.6), 4).unwrap().classify(0.1, 0.05).status, Status::Stable);
    expect("circle (0.6,-0.8)", lin(MapTriple::logistic_circle(0.6, -0.8), 7, 0.8), Status::Stable);
    expect("circle (1.1,-1.2)", lin(MapTriple::logistic_circle(1.1, -1.2), 7, 0.8), Status::Unstable);
    let r = asymmetric_region(order(0.8), 7).unwrap();
    expect("circle region in", r.classify(0.6, 1.0 - 0.8).status, Status::Stable);
    expect("circle region out", r.classify(1.1, 1.0 - 1.2).status, Status::Unstable);

    check(bad.is_empty(), if bad.is_empty() { format!("{count} verdicts exact") } else { bad.join("; ") })
}

fn boundary_identities() -> Outcome {
    let mut worst_end: f64 = 0.0;
    for k in 1..=10 {
        let al = order(k as f64 / 10.0);
        let (x0, y0) = beta_point(al, 0.0);
        let (xp, yp) = beta_point(al, PI);
        worst_end = worst_end
            .max((x0 - 1.0).abs())
            .max(y0.abs())
            .max((xp - al.real_lower_bound()).abs())
            .max(yp.abs());
    }
    let circle = boundary_beta(order(1.0), 8192).unwrap();
    let radial = circle
        .points
        .iter()
        .map(|&(x, y)| (x.hypot(y) - 1.0).abs())
        .fold(0.0f64, f64::max);
    check(
        worst_end < 1e-12 && radial < 1e-12,
        format!("endpoint error {worst_end:.1e}, unit-circle deviation {radial:.1e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240501);
    let mut notes = Vec::new();
    let mut ok = true;

    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let spec = CirculantSpec::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(1..=32),
        )
        .unwrap();
        let dense = dense_eigenvalues(&spec.to_dense(), DEFAULT_DENSE_TOL).unwrap();
        worst = worst.max(multiset_distance(circulant_eigenvalues(&spec).eigenvalues(), dense.eigenvalues()));
    }
    ok &= worst < 1e-8;
    notes.push(format!("(a) {worst:.1e}"));

    let mismatches = (3..=1000)
        .filter(|&n| Some(innermost_cardioid_index(n).unwrap()) != innermost_cardioid_index_brute_force(n))
        .count();
    ok &= mismatches == 0;
    notes.push(format!("(b) {mismatches} mismatches"));

    let (mut compared, mut disagreements) = (0, 0);
    for symmetric in [true, false] {
        let mut done = 0;
        while done < 500 {
            let al = order(rng.random_range(0.02..=1.0));
            let n = rng.random_range(2..=12);
            let a1 = rng.random_range(-1.5..1.5);
            let a2 = rng.random_range(-1.0..1.0);
            let (geo, spec) = if symmetric {
                (
                    symmetric_region(al, n).unwrap().classify(a2, a1),
                    symmetric_eigenvalues(a1, a2, n).unwrap().to_spectrum(),
                )
            } else {
                (asymmetric_region(al, n).unwrap().classify(a1, a2), asymmetric_eigenvalues(a1, a2, n).unwrap())
            };
            let sp = StabilityRegion::new(al).classify_spectrum(&spec).unwrap();
            if geo.margin.abs() <= 1e-6 || sp.margin.abs() <= 1e-6 {
                continue;
            }
            done += 1;
            compared += 1;
            disagreements += (geo.status != sp.status) as usize;
        }
    }
    ok &= disagreements == 0;
    notes.push(format!("(c) {disagreements}/{compared} disagreements"));

    let mut worst: f64 = 0.0;
    for n in 1..=12 {
        for m in 1..=12 {
            let spec = BlockCirculantSpec::new(
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                n,
                m,
            )
            .unwrap();
            let dense = dense_eigenvalues(&spec.to_dense(), DEFAULT_DENSE_TOL).unwrap();
            worst = worst.max(multiset_distance(block_circulant_eigenvalues(&spec).eigenvalues(), dense.eigenvalues()));
        }
    }
    ok &= worst < 1e-8;
    notes.push(format!("(d) {worst:.1e}"));
    check(ok, notes.join(", "))
}

fn dynamics_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut classical, mut cross, mut sync, mut fixed): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..20 {
        let n = rng.random_range(1..=8);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-0.5..0.5)).collect()).collect();
        let a = DenseMatrix::from_rows(rows).unwrap();
        let init = InitialCondition::Perturbation { base: 0.0, amplitude: 1.0, seed: rng.random() };
        let tr = simulate_linear(&SystemSpec::new(order(1.0), n, Coupling::Matrix(a.clone()), init.clone(), 200)).unwrap();
        let mut x = init.realize(n).unwrap();
        let mut y = vec![0.0; n];
        for t in 1..=200 {
            a.apply(&x, &mut y);
            std::mem::swap(&mut x, &mut y);
            let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for k in 0..n {
                classical = classical.max((tr.state(t)[k] - x[k]).abs() / scale);
            }
        }

        let al = order(rng.random_range(0.05..=1.0));
        let (a0, a1, a2) = (rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
        let init = InitialCondition::Perturbation { base: 0.0, amplitude: 0.5, seed: rng.random() };
        let p = simulate_linear(&SystemSpec::linear(al, CirculantSpec::new(a0, a1, a2, n).unwrap(), init.clone(), 200)).unwrap();
        let q = simulate_nonlinear(&SystemSpec::nonlinear(al, n, MapTriple::linear(a0, a1, a2), init, 200)).unwrap();
        for (s, r) in p.states().zip(q.states()) {
            let scale = s.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for k in 0..n {
                cross = cross.max((s[k] - r[k]).abs() / scale);
            }
        }

        let maps = MapTriple::new(
            MapSpec::Cubic { delta: rng.random_range(-1.0..1.0) },
            MapSpec::Logistic { mu: rng.random_range(0.0..2.0) },
            MapSpec::Circle { delta: rng.random_range(-1.0..1.0) },
        );
        let x0 = rng.random_range(-0.3..0.3);
        let tr = simulate_nonlinear(&SystemSpec::nonlinear(al, n.max(2), maps, InitialCondition::Explicit { values: vec![x0; n.max(2)] }, 200)).unwrap();
        for s in tr.states() {
            for v in s {
                sync = sync.max((v - s[0]).abs());
            }
        }

        let (mu, eps) = (rng.random_range(1.2..2.0), rng.random_range(0.0..0.5));
        let maps = MapTriple::coupled_logistic(mu, eps);
        let e = find_homogeneous_equilibrium(&maps, 0.6, 1e-14).unwrap();
        let tr = simulate_nonlinear(&SystemSpec::nonlinear(al, n, maps, InitialCondition::Explicit { values: vec![e.x_star; n] }, 200)).unwrap();
        for s in tr.states() {
            for v in s {
                fixed = fixed.max((v - e.x_star).abs());
            }
        }
    }
    check(
        classical < 1e-10 && cross < 1e-12 && sync <= 1e-12 && fixed < 1e-10,
        format!("classical {classical:.1e}, linear/nonlinear {cross:.1e}, homogeneity {sync:.1e}, equilibrium {fixed:.1e}"),
    )
}

struct Tally {
    points: usize,
    agree: usize,
    inconclusive: usize,
    contradictions: usize,
}

fn cross_validate(seed: u64, alpha_lo: f64, symmetric: bool, points: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally { points: 0, agree: 0, inconclusive: 0, contradictions: 0 };
    while t.points < points {
        let al = order(rng.random_range(alpha_lo..=1.0));
        let n = rng.random_range(1..=12);
        let a1 = rng.random_range(-1.5..1.5);
        let a2 = rng.random_range(-1.0..1.0);
        let spec = if symmetric {
            CirculantSpec::new(a2, a1, a2, n).unwrap()
        } else {
            CirculantSpec::new(-a2, a1, a2, n).unwrap()
        };
        let v = StabilityRegion::new(al).classify_spectrum(&circulant_eigenvalues(&spec)).unwrap();
        if v.margin.abs() <= 0.05 {
            continue;
        }
        t.points += 1;
        let init = InitialCondition::Perturbation { base: 0.0, amplitude: 0.01, seed: rng.random() };
        let tr = simulate_linear(&SystemSpec::linear(al, spec, init, 2000)).unwrap();
        let e = classify_trajectory(&tr, DEFAULT_WINDOW, None).unwrap();
        if e.agrees_with(v.status) {
            t.agree += 1;
        } else if e.contradicts(v.status) {
            t.contradictions += 1;
        } else {
            t.inconclusive += 1;
        }
    }
    t
}

fn analytic_vs_empirical() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (symmetric, name) in [(true, "symmetric"), (false, "asymmetric")] {
        let t = cross_validate(2024, 0.2, symmetric, 100);
        let rate = t.agree as f64 / t.points as f64;
        ok &= rate >= 0.95 && t.contradictions == 0;
        notes.push(format!(
            "{name} {}/{} agree, {} inconclusive, {} contradictions",
            t.agree, t.points, t.inconclusive, t.contradictions
        ));
    }
    check(ok, notes.join("; "))
}

fn thermodynamic_limit() -> Outcome {
    let al = order(0.5);
    let even = symmetric_region(al, 8).unwrap().quadrilateral().q2;
    let ns = [5usize, 9, 17, 33, 65];
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let q = symmetric_region(al, n).unwrap().quadrilateral().q2;
            ((n as f64).ln(), (q.0 - even.0).hypot(q.1 - even.1).ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    check((-slope - 2.0).abs() <= 0.1, format!("fitted exponent {:.4}", -slope))
}

fn attractor() -> Outcome {
    let x_star = 1.0 - 1.0 / 1.1;
    let mut notes = Vec::new();
    let mut ok = true;
    // two lattice settings for the same map parameters
    for (a, n) in [(0.8, 7), (0.6, 4)] {
        let init = InitialCondition::Perturbation { base: 0.01, amplitude: 0.005, seed: 42 };
        let tr = simulate_nonlinear(&SystemSpec::nonlinear(order(a), n, MapTriple::logistic_circle(1.1, -1.2), init, 5000)).unwrap();
        let dev = tr.last().iter().map(|v| (v - x_star).abs()).fold(0.0f64, f64::max);
        let reached = !tr.diverged() && tr.horizon() == 5000 && dev < 0.02;
        let verdict = classify_trajectory(&tr, DEFAULT_WINDOW, Some(&vec![x_star; n])).unwrap();
        ok &= reached && verdict == EmpiricalVerdict::Decaying;
        notes.push(format!("N={n} alpha={a}: max |x - x*| = {dev:.2e}"));
    }
    check(ok, notes.join("; "))
}

fn z_transform() -> Outcome {
    let z: f64 = 2.0;
    let mut worst: f64 = 0.0;
    for a in [0.25, 0.5, 0.9] {
        let w = kernel_weights(order(a), 200).unwrap();
        let partial: f64 = w.as_slice().iter().enumerate().map(|(n, wn)| wn * z.powi(-(n as i32))).sum();
        worst = worst.max((partial - (1.0 - 1.0 / z).powf(-a)).abs());
    }
    check(worst < 1e-8, format!("max error {worst:.1e} after 200 terms"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("printed eigenvalues", printed_eigenvalues),
        ("printed verdicts", printed_verdicts),
        ("reference parameter points", reference_points),
        ("boundary identities", boundary_identities),
        ("oracle equivalence", oracle_equivalence),
        ("dynamics consistency", dynamics_consistency),
        ("analytic vs empirical", analytic_vs_empirical),
        ("thermodynamic limit", thermodynamic_limit),
        ("attractor", attractor),
        ("z-transform", z_transform),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.2}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.2}s]", i + 1);
            }
        }
    }
    let t = cross_validate(2024, 1e-3, false, 100);
    println!(
        "info: asymmetric cross-validation with alpha over (0, 1]: {}/{} agree, {} inconclusive, {} contradictions",
        t.agree, t.points, t.inconclusive, t.contradictions
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
