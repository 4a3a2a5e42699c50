//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qec_core::cheb_poly::{isolate_all, partial_chebyshev, phi, q_poly_closed_form, r_poly, u_tilde, IntPoly};
use qec_core::fan::{fan_embedding, phi_min_root, qec_fan, solve_recurrence, RecurrenceSolution};
use qec_core::graphs::{distance_matrix, family, join, FamilyKind, Graph};
use qec_core::join_qec::qec_join_empty;
use qec_core::qec_oracle;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn empty_join(m: usize, g: &Graph) -> Graph {
    join(&family(FamilyKind::Empty, m).unwrap(), g)
}

fn join_vs_oracle(m: usize, g: &Graph) -> Result<f64, String> {
    let exact = qec_join_empty(m, g).map_err(|e| format!("m={m} G={g}: {e}"))?.value;
    let brute = qec_oracle(&empty_join(m, g)).map_err(|e| e.to_string())?.value;
    Ok((exact - brute).abs())
}

fn worked_examples() -> Outcome {
    let k2 = family(FamilyKind::Complete, 2).unwrap();
    let c4 = family(FamilyKind::Cycle, 4).unwrap();
    let p3 = family(FamilyKind::Path, 3).unwrap();
    let mut cases = vec![(2usize, k2, -0.5), (1, c4, 0.0)];
    for m in 1..=10usize {
        let mf = m as f64;
        let want = (mf - 4.0 + (3.0 * mf * mf - 6.0 * mf + 4.0).sqrt()) / (mf + 3.0);
        cases.push((m, p3.clone(), want));
    }
    let mut worst: f64 = 0.0;
    for (m, g, want) in &cases {
        let exact = qec_join_empty(*m, g).map_err(|e| e.to_string())?.value;
        let brute = qec_oracle(&empty_join(*m, g)).map_err(|e| e.to_string())?.value;
        let err = (exact - want).abs().max((brute - want).abs());
        check(err <= 1e-8, || format!("m={m} G={g}: join {exact}, oracle {brute}, expected {want}"))?;
        worst = worst.max(err);
    }
    Ok(format!("{} cases, max error {worst:.2e}", cases.len()))
}

fn random_connected(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let n = rng.random_range(1..=7usize);
        let p = rng.random_range(0.2..0.9);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(p))
            .collect();
        let g = Graph::new(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut corpus: Vec<Graph> = (0..240).map(|_| random_connected(&mut rng)).collect();
    for kind in [FamilyKind::Path, FamilyKind::Cycle, FamilyKind::Complete] {
        for n in 1..=7 {
            if let Ok(g) = family(kind, n) {
                corpus.push(g);
            }
        }
    }
    let (mut runs, mut worst) = (0, 0.0f64);
    for g in &corpus {
        for m in 1..=3 {
            if m == 1 && g.is_complete() {
                continue;
            }
            let err = join_vs_oracle(m, g)?;
            check(err <= 1e-8, || format!("m={m} G={g} edges={:?}: error {err:e}", g.edges().collect::<Vec<_>>()))?;
            worst = worst.max(err);
            runs += 1;
        }
    }
    Ok(format!("{} graphs, {runs} joins, max error {worst:.2e}", corpus.len()))
}

fn fan_graph(n: usize) -> Graph {
    empty_join(1, &family(FamilyKind::Path, n).unwrap())
}

fn fan_values() -> Outcome {
    let mut worst_oracle: f64 = 0.0;
    for n in 1..=30 {
        let got = qec_fan(n).map_err(|e| e.to_string())?.value;
        let brute = qec_oracle(&fan_graph(n)).map_err(|e| e.to_string())?.value;
        let err = (got - brute).abs();
        check(err <= 1e-8, || format!("n={n}: fan {got}, oracle {brute}"))?;
        worst_oracle = worst_oracle.max(err);
    }
    let mut worst_even: f64 = 0.0;
    for n in (2..=60).step_by(2) {
        let root = phi_min_root(n).map_err(|e| e.to_string())?;
        let want = if n == 2 { -1.0 } else { -2.0 * (PI / (n as f64 + 1.0)).cos() };
        let err = (root - want).abs();
        check(err <= 1e-10, || format!("n={n}: least root {root}, expected {want}"))?;
        worst_even = worst_even.max(err);
    }
    let mut min_gap = f64::INFINITY;
    for n in (3..=59).step_by(2) {
        let alpha = qec_fan(n).map_err(|e| e.to_string())?.alpha;
        let lower = -2.0 * (PI / (n as f64 + 2.0)).cos();
        let upper = -2.0 * (PI / (n as f64 + 1.0)).cos();
        check(lower <= alpha && alpha < upper, || {
            format!("n={n}: {alpha} outside [{lower}, {upper})")
        })?;
        min_gap = min_gap.min(alpha - lower);
    }
    Ok(format!(
        "oracle max error {worst_oracle:.2e}, even-n max error {worst_even:.2e}, odd-n least gap above lower bound {min_gap:.2e}"
    ))
}

fn polynomial_identities() -> Outcome {
    for n in 0..=64 {
        let (ue, uo) = partial_chebyshev(n);
        check(&ue * &uo == u_tilde(n), || format!("Ũ_{n} != Ũᵉ_{n} Ũᵒ_{n}"))?;
    }
    let square = IntPoly::from_i64s(&[4, -4, 1]);
    for n in 1..=50usize {
        let f = phi(n).map_err(|e| e.to_string())?;
        let (ue, _) = partial_chebyshev(n);
        let r = r_poly(n).map_err(|e| e.to_string())?;
        check(&(&square * &ue) * &r == f, || format!("Φ_{n} != (x-2)² Ũᵉ_{n} R_{n}"))?;
        check(&square * &r == q_poly_closed_form(n).map_err(|e| e.to_string())?, || {
            format!("closed-form Q_{n} disagrees")
        })?;
        check(f.eval_i64(2).is_zero() && f.derivative().eval_i64(2).is_zero(), || {
            format!("Φ_{n} does not vanish to second order at 2")
        })?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        check(f.eval_i64(-2) == BigInt::from(16 * (n as i64 + 1) * sign), || {
            format!("Φ_{n}(-2) = {}", f.eval_i64(-2))
        })?;
    }
    let table = [
        "2x+2",
        "3x+3",
        "4x^2+10x+6",
        "5x^2+9x+3",
        "6x^3+18x^2+12x-2",
        "7x^3+15x^2+2x-7",
        "8x^4+26x^3+14x^2-20x-14",
        "9x^4+21x^3-3x^2-26x-7",
        "10x^5+34x^4+12x^3-54x^2-42x+2",
        "11x^5+27x^4-12x^3-57x^2-15x+11",
    ];
    for (i, want) in table.iter().enumerate() {
        let got = r_poly(i + 1).map_err(|e| e.to_string())?.to_string();
        check(got == *want, || format!("R_{} = {got}, expected {want}", i + 1))?;
    }
    Ok("n<=64 product, n<=50 factorisation and values at ±2, R_1..R_10 table exact".into())
}

fn root_reality() -> Outcome {
    for n in 1..=30usize {
        let f = phi(n).map_err(|e| e.to_string())?;
        let iso = isolate_all(&f).map_err(|e| e.to_string())?;
        check(iso.total() == n + 2, || format!("Φ_{n}: {} real roots, expected {}", iso.total(), n + 2))?;
        check(f.root_multiplicity(2) == 2, || format!("Φ_{n}: x=2 has multiplicity {}", f.root_multiplicity(2)))?;
        if n != 2 {
            let doubles = iso.multiplicities.iter().filter(|&&k| k > 1).count();
            let max = iso.multiplicities.iter().copied().max().unwrap_or(0);
            check(doubles == 1 && max == 2, || {
                format!("Φ_{n}: multiplicities {:?}", iso.multiplicities)
            })?;
        }
    }
    let want = IntPoly::from_i64s(&[4, -4, 1]).pow(1) * IntPoly::from_i64s(&[1, 2, 1]).scale_i64(3);
    check(phi(2).map_err(|e| e.to_string())? == want, || "Φ_2 != 3(x-2)²(x+1)²".into())?;
    Ok("Φ_1..Φ_30 real-rooted with a single double root at 2; Φ_2 = 3(x-2)²(x+1)²".into())
}

fn dense_solve(n: usize, lambda: f64, mu: f64) -> Option<DVector<f64>> {
    let a = family(FamilyKind::Path, n).unwrap().adjacency_f64();
    (a - DMatrix::identity(n, n) * lambda).lu().solve(&DVector::from_element(n, mu))
}

fn recurrences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 100 {
        let n = rng.random_range(1..=20usize);
        let lambda: f64 = rng.random_range(-4.0..4.0);
        let mu: f64 = rng.random_range(-3.0..3.0);
        let gap = (1..=n)
            .map(|l| (2.0 * (l as f64 * PI / (n as f64 + 1.0)).cos() - lambda).abs())
            .chain([(lambda - 2.0).abs(), (lambda + 2.0).abs()])
            .fold(f64::INFINITY, f64::min);
        if gap < 0.05 {
            continue;
        }
        cases += 1;
        let sol = solve_recurrence(n, lambda, mu).map_err(|e| e.to_string())?;
        let RecurrenceSolution::Unique { values } = sol else {
            return Err(format!("n={n} λ={lambda} μ={mu}: expected a unique solution"));
        };
        let want = dense_solve(n, lambda, mu).ok_or("singular dense system")?;
        let scale = 1.0 + want.amax();
        let err = (1..=n).map(|k| (values[k] - want[k - 1]).abs()).fold(0.0, f64::max) / scale;
        check(err <= 1e-9, || format!("n={n} λ={lambda} μ={mu}: relative error {err:e}"))?;
        worst = worst.max(err);
    }
    let mut worst_edge: f64 = 0.0;
    for n in 1..=20 {
        for &lambda in &[2.0, -2.0] {
            let mu = rng.random_range(-3.0..3.0);
            let sol = solve_recurrence(n, lambda, mu).map_err(|e| e.to_string())?;
            check(sol.kind() == "unique", || format!("n={n} λ={lambda}: {}", sol.kind()))?;
            let r = sol.residual(lambda, mu);
            check(r <= 1e-12, || format!("n={n} λ={lambda} μ={mu}: residual {r:e}"))?;
            worst_edge = worst_edge.max(r);
        }
    }
    let mut eigen_cases = 0;
    for n in 1..=20usize {
        for l in 1..=n {
            let lambda = 2.0 * (l as f64 * PI / (n as f64 + 1.0)).cos();
            for mu in [0.0, 1.0, -2.5] {
                let sol = solve_recurrence(n, lambda, mu).map_err(|e| e.to_string())?;
                let expect_none = mu != 0.0 && l % 2 == 1;
                check((sol == RecurrenceSolution::None) == expect_none, || {
                    format!("n={n} l={l} μ={mu}: got {}", sol.kind())
                })?;
                if !expect_none {
                    let r = sol.residual(lambda, mu);
                    check(r <= 1e-10, || format!("n={n} l={l} μ={mu}: residual {r:e}"))?;
                }
                eigen_cases += 1;
            }
        }
    }
    Ok(format!(
        "100 unique cases (max relative error {worst:.2e}), λ=±2 max residual {worst_edge:.2e}, {eigen_cases} eigenvalue cases classified"
    ))
}

fn embedding() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=50 {
        let e = fan_embedding(n).map_err(|e| e.to_string())?;
        let d = distance_matrix(&fan_graph(n)).map_err(|e| e.to_string())?;
        let r = e.max_residual(&d);
        check(r <= 1e-12, || format!("n={n}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("n<=50, max residual {worst:.2e}"))
}

fn monotonicity() -> Outcome {
    let alphas: Vec<f64> = (1..=100)
        .map(|n| qec_fan(n).map(|r| r.alpha))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(alphas[0] == -1.0 && alphas[1] == -1.0, || format!("α̃_1 = {}, α̃_2 = {}", alphas[0], alphas[1]))?;
    let mut ties = Vec::new();
    for n in 1..100 {
        let (a, b) = (alphas[n - 1], alphas[n]);
        check(b <= a + 1e-12, || format!("α̃_{} = {b} > α̃_{n} = {a}", n + 1))?;
        if n >= 2 && (a - b).abs() <= 1e-12 {
            ties.push(n);
        }
    }
    check(alphas[99] > -2.0, || format!("α̃_100 = {}", alphas[99]))?;
    Ok(format!("α̃_100 = {:.12}, ties beyond n=1,2: {ties:?}", alphas[99]))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 worked examples", worked_examples, Duration::from_secs(1)),
        ("2 oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("3 fan values", fan_values, Duration::from_secs(30)),
        ("4 exact polynomial identities", polynomial_identities, Duration::from_secs(10)),
        ("5 root reality", root_reality, Duration::from_secs(20)),
        ("6 recurrence solvers", recurrences, Duration::from_secs(5)),
        ("7 embedding", embedding, Duration::from_secs(5)),
        ("8 monotonicity", monotonicity, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
