//! Cross-checking suites behind `qec verify`.

use std::f64::consts::PI;

use clap::ValueEnum;
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use qec_core::cheb_poly::{isolate_all, partial_chebyshev, phi, q_poly, q_poly_closed_form, r_poly, u_tilde, IntPoly};
use qec_core::fan::{fan_embedding, fan_lambda_sets, phi_min_root, qec_fan, solve_recurrence, RecurrenceSolution};
use qec_core::graphs::{distance_matrix, family, join, FamilyKind, Graph};
use qec_core::join_qec::{compute_lambda_sets, join_with_empty, qec_join_empty};
use qec_core::{qec_oracle, QecError};

use crate::commands::cmd_qec;
use crate::corpus::{family_corpus, random_connected};
use crate::format::fmt15;
use crate::record::Method;
use crate::{exit_code, with_pool};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    OracleJoin,
    Fan,
    Chebyshev,
    Recurrence,
    Embedding,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleJoin => "oracle-join",
            Suite::Fan => "fan",
            Suite::Chebyshev => "chebyshev",
            Suite::Recurrence => "recurrence",
            Suite::Embedding => "embedding",
            Suite::All => "all",
        }
    }

    fn default_n_max(self) -> usize {
        match self {
            Suite::OracleJoin => 7,
            Suite::Fan => 30,
            Suite::Chebyshev => 50,
            Suite::Recurrence => 20,
            Suite::Embedding => 50,
            Suite::All => 0,
        }
    }
}

/// One named check aggregated over many cases.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub tolerance: f64,
    pub cases: usize,
    pub max_residual: f64,
    pub failures: Vec<Value>,
}

impl Check {
    fn new(suite: &'static str, name: &'static str, tolerance: f64) -> Self {
        Check {
            suite,
            name,
            tolerance,
            cases: 0,
            max_residual: 0.0,
            failures: Vec::new(),
        }
    }

    /// Records one case; `residual` of NaN or infinity always fails.
    fn add(&mut self, residual: f64, instance: impl FnOnce() -> Value) {
        self.cases += 1;
        if residual.is_nan() {
            self.max_residual = f64::NAN;
        } else if !self.max_residual.is_nan() {
            self.max_residual = self.max_residual.max(residual);
        }
        if !(residual <= self.tolerance) {
            let mut v = instance();
            if let Value::Object(map) = &mut v {
                map.insert("residual".into(), json!(fmt15(residual)));
            }
            self.failures.push(v);
        }
    }

    /// Records an exact yes/no case.
    fn add_exact(&mut self, ok: bool, instance: impl FnOnce() -> Value) {
        self.add(if ok { 0.0 } else { 1.0 }, instance);
    }

    fn add_result(&mut self, r: Result<f64, QecError>, instance: impl FnOnce() -> Value) {
        match r {
            Ok(res) => self.add(res, instance),
            Err(e) => self.add(f64::INFINITY, || {
                let mut v = instance();
                if let Value::Object(map) = &mut v {
                    map.insert("error".into(), json!(e.to_string()));
                }
                v
            }),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    pub fn report(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut out = format!(
            "{status} {}/{}: {} cases, max residual {} (tol {})",
            self.suite,
            self.name,
            self.cases,
            fmt15(self.max_residual),
            fmt15(self.tolerance)
        );
        if !self.failures.is_empty() {
            out += &format!(", {} failed", self.failures.len());
            for f in self.failures.iter().take(10) {
                out += &format!("\n  replay: {f}");
            }
        }
        out
    }
}

fn graph_json(g: &Graph) -> Value {
    json!({ "n": g.n(), "edges": g.edges().map(|(a, b)| [a, b]).collect::<Vec<_>>() })
}

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    with_pool(|| items.par_iter().map(f).collect())
}

fn oracle_join(seed: u64, n_max: usize) -> Vec<Check> {
    const S: &str = "oracle-join";
    let mut graphs = random_connected(seed, 200, n_max);
    for kind in [FamilyKind::Path, FamilyKind::Cycle, FamilyKind::Complete] {
        graphs.extend((1..=n_max).filter_map(|n| family(kind, n).ok()));
    }
    let cases: Vec<(usize, Graph)> = graphs
        .iter()
        .flat_map(|g| (1..=3).map(move |m| (m, g.clone())))
        .filter(|(m, g)| !(*m == 1 && g.is_complete()))
        .collect();

    let results = par_map(&cases, |(m, g)| -> Result<(f64, f64), QecError> {
        let exact = qec_join_empty(*m, g)?;
        let (joined, d) = join_with_empty(*m, g)?;
        let brute = qec_oracle(&joined)?;
        let w = exact.witness.as_ref().ok_or_else(|| QecError::Internal("missing witness".into()))?;
        let r = w.residuals(&DMatrix::zeros(*m, *m), &g.adjacency_f64());
        let wres = [r.normalization, r.balance, r.first_block, r.second_block, (w.psi(&d) - exact.value).abs()]
            .into_iter()
            .fold(0.0, f64::max);
        Ok(((exact.value - brute.value).abs(), wres))
    });
    let mut value = Check::new(S, "join-vs-oracle", 1e-8);
    let mut witness = Check::new(S, "witness-residual", 1e-8);
    for ((m, g), r) in cases.iter().zip(results) {
        let inst = || json!({ "m": m, "graph": graph_json(g) });
        value.add_result(r.clone().map(|x| x.0), inst);
        witness.add_result(r.map(|x| x.1), inst);
    }

    let exprs = family_corpus(n_max + 1);
    let agreement = par_map(&exprs, |e| {
        let text = e.to_string();
        match (cmd_qec(&text, Method::Auto), cmd_qec(&text, Method::Oracle)) {
            (Ok(a), Ok(o)) => (a.value - o.value).abs(),
            (Err(a), Err(o)) if exit_code(&a) == exit_code(&o) => 0.0,
            _ => f64::INFINITY,
        }
    });
    let mut auto = Check::new(S, "auto-vs-oracle", 1e-8);
    for (e, r) in exprs.iter().zip(agreement) {
        auto.add(r, || json!({ "expr": e.to_string() }));
    }
    vec![value, witness, auto]
}

fn path_join_sets(n: usize) -> Result<f64, QecError> {
    let a = fan_lambda_sets(n)?;
    let b = compute_lambda_sets(1, &family(FamilyKind::Path, n)?)?;
    let mut worst: f64 = 0.0;
    for ((x, _), (y, _)) in a.sets().iter().zip(b.sets().iter()) {
        if x.len() != y.len() {
            return Ok(f64::INFINITY);
        }
        for (u, v) in x.iter().zip(y.iter()) {
            worst = worst.max((u - v).abs());
        }
    }
    Ok(worst)
}

fn fan_suite(n_max: usize) -> Vec<Check> {
    const S: &str = "fan";
    let fan_graph = |n| join(&family(FamilyKind::Empty, 1).unwrap(), &family(FamilyKind::Path, n).unwrap());

    let ns: Vec<usize> = (1..=n_max).collect();
    let rows = par_map(&ns, |&n| -> Result<(f64, Option<f64>, Option<f64>), QecError> {
        let v = qec_fan(n)?.value;
        let o = qec_oracle(&fan_graph(n))?.value;
        let j = if n >= 3 {
            Some((v - qec_join_empty(1, &family(FamilyKind::Path, n)?)?.value).abs())
        } else {
            None
        };
        let s = if n >= 3 { Some(path_join_sets(n)?) } else { None };
        Ok(((v - o).abs(), j, s))
    });
    let mut oracle = Check::new(S, "fan-vs-oracle", 1e-8);
    let mut joined = Check::new(S, "fan-vs-join", 1e-10);
    let mut sets = Check::new(S, "lambda-sets-vs-join", 1e-8);
    for (&n, r) in ns.iter().zip(rows) {
        let inst = || json!({ "n": n });
        match r {
            Ok((o, j, s)) => {
                oracle.add(o, inst);
                if let Some(j) = j {
                    joined.add(j, inst);
                }
                if let Some(s) = s {
                    sets.add(s, inst);
                }
            }
            Err(e) => oracle.add_result(Err(e), inst),
        }
    }

    let top = 2 * n_max;
    let mut even = Check::new(S, "even-least-root", 1e-10);
    let evens: Vec<usize> = (4..=top).step_by(2).collect();
    for (&n, r) in evens.iter().zip(par_map(&evens, |&n| phi_min_root(n))) {
        let want = -2.0 * (PI / (n as f64 + 1.0)).cos();
        even.add_result(r.map(|x| (x - want).abs()), || json!({ "n": n }));
    }
    let mut odd = Check::new(S, "odd-sandwich", 0.0);
    let odds: Vec<usize> = (3..top).step_by(2).collect();
    for (&n, r) in odds.iter().zip(par_map(&odds, |&n| qec_fan(n).map(|r| r.alpha))) {
        let lower = -2.0 * (PI / (n as f64 + 2.0)).cos();
        let upper = -2.0 * (PI / (n as f64 + 1.0)).cos();
        let res = r.map(|a| if a >= upper { f64::INFINITY } else { (lower - a).max(0.0) });
        odd.add_result(res, || json!({ "n": n }));
    }

    let mut mono = Check::new(S, "monotone-least-root", 1e-12);
    let upto: Vec<usize> = (1..=100.max(top)).collect();
    let alphas = par_map(&upto, |&n| qec_fan(n).map(|r| r.alpha));
    for w in upto.windows(2).zip(alphas.windows(2)) {
        let ([n, _], [a, b]) = w else { unreachable!() };
        match (a, b) {
            (Ok(a), Ok(b)) => mono.add((b - a).max(0.0), || json!({ "n": n })),
            _ => mono.add(f64::INFINITY, || json!({ "n": n })),
        }
    }
    if let Some(Ok(last)) = alphas.last() {
        mono.add_exact(*last > -2.0, || json!({ "n": upto.len(), "alpha": last }));
    }
    vec![oracle, joined, sets, even, odd, mono]
}

const R_TABLE: [&str; 10] = [
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

fn chebyshev(n_max: usize) -> Vec<Check> {
    const S: &str = "chebyshev";
    let square = IntPoly::from_i64s(&[4, -4, 1]);
    let mut product = Check::new(S, "u-equals-ue-times-uo", 0.0);
    let mut factor = Check::new(S, "phi-factorisation", 0.0);
    let mut closed = Check::new(S, "q-closed-form", 0.0);
    let mut at_two = Check::new(S, "phi-values-at-plus-minus-two", 0.0);
    let mut table = Check::new(S, "r-table", 0.0);
    let mut reality = Check::new(S, "phi-real-rooted", 0.0);

    for n in 0..=n_max {
        let (ue, uo) = partial_chebyshev(n);
        product.add_exact(&ue * &uo == u_tilde(n), || json!({ "n": n }));
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let rows = par_map(&ns, |&n| -> Result<[bool; 4], QecError> {
        let f = phi(n)?;
        let (ue, _) = partial_chebyshev(n);
        let r = r_poly(n)?;
        let fact = &(&square * &ue) * &r == f;
        let cf = q_poly_closed_form(n)? == q_poly(n)?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let vals = f.eval_i64(2) == BigInt::from(0)
            && f.derivative().eval_i64(2) == BigInt::from(0)
            && f.eval_i64(-2) == BigInt::from(16 * (n as i64 + 1) * sign);
        let real = if n <= 30 {
            let iso = isolate_all(&f)?;
            let doubles = iso.multiplicities.iter().filter(|&&k| k == 2).count();
            let simple = iso.multiplicities.iter().all(|&k| k <= 2);
            iso.total() == n + 2 && f.root_multiplicity(2) == 2 && (n == 2 || (doubles == 1 && simple))
        } else {
            true
        };
        Ok([fact, cf, vals, real])
    });
    for (&n, r) in ns.iter().zip(rows) {
        let inst = || json!({ "n": n });
        match r {
            Ok([a, b, c, d]) => {
                factor.add_exact(a, inst);
                closed.add_exact(b, inst);
                at_two.add_exact(c, inst);
                if n <= 30 {
                    reality.add_exact(d, inst);
                }
            }
            Err(e) => factor.add_result(Err(e), inst),
        }
    }
    for (i, want) in R_TABLE.iter().enumerate() {
        let got = r_poly(i + 1).map(|p| p.to_string());
        table.add_exact(got.as_deref() == Ok(*want), || json!({ "n": i + 1, "got": got.ok(), "want": want }));
    }
    let phi2 = IntPoly::from_i64s(&[4, -4, 1]) * IntPoly::from_i64s(&[3, 6, 3]);
    reality.add_exact(phi(2).ok() == Some(phi2), || json!({ "n": 2 }));
    vec![product, factor, closed, at_two, table, reality]
}

fn dense_solve(n: usize, lambda: f64, mu: f64) -> Option<DVector<f64>> {
    let a = family(FamilyKind::Path, n).ok()?.adjacency_f64();
    (a - DMatrix::identity(n, n) * lambda).lu().solve(&DVector::from_element(n, mu))
}

fn recurrence(seed: u64, n_max: usize) -> Vec<Check> {
    const S: &str = "recurrence";
    let n_max = n_max.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eig = |n: usize, l: usize| 2.0 * (l as f64 * PI / (n as f64 + 1.0)).cos();

    let mut unique = Check::new(S, "unique-vs-dense", 1e-9);
    while unique.cases < 100 {
        let n = rng.random_range(1..=n_max);
        let lambda: f64 = rng.random_range(-4.0..4.0);
        let mu: f64 = rng.random_range(-3.0..3.0);
        let gap = (1..=n)
            .map(|l| (eig(n, l) - lambda).abs())
            .chain([(lambda - 2.0).abs(), (lambda + 2.0).abs()])
            .fold(f64::INFINITY, f64::min);
        if gap < 0.05 {
            continue;
        }
        let inst = || json!({ "n": n, "lambda": lambda, "mu": mu });
        let res = match (solve_recurrence(n, lambda, mu), dense_solve(n, lambda, mu)) {
            (Ok(RecurrenceSolution::Unique { values }), Some(want)) => {
                let scale = 1.0 + want.amax();
                (1..=n).map(|k| (values[k] - want[k - 1]).abs()).fold(0.0, f64::max) / scale
            }
            _ => f64::INFINITY,
        };
        unique.add(res, inst);
    }

    let mut edge = Check::new(S, "plus-minus-two-residual", 1e-12);
    for n in 1..=n_max {
        for lambda in [2.0, -2.0] {
            let mu: f64 = rng.random_range(-3.0..3.0);
            let res = solve_recurrence(n, lambda, mu).map(|s| match s {
                RecurrenceSolution::Unique { .. } => s.residual(lambda, mu),
                _ => f64::INFINITY,
            });
            edge.add_result(res, || json!({ "n": n, "lambda": lambda, "mu": mu }));
        }
    }

    let mut classify = Check::new(S, "eigenvalue-classification", 1e-10);
    for n in 1..=n_max {
        for l in 1..=n {
            for mu in [0.0, 1.0, -2.5] {
                let lambda = eig(n, l);
                let expect_none = mu != 0.0 && l % 2 == 1;
                let res = solve_recurrence(n, lambda, mu).map(|s| match (&s, expect_none) {
                    (RecurrenceSolution::None, true) => 0.0,
                    (RecurrenceSolution::Family { .. }, false) => s.residual(lambda, mu),
                    _ => f64::INFINITY,
                });
                classify.add_result(res, || json!({ "n": n, "l": l, "mu": mu }));
            }
        }
    }
    vec![unique, edge, classify]
}

fn embedding(n_max: usize) -> Vec<Check> {
    let mut check = Check::new("embedding", "squared-distance-residual", 1e-12);
    for n in 1..=n_max {
        let g = join(&family(FamilyKind::Empty, 1).unwrap(), &family(FamilyKind::Path, n).unwrap());
        let res = fan_embedding(n).and_then(|e| Ok(e.max_residual(&distance_matrix(&g)?)));
        check.add_result(res, || json!({ "n": n }));
    }
    vec![check]
}

/// Runs a suite; `n_max` of `None` uses the suite default.
pub fn run(suite: Suite, seed: u64, n_max: Option<usize>) -> Vec<Check> {
    let n = |s: Suite| n_max.unwrap_or(s.default_n_max());
    match suite {
        Suite::OracleJoin => oracle_join(seed, n(suite)),
        Suite::Fan => fan_suite(n(suite)),
        Suite::Chebyshev => chebyshev(n(suite)),
        Suite::Recurrence => recurrence(seed, n(suite)),
        Suite::Embedding => embedding(n(suite)),
        Suite::All => [Suite::OracleJoin, Suite::Fan, Suite::Chebyshev, Suite::Recurrence, Suite::Embedding]
            .into_iter()
            .flat_map(|s| run(s, seed, n_max))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for (suite, n) in [
            (Suite::OracleJoin, 4),
            (Suite::Fan, 6),
            (Suite::Chebyshev, 12),
            (Suite::Recurrence, 8),
            (Suite::Embedding, 10),
        ] {
            for c in run(suite, 3, Some(n)) {
                assert!(c.passed(), "{}", c.report());
            }
        }
    }

    #[test]
    fn failures_carry_replay_data() {
        let mut c = Check::new("t", "x", 1e-8);
        c.add(1e-9, || json!({ "n": 1 }));
        c.add(1e-3, || json!({ "n": 2 }));
        assert!(!c.passed());
        let report = c.report();
        assert!(report.starts_with("FAIL t/x: 2 cases"));
        assert!(report.contains(r#"replay: {"n":2,"residual":"0.001"}"#));
    }
}
