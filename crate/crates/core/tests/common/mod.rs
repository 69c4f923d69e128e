//! Seeded generators shared by the property and acceptance tests.
#![allow(dead_code)]

use exformal::connection::Connection;
use exformal::exterior::{increasing_tuples, Form};
use exformal::transform::QuadraticLagrangian;
use exformal::symbolic::{eval_at, is_zero, synthetic_table, Assignment, Chart, Expr, SamplingPolicy, ZeroTest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn chart(n: usize) -> Chart {
    let names = ["t", "x", "y", "z"];
    Chart::new(&names[4 - n..]).unwrap()
}

pub fn small_int(rng: &mut ChaCha8Rng) -> Expr {
    let mut k = rng.gen_range(-3..=3);
    if k == 0 {
        k = 1;
    }
    Expr::int(k)
}

fn atom(rng: &mut ChaCha8Rng, chart: &Chart, trig: bool) -> Expr {
    let x = chart.coord(rng.gen_range(0..chart.dim()));
    match rng.gen_range(0..if trig { 5 } else { 3 }) {
        0 => small_int(rng),
        1 => x,
        2 => x.pow(rng.gen_range(2..=3)),
        3 => x.sin(),
        _ => x.cos(),
    }
}

/// A sum of up to three products of up to two atoms: polynomial, or
/// polynomial-trigonometric when `trig` is set.
pub fn expr(rng: &mut ChaCha8Rng, chart: &Chart, trig: bool) -> Expr {
    let terms = rng.gen_range(1..=3);
    Expr::sum(
        (0..terms)
            .map(|_| {
                let factors = rng.gen_range(1..=2);
                small_int(rng) * Expr::product((0..factors).map(|_| atom(rng, chart, trig)).collect())
            })
            .collect(),
    )
}

pub fn poly(rng: &mut ChaCha8Rng, chart: &Chart) -> Expr {
    expr(rng, chart, false)
}

/// Random `p`-form with each increasing component present with probability 2/3.
pub fn form(rng: &mut ChaCha8Rng, chart: &Chart, p: usize, trig: bool) -> Form {
    let comps: Vec<(Vec<usize>, Expr)> = increasing_tuples(chart.dim(), p)
        .into_iter()
        .filter_map(|idx| rng.gen_bool(2.0 / 3.0).then(|| (idx, expr(rng, chart, trig))))
        .collect();
    Form::from_components(chart, p, comps).unwrap()
}

/// Random connection with sparse polynomial coefficients, generally torsionful.
pub fn connection(rng: &mut ChaCha8Rng, chart: &Chart) -> Connection {
    let n = chart.dim();
    let mut entries = Vec::new();
    for s in 0..n {
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(0.3) {
                    entries.push((s, a, b, poly(rng, chart)));
                }
            }
        }
    }
    Connection::sparse(chart, &entries).unwrap()
}

pub fn policy() -> SamplingPolicy {
    SamplingPolicy::default()
}

/// Componentwise verdict on a form: exact simplification when it reaches the
/// zero literal, else the sampled zero test.
pub fn form_vanishes(f: &Form) -> bool {
    f.components().values().all(|e| is_zero(e, &policy()) == ZeroTest::Zero)
}

/// Independent numeric check: `|e| < tol` at `points` seeded points in the
/// box `[0.5, 1.5]^n`, with opaque functions replaced by synthetic profiles.
pub fn numerically_zero(e: &Expr, chart: &Chart, points: usize, tol: f64, seed: u64) -> bool {
    let table = synthetic_table(e, seed);
    let mut r = rng(seed);
    (0..points).all(|_| {
        let at: Assignment = chart
            .names()
            .iter()
            .map(|n| (n.clone(), r.gen_range(0.5..1.5)))
            .collect();
        match eval_at(e, &at, &table) {
            Ok(v) => v.abs() < tol,
            Err(_) => false,
        }
    })
}

/// Quadratic Lagrangian with a diagonally dominant (hence nonsingular)
/// symmetric constant mass matrix, polynomial linear terms and potential.
pub fn random_lagrangian(r: &mut ChaCha8Rng, k: usize) -> QuadraticLagrangian {
    let q: Vec<String> = (1..=k).map(|i| format!("q{i}")).collect();
    let v: Vec<String> = (1..=k).map(|i| format!("v{i}")).collect();
    let qc = Chart::new(&q).unwrap();
    let mut m = vec![vec![Expr::zero(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let e = Expr::int(r.gen_range(-1..=1));
            m[i][j] = e.clone();
            m[j][i] = e;
        }
        m[i][i] = Expr::int(r.gen_range(k as i64 + 1..=k as i64 + 4));
    }
    let linear = (0..k).map(|_| if r.gen_bool(0.5) { poly(r, &qc) } else { Expr::zero() }).collect();
    QuadraticLagrangian::new(&q, &v, m)
        .unwrap()
        .with_linear(linear)
        .unwrap()
        .with_potential(poly(r, &qc))
        .unwrap()
}
