//! Tri-state zero testing: symbolic first, then seeded random sampling.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eval::{eval_guarded, Assignment, FunctionTable};
use super::expr::Expr;
use super::normal::simplify;

pub const DEFAULT_SEED: u64 = 0x5eed_0f_f0e5;

/// How `is_zero` samples when simplification alone does not reach `0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingPolicy {
    pub samples: usize,
    pub seed: u64,
    /// Symbols are drawn uniformly from `[-half_width, half_width]`.
    pub half_width: f64,
    /// A sample fails when `|value| > tolerance * max(1, Σ|term|)`.
    pub tolerance: f64,
    /// Points closer than this to a pole or a log singularity are redrawn.
    pub min_denominator: f64,
    /// Report `Zero` (rather than `Unknown`) when every sample vanishes.
    pub trust_sampling: bool,
    pub max_attempts: usize,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy {
            samples: 20,
            seed: DEFAULT_SEED,
            half_width: 2.0,
            tolerance: 1e-9,
            min_denominator: 1e-6,
            trust_sampling: true,
            max_attempts: 400,
        }
    }
}

impl SamplingPolicy {
    pub fn with_seed(seed: u64) -> Self {
        SamplingPolicy {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Unknown,
}

impl ZeroTest {
    /// Conjunction over a family: any `NonZero` wins, then any `Unknown`.
    pub fn all<I: IntoIterator<Item = ZeroTest>>(tests: I) -> ZeroTest {
        let mut out = ZeroTest::Zero;
        for t in tests {
            match t {
                ZeroTest::NonZero => return ZeroTest::NonZero,
                ZeroTest::Unknown => out = ZeroTest::Unknown,
                ZeroTest::Zero => {}
            }
        }
        out
    }

    pub fn is_zero(self) -> bool {
        self == ZeroTest::Zero
    }
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Smooth positive test profile `c + α e^{βu} + γ sin(δu + ε)` standing in
/// for an opaque function during sampling. All derivative orders are exact.
pub fn synthetic_profile(name: &str, seed: u64) -> impl Fn(u32, f64) -> Option<f64> + Send + Sync {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_hash(name));
    let c: f64 = rng.gen_range(2.5..3.5);
    let alpha: f64 = rng.gen_range(0.1..0.3);
    let beta: f64 = rng.gen_range(0.1..0.3) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let gamma: f64 = rng.gen_range(0.1..0.3);
    let delta: f64 = rng.gen_range(0.5..1.5);
    let eps: f64 = rng.gen_range(0.0..TAU);
    move |order, u| {
        let n = order as i32;
        let base = if order == 0 { c } else { 0.0 };
        Some(
            base + alpha * beta.powi(n) * (beta * u).exp()
                + gamma * delta.powi(n) * (delta * u + eps + f64::from(order) * FRAC_PI_2).sin(),
        )
    }
}

/// Function table with a synthetic profile for every opaque function in `e`.
pub fn synthetic_table(e: &Expr, seed: u64) -> FunctionTable {
    let mut table = FunctionTable::new();
    for name in e.opaque_functions() {
        table.insert(&name, synthetic_profile(&name, seed));
    }
    table
}

/// Decide whether `e` is identically zero.
pub fn is_zero(e: &Expr, policy: &SamplingPolicy) -> ZeroTest {
    let s = simplify(e);
    is_zero_simplified(&s, policy)
}

pub(crate) fn is_zero_simplified(s: &Expr, policy: &SamplingPolicy) -> ZeroTest {
    match s {
        Expr::Num(c) => {
            return if num_traits::Zero::is_zero(c) {
                ZeroTest::Zero
            } else {
                ZeroTest::NonZero
            }
        }
        _ => {}
    }
    let symbols: Vec<String> = s.free_symbols().into_iter().collect();
    let table = synthetic_table(s, policy.seed);
    let terms: Vec<&Expr> = match s {
        Expr::Add(xs) => xs.iter().collect(),
        other => vec![other],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut good = 0;
    let mut attempts = 0;
    while good < policy.samples && attempts < policy.max_attempts {
        attempts += 1;
        let point: Assignment = symbols
            .iter()
            .map(|name| {
                (
                    name.clone(),
                    rng.gen_range(-policy.half_width..policy.half_width),
                )
            })
            .collect();
        let mut value = 0.0;
        let mut scale = 0.0;
        let mut failed = false;
        for term in &terms {
            match eval_guarded(term, &point, &table, policy.min_denominator) {
                Ok(v) => {
                    value += v;
                    scale += v.abs();
                }
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            continue;
        }
        if value.abs() > policy.tolerance * scale.max(1.0) {
            return ZeroTest::NonZero;
        }
        good += 1;
    }
    if good < policy.samples || !policy.trust_sampling {
        ZeroTest::Unknown
    } else {
        ZeroTest::Zero
    }
}

/// Sign of `e` at the first usable point: the box center if `e` is finite and
/// clear of zero there, otherwise seeded samples from the box.
pub fn numeric_sign(e: &Expr, policy: &SamplingPolicy) -> Option<i8> {
    let symbols: Vec<String> = e.free_symbols().into_iter().collect();
    let table = synthetic_table(e, policy.seed);
    let sign_at = |point: &Assignment| {
        eval_guarded(e, point, &table, policy.min_denominator)
            .ok()
            .filter(|v| v.abs() > policy.min_denominator)
            .map(|v| if v > 0.0 { 1 } else { -1 })
    };
    let center: Assignment = symbols.iter().map(|s| (s.clone(), 0.0)).collect();
    if let Some(sign) = sign_at(&center) {
        return Some(sign);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    (0..policy.max_attempts).find_map(|_| {
        let point: Assignment = symbols
            .iter()
            .map(|s| (s.clone(), rng.gen_range(-policy.half_width..policy.half_width)))
            .collect();
        sign_at(&point)
    })
}
