//! Lyapunov-exponent estimators.
//!
//! All exponents are normalized **per elementary gate** (nats/gate): a block
//! of the published gate sets counts 3 gates, a dipole 6, so Floquet,
//! Fibonacci, and random estimators are mutually comparable.

use crate::gates::{block_matrix, gates_per_block, BlockKind, GateSet};
use crate::mobius::{Mat2C, MomentumGrid};
use crate::sequences::{bernoulli_word, derive_seed, fibonacci_number, Letter, SequenceKind, Word};
use crate::trace_maps::{fib_step, initial_triple};
use crate::Result;
use rayon::prelude::*;

/// A Lyapunov-exponent estimate in nats per elementary gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovEstimate {
    pub value: f64,
    /// Standard error over realizations (0 for deterministic estimators).
    pub stderr: f64,
    /// Number of elementary gates entering the product.
    pub n_gates: u64,
}

/// Accumulated `log ‖Π‖` of the Frobenius-renormalized product over a word,
/// sampled at the requested letter counts (must be ascending). The product is
/// built in time order, left-multiplying each later factor.
pub fn log_norm_checkpoints(
    word: &Word,
    matrix_of: impl Fn(Letter) -> Mat2C,
    checkpoints: &[usize],
) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().peekable();
    let mut b = Mat2C::identity();
    let mut log_norm = 0.0f64;
    for (applied, letter) in word.time_ordered().enumerate() {
        b = matrix_of(letter) * b;
        let nrm = b.frobenius_norm();
        log_norm += nrm.ln();
        b = b.scale((1.0 / nrm).into());
        while next.peek() == Some(&(applied + 1)) {
            out.push(log_norm);
            next.next();
        }
    }
    out
}

/// Lyapunov exponent of the renormalized matrix product over a word:
/// `log ‖Π‖ / (gates_per_letter · |word|)`.
pub fn lyapunov_product(
    word: &Word,
    matrix_of: impl Fn(Letter) -> Mat2C,
    gates_per_letter: usize,
) -> LyapunovEstimate {
    let n = word.len();
    let log_norm = log_norm_checkpoints(word, matrix_of, &[n])
        .pop()
        .unwrap_or(0.0);
    let n_gates = (n * gates_per_letter) as u64;
    LyapunovEstimate {
        value: log_norm / n_gates.max(1) as f64,
        stderr: 0.0,
        n_gates,
    }
}

/// Closed-form exponent of a periodic cycle from its trace:
/// `0` if `|trace| ≤ 2`, else `(1/p) log((|trace| + √(trace² - 4))/2)` with
/// `p` the number of elementary gates per cycle.
pub fn lyapunov_from_trace(trace: f64, p: usize) -> f64 {
    let t = trace.abs();
    if t <= 2.0 {
        0.0
    } else {
        ((t + (t * t - 4.0).sqrt()) / 2.0).ln() / p as f64
    }
}

/// Fibonacci-circuit Lyapunov exponent at `(T, λ, k)` via the trace map:
/// approximates the circuit by the periodic cycle of its first `F_n` blocks,
/// so `λ_L = arccosh(|x_n|) / (3 F_n)` for `|x_n| > 1`, else 0.
///
/// Once the orbit exceeds the overflow guard the map is continued on
/// `log |x|` using `log|x_{n+1}| ≈ log 2 + log|x_n| + log|x_{n-1}|`, which is
/// exact up to `O(x⁻²)` at that magnitude.
pub fn lyapunov_fibonacci(t: f64, lambda: f64, k: f64, n: u32) -> Result<f64> {
    assert!(n >= 2, "need at least two Fibonacci steps");
    let m0 = block_matrix(BlockKind::U0, t, lambda, k)?;
    let m1 = block_matrix(BlockKind::U1, t, lambda, k)?;
    let seed = initial_triple(&m0, &m1)?;

    const GUARD: f64 = 1e100;
    let mut triple = seed;
    let mut logs: Option<(f64, f64, f64)> = None;
    for _ in 0..n {
        match logs {
            None => {
                let next = fib_step(triple);
                if next.max_abs() > GUARD {
                    logs = Some((
                        triple.x.abs().max(1e-300).ln(),
                        triple.y.abs().max(1e-300).ln(),
                        triple.z.abs().max(1e-300).ln(),
                    ));
                } else {
                    triple = next;
                }
            }
            Some(_) => {}
        }
        if let Some((lx, ly, lz)) = logs {
            // log-space step: |2yz - x| is dominated by 2|y||z| here.
            logs = Some((ly, lz, std::f64::consts::LN_2 + ly + lz));
            let _ = lx;
        }
    }

    let n_gates = 3.0 * fibonacci_number(n) as f64;
    let growth = match logs {
        Some((lx, _, _)) => std::f64::consts::LN_2 + lx, // log|Tr| = log 2 + log|x|
        None => {
            let x = triple.x.abs();
            if x <= 1.0 {
                return Ok(0.0);
            }
            x.acosh() // log(|x| + √(x² - 1)) = log((|Tr| + √(Tr² - 4))/2)
        }
    };
    Ok((growth / n_gates).max(0.0))
}

/// Ensemble Lyapunov exponent: mean and standard error of
/// [`lyapunov_product`] over independently seeded words.
pub fn lyapunov_ensemble(
    kind: &SequenceKind,
    blocks: (Mat2C, Mat2C),
    gates_per_letter: usize,
    realizations: usize,
    master_seed: u64,
) -> LyapunovEstimate {
    assert!(realizations >= 1);
    let matrix_of = |l: Letter| match l {
        Letter::A => blocks.0,
        Letter::B => blocks.1,
    };
    let values: Vec<f64> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let word = reseeded(kind, derive_seed(master_seed, r)).word(1);
            lyapunov_product(&word, matrix_of, gates_per_letter).value
        })
        .collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let word_len = kind.word(1).len();
    LyapunovEstimate {
        value: mean,
        stderr: (var / n).sqrt(),
        n_gates: (word_len * gates_per_letter) as u64,
    }
}

fn reseeded(kind: &SequenceKind, seed: u64) -> SequenceKind {
    match kind {
        SequenceKind::Bernoulli { length, .. } => SequenceKind::Bernoulli { length: *length, seed },
        SequenceKind::Multipolar { order, num_blocks, .. } => SequenceKind::Multipolar {
            order: *order,
            num_blocks: *num_blocks,
            seed,
        },
        deterministic => deterministic.clone(),
    }
}

/// Minimum per-momentum Lyapunov exponent over the grid, the Fig. 2 / Fig. 3
/// order parameter. `n` counts Floquet cycles, Fibonacci steps, or random
/// blocks depending on the sequence kind.
pub fn min_lyapunov_over_k(
    t: f64,
    lambda: f64,
    grid: &MomentumGrid,
    gate_set: GateSet,
    kind: &SequenceKind,
    n: usize,
) -> Result<f64> {
    assert!(!grid.is_empty());
    let (block_a, block_b) = gate_set.letter_blocks();
    let gates_per_letter = gates_per_block(block_a);

    // The temporal word is identical for all momenta.
    let word = match kind {
        SequenceKind::Floquet(period) => Some(period.repeated(n)),
        SequenceKind::Bernoulli { seed, .. } => Some(bernoulli_word(n, *seed)),
        SequenceKind::Multipolar { order, seed, .. } => {
            Some(crate::sequences::multipolar_word(*order, n, *seed))
        }
        SequenceKind::Fibonacci(_) | SequenceKind::ThueMorse(_) => None,
    };

    let values: Result<Vec<f64>> = grid
        .momenta()
        .par_iter()
        .map(|&k| -> Result<f64> {
            match &word {
                Some(w) => {
                    let ma = block_matrix(block_a, t, lambda, k)?;
                    let mb = block_matrix(block_b, t, lambda, k)?;
                    let est = lyapunov_product(
                        w,
                        |l| if l == Letter::A { ma } else { mb },
                        gates_per_letter,
                    );
                    Ok(est.value)
                }
                None => lyapunov_fibonacci(t, lambda, k, n as u32),
            }
        })
        .collect();
    Ok(values?.into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scans::floquet_boundary_lambda;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn diagonal_growth_rate() {
        let e = std::f64::consts::E;
        let m = Mat2C::from_reals(e, 0.0, 0.0, 1.0 / e);
        let word = Word(vec![Letter::A; 200]);
        let est = lyapunov_product(&word, |_| m, 1);
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn su2_products_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = rng.random_range(0.1..1.0);
        let k = rng.random_range(0.3..2.8);
        let ma = crate::gates::mobius_yy(t, k).unwrap();
        let mb = crate::gates::mobius_zz(1.3 * t, k).unwrap();
        let word = bernoulli_word(20_000, 5);
        let est = lyapunov_product(&word, |l| if l == Letter::A { ma } else { mb }, 1);
        assert!(est.value.abs() < 1e-3);
    }

    #[test]
    fn trace_formula_cases() {
        assert_eq!(lyapunov_from_trace(2.0, 6), 0.0);
        assert_eq!(lyapunov_from_trace(1.5, 3), 0.0);
        let t = std::f64::consts::E + (-1.0f64).exp();
        assert_abs_diff_eq!(lyapunov_from_trace(t, 1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn floquet_product_matches_trace_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut hyperbolic = 0;
        while hyperbolic < 50 {
            let t = rng.random_range(0.0..PI / 2.0);
            let lambda = rng.random_range(0.0..1.2);
            let k = rng.random_range(0.05..PI - 0.05);
            let m0 = block_matrix(BlockKind::U0, t, lambda, k).unwrap();
            let m1 = block_matrix(BlockKind::U1, t, lambda, k).unwrap();
            let tr = (m0 * m1).trace().re;
            if tr.abs() <= 2.05 {
                continue; // need clearly hyperbolic cycles
            }
            hyperbolic += 1;
            let exact = lyapunov_from_trace(tr, 6);
            let word = Word(vec![Letter::A, Letter::B]).repeated(10_000);
            let est =
                lyapunov_product(&word, |l| if l == Letter::A { m0 } else { m1 }, 3);
            assert!(
                (est.value - exact).abs() < 1e-3,
                "product {} vs trace {} at T={t}, λ={lambda}, k={k}",
                est.value,
                exact
            );
        }
    }

    #[test]
    fn fibonacci_estimator_limits() {
        // Deep area law: clearly positive exponent.
        let v = lyapunov_fibonacci(0.1, 1.5, 1.1, 20).unwrap();
        assert!(v > 0.05, "area-law exponent {v}");
        // On the period-6 surface the exponent vanishes.
        let ks = crate::scans::period6_momenta(PI / 4.0);
        let v = lyapunov_fibonacci(PI / 4.0, 0.7, ks[0], 30).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn fibonacci_log_extrapolation_consistent() {
        // Same parameters, increasing n: per-gate exponent stabilizes across
        // the float → log-space handoff.
        let coarse = lyapunov_fibonacci(0.1, 1.5, 1.1, 12).unwrap();
        let fine = lyapunov_fibonacci(0.1, 1.5, 1.1, 26).unwrap();
        assert!((coarse - fine).abs() < 0.02, "{coarse} vs {fine}");
    }

    #[test]
    fn min_over_k_phase_detection() {
        let grid = MomentumGrid::new(400).unwrap();
        let floquet = SequenceKind::Floquet("AB".parse().unwrap());
        // Volume-law point: some momenta elliptic → min is ~0.
        let v = min_lyapunov_over_k(PI / 4.0, 0.5, &grid, GateSet::Eq7, &floquet, 2000).unwrap();
        assert!(v < 1e-3, "volume point min λ_L = {v}");
        // Area-law point: all momenta hyperbolic.
        let a = min_lyapunov_over_k(0.05, 1.0, &grid, GateSet::Eq7, &floquet, 2000).unwrap();
        assert!(a > 1e-2, "area point min λ_L = {a}");
        // λ = 0: unitary, exponent 0.
        let u = min_lyapunov_over_k(0.3, 0.0, &grid, GateSet::Eq7, &floquet, 500).unwrap();
        assert!(u.abs() < 1e-3);
        // Sanity: the analytic boundary separates the two above.
        let lc = floquet_boundary_lambda(PI / 4.0);
        assert!(lc.is_none());
    }

    #[test]
    fn ensemble_determinism() {
        let m0 = block_matrix(BlockKind::U0, 0.3, 0.4, 1.0).unwrap();
        let m1 = block_matrix(BlockKind::U1, 0.3, 0.4, 1.0).unwrap();
        let kind = SequenceKind::Bernoulli { length: 2000, seed: 0 };
        let a = lyapunov_ensemble(&kind, (m0, m1), 3, 8, 77);
        let b = lyapunov_ensemble(&kind, (m0, m1), 3, 8, 77);
        assert_eq!(a, b);
        assert!(a.stderr >= 0.0);
    }

    #[test]
    fn checkpoints_are_cumulative() {
        let m = Mat2C::from_reals(2.0, 0.0, 0.0, 0.5);
        let word = Word(vec![Letter::A; 100]);
        let cps = log_norm_checkpoints(&word, |_| m, &[10, 50, 100]);
        assert_eq!(cps.len(), 3);
        assert!(cps[0] < cps[1] && cps[1] < cps[2]);
        assert_abs_diff_eq!(cps[2] / 100.0, 2.0f64.ln(), epsilon = 0.05);
    }
}
