//! Classical trace-map dynamics.
//!
//! Fibonacci circuits: the **half**-traces `x_n = ½Tr(M_n)` obey the 3D map
//! `(x, y, z) ↦ (y, z, 2yz - x)` with the conserved invariant
//! `I = x² + y² + z² - 2xyz - 1`. Thue–Morse circuits: the **full** traces
//! `x_n = Tr(M_n)` obey `x_{n+1} = x_{n-1}²(x_n - 2) + 2`, reduced to the 2D
//! map `(p, q) ↦ (q², pq - 2p + 2)` on `p_n = x_n²`, `q_n = x_{n+1}`. The
//! half/full conventions are kept verbatim and isolated per map.

use crate::gates::{block_matrix, BlockKind};
use crate::mobius::Mat2C;
use crate::{Error, Result};

/// State of the Fibonacci 3D trace map (half-traces).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// State of the Thue–Morse 2D trace map: `p = x_n²`, `q = x_{n+1}` (full traces).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePair {
    pub p: f64,
    pub q: f64,
}

/// Invariant regions of the Thue–Morse map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmRegion {
    /// `p ≥ 0`, `p - 2 ≤ q ≤ 2`: bounded orbits (SU(2)-able letters).
    RegionI,
    /// `p ≥ 0`, `q ≥ 2`: monotone escape.
    RegionII,
    /// `p ≥ 0`, `q ≤ 2`, `q ≤ p - 2`: escape after one step; unreachable for
    /// the physical gate sets.
    RegionIII,
    /// `p < 0` (unreachable for real traces) or no inequality matched.
    Outside,
}

impl TraceTriple {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        TraceTriple { x, y, z }
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

/// One Fibonacci trace-map step `(x, y, z) ↦ (y, z, 2yz - x)`.
pub fn fib_step(t: TraceTriple) -> TraceTriple {
    TraceTriple::new(t.y, t.z, 2.0 * t.y * t.z - t.x)
}

/// Conserved invariant `I = x² + y² + z² - 2xyz - 1` of the Fibonacci map.
pub fn fib_invariant(t: TraceTriple) -> f64 {
    t.x * t.x + t.y * t.y + t.z * t.z - 2.0 * t.x * t.y * t.z - 1.0
}

/// Seed `(½Tr M_0, ½Tr M_1, ½Tr M_0M_1)` of the Fibonacci map. The traces of
/// both letters (and hence of all words) must be real.
pub fn initial_triple(m0: &Mat2C, m1: &Mat2C) -> Result<TraceTriple> {
    let t0 = m0.trace();
    let t1 = m1.trace();
    let t2 = (*m0 * *m1).trace();
    let im = t0.im.abs().max(t1.im.abs()).max(t2.im.abs());
    if im > 1e-8 {
        return Err(Error::NonRealTrace(im));
    }
    Ok(TraceTriple::new(t0.re / 2.0, t1.re / 2.0, t2.re / 2.0))
}

/// Closed form of the Fibonacci invariant for the `U_0`/`U_1` blocks at
/// `(T, λ, k)`:
///
/// ```text
/// V_k = (1/8) cosh²(2λ) sin²(k) sin²(4T) ×
///       [-19 + 13 cosh(4λ)
///        + 2 cosh²(2λ) (3 cos(4k) - 2(-4cos(4T) + cos(8T)) sin²(2k))]
/// ```
pub fn invariant_vk(t: f64, lambda: f64, k: f64) -> f64 {
    let c2 = (2.0 * lambda).cosh();
    let bracket = -19.0 + 13.0 * (4.0 * lambda).cosh()
        + 2.0 * c2 * c2
            * (3.0 * (4.0 * k).cos()
                - 2.0 * (-4.0 * (4.0 * t).cos() + (8.0 * t).cos()) * (2.0 * k).sin().powi(2));
    0.125 * c2 * c2 * k.sin().powi(2) * (4.0 * t).sin().powi(2) * bracket
}

/// First step `n ≤ n_max` at which the orbit exceeds `threshold` in any
/// coordinate, or `None` if it stays below (the escape-time diagnostic for
/// proximity to the bounded Cantor set).
pub fn escape_time(t0: TraceTriple, threshold: f64, n_max: usize) -> Option<usize> {
    assert!(threshold > 4.0, "escape threshold must exceed 4");
    let mut t = t0;
    for n in 1..=n_max {
        t = fib_step(t);
        if t.max_abs() > threshold {
            return Some(n);
        }
    }
    None
}

/// Default escape threshold.
pub const ESCAPE_THRESHOLD: f64 = 1e7;

/// One Thue–Morse map step `(p, q) ↦ (q², pq - 2p + 2)`.
pub fn tm_step(s: TracePair) -> TracePair {
    TracePair { p: s.q * s.q, q: s.p * s.q - 2.0 * s.p + 2.0 }
}

/// Invariant region of a Thue–Morse map point. Boundary ties resolve in
/// priority order I, II, III (the regions share edges; ties are measure-zero).
pub fn tm_region(s: TracePair) -> TmRegion {
    if s.p < 0.0 {
        return TmRegion::Outside;
    }
    if s.q <= 2.0 && s.q >= s.p - 2.0 {
        TmRegion::RegionI
    } else if s.q >= 2.0 {
        TmRegion::RegionII
    } else if s.q <= s.p - 2.0 {
        TmRegion::RegionIII
    } else {
        TmRegion::Outside
    }
}

/// Full-trace Thue–Morse iterates `x_1 … x_n` from the letter pair
/// `(M_+, M_-)`: `x_1 = Tr(M_+)`, `x_2 = Tr(M_+M_-)`,
/// `x_{n+1} = x_{n-1}²(x_n - 2) + 2`.
pub fn tm_trace_sequence(mplus: &Mat2C, mminus: &Mat2C, n: usize) -> Result<Vec<f64>> {
    let t1 = mplus.trace();
    let t2 = (*mplus * *mminus).trace();
    let im = t1.im.abs().max(t2.im.abs());
    if im > 1e-8 {
        return Err(Error::NonRealTrace(im));
    }
    let mut xs = Vec::with_capacity(n);
    if n >= 1 {
        xs.push(t1.re);
    }
    if n >= 2 {
        xs.push(t2.re);
    }
    while xs.len() < n {
        let m = xs.len();
        let x_prev = xs[m - 2];
        let x_cur = xs[m - 1];
        xs.push(x_prev * x_prev * (x_cur - 2.0) + 2.0);
    }
    Ok(xs)
}

/// Initial Thue–Morse pair `(p_1, q_1) = (x_1², x_2)` for the dipole blocks at
/// `(T, λ, k)`.
pub fn tm_initial_pair(t: f64, lambda: f64, k: f64) -> Result<TracePair> {
    let mp = block_matrix(BlockKind::DipolePlus, t, lambda, k)?;
    let mm = block_matrix(BlockKind::DipoleMinus, t, lambda, k)?;
    let xs = tm_trace_sequence(&mp, &mm, 2)?;
    Ok(TracePair { p: xs[0] * xs[0], q: xs[1] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{block_matrix, BlockKind};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn period_six_orbit() {
        let mut t = TraceTriple::new(0.0, 0.0, 2.0);
        let expected = [
            (0.0, 2.0, 0.0),
            (2.0, 0.0, 0.0),
            (0.0, 0.0, -2.0),
            (0.0, -2.0, 0.0),
            (-2.0, 0.0, 0.0),
            (0.0, 0.0, 2.0),
        ];
        for (x, y, z) in expected {
            t = fib_step(t);
            assert_eq!((t.x, t.y, t.z), (x, y, z));
        }
        assert_eq!(fib_invariant(TraceTriple::new(0.0, 0.0, 2.0)), 3.0);
    }

    #[test]
    fn fixed_point_and_escape() {
        let fp = fib_step(TraceTriple::new(1.0, 1.0, 1.0));
        assert_eq!((fp.x, fp.y, fp.z), (1.0, 1.0, 1.0));
        assert_eq!(fib_invariant(TraceTriple::new(1.0, 1.0, 1.0)), 0.0);

        // (2,2,2) escapes quickly: x-sequence 2, 2, 2, 6, 22, 262, …
        let mut t = TraceTriple::new(2.0, 2.0, 2.0);
        let mut xs = vec![t.x];
        for _ in 0..5 {
            t = fib_step(t);
            xs.push(t.x);
        }
        assert_eq!(xs, vec![2.0, 2.0, 2.0, 6.0, 22.0, 262.0]);
        let esc = escape_time(TraceTriple::new(2.0, 2.0, 2.0), 1e7, 50).unwrap();
        assert!(esc <= 10);
        assert_eq!(escape_time(TraceTriple::new(0.0, 0.0, 2.0), 1e7, 100_000), None);
    }

    #[test]
    fn invariant_conserved_on_random_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 2000 {
            let s = [0.5, 1.0, 2.0][rng.random_range(0..3)];
            let mut t = TraceTriple::new(
                rng.random_range(-s..s),
                rng.random_range(-s..s),
                rng.random_range(-s..s),
            );
            let i0 = fib_invariant(t);
            let tol = 1e-9 * i0.abs().max(1.0);
            let mut bounded = true;
            for _ in 0..30 {
                t = fib_step(t);
                if t.max_abs() > 10.0 {
                    bounded = false;
                    break;
                }
                assert!((fib_invariant(t) - i0).abs() <= tol);
            }
            if bounded {
                checked += 1;
            }
        }
    }

    #[test]
    fn initial_triple_basics() {
        let id = Mat2C::identity();
        let t = initial_triple(&id, &id).unwrap();
        assert_eq!((t.x, t.y, t.z), (1.0, 1.0, 1.0));

        // Rejects non-real traces (a generic pulse block).
        let m = block_matrix(BlockKind::UplusPulse, 0.4, 0.3, 2.0).unwrap();
        assert!(matches!(initial_triple(&m, &m), Err(Error::NonRealTrace(_))));
    }

    #[test]
    fn vk_closed_form_matches_matrix_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let t = rng.random_range(0.0..PI / 2.0);
            let lambda = rng.random_range(0.0..1.2);
            let k = rng.random_range(0.05..PI - 0.05);
            let m0 = block_matrix(BlockKind::U0, t, lambda, k).unwrap();
            let m1 = block_matrix(BlockKind::U1, t, lambda, k).unwrap();
            let seed = initial_triple(&m0, &m1).unwrap();
            let direct = fib_invariant(seed);
            let closed = invariant_vk(t, lambda, k);
            let scale = direct.abs().max(1.0);
            assert!(
                (direct - closed).abs() / scale < 1e-8,
                "V_k mismatch at T={t}, λ={lambda}, k={k}: {direct} vs {closed}"
            );
        }
    }

    #[test]
    fn vk_trivial_zeros() {
        // sin(4T) = 0 and k → 0 kill the prefactor.
        for lambda in [0.0, 0.5, 1.0] {
            assert_abs_diff_eq!(invariant_vk(PI / 4.0, lambda, 1.0), 0.0, epsilon = 1e-12);
            assert!(invariant_vk(0.7, lambda, 1e-8).abs() < 1e-12);
        }
    }

    #[test]
    fn tm_map_orbits() {
        // Fixed point (4, 2).
        let s = tm_step(TracePair { p: 4.0, q: 2.0 });
        assert_eq!((s.p, s.q), (4.0, 2.0));
        // (1, 0) → (0, 0) → (0, 2) → (4, 2).
        let mut s = TracePair { p: 1.0, q: 0.0 };
        let orbit: Vec<(f64, f64)> = (0..3)
            .map(|_| {
                s = tm_step(s);
                (s.p, s.q)
            })
            .collect();
        assert_eq!(orbit, vec![(0.0, 0.0), (0.0, 2.0), (4.0, 2.0)]);
        // (1, 3) diverges: (9, 3), (9, 11), (121, 83), …
        let mut s = TracePair { p: 1.0, q: 3.0 };
        s = tm_step(s);
        assert_eq!((s.p, s.q), (9.0, 3.0));
        s = tm_step(s);
        assert_eq!((s.p, s.q), (9.0, 11.0));
        s = tm_step(s);
        assert_eq!((s.p, s.q), (121.0, 83.0));
    }

    #[test]
    fn tm_region_classification() {
        assert_eq!(tm_region(TracePair { p: 1.0, q: 0.0 }), TmRegion::RegionI);
        assert_eq!(tm_region(TracePair { p: 1.0, q: 3.0 }), TmRegion::RegionII);
        assert_eq!(tm_region(TracePair { p: 5.0, q: 1.0 }), TmRegion::RegionIII);
        assert_eq!(tm_region(TracePair { p: -1.0, q: 0.0 }), TmRegion::Outside);
    }

    #[test]
    fn tm_regions_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut in_i = 0;
        let mut in_ii = 0;
        while in_i < 10_000 || in_ii < 10_000 {
            let p = rng.random_range(0.0..6.0);
            let q = rng.random_range(-4.0..8.0);
            let s = TracePair { p, q };
            match tm_region(s) {
                TmRegion::RegionI if in_i < 10_000 => {
                    assert_eq!(tm_region(tm_step(s)), TmRegion::RegionI);
                    in_i += 1;
                }
                TmRegion::RegionII if in_ii < 10_000 => {
                    assert_eq!(tm_region(tm_step(s)), TmRegion::RegionII);
                    in_ii += 1;
                }
                _ => {}
            }
        }
    }

    #[test]
    fn tm_sequence_identity_letters() {
        let id = Mat2C::identity();
        let xs = tm_trace_sequence(&id, &id, 8).unwrap();
        assert!(xs.iter().all(|&x| (x - 2.0).abs() < 1e-14));
    }
}
