//! Python bindings for the `moebius-mipt` core: Möbius matrices and gate
//! blocks, aperiodic sequences, trace maps, Lyapunov estimators, closed-form
//! phase boundaries, and entanglement-entropy profiles.

use moebius_mipt::entanglement::{entropy_profile, evolve_vacuum, fit_log, fit_power};
use moebius_mipt::gates::{self, BlockKind, GateSet};
use moebius_mipt::sequences::{bernoulli_word, fibonacci_word, thue_morse_word, SequenceKind, Word};
use moebius_mipt::trace_maps::{self, TracePair, TraceTriple};
use moebius_mipt::{lyapunov, mobius, scans, Amplitude, Mat2C, MomentumGrid, C64};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py_err(e: moebius_mipt::Error) -> PyErr {
    match e {
        moebius_mipt::Error::Domain(_) | moebius_mipt::Error::Dimension { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyArithmeticError::new_err(other.to_string()),
    }
}

fn parse_block(name: &str) -> PyResult<BlockKind> {
    match name {
        "u0" => Ok(BlockKind::U0),
        "u1" => Ok(BlockKind::U1),
        "uplus_sign" => Ok(BlockKind::UplusSign),
        "uminus_sign" => Ok(BlockKind::UminusSign),
        "uplus_pulse" => Ok(BlockKind::UplusPulse),
        "uminus_pulse" => Ok(BlockKind::UminusPulse),
        "dipole_plus" => Ok(BlockKind::DipolePlus),
        "dipole_minus" => Ok(BlockKind::DipoleMinus),
        other => Err(PyValueError::new_err(format!(
            "unknown block {other:?}; expected one of u0, u1, uplus_sign, uminus_sign, \
             uplus_pulse, uminus_pulse, dipole_plus, dipole_minus"
        ))),
    }
}

fn parse_gate_set(name: &str) -> PyResult<GateSet> {
    match name {
        "eq7" => Ok(GateSet::Eq7),
        "eq32" => Ok(GateSet::Eq32),
        "eq34" => Ok(GateSet::Eq34),
        other => Err(PyValueError::new_err(format!(
            "unknown gate set {other:?}; expected eq7, eq32, or eq34"
        ))),
    }
}

fn parse_word(s: &str) -> PyResult<Word> {
    s.parse::<Word>()
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A 2×2 complex matrix acting on pairing amplitudes by Möbius
/// transformation, `f ↦ (a f + b) / (c f + d)`.
#[pyclass(name = "Mat2C", from_py_object)]
#[derive(Clone)]
struct PyMat2C {
    inner: Mat2C,
}

#[pymethods]
impl PyMat2C {
    #[new]
    fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        PyMat2C {
            inner: Mat2C::new(a, b, c, d),
        }
    }

    #[staticmethod]
    fn identity() -> Self {
        PyMat2C {
            inner: Mat2C::identity(),
        }
    }

    #[getter]
    fn a(&self) -> C64 {
        self.inner.a
    }
    #[getter]
    fn b(&self) -> C64 {
        self.inner.b
    }
    #[getter]
    fn c(&self) -> C64 {
        self.inner.c
    }
    #[getter]
    fn d(&self) -> C64 {
        self.inner.d
    }

    fn det(&self) -> C64 {
        self.inner.det()
    }

    fn trace(&self) -> C64 {
        self.inner.trace()
    }

    /// Rescale to unit determinant (principal square root of `det`).
    fn normalized(&self) -> PyResult<PyMat2C> {
        mobius::normalize_to_sl2(&self.inner)
            .map(|inner| PyMat2C { inner })
            .map_err(to_py_err)
    }

    /// Apply the Möbius map to an amplitude; `None` encodes the point at
    /// infinity, both as argument and result.
    fn apply(&self, f: Option<C64>) -> Option<C64> {
        let amp = match f {
            Some(z) => Amplitude::Finite(z),
            None => Amplitude::Infinity,
        };
        match mobius::mobius_apply(&self.inner, amp) {
            Amplitude::Finite(z) => Some(z),
            Amplitude::Infinity => None,
        }
    }

    /// Fixed-point class of the normalized map: "elliptic", "parabolic",
    /// "hyperbolic", or "loxodromic".
    fn classify(&self) -> &'static str {
        match mobius::classify(&self.inner) {
            mobius::MobiusClass::Elliptic => "elliptic",
            mobius::MobiusClass::Parabolic => "parabolic",
            mobius::MobiusClass::Hyperbolic => "hyperbolic",
            mobius::MobiusClass::Loxodromic => "loxodromic",
        }
    }

    fn __matmul__(&self, rhs: &PyMat2C) -> PyMat2C {
        PyMat2C {
            inner: self.inner * rhs.inner,
        }
    }

    fn __mul__(&self, rhs: &PyMat2C) -> PyMat2C {
        self.__matmul__(rhs)
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!("Mat2C(a={}, b={}, c={}, d={})", m.a, m.b, m.c, m.d)
    }
}

/// SL(2,ℂ)-normalized Möbius matrix for one circuit block at momentum `k`.
///
/// Blocks: "u0", "u1" (Floquet pair), "uplus_sign"/"uminus_sign",
/// "uplus_pulse"/"uminus_pulse", "dipole_plus"/"dipole_minus".
#[pyfunction]
fn block_matrix(block: &str, t: f64, lambda: f64, k: f64) -> PyResult<PyMat2C> {
    let kind = parse_block(block)?;
    gates::block_matrix(kind, t, lambda, k)
        .map(|inner| PyMat2C { inner })
        .map_err(to_py_err)
}

/// Fibonacci word of index `n` as a string of A/B letters.
#[pyfunction(name = "fibonacci_word")]
fn py_fibonacci_word(n: u32) -> String {
    fibonacci_word(n).to_string()
}

/// Thue–Morse word of index `n` as a string of A/B letters.
#[pyfunction(name = "thue_morse_word")]
fn py_thue_morse_word(n: u32) -> String {
    thue_morse_word(n).to_string()
}

/// Fair-coin random word of the given length, as a string of A/B letters.
#[pyfunction(name = "bernoulli_word")]
fn py_bernoulli_word(length: usize, seed: u64) -> String {
    bernoulli_word(length, seed).to_string()
}

/// One step of the Fibonacci trace map `(x, y, z) ↦ (y, z, 2 y z − x)`.
#[pyfunction]
fn fib_step(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let t = trace_maps::fib_step(TraceTriple::new(x, y, z));
    (t.x, t.y, t.z)
}

/// Conserved invariant `x² + y² + z² − 2xyz − 1` of the Fibonacci trace map.
#[pyfunction]
fn fib_invariant(x: f64, y: f64, z: f64) -> f64 {
    trace_maps::fib_invariant(TraceTriple::new(x, y, z))
}

/// Seed triple of half-traces for the Fibonacci trace map from the `U_0`,
/// `U_1` block pair at `(T, λ, k)`.
#[pyfunction]
fn initial_triple(t: f64, lambda: f64, k: f64) -> PyResult<(f64, f64, f64)> {
    let m0 = gates::block_matrix(BlockKind::U0, t, lambda, k).map_err(to_py_err)?;
    let m1 = gates::block_matrix(BlockKind::U1, t, lambda, k).map_err(to_py_err)?;
    let tr = trace_maps::initial_triple(&m0, &m1).map_err(to_py_err)?;
    Ok((tr.x, tr.y, tr.z))
}

/// Closed-form Fibonacci trace-map invariant at `(T, λ, k)`.
#[pyfunction]
fn invariant_vk(t: f64, lambda: f64, k: f64) -> f64 {
    trace_maps::invariant_vk(t, lambda, k)
}

/// One step of the Thue–Morse trace map `(p, q) ↦ (q², p q − 2 p + 2)`.
#[pyfunction]
fn tm_step(p: f64, q: f64) -> (f64, f64) {
    let s = trace_maps::tm_step(TracePair { p, q });
    (s.p, s.q)
}

/// Region of a Thue–Morse trace pair: "I", "II", "III", or "outside".
#[pyfunction]
fn tm_region(p: f64, q: f64) -> &'static str {
    match trace_maps::tm_region(TracePair { p, q }) {
        trace_maps::TmRegion::RegionI => "I",
        trace_maps::TmRegion::RegionII => "II",
        trace_maps::TmRegion::RegionIII => "III",
        trace_maps::TmRegion::Outside => "outside",
    }
}

/// Closed-form trace of the two-block Floquet Möbius matrix `M_F`.
#[pyfunction]
fn trace_mf(t: f64, lambda: f64, k: f64) -> f64 {
    scans::trace_mf(t, lambda, k)
}

/// Critical measurement strength of the Floquet circuit at gate time `T`,
/// or `None` where no transition exists.
#[pyfunction]
fn floquet_boundary_lambda(t: f64) -> Option<f64> {
    scans::floquet_boundary_lambda(t)
}

/// Closed-form boundary `λ_c(T) = ½ arcsinh(cos²2T / sin 2T)` of the
/// Thue–Morse bounded-trace window.
#[pyfunction]
fn arcsinh_boundary(t: f64) -> PyResult<f64> {
    scans::arcsinh_boundary(t).map_err(to_py_err)
}

/// Momenta (in `(0, π)`) on which the Fibonacci trace map is exactly
/// 6-periodic at gate time `T`.
#[pyfunction]
fn period6_momenta(t: f64) -> Vec<f64> {
    scans::period6_momenta(t)
}

/// Lyapunov exponent per gate of the Fibonacci circuit at momentum `k`,
/// from the trace map iterated to word index `n`.
#[pyfunction]
fn lyapunov_fibonacci(t: f64, lambda: f64, k: f64, n: u32) -> PyResult<f64> {
    lyapunov::lyapunov_fibonacci(t, lambda, k, n).map_err(to_py_err)
}

/// Minimum Lyapunov exponent over the momentum grid of an `L`-site chain.
///
/// `sequence` is "floquet:<word>", "fibonacci:<n>", "thue-morse:<n>", or
/// "bernoulli:<length>:<seed>".
#[pyfunction]
fn min_lyapunov_over_k(
    gate_set: &str,
    sequence: &str,
    t: f64,
    lambda: f64,
    l: usize,
    n: usize,
) -> PyResult<f64> {
    let gs = parse_gate_set(gate_set)?;
    let kind = parse_sequence(sequence)?;
    let grid = MomentumGrid::new(l).map_err(to_py_err)?;
    lyapunov::min_lyapunov_over_k(t, lambda, &grid, gs, &kind, n).map_err(to_py_err)
}

fn parse_sequence(s: &str) -> PyResult<SequenceKind> {
    let mut parts = s.split(':');
    let head = parts.next().unwrap_or("");
    let args: Vec<&str> = parts.collect();
    let bad = |msg: &str| PyValueError::new_err(format!("bad sequence {s:?}: {msg}"));
    match (head, args.as_slice()) {
        ("floquet", [word]) => Ok(SequenceKind::Floquet(parse_word(word)?)),
        ("fibonacci", [n]) => Ok(SequenceKind::Fibonacci(
            n.parse().map_err(|_| bad("index must be an integer"))?,
        )),
        ("thue-morse", [n]) => Ok(SequenceKind::ThueMorse(
            n.parse().map_err(|_| bad("index must be an integer"))?,
        )),
        ("bernoulli", [len, seed]) => Ok(SequenceKind::Bernoulli {
            length: len.parse().map_err(|_| bad("length must be an integer"))?,
            seed: seed.parse().map_err(|_| bad("seed must be an integer"))?,
        }),
        _ => Err(bad(
            "expected floquet:<word>, fibonacci:<n>, thue-morse:<n>, or bernoulli:<len>:<seed>",
        )),
    }
}

/// Entanglement-entropy profile `[(ℓ, S(ℓ)), …]` of the evolved vacuum.
///
/// The circuit applies the given A/B `word` (e.g. "AB" repeated, or a
/// Fibonacci word) with the chosen gate set at parameters `(T, λ)` on an
/// `L`-site chain.
#[pyfunction(name = "entropy_profile")]
fn py_entropy_profile(
    gate_set: &str,
    word: &str,
    t: f64,
    lambda: f64,
    l: usize,
    ells: Vec<usize>,
) -> PyResult<Vec<(usize, f64)>> {
    let gs = parse_gate_set(gate_set)?;
    let w = parse_word(word)?;
    let grid = MomentumGrid::new(l).map_err(to_py_err)?;
    let modes = evolve_vacuum(&grid, gs, &w, t, lambda).map_err(to_py_err)?;
    let profile = entropy_profile(&modes, &ells).map_err(to_py_err)?;
    Ok(profile.points)
}

/// Fit `S(ℓ) = (c_eff / 3) ln ℓ + s₀` over `window = (ℓ_min, ℓ_max)`;
/// returns `(c_eff, s0, residual, c_eff_stderr)`.
#[pyfunction(name = "fit_log")]
fn py_fit_log(
    points: Vec<(usize, f64)>,
    window: (usize, usize),
) -> PyResult<(f64, f64, f64, f64)> {
    let profile = moebius_mipt::entanglement::EntropyProfile { points };
    let fit = fit_log(&profile, window).map_err(to_py_err)?;
    Ok((fit.c_eff, fit.s0, fit.residual, fit.c_eff_err))
}

/// Fit `S(ℓ) = a ℓ^α` over `window = (ℓ_min, ℓ_max)`;
/// returns `(alpha, prefactor, residual, alpha_stderr)`.
#[pyfunction(name = "fit_power")]
fn py_fit_power(
    points: Vec<(usize, f64)>,
    window: (usize, usize),
) -> PyResult<(f64, f64, f64, f64)> {
    let profile = moebius_mipt::entanglement::EntropyProfile { points };
    let fit = fit_power(&profile, window).map_err(to_py_err)?;
    Ok((fit.alpha, fit.prefactor, fit.residual, fit.alpha_err))
}

/// SU(2) simultaneous-similarity report for the gate set's block pair at
/// `(T, λ, k)`, as a dict.
#[pyfunction]
fn su2_check<'py>(
    py: Python<'py>,
    gate_set: &str,
    t: f64,
    lambda: f64,
    k: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let gs = parse_gate_set(gate_set)?;
    let (ba, bb) = gs.letter_blocks();
    let mp = gates::block_matrix(ba, t, lambda, k).map_err(to_py_err)?;
    let mm = gates::block_matrix(bb, t, lambda, k).map_err(to_py_err)?;
    let report = scans::su2_similarity(&mp, &mm);
    let dict = PyDict::new(py);
    dict.set_item("conjugation_ok", report.conjugation_ok)?;
    dict.set_item("traces_real", report.traces_real)?;
    dict.set_item("combined_trace_ok", report.combined_trace_ok)?;
    dict.set_item(
        "similarity",
        report.s.map(|inner| PyMat2C { inner }.into_pyobject(py).ok()),
    )?;
    dict.set_item(
        "unitarity_defect",
        if report.unitarity_defect.is_nan() {
            None
        } else {
            Some(report.unitarity_defect)
        },
    )?;
    dict.set_item(
        "trace_identity_residual",
        scans::trace_identity_check(&mp, &mm).ok(),
    )?;
    Ok(dict)
}

#[pymodule]
fn moebius_mipt_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMat2C>()?;
    m.add_function(wrap_pyfunction!(block_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(py_fibonacci_word, m)?)?;
    m.add_function(wrap_pyfunction!(py_thue_morse_word, m)?)?;
    m.add_function(wrap_pyfunction!(py_bernoulli_word, m)?)?;
    m.add_function(wrap_pyfunction!(fib_step, m)?)?;
    m.add_function(wrap_pyfunction!(fib_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(initial_triple, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_vk, m)?)?;
    m.add_function(wrap_pyfunction!(tm_step, m)?)?;
    m.add_function(wrap_pyfunction!(tm_region, m)?)?;
    m.add_function(wrap_pyfunction!(trace_mf, m)?)?;
    m.add_function(wrap_pyfunction!(floquet_boundary_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(arcsinh_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(period6_momenta, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_fibonacci, m)?)?;
    m.add_function(wrap_pyfunction!(min_lyapunov_over_k, m)?)?;
    m.add_function(wrap_pyfunction!(py_entropy_profile, m)?)?;
    m.add_function(wrap_pyfunction!(py_fit_log, m)?)?;
    m.add_function(wrap_pyfunction!(py_fit_power, m)?)?;
    m.add_function(wrap_pyfunction!(su2_check, m)?)?;
    Ok(())
}
