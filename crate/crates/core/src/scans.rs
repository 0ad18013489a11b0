//! Closed-form phase boundaries, phase-diagram grid workflows, the period-6
//! momentum solver, and the SU(2) simultaneous-similarity checker.

use crate::gates::GateSet;
use crate::lyapunov::min_lyapunov_over_k;
use crate::mobius::{Mat2C, MomentumGrid};
use crate::sequences::SequenceKind;
use crate::trace_maps::invariant_vk;
use crate::{C64, Error, Result};
use rayon::prelude::*;

/// Closed form of the Floquet-cycle trace `Tr(M_0 M_1)` at `(T, λ, k)`:
///
/// ```text
/// Tr(M_F) = (1/8)[-3 + 13 cosh(4λ)
///                 + 2 cosh²(2λ)(4cos(4T) - cos(8T) + 8cos(4k) sin⁴(2T))]
/// ```
pub fn trace_mf(t: f64, lambda: f64, k: f64) -> f64 {
    let c2 = (2.0 * lambda).cosh();
    0.125
        * (-3.0
            + 13.0 * (4.0 * lambda).cosh()
            + 2.0 * c2 * c2
                * (4.0 * (4.0 * t).cos() - (8.0 * t).cos()
                    + 8.0 * (4.0 * k).cos() * (2.0 * t).sin().powi(4)))
}

/// Critical measurement strength of the Floquet circuit at gate time `T`:
/// the root `λ ≥ 0` of `-2[-4cos(4T) + cos(8T)] cosh²(2λ) + 5cosh(4λ) = 11`,
/// found by bisection (the left side is monotone in λ). Returns `None` on the
/// critical line `T = π/4 (mod π/2)` where no root exists.
pub fn floquet_boundary_lambda(t: f64) -> Option<f64> {
    let a = -4.0 * (4.0 * t).cos() + (8.0 * t).cos();
    let g = |lambda: f64| {
        -2.0 * a * (2.0 * lambda).cosh().powi(2) + 5.0 * (4.0 * lambda).cosh() - 11.0
    };
    // g(λ) = (10 - 2A) cosh²(2λ) - 16; no root when 10 - 2A ≤ 0 (T = π/4).
    if 10.0 - 2.0 * a <= 1e-12 {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 5.0f64);
    if g(lo) > 0.0 {
        return Some(0.0);
    }
    if g(hi) < 0.0 {
        return None; // beyond λ = 5 cosh terms dwarf everything; treat as no root
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Momenta at which the `U_0`/`U_1` blocks are traceless, making the trace
/// map exactly 6-periodic on `(0, 0, z)` orbits. The half-trace is
/// `cosh2λ (cos²k + sin²k cos4T)` for both blocks and any λ, so the roots are
/// `sin²k = 1/(1 - cos4T) = 1/(2 sin²2T)` in `(0, π)`. Nonempty exactly for
/// `T ∈ [π/8, 3π/8] (mod π/2)`.
pub fn period6_momenta(t: f64) -> Vec<f64> {
    let c = (4.0 * t).cos();
    if c > 0.0 {
        return Vec::new();
    }
    let s2 = 1.0 / (1.0 - c);
    if s2 > 1.0 {
        return Vec::new();
    }
    let k = s2.sqrt().asin();
    if (k - (std::f64::consts::PI - k)).abs() < 1e-12 {
        vec![k] // s = 1: the two roots coincide at k = π/2
    } else {
        vec![k, std::f64::consts::PI - k]
    }
}

/// True iff some grid momentum has Fibonacci invariant `V_k ∈ (-1, 0)`
/// (bounded quasiperiodic orbits → (sub-)volume law). Coincides with the
/// Floquet volume region.
pub fn quasi_boundary_check(t: f64, lambda: f64, grid: &MomentumGrid) -> bool {
    grid.momenta().iter().any(|&k| {
        let v = invariant_vk(t, lambda, k);
        v > -1.0 && v < 0.0
    })
}

/// Subvolume-phase boundary of the dipole-randomized circuit:
/// `λ* = ½ arcsinh[cos²(2T)/sin(2T)]`.
pub fn arcsinh_boundary(t: f64) -> Result<f64> {
    let s = (2.0 * t).sin();
    if s.abs() < 1e-12 {
        return Err(Error::Domain(format!("sin(2T) = 0 at T = {t}")));
    }
    Ok(0.5 * ((2.0 * t).cos().powi(2) / s).asinh())
}

/// Report of the SU(2) simultaneous-similarity check for a letter pair
/// `(M_+, M_-)`.
#[derive(Clone, Debug)]
pub struct Su2Report {
    /// Some Pauli `σ ∈ {I, σx, σy, σz}` satisfies `M_- = ±σ M_+^* σ`.
    pub conjugation_ok: bool,
    /// `Im Tr(M_+) = Im Tr(M_-) = 0` (within 1e-8).
    pub traces_real: bool,
    /// Two-sided combined-trace condition
    /// `Tr(M_+²) ≤ Tr(M_+ M_-) ≤ 2`. (The upper bound alone is the published
    /// criterion; the lower bound — automatic for the published gate sets but
    /// not for arbitrary conjugate pairs — is also required for the
    /// rebalancing matrix to exist.)
    pub combined_trace_ok: bool,
    /// The similarity `S` with `S⁻¹ M_± S ∈ SU(2)`; present iff all three
    /// conditions hold and `M_+` is diagonalizable.
    pub s: Option<Mat2C>,
    /// `max over {M_+, M_-} of ‖(S⁻¹MS)†(S⁻¹MS) - I‖_F` (NaN when `s` is None).
    pub unitarity_defect: f64,
}

const PAULIS: [Mat2C; 4] = [
    Mat2C {
        a: C64 { re: 1.0, im: 0.0 },
        b: C64 { re: 0.0, im: 0.0 },
        c: C64 { re: 0.0, im: 0.0 },
        d: C64 { re: 1.0, im: 0.0 },
    },
    Mat2C {
        a: C64 { re: 0.0, im: 0.0 },
        b: C64 { re: 1.0, im: 0.0 },
        c: C64 { re: 1.0, im: 0.0 },
        d: C64 { re: 0.0, im: 0.0 },
    },
    Mat2C {
        a: C64 { re: 0.0, im: 0.0 },
        b: C64 { re: 0.0, im: -1.0 },
        c: C64 { re: 0.0, im: 1.0 },
        d: C64 { re: 0.0, im: 0.0 },
    },
    Mat2C {
        a: C64 { re: 1.0, im: 0.0 },
        b: C64 { re: 0.0, im: 0.0 },
        c: C64 { re: 0.0, im: 0.0 },
        d: C64 { re: -1.0, im: 0.0 },
    },
];

/// Unit-determinant eigenvector matrix `P` of an elliptic `M` with
/// `M P = P diag(e^{iθ}, e^{-iθ})`.
fn eigenvector_matrix(m: &Mat2C) -> Result<(Mat2C, C64)> {
    let x = m.trace() / 2.0;
    let disc = x * x - 1.0;
    if disc.norm() < 1e-12 {
        return Err(Error::DegenerateEigenvectors);
    }
    let root = disc.sqrt();
    let mu_plus = x + root;
    let mu_minus = x - root;
    // Eigenvector of eigenvalue μ: (b, μ - a) or (μ - d, c), whichever is
    // better conditioned.
    let col = |mu: C64| -> (C64, C64) {
        let v1 = (m.b, mu - m.a);
        let v2 = (mu - m.d, m.c);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        if n1 >= n2 {
            v1
        } else {
            v2
        }
    };
    let (p11, p21) = col(mu_plus);
    let (p12, p22) = col(mu_minus);
    let p = Mat2C::new(p11, p12, p21, p22);
    let p = crate::mobius::normalize_to_sl2(&p).map_err(|_| Error::DegenerateEigenvectors)?;
    Ok((p, mu_plus))
}

/// Check the simultaneous-SU(2) conditions for a conjugate letter pair and,
/// when they hold, construct the similarity `S = P W⁻¹`:
/// `P` diagonalizes `M_+` to `Λ = diag(e^{iθ}, e^{-iθ})`, and the diagonal
/// rebalancing `W = diag(w, 1/w)`, `w⁴ = -B₂₁^*/B₁₂` with `B = P⁻¹M_-P`,
/// makes `W B W⁻¹` unitary. Both matrices must have det 1.
pub fn su2_similarity(mplus: &Mat2C, mminus: &Mat2C) -> Su2Report {
    let conj_tol = 1e-8;
    let conjugation_ok = PAULIS.iter().any(|sigma| {
        let c = *sigma * mplus.conj() * *sigma;
        c.distance(mminus).min(c.scale(C64::new(-1.0, 0.0)).distance(mminus)) < conj_tol
    });
    let im = mplus.trace().im.abs().max(mminus.trace().im.abs());
    let traces_real = im < 1e-8;
    let t_combined = (*mplus * *mminus).trace();
    let t_plus_sq = (*mplus * *mplus).trace();
    let combined_trace_ok = traces_real
        && t_combined.im.abs() < 1e-8
        && t_combined.re <= 2.0 + 1e-12
        && t_plus_sq.re <= t_combined.re + 1e-12;

    let mut report = Su2Report {
        conjugation_ok,
        traces_real,
        combined_trace_ok,
        s: None,
        unitarity_defect: f64::NAN,
    };
    if !(conjugation_ok && traces_real && combined_trace_ok) {
        return report;
    }
    let Ok((p, _)) = eigenvector_matrix(mplus) else {
        return report;
    };
    let b = p.inv_sl2() * *mminus * p;
    if b.b.norm() < 1e-14 {
        // M_- diagonal in the M_+ eigenbasis: P alone works.
        report.s = Some(p);
    } else {
        let ratio = -b.c.conj() / b.b;
        // Conditions guarantee ratio ∈ ℝ₊ up to roundoff.
        if ratio.re <= 0.0 || ratio.im.abs() > 1e-6 * ratio.norm().max(1.0) {
            return report;
        }
        let w = ratio.re.powf(0.25);
        let winv = Mat2C::from_reals(1.0 / w, 0.0, 0.0, w);
        report.s = Some(p * winv);
    }
    if let Some(s) = report.s {
        let sinv = s.inv_sl2();
        let defect = [mplus, mminus]
            .iter()
            .map(|m| {
                let u = sinv * **m * s;
                (u.dagger() * u).distance(&Mat2C::identity())
            })
            .fold(0.0, f64::max);
        report.unitarity_defect = defect;
    }
    report
}

/// Residual of the combined-trace identity
/// `Tr(M_+M_-) = 2 + 16 sin²θ Re(a c̄) Re(b d̄)`, where `e^{±iθ}` are the
/// eigenvalues of `M_+` and `[[a, b], [c, d]] = P` is its unit-determinant
/// eigenvector matrix. The identity holds for block pairs related by the
/// conjugation `M_- = σ_z M̄_+ σ_z` (the `U_0`/`U_1` and dipole pairs):
/// expanding `M_+ = P diag(e^{iθ}, e^{-iθ}) P⁻¹` gives
/// `Tr(M_+ σ_z M̄_+ σ_z) = 2 + 16 sin²θ Re(a c̄) Re(b d̄)`, which is
/// independent of the residual column-phase freedom in `P`.
pub fn trace_identity_check(mplus: &Mat2C, mminus: &Mat2C) -> Result<f64> {
    let tr = mplus.trace();
    if tr.im.abs() > 1e-8 {
        return Err(Error::NonRealTrace(tr.im.abs()));
    }
    let x = tr.re / 2.0;
    if x.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "M_+ is not elliptic (|Tr|/2 = {} > 1), eigenvalues not on the unit circle",
            x.abs()
        )));
    }
    let (p, _) = eigenvector_matrix(mplus)?;
    let sin_sq = 1.0 - x * x;
    let delta = (p.a * p.c.conj()).re * (p.b * p.d.conj()).re;
    let lhs = (*mplus * *mminus).trace();
    Ok((lhs - C64::new(2.0 + 16.0 * sin_sq * delta, 0.0)).norm())
}

/// A `(T, λ)` heatmap of the minimum per-momentum Lyapunov exponent.
#[derive(Clone, Debug)]
pub struct PhaseDiagramGrid {
    pub t_values: Vec<f64>,
    pub lambda_values: Vec<f64>,
    /// Row-major: `cells[i * lambda_values.len() + j]` is the cell at
    /// `(t_values[i], lambda_values[j])`.
    pub cells: Vec<f64>,
}

/// Evaluate the min-Lyapunov heatmap over a `(T, λ)` grid. Cells are computed
/// in parallel but emitted in deterministic row-major order.
pub fn phase_diagram(
    gate_set: GateSet,
    kind: &SequenceKind,
    t_values: &[f64],
    lambda_values: &[f64],
    grid: &MomentumGrid,
    n: usize,
) -> Result<PhaseDiagramGrid> {
    let cells: Result<Vec<f64>> = t_values
        .par_iter()
        .flat_map(|&t| lambda_values.par_iter().map(move |&lambda| (t, lambda)))
        .map(|(t, lambda)| min_lyapunov_over_k(t, lambda, grid, gate_set, kind, n))
        .collect();
    Ok(PhaseDiagramGrid {
        t_values: t_values.to_vec(),
        lambda_values: lambda_values.to_vec(),
        cells: cells?,
    })
}
