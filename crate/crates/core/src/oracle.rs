//! Exact statevector simulator of the spin chain (L ≤ 12), used as the ground
//! truth for the Gaussian pipeline.
//!
//! Gates are `exp(-it Σ_j X_j)`, `exp(-it Σ_j Y_{j+1}Y_j)`,
//! `exp(-it Σ_j Z_{j+1}Z_j)` on a periodic ring, plus the postselected weak
//! measurement `exp(λ Σ_j X_j)` followed by renormalization. Every term of a
//! given sum commutes with the others, so the exponentials factor into
//! per-site / per-bond closed forms.

use crate::entanglement::h1;
use crate::{C64, Error, Result};
use nalgebra::DMatrix;

/// Elementary gate of the exact simulator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    /// `exp(-it Σ_j X_j)`
    X(f64),
    /// `exp(-it Σ_j Y_{j+1} Y_j)` (periodic)
    YY(f64),
    /// `exp(-it Σ_j Z_{j+1} Z_j)` (periodic)
    ZZ(f64),
    /// `exp(λ Σ_j X_j)` + renormalization (postselected measurement)
    Measure(f64),
}

/// Exact many-body state of `L ≤ 12` spins. Site `j` is bit `j` of the
/// amplitude index (site 0 least significant).
#[derive(Clone, Debug)]
pub struct StateVector {
    amps: Vec<C64>,
    l: usize,
}

const L_MAX: usize = 12;

impl StateVector {
    /// The all-`|+x⟩` product state (pairing amplitude `f(k) = 0`).
    pub fn plus_state(l: usize) -> Result<Self> {
        if l > L_MAX {
            return Err(Error::SizeLimit(l));
        }
        if l == 0 || l % 2 != 0 {
            return Err(Error::Domain(format!("chain length must be even and > 0, got {l}")));
        }
        let dim = 1usize << l;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(StateVector { amps: vec![a; dim], l })
    }

    pub fn chain_length(&self) -> usize {
        self.l
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amps {
            *a /= n;
        }
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a single-site 2×2 operator `[[m00, m01], [m10, m11]]` (acting on
    /// the computational basis |0⟩, |1⟩) at `site`.
    fn apply_single(&mut self, site: usize, m: [[C64; 2]; 2]) {
        let bit = 1usize << site;
        for s in 0..self.amps.len() {
            if s & bit == 0 {
                let a0 = self.amps[s];
                let a1 = self.amps[s | bit];
                self.amps[s] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[s | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Apply `exp(-it Y_a Y_b)` on the bond `(a, b)`:
    /// `cos t · I - i sin t · Y⊗Y`, with `Y⊗Y` mapping
    /// `|00⟩ ↦ -|11⟩`, `|01⟩ ↦ |10⟩`, `|10⟩ ↦ |01⟩`, `|11⟩ ↦ -|00⟩`.
    fn apply_yy_bond(&mut self, a: usize, b: usize, t: f64) {
        let (c, s) = (t.cos(), t.sin());
        let ic = C64::new(c, 0.0);
        let is = C64::new(0.0, s);
        let (ba, bb) = (1usize << a, 1usize << b);
        for idx in 0..self.amps.len() {
            if idx & ba == 0 && idx & bb == 0 {
                let s00 = idx;
                let s01 = idx | bb;
                let s10 = idx | ba;
                let s11 = idx | ba | bb;
                let (a00, a01, a10, a11) =
                    (self.amps[s00], self.amps[s01], self.amps[s10], self.amps[s11]);
                self.amps[s00] = ic * a00 + is * a11;
                self.amps[s11] = ic * a11 + is * a00;
                self.amps[s01] = ic * a01 - is * a10;
                self.amps[s10] = ic * a10 - is * a01;
            }
        }
    }

    /// Apply one translation-invariant gate exactly.
    pub fn apply_gate(&mut self, gate: GateKind) {
        match gate {
            GateKind::X(t) => {
                let (c, s) = (t.cos(), t.sin());
                let m = [
                    [C64::new(c, 0.0), C64::new(0.0, -s)],
                    [C64::new(0.0, -s), C64::new(c, 0.0)],
                ];
                for j in 0..self.l {
                    self.apply_single(j, m);
                }
            }
            GateKind::Measure(lambda) => {
                let (ch, sh) = (lambda.cosh(), lambda.sinh());
                let m = [
                    [C64::new(ch, 0.0), C64::new(sh, 0.0)],
                    [C64::new(sh, 0.0), C64::new(ch, 0.0)],
                ];
                for j in 0..self.l {
                    self.apply_single(j, m);
                }
                self.normalize();
            }
            GateKind::YY(t) => {
                for j in 0..self.l {
                    self.apply_yy_bond(j, (j + 1) % self.l, t);
                }
            }
            GateKind::ZZ(t) => {
                // Diagonal: phase e^{-it z_a z_b} per bond, z = ±1.
                for s in 0..self.amps.len() {
                    let mut phase = 0.0;
                    for j in 0..self.l {
                        let za = if s >> j & 1 == 0 { 1.0 } else { -1.0 };
                        let zb = if s >> ((j + 1) % self.l) & 1 == 0 { 1.0 } else { -1.0 };
                        phase -= t * za * zb;
                    }
                    self.amps[s] *= C64::from_polar(1.0, phase);
                }
            }
        }
    }

    /// Apply the three elementary gates of a circuit block in physical time
    /// order.
    pub fn apply_block(&mut self, block: crate::gates::BlockKind, t: f64, lambda: f64) {
        use crate::gates::BlockKind::*;
        use std::f64::consts::FRAC_PI_4;
        match block {
            U0 => {
                self.apply_gate(GateKind::YY(t));
                self.apply_gate(GateKind::Measure(lambda));
                self.apply_gate(GateKind::ZZ(-t));
            }
            U1 => {
                self.apply_gate(GateKind::YY(-t));
                self.apply_gate(GateKind::Measure(lambda));
                self.apply_gate(GateKind::ZZ(t));
            }
            UplusSign => self.apply_block(U0, t, lambda),
            UminusSign => self.apply_block(U0, t, -lambda),
            UplusPulse => {
                self.apply_gate(GateKind::ZZ(FRAC_PI_4 - t));
                self.apply_gate(GateKind::X(FRAC_PI_4 - t));
                self.apply_gate(GateKind::Measure(lambda));
            }
            UminusPulse => {
                self.apply_gate(GateKind::ZZ(FRAC_PI_4 + t));
                self.apply_gate(GateKind::X(FRAC_PI_4 + t));
                self.apply_gate(GateKind::Measure(lambda));
            }
            DipolePlus => {
                self.apply_block(UminusPulse, t, lambda);
                self.apply_block(UplusPulse, t, lambda);
            }
            DipoleMinus => {
                self.apply_block(UplusPulse, t, lambda);
                self.apply_block(UminusPulse, t, lambda);
            }
        }
    }

    /// Exact von Neumann entropy (nats) of the reduced state of sites
    /// `start … start+ell-1` (indices mod L).
    pub fn reduced_entropy_at(&self, start: usize, ell: usize) -> Result<f64> {
        if ell == 0 || ell >= self.l {
            return Err(Error::Dimension { ell, l: self.l });
        }
        let da = 1usize << ell;
        let db = 1usize << (self.l - ell);
        // Column a = subsystem bits, row b = environment bits.
        let mut m = DMatrix::<C64>::zeros(da, db);
        for s in 0..self.amps.len() {
            let mut a = 0usize;
            let mut b = 0usize;
            for j in 0..self.l {
                let bit = s >> ((start + j) % self.l) & 1;
                if j < ell {
                    a |= bit << j;
                } else {
                    b |= bit << (j - ell);
                }
            }
            m[(a, b)] = self.amps[s];
        }
        let svd = m.svd(false, false);
        let s: f64 = svd
            .singular_values
            .iter()
            .map(|&sv| {
                let p = sv * sv;
                if p > 1e-300 {
                    -p * p.ln()
                } else {
                    0.0
                }
            })
            .sum();
        Ok(s)
    }

    /// Entropy of the block starting at site 0.
    pub fn reduced_entropy(&self, ell: usize) -> Result<f64> {
        self.reduced_entropy_at(0, ell)
    }

    /// Apply the Majorana operator `a_μ` (Jordan–Wigner):
    /// `a_{2j} = (∏_{i<j} X_i) Z_j`, `a_{2j+1} = (∏_{i<j} X_i) Y_j`,
    /// with `μ = 2j + (0 or 1)` and site indexing from 0.
    pub fn apply_majorana(&self, mu: usize) -> StateVector {
        let j = mu / 2;
        let odd = mu % 2 == 1;
        let mut out = self.clone();
        // X-string on sites 0..j: flips those bits.
        let x = [
            [C64::ZERO, C64::new(1.0, 0.0)],
            [C64::new(1.0, 0.0), C64::ZERO],
        ];
        for i in 0..j {
            out.apply_single(i, x);
        }
        if odd {
            let y = [
                [C64::ZERO, C64::new(0.0, -1.0)],
                [C64::new(0.0, 1.0), C64::ZERO],
            ];
            out.apply_single(j, y);
        } else {
            let z = [
                [C64::new(1.0, 0.0), C64::ZERO],
                [C64::ZERO, C64::new(-1.0, 0.0)],
            ];
            out.apply_single(j, z);
        }
        out
    }

    /// Wick-theorem entropy of the first `ell` sites, from the exact Majorana
    /// two-point functions `⟨a_μ a_ν⟩ = δ_{μν} + iΓ_{μν}`. Agreement with
    /// [`Self::reduced_entropy`] certifies that the state is Gaussian.
    pub fn wick_entropy(&self, ell: usize) -> Result<f64> {
        if ell == 0 || ell >= self.l {
            return Err(Error::Dimension { ell, l: self.l });
        }
        let n = 2 * ell;
        let applied: Vec<StateVector> = (0..n).map(|mu| self.apply_majorana(mu)).collect();
        // Γ = (⟨a a⟩ - δ)/i, so iΓ = ⟨a a⟩ - δ, already Hermitian.
        let mut h = DMatrix::<C64>::zeros(n, n);
        for mu in 0..n {
            for nu in 0..n {
                let two_pt = applied[mu].inner(&applied[nu]);
                let delta = if mu == nu { 1.0 } else { 0.0 };
                h[(mu, nu)] = two_pt - delta;
            }
        }
        let eig = h.try_symmetric_eigen(1e-13, 10_000).ok_or(Error::EigSolverFailure)?;
        Ok(0.5 * eig.eigenvalues.iter().map(|&nu| h1(nu.abs().clamp(0.0, 1.0))).sum::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{entropy, correlation_matrix, evolve_vacuum, fourier_coeffs};
    use crate::gates::{BlockKind, GateSet};
    use crate::mobius::MomentumGrid;
    use crate::sequences::bernoulli_word;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn plus_state_is_x_eigenstate() {
        let mut psi = StateVector::plus_state(4).unwrap();
        let before = psi.clone();
        psi.apply_gate(GateKind::X(0.37));
        // Global phase only: overlap magnitude 1, entropy 0.
        assert_abs_diff_eq!(psi.inner(&before).norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.reduced_entropy(2).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn unitarity_and_normalization() {
        let mut psi = StateVector::plus_state(6).unwrap();
        for gate in [GateKind::YY(0.4), GateKind::ZZ(-0.9), GateKind::X(1.2)] {
            psi.apply_gate(gate);
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
        }
        psi.apply_gate(GateKind::Measure(0.8));
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zeno_limit_of_strong_measurement() {
        let mut psi = StateVector::plus_state(4).unwrap();
        psi.apply_gate(GateKind::ZZ(0.7));
        assert!(psi.reduced_entropy(2).unwrap() > 1e-3);
        psi.apply_gate(GateKind::Measure(20.0));
        assert!(psi.reduced_entropy(2).unwrap() < 1e-8, "Zeno limit projects onto all-|+⟩");
    }

    #[test]
    fn translation_invariance_of_entropy() {
        let mut psi = StateVector::plus_state(8).unwrap();
        for block in [BlockKind::U0, BlockKind::U1, BlockKind::U0] {
            psi.apply_block(block, 0.61, 0.23);
        }
        let s0 = psi.reduced_entropy_at(0, 3).unwrap();
        for start in 1..8 {
            assert_abs_diff_eq!(psi.reduced_entropy_at(start, 3).unwrap(), s0, epsilon = 1e-9);
        }
    }

    #[test]
    fn size_limit_enforced() {
        assert!(matches!(StateVector::plus_state(14), Err(Error::SizeLimit(14))));
        assert!(StateVector::plus_state(5).is_err());
    }

    #[test]
    fn state_stays_gaussian() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let t = rng.random_range(0.0..PI / 2.0);
            let lambda = rng.random_range(0.0..0.8);
            let mut psi = StateVector::plus_state(8).unwrap();
            let word = bernoulli_word(6, rng.random());
            for letter in word.time_ordered() {
                let block = if letter == crate::sequences::Letter::A {
                    BlockKind::U0
                } else {
                    BlockKind::U1
                };
                psi.apply_block(block, t, lambda);
            }
            for ell in 1..=4 {
                let exact = psi.reduced_entropy(ell).unwrap();
                let wick = psi.wick_entropy(ell).unwrap();
                assert!(
                    (exact - wick).abs() < 1e-6,
                    "Wick mismatch at ℓ={ell}: {exact} vs {wick}"
                );
            }
        }
    }

    #[test]
    fn gaussian_pipeline_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let grid = MomentumGrid::new(8).unwrap();
        for _ in 0..10 {
            let t = rng.random_range(0.0..PI / 2.0);
            let lambda = rng.random_range(0.0..1.0);
            let word = bernoulli_word(rng.random_range(1..=12), rng.random());

            let mut psi = StateVector::plus_state(8).unwrap();
            for letter in word.time_ordered() {
                let block = if letter == crate::sequences::Letter::A {
                    BlockKind::U0
                } else {
                    BlockKind::U1
                };
                psi.apply_block(block, t, lambda);
            }

            let modes = evolve_vacuum(&grid, GateSet::Eq7, &word, t, lambda).unwrap();
            let coeffs = fourier_coeffs(&modes);
            for ell in 1..=4 {
                let s_exact = psi.reduced_entropy(ell).unwrap();
                let s_gauss = entropy(&correlation_matrix(&coeffs, ell).unwrap()).unwrap();
                assert!(
                    (s_exact - s_gauss).abs() < 1e-8,
                    "oracle mismatch at ℓ={ell}, T={t}, λ={lambda}: {s_exact} vs {s_gauss}"
                );
            }
        }
    }
}
