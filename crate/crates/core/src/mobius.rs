//! 2×2 complex matrix kernel: Möbius action on amplitudes, SL(2,ℂ)
//! normalization, and orbit classification.

use crate::{C64, Error, Result};

/// A 2×2 complex matrix `[[a, b], [c, d]]` acting on pairing amplitudes as the
/// Möbius transformation `f ↦ (a f + b) / (c f + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2C {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

/// Fixed-point class of a Möbius transformation, determined by Tr².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobiusClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

/// A point on the Riemann sphere: the value of a pairing amplitude `f(k)`.
/// The point at infinity is a legal amplitude (fully paired mode), not an error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Amplitude {
    Finite(C64),
    Infinity,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude::Finite(C64::new(0.0, 0.0));

    pub fn finite(re: f64, im: f64) -> Self {
        Amplitude::Finite(C64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Amplitude::Infinity)
    }
}

impl From<C64> for Amplitude {
    fn from(z: C64) -> Self {
        Amplitude::Finite(z)
    }
}

impl Mat2C {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2C { a, b, c, d }
    }

    pub fn from_reals(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2C::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2C::from_reals(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2C::new(a, C64::ZERO, C64::ZERO, d)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Mat2C::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Mat2C::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// Inverse of a unit-determinant matrix: `[[d, -b], [-c, a]]`.
    pub fn inv_sl2(&self) -> Self {
        Mat2C::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2C::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn add(&self, other: &Mat2C) -> Self {
        Mat2C::new(
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Frobenius distance to another matrix.
    pub fn distance(&self, other: &Mat2C) -> f64 {
        self.add(&other.scale(C64::new(-1.0, 0.0))).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Mul for Mat2C {
    type Output = Mat2C;

    fn mul(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

/// Compose two Möbius transformations. The gate applied **later** in physical
/// time is the **left** matrix factor; every sequence module honors this
/// convention.
pub fn compose(m_later: Mat2C, m_earlier: Mat2C) -> Mat2C {
    m_later * m_earlier
}

/// Apply the Möbius transformation `f ↦ (a f + b)/(c f + d)`.
///
/// A vanishing denominator maps to the point at infinity; infinity maps to
/// `a/c` (or stays at infinity when `c = 0`). For `|f| > 1` the equivalent
/// form `(a + b/f)/(c + d/f)` is used so huge amplitudes lose no precision.
pub fn mobius_apply(m: &Mat2C, f: Amplitude) -> Amplitude {
    match f {
        Amplitude::Infinity => {
            if m.c.norm() == 0.0 {
                Amplitude::Infinity
            } else {
                Amplitude::Finite(m.a / m.c)
            }
        }
        Amplitude::Finite(z) => {
            let (num, den) = if z.norm_sqr() > 1.0 {
                let w = z.inv();
                (m.a + m.b * w, m.c + m.d * w)
            } else {
                (m.a * z + m.b, m.c * z + m.d)
            };
            if den.norm() == 0.0 {
                Amplitude::Infinity
            } else if z.norm_sqr() > 1.0 && num.norm() == 0.0 {
                // (a f + b)/(c f + d) with f huge and a + b/f = 0 exactly.
                Amplitude::Finite(C64::ZERO)
            } else {
                let r = num / den;
                if r.is_finite() {
                    Amplitude::Finite(r)
                } else {
                    Amplitude::Infinity
                }
            }
        }
    }
}

/// Rescale to unit determinant using the principal branch of `√det`.
pub fn normalize_to_sl2(m: &Mat2C) -> Result<Mat2C> {
    let det = m.det();
    let abs = det.norm();
    if abs <= 1e-14 {
        return Err(Error::SingularMatrix(abs));
    }
    let root = det.sqrt(); // principal branch
    Ok(m.scale(root.inv()))
}

/// Classify a unit-determinant Möbius transformation by its squared trace.
///
/// `Tr² = 0` is classified elliptic: traceless SL(2,ℂ) matrices square to
/// `-I`, giving bounded (zero-Lyapunov) orbits, which is the elliptic
/// phenomenology even though some conventions call non-positive `Tr²`
/// loxodromic.
pub fn classify(m: &Mat2C) -> MobiusClass {
    const TOL: f64 = 1e-10;
    let t2 = m.trace() * m.trace();
    if t2.im.abs() > TOL {
        return MobiusClass::Loxodromic;
    }
    let x = t2.re;
    if x.abs() <= TOL {
        MobiusClass::Elliptic
    } else if x < 0.0 {
        MobiusClass::Loxodromic
    } else if (x - 4.0).abs() <= TOL {
        MobiusClass::Parabolic
    } else if x < 4.0 {
        MobiusClass::Elliptic
    } else {
        MobiusClass::Hyperbolic
    }
}

/// The antiperiodic positive-momentum grid `k_j = (2π/L)(j + 1/2)`,
/// `j = 0 … L/2 - 1`, for a chain of `L` sites. `k = 0` and `k = π` never
/// occur.
#[derive(Clone, Debug)]
pub struct MomentumGrid {
    l: usize,
    k: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 || l % 2 != 0 {
            return Err(Error::Domain(format!(
                "chain length must be even and >= 2, got {l}"
            )));
        }
        let k = (0..l / 2)
            .map(|j| 2.0 * std::f64::consts::PI / l as f64 * (j as f64 + 0.5))
            .collect();
        Ok(MomentumGrid { l, k })
    }

    /// Chain length in sites.
    pub fn chain_length(&self) -> usize {
        self.l
    }

    /// Positive momenta, strictly inside `(0, π)`.
    pub fn momenta(&self) -> &[f64] {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn amplitude_value(a: Amplitude) -> C64 {
        match a {
            Amplitude::Finite(z) => z,
            Amplitude::Infinity => panic!("expected finite amplitude"),
        }
    }

    #[test]
    fn apply_phase_rotation() {
        // diag(e^{iπ/2}, e^{-iπ/2}) acts as f ↦ e^{iπ} f = -f.
        let m = Mat2C::diag(C64::from_polar(1.0, PI / 2.0), C64::from_polar(1.0, -PI / 2.0));
        let f = mobius_apply(&m, Amplitude::finite(0.5, 0.0));
        assert_abs_diff_eq!(amplitude_value(f).re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(amplitude_value(f).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_identity_and_infinity() {
        let id = Mat2C::identity();
        let z = c(0.3, -0.7);
        assert_eq!(mobius_apply(&id, z.into()), Amplitude::Finite(z));

        // [[1,1],[0,1]] fixes infinity (c = 0).
        let shear = Mat2C::from_reals(1.0, 1.0, 0.0, 1.0);
        assert!(mobius_apply(&shear, Amplitude::Infinity).is_infinite());

        // Denominator zero lands on infinity: [[0,1],[1,-z]] at f = z.
        let m = Mat2C::new(C64::ZERO, c(1.0, 0.0), c(1.0, 0.0), -z);
        assert!(mobius_apply(&m, z.into()).is_infinite());
    }

    #[test]
    fn normalize_scalar_and_diagonal() {
        let m = normalize_to_sl2(&Mat2C::from_reals(2.0, 0.0, 0.0, 2.0)).unwrap();
        assert!(m.distance(&Mat2C::identity()) < 1e-15);

        let m = normalize_to_sl2(&Mat2C::from_reals(4.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(m.distance(&Mat2C::from_reals(2.0, 0.0, 0.0, 0.5)) < 1e-15);
    }

    #[test]
    fn normalize_rejects_singular() {
        let m = Mat2C::from_reals(1.0, 2.0, 2.0, 4.0);
        assert!(matches!(normalize_to_sl2(&m), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn classify_basic_cases() {
        assert_eq!(classify(&Mat2C::identity()), MobiusClass::Parabolic);
        assert_eq!(
            classify(&Mat2C::from_reals(2.0, 0.0, 0.0, 0.5)),
            MobiusClass::Hyperbolic
        );
        let rot = Mat2C::diag(C64::from_polar(1.0, PI / 3.0), C64::from_polar(1.0, -PI / 3.0));
        assert_eq!(classify(&rot), MobiusClass::Elliptic);
        // Traceless: Tr² = 0 is elliptic by convention (M² = -I, bounded orbit).
        let traceless = Mat2C::from_reals(0.0, 1.0, -1.0, 0.0);
        assert_eq!(classify(&traceless), MobiusClass::Elliptic);
        let lox = Mat2C::diag(c(0.0, 2.0), c(0.0, -0.5));
        assert_eq!(classify(&lox), MobiusClass::Loxodromic);
    }

    #[test]
    fn momentum_grid_shape() {
        let g = MomentumGrid::new(8).unwrap();
        assert_eq!(g.len(), 4);
        for (j, &k) in g.momenta().iter().enumerate() {
            assert_abs_diff_eq!(k, 2.0 * PI / 8.0 * (j as f64 + 0.5), epsilon = 1e-15);
            assert!(k > 0.0 && k < PI);
        }
        assert!(MomentumGrid::new(7).is_err());
        assert!(MomentumGrid::new(0).is_err());
    }

    fn arb_c64(lim: f64) -> impl Strategy<Value = C64> {
        (-lim..lim, -lim..lim).prop_map(|(re, im)| C64::new(re, im))
    }

    fn arb_sl2() -> impl Strategy<Value = Mat2C> {
        (arb_c64(2.0), arb_c64(2.0), arb_c64(2.0), arb_c64(2.0))
            .prop_map(|(a, b, c, d)| Mat2C::new(a, b, c, d))
            .prop_filter("non-singular", |m| m.det().norm() > 1e-3)
            .prop_map(|m| normalize_to_sl2(&m).unwrap())
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(m1 in arb_sl2(), m2 in arb_sl2()) {
            let p = compose(m1, m2);
            prop_assert!((p.det() - m1.det() * m2.det()).norm() < 1e-10);
        }

        #[test]
        fn composition_is_homomorphism(m1 in arb_sl2(), m2 in arb_sl2(), f in arb_c64(10.0)) {
            let lhs = mobius_apply(&compose(m1, m2), f.into());
            let rhs = mobius_apply(&m1, mobius_apply(&m2, f.into()));
            match (lhs, rhs) {
                (Amplitude::Finite(x), Amplitude::Finite(y)) => {
                    let scale = 1.0 + x.norm().max(y.norm());
                    prop_assert!((x - y).norm() / scale < 1e-9);
                }
                // One near-infinite, one exactly infinite is possible at the
                // pole; both infinite is consistent.
                (Amplitude::Infinity, Amplitude::Infinity) => {}
                (Amplitude::Finite(x), Amplitude::Infinity)
                | (Amplitude::Infinity, Amplitude::Finite(x)) => {
                    prop_assert!(x.norm() > 1e8);
                }
            }
        }

        #[test]
        fn classify_invariant_under_sign_and_similarity(m in arb_sl2(), s in arb_sl2()) {
            let class = classify(&m);
            prop_assert_eq!(classify(&m.scale(C64::new(-1.0, 0.0))), class);
            let sim = s * m * s.inv_sl2();
            // Skip knife-edge cases where roundoff can cross a class boundary.
            let t2 = m.trace() * m.trace();
            let near_boundary = t2.im.abs() < 1e-6
                || t2.re.abs() < 1e-6
                || (t2.re - 4.0).abs() < 1e-6;
            if !near_boundary && s.frobenius_norm() < 1e2 {
                prop_assert_eq!(classify(&sim), class);
            }
        }
    }
}
