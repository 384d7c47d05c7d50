//! Parameter bundles and two-level state representations shared by every
//! other module. All times are in units of `1/gamma`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{check_domain, Error, Result};

/// Physical parameters of one emitter/detector configuration.
///
/// `pi_g` is not stored; it is always `1 - pi_e`, which makes
/// `pi_e + pi_g == 1.0` hold exactly in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    gamma: f64,
    mu: f64,
    pi_e: f64,
}

impl Params {
    pub fn new(gamma: f64, mu: f64, pi_e: f64) -> Result<Self> {
        check_domain("gamma", gamma, gamma > 0.0, "gamma > 0")?;
        check_domain("mu", mu, mu > 0.0 && mu < 1.0, "0 < mu < 1")?;
        check_domain("pi_e", pi_e, (0.0..1.0).contains(&pi_e), "0 <= pi_e < 1")?;
        Ok(Self { gamma, mu, pi_e })
    }

    /// Unit decay rate.
    pub fn unit(mu: f64, pi_e: f64) -> Result<Self> {
        Self::new(1.0, mu, pi_e)
    }

    pub fn with_pi_e(&self, pi_e: f64) -> Result<Self> {
        Self::new(self.gamma, self.mu, pi_e)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.gamma, mu, self.pi_e)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn pi_e(&self) -> f64 {
        self.pi_e
    }

    pub fn pi_g(&self) -> f64 {
        1.0 - self.pi_e
    }

    pub fn initial_state(&self) -> EmitterState {
        EmitterState::from_populations(self.pi_e).expect("pi_e validated at construction")
    }
}

/// Pure state `a|g> + b|e>` of the emitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterState {
    pub a: Complex64,
    pub b: Complex64,
}

impl EmitterState {
    pub const GROUND: Self = Self {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    pub const EXCITED: Self = Self {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(1.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    /// Real, nonnegative amplitudes with excited population `pi_e`.
    pub fn from_populations(pi_e: f64) -> Result<Self> {
        check_domain("pi_e", pi_e, (0.0..1.0).contains(&pi_e), "0 <= pi_e < 1")?;
        Ok(Self::real((1.0 - pi_e).sqrt(), pi_e.sqrt()))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn excited_population(&self) -> f64 {
        self.b.norm_sqr()
    }

    pub fn ground_population(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// Returns the unit-norm state and the squared norm before normalization.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = norm_sqr.sqrt().recip();
        Ok((Self::new(self.a * inv, self.b * inv), norm_sqr))
    }

    /// Largest imaginary part of either amplitude.
    pub fn max_imaginary(&self) -> f64 {
        self.a.im.abs().max(self.b.im.abs())
    }
}

/// Un-normalized 2x2 density matrix; its trace is the no-jump survival
/// probability. `rho_eg` is the conjugate of `rho_ge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnnormalizedDensity {
    pub rho_gg: f64,
    pub rho_ee: f64,
    pub rho_ge: Complex64,
}

impl UnnormalizedDensity {
    pub fn trace(&self) -> f64 {
        self.rho_gg + self.rho_ee
    }

    pub fn rho_eg(&self) -> Complex64 {
        self.rho_ge.conj()
    }

    /// `rho_gg * rho_ee - |rho_ge|^2`: nonnegative for a valid density, zero
    /// for a pure state.
    pub fn determinant(&self) -> f64 {
        self.rho_gg * self.rho_ee - self.rho_ge.norm_sqr()
    }

    /// Excited population after normalizing by the trace.
    pub fn conditional_excited(&self) -> f64 {
        self.rho_ee / self.trace()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detector {
    A,
    B,
}

impl Detector {
    pub fn as_char(self) -> char {
        match self {
            Detector::A => 'A',
            Detector::B => 'B',
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// How the emitted field is detected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectionScheme {
    /// Direct photon counting; equivalent to a local oscillator with `alpha = 0`.
    Counting,
    /// Interference with a constant coherent local oscillator of amplitude `alpha`
    /// (in units of `sqrt(gamma)` multiplied out, i.e. an absolute amplitude).
    FixedLo { alpha: Complex64 },
    /// Local oscillator re-tuned every step so that a click in detector A
    /// projects onto the excited state.
    AdaptiveLo,
}

impl DetectionScheme {
    pub fn fixed_real(alpha: f64) -> Self {
        Self::FixedLo {
            alpha: Complex64::new(alpha, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DetectionScheme::Counting => "counting",
            DetectionScheme::FixedLo { .. } => "fixed-lo",
            DetectionScheme::AdaptiveLo => "adaptive",
        }
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn from_populations_examples() {
        let s = EmitterState::from_populations(0.0).unwrap();
        assert_eq!(s, EmitterState::real(1.0, 0.0));

        let s = EmitterState::from_populations(0.5).unwrap();
        assert_abs_diff_eq!(s.a.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.b.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);

        let s = EmitterState::from_populations(0.36).unwrap();
        assert_abs_diff_eq!(s.a.re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(s.b.re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn from_populations_rejects_out_of_range() {
        for bad in [-0.1, 1.0, 1.5, f64::NAN] {
            assert!(matches!(
                EmitterState::from_populations(bad),
                Err(Error::Domain { name: "pi_e", .. })
            ));
        }
        assert!(EmitterState::from_populations(1.0 - 1e-9).is_ok());
    }

    #[test]
    fn excited_population_examples() {
        assert_eq!(EmitterState::real(1.0, 0.0).excited_population(), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(EmitterState::real(h, h).excited_population(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(EmitterState::real(0.8, 0.6).excited_population(), 0.36, epsilon = 1e-15);
    }

    #[test]
    fn normalize_examples() {
        let (s, n) = EmitterState::real(2.0, 0.0).normalize().unwrap();
        assert_eq!(s, EmitterState::real(1.0, 0.0));
        assert_eq!(n, 4.0);

        for c in [1e-3, 0.5, 3.0, 1e4] {
            let (s, n) = EmitterState::real(0.6 * c, 0.8 * c).normalize().unwrap();
            assert_abs_diff_eq!(s.a.re, 0.6, epsilon = 1e-15);
            assert_abs_diff_eq!(s.b.re, 0.8, epsilon = 1e-15);
            assert_abs_diff_eq!(n, c * c, epsilon = 1e-12 * c * c);
        }

        assert_eq!(EmitterState::real(0.0, 0.0).normalize(), Err(Error::ZeroNorm));
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0.0, 0.5, 0.5).is_err());
        assert!(Params::new(1.0, 0.0, 0.5).is_err());
        assert!(Params::new(1.0, 1.0, 0.5).is_err());
        assert!(Params::new(1.0, 0.5, 1.0).is_err());
        assert!(Params::new(1.0, 0.5, -1e-3).is_err());
        let p = Params::new(2.0, 0.3, 0.25).unwrap();
        assert_eq!(p.pi_g(), 0.75);
    }

    #[test]
    fn density_helpers() {
        let rho = UnnormalizedDensity {
            rho_gg: 0.3,
            rho_ee: 0.2,
            rho_ge: Complex64::new(0.0, 0.1),
        };
        assert_abs_diff_eq!(rho.trace(), 0.5);
        assert_eq!(rho.rho_eg(), Complex64::new(0.0, -0.1));
        assert_abs_diff_eq!(rho.determinant(), 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.conditional_excited(), 0.4, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn populations_round_trip(pi_e in 0.0f64..1.0) {
            let s = EmitterState::from_populations(pi_e).unwrap();
            prop_assert!((s.excited_population() - pi_e).abs() < 1e-15);
        }

        #[test]
        fn pi_e_plus_pi_g_is_exactly_one(pi_e in 0.0f64..1.0) {
            let p = Params::unit(0.5, pi_e).unwrap();
            prop_assert_eq!(p.pi_e() + p.pi_g(), 1.0);
        }

        #[test]
        fn normalize_is_idempotent(
            ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0,
        ) {
            let raw = EmitterState::new(Complex64::new(ar, ai), Complex64::new(br, bi));
            prop_assume!(raw.norm_sqr() > 1e-6);
            let (once, _) = raw.normalize().unwrap();
            prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
            let (twice, n) = once.normalize().unwrap();
            prop_assert!((n - 1.0).abs() < 1e-12);
            prop_assert!((twice.a - once.a).norm() < 1e-15);
            prop_assert!((twice.b - once.b).norm() < 1e-15);
        }
    }
}
