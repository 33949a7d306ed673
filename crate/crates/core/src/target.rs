use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics;

/// Which rotationally symmetric target the profile function `g` describes.
#[derive(Clone, Debug, PartialEq)]
pub enum TargetKind {
    /// Round 2-sphere, `g(rho) = sin(rho)`, `C* = pi`.
    Sphere,
    /// The 4d equivariant Yang-Mills reduction in its scalar variable:
    /// `g(rho) = (1 - rho^2) / 2`, `C* = 1`, stationary orbit runs `-1 -> 1`.
    YangMills,
    /// User-supplied profile sampled on `[0, C*]`, extended oddly and
    /// `2 C*`-periodically.
    Custom(Arc<CustomProfile>),
}

/// Sampled custom profile `g` on a uniform table over `[0, C*]`.
#[derive(Debug, PartialEq)]
pub struct CustomProfile {
    pub name: String,
    pub c_star: f64,
    /// `g` sampled at `rho_i = i * c_star / (len - 1)`.
    pub samples: Vec<f64>,
    slopes: Vec<f64>,
}

/// Profile function of the target surface of revolution: `g`, its derivative,
/// the force profile `f = g g'`, and the half-period `C*` (the smallest
/// positive zero of `g`).
#[derive(Clone, Debug, PartialEq)]
pub struct TargetGeometry {
    kind: TargetKind,
}

impl TargetGeometry {
    pub fn sphere() -> Self {
        Self { kind: TargetKind::Sphere }
    }

    pub fn yang_mills() -> Self {
        Self { kind: TargetKind::YangMills }
    }

    /// Builds a custom target from samples of `g` on a uniform table over
    /// `[0, c_star]`. Enforces `g(0) = 0`, `g'(0) = 1`, `g(C*) = 0` at load.
    pub fn custom(name: &str, c_star: f64, samples: Vec<f64>) -> Result<Self> {
        if !(c_star > 0.0) || samples.len() < 8 {
            return Err(Error::InvalidInput(format!(
                "custom target needs c_star > 0 and at least 8 samples, got {c_star}, {}",
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample("custom target table"));
        }
        let h = c_star / (samples.len() - 1) as f64;
        if samples[0].abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("custom target has g(0) = {}", samples[0])));
        }
        if (samples[samples.len() - 1]).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "custom target has g(C*) = {}, expected 0",
                samples[samples.len() - 1]
            )));
        }
        let slope0 = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * h);
        if (slope0 - 1.0).abs() > 1e-4 {
            return Err(Error::InvalidInput(format!(
                "custom target has g'(0) = {slope0}, expected 1"
            )));
        }
        let nodes: Vec<f64> = (0..samples.len()).map(|i| i as f64 * h).collect();
        let slopes = numerics::derivative(&nodes, &samples);
        Ok(Self {
            kind: TargetKind::Custom(Arc::new(CustomProfile {
                name: name.to_string(),
                c_star,
                samples,
                slopes,
            })),
        })
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn kind_str(&self) -> &str {
        match &self.kind {
            TargetKind::Sphere => "sphere",
            TargetKind::YangMills => "yang_mills",
            TargetKind::Custom(_) => "custom",
        }
    }

    pub fn from_kind_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Self::sphere()),
            "yang_mills" => Ok(Self::yang_mills()),
            other => Err(Error::InvalidInput(format!(
                "target kind '{other}' cannot be reconstructed from its name alone"
            ))),
        }
    }

    /// Smallest `C > 0` with `g(C) = 0`.
    pub fn c_star(&self) -> f64 {
        match &self.kind {
            TargetKind::Sphere => PI,
            TargetKind::YangMills => 1.0,
            TargetKind::Custom(c) => c.c_star,
        }
    }

    /// The value a regular harmonic profile takes at the origin: the zero of
    /// `g` from which the Bogomolny orbit departs toward `C*`. This is 0 for
    /// sphere-like targets and `-C*` for the Yang-Mills variable.
    pub fn q_origin(&self) -> f64 {
        match &self.kind {
            TargetKind::YangMills => -1.0,
            _ => 0.0,
        }
    }

    pub fn g(&self, rho: f64) -> f64 {
        match &self.kind {
            TargetKind::Sphere => rho.sin(),
            TargetKind::YangMills => 0.5 * (1.0 - rho * rho),
            TargetKind::Custom(c) => c.eval(rho).0,
        }
    }

    pub fn g_prime(&self, rho: f64) -> f64 {
        match &self.kind {
            TargetKind::Sphere => rho.cos(),
            TargetKind::YangMills => -rho,
            TargetKind::Custom(c) => c.eval(rho).1,
        }
    }

    /// Force profile `f = g g'`; for the sphere `f(rho) = sin(2 rho) / 2`.
    pub fn f(&self, rho: f64) -> f64 {
        self.g(rho) * self.g_prime(rho)
    }

    /// Signed potential accumulator `G(psi) = int_0^psi |g|`; odd in `psi`.
    /// Computed by adaptive quadrature, split at the multiples of `C*` where
    /// `|g|` has kinks. For the sphere `G(pi) = 2`.
    pub fn g_accumulate(&self, psi: f64) -> f64 {
        if psi == 0.0 {
            return 0.0;
        }
        if psi < 0.0 {
            return -self.g_accumulate(-psi);
        }
        let c = self.c_star();
        let mut acc = 0.0;
        let mut lo = 0.0;
        let mut k = 1.0;
        while k * c < psi {
            acc += numerics::adaptive_simpson(&|x: f64| self.g(x).abs(), lo, k * c, 1e-13);
            lo = k * c;
            k += 1.0;
        }
        acc + numerics::adaptive_simpson(&|x: f64| self.g(x).abs(), lo, psi, 1e-13)
    }

    /// Signed integral `int_a^b g(rho) drho` (the Bogomolny cross term).
    pub fn g_signed_integral(&self, a: f64, b: f64) -> f64 {
        numerics::adaptive_simpson(&|x: f64| self.g(x), a, b, 1e-13)
    }

    /// Ground-state energy `2 l (G(C*) - G(q_origin))` of the degree-one
    /// harmonic map for equivariance index `l`; 4 for the sphere at `l = 1`.
    pub fn ground_state_energy(&self, ell: u32) -> f64 {
        2.0 * ell as f64 * (self.g_accumulate(self.c_star()) - self.g_accumulate(self.q_origin()))
    }

    /// Sampling checks of the structural profile assumptions. Sphere-like
    /// targets must have `g` odd with `g(0) = 0`, `g'(0) = 1`; the Yang-Mills
    /// variable follows its own convention and is checked against it.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            TargetKind::Sphere | TargetKind::Custom(_) => {
                let c = self.c_star();
                if self.g(0.0).abs() > 1e-12 {
                    return Err(Error::InvalidInput("g(0) != 0".into()));
                }
                for i in 1..=32 {
                    let rho = c * i as f64 / 33.0;
                    if (self.g(-rho) + self.g(rho)).abs() > 1e-9 * (1.0 + self.g(rho).abs()) {
                        return Err(Error::InvalidInput(format!("g not odd at rho = {rho}")));
                    }
                }
                let eps = 1e-6;
                let slope = (self.g(eps) - self.g(-eps)) / (2.0 * eps);
                if (slope - 1.0).abs() > 1e-4 {
                    return Err(Error::InvalidInput(format!("g'(0) = {slope}, expected 1")));
                }
            }
            TargetKind::YangMills => {
                for i in 0..=16 {
                    let rho = -1.5 + 3.0 * i as f64 / 16.0;
                    if (self.g(rho) - 0.5 * (1.0 - rho * rho)).abs() > 1e-14 {
                        return Err(Error::InvalidInput("yang-mills profile mismatch".into()));
                    }
                }
            }
        }
        if self.g(self.c_star()).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "g(C*) = {}, expected 0",
                self.g(self.c_star())
            )));
        }
        Ok(())
    }

    /// Rejects targets whose `g` vanishes strictly inside the Bogomolny orbit
    /// range `(q_origin, C*)`; the connecting profile would stall there.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let lo = self.q_origin();
        let hi = self.c_star();
        for i in 1..512 {
            let rho = lo + (hi - lo) * i as f64 / 512.0;
            if self.g(rho) <= 0.0 {
                return Err(Error::DegenerateTarget(format!(
                    "g({rho}) = {} vanishes inside ({lo}, {hi})",
                    self.g(rho)
                )));
            }
        }
        Ok(())
    }

    /// True when two geometries can be mixed in one computation.
    pub fn compatible(&self, other: &Self) -> bool {
        self.kind_str() == other.kind_str() && (self.c_star() - other.c_star()).abs() < 1e-12
    }
}

impl CustomProfile {
    /// Evaluates `(g, g')` at any `rho` using oddness and `2 C*` periodicity.
    fn eval(&self, rho: f64) -> (f64, f64) {
        let period = 2.0 * self.c_star;
        let mut x = rho.rem_euclid(period);
        // reduce to [0, C*] by the mirror symmetry g(rho) = -g(2C* - rho),
        // under which the value flips sign and the slope does not
        let mut value_sign = 1.0;
        if x > self.c_star {
            x = period - x;
            value_sign = -1.0;
        }
        let h = self.c_star / (self.samples.len() - 1) as f64;
        let i = ((x / h) as usize).min(self.samples.len() - 2);
        let s = (x - i as f64 * h) / h;
        let (y0, y1) = (self.samples[i], self.samples[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let g = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let dh00 = 6.0 * s * (s - 1.0);
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        let gp = (dh00 * y0 + dh10 * m0 + dh01 * y1 + dh11 * m1) / h;
        (value_sign * g, gp)
    }
}
