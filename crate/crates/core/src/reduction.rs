//! Reduction of the travelling-wave equations to the standard planar system
//!
//! ```text
//! dx/dζ = (G(x) - y) / (ν x),    dy/dζ = ν (1 - x²) / 2
//! ```
//!
//! together with the closed-form regime classifiers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{pow, RadiationParams, ShockData};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HamerKind {
    Linear,
    Quadratic,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model<T> {
    RadHydro {
        shock: ShockData<T>,
        rad: RadiationParams<T>,
    },
    Hamer {
        kind: HamerKind,
        u_minus: T,
        u_plus: T,
        sigma: T,
        alpha: u32,
    },
}

/// Data `(ν, G)` of the standard planar system.
///
/// `G` is the composition of the power-law coupling with the (affine or
/// quadratic) dependence of its argument on `x`; it is evaluated in closed
/// form together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedSystem<T> {
    pub nu: T,
    pub g_bracket: T,
    pub g_minus: T,
    pub g_plus: T,
    pub model: Model<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport<T> {
    pub delta: Option<T>,
    pub delta_spike: Option<T>,
    pub delta_jump: Option<T>,
    pub delta_max: Option<T>,
    #[serde(rename = "G_at_0")]
    pub g_at_0: T,
    #[serde(rename = "G_prime_at_0")]
    pub g_prime_at_0: T,
    pub nu: T,
    pub two_nu_sq: T,
    /// `G'(0)² - 2ν²`: sign of the eigenvalue discriminant at `P₀`
    pub p0_discriminant: T,
    pub forced_jump_by_g0: bool,
    /// `|G(0)| = 1` up to the forced-jump tolerance
    pub g0_on_boundary: bool,
    pub spiral: bool,
    pub jump_predicted: bool,
    pub spike_predicted: bool,
    pub x_c: Option<T>,
    pub theta_max_closed_form: Option<T>,
    #[serde(rename = "theta_M")]
    pub theta_m: Option<T>,
    /// Range of `θ_max/θ_M` over admissible `δ`, only for `γ < 3`: `1/(3-γ)` below,
    /// `(γ+1)²/(8(3-γ)(γ-1))` above for `γ <= 2` and `(γ+1)²/(4γ(3-γ))` for `2 < γ < 3`
    pub ratio_bounds: Option<(T, T)>,
}

/// Tolerance on `|G(0)| >= 1` for the forced-jump test.
pub const FORCED_JUMP_TOL: f64 = 1e-12;

pub fn reduce_radhydro<T: Real>(shock: ShockData<T>, rad: RadiationParams<T>) -> Result<ReducedSystem<T>> {
    shock.gas.validate()?;
    rad.validate()?;
    let g_minus = rad.g(shock.theta_of_x(-T::one()));
    let g_plus = rad.g(shock.theta_of_x(T::one()));
    let g_bracket = g_plus - g_minus;
    if !(g_bracket > T::lit(1e-14) * g_minus.abs().max(g_plus.abs())) {
        return Err(Error::DegenerateCoupling {
            g_jump: g_bracket.as_f64(),
        });
    }
    let nu = shock.kappa * rad.sigma_s * shock.jump_u * shock.jump_u / (rad.tau * g_bracket);
    if !(nu > T::zero()) || !nu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "nu",
            reason: format!("reduced parameter must be positive and finite (got {nu})"),
        });
    }
    Ok(ReducedSystem {
        nu,
        g_bracket,
        g_minus,
        g_plus,
        model: Model::RadHydro { shock, rad },
    })
}

pub fn reduce_hamer<T: Real>(u_minus: T, u_plus: T, sigma: T, alpha: u32) -> Result<ReducedSystem<T>> {
    if !u_minus.is_finite() || !u_plus.is_finite() || !(u_plus < u_minus) {
        return Err(Error::InadmissibleShock {
            u_minus: u_minus.as_f64(),
            u_plus: u_plus.as_f64(),
        });
    }
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "sigma",
            value: sigma.as_f64(),
        });
    }
    if alpha == 0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "exponent must be a positive integer".into(),
        });
    }
    let kind = match alpha {
        1 => HamerKind::Linear,
        2 => HamerKind::Quadratic,
        _ => HamerKind::Power,
    };
    let model = Model::Hamer {
        kind,
        u_minus,
        u_plus,
        sigma,
        alpha,
    };
    let mut rs = ReducedSystem {
        nu: T::zero(),
        g_bracket: T::zero(),
        g_minus: T::zero(),
        g_plus: T::zero(),
        model,
    };
    rs.g_minus = rs.coupling(rs.arg(-T::one()));
    rs.g_plus = rs.coupling(rs.arg(T::one()));
    rs.g_bracket = rs.g_plus - rs.g_minus;
    if !(rs.g_bracket < T::zero()) {
        return Err(Error::HypothesisGViolated {
            g_jump: rs.g_bracket.as_f64(),
        });
    }
    let du = u_plus - u_minus;
    rs.nu = -du * du / (T::lit(2.0) * rs.g_bracket);
    Ok(rs)
}

/// 5-point Gauss–Legendre nodes and weights on `[0, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.046_910_077_030_668_0, 0.118_463_442_528_094_5),
    (0.230_765_344_947_158_5, 0.239_314_335_249_683_2),
    (0.5, 0.284_444_444_444_444_4),
    (0.769_234_655_052_841_5, 0.239_314_335_249_683_2),
    (0.953_089_922_969_332, 0.118_463_442_528_094_5),
];

impl<T: Real> ReducedSystem<T> {
    /// Argument of the coupling at `x`: temperature `θ(x)` or Burgers state `u(x)`.
    pub fn arg(&self, x: T) -> T {
        match &self.model {
            Model::RadHydro { shock, .. } => shock.theta_of_x(x),
            Model::Hamer { u_minus, u_plus, .. } => {
                T::lit(0.5) * ((*u_plus - *u_minus) * x + *u_minus + *u_plus)
            }
        }
    }

    fn arg_prime(&self, x: T) -> T {
        match &self.model {
            Model::RadHydro { shock, .. } => shock.theta_prime_of_x(x),
            Model::Hamer { u_minus, u_plus, .. } => T::lit(0.5) * (*u_plus - *u_minus),
        }
    }

    fn arg_second(&self) -> T {
        match &self.model {
            Model::RadHydro { shock, .. } => shock.theta_second(),
            Model::Hamer { .. } => T::zero(),
        }
    }

    fn coupling(&self, s: T) -> T {
        match &self.model {
            Model::RadHydro { rad, .. } => rad.g(s),
            Model::Hamer { sigma, alpha, .. } => *sigma * s.powi(*alpha as i32),
        }
    }

    fn coupling_prime(&self, s: T) -> T {
        match &self.model {
            Model::RadHydro { rad, .. } => rad.dg(s),
            Model::Hamer { sigma, alpha, .. } => {
                *sigma * T::lit(f64::from(*alpha)) * s.powi(*alpha as i32 - 1)
            }
        }
    }

    fn coupling_second(&self, s: T) -> T {
        match &self.model {
            Model::RadHydro { rad, .. } => {
                let a = rad.alpha;
                rad.sigma * a * (a - T::one()) * pow(s, a - T::lit(2.0))
            }
            Model::Hamer { sigma, alpha, .. } => {
                if *alpha < 2 {
                    T::zero()
                } else {
                    let a = T::lit(f64::from(*alpha));
                    *sigma * a * (a - T::one()) * s.powi(*alpha as i32 - 2)
                }
            }
        }
    }

    /// Coupling `g` at the state with reduced abscissa `x`; the end states
    /// return the stored `g₋`, `g₊` exactly.
    pub fn coupling_at(&self, x: T) -> T {
        if x == -T::one() {
            return self.g_minus;
        }
        if x == T::one() {
            return self.g_plus;
        }
        self.coupling(self.arg(x))
    }

    /// `G(x) = (2 g(x) - g₋ - g₊) / [g]`; exactly `±1` at `x = ±1`.
    pub fn g(&self, x: T) -> T {
        let gx = self.coupling(self.arg(x));
        ((gx - self.g_minus) + (gx - self.g_plus)) / self.g_bracket
    }

    pub fn g_prime(&self, x: T) -> T {
        T::lit(2.0) * self.coupling_prime(self.arg(x)) * self.arg_prime(x) / self.g_bracket
    }

    pub fn g_second(&self, x: T) -> T {
        let s = self.arg(x);
        let sp = self.arg_prime(x);
        T::lit(2.0) * (self.coupling_second(s) * sp * sp + self.coupling_prime(s) * self.arg_second())
            / self.g_bracket
    }

    /// Divided difference `(G(x) - G(0)) / x`, continuous through `x = 0`.
    pub fn divided_difference(&self, x: T) -> T {
        if x.abs() < T::lit(1e-3) {
            GL5.iter()
                .map(|&(t, w)| T::lit(w) * self.g_prime(T::lit(t) * x))
                .fold(T::zero(), |acc, v| acc + v)
        } else {
            let d = self.coupling(self.arg(x)) - self.coupling(self.arg(T::zero()));
            T::lit(2.0) * d / (self.g_bracket * x)
        }
    }

    /// Factor converting reduced time into physical time, `ξ = ζ · xi_per_zeta`.
    pub fn xi_per_zeta(&self) -> T {
        match &self.model {
            Model::RadHydro { rad, .. } => T::one() / rad.tau,
            Model::Hamer { .. } => T::one(),
        }
    }

    pub fn is_radhydro(&self) -> bool {
        matches!(self.model, Model::RadHydro { .. })
    }

    pub fn shock(&self) -> Option<&ShockData<T>> {
        match &self.model {
            Model::RadHydro { shock, .. } => Some(shock),
            Model::Hamer { .. } => None,
        }
    }

    pub fn classify(&self) -> RegimeReport<T> {
        let one = T::one();
        let two = T::lit(2.0);
        let g0 = self.g(T::zero());
        let gp0 = self.g_prime(T::zero());
        let two_nu_sq = two * self.nu * self.nu;
        let tol = T::lit(FORCED_JUMP_TOL);
        let forced = g0 >= one - tol || g0 <= -one + tol;
        let on_boundary = (g0.abs() - one).abs() <= tol;
        let spiral = gp0 < two_nu_sq;
        let mut rep = RegimeReport {
            delta: None,
            delta_spike: None,
            delta_jump: None,
            delta_max: None,
            g_at_0: g0,
            g_prime_at_0: gp0,
            nu: self.nu,
            two_nu_sq,
            p0_discriminant: gp0 * gp0 - two_nu_sq,
            forced_jump_by_g0: forced,
            g0_on_boundary: on_boundary,
            spiral,
            jump_predicted: forced || spiral,
            spike_predicted: false,
            x_c: None,
            theta_max_closed_form: None,
            theta_m: None,
            ratio_bounds: None,
        };
        if let Model::RadHydro { shock, .. } = &self.model {
            let g = shock.gas.gamma;
            let three = T::lit(3.0);
            rep.delta = Some(shock.delta);
            rep.delta_spike = Some((g - one) / g);
            rep.delta_jump = Some(two * (g - one) / g);
            rep.delta_max = Some(two / g);
            let x_c = shock.x_c();
            rep.x_c = Some(x_c);
            rep.spike_predicted = x_c < one;
            rep.theta_max_closed_form =
                Some((g + one) * (g + one) * shock.frame_u_c * shock.frame_u_c / (T::lit(4.0) * g * g * shock.gas.r));
            rep.theta_m = Some((three - g) * shock.theta_plus);
            if g < three {
                // sup over δ ∈ (0, 2/γ) of 1/((1-δ/2)(1+γδ/2)) is reached at
                // δ → 2/γ for γ <= 2 and at δ → 0 beyond
                let upper = if g <= two {
                    (g + one) * (g + one) / (T::lit(8.0) * (three - g) * (g - one))
                } else {
                    (g + one) * (g + one) / (T::lit(4.0) * g * (three - g))
                };
                rep.ratio_bounds = Some((one / (three - g), upper));
            }
        }
        rep
    }
}

/// Both sides `(lhs, rhs)` of the spiral criterion written in the physical
/// variables, `M₀/A² U_c g'(U_c²/γR) < -[u]³/[g]`.
pub fn spiral_condition_sides<T: Real>(shock: &ShockData<T>, rad: &RadiationParams<T>) -> (T, T) {
    let one = T::one();
    let g = shock.gas.gamma;
    let r = shock.gas.r;
    let m0 = T::lit(2.0) * (g - one).powi(3) * rad.tau * rad.tau
        / (r * g * (g + one) * (g + one) * rad.sigma_s * rad.sigma_s);
    let theta0 = shock.frame_u_c * shock.frame_u_c / (g * r);
    let lhs = m0 / (shock.a * shock.a) * shock.frame_u_c * rad.dg(theta0);
    let g_jump = rad.g(shock.theta_of_x(one)) - rad.g(shock.theta_of_x(-one));
    let rhs = -shock.jump_u.powi(3) / g_jump;
    (lhs, rhs)
}

/// `m₁ = √2 (γ-1)² σ τ / (R γ (γ+1) σ_s)`; for `α = 1` the spiral criterion reads `δ > m₁/A`.
pub fn linear_spiral_constant<T: Real>(gamma: T, r: T, rad: &RadiationParams<T>) -> T {
    let one = T::one();
    T::SQRT_2() * (gamma - one) * (gamma - one) * rad.sigma * rad.tau
        / (r * gamma * (gamma + one) * rad.sigma_s)
}

/// Limit profile `G_{γ,α}(x) = -1 + 2 (((γ-x)/(γ-1)) ((1+x)/2))^α` reached for large `U_c`.
pub fn limit_g<T: Real>(gamma: T, alpha: T, x: T) -> T {
    let one = T::one();
    let base = (gamma - x) / (gamma - one) * (one + x) / T::lit(2.0);
    -one + T::lit(2.0) * pow(base, alpha)
}
