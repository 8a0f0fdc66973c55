//! Admissible shock end states of the polytropic Euler system and the
//! pointwise constitutive maps along a profile.
//!
//! Shocks are parametrized by the upstream density `rho_minus`, the mean
//! frame velocity `U_c = (U₊ + U₋)/2`, the strength ratio
//! `delta = -[u]/U_c` and the lab-frame shock speed `c`. The
//! Rankine–Hugoniot relations then fix every other quantity in closed form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasParams<T> {
    pub gamma: T,
    #[serde(rename = "R")]
    pub r: T,
}

impl<T: Real> GasParams<T> {
    pub fn new(gamma: T, r: T) -> Result<Self> {
        let p = Self { gamma, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::one()) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("adiabatic constant must exceed 1 (got {})", self.gamma),
            });
        }
        if !(self.r > T::zero()) || !self.r.is_finite() {
            return Err(Error::NonPositiveInput {
                name: "R",
                value: self.r.as_f64(),
            });
        }
        Ok(())
    }

    /// Upper end of the admissible strength range, `2/γ`.
    pub fn delta_max(&self) -> T {
        T::lit(2.0) / self.gamma
    }

    pub fn sound_speed(&self, theta: T) -> T {
        (self.gamma * self.r * theta).sqrt()
    }
}

/// Coupling `g(θ) = σ θ^α` together with the scattering and absorption constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiationParams<T> {
    pub sigma: T,
    pub sigma_s: T,
    pub tau: T,
    pub alpha: T,
}

impl<T: Real> RadiationParams<T> {
    pub fn new(sigma: T, sigma_s: T, tau: T, alpha: T) -> Result<Self> {
        let p = Self {
            sigma,
            sigma_s,
            tau,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("sigma", self.sigma),
            ("sigma_s", self.sigma_s),
            ("tau", self.tau),
            ("alpha", self.alpha),
        ] {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::NonPositiveInput {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn g(&self, theta: T) -> T {
        self.sigma * pow(theta, self.alpha)
    }

    pub fn dg(&self, theta: T) -> T {
        self.sigma * self.alpha * pow(theta, self.alpha - T::one())
    }
}

/// `base^exp`, exact for small integer exponents.
pub(crate) fn pow<T: Real>(base: T, exp: T) -> T {
    let r = exp.round();
    if exp == r && r.abs() <= T::lit(16.0) {
        base.powi(r.to_i32().unwrap_or(0))
    } else {
        base.powf(exp)
    }
}

/// Full end-state bundle of an admissible 1-shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockData<T> {
    pub gas: GasParams<T>,
    pub rho_minus: T,
    pub rho_plus: T,
    pub u_minus: T,
    pub u_plus: T,
    pub theta_minus: T,
    pub theta_plus: T,
    pub c: T,
    #[serde(rename = "U_minus")]
    pub frame_u_minus: T,
    #[serde(rename = "U_plus")]
    pub frame_u_plus: T,
    #[serde(rename = "U_c")]
    pub frame_u_c: T,
    pub jump_u: T,
    pub delta: T,
    #[serde(rename = "A")]
    pub a: T,
    #[serde(rename = "B")]
    pub b: T,
    #[serde(rename = "C")]
    pub c_flux: T,
    pub kappa: T,
}

/// Result of the three 1-shock entropy inequalities plus temperature positivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EntropyReport {
    /// `sqrt(γ R θ₋) < U₋`
    pub supersonic_minus: bool,
    /// `0 < U₊`
    pub positive_plus: bool,
    /// `U₊ < sqrt(γ R θ₊)`
    pub subsonic_plus: bool,
    /// `θ₋ > 0` and `θ₊ > 0`; fails first as `delta -> 2/γ`
    pub positive_temperature: bool,
}

impl EntropyReport {
    pub fn all(&self) -> bool {
        self.supersonic_minus && self.positive_plus && self.subsonic_plus && self.positive_temperature
    }
}

/// Builds the unique admissible shock with the given `(rho_minus, U_c, delta, c)`.
pub fn build_shock<T: Real>(gas: GasParams<T>, rho_minus: T, u_c: T, delta: T, c: T) -> Result<ShockData<T>> {
    gas.validate()?;
    if !(rho_minus > T::zero()) || !rho_minus.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "rho_minus",
            value: rho_minus.as_f64(),
        });
    }
    if !(u_c > T::zero()) || !u_c.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "U_c",
            value: u_c.as_f64(),
        });
    }
    if !c.is_finite() {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: "shock speed must be finite".into(),
        });
    }
    let dmax = gas.delta_max();
    if !(delta > T::zero() && delta < dmax) {
        return Err(Error::InadmissibleDelta {
            delta: delta.as_f64(),
            max: dmax.as_f64(),
        });
    }
    Ok(assemble(gas, rho_minus, u_c, delta, c))
}

/// Closed-form assembly without admissibility checks.
pub(crate) fn assemble<T: Real>(gas: GasParams<T>, rho_minus: T, u_c: T, delta: T, c: T) -> ShockData<T> {
    let half = T::lit(0.5);
    let one = T::one();
    let g = gas.gamma;
    let jump_u = -delta * u_c;
    let frame_u_minus = u_c - half * jump_u;
    let frame_u_plus = u_c + half * jump_u;
    let a = rho_minus * frame_u_minus;
    let rho_plus = a / frame_u_plus;
    let gr = g * gas.r;
    let theta_minus = (u_c - half * jump_u) * (u_c + half * g * jump_u) / gr;
    let theta_plus = (u_c + half * jump_u) * (u_c - half * g * jump_u) / gr;
    let b = (g + one) / (T::lit(2.0) * g) * a * (frame_u_minus + frame_u_plus);
    let kappa = (g + one) * a / (T::lit(2.0) * (g - one));
    let c_flux = kappa * frame_u_minus * frame_u_plus;
    ShockData {
        gas,
        rho_minus,
        rho_plus,
        u_minus: frame_u_minus + c,
        u_plus: frame_u_plus + c,
        theta_minus,
        theta_plus,
        c,
        frame_u_minus,
        frame_u_plus,
        frame_u_c: u_c,
        jump_u,
        delta,
        a,
        b,
        c_flux,
        kappa,
    }
}

/// Validates raw end-state triples against Rankine–Hugoniot (relative
/// tolerance `tol`) and the entropy conditions, then returns the bundle.
#[allow(clippy::too_many_arguments)]
pub fn validate_raw<T: Real>(
    gas: GasParams<T>,
    rho_minus: T,
    u_minus: T,
    theta_minus: T,
    rho_plus: T,
    u_plus: T,
    theta_plus: T,
    c: T,
    tol: T,
) -> Result<ShockData<T>> {
    gas.validate()?;
    for (name, v) in [
        ("rho_minus", rho_minus),
        ("rho_plus", rho_plus),
        ("theta_minus", theta_minus),
        ("theta_plus", theta_plus),
    ] {
        if !(v > T::zero()) {
            return Err(Error::NonPositiveInput { name, value: v.as_f64() });
        }
    }
    let um = u_minus - c;
    let up = u_plus - c;
    let [am, bm, cm] = direct_fluxes(&gas, rho_minus, um, theta_minus);
    let [ap, bp, cp] = direct_fluxes(&gas, rho_plus, up, theta_plus);
    for (name, l, r) in [("mass", am, ap), ("momentum", bm, bp), ("energy", cm, cp)] {
        let scale = l.abs().max(r.abs()).max(T::min_positive_value());
        if (l - r).abs() > tol * scale {
            return Err(Error::RankineHugoniot(format!(
                "{name} flux differs across the shock ({l} vs {r})"
            )));
        }
    }
    let u_c = T::lit(0.5) * (um + up);
    if !(u_c > T::zero()) {
        return Err(Error::NonPositiveInput {
            name: "U_c",
            value: u_c.as_f64(),
        });
    }
    let delta = (um - up) / u_c;
    let shock = ShockData {
        gas,
        rho_minus,
        rho_plus,
        u_minus,
        u_plus,
        theta_minus,
        theta_plus,
        c,
        frame_u_minus: um,
        frame_u_plus: up,
        frame_u_c: u_c,
        jump_u: up - um,
        delta,
        a: am,
        b: bm,
        c_flux: cm,
        kappa: (gas.gamma + T::one()) * am / (T::lit(2.0) * (gas.gamma - T::one())),
    };
    let report = check_entropy(&shock);
    if !report.all() {
        return Err(Error::EntropyViolation(format!("{report:?}")));
    }
    Ok(shock)
}

/// Mass, momentum and energy fluxes `(ρU, ρU² + p, ρU(U²/2 + e) + pU)`
/// evaluated directly from the state.
pub fn direct_fluxes<T: Real>(gas: &GasParams<T>, rho: T, frame_u: T, theta: T) -> [T; 3] {
    let p = gas.r * rho * theta;
    let e = gas.r * theta / (gas.gamma - T::one());
    [
        rho * frame_u,
        rho * frame_u * frame_u + p,
        rho * frame_u * (T::lit(0.5) * frame_u * frame_u + e) + p * frame_u,
    ]
}

pub fn check_entropy<T: Real>(s: &ShockData<T>) -> EntropyReport {
    let gr = s.gas.gamma * s.gas.r;
    // compare squares to avoid sqrt of a negative temperature
    let supersonic_minus = s.frame_u_minus > T::zero()
        && (s.theta_minus <= T::zero() || gr * s.theta_minus < s.frame_u_minus * s.frame_u_minus);
    let positive_plus = s.frame_u_plus > T::zero();
    let subsonic_plus = s.theta_plus > T::zero()
        && (s.frame_u_plus <= T::zero() || s.frame_u_plus * s.frame_u_plus < gr * s.theta_plus);
    let positive_temperature = s.theta_minus > T::zero() && s.theta_plus > T::zero();
    EntropyReport {
        supersonic_minus,
        positive_plus,
        subsonic_plus,
        positive_temperature,
    }
}

impl<T: Real> ShockData<T> {
    /// Temperature along the profile as a function of the reduced coordinate
    /// `x ∈ [-1, 1]`: `(U_c²/γR)(1 - δx/2)(1 + γδx/2)`.
    pub fn theta_of_x(&self, x: T) -> T {
        let half = T::lit(0.5);
        let g = self.gas.gamma;
        let scale = self.frame_u_c * self.frame_u_c / (g * self.gas.r);
        scale * (T::one() - half * self.delta * x) * (T::one() + half * g * self.delta * x)
    }

    /// `dθ/dx`
    pub fn theta_prime_of_x(&self, x: T) -> T {
        let g = self.gas.gamma;
        let scale = self.frame_u_c * self.frame_u_c / (g * self.gas.r);
        scale * T::lit(0.5) * self.delta * ((g - T::one()) - g * self.delta * x)
    }

    /// `d²θ/dx²` (constant)
    pub fn theta_second(&self) -> T {
        let g = self.gas.gamma;
        let scale = self.frame_u_c * self.frame_u_c / (g * self.gas.r);
        -scale * T::lit(0.5) * g * self.delta * self.delta
    }

    /// Maximizer of `theta_of_x`, `(γ-1)/(γδ)`.
    pub fn x_c(&self) -> T {
        (self.gas.gamma - T::one()) / (self.gas.gamma * self.delta)
    }

    /// Frame velocity at reduced coordinate `x`: `U_c + [u] x / 2`.
    pub fn frame_u_of_x(&self, x: T) -> T {
        self.frame_u_c + T::lit(0.5) * self.jump_u * x
    }

    /// Energy-flux function `f(U) = -κ (U - U₊)(U - U₋)`.
    pub fn f_of_u(&self, frame_u: T) -> Result<T> {
        self.positive_u(frame_u)?;
        Ok(-self.kappa * (frame_u - self.frame_u_plus) * (frame_u - self.frame_u_minus))
    }

    pub fn rho_of_u(&self, frame_u: T) -> Result<T> {
        self.positive_u(frame_u)?;
        Ok(self.a / frame_u)
    }

    pub fn p_of_u(&self, frame_u: T) -> Result<T> {
        self.positive_u(frame_u)?;
        Ok(self.b - self.a * frame_u)
    }

    /// Temperature as a function of the frame velocity, `p/(Rρ)`.
    pub fn theta_of_u(&self, frame_u: T) -> Result<T> {
        let p = self.p_of_u(frame_u)?;
        Ok(p * frame_u / (self.gas.r * self.a))
    }

    fn positive_u(&self, frame_u: T) -> Result<()> {
        if frame_u > T::zero() {
            Ok(())
        } else {
            Err(Error::NonPositiveU(frame_u.as_f64()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gas() -> GasParams<f64> {
        GasParams::new(5.0 / 3.0, 8.31).unwrap()
    }

    fn reference() -> ShockData<f64> {
        build_shock(gas(), 0.1, 10.0, 0.6, 0.0).unwrap()
    }

    #[test]
    fn reference_case_closed_forms() {
        let s = reference();
        assert_relative_eq!(s.frame_u_minus, 13.0, max_relative = 1e-14);
        assert_relative_eq!(s.frame_u_plus, 7.0, max_relative = 1e-14);
        assert_relative_eq!(s.a, 1.3, max_relative = 1e-14);
        assert_relative_eq!(s.kappa, 2.6, max_relative = 1e-14);
        assert_relative_eq!(s.b, 20.8, max_relative = 1e-14);
        assert_relative_eq!(s.c_flux, 236.6, max_relative = 1e-14);
        assert_relative_eq!(s.theta_minus, 65.0 / 13.85, max_relative = 1e-13);
        assert_relative_eq!(s.theta_plus, 105.0 / 13.85, max_relative = 1e-13);
        assert_relative_eq!(s.rho_plus, 1.3 / 7.0, max_relative = 1e-14);
        assert!((s.rho_plus - 0.185714).abs() < 1e-6);
        assert!((s.theta_minus - 4.69314).abs() < 1e-5);
        assert!((s.theta_plus - 7.58123).abs() < 1e-5);
        // B, C by direct substitution
        let [am, bm, cm] = direct_fluxes(&s.gas, s.rho_minus, 13.0, s.theta_minus);
        let [ap, bp, cp] = direct_fluxes(&s.gas, s.rho_plus, 7.0, s.theta_plus);
        for (x, y) in [(am, 1.3), (ap, 1.3), (bm, 20.8), (bp, 20.8), (cm, 236.6), (cp, 236.6)] {
            assert_relative_eq!(x, y, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_jump_limit_coalesces() {
        let s = build_shock(gas(), 0.1, 10.0, 1e-9, 0.0).unwrap();
        assert!((s.theta_plus - s.theta_minus).abs() < 1e-7);
        assert!((s.rho_plus - s.rho_minus).abs() < 1e-9);
    }

    #[test]
    fn delta_above_two_over_gamma_rejected() {
        let err = build_shock(gas(), 0.1, 10.0, 1.3, 0.0).unwrap_err();
        assert!(matches!(err, Error::InadmissibleDelta { .. }));
        assert!(matches!(
            build_shock(gas(), 0.1, 10.0, 0.0, 0.0),
            Err(Error::InadmissibleDelta { .. })
        ));
    }

    #[test]
    fn non_positive_inputs_rejected() {
        assert!(matches!(
            build_shock(gas(), 0.0, 10.0, 0.5, 0.0),
            Err(Error::NonPositiveInput { name: "rho_minus", .. })
        ));
        assert!(matches!(
            build_shock(gas(), 0.1, -1.0, 0.5, 0.0),
            Err(Error::NonPositiveInput { name: "U_c", .. })
        ));
        assert!(GasParams::new(1.0, 8.31).is_err());
        assert!(GasParams::new(1.4, 0.0).is_err());
    }

    #[test]
    fn lab_velocities_follow_shock_speed() {
        let s = build_shock(gas(), 0.1, 10.0, 0.6, 2.5).unwrap();
        assert_eq!(s.u_minus, 15.5);
        assert_eq!(s.u_plus, 9.5);
        assert_eq!(s.jump_u, -6.0);
    }

    #[test]
    fn entropy_reference_case() {
        let s = reference();
        let r = check_entropy(&s);
        assert!(r.all());
        // gamma R theta = (U_c -/+ [u]/2)(U_c +/- gamma [u]/2)
        assert_relative_eq!(s.gas.gamma * s.gas.r * s.theta_minus, 65.0, max_relative = 1e-13);
        assert_relative_eq!(s.gas.gamma * s.gas.r * s.theta_plus, 105.0, max_relative = 1e-13);
        assert!(65f64.sqrt() < 13.0 && 7.0 < 105f64.sqrt());
    }

    #[test]
    fn entropy_at_upper_delta_limit() {
        let g = gas();
        let s = assemble(g, 0.1, 10.0, g.delta_max(), 0.0);
        let r = check_entropy(&s);
        // the upstream temperature vanishes; the strict inequalities on U fail to be meaningful
        assert!(!r.positive_temperature);
        assert!(!r.all());
        assert!(s.theta_minus.abs() < 1e-12);
    }

    #[test]
    fn entropy_detects_negative_downstream_velocity() {
        let mut s = reference();
        s.frame_u_plus = -1.0;
        let r = check_entropy(&s);
        assert!(!r.positive_plus);
        assert!(r.supersonic_minus);
    }

    #[test]
    fn theta_of_x_values() {
        let s = reference();
        assert_relative_eq!(s.theta_of_x(0.0), 100.0 / 13.85, max_relative = 1e-14);
        assert!((s.theta_of_x(0.0) - 7.22022).abs() < 1e-5);
        assert_relative_eq!(s.theta_of_x(-1.0), s.theta_minus, max_relative = 1e-12);
        assert_relative_eq!(s.theta_of_x(1.0), s.theta_plus, max_relative = 1e-12);
        assert_relative_eq!(s.x_c(), 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(s.theta_of_x(s.x_c()), 64.0 / 8.31, max_relative = 1e-13);
        assert!((64.0f64 / 8.31 - 7.70157).abs() < 1e-5);
        assert!(s.theta_prime_of_x(s.x_c()).abs() < 1e-12);
    }

    #[test]
    fn f_of_u_values() {
        let s = reference();
        assert_relative_eq!(s.f_of_u(10.0).unwrap(), 23.4, max_relative = 1e-14);
        assert_eq!(s.f_of_u(7.0).unwrap(), 0.0);
        assert_eq!(s.f_of_u(13.0).unwrap(), 0.0);
        assert_relative_eq!(s.rho_of_u(13.0).unwrap(), 0.1, max_relative = 1e-14);
        assert_relative_eq!(s.p_of_u(13.0).unwrap(), s.gas.r * 0.1 * s.theta_minus, max_relative = 1e-12);
        assert!(matches!(s.f_of_u(0.0), Err(Error::NonPositiveU(_))));
        assert!(matches!(s.rho_of_u(-2.0), Err(Error::NonPositiveU(_))));
        // theta(U(x)) from p/(R rho) agrees with the quadratic in x
        for &x in &[-1.0, -0.3, 0.2, 0.9] {
            let u = s.frame_u_of_x(x);
            assert_relative_eq!(s.theta_of_u(u).unwrap(), s.theta_of_x(x), max_relative = 1e-12);
        }
    }

    #[test]
    fn validate_raw_accepts_reference_and_rejects_perturbation() {
        let s = reference();
        let ok = validate_raw(
            s.gas,
            s.rho_minus,
            s.u_minus,
            s.theta_minus,
            s.rho_plus,
            s.u_plus,
            s.theta_plus,
            s.c,
            1e-10,
        )
        .unwrap();
        assert_relative_eq!(ok.delta, 0.6, max_relative = 1e-12);
        let err = validate_raw(
            s.gas,
            s.rho_minus,
            s.u_minus,
            s.theta_minus,
            s.rho_plus * 1.01,
            s.u_plus,
            s.theta_plus,
            s.c,
            1e-10,
        )
        .unwrap_err();
        assert!(matches!(err, Error::RankineHugoniot(_)));
    }

    #[test]
    fn single_precision_instance() {
        let g = GasParams::new(5.0f32 / 3.0, 8.31).unwrap();
        let s = build_shock(g, 0.1f32, 10.0, 0.6, 0.0).unwrap();
        assert!((s.b - 20.8).abs() < 1e-4);
        assert!((s.theta_of_x(s.x_c()) - 64.0 / 8.31).abs() < 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rankine_hugoniot_fluxes_match(
            gamma in 1.01f64..=3.0,
            r in 0.1f64..20.0,
            rho in 0.01f64..10.0,
            u_c in 0.1f64..200.0,
            frac in 0.001f64..0.999,
            c in -50.0f64..50.0,
        ) {
            let g = GasParams::new(gamma, r).unwrap();
            let delta = frac * g.delta_max();
            let s = build_shock(g, rho, u_c, delta, c).unwrap();
            let lhs = direct_fluxes(&g, s.rho_minus, s.u_minus - s.c, s.theta_minus);
            let rhs = direct_fluxes(&g, s.rho_plus, s.u_plus - s.c, s.theta_plus);
            let closed = [s.a, s.b, s.c_flux];
            for k in 0..3 {
                let scale = closed[k].abs();
                prop_assert!((lhs[k] - closed[k]).abs() <= 1e-10 * scale, "k={} {} vs {}", k, lhs[k], closed[k]);
                prop_assert!((rhs[k] - closed[k]).abs() <= 1e-10 * scale, "k={} {} vs {}", k, rhs[k], closed[k]);
            }
            prop_assert!(check_entropy(&s).all());
            prop_assert!(s.jump_u < 0.0 && s.frame_u_plus < s.frame_u_minus);
            prop_assert!(s.theta_plus > s.theta_minus && s.rho_plus > s.rho_minus);
            // [θ] = (γ-1)/(γR) [u]²/δ
            let jump_theta = (gamma - 1.0) / (gamma * r) * s.jump_u * s.jump_u / delta;
            prop_assert!(((s.theta_plus - s.theta_minus) - jump_theta).abs() <= 1e-10 * jump_theta);
            prop_assert!((s.theta_of_x(-1.0) - s.theta_minus).abs() <= 1e-12 * s.theta_minus);
            prop_assert!((s.theta_of_x(1.0) - s.theta_plus).abs() <= 1e-12 * s.theta_plus);
        }

        #[test]
        fn theta_concave_with_maximizer_x_c(
            gamma in 1.01f64..=3.0,
            frac in 0.01f64..0.99,
            x in -1.0f64..1.0,
        ) {
            let g = GasParams::new(gamma, 1.0).unwrap();
            let s = build_shock(g, 1.0, 1.0, frac * g.delta_max(), 0.0).unwrap();
            prop_assert!(s.theta_second() < 0.0);
            prop_assert!(s.theta_of_x(x) <= s.theta_of_x(s.x_c()) * (1.0 + 1e-14));
            prop_assert!(s.theta_of_x(x) > 0.0);
        }
    }
}
