//! Physical shock profiles reconstructed from a heteroclinic orbit of the
//! reduced system, spike detection and residual checks against the original
//! algebraic-differential system
//!
//! ```text
//! m = σ_s f(U),   dn/dξ = m,   dm/dξ = τ² (n - g(θ))
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::phaseplane::{Connection, HeteroclinicOrbit};
use crate::reduction::{Model, ReducedSystem};

type Rs = ReducedSystem<f64>;

/// Minimum number of samples per side accepted by [`verify`].
pub const MIN_SAMPLES_PER_SIDE: usize = 100;

/// Physical state at one point of the profile. For the Hamer model `rho` and
/// `theta` are `NaN` and `u` is the Burgers state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
    pub n: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub xi: f64,
    pub x: f64,
    pub y: f64,
    #[serde(flatten)]
    pub state: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpRecord {
    pub xi: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub left: State,
    pub right: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpikeLocation {
    AtJump,
    SmoothInterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpikeInfo {
    pub present: bool,
    /// `None` when no spike is present.
    pub location: Option<SpikeLocation>,
    pub theta_peak: f64,
    pub x_at_peak: f64,
    /// `θ(x_c) = (γ+1)² U_c² / (4 γ² R)`
    pub theta_max_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShockProfile {
    /// Ordered by `ξ`; a jump appears as two consecutive samples with equal `ξ`.
    pub samples: Vec<ProfileSample>,
    /// Index of the first sample right of the connection.
    pub split: usize,
    pub connection: Connection,
    pub jump: Option<JumpRecord>,
    pub spike: Option<SpikeInfo>,
    pub system: Rs,
}

impl ShockProfile {
    pub fn left(&self) -> &[ProfileSample] {
        &self.samples[..self.split]
    }

    pub fn right(&self) -> &[ProfileSample] {
        &self.samples[self.split..]
    }
}

/// Physical state at the phase-plane point `(x, y)`.
pub fn state_at(rs: &Rs, x: f64, y: f64) -> State {
    // n = ([g] y + g₋ + g₊)/2, anchored at the nearer end state
    let n = if y <= 0.0 {
        rs.g_minus + 0.5 * rs.g_bracket * (y + 1.0)
    } else {
        rs.g_plus + 0.5 * rs.g_bracket * (y - 1.0)
    };
    match &rs.model {
        Model::RadHydro { shock, rad } => {
            let frame_u = shock.frame_u_of_x(x);
            // U stays in [U₊, U₋] on the profile, so these never fail
            let m = rad.sigma_s * shock.f_of_u(frame_u).unwrap_or(f64::NAN);
            State {
                rho: shock.a / frame_u,
                u: frame_u + shock.c,
                theta: shock.theta_of_x(x),
                n,
                m,
            }
        }
        Model::Hamer { u_minus, u_plus, .. } => {
            let u = rs.arg(x);
            State {
                rho: f64::NAN,
                u,
                theta: f64::NAN,
                n,
                m: 0.5 * (u - u_minus) * (u - u_plus),
            }
        }
    }
}

fn tau_sq(rs: &Rs) -> f64 {
    match &rs.model {
        Model::RadHydro { rad, .. } => rad.tau * rad.tau,
        Model::Hamer { .. } => 1.0,
    }
}

/// Maps a ζ-parametrized orbit to physical variables, `ξ = ζ · xi_per_zeta`.
pub fn reconstruct(orbit: &HeteroclinicOrbit, rs: &Rs) -> Result<ShockProfile> {
    let (left, right) = orbit.zeta_param.as_ref().ok_or_else(|| Error::InvalidParameter {
        name: "orbit",
        reason: "orbit has no reduced-time parametrization".into(),
    })?;
    let k = rs.xi_per_zeta();
    let to_sample = |p: &crate::phaseplane::OrbitPoint| ProfileSample {
        xi: p.zeta * k,
        x: p.x,
        y: p.y,
        state: state_at(rs, p.x, p.y),
    };
    let mut samples: Vec<ProfileSample> = left.iter().map(to_sample).collect();
    let split = samples.len();
    let skip = usize::from(!orbit.connection.is_jump());
    samples.extend(right.iter().skip(skip).map(to_sample));

    let jump = match orbit.connection {
        Connection::Jump { x_left, x_right, y_c, .. } => Some(JumpRecord {
            xi: 0.0,
            x_left,
            x_right,
            left: state_at(rs, x_left, y_c),
            right: state_at(rs, x_right, y_c),
        }),
        Connection::Continuous { .. } => None,
    };
    let mut profile = ShockProfile {
        samples,
        split,
        connection: orbit.connection,
        jump,
        spike: None,
        system: *rs,
    };
    profile.spike = detect_spike(&profile);
    Ok(profile)
}

/// Temperature spike; `None` for the Hamer model.
pub fn detect_spike(p: &ShockProfile) -> Option<SpikeInfo> {
    let shock = p.system.shock()?;
    let x_c = shock.x_c();
    let g = shock.gas.gamma;
    let bound = (g + 1.0) * (g + 1.0) * shock.frame_u_c * shock.frame_u_c / (4.0 * g * g * shock.gas.r);
    let present = x_c < 1.0;
    if !present {
        let last = p.samples.last()?;
        let (x_at_peak, theta_peak) = p
            .samples
            .iter()
            .map(|s| (s.x, s.state.theta))
            .fold((last.x, last.state.theta), |a, b| if b.1 > a.1 { b } else { a });
        return Some(SpikeInfo {
            present,
            location: None,
            theta_peak,
            x_at_peak,
            theta_max_bound: bound,
        });
    }
    // θ is concave in x with its maximum at x_c; after a jump the profile
    // starts at x_right, so the peak sits at the jump iff x_right >= x_c
    let (location, x_at_peak) = match p.jump {
        Some(j) if j.x_right >= x_c => (SpikeLocation::AtJump, j.x_right),
        _ => (SpikeLocation::SmoothInterior, x_c),
    };
    Some(SpikeInfo {
        present,
        location: Some(location),
        theta_peak: shock.theta_of_x(x_at_peak),
        x_at_peak,
        theta_max_bound: bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `max(r_n, r_m)` with `r_n = |dn/dξ - m| / scale_m` and
    /// `r_m = |dm/dξ - τ²(n - g)| / scale_source`.
    pub max_ode_residual: f64,
    pub residual_n: f64,
    pub residual_m: f64,
    /// `|m - σ_s f(U)|` with `f` rebuilt from `(ρ, U, θ)`, over `scale_m`.
    pub max_algebraic_residual: f64,
    /// Distance of the truncated end samples from `(∓1, ∓1)` in the reduced plane.
    pub asymptotic_gap: f64,
    /// `max |m|` over the profile (1 when it vanishes).
    pub scale_m: f64,
    /// `max |τ²(n - g)|` over the profile (1 when it vanishes).
    pub scale_source: f64,
    pub samples_checked: usize,
    /// `ξ` of the sample with the largest ODE residual.
    pub worst_xi: f64,
}

/// Derivative at `t[i]` of the Lagrange interpolant through `(t, f)`.
fn lagrange_derivative(t: &[f64], f: &[f64], i: usize) -> f64 {
    let ti = t[i];
    // the weights sum to zero; differencing against f[i] keeps constants exact
    let mut d = 0.0;
    for k in (0..t.len()).filter(|&k| k != i) {
        let num: f64 = (0..t.len()).filter(|&m| m != k && m != i).map(|m| ti - t[m]).product();
        let den: f64 = (0..t.len()).filter(|&m| m != k).map(|m| t[k] - t[m]).product();
        d += num / den * (f[k] - f[i]);
    }
    d
}

/// Checks the profile against the original system with 5-point centered
/// differences on each smooth side.
pub fn verify(p: &ShockProfile) -> Result<ResidualReport> {
    let rs = &p.system;
    for side in [p.left(), p.right()] {
        if side.len() < MIN_SAMPLES_PER_SIDE {
            return Err(Error::InsufficientSamples {
                got: side.len(),
                need: MIN_SAMPLES_PER_SIDE,
            });
        }
    }
    let t2 = tau_sq(rs);
    let source = |s: &ProfileSample| t2 * (s.state.n - rs.coupling_at(s.x));
    let nonzero = |v: f64| if v > 0.0 { v } else { 1.0 };
    let scale_m = nonzero(p.samples.iter().map(|s| s.state.m.abs()).fold(0.0, f64::max));
    let scale_source = nonzero(p.samples.iter().map(|s| source(s).abs()).fold(0.0, f64::max));

    let mut r_n: f64 = 0.0;
    let mut r_m: f64 = 0.0;
    let mut checked = 0;
    let mut worst_xi = 0.0;
    for side in [p.left(), p.right()] {
        let xi: Vec<f64> = side.iter().map(|s| s.xi).collect();
        let n: Vec<f64> = side.iter().map(|s| s.state.n).collect();
        let m: Vec<f64> = side.iter().map(|s| s.state.m).collect();
        for i in 2..side.len() - 2 {
            let w = i - 2..i + 3;
            let dn = lagrange_derivative(&xi[w.clone()], &n[w.clone()], 2);
            let dm = lagrange_derivative(&xi[w.clone()], &m[w], 2);
            let en = (dn - m[i]).abs() / scale_m;
            let em = (dm - source(&side[i])).abs() / scale_source;
            if en.max(em) > r_n.max(r_m) {
                worst_xi = xi[i];
            }
            // NaN must not be swallowed by max
            r_n = if en.is_nan() { f64::NAN } else { r_n.max(en) };
            r_m = if em.is_nan() { f64::NAN } else { r_m.max(em) };
            checked += 1;
        }
    }

    let alg = p
        .samples
        .iter()
        .map(|s| (s.state.m - direct_energy_flux(rs, s)).abs() / scale_m)
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });

    let first = p.samples[0];
    let last = p.samples[p.samples.len() - 1];
    let gap = [first.x + 1.0, first.y + 1.0, last.x - 1.0, last.y - 1.0]
        .iter()
        .fold(0.0, |a: f64, b| a.max(b.abs()));

    let worst = if r_n.is_nan() || r_m.is_nan() { f64::NAN } else { r_n.max(r_m) };
    Ok(ResidualReport {
        max_ode_residual: worst,
        residual_n: r_n,
        residual_m: r_m,
        max_algebraic_residual: alg,
        asymptotic_gap: gap,
        scale_m,
        scale_source,
        samples_checked: checked,
        worst_xi,
    })
}

/// `m` rebuilt from the sampled state without the closed-form `f`.
fn direct_energy_flux(rs: &Rs, s: &ProfileSample) -> f64 {
    match &rs.model {
        Model::RadHydro { shock, rad } => {
            let gas = &shock.gas;
            let frame_u = s.state.u - shock.c;
            let e = gas.r * s.state.theta / (gas.gamma - 1.0);
            let p = s.state.rho * gas.r * s.state.theta;
            let flux = s.state.rho * frame_u * (0.5 * frame_u * frame_u + e) + p * frame_u - shock.c_flux;
            rad.sigma_s * flux
        }
        Model::Hamer { u_minus, u_plus, .. } => {
            let u = s.state.u;
            let c = 0.5 * (u_minus + u_plus);
            0.5 * u * u - 0.5 * u_minus * u_minus - c * (u - u_minus)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpAdmissibility {
    /// `U_c < U_ℓ < 2 U_c`
    pub left_velocity_in_range: bool,
    /// `U_r = 2 U_c - U_ℓ` within `1e-10` relative
    pub symmetric: bool,
    /// `(U₊+U₋)/(U₊-U₋) < x_ℓ < 0`
    pub left_abscissa_in_range: bool,
}

impl JumpAdmissibility {
    pub fn all(&self) -> bool {
        self.left_velocity_in_range && self.symmetric && self.left_abscissa_in_range
    }
}

/// Entropy admissibility of the jump; `None` without a jump or for the Hamer model.
pub fn jump_admissibility(p: &ShockProfile) -> Option<JumpAdmissibility> {
    let j = p.jump?;
    let shock = p.system.shock()?;
    let uc = shock.frame_u_c;
    let ul = shock.frame_u_of_x(j.x_left);
    let ur = shock.frame_u_of_x(j.x_right);
    let bound = (shock.frame_u_plus + shock.frame_u_minus) / (shock.frame_u_plus - shock.frame_u_minus);
    Some(JumpAdmissibility {
        left_velocity_in_range: uc < ul && ul < 2.0 * uc,
        symmetric: (ur - (2.0 * uc - ul)).abs() <= 1e-10 * uc,
        left_abscissa_in_range: bound < j.x_left && j.x_left < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_weights_are_exact_on_quartics() {
        let t = [0.0, 0.1, 0.35, 0.4, 0.9];
        let f: Vec<f64> = t.iter().map(|&s| s * s * s * s - 2.0 * s + 1.0).collect();
        let d = lagrange_derivative(&t, &f, 2);
        let exact = 4.0 * 0.35f64.powi(3) - 2.0;
        assert!((d - exact).abs() < 1e-12);
    }
}
