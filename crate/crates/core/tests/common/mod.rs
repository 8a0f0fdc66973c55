#![allow(dead_code)]

use radshock::gas::{build_shock, GasParams, RadiationParams};
use radshock::reduction::{reduce_hamer, reduce_radhydro};
use radshock::ReducedSystem;

/// Reduced system of the numerical experiments: γ = 5/3, R = 8.31,
/// σ = σ_s = τ = 1, α = 2, ρ₋ = 0.1, c = 0.
pub fn radhydro(u_c: f64, delta: f64) -> ReducedSystem {
    radhydro_gamma(5.0 / 3.0, u_c, delta)
}

pub fn radhydro_gamma(gamma: f64, u_c: f64, delta: f64) -> ReducedSystem {
    let gas = GasParams::new(gamma, 8.31).unwrap();
    let shock = build_shock(gas, 0.1, u_c, delta, 0.0).unwrap();
    reduce_radhydro(shock, RadiationParams::new(1.0, 1.0, 1.0, 2.0).unwrap()).unwrap()
}

/// Hamer model with symmetric states `u± = ∓jump/2`.
pub fn hamer(jump: f64, alpha: u32) -> ReducedSystem {
    reduce_hamer(jump / 2.0, -jump / 2.0, 1.0, alpha).unwrap()
}

pub fn hamer_states(u_minus: f64, u_plus: f64, alpha: u32) -> ReducedSystem {
    reduce_hamer(u_minus, u_plus, 1.0, alpha).unwrap()
}
