//! Radiative shock profiles for hyperbolic-elliptic coupled systems.
//!
//! The numerical core (`ode`, `roots`) and the closed-form layers (`gas`,
//! `reduction`) are generic over [`Real`]; the phase-plane solver and the
//! profile reconstruction work in `f64`.

pub mod error;
pub mod gas;
pub mod ode;
pub mod phaseplane;
pub mod profile;
pub mod reduction;
pub mod roots;
pub mod scalar;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Real;

pub type GasParams = gas::GasParams<f64>;
pub type RadiationParams = gas::RadiationParams<f64>;
pub type ShockData = gas::ShockData<f64>;
pub type ReducedSystem = reduction::ReducedSystem<f64>;
pub type RegimeReport = reduction::RegimeReport<f64>;
pub type HeteroclinicOrbit = phaseplane::HeteroclinicOrbit;
pub type ShockProfile = profile::ShockProfile;
pub type SpikeInfo = profile::SpikeInfo;
pub type ResidualReport = profile::ResidualReport;
