//! Exact and asymptotic Cramér-Rao bounds for passive localization of a
//! radio transmitter by a cooperative network of sensors that measure
//! received signal strength and direction of arrival, together with Monte
//! Carlo validation against practical localizers (weighted centroid and
//! weighted Stansfield).
//!
//! The main entry points are:
//!
//! - [`scenario`]: transmitter/sensor geometry and random annulus placements;
//! - [`channel`]: the log-distance RSS model with correlated log-normal
//!   shadowing;
//! - [`doa`]: bearing-error variance models for an antenna array;
//! - [`fim`]: exact Fisher information matrices and the position error bound
//!   for a fixed scenario or averaged over random placements;
//! - [`asymptotic`]: closed-form large-network bounds, concentration
//!   bounds, and required-node-count queries;
//! - [`localizers`]: weighted centroid and weighted Stansfield estimators
//!   with Monte Carlo error evaluation;
//! - [`experiments`]: parameter sweeps producing CSV tables that pair bounds
//!   against estimators under common random numbers;
//! - [`config`]: the sectioned key=value config format and the scenario file
//!   format.

pub mod asymptotic;
pub mod channel;
pub mod config;
pub mod doa;
pub mod error;
pub mod experiments;
pub mod fim;
pub mod localizers;
pub mod scenario;

mod quad;
mod seed;

pub use channel::ChannelParams;
pub use doa::{ArrayParams, DoaModel};
pub use error::{Error, Result};
pub use fim::{BoundKind, CrbResult};
pub use scenario::{PlacementDistribution, Point2, Scenario, SensorNode};
