//! Stability analysis of the heteroclinic network of the five-species
//! Rock-Scissors-Paper-Lizard-Spock Lotka–Volterra game.
//!
//! The crate covers the ODE model and its equilibria ([`model`]), the network
//! topology and elementary cycles ([`network`]), transition matrices along a
//! cycle ([`transition`]), stability indices and classification
//! ([`stability`]), numerical corroboration by direct integration
//! ([`simulate`]), parameter-plane sweeps ([`sweep`]) and a self-check of the
//! closed-form tables ([`verify`]).

pub mod error;
pub mod ext;
pub mod linalg;
pub mod margin;
pub mod model;
pub mod network;
pub mod simulate;
pub mod stability;
pub mod sweep;
pub mod transition;
pub mod verify;

pub use error::{Error, Result};
