//! Deterministic multi-layer (LEO/MEO/GEO) satellite network simulator for
//! telecommand delivery.

pub mod access;
pub mod engine;
pub mod error;
pub mod export;
pub mod metrics;
pub mod orbital;
pub mod schemes;
pub mod topology;
