//! Per-flight greenhouse-gas emissions for U.S. domestic flights.
//!
//! Flight records are linked to an airframe, a seat count and an ICAO
//! engine, then costed with the ICAO landing and take-off cycle and a
//! tabulated cruise, climb and descent profile. Results roll up by carrier,
//! airport, route, airframe and engine.
//!
//! The pieces are usable on their own:
//!
//! ```
//! use aeroemit::emissions::{co2e, Co2eFactors};
//! use aeroemit::GasVector;
//!
//! let v = GasVector::new(0.0, 100.0, 0.0, 0.0);
//! assert_eq!(co2e(&v, &Co2eFactors::default()), 100.0);
//! ```

pub mod aggregate;
pub mod config;
pub mod emissions;
mod gas;
pub mod ingest;
pub mod matching;
pub mod pipeline;
pub mod synthetic;

pub use gas::{Gas, GasVector};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data-model.md")]
    mod data_model {}
    #[doc = include_str!("../../../book/src/matching.md")]
    mod matching {}
    #[doc = include_str!("../../../book/src/lto.md")]
    mod lto {}
    #[doc = include_str!("../../../book/src/ccd.md")]
    mod ccd {}
    #[doc = include_str!("../../../book/src/co2e.md")]
    mod co2e {}
    #[doc = include_str!("../../../book/src/aggregation.md")]
    mod aggregation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
