//! Exact weight combinatorics for unitarizable highest-weight supermodules of
//! sl(m|n): root data, unitarity regions, atypicality, characters,
//! Duflo–Serganova twists, Witten indices and the su(1,1|1) oscillator model.

pub mod atypicality;
pub mod characters;
pub mod cli;
pub mod dstwist;
pub mod error;
pub mod indices;
pub mod linalg;
pub mod oscillator;
pub mod rational;
pub mod rootdata;
pub mod unitarity;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Q;
pub use rootdata::{Parity, Root, RootDatum};
pub use weights::Weight;
