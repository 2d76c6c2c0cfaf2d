//! Discrete Morse chain complexes over Z2, mapping-cone models of monodromy
//! over a circle, and filtered Seidel-type maps over a ring of finite
//! `T`-power sums, with checkers for every identity the monodromy argument
//! consumes.

pub mod cli;
pub mod complexes;
pub mod f2;
pub mod format;
pub mod hofer;
pub mod models;
pub mod morse;
pub mod omega;
pub mod random;
pub mod seidel;
pub mod synthetic;
pub mod wang;
