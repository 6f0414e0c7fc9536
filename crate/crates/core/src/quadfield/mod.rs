//! Imaginary quadratic fields: exact integers and quotients, prime splitting,
//! prime ideals and their residue fields.

mod field;
mod ideal;
pub mod primes;
mod quadint;
mod quadrat;
mod residue;

pub use field::FieldSpec;
pub use ideal::{
    enumerate_split_primes, ideal_norm, splitting_type, PrimeIdealData, SplittingType,
    SquareFreeIdeal,
};
pub use quadint::QuadInt;
pub use quadrat::QuadRat;
pub use residue::{reduce_scalar, ResidueElem, ResidueField};
