//! Exact computations with twisted group algebras, cotensor products of
//! group-graded comodule algebras, double-coset fusion rules and the
//! Brauer-Picard group of `Rep(G)` for finite abelian `G`.

pub mod brpic;
pub mod cocycles;
pub mod comodalg;
pub mod cyclotomic;
pub mod duality;
pub mod fusion;
pub mod groups;
pub mod io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] groups::GroupError),
    #[error(transparent)]
    Cocycle(#[from] cocycles::CocycleError),
    #[error(transparent)]
    Algebra(#[from] comodalg::AlgebraError),
    #[error(transparent)]
    BrPic(#[from] brpic::BrPicError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
