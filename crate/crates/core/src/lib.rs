//! Skew group algebras of quivers: folding a group action on a quiver into
//! the quiver of the skew group algebra, with an explicit cross-check.

pub mod character;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod fp_poly;
pub mod gallery;
pub mod group;
pub mod io;
pub mod matrix;
pub mod mckay;
pub mod oracle;
pub mod orbit;
pub mod preprojective;
pub mod quiver;
pub mod random;
pub mod skew;
pub mod zoo;

pub use character::{CharacterTable, ClassFunction};
pub use cyclo::{CycloMatrix, CycloNumber};
pub use error::{Error, ErrorClass, Result};
pub use field::PrimeEmbedding;
pub use group::{FiniteGroup, Subgroup};
pub use io::{Instance, InstanceFile, ResultFile};
pub use mckay::{AffineType, McKayGraph, Sl2Subgroup};
pub use preprojective::{DoubleQuiver, DoubleStructure};
pub use quiver::{Arrow, LinearQuiverAction, Quiver, Violation};
pub use skew::{Folding, SkewQuiver, SkewVertex};
