//! Exact tiling generating functions for weighted halved and quartered
//! hexagons: region builders, matching enumerators, closed forms and a
//! Kuo-condensation harness.

pub mod formulas;
pub mod kuo;
pub mod lattice;
pub mod matchgen;
pub mod qlaurent;
pub mod regions;
pub mod weights;

pub use qlaurent::{LaurentPoly, LaurentQ, LaurentZ};
pub use regions::{build_region, Family, Region, RegionSpec};
pub use weights::WeightScheme;
