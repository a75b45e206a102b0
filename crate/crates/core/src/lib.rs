//! Planar functions over GF(3^n) and the commutative semifields they define.

pub mod error;
pub mod families;
pub mod field;
pub mod fixtures;
pub mod gf3;
pub mod isotopy;
pub mod planarfn;
pub mod search;
pub mod semifield;
pub mod equivalence;

pub use error::{Error, Result};
pub use field::{make_field, Fe, FieldCtx};
pub use planarfn::{cyclotomic_equivalent, BilinearSlices, PlanarFn, Term};
pub use semifield::{NucleiProfile, Presemifield, Semifield};
