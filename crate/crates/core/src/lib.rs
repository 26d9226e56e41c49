//! Exact finite geometry over `F_{q^t}`: field reduction and linear sets,
//! canonical subgeometries and their projections, classical Singer
//! difference sets, and the checks built on top of them.

pub mod diffsets;
pub mod equiv;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod projgeom;
pub mod reduction;
pub mod report;
pub mod scenario;
pub mod subgeom;

pub use error::{Error, Result};
pub use gf::{theta, Elem, FieldCtx};
pub use linalg::Matrix;
pub use projgeom::{PointIndex, PointMap, ProjPoint, ProjSpace, ProjSubspace, Scalars, SemilinearMap};
pub use reduction::{LinearSet, LinearSetKind, ReductionCtx};
pub use subgeom::{Perm, Subgeometry};
pub use diffsets::{DifferenceSet, FieldModel};
pub use equiv::{ConditionA, OrbitRoute};
pub use report::{Check, Report, Status};
