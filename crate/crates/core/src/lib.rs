//! Exact g-vector fans of finite-type cluster algebras, their type cones, and
//! all of their polytopal realizations.
//!
//! The pipeline runs in exact rational arithmetic throughout:
//!
//! * [`clusterfan`] mutates seeds and enumerates the g-vector fan from any
//!   initial seed, with a polygon-triangulation oracle for type A.
//! * [`typecone`] computes wall dependencies, the type cone and its facets,
//!   checks the unique exchange relation property and builds `Q_c` polytopes.
//! * [`arquiver`] knits Auslander–Reiten quivers of Dynkin quivers and derives
//!   the mesh-equation (ABHY) description of the same polytopes.
//! * [`exchange`] cross-checks type-cone facets against relative AR meshes and
//!   verifies the wall-crossing structure of the exchange graph.
//! * [`polyhedra`] provides the polyhedral primitives, generic over any
//!   [`ExactField`]; [`io`] holds the file formats.

pub mod arquiver;
pub mod clusterfan;
pub mod exchange;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod scalar;
pub mod typecone;

pub use scalar::ExactField;

/// Default exact scalar.
pub type Rat = num_rational::BigRational;
pub type RatVec = Vec<Rat>;
pub type RatMat = linalg::Matrix<Rat>;
pub type RatHPolytope = polyhedra::HPolytope<Rat>;
pub type RatVPolytope = polyhedra::VPolytope<Rat>;
