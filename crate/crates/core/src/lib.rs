//! Exact symbolic algebra for the canonical phase spaces of gauge theories
//! on directed graphs.
//!
//! The crate builds, over the scalar ring `Q[hbar]`:
//!
//! - bigraded commutative algebras with Koszul signs, derivations and
//!   graded algebra maps ([`algebra`], [`derivation`]);
//! - commutative Hopf algebras (tori and SL2) with Sweedler calculus, their
//!   Lie algebras of counit-derivations, and the derived actions and
//!   coactions ([`hopf`]);
//! - Chevalley-Eilenberg resolutions of quotient constructions as
//!   cosimplicial stacky CDGAs with coface/codegeneracy maps ([`ce`]);
//! - symplectic-reduction chain algebras, moment maps, and the unshifted
//!   Poisson brackets on every cosimplicial level ([`poisson`]);
//! - noncommutative algebras of differential operators quantizing those
//!   brackets, quantized module triples `(V, nabla, Psi)` and their
//!   validation ([`quantize`]);
//! - the directed-graph category, gauge phase spaces, pushforwards and
//!   prefactorization operations ([`graph`]);
//! - homology of finite free complexes over `Q` and `Q[hbar]` by Smith
//!   normal form ([`homology`]).
//!
//! Everything is exact: no floating point is used anywhere.

pub mod algebra;
pub mod ce;
pub mod derivation;
pub mod error;
pub mod grading;
pub mod graph;
pub mod homology;
pub mod hopf;
pub mod json;
pub mod phase;
pub mod poisson;
pub mod quantize;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod suites;
pub mod summary;
pub mod symbol;
pub mod tensor;

pub use algebra::{Algebra, Element, Monomial};
pub use error::{CdgaError, Result};
pub use grading::Bidegree;
pub use scalar::{Rat, Scalar};
pub use symbol::{Block, GenId, GenInfo, GenKey, Tag};
