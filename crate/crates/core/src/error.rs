//! Error type shared by the algebraic constructions.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CdgaError {
    #[error("ambient algebra mismatch: expected `{expected}`, found `{found}`")]
    AmbientMismatch { expected: String, found: String },

    #[error("operation requires a commutative algebra, got the quantized algebra `{0}`")]
    NeedCommutative(String),

    #[error("operation requires a quantized algebra, got the commutative algebra `{0}`")]
    NeedQuantized(String),

    #[error("`{map}` has no entry for generator `{gen}`")]
    MissingGenerator { map: String, gen: String },

    #[error("cannot invert `{0}`: not a unit monomial")]
    NotInvertible(String),

    #[error("negative power of non-invertible generator `{0}`")]
    NegativePower(String),

    #[error("derivation `{0}` must have odd total degree for the generator-level square check")]
    EvenDerivation(String),

    #[error("action is not a Lie algebra homomorphism: defect on bracket [{a}, {b}] at generator `{gen}`")]
    NotLieAction { a: String, b: String, gen: String },

    #[error("equivariance failure of `{map}` at generator `{gen}`")]
    Equivariance { map: String, gen: String },

    #[error("differentials do not compose to zero at degree {0}")]
    NotAComplex(i32),

    #[error("Lie action not expressible in the tangent frame: defect at generator `{0}`")]
    FrameExpansion(String),

    #[error("simplicial index {i} out of range 0..={n}")]
    SlotRange { i: usize, n: usize },

    #[error("graph morphism invalid: {0}")]
    BadMorphism(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CdgaError>;
