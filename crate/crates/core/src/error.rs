use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("the second subspace is not contained in the first")]
    NotSubspace,
    #[error("not a morphism: {violations} violated identities")]
    InvalidMorphism { violations: usize },
    #[error("twist map is not an endomorphism of the bracket: {violations} violated identities")]
    NotEndomorphism { violations: usize },
    #[error("coboundary image violates the compatibility constraint of degree {degree}")]
    ConstraintViolation { degree: usize },
    #[error("cochain is not in the compatible subspace of degree {degree}")]
    NotACochain { degree: usize },
    #[error("consecutive differentials do not compose to zero at degree {degree}")]
    NotAComplex { degree: usize },
    #[error("no sign convention satisfies delta^2 = 0 on the battery")]
    NoConvention,
    #[error("vanishing hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("input is not a cocycle in degree {degree}")]
    NotACocycle { degree: usize },
    #[error("deformation is not valid at order {order}")]
    InvalidDeformation { order: usize },
    #[error("order-{order} coefficient of {which} is not compatible with the twist")]
    IncompatibleCoefficient { which: &'static str, order: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
