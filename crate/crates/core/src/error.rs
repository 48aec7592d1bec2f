use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("invertibility of generator {generator} undecided within coefficient bound {bound}")]
    MembershipUndecidedWithinBound { generator: usize, bound: u64 },
    #[error("hom-set is infinite (source has free rank {source_rank}, target has free rank {target_rank})")]
    InfiniteHomSet { source_rank: usize, target_rank: usize },
    #[error("too many generators for face enumeration: {count} > {max}")]
    TooManyGenerators { count: usize, max: usize },
    #[error("expected an affine monoid")]
    NotAffine,
    #[error("torsion cannot be embedded in an affine lattice monoid")]
    TorsionInAffine,
    #[error("counting function is not a polynomial: unit group has torsion {0:?}")]
    TorsionNotPolynomial(Vec<u64>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("theta is not a homomorphism at ({0}, {1})")]
    ThetaNotHomomorphism(String, String),
    #[error("cocycle invalid: {0}")]
    CocycleInvalid(String),
    #[error("group axioms failed: {0}")]
    AxiomsFailed(String),
    #[error("{what} = {value} exceeds desk-scale bound {max}")]
    OutOfScale { what: String, value: u64, max: u64 },
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("parabolic Weyl group is not a subgroup of the ambient Weyl group")]
    NotASubgroup,
    #[error("parabolic type {0:?} is not of shape (k, n-k)")]
    TypeNotMaximal(Vec<usize>),
    #[error("polynomial division left a nonzero remainder")]
    NonDivisible,
    #[error("the zero polynomial has no vanishing order")]
    ZeroPolynomial,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}
