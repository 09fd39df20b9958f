use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeModulus(BigInt),
    #[error("zero input")]
    ZeroInput,
    #[error("{a} is not a unit modulo {p}")]
    NotAUnit { a: BigInt, p: BigInt },
    #[error("factorization incomplete, unfactored cofactor {cofactor}")]
    FactorizationIncomplete { cofactor: BigInt },
    #[error("singular model (discriminant zero)")]
    SingularCurve,
    #[error("scaling factor u must be nonzero")]
    ZeroScaling,
    #[error("{0} is not squarefree")]
    NotSquarefree(BigInt),
    #[error("no row of the 2-adic table matches triple {triple}")]
    TableMiss { triple: String },
    #[error("2-adic table row condition references an undefined quantity: {0}")]
    TableUndefined(String),
    #[error("no model with 3 not dividing v(c) found within the search bound")]
    ModelSearchExhausted,
    #[error("unsupported local case at p={p}, e={e}, f={f}: {reason}")]
    UnsupportedLocalCase { p: BigInt, e: u32, f: u32, reason: String },
    #[error("splitting data unavailable above {p}: {reason}")]
    UnsupportedSplitting { p: BigInt, reason: String },
    #[error("curve is not semistable (additive at {0})")]
    NotSemistable(BigInt),
    #[error("curve has bad reduction at {0}")]
    BadReductionAtP(BigInt),
    #[error("{m} is not {p}-th power free")]
    NotPowerFree { m: BigInt, p: u32 },
    #[error("representation conductor coprimality to N_E not attested")]
    ConductorClash,
    #[error("representation is not self-dual")]
    NotSelfDual,
    #[error("multiplicity vectors belong to different groups")]
    GroupMismatch,
    #[error("unsupported group {0}")]
    UnsupportedGroup(String),
    #[error("required attestation missing: {0}")]
    AttestationMissing(String),
    #[error("theorem needs w(E/Q) = -1")]
    WrongSign,
    #[error("j-invariant is not integral at {0}")]
    NotPotentiallyGood(BigInt),
    #[error("group has a nontrivial linear character of order 2")]
    QuadraticSubfieldPresent,
    #[error("residue {0} mod 15 is not coprime to 15")]
    BadResidue(i64),
    #[error("N_E and 2*Delta_F are not coprime")]
    CoprimalityViolated,
    #[error("inconsistent input: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
