use thiserror::Error;

/// Library-wide error type. Variants that signal outcomes of a computation
/// (e.g. a search hitting its budget) are distinguished from misuse of the
/// API (bad parameters, mismatched objects).
#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} unsupported (need 2 <= n <= 16)")]
    UnsupportedDegree(u32),
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("modulus {modulus:#x} does not have degree {n}")]
    WrongModulusDegree { modulus: u32, n: u32 },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("field degree is odd, no index-2 subfield")]
    OddDegree,
    #[error("derivative direction must be nonzero")]
    ZeroDirection,
    #[error("multiplication by zero is not a permutation")]
    ZeroScalar,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("no primitive element makes {0} APN over this field")]
    NoApnRepresentative(&'static str),
    #[error("codes have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("permutation size {perm} does not match code length {code}")]
    SizeMismatch { perm: usize, code: usize },
    #[error("dual-distance cap {0} exceeds the supported maximum 8")]
    CapTooLarge(u32),
    #[error("code does not contain the first-order Reed-Muller subcode")]
    NotSupercode,
    #[error("code dimension {dim} exceeds 2n+1 = {max}")]
    TooBig { dim: usize, max: usize },
    #[error("codes are not equal, no affine witness exists")]
    NoWitness,
    #[error("code length {0} exceeds the automorphism-search limit 4096")]
    TooLong(usize),
    #[error("search budget of {0} s exhausted")]
    Timeout(u64),
    #[error("permutation degree {0} exceeds limit 64")]
    DegreeTooLarge(usize),
    #[error("group order {0} exceeds the enumeration limit 10^6")]
    GroupTooLarge(u128),
    #[error("given generators do not lie in the ambient group")]
    NotSubgroup,
    #[error("the delta automorphism is only constructed for s = 1")]
    DeltaRequiresS1,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
