//! Error type shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong when building fields, evaluating series or
/// running verification scans.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("p = {0} must be an odd prime")]
    NotAnOddPrime(u64),
    #[error("q = {p}^{r} = {q} exceeds the field size budget {budget}")]
    FieldTooLarge { p: u64, r: u32, q: u64, budget: u64 },
    #[error("no prime l = 1 (mod {modulus}) found below 2^{bound_log2}")]
    PrimeSearchExhausted { modulus: u64, bound_log2: u32 },
    #[error("p = {p} and m = {m} must be coprime")]
    NotCoprime { p: u64, m: u64 },
    #[error("n = {n} does not divide p*(q-1) = {pm}")]
    RootOrder { n: u64, pm: u64 },
    #[error("values from different backends are not comparable")]
    BackendMismatch,
    #[error("discrete logarithm of zero is undefined")]
    ZeroLog,
    #[error("character {0} does not exist for this field (order does not divide q-1)")]
    MissingCharacter(&'static str),
    #[error("character T^{k} is not a square (odd dual exponent)")]
    NonSquareCharacter { k: u32 },
    #[error("series arity mismatch: {0}")]
    Arity(String),
    #[error("division by a zero value")]
    DivisionByZero,
    #[error("binomial table unavailable for q = {q} (limit q <= {limit}); use a smaller field")]
    BinomTableTooLarge { q: u32, limit: u32 },
    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
    #[error("identity {id} requires q = {want} (mod {modulus}), got q = {q}")]
    CongruenceViolated {
        id: String,
        modulus: u32,
        want: String,
        q: u32,
    },
    #[error("identity {0} is a transformation, not a special value")]
    NotAValueIdentity(String),
    #[error("exhaustive scan of {id} needs ~{cost} series evaluations, over the budget {budget}; use a random strategy")]
    BudgetExceeded { id: String, cost: u64, budget: u64 },
    #[error("invalid run configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
