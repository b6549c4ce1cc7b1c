use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The modulus is not a prime number.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// The modulus exceeds the size supported by the discrete-log tables.
    #[error("modulus {p} exceeds the supported maximum {max}")]
    ModulusTooLarge {
        /// offending modulus
        p: u64,
        /// largest supported modulus
        max: u64,
    },
    /// A character order that does not divide `p - 1`.
    #[error("character order {d} does not divide p - 1 = {order}")]
    OrderMismatch {
        /// requested order
        d: u64,
        /// size of the multiplicative group
        order: u64,
    },
    /// Two operands live in different fields.
    #[error("field mismatch: p = {0} vs p = {1}")]
    FieldMismatch(u64, u64),
    /// An element outside `[0, p - 1]`.
    #[error("element {x} is not a residue modulo {p}")]
    NotResidue {
        /// element
        x: u64,
        /// modulus
        p: u64,
    },
    /// The operation needs a nonempty set.
    #[error("{0}: empty set")]
    EmptySet(&'static str),
    /// Zero appears where the operation divides by set elements.
    #[error("{0}: 0 is in the set; remove it or use the zero-exclusion policy")]
    ZeroElement(&'static str),
    /// Work or memory guard exceeded.
    #[error("{what}: {value} exceeds the limit {limit}")]
    CostGuard {
        /// the guarded quantity
        what: &'static str,
        /// requested size
        value: u128,
        /// permitted maximum
        limit: u128,
    },
    /// Any other violated precondition.
    #[error("invalid input: {0}")]
    Invalid(&'static str),
}

/// Result alias for the core library.
pub type Result<T> = core::result::Result<T, Error>;
