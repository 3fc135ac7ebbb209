use thiserror::Error;

/// A property that a theorem guarantees was found to fail on a concrete
/// instance. Seeing one of these means the input was not what the caller
/// claimed (for example an unverified context) or the implementation is wrong.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{claim} fails at {witness:?}")]
pub struct Violation {
    pub claim: String,
    pub witness: Vec<usize>,
}

impl Violation {
    pub fn new(claim: impl Into<String>, witness: impl Into<Vec<usize>>) -> Self {
        Violation { claim: claim.into(), witness: witness.into() }
    }
}

/// `Err(Violation)` unless `cond` holds.
pub(crate) fn ensure(cond: bool, claim: &str, witness: &[usize]) -> Result<(), Violation> {
    if cond {
        Ok(())
    } else {
        Err(Violation::new(claim, witness))
    }
}
