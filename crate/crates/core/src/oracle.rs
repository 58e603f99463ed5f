//! Black-box transform oracles: a dimension tag plus a callable. The caller
//! asserts the map is a fully order preserving (or reversing) bijection on
//! its cone; audits over sampled pairs can refute that claim but never prove
//! it.

use crate::error::{Error, Result};

type Call<'a, T, U> = Box<dyn Fn(&T) -> Result<U> + Send + Sync + 'a>;

/// The lifetime allows wrappers that borrow an outer oracle (a recovery
/// session composes oracles freely without cloning black boxes).
pub struct Oracle<'a, T, U = T> {
    n: usize,
    call: Call<'a, T, U>,
}

impl<'a, T, U> Oracle<'a, T, U> {
    pub fn new(n: usize, call: impl Fn(&T) -> Result<U> + Send + Sync + 'a) -> Self {
        Oracle { n, call: Box::new(call) }
    }

    /// Oracle that never fails at the call boundary.
    pub fn infallible(n: usize, call: impl Fn(&T) -> U + Send + Sync + 'a) -> Self {
        Oracle { n, call: Box::new(move |x| Ok(call(x))) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn query(&self, input: &T) -> Result<U> {
        (self.call)(input).map_err(|e| match e {
            Error::Oracle(m) => Error::Oracle(m),
            other => Error::Oracle(other.to_string()),
        })
    }
}

impl<T, U> std::fmt::Debug for Oracle<'_, T, U> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Oracle(n = {})", self.n)
    }
}
