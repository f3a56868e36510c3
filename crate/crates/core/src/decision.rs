use serde::Serialize;

/// Outcome of an exact yes/no check. `Fails` carries the certificate that
/// refutes the property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Decision<W> {
    Holds,
    Fails(W),
}

impl<W> Decision<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds)
    }

    pub fn failure(&self) -> Option<&W> {
        match self {
            Decision::Holds => None,
            Decision::Fails(w) => Some(w),
        }
    }

    pub fn into_failure(self) -> Option<W> {
        match self {
            Decision::Holds => None,
            Decision::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Holds => Decision::Holds,
            Decision::Fails(w) => Decision::Fails(f(w)),
        }
    }
}
