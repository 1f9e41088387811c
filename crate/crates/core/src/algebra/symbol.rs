use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A variable name. `n` and `k` are the distinguished recurrence and
/// summation variables; every other identifier is a free parameter.
#[derive(Clone, Eq)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn n() -> Self {
        Symbol::new("n")
    }

    pub fn k() -> Self {
        Symbol::new("k")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Ordering key: `n`, then `k`, then parameters alphabetically.
    fn rank(&self) -> (u8, &str) {
        match &*self.0 {
            "n" => (0, ""),
            "k" => (1, ""),
            other => (2, other),
        }
    }

    /// True for anything other than `n` and `k`.
    pub fn is_parameter(&self) -> bool {
        !matches!(&*self.0, "n" | "k")
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Symbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}
