//! Outcome of a verification run.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub location: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mismatch at {}: {} != {}", self.location, self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Number of individual comparisons that were made.
    pub checked: u64,
    pub first_failure: Option<Discrepancy>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            checked: 0,
            first_failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    /// Records one comparison; only the first failure is kept.
    pub fn compare<T: PartialEq + fmt::Display>(
        &mut self,
        location: impl FnOnce() -> String,
        left: &T,
        right: &T,
    ) -> bool {
        self.checked += 1;
        let ok = left == right;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(Discrepancy {
                location: location(),
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        ok
    }

    pub fn fail(&mut self, location: String, left: String, right: String) {
        self.checked += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(Discrepancy {
                location,
                left,
                right,
            });
        }
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_failure {
            None => write!(f, "{}: pass ({} comparisons)", self.name, self.checked),
            Some(d) => write!(f, "{}: FAIL after {} comparisons, {}", self.name, self.checked, d),
        }
    }
}
