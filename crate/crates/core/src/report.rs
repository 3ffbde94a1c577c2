//! Verification reports: per-condition verdicts with counterexample witnesses.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::field::Field;
use crate::linalg::Vector;

pub const DEFAULT_WITNESS_CAP: usize = 16;

static WITNESS_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_WITNESS_CAP);
static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Maximum number of witnesses recorded per condition (process-wide).
pub fn witness_cap() -> usize {
    WITNESS_CAP.load(Ordering::Relaxed)
}

pub fn set_witness_cap(cap: usize) {
    WITNESS_CAP.store(cap, Ordering::Relaxed);
}

/// Whether tuple loops fan out over the rayon pool. Results do not depend on it.
pub fn parallel() -> bool {
    PARALLEL.load(Ordering::Relaxed)
}

pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

/// A failing argument tuple. Each argument is a sum of basis vectors, usually one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<Vec<usize>>,
    pub args: Vec<String>,
    pub lhs: Vector,
    pub rhs: Vector,
}

impl Witness {
    pub fn new(indices: Vec<Vec<usize>>, args: Vec<String>, lhs: Vector, rhs: Vector) -> Witness {
        Witness { indices, args, lhs, rhs }
    }

    /// Witness whose arguments are single basis vectors.
    pub fn basis(indices: &[usize], args: Vec<String>, lhs: Vector, rhs: Vector) -> Witness {
        Witness {
            indices: indices.iter().map(|&i| vec![i]).collect(),
            args,
            lhs,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub condition_id: String,
    pub passed: bool,
    /// False when the evaluated form differs from the printed one (see `note`).
    pub as_printed: bool,
    pub note: Option<String>,
    /// Total number of failing tuples; `witnesses` holds at most the cap.
    pub failures: usize,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn pass(id: impl Into<String>) -> Check {
        Check {
            condition_id: id.into(),
            passed: true,
            as_printed: true,
            note: None,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn from_witnesses(id: impl Into<String>, failures: usize, mut witnesses: Vec<Witness>) -> Check {
        witnesses.sort_by(|a, b| a.indices.cmp(&b.indices));
        witnesses.truncate(witness_cap());
        Check {
            condition_id: id.into(),
            passed: failures == 0,
            as_printed: true,
            note: None,
            failures,
            witnesses,
        }
    }

    pub fn with_repair(mut self, note: Option<&str>) -> Check {
        if let Some(n) = note {
            self.as_printed = false;
            self.note = Some(n.to_string());
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> VerificationReport {
        VerificationReport { checks }
    }

    /// Conjunction of all checks; true for an empty report.
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.condition_id == id)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.condition_id.as_str()).collect()
    }
}

/// Result of evaluating a printed condition list next to the canonical direct check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualReport {
    pub printed: VerificationReport,
    pub direct: VerificationReport,
}

impl DualReport {
    pub fn printed_verdict(&self) -> bool {
        self.printed.overall()
    }

    pub fn direct_verdict(&self) -> bool {
        self.direct.overall()
    }

    pub fn agrees(&self) -> bool {
        self.printed_verdict() == self.direct_verdict()
    }

    /// Printed condition by id; panics on an unknown id.
    pub fn get_printed(&self, id: &str) -> &Check {
        self.printed.get(id).unwrap_or_else(|| panic!("no printed condition {id}"))
    }

    /// Record comparing the two verdicts.
    pub fn agreement(&self, field: Field) -> Check {
        let mut c = Check::pass("printed_vs_direct");
        c.passed = self.agrees();
        if !c.passed {
            let bit = |b: bool| Vector::from_i64(field, &[i64::from(b)]);
            c.failures = 1;
            c.witnesses = vec![Witness::new(vec![], vec![], bit(self.printed_verdict()), bit(self.direct_verdict()))];
            c.note = Some(format!(
                "printed list says {}, direct check says {}; failing: {}",
                self.printed_verdict(),
                self.direct_verdict(),
                self.printed.failing_ids().join(",")
            ));
        }
        c
    }

    /// Flattened view: printed conditions, then direct checks.
    pub fn to_report(&self) -> VerificationReport {
        let mut checks = self.printed.checks.clone();
        checks.extend(self.direct.checks.iter().cloned());
        VerificationReport { checks }
    }
}

/// Calls `f` on every tuple in `dims[0] x dims[1] x ...` in lexicographic order.
pub fn for_each_tuple(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut t = vec![0usize; dims.len()];
    loop {
        f(&t);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < dims[k] {
                break;
            }
            t[k] = 0;
        }
    }
}

/// Evaluates `eval` over all tuples and gathers the failures deterministically.
///
/// `eval` returns `Some(witness)` for a failing tuple. The kept witnesses are the
/// lexicographically first ones whatever the parallel setting.
pub fn check_tuples<F>(id: &str, dims: &[usize], eval: F) -> Check
where
    F: Fn(&[usize]) -> Option<Witness> + Sync,
{
    let cap = witness_cap();
    let scan = |first: usize| -> (usize, Vec<Witness>) {
        let mut failures = 0;
        let mut found = Vec::new();
        let mut t = Vec::with_capacity(dims.len());
        for_each_tuple(&dims[1..], |rest| {
            t.clear();
            t.push(first);
            t.extend_from_slice(rest);
            if let Some(w) = eval(&t) {
                failures += 1;
                if found.len() < cap {
                    found.push(w);
                }
            }
        });
        (failures, found)
    };
    let Some(&d0) = dims.first() else {
        return Check::pass(id);
    };
    let parts: Vec<(usize, Vec<Witness>)> = if parallel() && d0 > 1 {
        (0..d0).into_par_iter().map(scan).collect()
    } else {
        (0..d0).map(scan).collect()
    };
    let failures = parts.iter().map(|p| p.0).sum();
    let witnesses = parts.into_iter().flat_map(|p| p.1).collect();
    Check::from_witnesses(id, failures, witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_in_lexicographic_order() {
        let mut seen = Vec::new();
        for_each_tuple(&[2, 3], |t| seen.push(t.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 0]);
        assert_eq!(seen[5], vec![1, 2]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn empty_report_passes() {
        assert!(VerificationReport::default().overall());
    }

    #[test]
    fn witness_cap_and_order_independent_of_parallelism() {
        let f = Field::Rational;
        let eval = |t: &[usize]| {
            (t.iter().sum::<usize>() % 2 == 0).then(|| {
                Witness::basis(t, t.iter().map(|i| format!("e{}", i + 1)).collect(), Vector::zero(f, 1), Vector::zero(f, 1))
            })
        };
        set_parallel(false);
        let a = check_tuples("x", &[6, 6, 6], eval);
        set_parallel(true);
        let b = check_tuples("x", &[6, 6, 6], eval);
        assert_eq!(a, b);
        assert_eq!(a.failures, 108);
        assert_eq!(a.witnesses.len(), DEFAULT_WITNESS_CAP);
        assert_eq!(a.witnesses[0].indices, vec![vec![0], vec![0], vec![0]]);
        assert!(!a.passed);
    }
}
