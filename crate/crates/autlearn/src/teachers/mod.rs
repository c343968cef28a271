//! Self-verifying predicate teachers.
//!
//! Each teacher pairs a membership oracle with a hypothesis verifier built
//! from conjunctive queries over the hypothesis itself. The verifiers all
//! follow the same discipline: check that no illegal representation is
//! accepted, that acceptance is invariant under leading zeros, then the
//! base case, then the induction-step conjuncts in reversed order: wrong
//! acceptances must be rejected before further acceptances are forced, or
//! the induction would be built on incorrect strings. Every counterexample
//! handed back is confirmed against the membership oracle first.

mod adder;
mod eqfac;
mod eqrevfac;
mod linrep;
mod partial_sum;
mod period;

pub use adder::{adder_for, learn_adder, AdderTeacher};
pub use eqfac::{EqFacTeacher, MembershipMethod};
pub use eqrevfac::EqRevFacTeacher;
pub use linrep::{build_linear_rep, prefix_sum_rep, LinearRepresentation};
pub use partial_sum::{PartialSumTeacher, Summand};
pub use period::PeriodTeacher;

use crate::alphabet::Word;
use crate::dfa::{CompleteDfa, ProductMode};
use crate::numeration::TrackSystemSpec;
use crate::predicate::CompileOptions;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct TeacherOptions {
    /// Evaluate membership directly from the sequence below this bound;
    /// above it, fall back to automaton intersection or linear
    /// representations.
    pub direct_threshold: u64,
    pub compile: CompileOptions,
    pub membership: MembershipMethod,
}

impl Default for TeacherOptions {
    fn default() -> Self {
        Self {
            direct_threshold: 10_000_000,
            compile: CompileOptions::default(),
            membership: MembershipMethod::Auto,
        }
    }
}

/// Condition 1: the hypothesis must not accept any illegal representation.
/// Every digit string over the full tuple alphabet is considered, not only
/// system-valid ones. A witness is already a counterexample: the target
/// contains only valid words.
pub(crate) fn invalid_acceptance_witness(
    a: &CompleteDfa,
    spec: &TrackSystemSpec,
) -> Result<Option<Word>> {
    let validity = spec.validity_dfa();
    if validity.is_trivially_accept_all() {
        return Ok(None);
    }
    Ok(a.product(&validity, ProductMode::AndNot)?.shortest_accepted())
}

/// Condition 2: the initial state must loop on the all-zeros letter. If the
/// loop is missing but the rebased automaton is language-equivalent the
/// condition still holds; otherwise the distinguishing word decides which
/// of w and 0·w the hypothesis misjudges (the target is zero-invariant).
pub(crate) fn zero_loop_witness(
    a: &CompleteDfa,
    membership: impl Fn(&Word) -> bool,
) -> Result<Option<Word>> {
    let q0 = a.initial();
    let q1 = a.next(q0, 0);
    if q1 == q0 {
        return Ok(None);
    }
    match a.equivalent(&a.with_initial(q1))? {
        None => Ok(None),
        Some(w) => {
            let truth = membership(&w);
            if a.accepts(&w) != truth {
                Ok(Some(w))
            } else {
                let mut zw = vec![0];
                zw.extend(w);
                Ok(Some(zw))
            }
        }
    }
}

/// Resolves an induction-step witness: given the tuples on both sides of
/// the step, return the canonical word of one the hypothesis misjudges,
/// preferring the shorter word when both are wrong.
pub(crate) fn disambiguate(
    a: &CompleteDfa,
    spec: &TrackSystemSpec,
    membership: impl Fn(&[u64]) -> bool,
    small: &[u64],
    large: &[u64],
) -> Result<Word> {
    let w_small = spec.tuple_encode(small);
    let w_large = spec.tuple_encode(large);
    let small_wrong = a.accepts(&w_small) != membership(small);
    let large_wrong = a.accepts(&w_large) != membership(large);
    match (small_wrong, large_wrong) {
        (true, true) => Ok(if w_small.len() <= w_large.len() { w_small } else { w_large }),
        (true, false) => Ok(w_small),
        (false, true) => Ok(w_large),
        (false, false) => Err(Error::Contract(
            "induction-step witness yielded no counterexample".into(),
        )),
    }
}

/// Canonical counterexample for a tuple the hypothesis is known to
/// misjudge; errors if it does not actually misjudge it.
pub(crate) fn confirmed_cex(
    a: &CompleteDfa,
    spec: &TrackSystemSpec,
    membership: impl Fn(&[u64]) -> bool,
    tuple: &[u64],
) -> Result<Word> {
    let w = spec.tuple_encode(tuple);
    if a.accepts(&w) == membership(tuple) {
        return Err(Error::Contract(format!(
            "expected {tuple:?} to be a counterexample, but the hypothesis agrees"
        )));
    }
    Ok(w)
}

/// Guard shared by all verifiers.
pub(crate) fn expect_alphabet(a: &CompleteDfa, spec: &TrackSystemSpec) -> Result<()> {
    if *a.alphabet() != spec.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "hypothesis reads {:?}, teacher expects {:?}",
            a.alphabet().radices(),
            spec.alphabet().radices()
        )));
    }
    Ok(())
}
