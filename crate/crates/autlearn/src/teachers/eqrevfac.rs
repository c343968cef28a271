//! Teacher for reversed-factor equality: eqrevfac(i, j, n) holds iff
//! X[i..i+n-1] equals the reversal of X[j..j+n-1]. With i = j this decides
//! whether a factor is a palindrome.
//!
//! The induction steps i forward while n shrinks:
//! A[i,j,n+1] ⟺ A[i+1,j,n] ∧ X[i] = X[j+n].

use crate::alphabet::{Letter, Word};
use crate::dfa::CompleteDfa;
use crate::lstar::{HypothesisVerifier, MembershipOracle, Verdict};
use crate::numeration::{incr_relation, TrackSystemSpec};
use crate::predicate::{witness, ConjunctiveQuery, Literal};
use crate::sequence::{SequenceDfao, ValueMode};
use crate::Result;

use super::{
    confirmed_cex, disambiguate, expect_alphabet, invalid_acceptance_witness, zero_loop_witness,
    TeacherOptions,
};

pub struct EqRevFacTeacher {
    x: SequenceDfao,
    /// (i, j, n)
    spec: TrackSystemSpec,
    /// (i, j, n, q, s) with q = n+1 and s = i+1
    spec5: TrackSystemSpec,
    /// (i, j, n, q, s, v) adding v = j+n
    spec6: TrackSystemSpec,
    adder: CompleteDfa,
    incr: CompleteDfa,
    value_eq: CompleteDfa,
    value_neq: CompleteDfa,
    opts: TeacherOptions,
}

impl EqRevFacTeacher {
    pub fn new(x: SequenceDfao, adder: CompleteDfa, opts: TeacherOptions) -> Result<Self> {
        let system = x.system().clone();
        let spec = TrackSystemSpec::uniform(system.clone(), 3)?;
        let spec5 = TrackSystemSpec::uniform(system.clone(), 5)?;
        let spec6 = TrackSystemSpec::uniform(system.clone(), 6)?;
        let incr = incr_relation(&system);
        let value_eq = x.value_relation(&x, ValueMode::Eq)?;
        let value_neq = x.value_relation(&x, ValueMode::Neq)?;
        Ok(Self { x, spec, spec5, spec6, adder, incr, value_eq, value_neq, opts })
    }

    pub fn spec(&self) -> &TrackSystemSpec {
        &self.spec
    }

    pub fn membership(&self, i: u64, j: u64, n: u64) -> bool {
        let end = i.checked_add(n).and(j.checked_add(n));
        assert!(end.is_some(), "factor positions exceed the supported range");
        (0..n).all(|t| self.x.eval(i + t) == self.x.eval(j + n - 1 - t))
    }

    fn const1(&self, n: u64) -> CompleteDfa {
        TrackSystemSpec::uniform(self.x.system().clone(), 1)
            .expect("one track")
            .const_automaton(0, n)
    }

    fn check_base(&self, a: &CompleteDfa) -> Result<Option<Word>> {
        let q = ConjunctiveQuery::new(self.spec.clone())
            .with(Literal::pos(self.const1(0), [2usize]))
            .with(Literal::neg(a.clone(), [0usize, 1, 2]));
        match witness(&q, &self.opts.compile)? {
            None => Ok(None),
            Some(w) => Ok(Some(confirmed_cex(
                a,
                &self.spec,
                |t| self.membership(t[0], t[1], t[2]),
                &w.values,
            )?)),
        }
    }

    /// Existential rewrites of the induction step, reversed order. Each
    /// returns the values of (i, j, n, q), with q = n+1.
    fn step_checks(&self, a: &CompleteDfa) -> Vec<ConjunctiveQuery> {
        vec![
            // (q=n+1) ∧ (v=j+n) ∧ X[i]≠X[v] ∧ A[i,j,q]   over (i,j,n,q,v)
            ConjunctiveQuery::new(self.spec5.clone())
                .with(Literal::pos(self.incr.clone(), [2usize, 3]))
                .with(Literal::pos(self.adder.clone(), [1usize, 2, 4]))
                .with(Literal::pos(self.value_neq.clone(), [0usize, 4]))
                .with(Literal::pos(a.clone(), [0usize, 1, 3])),
            // (q=n+1) ∧ (s=i+1) ∧ (v=j+n) ∧ ¬A[i,j,q] ∧ A[s,j,n] ∧ X[i]=X[v]
            ConjunctiveQuery::new(self.spec6.clone())
                .with(Literal::pos(self.incr.clone(), [2usize, 3]))
                .with(Literal::pos(self.incr.clone(), [0usize, 4]))
                .with(Literal::pos(self.adder.clone(), [1usize, 2, 5]))
                .with(Literal::neg(a.clone(), [0usize, 1, 3]))
                .with(Literal::pos(a.clone(), [4usize, 1, 2]))
                .with(Literal::pos(self.value_eq.clone(), [0usize, 5])),
            // (q=n+1) ∧ (s=i+1) ∧ ¬A[s,j,n] ∧ A[i,j,q]   over (i,j,n,q,s)
            ConjunctiveQuery::new(self.spec5.clone())
                .with(Literal::pos(self.incr.clone(), [2usize, 3]))
                .with(Literal::pos(self.incr.clone(), [0usize, 4]))
                .with(Literal::neg(a.clone(), [4usize, 1, 2]))
                .with(Literal::pos(a.clone(), [0usize, 1, 3])),
        ]
    }
}

impl MembershipOracle for EqRevFacTeacher {
    fn query(&self, word: &[Letter]) -> bool {
        if !self.spec.is_valid(word) {
            return false;
        }
        match self.spec.tuple_decode(word) {
            Ok(v) => self.membership(v[0], v[1], v[2]),
            Err(_) => false,
        }
    }
}

impl HypothesisVerifier for EqRevFacTeacher {
    fn verify(&self, a: &CompleteDfa) -> Result<Verdict> {
        expect_alphabet(a, &self.spec)?;
        if let Some(w) = invalid_acceptance_witness(a, &self.spec)? {
            return Ok(Verdict::Counterexample(w));
        }
        if let Some(w) = zero_loop_witness(a, |w: &Word| self.query(w))? {
            return Ok(Verdict::Counterexample(w));
        }
        if let Some(w) = self.check_base(a)? {
            return Ok(Verdict::Counterexample(w));
        }
        for q in self.step_checks(a) {
            if let Some(w) = witness(&q, &self.opts.compile)? {
                let (i, j, n, t) = (w.values[0], w.values[1], w.values[2], w.values[3]);
                // either A[i+1,j,n] or A[i,j,n+1] is wrong
                let cex = disambiguate(
                    a,
                    &self.spec,
                    |v| self.membership(v[0], v[1], v[2]),
                    &[i + 1, j, n],
                    &[i, j, t],
                )?;
                return Ok(Verdict::Counterexample(cex));
            }
        }
        Ok(Verdict::Correct)
    }
}
