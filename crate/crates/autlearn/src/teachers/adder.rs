//! Teacher for the addition relation of a numeration system. Membership is
//! plain arithmetic; a hypothesis A is correct iff (besides validity and
//! leading-zero invariance) A[0,y,z] ⟺ y=z and
//! (incr(x,t) ∧ incr(z,u)) ⟹ (A[x,y,z] ⟺ A[t,y,u]), an induction on x.
//! This is what makes exotic (Pisot) adders constructible from the ground
//! up rather than guessed.

use crate::alphabet::{Letter, Word};
use crate::dfa::CompleteDfa;
use crate::lstar::{learn, HypothesisVerifier, LearnOptions, MembershipOracle, RunStats, Verdict};
use crate::numeration::{
    base_adder, eq_relation, incr_relation, NumerationSystem, SystemKind, TrackSystemSpec,
};
use crate::predicate::{witness, ConjunctiveQuery, Literal};
use crate::Result;

use super::{
    confirmed_cex, disambiguate, expect_alphabet, invalid_acceptance_witness, zero_loop_witness,
    TeacherOptions,
};

pub struct AdderTeacher {
    /// (x, y, z)
    spec: TrackSystemSpec,
    /// (x, y, z, t, u)
    spec5: TrackSystemSpec,
    incr: CompleteDfa,
    eq: CompleteDfa,
    opts: TeacherOptions,
}

impl AdderTeacher {
    pub fn new(system: NumerationSystem, opts: TeacherOptions) -> Result<Self> {
        let spec = TrackSystemSpec::uniform(system.clone(), 3)?;
        let spec5 = TrackSystemSpec::uniform(system.clone(), 5)?;
        let incr = incr_relation(&system);
        let eq = eq_relation(system.radix());
        Ok(Self { spec, spec5, incr, eq, opts })
    }

    pub fn spec(&self) -> &TrackSystemSpec {
        &self.spec
    }

    pub fn membership(&self, x: u64, y: u64, z: u64) -> bool {
        x.checked_add(y) == Some(z)
    }

    fn const1(&self, n: u64) -> CompleteDfa {
        TrackSystemSpec::uniform(self.spec.system(0).clone(), 1)
            .expect("one track")
            .const_automaton(0, n)
    }

    fn check_base(&self, a: &CompleteDfa) -> Result<Option<Word>> {
        let memb = |t: &[u64]| self.membership(t[0], t[1], t[2]);
        // wrong acceptances first: (x=0) ∧ y≠z ∧ A[x,y,z]
        let over = ConjunctiveQuery::new(self.spec.clone())
            .with(Literal::pos(self.const1(0), [0usize]))
            .with(Literal::neg(self.eq.clone(), [1usize, 2]))
            .with(Literal::pos(a.clone(), [0usize, 1, 2]));
        if let Some(w) = witness(&over, &self.opts.compile)? {
            return Ok(Some(confirmed_cex(a, &self.spec, memb, &w.values)?));
        }
        // (x=0) ∧ y=z ∧ ¬A[x,y,z]
        let under = ConjunctiveQuery::new(self.spec.clone())
            .with(Literal::pos(self.const1(0), [0usize]))
            .with(Literal::pos(self.eq.clone(), [1usize, 2]))
            .with(Literal::neg(a.clone(), [0usize, 1, 2]));
        if let Some(w) = witness(&under, &self.opts.compile)? {
            return Ok(Some(confirmed_cex(a, &self.spec, memb, &w.values)?));
        }
        Ok(None)
    }

    /// Both directions of the step, wrong acceptance at x+1 first.
    fn step_checks(&self, a: &CompleteDfa) -> Vec<ConjunctiveQuery> {
        let rel = |q: ConjunctiveQuery| {
            q.with(Literal::pos(self.incr.clone(), [0usize, 3]))
                .with(Literal::pos(self.incr.clone(), [2usize, 4]))
        };
        vec![
            rel(ConjunctiveQuery::new(self.spec5.clone()))
                .with(Literal::neg(a.clone(), [0usize, 1, 2]))
                .with(Literal::pos(a.clone(), [3usize, 1, 4])),
            rel(ConjunctiveQuery::new(self.spec5.clone()))
                .with(Literal::pos(a.clone(), [0usize, 1, 2]))
                .with(Literal::neg(a.clone(), [3usize, 1, 4])),
        ]
    }
}

impl MembershipOracle for AdderTeacher {
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

impl HypothesisVerifier for AdderTeacher {
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
                let (x, y, z, t, u) =
                    (w.values[0], w.values[1], w.values[2], w.values[3], w.values[4]);
                let cex = disambiguate(
                    a,
                    &self.spec,
                    |v| self.membership(v[0], v[1], v[2]),
                    &[x, y, z],
                    &[t, y, u],
                )?;
                return Ok(Verdict::Counterexample(cex));
            }
        }
        Ok(Verdict::Correct)
    }
}

/// Learns the addition relation of a system with L*.
pub fn learn_adder(
    system: &NumerationSystem,
    opts: TeacherOptions,
    learn_opts: &LearnOptions,
) -> Result<(CompleteDfa, RunStats)> {
    let teacher = AdderTeacher::new(system.clone(), opts)?;
    let out = learn(&teacher, &teacher, teacher.spec().alphabet(), learn_opts)?;
    Ok((out.automaton, out.stats))
}

/// The addition relation of a system: direct construction for base k,
/// learned for the built-in Pisot systems. Custom systems need not be
/// addable at all, so their adders must be supplied externally.
pub fn adder_for(system: &NumerationSystem, opts: TeacherOptions) -> Result<CompleteDfa> {
    match system.kind() {
        SystemKind::Base(k) => Ok(base_adder(*k)),
        SystemKind::Zeckendorf | SystemKind::Tribonacci => {
            learn_adder(system, opts, &LearnOptions::default()).map(|(a, _)| a)
        }
        SystemKind::Custom(name) => Err(crate::Error::UnsupportedSystem(format!(
            "no adder for the custom system {name}; supply one as a file"
        ))),
    }
}
