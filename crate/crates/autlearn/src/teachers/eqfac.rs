//! Teacher for factor equality: eqfac(i, j, n) holds iff the length-n
//! factors of X starting at i and of Y starting at j coincide. With Y = X
//! this is the classical single-sequence predicate.
//!
//! A hypothesis A is correct iff it accepts only legal representations, is
//! leading-zero invariant, satisfies A[i,j,0] for all i,j, and satisfies
//! A[i,j,n+1] ⟺ A[i,j,n] ∧ X[i+n] = Y[j+n], the last condition split into
//! three emptiness checks over existential rewrites.

use crate::alphabet::{Letter, Word};
use crate::dfa::{CompleteDfa, ProductMode};
use crate::lstar::{HypothesisVerifier, MembershipOracle, Verdict};
use crate::numeration::{incr_relation, lt_relation, TrackSystemSpec};
use crate::predicate::{compile, witness, ConjunctiveQuery, Literal};
use crate::sequence::{SequenceDfao, ValueMode};
use crate::{Error, Result};

use super::{
    confirmed_cex, disambiguate, expect_alphabet, invalid_acceptance_witness, zero_loop_witness,
    TeacherOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipMethod {
    /// Direct below the threshold, intersection above.
    Auto,
    Direct,
    /// Intersect the precompiled mismatch automaton with constant automata
    /// and test emptiness.
    Intersection,
    /// Substitute the constants, build per-query selector automata by
    /// projection, and test emptiness. Benchmark mode; not competitive.
    Substitution,
}

pub struct EqFacTeacher {
    x: SequenceDfao,
    y: SequenceDfao,
    /// (i, j, n)
    spec: TrackSystemSpec,
    /// (i, j, n, t)
    spec4: TrackSystemSpec,
    /// (i, j, n, t, u, v)
    spec6: TrackSystemSpec,
    adder: CompleteDfa,
    incr: CompleteDfa,
    lt: CompleteDfa,
    value_eq: CompleteDfa,
    value_neq: CompleteDfa,
    /// E(i,j,n,t,u,v) = (t<n) ∧ (u=i+t) ∧ (v=j+t) ∧ X[u]≠Y[v], compiled
    /// once up front for intersection-method membership queries.
    mismatch: CompleteDfa,
    opts: TeacherOptions,
}

impl EqFacTeacher {
    /// `adder` must be the 3-track addition relation of the sequences'
    /// numeration system (built in for base k, learned or loaded for Pisot
    /// systems).
    pub fn new(
        x: SequenceDfao,
        y: Option<SequenceDfao>,
        adder: CompleteDfa,
        opts: TeacherOptions,
    ) -> Result<Self> {
        let y = y.unwrap_or_else(|| x.clone());
        if x.system() != y.system() {
            return Err(Error::AlphabetMismatch(
                "eqfac over two sequences needs a shared numeration system".into(),
            ));
        }
        let system = x.system().clone();
        if *adder.alphabet() != TrackSystemSpec::uniform(system.clone(), 3)?.alphabet() {
            return Err(Error::AlphabetMismatch("adder must be a 3-track relation".into()));
        }
        let spec = TrackSystemSpec::uniform(system.clone(), 3)?;
        let spec4 = TrackSystemSpec::uniform(system.clone(), 4)?;
        let spec6 = TrackSystemSpec::uniform(system.clone(), 6)?;
        let incr = incr_relation(&system);
        let lt = lt_relation(system.radix());
        let value_eq = x.value_relation(&y, ValueMode::Eq)?;
        let value_neq = x.value_relation(&y, ValueMode::Neq)?;
        let mismatch = compile(
            &ConjunctiveQuery::new(spec6.clone())
                .with(Literal::pos(lt.clone(), [3usize, 2]))
                .with(Literal::pos(adder.clone(), [0usize, 3, 4]))
                .with(Literal::pos(adder.clone(), [1usize, 3, 5]))
                .with(Literal::pos(value_neq.clone(), [4usize, 5])),
            &opts.compile,
        )?
        .dfa
        .minimize();
        Ok(Self { x, y, spec, spec4, spec6, adder, incr, lt, value_eq, value_neq, mismatch, opts })
    }

    pub fn spec(&self) -> &TrackSystemSpec {
        &self.spec
    }

    fn const1(&self, n: u64) -> CompleteDfa {
        TrackSystemSpec::uniform(self.x.system().clone(), 1)
            .expect("one track")
            .const_automaton(0, n)
    }

    pub fn membership(&self, i: u64, j: u64, n: u64) -> bool {
        let method = match self.opts.membership {
            MembershipMethod::Auto => {
                if n < self.opts.direct_threshold {
                    MembershipMethod::Direct
                } else {
                    MembershipMethod::Intersection
                }
            }
            m => m,
        };
        match method {
            MembershipMethod::Direct | MembershipMethod::Auto => self.membership_direct(i, j, n),
            MembershipMethod::Intersection => self.membership_intersection(i, j, n),
            MembershipMethod::Substitution => self.membership_substitution(i, j, n),
        }
    }

    fn membership_direct(&self, i: u64, j: u64, n: u64) -> bool {
        let end = i.checked_add(n).and(j.checked_add(n));
        assert!(end.is_some(), "factor positions exceed the supported range");
        (0..n).all(|t| self.x.eval(i + t) == self.y.eval(j + t))
    }

    /// Pin (i, j, n) with constant automata on the precompiled mismatch
    /// automaton; the factors agree iff nothing is accepted.
    fn membership_intersection(&self, i: u64, j: u64, n: u64) -> bool {
        let mut d = self.mismatch.clone();
        let al6 = self.spec6.alphabet();
        for (track, value) in [(0usize, i), (1, j), (2, n)] {
            let c = self.const1(value).embed(&al6, &[track]).expect("radices match");
            d = d.product(&c, ProductMode::And).expect("same alphabet");
        }
        d.shortest_accepted().is_none()
    }

    /// Per-query selector automata t ↦ X[i0+t], compared under (t < n0).
    fn membership_substitution(&self, i0: u64, j0: u64, n0: u64) -> bool {
        let system = self.x.system().clone();
        let selector = |seq: &SequenceDfao, c0: u64, symbol: u16| -> Result<CompleteDfa> {
            // (t, u, c): c = c0 ∧ u = c + t ∧ X[u] = symbol, then drop u, c
            let spec3 = TrackSystemSpec::uniform(system.clone(), 3)?;
            let q = ConjunctiveQuery::new(spec3)
                .with(Literal::pos(self.const1(c0), [2usize]))
                .with(Literal::pos(self.adder.clone(), [2usize, 0, 1]))
                .with(Literal::pos(seq.output_selector(symbol), [1usize]));
            Ok(crate::predicate::exists_compile(&q, &[1, 2], &self.opts.compile)?.dfa)
        };
        let run = || -> Result<bool> {
            let spec2 = TrackSystemSpec::uniform(system.clone(), 2)?;
            let al2 = spec2.alphabet();
            let mut mismatch_any: Option<CompleteDfa> = None;
            for &ax in &self.x.output_alphabet() {
                let sx = selector(&self.x, i0, ax)?.embed(&al2, &[0])?;
                for &by in &self.y.output_alphabet() {
                    if ax == by {
                        continue;
                    }
                    let sy = selector(&self.y, j0, by)?.embed(&al2, &[0])?;
                    let both = sx.product(&sy, ProductMode::And)?;
                    mismatch_any = Some(match mismatch_any {
                        None => both,
                        Some(m) => m.product(&both, ProductMode::Or)?,
                    });
                }
            }
            let Some(mismatch) = mismatch_any else { return Ok(true) };
            let q = ConjunctiveQuery::new(spec2)
                .with(Literal::pos(self.lt.clone(), [0usize, 1]))
                .with(Literal::pos(self.const1(n0), [1usize]))
                .with(Literal::pos(mismatch, [0usize, 1]));
            Ok(witness(&q, &self.opts.compile)?.is_none())
        };
        run().expect("substitution query construction cannot fail")
    }

    /// The direct construction the learner is benchmarked against:
    /// eqfac(i,j,n) = validity ∧ ¬∃t,u,v E(i,j,n,t,u,v), with the
    /// existential realized by projection and determinization. Returns the
    /// minimal automaton and the peak intermediate state count.
    pub fn direct_method(&self) -> Result<crate::predicate::Compiled> {
        let e_query = ConjunctiveQuery::new(self.spec6.clone())
            .with(Literal::pos(self.lt.clone(), [3usize, 2]))
            .with(Literal::pos(self.adder.clone(), [0usize, 3, 4]))
            .with(Literal::pos(self.adder.clone(), [1usize, 3, 5]))
            .with(Literal::pos(self.value_neq.clone(), [4usize, 5]));
        let some_mismatch = crate::predicate::exists_compile(&e_query, &[3, 4, 5], &self.opts.compile)?;
        let final_q = ConjunctiveQuery::new(self.spec.clone())
            .with(Literal::neg(some_mismatch.dfa.clone(), [0usize, 1, 2]));
        let compiled = compile(&final_q, &self.opts.compile)?;
        let peak = some_mismatch.peak_states.max(compiled.peak_states);
        Ok(crate::predicate::Compiled {
            dfa: compiled.dfa.minimize(),
            peak_states: peak,
        })
    }

    fn check_base(&self, a: &CompleteDfa) -> Result<Option<Word>> {
        // ¬∃ i,j,t (t=0) ∧ ¬A[i,j,t]
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

    /// The three existential rewrites of the induction step, in the order
    /// they are to be run (third conjunct first).
    fn step_checks(&self, a: &CompleteDfa) -> Vec<ConjunctiveQuery> {
        let rel6 = |q: ConjunctiveQuery| {
            q.with(Literal::pos(self.incr.clone(), [2usize, 3]))
                .with(Literal::pos(self.adder.clone(), [0usize, 2, 4]))
                .with(Literal::pos(self.adder.clone(), [1usize, 2, 5]))
        };
        vec![
            // (t=n+1) ∧ (u=i+n) ∧ (v=j+n) ∧ X[u]≠Y[v] ∧ A[i,j,t]
            rel6(ConjunctiveQuery::new(self.spec6.clone()))
                .with(Literal::pos(self.value_neq.clone(), [4usize, 5]))
                .with(Literal::pos(a.clone(), [0usize, 1, 3])),
            // (t=n+1) ∧ (u=i+n) ∧ (v=j+n) ∧ ¬A[i,j,t] ∧ A[i,j,n] ∧ X[u]=Y[v]
            rel6(ConjunctiveQuery::new(self.spec6.clone()))
                .with(Literal::neg(a.clone(), [0usize, 1, 3]))
                .with(Literal::pos(a.clone(), [0usize, 1, 2]))
                .with(Literal::pos(self.value_eq.clone(), [4usize, 5])),
            // (t=n+1) ∧ ¬A[i,j,n] ∧ A[i,j,t]
            ConjunctiveQuery::new(self.spec4.clone())
                .with(Literal::pos(self.incr.clone(), [2usize, 3]))
                .with(Literal::neg(a.clone(), [0usize, 1, 2]))
                .with(Literal::pos(a.clone(), [0usize, 1, 3])),
        ]
    }
}

impl MembershipOracle for EqFacTeacher {
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

impl HypothesisVerifier for EqFacTeacher {
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
                // the wrong side is A[i,j,n] or A[i,j,n+1]
                let (i, j, n, t) = (w.values[0], w.values[1], w.values[2], w.values[3]);
                let cex = disambiguate(
                    a,
                    &self.spec,
                    |v| self.membership(v[0], v[1], v[2]),
                    &[i, j, n],
                    &[i, j, t],
                )?;
                return Ok(Verdict::Counterexample(cex));
            }
        }
        Ok(Verdict::Correct)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lstar::{learn, LearnOptions};
    use crate::numeration::base_adder;

    fn tm_teacher(method: MembershipMethod) -> EqFacTeacher {
        let tm = SequenceDfao::thue_morse();
        EqFacTeacher::new(
            tm,
            None,
            base_adder(2),
            TeacherOptions { membership: method, ..TeacherOptions::default() },
        )
        .unwrap()
    }

    /// Independent oracle over the raw sequence prefix.
    fn brute_eqfac(x: &SequenceDfao, i: u64, j: u64, n: u64) -> bool {
        (0..n).all(|t| x.eval(i + t) == x.eval(j + t))
    }

    #[test]
    fn membership_examples() {
        let t = tm_teacher(MembershipMethod::Auto);
        for i in 0..6u64 {
            for j in 0..6u64 {
                assert!(t.membership(i, j, 0), "length zero is always equal");
            }
        }
        assert!(t.membership(0, 3, 2)); // 01 vs 01
        assert!(!t.membership(0, 1, 1)); // t(0)=0, t(1)=1
    }

    #[test]
    fn membership_strategies_agree() {
        let auto = tm_teacher(MembershipMethod::Auto);
        let inter = tm_teacher(MembershipMethod::Intersection);
        let subst = tm_teacher(MembershipMethod::Substitution);
        for i in 0..8u64 {
            for j in 0..8u64 {
                for n in 0..8u64 {
                    let expect = brute_eqfac(&auto.x, i, j, n);
                    assert_eq!(auto.membership(i, j, n), expect, "auto ({i},{j},{n})");
                    assert_eq!(inter.membership(i, j, n), expect, "inter ({i},{j},{n})");
                    assert_eq!(subst.membership(i, j, n), expect, "subst ({i},{j},{n})");
                }
            }
        }
    }

    #[test]
    fn membership_symmetry() {
        let t = tm_teacher(MembershipMethod::Auto);
        for i in 0..12u64 {
            for j in 0..12u64 {
                for n in 0..10u64 {
                    assert_eq!(t.membership(i, j, n), t.membership(j, i, n));
                }
            }
        }
    }

    #[test]
    fn pinned_mismatch_query_yields_the_t0_witness() {
        // E restricted to i=0, j=1, n=1: only t=0 satisfies t<1, and
        // t(0) ≠ t(1) provides the mismatch
        let t = tm_teacher(MembershipMethod::Auto);
        let mut q = crate::predicate::ConjunctiveQuery::new(t.spec6.clone())
            .with(crate::predicate::Literal::pos(t.mismatch.clone(), (0..6).collect::<Vec<_>>()));
        for (track, value) in [(0usize, 0u64), (1, 1), (2, 1)] {
            q = q.with(crate::predicate::Literal::pos(t.const1(value), [track]));
        }
        let w = crate::predicate::witness(&q, &t.opts.compile).unwrap().unwrap();
        assert_eq!(&w.values[..4], &[0, 1, 1, 0], "witness must have t = 0");
    }

    #[test]
    fn invalid_words_are_rejected() {
        let f = SequenceDfao::fibonacci_word();
        let zeck_add = {
            // placeholder 3-track relation over the right alphabet; the
            // adder is irrelevant for plain membership words
            let spec = TrackSystemSpec::uniform(f.system().clone(), 3).unwrap();
            CompleteDfa::reject_all(spec.alphabet())
        };
        let t = EqFacTeacher::new(f, None, zeck_add, TeacherOptions::default()).unwrap();
        // track n reads "11", invalid in zeckendorf
        let al = t.spec.alphabet();
        let bad = vec![al.pack(&[0, 0, 1]), al.pack(&[0, 0, 1])];
        assert!(!t.query(&bad));
    }

    #[test]
    fn reject_all_hypothesis_fails_base_case() {
        let t = tm_teacher(MembershipMethod::Auto);
        let a = CompleteDfa::reject_all(t.spec.alphabet());
        match t.verify(&a).unwrap() {
            Verdict::Counterexample(w) => {
                // base case with n = 0: hypothesis rejects, target accepts
                assert!(!a.accepts(&w));
                assert!(t.query(&w));
                let padded_vals = if w.is_empty() {
                    vec![0, 0, 0]
                } else {
                    t.spec.tuple_decode(&w).unwrap()
                };
                assert_eq!(padded_vals[2], 0);
            }
            v => panic!("expected a counterexample, got {v:?}"),
        }
    }

    #[test]
    fn accept_all_hypothesis_fails_with_confirmed_counterexample() {
        let t = tm_teacher(MembershipMethod::Auto);
        let a = CompleteDfa::accept_all(t.spec.alphabet());
        match t.verify(&a).unwrap() {
            Verdict::Counterexample(w) => {
                assert!(a.accepts(&w));
                assert!(!t.query(&w), "accept-all must over-accept some word");
            }
            v => panic!("expected a counterexample, got {v:?}"),
        }
    }

    #[test]
    fn direct_method_matches_learning_route() {
        let t = tm_teacher(MembershipMethod::Auto);
        let direct = t.direct_method().unwrap();
        let out = learn(&t, &t, t.spec.alphabet(), &LearnOptions::default()).unwrap();
        assert_eq!(direct.dfa.equivalent(&out.automaton).unwrap(), None);
        assert_eq!(direct.dfa.state_count(), 15);
        assert!(direct.peak_states >= direct.dfa.state_count());
    }

    #[test]
    fn learns_thue_morse_eqfac_with_fifteen_states() {
        let t = tm_teacher(MembershipMethod::Auto);
        let out = learn(&t, &t, t.spec.alphabet(), &LearnOptions::default()).unwrap();
        assert_eq!(out.automaton.state_count(), 15);
        assert_eq!(out.automaton.state_count() - out.automaton.trim().1, 14);
        // spot-check the learned language against brute force
        for i in 0..16u64 {
            for j in 0..16u64 {
                for n in 0..16u64 {
                    let w = t.spec.tuple_encode(&[i, j, n]);
                    assert_eq!(
                        out.automaton.accepts(&w),
                        brute_eqfac(&t.x, i, j, n),
                        "({i},{j},{n})"
                    );
                }
            }
        }
    }
}
