//! Teacher for partial sums of synchronized sequences: the target relation
//! C accepts (n, x) iff x = Σ_{i<n} b(i). The two tracks may live in
//! different numeration systems.
//!
//! A summand is handed over as a synchronized automaton B for a shifted,
//! nonnegative version b+offset of b; the offset makes summands with
//! negative values (such as the ±1 terms of rarefied Thue-Morse sums)
//! expressible without negative-digit numeration. The verification
//! conditions are C[0,x] ⟺ x=0 and, for the shifted summand t = b(n)+δ,
//! (u=n+1 ∧ z+δ = t+y ∧ B[n,t]) ⟹ (C[n,y] ⟺ C[u,z]).

use std::sync::Mutex;

use crate::alphabet::{Letter, Word};
use crate::dfa::{CompleteDfa, ProductMode};
use crate::lstar::{HypothesisVerifier, MembershipOracle, Verdict};
use crate::numeration::{
    base_adder, eq_relation, incr_relation, NumerationSystem, TrackSystemSpec,
};
use crate::predicate::{exists_compile, witness, CompileOptions, ConjunctiveQuery, Literal};
use crate::sequence::SequenceDfao;
use crate::{Error, Result};

use super::{
    build_linear_rep, confirmed_cex, disambiguate, expect_alphabet, invalid_acceptance_witness,
    prefix_sum_rep, zero_loop_witness, LinearRepresentation, TeacherOptions,
};

/// Beyond this index, direct summation stops memoizing prefix sums.
const MEMO_CAP: usize = 1 << 20;

/// A summand sequence, presented through the synchronized automaton of its
/// shifted values b(n) + offset ≥ 0.
pub struct Summand {
    pub b_auto: CompleteDfa,
    pub n_system: NumerationSystem,
    pub x_system: NumerationSystem,
    pub offset: u64,
    /// Fast evaluation of the shifted summand, when available; otherwise
    /// values are looked up per index as shortest witnesses in `b_auto`.
    direct: Option<Box<dyn Fn(u64) -> u64 + Send + Sync>>,
}

impl Summand {
    pub fn new(
        b_auto: CompleteDfa,
        n_system: NumerationSystem,
        x_system: NumerationSystem,
        offset: u64,
    ) -> Result<Self> {
        let spec = TrackSystemSpec::new(vec![n_system.clone(), x_system.clone()])?;
        if *b_auto.alphabet() != spec.alphabet() {
            return Err(Error::AlphabetMismatch(
                "summand automaton must read (n, value) pairs".into(),
            ));
        }
        Ok(Self { b_auto, n_system, x_system, offset, direct: None })
    }

    /// The values of an automatic sequence as a synchronized summand.
    pub fn from_dfao(x: &SequenceDfao) -> Self {
        let eval = x.clone();
        Self {
            b_auto: x.synchronized(),
            n_system: x.system().clone(),
            x_system: x.system().clone(),
            offset: 0,
            direct: Some(Box::new(move |i| eval.eval(i) as u64)),
        }
    }

    /// The rarefied Thue-Morse summand (−1)^{t(3n)}, shifted by 1 to the
    /// values {0, 2}; n is read in base 4 and the value track in base 3.
    pub fn rarefied_thue_morse(compile: &CompileOptions) -> Result<Self> {
        let b2 = NumerationSystem::base(2)?;
        let tm = SequenceDfao::thue_morse();
        // m = 3n over base-2 pairs, with a doubling track s and a copy c
        let spec4 = TrackSystemSpec::uniform(b2.clone(), 4)?;
        let triple = exists_compile(
            &ConjunctiveQuery::new(spec4)
                .with(Literal::pos(eq_relation(2), [0usize, 3]))
                .with(Literal::pos(base_adder(2), [0usize, 3, 2]))
                .with(Literal::pos(base_adder(2), [2usize, 0, 1])),
            &[2, 3],
            compile,
        )?
        .dfa;
        let spec2 = TrackSystemSpec::uniform(b2.clone(), 2)?;
        let selector = |symbol: u16| -> Result<CompleteDfa> {
            // base-2 automaton for t(3n) = symbol, then regrouped to base 4
            let sel2 = exists_compile(
                &ConjunctiveQuery::new(spec2.clone())
                    .with(Literal::pos(triple.clone(), [0usize, 1]))
                    .with(Literal::pos(tm.output_selector(symbol), [1usize])),
                &[1],
                compile,
            )?
            .dfa;
            group_digits(&sel2, 2)
        };
        let b4 = NumerationSystem::base(4)?;
        let b3 = NumerationSystem::base(3)?;
        let spec = TrackSystemSpec::new(vec![b4.clone(), b3.clone()])?;
        let alphabet = spec.alphabet();
        let term0 = selector(0)?
            .embed(&alphabet, &[0])?
            .product(&spec.const_automaton(1, 2), ProductMode::And)?;
        let term1 = selector(1)?
            .embed(&alphabet, &[0])?
            .product(&spec.const_automaton(1, 0), ProductMode::And)?;
        let b_auto = term0.product(&term1, ProductMode::Or)?.minimize();
        let eval = SequenceDfao::thue_morse();
        Ok(Self {
            b_auto,
            n_system: b4,
            x_system: b3,
            offset: 1,
            direct: Some(Box::new(move |i| {
                let i3 = i.checked_mul(3).expect("index exceeds the supported range");
                2 - 2 * eval.eval(i3) as u64
            })),
        })
    }

    pub fn spec(&self) -> TrackSystemSpec {
        TrackSystemSpec::new(vec![self.n_system.clone(), self.x_system.clone()])
            .expect("two tracks")
    }

    /// The shifted value b(i) + offset.
    pub fn shifted(&self, i: u64) -> Result<u64> {
        if let Some(f) = &self.direct {
            return Ok(f(i));
        }
        let spec = self.spec();
        let pinned = self.b_auto.product(&spec.const_automaton(0, i), ProductMode::And)?;
        let word = pinned
            .shortest_accepted()
            .ok_or_else(|| Error::NotSynchronized(format!("no value for n = {i}")))?;
        Ok(spec.tuple_decode(&word)?[1])
    }
}

/// Regroups a one-track automaton onto digit blocks of length `m`, e.g.
/// base 2 to base 4. Requires a zero-looping initial state so the implicit
/// left-padding of odd-length words is harmless.
fn group_digits(d: &CompleteDfa, m: u32) -> Result<CompleteDfa> {
    if d.alphabet().arity() != 1 {
        return Err(Error::InvalidInput("digit grouping needs a one-track automaton".into()));
    }
    if d.next(d.initial(), 0) != d.initial() {
        return Err(Error::Contract("digit grouping needs a zero-looping initial state".into()));
    }
    let r = d.alphabet().radices()[0] as usize;
    let new_radix = r.pow(m) as u16;
    let alphabet = crate::alphabet::TupleAlphabet::uniform(new_radix, 1)?;
    let n = d.state_count();
    let mut delta = Vec::with_capacity(n * new_radix as usize);
    for s in 0..n as u32 {
        for big in 0..new_radix as usize {
            // expand msd-first
            let mut cur = s;
            for pos in (0..m).rev() {
                let digit = (big / r.pow(pos) % r) as Letter;
                cur = d.next(cur, digit);
            }
            delta.push(cur);
        }
    }
    CompleteDfa::new(
        alphabet,
        d.initial(),
        (0..n as u32).map(|s| d.is_accepting(s)).collect(),
        delta,
    )
}

pub struct PartialSumTeacher {
    summand: Summand,
    /// (n, x)
    spec: TrackSystemSpec,
    x_adder: CompleteDfa,
    incr_n: CompleteDfa,
    incr_x: CompleteDfa,
    /// Prefix sums of the shifted summand, for queries past the direct
    /// threshold. Absent when the value track cannot back a linear
    /// representation; direct summation then serves all sizes.
    sums_rep: Option<LinearRepresentation>,
    /// cum[k] = Σ_{i<k} shifted(i), extended on demand.
    cum: Mutex<Vec<i128>>,
    opts: TeacherOptions,
}

impl PartialSumTeacher {
    /// `x_adder` must be the addition relation of the value-track system.
    pub fn new(summand: Summand, x_adder: CompleteDfa, opts: TeacherOptions) -> Result<Self> {
        let spec = summand.spec();
        if *x_adder.alphabet()
            != TrackSystemSpec::uniform(summand.x_system.clone(), 3)?.alphabet()
        {
            return Err(Error::AlphabetMismatch(
                "value-track adder must be a 3-track relation".into(),
            ));
        }
        let incr_n = incr_relation(&summand.n_system);
        let incr_x = incr_relation(&summand.x_system);
        let sums_rep = match build_linear_rep(&summand.b_auto, &spec) {
            Ok(rep) => Some(prefix_sum_rep(&rep)),
            Err(Error::UnsupportedSystem(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            summand,
            spec,
            x_adder,
            incr_n,
            incr_x,
            sums_rep,
            cum: Mutex::new(vec![0]),
            opts,
        })
    }

    pub fn spec(&self) -> &TrackSystemSpec {
        &self.spec
    }

    pub fn summand(&self) -> &Summand {
        &self.summand
    }

    /// Σ_{i<n} b(i), as an integer (it may be negative for offset
    /// summands, in which case no x matches).
    pub fn partial_sum(&self, n: u64) -> Result<i128> {
        let shifted_sum = match &self.sums_rep {
            Some(rep) if n >= self.opts.direct_threshold => {
                rep.eval_nat(&self.summand.n_system, n)
            }
            _ => self.cumulative(n)?,
        };
        Ok(shifted_sum - self.summand.offset as i128 * n as i128)
    }

    fn cumulative(&self, n: u64) -> Result<i128> {
        let mut cum = self.cum.lock().expect("cumulative sums lock");
        let memo_target = (n as usize).min(MEMO_CAP);
        while cum.len() <= memo_target {
            let i = (cum.len() - 1) as u64;
            let next = cum[cum.len() - 1] + self.summand.shifted(i)? as i128;
            cum.push(next);
        }
        let mut total = cum[memo_target.min(n as usize)];
        for i in memo_target as u64..n {
            total += self.summand.shifted(i)? as i128;
        }
        Ok(total)
    }

    pub fn membership(&self, n: u64, x: u64) -> bool {
        match self.partial_sum(n) {
            Ok(c) => c == x as i128,
            Err(_) => false,
        }
    }

    fn const_n(&self, v: u64) -> CompleteDfa {
        TrackSystemSpec::uniform(self.summand.n_system.clone(), 1)
            .expect("one track")
            .const_automaton(0, v)
    }

    fn const_x(&self, v: u64) -> CompleteDfa {
        TrackSystemSpec::uniform(self.summand.x_system.clone(), 1)
            .expect("one track")
            .const_automaton(0, v)
    }

    fn check_base(&self, a: &CompleteDfa) -> Result<Option<Word>> {
        let memb = |t: &[u64]| self.membership(t[0], t[1]);
        // wrong acceptances first: (n=0) ∧ x≠0 ∧ C[n,x]
        let over = ConjunctiveQuery::new(self.spec.clone())
            .with(Literal::pos(self.const_n(0), [0usize]))
            .with(Literal::neg(self.const_x(0), [1usize]))
            .with(Literal::pos(a.clone(), [0usize, 1]));
        if let Some(w) = witness(&over, &self.opts.compile)? {
            return Ok(Some(confirmed_cex(a, &self.spec, memb, &w.values)?));
        }
        let under = ConjunctiveQuery::new(self.spec.clone())
            .with(Literal::pos(self.const_n(0), [0usize]))
            .with(Literal::pos(self.const_x(0), [1usize]))
            .with(Literal::neg(a.clone(), [0usize, 1]));
        if let Some(w) = witness(&under, &self.opts.compile)? {
            return Ok(Some(confirmed_cex(a, &self.spec, memb, &w.values)?));
        }
        Ok(None)
    }

    /// Step checks over (n, t, u, y, z) with u = n+1, t the shifted
    /// summand value at n, and z + offset = t + y. For offset 1 a sixth
    /// track w = z+1 carries the left side. Wrong acceptance at u first.
    fn step_checks(&self, a: &CompleteDfa) -> Result<Vec<ConjunctiveQuery>> {
        let ns = &self.summand.n_system;
        let xs = &self.summand.x_system;
        let base = match self.summand.offset {
            0 => {
                let spec5 = TrackSystemSpec::new(vec![
                    ns.clone(),
                    xs.clone(),
                    ns.clone(),
                    xs.clone(),
                    xs.clone(),
                ])?;
                ConjunctiveQuery::new(spec5)
                    .with(Literal::pos(self.incr_n.clone(), [0usize, 2]))
                    .with(Literal::pos(self.summand.b_auto.clone(), [0usize, 1]))
                    .with(Literal::pos(self.x_adder.clone(), [1usize, 3, 4]))
            }
            1 => {
                let spec6 = TrackSystemSpec::new(vec![
                    ns.clone(),
                    xs.clone(),
                    ns.clone(),
                    xs.clone(),
                    xs.clone(),
                    xs.clone(),
                ])?;
                ConjunctiveQuery::new(spec6)
                    .with(Literal::pos(self.incr_n.clone(), [0usize, 2]))
                    .with(Literal::pos(self.summand.b_auto.clone(), [0usize, 1]))
                    .with(Literal::pos(self.incr_x.clone(), [4usize, 5]))
                    .with(Literal::pos(self.x_adder.clone(), [1usize, 3, 5]))
            }
            o => {
                return Err(Error::UnsupportedSystem(format!(
                    "summand offset {o} not supported (only 0 and 1)"
                )))
            }
        };
        Ok(vec![
            base.clone()
                .with(Literal::neg(a.clone(), [0usize, 3]))
                .with(Literal::pos(a.clone(), [2usize, 4])),
            base.with(Literal::pos(a.clone(), [0usize, 3]))
                .with(Literal::neg(a.clone(), [2usize, 4])),
        ])
    }
}

impl MembershipOracle for PartialSumTeacher {
    fn query(&self, word: &[Letter]) -> bool {
        if !self.spec.is_valid(word) {
            return false;
        }
        match self.spec.tuple_decode(word) {
            Ok(v) => self.membership(v[0], v[1]),
            Err(_) => false,
        }
    }
}

impl HypothesisVerifier for PartialSumTeacher {
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
        for q in self.step_checks(a)? {
            if let Some(w) = witness(&q, &self.opts.compile)? {
                let (n, u, y, z) = (w.values[0], w.values[2], w.values[3], w.values[4]);
                let cex = disambiguate(
                    a,
                    &self.spec,
                    |v| self.membership(v[0], v[1]),
                    &[n, y],
                    &[u, z],
                )?;
                return Ok(Verdict::Counterexample(cex));
            }
        }
        Ok(Verdict::Correct)
    }
}
