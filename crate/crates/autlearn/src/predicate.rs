//! Quantifier-free conjunctive queries over multi-track automata.
//!
//! A query is a conjunction of (possibly negated) automaton literals wired
//! onto tracks of a common tuple alphabet. Validity literals for every
//! track are always injected: only legal representations can witness a
//! query. Conjunction proceeds smallest automaton first, minimizing
//! whenever an intermediate product grows past a threshold, and the peak
//! intermediate size is recorded; blowup in intermediate products is the
//! failure mode this pipeline exists to avoid.

use crate::alphabet::Word;
use crate::dfa::{CompleteDfa, ProductMode};
use crate::numeration::TrackSystemSpec;
use crate::{Error, Result};

/// One conjunct: an automaton lifted onto `tracks` of the query alphabet.
/// Negation complements the payload before embedding.
#[derive(Debug, Clone)]
pub struct Literal {
    pub dfa: CompleteDfa,
    pub tracks: Vec<usize>,
    pub negated: bool,
}

impl Literal {
    pub fn pos(dfa: CompleteDfa, tracks: impl Into<Vec<usize>>) -> Self {
        Self { dfa, tracks: tracks.into(), negated: false }
    }

    pub fn neg(dfa: CompleteDfa, tracks: impl Into<Vec<usize>>) -> Self {
        Self { dfa, tracks: tracks.into(), negated: true }
    }
}

#[derive(Debug, Clone)]
pub struct ConjunctiveQuery {
    pub spec: TrackSystemSpec,
    pub literals: Vec<Literal>,
}

impl ConjunctiveQuery {
    pub fn new(spec: TrackSystemSpec) -> Self {
        Self { spec, literals: Vec::new() }
    }

    pub fn with(mut self, literal: Literal) -> Self {
        self.literals.push(literal);
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    /// Minimize an intermediate product once it exceeds this many states.
    pub minimize_threshold: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { minimize_threshold: 10_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub dfa: CompleteDfa,
    /// Largest state count of any intermediate automaton, the final one
    /// included.
    pub peak_states: usize,
}

/// A satisfying assignment: per-track decoded values plus the raw word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub values: Vec<u64>,
    pub word: Word,
}

/// Conjoins all literals and the implicit validity literals.
pub fn compile(query: &ConjunctiveQuery, opts: &CompileOptions) -> Result<Compiled> {
    let alphabet = query.spec.alphabet();
    let mut parts: Vec<CompleteDfa> = Vec::new();
    let validity = query.spec.validity_dfa();
    if !validity.is_trivially_accept_all() {
        parts.push(validity);
    }
    for lit in &query.literals {
        let payload = if lit.negated { lit.dfa.complement() } else { lit.dfa.clone() };
        parts.push(payload.embed(&alphabet, &lit.tracks)?);
    }
    if parts.is_empty() {
        return Ok(Compiled { dfa: CompleteDfa::accept_all(alphabet), peak_states: 1 });
    }
    parts.sort_by_key(|d| d.state_count());
    let mut peak = 0usize;
    let mut acc: Option<CompleteDfa> = None;
    for part in parts {
        acc = Some(match acc {
            None => part,
            Some(cur) => {
                let mut next = cur.product(&part, ProductMode::And)?;
                peak = peak.max(next.state_count());
                if next.state_count() > opts.minimize_threshold {
                    next = next.minimize();
                }
                next
            }
        });
        peak = peak.max(acc.as_ref().unwrap().state_count());
    }
    let dfa = acc.unwrap();
    Ok(Compiled { peak_states: peak.max(dfa.state_count()), dfa })
}

/// Shortest satisfying assignment of the query, or `None` when the
/// compiled query is empty.
pub fn witness(query: &ConjunctiveQuery, opts: &CompileOptions) -> Result<Option<Witness>> {
    let compiled = compile(query, opts)?;
    match compiled.dfa.shortest_accepted() {
        None => Ok(None),
        Some(word) => {
            let values = query.spec.tuple_decode(&word).map_err(|e| {
                Error::Contract(format!("witness failed validity decode: {e}"))
            })?;
            Ok(Some(Witness { values, word }))
        }
    }
}

/// Compiles the query, existentially projects away the `drop` tracks, and
/// returns the minimized determinization. The projection is saturated under
/// leading zeros so that the result is faithful to value-level
/// quantification: a witness for the dropped tracks may need more digits
/// than the kept tracks happen to have.
pub fn exists_compile(
    query: &ConjunctiveQuery,
    drop: &[usize],
    opts: &CompileOptions,
) -> Result<Compiled> {
    let arity = query.spec.arity();
    let mut drop: Vec<usize> = drop.to_vec();
    drop.sort_unstable();
    drop.dedup();
    if drop.is_empty() || drop.len() >= arity || drop.iter().any(|&t| t >= arity) {
        return Err(Error::InvalidInput(
            "existential projection must drop a proper nonempty track subset".into(),
        ));
    }
    let keep: Vec<usize> = (0..arity).filter(|t| !drop.contains(t)).collect();
    let compiled = compile(query, opts)?;
    let det = compiled.dfa.project(&keep)?.determinize();
    let saturated = det.zero_saturate();
    let peak = compiled.peak_states.max(det.state_count()).max(saturated.state_count());
    Ok(Compiled { dfa: saturated.minimize(), peak_states: peak })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Letter;
    use crate::numeration::{base_adder, lt_relation, NumerationSystem};
    use crate::sequence::{SequenceDfao, ValueMode};

    fn b2_spec(arity: usize) -> TrackSystemSpec {
        TrackSystemSpec::uniform(NumerationSystem::base(2).unwrap(), arity).unwrap()
    }

    fn zeck_spec(arity: usize) -> TrackSystemSpec {
        TrackSystemSpec::uniform(NumerationSystem::zeckendorf(), arity).unwrap()
    }

    fn all_words(spec: &TrackSystemSpec, max_len: usize) -> Vec<Word> {
        let k = spec.alphabet().letter_count();
        let mut out: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..k {
                    let mut v = w.clone();
                    v.push(l as Letter);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn zero_literals_compile_to_validity() {
        let spec = zeck_spec(2);
        let compiled = compile(&ConjunctiveQuery::new(spec.clone()), &CompileOptions::default())
            .unwrap();
        for w in all_words(&spec, 4) {
            assert_eq!(compiled.dfa.accepts(&w), spec.is_valid(&w), "{w:?}");
        }
    }

    #[test]
    fn contradictory_order_is_empty() {
        let spec = b2_spec(2);
        let lt = lt_relation(2);
        let q = ConjunctiveQuery::new(spec)
            .with(Literal::pos(lt.clone(), [0usize, 1]))
            .with(Literal::pos(lt, [1usize, 0]));
        assert_eq!(witness(&q, &CompileOptions::default()).unwrap(), None);
    }

    #[test]
    fn compile_agrees_with_literal_semantics_on_small_words() {
        // (x < y) ∧ ¬(x + x = y) over zeckendorf pairs
        let spec = zeck_spec(2);
        let lt = lt_relation(2);
        // x + x = y needs a scratch equality: check on 2 tracks by wiring
        // the base-2-style adder is wrong for zeckendorf; use lt twice plus
        // a negated literal instead to keep systems honest.
        let q = ConjunctiveQuery::new(spec.clone())
            .with(Literal::pos(lt.clone(), [0usize, 1]))
            .with(Literal::neg(lt.clone(), [1usize, 0]));
        let compiled = compile(&q, &CompileOptions::default()).unwrap();
        for w in all_words(&spec, 4) {
            let expect = spec.is_valid(&w)
                && lt.accepts(&w)
                && !lt.accepts(&w.iter().map(|&l| {
                    let d = spec.alphabet().digits(l);
                    spec.alphabet().pack(&[d[1], d[0]])
                }).collect::<Vec<_>>());
            assert_eq!(compiled.dfa.accepts(&w), expect, "{w:?}");
        }
    }

    #[test]
    fn thue_morse_mismatch_query_accepts_known_witness() {
        // E(i,j,n,t,u,v) = (t<n) ∧ (u=i+t) ∧ (v=j+t) ∧ (X[u]≠X[v])
        let tm = SequenceDfao::thue_morse();
        let spec = b2_spec(6);
        let al = spec.alphabet();
        let lt = lt_relation(2);
        let add = base_adder(2);
        let neq = tm.value_relation(&tm, ValueMode::Neq).unwrap();
        let q = ConjunctiveQuery::new(spec.clone())
            .with(Literal::pos(lt, [3usize, 2]))
            .with(Literal::pos(add.clone(), [0usize, 3, 4]))
            .with(Literal::pos(add, [1usize, 3, 5]))
            .with(Literal::pos(neq, [4usize, 5]));
        let compiled = compile(&q, &CompileOptions::default()).unwrap();
        // (i,j,n,t,u,v) = (0,1,2,0,0,1): t<n, u=i+t=0, v=j+t=1, t(0)≠t(1)
        assert!(compiled.dfa.accepts(&spec.tuple_encode(&[0, 1, 2, 0, 0, 1])));
        // same but t(u)=t(v): (0,3,2,0,0,3): t(0)=0=t(3)
        assert!(!compiled.dfa.accepts(&spec.tuple_encode(&[0, 3, 2, 0, 0, 3])));
        let _ = al;
    }

    #[test]
    fn witness_decodes_and_strips_padding() {
        let spec = b2_spec(2);
        let lt = lt_relation(2);
        let q = ConjunctiveQuery::new(spec).with(Literal::pos(lt, [0usize, 1]));
        let w = witness(&q, &CompileOptions::default()).unwrap().unwrap();
        assert_eq!(w.values, vec![0, 1]);
        assert_eq!(w.word, vec![1]);
    }

    #[test]
    fn exists_compile_unconstrained_track_is_identity() {
        let spec = b2_spec(3);
        let lt = lt_relation(2);
        let q = ConjunctiveQuery::new(spec.clone()).with(Literal::pos(lt.clone(), [0usize, 1]));
        let dropped = exists_compile(&q, &[2], &CompileOptions::default()).unwrap();
        let two = b2_spec(2);
        let base = compile(
            &ConjunctiveQuery::new(two).with(Literal::pos(lt, [0usize, 1])),
            &CompileOptions::default(),
        )
        .unwrap();
        assert_eq!(dropped.dfa.equivalent(&base.dfa).unwrap(), None);
    }

    #[test]
    fn exists_compile_adder_projection_accepts_all_x() {
        // every x has some y, z with x + y = z
        let spec = b2_spec(3);
        let q = ConjunctiveQuery::new(spec).with(Literal::pos(base_adder(2), [0usize, 1, 2]));
        let p = exists_compile(&q, &[1, 2], &CompileOptions::default()).unwrap();
        let one = b2_spec(1);
        assert_eq!(
            p.dfa.equivalent(&CompleteDfa::accept_all(one.alphabet())).unwrap(),
            None
        );
    }

    #[test]
    fn exists_compile_agrees_with_brute_force_quantification() {
        // drop track 1 of (y < x) over base-2 pairs: ∃y y<x holds iff x ≥ 1
        let spec = b2_spec(2);
        let lt = lt_relation(2);
        let q = ConjunctiveQuery::new(spec.clone()).with(Literal::pos(lt, [1usize, 0]));
        let p = exists_compile(&q, &[1], &CompileOptions::default()).unwrap();
        let one = b2_spec(1);
        for w in all_words(&one, 4) {
            let x = one.tuple_decode(&w).unwrap()[0];
            let any = (0..=x.saturating_add(2)).any(|y| y < x);
            assert_eq!(p.dfa.accepts(&w), any, "{w:?}");
        }

        // drop track 1 of (x < y): ∃y x<y always holds at the value level,
        // even when the witness needs an extra digit (x all ones)
        let q2 = ConjunctiveQuery::new(spec).with(Literal::pos(lt_relation(2), [0usize, 1]));
        let p2 = exists_compile(&q2, &[1], &CompileOptions::default()).unwrap();
        assert_eq!(
            p2.dfa.equivalent(&CompleteDfa::accept_all(one.alphabet())).unwrap(),
            None
        );
        assert!(p2.dfa.accepts(&[1, 1, 1])); // witness y=8 is one digit longer
    }

    #[test]
    fn exists_compile_rejects_bad_drops() {
        let spec = b2_spec(2);
        let q = ConjunctiveQuery::new(spec);
        assert!(exists_compile(&q, &[], &CompileOptions::default()).is_err());
        assert!(exists_compile(&q, &[0, 1], &CompileOptions::default()).is_err());
    }

    #[test]
    fn peak_tracks_intermediate_growth() {
        let spec = b2_spec(3);
        let q = ConjunctiveQuery::new(spec)
            .with(Literal::pos(base_adder(2), [0usize, 1, 2]))
            .with(Literal::pos(lt_relation(2), [0usize, 1]));
        let compiled = compile(&q, &CompileOptions::default()).unwrap();
        assert!(compiled.peak_states >= compiled.dfa.state_count());
    }
}
