//! Automatic sequences as DFAOs.
//!
//! A DFAO reads the msd-first representation of n in its numeration system
//! and outputs the symbol attached to the final state. Built-ins cover the
//! Thue-Morse and Baum-Sweet sequences (base 2), the Fibonacci word
//! (Zeckendorf) and the Tribonacci word (Tribonacci system).

use crate::alphabet::{Letter, TupleAlphabet};
use crate::dfa::{CompleteDfa, ProductMode};
use crate::numeration::{NumerationSystem, TrackSystemSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueMode {
    Eq,
    Neq,
}

/// A deterministic automaton with output. The skeleton must be complete and
/// its initial state must loop on digit 0, so leading zeros do not change
/// the result.
#[derive(Debug, Clone)]
pub struct SequenceDfao {
    system: NumerationSystem,
    skeleton: CompleteDfa,
    outputs: Vec<u16>,
}

impl SequenceDfao {
    pub fn new(system: NumerationSystem, skeleton: CompleteDfa, outputs: Vec<u16>) -> Result<Self> {
        if skeleton.alphabet().arity() != 1 || skeleton.alphabet().radices()[0] != system.radix() {
            return Err(Error::AlphabetMismatch(
                "DFAO skeleton must read single digits of the system".into(),
            ));
        }
        if outputs.len() != skeleton.state_count() {
            return Err(Error::InvalidInput("one output per state required".into()));
        }
        if skeleton.next(skeleton.initial(), 0) != skeleton.initial() {
            return Err(Error::InvalidInput("DFAO initial state must loop on digit 0".into()));
        }
        Ok(Self { system, skeleton, outputs })
    }

    pub fn system(&self) -> &NumerationSystem {
        &self.system
    }

    pub fn skeleton(&self) -> &CompleteDfa {
        &self.skeleton
    }

    pub fn outputs(&self) -> &[u16] {
        &self.outputs
    }

    pub fn output_alphabet(&self) -> Vec<u16> {
        let mut symbols: Vec<u16> = self.outputs.clone();
        symbols.sort_unstable();
        symbols.dedup();
        symbols
    }

    /// The n-th term of the sequence.
    pub fn eval(&self, n: u64) -> u16 {
        let word = self.system.encode(n);
        self.eval_word(&word)
    }

    /// Output on a raw digit word (leading zeros permitted).
    pub fn eval_word(&self, word: &[Letter]) -> u16 {
        self.outputs[self.skeleton.run(word) as usize]
    }

    /// One-track automaton accepting the valid representations of exactly
    /// those n with X[n] = symbol.
    pub fn output_selector(&self, symbol: u16) -> CompleteDfa {
        let accepting: Vec<bool> = self.outputs.iter().map(|&o| o == symbol).collect();
        let k = self.skeleton.alphabet().letter_count();
        let delta: Vec<u32> = (0..self.skeleton.state_count() as u32)
            .flat_map(|s| (0..k).map(move |l| self.skeleton.next(s, l as Letter)))
            .collect();
        let raw = CompleteDfa::new(
            self.skeleton.alphabet().clone(),
            self.skeleton.initial(),
            accepting,
            delta,
        )
        .expect("skeleton is well-formed");
        raw.product(self.system.validity(), ProductMode::And)
            .expect("same digit alphabet")
            .minimize()
    }

    /// Two-track automaton comparing sequence values: accepts a padded pair
    /// (u, v) iff X[u] = Y[v] (or ≠). Both sequences must share a numeration
    /// system. Track validity is not enforced here; the predicate compiler
    /// injects it.
    pub fn value_relation(&self, other: &SequenceDfao, mode: ValueMode) -> Result<CompleteDfa> {
        if self.system != other.system {
            return Err(Error::AlphabetMismatch(
                "value relation needs a shared numeration system".into(),
            ));
        }
        let alphabet = TupleAlphabet::uniform(self.system.radix(), 2)?;
        let k = alphabet.letter_count();
        let (na, nb) = (self.skeleton.state_count() as u32, other.skeleton.state_count() as u32);
        let id = |p: u32, q: u32| p * nb + q;
        let n = (na * nb) as usize;
        let mut delta = vec![0u32; n * k];
        let mut accepting = vec![false; n];
        for p in 0..na {
            for q in 0..nb {
                let s = id(p, q);
                let same = self.outputs[p as usize] == other.outputs[q as usize];
                accepting[s as usize] = match mode {
                    ValueMode::Eq => same,
                    ValueMode::Neq => !same,
                };
                for l in 0..k {
                    let a = alphabet.digit(l as Letter, 0) as Letter;
                    let b = alphabet.digit(l as Letter, 1) as Letter;
                    delta[s as usize * k + l] =
                        id(self.skeleton.next(p, a), other.skeleton.next(q, b));
                }
            }
        }
        let full = CompleteDfa::new(
            alphabet,
            id(self.skeleton.initial(), other.skeleton.initial()),
            accepting,
            delta,
        )?;
        Ok(full.minimize())
    }

    /// Two-track synchronized automaton accepting the padded pairs
    /// (n, X[n]), with the value track in the same numeration system.
    pub fn synchronized(&self) -> CompleteDfa {
        let spec = TrackSystemSpec::uniform(self.system.clone(), 2).expect("two tracks");
        let alphabet = spec.alphabet();
        let mut union: Option<CompleteDfa> = None;
        for symbol in self.output_alphabet() {
            let sel =
                self.output_selector(symbol).embed(&alphabet, &[0]).expect("radices match");
            let cst = spec.const_automaton(1, symbol as u64);
            let term = sel.product(&cst, ProductMode::And).expect("same alphabet");
            union = Some(match union {
                None => term,
                Some(u) => u.product(&term, ProductMode::Or).expect("same alphabet"),
            });
        }
        union.expect("output alphabet is nonempty").minimize()
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "thue-morse" => Ok(Self::thue_morse()),
            "baum-sweet" => Ok(Self::baum_sweet()),
            "fibonacci-word" => Ok(Self::fibonacci_word()),
            "tribonacci-word" => Ok(Self::tribonacci_word()),
            _ => Err(Error::InvalidInput(format!("unknown sequence {name}"))),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 4] =
        ["thue-morse", "baum-sweet", "fibonacci-word", "tribonacci-word"];

    /// t(n) = parity of the number of 1 bits of n.
    pub fn thue_morse() -> Self {
        let al = TupleAlphabet::uniform(2, 1).unwrap();
        let skeleton = CompleteDfa::new(al, 0, vec![false, false], vec![0, 1, 1, 0]).unwrap();
        Self { system: NumerationSystem::base(2).unwrap(), skeleton, outputs: vec![0, 1] }
    }

    /// b(n) = 1 iff the binary expansion of n contains no odd-length block
    /// of zeros. A dedicated start state absorbs leading zeros.
    pub fn baum_sweet() -> Self {
        let al = TupleAlphabet::uniform(2, 1).unwrap();
        // states: 0 start, 1 after a one, 2 odd zero run, 3 even zero run,
        // 4 dead (odd block closed by a one)
        let skeleton = CompleteDfa::new(
            al,
            0,
            vec![false; 5],
            vec![
                0, 1, // start
                2, 1, // after one
                3, 4, // odd run
                2, 1, // even run
                4, 4, // dead
            ],
        )
        .unwrap();
        Self {
            system: NumerationSystem::base(2).unwrap(),
            skeleton,
            outputs: vec![1, 1, 0, 1, 0],
        }
    }

    /// Fixed point of 0 -> 01, 1 -> 0; f(n) is the last digit of the
    /// Zeckendorf representation of n.
    pub fn fibonacci_word() -> Self {
        let al = TupleAlphabet::uniform(2, 1).unwrap();
        // states: 0 last digit 0, 1 last digit 1, 2 invalid ("11")
        let skeleton = CompleteDfa::new(al, 0, vec![false; 3], vec![0, 1, 0, 2, 2, 2]).unwrap();
        Self { system: NumerationSystem::zeckendorf(), skeleton, outputs: vec![0, 1, 0] }
    }

    /// Fixed point of 0 -> 01, 1 -> 02, 2 -> 0; tr(n) is the length of the
    /// trailing run of 1 digits in the Tribonacci representation of n.
    pub fn tribonacci_word() -> Self {
        let al = TupleAlphabet::uniform(2, 1).unwrap();
        // states: trailing-run lengths 0, 1, 2 and an invalid state
        let skeleton =
            CompleteDfa::new(al, 0, vec![false; 4], vec![0, 1, 0, 2, 0, 3, 3, 3]).unwrap();
        Self { system: NumerationSystem::tribonacci(), skeleton, outputs: vec![0, 1, 2, 0] }
    }
}
