//! Numeration systems and their relation automata.
//!
//! A numeration system assigns every natural number a unique canonical
//! msd-first digit string: positional base k, the Zeckendorf system over
//! Fibonacci numbers (no two adjacent 1 digits), the Tribonacci system (no
//! three adjacent 1 digits), or a user-defined system given by a validity
//! recognizer and a list of place values. Numeric order coincides with
//! lexicographic order on equal-length padded representations in all of
//! these; the comparison and increment automata rely on that.

use crate::alphabet::{Letter, TupleAlphabet, Word};
use crate::dfa::{CompleteDfa, ProductMode};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemKind {
    Base(u16),
    Zeckendorf,
    Tribonacci,
    Custom(String),
}

#[derive(Debug, Clone)]
pub struct NumerationSystem {
    kind: SystemKind,
    radix: u16,
    /// Place values in increasing order, for non-positional systems.
    places: Vec<u64>,
    /// One-track recognizer of valid digit strings (leading zeros allowed).
    validity: CompleteDfa,
}

impl PartialEq for NumerationSystem {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.radix == other.radix && self.places == other.places
    }
}

fn digit_alphabet(radix: u16) -> TupleAlphabet {
    TupleAlphabet::uniform(radix, 1).expect("radix checked by caller")
}

impl NumerationSystem {
    pub fn base(k: u16) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedSystem(format!("base {k}")));
        }
        Ok(Self {
            kind: SystemKind::Base(k),
            radix: k,
            places: Vec::new(),
            validity: CompleteDfa::accept_all(digit_alphabet(k)),
        })
    }

    pub fn zeckendorf() -> Self {
        // states: 0 last digit 0, 1 last digit 1, 2 saw "11"
        let validity = CompleteDfa::new(
            digit_alphabet(2),
            0,
            vec![true, true, false],
            vec![0, 1, 0, 2, 2, 2],
        )
        .unwrap();
        let mut places = vec![1u64, 2];
        while places.len() <= 90 {
            let n = places.len();
            match places[n - 1].checked_add(places[n - 2]) {
                Some(next) => places.push(next),
                None => break,
            }
        }
        Self { kind: SystemKind::Zeckendorf, radix: 2, places, validity }
    }

    pub fn tribonacci() -> Self {
        // states track the current run of 1 digits: 0, 1, 2, then dead
        let validity = CompleteDfa::new(
            digit_alphabet(2),
            0,
            vec![true, true, true, false],
            vec![0, 1, 0, 2, 0, 3, 3, 3],
        )
        .unwrap();
        let mut places = vec![1u64, 2, 4];
        while places.len() <= 90 {
            let n = places.len();
            match places[n - 1]
                .checked_add(places[n - 2])
                .and_then(|s| s.checked_add(places[n - 3]))
            {
                Some(next) => places.push(next),
                None => break,
            }
        }
        Self { kind: SystemKind::Tribonacci, radix: 2, places, validity }
    }

    /// A user-defined system: place values in increasing order starting at 1,
    /// and a one-track validity recognizer over the digit alphabet.
    pub fn custom(name: &str, places: Vec<u64>, validity: CompleteDfa) -> Result<Self> {
        if validity.alphabet().arity() != 1 {
            return Err(Error::UnsupportedSystem(
                "validity recognizer must have one track".into(),
            ));
        }
        if places.first() != Some(&1) || places.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsupportedSystem(
                "place values must be strictly increasing and start at 1".into(),
            ));
        }
        let radix = validity.alphabet().radices()[0];
        Ok(Self { kind: SystemKind::Custom(name.to_string()), radix, places, validity })
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn radix(&self) -> u16 {
        self.radix
    }

    pub fn validity(&self) -> &CompleteDfa {
        &self.validity
    }

    pub fn is_positional(&self) -> bool {
        matches!(self.kind, SystemKind::Base(_))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SystemKind::Base(k) => format!("base{k}"),
            SystemKind::Zeckendorf => "zeckendorf".into(),
            SystemKind::Tribonacci => "tribonacci".into(),
            SystemKind::Custom(n) => n.clone(),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "zeckendorf" | "fibonacci" => Ok(Self::zeckendorf()),
            "tribonacci" => Ok(Self::tribonacci()),
            _ => {
                if let Some(k) = name.strip_prefix("base") {
                    let k: u16 = k
                        .parse()
                        .map_err(|_| Error::UnsupportedSystem(name.to_string()))?;
                    Self::base(k)
                } else {
                    Err(Error::UnsupportedSystem(name.to_string()))
                }
            }
        }
    }

    /// Place value of digit position `i`, counted from the least significant
    /// end.
    pub fn place(&self, i: usize) -> Result<u64> {
        match self.kind {
            SystemKind::Base(k) => (k as u64)
                .checked_pow(i as u32)
                .ok_or_else(|| Error::InvalidInput("place value overflow".into())),
            _ => self
                .places
                .get(i)
                .copied()
                .ok_or_else(|| Error::InvalidInput("representation too long for system".into())),
        }
    }

    /// Canonical msd-first representation; `encode(0)` is the empty word.
    pub fn encode(&self, n: u64) -> Word {
        match self.kind {
            SystemKind::Base(k) => {
                let mut digits: Word = Vec::new();
                let mut rem = n;
                while rem > 0 {
                    digits.push((rem % k as u64) as Letter);
                    rem /= k as u64;
                }
                digits.reverse();
                digits
            }
            _ => {
                if n == 0 {
                    return Vec::new();
                }
                // greedy over the place values, most significant first
                let top = self.places.iter().rposition(|&p| p <= n).expect("places start at 1");
                let mut digits: Word = Vec::with_capacity(top + 1);
                let mut rem = n;
                for i in (0..=top).rev() {
                    let p = self.places[i];
                    let mut d = 0u64;
                    while d + 1 < self.radix as u64 && (d + 1) * p <= rem {
                        d += 1;
                    }
                    rem -= d * p;
                    digits.push(d as Letter);
                }
                debug_assert_eq!(rem, 0, "greedy encoding must consume the whole value");
                digits
            }
        }
    }

    pub fn is_valid(&self, word: &[Letter]) -> bool {
        word.iter().all(|&d| d < self.radix) && self.validity.accepts(word)
    }

    /// Value of a valid representation; leading zeros are permitted.
    pub fn decode(&self, word: &[Letter]) -> Result<u64> {
        if !self.is_valid(word) {
            return Err(Error::InvalidRepresentation(format!(
                "{:?} is not a valid {} representation",
                word,
                self.name()
            )));
        }
        let mut value: u64 = 0;
        for (i, &d) in word.iter().rev().enumerate() {
            if d == 0 {
                continue;
            }
            let term = self
                .place(i)?
                .checked_mul(d as u64)
                .ok_or_else(|| Error::InvalidInput("decoded value overflows u64".into()))?;
            value = value
                .checked_add(term)
                .ok_or_else(|| Error::InvalidInput("decoded value overflows u64".into()))?;
        }
        Ok(value)
    }
}

/// One numeration system per track. Tracks may differ.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackSystemSpec {
    systems: Vec<NumerationSystem>,
}

impl TrackSystemSpec {
    pub fn new(systems: Vec<NumerationSystem>) -> Result<Self> {
        if systems.is_empty() {
            return Err(Error::InvalidInput("need at least one track".into()));
        }
        Ok(Self { systems })
    }

    pub fn uniform(system: NumerationSystem, arity: usize) -> Result<Self> {
        Self::new(vec![system; arity])
    }

    pub fn arity(&self) -> usize {
        self.systems.len()
    }

    pub fn system(&self, track: usize) -> &NumerationSystem {
        &self.systems[track]
    }

    pub fn systems(&self) -> &[NumerationSystem] {
        &self.systems
    }

    pub fn alphabet(&self) -> TupleAlphabet {
        TupleAlphabet::new(self.systems.iter().map(|s| s.radix()).collect())
            .expect("track radices are validated per system")
    }

    /// Per-track canonical encodings, left-padded with zeros to a common
    /// length and zipped into tuple letters. All zeros encode as the empty
    /// word.
    pub fn tuple_encode(&self, values: &[u64]) -> Word {
        assert_eq!(values.len(), self.arity(), "one value per track");
        let alphabet = self.alphabet();
        let tracks: Vec<Word> =
            values.iter().zip(&self.systems).map(|(&v, sys)| sys.encode(v)).collect();
        let len = tracks.iter().map(|t| t.len()).max().unwrap_or(0);
        (0..len)
            .map(|i| {
                let digits: Vec<u16> = tracks
                    .iter()
                    .map(|t| {
                        let pad = len - t.len();
                        if i < pad {
                            0
                        } else {
                            t[i - pad]
                        }
                    })
                    .collect();
                alphabet.pack(&digits)
            })
            .collect()
    }

    /// Per-track decode; fails on any invalid track.
    pub fn tuple_decode(&self, word: &[Letter]) -> Result<Vec<u64>> {
        let alphabet = self.alphabet();
        (0..self.arity())
            .map(|t| {
                let track: Word = word.iter().map(|&l| alphabet.digit(l, t)).collect();
                self.systems[t].decode(&track)
            })
            .collect()
    }

    pub fn is_valid(&self, word: &[Letter]) -> bool {
        let alphabet = self.alphabet();
        (0..self.arity()).all(|t| {
            let track: Word = word.iter().map(|&l| alphabet.digit(l, t)).collect();
            self.systems[t].is_valid(&track)
        })
    }

    /// Conjunction of all per-track validity recognizers over the tuple
    /// alphabet.
    pub fn validity_dfa(&self) -> CompleteDfa {
        let alphabet = self.alphabet();
        let mut acc = CompleteDfa::accept_all(alphabet.clone());
        for (t, sys) in self.systems.iter().enumerate() {
            if sys.validity().is_trivially_accept_all() {
                continue;
            }
            let lifted = sys
                .validity()
                .embed(&alphabet, &[t])
                .expect("validity reads the same digits as its track");
            acc = acc.product(&lifted, ProductMode::And).expect("same alphabet");
        }
        acc
    }

    /// Accepts exactly the tuple words whose given track reads 0*·encode(n),
    /// with no constraint on the other tracks.
    pub fn const_automaton(&self, track: usize, n: u64) -> CompleteDfa {
        assert!(track < self.arity());
        let alphabet = self.alphabet();
        let k = alphabet.letter_count();
        let rep = self.systems[track].encode(n);
        let m = rep.len();
        // states 0..=m walk the representation; m+1 is the sink
        let sink = (m + 1) as u32;
        let n_states = m + 2;
        let mut delta = vec![sink; n_states * k];
        let mut accepting = vec![false; n_states];
        accepting[m] = true;
        for l in 0..k {
            let d = alphabet.digit(l as Letter, track);
            if d == 0 {
                delta[l] = 0; // leading zeros loop at the start
            }
            if m > 0 && d == rep[0] {
                delta[l] = 1;
            }
            for s in 1..m {
                if d == rep[s] {
                    delta[s * k + l] = (s + 1) as u32;
                }
            }
        }
        CompleteDfa::new(alphabet, 0, accepting, delta).expect("const automaton is well-formed")
    }
}

/// Two-track equality of padded representations (hence of values).
pub fn eq_relation(radix: u16) -> CompleteDfa {
    let alphabet = TupleAlphabet::uniform(radix, 2).expect("radix >= 2");
    let k = alphabet.letter_count();
    let mut delta = vec![0u32; 2 * k];
    for l in 0..k {
        let same = alphabet.digit(l as Letter, 0) == alphabet.digit(l as Letter, 1);
        delta[l] = if same { 0 } else { 1 };
        delta[k + l] = 1;
    }
    CompleteDfa::new(alphabet, 0, vec![true, false], delta).unwrap()
}

/// Two-track strict numeric order: accepts (m, n) padded iff m < n. Correct
/// because numeric order equals padded lexicographic order in the supported
/// systems.
pub fn lt_relation(radix: u16) -> CompleteDfa {
    let alphabet = TupleAlphabet::uniform(radix, 2).expect("radix >= 2");
    let k = alphabet.letter_count();
    // states: 0 equal so far, 1 less, 2 greater
    let mut delta = vec![0u32; 3 * k];
    for l in 0..k {
        let a = alphabet.digit(l as Letter, 0);
        let b = alphabet.digit(l as Letter, 1);
        delta[l] = match a.cmp(&b) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Greater => 2,
        };
        delta[k + l] = 1;
        delta[2 * k + l] = 2;
    }
    CompleteDfa::new(alphabet, 0, vec![false, true, false], delta).unwrap()
}

/// Two-track successor relation: accepts (n, x) padded iff x = n + 1.
/// Built as valid(n) ∧ valid(x) ∧ n<x with no valid value strictly in
/// between; the "in between" witness lives on a third track that is
/// projected away, determinized and subtracted.
pub fn incr_relation(system: &NumerationSystem) -> CompleteDfa {
    let spec3 = TrackSystemSpec::uniform(system.clone(), 3).expect("arity 3");
    let al3 = spec3.alphabet();
    let lt = lt_relation(system.radix());
    let between = spec3
        .validity_dfa()
        .product(&lt.embed(&al3, &[0, 2]).unwrap(), ProductMode::And)
        .unwrap()
        .product(&lt.embed(&al3, &[2, 1]).unwrap(), ProductMode::And)
        .unwrap();
    let some_between = between.project(&[0, 1]).unwrap().determinize();
    let spec2 = TrackSystemSpec::uniform(system.clone(), 2).expect("arity 2");
    spec2
        .validity_dfa()
        .product(&lt, ProductMode::And)
        .unwrap()
        .product(&some_between, ProductMode::AndNot)
        .unwrap()
        .minimize()
}

/// Three-track addition relation for base k: accepts (x, y, z) padded iff
/// x + y = z. Reading msd-first, the state holds the running discrepancy
/// x + y − z of the prefixes, which stays in {0, −1} on accepting paths.
pub fn base_adder(k: u16) -> CompleteDfa {
    let alphabet = TupleAlphabet::uniform(k, 3).expect("radix >= 2");
    let count = alphabet.letter_count();
    // states: 0 discrepancy 0, 1 discrepancy -1, 2 sink
    let mut delta = vec![2u32; 3 * count];
    for l in 0..count {
        let a = alphabet.digit(l as Letter, 0) as i32;
        let b = alphabet.digit(l as Letter, 1) as i32;
        let c = alphabet.digit(l as Letter, 2) as i32;
        let step = a + b - c;
        // from discrepancy d, the new discrepancy is k*d + step
        for (state, d) in [(0usize, 0i32), (1, -1)] {
            let next = k as i32 * d + step;
            if next == 0 {
                delta[state * count + l] = 0;
            } else if next == -1 {
                delta[state * count + l] = 1;
            }
        }
    }
    CompleteDfa::new(alphabet, 0, vec![true, false, false], delta).unwrap()
}

/// The comparison and successor automata of a system, over two tracks.
pub struct RelationAutomata {
    pub eq: CompleteDfa,
    pub lt: CompleteDfa,
    pub incr: CompleteDfa,
}

pub fn relation_automata(system: &NumerationSystem) -> RelationAutomata {
    RelationAutomata {
        eq: eq_relation(system.radix()),
        lt: lt_relation(system.radix()),
        incr: incr_relation(system),
    }
}
