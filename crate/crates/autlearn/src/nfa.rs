//! Nondeterministic automata. These only arise from projection; the subset
//! construction turns them back into complete DFAs.

use std::collections::HashMap;

use crate::alphabet::{Letter, TupleAlphabet};
use crate::dfa::CompleteDfa;

#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: TupleAlphabet,
    initials: Vec<u32>,
    accepting: Vec<bool>,
    /// delta[state * letter_count + letter] = sorted target list
    delta: Vec<Vec<u32>>,
}

impl Nfa {
    pub(crate) fn new(
        alphabet: TupleAlphabet,
        initials: Vec<u32>,
        accepting: Vec<bool>,
        delta: Vec<Vec<u32>>,
    ) -> Self {
        Self { alphabet, initials, accepting, delta }
    }

    pub fn alphabet(&self) -> &TupleAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    /// Language-preserving subset construction. Subsets are discovered
    /// breadth-first with letters in canonical order, so state numbering is
    /// deterministic. The empty subset becomes an explicit sink.
    pub fn determinize(&self) -> CompleteDfa {
        let k = self.alphabet.letter_count();
        let mut start = self.initials.clone();
        start.sort_unstable();
        start.dedup();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<u32> = Vec::new();
        let mut head = 0usize;
        while head < subsets.len() {
            for l in 0..k {
                let mut next: Vec<u32> = Vec::new();
                for &s in &subsets[head] {
                    next.extend_from_slice(&self.delta[s as usize * k + l]);
                }
                next.sort_unstable();
                next.dedup();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                delta.push(id);
            }
            head += 1;
        }
        let accepting = subsets
            .iter()
            .map(|set| set.iter().any(|&s| self.accepting[s as usize]))
            .collect();
        CompleteDfa::new(self.alphabet.clone(), 0, accepting, delta)
            .expect("subset construction produces a well-formed DFA")
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        let k = self.alphabet.letter_count();
        let mut cur = self.initials.clone();
        for &l in word {
            let mut next: Vec<u32> = Vec::new();
            for &s in &cur {
                next.extend_from_slice(&self.delta[s as usize * k + l as usize]);
            }
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|&s| self.accepting[s as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::ProductMode;

    fn pair_alphabet() -> TupleAlphabet {
        TupleAlphabet::uniform(2, 2).unwrap()
    }

    /// 2-track DFA accepting words where both tracks carry equal digits.
    fn all_same_track() -> CompleteDfa {
        let al = pair_alphabet();
        CompleteDfa::new(al, 0, vec![true, false], vec![0, 1, 1, 0, 1, 1, 1, 1]).unwrap()
    }

    fn words_up_to(alphabet: &TupleAlphabet, max_len: usize) -> Vec<Vec<Letter>> {
        let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in alphabet.letters() {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn project_all_same_gives_accept_all() {
        let d = all_same_track();
        let p = d.project(&[0]).unwrap().determinize();
        let one = TupleAlphabet::uniform(2, 1).unwrap();
        assert_eq!(p.equivalent(&CompleteDfa::accept_all(one)).unwrap(), None);
    }

    #[test]
    fn project_rejects_bad_track_sets() {
        let d = all_same_track();
        assert!(d.project(&[]).is_err());
        assert!(d.project(&[0, 1]).is_err());
    }

    #[test]
    fn determinize_agrees_with_brute_force_image() {
        // a 2-track automaton with some structure: equal tracks OR first
        // track all zeros
        let eq = all_same_track();
        let zero0 = {
            let al = pair_alphabet();
            // track 0 digit must be 0 throughout
            CompleteDfa::new(al, 0, vec![true, false], vec![0, 0, 1, 1, 1, 1, 1, 1]).unwrap()
        };
        let d = eq.product(&zero0, ProductMode::Or).unwrap();
        let p = d.project(&[1]).unwrap();
        let pd = p.determinize();
        let one = TupleAlphabet::uniform(2, 1).unwrap();
        let full = pair_alphabet();
        for w in words_up_to(&one, 5) {
            // brute-force image: does some track-0 assignment make d accept?
            let mut any = false;
            let extensions = (0..(1usize << w.len())).collect::<Vec<_>>();
            for bits in extensions {
                let full_word: Vec<Letter> = w
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| full.pack(&[((bits >> i) & 1) as u16, b]))
                    .collect();
                if d.accepts(&full_word) {
                    any = true;
                    break;
                }
            }
            assert_eq!(pd.accepts(&w), any, "{w:?}");
            assert_eq!(p.accepts(&w), any, "{w:?}");
        }
    }
}
