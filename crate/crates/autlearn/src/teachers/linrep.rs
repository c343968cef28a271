//! Linear representations of synchronized sequences.
//!
//! From a two-track synchronized automaton B for b, a triple (v, γ, w) is
//! read off with b(n) = v·γ(y)·w for the representations y of n: the state
//! vector carries, per B-state, the number of paths compatible with the
//! n-digits read so far and the accumulated value of their x-track. The
//! prefix-sum transformation turns a representation of b into one of
//! c(n) = Σ_{i<n} b(i) of twice the rank, exploiting that the values below
//! n are exactly the equal-length words lexicographically below y.

use crate::dfa::{CompleteDfa, ProductMode};
use crate::numeration::{NumerationSystem, TrackSystemSpec};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LinearRepresentation {
    rank: usize,
    v: Vec<i128>,
    /// One rank×rank row-major matrix per digit of the n-track.
    mats: Vec<Vec<i128>>,
    w: Vec<i128>,
}

impl LinearRepresentation {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn digit_count(&self) -> usize {
        self.mats.len()
    }

    /// v·γ(digits)·w via vector-matrix products, Θ(rank² · len).
    pub fn eval_digits(&self, digits: &[u16]) -> i128 {
        let r = self.rank;
        let mut cur = self.v.clone();
        let mut next = vec![0i128; r];
        for &d in digits {
            let m = &self.mats[d as usize];
            for x in next.iter_mut() {
                *x = 0;
            }
            for (i, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let row = &m[i * r..(i + 1) * r];
                for (j, &mij) in row.iter().enumerate() {
                    next[j] += c * mij;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur.iter().zip(&self.w).map(|(a, b)| a * b).sum()
    }

    /// Evaluation at a natural number. The empty representation of zero is
    /// padded to a single 0 digit: a length-zero word cannot carry a
    /// nonzero value.
    pub fn eval_nat(&self, system: &NumerationSystem, n: u64) -> i128 {
        let mut digits = system.encode(n);
        if digits.is_empty() {
            digits.push(0);
        }
        self.eval_digits(&digits)
    }
}

/// Reads the linear representation off a synchronized automaton. The rank
/// is twice the state count. Fails when B is not single-valued on some
/// n ≤ 100 or when the accumulated x-track values disagree with the
/// decoded ones there (the accumulator reads the x-track positionally,
/// which also covers non-positional systems as long as the values stay
/// below the first place where the systems diverge).
pub fn build_linear_rep(
    b: &CompleteDfa,
    spec: &TrackSystemSpec,
) -> Result<LinearRepresentation> {
    if spec.arity() != 2 || *b.alphabet() != spec.alphabet() {
        return Err(Error::AlphabetMismatch(
            "linear representations need a two-track synchronized automaton".into(),
        ));
    }
    let alphabet = spec.alphabet();
    let radix_x = spec.system(1).radix() as i128;
    let nb = b.state_count();
    let rank = 2 * nb;
    let digit_count = spec.system(0).radix() as usize;
    let mut mats = vec![vec![0i128; rank * rank]; digit_count];
    for s in 0..nb {
        for l in alphabet.letters() {
            let d = alphabet.digit(l, 0) as usize;
            let e = alphabet.digit(l, 1) as i128;
            let t = b.next(s as u32, l) as usize;
            let m = &mut mats[d];
            m[s * rank + t] += 1; // count into count
            m[(nb + s) * rank + (nb + t)] += radix_x; // shifted sum
            m[s * rank + (nb + t)] += e; // new digit, weighted by path count
        }
    }
    let mut v = vec![0i128; rank];
    v[b.initial() as usize] = 1;
    let mut w = vec![0i128; rank];
    for s in b.accepting_states() {
        w[nb + s as usize] = 1;
    }
    let rep = LinearRepresentation { rank, v, mats, w };

    // Validate single-valuedness and value agreement on small inputs.
    let validity = spec.validity_dfa();
    for n in 0..=100u64 {
        let pinned = b
            .product(&spec.const_automaton(0, n), ProductMode::And)?
            .product(&validity, ProductMode::And)?;
        let word = pinned.shortest_accepted().ok_or_else(|| {
            Error::NotSynchronized(format!("automaton has no value for n = {n}"))
        })?;
        let x = spec.tuple_decode(&word)?[1];
        let other = pinned.product(&spec.const_automaton(1, x), ProductMode::AndNot)?;
        if let Some(second) = other.shortest_accepted() {
            let x2 = spec.tuple_decode(&second)?[1];
            return Err(Error::NotSynchronized(format!(
                "two values {x} and {x2} for n = {n}"
            )));
        }
        let got = rep.eval_nat(spec.system(0), n);
        if got != x as i128 {
            return Err(Error::UnsupportedSystem(format!(
                "x-track values are not positionally readable: v·γ(rep({n}))·w = {got}, expected {x}"
            )));
        }
    }
    Ok(rep)
}

/// Linear representation of the partial sums c(n) = Σ_{i<n} b(i), twice
/// the rank of b's. Block structure per digit d:
/// [[γ(d), Σ_{e<d} γ(e)], [0, Σ_e γ(e)]]; the second block ranges over all
/// equal-length words strictly below the one being read. Invalid words
/// contribute zero on their own.
pub fn prefix_sum_rep(rep: &LinearRepresentation) -> LinearRepresentation {
    let r = rep.rank;
    let r2 = 2 * r;
    let digits = rep.digit_count();
    let mut total = vec![0i128; r * r];
    for m in &rep.mats {
        for (t, &x) in total.iter_mut().zip(m.iter()) {
            *t += x;
        }
    }
    let mut mats = Vec::with_capacity(digits);
    let mut below = vec![0i128; r * r];
    for d in 0..digits {
        let g = &rep.mats[d];
        let mut m = vec![0i128; r2 * r2];
        for i in 0..r {
            for j in 0..r {
                m[i * r2 + j] = g[i * r + j];
                m[i * r2 + (r + j)] = below[i * r + j];
                m[(r + i) * r2 + (r + j)] = total[i * r + j];
            }
        }
        mats.push(m);
        for (b, &x) in below.iter_mut().zip(g.iter()) {
            *b += x;
        }
    }
    let mut v = vec![0i128; r2];
    v[..r].copy_from_slice(&rep.v);
    let mut w = vec![0i128; r2];
    w[r..].copy_from_slice(&rep.w);
    LinearRepresentation { rank: r2, v, mats, w }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SequenceDfao;

    fn sync_spec(x: &SequenceDfao) -> TrackSystemSpec {
        TrackSystemSpec::uniform(x.system().clone(), 2).unwrap()
    }

    #[test]
    fn constant_zero_sequence_evaluates_to_zero() {
        let sys = NumerationSystem::base(2).unwrap();
        let spec = TrackSystemSpec::uniform(sys.clone(), 2).unwrap();
        let b = spec.const_automaton(1, 0);
        let rep = build_linear_rep(&b, &spec).unwrap();
        for n in 0..=100u64 {
            assert_eq!(rep.eval_nat(&sys, n), 0);
        }
    }

    #[test]
    fn thue_morse_rep_matches_popcount() {
        let tm = SequenceDfao::thue_morse();
        let spec = sync_spec(&tm);
        let rep = build_linear_rep(&tm.synchronized(), &spec).unwrap();
        assert_eq!(rep.rank(), 2 * tm.synchronized().state_count());
        for n in 0..=1000u64 {
            let expect = (n.count_ones() % 2) as i128;
            assert_eq!(rep.eval_nat(tm.system(), n), expect, "t({n})");
            // leading-zero invariance
            let mut digits = tm.system().encode(n);
            for _ in 0..3 {
                digits.insert(0, 0);
                assert_eq!(rep.eval_digits(&digits), expect, "t({n}) padded");
            }
        }
    }

    #[test]
    fn tribonacci_word_rep_reads_small_values() {
        let tr = SequenceDfao::tribonacci_word();
        let spec = sync_spec(&tr);
        let rep = build_linear_rep(&tr.synchronized(), &spec).unwrap();
        for n in 0..=1000u64 {
            assert_eq!(rep.eval_nat(tr.system(), n), tr.eval(n) as i128, "tr({n})");
        }
    }

    #[test]
    fn prefix_sum_rep_matches_direct_summation() {
        let tm = SequenceDfao::thue_morse();
        let spec = sync_spec(&tm);
        let rep = build_linear_rep(&tm.synchronized(), &spec).unwrap();
        let sums = prefix_sum_rep(&rep);
        let mut acc: i128 = 0;
        for n in 0..=1000u64 {
            assert_eq!(sums.eval_nat(tm.system(), n), acc, "c({n})");
            acc += tm.eval(n) as i128;
        }
    }

    #[test]
    fn non_synchronized_automaton_is_rejected() {
        let sys = NumerationSystem::base(2).unwrap();
        let spec = TrackSystemSpec::uniform(sys, 2).unwrap();
        let b = CompleteDfa::accept_all(spec.alphabet());
        assert!(matches!(
            build_linear_rep(&b, &spec),
            Err(Error::NotSynchronized(_))
        ));
    }
}
