//! Complete deterministic automata over tuple alphabets.
//!
//! Every automaton here is complete: the transition function is total, with
//! an explicit sink where needed. Construction operations number states
//! deterministically (breadth-first from the initial state, letters in
//! canonical order), so that repeated runs produce identical automata.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Letter, TupleAlphabet, Word};
use crate::nfa::Nfa;
use crate::{Error, Result};

/// Boolean combination applied by [`CompleteDfa::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    And,
    Or,
    Xor,
    AndNot,
}

impl ProductMode {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            ProductMode::And => a && b,
            ProductMode::Or => a || b,
            ProductMode::Xor => a != b,
            ProductMode::AndNot => a && !b,
        }
    }
}

/// A complete DFA: total transition function, one initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteDfa {
    alphabet: TupleAlphabet,
    initial: u32,
    accepting: Vec<bool>,
    /// delta[state * letter_count + letter]
    delta: Vec<u32>,
}

impl CompleteDfa {
    pub fn new(
        alphabet: TupleAlphabet,
        initial: u32,
        accepting: Vec<bool>,
        delta: Vec<u32>,
    ) -> Result<Self> {
        let n = accepting.len();
        let k = alphabet.letter_count();
        if n == 0 {
            return Err(Error::InvalidInput("automaton needs at least one state".into()));
        }
        if delta.len() != n * k {
            return Err(Error::InvalidInput(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * k
            )));
        }
        if initial as usize >= n || delta.iter().any(|&t| t as usize >= n) {
            return Err(Error::InvalidInput("transition target out of range".into()));
        }
        Ok(Self { alphabet, initial, accepting, delta })
    }

    pub fn accept_all(alphabet: TupleAlphabet) -> Self {
        let k = alphabet.letter_count();
        Self { alphabet, initial: 0, accepting: vec![true], delta: vec![0; k] }
    }

    pub fn reject_all(alphabet: TupleAlphabet) -> Self {
        let k = alphabet.letter_count();
        Self { alphabet, initial: 0, accepting: vec![false], delta: vec![0; k] }
    }

    pub fn alphabet(&self) -> &TupleAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.state_count() as u32).filter(|&s| self.accepting[s as usize])
    }

    pub fn next(&self, state: u32, letter: Letter) -> u32 {
        self.delta[state as usize * self.alphabet.letter_count() + letter as usize]
    }

    pub fn run_from(&self, mut state: u32, word: &[Letter]) -> u32 {
        for &l in word {
            state = self.next(state, l);
        }
        state
    }

    pub fn run(&self, word: &[Letter]) -> u32 {
        self.run_from(self.initial, word)
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.is_accepting(self.run(word))
    }

    /// Same automaton rebased at a different initial state.
    pub fn with_initial(&self, state: u32) -> Self {
        let mut d = self.clone();
        d.initial = state;
        d
    }

    /// True if every state is accepting. Conservative: a DFA may accept
    /// everything without satisfying this, but products built here never do.
    pub fn is_trivially_accept_all(&self) -> bool {
        self.accepting.iter().all(|&a| a)
    }

    /// Reachable product construction.
    pub fn product(&self, other: &CompleteDfa, mode: ProductMode) -> Result<CompleteDfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "product over {:?} vs {:?}",
                self.alphabet.radices(),
                other.alphabet.radices()
            )));
        }
        let k = self.alphabet.letter_count();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut delta: Vec<u32> = Vec::new();
        let start = (self.initial, other.initial);
        index.insert(start, 0);
        pairs.push(start);
        let mut head = 0usize;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            for l in 0..k as u32 {
                let t = (self.next(p, l as Letter), other.next(q, l as Letter));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    (pairs.len() - 1) as u32
                });
                delta.push(id);
            }
            head += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| mode.apply(self.accepting[p as usize], other.accepting[q as usize]))
            .collect();
        Ok(CompleteDfa { alphabet: self.alphabet.clone(), initial: 0, accepting, delta })
    }

    pub fn complement(&self) -> CompleteDfa {
        let mut d = self.clone();
        for a in &mut d.accepting {
            *a = !*a;
        }
        d
    }

    /// Restriction to reachable states, renumbered in BFS discovery order.
    fn reachable(&self) -> CompleteDfa {
        let k = self.alphabet.letter_count();
        let n = self.state_count();
        let mut id = vec![u32::MAX; n];
        let mut order: Vec<u32> = Vec::new();
        id[self.initial as usize] = 0;
        order.push(self.initial);
        let mut head = 0usize;
        while head < order.len() {
            let s = order[head];
            for l in 0..k {
                let t = self.delta[s as usize * k + l];
                if id[t as usize] == u32::MAX {
                    id[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
            head += 1;
        }
        let mut delta = Vec::with_capacity(order.len() * k);
        for &s in &order {
            for l in 0..k {
                delta.push(id[self.delta[s as usize * k + l] as usize]);
            }
        }
        let accepting = order.iter().map(|&s| self.accepting[s as usize]).collect();
        CompleteDfa { alphabet: self.alphabet.clone(), initial: 0, accepting, delta }
    }

    /// Unique minimal complete DFA for the same language, canonically
    /// numbered. Partition refinement with the smaller-half rule.
    pub fn minimize(&self) -> CompleteDfa {
        let d = self.reachable();
        let n = d.state_count();
        let k = d.alphabet.letter_count();
        if n == 1 {
            return d;
        }

        // Inverse transitions as CSR, one block per letter.
        let mut rev_start = vec![0u32; n * k + 1];
        for s in 0..n {
            for l in 0..k {
                let t = d.delta[s * k + l] as usize;
                rev_start[l * n + t + 1] += 1;
            }
        }
        for i in 0..n * k {
            rev_start[i + 1] += rev_start[i];
        }
        let mut rev = vec![0u32; n * k];
        for s in 0..n {
            for l in 0..k {
                let t = d.delta[s * k + l] as usize;
                rev[rev_start[l * n + t] as usize] = s as u32;
                rev_start[l * n + t] += 1;
            }
        }
        // shift the cursors back so rev_start[i]..rev_start[i+1] indexes rev
        for i in (1..=n * k).rev() {
            rev_start[i] = rev_start[i - 1];
        }
        rev_start[0] = 0;

        // Refinable partition: states grouped contiguously in `elems`.
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&s| !d.accepting[s as usize]);
        let mut loc = vec![0u32; n];
        for (i, &s) in elems.iter().enumerate() {
            loc[s as usize] = i as u32;
        }
        let acc_count = d.accepting.iter().filter(|&&a| a).count();
        let mut block_of = vec![0u32; n];
        let mut first: Vec<u32> = Vec::new();
        let mut past: Vec<u32> = Vec::new();
        if acc_count == 0 || acc_count == n {
            first.push(0);
            past.push(n as u32);
        } else {
            first.push(0);
            past.push(acc_count as u32);
            first.push(acc_count as u32);
            past.push(n as u32);
            for i in acc_count..n {
                block_of[elems[i] as usize] = 1;
            }
        }
        let nblocks_now = first.len();

        // Worklist of (block, letter) splitters; one pair processed per pop,
        // so a block splitting never invalidates an in-flight splitter.
        let mut in_work: Vec<bool> = Vec::new();
        let mut work: VecDeque<(u32, u16)> = VecDeque::new();
        let push_all = |b: u32, work: &mut VecDeque<(u32, u16)>, in_work: &mut Vec<bool>| {
            for l in 0..k {
                in_work[b as usize * k + l] = true;
                work.push_back((b, l as u16));
            }
        };
        in_work.resize(nblocks_now * k, false);
        if nblocks_now == 2 {
            let smaller = if acc_count * 2 <= n { 0 } else { 1 };
            push_all(smaller, &mut work, &mut in_work);
        }

        let mut marked: Vec<u32> = vec![0; nblocks_now];
        let mut touched: Vec<u32> = Vec::new();

        let mut splitter: Vec<u32> = Vec::new();
        while let Some((b, a)) = work.pop_front() {
            in_work[b as usize * k + a as usize] = false;
            // Mark predecessors of block b under letter a. Marking reorders
            // elems, possibly inside b itself, so iterate over a snapshot.
            splitter.clear();
            splitter
                .extend_from_slice(&elems[first[b as usize] as usize..past[b as usize] as usize]);
            for &t in &splitter {
                let t = t as usize;
                let lo = rev_start[a as usize * n + t];
                let hi = rev_start[a as usize * n + t + 1];
                for j in lo..hi {
                    let s = rev[j as usize] as usize;
                    let sb = block_of[s] as usize;
                    let pos = loc[s];
                    let mfirst = first[sb] + marked[sb];
                    if pos >= mfirst {
                        // swap s to the marked prefix of its block
                        let other = elems[mfirst as usize];
                        elems[mfirst as usize] = s as u32;
                        elems[pos as usize] = other;
                        loc[s] = mfirst;
                        loc[other as usize] = pos;
                        if marked[sb] == 0 {
                            touched.push(sb as u32);
                        }
                        marked[sb] += 1;
                    }
                }
            }
            // Split every touched block whose marked part is proper.
            for &tb in &touched {
                let tb = tb as usize;
                let size = past[tb] - first[tb];
                let m = marked[tb];
                marked[tb] = 0;
                if m == size {
                    continue;
                }
                // New block takes the marked prefix.
                let nb = first.len() as u32;
                first.push(first[tb]);
                past.push(first[tb] + m);
                first[tb] += m;
                for i in first[nb as usize]..past[nb as usize] {
                    block_of[elems[i as usize] as usize] = nb;
                }
                marked.push(0);
                in_work.extend(std::iter::repeat_n(false, k));
                let old_size = past[tb] - first[tb];
                for l in 0..k {
                    if in_work[tb * k + l] {
                        in_work[nb as usize * k + l] = true;
                        work.push_back((nb, l as u16));
                    } else {
                        let target = if m <= old_size { nb } else { tb as u32 };
                        in_work[target as usize * k + l] = true;
                        work.push_back((target, l as u16));
                    }
                }
            }
            touched.clear();
        }

        // Rebuild over blocks, renumbered in BFS order from the initial.
        let nb = first.len();
        let mut bfs_id = vec![u32::MAX; nb];
        let mut order: Vec<u32> = Vec::new();
        let rep = |b: u32| elems[first[b as usize] as usize];
        let b0 = block_of[d.initial as usize];
        bfs_id[b0 as usize] = 0;
        order.push(b0);
        let mut head = 0usize;
        while head < order.len() {
            let b = order[head];
            let r = rep(b) as usize;
            for l in 0..k {
                let tb = block_of[d.delta[r * k + l] as usize];
                if bfs_id[tb as usize] == u32::MAX {
                    bfs_id[tb as usize] = order.len() as u32;
                    order.push(tb);
                }
            }
            head += 1;
        }
        let mut delta = Vec::with_capacity(order.len() * k);
        let mut accepting = Vec::with_capacity(order.len());
        for &b in &order {
            let r = rep(b) as usize;
            for l in 0..k {
                delta.push(bfs_id[block_of[d.delta[r * k + l] as usize] as usize]);
            }
            accepting.push(d.accepting[r]);
        }
        CompleteDfa { alphabet: d.alphabet, initial: 0, accepting, delta }
    }

    /// Shortest accepted word, ties broken by canonical letter order.
    /// `None` iff the language is empty.
    pub fn shortest_accepted(&self) -> Option<Word> {
        if self.accepting[self.initial as usize] {
            return Some(Vec::new());
        }
        let k = self.alphabet.letter_count();
        let n = self.state_count();
        let mut parent: Vec<(u32, Letter)> = vec![(u32::MAX, 0); n];
        let mut seen = vec![false; n];
        seen[self.initial as usize] = true;
        let mut queue = VecDeque::new();
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            for l in 0..k {
                let t = self.next(s, l as Letter);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = (s, l as Letter);
                    if self.accepting[t as usize] {
                        let mut word = vec![l as Letter];
                        let mut cur = s;
                        while cur != self.initial {
                            let (p, a) = parent[cur as usize];
                            word.push(a);
                            cur = p;
                        }
                        word.reverse();
                        return Some(word);
                    }
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// `None` if the two automata accept the same language; otherwise the
    /// shortest word (canonical tie-break) in the symmetric difference.
    pub fn equivalent(&self, other: &CompleteDfa) -> Result<Option<Word>> {
        Ok(self.product(other, ProductMode::Xor)?.shortest_accepted())
    }

    /// Removes states from which no accepting state is reachable. The
    /// initial state is always kept. Returns the removed-state count.
    pub fn trim(&self) -> (TrimmedDfa, usize) {
        let n = self.state_count();
        let k = self.alphabet.letter_count();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n {
            for l in 0..k {
                rev[self.delta[s * k + l] as usize].push(s as u32);
            }
        }
        let mut alive = vec![false; n];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for (s, a) in alive.iter_mut().enumerate() {
            if self.accepting[s] {
                *a = true;
                queue.push_back(s as u32);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s as usize] {
                if !alive[p as usize] {
                    alive[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        let mut keep: Vec<u32> = (0..n as u32)
            .filter(|&s| alive[s as usize] || s == self.initial)
            .collect();
        keep.sort_unstable();
        let removed = n - keep.len();
        let mut id = vec![u32::MAX; n];
        for (i, &s) in keep.iter().enumerate() {
            id[s as usize] = i as u32;
        }
        let mut delta: Vec<Option<u32>> = Vec::with_capacity(keep.len() * k);
        for &s in &keep {
            for l in 0..k {
                let t = self.delta[s as usize * k + l] as usize;
                delta.push(if alive[t] { Some(id[t]) } else { None });
            }
        }
        let trimmed = TrimmedDfa {
            alphabet: self.alphabet.clone(),
            initial: id[self.initial as usize],
            accepting: keep.iter().map(|&s| self.accepting[s as usize]).collect(),
            delta,
        };
        (trimmed, removed)
    }

    /// Cylindrification: lifts this automaton onto the tracks of a wider
    /// alphabet. `wiring[i]` names the target track carrying source track i.
    pub fn embed(&self, target: &TupleAlphabet, wiring: &[usize]) -> Result<CompleteDfa> {
        if wiring.len() != self.alphabet.arity() {
            return Err(Error::InvalidInput(format!(
                "wiring has {} entries for a {}-track automaton",
                wiring.len(),
                self.alphabet.arity()
            )));
        }
        for (i, &w) in wiring.iter().enumerate() {
            if w >= target.arity() {
                return Err(Error::InvalidInput(format!("wired track {w} out of range")));
            }
            if target.radices()[w] != self.alphabet.radices()[i] {
                return Err(Error::AlphabetMismatch(format!(
                    "track {i} has radix {}, target track {w} has radix {}",
                    self.alphabet.radices()[i],
                    target.radices()[w]
                )));
            }
            if wiring[..i].contains(&w) {
                return Err(Error::InvalidInput("wiring must be injective".into()));
            }
        }
        let n = self.state_count();
        let k = target.letter_count();
        // Precompute the source letter for every target letter.
        let map: Vec<Letter> = (0..k)
            .map(|l| target.project_letter(l as Letter, wiring, &self.alphabet))
            .collect();
        let mut delta = Vec::with_capacity(n * k);
        for s in 0..n {
            for m in &map {
                delta.push(self.next(s as u32, *m));
            }
        }
        Ok(CompleteDfa {
            alphabet: target.clone(),
            initial: self.initial,
            accepting: self.accepting.clone(),
            delta,
        })
    }

    /// Drops all tracks not in `keep` (existential projection). The result
    /// is nondeterministic in general.
    pub fn project(&self, keep: &[usize]) -> Result<Nfa> {
        if keep.is_empty() {
            return Err(Error::InvalidInput("projection must keep at least one track".into()));
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.len() >= self.alphabet.arity() {
            return Err(Error::InvalidInput(
                "projection must drop at least one track".into(),
            ));
        }
        let sub = self.alphabet.sub(&keep)?;
        let n = self.state_count();
        let sk = sub.letter_count();
        let mut delta: Vec<Vec<u32>> = vec![Vec::new(); n * sk];
        for s in 0..n {
            for l in self.alphabet.letters() {
                let sl = self.alphabet.project_letter(l, &keep, &sub) as usize;
                delta[s * sk + sl].push(self.next(s as u32, l));
            }
        }
        for targets in &mut delta {
            targets.sort_unstable();
            targets.dedup();
        }
        Ok(Nfa::new(sub, vec![self.initial], self.accepting.clone(), delta))
    }

    /// Closure under removal of leading all-zeros letters: accepts w iff
    /// this automaton accepts 0^k·w for some k ≥ 0. Needed after projecting
    /// away tracks of a padded relation, where a value witness may require
    /// more digits than the remaining tracks.
    pub fn zero_saturate(&self) -> CompleteDfa {
        let mut orbit = vec![self.initial];
        let mut cur = self.initial;
        loop {
            cur = self.next(cur, 0);
            if orbit.contains(&cur) {
                break;
            }
            orbit.push(cur);
        }
        if orbit.len() == 1 {
            return self.clone();
        }
        let k = self.alphabet.letter_count();
        let delta: Vec<Vec<u32>> = (0..self.state_count())
            .flat_map(|s| (0..k).map(move |l| vec![self.delta[s * k + l]]))
            .collect();
        Nfa::new(self.alphabet.clone(), orbit, self.accepting.clone(), delta).determinize()
    }

    /// Trie acceptor: accepts exactly the words labeled true. Everything
    /// else, including extensions, is rejected.
    pub fn from_labeled_words(alphabet: TupleAlphabet, samples: &[(Word, bool)]) -> CompleteDfa {
        let k = alphabet.letter_count();
        let mut children: Vec<Vec<u32>> = vec![vec![u32::MAX; k]];
        let mut accepting: Vec<bool> = vec![false];
        for (word, label) in samples {
            let mut cur = 0usize;
            for &l in word {
                let next = children[cur][l as usize];
                cur = if next == u32::MAX {
                    children.push(vec![u32::MAX; k]);
                    accepting.push(false);
                    let id = (children.len() - 1) as u32;
                    children[cur][l as usize] = id;
                    id as usize
                } else {
                    next as usize
                };
            }
            if *label {
                accepting[cur] = true;
            }
        }
        // sink
        let sink = children.len() as u32;
        children.push(vec![sink; k]);
        accepting.push(false);
        let mut delta = Vec::with_capacity(children.len() * k);
        for row in &children {
            for &t in row {
                delta.push(if t == u32::MAX { sink } else { t });
            }
        }
        CompleteDfa { alphabet, initial: 0, accepting, delta }
    }
}

/// A DFA with its dead states removed; transitions into them are absent.
/// This is the Walnut-style view used for reporting and export only.
#[derive(Debug, Clone)]
pub struct TrimmedDfa {
    pub alphabet: TupleAlphabet,
    pub initial: u32,
    pub accepting: Vec<bool>,
    /// delta[state * letter_count + letter]; `None` led to a dead state.
    pub delta: Vec<Option<u32>>,
}

impl TrimmedDfa {
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }
}
