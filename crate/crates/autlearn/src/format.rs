//! Text formats.
//!
//! The canonical automaton format is the interchange contract, one
//! automaton per file, `\n` line endings, 0-based state ids:
//!
//! ```text
//! dfa <arity> <radix_0> ... <radix_{arity-1}> <num_states> <initial_state>
//! accepting <space-separated state ids>
//! <state> <digit_0> ... <digit_{arity-1}> <target>     (in canonical order)
//! ```
//!
//! Directive lines may follow `accepting`: `outputs <state:symbol ...>`
//! turns the file into a DFAO, `system <track> <name>` names per-track
//! numeration systems, `places <p0> <p1> ...` carries the place values of a
//! custom system. DOT and Walnut-style exports are one-way.

use std::fmt::Write as _;

use crate::alphabet::{Letter, TupleAlphabet};
use crate::dfa::{CompleteDfa, TrimmedDfa};
use crate::numeration::{NumerationSystem, SystemKind};
use crate::sequence::SequenceDfao;
use crate::{Error, Result};

/// Canonical text form of a complete DFA.
pub fn write_dfa(d: &CompleteDfa) -> String {
    let mut out = String::new();
    let al = d.alphabet();
    write!(out, "dfa {}", al.arity()).unwrap();
    for r in al.radices() {
        write!(out, " {r}").unwrap();
    }
    writeln!(out, " {} {}", d.state_count(), d.initial()).unwrap();
    out.push_str("accepting");
    for s in d.accepting_states() {
        write!(out, " {s}").unwrap();
    }
    out.push('\n');
    for s in 0..d.state_count() as u32 {
        for l in al.letters() {
            write!(out, "{s}").unwrap();
            for t in 0..al.arity() {
                write!(out, " {}", al.digit(l, t)).unwrap();
            }
            writeln!(out, " {}", d.next(s, l)).unwrap();
        }
    }
    out
}

/// A parsed canonical file together with its directive lines.
pub struct ParsedAutomaton {
    pub dfa: CompleteDfa,
    pub outputs: Option<Vec<u16>>,
    /// (track, system name) pairs from `system` directives.
    pub systems: Vec<(usize, String)>,
    pub places: Option<Vec<u64>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: line + 1, msg: msg.into() }
}

fn parse_nums<T: std::str::FromStr>(line: usize, fields: &[&str]) -> Result<Vec<T>> {
    fields
        .iter()
        .map(|f| f.parse::<T>().map_err(|_| parse_err(line, format!("bad number {f:?}"))))
        .collect()
}

/// Parses the canonical format, collecting any directive lines.
pub fn parse_automaton(text: &str) -> Result<ParsedAutomaton> {
    let lines: Vec<&str> = text.lines().collect();
    let mut idx = 0usize;
    let header: Vec<&str> = lines
        .first()
        .ok_or_else(|| parse_err(0, "empty file"))?
        .split_whitespace()
        .collect();
    if header.first() != Some(&"dfa") {
        return Err(parse_err(0, "expected a line starting with 'dfa'"));
    }
    let arity: usize = header
        .get(1)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| parse_err(0, "bad arity"))?;
    if header.len() != 4 + arity {
        return Err(parse_err(0, format!("expected 'dfa {arity} <radices...> <states> <initial>'")));
    }
    let radices: Vec<u16> = parse_nums(0, &header[2..2 + arity])?;
    let num_states: usize = header[2 + arity]
        .parse()
        .map_err(|_| parse_err(0, "bad state count"))?;
    let initial: u32 = header[3 + arity]
        .parse()
        .map_err(|_| parse_err(0, "bad initial state"))?;
    let alphabet = TupleAlphabet::new(radices)?;
    idx += 1;

    let acc_fields: Vec<&str> = lines
        .get(idx)
        .ok_or_else(|| parse_err(idx, "missing accepting line"))?
        .split_whitespace()
        .collect();
    if acc_fields.first() != Some(&"accepting") {
        return Err(parse_err(idx, "expected 'accepting ...'"));
    }
    let mut accepting = vec![false; num_states];
    for id in parse_nums::<usize>(idx, &acc_fields[1..])? {
        *accepting
            .get_mut(id)
            .ok_or_else(|| parse_err(idx, format!("accepting state {id} out of range")))? = true;
    }
    idx += 1;

    // optional directives
    let mut outputs: Option<Vec<u16>> = None;
    let mut systems: Vec<(usize, String)> = Vec::new();
    let mut places: Option<Vec<u64>> = None;
    while let Some(line) = lines.get(idx) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first() {
            Some(&"outputs") => {
                let mut out = vec![0u16; num_states];
                for f in &fields[1..] {
                    let (s, o) = f
                        .split_once(':')
                        .ok_or_else(|| parse_err(idx, "outputs entries are state:symbol"))?;
                    let s: usize =
                        s.parse().map_err(|_| parse_err(idx, "bad output state"))?;
                    let o: u16 =
                        o.parse().map_err(|_| parse_err(idx, "bad output symbol"))?;
                    *out.get_mut(s)
                        .ok_or_else(|| parse_err(idx, format!("output state {s} out of range")))? =
                        o;
                }
                outputs = Some(out);
            }
            Some(&"system") => {
                if fields.len() != 3 {
                    return Err(parse_err(idx, "expected 'system <track> <name>'"));
                }
                let track: usize =
                    fields[1].parse().map_err(|_| parse_err(idx, "bad track"))?;
                systems.push((track, fields[2].to_string()));
            }
            Some(&"places") => {
                places = Some(parse_nums(idx, &fields[1..])?);
            }
            _ => break,
        }
        idx += 1;
    }

    let k = alphabet.letter_count();
    let mut delta = vec![u32::MAX; num_states * k];
    for row in 0..num_states * k {
        let line = lines
            .get(idx)
            .ok_or_else(|| parse_err(idx, "missing transition line"))?;
        let nums: Vec<u64> = parse_nums(idx, &line.split_whitespace().collect::<Vec<_>>())?;
        if nums.len() != 2 + alphabet.arity() {
            return Err(parse_err(idx, "expected '<state> <digits...> <target>'"));
        }
        let state = nums[0] as usize;
        let digits: Vec<u16> = nums[1..1 + alphabet.arity()].iter().map(|&d| d as u16).collect();
        if state >= num_states || digits.iter().zip(alphabet.radices()).any(|(&d, &r)| d >= r) {
            return Err(parse_err(idx, "state or digit out of range"));
        }
        let target = nums[1 + alphabet.arity()] as u32;
        if target as usize >= num_states {
            return Err(parse_err(idx, format!("target {target} out of range")));
        }
        let slot = state * k + alphabet.pack(&digits) as usize;
        if delta[slot] != u32::MAX {
            return Err(parse_err(idx, "duplicate transition"));
        }
        delta[slot] = target;
        idx += 1;
        let _ = row;
    }
    if lines[idx..].iter().any(|l| !l.trim().is_empty()) {
        return Err(parse_err(idx, "trailing content after transitions"));
    }
    let dfa = CompleteDfa::new(alphabet, initial, accepting, delta)?;
    Ok(ParsedAutomaton { dfa, outputs, systems, places })
}

/// Parses a plain DFA, rejecting directive lines meant for richer objects.
pub fn parse_dfa(text: &str) -> Result<CompleteDfa> {
    let parsed = parse_automaton(text)?;
    if parsed.outputs.is_some() || parsed.places.is_some() {
        return Err(Error::InvalidInput(
            "file carries DFAO or numeration directives, not a plain DFA".into(),
        ));
    }
    Ok(parsed.dfa)
}

fn system_by_name(name: &str) -> Result<NumerationSystem> {
    NumerationSystem::by_name(name)
}

/// DFAO form: canonical DFA plus an `outputs` line and a `system` line.
pub fn write_dfao(x: &SequenceDfao) -> String {
    let base = write_dfa(x.skeleton());
    let mut lines: Vec<&str> = base.lines().collect();
    let mut extra = String::new();
    extra.push_str("outputs");
    for (s, o) in x.outputs().iter().enumerate() {
        write!(extra, " {s}:{o}").unwrap();
    }
    let system_line = format!("system 0 {}", x.system().name());
    let mut out = String::new();
    out.push_str(lines[0]);
    out.push('\n');
    out.push_str(lines[1]);
    out.push('\n');
    out.push_str(&extra);
    out.push('\n');
    out.push_str(&system_line);
    out.push('\n');
    lines.drain(..2);
    for l in lines {
        out.push_str(l);
        out.push('\n');
    }
    out
}

pub fn parse_dfao(text: &str) -> Result<SequenceDfao> {
    let parsed = parse_automaton(text)?;
    let outputs = parsed
        .outputs
        .ok_or_else(|| Error::InvalidInput("DFAO file needs an outputs line".into()))?;
    let system = match parsed.systems.first() {
        Some((0, name)) => system_by_name(name)?,
        Some((t, _)) => {
            return Err(Error::InvalidInput(format!("DFAO system directive names track {t}")))
        }
        None => NumerationSystem::base(parsed.dfa.alphabet().radices()[0])?,
    };
    SequenceDfao::new(system, parsed.dfa, outputs)
}

/// Synchronized-automaton form: canonical DFA over two tracks plus
/// per-track `system` lines.
pub fn write_synchronized(b: &CompleteDfa, systems: &[NumerationSystem]) -> String {
    let base = write_dfa(b);
    let mut lines: Vec<&str> = base.lines().collect();
    let mut out = String::new();
    out.push_str(lines[0]);
    out.push('\n');
    out.push_str(lines[1]);
    out.push('\n');
    for (t, sys) in systems.iter().enumerate() {
        writeln!(out, "system {t} {}", sys.name()).unwrap();
    }
    lines.drain(..2);
    for l in lines {
        out.push_str(l);
        out.push('\n');
    }
    out
}

pub fn parse_synchronized(text: &str) -> Result<(CompleteDfa, Vec<NumerationSystem>)> {
    let parsed = parse_automaton(text)?;
    if parsed.dfa.alphabet().arity() != 2 {
        return Err(Error::InvalidInput("synchronized automata have two tracks".into()));
    }
    let mut systems: Vec<NumerationSystem> = parsed
        .dfa
        .alphabet()
        .radices()
        .iter()
        .map(|&r| NumerationSystem::base(r))
        .collect::<Result<_>>()?;
    for (track, name) in &parsed.systems {
        if *track >= 2 {
            return Err(Error::InvalidInput(format!("system directive names track {track}")));
        }
        systems[*track] = system_by_name(name)?;
    }
    Ok((parsed.dfa, systems))
}

/// Custom numeration system: validity recognizer plus a `places` line.
pub fn parse_numeration_config(name: &str, text: &str) -> Result<NumerationSystem> {
    let parsed = parse_automaton(text)?;
    let places = parsed
        .places
        .ok_or_else(|| Error::InvalidInput("numeration config needs a places line".into()))?;
    NumerationSystem::custom(name, places, parsed.dfa)
}

fn letter_label(al: &TupleAlphabet, l: Letter) -> String {
    al.digits(l).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

/// Graphviz view of a complete DFA.
pub fn to_dot(d: &CompleteDfa) -> String {
    let al = d.alphabet();
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    writeln!(out, "  init [shape=point];\n  init -> s{};", d.initial()).unwrap();
    for s in 0..d.state_count() as u32 {
        if d.is_accepting(s) {
            writeln!(out, "  s{s} [shape=doublecircle];").unwrap();
        }
    }
    for s in 0..d.state_count() as u32 {
        let mut by_target: std::collections::BTreeMap<u32, Vec<String>> = Default::default();
        for l in al.letters() {
            by_target.entry(d.next(s, l)).or_default().push(letter_label(al, l));
        }
        for (t, labels) in by_target {
            writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", labels.join("|")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Graphviz view of a trimmed DFA; edges into removed states are absent.
pub fn trimmed_to_dot(t: &TrimmedDfa) -> String {
    let al = &t.alphabet;
    let k = al.letter_count();
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    writeln!(out, "  init [shape=point];\n  init -> s{};", t.initial).unwrap();
    for s in 0..t.state_count() {
        if t.accepting[s] {
            writeln!(out, "  s{s} [shape=doublecircle];").unwrap();
        }
    }
    for s in 0..t.state_count() {
        let mut by_target: std::collections::BTreeMap<u32, Vec<String>> = Default::default();
        for l in 0..k {
            if let Some(tgt) = t.delta[s * k + l] {
                by_target.entry(tgt).or_default().push(letter_label(al, l as Letter));
            }
        }
        for (tgt, labels) in by_target {
            writeln!(out, "  s{s} -> s{tgt} [label=\"{}\"];", labels.join("|")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn walnut_system_name(sys: &NumerationSystem) -> String {
    match sys.kind() {
        SystemKind::Base(k) => format!("msd_{k}"),
        SystemKind::Zeckendorf => "msd_fib".into(),
        SystemKind::Tribonacci => "msd_trib".into(),
        SystemKind::Custom(name) => format!("msd_{name}"),
    }
}

/// Best-effort export of a trimmed automaton in the shape of Walnut's
/// automaton library files. The canonical format is the contract; this one
/// is for interoperability convenience only.
pub fn to_walnut(t: &TrimmedDfa, systems: &[NumerationSystem]) -> String {
    let al = &t.alphabet;
    let k = al.letter_count();
    let header: Vec<String> = systems.iter().map(walnut_system_name).collect();
    let mut out = header.join(" ");
    out.push('\n');
    for s in 0..t.state_count() {
        writeln!(out, "\n{s} {}", if t.accepting[s] { 1 } else { 0 }).unwrap();
        for l in 0..k {
            if let Some(tgt) = t.delta[s * k + l] {
                let digits: Vec<String> =
                    al.digits(l as Letter).iter().map(|d| d.to_string()).collect();
                writeln!(out, "{} -> {tgt}", digits.join(" ")).unwrap();
            }
        }
    }
    out
}
