//! Cross-module flows: two-sequence predicates, user-defined numeration
//! systems and file-loaded inputs working together.

use autlearn::format;
use autlearn::lstar::{learn, LearnOptions};
use autlearn::numeration::{incr_relation, NumerationSystem, TrackSystemSpec};
use autlearn::sequence::SequenceDfao;
use autlearn::teachers::{EqFacTeacher, TeacherOptions};

fn tm(n: u64) -> u16 {
    (n.count_ones() % 2) as u16
}

fn bs(n: u64) -> u16 {
    if n == 0 {
        return 1;
    }
    let s = format!("{n:b}");
    if s.split('1').any(|b| b.len() % 2 == 1) {
        0
    } else {
        1
    }
}

#[test]
fn eqfac_across_two_sequences_of_one_system() {
    let teacher = EqFacTeacher::new(
        SequenceDfao::thue_morse(),
        Some(SequenceDfao::baum_sweet()),
        autlearn::numeration::base_adder(2),
        TeacherOptions::default(),
    )
    .unwrap();
    // membership against an independent two-sequence oracle
    for i in 0..20u64 {
        for j in 0..20u64 {
            for n in 0..12u64 {
                let expect = (0..n).all(|t| tm(i + t) == bs(j + t));
                assert_eq!(teacher.membership(i, j, n), expect, "({i},{j},{n})");
            }
        }
    }
    let out = learn(&teacher, &teacher, teacher.spec().alphabet(), &LearnOptions::default())
        .unwrap();
    for i in 0..24u64 {
        for j in 0..24u64 {
            for n in 0..24u64 {
                let w = teacher.spec().tuple_encode(&[i, j, n]);
                let expect = (0..n).all(|t| tm(i + t) == bs(j + t));
                assert_eq!(out.automaton.accepts(&w), expect, "({i},{j},{n})");
            }
        }
    }
}

#[test]
fn mixed_system_eqfac_is_rejected() {
    let err = EqFacTeacher::new(
        SequenceDfao::thue_morse(),
        Some(SequenceDfao::fibonacci_word()),
        autlearn::numeration::base_adder(2),
        TeacherOptions::default(),
    );
    assert!(err.is_err());
}

#[test]
fn custom_numeration_system_from_config_behaves_like_zeckendorf() {
    let zeck = NumerationSystem::zeckendorf();
    let dfa_text = format::write_dfa(zeck.validity());
    let lines: Vec<&str> = dfa_text.lines().collect();
    let config = format!(
        "{}\n{}\nplaces 1 2 3 5 8 13 21 34 55 89 144 233 377 610 987\n{}\n",
        lines[0],
        lines[1],
        lines[2..].join("\n")
    );
    let custom = format::parse_numeration_config("fiblike", &config).unwrap();
    for n in 0..=987u64 {
        assert_eq!(custom.encode(n), zeck.encode(n), "encode {n}");
        assert_eq!(custom.decode(&custom.encode(n)).unwrap(), n);
    }
    // relation automata built on the custom system work the same way
    let incr = incr_relation(&custom);
    let spec = TrackSystemSpec::uniform(custom, 2).unwrap();
    for n in 0..200u64 {
        for x in n..n + 3 {
            assert_eq!(incr.accepts(&spec.tuple_encode(&[n, x])), x == n + 1, "({n},{x})");
        }
    }
}

#[test]
fn dfao_file_roundtrips_into_an_equivalent_sequence() {
    let original = SequenceDfao::fibonacci_word();
    let text = format::write_dfao(&original);
    let parsed = format::parse_dfao(&text).unwrap();
    assert_eq!(parsed.system(), original.system());
    for n in 0..=500u64 {
        assert_eq!(parsed.eval(n), original.eval(n), "f({n})");
    }
}
