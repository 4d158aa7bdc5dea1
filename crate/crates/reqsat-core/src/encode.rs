//! Translate requirement ASTs into implications over propositional
//! atoms, applying the dictionary-driven symbol rules.
//!
//! Every `(data, value)` mention maps to one atom shared across the
//! whole run, whether it occurs as a condition or as an operation;
//! that unification is what lets the syllogism engine chain an
//! operation of one requirement into a condition of another. Display
//! letters stay role-flavoured for reports: atoms first seen in a
//! condition draw from `A, B, C, …`, atoms first seen in an operation
//! from `X, Y, Z, …`; when the alphabet runs out the sequence continues
//! `A1, B1, …`, always skipping letters already taken.
//!
//! Boolean-kind data collapses onto a single canonical atom with value
//! `TRUE`:
//!
//! | mention        | encoding   |
//! |----------------|------------|
//! | `d is TRUE`    | `Var(d)`   |
//! | `d is NOT TRUE`| `Not(d)`   |
//! | `d is FALSE`   | `Not(d)`   |
//! | `d is NOT FALSE`| `Var(d)`  |
//!
//! The same collapse applies to data missing from the dictionary when
//! encoding leniently, so `Flag is TRUE` and `Flag is FALSE` still
//! contradict each other even before the dictionary catches up.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{ClauseTree, Connective, Requirement};
use crate::dict::{DataDictionary, Kind};
use crate::logic::{text, Atom, BoolExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Condition,
    Operation,
}

/// Injective atom-to-letter mapping, stable for the whole run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    letter_of: BTreeMap<Atom, String>,
    atom_of: BTreeMap<String, Atom>,
    used: BTreeSet<String>,
    condition_cursor: usize,
    operation_cursor: usize,
}

/// Position of `X` in the letter sequence, where operation letters
/// start.
const OPERATION_START: usize = 23;

fn letter_at(index: usize) -> String {
    let generation = index / 26;
    let letter = (b'A' + (index % 26) as u8) as char;
    if generation == 0 {
        letter.to_string()
    } else {
        format!("{letter}{generation}")
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable {
            condition_cursor: 0,
            operation_cursor: OPERATION_START,
            ..SymbolTable::default()
        }
    }

    pub fn letter(&self, atom: &Atom) -> Option<&str> {
        self.letter_of.get(atom).map(String::as_str)
    }

    pub fn atom(&self, letter: &str) -> Option<&Atom> {
        self.atom_of.get(letter)
    }

    /// `(letter, atom)` pairs in letter order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &Atom)> {
        self.atom_of.iter().map(|(l, a)| (l.as_str(), a))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.letter_of.keys()
    }

    fn intern(&mut self, atom: &Atom, role: Role) -> String {
        if let Some(letter) = self.letter_of.get(atom) {
            return letter.clone();
        }
        let cursor = match role {
            Role::Condition => &mut self.condition_cursor,
            Role::Operation => &mut self.operation_cursor,
        };
        let letter = loop {
            let candidate = letter_at(*cursor);
            *cursor += 1;
            if !self.used.contains(&candidate) {
                break candidate;
            }
        };
        self.used.insert(letter.clone());
        self.letter_of.insert(atom.clone(), letter.clone());
        self.atom_of.insert(letter.clone(), atom.clone());
        letter
    }
}

/// A requirement as the implication `antecedent ⇒ consequent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedRequirement {
    pub id: String,
    pub antecedent: BoolExpr,
    pub consequent: BoolExpr,
    /// Operation atoms with their polarity (`true` = positive).
    pub consequent_atoms: BTreeSet<(Atom, bool)>,
}

impl EncodedRequirement {
    /// Operation atoms regardless of polarity, for pairing.
    pub fn operation_atoms(&self) -> BTreeSet<Atom> {
        self.consequent_atoms
            .iter()
            .map(|(atom, _)| atom.clone())
            .collect()
    }

    /// Canonical notation, e.g. `And(A, Not(B), Not(C), D) ⇒ X`.
    pub fn notation(&self, symbols: &SymbolTable) -> String {
        let label = |atom: &Atom| {
            symbols
                .letter(atom)
                .map(str::to_string)
                .unwrap_or_else(|| atom.key())
        };
        format!(
            "{} ⇒ {}",
            text::render_expr(&self.antecedent, &label),
            text::render_expr(&self.consequent, &label)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodeError {
    UnknownData {
        requirement: String,
        data: String,
    },
    ValueOutOfRange {
        requirement: String,
        data: String,
        value: String,
    },
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::UnknownData { requirement, data } => {
                write!(f, "{requirement}: unknown data name `{data}`")
            }
            EncodeError::ValueOutOfRange {
                requirement,
                data,
                value,
            } => write!(
                f,
                "{requirement}: value `{value}` is outside the declared range of `{data}`"
            ),
        }
    }
}

impl core::error::Error for EncodeError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A dictionary violation found in a requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub requirement: String,
    pub message: String,
}

/// One diagnostic per unknown data name or out-of-range value, in
/// source order. Severity is `Error`; lenient callers downgrade.
pub fn validate_against_dictionary(req: &Requirement, dict: &DataDictionary) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut check = |data: &str, value: &str, atom_text: String| {
        match dict.get(data) {
            None => out.push(Diagnostic {
                severity: Severity::Error,
                requirement: req.id.clone(),
                message: format!("unknown data name `{data}` in `{atom_text}`"),
            }),
            Some(entry) => {
                let in_range = match entry.kind() {
                    // TRUE/FALSE are the whole domain of Boolean data.
                    Kind::Boolean => value == "TRUE" || value == "FALSE",
                    Kind::Enum(range) => range.iter().any(|v| v == value),
                };
                if !in_range {
                    out.push(Diagnostic {
                        severity: Severity::Error,
                        requirement: req.id.clone(),
                        message: format!(
                            "value `{value}` not in range of `{data}` in `{atom_text}`"
                        ),
                    });
                }
            }
        }
    };
    for atom in req.condition.leaves() {
        check(&atom.data, &atom.value, atom.to_string());
    }
    for atom in req.operations.leaves() {
        check(&atom.data, &atom.value, atom.to_string());
    }
    out
}

/// Encode one requirement, interning new atoms into `symbols`
/// (condition atoms first, then operation atoms, both in source order).
pub fn encode(
    req: &Requirement,
    dict: &DataDictionary,
    symbols: &mut SymbolTable,
    strictness: Strictness,
) -> Result<EncodedRequirement, EncodeError> {
    let antecedent = encode_tree(
        &req.condition,
        &req.id,
        dict,
        symbols,
        strictness,
        &|a| (a.data.as_str(), a.value.as_str(), a.negated),
        Role::Condition,
    )?;

    let consequent = encode_tree(
        &req.operations,
        &req.id,
        dict,
        symbols,
        strictness,
        &|a| (a.data.as_str(), a.value.as_str(), a.negated),
        Role::Operation,
    )?;
    let mut consequent_atoms = BTreeSet::new();
    collect_polarities(&consequent, true, &mut consequent_atoms);

    Ok(EncodedRequirement {
        id: req.id.clone(),
        antecedent,
        consequent,
        consequent_atoms,
    })
}

fn collect_polarities(expr: &BoolExpr, positive: bool, into: &mut BTreeSet<(Atom, bool)>) {
    match expr {
        BoolExpr::Var(atom) => {
            into.insert((atom.clone(), positive));
        }
        BoolExpr::Not(inner) => collect_polarities(inner, !positive, into),
        BoolExpr::And(children) | BoolExpr::Or(children) => {
            for child in children {
                collect_polarities(child, positive, into);
            }
        }
        BoolExpr::Const(_) => {}
    }
}

fn encode_tree<A>(
    tree: &ClauseTree<A>,
    req_id: &str,
    dict: &DataDictionary,
    symbols: &mut SymbolTable,
    strictness: Strictness,
    parts: &dyn Fn(&A) -> (&str, &str, bool),
    role: Role,
) -> Result<BoolExpr, EncodeError> {
    match tree {
        ClauseTree::Leaf(atom) => {
            let (data, value, negated) = parts(atom);
            let (atom, positive) = resolve_atom(data, value, negated, req_id, dict, strictness)?;
            symbols.intern(&atom, role);
            let var = BoolExpr::var(atom);
            Ok(if positive { var } else { BoolExpr::not(var) })
        }
        ClauseTree::Chain {
            connective,
            children,
        } => {
            let encoded: Result<Vec<BoolExpr>, EncodeError> = children
                .iter()
                .map(|c| encode_tree(c, req_id, dict, symbols, strictness, parts, role))
                .collect();
            Ok(match connective {
                Connective::And => BoolExpr::and(encoded?),
                Connective::Or => BoolExpr::or(encoded?),
            })
        }
    }
}

/// Map one `(data, value, negated)` mention to its atom and polarity.
fn resolve_atom(
    data: &str,
    value: &str,
    negated: bool,
    req_id: &str,
    dict: &DataDictionary,
    strictness: Strictness,
) -> Result<(Atom, bool), EncodeError> {
    let boolean_collapse = |negated: bool| {
        // `is FALSE` flips polarity once, `NOT` flips it again.
        let positive = (value == "TRUE") ^ negated;
        (Atom::new(data, "TRUE"), positive)
    };
    match dict.get(data).map(|e| e.kind()) {
        Some(Kind::Boolean) => {
            if value == "TRUE" || value == "FALSE" {
                Ok(boolean_collapse(negated))
            } else if strictness == Strictness::Strict {
                Err(EncodeError::ValueOutOfRange {
                    requirement: req_id.to_string(),
                    data: data.to_string(),
                    value: value.to_string(),
                })
            } else {
                Ok((Atom::new(data, value), !negated))
            }
        }
        Some(Kind::Enum(range)) => {
            if !range.iter().any(|v| v == value) && strictness == Strictness::Strict {
                return Err(EncodeError::ValueOutOfRange {
                    requirement: req_id.to_string(),
                    data: data.to_string(),
                    value: value.to_string(),
                });
            }
            Ok((Atom::new(data, value), !negated))
        }
        None => {
            if strictness == Strictness::Strict {
                Err(EncodeError::UnknownData {
                    requirement: req_id.to_string(),
                    data: data.to_string(),
                })
            } else if value == "TRUE" || value == "FALSE" {
                Ok(boolean_collapse(negated))
            } else {
                Ok((Atom::new(data, value), !negated))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dict::parse_dictionary;
    use crate::parser::parse_requirements;

    const DICT: &str = "Data,Range\n\
                        MMM,SJ|NAV|AG|AA|DGFT\n\
                        MOS_S,DGFT\n\
                        MOS_Status,NONE|ON\n\
                        SjRequestCond,TRUE|FALSE\n";

    const FLAT_AND: &str = "ID:Gherkin_1\n\
                        Given MMM is SJ\n\
                        And MOS_S is NOT DGFT\n\
                        And SjRequestCond is NOT TRUE\n\
                        And MOS_Status is NONE\n\
                        Then SET MMM to NAV\n";

    fn encode_one(req_text: &str, dict_text: &str) -> (EncodedRequirement, SymbolTable) {
        let dict = parse_dictionary(dict_text).unwrap();
        let reqs = parse_requirements(req_text).unwrap();
        let mut symbols = SymbolTable::new();
        let encoded = encode(&reqs[0], &dict, &mut symbols, Strictness::Strict).unwrap();
        (encoded, symbols)
    }

    #[test]
    fn flat_and_notation_matches() {
        let (encoded, symbols) = encode_one(FLAT_AND, DICT);
        assert_eq!(encoded.notation(&symbols), "And(A, Not(B), Not(C), D) ⇒ X");
        assert_eq!(symbols.atom("A"), Some(&Atom::new("MMM", "SJ")));
        assert_eq!(symbols.atom("B"), Some(&Atom::new("MOS_S", "DGFT")));
        assert_eq!(symbols.atom("C"), Some(&Atom::new("SjRequestCond", "TRUE")));
        assert_eq!(symbols.atom("D"), Some(&Atom::new("MOS_Status", "NONE")));
        assert_eq!(symbols.atom("X"), Some(&Atom::new("MMM", "NAV")));
    }

    #[test]
    fn boolean_rows_collapse_onto_one_atom() {
        // The four mention forms of a Boolean data item map onto the
        // same atom: TRUE / NOT FALSE are positive, NOT TRUE / FALSE
        // are negative.
        let cases = [
            ("SjRequestCond is TRUE", true),
            ("SjRequestCond is NOT TRUE", false),
            ("SjRequestCond is FALSE", false),
            ("SjRequestCond is NOT FALSE", true),
        ];
        for (text, positive) in cases {
            let source = format!("ID:R\nGiven {text}\nThen MMM to NAV\n");
            let (encoded, _) = encode_one(&source, DICT);
            let expected = BoolExpr::var(Atom::new("SjRequestCond", "TRUE"));
            let expected = if positive {
                expected
            } else {
                BoolExpr::not(expected)
            };
            assert_eq!(encoded.antecedent, expected, "for `{text}`");
        }
    }

    #[test]
    fn nested_condition_encodes_or_of_and() {
        let text = "ID:Req1\n\
                    Given Op1Cond is TRUE\n\
                    Or (MPoint is NOT OA And Op2Cond is TRUE)\n\
                    Then TPoint to TKPoint\n\
                    And SET MODE to LockMode\n";
        let dict = "Data,Range\n\
                    Op1Cond,TRUE|FALSE\n\
                    Op2Cond,TRUE|FALSE\n\
                    MPoint,OA|TK\n\
                    TPoint,TKPoint\n\
                    MODE,LockMode|FreeMode\n";
        let (encoded, symbols) = encode_one(text, dict);
        assert_eq!(
            encoded.notation(&symbols),
            "Or(A, And(Not(B), C)) ⇒ And(X, Y)"
        );
    }

    #[test]
    fn operation_not_is_negative_polarity() {
        let text = "ID:R\nGiven MMM is SJ\nThen MMM to NOT NAV\n";
        let (encoded, symbols) = encode_one(text, DICT);
        assert_eq!(encoded.notation(&symbols), "A ⇒ Not(X)");
        assert!(encoded
            .consequent_atoms
            .contains(&(Atom::new("MMM", "NAV"), false)));
    }

    #[test]
    fn condition_and_operation_share_an_atom() {
        // `MMM is NAV` in a condition and `SET MMM to NAV` in an
        // operation are the same variable; the letter is fixed by
        // whichever role saw it first.
        let text = "ID:R1\nGiven MMM is NAV\nThen MMM to SJ\n\
                    ID:R2\nGiven MMM is SJ\nThen SET MMM to NAV\n";
        let dict = parse_dictionary(DICT).unwrap();
        let reqs = parse_requirements(text).unwrap();
        let mut symbols = SymbolTable::new();
        let first = encode(&reqs[0], &dict, &mut symbols, Strictness::Strict).unwrap();
        let second = encode(&reqs[1], &dict, &mut symbols, Strictness::Strict).unwrap();
        let nav = Atom::new("MMM", "NAV");
        assert!(first.antecedent == BoolExpr::var(nav.clone()));
        assert!(second.consequent_atoms.contains(&(nav.clone(), true)));
        // First seen as a condition, so it kept the condition letter.
        assert_eq!(symbols.letter(&nav), Some("A"));
    }

    #[test]
    fn strict_rejects_unknown_and_out_of_range() {
        let dict = parse_dictionary(DICT).unwrap();
        let mut symbols = SymbolTable::new();
        let unknown = parse_requirements("ID:R\nGiven Ghost is TRUE\nThen MMM to NAV\n").unwrap();
        assert!(matches!(
            encode(&unknown[0], &dict, &mut symbols, Strictness::Strict),
            Err(EncodeError::UnknownData { .. })
        ));
        let out_of_range =
            parse_requirements("ID:R\nGiven SjRequestCond is MAYBE\nThen MMM to NAV\n").unwrap();
        assert!(matches!(
            encode(&out_of_range[0], &dict, &mut symbols, Strictness::Strict),
            Err(EncodeError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn lenient_mints_fresh_atoms() {
        let dict = parse_dictionary(DICT).unwrap();
        let mut symbols = SymbolTable::new();
        // Unknown Boolean-looking data still collapses polarity.
        let reqs = parse_requirements(
            "ID:R1\nGiven Flag is TRUE\nThen MMM to NAV\n\
             ID:R2\nGiven Flag is FALSE\nThen MMM to NAV\n",
        )
        .unwrap();
        let r1 = encode(&reqs[0], &dict, &mut symbols, Strictness::Lenient).unwrap();
        let r2 = encode(&reqs[1], &dict, &mut symbols, Strictness::Lenient).unwrap();
        assert_eq!(r1.antecedent, BoolExpr::var(Atom::new("Flag", "TRUE")));
        assert_eq!(
            r2.antecedent,
            BoolExpr::not(BoolExpr::var(Atom::new("Flag", "TRUE")))
        );
        // Out-of-range enum value becomes its own atom.
        let odd = parse_requirements("ID:R3\nGiven MMM is TRUE\nThen MMM to NAV\n").unwrap();
        let r3 = encode(&odd[0], &dict, &mut symbols, Strictness::Lenient).unwrap();
        assert_eq!(r3.antecedent, BoolExpr::var(Atom::new("MMM", "TRUE")));
    }

    #[test]
    fn validate_reports_violations() {
        let dict = parse_dictionary(DICT).unwrap();
        let reqs = parse_requirements(
            "ID:R\nGiven Ghost is TRUE And SjRequestCond is MAYBE\nThen MMM to NAV\n",
        )
        .unwrap();
        let diags = validate_against_dictionary(&reqs[0], &dict);
        assert_eq!(diags.len(), 2);
        assert!(diags[0].message.contains("Ghost"));
        assert!(diags[1].message.contains("MAYBE"));
    }

    #[test]
    fn validate_accepts_clean_requirement() {
        let dict = parse_dictionary(DICT).unwrap();
        let reqs = parse_requirements(FLAT_AND).unwrap();
        assert!(validate_against_dictionary(&reqs[0], &dict).is_empty());
    }

    #[test]
    fn letters_continue_past_the_alphabet() {
        // 30 distinct condition atoms walk the whole sequence
        // A..Z, A1, B1, …; the first operation atom then takes the
        // next letter from X onwards that is still free.
        let mut conditions = Vec::new();
        for i in 0..30 {
            conditions.push(format!("D{i:02} is V"));
        }
        let text = format!("ID:R\nGiven {}\nThen Op to GO\n", conditions.join("\nAnd "));
        let dict = parse_dictionary("Data,Range\nOp,GO\n").unwrap();
        let reqs = parse_requirements(&text).unwrap();
        let mut symbols = SymbolTable::new();
        encode(&reqs[0], &dict, &mut symbols, Strictness::Lenient).unwrap();
        assert_eq!(symbols.letter(&Atom::new("D22", "V")), Some("W"));
        assert_eq!(symbols.letter(&Atom::new("D25", "V")), Some("Z"));
        assert_eq!(symbols.letter(&Atom::new("D26", "V")), Some("A1"));
        assert_eq!(symbols.letter(&Atom::new("Op", "GO")), Some("E1"));
    }

    #[test]
    fn encoding_twice_gives_identical_tables() {
        let dict = parse_dictionary(DICT).unwrap();
        let reqs = parse_requirements(FLAT_AND).unwrap();
        let mut first = SymbolTable::new();
        let mut second = SymbolTable::new();
        for req in &reqs {
            encode(req, &dict, &mut first, Strictness::Strict).unwrap();
            encode(req, &dict, &mut second, Strictness::Strict).unwrap();
        }
        assert_eq!(first, second);
    }
}
