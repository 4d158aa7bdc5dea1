//! Propositional expression trees and satisfiability checking.

pub mod brute;
pub mod cnf;
pub mod solver;
pub mod text;

pub use brute::{brute_force_sat, TooManyAtoms, MAX_BRUTE_ATOMS};
pub use cnf::{to_cnf, CnfFormula};
pub use solver::is_satisfiable;
pub use text::{parse_expr, ExprParseError};

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A propositional variable identified by a `(data, value)` pair.
///
/// For Boolean-kind data the canonical value is `TRUE`; negative
/// mentions (`is FALSE`, `is NOT TRUE`) are expressed by negating the
/// canonical atom rather than by a second atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub data: String,
    pub value: String,
}

impl Atom {
    pub fn new(data: impl Into<String>, value: impl Into<String>) -> Self {
        Atom {
            data: data.into(),
            value: value.into(),
        }
    }

    /// A free-standing propositional symbol with no dictionary backing,
    /// as used by the expression wire format of the service.
    pub fn symbol(name: impl Into<String>) -> Self {
        Atom {
            data: name.into(),
            value: String::from("TRUE"),
        }
    }

    /// Stable serialization key, `data=value`.
    pub fn key(&self) -> String {
        let mut s = String::with_capacity(self.data.len() + self.value.len() + 1);
        s.push_str(&self.data);
        s.push('=');
        s.push_str(&self.value);
        s
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.data, self.value)
    }
}

/// Propositional expression over [`Atom`]s.
///
/// `And`/`Or` children are kept flattened: constructors splice nested
/// chains of the same connective, so no `And` sits directly under an
/// `And` (and likewise for `Or`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Const(bool),
    Var(Atom),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn var(atom: Atom) -> Self {
        BoolExpr::Var(atom)
    }

    // Takes the expression by value rather than implementing ops::Not;
    // call sites read as prefix notation.
    #[allow(clippy::should_implement_trait)]
    pub fn not(expr: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(expr))
    }

    /// Conjunction; flattens nested `And`s, `and([])` is `Const(true)`
    /// and a single child collapses to itself.
    pub fn and(children: Vec<BoolExpr>) -> Self {
        Self::chain(children, true)
    }

    /// Disjunction; flattens nested `Or`s, `or([])` is `Const(false)`
    /// and a single child collapses to itself.
    pub fn or(children: Vec<BoolExpr>) -> Self {
        Self::chain(children, false)
    }

    fn chain(children: Vec<BoolExpr>, conjunctive: bool) -> Self {
        let mut flat = Vec::with_capacity(children.len());
        for child in children {
            match child {
                BoolExpr::And(grandchildren) if conjunctive => flat.extend(grandchildren),
                BoolExpr::Or(grandchildren) if !conjunctive => flat.extend(grandchildren),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => BoolExpr::Const(conjunctive),
            1 => flat.pop().expect("len checked"),
            _ if conjunctive => BoolExpr::And(flat),
            _ => BoolExpr::Or(flat),
        }
    }

    /// Distinct atoms, in `(data, value)` order.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, into: &mut BTreeSet<Atom>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(atom) => {
                into.insert(atom.clone());
            }
            BoolExpr::Not(inner) => inner.collect_atoms(into),
            BoolExpr::And(children) | BoolExpr::Or(children) => {
                for child in children {
                    child.collect_atoms(into);
                }
            }
        }
    }

    /// Like [`BoolExpr::atoms`] but borrowing, for callers that only
    /// need to index.
    pub fn atoms_ref(&self) -> BTreeSet<&Atom> {
        let mut set = BTreeSet::new();
        self.collect_atoms_ref(&mut set);
        set
    }

    fn collect_atoms_ref<'a>(&'a self, into: &mut BTreeSet<&'a Atom>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(atom) => {
                into.insert(atom);
            }
            BoolExpr::Not(inner) => inner.collect_atoms_ref(into),
            BoolExpr::And(children) | BoolExpr::Or(children) => {
                for child in children {
                    child.collect_atoms_ref(into);
                }
            }
        }
    }

    /// Number of variable occurrences (leaf `Var` nodes, with repeats).
    pub fn atom_occurrences(&self) -> usize {
        match self {
            BoolExpr::Const(_) => 0,
            BoolExpr::Var(_) => 1,
            BoolExpr::Not(inner) => inner.atom_occurrences(),
            BoolExpr::And(children) | BoolExpr::Or(children) => {
                children.iter().map(|c| c.atom_occurrences()).sum()
            }
        }
    }

    /// Evaluate under an assignment; atoms missing from the assignment
    /// count as false.
    pub fn eval(&self, assignment: &BTreeMap<Atom, bool>) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(atom) => assignment.get(atom).copied().unwrap_or(false),
            BoolExpr::Not(inner) => !inner.eval(assignment),
            BoolExpr::And(children) => children.iter().all(|c| c.eval(assignment)),
            BoolExpr::Or(children) => children.iter().any(|c| c.eval(assignment)),
        }
    }
}

/// A satisfying assignment witnessing SAT.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub assignment: BTreeMap<Atom, bool>,
}

impl Model {
    pub fn satisfies(&self, expr: &BoolExpr) -> bool {
        expr.eval(&self.assignment)
    }
}
