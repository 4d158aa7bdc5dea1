//! Exhaustive-enumeration oracle.
//!
//! Ground truth for the DPLL solver in tests and acceptance checks: it
//! shares no code with the CNF path (it evaluates the expression tree
//! directly), so agreement between the two is meaningful.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::{Atom, BoolExpr, Model};

/// Enumeration is capped at 2^20 assignments.
pub const MAX_BRUTE_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TooManyAtoms {
    pub count: usize,
}

impl fmt::Display for TooManyAtoms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expression has {} distinct atoms, brute force handles at most {}",
            self.count, MAX_BRUTE_ATOMS
        )
    }
}

impl core::error::Error for TooManyAtoms {}

/// Try every assignment in counting order (atom i, in sorted order,
/// is bit i); the first satisfying one becomes the model.
pub fn brute_force_sat(expr: &BoolExpr) -> Result<Option<Model>, TooManyAtoms> {
    let atoms: Vec<Atom> = expr.atoms().into_iter().collect();
    if atoms.len() > MAX_BRUTE_ATOMS {
        return Err(TooManyAtoms { count: atoms.len() });
    }
    for mask in 0u64..(1u64 << atoms.len()) {
        let assignment: BTreeMap<Atom, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, atom)| (atom.clone(), mask & (1 << i) != 0))
            .collect();
        if expr.eval(&assignment) {
            return Ok(Some(Model { assignment }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> BoolExpr {
        BoolExpr::var(Atom::symbol(name))
    }

    #[test]
    fn const_false_unsat() {
        assert_eq!(brute_force_sat(&BoolExpr::Const(false)).unwrap(), None);
    }

    #[test]
    fn excluded_middle_sat() {
        let expr = BoolExpr::or(vec![a("A"), BoolExpr::not(a("A"))]);
        let model = brute_force_sat(&expr).unwrap().expect("tautology");
        assert!(model.satisfies(&expr));
    }

    #[test]
    fn too_many_atoms_is_an_error() {
        let vars: Vec<BoolExpr> = (0..21)
            .map(|i| BoolExpr::var(Atom::new("D", alloc::format!("V{i}"))))
            .collect();
        let expr = BoolExpr::or(vars);
        assert_eq!(brute_force_sat(&expr), Err(TooManyAtoms { count: 21 }));
    }
}
