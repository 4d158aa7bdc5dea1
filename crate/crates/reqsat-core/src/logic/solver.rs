//! DPLL decision procedure with unit propagation and pure-literal
//! elimination.
//!
//! The requirement corpora this crate targets produce formulas with at
//! most a few dozen variables, so the solver favours simplicity over
//! clause indexing: every step rescans the clause list. Determinism is
//! part of the contract: branching always picks the lowest unassigned
//! variable and tries `true` first, so the same expression always
//! yields the same verdict and the same model.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::cnf::{to_cnf, CnfFormula, Lit};
use super::{BoolExpr, Model};

/// Decide satisfiability. `Some(model)` witnesses SAT (the model is
/// total over the expression's atoms), `None` means UNSAT.
pub fn is_satisfiable(expr: &BoolExpr) -> Option<Model> {
    let cnf = to_cnf(expr);
    let assignment = solve_cnf(&cnf)?;
    let atoms = expr.atoms();
    let model = Model {
        assignment: atoms
            .into_iter()
            .enumerate()
            .map(|(i, atom)| (atom, assignment[i]))
            .collect(),
    };
    debug_assert!(model.satisfies(expr));
    Some(model)
}

/// Solve a CNF; on SAT, returns a total assignment indexed by
/// `var - 1` (unconstrained variables default to false).
pub fn solve_cnf(cnf: &CnfFormula) -> Option<Vec<bool>> {
    if cnf.clauses.iter().any(|c| c.is_empty()) {
        return None;
    }
    let mut assign: Vec<Option<bool>> = alloc::vec![None; cnf.num_vars];
    if dpll(&cnf.clauses, &mut assign) {
        Some(assign.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn value(assign: &[Option<bool>], lit: Lit) -> Option<bool> {
    assign[lit.unsigned_abs() as usize - 1].map(|v| v == (lit > 0))
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<Option<bool>>) -> bool {
    // Unit propagation to fixpoint.
    loop {
        let mut progressed = false;
        for clause in clauses {
            let mut unassigned: Option<Lit> = None;
            let mut unassigned_count = 0;
            let mut satisfied = false;
            for &lit in clause {
                match value(assign, lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        unassigned = Some(lit);
                        unassigned_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            match unassigned_count {
                0 => return false, // conflict
                1 => {
                    let lit = unassigned.expect("counted one unassigned literal");
                    assign[lit.unsigned_abs() as usize - 1] = Some(lit > 0);
                    progressed = true;
                }
                _ => {}
            }
        }
        if !progressed {
            break;
        }
    }

    // Pure-literal elimination over clauses not yet satisfied. Assigning
    // a pure literal can only satisfy clauses, never falsify them, so no
    // re-propagation is needed afterwards.
    let mut polarity: BTreeMap<usize, (bool, bool)> = BTreeMap::new();
    let mut open = false;
    for clause in clauses {
        if clause.iter().any(|&l| value(assign, l) == Some(true)) {
            continue;
        }
        open = true;
        for &lit in clause {
            if value(assign, lit).is_none() {
                let entry = polarity
                    .entry(lit.unsigned_abs() as usize)
                    .or_insert((false, false));
                if lit > 0 {
                    entry.0 = true;
                } else {
                    entry.1 = true;
                }
            }
        }
    }
    if !open {
        return true; // every clause satisfied
    }
    for (&var, &(pos, neg)) in &polarity {
        if pos != neg {
            assign[var - 1] = Some(pos);
        }
    }

    // Branch on the lowest unassigned variable still mentioned by an
    // unsatisfied clause.
    let branch = clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| value(assign, l) == Some(true)))
        .flat_map(|c| c.iter())
        .filter(|&&l| value(assign, l).is_none())
        .map(|&l| l.unsigned_abs() as usize)
        .min();
    let var = match branch {
        Some(v) => v,
        None => return true, // pure-literal sweep closed everything
    };

    for candidate in [true, false] {
        let mut trial = assign.clone();
        trial[var - 1] = Some(candidate);
        if dpll(clauses, &mut trial) {
            *assign = trial;
            return true;
        }
    }
    false
}
