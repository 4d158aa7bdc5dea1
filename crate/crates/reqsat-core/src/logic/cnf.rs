//! Tseitin transformation to equisatisfiable CNF.
//!
//! Each `And`/`Or` node gets an auxiliary variable constrained to be
//! equivalent to its subformula, so the output grows linearly with the
//! input instead of exploding the way distributive expansion does on
//! Or-of-And conditions. Only satisfiability is preserved, which is all
//! the contradiction check needs.
//!
//! Literals are DIMACS-style signed integers. Variables `1..=k` stand
//! for the expression's distinct atoms in `(data, value)` order;
//! auxiliaries follow.

use alloc::vec;
use alloc::vec::Vec;

use super::BoolExpr;

pub type Lit = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    /// Number of leading variables that correspond to input atoms.
    pub num_input_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

/// Convert an expression to an equisatisfiable CNF.
pub fn to_cnf(expr: &BoolExpr) -> CnfFormula {
    // BTreeSet iteration is sorted, so enumeration order fixes the
    // variable numbering.
    let var_of: alloc::collections::BTreeMap<&super::Atom, Lit> = expr
        .atoms_ref()
        .into_iter()
        .enumerate()
        .map(|(i, atom)| (atom, i as Lit + 1))
        .collect();
    let num_input_vars = var_of.len();
    let index_of = |expr_atom: &super::Atom| -> Lit {
        *var_of
            .get(expr_atom)
            .expect("atom collected from the same expression")
    };

    let mut enc = Tseitin {
        next_var: num_input_vars + 1,
        clauses: Vec::new(),
        true_var: None,
    };
    let root = enc.encode(expr, &index_of);
    enc.add_clause(vec![root]);

    CnfFormula {
        num_vars: enc.next_var - 1,
        num_input_vars,
        clauses: enc.clauses,
    }
}

struct Tseitin {
    next_var: usize,
    clauses: Vec<Vec<Lit>>,
    true_var: Option<Lit>,
}

impl Tseitin {
    fn fresh(&mut self) -> Lit {
        let v = self.next_var as Lit;
        self.next_var += 1;
        v
    }

    /// Auxiliary variable pinned to true; `Const` leaves reference it.
    fn true_lit(&mut self) -> Lit {
        match self.true_var {
            Some(v) => v,
            None => {
                let v = self.fresh();
                self.add_clause(vec![v]);
                self.true_var = Some(v);
                v
            }
        }
    }

    /// Clauses containing both `v` and `¬v` are tautologies and dropped.
    fn add_clause(&mut self, clause: Vec<Lit>) {
        let tautology = clause.iter().any(|&lit| clause.contains(&-lit));
        if !tautology {
            self.clauses.push(clause);
        }
    }

    fn encode(&mut self, expr: &BoolExpr, index_of: &dyn Fn(&super::Atom) -> Lit) -> Lit {
        match expr {
            BoolExpr::Const(true) => self.true_lit(),
            BoolExpr::Const(false) => -self.true_lit(),
            BoolExpr::Var(atom) => index_of(atom),
            BoolExpr::Not(inner) => -self.encode(inner, index_of),
            BoolExpr::And(children) => {
                let lits: Vec<Lit> = children.iter().map(|c| self.encode(c, index_of)).collect();
                let v = self.fresh();
                // v -> c_i for each child, and (c_1 ∧ … ∧ c_n) -> v.
                for &lit in &lits {
                    self.add_clause(vec![-v, lit]);
                }
                let mut closing: Vec<Lit> = lits.iter().map(|&l| -l).collect();
                closing.push(v);
                self.add_clause(closing);
                v
            }
            BoolExpr::Or(children) => {
                let lits: Vec<Lit> = children.iter().map(|c| self.encode(c, index_of)).collect();
                let v = self.fresh();
                // v -> (c_1 ∨ … ∨ c_n), and c_i -> v for each child.
                let mut forward = vec![-v];
                forward.extend(&lits);
                self.add_clause(forward);
                for &lit in &lits {
                    self.add_clause(vec![v, -lit]);
                }
                v
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{brute_force_sat, Atom, BoolExpr};
    use super::*;
    use alloc::collections::BTreeMap;

    fn a(name: &str) -> BoolExpr {
        BoolExpr::var(Atom::symbol(name))
    }

    /// Does any extension of `fixed` over the auxiliary variables
    /// satisfy the CNF? Used to compare the Tseitin output against the
    /// source expression assignment by assignment.
    fn cnf_sat_with_inputs(cnf: &CnfFormula, fixed: &[bool]) -> bool {
        assert_eq!(fixed.len(), cnf.num_input_vars);
        let aux = cnf.num_vars - cnf.num_input_vars;
        'ext: for mask in 0u64..(1u64 << aux) {
            let value = |lit: Lit| -> bool {
                let var = lit.unsigned_abs() as usize;
                let positive = lit > 0;
                let v = if var <= cnf.num_input_vars {
                    fixed[var - 1]
                } else {
                    mask & (1 << (var - cnf.num_input_vars - 1)) != 0
                };
                v == positive
            };
            for clause in &cnf.clauses {
                if !clause.iter().any(|&l| value(l)) {
                    continue 'ext;
                }
            }
            return true;
        }
        false
    }

    #[test]
    fn single_var_is_one_unit_clause() {
        let cnf = to_cnf(&a("A"));
        assert_eq!(cnf.num_vars, 1);
        assert_eq!(cnf.clauses, vec![vec![1]]);
    }

    #[test]
    fn complementary_units_are_unsat() {
        let cnf = to_cnf(&BoolExpr::and(vec![a("A"), BoolExpr::not(a("A"))]));
        // No assignment of the single input var extends to a model.
        assert!(!cnf_sat_with_inputs(&cnf, &[false]));
        assert!(!cnf_sat_with_inputs(&cnf, &[true]));
    }

    #[test]
    fn or_of_and_matches_truth_table() {
        // Or(A, And(Not(B), C)) over atoms sorted A, B, C.
        let expr = BoolExpr::or(vec![
            a("A"),
            BoolExpr::and(vec![BoolExpr::not(a("B")), a("C")]),
        ]);
        let cnf = to_cnf(&expr);
        let atoms: Vec<Atom> = expr.atoms().into_iter().collect();
        for mask in 0u8..8 {
            let fixed: Vec<bool> = (0..3).map(|i| mask & (1 << i) != 0).collect();
            let assignment: BTreeMap<Atom, bool> =
                atoms.iter().cloned().zip(fixed.iter().copied()).collect();
            assert_eq!(
                expr.eval(&assignment),
                cnf_sat_with_inputs(&cnf, &fixed),
                "disagreement at mask {mask:#05b}"
            );
        }
    }

    #[test]
    fn const_false_root_is_unsat() {
        let cnf = to_cnf(&BoolExpr::Const(false));
        assert_eq!(cnf.num_input_vars, 0);
        assert!(!cnf_sat_with_inputs(&cnf, &[]));
        assert_eq!(brute_force_sat(&BoolExpr::Const(false)).unwrap(), None);
    }

    #[test]
    fn tautological_clauses_are_dropped() {
        // And(A, Not(A)) produces the closing clause (¬A ∨ A ∨ v),
        // which must not survive.
        let cnf = to_cnf(&BoolExpr::and(vec![a("A"), BoolExpr::not(a("A"))]));
        for clause in &cnf.clauses {
            for &lit in clause {
                assert!(!clause.contains(&-lit), "tautology kept: {clause:?}");
            }
        }
    }
}
