//! Abstract syntax for parsed requirements.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// `<data> is [NOT] <value>` between `Given` and `Then`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionAtom {
    pub data: String,
    pub negated: bool,
    pub value: String,
}

impl fmt::Display for ConditionAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "{} is NOT {}", self.data, self.value)
        } else {
            write!(f, "{} is {}", self.data, self.value)
        }
    }
}

/// `[SET] <data> to [NOT] <value>` after `Then`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationAtom {
    pub data: String,
    pub negated: bool,
    pub value: String,
    pub set_keyword: bool,
}

impl fmt::Display for OperationAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.set_keyword {
            write!(f, "SET ")?;
        }
        if self.negated {
            write!(f, "{} to NOT {}", self.data, self.value)
        } else {
            write!(f, "{} to {}", self.data, self.value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::And => "And",
            Connective::Or => "Or",
        })
    }
}

/// A clause section: either a single atom or a homogeneous chain.
/// Mixing `And` and `Or` at one level is a parse error; heterogeneous
/// structure only arises through nested parenthesized groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseTree<A> {
    Leaf(A),
    Chain {
        connective: Connective,
        /// Always two or more entries.
        children: Vec<ClauseTree<A>>,
    },
}

impl<A> ClauseTree<A> {
    /// Atoms in left-to-right source order.
    pub fn leaves(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a A>) {
        match self {
            ClauseTree::Leaf(atom) => out.push(atom),
            ClauseTree::Chain { children, .. } => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }
}

/// One requirement block: `ID:` line, condition tree, operation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    pub id: String,
    pub condition: ClauseTree<ConditionAtom>,
    pub operations: ClauseTree<OperationAtom>,
}
