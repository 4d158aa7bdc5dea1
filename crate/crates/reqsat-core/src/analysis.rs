//! Contradiction analysis: pair requirements that share operations,
//! conjoin their condition clauses and SAT-check the conjunction.
//! UNSAT means the pair contradicts. Hypothetical-syllogism chaining
//! (`P ⇒ Q`, `Q ⇒ R`, therefore `P ⇒ R`) derives indirect requirements
//! that join the pool before pairing.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dict::{DataDictionary, Kind};
use crate::encode::EncodedRequirement;
use crate::logic::{is_satisfiable, Atom, BoolExpr, Model};

/// An unordered pair with at least one shared operation atom; `left`
/// and `right` index the pool, with `left` holding the
/// lexicographically smaller ID.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementPair {
    pub left: usize,
    pub right: usize,
    pub shared_operation_atoms: BTreeSet<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOutcome {
    Ok,
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inference {
    Direct,
    Syllogism { chain: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: PairOutcome,
    /// Present exactly when the outcome is `Ok`.
    pub model: Option<Model>,
    pub inference: Inference,
}

/// A requirement obtained by chaining others; it never chains again
/// with members of its own chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedRequirement {
    pub req: EncodedRequirement,
    /// Contributing requirement IDs, in chaining order (length ≥ 2).
    pub chain: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Maximum chaining steps; 0 disables syllogism derivation.
    pub syllogism_depth: u32,
    /// Conjoin at-most-one constraints for enum data items.
    pub domain_axioms: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            syllogism_depth: 1,
            domain_axioms: false,
        }
    }
}

/// One row of the analysis: a checked pair and its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub left_id: String,
    pub right_id: String,
    pub shared_operation_atoms: BTreeSet<Atom>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusAnalysis {
    /// In lexicographic `(left id, right id)` order.
    pub comparisons: Vec<Comparison>,
    pub derived: Vec<DerivedRequirement>,
}

impl CorpusAnalysis {
    pub fn contradictions(&self) -> usize {
        self.comparisons
            .iter()
            .filter(|c| c.verdict.outcome == PairOutcome::Contradiction)
            .count()
    }
}

/// All unordered pairs with a shared operation atom (atom identity;
/// polarity is ignored for pairing), sorted by `(left id, right id)`.
/// Self-pairs are excluded.
pub fn find_pairs(pool: &[EncodedRequirement]) -> Vec<RequirementPair> {
    let mut pairs = Vec::new();
    for i in 0..pool.len() {
        for j in (i + 1)..pool.len() {
            let shared: BTreeSet<Atom> = pool[i]
                .operation_atoms()
                .intersection(&pool[j].operation_atoms())
                .cloned()
                .collect();
            if shared.is_empty() {
                continue;
            }
            let (left, right) = if pool[i].id <= pool[j].id {
                (i, j)
            } else {
                (j, i)
            };
            pairs.push(RequirementPair {
                left,
                right,
                shared_operation_atoms: shared,
            });
        }
    }
    pairs.sort_by(|a, b| {
        (&pool[a.left].id, &pool[a.right].id).cmp(&(&pool[b.left].id, &pool[b.right].id))
    });
    pairs
}

/// SAT-check `And(left.antecedent, right.antecedent [, axioms])`.
/// UNSAT is a contradiction; SAT carries the witnessing model. The
/// inference is `Direct`; [`analyze_corpus`] re-tags pairs that involve
/// derived requirements.
pub fn check_pair(
    left: &EncodedRequirement,
    right: &EncodedRequirement,
    axioms: Option<&BoolExpr>,
) -> Verdict {
    let mut parts = vec![left.antecedent.clone(), right.antecedent.clone()];
    if let Some(axioms) = axioms {
        parts.push(axioms.clone());
    }
    let conjunction = BoolExpr::and(parts);
    match is_satisfiable(&conjunction) {
        Some(model) => Verdict {
            outcome: PairOutcome::Ok,
            model: Some(model),
            inference: Inference::Direct,
        },
        None => Verdict {
            outcome: PairOutcome::Contradiction,
            model: None,
            inference: Inference::Direct,
        },
    }
}

/// Pairwise at-most-one constraints for every enum data item with two
/// or more values among `atoms`. Boolean-kind data has a single
/// canonical atom and needs none. `None` when nothing applies.
pub fn domain_axioms(dict: &DataDictionary, atoms: &BTreeSet<Atom>) -> Option<BoolExpr> {
    let mut by_data: BTreeMap<&str, Vec<&Atom>> = BTreeMap::new();
    for atom in atoms {
        if matches!(dict.get(&atom.data).map(|e| e.kind()), Some(Kind::Enum(_))) {
            by_data.entry(atom.data.as_str()).or_default().push(atom);
        }
    }
    let mut clauses = Vec::new();
    for values in by_data.values() {
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                clauses.push(BoolExpr::not(BoolExpr::and(vec![
                    BoolExpr::var(values[i].clone()),
                    BoolExpr::var(values[j].clone()),
                ])));
            }
        }
    }
    if clauses.is_empty() {
        None
    } else {
        Some(BoolExpr::and(clauses))
    }
}

struct ChainEntry {
    req: EncodedRequirement,
    chain: Vec<String>,
}

/// Hypothetical-syllogism closure up to `max_depth` chaining steps.
///
/// An ordered pair `(r1, r2)` derives a requirement when some positive
/// consequent atom that `r1.antecedent` entails (the consequent is that
/// atom alone, or an `And` with it as a direct child) appears as a
/// positive top-level `And`-conjunct (or the sole atom) of
/// `r2.antecedent`. All such conjuncts are discharged at once:
///
/// ```text
/// r1: P ⇒ q        r2: And(q, S) ⇒ t        derived: And(P, S) ⇒ t
/// ```
///
/// A requirement never chains with anything already in its own chain,
/// so no derivation feeds back into itself.
pub fn derive_syllogisms(reqs: &[EncodedRequirement], max_depth: u32) -> Vec<DerivedRequirement> {
    let mut pool: Vec<ChainEntry> = reqs
        .iter()
        .map(|r| ChainEntry {
            req: r.clone(),
            chain: vec![r.id.clone()],
        })
        .collect();
    let mut out: Vec<DerivedRequirement> = Vec::new();
    let mut fresh_start = 0;

    for _ in 0..max_depth {
        let len = pool.len();
        let mut added: Vec<ChainEntry> = Vec::new();
        for i in 0..len {
            for j in 0..len {
                // Pairs of pre-existing entries were handled in an
                // earlier round.
                if i == j || (i < fresh_start && j < fresh_start) {
                    continue;
                }
                if let Some(entry) = chain_step(&pool[i], &pool[j]) {
                    let exists = pool
                        .iter()
                        .chain(added.iter())
                        .any(|e| e.req.id == entry.req.id);
                    if !exists {
                        added.push(entry);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        fresh_start = len;
        for entry in added {
            out.push(DerivedRequirement {
                req: entry.req.clone(),
                chain: entry.chain.clone(),
            });
            pool.push(entry);
        }
    }
    out
}

/// Consequent atoms the antecedent is guaranteed to establish:
/// positive direct conjuncts (or the sole atom). Atoms under `Or` or
/// `Not` are not entailed individually and never feed a chain.
fn entailed_consequent_atoms(req: &EncodedRequirement) -> Vec<&Atom> {
    match &req.consequent {
        BoolExpr::Var(atom) => vec![atom],
        BoolExpr::And(children) => children
            .iter()
            .filter_map(|c| match c {
                BoolExpr::Var(atom) => Some(atom),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn chain_step(provider: &ChainEntry, consumer: &ChainEntry) -> Option<ChainEntry> {
    if provider.chain.iter().any(|id| consumer.chain.contains(id)) {
        return None;
    }
    let provided: Vec<&Atom> = entailed_consequent_atoms(&provider.req);
    if provided.is_empty() {
        return None;
    }

    let conjuncts: Vec<&BoolExpr> = match &consumer.req.antecedent {
        BoolExpr::And(children) => children.iter().collect(),
        other => vec![other],
    };
    let is_provided = |expr: &BoolExpr| match expr {
        BoolExpr::Var(atom) => provided.contains(&atom),
        _ => false,
    };
    if !conjuncts.iter().any(|c| is_provided(c)) {
        return None;
    }

    let leftovers: Vec<BoolExpr> = conjuncts
        .iter()
        .filter(|c| !is_provided(c))
        .map(|c| (*c).clone())
        .collect();
    let antecedent = if leftovers.is_empty() {
        provider.req.antecedent.clone()
    } else {
        let mut parts = vec![provider.req.antecedent.clone()];
        parts.extend(leftovers);
        BoolExpr::and(parts)
    };

    let mut chain = provider.chain.clone();
    chain.extend(consumer.chain.iter().cloned());
    let id = format!("derived:{}+{}", provider.req.id, consumer.req.id);
    Some(ChainEntry {
        req: EncodedRequirement {
            id,
            antecedent,
            consequent: consumer.req.consequent.clone(),
            consequent_atoms: consumer.req.consequent_atoms.clone(),
        },
        chain,
    })
}

/// Full corpus analysis: derive syllogisms (when enabled), extend the
/// pool, pair and check. Verdicts touching a derived requirement carry
/// `Syllogism` inference with the contributing chain; everything else
/// is `Direct`. Output order is deterministic.
pub fn analyze_corpus(
    reqs: &[EncodedRequirement],
    dict: &DataDictionary,
    options: &AnalysisOptions,
) -> CorpusAnalysis {
    let derived = if options.syllogism_depth > 0 {
        derive_syllogisms(reqs, options.syllogism_depth)
    } else {
        Vec::new()
    };

    let mut pool: Vec<EncodedRequirement> = reqs.to_vec();
    let mut chain_of: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for d in &derived {
        chain_of.insert(d.req.id.clone(), d.chain.clone());
        pool.push(d.req.clone());
    }

    let pairs = find_pairs(&pool);
    let mut comparisons = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let left = &pool[pair.left];
        let right = &pool[pair.right];
        let axioms = if options.domain_axioms {
            let mut atoms = left.antecedent.atoms();
            atoms.extend(right.antecedent.atoms());
            domain_axioms(dict, &atoms)
        } else {
            None
        };
        let mut verdict = check_pair(left, right, axioms.as_ref());
        let mut chain: Vec<String> = Vec::new();
        if let Some(c) = chain_of.get(&left.id) {
            chain.extend(c.iter().cloned());
        }
        if let Some(c) = chain_of.get(&right.id) {
            chain.extend(c.iter().cloned());
        }
        if !chain.is_empty() {
            verdict.inference = Inference::Syllogism { chain };
        }
        comparisons.push(Comparison {
            left_id: left.id.clone(),
            right_id: right.id.clone(),
            shared_operation_atoms: pair.shared_operation_atoms,
            verdict,
        });
    }

    CorpusAnalysis {
        comparisons,
        derived,
    }
}
