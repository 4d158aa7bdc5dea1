//! Recursive-descent parser for the Gherkin-style requirement format.
//!
//! A file holds zero or more blocks. Each block starts with an
//! `ID:<identifier>` line, the conditions run from `Given` up to the
//! operation keyword (`Then`, with `When` accepted as a synonym), and
//! the operations follow it. Chains at one nesting level must stick to
//! a single connective; parenthesized groups nest freely.
//!
//! Keywords are matched as whole position-sensitive words, so names
//! like `ANDROID_Flag` or `Orbit` are ordinary identifiers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{ClauseTree, ConditionAtom, Connective, OperationAtom, Requirement};

const KEYWORDS: [&str; 9] = [
    "Given", "When", "Then", "And", "Or", "NOT", "SET", "is", "to",
];
const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: u32,
        column: u32,
        found: String,
        expected: String,
    },
    MixedConnective {
        line: u32,
        column: u32,
    },
    DuplicateId {
        id: String,
        line: u32,
    },
    MissingThen {
        id: String,
        line: u32,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax {
                line,
                column,
                found,
                expected,
            } => write!(f, "{line}:{column}: expected {expected}, found {found}"),
            ParseError::MixedConnective { line, column } => write!(
                f,
                "{line}:{column}: `And` and `Or` mixed in one chain; parenthesize to disambiguate"
            ),
            ParseError::DuplicateId { id, line } => {
                write!(f, "{line}: requirement ID `{id}` is already defined")
            }
            ParseError::MissingThen { id, line } => {
                write!(
                    f,
                    "{line}: requirement `{id}` has no operation section (`Then` missing)"
                )
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// Parse every block in the input, in file order.
pub fn parse_requirements(text: &str) -> Result<Vec<Requirement>, ParseError> {
    let tokens = lex(text);
    let mut parser = Parser { tokens, pos: 0 };
    let mut out: Vec<Requirement> = Vec::new();
    let mut seen: BTreeMap<String, ()> = BTreeMap::new();
    while !parser.at_end() {
        let req = parser.block()?;
        if seen.insert(req.id.clone(), ()).is_some() {
            return Err(ParseError::DuplicateId {
                id: req.id,
                line: parser.previous_line(),
            });
        }
        out.push(req);
    }
    Ok(out)
}

/// Canonical single-block rendering; re-parsing yields an equal AST.
///
/// Top-level chain members get one line each, the first on the header
/// line, the rest prefixed with the chain connective. Nested groups
/// render inline in parentheses.
pub fn render_requirement(req: &Requirement) -> String {
    let mut out = format!("ID:{}\n", req.id);
    render_section(&mut out, "Given", &req.condition, &|a: &ConditionAtom| {
        a.to_string()
    });
    render_section(&mut out, "Then", &req.operations, &|a: &OperationAtom| {
        a.to_string()
    });
    out
}

fn render_section<A>(
    out: &mut String,
    header: &str,
    tree: &ClauseTree<A>,
    atom_text: &dyn Fn(&A) -> String,
) {
    match tree {
        ClauseTree::Leaf(atom) => {
            out.push_str(header);
            out.push(' ');
            out.push_str(&atom_text(atom));
            out.push('\n');
        }
        ClauseTree::Chain {
            connective,
            children,
        } => {
            for (i, child) in children.iter().enumerate() {
                if i == 0 {
                    out.push_str(header);
                } else {
                    out.push_str(&connective.to_string());
                }
                out.push(' ');
                out.push_str(&render_term(child, atom_text));
                out.push('\n');
            }
        }
    }
}

fn render_term<A>(tree: &ClauseTree<A>, atom_text: &dyn Fn(&A) -> String) -> String {
    match tree {
        ClauseTree::Leaf(atom) => atom_text(atom),
        ClauseTree::Chain {
            connective,
            children,
        } => {
            let parts: Vec<String> = children.iter().map(|c| render_term(c, atom_text)).collect();
            format!("({})", parts.join(&format!(" {connective} ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Word(String),
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    line: u32,
    column: u32,
}

impl Token {
    fn describe(&self) -> String {
        match &self.kind {
            TokKind::Word(w) => format!("`{w}`"),
            TokKind::LParen => "`(`".to_string(),
            TokKind::RParen => "`)`".to_string(),
        }
    }
}

fn lex(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx as u32 + 1;
        let mut word_start: Option<usize> = None;
        let mut chars: Vec<(usize, char)> = line.char_indices().collect();
        chars.push((line.len(), ' ')); // sentinel flushes the last word
        let mut col_of = BTreeMap::new();
        for (col, &(byte, _)) in chars.iter().enumerate() {
            col_of.insert(byte, col as u32 + 1);
        }
        for &(byte, c) in &chars {
            if c.is_whitespace() || c == '(' || c == ')' {
                if let Some(start) = word_start.take() {
                    tokens.push(Token {
                        kind: TokKind::Word(line[start..byte].to_string()),
                        line: line_no,
                        column: col_of[&start],
                    });
                }
                if c == '(' || c == ')' {
                    tokens.push(Token {
                        kind: if c == '(' {
                            TokKind::LParen
                        } else {
                            TokKind::RParen
                        },
                        line: line_no,
                        column: col_of[&byte],
                    });
                }
            } else if word_start.is_none() {
                word_start = Some(byte);
            }
        }
    }
    tokens
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Condition,
    Operation,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> &Token {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn previous_line(&self) -> u32 {
        self.tokens
            .get(self.pos.saturating_sub(1))
            .map(|t| t.line)
            .unwrap_or(0)
    }

    fn syntax_error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError::Syntax {
                line: tok.line,
                column: tok.column,
                found: tok.describe(),
                expected: expected.to_string(),
            },
            None => ParseError::Syntax {
                line: self.previous_line(),
                column: 0,
                found: "end of input".to_string(),
                expected: expected.to_string(),
            },
        }
    }

    fn peek_word(&self) -> Option<&str> {
        match self.peek().map(|t| &t.kind) {
            Some(TokKind::Word(w)) => Some(w.as_str()),
            _ => None,
        }
    }

    fn at_block_start(&self) -> bool {
        self.peek_word().is_some_and(|w| w.starts_with("ID:"))
    }

    fn block(&mut self) -> Result<Requirement, ParseError> {
        let id = match self.peek_word() {
            Some(w) if w.starts_with("ID:") => {
                let id = w["ID:".len()..].to_string();
                if id.is_empty() || is_keyword(&id) {
                    return Err(self.syntax_error("`ID:<identifier>`"));
                }
                self.advance();
                id
            }
            _ => return Err(self.syntax_error("`ID:<identifier>`")),
        };
        let id_line = self.tokens[self.pos - 1].line;

        if self.peek_word() != Some("Given") {
            return Err(self.syntax_error("`Given`"));
        }
        self.advance();
        let condition = self.chain(Section::Condition, 0)?;

        match self.peek_word() {
            Some("Then") | Some("When") => {
                self.advance();
            }
            _ => {
                return Err(ParseError::MissingThen {
                    id,
                    line: self.previous_line().max(id_line),
                })
            }
        }
        let operations = self.chain(Section::Operation, 0)?;
        Ok(Requirement {
            id,
            condition,
            operations,
        })
    }

    /// True when the current token ends the chain at `depth` for the
    /// given section (it is left unconsumed).
    fn chain_ends(&self, section: Section, depth: usize) -> bool {
        if depth > 0 {
            return matches!(self.peek().map(|t| &t.kind), Some(TokKind::RParen));
        }
        match section {
            Section::Condition => {
                matches!(self.peek_word(), Some("Then") | Some("When"))
                    || self.at_block_start()
                    || self.at_end()
            }
            Section::Operation => self.at_block_start() || self.at_end(),
        }
    }

    fn chain<A>(&mut self, section: Section, depth: usize) -> Result<ClauseTree<A>, ParseError>
    where
        Self: ParseAtom<A>,
    {
        let mut children = Vec::new();
        children.push(self.term(section, depth)?);
        let mut connective: Option<Connective> = None;
        loop {
            if self.chain_ends(section, depth) {
                break;
            }
            let conn = match self.peek_word() {
                Some("And") => Connective::And,
                Some("Or") => Connective::Or,
                _ => return Err(self.syntax_error("`And`, `Or` or end of section")),
            };
            match connective {
                None => connective = Some(conn),
                Some(existing) if existing != conn => {
                    let tok = self.peek().expect("connective token present");
                    return Err(ParseError::MixedConnective {
                        line: tok.line,
                        column: tok.column,
                    });
                }
                Some(_) => {}
            }
            self.advance();
            children.push(self.term(section, depth)?);
        }
        match connective {
            None => Ok(children.pop().expect("chain has one term")),
            Some(connective) => Ok(ClauseTree::Chain {
                connective,
                children,
            }),
        }
    }

    fn term<A>(&mut self, section: Section, depth: usize) -> Result<ClauseTree<A>, ParseError>
    where
        Self: ParseAtom<A>,
    {
        if depth >= MAX_NESTING {
            return Err(self.syntax_error("shallower nesting (limit 256)"));
        }
        if matches!(self.peek().map(|t| &t.kind), Some(TokKind::LParen)) {
            self.advance();
            let inner = self.chain(section, depth + 1)?;
            if !matches!(self.peek().map(|t| &t.kind), Some(TokKind::RParen)) {
                return Err(self.syntax_error("`)`"));
            }
            self.advance();
            Ok(inner)
        } else {
            Ok(ClauseTree::Leaf(self.atom(section)?))
        }
    }

    fn identifier(&mut self, role: &str) -> Result<String, ParseError> {
        match self.peek_word() {
            Some(w) if !is_keyword(w) && !w.starts_with("ID:") => {
                let w = w.to_string();
                self.advance();
                Ok(w)
            }
            _ => Err(self.syntax_error(role)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.peek_word() == Some(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.syntax_error(&format!("`{kw}`")))
        }
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        if self.peek_word() == Some(kw) {
            self.advance();
            true
        } else {
            false
        }
    }
}

/// Section-specific atom grammar.
trait ParseAtom<A> {
    fn atom(&mut self, section: Section) -> Result<A, ParseError>;
}

impl ParseAtom<ConditionAtom> for Parser {
    fn atom(&mut self, _section: Section) -> Result<ConditionAtom, ParseError> {
        let data = self.identifier("a condition (`<data> is [NOT] <value>`)")?;
        self.keyword("is")?;
        let negated = self.eat_word("NOT");
        let value = self.identifier("a value identifier")?;
        Ok(ConditionAtom {
            data,
            negated,
            value,
        })
    }
}

impl ParseAtom<OperationAtom> for Parser {
    fn atom(&mut self, _section: Section) -> Result<OperationAtom, ParseError> {
        let set_keyword = self.eat_word("SET");
        let data = self.identifier("an operation (`[SET] <data> to [NOT] <value>`)")?;
        self.keyword("to")?;
        let negated = self.eat_word("NOT");
        let value = self.identifier("a value identifier")?;
        Ok(OperationAtom {
            data,
            negated,
            value,
            set_keyword,
        })
    }
}

fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT_AND: &str = "ID:Gherkin_1\n\n\
                        Given MMM is SJ\n\
                        And MOS_S is NOT DGFT\n\
                        And SjRequestCond is NOT TRUE\n\
                        And MOS_Status is NONE\n\
                        Then SET MMM to NAV\n";

    fn cond(data: &str, negated: bool, value: &str) -> ClauseTree<ConditionAtom> {
        ClauseTree::Leaf(ConditionAtom {
            data: data.into(),
            negated,
            value: value.into(),
        })
    }

    #[test]
    fn parses_flat_and_block() {
        let reqs = parse_requirements(FLAT_AND).unwrap();
        assert_eq!(reqs.len(), 1);
        let req = &reqs[0];
        assert_eq!(req.id, "Gherkin_1");
        match &req.condition {
            ClauseTree::Chain {
                connective: Connective::And,
                children,
            } => {
                assert_eq!(children.len(), 4);
                assert_eq!(children[0], cond("MMM", false, "SJ"));
                assert_eq!(children[1], cond("MOS_S", true, "DGFT"));
                assert_eq!(children[2], cond("SjRequestCond", true, "TRUE"));
                assert_eq!(children[3], cond("MOS_Status", false, "NONE"));
            }
            other => panic!("expected And chain, got {other:?}"),
        }
        match &req.operations {
            ClauseTree::Leaf(op) => {
                assert_eq!(
                    op,
                    &OperationAtom {
                        data: "MMM".into(),
                        negated: false,
                        value: "NAV".into(),
                        set_keyword: true,
                    }
                );
            }
            other => panic!("expected single operation, got {other:?}"),
        }
    }

    #[test]
    fn parses_nested_group() {
        let text = "ID:Req1\n\
                    Given Op1Cond is TRUE\n\
                    Or (MPoint is NOT OA And Op2Cond is TRUE)\n\
                    Then TPoint to TKPoint\n\
                    And SET MODE to LockMode\n";
        let req = &parse_requirements(text).unwrap()[0];
        match &req.condition {
            ClauseTree::Chain {
                connective: Connective::Or,
                children,
            } => {
                assert_eq!(children.len(), 2);
                assert_eq!(children[0], cond("Op1Cond", false, "TRUE"));
                match &children[1] {
                    ClauseTree::Chain {
                        connective: Connective::And,
                        children: inner,
                    } => {
                        assert_eq!(inner[0], cond("MPoint", true, "OA"));
                        assert_eq!(inner[1], cond("Op2Cond", false, "TRUE"));
                    }
                    other => panic!("expected nested And, got {other:?}"),
                }
            }
            other => panic!("expected Or chain, got {other:?}"),
        }
        match &req.operations {
            ClauseTree::Chain {
                connective: Connective::And,
                children,
            } => {
                assert_eq!(children.len(), 2);
                assert!(matches!(&children[0], ClauseTree::Leaf(op) if !op.set_keyword));
                assert!(matches!(&children[1], ClauseTree::Leaf(op) if op.set_keyword));
            }
            other => panic!("expected And chain of operations, got {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_empty_list() {
        assert_eq!(parse_requirements("").unwrap(), Vec::new());
        assert_eq!(parse_requirements("\n \n").unwrap(), Vec::new());
    }

    #[test]
    fn mixed_connectives_are_rejected() {
        let text = "ID:R\nGiven A is X And B is Y Or C is Z\nThen D to W\n";
        assert!(matches!(
            parse_requirements(text),
            Err(ParseError::MixedConnective { line: 2, .. })
        ));
    }

    #[test]
    fn parenthesized_mix_is_accepted() {
        let text = "ID:R\nGiven A is X And (B is Y Or C is Z)\nThen D to W\n";
        assert!(parse_requirements(text).is_ok());
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = "ID:R\nGiven A is X\nThen B to Y\nID:R\nGiven A is X\nThen B to Y\n";
        assert!(matches!(
            parse_requirements(text),
            Err(ParseError::DuplicateId { .. })
        ));
    }

    #[test]
    fn missing_then_is_reported() {
        let text = "ID:R\nGiven A is X\n";
        assert!(matches!(
            parse_requirements(text),
            Err(ParseError::MissingThen { .. })
        ));
    }

    #[test]
    fn when_is_accepted_as_operation_keyword() {
        let text = "ID:R\nGiven A is X\nWhen B to Y\n";
        let req = &parse_requirements(text).unwrap()[0];
        assert!(matches!(req.operations, ClauseTree::Leaf(_)));
    }

    #[test]
    fn keywords_do_not_match_inside_identifiers() {
        let text = "ID:R\nGiven ANDROID_Flag is Orbit\nThen NOTIFY_Mode to SETTLED\n";
        let req = &parse_requirements(text).unwrap()[0];
        assert_eq!(
            req.condition,
            ClauseTree::Leaf(ConditionAtom {
                data: "ANDROID_Flag".into(),
                negated: false,
                value: "Orbit".into(),
            })
        );
        assert_eq!(
            req.operations,
            ClauseTree::Leaf(OperationAtom {
                data: "NOTIFY_Mode".into(),
                negated: false,
                value: "SETTLED".into(),
                set_keyword: false,
            })
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "ID:R\nGiven A was X\nThen B to Y\n";
        match parse_requirements(text) {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 9);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn deep_nesting_parses() {
        let mut cond = String::from("A is X");
        for _ in 0..32 {
            cond = format!("(B is Y And {cond})");
        }
        let text = format!("ID:R\nGiven {cond}\nThen D to W\n");
        assert!(parse_requirements(&text).is_ok());
    }

    #[test]
    fn render_flat_and_round_trips() {
        let reqs = parse_requirements(FLAT_AND).unwrap();
        let rendered = render_requirement(&reqs[0]);
        let reparsed = parse_requirements(&rendered).unwrap();
        assert_eq!(reqs, reparsed);
    }

    #[test]
    fn render_shows_nested_groups_inline() {
        let text = "ID:Req2\n\
                    Given Op1Cond is FALSE\n\
                    Or (MPoint is OA And Op2Cond is FALSE)\n\
                    Then TPoint to TKPoint\n";
        let req = &parse_requirements(text).unwrap()[0];
        let rendered = render_requirement(req);
        assert!(rendered.contains("Or (MPoint is OA And Op2Cond is FALSE)"));
    }

    #[test]
    fn render_leaf_only_block_is_two_lines() {
        let req = Requirement {
            id: "R".into(),
            condition: cond("A", false, "X"),
            operations: ClauseTree::Leaf(OperationAtom {
                data: "B".into(),
                negated: false,
                value: "Y".into(),
                set_keyword: false,
            }),
        };
        assert_eq!(
            render_requirement(&req),
            "ID:R\nGiven A is X\nThen B to Y\n"
        );
    }

    #[test]
    fn single_term_group_collapses() {
        let text = "ID:R\nGiven (A is X)\nThen B to Y\n";
        let req = &parse_requirements(text).unwrap()[0];
        assert_eq!(req.condition, cond("A", false, "X"));
    }
}
