//! A tiny arithmetic expression language over exact rationals.
//!
//! Grammar (whitespace allowed between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' unsigned-integer)?
//! atom   := unsigned-integer | identifier | '(' expr ')' | '-' atom
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` reads `(-x)^2`; table data
//! always writes `-(x^2)` where the distinction matters. Printing an
//! expression and reparsing it returns the identical tree, and the printed
//! form differs from a minimal input only in whitespace and disambiguating
//! parentheses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::RatMatrix;
use crate::rat::Rat;

/// Parsed expression tree.
#[derive(Clone, PartialEq, Eq)]
pub enum Expr {
    /// Rational constant (the parser only produces nonnegative integers).
    Rational(Rat),
    /// Named parameter.
    Ident(String),
    /// Negation `-x`.
    Neg(Box<Expr>),
    /// Sum `x + y`.
    Add(Box<Expr>, Box<Expr>),
    /// Difference `x - y`.
    Sub(Box<Expr>, Box<Expr>),
    /// Product `x * y`.
    Mul(Box<Expr>, Box<Expr>),
    /// Quotient `x / y`.
    Div(Box<Expr>, Box<Expr>),
    /// Power `x ^ k` with a literal nonnegative exponent.
    Pow(Box<Expr>, u32),
}

/// Syntax error with the byte offset where parsing failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    /// Human-readable description.
    pub message: String,
}

/// Evaluation failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// The expression references a name the environment does not bind.
    #[error("unbound identifier `{name}`")]
    UnboundIdentifier {
        /// The unbound name.
        name: String,
    },
    /// A division whose denominator evaluates to zero.
    #[error("division by zero in `{expr}`")]
    DivisionByZero {
        /// Printed form of the offending quotient sub-expression.
        expr: String,
    },
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut node = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            node = if op == b'+' {
                Expr::Add(Box::new(node), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(node), Box::new(rhs))
            };
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut node = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            node = if op == b'*' {
                Expr::Mul(Box::new(node), Box::new(rhs))
            } else {
                Expr::Div(Box::new(node), Box::new(rhs))
            };
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let node = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits("exponent")?;
            let exp: u32 = digits
                .parse()
                .map_err(|_| self.err(format!("exponent `{digits}` out of range")))?;
            return Ok(Expr::Pow(Box::new(node), exp));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let node = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(node)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits("number")?;
                let n: BigInt = digits.parse().expect("digit run parses as integer");
                Ok(Expr::Rational(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos])
                    .expect("identifier bytes are ASCII");
                Ok(Expr::Ident(name.to_owned()))
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self, what: &str) -> Result<String, ParseError> {
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what}")));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are ASCII").to_owned())
    }
}

/// Parses a single expression; the entire input must be consumed.
pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { bytes: input.as_bytes(), pos: 0 };
    let node = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(node)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Rational(..) | Expr::Ident(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Rational(r) => write!(f, "{}", crate::rat::format_rat(r))?,
            Expr::Ident(name) => write!(f, "{name}")?,
            Expr::Neg(x) => {
                write!(f, "-")?;
                // The grammar only allows an atom after unary minus, and a
                // trailing `^` would rebind to the negated unit, so print
                // anything but a literal or name parenthesized.
                x.fmt_prec(f, 5)?;
            }
            Expr::Add(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                r.fmt_prec(f, 2)?;
            }
            Expr::Sub(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                r.fmt_prec(f, 2)?;
            }
            Expr::Mul(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, "*")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Div(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, "/")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Pow(b, e) => {
                b.fmt_prec(f, 5)?;
                write!(f, "^{e}")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }

    /// All identifiers appearing in the tree.
    pub fn idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Rational(_) => {}
            Expr::Ident(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(x) | Expr::Pow(x, _) => x.collect_idents(out),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) => {
                l.collect_idents(out);
                r.collect_idents(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

/// Evaluates an expression in a parameter environment.
pub fn eval_expr(expr: &Expr, env: &ParamEnv) -> Result<Rat, EvalError> {
    match expr {
        Expr::Rational(r) => Ok(r.clone()),
        Expr::Ident(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UnboundIdentifier { name: name.clone() }),
        Expr::Neg(x) => Ok(-eval_expr(x, env)?),
        Expr::Add(l, r) => Ok(eval_expr(l, env)? + eval_expr(r, env)?),
        Expr::Sub(l, r) => Ok(eval_expr(l, env)? - eval_expr(r, env)?),
        Expr::Mul(l, r) => Ok(eval_expr(l, env)? * eval_expr(r, env)?),
        Expr::Div(l, r) => {
            let denom = eval_expr(r, env)?;
            if denom.is_zero() {
                return Err(EvalError::DivisionByZero { expr: expr.to_string() });
            }
            Ok(eval_expr(l, env)? / denom)
        }
        Expr::Pow(b, e) => {
            let base = eval_expr(b, env)?;
            let mut acc = Rat::one();
            for _ in 0..*e {
                acc *= &base;
            }
            Ok(acc)
        }
    }
}

/// A polynomial side condition attached to a parameter environment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `lhs = rhs` must hold exactly.
    Equation {
        /// Left side.
        lhs: Expr,
        /// Right side.
        rhs: Expr,
        /// Original text, kept for reporting.
        text: String,
    },
    /// `lhs != rhs` must hold exactly.
    NonEqual {
        /// Left side.
        lhs: Expr,
        /// Right side.
        rhs: Expr,
        /// Original text, kept for reporting.
        text: String,
    },
    /// Conditions that are not exact relations (ranges, case guards).
    /// They document the source row and are not machine-checked.
    Note(String),
}

impl Constraint {
    /// The original constraint text.
    pub fn text(&self) -> &str {
        match self {
            Constraint::Equation { text, .. } | Constraint::NonEqual { text, .. } => text,
            Constraint::Note(text) => text,
        }
    }
}

/// Parses a constraint string: `A = B`, `A != B`, or a documentation note
/// (anything with `<`, `>`, or an `if` guard).
pub fn parse_constraint(text: &str) -> Result<Constraint, ParseError> {
    let t = text.trim();
    if t.starts_with("if ") || t.contains('<') || t.contains('>') {
        return Ok(Constraint::Note(t.to_owned()));
    }
    if let Some((l, r)) = t.split_once("!=") {
        return Ok(Constraint::NonEqual {
            lhs: parse_expr(l)?,
            rhs: parse_expr(r)?,
            text: t.to_owned(),
        });
    }
    if let Some((l, r)) = t.split_once('=') {
        return Ok(Constraint::Equation {
            lhs: parse_expr(l)?,
            rhs: parse_expr(r)?,
            text: t.to_owned(),
        });
    }
    Ok(Constraint::Note(t.to_owned()))
}

/// Error constructing a parameter environment.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    /// A checkable constraint failed at the given bindings.
    #[error("constraint `{constraint}` violated by the bindings")]
    ConstraintViolated {
        /// Text of the violated constraint.
        constraint: String,
    },
    /// A constraint string failed to parse.
    #[error("bad constraint `{text}`: {source}")]
    BadConstraint {
        /// Offending constraint text.
        text: String,
        /// Parser diagnostic.
        source: ParseError,
    },
}

/// An exact-rational binding of parameter names, together with the side
/// conditions it was checked against at construction time.
///
/// Constraints that reference identifiers outside the binding set are
/// treated as documentation for a different variant of the same family and
/// are skipped; a division by zero inside a constraint counts as a
/// violation.
#[derive(Clone, Debug, Default)]
pub struct ParamEnv {
    bindings: BTreeMap<String, Rat>,
    constraints: Vec<Constraint>,
}

impl ParamEnv {
    /// Environment with no bindings and no constraints.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an environment and checks every checkable constraint.
    pub fn new(
        bindings: BTreeMap<String, Rat>,
        constraints: Vec<Constraint>,
    ) -> Result<Self, EnvError> {
        let env = ParamEnv { bindings, constraints: Vec::new() };
        for c in &constraints {
            let holds = match c {
                Constraint::Note(_) => true,
                Constraint::Equation { lhs, rhs, .. } => {
                    match (eval_expr(lhs, &env), eval_expr(rhs, &env)) {
                        (Ok(a), Ok(b)) => a == b,
                        (Err(EvalError::UnboundIdentifier { .. }), _)
                        | (_, Err(EvalError::UnboundIdentifier { .. })) => true,
                        _ => false,
                    }
                }
                Constraint::NonEqual { lhs, rhs, .. } => {
                    match (eval_expr(lhs, &env), eval_expr(rhs, &env)) {
                        (Ok(a), Ok(b)) => a != b,
                        (Err(EvalError::UnboundIdentifier { .. }), _)
                        | (_, Err(EvalError::UnboundIdentifier { .. })) => true,
                        _ => false,
                    }
                }
            };
            if !holds {
                return Err(EnvError::ConstraintViolated { constraint: c.text().to_owned() });
            }
        }
        Ok(ParamEnv { constraints, ..env })
    }

    /// Builds an environment from raw constraint strings.
    pub fn with_constraint_strings(
        bindings: BTreeMap<String, Rat>,
        constraints: &[String],
    ) -> Result<Self, EnvError> {
        let parsed = constraints
            .iter()
            .map(|text| {
                parse_constraint(text).map_err(|source| EnvError::BadConstraint {
                    text: text.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(bindings, parsed)
    }

    /// Convenience constructor for unconstrained bindings.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Rat)>,
        S: Into<String>,
    {
        let bindings = pairs.into_iter().map(|(k, v)| (k.into(), v)).collect();
        ParamEnv { bindings, constraints: Vec::new() }
    }

    /// Value bound to `name`, if any.
    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.bindings.get(name)
    }

    /// All bindings in name order.
    pub fn bindings(&self) -> &BTreeMap<String, Rat> {
        &self.bindings
    }

    /// The constraints this environment was checked against.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
}

/// Error parsing a matrix of expression strings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cell ({row},{col}): {source}")]
pub struct MatrixParseError {
    /// 1-based row of the offending cell.
    pub row: usize,
    /// 1-based column of the offending cell.
    pub col: usize,
    /// Parser diagnostic.
    pub source: ParseError,
}

/// Error evaluating a matrix of expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cell ({row},{col}): {source}")]
pub struct MatrixEvalError {
    /// 1-based row of the offending cell.
    pub row: usize,
    /// 1-based column of the offending cell.
    pub col: usize,
    /// Evaluation diagnostic.
    pub source: EvalError,
}

/// A rectangular matrix of expressions, evaluated entrywise.
#[derive(Clone, Debug)]
pub struct ExprMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Expr>,
}

impl ExprMatrix {
    /// Parses a matrix from rows of cell strings; rows must have equal
    /// length.
    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self, MatrixParseError> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let mut cells = Vec::with_capacity(nr * nc);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged expression matrix");
            for (j, text) in row.iter().enumerate() {
                let e = parse_expr(text).map_err(|source| MatrixParseError {
                    row: i + 1,
                    col: j + 1,
                    source,
                })?;
                cells.push(e);
            }
        }
        Ok(ExprMatrix { rows: nr, cols: nc, cells })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Cell at `(row, col)`, zero-indexed.
    pub fn cell(&self, row: usize, col: usize) -> &Expr {
        &self.cells[row * self.cols + col]
    }

    /// Evaluates every cell in the environment.
    pub fn eval(&self, env: &ParamEnv) -> Result<RatMatrix, MatrixEvalError> {
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = eval_expr(self.cell(r, c), env).map_err(|source| MatrixEvalError {
                    row: r + 1,
                    col: c + 1,
                    source,
                })?;
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    /// All identifiers appearing in any cell.
    pub fn idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.cells {
            c.collect_idents(&mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn ident(s: &str) -> Expr {
        Expr::Ident(s.to_owned())
    }

    #[test]
    fn parses_negated_quotient() {
        // "-(a_1*a_7)/h": the parenthesized product is negated first, then
        // divided — value-identical to negating the whole quotient.
        let e = parse_expr("-(a_1*a_7)/h").unwrap();
        let expected = Expr::Div(
            Box::new(Expr::Neg(Box::new(Expr::Mul(
                Box::new(ident("a_1")),
                Box::new(ident("a_7")),
            )))),
            Box::new(ident("h")),
        );
        assert_eq!(e, expected);
        let env = ParamEnv::from_pairs([("a_1", rat(2)), ("a_7", rat(3)), ("h", rat(4))]);
        assert_eq!(eval_expr(&e, &env).unwrap(), ratio(-3, 2));
    }

    #[test]
    fn precedence_and_power() {
        let e = parse_expr("1 + 2*3^2").unwrap();
        let env = ParamEnv::empty();
        assert_eq!(eval_expr(&e, &env).unwrap(), rat(19));
        assert_eq!(eval_expr(&parse_expr("2^0").unwrap(), &env).unwrap(), rat(1));
    }

    #[test]
    fn pow_binds_tighter_than_unary_minus() {
        // Grammar reading: -x^2 == (-x)^2. Table data spells -(x^2) wherever
        // the conventional reading is meant.
        let env = ParamEnv::from_pairs([("x", rat(3))]);
        assert_eq!(eval_expr(&parse_expr("-x^2").unwrap(), &env).unwrap(), rat(9));
        assert_eq!(eval_expr(&parse_expr("-(x^2)").unwrap(), &env).unwrap(), rat(-9));
    }

    #[test]
    fn syntax_errors_carry_byte_offsets() {
        assert_eq!(parse_expr("a + ").unwrap_err().offset, 4);
        assert_eq!(parse_expr("(a").unwrap_err().offset, 2);
        assert_eq!(parse_expr("a $ b").unwrap_err().offset, 2);
        assert_eq!(parse_expr("a^b").unwrap_err().offset, 2);
        assert_eq!(parse_expr("a b").unwrap_err().offset, 2);
    }

    #[test]
    fn division_by_zero_names_the_subexpression() {
        let e = parse_expr("1 + a/(b - b)").unwrap();
        let env = ParamEnv::from_pairs([("a", rat(1)), ("b", rat(5))]);
        let err = eval_expr(&e, &env).unwrap_err();
        assert_eq!(err, EvalError::DivisionByZero { expr: "a/(b - b)".to_owned() });
    }

    #[test]
    fn unbound_identifier_is_reported() {
        let e = parse_expr("alpha + 1").unwrap();
        let err = eval_expr(&e, &ParamEnv::empty()).unwrap_err();
        assert_eq!(err, EvalError::UnboundIdentifier { name: "alpha".to_owned() });
    }

    #[test]
    fn print_parse_round_trip() {
        let inputs = [
            "-(a_1*a_7)/h",
            "a1^2 - a2^2 - a3^2",
            "(2*a3*a4 - 2*a3*a7*a8 + 2*a2*a8^2 + 3*a3*a8^2)/4",
            "-(alpha^2)*a1 + alpha*a2",
            "a - (b - c)",
            "a - b - c",
            "-(-(x))",
            "a/(b*c)",
            "a/b*c",
            "(a + b)*(c + d)",
            "2^3*x",
        ];
        for s in inputs {
            let t = parse_expr(s).unwrap();
            let printed = t.to_string();
            let t2 = parse_expr(&printed)
                .unwrap_or_else(|e| panic!("reparse of `{printed}` failed: {e}"));
            assert_eq!(t, t2, "round trip of `{s}` via `{printed}`");
            assert_eq!(printed, t2.to_string());
        }
    }

    #[test]
    fn idents_are_collected() {
        let e = parse_expr("a1*(beta - 2) + r^2").unwrap();
        let names: Vec<String> = e.idents().into_iter().collect();
        assert_eq!(names, ["a1", "beta", "r"]);
    }

    #[test]
    fn constraint_classification() {
        assert!(matches!(parse_constraint("alpha != 0").unwrap(), Constraint::NonEqual { .. }));
        assert!(matches!(parse_constraint("epsilon^2 = 1").unwrap(), Constraint::Equation { .. }));
        assert!(matches!(parse_constraint("0 < alpha").unwrap(), Constraint::Note(_)));
        assert!(matches!(parse_constraint("if h = 0").unwrap(), Constraint::Note(_)));
    }

    #[test]
    fn env_checks_constraints_at_construction() {
        let ok = ParamEnv::with_constraint_strings(
            [("alpha".to_owned(), rat(2))].into(),
            &["alpha != 0".to_owned()],
        );
        assert!(ok.is_ok());
        let bad = ParamEnv::with_constraint_strings(
            [("alpha".to_owned(), rat(0))].into(),
            &["alpha != 0".to_owned()],
        );
        assert_eq!(
            bad.unwrap_err(),
            EnvError::ConstraintViolated { constraint: "alpha != 0".to_owned() }
        );
        let sq = ParamEnv::with_constraint_strings(
            [("epsilon".to_owned(), rat(-1))].into(),
            &["epsilon^2 = 1".to_owned()],
        );
        assert!(sq.is_ok());
        let sq_bad = ParamEnv::with_constraint_strings(
            [("epsilon".to_owned(), rat(2))].into(),
            &["epsilon^2 = 1".to_owned()],
        );
        assert!(sq_bad.is_err());
    }

    #[test]
    fn env_skips_constraints_on_other_variants() {
        // A baked variant keeps the printed condition even when it mentions
        // a symbol that no longer exists in this variant's parameter list.
        let env = ParamEnv::with_constraint_strings(
            [("alpha".to_owned(), rat(3))].into(),
            &["alpha^2 + epsilon^2 != 0".to_owned()],
        );
        assert!(env.is_ok());
    }

    #[test]
    fn expr_matrix_eval_and_errors() {
        let rows = vec![
            vec!["a".to_owned(), "a + 1".to_owned()],
            vec!["0".to_owned(), "1/a".to_owned()],
        ];
        let m = ExprMatrix::from_strings(&rows).unwrap();
        let env = ParamEnv::from_pairs([("a", rat(2))]);
        let v = m.eval(&env).unwrap();
        assert_eq!(*v.at(1, 1), ratio(1, 2));
        let zero_env = ParamEnv::from_pairs([("a", rat(0))]);
        let err = m.eval(&zero_env).unwrap_err();
        assert_eq!((err.row, err.col), (2, 2));
    }
}
