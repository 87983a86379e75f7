//! Concrete syntax for formulas: lexer, recursive-descent parser and the
//! canonical pretty-printer.
//!
//! Precedence, loosest to tightest: `<->`, `->`, `|`, `&`, `U`/`W`
//! (right-associative), prefix unaries (`!`, `X`, `G`, `F`, `AX`, ...,
//! `<.>`, `[.]`). Binder bodies (`mu X. ...`, `nu X. ...`) extend as far
//! right as possible. A name followed by `[` is a context variable
//! application `c[...]`; `@hole` is the hole. In the mu-calculus, names
//! starting with an uppercase letter are fixpoint variables, everything
//! else is an atom. Unicode aliases are accepted on input, never printed.

use crate::error::{Error, Result, SourceSpan};
use crate::formula::{validate, Formula, Kind, Logic};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Dot,
    Hole,
    DiamondOp,
    BoxOp,
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

struct Spanned {
    tok: Tok,
    span: SourceSpan,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump_char(&mut self) -> Option<char> {
        let c = self.src[self.pos..].chars().next()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump_char();
                }
                Some('#') => {
                    while let Some(c) = self.peek_char() {
                        if c == '\n' {
                            break;
                        }
                        self.bump_char();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned> {
        self.skip_ws();
        let begin = self.pos;
        let line = self.line;
        let col = self.col;
        let mk = |tok, lex: &Lexer| Spanned {
            tok,
            span: SourceSpan::new(begin, lex.pos, line, col),
        };
        let c = match self.peek_char() {
            None => return Ok(mk(Tok::Eof, self)),
            Some(c) => c,
        };
        match c {
            '(' => {
                self.bump_char();
                Ok(mk(Tok::LParen, self))
            }
            ')' => {
                self.bump_char();
                Ok(mk(Tok::RParen, self))
            }
            ']' => {
                self.bump_char();
                Ok(mk(Tok::RBracket, self))
            }
            '[' => {
                self.bump_char();
                // "[.]" is the box operator, a bare '[' opens a context argument.
                if self.src[self.pos..].starts_with(".]") {
                    self.bump_char();
                    self.bump_char();
                    Ok(mk(Tok::BoxOp, self))
                } else {
                    Ok(mk(Tok::LBracket, self))
                }
            }
            '<' => {
                self.bump_char();
                if self.src[self.pos..].starts_with("->") {
                    self.bump_char();
                    self.bump_char();
                    Ok(mk(Tok::Iff, self))
                } else if self.src[self.pos..].starts_with(".>") {
                    self.bump_char();
                    self.bump_char();
                    Ok(mk(Tok::DiamondOp, self))
                } else {
                    Err(Error::Syntax {
                        span: SourceSpan::new(begin, self.pos, line, col),
                        expected: "`<->` or `<.>`".into(),
                    })
                }
            }
            '-' => {
                self.bump_char();
                if self.peek_char() == Some('>') {
                    self.bump_char();
                    Ok(mk(Tok::Implies, self))
                } else {
                    Err(Error::Syntax {
                        span: SourceSpan::new(begin, self.pos, line, col),
                        expected: "`->`".into(),
                    })
                }
            }
            '&' | '\u{2227}' => {
                self.bump_char();
                Ok(mk(Tok::And, self))
            }
            '|' | '\u{2228}' => {
                self.bump_char();
                Ok(mk(Tok::Or, self))
            }
            '!' | '\u{00ac}' => {
                self.bump_char();
                Ok(mk(Tok::Not, self))
            }
            '\u{2192}' => {
                self.bump_char();
                Ok(mk(Tok::Implies, self))
            }
            '\u{2194}' => {
                self.bump_char();
                Ok(mk(Tok::Iff, self))
            }
            '\u{25c7}' | '\u{22c4}' => {
                self.bump_char();
                Ok(mk(Tok::DiamondOp, self))
            }
            '\u{25a1}' => {
                self.bump_char();
                Ok(mk(Tok::BoxOp, self))
            }
            '\u{03bc}' => {
                self.bump_char();
                Ok(mk(Tok::Ident("mu".into()), self))
            }
            '\u{03bd}' => {
                self.bump_char();
                Ok(mk(Tok::Ident("nu".into()), self))
            }
            '.' => {
                self.bump_char();
                Ok(mk(Tok::Dot, self))
            }
            '@' => {
                self.bump_char();
                let rest: String = self
                    .src[self.pos..]
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .collect();
                if rest == "hole" {
                    for _ in 0..4 {
                        self.bump_char();
                    }
                    Ok(mk(Tok::Hole, self))
                } else {
                    Err(Error::Syntax {
                        span: SourceSpan::new(begin, self.pos, line, col),
                        expected: "`@hole`".into(),
                    })
                }
            }
            '\u{2022}' | '\u{2219}' => {
                self.bump_char();
                Ok(mk(Tok::Hole, self))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self.peek_char() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        self.bump_char();
                    } else {
                        break;
                    }
                }
                Ok(mk(Tok::Ident(name), self))
            }
            _ => Err(Error::Syntax {
                span: SourceSpan::new(begin, self.pos, line, col),
                expected: "a formula token".into(),
            }),
        }
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    loop {
        let t = lx.next_token()?;
        let eof = t.tok == Tok::Eof;
        out.push(t);
        if eof {
            return Ok(out);
        }
    }
}

pub struct ParseOptions {
    pub logic: Logic,
    /// Accept atoms with the reserved `_ctx_`/`_fv_` prefixes (used when
    /// evaluating our own reduction output; user input rejects them).
    pub allow_reserved_atoms: bool,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    logic: Logic,
    allow_reserved: bool,
    bound: Vec<String>,
    quant_depth: u32,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax { span: self.span(), expected: what.into() })
        }
    }

    fn err(&self, expected: &str) -> Error {
        Error::Syntax { span: self.span(), expected: expected.into() }
    }

    fn logic_err(&self, op: &str) -> Error {
        Error::Logic {
            span: self.span(),
            op: op.into(),
            logic: self.logic.name().into(),
        }
    }

    /// Does a formula start at the current token? Used to decide whether a
    /// prefix-operator name like `X` acts as an operator or as a name.
    fn formula_starts(&self, tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::Ident(_)
                | Tok::LParen
                | Tok::Not
                | Tok::Hole
                | Tok::DiamondOp
                | Tok::BoxOp
        )
    }

    fn parse_iff(&mut self) -> Result<Formula> {
        let lhs = self.parse_implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.parse_iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_implies(&mut self) -> Result<Formula> {
        let lhs = self.parse_or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.parse_implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_until()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.parse_until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_until(&mut self) -> Result<Formula> {
        let lhs = self.parse_unary()?;
        if let Tok::Ident(name) = self.peek() {
            if (name == "U" || name == "W") && self.formula_starts_at_next() {
                let strong = name == "U";
                if self.logic != Logic::Ltl {
                    // Inside `A(... U ...)` the quantified-pair parser owns
                    // the operator token.
                    if self.logic == Logic::Ctl && self.quant_depth > 0 {
                        return Ok(lhs);
                    }
                    return Err(self.logic_err(if strong { "U" } else { "W" }));
                }
                self.bump();
                let rhs = self.parse_until()?;
                return Ok(if strong {
                    Formula::until(lhs, rhs)
                } else {
                    Formula::weak_until(lhs, rhs)
                });
            }
        }
        Ok(lhs)
    }

    fn formula_starts_at_next(&self) -> bool {
        let t = self.peek2().clone();
        self.formula_starts(&t)
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                let x = self.parse_unary()?;
                Ok(match x.kind() {
                    Kind::Atom(a) => Formula::neg_atom(a.clone()),
                    _ => Formula::not(x),
                })
            }
            Tok::DiamondOp => {
                if self.logic != Logic::Mu {
                    return Err(self.logic_err("<.>"));
                }
                self.bump();
                Ok(Formula::diamond(self.parse_unary()?))
            }
            Tok::BoxOp => {
                if self.logic != Logic::Mu {
                    return Err(self.logic_err("[.]"));
                }
                self.bump();
                Ok(Formula::boxm(self.parse_unary()?))
            }
            Tok::Ident(name) => self.parse_ident_prefix(name),
            Tok::Hole => {
                self.bump();
                Ok(Formula::hole())
            }
            Tok::LParen => {
                self.bump();
                let x = self.parse_iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(x)
            }
            _ => Err(self.err("a formula")),
        }
    }

    fn parse_ident_prefix(&mut self, name: String) -> Result<Formula> {
        // Context application: any name directly followed by `[`.
        if *self.peek2() == Tok::LBracket {
            self.bump();
            self.bump();
            let arg = self.parse_iff()?;
            self.expect(Tok::RBracket, "`]`")?;
            return Ok(Formula::apply(name, arg));
        }
        match name.as_str() {
            "true" => {
                self.bump();
                Ok(Formula::t())
            }
            "false" => {
                self.bump();
                Ok(Formula::f())
            }
            "mu" | "nu" => {
                if self.logic != Logic::Mu {
                    return Err(self.logic_err(&name));
                }
                self.bump();
                let var = match self.peek().clone() {
                    Tok::Ident(v) => {
                        self.bump();
                        v
                    }
                    _ => return Err(self.err("a fixpoint variable")),
                };
                self.expect(Tok::Dot, "`.`")?;
                self.bound.push(var.clone());
                let body = self.parse_iff()?;
                self.bound.pop();
                Ok(if name == "mu" {
                    Formula::mu(var, body)
                } else {
                    Formula::nu(var, body)
                })
            }
            "X" | "G" | "F" if self.formula_starts_at_next() => {
                if self.logic != Logic::Ltl {
                    return Err(self.logic_err(&name));
                }
                self.bump();
                let x = self.parse_unary()?;
                Ok(match name.as_str() {
                    "X" => Formula::next(x),
                    "G" => Formula::globally(x),
                    _ => Formula::finally(x),
                })
            }
            "AX" | "EX" | "AG" | "EG" | "AF" | "EF" if self.formula_starts_at_next() => {
                if self.logic != Logic::Ctl {
                    return Err(self.logic_err(&name));
                }
                self.bump();
                let x = self.parse_unary()?;
                Ok(match name.as_str() {
                    "AX" => Formula::ax(x),
                    "EX" => Formula::ex(x),
                    "AG" => Formula::ag(x),
                    "EG" => Formula::eg(x),
                    "AF" => Formula::af(x),
                    _ => Formula::ef(x),
                })
            }
            "A" | "E" if *self.peek2() == Tok::LParen => {
                if self.logic != Logic::Ctl {
                    return Err(self.logic_err(&name));
                }
                self.bump();
                self.bump();
                self.quant_depth += 1;
                let lhs = self.parse_iff()?;
                let op = match self.peek().clone() {
                    Tok::Ident(op) if op == "U" || op == "W" => {
                        self.bump();
                        op
                    }
                    _ => return Err(self.err("`U` or `W`")),
                };
                let rhs = self.parse_iff()?;
                self.quant_depth -= 1;
                self.expect(Tok::RParen, "`)`")?;
                Ok(match (name.as_str(), op.as_str()) {
                    ("A", "U") => Formula::au(lhs, rhs),
                    ("A", "W") => Formula::aw(lhs, rhs),
                    ("E", "U") => Formula::eu(lhs, rhs),
                    _ => Formula::ew(lhs, rhs),
                })
            }
            _ => {
                // Plain name: fixpoint variable (mu-calculus, uppercase or
                // bound) or an atom.
                let span = self.span();
                self.bump();
                let is_var = self.logic == Logic::Mu
                    && (self.bound.iter().any(|b| *b == name)
                        || name.chars().next().is_some_and(|c| c.is_uppercase()));
                if is_var {
                    Ok(Formula::var(name))
                } else {
                    // Identifiers start with a letter; names with a leading
                    // underscore (in particular the generated `_ctx_`/`_fv_`
                    // atoms) are only accepted when evaluating reduction
                    // output.
                    if !self.allow_reserved && name.starts_with('_') {
                        return Err(Error::ReservedAtom(name));
                    }
                    let _ = span;
                    Ok(Formula::atom(name))
                }
            }
        }
    }
}

/// Parse a formula of the given logic. Query connectives are accepted
/// anywhere; per-logic operator use and hole positivity are validated.
pub fn parse_formula(text: &str, logic: Logic) -> Result<Formula> {
    parse_formula_with(text, &ParseOptions { logic, allow_reserved_atoms: false })
}

pub fn parse_formula_with(text: &str, opts: &ParseOptions) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        logic: opts.logic,
        allow_reserved: opts.allow_reserved_atoms,
        bound: Vec::new(),
        quant_depth: 0,
    };
    let phi = p.parse_iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("end of input"));
    }
    validate(&phi, opts.logic, true, true)?;
    Ok(phi)
}

// ---------------------------------------------------------------------------
// Printing.

fn prec(kind: &Kind) -> u8 {
    match kind {
        Kind::Iff(..) => 1,
        Kind::Implies(..) => 2,
        Kind::Or(..) => 3,
        Kind::And(..) => 4,
        Kind::Until(..) | Kind::WeakUntil(..) => 5,
        Kind::Mu(..) | Kind::Nu(..) => 0,
        _ => 6,
    }
}

fn print_into(phi: &Formula, min_prec: u8, out: &mut String) {
    use Kind::*;
    let my = prec(phi.kind());
    let need_parens = my < min_prec;
    if need_parens {
        out.push('(');
    }
    match phi.kind() {
        True => out.push_str("true"),
        False => out.push_str("false"),
        Atom(a) => out.push_str(a.as_str()),
        NegAtom(a) => {
            out.push('!');
            out.push_str(a.as_str());
        }
        Var(v) => out.push_str(v.as_str()),
        Hole => out.push_str("@hole"),
        Apply(c, arg) => {
            out.push_str(c.as_str());
            out.push('[');
            print_into(arg, 0, out);
            out.push(']');
        }
        Not(x) => {
            out.push('!');
            print_into(x, 6, out);
        }
        And(l, r) => {
            // Same-operator chains stay flat (left-associative); any other
            // binary operand of equal or looser precedence gets parentheses.
            print_into(l, if matches!(l.kind(), And(..)) { 4 } else { 5 }, out);
            out.push_str(" & ");
            print_into(r, 5, out);
        }
        Or(l, r) => {
            print_into(l, if matches!(l.kind(), Or(..)) { 3 } else { 5 }, out);
            out.push_str(" | ");
            print_into(r, 5, out);
        }
        Implies(l, r) => {
            print_into(l, 4, out);
            out.push_str(" -> ");
            print_into(r, if matches!(r.kind(), Implies(..)) { 2 } else { 4 }, out);
        }
        Iff(l, r) => {
            print_into(l, 4, out);
            out.push_str(" <-> ");
            print_into(r, if matches!(r.kind(), Iff(..)) { 1 } else { 4 }, out);
        }
        Until(l, r) => {
            print_into(l, 6, out);
            out.push_str(" U ");
            print_into(
                r,
                if matches!(r.kind(), Until(..) | WeakUntil(..)) { 5 } else { 6 },
                out,
            );
        }
        WeakUntil(l, r) => {
            print_into(l, 6, out);
            out.push_str(" W ");
            print_into(
                r,
                if matches!(r.kind(), Until(..) | WeakUntil(..)) { 5 } else { 6 },
                out,
            );
        }
        Next(x) | Globally(x) | Finally(x) => {
            out.push_str(match phi.kind() {
                Next(_) => "X ",
                Globally(_) => "G ",
                _ => "F ",
            });
            print_into(x, 6, out);
        }
        Ax(x) | Ex(x) | Ag(x) | Af(x) | Eg(x) | Ef(x) => {
            out.push_str(match phi.kind() {
                Ax(_) => "AX ",
                Ex(_) => "EX ",
                Ag(_) => "AG ",
                Af(_) => "AF ",
                Eg(_) => "EG ",
                _ => "EF ",
            });
            print_into(x, 6, out);
        }
        Diamond(x) => {
            out.push_str("<.> ");
            print_into(x, 6, out);
        }
        Boxm(x) => {
            out.push_str("[.] ");
            print_into(x, 6, out);
        }
        Au(l, r) | Aw(l, r) | Eu(l, r) | Ew(l, r) => {
            out.push_str(match phi.kind() {
                Au(..) | Aw(..) => "A(",
                _ => "E(",
            });
            print_into(l, 0, out);
            out.push_str(match phi.kind() {
                Au(..) | Eu(..) => " U ",
                _ => " W ",
            });
            print_into(r, 0, out);
            out.push(')');
        }
        Mu(v, b) | Nu(v, b) => {
            out.push_str(match phi.kind() {
                Mu(..) => "mu ",
                _ => "nu ",
            });
            out.push_str(v.as_str());
            out.push_str(". ");
            print_into(b, 0, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// Canonical text form; `parse_formula(print_formula(phi), logic)` is
/// structurally equal to `phi`.
pub fn print_formula(phi: &Formula) -> String {
    let mut out = String::new();
    print_into(phi, 0, &mut out);
    out
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    #[test]
    fn parse_atoms_and_bools() {
        assert_eq!(parse_formula("p", Logic::Prop).unwrap(), F::atom("p"));
        assert_eq!(parse_formula("true", Logic::Prop).unwrap(), F::t());
        assert_eq!(parse_formula("!p", Logic::Prop).unwrap(), F::neg_atom("p"));
    }

    #[test]
    fn parse_eq3() {
        let phi = parse_formula("c[G F p] <-> ((G F p & c[true]) | c[false])", Logic::Ltl)
            .unwrap();
        let gfp = F::globally(F::finally(F::atom("p")));
        let want = F::iff(
            F::apply("c", gfp.clone()),
            F::or(
                F::and(gfp, F::apply("c", F::t())),
                F::apply("c", F::f()),
            ),
        );
        assert_eq!(phi, want);
    }

    #[test]
    fn parse_mu_unfolding() {
        let phi = parse_formula("mu X. c[X]", Logic::Mu).unwrap();
        let want = F::mu("X", F::apply("c", F::var("X")));
        assert_eq!(phi, want);
    }

    #[test]
    fn until_precedence() {
        // q U (GF p & r) needs the parentheses; U binds tighter than &.
        let phi = parse_formula("p & q U r", Logic::Ltl).unwrap();
        assert_eq!(
            phi,
            F::and(F::atom("p"), F::until(F::atom("q"), F::atom("r")))
        );
        let phi = parse_formula("a U b U g", Logic::Ltl).unwrap();
        assert_eq!(
            phi,
            F::until(F::atom("a"), F::until(F::atom("b"), F::atom("g")))
        );
    }

    #[test]
    fn upper_names_are_mu_variables() {
        let phi = parse_formula("c[Y]", Logic::Mu).unwrap();
        assert_eq!(phi, F::apply("c", F::var("Y")));
        let phi = parse_formula("c[X]", Logic::Mu).unwrap();
        assert_eq!(phi, F::apply("c", F::var("X")));
    }

    #[test]
    fn ctl_quantified_pairs() {
        let phi = parse_formula("A(p U q) & E(p W q) & AG p", Logic::Ctl).unwrap();
        let want = F::and(
            F::and(
                F::au(F::atom("p"), F::atom("q")),
                F::ew(F::atom("p"), F::atom("q")),
            ),
            F::ag(F::atom("p")),
        );
        assert_eq!(phi, want);
    }

    #[test]
    fn reject_wrong_logic_operator() {
        assert!(matches!(
            parse_formula("G p", Logic::Prop),
            Err(Error::Logic { .. })
        ));
        assert!(matches!(
            parse_formula("AG p", Logic::Ltl),
            Err(Error::Logic { .. })
        ));
    }

    #[test]
    fn reject_reserved_atoms() {
        assert!(matches!(
            parse_formula("_ctx_c_0 & p", Logic::Prop),
            Err(Error::ReservedAtom(_))
        ));
        // `eval` re-reads our own reduction output, where they are fine.
        let opts = ParseOptions { logic: Logic::Prop, allow_reserved_atoms: true };
        assert_eq!(
            parse_formula_with("_ctx_c_0", &opts).unwrap(),
            F::atom("_ctx_c_0")
        );
    }

    #[test]
    fn errors_carry_spans() {
        let err = parse_formula("p &", Logic::Prop).unwrap_err();
        match err {
            Error::Syntax { span, .. } => {
                assert!(span.begin <= 3 && span.end <= 3);
                assert_eq!(span.line, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn print_round_trip_examples() {
        for (text, logic) in [
            ("p", Logic::Prop),
            ("c[G F p] <-> ((G F p & c[true]) | c[false])", Logic::Ltl),
            ("mu X. c[X]", Logic::Mu),
            ("A(p U q) -> E(p W q)", Logic::Ctl),
            ("(p & q) U r", Logic::Ltl),
            ("p & q U r", Logic::Ltl),
            ("G (@hole -> G F p) -> p", Logic::Ltl),
        ] {
            let phi = parse_formula(text, logic).unwrap();
            let printed = print_formula(&phi);
            let back = parse_formula(&printed, logic).unwrap();
            assert_eq!(back, phi, "round trip of {text} via {printed}");
        }
    }

    #[test]
    fn print_eq2_matches_spec() {
        let gfp = F::globally(F::finally(F::atom("p")));
        let phi = F::iff(
            F::apply("c", gfp.clone()),
            F::or(F::and(gfp, F::apply("c", F::t())), F::apply("c", F::f())),
        );
        assert_eq!(
            print_formula(&phi),
            "c[G F p] <-> ((G F p & c[true]) | c[false])"
        );
    }
}
