use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::formula::{CmpOp, Expr, Formula, Interval, Predicate};

/// Parse nesting limit; deeper input is rejected instead of exhausting the stack.
const MAX_DEPTH: usize = 64;

/// Parses the textual formula language into a [`Formula`].
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    let node = parser.implies()?;
    let formula = parser.require_formula(node)?;
    if parser.peek() != &Tok::Eof {
        return Err(parser.unexpected(&["end of input", "`&`", "`|`", "`->`", "`U`"]));
    }
    Ok(formula)
}

/// A parenthesised group may hold either a formula or an arithmetic term;
/// which one is only known once the token after `)` is seen.
enum Node {
    Formula(Formula),
    Expr(Expr),
}

const COMPARISONS: &[&str] = &["`<`", "`<=`", "`>`", "`>=`", "`==`", "`!=`"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        if token.tok != Tok::Eof {
            self.pos += 1;
        }
        token
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            format!("unexpected {}", self.peek().describe()),
            self.span(),
            expected.iter().map(|s| (*s).to_owned()).collect(),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek() == &tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{}`", tok.text())]))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(
                format!("nesting deeper than {MAX_DEPTH} levels"),
                self.span(),
                Vec::new(),
            ));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn require_formula(&self, node: Node) -> Result<Formula, ParseError> {
        match node {
            Node::Formula(f) => Ok(f),
            Node::Expr(_) => Err(ParseError::new(
                format!(
                    "expected a comparison operator, found {}",
                    self.peek().describe()
                ),
                self.span(),
                COMPARISONS.iter().map(|s| (*s).to_owned()).collect(),
            )),
        }
    }

    fn implies(&mut self) -> Result<Node, ParseError> {
        let lhs = self.or()?;
        if self.peek() != &Tok::Arrow {
            return Ok(lhs);
        }
        let lhs = self.require_formula(lhs)?;
        self.bump();
        self.enter()?;
        let rhs = self.implies()?;
        self.leave();
        let rhs = self.require_formula(rhs)?;
        Ok(Node::Formula(lhs.implies(rhs)))
    }

    fn or(&mut self) -> Result<Node, ParseError> {
        let mut node = self.and()?;
        while self.peek() == &Tok::Pipe {
            let lhs = self.require_formula(node)?;
            self.bump();
            let rhs = self.and()?;
            let rhs = self.require_formula(rhs)?;
            node = Node::Formula(lhs.or(rhs));
        }
        Ok(node)
    }

    fn and(&mut self) -> Result<Node, ParseError> {
        let mut node = self.unary()?;
        while self.peek() == &Tok::Amp {
            let lhs = self.require_formula(node)?;
            self.bump();
            let rhs = self.unary()?;
            let rhs = self.require_formula(rhs)?;
            node = Node::Formula(lhs.and(rhs));
        }
        Ok(node)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                let body = self.nested_unary()?;
                Ok(Node::Formula(body.not()))
            }
            Tok::Globally | Tok::Eventually => {
                let globally = self.bump().tok == Tok::Globally;
                let interval = self.optional_interval()?;
                let body = self.nested_unary()?;
                Ok(Node::Formula(if globally {
                    Formula::globally(interval, body)
                } else {
                    Formula::eventually(interval, body)
                }))
            }
            _ => self.atom_or_until(),
        }
    }

    fn nested_unary(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let body = self.unary()?;
        self.leave();
        self.require_formula(body)
    }

    fn atom_or_until(&mut self) -> Result<Node, ParseError> {
        let lhs = self.primary()?;
        if self.peek() != &Tok::Until {
            return Ok(lhs);
        }
        let lhs = self.require_formula(lhs)?;
        self.bump();
        let interval = self.optional_interval()?;
        let rhs = self.primary()?;
        let rhs = self.require_formula(rhs)?;
        Ok(Node::Formula(lhs.until(interval, rhs)))
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Tok::True => {
                self.bump();
                Ok(Node::Formula(Formula::True))
            }
            Tok::False => {
                self.bump();
                Ok(Node::Formula(Formula::False))
            }
            Tok::LParen => {
                self.bump();
                self.enter()?;
                let inner = self.implies()?;
                self.leave();
                self.expect(Tok::RParen)?;
                match inner {
                    Node::Formula(f) => Ok(Node::Formula(f)),
                    Node::Expr(e) => {
                        let e = self.continue_term(e)?;
                        let e = self.continue_expr(e)?;
                        self.comparison_tail(e)
                    }
                }
            }
            Tok::Minus | Tok::Abs | Tok::Number(_) | Tok::Ident(_) => {
                let e = self.expr()?;
                self.comparison_tail(e)
            }
            _ => Err(self.unexpected(&[
                "`(`",
                "`true`",
                "`false`",
                "`!`",
                "`G`",
                "`F`",
                "number",
                "identifier",
                "`-`",
                "`abs`",
            ])),
        }
    }

    fn comparison_tail(&mut self, lhs: Expr) -> Result<Node, ParseError> {
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::EqEq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return Ok(Node::Expr(lhs)),
        };
        self.bump();
        let rhs = self.expr()?;
        let mut predicate = Predicate::new(lhs, op, rhs);
        if self.peek() == &Tok::Tilde {
            let tilde = self.bump();
            if !matches!(op, CmpOp::Eq | CmpOp::Ne) {
                return Err(ParseError::new(
                    "a tolerance only applies to `==` and `!=`",
                    tilde.span,
                    Vec::new(),
                ));
            }
            let (tolerance, _) = self.number()?;
            predicate = predicate
                .with_tolerance(tolerance)
                .expect("number literals are finite and non-negative");
        }
        Ok(Node::Formula(Formula::Atom(predicate)))
    }

    fn optional_interval(&mut self) -> Result<Interval, ParseError> {
        if self.peek() != &Tok::LBracket {
            return Ok(Interval::unbounded());
        }
        let open = self.bump().span;
        let (lo, _) = self.number()?;
        self.expect(Tok::Comma)?;
        let hi = if self.eat(&Tok::Inf) {
            f64::INFINITY
        } else if let Tok::Number(n) = *self.peek() {
            self.bump();
            n
        } else {
            return Err(self.unexpected(&["number", "`inf`"]));
        };
        let close = self.expect(Tok::RBracket)?.span;
        Interval::new(lo, hi).map_err(|err| {
            ParseError::new(
                format!("non-singular interval required: {err}"),
                SourceSpan::new(open.start, close.end),
                Vec::new(),
            )
        })
    }

    fn number(&mut self) -> Result<(f64, SourceSpan), ParseError> {
        match *self.peek() {
            Tok::Number(n) => Ok((n, self.bump().span)),
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let first = self.term()?;
        self.continue_expr(first)
    }

    fn continue_expr(&mut self, mut lhs: Expr) -> Result<Expr, ParseError> {
        loop {
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = if add {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let first = self.factor()?;
        self.continue_term(first)
    }

    fn continue_term(&mut self, mut lhs: Expr) -> Result<Expr, ParseError> {
        while self.eat(&Tok::Star) {
            let rhs = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                if let Tok::Number(n) = *self.peek() {
                    self.bump();
                    return Ok(Expr::Const(-n));
                }
                self.enter()?;
                let inner = self.factor()?;
                self.leave();
                Ok(Expr::Neg(Box::new(inner)))
            }
            Tok::Abs => {
                self.bump();
                self.expect(Tok::LParen)?;
                self.enter()?;
                let inner = self.expr()?;
                self.leave();
                self.expect(Tok::RParen)?;
                Ok(Expr::Abs(Box::new(inner)))
            }
            Tok::Number(n) => {
                self.bump();
                Ok(Expr::Const(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if self.peek() != &Tok::LParen {
                    return Ok(Expr::Var(name));
                }
                self.bump();
                let Tok::Ident(arg) = self.peek().clone() else {
                    return Err(self.unexpected(&["identifier"]));
                };
                self.bump();
                self.expect(Tok::RParen)?;
                Ok(Expr::Var(format!("{name}({arg})")))
            }
            Tok::LParen => {
                self.bump();
                self.enter()?;
                let inner = self.expr()?;
                self.leave();
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["number", "identifier", "`(`", "`-`", "`abs`"])),
        }
    }
}
