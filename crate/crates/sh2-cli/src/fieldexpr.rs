//! Parser for user-supplied vector-field expressions.
//!
//! Grammar: a sum of terms, each a `*`-product of numeric literals, the
//! coordinates `x`, `y`, `z`, and exactly one basis symbol `dx`, `dy`, `dz`.
//! Examples: `x*dx`, `-y*dx - x*dy - dz`, `2.5*x*y*dz`.

use sh2::frame::CoordinateVectorField;
use sh2::GroupElement;

/// One monomial term: `coef * x^px * y^py * z^pz * d{basis}`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Term {
    coef: f64,
    powers: [u32; 3],
    basis: usize,
}

/// A parsed vector-field expression.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldExpr {
    terms: Vec<Term>,
}

impl FieldExpr {
    /// Parses an expression; errors carry a human-readable message.
    pub fn parse(input: &str) -> Result<Self, String> {
        Parser {
            tokens: tokenize(input)?,
            pos: 0,
        }
        .parse_expr()
    }

    /// Coordinate components at `q`.
    pub fn eval(&self, q: GroupElement) -> [f64; 3] {
        let coords = [q.x, q.y, q.z];
        let mut out = [0.0; 3];
        for t in &self.terms {
            let mut v = t.coef;
            for (axis, &p) in t.powers.iter().enumerate() {
                v *= coords[axis].powi(p as i32);
            }
            out[t.basis] += v;
        }
        out
    }

    /// The expression as an evaluable field (finite-difference derivatives).
    pub fn into_field(self) -> CoordinateVectorField {
        CoordinateVectorField::new(move |q| self.eval(q))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Coord(usize),
    Basis(usize),
    Plus,
    Minus,
    Star,
}

fn tokenize(input: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E') {
                    // Allow an exponent sign directly after e/E.
                    if matches!(bytes[i] as char, 'e' | 'E')
                        && i + 1 < bytes.len()
                        && matches!(bytes[i + 1] as char, '+' | '-')
                    {
                        i += 1;
                    }
                    i += 1;
                }
                let text = &input[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| format!("bad numeric literal '{text}'"))?;
                tokens.push(Token::Number(value));
            }
            'd' if matches!(bytes.get(i + 1).map(|&b| b as char), Some('x' | 'y' | 'z')) => {
                let axis = match bytes[i + 1] as char {
                    'x' => 0,
                    'y' => 1,
                    _ => 2,
                };
                tokens.push(Token::Basis(axis));
                i += 2;
            }
            'x' => {
                tokens.push(Token::Coord(0));
                i += 1;
            }
            'y' => {
                tokens.push(Token::Coord(1));
                i += 1;
            }
            'z' => {
                tokens.push(Token::Coord(2));
                i += 1;
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    if tokens.is_empty() {
        return Err("empty field expression".into());
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn parse_expr(mut self) -> Result<FieldExpr, String> {
        let mut terms = Vec::new();
        let mut sign = 1.0;
        match self.peek() {
            Some(Token::Minus) => {
                sign = -1.0;
                self.pos += 1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            terms.push(self.parse_term(sign)?);
            match self.peek() {
                None => break,
                Some(Token::Plus) => {
                    sign = 1.0;
                    self.pos += 1;
                }
                Some(Token::Minus) => {
                    sign = -1.0;
                    self.pos += 1;
                }
                Some(t) => return Err(format!("expected '+' or '-' between terms, got {t:?}")),
            }
        }
        Ok(FieldExpr { terms })
    }

    fn parse_term(&mut self, sign: f64) -> Result<Term, String> {
        let mut coef = sign;
        let mut powers = [0u32; 3];
        let mut basis: Option<usize> = None;
        let mut expect_factor = true;
        loop {
            match self.peek() {
                Some(Token::Number(v)) if expect_factor => {
                    coef *= v;
                    self.pos += 1;
                }
                Some(Token::Coord(axis)) if expect_factor => {
                    powers[*axis] += 1;
                    self.pos += 1;
                }
                Some(Token::Basis(axis)) if expect_factor => {
                    if basis.replace(*axis).is_some() {
                        return Err("a term may contain only one of dx, dy, dz".into());
                    }
                    self.pos += 1;
                }
                Some(Token::Star) if !expect_factor => {
                    expect_factor = true;
                    self.pos += 1;
                    continue;
                }
                Some(t) if expect_factor => {
                    return Err(format!("expected a factor, got {t:?}"));
                }
                _ => break,
            }
            expect_factor = false;
        }
        if expect_factor {
            return Err("dangling '*' in field expression".into());
        }
        match basis {
            Some(basis) => Ok(Term {
                coef,
                powers,
                basis,
            }),
            None => Err("each term needs exactly one of dx, dy, dz".into()),
        }
    }
}
