//! Text syntax for polynomials, points and scalars.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' uint)?
//! atom  := number | I | J | K | x1..xn | x | y | z | field name | '(' expr ')'
//! ```
//!
//! Multiplication is explicit. Division is only by a nonzero scalar constant.
//! `x`, `y`, `z` are aliases of `x1`, `x2`, `x3`; other names (`al`, `be`,
//! `t`) are looked up in the scalar field.

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::QPoly;
use crate::quat::{QuatAlgebra, Quaternion};
use crate::scalar::{Field, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` for arity {n}")]
    Arity { name: String, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].to_string())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

fn number<F: Field>(s: &str, pos: usize) -> Result<F, ParseError> {
    let bad = || ParseError::Syntax {
        pos,
        msg: format!("malformed number `{s}`"),
    };
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(F::from_rat(&Rat::from_bigints(num, den)))
}

struct Parser<'a, F: Field> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
    alg: &'a QuatAlgebra<F>,
}

impl<'a, F: Field> Parser<'a, F> {
    fn new(src: &str, n: usize, alg: &'a QuatAlgebra<F>) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
            n,
            alg,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') => self.err("missing `*` (implicit multiplication)"),
            _ => self.err("unexpected token"),
        }
    }

    fn expr(&mut self) -> Result<QPoly<F>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?).expect("same arity");
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?).expect("same arity");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly<F>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs, self.alg).expect("same arity");
                }
                Tok::Sym('/') => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let c = scalar_constant(&rhs).ok_or_else(|| ParseError::Syntax {
                        pos,
                        msg: "divisor must be a scalar constant".into(),
                    })?;
                    let inv = c.inv().map_err(|_| ParseError::Syntax {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.scale_left(&Quaternion::scalar(inv), self.alg);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly<F>, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<QPoly<F>, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Num(s) => {
                let k: u32 = s.parse().map_err(|_| ParseError::Syntax {
                    pos,
                    msg: format!("exponent `{s}` is not a non-negative integer"),
                })?;
                Ok(base.pow(k, self.alg))
            }
            _ => Err(ParseError::Syntax {
                pos,
                msg: "exponent must be a non-negative integer".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<QPoly<F>, ParseError> {
        let pos = self.pos();
        let n = self.n;
        let konst = |q: Quaternion<F>| QPoly::constant(n, q);
        match self.bump() {
            Tok::Num(s) => Ok(konst(Quaternion::scalar(number(&s, pos)?))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "I" => Ok(konst(Quaternion::i())),
                "J" => Ok(konst(Quaternion::j())),
                "K" => Ok(konst(Quaternion::k())),
                _ => {
                    if let Some(idx) = variable_index(&name) {
                        if idx < n {
                            return Ok(QPoly::var(n, idx));
                        }
                        return Err(ParseError::Arity { name, n });
                    }
                    match F::named_variable(&name) {
                        Some(v) => Ok(konst(Quaternion::scalar(v))),
                        None => Err(ParseError::Arity { name, n }),
                    }
                }
            },
            Tok::End => Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// 0-based index of `x<k>` or an alias.
fn variable_index(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => {
            let digits = name.strip_prefix('x')?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
                return None;
            }
            digits.parse::<usize>().ok().map(|k| k - 1)
        }
    }
}

fn scalar_constant<F: Field>(p: &QPoly<F>) -> Option<F> {
    if p.is_zero() {
        return Some(F::zero());
    }
    let zero = vec![0; p.arity()];
    if p.num_terms() != 1 || p.coeff(&zero).is_zero() {
        return None;
    }
    let c = p.coeff(&zero);
    c.is_scalar().then(|| c.real_part())
}

pub fn parse_poly<F: Field>(src: &str, n: usize, alg: &QuatAlgebra<F>) -> Result<QPoly<F>, ParseError> {
    let mut p = Parser::new(src, n, alg)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A constant quaternion expression.
pub fn parse_quaternion<F: Field>(src: &str, alg: &QuatAlgebra<F>) -> Result<Quaternion<F>, ParseError> {
    let p = parse_poly(src, 0, alg)?;
    Ok(p.coeff(&[]))
}

pub fn parse_scalar<F: Field>(src: &str, alg: &QuatAlgebra<F>) -> Result<F, ParseError> {
    let q = parse_quaternion(src, alg)?;
    if !q.is_scalar() {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: format!("`{src}` is not a scalar"),
        });
    }
    Ok(q.real_part())
}

/// `(q1, q2, ...)` with constant quaternion entries.
pub fn parse_point<F: Field>(src: &str, alg: &QuatAlgebra<F>) -> Result<Vec<Quaternion<F>>, ParseError> {
    let mut p = Parser::new(src, 0, alg)?;
    p.expect('(')?;
    let mut out = Vec::new();
    if *p.peek() == Tok::Sym(')') {
        p.bump();
    } else {
        loop {
            out.push(p.expr()?.coeff(&[]));
            match p.peek() {
                Tok::Sym(',') => {}
                Tok::Sym(')') => {
                    p.bump();
                    break;
                }
                _ => return p.err("expected `,` or `)`"),
            }
            p.bump();
        }
    }
    p.finish()?;
    Ok(out)
}

pub fn format_point<F: Field>(v: &[Quaternion<F>]) -> String {
    let parts: Vec<String> = v.iter().map(Quaternion::to_expr).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{RatFunc, F64};

    type Q = Quaternion<Rat>;

    fn h() -> QuatAlgebra<Rat> {
        QuatAlgebra::hamilton()
    }

    #[test]
    fn product_of_linear_factors() {
        let a = h();
        let p = parse_poly("(x - I)*(x - J)", 1, &a).unwrap();
        assert_eq!(p.to_expr(), "x1^2 + (-I - J)*x1 + K");
        assert_eq!(p.eval(&[Q::j()], &a).unwrap(), Q::zero());
        assert_eq!(p.eval(&[Q::i()], &a).unwrap(), Q::from_ints([0, 0, 0, 2]));
    }

    #[test]
    fn literals_collect_in_written_order() {
        let a = h();
        let p = parse_poly("I*x1*J*x2", 2, &a).unwrap();
        assert_eq!(p, QPoly::monomial(vec![1, 1], Q::k()));
        let p = parse_poly("J*x1*I*x2", 2, &a).unwrap();
        assert_eq!(p, QPoly::monomial(vec![1, 1], Q::k().neg()));
    }

    #[test]
    fn errors() {
        let a = h();
        assert!(matches!(parse_poly("x^-1", 1, &a), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("2x", 1, &a), Err(ParseError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x3", 2, &a), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_poly("al", 1, &a), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_poly("x/x", 1, &a), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", 1, &a), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_poly("(x", 1, &a), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x $", 1, &a), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn unary_minus_and_fractions() {
        let a = h();
        let p = parse_poly("-1/2*I + 3/4", 0, &a).unwrap();
        assert_eq!(p.coeff(&[]), Quaternion::from_rats([Rat::new(3, 4), Rat::new(-1, 2), Rat::zero(), Rat::zero()]));
        let p = parse_poly("-x^2", 1, &a).unwrap();
        assert_eq!(p, QPoly::monomial(vec![2], Q::one().neg()));
        assert_eq!(parse_scalar("0.25", &a).unwrap(), Rat::new(1, 4));
    }

    #[test]
    fn points() {
        let a = h();
        assert_eq!(parse_point("(I, 1+J)", &a).unwrap(), vec![Q::i(), Q::from_ints([1, 0, 1, 0])]);
        assert_eq!(parse_point("(I)", &a).unwrap(), vec![Q::i()]);
        assert!(parse_point("(I J)", &a).is_err());
        assert!(parse_point("I, J", &a).is_err());
        assert!(matches!(parse_point("(I", &a), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn function_field_names() {
        let a = QuatAlgebra::new(RatFunc::var(0), RatFunc::var(1)).unwrap();
        let p = parse_poly("x^2 - al + t*(y^2 - be)", 2, &a).unwrap();
        assert_eq!(p, crate::qform::counterexample_poly());
        assert_eq!(parse_poly(&p.to_expr(), 2, &a).unwrap(), p);
        let s = parse_scalar("(al + 1)/(be*t)", &a).unwrap();
        assert_eq!(parse_scalar(&s.fmt_factor(), &a).unwrap(), s);
    }

    #[test]
    fn floats() {
        let a = QuatAlgebra::new(F64(-1.0), F64(-1.0)).unwrap();
        let p = parse_poly("0.5*I*x - 2.25", 1, &a).unwrap();
        assert_eq!(parse_poly(&p.to_expr(), 1, &a).unwrap(), p);
    }
}
