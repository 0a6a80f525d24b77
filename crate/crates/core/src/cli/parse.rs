//! Text grammar for expressions over a fixed alphabet.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' ('+' | '-')? INT)*
//! atom   := INT | 'q' | GENERATOR | '(' expr ')'
//! ```
//!
//! Juxtaposition is a product. Division is only by scalars. Generator names
//! are matched longest first, so `r^-1` is a single letter when the
//! alphabet has it and `r^-2` means `(r^-1)^2`.

use num_bigint::BigInt;

use crate::coeff::QRat;
use crate::error::{Error, Result};
use crate::ncalg::{Alphabet, GenId, NCExpr};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Q,
    Gen(GenId),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Longest generator name starting at `rest`, respecting word boundaries
/// for names that end in a letter or digit.
fn match_name(alphabet: &Alphabet, rest: &str) -> Option<(GenId, usize)> {
    alphabet
        .ids()
        .filter_map(|id| {
            let name = alphabet.name(id);
            let tail = rest.strip_prefix(name)?;
            let ends_in_word = name.chars().last().is_some_and(is_word_char);
            let glued = tail.chars().next().is_some_and(is_word_char);
            (!(ends_in_word && glued)).then_some((id, name.len()))
        })
        .max_by_key(|&(_, len)| len)
}

fn tokenize(src: &str, alphabet: &Alphabet) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, column: 1 };
    let mut i = 0;
    let advance = |pos: &mut Pos, s: &str| {
        for c in s.chars() {
            if c == '\n' {
                pos.line += 1;
                pos.column = 1;
            } else {
                pos.column += 1;
            }
        }
    };
    while i < src.len() {
        let rest = &src[i..];
        let c = rest.chars().next().expect("non-empty");
        if c.is_whitespace() {
            advance(&mut pos, &rest[..c.len_utf8()]);
            i += c.len_utf8();
            continue;
        }
        let start = pos;
        let (tok, len) = if let Some((id, len)) = match_name(alphabet, rest) {
            (Tok::Gen(id), len)
        } else if c.is_ascii_digit() {
            let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let n: BigInt = rest[..len].parse().map_err(|_| syntax(start, "bad integer"))?;
            (Tok::Int(n), len)
        } else if c == 'q' && !rest[1..].starts_with(is_word_char) {
            (Tok::Q, 1)
        } else {
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ if is_word_char(c) => {
                    let len = rest.find(|c: char| !is_word_char(c) && c != '\'').unwrap_or(rest.len());
                    return Err(Error::UnknownGenerator(rest[..len].to_string()));
                }
                _ => return Err(syntax(start, format!("unexpected character `{c}`"))),
            };
            (tok, c.len_utf8())
        };
        advance(&mut pos, &rest[..len]);
        i += len;
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NCExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NCExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.concat(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let d = self.unary()?;
                    let c = d.as_scalar().ok_or_else(|| syntax(pos, "division by a non-scalar"))?;
                    let inv = c.inv().map_err(|_| syntax(pos, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                Some(Tok::Int(_) | Tok::Q | Tok::Gen(_) | Tok::LParen) => {
                    acc = acc.concat(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<NCExpr> {
        if self.eat(&Tok::Minus) {
            return Ok(self.unary()?.scale(&-QRat::one()));
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i64> {
        let negative = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let k: i64 = n.try_into().map_err(|_| syntax(pos, "exponent out of range"))?;
                Ok(if negative { -k } else { k })
            }
            _ => Err(syntax(pos, "expected an integer exponent")),
        }
    }

    fn power(&mut self) -> Result<NCExpr> {
        let mut base = self.atom()?;
        while self.eat(&Tok::Caret) {
            let pos = self.pos();
            let k = self.exponent()?;
            base = self.raise(base, k, pos)?;
        }
        Ok(base)
    }

    fn raise(&self, base: NCExpr, k: i64, pos: Pos) -> Result<NCExpr> {
        if let Some(c) = base.as_scalar() {
            return Ok(NCExpr::scalar(c.pow(k).map_err(|_| syntax(pos, "zero to a negative power"))?));
        }
        let base = if k < 0 { self.inverse_letter(&base).ok_or_else(|| {
            syntax(pos, "negative powers need a scalar or a generator with a `^-1` partner")
        })? } else { base };
        let mut out = NCExpr::one();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        Ok(out)
    }

    fn inverse_letter(&self, base: &NCExpr) -> Option<NCExpr> {
        let mut terms = base.terms();
        let (w, c) = terms.next()?;
        if terms.next().is_some() || w.len() != 1 || !c.is_one() {
            return None;
        }
        let inv = self.alphabet.lookup(&format!("{}^-1", self.alphabet.name(w[0])))?;
        Some(NCExpr::gen(inv))
    }

    fn atom(&mut self) -> Result<NCExpr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(NCExpr::scalar(QRat::from_bigint(n))),
            Some(Tok::Q) => Ok(NCExpr::scalar(QRat::q_pow(1))),
            Some(Tok::Gen(g)) => Ok(NCExpr::gen(g)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let close = self.pos();
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(close, "expected `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(syntax(pos, format!("unexpected {}", describe(&t)))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::RParen => "`)`",
        _ => "token",
    }
}

/// Parses `src` into an unreduced expression over `alphabet`.
pub fn parse_expr(src: &str, alphabet: &Alphabet) -> Result<NCExpr> {
    let toks = tokenize(src, alphabet)?;
    let mut end = Pos { line: 1, column: 1 };
    for c in src.chars() {
        if c == '\n' {
            end.line += 1;
            end.column = 1;
        } else {
            end.column += 1;
        }
    }
    let mut p = Parser { toks, at: 0, end, alphabet };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        let pos = p.pos();
        let t = p.bump().expect("token");
        return Err(syntax(pos, format!("unexpected {} after expression", describe(&t))));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupPresentation;

    #[test]
    fn cartan_form_text() {
        let g = GroupPresentation::new().unwrap();
        let a = g.alphabet();
        let e = parse_expr("r^-1 * dr + f+ * df-", a).unwrap();
        let gs = g.gens;
        let want = NCExpr::from_terms([(QRat::one(), vec![gs.ri, gs.dr]), (QRat::one(), vec![gs.p, gs.dm])]);
        assert_eq!(e, want);
    }

    #[test]
    fn literals() {
        let g = GroupPresentation::new().unwrap();
        let a = g.alphabet();
        assert!(parse_expr("0", a).unwrap().is_zero());
        let e = parse_expr("q^2 f+ f-", a).unwrap();
        assert_eq!(e, NCExpr::term(QRat::q_pow(2), vec![g.gens.p, g.gens.m]));
        let c = parse_expr("(q^4-1)/q^2", a).unwrap();
        assert_eq!(c.as_scalar().unwrap(), QRat::laurent(&[(1, 2), (-1, -2)]));
        assert_eq!(parse_expr("r^-2", a).unwrap(), NCExpr::word(vec![g.gens.ri, g.gens.ri]));
        assert_eq!(parse_expr("f+^3", a).unwrap(), NCExpr::word(vec![g.gens.p; 3]));
    }

    #[test]
    fn errors_carry_position() {
        let g = GroupPresentation::new().unwrap();
        let a = g.alphabet();
        match parse_expr("f+ +\n  * r", a) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("x f+", a), Err(Error::UnknownGenerator(n)) if n == "x"));
        assert!(matches!(parse_expr("f+ / f-", a), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("(f+", a), Err(Error::Syntax { .. })));
    }
}
