use crate::scalars::Field;

use super::poly::{StarPolynomial, DEFAULT_DEGREE_CAP};
use super::word::{Alphabet, Letter, Word};
use super::AlgebraError;

/// Parses an expression such as `"(1 - s1 s1*) s2 + q^2 s1 s2* s2 s1*"`.
///
/// Grammar: `expr := term (('+'|'-') term)*`, a term is a juxtaposition of
/// scalars and factors, `factor := atom '*'? ('^' integer)?`,
/// `atom := generator | '(' expr ')' | number | q | qbar | r | rinv | i`.
pub fn parse_expression<F: Field>(text: &str, alphabet: &Alphabet, field: &F) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    parse_with_cap(text, alphabet, field, DEFAULT_DEGREE_CAP)
}

pub fn parse_with_cap<F: Field>(
    text: &str,
    alphabet: &Alphabet,
    field: &F,
    cap: usize,
) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, alphabet, field, cap, end: text.len() };
    let out = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Int(u32),
    Star,
    Caret,
    Plus,
    Minus,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let b = text.as_bytes();
    let mut out = vec![];
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let simple = match c {
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'(' => Some(Tok::Open),
            b')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((start, t));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() || c == b'.' {
            let digits = |i: &mut usize| {
                while *i < b.len() && (b[*i].is_ascii_digit() || b[*i] == b'.') {
                    *i += 1;
                }
            };
            digits(&mut i);
            // an exponent is a bare integer right after '^'
            if matches!(out.last(), Some((_, Tok::Caret))) {
                let n = text[start..i].parse::<u32>().map_err(|_| AlgebraError::Parse {
                    position: start,
                    message: "exponent must be a nonnegative integer".into(),
                })?;
                out.push((start, Tok::Int(n)));
                continue;
            }
            if i < b.len() && b[i] == b'/' {
                i += 1;
                let den = i;
                digits(&mut i);
                if i == den {
                    return Err(AlgebraError::Parse { position: den, message: "expected a denominator".into() });
                }
            }
            out.push((start, Tok::Number(text[start..i].to_string())));
        } else {
            return Err(AlgebraError::Parse { position: start, message: format!("unexpected character {:?}", c as char) });
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    alphabet: &'a Alphabet,
    field: &'a F,
    cap: usize,
    end: usize,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> AlgebraError {
        AlgebraError::Parse { position: self.position(), message: message.to_string() }
    }

    fn expr(&mut self) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::Number(_) | Tok::Open)) {
            let f = self.factor()?;
            acc = acc.checked_mul(&f, self.cap)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
        let mut base = self.atom()?;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            base = base.adjoint();
        }
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((_, Tok::Int(k))) => {
                    let k = *k;
                    self.pos += 1;
                    base = base.checked_pow(k, self.cap)?;
                }
                _ => return Err(self.error("expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
        let position = self.position();
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        self.pos += 1;
        let scalar = |c| Ok(StarPolynomial::constant(c));
        match tok {
            Tok::Open => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Number(n) => scalar(self.field.literal(&n)?),
            Tok::Ident(name) => match name.as_str() {
                "q" => scalar(self.field.q()),
                "qbar" => scalar(self.field.qbar()),
                "r" => scalar(self.field.r()?),
                "rinv" => scalar(self.field.rinv()?),
                "i" => scalar(self.field.imag_unit()),
                _ => match self.alphabet.index_of(&name) {
                    Some(g) => Ok(StarPolynomial::word(Word(vec![Letter::plain(g)]))),
                    None => Err(AlgebraError::UnknownGenerator { name, position }),
                },
            },
            _ => {
                self.pos -= 1;
                Err(self.error("expected a generator, scalar or '('"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Coeff, ExactField, FloatField, GaussQ, ScalarQ};
    use num_complex::Complex64;

    fn field() -> ExactField {
        ExactField::new(GaussQ::from_ratio(1, 2))
    }

    fn s() -> Alphabet {
        Alphabet::numbered("s", 2)
    }

    #[test]
    fn spec_examples() {
        let f = field();
        let p = parse_expression("s1* s2 - q s2 s1*", &s(), &f).unwrap();
        assert_eq!(p.len(), 2);
        let w = Word(vec![Letter::plain(1), Letter::starred(0)]);
        assert_eq!(p.coeff(&w), ScalarQ::ratio(-1, 2));

        let p = parse_expression("(1 - s1 s1*) s2", &s(), &f).unwrap();
        assert_eq!(p.display(&s()).to_string(), "s2 - s1 s1* s2");

        let p = parse_expression("q^2 s1 s2* s2 s1*", &s(), &f).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.terms().next().unwrap().1, &ScalarQ::ratio(1, 4));
    }

    #[test]
    fn adjoint_and_powers() {
        let f = field();
        let p = parse_expression("(q s2 s1*)*", &s(), &f).unwrap();
        assert_eq!(p.display(&s()).to_string(), "q s1 s2*");
        let p = parse_expression("s1*^3", &s(), &f).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.display(&s()).to_string(), "s1*^3");
    }

    #[test]
    fn errors_carry_positions() {
        let f = field();
        assert!(matches!(parse_expression("s1 x2", &s(), &f), Err(AlgebraError::UnknownGenerator { position: 3, .. })));
        assert!(matches!(parse_expression("s1 + ", &s(), &f), Err(AlgebraError::Parse { position: 5, .. })));
        assert!(matches!(parse_expression("(s1", &s(), &f), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_expression("s1^x", &s(), &f), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_with_cap("s1^5", &s(), &f, 4), Err(AlgebraError::DegreeCap { len: 5, cap: 4 })));
    }

    #[test]
    fn exact_mode_rejects_unrepresentable_root() {
        let f = ExactField::new(GaussQ::from_parts((3, 5), (4, 5)));
        assert!(matches!(parse_expression("r s1", &s(), &f), Err(AlgebraError::Scalar(_))));
    }

    #[test]
    fn float_literals() {
        let f = FloatField::new(Complex64::new(0.9, 0.0));
        let p = parse_expression("0.5 i s1 + q", &s(), &f).unwrap();
        assert_eq!(p.coeff(&Word::empty()), Complex64::new(0.9, 0.0));
        assert_eq!(p.coeff(&Word(vec![Letter::plain(0)])), Complex64::new(0.0, 0.5));
        assert!(Coeff::is_zero(&p.coeff(&Word(vec![Letter::plain(1)]))));
    }
}
