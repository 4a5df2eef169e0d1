//! Integer expressions over named variables, used by presentation templates such as
//! `S2((2,-1),(2m+1,m),(2n,1))`.
//!
//! Supported: integer literals, identifiers (`m`, `n2`), `+ - *`, parentheses, unary signs
//! and implicit multiplication of a factor by a following identifier or parenthesis
//! (`2m`, `2n2`, `3(m+1)`). Comparisons `< <= > >= == !=` are available through
//! [`eval_constraint`].

use alloc::string::ToString;

use crate::{Error, Result};

/// Variable lookup used during evaluation.
pub type Lookup<'a> = &'a dyn Fn(&str) -> Option<i64>;

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn column(&self) -> usize {
        self.src[..self.pos].chars().count() + 1
    }

    pub(crate) fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn peek2(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().nth(1)
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error_expected(&alloc::format!("`{c}`")))
        }
    }

    pub(crate) fn error_expected(&mut self, what: &str) -> Error {
        let found = match self.peek() {
            Some(c) => alloc::format!("`{c}`"),
            None => "end of input".to_string(),
        };
        let col = self.column();
        Error::syntax(col, alloc::format!("expected {what}, found {found}"))
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Unsigned decimal literal.
    pub(crate) fn number(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error_expected("a number"));
        }
        self.pos += len;
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|_| Error::syntax(self.column(), "integer literal out of range"))
    }

    /// Optionally signed decimal literal.
    pub(crate) fn signed_number(&mut self) -> Result<i64> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let col = self.column();
        let v = self.number()?;
        if negative {
            v.checked_neg().ok_or_else(|| Error::syntax(col, "integer literal out of range"))
        } else {
            Ok(v)
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let first = rest.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        self.pos += len;
        Some(&rest[..len])
    }

    /// Parses an expression and evaluates it.
    pub(crate) fn expr(&mut self, lookup: Lookup<'_>) -> Result<i64> {
        let mut acc = self.term(lookup)?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.checked_add(self.term(lookup)?).ok_or(Error::Overflow)?;
                }
                Some('-') => {
                    self.bump();
                    acc = acc.checked_sub(self.term(lookup)?).ok_or(Error::Overflow)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, lookup: Lookup<'_>) -> Result<i64> {
        let mut acc = self.unary(lookup)?;
        loop {
            let rhs = match self.peek() {
                Some('*') => {
                    self.bump();
                    self.unary(lookup)?
                }
                Some(c) if c == '(' || c.is_ascii_alphabetic() || c == '_' => self.atom(lookup)?,
                _ => return Ok(acc),
            };
            acc = acc.checked_mul(rhs).ok_or(Error::Overflow)?;
        }
    }

    fn unary(&mut self, lookup: Lookup<'_>) -> Result<i64> {
        if self.eat('-') {
            return self.unary(lookup)?.checked_neg().ok_or(Error::Overflow);
        }
        if self.eat('+') {
            return self.unary(lookup);
        }
        self.atom(lookup)
    }

    fn atom(&mut self, lookup: Lookup<'_>) -> Result<i64> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.expr(lookup)?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.ident().expect("checked first character");
                lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
            }
            _ => Err(self.error_expected("a number, variable or `(`")),
        }
    }
}

/// Evaluates a whole string as one expression.
pub fn eval(text: &str, lookup: Lookup<'_>) -> Result<i64> {
    let mut cur = Cursor::new(text);
    let v = cur.expr(lookup)?;
    if !cur.at_end() {
        return Err(cur.error_expected("end of expression"));
    }
    Ok(v)
}

/// Evaluates `lhs OP rhs` with `OP` one of `< <= > >= == !=`.
pub fn eval_constraint(text: &str, lookup: Lookup<'_>) -> Result<bool> {
    let mut cur = Cursor::new(text);
    let lhs = cur.expr(lookup)?;
    let op = match (cur.peek(), cur.peek2()) {
        (Some('<'), Some('=')) => "<=",
        (Some('>'), Some('=')) => ">=",
        (Some('='), Some('=')) => "==",
        (Some('!'), Some('=')) => "!=",
        (Some('<'), _) => "<",
        (Some('>'), _) => ">",
        _ => return Err(cur.error_expected("a comparison operator")),
    };
    cur.eat_str(op);
    let rhs = cur.expr(lookup)?;
    if !cur.at_end() {
        return Err(cur.error_expected("end of constraint"));
    }
    Ok(match op {
        "<=" => lhs <= rhs,
        ">=" => lhs >= rhs,
        "==" => lhs == rhs,
        "!=" => lhs != rhs,
        "<" => lhs < rhs,
        _ => lhs > rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(name: &str) -> Option<i64> {
        match name {
            "m" => Some(2),
            "n" => Some(7),
            "n2" => Some(3),
            _ => None,
        }
    }

    #[test]
    fn arithmetic_and_implicit_products() {
        assert_eq!(eval("2m+1", &env).unwrap(), 5);
        assert_eq!(eval("2n2", &env).unwrap(), 6);
        assert_eq!(eval("-1", &env).unwrap(), -1);
        assert_eq!(eval("3(m+1) - 2*n", &env).unwrap(), -5);
        assert_eq!(eval(" 4 m n ", &env).unwrap(), 56);
        assert_eq!(eval("--2", &env).unwrap(), 2);
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(eval("2x", &env), Err(Error::UnknownVariable("x".into())));
        match eval("2 + ", &env) {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(eval("2 3", &env).is_err());
    }

    #[test]
    fn constraints() {
        assert!(eval_constraint("n > 2m+1", &env).unwrap());
        assert!(!eval_constraint("n <= 2m+1", &env).unwrap());
        assert!(eval_constraint("m != n", &env).unwrap());
        assert!(eval_constraint("m == 2", &env).unwrap());
        assert!(eval_constraint("m", &env).is_err());
    }
}
