//! Text syntax.
//!
//! ```text
//! ring          := ["ring"] "n=" N ["invert={" [i ("," i)*] "}"]
//! monomial      := "1" | factor ("*" factor)*       factor := var ["^" ["-"] int]
//! ideal         := "(" [monomial ("," monomial)*] ")"   "(0)" is the zero ideal
//! space         := [monomial "*"] "K" ["[" [gen ("," gen)*] "]"]   gen := var ["^-1"]
//! decomposition := space ("+" space)* | "0"
//! ```
//!
//! Variables are `x1 … xn`; when `n ≤ 4` the aliases `x, y, z, w` are accepted
//! as well. Index sets such as `{1,3}` are 1-based.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ring::{Monomial, MonomialIdeal, RingContext};
use crate::stanley::{Dir, StanleyDecomposition, StanleySpace};
use crate::MAX_EXPONENT;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        self.error_at(self.pos, message)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T> {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.error(format!("expected '{c}', found '{got}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        let boundary = rest[w.len().min(rest.len())..]
            .chars()
            .next()
            .is_none_or(|c| !c.is_ascii_alphanumeric());
        if rest.starts_with(w) && boundary {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected '{c}'")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.rest().starts_with('-');
        if neg {
            self.pos += 1;
        }
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.error("expected an integer");
        }
        let text = &self.src[start..self.pos + digits];
        self.pos += digits;
        match text.parse::<i64>() {
            Ok(v) if v.abs() <= MAX_EXPONENT => Ok(v),
            _ => self.error_at(start, format!("integer {text} out of range")),
        }
    }

    fn natural(&mut self) -> Result<usize> {
        let start = self.pos;
        let v = self.integer()?;
        usize::try_from(v).or_else(|_| self.error_at(start, "expected a nonnegative integer"))
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_lowercase() => {}
            _ => return None,
        }
        let len = chars
            .find(|(_, c)| !c.is_ascii_alphanumeric())
            .map_or(rest.len(), |(k, _)| k);
        self.pos += len;
        Some((start, &rest[..len]))
    }

    fn variable(&mut self, n: usize) -> Result<usize> {
        let Some((start, name)) = self.ident() else {
            return self.error("expected a variable");
        };
        if n <= 4 {
            if let Some(k) = ["x", "y", "z", "w"][..n].iter().position(|&a| a == name) {
                return Ok(k);
            }
        }
        if let Some(k) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if (1..=n).contains(&k) {
                return Ok(k - 1);
            }
        }
        self.error_at(
            start,
            format!("unknown variable '{name}' in a ring with {n} variables"),
        )
    }

    fn index_set(&mut self) -> Result<BTreeSet<usize>> {
        self.expect('{')?;
        let mut set = BTreeSet::new();
        if !self.eat('}') {
            loop {
                let start = self.pos;
                let i = self.natural()?;
                if i == 0 {
                    return self.error_at(start, "variable indices start at 1");
                }
                set.insert(i - 1);
                if self.eat('}') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(set)
    }

    fn ring(&mut self) -> Result<RingContext> {
        self.eat_word("ring");
        if !self.eat_word("n") {
            return self.error("expected 'n=<count>'");
        }
        self.expect('=')?;
        let start = self.pos;
        let n = self.natural()?;
        if n == 0 {
            return self.error_at(start, "a ring needs at least one variable");
        }
        let mut inverted = BTreeSet::new();
        if self.eat_word("invert") {
            self.expect('=')?;
            let start = self.pos;
            inverted = self.index_set()?;
            if inverted.iter().any(|&i| i >= n) {
                return self.error_at(start, format!("inverted index outside 1..{n}"));
            }
        }
        Ok(RingContext::new(n, inverted).expect("indices checked"))
    }

    /// Parses a monomial; stops before a `* K` that starts a space.
    fn monomial(&mut self, n: usize) -> Result<Monomial> {
        self.skip_ws();
        if self.rest().starts_with('1') {
            self.pos += 1;
            return Ok(Monomial::one(n));
        }
        let mut exps = vec![0i64; n];
        loop {
            let start = self.pos;
            let k = self.variable(n)?;
            let e = if self.eat('^') { self.integer()? } else { 1 };
            exps[k] = match exps[k].checked_add(e) {
                Some(v) if v.abs() <= MAX_EXPONENT => v,
                _ => return self.error_at(start, "exponent out of range"),
            };
            let save = self.pos;
            if !self.eat('*') {
                break;
            }
            if self.peek() == Some('K') {
                self.pos = save;
                break;
            }
        }
        Ok(Monomial::new(exps))
    }

    fn ideal(&mut self, ctx: &RingContext) -> Result<MonomialIdeal> {
        self.expect('(')?;
        let mut gens = Vec::new();
        self.skip_ws();
        if self.rest().starts_with('0') {
            self.pos += 1;
            self.expect(')')?;
            return Ok(MonomialIdeal::zero(ctx));
        }
        if !self.eat(')') {
            loop {
                let start = self.pos;
                let m = self.monomial(ctx.n())?;
                if let Err(e) = ctx.check_monomial(&m) {
                    return self.error_at(start, e.to_string());
                }
                gens.push(m);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(MonomialIdeal::new(ctx, gens).expect("generators checked"))
    }

    fn space(&mut self, ctx: &RingContext) -> Result<StanleySpace> {
        let n = ctx.n();
        let start = self.pos;
        let root = if self.peek() == Some('K') {
            Monomial::one(n)
        } else {
            let m = self.monomial(n)?;
            self.expect('*')?;
            m
        };
        if self.peek() != Some('K') {
            return self.error("expected 'K[...]'");
        }
        self.pos += 1;
        let mut dirs = vec![Dir::Fixed; n];
        if self.eat('[') && !self.eat(']') {
            loop {
                let at = self.pos;
                let k = self.variable(n)?;
                let dir = if self.eat('^') {
                    let e = self.integer()?;
                    if e != -1 {
                        return self.error_at(at, "generators of K[Z] are x or x^-1");
                    }
                    Dir::Down
                } else {
                    Dir::Up
                };
                if dirs[k] != Dir::Fixed {
                    return self.error_at(at, "variable repeated in K[Z]");
                }
                dirs[k] = dir;
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        StanleySpace::new(ctx, root, dirs).or_else(|e| self.error_at(start, e.to_string()))
    }

    fn decomposition(&mut self, ctx: &RingContext) -> Result<StanleyDecomposition> {
        self.skip_ws();
        if self.rest().trim_end() == "0" {
            self.pos = self.src.len();
            return Ok(StanleyDecomposition::new(ctx, vec![]).expect("empty"));
        }
        let mut spaces = vec![self.space(ctx)?];
        while self.eat('+') {
            spaces.push(self.space(ctx)?);
        }
        Ok(StanleyDecomposition::new(ctx, spaces).expect("spaces checked"))
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(src);
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_ring(src: &str) -> Result<RingContext> {
    whole(src, |p| p.ring())
}

pub fn parse_monomial(src: &str, ctx: &RingContext) -> Result<Monomial> {
    let m = whole(src, |p| p.monomial(ctx.n()))?;
    ctx.check_monomial(&m).map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(m)
}

pub fn parse_ideal(src: &str, ctx: &RingContext) -> Result<MonomialIdeal> {
    whole(src, |p| p.ideal(ctx))
}

pub fn parse_decomposition(src: &str, ctx: &RingContext) -> Result<StanleyDecomposition> {
    whole(src, |p| p.decomposition(ctx))
}

/// A 1-based index set like `{1,3}`, returned 0-based.
pub fn parse_index_set(src: &str) -> Result<BTreeSet<usize>> {
    whole(src, |p| p.index_set())
}

/// Moves a parse error to line `line` (for batch input).
pub fn at_line(err: Error, line: usize) -> Error {
    match err {
        Error::Parse {
            line: l,
            column,
            message,
        } => Error::Parse {
            line: line + l - 1,
            column,
            message,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings() {
        let c = parse_ring("ring n=3 invert={2,3}").unwrap();
        assert_eq!(c, RingContext::new(3, [1, 2]).unwrap());
        assert_eq!(
            parse_ring("n=3 invert={}").unwrap(),
            RingContext::polynomial(3)
        );
        assert_eq!(parse_ring("n=2").unwrap(), RingContext::polynomial(2));
        assert_eq!(parse_ring(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn ring_errors_carry_positions() {
        assert_eq!(
            parse_ring("n=3 invert={4}"),
            Err(Error::Parse {
                line: 1,
                column: 12,
                message: "inverted index outside 1..3".into()
            })
        );
        assert!(matches!(
            parse_ring("n=0"),
            Err(Error::Parse { column: 3, .. })
        ));
    }

    #[test]
    fn monomials() {
        let c = RingContext::new(3, [1]).unwrap();
        assert_eq!(
            parse_monomial("x^2*y^-1", &c).unwrap(),
            Monomial::new(vec![2, -1, 0])
        );
        assert_eq!(
            parse_monomial("x1*x3*x1", &c).unwrap(),
            Monomial::new(vec![2, 0, 1])
        );
        assert_eq!(parse_monomial("1", &c).unwrap(), Monomial::one(3));
        assert!(parse_monomial("x^-1", &c).is_err());
        assert!(matches!(
            parse_monomial("x*q", &c),
            Err(Error::Parse { column: 3, .. })
        ));
        let big = RingContext::polynomial(6);
        assert!(parse_monomial("x", &big).is_err());
        assert_eq!(parse_monomial("x6^3", &big).unwrap().exponents()[5], 3);
    }

    #[test]
    fn ideals() {
        let c = RingContext::polynomial(3);
        let i = parse_ideal("(x, y^2, x^3)", &c).unwrap();
        assert_eq!(i.to_string(), "(y^2, x)");
        assert!(parse_ideal("(0)", &c).unwrap().is_zero());
        assert!(parse_ideal("()", &c).unwrap().is_zero());
        assert!(parse_ideal("(1)", &c).unwrap().is_unit());
        assert!(matches!(
            parse_ideal("(x, y", &c),
            Err(Error::Parse { column: 6, .. })
        ));
    }

    #[test]
    fn decompositions() {
        let c = RingContext::new(3, [2]).unwrap();
        let d = parse_decomposition("x * K[y, z^-1] + K[x] + x*y*K", &c).unwrap();
        assert_eq!(d.to_string(), "x * K[y, z^-1] + 1 * K[x] + x*y * K[]");
        assert_eq!(parse_decomposition(&d.to_string(), &c).unwrap(), d);
        assert!(parse_decomposition("0", &c).unwrap().is_empty());
        // y is not inverted
        assert!(parse_decomposition("K[y^-1]", &c).is_err());
        assert!(parse_decomposition("K[x, x]", &c).is_err());
        assert!(parse_decomposition("K[x^2]", &c).is_err());
    }

    #[test]
    fn multiline_positions() {
        let err = at_line(
            parse_ideal("(x,,y)", &RingContext::polynomial(2)).unwrap_err(),
            4,
        );
        assert!(matches!(
            err,
            Error::Parse {
                line: 4,
                column: 4,
                ..
            }
        ));
    }
}
