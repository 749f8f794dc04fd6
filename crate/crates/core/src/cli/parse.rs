use thiserror::Error;

use crate::funrep::FunctorExpr;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at column {}: {msg}", .pos + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    /// Consumes `tok` after optional whitespace.
    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.fail(format!("expected `{tok}`"))
        }
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.fail("expected an integer");
        }
        let text = &self.rest()[..digits];
        let n = text.parse().or_else(|_| self.fail(format!("integer {text} is out of range")))?;
        self.pos += digits;
        Ok(n)
    }

    fn sum(&mut self) -> Result<FunctorExpr, ParseError> {
        let mut acc = self.tens()?;
        while self.eat("(+)") {
            acc = acc.sum(self.tens()?);
        }
        Ok(acc)
    }

    fn tens(&mut self) -> Result<FunctorExpr, ParseError> {
        let mut acc = self.comp()?;
        while self.eat("(x)") {
            acc = acc.tensor(self.comp()?);
        }
        Ok(acc)
    }

    fn comp(&mut self) -> Result<FunctorExpr, ParseError> {
        let outer = self.postfix()?;
        self.skip_ws();
        let is_o = self.rest().starts_with('o') && !self.rest()[1..].starts_with(|c: char| c.is_ascii_alphanumeric());
        if !is_o {
            return Ok(outer);
        }
        self.pos += 1;
        let inner = self.postfix()?;
        self.skip_ws();
        if self.rest().starts_with('o') {
            return self.fail("composition is not associative in the grammar; parenthesize");
        }
        Ok(outer.after(inner))
    }

    fn postfix(&mut self) -> Result<FunctorExpr, ParseError> {
        let mut e = self.atom()?;
        while self.eat("^v") {
            e = e.dual();
        }
        Ok(e)
    }

    fn power(&mut self, make: fn(usize) -> FunctorExpr) -> Result<FunctorExpr, ParseError> {
        self.expect("^")?;
        Ok(make(self.int()?))
    }

    fn atom(&mut self) -> Result<FunctorExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let r = self.rest();
        if r.is_empty() {
            return self.fail("unexpected end of input");
        }
        // `(+)` and `(x)` are operators, never a group
        if r.starts_with("(+)") || r.starts_with("(x)") {
            return self.fail("expected a functor before the operator");
        }
        if self.eat("(") {
            let e = self.sum()?;
            self.expect(")")?;
            return Ok(e);
        }
        let word_len = r.bytes().take_while(u8::is_ascii_alphabetic).count();
        let word = &r[..word_len];
        let e = match word {
            "Id" => {
                self.pos += 2;
                FunctorExpr::Id
            }
            "Pbar" => {
                self.pos += 4;
                FunctorExpr::Pbar
            }
            "I" => {
                self.pos += 1;
                FunctorExpr::InjCogen
            }
            "S" | "L" | "G" | "T" => {
                self.pos += 1;
                let make: fn(usize) -> FunctorExpr = match word {
                    "S" => FunctorExpr::Sym,
                    "L" => FunctorExpr::Ext,
                    "G" => FunctorExpr::Div,
                    _ => FunctorExpr::TensorPower,
                };
                self.power(make)?
            }
            "K" => {
                self.pos += 1;
                if self.eat("[q2]") {
                    FunctorExpr::LinSym2
                } else if self.eat("[alt2]") {
                    FunctorExpr::LinAlt2
                } else {
                    return self.fail("expected `[q2]` or `[alt2]` after `K`");
                }
            }
            "Const" | "Proj" | "Delta" => {
                self.pos += word_len;
                self.expect("(")?;
                let e = match word {
                    "Const" => FunctorExpr::Const(self.int()?),
                    "Proj" => FunctorExpr::Proj(self.int()?),
                    _ => self.sum()?.delta(),
                };
                self.expect(")")?;
                e
            }
            _ => {
                self.pos = start;
                return self.fail(if word.is_empty() { format!("unexpected `{}`", r.chars().next().unwrap()) } else { format!("unknown functor `{word}`") });
            }
        };
        Ok(e)
    }
}

/// Parses the surface syntax printed by `FunctorExpr`'s `Display`.
/// Precedence: `o` binds tighter than `(x)`, which binds tighter than `(+)`; both
/// binary operators associate to the left. Only the syntax is checked here;
/// variance and evaluability are checked by `FunctorExpr::kind`.
pub fn parse_expr(text: &str) -> Result<FunctorExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return p.fail(format!("unexpected trailing input `{}`", p.rest()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use FunctorExpr::*;

    #[test]
    fn examples() {
        assert_eq!(parse_expr("S^2").unwrap(), Sym(2));
        assert_eq!(parse_expr("K[q2]^v (x) Id").unwrap(), LinSym2.dual().tensor(Id));
        assert_eq!(parse_expr("Delta(G^3 (+) L^2)").unwrap(), Div(3).sum(Ext(2)).delta());
        assert_eq!(parse_expr("S^2 o L^2 (x) Id (+) Const(3)").unwrap(), Sym(2).after(Ext(2)).tensor(Id).sum(Const(3)));
        assert_eq!(parse_expr("Id (x) (Id (+) Id)").unwrap(), Id.tensor(Id.sum(Id)));
        assert_eq!(parse_expr("(S^2 (+) Id)^v^v").unwrap(), Sym(2).sum(Id).dual().dual());
        assert_eq!(parse_expr("  Pbar(x)Proj(1) ").unwrap(), Pbar.tensor(Proj(1)));
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| parse_expr(s).unwrap_err().pos;
        assert_eq!(pos("S^"), 2);
        assert_eq!(pos("Id (x)"), 6);
        assert_eq!(pos("Foo"), 0);
        assert_eq!(pos("Id Id"), 3);
        assert_eq!(pos("K[q3]"), 1);
        assert_eq!(pos("Id o Id o Id"), 8);
        assert_eq!(pos("Const(99999999999999999999999)"), 6);
        assert_eq!(parse_expr("(Id").unwrap_err().to_string(), "syntax error at column 4: expected `)`");
    }

    fn expr() -> impl Strategy<Value = FunctorExpr> {
        let leaf = prop_oneof![
            Just(Id),
            Just(LinSym2),
            Just(LinAlt2),
            Just(Pbar),
            Just(InjCogen),
            (0usize..5).prop_map(Const),
            (0usize..5).prop_map(Sym),
            (0usize..5).prop_map(Ext),
            (0usize..5).prop_map(Div),
            (0usize..5).prop_map(TensorPower),
            (0usize..5).prop_map(Proj),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(FunctorExpr::dual),
                inner.clone().prop_map(FunctorExpr::delta),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.tensor(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sum(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.after(b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse_expr(&text).unwrap(), e);
        }

        #[test]
        fn parse_never_panics(s in "[ -~]{0,24}") {
            if let Ok(e) = parse_expr(&s) {
                prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
            }
        }
    }
}
