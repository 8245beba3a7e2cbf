use std::fmt;

use super::RepExpr;

/// Parse failure at a byte offset of the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: found {}, expected ", self.offset, self.found)?;
        match self.expected.as_slice() {
            [one] => f.write_str(one),
            many => write!(f, "one of {}", many.join(", ")),
        }
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Pi,
    Sym,
    Dual,
    Det,
    Caret,
    Minus,
    Plus,
    Star,
    LParen,
    RParen,
    Int(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Pi => "`pi`".into(),
            Tok::Sym => "`sym`".into(),
            Tok::Dual => "`dual`".into(),
            Tok::Det => "`det`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

const FACTOR_START: &[&str] = &["`pi`", "`sym`", "`dual`", "`det`", "`(`"];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match b {
            b'^' => Tok::Caret,
            b'-' => Tok::Minus,
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                out.push((start, Tok::Int(src[start..pos].to_string())));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                let word = &src[start..pos];
                let tok = match word {
                    "pi" => Tok::Pi,
                    "sym" => Tok::Sym,
                    "dual" => Tok::Dual,
                    "det" => Tok::Det,
                    _ => {
                        return Err(SyntaxError {
                            offset: start,
                            expected: FACTOR_START.to_vec(),
                            found: format!("identifier `{word}`"),
                        })
                    }
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(SyntaxError {
                    offset: start,
                    expected: FACTOR_START.to_vec(),
                    found: format!("character {ch:?}"),
                });
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<RepExpr, SyntaxError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.term()?;
            lhs = RepExpr::IsobaricSum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<RepExpr, SyntaxError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            lhs = RepExpr::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn int(&mut self) -> Result<u64, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(digits) => {
                let value = digits.parse::<u64>().map_err(|_| SyntaxError {
                    offset: self.offset(),
                    expected: vec!["integer below 2^64"],
                    found: format!("integer `{digits}`"),
                })?;
                self.bump();
                Ok(value)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn signed_int(&mut self) -> Result<i64, SyntaxError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        } else if !matches!(self.peek(), Tok::Int(_)) {
            return Err(self.error(&["`-`", "integer"]));
        }
        let offset = self.offset();
        let magnitude = self.int()?;
        let value = if negative {
            0i64.checked_sub_unsigned(magnitude)
        } else {
            i64::try_from(magnitude).ok()
        };
        value.ok_or_else(|| SyntaxError {
            offset,
            expected: vec!["integer within the 64-bit signed range"],
            found: format!("integer `{magnitude}`"),
        })
    }

    fn factor(&mut self) -> Result<RepExpr, SyntaxError> {
        match self.peek() {
            Tok::Pi => {
                self.bump();
                Ok(RepExpr::Pi)
            }
            Tok::Sym => {
                self.bump();
                self.expect(Tok::Caret, "`^`")?;
                let n = self.int()?;
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.expr()?;
                self.close()?;
                Ok(RepExpr::Sym(n, Box::new(inner)))
            }
            Tok::Dual => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.expr()?;
                self.close()?;
                Ok(RepExpr::Dual(Box::new(inner)))
            }
            Tok::Det => {
                self.bump();
                if *self.peek() == Tok::Caret {
                    self.bump();
                    Ok(RepExpr::Det(self.signed_int()?))
                } else {
                    Ok(RepExpr::Det(1))
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.close()?;
                Ok(inner)
            }
            _ => Err(self.error(FACTOR_START)),
        }
    }

    fn close(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&["`)`", "`*`", "`+`"]))
        }
    }
}

/// Parses the expression grammar
///
/// ```text
/// expr   := term { "+" term } ;
/// term   := factor { "*" factor } ;
/// factor := "pi" | "sym" "^" INT "(" expr ")" | "dual" "(" expr ")"
///         | "det" [ "^" SINT ] | "(" expr ")" ;
/// ```
///
/// Both binary operators associate to the left.
pub fn parse(source: &str) -> Result<RepExpr, SyntaxError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["`*`", "`+`", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use RepExpr::*;

    fn b(e: RepExpr) -> Box<RepExpr> {
        Box::new(e)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("sym^3(pi) * sym^2(pi)").unwrap(),
            Tensor(b(Sym(3, b(Pi))), b(Sym(2, b(Pi))))
        );
        assert_eq!(parse("sym^2(sym^2(pi))").unwrap(), Sym(2, b(Sym(2, b(Pi)))));
        assert_eq!(
            parse("pi * (pi + sym^2(pi))").unwrap(),
            Tensor(b(Pi), b(IsobaricSum(b(Pi), b(Sym(2, b(Pi))))))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("pi + pi * pi").unwrap(),
            IsobaricSum(b(Pi), b(Tensor(b(Pi), b(Pi))))
        );
        assert_eq!(
            parse("pi*pi*pi").unwrap(),
            Tensor(b(Tensor(b(Pi), b(Pi))), b(Pi))
        );
        assert_eq!(
            parse("pi+pi+pi").unwrap(),
            IsobaricSum(b(IsobaricSum(b(Pi), b(Pi))), b(Pi))
        );
    }

    #[test]
    fn det_forms() {
        assert_eq!(parse("det").unwrap(), Det(1));
        assert_eq!(parse("det^0").unwrap(), Det(0));
        assert_eq!(parse("det ^ - 3").unwrap(), Det(-3));
        assert_eq!(parse("det^-9223372036854775808").unwrap(), Det(i64::MIN));
        assert!(parse("det^9223372036854775808").is_err());
        assert_eq!(parse("dual ( det^2 )").unwrap(), Dual(b(Det(2))));
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse("  sym ^ 2 (\tpi\n) ").unwrap(), Sym(2, b(Pi)));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("").unwrap_err();
        assert_eq!(e.offset, 0);
        assert_eq!(e.found, "end of input");
        assert_eq!(e.expected, FACTOR_START.to_vec());

        let e = parse("sym^x(pi)").unwrap_err();
        assert_eq!(e.offset, 4);

        let e = parse("pi * tau").unwrap_err();
        assert_eq!(e.offset, 5);
        assert_eq!(e.found, "identifier `tau`");

        let e = parse("sym^2(pi").unwrap_err();
        assert_eq!(e.offset, 8);
        assert!(e.expected.contains(&"`)`"));

        let e = parse("pi pi").unwrap_err();
        assert_eq!(e.offset, 3);
        assert_eq!(e.expected, vec!["`*`", "`+`", "end of input"]);

        let e = parse("sym^-1(pi)").unwrap_err();
        assert_eq!(e.offset, 4);

        let e = parse("pi / pi").unwrap_err();
        assert_eq!(e.offset, 3);
        assert_eq!(e.found, "character '/'");

        assert!(parse("sym^99999999999999999999(pi)").is_err());
        assert!(parse("()").is_err());
    }
}
