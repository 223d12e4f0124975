//! Polynomial expressions and two-equation system specifications.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := signed ( '*' signed | '/' NUMBER | <juxtaposed power> )*
//! signed  := ('+' | '-') signed | power
//! power   := atom ('^' INTEGER)?
//! atom    := NUMBER | IDENT | '(' sum ')'
//! ```
//!
//! Juxtaposition (`3x^2y`, `2(x+y)`) multiplies when the next token is an
//! identifier or an opening parenthesis. Division is restricted to numeric
//! divisors, so `1/4*u^2`, `u^2/4` and `1/2x` all parse. An identifier word
//! like `xy` is split greedily into the declared names.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjugate::DiffSystem;
use crate::poly::{BiPoly, Rational, VarPair};

/// Largest exponent accepted by the parser; guards against runaway expansion.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("exponent at position {pos} is not a nonnegative integer literal")]
    NonIntegerExponent { pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("both right-hand sides are zero")]
    BothRhsZero,
    #[error("invalid variables: {0}")]
    InvalidVars(String),
    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParam { name: String, msg: String },
    #[error("right-hand side {index}: {source}")]
    Rhs {
        index: usize,
        #[source]
        source: Box<ParseError>,
    },
    #[error("invalid system text: {0}")]
    Format(String),
}

impl ParseError {
    /// Character offset of the error inside the expression, when known.
    pub fn position(&self) -> Option<usize> {
        match self {
            Self::Syntax { pos, .. }
            | Self::UnknownVariable { pos, .. }
            | Self::NonIntegerExponent { pos }
            | Self::NegativeExponent { pos } => Some(*pos),
            Self::Rhs { source, .. } => source.position(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational, bool), // value, written as a plain integer
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q, _) => write!(f, "number {q}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{00b7}' | '\u{22c5}' | '\u{00d7}' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push((parse_decimal(&lit, start)?, start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Integer or finite decimal literal, converted exactly.
fn parse_decimal(lit: &str, pos: usize) -> Result<Tok, ParseError> {
    let (int_part, frac_part) = match lit.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (lit, None),
    };
    let bad = || syntax(pos, format!("malformed number `{lit}`"));
    match frac_part {
        None => {
            let n: BigInt = int_part.parse().map_err(|_| bad())?;
            Ok(Tok::Num(Rational::from_integer(n), true))
        }
        Some(frac) => {
            if frac.contains('.') || (int_part.is_empty() && frac.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{int_part}{frac}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            Ok(Tok::Num(Rational::new(n, d), false))
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    vars: &'a VarPair,
    params: &'a BTreeMap<String, Rational>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.signed()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.signed()?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    match self.bump().0 {
                        Tok::Num(q, _) if q.is_zero() => return Err(syntax(pos, "division by zero")),
                        Tok::Num(q, _) => acc = acc.scale(&q.recip()),
                        other => {
                            return Err(syntax(
                                pos,
                                format!("division is only allowed by a number, found {other}"),
                            ))
                        }
                    }
                }
                Tok::Ident(_) | Tok::LParen => {
                    acc = &acc * &self.power()?;
                }
                Tok::Num(..) => {
                    return Err(syntax(self.pos(), "a number cannot follow a factor without `*`"))
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed(&mut self) -> Result<BiPoly, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.signed()?)
            }
            Tok::Plus => {
                self.bump();
                self.signed()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = match self.bump().0 {
            Tok::Num(q, true) => q
                .to_integer()
                    .to_u32()
                    .filter(|e| *e <= MAX_EXPONENT)
                .ok_or_else(|| syntax(pos, format!("exponent exceeds {MAX_EXPONENT}")))?,
            Tok::Minus => return Err(ParseError::NegativeExponent { pos }),
            Tok::Num(_, false) | Tok::Ident(_) | Tok::LParen => {
                return Err(ParseError::NonIntegerExponent { pos })
            }
            other => return Err(syntax(pos, format!("expected exponent, found {other}"))),
        };
        if *self.peek() == Tok::Caret {
            return Err(syntax(self.pos(), "chained exponents need parentheses"));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<BiPoly, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(q, _) => Ok(BiPoly::constant(self.vars, q)),
            Tok::Ident(word) => self.identifier_word(&word, pos),
            Tok::LParen => {
                let inner = self.sum()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (other, p) => Err(syntax(p, format!("expected `)`, found {other}"))),
                }
            }
            other => Err(syntax(pos, format!("expected a term, found {other}"))),
        }
    }

    /// Splits a word such as `uv` or `xy2` into known names, longest first.
    fn identifier_word(&self, word: &str, pos: usize) -> Result<BiPoly, ParseError> {
        let mut names: Vec<(&str, BiPoly)> = vec![
            (self.vars.first(), BiPoly::var(self.vars, 0)),
            (self.vars.second(), BiPoly::var(self.vars, 1)),
        ];
        for (name, value) in self.params {
            names.push((name.as_str(), BiPoly::constant(self.vars, value.clone())));
        }
        names.sort_by_key(|(n, _)| std::cmp::Reverse(n.len()));

        let mut acc = BiPoly::one(self.vars);
        let mut rest = word;
        let mut offset = pos;
        while !rest.is_empty() {
            let Some((name, value)) = names.iter().find(|(n, _)| rest.starts_with(n)) else {
                return Err(ParseError::UnknownVariable {
                    pos: offset,
                    name: rest.to_string(),
                });
            };
            acc = &acc * value;
            rest = &rest[name.len()..];
            offset += name.len();
        }
        Ok(acc)
    }
}

/// Parses `text` as a polynomial in `vars`.
pub fn parse_polynomial(text: &str, vars: &VarPair) -> Result<BiPoly, ParseError> {
    parse_polynomial_with(text, vars, &BTreeMap::new())
}

/// Parses `text` with additional named rational constants.
pub fn parse_polynomial_with(
    text: &str,
    vars: &VarPair,
    params: &BTreeMap<String, Rational>,
) -> Result<BiPoly, ParseError> {
    let toks = tokenize(text)?;
    if toks.len() == 1 {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        idx: 0,
        vars,
        params,
    };
    let result = p.sum()?;
    match p.peek() {
        Tok::End => Ok(result),
        other => Err(syntax(p.pos(), format!("unexpected {other}"))),
    }
}

/// Parses a rational literal such as `3`, `-1/4` or `0.25`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let t = text.trim().replace('\u{2212}', "-");
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b.trim()),
        None => (false, t.as_str()),
    };
    let bad = || syntax(0, format!("`{text}` is not a rational number"));
    let value = match body.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() || n.is_negative() || d.is_negative() {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => match parse_decimal(body, 0).map_err(|_| bad())? {
            Tok::Num(q, _) => q,
            _ => return Err(bad()),
        },
    };
    Ok(if neg { -value } else { value })
}

/// A parameter binding: either a JSON integer or a rational string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Text(String),
}

impl ParamValue {
    pub fn to_rational(&self) -> Result<Rational, ParseError> {
        match self {
            ParamValue::Int(n) => Ok(Rational::from_integer(BigInt::from(*n))),
            ParamValue::Text(s) => parse_rational(s),
        }
    }
}

/// Textual description of a system `d(first)/dt = rhs[0], d(second)/dt = rhs[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub vars: [String; 2],
    pub rhs: [String; 2],
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamValue>,
}

impl SystemSpec {
    pub fn new(vars: [&str; 2], rhs: [&str; 2]) -> Self {
        Self {
            vars: vars.map(str::to_string),
            rhs: rhs.map(str::to_string),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, name: &str, value: &str) -> Self {
        self.params
            .insert(name.to_string(), ParamValue::Text(value.to_string()));
        self
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Format(e.to_string()))
    }

    /// Two-line form, one equation per line:
    ///
    /// ```text
    /// dx/dt = -y - x*(x^2 + y^2 - 1)
    /// dy/dt = x - y*(x^2 + y^2 - 1)
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let mut eqs: Vec<(String, String)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| ParseError::Format(format!("missing `=` in `{line}`")))?;
            let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
            let var = lhs
                .strip_prefix('d')
                .and_then(|s| s.strip_suffix("/dt"))
                .filter(|v| crate::poly::is_identifier(v))
                .ok_or_else(|| {
                    ParseError::Format(format!("left side `{lhs}` is not of the form d<var>/dt"))
                })?;
            eqs.push((var.to_string(), rhs.trim().to_string()));
        }
        let [(v0, r0), (v1, r1)]: [(String, String); 2] = eqs
            .try_into()
            .map_err(|e: Vec<_>| ParseError::Format(format!("expected 2 equations, found {}", e.len())))?;
        Ok(Self {
            vars: [v0, v1],
            rhs: [r0, r1],
            params: BTreeMap::new(),
        })
    }

    /// JSON when the text starts with `{`, the two-line form otherwise.
    pub fn from_any(text: &str) -> Result<Self, ParseError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn var_pair(&self) -> Result<VarPair, ParseError> {
        VarPair::new(&self.vars[0], &self.vars[1]).map_err(|e| ParseError::InvalidVars(e.to_string()))
    }

    fn param_values(&self, vars: &VarPair) -> Result<BTreeMap<String, Rational>, ParseError> {
        let mut out = BTreeMap::new();
        for (name, value) in &self.params {
            if !crate::poly::is_identifier(name) || name == vars.first() || name == vars.second() {
                return Err(ParseError::InvalidParam {
                    name: name.clone(),
                    msg: "must be an identifier distinct from the variables".into(),
                });
            }
            let q = value.to_rational().map_err(|e| ParseError::InvalidParam {
                name: name.clone(),
                msg: e.to_string(),
            })?;
            out.insert(name.clone(), q);
        }
        Ok(out)
    }
}

/// Parses both right-hand sides and builds the system.
pub fn parse_system(spec: &SystemSpec) -> Result<DiffSystem, ParseError> {
    let vars = spec.var_pair()?;
    let params = spec.param_values(&vars)?;
    let mut rhs = Vec::with_capacity(2);
    for (index, text) in spec.rhs.iter().enumerate() {
        let p = parse_polynomial_with(text, &vars, &params).map_err(|e| ParseError::Rhs {
            index,
            source: Box::new(e),
        })?;
        rhs.push(p);
    }
    let q = rhs.pop().unwrap();
    let p = rhs.pop().unwrap();
    DiffSystem::new(p, q).map_err(|_| ParseError::BothRhsZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn xy() -> VarPair {
        VarPair::xy()
    }

    fn parse(s: &str) -> BiPoly {
        parse_polynomial(s, &xy()).unwrap()
    }

    fn poly(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(&xy(), terms.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    #[test]
    fn basic_forms() {
        assert_eq!(parse("x^2 - y^2"), poly(&[(2, 0, 1), (0, 2, -1)]));
        assert_eq!(
            parse("-y - x*(x^2 + y^2 - 1)"),
            poly(&[(3, 0, -1), (1, 2, -1), (1, 0, 1), (0, 1, -1)])
        );
        assert_eq!(parse("-x^2"), poly(&[(2, 0, -1)]));
        assert_eq!(parse("(-x)^2"), poly(&[(2, 0, 1)]));
        assert_eq!(parse("2*-x"), poly(&[(1, 0, -2)]));
    }

    #[test]
    fn juxtaposition_and_rationals() {
        assert_eq!(parse("3x^2y"), poly(&[(2, 1, 3)]));
        assert_eq!(parse("2(x+y)"), poly(&[(1, 0, 2), (0, 1, 2)]));
        assert_eq!(parse("xy"), poly(&[(1, 1, 1)]));
        assert_eq!(parse("(x+1)(x-1)"), poly(&[(2, 0, 1), (0, 0, -1)]));
        let quarter = BiPoly::from_terms(&xy(), [(2, 0, rat(1, 4))]);
        assert_eq!(parse("1/4*x^2"), quarter);
        assert_eq!(parse("1/4x^2"), quarter);
        assert_eq!(parse("x^2/4"), quarter);
        assert_eq!(parse("0.25 x^2"), quarter);
        assert_eq!(parse("\u{2212}x\u{00b7}y"), poly(&[(1, 1, -1)]));
    }

    #[test]
    fn error_kinds() {
        let vars = xy();
        assert!(matches!(
            parse_polynomial("x^-1", &vars),
            Err(ParseError::NegativeExponent { pos: 2 })
        ));
        assert!(matches!(
            parse_polynomial("x^y", &vars),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial("x^(1/2)", &vars),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        // the exponent is the literal alone; the division applies to the power
        assert_eq!(parse("x^1/2"), BiPoly::from_terms(&vars, [(1, 0, rat(1, 2))]));
        assert!(matches!(
            parse_polynomial("x^0.5", &vars),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial("x + z", &vars),
            Err(ParseError::UnknownVariable { pos: 4, .. })
        ));
        for bad in ["", "x +", "x ^ 2 ^ 3", "(x", "x)", "x 2", "x/y", "1/0", "x # y"] {
            let err = parse_polynomial(bad, &vars).unwrap_err();
            assert!(err.position().is_some(), "{bad}: {err}");
        }
    }

    #[test]
    fn parameters() {
        let mut params = BTreeMap::new();
        params.insert("a0".to_string(), int(3));
        params.insert("b".to_string(), rat(1, 2));
        let p = parse_polynomial_with("a0*x + b y", &xy(), &params).unwrap();
        assert_eq!(p, BiPoly::from_terms(&xy(), [(1, 0, int(3)), (0, 1, rat(1, 2))]));
    }

    #[test]
    fn systems() {
        let sys = parse_system(&SystemSpec::new(["x", "y"], ["x", "-y"])).unwrap();
        assert_eq!(sys.degree(), 1);
        let sys = parse_system(&SystemSpec::new(["x", "y"], ["1", "0"])).unwrap();
        assert_eq!(sys.degree(), 0);
        assert!(matches!(
            parse_system(&SystemSpec::new(["x", "y"], ["0", "0"])),
            Err(ParseError::BothRhsZero)
        ));
        assert!(matches!(
            parse_system(&SystemSpec::new(["x", "x"], ["1", "0"])),
            Err(ParseError::InvalidVars(_))
        ));
        let with_params =
            SystemSpec::new(["x", "y"], ["a0", "b0"]).with_param("a0", "1").with_param("b0", "-2/3");
        let sys = parse_system(&with_params).unwrap();
        assert_eq!(sys.rhs()[1].constant_term(), rat(-2, 3));
    }

    #[test]
    fn system_formats() {
        let json = r#"{"vars": ["u", "v"], "rhs": ["v", "-u"]}"#;
        let spec = SystemSpec::from_any(json).unwrap();
        assert_eq!(spec, SystemSpec::new(["u", "v"], ["v", "-u"]));
        let text = "# rotation\ndu/dt = v\n dv / dt = -u\n";
        assert_eq!(SystemSpec::from_any(text).unwrap(), spec);
        assert!(SystemSpec::from_text("dx/dt = x").is_err());
        assert!(SystemSpec::from_text("x' = x\ny' = y").is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-1/4").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("\u{2212}3").unwrap(), int(-3));
        assert_eq!(parse_rational("2.5").unwrap(), rat(5, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
