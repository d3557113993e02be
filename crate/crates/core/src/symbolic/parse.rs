//! Text and JSON interchange for theta expressions.
//!
//! The text grammar accepted by [`parse_expr`]:
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := atom ['^' exponent]
//! atom     := integer | variable | func '(' expr ')' | '(' expr ')'
//! func     := 'theta' | 'phi' | 'theta0'
//! exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! variable := 'q' | 't1' | 't2' | 'hbar' | 'u[' i ',' j ']'
//!           | 'z[' i ']' | 'x[' i ',' k ']' | identifier
//! ```
//!
//! Function arguments must reduce to a single monomial with coefficient
//! `1`; the right-hand side of `/` and the base of a negative or
//! fractional power must reduce to a single term. Parsed function factors
//! are kept verbatim — no rewriting laws are applied — so that
//! [`ThetaExpr::normal_form`] sees exactly what was written; this is what
//! lets a formal ratio like `theta(q)/theta(q^2)` cancel correctly.
//!
//! The JSON form is a faithful structural encoding: rationals are decimal
//! strings (`"-3/2"`), variables their text names, and each term carries
//! its coefficient, exponent list and factor list.

use num::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_qrat, parse_qrat, qint, QRat};
use crate::symbolic::expr::{FactorKind, Term, ThetaExpr, ThetaFactor};
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

// ====================================================================
// Lexer
// ====================================================================

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(QRat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{}", format_qrat(n)),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Comma => write!(f, ","),
        }
    }
}

fn lex(input: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: i64 = digits
                    .parse()
                    .map_err(|_| Error::validation(format!("integer literal too large: {digits}")))?;
                toks.push(Tok::Int(qint(n)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(name));
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '[' => {
                chars.next();
                toks.push(Tok::LBracket);
            }
            ']' => {
                chars.next();
                toks.push(Tok::RBracket);
            }
            ',' => {
                chars.next();
                toks.push(Tok::Comma);
            }
            other => {
                return Err(Error::validation(format!(
                    "unexpected character {other:?} in expression"
                )))
            }
        }
    }
    Ok(toks)
}

// ====================================================================
// Parser
// ====================================================================

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<()> {
        match self.next() {
            Some(ref t) if t == want => Ok(()),
            Some(t) => Err(Error::validation(format!("expected {want:?}, found {t}"))),
            None => Err(Error::validation(format!(
                "expected {want:?}, found end of input"
            ))),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_expr(&mut self) -> Result<ThetaExpr> {
        let mut negate = self.eat(&Tok::Minus);
        let mut acc = ThetaExpr::zero();
        loop {
            let term = self.parse_term()?;
            acc = if negate { acc.sub(&term) } else { acc.add(&term) };
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<ThetaExpr> {
        let mut acc = self.parse_factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.parse_factor()?);
            } else if self.eat(&Tok::Slash) {
                let rhs = self.parse_factor()?;
                let d = rhs.as_single_term().ok_or_else(|| {
                    Error::validation(
                        "division is supported only by single-term expressions".to_string(),
                    )
                })?;
                acc = acc.div_term(d)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<ThetaExpr> {
        let base = self.parse_atom()?;
        if self.eat(&Tok::Caret) {
            let p = self.parse_exponent()?;
            apply_power(&base, &p)
        } else {
            Ok(base)
        }
    }

    fn parse_exponent(&mut self) -> Result<QRat> {
        if self.eat(&Tok::LParen) {
            let neg = self.eat(&Tok::Minus);
            let num = self.parse_int()?;
            let val = if self.eat(&Tok::Slash) {
                let den = self.parse_int()?;
                if den.is_zero() {
                    return Err(Error::validation("zero denominator in exponent".to_string()));
                }
                num / den
            } else {
                num
            };
            self.expect(&Tok::RParen)?;
            Ok(if neg { -val } else { val })
        } else {
            let neg = self.eat(&Tok::Minus);
            let num = self.parse_int()?;
            Ok(if neg { -num } else { num })
        }
    }

    fn parse_int(&mut self) -> Result<QRat> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            Some(t) => Err(Error::validation(format!("expected integer, found {t}"))),
            None => Err(Error::validation("expected integer, found end of input".to_string())),
        }
    }

    fn parse_atom(&mut self) -> Result<ThetaExpr> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(ThetaExpr::from_monomial(Monomial::scalar(n))),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.parse_named(&name),
            Some(t) => Err(Error::validation(format!("unexpected token {t}"))),
            None => Err(Error::validation("unexpected end of input".to_string())),
        }
    }

    fn parse_named(&mut self, name: &str) -> Result<ThetaExpr> {
        let kind = match name {
            "theta" => Some(FactorKind::Theta),
            "phi" => Some(FactorKind::Pochhammer),
            "theta0" => Some(FactorKind::Split),
            _ => None,
        };
        if let Some(kind) = kind {
            self.expect(&Tok::LParen)?;
            let inner = self.parse_expr()?;
            self.expect(&Tok::RParen)?;
            let m = inner.as_monomial().ok_or_else(|| {
                Error::validation(format!("{}(...) requires a monomial argument", kind.name()))
            })?;
            if !m.coeff().is_one() {
                return Err(Error::validation(format!(
                    "{}(...) requires an argument with coefficient 1, got coefficient {}",
                    kind.name(),
                    format_qrat(m.coeff())
                )));
            }
            let factor = ThetaFactor::new(kind, m.clone(), 1)?;
            return Ok(ThetaExpr::from_terms(vec![Term::new(
                Monomial::one(),
                vec![factor],
            )]));
        }
        // Variable; indexed families read their brackets here.
        let var = match name {
            "q" => Variable::Q,
            "t1" => Variable::T1,
            "t2" => Variable::T2,
            "u" | "z" | "x" if self.peek() == Some(&Tok::LBracket) => {
                self.expect(&Tok::LBracket)?;
                let i = self.parse_index()?;
                let var = if name == "z" {
                    Variable::z(i)
                } else {
                    self.expect(&Tok::Comma)?;
                    let j = self.parse_index()?;
                    if name == "u" {
                        Variable::u(i, j)
                    } else {
                        Variable::x(i, j)
                    }
                };
                self.expect(&Tok::RBracket)?;
                var
            }
            other => Variable::aux(other),
        };
        Ok(ThetaExpr::from_monomial(Monomial::var(var)))
    }

    fn parse_index(&mut self) -> Result<u32> {
        let n = self.parse_int()?;
        let i = crate::rational::to_i64(&n)
            .filter(|&i| i >= 1 && i <= u32::MAX as i64)
            .ok_or_else(|| Error::validation(format!("index {} out of range", format_qrat(&n))))?;
        Ok(i as u32)
    }
}

/// Raise an expression to a rational power. Single terms support any
/// integer power; fractional powers require a bare monomial with
/// coefficient `1`; multi-term sums support nonnegative integers only.
fn apply_power(base: &ThetaExpr, p: &QRat) -> Result<ThetaExpr> {
    if p.is_integer() {
        let n = crate::rational::to_i64(p)
            .ok_or_else(|| Error::validation("exponent out of range".to_string()))?;
        if let Some(t) = base.as_single_term() {
            let prefactor = t.prefactor.powi(n)?;
            let factors = t
                .factors
                .iter()
                .map(|f| ThetaFactor { kind: f.kind, arg: f.arg.clone(), power: f.power * n })
                .collect();
            return Ok(ThetaExpr::from_terms(vec![Term::new(prefactor, factors)]));
        }
        if n < 0 {
            return Err(Error::validation(
                "negative powers of multi-term sums are not supported".to_string(),
            ));
        }
        if n > 64 {
            return Err(Error::validation(format!("exponent {n} too large for a sum")));
        }
        let mut acc = ThetaExpr::one();
        for _ in 0..n {
            acc = acc.mul(base);
        }
        return Ok(acc);
    }
    let m = base.as_monomial().ok_or_else(|| {
        Error::validation("fractional powers require a monomial base".to_string())
    })?;
    Ok(ThetaExpr::from_monomial(m.pow(p)?))
}

/// Parse an expression in the grammar above. The result is structurally
/// faithful to the input: no rewriting laws are applied.
pub fn parse_expr(input: &str) -> Result<ThetaExpr> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(Error::validation("empty expression".to_string()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.parse_expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::validation(format!(
            "trailing input after expression: {}",
            p.toks[p.pos..]
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join("")
        )));
    }
    Ok(e)
}

/// Parse a single variable name (`q`, `t1`, `t2`, `hbar`, `u[i,j]`,
/// `z[i]`, `x[i,k]`, or an identifier).
pub fn parse_variable(input: &str) -> Result<Variable> {
    let e = parse_expr(input)?;
    let m = e
        .as_monomial()
        .ok_or_else(|| Error::validation(format!("not a variable: {input}")))?;
    if !m.coeff().is_one() {
        return Err(Error::validation(format!("not a variable: {input}")));
    }
    match m.exponents().collect::<Vec<_>>().as_slice() {
        [(v, e)] if e.is_one() => Ok((*v).clone()),
        _ => Err(Error::validation(format!("not a variable: {input}"))),
    }
}

// ====================================================================
// JSON
// ====================================================================

fn monomial_exps_to_json(m: &Monomial) -> Value {
    Value::Array(
        m.exponents()
            .map(|(v, e)| json!([v.to_string(), format_qrat(e)]))
            .collect(),
    )
}

/// Structural JSON encoding of an expression.
pub fn expr_to_json(e: &ThetaExpr) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .iter()
        .map(|t| {
            json!({
                "coeff": format_qrat(t.prefactor.coeff()),
                "exponents": monomial_exps_to_json(&t.prefactor),
                "factors": t.factors.iter().map(|f| json!({
                    "kind": f.kind.name(),
                    "argument": monomial_exps_to_json(&f.arg),
                    "power": f.power,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "terms": terms })
}

fn json_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::validation(format!("JSON: {what} must be a string")))
}

fn monomial_from_json(coeff: &QRat, exps: &Value) -> Result<Monomial> {
    let arr = exps
        .as_array()
        .ok_or_else(|| Error::validation("JSON: exponent list must be an array".to_string()))?;
    let mut m = Monomial::scalar(coeff.clone());
    for pair in arr {
        let pair = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::validation("JSON: exponent entry must be a pair".to_string()))?;
        let var = parse_variable(json_str(&pair[0], "variable name")?)?;
        let exp = parse_qrat(json_str(&pair[1], "exponent")?)?;
        m.mul_var_pow(var, exp);
    }
    Ok(m)
}

/// Decode the JSON encoding produced by [`expr_to_json`].
pub fn expr_from_json(v: &Value) -> Result<ThetaExpr> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::validation("JSON: expected object with a 'terms' array".to_string()))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let coeff = parse_qrat(json_str(
            t.get("coeff")
                .ok_or_else(|| Error::validation("JSON: term missing 'coeff'".to_string()))?,
            "coeff",
        )?)?;
        let prefactor = monomial_from_json(
            &coeff,
            t.get("exponents")
                .ok_or_else(|| Error::validation("JSON: term missing 'exponents'".to_string()))?,
        )?;
        let mut factors = Vec::new();
        for f in t
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::validation("JSON: term missing 'factors' array".to_string()))?
        {
            let kind = match json_str(
                f.get("kind")
                    .ok_or_else(|| Error::validation("JSON: factor missing 'kind'".to_string()))?,
                "kind",
            )? {
                "theta" => FactorKind::Theta,
                "phi" => FactorKind::Pochhammer,
                "theta0" => FactorKind::Split,
                other => {
                    return Err(Error::validation(format!("JSON: unknown factor kind {other:?}")))
                }
            };
            let arg = monomial_from_json(
                &QRat::one(),
                f.get("argument")
                    .ok_or_else(|| Error::validation("JSON: factor missing 'argument'".to_string()))?,
            )?;
            let power = f
                .get("power")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::validation("JSON: factor missing integer 'power'".to_string()))?;
            factors.push(ThetaFactor::new(kind, arg, power)?);
        }
        out.push(Term::new(prefactor, factors));
    }
    Ok(ThetaExpr::from_terms(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qrat;

    #[test]
    fn parses_variables_and_powers() {
        let e = parse_expr("3/2*q^(1/2)*t1*x[1,2]^(-2)").unwrap();
        let m = e.as_monomial().unwrap().clone();
        assert_eq!(m.coeff(), &qrat(3, 2));
        assert_eq!(m.exponent(&Variable::Q), qrat(1, 2));
        assert_eq!(m.exponent(&Variable::T1), qrat(1, 1));
        assert_eq!(m.exponent(&Variable::x(1, 2)), qrat(-2, 1));
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let src = "theta(t1*t2*u[1,1]/x[1,2])*theta(t2)^2/(theta(z[1])*theta(z[1]^2*t1*t2))";
        let e = parse_expr(src).unwrap();
        let printed = e.to_string();
        let reparsed = parse_expr(&printed).unwrap();
        assert_eq!(e, reparsed);
    }

    #[test]
    fn keeps_factors_verbatim() {
        // theta(q)/theta(q^2) must parse as a formal ratio (one term, two
        // factors) rather than being eagerly canonicalized to 0/0.
        let e = parse_expr("theta(q)/theta(q^2)").unwrap();
        let t = e.as_single_term().unwrap();
        assert_eq!(t.factors.len(), 2);
        let nf = e.normal_form().unwrap();
        let m = nf.as_monomial().unwrap();
        assert_eq!(m.coeff(), &qint(-1));
        assert_eq!(m.exponent(&Variable::Q), qrat(3, 2));
    }

    #[test]
    fn sums_differences_and_unary_minus() {
        let e = parse_expr("-a + 2*b - b").unwrap();
        let f = parse_expr("b - a").unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn division_by_sums_is_rejected() {
        assert!(parse_expr("1/(a+b)").is_err());
        assert!(parse_expr("(a+b)/theta(a)").is_ok());
    }

    #[test]
    fn theta_of_nonmonomial_is_rejected() {
        assert!(parse_expr("theta(a+b)").is_err());
        assert!(parse_expr("theta(-a)").is_err());
        assert!(parse_expr("theta(2*a)").is_err());
    }

    #[test]
    fn multi_term_powers_expand() {
        let e = parse_expr("(a+b)^2").unwrap();
        let f = parse_expr("a^2 + 2*a*b + b^2").unwrap();
        assert_eq!(e, f);
        assert!(parse_expr("(a+b)^(-1)").is_err());
        assert!(parse_expr("(a+b)^(1/2)").is_err());
    }

    #[test]
    fn variable_parser_accepts_all_families() {
        assert_eq!(parse_variable("q").unwrap(), Variable::Q);
        assert_eq!(parse_variable("t2").unwrap(), Variable::T2);
        assert_eq!(parse_variable("u[2,3]").unwrap(), Variable::u(2, 3));
        assert_eq!(parse_variable("z[4]").unwrap(), Variable::z(4));
        assert_eq!(parse_variable("x[1,5]").unwrap(), Variable::x(1, 5));
        assert_eq!(parse_variable("hbar").unwrap(), Variable::hbar());
        assert!(parse_variable("q^2").is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let e = parse_expr("theta(q^2*t1/x[2,1])^3/theta(z[1])-7/3*u[1,1]^(5/2)").unwrap();
        let v = expr_to_json(&e);
        let back = expr_from_json(&v).unwrap();
        assert_eq!(e, back);
    }

    use crate::rational::qint;
}
