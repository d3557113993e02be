//! Formal sums of theta / q-Pochhammer symbols with monomial prefactors.
//!
//! The model types are:
//!
//! * [`ThetaFactor`] — one symbol `theta(m)^p`, `phi(m)^p`, or
//!   `theta0(m)^p` with a monomial argument `m` (coefficient exactly `1`)
//!   and a nonzero integer power `p`;
//! * [`Term`] — a monomial prefactor times a sorted, power-merged list of
//!   factors;
//! * [`ThetaExpr`] — a sum of terms, kept sorted with like terms merged.
//!
//! `theta` is the odd Jacobi theta function
//! `theta(x) = (x^(1/2) - x^(-1/2)) * phi(q*x) * phi(q/x)` built from the
//! q-Pochhammer product `phi(x) = prod_{i>=0} (1 - x*q^i)`. Two rewriting
//! laws make expressions canonical:
//!
//! * quasi-periodicity: `theta(q*x) = -(q^(1/2)*x)^(-1) * theta(x)`, so
//!   every theta argument can be shifted until its q-exponent lies in
//!   `[0, 1)`;
//! * inversion: `theta(1/x) = -theta(x)`, used to orient arguments so the
//!   earliest variable in the global order carries a positive exponent.
//!
//! The third factor kind, `theta0` (written [`FactorKind::Split`] in code),
//! is the two-term symbol `c^(1/2) - c^(-1/2)`: the `q -> 0` limit of
//! `theta(c)`. It also absorbs the `(1 - y)` multipliers produced when a
//! Pochhammer argument is shifted, via `(1 - y) = -y^(1/2) * theta0(y)`,
//! so that the normal form stays a sum of single-factor-list terms even
//! when negative powers are involved. `theta0` obeys the same inversion
//! law `theta0(1/c) = -theta0(c)` but has no quasi-periodicity.
//!
//! Normal form resolves vanishing factors only after merging powers within
//! a term, so a ratio like `theta(q)/theta(q^2)` — whose numerator and
//! denominator both vanish — correctly reduces to the finite monomial
//! `-q^(3/2)` instead of tripping over `0/0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{qfloor, qint, qrat, QRat};
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

// ====================================================================
// Factors
// ====================================================================

/// Which symbol a [`ThetaFactor`] denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    /// The odd theta function `theta(x)`.
    Theta,
    /// The q-Pochhammer infinite product `phi(x)`.
    Pochhammer,
    /// The split two-term symbol `theta0(c) = c^(1/2) - c^(-1/2)`.
    Split,
}

impl FactorKind {
    /// Name used by the text grammar.
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Theta => "theta",
            FactorKind::Pochhammer => "phi",
            FactorKind::Split => "theta0",
        }
    }
}

/// One multiplicative symbol `kind(argument)^power`.
///
/// The argument is a monomial with coefficient exactly `1` (signs and
/// scalars always live in the term prefactor); the power is a nonzero
/// integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaFactor {
    /// Which function this factor denotes.
    pub kind: FactorKind,
    /// The monomial argument (coefficient exactly `1`, nonzero).
    pub arg: Monomial,
    /// Nonzero integer power.
    pub power: i64,
}

impl ThetaFactor {
    /// Build a factor, checking the argument invariant.
    pub fn new(kind: FactorKind, arg: Monomial, power: i64) -> Result<Self> {
        if arg.is_zero() {
            return Err(Error::validation(format!("{} of a zero argument", kind.name())));
        }
        if !arg.coeff().is_one() {
            return Err(Error::validation(format!(
                "{} argument must have coefficient 1, got {arg}; \
                 scalars and signs belong to the term prefactor",
                kind.name()
            )));
        }
        Ok(ThetaFactor { kind, arg, power })
    }

    /// True for the sentinel `kind(1)` (resolved during canonicalization:
    /// zero in a numerator, a pole in a denominator).
    pub fn is_unit_arg(&self) -> bool {
        self.arg.is_one()
    }

    fn key(&self) -> (FactorKind, &Monomial) {
        (self.kind, &self.arg)
    }
}

impl Ord for ThetaFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key()).then(self.power.cmp(&other.power))
    }
}

impl PartialOrd for ThetaFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ThetaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.name(), self.arg)?;
        if self.power != 1 {
            if self.power > 0 {
                write!(f, "^{}", self.power)?;
            } else {
                write!(f, "^({})", self.power)?;
            }
        }
        Ok(())
    }
}

// ====================================================================
// Canonicalization of single factors
// ====================================================================

/// Outcome of canonicalizing one factor: a single-term multiplier
/// (prefactor and possibly extra `theta0` factors) together with the
/// canonicalized factor itself, if it did not disappear.
struct CanonFactor {
    prefactor: Monomial,
    extra: Vec<ThetaFactor>,
    factor: Option<ThetaFactor>,
}

/// Shift a theta argument so its q-exponent lies in `[0, 1)` and orient it
/// by the global variable order. Pure-q arguments `q^b` are oriented to
/// `b <= 1/2` (inversion maps `b` to `1 - b`).
fn canon_theta(arg: &Monomial, power: i64) -> Result<CanonFactor> {
    let mut y = arg.clone();
    // Per-power multiplier accumulated from shift and inversion laws.
    let mut mult = Monomial::one();
    loop {
        // theta(q^k y) = (-1)^k q^(-k^2/2) y^(-k) theta(y).
        let beta = y.q_exponent();
        let k = qfloor(&beta)?;
        if k != 0 {
            let shifted = (y.clone() * Monomial::var_pow(Variable::Q, qint(-k))).normalized()?;
            let sign = if k % 2 == 0 { qint(1) } else { qint(-1) };
            mult = mult
                * Monomial::scalar(sign)
                * Monomial::var_pow(Variable::Q, qrat(-k * k, 2))
                * shifted.powi(-k)?;
            y = shifted;
        }
        // Orientation: theta(1/y) = -theta(y).
        let flip = match y.leading_nonq_exponent() {
            Some((_, e)) => e.is_negative(),
            // Pure q-power q^b: already b in [0,1); canonical when b <= 1/2.
            None => y.q_exponent() > qrat(1, 2),
        };
        if !flip {
            break;
        }
        mult = -mult;
        y = y.inverse()?;
    }
    let prefactor = mult.powi(power)?;
    Ok(CanonFactor {
        prefactor,
        extra: Vec::new(),
        factor: Some(ThetaFactor::new(FactorKind::Theta, y, power)?),
    })
}

/// Orient a `theta0` argument (`theta0(1/c) = -theta0(c)`); there is no
/// quasi-periodicity, so the q-exponent — if any — participates in the
/// ordinary leading-variable rule.
fn canon_split(arg: &Monomial, power: i64) -> Result<CanonFactor> {
    let mut y = arg.clone();
    let mut mult = Monomial::one();
    if let Some((_, e)) = y.leading_exponent() {
        if e.is_negative() {
            mult = -mult;
            y = y.inverse()?;
        }
    }
    Ok(CanonFactor {
        prefactor: mult.powi(power)?,
        extra: Vec::new(),
        factor: Some(ThetaFactor::new(FactorKind::Split, y, power)?),
    })
}

/// Remove the integer q-part of a Pochhammer argument using
/// `phi(q*x) = phi(x)/(1-x)` and `phi(x/q) = phi(x)*(1-x/q)`. Each
/// `(1-w)^(+-1)` multiplier is stored as `-w^(1/2) * theta0(w)` raised to
/// the appropriate power, keeping the result a single term.
///
/// Arguments that are pure integer powers of q need care: shifting
/// `phi(q^k)` for `k >= 1` all the way to `phi(1)` would manufacture a
/// spurious `(1-1)` factor, so those reduce to base `phi(q)` instead.
fn canon_pochhammer(arg: &Monomial, power: i64) -> Result<CanonFactor> {
    let beta = arg.q_exponent();
    let pure_q = arg.leading_nonq_exponent().is_none();
    let k = if pure_q && beta.is_integer() && beta >= QRat::one() {
        qfloor(&beta)? - 1
    } else {
        qfloor(&beta)?
    };
    let y = if k == 0 {
        arg.clone()
    } else {
        (arg.clone() * Monomial::var_pow(Variable::Q, qint(-k))).normalized()?
    };
    let mut prefactor = Monomial::one();
    let mut extra = Vec::new();
    // phi(q^k y) = phi(y) * prod_{j=0}^{k-1} (1 - q^j y)^(-1)   (k > 0)
    // phi(q^k y) = phi(y) * prod_{j=k}^{-1} (1 - q^j y)         (k < 0)
    let (range, sign_exp) = if k > 0 { (0..k, -1i64) } else { (k..0, 1i64) };
    for j in range {
        let w = (y.clone() * Monomial::var_pow(Variable::Q, qint(j))).normalized()?;
        let e = sign_exp * power;
        if w.is_one() {
            // Only reachable for phi(q^k) with k <= 0, where the vanishing
            // (1 - 1) multiplier is genuine: phi(1) = 0 anyway, so emit the
            // sentinel through the main factor instead of the multiplier.
            continue;
        }
        // (1 - w)^e = (-1)^e w^(e/2) theta0(w)^e.
        let sign = if e % 2 == 0 { qint(1) } else { qint(-1) };
        prefactor = prefactor * Monomial::scalar(sign) * w.pow(&(qint(e) * qrat(1, 2)))?;
        let canon = canon_split(&w, e)?;
        prefactor = prefactor * canon.prefactor;
        extra.extend(canon.factor);
    }
    Ok(CanonFactor {
        prefactor,
        extra,
        factor: Some(ThetaFactor::new(FactorKind::Pochhammer, y, power)?),
    })
}

fn canon_factor(f: &ThetaFactor) -> Result<CanonFactor> {
    match f.kind {
        FactorKind::Theta => canon_theta(&f.arg, f.power),
        FactorKind::Split => canon_split(&f.arg, f.power),
        FactorKind::Pochhammer => canon_pochhammer(&f.arg, f.power),
    }
}

// ====================================================================
// Terms
// ====================================================================

/// A monomial prefactor times a sorted list of factors with merged powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    /// Scalar-and-monomial part of the term.
    pub prefactor: Monomial,
    /// Canonically sorted factors; no two share `(kind, argument)`.
    pub factors: Vec<ThetaFactor>,
}

impl Term {
    /// Build a term, sorting factors and merging powers of equal
    /// `(kind, argument)` pairs. A zero prefactor collapses to the zero
    /// term (empty factor list).
    pub fn new(prefactor: Monomial, factors: Vec<ThetaFactor>) -> Self {
        if prefactor.is_zero() {
            return Term { prefactor: Monomial::zero(), factors: Vec::new() };
        }
        let mut factors = factors;
        factors.sort();
        let mut merged: Vec<ThetaFactor> = Vec::with_capacity(factors.len());
        for f in factors {
            match merged.last_mut() {
                Some(last) if last.key() == f.key() => last.power += f.power,
                _ => merged.push(f),
            }
        }
        merged.retain(|f| f.power != 0);
        Term { prefactor, factors: merged }
    }

    /// The constant term `1`.
    pub fn one() -> Self {
        Term { prefactor: Monomial::one(), factors: Vec::new() }
    }

    /// A factor-free term.
    pub fn from_monomial(m: Monomial) -> Self {
        Term::new(m, Vec::new())
    }

    /// True for the zero term.
    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// Product of two terms (factor powers merge; no canonicalization).
    pub fn mul(&self, other: &Term) -> Term {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Term::new(self.prefactor.clone() * other.prefactor.clone(), factors)
    }

    /// Exact division by another term: prefactors divide, factor powers
    /// subtract. Errors only if `other` is zero.
    pub fn div(&self, other: &Term) -> Result<Term> {
        if other.is_zero() {
            return Err(Error::pole("division by a zero term"));
        }
        let mut factors = self.factors.clone();
        for f in &other.factors {
            factors.push(ThetaFactor { kind: f.kind, arg: f.arg.clone(), power: -f.power });
        }
        Ok(Term::new(self.prefactor.clone() * other.prefactor.inverse()?, factors))
    }

    /// Canonicalize every factor, merge, and resolve vanishing factors:
    /// `kind(1)` at positive power annihilates the term (returns `None`),
    /// at negative power it is a pole.
    pub fn canonicalize(&self) -> Result<Option<Term>> {
        if self.is_zero() {
            return Ok(None);
        }
        let mut prefactor = self.prefactor.clone();
        let mut factors: Vec<ThetaFactor> = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let canon = canon_factor(f)?;
            prefactor = prefactor * canon.prefactor;
            factors.extend(canon.extra);
            factors.extend(canon.factor);
        }
        let merged = Term::new(prefactor, factors);
        if merged.is_zero() {
            return Ok(None);
        }
        let mut out_factors = Vec::with_capacity(merged.factors.len());
        for f in merged.factors {
            if f.is_unit_arg() {
                if f.power > 0 {
                    return Ok(None); // kind(1) = 0 in the numerator
                }
                return Err(Error::pole(format!(
                    "{}(1) appeared at power {} (in a denominator)",
                    f.kind.name(),
                    f.power
                )));
            }
            out_factors.push(f);
        }
        Ok(Some(Term { prefactor: merged.prefactor, factors: out_factors }))
    }

    /// Substitute variables by monomials in the prefactor and in every
    /// factor argument. The result is raw (not canonicalized).
    pub fn substitute_raw(&self, map: &BTreeMap<Variable, Monomial>) -> Result<Term> {
        let prefactor = self.prefactor.substitute(map)?;
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let image = f.arg.substitute(map)?;
            if image.is_zero() {
                return Err(Error::validation(format!(
                    "substitution sends the argument of {} to zero",
                    f
                )));
            }
            let coeff = image.coeff().clone();
            if !coeff.is_one() {
                return Err(Error::validation(format!(
                    "substitution gives {} argument the scalar coefficient {}; \
                     such arguments are outside this ring",
                    f.kind.name(),
                    coeff
                )));
            }
            factors.push(ThetaFactor { kind: f.kind, arg: image, power: f.power });
        }
        Ok(Term::new(prefactor, factors))
    }

    /// Sort key for terms inside an expression: factor lists first, then
    /// the prefactor exponent map.
    fn cmp_key(&self, other: &Term) -> Ordering {
        self.factors
            .cmp(&other.factors)
            .then_with(|| self.prefactor.exps_cmp(&other.prefactor))
    }

    /// True if two terms may be merged by adding coefficients.
    fn same_shape(&self, other: &Term) -> bool {
        self.factors == other.factors && self.prefactor.same_exponents(&other.prefactor)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_term(self, false))
    }
}

/// Render a term; with `strip_sign` the leading minus of a negative
/// coefficient is omitted (the caller prints ` - ` between terms).
fn render_term(t: &Term, strip_sign: bool) -> String {
    let mut prefactor = t.prefactor.clone();
    if strip_sign && prefactor.coeff().is_negative() {
        prefactor = -prefactor;
    }
    if t.factors.is_empty() {
        return prefactor.to_string();
    }
    let factors: Vec<String> = t.factors.iter().map(|f| f.to_string()).collect();
    let body = factors.join("*");
    if prefactor.is_one() {
        body
    } else if prefactor == -Monomial::one() {
        format!("-{body}")
    } else {
        format!("{prefactor}*{body}")
    }
}

// ====================================================================
// Expressions
// ====================================================================

/// A finite sum of [`Term`]s, kept sorted with like terms merged and zero
/// terms dropped. The zero expression is the empty sum.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaExpr {
    terms: Vec<Term>,
}

impl ThetaExpr {
    // ----------------------------------------------------------------
    // Constructors
    // ----------------------------------------------------------------

    /// The zero expression.
    pub fn zero() -> Self {
        ThetaExpr { terms: Vec::new() }
    }

    /// The constant `1`.
    pub fn one() -> Self {
        ThetaExpr::from_monomial(Monomial::one())
    }

    /// A single factor-free term.
    pub fn from_monomial(m: Monomial) -> Self {
        ThetaExpr::from_terms(vec![Term::from_monomial(m)])
    }

    /// Build from terms, sorting and merging.
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut terms: Vec<Term> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        terms.sort_by(Term::cmp_key);
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.same_shape(&t) => {
                    let coeff = last.prefactor.coeff().clone() + t.prefactor.coeff().clone();
                    if coeff.is_zero() {
                        merged.pop();
                    } else {
                        let scale = coeff / last.prefactor.coeff().clone();
                        last.prefactor = last.prefactor.clone() * Monomial::scalar(scale);
                    }
                }
                _ => merged.push(t),
            }
        }
        ThetaExpr { terms: merged }
    }

    /// `theta` of a monomial argument, eagerly canonicalized: the
    /// quasi-periodicity and inversion laws are applied and `theta(1)`
    /// collapses to the zero expression.
    ///
    /// The argument must be a nonzero monomial with coefficient `1`
    /// (`theta` of a negated or scaled monomial is not expressible in this
    /// ring — there is no identity moving scalars out of the argument).
    pub fn theta(arg: &Monomial) -> Result<Self> {
        let factor = ThetaFactor::new(FactorKind::Theta, arg.clone(), 1)?;
        let term = Term::new(Monomial::one(), vec![factor]);
        Ok(ThetaExpr::from_terms(term.canonicalize()?.into_iter().collect()))
    }

    /// `phi` (q-Pochhammer) of a monomial argument, canonicalized.
    pub fn pochhammer(arg: &Monomial) -> Result<Self> {
        let factor = ThetaFactor::new(FactorKind::Pochhammer, arg.clone(), 1)?;
        let term = Term::new(Monomial::one(), vec![factor]);
        Ok(ThetaExpr::from_terms(term.canonicalize()?.into_iter().collect()))
    }

    /// The two-argument Pochhammer combination
    /// `phi2(x, z) = theta(x*z) / (theta(x) * theta(z))`, as a single
    /// term. `x`, `z`, and `x*z` must all differ from `1`: a unit `x` or
    /// `z` is a pole, a unit `x*z` a zero of the denominator pattern —
    /// both are rejected with the offending argument named.
    pub fn phi2(x: &Monomial, z: &Monomial) -> Result<Self> {
        for (name, m) in [("first", x), ("second", z)] {
            if m.is_zero() {
                return Err(Error::validation(format!("phi2 {name} argument is zero")));
            }
            if m.normalized()?.is_one() {
                return Err(Error::pole(format!(
                    "phi2 {name} argument equals 1 (theta(1) in the denominator)"
                )));
            }
        }
        let xz = x.clone() * z.clone();
        if xz.normalized()?.is_one() {
            return Err(Error::pole(
                "phi2 arguments are mutually inverse (theta(1) in the numerator pattern)",
            ));
        }
        let term = Term::new(
            Monomial::one(),
            vec![
                ThetaFactor::new(FactorKind::Theta, xz.normalized()?, 1)?,
                ThetaFactor::new(FactorKind::Theta, x.normalized()?, -1)?,
                ThetaFactor::new(FactorKind::Theta, z.normalized()?, -1)?,
            ],
        );
        match term.canonicalize()? {
            Some(t) => Ok(ThetaExpr::from_terms(vec![t])),
            None => Err(Error::internal("phi2 produced a vanishing term".to_string())),
        }
    }

    // ----------------------------------------------------------------
    // Inspection
    // ----------------------------------------------------------------

    /// The terms in canonical order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True for the zero expression.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// If the expression is one factor-free term, its monomial.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.as_slice() {
            [t] if t.factors.is_empty() => Some(&t.prefactor),
            _ => None,
        }
    }

    /// If the expression is a single term, that term.
    pub fn as_single_term(&self) -> Option<&Term> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    /// True if no theta/phi/theta0 factors occur anywhere (a bare Laurent
    /// polynomial — the shape of torus characters).
    pub fn is_laurent(&self) -> bool {
        self.terms.iter().all(|t| t.factors.is_empty())
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the empty (zero) sum.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All variables occurring in prefactors or factor arguments.
    pub fn variables(&self) -> Vec<Variable> {
        let mut set = std::collections::BTreeSet::new();
        for t in &self.terms {
            for (v, _) in t.prefactor.exponents() {
                set.insert(v.clone());
            }
            for f in &t.factors {
                for (v, _) in f.arg.exponents() {
                    set.insert(v.clone());
                }
            }
        }
        set.into_iter().collect()
    }

    // ----------------------------------------------------------------
    // Algebra
    // ----------------------------------------------------------------

    /// Sum.
    pub fn add(&self, other: &ThetaExpr) -> ThetaExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ThetaExpr::from_terms(terms)
    }

    /// Negation.
    pub fn neg(&self) -> ThetaExpr {
        ThetaExpr::from_terms(
            self.terms
                .iter()
                .map(|t| Term { prefactor: -t.prefactor.clone(), factors: t.factors.clone() })
                .collect(),
        )
    }

    /// Difference.
    pub fn sub(&self, other: &ThetaExpr) -> ThetaExpr {
        self.add(&other.neg())
    }

    /// Product (distributes term by term; factor powers merge).
    pub fn mul(&self, other: &ThetaExpr) -> ThetaExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        ThetaExpr::from_terms(terms)
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, t: &Term) -> ThetaExpr {
        ThetaExpr::from_terms(self.terms.iter().map(|a| a.mul(t)).collect())
    }

    /// Multiply by a monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> ThetaExpr {
        self.mul_term(&Term::from_monomial(m.clone()))
    }

    /// Exact division by a single-term expression.
    pub fn div_term(&self, d: &Term) -> Result<ThetaExpr> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(t.div(d)?);
        }
        Ok(ThetaExpr::from_terms(terms))
    }

    /// Scale by a rational.
    pub fn scale(&self, c: &QRat) -> ThetaExpr {
        if c.is_zero() {
            return ThetaExpr::zero();
        }
        self.mul_monomial(&Monomial::scalar(c.clone()))
    }

    // ----------------------------------------------------------------
    // Normal form, substitution, quasi-periods
    // ----------------------------------------------------------------

    /// Canonical form: every theta argument's q-exponent shifted into
    /// `[0, 1)`, every Pochhammer integer q-part removed, arguments
    /// oriented by the global variable order, vanishing factors resolved
    /// (after power merging), like terms merged. Idempotent.
    ///
    /// Errors: a vanishing factor at negative power is a [`Error::Pole`].
    pub fn normal_form(&self) -> Result<ThetaExpr> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(c) = t.canonicalize()? {
                out.push(c);
            }
        }
        Ok(ThetaExpr::from_terms(out))
    }

    /// Substitute variables by monomial images everywhere (prefactors and
    /// factor arguments) and re-canonicalize. A factor argument driven to
    /// `1` annihilates its term when the factor sits in the numerator and
    /// raises [`Error::Pole`] when it sits in a denominator.
    pub fn substitute(&self, map: &BTreeMap<Variable, Monomial>) -> Result<ThetaExpr> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(c) = t.substitute_raw(map)?.canonicalize()? {
                out.push(c);
            }
        }
        Ok(ThetaExpr::from_terms(out))
    }

    /// Substitute a single variable.
    pub fn substitute_one(&self, v: Variable, image: Monomial) -> Result<ThetaExpr> {
        let map: BTreeMap<Variable, Monomial> = [(v, image)].into();
        self.substitute(&map)
    }

    /// The quasi-period factor of `self` in the variable `v`: the monomial
    /// `normal_form(self|_{v -> q v}) / normal_form(self)`, if that ratio
    /// is a pure monomial. Stable envelopes transform this way in every
    /// Chern root, framing parameter and Kähler parameter; a non-monomial
    /// ratio therefore signals a formula bug and is reported as
    /// [`Error::NotQuasiPeriodic`].
    pub fn quasi_period_factor(&self, v: &Variable) -> Result<Monomial> {
        let base = self.normal_form()?;
        if base.is_zero() {
            return Err(Error::validation(
                "quasi-period factor of the zero expression is undefined",
            ));
        }
        let shifted = self
            .substitute_one(v.clone(), Monomial::var(Variable::Q) * Monomial::var(v.clone()))?;
        let candidate = match (shifted.terms.first(), base.terms.first()) {
            (Some(s), Some(b)) => {
                let ratio = s.div(b)?;
                if !ratio.factors.is_empty() {
                    return Err(Error::NotQuasiPeriodic(format!(
                        "leading terms differ by non-monomial factor in {v}"
                    )));
                }
                ratio.prefactor
            }
            _ => {
                return Err(Error::NotQuasiPeriodic(format!(
                    "expression vanishes after the shift in {v}"
                )))
            }
        };
        if base.mul_monomial(&candidate) == shifted {
            Ok(candidate)
        } else {
            Err(Error::NotQuasiPeriodic(format!(
                "ratio after shifting {v} is not a pure monomial"
            )))
        }
    }

    /// Expand every `theta0` factor at positive power into its two-term
    /// sum `c^(1/2) - c^(-1/2)`, distributing products. Factors at
    /// negative power (genuine denominators) are left symbolic. Useful for
    /// presenting K-theoretic limits as Laurent polynomials.
    pub fn expand_splits(&self) -> Result<ThetaExpr> {
        let mut out = ThetaExpr::zero();
        for t in self.terms() {
            let mut acc = ThetaExpr::from_monomial(t.prefactor.clone());
            for f in &t.factors {
                if f.kind == FactorKind::Split && f.power > 0 {
                    let half = f.arg.pow(&qrat(1, 2))?;
                    let two_term = ThetaExpr::from_terms(vec![
                        Term::from_monomial(half.clone()),
                        Term::from_monomial(-half.inverse()?),
                    ]);
                    for _ in 0..f.power {
                        acc = acc.mul(&two_term);
                    }
                } else {
                    acc = acc.mul_term(&Term::new(
                        Monomial::one(),
                        vec![f.clone()],
                    ));
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Character dual: invert every monomial of a factor-free expression
    /// (coefficients are kept). Errors if theta factors are present.
    pub fn dual_character(&self) -> Result<ThetaExpr> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if !t.factors.is_empty() {
                return Err(Error::validation(
                    "dual is defined for factor-free characters only",
                ));
            }
            let coeff = t.prefactor.coeff().clone();
            let inv = t.prefactor.normalized()?.inverse()?;
            terms.push(Term::from_monomial(inv * Monomial::scalar(coeff)));
        }
        Ok(ThetaExpr::from_terms(terms))
    }
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i == 0 {
                write!(f, "{}", render_term(t, false))?;
            } else if t.prefactor.coeff().is_negative() {
                write!(f, " - {}", render_term(t, true))?;
            } else {
                write!(f, " + {}", render_term(t, false))?;
            }
        }
        Ok(())
    }
}

// ====================================================================
// Tests
// ====================================================================
