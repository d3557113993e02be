//! Laurent monomials with exact rational exponents.
//!
//! A [`Monomial`] is a scalar coefficient times a finite product of
//! variable powers, e.g. `-3/2 * q^(1/2) * t1 * x[1,2]^(-2)`. Exponents
//! are exact rationals, so half-integer powers (`t2^(1/2)`, determinant
//! square roots) and slope shifts (`q^(2/3)`) need no special casing.
//!
//! Monomials are the universal currency of the crate: torus weights,
//! Chern-root substitutions, theta-function arguments, quasi-period
//! factors and determinant prefactors are all values of this one type.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_qrat, is_integer, qpow, to_i64, QRat};
use crate::symbolic::variable::Variable;

/// A Laurent monomial: `coeff * prod_v v^(exps[v])`.
///
/// Invariants maintained by every constructor and operation:
/// * `exps` never stores a zero exponent;
/// * the zero monomial is represented as `coeff = 0` with empty `exps`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    coeff: QRat,
    exps: BTreeMap<Variable, QRat>,
}

impl Monomial {
    // ----------------------------------------------------------------
    // Constructors
    // ----------------------------------------------------------------

    /// The multiplicative unit `1`.
    pub fn one() -> Self {
        Monomial { coeff: QRat::one(), exps: BTreeMap::new() }
    }

    /// The zero monomial.
    pub fn zero() -> Self {
        Monomial { coeff: QRat::zero(), exps: BTreeMap::new() }
    }

    /// A bare scalar.
    pub fn scalar(c: QRat) -> Self {
        Monomial { coeff: c, exps: BTreeMap::new() }
    }

    /// A single variable to the first power.
    pub fn var(v: Variable) -> Self {
        Self::var_pow(v, QRat::one())
    }

    /// A single variable to a rational power.
    pub fn var_pow(v: Variable, e: QRat) -> Self {
        let mut exps = BTreeMap::new();
        if !e.is_zero() {
            exps.insert(v, e);
        }
        Monomial { coeff: QRat::one(), exps }
    }

    /// Build from an explicit coefficient and exponent list (zero
    /// exponents are dropped, duplicate variables are merged).
    pub fn from_parts(coeff: QRat, exponents: impl IntoIterator<Item = (Variable, QRat)>) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut m = Self::scalar(coeff);
        for (v, e) in exponents {
            m.mul_var_pow(v, e);
        }
        m
    }

    /// The product `t1 * t2` (written `hbar` in the mathematics; not to be
    /// confused with the standalone `hbar` symbol introduced by the
    /// linear-quiver substitution).
    pub fn t1t2() -> Self {
        Self::var(Variable::T1) * Self::var(Variable::T2)
    }

    // ----------------------------------------------------------------
    // Inspection
    // ----------------------------------------------------------------

    /// The scalar coefficient.
    pub fn coeff(&self) -> &QRat {
        &self.coeff
    }

    /// Iterate over `(variable, exponent)` pairs in the global variable
    /// order. Zero exponents never occur.
    pub fn exponents(&self) -> impl Iterator<Item = (&Variable, &QRat)> {
        self.exps.iter()
    }

    /// The exponent of `v` (zero if absent).
    pub fn exponent(&self, v: &Variable) -> QRat {
        self.exps.get(v).cloned().unwrap_or_else(QRat::zero)
    }

    /// True for the zero monomial.
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// True for the multiplicative unit `1`.
    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exps.is_empty()
    }

    /// True if no variables occur (a bare scalar, possibly zero).
    pub fn is_scalar(&self) -> bool {
        self.exps.is_empty()
    }

    /// True if some variable occurs with a fractional exponent.
    pub fn has_fractional_exponent(&self) -> bool {
        self.exps.values().any(|e| !is_integer(e))
    }

    /// Number of variables with nonzero exponent.
    pub fn support_len(&self) -> usize {
        self.exps.len()
    }

    /// The same monomial with coefficient replaced by `1`. Errors on zero.
    pub fn normalized(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::validation("cannot normalize the zero monomial"));
        }
        Ok(Monomial { coeff: QRat::one(), exps: self.exps.clone() })
    }

    /// First variable (in the global order) with nonzero exponent,
    /// together with that exponent.
    pub fn leading_exponent(&self) -> Option<(&Variable, &QRat)> {
        self.exps.iter().next()
    }

    /// First variable other than `q` with nonzero exponent.
    pub fn leading_nonq_exponent(&self) -> Option<(&Variable, &QRat)> {
        self.exps.iter().find(|(v, _)| **v != Variable::Q)
    }

    /// The exponent of `q`.
    pub fn q_exponent(&self) -> QRat {
        self.exponent(&Variable::Q)
    }

    /// Compare exponent maps only (ignoring the coefficient); this is the
    /// key used to merge like terms of a [`crate::ThetaExpr`].
    pub fn exps_cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }

    /// True if the exponent maps agree (the coefficients may differ).
    pub fn same_exponents(&self, other: &Self) -> bool {
        self.exps == other.exps
    }

    // ----------------------------------------------------------------
    // Algebra
    // ----------------------------------------------------------------

    /// Multiply by `v^e` in place.
    pub fn mul_var_pow(&mut self, v: Variable, e: QRat) {
        if self.coeff.is_zero() || e.is_zero() {
            return;
        }
        match self.exps.entry(v) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(e);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + e;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::pole("inverse of the zero monomial"));
        }
        Ok(Monomial {
            coeff: self.coeff.recip(),
            exps: self.exps.iter().map(|(v, e)| (v.clone(), -e.clone())).collect(),
        })
    }

    /// Integer power (negative allowed).
    pub fn powi(&self, n: i64) -> Result<Self> {
        if self.is_zero() {
            return if n > 0 {
                Ok(Self::zero())
            } else if n == 0 {
                Ok(Self::one())
            } else {
                Err(Error::pole("zero monomial raised to a negative power"))
            };
        }
        let coeff = qpow(&self.coeff, n)?;
        let n_rat = crate::rational::qint(n);
        let exps = self
            .exps
            .iter()
            .map(|(v, e)| (v.clone(), e.clone() * &n_rat))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        Ok(Monomial { coeff, exps })
    }

    /// Rational power. For fractional `r` the coefficient must be exactly
    /// `1` (rational roots of general scalars do not exist in this ring).
    pub fn pow(&self, r: &QRat) -> Result<Self> {
        if let Some(n) = to_i64(r) {
            return self.powi(n);
        }
        if self.is_zero() {
            return Err(Error::validation("zero monomial raised to a fractional power"));
        }
        if !self.coeff.is_one() {
            return Err(Error::validation(format!(
                "fractional power {} of a monomial with coefficient {} is not a monomial",
                format_qrat(r),
                format_qrat(&self.coeff)
            )));
        }
        let exps = self
            .exps
            .iter()
            .map(|(v, e)| (v.clone(), e.clone() * r))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        Ok(Monomial { coeff: QRat::one(), exps })
    }

    /// Replace variables by monomial images: `v^e` becomes `image(v)^e`.
    /// Unmapped variables are kept. Errors if a fractional exponent meets
    /// an image whose coefficient is not `1`.
    pub fn substitute(&self, map: &BTreeMap<Variable, Monomial>) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = Self::scalar(self.coeff.clone());
        for (v, e) in &self.exps {
            match map.get(v) {
                None => out.mul_var_pow(v.clone(), e.clone()),
                Some(image) => {
                    if image.is_zero() {
                        return Err(Error::validation(format!(
                            "substitution maps {v} to zero"
                        )));
                    }
                    out = out * image.pow(e)?;
                }
            }
        }
        Ok(out)
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        if self.coeff.is_zero() || rhs.coeff.is_zero() {
            return Monomial::zero();
        }
        let mut out = self;
        out.coeff *= rhs.coeff;
        for (v, e) in rhs.exps {
            out.mul_var_pow(v, e);
        }
        out
    }
}

impl std::ops::Mul<&Monomial> for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        self * rhs.clone()
    }
}

impl std::ops::Neg for Monomial {
    type Output = Monomial;

    fn neg(mut self) -> Monomial {
        self.coeff = -self.coeff;
        self
    }
}

impl Ord for Monomial {
    /// Canonical order: exponent maps first, then coefficients. Used for
    /// deterministic term sorting.
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps).then_with(|| self.coeff.cmp(&other.coeff))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "{}", format_qrat(&self.coeff));
        }
        let mut pieces: Vec<String> = Vec::new();
        if self.coeff != QRat::one() {
            if self.coeff == -QRat::one() {
                // handled by the caller-visible leading minus below
            } else {
                pieces.push(format_qrat(&self.coeff));
            }
        }
        for (v, e) in &self.exps {
            if e.is_one() {
                pieces.push(v.to_string());
            } else if is_integer(e) && e > &QRat::zero() {
                pieces.push(format!("{v}^{}", format_qrat(e)));
            } else {
                pieces.push(format!("{v}^({})", format_qrat(e)));
            }
        }
        let body = pieces.join("*");
        if self.coeff == -QRat::one() {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

// ====================================================================
// Tests
// ====================================================================
