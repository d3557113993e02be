//! The K-theoretic limit of the elliptic envelope.
//!
//! For a slope `s` (one rational per vertex) the K-theoretic stable
//! envelope is
//!
//! ```text
//! K^s = lim_{q -> 0}  D * Stab|_{z_i -> z_i q^(s_i)}
//! ```
//!
//! where `D = (det T^(1/2)|_p)^(-1/2)` is a monomial computed from the
//! polarization character restricted at the fixed point. Theta factors
//! whose argument keeps a fractional power of `q` after the shift
//! degenerate to monomials, factors with no `q` left become the split
//! binomial `theta0`, and terms whose total `q`-power is positive drop
//! out. An optional final substitution `t2 -> 1, t1 -> hbar` produces
//! the linear-quiver (finite type A) normalization.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::combin::FixedPoint;
use crate::error::{Error, Result};
use crate::par::par_try_map;
use crate::quiver::{polarization, restrict_map, Arrows, Chamber, QuiverData};
use crate::rational::{format_qrat, parse_qrat, qrat, to_i64, QRat};
use crate::symbolic::{q_limit, Monomial, ThetaExpr, Variable};

use super::stab::{stab, stab_matrix, StabMatrix};

// ====================================================================
// Slopes
// ====================================================================

/// A slope: one exact rational per vertex. Non-generic values (where
/// some Kähler parameter survives the limit) are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slope {
    values: Vec<QRat>,
}

impl Slope {
    /// Wrap a list of rationals.
    pub fn new(values: Vec<QRat>) -> Self {
        Slope { values }
    }

    /// Parse a bracketed comma-separated list such as `[1/3,-2/5,0]`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| {
                Error::validation(format!("slope must be a bracketed list, got `{text}`"))
            })?;
        let mut values = Vec::new();
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                values.push(parse_qrat(part.trim())?);
            }
        }
        Ok(Slope { values })
    }

    /// The slope entries.
    pub fn values(&self) -> &[QRat] {
        &self.values
    }

    /// Check the slope length against the quiver datum.
    pub fn validate_for(&self, d: &QuiverData) -> Result<()> {
        if self.values.len() != d.r() as usize {
            return Err(Error::validation(format!(
                "slope has {} entries but the quiver has {} vertices",
                self.values.len(),
                d.r()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_qrat(v))?;
        }
        write!(f, "]")
    }
}

// ====================================================================
// The limit
// ====================================================================

/// The Kähler shift `z_i -> z_i * q^(s_i)`.
fn z_shift_map(d: &QuiverData, s: &Slope) -> BTreeMap<Variable, Monomial> {
    let mut map = BTreeMap::new();
    for i in 1..=d.r() {
        let si = &s.values()[(i - 1) as usize];
        if !si.is_zero() {
            map.insert(
                Variable::z(i),
                Monomial::var(Variable::z(i)) * Monomial::var_pow(Variable::Q, si.clone()),
            );
        }
    }
    map
}

/// The row scaling `(det T^(1/2)|_p)^(-1/2)`: the determinant of the
/// restricted polarization character (a product of monomial weights with
/// integer multiplicities) raised to `-1/2`.
pub(crate) fn d_factor(d: &QuiverData, p: &FixedPoint, a: &Arrows) -> Result<Monomial> {
    let restricted = polarization(d, a)?.substitute(&restrict_map(d, p)?)?;
    let mut det = Monomial::one();
    for t in restricted.terms() {
        let mult = to_i64(t.prefactor.coeff()).ok_or_else(|| {
            Error::internal(format!(
                "restricted polarization has non-integer multiplicity {}",
                t.prefactor.coeff()
            ))
        })?;
        det = det * t.prefactor.normalized()?.powi(mult)?;
    }
    det.pow(&qrat(-1, 2))
}

/// The linear-quiver specialization `t2 -> 1, t1 -> hbar`.
pub fn linear_substitution(e: &ThetaExpr) -> Result<ThetaExpr> {
    let map: BTreeMap<Variable, Monomial> = [
        (Variable::T2, Monomial::one()),
        (Variable::T1, Monomial::var(Variable::hbar())),
    ]
    .into();
    e.substitute(&map)
}

/// The K-theoretic stable envelope of one fixed point at slope `s`, off
/// shell in the Chern roots. With `linear` the result is additionally
/// specialized to the linear-quiver torus.
pub fn kstab(
    d: &QuiverData,
    p: &FixedPoint,
    a: &Arrows,
    c: &Chamber,
    s: &Slope,
    linear: bool,
) -> Result<ThetaExpr> {
    s.validate_for(d)?;
    let e = stab(d, p, a, c)?;
    let shifted = e.substitute(&z_shift_map(d, s))?;
    let limited = q_limit(&shifted.mul_monomial(&d_factor(d, p, a)?))?;
    if linear {
        linear_substitution(&limited)
    } else {
        Ok(limited)
    }
}

/// The matrix of K-theoretic restrictions, rows and columns in chamber
/// order; entry `(i, j)` is the K-envelope of `order[i]` restricted at
/// `order[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KStabMatrix {
    /// Fixed points in chamber order.
    pub order: Vec<FixedPoint>,
    /// `entries[i][j]` = K-envelope of `order[i]` restricted at `order[j]`.
    pub entries: Vec<Vec<ThetaExpr>>,
}

/// Compute the K-theoretic restriction matrix at slope `s`.
pub fn k_stab_matrix(
    d: &QuiverData,
    a: &Arrows,
    c: &Chamber,
    s: &Slope,
    linear: bool,
) -> Result<KStabMatrix> {
    s.validate_for(d)?;
    let StabMatrix { order, entries } = stab_matrix(d, a, c)?;
    let shift = z_shift_map(d, s);
    let d_factors: Vec<Monomial> = order
        .iter()
        .map(|p| d_factor(d, p, a))
        .collect::<Result<_>>()?;
    let indexed: Vec<(usize, Vec<ThetaExpr>)> = entries.into_iter().enumerate().collect();
    let rows = par_try_map(indexed, |(row, row_entries)| -> Result<Vec<ThetaExpr>> {
        let mut out = Vec::with_capacity(row_entries.len());
        for e in row_entries {
            let shifted = e.substitute(&shift)?;
            let limited = q_limit(&shifted.mul_monomial(&d_factors[row]))?;
            out.push(if linear { linear_substitution(&limited)? } else { limited });
        }
        Ok(out)
    })?;
    Ok(KStabMatrix { order, entries: rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{eval_expr, numeric_equal, parse_expr, EvalContext};
    use num::complex::Complex64;

    fn setup(v: &[u32], w: &[u32]) -> (QuiverData, Arrows, Chamber) {
        let d = QuiverData::new(v.to_vec(), w.to_vec()).unwrap();
        let a = Arrows::example(d.r());
        let c = Chamber::example(w);
        (d, a, c)
    }

    fn assert_expr_is(e: &ThetaExpr, expected: &str) {
        let got = e.normal_form().unwrap();
        let want = parse_expr(expected).unwrap().normal_form().unwrap();
        assert_eq!(got, want, "got {got}, want {want}");
    }

    #[test]
    fn slope_parsing_and_validation() {
        assert_eq!(Slope::parse("[1/3]").unwrap().values(), &[qrat(1, 3)]);
        assert_eq!(
            Slope::parse("[ 1/3 , -2/5 ]").unwrap().values(),
            &[qrat(1, 3), qrat(-2, 5)],
        );
        assert!(Slope::parse("1/3").is_err());
        let d = QuiverData::new(vec![2], vec![1]).unwrap();
        assert!(Slope::parse("[1/3,0]").unwrap().validate_for(&d).is_err());
        assert!(Slope::parse("[1/3]").unwrap().validate_for(&d).is_ok());
        assert_eq!(Slope::parse("[1/3,-2/5]").unwrap().to_string(), "[1/3,-2/5]");
    }

    #[test]
    fn row_scalings_for_the_two_fixed_points() {
        let (d, a, _) = setup(&[2], &[1]);
        let column = FixedPoint::parse("[[[1,1],1,1]]").unwrap();
        let row = FixedPoint::parse("[[[2],1,1]]").unwrap();
        let m = |s: &str| {
            parse_expr(s).unwrap().as_monomial().unwrap().clone()
        };
        assert_eq!(d_factor(&d, &column, &a).unwrap(), m("t2^(-3/2)"));
        assert_eq!(d_factor(&d, &row, &a).unwrap(), m("t1^(1/2)/t2^2"));
    }

    #[test]
    fn k_matrix_at_slope_one_third_matches_the_reference() {
        let (d, a, c) = setup(&[2], &[1]);
        let s = Slope::parse("[1/3]").unwrap();
        let m = k_stab_matrix(&d, &a, &c, &s, false).unwrap();
        assert_expr_is(&m.entries[0][0], "theta0(t2)*theta0(t2^2)/t2^(3/2)");
        assert!(m.entries[1][0].is_zero());
        assert_expr_is(&m.entries[1][1], "-t1^(1/2)*theta0(t2)*theta0(t1/t2)/t2^2");
        let want = parse_expr("theta0(t1*t2)*theta0(t2)/t2^(3/2)").unwrap();
        assert!(numeric_equal(&m.entries[0][1], &want, 11, 6, 1e-9).unwrap());
    }

    #[test]
    fn k_matrix_at_slope_one_half_keeps_a_kaehler_parameter() {
        let (d, a, c) = setup(&[2], &[1]);
        let s = Slope::parse("[1/2]").unwrap();
        let m = k_stab_matrix(&d, &a, &c, &s, false).unwrap();
        assert_expr_is(&m.entries[0][0], "theta0(t2)*theta0(t2^2)/t2^(3/2)");
        assert!(m.entries[1][0].is_zero());
        assert_expr_is(&m.entries[1][1], "-t1^(1/2)*theta0(t2)*theta0(t1/t2)/t2^2");
        let want = parse_expr(
            "t1^(1/2)*theta0(t1*t2)*theta0(t2)*theta0(t2^2*z[1]^2)\
             /(t2^2*theta0(t1*t2*z[1]^2))",
        )
        .unwrap();
        assert!(m.entries[0][1].variables().contains(&Variable::z(1)));
        assert!(numeric_equal(&m.entries[0][1], &want, 13, 6, 1e-9).unwrap());
    }

    #[test]
    fn single_point_k_envelope_matches_the_reference_numerically() {
        // The off-shell K-envelope of the column point at slope 1/3,
        // compared against the reference closed form (a rational function
        // of t1, t2, u[1,1] and the Chern roots) on positive real points.
        let (d, a, c) = setup(&[2], &[1]);
        let p = FixedPoint::parse("[[[1,1],1,1]]").unwrap();
        let s = Slope::parse("[1/3]").unwrap();
        let e = kstab(&d, &p, &a, &c, &s, false).unwrap();
        let golden = |t1: f64, t2: f64, u: f64, x1: f64, x2: f64| -> f64 {
            let first = (t2 * x1 - x2) * (t2 - 1.0).powi(2) * (t1 * t2 * u - x2) * x1.sqrt()
                / (x2.sqrt() * (t1 * t2 * x1 - x2) * (x1 - x2) * t2 * t2);
            let second = (t2 * x2 - x1) * (t2 - 1.0).powi(2) * (t1 * t2 * u - x1) * x2.sqrt()
                / (x1.sqrt() * (t1 * t2 * x2 - x1) * (x2 - x1) * t2 * t2);
            (first + second) / (t2 * t2 * t2).sqrt()
        };
        for (t1, t2, u, x1, x2) in [
            (0.7, 1.3, 0.9, 1.1, 0.6),
            (1.2, 0.8, 1.4, 0.5, 0.95),
            (0.55, 1.45, 1.05, 1.35, 0.75),
        ] {
            let values: BTreeMap<Variable, Complex64> = [
                (Variable::T1, Complex64::new(t1, 0.0)),
                (Variable::T2, Complex64::new(t2, 0.0)),
                (Variable::u(1, 1), Complex64::new(u, 0.0)),
                (Variable::x(1, 1), Complex64::new(x1, 0.0)),
                (Variable::x(1, 2), Complex64::new(x2, 0.0)),
                (Variable::Q, Complex64::new(0.1, 0.0)),
            ]
            .into();
            let got = eval_expr(&e, &EvalContext::new(values)).unwrap();
            let want = golden(t1, t2, u, x1, x2);
            assert!(
                (got - Complex64::new(want, 0.0)).norm() <= 1e-9 * want.abs().max(1.0),
                "at ({t1},{t2},{u},{x1},{x2}): got {got}, want {want}",
            );
        }
    }

    #[test]
    fn linear_specialization_of_a_finite_type_matrix() {
        // The finite A_1 quiver (T*P^1) is modeled as the cyclic quiver
        // with a padding vertex of dimension zero: v=[1,0], w=[2,0].
        // After t2 -> 1, t1 -> hbar the matrix must stay nonzero and the
        // symplectic weight is renamed.
        let d = QuiverData::new(vec![1, 0], vec![2, 0]).unwrap();
        let a = Arrows::example(2);
        let c = Chamber::example(&[2, 0]);
        let s = Slope::parse("[1/3,0]").unwrap();
        let m = k_stab_matrix(&d, &a, &c, &s, true).unwrap();
        assert_eq!(m.order.len(), 2);
        let mut saw_hbar = false;
        for (i, row) in m.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let vars = e.variables();
                assert!(!vars.contains(&Variable::T1), "t1 must be renamed: {e}");
                assert!(!vars.contains(&Variable::T2), "t2 must be eliminated: {e}");
                saw_hbar |= vars.contains(&Variable::hbar());
                if i == j {
                    assert!(!e.is_zero(), "diagonal entry ({i},{j}) collapsed");
                }
            }
        }
        assert!(saw_hbar, "hbar should appear after the linear substitution");
    }

    #[test]
    fn loop_quiver_vanishes_under_the_linear_specialization() {
        // With a genuine loop (r = 1) every envelope term carries a
        // theta(t2) factor from the self-interaction, so specializing
        // t2 -> 1 annihilates the whole matrix. The padding-vertex model
        // above is the meaningful way to reach finite type A.
        let (d, a, c) = setup(&[1], &[1]);
        let s = Slope::parse("[1/3]").unwrap();
        let m = k_stab_matrix(&d, &a, &c, &s, true).unwrap();
        assert!(m.entries.iter().flatten().all(|e| e.is_zero()));
    }

    #[test]
    fn wrong_slope_length_is_rejected() {
        let (d, a, c) = setup(&[2], &[1]);
        let p = FixedPoint::parse("[[[1,1],1,1]]").unwrap();
        let s = Slope::parse("[1/3,1/3]").unwrap();
        assert!(matches!(
            kstab(&d, &p, &a, &c, &s, false),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            k_stab_matrix(&d, &a, &c, &s, false),
            Err(Error::Validation(_))
        ));
    }
}
