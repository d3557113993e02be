//! Symbol names and their global order.
//!
//! A fixed total order on variables makes every printed expression unique:
//! `q` first, then `t1`, `t2`, then the framing parameters `u[i,j]` in
//! lexicographic `(i, j)` order, then the Kähler parameters `z[i]`, then
//! the Chern roots `x[i,k]` in lexicographic `(i, k)` order, and finally
//! free auxiliary symbols (such as `a`, `b`, `c`, or `hbar`) in
//! alphabetical order. The same order decides which way a theta argument
//! is oriented during canonicalization.

use std::cmp::Ordering;
use std::fmt;

/// One symbol: a named generator of the Laurent monomial group.
///
/// Indices are 1-based, matching the external text forms `u[i,j]`, `z[i]`,
/// `x[i,k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    /// The elliptic modulus `q`.
    Q,
    /// The first torus weight `t1`.
    T1,
    /// The second torus weight `t2`.
    T2,
    /// Framing parameter `u[i,j]`: vertex `i`, framing slot `j`.
    U(u32, u32),
    /// Kähler parameter `z[i]` attached to vertex `i`.
    Z(u32),
    /// Chern root `x[i,k]`: `k`-th root of the `i`-th tautological bundle.
    X(u32, u32),
    /// Free auxiliary symbol (`a`, `b`, `hbar`, ...), ordered by name.
    Aux(String),
}

impl Variable {
    /// Framing parameter `u[i,j]`.
    pub fn u(i: u32, j: u32) -> Self {
        Variable::U(i, j)
    }

    /// Kähler parameter `z[i]`.
    pub fn z(i: u32) -> Self {
        Variable::Z(i)
    }

    /// Chern root `x[i,k]`.
    pub fn x(i: u32, k: u32) -> Self {
        Variable::X(i, k)
    }

    /// Auxiliary symbol with the given name.
    pub fn aux(name: impl Into<String>) -> Self {
        Variable::Aux(name.into())
    }

    /// The auxiliary symbol `hbar` produced by the linear-quiver
    /// substitution `t1 -> hbar`, `t2 -> 1`.
    pub fn hbar() -> Self {
        Variable::Aux("hbar".to_string())
    }

    /// Rank used by the global order; ties within a rank are broken by the
    /// indices (or the name, for auxiliaries).
    fn rank(&self) -> u8 {
        match self {
            Variable::Q => 0,
            Variable::T1 => 1,
            Variable::T2 => 2,
            Variable::U(..) => 3,
            Variable::Z(..) => 4,
            Variable::X(..) => 5,
            Variable::Aux(..) => 6,
        }
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Variable::U(i, j), Variable::U(k, l)) => (i, j).cmp(&(k, l)),
            (Variable::Z(i), Variable::Z(k)) => i.cmp(k),
            (Variable::X(i, j), Variable::X(k, l)) => (i, j).cmp(&(k, l)),
            (Variable::Aux(a), Variable::Aux(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Q => write!(f, "q"),
            Variable::T1 => write!(f, "t1"),
            Variable::T2 => write!(f, "t2"),
            Variable::U(i, j) => write!(f, "u[{i},{j}]"),
            Variable::Z(i) => write!(f, "z[{i}]"),
            Variable::X(i, k) => write!(f, "x[{i},{k}]"),
            Variable::Aux(name) => write!(f, "{name}"),
        }
    }
}

// ====================================================================
// Tests
// ====================================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_order_matches_printing_convention() {
        let mut vars = vec![
            Variable::aux("b"),
            Variable::x(1, 2),
            Variable::z(2),
            Variable::u(2, 1),
            Variable::u(1, 2),
            Variable::T2,
            Variable::aux("a"),
            Variable::Q,
            Variable::x(1, 1),
            Variable::T1,
            Variable::z(1),
            Variable::u(1, 1),
        ];
        vars.sort();
        let printed: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        assert_eq!(
            printed,
            vec![
                "q", "t1", "t2", "u[1,1]", "u[1,2]", "u[2,1]", "z[1]", "z[2]", "x[1,1]",
                "x[1,2]", "a", "b"
            ]
        );
    }

    #[test]
    fn hbar_is_an_ordinary_auxiliary() {
        assert!(Variable::x(9, 9) < Variable::hbar());
        assert!(Variable::aux("a") < Variable::hbar());
    }
}
