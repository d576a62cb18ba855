//! Exact Tutte polynomials: the corank-nullity subset expansion, memoized
//! deletion-contraction, exact rational evaluation and sign comparison.

mod delcon;
mod poly;
mod rational;

pub use delcon::{
    tutte_delcon, tutte_delcon_with, CacheStats, HighestIndex, LowestIndex, MostBases, PivotStrategy, TutteCache,
    MEMO_MAX_N,
};
pub use poly::TuttePoly;
pub use rational::{format_rational, parse_rational, Rational, RationalParseError};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::Matroid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TutteError {
    #[error("evaluation point ({x}, {y}) is not in the open positive quadrant")]
    NonpositivePoint { x: String, y: String },
    #[error("hyperbola parameter {0} must exceed 1")]
    NotAboveOne(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(q: &Rational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Sign, String> {
        match v {
            -1 => Ok(Sign::Negative),
            0 => Ok(Sign::Zero),
            1 => Ok(Sign::Positive),
            _ => Err(format!("{v} is not a sign")),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `sgn(x + y - xy)`.
pub fn hyperbola_side(x: &Rational, y: &Rational) -> Sign {
    Sign::of(&(x + y - x * y))
}

/// Sums `(x-1)^(r - r(A)) (y-1)^(|A| - r(A))` over all subsets, then changes
/// basis to powers of `x` and `y`.
pub fn tutte_subset_expansion(m: &Matroid) -> TuttePoly {
    let n = m.n();
    let r = m.rank();
    let rows = r + 1;
    let cols = n - r + 1;
    // shifted[i][j] counts subsets with corank i and nullity j
    let mut shifted = vec![0u64; rows * cols];
    for a in m.ground_set().subsets() {
        let ra = m.rank_of(a);
        shifted[(r - ra) * cols + (a.len() - ra)] += 1;
    }
    let binom = binomials(rows.max(cols));
    let mut coeffs = vec![BigInt::zero(); rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let c = shifted[i * cols + j];
            if c == 0 {
                continue;
            }
            let c = BigInt::from(c);
            // (x-1)^i (y-1)^j = sum_a sum_b C(i,a)(-1)^(i-a) x^a C(j,b)(-1)^(j-b) y^b
            for a in 0..=i {
                for b in 0..=j {
                    let term = &c * &binom[i][a] * &binom[j][b];
                    if (i - a + j - b) % 2 == 0 {
                        coeffs[a * cols + b] += term;
                    } else {
                        coeffs[a * cols + b] -= term;
                    }
                }
            }
        }
    }
    TuttePoly::from_coeffs(rows, cols, coeffs)
}

fn binomials(size: usize) -> Vec<Vec<BigInt>> {
    let mut table = vec![vec![BigInt::zero(); size + 1]; size + 1];
    for i in 0..=size {
        table[i][0] = BigInt::one();
        for k in 1..=i {
            table[i][k] = &table[i - 1][k - 1] + &table[i - 1][k];
        }
    }
    table
}

/// `T(M; x, y)`.
pub fn evaluate(t: &TuttePoly, x: &Rational, y: &Rational) -> Rational {
    t.evaluate(x, y)
}

fn integer_value(t: &TuttePoly, x: i64, y: i64) -> BigInt {
    t.evaluate(&Rational::from_integer(x.into()), &Rational::from_integer(y.into())).to_integer()
}

/// `T(M; 1, 1)`.
pub fn count_bases(t: &TuttePoly) -> BigInt {
    integer_value(t, 1, 1)
}

/// `T(M; 2, 1)`.
pub fn count_independent(t: &TuttePoly) -> BigInt {
    integer_value(t, 2, 1)
}

/// `T(M; 1, 2)`.
pub fn count_spanning(t: &TuttePoly) -> BigInt {
    integer_value(t, 1, 2)
}

/// On `(x-1)(y-1) = 1` every matroid of rank `r` on `n` elements evaluates
/// to `(x-1)^r y^n`; checks this at `(x, x/(x-1))`.
pub fn hyperbola_check(t: &TuttePoly, x: &Rational) -> Result<bool, TutteError> {
    if *x <= Rational::one() {
        return Err(TutteError::NotAboveOne(format_rational(x)));
    }
    let x1 = x - Rational::one();
    let y = x / &x1;
    let rhs = num_traits::pow(x1, t.rank()) * num_traits::pow(y.clone(), t.ground_size());
    Ok(t.evaluate(x, &y) == rhs)
}

/// Exact sign of `T(M; x, y) - T(N; x, y)` for positive `x`, `y`.
pub fn sign_compare(tm: &TuttePoly, tn: &TuttePoly, x: &Rational, y: &Rational) -> Result<Sign, TutteError> {
    if !x.is_positive() || !y.is_positive() {
        return Err(TutteError::NonpositivePoint { x: format_rational(x), y: format_rational(y) });
    }
    Ok(Sign::of(&(tm.evaluate(x, y) - tn.evaluate(x, y))))
}
