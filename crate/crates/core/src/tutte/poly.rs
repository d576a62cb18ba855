use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// Dense bivariate integer polynomial; `coeff(i, j)` multiplies `x^i y^j`.
///
/// A Tutte polynomial of a rank-`r` matroid on `n` elements has `r + 1` rows
/// and `n - r + 1` columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TuttePoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<BigInt>,
}

impl TuttePoly {
    pub fn from_coeffs(rows: usize, cols: usize, coeffs: Vec<BigInt>) -> Self {
        assert!(rows >= 1 && cols >= 1, "a polynomial needs at least one coefficient");
        assert_eq!(coeffs.len(), rows * cols, "coefficient count");
        TuttePoly { rows, cols, coeffs }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_coeffs(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn one() -> Self {
        Self::monomial(0, 0)
    }

    /// `x^i y^j`.
    pub fn monomial(i: usize, j: usize) -> Self {
        let mut p = Self::zero(i + 1, j + 1);
        p.coeffs[i * (j + 1) + j] = BigInt::one();
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Rank of the matroid the polynomial belongs to.
    pub fn rank(&self) -> usize {
        self.rows - 1
    }

    /// Ground-set size of the matroid the polynomial belongs to.
    pub fn ground_size(&self) -> usize {
        self.rows + self.cols - 2
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        if i < self.rows && j < self.cols {
            self.coeffs[i * self.cols + j].clone()
        } else {
            BigInt::zero()
        }
    }

    /// Nonzero terms as `(i, j, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k / self.cols, k % self.cols, c))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= BigInt::zero())
    }

    fn resized(&self, rows: usize, cols: usize) -> Self {
        let mut out = Self::zero(rows, cols);
        for (i, j, c) in self.terms() {
            out.coeffs[i * cols + j] = c.clone();
        }
        out
    }

    /// Sum, sized to the larger of the two shapes.
    pub fn add(&self, other: &Self) -> Self {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut out = self.resized(rows, cols);
        for (i, j, c) in other.terms() {
            out.coeffs[i * cols + j] += c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rows = self.rows + other.rows - 1;
        let cols = self.cols + other.cols - 1;
        let mut out = Self::zero(rows, cols);
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                out.coeffs[(i + k) * cols + j + l] += a * b;
            }
        }
        out
    }

    /// Multiplies by `x^i y^j`.
    pub fn shifted(&self, i: usize, j: usize) -> Self {
        if i == 0 && j == 0 {
            return self.clone();
        }
        let rows = self.rows + i;
        let cols = self.cols + j;
        let mut out = Self::zero(rows, cols);
        for (a, b, c) in self.terms() {
            out.coeffs[(a + i) * cols + b + j] = c.clone();
        }
        out
    }

    /// `T(x, y) -> T(y, x)`.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for (i, j, c) in self.terms() {
            out.coeffs[j * self.rows + i] = c.clone();
        }
        out
    }

    /// Nonzero coefficients of `self - other`, as `(i, j, c)` in row-major order.
    pub fn difference(&self, other: &Self) -> Vec<(usize, usize, BigInt)> {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut out = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let d = self.coeff(i, j) - other.coeff(i, j);
                if !d.is_zero() {
                    out.push((i, j, d));
                }
            }
        }
        out
    }

    /// Exact Horner evaluation.
    pub fn evaluate(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for i in (0..self.rows).rev() {
            let mut row = Rational::zero();
            for j in (0..self.cols).rev() {
                row = row * y + Rational::from_integer(self.coeffs[i * self.cols + j].clone());
            }
            acc = acc * x + row;
        }
        acc
    }

    /// One line per power of `x`, coefficients of `y^0, y^1, ..` separated by spaces.
    pub fn matrix_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.coeffs[i * self.cols + j].to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`TuttePoly::matrix_text`].
    pub fn from_matrix_text(text: &str) -> Option<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let row: Option<Vec<BigInt>> = line.split(' ').map(|t| t.parse().ok()).collect();
            rows.push(row?);
        }
        let cols = rows.first()?.len();
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n = rows.len();
        Some(Self::from_coeffs(n, cols, rows.into_iter().flatten().collect()))
    }
}

impl fmt::Debug for TuttePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TuttePoly({self})")
    }
}

impl fmt::Display for TuttePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match (i, j) {
                (0, 0) => String::new(),
                (i, 0) => pow("x", i),
                (0, j) => pow("y", j),
                (i, j) => format!("{}{}", pow("x", i), pow("y", j)),
            };
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{c}{mono}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn pow(v: &str, k: usize) -> String {
    if k == 1 {
        v.to_string()
    } else {
        format!("{v}^{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn arithmetic() {
        let x = TuttePoly::monomial(1, 0);
        let y = TuttePoly::monomial(0, 1);
        let sum = x.add(&y);
        assert_eq!(sum.to_string(), "y + x");
        assert_eq!(sum.mul(&sum).to_string(), "y^2 + 2xy + x^2");
        assert_eq!(sum.shifted(1, 1).to_string(), "xy^2 + x^2y");
        assert_eq!(sum.transpose(), sum);
        assert_eq!(x.transpose(), y);
        assert_eq!(sum.evaluate(&int(3), &int(4)), int(7));
        assert_eq!(TuttePoly::zero(1, 1).to_string(), "0");
    }

    #[test]
    fn matrix_text_round_trip() {
        let p = TuttePoly::monomial(2, 1).add(&TuttePoly::monomial(0, 3));
        assert_eq!(p.matrix_text(), "0 0 0 1\n0 0 0 0\n0 1 0 0\n");
        assert_eq!(TuttePoly::from_matrix_text(&p.matrix_text()).unwrap(), p);
        assert!(TuttePoly::from_matrix_text("1 2\n3\n").is_none());
    }

    #[test]
    fn difference_lists_nonzero_terms() {
        let a = TuttePoly::monomial(1, 0).add(&TuttePoly::monomial(0, 1));
        let b = TuttePoly::monomial(1, 1);
        assert_eq!(a.difference(&b), vec![(0, 1, 1.into()), (1, 0, 1.into()), (1, 1, (-1).into())]);
    }
}
