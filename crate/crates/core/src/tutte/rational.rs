use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// Exact rational number; always normalized with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("`{0}` is not a rational of the form p/q or an integer")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

/// Parses `p/q` or an integer. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let malformed = || RationalParseError::Malformed(s.to_string());
    let int = |t: &str| -> Result<BigInt, RationalParseError> {
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        t.parse::<BigInt>().map_err(|_| malformed())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((p, q)) => {
            let num = int(p)?;
            let den = int(q)?;
            if den.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Always `p/q`, including integers (`2/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
