use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational numbers. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `v` as an `i64` when it is an integer that fits.
pub fn to_i64(v: &Rational) -> Option<i64> {
    if !v.is_integer() {
        return None;
    }
    i64::try_from(v.numer()).ok()
}

/// gcd of numerators over lcm of denominators, sign taken from `lead`.
pub fn rational_content<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for v in values {
        g = g.gcd(v.numer());
        l = l.lcm(v.denom());
    }
    if g.is_zero() {
        return Rational::one();
    }
    Rational::new(g.abs(), l)
}

thread_local! {
    static FACTORIALS: std::cell::RefCell<Vec<BigInt>> = std::cell::RefCell::new(vec![BigInt::one()]);
}

/// `n!`, memoized per thread.
pub fn factorial(n: u64) -> BigInt {
    FACTORIALS.with(|cell| {
        let mut table = cell.borrow_mut();
        while (table.len() as u64) <= n {
            let next = table.last().expect("seeded") * BigInt::from(table.len());
            table.push(next);
        }
        table[n as usize].clone()
    })
}

pub fn pow_rational(base: &Rational, exp: i64) -> Option<Rational> {
    if exp >= 0 {
        return Some(num_traits::pow(base.clone(), exp as usize));
    }
    if base.is_zero() {
        return None;
    }
    Some(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
}
