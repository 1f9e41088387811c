use num_traits::One;

use super::poly::{Monomial, Polynomial};
use super::rational::Rational;
use super::symbol::Symbol;
use crate::error::Error;

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b` with respect to `x`.
pub fn prem(a: &Polynomial, b: &Polynomial, x: &Symbol) -> Polynomial {
    let db = b.deg(x);
    let da = a.deg(x);
    if db < 0 {
        return a.clone();
    }
    if da < db {
        return a.clone();
    }
    let lb = b.leading_coefficient_in(x);
    let mut r = a.clone();
    let mut steps = da - db + 1;
    while !r.is_zero() && r.deg(x) >= db {
        let dr = r.deg(x);
        let lr = r.leading_coefficient_in(x);
        let xm = Monomial::var(x.clone(), (dr - db) as u32);
        r = &(&lb * &r) - &(&lr * &b.mul_monomial(&xm));
        steps -= 1;
    }
    if steps > 0 {
        r = &r * &lb.pow(steps as u32);
    }
    r
}

fn monomial_gcd(a: &Monomial, b: &Monomial) -> Monomial {
    let pairs = a
        .factors()
        .iter()
        .filter_map(|(s, e)| {
            let f = b.degree(s);
            (f > 0).then(|| (s.clone(), (*e).min(f)))
        })
        .collect();
    Monomial::from_pairs(pairs)
}

/// gcd with a single-term polynomial: the common power product.
fn gcd_with_monomial(m: &Monomial, p: &Polynomial) -> Polynomial {
    let mut g = m.clone();
    for (pm, _) in p.terms() {
        g = monomial_gcd(&g, pm);
        if g.is_one() {
            break;
        }
    }
    Polynomial::monomial(Rational::one(), g)
}

/// Content of `p` viewed as a polynomial in `x`: the gcd of its coefficients.
pub fn content_in(p: &Polynomial, x: &Symbol) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in p.coefficients_in(x) {
        if c.is_zero() {
            continue;
        }
        g = poly_gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Normalized greatest common divisor: positive leading coefficient, integer
/// content 1. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a.is_monomial() {
        return gcd_with_monomial(a.leading_term().unwrap().0, b);
    }
    if b.is_monomial() {
        return gcd_with_monomial(b.leading_term().unwrap().0, a);
    }
    if a == b {
        return a.primitive();
    }
    let va = a.vars();
    let vb = b.vars();
    let x = match va.intersection(&vb).next() {
        Some(x) => x.clone(),
        None => {
            let x = va.iter().next().expect("non-constant");
            return poly_gcd(&content_in(a, x), b);
        }
    };
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let c = poly_gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = subresultant_gcd(pa, pb, &x);
    (&c * &g).primitive()
}

fn subresultant_gcd(a: Polynomial, b: Polynomial, x: &Symbol) -> Polynomial {
    let (mut a, mut b) = if a.deg(x) >= b.deg(x) { (a, b) } else { (b, a) };
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let delta = (a.deg(x) - b.deg(x)) as u32;
        let r = prem(&a, &b, x);
        if r.is_zero() {
            return primitive_in(&b, x);
        }
        if r.deg(x) == 0 {
            return Polynomial::one();
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.leading_coefficient_in(x);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
}

/// `p` divided by its content in `x`, normalized.
pub fn primitive_in(p: &Polynomial, x: &Symbol) -> Polynomial {
    let c = content_in(p, x);
    if c.is_zero() {
        return Polynomial::zero();
    }
    p.div_exact(&c).expect("content divides").primitive()
}

pub fn poly_lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let g = poly_gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).primitive()
}

/// Resultant with respect to `x`, equal to the Sylvester determinant.
pub fn resultant(a: &Polynomial, b: &Polynomial, x: &Symbol) -> Result<Polynomial, Error> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Algebra("undefined resultant".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Polynomial::zero());
    }
    let (da, db) = (a.deg(x), b.deg(x));
    if db == 0 {
        return Ok(b.pow(da as u32));
    }
    if da == 0 {
        return Ok(a.pow(db as u32));
    }
    let mut sign = Rational::one();
    let (mut a, mut b) = if da >= db {
        (a.clone(), b.clone())
    } else {
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        (b.clone(), a.clone())
    };
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let (dega, degb) = (a.deg(x), b.deg(x));
        let delta = (dega - degb) as u32;
        if dega % 2 == 1 && degb % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b, x);
        a = b;
        if r.is_zero() {
            return Ok(Polynomial::zero());
        }
        b = r
            .div_exact(&(&g * &h.pow(delta)))
            .expect("subresultant division is exact");
        g = a.leading_coefficient_in(x);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
        if b.deg(x) == 0 {
            let d = a.deg(x) as u32;
            let num = b.pow(d);
            let res = if d == 0 {
                num
            } else {
                num.div_exact(&h.pow(d - 1))
                    .expect("subresultant division is exact")
            };
            return Ok(res.scale(&sign));
        }
    }
}

/// Returns `true` when `a` and `b` share a factor of positive degree in `x`.
pub fn share_root(a: &Polynomial, b: &Polynomial, x: &Symbol) -> bool {
    poly_gcd(a, b).deg(x) > 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn v(s: &str) -> Polynomial {
        Polynomial::var(Symbol::new(s))
    }
    fn c(x: i64) -> Polynomial {
        Polynomial::from_int(x)
    }

    #[test]
    fn gcd_examples() {
        let k = v("k");
        assert_eq!(poly_gcd(&(&k.pow(2) - &c(1)), &(&k - &c(1))), &k - &c(1));
        assert_eq!(poly_gcd(&(&k - &c(1)), &k), c(1));
        let a = (&k + &c(1)).scale(&rat(2));
        let b = (&k + &c(1)).scale(&rat(4));
        assert_eq!(poly_gcd(&a, &b), &k + &c(1));
        assert!(poly_gcd(&Polynomial::zero(), &Polynomial::zero()).is_zero());
    }

    #[test]
    fn multivariate_gcd() {
        let (n, k, b) = (v("n"), v("k"), v("b"));
        let g = &(&n - &k) + &c(1);
        let p = &g * &(&(&n + &b) + &c(1));
        let q = &g * &(&k + &b);
        assert_eq!(poly_gcd(&p, &q), g);
        let p2 = &p * &(&b + &c(2));
        let q2 = &q * &(&b + &c(2));
        assert_eq!(poly_gcd(&p2, &q2), (&g * &(&b + &c(2))).primitive());
    }

    #[test]
    fn resultant_quadratic() {
        let (a, b, cc, x) = (v("a"), v("b"), v("c"), Symbol::new("x"));
        let xp = Polynomial::var(x.clone());
        let p = &(&(&a * &xp.pow(2)) + &(&b * &xp)) + &cc;
        let q = &(&a.scale(&rat(2)) * &xp) + &b;
        let disc = &b.pow(2) - &(&a * &cc).scale(&rat(4));
        assert_eq!(resultant(&p, &q, &x).unwrap(), -(&a * &disc));
    }

    #[test]
    fn resultant_linear() {
        let (k, j) = (v("k"), v("j"));
        let r = resultant(&(&k - &c(1)), &(&k - &j), &Symbol::k()).unwrap();
        assert!(r == &j - &c(1) || r == &c(1) - &j);
        let r2 = resultant(&(&k + &c(1)), &(&(&k - &c(1)) + &j), &Symbol::k()).unwrap();
        assert_eq!(r2.primitive(), &j - &c(2));
        assert!(resultant(&Polynomial::zero(), &Polynomial::zero(), &Symbol::k()).is_err());
    }
}
