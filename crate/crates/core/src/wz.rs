//! WZ pairs: construction, verification, and dual identities.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::algebra::{Rational, RationalFunction, Symbol};
use crate::error::{Error, Result};
use crate::gosper::{gosper_sum, GosperResult};
use crate::oracle::{oracle_sum, Window};
use crate::term::{Evaluation, HypergeometricTerm, LinearForm, ShadowSelection};

/// `F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)` with `G = R F`.
#[derive(Clone, Debug, PartialEq)]
pub struct WzPair {
    pub n: Symbol,
    pub k: Symbol,
    pub f: HypergeometricTerm,
    pub g: HypergeometricTerm,
    pub certificate: RationalFunction,
}

/// Builds the pair certifying `sum_k F_raw(n,k) = nice(n)`.
pub fn make_wz_pair(
    f_raw: &HypergeometricTerm,
    nice: &HypergeometricTerm,
    n: &Symbol,
    k: &Symbol,
) -> Result<WzPair> {
    if nice.depends_on(k) {
        return Err(Error::NotWz(format!("{} depends on {}", nice, k)));
    }
    let f = f_raw.div(nice);
    let rho_n = f.ratio(n);
    let delta = &rho_n - &RationalFunction::one();
    if delta.is_zero() {
        return Err(Error::NotWz(format!("{} does not depend on {}", f, n)));
    }
    let t = f.mul_ratfun(&delta)?;
    let anti = match gosper_sum(&t, k)? {
        GosperResult::Summable(a) => a,
        GosperResult::NotSummable => {
            return Err(Error::NotWz(format!(
                "{} has no hypergeometric antidifference in {}",
                t, k
            )))
        }
    };
    // G(k) = T(k-1) = M(k-1) (rho_N(k-1) - 1) F(k-1)
    let m = anti.multiplier.shift(k, -1);
    let certificate = &(&m * &delta.shift(k, -1)) / &f.ratio(k).shift(k, -1);
    let g = f.mul_ratfun(&certificate)?.absorb_linear_factors();
    Ok(WzPair {
        n: n.clone(),
        k: k.clone(),
        f,
        g,
        certificate,
    })
}

/// Exact check of the WZ equation via the certificate, then through the
/// terms themselves at 50 integer points.
pub fn verify_wz(pair: &WzPair) -> bool {
    let (n, k) = (&pair.n, &pair.k);
    let r = &pair.certificate;
    let lhs = &pair.f.ratio(n) - &RationalFunction::one();
    let rhs = &(&r.shift(k, 1) * &pair.f.ratio(k)) - r;
    if lhs != rhs || !same_value(&pair.f.mul_ratfun(r).ok(), &pair.g) {
        return false;
    }
    spot_check(pair)
}

fn same_value(a: &Option<HypergeometricTerm>, b: &HypergeometricTerm) -> bool {
    match a {
        Some(a) => a.div(b).to_ratfun().is_some_and(|q| q.is_one()),
        None => false,
    }
}

fn spot_check(pair: &WzPair) -> bool {
    let params: Vec<Symbol> = pair
        .f
        .symbols()
        .union(&pair.g.symbols())
        .filter(|s| **s != pair.n && **s != pair.k)
        .cloned()
        .collect();
    let mut checked = 0;
    let mut i: i64 = 0;
    while checked < 50 && i < 400 {
        let nv = i % 9;
        let kv = (i / 9) % 13 - 2;
        let mut at: BTreeMap<Symbol, i64> = params
            .iter()
            .enumerate()
            .map(|(j, s)| (s.clone(), 3 + 2 * j as i64 + (i % 5)))
            .collect();
        i += 1;
        let mut eval = |t: &HypergeometricTerm, dn: i64, dk: i64| {
            at.insert(pair.n.clone(), nv + dn);
            at.insert(pair.k.clone(), kv + dk);
            t.evaluate(&at).ok()
        };
        let vals = [
            eval(&pair.f, 1, 0),
            eval(&pair.f, 0, 0),
            eval(&pair.g, 0, 1),
            eval(&pair.g, 0, 0),
        ];
        let nums: Option<Vec<Rational>> = vals
            .iter()
            .map(|v| match v {
                Some(Evaluation::Value(x)) => Some(x.clone()),
                _ => None,
            })
            .collect();
        let Some(v) = nums else { continue };
        if &v[0] - &v[1] != &v[2] - &v[3] {
            return false;
        }
        checked += 1;
    }
    true
}

/// `sum_{sumvar} summand = constant` for every value of `freevar` in the
/// window, established by exact summation.
#[derive(Clone, Debug, PartialEq)]
pub struct DualClaim {
    pub summand: HypergeometricTerm,
    pub sumvar: Symbol,
    pub freevar: Symbol,
    pub constant: Rational,
    pub sums: Vec<(i64, Rational)>,
}

impl DualClaim {
    /// Moves the sign, power and constant factors free of the summation
    /// variable to the right: `sum summand' = rhs`. Shadow flags are cleared.
    pub fn normalized(&self) -> Result<(HypergeometricTerm, HypergeometricTerm)> {
        let free = self.summand.free_part(&self.sumvar);
        let rest = self.summand.div(&free).unflag();
        if self.constant == Rational::from_integer(0.into()) {
            return Err(Error::Degenerate("sum vanishes identically".into()));
        }
        let rhs = HypergeometricTerm::constant_term(self.constant.clone())?.div(&free);
        Ok((rest, rhs))
    }
}

/// Where to sum a dual claim.
#[derive(Clone, Debug, PartialEq)]
pub struct DualWindow {
    pub free: RangeInclusive<i64>,
    pub window: Window,
    pub params: BTreeMap<Symbol, i64>,
}

impl Default for DualWindow {
    fn default() -> Self {
        DualWindow {
            free: 1..=12,
            window: Window::Auto,
            params: BTreeMap::new(),
        }
    }
}

/// Shadows `G`, reindexes it, and confirms `sum_n G(n,k)` is constant in `k`.
pub fn dualize(
    pair: &WzPair,
    selection: &ShadowSelection,
    reindex: &BTreeMap<Symbol, LinearForm>,
    window: &DualWindow,
) -> Result<DualClaim> {
    let summand = pair.g.shadow(selection)?.affine_substitute(reindex)?;
    let values = oracle_sum(
        &summand,
        &pair.n,
        &pair.k,
        window.free.clone(),
        &window.window,
        &window.params,
    )?;
    let sums: Vec<(i64, Rational)> = window.free.clone().zip(values).collect();
    let Some((k0, constant)) = sums.first().cloned() else {
        return Err(Error::Degenerate("empty dual window".into()));
    };
    if let Some((k1, v)) = sums.iter().find(|(_, v)| *v != constant) {
        return Err(Error::NotConstant(format!(
            "sum over {} of {} is {} at {} = {} but {} at {} = {}",
            pair.n, summand, constant, pair.k, k0, v, pair.k, k1
        )));
    }
    Ok(DualClaim {
        summand,
        sumvar: pair.n.clone(),
        freevar: pair.k.clone(),
        constant,
        sums,
    })
}

#[cfg(test)]
mod tests;
