//! JSON certificate documents: a recurrence and its rational certificate,
//! stored as grammar strings so that they can be re-checked later.

use serde::{Deserialize, Serialize};

use crate::algebra::Symbol;
use crate::error::{Error, Result};
use crate::parse::parse_ratfun;
use crate::term::{parse_term, HypergeometricTerm};
use crate::wz::WzPair;
use crate::zeilberger::{verify_certificate, RecurrenceOperator, TelescopeCertificate};

pub const CONVENTION: &str = "forward";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
}

/// `sum_i s_i(n) F(n+i,k) = G(n,k+1) - G(n,k)` with `G = R F`, where `F` is
/// `input`, or `input / rhs` when a right-hand side is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    pub sumvar: String,
    pub recvar: String,
    pub convention: String,
    pub order: usize,
    pub coefficients: Vec<String>,
    pub certificate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub version: String,
    pub status: Status,
}

impl CertificateDocument {
    /// Records a telescoping certificate for `sum_k input`.
    pub fn from_telescope(input: &HypergeometricTerm, cert: &TelescopeCertificate) -> Self {
        let status = if verify_certificate(input, cert) { Status::Verified } else { Status::Refuted };
        CertificateDocument {
            input: input.to_string(),
            rhs: None,
            sumvar: cert.sumvar.to_string(),
            recvar: cert.recvar().to_string(),
            convention: CONVENTION.into(),
            order: cert.operator.order(),
            coefficients: cert.operator.coefficients().iter().map(|c| c.to_string()).collect(),
            certificate: cert.certificate.to_string(),
            method: Some("zeilberger".into()),
            version: VERSION.into(),
            status,
        }
    }

    /// Records `sum_k summand = rhs` through the operator `N - 1`.
    pub fn from_wz(summand: &HypergeometricTerm, rhs: &HypergeometricTerm, pair: &WzPair) -> Self {
        let mut doc = CertificateDocument {
            input: summand.to_string(),
            rhs: Some(rhs.to_string()),
            sumvar: pair.k.to_string(),
            recvar: pair.n.to_string(),
            convention: CONVENTION.into(),
            order: 1,
            coefficients: vec!["-1".into(), "1".into()],
            certificate: pair.certificate.to_string(),
            method: Some("wz".into()),
            version: VERSION.into(),
            status: Status::Refuted,
        };
        doc.status = doc.check().unwrap_or(Status::Refuted);
        doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    /// The summand whose telescoping is certified.
    pub fn summand(&self) -> Result<HypergeometricTerm> {
        let f = parse_term(&self.input)?;
        Ok(match &self.rhs {
            Some(rhs) => f.div(&parse_term(rhs)?),
            None => f,
        })
    }

    pub fn telescope(&self) -> Result<TelescopeCertificate> {
        if self.convention != CONVENTION {
            return Err(Error::Document(format!("unknown convention {:?}", self.convention)));
        }
        if self.coefficients.len() != self.order + 1 {
            return Err(Error::Document(format!(
                "order {} with {} coefficients",
                self.order,
                self.coefficients.len()
            )));
        }
        let sumvar = parse_symbol(&self.sumvar)?;
        let recvar = parse_symbol(&self.recvar)?;
        Ok(TelescopeCertificate {
            sumvar,
            operator: RecurrenceOperator::parse(recvar, &self.coefficients)?,
            certificate: parse_ratfun(&self.certificate)?,
        })
    }

    /// Re-parses every field and re-runs the symbolic check. Malformed
    /// documents are errors; a failing identity is `Refuted`.
    pub fn check(&self) -> Result<Status> {
        let f = self.summand()?;
        let cert = self.telescope()?;
        Ok(if verify_certificate(&f, &cert) { Status::Verified } else { Status::Refuted })
    }

    /// Rebuilds the WZ pair of a `N - 1` document.
    pub fn wz_pair(&self) -> Result<WzPair> {
        let cert = self.telescope()?;
        let f = self.summand()?;
        let unit = RecurrenceOperator::parse(cert.recvar().clone(), &["-1", "1"])?;
        if cert.operator != unit {
            return Err(Error::NotWz(format!("operator {} is not N - 1", cert.operator)));
        }
        let g = f.mul_ratfun(&cert.certificate)?.absorb_linear_factors();
        Ok(WzPair {
            n: cert.recvar().clone(),
            k: cert.sumvar.clone(),
            f,
            g,
            certificate: cert.certificate,
        })
    }
}

fn parse_symbol(text: &str) -> Result<Symbol> {
    let mut chars = text.chars();
    let valid = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(text, "N" | "K");
    if valid {
        Ok(Symbol::new(text))
    } else {
        Err(Error::Document(format!("{:?} is not a variable name", text)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wz::make_wz_pair;
    use crate::zeilberger::{creative_telescope, DEFAULT_MAX_ORDER};

    fn t(s: &str) -> HypergeometricTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn telescope_round_trip() {
        let f = t("binomial(n,k)*binomial(b,k)");
        let cert = creative_telescope(&f, &Symbol::k(), &Symbol::n(), DEFAULT_MAX_ORDER).unwrap();
        let doc = CertificateDocument::from_telescope(&f, &cert);
        assert_eq!(doc.status, Status::Verified);
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.check().unwrap(), Status::Verified);
        assert_eq!(back.telescope().unwrap(), cert);
    }

    #[test]
    fn wz_round_trip() {
        let (f, nice) = (t("binomial(n,k)"), t("2^n"));
        let pair = make_wz_pair(&f, &nice, &Symbol::n(), &Symbol::k()).unwrap();
        let doc = CertificateDocument::from_wz(&f, &nice, &pair);
        assert_eq!(doc.status, Status::Verified);
        assert_eq!(parse_ratfun(&doc.certificate).unwrap(), parse_ratfun("-k/(2*(n-k+1))").unwrap());
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.wz_pair().unwrap().certificate, pair.certificate);
    }

    #[test]
    fn tampering_is_refuted() {
        let f = t("1/(k!*(n-k)!)");
        let cert = creative_telescope(&f, &Symbol::k(), &Symbol::n(), DEFAULT_MAX_ORDER).unwrap();
        let mut doc = CertificateDocument::from_telescope(&f, &cert);
        doc.certificate = "-k/(n-k+2)".into();
        assert_eq!(doc.check().unwrap(), Status::Refuted);
        doc.coefficients.pop();
        assert!(matches!(doc.check(), Err(Error::Document(_))));
        assert!(CertificateDocument::from_json("{\"input\": 3}").is_err());
    }
}
