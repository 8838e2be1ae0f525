use std::sync::Arc;

use adlv_core::conjugacy::parse_invariant;
use adlv_core::{AdlvEngine, Error, Result, SigmaClass};

/// Parses `kappa=[..] nu=[..]`, `basic kappa=[..]` or `of <element>`.
pub fn parse_class_spec(e: &AdlvEngine, spec: &str) -> Result<Arc<SigmaClass>> {
    let d = e.datum();
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("of ") {
        return e.sigma_class_of(&d.parse_element(rest)?);
    }
    if let Some(rest) = spec.strip_prefix("basic") {
        let rest = rest.trim();
        if rest.contains("nu=") {
            return Err(Error::Parse("a basic class is named by kappa only".into()));
        }
        let kappa = if rest.is_empty() {
            parse_invariant(d, "")?.kappa
        } else {
            parse_invariant(d, rest)?.kappa
        };
        return e.basic_class(&kappa);
    }
    e.sigma_class_from_invariant(&parse_invariant(d, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use adlv_core::affine_weyl::PiOneElt;
    use adlv_core::{Limits, RootDatum};

    fn engine(name: &str) -> AdlvEngine {
        AdlvEngine::for_datum(
            Arc::new(RootDatum::preset(name).unwrap()),
            Limits::default(),
        )
    }

    #[test]
    fn three_forms_agree() {
        let e = engine("PGL2");
        let a = parse_class_spec(&e, "basic kappa=[1]").unwrap();
        let b = parse_class_spec(&e, "of t[1] s1").unwrap();
        let c = parse_class_spec(&e, "kappa=[1] nu=[0]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.invariant.kappa, PiOneElt(vec![1]));
        let t = parse_class_spec(&e, "kappa=[0] nu=[2]").unwrap();
        assert!(!t.basic);
    }

    #[test]
    fn rejects_bad_specs() {
        let e = engine("SL2");
        assert!(parse_class_spec(&e, "basic kappa=[] nu=[1]").is_err());
        assert!(parse_class_spec(&e, "of t[1,2]").is_err());
        assert!(parse_class_spec(&e, "nu=[1/2]").is_err());
        assert!(parse_class_spec(&e, "bogus").is_err());
    }
}
