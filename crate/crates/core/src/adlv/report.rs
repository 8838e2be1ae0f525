use serde_json::{json, Value};

use super::{Dim, SigmaClass};
use crate::affine_weyl::AffElt;
use crate::conjugacy::ClassInvariant;
use crate::hecke_cocenter::{cache::poly_to_json, LaurentPoly};
use crate::linalg::fmt_rat;
use crate::root_datum::RootDatum;

/// One class `O` contributing to the dimension formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportTerm {
    pub class_id: String,
    pub len_o: usize,
    pub invariant: ClassInvariant,
    pub deg_f: i64,
    pub f: LaurentPoly,
    /// `½(ℓ(w) + ℓ(O) + deg f) - <ν_b, 2ρ>`.
    pub value: i64,
}

/// Verdict of one route. `dim` is `None` for routes deciding emptiness only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodResult {
    pub nonempty: bool,
    pub dim: Option<Dim>,
    /// Agreement with the class-polynomial result; `None` for that route itself.
    pub agree: Option<bool>,
}

impl MethodResult {
    pub fn new(dim: Dim) -> Self {
        MethodResult {
            nonempty: !dim.is_empty(),
            dim: Some(dim),
            agree: None,
        }
    }

    pub fn nonempty_only(nonempty: bool) -> Self {
        MethodResult {
            nonempty,
            dim: None,
            agree: None,
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "nonempty": self.nonempty });
        if let Some(d) = &self.dim {
            v["dim"] = d.to_json();
        }
        if let Some(a) = self.agree {
            v["agree"] = a.into();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Methods {
    pub dim_degree: MethodResult,
    pub min_length: Option<MethodResult>,
    pub shrunken: Option<MethodResult>,
    pub p_alcove: Option<MethodResult>,
    pub longest_coset: Option<MethodResult>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdlvReport {
    /// Encoding of `w`.
    pub w: String,
    pub b: ClassInvariant,
    pub nonempty: bool,
    pub dim: Dim,
    pub terms: Vec<ReportTerm>,
    pub methods: Methods,
    /// `None` when no closed-form route applied.
    pub agreement: Option<bool>,
}

impl AdlvReport {
    pub(crate) fn new(
        d: &RootDatum,
        w: &AffElt,
        b: &SigmaClass,
        dim: Dim,
        terms: Vec<ReportTerm>,
    ) -> Self {
        AdlvReport {
            w: d.encode(w),
            b: b.invariant.clone(),
            nonempty: !dim.is_empty(),
            dim,
            terms,
            methods: Methods {
                dim_degree: MethodResult::new(dim),
                min_length: None,
                shrunken: None,
                p_alcove: None,
                longest_coset: None,
            },
            agreement: None,
        }
    }

    fn routes_mut(&mut self) -> impl Iterator<Item = &mut MethodResult> {
        let m = &mut self.methods;
        [
            &mut m.min_length,
            &mut m.shrunken,
            &mut m.p_alcove,
            &mut m.longest_coset,
        ]
        .into_iter()
        .flatten()
    }

    /// Fills per-route agreement flags and the overall flag.
    pub(crate) fn settle_agreement(&mut self) {
        let (nonempty, dim) = (self.nonempty, self.dim);
        let mut all = None;
        for r in self.routes_mut() {
            let ok = r.nonempty == nonempty && r.dim.is_none_or(|x| x == dim);
            r.agree = Some(ok);
            all = Some(all.unwrap_or(true) && ok);
        }
        self.agreement = all;
    }

    pub fn to_json(&self) -> Value {
        let opt = |m: &Option<MethodResult>| m.as_ref().map_or(Value::Null, MethodResult::to_json);
        json!({
            "w": self.w,
            "b": {
                "kappa": self.b.kappa.0,
                "nu": self.b.newton.0.iter().map(fmt_rat).collect::<Vec<_>>(),
            },
            "nonempty": self.nonempty,
            "dim": self.dim.to_json(),
            "terms": self.terms.iter().map(|t| json!({
                "class_id": t.class_id,
                "len_O": t.len_o,
                "deg_f": t.deg_f,
                "f": poly_to_json(&t.f),
                "value": t.value,
            })).collect::<Vec<_>>(),
            "methods": {
                "dim_degree": self.methods.dim_degree.to_json(),
                "min_length": opt(&self.methods.min_length),
                "shrunken": opt(&self.methods.shrunken),
                "p_alcove": opt(&self.methods.p_alcove),
                "longest_coset": opt(&self.methods.longest_coset),
            },
            "agreement": self.agreement,
        })
    }

    /// One CSV row; see [`csv_header`]. Terms are joined as
    /// `class_id|len_O|deg_f|value` separated by `;`.
    pub fn csv_row(&self) -> String {
        let kappa = self
            .b
            .kappa
            .0
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let nu = self
            .b
            .newton
            .0
            .iter()
            .map(fmt_rat)
            .collect::<Vec<_>>()
            .join(" ");
        let terms = self
            .terms
            .iter()
            .map(|t| format!("{}|{}|{}|{}", t.class_id, t.len_o, t.deg_f, t.value))
            .collect::<Vec<_>>()
            .join(";");
        let route = |m: &Option<MethodResult>| match m {
            None => String::new(),
            Some(r) => match &r.dim {
                Some(d) => d.to_string(),
                None => r.nonempty.to_string(),
            },
        };
        let agreement = self.agreement.map_or(String::new(), |a| a.to_string());
        [
            csv_field(&self.w),
            csv_field(&kappa),
            csv_field(&nu),
            self.nonempty.to_string(),
            self.dim.to_string(),
            csv_field(&terms),
            route(&self.methods.min_length),
            route(&self.methods.shrunken),
            route(&self.methods.p_alcove),
            route(&self.methods.longest_coset),
            agreement,
        ]
        .join(",")
    }
}

pub fn csv_header() -> &'static str {
    "w,kappa,nu,nonempty,dim,terms,min_length,shrunken,p_alcove,longest_coset,agreement"
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
