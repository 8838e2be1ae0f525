//! The explicit datum file format.
//!
//! ```json
//! {
//!   "version": 1,
//!   "name": "GL2",
//!   "rank": 2,
//!   "roots": [[1, -1], [-1, 1]],
//!   "coroots": [[1, -1], [-1, 1]],
//!   "simple": [0],
//!   "lattice_basis": [[1, 0], [0, 1]]
//! }
//! ```
//!
//! Roots and coroots are written in an ambient basis of `Z^rank`. The optional
//! `lattice_basis` lists generators of `X` in that basis (one row each);
//! omitted, `X` is the ambient lattice itself. Elements are then written in
//! coordinates with respect to `lattice_basis`.

use serde::{Deserialize, Serialize};

use super::RootDatum;
use crate::error::{Error, Result};
use crate::linalg::{dot, solve_square, to_rat, Rat};

pub const EXPLICIT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDatum {
    #[serde(default)]
    pub version: Option<u32>,
    #[serde(default)]
    pub name: Option<String>,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub simple: Vec<usize>,
    #[serde(default)]
    pub lattice_basis: Option<Vec<Vec<i64>>>,
}

impl ExplicitDatum {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("datum file: {e}")))
    }

    pub fn build(&self) -> Result<RootDatum> {
        if let Some(v) = self.version {
            if v != EXPLICIT_FORMAT_VERSION {
                return Err(Error::Parse(format!(
                    "unsupported datum format version {v}"
                )));
            }
        }
        let n = self.rank;
        if self.roots.iter().chain(&self.coroots).any(|v| v.len() != n) {
            return Err(Error::Parse(format!(
                "rank mismatch: every root and coroot must have {n} coordinates"
            )));
        }
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        let Some(basis) = &self.lattice_basis else {
            return RootDatum::from_parts(
                &name,
                n,
                self.roots.clone(),
                self.coroots.clone(),
                self.simple.clone(),
            );
        };
        if basis.len() != n || basis.iter().any(|b| b.len() != n) {
            return Err(Error::Parse(format!(
                "lattice_basis must be {n} vectors of length {n}"
            )));
        }
        // Column k of `bt` is basis vector k, so `bt · c = x` expresses x in the basis.
        let bt: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|k| Rat::from_integer(basis[k][i])).collect())
            .collect();
        let mut coroots = Vec::with_capacity(self.coroots.len());
        for c in &self.coroots {
            let coords = solve_square(&bt, &to_rat(c))
                .ok_or_else(|| Error::InvalidDatum("lattice_basis is singular".into()))?;
            if coords.iter().any(|x| !x.is_integer()) {
                return Err(Error::InvalidDatum(format!(
                    "lattice does not contain the coroot {c:?}"
                )));
            }
            coroots.push(coords.iter().map(|x| x.to_integer()).collect());
        }
        let roots = self
            .roots
            .iter()
            .map(|a| basis.iter().map(|b| dot(b, a)).collect())
            .collect();
        RootDatum::from_parts(&name, n, roots, coroots, self.simple.clone())
    }
}
