//! Canonical element encoding `t[c1,...,cr].u[i1,i2,...]` and the
//! whitespace-separated word grammar accepted on the command line.

use super::AffElt;
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

/// Bumped whenever the encoding changes in a way that invalidates caches.
pub const ENCODING_VERSION: u32 = 1;

impl RootDatum {
    /// `t[λ].u[word]`, where `word` is the lexicographically smallest reduced
    /// word of the finite part (letters `1..=n`).
    pub fn encode(&self, w: &AffElt) -> String {
        let t: Vec<String> = w.translation.iter().map(i64::to_string).collect();
        let u: Vec<String> = self
            .reduced_word(&w.finite)
            .iter()
            .map(usize::to_string)
            .collect();
        format!("t[{}].u[{}]", t.join(","), u.join(","))
    }

    /// Parses either a canonical encoding or a product of factors, read left
    /// to right. Factors: `s0`, `s1`, …, `s0_k`, `t[c1,...]`, `u[i1,...]`,
    /// `t[...].u[...]`, `w0`, and `1`.
    pub fn parse_element(&self, text: &str) -> Result<AffElt> {
        parse_element(self, text)
    }
}

pub fn parse_element(d: &RootDatum, text: &str) -> Result<AffElt> {
    let mut out = d.aff_identity();
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    for tok in tokens {
        out = out.mul(&parse_factor(d, &tok)?);
    }
    Ok(out)
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if !(0..=1).contains(&depth) {
            return Err(Error::Parse(format!("unbalanced brackets in {text:?}")));
        }
        if ch.is_whitespace() || ch == '*' || ch == '·' {
            if depth == 0 && !cur.is_empty() {
                tokens.push(std::mem::take(&mut cur));
            }
            continue;
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {text:?}")));
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}

fn parse_list(body: &str) -> Result<Vec<i64>> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(vec![]);
    }
    body.split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {c:?}")))
        })
        .collect()
}

fn bracketed<'a>(tok: &'a str, prefix: &str) -> Option<&'a str> {
    tok.strip_prefix(prefix)?
        .strip_prefix('[')?
        .strip_suffix(']')
}

fn parse_factor(d: &RootDatum, tok: &str) -> Result<AffElt> {
    if tok == "1" || tok == "e" || tok == "id" {
        return Ok(d.aff_identity());
    }
    if tok == "w0" {
        return Ok(AffElt::from_finite(d.longest_element().clone()));
    }
    if let Some(i) = d.affine_simple_by_name(tok) {
        return Ok(d.affine_simples()[i].clone());
    }
    if let Some((t, u)) = tok.split_once("].u[") {
        let t = parse_factor(d, &format!("{t}]"))?;
        let u = parse_factor(d, &format!("u[{u}"))?;
        return Ok(t.mul(&u));
    }
    if let Some(body) = bracketed(tok, "t") {
        let v = parse_list(body)?;
        if v.len() != d.rank() {
            return Err(Error::Parse(format!(
                "translation {tok} has {} coordinates, datum has rank {}",
                v.len(),
                d.rank()
            )));
        }
        return Ok(AffElt::translation(v));
    }
    if let Some(body) = bracketed(tok, "u") {
        let letters = parse_list(body)?;
        if letters.iter().any(|&l| l < 1) {
            return Err(Error::Parse(format!("bad finite word {tok}")));
        }
        let word: Vec<usize> = letters.iter().map(|&l| l as usize).collect();
        return Ok(AffElt::from_finite(d.weyl_from_word(&word)?));
    }
    Err(Error::Parse(format!("unknown generator {tok:?}")))
}
