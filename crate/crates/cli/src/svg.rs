//! Alcove pictures for rank-2 data. Floating point is used only here, for
//! drawing coordinates.

use std::fmt::Write as _;

use adlv_core::adlv::Dim;
use adlv_core::affine_weyl::AffElt;
use adlv_core::linalg::Rat;
use adlv_core::{AdlvReport, Error, Result, RootDatum, SigmaClass};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

fn to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Upper-triangular `L^T` with `G = L L^T`, for the `W`-invariant form
/// `G(x, y) = Σ_α <α, x><α, y>`; maps lattice coordinates to the plane.
fn embedding(d: &RootDatum) -> [[f64; 2]; 2] {
    let mut g = [[0.0; 2]; 2];
    for a in d.roots() {
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] += (a[i] * a[j]) as f64;
            }
        }
    }
    let l00 = g[0][0].sqrt();
    let l10 = g[1][0] / l00;
    let l11 = (g[1][1] - l10 * l10).sqrt();
    [[l00, l10], [0.0, l11]]
}

fn project(m: &[[f64; 2]; 2], x: &[f64]) -> (f64, f64) {
    (
        m[0][0] * x[0] + m[0][1] * x[1],
        m[1][0] * x[0] + m[1][1] * x[1],
    )
}

fn fill(dim: &Dim, max: i64) -> String {
    match dim {
        Dim::NegInfinity => "#f2f2f2".into(),
        Dim::Finite(r) => {
            let t = if max == 0 {
                0.0
            } else {
                to_f64(r) / max as f64
            };
            let light = 85.0 - 45.0 * t;
            format!("hsl(210,70%,{light:.0}%)")
        }
    }
}

/// Draws `w A₀` for every `w`, filled by `dim X_w(b)` and labelled with it;
/// shrunken alcoves are hatched and the base alcove is outlined.
pub fn render(
    d: &RootDatum,
    b: &SigmaClass,
    elements: &[AffElt],
    reports: &[AdlvReport],
) -> Result<String> {
    if d.rank() != 2 || d.semisimple_rank() != 2 {
        return Err(Error::Precondition(
            "svg needs a semisimple datum of rank 2".into(),
        ));
    }
    let m = embedding(d);
    let verts = d.base_alcove_vertices();
    let polys: Vec<Vec<(f64, f64)>> = elements
        .iter()
        .map(|w| {
            verts
                .iter()
                .map(|v| {
                    let p: Vec<f64> = w.act(v).0.iter().map(to_f64).collect();
                    project(&m, &p)
                })
                .collect()
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (x, y) in polys.iter().flatten() {
        x0 = x0.min(*x);
        y0 = y0.min(*y);
        x1 = x1.max(*x);
        y1 = y1.max(*y);
    }
    let scale = (WIDTH - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0).max(1e-9);
    let height = (y1 - y0) * scale + 2.0 * MARGIN;
    // SVG y grows downwards.
    let px = |(x, y): (f64, f64)| {
        (
            MARGIN + (x - x0) * scale,
            height - MARGIN - (y - y0) * scale,
        )
    };
    let max_dim = reports
        .iter()
        .filter_map(|r| match r.dim {
            Dim::Finite(x) => Some(x.to_integer()),
            Dim::NegInfinity => None,
        })
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(
        out,
        "<title>{} X_w(b), b: {}</title>",
        d.name(),
        b.invariant
    )
    .unwrap();
    out.push_str(
        r##"<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" stroke="#555" stroke-width="0.7"/></pattern></defs>
"##,
    );
    let font = (scale * 0.12).clamp(4.0, 14.0);
    for ((w, poly), r) in elements.iter().zip(&polys).zip(reports) {
        let pts: Vec<String> = poly
            .iter()
            .map(|&p| {
                let (x, y) = px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let pts = pts.join(" ");
        let key = d.encode(w);
        writeln!(
            out,
            r##"<polygon points="{pts}" fill="{}" stroke="#333" stroke-width="0.5"><title>{key} dim {}</title></polygon>"##,
            fill(&r.dim, max_dim),
            r.dim
        )
        .unwrap();
        if d.is_shrunken(w) {
            writeln!(
                out,
                r#"<polygon points="{pts}" fill="url(#hatch)" fill-opacity="0.5"/>"#
            )
            .unwrap();
        }
        if w.translation.iter().all(|&c| c == 0) && w.finite.is_identity() {
            writeln!(
                out,
                r##"<polygon points="{pts}" fill="none" stroke="#c00" stroke-width="2"/>"##
            )
            .unwrap();
        }
        if !r.dim.is_empty() {
            let n = poly.len() as f64;
            let c = (
                poly.iter().map(|p| p.0).sum::<f64>() / n,
                poly.iter().map(|p| p.1).sum::<f64>() / n,
            );
            let (x, y) = px(c);
            writeln!(
                out,
                r#"<text x="{x:.2}" y="{y:.2}" font-size="{font:.1}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                r.dim
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
