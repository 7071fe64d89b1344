//! Static SVG 1.1 picture of a representation: one axis with the points `x_n`,
//! the lattice `ηℤ` below it, gap labels, and the deviation curve underneath.

use std::fmt::Write;

use bdl_core::fixedpoint::DelimitedWord;
use bdl_core::GeometricRepresentation;

fn escape(c: char) -> String {
    match c {
        '<' => "&lt;".into(),
        '>' => "&gt;".into(),
        '&' => "&amp;".into(),
        '"' => "&quot;".into(),
        _ => c.to_string(),
    }
}

pub fn render(
    rep: &GeometricRepresentation<f64>,
    word: &DelimitedWord,
    width: f64,
    height: f64,
    per_side: usize,
) -> String {
    let range = rep.index_range();
    let lo = (-(per_side as i64)).max(*range.start());
    let hi = (per_side as i64).min(*range.end());
    let eta = *rep.eta();
    let points: Vec<(i64, f64)> = (lo..=hi).map(|n| (n, *rep.point(n).unwrap())).collect();

    let xmin = points
        .iter()
        .map(|p| p.1)
        .fold(f64::INFINITY, f64::min)
        .min(lo as f64 * eta);
    let xmax = points
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(hi as f64 * eta);
    let margin = 30.0;
    let span = (xmax - xmin).max(f64::MIN_POSITIVE);
    let sx = |x: f64| margin + (x - xmin) / span * (width - 2.0 * margin);

    let axis_y = height * 0.35;
    let curve_top = height * 0.55;
    let curve_bottom = height - margin;
    let max_dev = points
        .iter()
        .map(|&(n, _)| rep.deviation(n).unwrap())
        .fold(0.0, f64::max);
    let sy = |d: f64| {
        if max_dev > 0.0 {
            curve_bottom - d / max_dev * (curve_bottom - curve_top)
        } else {
            curve_bottom
        }
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black" stroke-width="1"/>"#,
        margin,
        width - margin
    );

    // lattice ticks below the axis
    for n in lo..=hi {
        let x = sx(n as f64 * eta);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{axis_y}" x2="{x:.2}" y2="{:.2}" stroke="firebrick" stroke-width="1"/>"#,
            axis_y + 10.0
        );
    }
    // points above the axis, labelled gaps between them
    for w in points.windows(2) {
        let (n, x0) = w[0];
        let x1 = w[1].1;
        if let Some(letter) = word.letter(n) {
            let label = escape(word.alphabet().symbol(letter));
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="serif" font-size="12" text-anchor="middle">{label}</text>"#,
                (sx(x0) + sx(x1)) / 2.0,
                axis_y - 16.0
            );
        }
    }
    for &(n, x) in &points {
        let px = sx(x);
        let colour = if n == 0 { "navy" } else { "steelblue" };
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{axis_y}" stroke="{colour}" stroke-width="2"/>"#,
            axis_y - 10.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{margin}" y="{:.2}" font-family="serif" font-size="12">x_n (blue), ηn (red), η = {eta:.6}</text>"#,
        margin * 0.6
    );

    // deviation curve
    let _ = writeln!(
        out,
        r#"<line x1="{margin}" y1="{curve_bottom:.2}" x2="{:.2}" y2="{curve_bottom:.2}" stroke="gray" stroke-width="0.5"/>"#,
        width - margin
    );
    let path: Vec<String> = points
        .iter()
        .map(|&(n, _)| format!("{:.2},{:.2}", sx(n as f64 * eta), sy(rep.deviation(n).unwrap())))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="darkgreen" stroke-width="1.5"/>"#,
        path.join(" ")
    );
    let _ = writeln!(
        out,
        r#"<text x="{margin}" y="{:.2}" font-family="serif" font-size="12">|x_n - ηn|, max {max_dev:.6}</text>"#,
        curve_top - 6.0
    );
    out.push_str("</svg>\n");
    out
}
