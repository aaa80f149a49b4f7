use std::fmt::Write;

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn legend(out: &mut String, names: &[&str], x: f64, y: f64, size: f64) {
    for (i, name) in names.iter().enumerate() {
        let yy = y + i as f64 * size * 1.4;
        let _ = writeln!(
            out,
            r#"<circle cx="{x}" cy="{yy}" r="{}" fill="{}"/><text x="{}" y="{}" font-size="{size}">{name}</text>"#,
            size * 0.35,
            COLORS[i % COLORS.len()],
            x + size * 0.8,
            yy + size * 0.35
        );
    }
}

/// Points in the unit disk, one colour per series.
pub fn disk(series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut s = String::new();
    s.push_str(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.2 -1.2 2.4 2.4" width="600" height="600">"#);
    s.push('\n');
    s.push_str(r##"<circle cx="0" cy="0" r="1" fill="none" stroke="#000" stroke-width="0.005"/>"##);
    s.push('\n');
    s.push_str(r##"<line x1="-1.1" y1="0" x2="1.1" y2="0" stroke="#bbb" stroke-width="0.003"/><line x1="0" y1="-1.1" x2="0" y2="1.1" stroke="#bbb" stroke-width="0.003"/>"##);
    s.push('\n');
    for (i, (_, pts)) in series.iter().enumerate() {
        let r = 0.018 - 0.004 * i as f64;
        for &(x, y) in pts.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
            let _ =
                writeln!(s, r#"<circle cx="{x:.6}" cy="{:.6}" r="{r:.4}" fill="{}"/>"#, -y, COLORS[i % COLORS.len()]);
        }
    }
    let names: Vec<&str> = series.iter().map(|(n, _)| n.as_str()).collect();
    legend(&mut s, &names, -1.15, -1.1, 0.07);
    s.push_str("</svg>\n");
    s
}

/// `log10` of residuals against `n`.
pub fn residuals(series: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, p)| p.iter().copied())
        .filter(|(x, y)| x.is_finite() && *y > 0.0)
        .map(|(x, y)| (x, y.log10()))
        .collect();
    let bound = |f: fn(&(f64, f64)) -> f64| {
        pts.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (x0, x1) = bound(|p| p.0);
    let (y0, y1) = bound(|p| p.1);
    let (x0, x1) = if x0 < x1 { (x0, x1) } else { (x0 - 1.0, x0 + 1.0) };
    let (y0, y1) = if y0 < y1 { (y0.floor(), y1.ceil()) } else { (y0 - 1.0, y0 + 1.0) };
    let px = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#);
    let _ = writeln!(
        s,
        r##"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="#000"/>"##,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    if pts.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12">n</text>"#, w / 2.0, h - 15.0);
    for d in [y0, y1] {
        let _ = writeln!(s, r#"<text x="5" y="{:.1}" font-size="12">1e{d}</text>"#, py(d) + 4.0);
    }
    for (i, (_, p)) in series.iter().enumerate() {
        let coords: Vec<String> = p
            .iter()
            .filter(|(x, y)| x.is_finite() && *y > 0.0)
            .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y.log10())))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            coords.join(" "),
            COLORS[i % COLORS.len()]
        );
    }
    let names: Vec<&str> = series.iter().map(|(n, _)| n.as_str()).collect();
    legend(&mut s, &names, pad + 10.0, pad + 15.0, 12.0);
    s.push_str("</svg>\n");
    s
}
