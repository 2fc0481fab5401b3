//! Static SVG plot of one or two rate regions.

use std::fmt::Write;

use crate::docs::RegionEntry;

const SIZE: f64 = 520.0;
const MARGIN: f64 = 70.0;

struct Style {
    stroke: &'static str,
    width: f64,
}

const STYLES: [Style; 2] = [Style { stroke: "#c0392b", width: 3.5 }, Style { stroke: "#1f4e9c", width: 1.2 }];

fn legend_label(e: &RegionEntry) -> String {
    let kind = if e.has_feedback() { "with feedback" } else { "without feedback" };
    format!("C({}) {kind}", e.params)
}

fn tick_step(max: f64) -> f64 {
    [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0].into_iter().find(|s| max / s <= 10.0).unwrap_or(max / 10.0)
}

/// One `<polygon>` per region; the first is drawn thick, the second thin.
pub fn render(entries: &[&RegionEntry]) -> String {
    let xmax = entries.iter().flat_map(|e| e.vertices.iter().map(|v| v.r1.to_f64())).fold(1.0, f64::max);
    let ymax = entries.iter().flat_map(|e| e.vertices.iter().map(|v| v.r2.to_f64())).fold(1.0, f64::max);
    let span = SIZE - 2.0 * MARGIN;
    let x = |r: f64| MARGIN + r / xmax * span;
    let y = |r: f64| SIZE - MARGIN - r / ymax * span;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);

    // axes with integer ticks
    let (x0, y0) = (x(0.0), y(0.0));
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, x(xmax));
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#, y(ymax));
    let mut t = 0.0;
    while t <= xmax + 1e-9 {
        let _ = writeln!(s, r#"<line x1="{0}" y1="{y0}" x2="{0}" y2="{1}" stroke="black"/>"#, x(t), y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{t}</text>"#, x(t), y0 + 18.0);
        t += tick_step(xmax);
    }
    let mut t = 0.0;
    while t <= ymax + 1e-9 {
        let _ = writeln!(s, r#"<line x1="{x0}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#, y(t), x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{t}</text>"#, x0 - 8.0, y(t) + 4.0);
        t += tick_step(ymax);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">R1 [bits/ch.use]</text>"#,
        MARGIN + span / 2.0,
        SIZE - 25.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">R2 [bits/ch.use]</text>"#,
        MARGIN + span / 2.0
    );

    for (k, e) in entries.iter().enumerate() {
        let style = &STYLES[k % STYLES.len()];
        let pts: Vec<String> =
            e.vertices.iter().map(|v| format!("{:.3},{:.3}", x(v.r1.to_f64()), y(v.r2.to_f64()))).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.12" stroke="{}" stroke-width="{}" stroke-linejoin="round"/>"#,
            pts.join(" "),
            style.stroke,
            style.stroke,
            style.width
        );
    }

    for (k, e) in entries.iter().enumerate() {
        let style = &STYLES[k % STYLES.len()];
        let ly = 20.0 + 18.0 * k as f64;
        let lx = SIZE - MARGIN - 190.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="{}"/>"#,
            lx + 24.0,
            style.stroke,
            style.width
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, legend_label(e));
    }
    s.push_str("</svg>\n");
    s
}
