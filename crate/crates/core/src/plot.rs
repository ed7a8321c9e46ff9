//! Deterministic SVG scatter plots of coefficient point sets: `c` on the
//! horizontal axis (symmetric about zero), `n` on the vertical axis.

use std::fmt::Write;

use crate::census::PointSet;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: i64 = 4;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn scatter_svg(points: &PointSet, title: &str) -> String {
    let c_max = points
        .iter()
        .map(|p| p.c.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let n_max = points.iter().map(|p| p.n).max().unwrap_or(0).max(1) as f64;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |c: f64| LEFT + (c + c_max) / (2.0 * c_max) * plot_w;
    let y = |n: f64| TOP + plot_h - n / n_max * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // Frame, horizontal c-axis along n = 0, vertical n-axis at c = 0.
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#999"/>"##
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        LEFT,
        y(0.0),
        LEFT + plot_w,
        y(0.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        x(0.0),
        TOP,
        x(0.0),
        TOP + plot_h
    );
    for i in -TICKS..=TICKS {
        let c = (c_max * i as f64 / TICKS as f64).round();
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            x(c),
            TOP + plot_h + 16.0,
            c
        );
    }
    for i in 0..=TICKS {
        let n = (n_max * i as f64 / TICKS as f64).round();
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y(n) + 4.0,
            n
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">c</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">n</text>"#,
        TOP + plot_h / 2.0
    );
    let _ = writeln!(s, r#"<g stroke="none">"#);
    for p in points {
        let fill = if p.c > 0 { "#1f5fbf" } else { "#c0392b" };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.6" fill="{fill}"/>"#,
            x(p.c as f64),
            y(p.n as f64)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
