//! Minimal standalone SVG charts. Presentation only.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, xlabel: &str, ylabel: &str, x_ticks: &[(f64, String)], y_ticks: &[(f64, String)]) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN / 2.0, MARGIN);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for (px, label) in x_ticks {
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{y0}" x2="{px:.1}" y2="{}" stroke="black"/><text x="{px:.1}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 4.0,
            y0 + 18.0,
            escape(label)
        );
    }
    for (py, label) in y_ticks {
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.1}" x2="{x0}" y2="{py:.1}" stroke="black"/><text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            py + 4.0,
            escape(label)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn plot_box() -> (f64, f64, f64, f64) {
    (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN / 2.0 - MARGIN, HEIGHT - 2.0 * MARGIN)
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 1e5) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

/// Overlaid step histograms of values in `[0, 1)`, one per series.
pub fn histogram(title: &str, series: &[(String, Vec<f64>)], bins: usize) -> String {
    let bins = bins.max(1);
    let counts: Vec<Vec<usize>> = series
        .iter()
        .map(|(_, values)| {
            let mut c = vec![0usize; bins];
            for v in values {
                let i = ((v * bins as f64) as usize).min(bins - 1);
                c[i] += 1;
            }
            c
        })
        .collect();
    let top = counts.iter().flatten().copied().max().unwrap_or(0).max(1) as f64;
    let (x0, y0, w, h) = plot_box();
    let mut out = String::new();
    header(&mut out, title);
    let x_ticks: Vec<(f64, String)> = (0..=4).map(|i| (x0 + w * i as f64 / 4.0, fmt_tick(i as f64 / 4.0))).collect();
    let y_ticks: Vec<(f64, String)> = (0..=4)
        .map(|i| (y0 - h * i as f64 / 4.0, fmt_tick(top * i as f64 / 4.0)))
        .collect();
    axes(&mut out, "height", "crossings per bin", &x_ticks, &y_ticks);
    for (s, c) in counts.iter().enumerate() {
        let mut path = format!("M{x0:.1},{y0:.1}");
        for (i, &n) in c.iter().enumerate() {
            let xa = x0 + w * i as f64 / bins as f64;
            let xb = x0 + w * (i + 1) as f64 / bins as f64;
            let y = y0 - h * n as f64 / top;
            let _ = write!(path, " L{xa:.1},{y:.1} L{xb:.1},{y:.1}");
        }
        let _ = write!(path, " L{:.1},{y0:.1}", x0 + w);
        let color = PALETTE[s % PALETTE.len()];
        let _ = writeln!(out, r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            x0 + w - 80.0,
            MARGIN + 16.0 * s as f64,
            escape(&series[s].0)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub struct LinePlot<'a> {
    pub title: &'a str,
    pub xlabel: &'a str,
    pub ylabel: &'a str,
    pub log_x: bool,
    pub reference: Option<(f64, &'a str)>,
}

/// Marker-and-line plot of one or more series.
pub fn line_plot(spec: &LinePlot, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let tx = |x: f64| if spec.log_x { x.max(f64::MIN_POSITIVE).log10() } else { x };
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let (mut xmin, mut xmax) = all
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &(x, _)| (a.min(tx(x)), b.max(tx(x))));
    let mut ymin = all.iter().fold(f64::MAX, |a, &(_, y)| a.min(y));
    let mut ymax = all.iter().fold(f64::MIN, |a, &(_, y)| a.max(y));
    if let Some((r, _)) = spec.reference {
        ymin = ymin.min(r);
        ymax = ymax.max(r);
    }
    if all.is_empty() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    if xmax <= xmin {
        xmax = xmin + 1.0;
    }
    ymin = ymin.min(0.0);
    if ymax <= ymin {
        ymax = ymin + 1.0;
    }
    ymax += (ymax - ymin) * 0.05;
    let (x0, y0, w, h) = plot_box();
    let px = |x: f64| x0 + w * (tx(x) - xmin) / (xmax - xmin);
    let py = |y: f64| y0 - h * (y - ymin) / (ymax - ymin);
    let mut out = String::new();
    header(&mut out, spec.title);
    let x_ticks: Vec<(f64, String)> = (0..=4)
        .map(|i| {
            let t = xmin + (xmax - xmin) * i as f64 / 4.0;
            let label = if spec.log_x { fmt_tick(10f64.powf(t)) } else { fmt_tick(t) };
            (x0 + w * i as f64 / 4.0, label)
        })
        .collect();
    let y_ticks: Vec<(f64, String)> = (0..=4)
        .map(|i| {
            let v = ymin + (ymax - ymin) * i as f64 / 4.0;
            (py(v), fmt_tick(v))
        })
        .collect();
    axes(&mut out, spec.xlabel, spec.ylabel, &x_ticks, &y_ticks);
    if let Some((r, label)) = spec.reference {
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#888" stroke-dasharray="5,4"/><text x="{:.1}" y="{:.1}" fill="#888">{}</text>"##,
            x0 + w,
            x0 + 6.0,
            py(r) - 4.0,
            escape(label),
            y = py(r)
        );
    }
    for (s, (name, points)) in series.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let mut sorted = points.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let path: Vec<String> = sorted.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        if !path.is_empty() {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in &sorted {
            let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, px(x), py(y));
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            x0 + w - 120.0,
            MARGIN + 16.0 * s as f64,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}
