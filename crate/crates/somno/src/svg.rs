//! Self-contained SVG renderings. Every figure has a CSV companion holding
//! the plotted numbers.

use std::fmt::Write;

use somno_core::baselines::BandPowerFeatures;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Maps `t ∈ [0, 1]` from slate blue through amber to red.
pub fn heat_color(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 3] = [
        (0.0, [96.0, 112.0, 150.0]),
        (0.5, [240.0, 180.0, 40.0]),
        (1.0, [210.0, 30.0, 30.0]),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let (lo, hi) = if t <= 0.5 {
        (STOPS[0], STOPS[1])
    } else {
        (STOPS[1], STOPS[2])
    };
    let u = (t - lo.0) / (hi.0 - lo.0);
    let c: Vec<u8> = (0..3)
        .map(|i| (lo.1[i] + u * (hi.1[i] - lo.1[i])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub struct ExplanationFigure<'a> {
    pub title: &'a str,
    pub signal: &'a [f64],
    /// `(panel label, normalized heatmap)` per class.
    pub heatmaps: Vec<(&'a str, &'a [f64])>,
    pub band_powers: Option<BandPowerFeatures>,
}

/// Trace panels colored by heatmap intensity, plus a relative band-power bar
/// chart on the right.
pub fn explanation_svg(fig: &ExplanationFigure) -> String {
    let (w, panel_h, top, left, bar_w) = (960.0, 150.0, 40.0, 50.0, 150.0);
    let plot_w = w - left - bar_w - 40.0;
    let h = top + panel_h * fig.heatmaps.len() as f64 + 30.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="20" font-size="14">{}</text>"#,
        escape(fig.title)
    );
    let n = fig.signal.len();
    let (lo, hi) = fig
        .signal
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x_of = |j: usize| left + plot_w * j as f64 / (n.max(2) - 1) as f64;
    for (p, (label, heat)) in fig.heatmaps.iter().enumerate() {
        let y0 = top + p as f64 * panel_h;
        let y_of = |v: f64| y0 + 10.0 + (panel_h - 30.0) * (1.0 - (v - lo) / span);
        let _ = writeln!(
            s,
            r##"<rect x="{left}" y="{y0}" width="{plot_w}" height="{}" fill="none" stroke="#ccc"/>"##,
            panel_h - 10.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            left + plot_w - 4.0,
            y0 + 14.0,
            escape(label)
        );
        let _ = writeln!(s, r#"<g stroke-width="1.6" stroke-linecap="round">"#);
        for j in 0..n.saturating_sub(1) {
            let t = 0.5 * (heat.get(j).copied().unwrap_or(0.0) + heat.get(j + 1).copied().unwrap_or(0.0));
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}"/>"#,
                x_of(j),
                y_of(fig.signal[j]),
                x_of(j + 1),
                y_of(fig.signal[j + 1]),
                heat_color(t)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">time (s)</text>"#,
        left + plot_w / 2.0,
        h - 8.0
    );
    for sec in 0..=3 {
        let x = left + plot_w * sec as f64 / 3.0;
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{sec}</text>"#,
            h - 22.0
        );
    }
    if let Some(b) = fig.band_powers {
        let x0 = left + plot_w + 40.0;
        let base = top + panel_h * fig.heatmaps.len() as f64 - 20.0;
        let max_h = base - top - 20.0;
        let _ = writeln!(
            s,
            r#"<text x="{x0}" y="{}">relative band power</text>"#,
            top - 6.0
        );
        for (i, (name, v)) in ["δ", "θ", "α", "β"].iter().zip(b.to_array()).enumerate() {
            let bx = x0 + i as f64 * 30.0;
            let bh = max_h * v.clamp(0.0, 1.0);
            let _ = writeln!(
                s,
                r#"<rect x="{bx:.2}" y="{:.2}" width="22" height="{bh:.2}" fill="{}"/>"#,
                base - bh,
                PALETTE[i]
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{name}</text>"#,
                bx + 11.0,
                base + 14.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{v:.2}</text>"#,
                bx + 11.0,
                base - bh - 4.0
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

pub struct Series<'a> {
    pub label: &'a str,
    pub mean: &'a [f64],
    pub stderr: &'a [f64],
}

/// Mean accuracy per epoch with a ±1 standard error band per series.
pub fn accuracy_chart(title: &str, series: &[Series]) -> String {
    let (w, h, left, right, top, bottom) = (720.0, 440.0, 60.0, 170.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let epochs = series.iter().map(|s| s.mean.len()).max().unwrap_or(1).max(1);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        for (m, e) in s.mean.iter().zip(s.stderr) {
            lo = lo.min(m - e);
            hi = hi.max(m + e);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    let lo = ((lo * 20.0).floor() / 20.0).max(0.0);
    let hi = ((hi * 20.0).ceil() / 20.0).min(1.0).max(lo + 0.05);
    let x_of = |e: usize| {
        left + if epochs > 1 {
            pw * (e - 1) as f64 / (epochs - 1) as f64
        } else {
            pw / 2.0
        }
    };
    let y_of = |v: f64| top + ph * (1.0 - (v - lo) / (hi - lo));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="24" font-size="14">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#888"/>"##
    );
    let ticks = ((hi - lo) / 0.05).round() as usize;
    let step = if ticks > 10 { 2 } else { 1 };
    for i in (0..=ticks).step_by(step) {
        let v = lo + 0.05 * i as f64;
        let y = y_of(v);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#eee"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        );
    }
    let xstep = (epochs / 10).max(1);
    for e in (1..=epochs).filter(|e| e % xstep == 0 || *e == 1) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{e}</text>"#,
            x_of(e),
            top + ph + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">epoch</text>"#,
        left + pw / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">mean accuracy</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let upper: Vec<String> = ser
            .mean
            .iter()
            .zip(ser.stderr)
            .enumerate()
            .map(|(k, (m, e))| format!("{:.2},{:.2}", x_of(k + 1), y_of(m + e)))
            .collect();
        let lower: Vec<String> = ser
            .mean
            .iter()
            .zip(ser.stderr)
            .enumerate()
            .rev()
            .map(|(k, (m, e))| format!("{:.2},{:.2}", x_of(k + 1), y_of(m - e)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{} {}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#,
            upper.join(" "),
            lower.join(" ")
        );
        let line: Vec<String> = ser
            .mean
            .iter()
            .enumerate()
            .map(|(k, m)| format!("{:.2},{:.2}", x_of(k + 1), y_of(*m)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            line.join(" ")
        );
        let ly = top + 10.0 + 20.0 * i as f64;
        let lx = left + pw + 16.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}
