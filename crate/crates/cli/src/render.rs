//! Deterministic SVG scatter of sweep results: candidates as dots, the
//! Pareto frontier as ring markers, individual (one-hot) models as labeled
//! crosses, plus optional reference lines. Identical input yields
//! byte-identical SVG.

use std::fmt::Write;

use anyhow::{bail, Result};

/// An individual base model shown as a labeled cross.
#[derive(Debug, Clone)]
pub struct ModelMarker {
    pub name: String,
    pub accuracy: f64,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct ScatterOptions {
    pub width: f64,
    pub height: f64,
    pub x_label: String,
    pub y_label: String,
    /// Horizontal reference line at this gap value.
    pub hline: Option<f64>,
    /// Vertical reference line at this accuracy value.
    pub vline: Option<f64>,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        ScatterOptions {
            width: 640.0,
            height: 480.0,
            x_label: "accuracy".into(),
            y_label: "gap".into(),
            hline: None,
            vline: None,
        }
    }
}

struct Scale {
    min: f64,
    max: f64,
    lo_px: f64,
    hi_px: f64,
}

impl Scale {
    fn new(values: impl Iterator<Item = f64>, lo_px: f64, hi_px: f64) -> Scale {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        // pad 5%, or a fixed margin for a degenerate range
        let span = max - min;
        let pad = if span > 0.0 { span * 0.05 } else { 0.05 };
        min -= pad;
        max += pad;
        Scale {
            min,
            max,
            lo_px,
            hi_px,
        }
    }

    fn px(&self, v: f64) -> f64 {
        self.lo_px + (v - self.min) / (self.max - self.min) * (self.hi_px - self.lo_px)
    }
}

/// Renders the scatter; `candidates` and `frontier` are (accuracy, gap)
/// points. Fails on an empty candidate list.
pub fn render_scatter(
    candidates: &[(f64, f64)],
    frontier: &[(f64, f64)],
    models: &[ModelMarker],
    opts: &ScatterOptions,
) -> Result<String> {
    if candidates.is_empty() {
        bail!("nothing to plot: no candidates");
    }
    let (left, right, top, bottom) = (64.0, opts.width - 16.0, 16.0, opts.height - 48.0);
    let xs = candidates
        .iter()
        .chain(frontier)
        .map(|p| p.0)
        .chain(models.iter().map(|m| m.accuracy))
        .chain(opts.vline);
    let ys = candidates
        .iter()
        .chain(frontier)
        .map(|p| p.1)
        .chain(models.iter().map(|m| m.gap))
        .chain(opts.hline);
    let x = Scale::new(xs, left, right);
    let y = Scale::new(ys, bottom, top); // screen y grows downward

    let mut svg = String::with_capacity(4096 + 64 * candidates.len());
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        opts.width, opts.height
    );

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{bottom:.2}" stroke="black" stroke-width="1"/>"#
    );

    // ticks and labels
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x.min + f * (x.max - x.min);
        let xp = x.px(xv);
        let _ = writeln!(
            svg,
            r#"<line x1="{xp:.2}" y1="{bottom:.2}" x2="{xp:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{xp:.2}" y="{:.2}" font-size="11" text-anchor="middle">{xv:.3}</text>"#,
            bottom + 18.0
        );
        let yv = y.min + f * (y.max - y.min);
        let yp = y.px(yv);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{yp:.2}" x2="{left:.2}" y2="{yp:.2}" stroke="black" stroke-width="1"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{yv:.3}</text>"#,
            left - 8.0,
            yp + 4.0
        );
    }

    // reference lines
    if let Some(h) = opts.hline {
        let yp = y.px(h);
        let _ = writeln!(
            svg,
            r#"<line class="refline" x1="{left:.2}" y1="{yp:.2}" x2="{right:.2}" y2="{yp:.2}" stroke="gray" stroke-width="1" stroke-dasharray="4 3"/>"#
        );
    }
    if let Some(v) = opts.vline {
        let xp = x.px(v);
        let _ = writeln!(
            svg,
            r#"<line class="refline" x1="{xp:.2}" y1="{top:.2}" x2="{xp:.2}" y2="{bottom:.2}" stroke="gray" stroke-width="1" stroke-dasharray="4 3"/>"#
        );
    }

    let _ = writeln!(svg, r##"<g fill="#8ecbff" fill-opacity="0.7">"##);
    for &(acc, gap) in candidates {
        let _ = writeln!(
            svg,
            r#"<circle class="candidate" cx="{:.2}" cy="{:.2}" r="2.5"/>"#,
            x.px(acc),
            y.px(gap)
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r##"<g fill="none" stroke="#444444" stroke-width="1.5">"##
    );
    for &(acc, gap) in frontier {
        let _ = writeln!(
            svg,
            r#"<circle class="frontier" cx="{:.2}" cy="{:.2}" r="5"/>"#,
            x.px(acc),
            y.px(gap)
        );
    }
    let _ = writeln!(svg, "</g>");

    for m in models {
        let (xp, yp) = (x.px(m.accuracy), y.px(m.gap));
        let _ = writeln!(
            svg,
            r##"<path class="model" d="M {:.2} {yp:.2} L {:.2} {yp:.2} M {xp:.2} {:.2} L {xp:.2} {:.2}" stroke="#d62728" stroke-width="2"/>"##,
            xp - 5.0,
            xp + 5.0,
            yp - 5.0,
            yp + 5.0
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-size="11" fill="#d62728">{}</text>"##,
            xp + 7.0,
            yp - 4.0,
            m.name
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        opts.height - 10.0,
        opts.x_label
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        opts.y_label
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
