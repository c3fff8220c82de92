//! Minimal static SVG emission: line plots and heatmaps.
//!
//! The command runner optionally renders its CSV artifacts as
//! self-contained SVG files — gain profiles and compression curves as
//! line plots, response surfaces and gain-versus-position maps as
//! heatmaps. The emitter is deliberately small: fixed canvas, linear
//! axes with five evenly spaced ticks, a qualitative color palette for
//! series and a perceptually ordered dark-to-bright ramp for matrices.
//! Non-finite samples break a polyline rather than being drawn, and
//! missing matrix cells (NaN) render as transparent.
//!
//! Nothing here feeds back into the numerics; plots are a presentation
//! convenience and carry no round-trip guarantee (unlike the CSV/JSON
//! artifacts in [`crate::io`]).

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 96.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

/// One labeled line series.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Finite min/max over an iterator, padded if degenerate.
fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 1.0, hi + 1.0);
    }
    (lo, hi)
}

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Axes, ticks, and labels for a plot area mapping data bounds to pixels.
fn axes_svg(x_label: &str, y_label: &str, xb: (f64, f64), yb: (f64, f64)) -> String {
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let mut s = String::new();
    writeln!(
        s,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    )
    .unwrap();
    for i in 0..5 {
        let t = i as f64 / 4.0;
        let px = x0 + t * (x1 - x0);
        let py = y0 - t * (y0 - y1);
        let xv = xb.0 + t * (xb.1 - xb.0);
        let yv = yb.0 + t * (yb.1 - yb.0);
        writeln!(
            s,
            "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>",
            y0 + 5.0
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"11\">{}</text>",
            y0 + 18.0,
            fmt_tick(xv)
        )
        .unwrap();
        writeln!(
            s,
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"black\"/>",
            x0 - 5.0
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"11\">{}</text>",
            x0 - 8.0,
            py + 4.0,
            fmt_tick(yv)
        )
        .unwrap();
    }
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 14.0,
        xml_escape(x_label)
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\" transform=\"rotate(-90 18 {})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        xml_escape(y_label)
    )
    .unwrap();
    s
}

/// Render labeled series as polylines with axes and a legend.
pub fn line_plot(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series<'_>],
) -> Result<()> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::InvalidParameter(
            "line plot needs at least one non-empty series".into(),
        ));
    }
    let xb = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let yb = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let to_px = |x: f64| x0 + (x - xb.0) / (xb.1 - xb.0) * (x1 - x0);
    let to_py = |y: f64| y0 - (y - yb.0) / (yb.1 - yb.0) * (y0 - y1);

    let mut s = svg_header(title);
    s.push_str(&axes_svg(x_label, y_label, xb, yb));
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        // split at non-finite samples so gaps stay gaps
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, s: &mut String| {
            if run.len() >= 2 {
                writeln!(
                    s,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                     stroke-width=\"1.6\"/>",
                    run.join(" ")
                )
                .unwrap();
            }
            run.clear();
        };
        for &(x, y) in ser.points {
            if x.is_finite() && y.is_finite() {
                run.push(format!("{:.2},{:.2}", to_px(x), to_py(y)));
            } else {
                flush(&mut run, &mut s);
            }
        }
        flush(&mut run, &mut s);
        writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" \
             font-size=\"11\">{}</text>",
            x1 + 6.0,
            y1 + 14.0 * k as f64 + 6.0,
            x1 + 24.0,
            y1 + 14.0 * k as f64 + 6.0,
            x1 + 28.0,
            y1 + 14.0 * k as f64 + 10.0,
            xml_escape(ser.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Five-anchor dark-to-bright color ramp (t in [0, 1]).
fn ramp(t: f64) -> String {
    const ANCHORS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (r0, g0, b0) = ANCHORS[i];
    let (r1, g1, b1) = ANCHORS[i + 1];
    format!(
        "#{:02x}{:02x}{:02x}",
        (r0 + f * (r1 - r0)).round() as u8,
        (g0 + f * (g1 - g0)).round() as u8,
        (b0 + f * (b1 - b0)).round() as u8
    )
}

/// Render a matrix (rows indexed by `y`, columns by `x`) as colored
/// cells with a colorbar. NaN cells are left blank.
pub fn heatmap(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    x: &[f64],
    y: &[f64],
    z: &[Vec<f64>],
) -> Result<()> {
    if x.is_empty() || y.is_empty() || z.len() != y.len() || z.iter().any(|r| r.len() != x.len()) {
        return Err(Error::InvalidParameter(
            "heatmap needs a non-empty matrix matching its axes".into(),
        ));
    }
    let zb = bounds(z.iter().flatten().copied());
    let xb = bounds(x.iter().copied());
    let yb = bounds(y.iter().copied());
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let cw = (x1 - x0) / x.len() as f64;
    let ch = (y0 - y1) / y.len() as f64;

    let mut s = svg_header(title);
    for (i, row) in z.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                continue;
            }
            let t = (v - zb.0) / (zb.1 - zb.0);
            writeln!(
                s,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                x0 + j as f64 * cw,
                y0 - (i + 1) as f64 * ch,
                cw + 0.5,
                ch + 0.5,
                ramp(t)
            )
            .unwrap();
        }
    }
    s.push_str(&axes_svg(x_label, y_label, xb, yb));
    // colorbar
    let bar_x = x1 + 24.0;
    let steps = 64;
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        writeln!(
            s,
            "<rect x=\"{bar_x}\" y=\"{:.2}\" width=\"16\" height=\"{:.2}\" fill=\"{}\"/>",
            y0 - (k + 1) as f64 * (y0 - y1) / steps as f64,
            (y0 - y1) / steps as f64 + 0.5,
            ramp(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
        bar_x + 20.0,
        y0 + 4.0,
        fmt_tick(zb.0),
        bar_x + 20.0,
        y1 + 10.0,
        fmt_tick(zb.1)
    )
    .unwrap();
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = Box::leak(Box::new(tempfile::tempdir().unwrap()));
        dir.path().join(name)
    }

    #[test]
    fn line_plot_emits_one_polyline_per_series() {
        let a: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64 * 0.2).sin())).collect();
        let b: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64 * 0.2).cos())).collect();
        let path = tmp("lines.svg");
        line_plot(
            &path,
            "two waves",
            "x",
            "y",
            &[
                Series { label: "sin", points: &a },
                Series { label: "cos", points: &b },
            ],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("<polyline").count(), 2);
        assert!(text.contains("sin") && text.contains("cos"));
    }

    #[test]
    fn non_finite_points_split_the_polyline() {
        let pts = [
            (0.0, 1.0),
            (1.0, 2.0),
            (2.0, f64::NAN),
            (3.0, 1.5),
            (4.0, 1.0),
        ];
        let path = tmp("gap.svg");
        line_plot(&path, "gap", "x", "y", &[Series { label: "g", points: &pts }]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<polyline").count(), 2);
    }

    #[test]
    fn degenerate_inputs_do_not_panic() {
        // single point: padded bounds, no polyline (needs two points)
        let path = tmp("one.svg");
        line_plot(
            &path,
            "one",
            "x",
            "y",
            &[Series { label: "p", points: &[(3.0, 4.0)] }],
        )
        .unwrap();
        assert!(std::fs::read_to_string(&path).unwrap().contains("</svg>"));
        // fully empty input is rejected
        assert!(line_plot(&tmp("none.svg"), "t", "x", "y", &[]).is_err());
    }

    #[test]
    fn heatmap_emits_one_rect_per_finite_cell() {
        let x: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..4).map(|i| i as f64).collect();
        let mut z: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..6).map(|j| (i * 6 + j) as f64).collect())
            .collect();
        z[1][2] = f64::NAN;
        let path = tmp("map.svg");
        heatmap(&path, "m", "x", "y", &x, &y, &z).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        // 23 finite cells + 64 colorbar segments + background + frame
        assert_eq!(text.matches("<rect").count(), 23 + 64 + 2);
        // shape mismatch is rejected
        assert!(heatmap(&tmp("bad.svg"), "m", "x", "y", &x, &y[..2], &z).is_err());
    }

    #[test]
    fn color_ramp_ends_are_anchored() {
        assert_eq!(ramp(0.0), "#440154");
        assert_eq!(ramp(1.0), "#fde725");
        // midpoints interpolate monotonically in brightness
        let brightness = |c: &str| {
            u32::from_str_radix(&c[1..3], 16).unwrap()
                + u32::from_str_radix(&c[3..5], 16).unwrap()
                + u32::from_str_radix(&c[5..7], 16).unwrap()
        };
        let mut prev = brightness(&ramp(0.0));
        for i in 1..=20 {
            let b = brightness(&ramp(i as f64 / 20.0));
            assert!(b >= prev, "ramp got darker at step {i}");
            prev = b;
        }
    }
}
