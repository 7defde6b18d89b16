//! Deterministic standalone SVG line plots of sweep records.
//!
//! One polyline per chain size present in the input, drawn over plain
//! axes with linear tick labels, plus a dot on each curve at its largest
//! |y| — which marks the derivative peak on dε/dλ plots. All coordinates
//! are formatted with fixed precision, so byte output depends only on the
//! records and the requested columns.

use super::records::{column_value, SweepRecord};
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn px(v: f64) -> String {
    format!("{v:.2}")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() || trimmed == "-" {
        "0".into()
    } else {
        trimmed.into()
    }
}

/// Renders `records` as an SVG line plot of `y_col` against `x_col`.
/// Records whose `y_col` is absent (endpoint derivatives) are skipped;
/// at least two plottable points are required.
pub fn emit_svg(records: &[SweepRecord], x_col: &str, y_col: &str) -> Result<String> {
    if records.len() < 2 {
        return Err(Error::InvalidArgument(
            "an SVG plot needs at least two records".into(),
        ));
    }
    // (n_sites, x, y) triples in input order; sizes in first-seen order,
    // then sorted so the legend is stable.
    let mut sizes: Vec<usize> = Vec::new();
    let mut points: Vec<(usize, f64, f64)> = Vec::new();
    for r in records {
        let x = column_value(r, x_col)?;
        let y = column_value(r, y_col)?;
        if let (Some(x), Some(y)) = (x, y) {
            if !sizes.contains(&r.n_sites) {
                sizes.push(r.n_sites);
            }
            points.push((r.n_sites, x, y));
        }
    }
    sizes.sort_unstable();
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "fewer than two records carry both {x_col:?} and {y_col:?}"
        )));
    }

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(_, x, y) in &points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if x_max - x_min < 1e-300 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    let y_pad = ((y_max - y_min) * 0.05).max(1e-12);
    y_min -= y_pad;
    y_max += y_pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let to_y = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"13\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        px(MARGIN_LEFT),
        px(HEIGHT - MARGIN_BOTTOM),
        px(WIDTH - MARGIN_RIGHT),
        px(HEIGHT - MARGIN_BOTTOM)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        px(MARGIN_LEFT),
        px(MARGIN_TOP),
        px(MARGIN_LEFT),
        px(HEIGHT - MARGIN_BOTTOM)
    ));

    // Ticks and labels.
    const TICKS: usize = 5;
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = x_min + f * (x_max - x_min);
        let xp = to_x(xv);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
            px(xp),
            px(HEIGHT - MARGIN_BOTTOM),
            px(HEIGHT - MARGIN_BOTTOM + 6.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            px(xp),
            px(HEIGHT - MARGIN_BOTTOM + 22.0),
            tick_label(xv)
        ));
        let yv = y_min + f * (y_max - y_min);
        let yp = to_y(yv);
        svg.push_str(&format!(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"black\"/>\n",
            px(yp),
            px(MARGIN_LEFT - 6.0),
            px(MARGIN_LEFT)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            px(MARGIN_LEFT - 10.0),
            px(yp + 4.0),
            tick_label(yv)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        px(MARGIN_LEFT + plot_w / 2.0),
        px(HEIGHT - 12.0),
        x_col
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"start\">{}</text>\n",
        px(8.0),
        px(MARGIN_TOP - 8.0),
        y_col
    ));

    // One polyline and one peak marker per chain size, plus a legend entry.
    for (si, &n) in sizes.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let series: Vec<(f64, f64)> = points
            .iter()
            .filter(|&&(pn, _, _)| pn == n)
            .map(|&(_, x, y)| (x, y))
            .collect();
        let path: Vec<String> = series
            .iter()
            .map(|&(x, y)| format!("{},{}", px(to_x(x)), px(to_y(y))))
            .collect();
        if path.len() >= 2 {
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                color,
                path.join(" ")
            ));
        }
        if let Some(&(x, y)) = series
            .iter()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>\n",
                px(to_x(x)),
                px(to_y(y)),
                color
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{}\">N={}</text>\n",
            px(WIDTH - MARGIN_RIGHT - 80.0),
            px(MARGIN_TOP + 18.0 * (si as f64 + 1.0)),
            color,
            n
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Boundary;

    fn record(n: usize, lambda: f64, deriv: Option<f64>) -> SweepRecord {
        SweepRecord {
            lambda,
            n_sites: n,
            boundary: Boundary::Periodic,
            energy: -(n as f64) - lambda,
            gap: (1.0 - lambda).abs(),
            string_order: 1.0 - lambda / 2.0,
            staggered_corr: lambda / 2.0,
            geo_ent: n as f64 / 2.0 - lambda,
            geo_ent_per_site: 0.5 - lambda / n as f64,
            geo_ent_deriv: deriv,
        }
    }

    #[test]
    fn one_polyline_per_size_with_markers() {
        let records = vec![
            record(8, 0.0, None),
            record(8, 0.5, Some(-0.8)),
            record(8, 1.0, None),
            record(12, 0.0, None),
            record(12, 0.5, Some(-1.2)),
            record(12, 1.0, None),
        ];
        let svg = emit_svg(&records, "lambda", "geo_ent_per_site").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("N=8") && svg.contains("N=12"));
        assert!(svg.contains("geo_ent_per_site"));
    }

    #[test]
    fn derivative_plots_skip_endpoint_rows() {
        let records = vec![
            record(8, 0.0, None),
            record(8, 0.5, Some(-0.8)),
            record(8, 1.0, Some(-1.0)),
            record(8, 1.5, None),
        ];
        let svg = emit_svg(&records, "lambda", "geo_ent_deriv").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        // Two interior points survive, so the polyline has two vertices.
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(line.matches(',').count(), 2);
    }

    #[test]
    fn byte_identical_for_identical_input() {
        let records = vec![record(8, 0.0, None), record(8, 0.5, None)];
        let a = emit_svg(&records, "lambda", "energy").unwrap();
        let b = emit_svg(&records, "lambda", "energy").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_requests() {
        let records = vec![record(8, 0.0, None), record(8, 0.5, None)];
        assert!(emit_svg(&records[..1], "lambda", "energy").is_err());
        assert!(emit_svg(&records, "lambda", "no_such_column").is_err());
    }
}
