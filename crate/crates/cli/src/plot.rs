//! Minimal self-contained SVG line plots (one polyline per series).

use std::io::{self, Write};
use std::path::Path;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 70.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub fn write_line_plot(
    path: &Path,
    title: &str,
    series: &[(&str, Vec<(f64, f64)>)],
) -> io::Result<()> {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || !ymin.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if xmax == xmin {
        xmax = xmin + 1.0;
    }
    if ymax == ymin {
        // flat series: pad so the line sits mid-plot
        let pad = ymin.abs().max(1.0) * 1e-3;
        ymin -= pad;
        ymax += pad;
    }
    let sx = (WIDTH - 2.0 * MARGIN) / (xmax - xmin);
    let sy = (HEIGHT - 2.0 * MARGIN) / (ymax - ymin);
    let to_px = |x: f64, y: f64| {
        (
            MARGIN + (x - xmin) * sx,
            HEIGHT - MARGIN - (y - ymin) * sy,
        )
    };

    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        f,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(f, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(
        f,
        r#"<text x="{}" y="30" font-family="monospace" font-size="18" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    )?;
    // frame
    writeln!(
        f,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )?;
    // axis extrema labels
    writeln!(
        f,
        r#"<text x="{MARGIN}" y="{}" font-family="monospace" font-size="12">{xmin:.3e}</text>"#,
        HEIGHT - MARGIN + 20.0
    )?;
    writeln!(
        f,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="end">{xmax:.3e}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 20.0
    )?;
    writeln!(
        f,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="end">{ymin:.6e}</text>"#,
        MARGIN - 5.0,
        HEIGHT - MARGIN
    )?;
    writeln!(
        f,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="end">{ymax:.6e}</text>"#,
        MARGIN - 5.0,
        MARGIN + 12.0
    )?;
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = pts
            .iter()
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        writeln!(
            f,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        )?;
        writeln!(
            f,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="12" fill="{color}">{name}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 18.0 * (i + 1) as f64
        )?;
    }
    writeln!(f, "</svg>")?;
    f.flush()
}
