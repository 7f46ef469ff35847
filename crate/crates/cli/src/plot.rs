//! Minimal standalone SVG line charts for precision/recall and bound/recall
//! curves.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use leakaudit_core::{bound_curve, AuditConfig, CurvePoint, Mode, ScoreRecord};

pub struct Series {
    pub label: &'static str,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (x_max, y_max) = all.fold((1e-12f64, 1e-12f64), |(a, b), &(x, y)| (a.max(x), b.max(y)));
    let (x_max, y_max) = (x_max.max(1.0), y_max * 1.05);
    let sx = |x: f64| PAD + x / x_max * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - y / y_max * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        svg,
        r#"<path d="M{PAD},{PAD} L{PAD},{b} L{r},{b}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    for i in 0..=4 {
        let fx = x_max * i as f64 / 4.0;
        let fy = y_max * i as f64 / 4.0;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">{fx:.2}</text>"#, sx(fx), H - PAD + 16.0);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{fy:.2}</text>"#, PAD - 6.0, sy(fy) + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#, W / 2.0, H - 14.0, escape(x_label));
    let _ = writeln!(svg, r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#, H / 2.0, H / 2.0, escape(y_label));
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#, s.color, pts.join(" "));
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(svg, r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#, W - PAD - 140.0, s.color, escape(s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn recall_series(curve: &[CurvePoint], f: impl Fn(&CurvePoint) -> f64) -> Vec<(f64, f64)> {
    curve.iter().map(|c| (c.stat.recall, f(c))).collect()
}

/// Write `precision_recall.svg` and `bound_vs_recall.svg` into `dir`.
pub fn write_audit_plots(
    dir: &Path,
    baseline: &[ScoreRecord],
    mia: &[ScoreRecord],
    config: &AuditConfig,
) -> anyhow::Result<()> {
    fs::create_dir_all(dir)?;
    let b = bound_curve(baseline, config, Mode::Baseline)?;
    let a = bound_curve(mia, config, Mode::Mia)?;
    let pr = line_chart(
        "Precision vs recall",
        "recall",
        "precision",
        &[
            Series { label: "baseline", color: "#1f77b4", points: recall_series(&b, |c| c.stat.precision) },
            Series { label: "attack", color: "#d62728", points: recall_series(&a, |c| c.stat.precision) },
        ],
    );
    let bounds = line_chart(
        "Lower bound vs recall",
        "recall",
        "bound",
        &[
            Series { label: "c (baseline)", color: "#1f77b4", points: recall_series(&b, |c| c.bound.value) },
            Series { label: "c + eps (attack)", color: "#d62728", points: recall_series(&a, |c| c.bound.value) },
        ],
    );
    fs::write(dir.join("precision_recall.svg"), pr)?;
    fs::write(dir.join("bound_vs_recall.svg"), bounds)?;
    Ok(())
}
