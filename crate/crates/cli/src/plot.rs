//! Minimal SVG line charts for acquisition curves.

use std::fmt::Write;

/// A parsed curve TSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFile {
    pub category: String,
    pub threshold: u8,
    pub points: Vec<(usize, usize)>,
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut category = None;
        let mut threshold = None;
        let mut points = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if let Some(header) = line.strip_prefix('#') {
                for kv in header.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("category", v)) => category = Some(v.to_string()),
                        Some(("threshold", v)) => threshold = v.parse().ok(),
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() || line == "words_reviewed\tcount" {
                continue;
            }
            let parsed = line.split_once('\t').and_then(|(x, y)| Some((x.parse().ok()?, y.parse().ok()?)));
            points.push(parsed.ok_or_else(|| format!("line {}: expected words_reviewed<TAB>count", n + 1))?);
        }
        Ok(CurveFile {
            category: category.ok_or("missing `# category=` header")?,
            threshold: threshold.ok_or("missing `threshold=` in header")?,
            points,
        })
    }

    fn label(&self) -> String {
        format!("{} (rating >= {})", self.category, self.threshold)
    }
}

const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 48.0;

fn nice_ceiling(v: usize) -> usize {
    let v = v.max(1);
    let mag = 10usize.pow((v as f64).log10().floor() as u32);
    [1, 2, 5, 10].iter().map(|m| m * mag).find(|&c| c >= v).unwrap_or(10 * mag)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(curves: &[CurveFile], title: Option<&str>) -> String {
    let max_x = nice_ceiling(curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)).max().unwrap_or(1));
    let max_y = nice_ceiling(curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)).max().unwrap_or(1));
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let sx = |x: usize| LEFT + plot_w * x as f64 / max_x as f64;
    let sy = |y: usize| TOP + plot_h * (1.0 - y as f64 / max_y as f64);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    if let Some(t) = title {
        let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(t));
    }
    for i in 0..=5 {
        let (xv, yv) = (max_x * i / 5, max_y * i / 5);
        let (x, y) = (sx(xv), sy(yv));
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#e0e0e0"/>"##, W - RIGHT);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv}</text>"#, LEFT - 6.0, y + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{xv}</text>"#, H - BOTTOM + 16.0);
    }
    let _ = writeln!(
        s,
        r#"<polyline points="{LEFT},{TOP} {LEFT},{} {},{}" fill="none" stroke="black"/>"#,
        H - BOTTOM,
        W - RIGHT,
        H - BOTTOM
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">words reviewed</text>"#,
        LEFT + plot_w / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">words accepted</text>"#,
        TOP + plot_h / 2.0
    );

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = std::iter::once((0, 0))
            .chain(c.points.iter().copied())
            .map(|(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, pts.join(" "));
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly:.1}" x2="{}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            LEFT + 10.0,
            LEFT + 30.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}">{}</text>"#, LEFT + 36.0, ly + 4.0, escape(&c.label()));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TSV: &str = "# category=weapon threshold=4 step=20 run_id=run-1\nwords_reviewed\tcount\n20\t3\n40\t5\n";

    #[test]
    fn parses_curve_files() {
        let c = CurveFile::parse(TSV).unwrap();
        assert_eq!((c.category.as_str(), c.threshold), ("weapon", 4));
        assert_eq!(c.points, [(20, 3), (40, 5)]);
        assert!(CurveFile::parse("20\t3\n").is_err());
        assert!(CurveFile::parse("# category=a threshold=2\n20 3\n").is_err());
    }

    #[test]
    fn axis_maxima_round_up() {
        assert_eq!([0, 1, 3, 7, 10, 11, 45, 200, 201].map(nice_ceiling), [1, 1, 5, 10, 10, 20, 50, 200, 500]);
    }

    #[test]
    fn one_polyline_per_curve() {
        let c = CurveFile::parse(TSV).unwrap();
        let svg = render_svg(&[c.clone(), CurveFile { threshold: 5, ..c }], Some("a < b"));
        assert_eq!(svg.matches("stroke-width=\"2\"/>").count(), 4);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("weapon (rating &gt;= 5)"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
