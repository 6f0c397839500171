//! CSV tables and SVG polygons.

use crate::error::CliError;

/// A rectangular table with a header row.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::validation(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::validation(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// A polygon in counterclockwise order, with approximate coordinates for
/// drawing only.
#[derive(Debug, Clone)]
pub struct Polygon {
    pub title: String,
    pub points: Vec<(f64, f64)>,
}

impl Polygon {
    /// Orders points of a convex polygon counterclockwise around their centroid.
    pub fn convex(title: impl Into<String>, mut points: Vec<(f64, f64)>) -> Self {
        let n = points.len().max(1) as f64;
        let cx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let cy = points.iter().map(|p| p.1).sum::<f64>() / n;
        points.sort_by(|a, b| {
            let ta = (a.1 - cy).atan2(a.0 - cx);
            let tb = (b.1 - cy).atan2(b.0 - cx);
            ta.total_cmp(&tb)
        });
        Polygon { title: title.into(), points }
    }

    pub fn to_svg(&self) -> String {
        const SIZE: f64 = 400.0;
        const PAD: f64 = 30.0;
        let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &(x, y) in &self.points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let k = (SIZE - 2.0 * PAD) / span;
        // y grows upward in the picture
        let map = |(x, y): (f64, f64)| (PAD + (x - x0) * k, SIZE - PAD - (y - y0) * k);
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|&p| {
                let (u, v) = map(p);
                format!("{u:.3},{v:.3}")
            })
            .collect();
        let (ox, oy) = map((x0, y0));
        let mut s = String::new();
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
        ));
        s.push_str(&format!("  <title>{}</title>\n", escape(&self.title)));
        s.push_str(&format!(
            "  <line x1=\"{ox:.3}\" y1=\"{oy:.3}\" x2=\"{:.3}\" y2=\"{oy:.3}\" stroke=\"#888\"/>\n",
            SIZE - PAD / 2.0
        ));
        s.push_str(&format!("  <line x1=\"{ox:.3}\" y1=\"{oy:.3}\" x2=\"{ox:.3}\" y2=\"{:.3}\" stroke=\"#888\"/>\n", PAD / 2.0));
        s.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"#08519c\" stroke-width=\"2\"/>\n",
            pts.join(" ")
        ));
        for p in &self.points {
            let (u, v) = map(*p);
            s.push_str(&format!("  <circle cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"3\" fill=\"#08519c\"/>\n"));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
