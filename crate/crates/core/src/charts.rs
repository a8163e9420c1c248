//! Chart output: TSV (lossless on dimensions, parseable), SVG with cell
//! glyphs and product lines, and a JSON document.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::resolve::{ClassGroup, ExtChart};

pub const TSV_HEADER: &str = "stem\tfiltration\tdim\tlabels";

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("line {line}: {msg}")]
    Tsv { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Glyph {
    SolidDot,
    OpenCircle,
    SolidTriangle,
    OpenTriangle,
    Box,
    Cross,
}

impl Glyph {
    pub fn class_name(self) -> &'static str {
        match self {
            Glyph::SolidDot => "solid-dot",
            Glyph::OpenCircle => "open-circle",
            Glyph::SolidTriangle => "solid-triangle",
            Glyph::OpenTriangle => "open-triangle",
            Glyph::Box => "box",
            Glyph::Cross => "cross",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChartStyle {
    /// Carrying cell label → glyph.
    pub cell_glyphs: BTreeMap<String, Glyph>,
    /// Class-name substrings that override the cell glyph, checked in order.
    pub name_glyphs: Vec<(String, Glyph)>,
    pub fallback: Glyph,
    /// Half-open stem range and inclusive filtration cap; `None` fits the data.
    pub stems: Option<(i32, i32)>,
    pub max_s: Option<usize>,
    pub products: Vec<String>,
    pub unit: u32,
}

impl Default for ChartStyle {
    fn default() -> Self {
        ChartStyle {
            cell_glyphs: BTreeMap::from([
                ("0".to_string(), Glyph::SolidDot),
                ("1".to_string(), Glyph::OpenCircle),
                ("17".to_string(), Glyph::SolidTriangle),
                ("18".to_string(), Glyph::OpenTriangle),
            ]),
            name_glyphs: vec![("h21-root".into(), Glyph::Box), ("inherited".into(), Glyph::Cross)],
            fallback: Glyph::SolidDot,
            stems: None,
            max_s: None,
            products: vec!["h0".into(), "h1".into(), "h2".into()],
            unit: 24,
        }
    }
}

impl ChartStyle {
    pub fn glyph(&self, group: &ClassGroup, i: usize) -> Glyph {
        if let Some(name) = group.names.get(i) {
            if let Some((_, g)) = self.name_glyphs.iter().find(|(k, _)| name.contains(k.as_str())) {
                return *g;
            }
        }
        group
            .cells
            .get(i)
            .and_then(|c| self.cell_glyphs.get(c))
            .copied()
            .unwrap_or(self.fallback)
    }
}

fn labels(g: &ClassGroup) -> String {
    if g.names.iter().any(|n| !n.is_empty()) {
        g.names.join(";")
    } else {
        g.cells.iter().map(|c| format!("cell{c}")).collect::<Vec<_>>().join(";")
    }
}

/// Nonzero groups in `(stem, s)` order.
fn by_stem(chart: &ExtChart) -> Vec<((i32, usize), &ClassGroup)> {
    let mut v: Vec<_> = chart
        .groups
        .iter()
        .filter(|(_, g)| g.dim > 0)
        .map(|(&(s, t), g)| ((t - s as i32, s), g))
        .collect();
    v.sort_by_key(|x| x.0);
    v
}

pub fn render_tsv(chart: &ExtChart) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for ((stem, s), g) in by_stem(chart) {
        let _ = writeln!(out, "{stem}\t{s}\t{}\t{}", g.dim, labels(g));
    }
    out
}

/// Inverse of [`render_tsv`] on dimensions; labels come back as class
/// names (or cell labels for `cellN` entries).
pub fn parse_tsv(text: &str, algebra: &str, descriptor: &str) -> Result<ExtChart, ChartError> {
    let mut chart = ExtChart::empty(algebra, descriptor);
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == TSV_HEADER => {}
        _ => {
            return Err(ChartError::Tsv {
                line: 1,
                msg: "missing header".into(),
            })
        }
    }
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| ChartError::Tsv { line: n + 1, msg: msg.into() };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 {
            return Err(err("expected at least 3 columns"));
        }
        let stem: i32 = cols[0].parse().map_err(|_| err("bad stem"))?;
        let s: usize = cols[1].parse().map_err(|_| err("bad filtration"))?;
        let dim: usize = cols[2].parse().map_err(|_| err("bad dim"))?;
        let entries: Vec<&str> = cols.get(3).map(|l| l.split(';').filter(|x| !x.is_empty()).collect()).unwrap_or_default();
        let (cells, names) = if entries.iter().all(|e| e.starts_with("cell")) {
            (entries.iter().map(|e| e[4..].to_string()).collect(), Vec::new())
        } else {
            (Vec::new(), entries.iter().map(|e| e.to_string()).collect())
        };
        let t = stem + s as i32;
        chart.max_s = chart.max_s.max(s);
        chart.max_t = chart.max_t.max(t);
        chart.groups.insert((s, t), ClassGroup { dim, cells, names });
    }
    Ok(chart)
}

/// Serializable chart: dimensions, provenance and nonzero product entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDocument {
    pub algebra: String,
    pub descriptor: String,
    pub max_s: usize,
    pub max_t: i32,
    pub stems: Option<(i32, i32)>,
    pub cell_labels: Vec<String>,
    pub groups: Vec<GroupEntry>,
    pub products: Vec<ProductEntry>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub stem: i32,
    pub s: usize,
    pub dim: usize,
    pub cells: Vec<String>,
    pub names: Vec<String>,
}

/// `name` sends class `from` at `(stem, s)` to a sum including class `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub name: String,
    pub stem: i32,
    pub s: usize,
    pub from: usize,
    pub to: usize,
}

fn product_edges(chart: &ExtChart, names: &[String]) -> Vec<ProductEntry> {
    let mut out = Vec::new();
    for name in names {
        let Some(p) = chart.products.get(name) else { continue };
        for (&(s, t), m) in &p.maps {
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    if m.get(i, j) {
                        out.push(ProductEntry {
                            name: name.clone(),
                            stem: t - s as i32,
                            s,
                            from: j,
                            to: i,
                        });
                    }
                }
            }
        }
    }
    out
}

pub fn to_document(chart: &ExtChart) -> ChartDocument {
    let names: Vec<String> = chart.products.keys().cloned().collect();
    ChartDocument {
        algebra: chart.algebra.clone(),
        descriptor: chart.descriptor.clone(),
        max_s: chart.max_s,
        max_t: chart.max_t,
        stems: chart.stems,
        cell_labels: chart.cell_labels.clone(),
        groups: by_stem(chart)
            .into_iter()
            .map(|((stem, s), g)| GroupEntry {
                stem,
                s,
                dim: g.dim,
                cells: g.cells.clone(),
                names: g.names.clone(),
            })
            .collect(),
        products: product_edges(chart, &names),
        notes: chart.notes.clone(),
    }
}

pub fn render_json(chart: &ExtChart) -> String {
    serde_json::to_string_pretty(&to_document(chart)).expect("chart serializes")
}

fn glyph_svg(out: &mut String, g: Glyph, x: f64, y: f64, r: f64) {
    let c = g.class_name();
    let _ = match g {
        Glyph::SolidDot => writeln!(out, r#"<circle class="{c}" cx="{x:.1}" cy="{y:.1}" r="{r:.1}" fill="black"/>"#),
        Glyph::OpenCircle => writeln!(out, r#"<circle class="{c}" cx="{x:.1}" cy="{y:.1}" r="{r:.1}" fill="white" stroke="black"/>"#),
        Glyph::SolidTriangle | Glyph::OpenTriangle => {
            let fill = if g == Glyph::SolidTriangle { "black" } else { "white" };
            writeln!(
                out,
                r#"<polygon class="{c}" points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{fill}" stroke="black"/>"#,
                x,
                y - r,
                x - r,
                y + r,
                x + r,
                y + r
            )
        }
        Glyph::Box => writeln!(
            out,
            r#"<rect class="{c}" x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="white" stroke="black"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        Glyph::Cross => writeln!(
            out,
            r#"<path class="{c}" d="M{:.1},{:.1}L{:.1},{:.1}M{:.1},{:.1}L{:.1},{:.1}" stroke="black"/>"#,
            x - r,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r,
            x + r,
            y - r
        ),
    };
}

/// A static SVG with axes `(t−s, s)`. Output depends only on the chart and
/// the style.
pub fn render_svg(chart: &ExtChart, style: &ChartStyle) -> String {
    let groups: Vec<_> = by_stem(chart)
        .into_iter()
        .filter(|((stem, s), _)| style.stems.is_none_or(|(a, b)| *stem >= a && *stem < b) && style.max_s.is_none_or(|m| *s <= m))
        .collect();
    let (lo, hi) = style.stems.unwrap_or_else(|| {
        let a = groups.iter().map(|g| g.0 .0).min().unwrap_or(0);
        let b = groups.iter().map(|g| g.0 .0).max().unwrap_or(0) + 1;
        (a.min(0), b)
    });
    let top = style.max_s.unwrap_or_else(|| groups.iter().map(|g| g.0 .1).max().unwrap_or(0));
    let u = style.unit as f64;
    let margin = 2.0 * u;
    let width = (hi - lo) as f64 * u + 2.0 * margin;
    let height = (top + 1) as f64 * u + 2.0 * margin;
    let pos = |stem: i32, s: usize, i: usize, dim: usize| -> (f64, f64) {
        let spread = u * 0.3;
        let off = if dim > 1 { (i as f64 - (dim - 1) as f64 / 2.0) * spread / (dim - 1) as f64 * 2.0 } else { 0.0 };
        (margin + (stem - lo) as f64 * u + u / 2.0 + off, height - margin - s as f64 * u - u / 2.0)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "<title>{} over {}</title>", xml_escape(&chart.descriptor), xml_escape(&chart.algebra));
    let _ = writeln!(out, r##"<g class="axes" stroke="#ccc">"##);
    for stem in lo..hi {
        let (x, _) = pos(stem, 0, 0, 1);
        if stem % 4 == 0 {
            let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" font-size="10" text-anchor="middle">{stem}</text>"#, height - margin / 2.0);
        }
    }
    for s in 0..=top {
        let (_, y) = pos(lo, s, 0, 1);
        if s % 2 == 0 {
            let _ = writeln!(out, r#"<text x="{:.1}" y="{y:.1}" font-size="10" text-anchor="end">{s}</text>"#, margin / 2.0);
        }
    }
    let _ = writeln!(out, "</g>");

    let dims: BTreeMap<(i32, usize), usize> = groups.iter().map(|(k, g)| (*k, g.dim)).collect();
    let _ = writeln!(out, r#"<g class="products" stroke="black" stroke-width="1">"#);
    for e in product_edges(chart, &style.products) {
        let p = &chart.products[&e.name];
        let (s2, stem2) = (e.s + p.s, e.stem + p.t - p.s as i32);
        let (Some(&d1), Some(&d2)) = (dims.get(&(e.stem, e.s)), dims.get(&(stem2, s2))) else { continue };
        let (x1, y1) = pos(e.stem, e.s, e.from, d1);
        let (x2, y2) = pos(stem2, s2, e.to, d2);
        let _ = writeln!(out, r#"<line class="{}" x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}"/>"#, xml_escape(&e.name));
    }
    let _ = writeln!(out, "</g>");

    for ((stem, s), g) in &groups {
        let _ = writeln!(out, r#"<g class="bidegree" data-stem="{stem}" data-s="{s}" data-dim="{}">"#, g.dim);
        for i in 0..g.dim {
            let (x, y) = pos(*stem, *s, i, g.dim);
            glyph_svg(&mut out, style.glyph(g, i), x, y, u * 0.12);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExtChart {
        let mut c = ExtChart::empty("A(2)", "f2");
        c.max_s = 3;
        c.max_t = 6;
        for s in 0..=3 {
            c.groups.insert((s, s as i32), ClassGroup { dim: 1, cells: vec!["0".into()], names: vec![] });
        }
        c.groups.insert((1, 2), ClassGroup { dim: 1, cells: vec!["0".into()], names: vec!["h1".into()] });
        c.groups.insert((2, 5), ClassGroup { dim: 0, cells: vec![], names: vec![] });
        c
    }

    #[test]
    fn tsv_rows_and_header() {
        assert_eq!(render_tsv(&ExtChart::empty("A(2)", "f2")), format!("{TSV_HEADER}\n"));
        let t = render_tsv(&sample());
        assert_eq!(t.lines().count(), 1 + 5);
        assert!(t.lines().nth(1).unwrap().starts_with("0\t0\t1\t"));
    }

    #[test]
    fn tsv_round_trip() {
        let c = sample();
        let t = render_tsv(&c);
        let back = parse_tsv(&t, "A(2)", "f2").unwrap();
        assert_eq!(render_tsv(&back), t);
        for (&(s, tt), g) in &c.groups {
            assert_eq!(back.dim(s, tt), g.dim);
        }
    }

    #[test]
    fn svg_is_deterministic() {
        let c = sample();
        let a = render_svg(&c, &ChartStyle::default());
        assert_eq!(a, render_svg(&c, &ChartStyle::default()));
        assert_eq!(a.matches(r#"class="bidegree""#).count(), 5);
        assert!(a.starts_with("<svg"));
    }
}
