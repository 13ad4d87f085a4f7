use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::projgeom::Point2;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct SvgPolyline {
    pub class: String,
    pub stroke: String,
    pub points: Vec<Point2>,
}

/// A figure in world coordinates. Polylines and markers are written inside
/// a `scale(1,-1)` group so the y-axis points up and coordinates round-trip
/// unchanged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SvgDocument {
    pub title: String,
    pub metadata: Vec<String>,
    pub polylines: Vec<SvgPolyline>,
    pub markers: Vec<Point2>,
    pub pixel_width: u32,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"").replace("&gt;", ">").replace("&lt;", "<").replace("&amp;", "&")
}

impl SvgDocument {
    pub fn new(title: impl Into<String>) -> Self {
        SvgDocument { title: title.into(), pixel_width: 800, ..Default::default() }
    }

    /// Adds a polyline, colored by its position in the palette.
    pub fn polyline(&mut self, class: impl Into<String>, points: Vec<Point2>) -> &mut Self {
        let stroke = PALETTE[self.polylines.len() % PALETTE.len()].to_string();
        let points = points.into_iter().filter(|p| p.is_finite()).collect();
        self.polylines.push(SvgPolyline { class: class.into(), stroke, points });
        self
    }

    pub fn marker(&mut self, p: Point2) -> &mut Self {
        self.markers.push(p);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.metadata.push(text.into());
        self
    }

    fn bounds(&self) -> (Point2, Point2) {
        let pts = self.polylines.iter().flat_map(|l| l.points.iter()).chain(&self.markers);
        let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(-f64::INFINITY, -f64::INFINITY));
        for p in pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.is_finite() {
            return (Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
        }
        let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        (Point2::new(lo.x - pad, lo.y - pad), Point2::new(hi.x + pad, hi.y + pad))
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bounds();
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let px_w = self.pixel_width.max(1);
        let px_h = ((px_w as f64) * h / w).round().max(1.0) as u32;
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{px_w}\" height=\"{px_h}\" viewBox=\"{} {} {} {}\">",
            lo.x, -hi.y, w, h
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        for m in &self.metadata {
            let _ = writeln!(s, "<metadata>{}</metadata>", escape(m));
        }
        s.push_str("<g transform=\"scale(1,-1)\">\n");
        for l in &self.polylines {
            let pts: Vec<String> = l.points.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
            let _ = writeln!(
                s,
                "<polyline class=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\" points=\"{}\"/>",
                escape(&l.class),
                l.stroke,
                pts.join(" ")
            );
        }
        let radius = 0.006 * w.max(h);
        for m in &self.markers {
            let _ = writeln!(s, "<circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"#000000\"/>", m.x, m.y);
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

fn attr(tag: &str, name: &str) -> Option<String> {
    let key = format!(" {name}=\"");
    let start = tag.find(&key)? + key.len();
    let len = tag[start..].find('"')?;
    Some(unescape(&tag[start..start + len]))
}

fn coord(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad SVG coordinate `{s}`")))
}

fn required(tag: &str, name: &str) -> Result<String> {
    attr(tag, name).ok_or_else(|| Error::Parse(format!("SVG element lacks `{name}`")))
}

/// Reads back documents produced by [`SvgDocument::render`].
pub fn parse_svg(text: &str) -> Result<SvgDocument> {
    if !text.contains("<svg") {
        return Err(Error::Parse("not an SVG document".into()));
    }
    let mut doc = SvgDocument::default();
    let mut rest = text;
    while let Some(open) = rest.find('<') {
        let close = rest[open..].find('>').ok_or_else(|| Error::Parse("unterminated tag".into()))? + open;
        let tag = &rest[open..=close];
        let after = &rest[close + 1..];
        let element_text = |name: &str| -> Result<String> {
            let end = after
                .find(&format!("</{name}>"))
                .ok_or_else(|| Error::Parse(format!("unterminated <{name}>")))?;
            Ok(unescape(&after[..end]))
        };
        if tag.starts_with("<svg") {
            doc.pixel_width = coord(&required(tag, "width")?)? as u32;
        } else if tag.starts_with("<title") {
            doc.title = element_text("title")?;
        } else if tag.starts_with("<metadata") {
            doc.metadata.push(element_text("metadata")?);
        } else if tag.starts_with("<polyline") {
            let points = required(tag, "points")?
                .split_whitespace()
                .map(|pair| {
                    let (x, y) = pair.split_once(',').ok_or_else(|| Error::Parse(format!("bad point `{pair}`")))?;
                    Ok(Point2::new(coord(x)?, coord(y)?))
                })
                .collect::<Result<Vec<_>>>()?;
            doc.polylines.push(SvgPolyline { class: required(tag, "class")?, stroke: required(tag, "stroke")?, points });
        } else if tag.starts_with("<circle") {
            doc.markers.push(Point2::new(coord(&required(tag, "cx")?)?, coord(&required(tag, "cy")?)?));
        }
        rest = after;
    }
    Ok(doc)
}
