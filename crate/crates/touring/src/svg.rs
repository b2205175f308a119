//! Deterministic SVG 1.1 rendering of planar instances and tours.
//!
//! All coordinates are emitted with fixed precision, so identical inputs
//! always produce byte-identical documents. Regions become `circle`,
//! `rect`, `polygon`, or `line` elements; the tour becomes a single
//! `polyline`; the start and end points are drawn as small square and
//! round markers.

use std::fmt::Write;

use thiserror::Error;

use crate::geom::{Instance, Region, Tour};

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("plotting requires a 2-dimensional instance, got d = {0}")]
    Unsupported(usize),
}

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 32.0;

struct Frame {
    scale: f64,
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn fit(instance: &Instance, tour: Option<&Tour>) -> Frame {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut take = |x: f64, y: f64| {
            lo[0] = lo[0].min(x);
            lo[1] = lo[1].min(y);
            hi[0] = hi[0].max(x);
            hi[1] = hi[1].max(y);
        };
        for p in [&instance.start, &instance.end] {
            take(p.0[0], p.0[1]);
        }
        if let Some(tour) = tour {
            for p in &tour.points {
                take(p.0[0], p.0[1]);
            }
        }
        for (region, _) in &instance.regions {
            for part in region.parts() {
                match part {
                    Region::Ball { center, radius } => {
                        take(center.0[0] - radius, center.0[1] - radius);
                        take(center.0[0] + radius, center.0[1] + radius);
                    }
                    Region::Box { min, max } => {
                        take(min.0[0], min.0[1]);
                        take(max.0[0], max.0[1]);
                    }
                    Region::Polygon { vertices } => {
                        for v in vertices {
                            take(v.0[0], v.0[1]);
                        }
                    }
                    Region::Segment { a, b } => {
                        take(a.0[0], a.0[1]);
                        take(b.0[0], b.0[1]);
                    }
                    Region::Union { .. } => unreachable!("parts() flattens unions"),
                }
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        Frame {
            scale: (CANVAS - 2.0 * MARGIN) / span,
            min_x: lo[0],
            max_y: hi[1],
        }
    }

    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.min_x) * self.scale
    }

    // SVG y grows downward; flip so the drawing matches the usual axes
    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.max_y - y) * self.scale
    }

    fn len(&self, r: f64) -> f64 {
        r * self.scale
    }
}

fn fmt(v: f64) -> String {
    format!("{:.3}", v)
}

fn render_part(out: &mut String, frame: &Frame, part: &Region) {
    match part {
        Region::Ball { center, radius } => {
            writeln!(
                out,
                r##"  <circle cx="{}" cy="{}" r="{}" fill="#dbe9f6" stroke="#3b6ea5" stroke-width="1"/>"##,
                fmt(frame.x(center.0[0])),
                fmt(frame.y(center.0[1])),
                fmt(frame.len(*radius).max(0.5)),
            )
            .unwrap();
        }
        Region::Box { min, max } => {
            writeln!(
                out,
                r##"  <rect x="{}" y="{}" width="{}" height="{}" fill="#dbe9f6" stroke="#3b6ea5" stroke-width="1"/>"##,
                fmt(frame.x(min.0[0])),
                fmt(frame.y(max.0[1])),
                fmt(frame.len(max.0[0] - min.0[0])),
                fmt(frame.len(max.0[1] - min.0[1])),
            )
            .unwrap();
        }
        Region::Polygon { vertices } => {
            let pts: Vec<String> = vertices
                .iter()
                .map(|v| format!("{},{}", fmt(frame.x(v.0[0])), fmt(frame.y(v.0[1]))))
                .collect();
            writeln!(
                out,
                r##"  <polygon points="{}" fill="#dbe9f6" stroke="#3b6ea5" stroke-width="1"/>"##,
                pts.join(" "),
            )
            .unwrap();
        }
        Region::Segment { a, b } => {
            writeln!(
                out,
                r##"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#3b6ea5" stroke-width="2"/>"##,
                fmt(frame.x(a.0[0])),
                fmt(frame.y(a.0[1])),
                fmt(frame.x(b.0[0])),
                fmt(frame.y(b.0[1])),
            )
            .unwrap();
        }
        Region::Union { .. } => unreachable!("parts() flattens unions"),
    }
}

/// Render a planar instance, optionally with a tour overlaid.
pub fn render(instance: &Instance, tour: Option<&Tour>) -> Result<String, SvgError> {
    if instance.dimension != 2 {
        return Err(SvgError::Unsupported(instance.dimension));
    }
    let frame = Frame::fit(instance, tour);
    let mut out = String::new();
    writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"##,
    )
    .unwrap();
    writeln!(
        out,
        r##"  <rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>"##
    )
    .unwrap();
    for (region, _) in &instance.regions {
        for part in region.parts() {
            render_part(&mut out, &frame, part);
        }
    }
    if let Some(tour) = tour {
        if !tour.points.is_empty() {
            let pts: Vec<String> = tour
                .points
                .iter()
                .map(|p| format!("{},{}", fmt(frame.x(p.0[0])), fmt(frame.y(p.0[1]))))
                .collect();
            writeln!(
                out,
                r##"  <polyline points="{}" fill="none" stroke="#c03535" stroke-width="2"/>"##,
                pts.join(" "),
            )
            .unwrap();
        }
    }
    // start marker: square; end marker: dot
    writeln!(
        out,
        r##"  <rect x="{}" y="{}" width="8" height="8" fill="#2c8a43"/>"##,
        fmt(frame.x(instance.start.0[0]) - 4.0),
        fmt(frame.y(instance.start.0[1]) - 4.0),
    )
    .unwrap();
    writeln!(
        out,
        r##"  <circle cx="{}" cy="{}" r="5" fill="#7a2c8a"/>"##,
        fmt(frame.x(instance.end.0[0])),
        fmt(frame.y(instance.end.0[1])),
    )
    .unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
