//! Stroke-only SVG rendering of planar slices.

use std::fmt::Write as _;

use packlab::SliceItem;

/// Margin added around the bounding box of the circles, as a fraction.
const MARGIN: f64 = 0.05;
/// Output width in pixels.
const WIDTH: f64 = 800.0;

fn finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

/// Bounding box `(x0, y0, x1, y1)` of the circles, or of the unit square
/// around the origin when there are none.
fn bounds(items: &[SliceItem]) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for it in items {
        if let SliceItem::Circle { center, radius, .. } = it {
            if !finite(&[center[0], center[1], *radius]) {
                continue;
            }
            b.0 = b.0.min(center[0] - radius);
            b.1 = b.1.min(center[1] - radius);
            b.2 = b.2.max(center[0] + radius);
            b.3 = b.3.max(center[1] + radius);
        }
    }
    if b.0 > b.2 {
        (-1.0, -1.0, 1.0, 1.0)
    } else {
        b
    }
}

/// Renders circles and lines. The y axis points up in scene units.
pub fn render(items: &[SliceItem]) -> String {
    let (x0, y0, x1, y1) = bounds(items);
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let m = MARGIN * span;
    let (vx, vy, vw, vh) = (x0 - m, -(y1 + m), x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m);
    let floor = span * 5e-4;
    let width = |r: f64| (0.02 * r).clamp(floor, 4.0 * floor);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\" width=\"{WIDTH}\" height=\"{:.0}\">",
        WIDTH * vh / vw
    );
    out.push_str("<g fill=\"none\" stroke=\"black\">\n");
    let reach = 2.0 * (vw + vh);
    let (cx, cy) = (vx + vw / 2.0, -(vy + vh / 2.0));
    for it in items {
        match it {
            SliceItem::Circle { center, radius, .. } => {
                if !finite(&[center[0], center[1], *radius]) {
                    continue;
                }
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{radius:.6}\" stroke-width=\"{:.6}\"/>",
                    center[0],
                    -center[1],
                    width(*radius)
                );
            }
            SliceItem::Line { normal, offset, .. } => {
                if !finite(&[normal[0], normal[1], *offset]) {
                    continue;
                }
                // foot of the perpendicular from the view center
                let t = offset - (normal[0] * cx + normal[1] * cy);
                let (px, py) = (cx + t * normal[0], cy + t * normal[1]);
                let (dx, dy) = (-normal[1] * reach, normal[0] * reach);
                let _ = writeln!(
                    out,
                    "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke-width=\"{:.6}\"/>",
                    px - dx,
                    -(py - dy),
                    px + dx,
                    -(py + dy),
                    floor
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_circles_with_margin() {
        let items = vec![SliceItem::Circle {
            index: 0,
            center: [1.0, 2.0],
            radius: 1.0,
            curvature: 1.0,
        }];
        let s = render(&items);
        assert!(s.contains("viewBox=\"-0.100000 -3.100000 2.200000 2.200000\""));
        assert!(s.contains("<circle cx=\"1.000000\" cy=\"-2.000000\" r=\"1.000000\""));
    }

    #[test]
    fn skips_non_finite() {
        let items = vec![SliceItem::Circle {
            index: 0,
            center: [f64::NAN, 0.0],
            radius: 1.0,
            curvature: 1.0,
        }];
        assert!(!render(&items).contains("<circle"));
    }
}
