//! SVG rendering of segmented characters.
//!
//! 512×512 viewport, stroke width 2, sub-units colored in writing order
//! through the cycle black, red, green, blue. Each sub-unit polyline is
//! extended to the first point of its successor so adjacent pieces connect
//! visually.

use crate::ink::Character;
use crate::sue::SegmentationResult;

const VIEW: f64 = 512.0;
const COLORS: [&str; 4] = ["#000000", "#ff0000", "#008000", "#0000ff"];

/// Render a preprocessed character (coordinates in the unit box) with its
/// segmentation. Y is flipped into screen orientation.
pub fn render_svg(c: &Character, results: &[SegmentationResult]) -> String {
    let mut body = String::new();
    let mut color_idx = 0usize;
    for (stroke, r) in c.strokes.iter().zip(results) {
        for u in &r.subunits {
            let color = COLORS[color_idx % COLORS.len()];
            color_idx += 1;
            let end = (u.end + 1).min(stroke.len());
            let coords: Vec<String> = (u.start..=end)
                .map(|i| {
                    let p = stroke.pt(i);
                    format!("{:.2},{:.2}", p.x * VIEW, (1.0 - p.y) * VIEW)
                })
                .collect();
            if coords.len() == 1 {
                // point stroke: draw a dot
                let p = stroke.pt(u.start);
                body.push_str(&format!(
                    "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{}\"/>\n",
                    p.x * VIEW,
                    (1.0 - p.y) * VIEW,
                    color
                ));
            } else {
                body.push_str(&format!(
                    "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n",
                    coords.join(" "),
                    color
                ));
            }
        }
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n{}</svg>\n",
        body
    )
}
