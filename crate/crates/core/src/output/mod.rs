//! Trace, SVG and timing-report writers. All output is byte-deterministic.

mod report;
mod svg;
mod trace;

pub use report::write_report;
pub use svg::{render_svg, SvgOptions, MARGIN, PIXELS_PER_METER};
pub use trace::{trace_frames, write_trace, TraceFrame};

/// Fixed-point text without a negative zero.
pub fn fixed(v: f64, places: usize) -> String {
    let s = format!("{v:.places$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => s,
    }
}

/// Heading text in `[0, 360)` after rounding.
pub fn fixed_heading(h: f64, places: usize) -> String {
    let s = fixed(h, places);
    if s.parse::<f64>() == Ok(360.0) {
        fixed(0.0, places)
    } else {
        s
    }
}

/// A number rounded to nine significant digits. Magnitudes below 1e-12 are
/// rounding noise and become zero.
pub fn significant(v: f64) -> f64 {
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    if rounded.abs() < 1e-12 {
        0.0
    } else {
        rounded
    }
}
