use std::fmt::Write;

use crate::frontend::RobotDecl;
use crate::geometry::{heading_to_vector, Pose};
use crate::scene::{sample_times, Color, Scene};
use crate::scheduler::Timeline;

pub const PIXELS_PER_METER: f64 = 100.0;
/// Blank border around the scene, pixels.
pub const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Time step for sampling trajectories.
    pub dt: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { dt: 0.02 }
    }
}

struct Canvas {
    half_width: f64,
    depth: f64,
}

impl Canvas {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x + self.half_width) * PIXELS_PER_METER
    }

    /// The audience edge (y = 0) is at the bottom.
    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.depth - y) * PIXELS_PER_METER
    }

    fn point(&self, x: f64, y: f64) -> String {
        format!("{},{}", px(self.x(x)), px(self.y(y)))
    }
}

fn px(v: f64) -> String {
    super::fixed(v, 3)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Triangle pointing along the pose heading, 0.3 m long.
fn triangle(canvas: &Canvas, pose: &Pose) -> String {
    let (dx, dy) = heading_to_vector(pose.heading);
    let (nx, ny) = (dy, -dx);
    let tip = (pose.x + 0.2 * dx, pose.y + 0.2 * dy);
    let back = (pose.x - 0.1 * dx, pose.y - 0.1 * dy);
    [
        tip,
        (back.0 + 0.1 * nx, back.1 + 0.1 * ny),
        (back.0 - 0.1 * nx, back.1 - 0.1 * ny),
    ]
    .iter()
    .map(|&(x, y)| canvas.point(x, y))
    .collect::<Vec<_>>()
    .join(" ")
}

fn color(c: &Color) -> String {
    c.to_string()
}

/// Draws the scene, its furniture and every robot's trajectory as a standalone SVG 1.1 document.
///
/// Scene x maps to `MARGIN + (x + width/2) * PIXELS_PER_METER` and scene y to
/// `MARGIN + (depth - y) * PIXELS_PER_METER`.
pub fn render_svg(scene: &Scene, robots: &[RobotDecl], timeline: &Timeline, options: &SvgOptions) -> String {
    let canvas = Canvas {
        half_width: scene.width() / 2.0,
        depth: scene.depth(),
    };
    let width = scene.width() * PIXELS_PER_METER + 2.0 * MARGIN;
    let height = scene.depth() * PIXELS_PER_METER + 2.0 * MARGIN;
    let mut s = String::new();
    // writing to a String cannot fail
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = px(width),
        h = px(height)
    );
    let _ = writeln!(
        s,
        r#"<rect class="scene" x="{}" y="{}" width="{}" height="{}" fill="white" stroke="black" stroke-width="2"/>"#,
        px(MARGIN),
        px(MARGIN),
        px(scene.width() * PIXELS_PER_METER),
        px(scene.depth() * PIXELS_PER_METER)
    );
    if scene.has_grid() {
        let _ = writeln!(s, r##"<g class="grid" stroke="#cccccc" stroke-width="1">"##);
        let columns = (scene.width() + 1e-9).floor() as usize;
        for k in 0..=columns {
            let x = canvas.x(-canvas.half_width + k as f64);
            let _ = writeln!(
                s,
                r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#,
                px(canvas.y(scene.depth())),
                px(canvas.y(0.0)),
                x = px(x)
            );
        }
        let rows = (scene.depth() + 1e-9).floor() as usize;
        for k in 0..=rows {
            let y = canvas.y(k as f64);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#,
                px(canvas.x(-canvas.half_width)),
                px(canvas.x(canvas.half_width)),
                y = px(y)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    for area in scene.areas() {
        let r = &area.rect;
        let _ = writeln!(
            s,
            r#"<rect class="forbidden" x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="{}"/>"#,
            px(canvas.x(r.min.x)),
            px(canvas.y(r.max.y)),
            px((r.max.x - r.min.x) * PIXELS_PER_METER),
            px((r.max.y - r.min.y) * PIXELS_PER_METER),
            color(&area.color),
            color(&area.color)
        );
        let _ = writeln!(
            s,
            r#"<text class="label" x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            px(canvas.x(r.min.x) + 3.0),
            px(canvas.y(r.max.y) - 3.0),
            escape(&area.name)
        );
    }
    for p in scene.reference_points() {
        let _ = writeln!(
            s,
            r#"<circle class="reference" cx="{}" cy="{}" r="6" fill="{}"/>"#,
            px(canvas.x(p.position.x)),
            px(canvas.y(p.position.y)),
            color(&p.color)
        );
    }
    if !timeline.tracks().is_empty() {
        let times = sample_times(timeline, options.dt);
        for track in timeline.tracks() {
            let decl = &robots[track.robot().index()];
            let stroke = color(&decl.color);
            let mut points: Vec<String> = Vec::with_capacity(times.len());
            for &t in &times {
                let pose = track.pose_at(t).pose;
                let p = canvas.point(pose.x, pose.y);
                if points.last() != Some(&p) {
                    points.push(p);
                }
            }
            let _ = writeln!(s, r#"<g class="robot" id="{}">"#, escape(track.name()));
            let _ = writeln!(
                s,
                r#"<polyline class="trajectory" points="{}" fill="none" stroke="{stroke}" stroke-width="3"/>"#,
                points.join(" ")
            );
            let start = track.initial_pose();
            let end = track.pose_at(timeline.duration()).pose;
            let _ = writeln!(
                s,
                r#"<polygon class="start" points="{}" fill="{stroke}" stroke="black"/>"#,
                triangle(&canvas, &start)
            );
            let _ = writeln!(
                s,
                r#"<polygon class="end" points="{}" fill="{stroke}" stroke="black" stroke-dasharray="2,2"/>"#,
                triangle(&canvas, &end)
            );
            let _ = writeln!(
                s,
                r#"<text class="name" x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
                px(canvas.x(start.x) + 8.0),
                px(canvas.y(start.y) + 16.0),
                escape(&decl.name)
            );
            let _ = writeln!(s, "</g>");
        }
    }
    let _ = writeln!(
        s,
        r#"<text class="audience" x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">audience</text>"#,
        px(canvas.x(0.0)),
        px(canvas.y(0.0) + 25.0)
    );
    s.push_str("</svg>\n");
    s
}
