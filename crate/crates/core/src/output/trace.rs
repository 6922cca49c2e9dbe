use std::io::{self, Write};

use super::significant;
use crate::scene::sample_times;
use crate::scheduler::Timeline;

/// One sampled robot state.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFrame {
    pub t: f64,
    pub robot: String,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub v: f64,
}

/// Samples every robot at multiples of `dt` and at every action boundary,
/// ordered by time and then robot name.
///
/// Panics if `dt` is not positive.
pub fn trace_frames(timeline: &Timeline, dt: f64) -> Vec<TraceFrame> {
    assert!(dt > 0.0 && dt.is_finite(), "sampling step must be positive");
    let mut tracks: Vec<_> = timeline.tracks().iter().collect();
    tracks.sort_by(|a, b| a.name().cmp(b.name()));
    let times = sample_times(timeline, dt);
    let mut frames = Vec::with_capacity(times.len() * tracks.len());
    for &t in &times {
        for track in &tracks {
            let sample = track.pose_at(t);
            frames.push(TraceFrame {
                t,
                robot: track.name().to_owned(),
                x: sample.pose.x,
                y: sample.pose.y,
                heading: sample.pose.heading,
                v: sample.speed,
            });
        }
    }
    frames
}

fn heading(h: f64) -> f64 {
    let h = significant(h);
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

/// Writes one JSON object per frame and line. Returns the number of frames.
pub fn write_trace(timeline: &Timeline, dt: f64, sink: &mut dyn Write) -> io::Result<usize> {
    let frames = trace_frames(timeline, dt);
    for f in &frames {
        let robot = serde_json::to_string(&f.robot).map_err(io::Error::other)?;
        writeln!(
            sink,
            "{{\"t\":{},\"robot\":{},\"x\":{},\"y\":{},\"heading\":{},\"v\":{}}}",
            significant(f.t),
            robot,
            significant(f.x),
            significant(f.y),
            heading(f.heading),
            significant(f.v)
        )?;
    }
    Ok(frames.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::frontend::compile;
    use crate::geometry::{sample_path, PathSegment, Pose, Side, Travel};
    use crate::scheduler::schedule;

    fn timeline(body: &str) -> Timeline {
        let src = format!(
            "sceneWidth = 10; sceneDepth = 5;
            robot nille = robot(\"Nille\", color(255,128,128));
            robot frederik = robot(\"Frederik\", color(128,128,255));
            {body}"
        );
        schedule(&compile(&src).unwrap(), &Config::default()).unwrap()
    }

    #[test]
    fn wait_frames() {
        let tl = timeline("initialPose(nille, 0, 1, north); wait(nille, 2);");
        let mut out = Vec::new();
        assert_eq!(write_trace(&tl, 0.5, &mut out).unwrap(), 5);
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], r#"{"t":0,"robot":"nille","x":0,"y":1,"heading":0,"v":0}"#);
        assert_eq!(lines[4], r#"{"t":2,"robot":"nille","x":0,"y":1,"heading":0,"v":0}"#);
        for line in lines {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v.as_object().unwrap().len(), 6);
        }
    }

    #[test]
    fn two_robot_count_and_order() {
        let tl = timeline(
            "initialPose(nille, 0, 1, north); initialPose(frederik, 1, 1, north); wait(nille, 1); wait(frederik, 1);",
        );
        let frames = trace_frames(&tl, 0.5);
        assert_eq!(frames.len(), 6);
        assert_eq!(frames[0].robot, "frederik");
        assert_eq!(frames[1].robot, "nille");
    }

    #[test]
    fn arc_frames_follow_the_path() {
        let tl = timeline("initialPose(nille, 0, 1, north); circleRight(nille, 1, 90);");
        let arc = PathSegment::arc(Pose::new(0.0, 1.0, 0.0), 1.0, 90.0, Side::Right, Travel::Forward).unwrap();
        let action = &tl.tracks()[0].actions()[1];
        for f in trace_frames(&tl, 0.05) {
            let s = action.profile.distance_at(f.t - action.start);
            let expected = sample_path(&[arc], s).unwrap();
            assert!(
                (f.x - expected.x).abs() <= 1e-9 && (f.y - expected.y).abs() <= 1e-9,
                "{f:?}"
            );
        }
    }
}
