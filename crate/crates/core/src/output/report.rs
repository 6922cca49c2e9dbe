use super::{fixed, fixed_heading};
use crate::frontend::InstructionStream;
use crate::scheduler::{ActionKind, Timeline};

/// Timing-annotated listing of the script.
///
/// One line per executed action in source order (robots in declaration order
/// within one statement), then the total duration.
pub fn write_report(stream: &InstructionStream, timeline: &Timeline) -> String {
    let mut actions: Vec<_> = timeline.tracks().iter().flat_map(|t| t.actions()).collect();
    actions.sort_by_key(|a| (a.instruction, a.robot));
    let mut out = String::new();
    for a in actions {
        let robot = &stream.robot(a.robot).var;
        let p = a.end_pose;
        out.push_str(&format!(
            "[t={} +{}] {}: {} \u{2192} ({}, {}, {}){}\n",
            fixed(a.start, 3),
            fixed(a.duration(), 3),
            robot,
            stream.instructions[a.instruction].text,
            fixed(p.x, 3),
            fixed(p.y, 3),
            fixed_heading(p.heading, 3),
            if a.kind == ActionKind::Hold { " hold" } else { "" }
        ));
    }
    out.push_str(&format!("total: {} s\n", fixed(timeline.duration(), 3)));
    out
}
