/// How a movement starts or ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Marker {
    #[default]
    Normal,
    /// `!`: as fast as possible / as late and hard as possible.
    Hard,
    /// `=`: keep the speed across the instruction boundary.
    Carry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Increase,
    Decrease,
    Hold,
    /// Full brake followed by a full launch.
    Jump,
}

/// A parsed control string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ControlSpec {
    pub entry: Marker,
    pub exit: Marker,
    pub actions: Vec<Action>,
    /// Number of equal time slots the movement is divided into: one per character.
    pub slots: usize,
}

fn marker(c: char) -> Option<Marker> {
    match c {
        '!' => Some(Marker::Hard),
        '=' => Some(Marker::Carry),
        _ => None,
    }
}

fn action(c: char) -> Action {
    match c {
        '+' => Action::Increase,
        '-' => Action::Decrease,
        '!' => Action::Jump,
        _ => Action::Hold,
    }
}

/// Splits a control string into entry marker, interior actions and exit marker.
///
/// Every character is legal. The empty string is the default movement.
pub fn parse_control_string(s: &str) -> ControlSpec {
    let chars: Vec<char> = s.chars().collect();
    match chars.as_slice() {
        [] => ControlSpec::default(),
        [c] if marker(*c).is_some() => {
            let m = marker(*c).unwrap_or_default();
            ControlSpec {
                entry: m,
                exit: m,
                actions: Vec::new(),
                slots: 2,
            }
        }
        _ => {
            let mut body = chars.as_slice();
            let mut entry = Marker::Normal;
            let mut exit = Marker::Normal;
            if let Some(m) = body.first().and_then(|c| marker(*c)) {
                entry = m;
                body = &body[1..];
            }
            if let Some(m) = body.last().and_then(|c| marker(*c)) {
                exit = m;
                body = &body[..body.len() - 1];
            }
            ControlSpec {
                entry,
                exit,
                actions: body.iter().copied().map(action).collect(),
                slots: chars.len(),
            }
        }
    }
}
