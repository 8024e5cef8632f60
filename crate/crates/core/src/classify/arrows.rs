//! The implication diagram between the eight conditions.

use super::{ConditionVerdict, Evidence, Status};

/// `(x, y)` means condition `x` implies condition `y`.
pub const ARROWS: &[(u8, u8)] = &[
    (2, 1),
    (3, 2),
    (3, 4),
    (3, 5),
    (5, 3),
    (4, 1),
    (6, 5),
    (6, 7),
    (7, 2),
    (8, 6),
];

/// Extra implications for hypersurfaces in ℂ².
pub const PLANE_ARROWS: &[(u8, u8)] = &[(1, 2), (2, 7), (4, 3), (5, 6)];

/// Implications valid in ℂ^`ambient`.
pub fn arrows(ambient: usize) -> Vec<(u8, u8)> {
    let mut out = ARROWS.to_vec();
    if ambient == 2 {
        out.extend_from_slice(PLANE_ARROWS);
    }
    out
}

fn slot(verdicts: &[ConditionVerdict], c: u8) -> usize {
    verdicts
        .iter()
        .position(|v| v.condition == c)
        .expect("all conditions present")
}

/// Closes the verdicts under the arrows and their contrapositives. Returns the
/// violated arrows (a Proved source with a Refuted target), which indicate a
/// bug or an inconsistent input.
pub fn propagate(verdicts: &mut [ConditionVerdict], arrows: &[(u8, u8)]) -> Vec<(u8, u8)> {
    loop {
        let mut changed = false;
        for &(x, y) in arrows {
            let (ix, iy) = (slot(verdicts, x), slot(verdicts, y));
            let (sx, sy) = (verdicts[ix].status, verdicts[iy].status);
            if sx == Status::Proved && sy == Status::Unknown {
                verdicts[iy].status = Status::Proved;
                verdicts[iy].certificate = Some(Evidence::Implied { from: x, arrow: (x, y) });
                changed = true;
            } else if sy == Status::Refuted && sx == Status::Unknown {
                verdicts[ix].status = Status::Refuted;
                verdicts[ix].certificate = Some(Evidence::Implied { from: y, arrow: (x, y) });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    violations(verdicts, arrows)
}

pub fn violations(verdicts: &[ConditionVerdict], arrows: &[(u8, u8)]) -> Vec<(u8, u8)> {
    arrows
        .iter()
        .copied()
        .filter(|&(x, y)| {
            verdicts[slot(verdicts, x)].status == Status::Proved
                && verdicts[slot(verdicts, y)].status == Status::Refuted
        })
        .collect()
}
