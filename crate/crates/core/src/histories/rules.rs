//! The rules carrying footprints one level up, from the copies made by a
//! step to the vertex they were split from.

use super::index::Stages;
use super::{EdgeType, Footprint, HistoryNode, StageVertex};
use crate::surgery::StepKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// The passage is forwarded to the parent unchanged.
    Vacancy,
    /// Both edges are new copies of a duplicated object; nothing goes up.
    Elementary,
    /// One edge is a new path copy: the passage is half of a path endpoint.
    SingleExtremity,
    /// No new edge, but the passage crosses from one merged face to the
    /// other: an endpoint of a single-vertex path.
    DoubleExtremity,
    /// Both edges are copies of a doubled cycle.
    CrossCap,
}

/// Footprint without its walk position.
pub type Shape = (StageVertex, StageVertex, EdgeType, EdgeType);

/// Which rule a footprint of a stage-`level` vertex falls under.
pub fn classify(st: &Stages<'_>, level: usize, f: &Footprint) -> Result<RuleKind, &'static str> {
    let (kind, _) = st.step(level).ok_or("footprint above the first step")?;
    let new = |t: EdgeType| t.created(&st.params) == Some(level);
    Ok(match (new(f.type_in), new(f.type_out)) {
        (true, true) if kind == StepKind::CycleDouble => RuleKind::CrossCap,
        (true, true) => RuleKind::Elementary,
        (true, false) | (false, true) if kind == StepKind::PathDup => RuleKind::SingleExtremity,
        (true, false) | (false, true) => return Err("half-new passage outside a path step"),
        (false, false) => {
            let p = &st.params;
            let faces = (f.type_in.face_at(p, level - 1), f.type_out.face_at(p, level - 1));
            if kind == StepKind::PathDup && faces.0 != faces.1 {
                RuleKind::DoubleExtremity
            } else {
                RuleKind::Vacancy
            }
        }
    })
}

/// The pair consumed at a split vertex: the passages through its primed and
/// double-primed copies.
#[derive(Clone, Copy, Debug)]
pub struct Consumed {
    pub rule: RuleKind,
    pub first: Footprint,
    pub second: Footprint,
}

/// Footprints the rules put on `y` from the
/// footprints of its children, and the pair consumed if `y` is split.
pub fn produce(st: &Stages<'_>, y: &HistoryNode) -> Result<(Vec<Shape>, Option<Consumed>), &'static str> {
    let level = y.level + 1;
    let (kind, index) = st.step(level).ok_or("children below the last step")?;
    let par = |x: StageVertex| st.parent(level, x).ok_or("footprint neighbor has no parent");
    let mut out = Vec::new();
    let mut special: [Vec<(Footprint, RuleKind)>; 2] = [Vec::new(), Vec::new()];
    for (side, c) in y.children.iter().enumerate() {
        for f in &c.footprints {
            match classify(st, level, f)? {
                RuleKind::Vacancy => out.push((par(f.pred)?, par(f.succ)?, f.type_in, f.type_out)),
                rule => special[side].push((*f, rule)),
            }
        }
    }
    if !y.is_split() {
        return if special[0].is_empty() { Ok((out, None)) } else { Err("new passage at an unsplit vertex") };
    }
    let ([(f1, r1)], [(f2, r2)]) = (special[0].as_slice(), special[1].as_slice()) else {
        return Err("split vertex without exactly one consumed pair");
    };
    let (f1, f2, r1, r2) = (*f1, *f2, *r1, *r2);
    if r1 != r2 {
        return Err("copies of a split vertex follow different rules");
    }
    let left = EdgeType::of_copy(kind, index, false);
    let right = EdgeType::of_copy(kind, index, true);
    match r1 {
        RuleKind::Elementary => {
            let typed = f1.type_in == left && f1.type_out == left && f2.type_in == right && f2.type_out == right;
            if !typed || par(f1.pred)? != par(f2.succ)? || par(f1.succ)? != par(f2.pred)? {
                return Err("copies of a duplicated object are not mirror images");
            }
        }
        RuleKind::CrossCap => {
            if par(f1.pred)? != par(f2.pred)? || par(f1.succ)? != par(f2.succ)? {
                return Err("copies of a doubled cycle are not traversed alike");
            }
        }
        RuleKind::SingleExtremity => {
            if f1.type_out == left && f2.type_in == right {
                if par(f1.succ)? != par(f2.pred)? {
                    return Err("path endpoint copies leave along different edges");
                }
                out.push((par(f1.pred)?, par(f2.succ)?, f1.type_in, f2.type_out));
            } else if f1.type_in == left && f2.type_out == right {
                if par(f1.pred)? != par(f2.succ)? {
                    return Err("path endpoint copies arrive along different edges");
                }
                out.push((par(f2.pred)?, par(f1.succ)?, f2.type_in, f1.type_out));
            } else {
                return Err("path endpoint copies do not fit together");
            }
        }
        RuleKind::DoubleExtremity => {
            out.push((par(f1.pred)?, par(f2.succ)?, f1.type_in, f2.type_out));
            out.push((par(f2.pred)?, par(f1.succ)?, f2.type_in, f1.type_out));
        }
        RuleKind::Vacancy => unreachable!("vacancy passages are forwarded above"),
    }
    Ok((out, Some(Consumed { rule: r1, first: f1, second: f2 })))
}

/// Multiset comparison of produced shapes against a node's footprints.
pub fn same_shapes(mut produced: Vec<Shape>, have: &[Footprint]) -> bool {
    let mut have: Vec<Shape> = have.iter().map(Footprint::shape).collect();
    produced.sort_unstable();
    have.sort_unstable();
    produced == have
}
