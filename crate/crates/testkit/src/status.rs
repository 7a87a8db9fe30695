//! And-or status trees: shape enumeration and from-scratch status
//! computation.

use holboard_core::tptp::SzsStatus;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node(Kind, Vec<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(_, cs) => cs.iter().map(Shape::leaves).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Shape::Leaf => 0,
            Shape::Node(_, cs) => 1 + cs.iter().map(Shape::depth).max().unwrap_or(0),
        }
    }
}

/// The five leaf statuses used by the exhaustive checks.
pub const LEAF_STATUSES: [SzsStatus; 5] = [
    SzsStatus::Theorem,
    SzsStatus::CounterSatisfiable,
    SzsStatus::Timeout,
    SzsStatus::Unknown,
    SzsStatus::Open,
];

const FAILURE_ORDER: [SzsStatus; 5] = [
    SzsStatus::CounterSatisfiable,
    SzsStatus::Unknown,
    SzsStatus::Timeout,
    SzsStatus::GaveUp,
    SzsStatus::Error,
];

fn worst(children: &[SzsStatus]) -> SzsStatus {
    FAILURE_ORDER
        .into_iter()
        .find(|s| children.contains(s))
        .expect("statuses drawn from the failure order")
}

/// Status of an inner node from its children.
pub fn combine(kind: Kind, children: &[SzsStatus]) -> SzsStatus {
    let any = |s| children.contains(&s);
    match kind {
        Kind::Or if any(SzsStatus::Theorem) => SzsStatus::Theorem,
        Kind::And if children.iter().all(|&s| s == SzsStatus::Theorem) => SzsStatus::Theorem,
        Kind::And if any(SzsStatus::CounterSatisfiable) => SzsStatus::CounterSatisfiable,
        _ if any(SzsStatus::Open) => SzsStatus::Open,
        _ => {
            let failures: Vec<SzsStatus> = children.iter().copied().filter(|&s| s != SzsStatus::Theorem).collect();
            worst(&failures)
        }
    }
}

/// Statuses of every node, preorder, given leaf statuses in left-to-right
/// order.
pub fn recompute(shape: &Shape, leaves: &[SzsStatus]) -> Vec<SzsStatus> {
    let mut out = Vec::new();
    let mut next = 0;
    go(shape, leaves, &mut next, &mut out);
    out
}

fn go(shape: &Shape, leaves: &[SzsStatus], next: &mut usize, out: &mut Vec<SzsStatus>) -> SzsStatus {
    match shape {
        Shape::Leaf => {
            let s = leaves[*next];
            *next += 1;
            out.push(s);
            s
        }
        Shape::Node(kind, cs) => {
            let slot = out.len();
            out.push(SzsStatus::Open);
            let statuses: Vec<SzsStatus> = cs.iter().map(|c| go(c, leaves, next, out)).collect();
            let s = combine(*kind, &statuses);
            out[slot] = s;
            s
        }
    }
}

/// All shapes with depth ≤ `depth`, between 2 and `branching` children
/// per inner node and at most `max_leaves` leaves. Unary nodes are left
/// out: they pass their child's status through unchanged.
pub fn shapes(depth: usize, branching: usize, max_leaves: usize) -> Vec<Shape> {
    let mut out = vec![Shape::Leaf];
    if depth == 0 || max_leaves == 0 {
        return out;
    }
    let subs = shapes(depth - 1, branching, max_leaves);
    for n in 2..=branching {
        let mut combos: Vec<Vec<Shape>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for c in &combos {
                let used: usize = c.iter().map(Shape::leaves).sum();
                for s in &subs {
                    if used + s.leaves() <= max_leaves {
                        let mut c2 = c.clone();
                        c2.push(s.clone());
                        next.push(c2);
                    }
                }
            }
            combos = next;
        }
        for c in combos {
            for kind in [Kind::And, Kind::Or] {
                out.push(Shape::Node(kind, c.clone()));
            }
        }
    }
    out
}
