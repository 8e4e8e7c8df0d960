//! Integer program of tiled QR with TT kernels.
//!
//! Every kernel is a variable holding its completion time (zero when the
//! kernel never runs): `w_i_k_l` updates tile `(i,k)` after the GEQRT of
//! `(i,l)`, `x_i_k` triangularizes `(i,k)`, `y_i_j_k_l` updates tiles
//! `(i,k)` and `(j,k)` after `(i,l)` was zeroed with `(j,l)`, and `z_i_j_k`
//! zeroes `(i,k)` with `(j,k)`. Model time runs in half units of the QR
//! kernel weights, so GEQRT, UNMQR, TTQRT and TTMQR last 2, 3, 1 and 3.
//!
//! Constraint rows are named `<group>__<indices>`, for instance
//! `g1a_iii__i2_j3_k2_l1`, so a violated row tells which family of
//! conditions it belongs to.

mod assign;
mod emit;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

pub use assign::{check_feasible, schedule_to_assignment, Feasibility, IpAssignment, Violation};
pub use emit::{emit_ip, emit_ip_with, IpOptions};

/// Ratio between QR kernel weights and model time units.
pub const TIME_SCALE: u64 = 2;

/// Slack added to a known makespan to get a horizon that every relaxed row
/// tolerates: several rows require an action to be followed by up to three
/// more time units even when it ends the schedule.
pub const HORIZON_SLACK: i64 = 3;

/// Horizon, in model units, for a schedule of the given makespan in QR
/// weight units.
pub fn horizon_for(makespan: u64) -> i64 {
    makespan.div_ceil(TIME_SCALE) as i64 + HORIZON_SLACK
}

/// The four kernel actions of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    W,
    X,
    Y,
    Z,
}

impl Action {
    /// Duration in model time units.
    pub fn duration(self) -> i64 {
        match self {
            Action::W | Action::Y => 3,
            Action::X => 2,
            Action::Z => 1,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Action::W => "w",
            Action::X => "x",
            Action::Y => "y",
            Action::Z => "z",
        }
    }
}

/// Variable families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    W,
    X,
    Y,
    Z,
    /// Whether the matching `y` runs.
    YHat,
    /// Whether the matching `z` runs.
    ZHat,
    /// Disjunction selectors 1 to 6.
    Delta(u8),
    A1,
    A2,
    B,
    C1,
    C,
    D,
    E,
    F,
    TotalTime,
    /// Capacity extension: whether an action finishes at a given step.
    On(Action),
}

impl Family {
    fn write_prefix(self, out: &mut String) {
        let s = match self {
            Family::W => "w",
            Family::X => "x",
            Family::Y => "y",
            Family::Z => "z",
            Family::YHat => "yhat",
            Family::ZHat => "zhat",
            Family::Delta(n) => {
                let _ = write!(out, "delta{n}");
                return;
            }
            Family::A1 => "a1",
            Family::A2 => "a2",
            Family::B => "b",
            Family::C1 => "c1",
            Family::C => "c",
            Family::D => "d",
            Family::E => "e",
            Family::F => "f",
            Family::TotalTime => "total_time",
            Family::On(a) => {
                let _ = write!(out, "on_{}", a.prefix());
                return;
            }
        };
        out.push_str(s);
    }
}

/// Domain of a variable. Integer variables range over `0..=horizon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub family: Family,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// One linear row `sum(coef * var) <sense> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    /// Group tag, the part of the name before `__`.
    pub group: &'static str,
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

type VarKey = (Family, [u16; 6]);

/// An emitted model: variables, rows and the horizon.
#[derive(Debug, Clone)]
pub struct IpModel {
    pub p: usize,
    pub q: usize,
    pub horizon: i64,
    /// Processor limit of the capacity extension, if enabled.
    pub capacity: Option<usize>,
    vars: Vec<Var>,
    rows: Vec<Row>,
    keys: BTreeMap<VarKey, usize>,
}

fn key(family: Family, idx: &[usize]) -> VarKey {
    let mut k = [0u16; 6];
    for (slot, &v) in k.iter_mut().zip(idx) {
        *slot = v as u16;
    }
    (family, k)
}

impl IpModel {
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Id of a variable by family and 1-based indices.
    pub fn var_id(&self, family: Family, idx: &[usize]) -> Option<usize> {
        self.keys.get(&key(family, idx)).copied()
    }

    /// Id of a variable by name.
    pub fn find(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Number of variables of a family.
    pub fn family_count(&self, family: Family) -> usize {
        self.vars.iter().filter(|v| v.family == family).count()
    }

    /// Number of rows of a group tag.
    pub fn group_count(&self, group: &str) -> usize {
        self.rows.iter().filter(|r| r.group == group).count()
    }

    /// CPLEX LP text of the model.
    pub fn to_lp(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "\\ tiled QR with TT kernels, p={} q={} horizon={}",
            self.p, self.q, self.horizon
        );
        if let Some(c) = self.capacity {
            let _ = writeln!(out, "\\ at most {c} kernels run in any time step");
        }
        out.push_str("Minimize\n obj: total_time\nSubject To\n");
        for r in &self.rows {
            let _ = write!(out, " {}:", r.name);
            if r.terms.is_empty() {
                out.push_str(" 0 total_time");
            }
            for (n, &(c, v)) in r.terms.iter().enumerate() {
                if n > 0 && n % 8 == 0 {
                    out.push_str("\n   ");
                }
                let sign = if c < 0 { '-' } else { '+' };
                if n == 0 && c > 0 {
                    out.push(' ');
                } else {
                    let _ = write!(out, " {sign} ");
                }
                if c.abs() != 1 {
                    let _ = write!(out, "{} ", c.abs());
                }
                out.push_str(&self.vars[v].name);
            }
            let _ = writeln!(out, " {} {}", r.sense.symbol(), r.rhs);
        }
        out.push_str("Bounds\n");
        for v in self.vars.iter().filter(|v| v.kind == VarKind::Integer) {
            let _ = writeln!(out, " 0 <= {} <= {}", v.name, self.horizon);
        }
        for (title, kind) in [("General", VarKind::Integer), ("Binary", VarKind::Binary)] {
            let _ = writeln!(out, "{title}");
            for (n, v) in self.vars.iter().filter(|v| v.kind == kind).enumerate() {
                out.push_str(if n % 10 == 0 {
                    if n == 0 {
                        " "
                    } else {
                        "\n "
                    }
                } else {
                    " "
                });
                out.push_str(&v.name);
            }
            out.push('\n');
        }
        out.push_str("End\n");
        out
    }
}
