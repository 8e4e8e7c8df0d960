use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use super::emit::actions;
use super::{Action, Family, IpModel, Sense, VarKind, TIME_SCALE};
use crate::error::{Error, Result};
use crate::graph::TaskGraph;
use crate::kernel::KernelKind;
use crate::sched::Schedule;

/// Values of model variables by name; absent variables are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IpAssignment {
    values: BTreeMap<String, i64>,
}

impl IpAssignment {
    pub fn new() -> IpAssignment {
        IpAssignment::default()
    }

    pub fn get(&self, name: &str) -> i64 {
        self.values.get(name).copied().unwrap_or(0)
    }

    pub fn set(&mut self, name: &str, value: i64) {
        self.values.insert(name.to_string(), value);
    }

    /// Nonzero and explicitly set values, in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One `name value` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k} {v}");
        }
        out
    }

    /// Parses `name value` lines; blank lines and lines starting with `#`
    /// are skipped.
    pub fn parse(text: &str) -> Result<IpAssignment> {
        let mut out = IpAssignment::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let mut parts = line.split_whitespace();
            let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::InvalidParameter(
                    "assignment lines must be `name value`",
                ));
            };
            let value = value
                .parse()
                .map_err(|_| Error::InvalidParameter("assignment value is not an integer"))?;
            out.set(name, value);
        }
        Ok(out)
    }
}

/// A row or bound that does not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Row name, or the variable name for bound and unknown-name failures.
    pub row: String,
    /// Group tag; `bounds` for domain failures and `unknown` for names the
    /// model does not declare.
    pub group: &'static str,
    pub lhs: i64,
    pub sense: Sense,
    pub rhs: i64,
}

/// Outcome of checking an assignment against every row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct violated group tags in first-seen order.
    pub fn groups(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for v in &self.violations {
            if !out.contains(&v.group) {
                out.push(v.group);
            }
        }
        out
    }
}

/// Checks bounds and every row of `model` under `assignment`.
pub fn check_feasible(model: &IpModel, assignment: &IpAssignment) -> Feasibility {
    let by_name: BTreeMap<&str, usize> = model
        .vars()
        .iter()
        .enumerate()
        .map(|(n, v)| (v.name.as_str(), n))
        .collect();
    let mut vals = vec![0i64; model.vars().len()];
    let mut violations = Vec::new();
    for (name, value) in assignment.iter() {
        match by_name.get(name) {
            Some(&id) => vals[id] = value,
            None => violations.push(Violation {
                row: name.to_string(),
                group: "unknown",
                lhs: value,
                sense: Sense::Eq,
                rhs: 0,
            }),
        }
    }
    for (v, &value) in model.vars().iter().zip(&vals) {
        let hi = match v.kind {
            VarKind::Integer => model.horizon,
            VarKind::Binary => 1,
        };
        if value < 0 || value > hi {
            let sense = if value < 0 { Sense::Ge } else { Sense::Le };
            let rhs = if value < 0 { 0 } else { hi };
            violations.push(Violation {
                row: v.name.clone(),
                group: "bounds",
                lhs: value,
                sense,
                rhs,
            });
        }
    }
    for r in model.rows() {
        let lhs: i64 = r.terms.iter().map(|&(c, v)| c * vals[v]).sum();
        if !r.sense.holds(lhs, r.rhs) {
            violations.push(Violation {
                row: r.name.clone(),
                group: r.group,
                lhs,
                sense: r.sense,
                rhs: r.rhs,
            });
        }
    }
    Feasibility { violations }
}

struct Values<'a> {
    model: &'a IpModel,
    vals: Vec<i64>,
}

impl Values<'_> {
    fn id(&self, fam: Family, idx: &[usize]) -> usize {
        self.model
            .var_id(fam, idx)
            .expect("index within the model ranges")
    }

    fn get(&self, fam: Family, idx: &[usize]) -> i64 {
        self.vals[self.id(fam, idx)]
    }

    fn set(&mut self, fam: Family, idx: &[usize], v: i64) {
        let id = self.id(fam, idx);
        self.vals[id] = v;
    }

    fn ypair(&self, a: usize, b: usize, k: usize, l: usize) -> i64 {
        self.get(Family::Y, &[a, b, k, l]) + self.get(Family::Y, &[b, a, k, l])
    }

    fn yhat_pair(&self, a: usize, b: usize, k: usize, l: usize) -> i64 {
        self.get(Family::YHat, &[a, b, k, l]) + self.get(Family::YHat, &[b, a, k, l])
    }
}

/// Selectors of a two-way disjunction: a side is lifted only when its row
/// fails unlifted, and at least one side is lifted.
fn pick(need_first: bool, need_second: bool) -> (i64, i64) {
    if !need_first && !need_second {
        (1, 0)
    } else {
        (i64::from(need_first), i64::from(need_second))
    }
}

/// Maps a schedule of a TT tiled QR graph to model values: kernel finish
/// times in model units, indicators from positivity, and the auxiliary
/// binaries set to values that satisfy their defining rows.
pub fn schedule_to_assignment(
    model: &IpModel,
    graph: &TaskGraph,
    schedule: &Schedule,
) -> Result<IpAssignment> {
    if schedule.slots.len() != graph.len() {
        return Err(Error::InvalidParameter("schedule and graph sizes differ"));
    }
    let (p, q, t) = (model.p, model.q, model.horizon);
    let mut v = Values {
        model,
        vals: vec![0; model.vars().len()],
    };
    for (task, slot) in graph.tasks().iter().zip(&schedule.slots) {
        if slot.finish % TIME_SCALE != 0 {
            return Err(Error::InvalidSchedule {
                task: task.id,
                reason: "finish time is not a whole model time unit",
            });
        }
        let finish = (slot.finish / TIME_SCALE) as i64;
        let ix: Vec<usize> = task
            .indices
            .as_slice()
            .iter()
            .map(|&n| n as usize)
            .collect();
        let (fam, idx) = match (task.kind, ix.as_slice()) {
            (KernelKind::Geqrt, &[r, k]) => (Family::X, vec![r, k]),
            (KernelKind::Unmqr, &[r, k, j]) => (Family::W, vec![r, j, k]),
            (KernelKind::Ttqrt, &[i, piv, k]) => (Family::Z, vec![i, piv, k]),
            (KernelKind::Ttmqr, &[i, piv, k, j]) => (Family::Y, vec![i, piv, j, k]),
            (KernelKind::Geqrt | KernelKind::Unmqr | KernelKind::Ttqrt | KernelKind::Ttmqr, _) => {
                return Err(Error::InvalidSchedule {
                    task: task.id,
                    reason: "unexpected number of kernel indices",
                })
            }
            _ => {
                return Err(Error::KernelFamily(
                    "the model covers GEQRT, UNMQR, TTQRT and TTMQR only",
                ))
            }
        };
        let id = model
            .var_id(fam, &idx)
            .filter(|_| idx.iter().all(|&n| n >= 1))
            .ok_or(Error::InvalidParameter(
                "graph does not match the model dimensions",
            ))?;
        v.vals[id] = finish;
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                let z = v.get(Family::Z, &[i, j, k]);
                v.set(Family::ZHat, &[i, j, k], i64::from(z > 0));
                for l in 1..=q {
                    let y = v.get(Family::Y, &[i, j, k, l]);
                    v.set(Family::YHat, &[i, j, k, l], i64::from(y > 0));
                }
            }
        }
    }
    for h in 1..=p {
        for i in 1..=p {
            for j in 1..=p {
                selectors(&mut v, t, h, i, j);
                indicators(&mut v, h, i, j);
            }
        }
    }
    let total = [Family::W, Family::X, Family::Y, Family::Z]
        .iter()
        .flat_map(|&f| {
            model
                .vars()
                .iter()
                .zip(&v.vals)
                .filter(move |(var, _)| var.family == f)
        })
        .map(|(_, &x)| x)
        .max()
        .unwrap_or(0);
    v.set(Family::TotalTime, &[], total);
    if model.capacity.is_some() {
        for (a, idx) in actions(p, q) {
            let fam = match a {
                Action::W => Family::W,
                Action::X => Family::X,
                Action::Y => Family::Y,
                Action::Z => Family::Z,
            };
            let finish = v.get(fam, &idx);
            if finish >= 1 && finish <= t {
                let mut key = idx.clone();
                key.push(finish as usize);
                v.set(Family::On(a), &key, 1);
            }
        }
    }
    let mut out = IpAssignment::new();
    for (var, &x) in model.vars().iter().zip(&v.vals) {
        if x != 0 {
            out.set(&var.name, x);
        }
    }
    Ok(out)
}

fn selectors(v: &mut Values<'_>, t: i64, h: usize, i: usize, j: usize) {
    let q = v.model.q;
    for k in 2..=q {
        for l in 1..k {
            let ij = v.ypair(i, j, k, l);
            for (a, n) in [(i, 1u8), (j, 3u8)] {
                let other = v.ypair(h, a, k, l);
                let need1 = ij + 3 > other + t * (1 - v.yhat_pair(h, a, k, l));
                let need2 = other + 3 > ij + t * (1 - v.yhat_pair(i, j, k, l));
                let (d1, d2) = pick(need1, need2);
                v.set(Family::Delta(n), &[h, i, j, k, l], d1);
                v.set(Family::Delta(n + 1), &[h, i, j, k, l], d2);
            }
        }
    }
    for k in 1..=q {
        let (zj, zh) = (v.get(Family::Z, &[j, i, k]), v.get(Family::Z, &[h, i, k]));
        let need5 = zj + 1 > zh + t * (1 - v.get(Family::ZHat, &[h, i, k]));
        let need6 = zh + 1 > zj + t * (1 - v.get(Family::ZHat, &[j, i, k]));
        let (d5, d6) = pick(need5, need6);
        v.set(Family::Delta(5), &[h, i, j, k], d5);
        v.set(Family::Delta(6), &[h, i, j, k], d6);
    }
}

fn indicators(v: &mut Values<'_>, h: usize, i: usize, j: usize) {
    let q = v.model.q;
    for k in 1..=q {
        let idx = [h, i, j, k];
        let zhat = |v: &Values<'_>, a, b| v.get(Family::ZHat, &[a, b, k]) == 1;
        let a1 = zhat(v, h, i) && zhat(v, j, i);
        let a2 = zhat(v, i, h) && zhat(v, j, i);
        let b = v.get(Family::Z, &[h, i, k]) > v.get(Family::Z, &[j, i, k]);
        let c1 = a1 && b;
        for (fam, x) in [
            (Family::A1, a1),
            (Family::A2, a2),
            (Family::B, b),
            (Family::C1, c1),
            (Family::C, c1 || a2),
        ] {
            v.set(fam, &idx, i64::from(x));
        }
        if k >= 2 {
            let d = v.yhat_pair(h, i, k, k - 1) >= 1 && v.yhat_pair(j, i, k, k - 1) >= 1;
            let e = v.ypair(h, i, k, k - 1) >= v.ypair(j, i, k, k - 1);
            for (fam, x) in [(Family::D, d), (Family::E, e), (Family::F, d || e)] {
                v.set(fam, &idx, i64::from(x));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::emit_ip;

    #[test]
    fn text_round_trip() {
        let mut a = IpAssignment::new();
        a.set("x_1_1", 2);
        a.set("zhat_2_1_1", 1);
        let back = IpAssignment::parse(&a.to_text()).unwrap();
        assert_eq!(back, a);
        assert!(IpAssignment::parse("x_1_1").is_err());
        assert!(IpAssignment::parse("x_1_1 two").is_err());
    }

    #[test]
    fn unknown_names_and_bounds_are_reported() {
        let m = emit_ip(1, 1, 5).unwrap();
        let mut a = IpAssignment::new();
        a.set("x_1_1", 2);
        a.set("total_time", 2);
        a.set("delta5_1_1_1_1", 1);
        assert_eq!(check_feasible(&m, &a).violations, Vec::new());
        a.set("nope", 1);
        a.set("zhat_1_1_1", 2);
        let f = check_feasible(&m, &a);
        assert!(f.groups().contains(&"unknown") && f.groups().contains(&"bounds"));
    }

    #[test]
    fn disjunction_selectors() {
        assert_eq!(pick(false, false), (1, 0));
        assert_eq!(pick(true, false), (1, 0));
        assert_eq!(pick(false, true), (0, 1));
        assert_eq!(pick(true, true), (1, 1));
    }
}
