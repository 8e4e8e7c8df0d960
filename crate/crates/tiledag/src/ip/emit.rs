use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{key, Action, Family, IpModel, Row, Sense, Var, VarKind};
use crate::error::{Error, Result};

/// Emission options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IpOptions {
    /// Limit on the number of kernels running in any time step; off by
    /// default.
    pub capacity: Option<usize>,
}

/// Linear expression with a constant.
#[derive(Debug, Clone, Default)]
struct Lin {
    terms: Vec<(i64, usize)>,
    k: i64,
}

impl Lin {
    fn v(mut self, c: i64, id: usize) -> Lin {
        self.terms.push((c, id));
        self
    }

    fn c(mut self, k: i64) -> Lin {
        self.k += k;
        self
    }

    fn plus(mut self, other: Lin, scale: i64) -> Lin {
        self.terms
            .extend(other.terms.into_iter().map(|(c, v)| (c * scale, v)));
        self.k += other.k * scale;
        self
    }
}

fn var(id: usize) -> Lin {
    Lin::default().v(1, id)
}

fn konst(k: i64) -> Lin {
    Lin::default().c(k)
}

struct Builder {
    m: IpModel,
    t: i64,
}

impl Builder {
    fn declare(&mut self, family: Family, idx: &[usize], kind: VarKind) {
        let mut name = String::new();
        family.write_prefix(&mut name);
        for i in idx {
            let _ = write!(name, "_{i}");
        }
        let id = self.m.vars.len();
        self.m.vars.push(Var { name, family, kind });
        let prev = self.m.keys.insert(key(family, idx), id);
        debug_assert!(prev.is_none(), "variable declared twice");
    }

    fn id(&self, family: Family, idx: &[usize]) -> usize {
        self.m
            .var_id(family, idx)
            .expect("variable used before declaration")
    }

    /// `lhs <sense> rhs`, normalized to variables on the left.
    fn row(
        &mut self,
        group: &'static str,
        idx: &[(&str, usize)],
        lhs: Lin,
        sense: Sense,
        rhs: Lin,
    ) {
        let diff = lhs.plus(rhs, -1);
        let mut terms: Vec<(i64, usize)> = Vec::with_capacity(diff.terms.len());
        for (c, v) in diff.terms {
            match terms.iter_mut().find(|t| t.1 == v) {
                Some(t) => t.0 += c,
                None => terms.push((c, v)),
            }
        }
        terms.retain(|t| t.0 != 0);
        let mut name = String::from(group);
        name.push('_');
        for (tag, v) in idx {
            let _ = write!(name, "_{tag}{v}");
        }
        self.m.rows.push(Row {
            name,
            group,
            terms,
            sense,
            rhs: -diff.k,
        });
    }

    fn y(&self, i: usize, j: usize, k: usize, l: usize) -> Lin {
        var(self.id(Family::Y, &[i, j, k, l]))
    }

    /// Either orientation of the row pair `{a, b}`; at most one runs.
    fn ypair(&self, a: usize, b: usize, k: usize, l: usize) -> Lin {
        self.y(a, b, k, l).plus(self.y(b, a, k, l), 1)
    }

    fn yhat_pair(&self, a: usize, b: usize, k: usize, l: usize) -> Lin {
        var(self.id(Family::YHat, &[a, b, k, l])).v(1, self.id(Family::YHat, &[b, a, k, l]))
    }

    fn z(&self, i: usize, j: usize, k: usize) -> Lin {
        var(self.id(Family::Z, &[i, j, k]))
    }

    fn zpair(&self, a: usize, b: usize, k: usize) -> Lin {
        self.z(a, b, k).plus(self.z(b, a, k), 1)
    }

    fn zhat(&self, i: usize, j: usize, k: usize) -> Lin {
        var(self.id(Family::ZHat, &[i, j, k]))
    }

    fn zhat_pair(&self, a: usize, b: usize, k: usize) -> Lin {
        self.zhat(a, b, k).plus(self.zhat(b, a, k), 1)
    }

    /// `(1 - active) * T`: lifts a row when the action it orders does not run.
    fn relax(&self, active: Lin) -> Lin {
        konst(self.t).plus(active, -self.t)
    }

    fn w(&self, i: usize, k: usize, l: usize) -> Lin {
        var(self.id(Family::W, &[i, k, l]))
    }

    fn x(&self, i: usize, k: usize) -> Lin {
        var(self.id(Family::X, &[i, k]))
    }
}

/// Emits the model for `p x q` tiles with horizon `t` (model time units).
pub fn emit_ip(p: usize, q: usize, t: i64) -> Result<IpModel> {
    emit_ip_with(p, q, t, IpOptions::default())
}

/// Emits the model with the given options.
pub fn emit_ip_with(p: usize, q: usize, t: i64, opts: IpOptions) -> Result<IpModel> {
    if q == 0 || p < q {
        return Err(Error::InvalidParameter("need p >= q >= 1"));
    }
    if t <= 0 {
        return Err(Error::InvalidParameter("horizon must be positive"));
    }
    if p > u16::MAX as usize || t > u16::MAX as i64 {
        return Err(Error::TooLarge("indices and horizon must fit in 16 bits"));
    }
    if opts.capacity == Some(0) {
        return Err(Error::InvalidParameter("capacity must be at least one"));
    }
    let model = IpModel {
        p,
        q,
        horizon: t,
        capacity: opts.capacity,
        vars: Vec::new(),
        rows: Vec::new(),
        keys: BTreeMap::new(),
    };
    let mut b = Builder { m: model, t };
    declare_all(&mut b, p, q);
    kernel_gaps(&mut b, p, q);
    structure(&mut b, p, q);
    precedence(&mut b, p, q);
    objective(&mut b);
    if let Some(cap) = opts.capacity {
        capacity(&mut b, p, q, cap);
    }
    Ok(b.m)
}

fn declare_all(b: &mut Builder, p: usize, q: usize) {
    use VarKind::{Binary, Integer};
    for i in 1..=p {
        for k in 1..=q {
            for l in 1..=q {
                b.declare(Family::W, &[i, k, l], Integer);
            }
        }
    }
    for i in 1..=p {
        for k in 1..=q {
            b.declare(Family::X, &[i, k], Integer);
        }
    }
    for (fam, kind) in [(Family::Y, Integer), (Family::YHat, Binary)] {
        for i in 1..=p {
            for j in 1..=p {
                for k in 1..=q {
                    for l in 1..=q {
                        b.declare(fam, &[i, j, k, l], kind);
                    }
                }
            }
        }
    }
    for (fam, kind) in [(Family::Z, Integer), (Family::ZHat, Binary)] {
        for i in 1..=p {
            for j in 1..=p {
                for k in 1..=q {
                    b.declare(fam, &[i, j, k], kind);
                }
            }
        }
    }
    for n in 1..=4 {
        for_hij(p, |h, i, j| {
            for k in 2..=q {
                for l in 1..k {
                    b.declare(Family::Delta(n), &[h, i, j, k, l], Binary);
                }
            }
        });
    }
    let per_column = [
        Family::Delta(5),
        Family::Delta(6),
        Family::A1,
        Family::A2,
        Family::B,
        Family::C1,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
    ];
    for fam in per_column {
        // The update-order indicators compare with the previous column.
        let first = if matches!(fam, Family::D | Family::E | Family::F) {
            2
        } else {
            1
        };
        for_hij(p, |h, i, j| {
            for k in first..=q {
                b.declare(fam, &[h, i, j, k], Binary);
            }
        });
    }
    b.declare(Family::TotalTime, &[], Integer);
}

fn for_hij(p: usize, mut f: impl FnMut(usize, usize, usize)) {
    for h in 1..=p {
        for i in 1..=p {
            for j in 1..=p {
                f(h, i, j);
            }
        }
    }
}

/// Minimum gaps between kernels touching the same tiles.
fn kernel_gaps(b: &mut Builder, p: usize, q: usize) {
    use Sense::{Ge, Le};
    let t = b.t;
    for k in 2..=q {
        for l in 1..k {
            for lp in 1..l {
                for i in l..=p {
                    let r = b.w(i, k, lp).c(3);
                    b.row(
                        "g1a_i",
                        &[("i", i), ("k", k), ("l", l), ("lp", lp)],
                        b.w(i, k, l),
                        Ge,
                        r,
                    );
                }
                for i in l..=p {
                    for j in 1..=p {
                        let r = b.ypair(i, j, k, lp).c(3);
                        b.row(
                            "g1a_ii",
                            &[("i", i), ("j", j), ("k", k), ("l", l), ("lp", lp)],
                            b.w(i, k, l),
                            Ge,
                            r,
                        );
                    }
                }
            }
            for i in 1..=p {
                for j in 1..=p {
                    let r = b
                        .ypair(i, j, k, l)
                        .plus(b.relax(b.yhat_pair(i, j, k, l)), 1);
                    b.row(
                        "g1a_iii",
                        &[("i", i), ("j", j), ("k", k), ("l", l)],
                        b.w(i, k, l).c(3),
                        Le,
                        r,
                    );
                }
            }
            for i in k..=p {
                b.row(
                    "g1a_iv",
                    &[("i", i), ("k", k), ("l", l)],
                    b.w(i, k, l).c(2),
                    Le,
                    b.x(i, k),
                );
            }
            for i in 1..=p {
                for j in 1..=p {
                    let r = b.zpair(i, j, k).plus(b.relax(b.zhat_pair(i, j, k)), 1);
                    b.row(
                        "g1a_v",
                        &[("i", i), ("j", j), ("k", k), ("l", l)],
                        b.w(i, k, l).c(1),
                        Le,
                        r,
                    );
                }
            }
            for i in k..=p {
                for j in 1..=p {
                    let r = b.ypair(i, j, k, l).c(2);
                    b.row(
                        "g1b_ii",
                        &[("i", i), ("j", j), ("k", k), ("l", l)],
                        b.x(i, k),
                        Ge,
                        r,
                    );
                }
            }
        }
    }
    for k in 1..=q {
        for i in k..=p {
            for j in 1..=p {
                let r = b.zpair(i, j, k).plus(b.relax(b.zhat_pair(i, j, k)), 1);
                b.row(
                    "g1b_iii",
                    &[("i", i), ("j", j), ("k", k)],
                    b.x(i, k).c(1),
                    Le,
                    r,
                );
            }
        }
    }
    // Updates sharing a row are serialized in either order.
    for_hij(p, |h, i, j| {
        for k in 2..=q {
            for l in 1..k {
                let idx = [("h", h), ("i", i), ("j", j), ("k", k), ("l", l)];
                let d = |b: &Builder, n| var(b.id(Family::Delta(n), &[h, i, j, k, l]));
                let pairs = [
                    ((h, i), 1, 2, "g1c_iii_1", "g1c_iii_2", "g1c_iii_12"),
                    ((h, j), 3, 4, "g1c_iii_3", "g1c_iii_4", "g1c_iii_34"),
                ];
                for ((a, c), n1, n2, g1, g2, gs) in pairs {
                    let r1 = b
                        .ypair(a, c, k, l)
                        .plus(b.relax(b.yhat_pair(a, c, k, l)), 1)
                        .plus(d(b, n1), t);
                    b.row(g1, &idx, b.ypair(i, j, k, l).c(3), Le, r1);
                    let r2 = b
                        .ypair(i, j, k, l)
                        .plus(b.relax(b.yhat_pair(i, j, k, l)), 1)
                        .plus(d(b, n2), t);
                    b.row(g2, &idx, b.ypair(a, c, k, l).c(3), Le, r2);
                    b.row(gs, &idx, d(b, n1).plus(d(b, n2), 1), Ge, konst(1));
                }
                for (g, a) in [("g1c_iv_i", i), ("g1c_iv_j", j)] {
                    let r = b.zpair(h, a, k).plus(b.relax(b.zhat_pair(h, a, k)), 1);
                    b.row(g, &idx, b.y(i, j, k, l).c(3), Le, r);
                }
            }
        }
    });
    // Zeroings sharing a tile are serialized; a pivot is used before it is
    // itself zeroed.
    for_hij(p, |h, i, j| {
        for k in 1..=q {
            let idx = [("h", h), ("i", i), ("j", j), ("k", k)];
            let d5 = var(b.id(Family::Delta(5), &[h, i, j, k]));
            let d6 = var(b.id(Family::Delta(6), &[h, i, j, k]));
            let r = b
                .z(h, i, k)
                .plus(b.relax(b.zhat(h, i, k)), 1)
                .plus(d5.clone(), t);
            b.row("g1d_iv_1_5", &idx, b.z(j, i, k).c(1), Le, r);
            let r = b
                .z(j, i, k)
                .plus(b.relax(b.zhat(j, i, k)), 1)
                .plus(d6.clone(), t);
            b.row("g1d_iv_1_6", &idx, b.z(h, i, k).c(1), Le, r);
            b.row("g1d_iv_1_56", &idx, d5.plus(d6, 1), Ge, konst(1));
            let r = b.z(i, h, k).plus(b.relax(b.zhat(i, h, k)), 1);
            b.row("g1d_iv_2", &idx, b.z(j, i, k).c(1), Le, r);
        }
    });
}

/// Conditions on which kernels run and in what order.
fn structure(b: &mut Builder, p: usize, q: usize) {
    use Sense::{Eq, Ge, Le};
    let t = b.t;
    for i in 1..=p {
        for k in 1..=q {
            b.row("g2_z", &[("i", i), ("k", k)], b.z(i, i, k), Eq, konst(0));
        }
    }
    for i in 1..=p {
        for k in 1..=q {
            for l in 1..=q {
                b.row(
                    "g2_y",
                    &[("i", i), ("k", k), ("l", l)],
                    b.y(i, i, k, l),
                    Eq,
                    konst(0),
                );
            }
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                let idx = [("i", i), ("j", j), ("k", k)];
                let r = b.relax(b.zhat(i, j, k)).plus(b.z(i, j, k), 1);
                b.row("g3_i", &idx, b.x(i, k), Le, r.clone());
                b.row("g3_j", &idx, b.x(j, k), Le, r);
            }
        }
    }
    for k in 1..q {
        for i in k..=p {
            for l in k + 1..=q {
                b.row(
                    "g4a",
                    &[("i", i), ("k", k), ("l", l)],
                    b.x(i, k),
                    Le,
                    b.w(i, l, k).c(-3),
                );
            }
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                for l in k + 1..=q {
                    b.row(
                        "g4b",
                        &[("i", i), ("j", j), ("k", k), ("l", l)],
                        b.z(i, j, k),
                        Le,
                        b.ypair(i, j, l, k),
                    );
                }
            }
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 2..=q {
                for l in 1..k {
                    let r = b
                        .relax(b.yhat_pair(i, j, k, l))
                        .plus(b.ypair(i, j, k, l), 1);
                    b.row(
                        "g5",
                        &[("i", i), ("j", j), ("k", k), ("l", l)],
                        b.w(i, k, l),
                        Le,
                        r,
                    );
                }
            }
        }
    }
    for k in 2..=q {
        for i in k..=p {
            for l in 1..k {
                b.row(
                    "g6_w",
                    &[("i", i), ("k", k), ("l", l)],
                    b.x(i, k),
                    Ge,
                    b.w(i, k, l),
                );
                for j in 1..=p {
                    b.row(
                        "g6_y",
                        &[("i", i), ("j", j), ("k", k), ("l", l)],
                        b.x(i, k),
                        Ge,
                        b.ypair(i, j, k, l),
                    );
                }
            }
        }
    }
    // A zeroed tile is no longer a pivot. Lifted when `(i,k)` is not zeroed
    // by `(j,k)`; without the lift any row that pivots and is later zeroed
    // would violate it.
    for_hij(p, |h, i, j| {
        for k in 1..=q {
            let r = b.z(i, j, k).plus(b.relax(b.zhat(i, j, k)), 1);
            b.row(
                "g7",
                &[("h", h), ("i", i), ("j", j), ("k", k)],
                b.z(h, i, k),
                Le,
                r,
            );
        }
    });
    for k in 1..=q {
        for i in k..=p {
            b.row("g8", &[("i", i), ("k", k)], b.x(i, k), Ge, konst(2));
        }
    }
    for k in 1..=q {
        for i in k + 1..=p {
            let mut sum = Lin::default();
            for j in 1..=p {
                sum = sum.plus(b.zhat(i, j, k), 1);
            }
            b.row("g9", &[("i", i), ("k", k)], sum, Eq, konst(1));
        }
    }
    for k in 1..=q {
        for i in 1..k.min(p + 1) {
            b.row("g10", &[("i", i), ("k", k)], b.x(i, k), Eq, konst(0));
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                for l in 1..=q {
                    let idx = [("i", i), ("j", j), ("k", k), ("l", l)];
                    let hat = var(b.id(Family::YHat, &[i, j, k, l]));
                    b.row("g11_y_lo", &idx, hat.clone(), Le, b.y(i, j, k, l));
                    b.row(
                        "g11_y_hi",
                        &idx,
                        Lin::default().plus(hat, t),
                        Ge,
                        b.y(i, j, k, l),
                    );
                }
            }
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                let idx = [("i", i), ("j", j), ("k", k)];
                b.row("g11_z_lo", &idx, b.zhat(i, j, k), Le, b.z(i, j, k));
                b.row(
                    "g11_z_hi",
                    &idx,
                    Lin::default().plus(b.zhat(i, j, k), t),
                    Ge,
                    b.z(i, j, k),
                );
            }
        }
    }
}

/// `out = a AND b` over binaries.
fn and(b: &mut Builder, group: [&'static str; 3], idx: &[(&str, usize)], out: Lin, x: Lin, y: Lin) {
    b.row(group[0], idx, out.clone(), Sense::Le, x.clone());
    b.row(group[1], idx, out.clone(), Sense::Le, y.clone());
    b.row(group[2], idx, out.c(1), Sense::Ge, x.plus(y, 1));
}

/// `out = a OR b` over binaries.
fn or(b: &mut Builder, group: [&'static str; 3], idx: &[(&str, usize)], out: Lin, x: Lin, y: Lin) {
    b.row(group[0], idx, out.clone(), Sense::Ge, x.clone());
    b.row(group[1], idx, out.clone(), Sense::Ge, y.clone());
    b.row(group[2], idx, out, Sense::Le, x.plus(y, 1));
}

/// `out = 1` when `diff > 0`, `out = 0` when `diff < 0`.
fn positive(b: &mut Builder, group: [&'static str; 2], idx: &[(&str, usize)], out: Lin, diff: Lin) {
    let t = b.t;
    b.row(
        group[0],
        idx,
        Lin::default().plus(out.clone(), t),
        Sense::Ge,
        diff.clone(),
    );
    b.row(
        group[1],
        idx,
        Lin::default().plus(out, t).c(-t),
        Sense::Le,
        diff,
    );
}

/// Zeroings sharing a row in one column order the updates they cause in
/// the next column.
fn precedence(b: &mut Builder, p: usize, q: usize) {
    for_hij(p, |h, i, j| {
        for k in 1..=q {
            let idx = [("h", h), ("i", i), ("j", j), ("k", k)];
            let v = |b: &Builder, f| var(b.id(f, &[h, i, j, k]));
            let (a1, a2, bb, c1, c) = (
                v(b, Family::A1),
                v(b, Family::A2),
                v(b, Family::B),
                v(b, Family::C1),
                v(b, Family::C),
            );
            and(
                b,
                ["prec_a1_1", "prec_a1_2", "prec_a1_3"],
                &idx,
                a1.clone(),
                b.zhat(h, i, k),
                b.zhat(j, i, k),
            );
            and(
                b,
                ["prec_a2_1", "prec_a2_2", "prec_a2_3"],
                &idx,
                a2.clone(),
                b.zhat(i, h, k),
                b.zhat(j, i, k),
            );
            let diff = b.z(h, i, k).plus(b.z(j, i, k), -1);
            positive(b, ["prec_b_1", "prec_b_2"], &idx, bb.clone(), diff);
            and(
                b,
                ["prec_c1_1", "prec_c1_2", "prec_c1_3"],
                &idx,
                c1.clone(),
                a1,
                bb,
            );
            or(b, ["prec_c_1", "prec_c_2", "prec_c_3"], &idx, c, c1, a2);
            if k >= 2 {
                let (d, e, f) = (v(b, Family::D), v(b, Family::E), v(b, Family::F));
                let hi = b.yhat_pair(h, i, k, k - 1);
                let ji = b.yhat_pair(j, i, k, k - 1);
                b.row("prec_d_1", &idx, d.clone(), Sense::Le, hi.clone());
                b.row("prec_d_2", &idx, d.clone(), Sense::Le, ji.clone());
                b.row("prec_d_3", &idx, d.clone().c(1), Sense::Ge, hi.plus(ji, 1));
                let diff = b.ypair(h, i, k, k - 1).plus(b.ypair(j, i, k, k - 1), -1);
                positive(b, ["prec_e_1", "prec_e_2"], &idx, e.clone(), diff);
                or(b, ["prec_f_1", "prec_f_2", "prec_f_3"], &idx, f, d, e);
            }
        }
    });
    // Only the next column: for later columns the indicators compare updates
    // caused by a different column and would reject valid schedules.
    for_hij(p, |h, i, j| {
        for k in 1..q {
            let c = var(b.id(Family::C, &[h, i, j, k]));
            let f = var(b.id(Family::F, &[h, i, j, k + 1]));
            b.row(
                "prec_order",
                &[("h", h), ("i", i), ("j", j), ("k", k), ("l", k + 1)],
                c,
                Sense::Le,
                f,
            );
        }
    });
}

fn objective(b: &mut Builder) {
    let total = var(b.id(Family::TotalTime, &[]));
    let fams: [(Family, &'static str); 4] = [
        (Family::W, "obj_w"),
        (Family::X, "obj_x"),
        (Family::Y, "obj_y"),
        (Family::Z, "obj_z"),
    ];
    for (fam, group) in fams {
        let ids: Vec<(String, usize)> =
            b.m.vars
                .iter()
                .enumerate()
                .filter(|(_, v)| v.family == fam)
                .map(|(n, v)| (v.name.clone(), n))
                .collect();
        for (name, id) in ids {
            let mut row_name = String::from(group);
            row_name.push_str("__");
            row_name.push_str(&name);
            let diff = total.clone().v(-1, id);
            b.m.rows.push(Row {
                name: row_name,
                group,
                terms: diff.terms,
                sense: Sense::Ge,
                rhs: 0,
            });
        }
    }
}

/// Kernels that can run, with their indices, in declaration order.
pub(super) fn actions(p: usize, q: usize) -> Vec<(Action, Vec<usize>)> {
    let mut out = Vec::new();
    for i in 1..=p {
        for k in 1..=q {
            for l in 1..k.min(i + 1) {
                out.push((Action::W, alloc::vec![i, k, l]));
            }
        }
    }
    for i in 1..=p {
        for k in 1..=q.min(i) {
            out.push((Action::X, alloc::vec![i, k]));
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                for l in 1..k {
                    if i != j && i >= l && j >= l {
                        out.push((Action::Y, alloc::vec![i, j, k, l]));
                    }
                }
            }
        }
    }
    for i in 1..=p {
        for j in 1..=p {
            for k in 1..=q {
                if i != j && i >= k && j >= k {
                    out.push((Action::Z, alloc::vec![i, j, k]));
                }
            }
        }
    }
    out
}

fn action_family(a: Action) -> Family {
    match a {
        Action::W => Family::W,
        Action::X => Family::X,
        Action::Y => Family::Y,
        Action::Z => Family::Z,
    }
}

/// Time-indexed capacity: `on_<action>_<indices>_<t>` marks the step in
/// which the action finishes, and every step runs at most `cap` kernels.
fn capacity(b: &mut Builder, p: usize, q: usize, cap: usize) {
    let t = b.t as usize;
    let acts = actions(p, q);
    let mut idx_t = Vec::new();
    for (a, idx) in &acts {
        for s in 1..=t {
            idx_t.clear();
            idx_t.extend_from_slice(idx);
            idx_t.push(s);
            b.declare(Family::On(*a), &idx_t, VarKind::Binary);
        }
    }
    let mut running: Vec<Lin> = (0..=t).map(|_| Lin::default()).collect();
    for (a, idx) in &acts {
        let finish = var(b.id(action_family(*a), idx));
        let mut weighted = Lin::default();
        let mut once = Lin::default();
        for s in 1..=t {
            idx_t.clear();
            idx_t.extend_from_slice(idx);
            idx_t.push(s);
            let on = b.id(Family::On(*a), &idx_t);
            weighted = weighted.v(s as i64, on);
            once = once.v(1, on);
            // Finishing at `s` occupies steps `s - duration + 1 ..= s`.
            let first = (s as i64 - a.duration() + 1).max(1) as usize;
            for slot in running.iter_mut().take(s + 1).skip(first) {
                slot.terms.push((1, on));
            }
        }
        let mut tag = String::from(a.prefix());
        for v in idx {
            let _ = write!(tag, "_{v}");
        }
        let name_def = alloc::format!("cap_def__{tag}");
        let name_one = alloc::format!("cap_one__{tag}");
        let def = finish.plus(weighted, -1);
        b.m.rows.push(Row {
            name: name_def,
            group: "cap_def",
            terms: def.terms,
            sense: Sense::Eq,
            rhs: 0,
        });
        b.m.rows.push(Row {
            name: name_one,
            group: "cap_one",
            terms: once.terms,
            sense: Sense::Le,
            rhs: 1,
        });
    }
    for (s, lin) in running.into_iter().enumerate().skip(1) {
        b.row("cap", &[("t", s)], lin, Sense::Le, konst(cap as i64));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(emit_ip(2, 3, 10).is_err());
        assert!(emit_ip(2, 2, 0).is_err());
        assert!(emit_ip_with(2, 2, 5, IpOptions { capacity: Some(0) }).is_err());
    }

    #[test]
    fn two_by_two_structure() {
        let m = emit_ip(2, 2, 20).unwrap();
        assert_eq!(m.group_count("g9"), 1);
        let g10: Vec<&Row> = m.rows().iter().filter(|r| r.group == "g10").collect();
        assert_eq!(g10.len(), 1);
        assert_eq!(g10[0].name, "g10__i1_k2");
        assert_eq!(m.vars()[g10[0].terms[0].1].name, "x_1_2");
        assert_eq!((g10[0].sense, g10[0].rhs), (Sense::Eq, 0));
    }

    #[test]
    fn rows_merge_repeated_variables() {
        let m = emit_ip(2, 1, 10).unwrap();
        // Pivot and zeroed tile coincide: z_1_1_1 + 1 <= z_1_1_1 + ...
        let r = m
            .rows()
            .iter()
            .find(|r| r.name == "g1d_iv_2__h1_i1_j1_k1")
            .unwrap();
        assert!(r.terms.iter().all(|&(_, v)| m.vars()[v].name != "z_1_1_1"));
    }

    #[test]
    fn action_ranges() {
        let acts = actions(2, 2);
        let count = |a| acts.iter().filter(|(x, _)| *x == a).count();
        assert_eq!(
            (
                count(Action::W),
                count(Action::X),
                count(Action::Y),
                count(Action::Z)
            ),
            (2, 3, 2, 2)
        );
    }
}
