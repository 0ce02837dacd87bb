//! Tabulated outputs: the per-order plane table and the bound-vs-designs
//! curve, shared by the CLI renderers and the acceptance suite.

use crate::bounds::{lower_bound, Frac};
use crate::designs::{plane_order_status, PlaneExistence};
use crate::distribution::fixtures;
use crate::field::prime_power;

/// Heuristic data points from earlier work, kept as comparison fixtures:
/// (machines, numerator, denominator).
pub const HEURISTIC_POINTS: [(u64, u64, u64); 5] =
    [(4, 192, 256), (8, 140, 256), (16, 116, 256), (32, 83, 256), (64, 56, 256)];

/// One row of the optimal-plane-distribution table.
pub struct TableRow {
    pub n: u64,
    pub factorization: String,
    pub existence: &'static str,
    pub m: u64,
    pub projective: Option<Frac>,
    pub affine: Option<Frac>,
}

pub fn table_rows(max_order: u64) -> Vec<TableRow> {
    (1..=max_order)
        .map(|n| {
            let m = n * n + n + 1;
            let status = plane_order_status(n);
            let (existence, factorization) = match status.status {
                PlaneExistence::ExistsPrimePower => {
                    let fact = if n == 1 {
                        "1^1".to_string()
                    } else {
                        let (p, r) = prime_power(n).unwrap();
                        format!("{p}^{r}")
                    };
                    ("yes", fact)
                }
                PlaneExistence::RuledOutBrc | PlaneExistence::RuledOutKnown => {
                    ("no", String::new())
                }
                PlaneExistence::Unknown => ("unknown", String::new()),
            };
            let (projective, affine) = if existence == "yes" {
                // projective: L = (n+1)/(n^2+n+1); affine: L = 1/n, the n = 1
                // column degenerating to a single-pair cluster at L = 1
                let pl = Frac::new(n + 1, m);
                let af = if n == 1 { Frac::from(1u64) } else { Frac::new(1, n) };
                (Some(pl), Some(af))
            } else {
                (None, None)
            };
            TableRow { n, factorization, existence, m, projective, affine }
        })
        .collect()
}

/// A point on the storage-limit curve.
pub struct CurvePoint {
    pub kind: &'static str,
    pub machines: u64,
    pub limit: Frac,
    pub label: String,
}

pub fn curve_points(max_machines: u64) -> Vec<CurvePoint> {
    let mut points = Vec::new();
    for m in 1..=max_machines {
        points.push(CurvePoint {
            kind: "bound",
            machines: m,
            limit: lower_bound(m).bound,
            label: String::new(),
        });
    }
    for n in 1..=max_machines.isqrt() + 1 {
        if n != 1 && prime_power(n).is_none() {
            continue;
        }
        let mp = n * n + n + 1;
        if mp <= max_machines {
            points.push(CurvePoint {
                kind: "design",
                machines: mp,
                limit: Frac::new(n + 1, mp),
                label: format!("PG(2;{n})"),
            });
        }
        let ma = n * n + n;
        if n >= 2 && ma <= max_machines {
            points.push(CurvePoint {
                kind: "design",
                machines: ma,
                limit: Frac::new(1, n),
                label: format!("AG(2;{n})"),
            });
        }
    }
    for d in fixtures::all() {
        let m = d.blocks.len() as u64;
        if m <= max_machines {
            if let Some(p) = d.params {
                points.push(CurvePoint {
                    kind: "design",
                    machines: m,
                    limit: Frac::new(p.k as u64, p.v as u64),
                    label: d.label.replace("file:", "").replace(',', ";"),
                });
            }
        }
    }
    for (m, num, den) in HEURISTIC_POINTS {
        if m <= max_machines {
            points.push(CurvePoint {
                kind: "heuristic",
                machines: m,
                limit: Frac::new(num, den),
                label: String::new(),
            });
        }
    }
    points
}
