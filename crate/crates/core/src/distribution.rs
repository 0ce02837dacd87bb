//! ATAC data distributions: the machine-by-group incidence matrix D paired
//! with group-size fractions s, per-machine storage fractions f = D s, the
//! data limit L = max(f), and optimality judgement against the lower bound.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{lower_bound, Frac};
use crate::designs::{
    self, construct_affine_plane, construct_hermitian_unital, construct_projective_plane,
    construct_steiner_triple_system, plane_order_status, Design, DesignCheck, PlaneExistence,
};
use crate::field::prime_power;

#[derive(Debug, Error)]
pub enum DistributionError {
    #[error("design is not a pair covering: pair ({0},{1}) appears in no block")]
    NotPairCovering(usize, usize),
    #[error(transparent)]
    Design(#[from] designs::DesignError),
}

/// A data distribution (D, s): rows of D are machines, columns are data
/// groups; s_j is the exact fraction of the data in group j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub machines: usize,
    pub groups: usize,
    /// sorted group indices held by each machine (the 1-entries of each row)
    pub rows: Vec<Vec<usize>>,
    pub s: Vec<Frac>,
    pub source_label: String,
    /// lambda of the originating design, when it came from a BIBD
    pub lambda: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionReport {
    pub f: Vec<Frac>,
    pub limit: Frac,
    pub locality_ok: bool,
    pub locality_witness: Option<(usize, usize)>,
    pub bound: Frac,
    pub optimal: bool,
    pub gap: Frac,
}

impl Distribution {
    pub fn holds(&self, machine: usize, group: usize) -> bool {
        self.rows[machine].binary_search(&group).is_ok()
    }

    /// Machines holding a group, ascending.
    pub fn hosts_of(&self, group: usize) -> Vec<usize> {
        (0..self.machines).filter(|&i| self.holds(i, group)).collect()
    }

    /// Column sum of D: how many machines hold the group.
    pub fn replication_of(&self, group: usize) -> usize {
        self.hosts_of(group).len()
    }

    /// Per-machine data fractions f = D s.
    pub fn fractions(&self) -> Vec<Frac> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&g| self.s[g]).fold(Frac::zero(), |a, b| a + b))
            .collect()
    }
}

/// Blocks-by-points incidence distribution with uniform s = 1/v.
pub fn distribution_from_design(d: &Design) -> Result<Distribution, DistributionError> {
    let check = designs::verify_design(d)?;
    let lambda = match &check {
        DesignCheck::Bibd(p) => Some(p.lambda),
        DesignCheck::PairCovering(rep) => {
            if let Some(&(x, y)) = rep.uncovered.first() {
                return Err(DistributionError::NotPairCovering(x, y));
            }
            None
        }
    };
    Ok(Distribution {
        machines: d.blocks.len(),
        groups: d.v,
        rows: d.blocks.clone(),
        s: vec![Frac::new(1, d.v as u64); d.v],
        source_label: d.label.clone(),
        lambda,
    })
}

/// Data locality: every pair of groups (each group with itself included)
/// must share at least one machine, i.e. D^T D has no zero entry. Returns
/// the first violating pair as witness.
pub fn verify_locality(dist: &Distribution) -> Result<(), (usize, usize)> {
    // one machine-set bitmask per group
    let words = dist.machines.div_ceil(64);
    let mut masks = vec![vec![0u64; words]; dist.groups];
    for (i, row) in dist.rows.iter().enumerate() {
        for &g in row {
            masks[g][i / 64] |= 1 << (i % 64);
        }
    }
    for j in 0..dist.groups {
        for j2 in j..dist.groups {
            let shared = masks[j].iter().zip(&masks[j2]).any(|(&a, &b)| a & b != 0);
            if !shared {
                return Err((j, j2));
            }
        }
    }
    Ok(())
}

/// Exact storage report: f, L = max(f), locality, and comparison against
/// the theoretical lower bound for this machine count.
pub fn report(dist: &Distribution) -> DistributionReport {
    let f = dist.fractions();
    let limit = f.iter().copied().max().unwrap_or_else(Frac::zero);
    let locality = verify_locality(dist);
    let bound = lower_bound(dist.machines as u64).bound;
    let locality_ok = locality.is_ok();
    // optimality is only claimed for valid ATAC distributions
    let optimal = locality_ok && limit == bound;
    DistributionReport {
        f,
        limit,
        locality_ok,
        locality_witness: locality.err(),
        bound,
        optimal,
        gap: if limit >= bound { limit - bound } else { Frac::zero() },
    }
}

/// Outcome of planning for a given machine count.
#[derive(Debug)]
pub enum PlanOutcome {
    Constructed { distribution: Distribution, report: DistributionReport },
    BoundOnly { bound: Frac, note: String },
}

pub mod fixtures {
    //! Bundled design files, embedded at build time.
    use crate::designs::{parse_design, Design};

    pub const PG2_2: &str = include_str!("../fixtures/pg2_2.design");
    pub const STS13: &str = include_str!("../fixtures/sts13.design");
    pub const STS19: &str = include_str!("../fixtures/sts19.design");
    pub const D25_4_1: &str = include_str!("../fixtures/d25_4_1.design");
    pub const UNITAL28: &str = include_str!("../fixtures/unital28.design");

    pub const ALL: [(&str, &str); 5] = [
        ("pg2_2.design", PG2_2),
        ("sts13.design", STS13),
        ("sts19.design", STS19),
        ("d25_4_1.design", D25_4_1),
        ("unital28.design", UNITAL28),
    ];

    pub fn load(name: &str) -> Design {
        let (_, text) = ALL.iter().find(|(n, _)| *n == name).expect("unknown fixture");
        parse_design(text, format!("file:{name}")).expect("bundled fixture parses")
    }

    pub fn all() -> Vec<Design> {
        ALL.iter()
            .map(|(n, t)| parse_design(t, format!("file:{n}")).expect("bundled fixture parses"))
            .collect()
    }
}

/// Best known distribution for m machines: projective or affine plane when
/// m matches n^2+n+1 or n^2+n for a feasible order, else any constructible
/// or bundled 2-(v,k,1) design with exactly m blocks; otherwise bound-only.
/// Among candidates the minimal limit wins, ties broken by fewer groups.
pub fn plan(m: u64) -> PlanOutcome {
    assert!(m >= 1);
    let mut candidates: Vec<Design> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    // m = n^2 + n + 1 -> projective plane of order n
    let n = m.isqrt();
    if n >= 1 && n * n + n + 1 == m {
        match construct_projective_plane(n) {
            Ok(d) => candidates.push(d),
            Err(e) => notes.push(e.to_string()),
        }
        if n != 1 && prime_power(n).is_none() {
            let status = plane_order_status(n);
            if matches!(status.status, PlaneExistence::RuledOutBrc | PlaneExistence::RuledOutKnown)
            {
                notes.push(format!("projective plane of order {n} does not exist"));
            }
        }
    }
    // m = n^2 + n -> affine plane of order n
    if n >= 2 && n * n + n == m {
        match construct_affine_plane(n) {
            Ok(d) => candidates.push(d),
            Err(_) => notes.push(format!("no affine plane of order {n} is constructible")),
        }
    }
    // m = v(v-1)/6 -> Steiner triple system on v points
    let num = 6 * m; // v(v-1) = 6m
    let v = num.isqrt() + 1;
    if v >= 7 && v * (v - 1) == num && (v % 6 == 1 || v % 6 == 3) {
        if let Ok(d) = construct_steiner_triple_system(v) {
            candidates.push(d);
        }
    }
    // m = q^2(q^2-q+1) -> Hermitian unital
    for q in 2..=16u64 {
        if q * q * (q * q - q + 1) == m {
            if let Ok(d) = construct_hermitian_unital(q) {
                candidates.push(d);
            }
        }
    }
    // bundled design files
    for d in fixtures::all() {
        if d.blocks.len() as u64 == m {
            candidates.push(d);
        }
    }

    let mut best: Option<(Distribution, DistributionReport)> = None;
    for d in candidates {
        let Ok(dist) = distribution_from_design(&d) else { continue };
        let rep = report(&dist);
        let better = match &best {
            None => true,
            Some((bd, br)) => {
                rep.limit < br.limit || (rep.limit == br.limit && dist.groups < bd.groups)
            }
        };
        if better {
            best = Some((dist, rep));
        }
    }
    match best {
        Some((distribution, report)) => PlanOutcome::Constructed { distribution, report },
        None => {
            let mut note = "no construction known".to_string();
            if !notes.is_empty() {
                note = format!("{note}: {}", notes.join("; "));
            }
            PlanOutcome::BoundOnly { bound: lower_bound(m).bound, note }
        }
    }
}

/// JSON manifest with exact fraction strings, one placement row per machine.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub machines: usize,
    pub groups: usize,
    pub group_fraction: Vec<String>,
    pub placement: Vec<Vec<usize>>,
    pub limit: String,
    pub bound: String,
    pub optimal: bool,
    pub source_label: String,
}

pub fn frac_str(f: Frac) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

pub fn manifest(dist: &Distribution, rep: &DistributionReport) -> Manifest {
    Manifest {
        machines: dist.machines,
        groups: dist.groups,
        group_fraction: dist.s.iter().map(|&f| frac_str(f)).collect(),
        placement: dist.rows.clone(),
        limit: frac_str(rep.limit),
        bound: frac_str(rep.bound),
        optimal: rep.optimal,
        source_label: dist.source_label.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_distribution() {
        let d = construct_projective_plane(2).unwrap();
        let dist = distribution_from_design(&d).unwrap();
        assert_eq!((dist.machines, dist.groups), (7, 7));
        let rep = report(&dist);
        assert!(rep.f.iter().all(|&f| f == Frac::new(3, 7)));
        assert_eq!(rep.limit, Frac::new(3, 7));
        assert!(rep.locality_ok);
        assert!(rep.optimal);
    }

    #[test]
    fn triangle_worked_example() {
        let d = construct_projective_plane(1).unwrap();
        let dist = distribution_from_design(&d).unwrap();
        let rep = report(&dist);
        assert_eq!(rep.f, vec![Frac::new(2, 3); 3]);
        assert_eq!(rep.limit, Frac::new(2, 3));
        assert!(rep.optimal);
    }

    #[test]
    fn affine_3_distribution() {
        let d = construct_affine_plane(3).unwrap();
        let dist = distribution_from_design(&d).unwrap();
        assert_eq!(dist.machines, 12);
        let rep = report(&dist);
        assert!(rep.f.iter().all(|&f| f == Frac::new(1, 3)));
        assert!(rep.optimal);
    }

    #[test]
    fn identity_matrix_fails_locality() {
        let dist = Distribution {
            machines: 3,
            groups: 3,
            rows: vec![vec![0], vec![1], vec![2]],
            s: vec![Frac::new(1, 3); 3],
            source_label: "identity".into(),
            lambda: None,
        };
        assert_eq!(verify_locality(&dist), Err((0, 1)));
        let rep = report(&dist);
        assert!(!rep.locality_ok && !rep.optimal);
        assert_eq!(rep.locality_witness, Some((0, 1)));
    }

    #[test]
    fn single_group_everywhere_is_local() {
        let dist = Distribution {
            machines: 4,
            groups: 1,
            rows: vec![vec![0]; 4],
            s: vec![Frac::new(1, 1)],
            source_label: "ones".into(),
            lambda: None,
        };
        assert_eq!(verify_locality(&dist), Ok(()));
        assert_eq!(dist.replication_of(0), 4);
    }

    #[test]
    fn pg_2_5_report() {
        let d = construct_projective_plane(5).unwrap();
        let dist = distribution_from_design(&d).unwrap();
        let rep = report(&dist);
        assert_eq!(rep.limit, Frac::new(6, 31));
        assert!(rep.optimal);
    }

    #[test]
    fn sts13_report_not_optimal() {
        let d = construct_steiner_triple_system(13).unwrap();
        let dist = distribution_from_design(&d).unwrap();
        let rep = report(&dist);
        assert_eq!(rep.limit, Frac::new(3, 13));
        assert_eq!(rep.bound, Frac::new(1, 5));
        assert!(!rep.optimal);
    }

    #[test]
    fn lambda_one_groups_share_exactly_one_machine() {
        for d in [
            construct_projective_plane(3).unwrap(),
            construct_affine_plane(4).unwrap(),
            construct_steiner_triple_system(13).unwrap(),
        ] {
            let dist = distribution_from_design(&d).unwrap();
            for a in 0..dist.groups {
                for b in a + 1..dist.groups {
                    let shared = (0..dist.machines)
                        .filter(|&i| dist.holds(i, a) && dist.holds(i, b))
                        .count();
                    assert_eq!(shared, 1, "{} pair ({a},{b})", dist.source_label);
                }
            }
        }
    }

    #[test]
    fn plan_known_cases() {
        match plan(7) {
            PlanOutcome::Constructed { distribution, report } => {
                assert_eq!(distribution.source_label, "PG(2,2)");
                assert_eq!(report.limit, Frac::new(3, 7));
                assert!(report.optimal);
            }
            other => panic!("unexpected {other:?}"),
        }
        match plan(26) {
            PlanOutcome::Constructed { distribution, report } => {
                assert_eq!(distribution.source_label, "STS(13)");
                assert_eq!(report.limit, Frac::new(3, 13));
                assert!(!report.optimal);
            }
            other => panic!("unexpected {other:?}"),
        }
        match plan(43) {
            PlanOutcome::BoundOnly { bound, note } => {
                assert_eq!(bound, Frac::new(7, 43));
                assert!(note.contains("order 6"), "{note}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn plan_prefers_lower_limit_on_57_machines() {
        // both PG(2,7) (L = 8/57) and STS(19) (L = 3/19) have 57 blocks
        match plan(57) {
            PlanOutcome::Constructed { distribution, report } => {
                assert_eq!(distribution.source_label, "PG(2,7)");
                assert_eq!(report.limit, Frac::new(8, 57));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn manifest_uses_exact_fractions() {
        let d = construct_projective_plane(2).unwrap();
        let dist = distribution_from_design(&d).unwrap();
        let rep = report(&dist);
        let man = manifest(&dist, &rep);
        assert_eq!(man.limit, "3/7");
        assert!(man.group_fraction.iter().all(|s| s == "1/7"));
        let json = serde_json::to_string(&man).unwrap();
        assert!(json.contains("\"3/7\""));
    }
}
