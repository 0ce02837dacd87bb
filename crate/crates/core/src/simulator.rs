//! Deterministic execution of a schedule on a simulated homogeneous
//! cluster: per-machine completion times, makespan, and single-machine
//! failure with greedy reassignment and remote-fetch accounting.

use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::Frac;
use crate::distribution::{frac_str, Distribution};
use crate::scheduler::{expand_job, Placement, Schedule};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("failure references machine {0}, but the cluster has {1}")]
    BadFailureMachine(usize, usize),
}

/// A single machine failing after completing a given number of tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure {
    pub machine: usize,
    pub after_tasks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub task_cost: Frac,
    pub remote_fetch_cost: Frac,
    pub failure: Option<Failure>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { task_cost: Frac::new(1, 1), remote_fetch_cost: Frac::zero(), failure: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimReport {
    pub completed_tasks: u64,
    pub per_machine_tasks: Vec<u64>,
    pub per_machine_time: Vec<Frac>,
    pub makespan: Frac,
    pub locality_violations: u64,
    pub remote_fetches: u64,
    pub reassigned_tasks: u64,
    pub completed: bool,
    pub orphaned_pairs: Vec<(u64, u64)>,
}

#[derive(Debug, Serialize)]
pub struct SimReportJson {
    pub completed_tasks: u64,
    pub per_machine_tasks: Vec<u64>,
    pub per_machine_time: Vec<String>,
    pub makespan: String,
    pub locality_violations: u64,
    pub remote_fetches: u64,
    pub reassigned_tasks: u64,
    pub completed: bool,
    pub orphaned_pairs: Vec<(u64, u64)>,
}

impl SimReport {
    pub fn to_json(&self) -> SimReportJson {
        SimReportJson {
            completed_tasks: self.completed_tasks,
            per_machine_tasks: self.per_machine_tasks.clone(),
            per_machine_time: self.per_machine_time.iter().map(|&t| frac_str(t)).collect(),
            makespan: frac_str(self.makespan),
            locality_violations: self.locality_violations,
            remote_fetches: self.remote_fetches,
            reassigned_tasks: self.reassigned_tasks,
            completed: self.completed,
            orphaned_pairs: self.orphaned_pairs.clone(),
        }
    }
}

/// Runs the schedule. Machines process their task lists in order at
/// `task_cost` per comparison. On failure, the failed machine's unfinished
/// tasks go one by one to the least-loaded surviving machine holding at
/// least one of the two items' groups (lowest index on tie); items absent
/// from the adopting machine are fetched remotely, once per (machine, item).
pub fn simulate(
    dist: &Distribution,
    placement: &Placement,
    schedule: &Schedule,
    config: &SimConfig,
) -> Result<SimReport, SimError> {
    if let Some(f) = config.failure {
        if f.machine >= dist.machines {
            return Err(SimError::BadFailureMachine(f.machine, dist.machines));
        }
    }
    // per-machine ordered task lists
    let mut per_machine: Vec<Vec<(u64, u64)>> = vec![Vec::new(); dist.machines];
    let mut expanded = Vec::new();
    for job in &schedule.jobs {
        expanded.clear();
        expand_job(job, placement, &mut expanded);
        for &(m, x, y) in &expanded {
            per_machine[m].push((x, y));
        }
    }

    let mut tasks_done = vec![0u64; dist.machines];
    let mut fetches_by_machine = vec![0u64; dist.machines];
    let mut locality_violations = 0u64;
    let mut reassigned = 0u64;
    let mut orphaned: Vec<(u64, u64)> = Vec::new();
    let mut fetched: HashSet<(usize, u64)> = HashSet::new();

    let local = |machine: usize, item: u64| dist.holds(machine, placement.group_of(item));

    let (failed, cutoff) = match config.failure {
        Some(f) => (Some(f.machine), f.after_tasks),
        None => (None, 0),
    };

    for m in 0..dist.machines {
        let limit = if Some(m) == failed {
            per_machine[m].len().min(cutoff as usize)
        } else {
            per_machine[m].len()
        };
        for &(x, y) in &per_machine[m][..limit] {
            if !local(m, x) || !local(m, y) {
                locality_violations += 1;
            }
        }
        tasks_done[m] = limit as u64;
    }

    if let Some(fm) = failed {
        let unfinished: Vec<(u64, u64)> = per_machine[fm][tasks_done[fm] as usize..].to_vec();
        for (x, y) in unfinished {
            let gx = placement.group_of(x);
            let gy = placement.group_of(y);
            let adopter = (0..dist.machines)
                .filter(|&i| i != fm && (dist.holds(i, gx) || dist.holds(i, gy)))
                .min_by_key(|&i| (tasks_done[i], i));
            match adopter {
                Some(a) => {
                    for item in [x, y] {
                        if !local(a, item) && fetched.insert((a, item)) {
                            fetches_by_machine[a] += 1;
                        }
                    }
                    tasks_done[a] += 1;
                    reassigned += 1;
                }
                None => orphaned.push((x, y)),
            }
        }
    }

    let per_machine_time: Vec<Frac> = (0..dist.machines)
        .map(|m| {
            config.task_cost * Frac::from(tasks_done[m])
                + config.remote_fetch_cost * Frac::from(fetches_by_machine[m])
        })
        .collect();
    let makespan = per_machine_time.iter().copied().max().unwrap_or_else(Frac::zero);
    let completed_tasks: u64 = tasks_done.iter().sum();
    Ok(SimReport {
        completed_tasks,
        per_machine_tasks: tasks_done,
        per_machine_time,
        makespan,
        locality_violations,
        remote_fetches: fetches_by_machine.iter().sum(),
        reassigned_tasks: reassigned,
        completed: orphaned.is_empty(),
        orphaned_pairs: orphaned,
    })
}
