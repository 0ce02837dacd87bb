//! Partition N items into data groups, place them per a distribution, and
//! assign every one of the C(N,2) comparison tasks to a machine that holds
//! both items' groups. Schedules stay at group granularity: inter-group
//! jobs cover whole group cross products; intra-group jobs cover contiguous
//! ranges of the canonical (colexicographic) pair enumeration.

use thiserror::Error;

use crate::bounds::Frac;
use crate::distribution::Distribution;

#[derive(Debug, Error)]
pub enum SchedulerError {
    #[error("distribution does not derive from a lambda=1 design; use the general scheduler")]
    NotLambdaOne,
    #[error("locality violation: groups {0} and {1} share no machine")]
    LocalityViolation(usize, usize),
    #[error("placement has {placement} groups but distribution has {distribution}")]
    GroupMismatch { placement: usize, distribution: usize },
}

/// Items 0..N-1 assigned to groups in contiguous runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub n_items: u64,
    pub group_sizes: Vec<u64>,
    /// start offset of each group's run (group_starts[g]..group_starts[g]+size)
    pub group_starts: Vec<u64>,
}

impl Placement {
    pub fn group_of(&self, item: u64) -> usize {
        debug_assert!(item < self.n_items);
        match self.group_starts.binary_search(&item) {
            Ok(g) => {
                // zero-size groups share a start; take the last one starting here
                let mut g = g;
                while g + 1 < self.group_starts.len() && self.group_starts[g + 1] == item {
                    g += 1;
                }
                g
            }
            Err(g) => g - 1,
        }
    }

    pub fn items_of(&self, group: usize) -> std::ops::Range<u64> {
        let start = self.group_starts[group];
        start..start + self.group_sizes[group]
    }
}

/// Largest-remainder apportionment of N items to groups proportional to s;
/// remainder ties broken by lower group index.
pub fn make_placement(dist: &Distribution, n_items: u64) -> Placement {
    let mut sizes = Vec::with_capacity(dist.groups);
    let mut remainders = Vec::with_capacity(dist.groups);
    let mut assigned = 0u64;
    for &sj in &dist.s {
        let target = sj * Frac::from(n_items);
        let fl = target.floor();
        let fl_int = fl.to_integer();
        sizes.push(fl_int);
        assigned += fl_int;
        remainders.push(target - fl);
    }
    let mut order: Vec<usize> = (0..dist.groups).collect();
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]).then(a.cmp(&b)));
    let mut leftover = n_items - assigned;
    for &g in &order {
        if leftover == 0 {
            break;
        }
        sizes[g] += 1;
        leftover -= 1;
    }
    let mut starts = Vec::with_capacity(dist.groups);
    let mut acc = 0u64;
    for &sz in &sizes {
        starts.push(acc);
        acc += sz;
    }
    debug_assert_eq!(acc, n_items);
    Placement { n_items, group_sizes: sizes, group_starts: starts }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Job {
    /// All size_a * size_b cross pairs between two groups, on one machine.
    Inter { group_a: usize, group_b: usize, machine: usize },
    /// A contiguous range [start, end) of the canonical colexicographic
    /// enumeration of a group's internal pairs.
    Intra { group: usize, machine: usize, start: u64, end: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub machines: usize,
    pub jobs: Vec<Job>,
    pub load: Vec<u64>,
}

/// Colexicographic pair enumeration: (0,1),(0,2),(1,2),(0,3),(1,3),(2,3),...
/// Index of (i,j) with i < j is C(j,2) + i.
pub fn colex_pair(t: u64) -> (u64, u64) {
    // largest j with j(j-1)/2 <= t
    let mut j = ((t * 2) as f64).sqrt() as u64 + 1;
    while j * (j - 1) / 2 > t {
        j -= 1;
    }
    while (j + 1) * j / 2 <= t {
        j += 1;
    }
    (t - j * (j - 1) / 2, j)
}

fn pairs_in(n: u64) -> u64 {
    n.saturating_sub(1) * n / 2
}

/// Picks, for each group, which `extra[g]` of its hosts receive the longer
/// intra range, spreading the long ranges across machines as evenly as
/// possible. This is a bipartite b-matching (groups supply extras, machines
/// have a cap), solved with Kuhn-style augmenting paths at the smallest
/// feasible cap; deterministic because all iteration is in ascending order.
fn choose_long_hosts(hosts: &[Vec<usize>], extra: &[u64], machines: usize) -> Vec<Vec<usize>> {
    let total: u64 = extra.iter().sum();
    if total == 0 {
        return vec![Vec::new(); hosts.len()];
    }
    let mut cap = total.div_ceil(machines as u64);
    loop {
        let mut taken: Vec<Vec<usize>> = vec![Vec::new(); hosts.len()]; // group -> machines
        let mut occupants: Vec<Vec<usize>> = vec![Vec::new(); machines]; // machine -> groups
        let mut ok = true;
        #[allow(clippy::needless_range_loop)] // g indexes extra and taken in parallel
        'groups: for g in 0..hosts.len() {
            for _ in 0..extra[g] {
                let mut visited = vec![false; machines];
                if !augment(g, cap, hosts, &mut taken, &mut occupants, &mut visited) {
                    ok = false;
                    break 'groups;
                }
            }
        }
        if ok {
            for t in &mut taken {
                t.sort_unstable();
            }
            return taken;
        }
        cap += 1;
    }
}

/// Tries to place one more long range of group `g` on some machine with
/// spare capacity, relocating already-placed long ranges if needed.
fn augment(
    g: usize,
    cap: u64,
    hosts: &[Vec<usize>],
    taken: &mut Vec<Vec<usize>>,
    occupants: &mut Vec<Vec<usize>>,
    visited: &mut [bool],
) -> bool {
    for &m in &hosts[g] {
        if visited[m] || taken[g].contains(&m) {
            continue;
        }
        visited[m] = true;
        if (occupants[m].len() as u64) < cap {
            taken[g].push(m);
            occupants[m].push(g);
            return true;
        }
        for i in 0..occupants[m].len() {
            let g2 = occupants[m][i];
            occupants[m].remove(i);
            taken[g2].retain(|&x| x != m);
            if augment(g2, cap, hosts, taken, occupants, visited) {
                taken[g].push(m);
                occupants[m].push(g);
                return true;
            }
            taken[g2].push(m);
            occupants[m].insert(i, g2);
        }
    }
    false
}

/// Splits every group's C(g,2) intra pairs into contiguous ranges across its
/// hosting machines (ascending), lengths differing by at most one; which
/// hosts receive the longer ranges is chosen globally so the per-machine
/// intra totals come out as equal as the incidence structure allows.
fn assign_intra(dist: &Distribution, placement: &Placement, jobs: &mut Vec<Job>, load: &mut [u64]) {
    let hosts: Vec<Vec<usize>> = (0..dist.groups).map(|g| dist.hosts_of(g)).collect();
    let totals: Vec<u64> = placement.group_sizes.iter().map(|&sz| pairs_in(sz)).collect();
    let extra: Vec<u64> = totals
        .iter()
        .zip(&hosts)
        .map(|(&t, h)| if h.is_empty() { 0 } else { t % h.len() as u64 })
        .collect();
    let long = choose_long_hosts(&hosts, &extra, dist.machines);
    for g in 0..dist.groups {
        let total = totals[g];
        if total == 0 || hosts[g].is_empty() {
            continue;
        }
        let base = total / hosts[g].len() as u64;
        let mut cursor = 0u64;
        for &machine in &hosts[g] {
            let len = base + u64::from(long[g].contains(&machine));
            if len == 0 {
                continue;
            }
            jobs.push(Job::Intra { group: g, machine, start: cursor, end: cursor + len });
            load[machine] += len;
            cursor += len;
        }
        debug_assert_eq!(cursor, total);
    }
}

/// Scheduler for distributions derived from 2-(v,k,1) designs: every
/// inter-group job has a unique eligible machine, and intra-group pairs are
/// split evenly across each group's r hosts.
pub fn make_schedule(
    dist: &Distribution,
    placement: &Placement,
) -> Result<Schedule, SchedulerError> {
    if dist.lambda != Some(1) {
        return Err(SchedulerError::NotLambdaOne);
    }
    check_placement(dist, placement)?;
    let mut jobs = Vec::new();
    let mut load = vec![0u64; dist.machines];
    for a in 0..dist.groups {
        for b in a + 1..dist.groups {
            let tasks = placement.group_sizes[a] * placement.group_sizes[b];
            if tasks == 0 {
                continue;
            }
            let machine = (0..dist.machines)
                .find(|&i| dist.holds(i, a) && dist.holds(i, b))
                .ok_or(SchedulerError::LocalityViolation(a, b))?;
            jobs.push(Job::Inter { group_a: a, group_b: b, machine });
            load[machine] += tasks;
        }
    }
    assign_intra(dist, placement, &mut jobs, &mut load);
    Ok(Schedule { machines: dist.machines, jobs, load })
}

/// Greedy scheduler for general distributions: group pairs in lexicographic
/// order each go to the currently least-loaded eligible machine (ties to
/// the lowest index). No balance guarantee.
pub fn make_schedule_general(
    dist: &Distribution,
    placement: &Placement,
) -> Result<Schedule, SchedulerError> {
    check_placement(dist, placement)?;
    let mut jobs = Vec::new();
    let mut load = vec![0u64; dist.machines];
    for a in 0..dist.groups {
        for b in a + 1..dist.groups {
            let eligible: Vec<usize> =
                (0..dist.machines).filter(|&i| dist.holds(i, a) && dist.holds(i, b)).collect();
            if eligible.is_empty() {
                return Err(SchedulerError::LocalityViolation(a, b));
            }
            let tasks = placement.group_sizes[a] * placement.group_sizes[b];
            if tasks == 0 {
                continue;
            }
            let machine = *eligible.iter().min_by_key(|&&i| (load[i], i)).unwrap();
            jobs.push(Job::Inter { group_a: a, group_b: b, machine });
            load[machine] += tasks;
        }
    }
    assign_intra(dist, placement, &mut jobs, &mut load);
    Ok(Schedule { machines: dist.machines, jobs, load })
}

fn check_placement(dist: &Distribution, placement: &Placement) -> Result<(), SchedulerError> {
    if placement.group_sizes.len() != dist.groups {
        return Err(SchedulerError::GroupMismatch {
            placement: placement.group_sizes.len(),
            distribution: dist.groups,
        });
    }
    Ok(())
}

/// Max load minus min load; a schedule is effectively load balanced iff
/// this is at most 1.
pub fn imbalance(s: &Schedule) -> u64 {
    match (s.load.iter().max(), s.load.iter().min()) {
        (Some(&max), Some(&min)) => max - min,
        _ => 0,
    }
}

/// Expands a schedule to explicit (machine, item, item) comparison tasks,
/// in per-job order.
pub fn expand(schedule: &Schedule, placement: &Placement) -> Vec<(usize, u64, u64)> {
    let mut tasks = Vec::new();
    for job in &schedule.jobs {
        expand_job(job, placement, &mut tasks);
    }
    tasks
}

pub fn expand_job(job: &Job, placement: &Placement, out: &mut Vec<(usize, u64, u64)>) {
    match *job {
        Job::Inter { group_a, group_b, machine } => {
            for x in placement.items_of(group_a) {
                for y in placement.items_of(group_b) {
                    out.push((machine, x, y));
                }
            }
        }
        Job::Intra { group, machine, start, end } => {
            let base = placement.group_starts[group];
            for t in start..end {
                let (i, j) = colex_pair(t);
                out.push((machine, base + i, base + j));
            }
        }
    }
}

// -- CSV formats --

/// Schedule CSV: `kind,group_a,group_b,machine,range_start,range_end`.
pub fn schedule_to_csv(s: &Schedule) -> String {
    let mut out = String::from("kind,group_a,group_b,machine,range_start,range_end\n");
    for job in &s.jobs {
        match *job {
            Job::Inter { group_a, group_b, machine } => {
                out.push_str(&format!("inter,{group_a},{group_b},{machine},,\n"));
            }
            Job::Intra { group, machine, start, end } => {
                out.push_str(&format!("intra,{group},,{machine},{start},{end}\n"));
            }
        }
    }
    out
}

/// Placement CSV: `item,group,machines` with `;`-separated machine indices.
pub fn placement_to_csv(placement: &Placement, dist: &Distribution) -> String {
    let mut out = String::from("item,group,machines\n");
    for g in 0..placement.group_sizes.len() {
        let hosts: Vec<String> = dist.hosts_of(g).iter().map(|m| m.to_string()).collect();
        let hosts = hosts.join(";");
        for item in placement.items_of(g) {
            out.push_str(&format!("{item},{g},{hosts}\n"));
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("csv parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub fn schedule_from_csv(text: &str, machines: usize) -> Result<Schedule, CsvError> {
    let mut jobs = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(CsvError::Parse { line: lineno, msg: "expected 6 columns".into() });
        }
        let parse = |s: &str, what: &str| -> Result<u64, CsvError> {
            s.parse()
                .map_err(|_| CsvError::Parse { line: lineno, msg: format!("invalid {what} '{s}'") })
        };
        match cols[0] {
            "inter" => jobs.push(Job::Inter {
                group_a: parse(cols[1], "group_a")? as usize,
                group_b: parse(cols[2], "group_b")? as usize,
                machine: parse(cols[3], "machine")? as usize,
            }),
            "intra" => jobs.push(Job::Intra {
                group: parse(cols[1], "group")? as usize,
                machine: parse(cols[3], "machine")? as usize,
                start: parse(cols[4], "range_start")?,
                end: parse(cols[5], "range_end")?,
            }),
            other => {
                return Err(CsvError::Parse {
                    line: lineno,
                    msg: format!("unknown kind '{other}'"),
                })
            }
        }
    }
    // loads need group sizes; pair with the placement via `rebuild_load`
    Ok(Schedule { machines, jobs, load: vec![0; machines] })
}

pub fn rebuild_load(schedule: &mut Schedule, placement: &Placement) {
    let mut load = vec![0u64; schedule.machines];
    for job in &schedule.jobs {
        match *job {
            Job::Inter { group_a, group_b, machine } => {
                load[machine] += placement.group_sizes[group_a] * placement.group_sizes[group_b];
            }
            Job::Intra { machine, start, end, .. } => load[machine] += end - start,
        }
    }
    schedule.load = load;
}

/// Parses the placement CSV back into a placement and the group->machines map.
pub fn placement_from_csv(text: &str) -> Result<(Placement, Vec<Vec<usize>>), CsvError> {
    let mut rows: Vec<(u64, usize, Vec<usize>)> = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(CsvError::Parse { line: lineno, msg: "expected 3 columns".into() });
        }
        let item: u64 = cols[0].parse().map_err(|_| CsvError::Parse {
            line: lineno,
            msg: format!("invalid item '{}'", cols[0]),
        })?;
        let group: usize = cols[1].parse().map_err(|_| CsvError::Parse {
            line: lineno,
            msg: format!("invalid group '{}'", cols[1]),
        })?;
        let machines = cols[2]
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|_| CsvError::Parse {
                    line: lineno,
                    msg: format!("invalid machine '{s}'"),
                })
            })
            .collect::<Result<Vec<usize>, _>>()?;
        rows.push((item, group, machines));
    }
    rows.sort_by_key(|&(item, _, _)| item);
    let n_items = rows.len() as u64;
    let n_groups = rows.iter().map(|&(_, g, _)| g + 1).max().unwrap_or(0);
    let mut sizes = vec![0u64; n_groups];
    let mut hosts: Vec<Vec<usize>> = vec![Vec::new(); n_groups];
    for (i, &(item, g, ref ms)) in rows.iter().enumerate() {
        if item != i as u64 {
            return Err(CsvError::Parse {
                line: 0,
                msg: format!("items are not contiguous from 0: expected {i}, found {item}"),
            });
        }
        sizes[g] += 1;
        if hosts[g].is_empty() {
            hosts[g] = ms.clone();
        }
    }
    let mut starts = Vec::with_capacity(n_groups);
    let mut acc = 0u64;
    for &sz in &sizes {
        starts.push(acc);
        acc += sz;
    }
    Ok((Placement { n_items, group_sizes: sizes, group_starts: starts }, hosts))
}
