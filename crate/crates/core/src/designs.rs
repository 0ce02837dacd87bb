//! Incidence structures: projective planes, affine planes, Steiner triple
//! systems, Hermitian unitals, and file-ingested 2-(v,k,lambda) designs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::field::{prime_power, FieldElement, FieldSpec};

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("field construction failed: {0}")]
    Field(#[from] crate::field::FieldError),
    #[error("no projective plane of order {n}: {reason}")]
    NoPlane { n: u64, reason: String },
    #[error("affine plane order must be a prime power >= 2, got {0}")]
    BadAffineOrder(u64),
    #[error("Steiner triple system requires v = 1 or 3 (mod 6) and v >= 7, got {0}")]
    BadStsOrder(u64),
    #[error("Hermitian unital requires a prime power q with q^2 within the field cap, got {0}")]
    BadUnitalOrder(u64),
    #[error("malformed design: {0}")]
    Malformed(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// BIBD parameters of a 2-(v,k,lambda) design with m blocks and replication r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BibdParams {
    pub v: usize,
    pub m: usize,
    pub k: usize,
    pub r: usize,
    pub lambda: usize,
}

/// An incidence structure: v points and a list of blocks of point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub v: usize,
    pub blocks: Vec<Vec<usize>>,
    pub params: Option<BibdParams>,
    pub label: String,
}

/// Outcome of `verify_design`: either confirmed BIBD parameters, or a
/// pair-covering report for non-uniform structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignCheck {
    Bibd(BibdParams),
    PairCovering(PairCoverReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCoverReport {
    pub covers_all_pairs: bool,
    pub uncovered: Vec<(usize, usize)>,
    /// multiplicity -> number of point pairs covered that many times
    pub multiplicity_histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneExistence {
    ExistsPrimePower,
    RuledOutBrc,
    RuledOutKnown,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneOrderStatus {
    pub order: u64,
    pub status: PlaneExistence,
}

impl fmt::Display for PlaneExistence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneExistence::ExistsPrimePower => write!(f, "exists-prime-power"),
            PlaneExistence::RuledOutBrc => write!(f, "ruled-out-BRC"),
            PlaneExistence::RuledOutKnown => write!(f, "ruled-out-known"),
            PlaneExistence::Unknown => write!(f, "unknown"),
        }
    }
}

fn is_sum_of_two_squares(n: u64) -> bool {
    let mut a = 0;
    while a * a <= n {
        let rest = n - a * a;
        let b = rest.isqrt();
        if b * b == rest {
            return true;
        }
        a += 1;
    }
    false
}

/// Existence status of a projective plane of order n: prime powers exist,
/// n = 10 is ruled out by exhaustive search, and orders n = 1, 2 (mod 4)
/// that are not a sum of two squares are ruled out by Bruck-Ryser-Chowla.
pub fn plane_order_status(n: u64) -> PlaneOrderStatus {
    let status = if n == 1 || prime_power(n).is_some() {
        PlaneExistence::ExistsPrimePower
    } else if n == 10 {
        PlaneExistence::RuledOutKnown
    } else if (n % 4 == 1 || n % 4 == 2) && !is_sum_of_two_squares(n) {
        PlaneExistence::RuledOutBrc
    } else {
        PlaneExistence::Unknown
    };
    PlaneOrderStatus { order: n, status }
}

/// Homogeneous triple over GF(q), normalized so the leftmost nonzero
/// coordinate is 1. Ordered lexicographically by coefficient sequence.
type Triple = [FieldElement; 3];

fn normalized_triples(f: &FieldSpec) -> Vec<Triple> {
    let zero = f.zero();
    let one = f.one();
    let mut triples = Vec::with_capacity((f.q * f.q + f.q + 1) as usize);
    triples.push([zero.clone(), zero.clone(), one.clone()]);
    for z in f.elements() {
        triples.push([zero.clone(), one.clone(), z]);
    }
    for y in f.elements() {
        for z in f.elements() {
            triples.push([one.clone(), y.clone(), z]);
        }
    }
    triples.sort();
    triples
}

fn dot_is_zero(f: &FieldSpec, a: &Triple, b: &Triple) -> bool {
    let mut acc = f.zero();
    for i in 0..3 {
        let prod = f.mul(&a[i], &b[i]).expect("same field");
        acc = f.add(&acc, &prod).expect("same field");
    }
    f.is_zero(&acc)
}

/// PG(2,n): n^2+n+1 points and lines, lines of n+1 points, lambda = 1.
/// n = 1 is the triangle; prime powers go through GF(n) homogeneous
/// coordinates with lexicographic point/line order.
pub fn construct_projective_plane(n: u64) -> Result<Design, DesignError> {
    if n == 1 {
        return Ok(Design {
            v: 3,
            blocks: vec![vec![0, 1], vec![0, 2], vec![1, 2]],
            params: Some(BibdParams { v: 3, m: 3, k: 2, r: 2, lambda: 1 }),
            label: "PG(2,1)".to_string(),
        });
    }
    let (p, r) = prime_power(n).ok_or_else(|| DesignError::NoPlane {
        n,
        reason: match plane_order_status(n).status {
            PlaneExistence::RuledOutBrc => {
                format!("order {n} is ruled out by the Bruck-Ryser-Chowla condition")
            }
            PlaneExistence::RuledOutKnown => {
                format!("order {n} is known not to exist (exhaustive computer search)")
            }
            _ => format!("order {n} is not a prime power; no construction known"),
        },
    })?;
    let f = FieldSpec::new(p, r)?;
    let points = normalized_triples(&f);
    let lines = points.clone(); // self-dual coordinate set
    let blocks: Vec<Vec<usize>> = lines
        .iter()
        .map(|line| (0..points.len()).filter(|&j| dot_is_zero(&f, line, &points[j])).collect())
        .collect();
    let m = (n * n + n + 1) as usize;
    debug_assert_eq!(points.len(), m);
    Ok(Design {
        v: m,
        blocks,
        params: Some(BibdParams { v: m, m, k: (n + 1) as usize, r: (n + 1) as usize, lambda: 1 }),
        label: format!("PG(2,{n})"),
    })
}

/// AG(2,n): obtained from PG(2,n) by deleting the lexicographically last
/// line and the points on it.
pub fn construct_affine_plane(n: u64) -> Result<Design, DesignError> {
    if n < 2 || prime_power(n).is_none() {
        return Err(DesignError::BadAffineOrder(n));
    }
    let pg = construct_projective_plane(n)?;
    let last = pg.blocks.last().expect("plane has blocks").clone();
    let mut keep = vec![true; pg.v];
    for &pt in &last {
        keep[pt] = false;
    }
    let mut remap = vec![usize::MAX; pg.v];
    let mut next = 0;
    for (old, &k) in keep.iter().enumerate() {
        if k {
            remap[old] = next;
            next += 1;
        }
    }
    let blocks: Vec<Vec<usize>> = pg.blocks[..pg.blocks.len() - 1]
        .iter()
        .map(|b| b.iter().filter(|&&pt| keep[pt]).map(|&pt| remap[pt]).collect())
        .collect();
    let v = (n * n) as usize;
    debug_assert_eq!(next, v);
    Ok(Design {
        v,
        blocks,
        params: Some(BibdParams {
            v,
            m: (n * n + n) as usize,
            k: n as usize,
            r: (n + 1) as usize,
            lambda: 1,
        }),
        label: format!("AG(2,{n})"),
    })
}

/// STS(v), a 2-(v,3,1) design: Bose construction for v = 3 (mod 6),
/// Skolem construction for v = 1 (mod 6).
pub fn construct_steiner_triple_system(v: u64) -> Result<Design, DesignError> {
    if v < 7 || (v % 6 != 1 && v % 6 != 3) {
        return Err(DesignError::BadStsOrder(v));
    }
    let v = v as usize;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if v % 6 == 3 {
        // Bose: points Z_{2t+1} x {0,1,2}; x*y = (x+y)(t+1) mod 2t+1 is an
        // idempotent commutative quasigroup
        let t = (v - 3) / 6;
        let q = 2 * t + 1;
        let pt = |x: usize, c: usize| 3 * x + c;
        let star = |x: usize, y: usize| ((x + y) * (t + 1)) % q;
        for x in 0..q {
            blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
        }
        for x in 0..q {
            for y in x + 1..q {
                for c in 0..3 {
                    blocks.push(vec![pt(x, c), pt(y, c), pt(star(x, y), (c + 1) % 3)]);
                }
            }
        }
    } else {
        // Skolem: points (Z_{2t} x {0,1,2}) + infinity; half-idempotent
        // commutative quasigroup h(x+y) with h(2k)=k, h(2k+1)=k+t
        let t = (v - 1) / 6;
        let q = 2 * t;
        let inf = v - 1;
        let pt = |x: usize, c: usize| 3 * x + c;
        let star = |x: usize, y: usize| {
            let z = (x + y) % q;
            if z.is_multiple_of(2) {
                z / 2
            } else {
                (z - 1) / 2 + t
            }
        };
        for x in 0..t {
            blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
        }
        for x in 0..t {
            for c in 0..3 {
                blocks.push(vec![inf, pt(t + x, c), pt(x, (c + 1) % 3)]);
            }
        }
        for x in 0..q {
            for y in x + 1..q {
                for c in 0..3 {
                    blocks.push(vec![pt(x, c), pt(y, c), pt(star(x, y), (c + 1) % 3)]);
                }
            }
        }
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    let m = v * (v - 1) / 6;
    debug_assert_eq!(blocks.len(), m);
    Ok(Design {
        v,
        blocks,
        params: Some(BibdParams { v, m, k: 3, r: (v - 1) / 2, lambda: 1 }),
        label: format!("STS({v})"),
    })
}

/// Hermitian unital, a 2-(q^3+1, q+1, 1) design: the points of PG(2,q^2)
/// on the curve x^(q+1) + y^(q+1) + z^(q+1) = 0, blocked by secant lines.
pub fn construct_hermitian_unital(q: u64) -> Result<Design, DesignError> {
    let (p, r) = prime_power(q).ok_or(DesignError::BadUnitalOrder(q))?;
    let f = FieldSpec::new(p, 2 * r).map_err(|_| DesignError::BadUnitalOrder(q))?;
    let triples = normalized_triples(&f);
    let norm_zero = |t: &Triple| -> bool {
        let mut acc = f.zero();
        for e in t {
            let n = f.pow(e, q + 1).expect("same field");
            acc = f.add(&acc, &n).expect("same field");
        }
        f.is_zero(&acc)
    };
    let curve: Vec<usize> = (0..triples.len()).filter(|&i| norm_zero(&triples[i])).collect();
    let v = (q * q * q + 1) as usize;
    debug_assert_eq!(curve.len(), v);
    let curve_index: BTreeMap<usize, usize> =
        curve.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for line in &triples {
        let hit: Vec<usize> = curve
            .iter()
            .filter(|&&pt| dot_is_zero(&f, line, &triples[pt]))
            .map(|pt| curve_index[pt])
            .collect();
        if hit.len() >= 2 {
            debug_assert_eq!(hit.len(), (q + 1) as usize);
            blocks.push(hit);
        }
    }
    blocks.sort();
    let m = (q * q * (q * q - q + 1)) as usize;
    debug_assert_eq!(blocks.len(), m);
    Ok(Design {
        v,
        blocks,
        params: Some(BibdParams { v, m, k: (q + 1) as usize, r: (q * q) as usize, lambda: 1 }),
        label: format!("unital({q})"),
    })
}

fn check_well_formed(d: &Design) -> Result<(), DesignError> {
    for (i, b) in d.blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(DesignError::Malformed(format!("block {i} is empty")));
        }
        for w in b.windows(2) {
            if w[0] >= w[1] {
                return Err(DesignError::Malformed(format!(
                    "block {i} is not strictly increasing at point {}",
                    w[1]
                )));
            }
        }
        if *b.last().unwrap() >= d.v {
            return Err(DesignError::Malformed(format!(
                "block {i} references point {} outside [0,{})",
                b.last().unwrap(),
                d.v
            )));
        }
    }
    Ok(())
}

/// Checks a design by exhaustive pair enumeration: returns BIBD parameters
/// when block size, replication, and pair multiplicity are all uniform,
/// otherwise a pair-covering report.
pub fn verify_design(d: &Design) -> Result<DesignCheck, DesignError> {
    check_well_formed(d)?;
    let v = d.v;
    let m = d.blocks.len();
    let mut pair_count = vec![0usize; v * v];
    let mut degree = vec![0usize; v];
    for b in &d.blocks {
        for (i, &x) in b.iter().enumerate() {
            degree[x] += 1;
            for &y in &b[i + 1..] {
                pair_count[x * v + y] += 1;
            }
        }
    }
    let k0 = d.blocks[0].len();
    let uniform_k = d.blocks.iter().all(|b| b.len() == k0);
    let r0 = degree[0];
    let uniform_r = degree.iter().all(|&r| r == r0);
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut uncovered = Vec::new();
    let mut lambda0 = None;
    let mut uniform_lambda = true;
    for x in 0..v {
        for y in x + 1..v {
            let c = pair_count[x * v + y];
            *histogram.entry(c).or_insert(0) += 1;
            if c == 0 {
                uncovered.push((x, y));
            }
            match lambda0 {
                None => lambda0 = Some(c),
                Some(l) if l != c => uniform_lambda = false,
                _ => {}
            }
        }
    }
    let lambda = lambda0.unwrap_or(0);
    if uniform_k && uniform_r && uniform_lambda && lambda >= 1 && v > 1 {
        let params = BibdParams { v, m, k: k0, r: r0, lambda };
        // sanity relations vr = mk and r(k-1) = lambda(v-1)
        debug_assert_eq!(v * r0, m * k0);
        debug_assert_eq!(r0 * (k0 - 1), lambda * (v - 1));
        Ok(DesignCheck::Bibd(params))
    } else {
        Ok(DesignCheck::PairCovering(PairCoverReport {
            covers_all_pairs: uncovered.is_empty(),
            uncovered,
            multiplicity_histogram: histogram,
        }))
    }
}

/// Admissibility of 2-(v,k,lambda) parameters: r = lambda(v-1)/(k-1) and
/// m = vr/k when both are integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Admissible { m: u64, r: u64 },
    Inadmissible,
}

pub fn bibd_block_count(v: u64, k: u64, lambda: u64) -> Admissibility {
    assert!(v > k && k >= 2 && lambda >= 1, "require v > k >= 2 and lambda >= 1");
    let rn = lambda * (v - 1);
    if !rn.is_multiple_of(k - 1) {
        return Admissibility::Inadmissible;
    }
    let r = rn / (k - 1);
    if !(v * r).is_multiple_of(k) {
        return Admissibility::Inadmissible;
    }
    Admissibility::Admissible { m: v * r / k, r }
}

/// Which closed-form storage-limit case 2-(v,k,1) parameters fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    /// v = k: everything on one machine
    TrivialVEqK,
    /// v = k^2: an affine plane, limit 1/floor(sqrt(m))
    AffineVEqKSquared,
    /// v = k(2k-1): m = 4k^2-1, close to but above the floor bound
    NearOptimal,
    /// r <= sqrt(m)+1: limit equals (floor(sqrt(m))+1)/m
    BoundMatching,
    Other,
}

pub fn classify_bibd_bound_case(v: u64, k: u64) -> Result<BoundCase, DesignError> {
    if v == k {
        return Ok(BoundCase::TrivialVEqK);
    }
    let (m, r) = match bibd_block_count(v, k, 1) {
        Admissibility::Admissible { m, r } => (m, r),
        Admissibility::Inadmissible => {
            return Err(DesignError::Malformed(format!(
                "2-({v},{k},1) parameters are inadmissible"
            )))
        }
    };
    let s = m.isqrt();
    if v == k * k {
        // k/v = 1/k and floor(sqrt(m)) = floor(sqrt(k^2+k)) = k
        debug_assert_eq!(s, k);
        return Ok(BoundCase::AffineVEqKSquared);
    }
    if v == k * (2 * k - 1) {
        debug_assert_eq!(m, 4 * k * k - 1);
        debug_assert_eq!(s, 2 * k - 1);
        return Ok(BoundCase::NearOptimal);
    }
    if (r - 1) * (r - 1) <= m {
        // k/v = r/m = (floor(sqrt(m))+1)/m
        debug_assert_eq!(r, s + 1);
        return Ok(BoundCase::BoundMatching);
    }
    Ok(BoundCase::Other)
}

/// Writes a design in the text format: a header line
/// `design v=<v> b=<b> [k=<k>] [lambda=<l>]` followed by one line of
/// strictly increasing point indices per block.
pub fn save_design(d: &Design, path: &Path) -> Result<(), DesignError> {
    std::fs::write(path, render_design(d))?;
    Ok(())
}

pub fn render_design(d: &Design) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", d.label));
    match d.params {
        Some(p) => out.push_str(&format!(
            "design v={} b={} k={} lambda={}\n",
            d.v,
            d.blocks.len(),
            p.k,
            p.lambda
        )),
        None => out.push_str(&format!("design v={} b={}\n", d.v, d.blocks.len())),
    }
    for b in &d.blocks {
        let line: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_design(path: &Path) -> Result<Design, DesignError> {
    let text = std::fs::read_to_string(path)?;
    let label = format!("file:{}", path.display());
    parse_design(&text, label)
}

pub fn parse_design(text: &str, label: String) -> Result<Design, DesignError> {
    let mut header: Option<(usize, usize, Option<usize>, Option<usize>)> = None;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            let mut fields = line.split_whitespace();
            if fields.next() != Some("design") {
                return Err(DesignError::Parse {
                    line: lineno,
                    msg: "expected header starting with 'design'".into(),
                });
            }
            let (mut v, mut b, mut k, mut lambda) = (None, None, None, None);
            for field in fields {
                let (key, val) = field.split_once('=').ok_or_else(|| DesignError::Parse {
                    line: lineno,
                    msg: format!("malformed header field '{field}'"),
                })?;
                let n: usize = val.parse().map_err(|_| DesignError::Parse {
                    line: lineno,
                    msg: format!("invalid integer '{val}'"),
                })?;
                match key {
                    "v" => v = Some(n),
                    "b" => b = Some(n),
                    "k" => k = Some(n),
                    "lambda" => lambda = Some(n),
                    _ => {
                        return Err(DesignError::Parse {
                            line: lineno,
                            msg: format!("unknown header field '{key}'"),
                        })
                    }
                }
            }
            let v = v.ok_or(DesignError::Parse { line: lineno, msg: "missing v=".into() })?;
            let b = b.ok_or(DesignError::Parse { line: lineno, msg: "missing b=".into() })?;
            header = Some((v, b, k, lambda));
            continue;
        }
        let mut block = Vec::new();
        for tok in line.split_whitespace() {
            let p: usize = tok.parse().map_err(|_| DesignError::Parse {
                line: lineno,
                msg: format!("invalid point index '{tok}'"),
            })?;
            if let Some(&last) = block.last() {
                if p <= last {
                    return Err(DesignError::Parse {
                        line: lineno,
                        msg: format!("point {p} repeats or breaks increasing order"),
                    });
                }
            }
            block.push(p);
        }
        blocks.push(block);
    }
    let (v, b, k, lambda) =
        header.ok_or(DesignError::Parse { line: 0, msg: "missing design header".into() })?;
    if blocks.len() != b {
        return Err(DesignError::Parse {
            line: 0,
            msg: format!("header declares b={b} blocks but file has {}", blocks.len()),
        });
    }
    let params = match (k, lambda) {
        (Some(k), Some(lambda)) => {
            let degree_sum: usize = blocks.iter().map(|b| b.len()).sum();
            if !degree_sum.is_multiple_of(v) {
                None
            } else {
                Some(BibdParams { v, m: b, k, r: degree_sum / v, lambda })
            }
        }
        _ => None,
    };
    let d = Design { v, blocks, params, label };
    check_well_formed(&d)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_plane_axioms(d: &Design, n: usize, projective: bool) {
        let (points, line_size, point_degree) =
            if projective { (n * n + n + 1, n + 1, n + 1) } else { (n * n, n, n + 1) };
        assert_eq!(d.v, points);
        for b in &d.blocks {
            assert_eq!(b.len(), line_size, "{}: line size", d.label);
        }
        let mut degree = vec![0usize; d.v];
        let mut pair = vec![0usize; d.v * d.v];
        for b in &d.blocks {
            for (i, &x) in b.iter().enumerate() {
                degree[x] += 1;
                for &y in &b[i + 1..] {
                    pair[x * d.v + y] += 1;
                }
            }
        }
        assert!(degree.iter().all(|&r| r == point_degree), "{}: point degree", d.label);
        for x in 0..d.v {
            for y in x + 1..d.v {
                assert_eq!(pair[x * d.v + y], 1, "{}: pair ({x},{y})", d.label);
            }
        }
        if projective {
            // every pair of lines meets in exactly one point
            for (i, a) in d.blocks.iter().enumerate() {
                for b in &d.blocks[i + 1..] {
                    let common = a.iter().filter(|p| b.contains(p)).count();
                    assert_eq!(common, 1, "{}: line intersection", d.label);
                }
            }
        }
    }

    #[test]
    fn fano_plane() {
        let d = construct_projective_plane(2).unwrap();
        assert_eq!(d.v, 7);
        assert_eq!(d.blocks.len(), 7);
        assert_plane_axioms(&d, 2, true);
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 7, m: 7, k: 3, r: 3, lambda: 1 })
        );
    }

    #[test]
    fn triangle_plane() {
        let d = construct_projective_plane(1).unwrap();
        assert_eq!(d.v, 3);
        assert_eq!(d.blocks, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn pg_2_4() {
        let d = construct_projective_plane(4).unwrap();
        assert_eq!(d.v, 21);
        assert_eq!(d.blocks.len(), 21);
        assert!(d.blocks.iter().all(|b| b.len() == 5));
        match verify_design(&d).unwrap() {
            DesignCheck::Bibd(p) => {
                assert_eq!((p.v, p.m, p.k, p.r, p.lambda), (21, 21, 5, 5, 1));
                assert_eq!(p.r * (p.k - 1), p.lambda * (p.v - 1));
            }
            other => panic!("expected BIBD, got {other:?}"),
        }
    }

    #[test]
    fn plane_order_six_rejected() {
        let err = construct_projective_plane(6).unwrap_err();
        assert!(matches!(err, DesignError::NoPlane { n: 6, .. }));
        let err = construct_projective_plane(10).unwrap_err();
        assert!(err.to_string().contains("computer search"));
    }

    #[test]
    fn plane_axioms_exhaustive_small_orders() {
        for n in [2u64, 3, 4, 5, 7, 8, 9] {
            let pg = construct_projective_plane(n).unwrap();
            assert_plane_axioms(&pg, n as usize, true);
            let ag = construct_affine_plane(n).unwrap();
            assert_plane_axioms(&ag, n as usize, false);
            assert_eq!(pg.v - ag.v, n as usize + 1);
            assert_eq!(pg.blocks.len() - ag.blocks.len(), 1);
        }
    }

    #[test]
    fn affine_plane_small() {
        let d = construct_affine_plane(2).unwrap();
        assert_eq!((d.v, d.blocks.len()), (4, 6));
        let d = construct_affine_plane(3).unwrap();
        assert_eq!((d.v, d.blocks.len()), (9, 12));
        let d = construct_affine_plane(5).unwrap();
        assert_eq!((d.v, d.blocks.len()), (25, 30));
        assert!(construct_affine_plane(6).is_err());
    }

    #[test]
    fn constructors_deterministic() {
        assert_eq!(construct_projective_plane(4).unwrap(), construct_projective_plane(4).unwrap());
        assert_eq!(construct_affine_plane(3).unwrap(), construct_affine_plane(3).unwrap());
        assert_eq!(
            construct_steiner_triple_system(13).unwrap(),
            construct_steiner_triple_system(13).unwrap()
        );
    }

    #[test]
    fn steiner_triple_systems() {
        let d = construct_steiner_triple_system(13).unwrap();
        assert_eq!((d.v, d.blocks.len()), (13, 26));
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 13, m: 26, k: 3, r: 6, lambda: 1 })
        );
        let d = construct_steiner_triple_system(19).unwrap();
        assert_eq!((d.v, d.blocks.len()), (19, 57));
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 19, m: 57, k: 3, r: 9, lambda: 1 })
        );
        let d = construct_steiner_triple_system(9).unwrap();
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 9, m: 12, k: 3, r: 4, lambda: 1 })
        );
        let d = construct_steiner_triple_system(7).unwrap();
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 7, m: 7, k: 3, r: 3, lambda: 1 })
        );
        assert!(construct_steiner_triple_system(11).is_err());
        assert!(construct_steiner_triple_system(12).is_err());
    }

    #[test]
    fn hermitian_unitals() {
        let d = construct_hermitian_unital(2).unwrap();
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 9, m: 12, k: 3, r: 4, lambda: 1 })
        );
        let d = construct_hermitian_unital(3).unwrap();
        assert_eq!((d.v, d.blocks.len()), (28, 63));
        assert_eq!(
            verify_design(&d).unwrap(),
            DesignCheck::Bibd(BibdParams { v: 28, m: 63, k: 4, r: 9, lambda: 1 })
        );
        assert!(construct_hermitian_unital(6).is_err());
    }

    #[test]
    fn verify_reports_missing_pairs() {
        let mut d = construct_projective_plane(2).unwrap();
        let removed = d.blocks.remove(0);
        d.params = None;
        match verify_design(&d).unwrap() {
            DesignCheck::PairCovering(rep) => {
                assert!(!rep.covers_all_pairs);
                assert_eq!(rep.uncovered.len(), 3);
                for (x, y) in &rep.uncovered {
                    assert!(removed.contains(x) && removed.contains(y));
                }
            }
            other => panic!("expected pair-covering report, got {other:?}"),
        }
    }

    #[test]
    fn block_count_formula() {
        assert_eq!(bibd_block_count(25, 4, 1), Admissibility::Admissible { m: 50, r: 8 });
        assert_eq!(bibd_block_count(19, 3, 1), Admissibility::Admissible { m: 57, r: 9 });
        assert_eq!(bibd_block_count(8, 3, 1), Admissibility::Inadmissible);
    }

    #[test]
    fn bound_case_classification() {
        assert_eq!(classify_bibd_bound_case(25, 5).unwrap(), BoundCase::AffineVEqKSquared);
        assert_eq!(classify_bibd_bound_case(15, 3).unwrap(), BoundCase::NearOptimal);
        assert_eq!(classify_bibd_bound_case(13, 3).unwrap(), BoundCase::BoundMatching);
        assert_eq!(classify_bibd_bound_case(3, 3).unwrap(), BoundCase::TrivialVEqK);
        assert_eq!(classify_bibd_bound_case(19, 3).unwrap(), BoundCase::Other);
    }

    #[test]
    fn plane_status_table() {
        use PlaneExistence::*;
        assert_eq!(plane_order_status(6).status, RuledOutBrc);
        assert_eq!(plane_order_status(10).status, RuledOutKnown);
        assert_eq!(plane_order_status(12).status, Unknown);
        assert_eq!(plane_order_status(27).status, ExistsPrimePower);
        assert_eq!(plane_order_status(1).status, ExistsPrimePower);
    }

    #[test]
    fn design_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fano.design");
        let d = construct_projective_plane(2).unwrap();
        save_design(&d, &path).unwrap();
        let loaded = load_design(&path).unwrap();
        assert_eq!(loaded.v, d.v);
        assert_eq!(loaded.blocks, d.blocks);
        assert_eq!(loaded.params, d.params);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_design("design v=3 b=1\n0 0 1\n", "t".into()).unwrap_err();
        match err {
            DesignError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_design("design v=3\n", "t".into()).unwrap_err();
        assert!(err.to_string().contains("missing b="));
    }
}
