//! Random test corpus and the allowability sampling battery.

use bapsens::{
    is_allowable, is_edge_allowable, solve_bap, validate_matrix, AssignmentSensitivityReport, Edge,
    EdgeSensitivityReport, IntervalArray, Perturbation, Side, WeightMatrix, MISSING,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Infinite interval ends are truncated to this when sampling.
pub const CLAMP: f64 = 1e6;
pub const BOUNDARY_SLACK: f64 = 1e-6;

/// Feasible matrices of shape up to `max_dim x max_dim` in either
/// orientation, distinct integer weights, each entry missing with
/// probability `missing`. Rows are in the caller's orientation.
pub fn corpus(seed: u64, count: usize, max_dim: usize, missing: f64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_dim);
        let m = rng.gen_range(1..=max_dim);
        let mut pool: Vec<u32> = (0..(4 * n * m) as u32 + 10).collect();
        pool.shuffle(&mut rng);
        let raw: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if rng.gen_bool(missing) {
                            MISSING
                        } else {
                            f64::from(pool[i * m + j])
                        }
                    })
                    .collect()
            })
            .collect();
        let feasible = validate_matrix(&raw).is_ok_and(|w| solve_bap(&w).is_ok());
        if feasible {
            out.push(raw);
        }
    }
    out
}

/// Uniform sample from `l` with infinite ends truncated to [`CLAMP`].
pub fn sample_inside<R: Rng>(rng: &mut R, l: &IntervalArray) -> Perturbation {
    let (rows, cols) = l.dims();
    let mut p = Perturbation::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let e = Edge::new(r, c);
            p.set(e, rng.gen_range(-l.lower(e).min(CLAMP)..=l.upper(e).min(CLAMP)));
        }
    }
    p
}

/// Perturbations to try against an interval array: `samples` uniform
/// draws, then one corner per edge.
pub fn probes<R: Rng>(rng: &mut R, w: &WeightMatrix, l: &IntervalArray, samples: usize) -> Vec<Perturbation> {
    let mut v: Vec<Perturbation> = (0..samples).map(|_| sample_inside(rng, l)).collect();
    v.extend(w.indices().map(|e| l.corner_perturbation(e, CLAMP)));
    v
}

/// Number of probes under which the anchor stops being a bottleneck edge.
pub fn edge_report_failures<R: Rng>(rng: &mut R, w: &WeightMatrix, r: &EdgeSensitivityReport, samples: usize) -> usize {
    probes(rng, w, &r.intervals, samples)
        .iter()
        .filter(|p| !is_edge_allowable(w, r.anchor, p).unwrap_or(false))
        .count()
}

/// Number of probes under which the assignment stops being optimal.
pub fn assignment_report_failures<R: Rng>(
    rng: &mut R,
    w: &WeightMatrix,
    r: &AssignmentSensitivityReport,
    samples: usize,
) -> usize {
    probes(rng, w, &r.intervals, samples)
        .iter()
        .filter(|p| !is_allowable(w, &r.assignment, p).unwrap_or(false))
        .count()
}

/// Corner with the first determined upper bound pushed just past its end.
/// `None` when nothing was determined.
pub fn boundary_probe(r: &AssignmentSensitivityReport) -> Option<Perturbation> {
    let first = r.determined_log().iter().find(|d| d.side == Side::Upper)?;
    let mut p = r.intervals.corner_perturbation(first.edge, CLAMP);
    p.set(first.edge, first.value + BOUNDARY_SLACK);
    Some(p)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub instances: usize,
    pub edge_reports: usize,
    pub assignment_reports: usize,
    pub probes: usize,
    pub allowability_failures: usize,
    pub boundary_checks: usize,
    pub boundary_failures: usize,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.allowability_failures == 0 && self.boundary_failures == 0
    }
}

/// Runs every probe kind over a fresh corpus.
pub fn run_battery(seed: u64, count: usize, samples: usize, cold: bool) -> anyhow::Result<SuiteSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut s = SuiteSummary {
        seed,
        ..SuiteSummary::default()
    };
    let edge_opts = if cold {
        bapsens::EdgeSensitivityOptions::cold()
    } else {
        bapsens::EdgeSensitivityOptions::warm()
    };
    let assign_opts = bapsens::AssignmentSensitivityOptions {
        warm_start: !cold,
        ..Default::default()
    };
    for raw in corpus(seed, count, 6, 0.2) {
        let w = validate_matrix(&raw)?;
        s.instances += 1;
        let probes_per_report = samples + w.rows() * w.cols();

        let er = bapsens::edge_sensitivity(&w, None, &edge_opts)?;
        s.edge_reports += 1;
        s.probes += probes_per_report;
        s.allowability_failures += edge_report_failures(&mut rng, &w, &er, samples);

        let ar = bapsens::assignment_sensitivity(&w, None, &assign_opts)?;
        s.assignment_reports += 1;
        s.probes += probes_per_report;
        s.allowability_failures += assignment_report_failures(&mut rng, &w, &ar, samples);

        if let Some(p) = boundary_probe(&ar) {
            s.boundary_checks += 1;
            if is_allowable(&w, &ar.assignment, &p)? {
                s.boundary_failures += 1;
            }
        }
    }
    Ok(s)
}
