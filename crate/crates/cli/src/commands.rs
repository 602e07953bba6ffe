//! One function per subcommand, each returning the report to print. Errors
//! map to process exit codes through [`exit_code`].

use anyhow::{Context, Result};
use bapsens::oracle::{brute_bap, brute_lex_assignment, brute_uniform_radius, EnumerationBudget, DEFAULT_TOLERANCE};
use bapsens::{
    apply_perturbation, assignment_sensitivity, edge_sensitivity, is_allowable, is_edge_allowable,
    lexicographic_assignment, solve_bap, validate_matrix, Assignment, AssignmentSensitivityOptions,
    EdgeSensitivityOptions, Error, Perturbation, TiePolicy, WeightMatrix,
};

use crate::formats::{assignment_from_pairs, edge_from_pair, parse_matrix, Format};
use crate::report::{assignment_report, edge_report, pairs, solve_report, Ext, Report};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NOT_BOTTLENECK: i32 = 3;
pub const EXIT_NOT_OPTIMAL: i32 = 4;
pub const EXIT_NOT_ALLOWABLE: i32 = 5;

pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::NoFeasibleAssignment) => EXIT_INFEASIBLE,
        Some(Error::NotABottleneckEdge(_)) => EXIT_NOT_BOTTLENECK,
        Some(Error::NotOptimalAssignment { .. }) => EXIT_NOT_OPTIMAL,
        _ => EXIT_PARSE,
    }
}

pub fn load_matrix(text: &str, format: Format) -> Result<WeightMatrix> {
    let raw = parse_matrix(text, format)?;
    Ok(validate_matrix(&raw)?)
}

/// Which assignment a command analyses.
#[derive(Clone, Debug, Default)]
pub enum AssignmentChoice {
    /// The solver's optimum.
    #[default]
    Solver,
    Lexicographic,
    /// 1-based pairs in the caller's orientation.
    Given(Vec<(usize, usize)>),
}

impl AssignmentChoice {
    pub fn resolve(&self, w: &WeightMatrix) -> Result<Assignment> {
        match self {
            AssignmentChoice::Solver => Ok(solve_bap(w)?.assignment),
            AssignmentChoice::Lexicographic => Ok(lexicographic_assignment(w)?.assignment),
            AssignmentChoice::Given(p) => assignment_from_pairs(w, p),
        }
    }
}

pub fn solve(w: &WeightMatrix) -> Result<Report> {
    Ok(solve_report(w, &solve_bap(w)?))
}

pub fn edge_sens(w: &WeightMatrix, anchor: Option<(usize, usize)>, cold: bool) -> Result<Report> {
    let anchor = anchor.map(|p| edge_from_pair(w, p)).transpose()?;
    let opts = if cold {
        EdgeSensitivityOptions::cold()
    } else {
        EdgeSensitivityOptions::warm()
    };
    Ok(edge_report(w, &edge_sensitivity(w, anchor, &opts)?))
}

pub fn assign_options(cold: bool, tie_policy: TiePolicy) -> AssignmentSensitivityOptions {
    AssignmentSensitivityOptions {
        warm_start: !cold,
        tie_policy,
        ..AssignmentSensitivityOptions::default()
    }
}

pub fn assign_sens(w: &WeightMatrix, choice: &AssignmentChoice, opts: &AssignmentSensitivityOptions) -> Result<Report> {
    let a = choice.resolve(w)?;
    Ok(assignment_report(w, &assignment_sensitivity(w, Some(&a), opts)?))
}

/// Largest uniform perturbation magnitude the assignment tolerates.
pub fn radius(w: &WeightMatrix, choice: &AssignmentChoice, opts: &AssignmentSensitivityOptions) -> Result<Report> {
    let full = assign_sens(w, choice, opts)?;
    Ok(Report {
        assignment: full.assignment,
        radius: full.radius,
        certified: full.certified,
        warnings: full.warnings,
        ..Report::new("radius", w)
    })
}

/// What `verify` checks the perturbation against.
#[derive(Clone, Debug)]
pub enum VerifyTarget {
    Assignment(AssignmentChoice),
    Anchor((usize, usize)),
}

pub fn verify(w: &WeightMatrix, perturbation: &[Vec<f64>], target: &VerifyTarget) -> Result<(Report, i32)> {
    let p = Perturbation::for_matrix(perturbation, w).context("perturbation")?;
    let perturbed = apply_perturbation(w, &p)?;
    let value = solve_bap(&perturbed).ok().map(|s| Ext(s.bottleneck_value));
    let mut report = Report {
        perturbed_bottleneck_value: value,
        ..Report::new("verify", w)
    };
    let ok = match target {
        VerifyTarget::Assignment(choice) => {
            let a = choice.resolve(w)?;
            report.assignment = Some(pairs(w, a.edges()));
            is_allowable(w, &a, &p)?
        }
        VerifyTarget::Anchor(pair) => {
            let e = edge_from_pair(w, *pair)?;
            report.bottleneck_edge = Some([pair.0, pair.1]);
            is_edge_allowable(w, e, &p)?
        }
    };
    report.allowable = Some(ok);
    Ok((report, if ok { 0 } else { EXIT_NOT_ALLOWABLE }))
}

/// Enumeration results, for cross-checking small instances. The radius is
/// that of the given assignment, else of the lexicographic one.
pub fn oracle(w: &WeightMatrix, choice: &AssignmentChoice) -> Result<Report> {
    let budget = EnumerationBudget::default();
    let best = brute_bap(w, budget)?;
    let target = match choice {
        AssignmentChoice::Solver | AssignmentChoice::Lexicographic => brute_lex_assignment(w, budget)?,
        AssignmentChoice::Given(p) => assignment_from_pairs(w, p)?,
    };
    let radius = brute_uniform_radius(w, &target, budget, DEFAULT_TOLERANCE)?;
    Ok(Report {
        bottleneck_value: Some(Ext(best.value)),
        optimizers: Some(best.optimizers.iter().map(|a| pairs(w, a.edges())).collect()),
        assignment: Some(pairs(w, target.edges())),
        radius: Some(Ext(radius)),
        ..Report::new("oracle", w)
    })
}
