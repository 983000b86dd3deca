//! Bundled case studies with their expected outcomes.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use polysolve_core::fixtures;
use polysolve_core::homotopy::{solve_homotopy, PathStatus, TrackerConfig};
use polysolve_core::macaulay::{solve_eigen, EigenConfig};
use polysolve_core::poly::clebsch_lines_system;
use polysolve_core::root_counts::count_report;
use polysolve_core::solution::{CompiledSystem, SolutionSet};
use polysolve_core::{PolySystem, Rational};

use crate::{records, solution_distance, CliError, SolutionRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemoName {
    Clebsch27,
    Wilkinson,
    Curves7,
    Robot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub demo: DemoName,
    pub solutions: Vec<SolutionRecord>,
    pub checks: Vec<Check>,
}

impl DemoReport {
    fn new(demo: DemoName) -> Self {
        DemoReport { demo, solutions: Vec::new(), checks: Vec::new() }
    }

    fn check(&mut self, name: &str, expected: impl ToString, actual: impl ToString, ok: bool) {
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), actual: actual.to_string(), ok });
    }

    fn equal<T: PartialEq + ToString>(&mut self, name: &str, expected: T, actual: T) {
        let ok = expected == actual;
        self.check(name, expected, actual, ok);
    }

    fn at_most(&mut self, name: &str, bound: f64, actual: f64) {
        self.check(name, format!("<= {bound:e}"), format!("{actual:.3e}"), actual <= bound);
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for s in &self.solutions {
            let coords: Vec<String> = s.point().iter().map(|z| crate::format_complex(*z)).collect();
            out.push_str(&format!("({})  residual {:.2e}\n", coords.join(", "), s.residual));
        }
        for c in &self.checks {
            let tag = if c.ok { "ok  " } else { "FAIL" };
            out.push_str(&format!("{tag} {}: expected {}, got {}\n", c.name, c.expected, c.actual));
        }
        out
    }
}

fn max_residual(system: &PolySystem<Rational>, set: &SolutionSet) -> f64 {
    let cs = CompiledSystem::new(system);
    set.solutions.iter().map(|s| cs.residual(&s.coordinates)).fold(0.0, f64::max)
}

/// Distance from `target` to the nearest solution.
fn nearest(set: &SolutionSet, target: &[f64]) -> f64 {
    set.solutions
        .iter()
        .map(|s| s.coordinates.iter().zip(target).map(|(z, &t)| (z - t).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

pub fn run_demo(name: DemoName, seed: u64) -> Result<DemoReport, CliError> {
    let tracker = TrackerConfig { seed, ..TrackerConfig::default() };
    let eigen = EigenConfig { seed, ..EigenConfig::default() };
    let mut r = DemoReport::new(name);
    match name {
        DemoName::Clebsch27 => {
            let system = clebsch_lines_system();
            let counts = count_report(&system)?;
            r.equal("bezout number", 81, counts.bezout);
            r.equal("mixed volume", "45".to_string(), counts.bkk.map_or("none".into(), |v| v.to_string()));
            let run = solve_homotopy(&system, &tracker)?;
            r.equal("paths", 81, run.paths.len());
            r.equal("solutions", 27, run.solutions.len());
            r.equal("real solutions", 27, run.solutions.solutions.iter().filter(|s| s.is_real).count());
            r.equal("diverged paths", 54, run.count(PathStatus::Diverged));
            r.at_most("max residual", 1e-8, max_residual(&system, &run.solutions));
            r.solutions = records(&run.solutions);
        }
        DemoName::Wilkinson => {
            let system = fixtures::wilkinson();
            let run = solve_homotopy(&system, &tracker)?;
            r.equal("paths", 12, run.paths.len());
            r.equal("solutions", 12, run.solutions.len());
            let mut roots: Vec<f64> = run.solutions.solutions.iter().map(|s| s.coordinates[0].re).collect();
            roots.sort_by(f64::total_cmp);
            let err = if roots.len() == 12 {
                fixtures::WILKINSON_ROOTS.zip(&roots).map(|(k, x)| (x - k as f64).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            r.at_most("max endpoint error", 1e-6, err);
            r.solutions = records(&run.solutions);
        }
        DemoName::Curves7 => {
            let system = fixtures::curves7();
            let counts = count_report(&system)?;
            r.equal("bezout number", 9, counts.bezout);
            let by_eigen = solve_eigen(&system, &eigen)?;
            let run = solve_homotopy(&system, &tracker)?;
            for (label, set) in [("eigen", &by_eigen), ("homotopy", &run.solutions)] {
                r.equal(&format!("{label} solutions"), 7, set.len());
                r.equal(&format!("{label} real solutions"), 7, set.solutions.iter().filter(|s| s.is_real).count());
                r.at_most(&format!("{label} distance to (0, 0)"), 1e-8, nearest(set, &[0.0, 0.0]));
                r.at_most(&format!("{label} distance to (1, 1)"), 1e-8, nearest(set, &[1.0, 1.0]));
            }
            r.equal("diverged paths", 2, run.count(PathStatus::Diverged));
            r.at_most("eigen vs homotopy", 1e-6, solution_distance(&by_eigen, &run.solutions).unwrap_or(f64::INFINITY));
            r.solutions = records(&by_eigen);
        }
        DemoName::Robot => {
            let system = fixtures::robot();
            let by_eigen = solve_eigen(&system, &eigen)?;
            let run = solve_homotopy(&system, &tracker)?;
            for (label, set) in [("eigen", &by_eigen), ("homotopy", &run.solutions)] {
                r.equal(&format!("{label} solutions"), 2, set.len());
                r.at_most(&format!("{label} distance to (0, 1)"), 1e-8, nearest(set, &[0.0, 1.0]));
                r.at_most(&format!("{label} distance to (1, 0)"), 1e-8, nearest(set, &[1.0, 0.0]));
            }
            r.solutions = records(&by_eigen);
        }
    }
    Ok(r)
}
