//! Scenario execution: build meshes level by level, run the suite's checks,
//! derive convergence orders and verdicts, and compare against the
//! scenario's declared expectation.

use std::time::Instant;

use reilly::elliptic::{solve_dirichlet, DirichletProblem};
use reilly::field::{FieldTag, ScalarField};
use reilly::mesh::{build_mesh, refine, DomainMesh, StarDomainSpec};
use reilly::poly::Poly2;
use reilly::spaceform::{CustomFactor, SpaceFormModel};
use reilly::verify::{
    alexandrov_chain_with_tol, brendle_spherical, heintze_karcher, identity_verdict,
    inequality_verdict, mean_order, minkowski_check, reilly_residual, richardson,
    rigidity_residual, Extrapolation, PotentialSpec, Verdict,
};
use reilly::Error as CoreError;

use crate::config::{Expectation, FieldSpec, ModelSpec, Scenario, Suite};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    VerdictMismatch,
    UnexpectedSolverFailure,
}

#[derive(Debug, Clone)]
pub struct LevelRow {
    pub level: u32,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub columns: Vec<&'static str>,
    pub rows: Vec<LevelRow>,
    /// Convergence order per refinement step of the primary quantity.
    pub orders: Vec<f64>,
    pub primary: &'static str,
    pub extrapolated: Option<Extrapolation>,
    pub verdict: Verdict,
    pub strict: bool,
    pub outcome: Outcome,
    pub notes: Vec<String>,
    pub timings: Vec<(String, f64)>,
    pub solver_error: Option<String>,
}

fn build_model(spec: &ModelSpec) -> Result<SpaceFormModel, String> {
    Ok(match spec {
        ModelSpec::Euclidean => SpaceFormModel::euclidean(2),
        ModelSpec::Hyperbolic => SpaceFormModel::hyperbolic(2),
        ModelSpec::Spherical => SpaceFormModel::spherical(2),
        ModelSpec::CustomPoly(terms) => SpaceFormModel::custom(CustomFactor::Poly(
            Poly2::from_terms(terms).map_err(|e| e.to_string())?,
        )),
        ModelSpec::CustomPoincare => SpaceFormModel::custom(CustomFactor::PoincareLog),
    })
}

fn random_poly(rng: &mut SplitMix64, degree: usize) -> Poly2 {
    let mut terms = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            terms.push((i, j, rng.next_signed()));
        }
    }
    Poly2::from_terms(&terms).expect("degree within cap")
}

/// Orders of a sequence whose limit is zero: log2(|v_{l-1}| / |v_l|).
fn orders_to_zero(vals: &[f64]) -> Vec<f64> {
    let mut out = vec![f64::NAN];
    for w in vals.windows(2) {
        out.push(if w[1] != 0.0 {
            (w[0].abs() / w[1].abs()).log2()
        } else {
            f64::INFINITY
        });
    }
    out
}

/// Orders of a sequence with unknown limit: successive differences.
fn orders_of_differences(vals: &[f64]) -> Vec<f64> {
    let mut out = vec![f64::NAN; vals.len().min(2)];
    for i in 2..vals.len() {
        let d1 = (vals[i - 1] - vals[i - 2]).abs();
        let d2 = (vals[i] - vals[i - 1]).abs();
        out.push(if d2 != 0.0 { (d1 / d2).log2() } else { f64::INFINITY });
    }
    out
}

fn is_solver_error(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::Indefinite { .. } | CoreError::NearSingular { .. } | CoreError::IterationLimit { .. }
    )
}

struct SuiteEval {
    columns: Vec<&'static str>,
    rows: Vec<LevelRow>,
    orders: Vec<f64>,
    primary: &'static str,
    extrapolated: Option<Extrapolation>,
    verdict: Verdict,
    strict: bool,
    notes: Vec<String>,
}

type EvalOutcome = Result<SuiteEval, (String, bool)>; // (message, is_solver_error)

fn core_err(e: CoreError) -> (String, bool) {
    (e.to_string(), is_solver_error(&e))
}

fn eval_reilly(s: &Scenario, model: &SpaceFormModel, meshes: &[DomainMesh]) -> EvalOutcome {
    let k = match model.curvature_constant() {
        Some(k) => k,
        None => s
            .k
            .ok_or_else(|| ("custom model needs an identity shift k".to_string(), false))?,
    };
    let space_form_v = !model.is_custom();
    let mut rng = s.seed.map(SplitMix64::new);
    // Draw the manufactured polynomials once so every level samples the same
    // continuum functions.
    let (f_poly, v_poly) = match &s.field {
        FieldSpec::RandomPoly { degree } => {
            let r = rng.as_mut().expect("randomized field requires a seed");
            (Some(random_poly(r, *degree)), Some(random_poly(r, *degree)))
        }
        FieldSpec::Poly(terms) => (
            Some(Poly2::from_terms(terms).map_err(core_err)?),
            s.potential
                .as_ref()
                .map(|t| Poly2::from_terms(t))
                .transpose()
                .map_err(core_err)?,
        ),
        _ => (None, None),
    };

    let mut rows = Vec::new();
    let mut relatives = Vec::new();
    let mut max_bulk_ratio = 0.0f64;
    for mesh in meshes {
        let f = match &s.field {
            FieldSpec::SolveGrowth { boundary_value } => {
                let prob = DirichletProblem::growth_problem(model.dim, *boundary_value);
                solve_dirichlet(mesh, model, &prob).map_err(core_err)?.solution
            }
            FieldSpec::SolveTorsion => {
                let prob = DirichletProblem::torsion_problem(k, model.dim);
                solve_dirichlet(mesh, model, &prob).map_err(core_err)?.solution
            }
            FieldSpec::Poly(_) | FieldSpec::RandomPoly { .. } => {
                let p = f_poly.as_ref().unwrap();
                ScalarField::sample(mesh, FieldTag::Custom, |x| p.eval(x[0], x[1]))
            }
            FieldSpec::None => {
                return Err(("identity suites need a field spec".to_string(), false))
            }
        };
        let v_field = if space_form_v {
            None
        } else {
            let p = v_poly
                .as_ref()
                .ok_or_else(|| ("custom model needs a potential field".to_string(), false))?;
            Some(ScalarField::sample(mesh, FieldTag::Potential, |x| {
                p.eval(x[0], x[1])
            }))
        };
        let spec = match &v_field {
            None => PotentialSpec::SpaceForm,
            Some(vf) => PotentialSpec::Field(vf),
        };
        let rep = reilly_residual(mesh, model, &f, &spec, k).map_err(core_err)?;
        relatives.push(rep.relative().abs());
        if space_form_v {
            max_bulk_ratio = max_bulk_ratio
                .max(rep.bulk_curvature.abs() / rep.scale)
                .max(rep.bulk_potential.abs() / rep.scale);
        }
        rows.push(LevelRow {
            level: mesh.level,
            values: vec![
                mesh.h_max,
                rep.lhs_energy,
                rep.boundary_main,
                rep.boundary_potential,
                rep.bulk_curvature,
                rep.bulk_potential,
                rep.residual,
                rep.relative(),
            ],
        });
    }
    let verdict = identity_verdict(&relatives, s.tolerances.residual, s.tolerances.order);
    let mut notes = vec![format!(
        "mean residual order {:.3}",
        mean_order(&relatives)
    )];
    if space_form_v {
        notes.push(format!(
            "max bulk-term magnitude {max_bulk_ratio:.3e} of scale (analytic cancellation)"
        ));
    }
    Ok(SuiteEval {
        columns: vec![
            "h_max",
            "lhs_energy",
            "boundary_main",
            "boundary_potential",
            "bulk_curvature",
            "bulk_potential",
            "residual",
            "relative",
        ],
        orders: orders_to_zero(&relatives),
        rows,
        primary: "relative",
        extrapolated: None,
        verdict,
        strict: false,
        notes,
    })
}

fn eval_hk(s: &Scenario, model: &SpaceFormModel, meshes: &[DomainMesh]) -> EvalOutcome {
    let spherical_variant = s.suite == Suite::Brendle;
    let mut rows = Vec::new();
    let mut gaps = Vec::new();
    let mut notes = Vec::new();
    let mut precondition_ok = true;
    for mesh in meshes {
        let rep = if spherical_variant {
            brendle_spherical(mesh, model).map_err(core_err)?
        } else {
            heintze_karcher(mesh, model).map_err(core_err)?
        };
        precondition_ok &= rep.precondition_ok;
        gaps.push(rep.gap);
        if let Some(screen) = rep.screen {
            notes.push(format!(
                "level {}: min curvature {:.6} (bound {}), screen {}",
                mesh.level,
                screen.min_curvature,
                screen.bound,
                if screen.pass { "pass" } else { "fail" }
            ));
            if rep.excluded_measure > 0.0 {
                notes.push(format!(
                    "level {}: excluded measure {:.3e}",
                    mesh.level, rep.excluded_measure
                ));
            }
        }
        rows.push(LevelRow {
            level: mesh.level,
            values: vec![
                mesh.h_max,
                rep.lhs,
                rep.rhs_bulk,
                rep.rhs_flux,
                rep.alt_rhs,
                rep.gap,
                rep.min_mean_curv,
                rep.flux_vs_bulk,
            ],
        });
    }
    let (verdict, strict, extrapolated) = if !precondition_ok {
        (Verdict::PreconditionViolated, false, None)
    } else {
        let ex = richardson(&gaps);
        let (v, strict) = inequality_verdict(&ex);
        (v, strict, Some(ex))
    };
    Ok(SuiteEval {
        columns: vec![
            "h_max",
            "lhs",
            "rhs_bulk",
            "rhs_flux",
            "alt_rhs",
            "gap",
            "min_mean_curv",
            "flux_vs_bulk",
        ],
        orders: orders_of_differences(&gaps),
        rows,
        primary: "gap",
        extrapolated,
        verdict,
        strict,
        notes,
    })
}

fn eval_minkowski(s: &Scenario, model: &SpaceFormModel, meshes: &[DomainMesh]) -> EvalOutcome {
    let mut rows = Vec::new();
    let mut primary = Vec::new();
    for mesh in meshes {
        let rep = minkowski_check(mesh, model).map_err(core_err)?;
        primary.push(rep.first_discrepancy().max(rep.second_discrepancy()));
        rows.push(LevelRow {
            level: mesh.level,
            values: vec![
                mesh.h_max,
                rep.first_lhs,
                rep.first_rhs,
                rep.second_lhs,
                rep.second_rhs,
                rep.first_discrepancy(),
                rep.second_discrepancy(),
            ],
        });
    }
    let verdict = identity_verdict(&primary, s.tolerances.residual, s.tolerances.order);
    Ok(SuiteEval {
        columns: vec![
            "h_max",
            "first_lhs",
            "first_rhs",
            "second_lhs",
            "second_rhs",
            "first_discrepancy",
            "second_discrepancy",
        ],
        orders: orders_to_zero(&primary),
        rows,
        primary: "max_discrepancy",
        extrapolated: None,
        verdict,
        strict: false,
        notes: vec![format!("mean discrepancy order {:.3}", mean_order(&primary))],
    })
}

fn eval_alexandrov(s: &Scenario, model: &SpaceFormModel, meshes: &[DomainMesh]) -> EvalOutcome {
    let mut rows = Vec::new();
    let mut primary = Vec::new();
    let mut any_cmc = false;
    let mut notes = Vec::new();
    for mesh in meshes {
        let rep =
            alexandrov_chain_with_tol(mesh, model, s.tolerances.cmc).map_err(core_err)?;
        let mut vals = vec![mesh.h_max, rep.h_mean, rep.h_deviation];
        match &rep.chain {
            Some(c) => {
                any_cmc = true;
                let norm = c.schwarz_lhs.abs().max(1e-300);
                let link_max = (c.schwarz_slack.abs() / norm)
                    .max(c.holder_slack.abs() / norm)
                    .max((c.green_lhs - c.green_rhs).abs() / c.green_rhs.abs())
                    .max((c.minkowski_lhs - c.minkowski_rhs).abs() / c.minkowski_lhs.abs())
                    .max(c.obata_normalized);
                primary.push(link_max);
                vals.extend_from_slice(&[
                    c.schwarz_lhs,
                    c.schwarz_rhs,
                    c.schwarz_slack,
                    c.holder_slack,
                    c.green_lhs,
                    c.green_rhs,
                    c.minkowski_lhs,
                    c.minkowski_rhs,
                    c.obata_normalized,
                ]);
            }
            None => {
                notes.push(format!(
                    "level {}: not-CMC (H deviation {:.3e} of mean, tol {:.1e})",
                    mesh.level,
                    rep.h_deviation / rep.h_mean.abs(),
                    rep.cmc_tol
                ));
                vals.extend_from_slice(&[f64::NAN; 9]);
            }
        }
        rows.push(LevelRow {
            level: mesh.level,
            values: vals,
        });
    }
    let verdict = if !any_cmc {
        Verdict::NotCmc
    } else {
        identity_verdict(&primary, s.tolerances.residual, s.tolerances.order)
    };
    Ok(SuiteEval {
        columns: vec![
            "h_max",
            "h_mean",
            "h_deviation",
            "schwarz_lhs",
            "schwarz_rhs",
            "schwarz_slack",
            "holder_slack",
            "green_lhs",
            "green_rhs",
            "minkowski_lhs",
            "minkowski_rhs",
            "obata",
        ],
        orders: orders_to_zero(&primary),
        rows,
        primary: "max_chain_link",
        extrapolated: None,
        verdict,
        strict: false,
        notes,
    })
}

fn eval_rigidity(s: &Scenario, model: &SpaceFormModel, meshes: &[DomainMesh]) -> EvalOutcome {
    let boundary_value = match s.field {
        FieldSpec::SolveGrowth { boundary_value } => boundary_value,
        _ => 1.0,
    };
    let mut rows = Vec::new();
    let mut obatas = Vec::new();
    for mesh in meshes {
        let prob = DirichletProblem::growth_problem(model.dim, boundary_value);
        let solve = solve_dirichlet(mesh, model, &prob).map_err(core_err)?;
        let rep = rigidity_residual(mesh, model, &solve).map_err(core_err)?;
        obatas.push(rep.obata_normalized);
        rows.push(LevelRow {
            level: mesh.level,
            values: vec![
                mesh.h_max,
                rep.obata_raw,
                rep.obata_normalized,
                rep.schwarz_lhs,
                rep.schwarz_rhs,
                rep.schwarz_deficit,
            ],
        });
    }
    let ex = richardson(&obatas);
    let (verdict, strict) = inequality_verdict(&ex);
    Ok(SuiteEval {
        columns: vec![
            "h_max",
            "obata_raw",
            "obata_normalized",
            "schwarz_lhs",
            "schwarz_rhs",
            "schwarz_deficit",
        ],
        orders: orders_of_differences(&obatas),
        rows,
        primary: "obata_normalized",
        extrapolated: Some(ex),
        verdict,
        strict,
        notes: Vec::new(),
    })
}

/// Execute one scenario end to end.
pub fn run_scenario(s: &Scenario) -> ScenarioResult {
    let start = Instant::now();
    let mut timings = Vec::new();
    let fail = |msg: String, solver: bool, timings: Vec<(String, f64)>| {
        let outcome = if s.expect == Expectation::SolverFailure && solver {
            Outcome::Pass
        } else if solver {
            Outcome::UnexpectedSolverFailure
        } else {
            Outcome::VerdictMismatch
        };
        ScenarioResult {
            scenario: s.clone(),
            columns: Vec::new(),
            rows: Vec::new(),
            orders: Vec::new(),
            primary: "",
            extrapolated: None,
            verdict: Verdict::Inconclusive,
            strict: false,
            outcome,
            notes: Vec::new(),
            timings,
            solver_error: Some(msg),
        }
    };

    let model = match build_model(&s.model) {
        Ok(m) => m,
        Err(e) => return fail(e, false, timings),
    };

    // Meshes for every requested level, refined incrementally.
    let mesh_start = Instant::now();
    let mut meshes: Vec<DomainMesh> = Vec::with_capacity(s.levels.len());
    let first = build_mesh(
        &StarDomainSpec {
            dim: 2,
            profile: s.profile.clone(),
            level: s.levels[0],
        },
        &model,
    );
    let mut mesh = match first {
        Ok(m) => m,
        Err(e) => return fail(e.to_string(), false, timings),
    };
    meshes.push(mesh.clone());
    for w in s.levels.windows(2) {
        for _ in w[0]..w[1] {
            mesh = refine(&mesh, &model);
        }
        meshes.push(mesh.clone());
    }
    timings.push(("mesh".to_string(), mesh_start.elapsed().as_secs_f64()));

    let compute_start = Instant::now();
    let eval = match s.suite {
        Suite::Reilly | Suite::ClassicalReilly => eval_reilly(s, &model, &meshes),
        Suite::Hk | Suite::Brendle => eval_hk(s, &model, &meshes),
        Suite::Minkowski => eval_minkowski(s, &model, &meshes),
        Suite::Alexandrov => eval_alexandrov(s, &model, &meshes),
        Suite::Rigidity => eval_rigidity(s, &model, &meshes),
    };
    timings.push(("compute".to_string(), compute_start.elapsed().as_secs_f64()));
    timings.push(("total".to_string(), start.elapsed().as_secs_f64()));

    match eval {
        Err((msg, solver)) => fail(msg, solver, timings),
        Ok(ev) => {
            let outcome = match (s.expect, ev.verdict, ev.strict) {
                (Expectation::Holds, Verdict::HoldsWithinTolerance, _) => Outcome::Pass,
                (Expectation::StrictGap, Verdict::HoldsWithinTolerance, true) => Outcome::Pass,
                (Expectation::NotCmc, Verdict::NotCmc, _) => Outcome::Pass,
                (Expectation::PreconditionViolated, Verdict::PreconditionViolated, _) => {
                    Outcome::Pass
                }
                _ => Outcome::VerdictMismatch,
            };
            let mut columns = vec!["level"];
            columns.extend(ev.columns.iter());
            columns.push("order");
            ScenarioResult {
                scenario: s.clone(),
                columns,
                rows: ev.rows,
                orders: ev.orders,
                primary: ev.primary,
                extrapolated: ev.extrapolated,
                verdict: ev.verdict,
                strict: ev.strict,
                outcome,
                notes: ev.notes,
                timings,
                solver_error: None,
            }
        }
    }
}
