//! The builtin golden-suite scenario registry.

use reilly::mesh::RadialProfile;

use crate::config::{Expectation, FieldSpec, ModelSpec, Scenario, Suite, Tolerances};

fn cos_profile(a0: f64, terms: &[(usize, f64)]) -> RadialProfile {
    let mut cos = [0.0; 8];
    for &(k, v) in terms {
        cos[k - 1] = v;
    }
    RadialProfile::new(a0, cos, [0.0; 8])
}

fn scenario(
    name: &str,
    suite: Suite,
    model: ModelSpec,
    profile: RadialProfile,
    levels: std::ops::RangeInclusive<u32>,
    field: FieldSpec,
    k: Option<f64>,
    seed: Option<u64>,
    expect: Expectation,
    description: &str,
    claim: &str,
) -> Scenario {
    Scenario {
        name: name.into(),
        suite,
        model,
        profile,
        levels: levels.collect(),
        field,
        potential: None,
        k,
        seed,
        tolerances: Tolerances::default(),
        expect,
        description: description.into(),
        claim: claim.into(),
    }
}

/// All builtin scenarios, ordered by name.
pub fn builtin_scenarios() -> Vec<Scenario> {
    let hyp_ball = (0.35f64).tanh();
    let sph_ball = (0.25f64).tan();
    let harmonic_phi = vec![(2usize, 0usize, 0.1f64), (0, 2, -0.1)];
    let curved_phi = vec![(2usize, 0usize, 0.1f64), (0, 2, 0.05)];

    let mut v = vec![
        scenario(
            "classical-reilly-disk",
            Suite::ClassicalReilly,
            ModelSpec::Euclidean,
            RadialProfile::circle(1.0),
            2..=4,
            FieldSpec::Poly(vec![(3, 0, 1.0), (1, 2, -2.0), (0, 2, 0.5)]),
            None,
            None,
            Expectation::Holds,
            "unit disk, manufactured cubic field",
            "classical Reilly identity (V = 1, K = 0)",
        ),
        scenario(
            "reilly-hyperbolic-ball",
            Suite::Reilly,
            ModelSpec::Hyperbolic,
            RadialProfile::circle(hyp_ball),
            2..=4,
            FieldSpec::SolveGrowth {
                boundary_value: 1.0,
            },
            None,
            None,
            Expectation::Holds,
            "geodesic ball R = 0.7, growth-problem solve",
            "weighted Reilly identity, hyperbolic weight cosh r",
        ),
        scenario(
            "reilly-hyperbolic-perturbed",
            Suite::Reilly,
            ModelSpec::Hyperbolic,
            cos_profile(hyp_ball, &[(2, 0.15 * hyp_ball)]),
            2..=4,
            FieldSpec::SolveGrowth {
                boundary_value: 1.0,
            },
            None,
            None,
            Expectation::Holds,
            "perturbed ball (0.15 cos 2t), growth-problem solve",
            "weighted Reilly identity, hyperbolic weight cosh r",
        ),
        scenario(
            "reilly-spherical-ball",
            Suite::Reilly,
            ModelSpec::Spherical,
            RadialProfile::circle(sph_ball),
            2..=4,
            FieldSpec::SolveTorsion,
            None,
            None,
            Expectation::Holds,
            "geodesic ball R = 0.5, torsion-problem solve",
            "weighted Reilly identity, spherical weight cos r",
        ),
        scenario(
            "reilly-custom-random",
            Suite::Reilly,
            ModelSpec::CustomPoly(harmonic_phi.clone()),
            RadialProfile::circle(0.8),
            2..=4,
            FieldSpec::RandomPoly { degree: 3 },
            Some(0.3),
            Some(20240117),
            Expectation::Holds,
            "conformal factor phi = 0.1(x^2 - y^2), random cubic f and V, K = 0.3",
            "weighted Reilly identity, arbitrary weight and shift",
        ),
        scenario(
            "reilly-custom-curved",
            Suite::Reilly,
            ModelSpec::CustomPoly(curved_phi.clone()),
            RadialProfile::circle(0.8),
            2..=4,
            FieldSpec::RandomPoly { degree: 3 },
            Some(0.3),
            Some(774411),
            Expectation::Holds,
            "curved conformal factor phi = 0.1x^2 + 0.05y^2 (nonzero Ricci term)",
            "weighted Reilly identity, arbitrary weight and shift",
        ),
        scenario(
            "hk-euclidean-disk",
            Suite::Hk,
            ModelSpec::Euclidean,
            RadialProfile::circle(1.0),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "unit disk equality: int 1/H dA = n Vol",
            "Heintze-Karcher inequality, flat case, equality on balls",
        ),
        scenario(
            "hk-euclidean-ellipse",
            Suite::Hk,
            ModelSpec::Euclidean,
            RadialProfile::ellipse(1.0, 0.8),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::StrictGap,
            "ellipse with semi-axes 1 and 0.8: strict inequality",
            "Heintze-Karcher inequality, flat case, strict gap",
        ),
        scenario(
            "hk-euclidean-nonconvex",
            Suite::Hk,
            ModelSpec::Euclidean,
            cos_profile(1.0, &[(4, 0.35)]),
            2..=3,
            FieldSpec::None,
            None,
            None,
            Expectation::PreconditionViolated,
            "flower profile with H < 0 arcs: hypothesis fails, no claim",
            "Heintze-Karcher positivity hypothesis on H",
        ),
        scenario(
            "hk-hyperbolic-ball",
            Suite::Hk,
            ModelSpec::Hyperbolic,
            RadialProfile::circle(hyp_ball),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "geodesic ball R = 0.7 equality at 2 pi sinh^2(0.7)",
            "Heintze-Karcher inequality with weight cosh r, equality on balls",
        ),
        scenario(
            "hk-hyperbolic-perturbed",
            Suite::Hk,
            ModelSpec::Hyperbolic,
            cos_profile(hyp_ball, &[(2, 0.15 * hyp_ball)]),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::StrictGap,
            "perturbed ball (0.15 cos 2t): strict inequality",
            "Heintze-Karcher inequality with weight cosh r, strict gap",
        ),
        scenario(
            "hk-custom-star",
            Suite::Hk,
            ModelSpec::CustomPoly(harmonic_phi.clone()),
            cos_profile(0.6, &[(2, 0.05)]),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::StrictGap,
            "conformal metric with Sect >= -1 screen, eikonal weight cosh r",
            "general Heintze-Karcher inequality under a sectional-curvature lower bound",
        ),
        scenario(
            "brendle-spherical-ball",
            Suite::Brendle,
            ModelSpec::Spherical,
            RadialProfile::circle(sph_ball),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "geodesic ball R = 0.5 equality at 2 pi sin^2(0.5)",
            "spherical-weight inequality int V/H dA >= n int V dO, equality on balls",
        ),
        scenario(
            "brendle-spherical-perturbed",
            Suite::Brendle,
            ModelSpec::Spherical,
            cos_profile(sph_ball, &[(2, 0.1 * sph_ball)]),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::StrictGap,
            "perturbed ball (0.1 cos 2t): strict inequality",
            "spherical-weight inequality, strict gap",
        ),
        scenario(
            "brendle-precondition-flower",
            Suite::Brendle,
            ModelSpec::Spherical,
            cos_profile(sph_ball, &[(3, 0.1 * sph_ball)]),
            2..=3,
            FieldSpec::None,
            None,
            None,
            Expectation::PreconditionViolated,
            "cos 3t flower is not mean-convex in the spherical metric",
            "spherical-weight inequality positivity hypothesis on H",
        ),
        scenario(
            "minkowski-euclidean",
            Suite::Minkowski,
            ModelSpec::Euclidean,
            cos_profile(1.0, &[(2, 0.12), (5, 0.05)]),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "non-circular flat domain",
            "Minkowski identities int V dA = int H p dA and int p dA = n int V dO",
        ),
        scenario(
            "minkowski-hyperbolic",
            Suite::Minkowski,
            ModelSpec::Hyperbolic,
            cos_profile(0.4, &[(2, 0.06), (3, 0.03)]),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "non-circular hyperbolic domain",
            "Minkowski identities with weight cosh r",
        ),
        scenario(
            "minkowski-spherical",
            Suite::Minkowski,
            ModelSpec::Spherical,
            cos_profile(0.25, &[(2, 0.03), (4, 0.015)]),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "non-circular spherical domain",
            "Minkowski identities with weight cos r",
        ),
        scenario(
            "alexandrov-hyperbolic-ball",
            Suite::Alexandrov,
            ModelSpec::Hyperbolic,
            RadialProfile::circle(hyp_ball),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "geodesic circle R = 0.7: every chain link closes",
            "constant-mean-curvature equality chain and Obata diagnostic",
        ),
        scenario(
            "alexandrov-spherical-ball",
            Suite::Alexandrov,
            ModelSpec::Spherical,
            RadialProfile::circle(sph_ball),
            2..=4,
            FieldSpec::None,
            None,
            None,
            Expectation::Holds,
            "geodesic circle R = 0.5: every chain link closes",
            "constant-mean-curvature equality chain and Obata diagnostic",
        ),
        scenario(
            "alexandrov-euclidean-ellipse",
            Suite::Alexandrov,
            ModelSpec::Euclidean,
            RadialProfile::ellipse(1.0, 0.8),
            2..=3,
            FieldSpec::None,
            None,
            None,
            Expectation::NotCmc,
            "ellipse boundary fails the CMC screen; chain skipped",
            "CMC hypothesis screening",
        ),
        scenario(
            "alexandrov-near-hemisphere",
            Suite::Alexandrov,
            ModelSpec::Spherical,
            RadialProfile::circle(0.999),
            2..=2,
            FieldSpec::None,
            None,
            None,
            Expectation::SolverFailure,
            "chart radius 0.999: the torsion operator loses coercivity",
            "solvability margin of the spherical torsion problem near the hemisphere",
        ),
        scenario(
            "rigidity-hyperbolic-ball",
            Suite::Rigidity,
            ModelSpec::Hyperbolic,
            RadialProfile::circle(hyp_ball),
            2..=4,
            FieldSpec::SolveGrowth {
                boundary_value: 1.0,
            },
            None,
            None,
            Expectation::Holds,
            "geodesic ball: Obata residual of the growth solve vanishes",
            "rigidity of the equality case (D2 f = f g on geodesic balls)",
        ),
        scenario(
            "rigidity-hyperbolic-perturbed",
            Suite::Rigidity,
            ModelSpec::Hyperbolic,
            cos_profile(hyp_ball, &[(2, 0.15 * hyp_ball)]),
            2..=4,
            FieldSpec::SolveGrowth {
                boundary_value: 1.0,
            },
            None,
            None,
            Expectation::StrictGap,
            "perturbed ball: Obata residual stays bounded away from zero",
            "rigidity discrimination between balls and non-balls",
        ),
    ];
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}
