//! Executable checks of the competitive analysis: the per-step potential
//! inequality behind the 3-competitiveness proof, obliviousness of the
//! policies under direct similarities, and competitive-ratio audits
//! against the offline solver.
//!
//! The potential of a configuration is `sqrt(3)` times the distance
//! between the algorithm's and the adversary's points; a drift step from
//! `P` to `P'` while the adversary moves from `A` to `A'` must satisfy
//!
//! ```text
//! d(P, P') + sqrt(3) * (d(A', P') - d(A, P)) <= 3 * d(A, A')
//! ```
//!
//! which telescopes to 3-competitiveness over any request sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chase::{run_policy, Instance, Policy};
use crate::error::{Error, Result};
use crate::geometry::{distance, DirectSimilarity, Line, Point};
use crate::offline::{solve_offline, SolverConfig};
use crate::policies::{drift_step_2d, memoryless_step, BetaPolicy};
use crate::sample::log_uniform;
use crate::scalar::{real, sqrt3, Scalar};

/// The sampled configuration a potential report refers to, kept for replay.
#[derive(Clone, Debug)]
pub struct PotentialConfig<S> {
    pub position: Point<S>,
    pub prev_line: Option<Line<S>>,
    pub next_line: Line<S>,
    pub adversary: Point<S>,
    pub adversary_next: Point<S>,
}

/// One evaluation of the potential-step inequality. Negative `slack`
/// beyond rounding noise means the inequality failed.
#[derive(Clone, Debug)]
pub struct PotentialStepReport<S> {
    pub lhs: S,
    pub rhs: S,
    pub slack: S,
    pub config: PotentialConfig<S>,
}

impl<S: Scalar> PotentialStepReport<S> {
    /// Whether the inequality holds up to `1e-9 * (1 + rhs)`.
    pub fn holds(&self) -> bool {
        self.slack >= -real::<S>(1e-9) * (S::one() + self.rhs)
    }
}

/// Evaluates the potential inequality for one drift step: `P` and `A` on
/// the current line, `A'` on the new one.
pub fn check_potential_step<S: Scalar>(
    position: &Point<S>,
    prev_line: &Line<S>,
    next_line: &Line<S>,
    adversary: &Point<S>,
    adversary_next: &Point<S>,
) -> Result<PotentialStepReport<S>> {
    if position.dim() != 2 {
        return Err(Error::invalid("potential checks work in the plane"));
    }
    if !prev_line.contains(position)? || !prev_line.contains(adversary)? {
        return Err(Error::invalid("P and A must lie on the current line"));
    }
    if !next_line.contains(adversary_next)? {
        return Err(Error::invalid("A' must lie on the new line"));
    }
    let (moved, _) = drift_step_2d(position, Some(prev_line), next_line)?;
    potential_report(
        position,
        Some(prev_line),
        next_line,
        adversary,
        adversary_next,
        &moved,
    )
}

fn potential_report<S: Scalar>(
    position: &Point<S>,
    prev_line: Option<&Line<S>>,
    next_line: &Line<S>,
    adversary: &Point<S>,
    adversary_next: &Point<S>,
    moved: &Point<S>,
) -> Result<PotentialStepReport<S>> {
    let lhs = distance(position, moved)?
        + sqrt3::<S>() * (distance(adversary_next, moved)? - distance(adversary, position)?);
    let rhs = real::<S>(3.0) * distance(adversary, adversary_next)?;
    Ok(PotentialStepReport {
        lhs,
        rhs,
        slack: rhs - lhs,
        config: PotentialConfig {
            position: position.clone(),
            prev_line: prev_line.cloned(),
            next_line: next_line.clone(),
            adversary: adversary.clone(),
            adversary_next: adversary_next.clone(),
        },
    })
}

/// Fuzzes the potential inequality over `n` stratified configurations and
/// returns the report with the smallest slack. Deterministic in `seed`.
///
/// Strata cover the analysis' regimes: the adversary's projection before
/// the intersection, between the intersection and the moved point, between
/// the moved point and the foot, past the foot; plus parallel lines, the
/// no-move case, and a near-tight family at flat angles.
pub fn fuzz_potential<S: Scalar>(n: usize, seed: u64) -> Result<PotentialStepReport<S>> {
    fuzz_potential_with(n, seed, &|p, l, ln| drift_step_2d(p, l, ln).map(|(q, _)| q))
}

/// Same fuzz, but stepping with an arbitrary memoryless rule. Rules other
/// than the drift rule are expected to violate the inequality somewhere;
/// this is the demonstration mode.
pub fn fuzz_potential_beta<S: Scalar>(
    rule: &BetaPolicy<S>,
    n: usize,
    seed: u64,
) -> Result<PotentialStepReport<S>> {
    fuzz_potential_with(n, seed, &|p, l, ln| memoryless_step(rule, p, l, ln))
}

type StepFn<'a, S> = dyn Fn(&Point<S>, Option<&Line<S>>, &Line<S>) -> Result<Point<S>> + 'a;

fn fuzz_potential_with<S: Scalar>(
    n: usize,
    seed: u64,
    step: &StepFn<'_, S>,
) -> Result<PotentialStepReport<S>> {
    if n == 0 {
        return Err(Error::invalid("fuzz_potential needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<PotentialStepReport<S>> = None;
    for i in 0..n {
        let report = sample_potential_config(&mut rng, i, step)?;
        let replace = match &worst {
            None => true,
            Some(w) => report.slack < w.slack,
        };
        if replace {
            worst = Some(report);
        }
    }
    Ok(worst.expect("n >= 1"))
}

fn sample_potential_config<S: Scalar>(
    rng: &mut ChaCha8Rng,
    index: usize,
    step: &StepFn<'_, S>,
) -> Result<PotentialStepReport<S>> {
    let signed_mag = |rng: &mut ChaCha8Rng| -> f64 {
        let m = log_uniform(1e-6, 1e6, rng);
        if rng.random_bool(0.5) {
            m
        } else {
            -m
        }
    };
    let mirror = if rng.random_bool(0.5) { -1.0 } else { 1.0 };

    if index % 7 == 5 {
        // parallel lines at a random offset
        let offset = log_uniform(1e-6, 1e6, rng) * mirror;
        let prev = Line::new(Point::xy(S::zero(), S::zero()), vec![S::one(), S::zero()])?;
        let next = Line::new(Point::xy(S::zero(), real(offset)), vec![S::one(), S::zero()])?;
        let position = Point::xy(real(signed_mag(rng)), S::zero());
        let adversary = Point::xy(real(signed_mag(rng)), S::zero());
        let adversary_next = Point::xy(real(signed_mag(rng)), real(offset));
        let moved = step(&position, Some(&prev), &next)?;
        return potential_report(&position, Some(&prev), &next, &adversary, &adversary_next, &moved);
    }

    // intersecting lines: the new request is the x-axis, the current line
    // passes through the origin at angle gamma, and the algorithm sits on
    // it at distance r from the intersection (mirrored below the axis half
    // the time).
    let tight = index % 7 == 6;
    let gamma = if tight {
        log_uniform(1e-5, 1e-2, rng)
    } else {
        rng.random_range(1e-4..std::f64::consts::PI - 1e-4)
    };
    let r = log_uniform(1e-6, 1e6, rng);
    let dir_y = gamma.sin() * mirror;
    let prev = Line::new(
        Point::xy(S::zero(), S::zero()),
        vec![real(gamma.cos()), real(dir_y)],
    )?;
    let next = Line::new(Point::xy(S::zero(), S::zero()), vec![S::one(), S::zero()])?;
    let position = if index % 7 == 4 {
        // no-move stratum: the algorithm already sits on the new line
        Point::xy(S::zero(), S::zero())
    } else {
        Point::xy(real(r * gamma.cos()), real(r * dir_y))
    };
    let foot_x = r * gamma.cos();
    let height = (r * gamma.sin()).abs();

    let (adversary, adversary_next) = if tight {
        // boundary of the "past the foot" regime: the adversary shadows
        // the algorithm and then steps g / sqrt(2) outward, which is where
        // the analysis is asymptotically tight as gamma -> 0
        let g = height;
        let z = g / 2.0f64.sqrt();
        let away = foot_x + z * foot_x.signum();
        (position.clone(), Point::xy(real(away), S::zero()))
    } else {
        // adversary on the current line with its projection stratified
        // over the four regimes of the analysis
        let u = match index % 4 {
            0 => -log_uniform(1e-6, 1e6, rng),                    // before the intersection
            1 => rng.random_range(0.0..0.71) * r,                 // before the moved point
            2 => rng.random_range(0.7..1.0) * r,                  // between moved point and foot
            _ => r * (1.0 + log_uniform(1e-6, 1e2, rng)),         // past the foot
        };
        let adversary = Point::xy(real(u * gamma.cos()), real(u * dir_y));
        let a_bar = u * gamma.cos();
        let z = log_uniform(1e-6, 1e6, rng);
        let a_next = if rng.random_bool(0.5) { a_bar + z } else { a_bar - z };
        (adversary, Point::xy(real(a_next), S::zero()))
    };

    let moved = step(&position, Some(&prev), &next)?;
    potential_report(&position, Some(&prev), &next, &adversary, &adversary_next, &moved)
}

/// Runs `policy` on `instance` and on its image under `f`, and returns the
/// largest deviation between the transformed run and the transformed
/// points of the original run, normalized by `1 + scale * diameter`.
pub fn check_rts_oblivious<S: Scalar>(
    policy: &dyn Policy<S>,
    instance: &Instance<S>,
    f: &DirectSimilarity<S>,
) -> Result<S> {
    let base = run_policy(policy, instance)?;
    let transformed_instance = Instance::new(
        f.apply(instance.start())?,
        instance
            .initial_line()
            .map(|l| f.apply_line(l))
            .transpose()?,
        instance
            .requests()
            .iter()
            .map(|l| f.apply_line(l))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let transformed = run_policy(policy, &transformed_instance)?;

    let diameter = bounding_diameter(base.points());
    let denom = S::one() + f.scale() * diameter;
    let mut worst = S::zero();
    for (p, q) in base.points().iter().zip(transformed.points()) {
        let dev = distance(&f.apply(p)?, q)?;
        worst = worst.max(dev / denom);
    }
    Ok(worst)
}

fn bounding_diameter<S: Scalar>(points: &[Point<S>]) -> S {
    let dim = points[0].dim();
    let mut acc = S::zero();
    for i in 0..dim {
        let mut lo = S::infinity();
        let mut hi = S::neg_infinity();
        for p in points {
            lo = lo.min(p.coords()[i]);
            hi = hi.max(p.coords()[i]);
        }
        acc = acc + (hi - lo) * (hi - lo);
    }
    acc.sqrt()
}

/// One policy-vs-optimum measurement.
#[derive(Clone, Debug)]
pub struct RatioAudit<S> {
    pub alg_cost: S,
    pub opt_cost: S,
    pub ratio: S,
    pub solver_converged: bool,
    pub certificate_residual: S,
}

/// Runs the policy and the offline solver on the same instance.
pub fn ratio_audit<S: Scalar>(
    policy: &dyn Policy<S>,
    instance: &Instance<S>,
    cfg: &SolverConfig<S>,
) -> Result<RatioAudit<S>> {
    let alg = run_policy(policy, instance)?;
    let opt = solve_offline(instance, cfg)?;
    Ok(RatioAudit {
        alg_cost: alg.cost(),
        opt_cost: opt.cost(),
        ratio: crate::chase::ratio_with_conventions(alg.cost(), opt.cost()),
        solver_converged: opt.converged,
        certificate_residual: opt.certificate_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::{Drift, Greedy};
    use crate::sample::{random_instance, random_similarity};

    type P = Point<f64>;

    fn x_axis() -> Line<f64> {
        Line::new(P::xy(0.0, 0.0), vec![1.0, 0.0]).unwrap()
    }

    #[test]
    fn shadowing_adversary_has_positive_slack() {
        let diag = Line::new(P::xy(0.0, 0.0), vec![1.0, 1.0]).unwrap();
        let p = P::xy(1.0, 0.0);
        let (moved, _) = drift_step_2d(&p, Some(&x_axis()), &diag).unwrap();
        let report = check_potential_step(&p, &x_axis(), &diag, &p, &moved).unwrap();
        let step = distance(&p, &moved).unwrap();
        assert!((report.slack - 2.0 * step).abs() < 1e-12);
    }

    #[test]
    fn perpendicular_case_slack() {
        let y_axis = Line::new(P::xy(0.0, 0.0), vec![0.0, 1.0]).unwrap();
        let origin = P::xy(0.0, 0.0);
        let report =
            check_potential_step(&P::xy(1.0, 0.0), &x_axis(), &y_axis, &origin, &origin).unwrap();
        assert!((report.lhs - (1.0 - 3.0f64.sqrt())).abs() < 1e-12);
        assert_eq!(report.rhs, 0.0);
        assert!((report.slack - (3.0f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn parallel_case_is_bounded_by_sqrt6() {
        let shifted = Line::new(P::xy(0.0, 1.0), vec![1.0, 0.0]).unwrap();
        for ax in [-3.0, 0.0, 2.0] {
            for anx in [-4.0, 0.5, 6.0] {
                let a = P::xy(ax, 0.0);
                let a_next = P::xy(anx, 1.0);
                let report =
                    check_potential_step(&P::xy(1.0, 0.0), &x_axis(), &shifted, &a, &a_next)
                        .unwrap();
                let d = distance(&a, &a_next).unwrap();
                assert!(report.lhs <= 6.0f64.sqrt() * d + 1e-12);
                assert!(report.holds());
            }
        }
    }

    #[test]
    fn precondition_violations_are_rejected() {
        let diag = Line::new(P::xy(0.0, 0.0), vec![1.0, 1.0]).unwrap();
        // P off the current line
        assert!(check_potential_step(
            &P::xy(1.0, 0.5),
            &x_axis(),
            &diag,
            &P::xy(0.0, 0.0),
            &P::xy(1.0, 1.0)
        )
        .is_err());
        // A' off the new line
        assert!(check_potential_step(
            &P::xy(1.0, 0.0),
            &x_axis(),
            &diag,
            &P::xy(0.0, 0.0),
            &P::xy(1.0, 0.5)
        )
        .is_err());
    }

    #[test]
    fn fuzzed_drift_steps_respect_the_inequality() {
        let worst: PotentialStepReport<f64> = fuzz_potential(50_000, 2024).unwrap();
        assert!(
            worst.holds(),
            "slack {} at rhs {} for {:?}",
            worst.slack,
            worst.rhs,
            worst.config
        );
    }

    #[test]
    fn fuzz_is_deterministic() {
        let a: PotentialStepReport<f64> = fuzz_potential(2000, 7).unwrap();
        let b: PotentialStepReport<f64> = fuzz_potential(2000, 7).unwrap();
        assert_eq!(a.slack, b.slack);
        assert_eq!(a.config.position, b.config.position);
    }

    #[test]
    fn greedy_violates_the_inequality() {
        let worst = fuzz_potential_beta(&BetaPolicy::constant(0.0), 50_000, 2024).unwrap();
        assert!(
            !worst.holds(),
            "expected a violation, worst slack {}",
            worst.slack
        );
    }

    #[test]
    fn identity_similarity_gives_zero_deviation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let instance: Instance<f64> = random_instance(2, 10, 3.0, &mut rng);
        let dev = check_rts_oblivious(&Drift, &instance, &DirectSimilarity::identity(2)).unwrap();
        // direction renormalization in the transformed instance costs an ulp
        assert!(dev <= 1e-14, "deviation {dev}");
    }

    #[test]
    fn drift_commutes_with_similarities() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let instance: Instance<f64> = random_instance(2, 20, 3.0, &mut rng);
            let f = random_similarity(2, 1e-3, 1e3, &mut rng);
            let dev = check_rts_oblivious(&Drift, &instance, &f).unwrap();
            assert!(dev <= 1e-9, "deviation {dev}");
        }
    }

    #[test]
    fn single_line_ratio_is_one() {
        let instance =
            Instance::new(P::xy(0.0, 1.0), None, vec![x_axis()]).unwrap();
        let audit = ratio_audit(&Drift, &instance, &SolverConfig::default()).unwrap();
        assert!((audit.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn drift_stays_three_competitive_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..25 {
            let instance: Instance<f64> = random_instance(2, 30, 2.0, &mut rng);
            let audit = ratio_audit(&Drift, &instance, &SolverConfig::default()).unwrap();
            assert!(audit.ratio <= 3.0 + 1e-6, "ratio {}", audit.ratio);
            assert!(audit.certificate_residual <= 1e-7);
        }
    }

    #[test]
    fn greedy_can_exceed_drift_ratio() {
        // sanity: the audit reports honest ratios, not clamped ones
        let l1 = Line::new(P::xy(0.0, 0.0), vec![1.0, 0.05]).unwrap();
        let l2 = Line::new(P::xy(0.0, 0.0), vec![1.0, -0.05]).unwrap();
        let mut lines = Vec::new();
        for i in 0..40 {
            lines.push(if i % 2 == 0 { l1.clone() } else { l2.clone() });
        }
        let instance = Instance::new(P::xy(-3.0, 1.0), None, lines).unwrap();
        let audit = ratio_audit(&Greedy, &instance, &SolverConfig::default()).unwrap();
        assert!(audit.ratio > 3.0, "greedy ratio {}", audit.ratio);
    }
}
