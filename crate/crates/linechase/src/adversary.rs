//! Adaptive adversaries that realize the lower-bound constructions: the
//! three-line construction with a forbidden region and force-to-point
//! endgames, and the rotating-line families that pin down the competitive
//! ratio of memoryless policies.

use crate::chase::{path_cost, ratio_with_conventions, Instance, Policy, PolicyRun};
use crate::error::{Error, Result};
use crate::geometry::{distance, Line, Point};
use crate::scalar::{real, Scalar};

/// Which endgame an adversary run ended in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    ForceA1,
    ForceA2,
    ForceA3,
    MemorylessMain,
    MemorylessRotation,
    MemorylessSingle,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Branch::ForceA1 => "force-A1",
            Branch::ForceA2 => "force-A2",
            Branch::ForceA3 => "force-A3",
            Branch::MemorylessMain => "memoryless-main",
            Branch::MemorylessRotation => "memoryless-rotation",
            Branch::MemorylessSingle => "memoryless-single",
        };
        f.write_str(label)
    }
}

/// Full record of one adversary run. `alg_points[t]` and
/// `adversary_points[t]` both lie on `lines[t]`.
#[derive(Clone, Debug)]
pub struct AdversaryTranscript<S> {
    pub start: Point<S>,
    pub lines: Vec<Line<S>>,
    pub alg_points: Vec<Point<S>>,
    pub adversary_points: Vec<Point<S>>,
    pub alg_cost: S,
    pub adv_cost: S,
    pub ratio: S,
    pub branch: Branch,
    /// False when a force-to-point phase ran out of lines before the policy
    /// entered the stop radius.
    pub force_converged: bool,
}

// ---------------------------------------------------------------------------
// The three-line construction
// ---------------------------------------------------------------------------

/// The seven positive constants parameterizing the three-line construction.
#[derive(Clone, Copy, Debug)]
pub struct ArbitraryLbConstants<S> {
    pub c1: S,
    pub c2: S,
    pub c3: S,
    pub a1: S,
    pub a2: S,
    pub p2: S,
    pub p3: S,
}

impl<S: Scalar> Default for ArbitraryLbConstants<S> {
    fn default() -> Self {
        Self {
            c1: real(0.5535),
            c2: real(0.4965),
            c3: real(0.8743),
            a1: real(1.3012),
            a2: real(0.6663),
            p2: real(0.5612),
            p3: real(0.1696),
        }
    }
}

/// The construction's named points and lines (unmirrored orientation).
///
/// All three lines pass through `a3 = (1, c1)`. Points on `l2`/`l3` are
/// parameterized by the distance of their projection onto the horizontal
/// line `l1` from `a3`, measured leftward.
#[derive(Clone, Debug)]
pub struct Section5Geometry<S> {
    pub p1: Point<S>,
    pub a3: Point<S>,
    pub p2: Point<S>,
    pub a1: Point<S>,
    pub p3: Point<S>,
    pub a2: Point<S>,
    /// Intersection of the line through `p1` and `p2` with `l3`.
    pub p2_prime: Point<S>,
    pub l1: Line<S>,
    pub l2: Line<S>,
    pub l3: Line<S>,
}

impl<S: Scalar> Section5Geometry<S> {
    pub fn new(k: &ArbitraryLbConstants<S>) -> Result<Self> {
        let one = S::one();
        let p1 = Point::xy(S::zero(), k.c1);
        let a3 = Point::xy(one, k.c1);
        let c2_point = Point::xy(S::zero(), k.c1 + k.c2);
        let c3_point = Point::xy(S::zero(), k.c1 + k.c2 + k.c3);
        let l1 = Line::through(&p1, &a3)?;
        let l2 = Line::through(&c2_point, &a3)?;
        let l3 = Line::through(&c3_point, &a3)?;
        // a point of l2 whose projection onto l1 is `d` left of a3 is
        // (1 - d, c1 + c2*d); same for l3 with slope c2 + c3
        let on_l2 = |d: S| Point::xy(one - d, k.c1 + k.c2 * d);
        let on_l3 = |d: S| Point::xy(one - d, k.c1 + (k.c2 + k.c3) * d);
        let p2 = on_l2(k.p2);
        let a1 = on_l2(k.a1);
        let p3 = on_l3(k.p3);
        let a2 = on_l3(k.a2);
        let p2_prime = intersect_segment_extension(&p1, &p2, &l3)?;
        Ok(Self {
            p1,
            a3,
            p2,
            a1,
            p3,
            a2,
            p2_prime,
            l1,
            l2,
            l3,
        })
    }
}

/// The six closed-form cost bounds of the three-line construction, one
/// optimum/algorithm pair per branch.
#[derive(Clone, Copy, Debug)]
pub struct Section5Bounds<S> {
    pub opt_force_a1: S,
    pub alg_force_a1: S,
    pub opt_force_a3: S,
    pub alg_force_a3: S,
    pub opt_force_a2: S,
    pub alg_force_a2: S,
}

impl<S: Scalar> Section5Bounds<S> {
    pub fn ratio_force_a1(&self) -> S {
        self.alg_force_a1 / self.opt_force_a1
    }

    pub fn ratio_force_a3(&self) -> S {
        self.alg_force_a3 / self.opt_force_a3
    }

    pub fn ratio_force_a2(&self) -> S {
        self.alg_force_a2 / self.opt_force_a2
    }

    pub fn min_ratio(&self) -> S {
        self.ratio_force_a1()
            .min(self.ratio_force_a3())
            .min(self.ratio_force_a2())
    }
}

/// Evaluates the six bounds from the constants alone (no simulation).
pub fn section5_bounds<S: Scalar>(k: &ArbitraryLbConstants<S>) -> Section5Bounds<S> {
    let one = S::one();
    let hyp = |x: S, y: S| (x * x + y * y).sqrt();
    let slope3 = k.c2 + k.c3;
    // shared prefix: down the y-axis to p1, then across to p2
    let prefix = k.c1 + hyp(one - k.p2, k.c2 * k.p2);
    // and on to p3 for the branches that see the third line
    let prefix3 = prefix + hyp(slope3 * k.p3 - k.c2 * k.p2, k.p2 - k.p3);
    Section5Bounds {
        opt_force_a1: hyp(k.c1 + k.c2 * k.a1, k.a1 - one),
        alg_force_a1: prefix + hyp(k.a1, k.c2 * k.a1) - hyp(k.p2, k.c2 * k.p2),
        opt_force_a3: hyp(one, k.c1),
        alg_force_a3: prefix3 + hyp(k.p3, slope3 * k.p3),
        opt_force_a2: hyp(k.c1 + slope3 * k.a2, one - k.a2),
        alg_force_a2: prefix3 + hyp(k.a2, slope3 * k.a2) - hyp(k.p3, slope3 * k.p3),
    }
}

/// Configuration of a force-to-point endgame: at most `max_lines` lines
/// through the target at golden-ratio angles, stopping once the policy is
/// within `stop_radius` of the target.
#[derive(Clone, Copy, Debug)]
pub struct ForceConfig<S> {
    pub max_lines: usize,
    pub stop_radius: S,
}

impl<S: Scalar> Default for ForceConfig<S> {
    fn default() -> Self {
        Self {
            max_lines: 500,
            stop_radius: real(1e-4),
        }
    }
}

impl<S: Scalar> ForceConfig<S> {
    fn validate(&self) -> Result<()> {
        if self.max_lines == 0 {
            return Err(Error::invalid("force-to-point needs at least one line"));
        }
        if !(self.stop_radius > S::zero()) {
            return Err(Error::invalid("stop_radius must be positive"));
        }
        Ok(())
    }
}

/// Outcome of a force-to-point phase.
#[derive(Clone, Debug)]
pub struct ForceOutcome<S> {
    pub lines: Vec<Line<S>>,
    pub points: Vec<Point<S>>,
    pub converged: bool,
}

/// Angle of the `j`-th forcing line: `pi * frac(j / phi)`. The golden
/// ratio equidistributes the angles, so no direction is ever repeated and
/// lingering away from the target stays uniformly expensive.
fn golden_angle(j: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    std::f64::consts::PI * (j as f64 * INV_PHI).fract()
}

/// Issues lines through `target` until the policy's point is within
/// `cfg.stop_radius` of it (or `cfg.max_lines` is exhausted).
pub fn force_to_point<S: Scalar>(
    run: &mut PolicyRun<'_, S>,
    target: &Point<S>,
    cfg: &ForceConfig<S>,
) -> Result<ForceOutcome<S>> {
    cfg.validate()?;
    if target.dim() != 2 {
        return Err(Error::invalid("force_to_point works in the plane"));
    }
    let mut lines = Vec::new();
    let mut points = Vec::new();
    let mut converged = false;
    for j in 1..=cfg.max_lines {
        let angle = golden_angle(j);
        let line = Line::new(
            target.clone(),
            vec![real(angle.cos()), real(angle.sin())],
        )?;
        let point = run.feed(&line)?.clone();
        let dist = distance(&point, target)?;
        lines.push(line);
        points.push(point);
        if dist <= cfg.stop_radius {
            converged = true;
            break;
        }
    }
    Ok(ForceOutcome {
        lines,
        points,
        converged,
    })
}

/// Runs the full three-line adversary against a 2D policy starting at the
/// origin.
///
/// The first request is the horizontal line through `p1`; if the policy
/// answers with negative x the whole construction is mirrored across the
/// y-axis. The second request decides between the force-to-`a1` endgame
/// (policy strictly inside the forbidden region right of `p2`) and the
/// third request, which in turn decides between forcing to `a3` (policy at
/// `p3` or left of it) and forcing to `a2`.
pub fn arbitrary_lb_adversary<S: Scalar>(
    policy: &dyn Policy<S>,
    constants: &ArbitraryLbConstants<S>,
    force_cfg: &ForceConfig<S>,
) -> Result<AdversaryTranscript<S>> {
    let geom = Section5Geometry::new(constants)?;
    let start = Point::xy(S::zero(), S::zero());
    let mut run = PolicyRun::new(policy, start.clone(), None);

    // the first request is symmetric under mirroring
    let q1 = run.feed(&geom.l1)?.clone();
    let mirrored = q1.coords()[0] < S::zero();
    let fix = |p: &Point<S>| -> Point<S> {
        if mirrored {
            mirror_point(p)
        } else {
            p.clone()
        }
    };
    let issue = |l: &Line<S>| -> Result<Line<S>> {
        if mirrored {
            mirror_line(l)
        } else {
            Ok(l.clone())
        }
    };

    let mut lines = vec![geom.l1.clone()];

    let l2 = issue(&geom.l2)?;
    let q2 = fix(run.feed(&l2)?);
    lines.push(l2);

    let one = S::one();
    let (branch, target) = if q2.coords()[0] > one - constants.p2 {
        // forbidden region: strictly right of p2
        (Branch::ForceA1, geom.a1.clone())
    } else {
        let l3 = issue(&geom.l3)?;
        let q3 = fix(run.feed(&l3)?);
        lines.push(l3);
        if one - q3.coords()[0] >= constants.p3 {
            (Branch::ForceA3, geom.a3.clone())
        } else {
            (Branch::ForceA2, geom.a2.clone())
        }
    };

    let target = if mirrored { mirror_point(&target) } else { target };
    let force = force_to_point(&mut run, &target, force_cfg)?;
    lines.extend(force.lines);

    // the optimum serves everything by walking straight to the target:
    // its visit point on each construction line is the segment crossing,
    // and every forcing line passes through the target itself
    let mut adversary_points = Vec::with_capacity(lines.len());
    for line in &lines {
        if force.points.len() + adversary_points.len() < lines.len() {
            adversary_points.push(segment_line_crossing(&start, &target, line)?);
        } else {
            adversary_points.push(target.clone());
        }
    }
    let mut adv_path = vec![start.clone()];
    adv_path.extend(adversary_points.iter().cloned());
    let adv_cost = path_cost(&adv_path)?;

    let alg_cost = run.cost();
    let alg_points = run.points()[1..].to_vec();
    Ok(AdversaryTranscript {
        start,
        lines,
        alg_points,
        adversary_points,
        alg_cost,
        adv_cost,
        ratio: ratio_with_conventions(alg_cost, adv_cost),
        branch,
        force_converged: force.converged,
    })
}

fn mirror_point<S: Scalar>(p: &Point<S>) -> Point<S> {
    Point::xy(-p.coords()[0], p.coords()[1])
}

fn mirror_line<S: Scalar>(l: &Line<S>) -> Result<Line<S>> {
    Line::new(mirror_point(l.base()), vec![-l.dir()[0], l.dir()[1]])
}

/// Where the segment from `a` to `b` crosses `line` (2D). Used for
/// adversary paths whose straight walk is known to serve each line.
fn segment_line_crossing<S: Scalar>(a: &Point<S>, b: &Point<S>, line: &Line<S>) -> Result<Point<S>> {
    let dir = line.dir();
    let seg = [b.coords()[0] - a.coords()[0], b.coords()[1] - a.coords()[1]];
    let denom = seg[0] * dir[1] - seg[1] * dir[0];
    let slack = real::<S>(1e-9);
    if denom.abs() <= slack {
        // segment parallel to the line: valid only if it lies on it
        if line.contains(a)? {
            return Ok(a.clone());
        }
        return Err(Error::degenerate("adversary segment does not cross the line"));
    }
    let rel = [
        line.base().coords()[0] - a.coords()[0],
        line.base().coords()[1] - a.coords()[1],
    ];
    let t = (rel[0] * dir[1] - rel[1] * dir[0]) / denom;
    if t < -slack || t > S::one() + slack {
        return Err(Error::degenerate(
            "adversary segment does not cross the line within its span",
        ));
    }
    let t = t.max(S::zero()).min(S::one());
    Ok(Point::xy(
        a.coords()[0] + t * seg[0],
        a.coords()[1] + t * seg[1],
    ))
}

// ---------------------------------------------------------------------------
// Rotating-line constructions for memoryless policies
// ---------------------------------------------------------------------------

/// The predicted competitive ratio of a memoryless policy whose
/// drift-to-height ratio tends to `b0` at flat angles:
/// `sqrt(4*b0^2 + 1/b0^2 + 5)`, minimized at `1/sqrt(2)` with value 3.
pub fn theoretical_memoryless_ratio<S: Scalar>(b0: S) -> Result<S> {
    if !(b0 > S::zero()) {
        return Err(Error::invalid("theoretical_memoryless_ratio requires b0 > 0"));
    }
    let four = real::<S>(4.0);
    let five = real::<S>(5.0);
    Ok((four * b0 * b0 + S::one() / (b0 * b0) + five).sqrt())
}

/// Generator of the main rotating-line sequence: after the observed first
/// response, every later request is the previous line rotated clockwise by
/// `arctan(a)` around a fixed pivot on the x-axis.
#[derive(Clone, Debug)]
pub struct MainSequence<S> {
    pivot: Point<S>,
    theta: S,
    issued: usize,
}

impl<S: Scalar> MainSequence<S> {
    /// Builds the generator from the observed first response `(p, 0)`.
    /// Returns `None` when the implied drift `beta = 1/a - p` leaves the
    /// construction's regime (`beta <= 0` or `a * beta >= 1`), in which
    /// case the caller falls back to rotating around the origin.
    pub fn after_first_response(a: S, observed_p1: S) -> Result<Option<(Self, S)>> {
        if !(a > S::zero()) {
            return Err(Error::invalid("the rotation parameter must be positive"));
        }
        let beta_hat = S::one() / a - observed_p1;
        if beta_hat <= S::zero() || a * beta_hat >= S::one() {
            return Ok(None);
        }
        let half = real::<S>(0.5);
        let reach = (S::one() + a * a).sqrt() * (beta_hat + half / beta_hat);
        let pivot = Point::xy(observed_p1 + reach, S::zero());
        Ok(Some((
            Self {
                pivot,
                theta: a.atan(),
                issued: 1,
            },
            beta_hat,
        )))
    }

    pub fn pivot(&self) -> &Point<S> {
        &self.pivot
    }

    /// The next request: the x-axis rotated clockwise around the pivot by
    /// the issued-step count times `arctan(a)`.
    pub fn next_line(&mut self) -> Line<S> {
        let angle = -self.theta * real::<S>(self.issued as f64);
        self.issued += 1;
        Line::new(self.pivot.clone(), vec![angle.cos(), angle.sin()])
            .expect("rotated directions are unit vectors")
    }
}

/// Report of a run of the main memoryless lower-bound construction.
#[derive(Clone, Debug)]
pub struct MemorylessMainReport<S> {
    pub transcript: AdversaryTranscript<S>,
    /// Drift-to-height ratio the policy revealed on the first step.
    pub beta_hat: S,
    /// Predicted asymptotic ratio for that drift, when in regime.
    pub theoretical_ratio: Option<S>,
    /// True when the observed drift left the main regime and the run used
    /// the rotation-around-the-origin fallback.
    pub fell_back: bool,
}

/// Runs the main construction: start at `(1/a, 1)` on the line of slope
/// `a` through the origin, request the x-axis, then `m - 1` clockwise
/// rotations around a pivot placed from the observed response. The
/// optimum's cost is the straight-line distance from the start to the
/// pivot, which lies on every request.
pub fn run_memoryless_main<S: Scalar>(
    policy: &dyn Policy<S>,
    a: S,
    m: usize,
) -> Result<MemorylessMainReport<S>> {
    if !(a > S::zero()) {
        return Err(Error::invalid("the rotation parameter must be positive"));
    }
    if m < 2 {
        return Err(Error::invalid("the main construction needs at least two requests"));
    }
    let one = S::one();
    let start = Point::xy(one / a, one);
    let initial = Line::new(Point::xy(S::zero(), S::zero()), vec![one, a])?;
    let mut run = PolicyRun::new(policy, start.clone(), Some(initial));

    let x_axis = Line::new(Point::xy(S::zero(), S::zero()), vec![one, S::zero()])?;
    let first = run.feed(&x_axis)?.clone();
    let observed_p1 = first.coords()[0];
    let mut lines = vec![x_axis];

    match MainSequence::after_first_response(a, observed_p1)? {
        Some((mut seq, beta_hat)) => {
            for _ in 1..m {
                let line = seq.next_line();
                run.feed(&line)?;
                lines.push(line);
            }
            let pivot = seq.pivot().clone();
            let adv_cost = distance(&start, &pivot)?;
            let alg_cost = run.cost();
            let transcript = AdversaryTranscript {
                start,
                adversary_points: vec![pivot; lines.len()],
                alg_points: run.points()[1..].to_vec(),
                lines,
                alg_cost,
                adv_cost,
                ratio: ratio_with_conventions(alg_cost, adv_cost),
                branch: Branch::MemorylessMain,
                force_converged: true,
            };
            Ok(MemorylessMainReport {
                transcript,
                beta_hat,
                theoretical_ratio: Some(theoretical_memoryless_ratio(beta_hat)?),
                fell_back: false,
            })
        }
        None => {
            // out of regime: rotate around the origin instead, where the
            // optimum simply walks to the common point of all requests
            let origin = Point::xy(S::zero(), S::zero());
            let theta = a.atan();
            for t in 1..m {
                let angle = -theta * real::<S>(t as f64);
                let line = Line::new(origin.clone(), vec![angle.cos(), angle.sin()])?;
                run.feed(&line)?;
                lines.push(line);
            }
            let adv_cost = distance(&start, &origin)?;
            let alg_cost = run.cost();
            let transcript = AdversaryTranscript {
                start,
                adversary_points: vec![origin; lines.len()],
                alg_points: run.points()[1..].to_vec(),
                lines,
                alg_cost,
                adv_cost,
                ratio: ratio_with_conventions(alg_cost, adv_cost),
                branch: Branch::MemorylessMain,
                force_converged: true,
            };
            Ok(MemorylessMainReport {
                transcript,
                beta_hat: one / a - observed_p1,
                theoretical_ratio: None,
                fell_back: true,
            })
        }
    }
}

/// The rotation construction: start at `(1, 0)` on the x-axis and rotate
/// the request clockwise around the origin by `arctan(a)` each step. The
/// optimum pays exactly 1 by moving to the origin immediately.
pub fn memoryless_rotation_instance<S: Scalar>(a: S, m: usize) -> Result<Instance<S>> {
    if !(a > S::zero() && a < S::one()) {
        return Err(Error::invalid("the rotation construction needs 0 < a < 1"));
    }
    let origin = Point::xy(S::zero(), S::zero());
    let x_axis = Line::new(origin.clone(), vec![S::one(), S::zero()])?;
    let theta = a.atan();
    let mut requests = Vec::with_capacity(m);
    for t in 1..=m {
        let angle = -theta * real::<S>(t as f64);
        requests.push(Line::new(origin.clone(), vec![angle.cos(), angle.sin()])?);
    }
    Instance::new(Point::xy(S::one(), S::zero()), Some(x_axis), requests)
}

/// Runs the rotation construction and scores it against the analytic
/// optimum of 1.
pub fn run_memoryless_rotation<S: Scalar>(
    policy: &dyn Policy<S>,
    a: S,
    m: usize,
) -> Result<AdversaryTranscript<S>> {
    let instance = memoryless_rotation_instance(a, m)?;
    let path = crate::chase::run_policy(policy, &instance)?;
    let origin = Point::xy(S::zero(), S::zero());
    let alg_cost = path.cost();
    Ok(AdversaryTranscript {
        start: instance.start().clone(),
        lines: instance.requests().to_vec(),
        alg_points: path.points()[1..].to_vec(),
        adversary_points: vec![origin; instance.len()],
        alg_cost,
        adv_cost: S::one(),
        ratio: alg_cost,
        branch: Branch::MemorylessRotation,
        force_converged: true,
    })
}

/// The two-line single-step instance: start at `(1, h)` on the line of
/// slope `h` through the origin, then request the x-axis. The optimum
/// drops straight down at cost `h`.
pub fn memoryless_single_instance<S: Scalar>(h: S) -> Result<Instance<S>> {
    if !(h > S::zero()) {
        return Err(Error::invalid("the single-step construction needs h > 0"));
    }
    let initial = Line::new(Point::xy(S::zero(), S::zero()), vec![S::one(), h])?;
    let x_axis = Line::new(Point::xy(S::zero(), S::zero()), vec![S::one(), S::zero()])?;
    Instance::new(Point::xy(S::one(), h), Some(initial), vec![x_axis])
}

/// Runs the single-step instance against the analytic optimum `h`.
pub fn run_memoryless_single<S: Scalar>(
    policy: &dyn Policy<S>,
    h: S,
) -> Result<AdversaryTranscript<S>> {
    let instance = memoryless_single_instance(h)?;
    let path = crate::chase::run_policy(policy, &instance)?;
    let alg_cost = path.cost();
    Ok(AdversaryTranscript {
        start: instance.start().clone(),
        lines: instance.requests().to_vec(),
        alg_points: path.points()[1..].to_vec(),
        adversary_points: vec![Point::xy(S::one(), S::zero())],
        alg_cost,
        adv_cost: h,
        ratio: ratio_with_conventions(alg_cost, h),
        branch: Branch::MemorylessSingle,
        force_converged: true,
    })
}

/// Intersection of the (extended) line through `a` and `b` with `line`.
fn intersect_segment_extension<S: Scalar>(
    a: &Point<S>,
    b: &Point<S>,
    line: &Line<S>,
) -> Result<Point<S>> {
    let through = Line::through(a, b)?;
    crate::geometry::intersect_lines_2d(&through, line, crate::geometry::parallel_tol())?
        .ok_or_else(|| Error::degenerate("lines do not intersect"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::{BetaPolicy, Drift, Greedy};

    type P = Point<f64>;

    #[test]
    fn section5_lines_are_concurrent_at_a3() {
        let geom = Section5Geometry::new(&ArbitraryLbConstants::<f64>::default()).unwrap();
        for line in [&geom.l1, &geom.l2, &geom.l3] {
            assert!(line.distance_to(&geom.a3).unwrap() < 1e-12);
        }
        // named points sit on their lines
        assert!(geom.l2.distance_to(&geom.p2).unwrap() < 1e-12);
        assert!(geom.l2.distance_to(&geom.a1).unwrap() < 1e-12);
        assert!(geom.l3.distance_to(&geom.p3).unwrap() < 1e-12);
        assert!(geom.l3.distance_to(&geom.a2).unwrap() < 1e-12);
    }

    #[test]
    fn section5_p3_between_p2_prime_and_a3() {
        let geom = Section5Geometry::new(&ArbitraryLbConstants::<f64>::default()).unwrap();
        let x = geom.p3.coords()[0];
        assert!(geom.p2_prime.coords()[0] <= x && x <= geom.a3.coords()[0]);
    }

    #[test]
    fn section5_bounds_match_published_values() {
        let b = section5_bounds(&ArbitraryLbConstants::<f64>::default());
        assert!((b.opt_force_a1 - 1.23679).abs() <= 1e-4);
        assert!((b.alg_force_a1 - 1.89948).abs() <= 1e-4);
        assert!((b.opt_force_a3 - 1.142963).abs() <= 1e-4);
        assert!((b.alg_force_a3 - 1.75537).abs() <= 1e-4);
        assert!((b.opt_force_a2 - 1.50435).abs() <= 1e-4);
        assert!((b.alg_force_a2 - 2.31039).abs() <= 1e-4);
        assert!(b.min_ratio() >= 1.5358);
    }

    #[test]
    fn section5_bounds_agree_with_point_geometry() {
        // the closed forms and the coordinate construction are independent
        // routes to the same optimum costs
        let k = ArbitraryLbConstants::<f64>::default();
        let geom = Section5Geometry::new(&k).unwrap();
        let b = section5_bounds(&k);
        let origin = P::xy(0.0, 0.0);
        assert!((distance(&origin, &geom.a1).unwrap() - b.opt_force_a1).abs() < 1e-12);
        assert!((distance(&origin, &geom.a3).unwrap() - b.opt_force_a3).abs() < 1e-12);
        assert!((distance(&origin, &geom.a2).unwrap() - b.opt_force_a2).abs() < 1e-12);
        // and the algorithm-side bound for the a3 branch is the polyline
        // through p1, p2, p3 and a3
        let poly = path_cost(&[
            origin,
            geom.p1.clone(),
            geom.p2.clone(),
            geom.p3.clone(),
            geom.a3.clone(),
        ])
        .unwrap();
        assert!((poly - b.alg_force_a3).abs() < 1e-12);
    }

    #[test]
    fn force_to_point_stops_immediately_when_already_there() {
        let target = P::xy(1.0, 1.0);
        let policy = Greedy;
        let mut run = PolicyRun::new(&policy, target.clone(), None);
        let out = force_to_point(&mut run, &target, &ForceConfig::default()).unwrap();
        assert_eq!(out.lines.len(), 1);
        assert!(out.converged);
        assert_eq!(run.cost(), 0.0);
    }

    #[test]
    fn force_to_point_moves_drift_to_the_target() {
        let target = P::xy(0.0, 0.0);
        let policy = Drift;
        let mut run = PolicyRun::new(&policy, P::xy(1.0, 0.0), None);
        let cfg = ForceConfig {
            max_lines: 200,
            stop_radius: 1e-3,
        };
        let out = force_to_point(&mut run, &target, &cfg).unwrap();
        assert!(out.converged, "drift did not reach the target");
        // it must at least cover the straight-line distance
        assert!(run.cost() >= 1.0 - 1e-3);
    }

    #[test]
    fn greedy_on_a_two_line_fan_pays_unboundedly() {
        // alternating between two shallow lines through the target never
        // brings greedy close, and its total cost keeps growing
        let target = P::xy(0.0, 0.0);
        let l1 = Line::new(target.clone(), vec![1.0, 0.0]).unwrap();
        let l2 = Line::new(target.clone(), vec![(0.05f64).cos(), (0.05f64).sin()]).unwrap();
        let policy = Greedy;
        let mut run = PolicyRun::new(&policy, P::xy(1.0, 0.0), None);
        for j in 0..200 {
            let line = if j % 2 == 0 { &l2 } else { &l1 };
            run.feed(line).unwrap();
        }
        assert!(run.cost() > 3.0, "greedy cost only {}", run.cost());
        assert!(distance(run.position(), &target).unwrap() > 0.5);
    }

    #[test]
    fn adversary_branches_for_known_policies() {
        let k = ArbitraryLbConstants::<f64>::default();
        let cfg = ForceConfig {
            max_lines: 500,
            stop_radius: 1e-4,
        };
        let drift = arbitrary_lb_adversary(&Drift, &k, &cfg).unwrap();
        assert_eq!(drift.branch, Branch::ForceA3);
        assert!(drift.force_converged);
        // a unit-drift policy enters the forbidden region right away
        let unit = BetaPolicy::constant(1.0);
        let t = arbitrary_lb_adversary(&unit, &k, &cfg).unwrap();
        assert_eq!(t.branch, Branch::ForceA1);
    }

    #[test]
    fn adversary_transcript_is_feasible() {
        let k = ArbitraryLbConstants::<f64>::default();
        let cfg = ForceConfig::default();
        for policy in ["drift", "greedy", "beta:const:0.3", "beta:const:1.0"] {
            let p = crate::policies::parse_policy::<f64>(policy).unwrap();
            let t = arbitrary_lb_adversary(&p, &k, &cfg).unwrap();
            assert_eq!(t.lines.len(), t.alg_points.len());
            assert_eq!(t.lines.len(), t.adversary_points.len());
            for (line, (alg, adv)) in t
                .lines
                .iter()
                .zip(t.alg_points.iter().zip(&t.adversary_points))
            {
                assert!(line.distance_to(alg).unwrap() <= 1e-9 * (1.0 + alg.norm()));
                assert!(line.distance_to(adv).unwrap() <= 1e-9 * (1.0 + adv.norm()));
            }
            assert!(t.ratio >= 1.5358 - 0.02, "{policy}: ratio {}", t.ratio);
        }
    }

    #[test]
    fn mirrored_runs_score_like_unmirrored_ones() {
        // a policy biased to the negative side triggers the mirror branch
        struct MirrorBait;
        impl Policy<f64> for MirrorBait {
            fn step(
                &self,
                state: &crate::chase::PolicyState<f64>,
                request: &Line<f64>,
            ) -> Result<P> {
                // first step: land left of the start; afterwards greedy
                if state.previous_line.is_none() {
                    let q = crate::geometry::project_point_onto_line(&state.current, request)?;
                    return Ok(P::xy(q.coords()[0] - 0.3, q.coords()[1]));
                }
                crate::policies::greedy_step(&state.current, request)
            }
        }
        let k = ArbitraryLbConstants::<f64>::default();
        let t = arbitrary_lb_adversary(&MirrorBait, &k, &ForceConfig::default()).unwrap();
        assert!(t.alg_points[0].coords()[0] < 0.0);
        assert!(t.ratio > 1.5358 - 0.02);
        // transcript still feasible under mirroring
        for (line, adv) in t.lines.iter().zip(&t.adversary_points) {
            assert!(line.distance_to(adv).unwrap() <= 1e-9 * (1.0 + adv.norm()));
        }
    }

    #[test]
    fn theoretical_ratio_values() {
        let at_opt = theoretical_memoryless_ratio(1.0 / 2.0f64.sqrt()).unwrap();
        assert!((at_opt - 3.0).abs() < 1e-12);
        assert!((theoretical_memoryless_ratio(1.0).unwrap() - 10.0f64.sqrt()).abs() < 1e-12);
        assert!((theoretical_memoryless_ratio(0.5).unwrap() - 10.0f64.sqrt()).abs() < 1e-12);
        assert!(theoretical_memoryless_ratio(0.0).is_err());
    }

    #[test]
    fn main_sequence_pivot_distance() {
        // at beta = 1/sqrt(2) the pivot sits sqrt(2) * sqrt(1+a^2) right
        // of the observed point
        let a = 1e-3f64;
        let beta = 1.0 / 2.0f64.sqrt();
        let p1 = 1.0 / a - beta;
        let (seq, beta_hat) = MainSequence::after_first_response(a, p1).unwrap().unwrap();
        assert!((beta_hat - beta).abs() < 1e-12);
        let expected = p1 + (1.0 + a * a).sqrt() * 2.0f64.sqrt();
        assert!((seq.pivot().coords()[0] - expected).abs() < 1e-9);
    }

    #[test]
    fn main_construction_against_drift_approaches_three() {
        let report = run_memoryless_main(&Drift, 1e-3, 20_000).unwrap();
        assert!(!report.fell_back);
        assert!((report.beta_hat - 1.0 / 2.0f64.sqrt()).abs() < 1e-3);
        let ratio = report.transcript.ratio;
        assert!((2.95..=3.05).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn main_construction_falls_back_for_overshooting_policies() {
        // beta so large that a * beta >= 1 leaves the regime
        let policy = BetaPolicy::constant(1.0 / 0.2);
        let report = run_memoryless_main(&policy, 0.2, 50).unwrap();
        assert!(report.fell_back);
        assert!(report.theoretical_ratio.is_none());
    }

    #[test]
    fn rotation_construction_diverges_for_zero_beta() {
        let t = run_memoryless_rotation(&Greedy, 0.01, 10_000).unwrap();
        assert!(t.ratio >= 10.0, "ratio {}", t.ratio);
        assert_eq!(t.adv_cost, 1.0);
    }

    #[test]
    fn rotation_construction_shrinkage_bound() {
        // a policy with beta <= eps loses at most 2*eps*a of its pivot
        // distance per step
        let eps = 0.5;
        let a = 0.01;
        let policy = BetaPolicy::constant(eps);
        let instance = memoryless_rotation_instance(a, 200).unwrap();
        let path = crate::chase::run_policy(&policy, &instance).unwrap();
        let origin = P::xy(0.0, 0.0);
        for (t, p) in path.points().iter().enumerate().skip(1) {
            let s_t = distance(p, &origin).unwrap() / (1.0 + a * a).sqrt();
            let bound = (1.0 - 2.0 * eps * a).powi(t as i32);
            assert!(
                s_t >= bound - 1e-9,
                "step {t}: s_t = {s_t} below bound {bound}"
            );
        }
    }

    #[test]
    fn rotation_keeps_drift_bounded() {
        let t = run_memoryless_rotation(&Drift, 0.01, 10_000).unwrap();
        assert!(t.ratio <= 3.0 + 1e-6, "ratio {}", t.ratio);
    }

    #[test]
    fn single_step_ratios() {
        let greedy = run_memoryless_single(&Greedy, 0.01f64).unwrap();
        assert!((greedy.ratio - 1.0).abs() < 1e-9);
        let drift = run_memoryless_single(&Drift, 1e-6f64).unwrap();
        assert!((drift.ratio - (1.5f64).sqrt()).abs() < 1e-3, "ratio {}", drift.ratio);
        let big = run_memoryless_single(&BetaPolicy::constant(10.0), 0.01).unwrap();
        assert!((big.ratio - 101.0f64.sqrt()).abs() < 1e-6);
    }
}
