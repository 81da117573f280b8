//! The online policies: the 2D drift rule, its arbitrary-dimension
//! extension, greedy projection, and the parametric memoryless family.
//!
//! The drift rule: with the previous line `L`, current point `P` on `L`,
//! and new request `L'`, let `S` be their intersection, `r = d(S, P)`, `h = d(P, Pbar)`
//! and `s = d(S, Pbar)` where `Pbar` is the orthogonal projection of `P`
//! onto `L'`. The rule moves to the point of `L'` at distance `s - x` from
//! `S` on `Pbar`'s side, with `x = (h + s - r) / sqrt(2)`. If the lines do
//! not intersect (or there is no previous line) it moves to `Pbar`, and if
//! `P` is already on `L'` it does not move.

use std::sync::Arc;

use crate::chase::{Policy, PolicyState};
use crate::error::{Error, Result};
use crate::geometry::{
    distance, intersect_lines_2d, parallel_tol, plane_through_line_and_point,
    project_line_onto_plane, project_point_onto_line, Line, Point,
};
use crate::scalar::{inv_sqrt2, real, Scalar};

/// Per-move audit record of the drift rule's quantities.
#[derive(Clone, Debug)]
pub struct StepGeometry<S> {
    /// Whether the previous and new lines intersect (false also covers the
    /// no-previous-line and no-move branches).
    pub intersecting: bool,
    /// The intersection point of the two lines, when they intersect.
    pub intersection: Option<Point<S>>,
    /// `r`: distance from the intersection to the starting point.
    pub start_offset: S,
    /// `h`: perpendicular distance from the starting point to the new line.
    pub height: S,
    /// `s`: distance from the intersection to the projection foot.
    pub foot_offset: S,
    /// `x`: signed distance moved from the foot toward the intersection.
    pub drift: S,
    /// The orthogonal projection of the starting point onto the new line.
    pub foot: Point<S>,
    /// The point the rule moves to.
    pub moved_to: Point<S>,
}

impl<S: Scalar> StepGeometry<S> {
    fn no_move(p: &Point<S>) -> Self {
        Self {
            intersecting: false,
            intersection: None,
            start_offset: S::zero(),
            height: S::zero(),
            foot_offset: S::zero(),
            drift: S::zero(),
            foot: p.clone(),
            moved_to: p.clone(),
        }
    }

    fn projection(p_new: Point<S>, height: S) -> Self {
        Self {
            intersecting: false,
            intersection: None,
            start_offset: S::zero(),
            height,
            foot_offset: S::zero(),
            drift: S::zero(),
            foot: p_new.clone(),
            moved_to: p_new,
        }
    }
}

/// One move of the drift rule in the plane. `prev` is the line the point
/// currently lies on, absent before the first request.
pub fn drift_step_2d<S: Scalar>(
    p: &Point<S>,
    prev: Option<&Line<S>>,
    next: &Line<S>,
) -> Result<(Point<S>, StepGeometry<S>)> {
    step_2d(p, prev, next, &|h, s, r| {
        // 0 <= x <= s holds exactly in reals; clamp away float noise
        let x = inv_sqrt2::<S>() * (h + s - r);
        x.max(S::zero()).min(s)
    })
}

/// Shared branch structure of every memoryless rule: no move when already
/// on the new line, projection when there is no previous line or the lines
/// are parallel, and a drift of `drift_of(h, s, r)` toward the intersection
/// otherwise.
fn step_2d<S: Scalar>(
    p: &Point<S>,
    prev: Option<&Line<S>>,
    next: &Line<S>,
    drift_of: &dyn Fn(S, S, S) -> S,
) -> Result<(Point<S>, StepGeometry<S>)> {
    if p.dim() != 2 || next.dim() != 2 {
        return Err(Error::invalid("drift steps require dimension 2"));
    }
    if next.contains(p)? {
        return Ok((p.clone(), StepGeometry::no_move(p)));
    }
    let foot = project_point_onto_line(p, next)?;
    let height = distance(p, &foot)?;

    let crossing = match prev {
        None => None,
        Some(line) => intersect_lines_2d(line, next, parallel_tol())?,
    };
    let Some(s_point) = crossing else {
        return Ok((foot.clone(), StepGeometry::projection(foot, height)));
    };

    let start_offset = distance(&s_point, p)?;
    let foot_offset = distance(&s_point, &foot)?;
    let drift = drift_of(height, foot_offset, start_offset);

    // Perpendicular request: the foot coincides with the intersection and
    // there is no "toward S" direction; the rule's drift is zero there.
    let moved_to = if foot_offset > S::zero() {
        let t = foot_offset - drift;
        let w: Vec<S> = foot
            .coords()
            .iter()
            .zip(s_point.coords())
            .map(|(&f, &s)| (f - s) / foot_offset)
            .collect();
        Point::new(
            s_point
                .coords()
                .iter()
                .zip(&w)
                .map(|(&c, &wi)| c + t * wi)
                .collect(),
        )?
    } else {
        s_point.clone()
    };

    let geometry = StepGeometry {
        intersecting: true,
        intersection: Some(s_point),
        start_offset,
        height,
        foot_offset,
        drift,
        foot,
        moved_to: moved_to.clone(),
    };
    Ok((moved_to, geometry))
}

/// The drift rule in R^d: work inside the plane spanned by the new line
/// and the current point, with the previous line orthogonally projected
/// into that plane.
pub fn extended_drift_step<S: Scalar>(
    p: &Point<S>,
    prev: Option<&Line<S>>,
    next: &Line<S>,
) -> Result<Point<S>> {
    p.check_dim(next.dim())?;
    if next.contains(p)? {
        return Ok(p.clone());
    }
    if p.dim() == 2 {
        return drift_step_2d(p, prev, next).map(|(q, _)| q);
    }
    let plane = plane_through_line_and_point(next, p)?;
    let (px, py) = plane.to_plane_coords(p)?;
    let p_in = Point::xy(px, py);
    // The plane's axes make the new line the in-plane x-axis.
    let next_in = Line::new(Point::xy(S::zero(), S::zero()), vec![S::one(), S::zero()])?;
    let prev_in = match prev {
        None => None,
        Some(line) => project_line_onto_plane(line, &plane)?,
    };
    let (q, _) = drift_step_2d(&p_in, prev_in.as_ref(), &next_in)?;
    Ok(plane.from_plane_coords(q.coords()[0], q.coords()[1]))
}

/// Greedy move: the nearest point of the new line.
pub fn greedy_step<S: Scalar>(p: &Point<S>, next: &Line<S>) -> Result<Point<S>> {
    project_point_onto_line(p, next)
}

/// The drift-to-height ratio of the drift rule as a function of
/// `a = h / s`, in the cancellation-free form
/// `sqrt(2) / (a + 1 + sqrt(a^2 + 1))`.
pub fn beta_of_drift<S: Scalar>(a: S) -> Result<S> {
    if !(a > S::zero()) {
        return Err(Error::invalid("beta_of_drift requires a > 0"));
    }
    Ok(real::<S>(2.0).sqrt() / (a + S::one() + (a * a + S::one()).sqrt()))
}

type BetaFn<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

/// A memoryless policy given by its drift-to-height ratio `beta(h/s)`,
/// with separate functions for clockwise and counter-clockwise rotations
/// of the previous line into the new one. Parallel requests always use the
/// projection move. The drift may be negative (movement away from the
/// intersection) or exceed `s` (movement beyond it).
#[derive(Clone)]
pub struct BetaPolicy<S> {
    cw: BetaFn<S>,
    ccw: BetaFn<S>,
}

impl<S: Scalar> BetaPolicy<S> {
    pub fn new(cw: BetaFn<S>, ccw: BetaFn<S>) -> Self {
        Self { cw, ccw }
    }

    /// The same ratio function for both rotation senses.
    pub fn symmetric(beta: impl Fn(S) -> S + Send + Sync + 'static) -> Self {
        let f: BetaFn<S> = Arc::new(beta);
        Self {
            cw: f.clone(),
            ccw: f,
        }
    }

    pub fn constant(value: S) -> Self {
        Self::symmetric(move |_| value)
    }

    /// The member reproducing the drift rule.
    pub fn drift() -> Self {
        Self::symmetric(|a| beta_of_drift(a).unwrap_or_else(|_| S::zero()))
    }

    fn ratio_for(&self, prev: &Line<S>, next: &Line<S>) -> &BetaFn<S> {
        if rotation_is_clockwise(prev, next) {
            &self.cw
        } else {
            &self.ccw
        }
    }
}

impl<S> std::fmt::Debug for BetaPolicy<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BetaPolicy")
    }
}

/// Whether the acute rotation taking `prev` to `next` (as undirected
/// lines) is clockwise in the standard plane orientation.
fn rotation_is_clockwise<S: Scalar>(prev: &Line<S>, next: &Line<S>) -> bool {
    let d1 = prev.dir();
    let mut d2 = [next.dir()[0], next.dir()[1]];
    if d1[0] * d2[0] + d1[1] * d2[1] < S::zero() {
        d2 = [-d2[0], -d2[1]];
    }
    d1[0] * d2[1] - d1[1] * d2[0] < S::zero()
}

/// One move of a memoryless policy: the drift-rule branch structure with
/// `x = h * beta(h/s)` for the rotation sense's ratio function.
pub fn memoryless_step<S: Scalar>(
    policy: &BetaPolicy<S>,
    p: &Point<S>,
    prev: Option<&Line<S>>,
    next: &Line<S>,
) -> Result<Point<S>> {
    let Some(prev_line) = prev else {
        return step_2d(p, None, next, &|_, _, _| S::zero()).map(|(q, _)| q);
    };
    let beta = policy.ratio_for(prev_line, next).clone();
    step_2d(p, Some(prev_line), next, &move |h, s, _| {
        h * beta(h / s)
    })
    .map(|(q, _)| q)
}

// ---------------------------------------------------------------------------
// Policy implementations and name-based selection
// ---------------------------------------------------------------------------

/// The planar drift policy.
#[derive(Clone, Copy, Debug, Default)]
pub struct Drift;

impl<S: Scalar> Policy<S> for Drift {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>> {
        drift_step_2d(&state.current, state.previous_line.as_ref(), request).map(|(q, _)| q)
    }
}

/// The drift policy for arbitrary dimension.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtendedDrift;

impl<S: Scalar> Policy<S> for ExtendedDrift {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>> {
        extended_drift_step(&state.current, state.previous_line.as_ref(), request)
    }
}

/// Projection onto every request.
#[derive(Clone, Copy, Debug, Default)]
pub struct Greedy;

impl<S: Scalar> Policy<S> for Greedy {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>> {
        greedy_step(&state.current, request)
    }
}

impl<S: Scalar> Policy<S> for BetaPolicy<S> {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>> {
        memoryless_step(self, &state.current, state.previous_line.as_ref(), request)
    }
}

/// The policy names the command line accepts.
pub const POLICY_NAMES: &str = "drift, extended-drift, greedy, beta:drift, beta:const:<value>";

/// Selects a policy by name: `drift`, `extended-drift`, `greedy`,
/// `beta:drift`, or `beta:const:<value>`.
pub fn parse_policy<S: Scalar>(name: &str) -> Result<Box<dyn Policy<S> + Send + Sync>> {
    match name {
        "drift" => Ok(Box::new(Drift)),
        "extended-drift" => Ok(Box::new(ExtendedDrift)),
        "greedy" => Ok(Box::new(Greedy)),
        "beta:drift" => Ok(Box::new(BetaPolicy::<S>::drift())),
        _ => {
            if let Some(value) = name.strip_prefix("beta:const:") {
                let v: f64 = value.parse().map_err(|_| {
                    Error::invalid(format!("invalid beta constant {value:?} in policy name"))
                })?;
                if !v.is_finite() {
                    return Err(Error::invalid("beta constant must be finite"));
                }
                Ok(Box::new(BetaPolicy::constant(real::<S>(v))))
            } else {
                Err(Error::invalid(format!(
                    "unknown policy {name:?}; valid policies: {POLICY_NAMES}"
                )))
            }
        }
    }
}
