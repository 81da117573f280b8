//! Problem and solution representations: instances, paths, costs, and the
//! uniform interface every online policy implements.

use crate::error::{Error, Result};
use crate::geometry::{distance, Line, Point};
use crate::scalar::{real, Scalar};

/// An instance of the line chasing problem: a start point, an optional line
/// the start already lies on, and the ordered request sequence.
#[derive(Clone, Debug)]
pub struct Instance<S> {
    start: Point<S>,
    initial_line: Option<Line<S>>,
    requests: Vec<Line<S>>,
}

impl<S: Scalar> Instance<S> {
    pub fn new(
        start: Point<S>,
        initial_line: Option<Line<S>>,
        requests: Vec<Line<S>>,
    ) -> Result<Self> {
        let dim = start.dim();
        if let Some(line) = &initial_line {
            if line.dim() != dim {
                return Err(Error::DimensionMismatch(dim, line.dim()));
            }
            if !line.contains(&start)? {
                return Err(Error::invalid("start point does not lie on the initial line"));
            }
        }
        for (i, line) in requests.iter().enumerate() {
            if line.dim() != dim {
                return Err(Error::invalid(format!(
                    "request {i} has dimension {} but the instance has dimension {dim}",
                    line.dim()
                )));
            }
        }
        Ok(Self {
            start,
            initial_line,
            requests,
        })
    }

    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    pub fn start(&self) -> &Point<S> {
        &self.start
    }

    pub fn initial_line(&self) -> Option<&Line<S>> {
        self.initial_line.as_ref()
    }

    pub fn requests(&self) -> &[Line<S>] {
        &self.requests
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }
}

/// A served path: the visit points (start first) and their total length.
#[derive(Clone, Debug)]
pub struct Path<S> {
    points: Vec<Point<S>>,
    cost: S,
}

impl<S: Scalar> Path<S> {
    pub fn from_points(points: Vec<Point<S>>) -> Result<Self> {
        let cost = path_cost(&points)?;
        Ok(Self { points, cost })
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    pub fn cost(&self) -> S {
        self.cost
    }

    pub fn last(&self) -> &Point<S> {
        self.points.last().expect("paths are never empty")
    }
}

/// Sum of consecutive Euclidean distances; zero for a single point.
pub fn path_cost<S: Scalar>(points: &[Point<S>]) -> Result<S> {
    if points.is_empty() {
        return Err(Error::invalid("path_cost requires at least one point"));
    }
    let mut total = S::zero();
    for pair in points.windows(2) {
        total = total + distance(&pair[0], &pair[1])?;
    }
    Ok(total)
}

/// The entire memory a memoryless policy is allowed: its current position
/// and the line that position lies on (absent before the first request).
#[derive(Clone, Debug)]
pub struct PolicyState<S> {
    pub current: Point<S>,
    pub previous_line: Option<Line<S>>,
}

/// An online line chasing policy. `step` must return a point on `request`;
/// the runner enforces this and rejects off-line points.
pub trait Policy<S: Scalar> {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>>;
}

impl<S: Scalar, P: Policy<S> + ?Sized> Policy<S> for &P {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>> {
        (**self).step(state, request)
    }
}

impl<S: Scalar> Policy<S> for Box<dyn Policy<S> + Send + Sync> {
    fn step(&self, state: &PolicyState<S>, request: &Line<S>) -> Result<Point<S>> {
        (**self).step(state, request)
    }
}

/// Drives one policy through a request stream, validating and accounting
/// every move. Adversaries use this to interleave observation and requests.
pub struct PolicyRun<'a, S: Scalar> {
    policy: &'a (dyn Policy<S> + 'a),
    state: PolicyState<S>,
    points: Vec<Point<S>>,
    cost: S,
}

impl<'a, S: Scalar> PolicyRun<'a, S> {
    pub fn new(
        policy: &'a (dyn Policy<S> + 'a),
        start: Point<S>,
        initial_line: Option<Line<S>>,
    ) -> Self {
        Self {
            policy,
            state: PolicyState {
                current: start.clone(),
                previous_line: initial_line,
            },
            points: vec![start],
            cost: S::zero(),
        }
    }

    /// Feeds one request, checks the returned point lies on it (within
    /// `1e-9 * (1 + |point|)`), and accounts the movement cost.
    pub fn feed(&mut self, request: &Line<S>) -> Result<&Point<S>> {
        let next = self.policy.step(&self.state, request)?;
        let off = request.distance_to(&next)?;
        let tol = real::<S>(1e-9) * (S::one() + next.norm());
        if off > tol {
            return Err(Error::ContractViolation {
                step: self.points.len(),
                distance: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        self.cost = self.cost + distance(&self.state.current, &next)?;
        self.state.current = next.clone();
        self.state.previous_line = Some(request.clone());
        self.points.push(next);
        Ok(self.points.last().unwrap())
    }

    pub fn position(&self) -> &Point<S> {
        &self.state.current
    }

    pub fn cost(&self) -> S {
        self.cost
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    pub fn into_path(self) -> Path<S> {
        Path {
            points: self.points,
            cost: self.cost,
        }
    }
}

/// Runs a policy over a whole instance and returns the served path.
pub fn run_policy<S: Scalar>(policy: &dyn Policy<S>, instance: &Instance<S>) -> Result<Path<S>> {
    let mut run = PolicyRun::new(
        policy,
        instance.start().clone(),
        instance.initial_line().cloned(),
    );
    for request in instance.requests() {
        run.feed(request)?;
    }
    Ok(run.into_path())
}

/// `policy cost / opt_cost`, with the conventions `x/0 = +inf` for `x > 0`
/// and `0/0 = 1`.
pub fn competitive_ratio<S: Scalar>(
    policy: &dyn Policy<S>,
    instance: &Instance<S>,
    opt_cost: S,
) -> Result<S> {
    let cost = run_policy(policy, instance)?.cost();
    Ok(ratio_with_conventions(cost, opt_cost))
}

pub(crate) fn ratio_with_conventions<S: Scalar>(cost: S, opt_cost: S) -> S {
    if opt_cost > S::zero() {
        cost / opt_cost
    } else if cost > S::zero() {
        S::infinity()
    } else {
        S::one()
    }
}
