//! Euclidean primitives in R^d: points, lines, planes, projections,
//! intersections, reflections, and direct similarities.
//!
//! All two-dimensional work inside a [`Plane`] uses in-plane coordinates
//! `(x, y)`; mapping back to R^d is `origin + x*u + y*v`. Degeneracy tests
//! ("point on line", "lines parallel") are relative: a point at norm `p` is
//! on a line when its distance is below `1e-12 * (1 + |p|)`, and two lines
//! are parallel when `|sin(angle)| <= 1e-12`, so nothing here is sensitive
//! to the overall scale of a configuration.

use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};

/// `|sin(angle)|` below which two lines are treated as parallel.
pub fn parallel_tol<S: Scalar>() -> S {
    real(1e-12)
}

/// Relative factor for "point lies on object" tests.
pub fn degeneracy_tol<S: Scalar>() -> S {
    real(1e-12)
}

// ---------------------------------------------------------------------------
// small dense-vector helpers
// ---------------------------------------------------------------------------

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<S: Scalar>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

pub(crate) fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub(crate) fn add_scaled<S: Scalar>(a: &[S], t: S, b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x + t * y).collect()
}

fn normalized<S: Scalar>(v: &[S]) -> Option<Vec<S>> {
    let n = norm(v);
    if n <= S::zero() || !n.is_finite() {
        return None;
    }
    Some(v.iter().map(|&x| x / n).collect())
}

// ---------------------------------------------------------------------------
// Point
// ---------------------------------------------------------------------------

/// A point of R^d, d >= 2, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid(format!(
                "points must have dimension >= 2, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point has non-finite coordinates"));
        }
        Ok(Self { coords })
    }

    /// Shorthand for 2D points.
    pub fn xy(x: S, y: S) -> Self {
        Self { coords: vec![x, y] }
    }

    /// Internal constructor for coordinates already known to be valid.
    pub(crate) fn from_raw(coords: Vec<S>) -> Self {
        debug_assert!(coords.len() >= 2);
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn norm(&self) -> S {
        norm(&self.coords)
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch(self.dim(), other));
        }
        Ok(())
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<S> {
    p.check_dim(q.dim())?;
    Ok(norm(&sub(p.coords(), q.coords())))
}

// ---------------------------------------------------------------------------
// Line
// ---------------------------------------------------------------------------

/// A line of R^d: base point plus unit direction. The direction is
/// normalized on construction; its sign is not meaningful.
#[derive(Clone, Debug)]
pub struct Line<S> {
    base: Point<S>,
    dir: Vec<S>,
}

impl<S: Scalar> Line<S> {
    pub fn new(base: Point<S>, dir: Vec<S>) -> Result<Self> {
        if dir.len() != base.dim() {
            return Err(Error::DimensionMismatch(base.dim(), dir.len()));
        }
        let dir = normalized(&dir)
            .ok_or_else(|| Error::invalid("line direction must be a nonzero finite vector"))?;
        Ok(Self { base, dir })
    }

    /// The line through two distinct points.
    pub fn through(p: &Point<S>, q: &Point<S>) -> Result<Self> {
        p.check_dim(q.dim())?;
        Line::new(p.clone(), sub(q.coords(), p.coords()))
    }

    pub fn base(&self) -> &Point<S> {
        &self.base
    }

    pub fn dir(&self) -> &[S] {
        &self.dir
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Point at signed parameter `t` along the direction.
    pub fn at(&self, t: S) -> Point<S> {
        Point::from_raw(add_scaled(self.base.coords(), t, &self.dir))
    }

    /// Parameter of the orthogonal projection of `p`.
    pub fn project_param(&self, p: &Point<S>) -> Result<S> {
        p.check_dim(self.dim())?;
        Ok(dot(&sub(p.coords(), self.base.coords()), &self.dir))
    }

    pub fn distance_to(&self, p: &Point<S>) -> Result<S> {
        let foot = project_point_onto_line(p, self)?;
        distance(p, &foot)
    }

    /// Relative on-line test with tolerance `1e-12 * (1 + |p|)`.
    pub fn contains(&self, p: &Point<S>) -> Result<bool> {
        let tol = degeneracy_tol::<S>() * (S::one() + p.norm());
        Ok(self.distance_to(p)? <= tol)
    }
}

/// Orthogonal projection of `p` onto `line`; the returned point minimizes
/// the distance from `p` to the line and `p - result` is orthogonal to it.
pub fn project_point_onto_line<S: Scalar>(p: &Point<S>, line: &Line<S>) -> Result<Point<S>> {
    let t = line.project_param(p)?;
    Ok(line.at(t))
}

/// Intersection of two 2D lines, or `None` when `|sin(angle)| <= parallel_tol`
/// (which also covers identical lines).
pub fn intersect_lines_2d<S: Scalar>(
    l1: &Line<S>,
    l2: &Line<S>,
    parallel_tol: S,
) -> Result<Option<Point<S>>> {
    if l1.dim() != 2 || l2.dim() != 2 {
        return Err(Error::invalid("intersect_lines_2d requires 2-dimensional lines"));
    }
    let d1 = l1.dir();
    let d2 = l2.dir();
    // both directions are unit, so the cross product is sin of the angle
    let cross = d1[0] * d2[1] - d1[1] * d2[0];
    if cross.abs() <= parallel_tol {
        return Ok(None);
    }
    let delta = sub(l2.base().coords(), l1.base().coords());
    let t = (delta[0] * d2[1] - delta[1] * d2[0]) / cross;
    Ok(Some(l1.at(t)))
}

/// Reflection of a 2D point across a line: an involution fixing the line.
pub fn reflect_across_line_2d<S: Scalar>(p: &Point<S>, line: &Line<S>) -> Result<Point<S>> {
    if p.dim() != 2 || line.dim() != 2 {
        return Err(Error::invalid("reflect_across_line_2d requires dimension 2"));
    }
    let foot = project_point_onto_line(p, line)?;
    let two = real::<S>(2.0);
    Ok(Point::from_raw(
        foot.coords()
            .iter()
            .zip(p.coords())
            .map(|(&f, &x)| two * f - x)
            .collect(),
    ))
}

// ---------------------------------------------------------------------------
// Plane
// ---------------------------------------------------------------------------

/// A 2-plane of R^d given by an origin and an orthonormal in-plane basis.
#[derive(Clone, Debug)]
pub struct Plane<S> {
    origin: Point<S>,
    u: Vec<S>,
    v: Vec<S>,
}

impl<S: Scalar> Plane<S> {
    pub fn origin(&self) -> &Point<S> {
        &self.origin
    }

    pub fn u(&self) -> &[S] {
        &self.u
    }

    pub fn v(&self) -> &[S] {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.origin.dim()
    }

    /// In-plane coordinates of the orthogonal projection of `p` onto the plane.
    pub fn to_plane_coords(&self, p: &Point<S>) -> Result<(S, S)> {
        p.check_dim(self.dim())?;
        let rel = sub(p.coords(), self.origin.coords());
        Ok((dot(&rel, &self.u), dot(&rel, &self.v)))
    }

    /// The ambient point `origin + x*u + y*v`.
    pub fn from_plane_coords(&self, x: S, y: S) -> Point<S> {
        let mut c = add_scaled(self.origin.coords(), x, &self.u);
        c = add_scaled(&c, y, &self.v);
        Point::from_raw(c)
    }

    /// Orthogonal projection of an ambient point onto the plane, as an
    /// ambient point.
    pub fn project(&self, p: &Point<S>) -> Result<Point<S>> {
        let (x, y) = self.to_plane_coords(p)?;
        Ok(self.from_plane_coords(x, y))
    }
}

/// The unique plane containing `line` and an off-line point `p`. Its `u`
/// axis is the line direction and `v` is the unit component of `p - base`
/// orthogonal to it, so the line maps to the in-plane x-axis.
pub fn plane_through_line_and_point<S: Scalar>(line: &Line<S>, p: &Point<S>) -> Result<Plane<S>> {
    p.check_dim(line.dim())?;
    let rel = sub(p.coords(), line.base().coords());
    let along = dot(&rel, line.dir());
    let perp = add_scaled(&rel, -along, line.dir());
    let height = norm(&perp);
    let tol = degeneracy_tol::<S>() * (S::one() + p.norm());
    if height <= tol {
        return Err(Error::degenerate(
            "point lies on the line; the spanned plane is not unique",
        ));
    }
    let v = perp.iter().map(|&x| x / height).collect();
    Ok(Plane {
        origin: line.base().clone(),
        u: line.dir().to_vec(),
        v,
    })
}

/// Orthogonal projection of a line onto a plane, expressed in the plane's
/// 2D coordinates. Returns `None` when the projection degenerates to a
/// point (line orthogonal to the plane).
pub fn project_line_onto_plane<S: Scalar>(line: &Line<S>, plane: &Plane<S>) -> Result<Option<Line<S>>> {
    if line.dim() != plane.dim() {
        return Err(Error::DimensionMismatch(line.dim(), plane.dim()));
    }
    let (bx, by) = plane.to_plane_coords(line.base())?;
    let tip = line.at(S::one());
    let (tx, ty) = plane.to_plane_coords(&tip)?;
    let dx = tx - bx;
    let dy = ty - by;
    let len = (dx * dx + dy * dy).sqrt();
    let scale = S::one() + bx.abs().max(by.abs());
    if len <= degeneracy_tol::<S>() * scale {
        return Ok(None);
    }
    Ok(Some(Line::new(Point::xy(bx, by), vec![dx, dy])?))
}

// ---------------------------------------------------------------------------
// Direct similarity
// ---------------------------------------------------------------------------

/// An orientation-preserving similarity `p -> scale * R * p + t` of R^d:
/// `R` orthogonal with determinant +1, `scale > 0`. Scales every distance
/// by exactly `scale`.
#[derive(Clone, Debug)]
pub struct DirectSimilarity<S> {
    rotation: Vec<Vec<S>>, // row-major d x d
    translation: Vec<S>,
    scale: S,
}

impl<S: Scalar> DirectSimilarity<S> {
    pub fn new(rotation: Vec<Vec<S>>, translation: Vec<S>, scale: S) -> Result<Self> {
        let d = translation.len();
        if d < 2 || rotation.len() != d || rotation.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("rotation must be d x d with d >= 2"));
        }
        if !(scale > S::zero()) || !scale.is_finite() {
            return Err(Error::invalid("similarity scale must be positive and finite"));
        }
        let tol = real::<S>(1e-10);
        for i in 0..d {
            for j in i..d {
                let mut acc = S::zero();
                for k in 0..d {
                    acc = acc + rotation[k][i] * rotation[k][j];
                }
                let expect = if i == j { S::one() } else { S::zero() };
                if (acc - expect).abs() > tol {
                    return Err(Error::invalid("rotation matrix is not orthogonal"));
                }
            }
        }
        if (det(&rotation) - S::one()).abs() > tol {
            return Err(Error::invalid("rotation matrix must have determinant +1"));
        }
        Ok(Self {
            rotation,
            translation,
            scale,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut rotation = vec![vec![S::zero(); dim]; dim];
        for (i, row) in rotation.iter_mut().enumerate() {
            row[i] = S::one();
        }
        Self {
            rotation,
            translation: vec![S::zero(); dim],
            scale: S::one(),
        }
    }

    /// 2D similarity from a rotation angle, scale, and translation.
    pub fn rotation_2d(angle: S, scale: S, translation: [S; 2]) -> Result<Self> {
        let (sin, cos) = angle.sin_cos();
        DirectSimilarity::new(
            vec![vec![cos, -sin], vec![sin, cos]],
            translation.to_vec(),
            scale,
        )
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn scale(&self) -> S {
        self.scale
    }

    pub fn apply(&self, p: &Point<S>) -> Result<Point<S>> {
        p.check_dim(self.dim())?;
        let mut out = self.translation.clone();
        for (i, row) in self.rotation.iter().enumerate() {
            out[i] = out[i] + self.scale * dot(row, p.coords());
        }
        Ok(Point::from_raw(out))
    }

    /// Image of a line: maps the base and renormalizes the mapped direction.
    pub fn apply_line(&self, line: &Line<S>) -> Result<Line<S>> {
        let base = self.apply(line.base())?;
        let tip = self.apply(&line.at(S::one()))?;
        Line::through(&base, &tip)
    }

    /// `f^{-1}`: `p -> (1/scale) * R^T * (p - t)`.
    pub fn inverse(&self) -> Self {
        let d = self.dim();
        let mut rot = vec![vec![S::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                rot[i][j] = self.rotation[j][i];
            }
        }
        let inv_scale = S::one() / self.scale;
        let mut trans = vec![S::zero(); d];
        for i in 0..d {
            trans[i] = -inv_scale * dot(&rot[i], &self.translation);
        }
        Self {
            rotation: rot,
            translation: trans,
            scale: inv_scale,
        }
    }
}

/// Determinant by LU with partial pivoting; the matrices here are small.
fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    let d = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut sign = S::one();
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot][col] == S::zero() {
            return S::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            sign = -sign;
        }
        for row in col + 1..d {
            let factor = a[row][col] / a[col][col];
            for k in col..d {
                let sub = factor * a[col][k];
                a[row][k] = a[row][k] - sub;
            }
        }
    }
    (0..d).fold(sign, |acc, i| acc * a[i][i])
}

/// The unique direct similarity `g` with `g(p0) = (0, 1)` and `g(line)` the
/// x-axis. Requires 2D inputs and `p0` off the line.
pub fn canonical_similarity<S: Scalar>(p0: &Point<S>, line: &Line<S>) -> Result<DirectSimilarity<S>> {
    if p0.dim() != 2 || line.dim() != 2 {
        return Err(Error::invalid("canonical_similarity requires dimension 2"));
    }
    let foot = project_point_onto_line(p0, line)?;
    let height = distance(p0, &foot)?;
    let tol = degeneracy_tol::<S>() * (S::one() + p0.norm());
    if height <= tol {
        return Err(Error::degenerate("canonical_similarity requires p0 off the line"));
    }
    // Orthonormal frame at the foot: u along the line, w toward p0. The
    // rotation maps w to e2 and u to (sign, 0) with sign = cross(u, w),
    // which is the unique choice with determinant +1.
    let u = line.dir();
    let w: Vec<S> = sub(p0.coords(), foot.coords())
        .iter()
        .map(|&x| x / height)
        .collect();
    let sign = u[0] * w[1] - u[1] * w[0];
    // R = [[sign, 0], [0, 1]] * [u w]^T
    let rotation = vec![
        vec![sign * u[0], sign * u[1]],
        vec![w[0], w[1]],
    ];
    let scale = S::one() / height;
    // g(foot) must be the origin.
    let translation = vec![
        -scale * (rotation[0][0] * foot.coords()[0] + rotation[0][1] * foot.coords()[1]),
        -scale * (rotation[1][0] * foot.coords()[0] + rotation[1][1] * foot.coords()[1]),
    ];
    DirectSimilarity::new(rotation, translation, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<f64>;

    fn line2(bx: f64, by: f64, dx: f64, dy: f64) -> Line<f64> {
        Line::new(P::xy(bx, by), vec![dx, dy]).unwrap()
    }

    #[test]
    fn distance_basics() {
        let d = distance(&P::xy(0.0, 0.0), &P::xy(3.0, 4.0)).unwrap();
        assert_eq!(d, 5.0);
        assert_eq!(distance(&P::xy(1.0, 1.0), &P::xy(1.0, 1.0)).unwrap(), 0.0);
        // hypotenuse of the unit-width, 0.5535-high triangle
        let d = distance(&P::xy(0.0, 0.0), &P::xy(1.0, 0.5535)).unwrap();
        assert!((d - 1.142963).abs() <= 1e-6, "got {d}");
    }

    #[test]
    fn distance_dimension_mismatch() {
        let p = Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            distance(&p, &P::xy(1.0, 1.0)),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn point_validation() {
        assert!(Point::<f64>::new(vec![1.0]).is_err());
        assert!(Point::<f64>::new(vec![f64::NAN, 0.0]).is_err());
        assert!(Point::<f64>::new(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn projection_onto_axis() {
        let x_axis = line2(0.0, 0.0, 1.0, 0.0);
        let q = project_point_onto_line(&P::xy(1.0, 1.0), &x_axis).unwrap();
        assert_eq!(q, P::xy(1.0, 0.0));
        // idempotent for points already on the line
        let r = project_point_onto_line(&q, &x_axis).unwrap();
        assert_eq!(r, q);
    }

    #[test]
    fn projection_onto_diagonal() {
        let diag = line2(0.0, 0.0, 1.0, 1.0);
        let q = project_point_onto_line(&P::xy(1.0, 0.0), &diag).unwrap();
        assert!((q.coords()[0] - 0.5).abs() < 1e-15);
        assert!((q.coords()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn intersect_axes() {
        let x_axis = line2(0.0, 0.0, 1.0, 0.0);
        let y_axis = line2(0.0, 0.0, 0.0, 1.0);
        let s = intersect_lines_2d(&x_axis, &y_axis, parallel_tol()).unwrap().unwrap();
        assert!(distance(&s, &P::xy(0.0, 0.0)).unwrap() < 1e-12);
    }

    #[test]
    fn intersect_parallels() {
        let a = line2(0.0, 0.0, 1.0, 0.0);
        let b = line2(0.0, 1.0, 1.0, 0.0);
        assert!(intersect_lines_2d(&a, &b, parallel_tol()).unwrap().is_none());
        // identical lines are reported as parallel too
        assert!(intersect_lines_2d(&a, &a, parallel_tol()).unwrap().is_none());
    }

    #[test]
    fn intersect_lower_bound_lines_at_a3() {
        // the horizontal line y = c1 and the line through (0, c1+c2), (1, c1)
        let l1 = Line::through(&P::xy(0.0, 0.5535), &P::xy(1.0, 0.5535)).unwrap();
        let l2 = Line::through(&P::xy(0.0, 1.0500), &P::xy(1.0, 0.5535)).unwrap();
        let s = intersect_lines_2d(&l1, &l2, parallel_tol()).unwrap().unwrap();
        assert!(distance(&s, &P::xy(1.0, 0.5535)).unwrap() < 1e-9);
    }

    #[test]
    fn plane_through_x_axis_and_e3() {
        let x_axis = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let p = Point::<f64>::new(vec![0.0, 0.0, 1.0]).unwrap();
        let plane = plane_through_line_and_point(&x_axis, &p).unwrap();
        assert_eq!(plane.u(), &[1.0, 0.0, 0.0]);
        assert_eq!(plane.v(), &[0.0, 0.0, 1.0]);
        // the plane contains the line and the point
        let (x, y) = plane.to_plane_coords(&p).unwrap();
        assert!(distance(&plane.from_plane_coords(x, y), &p).unwrap() < 1e-12);
    }

    #[test]
    fn plane_coplanar_case() {
        let x_axis = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let p = Point::<f64>::new(vec![2.0, 3.0, 0.0]).unwrap();
        let plane = plane_through_line_and_point(&x_axis, &p).unwrap();
        // the xy-plane: v is +-e2
        assert!(plane.v()[2].abs() < 1e-15);
        assert!((plane.v()[1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plane_gram_schmidt() {
        let diag = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 1.0, 0.0],
        )
        .unwrap();
        let p = Point::<f64>::new(vec![0.0, 0.0, 5.0]).unwrap();
        let plane = plane_through_line_and_point(&diag, &p).unwrap();
        let inv = 1.0 / 2.0_f64.sqrt();
        assert!((plane.u()[0] - inv).abs() < 1e-15);
        assert!((plane.u()[1] - inv).abs() < 1e-15);
        assert_eq!(plane.v(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn plane_rejects_point_on_line() {
        let x_axis = line2(0.0, 0.0, 1.0, 0.0);
        assert!(matches!(
            plane_through_line_and_point(&x_axis, &P::xy(3.0, 0.0)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn project_line_in_plane_is_identity() {
        let x_axis = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let p = Point::<f64>::new(vec![0.0, 0.0, 1.0]).unwrap();
        let plane = plane_through_line_and_point(&x_axis, &p).unwrap();
        let img = project_line_onto_plane(&x_axis, &plane).unwrap().unwrap();
        // in plane coords the x-axis is the horizontal axis through the origin
        assert!(img.base().coords()[1].abs() < 1e-12);
        assert!(img.dir()[1].abs() < 1e-12);
    }

    #[test]
    fn project_perpendicular_line_degenerates() {
        let z_axis = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![0.0, 0.0, 1.0],
        )
        .unwrap();
        let x_axis = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let plane = plane_through_line_and_point(
            &x_axis,
            &Point::<f64>::new(vec![0.0, 1.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert!(project_line_onto_plane(&z_axis, &plane).unwrap().is_none());
    }

    #[test]
    fn project_slanted_line() {
        // {(t, 0, t)} projected onto the xy-plane is the x-axis
        let slanted = Line::new(
            Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 1.0],
        )
        .unwrap();
        let plane = plane_through_line_and_point(
            &Line::new(
                Point::<f64>::new(vec![0.0, 0.0, 0.0]).unwrap(),
                vec![1.0, 0.0, 0.0],
            )
            .unwrap(),
            &Point::<f64>::new(vec![0.0, 1.0, 0.0]).unwrap(),
        )
        .unwrap();
        let img = project_line_onto_plane(&slanted, &plane).unwrap().unwrap();
        assert!(img.base().coords()[1].abs() < 1e-12);
        assert!(img.dir()[1].abs() < 1e-12);
    }

    #[test]
    fn similarity_identity_and_scaling() {
        let id = DirectSimilarity::<f64>::identity(2);
        let p = P::xy(1.5, -2.0);
        assert_eq!(id.apply(&p).unwrap(), p);

        let double = DirectSimilarity::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.0, 0.0],
            2.0,
        )
        .unwrap();
        assert_eq!(double.apply(&P::xy(1.0, 1.0)).unwrap(), P::xy(2.0, 2.0));
    }

    #[test]
    fn similarity_quarter_turn() {
        let rot = DirectSimilarity::rotation_2d(std::f64::consts::FRAC_PI_2, 1.0, [0.0, 0.0]).unwrap();
        let q = rot.apply(&P::xy(1.0, 0.0)).unwrap();
        assert!(distance(&q, &P::xy(0.0, 1.0)).unwrap() < 1e-15);
    }

    #[test]
    fn similarity_rejects_reflections() {
        // orthogonal but determinant -1
        let refl = DirectSimilarity::new(
            vec![vec![1.0, 0.0], vec![0.0, -1.0]],
            vec![0.0, 0.0],
            1.0,
        );
        assert!(refl.is_err());
    }

    #[test]
    fn similarity_inverse_roundtrip() {
        let f = DirectSimilarity::rotation_2d(0.7, 3.5, [1.0, -2.0]).unwrap();
        let g = f.inverse();
        let p = P::xy(0.3, 0.9);
        let back = g.apply(&f.apply(&p).unwrap()).unwrap();
        assert!(distance(&back, &p).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_similarity_already_canonical() {
        let x_axis = line2(0.0, 0.0, 1.0, 0.0);
        let g = canonical_similarity(&P::xy(0.0, 1.0), &x_axis).unwrap();
        let p = P::xy(0.4, -0.7);
        assert!(distance(&g.apply(&p).unwrap(), &p).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_similarity_pure_scaling() {
        let x_axis = line2(0.0, 0.0, 1.0, 0.0);
        let g = canonical_similarity(&P::xy(0.0, 2.0), &x_axis).unwrap();
        assert!((g.scale() - 0.5).abs() < 1e-15);
        assert!(distance(&g.apply(&P::xy(0.0, 2.0)).unwrap(), &P::xy(0.0, 1.0)).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_similarity_half_turn() {
        // p0 below the line y=1: the canonical map is a half turn
        let l = line2(0.0, 1.0, 1.0, 0.0);
        let g = canonical_similarity(&P::xy(0.0, 0.0), &l).unwrap();
        assert!((g.scale() - 1.0).abs() < 1e-15);
        assert!(distance(&g.apply(&P::xy(0.0, 0.0)).unwrap(), &P::xy(0.0, 1.0)).unwrap() < 1e-12);
        // the line maps onto the x-axis
        for t in [-1.0, 0.0, 2.5] {
            let img = g.apply(&l.at(t)).unwrap();
            assert!(img.coords()[1].abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_similarity_rejects_point_on_line() {
        let x_axis = line2(0.0, 0.0, 1.0, 0.0);
        assert!(canonical_similarity(&P::xy(2.0, 0.0), &x_axis).is_err());
    }

    #[test]
    fn reflection_basics() {
        let y_axis = line2(0.0, 0.0, 0.0, 1.0);
        assert!(
            distance(
                &reflect_across_line_2d(&P::xy(1.0, 0.0), &y_axis).unwrap(),
                &P::xy(-1.0, 0.0)
            )
            .unwrap()
                < 1e-15
        );
        // fixed points
        let q = reflect_across_line_2d(&P::xy(0.0, 3.0), &y_axis).unwrap();
        assert!(distance(&q, &P::xy(0.0, 3.0)).unwrap() < 1e-15);
        // swap across the diagonal
        let diag = line2(0.0, 0.0, 1.0, 1.0);
        let q = reflect_across_line_2d(&P::xy(2.0, 1.0), &diag).unwrap();
        assert!(distance(&q, &P::xy(1.0, 2.0)).unwrap() < 1e-12);
    }
}
