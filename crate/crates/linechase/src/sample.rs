//! Seeded random generators for instances, directions, rotations, and
//! direct similarities. All sampling happens in `f64` and is converted to
//! the working scalar, so a fixed seed yields the same configuration for
//! every scalar type.

use rand::Rng;

use crate::chase::Instance;
use crate::geometry::{DirectSimilarity, Line, Point};
use crate::scalar::{real, Scalar};

/// A unit vector with direction uniform on the sphere.
pub fn random_unit_vector<S: Scalar>(dim: usize, rng: &mut impl Rng) -> Vec<S> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.iter().map(|&x| real(x / n)).collect();
        }
    }
}

/// A point uniform in the centered cube of the given half-width.
pub fn random_point<S: Scalar>(dim: usize, half_width: f64, rng: &mut impl Rng) -> Point<S> {
    Point::new(
        (0..dim)
            .map(|_| real(rng.random_range(-half_width..half_width)))
            .collect(),
    )
    .expect("sampled coordinates are finite")
}

pub fn random_line<S: Scalar>(dim: usize, half_width: f64, rng: &mut impl Rng) -> Line<S> {
    Line::new(
        random_point(dim, half_width, rng),
        random_unit_vector(dim, rng),
    )
    .expect("sampled directions are unit vectors")
}

/// A random instance: start and line bases uniform in the cube, directions
/// uniform, no initial line.
pub fn random_instance<S: Scalar>(
    dim: usize,
    requests: usize,
    half_width: f64,
    rng: &mut impl Rng,
) -> Instance<S> {
    let start = random_point(dim, half_width, rng);
    let lines = (0..requests)
        .map(|_| random_line(dim, half_width, rng))
        .collect();
    Instance::new(start, None, lines).expect("sampled instances are valid")
}

/// A rotation uniform w.r.t. Haar measure up to the determinant fix:
/// Gram-Schmidt on a Gaussian matrix, then a column flip if needed to land
/// in the orientation-preserving component.
pub fn random_rotation<S: Scalar>(dim: usize, rng: &mut impl Rng) -> Vec<Vec<S>> {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let mut v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
            for c in &cols {
                let along: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= along * ci;
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-9 {
                ok = false;
                break;
            }
            for vi in v.iter_mut() {
                *vi /= n;
            }
            cols.push(v);
        }
        if !ok {
            continue;
        }
        if det_sign(&cols) < 0.0 {
            for row in cols[0].iter_mut() {
                *row = -*row;
            }
        }
        // columns to row-major matrix
        let mut rows = vec![vec![S::zero(); dim]; dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                rows[i][j] = real(v);
            }
        }
        return rows;
    }
}

/// A direct similarity with a random rotation, translation in the cube of
/// half-width 10, and scale log-uniform in `[scale_lo, scale_hi]`.
pub fn random_similarity<S: Scalar>(
    dim: usize,
    scale_lo: f64,
    scale_hi: f64,
    rng: &mut impl Rng,
) -> DirectSimilarity<S> {
    let rotation = random_rotation(dim, rng);
    let translation = (0..dim)
        .map(|_| real(rng.random_range(-10.0..10.0)))
        .collect();
    let scale = real(log_uniform(scale_lo, scale_hi, rng));
    DirectSimilarity::new(rotation, translation, scale).expect("sampled similarity is valid")
}

pub fn log_uniform(lo: f64, hi: f64, rng: &mut impl Rng) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// Standard normal via Box-Muller.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}

fn det_sign(cols: &[Vec<f64>]) -> f64 {
    let d = cols.len();
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| cols[j][i]).collect())
        .collect();
    let mut sign = 1.0;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            sign = -sign;
        }
        for row in col + 1..d {
            let factor = a[row][col] / a[col][col];
            for k in col..d {
                a[row][k] -= factor * a[col][k];
            }
        }
        if a[col][col] < 0.0 {
            sign = -sign;
        }
    }
    sign
}
