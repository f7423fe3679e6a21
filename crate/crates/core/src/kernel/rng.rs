//! Hierarchical, reproducible random streams.
//!
//! An [`RngStream`] is an immutable token `(seed, path)`. Every consumer that
//! needs randomness either materializes a generator from the token with
//! [`RngStream::rng`] or derives a child token with [`RngStream::derive`].
//! Because child tokens depend only on `(seed, path, index)`, results are
//! identical regardless of how work is scheduled across threads.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Concrete generator handed out by [`RngStream::rng`].
pub type StreamRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    path: Vec<u64>,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            path: Vec::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Child stream for `index`. Distinct indices give unrelated streams.
    pub fn derive(&self, index: u64) -> Self {
        let mut path = self.path.clone();
        path.push(index);
        Self {
            seed: self.seed,
            path,
        }
    }

    fn key(&self) -> [u8; 32] {
        let mut state = splitmix64(self.seed);
        for (depth, &p) in self.path.iter().enumerate() {
            state = splitmix64(state ^ splitmix64(p ^ ((depth as u64 + 1) << 56)));
        }
        let mut key = [0u8; 32];
        let mut s = state;
        for chunk in key.chunks_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        key
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        ChaCha8Rng::from_seed(self.key())
    }
}

pub fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(d, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Uniform point on `S^{d-1}` by normalizing a standard Gaussian vector.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    assert!(d >= 1, "dimension must be positive");
    let mut v = DVector::zeros(d);
    fill_unit_vector(&mut v, rng);
    v
}

/// Overwrites `v` with a uniform unit vector; same draws as
/// [`random_unit_vector`] without allocating.
pub fn fill_unit_vector<R: Rng + ?Sized>(v: &mut DVector<f64>, rng: &mut R) {
    loop {
        v.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-300 {
            *v /= n;
            return;
        }
    }
}

/// Uniform point in the Euclidean ball of the given radius.
pub fn random_in_ball<R: Rng + ?Sized>(d: usize, radius: f64, rng: &mut R) -> DVector<f64> {
    let u: f64 = rng.random();
    random_unit_vector(d, rng) * (radius * u.powf(1.0 / d as f64))
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = gaussian_matrix(d, d, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_token_same_draws() {
        let s = RngStream::new(42).derive(3).derive(9);
        let a = random_unit_vector(5, &mut s.rng());
        let b = random_unit_vector(5, &mut s.clone().rng());
        assert_eq!(a, b);
    }

    #[test]
    fn children_differ() {
        let s = RngStream::new(7);
        let a: u64 = s.derive(0).rng().random();
        let b: u64 = s.derive(1).rng().random();
        assert_ne!(a, b);
    }

    #[test]
    fn hundred_children_no_first_draw_collisions() {
        let s = RngStream::new(2024);
        let mut firsts: Vec<u64> = (0..100).map(|i| s.derive(i).rng().random()).collect();
        firsts.sort_unstable();
        firsts.dedup();
        assert_eq!(firsts.len(), 100);
    }

    #[test]
    fn path_order_matters() {
        let s = RngStream::new(1);
        let a: u64 = s.derive(1).derive(2).rng().random();
        let b: u64 = s.derive(2).derive(1).rng().random();
        assert_ne!(a, b);
    }

    #[test]
    fn unit_vector_in_dimension_one_is_sign() {
        let mut rng = RngStream::new(5).rng();
        for _ in 0..50 {
            let v = random_unit_vector(1, &mut rng);
            assert!((v[0].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_vector_norm_and_mean() {
        // 1e5 draws in R^3: each coordinate mean within 4 sigma, sigma = 1/sqrt(3e5).
        let mut rng = RngStream::new(11).rng();
        let n = 100_000;
        let mut mean = DVector::zeros(3);
        let mut cov = DMatrix::zeros(3, 3);
        for _ in 0..n {
            let v = random_unit_vector(3, &mut rng);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            cov += &v * v.transpose();
            mean += v;
        }
        mean /= n as f64;
        cov /= n as f64;
        let sigma = 1.0 / (3.0 * n as f64).sqrt();
        for i in 0..3 {
            assert!(mean[i].abs() < 4.0 * sigma, "coordinate {i} mean {}", mean[i]);
        }
        // Covariance of a uniform unit vector is I/d. Standard error of x_i^2 mean:
        // Var(x_i^2) = E x^4 - (1/3)^2 = 3/15 - 1/9 = 4/45 for d = 3.
        let se_diag = (4.0 / 45.0 / n as f64).sqrt();
        // Var(x_i x_j) = E x_i^2 x_j^2 = 1/15.
        let se_off = (1.0 / 15.0 / n as f64).sqrt();
        for i in 0..3 {
            for j in 0..3 {
                let (target, se) = if i == j { (1.0 / 3.0, se_diag) } else { (0.0, se_off) };
                assert!((cov[(i, j)] - target).abs() < 5.0 * se, "cov[{i},{j}] = {}", cov[(i, j)]);
            }
        }
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let q = random_orthogonal(6, &mut RngStream::new(3).rng());
        let e = &q.transpose() * &q - DMatrix::identity(6, 6);
        assert!(e.amax() < 1e-12);
    }

    #[test]
    fn ball_points_inside() {
        let mut rng = RngStream::new(8).rng();
        for _ in 0..1000 {
            assert!(random_in_ball(4, 2.5, &mut rng).norm() <= 2.5 + 1e-12);
        }
    }
}
