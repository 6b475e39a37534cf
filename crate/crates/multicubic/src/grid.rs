//! Deterministic evaluation grids: integer cross products plus seeded
//! random rational points.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::rat::{rat_frac, Rat};
use crate::scalar::Scalar;

/// Cap on the number of exhaustive integer sample pairs; above it the
/// integer pairs are thinned deterministically.
const MAX_CROSS_PAIRS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Inclusive integer range for the cross grid; None disables it.
    pub int_range: Option<(i64, i64)>,
    /// Number of seeded random rational points/pairs to add.
    pub random_count: usize,
    pub seed: u64,
    /// Numerators are drawn from [-max_numer, max_numer], denominators
    /// from [1, max_denom].
    pub max_numer: i64,
    pub max_denom: i64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            int_range: Some((-3, 3)),
            random_count: 200,
            seed: 42,
            max_numer: 17,
            max_denom: 17,
        }
    }
}

impl GridSpec {
    pub fn integers_only(lo: i64, hi: i64) -> Self {
        GridSpec {
            int_range: Some((lo, hi)),
            random_count: 0,
            ..GridSpec::default()
        }
    }

    pub fn random_only(count: usize, seed: u64) -> Self {
        GridSpec {
            int_range: None,
            random_count: count,
            seed,
            ..GridSpec::default()
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn random_rat(&self, rng: &mut ChaCha8Rng) -> Rat {
        let num = rng.gen_range(-self.max_numer..=self.max_numer);
        let den = rng.gen_range(1..=self.max_denom);
        rat_frac(num, den)
    }

    fn integer_points<S: Scalar>(&self, n: usize) -> Vec<Point<S>> {
        let Some((lo, hi)) = self.int_range else {
            return Vec::new();
        };
        let values: Vec<i64> = (lo..=hi).collect();
        let mut pts = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(pts.len() * values.len());
            for p in &pts {
                for &v in &values {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts.iter().map(|p| Point::from_ints(p)).collect()
    }

    fn random_point<S: Scalar>(&self, n: usize, rng: &mut ChaCha8Rng) -> Point<S> {
        Point::scalar_coords((0..n).map(|_| S::from_rat(&self.random_rat(rng))).collect())
    }

    /// Evaluation points: the integer cross grid followed by the seeded
    /// random rational points.
    pub fn points<S: Scalar>(&self, n: usize) -> Result<Vec<Point<S>>> {
        if n == 0 {
            return Err(Error::domain("arity must be positive"));
        }
        let mut pts = self.integer_points(n);
        let mut rng = self.rng();
        for _ in 0..self.random_count {
            pts.push(self.random_point(n, &mut rng));
        }
        Ok(pts)
    }

    /// Sample pairs (x1, x2). The integer part is the full cross product of
    /// grid points against themselves, thinned deterministically when it
    /// would exceed the pair cap.
    pub fn sample_pairs<S: Scalar>(&self, n: usize) -> Result<Vec<(Point<S>, Point<S>)>> {
        if n == 0 {
            return Err(Error::domain("arity must be positive"));
        }
        let ipts = self.integer_points::<S>(n);
        let mut pairs = Vec::new();
        if !ipts.is_empty() {
            if ipts.len() * ipts.len() <= MAX_CROSS_PAIRS {
                for a in &ipts {
                    for b in &ipts {
                        pairs.push((a.clone(), b.clone()));
                    }
                }
            } else {
                // fixed set of rotations instead of the full cross product
                let rotations = MAX_CROSS_PAIRS / ipts.len().max(1);
                for r in 0..rotations.max(1) {
                    let shift = r * 7 + 3;
                    for (i, a) in ipts.iter().enumerate() {
                        let b = &ipts[(i + shift) % ipts.len()];
                        pairs.push((a.clone(), b.clone()));
                    }
                }
            }
        }
        let mut rng = self.rng();
        for _ in 0..self.random_count {
            let a = self.random_point(n, &mut rng);
            let b = self.random_point(n, &mut rng);
            pairs.push((a, b));
        }
        Ok(pairs)
    }

    /// Evenly spaced float points on [lo, hi], one coordinate repeated n times.
    pub fn line_points(n: usize, lo: f64, hi: f64, count: usize) -> Vec<Point<f64>> {
        (0..count)
            .map(|i| {
                let t = if count > 1 {
                    i as f64 / (count - 1) as f64
                } else {
                    0.5
                };
                let v = lo + t * (hi - lo);
                Point::scalar_coords(vec![v; n])
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_sizes() {
        let g = GridSpec::default();
        let pts = g.points::<Rat>(1).unwrap();
        assert_eq!(pts.len(), 7 + 200);
        let pairs = g.sample_pairs::<Rat>(2).unwrap();
        assert_eq!(pairs.len(), 49 * 49 + 200);
    }

    #[test]
    fn grids_are_reproducible() {
        let g = GridSpec::default();
        assert_eq!(g.points::<Rat>(2).unwrap(), g.points::<Rat>(2).unwrap());
        assert_eq!(
            g.sample_pairs::<Rat>(1).unwrap(),
            g.sample_pairs::<Rat>(1).unwrap()
        );
    }

    #[test]
    fn large_arity_pairs_stay_bounded() {
        let g = GridSpec::integers_only(-3, 3);
        let pairs = g.sample_pairs::<f64>(3).unwrap();
        assert!(pairs.len() <= 10_000);
        assert!(!pairs.is_empty());
    }

    #[test]
    fn random_rationals_respect_bounds() {
        let g = GridSpec::random_only(50, 9);
        for p in g.points::<Rat>(2).unwrap() {
            for b in &p.blocks {
                let r = &b[0];
                assert!(r.denom() <= &num_bigint::BigInt::from(17));
                assert!(num_traits::Signed::abs(r.numer()) <= num_bigint::BigInt::from(17));
            }
        }
    }
}
