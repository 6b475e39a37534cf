//! Points of the domain V^n.
//!
//! Each of the n coordinates is a block of scalars: polynomial models use
//! one-dimensional blocks, while the norm-cube counterexample lives on a
//! single multi-dimensional coordinate.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Norm used on domain coordinate blocks (and on the norm-cube ambient space).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Euclidean,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    pub blocks: Vec<Vec<S>>,
}

impl<S: Scalar> Point<S> {
    pub fn new(blocks: Vec<Vec<S>>) -> Self {
        Point { blocks }
    }

    /// Point with one-dimensional coordinate blocks.
    pub fn scalar_coords(coords: Vec<S>) -> Self {
        Point {
            blocks: coords.into_iter().map(|c| vec![c]).collect(),
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::scalar_coords(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn arity(&self) -> usize {
        self.blocks.len()
    }

    pub fn zero_like(&self) -> Self {
        Point {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|_| S::zero()).collect())
                .collect(),
        }
    }

    /// Requires every block to be one-dimensional and returns the flat coordinates.
    pub fn flat(&self) -> Result<Vec<&S>> {
        self.blocks
            .iter()
            .map(|b| {
                if b.len() == 1 {
                    Ok(&b[0])
                } else {
                    Err(Error::domain("expected scalar coordinates"))
                }
            })
            .collect()
    }

    pub fn scale_pow2(&self, e: i64) -> Self {
        Point {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|c| c.scale_pow2(e)).collect())
                .collect(),
        }
    }

    /// ca*self + cb*other, componentwise.
    pub fn lin2(&self, ca: i64, other: &Point<S>, cb: i64) -> Result<Point<S>> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: other.arity(),
            });
        }
        let fa = S::from_int(ca);
        let fb = S::from_int(cb);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                if a.len() != b.len() {
                    return Err(Error::domain("coordinate block dimensions differ"));
                }
                Ok(a.iter()
                    .zip(b)
                    .map(|(x, y)| fa.mul(x).add(&fb.mul(y)))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point { blocks })
    }

    /// Norm of one coordinate block; one-dimensional blocks reduce to |x|.
    pub fn block_norm(&self, j: usize, norm: Norm) -> Result<S> {
        let b = &self.blocks[j];
        block_norm(b, norm)
    }

    pub fn key(&self) -> Vec<S::Key> {
        self.blocks.iter().flatten().map(|c| c.key()).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.blocks
                .iter()
                .map(|b| {
                    if b.len() == 1 {
                        b[0].to_json()
                    } else {
                        Value::Array(b.iter().map(|c| c.to_json()).collect())
                    }
                })
                .collect(),
        )
    }
}

pub fn block_norm<S: Scalar>(b: &[S], norm: Norm) -> Result<S> {
    if b.len() == 1 {
        return Ok(b[0].abs());
    }
    match norm {
        Norm::Max => Ok(vec_max_norm(b)),
        Norm::Euclidean => {
            let mut acc = S::zero();
            for c in b {
                acc = acc.add(&c.mul(c));
            }
            acc.sqrt()
        }
    }
}

/// Max-norm over codomain components (the fixed norm on W).
pub fn vec_max_norm<S: Scalar>(v: &[S]) -> S {
    let mut best = S::zero();
    for c in v {
        let a = c.abs();
        if a > best {
            best = a;
        }
    }
    best
}

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale<S: Scalar>(a: &[S], f: &S) -> Vec<S> {
    a.iter().map(|x| x.mul(f)).collect()
}
