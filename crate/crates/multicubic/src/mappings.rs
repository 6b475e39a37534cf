//! Evaluable mapping models V^n -> W: exact polynomial models, the
//! norm-cube counterexample, seeded bounded perturbations, and the scaled
//! wrappers used by the contraction operator.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Norm, Point};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct PolyTerm {
    pub degrees: Vec<u32>,
    pub coeff: Vec<Rat>,
}

/// f(x) = Sum_terms coeff * Prod_j x_j^degrees[j], coefficients exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialModel {
    pub n: usize,
    pub m: usize,
    pub max_degree_per_variable: u32,
    pub default_mode: Mode,
    pub terms: Vec<PolyTerm>,
}

impl PolynomialModel {
    pub fn new(n: usize, m: usize, max_degree: u32, terms: Vec<PolyTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.degrees.len() != n {
                return Err(Error::parse(
                    format!("terms[{i}].degrees"),
                    format!("length {} does not match n = {n}", t.degrees.len()),
                ));
            }
            if t.coeff.len() != m {
                return Err(Error::parse(
                    format!("terms[{i}].coeff"),
                    format!("length {} does not match m = {m}", t.coeff.len()),
                ));
            }
            if let Some(d) = t.degrees.iter().find(|d| **d > max_degree) {
                return Err(Error::parse(
                    format!("terms[{i}].degrees"),
                    format!("degree {d} exceeds cap {max_degree}"),
                ));
            }
        }
        Ok(PolynomialModel {
            n,
            m,
            max_degree_per_variable: max_degree,
            default_mode: Mode::Exact,
            terms,
        })
    }

    /// True when every term is degree 3 in every variable.
    pub fn is_pure_multicubic(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.coeff.iter().all(Scalar::is_zero) || t.degrees.iter().all(|d| *d == 3))
    }

    fn eval<S: Scalar>(&self, x: &Point<S>) -> Result<Vec<S>> {
        if x.arity() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.arity(),
            });
        }
        let coords = x.flat()?;
        let mut out = vec![S::zero(); self.m];
        for t in &self.terms {
            let mut mono = S::one();
            for (c, d) in coords.iter().zip(&t.degrees) {
                if *d > 0 {
                    mono = mono.mul(&c.pow_u(*d));
                }
            }
            for (o, c) in out.iter_mut().zip(&t.coeff) {
                *o = o.add(&S::from_rat(c).mul(&mono));
            }
        }
        Ok(out)
    }
}

/// h(a) = ||a||^3 * a0 on an m-dimensional coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct NormCubeMapping {
    pub dim: usize,
    pub anchor: Vec<Rat>,
    pub norm: Norm,
}

impl NormCubeMapping {
    fn eval<S: Scalar>(&self, x: &Point<S>) -> Result<Vec<S>> {
        if x.arity() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: x.arity(),
            });
        }
        if x.blocks[0].len() != self.dim {
            return Err(Error::domain(format!(
                "norm-cube expects a {}-dimensional argument",
                self.dim
            )));
        }
        let r = x.block_norm(0, self.norm)?;
        let cube = r.pow_u(3);
        Ok(self
            .anchor
            .iter()
            .map(|a| S::from_rat(a).mul(&cube))
            .collect())
    }
}

/// Seed-driven bounded perturbation: delta * u(x) * Sum_j ||x_j||^alpha
/// per codomain component, with u in [-1, 1] and no coherence under scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerNoise {
    pub delta: Rat,
    pub alpha: Rat,
    pub seed: u64,
}

const NOISE_RESOLUTION: i64 = 1_000_000;

impl PowerNoise {
    /// Deterministic unit value in [-1, 1] for one codomain component.
    fn unit<S: Scalar>(&self, component: usize, x: &Point<S>) -> Rat {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.seed.hash(&mut h);
        component.hash(&mut h);
        for k in x.key() {
            k.hash(&mut h);
        }
        let v = (h.finish() % (2 * NOISE_RESOLUTION as u64 + 1)) as i64 - NOISE_RESOLUTION;
        crate::rat::rat_frac(v, NOISE_RESOLUTION)
    }

    fn magnitude<S: Scalar>(&self, x: &Point<S>) -> Result<S> {
        let mut sum = S::zero();
        for j in 0..x.arity() {
            let r = x.block_norm(j, Norm::Euclidean)?;
            sum = sum.add(&r.pow_rat(&self.alpha)?);
        }
        Ok(sum.mul(&S::from_rat(&self.delta)))
    }
}

/// An evaluable mapping model.
#[derive(Debug, Clone, PartialEq)]
pub enum Mapping {
    Polynomial(PolynomialModel),
    NormCube(NormCubeMapping),
    Perturbed {
        base: Box<Mapping>,
        noise: PowerNoise,
    },
    /// 2^value_log2 * base(2^arg_log2 * x); the contraction operator's shape.
    Scaled {
        base: Box<Mapping>,
        value_log2: i64,
        arg_log2: i64,
    },
}

impl Mapping {
    pub fn arity(&self) -> usize {
        match self {
            Mapping::Polynomial(p) => p.n,
            Mapping::NormCube(_) => 1,
            Mapping::Perturbed { base, .. } | Mapping::Scaled { base, .. } => base.arity(),
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match self {
            Mapping::Polynomial(p) => p.m,
            Mapping::NormCube(h) => h.dim,
            Mapping::Perturbed { base, .. } | Mapping::Scaled { base, .. } => base.codomain_dim(),
        }
    }

    /// The unperturbed, unscaled model underneath.
    pub fn core(&self) -> &Mapping {
        match self {
            Mapping::Perturbed { base, .. } | Mapping::Scaled { base, .. } => base.core(),
            other => other,
        }
    }

    pub fn eval<S: Scalar>(&self, x: &Point<S>) -> Result<Vec<S>> {
        match self {
            Mapping::Polynomial(p) => p.eval(x),
            Mapping::NormCube(h) => h.eval(x),
            Mapping::Perturbed { base, noise } => {
                let mut v = base.eval(x)?;
                let mag = noise.magnitude(x)?;
                for (k, o) in v.iter_mut().enumerate() {
                    let u = S::from_rat(&noise.unit(k, x));
                    *o = o.add(&u.mul(&mag));
                }
                Ok(v)
            }
            Mapping::Scaled {
                base,
                value_log2,
                arg_log2,
            } => {
                let v = base.eval(&x.scale_pow2(*arg_log2))?;
                Ok(v.into_iter().map(|c| c.scale_pow2(*value_log2)).collect())
            }
        }
    }
}

/// f(x) = c * Prod_j x_j^3.
pub fn make_multicubic_monomial(n: usize, c: Vec<Rat>) -> Result<Mapping> {
    if n == 0 || c.is_empty() {
        return Err(Error::domain("arity and codomain dimension must be positive"));
    }
    let m = c.len();
    Ok(Mapping::Polynomial(PolynomialModel::new(
        n,
        m,
        3,
        vec![PolyTerm {
            degrees: vec![3; n],
            coeff: c,
        }],
    )?))
}

pub fn make_norm_cube(dim: usize, anchor: Vec<Rat>, norm: Norm) -> Result<Mapping> {
    if dim == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    if anchor.len() != dim {
        return Err(Error::domain("anchor length must match the dimension"));
    }
    Ok(Mapping::NormCube(NormCubeMapping { dim, anchor, norm }))
}

pub fn add_power_noise(base: Mapping, delta: Rat, alpha: Rat, seed: u64) -> Result<Mapping> {
    if delta < Rat::from_integer(0.into()) {
        return Err(Error::domain("noise amplitude must be non-negative"));
    }
    Ok(Mapping::Perturbed {
        base: Box::new(base),
        noise: PowerNoise { delta, alpha, seed },
    })
}

// ---------------------------------------------------------------------------
// model file schema

#[derive(Serialize, Deserialize)]
struct ModelFile {
    n: usize,
    m: usize,
    mode: String,
    #[serde(rename = "maxDegreePerVariable", default = "default_degree_cap")]
    max_degree_per_variable: u32,
    terms: Vec<ModelFileTerm>,
}

#[derive(Serialize, Deserialize)]
struct ModelFileTerm {
    degrees: Vec<u32>,
    coeff: Vec<String>,
}

fn default_degree_cap() -> u32 {
    3
}

pub fn save_model(model: &Mapping, path: &Path) -> Result<()> {
    let p = match model {
        Mapping::Polynomial(p) => p,
        _ => return Err(Error::domain("only polynomial models have a file form")),
    };
    let file = ModelFile {
        n: p.n,
        m: p.m,
        mode: p.default_mode.as_str().to_string(),
        max_degree_per_variable: p.max_degree_per_variable,
        terms: p
            .terms
            .iter()
            .map(|t| ModelFileTerm {
                degrees: t.degrees.clone(),
                coeff: t.coeff.iter().map(format_rat).collect(),
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<Mapping> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    let mode = Mode::parse(&file.mode)?;
    let terms = file
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let coeff = t
                .coeff
                .iter()
                .map(|c| parse_rat(c, &format!("terms[{i}].coeff")))
                .collect::<Result<Vec<_>>>()?;
            Ok(PolyTerm {
                degrees: t.degrees.clone(),
                coeff,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut model = PolynomialModel::new(file.n, file.m, file.max_degree_per_variable, terms)?;
    model.default_mode = mode;
    Ok(Mapping::Polynomial(model))
}

/// Memoizes evaluations of one mapping; grid sweeps revisit the same
/// instantiated arguments many times.
pub struct CachedEval<'a, S: Scalar> {
    mapping: &'a Mapping,
    cache: RefCell<HashMap<Vec<S::Key>, Vec<S>>>,
}

impl<'a, S: Scalar> CachedEval<'a, S> {
    pub fn new(mapping: &'a Mapping) -> Self {
        CachedEval {
            mapping,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn mapping(&self) -> &'a Mapping {
        self.mapping
    }

    pub fn eval(&self, x: &Point<S>) -> Result<Vec<S>> {
        let key = x.key();
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.mapping.eval(x)?;
        self.cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }
}
