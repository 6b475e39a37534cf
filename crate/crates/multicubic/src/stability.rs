//! Contraction fixed-point machinery: the generic iteration engine, the
//! multi-cubic stabilizer with its series and closed-form error bounds,
//! the decay invariant, and the hyperstability checker.

use num_traits::Signed;

use crate::equation::{classify, diff_operator, Sample, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::mappings::Mapping;
use crate::point::{vec_max_norm, vec_sub, Norm, Point};
use crate::rat::{format_rat, rat_int, Rat};
use crate::scalar::Scalar;

fn pow2_s<S: Scalar>(e: i64) -> S {
    S::one().scale_pow2(e)
}

/// The stability control phi(x1, x2).
#[derive(Debug, Clone, PartialEq)]
pub enum ControlFunction {
    /// delta * Sum_{i,j} ||x_ij||^alpha
    Power { delta: Rat, alpha: Rat },
    /// delta * Prod_{i,j} ||x_ij||^{p[i][j]}, all exponents positive
    Product { delta: Rat, exponents: [Vec<Rat>; 2] },
    /// Table lookup on exact sample matches.
    Empirical { entries: Vec<EmpiricalEntry> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalEntry {
    pub x1: Point<Rat>,
    pub x2: Point<Rat>,
    pub value: Rat,
}

impl ControlFunction {
    pub fn power(delta: Rat, alpha: Rat) -> Self {
        ControlFunction::Power { delta, alpha }
    }

    pub fn product(delta: Rat, exponents: [Vec<Rat>; 2]) -> Result<Self> {
        for row in &exponents {
            if row.iter().any(|p| !p.is_positive()) {
                return Err(Error::domain("product control exponents must be positive"));
            }
        }
        Ok(ControlFunction::Product { delta, exponents })
    }

    pub fn eval<S: Scalar>(&self, x1: &Point<S>, x2: &Point<S>) -> Result<S> {
        match self {
            ControlFunction::Power { delta, alpha } => {
                let mut sum = S::zero();
                for p in [x1, x2] {
                    for j in 0..p.arity() {
                        let r = p.block_norm(j, Norm::Euclidean)?;
                        sum = sum.add(&r.pow_rat(alpha)?);
                    }
                }
                Ok(sum.mul(&S::from_rat(delta)))
            }
            ControlFunction::Product { delta, exponents } => {
                let mut prod = S::from_rat(delta);
                for (p, row) in [x1, x2].into_iter().zip(exponents) {
                    for j in 0..p.arity() {
                        let r = p.block_norm(j, Norm::Euclidean)?;
                        if r.is_zero() {
                            // positive exponents: a zero factor kills the product
                            return Ok(S::zero());
                        }
                        prod = prod.mul(&r.pow_rat(&row[j])?);
                    }
                }
                Ok(prod)
            }
            ControlFunction::Empirical { entries } => {
                for e in entries {
                    if point_matches(&e.x1, x1) && point_matches(&e.x2, x2) {
                        return Ok(S::from_rat(&e.value));
                    }
                }
                Err(Error::domain("no empirical control entry for this sample"))
            }
        }
    }

    /// phi(x, 0).
    pub fn eval_half<S: Scalar>(&self, x: &Point<S>) -> Result<S> {
        self.eval(x, &x.zero_like())
    }
}

fn point_matches<S: Scalar>(reference: &Point<Rat>, query: &Point<S>) -> bool {
    if reference.arity() != query.arity() {
        return false;
    }
    reference.blocks.iter().zip(&query.blocks).all(|(a, b)| {
        a.len() == b.len() && a.iter().zip(b).all(|(r, q)| S::from_rat(r) == *q)
    })
}

/// Contraction sign: +1 below the critical exponent 3n, -1 above it.
pub fn choose_beta(alpha: &Rat, n: usize) -> Result<i8> {
    let critical = rat_int(3 * n as i64);
    if *alpha == critical {
        Err(Error::UnsupportedExponent(format!(
            "alpha = 3n = {} is the excluded critical exponent",
            format_rat(&critical)
        )))
    } else if *alpha < critical {
        Ok(1)
    } else {
        Ok(-1)
    }
}

fn beta_for_control(phi: &ControlFunction, n: usize) -> Result<i8> {
    match phi {
        ControlFunction::Power { alpha, .. } => choose_beta(alpha, n),
        ControlFunction::Product { exponents, .. } => {
            let sum = exponents
                .iter()
                .flatten()
                .fold(<Rat as Scalar>::zero(), |a, p| a + p);
            choose_beta(&sum, n)
        }
        ControlFunction::Empirical { .. } => Ok(1),
    }
}

/// T^l f as an evaluable mapping: 2^(-3n*beta*l) f(2^(beta*l) x).
pub fn t_power_mapping(f: &Mapping, beta: i8, l: u32) -> Mapping {
    let n = f.arity() as i64;
    let b = beta as i64 * l as i64;
    Mapping::Scaled {
        base: Box::new(f.clone()),
        value_log2: -3 * n * b,
        arg_log2: b,
    }
}

/// (T^l f)(x).
pub fn apply_t_pow<S: Scalar>(f: &Mapping, beta: i8, l: u32, x: &Point<S>) -> Result<Vec<S>> {
    let n = f.arity() as i64;
    let b = beta as i64 * l as i64;
    let v = f.eval(&x.scale_pow2(b))?;
    Ok(v.into_iter().map(|c| c.scale_pow2(-3 * n * b)).collect())
}

/// f(2x) - 2^(3n) f(x), the one-step defect dominated by phi(x,0)/2^n.
pub fn contraction_residual<S: Scalar>(f: &Mapping, x: &Point<S>) -> Result<Vec<S>> {
    let n = f.arity() as i64;
    let at_2x = f.eval(&x.scale_pow2(1))?;
    let scaled = f
        .eval(x)?
        .into_iter()
        .map(|c| c.scale_pow2(3 * n))
        .collect::<Vec<_>>();
    Ok(vec_sub(&at_2x, &scaled))
}

#[derive(Debug, Clone)]
pub struct PhiSeries<S> {
    pub partial_sum: S,
    /// Exact geometric remainder for power controls; None otherwise.
    pub tail: Option<S>,
    pub terms: u32,
    pub diverged: bool,
}

/// Truncation of the series bound
/// Phi(x) = 2^-(3n(beta+1)/2 + n) Sum_l 2^(-3n*beta*l) phi(2^(beta*l + (beta-1)/2) x, 0).
pub fn phi_series<S: Scalar>(
    x: &Point<S>,
    phi: &ControlFunction,
    beta: i8,
    n: usize,
    truncation: u32,
) -> Result<PhiSeries<S>> {
    let b = beta as i64;
    let prefactor: S = pow2_s(-(3 * n as i64 * (b + 1) / 2 + n as i64));
    // analytic geometric ratio 2^(beta*(alpha - 3n)) for power controls
    let ratio: Option<S> = match phi {
        ControlFunction::Power { alpha, .. } => {
            let e = rat_int(b) * (alpha.clone() - rat_int(3 * n as i64));
            Some(S::from_int(2).pow_rat(&e)?)
        }
        _ => None,
    };

    let mut sum = S::zero();
    let mut prev_term: Option<S> = None;
    let mut growing = 0u32;
    let mut last_term = S::zero();
    for l in 0..=truncation {
        let arg = x.scale_pow2(b * l as i64 + (b - 1) / 2);
        let term = phi.eval_half(&arg)?.scale_pow2(-3 * n as i64 * b * l as i64);
        if let Some(p) = &prev_term {
            if !term.is_zero() && term >= *p {
                growing += 1;
            } else {
                growing = 0;
            }
        }
        if growing >= 5 {
            return Ok(PhiSeries {
                partial_sum: prefactor.mul(&sum),
                tail: None,
                terms: l,
                diverged: true,
            });
        }
        sum = sum.add(&term);
        prev_term = Some(term.clone());
        last_term = term;
    }

    let mut diverged = false;
    let tail = match &ratio {
        Some(rho) if *rho < S::one() => {
            // remaining terms form an exact geometric series
            let denom = S::one().sub(rho);
            let t = last_term.mul(rho);
            Some(prefactor.mul(&div_scalar(&t, &denom)?))
        }
        Some(_) => {
            diverged = !last_term.is_zero();
            None
        }
        None => None,
    };
    Ok(PhiSeries {
        partial_sum: prefactor.mul(&sum),
        tail,
        terms: truncation + 1,
        diverged,
    })
}

fn div_scalar<S: Scalar>(a: &S, b: &S) -> Result<S> {
    if b.is_zero() {
        return Err(Error::domain("division by zero"));
    }
    Ok(a.div(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    /// The constants as printed alongside the stability corollary.
    Paper,
    /// The constants from summing the series exactly (tighter above the
    /// critical exponent, identical below it).
    Series,
}

/// Closed-form bound for the power control: a constant times Sum_j ||x_1j||^alpha.
pub fn phi_closed_form<S: Scalar>(
    x: &Point<S>,
    delta: &Rat,
    alpha: &Rat,
    n: usize,
    variant: BoundVariant,
) -> Result<S> {
    let beta = choose_beta(alpha, n)?;
    let mut sum = S::zero();
    for j in 0..x.arity() {
        let r = x.block_norm(j, Norm::Euclidean)?;
        sum = sum.add(&r.pow_rat(alpha)?);
    }
    let two = S::from_int(2);
    let p4n = pow2_s::<S>(4 * n as i64);
    let pan = two.pow_rat(&(alpha.clone() + rat_int(n as i64)))?;
    let denom = if beta == 1 {
        p4n.sub(&pan)
    } else {
        pan.sub(&p4n)
    };
    let mut constant = div_scalar(&S::from_rat(delta), &denom)?;
    if beta == -1 && variant == BoundVariant::Paper {
        constant = constant.mul(&two.pow_rat(alpha)?);
    }
    Ok(constant.mul(&sum))
}

#[derive(Debug, Clone)]
pub struct StabilizationConfig {
    pub beta_override: Option<i8>,
    pub iterations: u32,
    pub series_terms: u32,
    pub tolerance: f64,
}

impl Default for StabilizationConfig {
    fn default() -> Self {
        StabilizationConfig {
            beta_override: None,
            iterations: 40,
            series_terms: 60,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PointRow<S> {
    pub x: Point<S>,
    pub f_x: Vec<S>,
    pub c_x: Vec<S>,
    pub phi_series: S,
    pub phi_paper: Option<S>,
    pub error: S,
    pub bound_ok: bool,
    pub converged: bool,
    /// Successive-iterate differences ||T^l f - T^(l-1) f|| at this point.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct StabilizationReport<S> {
    pub beta: i8,
    pub iterations: u32,
    pub hypothesis_certified: bool,
    pub hypothesis_counterexample: Option<Sample<S>>,
    pub hyperstability_path: bool,
    pub rows: Vec<PointRow<S>>,
    pub all_bounds_ok: bool,
    pub all_converged: bool,
    /// C at the all-ones point; for monomial cores this is the recovered
    /// leading coefficient.
    pub recovered_coefficient: Option<Vec<S>>,
}

/// Checks ||Df|| <= phi over the sample grid (exact in exact mode, scaled
/// tolerance in float mode). Returns the first counterexample.
pub fn hypothesis_check<S: Scalar>(
    f: &Mapping,
    phi: &ControlFunction,
    samples: &[Sample<S>],
    tol: &Tolerances,
) -> Result<Option<Sample<S>>> {
    for s in samples {
        let d = diff_operator(f, s)?;
        let bound = phi.eval(&s.x1, &s.x2)?;
        let ok = if S::EXACT {
            d.norm() <= bound
        } else {
            d.norm().to_f64() <= bound.to_f64() + tol.equation * d.scale.to_f64().max(1.0)
        };
        if !ok {
            return Ok(Some(s.clone()));
        }
    }
    Ok(None)
}

/// Runs the contraction iteration at each evaluation point and compares the
/// measured distance ||f - C|| against the series bound.
pub fn stabilize<S: Scalar>(
    f: &Mapping,
    phi: &ControlFunction,
    cfg: &StabilizationConfig,
    eval_points: &[Point<S>],
    hypothesis_grid: &[Sample<S>],
    tol: &Tolerances,
) -> Result<StabilizationReport<S>> {
    let n = f.arity();
    let beta = match cfg.beta_override {
        Some(b) if b == 1 || b == -1 => b,
        Some(b) => return Err(Error::domain(format!("beta must be +1 or -1, got {b}"))),
        None => beta_for_control(phi, n)?,
    };
    let hyperstability_path = matches!(phi, ControlFunction::Product { .. });

    // summability must hold for the chosen sign before iterating
    for x in eval_points {
        let series = phi_series(x, phi, beta, n, cfg.series_terms)?;
        if series.diverged {
            return Err(Error::Divergence(format!(
                "the series bound is not summable for beta = {beta}; \
                 the summability hypothesis fails at {}",
                serde_json::to_string(&x.to_json()).unwrap_or_default()
            )));
        }
    }

    let counterexample = hypothesis_check(f, phi, hypothesis_grid, tol)?;
    let hypothesis_certified = counterexample.is_none();

    let mut rows = Vec::with_capacity(eval_points.len());
    let mut all_bounds_ok = true;
    let mut all_converged = true;
    for x in eval_points {
        let f_x = f.eval(x)?;
        let mut prev = f_x.clone();
        let mut trace = Vec::with_capacity(cfg.iterations as usize);
        let mut c_x = f_x.clone();
        for l in 1..=cfg.iterations {
            c_x = apply_t_pow(f, beta, l, x)?;
            trace.push(vec_max_norm(&vec_sub(&c_x, &prev)).to_f64());
            prev = c_x.clone();
        }
        let converged = trace.last().map(|d| *d <= cfg.tolerance).unwrap_or(true);
        let series = phi_series(x, phi, beta, n, cfg.series_terms)?;
        let phi_bound = match &series.tail {
            Some(t) => series.partial_sum.add(t),
            None => series.partial_sum.clone(),
        };
        let phi_paper = match phi {
            ControlFunction::Power { delta, alpha } => {
                Some(phi_closed_form(x, delta, alpha, n, BoundVariant::Paper)?)
            }
            _ => None,
        };
        let error = vec_max_norm(&vec_sub(&f_x, &c_x));
        let bound_ok = if hyperstability_path {
            // Phi == 0; compare at float tolerance rather than 0-tolerance
            if S::EXACT {
                error.is_zero()
            } else {
                error.to_f64() <= tol.equation * vec_max_norm(&f_x).to_f64().max(1.0)
            }
        } else if S::EXACT {
            error <= phi_bound
        } else {
            error.to_f64() <= phi_bound.to_f64() * (1.0 + 1e-9) + 1e-12
        };
        all_bounds_ok &= bound_ok;
        all_converged &= converged;
        rows.push(PointRow {
            x: x.clone(),
            f_x,
            c_x,
            phi_series: phi_bound,
            phi_paper,
            error,
            bound_ok,
            converged,
            trace,
        });
    }

    let recovered_coefficient = match f.core() {
        Mapping::Polynomial(_) => {
            let ones = Point::scalar_coords(vec![S::one(); n]);
            Some(apply_t_pow(f, beta, cfg.iterations, &ones)?)
        }
        _ => None,
    };

    Ok(StabilizationReport {
        beta,
        iterations: cfg.iterations,
        hypothesis_certified,
        hypothesis_counterexample: counterexample,
        hyperstability_path,
        rows,
        all_bounds_ok,
        all_converged,
        recovered_coefficient,
    })
}

#[derive(Debug, Clone)]
pub struct FitDelta<S> {
    /// Smallest admissible delta over the grid; 0 for exactly multi-cubic f.
    pub delta: S,
    /// False when some sample has a nonzero residual over a vanishing control.
    pub admissible: bool,
    pub skipped_zero_over_zero: usize,
}

/// max over the grid of ||Df(x1,x2)|| / Sum_{i,j} ||x_ij||^alpha.
pub fn fit_delta<S: Scalar>(
    f: &Mapping,
    alpha: &Rat,
    samples: &[Sample<S>],
) -> Result<FitDelta<S>> {
    let unit = ControlFunction::power(rat_int(1), alpha.clone());
    let mut best = S::zero();
    let mut admissible = true;
    let mut skipped = 0usize;
    for s in samples {
        let d = diff_operator(f, s)?.norm();
        let denom = unit.eval(&s.x1, &s.x2)?;
        if denom.is_zero() {
            if d.is_zero() {
                skipped += 1;
                continue;
            }
            admissible = false;
            continue;
        }
        let ratio = div_scalar(&d, &denom)?;
        if ratio > best {
            best = ratio;
        }
    }
    Ok(FitDelta {
        delta: best,
        admissible,
        skipped_zero_over_zero: skipped,
    })
}

#[derive(Debug, Clone)]
pub enum DecayVerdict<S> {
    Holds,
    /// The l = 0 hypothesis fails at a scaled sample; not an invariant
    /// violation.
    HypothesisFails { level: u32, sample: Sample<S> },
    Violated { level: u32, sample: Sample<S> },
}

#[derive(Debug, Clone)]
pub struct DecayCheck<S> {
    pub verdict: DecayVerdict<S>,
    pub worst_ratio: f64,
    pub levels: u32,
}

/// Verifies ||D(T^l f)(x1,x2)|| <= 2^(-3n*beta*l) phi(2^(beta*l) x1, 2^(beta*l) x2)
/// for l = 0..=l_max over the sample grid.
pub fn dpow_decay_check<S: Scalar>(
    f: &Mapping,
    phi: &ControlFunction,
    beta: i8,
    samples: &[Sample<S>],
    l_max: u32,
    tol: &Tolerances,
) -> Result<DecayCheck<S>> {
    let n = f.arity() as i64;
    let mut worst_ratio = 0.0f64;
    for l in 0..=l_max {
        let b = beta as i64 * l as i64;
        let tl = t_power_mapping(f, beta, l);
        for s in samples {
            let scaled = Sample::new(s.x1.scale_pow2(b), s.x2.scale_pow2(b))?;
            // hypothesis at the scaled arguments, before testing the decay step
            let base = diff_operator(f, &scaled)?;
            let base_bound = phi.eval(&scaled.x1, &scaled.x2)?;
            let base_ok = if S::EXACT {
                base.norm() <= base_bound
            } else {
                base.norm().to_f64()
                    <= base_bound.to_f64() + tol.equation * base.scale.to_f64().max(1.0)
            };
            if !base_ok {
                return Ok(DecayCheck {
                    verdict: DecayVerdict::HypothesisFails {
                        level: l,
                        sample: s.clone(),
                    },
                    worst_ratio,
                    levels: l,
                });
            }
            let lhs = diff_operator(&tl, s)?;
            let rhs = base_bound.scale_pow2(-3 * n * b);
            let ok = if S::EXACT {
                lhs.norm() <= rhs
            } else {
                lhs.norm().to_f64()
                    <= rhs.to_f64() * (1.0 + 1e-9) + tol.equation * lhs.scale.to_f64().max(1.0)
            };
            if !ok {
                return Ok(DecayCheck {
                    verdict: DecayVerdict::Violated {
                        level: l,
                        sample: s.clone(),
                    },
                    worst_ratio,
                    levels: l,
                });
            }
            if !rhs.is_zero() {
                let r = lhs.norm().to_f64() / rhs.to_f64();
                if r > worst_ratio {
                    worst_ratio = r;
                }
            }
        }
    }
    Ok(DecayCheck {
        verdict: DecayVerdict::Holds,
        worst_ratio,
        levels: l_max + 1,
    })
}

#[derive(Debug, Clone)]
pub enum HyperVerdict<S> {
    MultiCubicOnGrid,
    HypothesisViolated {
        sample: Sample<S>,
        residual_norm: S,
        control: S,
    },
    /// classify failed even though the hypothesis held everywhere; this
    /// would contradict the hyperstability corollary and must be surfaced.
    CounterexampleFlagged { verdict_name: &'static str },
}

impl<S> HyperVerdict<S> {
    pub fn name(&self) -> &'static str {
        match self {
            HyperVerdict::MultiCubicOnGrid => "MultiCubicOnGrid",
            HyperVerdict::HypothesisViolated { .. } => "HypothesisViolated",
            HyperVerdict::CounterexampleFlagged { .. } => "CounterexampleFlagged",
        }
    }
}

/// Hyperstability: product controls with Sum p_ij != 3n force every
/// hypothesis-satisfying mapping to be multi-cubic on the grid.
pub fn hyperstability_check<S: Scalar>(
    f: &Mapping,
    phi: &ControlFunction,
    samples: &[Sample<S>],
    tol: &Tolerances,
) -> Result<HyperVerdict<S>> {
    let ControlFunction::Product { exponents, .. } = phi else {
        return Err(Error::domain("hyperstability requires a product control"));
    };
    let sum = exponents
        .iter()
        .flatten()
        .fold(<Rat as Scalar>::zero(), |a, p| a + p);
    if sum == rat_int(3 * f.arity() as i64) {
        return Err(Error::UnsupportedExponent(format!(
            "sum of product exponents equals 3n = {}",
            format_rat(&sum)
        )));
    }
    let mut first_violation = None;
    for s in samples {
        let d = diff_operator(f, s)?;
        let bound = phi.eval(&s.x1, &s.x2)?;
        let ok = if S::EXACT {
            d.norm() <= bound
        } else {
            d.norm().to_f64() <= bound.to_f64() + tol.equation * d.scale.to_f64().max(1.0)
        };
        if !ok {
            let violation = HyperVerdict::HypothesisViolated {
                sample: s.clone(),
                residual_norm: d.norm(),
                control: bound.clone(),
            };
            // a nonzero residual over a vanishing control violates the
            // hypothesis for every amplitude; prefer reporting that
            if bound.is_zero() {
                return Ok(violation);
            }
            first_violation.get_or_insert(violation);
        }
    }
    if let Some(v) = first_violation {
        return Ok(v);
    }
    match classify(f, samples, tol)? {
        Verdict::MultiCubicOnGrid => Ok(HyperVerdict::MultiCubicOnGrid),
        other => Ok(HyperVerdict::CounterexampleFlagged {
            verdict_name: other.name(),
        }),
    }
}

#[derive(Debug, Clone)]
pub struct UniquenessResult<S> {
    pub max_disagreement: S,
    pub worst_point: Option<Point<S>>,
}

/// Stabilizes both mappings and measures how far the two approximants
/// disagree over the evaluation points.
pub fn uniqueness_check<S: Scalar>(
    f1: &Mapping,
    f2: &Mapping,
    phi: &ControlFunction,
    cfg: &StabilizationConfig,
    eval_points: &[Point<S>],
    hypothesis_grid: &[Sample<S>],
    tol: &Tolerances,
) -> Result<UniquenessResult<S>> {
    let r1 = stabilize(f1, phi, cfg, eval_points, hypothesis_grid, tol)?;
    let r2 = stabilize(f2, phi, cfg, eval_points, hypothesis_grid, tol)?;
    let mut max = S::zero();
    let mut worst = None;
    for (a, b) in r1.rows.iter().zip(&r2.rows) {
        let d = vec_max_norm(&vec_sub(&a.c_x, &b.c_x));
        if worst.is_none() || d > max {
            max = d.clone();
            worst = Some(a.x.clone());
        }
    }
    Ok(UniquenessResult {
        max_disagreement: max,
        worst_point: worst,
    })
}

// ---------------------------------------------------------------------------
// generic fixed-point engine

pub struct OperatorSummand {
    pub weight: Box<dyn Fn(&Point<f64>) -> f64>,
    pub transform: Box<dyn Fn(&Point<f64>) -> Point<f64>>,
}

/// The (A1)-(A3) operator shape: T phi(x) = Sum_i L_i(x) phi(g_i(x)).
pub struct OperatorDescriptor {
    pub summands: Vec<OperatorSummand>,
}

impl OperatorDescriptor {
    /// Single-summand contraction with constant weight and scaling transform.
    pub fn scaling(weight: f64, arg_factor: f64) -> Self {
        OperatorDescriptor {
            summands: vec![OperatorSummand {
                weight: Box::new(move |_| weight),
                transform: Box::new(move |x: &Point<f64>| {
                    Point::new(
                        x.blocks
                            .iter()
                            .map(|b| b.iter().map(|c| c * arg_factor).collect())
                            .collect(),
                    )
                }),
            }],
        }
    }

    fn apply_vec(
        &self,
        phi0: &dyn Fn(&Point<f64>) -> Vec<f64>,
        x: &Point<f64>,
        l: u32,
    ) -> Vec<f64> {
        if l == 0 {
            return phi0(x);
        }
        let mut acc: Option<Vec<f64>> = None;
        for s in &self.summands {
            let w = (s.weight)(x);
            let inner = self.apply_vec(phi0, &(s.transform)(x), l - 1);
            let scaled: Vec<f64> = inner.into_iter().map(|v| w * v).collect();
            acc = Some(match acc {
                None => scaled,
                Some(a) => a.iter().zip(&scaled).map(|(p, q)| p + q).collect(),
            });
        }
        acc.unwrap_or_default()
    }

    fn apply_scalar(&self, theta: &dyn Fn(&Point<f64>) -> f64, x: &Point<f64>, l: u32) -> f64 {
        if l == 0 {
            return theta(x);
        }
        self.summands
            .iter()
            .map(|s| (s.weight)(x) * self.apply_scalar(theta, &(s.transform)(x), l - 1))
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct IterationOutcome {
    /// T^L phi0(x); absent when the control series diverges.
    pub estimate: Option<Vec<f64>>,
    /// Sum_{l=0}^{L} Lambda^l theta(x).
    pub theta_star: f64,
    pub converged: bool,
    pub diverged: bool,
    pub trace: Vec<f64>,
}

/// Iterates the generic contraction operator and accumulates the control
/// series, watching for divergence.
pub fn iterate_operator(
    desc: &OperatorDescriptor,
    phi0: &dyn Fn(&Point<f64>) -> Vec<f64>,
    theta: &dyn Fn(&Point<f64>) -> f64,
    x: &Point<f64>,
    iterations: u32,
    tolerance: f64,
) -> IterationOutcome {
    let mut theta_star = 0.0;
    let mut prev_term: Option<f64> = None;
    let mut growing = 0u32;
    let mut diverged = false;
    for l in 0..=iterations {
        let term = desc.apply_scalar(theta, x, l);
        if let Some(p) = prev_term {
            if term > 0.0 && term >= p {
                growing += 1;
            } else {
                growing = 0;
            }
        }
        if growing >= 5 || !term.is_finite() {
            diverged = true;
            break;
        }
        theta_star += term;
        prev_term = Some(term);
    }
    if diverged {
        return IterationOutcome {
            estimate: None,
            theta_star,
            converged: false,
            diverged: true,
            trace: Vec::new(),
        };
    }
    let mut trace = Vec::with_capacity(iterations as usize);
    let mut prev = desc.apply_vec(phi0, x, 0);
    let mut current = prev.clone();
    for l in 1..=iterations {
        current = desc.apply_vec(phi0, x, l);
        let diff = current
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        trace.push(diff);
        prev = current.clone();
    }
    let converged = trace.last().map(|d| *d <= tolerance).unwrap_or(true);
    IterationOutcome {
        estimate: Some(current),
        theta_star,
        converged,
        diverged: false,
        trace,
    }
}
