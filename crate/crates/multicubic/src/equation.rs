//! Both sides of the characterizing multi-cubic equation, the difference
//! operator, per-variable residuals, the power condition, and the
//! grid-level classifier.

use crate::combinatorics::{enumerate_mk, enumerate_sign_patterns, rhs_weight, MkTerm, NodeChoice};
use crate::error::{Error, Result};
use crate::mappings::{make_norm_cube, CachedEval, Mapping};
use crate::point::{vec_max_norm, vec_scale, vec_sub, Norm, Point};
use crate::rat::{rat_int, Rat};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample<S> {
    pub x1: Point<S>,
    pub x2: Point<S>,
}

impl<S: Scalar> Sample<S> {
    pub fn new(x1: Point<S>, x2: Point<S>) -> Result<Self> {
        if x1.arity() != x2.arity() {
            return Err(Error::ArityMismatch {
                expected: x1.arity(),
                got: x2.arity(),
            });
        }
        Ok(Sample { x1, x2 })
    }

    pub fn arity(&self) -> usize {
        self.x1.arity()
    }
}

/// Float-mode comparison tolerances; exact mode demands equality.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Equation residuals: absolute tolerance scaled by the largest
    /// intermediate magnitude.
    pub equation: f64,
    /// Relative tolerance for the power condition.
    pub power: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equation: 1e-9,
            power: 1e-12,
        }
    }
}

/// Instantiates one node tuple at a sample.
pub fn instantiate_term<S: Scalar>(term: &MkTerm, s: &Sample<S>) -> Result<Point<S>> {
    if term.choices.len() != s.arity() {
        return Err(Error::ArityMismatch {
            expected: s.arity(),
            got: term.choices.len(),
        });
    }
    let blocks = term
        .choices
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let a = &s.x1.blocks[j];
            let b = &s.x2.blocks[j];
            Ok(match c {
                NodeChoice::First => a.clone(),
                NodeChoice::PlusDiff => crate::point::vec_add(a, b),
                NodeChoice::MinusDiff => vec_sub(a, b),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Point::new(blocks))
}

fn lhs_sum_cached<S: Scalar>(f: &CachedEval<S>, s: &Sample<S>) -> Result<Vec<S>> {
    let n = s.arity();
    let m = f.mapping().codomain_dim();
    let mut acc = vec![S::zero(); m];
    for q in enumerate_sign_patterns(n)? {
        let mut blocks = Vec::with_capacity(n);
        for j in 0..n {
            let sign = i64::from(q.signs[j]);
            let two = S::from_int(2);
            let sg = S::from_int(sign);
            let block = s.x1.blocks[j]
                .iter()
                .zip(&s.x2.blocks[j])
                .map(|(a, b)| two.mul(a).add(&sg.mul(b)))
                .collect();
            blocks.push(block);
        }
        let v = f.eval(&Point::new(blocks))?;
        acc = crate::point::vec_add(&acc, &v);
    }
    Ok(acc)
}

fn rhs_sum_cached<S: Scalar>(f: &CachedEval<S>, s: &Sample<S>) -> Result<Vec<S>> {
    let n = s.arity();
    let m = f.mapping().codomain_dim();
    let mut acc = vec![S::zero(); m];
    for k in 0..=n {
        let w = S::from_rat(&Rat::from_integer(rhs_weight(n, k)?));
        let mut part = vec![S::zero(); m];
        for term in enumerate_mk(n, k)? {
            let v = f.eval(&instantiate_term(&term, s)?)?;
            part = crate::point::vec_add(&part, &v);
        }
        acc = crate::point::vec_add(&acc, &vec_scale(&part, &w));
    }
    Ok(acc)
}

/// Sum over q in {-1,1}^n of f(2*x1 + q*x2).
pub fn lhs_sum<S: Scalar>(f: &Mapping, s: &Sample<S>) -> Result<Vec<S>> {
    lhs_sum_cached(&CachedEval::new(f), s)
}

/// Sum over k of 2^(n-k) 12^k f(M_k^n).
pub fn rhs_sum<S: Scalar>(f: &Mapping, s: &Sample<S>) -> Result<Vec<S>> {
    rhs_sum_cached(&CachedEval::new(f), s)
}

#[derive(Debug, Clone)]
pub struct DiffValue<S> {
    pub value: Vec<S>,
    /// Largest intermediate magnitude, for scaled float comparisons.
    pub scale: S,
}

impl<S: Scalar> DiffValue<S> {
    pub fn norm(&self) -> S {
        vec_max_norm(&self.value)
    }

    /// True when the residual vanishes: exactly in exact mode, within the
    /// scaled tolerance in float mode.
    pub fn vanishes(&self, tol: &Tolerances) -> bool {
        if S::EXACT {
            self.value.iter().all(Scalar::is_zero)
        } else {
            self.norm().to_f64() <= tol.equation * self.scale.to_f64().max(1.0)
        }
    }
}

fn diff_operator_cached<S: Scalar>(f: &CachedEval<S>, s: &Sample<S>) -> Result<DiffValue<S>> {
    let lhs = lhs_sum_cached(f, s)?;
    let rhs = rhs_sum_cached(f, s)?;
    let mut scale = vec_max_norm(&lhs);
    let rn = vec_max_norm(&rhs);
    if rn > scale {
        scale = rn;
    }
    Ok(DiffValue {
        value: vec_sub(&lhs, &rhs),
        scale,
    })
}

/// The difference operator: lhs_sum - rhs_sum.
pub fn diff_operator<S: Scalar>(f: &Mapping, s: &Sample<S>) -> Result<DiffValue<S>> {
    diff_operator_cached(&CachedEval::new(f), s)
}

/// Jun-Kim residual in variable `j` around `base`, with `y` replacing the
/// j-th perturbation:
/// f(..,2x+y,..) + f(..,2x-y,..) - 2f(..,x+y,..) - 2f(..,x-y,..) - 12f(..,x,..)
pub fn junkim_residual<S: Scalar>(
    f: &Mapping,
    j: usize,
    base: &Point<S>,
    y: &[S],
) -> Result<Vec<S>> {
    junkim_residual_cached(&CachedEval::new(f), j, base, y)
}

fn junkim_residual_cached<S: Scalar>(
    f: &CachedEval<S>,
    j: usize,
    base: &Point<S>,
    y: &[S],
) -> Result<Vec<S>> {
    if j >= base.arity() {
        return Err(Error::domain(format!(
            "variable index {j} out of range 0..{}",
            base.arity()
        )));
    }
    if y.len() != base.blocks[j].len() {
        return Err(Error::domain("y dimension does not match the coordinate"));
    }
    let with_j = |coeff_x: i64, coeff_y: i64| -> Point<S> {
        let mut p = base.clone();
        let cx = S::from_int(coeff_x);
        let cy = S::from_int(coeff_y);
        p.blocks[j] = base.blocks[j]
            .iter()
            .zip(y)
            .map(|(a, b)| cx.mul(a).add(&cy.mul(b)))
            .collect();
        p
    };
    let two = S::from_int(2);
    let twelve = S::from_int(12);
    let mut acc = f.eval(&with_j(2, 1))?;
    acc = crate::point::vec_add(&acc, &f.eval(&with_j(2, -1))?);
    acc = vec_sub(&acc, &vec_scale(&f.eval(&with_j(1, 1))?, &two));
    acc = vec_sub(&acc, &vec_scale(&f.eval(&with_j(1, -1))?, &two));
    acc = vec_sub(&acc, &vec_scale(&f.eval(&with_j(1, 0))?, &twelve));
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct PowerCheck<S> {
    pub holds: bool,
    pub worst_deviation: S,
    pub worst_point: Option<Point<S>>,
}

/// Checks f(..,2z_j,..) = 2^r f(z) over the grid points.
pub fn check_power_condition<S: Scalar>(
    f: &Mapping,
    j: usize,
    r: u32,
    grid: &[Point<S>],
    tol: &Tolerances,
) -> Result<PowerCheck<S>> {
    check_power_condition_cached(&CachedEval::new(f), j, r, grid, tol)
}

fn check_power_condition_cached<S: Scalar>(
    f: &CachedEval<S>,
    j: usize,
    r: u32,
    grid: &[Point<S>],
    tol: &Tolerances,
) -> Result<PowerCheck<S>> {
    let factor = S::from_int(2).pow_u(r);
    let mut worst = S::zero();
    let mut worst_point = None;
    let mut holds = true;
    for p in grid {
        if j >= p.arity() {
            return Err(Error::domain(format!("variable index {j} out of range")));
        }
        let mut doubled = p.clone();
        doubled.blocks[j] = p.blocks[j].iter().map(|c| c.scale_pow2(1)).collect();
        let left = f.eval(&doubled)?;
        let right = vec_scale(&f.eval(p)?, &factor);
        let dev = vec_max_norm(&vec_sub(&left, &right));
        let ok = if S::EXACT {
            dev.is_zero()
        } else {
            dev.to_f64() <= tol.power * vec_max_norm(&right).to_f64().max(1.0)
        };
        if !ok {
            holds = false;
        }
        if dev > worst {
            worst = dev;
            worst_point = Some(p.clone());
        }
    }
    Ok(PowerCheck {
        holds,
        worst_deviation: worst,
        worst_point,
    })
}

#[derive(Debug, Clone)]
pub struct ResidualReport<S> {
    pub samples: usize,
    pub max_residual_norm: S,
    pub worst_sample: Option<Sample<S>>,
    pub per_sample: Option<Vec<S>>,
}

/// Max-residual sweep of the difference operator over sample pairs.
/// Ties keep the first maximizer in grid order.
pub fn residual_sweep<S: Scalar>(
    f: &Mapping,
    samples: &[Sample<S>],
    keep_per_sample: bool,
) -> Result<ResidualReport<S>> {
    let cache = CachedEval::new(f);
    let mut max = S::zero();
    let mut worst = None;
    let mut per = keep_per_sample.then(Vec::new);
    for s in samples {
        let d = diff_operator_cached(&cache, s)?;
        let norm = d.norm();
        if worst.is_none() || norm > max {
            max = norm.clone();
            worst = Some(s.clone());
        }
        if let Some(v) = per.as_mut() {
            v.push(norm);
        }
    }
    Ok(ResidualReport {
        samples: samples.len(),
        max_residual_norm: max,
        worst_sample: worst,
        per_sample: per,
    })
}

#[derive(Debug, Clone)]
pub enum Verdict<S> {
    MultiCubicOnGrid,
    EquationFails {
        sample: Sample<S>,
        residual_norm: S,
    },
    PowerConditionFails {
        variable: usize,
        point: Point<S>,
        deviation: S,
    },
    /// Would contradict the round-trip theorem at grid level; flagged so a
    /// report can surface it loudly. Not expected to occur.
    JunKimFails {
        variable: usize,
        point: Point<S>,
        residual_norm: S,
    },
}

impl<S> Verdict<S> {
    pub fn is_multicubic(&self) -> bool {
        matches!(self, Verdict::MultiCubicOnGrid)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::MultiCubicOnGrid => "MultiCubicOnGrid",
            Verdict::EquationFails { .. } => "EquationFails",
            Verdict::PowerConditionFails { .. } => "PowerConditionFails",
            Verdict::JunKimFails { .. } => "JunKimFails",
        }
    }
}

/// Grid-level classifier: equation residuals on all sample pairs, the
/// 3-power condition in each variable, then the per-variable residuals on
/// the induced grid (re-verified rather than assumed).
pub fn classify<S: Scalar>(
    f: &Mapping,
    samples: &[Sample<S>],
    tol: &Tolerances,
) -> Result<Verdict<S>> {
    if samples.is_empty() {
        return Err(Error::domain("classification grid is empty"));
    }
    let cache = CachedEval::new(f);
    for s in samples {
        let d = diff_operator_cached(&cache, s)?;
        if !d.vanishes(tol) {
            return Ok(Verdict::EquationFails {
                sample: s.clone(),
                residual_norm: d.norm(),
            });
        }
    }
    let n = samples[0].arity();
    let points: Vec<Point<S>> = samples.iter().map(|s| s.x1.clone()).collect();
    for j in 0..n {
        let check = check_power_condition_cached(&cache, j, 3, &points, tol)?;
        if !check.holds {
            return Ok(Verdict::PowerConditionFails {
                variable: j,
                point: check.worst_point.unwrap_or_else(|| points[0].clone()),
                deviation: check.worst_deviation,
            });
        }
    }
    for s in samples {
        for j in 0..n {
            let res = junkim_residual_cached(&cache, j, &s.x1, &s.x2.blocks[j])?;
            let norm = vec_max_norm(&res);
            let ok = if S::EXACT {
                norm.is_zero()
            } else {
                // scale by the dominant term magnitude of the five-point stencil
                let f_at = vec_max_norm(&cache.eval(&s.x1)?);
                norm.to_f64() <= tol.equation * (12.0 * f_at.to_f64()).max(1.0)
            };
            if !ok {
                return Ok(Verdict::JunKimFails {
                    variable: j,
                    point: s.x1.clone(),
                    residual_norm: norm,
                });
            }
        }
    }
    Ok(Verdict::MultiCubicOnGrid)
}

/// The norm-cube demonstration: the double relation holds on a grid while
/// the cubic equation fails at x = 0, y = (1, 0).
#[derive(Debug, Clone)]
pub struct Remark21Demo {
    pub power_condition_holds: bool,
    pub power_worst_deviation: f64,
    pub residual_at_unit: Vec<f64>,
    pub residual_expected: Vec<f64>,
    pub residual_at_zero: Vec<f64>,
    pub double_at_34: Vec<f64>,
    pub eight_h_at_34: Vec<f64>,
}

pub fn remark21_demo() -> Result<Remark21Demo> {
    let h = make_norm_cube(2, vec![rat_int(1), rat_int(0)], Norm::Euclidean)?;
    let grid: Vec<Point<f64>> = [
        (0.5, 0.0),
        (1.0, 1.0),
        (-2.0, 3.0),
        (3.0, 4.0),
        (0.1, -0.7),
        (5.0, -12.0),
    ]
    .iter()
    .map(|&(a, b)| Point::new(vec![vec![a, b]]))
    .collect();
    let tol = Tolerances::default();
    let power = check_power_condition(&h, 0, 3, &grid, &tol)?;

    let zero: Point<f64> = Point::new(vec![vec![0.0, 0.0]]);
    let residual_at_unit = junkim_residual(&h, 0, &zero, &[1.0, 0.0])?;
    let residual_at_zero = junkim_residual(&h, 0, &zero, &[0.0, 0.0])?;

    let x34: Point<f64> = Point::new(vec![vec![3.0, 4.0]]);
    let x68: Point<f64> = Point::new(vec![vec![6.0, 8.0]]);
    let double_at_34 = h.eval(&x68)?;
    let eight_h_at_34 = h.eval(&x34)?.iter().map(|v| 8.0 * v).collect();

    Ok(Remark21Demo {
        power_condition_holds: power.holds,
        power_worst_deviation: power.worst_deviation.to_f64(),
        residual_at_unit,
        residual_expected: vec![-2.0, 0.0],
        residual_at_zero,
        double_at_34,
        eight_h_at_34,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{make_multicubic_monomial, PolyTerm, PolynomialModel};
    use crate::rat::rat_frac;

    fn sample(x1: &[i64], x2: &[i64]) -> Sample<Rat> {
        Sample::new(Point::from_ints(x1), Point::from_ints(x2)).unwrap()
    }

    fn cube1() -> Mapping {
        make_multicubic_monomial(1, vec![rat_int(1)]).unwrap()
    }

    fn poly1(terms: Vec<(u32, i64)>) -> Mapping {
        Mapping::Polynomial(
            PolynomialModel::new(
                1,
                1,
                3,
                terms
                    .into_iter()
                    .map(|(d, c)| PolyTerm {
                        degrees: vec![d],
                        coeff: vec![rat_int(c)],
                    })
                    .collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn lhs_rhs_frozen_values() {
        let s = sample(&[1], &[1]);
        assert_eq!(lhs_sum(&cube1(), &s).unwrap(), vec![rat_int(28)]);
        assert_eq!(rhs_sum(&cube1(), &s).unwrap(), vec![rat_int(28)]);

        let f2 = make_multicubic_monomial(2, vec![rat_int(1)]).unwrap();
        let s2 = sample(&[1, 1], &[1, 1]);
        assert_eq!(lhs_sum(&f2, &s2).unwrap(), vec![rat_int(784)]);
        assert_eq!(rhs_sum(&f2, &s2).unwrap(), vec![rat_int(784)]);
    }

    #[test]
    fn collapsed_arguments() {
        // x1 = x2 = 0: lhs collapses to 2^n f(0), rhs to 2^(4n) f(0)
        let f = poly1(vec![(0, 3)]); // constant 3
        let s = sample(&[0], &[0]);
        assert_eq!(lhs_sum(&f, &s).unwrap(), vec![rat_int(6)]);
        assert_eq!(rhs_sum(&f, &s).unwrap(), vec![rat_int(48)]);
    }

    #[test]
    fn diff_operator_values() {
        let s = sample(&[1], &[1]);
        assert!(diff_operator(&cube1(), &s).unwrap().value[0].is_zero());

        let sq = poly1(vec![(2, 1)]);
        assert_eq!(diff_operator(&sq, &s).unwrap().value, vec![rat_int(-10)]);

        let zero = poly1(vec![]);
        assert!(diff_operator(&zero, &s).unwrap().value[0].is_zero());
    }

    #[test]
    fn collapse_identity() {
        // D f(x, 0) = 2^n f(2x) - 2^(4n) f(x)
        let f = poly1(vec![(3, 2), (1, 5), (0, -1)]);
        for v in [-3i64, 0, 1, 4] {
            let s = sample(&[v], &[0]);
            let d = diff_operator(&f, &s).unwrap().value[0].clone();
            let f2x = f.eval(&Point::<Rat>::from_ints(&[2 * v])).unwrap()[0].clone();
            let fx = f.eval(&Point::<Rat>::from_ints(&[v])).unwrap()[0].clone();
            assert_eq!(d, rat_int(2) * f2x - rat_int(16) * fx);
        }
    }

    #[test]
    fn junkim_values() {
        let x = Point::<Rat>::from_ints(&[1]);
        // cubic solves the equation
        for (xv, yv) in [(1i64, 1i64), (2, 3), (-1, 5)] {
            let base = Point::<Rat>::from_ints(&[xv]);
            let r = junkim_residual(&cube1(), 0, &base, &[rat_int(yv)]).unwrap();
            assert!(r[0].is_zero());
        }
        // linear part leaves -12x
        let lin = poly1(vec![(1, 1)]);
        let r = junkim_residual(&lin, 0, &x, &[rat_int(9)]).unwrap();
        assert_eq!(r, vec![rat_int(-12)]);
        // constant c leaves -14c
        let c = poly1(vec![(0, 4)]);
        let r = junkim_residual(&c, 0, &x, &[rat_int(2)]).unwrap();
        assert_eq!(r, vec![rat_int(-56)]);
        // index out of range
        assert!(junkim_residual(&cube1(), 1, &x, &[rat_int(1)]).is_err());
    }

    #[test]
    fn power_condition_cases() {
        let tol = Tolerances::default();
        let grid: Vec<Point<Rat>> = vec![Point::from_ints(&[1]), Point::from_ints(&[-2])];
        let ok = check_power_condition(&cube1(), 0, 3, &grid, &tol).unwrap();
        assert!(ok.holds);

        let sq = poly1(vec![(2, 1)]);
        let bad = check_power_condition(&sq, 0, 3, &grid, &tol).unwrap();
        assert!(!bad.holds);
        // 4x^2 vs 8x^2 at x=1 deviates by 4
        assert_eq!(bad.worst_deviation, rat_int(16));
    }

    #[test]
    fn classify_cases() {
        let tol = Tolerances::default();
        let samples: Vec<Sample<Rat>> = crate::grid::GridSpec::default()
            .sample_pairs(1)
            .unwrap()
            .into_iter()
            .map(|(a, b)| Sample::new(a, b).unwrap())
            .collect();

        let good = make_multicubic_monomial(1, vec![rat_int(5)]).unwrap();
        assert!(classify(&good, &samples, &tol).unwrap().is_multicubic());

        let mixed = poly1(vec![(3, 1), (1, 1)]);
        match classify(&mixed, &samples, &tol).unwrap() {
            Verdict::EquationFails { residual_norm, .. } => {
                assert!(!residual_norm.is_zero());
            }
            other => panic!("expected EquationFails, got {}", other.name()),
        }

        assert!(classify::<Rat>(&good, &[], &tol).is_err());
    }

    #[test]
    fn classify_two_variable_monomial() {
        let tol = Tolerances::default();
        let samples: Vec<Sample<Rat>> = crate::grid::GridSpec {
            random_count: 20,
            ..crate::grid::GridSpec::default()
        }
        .sample_pairs(2)
        .unwrap()
        .into_iter()
        .map(|(a, b)| Sample::new(a, b).unwrap())
        .collect();
        let f = make_multicubic_monomial(2, vec![rat_int(5)]).unwrap();
        assert!(classify(&f, &samples, &tol).unwrap().is_multicubic());
    }

    #[test]
    fn norm_cube_fails_equation_but_passes_power() {
        let tol = Tolerances::default();
        let h = make_norm_cube(2, vec![rat_int(1), rat_int(0)], Norm::Euclidean).unwrap();
        let zero: Point<f64> = Point::new(vec![vec![0.0, 0.0]]);
        let unit: Point<f64> = Point::new(vec![vec![1.0, 0.0]]);
        let samples = vec![
            Sample::new(zero.clone(), unit.clone()).unwrap(),
            Sample::new(unit.clone(), zero).unwrap(),
        ];
        match classify(&h, &samples, &tol).unwrap() {
            Verdict::EquationFails { sample, .. } => {
                assert_eq!(sample.x1.blocks[0], vec![0.0, 0.0]);
            }
            other => panic!("expected EquationFails, got {}", other.name()),
        }
        let grid = vec![unit, Point::new(vec![vec![3.0, 4.0]])];
        assert!(check_power_condition(&h, 0, 3, &grid, &tol).unwrap().holds);
    }

    #[test]
    fn remark21_record() {
        let demo = remark21_demo().unwrap();
        assert!(demo.power_condition_holds);
        assert!((demo.residual_at_unit[0] + 2.0).abs() < 1e-12);
        assert!(demo.residual_at_unit[1].abs() < 1e-12);
        assert_eq!(demo.residual_at_zero, vec![0.0, 0.0]);
        assert_eq!(demo.double_at_34, vec![1000.0, 0.0]);
        assert_eq!(demo.eight_h_at_34, vec![1000.0, 0.0]);
    }

    #[test]
    fn residual_sweep_reports_worst() {
        let sq = poly1(vec![(2, 1)]);
        let samples = vec![sample(&[0], &[0]), sample(&[1], &[1]), sample(&[2], &[2])];
        let rep = residual_sweep(&sq, &samples, true).unwrap();
        assert_eq!(rep.samples, 3);
        // residual of x^2 is -8x1^2-2x2^2; worst at (2,2)
        assert_eq!(rep.max_residual_norm, rat_int(40));
        assert_eq!(
            rep.worst_sample.unwrap().x1,
            Point::<Rat>::from_ints(&[2])
        );
        assert_eq!(
            rep.per_sample.unwrap(),
            vec![rat_int(0), rat_int(10), rat_int(40)]
        );
    }

    #[test]
    fn separable_consistency() {
        // product of per-variable cubics: both sides factor per coordinate
        let f = make_multicubic_monomial(3, vec![rat_frac(7, 3)]).unwrap();
        let s = Sample::new(
            Point::<Rat>::from_ints(&[1, -2, 3]),
            Point::<Rat>::from_ints(&[2, 1, -1]),
        )
        .unwrap();
        let lhs = lhs_sum(&f, &s).unwrap();
        let rhs = rhs_sum(&f, &s).unwrap();
        assert_eq!(lhs, rhs);
        // per-coordinate factorization of the left side
        let one_var = make_multicubic_monomial(1, vec![rat_int(1)]).unwrap();
        let mut product = rat_frac(7, 3);
        for j in 0..3 {
            let sj = Sample::new(
                Point::new(vec![s.x1.blocks[j].clone()]),
                Point::new(vec![s.x2.blocks[j].clone()]),
            )
            .unwrap();
            product *= lhs_sum(&one_var, &sj).unwrap()[0].clone();
        }
        assert_eq!(lhs[0], product);
    }
}
