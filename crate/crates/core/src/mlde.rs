//! Monic modular linear differential equations
//! `(D_0^n + kappa E_4 D_0^(n-2) + lambda E_6 D_0^(n-3)) u = 0`,
//! their indicial polynomials, Frobenius solutions at `q = 0`, and a scan
//! over exponent grids for solutions that look like characters.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{format_rational, rat, rat_int, Scalar};
use crate::modular_forms::{eisenstein, iterate_d0, QExpansion};

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Scalar) -> Self {
        Polynomial::new(vec![-r.clone(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Scalar::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(d == 0 && first) {
                continue;
            }
            let s = format_rational(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let unit = c.abs().is_one();
            match d {
                0 => write!(f, "{s}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{s}*x")?,
                _ if unit => write!(f, "x^{d}")?,
                _ => write!(f, "{s}*x^{d}")?,
            }
        }
        Ok(())
    }
}

/// `(D_0^n + kappa E_4 D_0^(n-2) + lambda E_6 D_0^(n-3)) u = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicMlde {
    order: usize,
    kappa: Scalar,
    lambda: Scalar,
}

impl MonicMlde {
    pub fn new(order: usize, kappa: Scalar, lambda: Scalar) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidMlde(format!("order must be at least 2, got {order}")));
        }
        if order == 2 && !lambda.is_zero() {
            return Err(Error::InvalidMlde("order 2 equations have no E_6 term".into()));
        }
        Ok(MonicMlde { order, kappa, lambda })
    }

    /// `(D_0^2 + kappa E_4) u = 0`.
    pub fn order2(kappa: Scalar) -> Self {
        MonicMlde { order: 2, kappa, lambda: Scalar::zero() }
    }

    /// `(D_0^3 + kappa E_4 D_0 + lambda E_6) u = 0`.
    pub fn order3(kappa: Scalar, lambda: Scalar) -> Self {
        MonicMlde { order: 3, kappa, lambda }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kappa(&self) -> &Scalar {
        &self.kappa
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    /// The forced root sum `n(n-1)/12`.
    pub fn exponent_sum(&self) -> Scalar {
        forced_sum(self.order)
    }

    /// `L(q^y) = q^y sum_j P_j(y) q^j` for `j = 0..=n`; `P_0` is the
    /// indicial polynomial.
    fn operator_polynomials(&self, n: usize) -> Vec<Polynomial> {
        let e2: Vec<Scalar> = eisenstein(2, n).expect("weight 2").coeffs().to_vec();
        let e4: Vec<Scalar> = eisenstein(4, n).expect("weight 4").coeffs().to_vec();
        let e6: Vec<Scalar> = eisenstein(6, n).expect("weight 6").coeffs().to_vec();
        let y = Polynomial::new(vec![Scalar::zero(), Scalar::one()]);

        let mut iterates: Vec<Vec<Polynomial>> = Vec::with_capacity(self.order + 1);
        let mut current: Vec<Polynomial> = (0..=n)
            .map(|j| Polynomial::constant(if j == 0 { Scalar::one() } else { Scalar::zero() }))
            .collect();
        iterates.push(current.clone());
        for i in 0..self.order {
            let k = rat(2 * i as i64, 12);
            // D_k on q^y p_j(y) q^j: (y + j) p_j - (k/12) sum e2_i p_(j-i)
            current = (0..=n)
                .map(|j| {
                    let shifted = y.add(&Polynomial::constant(rat_int(j as i64)));
                    let mut acc = shifted.mul(&current[j]);
                    if !k.is_zero() {
                        for (l, e) in e2.iter().enumerate().take(j + 1) {
                            acc = acc.add(&current[j - l].scale(&(-(e * &k))));
                        }
                    }
                    acc
                })
                .collect();
            iterates.push(current.clone());
        }

        let mut out = iterates[self.order].clone();
        let mut add_term = |coef: &Scalar, series: &[Scalar], iterate: &[Polynomial]| {
            if coef.is_zero() {
                return;
            }
            for j in 0..=n {
                for (l, e) in series.iter().enumerate().take(j + 1) {
                    out[j] = out[j].add(&iterate[j - l].scale(&(e * coef)));
                }
            }
        };
        add_term(&self.kappa, &e4, &iterates[self.order - 2]);
        if self.order >= 3 {
            add_term(&self.lambda, &e6, &iterates[self.order - 3]);
        }
        out
    }
}

fn forced_sum(order: usize) -> Scalar {
    rat((order * (order - 1)) as i64, 12)
}

/// `prod_{i<n} (x - i/6) + kappa prod_{i<n-2} (x - i/6) + lambda prod_{i<n-3} (x - i/6)`.
pub fn indicial_polynomial(m: &MonicMlde) -> Polynomial {
    let falling = |len: usize| {
        (0..len).fold(Polynomial::constant(Scalar::one()), |acc, i| {
            acc.mul(&Polynomial::linear_root(&rat(i as i64, 6)))
        })
    };
    let mut p = falling(m.order).add(&falling(m.order - 2).scale(&m.kappa));
    if m.order >= 3 {
        p = p.add(&falling(m.order - 3).scale(&m.lambda));
    }
    p
}

/// Recovers `kappa` (and `lambda`) from prescribed exponents.
pub fn mlde_from_exponents(order: usize, exponents: &[Scalar]) -> Result<MonicMlde> {
    if exponents.len() != order {
        return Err(Error::InvalidMlde(format!(
            "order {order} needs {order} exponents, got {}",
            exponents.len()
        )));
    }
    let sum: Scalar = exponents.iter().sum();
    let expected = match order {
        2 | 3 => forced_sum(order),
        _ => return Err(Error::InvalidMlde(format!("exponent fitting supports orders 2 and 3, got {order}"))),
    };
    if sum != expected {
        return Err(Error::ExponentSum {
            found: format_rational(&sum),
            expected: format_rational(&expected),
        });
    }
    match order {
        2 => Ok(MonicMlde::order2(&exponents[0] * &exponents[1])),
        _ => {
            let (a, b, c) = (&exponents[0], &exponents[1], &exponents[2]);
            let e2 = a * b + a * c + b * c;
            let e3 = a * b * c;
            Ok(MonicMlde::order3(e2 - rat(1, 18), -e3))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusSolution {
    pub exponent: Scalar,
    pub series: QExpansion,
    pub mlde: MonicMlde,
    /// Set when `x + m` is another root and the recursion stalled at step `m`;
    /// `series` then holds the coefficients computed before the stall.
    pub resonance: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusJson {
    pub exponent: String,
    pub coefficients: Vec<String>,
    pub resonance: bool,
}

impl FrobeniusSolution {
    pub fn to_json(&self) -> FrobeniusJson {
        FrobeniusJson {
            exponent: format_rational(&self.exponent),
            coefficients: self.series.coeffs().iter().map(format_rational).collect(),
            resonance: self.resonance,
        }
    }
}

/// Frobenius series `q^x (1 + a_1 q + ... + a_N q^N)` for an indicial root `x`.
pub fn frobenius_solve(m: &MonicMlde, x: &Scalar, n: usize) -> Result<FrobeniusSolution> {
    let ops = m.operator_polynomials(n);
    if !ops[0].eval(x).is_zero() {
        return Err(Error::NotIndicialRoot { exponent: format_rational(x) });
    }
    let (coeffs, resonance) = recurse(&ops, x, n, |_| true);
    Ok(FrobeniusSolution {
        exponent: x.clone(),
        series: QExpansion::new(x.clone(), coeffs, None),
        mlde: m.clone(),
        resonance,
    })
}

/// Runs the coefficient recursion, stopping early when `keep_going`
/// rejects a coefficient or the leading factor vanishes (resonance).
fn recurse(ops: &[Polynomial], x: &Scalar, n: usize, mut keep_going: impl FnMut(&Scalar) -> bool) -> (Vec<Scalar>, bool) {
    let mut a = vec![Scalar::one()];
    for s in 1..=n {
        let lead = ops[0].eval(&(x + rat_int(s as i64)));
        if lead.is_zero() {
            return (a, true);
        }
        let mut acc = Scalar::zero();
        for (k, ak) in a.iter().enumerate() {
            if !ak.is_zero() {
                acc += ak * ops[s - k].eval(&(x + rat_int(k as i64)));
            }
        }
        let next = -acc / lead;
        let ok = keep_going(&next);
        a.push(next);
        if !ok {
            break;
        }
    }
    (a, false)
}

/// Applies the operator through `iterate_d0` and the Eisenstein series;
/// zero exactly when `u` solves the equation to its order.
pub fn residual(m: &MonicMlde, u: &QExpansion) -> QExpansion {
    let n = u.order();
    let e4 = eisenstein(4, n).expect("weight 4");
    let e6 = eisenstein(6, n).expect("weight 6");
    let mut total = iterate_d0(u, m.order);
    if !m.kappa.is_zero() {
        let term = e4.mul(&iterate_d0(u, m.order - 2)).scale(&m.kappa);
        total = total.add(&term).expect("integral exponent shifts");
    }
    if m.order >= 3 && !m.lambda.is_zero() {
        let term = e6.mul(&iterate_d0(u, m.order - 3)).scale(&m.lambda);
        total = total.add(&term).expect("integral exponent shifts");
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum CandidateVerdict {
    PositiveIntegral,
    Rejected(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanCandidate {
    /// Sorted ascending; the first is the vacuum exponent.
    pub exponents: Vec<Scalar>,
    pub central_charge: Scalar,
    pub conformal_weights: Vec<Scalar>,
    pub coefficients_checked: usize,
    pub verdict: CandidateVerdict,
    /// Tail of the vacuum solution as far as it was computed.
    pub vacuum_coefficients: Vec<Scalar>,
    /// Least `d` with `d * solution` integral, per exponent, for survivors.
    pub multipliers: Vec<BigInt>,
}

impl ScanCandidate {
    pub fn survived(&self) -> bool {
        self.verdict == CandidateVerdict::PositiveIntegral
    }

    pub fn to_json(&self) -> ScanCandidateJson {
        ScanCandidateJson {
            exponents: self.exponents.iter().map(format_rational).collect(),
            c: format_rational(&self.central_charge),
            h: self.conformal_weights.iter().map(format_rational).collect(),
            coefficients_checked: self.coefficients_checked,
            multipliers: self.multipliers.iter().map(|m| m.to_string()).collect(),
            verdict: self.verdict.clone(),
        }
    }
}

/// One JSON line of scan output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCandidateJson {
    pub exponents: Vec<String>,
    pub c: String,
    pub h: Vec<String>,
    pub coefficients_checked: usize,
    pub multipliers: Vec<String>,
    pub verdict: CandidateVerdict,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub order: usize,
    /// Largest denominator on the exponent grid.
    pub max_denominator: u64,
    /// Smallest vacuum exponent considered.
    pub lower: Scalar,
    pub terms: usize,
    /// Reject unless the vacuum exponent is negative.
    pub negative_vacuum: bool,
    /// Optional cap `ln(1 + a_n) <= bound * sqrt(n)` on coefficient growth.
    pub growth_bound: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            order: 2,
            max_denominator: 60,
            lower: rat(-1, 2),
            terms: 40,
            negative_vacuum: true,
            growth_bound: None,
        }
    }
}

/// Fractions `p/q` with `q <= dmax` in `[lo, hi)`, ascending.
pub fn farey_grid(dmax: u64, lo: &Scalar, hi: &Scalar) -> Vec<Scalar> {
    let mut out = Vec::new();
    for q in 1..=dmax as i64 {
        let qs = rat_int(q);
        let pmin = (lo * &qs).ceil().to_integer().to_i64().unwrap_or(0);
        let pmax = (hi * &qs).ceil().to_integer().to_i64().unwrap_or(0);
        for p in pmin..pmax {
            if p.gcd(&q) == 1 {
                out.push(rat(p, q));
            }
        }
    }
    out.sort();
    out
}

/// Exponent tuples the scan visits, each sorted ascending.
pub fn scan_grid(cfg: &ScanConfig) -> Result<Vec<Vec<Scalar>>> {
    match cfg.order {
        2 => {
            let sum = forced_sum(2);
            let half = &sum / rat_int(2);
            Ok(farey_grid(cfg.max_denominator, &cfg.lower, &half)
                .into_iter()
                .map(|x| vec![x.clone(), &sum - x])
                .collect())
        }
        3 => {
            let sum = forced_sum(3);
            let third = &sum / rat_int(3);
            let grid = farey_grid(cfg.max_denominator, &cfg.lower, &sum);
            let mut out = Vec::new();
            for x1 in grid.iter().filter(|x| **x < third) {
                let limit = (&sum - x1) / rat_int(2);
                for x2 in grid.iter().filter(|x| *x > x1 && **x < limit) {
                    out.push(vec![x1.clone(), x2.clone(), &sum - x1 - x2]);
                }
            }
            Ok(out)
        }
        other => Err(Error::InvalidMlde(format!("scans support orders 2 and 3, got {other}"))),
    }
}

/// Applies the character criteria to one exponent tuple.
pub fn evaluate_candidate(exponents: &[Scalar], cfg: &ScanConfig) -> Result<ScanCandidate> {
    let mlde = mlde_from_exponents(cfg.order, exponents)?;
    let x_vac = exponents[0].clone();
    let c = -rat_int(24) * &x_vac;
    let weights: Vec<Scalar> = exponents.iter().map(|x| x - &x_vac).collect();
    let mut candidate = ScanCandidate {
        exponents: exponents.to_vec(),
        central_charge: c,
        conformal_weights: weights,
        coefficients_checked: 0,
        verdict: CandidateVerdict::PositiveIntegral,
        vacuum_coefficients: Vec::new(),
        multipliers: Vec::new(),
    };
    let reject = |mut cand: ScanCandidate, why: String| {
        cand.verdict = CandidateVerdict::Rejected(why);
        Ok(cand)
    };
    if cfg.negative_vacuum && !x_vac.is_negative() {
        return reject(candidate, "vacuum exponent is not negative".into());
    }
    for (i, a) in exponents.iter().enumerate() {
        for b in &exponents[i + 1..] {
            if (b - a).is_integer() {
                return reject(candidate, format!("resonant exponents {} and {}", format_rational(a), format_rational(b)));
            }
        }
    }
    let ops = mlde.operator_polynomials(cfg.terms);
    for (idx, x) in exponents.iter().enumerate() {
        let vacuum = idx == 0;
        let mut failure: Option<String> = None;
        let mut step = 0usize;
        let (coeffs, resonance) = recurse(&ops, x, cfg.terms, |a| {
            step += 1;
            if vacuum && !a.is_integer() {
                failure = Some(format!("non-integral coefficient {} at q^{step}", format_rational(a)));
            } else if a.is_negative() {
                failure = Some(format!("negative coefficient {} at q^{step}", format_rational(a)));
            } else if let Some(bound) = cfg.growth_bound {
                let v = a.to_f64().unwrap_or(f64::INFINITY);
                if (1.0 + v).ln() > bound * (step as f64).sqrt() {
                    failure = Some(format!("coefficient {} at q^{step} exceeds growth bound", format_rational(a)));
                }
            }
            failure.is_none()
        });
        candidate.coefficients_checked = candidate.coefficients_checked.max(coeffs.len() - 1);
        if vacuum {
            candidate.vacuum_coefficients = coeffs.clone();
        }
        if resonance {
            return reject(candidate, format!("resonance in solution at {}", format_rational(x)));
        }
        if let Some(why) = failure {
            return reject(candidate, format!("solution at {}: {why}", format_rational(x)));
        }
        // a non-vacuum module may have a lowest space of dimension d > 1, so
        // its normalised series only needs d * series to be integral
        let half = denominator_lcm(&coeffs[..=cfg.terms / 2]);
        let full = denominator_lcm(&coeffs);
        if half != full {
            return reject(
                candidate,
                format!("solution at {}: denominators keep growing ({half} by q^{}, {full} by q^{})", format_rational(x), cfg.terms / 2, cfg.terms),
            );
        }
        candidate.multipliers.push(full);
    }
    candidate.coefficients_checked = cfg.terms;
    Ok(candidate)
}

fn denominator_lcm(coeffs: &[Scalar]) -> BigInt {
    coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Evaluates every grid point, in parallel on the current rayon pool; the
/// result is in grid order.
pub fn scan_characters(cfg: &ScanConfig) -> Result<Vec<ScanCandidate>> {
    scan_grid(cfg)?
        .par_iter()
        .map(|exps| evaluate_candidate(exps, cfg))
        .collect()
}

/// Integer value of an exact coefficient, when it is one.
pub fn as_integer(c: &Scalar) -> Option<BigInt> {
    c.is_integer().then(|| c.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &[Scalar]) -> Vec<i64> {
        s.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn indicial_order2() {
        let p = indicial_polynomial(&MonicMlde::order2(rat(-11, 3600)));
        assert_eq!(p.coeffs(), &[rat(-11, 3600), rat(-1, 6), rat(1, 1)]);
        assert!(p.eval(&rat(-1, 60)).is_zero());
        assert!(p.eval(&rat(11, 60)).is_zero());
        assert_eq!(p.to_string(), "x^2 - 1/6*x - 11/3600");
    }

    #[test]
    fn indicial_root_sum_is_forced() {
        for (n, want) in [(2usize, rat(1, 6)), (3, rat(1, 2)), (4, rat(1, 1)), (5, rat(5, 3))] {
            let m = MonicMlde::new(n, rat(3, 7), if n > 2 { rat(-2, 5) } else { rat(0, 1) }).unwrap();
            let p = indicial_polynomial(&m);
            assert_eq!(p.degree(), n);
            // x^n - (sum of roots) x^(n-1) + ...
            assert_eq!(-p.coeffs()[n - 1].clone(), want);
        }
    }

    #[test]
    fn operator_constant_term_is_indicial() {
        let m = MonicMlde::order3(rat(5, 9), rat(-1, 4));
        let ops = m.operator_polynomials(3);
        assert_eq!(ops[0], indicial_polynomial(&m));
    }

    #[test]
    fn exponents_to_parameters() {
        assert_eq!(mlde_from_exponents(2, &[rat(-1, 60), rat(11, 60)]).unwrap().kappa(), &rat(-11, 3600));
        assert_eq!(mlde_from_exponents(2, &[rat(-1, 24), rat(5, 24)]).unwrap().kappa(), &rat(-5, 576));
        let ising = mlde_from_exponents(3, &[rat(-1, 48), rat(1, 24), rat(23, 48)]).unwrap();
        let p = indicial_polynomial(&ising);
        for x in [rat(-1, 48), rat(1, 24), rat(23, 48)] {
            assert!(p.eval(&x).is_zero());
        }
        let err = mlde_from_exponents(2, &[rat(0, 1), rat(1, 5)]).unwrap_err();
        assert!(matches!(err, Error::ExponentSum { .. }));
        assert!(mlde_from_exponents(2, &[rat(1, 6)]).is_err());
    }

    #[test]
    fn mlde_construction_errors() {
        assert!(MonicMlde::new(1, rat(0, 1), rat(0, 1)).is_err());
        assert!(MonicMlde::new(2, rat(0, 1), rat(1, 1)).is_err());
    }

    #[test]
    fn yang_lee_solutions() {
        let m = MonicMlde::order2(rat(-11, 3600));
        let g = frobenius_solve(&m, &rat(-1, 60), 6).unwrap();
        assert_eq!(ints(g.series.coeffs()), vec![1, 1, 1, 1, 2, 2, 3]);
        let h = frobenius_solve(&m, &rat(11, 60), 6).unwrap();
        assert_eq!(ints(h.series.coeffs()), vec![1, 0, 1, 1, 1, 1, 2]);
        assert!(residual(&m, &g.series).is_zero());
        assert!(residual(&m, &h.series).is_zero());
    }

    #[test]
    fn su2_level_one_vacuum() {
        let m = MonicMlde::order2(rat(-5, 576));
        let s = frobenius_solve(&m, &rat(-1, 24), 4).unwrap();
        assert_eq!(ints(s.series.coeffs()), vec![1, 3, 4, 7, 13]);
    }

    #[test]
    fn non_root_is_rejected() {
        let m = MonicMlde::order2(rat(-11, 3600));
        assert!(matches!(frobenius_solve(&m, &rat(1, 60), 4), Err(Error::NotIndicialRoot { .. })));
    }

    #[test]
    fn resonance_is_flagged() {
        // roots -5/12 and 7/12 differ by 1
        let m = mlde_from_exponents(2, &[rat(-5, 12), rat(7, 12)]).unwrap();
        let s = frobenius_solve(&m, &rat(-5, 12), 5).unwrap();
        assert!(s.resonance);
        assert_eq!(s.series.order(), 0);
        assert!(!frobenius_solve(&m, &rat(7, 12), 5).unwrap().resonance);
    }

    #[test]
    fn residual_examples() {
        // x = 1/6 is an indicial root of x^2 - x/6, but E_2 feeds the higher
        // terms: D_0^2 q^(1/6) = (1 - E_2)/36 q^(1/6) = 2/3 q^(7/6) + ...
        let m0 = MonicMlde::order2(rat(0, 1));
        let r0 = residual(&m0, &QExpansion::monomial(rat(1, 6), 5));
        assert_eq!(r0.coeff_at(&rat(1, 6)).unwrap_or_else(|| rat(0, 1)), rat(0, 1));
        assert_eq!(r0.coeff_at(&rat(7, 6)), Some(rat(2, 3)));
        assert_eq!(r0.coeff_at(&rat(13, 6)), Some(rat(2, 1)));
        let fixed = frobenius_solve(&m0, &rat(1, 6), 5).unwrap();
        assert!(residual(&m0, &fixed.series).is_zero());
        let m = MonicMlde::order2(rat(-11, 3600));
        let wrong = QExpansion::from_ints(rat(-1, 60), &[1, 1, 0, 0], None);
        let r = residual(&m, &wrong);
        assert!(!r.is_zero());
        assert_eq!(r.leading_exponent(), &(rat(-1, 60) + rat(2, 1)));
    }

    #[test]
    fn truncation_is_monotone() {
        let m = MonicMlde::order2(rat(-11, 3600));
        let a = frobenius_solve(&m, &rat(-1, 60), 10).unwrap();
        let b = frobenius_solve(&m, &rat(-1, 60), 20).unwrap();
        assert_eq!(a.series.coeffs(), &b.series.coeffs()[..11]);
    }

    #[test]
    fn farey() {
        let g = farey_grid(4, &rat(-1, 2), &rat(0, 1));
        assert_eq!(g, vec![rat(-1, 2), rat(-1, 3), rat(-1, 4)]);
    }

    #[test]
    fn positive_vacuum_rejected() {
        let cfg = ScanConfig::default();
        let c = evaluate_candidate(&[rat(1, 60), rat(3, 20)], &cfg).unwrap();
        assert!(matches!(c.verdict, CandidateVerdict::Rejected(_)));
    }

    #[test]
    fn ising_is_a_candidate() {
        let cfg = ScanConfig { order: 3, terms: 20, ..ScanConfig::default() };
        let c = evaluate_candidate(&[rat(-1, 48), rat(1, 24), rat(23, 48)], &cfg).unwrap();
        assert!(c.survived(), "{:?}", c.verdict);
        assert_eq!(c.central_charge, rat(1, 2));
        assert_eq!(c.conformal_weights, vec![rat(0, 1), rat(1, 16), rat(1, 2)]);
    }
}
