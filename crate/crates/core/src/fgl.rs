//! One-dimensional commutative formal group laws.
//!
//! A formal group law `F(X, Y)` over `k` satisfies `F(X, 0) = X`,
//! `F(0, Y) = Y`, associativity and commutativity. All checks are made up
//! to the truncation order of the stored series; associativity is checked
//! on trivariate expansions truncated by total degree.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{
    format_rational, parse_rational, rat, BivariateSeries, CoefficientRing, Scalar, SeriesLike, TruncSeries,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FglKind {
    Additive,
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw {
    body: BivariateSeries,
}

impl FormalGroupLaw {
    /// Wraps a bivariate series after checking the three axioms.
    pub fn new(body: BivariateSeries) -> Result<Self> {
        let report = check_fgl_axioms(&body);
        if !report.passed() {
            return Err(Error::InvalidArgument(format!(
                "series is not a formal group law to order {}: {}",
                body.order(),
                report.summary()
            )));
        }
        Ok(FormalGroupLaw { body })
    }

    pub fn builtin(kind: FglKind, ring: CoefficientRing, order: usize) -> Self {
        let order = order.max(1);
        let terms: &[(usize, usize, i64)] = match kind {
            FglKind::Additive => &[(1, 0, 1), (0, 1, 1)],
            FglKind::Multiplicative => &[(1, 0, 1), (0, 1, 1), (1, 1, 1)],
        };
        FormalGroupLaw {
            body: BivariateSeries::from_int_terms(ring, order, terms),
        }
    }

    pub fn additive(ring: CoefficientRing, order: usize) -> Self {
        Self::builtin(FglKind::Additive, ring, order)
    }

    pub fn multiplicative(ring: CoefficientRing, order: usize) -> Self {
        Self::builtin(FglKind::Multiplicative, ring, order)
    }

    pub fn body(&self) -> &BivariateSeries {
        &self.body
    }

    pub fn ring(&self) -> &CoefficientRing {
        self.body.ring()
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    /// `c_ij`, the coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.body.coeff(i, j)
    }

    pub fn to_json(&self) -> FglJson {
        FglJson {
            ring: self.ring().to_string(),
            order: self.order(),
            monomials: self
                .body
                .terms()
                .into_iter()
                .map(|(i, j, c)| (i, j, format_rational(&c)))
                .collect(),
        }
    }

    pub fn from_json(json: &FglJson) -> Result<Self> {
        let ring: CoefficientRing = json.ring.parse()?;
        let terms = json
            .monomials
            .iter()
            .map(|(i, j, c)| Ok((*i, *j, parse_rational(c)?)))
            .collect::<Result<Vec<_>>>()?;
        FormalGroupLaw::new(BivariateSeries::from_terms(ring, json.order, &terms)?)
    }
}

/// Serialized form: `{ring, order, monomials: [[i, j, "p/q"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglJson {
    pub ring: String,
    pub order: usize,
    pub monomials: Vec<(usize, usize, String)>,
}

/// First monomial at which the two sides of an axiom differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialFailure {
    pub exponents: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub passed: bool,
    pub first_failure: Option<MonomialFailure>,
}

impl AxiomOutcome {
    fn from_failure(first_failure: Option<MonomialFailure>) -> Self {
        AxiomOutcome {
            passed: first_failure.is_none(),
            first_failure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub order: usize,
    pub identity: AxiomOutcome,
    pub associativity: AxiomOutcome,
    pub commutativity: AxiomOutcome,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.identity.passed && self.associativity.passed && self.commutativity.passed
    }

    fn summary(&self) -> String {
        let mut failed = Vec::new();
        for (name, outcome) in [
            ("identity", &self.identity),
            ("associativity", &self.associativity),
            ("commutativity", &self.commutativity),
        ] {
            if let Some(f) = &outcome.first_failure {
                failed.push(format!("{name} fails at {:?}", f.exponents));
            }
        }
        failed.join(", ")
    }
}

/// Checks the identity, associativity and commutativity axioms up to the
/// order of `f`. Monomials are scanned by total degree, higher powers of the
/// first variable first.
pub fn check_fgl_axioms(f: &BivariateSeries) -> AxiomReport {
    let ring = f.ring().clone();
    let n = f.order();

    let x = TruncSeries::x(ring.clone(), n);
    let identity = first_univariate_diff(&f.at_y_zero(), &x, |d| vec![d, 0])
        .or_else(|| first_univariate_diff(&f.at_x_zero(), &x, |d| vec![0, d]));

    let swapped = f.swap();
    let mut commutativity = None;
    'outer: for d in 0..=n {
        for i in (0..=d).rev() {
            let (a, b) = (f.coeff(i, d - i), swapped.coeff(i, d - i));
            if a != b {
                commutativity = Some(MonomialFailure {
                    exponents: vec![i, d - i],
                    lhs: format_rational(&a),
                    rhs: format_rational(&b),
                });
                break 'outer;
            }
        }
    }

    let associativity = if f.has_zero_constant() {
        let tx = TriSeries::var(ring.clone(), n, 0);
        let ty = TriSeries::var(ring.clone(), n, 1);
        let tz = TriSeries::var(ring, n, 2);
        let fxy = f.substitute(&tx, &ty).expect("same ring");
        let fyz = f.substitute(&ty, &tz).expect("same ring");
        let left = f.substitute(&fxy, &tz).expect("same ring");
        let right = f.substitute(&tx, &fyz).expect("same ring");
        left.first_difference(&right)
    } else {
        Some(MonomialFailure {
            exponents: vec![0, 0, 0],
            lhs: format_rational(&f.coeff(0, 0)),
            rhs: "0".into(),
        })
    };

    AxiomReport {
        order: n,
        identity: AxiomOutcome::from_failure(identity),
        associativity: AxiomOutcome::from_failure(associativity),
        commutativity: AxiomOutcome::from_failure(commutativity),
    }
}

fn first_univariate_diff(
    got: &TruncSeries,
    want: &TruncSeries,
    exps: impl Fn(usize) -> Vec<usize>,
) -> Option<MonomialFailure> {
    (0..=got.order().min(want.order())).find_map(|d| {
        let (a, b) = (got.coeff(d), want.coeff(d));
        (a != b).then(|| MonomialFailure {
            exponents: exps(d),
            lhs: format_rational(&a),
            rhs: format_rational(&b),
        })
    })
}

/// The formal inverse `iota` with `F(X, iota(X)) = 0`.
///
/// Solved degree by degree: if `F(X, g) = O(X^k)` then `g - F(X, g)` is
/// correct to degree `k`.
pub fn formal_inverse(f: &FormalGroupLaw) -> TruncSeries {
    let ring = f.ring().clone();
    let n = f.order();
    let x = TruncSeries::x(ring.clone(), n);
    let mut iota = x.neg();
    for _ in 0..n {
        let err = f.body.substitute(&x, &iota).expect("same ring");
        if err.is_zero() {
            break;
        }
        iota = iota.sub(&err).expect("same ring");
    }
    iota
}

/// `a +_F b := F(a, b)` for zero-constant series `a`, `b`.
pub fn f_add<S: SeriesLike>(f: &FormalGroupLaw, a: &S, b: &S) -> Result<S> {
    f.body.substitute(a, b)
}

/// `F(X, Y) = l^{-1}(l(X) + l(Y))` for a logarithm `l = X + ...` over Q.
pub fn fgl_from_log(l: &TruncSeries) -> Result<FormalGroupLaw> {
    if !l.ring().is_q_algebra() {
        return Err(Error::NotQAlgebra(l.ring().to_string()));
    }
    if !l.coeff(0).is_zero() {
        return Err(Error::NonzeroConstant(format_rational(&l.coeff(0))));
    }
    if !l.coeff(1).is_one() {
        return Err(Error::BadLinearCoefficient(format_rational(&l.coeff(1))));
    }
    let exp = l.reversion()?;
    let sum = BivariateSeries::from_x_series(l).add(&BivariateSeries::from_y_series(l))?;
    Ok(FormalGroupLaw {
        body: exp.substitute(&sum),
    })
}

/// `log(1 + X) = X - X^2/2 + X^3/3 - ...`, the logarithm of `F_m`.
pub fn multiplicative_log(order: usize) -> TruncSeries {
    let c = (0..=order)
        .map(|d| match d {
            0 => Scalar::zero(),
            _ => rat(if d % 2 == 1 { 1 } else { -1 }, d as i64),
        })
        .collect();
    TruncSeries::new(CoefficientRing::Rational, order, c).expect("rationals")
}

/// A logarithm `X + sum c_d X^d` with small random rational coefficients.
pub fn random_logarithm(order: usize, seed: u64) -> TruncSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (0..=order)
        .map(|d| match d {
            0 => Scalar::zero(),
            1 => Scalar::one(),
            _ => rat(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
        })
        .collect();
    TruncSeries::new(CoefficientRing::Rational, order, c).expect("rationals")
}

/// Sparse series in three variables truncated by total degree; only used to
/// expand both sides of the associativity axiom.
#[derive(Clone, Debug)]
struct TriSeries {
    ring: CoefficientRing,
    order: usize,
    terms: BTreeMap<[usize; 3], Scalar>,
}

impl TriSeries {
    fn var(ring: CoefficientRing, order: usize, which: usize) -> Self {
        let mut terms = BTreeMap::new();
        if order >= 1 {
            let mut e = [0; 3];
            e[which] = 1;
            terms.insert(e, ring.one());
        }
        TriSeries { ring, order, terms }
    }

    fn get(&self, e: &[usize; 3]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    fn first_difference(&self, other: &Self) -> Option<MonomialFailure> {
        let order = self.order.min(other.order);
        for d in 0..=order {
            for i in (0..=d).rev() {
                for j in (0..=d - i).rev() {
                    let e = [i, j, d - i - j];
                    let (a, b) = (self.get(&e), other.get(&e));
                    if a != b {
                        return Some(MonomialFailure {
                            exponents: e.to_vec(),
                            lhs: format_rational(&a),
                            rhs: format_rational(&b),
                        });
                    }
                }
            }
        }
        None
    }
}

impl SeriesLike for TriSeries {
    fn ring(&self) -> &CoefficientRing {
        &self.ring
    }
    fn order(&self) -> usize {
        self.order
    }
    fn with_order(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<usize>() <= order)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        TriSeries { ring: self.ring.clone(), order, terms }
    }
    fn zero_like(&self) -> Self {
        TriSeries { ring: self.ring.clone(), order: self.order, terms: BTreeMap::new() }
    }
    fn one_like(&self) -> Self {
        let mut t = self.zero_like();
        t.terms.insert([0; 3], self.ring.one());
        t
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.with_order(other.order);
        for (e, c) in &other.terms {
            if e.iter().sum::<usize>() > out.order {
                continue;
            }
            let v = self.ring.add(&out.get(e), c);
            if v.is_zero() {
                out.terms.remove(e);
            } else {
                out.terms.insert(*e, v);
            }
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<[usize; 3], Scalar> = BTreeMap::new();
        for (e1, a) in &self.terms {
            let d1: usize = e1.iter().sum();
            for (e2, b) in &other.terms {
                if d1 + e2.iter().sum::<usize>() > order {
                    continue;
                }
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                *acc.entry(e).or_insert_with(Scalar::zero) += a * b;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(e, c)| (e, self.ring.normalize(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TriSeries { ring: self.ring.clone(), order, terms }
    }
    fn scale(&self, c: &Scalar) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (*e, self.ring.mul(v, c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        TriSeries { ring: self.ring.clone(), order: self.order, terms }
    }
    fn has_zero_constant(&self) -> bool {
        self.get(&[0; 3]).is_zero()
    }
}
