use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use vertexkit::exact_algebra::{format_rational, parse_rational};
use vertexkit::fgl::{check_fgl_axioms, fgl_from_log, formal_inverse, multiplicative_log, random_logarithm, FglJson, FormalGroupLaw};
use vertexkit::hs_vertex::harness::{equivalence_harness, HarnessConfig};
use vertexkit::hs_vertex::{
    check_f_derivation, check_iterative, default_depth, translation_derivation, HSDerivation, PolyCarrier, VertexStructure,
};
use vertexkit::lattice_theta::{
    lattice_character, theta_genus1, theta_genus2, theta_genus2_specialize, Lattice, LatticeJson, DEFAULT_PAIR_BUDGET,
};
use vertexkit::mlde::{
    frobenius_solve, indicial_polynomial, mlde_from_exponents, residual, scan_characters, MonicMlde, ScanConfig,
};
use vertexkit::modular_forms::{delta, eisenstein, eta_power, evaluate, j_invariant, serre_derivative, QExpansion};
use vertexkit::pierce::{analyze, omega, is_squarefree, sweep_cyclic, FiniteRing, SweepSummary, TableRingJson};
use vertexkit::{BivariateSeries, CoefficientRing, Scalar, TruncSeries};

use crate::args::{
    BuiltinLaw, DerivationKind, FglCmd, FglSource, GlobalArgs, HsCmd, HsSetup, LatticeArg, MfCmd, MldeCmd, MldeParams,
    PierceCmd, ThetaCmd,
};
use crate::{usage, CliError, CliResult, Output};

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad JSON in {}: {e}", path.display())))
}

fn coeff_ring(g: &GlobalArgs) -> CliResult<CoefficientRing> {
    g.ring
        .as_deref()
        .unwrap_or("Q")
        .parse()
        .map_err(|e: vertexkit::Error| CliError::Usage(e.to_string()))
}

fn rational(s: &str) -> CliResult<Scalar> {
    parse_rational(s.trim()).map_err(|e| CliError::Usage(e.to_string()))
}

fn rational_list(s: &str) -> CliResult<Vec<Scalar>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(rational).collect()
}

fn int_list(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("bad integer {p:?}: {e}"))))
        .collect()
}

fn series_rows(q: &QExpansion) -> Vec<Vec<String>> {
    q.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let e = q.leading_exponent() + Scalar::from_integer((n as i64).into());
            vec![format_rational(&e), format_rational(c)]
        })
        .collect()
}

fn series_output(label: &str, q: &QExpansion) -> Output {
    Output::json(json!({ "series": label, "expansion": q.to_json() }))
        .with_text(format!("{label} = {q}"))
        .with_csv(&["exponent", "coefficient"], series_rows(q))
}

fn trunc_rows(s: &TruncSeries) -> Vec<Vec<String>> {
    s.coeffs().iter().enumerate().map(|(n, c)| vec![n.to_string(), format_rational(c)]).collect()
}

// ---------------------------------------------------------------- fgl

fn fgl_order(g: &GlobalArgs) -> usize {
    g.order.or(g.terms).unwrap_or(12)
}

fn law_body(src: &FglSource, g: &GlobalArgs) -> CliResult<(String, BivariateSeries)> {
    let ring = coeff_ring(g)?;
    let order = fgl_order(g);
    if let Some(kind) = src.builtin {
        let f = match kind {
            BuiltinLaw::Additive => FormalGroupLaw::additive(ring, order),
            BuiltinLaw::Multiplicative => FormalGroupLaw::multiplicative(ring, order),
        };
        let name = if kind == BuiltinLaw::Additive { "F_a" } else { "F_m" };
        return Ok((name.into(), f.body().clone()));
    }
    if let Some(path) = &src.file {
        let j: FglJson = read_json(path)?;
        let ring: CoefficientRing = j.ring.parse().map_err(|e: vertexkit::Error| CliError::Usage(e.to_string()))?;
        let terms = j
            .monomials
            .iter()
            .map(|(i, k, c)| Ok((*i, *k, rational(c)?)))
            .collect::<CliResult<Vec<_>>>()?;
        return Ok((path.display().to_string(), BivariateSeries::from_terms(ring, j.order, &terms)?));
    }
    if let Some(seed) = src.log_seed {
        if ring != CoefficientRing::Rational {
            return usage("--log-seed laws are defined over Q");
        }
        let f = fgl_from_log(&random_logarithm(order, seed))?;
        return Ok((format!("log_seed_{seed}"), f.body().clone()));
    }
    usage("give one of --builtin, --file, --log-seed")
}

fn load_law(src: &FglSource, g: &GlobalArgs) -> CliResult<(String, FormalGroupLaw)> {
    let (name, body) = law_body(src, g)?;
    Ok((name, FormalGroupLaw::new(body)?))
}

pub fn fgl(cmd: FglCmd, g: &GlobalArgs) -> CliResult<Output> {
    match cmd {
        FglCmd::Verify(src) => {
            let (name, body) = law_body(&src, g)?;
            let report = check_fgl_axioms(&body);
            let verdict = if report.passed() { "pass" } else { "fail" };
            let text = format!("{name} over {} to order {}: {verdict}", body.ring(), body.order());
            Ok(Output::json(json!({
                "law": name,
                "ring": body.ring().to_string(),
                "report": report,
                "verdict": verdict,
            }))
            .with_text(text))
        }
        FglCmd::Inverse(src) => {
            let (name, f) = load_law(&src, g)?;
            let inv = formal_inverse(&f);
            Ok(Output::json(json!({
                "law": name,
                "ring": f.ring().to_string(),
                "order": inv.order(),
                "coefficients": inv.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            }))
            .with_text(format!("iota(X) = {inv}"))
            .with_csv(&["degree", "coefficient"], trunc_rows(&inv)))
        }
        FglCmd::FromLog { log, log_seed, multiplicative } => {
            let order = fgl_order(g);
            let l = if multiplicative {
                multiplicative_log(order)
            } else if let Some(seed) = log_seed {
                random_logarithm(order, seed)
            } else if let Some(list) = log {
                let mut c = vec![Scalar::from_integer(0.into())];
                c.extend(rational_list(&list)?);
                c.resize(order + 1, Scalar::from_integer(0.into()));
                c.truncate(order + 1);
                TruncSeries::new(CoefficientRing::Rational, order, c)?
            } else {
                return usage("give one of --log, --log-seed, --multiplicative");
            };
            let f = fgl_from_log(&l)?;
            Ok(Output::json(json!({ "log": l.coeffs().iter().map(format_rational).collect::<Vec<_>>(), "law": f.to_json() }))
                .with_text(format!("F(X, Y) = {}", f.body())))
        }
    }
}

// ---------------------------------------------------------------- hs

struct HsContext {
    law: FormalGroupLaw,
    derivation: HSDerivation,
    samples: usize,
    seed: u64,
}

fn hs_context(s: &HsSetup, g: &GlobalArgs) -> CliResult<HsContext> {
    let (_, law) = load_law(&s.law, g)?;
    let carrier = PolyCarrier::new(law.ring().clone(), s.degree_cap);
    let depth = s.depth.unwrap_or_else(|| default_depth(&carrier, law.order()));
    let mut d = match s.derivation {
        DerivationKind::Zero => HSDerivation::zero_tail(carrier.clone(), depth),
        DerivationKind::Translation => {
            let base = match s.translate_by {
                Some(BuiltinLaw::Additive) => FormalGroupLaw::additive(law.ring().clone(), law.order()),
                Some(BuiltinLaw::Multiplicative) => FormalGroupLaw::multiplicative(law.ring().clone(), law.order()),
                None => law.clone(),
            };
            translation_derivation(&base, &carrier, depth)?
        }
    };
    if let Some(m) = s.mutate_m {
        let delta = carrier.from_ints(&int_list(&s.mutate_delta)?);
        d = d.perturb_generator(m, &delta)?;
    }
    Ok(HsContext { law, derivation: d, samples: s.samples, seed: g.seed.unwrap_or(0) })
}

pub fn hs(cmd: HsCmd, g: &GlobalArgs) -> CliResult<Output> {
    let report_out = |r: vertexkit::report::Report| {
        let text = match &r.first_failure {
            None => format!("{}: pass", r.check),
            Some(f) => format!("{}: fail at {:?} on {}: {} vs {}", r.check, f.indices, f.element, f.lhs, f.rhs),
        };
        Output::json(r).with_text(text)
    };
    match cmd {
        HsCmd::CheckIterative(s) => {
            let c = hs_context(&s, g)?;
            Ok(report_out(check_iterative(&c.derivation, c.samples, c.seed)))
        }
        HsCmd::CheckFDerivation(s) => {
            let c = hs_context(&s, g)?;
            Ok(report_out(check_f_derivation(&c.derivation, &c.law, c.samples, c.seed)?))
        }
        HsCmd::CheckAssoc(s) => {
            let c = hs_context(&s, g)?;
            let v = VertexStructure::new(c.derivation, Some(c.law));
            Ok(report_out(v.check_f_weak_associativity_on_generators(c.samples, c.seed)))
        }
        HsCmd::Conjecture34 { setup, n_max } => {
            let c = hs_context(&setup, g)?;
            let v = VertexStructure::new(c.derivation, Some(c.law));
            let t = v.carrier().t_pow(1);
            let r = v.check_eq34_conjecture(&t, &t, &t, n_max);
            let text = match r.least_n {
                Some(n) => format!("exploratory: identity holds from multiplier exponent {n}"),
                None => format!("exploratory: no multiplier exponent up to {n_max} works"),
            };
            Ok(Output::json(json!({ "exploratory": true, "report": r })).with_text(text))
        }
        HsCmd::Harness { degree_cap, depth, mutations, samples, log_seeds } => {
            let order = fgl_order(g).max(depth);
            let q = CoefficientRing::Rational;
            let mut laws = vec![
                ("F_a".to_string(), FormalGroupLaw::additive(q.clone(), order)),
                ("F_m".to_string(), FormalGroupLaw::multiplicative(q, order)),
            ];
            for s in &log_seeds {
                laws.push((format!("log_seed_{s}"), fgl_from_log(&random_logarithm(order, *s))?));
            }
            let cfg = HarnessConfig { degree_cap, depth, mutations, samples, seed: g.seed.unwrap_or(0) };
            let cases = equivalence_harness(&laws, &cfg)?;
            let agree = cases.iter().filter(|c| c.agree).count();
            let rows = cases
                .iter()
                .map(|c| {
                    vec![
                        c.fgl.clone(),
                        c.derivation.clone(),
                        format!("{:?}", c.f_derivation).to_lowercase(),
                        format!("{:?}", c.weak_associativity).to_lowercase(),
                        c.agree.to_string(),
                    ]
                })
                .collect();
            Ok(Output::json(json!({ "cases": cases, "total": cases.len(), "agree": agree }))
                .with_text(format!("{agree}/{} cases agree", cases.len()))
                .with_csv(&["fgl", "derivation", "f_derivation", "weak_associativity", "agree"], rows))
        }
    }
}

// ---------------------------------------------------------------- mf

fn mf_terms(g: &GlobalArgs) -> usize {
    g.terms.or(g.order).unwrap_or(10)
}

/// Named form and its weight.
fn named_form(name: &str, n: usize) -> CliResult<(QExpansion, Option<i64>)> {
    let lower = name.trim().to_ascii_lowercase();
    Ok(match lower.as_str() {
        "e2" => (eisenstein(2, n)?, Some(2)),
        "e4" => (eisenstein(4, n)?, Some(4)),
        "e6" => (eisenstein(6, n)?, Some(6)),
        "delta" => (delta(n), Some(12)),
        "j" => (j_invariant(n as i64)?, Some(0)),
        _ => match lower.strip_prefix("eta^").or_else(|| (lower == "eta").then_some("1")) {
            Some(r) => {
                let r: i64 = r.parse().map_err(|_| CliError::Usage(format!("bad eta power in {name:?}")))?;
                let w = (r % 2 == 0).then_some(r / 2);
                (eta_power(r, n), w)
            }
            None => return usage(format!("unknown form {name:?} (E2, E4, E6, delta, j, eta^r)")),
        },
    })
}

pub fn mf(cmd: MfCmd, g: &GlobalArgs) -> CliResult<Output> {
    let n = mf_terms(g);
    match cmd {
        MfCmd::Eisenstein { weight } => Ok(series_output(&format!("E{weight}"), &eisenstein(weight, n)?)),
        MfCmd::Eta { power } => Ok(series_output(&format!("eta^{power}"), &eta_power(power, n))),
        MfCmd::J => Ok(series_output("j", &j_invariant(n as i64)?)),
        MfCmd::Serre { form } => {
            let (f, w) = named_form(&form, n)?;
            let Some(k) = w else {
                return usage(format!("{form} has no integral weight"));
            };
            Ok(series_output(&format!("D_{k} {form}"), &serre_derivative(&f, k)))
        }
        MfCmd::Eval { form, tau } => {
            let (f, _) = named_form(&form, n)?;
            let parts: Vec<f64> = tau
                .split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("bad tau {tau:?}: {e}"))))
                .collect::<CliResult<_>>()?;
            let [re, im] = parts[..] else {
                return usage("--tau expects `re,im`");
            };
            let e = evaluate(&f, Complex64::new(re, im), n)?;
            Ok(Output::json(json!({ "form": form, "tau": [re, im], "terms": n, "value": e }))
                .with_text(format!("{form}({re} + {im}i) = {} + {}i", e.re, e.im)))
        }
    }
}

// ---------------------------------------------------------------- mlde

fn build_mlde(p: &MldeParams, g: &GlobalArgs) -> CliResult<MonicMlde> {
    let order = g.order.unwrap_or(2);
    if let Some(list) = &p.exponents {
        return Ok(mlde_from_exponents(order, &rational_list(list)?)?);
    }
    Ok(MonicMlde::new(order, rational(&p.kappa)?, rational(&p.lambda)?)?)
}

fn mlde_json(m: &MonicMlde) -> Value {
    json!({
        "order": m.order(),
        "kappa": format_rational(m.kappa()),
        "lambda": format_rational(m.lambda()),
    })
}

pub fn mlde(cmd: MldeCmd, g: &GlobalArgs) -> CliResult<Output> {
    match cmd {
        MldeCmd::Indicial { params } => {
            let m = build_mlde(&params, g)?;
            let p = indicial_polynomial(&m);
            Ok(Output::json(json!({
                "mlde": mlde_json(&m),
                "polynomial": p.to_string(),
                "coefficients": p.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
                "root_sum": format_rational(&m.exponent_sum()),
            }))
            .with_text(p.to_string()))
        }
        MldeCmd::Solve { params, exponent } => {
            let m = build_mlde(&params, g)?;
            let s = frobenius_solve(&m, &rational(&exponent)?, g.terms.unwrap_or(10))?;
            let text = format!("{}{}", s.series, if s.resonance { " (resonance: truncated)" } else { "" });
            Ok(Output::json(json!({ "mlde": mlde_json(&m), "solution": s.to_json() }))
                .with_text(text)
                .with_csv(&["exponent", "coefficient"], series_rows(&s.series)))
        }
        MldeCmd::Residual { params, exponent, coeffs } => {
            let m = build_mlde(&params, g)?;
            let x = rational(&exponent)?;
            let u = match coeffs {
                Some(list) => QExpansion::new(x, rational_list(&list)?, None),
                None => frobenius_solve(&m, &x, g.terms.unwrap_or(10))?.series,
            };
            let r = residual(&m, &u);
            Ok(Output::json(json!({ "mlde": mlde_json(&m), "input": u.to_json(), "residual": r.to_json(), "zero": r.is_zero() }))
                .with_text(format!("residual = {r}"))
                .with_csv(&["exponent", "coefficient"], series_rows(&r)))
        }
        MldeCmd::Scan { dmax, lower, growth_bound, all } => {
            let cfg = ScanConfig {
                order: g.order.unwrap_or(2),
                max_denominator: dmax,
                lower: rational(&lower)?,
                terms: g.terms.unwrap_or(40),
                negative_vacuum: true,
                growth_bound,
            };
            let cands: Vec<_> = scan_characters(&cfg)?.into_iter().filter(|c| all || c.survived()).collect();
            let lines: Vec<Value> = cands.iter().map(|c| serde_json::to_value(c.to_json()).expect("serializable")).collect();
            let join = |v: &[Scalar]| v.iter().map(format_rational).collect::<Vec<_>>().join(";");
            let rows = cands
                .iter()
                .map(|c| {
                    let head = &c.vacuum_coefficients[..c.vacuum_coefficients.len().min(20)];
                    vec![
                        format_rational(&c.central_charge),
                        join(&c.conformal_weights),
                        join(head),
                        if c.survived() { "positive-integral".into() } else { "rejected".into() },
                    ]
                })
                .collect();
            let text = cands
                .iter()
                .map(|c| format!("c = {:>6}  h = [{}]  exponents = [{}]", format_rational(&c.central_charge), join(&c.conformal_weights), join(&c.exponents)))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::json(Value::Array(lines.clone()))
                .with_lines(lines)
                .with_text(text)
                .with_csv(&["c", "h_list", "first_20_coeffs_of_vacuum", "verdict"], rows))
        }
    }
}

// ---------------------------------------------------------------- pierce

/// `Z/n` or products written `Z/2xZ/3` (also `Z/2 x Z/3`).
pub fn parse_finite_ring(spec: &str) -> CliResult<FiniteRing> {
    let factors: Vec<usize> = spec
        .split(['x', 'X', '*'])
        .map(|f| {
            let f = f.trim();
            f.strip_prefix("Z/")
                .and_then(|n| n.trim().parse::<usize>().ok())
                .ok_or_else(|| CliError::Usage(format!("bad ring factor {f:?} in {spec:?} (expected Z/n)")))
        })
        .collect::<CliResult<_>>()?;
    let r = match factors[..] {
        [n] => FiniteRing::cyclic(n),
        _ => FiniteRing::product(&factors),
    };
    r.map_err(|e| CliError::Usage(e.to_string()))
}

pub fn pierce(cmd: PierceCmd, g: &GlobalArgs) -> CliResult<Output> {
    match cmd {
        PierceCmd::Analyze { table } => {
            let r = match (&table, &g.ring) {
                (Some(path), _) => FiniteRing::from_json(&read_json::<TableRingJson>(path)?)?,
                (None, Some(spec)) => parse_finite_ring(spec)?,
                (None, None) => return usage("give --ring Z/n or --table PATH"),
            };
            let rep = analyze(&r)?;
            let text = format!(
                "{}: {} idempotents, stalks [{}], local {}, vnr {}, exchange {}, monk agree {}",
                rep.ring,
                rep.idempotent_count,
                rep.stalks.join(", "),
                rep.local,
                rep.vnr,
                rep.exchange,
                rep.monk_agree
            );
            let row = vec![
                rep.ring.clone(),
                rep.idempotent_count.to_string(),
                rep.stalks.join(";"),
                rep.local.to_string(),
                rep.vnr.to_string(),
                rep.exchange.to_string(),
                rep.monk_agree.to_string(),
            ];
            Ok(Output::json(&rep)
                .with_text(text)
                .with_csv(&["ring", "idempotent_count", "stalks", "local", "vnr", "exchange", "monk_agree"], vec![row]))
        }
        PierceCmd::Sweep { max_n } => {
            if max_n < 2 {
                return usage("--max-n must be at least 2");
            }
            let reports = sweep_cyclic(max_n)?;
            let summary = SweepSummary::from_reports(&reports);
            let idempotent_law = reports.iter().zip(2..).filter(|(r, n)| r.idempotent_count == 1 << omega(*n)).count();
            let squarefree_law = reports.iter().zip(2..).filter(|(r, n)| r.vnr == is_squarefree(*n)).count();
            let rows = reports
                .iter()
                .map(|r| {
                    vec![
                        r.ring.clone(),
                        r.idempotent_count.to_string(),
                        r.stalks.join(";"),
                        r.vnr.to_string(),
                        r.exchange.to_string(),
                        r.monk_agree.to_string(),
                    ]
                })
                .collect();
            let text = format!(
                "{} rings: Monk agreement {}, vnr iff field stalks {}, 2^omega idempotents {}, vnr iff squarefree {}",
                summary.rings, summary.monk_agree, summary.pierce_vnr_agree, idempotent_law, squarefree_law
            );
            Ok(Output::json(json!({
                "summary": summary,
                "idempotent_count_is_2_pow_omega": idempotent_law,
                "vnr_iff_squarefree": squarefree_law,
                "reports": reports,
            }))
            .with_text(text)
            .with_csv(&["ring", "idempotent_count", "stalks", "vnr", "exchange", "monk_agree"], rows))
        }
    }
}

// ---------------------------------------------------------------- theta

fn load_lattice(a: &LatticeArg) -> CliResult<Lattice> {
    if let Some(path) = &a.lattice_file {
        return Ok(Lattice::from_json(&read_json::<LatticeJson>(path)?)?);
    }
    match &a.lattice {
        Some(name) => Ok(Lattice::builtin(name.parse().map_err(|e: vertexkit::Error| CliError::Usage(e.to_string()))?)),
        None => usage("give --lattice NAME or --lattice-file PATH"),
    }
}

pub fn theta(cmd: ThetaCmd, g: &GlobalArgs) -> CliResult<Output> {
    let n = g.terms.or(g.order).unwrap_or(5);
    match cmd {
        ThetaCmd::Genus1 { lattice } => {
            let l = load_lattice(&lattice)?;
            Ok(series_output(&format!("theta_{}", l.name()), &theta_genus1(&l, n)?))
        }
        ThetaCmd::Character { lattice } => {
            let l = load_lattice(&lattice)?;
            Ok(series_output(&format!("theta_{} / eta^{}", l.name(), l.rank()), &lattice_character(&l, n)?))
        }
        ThetaCmd::Genus2 { lattice, a_max, b_max, budget } => {
            let l = load_lattice(&lattice)?;
            let t = theta_genus2(&l, a_max, b_max, budget)?;
            let spec = theta_genus2_specialize(&t);
            let violation = t.symmetry_violation();
            let rows = t
                .coeffs
                .iter()
                .map(|(&(a, b, c), &k)| vec![a.to_string(), b.to_string(), c.to_string(), k.to_string()])
                .collect();
            let text = format!(
                "{} entries; symmetries {}; diagonal specialisation {}",
                t.coeffs.len(),
                if violation.is_none() { "hold" } else { "FAIL" },
                if spec.agree { "agrees" } else { "FAILS" }
            );
            Ok(Output::json(json!({
                "lattice": l.name(),
                "table": t.to_json(),
                "symmetry_violation": violation,
                "specialization": spec,
            }))
            .with_text(text)
            .with_csv(&["a", "b", "c", "count"], rows))
        }
        ThetaCmd::Compare { lattice, other, a_max, b_max } => {
            let l1 = load_lattice(&lattice)?;
            let l2 = load_lattice(&LatticeArg { lattice: Some(other), lattice_file: None })?;
            let (t1, t2) = (theta_genus1(&l1, n)?, theta_genus1(&l2, n)?);
            let (g1, g2) = (
                theta_genus2(&l1, a_max, b_max, DEFAULT_PAIR_BUDGET)?,
                theta_genus2(&l2, a_max, b_max, DEFAULT_PAIR_BUDGET)?,
            );
            let genus1_equal = t1 == t2;
            let genus2_equal = g1 == g2;
            Ok(Output::json(json!({
                "lattices": [l1.name(), l2.name()],
                "terms": n,
                "bounds": [a_max, b_max],
                "genus1": [t1.to_json(), t2.to_json()],
                "genus1_equal": genus1_equal,
                "genus2_equal": genus2_equal,
            }))
            .with_text(format!(
                "{} vs {}: genus one to q^{n} {}, genus two at ({a_max}, {b_max}) {}",
                l1.name(),
                l2.name(),
                if genus1_equal { "equal" } else { "differ" },
                if genus2_equal { "equal" } else { "differ" }
            )))
        }
    }
}
