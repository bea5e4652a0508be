//! Mutation harness comparing the `F`-derivation and `F`-weak associativity
//! checkers, and iterativity against the additive law.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_f_derivation, check_iterative, translation_derivation, CarrierElem, HSDerivation, PolyCarrier, VertexStructure};
use crate::error::Result;
use crate::fgl::FormalGroupLaw;
use crate::report::Verdict;

/// `count` single-point perturbations `D_m(t) += delta` with `m >= 2`,
/// cycling `m` over `2..=depth` and `delta` over `1, t, 1 + t`.
///
/// `m = 1` is left out on purpose: rescaling `D_1(t)` by a constant can
/// produce another genuine `F`-derivation.
pub fn standard_mutations(carrier: &PolyCarrier, depth: usize, count: usize) -> Vec<(usize, CarrierElem)> {
    let deltas = [carrier.one(), carrier.t_pow(1), carrier.from_ints(&[1, 1])];
    let span = depth.saturating_sub(1).max(1);
    (0..count)
        .map(|k| (2 + k % span, deltas[(k / span) % deltas.len()].clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCase {
    pub fgl: String,
    pub derivation: String,
    pub f_derivation: Verdict,
    pub weak_associativity: Verdict,
    pub agree: bool,
}

pub struct HarnessConfig {
    pub degree_cap: usize,
    pub depth: usize,
    pub mutations: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            degree_cap: 12,
            depth: 8,
            mutations: 20,
            samples: 2,
            seed: 0,
        }
    }
}

/// For every law: the translation derivation and its mutations, each run
/// through both checkers. Output order follows the input order.
pub fn equivalence_harness(laws: &[(String, FormalGroupLaw)], cfg: &HarnessConfig) -> Result<Vec<EquivalenceCase>> {
    let mut jobs: Vec<(usize, String, HSDerivation)> = Vec::new();
    for (idx, (_, f)) in laws.iter().enumerate() {
        let carrier = PolyCarrier::new(f.ring().clone(), cfg.degree_cap);
        let base = translation_derivation(f, &carrier, cfg.depth)?;
        let mutated = standard_mutations(&carrier, cfg.depth, cfg.mutations)
            .iter()
            .enumerate()
            .map(|(k, (m, delta))| {
                let label = format!("mutation{k}: D_{m}(t) += {delta}");
                Ok((idx, label, base.perturb_generator(*m, delta)?))
            })
            .collect::<Result<Vec<_>>>()?;
        jobs.push((idx, "translation".into(), base));
        jobs.extend(mutated);
    }
    jobs.into_par_iter()
        .map(|(idx, label, d)| {
            let (name, f) = &laws[idx];
            let fd = check_f_derivation(&d, f, cfg.samples, cfg.seed)?.verdict;
            let wa = VertexStructure::new(d, Some(f.clone()))
                .check_f_weak_associativity_on_generators(cfg.samples, cfg.seed)
                .verdict;
            Ok(EquivalenceCase {
                fgl: name.clone(),
                derivation: label,
                f_derivation: fd,
                weak_associativity: wa,
                agree: fd == wa,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterativityCase {
    pub derivation: String,
    pub iterative: Verdict,
    pub additive_f_derivation: Verdict,
    pub agree: bool,
}

/// Runs `check_iterative` and `check_f_derivation(., F_a)` on each derivation.
pub fn iterativity_harness(derivations: &[(String, HSDerivation)], samples: usize, seed: u64) -> Result<Vec<IterativityCase>> {
    derivations
        .par_iter()
        .map(|(label, d)| {
            let fa = FormalGroupLaw::additive(d.carrier().base().clone(), d.depth().max(1));
            let it = check_iterative(d, samples, seed).verdict;
            let fd = check_f_derivation(d, &fa, samples, seed)?.verdict;
            Ok(IterativityCase {
                derivation: label.clone(),
                iterative: it,
                additive_f_derivation: fd,
                agree: it == fd,
            })
        })
        .collect()
}
