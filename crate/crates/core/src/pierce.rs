//! Finite commutative rings: idempotents, the Boolean ring `B(k)`, the Pierce
//! bundle over its spectrum, and the local / von Neumann regular / exchange
//! predicates, all decided by enumeration.

use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ring any presentation may describe.
pub const MAX_RING_SIZE: usize = 4096;

/// Table rings up to this size get exhaustive associativity and
/// distributivity checks; larger ones are checked on sampled triples.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 256;
const SAMPLED_TRIPLES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Presentation {
    Cyclic(usize),
    /// Mixed radix; the last factor varies fastest.
    Product(Vec<usize>),
    Table {
        add: Vec<u16>,
        mul: Vec<u16>,
        neg: Vec<u16>,
        zero: usize,
        one: usize,
    },
}

/// A finite commutative unital ring with elements `0..size()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    name: String,
    size: usize,
    pres: Presentation,
}

/// On-disk table ring: `{size, add, mul}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRingJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

fn check_size(size: usize) -> Result<()> {
    if size > MAX_RING_SIZE {
        return Err(Error::InvalidFiniteRing(format!("{size} elements exceeds the cap of {MAX_RING_SIZE}")));
    }
    Ok(())
}

impl FiniteRing {
    /// `Z/n`, `n >= 2`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidFiniteRing(format!("Z/n needs n >= 2, got {n}")));
        }
        check_size(n)?;
        Ok(FiniteRing { name: format!("Z/{n}"), size: n, pres: Presentation::Cyclic(n) })
    }

    /// `Z/n_1 x ... x Z/n_r`.
    pub fn product(moduli: &[usize]) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|&n| n < 2) {
            return Err(Error::InvalidFiniteRing("product factors must be Z/n with n >= 2".into()));
        }
        let size = moduli.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
        check_size(size)?;
        let name = moduli.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join(" x ");
        Ok(FiniteRing { name, size, pres: Presentation::Product(moduli.to_vec()) })
    }

    /// A ring given by addition and multiplication tables; the ring axioms
    /// are checked here.
    pub fn from_tables(name: impl Into<String>, add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let size = add.len();
        if size == 0 {
            return Err(Error::InvalidFiniteRing("empty table".into()));
        }
        check_size(size)?;
        let flat = |t: &Vec<Vec<usize>>, what: &str| -> Result<Vec<u16>> {
            if t.len() != size || t.iter().any(|row| row.len() != size) {
                return Err(Error::InvalidFiniteRing(format!("{what} table is not {size} x {size}")));
            }
            t.iter()
                .flatten()
                .map(|&v| {
                    if v < size {
                        Ok(v as u16)
                    } else {
                        Err(Error::InvalidFiniteRing(format!("{what} table entry {v} out of range")))
                    }
                })
                .collect()
        };
        let add = flat(&add, "addition")?;
        let mul = flat(&mul, "multiplication")?;
        let ring = Self::from_flat_tables(name.into(), size, add, mul)?;
        ring.verify_axioms()?;
        Ok(ring)
    }

    pub fn from_json(j: &TableRingJson) -> Result<Self> {
        if j.add.len() != j.size {
            return Err(Error::InvalidFiniteRing(format!("size {} does not match table of {} rows", j.size, j.add.len())));
        }
        Self::from_tables(format!("table ring of order {}", j.size), j.add.clone(), j.mul.clone())
    }

    pub fn to_table_json(&self) -> TableRingJson {
        let rows = |f: &dyn Fn(usize, usize) -> usize| {
            (0..self.size).map(|a| (0..self.size).map(|b| f(a, b)).collect()).collect()
        };
        TableRingJson {
            size: self.size,
            add: rows(&|a, b| self.add(a, b)),
            mul: rows(&|a, b| self.mul(a, b)),
        }
    }

    /// Locates `0` and `1` and precomputes negation; no axiom checks.
    fn from_flat_tables(name: String, size: usize, add: Vec<u16>, mul: Vec<u16>) -> Result<Self> {
        let zero = (0..size)
            .find(|&z| (0..size).all(|a| add[z * size + a] as usize == a && add[a * size + z] as usize == a))
            .ok_or_else(|| Error::InvalidFiniteRing("no additive identity".into()))?;
        let one = (0..size)
            .find(|&o| (0..size).all(|a| mul[o * size + a] as usize == a && mul[a * size + o] as usize == a))
            .ok_or_else(|| Error::InvalidFiniteRing("no multiplicative identity".into()))?;
        let mut neg = vec![0u16; size];
        for a in 0..size {
            let b = (0..size)
                .find(|&b| add[a * size + b] as usize == zero)
                .ok_or_else(|| Error::InvalidFiniteRing(format!("element {a} has no additive inverse")))?;
            neg[a] = b as u16;
        }
        Ok(FiniteRing { name, size, pres: Presentation::Table { add, mul, neg, zero, one } })
    }

    fn verify_axioms(&self) -> Result<()> {
        let n = self.size;
        for a in 0..n {
            for b in a + 1..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(Error::InvalidFiniteRing(format!("addition is not commutative at ({a}, {b})")));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::InvalidFiniteRing(format!("multiplication is not commutative at ({a}, {b})")));
                }
            }
        }
        let triple_ok = |a: usize, b: usize, c: usize| -> Option<String> {
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                Some(format!("addition is not associative at ({a}, {b}, {c})"))
            } else if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Some(format!("multiplication is not associative at ({a}, {b}, {c})"))
            } else if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                Some(format!("distributivity fails at ({a}, {b}, {c})"))
            } else {
                None
            }
        };
        let bad = if n <= EXHAUSTIVE_AXIOM_LIMIT {
            (0..n).into_par_iter().find_map_first(|a| {
                (0..n).find_map(|b| (0..n).find_map(|c| triple_ok(a, b, c)))
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            (0..SAMPLED_TRIPLES)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .find_map(|(a, b, c)| triple_ok(a, b, c))
        };
        match bad {
            Some(msg) => Err(Error::InvalidFiniteRing(msg)),
            None => Ok(()),
        }
    }

    /// `Z/n[x]/(f)` for monic `f` given by its lower coefficients
    /// `f = x^d + c_(d-1) x^(d-1) + ... + c_0`.
    pub fn polynomial_quotient(n: usize, lower: &[usize]) -> Result<Self> {
        if n < 2 || lower.is_empty() {
            return Err(Error::InvalidFiniteRing("need n >= 2 and a monic modulus of degree >= 1".into()));
        }
        let d = lower.len();
        let size = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(n)).unwrap_or(usize::MAX);
        check_size(size)?;
        let digits = |mut x: usize| {
            let mut v = vec![0usize; d];
            for slot in v.iter_mut() {
                *slot = x % n;
                x /= n;
            }
            v
        };
        let index = |v: &[usize]| v.iter().rev().fold(0usize, |acc, &c| acc * n + c);
        let elems: Vec<Vec<usize>> = (0..size).map(digits).collect();
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                let s: Vec<usize> = (0..d).map(|i| (elems[a][i] + elems[b][i]) % n).collect();
                add[a * size + b] = index(&s) as u16;
                let mut p = vec![0usize; 2 * d - 1];
                for i in 0..d {
                    for j in 0..d {
                        p[i + j] = (p[i + j] + elems[a][i] * elems[b][j]) % n;
                    }
                }
                // x^k = -(lower) x^(k-d) for k >= d
                for k in (d..p.len()).rev() {
                    let c = p[k];
                    if c != 0 {
                        for (i, &l) in lower.iter().enumerate() {
                            p[k - d + i] = (p[k - d + i] + (n - (l % n)) * c) % n;
                        }
                        p[k] = 0;
                    }
                }
                mul[a * size + b] = index(&p[..d]) as u16;
            }
        }
        let poly = lower
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c % n != 0)
            .map(|(i, &c)| match i {
                0 => format!("{}", c % n),
                1 => format!("{}x", c % n),
                _ => format!("{}x^{i}", c % n),
            })
            .collect::<Vec<_>>();
        let modulus = std::iter::once(if d == 1 { "x".to_string() } else { format!("x^{d}") })
            .chain(poly)
            .collect::<Vec<_>>()
            .join(" + ");
        Self::from_flat_tables(format!("Z/{n}[x]/({modulus})"), size, add, mul)
    }

    /// The same ring as a table ring with elements relabelled by a seeded
    /// permutation.
    pub fn shuffled_table(&self, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..self.size).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..perm.len()).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut inv = vec![0usize; self.size];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let n = self.size;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = perm[self.add(inv[a], inv[b])] as u16;
                mul[a * n + b] = perm[self.mul(inv[a], inv[b])] as u16;
            }
        }
        Self::from_flat_tables(format!("{} (relabelled)", self.name), n, add, mul).expect("relabelling keeps the identities")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        match &self.pres {
            Presentation::Table { zero, .. } => *zero,
            _ => 0,
        }
    }

    pub fn one(&self) -> usize {
        match &self.pres {
            Presentation::Cyclic(_) => 1,
            Presentation::Product(m) => {
                let mut idx = 0;
                for &n in m {
                    idx = idx * n + 1;
                }
                idx
            }
            Presentation::Table { one, .. } => *one,
        }
    }

    fn components(&self, mut x: usize, moduli: &[usize]) -> Vec<usize> {
        let mut out = vec![0; moduli.len()];
        for (slot, &n) in out.iter_mut().zip(moduli).rev() {
            *slot = x % n;
            x /= n;
        }
        out
    }

    fn combine(moduli: &[usize], a: usize, b: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut stride = 1;
        for &n in moduli.iter().rev() {
            out += op(a % n, b % n, n) * stride;
            a /= n;
            b /= n;
            stride *= n;
        }
        out
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.pres {
            Presentation::Cyclic(n) => (a + b) % n,
            Presentation::Product(m) => Self::combine(m, a, b, |x, y, n| (x + y) % n),
            Presentation::Table { add, .. } => add[a * self.size + b] as usize,
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.pres {
            Presentation::Cyclic(n) => (a * b) % n,
            Presentation::Product(m) => Self::combine(m, a, b, |x, y, n| (x * y) % n),
            Presentation::Table { mul, .. } => mul[a * self.size + b] as usize,
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match &self.pres {
            Presentation::Cyclic(n) => (n - a) % n,
            Presentation::Product(m) => Self::combine(m, 0, a, |_, y, n| (n - y) % n),
            Presentation::Table { neg, .. } => neg[a] as usize,
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn format_element(&self, x: usize) -> String {
        match &self.pres {
            Presentation::Cyclic(_) => x.to_string(),
            Presentation::Product(m) => {
                let parts: Vec<String> = self.components(x, m).iter().map(|c| c.to_string()).collect();
                format!("({})", parts.join(", "))
            }
            Presentation::Table { .. } => format!("#{x}"),
        }
    }

    /// Units, as a membership mask.
    pub fn unit_mask(&self) -> Vec<bool> {
        let one = self.one();
        let mut mask = vec![false; self.size];
        for a in self.elements() {
            if !mask[a] {
                if let Some(b) = self.elements().find(|&b| self.mul(a, b) == one) {
                    mask[a] = true;
                    mask[b] = true;
                }
            }
        }
        mask
    }

    /// The principal ideal `aR` as a membership mask.
    pub fn principal_ideal(&self, a: usize) -> Vec<bool> {
        let mut mask = vec![false; self.size];
        for x in self.elements() {
            mask[self.mul(a, x)] = true;
        }
        mask
    }

    /// Is this the zero ring (`1 = 0`)?
    pub fn is_zero_ring(&self) -> bool {
        self.one() == self.zero()
    }

    /// Additive order of `1`; equals the size exactly when the ring is `Z/m`.
    pub fn characteristic(&self) -> usize {
        let one = self.one();
        let mut x = one;
        let mut k = 1;
        while x != self.zero() {
            x = self.add(x, one);
            k += 1;
        }
        k
    }

    /// `Z/m` when the ring is cyclic, otherwise a size description.
    pub fn describe(&self) -> String {
        if self.is_zero_ring() {
            "0".into()
        } else if self.characteristic() == self.size {
            format!("Z/{}", self.size)
        } else {
            format!("ring of order {} and characteristic {}", self.size, self.characteristic())
        }
    }

    pub fn is_field(&self) -> bool {
        !self.is_zero_ring() && self.unit_mask().iter().enumerate().all(|(a, &u)| u || a == self.zero())
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// All `e` with `e^2 = e`, in element order.
pub fn idempotents(r: &FiniteRing) -> Vec<usize> {
    r.elements().filter(|&e| r.mul(e, e) == e).collect()
}

/// `B(k)`: idempotents with `e (+) f = e + f - 2ef` and meet `ef`.
#[derive(Clone, Debug)]
pub struct BooleanRing<'a> {
    ring: &'a FiniteRing,
    elements: Vec<usize>,
}

impl<'a> BooleanRing<'a> {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn ring(&self) -> &FiniteRing {
        self.ring
    }

    pub fn sum(&self, e: usize, f: usize) -> usize {
        let r = self.ring;
        let ef = r.mul(e, f);
        r.sub(r.add(e, f), r.add(ef, ef))
    }

    pub fn meet(&self, e: usize, f: usize) -> usize {
        self.ring.mul(e, f)
    }

    /// Minimal nonzero idempotents.
    pub fn atoms(&self) -> Vec<usize> {
        let zero = self.ring.zero();
        self.elements
            .iter()
            .copied()
            .filter(|&e| e != zero && self.elements.iter().all(|&f| {
                let m = self.meet(e, f);
                m == zero || m == e
            }))
            .collect()
    }

    /// The Boolean ring axioms on every pair and triple.
    pub fn verify(&self) -> Result<()> {
        let zero = self.ring.zero();
        let member = |x: usize| self.elements.binary_search(&x).is_ok();
        let fail = |what: &str, xs: &[usize]| {
            let shown: Vec<String> = xs.iter().map(|&x| self.ring.format_element(x)).collect();
            Err(Error::InvalidFiniteRing(format!("Boolean ring: {what} fails at ({})", shown.join(", "))))
        };
        for &e in &self.elements {
            if self.sum(e, e) != zero {
                return fail("e (+) e = 0", &[e]);
            }
            if self.sum(e, zero) != e {
                return fail("e (+) 0 = e", &[e]);
            }
            for &f in &self.elements {
                let (s, m) = (self.sum(e, f), self.meet(e, f));
                if !member(s) || !member(m) {
                    return fail("closure", &[e, f]);
                }
                if s != self.sum(f, e) {
                    return fail("commutativity", &[e, f]);
                }
                for &g in &self.elements {
                    if self.sum(s, g) != self.sum(e, self.sum(f, g)) {
                        return fail("associativity", &[e, f, g]);
                    }
                    if self.meet(e, self.sum(f, g)) != self.sum(m, self.meet(e, g)) {
                        return fail("distributivity", &[e, f, g]);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds `B(R)` and checks the Boolean ring axioms exhaustively.
pub fn boolean_ring(r: &FiniteRing) -> Result<BooleanRing<'_>> {
    let b = BooleanRing { ring: r, elements: idempotents(r) };
    b.verify()?;
    Ok(b)
}

/// One stalk `k / P-bar` of the Pierce bundle.
#[derive(Clone, Debug)]
pub struct Stalk {
    /// The atom `a` whose annihilating idempotents form the prime `P`.
    pub atom: usize,
    pub ring: FiniteRing,
    /// Coset index of each element of `k`.
    pub projection: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PierceBundle {
    pub stalks: Vec<Stalk>,
}

impl PierceBundle {
    /// `x -> (x mod P-bar)_P`.
    pub fn section(&self, x: usize) -> Vec<usize> {
        self.stalks.iter().map(|s| s.projection[x]).collect()
    }
}

/// Stalks indexed by the atoms of `B(R)`; the section map is checked to be a
/// bijective ring homomorphism onto the product of stalks.
pub fn pierce_decompose(r: &FiniteRing) -> Result<PierceBundle> {
    let b = boolean_ring(r)?;
    let zero = r.zero();
    let one = r.one();
    let mut stalks = Vec::new();
    for atom in b.atoms() {
        let gen = r.sub(one, atom);
        let ideal = r.principal_ideal(gen);
        // P-bar as the union of ek over idempotents e killing the atom
        let mut union = vec![false; r.size()];
        for &e in b.elements().iter().filter(|&&e| r.mul(e, atom) == zero) {
            for (slot, hit) in union.iter_mut().zip(r.principal_ideal(e)) {
                *slot |= hit;
            }
        }
        if union != ideal {
            return Err(Error::InvalidFiniteRing(format!(
                "union of ek differs from (1 - a)k for atom {}",
                r.format_element(atom)
            )));
        }
        stalks.push(quotient(r, &ideal, atom)?);
    }
    let bundle = PierceBundle { stalks };
    verify_sections(r, &bundle)?;
    Ok(bundle)
}

fn quotient(r: &FiniteRing, ideal: &[bool], atom: usize) -> Result<Stalk> {
    let members: Vec<usize> = r.elements().filter(|&i| ideal[i]).collect();
    let mut projection = vec![usize::MAX; r.size()];
    let mut reps = Vec::new();
    for x in r.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &i in &members {
            projection[r.add(x, i)] = id;
        }
    }
    let m = reps.len();
    let mut add = vec![0u16; m * m];
    let mut mul = vec![0u16; m * m];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            add[i * m + j] = projection[r.add(a, b)] as u16;
            mul[i * m + j] = projection[r.mul(a, b)] as u16;
        }
    }
    let mut ring = FiniteRing::from_flat_tables(String::new(), m, add, mul)?;
    ring.name = ring.describe();
    Ok(Stalk { atom, ring, projection })
}

fn verify_sections(r: &FiniteRing, bundle: &PierceBundle) -> Result<()> {
    let sections: Vec<Vec<usize>> = r.elements().map(|x| bundle.section(x)).collect();
    let product: usize = bundle.stalks.iter().map(|s| s.ring.size()).product();
    let mut seen = std::collections::HashSet::with_capacity(r.size());
    if product != r.size() || !sections.iter().all(|s| seen.insert(s.clone())) {
        return Err(Error::InvalidFiniteRing("section map is not bijective".into()));
    }
    let ok = r.elements().into_par_iter().all(|x| {
        r.elements().all(|y| {
            bundle.stalks.iter().all(|s| {
                let (px, py) = (s.projection[x], s.projection[y]);
                s.projection[r.add(x, y)] == s.ring.add(px, py) && s.projection[r.mul(x, y)] == s.ring.mul(px, py)
            })
        })
    });
    let unital = bundle.stalks.iter().all(|s| s.projection[r.one()] == s.ring.one());
    if !ok || !unital {
        return Err(Error::InvalidFiniteRing("section map is not a ring homomorphism".into()));
    }
    Ok(())
}

/// The non-units form an ideal (a nonzero ring with a unique maximal ideal).
pub fn is_local(r: &FiniteRing) -> bool {
    if r.is_zero_ring() {
        return false;
    }
    let units = r.unit_mask();
    let non_units: Vec<usize> = r.elements().filter(|&a| !units[a]).collect();
    non_units.iter().all(|&a| non_units.iter().all(|&b| !units[r.add(a, b)]))
}

/// Every principal ideal `aR` equals `eR` for an idempotent `e`.
pub fn is_von_neumann_regular(r: &FiniteRing) -> bool {
    let gens: Vec<Vec<bool>> = idempotents(r).into_iter().map(|e| r.principal_ideal(e)).collect();
    r.elements().all(|a| {
        let ideal = r.principal_ideal(a);
        gens.iter().any(|g| *g == ideal)
    })
}

/// Every element is an idempotent plus a unit.
pub fn is_exchange(r: &FiniteRing) -> bool {
    let units = r.unit_mask();
    let idem = idempotents(r);
    r.elements().all(|a| idem.iter().any(|&e| units[r.sub(a, e)]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonkVerdict {
    pub exchange_check: bool,
    pub all_stalks_local: bool,
    pub agree: bool,
}

/// Compares the exchange search with "every Pierce stalk is local".
pub fn monk_verdict(r: &FiniteRing) -> Result<MonkVerdict> {
    let exchange_check = is_exchange(r);
    let all_stalks_local = pierce_decompose(r)?.stalks.iter().all(|s| is_local(&s.ring));
    Ok(MonkVerdict { exchange_check, all_stalks_local, agree: exchange_check == all_stalks_local })
}

/// Per-ring summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PierceReport {
    pub ring: String,
    pub size: usize,
    pub idempotent_count: usize,
    pub atoms: Vec<String>,
    pub stalks: Vec<String>,
    pub local: bool,
    pub vnr: bool,
    pub exchange: bool,
    pub stalks_local: bool,
    pub stalks_fields: bool,
    pub monk_agree: bool,
    pub pierce_vnr_agree: bool,
}

pub fn analyze(r: &FiniteRing) -> Result<PierceReport> {
    let bundle = pierce_decompose(r)?;
    let vnr = is_von_neumann_regular(r);
    let exchange = is_exchange(r);
    let stalks_local = bundle.stalks.iter().all(|s| is_local(&s.ring));
    let stalks_fields = bundle.stalks.iter().all(|s| s.ring.is_field());
    Ok(PierceReport {
        ring: r.name().to_string(),
        size: r.size(),
        idempotent_count: idempotents(r).len(),
        atoms: bundle.stalks.iter().map(|s| r.format_element(s.atom)).collect(),
        stalks: bundle.stalks.iter().map(|s| s.ring.name().to_string()).collect(),
        local: is_local(r),
        vnr,
        exchange,
        stalks_local,
        stalks_fields,
        monk_agree: exchange == stalks_local,
        pierce_vnr_agree: vnr == stalks_fields,
    })
}

/// Aggregate of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rings: usize,
    pub monk_agree: usize,
    pub pierce_vnr_agree: usize,
    pub exchange: usize,
    pub vnr: usize,
}

impl SweepSummary {
    pub fn from_reports(reports: &[PierceReport]) -> Self {
        let count = |f: fn(&PierceReport) -> bool| reports.iter().filter(|r| f(r)).count();
        SweepSummary {
            rings: reports.len(),
            monk_agree: count(|r| r.monk_agree),
            pierce_vnr_agree: count(|r| r.pierce_vnr_agree),
            exchange: count(|r| r.exchange),
            vnr: count(|r| r.vnr),
        }
    }
}

/// Reports for `Z/n`, `2 <= n <= max_n`, in order of `n`.
pub fn sweep_cyclic(max_n: usize) -> Result<Vec<PierceReport>> {
    (2..=max_n)
        .into_par_iter()
        .map(|n| analyze(&FiniteRing::cyclic(n)?))
        .collect()
}

/// `count` seeded rings mixing products of `Z/n`, polynomial quotients and
/// relabelled table copies of both.
pub fn random_rings(count: usize, seed: u64, max_size: usize) -> Vec<FiniteRing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let ring = match rng.gen_range(0..3) {
            0 => {
                let factors = rng.gen_range(1..=3);
                let moduli: Vec<usize> = (0..factors).map(|_| rng.gen_range(2..=12)).collect();
                FiniteRing::product(&moduli)
            }
            _ => {
                let n = rng.gen_range(2..=6);
                let d = rng.gen_range(1..=3);
                let lower: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
                FiniteRing::polynomial_quotient(n, &lower)
            }
        };
        let Ok(ring) = ring else { continue };
        if ring.size() > max_size {
            continue;
        }
        let ring = if rng.gen_bool(0.5) { ring.shuffled_table(rng.gen()) } else { ring };
        out.push(ring);
    }
    out
}

/// Number of distinct prime factors.
pub fn omega(mut n: usize) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    count + usize::from(n > 1)
}

pub fn is_squarefree(n: usize) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// `gcd`-based helper for `Z/n` stalk sizes: the prime-power parts of `n`.
pub fn prime_power_parts(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    debug_assert!(out.iter().all(|a| out.iter().all(|b| a == b || a.gcd(b) == 1)));
    out
}
