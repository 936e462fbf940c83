//! Binomial systems and the ideals they generate.
//!
//! A binomial system `(A, C, rho)` consists of two disjoint sets of
//! degree-`d` exponent vectors and a displacement `rho` such that both
//! `A u C` and `A u (C + rho)` are Borel sets. It generates the ideal
//! spanned by the monomials of `A` and the binomials `X^c - X^{c+rho}`.
//! The classification admissible / good / Mall controls which closed
//! forms hold for Groebner bases, saturations, and initial ideals; each
//! closed form here is certified against the generic computation.

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::borel::{
    borel_closure, ghl_normal_form, growth_vector, height_vector, is_ghl, is_lex_set, roots,
    BorelSet,
};
use crate::error::{Error, Result};
use crate::orders::{cmp_hlex, exponents_of_degree, ExponentVec, IntVec, TermOrderSpec};
use crate::polyalg::{
    buchberger, initial_ideal, saturate_wrt_last, IdealGB, MonomialIdeal, Poly,
};

/// Classification of a binomial system. Each class contains the next:
/// every Mall system is good, every good system admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemClass {
    Plain,
    Admissible,
    Good,
    Mall,
}

/// A validated binomial system of degree `d` in `n` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct BinomialSystem {
    n: usize,
    d: u32,
    a: BTreeSet<ExponentVec>,
    c: Vec<ExponentVec>,
    rho: IntVec,
}

impl BinomialSystem {
    /// Checks the defining conditions: `C + rho` stays in the degree
    /// component (forcing `rho` to sum to zero), the three sets are
    /// pairwise disjoint, and both unions are Borel.
    pub fn new(
        n: usize,
        d: u32,
        a: BTreeSet<ExponentVec>,
        c: BTreeSet<ExponentVec>,
        rho: IntVec,
    ) -> Result<Self> {
        if rho.len() != n {
            return Err(Error::InvalidSystem(format!(
                "displacement has length {}, expected {n}",
                rho.len()
            )));
        }
        if rho.sum() != 0 {
            return Err(Error::InvalidSystem(
                "displacement entries must sum to zero".into(),
            ));
        }
        for e in a.iter().chain(c.iter()) {
            if e.len() != n {
                return Err(Error::InvalidSystem("wrong exponent length".into()));
            }
            if e.degree() != d {
                return Err(Error::InvalidSystem("wrong exponent degree".into()));
            }
        }
        let mut shifted: BTreeSet<ExponentVec> = BTreeSet::new();
        for e in &c {
            let t = rho.plus(e).map_err(|_| {
                Error::InvalidSystem("a shifted element leaves the nonnegative orthant".into())
            })?;
            shifted.insert(t);
        }
        if shifted.len() != c.len() {
            return Err(Error::InvalidSystem(
                "displacement collapses two elements".into(),
            ));
        }
        if c.iter().any(|e| a.contains(e))
            || shifted.iter().any(|e| a.contains(e))
            || shifted.iter().any(|e| c.contains(e))
        {
            return Err(Error::InvalidSystem(
                "the sets A, C, C + rho must be pairwise disjoint".into(),
            ));
        }
        let union_ac: Vec<ExponentVec> = a.iter().chain(c.iter()).cloned().collect();
        if !(union_ac.is_empty() || crate::borel::is_borel(&union_ac)?) {
            return Err(Error::InvalidSystem("A u C is not a Borel set".into()));
        }
        let union_shifted: Vec<ExponentVec> = a.iter().chain(shifted.iter()).cloned().collect();
        if !(union_shifted.is_empty() || crate::borel::is_borel(&union_shifted)?) {
            return Err(Error::InvalidSystem(
                "A u (C + rho) is not a Borel set".into(),
            ));
        }
        let mut c_sorted: Vec<ExponentVec> = c.into_iter().collect();
        c_sorted.sort_by(|x, y| cmp_hlex(y, x).unwrap());
        Ok(BinomialSystem {
            n,
            d,
            a,
            c: c_sorted,
            rho,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn monomial_part(&self) -> &BTreeSet<ExponentVec> {
        &self.a
    }

    /// The moved elements, sorted hlex-descending.
    pub fn moved_part(&self) -> &[ExponentVec] {
        &self.c
    }

    pub fn displacement(&self) -> &IntVec {
        &self.rho
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.c.is_empty()
    }

    pub fn shifted_part(&self) -> Vec<ExponentVec> {
        self.c
            .iter()
            .map(|e| self.rho.plus(e).expect("validated"))
            .collect()
    }

    /// The Borel set `A u C`.
    pub fn source_set(&self) -> BorelSet {
        let elems: BTreeSet<ExponentVec> = self.a.iter().chain(self.c.iter()).cloned().collect();
        BorelSet::new(self.n, self.d, elems).expect("validated at construction")
    }

    /// The Borel set `A u (C + rho)`.
    pub fn target_set(&self) -> BorelSet {
        let elems: BTreeSet<ExponentVec> =
            self.a.iter().cloned().chain(self.shifted_part()).collect();
        BorelSet::new(self.n, self.d, elems).expect("validated at construction")
    }
}

impl std::fmt::Debug for BinomialSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BinomialSystem(n={}, d={}, |A|={}, C={:?}, rho={:?})",
            self.n,
            self.d,
            self.a.len(),
            self.c,
            self.rho
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    d: u32,
    #[serde(rename = "A")]
    a: Vec<ExponentVec>,
    #[serde(rename = "C")]
    c: Vec<ExponentVec>,
    rho: IntVec,
}

impl Serialize for BinomialSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut a: Vec<ExponentVec> = self.a.iter().cloned().collect();
        a.sort_by(|x, y| cmp_hlex(y, x).unwrap());
        SystemJson {
            n: self.n,
            d: self.d,
            a,
            c: self.c.clone(),
            rho: self.rho.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinomialSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SystemJson::deserialize(d)?;
        BinomialSystem::new(
            raw.n,
            raw.d,
            raw.a.into_iter().collect(),
            raw.c.into_iter().collect(),
            raw.rho,
        )
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The strongest class the system satisfies. With `C` empty every
/// condition on moved elements is vacuous.
pub fn classify(sys: &BinomialSystem) -> SystemClass {
    if sys.c.is_empty() {
        return SystemClass::Mall;
    }
    let rho = &sys.rho;
    let m = rho.m_index();
    if rho.entry(m) <= 0 {
        return SystemClass::Plain;
    }
    let first = &sys.c[0];
    for c in &sys.c[1..] {
        if (1..m).any(|i| c.entry(i) != first.entry(i)) {
            return SystemClass::Admissible;
        }
    }
    let mall = rho.entry(rho.mu_index()) > 0
        && sys.c.iter().all(|c| {
            let shifted = rho.plus(c).expect("validated");
            c.m_index() == shifted.m_index()
        });
    if mall {
        SystemClass::Mall
    } else {
        SystemClass::Good
    }
}

fn require_class(sys: &BinomialSystem, need: SystemClass) -> Result<()> {
    let got = classify(sys);
    if got < need {
        return Err(Error::ClassificationTooWeak {
            need: format!("{need:?}"),
            got: format!("{got:?}"),
        });
    }
    Ok(())
}

/// The generators: one monomial per element of `A`, one binomial per
/// element of `C`.
pub fn generators(sys: &BinomialSystem) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::with_capacity(sys.a.len() + sys.c.len());
    let mut a: Vec<ExponentVec> = sys.a.iter().cloned().collect();
    a.sort_by(|x, y| cmp_hlex(y, x).unwrap());
    for e in a {
        out.push(Poly::monomial(e));
    }
    for c in &sys.c {
        let shifted = sys.rho.plus(c).expect("validated");
        out.push(Poly::binomial(c.clone(), shifted).expect("equal lengths"));
    }
    out
}

/// The generators as a certified reverse lexicographic Groebner basis:
/// Buchberger is run and must return exactly the generators.
pub fn gb_rlex(sys: &BinomialSystem) -> Result<IdealGB> {
    require_class(sys, SystemClass::Admissible)?;
    let gens = generators(sys);
    let gb = buchberger(sys.n, &gens, TermOrderSpec::Rlex)?;
    let expected: BTreeSet<String> = gens
        .iter()
        .map(|p| serde_json::to_string(p).expect("serializable"))
        .collect();
    let got: BTreeSet<String> = gb
        .basis()
        .iter()
        .map(|p| serde_json::to_string(p).expect("serializable"))
        .collect();
    if expected != got {
        return Err(Error::InvariantBreach(
            "generators are not a reduced rlex Groebner basis".into(),
        ));
    }
    let init = initial_ideal(&gb);
    let want: Vec<ExponentVec> = sys.a.iter().cloned().chain(sys.c.iter().cloned()).collect();
    if init != MonomialIdeal::new(sys.n, want)? {
        return Err(Error::InvariantBreach(
            "rlex initial ideal is not generated by A u C".into(),
        ));
    }
    Ok(gb)
}

/// The reverse lexicographic Groebner basis of the saturation, from the
/// starred closed form, cross-checked against saturating the basis of
/// the ideal itself.
pub fn sat_gb(sys: &BinomialSystem) -> Result<IdealGB> {
    require_class(sys, SystemClass::Admissible)?;
    let mut gens: Vec<Poly> = Vec::new();
    for a in &sys.a {
        gens.push(Poly::monomial(a.star()));
    }
    for c in &sys.c {
        let cs = c.star();
        let target = sys.rho.plus(&cs).map_err(|_| {
            Error::InvariantBreach("starred shift leaves the nonnegative orthant".into())
        })?;
        gens.push(Poly::binomial(cs, target)?);
    }
    let closed = buchberger(sys.n, &gens, TermOrderSpec::Rlex)?;
    let direct = saturate_wrt_last(&gb_rlex(sys)?)?;
    if closed != direct {
        return Err(Error::InvariantBreach(
            "starred generators do not present the saturation".into(),
        ));
    }
    Ok(closed)
}

/// Closed form of the homogeneous lexicographic initial ideal of a Mall
/// system, verified against a Buchberger run.
pub fn initial_hlex(sys: &BinomialSystem) -> Result<MonomialIdeal> {
    require_class(sys, SystemClass::Mall)?;
    let closed = MonomialIdeal::new(
        sys.n,
        sys.a.iter().cloned().chain(sys.shifted_part()).collect(),
    )?;
    let gb = buchberger(sys.n, &generators(sys), TermOrderSpec::Hlex)?;
    if initial_ideal(&gb) != closed {
        return Err(Error::InvariantBreach(
            "hlex initial ideal differs from the closed form".into(),
        ));
    }
    Ok(closed)
}

/// Closed form of the hlex initial ideal of the saturation, requiring
/// additionally that the displacement leaves the last variable alone.
pub fn initial_hlex_sat(sys: &BinomialSystem) -> Result<MonomialIdeal> {
    require_class(sys, SystemClass::Mall)?;
    if sys.rho.entry(sys.n) != 0 {
        return Err(Error::ArgumentOutOfRange(
            "requires the last displacement entry to vanish".into(),
        ));
    }
    let closed = MonomialIdeal::new(
        sys.n,
        sys.a
            .iter()
            .map(|a| a.star())
            .chain(sys.shifted_part().iter().map(|t| t.star()))
            .collect(),
    )?;
    let sat = sat_gb(sys)?;
    let gb = buchberger(sys.n, sat.basis(), TermOrderSpec::Hlex)?;
    if initial_ideal(&gb) != closed {
        return Err(Error::InvariantBreach(
            "hlex initial ideal of the saturation differs from the closed form".into(),
        ));
    }
    Ok(closed)
}

/// The chain of single-swap Mall systems leading from a
/// growth-height-lexicographic Borel set to the lexicographic set with
/// the same growth vector. Each step moves the hlex-smallest element of
/// the current set to the hlex-largest element of its complement.
pub fn mall_swap_to_lex(b: &BorelSet, l: &BorelSet) -> Result<Vec<BinomialSystem>> {
    if b.num_vars() != l.num_vars() || b.degree() != l.degree() {
        return Err(Error::ArgumentOutOfRange(
            "sets live in different degree components".into(),
        ));
    }
    if !is_ghl(b) {
        return Err(Error::ArgumentOutOfRange(
            "source set is not growth-height-lexicographic".into(),
        ));
    }
    if !is_lex_set(&l.sorted_elems())? {
        return Err(Error::ArgumentOutOfRange(
            "target set is not lexicographic".into(),
        ));
    }
    if growth_vector(b) != growth_vector(l) {
        return Err(Error::ArgumentOutOfRange("growth vectors differ".into()));
    }
    let n = b.num_vars();
    let d = b.degree();
    let all = exponents_of_degree(n, d);
    let mut current = b.clone();
    let mut out = Vec::new();
    while current != *l {
        let c = current
            .sorted_elems()
            .last()
            .cloned()
            .ok_or_else(|| Error::InvariantBreach("ran out of elements".into()))?;
        let c_prime = all
            .iter()
            .find(|e| !current.contains(e))
            .cloned()
            .ok_or_else(|| Error::InvariantBreach("complement is empty".into()))?;
        if cmp_hlex(&c_prime, &c)? != std::cmp::Ordering::Greater {
            return Err(Error::InvariantBreach(
                "swap source is not below the complement maximum".into(),
            ));
        }
        if c_prime.entry(n) <= c.entry(n) {
            return Err(Error::InvariantBreach(
                "swap does not raise the last exponent".into(),
            ));
        }
        let rho = c_prime.sub(&c)?;
        let mut a = current.to_set();
        a.remove(&c);
        let sys = BinomialSystem::new(n, d, a, [c].into_iter().collect(), rho)?;
        if classify(&sys) != SystemClass::Mall {
            return Err(Error::InvariantBreach("swap system is not Mall".into()));
        }
        current = sys.target_set();
        out.push(sys);
    }
    Ok(out)
}

/// Brute-force search for one Mall step from `b` toward its normal
/// form: a Mall system with source `b` whose target has the same growth
/// and height vectors and strictly fewer differences from the normal
/// form. Candidate displacements are read off root-to-complement moves
/// first (largest first), then off arbitrary elements; moved subsets
/// are tried smallest first within each shared-prefix group. Returns
/// `None` when the bounded search space is exhausted.
pub fn mall_step_search(b: &BorelSet) -> Result<Option<BinomialSystem>> {
    let target = ghl_normal_form(b)?;
    if *b == target {
        return Ok(None);
    }
    let n = b.num_vars();
    let d = b.degree();
    let all = exponents_of_degree(n, d);
    let complement: Vec<ExponentVec> = all.iter().filter(|e| !b.contains(e)).cloned().collect();
    let potential = |set: &BorelSet| -> usize {
        set.elems().filter(|e| !target.contains(e)).count()
            + target.elems().filter(|e| !set.contains(e)).count()
    };
    let base_potential = potential(b);

    let mut candidate_rhos: Vec<IntVec> = Vec::new();
    let mut seen: BTreeSet<IntVec> = BTreeSet::new();
    let push_candidates = |sources: &[ExponentVec],
                               candidate_rhos: &mut Vec<IntVec>,
                               seen: &mut BTreeSet<IntVec>| {
        for c in sources {
            for a in &complement {
                let rho = a.sub(c).expect("equal lengths");
                if rho.is_zero() {
                    continue;
                }
                let m = rho.m_index();
                if m >= n || rho.entry(m) <= 0 || rho.entry(rho.mu_index()) <= 0 {
                    continue;
                }
                if c.m_index() != a.m_index() {
                    continue;
                }
                if seen.insert(rho.clone()) {
                    candidate_rhos.push(rho);
                }
            }
        }
    };
    let mut root_list: Vec<ExponentVec> = roots(b).into_iter().collect();
    root_list.sort_by(|x, y| cmp_hlex(y, x).unwrap());
    push_candidates(&root_list, &mut candidate_rhos, &mut seen);
    let elems = b.sorted_elems();
    push_candidates(&elems, &mut candidate_rhos, &mut seen);
    // Largest displacement first, mirroring the choice of the
    // lexicographically maximal move.
    candidate_rhos.sort_by(|x, y| y.0.cmp(&x.0));

    let gv = growth_vector(b);
    let hv = height_vector(b);
    for rho in candidate_rhos {
        // Movable elements: shift stays in the component, lands outside
        // the set, and keeps the largest nonzero index.
        let mut movable: Vec<ExponentVec> = Vec::new();
        for c in &elems {
            if let Ok(t) = rho.plus(c) {
                if !b.contains(&t) && c.m_index() == t.m_index() {
                    movable.push(c.clone());
                }
            }
        }
        if movable.is_empty() {
            continue;
        }
        // Group by the shared prefix below the displacement top.
        let m = rho.m_index();
        let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<ExponentVec>> =
            std::collections::BTreeMap::new();
        for c in movable {
            let key: Vec<u32> = (1..m).map(|i| c.entry(i)).collect();
            groups.entry(key).or_default().push(c);
        }
        for group in groups.values() {
            if group.len() > 16 {
                continue;
            }
            let mut masks: Vec<u32> = (1..(1u32 << group.len())).collect();
            masks.sort_by_key(|m| m.count_ones());
            for mask in masks {
                let c_set: BTreeSet<ExponentVec> = group
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| e.clone())
                    .collect();
                let a_set: BTreeSet<ExponentVec> =
                    b.elems().filter(|e| !c_set.contains(e)).cloned().collect();
                let sys = match BinomialSystem::new(n, d, a_set, c_set, rho.clone()) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                if classify(&sys) != SystemClass::Mall {
                    continue;
                }
                let next = sys.target_set();
                if growth_vector(&next) != gv || height_vector(&next) != hv {
                    continue;
                }
                if potential(&next) >= base_potential {
                    continue;
                }
                return Ok(Some(sys));
            }
        }
    }
    Ok(None)
}

/// The `i`-th ideal of the dimension filtration. For small `i` this is
/// the extension of the starred system retracted to the first `n - i`
/// variables; past the index where the displacement stops fitting, the
/// retraction is taken on the rlex initial ideal instead.
pub fn filtration_ideal(sys: &BinomialSystem, i: usize) -> Result<IdealGB> {
    require_class(sys, SystemClass::Admissible)?;
    let n = sys.n;
    if i > n - 1 {
        return Err(Error::IndexOutOfRange(i, n - 1));
    }
    let m = sys.rho.m_index();
    let l = n - i;
    if l >= m {
        // Retraction keeps the binomial structure.
        let mut gens: Vec<Poly> = Vec::new();
        for a in &sys.a {
            if a.m_index() <= l {
                gens.push(Poly::monomial(star_at(a, l)));
            }
        }
        let rho_l = pad_restrict(&sys.rho, l, n);
        for c in &sys.c {
            if c.m_index() <= l {
                let cs = star_at(c, l);
                let t = rho_l.plus(&cs).map_err(|_| {
                    Error::InvariantBreach("retracted shift leaves the nonnegative orthant".into())
                })?;
                gens.push(Poly::binomial(cs, t)?);
            }
        }
        buchberger(n, &gens, TermOrderSpec::Rlex)
    } else {
        // Monomial branch through the rlex initial ideal.
        let init = MonomialIdeal::new(
            n,
            sys.a.iter().cloned().chain(sys.c.iter().cloned()).collect(),
        )?;
        let retracted = init.restrict(l).strip_last().extend(n);
        Ok(retracted.to_ideal_gb(TermOrderSpec::Rlex))
    }
}

/// Zeroes coordinate `l` (1-indexed): the star operation of the
/// retraction to `l` variables, re-embedded in `n` variables.
fn star_at(e: &ExponentVec, l: usize) -> ExponentVec {
    let mut v = e.0.clone();
    v[l - 1] = 0;
    ExponentVec::new(v)
}

/// Restriction of the displacement to the first `l` coordinates,
/// zero-padded back to length `n`.
fn pad_restrict(rho: &IntVec, l: usize, n: usize) -> IntVec {
    let mut v = rho.0[..l].to_vec();
    v.resize(n, 0);
    IntVec::new(v)
}

/// Seeded random generation of Borel sets and binomial systems, used by
/// the statistical test batteries.
pub mod sample {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// A random nonempty, proper Borel subset of the degree component.
    pub fn random_borel_set<R: Rng>(n: usize, d: u32, rng: &mut R) -> BorelSet {
        let all = exponents_of_degree(n, d);
        loop {
            let k = rng.gen_range(1..=all.len());
            let picks: Vec<ExponentVec> = all.choose_multiple(rng, k).cloned().collect();
            let b = borel_closure(&picks).expect("equal degrees");
            if !b.is_empty() && b.len() < all.len() {
                return b;
            }
        }
    }

    fn candidate_displacements(b: &BorelSet, require_mall: bool) -> Vec<IntVec> {
        let n = b.num_vars();
        let all = exponents_of_degree(n, b.degree());
        let complement: Vec<ExponentVec> =
            all.iter().filter(|e| !b.contains(e)).cloned().collect();
        let mut out: Vec<IntVec> = Vec::new();
        let mut seen: BTreeSet<IntVec> = BTreeSet::new();
        for c in b.sorted_elems() {
            for a in &complement {
                let rho = a.sub(&c).expect("equal lengths");
                if rho.is_zero() {
                    continue;
                }
                if rho.entry(rho.m_index()) <= 0 {
                    continue;
                }
                if require_mall && (rho.entry(rho.mu_index()) <= 0 || c.m_index() != a.m_index()) {
                    continue;
                }
                if seen.insert(rho.clone()) {
                    out.push(rho);
                }
            }
        }
        out
    }

    fn try_system<R: Rng>(
        b: &BorelSet,
        rho: &IntVec,
        need: SystemClass,
        rng: &mut R,
    ) -> Option<BinomialSystem> {
        let n = b.num_vars();
        let m = rho.m_index();
        let mut movable: Vec<ExponentVec> = Vec::new();
        for c in b.sorted_elems() {
            if let Ok(t) = rho.plus(&c) {
                if !b.contains(&t) {
                    if need == SystemClass::Mall && c.m_index() != t.m_index() {
                        continue;
                    }
                    movable.push(c);
                }
            }
        }
        if movable.is_empty() {
            return None;
        }
        // Shared-prefix grouping keeps the good condition satisfiable.
        let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<ExponentVec>> =
            std::collections::BTreeMap::new();
        for c in movable {
            let key: Vec<u32> = (1..m).map(|i| c.entry(i)).collect();
            groups.entry(key).or_default().push(c);
        }
        let keys: Vec<Vec<u32>> = groups.keys().cloned().collect();
        let key = keys.choose(rng)?.clone();
        let group = &groups[&key];
        let size = rng.gen_range(1..=group.len().min(4));
        let c_set: BTreeSet<ExponentVec> = group.choose_multiple(rng, size).cloned().collect();
        let a_set: BTreeSet<ExponentVec> =
            b.elems().filter(|e| !c_set.contains(e)).cloned().collect();
        let sys = BinomialSystem::new(n, b.degree(), a_set, c_set, rho.clone()).ok()?;
        if classify(&sys) >= need {
            Some(sys)
        } else {
            None
        }
    }

    fn random_system<R: Rng>(n: usize, d: u32, need: SystemClass, rng: &mut R) -> BinomialSystem {
        // A moved element needs total degree at least 3: the
        // displacement carries two positive end entries, so its
        // negative part alone has weight 2.
        assert!(
            d >= 3 || need < SystemClass::Mall,
            "no Mall system with a nonempty moved part exists in degree {d}"
        );
        for _ in 0..100_000 {
            let b = random_borel_set(n, d, rng);
            let mut rhos = candidate_displacements(&b, need == SystemClass::Mall);
            if rhos.is_empty() {
                continue;
            }
            rhos.shuffle(rng);
            for rho in rhos.iter().take(8) {
                if let Some(sys) = try_system(&b, rho, need, rng) {
                    return sys;
                }
            }
        }
        panic!("no {need:?} system found at n={n}, d={d}");
    }

    /// A random Borel set presented as a system with an empty moved
    /// part (vacuously Mall).
    pub fn random_monomial_system<R: Rng>(n: usize, d: u32, rng: &mut R) -> BinomialSystem {
        let b = random_borel_set(n, d, rng);
        BinomialSystem::new(n, d, b.to_set(), BTreeSet::new(), IntVec::new(vec![0; n]))
            .expect("a Borel set is a valid system")
    }

    /// A random Mall system with a nonempty moved part.
    pub fn random_mall_system<R: Rng>(n: usize, d: u32, rng: &mut R) -> BinomialSystem {
        random_system(n, d, SystemClass::Mall, rng)
    }

    /// A random good system with a nonempty moved part.
    pub fn random_good_system<R: Rng>(n: usize, d: u32, rng: &mut R) -> BinomialSystem {
        random_system(n, d, SystemClass::Good, rng)
    }
}

/// The five-variable example system with displacement
/// `(1, -2, 2, -2, 1)`: admissible but not good, and the standard
/// counterexample to closed forms that need goodness.
pub fn example_admissible_not_good() -> BinomialSystem {
    let b = ExponentVec::new(vec![0, 2, 0, 3, 0]);
    let c = ExponentVec::new(vec![0, 2, 0, 2, 1]);
    let rho = IntVec::new(vec![1, -2, 2, -2, 1]);
    let moved: BTreeSet<ExponentVec> = [b.clone(), c.clone()].into_iter().collect();
    let mut d_set: Vec<ExponentVec> = vec![b.clone(), c.clone()];
    d_set.push(rho.plus(&b).unwrap());
    d_set.push(rho.plus(&c).unwrap());
    let closure = borel_closure(&d_set).unwrap();
    let a: BTreeSet<ExponentVec> = closure
        .elems()
        .filter(|e| !d_set.contains(e))
        .cloned()
        .collect();
    BinomialSystem::new(5, 5, a, moved, rho).expect("example data is a binomial system")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{hf_monomial_ideal, hilbert_polynomial};
    use crate::polyalg::ideal_equal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn ev(v: &[u32]) -> ExponentVec {
        ExponentVec::new(v.to_vec())
    }

    fn single_swap_example() -> BinomialSystem {
        // First Borel set of the shape that differs from its normal
        // form; a step toward the normal form is a Mall system. Three
        // variables admit no such sets, so work in four.
        for b in crate::borel::enumerate_borel_sets(4, 3) {
            if !b.is_empty() && b != ghl_normal_form(&b).unwrap() {
                return mall_step_search(&b).unwrap().unwrap();
            }
        }
        unreachable!("the shape contains non-normal Borel sets");
    }

    #[test]
    fn classification_examples() {
        // Empty moved part is vacuously Mall.
        let full = BorelSet::full(2, 2);
        let sys = BinomialSystem::new(
            2,
            2,
            full.to_set(),
            BTreeSet::new(),
            IntVec::new(vec![0, 0]),
        )
        .unwrap();
        assert_eq!(classify(&sys), SystemClass::Mall);

        // The five-variable example: admissible, not good.
        let ex = example_admissible_not_good();
        assert_eq!(classify(&ex), SystemClass::Admissible);

        // A single-swap system is Mall.
        let swap = single_swap_example();
        assert_eq!(classify(&swap), SystemClass::Mall);
    }

    #[test]
    fn example_counts() {
        let ex = example_admissible_not_good();
        assert_eq!(ex.num_vars(), 5);
        assert_eq!(ex.degree(), 5);
        assert_eq!(ex.moved_part().len(), 2);
        let gens = generators(&ex);
        assert_eq!(gens.len(), ex.monomial_part().len() + 2);
        assert!(gens.iter().all(|g| g.homogeneous_degree() == Some(5)));
    }

    #[test]
    fn invalid_systems_are_rejected() {
        // Nonzero displacement sum.
        assert!(BinomialSystem::new(
            2,
            2,
            BTreeSet::new(),
            [ev(&[1, 1])].into_iter().collect(),
            IntVec::new(vec![1, 0]),
        )
        .is_err());
        // Overlap between A and C.
        assert!(BinomialSystem::new(
            2,
            2,
            [ev(&[2, 0])].into_iter().collect(),
            [ev(&[2, 0])].into_iter().collect(),
            IntVec::new(vec![0, 0]),
        )
        .is_err());
        // A u C not Borel.
        assert!(BinomialSystem::new(
            2,
            2,
            BTreeSet::new(),
            [ev(&[0, 2])].into_iter().collect(),
            IntVec::new(vec![1, -1]),
        )
        .is_err());
    }

    #[test]
    fn gb_rlex_certifies() {
        let swap = single_swap_example();
        let gb = gb_rlex(&swap).unwrap();
        assert_eq!(gb.basis().len(), swap.monomial_part().len() + 1);
        let init = initial_ideal(&gb);
        let source = swap.source_set();
        assert_eq!(init, source.ideal());
    }

    #[test]
    fn sat_gb_cross_checks() {
        let swap = single_swap_example();
        let sat = sat_gb(&swap).unwrap();
        let direct = saturate_wrt_last(&gb_rlex(&swap).unwrap()).unwrap();
        assert!(ideal_equal(&sat, &direct).unwrap());
        // Truncating the saturation at the generation degree returns
        // the ideal itself.
        let trunc = crate::polyalg::truncate_ideal(&sat, swap.degree()).unwrap();
        assert!(ideal_equal(&trunc, &gb_rlex(&swap).unwrap()).unwrap());
    }

    #[test]
    fn monomial_system_saturation_is_star() {
        let b = borel_closure(&[ev(&[0, 2, 1])]).unwrap();
        let sys = BinomialSystem::new(
            3,
            3,
            b.to_set(),
            BTreeSet::new(),
            IntVec::new(vec![0, 0, 0]),
        )
        .unwrap();
        let sat = sat_gb(&sys).unwrap();
        let expected = b.ideal().strip_last();
        assert_eq!(sat.as_monomial_ideal().unwrap(), expected);
    }

    #[test]
    fn hlex_closed_forms() {
        let swap = single_swap_example();
        let init = initial_hlex(&swap).unwrap();
        let target = swap.target_set();
        assert_eq!(init, target.ideal());
        if swap.displacement().entry(swap.num_vars()) == 0 {
            let sat = initial_hlex_sat(&swap).unwrap();
            assert_eq!(sat, target.ideal().strip_last());
        }
    }

    #[test]
    fn swap_chain_reaches_the_lex_set() {
        for d in 2..=3u32 {
            for b in crate::borel::enumerate_borel_sets(3, d) {
                if b.is_empty() || !is_ghl(&b) {
                    continue;
                }
                let lex_elems = crate::borel::lex_set(3, d, b.len()).unwrap();
                let l = BorelSet::new(3, d, lex_elems.into_iter().collect()).unwrap();
                if growth_vector(&l) != growth_vector(&b) {
                    continue;
                }
                let chain = mall_swap_to_lex(&b, &l).unwrap();
                // One step per element of the difference.
                let diff = l.elems().filter(|e| !b.contains(e)).count();
                assert_eq!(chain.len(), diff);
                let mut cur = b.clone();
                for sys in &chain {
                    assert_eq!(classify(sys), SystemClass::Mall);
                    assert_eq!(sys.source_set(), cur);
                    assert_eq!(sys.moved_part().len(), 1);
                    let c = &sys.moved_part()[0];
                    let c_prime = sys.displacement().plus(c).unwrap();
                    assert!(c_prime.entry(3) > c.entry(3));
                    assert_eq!(cmp_hlex(&c_prime, c).unwrap(), std::cmp::Ordering::Greater);
                    cur = sys.target_set();
                }
                assert_eq!(cur, l);
            }
        }
    }

    #[test]
    fn swap_raises_the_saturated_hilbert_function_on_a_window() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 10 {
            let b0 = sample::random_borel_set(4, 3, &mut rng);
            let b = ghl_normal_form(&b0).unwrap();
            let lex_elems = crate::borel::lex_set(4, 3, b.len()).unwrap();
            let l = BorelSet::new(4, 3, lex_elems.into_iter().collect()).unwrap();
            if growth_vector(&l) != growth_vector(&b) || b == l {
                continue;
            }
            for sys in mall_swap_to_lex(&b, &l).unwrap() {
                let d = sys.degree() as i64;
                let c = &sys.moved_part()[0];
                let c_prime = sys.displacement().plus(c).unwrap();
                let before =
                    hf_monomial_ideal(&sys.source_set().ideal().strip_last(), d + 6).unwrap();
                let after =
                    hf_monomial_ideal(&sys.target_set().ideal().strip_last(), d + 6).unwrap();
                let lo = d - c_prime.entry(4) as i64;
                let hi = d - c.entry(4) as i64;
                for j in -1..=d + 6 {
                    let expected = if j >= lo && j < hi { 1 } else { 0 };
                    assert_eq!(
                        after.eval(j).unwrap() - before.eval(j).unwrap(),
                        expected,
                        "at degree {j}"
                    );
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn step_search_reaches_normal_form_on_samples() {
        // A slice of the four-variable shape; the exhaustive run is in
        // the acceptance suite.
        let mut seen = 0;
        for b in crate::borel::enumerate_borel_sets(4, 3) {
            if b.is_empty() {
                continue;
            }
            let target = ghl_normal_form(&b).unwrap();
            if b == target {
                continue;
            }
            let mut cur = b.clone();
            let mut steps = 0;
            while cur != target {
                let sys = mall_step_search(&cur)
                    .unwrap()
                    .expect("a step must exist for every non-normal set");
                assert_eq!(classify(&sys), SystemClass::Mall);
                assert_eq!(sys.source_set(), cur);
                let next = sys.target_set();
                assert_eq!(growth_vector(&next), growth_vector(&cur));
                assert_eq!(height_vector(&next), height_vector(&cur));
                cur = next;
                steps += 1;
                assert!(steps < 200, "step search does not converge");
            }
            seen += 1;
            if seen >= 60 {
                break;
            }
        }
        assert!(seen > 0, "no non-normal sets encountered");
    }

    #[test]
    fn filtration_chain_is_increasing() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..5 {
            let sys = sample::random_mall_system(4, 3, &mut rng);
            let n = sys.num_vars();
            let mut prev: Option<IdealGB> = None;
            for i in 0..n {
                let fi = filtration_ideal(&sys, i).unwrap();
                if i == 0 {
                    assert!(ideal_equal(&fi, &sat_gb(&sys).unwrap()).unwrap());
                }
                if let Some(p) = &prev {
                    for g in p.basis() {
                        assert!(fi.contains(g), "chain fails at index {i}");
                    }
                }
                prev = Some(fi);
            }
            // The top of the chain is the whole ring when the source
            // set contains the pure power of the first variable.
            let top = prev.unwrap();
            assert!(top.is_whole_ring());
        }
    }

    #[test]
    fn filtration_lemma_instance_checks() {
        let mut rng = ChaCha20Rng::seed_from_u64(123);
        for _ in 0..4 {
            let sys = sample::random_mall_system(4, 3, &mut rng);
            let n = sys.num_vars();
            let d = sys.degree();
            let m = sys.displacement().m_index();
            assert!(m >= 2);

            // Away from the critical index the ideal is generated one
            // subring lower: every basis monomial avoids the last
            // active variable.
            for i in 0..n {
                if i == n - m {
                    continue;
                }
                let fi = filtration_ideal(&sys, i).unwrap();
                let l = n - i;
                for g in fi.basis() {
                    for mono in g.support() {
                        assert!(
                            mono.is_zero() || mono.m_index() < l,
                            "index {i}: generator escapes the subring in {sys:?}"
                        );
                    }
                }
            }

            // At the critical step, each earlier variable has a power
            // multiplying the larger ideal into the smaller one.
            let smaller = filtration_ideal(&sys, n - m).unwrap();
            let larger = filtration_ideal(&sys, n - m + 1).unwrap();
            for k in 1..m {
                let mut found = false;
                'power: for r in 1..=(2 * d + 4) {
                    let mut xk = ExponentVec::zero(n);
                    xk.0[k - 1] = r;
                    for g in larger.basis() {
                        let shifted = g.mul_term(&xk, &crate::polyalg::scalar_from_i64(1));
                        if !smaller.contains(&shifted) {
                            continue 'power;
                        }
                    }
                    found = true;
                    break;
                }
                assert!(found, "no power of variable {k} works for {sys:?}");
            }

            // The last active variable is a non-zerodivisor on the
            // initial ideal at the critical step: membership of a
            // multiple forces membership.
            let init = initial_ideal(&smaller);
            for deg in 0..=(d + 1) {
                for u in exponents_of_degree(m, deg) {
                    let u = u.extend(n);
                    if !init.contains(&u) {
                        let up = u.add(&ExponentVec::unit(n, m)).unwrap();
                        assert!(!init.contains(&up), "zerodivisor at {u:?} in {sys:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_systems_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..20 {
            let sys = sample::random_mall_system(4, 3, &mut rng);
            assert_eq!(classify(&sys), SystemClass::Mall);
            assert!(!sys.moved_part().is_empty());
            let good = sample::random_good_system(4, 3, &mut rng);
            assert!(classify(&good) >= SystemClass::Good);
        }
    }

    #[test]
    fn system_json_round_trip() {
        let sys = example_admissible_not_good();
        let s = serde_json::to_string(&sys).unwrap();
        let back: BinomialSystem = serde_json::from_str(&s).unwrap();
        assert_eq!(sys, back);
    }

    #[test]
    fn example_growth_vectors_witness_non_mall() {
        // One moved element of the example changes its largest nonzero
        // index, so the system is not Mall and the two unions have
        // different growth vectors and Hilbert functions.
        let ex = example_admissible_not_good();
        let b = &ex.moved_part()[0];
        let shifted = ex.displacement().plus(b).unwrap();
        assert_ne!(b.m_index(), shifted.m_index());
        let src = ex.source_set();
        let tgt = ex.target_set();
        assert_ne!(growth_vector(&src), growth_vector(&tgt));
        let hs = hf_monomial_ideal(&src.ideal(), 9).unwrap();
        let ht = hf_monomial_ideal(&tgt.ideal(), 9).unwrap();
        assert!(!hs.eq_exact(&ht).unwrap());
        let _ = hilbert_polynomial(&hs).unwrap();
    }
}
