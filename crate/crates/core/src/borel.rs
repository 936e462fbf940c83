//! Borel sets and their combinatorics: closures, roots, growth and
//! height vectors, the growth-height-lexicographic normal form, and lex
//! ideals.
//!
//! A Borel set is a subset of the degree-`d` exponent vectors closed
//! upward under the Borel order. Upward closure is checked on single
//! variable exchanges, which generate the order.

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    gotzmann_bound, hf_monomial_ideal, hilbert_polynomial, NumFn, QPolynomial,
};
use crate::orders::{cmp_hlex, exponents_of_degree, ExponentVec};
use crate::polyalg::MonomialIdeal;

/// A Borel set: a finite, Borel-order-upward-closed set of exponent
/// vectors of one degree.
#[derive(Clone, PartialEq, Eq)]
pub struct BorelSet {
    n: usize,
    d: u32,
    elems: BTreeSet<ExponentVec>,
}

impl BorelSet {
    /// Validates degrees, lengths, and upward closure.
    pub fn new(n: usize, d: u32, elems: BTreeSet<ExponentVec>) -> Result<Self> {
        for e in &elems {
            if e.len() != n {
                return Err(Error::VariableCountMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            if e.degree() != d {
                return Err(Error::MixedDegrees);
            }
        }
        let list: Vec<ExponentVec> = elems.iter().cloned().collect();
        if !is_borel(&list)? {
            return Err(Error::NotBorel(format!(
                "a variable exchange leaves the set (n={n}, d={d})"
            )));
        }
        Ok(BorelSet { n, d, elems })
    }

    pub fn empty(n: usize, d: u32) -> Self {
        BorelSet {
            n,
            d,
            elems: BTreeSet::new(),
        }
    }

    pub fn full(n: usize, d: u32) -> Self {
        BorelSet {
            n,
            d,
            elems: exponents_of_degree(n, d).into_iter().collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &ExponentVec) -> bool {
        self.elems.contains(e)
    }

    pub fn elems(&self) -> impl Iterator<Item = &ExponentVec> {
        self.elems.iter()
    }

    /// Elements sorted hlex-descending, the canonical presentation.
    pub fn sorted_elems(&self) -> Vec<ExponentVec> {
        let mut v: Vec<ExponentVec> = self.elems.iter().cloned().collect();
        v.sort_by(|a, b| cmp_hlex(b, a).unwrap());
        v
    }

    /// The monomial ideal generated by the set.
    pub fn ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.n, self.elems.iter().cloned().collect())
            .expect("lengths validated")
    }

    pub fn to_set(&self) -> BTreeSet<ExponentVec> {
        self.elems.clone()
    }
}

impl std::fmt::Debug for BorelSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BorelSet(n={}, d={}, {:?})",
            self.n,
            self.d,
            self.sorted_elems()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct BorelSetJson {
    n: usize,
    d: u32,
    elems: Vec<ExponentVec>,
}

impl Serialize for BorelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BorelSetJson {
            n: self.n,
            d: self.d,
            elems: self.sorted_elems(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BorelSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BorelSetJson::deserialize(d)?;
        BorelSet::new(raw.n, raw.d, raw.elems.into_iter().collect())
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// All single upward variable exchanges of `a`: move one unit from a
/// later position to an earlier one.
fn up_moves(a: &ExponentVec) -> Vec<ExponentVec> {
    let n = a.len();
    let mut out = Vec::new();
    for j in 2..=n {
        if a.entry(j) == 0 {
            continue;
        }
        for i in 1..j {
            let mut v = a.0.clone();
            v[j - 1] -= 1;
            v[i - 1] += 1;
            out.push(ExponentVec::new(v));
        }
    }
    out
}

/// Whether a set of equal-degree exponent vectors is closed upward
/// under the Borel order.
pub fn is_borel(set: &[ExponentVec]) -> Result<bool> {
    if let Some(first) = set.first() {
        let d = first.degree();
        if set.iter().any(|e| e.degree() != d) {
            return Err(Error::MixedDegrees);
        }
        if set.iter().any(|e| e.len() != first.len()) {
            return Err(Error::LengthMismatch(first.len(), 0));
        }
    }
    let lookup: BTreeSet<&ExponentVec> = set.iter().collect();
    for a in set {
        for b in up_moves(a) {
            if !lookup.contains(&b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The smallest Borel set containing the input: the closure under
/// single upward exchanges.
pub fn borel_closure(set: &[ExponentVec]) -> Result<BorelSet> {
    if set.is_empty() {
        return Ok(BorelSet::empty(0, 0));
    }
    let n = set[0].len();
    let d = set[0].degree();
    if set.iter().any(|e| e.degree() != d) {
        return Err(Error::MixedDegrees);
    }
    if set.iter().any(|e| e.len() != n) {
        return Err(Error::LengthMismatch(n, 0));
    }
    let mut elems: BTreeSet<ExponentVec> = set.iter().cloned().collect();
    let mut frontier: Vec<ExponentVec> = set.to_vec();
    while let Some(a) = frontier.pop() {
        for b in up_moves(&a) {
            if elems.insert(b.clone()) {
                frontier.push(b);
            }
        }
    }
    Ok(BorelSet { n, d, elems })
}

/// The Borel-minimal elements of a Borel set.
pub fn roots(b: &BorelSet) -> BTreeSet<ExponentVec> {
    b.elems
        .iter()
        .filter(|a| {
            !b.elems.iter().any(|other| {
                *other != **a && crate::orders::borel_geq(a, other).unwrap_or(false)
            })
        })
        .cloned()
        .collect()
}

/// Slice cardinalities by largest nonzero index, 1-indexed positions
/// `1..=n`.
pub fn growth_vector(b: &BorelSet) -> Vec<i64> {
    let mut gv = vec![0i64; b.n];
    for e in &b.elems {
        gv[e.m_index() - 1] += 1;
    }
    gv
}

/// Slice cardinalities by last exponent, positions `1..=d`.
pub fn height_vector(b: &BorelSet) -> Vec<i64> {
    let mut hv = vec![0i64; b.d as usize];
    for e in &b.elems {
        let last = e.entry(b.n);
        if last >= 1 {
            hv[(last - 1) as usize] += 1;
        }
    }
    hv
}

/// The hlex-largest `k` elements of the given list.
fn top_segment(mut pool: Vec<ExponentVec>, k: usize) -> Result<Vec<ExponentVec>> {
    if k > pool.len() {
        return Err(Error::ArgumentOutOfRange(format!(
            "segment size {k} exceeds slice size {}",
            pool.len()
        )));
    }
    pool.sort_by(|a, b| cmp_hlex(b, a).unwrap());
    pool.truncate(k);
    Ok(pool)
}

/// Whether every slice of the set (by largest nonzero index for
/// positions below `n`, by last exponent for positive heights) is an
/// hlex-initial segment of the corresponding slice of the full degree
/// component.
pub fn is_ghl(b: &BorelSet) -> bool {
    let all = exponents_of_degree(b.n, b.d);
    let gv = growth_vector(b);
    let hv = height_vector(b);
    for i in 1..b.n {
        let slice: Vec<ExponentVec> = all.iter().filter(|e| e.m_index() == i).cloned().collect();
        let want: BTreeSet<ExponentVec> = top_segment(slice, gv[i - 1] as usize)
            .expect("gv bounded by slice size")
            .into_iter()
            .collect();
        let have: BTreeSet<ExponentVec> = b
            .elems
            .iter()
            .filter(|e| e.m_index() == i)
            .cloned()
            .collect();
        if want != have {
            return false;
        }
    }
    for h in 1..=b.d {
        let slice: Vec<ExponentVec> = all
            .iter()
            .filter(|e| e.entry(b.n) == h)
            .cloned()
            .collect();
        let want: BTreeSet<ExponentVec> = top_segment(slice, hv[(h - 1) as usize] as usize)
            .expect("hv bounded by slice size")
            .into_iter()
            .collect();
        let have: BTreeSet<ExponentVec> = b
            .elems
            .iter()
            .filter(|e| e.entry(b.n) == h)
            .cloned()
            .collect();
        if want != have {
            return false;
        }
    }
    true
}

/// The growth-height-lexicographic normal form: the unique Borel set
/// with the same growth and height vectors whose slices are hlex
/// segments. Assembled slice by slice and re-validated, since only
/// existence and uniqueness are guaranteed abstractly.
pub fn ghl_normal_form(b: &BorelSet) -> Result<BorelSet> {
    let all = exponents_of_degree(b.n, b.d);
    let gv = growth_vector(b);
    let hv = height_vector(b);
    let mut elems: BTreeSet<ExponentVec> = BTreeSet::new();
    for i in 1..b.n {
        let slice: Vec<ExponentVec> = all.iter().filter(|e| e.m_index() == i).cloned().collect();
        elems.extend(top_segment(slice, gv[i - 1] as usize)?);
    }
    for h in 1..=b.d {
        let slice: Vec<ExponentVec> = all
            .iter()
            .filter(|e| e.entry(b.n) == h)
            .cloned()
            .collect();
        elems.extend(top_segment(slice, hv[(h - 1) as usize] as usize)?);
    }
    let out = BorelSet::new(b.n, b.d, elems).map_err(|_| {
        Error::InvariantBreach("assembled normal form is not a Borel set".into())
    })?;
    if growth_vector(&out) != gv || height_vector(&out) != hv {
        return Err(Error::InvariantBreach(
            "normal form changed the growth or height vector".into(),
        ));
    }
    Ok(out)
}

/// The `k` hlex-largest exponent vectors of degree `d` in `n` variables.
pub fn lex_set(n: usize, d: u32, k: usize) -> Result<Vec<ExponentVec>> {
    let all = exponents_of_degree(n, d);
    if k > all.len() {
        return Err(Error::ArgumentOutOfRange(format!(
            "lex segment size {k} exceeds {}",
            all.len()
        )));
    }
    Ok(all[..k].to_vec())
}

/// Whether the set is an hlex-initial segment of its degree component.
pub fn is_lex_set(set: &[ExponentVec]) -> Result<bool> {
    if set.is_empty() {
        return Ok(true);
    }
    let n = set[0].len();
    let d = set[0].degree();
    if set.iter().any(|e| e.degree() != d) {
        return Err(Error::MixedDegrees);
    }
    let expected = lex_set(n, d, set.len())?;
    let have: BTreeSet<&ExponentVec> = set.iter().collect();
    Ok(expected.iter().all(|e| have.contains(e)))
}

/// The unique lex ideal with the given Hilbert function: in each degree
/// the hlex-initial segment of the prescribed size. The assembled
/// segments are verified to form an ideal, and the function must have
/// stabilized against its own tail by `d_max`.
pub fn lex_ideal_from_hf(h: &NumFn, n: usize, d_max: u32) -> Result<MonomialIdeal> {
    let mut slices: Vec<Vec<ExponentVec>> = Vec::new();
    for i in 0..=d_max as i64 {
        let k = h.eval(i)?;
        if k < 0 {
            return Err(Error::InadmissibleFunction(format!(
                "negative value at degree {i}"
            )));
        }
        slices.push(lex_set(n, i as u32, k as usize).map_err(|_| {
            Error::InadmissibleFunction(format!("value at degree {i} exceeds the component"))
        })?);
    }
    // Ideal property: each segment contains the multiples of the
    // previous one; generators are what the multiples miss.
    let mut gens: Vec<ExponentVec> = Vec::new();
    for i in 0..slices.len() {
        let prev_multiples: BTreeSet<ExponentVec> = if i == 0 {
            BTreeSet::new()
        } else {
            slices[i - 1]
                .iter()
                .flat_map(|e| (1..=n).map(move |v| e.add(&ExponentVec::unit(n, v)).unwrap()))
                .collect()
        };
        let current: BTreeSet<&ExponentVec> = slices[i].iter().collect();
        for m in &prev_multiples {
            if !current.contains(m) {
                return Err(Error::InadmissibleFunction(format!(
                    "degree-{i} segment misses a multiple of the previous segment"
                )));
            }
        }
        for m in &slices[i] {
            if !prev_multiples.contains(m) {
                gens.push(m.clone());
            }
        }
    }
    let ideal = MonomialIdeal::new(n, gens)?;
    // One degree of lookahead: the declared function must not demand
    // new generators beyond the window.
    let next = d_max as i64 + 1;
    if ideal.dim_at(next as u32) as i64 != h.eval(next)? {
        return Err(Error::InadmissibleFunction(
            "function requires generators beyond the given window".into(),
        ));
    }
    Ok(ideal)
}

/// The unique saturated lex ideal with the given ideal-side Hilbert
/// polynomial: the hlex segment of size `p(b)` at the Gotzmann bound
/// `b`, saturated by stripping the last variable (lex ideals are
/// Borel). The result is verified to have Hilbert polynomial `p`.
pub fn saturated_lex_ideal(p: &QPolynomial, n: usize) -> Result<MonomialIdeal> {
    if n < 2 {
        return Err(Error::ArgumentOutOfRange(
            "need at least two variables".into(),
        ));
    }
    let bound = gotzmann_bound(p, n - 1)?;
    let d = bound.max(1);
    let k = p.eval(d);
    if !k.is_integer() {
        return Err(Error::InadmissiblePolynomial(format!(
            "non-integer value at the Gotzmann bound {d}"
        )));
    }
    let k = num_traits::ToPrimitive::to_i64(&k.to_integer()).ok_or_else(|| {
        Error::InadmissiblePolynomial("value at the Gotzmann bound overflows".into())
    })?;
    if k < 0 {
        return Err(Error::InadmissiblePolynomial(
            "negative value at the Gotzmann bound".into(),
        ));
    }
    let segment = lex_set(n, d as u32, k as usize).map_err(|_| {
        Error::InadmissiblePolynomial("value at the Gotzmann bound exceeds the component".into())
    })?;
    let ideal = MonomialIdeal::new(n, segment)?;
    let saturated = ideal.strip_last();
    let h = hf_monomial_ideal(&saturated, d + n as i64 + 2)?;
    if hilbert_polynomial(&h)? != *p {
        return Err(Error::InadmissiblePolynomial(
            "no saturated lex ideal attains this polynomial".into(),
        ));
    }
    Ok(saturated)
}

/// Every Borel set of the given shape, enumerated as the upward-closed
/// subsets of the degree component. Exponential in the component size;
/// intended for exhaustive checks at desk scale.
pub fn enumerate_borel_sets(n: usize, d: u32) -> Vec<BorelSet> {
    let all = exponents_of_degree(n, d);
    let index: std::collections::HashMap<&ExponentVec, usize> =
        all.iter().enumerate().map(|(i, e)| (e, i)).collect();
    // Up-moves point at hlex-larger vectors, which sit earlier in the
    // list; membership of a vector forces membership of its moves.
    let move_targets: Vec<Vec<usize>> = all
        .iter()
        .map(|e| up_moves(e).iter().map(|m| index[m]).collect())
        .collect();
    fn rec(
        pos: usize,
        len: usize,
        move_targets: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if pos == len {
            out.push(chosen.clone());
            return;
        }
        chosen[pos] = false;
        rec(pos + 1, len, move_targets, chosen, out);
        if move_targets[pos].iter().all(|&t| chosen[t]) {
            chosen[pos] = true;
            rec(pos + 1, len, move_targets, chosen, out);
            chosen[pos] = false;
        }
    }
    let mut chosen = vec![false; all.len()];
    let mut masks = Vec::new();
    rec(0, all.len(), &move_targets, &mut chosen, &mut masks);
    let mut out = Vec::new();
    for mask in masks {
        let elems: BTreeSet<ExponentVec> = all
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(e, _)| e.clone())
            .collect();
        out.push(BorelSet { n, d, elems });
    }
    out
}
