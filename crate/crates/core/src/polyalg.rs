//! Multivariate polynomials over the rationals and the Groebner machinery.
//!
//! Coefficients are exact rationals throughout; nothing in this crate
//! rounds. Ideals are always presented by their reduced Groebner basis
//! with respect to a declared term order, so equality of [`IdealGB`]
//! values of the same order is equality of ideals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::orders::{cmp_hlex, ExponentVec, IntVec, TermOrderSpec};

/// The coefficient field: arbitrary-precision rationals.
pub type Scalar = BigRational;

pub fn scalar_from_i64(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// A polynomial as a finite map from exponent vectors to nonzero scalars.
///
/// The map is keyed structurally; term-order-aware operations take the
/// order as a parameter.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<ExponentVec, Scalar>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: ExponentVec) -> Self {
        Poly::term(exp, Scalar::one())
    }

    pub fn term(exp: ExponentVec, coeff: Scalar) -> Self {
        let n = exp.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Poly { n, terms }
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (ExponentVec, Scalar)>) -> Result<Self> {
        let mut p = Poly::zero(n);
        for (exp, c) in it {
            if exp.len() != n {
                return Err(Error::VariableCountMismatch {
                    expected: n,
                    got: exp.len(),
                });
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    /// The difference of two monomials, `X^a - X^b`.
    pub fn binomial(a: ExponentVec, b: ExponentVec) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        let mut p = Poly::zero(a.len());
        p.add_term(a, Scalar::one());
        p.add_term(b, -Scalar::one());
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVec, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVec> {
        self.terms.keys()
    }

    pub fn coeff(&self, exp: &ExponentVec) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, exp: ExponentVec, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * s))
                .collect(),
        }
    }

    /// Multiplies by the term `s * X^exp`.
    pub fn mul_term(&self, exp: &ExponentVec, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(exp).expect("length checked"), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &other.terms {
            for (e2, c2) in &self.terms {
                out.add_term(e2.add(e).expect("length checked"), c * c2);
            }
        }
        out
    }

    /// The common degree when homogeneous; `None` for mixed degrees.
    /// The zero polynomial counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = match it.next() {
            None => return Some(0),
            Some(e) => e.degree(),
        };
        if it.all(|e| e.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Leading term with respect to `ord`.
    pub fn leading(&self, ord: &TermOrderSpec) -> Option<(&ExponentVec, &Scalar)> {
        let mut best: Option<(&ExponentVec, &Scalar)> = None;
        for (e, c) in &self.terms {
            best = match best {
                None => Some((e, c)),
                Some((be, bc)) => {
                    if ord.cmp(e, be).expect("equal lengths") == Ordering::Greater {
                        Some((e, c))
                    } else {
                        Some((be, bc))
                    }
                }
            };
        }
        best
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, ord: &TermOrderSpec) -> Poly {
        match self.leading(ord) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Strips the highest power of the last variable dividing the polynomial.
    pub fn strip_last_variable(&self) -> Poly {
        if self.is_zero() || self.n == 0 {
            return self.clone();
        }
        let t = self
            .terms
            .keys()
            .map(|e| e.entry(self.n))
            .min()
            .unwrap_or(0);
        if t == 0 {
            return self.clone();
        }
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut v = e.0.clone();
                    v[self.n - 1] -= t;
                    (ExponentVec::new(v), c.clone())
                })
                .collect(),
        }
    }

    /// Zero-pads the exponent vectors up to `n` variables.
    pub fn extend(&self, n: usize) -> Poly {
        Poly {
            n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.extend(n), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp_hlex(b, a).unwrap());
        for e in keys {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*X^{:?}", self.terms[e], e)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    num: String,
    den: String,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp_hlex(b, a).unwrap());
        let terms: Vec<TermJson> = keys
            .into_iter()
            .map(|e| {
                let c = &self.terms[e];
                TermJson {
                    exp: e.0.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                }
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        let n = terms.first().map(|t| t.exp.len()).unwrap_or(0);
        let mut p = Poly::zero(n);
        for t in terms {
            if t.exp.len() != n {
                return Err(D::Error::custom("inconsistent exponent lengths"));
            }
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            p.add_term(ExponentVec::new(t.exp), BigRational::new(num, den));
        }
        Ok(p)
    }
}

/// A monomial ideal given by its minimal generating set.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<ExponentVec>,
}

impl MonomialIdeal {
    /// Minimalizes the generating set and sorts it hlex-descending.
    pub fn new(n: usize, gens: Vec<ExponentVec>) -> Result<Self> {
        for g in &gens {
            if g.len() != n {
                return Err(Error::VariableCountMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        let mut minimal: Vec<ExponentVec> = Vec::new();
        let mut sorted = gens;
        sorted.sort_by_key(|g| g.degree());
        for g in sorted {
            if !minimal.iter().any(|m| m.divides(&g)) {
                minimal.push(g);
            }
        }
        minimal.sort_by(|a, b| cmp_hlex(b, a).unwrap());
        minimal.dedup();
        Ok(MonomialIdeal { n, gens: minimal })
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: vec![] }
    }

    pub fn whole_ring(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: vec![ExponentVec::zero(n)],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn min_gens(&self) -> &[ExponentVec] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_whole_ring(&self) -> bool {
        self.gens.iter().any(|g| g.is_zero())
    }

    pub fn max_gen_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn contains(&self, m: &ExponentVec) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Exponents of the monomials of the given degree lying in the ideal.
    pub fn degree_slice(&self, d: u32) -> Vec<ExponentVec> {
        crate::orders::exponents_of_degree(self.n, d)
            .into_iter()
            .filter(|m| self.contains(m))
            .collect()
    }

    /// Dimension of the degree-`d` component, by direct counting.
    pub fn dim_at(&self, d: u32) -> usize {
        self.degree_slice(d).len()
    }

    /// Strongly stable test: every variable exchange `X_i m / X_j`
    /// (`i < j`) applied to a minimal generator stays in the ideal.
    pub fn is_borel(&self) -> bool {
        for g in &self.gens {
            for j in 2..=self.n {
                if g.entry(j) == 0 {
                    continue;
                }
                for i in 1..j {
                    let mut v = g.0.clone();
                    v[j - 1] -= 1;
                    v[i - 1] += 1;
                    if !self.contains(&ExponentVec::new(v)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Intersection with the subring on the first `l` variables,
    /// as an ideal there.
    pub fn restrict(&self, l: usize) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .filter(|g| g.m_index() <= l || g.is_zero())
            .map(|g| g.restrict(l))
            .collect();
        MonomialIdeal::new(l, gens).expect("restriction keeps lengths consistent")
    }

    /// Reinterprets in `n` variables by zero-padding the generators.
    pub fn extend(&self, n: usize) -> MonomialIdeal {
        MonomialIdeal::new(n, self.gens.iter().map(|g| g.extend(n)).collect())
            .expect("padding keeps lengths consistent")
    }

    /// The colon ideal with all powers of the last variable: strips the
    /// last-variable power from every generator.
    pub fn strip_last(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.n, self.gens.iter().map(|g| g.star()).collect())
            .expect("star keeps lengths consistent")
    }

    /// Generators of the truncation at degree `k`.
    pub fn truncate(&self, k: u32) -> MonomialIdeal {
        let mut gens = Vec::new();
        for g in &self.gens {
            let d = g.degree();
            if d >= k {
                gens.push(g.clone());
            } else {
                for u in crate::orders::exponents_of_degree(self.n, k - d) {
                    gens.push(g.add(&u).expect("equal lengths"));
                }
            }
        }
        MonomialIdeal::new(self.n, gens).expect("lengths consistent")
    }

    pub fn gens_as_polys(&self) -> Vec<Poly> {
        self.gens.iter().cloned().map(Poly::monomial).collect()
    }

    /// Presents the monomial ideal as a reduced Groebner basis; minimal
    /// monomial generators are one for any term order.
    pub fn to_ideal_gb(&self, order: TermOrderSpec) -> IdealGB {
        let mut basis = self.gens_as_polys();
        sort_basis(&mut basis, &order);
        IdealGB {
            order,
            n: self.n,
            basis,
        }
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal(n={}, gens={:?})", self.n, self.gens)
    }
}

/// A homogeneous ideal presented by its reduced Groebner basis.
#[derive(Clone, PartialEq, Eq)]
pub struct IdealGB {
    order: TermOrderSpec,
    n: usize,
    basis: Vec<Poly>,
}

/// Serialization form of an ideal: order plus an arbitrary homogeneous
/// generating set. Convert with [`IdealData::into_gb`], which runs
/// Buchberger and therefore accepts any presentation.
#[derive(Clone, Serialize, Deserialize)]
pub struct IdealData {
    pub order: TermOrderSpec,
    pub n: usize,
    pub gens: Vec<Poly>,
}

impl IdealData {
    pub fn into_gb(self) -> Result<IdealGB> {
        buchberger(self.n, &self.gens, self.order)
    }
}

impl From<&IdealGB> for IdealData {
    fn from(gb: &IdealGB) -> Self {
        IdealData {
            order: gb.order.clone(),
            n: gb.n,
            gens: gb.basis.clone(),
        }
    }
}

impl Serialize for IdealGB {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IdealData::from(self).serialize(serializer)
    }
}

impl fmt::Debug for IdealGB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IdealGB({}, n={}, basis={:?})",
            self.order.name(),
            self.n,
            self.basis
        )
    }
}

impl IdealGB {
    pub fn zero(n: usize, order: TermOrderSpec) -> Self {
        IdealGB {
            order,
            n,
            basis: vec![],
        }
    }

    pub fn order(&self) -> &TermOrderSpec {
        &self.order
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_whole_ring(&self) -> bool {
        self.basis
            .iter()
            .any(|g| g.homogeneous_degree() == Some(0) && !g.is_zero())
    }

    pub fn max_gen_degree(&self) -> u32 {
        self.basis
            .iter()
            .filter_map(|g| g.homogeneous_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.basis.iter().all(|g| g.num_terms() == 1)
    }

    /// Reads the basis off as a monomial ideal; errors when some basis
    /// element has more than one term.
    pub fn as_monomial_ideal(&self) -> Result<MonomialIdeal> {
        if !self.is_monomial() {
            return Err(Error::Malformed("ideal basis is not monomial".into()));
        }
        MonomialIdeal::new(
            self.n,
            self.basis
                .iter()
                .map(|g| g.support().next().expect("nonzero").clone())
                .collect(),
        )
    }

    pub fn contains(&self, f: &Poly) -> bool {
        normal_form(f, &self.basis, &self.order).is_zero()
    }

    /// Re-presents the same ideal with a different term order.
    pub fn change_order(&self, order: TermOrderSpec) -> Result<IdealGB> {
        buchberger(self.n, &self.basis, order)
    }
}

fn sort_basis(basis: &mut [Poly], ord: &TermOrderSpec) {
    basis.sort_by(|a, b| {
        let la = a.leading(ord).expect("nonzero").0;
        let lb = b.leading(ord).expect("nonzero").0;
        ord.cmp(lb, la).expect("equal lengths")
    });
}

/// Remainder of `f` on division by `G`: no monomial of the result is
/// divisible by any leading term of `G`. Divisors are tried in list
/// order, lowest index first, which makes the result deterministic.
pub fn normal_form(f: &Poly, g: &[Poly], ord: &TermOrderSpec) -> Poly {
    let lts: Vec<Option<(ExponentVec, Scalar)>> = g
        .iter()
        .map(|p| p.leading(ord).map(|(e, c)| (e.clone(), c.clone())))
        .collect();
    let mut work = f.clone();
    let mut remainder = Poly::zero(f.num_vars());
    while let Some((lt, lc)) = work.leading(ord).map(|(e, c)| (e.clone(), c.clone())) {
        let mut reduced = false;
        for (p, lt_g) in g.iter().zip(&lts) {
            if let Some((ge, gc)) = lt_g {
                if ge.divides(&lt) {
                    let shift = lt.checked_sub(ge).expect("divisibility checked");
                    let factor = &lc / gc;
                    work = work.sub(&p.mul_term(&shift, &factor));
                    reduced = true;
                    break;
                }
            }
        }
        if !reduced {
            work.add_term(lt.clone(), -lc.clone());
            remainder.add_term(lt, lc);
        }
    }
    remainder
}

fn s_poly(f: &Poly, g: &Poly, ord: &TermOrderSpec) -> Poly {
    let (lf, cf) = f.leading(ord).expect("nonzero");
    let (lg, cg) = g.leading(ord).expect("nonzero");
    let lcm = lf.lcm(lg).expect("equal lengths");
    let sf = lcm.checked_sub(lf).expect("lcm");
    let sg = lcm.checked_sub(lg).expect("lcm");
    f.mul_term(&sf, &cf.recip())
        .sub(&g.mul_term(&sg, &cg.recip()))
}

/// Buchberger's algorithm with the normal selection strategy (pairs by
/// ascending lcm degree) and the coprime-leading-term criterion. The
/// output is the reduced Groebner basis: monic, inter-reduced, sorted
/// descending by leading term.
pub fn buchberger(n: usize, gens: &[Poly], order: TermOrderSpec) -> Result<IdealGB> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        if g.num_vars() != n {
            return Err(Error::VariableCountMismatch {
                expected: n,
                got: g.num_vars(),
            });
        }
        if g.is_zero() {
            continue;
        }
        if g.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
        basis.push(g.monic(&order));
    }
    if basis.is_empty() {
        return Ok(IdealGB::zero(n, order));
    }

    // Pair queue keyed by (lcm degree, i, j).
    let mut queue: std::collections::BinaryHeap<std::cmp::Reverse<(u32, usize, usize)>> =
        std::collections::BinaryHeap::new();
    let lcm_degree = |basis: &[Poly], i: usize, j: usize| -> u32 {
        let li = basis[i].leading(&order).expect("nonzero").0;
        let lj = basis[j].leading(&order).expect("nonzero").0;
        li.lcm(lj).expect("equal lengths").degree()
    };
    for i in 0..basis.len() {
        for j in 0..i {
            queue.push(std::cmp::Reverse((lcm_degree(&basis, j, i), j, i)));
        }
    }
    while let Some(std::cmp::Reverse((_, i, j))) = queue.pop() {
        let li = basis[i].leading(&order).expect("nonzero").0;
        let lj = basis[j].leading(&order).expect("nonzero").0;
        // First criterion: coprime leading terms.
        if li.add(lj).expect("equal lengths") == li.lcm(lj).expect("equal lengths") {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], &order);
        let r = normal_form(&s, &basis, &order);
        if !r.is_zero() {
            let r = r.monic(&order);
            let k = basis.len();
            basis.push(r);
            for i in 0..k {
                queue.push(std::cmp::Reverse((lcm_degree(&basis, i, k), i, k)));
            }
        }
    }

    // Reduce: drop elements with redundant leading terms, then take
    // normal forms of the tails.
    let mut keep: Vec<Poly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lg = g.leading(&order).expect("nonzero").0;
        let redundant = basis.iter().enumerate().any(|(jdx, h)| {
            if idx == jdx {
                return false;
            }
            let lh = h.leading(&order).expect("nonzero").0;
            lh.divides(lg) && (lh != lg || jdx < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<Poly> = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = normal_form(&keep[i], &others, &order);
        if !r.is_zero() {
            reduced.push(r.monic(&order));
        }
    }
    sort_basis(&mut reduced, &order);
    Ok(IdealGB {
        order,
        n,
        basis: reduced,
    })
}

/// Minimal generators of the initial ideal: the minimalized leading
/// terms of the reduced basis.
pub fn initial_ideal(ideal: &IdealGB) -> MonomialIdeal {
    MonomialIdeal::new(
        ideal.n,
        ideal
            .basis
            .iter()
            .map(|g| g.leading(&ideal.order).expect("nonzero").0.clone())
            .collect(),
    )
    .expect("lengths consistent")
}

/// Groebner basis of the colon ideal with all powers of the last
/// variable, computed by stripping that variable from every basis
/// element and re-reducing. Requires the reverse lexicographic order.
pub fn saturate_wrt_last(ideal: &IdealGB) -> Result<IdealGB> {
    if ideal.order != TermOrderSpec::Rlex {
        return Err(Error::OrderMismatch {
            expected: "rlex".into(),
            got: ideal.order.name(),
        });
    }
    let stripped: Vec<Poly> = ideal
        .basis
        .iter()
        .map(|g| g.strip_last_variable())
        .collect();
    buchberger(ideal.n, &stripped, TermOrderSpec::Rlex)
}

/// Applies the substitution `X_j -> sum_i g[i][j] X_i` to `f`.
pub fn apply_matrix(g: &[Vec<Scalar>], f: &Poly) -> Result<Poly> {
    let n = f.num_vars();
    if g.len() != n || g.iter().any(|row| row.len() != n) {
        return Err(Error::VariableCountMismatch {
            expected: n,
            got: g.len(),
        });
    }
    // Image of each variable as a linear form.
    let images: Vec<Poly> = (0..n)
        .map(|j| {
            let mut p = Poly::zero(n);
            for (i, row) in g.iter().enumerate() {
                p.add_term(ExponentVec::unit(n, i + 1), row[j].clone());
            }
            p
        })
        .collect();
    // Cache of powers per variable.
    let mut powers: Vec<Vec<Poly>> = (0..n)
        .map(|j| vec![Poly::term(ExponentVec::zero(n), Scalar::one()), images[j].clone()])
        .collect();
    let power = |j: usize, k: usize, powers: &mut Vec<Vec<Poly>>| -> Poly {
        while powers[j].len() <= k {
            let last = powers[j].last().unwrap().clone();
            let step = powers[j][1].clone();
            powers[j].push(last.mul(&step));
        }
        powers[j][k].clone()
    };
    let mut out = Poly::zero(n);
    for (e, c) in &f.terms {
        let mut prod = Poly::term(ExponentVec::zero(n), c.clone());
        for j in 0..n {
            let k = e.0[j] as usize;
            if k > 0 {
                prod = prod.mul(&power(j, k, &mut powers));
            }
        }
        out = out.add(&prod);
    }
    Ok(out)
}

/// Weight of the largest-weight monomial in the support of `f`.
pub fn weight_degree(f: &Poly, omega: &IntVec) -> Option<i64> {
    f.support().map(|e| omega.dot(e)).max()
}

/// The one-parameter deformation of `f` along the weight `omega`:
/// each monomial is rescaled by `a` to the power of its weight gap
/// below the maximum. At `a = 1` this is the identity; at `a = 0` only
/// the weight-maximal part survives.
pub fn beta_deform(f: &Poly, omega: &IntVec, a: &Scalar) -> Poly {
    let alpha = match weight_degree(f, omega) {
        None => return Poly::zero(f.num_vars()),
        Some(v) => v,
    };
    let mut out = Poly::zero(f.num_vars());
    for (e, c) in &f.terms {
        let k = alpha - omega.dot(e);
        debug_assert!(k >= 0);
        let factor = if k == 0 {
            Scalar::one()
        } else if a.is_zero() {
            continue;
        } else {
            let mut acc = Scalar::one();
            for _ in 0..k {
                acc *= a;
            }
            acc
        };
        out.add_term(e.clone(), c * &factor);
    }
    out
}

/// Ideal equality by mutual membership of the two bases.
pub fn ideal_equal(a: &IdealGB, b: &IdealGB) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::VariableCountMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    Ok(a.basis.iter().all(|g| b.contains(g)) && b.basis.iter().all(|g| a.contains(g)))
}

/// Groebner basis of the truncation at degree `k`: generators of degree
/// below `k` are replaced by all their degree-`k` monomial multiples.
pub fn truncate_ideal(ideal: &IdealGB, k: u32) -> Result<IdealGB> {
    let mut gens = Vec::new();
    for g in &ideal.basis {
        let d = g.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        if d >= k {
            gens.push(g.clone());
        } else {
            for u in crate::orders::exponents_of_degree(ideal.n, k - d) {
                gens.push(g.mul_term(&u, &Scalar::one()));
            }
        }
    }
    buchberger(ideal.n, &gens, ideal.order.clone())
}

/// Searches an integer weight vector realizing the initial ideal of the
/// declared term order, by Fourier-Motzkin elimination on the strict
/// separation constraints read off the reduced basis. The result is
/// certified: the weight strictly separates every leading term, and the
/// weight-initial forms regenerate the initial ideal.
pub fn find_weight(ideal: &IdealGB, tau: &TermOrderSpec) -> Result<IntVec> {
    if ideal.order != *tau {
        return Err(Error::OrderMismatch {
            expected: tau.name(),
            got: ideal.order.name(),
        });
    }
    let n = ideal.n;
    let mut constraints: Vec<Vec<BigRational>> = Vec::new();
    for g in &ideal.basis {
        let lt = g.leading(tau).expect("nonzero").0.clone();
        for m in g.support() {
            if *m == lt {
                continue;
            }
            let diff = lt.sub(m)?;
            constraints.push(diff.0.iter().map(|&v| scalar_from_i64(v)).collect());
        }
    }
    let omega_q = solve_strict(&constraints, n)?;
    // Clear denominators to land in the integers.
    let mut lcm = BigInt::one();
    for w in &omega_q {
        lcm = num_integer::lcm(lcm, w.denom().clone());
    }
    let omega = IntVec::new(
        omega_q
            .iter()
            .map(|w| {
                let v = w * BigRational::from_integer(lcm.clone());
                i64::try_from(v.to_integer()).expect("desk-scale weights fit in i64")
            })
            .collect(),
    );
    // Certification round 1: strict separation on every basis element.
    for g in &ideal.basis {
        let lt = g.leading(tau).expect("nonzero").0;
        for m in g.support() {
            if m != lt && omega.dot(lt) <= omega.dot(m) {
                return Err(Error::InvariantBreach(
                    "weight fails to separate a leading term".into(),
                ));
            }
        }
    }
    // Certification round 2: the weight-initial forms generate the
    // initial ideal.
    let zero = Scalar::zero();
    let initial_forms: Vec<Poly> = ideal
        .basis
        .iter()
        .map(|g| beta_deform(g, &omega, &zero))
        .collect();
    let regenerated = buchberger(n, &initial_forms, tau.clone())?;
    let expected = initial_ideal(ideal);
    if initial_ideal(&regenerated) != expected || !regenerated.is_monomial() {
        return Err(Error::InvariantBreach(
            "weight-initial forms do not regenerate the initial ideal".into(),
        ));
    }
    Ok(omega)
}

/// Finds a rational solution of the strict system `c . x > 0` by
/// Fourier-Motzkin elimination with back-substitution.
fn solve_strict(constraints: &[Vec<BigRational>], n: usize) -> Result<Vec<BigRational>> {
    // levels[t] holds the system over variables 0..=t.
    let mut levels: Vec<Vec<Vec<BigRational>>> = Vec::with_capacity(n);
    levels.push(constraints.to_vec());
    for t in (1..n).rev() {
        let current = levels.last().unwrap();
        let mut next: Vec<Vec<BigRational>> = Vec::new();
        let mut pos: Vec<&Vec<BigRational>> = Vec::new();
        let mut neg: Vec<&Vec<BigRational>> = Vec::new();
        for row in current {
            match row[t].cmp(&BigRational::zero()) {
                Ordering::Equal => next.push(row.clone()),
                Ordering::Greater => pos.push(row),
                Ordering::Less => neg.push(row),
            }
        }
        for p in &pos {
            for q in &neg {
                let row: Vec<BigRational> = (0..=t)
                    .map(|i| &p[i] * (-&q[t]) + &q[i] * &p[t])
                    .collect();
                if row[..t].iter().all(|c| c.is_zero()) {
                    // Degenerate combination 0 > 0 means infeasible.
                    return Err(Error::InvariantBreach(
                        "weight constraint system is infeasible".into(),
                    ));
                }
                next.push(row);
            }
        }
        levels.push(next);
    }
    // Solve the one-variable system, then back-substitute.
    let mut solution = vec![BigRational::zero(); n];
    {
        let rows = levels.last().unwrap();
        let mut want_pos = false;
        let mut want_neg = false;
        for row in rows {
            match row[0].cmp(&BigRational::zero()) {
                Ordering::Greater => want_pos = true,
                Ordering::Less => want_neg = true,
                Ordering::Equal => {
                    return Err(Error::InvariantBreach(
                        "weight constraint system is infeasible".into(),
                    ))
                }
            }
        }
        if want_pos && want_neg {
            return Err(Error::InvariantBreach(
                "weight constraint system is infeasible".into(),
            ));
        }
        solution[0] = if want_neg {
            -BigRational::one()
        } else if want_pos {
            BigRational::one()
        } else {
            BigRational::zero()
        };
    }
    for t in 1..n {
        let rows = &levels[n - 1 - t];
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for row in rows {
            if row[t].is_zero() {
                continue;
            }
            let partial: BigRational = (0..t).map(|i| &row[i] * &solution[i]).sum();
            let bound = -partial / &row[t];
            if row[t] > BigRational::zero() {
                lower = Some(match lower {
                    None => bound,
                    Some(l) => l.max(bound),
                });
            } else {
                upper = Some(match upper {
                    None => bound,
                    Some(u) => u.min(bound),
                });
            }
        }
        solution[t] = match (lower, upper) {
            (None, None) => BigRational::zero(),
            (Some(l), None) => l + BigRational::one(),
            (None, Some(u)) => u - BigRational::one(),
            (Some(l), Some(u)) => {
                if l >= u {
                    return Err(Error::InvariantBreach(
                        "weight back-substitution found an empty interval".into(),
                    ));
                }
                (l + u) / scalar_from_i64(2)
            }
        };
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::Tiebreak;

    fn ev(v: &[u32]) -> ExponentVec {
        ExponentVec::new(v.to_vec())
    }

    fn mono(v: &[u32]) -> Poly {
        Poly::monomial(ev(v))
    }

    #[test]
    fn normal_form_examples() {
        let rlex = TermOrderSpec::Rlex;
        // x^2 against {x} in one variable.
        let r = normal_form(&mono(&[2]), &[mono(&[1])], &rlex);
        assert!(r.is_zero());
        // x^2 - y^2 against {x - y}.
        let f = Poly::binomial(ev(&[2, 0]), ev(&[0, 2])).unwrap();
        let g = Poly::binomial(ev(&[1, 0]), ev(&[0, 1])).unwrap();
        assert!(normal_form(&f, &[g], &rlex).is_zero());
        // y^2 against {x^2}: untouched.
        let r = normal_form(&mono(&[0, 2]), &[mono(&[2, 0])], &rlex);
        assert_eq!(r, mono(&[0, 2]));
    }

    #[test]
    fn buchberger_monomial_ideal_is_its_own_basis() {
        let gb = buchberger(
            2,
            &[mono(&[2, 0]), mono(&[1, 1])],
            TermOrderSpec::Hlex,
        )
        .unwrap();
        assert_eq!(gb.basis().len(), 2);
        assert!(gb.is_monomial());
    }

    #[test]
    fn buchberger_reduces_linear_forms() {
        // {x - y, y - z} under hlex gives the reduced basis {x - z, y - z}.
        let f = Poly::binomial(ev(&[1, 0, 0]), ev(&[0, 1, 0])).unwrap();
        let g = Poly::binomial(ev(&[0, 1, 0]), ev(&[0, 0, 1])).unwrap();
        let gb = buchberger(3, &[f, g], TermOrderSpec::Hlex).unwrap();
        let expected = vec![
            Poly::binomial(ev(&[1, 0, 0]), ev(&[0, 0, 1])).unwrap(),
            Poly::binomial(ev(&[0, 1, 0]), ev(&[0, 0, 1])).unwrap(),
        ];
        assert_eq!(gb.basis(), &expected[..]);
    }

    #[test]
    fn buchberger_idempotent_and_empty() {
        let gb = buchberger(2, &[], TermOrderSpec::Rlex).unwrap();
        assert!(gb.is_zero());
        let f = Poly::binomial(ev(&[2, 0]), ev(&[1, 1])).unwrap();
        let gb1 = buchberger(2, &[f], TermOrderSpec::Rlex).unwrap();
        let gb2 = buchberger(2, gb1.basis(), TermOrderSpec::Rlex).unwrap();
        assert_eq!(gb1, gb2);
    }

    #[test]
    fn mixed_degree_input_is_rejected() {
        let mut p = Poly::zero(2);
        p = p.add(&mono(&[1, 0])).add(&mono(&[2, 0]));
        assert!(matches!(
            buchberger(2, &[p], TermOrderSpec::Rlex),
            Err(Error::NotHomogeneous)
        ));
    }

    #[test]
    fn initial_ideal_of_monomial_ideal() {
        let gb = buchberger(2, &[mono(&[2, 0]), mono(&[1, 1])], TermOrderSpec::Rlex).unwrap();
        let init = initial_ideal(&gb);
        assert_eq!(init.min_gens(), &[ev(&[2, 0]), ev(&[1, 1])]);
    }

    #[test]
    fn saturation_strips_the_last_variable() {
        let gb = buchberger(2, &[mono(&[2, 0]), mono(&[1, 1])], TermOrderSpec::Rlex).unwrap();
        let sat = saturate_wrt_last(&gb).unwrap();
        assert_eq!(sat.basis(), &[mono(&[1, 0])]);
        // Idempotence and containment of the input.
        let sat2 = saturate_wrt_last(&sat).unwrap();
        assert_eq!(sat, sat2);
        assert!(ideal_equal(&sat, &sat2).unwrap());
        assert!(sat.contains(&mono(&[2, 0])));
        // Wrong order is rejected.
        let hgb = buchberger(2, &[mono(&[2, 0])], TermOrderSpec::Hlex).unwrap();
        assert!(saturate_wrt_last(&hgb).is_err());
    }

    #[test]
    fn apply_matrix_examples() {
        let n = 2;
        let id = vec![
            vec![Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        let f = Poly::binomial(ev(&[1, 1]), ev(&[0, 2])).unwrap();
        assert_eq!(apply_matrix(&id, &f).unwrap(), f);

        // Unipotent with g_{12} = 1 sends y to x + y.
        let g = vec![
            vec![Scalar::one(), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        let y = mono(&[0, 1]);
        let image = apply_matrix(&g, &y).unwrap();
        let expected = mono(&[1, 0]).add(&mono(&[0, 1]));
        assert_eq!(image, expected);

        // Degree preserved on a homogeneous input.
        let h = apply_matrix(&g, &f).unwrap();
        assert_eq!(h.homogeneous_degree(), Some(2));
        let _ = n;
    }

    #[test]
    fn apply_matrix_composes() {
        let a = vec![
            vec![scalar_from_i64(2), scalar_from_i64(3)],
            vec![Scalar::zero(), scalar_from_i64(5)],
        ];
        let b = vec![
            vec![scalar_from_i64(1), scalar_from_i64(7)],
            vec![Scalar::zero(), scalar_from_i64(2)],
        ];
        // (a*b) as matrix product.
        let mut ab = vec![vec![Scalar::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let prod = &a[i][k] * &b[k][j];
                    ab[i][j] += prod;
                }
            }
        }
        let f = Poly::binomial(ev(&[2, 0]), ev(&[1, 1])).unwrap();
        let lhs = apply_matrix(&ab, &f).unwrap();
        let rhs = apply_matrix(&a, &apply_matrix(&b, &f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn beta_deform_examples() {
        let f = Poly::binomial(ev(&[1, 0]), ev(&[0, 1])).unwrap();
        let omega = IntVec::new(vec![1, 0]);
        assert_eq!(beta_deform(&f, &omega, &Scalar::one()), f);
        assert_eq!(beta_deform(&f, &omega, &Scalar::zero()), mono(&[1, 0]));
        let two = scalar_from_i64(2);
        let expected = mono(&[1, 0]).sub(&mono(&[0, 1]).scale(&two));
        assert_eq!(beta_deform(&f, &omega, &two), expected);
    }

    #[test]
    fn ideal_equality() {
        let f = Poly::binomial(ev(&[1, 0]), ev(&[0, 1])).unwrap();
        let g = Poly::binomial(ev(&[0, 1]), ev(&[1, 0])).unwrap();
        let a = buchberger(2, &[f], TermOrderSpec::Rlex).unwrap();
        let b = buchberger(2, &[g], TermOrderSpec::Hlex).unwrap();
        assert!(ideal_equal(&a, &a).unwrap());
        assert!(ideal_equal(&a, &b).unwrap());
        let x = buchberger(2, &[mono(&[1, 0])], TermOrderSpec::Rlex).unwrap();
        let x2 = buchberger(2, &[mono(&[2, 0])], TermOrderSpec::Rlex).unwrap();
        assert!(!ideal_equal(&x, &x2).unwrap());
    }

    #[test]
    fn truncation_examples() {
        let x = buchberger(2, &[mono(&[1, 0])], TermOrderSpec::Rlex).unwrap();
        let t1 = truncate_ideal(&x, 1).unwrap();
        assert_eq!(t1, x);
        let t2 = truncate_ideal(&x, 2).unwrap();
        let init = initial_ideal(&t2);
        assert_eq!(init.min_gens(), &[ev(&[2, 0]), ev(&[1, 1])]);
    }

    #[test]
    fn find_weight_examples() {
        // Monomial ideal: the zero weight is accepted.
        let m = buchberger(2, &[mono(&[2, 0])], TermOrderSpec::Rlex).unwrap();
        let w = find_weight(&m, &TermOrderSpec::Rlex).unwrap();
        assert_eq!(w, IntVec::new(vec![0, 0]));

        // {x - y} under hlex forces w_1 > w_2.
        let f = Poly::binomial(ev(&[1, 0]), ev(&[0, 1])).unwrap();
        let gb = buchberger(2, &[f], TermOrderSpec::Hlex).unwrap();
        let w = find_weight(&gb, &TermOrderSpec::Hlex).unwrap();
        assert!(w.entry(1) > w.entry(2));
    }

    #[test]
    fn find_weight_separates_binomial_leads() {
        // For a binomial-system basis under rlex the weight must put
        // every moved element strictly above its shift, and the
        // weight-zero deformation regenerates the initial ideal.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(77);
        let sys = crate::binsys::sample::random_mall_system(4, 3, &mut rng);
        let gb = crate::binsys::gb_rlex(&sys).unwrap();
        let w = find_weight(&gb, &TermOrderSpec::Rlex).unwrap();
        for c in sys.moved_part() {
            let shifted = sys.displacement().plus(c).unwrap();
            assert!(w.dot(c) > w.dot(&shifted));
        }
        let zero = Scalar::zero();
        let forms: Vec<Poly> = gb
            .basis()
            .iter()
            .map(|g| beta_deform(g, &w, &zero))
            .collect();
        let regen = buchberger(4, &forms, TermOrderSpec::Rlex).unwrap();
        assert_eq!(initial_ideal(&regen), initial_ideal(&gb));
    }

    #[test]
    fn monomial_ideal_basics() {
        let i = MonomialIdeal::new(2, vec![ev(&[2, 0]), ev(&[1, 1]), ev(&[2, 1])]).unwrap();
        assert_eq!(i.min_gens(), &[ev(&[2, 0]), ev(&[1, 1])]);
        assert!(i.contains(&ev(&[3, 2])));
        assert!(!i.contains(&ev(&[0, 5])));
        assert!(i.is_borel());
        let not_borel = MonomialIdeal::new(2, vec![ev(&[0, 1])]).unwrap();
        assert!(!not_borel.is_borel());
        assert_eq!(i.strip_last().min_gens(), &[ev(&[1, 0])]);
    }

    #[test]
    fn poly_json_round_trip() {
        let f = Poly::from_terms(
            2,
            vec![
                (ev(&[2, 0]), scalar_from_i64(1)),
                (ev(&[0, 2]), BigRational::new(BigInt::from(-7), BigInt::from(3))),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn weight_order_reduction_terminates() {
        let ord = TermOrderSpec::Weight {
            weight: IntVec::new(vec![1, 1]),
            tiebreak: Tiebreak::Rlex,
        };
        let f = Poly::binomial(ev(&[1, 1]), ev(&[0, 2])).unwrap();
        let gb = buchberger(2, &[f], ord).unwrap();
        assert_eq!(gb.basis().len(), 1);
    }
}
