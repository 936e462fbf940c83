//! Hilbert functions, Hilbert polynomials, and the Gotzmann machinery.
//!
//! A [`NumFn`] is an integer-valued function on the integers given by a
//! finite table together with tail rules on both sides; Hilbert
//! functions carry a certified polynomial upper tail. The Hilbert
//! function of a monomial quotient is computed by the classical pivot
//! recursion, and the closed formula from growth and height vectors is
//! implemented next to it so the two routes can be played against each
//! other.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orders::ExponentVec;
use crate::polyalg::MonomialIdeal;

/// Binomial coefficient in the polynomial convention:
/// `C(x, k) = x (x-1) ... (x-k+1) / k!` for any integer `x`, and 0 for
/// negative `k`.
pub fn binom_i64(x: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let mut num: i128 = 1;
    for i in 0..k {
        num *= (x - i) as i128;
    }
    let mut den: i128 = 1;
    for i in 1..=k {
        den *= i as i128;
    }
    i64::try_from(num / den).expect("desk-scale binomial fits in i64")
}

/// A univariate polynomial with exact rational coefficients, stored in
/// the monomial basis (index = power of `t`).
#[derive(Clone, PartialEq, Eq)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: vec![] }
    }

    pub fn constant(c: i64) -> Self {
        QPolynomial::new(vec![BigRational::from_integer(BigInt::from(c))])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: i64) -> BigRational {
        let tq = BigRational::from_integer(BigInt::from(t));
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &tq + c;
        }
        acc
    }

    /// Evaluation that must land in the integers.
    pub fn eval_int(&self, t: i64) -> Result<i64> {
        let v = self.eval(t);
        if !v.is_integer() {
            return Err(Error::InvariantBreach(format!(
                "polynomial takes non-integer value at {t}"
            )));
        }
        v.to_integer()
            .to_i64()
            .ok_or_else(|| Error::InvariantBreach("polynomial value overflows i64".into()))
    }

    pub fn add(&self, other: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        QPolynomial::new(
            (0..len)
                .map(|k| self.coeff(k) + other.coeff(k))
                .collect(),
        )
    }

    pub fn sub(&self, other: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        QPolynomial::new(
            (0..len)
                .map(|k| self.coeff(k) - other.coeff(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &QPolynomial) -> QPolynomial {
        if self.is_zero() || other.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPolynomial::new(out)
    }

    /// `C(t + c, k)` as a polynomial in `t`.
    pub fn binomial(c: i64, k: usize) -> QPolynomial {
        let mut p = QPolynomial::constant(1);
        for i in 0..k {
            // factor (t + c - i)
            let f = QPolynomial::new(vec![
                BigRational::from_integer(BigInt::from(c - i as i64)),
                BigRational::one(),
            ]);
            p = p.mul(&f);
        }
        let mut kfact = BigInt::one();
        for i in 1..=k {
            kfact *= BigInt::from(i);
        }
        p.scale(&BigRational::new(BigInt::one(), kfact))
    }

    /// Coefficients in the binomial basis `C(t, 0), C(t, 1), ...`,
    /// computed by forward differences at 0.
    pub fn to_binomial_basis(&self) -> Vec<BigRational> {
        let deg = match self.degree() {
            None => return vec![],
            Some(d) => d,
        };
        let mut values: Vec<BigRational> = (0..=deg as i64).map(|t| self.eval(t)).collect();
        let mut out = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            out.push(values[0].clone());
            for i in 0..values.len() - 1 {
                values[i] = &values[i + 1] - &values[i];
            }
            values.pop();
        }
        out
    }

    /// True when the polynomial takes integer values on all integers,
    /// equivalently when its binomial-basis coefficients are integers.
    pub fn is_integer_valued(&self) -> bool {
        self.to_binomial_basis().iter().all(|c| c.is_integer())
    }

    /// Nonnegativity on the integer ray `j >= from` (or `j <= from`
    /// when `upward` is false), decided exactly by checking up to the
    /// Cauchy root bound and the leading sign beyond it.
    pub fn nonneg_on_ray(&self, from: i64, upward: bool) -> bool {
        if self.is_zero() {
            return true;
        }
        let lead = self.leading_coeff().unwrap();
        let deg = self.degree().unwrap();
        // Cauchy bound: all real roots have |r| <= 1 + max |a_i / a_d|.
        let mut bound = BigRational::one();
        for c in &self.coeffs[..deg] {
            let q = (c / lead).abs();
            if q > bound {
                bound = q;
            }
        }
        let bound = (bound + BigRational::one())
            .to_integer()
            .to_i64()
            .unwrap_or(i64::MAX / 2)
            + 2;
        if upward {
            let tail_sign_ok = lead.is_positive();
            let check_to = bound.max(from);
            for j in from..=check_to {
                if self.eval(j).is_negative() {
                    return false;
                }
            }
            tail_sign_ok || from > bound
        } else {
            let lead_sign = if deg % 2 == 0 {
                lead.is_positive()
            } else {
                lead.is_negative()
            };
            let check_from = (-bound).min(from);
            for j in check_from..=from {
                if self.eval(j).is_negative() {
                    return false;
                }
            }
            lead_sign || from < -bound
        }
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl Serialize for QPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QPolynomial::new(coeffs))
    }
}

/// Newton interpolation at the consecutive integer points
/// `x0, x0+1, ...` with the given values.
pub fn interpolate_at_integers(x0: i64, ys: &[i64]) -> QPolynomial {
    let mut diffs: Vec<BigRational> = ys
        .iter()
        .map(|&y| BigRational::from_integer(BigInt::from(y)))
        .collect();
    let mut p = QPolynomial::zero();
    for k in 0..ys.len() {
        let c = diffs[0].clone();
        if !c.is_zero() {
            p = p.add(&QPolynomial::binomial(-x0, k).scale(&c));
        }
        for i in 0..diffs.len() - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.pop();
        if diffs.is_empty() {
            break;
        }
    }
    p
}

/// Tail behaviour of a [`NumFn`] outside its table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tail {
    Zero,
    Poly(QPolynomial),
}

impl Tail {
    fn canonical(self) -> Tail {
        match self {
            Tail::Poly(p) if p.is_zero() => Tail::Zero,
            t => t,
        }
    }

    pub fn constant(c: i64) -> Tail {
        Tail::Poly(QPolynomial::constant(c)).canonical()
    }

    fn eval(&self, j: i64) -> Result<i64> {
        match self {
            Tail::Zero => Ok(0),
            Tail::Poly(p) => p.eval_int(j),
        }
    }

    fn as_poly(&self) -> QPolynomial {
        match self {
            Tail::Zero => QPolynomial::zero(),
            Tail::Poly(p) => p.clone(),
        }
    }
}

/// An integer-valued function on the integers: a finite table plus tail
/// rules on both sides. The upper tail governs degrees above the table,
/// the lower tail degrees below it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumFn {
    lo: i64,
    values: Vec<i64>,
    upper: Tail,
    lower: Tail,
}

impl NumFn {
    pub fn new(lo: i64, values: Vec<i64>, upper: Tail, lower: Tail) -> Self {
        NumFn {
            lo,
            values,
            upper: upper.canonical(),
            lower: lower.canonical(),
        }
    }

    pub fn zero() -> Self {
        NumFn::new(0, vec![], Tail::Zero, Tail::Zero)
    }

    /// Table plus zero tails on both sides.
    pub fn from_table(lo: i64, values: Vec<i64>) -> Self {
        NumFn::new(lo, values, Tail::Zero, Tail::Zero)
    }

    pub fn table_lo(&self) -> i64 {
        self.lo
    }

    pub fn table_hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn upper(&self) -> &Tail {
        &self.upper
    }

    pub fn lower(&self) -> &Tail {
        &self.lower
    }

    pub fn eval(&self, j: i64) -> Result<i64> {
        if j < self.lo {
            self.lower.eval(j)
        } else if j > self.table_hi() {
            self.upper.eval(j)
        } else {
            Ok(self.values[(j - self.lo) as usize])
        }
    }

    pub fn is_nonnegative_on_table(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    fn pointwise<F: Fn(i64, i64) -> i64>(&self, other: &NumFn, f: F) -> Result<NumFn> {
        let lo = self.lo.min(other.lo);
        let hi = self.table_hi().max(other.table_hi());
        let mut values = Vec::new();
        for j in lo..=hi {
            values.push(f(self.eval(j)?, other.eval(j)?));
        }
        // Tails combine only when both are polynomial-or-zero; the
        // combination of the two tail polynomials is itself exact.
        let upper = Tail::Poly(combine_polys(&self.upper, &other.upper, &f)).canonical();
        let lower = Tail::Poly(combine_polys(&self.lower, &other.lower, &f)).canonical();
        Ok(NumFn::new(lo, values, upper, lower))
    }

    pub fn add(&self, other: &NumFn) -> Result<NumFn> {
        self.pointwise(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &NumFn) -> Result<NumFn> {
        self.pointwise(other, |a, b| a - b)
    }

    /// Exact equality as functions on all of the integers.
    pub fn eq_exact(&self, other: &NumFn) -> Result<bool> {
        let lo = self.lo.min(other.lo);
        let hi = self.table_hi().max(other.table_hi());
        for j in lo..=hi {
            if self.eval(j)? != other.eval(j)? {
                return Ok(false);
            }
        }
        Ok(self.upper.as_poly() == other.upper.as_poly()
            && self.lower.as_poly() == other.lower.as_poly())
    }

    /// Exact pointwise comparison `self <= other` on all of the integers.
    pub fn leq_exact(&self, other: &NumFn) -> Result<bool> {
        let lo = self.lo.min(other.lo);
        let hi = self.table_hi().max(other.table_hi());
        for j in lo..=hi {
            if self.eval(j)? > other.eval(j)? {
                return Ok(false);
            }
        }
        let up = other.upper.as_poly().sub(&self.upper.as_poly());
        let low = other.lower.as_poly().sub(&self.lower.as_poly());
        Ok(up.nonneg_on_ray(hi + 1, true) && low.nonneg_on_ray(lo - 1, false))
    }
}

fn combine_polys<F: Fn(i64, i64) -> i64>(a: &Tail, b: &Tail, _f: &F) -> QPolynomial {
    // Works for the linear combinations used here (add and sub); the
    // closure decides the sign by probing at 0 and 1.
    let pa = a.as_poly();
    let pb = b.as_poly();
    let s0 = _f(1, 0);
    let s1 = _f(0, 1);
    pa.scale(&BigRational::from_integer(BigInt::from(s0)))
        .add(&pb.scale(&BigRational::from_integer(BigInt::from(s1))))
}

#[derive(Serialize, Deserialize)]
struct TailJson {
    poly: QPolynomial,
    from: i64,
}

#[derive(Serialize, Deserialize)]
struct NumFnJson {
    table: Vec<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<TailJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lowtail: Option<TailJson>,
}

impl Serialize for NumFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table = (self.lo..=self.table_hi())
            .zip(self.values.iter().copied())
            .collect();
        let tail = match &self.upper {
            Tail::Zero => None,
            Tail::Poly(p) => Some(TailJson {
                poly: p.clone(),
                from: self.table_hi() + 1,
            }),
        };
        let lowtail = match &self.lower {
            Tail::Zero => None,
            Tail::Poly(p) => Some(TailJson {
                poly: p.clone(),
                from: self.lo - 1,
            }),
        };
        NumFnJson {
            table,
            tail,
            lowtail,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = NumFnJson::deserialize(d)?;
        if raw.table.is_empty() {
            let upper = raw.tail.map(|t| Tail::Poly(t.poly)).unwrap_or(Tail::Zero);
            let lower = raw
                .lowtail
                .map(|t| Tail::Poly(t.poly))
                .unwrap_or(Tail::Zero);
            return Ok(NumFn::new(0, vec![], upper, lower));
        }
        let lo = raw.table[0].0;
        let mut values = Vec::with_capacity(raw.table.len());
        for (i, (deg, val)) in raw.table.iter().enumerate() {
            if *deg != lo + i as i64 {
                return Err(D::Error::custom("table degrees must be consecutive"));
            }
            values.push(*val);
        }
        let upper = raw.tail.map(|t| Tail::Poly(t.poly)).unwrap_or(Tail::Zero);
        let lower = raw
            .lowtail
            .map(|t| Tail::Poly(t.poly))
            .unwrap_or(Tail::Zero);
        Ok(NumFn::new(lo, values, upper, lower))
    }
}

/// A Hilbert function: a [`NumFn`] whose upper tail is its Hilbert
/// polynomial, together with the recorded stabilization degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HilbertFn {
    pub f: NumFn,
    pub stab: i64,
}

impl HilbertFn {
    pub fn eval(&self, j: i64) -> Result<i64> {
        self.f.eval(j)
    }

    pub fn eq_exact(&self, other: &HilbertFn) -> Result<bool> {
        self.f.eq_exact(&other.f)
    }
}

/// The interpolating polynomial of the stabilized tail.
pub fn hilbert_polynomial(h: &HilbertFn) -> Result<QPolynomial> {
    match h.f.upper() {
        Tail::Zero => Ok(QPolynomial::zero()),
        Tail::Poly(p) => {
            if !p.is_integer_valued() {
                return Err(Error::InvariantBreach(
                    "Hilbert polynomial is not integer-valued".into(),
                ));
            }
            Ok(p.clone())
        }
    }
}

fn pick_pivot(gens: &[ExponentVec], n: usize) -> Option<usize> {
    // Most frequent variable among generators of degree at least two.
    let mut counts = vec![0usize; n];
    let mut eligible = vec![false; n];
    for g in gens {
        let big = g.degree() >= 2;
        for v in 0..n {
            if g.0[v] > 0 {
                counts[v] += 1;
                if big {
                    eligible[v] = true;
                }
            }
        }
    }
    (0..n)
        .filter(|&v| eligible[v])
        .max_by_key(|&v| (counts[v], usize::MAX - v))
}

fn quotient_table_rec(
    gens: &[ExponentVec],
    n: usize,
    top: i64,
    memo: &mut std::collections::HashMap<Vec<ExponentVec>, Vec<i64>>,
) -> Vec<i64> {
    let key: Vec<ExponentVec> = gens.to_vec();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let result = (|| {
        if gens.iter().any(|g| g.is_zero()) {
            return vec![0; (top + 1) as usize];
        }
        match pick_pivot(gens, n) {
            None => {
                // All generators are single variables: the quotient is a
                // polynomial ring in the remaining ones.
                let k = gens.len();
                let free = n - k;
                (0..=top)
                    .map(|j| {
                        if free == 0 {
                            if j == 0 {
                                1
                            } else {
                                0
                            }
                        } else {
                            binom_i64(j + free as i64 - 1, free as i64 - 1)
                        }
                    })
                    .collect()
            }
            Some(p) => {
                // Exact sequence of multiplication by the pivot variable.
                let colon: Vec<ExponentVec> = gens
                    .iter()
                    .map(|g| {
                        let mut v = g.0.clone();
                        if v[p] > 0 {
                            v[p] -= 1;
                        }
                        ExponentVec::new(v)
                    })
                    .collect();
                let colon = MonomialIdeal::new(n, colon).expect("lengths").min_gens().to_vec();
                let mut plus: Vec<ExponentVec> = gens
                    .iter()
                    .filter(|g| g.0[p] == 0)
                    .cloned()
                    .collect();
                plus.push(ExponentVec::unit(n, p + 1));
                let plus = MonomialIdeal::new(n, plus).expect("lengths").min_gens().to_vec();
                let hc = quotient_table_rec(&colon, n, top, memo);
                let hp = quotient_table_rec(&plus, n, top, memo);
                (0..=top)
                    .map(|j| {
                        let shifted = if j == 0 { 0 } else { hc[(j - 1) as usize] };
                        shifted + hp[j as usize]
                    })
                    .collect()
            }
        }
    })();
    memo.insert(key, result.clone());
    result
}

/// Table of `h_{S/I}` on `0..=top` by the pivot recursion.
pub fn quotient_table(ideal: &MonomialIdeal, top: i64) -> Vec<i64> {
    let mut memo = std::collections::HashMap::new();
    quotient_table_rec(ideal.min_gens(), ideal.num_vars(), top, &mut memo)
}

/// Hilbert function of the quotient `S/I` of a monomial ideal, with a
/// certified polynomial tail.
///
/// The table covers at least `0..=d_max`. The tail is interpolated at
/// the top of the table and verified against `n + 1` further degrees;
/// if verification fails the window is enlarged and the procedure
/// retried, so a short `d_max` never produces an uncertified tail.
pub fn hf_monomial_quotient(ideal: &MonomialIdeal, d_max: i64) -> Result<HilbertFn> {
    let n = ideal.num_vars() as i64;
    let base = d_max.max(ideal.max_gen_degree() as i64);
    for attempt in 1..=6 {
        let top = base + attempt * (n + 2);
        let extended = top + n + 1;
        let table = quotient_table(ideal, extended);
        let window_lo = top - n;
        let ys: Vec<i64> = (window_lo..=top).map(|j| table[j as usize]).collect();
        let p = interpolate_at_integers(window_lo, &ys);
        let certified = (top + 1..=extended).all(|j| {
            p.eval_int(j).map(|v| v == table[j as usize]).unwrap_or(false)
        });
        if !certified || !p.is_integer_valued() {
            continue;
        }
        // Stabilization degree: last disagreement plus one.
        let mut stab = 0i64;
        for j in (0..=extended).rev() {
            if p.eval_int(j)? != table[j as usize] {
                stab = j + 1;
                break;
            }
        }
        let tail = Tail::Poly(p).canonical();
        let keep = (stab.max(d_max) + 1).min(extended);
        let values = table[..=(keep as usize)].to_vec();
        return Ok(HilbertFn {
            f: NumFn::new(0, values, tail, Tail::Zero),
            stab,
        });
    }
    Err(Error::StabilizationUncertified)
}

/// Hilbert function of the ideal itself, `h_I = h_S - h_{S/I}`.
pub fn hf_monomial_ideal(ideal: &MonomialIdeal, d_max: i64) -> Result<HilbertFn> {
    let q = hf_monomial_quotient(ideal, d_max)?;
    let n = ideal.num_vars() as i64;
    let ring = ring_hf(ideal.num_vars(), q.f.table_hi());
    let f = ring.f.sub(&q.f)?;
    Ok(HilbertFn {
        stab: q.stab.max(0),
        f,
    })
    .map(|h| {
        debug_assert!(h.f.is_nonnegative_on_table());
        let _ = n;
        h
    })
}

/// Hilbert function of the full polynomial ring in `n` variables.
pub fn ring_hf(n: usize, top: i64) -> HilbertFn {
    let values: Vec<i64> = (0..=top.max(0))
        .map(|j| binom_i64(j + n as i64 - 1, n as i64 - 1))
        .collect();
    HilbertFn {
        f: NumFn::new(
            0,
            values,
            Tail::Poly(QPolynomial::binomial(n as i64 - 1, n - 1)),
            Tail::Zero,
        ),
        stab: 0,
    }
}

/// Hilbert function of the saturation of a Borel ideal generated in one
/// degree, from its growth and height vectors:
/// below the generation degree the partial sums of the height vector,
/// from it on the binomial combination of the growth vector.
pub fn hf_from_gv_hv(gv: &[i64], hv: &[i64], d: u32, n: usize) -> Result<HilbertFn> {
    if gv.len() != n {
        return Err(Error::ArgumentOutOfRange(format!(
            "growth vector must have length {n}"
        )));
    }
    if hv.len() != d as usize {
        return Err(Error::ArgumentOutOfRange(format!(
            "height vector must have length {d}"
        )));
    }
    if gv.iter().chain(hv.iter()).any(|&v| v < 0) {
        return Err(Error::ArgumentOutOfRange("negative slice count".into()));
    }
    if hv.iter().sum::<i64>() != gv[n - 1] {
        return Err(Error::InadmissibleFunction(
            "height vector total must equal the last growth entry".into(),
        ));
    }
    let d = d as i64;
    let mut values = Vec::new();
    for i in 0..d {
        // sum_{j=0}^{i} hv_{d-j}, with hv 1-indexed by last exponent.
        let mut s = 0;
        for j in 0..=i {
            s += hv[(d - j - 1) as usize];
        }
        values.push(s);
    }
    let mut tail_poly = QPolynomial::zero();
    for j in 0..n {
        let c = gv[n - 1 - j];
        if c != 0 {
            tail_poly = tail_poly.add(
                &QPolynomial::binomial(-d + j as i64, j)
                    .scale(&BigRational::from_integer(BigInt::from(c))),
            );
        }
    }
    // Extend the table through the tail region for convenient reads.
    for i in d..=(d + n as i64 + 1) {
        values.push(tail_poly.eval_int(i)?);
    }
    Ok(HilbertFn {
        f: NumFn::new(0, values, Tail::Poly(tail_poly).canonical(), Tail::Zero),
        stab: d,
    })
}

/// The Gotzmann decomposition of an admissible ideal-side Hilbert
/// polynomial in `n + 1` variables: the unique nondecreasing integers
/// `b_0 <= ... <= b_s` with `p = sum_i C(t + n - b_i - i, n - i)`.
/// Extraction is greedy on the leading binomial; the result is verified
/// by exact expansion.
pub fn gotzmann_decomposition(p: &QPolynomial, n: usize) -> Result<Vec<i64>> {
    if p.is_zero() {
        return Ok(vec![]);
    }
    let mut q = p.clone();
    let mut bs: Vec<i64> = Vec::new();
    let mut i = 0usize;
    loop {
        if q.is_zero() {
            break;
        }
        if i >= n {
            return Err(Error::InadmissiblePolynomial(
                "decomposition needs more terms than the ambient allows".into(),
            ));
        }
        let k = n - i;
        if q.degree() != Some(k) {
            return Err(Error::InadmissiblePolynomial(format!(
                "remainder has degree {:?}, expected {k}",
                q.degree()
            )));
        }
        // Match the two top coefficients of C(t + k - b, k).
        let mut kfact = BigInt::one();
        for v in 1..=k {
            kfact *= BigInt::from(v);
        }
        if q.coeff(k) != BigRational::new(BigInt::one(), kfact.clone()) {
            return Err(Error::InadmissiblePolynomial(
                "leading coefficient does not match a single binomial".into(),
            ));
        }
        let mut km1fact = BigInt::one();
        for v in 1..k {
            km1fact *= BigInt::from(v);
        }
        // coeff_{k-1}(C(t+k-b, k)) = ((k+1)/2 - b) / (k-1)!
        let base = BigRational::new(BigInt::from(k as i64 + 1), BigInt::from(2))
            - q.coeff(k - 1) * BigRational::from_integer(km1fact);
        let mut placed = false;
        for eps in 0..2i64 {
            let b_q = &base + BigRational::from_integer(BigInt::from(eps));
            if !b_q.is_integer() {
                continue;
            }
            let b = b_q.to_integer().to_i64().ok_or_else(|| {
                Error::InadmissiblePolynomial("decomposition entry overflows".into())
            })?;
            if b < 0 || bs.last().map(|&prev| b < prev).unwrap_or(false) {
                continue;
            }
            let term = QPolynomial::binomial(k as i64 - b, k);
            let rest = q.sub(&term);
            let ok = match eps {
                0 => rest.is_zero(),
                _ => rest.degree() == Some(k - 1),
            };
            if ok {
                bs.push(b);
                q = rest;
                i += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::InadmissiblePolynomial(
                "no binomial term matches the remainder".into(),
            ));
        }
    }
    // Verification by exact expansion.
    let mut expansion = QPolynomial::zero();
    for (i, &b) in bs.iter().enumerate() {
        expansion = expansion.add(&QPolynomial::binomial(n as i64 - b - i as i64, n - i));
    }
    if expansion != *p {
        return Err(Error::InadmissiblePolynomial(
            "expansion of the decomposition does not reproduce the input".into(),
        ));
    }
    Ok(bs)
}

/// The largest entry of the Gotzmann decomposition: every saturated
/// ideal with this Hilbert polynomial is generated in at most this
/// degree.
pub fn gotzmann_bound(p: &QPolynomial, n: usize) -> Result<i64> {
    let bs = gotzmann_decomposition(p, n)?;
    Ok(bs.last().copied().unwrap_or(0))
}
