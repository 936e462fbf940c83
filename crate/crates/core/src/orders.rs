//! Exponent vectors and the order relations on them.
//!
//! Three relations drive everything downstream: the homogeneous
//! lexicographic order `hlex`, the reverse lexicographic order `rlex`
//! (both admissible term orders), and the Borel partial order. The
//! Borel order has an equivalent description through upper triangular
//! matrices with prescribed row and column sums; [`borel_witness`]
//! constructs such a matrix explicitly.
//!
//! Vectors are 1-indexed in the documentation; the in-memory layout is
//! 0-based and never exposed.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector: the log of a monomial in `n` variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVec(pub Vec<u32>);

impl ExponentVec {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVec(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    /// The standard vector `e_i` (1-indexed).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        ExponentVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry at 1-indexed position `i`.
    pub fn entry(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total degree `|a|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest 1-indexed position with a nonzero entry; 1 on the zero vector.
    pub fn m_index(&self) -> usize {
        self.0
            .iter()
            .rposition(|&e| e != 0)
            .map(|p| p + 1)
            .unwrap_or(1)
    }

    /// Smallest 1-indexed position with a nonzero entry; `n` on the zero vector.
    pub fn mu_index(&self) -> usize {
        self.0
            .iter()
            .position(|&e| e != 0)
            .map(|p| p + 1)
            .unwrap_or(self.0.len())
    }

    /// Zeroes the last entry.
    pub fn star(&self) -> Self {
        let mut v = self.0.clone();
        if let Some(last) = v.last_mut() {
            *last = 0;
        }
        ExponentVec(v)
    }

    pub fn add(&self, other: &ExponentVec) -> Result<ExponentVec> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(ExponentVec(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise difference as a signed vector.
    pub fn sub(&self, other: &ExponentVec) -> Result<IntVec> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(IntVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect(),
        ))
    }

    pub fn divides(&self, other: &ExponentVec) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &ExponentVec) -> Result<ExponentVec> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(ExponentVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        ))
    }

    /// Checked componentwise subtraction within the nonnegative orthant.
    pub fn checked_sub(&self, other: &ExponentVec) -> Option<ExponentVec> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVec)
    }

    /// Truncates to the first `l` coordinates.
    ///
    /// Only meaningful when all later entries vanish (`m_index() <= l`),
    /// which the caller is expected to have checked.
    pub fn restrict(&self, l: usize) -> ExponentVec {
        ExponentVec(self.0[..l].to_vec())
    }

    /// Pads with zeros up to `n` coordinates.
    pub fn extend(&self, n: usize) -> ExponentVec {
        let mut v = self.0.clone();
        v.resize(n, 0);
        ExponentVec(v)
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An integer vector, used for weight vectors and binomial displacements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVec(pub Vec<i64>);

impl IntVec {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVec(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry at 1-indexed position `i`.
    pub fn entry(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Largest 1-indexed position with a nonzero entry; 1 on the zero vector.
    pub fn m_index(&self) -> usize {
        self.0
            .iter()
            .rposition(|&e| e != 0)
            .map(|p| p + 1)
            .unwrap_or(1)
    }

    /// Smallest 1-indexed position with a nonzero entry; `n` on the zero vector.
    pub fn mu_index(&self) -> usize {
        self.0
            .iter()
            .position(|&e| e != 0)
            .map(|p| p + 1)
            .unwrap_or(self.0.len())
    }

    /// Positive part: entrywise `max(·, 0)`.
    pub fn pos_part(&self) -> ExponentVec {
        ExponentVec(self.0.iter().map(|&e| e.max(0) as u32).collect())
    }

    /// Negative part, so that `self = pos_part - neg_part` with disjoint supports.
    pub fn neg_part(&self) -> ExponentVec {
        ExponentVec(self.0.iter().map(|&e| (-e).max(0) as u32).collect())
    }

    /// `a + self`, defined only when the result stays componentwise nonnegative.
    pub fn plus(&self, a: &ExponentVec) -> Result<ExponentVec> {
        if self.len() != a.len() {
            return Err(Error::LengthMismatch(self.len(), a.len()));
        }
        let mut out = Vec::with_capacity(a.len());
        for (i, (&r, &e)) in self.0.iter().zip(&a.0).enumerate() {
            let v = e as i64 + r;
            if v < 0 {
                return Err(Error::NegativeEntry(i + 1));
            }
            out.push(v as u32);
        }
        Ok(ExponentVec(out))
    }

    pub fn negated(&self) -> IntVec {
        IntVec(self.0.iter().map(|&e| -e).collect())
    }

    /// Weight pairing `self . a`.
    pub fn dot(&self, a: &ExponentVec) -> i64 {
        self.0
            .iter()
            .zip(&a.0)
            .map(|(&w, &e)| w * e as i64)
            .sum()
    }

    pub fn restrict(&self, l: usize) -> IntVec {
        IntVec(self.0[..l].to_vec())
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An upper triangular matrix of nonnegative integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UpperTriMatrix {
    rows: Vec<Vec<u32>>,
}

impl UpperTriMatrix {
    /// Validates that everything strictly below the diagonal is zero.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed("matrix is not square".into()));
            }
            if row[..i].iter().any(|&e| e != 0) {
                return Err(Error::Malformed(
                    "nonzero entry below the diagonal".into(),
                ));
            }
        }
        Ok(UpperTriMatrix { rows })
    }

    pub fn zero(n: usize) -> Self {
        UpperTriMatrix {
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn diagonal(d: &ExponentVec) -> Self {
        let n = d.len();
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = d.0[i];
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Entry at 1-indexed `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i - 1][j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.rows[i - 1][j - 1] = v;
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row_sums(&self) -> ExponentVec {
        ExponentVec(self.rows.iter().map(|r| r.iter().sum()).collect())
    }

    pub fn col_sums(&self) -> ExponentVec {
        let n = self.size();
        ExponentVec(
            (0..n)
                .map(|j| self.rows.iter().map(|r| r[j]).sum())
                .collect(),
        )
    }

    /// Adds `rho` to the diagonal, erroring when an entry would turn negative.
    pub fn add_diag(&self, rho: &IntVec) -> Result<UpperTriMatrix> {
        if rho.len() != self.size() {
            return Err(Error::LengthMismatch(rho.len(), self.size()));
        }
        let mut rows = self.rows.clone();
        for i in 0..self.size() {
            let v = rows[i][i] as i64 + rho.0[i];
            if v < 0 {
                return Err(Error::NegativeEntry(i + 1));
            }
            rows[i][i] = v as u32;
        }
        Ok(UpperTriMatrix { rows })
    }
}

impl fmt::Debug for UpperTriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UpperTriMatrix [")?;
        for row in &self.rows {
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

/// Which admissible order breaks ties in a weight order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tiebreak {
    Hlex,
    Rlex,
}

/// A term order: one of the two built-in admissible orders, or a weight
/// order with a declared tiebreak.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrderSpec {
    Hlex,
    Rlex,
    Weight { weight: IntVec, tiebreak: Tiebreak },
}

impl TermOrderSpec {
    pub fn cmp(&self, a: &ExponentVec, b: &ExponentVec) -> Result<Ordering> {
        match self {
            TermOrderSpec::Hlex => cmp_hlex(a, b),
            TermOrderSpec::Rlex => cmp_rlex(a, b),
            TermOrderSpec::Weight { weight, tiebreak } => {
                if a.len() != b.len() {
                    return Err(Error::LengthMismatch(a.len(), b.len()));
                }
                match weight.dot(a).cmp(&weight.dot(b)) {
                    Ordering::Equal => match tiebreak {
                        Tiebreak::Hlex => cmp_hlex(a, b),
                        Tiebreak::Rlex => cmp_rlex(a, b),
                    },
                    ord => Ok(ord),
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            TermOrderSpec::Hlex => "hlex".into(),
            TermOrderSpec::Rlex => "rlex".into(),
            TermOrderSpec::Weight { .. } => "weight".into(),
        }
    }
}

/// Homogeneous lexicographic comparison: first by total degree, then by
/// the entry at the first differing position.
pub fn cmp_hlex(a: &ExponentVec, b: &ExponentVec) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        ord => return Ok(ord),
    }
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.cmp(y) {
            Ordering::Equal => {}
            ord => return Ok(ord),
        }
    }
    Ok(Ordering::Equal)
}

/// Reverse lexicographic comparison: first by total degree, then the
/// vector with the smaller entry at the last differing position wins.
pub fn cmp_rlex(a: &ExponentVec, b: &ExponentVec) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        ord => return Ok(ord),
    }
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            ord => return Ok(ord.reverse()),
        }
    }
    Ok(Ordering::Equal)
}

/// Borel dominance via the prefix-sum characterization.
pub fn borel_geq(a: &ExponentVec, b: &ExponentVec) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let mut pa: i64 = 0;
    let mut pb: i64 = 0;
    for (x, y) in a.0.iter().zip(&b.0) {
        pa += *x as i64;
        pb += *y as i64;
        if pa < pb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Produces an upper triangular matrix with row sums `a` and column sums
/// `b`, witnessing `a >=_Bor b`.
///
/// Starts from the bidiagonal matrix determined by the prefix-sum gaps
/// and repairs negative diagonal entries by a `(p, l, q)` exchange step
/// until all diagonal entries are nonnegative.
pub fn borel_witness(a: &ExponentVec, b: &ExponentVec) -> Result<UpperTriMatrix> {
    if !borel_geq(a, b)? {
        return Err(Error::ArgumentOutOfRange(
            "borel_witness requires a >=_Bor b".into(),
        ));
    }
    let n = a.len();
    // alpha[k] (1 <= k <= n-1) is the k-th prefix-sum gap; alpha[0] = alpha[n] = 0.
    let mut alpha = vec![0i64; n + 1];
    let mut pa = 0i64;
    let mut pb = 0i64;
    for k in 1..n {
        pa += a.0[k - 1] as i64;
        pb += b.0[k - 1] as i64;
        alpha[k] = pa - pb;
    }
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = b.0[i] as i64 - alpha[i];
        if i + 1 < n {
            m[i][i + 1] = alpha[i + 1];
        }
    }
    loop {
        let l = match (0..n).find(|&j| m[j][j] < 0) {
            None => break,
            Some(l) => l,
        };
        let p = (0..l)
            .find(|&p| m[p][l] > 0)
            .ok_or_else(|| Error::InvariantBreach("witness repair: no donor row".into()))?;
        let q = (l + 1..n)
            .find(|&q| m[l][q] > 0)
            .ok_or_else(|| Error::InvariantBreach("witness repair: no donor column".into()))?;
        m[l][l] += 1;
        m[p][q] += 1;
        m[p][l] -= 1;
        m[l][q] -= 1;
    }
    let rows = m
        .into_iter()
        .map(|row| row.into_iter().map(|e| e as u32).collect())
        .collect();
    let witness = UpperTriMatrix::new(rows)?;
    if witness.row_sums() != *a || witness.col_sums() != *b {
        return Err(Error::InvariantBreach("witness has wrong margins".into()));
    }
    Ok(witness)
}

/// All exponent vectors in `n` variables of total degree `d`, sorted
/// hlex-descending. The head of the list is `(d, 0, ..., 0)`.
pub fn exponents_of_degree(n: usize, d: u32) -> Vec<ExponentVec> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(out: &mut Vec<ExponentVec>, current: &mut Vec<u32>, pos: usize, rest: u32) {
        if pos + 1 == current.len() {
            current[pos] = rest;
            out.push(ExponentVec(current.clone()));
            return;
        }
        for e in (0..=rest).rev() {
            current[pos] = e;
            rec(out, current, pos + 1, rest - e);
        }
        current[pos] = 0;
    }
    if n == 0 {
        return out;
    }
    rec(&mut out, &mut current, 0, d);
    out
}
