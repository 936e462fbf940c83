//! Generic initial ideals and the generic-coefficient combinatorics.
//!
//! The generic initial ideal is computed by applying independent random
//! invertible upper triangular coordinate changes, taking the initial
//! ideal of each transform degree by degree with a Hilbert-function
//! certificate, and accepting only when all trials agree and the result
//! is Borel.
//!
//! The combinatorial side works in the coefficient ring generated by
//! the generic entries `Y_ij` (`i <= j`): [`alpha`] gives the
//! coefficient of a monomial in the image of another under the generic
//! substitution as a sum over upper triangular matrices with prescribed
//! margins, and [`p_rho`] the shifted variant entering the unipotent
//! fixedness argument.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::binsys::{gb_rlex, BinomialSystem};
use crate::error::{Error, Result};
use crate::hilbert::{hf_monomial_ideal, HilbertFn};
use crate::orders::{
    exponents_of_degree, ExponentVec, IntVec, TermOrderSpec, UpperTriMatrix,
};
use crate::polyalg::{
    apply_matrix, initial_ideal, normal_form, saturate_wrt_last, IdealGB, MonomialIdeal, Poly,
    Scalar,
};

/// Product over columns of the multinomial coefficient of the column
/// entries: the multiplicity of a matrix in the generic expansion.
pub fn mu(m: &UpperTriMatrix) -> BigInt {
    let n = m.size();
    let mut out = BigInt::one();
    for j in 1..=n {
        let total: u32 = (1..=n).map(|i| m.get(i, j)).sum();
        // Multinomial (total; column entries).
        let mut col = BigInt::one();
        let mut rest = total;
        for i in 1..=n {
            let e = m.get(i, j);
            for k in 0..e {
                col *= BigInt::from(rest - k);
            }
            let mut fact = BigInt::one();
            for k in 1..=e {
                fact *= BigInt::from(k);
            }
            col /= fact;
            rest -= e;
        }
        out *= col;
    }
    out
}

/// All upper triangular matrices with row sums `a` and column sums `b`.
/// Empty exactly when `a` does not dominate `b` in the Borel order.
pub fn u_matrices(a: &ExponentVec, b: &ExponentVec) -> Result<Vec<UpperTriMatrix>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let n = a.len();
    let mut out = Vec::new();
    let mut matrix = UpperTriMatrix::zero(n);
    let mut row_left: Vec<u32> = a.0.clone();
    // Fill column by column; in column j only rows 1..=j are free.
    fn fill(
        j: usize,
        n: usize,
        b: &[u32],
        matrix: &mut UpperTriMatrix,
        row_left: &mut Vec<u32>,
        out: &mut Vec<UpperTriMatrix>,
    ) {
        if j > n {
            if row_left.iter().all(|&r| r == 0) {
                out.push(matrix.clone());
            }
            return;
        }
        place(1, j, n, b[j - 1], b, matrix, row_left, out);
    }
    #[allow(clippy::too_many_arguments)]
    fn place(
        i: usize,
        j: usize,
        n: usize,
        rest: u32,
        b: &[u32],
        matrix: &mut UpperTriMatrix,
        row_left: &mut Vec<u32>,
        out: &mut Vec<UpperTriMatrix>,
    ) {
        if i == j {
            if rest <= row_left[i - 1] {
                matrix.set(i, j, rest);
                row_left[i - 1] -= rest;
                fill(j + 1, n, b, matrix, row_left, out);
                row_left[i - 1] += rest;
                matrix.set(i, j, 0);
            }
            return;
        }
        let max = rest.min(row_left[i - 1]);
        for e in 0..=max {
            matrix.set(i, j, e);
            row_left[i - 1] -= e;
            place(i + 1, j, n, rest - e, b, matrix, row_left, out);
            row_left[i - 1] += e;
            matrix.set(i, j, 0);
        }
    }
    fill(1, n, &b.0, &mut matrix, &mut row_left, &mut out);
    Ok(out)
}

/// An integer polynomial in the generic entries `Y_ij`, stored by its
/// monomial support: each key is the exponent table of a monomial.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<UpperTriMatrix, BigInt>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UpperTriMatrix, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: UpperTriMatrix, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: i64) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * BigInt::from(s));
        }
        out
    }

    /// Multiplies by the diagonal monomial `Y^v`.
    pub fn mul_diag_monomial(&self, v: &ExponentVec) -> CoeffPoly {
        let add = UpperTriMatrix::diagonal(v);
        self.mul_matrix_monomial(&add)
    }

    /// Multiplies by the monomial with the given exponent table.
    pub fn mul_matrix_monomial(&self, add: &UpperTriMatrix) -> CoeffPoly {
        let n = add.size();
        let mut out = CoeffPoly::zero();
        for (m, c) in &self.terms {
            let mut rows = m.rows().to_vec();
            for i in 0..n {
                for j in i..n {
                    rows[i][j] += add.rows()[i][j];
                }
            }
            out.add_term(
                UpperTriMatrix::new(rows).expect("sum of upper triangular"),
                c.clone(),
            );
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffTermJson {
    #[serde(rename = "M")]
    m: UpperTriMatrix,
    coef: String,
}

impl Serialize for CoeffPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<CoeffTermJson> = self
            .terms
            .iter()
            .map(|(m, c)| CoeffTermJson {
                m: m.clone(),
                coef: c.to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<CoeffTermJson>::deserialize(d)?;
        let mut out = CoeffPoly::zero();
        for t in terms {
            let c: BigInt = t.coef.parse().map_err(D::Error::custom)?;
            out.add_term(t.m, c);
        }
        Ok(out)
    }
}

/// The coefficient of `X^a` in the generic image of `X^b`: the sum of
/// `mu(M) Y^M` over upper triangular matrices with row sums `a` and
/// column sums `b`.
pub fn alpha(b: &ExponentVec, a: &ExponentVec) -> Result<CoeffPoly> {
    let mut out = CoeffPoly::zero();
    for m in u_matrices(a, b)? {
        let c = mu(&m);
        out.add_term(m, c);
    }
    Ok(out)
}

/// The shifted coefficient sum `p^rho_{b,c}`: over matrices with row
/// sums `b` and column sums `c`, with the negative part of the
/// displacement removed from the diagonal exponent. Well defined
/// whenever both shifted vectors stay in the degree component.
pub fn p_rho(b: &ExponentVec, c: &ExponentVec, rho: &IntVec) -> Result<CoeffPoly> {
    rho.plus(b)?;
    rho.plus(c)?;
    let neg = rho.neg_part();
    let down = IntVec::new(neg.0.iter().map(|&e| -(e as i64)).collect());
    let mut out = CoeffPoly::zero();
    for m in u_matrices(b, c)? {
        let shifted = m.add_diag(&down)?;
        out.add_term(shifted, mu(&m));
    }
    Ok(out)
}

/// The full generic image of the monomial `X^b`: a map from exponent
/// vectors to their coefficient polynomials, computed by direct
/// expansion of the product of generic linear forms. Independent of
/// [`alpha`], which enumerates matrices instead.
pub fn phi_expand(b: &ExponentVec) -> BTreeMap<ExponentVec, CoeffPoly> {
    let n = b.len();
    let mut acc: BTreeMap<ExponentVec, CoeffPoly> = BTreeMap::new();
    let mut one = CoeffPoly::zero();
    one.add_term(UpperTriMatrix::zero(n), BigInt::one());
    acc.insert(ExponentVec::zero(n), one);
    for j in 1..=n {
        for _ in 0..b.entry(j) {
            // Multiply by the linear form sum_{i <= j} Y_ij X_i.
            let mut next: BTreeMap<ExponentVec, CoeffPoly> = BTreeMap::new();
            for (xe, cp) in &acc {
                for i in 1..=j {
                    let xe2 = xe.add(&ExponentVec::unit(n, i)).expect("equal lengths");
                    let mut e = UpperTriMatrix::zero(n);
                    e.set(i, j, 1);
                    let cp2 = cp.mul_matrix_monomial(&e);
                    let entry = next.entry(xe2).or_insert_with(CoeffPoly::zero);
                    *entry = entry.add(&cp2);
                }
            }
            acc = next;
        }
    }
    acc
}

/// Initial ideal of the span of homogeneous generators, computed degree
/// by degree through sparse Gaussian elimination and certified by
/// comparison with the prescribed Hilbert function of the ideal: the
/// candidate monomial ideal grows until its Hilbert function matches
/// exactly, which pins it to the initial ideal.
pub fn initial_ideal_certified(
    n: usize,
    gens: &[Poly],
    ord: &TermOrderSpec,
    h_ideal: &HilbertFn,
    max_extra: u32,
) -> Result<MonomialIdeal> {
    let mut by_degree: BTreeMap<u32, Vec<Poly>> = BTreeMap::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let d = g.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        by_degree.entry(d).or_default().push(g.clone());
    }
    if by_degree.is_empty() {
        return MonomialIdeal::new(n, vec![]);
    }
    let d0 = *by_degree.keys().next().unwrap();
    let d_last = *by_degree.keys().last().unwrap();
    let mut pivots_accum: Vec<ExponentVec> = Vec::new();
    // Echelon rows of the current degree as sparse vectors over the
    // ord-descending monomial list.
    let mut prev_rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    let mut prev_monomials: Vec<ExponentVec> = Vec::new();
    for e in d0..=(d_last + max_extra) {
        let mut monomials = exponents_of_degree(n, e);
        monomials.sort_by(|x, y| ord.cmp(y, x).expect("equal lengths"));
        let index: std::collections::HashMap<&ExponentVec, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut incoming: Vec<Vec<(usize, Scalar)>> = Vec::new();
        // Variable multiples of the previous echelon basis.
        for row in &prev_rows {
            for v in 1..=n {
                let unit = ExponentVec::unit(n, v);
                let mut new_row: Vec<(usize, Scalar)> = row
                    .iter()
                    .map(|(col, c)| {
                        let m = prev_monomials[*col].add(&unit).expect("equal lengths");
                        (index[&m], c.clone())
                    })
                    .collect();
                new_row.sort_by_key(|(col, _)| *col);
                incoming.push(new_row);
            }
        }
        // Fresh generators of this degree.
        if let Some(gs) = by_degree.get(&e) {
            for g in gs {
                let mut row: Vec<(usize, Scalar)> =
                    g.terms().map(|(m, c)| (index[m], c.clone())).collect();
                row.sort_by_key(|(col, _)| *col);
                incoming.push(row);
            }
        }
        // Sparse forward elimination.
        let mut echelon: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for mut row in incoming {
            loop {
                let (lead, lc) = match row.first() {
                    None => break,
                    Some((col, c)) => (*col, c.clone()),
                };
                match echelon.get(&lead) {
                    None => {
                        let inv = lc.recip();
                        for (_, c) in row.iter_mut() {
                            *c *= &inv;
                        }
                        echelon.insert(lead, row);
                        break;
                    }
                    Some(pivot) => {
                        row = row_subtract(&row, pivot, &lc);
                    }
                }
            }
        }
        let rows: Vec<Vec<(usize, Scalar)>> = echelon.into_values().collect();
        for row in &rows {
            pivots_accum.push(monomials[row[0].0].clone());
        }
        let candidate = MonomialIdeal::new(n, pivots_accum.clone())?;
        pivots_accum = candidate.min_gens().to_vec();
        // Certificate: the candidate is contained in the initial ideal
        // by construction; matching Hilbert functions force equality.
        let h_candidate = hf_monomial_ideal(&candidate, e as i64 + n as i64 + 2)?;
        if h_candidate.eq_exact(h_ideal)? {
            return Ok(candidate);
        }
        prev_rows = rows;
        prev_monomials = monomials;
    }
    Err(Error::InvariantBreach(
        "initial ideal did not stabilize within the degree cap".into(),
    ))
}

fn row_subtract(
    row: &[(usize, Scalar)],
    pivot: &[(usize, Scalar)],
    factor: &Scalar,
) -> Vec<(usize, Scalar)> {
    // row - factor * pivot, both sorted by column.
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < pivot.len() {
        if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || pivot[j].0 < row[i].0 {
            out.push((pivot[j].0, -(factor * &pivot[j].1)));
            j += 1;
        } else {
            let c = &row[i].1 - factor * &pivot[j].1;
            if !c.is_zero() {
                out.push((row[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A generic initial ideal computation: the accepted result plus the
/// random matrices that produced it, kept as exact rationals for
/// certificates.
#[derive(Clone, Debug)]
pub struct GinRun {
    pub result: MonomialIdeal,
    pub matrices: Vec<Vec<Vec<Scalar>>>,
}

pub(crate) fn random_upper_triangular<R: Rng>(
    n: usize,
    bound: u64,
    unipotent: bool,
    rng: &mut R,
) -> Vec<Vec<Scalar>> {
    let mut g = vec![vec![Scalar::zero(); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            if j < i {
                continue;
            }
            if i == j {
                *entry = if unipotent {
                    Scalar::one()
                } else {
                    Scalar::from_integer(BigInt::from(rng.gen_range(1..=bound)))
                };
            } else {
                *entry = Scalar::from_integer(BigInt::from(rng.gen_range(1..=bound)));
            }
        }
    }
    g
}

/// Computes the generic initial ideal by `trials` independent random
/// upper triangular coordinate changes. All trials must produce the
/// same initial ideal and the result must be Borel; on disagreement the
/// entry range is enlarged and the round repeated before giving up.
pub fn gin_run(ideal: &IdealGB, tau: &TermOrderSpec, trials: u32, seed: u64) -> Result<GinRun> {
    if matches!(tau, TermOrderSpec::Weight { .. }) {
        return Err(Error::ArgumentOutOfRange(
            "generic initial ideals are computed for hlex or rlex".into(),
        ));
    }
    if trials < 2 {
        return Err(Error::ArgumentOutOfRange("need at least two trials".into()));
    }
    let n = ideal.num_vars();
    if ideal.is_zero() {
        return Ok(GinRun {
            result: MonomialIdeal::zero(n),
            matrices: vec![],
        });
    }
    // Hilbert function of the ideal, read off its own initial ideal;
    // invariant under coordinate change.
    let own_init = initial_ideal(ideal);
    let h = hf_monomial_ideal(&own_init, ideal.max_gen_degree() as i64 + n as i64 + 2)?;
    for round in 0..3u64 {
        let bound = 10_000u64 * 10u64.pow(round as u32);
        let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(round.wrapping_mul(0x9e37)));
        let mut results: Vec<MonomialIdeal> = Vec::new();
        let mut matrices = Vec::new();
        for _ in 0..trials {
            let g = random_upper_triangular(n, bound, false, &mut rng);
            let transformed: Vec<Poly> = ideal
                .basis()
                .iter()
                .map(|f| apply_matrix(&g, f))
                .collect::<Result<_>>()?;
            let init = initial_ideal_certified(n, &transformed, tau, &h, 30)?;
            matrices.push(g);
            results.push(init);
        }
        if results.windows(2).all(|w| w[0] == w[1]) {
            let result = results.pop().unwrap();
            if !result.is_borel() {
                return Err(Error::InvariantBreach(
                    "agreed initial ideal is not Borel".into(),
                ));
            }
            return Ok(GinRun { result, matrices });
        }
    }
    Err(Error::GinTrialsDisagree)
}

/// The generic initial ideal; see [`gin_run`] for the protocol.
pub fn gin_compute(
    ideal: &IdealGB,
    tau: &TermOrderSpec,
    trials: u32,
    seed: u64,
) -> Result<MonomialIdeal> {
    gin_run(ideal, tau, trials, seed).map(|r| r.result)
}

/// Whether the ideal of the system is fixed by random unipotent
/// coordinate changes: every transformed generator must reduce to zero
/// against the basis, which forces equality since linear substitutions
/// preserve graded dimensions.
pub fn check_unipotent_fixed(sys: &BinomialSystem, trials: u32, seed: u64) -> Result<bool> {
    let gb = gb_rlex(sys)?;
    let n = sys.num_vars();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g = random_upper_triangular(n, 10_000, true, &mut rng);
        for f in gb.basis() {
            let image = apply_matrix(&g, f)?;
            if !normal_form(&image, gb.basis(), gb.order()).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks that forming the generic initial ideal commutes with
/// saturation: the Gin of the saturated ideal against the stripped Gin.
/// The ideal must be presented in rlex and belong to a family where the
/// colon with the last variable is the full saturation.
pub fn gin_sat_commute_check(ideal: &IdealGB, trials: u32, seed: u64) -> Result<bool> {
    if *ideal.order() != TermOrderSpec::Rlex {
        return Err(Error::OrderMismatch {
            expected: "rlex".into(),
            got: ideal.order().name(),
        });
    }
    let saturated = saturate_wrt_last(ideal)?;
    let lhs = gin_compute(&saturated, &TermOrderSpec::Rlex, trials, seed)?;
    let gin = gin_compute(ideal, &TermOrderSpec::Rlex, trials, seed.wrapping_add(1))?;
    let rhs = gin.strip_last();
    Ok(lhs == rhs)
}

/// Convenience: the generic initial ideal of the ideal of a binomial
/// system. For good systems this agrees with the plain initial ideal.
pub fn gin_of_system(
    sys: &BinomialSystem,
    tau: &TermOrderSpec,
    trials: u32,
    seed: u64,
) -> Result<MonomialIdeal> {
    gin_compute(&gb_rlex(sys)?, tau, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binsys::sample;
    use crate::orders::borel_geq;
    use crate::polyalg::buchberger;

    fn ev(v: &[u32]) -> ExponentVec {
        ExponentVec::new(v.to_vec())
    }

    #[test]
    fn mu_examples() {
        let diag = UpperTriMatrix::diagonal(&ev(&[2, 1, 3]));
        assert_eq!(mu(&diag), BigInt::one());
        assert_eq!(mu(&UpperTriMatrix::zero(3)), BigInt::one());
        // One column split (1, 1): multinomial 2.
        let mut m = UpperTriMatrix::zero(2);
        m.set(1, 2, 1);
        m.set(2, 2, 1);
        assert_eq!(mu(&m), BigInt::from(2));
    }

    #[test]
    fn u_matrices_examples() {
        let a = ev(&[2, 1]);
        let ms = u_matrices(&a, &a).unwrap();
        assert_eq!(ms, vec![UpperTriMatrix::diagonal(&a)]);

        let ms = u_matrices(&ev(&[1, 0, 1]), &ev(&[0, 1, 1])).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].get(1, 2), 1);
        assert_eq!(ms[0].get(3, 3), 1);

        assert!(u_matrices(&ev(&[0, 1, 1]), &ev(&[1, 0, 1]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn u_matrices_nonempty_iff_borel() {
        for d in 1..=3u32 {
            let all = exponents_of_degree(3, d);
            for a in &all {
                for b in &all {
                    let nonempty = !u_matrices(a, b).unwrap().is_empty();
                    assert_eq!(nonempty, borel_geq(a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let b = ev(&[1, 2]);
        let diag = alpha(&b, &b).unwrap();
        assert_eq!(diag.num_terms(), 1);
        let (m, c) = diag.terms().next().unwrap();
        assert_eq!(*m, UpperTriMatrix::diagonal(&b));
        assert_eq!(*c, BigInt::one());

        // The coefficient of X_1 in the image of X_2 is the single
        // off-diagonal entry Y_12.
        let a = alpha(&ev(&[0, 1]), &ev(&[1, 0])).unwrap();
        assert_eq!(a.num_terms(), 1);
        let (m, c) = a.terms().next().unwrap();
        assert_eq!(m.get(1, 2), 1);
        assert_eq!(*c, BigInt::one());

        assert!(alpha(&ev(&[2, 0]), &ev(&[0, 2])).unwrap().is_zero());
    }

    #[test]
    fn alpha_matches_expansion() {
        // Small exhaustive cross-check; the full-size run is in the
        // acceptance suite.
        for d in 1..=2u32 {
            for b in exponents_of_degree(3, d) {
                let expansion = phi_expand(&b);
                for a in exponents_of_degree(3, d) {
                    let direct = alpha(&b, &a).unwrap();
                    let expanded = expansion.get(&a).cloned().unwrap_or_else(CoeffPoly::zero);
                    assert_eq!(direct, expanded, "b={b:?}, a={a:?}");
                }
            }
        }
    }

    #[test]
    fn expansion_support_is_dominance() {
        for b in exponents_of_degree(3, 2) {
            let expansion = phi_expand(&b);
            for a in exponents_of_degree(3, 2) {
                assert_eq!(
                    expansion.contains_key(&a),
                    borel_geq(&a, &b).unwrap(),
                    "b={b:?}, a={a:?}"
                );
            }
        }
    }

    #[test]
    fn p_rho_examples() {
        // On equal vectors the sum is the single diagonal monomial with
        // the negative displacement part removed.
        let b = ev(&[1, 2, 0]);
        let rho = IntVec::new(vec![1, -1, 0]);
        let p = p_rho(&b, &b, &rho).unwrap();
        assert_eq!(p.num_terms(), 1);
        let (m, c) = p.terms().next().unwrap();
        assert_eq!(*m, UpperTriMatrix::diagonal(&ev(&[1, 1, 0])));
        assert_eq!(*c, BigInt::one());
    }

    #[test]
    fn p_rho_identities_on_good_configurations() {
        // With agreeing prefixes below the displacement top, the two
        // displayed identities hold.
        let cases = vec![
            (ev(&[1, 2, 1, 0]), ev(&[1, 1, 2, 0]), vec![1, -1, 0, 0]),
            (ev(&[0, 1, 2, 1]), ev(&[0, 1, 1, 2]), vec![1, 0, -1, 0]),
            (ev(&[1, 1, 2, 0]), ev(&[1, 1, 1, 1]), vec![0, 1, -1, 0]),
            // Incomparable pair: both sides of the identities vanish.
            (ev(&[1, 1, 1, 1]), ev(&[1, 1, 2, 0]), vec![0, 1, -1, 0]),
        ];
        for (b, c, rv) in cases {
            let rho = IntVec::new(rv);
            let m = rho.m_index();
            assert!((1..m).all(|i| b.entry(i) == c.entry(i)), "b={b:?} c={c:?}");
            let p = p_rho(&b, &c, &rho).unwrap();
            let lhs1 = alpha(&c, &b).unwrap();
            assert_eq!(lhs1, p.mul_diag_monomial(&rho.neg_part()));
            let b2 = rho.plus(&b).unwrap();
            let c2 = rho.plus(&c).unwrap();
            let lhs2 = alpha(&c2, &b2).unwrap();
            assert_eq!(lhs2, p.mul_diag_monomial(&rho.pos_part()));
        }
    }

    #[test]
    fn example_pair_breaks_the_identity_by_a_factor_of_two() {
        // The five-variable example: the matrix sum picks up
        // multiplicity two after the shift.
        let b = ev(&[0, 2, 0, 3, 0]);
        let c = ev(&[0, 2, 0, 2, 1]);
        let rho = IntVec::new(vec![1, -2, 2, -2, 1]);
        let ms = u_matrices(&b, &c).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].get(5, 5), 0);
        assert_eq!(mu(&ms[0]), BigInt::one());
        let shifted = ms[0].add_diag(&rho).unwrap();
        assert_eq!(mu(&shifted), BigInt::from(2));

        let p = p_rho(&b, &c, &rho).unwrap();
        let b2 = rho.plus(&b).unwrap();
        let c2 = rho.plus(&c).unwrap();
        let lhs = alpha(&c2, &b2).unwrap();
        let rhs_single = p.mul_diag_monomial(&rho.pos_part());
        assert_ne!(lhs, rhs_single);
        assert_eq!(lhs, rhs_single.scale(2));
    }

    #[test]
    fn borel_matrix_diagonal_lemma() {
        // On good configurations every matrix has the column sums on
        // the diagonal up to the displacement top, and the diagonal
        // shift is a bijection between the two matrix sets.
        let b = ev(&[0, 1, 2, 1]);
        let c = ev(&[0, 1, 1, 2]);
        let rho = IntVec::new(vec![1, 0, -1, 0]);
        let m_top = rho.m_index();
        for m in u_matrices(&b, &c).unwrap() {
            for j in 1..=m_top {
                assert_eq!(m.get(j, j), c.entry(j));
            }
        }
        let b2 = rho.plus(&b).unwrap();
        let c2 = rho.plus(&c).unwrap();
        let forward: Vec<UpperTriMatrix> = u_matrices(&b, &c)
            .unwrap()
            .into_iter()
            .map(|m| m.add_diag(&rho).unwrap())
            .collect();
        let mut expected = u_matrices(&b2, &c2).unwrap();
        let mut got = forward;
        expected.sort();
        got.sort();
        assert_eq!(expected, got);
    }

    #[test]
    fn certified_initial_ideal_matches_buchberger() {
        let f = Poly::binomial(ev(&[2, 0, 0]), ev(&[0, 1, 1])).unwrap();
        let g = Poly::binomial(ev(&[1, 1, 0]), ev(&[0, 0, 2])).unwrap();
        for ord in [TermOrderSpec::Rlex, TermOrderSpec::Hlex] {
            let gb = buchberger(3, &[f.clone(), g.clone()], ord.clone()).unwrap();
            let h = hf_monomial_ideal(&initial_ideal(&gb), 8).unwrap();
            let fast = initial_ideal_certified(3, &[f.clone(), g.clone()], &ord, &h, 30).unwrap();
            assert_eq!(fast, initial_ideal(&gb));
        }
    }

    #[test]
    fn gin_of_borel_ideal_is_itself() {
        let b = crate::borel::borel_closure(&[ev(&[0, 2, 1])]).unwrap();
        let ideal = b.ideal().to_ideal_gb(TermOrderSpec::Rlex);
        let gin = gin_compute(&ideal, &TermOrderSpec::Rlex, 2, 42).unwrap();
        assert_eq!(gin, b.ideal());
        let gin_h = gin_compute(&ideal, &TermOrderSpec::Hlex, 2, 43).unwrap();
        assert_eq!(gin_h, b.ideal());
    }

    #[test]
    fn gin_equals_initial_for_good_systems() {
        let mut rng = ChaCha20Rng::seed_from_u64(19);
        for k in 0..4 {
            let sys = sample::random_good_system(4, 3, &mut rng);
            let gb = gb_rlex(&sys).unwrap();
            let gin = gin_compute(&gb, &TermOrderSpec::Rlex, 2, 100 + k).unwrap();
            assert_eq!(gin, initial_ideal(&gb));
        }
    }

    #[test]
    fn gin_is_invariant_under_upper_triangular_preimage() {
        let sys = {
            let mut rng = ChaCha20Rng::seed_from_u64(23);
            sample::random_mall_system(3, 3, &mut rng)
        };
        let gb = gb_rlex(&sys).unwrap();
        let gin = gin_compute(&gb, &TermOrderSpec::Rlex, 2, 7).unwrap();
        // Pre-apply a fixed upper triangular matrix.
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        let g = random_upper_triangular(3, 50, false, &mut rng);
        let transformed: Vec<Poly> = gb
            .basis()
            .iter()
            .map(|f| apply_matrix(&g, f).unwrap())
            .collect();
        let gb2 = buchberger(3, &transformed, TermOrderSpec::Rlex).unwrap();
        let gin2 = gin_compute(&gb2, &TermOrderSpec::Rlex, 2, 8).unwrap();
        assert_eq!(gin, gin2);
    }

    #[test]
    fn unipotent_fixedness() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let good = sample::random_good_system(4, 3, &mut rng);
        assert!(check_unipotent_fixed(&good, 3, 5).unwrap());

        let ex = crate::binsys::example_admissible_not_good();
        assert!(!check_unipotent_fixed(&ex, 2, 5).unwrap());

        // A Borel monomial ideal as a degenerate system.
        let b = crate::borel::borel_closure(&[ev(&[1, 1, 1, 0])]).unwrap();
        let sys = BinomialSystem::new(
            4,
            3,
            b.to_set(),
            std::collections::BTreeSet::new(),
            IntVec::new(vec![0, 0, 0, 0]),
        )
        .unwrap();
        assert!(check_unipotent_fixed(&sys, 3, 6).unwrap());
    }

    #[test]
    fn gin_and_saturation_commute_on_samples() {
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        let sys = sample::random_good_system(4, 3, &mut rng);
        let gb = gb_rlex(&sys).unwrap();
        assert!(gin_sat_commute_check(&gb, 2, 11).unwrap());
        // For good systems both sides are the starred union.
        let sat_gin =
            gin_compute(&saturate_wrt_last(&gb).unwrap(), &TermOrderSpec::Rlex, 2, 12).unwrap();
        let expected = sys.source_set().ideal().strip_last();
        assert_eq!(sat_gin, expected);
    }

    #[test]
    fn coeff_poly_json_round_trip() {
        let a = alpha(&ev(&[1, 1, 1]), &ev(&[2, 1, 0])).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let back: CoeffPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
    }
}
