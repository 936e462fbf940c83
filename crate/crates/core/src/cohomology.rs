//! Cohomological Hilbert functions of the supported quotient families.
//!
//! Supported quotients: `S/a` for a Borel monomial ideal, and `S/F` or
//! `S/F^sat` for an admissible binomial system. All of these carry a
//! filtration with quotients that are zero or Cohen-Macaulay of
//! dimension equal to their index, so the `i`-th cohomological Hilbert
//! function is read off the dimension-`i` piece: for a Cohen-Macaulay
//! module of dimension `i` only the `i`-th local cohomology survives,
//! with dimensions `(-1)^i (h - p)`. The degree-zero part is the
//! saturation gap.
//!
//! The assembly is audited on every construction: quotient dimensions
//! must equal their index, and the alternating sum of the profile must
//! reproduce `h - p` of the quotient on the whole window.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::binsys::{
    classify, filtration_ideal, gb_rlex, initial_hlex, sat_gb, BinomialSystem, SystemClass,
};
use crate::error::{Error, Result};
use crate::gin::gin_compute;
use crate::hilbert::{hf_monomial_ideal, ring_hf, HilbertFn, NumFn, QPolynomial, Tail};
use crate::orders::TermOrderSpec;
use crate::polyalg::{buchberger, initial_ideal, IdealGB, MonomialIdeal};

/// A quotient in the computable family.
#[derive(Clone, Debug)]
pub enum CohomInput {
    /// `S/a` for a Borel monomial ideal, saturated or not.
    Borel(MonomialIdeal),
    /// `S/F` for the (unsaturated) ideal of an admissible system.
    System(BinomialSystem),
    /// `S/F^sat` for an admissible system.
    SaturatedSystem(BinomialSystem),
}

/// The family of cohomological Hilbert functions `h^0, ..., h^n` of a
/// quotient, with the window its tables were evaluated on. Each entry
/// has a zero upper tail and a polynomial lower tail, both exact.
#[derive(Clone, Debug)]
pub struct CohomProfile {
    n: usize,
    window: (i64, i64),
    fns: Vec<NumFn>,
    h_quotient: NumFn,
    p_quotient: QPolynomial,
    dim: usize,
}

impl CohomProfile {
    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    /// `h^i` as an exact function.
    pub fn h(&self, i: usize) -> &NumFn {
        &self.fns[i]
    }

    pub fn fns(&self) -> &[NumFn] {
        &self.fns
    }

    /// Krull dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_quotient(&self) -> &NumFn {
        &self.h_quotient
    }

    pub fn p_quotient(&self) -> &QPolynomial {
        &self.p_quotient
    }

    /// The alternating-sum identity on the window: the signed sum of
    /// the profile must equal `h - p` of the quotient everywhere.
    pub fn serre_check(&self) -> Result<bool> {
        for j in self.window.0..=self.window.1 {
            let mut acc: i64 = 0;
            for (i, f) in self.fns.iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                acc += sign * f.eval(j)?;
            }
            let rhs = self.h_quotient.eval(j)? - self.p_quotient.eval_int(j)?;
            if acc != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact pointwise comparison against another profile, index by
    /// index.
    pub fn leq(&self, other: &CohomProfile) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        for i in 0..=self.n {
            if !self.fns[i].leq_exact(&other.fns[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn eq(&self, other: &CohomProfile) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// The profile as the list-of-entries JSON shape.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .fns
            .iter()
            .enumerate()
            .map(|(i, f)| serde_json::json!({ "i": i, "fn": f }))
            .collect();
        serde_json::Value::Array(entries)
    }
}

/// The filtration of a Borel monomial ideal: the `i`-th member is the
/// extension of the saturated retraction to the first `n - i`
/// variables. Inclusions are verified.
pub fn monomial_filtration(ideal: &MonomialIdeal) -> Result<Vec<MonomialIdeal>> {
    if !ideal.is_borel() {
        return Err(Error::NotBorelIdeal);
    }
    let n = ideal.num_vars();
    let mut chain = Vec::with_capacity(n);
    for i in 0..n {
        let l = n - i;
        let g = ideal.restrict(l).strip_last().extend(n);
        chain.push(g);
    }
    for w in chain.windows(2) {
        for g in w[0].min_gens() {
            if !w[1].contains(g) {
                return Err(Error::InvariantBreach(
                    "monomial filtration is not increasing".into(),
                ));
            }
        }
    }
    Ok(chain)
}

/// The chain of filtration ideals of an admissible system, starting at
/// the saturation and ending at the whole ring, with every inclusion
/// verified.
pub fn dimension_filtration(sys: &BinomialSystem) -> Result<Vec<IdealGB>> {
    if classify(sys) < SystemClass::Admissible {
        return Err(Error::ClassificationTooWeak {
            need: "Admissible".into(),
            got: format!("{:?}", classify(sys)),
        });
    }
    let n = sys.num_vars();
    let mut chain = Vec::with_capacity(n);
    for i in 0..n {
        chain.push(filtration_ideal(sys, i)?);
    }
    for w in chain.windows(2) {
        for g in w[0].basis() {
            if !w[1].contains(g) {
                return Err(Error::InvariantBreach(
                    "dimension filtration is not increasing".into(),
                ));
            }
        }
    }
    Ok(chain)
}

/// Ideal-side Hilbert function of a Groebner-presented ideal, through
/// its initial ideal.
fn ideal_hf(ideal: &IdealGB, d_max: i64) -> Result<HilbertFn> {
    hf_monomial_ideal(&initial_ideal(ideal), d_max)
}

/// Builds the profile from the ideal-side Hilbert functions of the
/// chain and of the (possibly unsaturated) ideal itself.
fn assemble_profile(
    n: usize,
    chain_hfs: &[HilbertFn],
    h_ideal: &HilbertFn,
    window: Option<(i64, i64)>,
    d_gen: i64,
) -> Result<CohomProfile> {
    let top = chain_hfs
        .iter()
        .map(|h| h.stab)
        .chain([h_ideal.stab])
        .max()
        .unwrap_or(0);
    let (mut lo, mut hi) = window.unwrap_or((-(d_gen + n as i64 + 2), d_gen + n as i64 + 2));
    lo = lo.min(-1);
    hi = hi.max(top + n as i64 + 1);
    let ring = ring_hf(n, hi + 1);
    let h_quotient = ring.f.sub(&h_ideal.f)?;
    let p_quotient = match h_quotient.upper() {
        Tail::Zero => QPolynomial::zero(),
        Tail::Poly(p) => p.clone(),
    };
    let dim = p_quotient.degree().map(|d| d + 1).unwrap_or(0);

    let mut fns: Vec<NumFn> = Vec::with_capacity(n + 1);
    // Degree zero: the saturation gap.
    let h0 = chain_hfs[0].f.sub(&h_ideal.f)?;
    if !h0.is_nonnegative_on_table() || !matches!(h0.upper(), Tail::Zero) {
        return Err(Error::InvariantBreach(
            "saturation gap is not finite and nonnegative".into(),
        ));
    }
    fns.push(h0);
    // Middle degrees from the chain pieces.
    for i in 1..n {
        let h_piece = chain_hfs[i].f.sub(&chain_hfs[i - 1].f)?;
        let p_piece = match h_piece.upper() {
            Tail::Zero => QPolynomial::zero(),
            Tail::Poly(p) => p.clone(),
        };
        let piece_is_zero = p_piece.is_zero()
            && (lo..=hi).all(|j| h_piece.eval(j).map(|v| v == 0).unwrap_or(false));
        if piece_is_zero {
            fns.push(NumFn::zero());
            continue;
        }
        // Dimension audit: the piece must have dimension exactly i.
        if p_piece.degree() != Some(i - 1) {
            return Err(Error::InvariantBreach(format!(
                "filtration piece {i} has polynomial degree {:?}, expected {}",
                p_piece.degree(),
                i as i64 - 1
            )));
        }
        let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
        let mut values = Vec::new();
        for j in lo..=hi {
            let v = sign * (h_piece.eval(j)? - p_piece.eval_int(j)?);
            if v < 0 {
                return Err(Error::InvariantBreach(format!(
                    "negative cohomology dimension at index {i}, degree {j}"
                )));
            }
            values.push(v);
        }
        let lower = Tail::Poly(p_piece.scale(&BigRational::from_integer(BigInt::from(-sign))));
        fns.push(NumFn::new(lo, values, Tail::Zero, lower));
    }
    // Top index: nonzero only for the zero ideal, handled separately.
    fns.push(NumFn::zero());
    // Vanishing above the dimension.
    for (i, f) in fns.iter().enumerate() {
        if i > dim {
            let vanishes = (lo..=hi).all(|j| f.eval(j).map(|v| v == 0).unwrap_or(false));
            if !vanishes {
                return Err(Error::InvariantBreach(format!(
                    "cohomology does not vanish above the dimension at index {i}"
                )));
            }
        }
    }
    let profile = CohomProfile {
        n,
        window: (lo, hi),
        fns,
        h_quotient,
        p_quotient,
        dim,
    };
    if !profile.serre_check()? {
        return Err(Error::InvariantBreach(
            "alternating-sum identity fails on the window".into(),
        ));
    }
    Ok(profile)
}

/// Profile of the full ring: only the top local cohomology survives.
fn ring_profile(n: usize, window: Option<(i64, i64)>) -> Result<CohomProfile> {
    let (mut lo, mut hi) = window.unwrap_or((-(n as i64 + 3), n as i64 + 3));
    lo = lo.min(-(n as i64) - 2);
    hi = hi.max(1);
    let ring = ring_hf(n, hi + 1);
    let p = match ring.f.upper() {
        Tail::Zero => QPolynomial::zero(),
        Tail::Poly(p) => p.clone(),
    };
    let mut fns = vec![NumFn::zero(); n + 1];
    let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
    let mut values = Vec::new();
    for j in lo..=hi {
        values.push(sign * (ring.f.eval(j)? - p.eval_int(j)?));
    }
    let lower = Tail::Poly(p.scale(&BigRational::from_integer(BigInt::from(-sign))));
    fns[n] = NumFn::new(lo, values, Tail::Zero, lower);
    let profile = CohomProfile {
        n,
        window: (lo, hi),
        fns,
        h_quotient: ring.f,
        p_quotient: p,
        dim: n,
    };
    if !profile.serre_check()? {
        return Err(Error::InvariantBreach(
            "alternating-sum identity fails for the ring".into(),
        ));
    }
    Ok(profile)
}

/// The cohomological Hilbert functions of a quotient in the supported
/// family, assembled from its dimension filtration.
pub fn cohom_profile(input: &CohomInput, window: Option<(i64, i64)>) -> Result<CohomProfile> {
    match input {
        CohomInput::Borel(ideal) => {
            let n = ideal.num_vars();
            if ideal.is_zero() {
                return ring_profile(n, window);
            }
            if !ideal.is_borel() {
                return Err(Error::OutOfFamily(
                    "monomial quotients are supported for Borel ideals".into(),
                ));
            }
            let d_gen = ideal.max_gen_degree() as i64;
            let chain = monomial_filtration(ideal)?;
            let d_max = d_gen + n as i64 + 2;
            let chain_hfs: Vec<HilbertFn> = chain
                .iter()
                .map(|g| hf_monomial_ideal(g, d_max))
                .collect::<Result<_>>()?;
            let h_ideal = hf_monomial_ideal(ideal, d_max)?;
            assemble_profile(n, &chain_hfs, &h_ideal, window, d_gen)
        }
        CohomInput::System(sys) | CohomInput::SaturatedSystem(sys) => {
            let n = sys.num_vars();
            if sys.is_empty() {
                return ring_profile(n, window);
            }
            let d_gen = sys.degree() as i64;
            let chain = dimension_filtration(sys)?;
            let d_max = d_gen + n as i64 + 2;
            let chain_hfs: Vec<HilbertFn> = chain
                .iter()
                .map(|g| ideal_hf(g, d_max))
                .collect::<Result<_>>()?;
            let h_ideal = match input {
                CohomInput::System(_) => ideal_hf(&gb_rlex(sys)?, d_max)?,
                _ => chain_hfs[0].clone(),
            };
            assemble_profile(n, &chain_hfs, &h_ideal, window, d_gen)
        }
    }
}

/// Initial ideal of the system's ideal under the given order, as a
/// Borel monomial ideal; rejects orders or systems whose initial ideal
/// leaves the computable family.
fn initial_as_borel(sys: &BinomialSystem, tau: &TermOrderSpec) -> Result<MonomialIdeal> {
    let init = match tau {
        TermOrderSpec::Rlex => sys.source_set().ideal(),
        TermOrderSpec::Hlex => {
            if classify(sys) >= SystemClass::Mall {
                initial_hlex(sys)?
            } else {
                let gb = buchberger(
                    sys.num_vars(),
                    &crate::binsys::generators(sys),
                    TermOrderSpec::Hlex,
                )?;
                initial_ideal(&gb)
            }
        }
        TermOrderSpec::Weight { .. } => {
            return Err(Error::OutOfFamily(
                "monotonicity checks run on hlex or rlex".into(),
            ))
        }
    };
    if !init.is_borel() {
        return Err(Error::OutOfFamily(
            "initial ideal is not Borel, so its cohomology is out of reach".into(),
        ));
    }
    Ok(init)
}

/// Degreewise monotonicity of cohomology under passing to the initial
/// ideal: `h^i` of the quotient never exceeds `h^i` of the quotient by
/// the initial ideal, exactly, for every index.
pub fn hs_monotone_check(
    sys: &BinomialSystem,
    tau: &TermOrderSpec,
    window: Option<(i64, i64)>,
) -> Result<bool> {
    let lhs = cohom_profile(&CohomInput::System(sys.clone()), window)?;
    let init = initial_as_borel(sys, tau)?;
    let rhs = cohom_profile(&CohomInput::Borel(init), window)?;
    lhs.leq(&rhs)
}

/// Equality of the cohomological Hilbert functions with those of the
/// generic initial ideal, in both the plain and the saturated variant.
pub fn hs_equality_check(
    sys: &BinomialSystem,
    trials: u32,
    seed: u64,
    window: Option<(i64, i64)>,
) -> Result<bool> {
    let lhs = cohom_profile(&CohomInput::System(sys.clone()), window)?;
    let gin = gin_compute(&gb_rlex(sys)?, &TermOrderSpec::Rlex, trials, seed)?;
    let rhs = cohom_profile(&CohomInput::Borel(gin), window)?;
    if !lhs.eq(&rhs)? {
        return Ok(false);
    }
    let lhs_sat = cohom_profile(&CohomInput::SaturatedSystem(sys.clone()), window)?;
    let gin_sat = gin_compute(
        &sat_gb(sys)?,
        &TermOrderSpec::Rlex,
        trials,
        seed.wrapping_add(1),
    )?;
    let rhs_sat = cohom_profile(&CohomInput::Borel(gin_sat), window)?;
    lhs_sat.eq(&rhs_sat)
}
