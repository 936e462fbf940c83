//! Property tests for the order relations, the polynomial layer, and
//! the Hilbert-function bridge between them.

use proptest::prelude::*;

use grodef::hilbert::hf_monomial_ideal;
use grodef::orders::{
    borel_geq, borel_witness, cmp_hlex, cmp_rlex, ExponentVec, IntVec, TermOrderSpec,
};
use grodef::polyalg::{
    beta_deform, buchberger, ideal_equal, initial_ideal, normal_form, scalar_from_i64, Poly,
};

fn exponent_vec(n: usize) -> impl Strategy<Value = ExponentVec> {
    proptest::collection::vec(0u32..5, n).prop_map(ExponentVec::new)
}

/// Pairs of one degree, built by padding the shorter one.
fn equal_degree_pair(n: usize) -> impl Strategy<Value = (ExponentVec, ExponentVec)> {
    (exponent_vec(n), exponent_vec(n)).prop_map(move |(a, b)| {
        let (da, db) = (a.degree(), b.degree());
        let mut a = a.0;
        let mut b = b.0;
        if da < db {
            a[0] += db - da;
        } else {
            b[0] += da - db;
        }
        (ExponentVec::new(a), ExponentVec::new(b))
    })
}

proptest! {
    #[test]
    fn hlex_and_rlex_are_antisymmetric(
        (a, b) in equal_degree_pair(4)
    ) {
        prop_assert_eq!(cmp_hlex(&a, &b).unwrap(), cmp_hlex(&b, &a).unwrap().reverse());
        prop_assert_eq!(cmp_rlex(&a, &b).unwrap(), cmp_rlex(&b, &a).unwrap().reverse());
        prop_assert_eq!(cmp_hlex(&a, &b).unwrap() == std::cmp::Ordering::Equal, a == b);
        prop_assert_eq!(cmp_rlex(&a, &b).unwrap() == std::cmp::Ordering::Equal, a == b);
    }

    #[test]
    fn hlex_and_rlex_are_transitive(
        a in exponent_vec(4),
        b in exponent_vec(4),
        c in exponent_vec(4)
    ) {
        use std::cmp::Ordering::Greater;
        for cmp in [cmp_hlex, cmp_rlex] {
            if cmp(&a, &b).unwrap() == Greater && cmp(&b, &c).unwrap() == Greater {
                prop_assert_eq!(cmp(&a, &c).unwrap(), Greater);
            }
        }
    }

    #[test]
    fn orders_are_multiplicative(
        a in exponent_vec(4),
        b in exponent_vec(4),
        c in exponent_vec(4)
    ) {
        let ac = a.add(&c).unwrap();
        let bc = b.add(&c).unwrap();
        prop_assert_eq!(cmp_hlex(&a, &b).unwrap(), cmp_hlex(&ac, &bc).unwrap());
        prop_assert_eq!(cmp_rlex(&a, &b).unwrap(), cmp_rlex(&ac, &bc).unwrap());
    }

    #[test]
    fn borel_dominance_refines_both_orders(
        (a, b) in equal_degree_pair(4)
    ) {
        use std::cmp::Ordering::Less;
        if borel_geq(&a, &b).unwrap() {
            prop_assert_ne!(cmp_hlex(&a, &b).unwrap(), Less);
            prop_assert_ne!(cmp_rlex(&a, &b).unwrap(), Less);
            let m = borel_witness(&a, &b).unwrap();
            prop_assert_eq!(m.row_sums(), a);
            prop_assert_eq!(m.col_sums(), b);
        }
    }

    #[test]
    fn beta_deformation_at_one_is_the_identity(
        exps in proptest::collection::btree_set(exponent_vec(3), 1..5),
        weights in proptest::collection::vec(-3i64..=3, 3)
    ) {
        let d = exps.iter().next().unwrap().degree();
        let terms: Vec<(ExponentVec, _)> = exps
            .into_iter()
            .filter(|e| e.degree() == d)
            .enumerate()
            .map(|(i, e)| (e, scalar_from_i64(i as i64 + 1)))
            .collect();
        let f = Poly::from_terms(3, terms).unwrap();
        let omega = IntVec::new(weights);
        prop_assert_eq!(beta_deform(&f, &omega, &scalar_from_i64(1)), f.clone());
        // At zero only weight-maximal monomials survive, and they all
        // share the maximal weight.
        let at_zero = beta_deform(&f, &omega, &scalar_from_i64(0));
        let max = f.support().map(|e| omega.dot(e)).max().unwrap();
        for e in at_zero.support() {
            prop_assert_eq!(omega.dot(e), max);
        }
        prop_assert!(!at_zero.is_zero());
    }
}

/// Random homogeneous binomial-and-monomial generators at desk scale.
fn small_ideal_gens(seed: u64) -> Vec<Poly> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let n = 3;
    let d = rng.gen_range(2..=3u32);
    let all = grodef::orders::exponents_of_degree(n, d);
    let count = rng.gen_range(1..=3usize);
    let mut gens = Vec::new();
    for _ in 0..count {
        let i = rng.gen_range(0..all.len());
        let j = rng.gen_range(0..all.len());
        if i == j {
            gens.push(Poly::monomial(all[i].clone()));
        } else {
            gens.push(Poly::binomial(all[i].clone(), all[j].clone()).unwrap());
        }
    }
    gens
}

#[test]
fn hilbert_function_is_preserved_by_initial_ideals() {
    // The bridge invariant: under every implemented order, the initial
    // ideal of an ideal has the same Hilbert function.
    for seed in 0..24u64 {
        let gens = small_ideal_gens(seed);
        let rgb = buchberger(3, &gens, TermOrderSpec::Rlex).unwrap();
        let hgb = buchberger(3, &gens, TermOrderSpec::Hlex).unwrap();
        assert!(ideal_equal(&rgb, &hgb).unwrap());
        let hr = hf_monomial_ideal(&initial_ideal(&rgb), 9).unwrap();
        let hh = hf_monomial_ideal(&initial_ideal(&hgb), 9).unwrap();
        assert!(hr.eq_exact(&hh).unwrap(), "seed {seed}");
        // Dimension check straight from the definition at a few
        // degrees: the span of the degree-j multiples of the basis.
        for j in 0..=5i64 {
            let dim = span_dimension(&rgb, j as u32);
            assert_eq!(hr.eval(j).unwrap(), dim, "seed {seed} degree {j}");
        }
    }
}

/// Dimension of the degree-`j` component of the ideal, by row reducing
/// all monomial multiples of the basis. Independent of the Hilbert
/// machinery.
fn span_dimension(ideal: &grodef::polyalg::IdealGB, j: u32) -> i64 {
    let n = ideal.num_vars();
    let monos = grodef::orders::exponents_of_degree(n, j);
    let index: std::collections::HashMap<&ExponentVec, usize> =
        monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<num_rational::BigRational>> = Vec::new();
    for g in ideal.basis() {
        let dg = g.homogeneous_degree().unwrap();
        if dg > j {
            continue;
        }
        for u in grodef::orders::exponents_of_degree(n, j - dg) {
            let mut row = vec![num_rational::BigRational::from_integer(0.into()); monos.len()];
            for (e, c) in g.terms() {
                row[index[&e.add(&u).unwrap()]] = c.clone();
            }
            rows.push(row);
        }
    }
    // Plain Gaussian elimination.
    use num_traits::Zero;
    let mut rank = 0i64;
    let mut col = 0usize;
    while col < monos.len() && (rank as usize) < rows.len() {
        if let Some(pivot) = (rank as usize..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            rows.swap(rank as usize, pivot);
            let lead = rows[rank as usize][col].clone();
            for r in (rank as usize + 1)..rows.len() {
                if !rows[r][col].is_zero() {
                    let factor = &rows[r][col] / &lead;
                    for c in col..monos.len() {
                        let delta = &factor * &rows[rank as usize][c];
                        rows[r][c] = &rows[r][c] - delta;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

#[test]
fn normal_form_result_is_fully_reduced() {
    for seed in 0..12u64 {
        let gens = small_ideal_gens(seed);
        let gb = buchberger(3, &gens, TermOrderSpec::Rlex).unwrap();
        if gb.is_zero() {
            continue;
        }
        let probe = small_ideal_gens(seed.wrapping_add(1000));
        for f in probe {
            let r = normal_form(&f, gb.basis(), gb.order());
            // No monomial of the remainder is divisible by a leading
            // term of the basis.
            for m in r.support() {
                for g in gb.basis() {
                    let lt = g.leading(gb.order()).unwrap().0;
                    assert!(!lt.divides(m));
                }
            }
            // The difference lies in the ideal.
            assert!(gb.contains(&f.sub(&r)));
        }
    }
}
