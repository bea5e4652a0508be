use proptest::prelude::*;
use vertexkit::exact_algebra::rat;
use vertexkit::lattice_theta::{
    lattice_character, short_vector_list, short_vectors, theta_genus1, theta_genus2, theta_genus2_specialize, Builtin, Lattice, LatticeJson,
    DEFAULT_PAIR_BUDGET,
};
use vertexkit::modular_forms::eisenstein;

/// `M^T M` for an upper triangular `M` with non-zero diagonal; positive definite.
fn gram_strategy(rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-2i64..=2, rank * rank).prop_map(move |raw| {
        let mut m = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in i..rank {
                m[i][j] = raw[i * rank + j];
            }
            if m[i][i] == 0 {
                m[i][i] = 1;
            }
        }
        (0..rank)
            .map(|i| (0..rank).map(|j| (0..rank).map(|k| m[k][i] * m[k][j]).sum()).collect())
            .collect()
    })
}

/// Even version: double the Gram.
fn even_gram_strategy(rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    gram_strategy(rank).prop_map(|g| g.into_iter().map(|r| r.into_iter().map(|x| 2 * x).collect()).collect())
}

fn norm(g: &[Vec<i64>], x: &[i64]) -> i64 {
    (0..x.len()).map(|i| (0..x.len()).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum()
}

/// Counts by norm over the box `|x_i| <= r`, with `r` from the inverse Gram.
fn brute_counts(g: &[Vec<i64>], bound: i64) -> Vec<u64> {
    let n = g.len();
    let inv = invert(g);
    let radius: Vec<i64> = (0..n).map(|i| (bound as f64 * inv[i][i]).sqrt().floor() as i64 + 1).collect();
    let mut counts = vec![0u64; bound as usize + 1];
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let v = norm(g, &x);
        if v <= bound {
            counts[v as usize] += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return counts;
            }
            if x[i] < radius[i] {
                x[i] += 1;
                break;
            }
            x[i] = -radius[i];
            i += 1;
        }
    }
}

fn invert(g: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<f64> = r.iter().map(|&x| x as f64).collect();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        a[c].iter_mut().for_each(|x| *x /= piv);
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let src = a[c].clone();
                a[r].iter_mut().zip(src).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn enumeration_matches_box_count(g in gram_strategy(3), bound in 0i64..=12) {
        let l = Lattice::new("L", g.clone()).unwrap();
        prop_assert_eq!(short_vectors(&l, bound).unwrap(), brute_counts(&g, bound));
        for (n, v) in short_vector_list(&l, bound).unwrap() {
            prop_assert_eq!(n, norm(&g, &v));
        }
    }

    #[test]
    fn genus2_symmetries(g in even_gram_strategy(2), a_max in 0u64..=3, b_max in 0u64..=3) {
        let l = Lattice::new("L", g).unwrap();
        let t = theta_genus2(&l, a_max, b_max, DEFAULT_PAIR_BUDGET).unwrap();
        prop_assert_eq!(t.symmetry_violation(), None);
        prop_assert!(theta_genus2_specialize(&t).agree);
        // the c = 0 face with b = 0 is the genus 1 series
        let t1 = theta_genus1(&l, a_max as usize).unwrap();
        for a in 0..=a_max {
            prop_assert_eq!(rat(t.coeff(a, 0, 0) as i64, 1), t1.coeff(a as usize));
        }
    }

    #[test]
    fn direct_sum_multiplies_thetas(g in even_gram_strategy(2), h in even_gram_strategy(1)) {
        let a = Lattice::new("A", g).unwrap();
        let b = Lattice::new("B", h).unwrap();
        let n = 4;
        let sum = theta_genus1(&a.direct_sum(&b), n).unwrap();
        let prod = theta_genus1(&a, n).unwrap().mul(&theta_genus1(&b, n).unwrap()).truncate(n);
        prop_assert_eq!(sum.coeffs(), prod.coeffs());
    }
}

#[test]
fn e8_theta_is_e4() {
    let t = theta_genus1(&Lattice::builtin(Builtin::E8), 5).unwrap();
    assert_eq!(t.coeffs(), eisenstein(4, 5).unwrap().coeffs());
}

#[test]
fn unimodular_models() {
    for b in [Builtin::E8, Builtin::D16plus, Builtin::E8PlusE8] {
        let l = Lattice::builtin(b);
        assert!(l.is_even() && l.is_unimodular(), "{}", l.name());
    }
    assert_eq!(Lattice::builtin(Builtin::Sqrt2E8).determinant(), 256.into());
}

#[test]
fn odd_lattices() {
    let z = Lattice::builtin(Builtin::Z);
    assert_eq!(short_vectors(&z, 4).unwrap(), vec![1, 2, 0, 0, 2]);
    assert!(theta_genus1(&z, 2).is_err());
}

#[test]
fn a1_genus2_table() {
    let t = theta_genus2(&Lattice::builtin(Builtin::A1), 1, 1, DEFAULT_PAIR_BUDGET).unwrap();
    assert_eq!(t.coeff(0, 0, 0), 1);
    assert_eq!(t.coeff(1, 0, 0), 2);
    assert_eq!(t.coeff(1, 1, 2), 2);
    assert_eq!(t.coeff(1, 1, -2), 2);
    assert_eq!(t.coeff(1, 1, 0), 0);
}

#[test]
fn a1_character_starts_at_minus_one_24th() {
    let c = lattice_character(&Lattice::builtin(Builtin::A1), 4).unwrap();
    assert_eq!(c.leading_exponent(), &rat(-1, 24));
    let want: Vec<_> = [1, 3, 4, 7, 13].iter().map(|&n| rat(n, 1)).collect();
    assert_eq!(c.coeffs(), &want[..]);
}

#[test]
fn rejects_bad_grams() {
    assert!(Lattice::new("asym", vec![vec![2, 1], vec![0, 2]]).is_err());
    assert!(Lattice::new("indef", vec![vec![2, 3], vec![3, 2]]).is_err());
    let j: LatticeJson = serde_json::from_str(r#"{"rank": 2, "gram": [[2, -1], [-1, 2]]}"#).unwrap();
    assert_eq!(Lattice::from_json(&j).unwrap().determinant(), 3.into());
}
