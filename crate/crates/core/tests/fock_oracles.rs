#![allow(clippy::needless_range_loop)]

use quon_core::fock::inner_product;
use quon_core::scalar::ratio;
use quon_core::{Deformation, FockSpace, JLevel, ModeIndex, Rational, Scalar};

fn space(twice_j: u32, n_max: usize, q: Rational) -> FockSpace<Rational> {
    FockSpace::new(JLevel::new(twice_j), n_max, Deformation::new(q).unwrap())
}

/// `Σ_σ q^{inv(σ)} Π δ(w1[k], w2[σ(k)])` by brute force over all permutations.
fn brute_force(w1: &[ModeIndex], w2: &[ModeIndex], q: &Rational) -> Rational {
    fn go(w1: &[ModeIndex], w2: &[ModeIndex], used: &mut Vec<usize>, q: &Rational) -> Rational {
        let k = used.len();
        if k == w1.len() {
            let inversions = (0..k)
                .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
                .filter(|&(a, b)| used[a] > used[b])
                .count();
            return Scalar::pow(q, inversions as u32);
        }
        let mut total = Rational::zero();
        for j in 0..w2.len() {
            if !used.contains(&j) && w1[k] == w2[j] {
                used.push(j);
                total += go(w1, w2, used, q);
                used.pop();
            }
        }
        total
    }
    if w1.len() != w2.len() {
        return Rational::zero();
    }
    go(w1, w2, &mut Vec::new(), q)
}

#[test]
fn inner_product_matches_permutation_sum() {
    for q in [
        ratio(1, 2),
        ratio(-3, 4),
        ratio(0, 1),
        ratio(1, 1),
        ratio(-1, 1),
    ] {
        let d = Deformation::new(q.clone()).unwrap();
        let s = space(2, 4, q.clone());
        for n in 0..=4 {
            let words: Vec<_> = s.sector(n).words().collect();
            for w1 in &words {
                for w2 in &words {
                    assert_eq!(
                        inner_product(w1.modes(), w2.modes(), &d),
                        brute_force(w1.modes(), w2.modes(), &q),
                        "{} {}",
                        w1,
                        w2
                    );
                }
            }
        }
    }
}

#[test]
fn annihilation_is_adjoint_of_creation() {
    // ⟨u|b_m v⟩ = ⟨b†_m u|v⟩, i.e. G_{n-1} A = Cᵀ G_n.
    for q in [ratio(1, 2), ratio(-2, 3), ratio(0, 1)] {
        let s = space(2, 4, q);
        for n in 1..=4 {
            let g_low = s.gram_matrix(n - 1).matrix;
            let g_high = s.gram_matrix(n).matrix;
            for m in s.level().modes() {
                let a = s.annihilation_matrix(m, n);
                let c = s.creation_matrix(m, n - 1);
                assert_eq!(
                    g_low.compose(&a).unwrap().to_dense(),
                    c.transpose().compose(&g_high).unwrap().to_dense(),
                    "n={} m={}",
                    n,
                    m
                );
            }
        }
    }
}

#[test]
fn gram_matrix_is_symmetric_with_block_structure() {
    let s = space(3, 3, ratio(2, 5));
    for n in 0..=3 {
        let g = s.gram_matrix(n).matrix.to_dense();
        let sector = s.sector(n);
        for i in 0..g.len() {
            for j in 0..g.len() {
                assert_eq!(g[i][j], g[j][i]);
                if sector.word(i).content() != sector.word(j).content() {
                    assert!(g[i][j].is_zero());
                }
            }
        }
    }
}

#[test]
fn exact_and_float_positivity_agree() {
    for (num, den) in [(1, 2), (-9, 10), (0, 1), (99, 100)] {
        let exact = space(2, 3, ratio(num, den));
        let float = FockSpace::new(
            JLevel::new(2),
            3,
            Deformation::new(num as f64 / den as f64).unwrap(),
        );
        for n in 0..=3 {
            let (a, b) = (exact.check_positivity(n), float.check_positivity(n));
            assert!(
                a.positive_definite && b.positive_definite,
                "q={}/{} n={}",
                num,
                den,
                n
            );
            assert_eq!(a.rank, b.rank);
            assert!((a.min_eigenvalue - b.min_eigenvalue).abs() < 1e-9);
        }
    }
}

#[test]
fn endpoints_lose_rank() {
    // Bosons keep only symmetric states, fermions only antisymmetric ones.
    let bosons = space(2, 3, ratio(1, 1));
    let fermions = space(2, 3, ratio(-1, 1));
    for (n, sym, anti) in [(2, 6, 3), (3, 10, 1)] {
        assert_eq!(bosons.check_positivity(n).rank, sym);
        assert_eq!(fermions.check_positivity(n).rank, anti);
        assert!(!bosons.check_positivity(n).positive_definite);
    }
}

#[test]
fn out_of_range_requests_are_rejected() {
    let s = space(1, 2, ratio(1, 2));
    assert!(Deformation::new(ratio(3, 2)).is_err());
    let full = s
        .basis_vector(&quon_core::Word::from_twice(&[1, -1]))
        .unwrap();
    assert!(s.apply_creation(ModeIndex::from_twice(1), &full).is_err());
    let vac = s.vacuum();
    assert!(s.apply_creation(ModeIndex::from_twice(3), &vac).is_err());
    assert!(s
        .apply_annihilation(ModeIndex::from_twice(1), &vac)
        .unwrap()
        .is_zero());
}
