use quon_core::scalar::ratio;
use quon_core::su2::{cg_table, clebsch_gordan, SignedSurd};
use quon_core::{Scalar, Surd};

/// Spin matrices `(J0, J+)` of one irrep, basis `m = -j..j` ascending.
fn spin(twice_j: i32) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let d = (twice_j + 1) as usize;
    let j = twice_j as f64 / 2.0;
    let mut j0 = vec![vec![0.0; d]; d];
    let mut jp = vec![vec![0.0; d]; d];
    for k in 0..d {
        let m = -j + k as f64;
        j0[k][k] = m;
        if k + 1 < d {
            jp[k + 1][k] = ((j - m) * (j + m + 1.0)).sqrt();
        }
    }
    (j0, jp)
}

fn kron(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![0.0; n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn eye(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn add(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

fn mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a.len())
        .map(|i| a.iter().map(|r| r[i]).collect())
        .collect()
}

#[test]
fn coupled_vectors_diagonalise_total_spin() {
    for tj1 in 0..=3i32 {
        for tj2 in 0..=3 {
            let (a0, ap) = spin(tj1);
            let (b0, bp) = spin(tj2);
            let (ia, ib) = (eye(a0.len()), eye(b0.len()));
            let j0 = add(&kron(&a0, &ib), &kron(&ia, &b0));
            let jp = add(&kron(&ap, &ib), &kron(&ia, &bp));
            let jm = transpose(&jp);
            let half = |m: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
                m.into_iter()
                    .map(|r| r.into_iter().map(|x| x / 2.0).collect())
                    .collect()
            };
            let j2 = add(&mul(&j0, &j0), &half(add(&mul(&jp, &jm), &mul(&jm, &jp))));
            let dim = j0.len();
            let entries = cg_table(tj1 as u32, tj2 as u32);
            let mut tj = (tj1 - tj2).abs();
            while tj <= tj1 + tj2 {
                for tm in (-tj..=tj).step_by(2) {
                    let mut v = vec![0.0; dim];
                    for e in entries
                        .iter()
                        .filter(|e| e.twice_j == tj && e.twice_m == tm)
                    {
                        let (k1, k2) = (
                            ((e.twice_m1 + tj1) / 2) as usize,
                            ((e.twice_m2 + tj2) / 2) as usize,
                        );
                        v[k1 * b0.len() + k2] = e.value.to_f64();
                    }
                    let norm: f64 = v.iter().map(|x| x * x).sum();
                    assert!((norm - 1.0).abs() < 1e-12);
                    let eig = (tj as f64 / 2.0) * (tj as f64 / 2.0 + 1.0);
                    for i in 0..dim {
                        let jv: f64 = (0..dim).map(|k| j2[i][k] * v[k]).sum();
                        let mv: f64 = (0..dim).map(|k| j0[i][k] * v[k]).sum();
                        assert!(
                            (jv - eig * v[i]).abs() < 1e-12,
                            "j1={} j2={} J={} M={}",
                            tj1,
                            tj2,
                            tj,
                            tm
                        );
                        assert!((mv - tm as f64 / 2.0 * v[i]).abs() < 1e-12);
                    }
                }
                tj += 2;
            }
        }
    }
}

#[test]
fn orthonormal_exactly() {
    for tj1 in 0..=3i32 {
        for tj2 in 0..=3 {
            let lo = (tj1 - tj2).abs();
            let totals: Vec<i32> = (lo..=tj1 + tj2).step_by(2).collect();
            for &ta in &totals {
                for &tb in &totals {
                    for tm in (-ta.min(tb)..=ta.min(tb)).step_by(2) {
                        let mut sum = Surd::zero();
                        for tm1 in (-tj1..=tj1).step_by(2) {
                            let tm2 = tm - tm1;
                            let a = clebsch_gordan(tj1, tm1, tj2, tm2, ta, tm).to_surd();
                            let b = clebsch_gordan(tj1, tm1, tj2, tm2, tb, tm).to_surd();
                            sum = sum + a * b;
                        }
                        let want = if ta == tb { Surd::one() } else { Surd::zero() };
                        assert_eq!(
                            sum, want,
                            "j1={} j2={} J={} J'={} M={}",
                            tj1, tj2, ta, tb, tm
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn table_values() {
    let s = |sign, n, d| SignedSurd {
        sign,
        radicand: ratio(n, d),
    };
    // ⟨1 1; 1/2 -1/2 | 3/2 1/2⟩ = √(1/3), ⟨1 0; 1/2 1/2 | 3/2 1/2⟩ = √(2/3)
    assert_eq!(clebsch_gordan(2, 2, 1, -1, 3, 1), s(1, 1, 3));
    assert_eq!(clebsch_gordan(2, 0, 1, 1, 3, 1), s(1, 2, 3));
    // ⟨1 1; 1/2 -1/2 | 1/2 1/2⟩ = √(2/3), ⟨1 0; 1/2 1/2 | 1/2 1/2⟩ = -√(1/3)
    assert_eq!(clebsch_gordan(2, 2, 1, -1, 1, 1), s(1, 2, 3));
    assert_eq!(clebsch_gordan(2, 0, 1, 1, 1, 1), s(-1, 1, 3));
    // ⟨1 1; 1 -1 | 0 0⟩ = √(1/3), ⟨1 0; 1 0 | 0 0⟩ = -√(1/3)
    assert_eq!(clebsch_gordan(2, 2, 2, -2, 0, 0), s(1, 1, 3));
    assert_eq!(clebsch_gordan(2, 0, 2, 0, 0, 0), s(-1, 1, 3));
    // triangle and projection violations
    assert_eq!(clebsch_gordan(1, 1, 1, 1, 4, 2).sign, 0);
    assert_eq!(clebsch_gordan(2, 2, 2, 0, 2, 0).sign, 0);
    assert_eq!(clebsch_gordan(2, 1, 2, 1, 2, 2).sign, 0);
}
