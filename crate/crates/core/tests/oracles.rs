//! Checks against oracles computed independently of the library routines.

use qtchar_core::cartan::{cartan_data, Family, LieType};
use qtchar_core::kl::dim_simple;
use qtchar_core::tfm::f_classical;
use qtchar_core::{Engine, GammaTable, Monomial};

const U: usize = 30;

/// `C(z)^{-1}` as truncated power series, through `C(z) Z = I + N` with
/// `Z = diag(z^{d_j})` and `N` of positive valuation.
fn brute_inverse(ty: LieType) -> Vec<Vec<Vec<i64>>> {
    let c = cartan_data(ty).unwrap();
    let n = c.rank();
    let d: Vec<usize> = (1..=n as u16).map(|i| c.d(i) as usize).collect();
    // N[i][j] as a polynomial in z of degree < U.
    let mut nmat = vec![vec![vec![0i64; U + 8]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                nmat[i][i][2 * d[i]] += 1;
                continue;
            }
            let a = -c.c(i as u16 + 1, j as u16 + 1);
            // (z^{c} - z^{-c}) / (z - z^{-1}) = -(z^{a-1} + z^{a-3} + ... + z^{1-a}), times z^{d_j}.
            for k in 0..a {
                let e = d[j] as i64 + a as i64 - 1 - 2 * k as i64;
                assert!(e >= 1);
                nmat[i][j][e as usize] -= 1;
            }
        }
    }
    // X = (I + N)^{-1}: X_0 = I, X_u = -sum_{k>=1} N_k X_{u-k}.
    let mut x = vec![vec![vec![0i64; U + 4]; n]; n];
    for i in 0..n {
        x[i][i][0] = 1;
    }
    for u in 1..U + 4 {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 1..=u {
                    for l in 0..n {
                        s += nmat[i][l][k] * x[l][j][u - k];
                    }
                }
                x[i][j][u] = -s;
            }
        }
    }
    // C^{-1} = Z X, so c'_{ij}(u) = X_{ij}[u - d_i].
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..U).map(|u| if u >= d[i] { x[i][j][u - d[i]] } else { 0 }).collect())
                .collect()
        })
        .collect()
}

#[test]
fn cprime_matches_series_inversion() {
    let mut types = Vec::new();
    for n in 1..=3 {
        types.push(LieType::new(Family::A, n).unwrap());
    }
    for n in 2..=3 {
        types.push(LieType::new(Family::B, n).unwrap());
        types.push(LieType::new(Family::C, n).unwrap());
    }
    types.push(LieType::new(Family::D, 4).unwrap());
    for ty in types {
        let g = GammaTable::for_type(ty).unwrap();
        let want = brute_inverse(ty);
        for i in 1..=ty.rank as u16 {
            for j in 1..=ty.rank as u16 {
                for u in -5..U as i32 {
                    let w = if u < 0 { 0 } else { want[i as usize - 1][j as usize - 1][u as usize] };
                    assert_eq!(g.cprime_coeff(i, j, u), w, "{ty} c'_{i}{j}({u})");
                }
            }
        }
    }
}

#[test]
fn rank_one_series() {
    // 1/(z + z^{-1}) = z - z^3 + z^5 - ...
    let g = GammaTable::for_type(LieType::new(Family::A, 1).unwrap()).unwrap();
    for u in 0..40 {
        let w = if u % 2 == 1 { if (u / 2) % 2 == 0 { 1 } else { -1 } } else { 0 };
        assert_eq!(g.cprime_coeff(1, 1, u), w);
    }
    assert_eq!(g.gamma_ij(1, 1, 2), 2);
    assert_eq!(g.gamma_pair(&Monomial::y(1, 0), &Monomial::y(1, 2)).unwrap(), -2);
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn type_a_fundamentals_are_exterior_powers() {
    for n in 1..=5 {
        let e = Engine::new(LieType::new(Family::A, n).unwrap()).unwrap();
        for i in 1..=n as u16 {
            assert_eq!(dim_simple(&e, &Monomial::y(i, 0)).unwrap(), binomial(n as i64 + 1, i as i64));
        }
    }
}

#[test]
fn vector_and_spin_dimensions() {
    // Node 1 is the short (B) or long (C) end, nodes 1 and 2 are the spin nodes of D.
    // Vector: 2n+1 (B), 2n (C, D). Spin: 2^n (B), 2^{n-1} (D).
    for n in 2..=4 {
        let b = Engine::new(LieType::new(Family::B, n).unwrap()).unwrap();
        assert_eq!(dim_simple(&b, &Monomial::y(n as u16, 0)).unwrap(), 2 * n as i64 + 1);
        assert_eq!(dim_simple(&b, &Monomial::y(1, 0)).unwrap(), 1 << n);
        let c = Engine::new(LieType::new(Family::C, n).unwrap()).unwrap();
        assert_eq!(dim_simple(&c, &Monomial::y(n as u16, 0)).unwrap(), 2 * n as i64);
    }
    for n in 4..=5 {
        let d = Engine::new(LieType::new(Family::D, n).unwrap()).unwrap();
        assert_eq!(dim_simple(&d, &Monomial::y(n as u16, 0)).unwrap(), 2 * n as i64);
        assert_eq!(f_classical(&d, &Monomial::y(1, 0)).unwrap().coefficient_sum(), 1 << (n - 1));
    }
}
