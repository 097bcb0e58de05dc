use lrc_bounds::asym::{
    gv_lrc, gv_lrc_with_grid, mrrw2, mrrw2_with_grid, upper_cm_mrrw2, upper_cm_with_grid,
    upper_linear, upper_linear_with_grid,
};
use lrc_bounds::classical::BestKnownTable;
use lrc_bounds::finite::{
    corollary2, mu, shortening_bound, singleton_gopalan, singleton_rho, singleton_rho_k,
    LogConvexBound, ShorteningOptions,
};
use lrc_bounds::krawtchouk::{krawtchouk, valency};
use lrc_bounds::model::{floor_log, index_of, rank_of, CodeParams, MultiIndex};
use lrc_bounds::oracle;
use lrc_bounds::ratlp::{solve_with, LpProblem, LpStatus, SolveMode, SolveOptions};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// K_j(x) = Σ_h (-1)^h (q-1)^{j-h} C(x,h) C(n-x,j-h).
fn kraw_sum(n: usize, q: u32, j: usize, x: usize) -> BigInt {
    let mut total = BigInt::from(0);
    for h in 0..=j {
        let term = num_traits::pow(BigInt::from(q - 1), j - h) * binom(x, h) * binom(n - x, j - h);
        if h % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_index_roundtrip(s in 1usize..4, n_max in 1usize..7, seed in any::<u64>()) {
        let count = (n_max + 1).pow(s as u32);
        let rank = (seed % count as u64) as usize;
        let idx = index_of(rank, s, n_max).unwrap();
        prop_assert_eq!(idx.len(), s);
        prop_assert!(idx.entries().iter().all(|&e| e <= n_max));
        prop_assert_eq!(rank_of(&idx, n_max).unwrap(), rank);
    }

    #[test]
    fn multi_index_rejects_out_of_range(s in 1usize..4, n_max in 1usize..6, extra in 1usize..4) {
        let mut entries = vec![0; s];
        entries[s - 1] = n_max + extra;
        prop_assert!(MultiIndex::new(entries, n_max).is_err());
    }

    #[test]
    fn code_params_validation(q in 2u32..5, s in 1usize..4, r in 1usize..6, rho in 2usize..4, over in 1usize..5) {
        let n = s * (r + rho - 1);
        prop_assert!(CodeParams::new(q, s, r, rho, n).is_ok());
        prop_assert!(CodeParams::new(q, s, r, rho, n + over).is_err());
        prop_assert!(CodeParams::new(q, s, r, rho, 0).is_err());
        prop_assert!(CodeParams::new(q, s, 0, rho, 1).is_err());
        prop_assert!(CodeParams::new(q, s, r, 1, 1).is_err());
        prop_assert!(CodeParams::new(1, s, r, rho, 1).is_err());
    }

    #[test]
    fn krawtchouk_matches_sum_and_reciprocity(n in 1usize..12, q in 2u32..5, j in 0usize..12, x in 0usize..12) {
        let (j, x) = (j % (n + 1), x % (n + 1));
        let kjx = krawtchouk(n, q, j, x).unwrap();
        prop_assert_eq!(&kjx, &kraw_sum(n, q, j, x));
        let vx = valency(n, q, &MultiIndex::new(vec![x], n).unwrap()).unwrap();
        let vj = valency(n, q, &MultiIndex::new(vec![j], n).unwrap()).unwrap();
        prop_assert_eq!(&vx, &(num_traits::pow(BigInt::from(q - 1), x) * binom(n, x)));
        prop_assert_eq!(vx * kjx, vj * krawtchouk(n, q, x, j).unwrap());
    }

    #[test]
    fn floor_log_brackets(q in 2u32..6, num in 1i64..100_000, den in 1i64..100_000) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let k = floor_log(q, &x);
        let qq = BigRational::from_integer(BigInt::from(q));
        let low = if k >= 0 { num_traits::pow(qq.clone(), k as usize) } else { num_traits::pow(qq.clone(), (-k) as usize).recip() };
        prop_assert!(low <= x);
        prop_assert!(x < low * qq);
    }

    #[test]
    fn recursive_singleton_is_mu_r(q in 2u32..5, r in 1usize..7, rho in 2usize..4, n in 1usize..60, d in 1usize..60) {
        let n = n.max(2);
        let d = 1 + d % n;
        let b = corollary2(LogConvexBound::Singleton, q, n, d, r, rho).unwrap();
        prop_assert_eq!(b.k().unwrap(), (mu(n, d, r + rho - 1) * r) as i64);
    }

    #[test]
    fn singleton_rho_two_is_gopalan(n in 1usize..80, k in 1usize..80, r in 1usize..10) {
        prop_assert_eq!(singleton_rho(n, k, r, 2), singleton_gopalan(n, k, r));
    }

    #[test]
    fn recursive_singleton_near_singleton_rho(r in 1usize..6, rho in 2usize..4, n in 2usize..41, d in 1usize..41) {
        let d = 1 + d % n;
        let rec = corollary2(LogConvexBound::Singleton, 2, n, d, r, rho).unwrap().k().unwrap();
        let sr = singleton_rho_k(n, d, r, rho).unwrap().k().unwrap();
        prop_assert!(rec >= sr - 1, "recursive {} vs singleton-rho {}", rec, sr);
    }

    #[test]
    fn upper_curves_non_increasing(r in 1usize..7, a in 0.01f64..0.49, b in 0.01f64..0.49) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(upper_cm_mrrw2(r, hi).value <= upper_cm_mrrw2(r, lo).value + 1e-9);
        prop_assert!(upper_linear(r, hi).value <= upper_linear(r, lo).value + 1e-9);
        prop_assert!(mrrw2(hi) <= mrrw2(lo) + 1e-9);
    }

    #[test]
    fn lower_below_upper(r in 1usize..7, delta in 0.01f64..0.49) {
        let gv = gv_lrc(r, delta).value;
        let lin = upper_linear(r, delta).value;
        prop_assert!(gv <= lin + 1e-12);
        prop_assert!(lin <= 1.0);
    }

    #[test]
    fn coarse_grid_restart_agrees(r in 1usize..7, delta in 0.01f64..0.49) {
        prop_assert!((gv_lrc_with_grid(r, delta, 100).value - gv_lrc(r, delta).value).abs() < 1e-9);
        prop_assert!((mrrw2_with_grid(delta, 100).value - mrrw2(delta)).abs() < 1e-9);
        prop_assert!((upper_cm_with_grid(r, delta, mrrw2, 100).value - upper_cm_mrrw2(r, delta).value).abs() < 1e-9);
        prop_assert!((upper_linear_with_grid(r, delta, 100).value - upper_linear(r, delta).value).abs() < 1e-9);
    }

    #[test]
    fn crossover_agrees_with_exact_simplex(
        vars in 1usize..6,
        rows in 1usize..6,
        coefs in prop::collection::vec(-5i64..6, 36),
        rhs in prop::collection::vec(-12i64..4, 6),
        obj in prop::collection::vec(-5i64..6, 6),
    ) {
        let mut matrix: Vec<Vec<i64>> = (0..rows).map(|i| coefs[i * 6..i * 6 + vars].to_vec()).collect();
        let mut b: Vec<i64> = rhs[..rows].iter().map(|v| -v.abs()).collect();
        b[0] = rhs[0];
        matrix.push(vec![-1; vars]);
        b.push(-20);
        let problem = LpProblem::new(obj[..vars].to_vec(), matrix, b).unwrap();
        let with = solve_with(&problem, SolveMode::Exact, &SolveOptions::default()).unwrap();
        let without = solve_with(&problem, SolveMode::Exact, &SolveOptions { crossover: false, ..SolveOptions::default() }).unwrap();
        prop_assert_eq!(with.status, without.status);
        prop_assert_eq!(&with.objective, &without.objective);
        if with.status == LpStatus::Optimal {
            let float = solve_with(&problem, SolveMode::Float, &SolveOptions::default()).unwrap();
            prop_assert_eq!(float.status, LpStatus::Optimal);
            let exact = with.objective.unwrap().to_f64();
            prop_assert!((float.objective.unwrap().to_f64() - exact).abs() <= 1e-7 * (1.0 + exact.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumerated_codes_are_consistent((s, r) in prop::sample::select(vec![(1usize, 1usize), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]), k in 0usize..7, pick in any::<prop::sample::Index>()) {
        let k = k % (s * r + 1);
        let codes = oracle::enumerate_disjoint(s, r, k).unwrap();
        prop_assert!(!codes.is_empty());
        let code = &codes[pick.index(codes.len())];
        prop_assert_eq!(code.dimension(), k);
        let dist = oracle::distance_distribution(code);
        prop_assert_eq!(dist.total(), BigRational::from_integer(BigInt::from(1u64 << k)));
        prop_assert!(oracle::verify_delsarte(code).unwrap());
        if k > 0 {
            let locality = oracle::locality_of(code).unwrap();
            prop_assert!(locality.is_some_and(|l| l <= r), "locality {:?}", locality);
        }
    }

    #[test]
    fn coset_constraints_hold(r in 1usize..8, s in 1usize..4, t_frac in 0.0f64..1.0) {
        prop_assume!(s * (r + 1) <= 16 && s * r <= 14);
        prop_assert!(oracle::coset_leader_check(s, r, t_frac).unwrap());
    }

    #[test]
    fn lrc_shortening_not_weaker(r in 2usize..5, n in 6usize..22, d in 3usize..7) {
        prop_assume!(d <= n);
        let table = BestKnownTable::bundled();
        let plain = shortening_bound(2, n, d, r, &table, ShorteningOptions::default()).unwrap();
        let lrc = shortening_bound(2, n, d, r, &table, ShorteningOptions { lrc_recursive: true, ..ShorteningOptions::default() }).unwrap();
        prop_assert!(lrc.k().unwrap() <= plain.k().unwrap());
    }
}
