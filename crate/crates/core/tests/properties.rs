use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relay_arq::channel::{complex_gaussian, SystemConfig};
use relay_arq::cli::{to_csv, RunConfig};
use relay_arq::linalg::{herm_eig, kron, kron_identity, norm, null_basis, unvec, vec, ComplexMatrix};
use relay_arq::outage::{outage_interference, outage_single_user};
use relay_arq::relay_multi::{max_min_sinr, Lifted, MultiuserOptions, Formulation};
use relay_arq::relay_single::solve_single_user_beamformer;
use relay_arq::sdp::{solve_feasibility, SdpStatus, SolverOptions};
use relay_arq::sim::{OutageEstimate, Preset, RelayMode, Table, TrialOutcome, Value};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_fn(rows, cols, |i, j| {
            let (re, im) = v[i * cols + j];
            Complex64::new(re, im)
        })
    })
}

fn hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..7).prop_flat_map(|n| matrix(n, n)).prop_map(|a| (&a + &a.adjoint()).scale(0.5))
}

fn channel(m: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), m)
        .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn relay_pair(m: usize, seed: u64) -> [Vec<Complex64>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [complex_gaussian(&mut rng, m, 4.0), complex_gaussian(&mut rng, m, 4.0)]
}

proptest! {
    #[test]
    fn eigenpairs_satisfy_definition(a in hermitian()) {
        let eig = herm_eig(&a).unwrap();
        let scale = a.frobenius_norm().max(1e-300);
        for k in 0..a.rows() {
            let u = eig.vector(k);
            let au = a.mul_vec(u);
            let r: Vec<Complex64> = au.iter().zip(u).map(|(x, y)| x - y * eig.eigenvalues[k]).collect();
            prop_assert!(norm(&r) <= 1e-9 * scale);
        }
        prop_assert!((&eig.reconstruct() - &a).frobenius_norm() <= 1e-9 * scale);
    }

    #[test]
    fn psd_spectrum_is_nonnegative(b in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let eig = herm_eig(&(&b * &b.adjoint())).unwrap();
        let top = eig.eigenvalues[0];
        prop_assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-10 * top));
    }

    #[test]
    fn null_basis_annihilates_channel(h in (2usize..7).prop_flat_map(channel), n in 1usize..4) {
        let u = null_basis(&h).unwrap();
        let m = h.len();
        prop_assert_eq!((u.rows(), u.cols()), (m, m - 1));
        prop_assert!(norm(&u.adjoint_mul_vec(&h)) <= 1e-10 * norm(&h));
        prop_assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(m - 1)).frobenius_norm() <= 1e-12);
        let hh = ComplexMatrix::column_vector(&h).adjoint();
        let lifted = &kron_identity(n, &hh) * &kron_identity(n, &u);
        prop_assert_eq!((lifted.rows(), lifted.cols()), (n, n * (m - 1)));
        prop_assert!(lifted.frobenius_norm() <= 1e-10 * norm(&h));
    }

    #[test]
    fn vec_of_product(a in matrix(2, 3), b in matrix(3, 4), c in matrix(4, 2)) {
        // vec(ABC) = (C^T ⊗ A) vec(B)
        let lhs = vec(&(&(&a * &b) * &c));
        let rhs = kron(&c.transpose(), &a).mul_vec(&vec(&b));
        let d: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
        prop_assert!(norm(&d) <= 1e-12 * (1.0 + norm(&lhs)));
        prop_assert_eq!(unvec(&vec(&b), 3, 4).unwrap(), b);
    }

    #[test]
    fn outage_monotone(r in 0.2..6.0f64, dr in 0.0..2.0f64, snr in -5.0..40.0f64, v in 0.3..3.0f64, dv in 0.0..2.0f64) {
        let base = SystemConfig { var_direct: v, var_cross: v, ..SystemConfig::direct_example().with_snr_db(snr).with_rate(r) };
        let p = outage_interference(&base).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        let higher_rate = outage_interference(&base.clone().with_rate(r + dr)).unwrap();
        let more_interference = outage_interference(&SystemConfig { var_cross: v + dv, ..base.clone() }).unwrap();
        let stronger_link = outage_interference(&SystemConfig { var_direct: v + dv, ..base.clone() }).unwrap();
        let tol = 1e-12;
        prop_assert!(higher_rate >= p - tol);
        prop_assert!(more_interference >= p - tol);
        prop_assert!(stronger_link <= p + tol);
        prop_assert!(outage_single_user(&base) <= p + tol);
    }

    #[test]
    fn weak_interference_limit(r in 0.5..4.0f64, snr in 0.0..20.0f64) {
        let mut cfg = SystemConfig::direct_example().with_snr_db(snr).with_rate(r);
        cfg.var_cross = 1e-9;
        let with = outage_interference(&cfg).unwrap();
        prop_assert!((with - outage_single_user(&cfg)).abs() <= 1e-4);
    }

    #[test]
    fn single_user_scale_and_phase(
        m in 2usize..7,
        seed in any::<u64>(),
        c in 0.1..10.0f64,
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let [hp, ht] = relay_pair(m, seed);
        let pr = 50.0;
        let base = solve_single_user_beamformer(&hp, &ht, pr, 3).unwrap().gain(&ht);
        let scaled = solve_single_user_beamformer(&hp, &ht, c * pr, 3).unwrap().gain(&ht);
        prop_assert!((scaled - c * base).abs() <= 1e-12 * c * base);
        let rot = Complex64::from_polar(1.0, theta);
        let ht2: Vec<Complex64> = ht.iter().map(|x| x * rot).collect();
        let turned = solve_single_user_beamformer(&hp, &ht2, pr, 3).unwrap().gain(&ht2);
        prop_assert!((turned - base).abs() <= 1e-10 * base);
    }

    #[test]
    fn mode_partition(failed in any::<[bool; 2]>()) {
        let mode = TrialOutcome::mode_for(failed);
        let count = [RelayMode::None, RelayMode::SingleUser, RelayMode::Multiuser]
            .iter()
            .filter(|&&m| m == mode)
            .count();
        prop_assert_eq!(count, 1);
        prop_assert_eq!(mode == RelayMode::Multiuser, failed[0] && failed[1]);
        prop_assert_eq!(mode == RelayMode::None, !failed[0] && !failed[1]);
    }

    #[test]
    fn estimate_bounds(trials in 1u64..1_000_000, frac in 0.0..=1.0f64) {
        let failures = (trials as f64 * frac).floor() as u64;
        let e = OutageEstimate::new(failures, trials);
        prop_assert!(e.lower() <= e.p_hat && e.p_hat <= e.upper());
        prop_assert!(e.lower() >= 0.0);
        let doubled = OutageEstimate::new(2 * failures, 2 * trials);
        if failures > 0 && failures < trials {
            let ratio = doubled.ci_halfwidth / e.ci_halfwidth;
            prop_assert!((ratio - 0.5f64.sqrt()).abs() <= 1e-12);
        }
    }

    #[test]
    fn config_round_trip(
        seed in any::<u64>(),
        trials in 100u64..10_000_000,
        noise in 1e-6..10.0f64,
        m in 2usize..9,
        rates in prop::collection::vec(0.0..10.0f64, 1..5),
        which in 0usize..3,
        formulation in prop::sample::select(vec![Formulation::Full, Formulation::Reduced, Formulation::Span]),
    ) {
        let mut cfg = RunConfig::preset([Preset::Fig1, Preset::Fig2, Preset::Fig3][which]);
        let e = &mut cfg.experiment;
        e.seed = seed;
        e.trials = trials;
        e.system.noise_var = noise;
        e.system.m = m;
        e.rate_grid = rates;
        e.formulation = formulation;
        let back = RunConfig::from_text(&cfg.to_text(), Preset::Fig1).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn csv_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let mut t = Table::new(&["x"]);
        t.rows.push(vec![Value::Float(x)]);
        let csv = to_csv(&t);
        let cell = csv.lines().nth(1).unwrap();
        prop_assert!(!cell.contains(','));
        prop_assert_eq!(cell.parse::<f64>().unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn feasibility_is_monotone(m in 2usize..4, seed in any::<u64>(), a in 0.05..1.0f64, b in 0.05..1.0f64) {
        let [h1, h2] = relay_pair(m, seed);
        let lifted = Lifted::new(&h1, &h2, 200.0, 1.0, 3, Formulation::Reduced).unwrap();
        let bound = lifted.instance.sinr_upper_bound();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let at = |t: f64| solve_feasibility(&lifted.instance.at_target(t * bound), &SolverOptions::default()).status;
        if at(hi) == SdpStatus::Feasible {
            prop_assert_eq!(at(lo), SdpStatus::Feasible);
        }
    }

    #[test]
    fn certificate_reproduces_slack(m in 2usize..4, seed in any::<u64>(), frac in 0.05..0.95f64) {
        let [h1, h2] = relay_pair(m, seed);
        let lifted = Lifted::new(&h1, &h2, 200.0, 1.0, 3, Formulation::Reduced).unwrap();
        let inst = lifted.instance.at_target(frac * lifted.instance.sinr_upper_bound());
        let out = solve_feasibility(&inst, &SolverOptions::exact());
        if let Some([x1, x2]) = &out.x {
            let gaps = inst.gaps(x1, x2);
            let slack = gaps[0].min(gaps[1]);
            prop_assert!((slack - out.slack).abs() <= 1e-8 * (1.0 + out.slack.abs()));
        }
    }

    #[test]
    fn design_meets_target_and_power(m in 2usize..5, seed in any::<u64>()) {
        let [h1, h2] = relay_pair(m, seed);
        let opts = MultiuserOptions::default();
        let bf = max_min_sinr(&h1, &h2, 200.0, 1.0, 3, &opts).unwrap();
        prop_assert!(bf.min_sinr() >= bf.t_star - bf.eps - 1e-6);
        prop_assert!(bf.total_power <= 200.0 * (1.0 + 1e-8));
        prop_assert!(bf.bracket.1 - bf.bracket.0 <= bf.eps);
        prop_assert_eq!(bf.ranks, [1, 1]);
        let doubled = max_min_sinr(&h1, &h2, 400.0, 1.0, 3, &opts).unwrap();
        prop_assert!(doubled.t_star >= bf.t_star - bf.eps);
    }

    #[test]
    fn relay_links_are_circular(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 20_000;
        let h = complex_gaussian(&mut rng, n, 4.0);
        // E[h²] = 0 with Var(h²) = 2σ⁴ per component pair, i.e. E|h²|² = σ⁴
        let mean: Complex64 = h.iter().map(|x| x * x).sum::<Complex64>() / n as f64;
        prop_assert!(mean.norm() <= 6.0 * 4.0 / (n as f64).sqrt());
        let power: f64 = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
        prop_assert!((power - 4.0).abs() <= 6.0 * 4.0 / (n as f64).sqrt());
    }
}
