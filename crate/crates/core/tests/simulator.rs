use qinv::error::Error;
use qinv::fpt::{laplace_fpt, FptQuery};
use qinv::levy::LevyExponent;
use qinv::simulator::*;
use qinv::special_ref::kummer_phi;

fn bm(b: f64) -> LevyExponent {
    LevyExponent::brownian(b, 1.0).unwrap()
}

fn cfg(psi: LevyExponent, dt: f64, horizon: f64, seed: u64, scheme: Scheme) -> PathConfig {
    PathConfig::new(psi, 2.0, 1.0, dt, horizon, seed, scheme).unwrap()
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let e = Estimate::from_values(v);
    (e.estimate, e.std_error)
}

fn within(got: (f64, f64), want: f64, k: f64) -> bool {
    (got.0 - want).abs() < k * got.1
}

#[test]
fn brownian_increments_have_the_right_moments() {
    let psi = LevyExponent::brownian(0.3, 1.2).unwrap();
    let c = cfg(psi, 0.01, 1.0, 1, Scheme::Euler);
    let ends: Vec<f64> = (0..20_000).map(|i| *simulate_levy(&c, i).unwrap().xi.last().unwrap()).collect();
    let m = mean_se(&ends);
    assert!(within(m, 0.3, 3.0), "{m:?}");
    let sq: Vec<f64> = ends.iter().map(|x| (x - 0.3).powi(2)).collect();
    let v = mean_se(&sq);
    assert!(within(v, 1.2, 3.0), "{v:?}");
}

#[test]
fn pochhammer_paths_reproduce_the_exponent() {
    let psi = LevyExponent::pochhammer(1.5, 0.0).unwrap();
    let c = PathConfig::new(psi.clone(), 1.5, 1.0, 0.01, 1.0, 2, Scheme::JumpAdapted { jump_cutoff: 0.01 }).unwrap();
    let ends: Vec<f64> = (0..20_000).map(|i| *simulate_levy(&c, i).unwrap().xi.last().unwrap()).collect();
    let m = mean_se(&ends);
    assert!(within(m, psi.mean().unwrap(), 3.0), "mean {m:?}");
    for u in [0.5, 1.0] {
        let e: Vec<f64> = ends.iter().map(|x| (u * x).exp()).collect();
        let got = mean_se(&e);
        let want = psi.psi(u).unwrap().exp();
        assert!(within(got, want, 3.0), "u={u}: {got:?} vs {want}");
    }
}

#[test]
fn without_mean_reversion_u_is_the_lamperti_image() {
    let c = PathConfig::new(bm(0.2), 2.0, 0.0, 0.01, 3.0, 3, Scheme::Euler).unwrap();
    let x0 = 0.7;
    let xi = simulate_levy(&c, 4).unwrap();
    let u = lamperti_ou(&c, x0, 4).unwrap();
    for i in 0..u.u.len().min(xi.xi.len()) {
        assert!((u.u[i] - x0 * xi.xi[i].exp()).abs() < 1e-12 * u.u[i]);
        assert!((u.time[i] - x0 * x0 * xi.v[i]).abs() < 1e-12 * (1.0 + u.time[i]));
    }
}

#[test]
fn delta_clock_inverts_the_time_change() {
    // Δ is integrated from the U path alone, so it drifts from the ξ clock by
    // about (α²σ/6)·dt per unit of ξ-time; up to U-time 1 that stays below 5·dt
    let c = cfg(bm(0.3), 0.01, 1.0, 5, Scheme::Euler);
    for index in 0..50 {
        let p = lamperti_ou(&c, 0.6, index).unwrap();
        let d = p.delta_clock(2.0);
        for (di, si) in d.iter().zip(&p.xi_time) {
            assert!((di - si).abs() < 5.0 * c.dt, "path {index}: {di} vs {si}");
        }
    }
}

#[test]
fn z_is_a_power_of_u_in_the_xi_clock() {
    // with U_0 = 1, Z from z0 with β = χ/z0 is z0·U^α at the same ξ-time
    let c = cfg(bm(-0.25), 0.01, 2.0, 6, Scheme::Euler);
    let z0 = 0.8;
    for index in 0..10 {
        let u = lamperti_ou(&c, 1.0, index).unwrap();
        let z = simulate_z(&c, 1.0 / z0, c.chi() / z0, index).unwrap();
        for (uv, zv) in u.u.iter().zip(&z.values) {
            assert!((z0 * uv * uv - zv).abs() < 1e-12 * zv.max(1e-300));
        }
    }
}

#[test]
fn yhat_is_the_reciprocal_of_z() {
    let c = cfg(bm(0.1), 0.01, 2.0, 7, Scheme::Euler);
    for index in 0..10 {
        let z = simulate_z(&c, 1.3, 0.4, index).unwrap();
        let y = simulate_y(&c, 1.3, 0.4, true, index).unwrap();
        for (zv, yv) in z.values.iter().zip(&y.values) {
            assert!((zv * yv - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn y_without_beta_is_the_exponential() {
    let c = cfg(bm(0.1), 0.01, 1.0, 8, Scheme::Euler);
    let xi = simulate_levy(&c, 2).unwrap();
    let y = simulate_y(&c, 1.5, 0.0, false, 2).unwrap();
    for (x, v) in xi.xi.iter().zip(&y.values) {
        assert!((1.5 * (2.0 * x).exp() - v).abs() < 1e-12 * v);
    }
}

#[test]
fn running_integral_of_constant() {
    let p = ProcessPath { xi_time: vec![0.0, 0.5, 1.5], values: vec![2.0, 2.0, 2.0] };
    assert_eq!(p.running_integral(), vec![0.0, 1.0, 3.0]);
}

#[test]
fn exact_bessel_relaxes_to_the_stationary_moment() {
    // from U_0 = 0: E[U_t^α] = c²δ(1 − e^{−χt})/χ
    let c = cfg(bm(-0.25), 0.01, 10.0, 9, Scheme::ExactBessel);
    let chi = c.chi();
    let t = 3.0;
    let tau = (chi * t).exp_m1() / chi;
    let want = c.bessel_speed() * c.bessel_dimension() * (-(-chi * t).exp_m1()) / chi;
    let est = estimate_time_space(&c, 0.0, &[tau], 100_000, |_, x| Ok((-t).exp() * x * (-t).exp() * x)).unwrap();
    assert!(within((est[0].estimate, est[0].std_error), want, 3.0), "{:?} vs {want}", est[0]);
}

#[test]
fn lamperti_and_exact_bessel_agree_without_absorption() {
    // δ > 2: 0 is never reached, so both constructions give the same U
    let psi = bm(0.3);
    let x0 = 0.6;
    let t = 1.0;
    let lam = cfg(psi.clone(), 0.005, 10.0, 10, Scheme::Euler);
    let chi = lam.chi();
    let want = (-chi * t).exp() * x0 * x0 + lam.bessel_speed() * lam.bessel_dimension() * (-(-chi * t).exp_m1()) / chi;
    let e = estimate_functional_u(&lam, x0, t, 20_000, |u| u * u).unwrap();
    assert!(within((e.estimate, e.std_error), want, 3.0), "{e:?} vs {want}");
}

#[test]
fn girsanov_power_change_of_measure() {
    // ψ_θ at the Cramér root θ: U under Q^(θ) equals U under Q weighted by (U_t/x)^θ e^{λθt}
    let psi = bm(-0.25);
    let theta = psi.cramer_theta().unwrap().unwrap();
    let (x0, t, lambda) = (0.8, 1.0, 1.0);
    let g = |u: f64| (-u).exp();
    let shifted = PathConfig::new(psi.esscher(theta).unwrap(), 2.0, lambda, 0.01, 10.0, 11, Scheme::ExactBessel).unwrap();
    let chi = shifted.chi();
    let tau = (chi * t).exp_m1() / chi;
    let lhs = &estimate_time_space(&shifted, x0, &[tau], 20_000, |_, x| Ok(g((-lambda * t).exp() * x))).unwrap()[0];
    let base = PathConfig::new(psi, 2.0, lambda, 0.005, 10.0, 12, Scheme::Euler).unwrap();
    let w = (lambda * theta * t).exp();
    let rhs = estimate_functional_u(&base, x0, t, 20_000, |u| (u / x0).powf(theta) * w * g(u)).unwrap();
    let se = (lhs.std_error.powi(2) + rhs.std_error.powi(2)).sqrt();
    assert!((lhs.estimate - rhs.estimate).abs() < 3.0 * se, "{lhs:?} vs {rhs:?}");
}

#[test]
fn exact_bessel_passage_matches_kummer_ratio() {
    let (nu, q, x, a) = (0.25, 0.7, 0.5, 1.0);
    let c = cfg(bm(-nu), 0.01, 20.0, 13, Scheme::ExactBessel);
    let chi = c.chi();
    let want = kummer_phi(q / chi, 1.0 - nu, chi * x * x / 2.0).unwrap() / kummer_phi(q / chi, 1.0 - nu, chi * a * a / 2.0).unwrap();
    for p in [FptProcess::U, FptProcess::XMovingBoundary] {
        let e = estimate_fpt_laplace(&c, p, x, a, q, 20_000).unwrap();
        assert!(within((e.estimate, e.std_error), want, 3.0), "{p:?}: {e:?} vs {want}");
    }
}

#[test]
fn pochhammer_passage_matches_series_ratio() {
    // γ = 1 is the γ = 0 exponent tilted at its Cramér root θ = 1: b > 0 and U never reaches 0
    let psi = LevyExponent::pochhammer(1.5, 1.0).unwrap();
    let c = PathConfig::new(psi.clone(), 1.5, 1.0, 0.005, 30.0, 14, Scheme::JumpAdapted { jump_cutoff: 0.02 }).unwrap();
    let (q, x, a) = (1.0, 0.5, 1.0);
    let want = laplace_fpt(&FptQuery::new(FptProcess::U, psi, 1.5, 1.0, q, x, a).unwrap()).unwrap();
    let e = estimate_fpt_laplace(&c, FptProcess::U, x, a, q, 10_000).unwrap();
    // spectrally negative: no overshoot above, so passage is continuous
    assert!(within((e.estimate, e.std_error), want, 3.0), "{e:?} vs {want}");
}

#[test]
fn halving_the_step_moves_estimates_by_less_than_one_se() {
    let fine = cfg(bm(0.3), 0.01, 40.0, 15, Scheme::Euler);
    let coarse = fine.coarsened().unwrap();
    for (p, s, b) in [(FptProcess::U, 0.5, 1.0), (FptProcess::Z, 0.8, 1.5)] {
        let ef = estimate_fpt_laplace(&fine, p, s, b, 0.7, 20_000).unwrap();
        let ec = estimate_fpt_laplace(&coarse, p, s, b, 0.7, 20_000).unwrap();
        let se = (ef.std_error.powi(2) + ec.std_error.powi(2)).sqrt();
        assert!((ef.estimate - ec.estimate).abs() < se, "{p:?}: {ef:?} vs {ec:?}");
    }
}

#[test]
fn coarsening_needs_a_gaussian_grid() {
    let c = cfg(bm(0.3), 0.01, 1.0, 1, Scheme::ExactBessel);
    assert!(matches!(c.coarsened(), Err(Error::Config(_))));
}

#[test]
fn same_seed_same_bits() {
    let c = cfg(bm(0.3), 0.02, 20.0, 16, Scheme::Euler);
    let a = estimate_fpt_laplace(&c, FptProcess::U, 0.5, 1.0, 0.7, 2000).unwrap();
    let b = estimate_fpt_laplace(&c, FptProcess::U, 0.5, 1.0, 0.7, 2000).unwrap();
    assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    let other = cfg(bm(0.3), 0.02, 20.0, 17, Scheme::Euler);
    let d = estimate_fpt_laplace(&other, FptProcess::U, 0.5, 1.0, 0.7, 2000).unwrap();
    assert_ne!(a.estimate.to_bits(), d.estimate.to_bits());
}

#[test]
fn zero_rate_counts_hits() {
    let c = cfg(bm(0.3), 0.02, 20.0, 18, Scheme::Euler);
    let samples = sample_many(&c, FptProcess::U, 0.5, 1.0, 2000).unwrap();
    let e = laplace_from_samples(&samples, FptProcess::U, 0.0, c.chi()).unwrap();
    let frac = samples.iter().filter(|s| !s.killed).count() as f64 / 2000.0;
    assert_eq!(e.estimate, frac);
    assert!(frac > 0.99);
}

#[test]
fn too_few_hits_is_an_error() {
    let c = cfg(bm(0.3), 0.02, 2.0, 19, Scheme::Euler);
    let r = estimate_fpt_laplace(&c, FptProcess::U, 0.2, 5.0, 0.7, 1000);
    assert!(matches!(r, Err(Error::InsufficientHits { .. })), "{r:?}");
}

#[test]
fn delta_clock_with_reflection_rejected() {
    let c = cfg(bm(-0.25), 0.01, 10.0, 1, Scheme::ExactBessel);
    assert!(matches!(sample_fpt(&c, FptProcess::UDeltaClock, 0.5, 1.0, 0), Err(Error::MeaninglessQuery(_))));
}

#[test]
fn csv_has_one_row_per_path() {
    let c = cfg(bm(0.3), 0.02, 20.0, 20, Scheme::Euler);
    let samples = sample_many(&c, FptProcess::U, 0.5, 1.0, 50).unwrap();
    let mut buf = Vec::new();
    write_samples_csv(&mut buf, &samples).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "hit_time,overshoot,killed");
    assert_eq!(lines.len(), 51);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
}

#[test]
fn time_space_functional_is_a_martingale() {
    // M_t = (1+χt)^{−q/χ} χ^{q/χ} I_{α,ψ}(q/χ; χ X_t^α/(1+χt)), E M_t = M_0
    use qinv::series::{SeriesSpec, Truncation};
    // Var M_t < ∞ needs χt < 1 (M_t ~ exp(χX_t²/(2(1+χt))), X_t² tail exp(−X_t²/(2t)))
    let (q, chi, x0) = (0.7, 0.25, 0.8);
    let psi = bm(-0.25);
    let series = SeriesSpec::new(2.0, psi.clone(), Some(q / chi), Truncation::default()).unwrap();
    let m = |t: f64, x: f64| -> Result<f64, Error> {
        let s = 1.0 + chi * t;
        Ok(s.powf(-q / chi) * chi.powf(q / chi) * series.eval_real(chi * x * x / s)?.value)
    };
    let m0 = m(0.0, x0).unwrap();
    let c = cfg(psi, 0.01, 1.0, 11, Scheme::ExactBessel);
    let est = estimate_time_space(&c, x0, &[0.25, 0.5, 1.0], 20_000, m).unwrap();
    for e in &est {
        assert!((e.estimate - m0).abs() < 3.0 * e.std_error, "{e:?} vs {m0}");
    }
    let (a, b) = (&est[0], &est[2]);
    assert!((a.estimate - b.estimate).abs() < 3.0 * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt());
}
