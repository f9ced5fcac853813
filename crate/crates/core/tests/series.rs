use proptest::prelude::*;
use qinv::gamma_transform::{apply, GammaTransformSpec};
use qinv::levy::LevyExponent;
use qinv::series::{c_theta, eval_i, eval_iq, SeriesSpec, Truncation};
use qinv::special::{gamma, ln_gamma_ratio};

fn exponents() -> Vec<(LevyExponent, f64)> {
    vec![
        (LevyExponent::brownian(-0.25, 1.0).unwrap(), 2.0),
        (LevyExponent::brownian(0.3, 0.5).unwrap(), 1.5),
        (LevyExponent::pochhammer(1.5, 0.0).unwrap(), 1.5),
        (LevyExponent::pochhammer(1.75, 1.0).unwrap(), 1.75),
        (LevyExponent::pochhammer(1.25, 0.5).unwrap(), 2.5),
    ]
}

fn spec(psi: &LevyExponent, alpha: f64) -> SeriesSpec {
    SeriesSpec::new(alpha, psi.clone(), None, Truncation::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_satisfy_the_recursion(i in 0usize..5, n in 1usize..=200) {
        let (psi, alpha) = &exponents()[i];
        let s = spec(psi, *alpha);
        let (ln_n, sign_n) = s.ln_coeff(n).unwrap();
        let (ln_m, sign_m) = s.ln_coeff(n - 1).unwrap();
        let p = psi.psi(alpha * n as f64).unwrap();
        // a_n ψ(αn) / a_{n−1} − 1
        let r = (ln_n + p.abs().ln() - ln_m).exp_m1();
        // a_n is held as ln|a_n|, whose own rounding is ε|ln a_n| in relative terms
        prop_assert!(r.abs() < 1e-13 + 2.0 * f64::EPSILON * ln_m.abs(), "n = {n}: {r}");
        prop_assert_eq!(sign_n * p.signum(), sign_m);
    }

    #[test]
    fn gamma_transform_of_i_is_iq(i in 0usize..5, q in 0.1f64..5.0, x in 0.05f64..1.2, lambda in 0.3f64..2.0) {
        let (psi, alpha) = &exponents()[i];
        let chi = alpha * lambda;
        // the quadrature reaches far into the Gamma tail when q/χ is small
        let base = SeriesSpec::new(*alpha, psi.clone(), None, Truncation::new(1e-13, 4000).unwrap()).unwrap();
        let f = |y: f64| eval_i(&base, y.powf(*alpha)).unwrap().value;
        let t = GammaTransformSpec::new(q, chi, *alpha).unwrap();
        let quad = apply(&t, f, x).unwrap();
        let series = t.prefactor() * eval_iq(&base.with_q(Some(q / chi)).unwrap(), chi * x.powf(*alpha)).unwrap().value;
        prop_assert!((quad - series).abs() <= 1e-7 * series.abs(), "{quad} vs {series}");
    }
}

#[test]
fn more_terms_do_not_move_converged_values() {
    for (psi, alpha) in exponents() {
        let short = SeriesSpec::new(alpha, psi.clone(), None, Truncation::new(1e-13, 400).unwrap()).unwrap();
        let long = SeriesSpec::new(alpha, psi.clone(), None, Truncation::new(1e-13, 800).unwrap()).unwrap();
        for z in [-50.0, -10.0, -1.0, 0.5, 1.0, 10.0, 25.0, 50.0] {
            let (a, b) = (short.eval_real(z).unwrap().value, long.eval_real(z).unwrap().value);
            assert!((a - b).abs() <= 1e-13 * a.abs().max(b.abs()), "{:?} z = {z}: {a} vs {b}", psi.kind());
        }
    }
}

#[test]
fn growth_ratio_tends_to_c_theta() {
    // I(x^α) ~ C_{θ_α} x^θ I_{ψ_θ}(x^α) as x → ∞
    let psi = LevyExponent::brownian(-0.25, 1.0).unwrap();
    let alpha = 2.0;
    let theta = psi.cramer_theta().unwrap().unwrap();
    let shifted = spec(&psi.esscher(theta).unwrap(), alpha);
    let base = spec(&psi, alpha);
    let x: f64 = 30.0;
    let z = x.powf(alpha);
    let ratio = base.eval_real(z).unwrap().value / (x.powf(theta) * shifted.eval_real(z).unwrap().value);
    let c = c_theta(&psi, alpha).unwrap();
    assert!((ratio / c - 1.0).abs() < 0.01, "{ratio} vs {c}");
}

#[test]
fn pochhammer_over_factorial_grows_like_a_power() {
    // (q)_n/n! = Γ(n+q)/(Γ(q)Γ(n+1)) ~ n^{q−1}/Γ(q) (1 + q(q−1)/(2n) + …)
    for q in [0.2, 0.7, 1.0, 2.5, 4.0] {
        let mut r = 1.0;
        for n in 1..=100_000usize {
            r *= (q + (n - 1) as f64) / n as f64;
            let nf = n as f64;
            let scaled = r * gamma(q) / nf.powf(q - 1.0);
            if nf >= q * q {
                assert!((scaled - 1.0).abs() <= (q * (q - 1.0)).abs() / nf + 1e-10, "q = {q}, n = {n}: {scaled}");
            }
            if n % 997 == 0 {
                let lib = (ln_gamma_ratio(nf + 1.0, q - 1.0)).exp() / gamma(q);
                assert!((lib / r - 1.0).abs() < 1e-10, "q = {q}, n = {n}");
            }
        }
    }
}
