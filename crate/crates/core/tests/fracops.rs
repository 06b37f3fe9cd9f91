use fracvar_core::catalog::Catalog;
use fracvar_core::fracops::{
    green_residual, jumarie_derivative, line_integral, partial_frac, power_rule_oracle, volume_integral, AxisWeights,
};
use fracvar_core::special::gamma;
use fracvar_core::{make_grid, norm_1_inf, Axis, Field1D, Field2D, FractionalOrder, Grid2D};
use proptest::prelude::*;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

/// Brute-force reference for the Jumarie derivative of a C¹ function:
/// (1/Γ(1−α)) ∫ₐˣ (x−t)^(−α) f′(t) dt, with t = x − s^(1/(1−α)) removing the
/// singularity, then composite Simpson on the smooth integrand.
fn brute_force_derivative(df: impl Fn(f64) -> f64, a: f64, x: f64, alpha: f64) -> f64 {
    let p = 1.0 / (1.0 - alpha);
    let smax = (x - a).powf(1.0 - alpha);
    let n = 20_000;
    let h = smax / n as f64;
    // dt = p s^(p-1) ds, (x-t)^(-α) = s^(-αp), product s^(p-1-αp) = s^0
    let integrand = |s: f64| p * df(x - s.powf(p));
    let mut acc = integrand(0.0) + integrand(smax);
    for k in 1..n {
        acc += integrand(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0 / gamma(1.0 - alpha)
}

#[test]
fn power_rule_oracle_agrees_with_brute_force_quadrature() {
    for &(beta, alpha, x) in &[(1.0, 0.5, 1.0), (2.0, 0.25, 0.7), (2.0, 0.75, 0.3), (3.0, 0.4, 1.3)] {
        let exact = power_rule_oracle(beta, order(alpha), 0.0, x).unwrap();
        let brute = brute_force_derivative(|t: f64| beta * t.powf(beta - 1.0), 0.0, x, alpha);
        assert!(((exact - brute) / exact).abs() < 1e-8, "β={beta} α={alpha}: {exact} vs {brute}");
    }
}

#[test]
fn linear_function_at_half_order() {
    let f = Field1D::sample(0.0, 1.0, 513, |x| x).unwrap();
    let d = jumarie_derivative(&f, order(0.5)).unwrap();
    let last = *d.values().last().unwrap();
    let expect = 2.0 / std::f64::consts::PI.sqrt();
    assert!(((last - expect) / expect).abs() < 1e-3);
}

#[test]
fn classical_limit() {
    let f = Field1D::sample(0.0, 1.0, 513, |x| x).unwrap();
    let d = jumarie_derivative(&f, order(0.999)).unwrap();
    for &v in &d.values()[1..512] {
        assert!((v - 1.0).abs() < 2e-2, "{v}");
    }
    // smooth non-polynomial: compare with f′ = cos on the interior
    let f = Field1D::sample(0.0, 1.0, 513, f64::sin).unwrap();
    let d = jumarie_derivative(&f, order(0.999)).unwrap();
    for i in 1..512 {
        assert!((d.values()[i] - f.x(i).cos()).abs() < 2e-2);
    }
}

#[test]
fn separable_partial() {
    let g = make_grid(0.0, 1.0, 0.0, 1.0, 513, 5).unwrap();
    let u = Field2D::sample(&g, |x, y| x * y).unwrap();
    let d = partial_frac(&u, Axis::X, order(0.5)).unwrap();
    let c = 2.0 / std::f64::consts::PI.sqrt();
    for j in 1..5 {
        let expect = c * g.y(j);
        assert!(((d.get(512, j) - expect) / expect).abs() < 1e-3);
    }
    assert!((0..513).all(|i| d.get(i, 0) == 0.0));
    let dy = partial_frac(&Field2D::sample(&g, |x, _| x).unwrap(), Axis::Y, order(0.3)).unwrap();
    assert!(dy.values().iter().all(|&v| v == 0.0));
}

#[test]
fn partial_along_y_uses_lower_limit_c() {
    let g = make_grid(0.0, 1.0, 2.0, 3.0, 3, 257).unwrap();
    let u = Field2D::sample(&g, |_, y| (y - 2.0) * (y - 2.0)).unwrap();
    let d = partial_frac(&u, Axis::Y, order(0.5)).unwrap();
    let expect = power_rule_oracle(2.0, order(0.5), 2.0, 3.0).unwrap();
    assert!(((d.get(1, 256) - expect) / expect).abs() < 2e-3);
}

fn max_error_on(n: usize, beta: f64, alpha: f64) -> f64 {
    let g = make_grid(0.0, 1.0, 0.0, 1.0, n, 2).unwrap();
    let u = Field2D::sample(&g, |x, _| x.powf(beta)).unwrap();
    let d = partial_frac(&u, Axis::X, order(alpha)).unwrap();
    (1..n - 1)
        .map(|i| (d.get(i, 0) - power_rule_oracle(beta, order(alpha), 0.0, g.x(i)).unwrap()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn power_rule_convergence_order() {
    // β = 1 is reproduced to rounding (the reconstruction is exact), β = 2 at rate 2 − α.
    for &alpha in &[0.25, 0.5, 0.75] {
        let errs: Vec<f64> = [65, 129, 257].iter().map(|&n| max_error_on(n, 1.0, alpha)).collect();
        assert!(errs.iter().all(|&e| e < 1e-13), "{errs:?}");
        let errs: Vec<f64> = [65, 129, 257].iter().map(|&n| max_error_on(n, 2.0, alpha)).collect();
        let expected = (2.0 - alpha).min(3.0 - alpha);
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() >= 0.8 * expected, "α={alpha} {errs:?}");
        }
    }
}

#[test]
fn norm_of_linear_field() {
    let g = Grid2D::unit(513).unwrap();
    let u = Field2D::sample(&g, |x, _| x).unwrap();
    let a = order(0.5);
    let dux = partial_frac(&u, Axis::X, a).unwrap();
    let duy = partial_frac(&u, Axis::Y, a).unwrap();
    let n = norm_1_inf(&u, &dux, &duy).unwrap();
    let c = 2.0 / std::f64::consts::PI.sqrt();
    assert!((dux.max_abs() - c).abs() < 1e-3 * c);
    assert!((n - (1.0 + c)).abs() < 1e-3);
}

#[test]
fn volume_integral_exact_on_constants() {
    for &(a, b, c, d, alpha) in &[(0.0, 1.0, 0.0, 1.0, 0.5), (-1.0, 2.0, 0.5, 0.75, 0.2), (3.0, 10.0, -4.0, 4.0, 0.95)] {
        let g = make_grid(a, b, c, d, 33, 21).unwrap();
        let one = Field2D::constant(&g, 1.0).unwrap();
        let exact = (b - a as f64).powf(alpha) * (d - c as f64).powf(alpha);
        let v = volume_integral(&one, order(alpha));
        assert!(((v - exact) / exact).abs() < 1e-12);
    }
}

#[test]
fn volume_integral_exact_on_bilinear_fields() {
    // α² ∫∫ x y (1-x)^(α-1) (1-y)^(α-1) = α² B(2,α)² = 1/(α+1)²
    let alpha = 0.35;
    let g = Grid2D::unit(7).unwrap();
    let f = Field2D::sample(&g, |x, y| x * y).unwrap();
    let exact = 1.0 / ((alpha + 1.0) * (alpha + 1.0));
    assert!((volume_integral(&f, order(alpha)) - exact).abs() < 1e-13);
}

#[test]
fn line_integral_closed_forms_on_general_rectangle() {
    let (a, b, c, d) = (0.5, 2.0, -1.0, 1.5);
    let alpha = 0.3;
    let g = make_grid(a, b, c, d, 17, 9).unwrap();
    let o = order(alpha);
    let y = Field2D::sample(&g, |_, y| y).unwrap();
    // horizontal part only: (c − d)(b − a)^α
    assert!((line_integral(&y, o) - (c - d) * (b - a as f64).powf(alpha)).abs() < 1e-12);
    let x = Field2D::sample(&g, |x, _| x).unwrap();
    assert!((line_integral(&x, o) - (b - a) * (d - c as f64).powf(alpha)).abs() < 1e-12);
}

#[test]
fn green_holds_for_unit_coefficients() {
    // h ≡ 1, k ≡ 0 and η vanishing on ∂R: both sides are zero in the continuum.
    let cat = Catalog::builtin();
    let case = cat.green_case("bubble").unwrap();
    let mut residuals = vec![];
    for n in [33, 65, 129] {
        let g = Grid2D::unit(n).unwrap();
        let (h, _, eta) = case.fields(&g).unwrap();
        let r = green_residual(&h, &Field2D::zeros(&g), &eta, order(0.5)).unwrap();
        assert_eq!(r.rhs_boundary, 0.0);
        assert_eq!(r.rhs_volume, 0.0);
        residuals.push(r.residual.abs());
    }
    for w in residuals.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.0, "{residuals:?}");
    }
    // h = k on the symmetric square: the two derivative terms cancel
    let g = Grid2D::unit(65).unwrap();
    let (h, k, eta) = case.fields(&g).unwrap();
    assert!(green_residual(&h, &k, &eta, order(0.5)).unwrap().residual.abs() < 1e-14);
}

/// Continuum value of lhs − rhs for h = x, k = y², η = x(1−x)y(1−y), α = 1/2,
/// evaluated in closed form with the power rule and Beta integrals at 30 digits.
const POLY_CONTINUUM_DEFECT: f64 = 0.019_693_931_676_727_956;

#[test]
fn green_poly_residual_tends_to_continuum_defect() {
    let cat = Catalog::builtin();
    let case = cat.green_case("poly").unwrap();
    let gaps: Vec<f64> = [65, 129, 257]
        .iter()
        .map(|&n| {
            let (h, k, eta) = case.fields(&Grid2D::unit(n).unwrap()).unwrap();
            let r = green_residual(&h, &k, &eta, order(0.5)).unwrap();
            assert_eq!(r.rhs_boundary, 0.0);
            (r.residual - POLY_CONTINUUM_DEFECT).abs()
        })
        .collect();
    assert!(gaps[2] < 2e-5 && gaps[0] / gaps[2] > 3.0, "{gaps:?}");
}

proptest! {
    #[test]
    fn derivative_is_linear(
        s in -5.0f64..5.0,
        t in -5.0f64..5.0,
        alpha in 0.05f64..0.95,
        f in prop::collection::vec(-10.0f64..10.0, 2..40),
        g in prop::collection::vec(-10.0f64..10.0, 40),
    ) {
        let n = f.len();
        let ff = Field1D::new(0.0, 1.0, f.clone()).unwrap();
        let gg = Field1D::new(0.0, 1.0, g[..n].to_vec()).unwrap();
        let combo = Field1D::new(0.0, 1.0, (0..n).map(|i| s * f[i] + t * g[i]).collect()).unwrap();
        let o = order(alpha);
        let (df, dg, dc) = (
            jumarie_derivative(&ff, o).unwrap(),
            jumarie_derivative(&gg, o).unwrap(),
            jumarie_derivative(&combo, o).unwrap(),
        );
        for i in 0..n {
            let expect = s * df.values()[i] + t * dg.values()[i];
            prop_assert!((dc.values()[i] - expect).abs() <= 1e-11 * (1.0 + expect.abs() + df.values()[i].abs() + dg.values()[i].abs()));
        }
    }

    #[test]
    fn constants_vanish_identically(c in -1e6f64..1e6, alpha in 0.01f64..0.99, n in 2usize..64) {
        let f = Field1D::sample(-1.0, 2.0, n, |_| c).unwrap();
        prop_assert!(jumarie_derivative(&f, order(alpha)).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn axis_weights_nonnegative_and_exact(lo in -10.0f64..10.0, len in 0.01f64..20.0, n in 2usize..300, alpha in 0.01f64..0.99) {
        let w = AxisWeights::new(lo, lo + len, n, order(alpha));
        prop_assert!(w.as_slice().iter().all(|&x| x.is_finite() && x >= 0.0));
        let sum: f64 = w.as_slice().iter().sum();
        let exact = len.powf(alpha) / alpha;
        prop_assert!(((sum - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn norm_triangle_and_homogeneity(
        u in prop::collection::vec(-3.0f64..3.0, 25),
        v in prop::collection::vec(-3.0f64..3.0, 25),
        s in -4.0f64..4.0,
    ) {
        let g = Grid2D::unit(5).unwrap();
        let a = order(0.6);
        let norm = |f: &Field2D| {
            norm_1_inf(f, &partial_frac(f, Axis::X, a).unwrap(), &partial_frac(f, Axis::Y, a).unwrap()).unwrap()
        };
        let fu = Field2D::new(g, u).unwrap();
        let fv = Field2D::new(g, v).unwrap();
        prop_assert!(norm(&fu.add(&fv).unwrap()) <= norm(&fu) + norm(&fv) + 1e-12);
        prop_assert!((norm(&fu.scale(s).unwrap()) - s.abs() * norm(&fu)).abs() < 1e-11 * (1.0 + norm(&fu)));
    }
}
