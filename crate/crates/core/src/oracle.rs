//! Independent checks: the contour-integral form of the reconstruction error
//! and the Laplace-method facts behind the hyper-Gaussian rate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{side_bounds, SideBounds, FLOOR_GRID};
use crate::error::{Error, Result};
use crate::genfun::{GeneratingFunction, Rectangle};
use crate::quadrature::{integrate, integrate_real, QuadratureOptions};
use crate::reconstruction::{ReconstructionPlan, Reconstructor};
use crate::regularizers::RegularizerSpec;
use crate::signals::Signal;

/// Positively oriented rectangle plus per-side quadrature tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub rect: Rectangle,
    pub tol: f64,
}

impl ContourSpec {
    pub fn new(t_minus: f64, t_plus: f64, s_minus: f64, s_plus: f64, tol: f64) -> Result<Self> {
        if !(t_minus < t_plus && s_minus < s_plus) {
            return Err(Error::Precondition(format!(
                "contour needs T- < T+ and S- < S+, got [{t_minus}, {t_plus}] x [{s_minus}, {s_plus}]"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::Precondition(format!("quadrature tolerance {tol} must be positive")));
        }
        Ok(Self { rect: Rectangle { t_minus, t_plus, s_minus, s_plus }, tol })
    }

    /// The plan's rectangle `T^+- + i(y +- N_*)`.
    pub fn from_plan(plan: &ReconstructionPlan, y: f64, tol: f64) -> Result<Self> {
        let r = plan.theorem_rectangle(y);
        Self::new(r.t_minus, r.t_plus, r.s_minus, r.s_plus, tol)
    }
}

/// The four side integrals of `f(zeta) G(z - zeta) / (phi(zeta) (zeta - z))`,
/// each taken along the positive orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideIntegrals {
    pub hor_plus: Complex64,
    pub hor_minus: Complex64,
    pub ver_plus: Complex64,
    pub ver_minus: Complex64,
    /// `phi(z) / (2 pi i)`.
    pub prefactor: Complex64,
}

impl SideIntegrals {
    /// `prefactor * (I_hor^+ + I_hor^- + I_ver^+ + I_ver^-)`.
    pub fn error(&self) -> Complex64 {
        self.prefactor * (((self.hor_minus + self.ver_plus) + self.hor_plus) + self.ver_minus)
    }

    pub fn magnitudes(&self) -> SideBounds {
        SideBounds {
            hor_plus: self.hor_plus.norm(),
            hor_minus: self.hor_minus.norm(),
            ver_plus: self.ver_plus.norm(),
            ver_minus: self.ver_minus.norm(),
        }
    }
}

fn check_contour(gf: &GeneratingFunction, plan: &ReconstructionPlan, z: Complex64, c: &ContourSpec) -> Result<()> {
    let r = &c.rect;
    if !r.contains(z) {
        return Err(Error::Precondition(format!("z = {z} is not inside the contour {r:?}")));
    }
    if gf.node_at(z).is_some() {
        return Err(Error::Precondition(format!("z = {z} is a sampling node")));
    }
    let n = plan.n as i64;
    if !(gf.node(-n - 1) < r.t_minus && r.t_minus < gf.node(-n) && gf.node(n) < r.t_plus && r.t_plus < gf.node(n + 1)) {
        return Err(Error::Precondition(format!(
            "contour must enclose exactly the nodes lambda_-{n}..lambda_{n}: T- = {}, T+ = {}",
            r.t_minus, r.t_plus
        )));
    }
    if r.max_modulus() > gf.window().radius() {
        return Err(Error::Precondition(format!(
            "contour reaches |z| = {} beyond the product window radius {}",
            r.max_modulus(),
            gf.window().radius()
        )));
    }
    Ok(())
}

fn breakpoints(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo];
    let mut inner: Vec<f64> = interior.iter().copied().filter(|p| *p > lo && *p < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(hi);
    pts
}

/// Side integrals on `c` for the evaluation point `z`.
pub fn side_decomposition(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    reg: &RegularizerSpec,
    z: Complex64,
    c: &ContourSpec,
) -> Result<SideIntegrals> {
    check_contour(gf, plan, z, c)?;
    let r = c.rect;
    let opts = QuadratureOptions::relative(c.tol);
    let integrand = |zeta: Complex64| {
        let phi = gf.phi(zeta);
        let inv_phi = phi.phase.conj() * (-phi.log_magnitude).exp();
        f.eval(zeta) * reg.eval(z - zeta) * inv_phi / (zeta - z)
    };
    let horizontal = |s: f64| {
        integrate(|t| integrand(Complex64::new(t, s)), &breakpoints(r.t_minus, r.t_plus, &[z.re]), opts)
    };
    let vertical = |t: f64| {
        integrate(|s| integrand(Complex64::new(t, s)), &breakpoints(r.s_minus, r.s_plus, &[0.0, z.im]), opts)
    };
    let ((bottom, top), (right, left)) = rayon::join(
        || rayon::join(|| horizontal(r.s_minus), || horizontal(r.s_plus)),
        || rayon::join(|| vertical(r.t_plus), || vertical(r.t_minus)),
    );
    let i = Complex64::i();
    Ok(SideIntegrals {
        hor_minus: bottom?.value,
        ver_plus: i * right?.value,
        hor_plus: -top?.value,
        ver_minus: -i * left?.value,
        prefactor: gf.phi(z).to_complex() / (2.0 * PI * i),
    })
}

/// `f(z) - G_N f(z)` evaluated as a contour integral.
pub fn residue_error(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    reg: &RegularizerSpec,
    z: Complex64,
    c: &ContourSpec,
) -> Result<Complex64> {
    Ok(side_decomposition(f, gf, plan, reg, z, c)?.error())
}

/// Direct and contour-integral errors side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueCheck {
    pub direct: Complex64,
    pub contour: Complex64,
    /// `|direct - contour| / max(|direct|, 1e-12)`.
    pub rel_deviation: f64,
}

pub fn residue_check(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    reg: &RegularizerSpec,
    z: Complex64,
    c: &ContourSpec,
) -> Result<ResidueCheck> {
    let contour = residue_error(f, gf, plan, reg, z, c)?;
    let direct = f.eval(z) - Reconstructor::new(f, gf, plan, reg)?.eval(z);
    let rel_deviation = (direct - contour).norm() / direct.norm().max(1e-12);
    Ok(ResidueCheck { direct, contour, rel_deviation })
}

/// Measured side integrals against their a-priori bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideBoundCheck {
    pub measured: SideBounds,
    pub bounds: SideBounds,
    pub floor: f64,
}

impl SideBoundCheck {
    pub fn violations(&self) -> usize {
        let m = &self.measured;
        let b = &self.bounds;
        [(m.hor_plus, b.hor_plus), (m.hor_minus, b.hor_minus), (m.ver_plus, b.ver_plus), (m.ver_minus, b.ver_minus)]
            .iter()
            .filter(|(v, bound)| !(v <= bound))
            .count()
    }
}

/// Compare each `|I|` with its bound, using the numerically computed contour floor.
pub fn side_bound_check(
    f: &Signal,
    gf: &GeneratingFunction,
    plan: &ReconstructionPlan,
    reg: &RegularizerSpec,
    z: Complex64,
    c: &ContourSpec,
) -> Result<SideBoundCheck> {
    let sides = side_decomposition(f, gf, plan, reg, z, c)?;
    let floor = gf.phi_floor(&c.rect, FLOOR_GRID)?;
    let bounds = side_bounds(f, reg, &c.rect, z, floor, c.tol)?;
    Ok(SideBoundCheck { measured: sides.magnitudes(), bounds, floor })
}

/// `h_m(t) = -Re (t + i)^{2m}`.
pub fn h_m(m: u32, t: f64) -> f64 {
    -Complex64::new(t, 1.0).powu(2 * m).re
}

fn h_m_prime(m: u32, t: f64) -> f64 {
    -(Complex64::new(t, 1.0).powu(2 * m - 1) * (2 * m) as f64).re
}

fn s_m(m: u32) -> f64 {
    (PI / (4.0 * m as f64 - 2.0)).sin()
}

/// Ratio of `int_0^inf e^{N h_m(t)} dt` to its Laplace asymptotic.
pub fn laplace_asymptotic_check(m: u32, n: f64) -> Result<f64> {
    if m < 2 || !(n > 0.0) {
        return Err(Error::ParameterDomain(format!("need m >= 2 and N > 0, got m = {m}, N = {n}")));
    }
    let mf = m as f64;
    let s = s_m(m);
    let t0 = 1.0 / (PI / (4.0 * mf - 2.0)).tan();
    let h0 = s.powf(1.0 - 2.0 * mf);
    let curvature = 2.0 * mf * (2.0 * mf - 1.0) * s.powf(3.0 - 2.0 * mf);
    let width = 1.0 / (n * curvature).sqrt();

    // integrand is scaled by e^{-N h0}; stop where it drops below 1e-300
    let cutoff = 300.0 * std::f64::consts::LN_10;
    let mut upper = t0 + width;
    while n * (h0 - h_m(m, upper)) < cutoff {
        upper += width.max(1e-3 * (1.0 + upper));
    }
    let pts = breakpoints(0.0, upper, &[t0 - 8.0 * width, t0 - 2.0 * width, t0, t0 + 2.0 * width, t0 + 8.0 * width]);
    let (scaled, _) = integrate_real(|t| (n * (h_m(m, t) - h0)).exp(), &pts, QuadratureOptions::relative(1e-9))?;
    let asymptotic = (PI / (mf * (2.0 * mf - 1.0))).sqrt() * s.powf(mf - 1.5) / n.sqrt();
    Ok(scaled / asymptotic)
}

/// `k N e^{-N f(0)} int_0^b e^{N f(t)} dt` for a profile with slope `-k` at 0.
pub fn boundary_layer_check<P: Fn(f64) -> f64>(k: f64, b: f64, profile: P, n: f64) -> Result<f64> {
    if !(k > 0.0 && b > 0.0 && n > 0.0) {
        return Err(Error::ParameterDomain(format!("need k, b, N > 0, got k = {k}, b = {b}, N = {n}")));
    }
    let f0 = profile(0.0);
    let layer = 1.0 / (k * n);
    let pts = breakpoints(0.0, b, &[layer, 10.0 * layer, 50.0 * layer]);
    let (integral, _) = integrate_real(|t| (n * (profile(t) - f0)).exp(), &pts, QuadratureOptions::relative(1e-12))?;
    Ok(integral * k * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub k: u32,
    pub t: f64,
    /// `(-1)^k sin(theta_k)^{1-2m}`.
    pub value: f64,
    /// `h_m(t_k)` evaluated directly.
    pub direct_value: f64,
    /// `h_m'(t_k)`, zero up to rounding.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HmLandscape {
    pub m: u32,
    pub critical_points: Vec<CriticalPoint>,
    /// Largest `h_m` over the search grid on `[0, t_0 + 10]` and where it occurs.
    pub grid_max: f64,
    pub grid_argmax: f64,
    pub grid_step: f64,
    /// Five-point finite difference of `h_m` at `t_0`.
    pub second_derivative_fd: f64,
    /// `-2m(2m-1) sin(pi/(4m-2))^{3-2m}`.
    pub second_derivative_closed: f64,
}

impl HmLandscape {
    /// Largest relative mismatch between closed-form and direct critical values.
    pub fn max_value_mismatch(&self) -> f64 {
        self.critical_points
            .iter()
            .map(|c| (c.value - c.direct_value).abs() / c.value.abs())
            .fold(0.0, f64::max)
    }

    pub fn second_derivative_mismatch(&self) -> f64 {
        (self.second_derivative_fd - self.second_derivative_closed).abs() / self.second_derivative_closed.abs()
    }

    /// `t_0` is the grid maximum up to one grid step and the sampled values never exceed `h_m(t_0)`.
    pub fn t0_is_global_max(&self) -> bool {
        let top = &self.critical_points[0];
        self.grid_max <= top.value * (1.0 + 1e-12) && (self.grid_argmax - top.t).abs() <= self.grid_step
    }
}

/// Critical points `t_k = cot((2k+1) pi / (4m-2))`, `k = 0..m-1`, of `h_m` on `[0, inf)`.
pub fn hm_landscape(m: u32) -> Result<HmLandscape> {
    if !(2..=20).contains(&m) {
        return Err(Error::ParameterDomain(format!("order m = {m} must lie in 2..=20")));
    }
    let mf = m as f64;
    let critical_points: Vec<CriticalPoint> = (0..m)
        .map(|k| {
            let theta = (2 * k + 1) as f64 * PI / (4.0 * mf - 2.0);
            let t = if 2 * k + 1 == 2 * m - 1 { 0.0 } else { 1.0 / theta.tan() };
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            CriticalPoint { k, t, value: sign * theta.sin().powf(1.0 - 2.0 * mf), direct_value: h_m(m, t), slope: h_m_prime(m, t) }
        })
        .collect();
    let t0 = critical_points[0].t;

    let upper = t0 + 10.0;
    let count = 400_000usize;
    let grid_step = upper / count as f64;
    let (grid_argmax, grid_max) = (0..=count)
        .map(|i| {
            let t = i as f64 * grid_step;
            (t, h_m(m, t))
        })
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });

    let step = 1e-3 * (1.0 + t0);
    let h = |t: f64| h_m(m, t);
    let second_derivative_fd = (-h(t0 + 2.0 * step) + 16.0 * h(t0 + step) - 30.0 * h(t0) + 16.0 * h(t0 - step)
        - h(t0 - 2.0 * step))
        / (12.0 * step * step);
    let second_derivative_closed = -2.0 * mf * (2.0 * mf - 1.0) * s_m(m).powf(3.0 - 2.0 * mf);

    Ok(HmLandscape {
        m,
        critical_points,
        grid_max,
        grid_argmax,
        grid_step,
        second_derivative_fd,
        second_derivative_closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::ProductWindow;
    use crate::reconstruction::plan;
    use crate::regularizers::{make_gaussian, make_hyper_gaussian};
    use crate::sequences::{make_perturbed, make_uniform};
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn setup(seq: &crate::sequences::SamplingSequence, n: usize) -> (GeneratingFunction, ReconstructionPlan) {
        let gf = GeneratingFunction::new(seq, ProductWindow::auto(n));
        let p = plan(&gf, n).unwrap();
        (gf, p)
    }

    #[test]
    fn residue_identity_uniform_cos() {
        let f = Signal::cos(FRAC_PI_2).unwrap();
        let (gf, p) = setup(&make_uniform(), 3);
        let reg = make_gaussian(FRAC_PI_2, p.n_star).unwrap();
        let c = ContourSpec::new(-3.5, 3.5, -2.5, 2.5, 1e-10).unwrap();
        for z in [Complex64::new(0.3, 0.0), Complex64::new(0.3, 0.2)] {
            let chk = residue_check(&f, &gf, &p, &reg, z, &c).unwrap();
            assert!(chk.rel_deviation <= 1e-8, "{chk:?}");
            assert!(chk.direct.norm() > 1e-6);
        }
    }

    #[test]
    fn residue_identity_perturbed_hyper() {
        let f = Signal::sinc(FRAC_PI_2).unwrap();
        let (gf, p) = setup(&make_perturbed(0.2, 7).unwrap(), 4);
        let reg = make_hyper_gaussian(2, FRAC_PI_2, p.n_star).unwrap();
        let c = ContourSpec::from_plan(&p, 0.0, 1e-10).unwrap();
        let chk = residue_check(&f, &gf, &p, &reg, Complex64::new(-0.2, 0.3), &c).unwrap();
        assert!(chk.rel_deviation <= 1e-8, "{chk:?}");
    }

    #[test]
    fn decomposition_sums_to_error() {
        let f = Signal::cos(1.0).unwrap();
        let (gf, p) = setup(&make_uniform(), 3);
        let reg = make_gaussian(1.0, p.n_star).unwrap();
        let c = ContourSpec::from_plan(&p, 0.0, 1e-10).unwrap();
        let z = Complex64::new(0.45, -0.1);
        let s = side_decomposition(&f, &gf, &p, &reg, z, &c).unwrap();
        let manual = s.prefactor * (s.hor_plus + s.hor_minus + s.ver_plus + s.ver_minus);
        let e = residue_error(&f, &gf, &p, &reg, z, &c).unwrap();
        assert!((manual - e).norm() <= 1e-12 * e.norm());
    }

    #[test]
    fn symmetric_setup_gives_conjugate_horizontal_sides() {
        let f = Signal::cos(FRAC_PI_2).unwrap();
        let (gf, p) = setup(&make_uniform(), 3);
        let reg = make_gaussian(FRAC_PI_2, p.n_star).unwrap();
        let c = ContourSpec::from_plan(&p, 0.0, 1e-11).unwrap();
        let s = side_decomposition(&f, &gf, &p, &reg, Complex64::new(0.3, 0.0), &c).unwrap();
        // conj of the bottom integrand is the top integrand; orientations differ by a sign
        assert!((s.hor_plus + s.hor_minus.conj()).norm() <= 1e-9 * s.hor_plus.norm());
    }

    #[test]
    fn halving_tolerance_is_stable() {
        let f = Signal::sinc(FRAC_PI_2).unwrap();
        let (gf, p) = setup(&make_perturbed(0.2, 1).unwrap(), 3);
        let reg = make_gaussian(FRAC_PI_2, p.n_star).unwrap();
        let z = Complex64::new(0.1, 0.2);
        let tol = 1e-8;
        let a = residue_error(&f, &gf, &p, &reg, z, &ContourSpec::from_plan(&p, 0.0, tol).unwrap()).unwrap();
        let b = residue_error(&f, &gf, &p, &reg, z, &ContourSpec::from_plan(&p, 0.0, tol / 2.0).unwrap()).unwrap();
        assert!((a - b).norm() <= tol * a.norm());
    }

    #[test]
    fn contour_preconditions() {
        let f = Signal::sinc(1.0).unwrap();
        let (gf, p) = setup(&make_uniform(), 3);
        let reg = make_gaussian(1.0, p.n_star).unwrap();
        let c = ContourSpec::from_plan(&p, 0.0, 1e-8).unwrap();
        let outside = residue_error(&f, &gf, &p, &reg, Complex64::new(5.0, 0.0), &c);
        assert!(matches!(outside, Err(Error::Precondition(_))));
        let node = residue_error(&f, &gf, &p, &reg, Complex64::new(1.0, 0.0), &c);
        assert!(matches!(node, Err(Error::Precondition(_))));
        let wide = ContourSpec::new(-4.5, 3.5, -2.5, 2.5, 1e-8).unwrap();
        assert!(residue_error(&f, &gf, &p, &reg, Complex64::new(0.3, 0.0), &wide).is_err());
        assert!(ContourSpec::new(1.0, -1.0, -1.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn side_bounds_hold() {
        let f = Signal::cos(FRAC_PI_2).unwrap();
        for seq in [make_uniform(), make_perturbed(0.2, 11).unwrap()] {
            let (gf, p) = setup(&seq, 3);
            for reg in [make_gaussian(FRAC_PI_2, p.n_star).unwrap(), make_hyper_gaussian(2, FRAC_PI_2, p.n_star).unwrap()] {
                let c = ContourSpec::from_plan(&p, 0.0, 1e-10).unwrap();
                let chk = side_bound_check(&f, &gf, &p, &reg, Complex64::new(0.3, 0.2), &c).unwrap();
                assert_eq!(chk.violations(), 0, "{chk:?}");
            }
        }
    }

    #[test]
    fn laplace_m2() {
        let r = laplace_asymptotic_check(2, 200.0).unwrap();
        assert!((0.95..=1.05).contains(&r), "{r}");
        let near = (laplace_asymptotic_check(3, 400.0).unwrap() - 1.0).abs();
        let far = (laplace_asymptotic_check(3, 100.0).unwrap() - 1.0).abs();
        assert!(near < far, "{near} vs {far}");
        assert!(laplace_asymptotic_check(1, 10.0).is_err());
    }

    #[test]
    fn boundary_layer_examples() {
        let lin = boundary_layer_check(2.0, 50.0, |t| -2.0 * t, 10.0).unwrap();
        assert_relative_eq!(lin, 1.0 - (-1000.0f64).exp(), max_relative = 1e-10);
        let quad = boundary_layer_check(2.0, 1.0, |t| -2.0 * t - t * t, 500.0).unwrap();
        assert!((0.98..=1.02).contains(&quad), "{quad}");
        let cubic = boundary_layer_check(1.0, 1.0, |t| -t - t * t * t, 1000.0).unwrap();
        assert!((0.99..=1.01).contains(&cubic), "{cubic}");
        // closed form for the linear profile on a short interval
        let short = boundary_layer_check(1.0, 0.01, |t| -t, 100.0).unwrap();
        assert_relative_eq!(short, 1.0 - (-1.0f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn hm_m2_closed_forms() {
        let l = hm_landscape(2).unwrap();
        assert_eq!(l.critical_points.len(), 2);
        assert_relative_eq!(l.critical_points[0].t, 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(l.critical_points[0].value, 8.0, max_relative = 1e-14);
        assert_relative_eq!(l.critical_points[1].value, -1.0, max_relative = 1e-14);
        assert_relative_eq!(h_m(2, 3f64.sqrt()), 8.0, max_relative = 1e-14);
    }

    #[test]
    fn hm_landscape_all_orders() {
        for m in 2..=20 {
            let l = hm_landscape(m).unwrap();
            assert_eq!(l.critical_points.len(), m as usize);
            assert!(l.max_value_mismatch() <= 1e-12, "m={m}: {}", l.max_value_mismatch());
            for c in &l.critical_points {
                let scale = (2 * m) as f64 * Complex64::new(c.t, 1.0).norm().powi(2 * m as i32 - 1);
                assert!(c.slope.abs() <= 1e-12 * scale, "m={m} k={}", c.k);
            }
            assert!(l.t0_is_global_max(), "m={m}");
            assert!(l.second_derivative_fd < 0.0);
            assert!(l.second_derivative_mismatch() <= 1e-6, "m={m}: {}", l.second_derivative_mismatch());
        }
        assert!(hm_landscape(1).is_err() && hm_landscape(21).is_err());
    }
}
