//! Dolbeault/Maass calculus on the product of two hyperbolic planes with the
//! `16 pi^2`-normalized invariant metric.
//!
//! Forms are carried as callable component fields over the six monomial types
//! reachable from the antiholomorphic complex (`(0,k)` and their Hodge-star
//! images `(2,2-k)`). The star operator is defined by
//! `alpha ^ star(beta) = <alpha, beta> omega^2 / 2` with per-type metric
//! weights; antiholomorphic singleton slots carry weight `4 * scale * y^2`,
//! the unique normalization under which the Dolbeault laplacians realize the
//! `scale`-multiple of the hyperbolic laplacian on weight-zero eigenfunctions,
//! while the top antiholomorphic type keeps the determinant weight
//! `scale^2 y1^2 y2^2`. The `(2,q)` weights mirror these so that star is a
//! pointwise involution up to sign. Derivatives are central differences with
//! one step of Richardson extrapolation.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub type Func = Rc<dyn Fn(Complex64, Complex64) -> Complex64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypError {
    /// Operator applied to a form type outside its domain.
    BadFormType,
}

impl fmt::Display for HypError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypError::BadFormType => write!(f, "operator undefined on this form type"),
        }
    }
}

/// Metric normalization: the constant in `||dz_j||^2 = scale * y_j^2`.
#[derive(Clone, Copy, Debug)]
pub struct MetricSpec {
    pub scale: f64,
}

impl MetricSpec {
    pub fn standard() -> Self {
        MetricSpec { scale: 16.0 * core::f64::consts::PI * core::f64::consts::PI }
    }
}

impl Default for MetricSpec {
    fn default() -> Self {
        Self::standard()
    }
}

/// General form field: optional `dz1 ^ dz2` factor (holomorphic degree 0 or
/// 2) and components indexed by the antiholomorphic mask over
/// `{dzbar1, dzbar2}`.
#[derive(Clone)]
pub struct FormField {
    pub has_dz: bool,
    comps: [Option<Func>; 4],
}

/// Public form types of the antiholomorphic complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    F00,
    F01,
    F02,
}

impl FormField {
    pub fn zero() -> Self {
        FormField { has_dz: false, comps: [None, None, None, None] }
    }

    pub fn function(f: Func) -> Self {
        FormField { has_dz: false, comps: [Some(f), None, None, None] }
    }

    /// `f1 dzbar1 + f2 dzbar2`.
    pub fn zero_one(f1: Option<Func>, f2: Option<Func>) -> Self {
        FormField { has_dz: false, comps: [None, f1, f2, None] }
    }

    /// `g dzbar1 ^ dzbar2`.
    pub fn zero_two(g: Func) -> Self {
        FormField { has_dz: false, comps: [None, None, None, Some(g)] }
    }

    pub fn component(&self, q_mask: usize) -> Option<&Func> {
        self.comps[q_mask].as_ref()
    }

    pub fn eval_component(&self, q_mask: usize, z1: Complex64, z2: Complex64) -> Complex64 {
        match &self.comps[q_mask] {
            Some(f) => f(z1, z2),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn kind(&self) -> Option<FormKind> {
        if self.has_dz {
            return None;
        }
        let present: Vec<usize> =
            (0..4).filter(|&m| self.comps[m].is_some()).collect();
        if present.iter().all(|&m| m == 0) {
            Some(FormKind::F00)
        } else if present.iter().all(|&m| m == 1 || m == 2) {
            Some(FormKind::F01)
        } else if present.iter().all(|&m| m == 3) {
            Some(FormKind::F02)
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &FormField) -> FormField {
        assert_eq!(self.has_dz, rhs.has_dz);
        let mut comps: [Option<Func>; 4] = [None, None, None, None];
        for (m, slot) in comps.iter_mut().enumerate() {
            *slot = match (&self.comps[m], &rhs.comps[m]) {
                (None, None) => None,
                (Some(f), None) => Some(f.clone()),
                (None, Some(g)) => Some(g.clone()),
                (Some(f), Some(g)) => {
                    let (f, g) = (f.clone(), g.clone());
                    Some(Rc::new(move |z1, z2| f(z1, z2) + g(z1, z2)) as Func)
                }
            };
        }
        FormField { has_dz: self.has_dz, comps }
    }

    pub fn scale_by(&self, c: f64) -> FormField {
        let mut comps: [Option<Func>; 4] = [None, None, None, None];
        for (m, slot) in comps.iter_mut().enumerate() {
            if let Some(f) = &self.comps[m] {
                let f = f.clone();
                *slot = Some(Rc::new(move |z1, z2| f(z1, z2) * c) as Func);
            }
        }
        FormField { has_dz: self.has_dz, comps }
    }
}

/// Metric weight of a monomial `(has_dz, q_mask)` at a point.
fn metric_weight(spec: &MetricSpec, has_dz: bool, q_mask: usize, y1: f64, y2: f64) -> f64 {
    let s = spec.scale;
    let base = |q: usize| -> f64 {
        match q {
            0 => 1.0,
            1 => 4.0 * s * y1 * y1,
            2 => 4.0 * s * y2 * y2,
            3 => s * s * y1 * y1 * y2 * y2,
            _ => unreachable!(),
        }
    };
    if !has_dz {
        base(q_mask)
    } else {
        // mirror rule: m(B) = (s^4 y1^4 y2^4) / m(complement(B))
        let top = libm::pow(s, 4.0) * libm::pow(y1, 4.0) * libm::pow(y2, 4.0);
        top / base(3 - q_mask)
    }
}

/// Sign of `B ^ complement(B)` against the canonical top monomial
/// `dz1 ^ dz2 ^ dzbar1 ^ dzbar2`: -1 exactly when the antiholomorphic part of
/// `B` is `{dzbar2}` alone.
fn complement_sign(q_mask: usize) -> f64 {
    if q_mask == 2 {
        -1.0
    } else {
        1.0
    }
}

/// Volume coefficient: `omega^2/2 = w22 * dz1^dz2^dzbar1^dzbar2` with
/// `w22 = 1/(scale^2 y1^2 y2^2)`.
fn w22(spec: &MetricSpec, y1: f64, y2: f64) -> f64 {
    1.0 / (spec.scale * spec.scale * y1 * y1 * y2 * y2)
}

/// Density of `omega^2/2` against `dx1 dy1 dx2 dy2`.
pub fn volume_density(spec: &MetricSpec, y1: f64, y2: f64) -> f64 {
    4.0 * w22(spec, y1, y2)
}

/// Hodge star, conjugate-linear, defined by
/// `alpha ^ star(beta) = <alpha, beta> omega^2/2`.
pub fn star(spec: &MetricSpec, form: &FormField) -> FormField {
    let s = *spec;
    let has_dz_out = !form.has_dz;
    let mut comps: [Option<Func>; 4] = [None, None, None, None];
    for q in 0..4 {
        if let Some(f) = &form.comps[q] {
            let f = f.clone();
            let has_dz_in = form.has_dz;
            let qc = 3 - q;
            let func: Func = Rc::new(move |z1: Complex64, z2: Complex64| {
                let (y1, y2) = (z1.im, z2.im);
                let c = metric_weight(&s, has_dz_in, q, y1, y2) * w22(&s, y1, y2)
                    / complement_sign(q);
                f(z1, z2).conj() * c
            });
            comps[qc] = Some(func);
        }
    }
    FormField { has_dz: has_dz_out, comps }
}

/// Inverse Hodge star: `star_inv(g B') = conj(g)/c_B B` for `B` the
/// complement of `B'`.
pub fn star_inv(spec: &MetricSpec, form: &FormField) -> FormField {
    let s = *spec;
    let has_dz_out = !form.has_dz;
    let mut comps: [Option<Func>; 4] = [None, None, None, None];
    for q in 0..4 {
        if let Some(f) = &form.comps[q] {
            let f = f.clone();
            let qc = 3 - q;
            let func: Func = Rc::new(move |z1: Complex64, z2: Complex64| {
                let (y1, y2) = (z1.im, z2.im);
                // coefficient of star on the *output* monomial (has_dz_out, qc)
                let c = metric_weight(&s, has_dz_out, qc, y1, y2) * w22(&s, y1, y2)
                    / complement_sign(qc);
                f(z1, z2).conj() / c
            });
            comps[qc] = Some(func);
        }
    }
    FormField { has_dz: has_dz_out, comps }
}

/// Central-difference antiholomorphic derivative `df/dzbar_j` with one
/// Richardson step.
fn dbar_scalar(f: &Func, j: usize, h: f64) -> Func {
    let f = f.clone();
    Rc::new(move |z1: Complex64, z2: Complex64| {
        let d = |hh: f64| -> Complex64 {
            let ex = Complex64::new(hh, 0.0);
            let ey = Complex64::new(0.0, hh);
            let (fx_p, fx_m, fy_p, fy_m) = if j == 1 {
                (f(z1 + ex, z2), f(z1 - ex, z2), f(z1 + ey, z2), f(z1 - ey, z2))
            } else {
                (f(z1, z2 + ex), f(z1, z2 - ex), f(z1, z2 + ey), f(z1, z2 - ey))
            };
            let dx = (fx_p - fx_m) / (2.0 * hh);
            let dy = (fy_p - fy_m) / (2.0 * hh);
            // d/dzbar = (d/dx + i d/dy)/2
            (dx + Complex64::new(0.0, 1.0) * dy) / 2.0
        };
        let d1 = d(h);
        let d2 = d(h / 2.0);
        (d2 * 4.0 - d1) / 3.0
    })
}

/// Antiholomorphic differential in the `j`-th variable.
pub fn dbar(form: &FormField, j: usize, h: f64) -> FormField {
    assert!(j == 1 || j == 2);
    let bit = 1usize << (j - 1);
    let mut comps: [Option<Func>; 4] = [None, None, None, None];
    let dz_slots = if form.has_dz { 2usize } else { 0 };
    for q in 0..4usize {
        if let Some(f) = &form.comps[q] {
            if q & bit != 0 {
                continue; // dzbar_j ^ dzbar_j = 0
            }
            let lower = (q & (bit - 1)).count_ones() as usize;
            let sign = if (dz_slots + lower) % 2 == 0 { 1.0 } else { -1.0 };
            let df = dbar_scalar(f, j, h);
            let func: Func = Rc::new(move |z1, z2| df(z1, z2) * sign);
            let target = q | bit;
            comps[target] = match &comps[target] {
                None => Some(func),
                Some(g) => {
                    let g = g.clone();
                    Some(Rc::new(move |z1: Complex64, z2: Complex64| g(z1, z2) + func(z1, z2))
                        as Func)
                }
            };
        }
    }
    FormField { has_dz: form.has_dz, comps }
}

/// Total antiholomorphic differential.
pub fn dbar_total(form: &FormField, h: f64) -> FormField {
    dbar(form, 1, h).add(&dbar(form, 2, h))
}

/// Formal adjoint `dbar*_j = (-1)^k star_inv dbar_j star` on `(0,k)` forms.
pub fn dbar_star(spec: &MetricSpec, form: &FormField, j: usize, h: f64) -> FormField {
    let k = match form.kind() {
        Some(FormKind::F00) => return FormField::zero(),
        Some(FormKind::F01) => 1i32,
        Some(FormKind::F02) => 2,
        None => panic!("dbar_star expects a (0,k) form"),
    };
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    star_inv(spec, &dbar(&star(spec, form), j, h)).scale_by(sign)
}

pub fn dbar_star_total(spec: &MetricSpec, form: &FormField, h: f64) -> FormField {
    let k = match form.kind() {
        Some(FormKind::F00) => return FormField::zero(),
        Some(FormKind::F01) => 1i32,
        Some(FormKind::F02) => 2,
        None => panic!("dbar_star expects a (0,k) form"),
    };
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let starred = star(spec, form);
    let d = dbar(&starred, 1, h).add(&dbar(&starred, 2, h));
    star_inv(spec, &d).scale_by(sign)
}

/// Per-variable Dolbeault laplacian `dbar_j dbar*_j + dbar*_j dbar_j`.
pub fn laplacian(spec: &MetricSpec, form: &FormField, j: usize, h: f64) -> FormField {
    let up = dbar(form, j, h);
    let a = dbar_star(spec, &up, j, h);
    match form.kind() {
        Some(FormKind::F00) => a,
        _ => {
            let down = dbar_star(spec, form, j, h);
            let b = dbar(&down, j, h);
            a.add(&b)
        }
    }
}

/// Total Dolbeault laplacian with the full differential `dbar = dbar_1 + dbar_2`.
pub fn laplacian_total(spec: &MetricSpec, form: &FormField, h: f64) -> FormField {
    let up = dbar_star_total(spec, &dbar_total(form, h), h);
    match form.kind() {
        Some(FormKind::F00) => up,
        _ => up.add(&dbar_total(&dbar_star_total(spec, form, h), h)),
    }
}

/// The unitary Maass transforms: `(0,1)` components map to `4 pi y_j f`,
/// `(0,2)` to `16 pi^2 y1 y2 g`.
pub fn maass_transform(form: &FormField) -> Result<Vec<Func>, HypError> {
    match form.kind() {
        Some(FormKind::F01) => {
            let mut out: Vec<Func> = Vec::new();
            for (q, yj) in [(1usize, 1usize), (2, 2)] {
                let f = form.comps[q].clone();
                let func: Func = Rc::new(move |z1: Complex64, z2: Complex64| {
                    let y = if yj == 1 { z1.im } else { z2.im };
                    match &f {
                        Some(f) => f(z1, z2) * (4.0 * core::f64::consts::PI * y),
                        None => Complex64::new(0.0, 0.0),
                    }
                });
                out.push(func);
            }
            Ok(out)
        }
        Some(FormKind::F02) => {
            let g = form.comps[3].clone().ok_or(HypError::BadFormType)?;
            let func: Func = Rc::new(move |z1: Complex64, z2: Complex64| {
                let c = 16.0 * core::f64::consts::PI * core::f64::consts::PI * z1.im * z2.im;
                g(z1, z2) * c
            });
            Ok(vec![func])
        }
        _ => Err(HypError::BadFormType),
    }
}

/// Rectangle in the `z1` plane for fiberwise quadrature.
#[derive(Clone, Copy, Debug)]
pub struct Box2 {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Pointwise hermitian pairing of two forms of the same kind.
pub fn pointwise_pairing(
    spec: &MetricSpec,
    a: &FormField,
    b: &FormField,
    z1: Complex64,
    z2: Complex64,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for q in 0..4 {
        let fa = a.eval_component(q, z1, z2);
        let fb = b.eval_component(q, z1, z2);
        if fa.norm_sqr() == 0.0 && fb.norm_sqr() == 0.0 {
            continue;
        }
        acc += fa * fb.conj() * metric_weight(spec, a.has_dz, q, z1.im, z2.im);
    }
    acc
}

/// Fiberwise L2 pairing over a `z1`-box at fixed `z2`, with the volume
/// density of `omega^2/2` restricted to the fiber; midpoint rule on an
/// `n x n` grid.
pub fn l2_pairing_fiber(
    spec: &MetricSpec,
    a: &FormField,
    b: &FormField,
    bx: &Box2,
    z2: Complex64,
    n: usize,
) -> Complex64 {
    let dx = (bx.x_max - bx.x_min) / n as f64;
    let dy = (bx.y_max - bx.y_min) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            let x = bx.x_min + (i as f64 + 0.5) * dx;
            let y = bx.y_min + (k as f64 + 0.5) * dy;
            let z1 = Complex64::new(x, y);
            let w = volume_density(spec, y, z2.im);
            acc += pointwise_pairing(spec, a, b, z1, z2) * w;
        }
    }
    acc * (dx * dy)
}

/// Adjointness defect `|<dbar_1 alpha, beta> - <alpha, dbar*_1 beta>|` for
/// compactly supported `z1`-dependent forms, integrated over the support box.
pub fn adjointness_check(
    spec: &MetricSpec,
    alpha: &FormField,
    beta: &FormField,
    bx: &Box2,
    z2: Complex64,
    grid: usize,
    h: f64,
) -> f64 {
    let da = dbar(alpha, 1, h);
    let dsb = dbar_star(spec, beta, 1, h);
    let lhs = l2_pairing_fiber(spec, &da, beta, bx, z2, grid);
    let rhs = l2_pairing_fiber(spec, alpha, &dsb, bx, z2, grid);
    (lhs - rhs).norm()
}

/// Smooth compactly supported bump `exp(-1/(1-t^2))` profile centred on the
/// box, as a `(0,0)` field depending on `z1` only.
pub fn bump_function(bx: Box2) -> Func {
    Rc::new(move |z1: Complex64, _z2: Complex64| {
        let tx = 2.0 * (z1.re - bx.x_min) / (bx.x_max - bx.x_min) - 1.0;
        let ty = 2.0 * (z1.im - bx.y_min) / (bx.y_max - bx.y_min) - 1.0;
        if tx.abs() >= 1.0 || ty.abs() >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let v = libm::exp(-1.0 / (1.0 - tx * tx)) * libm::exp(-1.0 / (1.0 - ty * ty));
        Complex64::new(v, 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> MetricSpec {
        MetricSpec::standard()
    }

    fn pt() -> (Complex64, Complex64) {
        (Complex64::new(0.3, 1.2), Complex64::new(-0.1, 0.9))
    }

    fn y_power(s: f64, var: usize) -> Func {
        Rc::new(move |z1: Complex64, z2: Complex64| {
            let y = if var == 1 { z1.im } else { z2.im };
            Complex64::new(libm::pow(y, s), 0.0)
        })
    }

    #[test]
    fn dbar_kills_holomorphic() {
        let f: Func = Rc::new(|z1: Complex64, z2: Complex64| z1 * z1 + z2 * 3.0 + 1.0);
        let form = FormField::function(f);
        let d = dbar_total(&form, 1e-4);
        let (z1, z2) = pt();
        for q in [1usize, 2] {
            assert!(d.eval_component(q, z1, z2).norm() < 1e-8);
        }
    }

    #[test]
    fn star_star_is_plus_minus_one() {
        let s = spec();
        let (z1, z2) = pt();
        // (0,0)
        let f = FormField::function(Rc::new(|z1: Complex64, _| z1 + 1.0));
        let ss = star(&s, &star(&s, &f));
        let ratio = ss.eval_component(0, z1, z2) / f.eval_component(0, z1, z2);
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
        assert!((ratio.im).abs() < 1e-12);
        // (0,1) each slot
        for q in [1usize, 2] {
            let mut comps: [Option<Func>; 4] = [None, None, None, None];
            comps[q] = Some(Rc::new(|z1: Complex64, z2: Complex64| z1 * z2 + 2.0));
            let form = FormField { has_dz: false, comps };
            let ss = star(&s, &star(&s, &form));
            let ratio = ss.eval_component(q, z1, z2) / form.eval_component(q, z1, z2);
            assert!((ratio.norm() - 1.0).abs() < 1e-12, "q={q} ratio={ratio}");
        }
        // (0,2)
        let g = FormField::zero_two(Rc::new(|z1: Complex64, _| z1 * 2.0));
        let ss = star(&s, &star(&s, &g));
        let ratio = ss.eval_component(3, z1, z2) / g.eval_component(3, z1, z2);
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_inv_inverts() {
        let s = spec();
        let (z1, z2) = pt();
        for q in [0usize, 1, 2, 3] {
            let mut comps: [Option<Func>; 4] = [None, None, None, None];
            comps[q] = Some(Rc::new(|z1: Complex64, z2: Complex64| {
                z1 + z2 * Complex64::new(0.0, 0.5)
            }));
            let form = FormField { has_dz: false, comps };
            let round = star_inv(&s, &star(&s, &form));
            let diff = round.eval_component(q, z1, z2) - form.eval_component(q, z1, z2);
            assert!(diff.norm() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn star_defining_identity_on_samples() {
        // alpha ^ star(beta) = <alpha, beta> omega^2/2 checked by wedge
        // coefficient comparison for (0,1) monomial pairs.
        let s = spec();
        let (z1, z2) = pt();
        let (y1, y2) = (z1.im, z2.im);
        // beta = b dzbar1, alpha = a dzbar1
        let a = Complex64::new(1.3, -0.4);
        let b = Complex64::new(0.7, 2.1);
        // star(b dzbar1) = conj(b) c dz1 dz2 dzbar2 with c from the table
        let mut comps: [Option<Func>; 4] = [None, None, None, None];
        comps[1] = Some(Rc::new(move |_, _| b));
        let beta = FormField { has_dz: false, comps };
        let sb = star(&s, &beta);
        let c = sb.eval_component(2, z1, z2); // dz-part implicit via has_dz
        assert!(sb.has_dz);
        // wedge: (a dzbar1) ^ (c dz1 dz2 dzbar2) = a c (dzbar1 dz1 dz2 dzbar2)
        // reorder to canonical dz1 dz2 dzbar1 dzbar2: two transpositions -> +
        let lhs = a * c;
        let rhs = a * b.conj() * metric_weight(&s, false, 1, y1, y2) * w22(&s, y1, y2);
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn eigenvalue_ratio_is_scale() {
        let s = spec();
        let (z1, z2) = pt();
        for sv in [2.0f64, 2.5, 3.0] {
            let f = FormField::function(y_power(sv, 1));
            let lap = laplacian(&s, &f, 1, 1e-4);
            let got = lap.eval_component(0, z1, z2);
            let expected = s.scale * sv * (1.0 - sv) * libm::pow(z1.im, sv);
            let rel = (got.re - expected).abs() / expected.abs();
            assert!(rel < 1e-6, "s={sv}: got {got}, expected {expected}, rel {rel:e}");
            assert!(got.im.abs() < 1e-6 * expected.abs());
            // the second variable is inert
            let lap2 = laplacian(&s, &f, 2, 1e-4);
            assert!(lap2.eval_component(0, z1, z2).norm() < 1e-4);
        }
    }

    #[test]
    fn constant_in_kernel() {
        let s = spec();
        let f = FormField::function(Rc::new(|_, _| Complex64::new(3.5, 0.0)));
        let (z1, z2) = pt();
        let lap = laplacian_total(&s, &f, 1e-4);
        assert!(lap.eval_component(0, z1, z2).norm() < 1e-8);
    }

    #[test]
    fn laplacian_splits_into_variables() {
        let s = spec();
        let (z1, z2) = pt();
        // smooth non-product test function
        let f: Func = Rc::new(|z1: Complex64, z2: Complex64| {
            let a = z1.im * z1.im + 0.3 * z1.re;
            let b = libm::exp(-0.2 * z2.re) * z2.im;
            Complex64::new(a * b + 0.1 * a, 0.0)
        });
        let form = FormField::function(f);
        let total = laplacian_total(&s, &form, 1e-3);
        let split = laplacian(&s, &form, 1, 1e-3).add(&laplacian(&s, &form, 2, 1e-3));
        let d = total.eval_component(0, z1, z2) - split.eval_component(0, z1, z2);
        let mag = total.eval_component(0, z1, z2).norm();
        assert!(d.norm() < 1e-5 * (1.0 + mag), "defect {d}");
    }

    #[test]
    fn laplacians_commute_pointwise() {
        let s = spec();
        let (z1, z2) = pt();
        let f: Func = Rc::new(|z1: Complex64, z2: Complex64| {
            Complex64::new(libm::pow(z1.im, 2.0) * libm::pow(z2.im, 2.5), 0.0)
        });
        let form = FormField::function(f);
        let h = 5e-3;
        let ab = laplacian(&s, &laplacian(&s, &form, 2, h), 1, h);
        let ba = laplacian(&s, &laplacian(&s, &form, 1, h), 2, h);
        let va = ab.eval_component(0, z1, z2);
        let vb = ba.eval_component(0, z1, z2);
        assert!((va - vb).norm() < 1e-4 * (1.0 + va.norm()), "{va} vs {vb}");
    }

    #[test]
    fn top_form_norm_squared() {
        // || dzbar1 ^ dzbar2 ||^2 = (16 pi^2)^2 y1^2 y2^2
        let s = spec();
        let (z1, z2) = pt();
        let g = FormField::zero_two(Rc::new(|_, _| Complex64::new(1.0, 0.0)));
        let norm2 = pointwise_pairing(&s, &g, &g, z1, z2);
        let expected = s.scale * s.scale * z1.im * z1.im * z2.im * z2.im;
        assert!((norm2.re - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn maass_transform_values() {
        let (z1, z2) = pt();
        let one_form = FormField::zero_one(
            Some(Rc::new(|_, _| Complex64::new(1.0, 0.0))),
            None,
        );
        let t = maass_transform(&one_form).unwrap();
        let expected = 4.0 * core::f64::consts::PI * z1.im;
        assert!((t[0](z1, z2).re - expected).abs() < 1e-12);
        assert!(t[1](z1, z2).norm() < 1e-15);
        let two_form = FormField::zero_two(Rc::new(|_, _| Complex64::new(1.0, 0.0)));
        let t2 = maass_transform(&two_form).unwrap();
        let expected2 = 16.0 * core::f64::consts::PI * core::f64::consts::PI * z1.im * z2.im;
        assert!((t2[0](z1, z2).re - expected2).abs() < 1e-9);
    }

    #[test]
    fn maass_transform_isometry_up_to_degree_constant() {
        // Pointwise: ||f dzbar1||^2 = 4 |4 pi y f|^2 (weight-one doubling) and
        // ||g dzbar1^dzbar2||^2 = |16 pi^2 y1 y2 g|^2 exactly.
        let s = spec();
        let (z1, z2) = pt();
        let f = Complex64::new(0.8, -0.3);
        let one_form = FormField::zero_one(Some(Rc::new(move |_, _| f)), None);
        let form_norm = pointwise_pairing(&s, &one_form, &one_form, z1, z2).re;
        let classical = (4.0 * core::f64::consts::PI * z1.im * f.norm()).powi(2);
        assert!((form_norm - 4.0 * classical).abs() < 1e-9 * form_norm);
        let g = Complex64::new(-1.1, 0.2);
        let two_form = FormField::zero_two(Rc::new(move |_, _| g));
        let n2 = pointwise_pairing(&s, &two_form, &two_form, z1, z2).re;
        let classical2 =
            (16.0 * core::f64::consts::PI * core::f64::consts::PI * z1.im * z2.im * g.norm())
                .powi(2);
        assert!((n2 - classical2).abs() < 1e-9 * n2);
    }

    #[test]
    fn adjointness_on_bumps() {
        let s = spec();
        let bx = Box2 { x_min: -0.5, x_max: 0.5, y_min: 0.5, y_max: 1.5 };
        let alpha = FormField::function(bump_function(bx));
        // beta: a bump on the dzbar1 slot, shifted profile
        let inner = Box2 { x_min: -0.4, x_max: 0.45, y_min: 0.6, y_max: 1.4 };
        let beta = FormField::zero_one(Some(bump_function(inner)), None);
        let z2 = Complex64::new(0.0, 1.0);
        let defect = adjointness_check(&s, &alpha, &beta, &bx, z2, 200, 1e-3);
        // normalize by the norms in play
        let na = l2_pairing_fiber(&s, &alpha, &alpha, &bx, z2, 200).norm();
        let nb = l2_pairing_fiber(&s, &beta, &beta, &bx, z2, 200).norm();
        let scale = libm::sqrt(na * nb).max(1e-30);
        assert!(defect / scale < 1e-4, "relative defect {:e}", defect / scale);
    }

    #[test]
    fn adjointness_scales_linearly() {
        let s = spec();
        let bx = Box2 { x_min: -0.5, x_max: 0.5, y_min: 0.5, y_max: 1.5 };
        let alpha = FormField::function(bump_function(bx));
        let beta = FormField::zero_one(Some(bump_function(bx)), None);
        let z2 = Complex64::new(0.0, 1.0);
        let d1 = adjointness_check(&s, &alpha, &beta, &bx, z2, 120, 1e-3);
        let alpha3 = alpha.scale_by(3.0);
        let d3 = adjointness_check(&s, &alpha3, &beta, &bx, z2, 120, 1e-3);
        assert!((d3 - 3.0 * d1).abs() < 0.02 * (d3 + 3.0 * d1 + 1e-12));
    }

    #[test]
    fn dirichlet_identity_with_laplacian() {
        // <dbar alpha, dbar alpha> = <alpha, Delta alpha> on compact support
        let s = spec();
        let bx = Box2 { x_min: -0.5, x_max: 0.5, y_min: 0.5, y_max: 1.5 };
        let alpha = FormField::function(bump_function(bx));
        let z2 = Complex64::new(0.0, 1.0);
        let da = dbar(&alpha, 1, 1e-3);
        let lhs = l2_pairing_fiber(&s, &da, &da, &bx, z2, 200);
        let lap = laplacian(&s, &alpha, 1, 1e-3);
        let rhs = l2_pairing_fiber(&s, &alpha, &lap, &bx, z2, 200);
        let scale = lhs.norm().max(rhs.norm()).max(1e-30);
        assert!((lhs - rhs).norm() / scale < 1e-3, "{lhs} vs {rhs}");
    }

    #[test]
    fn raising_operator_shape_on_01_forms() {
        // dbar*_1 of f(z1) dzbar1, transformed to the classical side, acts as
        // a weight-raising operator: check it reproduces the direct formula
        // -4 s y^2 d/dz (f) - const * y f shape by matching the two ways of
        // computing <alpha, dbar*_1 beta> above; here we simply pin that
        // dbar*_1 maps (0,1) to (0,0) and is nonzero on a generic input.
        let s = spec();
        let beta = FormField::zero_one(
            Some(Rc::new(|z1: Complex64, _| {
                Complex64::new(libm::exp(-(z1.re * z1.re) - (z1.im - 1.0) * (z1.im - 1.0)), 0.0)
            })),
            None,
        );
        let ds = dbar_star(&s, &beta, 1, 1e-4);
        assert_eq!(ds.kind(), Some(FormKind::F00));
        let (z1, z2) = pt();
        assert!(ds.eval_component(0, z1, z2).norm() > 0.0);
    }
}
