//! Closed-form evaluation of the emission fraction.
//!
//! The solid angle (as an emission-weighted fraction in [0, 1]) assembles per
//! case from three definite integrals over the azimuthal silhouette:
//!
//! * [`f1`] — lateral-surface term built on the near intersection root rho-,
//! * [`f2`] — companion term built on the far root rho+,
//! * [`f3`] — near end-disk term of case iii.
//!
//! Each is piecewise over the tilt regimes (fully illuminated, partially
//! illuminated, dark) with dedicated branches where the generic expressions
//! degenerate (d = r, d = 0, L = 0). Every branch here is cross-checked
//! against the quadrature oracle in the acceptance suite.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{phi0, rho_pm, CanonicalCase, CaseId};

/// Relative half-width of the band around d = r in which the dedicated
/// d = r formulas are used. Keeps the generic branch away from the
/// sqrt(d^2 - r^2) cancellation and the divergent half-angle tangent
/// -sqrt((d+r)/(d-r)).
pub const D_EQUALS_R_REL_TOL: f64 = 1e-9;

/// Relative threshold below which case iii routes to the on-axis (d = 0)
/// closed form.
pub const D_ZERO_REL_TOL: f64 = 1e-12;

/// Emission fraction in [0, 1], with the per-surface split when the case
/// has two contributing surfaces (case ii).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolidAngle {
    pub value: f64,
    pub breakdown: Option<Breakdown>,
}

/// Lateral-surface and end-disk contributions of a case ii evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub cyl: f64,
    pub circ: f64,
}

/// Intermediate quantities of one F-evaluation, retained for tracing.
///
/// Fields are populated only by the branch that actually uses them.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalyticTerms {
    /// Which branch evaluated: "zero-length", "cutoff", "d=r", "even",
    /// "transition", "d=0", "general".
    pub branch: &'static str,
    pub m: Option<f64>,
    pub sqrt_one_minus_m2: Option<f64>,
    pub rho_tilde_minus: Option<f64>,
    pub rho_tilde_plus: Option<f64>,
    pub a1: Option<f64>,
    pub b1: Option<f64>,
    pub a2: Option<f64>,
    pub b2: Option<f64>,
    pub a3: Option<f64>,
    pub b3: Option<f64>,
    pub e: Option<f64>,
    pub g: Option<f64>,
    pub h: Option<f64>,
    pub z: Option<f64>,
    pub dt1: Option<f64>,
    pub dt2: Option<f64>,
}

impl AnalyticTerms {
    fn branch(branch: &'static str) -> Self {
        Self { branch, ..Self::default() }
    }
}

/// One traced F-evaluation inside an omega assembly.
#[derive(Debug, Clone, Serialize)]
pub struct FTrace {
    /// e.g. "F1(L1)", "F2(L1)", "F3(L1)".
    pub label: String,
    pub value: f64,
    pub terms: AnalyticTerms,
}

/// Sign selector for [`arctan_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// arctan(x) +/- arctan(y) as a single branch-safe arctangent:
/// 2 atan[(x +/- y) / (1 -/+ xy + sqrt((x +/- y)^2 + (1 -/+ xy)^2))].
///
/// Exact for all real x, y (no wrap at |result| > pi/2); the denominator
/// never vanishes. When 1 -/+ xy < 0 the denominator is rationalized to
/// (hypot - w)/num (the same value) so it never cancels.
pub fn arctan_sum(x: f64, y: f64, sign: Sign) -> f64 {
    let (num, w) = match sign {
        Sign::Plus => (x + y, 1.0 - x * y),
        Sign::Minus => (x - y, 1.0 + x * y),
    };
    if num == 0.0 {
        return 0.0;
    }
    let arg = if w >= 0.0 {
        num / (w + num.hypot(w))
    } else {
        (num.hypot(w) - w) / num
    };
    2.0 * arg.atan()
}

/// Modulus-like parameter m = 2dr / (L^2 + d^2 + r^2) and companions, all in
/// factored forms that stay accurate as m -> 1 (L small, d near r):
///
///   1 - m = (L^2 + (d-r)^2) / S,   1 + m = (L^2 + (d+r)^2) / S,
///   sqrt(1 - m^2) = H / S,         H = sqrt([L^2+(d+r)^2][L^2+(d-r)^2]).
struct Moduli {
    m: f64,
    /// sqrt(1 - m^2), via H/S.
    sq: f64,
    /// sqrt((1+m)/(1-m)).
    ratio_plus: f64,
    h: f64,
}

fn moduli(l: f64, d: f64, r: f64) -> Moduli {
    let s = l * l + d * d + r * r;
    let plus = l * l + (d + r) * (d + r);
    let minus = l * l + (d - r) * (d - r);
    let h = (plus * minus).sqrt();
    Moduli {
        m: 2.0 * d * r / s,
        sq: h / s,
        ratio_plus: (plus / minus).sqrt(),
        h,
    }
}

impl Moduli {
    /// 1 - 1/sqrt(1-m^2) = -m^2 / (sq (1 + sq)), cancellation-free for small m.
    fn one_minus_inv_sq(&self) -> f64 {
        -(self.m * self.m) / (self.sq * (1.0 + self.sq))
    }
}

/// sqrt(r^2 - (d cos alpha)^2), clamped against float dust at the regime
/// seams where the radicand touches zero.
fn cap_radical(d: f64, r: f64, cos_a: f64) -> f64 {
    let t = d * cos_a;
    ((r - t) * (r + t)).max(0.0).sqrt()
}

/// Antiderivative (in phi) of the lateral-surface integrand built on rho-:
/// (1/2pi) [A10 + cos(alpha) A11 + sin(alpha) A12] with
/// A10 = sin(alpha+phi) atan(L/rho-),
/// A11 = (L/2d) [2/sqrt(1-m^2) atan(sqrt((1+m)/(1-m)) tan(phi-/2)) - phi-],
/// A12 = (L/2d) log(L^2 + rho-^2),
/// phi- = 2 atan[rho- sin(phi) / (d + r - rho- cos(phi))].
///
/// Valid for d >= r and |phi| <= phi0.
pub fn f1_antiderivative(l: f64, d: f64, r: f64, alpha: f64, phi: f64) -> Result<f64> {
    let (rho_m, _) = rho_pm(phi, d, r)?;
    if l == 0.0 {
        return Ok(0.0);
    }
    let mo = moduli(l, d, r);
    let t = rho_m * phi.sin() / (d + r - rho_m * phi.cos());
    let phi_minus = 2.0 * t.atan();
    let a10 = (alpha + phi).sin() * l.atan2(rho_m);
    let a11 = (l / (2.0 * d)) * (2.0 / mo.sq * (mo.ratio_plus * t).atan() - phi_minus);
    let a12 = (l / (2.0 * d)) * (l * l + rho_m * rho_m).ln();
    Ok((a10 + alpha.cos() * a11 + alpha.sin() * a12) / TAU)
}

/// Companion antiderivative built on rho+:
/// (1/2pi) [A20 + cos(alpha) A21 + sin(alpha) A22] with
/// A21 = (L/2d) [phi+ - 2/sqrt(1-m^2) atan(sqrt((1-m)/(1+m)) tan(phi+/2))],
/// phi+ = 2 atan[rho+ sin(phi) / (r - d + rho+ cos(phi))].
///
/// Valid for d >= r and |phi| <= phi0 (where phi+ stays inside (-pi, pi)).
pub fn f2_antiderivative(l: f64, d: f64, r: f64, alpha: f64, phi: f64) -> Result<f64> {
    let (_, rho_p) = rho_pm(phi, d, r)?;
    if l == 0.0 {
        return Ok(0.0);
    }
    let mo = moduli(l, d, r);
    let t = rho_p * phi.sin() / (r - d + rho_p * phi.cos());
    let phi_plus = 2.0 * t.atan();
    let a20 = (alpha + phi).sin() * l.atan2(rho_p);
    let a21 = (l / (2.0 * d)) * (phi_plus - 2.0 / mo.sq * (t / mo.ratio_plus).atan());
    let a22 = (l / (2.0 * d)) * (l * l + rho_p * rho_p).ln();
    Ok((a20 + alpha.cos() * a21 + alpha.sin() * a22) / TAU)
}

/// Lateral-surface integral for one axial half-length (d >= r).
pub fn f1(l: f64, d: f64, r: f64, alpha: f64) -> f64 {
    f1_terms(l, d, r, alpha).0
}

pub(crate) fn f1_terms(l: f64, d: f64, r: f64, alpha: f64) -> (f64, AnalyticTerms) {
    debug_assert!(r > 0.0 && l >= 0.0);
    debug_assert!(d >= r * (1.0 - D_EQUALS_R_REL_TOL));
    debug_assert!((0.0..=PI).contains(&alpha));
    if l == 0.0 {
        return (0.0, AnalyticTerms::branch("zero-length"));
    }
    if (d - r).abs() <= D_EQUALS_R_REL_TOL * r {
        // Degenerate silhouette: the value collapses to (1 + cos alpha)/4
        // for any L > 0.
        return ((1.0 + alpha.cos()) / 4.0, AnalyticTerms::branch("d=r"));
    }
    let p0 = phi0(d, r);
    if alpha >= FRAC_PI_2 + p0 {
        return (0.0, AnalyticTerms::branch("cutoff"));
    }
    let mo = moduli(l, d, r);
    let d2r2 = (d - r) * (d + r);
    let sq_d2r2 = d2r2.sqrt();
    let mut terms = AnalyticTerms::branch("even");
    terms.m = Some(mo.m);
    terms.sqrt_one_minus_m2 = Some(mo.sq);

    if alpha < FRAC_PI_2 - p0 {
        // Fully illuminated: the whole tilt dependence is the cosine factor.
        let w = ((d - r) / (d + r)).sqrt();
        let v = (alpha.cos() / PI)
            * ((r / d) * l.atan2(sq_d2r2)
                + (l / d) * ((mo.ratio_plus * w).atan() / mo.sq - w.atan()));
        return (v, terms);
    }

    // Partially illuminated band alpha1 <= alpha < alpha_c.
    terms.branch = "transition";
    let (sin_a, cos_a) = alpha.sin_cos();
    let e = cap_radical(d, r, cos_a);
    let rho_tp = d * sin_a + e;
    // rho~- = d sin(alpha) - e, computed through rho~- rho~+ = d^2 - r^2
    // to dodge the cancellation at d ~ r.
    let rho_tm = d2r2 / rho_tp;
    let a_lo = -((d - r) / (d + r)).sqrt();
    let b_hi = cos_a * rho_tm / (r + d - sin_a * rho_tm);
    let a10 = l.atan2(rho_tm) - l.atan2(sq_d2r2) * (alpha - p0).sin();
    let a11 = (l / (2.0 * d))
        * (2.0 / mo.sq * ((mo.ratio_plus * b_hi).atan() - (mo.ratio_plus * a_lo).atan())
            - 2.0 * (b_hi.atan() - a_lo.atan()));
    // log[(L^2 + rho~-^2)/(L^2 + d^2 - r^2)] with the numerator difference
    // taken exactly: rho~-^2 - (d^2 - r^2) = -2 e rho~-.
    let a12 = (l / (2.0 * d)) * (-2.0 * e * rho_tm / (l * l + d2r2)).ln_1p();
    terms.rho_tilde_minus = Some(rho_tm);
    terms.rho_tilde_plus = Some(rho_tp);
    terms.a1 = Some(a_lo);
    terms.b1 = Some(b_hi);
    terms.e = Some(e);
    ((a10 + cos_a * a11 + sin_a * a12) / TAU, terms)
}

/// Companion integral on the far root rho+ (d >= r).
pub fn f2(l: f64, d: f64, r: f64, alpha: f64) -> f64 {
    f2_terms(l, d, r, alpha).0
}

pub(crate) fn f2_terms(l: f64, d: f64, r: f64, alpha: f64) -> (f64, AnalyticTerms) {
    debug_assert!(r > 0.0 && l >= 0.0);
    debug_assert!(d >= r * (1.0 - D_EQUALS_R_REL_TOL));
    debug_assert!((0.0..=PI).contains(&alpha));
    if l == 0.0 {
        return (0.0, AnalyticTerms::branch("zero-length"));
    }
    if (d - r).abs() <= D_EQUALS_R_REL_TOL * r {
        return f2_equal_radius_terms(l, r, alpha);
    }
    let p0 = phi0(d, r);
    if alpha >= FRAC_PI_2 + p0 {
        return (0.0, AnalyticTerms::branch("cutoff"));
    }
    let mo = moduli(l, d, r);
    let d2r2 = (d - r) * (d + r);
    let sq_d2r2 = d2r2.sqrt();
    let mut terms = AnalyticTerms::branch("even");
    terms.m = Some(mo.m);
    terms.sqrt_one_minus_m2 = Some(mo.sq);

    if alpha < FRAC_PI_2 - p0 {
        let w_inv = ((d + r) / (d - r)).sqrt();
        let v = (alpha.cos() / PI)
            * ((r / d) * l.atan2(sq_d2r2)
                - (l / d) * ((w_inv / mo.ratio_plus).atan() / mo.sq - w_inv.atan()));
        return (v, terms);
    }

    terms.branch = "transition";
    let (sin_a, cos_a) = alpha.sin_cos();
    let e = cap_radical(d, r, cos_a);
    let rho_tp = d * sin_a + e;
    let a_lo = -((d + r) / (d - r)).sqrt();
    let b_hi = cos_a * rho_tp / (r - d + sin_a * rho_tp);
    let a20 = l.atan2(rho_tp) - l.atan2(sq_d2r2) * (alpha - p0).sin();
    let a21 = (l / (2.0 * d))
        * (2.0 * (b_hi.atan() - a_lo.atan())
            - 2.0 / mo.sq * ((b_hi / mo.ratio_plus).atan() - (a_lo / mo.ratio_plus).atan()));
    // rho~+^2 - (d^2 - r^2) = +2 e rho~+.
    let a22 = (l / (2.0 * d)) * (2.0 * e * rho_tp / (l * l + d2r2)).ln_1p();
    terms.rho_tilde_plus = Some(rho_tp);
    terms.rho_tilde_minus = Some(d2r2 / rho_tp);
    terms.a2 = Some(a_lo);
    terms.b2 = Some(b_hi);
    terms.e = Some(e);
    ((a20 + cos_a * a21 + sin_a * a22) / TAU, terms)
}

/// f2 at d = r, where the generic expressions degenerate. The value is
/// continuous in L with f2 -> 0 as L -> 0.
fn f2_equal_radius_terms(l: f64, r: f64, alpha: f64) -> (f64, AnalyticTerms) {
    let mo = moduli(l, r, r);
    let mut terms = AnalyticTerms::branch("d=r");
    terms.m = Some(mo.m);
    terms.sqrt_one_minus_m2 = Some(mo.sq);
    if alpha >= PI {
        return (0.0, terms);
    }
    if alpha == 0.0 {
        return (0.5 + (l / (2.0 * r)) * mo.one_minus_inv_sq(), terms);
    }
    let (sin_a, cos_a) = alpha.sin_cos();
    let v = (1.0 + cos_a) / 4.0
        - ((2.0 * (r / l) * sin_a).atan()
            + cos_a * (l / r)
                * (alpha - PI
                    + (FRAC_PI_2 + ((cos_a / sin_a) / mo.ratio_plus).atan()) / mo.sq)
            - sin_a * (l / (2.0 * r)) * (4.0 * r * r * sin_a * sin_a / (l * l)).ln_1p())
            / TAU;
    (v, terms)
}

/// Near end-disk integral of case iii (0 <= d < r).
pub fn f3(l: f64, d: f64, r: f64, alpha: f64) -> f64 {
    f3_terms(l, d, r, alpha).0
}

pub(crate) fn f3_terms(l: f64, d: f64, r: f64, alpha: f64) -> (f64, AnalyticTerms) {
    debug_assert!(r > 0.0 && l >= 0.0 && d >= 0.0 && d < r);
    debug_assert!((0.0..=PI).contains(&alpha));
    if l == 0.0 {
        // The near end plane passes through the source: exactly half of the
        // emission crosses it, for any tilt and offset.
        return (0.5, AnalyticTerms::branch("zero-length"));
    }
    if d <= D_ZERO_REL_TOL * r {
        // On-axis source: the disk subtends a tilt-independent fraction.
        let v = 0.5 - ((l / r).atan() + l * r / (l * l + r * r)) / PI;
        return (v, AnalyticTerms::branch("d=0"));
    }
    let mo = moduli(l, d, r);
    let (sin_a, cos_a) = alpha.sin_cos();
    let e = cap_radical(d, r, cos_a);
    let rho_tp = d * sin_a + e;
    let rho_tm = (d - r) * (d + r) / rho_tp; // negative for d < r

    // A30 = 2 atan(z); rationalize the quadratic-formula numerator so the
    // subtraction never cancels.
    let c = (r - d) * (r + d) - l * l;
    let q = 2.0 * l * e;
    let z = if c >= 0.0 {
        (c + c.hypot(q)) / q
    } else {
        q / (c.hypot(q) - c)
    };
    let a30 = 2.0 * z.atan();

    // Half-angle tangent differences recast through their endpoint-safe
    // closed forms; continuous across alpha = pi/2 by construction.
    let dt1 = 2.0 * (d * cos_a / (r + e)).atan();
    let g = l * l + d * d - r * r;
    // sqrt(H^2 - (2 L d cos a)^2) = hypot(d^2 - r^2 - L^2, 2 L d sin a).
    let u = (d - r) * (d + r) - l * l;
    let sqrt_disc = u.hypot(2.0 * l * d * sin_a);
    let dt2 = 2.0 * (g * d * cos_a / (e * mo.h + r * sqrt_disc)).atan();
    let a31 = -(l / (2.0 * d)) * (PI * mo.one_minus_inv_sq() + 2.0 * dt1 - 2.0 * dt2 / mo.sq);

    // log[(L^2 + rho~+^2)/(L^2 + rho~-^2)] with the exact numerator
    // difference rho~+^2 - rho~-^2 = 4 d e sin(alpha).
    let a32 = -(l / (2.0 * d)) * (4.0 * d * e * sin_a / (l * l + rho_tm * rho_tm)).ln_1p();

    let mut terms = AnalyticTerms::branch("general");
    terms.m = Some(mo.m);
    terms.sqrt_one_minus_m2 = Some(mo.sq);
    terms.rho_tilde_minus = Some(rho_tm);
    terms.rho_tilde_plus = Some(rho_tp);
    terms.a3 = Some(cos_a * rho_tm / (r - d + sin_a * rho_tm));
    terms.b3 = Some(cos_a * rho_tp / (r - d + sin_a * rho_tp));
    terms.e = Some(e);
    terms.g = Some(g);
    terms.h = Some(mo.h);
    terms.z = Some(z);
    terms.dt1 = Some(dt1);
    terms.dt2 = Some(dt2);
    ((a30 + cos_a * a31 + sin_a * a32) / TAU, terms)
}

/// Assemble the emission fraction of a classified scene.
///
/// Case i: f1(L1) + f1(L2). Case ii: f1(L2) - f2(L1), with the
/// lateral/disk split retained. Case iii: f3(L1).
pub fn omega(c: &CanonicalCase) -> Result<SolidAngle> {
    omega_traced(c).map(|(sa, _)| sa)
}

/// Like [`omega`], also returning the per-F intermediate terms.
pub fn omega_traced(c: &CanonicalCase) -> Result<(SolidAngle, Vec<FTrace>)> {
    let mut traces = Vec::new();
    let mut push = |label: &str, value: f64, terms: AnalyticTerms| {
        traces.push(FTrace { label: label.to_string(), value, terms });
    };
    let (value, breakdown) = match c.case_id {
        CaseId::I => {
            let (v1, t1) = f1_terms(c.l1, c.d, c.r, c.alpha_abs);
            let (v2, t2) = f1_terms(c.l2, c.d, c.r, c.alpha_abs);
            push("F1(L1)", v1, t1);
            push("F1(L2)", v2, t2);
            (v1 + v2, None)
        }
        CaseId::II => {
            if c.l1 <= 0.0 {
                return Err(Error::AdjacentCap);
            }
            let (f1_l1, t1) = f1_terms(c.l1, c.d, c.r, c.alpha_abs);
            let (f1_l2, t2) = f1_terms(c.l2, c.d, c.r, c.alpha_abs);
            let (f2_l1, t3) = f2_terms(c.l1, c.d, c.r, c.alpha_abs);
            push("F1(L1)", f1_l1, t1);
            push("F1(L2)", f1_l2, t2);
            push("F2(L1)", f2_l1, t3);
            let breakdown = Breakdown {
                cyl: f1_l2 - f1_l1,
                circ: f1_l1 - f2_l1,
            };
            (f1_l2 - f2_l1, Some(breakdown))
        }
        CaseId::III => {
            let (v, t) = f3_terms(c.l1, c.d, c.r, c.alpha_abs);
            push("F3(L1)", v, t);
            (v, None)
        }
    };
    if !(-1e-9..=1.0 + 1e-9).contains(&value) {
        return Err(Error::NumericalInconsistency { value });
    }
    // Clamp only noise-level excursions; anything larger is reported as-is.
    let value = if (-1e-12..0.0).contains(&value) {
        0.0
    } else if value > 1.0 && value <= 1.0 + 1e-12 {
        1.0
    } else {
        value
    };
    Ok((SolidAngle { value, breakdown }, traces))
}
