//! Scene canonicalization and integration-limit machinery.
//!
//! A scene is described in the source frame: emitter at the origin, emission
//! axis k along +x, cylinder axis parallel to z at perpendicular distance d,
//! tilted by `alpha` in the xy-plane. [`classify`] folds that description onto
//! the three canonical configurations:
//!
//! * case i   — d >= r, source axially between the end planes (lateral
//!   surface only),
//! * case ii  — d >= r, source axially beyond both end planes (lateral
//!   surface plus near end disk),
//! * case iii — d < r, source axially beyond both end planes (near end disk
//!   covers the whole silhouette).
//!
//! The azimuthal and polar limit functions defined here drive the quadrature
//! oracle; the closed forms in [`crate::analytic`] bake them in.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative clamp tolerance for the radicand r^2 - (d sin phi)^2: float noise
/// at |phi| = phi0 must not abort an integration.
pub const RADICAND_REL_TOL: f64 = 1e-12;

/// Raw user geometry in the source frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderScene {
    /// Cylinder radius, > 0.
    pub r: f64,
    /// Perpendicular distance from the source to the cylinder axis, >= 0.
    pub d: f64,
    /// Axial coordinate of one end plane; z1 < z2.
    pub z1: f64,
    /// Axial coordinate of the other end plane.
    pub z2: f64,
    /// Angle between the emission axis k and the horizontal line from the
    /// source to the cylinder axis, radians. Any real value; folded into
    /// [0, pi] internally (the solid angle is even and 2pi-periodic in alpha).
    pub alpha: f64,
}

impl CylinderScene {
    pub fn new(r: f64, d: f64, z1: f64, z2: f64, alpha: f64) -> Result<Self> {
        let scene = Self { r, d, z1, z2, alpha };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("r", self.r),
            ("d", self.d),
            ("z1", self.z1),
            ("z2", self.z2),
            ("alpha", self.alpha),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidScene(format!("{name} must be finite, got {v}")));
            }
        }
        if self.r <= 0.0 {
            return Err(Error::InvalidScene(format!("r must be > 0, got {}", self.r)));
        }
        if self.d < 0.0 {
            return Err(Error::InvalidScene(format!("d must be >= 0, got {}", self.d)));
        }
        if self.z1 >= self.z2 {
            return Err(Error::InvalidScene(format!(
                "z1 < z2 required, got z1 = {}, z2 = {}",
                self.z1, self.z2
            )));
        }
        Ok(())
    }
}

/// The three canonical configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    /// Source beside the lateral surface, axially between the end planes.
    I,
    /// Source axially beyond both end planes, d >= r.
    II,
    /// Source axially beyond both end planes, d < r.
    III,
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseId::I => write!(f, "I"),
            CaseId::II => write!(f, "II"),
            CaseId::III => write!(f, "III"),
        }
    }
}

/// Emitting surface selector for the polar limits of one integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Surface {
    /// Lateral cylindrical surface.
    Cylindrical,
    /// End disk nearest the source.
    NearCap,
}

/// A classified scene carrying the working parameters of the closed forms.
///
/// After classification the cylinder lies on the z >= 0 side whenever the
/// source is axially outside it (mirror symmetry z -> -z leaves the solid
/// angle unchanged since k is orthogonal to z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalCase {
    pub case_id: CaseId,
    /// Case i: smaller of the two axial half-lengths. Case ii/iii: distance
    /// from the source plane to the near end plane.
    pub l1: f64,
    /// Case i: larger axial half-length. Case ii: distance to the far end
    /// plane. Case iii: distance to the far end plane (does not affect the
    /// solid angle there).
    pub l2: f64,
    pub d: f64,
    pub r: f64,
    /// |alpha| after folding into [0, pi].
    pub alpha_abs: f64,
}

impl CanonicalCase {
    /// Half-width of the azimuthal silhouette, arcsin(r/d). Defined for d >= r.
    pub fn phi0(&self) -> Option<f64> {
        (self.d >= self.r).then(|| phi0(self.d, self.r))
    }

    /// Tilt below which the silhouette is fully illuminated. Defined for d >= r.
    pub fn alpha1(&self) -> Option<f64> {
        (self.d >= self.r).then(|| alpha1(self.d, self.r))
    }

    /// Tilt beyond which the solid angle vanishes. Defined for d >= r.
    pub fn alpha_c(&self) -> Option<f64> {
        (self.d >= self.r).then(|| alpha_c(self.d, self.r))
    }

    /// True when the scene sits on the case i/ii boundary: one end plane
    /// passes exactly through the source (z1 = 0 with d >= r). Treated as
    /// case i with a vanishing half-length; flagged in trace output.
    pub fn touches_source_plane(&self) -> bool {
        self.case_id == CaseId::I && self.l1 == 0.0
    }
}

/// arcsin(r/d); requires 0 < r <= d.
pub fn phi0(d: f64, r: f64) -> f64 {
    debug_assert!(r > 0.0 && d >= r);
    (r / d).asin()
}

/// pi/2 - phi0.
pub fn alpha1(d: f64, r: f64) -> f64 {
    FRAC_PI_2 - phi0(d, r)
}

/// pi/2 + phi0.
pub fn alpha_c(d: f64, r: f64) -> f64 {
    FRAC_PI_2 + phi0(d, r)
}

/// Fold any real tilt into [0, pi] using evenness and 2pi-periodicity.
/// Evenness is applied first, so alpha and -alpha map to the identical value.
pub fn normalize_alpha(alpha: f64) -> f64 {
    let a = alpha.abs().rem_euclid(TAU);
    if a > PI {
        TAU - a
    } else {
        a
    }
}

/// Map a raw scene onto its canonical case.
///
/// Mirror symmetry z -> -z is applied first so an axially-outside cylinder
/// lies at z >= 0. For case i the two half-lengths are stored sorted
/// (l1 <= l2), which makes classification exactly mirror-invariant.
pub fn classify(scene: &CylinderScene) -> Result<CanonicalCase> {
    scene.validate()?;
    let alpha_abs = normalize_alpha(scene.alpha);
    let (r, d) = (scene.r, scene.d);

    // Mirror so the cylinder is not entirely on the negative-z side.
    let (z1, z2) = if scene.z2 <= 0.0 {
        (-scene.z2, -scene.z1)
    } else {
        (scene.z1, scene.z2)
    };

    if d >= r {
        if z1 <= 0.0 {
            let (a, b) = (z2, -z1);
            Ok(CanonicalCase {
                case_id: CaseId::I,
                // + 0.0 turns a negative zero from the mirroring into +0.0.
                l1: a.min(b) + 0.0,
                l2: a.max(b),
                d,
                r,
                alpha_abs,
            })
        } else {
            Ok(CanonicalCase {
                case_id: CaseId::II,
                l1: z1,
                l2: z2,
                d,
                r,
                alpha_abs,
            })
        }
    } else if z1 >= 0.0 {
        Ok(CanonicalCase {
            case_id: CaseId::III,
            l1: z1 + 0.0,
            l2: z2,
            d,
            r,
            alpha_abs,
        })
    } else {
        Err(Error::SourceInsideDetector)
    }
}

/// Near and far intersection distances of the azimuthal ray with the
/// cylinder cross-section: rho-/+ = d cos(phi) -/+ sqrt(r^2 - (d sin phi)^2).
///
/// A radicand more negative than -1e-12 r^2 is a domain error; anything
/// closer to zero is clamped (float noise at |phi| = phi0). For d >= r the
/// near root is non-negative by construction, so rounding noise below zero
/// is clamped as well; at d = r it would otherwise flip the sign of an
/// identically-zero quantity across the whole range.
pub fn rho_pm(phi: f64, d: f64, r: f64) -> Result<(f64, f64)> {
    let s = d * phi.sin();
    let mut rad = (r - s) * (r + s);
    if rad < 0.0 {
        if rad < -RADICAND_REL_TOL * r * r {
            return Err(Error::Domain(format!(
                "phi = {phi} outside the silhouette (radicand {rad:e})"
            )));
        }
        rad = 0.0;
    }
    let root = rad.sqrt();
    let base = d * phi.cos();
    let mut near = base - root;
    if d >= r && near < 0.0 {
        near = 0.0;
    }
    Ok((near, base + root))
}

/// Azimuthal integration range of one case, or nothing when the solid angle
/// vanishes outright (alpha >= alpha_c in cases i/ii).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiRange {
    Range { min: f64, max: f64 },
    Empty,
}

/// Azimuthal limits.
pub fn phi_limits(c: &CanonicalCase) -> PhiRange {
    let a = c.alpha_abs;
    match c.case_id {
        CaseId::I | CaseId::II => {
            let p0 = phi0(c.d, c.r);
            if a < FRAC_PI_2 - p0 {
                PhiRange::Range { min: -p0, max: p0 }
            } else if a < FRAC_PI_2 + p0 {
                PhiRange::Range {
                    min: -p0,
                    max: FRAC_PI_2 - a,
                }
            } else {
                PhiRange::Empty
            }
        }
        CaseId::III => PhiRange::Range {
            min: -FRAC_PI_2 - a,
            max: FRAC_PI_2 - a,
        },
    }
}

/// Polar limits at azimuth `phi` for one emitting surface.
///
/// Only the quadrature oracle consumes these; the closed forms integrate
/// them analytically.
pub fn theta_limits(c: &CanonicalCase, surface: Surface, phi: f64) -> Result<(f64, f64)> {
    let (rho_m, rho_p) = rho_pm(phi, c.d, c.r)?;
    match (c.case_id, surface) {
        (CaseId::I, Surface::Cylindrical) => Ok((
            FRAC_PI_2 - c.l1.atan2(rho_m),
            FRAC_PI_2 + c.l2.atan2(rho_m),
        )),
        (CaseId::II, Surface::Cylindrical) => Ok((
            FRAC_PI_2 + c.l1.atan2(rho_m),
            FRAC_PI_2 + c.l2.atan2(rho_m),
        )),
        (CaseId::II, Surface::NearCap) => Ok((
            FRAC_PI_2 + c.l1.atan2(rho_p),
            FRAC_PI_2 + c.l1.atan2(rho_m),
        )),
        (CaseId::III, Surface::NearCap) => Ok((FRAC_PI_2 + c.l1.atan2(rho_p), PI)),
        (case, surface) => Err(Error::SurfaceNotPresent { case, surface }),
    }
}
