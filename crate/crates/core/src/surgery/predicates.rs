//! Point/plane predicates in two backends.

use serde::{Deserialize, Serialize};

use crate::cga::{down_project, make_plane, up_project, Multivector, Vec3};
use crate::error::SurgeryError;

/// Half-thickness of the `On` band around a plane.
pub const EPS_ON: f64 = 1e-9;

/// Which representation evaluates the predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Dot products on 3-vectors.
    #[serde(rename = "euclid")]
    Euclidean,
    /// Inner products of conformal points with the plane multivector.
    #[default]
    Ga,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Euclidean, Backend::Ga];

    pub fn label(self) -> &'static str {
        match self {
            Backend::Euclidean => "euclid",
            Backend::Ga => "ga",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    On,
    Below,
}

impl Side {
    pub fn from_distance(s: f64) -> Self {
        if s > EPS_ON {
            Side::Above
        } else if s < -EPS_ON {
            Side::Below
        } else {
            Side::On
        }
    }

    pub fn is_strict(self) -> bool {
        self != Side::On
    }
}

/// Plane `⟨n, x⟩ = d` with unit normal, carrying its conformal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPlane {
    normal: Vec3,
    d: f64,
    mv: Multivector,
}

impl CutPlane {
    /// Normalizes `normal`; `d` is taken relative to the normalized normal.
    pub fn new(normal: Vec3, d: f64) -> Result<Self, SurgeryError> {
        if !d.is_finite() {
            return Err(SurgeryError::InvalidInput(format!("plane offset {d}")));
        }
        let mv = make_plane(&normal, d)?;
        Ok(Self {
            normal: normal.normalize(),
            d,
            mv,
        })
    }

    /// Plane through `point` with the given normal.
    pub fn through(point: &Vec3, normal: Vec3) -> Result<Self, SurgeryError> {
        let n = normal
            .try_normalize(0.0)
            .ok_or_else(|| SurgeryError::InvalidInput("plane normal has zero length".into()))?;
        Self::new(n, n.dot(point))
    }

    pub fn normal(&self) -> &Vec3 {
        &self.normal
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    /// Signed distance `⟨n, v⟩ - d` evaluated in `backend`.
    pub fn signed_distance(&self, v: &Vec3, backend: Backend) -> f64 {
        match backend {
            Backend::Euclidean => self.normal.dot(v) - self.d,
            Backend::Ga => (self.mv | up_project(v)).scalar_part(),
        }
    }
}

pub fn classify_vertex(v: &Vec3, plane: &CutPlane, backend: Backend) -> Side {
    Side::from_distance(plane.signed_distance(v, backend))
}

/// Crossing of segment `a`–`b` with the plane, as `(t, point)` where
/// `point = (1-t) a + t b`. `None` unless the endpoints lie strictly on
/// opposite sides.
pub fn segment_plane_intersection(
    a: &Vec3,
    b: &Vec3,
    plane: &CutPlane,
    backend: Backend,
) -> Result<Option<(f64, Vec3)>, SurgeryError> {
    match backend {
        Backend::Euclidean => {
            let sa = plane.signed_distance(a, backend);
            let sb = plane.signed_distance(b, backend);
            if !crosses(sa, sb) {
                return Ok(None);
            }
            let t = sa / (sa - sb);
            Ok(Some((t, a + (b - a) * t)))
        }
        Backend::Ga => {
            let (xa, xb) = (up_project(a), up_project(b));
            let sa = (plane.mv | xa).scalar_part();
            let sb = (plane.mv | xb).scalar_part();
            if !crosses(sa, sb) {
                return Ok(None);
            }
            // The pencil point with zero plane product, weighted so its e_o part is 1.
            let x = (xa * sb - xb * sa) * (1.0 / (sb - sa));
            Ok(Some((sa / (sa - sb), down_project(&x)?)))
        }
    }
}

fn crosses(sa: f64, sb: f64) -> bool {
    let (a, b) = (Side::from_distance(sa), Side::from_distance(sb));
    a.is_strict() && b.is_strict() && a != b
}
