use std::path::PathBuf;

use thiserror::Error;

/// Failures of the algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CgaError {
    #[error("conformal point has e_o weight {weight:e}, below {eps:e} (point at infinity or flat object)")]
    NullWeight { weight: f64, eps: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("dilation factor {0} is not invertible (must be > 0)")]
    NonInvertibleDilation(f64),
    #[error("series did not reach tolerance within {terms} terms (last term norm {residual:e})")]
    LogDivergence { terms: usize, residual: f64 },
}

/// Failures while posing or deforming a rig.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigError {
    #[error(transparent)]
    Cga(#[from] CgaError),
    #[error("animation clip has no keyframes")]
    EmptyClip,
    #[error("pose has {got} motors but the rig has {expected} bones")]
    PoseLength { expected: usize, got: usize },
    #[error("bone {0} does not exist")]
    UnknownBone(usize),
    #[error("invalid rig: {0}")]
    InvalidRig(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
}

/// Failures of cut, tear and drill.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurgeryError {
    #[error(transparent)]
    Cga(#[from] CgaError),
    #[error("cutting plane does not cross the mesh")]
    NoIntersection,
    #[error("scalpel segment at t={time} does not touch the mesh")]
    NoScalpelContact { time: f64 },
    #[error("tear plane is undefined: entry point is collinear with the scalpel segment")]
    DegeneratePlane,
    #[error("no face strip along the tear plane joins the two entry faces: {0}")]
    TearPathNotFound(String),
    #[error("drill axis does not pierce the mesh")]
    NoDrillContact,
    #[error("drill crosses an open mesh boundary at edge ({0}, {1})")]
    OpenBoundaryHit(usize, usize),
    #[error("drill leaves no intersection points on mesh edges even after refinement")]
    DrillBelowResolution,
    #[error("edge projects to a point on the drill plane")]
    DegenerateProjection,
    #[error("Euclidean and GA backends disagree: {0}")]
    BackendMismatch(String),
    #[error("invalid surgery input: {0}")]
    InvalidInput(String),
}

/// Failures of the file formats.
#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("anisotropic scale {scale:?} at {path}; only uniform scale is supported")]
    AnisotropicScale { path: String, scale: [f64; 3] },
}

impl ModelIoError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Crate-level error used by the command-line driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Cga(#[from] CgaError),
    #[error(transparent)]
    Rig(#[from] RigError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    ModelIo(#[from] ModelIoError),
}

impl CgaError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NullWeight { .. } => "NullWeightError",
            Self::DegenerateInput(_) => "DegenerateInput",
            Self::NonInvertibleDilation(_) => "NonInvertibleDilation",
            Self::LogDivergence { .. } => "LogDivergence",
        }
    }
}

impl RigError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Cga(e) => e.name(),
            Self::EmptyClip => "EmptyClip",
            Self::PoseLength { .. } => "PoseLength",
            Self::UnknownBone(_) => "UnknownBone",
            Self::InvalidRig(_) => "InvalidRig",
            Self::InvalidMesh(_) => "InvalidMesh",
        }
    }
}

impl SurgeryError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Cga(e) => e.name(),
            Self::NoIntersection => "NoIntersection",
            Self::NoScalpelContact { .. } => "NoScalpelContact",
            Self::DegeneratePlane => "DegeneratePlane",
            Self::TearPathNotFound(_) => "TearPathNotFound",
            Self::NoDrillContact => "NoDrillContact",
            Self::OpenBoundaryHit(..) => "OpenBoundaryHit",
            Self::DrillBelowResolution => "DrillBelowResolution",
            Self::DegenerateProjection => "DegenerateProjection",
            Self::BackendMismatch(_) => "BackendMismatch",
            Self::InvalidInput(_) => "InvalidInput",
        }
    }
}

impl ModelIoError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Io { .. } => "IoError",
            Self::Schema { .. } => "SchemaError",
            Self::AnisotropicScale { .. } => "AnisotropicScaleError",
        }
    }
}

impl Error {
    /// Name of the underlying error variant, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Cga(e) => e.name(),
            Self::Rig(e) => e.name(),
            Self::Surgery(e) => e.name(),
            Self::ModelIo(e) => e.name(),
        }
    }
}
