use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] clogprep_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: not a .cvol container (bad magic)", path.display())]
    BadMagic { path: PathBuf },

    #[error("{}: unsupported .cvol version {version}", path.display())]
    BadVersion { path: PathBuf, version: u32 },

    #[error("{}: corrupt .cvol: {reason}", path.display())]
    CorruptContainer { path: PathBuf, reason: String },

    #[error("{}: frame {index:05} missing from sequence", path.display())]
    MissingFrames { path: PathBuf, index: usize },

    #[error("{}: frame is {found:?}, expected {expected:?}", path.display())]
    DimensionMismatch {
        path: PathBuf,
        expected: (u32, u32),
        found: (u32, u32),
    },

    #[error("{}: no frames found", path.display())]
    EmptyVolume { path: PathBuf },

    #[error("{}: {reason}", path.display())]
    BadImage { path: PathBuf, reason: String },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("ply parse error at line {line}: {reason}")]
    Ply { line: usize, reason: String },

    #[error("manifest has no samples")]
    EmptyManifest,

    #[error("duplicate sample id {0:?} in manifest")]
    DuplicateId(String),

    #[error("sample {id}: manifest says {expected} frames, found {found}")]
    FrameCount { id: String, expected: usize, found: usize },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("no prediction for test sample {0:?}")]
    MissingPrediction(String),

    #[error("prediction for {id:?} is {score}, expected a value in [0, 1]")]
    BadScore { id: String, score: f64 },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    pub(crate) fn json(path: impl Into<PathBuf>) -> impl FnOnce(serde_json::Error) -> Error {
        let path = path.into();
        move |source| Error::Json { path, source }
    }
}
