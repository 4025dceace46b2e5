use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures raised by the preprocessing kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Buffer length or dimensions violate the volume invariants.
    InvalidVolume { reason: &'static str },
    EmptyVolume,
    DimensionMismatch {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    NoRoiFound,
    OpenContour,
    BadSigma,
    /// Frame count outside `1..=depth`.
    BadCount { requested: usize, depth: usize },
    DegenerateHistogram { value: u8 },
    VolumeTooLarge { voxels: usize },
    BadPercentile,
    BadDbscanParams,
    TubeOutOfBounds,
    BadSynthConfig { reason: &'static str },
    LengthMismatch { labels: usize, scores: usize },
    EmptyInput,
    BadThreshold,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidVolume { reason } => write!(f, "invalid volume: {reason}"),
            Error::EmptyVolume => f.write_str("volume has no frames"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}x{}, found {}x{}x{}",
                expected.0, expected.1, expected.2, found.0, found.1, found.2
            ),
            Error::NoRoiFound => f.write_str("no orange overlay pixels found"),
            Error::OpenContour => f.write_str("orange contour encloses no interior"),
            Error::BadSigma => f.write_str("gaussian sigma must be positive and finite"),
            Error::BadCount { requested, depth } => {
                write!(f, "cannot sample {requested} frames from a depth of {depth}")
            }
            Error::DegenerateHistogram { value } => {
                write!(f, "all voxels share gray level {value}; no threshold exists")
            }
            Error::VolumeTooLarge { voxels } => {
                write!(f, "{voxels} voxels exceeds the 2^24 histogram limit")
            }
            Error::BadPercentile => f.write_str("percentiles must lie in (0, 100]"),
            Error::BadDbscanParams => f.write_str("dbscan requires eps > 0 and min_pts >= 1"),
            Error::TubeOutOfBounds => f.write_str("synthetic tube does not fit inside the ROI"),
            Error::BadSynthConfig { reason } => write!(f, "invalid synth config: {reason}"),
            Error::LengthMismatch { labels, scores } => {
                write!(f, "{labels} labels but {scores} scores")
            }
            Error::EmptyInput => f.write_str("no samples to score"),
            Error::BadThreshold => f.write_str("decision threshold must lie in [0, 1]"),
        }
    }
}

impl core::error::Error for Error {}
