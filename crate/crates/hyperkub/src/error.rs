use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("{perm} is not an element of {group}")]
    NotInGroup { group: String, perm: String },
    #[error("malformed pose: {0}")]
    MalformedPose(String),
    #[error("position {0:?} is interior or out of range")]
    InteriorPosition(Vec<u8>),
    #[error("malformed move: {0}")]
    MalformedMove(String),
    #[error("parameter mismatch: ({0},{1}) vs ({2},{3})")]
    ParamsMismatch(usize, usize, usize, usize),
    #[error("invalid reassembly: {}", .0.join("; "))]
    InvalidReassembly(Vec<String>),
    #[error("frame and central invariants need an odd edge length")]
    EvenK,
    #[error("class {0} carries no orientation invariant")]
    NoInvariant(String),
    #[error("{0} is not a nontrivial alternating cluster")]
    NotAlternatingCluster(String),
    #[error("orientation is undefined for class {0}")]
    NoOrientation(String),
    #[error("position {0:?} is not displaced by the move")]
    PositionNotDisplaced(Vec<u8>),
    #[error("positions are not in one class: {0}")]
    ClassMismatch(String),
    #[error("the frame class is placed by the frame stage, not by 3-cycles")]
    FrameClass,
    #[error("target permutation is odd")]
    OddTarget,
    #[error("{0} is not in the commutant of the rotation group")]
    NotInCommutant(String),
    #[error("invariants differ: {}", .0.join(", "))]
    IncompatibleInvariants(Vec<String>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("memory cap of {cap} bytes exceeded (needs {needed})")]
    MemoryCap { cap: u64, needed: u64 },
    #[error("internal solver failure: {0}")]
    Solver(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
