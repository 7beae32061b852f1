use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::SignedPerm;

use super::{Cubie, Geometry, PuzzleParams, State};

pub const STATE_FORMAT: &str = "hyperkub-state/1";

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PoseRecord {
    /// One-based axis images.
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CubieRecord {
    pub home: Vec<u8>,
    pub pos: Vec<u8>,
    pub pose: PoseRecord,
}

/// On-disk form of a [`State`].
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StateFile {
    pub format: String,
    pub n: usize,
    pub k: usize,
    pub cubies: Vec<CubieRecord>,
}

impl From<&State> for StateFile {
    fn from(s: &State) -> Self {
        let g = s.geometry();
        let cubies = s
            .slots()
            .iter()
            .enumerate()
            .map(|(pos, c)| CubieRecord {
                home: g.position(c.home).to_vec(),
                pos: g.position(pos as u32).to_vec(),
                pose: PoseRecord { perm: c.pose.perm().iter().map(|a| a + 1).collect(), signs: c.pose.signs() },
            })
            .collect();
        let p = s.params();
        StateFile { format: STATE_FORMAT.to_string(), n: p.n, k: p.k, cubies }
    }
}

impl TryFrom<StateFile> for State {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<State> {
        if file.format != STATE_FORMAT {
            return Err(Error::Parse(format!("unknown format {:?}", file.format)));
        }
        let params = PuzzleParams::new(file.n, file.k)?;
        let geom = Geometry::shared(params)?;
        if file.cubies.len() != geom.len() {
            return Err(Error::InvalidReassembly(vec![format!(
                "expected {} cubies, found {}",
                geom.len(),
                file.cubies.len()
            )]));
        }
        let mut slots: Vec<Option<Cubie>> = vec![None; geom.len()];
        for rec in file.cubies {
            let pos = geom.index_of_checked(&rec.pos)? as usize;
            let home = geom.index_of_checked(&rec.home)?;
            if rec.pose.perm.contains(&0) {
                return Err(Error::MalformedPose(format!("{:?}", rec.pose.perm)));
            }
            let perm: Vec<usize> = rec.pose.perm.iter().map(|a| a - 1).collect();
            let pose = SignedPerm::new(&perm, &rec.pose.signs)?;
            if pose.dim() != params.n {
                return Err(Error::MalformedPose(format!("pose of dimension {}", pose.dim())));
            }
            if slots[pos].replace(Cubie { home, pose }).is_some() {
                return Err(Error::InvalidReassembly(vec![format!("position {:?} occupied twice", rec.pos)]));
            }
        }
        let slots = slots.into_iter().map(|c| c.expect("count checked, no duplicates")).collect();
        State::from_slots(geom, slots)
    }
}

pub fn state_to_json(s: &State) -> String {
    serde_json::to_string(&StateFile::from(s)).expect("serializable")
}

pub fn state_from_json(text: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(text)?;
    State::try_from(file)
}
