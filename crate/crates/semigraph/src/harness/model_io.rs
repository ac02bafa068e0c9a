//! Versioned model files.
//!
//! A model file is a JSON document holding the format tag, a version
//! number, and the full [`EmbeddingState`] (dimension, node count, the six
//! parameter blocks, and the seed the state was initialized from). Writing
//! is deterministic: identical states produce byte-identical files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingState;
use crate::error::{Error, Result};

const FORMAT_TAG: &str = "semigraph-model";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    num_nodes: usize,
    dim: usize,
    state: EmbeddingState,
}

pub fn save_model<P: AsRef<Path>>(state: &EmbeddingState, path: P) -> Result<()> {
    let file = ModelFile {
        format: FORMAT_TAG.to_string(),
        version: FORMAT_VERSION,
        num_nodes: state.num_nodes(),
        dim: state.dim,
        state: state.clone(),
    };
    let json = serde_json::to_string(&file).map_err(|e| Error::Model(e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_model<P: AsRef<Path>>(path: P) -> Result<EmbeddingState> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| Error::Model(format!("malformed model file: {e}")))?;
    if file.format != FORMAT_TAG {
        return Err(Error::Model(format!(
            "unexpected format tag `{}`",
            file.format
        )));
    }
    if file.version != FORMAT_VERSION {
        return Err(Error::Model(format!(
            "unsupported model version {} (this build reads version {FORMAT_VERSION})",
            file.version
        )));
    }
    if file.num_nodes != file.state.num_nodes() || file.dim != file.state.dim {
        return Err(Error::Model("header disagrees with parameter blocks".into()));
    }
    if !file
        .state
        .v_f
        .iter()
        .chain(&file.state.v_d)
        .chain(&file.state.u_f)
        .chain(&file.state.u_d)
        .all(|v| v.dim() == file.dim && v.is_finite())
    {
        return Err(Error::Model("non-finite or mis-sized parameter block".into()));
    }
    Ok(file.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::init_state;

    #[test]
    fn save_load_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let state = init_state(12, 3, 42);
        save_model(&state, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(state, loaded);
    }

    #[test]
    fn identical_states_produce_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
        save_model(&init_state(8, 3, 7), &p1).unwrap();
        save_model(&init_state(8, 3, 7), &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn junk_file_is_a_model_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.json");
        std::fs::write(&path, "not a model").unwrap();
        assert!(matches!(load_model(&path), Err(Error::Model(_))));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let state = init_state(3, 2, 1);
        save_model(&state, &path).unwrap();
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"version\":1", "\"version\":99");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(load_model(&path), Err(Error::Model(_))));
    }
}
