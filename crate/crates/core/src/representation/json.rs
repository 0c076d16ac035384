//! JSON interchange format:
//! `{"tree": {"nodes": [...], "edges": [[j, j'], ...]}, "subtrees": [[...], ...]}`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{NodeId, RepError, Representation, Tree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<[NodeId; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub tree: TreeFile,
    pub subtrees: Vec<Vec<NodeId>>,
}

impl From<&Representation> for RepresentationFile {
    fn from(rep: &Representation) -> Self {
        Self {
            tree: TreeFile {
                nodes: rep.tree().nodes().to_vec(),
                edges: rep
                    .tree()
                    .edges()
                    .into_iter()
                    .map(|(a, b)| [a, b])
                    .collect(),
            },
            subtrees: (0..rep.n()).map(|i| rep.subtree(i)).collect(),
        }
    }
}

impl TryFrom<RepresentationFile> for Representation {
    type Error = RepError;

    fn try_from(file: RepresentationFile) -> Result<Self, RepError> {
        let edges: Vec<(NodeId, NodeId)> = file.tree.edges.iter().map(|&[a, b]| (a, b)).collect();
        let tree = Tree::new(file.tree.nodes, &edges)?;
        Representation::new(tree, file.subtrees)
    }
}

pub fn write_json<W: Write>(rep: &Representation, out: W) -> std::io::Result<()> {
    serde_json::to_writer(out, &RepresentationFile::from(rep)).map_err(std::io::Error::from)
}

pub fn read_json<R: Read>(input: R) -> Result<Representation, RepError> {
    let file: RepresentationFile =
        serde_json::from_reader(input).map_err(|e| RepError::Json(e.to_string()))?;
    Representation::try_from(file)
}
