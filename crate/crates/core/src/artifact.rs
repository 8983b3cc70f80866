//! Self-certifying JSON results: each artifact carries its instance and its
//! certificate, and loading one re-runs the check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractional::{verify_weighting, FractionalWeighting, WeightEntry};
use crate::graph::Graph;
use crate::nibble::disjoint_independent;
use crate::partition::Partition;
use crate::tiling::verify_tiling;
use crate::transversal::{verify_it_partition, Transversal};

pub const ARTIFACT_SCHEMA: u32 = 1;

/// Graph and partition with 1-based vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub classes: Vec<Vec<usize>>,
}

impl Instance {
    pub fn new(g: &Graph, p: &Partition) -> Self {
        Instance {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u + 1, v + 1]).collect(),
            classes: p.iter().map(one_based).collect(),
        }
    }

    pub fn decode(&self) -> Result<(Graph, Partition)> {
        let g = Graph::new(
            self.n,
            self.edges
                .iter()
                .map(|&[u, v]| Ok((zero_based(u)?, zero_based(v)?)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&v| zero_based(v)).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok((g, Partition::new(self.n, classes)?))
    }
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn zero_based(v: usize) -> Result<usize> {
    v.checked_sub(1).ok_or(Error::InvalidVertex(0))
}

/// All vertex ids 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    IndependentTransversal { transversal: Vec<usize> },
    PartialColouring { transversals: Vec<Vec<usize>> },
    StrongColouring { transversals: Vec<Vec<usize>> },
    FractionalWeighting { weights: Vec<WeightEntry> },
    Tiling { cliques: Vec<Vec<usize>> },
}

impl Certificate {
    pub fn transversal(t: &Transversal) -> Self {
        Certificate::IndependentTransversal {
            transversal: one_based(t.vertices()),
        }
    }

    pub fn partial(ts: &[Transversal]) -> Self {
        Certificate::PartialColouring {
            transversals: ts.iter().map(|t| one_based(t.vertices())).collect(),
        }
    }

    pub fn colouring(ts: &[Transversal]) -> Self {
        Certificate::StrongColouring {
            transversals: ts.iter().map(|t| one_based(t.vertices())).collect(),
        }
    }

    pub fn weighting(w: &FractionalWeighting) -> Self {
        Certificate::FractionalWeighting { weights: w.to_entries() }
    }

    pub fn tiling(cliques: &[Vec<usize>]) -> Self {
        Certificate::Tiling {
            cliques: cliques.iter().map(|c| one_based(c)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub schema: u32,
    pub instance: Instance,
    pub certificate: Certificate,
}

impl Artifact {
    pub fn new(g: &Graph, p: &Partition, certificate: Certificate) -> Self {
        Artifact {
            schema: ARTIFACT_SCHEMA,
            instance: Instance::new(g, p),
            certificate,
        }
    }

    /// Re-checks the certificate against the embedded instance.
    pub fn verify(&self) -> Result<()> {
        if self.schema != ARTIFACT_SCHEMA {
            return Err(Error::Precondition(format!("unsupported artifact schema {}", self.schema)));
        }
        let (g, p) = self.instance.decode()?;
        let transversals = |lists: &[Vec<usize>]| -> Result<Vec<Transversal>> {
            lists
                .iter()
                .map(|l| Transversal::new(l.iter().map(|&v| zero_based(v)).collect::<Result<_>>()?, p.classes()))
                .collect()
        };
        let ok = match &self.certificate {
            Certificate::IndependentTransversal { transversal } => {
                transversals(std::slice::from_ref(transversal))?[0].is_independent(&g)
            }
            Certificate::PartialColouring { transversals: ts } => disjoint_independent(&g, &p, &transversals(ts)?),
            Certificate::StrongColouring { transversals: ts } => verify_it_partition(&g, &p, &transversals(ts)?).valid,
            Certificate::FractionalWeighting { weights } => {
                verify_weighting(&g, &p, &FractionalWeighting::from_entries(weights, &p)?)
            }
            Certificate::Tiling { cliques } => {
                let cliques = cliques
                    .iter()
                    .map(|c| c.iter().map(|&v| zero_based(v)).collect())
                    .collect::<Result<Vec<Vec<usize>>>>()?;
                verify_tiling(&g, &p, &cliques)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition("artifact certificate does not verify".into()))
        }
    }

    /// Parses and verifies.
    pub fn load(json: &str) -> Result<Self> {
        let a: Artifact = serde_json::from_str(json).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        a.verify()?;
        Ok(a)
    }
}
