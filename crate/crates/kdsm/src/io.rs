//! File formats: set-function instances, weight vectors, matroid and
//! graph descriptions. Everything is JSON with exact rational values
//! written as base-10 `"p"` or `"p/q"` strings in lowest terms.

use serde::{Deserialize, Serialize};

use crate::apps::clique::Graph;
use crate::apps::matroid::Matroid;
use crate::error::Error;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::set_function::SetFunction;
use crate::subset::{GroundSet, Subset};

/// On-disk shape of an instance: `values[mask]` is f of that mask.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    k: usize,
    values: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Parses an instance from its JSON text.
pub fn parse_instance(text: &str) -> Result<SetFunction, Error> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid instance JSON: {e}")))?;
    if file.n < 1 || file.n > 20 {
        return Err(Error::Format(format!("n={} out of the supported 1..=20 range", file.n)));
    }
    if file.k < 2 || file.k > file.n {
        return Err(Error::DistanceOutOfRange { k: file.k, n: file.n });
    }
    let expected = 1usize << file.n;
    if file.values.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} values for n={}, got {}",
            file.n,
            file.values.len()
        )));
    }
    let ground = match file.labels {
        Some(labels) => {
            if labels.len() != file.n {
                return Err(Error::Format(format!(
                    "expected {} labels, got {}",
                    file.n,
                    labels.len()
                )));
            }
            GroundSet::with_labels(labels)?
        }
        None => GroundSet::new(file.n)?,
    };
    let values = file
        .values
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<Rational>, Error>>()?;
    SetFunction::from_dense(ground, file.k, values)
}

/// Canonical serialization: lowest-terms rationals, mask order.
pub fn serialize_instance(f: &SetFunction) -> Result<String, Error> {
    let dense = f.to_dense()?;
    let values = dense
        .dense_values()
        .expect("dense after materialization")
        .iter()
        .map(format_rational)
        .collect();
    let file = InstanceFile {
        n: f.n(),
        k: f.declared_k(),
        values,
        labels: f.ground().labels().map(|ls| ls.to_vec()),
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Format(e.to_string()))
}

/// Weight files are a JSON array of rational strings.
pub fn parse_weights(text: &str) -> Result<Vec<Rational>, Error> {
    let raw: Vec<String> =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid weights JSON: {e}")))?;
    raw.iter().map(|s| parse_rational(s)).collect()
}

/// Integer weight files for matroid intersection.
pub fn parse_integer_weights(text: &str) -> Result<Vec<i64>, Error> {
    let w = parse_weights(text)?;
    w.iter()
        .map(|v| {
            if !v.is_integer() {
                return Err(Error::Format(format!(
                    "matroid intersection weights must be integers, got {}",
                    format_rational(v)
                )));
            }
            i64::try_from(v.numer()).map_err(|_| Error::Format("weight out of i64 range".into()))
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MatroidFile {
    Uniform { n: usize, r: usize },
    SparsePaving { n: usize, r: usize, forbidden: Vec<Vec<usize>> },
    NearUniform { n: usize, r: usize, k: usize, ranks: Vec<usize> },
}

/// Parses a matroid description.
///
/// Kinds: `uniform` (n, r), `sparse_paving` (n, r, forbidden r-sets as
/// 1-based element lists), `near_uniform` (n, r, k, rank table indexed by
/// mask).
pub fn parse_matroid(text: &str) -> Result<Matroid, Error> {
    let file: MatroidFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid matroid JSON: {e}")))?;
    match file {
        MatroidFile::Uniform { n, r } => Matroid::uniform(n, r),
        MatroidFile::SparsePaving { n, r, forbidden } => {
            let sets = forbidden
                .iter()
                .map(|elems| elements_to_subset(elems, n))
                .collect::<Result<Vec<Subset>, Error>>()?;
            Matroid::sparse_paving(n, r, sets)
        }
        MatroidFile::NearUniform { n, r, k, ranks } => Matroid::near_uniform(n, r, k, ranks),
    }
}

fn elements_to_subset(elems: &[usize], n: usize) -> Result<Subset, Error> {
    let mut s = Subset::EMPTY;
    for &e in elems {
        if e == 0 || e > n {
            return Err(Error::Format(format!("element {e} outside 1..={n}")));
        }
        s = s.insert(e - 1);
    }
    Ok(s)
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    nv: usize,
    edges: Vec<(usize, usize)>,
}

/// Parses a graph given as 1-based edge pairs.
pub fn parse_graph(text: &str) -> Result<Graph, Error> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid graph JSON: {e}")))?;
    Graph::from_edges(file.nv, &file.edges)
}

pub fn serialize_graph(g: &Graph) -> String {
    let file = GraphFile { nv: g.nv(), edges: g.edges() };
    serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
}
