//! Serializable views of spectral reports and walk censuses.

use std::collections::BTreeMap;
use std::io::Write;

use coverlab_core::spectral::{self, SpectralReport, SpectrumMultiset};
use coverlab_core::walks::{self, HomotopyType};
use coverlab_core::Graph;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::format::GraphFile;

/// `[re, im]` pairs, sorted by decreasing real part then imaginary part.
fn sorted_pairs(s: &SpectrumMultiset) -> Vec<[f64; 2]> {
    let mut v: Vec<[f64; 2]> = s.values().iter().map(|z| [z.re, z.im]).collect();
    v.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    v
}

fn sorted_reals(s: &SpectrumMultiset) -> Vec<f64> {
    let mut v: Vec<f64> = s.values().iter().map(|z| z.re).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub value: [f64; 2],
    pub multiplicity: usize,
}

fn multiplicities(s: &SpectrumMultiset) -> Vec<Multiplicity> {
    s.multiplicities()
        .into_iter()
        .map(|(z, m)| Multiplicity {
            value: [z.re, z.im],
            multiplicity: m,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralJson {
    pub adjacency: Vec<f64>,
    pub adjacency_multiplicities: Vec<Multiplicity>,
    pub new_adjacency: Vec<f64>,
    pub hashimoto: Option<Vec<[f64; 2]>>,
    pub hashimoto_multiplicities: Option<Vec<Multiplicity>>,
    pub new_hashimoto: Option<Vec<[f64; 2]>>,
    pub mu1_new: Option<f64>,
    pub epsilon: f64,
    pub alon_bound: Option<f64>,
    pub non_alon_count: Option<usize>,
    pub base_is_ramanujan: Option<bool>,
    pub cover_is_ramanujan: Option<bool>,
}

impl SpectralJson {
    pub fn new(r: &SpectralReport, base: &Graph) -> Self {
        SpectralJson {
            adjacency: sorted_reals(&r.adjacency_spectrum),
            adjacency_multiplicities: multiplicities(&r.adjacency_spectrum),
            new_adjacency: sorted_reals(&r.new_adjacency),
            hashimoto: r.hashimoto_spectrum.as_ref().map(sorted_pairs),
            hashimoto_multiplicities: r.hashimoto_spectrum.as_ref().map(multiplicities),
            new_hashimoto: r.new_hashimoto.as_ref().map(sorted_pairs),
            mu1_new: r
                .new_hashimoto
                .as_ref()
                .map(|h| h.values().iter().map(|z| z.norm()).fold(0.0, f64::max)),
            epsilon: r.epsilon,
            alon_bound: base.regular_degree().map(spectral::alon_bound),
            non_alon_count: r.non_alon_count,
            base_is_ramanujan: r.base_is_ramanujan,
            cover_is_ramanujan: r.cover_is_ramanujan,
        }
    }
}

/// One census row: walks of length `k` of one homotopy type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub k: usize,
    pub type_id: usize,
    /// Edge lengths joined by `;`.
    pub lengths: String,
    pub count: u64,
}

/// A reduced graph in the graph format plus its ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub graph: GraphFile,
    pub vertex_order: Vec<usize>,
    /// Oriented representative of each edge, in edge order.
    pub edge_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    pub catalog: BTreeMap<usize, CatalogEntry>,
}

/// Classifies every SNBC walk of length `1..=max_k`. Types are numbered by
/// first appearance in order of `k`, then by the order of their keys.
pub fn walk_census(g: &Graph, max_k: usize, budget: u64) -> Result<Census> {
    let mut ids: BTreeMap<_, usize> = BTreeMap::new();
    let mut census = Census::default();
    for k in 1..=max_k {
        let by_type: BTreeMap<HomotopyType, u64> = walks::snbc_by_type(g, k, budget)?;
        for (t, count) in by_type {
            let next = ids.len();
            let id = *ids.entry(t.key.clone()).or_insert(next);
            if id == next {
                let reduced = t.reduced_graph();
                census.catalog.insert(
                    id,
                    CatalogEntry {
                        graph: GraphFile::from(reduced.graph()),
                        vertex_order: reduced.vertex_order().to_vec(),
                        edge_order: reduced.edge_order().to_vec(),
                    },
                );
            }
            let lengths: Vec<String> = t.lengths.iter().map(ToString::to_string).collect();
            census.rows.push(CensusRow {
                k,
                type_id: id,
                lengths: lengths.join(";"),
                count,
            });
        }
    }
    Ok(census)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| crate::error::Error::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use coverlab_core::families;

    #[test]
    fn figure_eight_census() {
        let g = families::bouquet(2, 0);
        let c = walk_census(&g, 3, walks::DEFAULT_BUDGET).unwrap();
        for k in 1..=3 {
            let total: u64 = c.rows.iter().filter(|r| r.k == k).map(|r| r.count).sum();
            assert_eq!(total, walks::snbc_count(&g, k).unwrap());
        }
        assert!(c.rows.iter().all(|r| c.catalog.contains_key(&r.type_id)));
        let mut buf = Vec::new();
        write_csv(&c.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,type_id,lengths,count\n1,0,1,4\n"), "{text}");
    }

    #[test]
    fn spectral_json_is_sorted() {
        let base = families::complete(4);
        let a = coverlab_core::sample_assignment(&base, 3, &coverlab_core::ModelSpec::permutation(), 7).unwrap();
        let lift = coverlab_core::build_lift(&base, a).unwrap();
        let r = spectral::spectral_report(&lift, 0.1, 1e-7).unwrap();
        let j = SpectralJson::new(&r, &base);
        assert!(j.adjacency.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(j.new_adjacency.len(), 8);
        assert_eq!(j.adjacency_multiplicities.iter().map(|m| m.multiplicity).sum::<usize>(), 12);
        assert_eq!(j.alon_bound, Some(2.0 * 2f64.sqrt()));
    }
}
