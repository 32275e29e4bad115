use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{CorpusError, EmbeddingVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Document ids in the order they were picked.
    pub chosen: Vec<String>,
    /// Largest distance from any vector to its nearest chosen center.
    pub coverage_radius: f64,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Greedy k-center selection under Euclidean distance, starting from
/// `start`. Each step adds the vector farthest from its nearest chosen
/// center; ties go to the smallest doc id.
pub fn k_center_greedy(
    vectors: &[EmbeddingVector],
    k: usize,
    start: &str,
) -> Result<SelectionResult, CorpusError> {
    let n = vectors.len();
    if n == 0 {
        return Err(CorpusError::NoVectors);
    }
    if k == 0 || k > n {
        return Err(CorpusError::InvalidK { k, n });
    }
    let dim = vectors[0].values.len();
    let mut seen = HashSet::new();
    for v in vectors {
        if v.values.len() != dim || dim == 0 {
            return Err(CorpusError::DimensionMismatch {
                doc_id: v.doc_id.clone(),
                expected: dim.max(1),
                got: v.values.len(),
            });
        }
        if !seen.insert(v.doc_id.as_str()) {
            return Err(CorpusError::DuplicateDoc(v.doc_id.clone()));
        }
    }
    let first = vectors
        .iter()
        .position(|v| v.doc_id == start)
        .ok_or_else(|| CorpusError::UnknownStart(start.into()))?;

    let mut nearest: Vec<f64> = vectors
        .iter()
        .map(|v| distance(&v.values, &vectors[first].values))
        .collect();
    let mut chosen = vec![first];
    while chosen.len() < k {
        let next = (0..n)
            .filter(|i| !chosen.contains(i))
            .max_by(|&a, &b| {
                nearest[a]
                    .total_cmp(&nearest[b])
                    .then_with(|| vectors[b].doc_id.cmp(&vectors[a].doc_id))
            })
            .expect("k ≤ n leaves a candidate");
        chosen.push(next);
        for (i, v) in vectors.iter().enumerate() {
            nearest[i] = nearest[i].min(distance(&v.values, &vectors[next].values));
        }
    }
    Ok(SelectionResult {
        chosen: chosen
            .into_iter()
            .map(|i| vectors[i].doc_id.clone())
            .collect(),
        coverage_radius: nearest.iter().copied().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(points: &[(&str, f64, f64)]) -> Vec<EmbeddingVector> {
        points
            .iter()
            .map(|&(id, x, y)| EmbeddingVector {
                doc_id: id.into(),
                values: vec![x, y],
            })
            .collect()
    }

    #[test]
    fn k_one_is_the_start() {
        let v = vecs(&[("a", 0.0, 0.0), ("b", 3.0, 4.0), ("c", 1.0, 0.0)]);
        let r = k_center_greedy(&v, 1, "c").unwrap();
        assert_eq!(r.chosen, vec!["c"]);
        assert!((r.coverage_radius - 20f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn k_n_covers_everything() {
        let v = vecs(&[("a", 0.0, 0.0), ("b", 3.0, 4.0), ("c", 1.0, 0.0)]);
        let r = k_center_greedy(&v, 3, "a").unwrap();
        assert_eq!(r.chosen, vec!["a", "b", "c"]);
        assert_eq!(r.coverage_radius, 0.0);
    }

    #[test]
    fn ties_go_to_the_smallest_id() {
        let v = vecs(&[("z", 1.0, 0.0), ("m", -1.0, 0.0), ("o", 0.0, 0.0)]);
        assert_eq!(k_center_greedy(&v, 2, "o").unwrap().chosen, vec!["o", "m"]);
    }

    #[test]
    fn duplicate_points_are_still_chosen() {
        let v = vecs(&[("a", 0.0, 0.0), ("b", 0.0, 0.0)]);
        assert_eq!(k_center_greedy(&v, 2, "b").unwrap().chosen, vec!["b", "a"]);
    }

    #[test]
    fn precondition_errors() {
        let v = vecs(&[("a", 0.0, 0.0), ("b", 1.0, 0.0)]);
        assert!(matches!(
            k_center_greedy(&v, 0, "a"),
            Err(CorpusError::InvalidK { .. })
        ));
        assert!(matches!(
            k_center_greedy(&v, 3, "a"),
            Err(CorpusError::InvalidK { .. })
        ));
        assert!(matches!(
            k_center_greedy(&v, 1, "x"),
            Err(CorpusError::UnknownStart(_))
        ));
        assert!(matches!(
            k_center_greedy(&[], 1, "a"),
            Err(CorpusError::NoVectors)
        ));
        let mut bad = v.clone();
        bad[1].values.push(1.0);
        assert!(matches!(
            k_center_greedy(&bad, 1, "a"),
            Err(CorpusError::DimensionMismatch { .. })
        ));
        let dup = vecs(&[("a", 0.0, 0.0), ("a", 1.0, 0.0)]);
        assert!(matches!(
            k_center_greedy(&dup, 1, "a"),
            Err(CorpusError::DuplicateDoc(_))
        ));
    }
}
