//! Built-in instance corpus for the verification suites: exhaustive small
//! connected graphs, threshold creation words, and the named families the
//! checks run against.

use crate::graph::{make_family, FamilySpec, Graph, ThresholdStep};

/// All connected labeled graphs on n vertices (n <= 6 stays tiny: the edge
/// mask has at most 15 bits).
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Threshold creation words producing connected graphs on n vertices
/// (length n-1, ending with a universal step). The single-vertex graph is
/// the empty word.
pub fn threshold_words(n: usize) -> Vec<Vec<ThresholdStep>> {
    if n <= 1 {
        return vec![Vec::new()];
    }
    let steps = n - 1;
    let mut out = Vec::new();
    for mask in 0u32..1 << (steps - 1) {
        let mut word: Vec<ThresholdStep> = (0..steps - 1)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    ThresholdStep::Universal
                } else {
                    ThresholdStep::Isolated
                }
            })
            .collect();
        word.push(ThresholdStep::Universal);
        out.push(word);
    }
    out
}

/// (p, q) pairs with p + q <= `max_total`.
pub fn bipartite_params(max_total: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 1..max_total {
        for q in 1..=max_total.saturating_sub(p) {
            out.push((p, q));
        }
    }
    out
}

/// The named instances the embedded-copy and coloring checks run on.
pub fn named_corpus() -> Vec<(String, Graph)> {
    let mut specs = vec![
        "complete:3".to_string(),
        "complete:4".into(),
        "complete:5".into(),
        "path:3".into(),
        "path:4".into(),
        "path:5".into(),
        "star:3".into(),
        "star:4".into(),
        "spk:2,2".into(),
        "spk:2,3".into(),
        "spk:3,3".into(),
        "kpq:2,2".into(),
        "kpq:2,3".into(),
    ];
    specs.sort();
    specs
        .into_iter()
        .map(|s| {
            let g = make_family(&FamilySpec::parse(&s).unwrap()).unwrap();
            (s, g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_counts() {
        // known counts of connected labeled graphs
        assert_eq!(connected_graphs(2).len(), 1);
        assert_eq!(connected_graphs(3).len(), 4);
        assert_eq!(connected_graphs(4).len(), 38);
        assert_eq!(connected_graphs(5).len(), 728);
    }

    #[test]
    fn threshold_words_are_connected() {
        for n in 2..=6 {
            let words = threshold_words(n);
            assert_eq!(words.len(), 1 << (n - 2));
            for w in words {
                let g = make_family(&FamilySpec::Threshold(w)).unwrap();
                assert_eq!(g.n(), n);
                assert!(g.is_connected());
            }
        }
    }

    #[test]
    fn bipartite_param_count() {
        assert_eq!(bipartite_params(7).len(), 21);
    }
}
