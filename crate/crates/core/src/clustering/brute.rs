use super::{validate_k, Clustering, Objective};
use crate::error::{CoreError, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::oracle::{effective_depth, ConnectionOracle, ExactOracle, EXACT_TOLERANCE};

/// Largest graph the exhaustive search accepts.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 10;

/// Calls `visit` with every k-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[NodeId])) {
    let mut subset: Vec<NodeId> = (0..k).collect();
    loop {
        visit(&subset);
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            return;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn check_size(graph: &UncertainGraph, k: usize) -> Result<()> {
    validate_k(k, graph.n())?;
    if graph.n() > BRUTE_FORCE_NODE_LIMIT {
        return Err(CoreError::InstanceTooLarge {
            n: graph.n(),
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    Ok(())
}

/// Optimal value of the objective over all choices of `k` centers, with each
/// node assigned to its most probable center, and a clustering achieving it.
pub fn brute_force_optimum(
    graph: &UncertainGraph,
    k: usize,
    objective: Objective,
    depth: Option<usize>,
) -> Result<(f64, Clustering)> {
    check_size(graph, k)?;
    let n = graph.n();
    let oracle = ExactOracle::new(graph)?;
    let depth = effective_depth(n, depth);
    let rows: Vec<_> = (0..n).map(|v| oracle.row(v, depth)).collect();

    let mut best: Option<(f64, Vec<NodeId>)> = None;
    for_each_subset(n, k, |centers| {
        let per_node = (0..n).map(|u| centers.iter().map(|&c| rows[c][u]).fold(0.0, f64::max));
        let value = match objective {
            Objective::Min => per_node.fold(1.0, f64::min),
            Objective::Avg => per_node.sum::<f64>() / n as f64,
        };
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, centers.to_vec()));
        }
    });
    let (value, centers) = best.expect("at least one subset");

    let assignment = (0..n)
        .map(|u| {
            if let Some(i) = centers.iter().position(|&c| c == u) {
                return i;
            }
            let mut arg = 0;
            for i in 1..k {
                if rows[centers[i]][u] > rows[centers[arg]][u] {
                    arg = i;
                }
            }
            arg
        })
        .collect();
    let clustering = Clustering::from_assignment(&oracle, centers, assignment, depth)?;
    Ok((value, clustering))
}

/// Fewest nodes left uncovered by any `k` centers when a node counts as covered
/// only if its probability to some center is at least `q`.
pub fn min_uncovered(graph: &UncertainGraph, k: usize, q: f64, depth: Option<usize>) -> Result<usize> {
    check_size(graph, k)?;
    let n = graph.n();
    let oracle = ExactOracle::new(graph)?;
    let depth = effective_depth(n, depth);
    let rows: Vec<_> = (0..n).map(|v| oracle.row(v, depth)).collect();
    let mut fewest = n;
    for_each_subset(n, k, |centers| {
        let uncovered = (0..n)
            .filter(|&u| centers.iter().all(|&c| rows[c][u] < q - EXACT_TOLERANCE))
            .count();
        fewest = fewest.min(uncovered);
    });
    Ok(fewest)
}
