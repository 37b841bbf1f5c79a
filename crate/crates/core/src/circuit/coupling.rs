use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

/// Directed graph of native CNOTs: `(c, t)` allows control `c`, target `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingMap {
    #[serde(rename = "qubits")]
    qubit_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CouplingMap {
    pub fn new(qubit_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidGate(format!("coupling self-pair ({a},{a})")));
            }
            if a >= qubit_count || b >= qubit_count {
                return Err(Error::InvalidGate(format!(
                    "coupling pair ({a},{b}) outside {qubit_count} qubits"
                )));
            }
        }
        Ok(CouplingMap { qubit_count, edges })
    }

    /// `0→1→…→n−1`.
    pub fn line(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid line")
    }

    /// Both directions along `0–1–…–n−1`.
    pub fn line_bidirectional(n: usize) -> Self {
        Self::new(n, (1..n).flat_map(|i| [(i - 1, i), (i, i - 1)])).expect("valid line")
    }

    /// Center `0` controls every leaf.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (0, i))).expect("valid star")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            qubits: usize,
            edges: Vec<(usize, usize)>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        Self::new(raw.qubits, raw.edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "qubits": self.qubit_count,
            "edges": self.edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        })
        .to_string()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn allows(&self, control: usize, target: usize) -> bool {
        self.edges.contains(&(control, target))
    }

    fn neighbors(&self, q: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == q {
                    Some(b)
                } else if b == q {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Lexicographically smallest among the shortest undirected paths.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from >= self.qubit_count || to >= self.qubit_count {
            return None;
        }
        let adj: Vec<BTreeSet<usize>> = (0..self.qubit_count).map(|q| self.neighbors(q)).collect();
        // distances to `to`
        let mut dist = vec![usize::MAX; self.qubit_count];
        dist[to] = 0;
        let mut queue = VecDeque::from([to]);
        while let Some(q) = queue.pop_front() {
            for &nb in &adj[q] {
                if dist[nb] == usize::MAX {
                    dist[nb] = dist[q] + 1;
                    queue.push_back(nb);
                }
            }
        }
        if dist[from] == usize::MAX {
            return None;
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = *adj[cur]
                .iter()
                .find(|&&nb| dist[nb] + 1 == dist[cur])
                .expect("BFS predecessor");
            path.push(cur);
        }
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_validation() {
        let m = CouplingMap::from_json(r#"{"qubits": 3, "edges": [[0,1],[2,1]]}"#).unwrap();
        assert!(m.allows(0, 1) && m.allows(2, 1) && !m.allows(1, 0));
        assert_eq!(CouplingMap::from_json(&m.to_json()).unwrap(), m);
        assert!(CouplingMap::from_json(r#"{"qubits": 2, "edges": [[0,0]]}"#).is_err());
        assert!(CouplingMap::from_json(r#"{"qubits": 2, "edges": [[0,2]]}"#).is_err());
        assert!(matches!(
            CouplingMap::from_json("{\n\"qubits\": 2,\n\"edges\": [[0,}"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn lexicographic_shortest_path() {
        // square 0-1-3, 0-2-3: two shortest paths, pick via 1
        let m = CouplingMap::new(4, [(0, 2), (2, 3), (1, 0), (3, 1)]).unwrap();
        assert_eq!(m.shortest_path(0, 3), Some(vec![0, 1, 3]));
        assert_eq!(m.shortest_path(3, 0), Some(vec![3, 1, 0]));
        let split = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(split.shortest_path(0, 3), None);
    }
}
