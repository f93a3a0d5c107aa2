use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CoxeterError;

/// Strength `m(s, t)` of the bond between two distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl Bond {
    /// Nodes joined by a finite bond of strength at least 3.
    pub fn has_braid_relation(self) -> bool {
        matches!(self, Bond::Finite(m) if m >= 3)
    }

    pub fn commutes(self) -> bool {
        self == Bond::Finite(2)
    }

    /// The JSON encoding: the strength itself, or 0 for an infinite bond.
    pub fn as_json_int(self) -> u32 {
        match self {
            Bond::Finite(m) => m,
            Bond::Infinite => 0,
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{m}"),
            Bond::Infinite => f.write_str("inf"),
        }
    }
}

/// A Coxeter graph.
///
/// Nodes are indexed `0..node_count` internally; each node also carries the
/// label used in input and output (Bourbaki numbering starting at 1 for most
/// named types). The label order is the generator order for ShortLex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterGraph {
    name: String,
    labels: Vec<u32>,
    bonds: Vec<Bond>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: u32,
    edges: Vec<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<u32>>,
}

impl CoxeterGraph {
    /// A graph with all pairs commuting and labels `1..=n`.
    pub fn discrete(name: impl Into<String>, n: usize) -> Self {
        Self::with_labels(name, (1..=n as u32).collect())
    }

    fn with_labels(name: impl Into<String>, labels: Vec<u32>) -> Self {
        let n = labels.len();
        let mut bonds = vec![Bond::Finite(2); n * n];
        for i in 0..n {
            bonds[i * n + i] = Bond::Finite(1);
        }
        Self {
            name: name.into(),
            labels,
            bonds,
        }
    }

    /// Sets the bond between two nodes given by internal index.
    pub fn set_bond(&mut self, i: usize, j: usize, bond: Bond) {
        let n = self.node_count();
        assert!(i != j && i < n && j < n, "invalid bond ({i}, {j})");
        self.bonds[i * n + j] = bond;
        self.bonds[j * n + i] = bond;
    }

    fn set_labelled(&mut self, a: u32, b: u32, m: u32) {
        let i = self.index_of(a).expect("label");
        let j = self.index_of(b).expect("label");
        self.set_bond(i, j, if m == 0 { Bond::Infinite } else { Bond::Finite(m) });
    }

    /// Parses either a named type (`A5`, `D4`, `E6`, `B3`, `H3`, `I2:5`,
    /// `affA3`, ...) or an explicit JSON edge list
    /// `{"nodes": n, "edges": [[i, j, m], ...]}` with `m = 0` meaning infinity.
    pub fn parse(spec: &str) -> Result<Self, CoxeterError> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            return Self::from_json(spec);
        }
        let unknown = || CoxeterError::UnknownGraph(spec.to_string());
        let number = |s: &str| s.parse::<u32>().map_err(|_| unknown());

        if let Some(m) = spec.strip_prefix("I2:") {
            let m = match m {
                "inf" | "0" => 0,
                _ => number(m)?,
            };
            if m == 1 {
                return Err(CoxeterError::BondTooSmall { i: 1, j: 2, m: 1 });
            }
            let mut g = Self::discrete(spec, 2);
            g.set_labelled(1, 2, m);
            return Ok(g);
        }
        if let Some(n) = spec.strip_prefix("affA") {
            let n = number(n)?;
            if n == 0 {
                return Err(unknown());
            }
            let mut g = Self::discrete(spec, n as usize + 1);
            if n == 1 {
                g.set_labelled(1, 2, 0);
            } else {
                for i in 1..=n + 1 {
                    g.set_labelled(i, i % (n + 1) + 1, 3);
                }
            }
            return Ok(g);
        }

        let (family, rank) = spec.split_at(1);
        let n = number(rank)?;
        let chain = |g: &mut CoxeterGraph, upto: u32| {
            for i in 1..upto {
                g.set_labelled(i, i + 1, 3);
            }
        };
        let g = match (family, n) {
            ("A", n) if n >= 1 => {
                let mut g = Self::discrete(spec, n as usize);
                chain(&mut g, n);
                g
            }
            ("B", n) if n >= 2 => {
                let mut g = Self::discrete(spec, n as usize);
                chain(&mut g, n - 1);
                g.set_labelled(n - 1, n, 4);
                g
            }
            ("D", n) if n >= 4 => {
                let mut g = Self::discrete(spec, n as usize);
                chain(&mut g, n - 1);
                g.set_labelled(n - 2, n, 3);
                g
            }
            ("E", n) if n >= 6 => {
                // Straight line 1..n-1 with an extra node 0 attached to node 3.
                let mut g = Self::with_labels(spec, (0..n).collect());
                chain(&mut g, n - 1);
                g.set_labelled(0, 3, 3);
                g
            }
            ("F", 4) => {
                let mut g = Self::discrete(spec, 4);
                g.set_labelled(1, 2, 3);
                g.set_labelled(2, 3, 4);
                g.set_labelled(3, 4, 3);
                g
            }
            ("G", 2) => {
                let mut g = Self::discrete(spec, 2);
                g.set_labelled(1, 2, 6);
                g
            }
            ("H", n) if n == 3 || n == 4 => {
                let mut g = Self::discrete(spec, n as usize);
                chain(&mut g, n);
                g.set_labelled(1, 2, 5);
                g
            }
            _ => return Err(unknown()),
        };
        Ok(g)
    }

    fn from_json(text: &str) -> Result<Self, CoxeterError> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| CoxeterError::BadGraphJson(e.to_string()))?;
        if raw.nodes == 0 {
            return Err(CoxeterError::BadGraphJson("graph has no nodes".into()));
        }
        let n = raw.nodes as usize;
        let labels = match raw.labels {
            Some(l) if l.len() != n => {
                return Err(CoxeterError::BadGraphJson(format!("{} labels for {n} nodes", l.len())))
            }
            Some(l) => l,
            None => (1..=raw.nodes).collect(),
        };
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] >= w[1]) || sorted != labels {
            return Err(CoxeterError::BadGraphJson("labels must be strictly increasing".into()));
        }
        let mut g = Self::with_labels("custom", labels);
        for [a, b, m] in raw.edges {
            let idx = |x: i64| {
                u32::try_from(x)
                    .ok()
                    .and_then(|x| g.index_of(x))
                    .ok_or(CoxeterError::NodeOutOfRange(x))
            };
            let (i, j) = (idx(a)?, idx(b)?);
            if i == j {
                return Err(CoxeterError::BadGraphJson(format!("self-loop at node {a}")));
            }
            let bond = match m {
                0 => Bond::Infinite,
                m if m >= 2 => Bond::Finite(m as u32),
                m => return Err(CoxeterError::BondTooSmall { i: a, j: b, m }),
            };
            g.set_bond(i, j, bond);
        }
        g.name = g.canonical_json();
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn bond(&self, i: usize, j: usize) -> Bond {
        self.bonds[i * self.node_count() + j]
    }

    /// Pairs `i < j` whose bond is not `2`, with their strength.
    pub fn edges(&self) -> Vec<(usize, usize, Bond)> {
        let n = self.node_count();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = self.bond(i, j);
                if !b.commutes() {
                    out.push((i, j, b));
                }
            }
        }
        out
    }

    pub fn is_simply_laced(&self) -> bool {
        self.edges().iter().all(|&(_, _, b)| b == Bond::Finite(3))
    }

    /// True when every connected component is of type A, D or E_n (any `n`).
    pub fn is_ade(&self) -> bool {
        if !self.is_simply_laced() {
            return false;
        }
        self.components().iter().all(|comp| self.component_is_ade(comp))
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&j| j != i && !self.bond(i, j).commutes())
            .collect()
    }

    /// Connected components of the graph (commuting pairs are not joined).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                for j in self.neighbours(comp[k]) {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            out.push(comp);
        }
        out
    }

    fn component_is_ade(&self, comp: &[usize]) -> bool {
        let edge_count: usize = comp.iter().map(|&i| self.neighbours(i).len()).sum::<usize>() / 2;
        if edge_count + 1 != comp.len() {
            return false; // not a tree
        }
        let branch: Vec<usize> = comp
            .iter()
            .copied()
            .filter(|&i| self.neighbours(i).len() >= 3)
            .collect();
        match branch.as_slice() {
            [] => true,
            [b] => {
                let nbrs = self.neighbours(*b);
                if nbrs.len() != 3 {
                    return false;
                }
                let mut arms: Vec<usize> = nbrs
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (*b, start, 1);
                        loop {
                            let next: Vec<usize> = self.neighbours(cur).into_iter().filter(|&x| x != prev).collect();
                            match next.as_slice() {
                                [nx] => {
                                    prev = cur;
                                    cur = *nx;
                                    len += 1;
                                }
                                _ => break len,
                            }
                        }
                    })
                    .collect();
                arms.sort_unstable();
                // D_n: (1, 1, k); E_n: (1, 2, k).
                arms[0] == 1 && arms[1] <= 2
            }
            _ => false,
        }
    }

    /// Canonical JSON form `{"nodes":n,"edges":[[i,j,m],...]}` using labels.
    pub fn canonical_json(&self) -> String {
        let default_labels: Vec<u32> = (1..=self.node_count() as u32).collect();
        let raw = GraphJson {
            nodes: self.node_count() as u32,
            edges: self
                .edges()
                .into_iter()
                .map(|(i, j, b)| [self.label(i) as i64, self.label(j) as i64, b.as_json_int() as i64])
                .collect(),
            labels: (self.labels != default_labels).then(|| self.labels.clone()),
        };
        serde_json::to_string(&raw).expect("graph serializes")
    }

    /// Hex digest of the canonical JSON, independent of how the graph was named.
    pub fn canonical_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}
