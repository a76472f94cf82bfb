use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching, Resident};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub names: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Vertices `v1..vn`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n || a == b {
                return Err(Error::RejectedInput(format!("bad edge ({a}, {b})")));
            }
            if edges[..i]
                .iter()
                .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
            {
                return Err(Error::RejectedInput(format!("edge ({a}, {b}) repeated")));
            }
        }
        Ok(Graph {
            names: (1..=n).map(|i| format!("v{i}")).collect(),
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// First `k`-clique in lexicographic order of vertex sets.
    pub fn brute_force_clique(&self, k: usize) -> Option<Vec<usize>> {
        let n = self.n();
        if k > n {
            return None;
        }
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            let ok = pick
                .iter()
                .enumerate()
                .all(|(i, &a)| pick[..i].iter().all(|&b| self.adjacent(a, b)));
            if ok {
                return Some(pick);
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if pick[i] < n - k + i {
                    pick[i] += 1;
                    for j in i + 1..k {
                        pick[j] = pick[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CliqueGadget {
    pub instance: Instance,
    pub graph: Graph,
    pub k: usize,
    vertex_res: Vec<Resident>,
    edge_res: Vec<Resident>,
    fill: Vec<Resident>,
    penal_res: [Resident; 4],
    vertex_h: Vec<Hospital>,
    edge_h: Vec<Hospital>,
    sel_v: Vec<Hospital>,
    sel_e: Vec<Hospital>,
    penal_h: [Hospital; 3],
}

/// House-allocation instance with `l = u` everywhere whose stable matchings correspond to
/// `k`-cliques of `g`. When `k > n` or `g` has fewer than `k(k-1)/2` edges a three-hospital cycle
/// without a stable matching is appended.
pub fn gen_clique(g: &Graph, k: usize) -> Result<CliqueGadget> {
    let n = g.n();
    let pairs = k * k.saturating_sub(1) / 2;
    let vh = |v: usize| format!("h[{}]", g.names[v]);
    let eh = |e: usize| {
        let (a, b) = g.edges[e];
        format!("h[{},{}]", g.names[a], g.names[b])
    };
    let mut b = Instance::builder();
    let mut hospitals: Vec<(String, usize)> = Vec::new();
    hospitals.extend((0..n).map(|v| (vh(v), 1)));
    hospitals.extend((0..g.edges.len()).map(|e| (eh(e), 1)));
    hospitals.extend((1..=k).map(|i| (format!("sel_v{i}"), 1)));
    hospitals.extend((1..=pairs).map(|i| (format!("sel_e{i}"), 1)));
    hospitals.extend((1..=3).map(|i| (format!("p{i}"), 2)));
    for (name, q) in &hospitals {
        b = b.hospital(name, *q, Some(*q)).indifferent(name);
    }
    for v in 0..n {
        let mut list: Vec<String> = (1..=k).map(|i| format!("sel_v{i}")).collect();
        list.extend(
            (0..g.edges.len())
                .filter(|&e| g.edges[e].0 == v || g.edges[e].1 == v)
                .map(eh),
        );
        list.push(vh(v));
        b = b.resident(&format!("r[{}]", g.names[v]), &strs(&list));
    }
    for e in 0..g.edges.len() {
        let (a, c) = g.edges[e];
        let mut list: Vec<String> = (1..=pairs).map(|i| format!("sel_e{i}")).collect();
        list.push(eh(e));
        b = b.resident(&format!("r[{},{}]", g.names[a], g.names[c]), &strs(&list));
    }
    let all_v: Vec<String> = (0..n).map(vh).collect();
    for i in 1..=k {
        b = b.resident(&format!("fill{i}"), &strs(&all_v));
    }
    let mut star = all_v.clone();
    star.push("p1".into());
    b = b
        .resident("r*", &strs(&star))
        .resident("s1", &["p1", "p2"])
        .resident("s2", &["p2", "p3"])
        .resident("s3", &["p3", "p1"]);
    if k > n || g.edges.len() < pairs {
        // Too few edges to fill every edge-selection hospital, so the selection component alone
        // would admit a stable matching. A bare cycle keeps the answer at NO.
        for i in 1..=3 {
            let name = format!("guard{i}");
            b = b.hospital(&name, 2, Some(2)).indifferent(&name);
        }
        for i in 1..=3 {
            let next = format!("guard{}", i % 3 + 1);
            b = b.resident(&format!("y{i}"), &[&format!("guard{i}"), &next]);
        }
    }
    let instance = b.build()?;
    let ri = |s: &str| instance.resident_index(s).expect("resident exists");
    let hi = |s: &str| instance.hospital_index(s).expect("hospital exists");
    let gadget = CliqueGadget {
        vertex_res: (0..n).map(|v| ri(&format!("r[{}]", g.names[v]))).collect(),
        edge_res: g
            .edges
            .iter()
            .map(|&(a, c)| ri(&format!("r[{},{}]", g.names[a], g.names[c])))
            .collect(),
        fill: (1..=k).map(|i| ri(&format!("fill{i}"))).collect(),
        penal_res: [ri("r*"), ri("s1"), ri("s2"), ri("s3")],
        vertex_h: (0..n).map(|v| hi(&vh(v))).collect(),
        edge_h: (0..g.edges.len()).map(|e| hi(&eh(e))).collect(),
        sel_v: (1..=k).map(|i| hi(&format!("sel_v{i}"))).collect(),
        sel_e: (1..=pairs).map(|i| hi(&format!("sel_e{i}"))).collect(),
        penal_h: [hi("p1"), hi("p2"), hi("p3")],
        graph: g.clone(),
        k,
        instance,
    };
    Ok(gadget)
}

impl CliqueGadget {
    /// Matching for a `k`-clique given as sorted vertices; stable when `clique` is one.
    pub fn matching_from_clique(&self, clique: &[usize]) -> Matching {
        let g = &self.graph;
        let mut pairs = Vec::new();
        for (i, &v) in clique.iter().enumerate() {
            pairs.push((self.vertex_res[v], self.sel_v[i]));
            pairs.push((self.fill[i], self.vertex_h[v]));
        }
        for v in (0..g.n()).filter(|v| !clique.contains(v)) {
            pairs.push((self.vertex_res[v], self.vertex_h[v]));
        }
        pairs.push((self.penal_res[0], self.penal_h[0]));
        pairs.push((self.penal_res[1], self.penal_h[0]));
        pairs.push((self.penal_res[2], self.penal_h[2]));
        pairs.push((self.penal_res[3], self.penal_h[2]));
        let inside: Vec<usize> = (0..g.edges.len())
            .filter(|&e| clique.contains(&g.edges[e].0) && clique.contains(&g.edges[e].1))
            .collect();
        let mut sel = self.sel_e.iter();
        for e in 0..g.edges.len() {
            let h = if inside.contains(&e) {
                *sel.next()
                    .expect("clique edges fill the selection hospitals")
            } else {
                self.edge_h[e]
            };
            pairs.push((self.edge_res[e], h));
        }
        Matching::from_pairs(self.instance.n(), &pairs)
    }

    /// Vertices whose residents sit at vertex-selection hospitals, sorted.
    pub fn clique_from_matching(&self, m: &Matching) -> Vec<usize> {
        (0..self.graph.n())
            .filter(|&v| {
                m.hospital_of(self.vertex_res[v])
                    .is_some_and(|h| self.sel_v.contains(&h))
            })
            .collect()
    }
}

/// Four vertices, edges `v1v2, v1v3, v2v3, v1v4, v3v4`, searched with `k = 2`.
pub fn four_vertex_demo() -> (Graph, usize) {
    let g = Graph::new(4, vec![(0, 1), (0, 2), (1, 2), (0, 3), (2, 3)]).expect("valid");
    (g, 2)
}

fn strs(xs: &[String]) -> Vec<&str> {
    xs.iter().map(String::as_str).collect()
}
