use crate::error::{Error, Result};
use crate::model::{Hospital, Instance, Matching, Resident};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Vertex-colored graph. `order[v]` fixes the order in which `v` lists its neighbours; by
/// default it follows the order of `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub names: Vec<String>,
    pub colors: Vec<usize>,
    pub color_names: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub order: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Vertices `v1..vn`, colors `c1..ck`.
    pub fn new(colors: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = colors.iter().max().map_or(0, |&c| c + 1);
        let names = (1..=colors.len()).map(|i| format!("v{i}")).collect();
        let color_names = (1..=k).map(|i| format!("c{i}")).collect();
        ColoredGraph::named(names, colors, color_names, edges)
    }

    pub fn named(
        names: Vec<String>,
        colors: Vec<usize>,
        color_names: Vec<String>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = names.len();
        if colors.len() != n {
            return Err(Error::RejectedInput("one color per vertex required".into()));
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= color_names.len()) {
            return Err(Error::RejectedInput(format!("color {c} has no name")));
        }
        let mut order = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n || a == b {
                return Err(Error::RejectedInput(format!("bad edge ({a}, {b})")));
            }
            if colors[a] == colors[b] {
                return Err(Error::RejectedInput(format!(
                    "edge ({}, {}) joins vertices of one color",
                    names[a], names[b]
                )));
            }
            if edges[..i]
                .iter()
                .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
            {
                return Err(Error::RejectedInput(format!("edge ({a}, {b}) repeated")));
            }
            order[a].push(b);
            order[b].push(a);
        }
        Ok(ColoredGraph {
            names,
            colors,
            color_names,
            edges,
            order,
        })
    }

    /// Replaces the neighbour order of `v`; `order` must be a permutation of its neighbours.
    pub fn with_neighbor_order(mut self, v: usize, order: Vec<usize>) -> Result<Self> {
        let mut a = order.clone();
        let mut b = self.order[v].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::RejectedInput(format!(
                "order for {} is not a permutation of its neighbours",
                self.names[v]
            )));
        }
        self.order[v] = order;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.color_names.len()
    }

    /// Vertices of color `c` in index order.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.names.len())
            .filter(|&v| self.colors[v] == c)
            .collect()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.order[a].contains(&b)
    }

    /// `Some((p, q))` when every vertex has degree `p` and every class has `q` vertices.
    pub fn regularity(&self) -> Option<(usize, usize)> {
        let p = self.order.first().map_or(0, Vec::len);
        let q = self.class(0).len();
        let regular = self.order.iter().all(|o| o.len() == p)
            && (0..self.k()).all(|c| self.class(c).len() == q);
        regular.then_some((p, q))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[..i].iter().all(|&b| !self.adjacent(a, b)))
    }

    /// First multicolored independent set in odometer order over the color classes.
    pub fn brute_force_mcis(&self) -> Option<Vec<usize>> {
        let classes: Vec<Vec<usize>> = (0..self.k()).map(|c| self.class(c)).collect();
        if classes.iter().any(Vec::is_empty) {
            return None;
        }
        let mut idx = vec![0usize; classes.len()];
        loop {
            let pick: Vec<usize> = idx.iter().zip(&classes).map(|(&i, c)| c[i]).collect();
            if self.is_independent(&pick) {
                return Some(pick);
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return None;
                }
                idx[pos] += 1;
                if idx[pos] < classes[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Random graph with `k` classes of `q` vertices, every vertex of degree `p`, and no edge
    /// inside a class. Gives up after a fixed number of attempts.
    pub fn random_regular(seed: u64, k: usize, q: usize, p: usize) -> Option<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors: Vec<usize> = (0..k).flat_map(|c| std::iter::repeat_n(c, q)).collect();
        let n = colors.len();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| colors[a] != colors[b])
            .collect();
        for _ in 0..2000 {
            pairs.shuffle(&mut rng);
            let mut deg = vec![0usize; n];
            let mut edges = Vec::new();
            for &(a, b) in &pairs {
                if deg[a] < p && deg[b] < p {
                    deg[a] += 1;
                    deg[b] += 1;
                    edges.push((a, b));
                }
            }
            if deg.iter().all(|&d| d == p) {
                return ColoredGraph::new(colors, edges).ok();
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
pub struct McisGadget {
    pub instance: Instance,
    pub graph: ColoredGraph,
    vertex_hospital: Vec<Hospital>,
    edge_hospital: Vec<Hospital>,
    colors: Vec<ColorBlock>,
}

#[derive(Debug, Clone, Copy)]
struct ColorBlock {
    r1: Resident,
    r2: Resident,
    s_star: Resident,
    s1: Resident,
    s2: Resident,
    p1: Hospital,
    p2: Hospital,
    p3: Hospital,
}

/// Instance whose stable matchings correspond to multicolored independent sets of a regular
/// graph. Non-regular graphs are rejected.
pub fn gen_mcis(g: &ColoredGraph) -> Result<McisGadget> {
    if g.regularity().is_none() {
        return Err(Error::RejectedInput(
            "graph must be regular with equal color classes".into(),
        ));
    }
    gen_mcis_unchecked(g)
}

/// Same construction without the regularity check, for small illustrations.
pub fn gen_mcis_unchecked(g: &ColoredGraph) -> Result<McisGadget> {
    let vh = |v: usize| format!("h[{}]", g.names[v]);
    let eh = |e: usize| {
        let (a, b) = g.edges[e];
        format!("h[{},{}]", g.names[a], g.names[b])
    };
    let edge_of = |a: usize, b: usize| {
        g.edges
            .iter()
            .position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
            .expect("edge exists")
    };
    let mut b = Instance::builder();
    for v in 0..g.names.len() {
        b = b.hospital(&vh(v), 3, None);
    }
    for e in 0..g.edges.len() {
        b = b.hospital(&eh(e), 4, None);
    }
    for c in &g.color_names {
        for i in 1..=3 {
            b = b.hospital(&format!("h{i}[{c}]"), 2, None);
        }
    }
    let block = |v: usize| -> Vec<String> {
        let mut out: Vec<String> = g.order[v].iter().map(|&w| eh(edge_of(v, w))).collect();
        out.push(vh(v));
        out
    };
    for (c, cn) in g.color_names.iter().enumerate() {
        let class = g.class(c);
        let r1: Vec<String> = class.iter().flat_map(|&v| block(v)).collect();
        let r2: Vec<String> = class.iter().rev().flat_map(|&v| block(v)).collect();
        let mut s_star: Vec<String> = class.iter().map(|&v| vh(v)).collect();
        s_star.extend([format!("h1[{cn}]"), format!("h2[{cn}]")]);
        b = b
            .resident(&format!("r1[{cn}]"), &strs(&r1))
            .resident(&format!("r2[{cn}]"), &strs(&r2))
            .resident(&format!("s*[{cn}]"), &strs(&s_star))
            .resident(
                &format!("s1[{cn}]"),
                &[&format!("h2[{cn}]"), &format!("h3[{cn}]")],
            )
            .resident(
                &format!("s2[{cn}]"),
                &[&format!("h3[{cn}]"), &format!("h1[{cn}]")],
            );
    }
    let instance = b.build()?;
    let ri = |s: String| instance.resident_index(&s).expect("resident exists");
    let hi = |s: String| instance.hospital_index(&s).expect("hospital exists");
    let vertex_hospital = (0..g.names.len()).map(|v| hi(vh(v))).collect();
    let edge_hospital = (0..g.edges.len()).map(|e| hi(eh(e))).collect();
    let colors = g
        .color_names
        .iter()
        .map(|cn| ColorBlock {
            r1: ri(format!("r1[{cn}]")),
            r2: ri(format!("r2[{cn}]")),
            s_star: ri(format!("s*[{cn}]")),
            s1: ri(format!("s1[{cn}]")),
            s2: ri(format!("s2[{cn}]")),
            p1: hi(format!("h1[{cn}]")),
            p2: hi(format!("h2[{cn}]")),
            p3: hi(format!("h3[{cn}]")),
        })
        .collect();
    Ok(McisGadget {
        instance,
        graph: g.clone(),
        vertex_hospital,
        edge_hospital,
        colors,
    })
}

impl McisGadget {
    /// Matching opening the vertex hospital of each chosen vertex; stable when `set` is a
    /// multicolored independent set (one vertex per color, in color order).
    pub fn matching_from_set(&self, set: &[usize]) -> Matching {
        let mut pairs = Vec::new();
        for (blk, &v) in self.colors.iter().zip(set) {
            let h = self.vertex_hospital[v];
            pairs.extend([(blk.r1, h), (blk.r2, h), (blk.s_star, h)]);
            pairs.extend([(blk.s1, blk.p3), (blk.s2, blk.p3)]);
        }
        Matching::from_pairs(self.instance.n(), &pairs)
    }

    /// Vertices whose hospital is open, in index order.
    pub fn set_from_matching(&self, m: &Matching) -> Vec<usize> {
        let open = m.counts(self.instance.m());
        (0..self.vertex_hospital.len())
            .filter(|&v| open[self.vertex_hospital[v]] > 0)
            .collect()
    }

    pub fn vertex_hospital(&self, v: usize) -> Hospital {
        self.vertex_hospital[v]
    }

    pub fn edge_hospital(&self, e: usize) -> Hospital {
        self.edge_hospital[e]
    }

    /// Unused in the forward map; listed so every color block is reachable from tests.
    pub fn penalizing(&self, c: usize) -> [Hospital; 3] {
        let b = self.colors[c];
        [b.p1, b.p2, b.p3]
    }
}

/// Two colors of three vertices with four edges; `v3d` lists `v3c` before `v2c`.
pub fn two_color_demo() -> ColoredGraph {
    let names = ["v1c", "v2c", "v3c", "v1d", "v2d", "v3d"]
        .map(String::from)
        .to_vec();
    ColoredGraph::named(
        names,
        vec![0, 0, 0, 1, 1, 1],
        vec!["c".into(), "d".into()],
        vec![(0, 3), (0, 4), (1, 5), (2, 5)],
    )
    .and_then(|g| g.with_neighbor_order(5, vec![2, 1]))
    .expect("demo graph is valid")
}

fn strs(xs: &[String]) -> Vec<&str> {
    xs.iter().map(String::as_str).collect()
}
