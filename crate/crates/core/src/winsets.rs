//! Winning-set families: copies of a pattern graph, t-clusters, simple
//! t-fans, H-bar graphs, and the maximum 2-density m2.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{encode_pair, Element};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WinsetError {
    #[error("bad pattern: {0}")]
    BadPattern(String),
    #[error("undefined 2-density: {0}")]
    UndefinedDensity(String),
    #[error("family capacity exceeded: {0}")]
    Capacity(String),
}

/// A fixed small pattern graph H, vertices 0..k, canonical sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    k: usize,
    edges: Vec<(usize, usize)>,
}

impl PatternGraph {
    pub fn new(k: usize, mut edges: Vec<(usize, usize)>) -> Result<Self, WinsetError> {
        if k > 8 {
            return Err(WinsetError::BadPattern(format!(
                "patterns are limited to 8 vertices, got {k}"
            )));
        }
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.0 == e.1 || e.1 >= k {
                return Err(WinsetError::BadPattern(format!("bad edge {e:?}")));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(PatternGraph { k, edges })
    }

    pub fn complete(r: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..r {
            for v in u + 1..r {
                edges.push((u, v));
            }
        }
        PatternGraph::new(r, edges).unwrap()
    }

    /// K_r minus one edge.
    pub fn complete_minus_edge(r: usize) -> Self {
        let mut p = PatternGraph::complete(r);
        p.edges.retain(|&e| e != (0, 1));
        p
    }

    /// Path on k vertices (k-1 edges).
    pub fn path(k: usize) -> Self {
        PatternGraph::new(k, (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect()).unwrap()
    }

    /// Built-in names accepted by the CLI: K3..K7, K5minus, Kminus(r), Pk.
    pub fn by_name(name: &str) -> Result<Self, WinsetError> {
        let name = name.trim();
        if let Some(rest) = name.strip_prefix('K') {
            if let Some(r) = rest.strip_suffix("minus") {
                let r: usize = r
                    .parse()
                    .map_err(|_| WinsetError::BadPattern(format!("bad name {name}")))?;
                return Ok(PatternGraph::complete_minus_edge(r));
            }
            if let Some(inner) = rest.strip_prefix("minus(").and_then(|s| s.strip_suffix(')')) {
                let r: usize = inner
                    .parse()
                    .map_err(|_| WinsetError::BadPattern(format!("bad name {name}")))?;
                return Ok(PatternGraph::complete_minus_edge(r));
            }
            if let Ok(r) = rest.parse::<usize>() {
                if (2..=8).contains(&r) {
                    return Ok(PatternGraph::complete(r));
                }
            }
        }
        if let Some(rest) = name.strip_prefix('P') {
            if let Ok(k) = rest.parse::<usize>() {
                if (2..=8).contains(&k) {
                    return Ok(PatternGraph::path(k));
                }
            }
        }
        Err(WinsetError::BadPattern(format!("unknown pattern name {name}")))
    }

    /// Plain-text format: first line "k m", then m lines "u v" (0-based).
    pub fn parse_text(text: &str) -> Result<Self, WinsetError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| WinsetError::BadPattern("empty pattern file".into()))?;
        let mut it = header.split_whitespace();
        let k: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| WinsetError::BadPattern("bad header".into()))?;
        let m: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| WinsetError::BadPattern("bad header".into()))?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| WinsetError::BadPattern("missing edge line".into()))?;
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| WinsetError::BadPattern(format!("bad edge line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| WinsetError::BadPattern(format!("bad edge line {line:?}")))?;
            edges.push((u, v));
        }
        PatternGraph::new(k, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.k, self.edges.len());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&e).is_ok()
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.k);
        for &(u, v) in &self.edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn non_isolated_count(&self) -> usize {
        let mut seen = vec![false; self.k];
        for &(u, v) in &self.edges {
            seen[u] = true;
            seen[v] = true;
        }
        seen.iter().filter(|&&b| b).count()
    }

    /// Contains a path on three vertices iff some vertex has degree >= 2.
    pub fn contains_p3(&self) -> bool {
        let mut deg = vec![0usize; self.k];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.iter().any(|&d| d >= 2)
    }

    pub fn is_forest(&self) -> bool {
        // union-find over k vertices
        let mut parent: Vec<usize> = (0..self.k).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }

    fn edge_mask(&self) -> u32 {
        let mut m = 0u32;
        for &(u, v) in &self.edges {
            m |= 1 << pair_index(self.k, u, v);
        }
        m
    }

    /// Canonical edge mask: minimum relabeling over all vertex permutations.
    pub fn canonical_mask(&self) -> u32 {
        let mut best = u32::MAX;
        for_each_permutation(self.k, |perm| {
            let mut m = 0u32;
            for &(u, v) in &self.edges {
                m |= 1 << pair_index(self.k, perm[u], perm[v]);
            }
            if m < best {
                best = m;
            }
        });
        best
    }

    pub fn is_isomorphic(&self, other: &PatternGraph) -> bool {
        self.k == other.k
            && self.edges.len() == other.edges.len()
            && self.canonical_mask() == other.canonical_mask()
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pattern(k={}, e={:?})", self.k, self.edges)
    }
}

fn pair_index(k: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    u * k - u * (u + 1) / 2 + (v - u - 1)
}

/// Calls `f` with every permutation of 0..k (Heap's algorithm).
pub fn for_each_permutation<F: FnMut(&[usize])>(k: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    f(&perm);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Exact rational, reduced, for 2-density bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Maximum 2-density m2(H) = max (e(H')-1)/(v(H')-2) over subgraphs with
/// at least 3 vertices; also returns a maximizing induced subgraph.
pub fn m2_density(h: &PatternGraph) -> Result<(Ratio, PatternGraph), WinsetError> {
    let k = h.vertex_count();
    if k < 3 {
        return Err(WinsetError::UndefinedDensity(
            "pattern has fewer than 3 vertices".into(),
        ));
    }
    let g = h.to_graph();
    let mut best: Option<(Ratio, Vec<usize>)> = None;
    for mask in 0u32..(1 << k) {
        let verts: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        if verts.len() < 3 {
            continue;
        }
        let mut e = 0i64;
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if g.has_edge(u, v) {
                    e += 1;
                }
            }
        }
        if e < 2 {
            continue;
        }
        let r = Ratio::new(e - 1, verts.len() as i64 - 2);
        // prefer larger subgraphs on ties so "H itself is maximal" is
        // detected whenever H achieves the max
        let better = match &best {
            None => true,
            Some((br, bv)) => r > *br || (r == *br && verts.len() > bv.len()),
        };
        if better {
            best = Some((r, verts));
        }
    }
    let (ratio, verts) = best.ok_or_else(|| {
        WinsetError::UndefinedDensity("no subgraph with >= 3 vertices and >= 2 edges".into())
    })?;
    let g = h.to_graph();
    let sub = g.induced(&verts);
    let subpat = PatternGraph::new(sub.n(), sub.edge_list()).unwrap();
    Ok((ratio, subpat))
}

/// A graph F plus a non-adjacent pair whose addition yields H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbarGraph {
    pub pattern: PatternGraph,
    pub pair: (usize, usize),
}

/// Representatives of isomorphism classes of (F, v, w) with F + vw ~ H.
pub fn hbar_graphs(h: &PatternGraph) -> Result<Vec<HbarGraph>, WinsetError> {
    if h.edge_count() == 0 {
        return Err(WinsetError::BadPattern("pattern has no edges".into()));
    }
    let k = h.vertex_count();
    let h_mask = h.canonical_mask();
    let mut seen: HashSet<(u32, usize)> = HashSet::new();
    let mut out = Vec::new();
    for &removed in h.edges() {
        let mut edges = h.edges().to_vec();
        edges.retain(|&e| e != removed);
        let f = PatternGraph::new(k, edges).unwrap();
        // every non-edge of F whose addition restores a copy of H
        for u in 0..k {
            for v in u + 1..k {
                if f.has_edge(u, v) {
                    continue;
                }
                let mut plus = f.edges().to_vec();
                plus.push((u, v));
                let cand = PatternGraph::new(k, plus).unwrap();
                if cand.canonical_mask() != h_mask {
                    continue;
                }
                // canonical form of the pair (F, {u,v})
                let key = canonical_with_pair(&f, (u, v));
                if seen.insert(key) {
                    out.push(HbarGraph {
                        pattern: f.clone(),
                        pair: (u, v),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn canonical_with_pair(f: &PatternGraph, pair: (usize, usize)) -> (u32, usize) {
    let k = f.vertex_count();
    let mut best = (u32::MAX, usize::MAX);
    for_each_permutation(k, |perm| {
        let mut m = 0u32;
        for &(u, v) in f.edges() {
            m |= 1 << pair_index(k, perm[u], perm[v]);
        }
        let p = pair_index(k, perm[pair.0], perm[pair.1]);
        if (m, p) < best {
            best = (m, p);
        }
    });
    best
}

/// Enumerable family of hyperedges over a board universe, stored flat,
/// with an element -> hyperedge index.
#[derive(Debug, Clone)]
pub struct WinningFamily {
    universe: usize,
    // CSR hyperedges
    offsets: Vec<u32>,
    data: Vec<Element>,
    // CSR element index
    index_offsets: Vec<u32>,
    index_data: Vec<u32>,
}

/// Default cap on total stored elements across all hyperedges.
pub const DEFAULT_FAMILY_CAPACITY: usize = 20_000_000;

impl WinningFamily {
    pub fn from_hyperedges(
        universe: usize,
        hyperedges: impl IntoIterator<Item = Vec<Element>>,
        capacity: usize,
    ) -> Result<Self, WinsetError> {
        Self::build(universe, hyperedges, capacity, true)
    }

    /// As [`from_hyperedges`] but keeps duplicate element sets; used for
    /// families whose members are distinct objects (fans with different
    /// designated pairs) that can share an element union.
    pub fn from_hyperedges_keep_duplicates(
        universe: usize,
        hyperedges: impl IntoIterator<Item = Vec<Element>>,
        capacity: usize,
    ) -> Result<Self, WinsetError> {
        Self::build(universe, hyperedges, capacity, false)
    }

    fn build(
        universe: usize,
        hyperedges: impl IntoIterator<Item = Vec<Element>>,
        capacity: usize,
        dedupe: bool,
    ) -> Result<Self, WinsetError> {
        let mut offsets = vec![0u32];
        let mut data: Vec<Element> = Vec::new();
        let mut seen: HashSet<Vec<Element>> = HashSet::new();
        for mut h in hyperedges {
            h.sort_unstable();
            h.dedup();
            assert!(h.iter().all(|&e| (e as usize) < universe));
            if dedupe && !seen.insert(h.clone()) {
                continue;
            }
            data.extend_from_slice(&h);
            if data.len() > capacity {
                return Err(WinsetError::Capacity(format!(
                    "family exceeds {capacity} stored elements"
                )));
            }
            offsets.push(data.len() as u32);
        }
        // element index
        let mut counts = vec![0u32; universe];
        for &e in &data {
            counts[e as usize] += 1;
        }
        let mut index_offsets = vec![0u32; universe + 1];
        for i in 0..universe {
            index_offsets[i + 1] = index_offsets[i] + counts[i];
        }
        let mut cursor = index_offsets.clone();
        let mut index_data = vec![0u32; data.len()];
        for h in 0..offsets.len() - 1 {
            for i in offsets[h]..offsets[h + 1] {
                let e = data[i as usize] as usize;
                index_data[cursor[e] as usize] = h as u32;
                cursor[e] += 1;
            }
        }
        Ok(WinningFamily {
            universe,
            offsets,
            data,
            index_offsets,
            index_data,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hyperedge(&self, i: usize) -> &[Element] {
        &self.data[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = &[Element]> + '_ {
        (0..self.len()).map(move |i| self.hyperedge(i))
    }

    /// Indices of hyperedges containing `e`.
    pub fn containing(&self, e: Element) -> &[u32] {
        let e = e as usize;
        &self.index_data[self.index_offsets[e] as usize..self.index_offsets[e + 1] as usize]
    }
}

/// All copies of H in K_n, one hyperedge per copy (deduplicated over
/// automorphisms). Empty when v(H) > n.
pub fn enumerate_h_copies(
    n: usize,
    h: &PatternGraph,
    capacity: usize,
) -> Result<WinningFamily, WinsetError> {
    let universe = n * (n - 1) / 2;
    if h.edge_count() == 0 {
        return Err(WinsetError::BadPattern("pattern has no edges".into()));
    }
    let mut hyperedges = Vec::new();
    for verts in combinations(n, h.vertex_count()) {
        copies_on_vertices(n, h, &verts, &mut hyperedges);
        if hyperedges.len().saturating_mul(h.edge_count()) > capacity * 2 {
            return Err(WinsetError::Capacity(format!(
                "H-copy family exceeds {capacity} stored elements"
            )));
        }
    }
    WinningFamily::from_hyperedges(universe, hyperedges, capacity)
}

/// Distinct edge sets of copies of H on exactly this vertex set (every
/// vertex of the subset used).
fn copies_on_vertices(n: usize, h: &PatternGraph, verts: &[usize], out: &mut Vec<Vec<Element>>) {
    let k = h.vertex_count();
    debug_assert_eq!(verts.len(), k);
    let mut local: HashSet<Vec<Element>> = HashSet::new();
    for_each_permutation(k, |perm| {
        let mut edge_ids: Vec<Element> = h
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (verts[perm[u]], verts[perm[v]]);
                encode_pair(n, a.min(b), a.max(b))
            })
            .collect();
        edge_ids.sort_unstable();
        if local.insert(edge_ids.clone()) {
            out.push(edge_ids);
        }
    });
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut state: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let cur = state.clone()?;
        // advance
        let mut next = cur.clone();
        let mut i = k;
        loop {
            if i == 0 {
                state = None;
                break;
            }
            i -= 1;
            if next[i] < n - (k - i) {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                state = Some(next);
                break;
            }
        }
        Some(cur)
    })
}

/// Unions of t distinct copies of H whose vertex sets share at least 3
/// common vertices. Desk-scale n only.
pub fn enumerate_clusters(
    n: usize,
    h: &PatternGraph,
    t: usize,
    capacity: usize,
) -> Result<WinningFamily, WinsetError> {
    assert!(t >= 1);
    if t == 1 {
        return enumerate_h_copies(n, h, capacity);
    }
    let universe = n * (n - 1) / 2;
    if h.vertex_count() > n || h.vertex_count() < 3 {
        return WinningFamily::from_hyperedges(universe, std::iter::empty(), capacity);
    }
    // every copy as (vertex set mask, edge ids)
    let mut copies: Vec<(u128, Vec<Element>)> = Vec::new();
    for verts in combinations(n, h.vertex_count()) {
        let mask: u128 = verts.iter().fold(0u128, |m, &v| m | 1 << v);
        let mut local = Vec::new();
        copies_on_vertices(n, h, &verts, &mut local);
        for e in local {
            copies.push((mask, e));
        }
    }
    let mut unions: HashSet<Vec<Element>> = HashSet::new();
    // a t-set of copies has a common 3-set iff all contain some 3-subset S
    for s in combinations(n, 3) {
        let smask: u128 = s.iter().fold(0u128, |m, &v| m | 1 << v);
        let with_s: Vec<usize> = copies
            .iter()
            .enumerate()
            .filter(|(_, (m, _))| m & smask == smask)
            .map(|(i, _)| i)
            .collect();
        if with_s.len() < t {
            continue;
        }
        for pick in combinations(with_s.len(), t) {
            let mut union: Vec<Element> = Vec::new();
            for &pi in &pick {
                union.extend_from_slice(&copies[with_s[pi]].1);
            }
            union.sort_unstable();
            union.dedup();
            unions.insert(union);
            if unions.len() * 2 > capacity {
                return Err(WinsetError::Capacity(format!(
                    "cluster family exceeds {capacity} stored elements"
                )));
            }
        }
    }
    let mut list: Vec<Vec<Element>> = unions.into_iter().collect();
    list.sort_unstable();
    WinningFamily::from_hyperedges(universe, list, capacity)
}

/// Simple t-fans: families of t distinct H-bar subgraphs sharing a common
/// designated pair {v,w} and intersecting in exactly those two vertices.
pub fn enumerate_simple_fans(
    n: usize,
    h: &PatternGraph,
    t: usize,
    capacity: usize,
) -> Result<WinningFamily, WinsetError> {
    assert!(t >= 1);
    let universe = n * (n - 1) / 2;
    let classes = hbar_graphs(h)?;
    let k = h.vertex_count();
    if k > n {
        return WinningFamily::from_hyperedges(universe, std::iter::empty(), capacity);
    }
    // fans are keyed by (designated pair, union): distinct fans over
    // different pairs may share the same element union
    let mut fans: Vec<Vec<Element>> = Vec::new();
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    for v in 0..n {
        for w in v + 1..n {
            seen.clear();
            let mut members: HashSet<(u128, Vec<Element>)> = HashSet::new();
            for class in &classes {
                collect_hbar_embeddings(n, class, (v, w), &mut members);
            }
            let members: Vec<(u128, Vec<Element>)> = {
                let mut m: Vec<_> = members.into_iter().collect();
                m.sort_unstable();
                m
            };
            if members.len() < t {
                continue;
            }
            let pair_mask: u128 = (1u128 << v) | (1u128 << w);
            for pick in combinations(members.len(), t) {
                if t >= 2 {
                    let inter = pick
                        .iter()
                        .fold(!0u128, |acc, &i| acc & members[i].0);
                    if inter != pair_mask {
                        continue;
                    }
                }
                let mut union: Vec<Element> = Vec::new();
                for &i in &pick {
                    union.extend_from_slice(&members[i].1);
                }
                union.sort_unstable();
                union.dedup();
                if seen.insert(union.clone()) {
                    fans.push(union);
                }
                if fans.len() * (k * k) > capacity {
                    return Err(WinsetError::Capacity(format!(
                        "simple-fan family exceeds {capacity} stored elements"
                    )));
                }
            }
        }
    }
    WinningFamily::from_hyperedges_keep_duplicates(universe, fans, capacity)
}

/// Embeddings of an H-bar class into K_n with the designated pair mapped
/// onto {v,w}.
fn collect_hbar_embeddings(
    n: usize,
    class: &HbarGraph,
    pair: (usize, usize),
    out: &mut HashSet<(u128, Vec<Element>)>,
) {
    let k = class.pattern.vertex_count();
    let (pv, pw) = class.pair;
    let others: Vec<usize> = (0..k).filter(|&x| x != pv && x != pw).collect();
    let free: Vec<usize> = (0..n).filter(|&x| x != pair.0 && x != pair.1).collect();
    if free.len() < others.len() {
        return;
    }
    // choose an ordered injection of `others` into `free`
    for subset in combinations(free.len(), others.len()) {
        let chosen: Vec<usize> = subset.iter().map(|&i| free[i]).collect();
        for_each_permutation(others.len(), |perm| {
            // both orientations of the designated pair
            for &(a, b) in &[(pair.0, pair.1), (pair.1, pair.0)] {
                let mut map = vec![usize::MAX; k];
                map[pv] = a;
                map[pw] = b;
                for (oi, &ov) in others.iter().enumerate() {
                    map[ov] = chosen[perm[oi]];
                }
                let mut ids: Vec<Element> = class
                    .pattern
                    .edges()
                    .iter()
                    .map(|&(x, y)| {
                        let (p, q) = (map[x], map[y]);
                        encode_pair(n, p.min(q), p.max(q))
                    })
                    .collect();
                ids.sort_unstable();
                let mask: u128 = map.iter().fold(0u128, |m, &v| m | 1 << v);
                out.insert((mask, ids));
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_copy_counts_small() {
        let k3 = PatternGraph::complete(3);
        assert_eq!(
            enumerate_h_copies(4, &k3, DEFAULT_FAMILY_CAPACITY).unwrap().len(),
            4
        );
        assert_eq!(
            enumerate_h_copies(5, &k3, DEFAULT_FAMILY_CAPACITY).unwrap().len(),
            10
        );
        let k4 = PatternGraph::complete(4);
        let fam = enumerate_h_copies(6, &k4, DEFAULT_FAMILY_CAPACITY).unwrap();
        assert_eq!(fam.len(), 15);
        assert!(fam.hyperedges().all(|h| h.len() == 6));
    }

    #[test]
    fn h_copies_smaller_than_pattern_is_empty() {
        let k4 = PatternGraph::complete(4);
        assert!(enumerate_h_copies(3, &k4, DEFAULT_FAMILY_CAPACITY)
            .unwrap()
            .is_empty());
    }

    /// Brute-force oracle: count subsets of edges of K_n isomorphic to H by
    /// enumerating all injections on every vertex subset.
    fn brute_copy_count(n: usize, h: &PatternGraph) -> usize {
        let mut seen = HashSet::new();
        for verts in combinations(n, h.vertex_count()) {
            for_each_permutation(h.vertex_count(), |perm| {
                let mut ids: Vec<Element> = h
                    .edges()
                    .iter()
                    .map(|&(u, v)| {
                        let (a, b) = (verts[perm[u]], verts[perm[v]]);
                        encode_pair(n, a.min(b), a.max(b))
                    })
                    .collect();
                ids.sort_unstable();
                seen.insert(ids);
            });
        }
        seen.len()
    }

    #[test]
    fn copy_counts_match_brute_force() {
        for h in [
            PatternGraph::complete(3),
            PatternGraph::complete(4),
            PatternGraph::complete_minus_edge(4),
            PatternGraph::path(3),
        ] {
            for n in 3..=7 {
                let fam = enumerate_h_copies(n, &h, DEFAULT_FAMILY_CAPACITY).unwrap();
                assert_eq!(fam.len(), brute_copy_count(n, &h), "H={h} n={n}");
            }
        }
    }

    #[test]
    fn m2_values() {
        let (r, sub) = m2_density(&PatternGraph::complete(3)).unwrap();
        assert_eq!(r, Ratio::new(2, 1));
        assert_eq!(sub.vertex_count(), 3);
        let (r, sub) = m2_density(&PatternGraph::complete(4)).unwrap();
        assert_eq!(r, Ratio::new(5, 2));
        assert_eq!(sub.vertex_count(), 4); // maximal at H itself
        // K_{r+1}^- for r=4: (r+2)/2 - 1/(r-1) = 3 - 1/3 = 8/3
        let (r, _) = m2_density(&PatternGraph::complete_minus_edge(5)).unwrap();
        assert_eq!(r, Ratio::new(8, 3));
    }

    #[test]
    fn m2_closed_form_for_cliques() {
        // m2(K_r) = (r+1)/2 for r >= 3
        for r in 3..=6 {
            let (d, sub) = m2_density(&PatternGraph::complete(r)).unwrap();
            assert_eq!(d, Ratio::new(r as i64 + 1, 2));
            assert_eq!(sub.vertex_count(), r);
        }
    }

    #[test]
    fn m2_degenerate_errors() {
        assert!(m2_density(&PatternGraph::path(2)).is_err());
        // one edge plus an isolated vertex: no subgraph with 2 edges
        let h = PatternGraph::new(3, vec![(0, 1)]).unwrap();
        assert!(m2_density(&h).is_err());
    }

    #[test]
    fn hbar_classes() {
        let k3 = PatternGraph::complete(3);
        let classes = hbar_graphs(&k3).unwrap();
        assert_eq!(classes.len(), 1); // the cherry
        let k4 = PatternGraph::complete(4);
        assert_eq!(hbar_graphs(&k4).unwrap().len(), 1); // K4 minus an edge
    }

    /// Brute-force oracle for H-bar classes: every labeled graph F on v(H)
    /// vertices together with every non-edge whose addition gives H.
    fn brute_hbar_class_count(h: &PatternGraph) -> usize {
        let k = h.vertex_count();
        let pairs = k * (k - 1) / 2;
        let h_mask = h.canonical_mask();
        let mut classes = HashSet::new();
        for mask in 0u32..(1 << pairs) {
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 0..k {
                for v in u + 1..k {
                    if mask >> idx & 1 == 1 {
                        edges.push((u, v));
                    }
                    idx += 1;
                }
            }
            let f = PatternGraph::new(k, edges).unwrap();
            for u in 0..k {
                for v in u + 1..k {
                    if f.has_edge(u, v) {
                        continue;
                    }
                    let mut plus = f.edges().to_vec();
                    plus.push((u, v));
                    if PatternGraph::new(k, plus).unwrap().canonical_mask() == h_mask {
                        classes.insert(canonical_with_pair(&f, (u, v)));
                    }
                }
            }
        }
        classes.len()
    }

    #[test]
    fn hbar_classes_match_brute_force() {
        for h in [
            PatternGraph::complete(3),
            PatternGraph::complete(4),
            PatternGraph::path(3),
            PatternGraph::path(4),
            PatternGraph::complete_minus_edge(4),
        ] {
            assert_eq!(
                hbar_graphs(&h).unwrap().len(),
                brute_hbar_class_count(&h),
                "H={h}"
            );
        }
    }

    #[test]
    fn cluster_counts() {
        let k3 = PatternGraph::complete(3);
        // t=1 reduces to plain copies
        assert_eq!(
            enumerate_clusters(4, &k3, 1, DEFAULT_FAMILY_CAPACITY).unwrap().len(),
            4
        );
        // distinct triangles on 4 vertices share at most 2 vertices
        assert!(enumerate_clusters(4, &k3, 2, DEFAULT_FAMILY_CAPACITY)
            .unwrap()
            .is_empty());
        // pairs of K_4's in K_5 sharing 3 vertices
        let k4 = PatternGraph::complete(4);
        assert_eq!(
            enumerate_clusters(5, &k4, 2, DEFAULT_FAMILY_CAPACITY).unwrap().len(),
            10
        );
    }

    #[test]
    fn simple_fan_counts() {
        let k3 = PatternGraph::complete(3);
        // 1-fans of K3 are the cherries: n * C(n-1, 2)... per pair {v,w}
        // there are n-2 cherries, so C(n,2)*(n-2)... on K4: 6*2 = 12
        let fans1 = enumerate_simple_fans(4, &k3, 1, DEFAULT_FAMILY_CAPACITY).unwrap();
        assert_eq!(fans1.len(), 12);
        assert!(fans1.hyperedges().all(|h| h.len() == 2));
        // pairs of cherries over the same endpoints, n=4: C(4,2) * C(2,2)
        let fans2 = enumerate_simple_fans(4, &k3, 2, DEFAULT_FAMILY_CAPACITY).unwrap();
        assert_eq!(fans2.len(), 6);
        assert!(fans2.hyperedges().all(|h| h.len() == 4));
    }

    #[test]
    fn capacity_is_enforced() {
        let k3 = PatternGraph::complete(3);
        assert!(matches!(
            enumerate_h_copies(10, &k3, 8),
            Err(WinsetError::Capacity(_))
        ));
    }

    #[test]
    fn pattern_names() {
        assert_eq!(PatternGraph::by_name("K3").unwrap(), PatternGraph::complete(3));
        assert_eq!(
            PatternGraph::by_name("K5minus").unwrap(),
            PatternGraph::complete_minus_edge(5)
        );
        assert_eq!(
            PatternGraph::by_name("Kminus(5)").unwrap(),
            PatternGraph::complete_minus_edge(5)
        );
        assert!(PatternGraph::by_name("Q9").is_err());
    }

    #[test]
    fn pattern_text_roundtrip() {
        let h = PatternGraph::complete_minus_edge(4);
        let parsed = PatternGraph::parse_text(&h.to_text()).unwrap();
        assert_eq!(h, parsed);
    }
}
