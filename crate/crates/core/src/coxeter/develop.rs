//! Breadth-first development of the reflection group of a spherical chamber, and the descent
//! tree used to walk infinite groups one element at a time.

use super::model::{Model, M3, V3};
use super::realize::{realize_chamber, PolygonRealization, Realization};
use crate::error::{Error, Result};
use crate::polar_data::{Kappa, PolarData};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
pub struct DevelopOptions {
    pub max_elems: usize,
    pub tolerance: f64,
}

impl Default for DevelopOptions {
    fn default() -> Self {
        DevelopOptions { max_elems: 100_000, tolerance: 1e-7 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DevelopStatus {
    ClosedFinite(usize),
    BudgetExhausted,
    InfiniteCertified,
}

#[derive(Clone, Debug)]
pub struct Element {
    pub word: Vec<usize>,
    pub matrix: M3,
}

#[derive(Clone, Debug)]
pub struct Development {
    pub realization: Realization,
    pub elements: Vec<Element>,
    pub status: DevelopStatus,
    /// Number of elements with odd word length (orientation reversing).
    pub odd: usize,
}

impl Development {
    pub fn order(&self) -> Option<usize> {
        match self.status {
            DevelopStatus::ClosedFinite(n) => Some(n),
            _ => None,
        }
    }

    /// Text dump: a header, then one line per element `word<TAB>m00 m01 ... m22`, words as
    /// dot-separated side indices and `e` for the identity.
    pub fn dump(&self) -> String {
        let mut out = String::from("# polaris development v1\n");
        let model = self.realization.polygon().map(|p| format!("{:?}", p.model).to_lowercase());
        out.push_str(&format!("# model {}\n", model.unwrap_or_else(|| "interval".into())));
        let status = match self.status {
            DevelopStatus::ClosedFinite(n) => format!("closed-finite {n}"),
            DevelopStatus::BudgetExhausted => "budget-exhausted".into(),
            DevelopStatus::InfiniteCertified => "infinite-certified".into(),
        };
        out.push_str(&format!("# status {status}\n"));
        for e in &self.elements {
            out.push_str(&format_word(&e.word));
            for i in 0..3 {
                for j in 0..3 {
                    out.push_str(&format!("{}{:.12}", if i + j == 0 { '\t' } else { ' ' }, e.matrix[(i, j)] + 0.0));
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn format_word(w: &[usize]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

pub fn word_matrix(p: &PolygonRealization, word: &[usize]) -> M3 {
    word.iter().fold(M3::identity(), |g, &s| g * p.reflections[s])
}

/// Quantized-grid store of matrices identified up to a max-abs tolerance.
struct MatrixStore {
    tol: f64,
    cell: f64,
    buckets: HashMap<[i64; 9], Vec<usize>>,
    items: Vec<M3>,
}

impl MatrixStore {
    fn new(tol: f64) -> Self {
        MatrixStore { tol, cell: 16.0 * tol, buckets: HashMap::new(), items: Vec::new() }
    }

    fn key(&self, m: &M3) -> [i64; 9] {
        let mut k = [0i64; 9];
        for (i, x) in m.iter().enumerate() {
            k[i] = (x / self.cell).floor() as i64;
        }
        k
    }

    fn find(&self, m: &M3) -> Option<usize> {
        let base = self.key(m);
        let mut alts: Vec<(usize, i64)> = Vec::new();
        for (i, x) in m.iter().enumerate() {
            let frac = x / self.cell - base[i] as f64;
            if frac * self.cell < self.tol {
                alts.push((i, -1));
            } else if (1.0 - frac) * self.cell < self.tol {
                alts.push((i, 1));
            }
        }
        for mask in 0u32..(1 << alts.len()) {
            let mut key = base;
            for (b, (i, d)) in alts.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    key[*i] += d;
                }
            }
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    if (self.items[id] - m).abs().max() <= self.tol {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, m: M3) -> usize {
        let id = self.items.len();
        let key = self.key(&m);
        self.buckets.entry(key).or_default().push(id);
        self.items.push(m);
        id
    }
}

pub fn develop(data: &PolarData, opts: &DevelopOptions) -> Result<Development> {
    let realization = realize_chamber(&data.chamber)?;
    let p = match &realization {
        Realization::Polygon(p) if p.kappa == Kappa::Positive => p.clone(),
        _ => {
            // finite iff spherical for 2D reflection groups; intervals generate D∞
            return Ok(Development {
                realization,
                elements: vec![Element { word: vec![], matrix: M3::identity() }],
                status: DevelopStatus::InfiniteCertified,
                odd: 0,
            });
        }
    };
    let mut store = MatrixStore::new(opts.tolerance);
    let mut elements = vec![Element { word: vec![], matrix: M3::identity() }];
    store.insert(M3::identity());
    let mut head = 0;
    while head < elements.len() {
        for s in 0..p.k() {
            let m = elements[head].matrix * p.reflections[s];
            if store.find(&m).is_none() {
                if elements.len() >= opts.max_elems {
                    return Err(Error::BudgetExhausted(opts.max_elems));
                }
                let mut word = elements[head].word.clone();
                word.push(s);
                store.insert(m);
                elements.push(Element { word, matrix: m });
            }
        }
        head += 1;
    }
    let n = elements.len();
    let odd = elements.iter().filter(|e| e.word.len() % 2 == 1).count();
    Ok(Development { realization, elements, status: DevelopStatus::ClosedFinite(n), odd })
}

/// One node of the descent tree: the element g is represented by `u = g⁻¹·center` and
/// `v = g⁻¹·p`, which is all that side tests and distances from `p` need.
#[derive(Clone, Copy, Debug)]
pub struct TreeNode {
    pub u: V3,
    pub v: V3,
    pub last: usize,
    pub depth: usize,
    /// Lower bound for d(p, h·C) over all h in the subtree.
    pub bound: f64,
}

/// Spanning tree of the Cayley graph in which the parent of g is g·s for the largest right
/// descent s. The child g·t exists iff t is not a descent of g and no s > t is a descent of g·t.
/// Descents are read off geometrically: s is a descent of g iff g⁻¹·center lies on the
/// negative side of wall s.
pub struct DescentTree<'a> {
    pub chamber: &'a PolygonRealization,
    pub p: V3,
}

impl<'a> DescentTree<'a> {
    pub fn new(chamber: &'a PolygonRealization, p: V3) -> Self {
        DescentTree { chamber, p }
    }

    pub fn root(&self) -> TreeNode {
        TreeNode { u: self.chamber.center, v: self.p, last: usize::MAX, depth: 0, bound: 0.0 }
    }

    pub fn children(&self, node: &TreeNode, out: &mut Vec<(usize, TreeNode)>) {
        out.clear();
        let c = self.chamber;
        let k = c.k();
        for t in 0..k {
            if node.depth > 0 && c.walls[t].value(&node.u) < 0.0 {
                continue;
            }
            let r = &c.reflections[t];
            let u = r * node.u;
            if (t + 1..k).any(|s| c.walls[s].value(&u) < 0.0) {
                continue;
            }
            let v = r * node.v;
            let wall_dist = c.walls[t].distance(c.model, &node.v);
            out.push((t, TreeNode { u, v, last: t, depth: node.depth + 1, bound: node.bound.max(wall_dist) }));
        }
    }

    /// Distance from p to g·q for the node's element g.
    pub fn distance_to_image(&self, node: &TreeNode, q: &V3) -> f64 {
        self.chamber.model.distance(&node.v, q)
    }
}

/// Visit every element whose subtree can meet the ball of radius `radius` about `p`, in
/// depth-first order, with its word. The visitor returns false to stop early.
pub fn walk_ball<F>(tree: &DescentTree, radius: f64, max_nodes: usize, mut visit: F) -> Result<usize>
where
    F: FnMut(&[usize], &TreeNode) -> bool,
{
    let mut stack: Vec<(TreeNode, usize)> = vec![(tree.root(), 0)];
    let mut word: Vec<usize> = Vec::new();
    let mut buf = Vec::new();
    let mut count = 0usize;
    while let Some((node, wlen)) = stack.pop() {
        word.truncate(wlen);
        if node.depth > 0 {
            word.push(node.last);
        }
        count += 1;
        if count > max_nodes {
            return Err(Error::BudgetExhausted(max_nodes));
        }
        if !visit(&word, &node) {
            return Ok(count);
        }
        tree.children(&node, &mut buf);
        for (_, child) in buf.iter().rev() {
            if child.bound <= radius {
                stack.push((*child, word.len()));
            }
        }
    }
    Ok(count)
}

/// Tiles g·C with d(center, g·center) ≤ radius, for rendering.
pub fn develop_ball(p: &PolygonRealization, radius: f64, max_nodes: usize) -> Result<Vec<Element>> {
    let tree = DescentTree::new(p, p.center);
    let mut out = Vec::new();
    walk_ball(&tree, radius + p.circumradius, max_nodes, |word, node| {
        if p.model.distance(&node.u, &p.center) <= radius {
            out.push(Element { word: word.to_vec(), matrix: word_matrix(p, word) });
        }
        true
    })?;
    out.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    Ok(out)
}

pub fn model_of(r: &Realization) -> Option<Model> {
    r.polygon().map(|p| p.model)
}
