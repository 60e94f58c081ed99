//! Hypercube decomposition of the root domain `[-1, 1]^d`.
//!
//! The root domain carries the uniform probability measure with density
//! `2^-d`. Elements are axis-aligned boxes with half-open bounds `[a, b)`;
//! the closing edge `x = 1` of the root domain belongs to the last element in
//! each dimension, so every point of the closed root domain lies in exactly
//! one live element.
//!
//! The same mesh type serves the one-dimensional physical domain of the
//! Burgers solver, where "probability" reads as half the element length.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::io::fmt_f64;

/// Stable identifier of an element. Ids are never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An axis-aligned box of the decomposed domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub id: ElementId,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Number of times each dimension has been bisected since the initial mesh.
    pub depth: Vec<u32>,
    pub parent: Option<ElementId>,
}

impl Element {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    /// Probability mass under the uniform measure on `[-1, 1]^d`.
    pub fn probability(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(a, b)| (b - a) / 2.0).product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Half-open containment, closed on the edge `x_i = 1` of the root domain.
    pub fn contains(&self, point: &[f64]) -> bool {
        point.iter().enumerate().all(|(i, &x)| {
            let (a, b) = (self.lower[i], self.upper[i]);
            (a <= x && x < b) || (x == b && b == 1.0)
        })
    }

    /// Maps global coordinates inside the element to local coordinates in `[-1, 1]^d`.
    pub fn to_local(&self, global: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; global.len()];
        self.to_local_into(global, &mut out);
        out
    }

    pub fn to_local_into(&self, global: &[f64], out: &mut [f64]) {
        for i in 0..global.len() {
            let half = 0.5 * (self.upper[i] - self.lower[i]);
            let mid = 0.5 * (self.upper[i] + self.lower[i]);
            out[i] = (global[i] - mid) / half;
        }
    }

    /// Maps local coordinates in `[-1, 1]^d` to global coordinates.
    pub fn to_global(&self, local: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; local.len()];
        self.to_global_into(local, &mut out);
        out
    }

    pub fn to_global_into(&self, local: &[f64], out: &mut [f64]) {
        for i in 0..local.len() {
            let half = 0.5 * (self.upper[i] - self.lower[i]);
            let mid = 0.5 * (self.upper[i] + self.lower[i]);
            out[i] = half * local[i] + mid;
        }
    }
}

/// One bisection event.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitEvent {
    pub time: f64,
    pub parent: ElementId,
    /// Zero-based dimensions that were bisected.
    pub dims: Vec<usize>,
    pub children: Vec<ElementId>,
}

/// The set of live elements together with the split log.
#[derive(Debug, Clone)]
pub struct ElementMesh {
    dim: usize,
    elements: BTreeMap<ElementId, Element>,
    next_id: usize,
    history: Vec<SplitEvent>,
}

impl ElementMesh {
    /// Tiles `[-1, 1]^d` with `counts[i]` congruent slabs along dimension `i`.
    pub fn decompose_uniform(counts: &[usize]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidArgument(format!(
                "element count along dimension {} must be positive",
                i + 1
            )));
        }
        let dim = counts.len();
        let edge = |n: usize, k: usize| -> f64 {
            if k == n {
                1.0
            } else {
                -1.0 + 2.0 * k as f64 / n as f64
            }
        };
        let total: usize = counts.iter().product();
        let mut elements = BTreeMap::new();
        for flat in 0..total {
            let mut rem = flat;
            let mut lower = Vec::with_capacity(dim);
            let mut upper = Vec::with_capacity(dim);
            for &n in counts {
                let k = rem % n;
                rem /= n;
                lower.push(edge(n, k));
                upper.push(edge(n, k + 1));
            }
            let id = ElementId(flat);
            elements.insert(
                id,
                Element {
                    id,
                    lower,
                    upper,
                    depth: vec![0; dim],
                    parent: None,
                },
            );
        }
        Ok(Self {
            dim,
            elements,
            next_id: total,
            history: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Live elements in id order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.elements.values()
    }

    pub fn ids(&self) -> Vec<ElementId> {
        self.elements.keys().copied().collect()
    }

    pub fn get(&self, id: ElementId) -> Option<&Element> {
        self.elements.get(&id)
    }

    pub fn history(&self) -> &[SplitEvent] {
        &self.history
    }

    pub fn total_probability(&self) -> f64 {
        self.elements.values().map(Element::probability).sum()
    }

    /// Finds the unique live element containing `point`.
    pub fn locate(&self, point: &[f64]) -> Result<ElementId> {
        if point.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, mesh dimension is {}",
                point.len(),
                self.dim
            )));
        }
        if point.iter().any(|x| !(-1.0..=1.0).contains(x)) {
            return Err(Error::OutOfDomain {
                point: point.to_vec(),
                dim: self.dim,
            });
        }
        self.elements
            .values()
            .find(|e| e.contains(point))
            .map(|e| e.id)
            .ok_or_else(|| Error::Validation(format!("no live element contains {point:?}; mesh is corrupt")))
    }

    /// Bisects element `id` at the midpoint of each dimension in `dims`
    /// (zero-based), retiring it in favour of `2^|dims|` children. Children are
    /// enumerated with the first listed dimension varying fastest.
    pub fn split_element(&mut self, id: ElementId, dims: &[usize], time: f64) -> Result<Vec<ElementId>> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("no split dimensions given".into()));
        }
        let mut dims = dims.to_vec();
        dims.sort_unstable();
        dims.dedup();
        if let Some(&bad) = dims.iter().find(|&&i| i >= self.dim) {
            return Err(Error::InvalidArgument(format!(
                "split dimension {bad} out of range for d = {}",
                self.dim
            )));
        }
        let parent = self.elements.remove(&id).ok_or(Error::StaleId(id))?;
        let mut children = Vec::with_capacity(1 << dims.len());
        for mask in 0..(1usize << dims.len()) {
            let mut child = Element {
                id: ElementId(self.next_id),
                lower: parent.lower.clone(),
                upper: parent.upper.clone(),
                depth: parent.depth.clone(),
                parent: Some(id),
            };
            self.next_id += 1;
            for (bit, &i) in dims.iter().enumerate() {
                let mid = 0.5 * (parent.lower[i] + parent.upper[i]);
                if mask >> bit & 1 == 0 {
                    child.upper[i] = mid;
                } else {
                    child.lower[i] = mid;
                }
                child.depth[i] += 1;
            }
            children.push(child.id);
            self.elements.insert(child.id, child);
        }
        self.history.push(SplitEvent {
            time,
            parent: id,
            dims,
            children: children.clone(),
        });
        Ok(children)
    }

    /// Number of bisections performed along each dimension so far.
    pub fn split_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim];
        for ev in &self.history {
            for &i in &ev.dims {
                counts[i] += 1;
            }
        }
        counts
    }

    /// Weighted sum `Σ_k Prob(B_k) · m_k` of per-element conditional moments.
    pub fn assemble_moment(&self, conditional: &BTreeMap<ElementId, f64>) -> Result<f64> {
        let mut total = 0.0;
        for e in self.elements.values() {
            let m = conditional
                .get(&e.id)
                .ok_or_else(|| Error::IncompleteInput(format!("no conditional moment for element {}", e.id)))?;
            total += e.probability() * m;
        }
        Ok(total)
    }

    /// Writes one CSV row per live element: id, bounds per dimension,
    /// probability, depth per dimension.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = vec!["id".to_string()];
        for i in 1..=self.dim {
            header.push(format!("a{i}"));
            header.push(format!("b{i}"));
        }
        header.push("probability".into());
        for i in 1..=self.dim {
            header.push(format!("depth{i}"));
        }
        writeln!(w, "{}", header.join(","))?;
        for e in self.elements.values() {
            let mut row = vec![e.id.to_string()];
            for i in 0..self.dim {
                row.push(fmt_f64(e.lower[i]));
                row.push(fmt_f64(e.upper[i]));
            }
            row.push(fmt_f64(e.probability()));
            row.extend(e.depth.iter().map(u32::to_string));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}
