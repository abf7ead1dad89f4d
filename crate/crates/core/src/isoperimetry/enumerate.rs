//! Enumeration of connected vertex sets containing an anchor.
//!
//! Redelmeier's scheme: every set is reached from a unique parent by adding a
//! vertex from the parent's "untried" frontier, and a vertex rejected at one
//! level stays excluded in later siblings, so each connected set containing
//! the anchor is produced exactly once.

use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::percolation::{Configuration, OpenEdges};

/// Largest set size the enumerator accepts.
pub const ENUMERATION_GUARD: usize = 14;

/// The graph in which sets are enumerated and boundaries are measured: the
/// window itself, its open subgraph, optionally restricted to allowed vertices.
#[derive(Clone, Copy)]
pub struct Ambient<'a> {
    window: &'a GraphWindow,
    open: Option<&'a Configuration>,
    allowed: Option<&'a [bool]>,
}

impl<'a> Ambient<'a> {
    pub fn full(window: &'a GraphWindow) -> Self {
        Ambient {
            window,
            open: None,
            allowed: None,
        }
    }

    /// Open subgraph of `config`; sets are then subsets of open clusters.
    pub fn open_subgraph(window: &'a GraphWindow, config: &'a Configuration) -> Self {
        Ambient {
            window,
            open: Some(config),
            allowed: None,
        }
    }

    /// Restricts to vertices with `allowed[v]`.
    pub fn restricted(mut self, allowed: &'a [bool]) -> Self {
        self.allowed = Some(allowed);
        self
    }

    pub fn window(&self) -> &'a GraphWindow {
        self.window
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        v < self.window.num_vertices() && self.allowed.is_none_or(|a| a[v])
    }

    #[inline]
    fn edge_present(&self, edge: usize, other: usize) -> bool {
        self.open.is_none_or(|c| c.is_open(edge)) && self.allowed.is_none_or(|a| a[other])
    }

    /// Ambient neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.window
            .neighbors(v)
            .iter()
            .filter(move |nb| self.edge_present(nb.edge, nb.vertex))
            .map(|nb| nb.vertex)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Ambient edges with exactly one endpoint in `set`; `inside` is its mask.
    pub fn boundary_size(&self, set: &[usize], inside: &[bool]) -> usize {
        set.iter()
            .map(|&u| self.neighbors(u).filter(|&w| !inside[w]).count())
            .sum()
    }
}

/// Visits every connected set of at most `max_size` vertices containing `v`.
///
/// `visit` receives the current set (anchor first) and returns whether the
/// set should be extended further; returning `false` prunes all supersets
/// reached through it. Returns the number of sets visited.
pub fn enumerate_anchored_sets<F>(
    ambient: &Ambient<'_>,
    v: usize,
    max_size: usize,
    visit: F,
) -> Result<u64>
where
    F: FnMut(&[usize]) -> bool,
{
    if max_size > ENUMERATION_GUARD {
        return Err(Error::Refused(format!(
            "anchored enumeration up to size {max_size} exceeds the guard of {ENUMERATION_GUARD}; \
             the number of connected sets grows exponentially in their size"
        )));
    }
    if !ambient.has_vertex(v) {
        return Err(Error::domain(format!(
            "anchor {v} is not a vertex of the ambient graph"
        )));
    }
    if max_size == 0 {
        return Ok(0);
    }
    let mut walker = Walker {
        ambient,
        max_size,
        seen: vec![false; ambient.window.num_vertices()],
        current: vec![v],
        visit,
        count: 1,
    };
    walker.seen[v] = true;
    if !(walker.visit)(&walker.current) || max_size == 1 {
        return Ok(1);
    }
    let mut untried = Vec::new();
    for w in ambient.neighbors(v) {
        if !walker.seen[w] {
            walker.seen[w] = true;
            untried.push(w);
        }
    }
    untried.reverse();
    walker.extend(untried);
    Ok(walker.count)
}

struct Walker<'a, 'b, F> {
    ambient: &'b Ambient<'a>,
    max_size: usize,
    seen: Vec<bool>,
    current: Vec<usize>,
    visit: F,
    count: u64,
}

impl<F: FnMut(&[usize]) -> bool> Walker<'_, '_, F> {
    fn extend(&mut self, mut untried: Vec<usize>) {
        while let Some(u) = untried.pop() {
            self.current.push(u);
            self.count += 1;
            let descend = (self.visit)(&self.current);
            if descend && self.current.len() < self.max_size {
                let mut next = untried.clone();
                let fresh: Vec<usize> = self
                    .ambient
                    .neighbors(u)
                    .filter(|&w| !self.seen[w])
                    .collect();
                for &w in fresh.iter().rev() {
                    self.seen[w] = true;
                    next.push(w);
                }
                self.extend(next);
                for &w in &fresh {
                    self.seen[w] = false;
                }
            }
            self.current.pop();
        }
    }
}
