use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node-spacing recipe for a radial grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpacing {
    /// `nodes[i] = i * h` with `h = r_max / (n_nodes - 1)`.
    Uniform,
    /// Cell widths grow geometrically from `h0` near the origin by `ratio`
    /// per cell, capped at `h_max`. Used for blow-up runs that must resolve
    /// scales far below the outer-region spacing.
    GeometricNearOrigin { h0: f64, ratio: f64, h_max: f64 },
}

/// Radial grid on `[0, r_max]`: strictly increasing nodes with `nodes[0] = 0`
/// and `nodes[last] = r_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    spacing: GridSpacing,
}

impl RadialGrid {
    pub fn uniform(r_max: f64, n_nodes: usize) -> Result<Self> {
        if !(r_max > 0.0) || n_nodes < 3 {
            return Err(Error::InvalidInput(format!(
                "uniform grid needs r_max > 0 and n_nodes >= 3, got r_max = {r_max}, n = {n_nodes}"
            )));
        }
        let h = r_max / (n_nodes - 1) as f64;
        let mut nodes: Vec<f64> = (0..n_nodes).map(|i| i as f64 * h).collect();
        nodes[n_nodes - 1] = r_max;
        Ok(Self { nodes, spacing: GridSpacing::Uniform })
    }

    /// Uniform grid with spacing as close to `h` as divides `r_max` evenly.
    pub fn uniform_with_spacing(r_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(r_max > h) {
            return Err(Error::InvalidInput(format!(
                "need 0 < h < r_max, got h = {h}, r_max = {r_max}"
            )));
        }
        let n = (r_max / h).round() as usize + 1;
        Self::uniform(r_max, n.max(3))
    }

    pub fn geometric_near_origin(r_max: f64, h0: f64, ratio: f64, h_max: f64) -> Result<Self> {
        if !(h0 > 0.0) || !(ratio > 1.0) || !(h_max >= h0) || !(r_max > h0) {
            return Err(Error::InvalidInput(format!(
                "geometric grid needs h0 > 0, ratio > 1, h_max >= h0, r_max > h0; \
                 got h0 = {h0}, ratio = {ratio}, h_max = {h_max}, r_max = {r_max}"
            )));
        }
        let mut nodes = vec![0.0];
        let mut h = h0;
        let mut r = 0.0;
        loop {
            r += h;
            if r >= r_max - 0.5 * h {
                nodes.push(r_max);
                break;
            }
            nodes.push(r);
            h = (h * ratio).min(h_max);
        }
        if nodes.len() < 3 {
            return Err(Error::InvalidInput("geometric grid produced fewer than 3 nodes".into()));
        }
        Ok(Self { nodes, spacing: GridSpacing::GeometricNearOrigin { h0, ratio, h_max } })
    }

    /// Wraps externally produced nodes (snapshot reload) after checking the
    /// structural invariants.
    pub fn from_raw(nodes: Vec<f64>, spacing: GridSpacing) -> Result<Self> {
        let g = Self { nodes, spacing };
        g.validate()?;
        Ok(g)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> GridSpacing {
        self.spacing
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Smallest cell width; the time step limiter for explicit evolutions.
    pub fn min_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.spacing, GridSpacing::Uniform)
    }

    /// Index of the last node `<= r` (0 if `r < 0`).
    pub fn node_at_or_below(&self, r: f64) -> usize {
        crate::numerics::find_cell(&self.nodes, r.max(0.0))
    }

    /// Sub-grid keeping nodes `0..=k`; used for windowed snapshots.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k < 2 || k >= self.nodes.len() {
            return Err(Error::InvalidInput(format!(
                "prefix index {k} out of range for grid with {} nodes",
                self.nodes.len()
            )));
        }
        Ok(Self { nodes: self.nodes[..=k].to_vec(), spacing: self.spacing })
    }

    /// Checks the structural invariants (monotone, endpoints, uniform law).
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if n < 3 {
            return Err(Error::InvalidInput("grid needs at least 3 nodes".into()));
        }
        if self.nodes[0] != 0.0 {
            return Err(Error::InvalidInput(format!("nodes[0] = {}, expected 0", self.nodes[0])));
        }
        for w in self.nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidInput(format!(
                    "nodes not strictly increasing near r = {}",
                    w[0]
                )));
            }
        }
        if let GridSpacing::Uniform = self.spacing {
            let h = self.r_max() / (n - 1) as f64;
            for (i, &r) in self.nodes.iter().enumerate() {
                let expect = i as f64 * h;
                if (r - expect).abs() > 4.0 * f64::EPSILON * expect.max(h) {
                    return Err(Error::InvalidInput(format!(
                        "uniform grid violates nodes[i] = i h at i = {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}
