use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpacing, RadialGrid};
use crate::target::TargetGeometry;

/// Tolerance for the axis-regularity invariant `|psi(0) - m C*| < 1e-9`.
pub const AXIS_TOL: f64 = 1e-9;

/// Sampled pair `(psi, psi_t)` on a radial grid at time `t`, for a given
/// equivariance index and target geometry.
#[derive(Clone, Debug)]
pub struct FieldState {
    pub grid: Arc<RadialGrid>,
    pub psi: Vec<f64>,
    pub psidot: Vec<f64>,
    pub t: f64,
    pub ell: u32,
    pub target: TargetGeometry,
}

impl FieldState {
    pub fn new(
        grid: Arc<RadialGrid>,
        psi: Vec<f64>,
        psidot: Vec<f64>,
        t: f64,
        ell: u32,
        target: TargetGeometry,
    ) -> Result<Self> {
        let state = Self { grid, psi, psidot, t, ell, target };
        state.validate()?;
        Ok(state)
    }

    /// Zero state on the given grid.
    pub fn zero(grid: Arc<RadialGrid>, ell: u32, target: TargetGeometry) -> Self {
        let n = grid.n_nodes();
        Self { grid, psi: vec![0.0; n], psidot: vec![0.0; n], t: 0.0, ell, target }
    }

    /// Builds a state by sampling closures for `psi` and `psi_t`.
    pub fn from_fn(
        grid: Arc<RadialGrid>,
        ell: u32,
        target: TargetGeometry,
        psi: impl Fn(f64) -> f64,
        psidot: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let p: Vec<f64> = grid.nodes().iter().map(|&r| psi(r)).collect();
        let pd: Vec<f64> = grid.nodes().iter().map(|&r| psidot(r)).collect();
        Self::new(grid, p, pd, 0.0, ell, target)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid.n_nodes();
        if self.psi.len() != n || self.psidot.len() != n {
            return Err(Error::InvalidInput(format!(
                "field arrays ({}, {}) do not match grid with {n} nodes",
                self.psi.len(),
                self.psidot.len()
            )));
        }
        if self.ell == 0 {
            return Err(Error::InvalidInput("equivariance index must be positive".into()));
        }
        if self.psi.iter().chain(self.psidot.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample("field state"));
        }
        let c = self.target.c_star();
        let m = (self.psi[0] / c).round();
        if (self.psi[0] - m * c).abs() >= AXIS_TOL {
            return Err(Error::InvalidInput(format!(
                "axis value psi(0) = {} is not within {AXIS_TOL} of a multiple of C* = {c}",
                self.psi[0]
            )));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.grid.n_nodes()
    }

    /// Axis winding index `m = round(psi(0) / C*)`.
    pub fn axis_multiple(&self) -> i64 {
        (self.psi[0] / self.target.c_star()).round() as i64
    }

    /// Pointwise supremum of `|psi|` over the grid.
    pub fn max_abs_psi(&self) -> f64 {
        self.psi.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// State with `psi` shifted by a constant (moves between `H_{m,n}` classes).
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        let psi = self.psi.iter().map(|&v| v + delta).collect();
        Self::new(
            self.grid.clone(),
            psi,
            self.psidot.clone(),
            self.t,
            self.ell,
            self.target.clone(),
        )
    }

    /// Pointwise difference `self - other` of compatible states.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let psi = self.psi.iter().zip(&other.psi).map(|(a, b)| a - b).collect();
        let psidot = self.psidot.iter().zip(&other.psidot).map(|(a, b)| a - b).collect();
        Self::new(self.grid.clone(), psi, psidot, self.t, self.ell, self.target.clone())
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid.nodes() != other.grid.nodes() {
            return Err(Error::InvalidInput("states live on different grids".into()));
        }
        if self.ell != other.ell || !self.target.compatible(&other.target) {
            return Err(Error::InvalidInput(
                "states have different equivariance index or target".into(),
            ));
        }
        Ok(())
    }

    /// Largest radius at which the state deviates from its outer boundary
    /// value (in `psi`) or carries velocity, above `tol`. Used by the
    /// finite-speed-of-propagation guard.
    pub fn support_radius(&self, tol: f64) -> f64 {
        let n = self.n_nodes();
        let pin = self.psi[n - 1];
        for i in (0..n).rev() {
            if (self.psi[i] - pin).abs() > tol || self.psidot[i].abs() > tol {
                return self.grid.nodes()[i];
            }
        }
        0.0
    }

    /// Writes the snapshot CSV (`r,psi,psidot`) plus its JSON sidecar, which
    /// carries `{t, ell, target, r_max, n_nodes}`.
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        let mut body = String::with_capacity(self.n_nodes() * 32);
        body.push_str("r,psi,psidot\n");
        for i in 0..self.n_nodes() {
            let _ = writeln!(body, "{},{},{}", self.grid.nodes()[i], self.psi[i], self.psidot[i]);
        }
        fs::write(csv_path, body)?;
        let sidecar = SnapshotMeta {
            t: self.t,
            ell: self.ell,
            target: self.target.kind_str().to_string(),
            r_max: self.grid.r_max(),
            n_nodes: self.n_nodes(),
        };
        fs::write(sidecar_path(csv_path), serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }

    /// Reads a snapshot written by [`FieldState::save`]. The caller supplies
    /// the target geometry; the sidecar kind must match it.
    pub fn load(csv_path: &Path, target: TargetGeometry) -> Result<Self> {
        let meta: SnapshotMeta = serde_json::from_str(&fs::read_to_string(sidecar_path(csv_path))?)?;
        if meta.target != target.kind_str() {
            return Err(Error::SnapshotFormat(format!(
                "sidecar target '{}' does not match supplied '{}'",
                meta.target,
                target.kind_str()
            )));
        }
        let text = fs::read_to_string(csv_path)?;
        let mut lines = text.lines();
        match lines.next() {
            Some("r,psi,psidot") => {}
            other => {
                return Err(Error::SnapshotFormat(format!(
                    "bad snapshot header: {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut nodes = Vec::new();
        let mut psi = Vec::new();
        let mut psidot = Vec::new();
        for (ln, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let mut next = |name: &str| -> Result<f64> {
                cols.next()
                    .ok_or_else(|| Error::SnapshotFormat(format!("row {ln}: missing {name}")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::SnapshotFormat(format!("row {ln}: {e}")))
            };
            nodes.push(next("r")?);
            psi.push(next("psi")?);
            psidot.push(next("psidot")?);
        }
        if nodes.len() != meta.n_nodes {
            return Err(Error::SnapshotFormat(format!(
                "sidecar claims {} nodes, CSV has {}",
                meta.n_nodes,
                nodes.len()
            )));
        }
        let grid = grid_from_nodes(nodes)?;
        let mut state = Self::new(Arc::new(grid), psi, psidot, meta.t, meta.ell, target)?;
        state.t = meta.t;
        Ok(state)
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotMeta {
    t: f64,
    ell: u32,
    target: String,
    r_max: f64,
    n_nodes: usize,
}

fn sidecar_path(csv_path: &Path) -> std::path::PathBuf {
    csv_path.with_extension("json")
}

/// Reconstructs a grid from raw nodes, inferring the spacing descriptor.
pub fn grid_from_nodes(nodes: Vec<f64>) -> Result<RadialGrid> {
    if nodes.len() < 3 {
        return Err(Error::SnapshotFormat("snapshot has fewer than 3 nodes".into()));
    }
    let n = nodes.len();
    let r_max = nodes[n - 1];
    let h = r_max / (n - 1) as f64;
    let uniform = nodes
        .iter()
        .enumerate()
        .all(|(i, &r)| (r - i as f64 * h).abs() <= 4.0 * f64::EPSILON * (i as f64 * h).max(h));
    if uniform {
        let mut g = RadialGrid::uniform(r_max, n)?;
        // keep the exact stored node values
        if g.nodes() != nodes.as_slice() {
            g = rebuild_with(nodes, GridSpacing::Uniform)?;
        }
        Ok(g)
    } else {
        let h0 = nodes[1] - nodes[0];
        let h1 = nodes[2] - nodes[1];
        let ratio = (h1 / h0).max(1.0 + 1e-12);
        let h_max = nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        rebuild_with(nodes, GridSpacing::GeometricNearOrigin { h0, ratio, h_max })
    }
}

fn rebuild_with(nodes: Vec<f64>, spacing: GridSpacing) -> Result<RadialGrid> {
    RadialGrid::from_raw(nodes, spacing)
}

/// Localized energy account over a radial interval; `total` is the exact sum
/// of the three parts by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    pub total: f64,
    pub kinetic: f64,
    pub gradient: f64,
    pub potential: f64,
    pub interval: (f64, f64),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_state() -> FieldState {
        let grid = Arc::new(RadialGrid::uniform(20.0, 4001).unwrap());
        FieldState::from_fn(
            grid,
            1,
            TargetGeometry::sphere(),
            |r| 2.0 * r.atan(),
            |_| 0.0,
        )
        .unwrap()
    }

    #[test]
    fn axis_regularity_enforced() {
        let grid = Arc::new(RadialGrid::uniform(5.0, 101).unwrap());
        let bad = FieldState::new(
            grid.clone(),
            vec![0.5; 101],
            vec![0.0; 101],
            0.0,
            1,
            TargetGeometry::sphere(),
        );
        assert!(bad.is_err());
        let good = FieldState::new(
            grid,
            vec![std::f64::consts::PI; 101],
            vec![0.0; 101],
            0.0,
            1,
            TargetGeometry::sphere(),
        );
        assert!(good.is_ok());
    }

    #[test]
    fn snapshot_roundtrip() {
        let state = sphere_state();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap_0.csv");
        state.save(&path).unwrap();
        let back = FieldState::load(&path, TargetGeometry::sphere()).unwrap();
        assert_eq!(back.psi, state.psi);
        assert_eq!(back.psidot, state.psidot);
        assert_eq!(back.grid.nodes(), state.grid.nodes());
        assert_eq!(back.t, state.t);
        assert_eq!(back.ell, 1);
    }

    #[test]
    fn load_rejects_target_mismatch() {
        let state = sphere_state();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap_0.csv");
        state.save(&path).unwrap();
        assert!(FieldState::load(&path, TargetGeometry::yang_mills()).is_err());
    }

    #[test]
    fn support_radius_sees_velocity() {
        let grid = Arc::new(RadialGrid::uniform(10.0, 1001).unwrap());
        let s = FieldState::from_fn(
            grid,
            1,
            TargetGeometry::sphere(),
            |_| 0.0,
            |r| if (r - 3.0).abs() < 1.0 { 0.5 } else { 0.0 },
        )
        .unwrap();
        let sup = s.support_radius(1e-12);
        assert!(sup > 3.9 && sup < 4.1, "support = {sup}");
    }
}
