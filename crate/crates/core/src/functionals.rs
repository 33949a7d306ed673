//! Static functionals of a sampled field state: localized energy, the
//! `H x L^2` norm pair, topological degree, the potential accumulator `G`,
//! the Bogomolny factorization and the pointwise bound.
//!
//! All integrals are composite trapezoid rules of the piecewise-linear
//! integrand, with interval endpoints interpolated on the integrand itself;
//! interval integrals are therefore exactly additive over adjacent intervals.
//! Integrands involving `1/r` or `1/r^2` take their Taylor limit at the axis
//! node, which vanishes for every regular state with `psi(0) = m C*`.

use crate::error::{Error, Result};
use crate::field::{EnergyReport, FieldState};
use crate::numerics;
use crate::target::TargetGeometry;

/// Precomputed energy densities of one state, with prefix integrals. Cheap to
/// query on many intervals; used both by the public operations and by the
/// evolution loop (scale fitting needs the position part every step).
pub struct EnergyDensity {
    pub nodes: Vec<f64>,
    kinetic: Vec<f64>,
    gradient: Vec<f64>,
    potential: Vec<f64>,
    cum_kinetic: Vec<f64>,
    cum_gradient: Vec<f64>,
    cum_potential: Vec<f64>,
}

impl EnergyDensity {
    pub fn of(state: &FieldState) -> Result<Self> {
        state.validate()?;
        let nodes = state.grid.nodes();
        let n = nodes.len();
        let psi_r = numerics::derivative(nodes, &state.psi);
        let l2 = (state.ell as f64) * (state.ell as f64);
        let mut kinetic = vec![0.0; n];
        let mut gradient = vec![0.0; n];
        let mut potential = vec![0.0; n];
        for i in 1..n {
            let r = nodes[i];
            kinetic[i] = state.psidot[i] * state.psidot[i] * r;
            gradient[i] = psi_r[i] * psi_r[i] * r;
            let g = state.target.g(state.psi[i]);
            potential[i] = l2 * g * g / r;
        }
        // node 0: psi ~ m C* + c r^l makes every density * r vanish
        let cum_kinetic = numerics::cumulative_trapezoid(nodes, &kinetic);
        let cum_gradient = numerics::cumulative_trapezoid(nodes, &gradient);
        let cum_potential = numerics::cumulative_trapezoid(nodes, &potential);
        Ok(Self {
            nodes: nodes.to_vec(),
            kinetic,
            gradient,
            potential,
            cum_kinetic,
            cum_gradient,
            cum_potential,
        })
    }

    pub fn report(&self, a: f64, b: f64) -> EnergyReport {
        let kinetic =
            numerics::integral_between(&self.nodes, &self.kinetic, &self.cum_kinetic, a, b);
        let gradient =
            numerics::integral_between(&self.nodes, &self.gradient, &self.cum_gradient, a, b);
        let potential =
            numerics::integral_between(&self.nodes, &self.potential, &self.cum_potential, a, b);
        EnergyReport { total: kinetic + gradient + potential, kinetic, gradient, potential, interval: (a, b) }
    }

    /// Position-only interior energy `E_0^lambda(psi, 0)`, nondecreasing in `lambda`.
    pub fn position_energy_below(&self, lambda: f64) -> f64 {
        numerics::antiderivative_at(&self.nodes, &self.gradient, &self.cum_gradient, lambda)
            + numerics::antiderivative_at(&self.nodes, &self.potential, &self.cum_potential, lambda)
    }

    pub fn total(&self) -> f64 {
        let n = self.nodes.len() - 1;
        self.cum_kinetic[n] + self.cum_gradient[n] + self.cum_potential[n]
    }

    pub fn position_total(&self) -> f64 {
        let n = self.nodes.len() - 1;
        self.cum_gradient[n] + self.cum_potential[n]
    }
}

/// Localized energy `int_a^b (psi_t^2 + psi_r^2 + l^2 g^2(psi)/r^2) r dr`.
pub fn energy(state: &FieldState, a: f64, b: f64) -> Result<EnergyReport> {
    check_interval(state, a, b)?;
    Ok(EnergyDensity::of(state)?.report(a, b))
}

/// Total energy over the whole grid.
pub fn total_energy(state: &FieldState) -> Result<f64> {
    Ok(EnergyDensity::of(state)?.total())
}

/// `H x L^2` norm pair on `[a, b]`: the `H` part `(int (psi_r^2 + psi^2/r^2) r dr)^{1/2}`
/// and the `L^2` part `(int psi_t^2 r dr)^{1/2}`.
///
/// When `a = 0` the state must satisfy `psi(0) = 0`; otherwise the `H` norm
/// diverges (degree-one data has infinite `H` norm near the axis).
pub fn h_norm(state: &FieldState, a: f64, b: f64) -> Result<(f64, f64)> {
    check_interval(state, a, b)?;
    let nodes = state.grid.nodes();
    if a < nodes[1] && state.psi[0].abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "H norm from the axis requires psi(0) = 0, got {}",
            state.psi[0]
        )));
    }
    let n = nodes.len();
    let psi_r = numerics::derivative(nodes, &state.psi);
    let mut h_density = vec![0.0; n];
    let mut l2_density = vec![0.0; n];
    for i in 1..n {
        let r = nodes[i];
        let q = state.psi[i] / r;
        h_density[i] = (psi_r[i] * psi_r[i] + q * q) * r;
        l2_density[i] = state.psidot[i] * state.psidot[i] * r;
    }
    // node 0: (psi/r)^2 r -> 0 for psi(0) = 0 and psi ~ c r^l
    let cum_h = numerics::cumulative_trapezoid(nodes, &h_density);
    let cum_l2 = numerics::cumulative_trapezoid(nodes, &l2_density);
    let h2 = numerics::integral_between(nodes, &h_density, &cum_h, a, b);
    let l22 = numerics::integral_between(nodes, &l2_density, &cum_l2, a, b);
    Ok((h2.max(0.0).sqrt(), l22.max(0.0).sqrt()))
}

/// Combined `H x L^2` norm on `[a, b]`.
pub fn h_x_l2_norm(state: &FieldState, a: f64, b: f64) -> Result<f64> {
    let (h, l2) = h_norm(state, a, b)?;
    Ok((h * h + l2 * l2).sqrt())
}

/// Topological class `(m, n)` of the state: `m = round(psi(0)/C*)`,
/// `n = round(psi(r_max)/C*)`. The outer value must sit within `0.1 C*` of a
/// multiple of `C*`; otherwise the data is open-ended.
pub fn classify_degree(state: &FieldState) -> Result<(i64, i64)> {
    state.validate()?;
    let c = state.target.c_star();
    let last = state.psi[state.n_nodes() - 1];
    let n = (last / c).round();
    if (last - n * c).abs() > 0.1 * c {
        return Err(Error::OpenEndedData(format!(
            "psi(r_max) = {last} is not within 0.1 C* of a multiple of C* = {c}"
        )));
    }
    Ok((state.axis_multiple(), n as i64))
}

/// Potential accumulator `G(psi) = int_0^psi |g|` for the given target.
pub fn g_accumulate(target: &TargetGeometry, psi: f64) -> f64 {
    target.g_accumulate(psi)
}

/// The Bogomolny factorization of the energy.
#[derive(Clone, Copy, Debug)]
pub struct BogomolnySplit {
    /// `int psi_t^2 r dr`
    pub kinetic: f64,
    /// `int (psi_r - l g(psi)/r)^2 r dr`
    pub defect: f64,
    /// `2 l int_{psi(0)}^{psi(r_max)} g(rho) drho`; equals
    /// `2 l (G(psi(r_max)) - G(psi(0)))` when `g` keeps one sign on the range.
    pub topological: f64,
}

/// Factors the energy as kinetic + defect + topological. The three parts sum
/// to the total energy up to quadrature tolerance; in the degree-one class the
/// defect vanishes exactly on the harmonic map.
pub fn bogomolny_split(state: &FieldState) -> Result<BogomolnySplit> {
    state.validate()?;
    let nodes = state.grid.nodes();
    let n = nodes.len();
    let ell = state.ell as f64;
    let psi_r = numerics::derivative(nodes, &state.psi);
    let mut kin = vec![0.0; n];
    let mut defect = vec![0.0; n];
    for i in 1..n {
        let r = nodes[i];
        kin[i] = state.psidot[i] * state.psidot[i] * r;
        let d = psi_r[i] - ell * state.target.g(state.psi[i]) / r;
        defect[i] = d * d * r;
    }
    let kinetic = numerics::trapezoid(nodes, &kin);
    let defect = numerics::trapezoid(nodes, &defect);
    let topological =
        2.0 * ell * state.target.g_signed_integral(state.psi[0], state.psi[n - 1]);
    Ok(BogomolnySplit { kinetic, defect, topological })
}

/// Supremum of `|psi|` over the grid; degree-zero states below `2 E(Q)` stay
/// below `pi` (callers compare against `C*`).
pub fn pointwise_bound(state: &FieldState) -> f64 {
    state.max_abs_psi()
}

fn check_interval(state: &FieldState, a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b <= state.grid.r_max() * (1.0 + 1e-12)) {
        return Err(Error::InvalidInput(format!(
            "interval [{a}, {b}] invalid for grid with r_max = {}",
            state.grid.r_max()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::target::TargetGeometry;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn q_state(r_max: f64, n: usize) -> FieldState {
        let grid = Arc::new(RadialGrid::uniform(r_max, n).unwrap());
        FieldState::from_fn(grid, 1, TargetGeometry::sphere(), |r| 2.0 * r.atan(), |_| 0.0)
            .unwrap()
    }

    #[test]
    fn energy_of_q_with_tail_is_four() {
        let state = q_state(200.0, 100_001); // h = 2e-3
        let e = energy(&state, 0.0, 200.0).unwrap();
        let tail = 4.0 / (1.0 + 200.0_f64 * 200.0);
        assert!(
            (e.total + tail - 4.0).abs() < 1e-5,
            "E = {}, with tail {}",
            e.total,
            e.total + tail
        );
        assert_eq!(e.total, e.kinetic + e.gradient + e.potential);
    }

    #[test]
    fn energy_of_zero_state_is_zero() {
        let grid = Arc::new(RadialGrid::uniform(10.0, 201).unwrap());
        let z = FieldState::zero(grid, 1, TargetGeometry::sphere());
        assert_eq!(energy(&z, 0.0, 10.0).unwrap().total, 0.0);
    }

    #[test]
    fn half_energy_of_q_on_unit_ball() {
        // E_0^1(Q) = E(Q)/2 = 2
        let state = q_state(100.0, 200_001);
        let e = energy(&state, 0.0, 1.0).unwrap();
        assert!((e.total - 2.0).abs() < 1e-6, "E_0^1(Q) = {}", e.total);
    }

    #[test]
    fn energy_additive_over_intervals() {
        let state = q_state(50.0, 20_001);
        let whole = energy(&state, 0.2, 7.3).unwrap().total;
        let split =
            energy(&state, 0.2, 1.9).unwrap().total + energy(&state, 1.9, 7.3).unwrap().total;
        assert!((whole - split).abs() <= 1e-12 * whole.abs());
    }

    #[test]
    fn h_norm_matches_quadrature_oracle() {
        // psi = r exp(-r^2): closed-form H^2 = 1/2, checked against adaptive
        // Simpson of the analytic integrand before trusting it.
        let h2_oracle = numerics::adaptive_simpson(
            &|r: f64| {
                let e = (-r * r).exp();
                let dr = e * (1.0 - 2.0 * r * r);
                (dr * dr + e * e) * r
            },
            0.0,
            12.0,
            1e-14,
        );
        assert!((h2_oracle - 0.5).abs() < 1e-12);
        let grid = Arc::new(RadialGrid::uniform(12.0, 240_001).unwrap());
        let state = FieldState::from_fn(
            grid,
            1,
            TargetGeometry::sphere(),
            |r| r * (-r * r).exp(),
            |_| 0.0,
        )
        .unwrap();
        let (h, l2) = h_norm(&state, 0.0, 12.0).unwrap();
        assert_eq!(l2, 0.0);
        assert!((h - h2_oracle.sqrt()).abs() < 1e-8, "h = {h}");
    }

    #[test]
    fn h_norm_zero_state() {
        let grid = Arc::new(RadialGrid::uniform(5.0, 101).unwrap());
        let z = FieldState::zero(grid, 1, TargetGeometry::sphere());
        assert_eq!(h_norm(&z, 0.0, 5.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn h_norm_rejects_axis_offset() {
        let state = q_state(10.0, 1001).shifted(PI).unwrap();
        assert!(h_norm(&state, 0.0, 10.0).is_err());
        assert!(h_norm(&state, 1.0, 10.0).is_ok());
    }

    #[test]
    fn degree_zero_energy_below_h_norm_squared() {
        // Eq. relating E <= ||.||^2 for degree-zero data
        let grid = Arc::new(RadialGrid::uniform(15.0, 30_001).unwrap());
        for amp in [0.3, 0.9, 1.7] {
            let state = FieldState::from_fn(
                grid.clone(),
                1,
                TargetGeometry::sphere(),
                move |r| amp * r * (-r * r).exp(),
                move |r| 0.2 * amp * (-2.0 * (r - 1.0) * (r - 1.0)).exp(),
            )
            .unwrap();
            let e = total_energy(&state).unwrap();
            let (h, l2) = h_norm(&state, 0.0, 15.0).unwrap();
            assert!(e <= h * h + l2 * l2 + 1e-10, "E = {e}, norm^2 = {}", h * h + l2 * l2);
        }
    }

    #[test]
    fn classify_degrees() {
        let q = q_state(400.0, 40_001);
        assert_eq!(classify_degree(&q).unwrap(), (0, 1));
        let z = FieldState::zero(
            Arc::new(RadialGrid::uniform(5.0, 101).unwrap()),
            1,
            TargetGeometry::sphere(),
        );
        assert_eq!(classify_degree(&z).unwrap(), (0, 0));
        // open-ended: psi(r_max) far from any multiple of pi
        let open = q_state(1.0, 101);
        assert!(classify_degree(&open).is_err());
    }

    #[test]
    fn bogomolny_split_of_q() {
        let state = q_state(2000.0, 200_001);
        let split = bogomolny_split(&state).unwrap();
        assert_eq!(split.kinetic, 0.0);
        assert!(split.defect < 1e-8, "defect = {}", split.defect);
        let q_rmax = 2.0 * (2000.0_f64).atan();
        let expect = 2.0 * (TargetGeometry::sphere().g_accumulate(q_rmax));
        assert!((split.topological - expect).abs() < 1e-9);
        assert!((split.topological - 4.0).abs() < 3e-3); // finite-grid tail
    }

    #[test]
    fn bogomolny_lower_bound_degree_one() {
        // E - kinetic >= 4 - tol for degree-1 data with psi_t != 0
        let grid = Arc::new(RadialGrid::uniform(300.0, 60_001).unwrap());
        let state = FieldState::from_fn(
            grid,
            1,
            TargetGeometry::sphere(),
            |r| 2.0 * (1.7 * r).atan(),
            |r| 0.4 * r * (-r * r).exp(),
        )
        .unwrap();
        let split = bogomolny_split(&state).unwrap();
        let e = total_energy(&state).unwrap();
        assert!(split.kinetic > 1e-3);
        let tail = 4.0 / (1.0 + (1.7 * 300.0_f64).powi(2));
        assert!(e - split.kinetic >= 4.0 - tail - 1e-3, "E - kin = {}", e - split.kinetic);
    }

    #[test]
    fn g_bound_along_radii() {
        // |G(psi(r2)) - G(psi(r1))| <= E_{r1}^{r2}(psi,0) / 2 + tolerance
        let grid = Arc::new(RadialGrid::uniform(30.0, 12_001).unwrap());
        let target = TargetGeometry::sphere();
        let state = FieldState::from_fn(
            grid,
            1,
            target.clone(),
            |r| 1.4 * r * (-0.3 * r * r).exp() + 0.3 * (1.5 * r).sin() * (-0.1 * r).exp(),
            |_| 0.0,
        )
        .unwrap();
        let density = EnergyDensity::of(&state).unwrap();
        let nodes = state.grid.nodes();
        for (i, j) in [(10, 400), (0, 11_000), (2_000, 9_000), (300, 301)] {
            let (r1, r2) = (nodes[i], nodes[j]);
            let lhs = (target.g_accumulate(state.psi[j]) - target.g_accumulate(state.psi[i])).abs();
            let e = density.report(r1, r2).total;
            assert!(lhs <= 0.5 * e + 1e-6 * (1.0 + e), "at ({r1}, {r2}): {lhs} vs E/2 = {}", 0.5 * e);
        }
    }

    #[test]
    fn scale_invariance_of_energy() {
        let base_grid = RadialGrid::uniform(40.0, 40_001).unwrap();
        let psi = |r: f64| 1.1 * r * (-r * r).exp();
        let psidot = |r: f64| 0.5 * (-2.0 * (r - 0.7) * (r - 0.7)).exp() * r / (1.0 + r * r);
        let base = FieldState::from_fn(
            Arc::new(base_grid),
            1,
            TargetGeometry::sphere(),
            psi,
            psidot,
        )
        .unwrap();
        let e0 = total_energy(&base).unwrap();
        for lambda in [0.1_f64, 1.0, 10.0] {
            let grid = Arc::new(RadialGrid::uniform(40.0 * lambda, 40_001).unwrap());
            let scaled = FieldState::from_fn(
                grid,
                1,
                TargetGeometry::sphere(),
                |r| psi(r / lambda),
                |r| psidot(r / lambda) / lambda,
            )
            .unwrap();
            let e = total_energy(&scaled).unwrap();
            assert!((e - e0).abs() <= 1e-8 * e0, "lambda = {lambda}: {e} vs {e0}");
        }
    }

    #[test]
    fn h1_small_energy_comparison_at_alpha() {
        // Q-tail family: if E_{r0}^inf(psi,0) < 0.4 then
        // ||psi - pi||_{H(r>=r0)}^2 <= C E_{r0}^inf with the frozen C.
        let state = q_state(4000.0, 400_001);
        let density = EnergyDensity::of(&state).unwrap();
        let r_max = state.grid.r_max();
        let shifted = state.shifted(-PI).unwrap();
        for r0 in [7.0, 12.0, 40.0, 200.0] {
            let tail = 4.0 / (1.0 + r_max * r_max);
            let e = density.report(r0, r_max).total + tail;
            assert!(e < 0.4, "family member at r0 = {r0} exceeds alpha");
            let (h, _) = h_norm(&shifted, r0, r_max).unwrap();
            assert!(
                h * h <= crate::regression::H1_COMPARISON_C * e,
                "r0 = {r0}: ||psi - pi||^2 = {} vs C E = {}",
                h * h,
                crate::regression::H1_COMPARISON_C * e
            );
        }
    }
}
