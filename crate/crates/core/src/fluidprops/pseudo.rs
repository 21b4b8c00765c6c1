//! Analytic stand-in for a supercritical methane-like coolant.
//!
//! Heat capacity carries a `sech²` peak centred on the pseudo-critical line
//! `T_pc(p) = 190 K + 0.06 K/bar (p - 46 bar)`; enthalpy is its closed-form
//! integral, so `h` and `cp` are exactly consistent. Density falls along a
//! `tanh` step across the same line and blends into the ideal-gas value,
//! reaching it exactly at the highest tabulated temperature.

use super::PropertyTable;

const BAR: f64 = 1.0e5;

/// Parameters of the analytic pseudo-fluid. [`Default`] gives the bundled
/// methane-like fluid on a 40 x 60 grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoFluid {
    /// Specific gas constant [J/(kg·K)].
    pub gas_constant: f64,
    pub p_min_bar: f64,
    pub p_max_bar: f64,
    pub n_pressure: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub n_temperature: usize,
    /// Background heat capacity `cp0 + cp1 T` [J/(kg·K)].
    pub cp0: f64,
    pub cp1: f64,
    /// Peak heat-capacity amplitude at the reference pressure [J/(kg·K)].
    pub peak_amplitude: f64,
    /// Pressure scale of the amplitude decay [bar].
    pub peak_decay_bar: f64,
    /// Peak half-width at the reference pressure [K] and its growth [K/bar].
    pub peak_width: f64,
    pub peak_width_slope: f64,
    /// Enthalpy at `t_min` [J/kg].
    pub h_ref: f64,
}

impl Default for PseudoFluid {
    fn default() -> Self {
        PseudoFluid {
            gas_constant: 518.3,
            p_min_bar: 40.0,
            p_max_bar: 300.0,
            n_pressure: 40,
            t_min: 90.0,
            t_max: 625.0,
            n_temperature: 60,
            cp0: 2200.0,
            cp1: 2.0,
            peak_amplitude: 9000.0,
            peak_decay_bar: 50.0,
            peak_width: 6.0,
            peak_width_slope: 0.12,
            h_ref: 5.0e4,
        }
    }
}

impl PseudoFluid {
    /// Pseudo-critical temperature [K] at pressure `p` [Pa].
    pub fn t_pc(&self, p: f64) -> f64 {
        190.0 + 0.06 * (p / BAR - 46.0)
    }

    fn width(&self, p: f64) -> f64 {
        self.peak_width + self.peak_width_slope * (p / BAR - self.p_min_bar)
    }

    fn amplitude(&self, p: f64) -> f64 {
        self.peak_amplitude * (-(p / BAR - self.p_min_bar) / self.peak_decay_bar).exp()
    }

    pub fn cp(&self, p: f64, t: f64) -> f64 {
        let x = (t - self.t_pc(p)) / self.width(p);
        let sech = 1.0 / x.cosh();
        self.cp0 + self.cp1 * t + self.amplitude(p) * sech * sech
    }

    pub fn h(&self, p: f64, t: f64) -> f64 {
        let (tc, w) = (self.t_pc(p), self.width(p));
        let t0 = self.t_min;
        self.h_ref
            + self.cp0 * (t - t0)
            + 0.5 * self.cp1 * (t * t - t0 * t0)
            + self.amplitude(p) * w * (((t - tc) / w).tanh() - ((t0 - tc) / w).tanh())
    }

    /// Weight of the liquid-like state, 1 well below the pseudo-critical line
    /// and exactly 0 at `t_max`.
    fn liquid_fraction(&self, p: f64, t: f64) -> f64 {
        self.liquid_step(p, t) * (self.t_max - t) / (self.t_max - self.t_min)
    }

    pub fn rho(&self, p: f64, t: f64) -> f64 {
        let g = self.liquid_fraction(p, t);
        let rho_liquid = (450.0 + 0.3 * (p / BAR - self.p_min_bar)) * (1.0 - 8.0e-4 * (t - self.t_min));
        let rho_gas = p / (self.gas_constant * t);
        g * rho_liquid + (1.0 - g) * rho_gas
    }

    fn liquid_step(&self, p: f64, t: f64) -> f64 {
        0.5 * (1.0 - ((t - self.t_pc(p)) / (1.5 * self.width(p))).tanh())
    }

    pub fn mu(&self, p: f64, t: f64) -> f64 {
        let s = self.liquid_step(p, t);
        let mu_liquid = 1.6e-4 * (-(t - self.t_min) / 45.0).exp() + 2.0e-5;
        let mu_gas = 1.1e-5 * (t / 300.0).powf(0.75) * (1.0 + 2.0e-3 * (p / BAR - self.p_min_bar));
        s * mu_liquid + (1.0 - s) * mu_gas
    }

    pub fn k(&self, p: f64, t: f64) -> f64 {
        let s = self.liquid_step(p, t);
        let k_liquid = 0.2 * (-(t - self.t_min) / 250.0).exp();
        let k_gas = 0.033 * (t / 300.0).powf(1.2) * (1.0 + 3.0e-3 * (p / BAR - self.p_min_bar));
        s * k_liquid + (1.0 - s) * k_gas
    }

    pub fn pressure_axis(&self) -> Vec<f64> {
        linspace(self.p_min_bar * BAR, self.p_max_bar * BAR, self.n_pressure)
    }

    pub fn temperature_axis(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.n_temperature)
    }

    /// Samples the analytic fluid onto its grid.
    pub fn table(&self) -> PropertyTable {
        let ps = self.pressure_axis();
        let ts = self.temperature_axis();
        let n = ps.len() * ts.len();
        let (mut rho, mut h, mut mu, mut k, mut cp) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for &p in &ps {
            for &t in &ts {
                rho.push(self.rho(p, t));
                h.push(self.h(p, t));
                mu.push(self.mu(p, t));
                k.push(self.k(p, t));
                cp.push(self.cp(p, t));
            }
        }
        PropertyTable::new(ps, ts, rho, h, mu, k, cp, self.gas_constant)
            .expect("pseudo-fluid parameters produce a valid table")
    }
}

/// The bundled 40 x 60 methane-like table.
pub fn make_pseudo_fluid() -> PropertyTable {
    PseudoFluid::default().table()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    v[n - 1] = hi;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let t = make_pseudo_fluid();
        assert_eq!(t.pressures().len(), 40);
        assert_eq!(t.temperatures().len(), 60);
        assert_eq!(t.t_max_table(), 625.0);
    }

    #[test]
    fn cp_peak_on_pseudo_critical_line() {
        let fluid = PseudoFluid::default();
        let p = 60.0 * BAR;
        let tpc = fluid.t_pc(p);
        approx::assert_abs_diff_eq!(tpc, 190.84, epsilon = 1e-9);
        let ts = fluid.temperature_axis();
        let dt = ts[1] - ts[0];
        let t_best = ts
            .iter()
            .copied()
            .max_by(|a, b| fluid.cp(p, *a).total_cmp(&fluid.cp(p, *b)))
            .unwrap();
        assert!((t_best - tpc).abs() <= dt, "peak at {t_best}, expected near {tpc}");
    }

    #[test]
    fn enthalpy_matches_integrated_cp() {
        let fluid = PseudoFluid::default();
        // fine trapezoid rule on the analytic heat capacity
        let trapezoid = |p: f64, t1: f64, t2: f64| {
            let n = 200_000;
            let dt = (t2 - t1) / n as f64;
            let mut sum = 0.5 * (fluid.cp(p, t1) + fluid.cp(p, t2));
            for i in 1..n {
                sum += fluid.cp(p, t1 + dt * i as f64);
            }
            sum * dt
        };
        for &(p_bar, t1, t2) in &[(60.0, 150.0, 250.0), (100.0, 95.0, 600.0), (250.0, 180.0, 220.0)] {
            let p = p_bar * BAR;
            let dh = fluid.h(p, t2) - fluid.h(p, t1);
            let integral = trapezoid(p, t1, t2);
            assert!(((dh - integral) / integral).abs() < 1e-3, "{dh} vs {integral}");
        }
    }

    #[test]
    fn density_strictly_decreasing_in_temperature() {
        let fluid = PseudoFluid::default();
        for p in fluid.pressure_axis() {
            let mut prev = f64::INFINITY;
            let mut t = fluid.t_min;
            while t <= fluid.t_max {
                let r = fluid.rho(p, t);
                assert!(r > 0.0 && r < prev, "rho not decreasing at p={p}, T={t}");
                prev = r;
                t += 0.25;
            }
        }
    }

    #[test]
    fn density_meets_ideal_gas_at_table_edge() {
        let fluid = PseudoFluid::default();
        for p in fluid.pressure_axis() {
            let ideal = p / (fluid.gas_constant * fluid.t_max);
            assert!((fluid.rho(p, fluid.t_max) - ideal).abs() <= 1e-12 * ideal);
        }
    }
}
