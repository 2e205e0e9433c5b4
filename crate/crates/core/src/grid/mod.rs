//! Periodic-box spectral discretization of H = A - σV.
//!
//! The box is [-L, L)^d with N grid points per axis (N a power of two), so
//! the Fourier multiplier a(k) acts exactly on the grid wavenumbers
//! k = π m / L, m in [-N/2, N/2). Bound states decay exponentially, so a box
//! a few decay lengths wide reproduces the whole-space problem to rounding;
//! the box-independence check in the eigensolver tests quantifies this.

mod fft;

pub use fft::FftPlans;

use crate::error::Error;
use crate::model::{symbol_eval_radial, PotentialSpec, SymbolSpec, SymbolVariant};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Uniform periodic grid on [-L, L)^d, d in {1, 2}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid {
    pub dimension: usize,
    pub half_width: f64,
    pub points_per_axis: usize,
    #[serde(skip)]
    plans: Option<Arc<FftPlans>>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.half_width == other.half_width
            && self.points_per_axis == other.points_per_axis
    }
}

impl Grid {
    pub fn new(dimension: usize, half_width: f64, points_per_axis: usize) -> Result<Self, Error> {
        let mut violations = Vec::new();
        if !(dimension == 1 || dimension == 2) {
            violations.push(format!("grid dimension must be 1 or 2, got {dimension}"));
        }
        if !points_per_axis.is_power_of_two() || points_per_axis < 4 {
            violations.push(format!(
                "points per axis must be a power of two >= 4, got {points_per_axis}"
            ));
        }
        if !(half_width > 0.0) {
            violations.push("half-width must be positive".to_string());
        }
        if !violations.is_empty() {
            return Err(Error::invalid(violations));
        }
        Ok(Grid {
            dimension,
            half_width,
            points_per_axis,
            plans: Some(Arc::new(FftPlans::new(points_per_axis))),
        })
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dimension as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    pub fn volume_element(&self) -> f64 {
        self.spacing().powi(self.dimension as i32)
    }

    /// Signed FFT mode index for axis position j.
    fn mode(&self, j: usize) -> i64 {
        let n = self.points_per_axis as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Wavenumber along one axis for FFT index j: k = π m / L.
    pub fn wavenumber(&self, j: usize) -> f64 {
        std::f64::consts::PI * self.mode(j) as f64 / self.half_width
    }

    /// |k| at a flat index.
    pub fn wavenumber_norm(&self, idx: usize) -> f64 {
        match self.dimension {
            1 => self.wavenumber(idx).abs(),
            _ => {
                let n = self.points_per_axis;
                let kx = self.wavenumber(idx / n);
                let ky = self.wavenumber(idx % n);
                (kx * kx + ky * ky).sqrt()
            }
        }
    }

    /// Position coordinate along one axis: x = -L + j Δx.
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Position of a flat index.
    pub fn position(&self, idx: usize) -> Vec<f64> {
        match self.dimension {
            1 => vec![self.coordinate(idx)],
            _ => {
                let n = self.points_per_axis;
                vec![self.coordinate(idx / n), self.coordinate(idx % n)]
            }
        }
    }

    fn plans(&self) -> Arc<FftPlans> {
        self.plans
            .clone()
            .expect("grid deserialized without FFT plans; rebuild with Grid::new")
    }

    /// Volume-weighted inner product <u, v> = Δx^d Σ conj(u) v.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let dot: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        dot * self.volume_element()
    }

    pub fn norm(&self, v: &[Complex64]) -> f64 {
        let sq: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        (sq * self.volume_element()).sqrt()
    }
}

/// Complex state on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub data: Vec<Complex64>,
}

impl StateVector {
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let data = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        StateVector { data }
    }

    pub fn constant(grid: &Grid, value: Complex64) -> Self {
        StateVector { data: vec![value; grid.len()] }
    }

    /// Plane wave at the grid mode with axis indices `modes`.
    pub fn plane_wave(grid: &Grid, modes: &[usize]) -> Self {
        assert_eq!(modes.len(), grid.dimension);
        let ks: Vec<f64> = modes.iter().map(|&m| grid.wavenumber(m)).collect();
        StateVector::from_fn(grid, |x| {
            let phase: f64 = ks.iter().zip(x).map(|(k, xi)| k * xi).sum();
            Complex64::new(0.0, phase).exp()
        })
    }
}

/// Discretized H = A - σV with symbol and potential sampled on the grid.
#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    pub grid: Grid,
    pub symbol: Vec<f64>,
    pub potential: Vec<f64>,
    pub sigma: f64,
}

impl GridHamiltonian {
    /// Sample a symbol and a potential on the grid. Lévy symbols are sampled
    /// through a dense radial table (one quadrature per table node instead of
    /// one per grid point).
    pub fn build(
        grid: Grid,
        symbol: &SymbolSpec,
        potential: &PotentialSpec,
        sigma: f64,
    ) -> Result<Self, Error> {
        let mut violations = Vec::new();
        if symbol.dimension != grid.dimension {
            violations.push(format!(
                "symbol dimension {} does not match grid dimension {}",
                symbol.dimension, grid.dimension
            ));
        }
        if potential.dimension != grid.dimension {
            violations.push(format!(
                "potential dimension {} does not match grid dimension {}",
                potential.dimension, grid.dimension
            ));
        }
        if sigma < 0.0 {
            violations.push(format!("sigma = {sigma} must be >= 0"));
        }
        if !violations.is_empty() {
            return Err(Error::invalid(violations));
        }

        let n = grid.len();
        let k_max = std::f64::consts::PI / grid.spacing() * (grid.dimension as f64).sqrt() + 1e-9;
        let radial: Box<dyn Fn(f64) -> Result<f64, Error>> = match &symbol.variant {
            SymbolVariant::LevyDensity { .. } => {
                let m = 4096usize;
                let mut table = Vec::with_capacity(m + 1);
                for i in 0..=m {
                    let k = k_max * i as f64 / m as f64;
                    table.push(symbol_eval_radial(symbol, k)?);
                }
                let step = k_max / m as f64;
                Box::new(move |kn: f64| {
                    let t = (kn / step).min(m as f64 - 1e-9);
                    let i = t as usize;
                    let frac = t - i as f64;
                    Ok(table[i] * (1.0 - frac) + table[i + 1] * frac)
                })
            }
            _ => Box::new(|kn: f64| symbol_eval_radial(symbol, kn)),
        };

        let mut sym = Vec::with_capacity(n);
        for i in 0..n {
            let a = radial(grid.wavenumber_norm(i))?;
            if a < 0.0 {
                return Err(Error::invalid(vec![format!(
                    "symbol sample a = {a} < 0 at index {i}"
                )]));
            }
            sym.push(a);
        }
        let dx = grid.spacing();
        let pot: Vec<f64> =
            (0..n).map(|i| potential.grid_sample(&grid.position(i), dx)).collect();
        Ok(GridHamiltonian { grid, symbol: sym, potential: pot, sigma })
    }

    /// Assemble directly from samples (tests, custom spectra).
    pub fn from_samples(
        grid: Grid,
        symbol: Vec<f64>,
        potential: Vec<f64>,
        sigma: f64,
    ) -> Result<Self, Error> {
        if symbol.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: symbol.len() });
        }
        if potential.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: potential.len() });
        }
        Ok(GridHamiltonian { grid, symbol, potential, sigma })
    }

    fn check_shape(&self, v: &[Complex64]) -> Result<(), Error> {
        if v.len() != self.grid.len() {
            return Err(Error::ShapeMismatch { expected: self.grid.len(), got: v.len() });
        }
        Ok(())
    }

    /// y = F^{-1}[ m(k) F[x] ] for a real multiplier m given by flat index.
    pub(crate) fn apply_multiplier(
        &self,
        x: &[Complex64],
        mult: impl Fn(usize) -> f64,
    ) -> Vec<Complex64> {
        let plans = self.grid.plans();
        let mut buf = x.to_vec();
        match self.grid.dimension {
            1 => plans.forward_1d(&mut buf),
            _ => plans.forward_2d(&mut buf),
        }
        let scale = 1.0 / self.grid.len() as f64;
        for (i, b) in buf.iter_mut().enumerate() {
            *b *= mult(i) * scale;
        }
        match self.grid.dimension {
            1 => plans.inverse_1d(&mut buf),
            _ => plans.inverse_2d(&mut buf),
        }
        buf
    }

    /// Hψ = F^{-1}[a(k) Fψ] - σ V ψ.
    pub fn apply_hamiltonian(&self, psi: &StateVector) -> Result<StateVector, Error> {
        self.check_shape(&psi.data)?;
        let mut out = self.apply_multiplier(&psi.data, |i| self.symbol[i]);
        for (o, (v, p)) in out.iter_mut().zip(self.potential.iter().zip(&psi.data)) {
            *o -= self.sigma * v * p;
        }
        Ok(StateVector { data: out })
    }

    /// Symmetrized Birman–Schwinger image
    /// K_λ f = (A-λ)^{-1/2} ( V · (A-λ)^{-1/2} f ), λ < 0.
    pub fn apply_bs_operator(&self, lambda: f64, f: &StateVector) -> Result<StateVector, Error> {
        self.check_shape(&f.data)?;
        if lambda >= 0.0 {
            return Err(Error::domain(
                "apply_bs_operator",
                format!("lambda = {lambda} must be negative"),
            ));
        }
        let half_res = |i: usize| 1.0 / (self.symbol[i] - lambda).sqrt();
        let mut mid = self.apply_multiplier(&f.data, half_res);
        for (m, v) in mid.iter_mut().zip(&self.potential) {
            *m *= *v;
        }
        let out = self.apply_multiplier(&mid, half_res);
        Ok(StateVector { data: out })
    }

    /// <Hψ, ψ> / <ψ, ψ> with volume-weighted inner products.
    pub fn rayleigh_quotient(&self, psi: &StateVector) -> Result<f64, Error> {
        self.check_shape(&psi.data)?;
        let nrm = self.grid.norm(&psi.data);
        if nrm == 0.0 {
            return Err(Error::domain("rayleigh_quotient", "zero state vector"));
        }
        let h_psi = self.apply_hamiltonian(psi)?;
        let num = self.grid.inner(&psi.data, &h_psi.data);
        Ok(num.re / (nrm * nrm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_state(grid: &Grid, seed: u64) -> StateVector {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        StateVector {
            data: (0..grid.len())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
        }
    }

    #[test]
    fn plane_wave_is_multiplier_eigenvector() {
        let grid = Grid::new(1, 10.0, 128).unwrap();
        let sym = SymbolSpec::power_law(1, 2.0);
        let pot = PotentialSpec::radial_well(1, 0.0, 1.0);
        let h = GridHamiltonian::build(grid.clone(), &sym, &pot, 1.0).unwrap();
        let psi = StateVector::plane_wave(&grid, &[5]);
        let hpsi = h.apply_hamiltonian(&psi).unwrap();
        let a = grid.wavenumber(5).powi(2);
        for (y, x) in hpsi.data.iter().zip(&psi.data) {
            assert!((y - a * x).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_state_sees_only_potential() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let sym = SymbolSpec::power_law(1, 1.5);
        let pot = PotentialSpec::gaussian(1, 2.0, 1.0);
        let h = GridHamiltonian::build(grid.clone(), &sym, &pot, 0.7).unwrap();
        let psi = StateVector::constant(&grid, Complex64::new(1.0, 0.0));
        let hpsi = h.apply_hamiltonian(&psi).unwrap();
        for (i, y) in hpsi.data.iter().enumerate() {
            let expect = -0.7 * h.potential[i];
            assert!((y.re - expect).abs() < 1e-12 && y.im.abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_laplacian_analytic() {
        // σ = 0, α = 2: -d²/dx² e^{-x²} = (2 - 4x²) e^{-x²} on the interior.
        let grid = Grid::new(1, 12.0, 512).unwrap();
        let sym = SymbolSpec::power_law(1, 2.0);
        let pot = PotentialSpec::radial_well(1, 0.0, 1.0);
        let h = GridHamiltonian::build(grid.clone(), &sym, &pot, 0.0).unwrap();
        let psi = StateVector::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let hpsi = h.apply_hamiltonian(&psi).unwrap();
        for i in 0..grid.len() {
            let x = grid.coordinate(i);
            if x.abs() < 6.0 {
                let expect = (2.0 - 4.0 * x * x) * (-x * x).exp();
                assert!(
                    (hpsi.data[i].re - expect).abs() < 1e-8,
                    "x = {x}: {} vs {expect}",
                    hpsi.data[i].re
                );
            }
        }
    }

    #[test]
    fn multiplier_round_trip_identity() {
        for d in [1usize, 2] {
            let n = if d == 1 { 256 } else { 64 };
            let grid = Grid::new(d, 5.0, n).unwrap();
            let h = GridHamiltonian::from_samples(
                grid.clone(),
                vec![1.0; grid.len()],
                vec![0.0; grid.len()],
                0.0,
            )
            .unwrap();
            let v = random_state(&grid, 7);
            let w = h.apply_multiplier(&v.data, |_| 1.0);
            let err: f64 = v.data.iter().zip(&w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12 * grid.norm(&v.data), "d = {d}: round trip error {err}");
        }
    }

    #[test]
    fn hamiltonian_self_adjoint_and_linear() {
        let grid = Grid::new(2, 6.0, 32).unwrap();
        let sym = SymbolSpec::power_law(2, 2.0);
        let pot = PotentialSpec::mean_zero_pair(2, 1.0, 1.0, 2.0);
        let h = GridHamiltonian::build(grid.clone(), &sym, &pot, 1.3).unwrap();
        let u = random_state(&grid, 1);
        let v = random_state(&grid, 2);
        let hu = h.apply_hamiltonian(&u).unwrap();
        let hv = h.apply_hamiltonian(&v).unwrap();
        let lhs = grid.inner(&hu.data, &v.data);
        let rhs = grid.inner(&u.data, &hv.data);
        assert!(
            (lhs - rhs).norm() <= 1e-10 * grid.norm(&u.data) * grid.norm(&v.data),
            "self-adjointness violated: {lhs} vs {rhs}"
        );
        let sum =
            StateVector { data: u.data.iter().zip(&v.data).map(|(a, b)| a + 2.0 * b).collect() };
        let hsum = h.apply_hamiltonian(&sum).unwrap();
        for i in 0..grid.len() {
            assert!((hsum.data[i] - hu.data[i] - 2.0 * hv.data[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn bs_operator_identities() {
        let grid = Grid::new(1, 10.0, 128).unwrap();
        // V = 1 everywhere: K_λ is the multiplier 1/(a(k) - λ).
        let sym: Vec<f64> = (0..grid.len()).map(|i| grid.wavenumber_norm(i).powi(2)).collect();
        let h =
            GridHamiltonian::from_samples(grid.clone(), sym, vec![1.0; grid.len()], 1.0).unwrap();
        let f = StateVector::plane_wave(&grid, &[3]);
        let kf = h.apply_bs_operator(-1.0, &f).unwrap();
        let expect = 1.0 / (grid.wavenumber(3).powi(2) + 1.0);
        for (y, x) in kf.data.iter().zip(&f.data) {
            assert!((y - expect * x).norm() < 1e-11);
        }
        // V = 0: zero output.
        let h0 =
            GridHamiltonian::from_samples(grid.clone(), h.symbol.clone(), vec![0.0; grid.len()], 1.0)
                .unwrap();
        let kf0 = h0.apply_bs_operator(-0.5, &f).unwrap();
        assert!(kf0.data.iter().all(|z| z.norm() < 1e-14));
        // λ >= 0 rejected.
        assert!(h.apply_bs_operator(0.0, &f).is_err());
    }

    #[test]
    fn bs_self_adjoint() {
        let grid = Grid::new(1, 10.0, 256).unwrap();
        let sym = SymbolSpec::power_law(1, 1.5);
        let pot = PotentialSpec::mean_zero_pair(1, 1.0, 1.0, 2.0);
        let h = GridHamiltonian::build(grid.clone(), &sym, &pot, 2.0).unwrap();
        let u = random_state(&grid, 11);
        let v = random_state(&grid, 12);
        let ku = h.apply_bs_operator(-0.3, &u).unwrap();
        let kv = h.apply_bs_operator(-0.3, &v).unwrap();
        let lhs = grid.inner(&ku.data, &v.data);
        let rhs = grid.inner(&u.data, &kv.data);
        assert!((lhs - rhs).norm() <= 1e-10 * grid.norm(&u.data) * grid.norm(&v.data));
    }

    #[test]
    fn rayleigh_quotient_properties() {
        let grid = Grid::new(1, 10.0, 128).unwrap();
        let sym = SymbolSpec::power_law(1, 2.0);
        let pot = PotentialSpec::radial_well(1, 0.0, 1.0);
        let h = GridHamiltonian::build(grid.clone(), &sym, &pot, 0.0).unwrap();
        let v = random_state(&grid, 3);
        let rq = h.rayleigh_quotient(&v).unwrap();
        assert!(rq >= -1e-12, "V = 0 gives nonnegative quotient, got {rq}");
        let scaled = StateVector { data: v.data.iter().map(|z| 3.5 * z).collect() };
        let rq2 = h.rayleigh_quotient(&scaled).unwrap();
        assert!((rq - rq2).abs() < 1e-10 * rq.abs().max(1.0));
        let zero = StateVector::constant(&grid, Complex64::new(0.0, 0.0));
        assert!(h.rayleigh_quotient(&zero).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let grid = Grid::new(1, 10.0, 64).unwrap();
        let sym = SymbolSpec::power_law(2, 2.0);
        let pot = PotentialSpec::radial_well(1, 1.0, 1.0);
        assert!(GridHamiltonian::build(grid, &sym, &pot, 1.0).is_err());
    }
}
