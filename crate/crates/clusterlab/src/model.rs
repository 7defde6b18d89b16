//! Lattice specification and Hamiltonian construction.
//!
//! The chain Hamiltonian is H(λ) = −Σ_i σ^x_{i−1} σ^z_i σ^x_{i+1}
//! + λ Σ_i σ^y_i σ^y_{i+1}. On a ring both sums run over every site with
//! wraparound; on an open chain the three-site sum keeps only centers with
//! both neighbors present and the two-site sum keeps the N−1 interior bonds,
//! which realizes an exactly four-fold degenerate ground manifold at λ = 0.
//! The same module builds the d-dimensional generalization of the cluster
//! term on periodic hypercubic lattices, where each stabilizer carries σ^z
//! on a site and σ^x on its 2d nearest neighbors.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{commutation_class, CommutationClass, Pauli, PauliString, Phase, StateVector};

/// Boundary condition of the one-dimensional chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Open => write!(f, "open"),
            Boundary::Periodic => write!(f, "periodic"),
        }
    }
}

/// Lattice geometry: a chain, or a periodic hypercubic torus given by its
/// extent along each axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Chain,
    Hypercubic { extents: Vec<usize> },
}

/// Complete specification of one model instance; the single input every
/// solver in the crate consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub lambda: f64,
    pub boundary: Boundary,
    pub geometry: Geometry,
}

impl ChainSpec {
    /// A one-dimensional chain of `n_sites` spins.
    pub fn chain(n_sites: usize, lambda: f64, boundary: Boundary) -> Result<ChainSpec> {
        if n_sites < 3 {
            return Err(Error::InvalidSpec(format!(
                "chain needs at least 3 sites, got {n_sites}"
            )));
        }
        if n_sites > 64 {
            return Err(Error::InvalidSpec(format!(
                "chain of {n_sites} sites exceeds the 64-site symbolic limit"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "coupling must be finite and nonnegative, got {lambda}"
            )));
        }
        Ok(ChainSpec {
            n_sites,
            lambda,
            boundary,
            geometry: Geometry::Chain,
        })
    }

    /// A periodic hypercubic torus with the given extents, one spin per site.
    /// Every extent must be at least 3 so each cluster term touches 2d+1
    /// distinct sites.
    pub fn hypercubic(extents: Vec<usize>, lambda: f64) -> Result<ChainSpec> {
        if extents.is_empty() {
            return Err(Error::InvalidSpec("empty extent list".into()));
        }
        if extents.iter().any(|&l| l < 3) {
            return Err(Error::InvalidSpec(format!(
                "hypercubic extents must all be >= 3, got {extents:?}"
            )));
        }
        let n_sites: usize = extents.iter().product();
        if n_sites > 64 {
            return Err(Error::InvalidSpec(format!(
                "torus with {n_sites} sites exceeds the 64-site symbolic limit"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "coupling must be finite and nonnegative, got {lambda}"
            )));
        }
        Ok(ChainSpec {
            n_sites,
            lambda,
            boundary: Boundary::Periodic,
            geometry: Geometry::Hypercubic { extents },
        })
    }

    /// Spatial dimension: 1 for chains, the number of extents for tori.
    pub fn dimension(&self) -> usize {
        match &self.geometry {
            Geometry::Chain => 1,
            Geometry::Hypercubic { extents } => extents.len(),
        }
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    fn check_dense_capacity(&self) -> Result<()> {
        if self.n_sites > crate::MAX_SITES {
            return Err(Error::Capacity(self.n_sites, crate::MAX_SITES));
        }
        Ok(())
    }
}

/// Mixed-radix decoding of a torus site index into coordinates; axis 0 is
/// the fastest-varying digit.
fn torus_coords(site: usize, extents: &[usize]) -> Vec<usize> {
    let mut c = Vec::with_capacity(extents.len());
    let mut rest = site;
    for &l in extents {
        c.push(rest % l);
        rest /= l;
    }
    c
}

fn torus_index(coords: &[usize], extents: &[usize]) -> usize {
    let mut idx = 0;
    let mut stride = 1;
    for (&c, &l) in coords.iter().zip(extents) {
        idx += c * stride;
        stride *= l;
    }
    idx
}

/// Neighbor of `site` displaced by ±1 along `axis`, with wraparound.
fn torus_neighbor(site: usize, axis: usize, step: isize, extents: &[usize]) -> usize {
    let mut coords = torus_coords(site, extents);
    let l = extents[axis] as isize;
    coords[axis] = ((coords[axis] as isize + step).rem_euclid(l)) as usize;
    torus_index(&coords, extents)
}

/// The stabilizers of the cluster term: for chains, K_i = σ^x_{i−1} σ^z_i
/// σ^x_{i+1} for every center with both neighbors (all sites on a ring);
/// for tori, σ^z on the site and σ^x on its 2d neighbors. All strings carry
/// phase +1 and commute pairwise.
pub fn stabilizer_list(spec: &ChainSpec) -> Vec<PauliString> {
    let n = spec.n_sites;
    match &spec.geometry {
        Geometry::Chain => {
            let centers: Vec<usize> = match spec.boundary {
                Boundary::Open => (1..n - 1).collect(),
                Boundary::Periodic => (0..n).collect(),
            };
            centers
                .into_iter()
                .map(|i| {
                    PauliString::identity(n)
                        .with((i + n - 1) % n, Pauli::X)
                        .with(i, Pauli::Z)
                        .with((i + 1) % n, Pauli::X)
                })
                .collect()
        }
        Geometry::Hypercubic { extents } => (0..n)
            .map(|i| {
                let mut s = PauliString::identity(n).with(i, Pauli::Z);
                for axis in 0..extents.len() {
                    for step in [-1isize, 1] {
                        s = s.with(torus_neighbor(i, axis, step, extents), Pauli::X);
                    }
                }
                s
            })
            .collect(),
    }
}

/// Nearest-neighbor bonds carrying the σ^y σ^y coupling: N−1 on an open
/// chain, N on a ring, d·N on a torus (one bond per site per axis).
pub fn ising_bonds(spec: &ChainSpec) -> Vec<(usize, usize)> {
    let n = spec.n_sites;
    match &spec.geometry {
        Geometry::Chain => {
            let last = match spec.boundary {
                Boundary::Open => n - 1,
                Boundary::Periodic => n,
            };
            (0..last).map(|i| (i, (i + 1) % n)).collect()
        }
        Geometry::Hypercubic { extents } => {
            let mut bonds = Vec::with_capacity(extents.len() * n);
            for i in 0..n {
                for axis in 0..extents.len() {
                    bonds.push((i, torus_neighbor(i, axis, 1, extents)));
                }
            }
            bonds
        }
    }
}

/// Hamiltonian as a list of (coefficient, string) terms: −1 per stabilizer
/// plus +λ per Ising bond.
pub fn hamiltonian_terms(spec: &ChainSpec) -> Vec<(f64, PauliString)> {
    let n = spec.n_sites;
    let mut terms: Vec<(f64, PauliString)> = stabilizer_list(spec)
        .into_iter()
        .map(|s| (-1.0, s))
        .collect();
    if spec.lambda != 0.0 {
        for (i, j) in ising_bonds(spec) {
            terms.push((
                spec.lambda,
                PauliString::identity(n).with(i, Pauli::Y).with(j, Pauli::Y),
            ));
        }
    }
    terms
}

/// A Hermitian operator held as a real-coefficient Pauli-term list, with
/// dense materialization and a matrix-free action for iterative solvers.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    n_sites: usize,
    terms: Vec<(f64, PauliString)>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn from_terms(n_sites: usize, terms: Vec<(f64, PauliString)>) -> Result<OperatorMatrix> {
        for (c, s) in &terms {
            if s.n_sites() != n_sites {
                return Err(Error::LengthMismatch(s.n_sites(), n_sites));
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient {c}"
                )));
            }
        }
        // Real coefficient times a real-phase string is Hermitian term by term.
        let hermitian = terms.iter().all(|(_, s)| s.phase.is_real());
        Ok(OperatorMatrix {
            n_sites,
            terms,
            hermitian,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// True when every term is a real matrix, so the whole operator acts
    /// within real arithmetic.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, s)| s.is_real_operator())
    }

    /// Dense complex matrix. Capacity-limited; prefer the matrix-free
    /// action for anything larger than a few thousand dimensions.
    pub fn to_dense_complex(&self) -> Result<Array2<Complex64>> {
        if self.n_sites > crate::DENSE_MAX_SITES {
            return Err(Error::Capacity(self.n_sites, crate::DENSE_MAX_SITES));
        }
        let dim = self.dim();
        let mut m = Array2::zeros((dim, dim));
        for (c, s) in &self.terms {
            let coeff = Complex64::new(*c, 0.0) * s.phase.as_complex();
            add_string_dense(&mut m, s, coeff);
        }
        Ok(m)
    }

    /// Dense real matrix; errors unless every term is a real operator.
    pub fn to_dense(&self) -> Result<Array2<f64>> {
        if self.n_sites > crate::DENSE_MAX_SITES {
            return Err(Error::Capacity(self.n_sites, crate::DENSE_MAX_SITES));
        }
        if !self.is_real() {
            return Err(Error::InvalidArgument(
                "operator has complex entries; use the complex materialization".into(),
            ));
        }
        let c = self.to_dense_complex()?;
        Ok(c.mapv(|e| e.re))
    }

    /// Accumulates `self * src` into `dst` (overwriting), in real arithmetic.
    /// Panics if the operator is not real; callers guard with [`Self::is_real`].
    pub fn apply_real(&self, src: &[f64], dst: &mut [f64]) {
        assert!(self.is_real(), "operator is not a real matrix");
        dst.iter_mut().for_each(|x| *x = 0.0);
        for (c, s) in &self.terms {
            crate::pauli::accumulate_real(*c, s, src, dst);
        }
    }

    /// Expectation value on a normalized state.
    pub fn expectation(&self, v: &StateVector) -> Result<f64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, s) in &self.terms {
            acc += Complex64::new(*c, 0.0) * v.expectation(s)?;
        }
        Ok(acc.re)
    }
}

/// Adds coeff * (letters of s, ignoring its phase which is folded into
/// coeff by the caller) onto a dense matrix, column by column.
fn add_string_dense(m: &mut Array2<Complex64>, s: &PauliString, coeff: Complex64) {
    let n = s.n_sites();
    let dim = 1usize << n;
    let mut flip = 0usize;
    let mut sign = 0usize;
    let mut ycount = 0u32;
    for (j, p) in s.letters.iter().enumerate() {
        match p {
            Pauli::X => flip |= 1 << j,
            Pauli::Y => {
                flip |= 1 << j;
                sign |= 1 << j;
                ycount += 1;
            }
            Pauli::Z => sign |= 1 << j,
            Pauli::I => {}
        }
    }
    let base = coeff
        * match ycount % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    for col in 0..dim {
        let par = (col & sign).count_ones() & 1;
        let f = if par == 0 { base } else { -base };
        m[[col ^ flip, col]] += f;
    }
}

/// Builds H(λ) for the given spec as an [`OperatorMatrix`].
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<OperatorMatrix> {
    OperatorMatrix::from_terms(spec.n_sites, hamiltonian_terms(spec))
}

/// Lattice edges of the underlying graph: nearest-neighbor pairs along the
/// chain or torus, each undirected edge listed once.
fn graph_edges(spec: &ChainSpec) -> Vec<(usize, usize)> {
    match &spec.geometry {
        Geometry::Chain => ising_bonds(spec),
        Geometry::Hypercubic { .. } => ising_bonds(spec),
    }
}

/// Applies the two-site entangling gate (1 + X_i + X_j − X_i X_j)/2 in
/// place. The gate is unitary, diagonal in the σ^x product basis, and
/// commutes with every other gate of the same kind.
fn apply_entangler(amps: &mut [Complex64], i: usize, j: usize) {
    let bi = 1usize << i;
    let bj = 1usize << j;
    for z in 0..amps.len() {
        if z & bi == 0 && z & bj == 0 {
            let a = amps[z];
            let b = amps[z | bi];
            let c = amps[z | bj];
            let d = amps[z | bi | bj];
            let h = Complex64::new(0.5, 0.0);
            amps[z] = h * (a + b + c - d);
            amps[z | bi] = h * (a + b - c + d);
            amps[z | bj] = h * (a - b + c + d);
            amps[z | bi | bj] = h * (-a + b + c + d);
        }
    }
}

/// Builds the cluster state: |0…0⟩ entangled by one gate per lattice edge.
/// On a ring (or torus) this is the unique simultaneous +1 eigenstate of
/// every stabilizer. On an open chain it is one canonical member of the
/// four-dimensional ground manifold, the one with the two boundary strings
/// σ^z_1 σ^x_2 and σ^x_{N−1} σ^z_N both at +1. Every stabilizer eigenvalue
/// is validated before returning; a violation is a construction bug and
/// panics.
pub fn build_cluster_state(spec: &ChainSpec) -> Result<StateVector> {
    spec.check_dense_capacity()?;
    let n = spec.n_sites;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(1.0, 0.0);
    for (i, j) in graph_edges(spec) {
        apply_entangler(&mut amps, i, j);
    }
    let state = StateVector::from_amplitudes(amps)?;
    let mut checks = stabilizer_list(spec);
    if spec.geometry == Geometry::Chain && spec.boundary == Boundary::Open {
        checks.push(
            PauliString::identity(n)
                .with(0, Pauli::Z)
                .with(1, Pauli::X),
        );
        checks.push(
            PauliString::identity(n)
                .with(n - 2, Pauli::X)
                .with(n - 1, Pauli::Z),
        );
    }
    for k in &checks {
        let ev = state.expectation(k)?;
        assert!(
            (ev.re - 1.0).abs() < 1e-10 && ev.im.abs() < 1e-12,
            "cluster-state validation failed: <{k}> = {ev}"
        );
    }
    Ok(state)
}

/// Checks that every pair of strings commutes; used by tests and the
/// symmetry report.
pub fn all_pairs_commute(strings: &[PauliString]) -> Result<bool> {
    for (a, b) in strings
        .iter()
        .enumerate()
        .flat_map(|(i, a)| strings[i + 1..].iter().map(move |b| (a, b)))
    {
        if commutation_class(a, b)? == CommutationClass::Anticommuting {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Global spin-flip ∏_i σ^z_i, the parity symmetry of H(λ).
pub fn parity_operator(n_sites: usize) -> PauliString {
    PauliString::from_letters(Phase::PlusOne, vec![Pauli::Z; n_sites])
}
