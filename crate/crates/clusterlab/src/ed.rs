//! Exact diagonalization and ground-state observables.
//!
//! Dense full solves run up to 2^12 dimensions; above that a matrix-free
//! Lanczos iteration with full reorthogonalization and sequential deflation
//! extracts the lowest eigenpairs. Every Hamiltonian in this crate is a
//! real symmetric matrix (all terms have an even σ^y count), so the
//! iterative path works entirely in real arithmetic.
//!
//! Observables: the string order parameter is the expectation of the
//! product of all interior stabilizers, which collapses to the end-dressed
//! string σ^x_1 σ^y_2 σ^z_3 ⋯ σ^z_{N−2} σ^y_{N−1} σ^x_N. It equals 1 on
//! cluster states of either boundary type and dies in the antiferromagnet.
//! Staggered order is measured through the two-point correlator
//! (−1)^r ⟨σ^y_i σ^y_{i+r}⟩, since finite chains never break the symmetry
//! and single-site ⟨σ^y⟩ vanishes identically on symmetric eigenstates.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, stabilizer_list, Boundary, ChainSpec, OperatorMatrix};
use crate::pauli::{pauli_mul, PauliString, StateVector};

/// Energies below the minimum plus this spread count as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Convergence tolerance of the iterative eigensolver, relative to the
/// operator's coefficient 1-norm.
const LANCZOS_TOL: f64 = 1e-12;

/// Hard cap on eigenpairs returned by windowed iterative solves.
const MAX_WINDOW_STATES: usize = 12;

/// Dimensions at or below this always use the dense path.
const SMALL_DENSE_DIM: usize = 256;

/// Eigenpairs at the bottom of a spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energies: Vec<f64>,
    pub vectors: Vec<StateVector>,
    pub degeneracy_tol: f64,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Number of levels within the degeneracy tolerance of the minimum.
    /// Meaningful only when the computed window extends past the manifold.
    pub fn ground_degeneracy(&self) -> usize {
        let e0 = self.energies[0];
        self.energies
            .iter()
            .take_while(|&&e| e - e0 <= self.degeneracy_tol)
            .count()
    }
}

/// Ground-state observable bundle for one spec.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ObservableBundle {
    pub energy: f64,
    pub string_order: f64,
    pub staggered_corr: f64,
    pub ground_degeneracy: usize,
}

fn state_from_real(amps: &[f64]) -> StateVector {
    let c: Vec<Complex64> = amps.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    StateVector::from_amplitudes(c).expect("eigenvector should be normalizable")
}

fn dense_full(h: &OperatorMatrix) -> Result<(Vec<f64>, Array2<f64>)> {
    let m = h.to_dense()?;
    let (evals, evecs) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Solver(format!("dense eigensolver failed: {e}")))?;
    Ok((evals.to_vec(), evecs))
}

/// All eigenpairs within `window` of the spectrum minimum. Dense full solve
/// when the dimension allows it, iterative extremal solve above.
pub fn ground_spectrum(h: &OperatorMatrix, window: f64) -> Result<SpectrumResult> {
    if !h.is_hermitian() {
        return Err(Error::InvalidArgument(
            "ground_spectrum requires a Hermitian operator".into(),
        ));
    }
    if h.n_sites() <= crate::DENSE_MAX_SITES {
        let (evals, evecs) = dense_full(h)?;
        let e0 = evals[0];
        let count = evals.iter().take_while(|&&e| e - e0 <= window).count();
        let vectors = (0..count)
            .map(|i| state_from_real(&evecs.column(i).to_vec()))
            .collect();
        return Ok(SpectrumResult {
            energies: evals[..count].to_vec(),
            vectors,
            degeneracy_tol: DEGENERACY_TOL,
        });
    }
    // Iterative path: deflate until the next level leaves the window.
    let mut energies = Vec::new();
    let mut raw: Vec<Vec<f64>> = Vec::new();
    loop {
        let (e, v) = lanczos_lowest(h, &raw, raw.len() as u64)?;
        if !energies.is_empty() && e - energies[0] > window {
            break;
        }
        energies.push(e);
        raw.push(v);
        if energies.len() > MAX_WINDOW_STATES {
            return Err(Error::Solver(format!(
                "more than {MAX_WINDOW_STATES} states inside the energy window"
            )));
        }
    }
    Ok(SpectrumResult {
        vectors: raw.iter().map(|v| state_from_real(v)).collect(),
        energies,
        degeneracy_tol: DEGENERACY_TOL,
    })
}

/// The `k` lowest eigenpairs. Small dimensions take the dense path; real
/// operators above that use the iterative solver regardless of the dense
/// capacity, which keeps coupling sweeps fast.
pub fn lowest_eigenpairs(h: &OperatorMatrix, k: usize) -> Result<SpectrumResult> {
    if !h.is_hermitian() {
        return Err(Error::InvalidArgument(
            "lowest_eigenpairs requires a Hermitian operator".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if h.dim() <= SMALL_DENSE_DIM || !h.is_real() {
        let (evals, evecs) = dense_full(h)?;
        let count = k.min(evals.len());
        return Ok(SpectrumResult {
            energies: evals[..count].to_vec(),
            vectors: (0..count)
                .map(|i| state_from_real(&evecs.column(i).to_vec()))
                .collect(),
            degeneracy_tol: DEGENERACY_TOL,
        });
    }
    let mut energies = Vec::new();
    let mut raw: Vec<Vec<f64>> = Vec::new();
    for round in 0..k {
        let (e, v) = lanczos_lowest(h, &raw, round as u64)?;
        energies.push(e);
        raw.push(v);
    }
    Ok(SpectrumResult {
        vectors: raw.iter().map(|v| state_from_real(v)).collect(),
        energies,
        degeneracy_tol: DEGENERACY_TOL,
    })
}

/// Full spectrum, ascending. Dense only.
pub fn full_spectrum(h: &OperatorMatrix) -> Result<Vec<f64>> {
    if !h.is_hermitian() {
        return Err(Error::InvalidArgument(
            "full_spectrum requires a Hermitian operator".into(),
        ));
    }
    Ok(dense_full(h)?.0)
}

/// Full eigensystem of a real symmetric operator: ascending energies and
/// the matching eigenvector columns. Dense only.
pub fn full_eigensystem(h: &OperatorMatrix) -> Result<(Vec<f64>, Array2<f64>)> {
    if !h.is_hermitian() {
        return Err(Error::InvalidArgument(
            "full_eigensystem requires a Hermitian operator".into(),
        ));
    }
    dense_full(h)
}

/// Matrix-free Lanczos for the lowest eigenpair of a real symmetric
/// operator, orthogonal to the `deflate` set. Deterministic: the start
/// vector comes from a fixed-seed generator salted by the deflation round.
fn lanczos_lowest(
    h: &OperatorMatrix,
    deflate: &[Vec<f64>],
    salt: u64,
) -> Result<(f64, Vec<f64>)> {
    if !h.is_real() {
        return Err(Error::Solver(
            "iterative solver requires a real operator".into(),
        ));
    }
    let dim = h.dim();
    let scale: f64 = h.terms().iter().map(|(c, _)| c.abs()).sum::<f64>().max(1.0);
    let tol = LANCZOS_TOL * scale;
    let max_iter = dim.min(400);

    let mut rng = ChaCha8Rng::seed_from_u64(0x00C1_A55E ^ salt.wrapping_mul(0x9E37_79B9));
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out(&mut v, deflate);
    let n = norm(&v);
    if n < 1e-12 {
        return Err(Error::Solver("start vector vanished after deflation".into()));
    }
    rescale(&mut v, 1.0 / n);

    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0f64; dim];
    let mut exhausted = false;

    for j in 0..max_iter {
        h.apply_real(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(&mut w, -alpha, &basis[j]);
        if j > 0 {
            let b = betas[j - 1];
            let prev = basis[j - 1].clone();
            axpy(&mut w, -b, &prev);
        }
        // Full reorthogonalization keeps the basis clean in the presence
        // of degenerate clusters; the extra dots are cheap at these sizes.
        project_out(&mut w, deflate);
        project_out(&mut w, &basis);
        project_out(&mut w, &basis);

        let beta = norm(&w);
        if beta < 1e-13 * scale {
            exhausted = true;
        }

        let check = exhausted || j + 1 == max_iter || (j >= 8 && j % 4 == 3);
        if check {
            let (theta, s) = tridiag_lowest(&alphas, &betas)?;
            let resid = if exhausted {
                0.0
            } else {
                (beta * s[s.len() - 1]).abs()
            };
            if resid <= tol || exhausted || j + 1 == max_iter {
                if resid > tol && !exhausted {
                    return Err(Error::Solver(format!(
                        "iterative eigensolver failed to converge: residual {resid:.3e}"
                    )));
                }
                let mut y = vec![0.0f64; dim];
                for (c, b) in s.iter().zip(&basis) {
                    axpy(&mut y, *c, b);
                }
                project_out(&mut y, deflate);
                let n = norm(&y);
                if n < 1e-8 {
                    return Err(Error::Solver(
                        "Ritz vector collapsed under deflation".into(),
                    ));
                }
                rescale(&mut y, 1.0 / n);
                return Ok((theta, y));
            }
        }
        if exhausted {
            unreachable!("exhaustion always returns above");
        }
        betas.push(beta);
        rescale(&mut w, 1.0 / beta);
        basis.push(w.clone());
    }
    Err(Error::Solver("iterative eigensolver did not converge".into()))
}

/// Lowest eigenvalue and eigenvector of the symmetric tridiagonal matrix
/// with the given diagonal and off-diagonal entries.
fn tridiag_lowest(diag: &[f64], off: &[f64]) -> Result<(f64, Vec<f64>)> {
    let m = diag.len();
    let mut t = Array2::<f64>::zeros((m, m));
    for (i, &a) in diag.iter().enumerate() {
        t[[i, i]] = a;
    }
    for (i, &b) in off.iter().enumerate().take(m.saturating_sub(1)) {
        t[[i, i + 1]] = b;
        t[[i + 1, i]] = b;
    }
    let (evals, evecs) = t
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Solver(format!("tridiagonal solve failed: {e}")))?;
    Ok((evals[0], evecs.column(0).to_vec()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn rescale(a: &mut [f64], f: f64) {
    for x in a {
        *x *= f;
    }
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        if c != 0.0 {
            axpy(v, -c, b);
        }
    }
}

/// The string operator: the product of every interior stabilizer,
/// K_2 K_3 ⋯ K_{N−1} in 1-based labels. Its letters read
/// σ^x σ^y σ^z ⋯ σ^z σ^y σ^x with phase +1.
pub fn string_operator(n_sites: usize) -> Result<PauliString> {
    if n_sites < 3 {
        return Err(Error::InvalidSpec(format!(
            "string operator needs at least 3 sites, got {n_sites}"
        )));
    }
    let spec = ChainSpec::chain(n_sites, 0.0, Boundary::Open)?;
    let mut acc = PauliString::identity(n_sites);
    for k in stabilizer_list(&spec) {
        acc = pauli_mul(&acc, &k)?;
    }
    Ok(acc)
}

/// String order parameter: expectation of [`string_operator`] on `v`.
/// Equals 1 on cluster states and vanishes deep in the antiferromagnetic
/// phase.
pub fn string_order(v: &StateVector) -> Result<f64> {
    let op = string_operator(v.n_sites())?;
    Ok(v.expectation(&op)?.re)
}

/// Two-point staggered correlator (−1)^r ⟨σ^y_i σ^y_{i+r}⟩ averaged over
/// every position i with both sites on the chain.
pub fn staggered_correlator(v: &StateVector, r: usize) -> Result<f64> {
    let n = v.n_sites();
    if r == 0 || r >= n {
        return Err(Error::InvalidArgument(format!(
            "separation must satisfy 1 <= r <= {}, got {r}",
            n - 1
        )));
    }
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = 0.0;
    let pairs = n - r;
    for i in 0..pairs {
        let op = PauliString::identity(n)
            .with(i, crate::pauli::Pauli::Y)
            .with(i + r, crate::pauli::Pauli::Y);
        acc += v.expectation(&op)?.re;
    }
    Ok(sign * acc / pairs as f64)
}

/// Low-energy response of the open-chain ground manifold to a perturbation:
/// the four lowest energies of H(0) + strength·P, relative to their minimum.
pub fn degeneracy_split(
    spec: &ChainSpec,
    perturbation: &[(f64, PauliString)],
    strength: f64,
) -> Result<[f64; 4]> {
    if spec.boundary != Boundary::Open {
        return Err(Error::InvalidArgument(
            "degeneracy splitting is defined for open chains".into(),
        ));
    }
    if spec.lambda != 0.0 {
        return Err(Error::InvalidArgument(
            "degeneracy splitting starts from the λ=0 Hamiltonian".into(),
        ));
    }
    let mut terms = crate::model::hamiltonian_terms(spec);
    for (c, s) in perturbation {
        terms.push((strength * c, s.clone()));
    }
    let h = OperatorMatrix::from_terms(spec.n_sites, terms)?;
    // Splittings are resolved to machine precision, so prefer the dense
    // solver whenever the dimension allows it; the iterative path only
    // guarantees its convergence tolerance inside a degenerate multiplet.
    let energies = if h.dim() <= 1 << crate::DENSE_MAX_SITES {
        full_spectrum(&h)?
    } else {
        lowest_eigenpairs(&h, 4)?.energies
    };
    let e0 = energies[0];
    let mut gaps = [0.0; 4];
    for (g, e) in gaps.iter_mut().zip(&energies) {
        *g = e - e0;
    }
    Ok(gaps)
}

/// Solves one spec and bundles the ground-state observables.
pub fn observables(spec: &ChainSpec) -> Result<ObservableBundle> {
    let h = build_hamiltonian(spec)?;
    let res = ground_spectrum(&h, DEGENERACY_TOL)?;
    let v = &res.vectors[0];
    let r = spec.n_sites / 2;
    Ok(ObservableBundle {
        energy: res.energies[0],
        string_order: string_order(v)?,
        staggered_corr: staggered_correlator(v, r.max(1))?,
        ground_degeneracy: res.ground_degeneracy(),
    })
}

/// Deterministic single representative of the ground space. A unique ground
/// state is returned as is (flag `false`). A degenerate manifold is resolved
/// by projecting onto the +1 eigenspace of the global flip ∏σ^z; if that
/// subspace is still more than one-dimensional (open cluster chains), the
/// top eigenvector of the boundary-label product σ^z_1σ^x_2 · σ^x_{N−1}σ^z_N
/// restricted to it breaks the remaining tie (flag `true`).
pub fn symmetric_ground_state(spec: &ChainSpec) -> Result<(StateVector, bool)> {
    let h = build_hamiltonian(spec)?;
    let multiplet = ground_spectrum(&h, DEGENERACY_TOL)?;
    symmetric_member(spec.n_sites, &multiplet)
}

/// The deterministic representative of an already-computed ground
/// multiplet; see [`symmetric_ground_state`] for the selection policy.
pub fn symmetric_member(n: usize, multiplet: &SpectrumResult) -> Result<(StateVector, bool)> {
    if multiplet.vectors.is_empty() {
        return Err(Error::InvalidArgument("empty ground multiplet".into()));
    }
    if multiplet.vectors.len() == 1 {
        return Ok((multiplet.vectors[0].clone(), false));
    }
    let parity = crate::model::parity_operator(n);

    // Orthonormal basis of the even-parity slice of the manifold.
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in &multiplet.vectors {
        let pv = crate::pauli::apply_pauli(&parity, v)?;
        let mut w: Vec<Complex64> = v
            .amplitudes()
            .iter()
            .zip(pv.amplitudes())
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= overlap * bi;
            }
        }
        let nw = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nw > 1e-6 {
            for c in w.iter_mut() {
                *c /= nw;
            }
            basis.push(w);
        }
    }
    match basis.len() {
        0 => Err(Error::InvalidState(
            "degenerate ground space has no even-parity member".into(),
        )),
        1 => Ok((
            StateVector::from_amplitudes(basis.into_iter().next().unwrap())?,
            true,
        )),
        d => {
            if n < 4 {
                return Err(Error::InvalidState(
                    "cannot resolve degenerate ground space on fewer than 4 sites".into(),
                ));
            }
            let tie = PauliString::identity(n)
                .with(0, crate::pauli::Pauli::Z)
                .with(1, crate::pauli::Pauli::X)
                .with(n - 2, crate::pauli::Pauli::X)
                .with(n - 1, crate::pauli::Pauli::Z);
            let mut m = Array2::<Complex64>::zeros((d, d));
            for (j, b) in basis.iter().enumerate() {
                let tb = crate::pauli::apply_pauli(
                    &tie,
                    &StateVector::from_amplitudes(b.clone())?,
                )?;
                for (i, a) in basis.iter().enumerate() {
                    m[[i, j]] = a
                        .iter()
                        .zip(tb.amplitudes())
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                }
            }
            let (evals, evecs) = m
                .eigh(UPLO::Lower)
                .map_err(|e| Error::Solver(format!("tie-break eigensolve failed: {e}")))?;
            if evals[d - 1] - evals[d - 2] < 1e-9 {
                return Err(Error::InvalidState(
                    "ground space not resolved by parity and boundary labels".into(),
                ));
            }
            let dim = basis[0].len();
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            for (k, b) in basis.iter().enumerate() {
                let c = evecs[[k, d - 1]];
                for (a, x) in amps.iter_mut().zip(b) {
                    *a += c * x;
                }
            }
            Ok((StateVector::from_amplitudes(amps)?, true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_cluster_state, hamiltonian_terms};
    use crate::pauli::Pauli;
    use approx::assert_abs_diff_eq;

    #[test]
    fn open_manifold_is_fourfold_at_minus_n_minus_two() {
        let spec = ChainSpec::chain(8, 0.0, Boundary::Open).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let res = ground_spectrum(&h, 1e-9).unwrap();
        assert_eq!(res.energies.len(), 4);
        for e in &res.energies {
            assert_abs_diff_eq!(*e, -6.0, epsilon = 1e-10);
        }
        assert_eq!(res.ground_degeneracy(), 4);
    }

    #[test]
    fn ring_ground_state_is_unique() {
        let spec = ChainSpec::chain(8, 0.0, Boundary::Periodic).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let res = ground_spectrum(&h, 1e-9).unwrap();
        assert_eq!(res.energies.len(), 1);
        assert_abs_diff_eq!(res.energies[0], -8.0, epsilon = 1e-10);
    }

    #[test]
    fn string_operator_reads_dressed() {
        let s = string_operator(6).unwrap();
        use Pauli::*;
        assert_eq!(s.letters, vec![X, Y, Z, Z, Y, X]);
        assert_eq!(s.phase, crate::pauli::Phase::PlusOne);
        let s4 = string_operator(4).unwrap();
        assert_eq!(s4.letters, vec![X, Y, Y, X]);
    }

    #[test]
    fn string_order_is_one_on_cluster_states() {
        for spec in [
            ChainSpec::chain(8, 0.0, Boundary::Periodic).unwrap(),
            ChainSpec::chain(7, 0.0, Boundary::Open).unwrap(),
        ] {
            let c = build_cluster_state(&spec).unwrap();
            assert_abs_diff_eq!(string_order(&c).unwrap(), 1.0, epsilon = 1e-12);
        }
        let zero = StateVector::basis_state(6, 0);
        assert_abs_diff_eq!(string_order(&zero).unwrap(), 0.0, epsilon = 1e-14);
    }

    fn neel_pair(n: usize) -> StateVector {
        // (|y+ y− y+ …⟩ + |y− y+ y− …⟩)/√2, the ideal staggered state.
        let h = 1.0 / 2.0f64.sqrt();
        let plus = [Complex64::new(h, 0.0), Complex64::new(0.0, h)];
        let minus = [Complex64::new(h, 0.0), Complex64::new(0.0, -h)];
        let a: Vec<[Complex64; 2]> = (0..n)
            .map(|j| if j % 2 == 0 { plus } else { minus })
            .collect();
        let b: Vec<[Complex64; 2]> = (0..n)
            .map(|j| if j % 2 == 0 { minus } else { plus })
            .collect();
        let va = StateVector::product_state(&a).unwrap();
        let vb = StateVector::product_state(&b).unwrap();
        let amps: Vec<Complex64> = va
            .amplitudes()
            .iter()
            .zip(vb.amplitudes())
            .map(|(x, y)| x + y)
            .collect();
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn staggered_correlator_separates_the_phases() {
        let spec = ChainSpec::chain(8, 0.0, Boundary::Periodic).unwrap();
        let c = build_cluster_state(&spec).unwrap();
        for r in 2..7 {
            assert_abs_diff_eq!(staggered_correlator(&c, r).unwrap(), 0.0, epsilon = 1e-12);
        }
        let afm = neel_pair(8);
        for r in 1..8 {
            assert_abs_diff_eq!(staggered_correlator(&afm, r).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn iterative_matches_dense() {
        let spec = ChainSpec::chain(10, 0.7, Boundary::Periodic).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let dense = full_spectrum(&h).unwrap();
        let iter = lowest_eigenpairs(&h, 3).unwrap();
        for (a, b) in iter.energies.iter().zip(&dense) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
        }
        // Orthonormality of the returned vectors.
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = iter.vectors[i].inner(&iter.vectors[j]).norm();
                assert_abs_diff_eq!(got, want, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn iterative_resolves_exact_degeneracy() {
        let spec = ChainSpec::chain(10, 0.0, Boundary::Open).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let iter = lowest_eigenpairs(&h, 5).unwrap();
        for e in &iter.energies[..4] {
            assert_abs_diff_eq!(*e, -8.0, epsilon = 1e-9);
        }
        assert!(iter.energies[4] > -8.0 + 0.5);
    }

    #[test]
    fn split_vanishes_without_perturbation_and_under_stabilizers() {
        let spec = ChainSpec::chain(8, 0.0, Boundary::Open).unwrap();
        let ising: Vec<(f64, PauliString)> = (0..7)
            .map(|i| {
                (
                    1.0,
                    PauliString::identity(8).with(i, Pauli::Y).with(i + 1, Pauli::Y),
                )
            })
            .collect();
        let zero = degeneracy_split(&spec, &ising, 0.0).unwrap();
        for g in zero {
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-10);
        }
        let split = degeneracy_split(&spec, &ising, 0.1).unwrap();
        assert!(split.iter().any(|&g| g > 1e-6));
        let stab: Vec<(f64, PauliString)> = stabilizer_list(&spec)
            .into_iter()
            .map(|s| (1.0, s))
            .collect();
        let protected = degeneracy_split(&spec, &stab, 0.1).unwrap();
        for g in protected {
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn cluster_state_energy_is_variational_bound() {
        for &lambda in &[0.0, 0.3, 0.8, 1.5] {
            let spec = ChainSpec::chain(8, lambda, Boundary::Periodic).unwrap();
            let h = build_hamiltonian(&spec).unwrap();
            let c = build_cluster_state(&spec).unwrap();
            let e_var = h.expectation(&c).unwrap();
            let e0 = ground_spectrum(&h, 1e-9).unwrap().ground_energy();
            assert!(e_var >= e0 - 1e-10);
        }
    }

    #[test]
    fn string_order_decays_into_the_afm_phase() {
        let mut prev = f64::INFINITY;
        for &lambda in &[1.2, 1.6, 2.0] {
            let spec = ChainSpec::chain(12, lambda, Boundary::Periodic).unwrap();
            let h = build_hamiltonian(&spec).unwrap();
            let res = lowest_eigenpairs(&h, 1).unwrap();
            let so = string_order(&res.vectors[0]).unwrap();
            assert!(so < prev);
            prev = so;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = ChainSpec::chain(6, 0.0, Boundary::Periodic).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        assert!(lowest_eigenpairs(&h, 0).is_err());
        let v = StateVector::basis_state(6, 0);
        assert!(staggered_correlator(&v, 0).is_err());
        assert!(staggered_correlator(&v, 6).is_err());
        let pert: Vec<(f64, PauliString)> = vec![];
        assert!(degeneracy_split(&spec, &pert, 0.1).is_err());
        let terms = hamiltonian_terms(&spec);
        let h_big = OperatorMatrix::from_terms(6, terms).unwrap();
        let _ = h_big;
    }

    #[test]
    fn symmetric_representative_is_deterministic() {
        // Unique ground states pass straight through with the flag down.
        let ring = ChainSpec::chain(8, 0.5, Boundary::Periodic).unwrap();
        let (v, was_degenerate) = symmetric_ground_state(&ring).unwrap();
        assert!(!was_degenerate);
        let h = build_hamiltonian(&ring).unwrap();
        let e = h.expectation(&v).unwrap();
        let reference = lowest_eigenpairs(&h, 1).unwrap().energies[0];
        assert_abs_diff_eq!(e, reference, epsilon = 1e-9);

        // The fourfold open manifold resolves to the even-flip-parity member
        // with +1 eigenvalue of the boundary label pair.
        let open = ChainSpec::chain(8, 0.0, Boundary::Open).unwrap();
        let (v, was_degenerate) = symmetric_ground_state(&open).unwrap();
        assert!(was_degenerate);
        let parity = crate::model::parity_operator(8);
        assert_abs_diff_eq!(v.expectation(&parity).unwrap().re, 1.0, epsilon = 1e-9);
        let tie = PauliString::identity(8)
            .with(0, Pauli::Z)
            .with(1, Pauli::X)
            .with(6, Pauli::X)
            .with(7, Pauli::Z);
        assert_abs_diff_eq!(v.expectation(&tie).unwrap().re, 1.0, epsilon = 1e-9);

        // Deep antiferromagnet: the quasi-degenerate pair resolves to the
        // symmetric combination, again with even flip parity.
        let afm = ChainSpec::chain(8, 100.0, Boundary::Periodic).unwrap();
        let (v, was_degenerate) = symmetric_ground_state(&afm).unwrap();
        assert!(was_degenerate);
        assert_abs_diff_eq!(v.expectation(&parity).unwrap().re, 1.0, epsilon = 1e-9);
    }
}
