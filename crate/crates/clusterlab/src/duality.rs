//! Bond-algebra duality: the operator rewriting μ_i^z = σ_i^x σ_{i+1}^x,
//! μ_i^x = ∏_{j≤i} σ_j^z (with μ_i^y = i μ_i^x μ_i^z), its exact operator
//! identities, and the cluster-to-GHZ mapping.
//!
//! The μ operators form a faithful copy of the Pauli algebra, so the map
//! extends to arbitrary strings and preserves commutation classes. Under
//! it the two couplings trade places: μ_i^y μ_{i+1}^y = −K_{i+1} and
//! μ_{i−1}^x μ_i^z μ_{i+1}^x = −σ_i^y σ_{i+1}^y, which sends H(λ) to
//! λ·H(1/λ) up to boundary operators. Three finite-chain identities make
//! this exact, and this module checks them entrywise on dense matrices:
//!
//! - open chain, λ=0: the boundary-completed cluster Hamiltonian (ends
//!   closed with σ^z_1 σ^x_2 and σ^x_{N−1} σ^z_N) equals
//!   Σ_{i=1}^{N−1} μ_i^y μ_{i+1}^y − B̂ with B̂ = i(∏_i μ_i^z) μ_1^y;
//! - ring, λ=0: H equals Σ_{i=1}^{N−2} μ_i^y μ_{i+1}^y − B̂_p with
//!   B̂_p = (∏_i μ_i^z)(i μ_1^y μ_N^z − μ_{N−1}^y μ_N^y);
//! - ring, any λ: H(λ) equals Σ_{i=1}^{N−2} μ_i^y μ_{i+1}^y
//!   − λ Σ_{i=1}^{N−1} μ_{i−1}^x μ_i^z μ_{i+1}^x − B̂(λ) with
//!   B̂(λ) = (∏_i μ_i^z)(i μ_1^y μ_N^z − μ_{N−1}^y μ_N^y
//!   + iλ μ_{N−1}^x μ_N^y μ_1^x).
//!
//! The λ on the last boundary term is this crate's correction: with a
//! λ-independent coefficient the identity misses by exactly (1−λ)·σ^y_1
//! σ^y_N, and [`DualityResidual`] reports that as-written deviation next
//! to the corrected one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ed;
use crate::error::{Error, Result};
use crate::model::{
    build_hamiltonian, hamiltonian_terms, Boundary, ChainSpec, OperatorMatrix,
};
use crate::pauli::{pauli_mul, Pauli, PauliString, Phase, StateVector};

/// The one globally fixed phase choice under which all three operator
/// identities hold exactly; recorded in every residual report and manifest.
pub const PHASE_CONVENTION: &str = "mu_y = +i mu_x mu_z; third boundary term scaled by lambda";

/// σ-string of μ_i^z = σ_i^x σ_{i+1}^x (σ_{N+1}^x read as identity).
pub fn mu_z(n_sites: usize, i: usize) -> PauliString {
    let mut s = PauliString::identity(n_sites).with(i, Pauli::X);
    if i + 1 < n_sites {
        s = s.with(i + 1, Pauli::X);
    }
    s
}

/// σ-string of μ_i^x = ∏_{j≤i} σ_j^z.
pub fn mu_x(n_sites: usize, i: usize) -> PauliString {
    let mut s = PauliString::identity(n_sites);
    for j in 0..=i {
        s = s.with(j, Pauli::Z);
    }
    s
}

/// σ-string of μ_i^y = i μ_i^x μ_i^z.
pub fn mu_y(n_sites: usize, i: usize) -> Result<PauliString> {
    Ok(pauli_mul(&mu_x(n_sites, i), &mu_z(n_sites, i))?.scaled(Phase::PlusI))
}

/// Expands a string written in μ letters into its σ representation.
/// Letter a at site i stands for μ_i^a; the phase is carried through.
/// Distinct-site images commute, so the expansion order is immaterial.
pub fn dual_image(p: &PauliString) -> Result<PauliString> {
    let n = p.n_sites();
    let mut acc = PauliString::identity(n).scaled(p.phase);
    for (i, letter) in p.letters.iter().enumerate() {
        let image = match letter {
            Pauli::I => continue,
            Pauli::X => mu_x(n, i),
            Pauli::Z => mu_z(n, i),
            Pauli::Y => mu_y(n, i)?,
        };
        acc = pauli_mul(&acc, &image)?;
    }
    Ok(acc)
}

/// μ-language string for the product ∏_{i=1}^{N} μ_i^z.
fn mu_all_z(n: usize) -> PauliString {
    PauliString::from_letters(Phase::PlusOne, vec![Pauli::Z; n])
}

/// Entrywise maximum deviation between two dense term sums.
fn dense_residual(
    n: usize,
    lhs: &[(f64, PauliString)],
    rhs: &[(f64, PauliString)],
) -> Result<f64> {
    let a = OperatorMatrix::from_terms(n, lhs.to_vec())?.to_dense_complex()?;
    let b = OperatorMatrix::from_terms(n, rhs.to_vec())?.to_dense_complex()?;
    let mut d = 0.0f64;
    ndarray::Zip::from(&a).and(&b).for_each(|x, y| {
        d = d.max((x - y).norm());
    });
    Ok(d)
}

/// Open-chain cluster Hamiltonian with the end terms completed by reading
/// the out-of-range σ^x factors as identity: −σ^z_1σ^x_2 − Σ K_i −
/// σ^x_{N−1}σ^z_N. Its ground state is unique, unlike the bare open sum.
fn boundary_completed_open_terms(n: usize) -> Vec<(f64, PauliString)> {
    let mut terms = vec![(
        -1.0,
        PauliString::identity(n).with(0, Pauli::Z).with(1, Pauli::X),
    )];
    let spec = ChainSpec::chain(n, 0.0, Boundary::Open).expect("valid spec");
    for k in crate::model::stabilizer_list(&spec) {
        terms.push((-1.0, k));
    }
    terms.push((
        -1.0,
        PauliString::identity(n)
            .with(n - 2, Pauli::X)
            .with(n - 1, Pauli::Z),
    ));
    terms
}

/// μ-language terms of the boundary operator of the coupled-ring identity:
/// (∏μ^z)(i μ_1^y μ_N^z − μ_{N−1}^y μ_N^y + i·c₃·μ_{N−1}^x μ_N^y μ_1^x),
/// with the third coefficient c₃ supplied by the caller (λ for the exact
/// identity, 1 for the as-written form).
fn boundary_mu_terms(n: usize, c3: f64) -> Result<Vec<(f64, PauliString)>> {
    let all_z = mu_all_z(n);
    let y1 = PauliString::single(n, 0, Pauli::Y);
    let zn = PauliString::single(n, n - 1, Pauli::Z);
    let t1 = pauli_mul(&all_z, &pauli_mul(&y1, &zn)?)?.scaled(Phase::PlusI);
    let yn1 = PauliString::single(n, n - 2, Pauli::Y);
    let yn = PauliString::single(n, n - 1, Pauli::Y);
    let t2 = pauli_mul(&all_z, &pauli_mul(&yn1, &yn)?)?;
    let xn1 = PauliString::single(n, n - 2, Pauli::X);
    let x1 = PauliString::single(n, 0, Pauli::X);
    let t3 = pauli_mul(&all_z, &pauli_mul(&xn1, &pauli_mul(&yn, &x1)?)?)?.scaled(Phase::PlusI);
    Ok(vec![(1.0, t1), (-1.0, t2), (c3, t3)])
}

/// Deviation report of the three duality identities at one (N, λ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityResidual {
    pub n_sites: usize,
    pub lambda: f64,
    /// Maximum entrywise deviation over the three identities under the
    /// recorded convention. Zero to machine precision when all hold.
    pub max_entry_deviation: f64,
    /// Deviation of the coupled-ring identity with the boundary operator
    /// exactly as written (third term not scaled by λ); equals |1 − λ|.
    pub printed_boundary_residual: f64,
    pub phase_convention: String,
}

/// Builds both sides of the three duality identities as dense matrices and
/// returns the maximum entrywise deviation. Every μ factor on the
/// right-hand sides goes through [`dual_image`]; nothing is simplified by
/// hand first.
pub fn verify_duality_identity(n_sites: usize, lambda: f64) -> Result<DualityResidual> {
    if !(4..=10).contains(&n_sites) {
        return Err(Error::InvalidSpec(format!(
            "identity check runs on 4 to 10 sites, got {n_sites}"
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "coupling must be finite and nonnegative, got {lambda}"
        )));
    }
    let n = n_sites;

    // Open chain at λ=0: Σ_{i=1}^{N−1} μ_i^y μ_{i+1}^y − i(∏μ^z)μ_1^y.
    let mut rhs: Vec<(f64, PauliString)> = Vec::new();
    for i in 0..n - 1 {
        let mu_pair = PauliString::identity(n)
            .with(i, Pauli::Y)
            .with(i + 1, Pauli::Y);
        rhs.push((1.0, dual_image(&mu_pair)?));
    }
    let b_open = pauli_mul(&mu_all_z(n), &PauliString::single(n, 0, Pauli::Y))?
        .scaled(Phase::PlusI);
    rhs.push((-1.0, dual_image(&b_open)?));
    let res_open = dense_residual(n, &boundary_completed_open_terms(n), &rhs)?;

    // Ring at λ=0: Σ_{i=1}^{N−2} μ_i^y μ_{i+1}^y − B̂_p.
    let ring0 = ChainSpec::chain(n, 0.0, Boundary::Periodic)?;
    let mut rhs: Vec<(f64, PauliString)> = Vec::new();
    for i in 0..n - 2 {
        let mu_pair = PauliString::identity(n)
            .with(i, Pauli::Y)
            .with(i + 1, Pauli::Y);
        rhs.push((1.0, dual_image(&mu_pair)?));
    }
    for (c, t) in boundary_mu_terms(n, 0.0)? {
        if c != 0.0 {
            rhs.push((-c, dual_image(&t)?));
        }
    }
    let res_ring0 = dense_residual(n, &hamiltonian_terms(&ring0), &rhs)?;

    // Ring at coupling λ, with and without the λ-scaled third boundary term.
    let ring = ChainSpec::chain(n, lambda, Boundary::Periodic)?;
    let lhs = hamiltonian_terms(&ring);
    let build_rhs = |c3: f64| -> Result<Vec<(f64, PauliString)>> {
        let mut rhs: Vec<(f64, PauliString)> = Vec::new();
        for i in 0..n - 2 {
            let mu_pair = PauliString::identity(n)
                .with(i, Pauli::Y)
                .with(i + 1, Pauli::Y);
            rhs.push((1.0, dual_image(&mu_pair)?));
        }
        for i in 0..n - 1 {
            // μ_{i−1}^x μ_i^z μ_{i+1}^x with μ_0^x read as identity.
            let mut s = PauliString::identity(n)
                .with(i, Pauli::Z)
                .with(i + 1, Pauli::X);
            if i > 0 {
                s.letters[i - 1] = Pauli::X;
            }
            rhs.push((-lambda, dual_image(&s)?));
        }
        for (c, t) in boundary_mu_terms(n, c3)? {
            rhs.push((-c, dual_image(&t)?));
        }
        Ok(rhs)
    };
    let res_coupled = dense_residual(n, &lhs, &build_rhs(lambda)?)?;
    let res_printed = dense_residual(n, &lhs, &build_rhs(1.0)?)?;

    Ok(DualityResidual {
        n_sites,
        lambda,
        max_entry_deviation: res_open.max(res_ring0).max(res_coupled),
        printed_boundary_residual: res_printed,
        phase_convention: PHASE_CONVENTION.into(),
    })
}

/// The dual model read literally in σ variables: Σ_{i=1}^{N−1} σ_i^y
/// σ_{i+1}^y − B̂ with B̂ = i(∏σ^z)σ_1^y = σ_1^x σ_2^z ⋯ σ_N^z. Its unique
/// ground state is the GHZ-like superposition of the two staggered-σ^y
/// product states with energy −N.
pub fn dual_ising_hamiltonian(n_sites: usize) -> Result<OperatorMatrix> {
    if n_sites < 4 {
        return Err(Error::InvalidSpec(format!(
            "dual chain needs at least 4 sites, got {n_sites}"
        )));
    }
    let n = n_sites;
    let mut terms: Vec<(f64, PauliString)> = Vec::new();
    for i in 0..n - 1 {
        terms.push((
            1.0,
            PauliString::identity(n).with(i, Pauli::Y).with(i + 1, Pauli::Y),
        ));
    }
    let b = pauli_mul(&crate::model::parity_operator(n), &PauliString::single(n, 0, Pauli::Y))?
        .scaled(Phase::PlusI);
    terms.push((-1.0, b));
    OperatorMatrix::from_terms(n, terms)
}

/// Ground state of [`dual_ising_hamiltonian`]: the image of the cluster
/// state under the duality. Asserted unique before returning.
pub fn dual_of_cluster_state(n_sites: usize) -> Result<StateVector> {
    if n_sites % 2 != 0 || n_sites > 12 {
        return Err(Error::InvalidSpec(format!(
            "dual ground state runs on even chains up to 12 sites, got {n_sites}"
        )));
    }
    let h = dual_ising_hamiltonian(n_sites)?;
    let res = ed::lowest_eigenpairs(&h, 2)?;
    if res.energies[1] - res.energies[0] < 1e-6 {
        return Err(Error::Solver(
            "dual ground state unexpectedly degenerate".into(),
        ));
    }
    Ok(res.vectors[0].clone())
}

/// The staggered product state |+y, −y, +y, …⟩ and its global flip, summed:
/// the even-parity GHZ pair in the σ^y basis.
pub fn ghz_y_pair(n_sites: usize) -> Result<StateVector> {
    let h = 1.0 / 2.0f64.sqrt();
    let plus = [Complex64::new(h, 0.0), Complex64::new(0.0, h)];
    let minus = [Complex64::new(h, 0.0), Complex64::new(0.0, -h)];
    let a: Vec<[Complex64; 2]> = (0..n_sites)
        .map(|j| if j % 2 == 0 { plus } else { minus })
        .collect();
    let b: Vec<[Complex64; 2]> = (0..n_sites)
        .map(|j| if j % 2 == 0 { minus } else { plus })
        .collect();
    let va = StateVector::product_state(&a)?;
    let vb = StateVector::product_state(&b)?;
    let amps: Vec<Complex64> = va
        .amplitudes()
        .iter()
        .zip(vb.amplitudes())
        .map(|(x, y)| x + y)
        .collect();
    StateVector::from_amplitudes(amps)
}

/// The recorded local frame change exp(i π/4 σ_1^y) aligning the dual
/// ground state with the plain GHZ pair of [`ghz_y_pair`]: it rotates the
/// relative phase i between the two staggered branches away.
pub fn ghz_frame_rotation(v: &StateVector) -> Result<StateVector> {
    let dim = v.dim();
    let h = 1.0 / 2.0f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for z in 0..dim {
        if z & 1 == 0 {
            let a0 = v.amplitudes()[z];
            let a1 = v.amplitudes()[z | 1];
            // exp(iπ/4 σ^y) = (1 + iσ^y)/√2 acting on site 1.
            amps[z] = h * (a0 + a1);
            amps[z | 1] = h * (-a0 + a1);
        }
    }
    StateVector::from_amplitudes(amps)
}

/// Spectral comparison behind the self-duality statement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfDualityReport {
    pub n_sites: usize,
    pub lambda: f64,
    /// max |sorted spec H(λ) − λ·sorted spec H(1/λ)| per site on the ring:
    /// zero exactly at λ=1, finite otherwise (boundary operators do not
    /// scale). Reported per site because the raw maximum is dominated by an
    /// O(1) boundary-localized level shift that does not shrink with N.
    pub full_distance: f64,
    /// Same per-site comparison for the boundary-free bulk sums (open-chain
    /// term ranges): the finite-size remnant of H(λ)_dual = λ·H(1/λ).
    pub bulk_distance: f64,
}

/// Compares the ring spectrum of H(λ) with λ times the ring spectrum of
/// H(1/λ), and likewise for the bulk-only open sums.
pub fn self_duality_check(lambda: f64, n_sites: usize) -> Result<SelfDualityReport> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument(
            "self-duality comparison needs a positive coupling".into(),
        ));
    }
    if n_sites > 12 {
        return Err(Error::Capacity(n_sites, 12));
    }
    let spectrum = |boundary: Boundary, l: f64| -> Result<Vec<f64>> {
        let spec = ChainSpec::chain(n_sites, l, boundary)?;
        ed::full_spectrum(&build_hamiltonian(&spec)?)
    };
    let distance = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
            / n_sites as f64
    };
    let full_a = spectrum(Boundary::Periodic, lambda)?;
    let full_b: Vec<f64> = spectrum(Boundary::Periodic, 1.0 / lambda)?
        .iter()
        .map(|e| lambda * e)
        .collect();
    let bulk_a = spectrum(Boundary::Open, lambda)?;
    let bulk_b: Vec<f64> = spectrum(Boundary::Open, 1.0 / lambda)?
        .iter()
        .map(|e| lambda * e)
        .collect();
    Ok(SelfDualityReport {
        n_sites,
        lambda,
        full_distance: distance(&full_a, &full_b),
        bulk_distance: distance(&bulk_a, &bulk_b),
    })
}
