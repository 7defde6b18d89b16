//! Phase-tracked Pauli string algebra and dense state vectors.
//!
//! A `PauliString` is a tensor product of single-site operators from
//! {1, σ^x, σ^y, σ^z} together with a global phase from {+1, +i, -1, -i}.
//! Products are closed in this set, so operator algebra (multiplication,
//! commutation) runs symbolically without touching a 2^N-dimensional space.
//! The multiplication convention is right-handed: σ^x σ^y = i σ^z.
//!
//! Basis conventions for states: site j maps to bit j of the basis index,
//! so site 0 is the least significant bit. |0> is the σ^z = +1 state and
//! σ^y|0> = i|1>.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Global phase of a Pauli string, stored as the exponent k in i^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power_of_i(k: u8) -> Phase {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power_of_i(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase::from_power_of_i(self.power_of_i() + other.power_of_i())
    }

    pub fn negated(self) -> Phase {
        self.times(Phase::MinusOne)
    }

    pub fn as_complex(self) -> Complex64 {
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// True for +1 and -1. Strings with a real phase are Hermitian.
    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::PlusOne => "+1",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-1",
            Phase::MinusI => "-i",
        };
        write!(f, "{s}")
    }
}

/// Single-site Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Single-site product a*b, returned as (phase, letter).
    fn mul(a: Pauli, b: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (a, b) {
            (I, p) | (p, I) => (Phase::PlusOne, p),
            (X, X) | (Y, Y) | (Z, Z) => (Phase::PlusOne, I),
            (X, Y) => (Phase::PlusI, Z),
            (Y, X) => (Phase::MinusI, Z),
            (Y, Z) => (Phase::PlusI, X),
            (Z, Y) => (Phase::MinusI, X),
            (Z, X) => (Phase::PlusI, Y),
            (X, Z) => (Phase::MinusI, Y),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => '1',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        };
        write!(f, "{c}")
    }
}

/// Result of a commutation check between two Pauli strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CommutationClass {
    Commuting,
    Anticommuting,
}

/// A phase times a tensor product of Pauli letters, one letter per site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    pub phase: Phase,
    pub letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n_sites: usize) -> PauliString {
        PauliString {
            phase: Phase::PlusOne,
            letters: vec![Pauli::I; n_sites],
        }
    }

    pub fn from_letters(phase: Phase, letters: Vec<Pauli>) -> PauliString {
        PauliString { phase, letters }
    }

    /// A single letter at `site`, identity elsewhere.
    pub fn single(n_sites: usize, site: usize, p: Pauli) -> PauliString {
        let mut s = PauliString::identity(n_sites);
        s.letters[site] = p;
        s
    }

    /// Places `p` at `site`, which must currently hold the identity.
    /// Use [`pauli_mul`] when composition is intended.
    pub fn with(mut self, site: usize, p: Pauli) -> PauliString {
        debug_assert!(self.letters[site].is_identity());
        self.letters[site] = p;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.letters.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| !p.is_identity()).count()
    }

    pub fn scaled(mut self, phase: Phase) -> PauliString {
        self.phase = self.phase.times(phase);
        self
    }

    /// Count of σ^y letters; even counts give a real matrix representation.
    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&p| p == Pauli::Y).count()
    }

    /// True when the string is a real matrix: real phase and an even
    /// number of σ^y letters.
    pub fn is_real_operator(&self) -> bool {
        self.phase.is_real() && self.y_count() % 2 == 0
    }

    /// Bit masks used by the state kernels: sites that flip the basis bit
    /// (x or y letter) and sites that contribute a (-1)^bit sign (z or y).
    fn masks(&self) -> (u64, u64) {
        let mut flip = 0u64;
        let mut sign = 0u64;
        for (j, p) in self.letters.iter().enumerate() {
            match p {
                Pauli::X => flip |= 1 << j,
                Pauli::Y => {
                    flip |= 1 << j;
                    sign |= 1 << j;
                }
                Pauli::Z => sign |= 1 << j,
                Pauli::I => {}
            }
        }
        (flip, sign)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase)?;
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Product a*b in matrix convention: b acts first. Phases compose per site,
/// so for example (σ^x at site 0)*(σ^z at site 0) yields -i σ^y.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    if a.n_sites() != b.n_sites() {
        return Err(Error::LengthMismatch(a.n_sites(), b.n_sites()));
    }
    let mut phase = a.phase.times(b.phase);
    let mut letters = Vec::with_capacity(a.n_sites());
    for (&la, &lb) in a.letters.iter().zip(&b.letters) {
        let (ph, l) = Pauli::mul(la, lb);
        phase = phase.times(ph);
        letters.push(l);
    }
    Ok(PauliString { phase, letters })
}

/// Classifies a pair of strings as commuting or anticommuting. Two strings
/// anticommute exactly when the number of sites holding different
/// non-identity letters is odd; phases never matter.
pub fn commutation_class(a: &PauliString, b: &PauliString) -> Result<CommutationClass> {
    if a.n_sites() != b.n_sites() {
        return Err(Error::LengthMismatch(a.n_sites(), b.n_sites()));
    }
    let mut differing = 0usize;
    for (&la, &lb) in a.letters.iter().zip(&b.letters) {
        if !la.is_identity() && !lb.is_identity() && la != lb {
            differing += 1;
        }
    }
    Ok(if differing % 2 == 0 {
        CommutationClass::Commuting
    } else {
        CommutationClass::Anticommuting
    })
}

/// Normalized complex amplitude vector over the 2^N computational basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state |index> (site j is bit j of `index`).
    pub fn basis_state(n_sites: usize, index: usize) -> StateVector {
        assert!(n_sites <= crate::MAX_SITES, "chain too long for dense states");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_sites];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_sites, amps }
    }

    /// Builds a normalized state from raw amplitudes. The length must be a
    /// power of two and the amplitudes must not all vanish.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let n_sites = dim.trailing_zeros() as usize;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero amplitude vector".into()));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(StateVector { n_sites, amps })
    }

    /// Uniform product of per-site two-component factors, normalized.
    /// `factors[j]` holds the (|0>, |1>) amplitudes of site j.
    pub fn product_state(factors: &[[Complex64; 2]]) -> Result<StateVector> {
        let n = factors.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (z, amp) in amps.iter_mut().enumerate() {
            let mut a = Complex64::new(1.0, 0.0);
            for (j, f) in factors.iter().enumerate() {
                a *= f[(z >> j) & 1];
            }
            *amp = a;
        }
        StateVector::from_amplitudes(amps)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        debug_assert_eq!(self.n_sites, other.n_sites);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Expectation value <v|P|v>.
    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        let w = apply_pauli(p, self)?;
        Ok(self.inner(&w))
    }
}

/// Applies a Pauli string to a state in O(2^N) time without materializing
/// any matrix. Unitarity of the letters keeps the result normalized.
pub fn apply_pauli(p: &PauliString, v: &StateVector) -> Result<StateVector> {
    if p.n_sites() != v.n_sites() {
        return Err(Error::LengthMismatch(p.n_sites(), v.n_sites()));
    }
    let (flip, sign) = p.masks();
    let base = p.phase.as_complex()
        * match p.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    let mut out = vec![Complex64::new(0.0, 0.0); v.dim()];
    for (z, &a) in v.amps.iter().enumerate() {
        let par = ((z as u64) & sign).count_ones() & 1;
        let f = if par == 0 { base } else { -base };
        out[z ^ flip as usize] = f * a;
    }
    Ok(StateVector {
        n_sites: v.n_sites,
        amps: out,
    })
}

/// Accumulates coeff * P |src> into `dst` for a string whose matrix is real
/// (even σ^y count, real phase). This is the inner loop of the matrix-free
/// eigensolver, which runs entirely in real arithmetic.
pub(crate) fn accumulate_real(coeff: f64, p: &PauliString, src: &[f64], dst: &mut [f64]) {
    debug_assert!(p.is_real_operator());
    let (flip, sign) = p.masks();
    let mut base = coeff;
    if p.phase == Phase::MinusOne {
        base = -base;
    }
    if p.y_count() % 4 == 2 {
        base = -base;
    }
    let flip = flip as usize;
    for (z, &a) in src.iter().enumerate() {
        let par = ((z as u64) & sign).count_ones() & 1;
        let f = if par == 0 { base } else { -base };
        dst[z ^ flip] += f * a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Independent oracle: explicit 2x2 matrices combined with a Kronecker
    // product, site 0 in the least significant slot.
    fn mat2(p: Pauli) -> Vec<Vec<Complex64>> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match p {
            Pauli::I => vec![vec![l, o], vec![o, l]],
            Pauli::X => vec![vec![o, l], vec![l, o]],
            Pauli::Y => vec![vec![o, -i], vec![i, o]],
            Pauli::Z => vec![vec![l, o], vec![o, -l]],
        }
    }

    fn kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let (ra, ca) = (a.len(), a[0].len());
        let (rb, cb) = (b.len(), b[0].len());
        let mut m = vec![vec![Complex64::new(0.0, 0.0); ca * cb]; ra * rb];
        for i in 0..ra {
            for j in 0..ca {
                for k in 0..rb {
                    for l in 0..cb {
                        m[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }

    pub(crate) fn dense_of(s: &PauliString) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
        for p in s.letters.iter().rev() {
            m = kron(&m, &mat2(*p));
        }
        let ph = s.phase.as_complex();
        for row in &mut m {
            for e in row {
                *e *= ph;
            }
        }
        m
    }

    fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += a[i][k] * b[k][j];
                }
                m[i][j] = s;
            }
        }
        m
    }

    fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
        let mut d = 0.0f64;
        for (ra, rb) in a.iter().zip(b) {
            for (ea, eb) in ra.iter().zip(rb) {
                d = d.max((ea - eb).norm());
            }
        }
        d
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::single(1, 0, Pauli::X);
        let z = PauliString::single(1, 0, Pauli::Z);
        let p = pauli_mul(&x, &z).unwrap();
        assert_eq!(p.phase, Phase::MinusI);
        assert_eq!(p.letters, vec![Pauli::Y]);
    }

    #[test]
    fn identity_is_neutral() {
        let p = PauliString::from_letters(Phase::MinusI, vec![Pauli::Y, Pauli::Z, Pauli::X]);
        let id = PauliString::identity(3);
        assert_eq!(pauli_mul(&id, &p).unwrap(), p);
        assert_eq!(pauli_mul(&p, &id).unwrap(), p);
    }

    #[test]
    fn dual_site_product_example() {
        // i * (z at site 0) * (x x) on two sites comes out as -(y x).
        let mux = PauliString::single(2, 0, Pauli::Z);
        let muz = PauliString::from_letters(Phase::PlusOne, vec![Pauli::X, Pauli::X]);
        let p = pauli_mul(&mux, &muz).unwrap().scaled(Phase::PlusI);
        assert_eq!(p.phase, Phase::MinusOne);
        assert_eq!(p.letters, vec![Pauli::Y, Pauli::X]);
    }

    #[test]
    fn mul_matches_dense_oracle() {
        let cases = [
            (
                PauliString::from_letters(Phase::PlusOne, vec![Pauli::X, Pauli::Y, Pauli::Z]),
                PauliString::from_letters(Phase::PlusI, vec![Pauli::Y, Pauli::Y, Pauli::X]),
            ),
            (
                PauliString::from_letters(Phase::MinusOne, vec![Pauli::Z, Pauli::I, Pauli::X]),
                PauliString::from_letters(Phase::MinusI, vec![Pauli::X, Pauli::Z, Pauli::Y]),
            ),
        ];
        for (a, b) in cases {
            let prod = pauli_mul(&a, &b).unwrap();
            let dense = matmul(&dense_of(&a), &dense_of(&b));
            assert!(max_diff(&dense_of(&prod), &dense) < 1e-14);
        }
    }

    #[test]
    fn commutation_examples() {
        let n = 2;
        let xx = PauliString::from_letters(Phase::PlusOne, vec![Pauli::X, Pauli::X]);
        let zz = PauliString::from_letters(Phase::PlusOne, vec![Pauli::Z, Pauli::Z]);
        assert_eq!(
            commutation_class(&xx, &zz).unwrap(),
            CommutationClass::Commuting
        );
        let x1 = PauliString::single(n, 0, Pauli::X);
        let zx = PauliString::from_letters(Phase::PlusOne, vec![Pauli::Z, Pauli::X]);
        assert_eq!(
            commutation_class(&x1, &zx).unwrap(),
            CommutationClass::Anticommuting
        );
    }

    #[test]
    fn commutation_matches_commutator_norm() {
        let strings = [
            PauliString::from_letters(Phase::PlusOne, vec![Pauli::X, Pauli::I, Pauli::Y]),
            PauliString::from_letters(Phase::PlusI, vec![Pauli::Z, Pauli::Y, Pauli::Y]),
            PauliString::from_letters(Phase::MinusOne, vec![Pauli::I, Pauli::X, Pauli::Z]),
            PauliString::from_letters(Phase::PlusOne, vec![Pauli::Z, Pauli::Z, Pauli::I]),
        ];
        for a in &strings {
            for b in &strings {
                let ab = matmul(&dense_of(a), &dense_of(b));
                let ba = matmul(&dense_of(b), &dense_of(a));
                let mut comm = 0.0f64;
                for (ra, rb) in ab.iter().zip(&ba) {
                    for (ea, eb) in ra.iter().zip(rb) {
                        comm = comm.max((ea - eb).norm());
                    }
                }
                let class = commutation_class(a, b).unwrap();
                if comm < 1e-12 {
                    assert_eq!(class, CommutationClass::Commuting);
                } else {
                    assert_eq!(class, CommutationClass::Anticommuting);
                }
            }
        }
    }

    #[test]
    fn apply_flips_and_phases() {
        // y on |0> gives i|1>
        let y = PauliString::single(1, 0, Pauli::Y);
        let v = StateVector::basis_state(1, 0);
        let w = apply_pauli(&y, &v).unwrap();
        assert_abs_diff_eq!(w.amplitudes()[1].im, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.amplitudes()[1].re, 0.0, epsilon = 1e-15);
        // x at site 1 maps |00> to the basis state with bit 1 set
        let x = PauliString::single(2, 1, Pauli::X);
        let v = StateVector::basis_state(2, 0);
        let w = apply_pauli(&x, &v).unwrap();
        assert_abs_diff_eq!(w.amplitudes()[2].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_matches_dense_oracle() {
        let s = PauliString::from_letters(Phase::MinusI, vec![Pauli::Y, Pauli::Z, Pauli::X]);
        let dense = dense_of(&s);
        let dim = 8;
        let amps: Vec<Complex64> = (0..dim)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let v = StateVector::from_amplitudes(amps).unwrap();
        let w = apply_pauli(&s, &v).unwrap();
        for i in 0..dim {
            let mut expect = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                expect += dense[i][j] * v.amplitudes()[j];
            }
            assert!((w.amplitudes()[i] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn accumulate_real_matches_apply() {
        let s = PauliString::from_letters(Phase::MinusOne, vec![Pauli::Y, Pauli::Z, Pauli::Y]);
        assert!(s.is_real_operator());
        let src: Vec<f64> = (0..8).map(|k| (k as f64 * 0.71).sin()).collect();
        let mut dst = vec![0.0f64; 8];
        accumulate_real(0.8, &s, &src, &mut dst);
        let amps: Vec<Complex64> = src.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let v = StateVector::from_amplitudes(amps).unwrap();
        let w = apply_pauli(&s, &v).unwrap();
        for i in 0..8 {
            assert_abs_diff_eq!(dst[i], 0.8 * w.amplitudes()[i].re * norm, epsilon = 1e-13);
            assert_abs_diff_eq!(w.amplitudes()[i].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn normalization_and_inner() {
        let amps = vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 4.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let v = StateVector::from_amplitudes(amps).unwrap();
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.inner(&v).re, 1.0, epsilon = 1e-12);
        let zero = vec![Complex64::new(0.0, 0.0); 4];
        assert!(StateVector::from_amplitudes(zero).is_err());
    }

    #[test]
    fn square_of_string_is_plus_or_minus_identity() {
        let s = PauliString::from_letters(Phase::PlusI, vec![Pauli::Y, Pauli::X, Pauli::Z]);
        let sq = pauli_mul(&s, &s).unwrap();
        assert!(sq.letters.iter().all(|p| p.is_identity()));
        assert_eq!(sq.phase, Phase::MinusOne);
        let t = PauliString::from_letters(Phase::MinusOne, vec![Pauli::Y, Pauli::X]);
        let sq = pauli_mul(&t, &t).unwrap();
        assert_eq!(sq.phase, Phase::PlusOne);
    }
}
