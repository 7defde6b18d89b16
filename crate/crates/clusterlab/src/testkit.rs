//! Shared helpers for in-crate unit tests: a dense-matrix oracle built from
//! explicit 2x2 Pauli matrices and Kronecker products, independent of the
//! bit-mask kernels under test.

use ndarray::Array2;
use num_complex::Complex64;

use crate::pauli::{Pauli, PauliString};

pub fn mat2(p: Pauli) -> Array2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => ndarray::array![[l, o], [o, l]],
        Pauli::X => ndarray::array![[o, l], [l, o]],
        Pauli::Y => ndarray::array![[o, -i], [i, o]],
        Pauli::Z => ndarray::array![[l, o], [o, -l]],
    }
}

pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut m = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    m[[i * rb + k, j * cb + l]] = a[[i, j]] * b[[k, l]];
                }
            }
        }
    }
    m
}

/// Dense matrix of a Pauli string with site 0 in the least significant slot.
pub fn dense_string(s: &PauliString) -> Array2<Complex64> {
    let mut m = Array2::eye(1);
    for p in s.letters.iter().rev() {
        m = kron(&m, &mat2(*p));
    }
    m.mapv_into(|e| e * s.phase.as_complex())
}

/// Dense matrix of a real-coefficient sum of Pauli strings.
pub fn dense_terms(n_sites: usize, terms: &[(f64, PauliString)]) -> Array2<Complex64> {
    let dim = 1usize << n_sites;
    let mut m = Array2::zeros((dim, dim));
    for (c, s) in terms {
        m = m + dense_string(s).mapv_into(|e| e * Complex64::new(*c, 0.0));
    }
    m
}

pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    let mut d = 0.0f64;
    ndarray::Zip::from(a).and(b).for_each(|x, y| {
        d = d.max((x - y).norm());
    });
    d
}
