//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    max_abs_diff(m, &m.adjoint()) <= tol
}

/// Eigenvalues (ascending) and eigenvectors of a hermitian matrix.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let e = SymmetricEigen::new(hermitian_part(m));
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(m.nrows(), idx.len(), |r, col| e.eigenvectors[(r, idx[col])]);
    (vals, vecs)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    eigh(m).0.first().copied().unwrap_or(0.0)
}

/// f(M) for hermitian M by spectral calculus.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    let diag = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| c(f(x), 0.0))));
    &vecs * diag * vecs.adjoint()
}

pub fn expm_herm(m: &CMat, t: f64) -> CMat {
    herm_fn(m, |x| (t * x).exp())
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| gaussian(rng))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    let v = random_vector(rng, n);
    let nrm = v.norm();
    v.unscale(nrm)
}

/// Wishart-style positive semidefinite sample `G·G*`.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let g = random_matrix(rng, n);
    &g * g.adjoint()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    hermitian_part(&random_matrix(rng, n))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Partial trace of a pure state on `dims`, keeping the listed subsystems.
pub fn reduced_density(psi: &CVec, dims: &[usize], keep: &[usize]) -> CMat {
    let n = dims.len();
    let total: usize = dims.iter().product();
    assert_eq!(psi.len(), total);
    let kd: usize = keep.iter().map(|&i| dims[i]).product();
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let td: usize = traced.iter().map(|&i| dims[i]).product();
    let compose = |kv: &[usize], tv: &[usize]| {
        let mut full = vec![0; n];
        for (j, &i) in keep.iter().enumerate() {
            full[i] = kv[j];
        }
        for (j, &i) in traced.iter().enumerate() {
            full[i] = tv[j];
        }
        full.iter().zip(dims).fold(0, |acc, (&x, &dm)| acc * dm + x)
    };
    let split = |idx: usize, sub: &[usize]| {
        let mut out = vec![0; sub.len()];
        let mut idx = idx;
        for j in (0..sub.len()).rev() {
            out[j] = idx % dims[sub[j]];
            idx /= dims[sub[j]];
        }
        out
    };
    let mut rho = CMat::zeros(kd, kd);
    for a in 0..kd {
        let av = split(a, keep);
        for b in 0..kd {
            let bv = split(b, keep);
            let mut s = c(0.0, 0.0);
            for t in 0..td {
                let tv = split(t, &traced);
                s += psi[compose(&av, &tv)] * psi[compose(&bv, &tv)].conj();
            }
            rho[(a, b)] = s;
        }
    }
    rho
}

/// Von Neumann entropy (natural log) of a density matrix; eigenvalues below
/// 1e-12 count as zero.
pub fn entropy(rho: &CMat) -> f64 {
    eigh(rho).0.iter().filter(|&&x| x > 1e-12).map(|&x| -x * x.ln()).sum()
}

/// Align `b` to `a` by the global phase of their overlap and return
/// the max entry deviation after alignment.
pub fn phase_distance(a: &CVec, b: &CVec) -> f64 {
    let ov: Complex64 = b.dotc(a);
    if ov.norm() < 1e-300 {
        return f64::INFINITY;
    }
    let ph = ov / ov.norm();
    (a - b * ph).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
