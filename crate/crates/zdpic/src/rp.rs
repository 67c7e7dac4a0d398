//! Reflection positivity on the doubled space Ĥ⊗H.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{expm_herm, hermitian_part, identity, kron, kron_vec, max_abs, max_abs_diff, min_eigenvalue, random_psd, random_unit_vector, CMat, CVec};
use crate::matrix::QuditKet;
use crate::sft::{sft_bipartite, sft_bipartite_inverse};

/// θ realized as entrywise conjugation in the standard basis.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionContext {
    pub d: usize,
}

impl ReflectionContext {
    pub fn new(d: usize) -> Self {
        ReflectionContext { d }
    }

    pub fn theta(&self, v: &CVec) -> CVec {
        v.map(|z| z.conj())
    }

    /// θ(V⊗W) = θ(W)⊗θ(V), extended antilinearly.
    pub fn theta_extended(&self, x: &CVec) -> CVec {
        let d = self.d;
        CVec::from_fn(d * d, |i, _| x[(i % d) * d + i / d].conj())
    }

    /// θ(V)⊗V.
    pub fn doubled(&self, v: &CVec) -> CVec {
        kron_vec(&self.theta(v), v)
    }
}

/// Operator on Ĥ⊗H; the first tensor factor is Ĥ.
#[derive(Debug, Clone)]
pub struct BipartiteOperator {
    pub d: usize,
    pub m: CMat,
}

impl BipartiteOperator {
    pub fn new(d: usize, m: CMat) -> Result<Self> {
        if m.nrows() != d * d || m.ncols() != d * d {
            return Err(Error::Dimension(format!("expected {0}x{0}, got {1}x{2}", d * d, m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite entry".into()));
        }
        Ok(BipartiteOperator { d, m })
    }

    pub fn zero(d: usize) -> Self {
        BipartiteOperator { d, m: CMat::zeros(d * d, d * d) }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        max_abs_diff(&self.m, &self.m.adjoint()) <= tol
    }

    fn gibbs(&self, beta: f64) -> Result<CMat> {
        if !self.is_self_adjoint(1e-10) {
            return Err(Error::Precondition("H must be self-adjoint".into()));
        }
        Ok(expm_herm(&self.m, -beta))
    }
}

/// ⟨θV⊗V, e^(−βH)·θW⊗W⟩.
pub fn rp_pairing(v: &QuditKet, w: &QuditKet, h: &BipartiteOperator, beta: f64) -> Result<Complex64> {
    if v.d as usize != h.d || w.d as usize != h.d {
        return Err(Error::Dimension("ket and operator dimensions differ".into()));
    }
    if beta < 0.0 {
        return Err(Error::InvalidParameter(format!("β must be ≥ 0, got {beta}")));
    }
    let ctx = ReflectionContext::new(h.d);
    let x = ctx.doubled(&v.amplitudes);
    let y = ctx.doubled(&w.amplitudes);
    Ok(x.dotc(&(h.gibbs(beta)? * y)))
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub min_eigenvalue: f64,
    pub hermitian_deviation: f64,
    pub pass: bool,
}

fn sft_positivity(x: &CMat, d: usize, tol: f64) -> Result<PositivityReport> {
    let s = sft_bipartite(x, d)?;
    let scale = max_abs(&s).max(1.0);
    let dev = max_abs_diff(&s, &s.adjoint()) / scale;
    let min = min_eigenvalue(&hermitian_part(&s)) / scale;
    Ok(PositivityReport { min_eigenvalue: min, hermitian_deviation: dev, pass: min >= -tol && dev <= 1e-10 })
}

/// The hypothesis F(−H) ⪰ 0.
pub fn sft_neg_positivity(h: &BipartiteOperator, tol: f64) -> Result<PositivityReport> {
    sft_positivity(&(-&h.m), h.d, tol)
}

/// H = −F⁻¹(P) for a random P ⪰ 0, made self-adjoint by averaging P with its
/// image under factor swap and transpose, and scaled to unit operator norm.
pub fn pullback_hamiltonian<R: Rng>(rng: &mut R, d: usize) -> BipartiteOperator {
    let n = d * d;
    let p = random_psd(rng, n);
    let swap = CMat::from_fn(n, n, |r, s| if s == (r % d) * d + r / d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    let p = (&p + &swap * p.transpose() * &swap).scale(0.5);
    let h = -sft_bipartite_inverse(&p, d).expect("square operator");
    let norm = crate::linalg::singular_values(&h).into_iter().fold(0.0, f64::max).max(1e-300);
    BipartiteOperator { d, m: h.unscale(norm) }
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaReport {
    pub beta: f64,
    pub sft_min_eigenvalue: f64,
    pub pairing_min: f64,
    pub pairing_max_imag: f64,
    pub pictures_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RpCertificate {
    pub hypothesis: PositivityReport,
    pub betas: Vec<BetaReport>,
    pub pass: bool,
}

/// ⟨θV⊗V, X·θW⊗W⟩ − ⟨V⊗θW, F(X)·V⊗θW⟩.
pub fn pictures_identity_error(x: &CMat, v: &CVec, w: &CVec, d: usize) -> Result<f64> {
    let ctx = ReflectionContext::new(d);
    let lhs = ctx.doubled(v).dotc(&(x * ctx.doubled(w)));
    let u = kron_vec(v, &ctx.theta(w));
    let rhs = u.dotc(&(sft_bipartite(x, d)? * &u));
    Ok((lhs - rhs).norm())
}

fn beta_report<R: Rng>(rng: &mut R, h: &BipartiteOperator, beta: f64, samples: usize, tol: f64) -> Result<BetaReport> {
    let d = h.d;
    let g = h.gibbs(beta)?;
    let scale = max_abs(&g).max(1.0);
    let pos = sft_positivity(&g, d, tol)?;
    let mut pairing_min = f64::INFINITY;
    let mut max_imag = 0.0f64;
    let mut pictures = 0.0f64;
    for _ in 0..samples {
        let v = random_unit_vector(rng, d);
        let w = random_unit_vector(rng, d);
        let ctx = ReflectionContext::new(d);
        let x = ctx.doubled(&v);
        let val = x.dotc(&(&g * &x)) / scale;
        pairing_min = pairing_min.min(val.re);
        max_imag = max_imag.max(val.im.abs());
        pictures = pictures.max(pictures_identity_error(&g, &v, &w, d)? / scale);
    }
    let pass = pos.pass && pairing_min >= -tol && max_imag <= tol && pictures <= tol;
    Ok(BetaReport { beta, sft_min_eigenvalue: pos.min_eigenvalue, pairing_min, pairing_max_imag: max_imag, pictures_error: pictures, pass })
}

/// Metrics are relative to the largest entry of e^(−βH).
pub fn rp_certificate<R: Rng>(rng: &mut R, h: &BipartiteOperator, betas: &[f64], samples: usize, tol: f64) -> Result<RpCertificate> {
    let hypothesis = sft_neg_positivity(h, tol)?;
    if !hypothesis.pass {
        return Err(Error::CertificateRefused(format!(
            "F(−H) has eigenvalue {:.3e} (hermitian deviation {:.3e})",
            hypothesis.min_eigenvalue, hypothesis.hermitian_deviation
        )));
    }
    let betas = betas.iter().map(|&b| beta_report(rng, h, b, samples, tol)).collect::<Result<Vec<_>>>()?;
    let pass = betas.iter().all(|b| b.pass);
    Ok(RpCertificate { hypothesis, betas, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposedReport {
    pub pairing_min: f64,
    pub pairing_max_imag: f64,
    pub pass: bool,
}

/// H = H₋⊗I + I⊗θ(H₋) + H₀ with H₋ on the Ĥ factor.
pub fn assemble_decomposed(h_minus: &CMat, h0: &BipartiteOperator) -> Result<BipartiteOperator> {
    let d = h0.d;
    if h_minus.nrows() != d || h_minus.ncols() != d {
        return Err(Error::Dimension(format!("H₋ must be {d}x{d}")));
    }
    let theta = h_minus.map(|z| z.conj());
    BipartiteOperator::new(d, kron(h_minus, &identity(d)) + kron(&identity(d), &theta) + &h0.m)
}

pub fn decomposed_rp_check<R: Rng>(
    rng: &mut R,
    h_minus: &CMat,
    h0: &BipartiteOperator,
    betas: &[f64],
    samples: usize,
    tol: f64,
) -> Result<DecomposedReport> {
    if !max_abs_diff(h_minus, &h_minus.adjoint()).le(&1e-10) {
        return Err(Error::Precondition("H₋ must be self-adjoint".into()));
    }
    let hyp = sft_neg_positivity(h0, tol)?;
    if !hyp.pass {
        return Err(Error::CertificateRefused(format!("F(−H₀) has eigenvalue {:.3e}", hyp.min_eigenvalue)));
    }
    let h = assemble_decomposed(h_minus, h0)?;
    let ctx = ReflectionContext::new(h.d);
    let mut pairing_min = f64::INFINITY;
    let mut max_imag = 0.0f64;
    for &beta in betas {
        let g = h.gibbs(beta)?;
        let scale = max_abs(&g).max(1.0);
        for _ in 0..samples {
            let x = ctx.doubled(&random_unit_vector(rng, h.d));
            let val = x.dotc(&(&g * &x)) / scale;
            pairing_min = pairing_min.min(val.re);
            max_imag = max_imag.max(val.im.abs());
        }
    }
    Ok(DecomposedReport { pairing_min, pairing_max_imag: max_imag, pass: pairing_min >= -tol && max_imag <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_hermitian, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn theta_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ctx = ReflectionContext::new(3);
        let v = crate::linalg::random_vector(&mut rng, 3);
        let w = crate::linalg::random_vector(&mut rng, 3);
        let t = ctx.theta_extended(&kron_vec(&v, &w));
        assert!((t - kron_vec(&ctx.theta(&w), &ctx.theta(&v))).norm() < 1e-12);
        let x = crate::linalg::random_vector(&mut rng, 9);
        let y = crate::linalg::random_vector(&mut rng, 9);
        assert!((ctx.theta_extended(&ctx.theta_extended(&x)) - &x).norm() < 1e-12);
        // antiunitary: ⟨θx, θy⟩ = conj⟨x, y⟩
        let a = ctx.theta_extended(&x).dotc(&ctx.theta_extended(&y));
        assert!((a - x.dotc(&y).conj()).norm() < 1e-12);
    }

    #[test]
    fn pairing_boundaries() {
        let h = BipartiteOperator::zero(3);
        let v = QuditKet::basis(3, 1);
        assert!((rp_pairing(&v, &v, &h, 1.0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let mut bad = BipartiteOperator::zero(2);
        bad.m[(0, 1)] = Complex64::new(1.0, 0.0);
        let v = QuditKet::basis(2, 0);
        assert!(matches!(rp_pairing(&v, &v, &bad, 1.0), Err(Error::Precondition(_))));
        assert!(sft_neg_positivity(&BipartiteOperator::zero(2), 1e-9).unwrap().pass);
    }

    #[test]
    fn pictures_identity_is_exact_linear_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 2..=4 {
            for _ in 0..50 {
                let x = random_matrix(&mut rng, d * d);
                let v = crate::linalg::random_vector(&mut rng, d);
                let w = crate::linalg::random_vector(&mut rng, d);
                assert!(pictures_identity_error(&x, &v, &w, d).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn pullback_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=3 {
            for _ in 0..20 {
                let h = pullback_hamiltonian(&mut rng, d);
                assert!(h.is_self_adjoint(1e-12));
                let cert = rp_certificate(&mut rng, &h, &[0.0, 0.1, 1.0, 10.0], 20, 1e-9).unwrap();
                assert!(cert.pass, "{cert:?}");
            }
        }
    }

    #[test]
    fn random_hamiltonians_are_refused() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let refused = (0..20)
            .filter(|_| {
                let h = BipartiteOperator::new(2, random_hermitian(&mut rng, 4)).unwrap();
                matches!(rp_certificate(&mut rng, &h, &[1.0], 5, 1e-9), Err(Error::CertificateRefused(_)))
            })
            .count();
        assert!(refused >= 15);
    }

    #[test]
    fn decomposed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let hm = random_hermitian(&mut rng, 2);
            let h0 = pullback_hamiltonian(&mut rng, 2);
            let r = decomposed_rp_check(&mut rng, &hm, &h0, &[0.1, 1.0, 10.0], 20, 1e-9).unwrap();
            assert!(r.pass, "{r:?}");
        }
        // diagonal H₋ and no coupling: the pairing is |Σ_k e^(−β h_k)|v_k|²|² form
        let hm = CMat::from_diagonal(&CVec::from_vec(vec![Complex64::new(0.3, 0.0), Complex64::new(-1.2, 0.0)]));
        let h = assemble_decomposed(&hm, &BipartiteOperator::zero(2)).unwrap();
        let v = QuditKet { d: 2, amplitudes: CVec::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]) };
        let got = rp_pairing(&v, &v, &h, 1.0).unwrap();
        let s: f64 = 0.36 * (-0.3f64).exp() + 0.64 * 1.2f64.exp();
        assert!((got - Complex64::new(s * s, 0.0)).norm() < 1e-12);
    }
}
