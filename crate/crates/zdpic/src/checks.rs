//! Check suites behind the command line: each returns [`CheckReport`]s.
//!
//! Every sample draws from its own stream `split_seed(seed, "<id>/d<d>", i)`.
//! Default tolerances are per check; `tol` in [`RunConfig`] replaces them all.

use num_complex::Complex64;
use rand::Rng;

use crate::braids::{
    braid_images, braid_invariance_check, braid_relation_check, product_state, random_neutral_density, restrict_grades,
    AlgebraState, ParafermionRep,
};
use crate::diagram::{perturb, random_box_word, random_word, DiagramSum, Randomized};
use crate::error::{Error, Result};
use crate::linalg::{kron, max_abs_diff, random_hermitian, random_matrix, random_unit_vector, CMat};
use crate::matrix::{clock_shift, diagram_to_entries, diagram_to_matrix, pauli_pictures, projection_diagram, TwoBox};
use crate::mtc::{pointed_zd_category, verify_6j_duality, FusionCategoryData, Tuple};
use crate::qfa::{
    bi_shift, biprojection, entropic_up_check, hausdorff_young_check, p_norm,
    random_neutral, random_neutral_psd, renyi_entropy, schur_positivity_check, von_neumann_entropy,
};
use crate::quon::{minimal_maximal_pair_check, quon_relations, states_check};
use crate::report::{stream, CheckReport, Params};
use crate::rp::{decomposed_rp_check, pullback_hamiltonian, rp_certificate};
use crate::scalar::{make_ring, ExactScalar};
use crate::sft::{fourier_of_projection, replay_proof_chain, sft_2box, sft_2box_inverse, sft_2box_via_diagrams};

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub d: Option<u32>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl RunConfig {
    fn params(&self, d: u32, samples: usize, tol: f64) -> Params {
        Params { d: Some(d), p: None, beta: None, seed: self.seed, samples, tol: self.tol.unwrap_or(tol) }
    }

    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    /// `defaults` unless a single d was asked for; `supports` guards it.
    fn dims(&self, defaults: &[u32], supports: impl Fn(u32) -> bool, what: &str) -> Result<Vec<u32>> {
        match self.d {
            None => Ok(defaults.to_vec()),
            Some(d) if d >= 2 && supports(d) => Ok(vec![d]),
            Some(d) => Err(Error::InvalidParameter(format!("{what} is not defined for d={d}"))),
        }
    }
}

fn exact(cfg: &RunConfig, id: &str, statement: &str, d: u32, samples: usize, failures: u64) -> CheckReport {
    let mut p = cfg.params(d, samples, 0.0);
    p.tol = 0.0;
    CheckReport::new(id, statement, p).count("failures", failures).violation(failures as f64)
}

// --- rewrite engine -------------------------------------------------------

pub fn rewrite_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for d in cfg.dims(&[2, 3, 4, 5, 6], |_| true, "rewriting")? {
        let ring = make_ring(d)?;
        let mut bad = 0u64;
        if DiagramSum::<ExactScalar>::circle(&ring, 0).eval_closed()? != ExactScalar::delta_pow(&ring, 1) {
            bad += 1;
        }
        for k in 1..d as i64 {
            if !DiagramSum::<ExactScalar>::circle(&ring, k).eval_closed()?.is_zero() {
                bad += 1;
            }
        }
        out.push(exact(cfg, "rewrite.loop-values", "neutral loop is δ, charged loops vanish", d, 0, bad));

        let id = "rewrite.normal-form";
        let n = cfg.samples(1000);
        let mut bad = 0u64;
        for i in 0..n {
            let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
            let top = 2 * rng.random_range(0..3);
            let w = random_word(&mut rng, d, top, 14, 8);
            let s = DiagramSum::<ExactScalar>::single(&ring, w.clone());
            let nf = s.normalize();
            if nf.normalize() != nf {
                bad += 1;
            }
            for j in 0..10 {
                let alt = if j % 2 == 0 {
                    s.normalize_with(&mut Randomized(&mut rng))
                } else {
                    let (pw, m) = perturb(&mut rng, &ring, &w, 4);
                    DiagramSum::single(&ring, pw).scaled_monomial(m).normalize_with(&mut Randomized(&mut rng))
                };
                if alt != nf {
                    bad += 1;
                }
            }
        }
        out.push(exact(cfg, id, "normal form is idempotent and independent of rewrite order", d, n, bad));
    }
    Ok(out)
}

// --- string Fourier transform ---------------------------------------------

pub fn sft_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for d in cfg.dims(&[2, 3, 5, 8], |_| true, "the SFT suite")? {
        let ring = make_ring(d)?;
        let mut dev = 0.0f64;
        for k in 0..d as usize {
            let p = TwoBox::unit(d, k, k);
            let want = fourier_of_projection(d, k);
            dev = dev.max(max_abs_diff(&sft_2box(&p)?.m, &want));
            dev = dev.max(max_abs_diff(&sft_2box_via_diagrams(&p)?.m, &want));
        }
        out.push(
            CheckReport::new("sft.dft-agreement", "rotation of P_k is the DFT of the indicator of k", cfg.params(d, 0, 1e-10))
                .violation(dev),
        );

        let failed = (0..d as i64).flat_map(|k| replay_proof_chain(&ring, k)).filter(|s| !s.holds).count();
        out.push(exact(cfg, "sft.proof-chain", "each rewrite step of the DFT agreement holds exactly", d, 0, failed as u64));

        let id = "sft.inverse";
        let n = cfg.samples(20);
        let mut dev = 0.0f64;
        for i in 0..n {
            let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
            let a = TwoBox::new(d, random_matrix(&mut rng, d as usize))?;
            let scale = a.m.norm().max(1.0);
            dev = dev.max(max_abs_diff(&sft_2box_inverse(&sft_2box(&a)?)?.m, &a.m) / scale);
            dev = dev.max(max_abs_diff(&sft_2box(&sft_2box_inverse(&a)?)?.m, &a.m) / scale);
            dev = dev.max((sft_2box(&a)?.m.norm() - a.m.norm()).abs() / scale);
        }
        out.push(CheckReport::new(id, "the SFT is unitary with a two-sided inverse", cfg.params(d, n, 1e-10)).violation(dev));
    }
    Ok(out)
}

// --- dictionary and gates -------------------------------------------------

fn random_box_sum<R: Rng>(rng: &mut R, ring: &crate::scalar::Ring) -> DiagramSum<Complex64> {
    let d = ring.d();
    let terms = (0..3)
        .map(|_| (crate::linalg::gaussian(rng), random_box_word(rng, d, 2, 2, 8, 6)))
        .collect();
    DiagramSum::from_terms(ring, 2, 2, terms).expect("2-box words")
}

pub fn gates_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for d in cfg.dims(&[2, 3, 4, 5, 6, 7, 8, 9], |_| true, "the gate suite")? {
        let ring = make_ring(d)?;
        let p = pauli_pictures(&ring);
        let x = diagram_to_matrix(&p.x)?.m;
        let z = diagram_to_matrix(&p.z)?.m;
        let id = CMat::identity(d as usize, d as usize);
        let pow = |m: &CMat| (0..d).fold(id.clone(), |acc, _| acc * m);
        let (zc, xs) = clock_shift(d);
        let dev = max_abs_diff(&pow(&x), &id)
            .max(max_abs_diff(&pow(&z), &id))
            .max(max_abs_diff(&(&z * &x), &(&x * &z * ring.q())))
            .max(max_abs_diff(&x, &xs))
            .max(max_abs_diff(&z, &zc));
        out.push(CheckReport::new("gates.pauli", "pictured X, Z are shift and clock: X^d = Z^d = 1, ZX = qXZ", cfg.params(d, 0, 1e-12)).violation(dev));

        let mut total = DiagramSum::<ExactScalar>::zero(&ring, 2, 2);
        for k in 0..d as i64 {
            total = total.add(&projection_diagram(&ring, k))?;
        }
        let e = diagram_to_entries(&total)?;
        let bad = e
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().enumerate().map(move |(k, v)| (j, k, v)))
            .filter(|(j, k, v)| **v != if j == k { ExactScalar::one(&ring) } else { ExactScalar::zero(&ring) })
            .count();
        out.push(exact(cfg, "gates.resolution-of-identity", "Σ_k P_k has the identity matrix, exactly", d, 0, bad as u64));

        if d <= 6 || cfg.d.is_some() {
            let cid = "gates.homomorphism";
            let n = cfg.samples(200);
            let mut dev = 0.0f64;
            for i in 0..n {
                let mut rng = stream(cfg.seed, &format!("{cid}/d{d}"), i as u64);
                let a = random_box_sum(&mut rng, &ring);
                let b = random_box_sum(&mut rng, &ring);
                let (ma, mb) = (diagram_to_matrix(&a)?.m, diagram_to_matrix(&b)?.m);
                let scale = (ma.norm() * mb.norm()).max(1.0);
                dev = dev.max(max_abs_diff(&diagram_to_matrix(&a.compose_vertical(&b)?)?.m, &(&ma * &mb)) / scale);
                dev = dev.max(max_abs_diff(&diagram_to_matrix(&a.adjoint())?.m, &ma.adjoint()) / ma.norm().max(1.0));
            }
            out.push(CheckReport::new(cid, "the dictionary respects composition and adjoint", cfg.params(d, n, 1e-10)).violation(dev));
        }
    }
    Ok(out)
}

// --- quantum Fourier analysis ---------------------------------------------

pub const HY_EXPONENTS: [f64; 5] = [1.0, 1.2, 1.5, 1.8, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfaCheck {
    HausdorffYoung,
    Schur,
    Entropy,
    Uncertainty,
}

const QFA_DIMS: [u32; 5] = [2, 3, 4, 5, 6];

pub fn qfa_suite(cfg: &RunConfig, which: QfaCheck) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for d in cfg.dims(&QFA_DIMS, |_| true, "quantum Fourier analysis")? {
        match which {
            QfaCheck::HausdorffYoung => {
                let id = "qfa.hausdorff-young";
                let n = cfg.samples(500);
                for &p in &HY_EXPONENTS {
                    let mut slack = f64::INFINITY;
                    for i in 0..n {
                        let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
                        let a = random_neutral(&mut rng, d);
                        slack = slack.min(hausdorff_young_check(&a, p, 0.0)?.slack);
                    }
                    let mut params = cfg.params(d, n, 1e-8);
                    params.p = Some(p);
                    out.push(
                        CheckReport::new(id, "‖F(A)‖_q ≤ δ^(1−2/p)‖A‖_p on random neutral 2-boxes", params)
                            .slack(slack)
                            .violation((-slack).max(0.0)),
                    );
                }
                let mut worst = 0.0f64;
                let mut count = 0u64;
                for order in (1..=d).filter(|h| d % h == 0) {
                    let b = biprojection(d, order)?;
                    for g in 0..d as usize {
                        for chi in 0..d as usize {
                            let s = bi_shift(&b, g, chi);
                            for &p in &HY_EXPONENTS {
                                worst = worst.max(hausdorff_young_check(&s, p, 0.0)?.slack.abs());
                                count += 1;
                            }
                        }
                    }
                }
                out.push(
                    CheckReport::new("qfa.bi-shift-extremizers", "every bi-shift of every biprojection attains equality", cfg.params(d, 0, 1e-8))
                        .count("cases", count)
                        .violation(worst),
                );
            }
            QfaCheck::Schur => {
                let id = "qfa.schur";
                let n = cfg.samples(500);
                let mut min = f64::INFINITY;
                let mut bad = 0u64;
                let tol = cfg.tol.unwrap_or(1e-9);
                for i in 0..n {
                    let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
                    let a = random_neutral_psd(&mut rng, d);
                    let b = random_neutral_psd(&mut rng, d);
                    let (m, pass) = schur_positivity_check(&a, &b, tol)?;
                    min = min.min(m);
                    bad += !pass as u64;
                }
                out.push(
                    CheckReport::new(id, "convolution of positive 2-boxes is positive", cfg.params(d, n, 1e-9))
                        .slack(min)
                        .count("violations", bad)
                        .violation((-min).max(0.0)),
                );
            }
            QfaCheck::Entropy => {
                let id = "qfa.renyi-limit";
                let n = cfg.samples(500).min(100);
                let mut dev = 0.0f64;
                for i in 0..n {
                    let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
                    let a = random_neutral(&mut rng, d);
                    let a = TwoBox { d, m: a.m.unscale(p_norm(&a, 1.0)?) };
                    dev = dev.max((renyi_entropy(&a, 1.0 + 1e-5)? - von_neumann_entropy(&a)?).abs());
                }
                out.push(CheckReport::new(id, "h_p tends to the von Neumann entropy as p → 1", cfg.params(d, n, 1e-4)).violation(dev));

                let tol = cfg.tol.unwrap_or(1e-10);
                let r = minimal_maximal_pair_check(d, tol)?;
                let dev = r.zero_entropy.abs().max((r.bell_entropy - (d as f64).ln()).abs()).max(r.exchange_error).max(r.flat_modulus_error);
                out.push(
                    CheckReport::new("qfa.minimal-maximal", "P_0 and its Fourier image carry entanglement entropies 0 and log d", cfg.params(d, 0, 1e-10))
                        .value("zeroEntropy", r.zero_entropy)
                        .value("bellEntropy", r.bell_entropy)
                        .violation(dev)
                        .with_pass(r.pass && dev <= tol),
                );
            }
            QfaCheck::Uncertainty => {
                let id = "qfa.entropic-uncertainty";
                let n = cfg.samples(500);
                let mut worst = f64::INFINITY;
                for i in 0..n {
                    let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
                    let a = random_neutral(&mut rng, d);
                    let r = entropic_up_check(&a, 0.0)?;
                    worst = worst.min(r.lhs - r.rhs);
                }
                out.push(
                    CheckReport::new(id, "h(|A|²) + h(|F(A)|²) ≥ 2‖A‖₂²(log δ − log ‖A‖₂²)", cfg.params(d, n, 1e-8))
                        .slack(worst)
                        .violation((-worst).max(0.0)),
                );
            }
        }
    }
    Ok(out)
}

// --- reflection positivity ------------------------------------------------

pub const RP_BETAS: [f64; 3] = [0.1, 1.0, 10.0];

pub fn rp_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for d in cfg.dims(&[2, 3], |_| true, "reflection positivity")? {
        let id = "rp.certificate";
        let n = cfg.samples(100);
        let tol = cfg.tol.unwrap_or(1e-9);
        let inner = 10;
        let mut refused = 0u64;
        let mut per_beta = vec![(f64::INFINITY, f64::INFINITY, 0.0f64, 0.0f64); RP_BETAS.len()];
        for i in 0..n {
            let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
            let h = pullback_hamiltonian(&mut rng, d as usize);
            match rp_certificate(&mut rng, &h, &RP_BETAS, inner, tol) {
                Ok(cert) => {
                    for (acc, b) in per_beta.iter_mut().zip(&cert.betas) {
                        acc.0 = acc.0.min(b.sft_min_eigenvalue);
                        acc.1 = acc.1.min(b.pairing_min);
                        acc.2 = acc.2.max(b.pictures_error);
                        acc.3 = acc.3.max(b.pairing_max_imag);
                    }
                }
                Err(Error::CertificateRefused(_)) => refused += 1,
                Err(e) => return Err(e),
            }
        }
        for (&beta, &(eig, pair, pics, imag)) in RP_BETAS.iter().zip(&per_beta) {
            let mut params = cfg.params(d, n, 1e-9);
            params.beta = Some(beta);
            out.push(
                CheckReport::new("rp.sft-positivity", "F(e^(−βH)) ⪰ 0 for pulled-back H", params.clone())
                    .slack(eig)
                    .count("refused", refused)
                    .violation(if refused > 0 { f64::INFINITY } else { (-eig).max(0.0) }),
            );
            params.samples = n * inner;
            out.push(
                CheckReport::new("rp.pairing", "⟨θV⊗V, e^(−βH) θV⊗V⟩ ≥ 0", params.clone())
                    .slack(pair)
                    .value("maxImag", imag)
                    .violation((-pair).max(imag).max(0.0)),
            );
            out.push(
                CheckReport::new("rp.pictures-identity", "the pairing equals the SFT-side pairing", params)
                    .violation(pics),
            );
        }
    }
    if cfg.d.is_none() || cfg.d == Some(2) {
        let d = 2;
        let id = "rp.decomposed";
        let n = cfg.samples(50).min(50);
        let tol = cfg.tol.unwrap_or(1e-9);
        let mut worst = f64::INFINITY;
        let mut imag = 0.0f64;
        for i in 0..n {
            let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
            let hm = random_hermitian(&mut rng, d);
            let h0 = pullback_hamiltonian(&mut rng, d);
            let r = decomposed_rp_check(&mut rng, &hm, &h0, &RP_BETAS, 20, tol)?;
            worst = worst.min(r.pairing_min);
            imag = imag.max(r.pairing_max_imag);
        }
        out.push(
            CheckReport::new(id, "H₋⊗1 + 1⊗θ(H₋) + H₀ is reflection positive", cfg.params(d as u32, n, 1e-9))
                .slack(worst)
                .value("maxImag", imag)
                .violation((-worst).max(imag).max(0.0)),
        );
    }
    Ok(out)
}

// --- quon states ----------------------------------------------------------

pub fn states_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for d in cfg.dims(&[2, 3, 5, 7], |_| true, "the quon suite")? {
        let q = quon_relations(d)?;
        let dev = q
            .unitarity
            .max(q.order_d)
            .max(q.gamma_commutators)
            .max(q.gamma_picture)
            .max(q.xyz_on_neutral)
            .max(q.zx_relation_on_neutral);
        let tol = cfg.tol.unwrap_or(1e-12);
        out.push(
            CheckReport::new("states.quon-relations", "quon Paulis commute with γ and XYZ = ζ on the rank-d neutral space", cfg.params(d, 0, 1e-12))
                .count("neutralRank", q.neutral_rank as u64)
                .violation(dev)
                .with_pass(dev <= tol && q.neutral_rank == d as usize),
        );
        let s = states_check(d)?;
        let dev = s.ghz_vs_closed_form.max(s.max_vs_closed_form).max(s.max_vs_fourier_ghz).max(s.single_qudit_reduction);
        out.push(
            CheckReport::new("states.ghz-max", "GHZ and Max contract to their closed forms and are Fourier dual", cfg.params(d, 0, 1e-10))
                .value("ghzVsClosedForm", s.ghz_vs_closed_form)
                .value("maxVsFourierGhz", s.max_vs_fourier_ghz)
                .value("reduction", s.single_qudit_reduction)
                .violation(dev),
        );
    }
    Ok(out)
}

// --- braided parafermions -------------------------------------------------

pub fn braids_suite(cfg: &RunConfig, pairs: usize, degree_cap: usize) -> Result<Vec<CheckReport>> {
    if !(3..=8).contains(&pairs) {
        return Err(Error::InvalidParameter(format!("--pairs must lie in 3..=8, got {pairs}")));
    }
    let mut out = Vec::new();
    for d in cfg.dims(&[2, 3, 4, 5], |d| d <= 16, "the parafermion suite")? {
        let rep = match ParafermionRep::new(d, pairs) {
            Ok(r) => r,
            Err(_) => {
                out.push(exact(cfg, "braids.generators", "generators satisfy c^d = 1 and c_j c_k = q c_k c_j exactly", d, 0, 1));
                continue;
            }
        };
        let bad = rep.validate().is_err() as u64;
        out.push(exact(cfg, "braids.generators", "generators satisfy c^d = 1 and c_j c_k = q c_k c_j exactly", d, 0, bad));

        let r = braid_relation_check(&rep)?;
        let dev = r.transport_one.max(r.transport_two).max(r.yang_baxter).max(r.far_commutation).max(r.reidemeister_two);
        let mut params = cfg.params(d, 0, 1e-10);
        params.samples = pairs;
        out.push(
            CheckReport::new("braids.relations", "double braids transport charges and satisfy the braid relations", params)
                .value("transportOne", r.transport_one)
                .value("transportTwo", r.transport_two)
                .value("yangBaxter", r.yang_baxter)
                .value("yangBaxterPhaseOverPi", r.yang_baxter_phase)
                .value("farCommutation", r.far_commutation)
                .value("reidemeisterTwo", r.reidemeister_two)
                .value("determinantPhase", r.determinant_phase)
                .violation(dev),
        );

        let images = braid_images(&rep, degree_cap)?;
        let id = "braids.product-invariance";
        let n = cfg.samples(20).min(20);
        let mut dev = 0.0f64;
        for i in 0..n {
            let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), i as u64);
            let rho = random_neutral_density(&mut rng, d);
            dev = dev.max(braid_invariance_check(&product_state(&rho, pairs)?, &rep, &images));
            if d == 4 {
                // grades {0, 2} are isotropic for d = 4
                let m = crate::linalg::random_psd(&mut rng, 4);
                let m = restrict_grades(&m, 2);
                let t = crate::linalg::trace(&m).re;
                dev = dev.max(braid_invariance_check(&product_state(&m.unscale(t), pairs)?, &rep, &images));
            }
        }
        out.push(
            CheckReport::new(id, "product states of neutral ρ are braid invariant on all low-degree monomials", cfg.params(d, n, 1e-10))
                .count("monomials", images.monomials.len() as u64)
                .violation(dev),
        );

        let id = "braids.non-product-detected";
        let mut rng = stream(cfg.seed, &format!("{id}/d{d}"), 0);
        let rho = random_neutral_density(&mut rng, d);
        let mut dense = CMat::identity(1, 1);
        for _ in 0..pairs {
            dense = kron(&dense, &rho);
        }
        let dim = dense.nrows();
        let psi = random_unit_vector(&mut rng, dim);
        let mixed = dense.scale(0.7) + (&psi * psi.adjoint()).scale(0.3);
        let gap = braid_invariance_check(&AlgebraState::Density(mixed), &rep, &images);
        let floor = 1e-4;
        out.push(
            CheckReport::new(id, "a perturbed non-product state is not braid invariant", cfg.params(d, 1, floor))
                .value("deviation", gap)
                .slack(gap - floor)
                .violation((floor - gap).max(0.0))
                .with_pass(gap > floor),
        );
    }
    Ok(out)
}

// --- 6j self-duality ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Zd,
    Fibonacci,
}

fn sixj_report(cfg: &RunConfig, cat: &FusionCategoryData, d: u32, tuples: &[Tuple], tol: f64) -> CheckReport {
    let r = verify_6j_duality(cat, tuples);
    CheckReport::new("sixj.duality", "|6j|² of the rotated tuple is the S-transform of |6j|²", cfg.params(d, tuples.len(), tol))
        .value("categoryRank", cat.rank() as f64)
        .count(&format!("tuples.{}", cat.name), tuples.len() as u64)
        .violation(r.max_deviation)
}

pub fn sixj_suite(cfg: &RunConfig, category: Category, tuples: Option<usize>) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    match category {
        Category::Zd => {
            for d in cfg.dims(&[3, 5, 7], |d| d % 2 == 1, "the pointed category")? {
                let cat = pointed_zd_category(d)?;
                let list: Vec<Tuple> = match tuples {
                    None if d == 3 => cat.all_tuples().collect(),
                    n => cat.random_tuples(&mut stream(cfg.seed, &format!("sixj/d{d}"), 0), n.unwrap_or(1000)),
                };
                out.push(sixj_report(cfg, &cat, d, &list, 1e-9));
            }
        }
        Category::Fibonacci => out.push(fibonacci_report(cfg, tuples)?),
    }
    Ok(out)
}

#[cfg(feature = "fibonacci")]
fn fibonacci_report(cfg: &RunConfig, tuples: Option<usize>) -> Result<CheckReport> {
    let cat = crate::mtc::fibonacci_category()?;
    let list: Vec<Tuple> = match tuples {
        None => cat.all_tuples().collect(),
        Some(n) => cat.random_tuples(&mut stream(cfg.seed, "sixj/fibonacci", 0), n),
    };
    let mut r = sixj_report(cfg, &cat, 2, &list, 1e-8);
    r.params.d = None;
    r.check_id = "sixj.duality-fibonacci".into();
    Ok(r)
}

#[cfg(not(feature = "fibonacci"))]
fn fibonacci_report(_: &RunConfig, _: Option<usize>) -> Result<CheckReport> {
    Err(Error::InvalidParameter("built without the `fibonacci` feature".into()))
}

// --- everything -----------------------------------------------------------

/// All suites. With a fixed d, suites that do not cover it are skipped.
pub fn all_suites(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let mut add = |r: Result<Vec<CheckReport>>| -> Result<()> {
        match r {
            Ok(v) => {
                out.extend(v);
                Ok(())
            }
            Err(Error::InvalidParameter(_)) if cfg.d.is_some() => Ok(()),
            Err(e) => Err(e),
        }
    };
    add(rewrite_suite(cfg))?;
    add(sft_suite(cfg))?;
    add(gates_suite(cfg))?;
    for w in [QfaCheck::HausdorffYoung, QfaCheck::Schur, QfaCheck::Entropy, QfaCheck::Uncertainty] {
        add(qfa_suite(cfg, w))?;
    }
    add(rp_suite(cfg))?;
    add(states_suite(cfg))?;
    add(braids_suite(cfg, 4, 2))?;
    add(sixj_suite(cfg, Category::Zd, None))?;
    if cfg!(feature = "fibonacci") && cfg.d.is_none() {
        add(sixj_suite(cfg, Category::Fibonacci, None))?;
    }
    Ok(out)
}

/// Value of a closed document, or its normal form.
pub fn eval_document(doc: &crate::document::DiagramDocument) -> Result<(Option<ExactScalar>, crate::document::DiagramDocument)> {
    let sum = doc.to_sum()?;
    let nf = crate::document::DiagramDocument::from_sum(&sum);
    let value = if sum.top() == 0 && sum.bottom() == 0 { Some(sum.eval_closed()?) } else { None };
    Ok((value, nf))
}
