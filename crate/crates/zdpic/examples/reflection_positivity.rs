//! Hamiltonians pulled back from positive operators give positive pairings.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdpic::rp::{pullback_hamiltonian, rp_certificate, sft_neg_positivity};

fn main() -> zdpic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = pullback_hamiltonian(&mut rng, 3);
    println!("F(-H) min eigenvalue {:.3e}", sft_neg_positivity(&h, 1e-9)?.min_eigenvalue);
    let cert = rp_certificate(&mut rng, &h, &[0.1, 1.0, 10.0], 50, 1e-9)?;
    for b in &cert.betas {
        println!(
            "beta={:<4} F(e^-βH) min eig {:.3e}  pairing min {:.3e}  identity error {:.1e}",
            b.beta, b.sft_min_eigenvalue, b.pairing_min, b.pictures_error
        );
    }
    println!("certificate passes: {}", cert.pass);
    Ok(())
}
