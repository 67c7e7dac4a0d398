//! Convolution keeps positive 2-boxes positive.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdpic::qfa::{convolution, random_neutral_psd, schur_positivity_check};

fn main() -> zdpic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_neutral_psd(&mut rng, 4);
    let b = random_neutral_psd(&mut rng, 4);
    println!("A * B =\n{:.4}", convolution(&a, &b)?.m);
    let (min, ok) = schur_positivity_check(&a, &b, 1e-9)?;
    println!("relative min eigenvalue {min:.4e}, positive: {ok}");
    Ok(())
}
