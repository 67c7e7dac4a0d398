//! Norm inequality for the SFT and its extremizers.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdpic::qfa::{bi_shift, biprojection, hausdorff_young_check, random_neutral};

fn main() -> zdpic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = 6;
    for p in [1.0, 1.5, 2.0] {
        let worst = (0..200)
            .map(|_| hausdorff_young_check(&random_neutral(&mut rng, d), p, 1e-8).map(|r| r.slack))
            .collect::<zdpic::Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        println!("p={p}: smallest slack over 200 random boxes {worst:.3e}");
    }
    for order in [1, 2, 3, 6] {
        let b = biprojection(d, order)?;
        let s = bi_shift(&b, 1, 2);
        println!("subgroup of order {order}, shifted: slack {:.1e}", hausdorff_young_check(&s, 1.5, 1e-8)?.slack);
    }
    Ok(())
}
