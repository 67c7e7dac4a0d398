//! Normal forms do not depend on the order rewrites are applied in.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdpic::diagram::{perturb, random_word, DiagramSum, Randomized};
use zdpic::scalar::{make_ring, ExactScalar};

fn main() -> zdpic::Result<()> {
    let ring = make_ring(4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w = random_word(&mut rng, 4, 2, 12, 6);
    let s: DiagramSum<ExactScalar> = DiagramSum::single(&ring, w.clone());
    let nf = s.normalize();
    println!("word         {w}");
    for (c, t) in nf.terms() {
        println!("normal form  {c} · {t}");
    }
    for _ in 0..5 {
        let (edited, m) = perturb(&mut rng, &ring, &w, 6);
        let again = DiagramSum::single(&ring, edited).scaled_monomial(m).normalize_with(&mut Randomized(&mut rng));
        assert_eq!(again, nf);
    }
    println!("5 edited words, random rewrite orders: same normal form");
    Ok(())
}
