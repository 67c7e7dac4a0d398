//! Closed diagrams evaluate to exact ring elements.
use zdpic::diagram::DiagramSum;
use zdpic::scalar::{make_ring, ExactScalar};

fn main() -> zdpic::Result<()> {
    for d in [2, 3, 4, 5] {
        let ring = make_ring(d)?;
        let neutral: DiagramSum = DiagramSum::circle(&ring, 0);
        let charged: DiagramSum = DiagramSum::circle(&ring, 1);
        let two = neutral.compose_horizontal(&neutral)?;
        println!(
            "d={d}  ζ={:.3}  loop={}  charged loop={}  two loops={}",
            ring.zeta(),
            neutral.eval_closed()?,
            charged.eval_closed()?,
            two.eval_closed()?
        );
        assert_eq!(two.eval_closed()?, ExactScalar::integer(&ring, d as i64));
    }
    Ok(())
}
