//! Diagram sums as JSON documents.
use zdpic::diagram::DiagramSum;
use zdpic::document::DiagramDocument;
use zdpic::matrix::unit_diagram;
use zdpic::scalar::make_ring;

fn main() -> zdpic::Result<()> {
    let ring = make_ring(3)?;
    let s: DiagramSum = unit_diagram(&ring, 1, 2).add(&DiagramSum::identity(&ring, 2))?;
    let doc = DiagramDocument::from_sum(&s);
    let text = doc.to_json();
    println!("{text}");
    let back = DiagramDocument::parse(&text)?;
    assert_eq!(back, doc);
    assert!(back.to_sum()?.equivalent(&s));
    let circle = DiagramDocument::neutral_circle(3)?;
    println!("circle evaluates to {}", circle.to_sum()?.eval_closed()?);
    Ok(())
}
