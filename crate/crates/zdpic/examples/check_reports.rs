//! Running a suite from code and printing its report file.
use zdpic::checks::{sft_suite, RunConfig};
use zdpic::report::{split_seed, ReportFile};

fn main() -> zdpic::Result<()> {
    let cfg = RunConfig { d: Some(3), seed: 7, ..RunConfig::default() };
    let file = ReportFile::new("sft", cfg.seed, sft_suite(&cfg)?);
    for r in &file.reports {
        println!("{}", r.summary_line());
    }
    println!("sample 0 of sft.inverse/d3 uses seed {}", split_seed(7, "sft.inverse/d3", 0));
    print!("{}", file.to_json_lines());
    Ok(())
}
