//! 6j self-duality for pointed categories (and Fibonacci with the feature).
use zdpic::mtc::{pointed_zd_category, verify_6j_duality};

fn main() -> zdpic::Result<()> {
    let cat = pointed_zd_category(3)?;
    let all: Vec<_> = cat.all_tuples().collect();
    let r = verify_6j_duality(&cat, &all);
    println!("{}: {} tuples, max deviation {:.1e}", r.category, r.tuples, r.max_deviation);
    #[cfg(feature = "fibonacci")]
    {
        let fib = zdpic::mtc::fibonacci_category()?;
        println!("pentagon solution F[τ,τ] = {:.12}", zdpic::mtc::fibonacci_f()?);
        let all: Vec<_> = fib.all_tuples().collect();
        println!("Fibonacci: max deviation {:.1e}", verify_6j_duality(&fib, &all).max_deviation);
    }
    Ok(())
}
