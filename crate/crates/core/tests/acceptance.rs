use std::time::Instant;

use segre_veldkamp::verify::{Context, CRITERIA};

fn main() {
    let ctx = Context::new();
    let mut failed = 0;
    for id in 1..=CRITERIA {
        let start = Instant::now();
        let check = ctx.run(id);
        if !check.passed {
            failed += 1;
        }
        println!("{check} ({:.1}s)", start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", CRITERIA - failed, CRITERIA);
}
