use beq_core::verify::{run_criterion, Grid, CRITERIA};

fn main() {
    let grid = Grid::full();
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, _) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let r = run_criterion(id, &grid).expect("known criterion");
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} ({}) [{:.1}s]: {}", r.id, r.name, r.seconds, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
